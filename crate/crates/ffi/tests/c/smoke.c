#include <stdio.h>
#include <stdlib.h>
#include "crossed_spectrum.h"

static char *slurp(const char *path) {
    FILE *f = fopen(path, "rb");
    if (!f) return NULL;
    fseek(f, 0, SEEK_END);
    long n = ftell(f);
    rewind(f);
    char *buf = malloc((size_t)n + 1);
    if (fread(buf, 1, (size_t)n, f) != (size_t)n) { fclose(f); free(buf); return NULL; }
    buf[n] = 0;
    fclose(f);
    return buf;
}

int main(int argc, char **argv) {
    if (argc < 2) return 10;
    char *json = slurp(argv[1]);
    if (!json) return 11;
    CsScenario *s = NULL;
    if (cs_scenario_from_json(json, &s) != CS_STATUS_OK) {
        fprintf(stderr, "%s\n", cs_last_error_message());
        return 12;
    }
    free(json);
    CsReport *r = NULL;
    if (cs_analyze(s, &r) != CS_STATUS_OK) return 13;
    size_t n = 0;
    cs_report_num_points(r, &n);
    unsigned max_mu = 0;
    for (size_t i = 0; i < n; i++) {
        CsPointSummary p;
        if (cs_report_point(r, i, &p) != CS_STATUS_OK) return 14;
        if (p.m_u > max_mu) max_mu = p.m_u;
    }
    bool fell = true;
    cs_report_is_fell(r, &fell, NULL);
    printf("points=%zu max_mu=%u fell=%d\n", n, max_mu, fell ? 1 : 0);
    cs_report_free(r);
    cs_scenario_free(s);

    CsScenario *bad = NULL;
    if (cs_scenario_from_json("{", &bad) != CS_STATUS_PARSE_ERROR || bad != NULL) return 15;
    return 0;
}
