use crossed_spectrum::chars::CharacterTable;
use crossed_spectrum::config::Tolerances;
use crossed_spectrum::group::{FiniteGroup, Permutation};
use crossed_spectrum::gspace::build_permutation_space;
use crossed_spectrum::scenario::{bundled, Scenario};
use crossed_spectrum::so_branching::{verify_branching, weyl_dimension, HighestWeight};
use crossed_spectrum::spectrum::{Spectrum, SpectrumPoint};
use crossed_spectrum::verify::run_verification;
use proptest::prelude::*;

#[test]
fn bundled_scenarios_build() {
    for (name, json) in bundled::ALL {
        let built = Scenario::from_json(json).and_then(|s| s.build());
        assert!(built.is_ok(), "{name}: {:?}", built.err());
    }
}

#[test]
fn scenario_json_round_trips() {
    for (name, json) in bundled::ALL {
        let s = Scenario::from_json(json).unwrap();
        let again = Scenario::from_json(&serde_json::to_string(&s).unwrap()).unwrap();
        let a = s.build().unwrap();
        let b = again.build().unwrap();
        let ra = Spectrum::new(&a.space, a.group_table.clone(), a.settings.tolerances).unwrap().report().unwrap();
        let rb = Spectrum::new(&b.space, b.group_table.clone(), b.settings.tolerances).unwrap().report().unwrap();
        assert_eq!(serde_json::to_string(&ra).unwrap(), serde_json::to_string(&rb).unwrap(), "{name}");
    }
}

#[test]
fn unknown_fields_are_rejected() {
    let text = bundled::S3_R3.replacen("\"version\": 1,", "\"version\": 1, \"colour\": 3,", 1);
    assert!(Scenario::from_json(&text).is_err());
}

#[test]
fn abstract_multiplicities_match_limit_coefficients() {
    // free orbits accumulating at a fixed point: both descriptions must agree
    let abs = Scenario::from_json(bundled::S3_ABSTRACT).unwrap().build().unwrap();
    let abs_spec = Spectrum::new(&abs.space, None, Tolerances::default()).unwrap();
    let fixed = abs.space.stratum_index("fixed").unwrap();

    let concrete = Scenario::from_json(bundled::S3_R3).unwrap().build().unwrap();
    let report = run_verification(&concrete).unwrap();
    let limit = &report.limits[0].check;
    assert!(limit.passed);

    let table = abs_spec.stabilizer_table(fixed);
    assert_eq!(table.len(), limit.recovered.len());
    for (v, &coeff) in limit.recovered.iter().enumerate() {
        let m = abs_spec.upper_multiplicity(SpectrumPoint { stratum: fixed, v }).unwrap();
        assert_eq!(i64::from(m.m_u), coeff, "V{v}");
    }
}

#[test]
fn abstract_models_are_validated() {
    let mut v: serde_json::Value = serde_json::from_str(bundled::S3_ABSTRACT).unwrap();
    // a limit subgroup not contained in the target stabilizer's conjugates
    v["space"]["strata"][1]["stabilizer"] = serde_json::json!([[0]]);
    v["space"]["specializations"][0]["admissible_limits"] = serde_json::json!([[[1]]]);
    assert!(Scenario::from_json(&v.to_string()).unwrap().build().is_err());

    let mut v: serde_json::Value = serde_json::from_str(bundled::S3_ABSTRACT).unwrap();
    v["space"]["specializations"][0]["target"] = serde_json::json!("nowhere");
    assert!(Scenario::from_json(&v.to_string()).unwrap().build().is_err());
}

fn arb_group() -> impl Strategy<Value = FiniteGroup> {
    (3usize..=5)
        .prop_flat_map(|n| prop::collection::vec(Just((0..n).collect::<Vec<usize>>()).prop_shuffle(), 1..=2))
        .prop_map(|gens| {
            let n = gens[0].len();
            let perms: Vec<Permutation> = gens.into_iter().map(|g| Permutation::from_images(g).unwrap()).collect();
            FiniteGroup::from_generators(n, &perms).unwrap()
        })
}

fn arb_weight() -> impl Strategy<Value = HighestWeight> {
    (3usize..=8).prop_flat_map(|n| {
        let k = n / 2;
        prop::collection::vec(0i64..=5, k).prop_map(move |mut e| {
            e.sort_unstable_by(|a, b| b.cmp(a));
            HighestWeight::new(n, e).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn permutation_spaces_respect_the_bounds(g in arb_group()) {
        let space = build_permutation_space(g).unwrap();
        let spec = Spectrum::new(&space, None, Tolerances::default()).unwrap();
        let report = spec.report().unwrap();
        prop_assert!(report.bound_violations().is_empty());
        prop_assert!(spec.corollary_violations(&report).unwrap().is_empty());
        for p in &report.points {
            prop_assert!(p.m_u >= 1 && p.m_u as usize <= p.dim_v);
            prop_assert_eq!(p.fell, p.m_u == 1);
        }
        prop_assert_eq!(report.is_fell, report.non_fell_points.is_empty());
        prop_assert!(spec.char_open_set().is_ok());
    }

    #[test]
    fn character_tables_are_consistent(g in arb_group()) {
        let t = CharacterTable::compute(&g).unwrap();
        prop_assert!(t.validate(&Tolerances::default()).is_ok());
        let sq: usize = (0..t.len()).map(|r| t.dim(r).pow(2)).sum();
        prop_assert_eq!(sq, g.order());
    }

    #[test]
    fn branching_is_multiplicity_free(w in arb_weight()) {
        let c = verify_branching(&w).unwrap();
        prop_assert!(c.passed);
        prop_assert_eq!(c.dimension, weyl_dimension(&w).unwrap());
    }

    #[test]
    fn even_weights_and_their_mirror_have_equal_dimension(a in 0i64..=5, b in 0i64..=5, c in 0i64..=5) {
        let mut e = vec![a, b, c];
        e.sort_unstable_by(|x, y| y.cmp(x));
        let plus = HighestWeight::new(6, e.clone()).unwrap();
        e[2] = -e[2];
        let minus = HighestWeight::new(6, e).unwrap();
        prop_assert_eq!(weyl_dimension(&plus).unwrap(), weyl_dimension(&minus).unwrap());
    }
}
