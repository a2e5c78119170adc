use crossed_spectrum::chars::{CharacterTable, C64};
use crossed_spectrum::config::Tolerances;
use crossed_spectrum::group::{catalog, Permutation};
use crossed_spectrum::gspace::*;
use crossed_spectrum::oracle::limit::*;
use crossed_spectrum::oracle::*;
use nalgebra::DMatrix;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn euclid(xs: &[i64]) -> PointDescriptor {
    PointDescriptor::Euclidean(xs.iter().map(|&x| Rational::from_integer(x)).collect())
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() < tol
}

#[test]
fn identity_indicator_traces() {
    let g = catalog::symmetric(3);
    let space = build_permutation_space(g.clone()).unwrap();
    let x = euclid(&[0, 0, 1]);
    let orbit = Orbit::new(&space, &x).unwrap();
    let h = space.stabilizer(&x).unwrap();
    let table = CharacterTable::for_subgroup(&g, &h).unwrap();
    let a = CrossedElement::identity_indicator(&orbit);
    for row in 0..table.len() {
        let t = trace_formula(&a, 0, &h, &character_values(&table, row)).unwrap();
        assert!(close(t, C64::new(table.dim(row) as f64 / h.order() as f64, 0.0), 1e-12));
        let v = IrrepMatrices::from_table(&g, &table, row, 1e-9).unwrap();
        let m = induced_matrix(&a, 0, &v).unwrap();
        assert_eq!(m.dim(), 3 * table.dim(row));
        let expected = DMatrix::<C64>::identity(m.dim(), m.dim()) * C64::new(1.0 / 6.0, 0.0);
        assert!((m.matrix - expected).norm() < 1e-12);
    }
}

#[test]
fn constant_element_detects_the_trivial_character() {
    let g = catalog::d4_on_plane();
    let space = build_torus_space(g.clone()).unwrap();
    let x = PointDescriptor::torus(vec![q(1, 2), q(1, 2)]);
    let orbit = Orbit::new(&space, &x).unwrap();
    let table = CharacterTable::compute(&g).unwrap();
    let a = CrossedElement::constant(&orbit, C64::new(1.0, 0.0));
    for row in 0..table.len() {
        let t = trace_formula(&a, 0, &g.whole(), &character_values(&table, row)).unwrap();
        let expected = if row == 0 { 1.0 } else { 0.0 };
        assert!(close(t, C64::new(expected, 0.0), 1e-12), "row {row}: {t}");
    }
}

#[test]
fn single_coset_case() {
    let g = catalog::symmetric(3);
    let space = build_permutation_space(g.clone()).unwrap();
    let x = euclid(&[0, 0, 0]);
    let orbit = Orbit::new(&space, &x).unwrap();
    let table = CharacterTable::compute(&g).unwrap();
    let v = IrrepMatrices::from_table(&g, &table, 2, 1e-9).unwrap();
    let f = 0.7;
    let a = CrossedElement::from_fn(&orbit, |s, _| C64::new(if s == 0 { f } else { 0.0 }, 0.0));
    let m = induced_matrix(&a, 0, &v).unwrap();
    let expected = DMatrix::<C64>::identity(2, 2) * C64::new(f / 6.0, 0.0);
    assert!((m.matrix.clone() - expected).norm() < 1e-12);
    assert!(close(m.trace(), C64::new(f / 3.0, 0.0), 1e-12));
}

#[test]
fn matrix_trace_matches_the_formula() {
    let tol = Tolerances::default();
    let cases = vec![
        (build_permutation_space(catalog::symmetric(3)).unwrap(), euclid(&[0, 0, 0])),
        (build_torus_space(catalog::d4_on_plane()).unwrap(), PointDescriptor::torus(vec![q(1, 4), q(0, 1)])),
    ];
    for (space, x) in cases {
        let g = space.group();
        let orbit = Orbit::new(&space, &x).unwrap();
        let s_x = space.stabilizer(&x).unwrap();
        for h in space.subgroups().iter().filter(|h| h.is_subgroup_of(&s_x)) {
            let table = CharacterTable::for_subgroup(g, h).unwrap();
            for row in 0..table.len() {
                let out = verify_trace_formula(&orbit, 0, &table, row, 10, 3, &tol).unwrap();
                assert!(out.passed, "{out:?}");
            }
        }
    }
}

#[test]
fn induced_matrices_form_a_representation() {
    let g = catalog::d4_on_plane();
    let space = build_torus_space(g.clone()).unwrap();
    let x = PointDescriptor::torus(vec![q(1, 2), q(0, 1)]);
    let orbit = Orbit::new(&space, &x).unwrap();
    let h = space.stabilizer(&x).unwrap();
    let table = CharacterTable::for_subgroup(&g, &h).unwrap();
    for row in 0..table.len() {
        let v = IrrepMatrices::from_table(&g, &table, row, 1e-9).unwrap();
        for k in 0..5 {
            let a = CrossedElement::random(&orbit, &mut trial_rng(11, k));
            let b = CrossedElement::random(&orbit, &mut trial_rng(12, k));
            let ra = induced_matrix(&a, 0, &v).unwrap().matrix;
            let rb = induced_matrix(&b, 0, &v).unwrap().matrix;
            let r_star = induced_matrix(&a.star(), 0, &v).unwrap().matrix;
            assert!((r_star - ra.adjoint()).norm() < 1e-12);
            let r_ab = induced_matrix(&a.mul(&b), 0, &v).unwrap().matrix;
            assert!((r_ab - &ra * &rb).norm() < 1e-12);
            let c = C64::new(0.3, -1.2);
            let r_sum = induced_matrix(&a.add(&b.scale(c)), 0, &v).unwrap().matrix;
            assert!((r_sum - (&ra + &rb * c)).norm() < 1e-12);

            let chi = character_values(&table, row);
            let ta = trace_formula(&a, 0, &h, &chi).unwrap();
            let ta_star = trace_formula(&a.star(), 0, &h, &chi).unwrap();
            assert!(close(ta_star, ta.conj(), 1e-12));
        }
    }
}

#[test]
fn positive_elements_have_non_negative_traces() {
    let g = catalog::symmetric(3);
    let space = build_permutation_space(g.clone()).unwrap();
    let x = euclid(&[0, 0, 1]);
    let orbit = Orbit::new(&space, &x).unwrap();
    for h in space
        .subgroups()
        .iter()
        .filter(|h| h.order() <= 2 && h.members().iter().all(|&t| space.act(t, &x).unwrap() == x))
    {
        let table = CharacterTable::for_subgroup(&g, h).unwrap();
        for row in 0..table.len() {
            for k in 0..20 {
                let a = CrossedElement::random_positive(&orbit, &mut trial_rng(5, k));
                let t = trace_formula(&a, 0, h, &character_values(&table, row)).unwrap();
                assert!(t.im.abs() < 1e-12 && t.re > -1e-9);
            }
        }
    }
}

#[test]
fn decomposition_identities() {
    let tol = Tolerances::default();
    let g = catalog::symmetric(3);
    let space = build_permutation_space(g.clone()).unwrap();
    let z = euclid(&[0, 0, 0]);
    let orbit = Orbit::new(&space, &z).unwrap();
    let table_s = CharacterTable::compute(&g).unwrap();
    let table_e = CharacterTable::for_subgroup(&g, &g.trivial()).unwrap();
    assert!(verify_decomposition(&orbit, 0, &table_s, &table_e, 0, 20, 0, &tol).unwrap().passed);
    for row in 0..3 {
        let out = verify_decomposition(&orbit, 0, &table_s, &table_s, row, 5, 0, &tol).unwrap();
        assert!(out.max_residual < 1e-14);
    }

    let g = catalog::d4_on_plane();
    let space = build_torus_space(g.clone()).unwrap();
    let z = PointDescriptor::torus(vec![q(1, 2), q(1, 2)]);
    let orbit = Orbit::new(&space, &z).unwrap();
    let table_s = CharacterTable::compute(&g).unwrap();
    let flip = g.generate(&[g.index_of(&Permutation::from_images(vec![0, 3, 2, 1]).unwrap()).unwrap()]);
    let table_h = CharacterTable::for_subgroup(&g, &flip).unwrap();
    let out = verify_decomposition(&orbit, 0, &table_s, &table_h, 1, 20, 0, &tol).unwrap();
    assert!(out.passed && out.trials == 20, "{out:?}");
}

#[test]
fn conjugation_invariance() {
    let g = catalog::symmetric(3);
    let space = build_permutation_space(g.clone()).unwrap();
    let x = euclid(&[0, 0, 1]);
    let orbit = Orbit::new(&space, &x).unwrap();
    let s_x = space.stabilizer(&x).unwrap();
    let table = CharacterTable::for_subgroup(&g, &s_x).unwrap();
    let swap12 = g.index_of(&Permutation::from_cycles(3, &[&[1, 2]]).unwrap()).unwrap();
    for k in 0..10 {
        let a = CrossedElement::random_positive(&orbit, &mut trial_rng(9, k));
        for row in 0..table.len() {
            assert!(verify_conjugation(&a, 0, &table, row, 0).unwrap() < 1e-15);
            assert!(verify_conjugation(&a, 0, &table, row, swap12).unwrap() < 1e-9);
        }
    }

    let g = catalog::d4_on_plane();
    let space = build_torus_space(g.clone()).unwrap();
    let x = PointDescriptor::torus(vec![q(1, 4), q(0, 1)]);
    let orbit = Orbit::new(&space, &x).unwrap();
    let s_x = space.stabilizer(&x).unwrap();
    let table = CharacterTable::for_subgroup(&g, &s_x).unwrap();
    let rot = g.index_of(&Permutation::from_images(vec![1, 2, 3, 0]).unwrap()).unwrap();
    for k in 0..10 {
        let a = CrossedElement::random_positive(&orbit, &mut trial_rng(9, k));
        for row in 0..table.len() {
            assert!(verify_conjugation(&a, 0, &table, row, rot).unwrap() < 1e-9);
        }
    }
}

fn plateau() -> Profile {
    Profile::Plateau { radius: q(1, 4) }
}

#[test]
fn limit_of_traces_in_the_s3_space() {
    let tol = Tolerances::default();
    let space = build_permutation_space(catalog::symmetric(3)).unwrap();
    let seq = Sequence::along(&euclid(&[0, 0, 0]), &[q(0, 1), q(2, 1), q(1, 1)], &[4, 8, 16, 32, 64]).unwrap();
    let out = limit_trace_check(&space, &seq, 0, &plateau(), 8, 0, &tol).unwrap();
    assert_eq!(out.expected, vec![1, 1, 2]);
    assert_eq!(out.recovered, vec![1, 1, 2]);
    assert!(out.residuals.last().unwrap().residual < 1e-6);
    assert!(out.passed, "{out:?}");
}

#[test]
fn gaussian_residuals_shrink_along_the_sequence() {
    let tol = Tolerances::default();
    let space = build_permutation_space(catalog::symmetric(3)).unwrap();
    let seq = Sequence::along(&euclid(&[0, 0, 0]), &[q(0, 1), q(2, 1), q(1, 1)], &[4, 8, 16, 32, 64]).unwrap();
    let out = limit_trace_check(&space, &seq, 0, &Profile::Gaussian, 8, 0, &tol).unwrap();
    assert!(out.residuals.windows(2).all(|w| w[1].residual < w[0].residual));
    assert_eq!(out.recovered, vec![1, 1, 2]);
}

#[test]
fn constant_sequence_has_zero_residual() {
    let tol = Tolerances::default();
    let space = build_permutation_space(catalog::symmetric(3)).unwrap();
    let z = euclid(&[0, 0, 0]);
    let seq = Sequence { terms: vec![(1, z.clone()), (2, z.clone()), (3, z.clone())], limit: z };
    for row in 0..3 {
        let out = limit_trace_check(&space, &seq, row, &Profile::Gaussian, 6, 1, &tol).unwrap();
        assert!(out.residuals.iter().all(|r| r.residual < 1e-14));
        assert!(out.passed);
    }
}

#[test]
fn limit_along_a_d4_reflection_axis() {
    let tol = Tolerances::default();
    let g = catalog::d4_on_plane();
    let space = build_torus_space(g.clone()).unwrap();
    let z = PointDescriptor::torus(vec![q(1, 2), q(1, 2)]);
    let seq = Sequence::along(&z, &[q(1, 4), q(0, 1)], &[4, 8, 16, 32, 64]).unwrap();
    let out = limit_trace_check(&space, &seq, 0, &plateau(), 10, 2, &tol).unwrap();
    assert_eq!(out.stabilizer_order, 2);
    assert_eq!(out.recovered, out.expected.iter().map(|&m| i64::from(m)).collect::<Vec<_>>());
    assert!(out.passed, "{out:?}");
}

#[test]
fn sequences_must_keep_their_stabilizer() {
    let tol = Tolerances::default();
    let space = build_permutation_space(catalog::symmetric(3)).unwrap();
    let z = euclid(&[0, 0, 0]);
    let seq = Sequence { terms: vec![(1, euclid(&[0, 1, 2])), (2, euclid(&[0, 0, 1]))], limit: z };
    assert!(limit_trace_check(&space, &seq, 0, &plateau(), 4, 0, &tol).is_err());
}
