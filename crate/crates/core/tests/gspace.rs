use crossed_spectrum::group::{catalog, FiniteGroup, Permutation, Subgroup};
use crossed_spectrum::gspace::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn euclid(xs: &[i64]) -> PointDescriptor {
    PointDescriptor::Euclidean(xs.iter().map(|&x| Rational::from_integer(x)).collect())
}

fn torus(a: Rational, b: Rational) -> PointDescriptor {
    PointDescriptor::torus(vec![a, b])
}

fn orders(space: &StratifiedGSpace) -> Vec<usize> {
    let mut v: Vec<usize> = space.strata().iter().map(|s| s.stabilizer.order()).collect();
    v.sort();
    v
}

#[test]
fn s3_on_r3_has_three_strata() {
    let space = build_permutation_space(catalog::symmetric(3)).unwrap();
    assert_eq!(orders(&space), vec![1, 2, 6]);
    let principal: Vec<_> = space.strata().iter().filter(|s| s.is_principal).collect();
    assert_eq!(principal.len(), 1);
    assert!(principal[0].stabilizer.is_trivial());
    assert!(space.principal_orbit_type().unwrap().unwrap().is_trivial());
}

#[test]
fn trivial_group_on_a_line() {
    let g = FiniteGroup::from_generators(1, &[]).unwrap();
    let space = build_permutation_space(g).unwrap();
    assert_eq!(space.strata().len(), 1);
    assert!(space.strata()[0].stabilizer.is_trivial());
    assert_eq!(space.specializations().count(), 0);
}

#[test]
fn double_transposition_in_s4() {
    let p = Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap();
    let g = FiniteGroup::from_generators(4, &[p]).unwrap();
    let space = build_permutation_space(g.clone()).unwrap();
    for s in space.strata() {
        let x = s.basepoint.coords().unwrap();
        let both = x[0] == x[1] && x[2] == x[3];
        assert_eq!(s.stabilizer.order(), if both { 2 } else { 1 }, "{}", s.id);
        assert!(s.stabilizer.is_trivial() || s.stabilizer == g.whole());
    }
}

#[test]
fn permutation_stabilizers() {
    let g = catalog::symmetric(3);
    let space = build_permutation_space(g.clone()).unwrap();
    assert!(space.stabilizer(&euclid(&[0, 2, 1])).unwrap().is_trivial());
    assert_eq!(space.stabilizer(&euclid(&[0, 0, 0])).unwrap(), g.whole());
    assert!(space.stabilizer(&euclid(&[0, 0])).is_err());
}

#[test]
fn d4_torus_strata() {
    let g = catalog::d4_on_plane();
    let space = build_torus_space(g.clone()).unwrap();
    let full: Vec<&str> = space.strata().iter().filter(|s| s.stabilizer.order() == 8).map(|s| s.id.as_str()).collect();
    assert_eq!(full, vec!["pt(0,0)", "pt(1/2,1/2)"]);
    for s in space.strata() {
        match s.dim {
            Some(1) => assert_eq!(s.stabilizer.order(), 2),
            Some(2) => assert!(s.is_principal && s.stabilizer.is_trivial()),
            _ => {}
        }
        if s.stabilizer.order() < 8 {
            assert!(space.group().subgroup_as_group(&s.stabilizer).0.is_abelian());
        }
    }
    assert_eq!(space.stabilizer(&torus(q(1, 2), q(1, 2))).unwrap(), g.whole());
    assert_eq!(space.stabilizer(&torus(q(-1, 2), q(3, 2))).unwrap(), g.whole());
    assert!(space.principal_orbit_type().unwrap().unwrap().is_trivial());
}

#[test]
fn trivial_torus_is_one_free_stratum() {
    let space = build_torus_space(catalog::trivial_on_plane()).unwrap();
    assert_eq!(space.strata().len(), 1);
    assert!(space.strata()[0].is_principal);
}

#[test]
fn minus_identity_has_four_fixed_points() {
    let space = build_torus_space(catalog::minus_identity_on_plane()).unwrap();
    let mut fixed: Vec<&str> =
        space.strata().iter().filter(|s| s.stabilizer.order() == 2).map(|s| s.id.as_str()).collect();
    fixed.sort();
    assert_eq!(fixed, vec!["pt(0,0)", "pt(0,1/2)", "pt(1/2,0)", "pt(1/2,1/2)"]);
    assert_eq!(space.strata().len(), 5);
}

#[test]
fn admissible_limits_at_the_s3_origin() {
    let g = catalog::symmetric(3);
    let space = build_permutation_space(g.clone()).unwrap();
    let z = space.locate(&euclid(&[0, 0, 0])).unwrap();
    let got = space.admissible_limit_subgroups(z).unwrap();
    let orders: Vec<usize> = got.iter().map(Subgroup::order).collect();
    assert_eq!(orders, vec![1, 2, 2, 2, 6]);
    // the 3-cycle subgroup only fixes the diagonal, whose closure is S3
    assert!(!got.iter().any(|h| h.order() == 3));
}

#[test]
fn rotation_subgroup_is_not_a_limit_in_d4() {
    let g = catalog::d4_on_plane();
    let space = build_torus_space(g.clone()).unwrap();
    let z = space.locate(&torus(q(1, 2), q(1, 2))).unwrap();
    let got = space.admissible_limit_subgroups(z).unwrap();
    let orders: Vec<usize> = got.iter().map(Subgroup::order).collect();
    assert_eq!(orders, vec![1, 2, 2, 2, 2, 8]);
    assert!(got.iter().all(|h| h.order() != 4));
}

#[test]
fn strata_without_incoming_specializations_only_see_themselves() {
    let space = build_permutation_space(catalog::symmetric(3)).unwrap();
    for (i, s) in space.strata().iter().enumerate() {
        if space.specializations().all(|(_, t)| t != i) {
            assert_eq!(space.admissible_limit_subgroups(i).unwrap(), vec![s.stabilizer.clone()]);
        }
    }
}

fn concrete_spaces() -> Vec<StratifiedGSpace> {
    vec![
        build_permutation_space(catalog::symmetric(3)).unwrap(),
        build_permutation_space(catalog::dihedral(4)).unwrap(),
        build_permutation_space(catalog::symmetric(4)).unwrap(),
        build_torus_space(catalog::d4_on_plane()).unwrap(),
        build_torus_space(catalog::minus_identity_on_plane()).unwrap(),
    ]
}

#[test]
fn basepoints_have_the_stored_stabilizer() {
    for space in concrete_spaces() {
        for (i, s) in space.strata().iter().enumerate() {
            assert_eq!(space.stabilizer(&s.basepoint).unwrap(), s.stabilizer, "{}", s.id);
            assert_eq!(space.locate(&s.basepoint).unwrap(), i);
        }
    }
}

#[test]
fn sampled_rays_realise_each_limit_subgroup() {
    for space in concrete_spaces() {
        for s in space.strata() {
            for class in space.direction_classes(&s.basepoint).unwrap() {
                assert!(class.subgroup.is_subgroup_of(&s.stabilizer));
                for eps in [q(1, 8), q(1, 16), q(1, 32)] {
                    let x = s.basepoint.offset(&class.direction, eps).unwrap();
                    assert_eq!(space.stabilizer(&x).unwrap(), class.subgroup, "{} at {eps}", s.id);
                }
            }
        }
    }
}

#[test]
fn admissible_sets_are_conjugation_equivariant() {
    for space in concrete_spaces() {
        let g = space.group();
        for s in space.strata() {
            let here = space.admissible_limits_at(&s.basepoint).unwrap();
            for e in 0..g.order() {
                let moved = space.act(e, &s.basepoint).unwrap();
                let mut expected: Vec<Subgroup> = here.iter().map(|h| g.conjugate_subgroup(e, h)).collect();
                expected.sort();
                assert_eq!(space.admissible_limits_at(&moved).unwrap(), expected);
            }
        }
    }
}

#[test]
fn specialization_is_transitively_closed() {
    for space in concrete_spaces() {
        let pairs: Vec<(usize, usize)> = space.specializations().collect();
        for &(a, b) in &pairs {
            assert_ne!(a, b);
            for &(c, d) in &pairs {
                if b == c {
                    assert!(pairs.contains(&(a, d)));
                }
            }
        }
    }
}

fn s3_two_strata(limits: Vec<Subgroup>) -> crossed_spectrum::Result<StratifiedGSpace> {
    let g = catalog::symmetric(3);
    let strata = vec![
        AbstractStratum { id: "free".into(), stabilizer: g.trivial(), principal: true },
        AbstractStratum { id: "fixed".into(), stabilizer: g.whole(), principal: false },
    ];
    let limits = vec![AbstractLimit { source: "free".into(), target: "fixed".into(), subgroups: limits }];
    build_abstract_space(g, strata, limits)
}

#[test]
fn abstract_two_stratum_space() {
    let g = catalog::symmetric(3);
    let space = s3_two_strata(vec![g.trivial()]).unwrap();
    let z = space.stratum_index("fixed").unwrap();
    assert_eq!(space.admissible_limit_subgroups(z).unwrap(), vec![g.trivial(), g.whole()]);
    assert!(space.principal_orbit_type().unwrap().unwrap().is_trivial());
}

#[test]
fn abstract_inputs_are_validated() {
    let g = catalog::symmetric(3);
    assert!(s3_two_strata(vec![]).is_err());
    assert!(s3_two_strata(vec![g.generate(&[1])]).is_err());

    let single = build_abstract_space(
        g.clone(),
        vec![AbstractStratum { id: "pt".into(), stabilizer: g.whole(), principal: true }],
        vec![],
    )
    .unwrap();
    assert_eq!(single.principal_orbit_type().unwrap().unwrap(), g.whole());

    // a -> b -> c without a -> c
    let t = g.trivial();
    let z2 = g.generate(&[1]);
    let strata = vec![
        AbstractStratum { id: "a".into(), stabilizer: t.clone(), principal: true },
        AbstractStratum { id: "b".into(), stabilizer: z2.clone(), principal: false },
        AbstractStratum { id: "c".into(), stabilizer: g.whole(), principal: false },
    ];
    let limits = vec![
        AbstractLimit { source: "a".into(), target: "b".into(), subgroups: vec![t.clone()] },
        AbstractLimit { source: "b".into(), target: "c".into(), subgroups: vec![z2] },
    ];
    assert!(build_abstract_space(g, strata, limits).is_err());
}
