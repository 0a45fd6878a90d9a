use super::*;
use crate::graded::{models, GradedBasis, StructureConstants};
use crate::testkit::*;

fn setting(alg: &Algebra) -> Setting {
    Setting::new(alg)
}

/// A degree-1 symplectic field Υ(β) with β of the given order; zero when
/// a few draws all vanish.
fn symplectic_field(s: &Setting, rng: &mut SampleRng, order: usize) -> Derivation {
    let sym = s.symplectic().unwrap();
    for _ in 0..8 {
        let beta = random_cyclic_form(s.alphabet(), rng, order, Some(sym.omega_degree() - 1));
        if !beta.is_zero() {
            return sym.upsilon(&beta).unwrap();
        }
    }
    Derivation::zero(s.alphabet().rank(), 1)
}

#[test]
fn multimaps_roundtrip() {
    for a in [alpha_tau_t(), alpha_mixed(), alpha_three()] {
        let mut rng = rng_from(11);
        for degree in [-1, 0, 1] {
            let m = random_derivation(&a, &mut rng, degree, 1..=4);
            let mm = Multimaps::from_derivation(&a, &m);
            assert_eq!(mm.to_derivation(&a), m);
        }
    }
}

#[test]
fn quadratic_multimap_is_the_product() {
    for alg in frobenius_models() {
        let s = setting(&alg);
        let mm = Multimaps::from_derivation(s.alphabet(), s.m2());
        assert_eq!(mm.arities(), vec![2]);
        for i in 0..alg.rank() {
            for j in 0..alg.rank() {
                let expect: SparseVec<usize> = alg.product.product(i, j).into_iter().filter(|(_, c)| !c.is_zero()).collect();
                assert_eq!(mm.evaluate(&[i as u8, j as u8]), expect, "{:?} ({i},{j})", alg.basis);
            }
        }
        assert!(check_invariance(s.alphabet(), alg.pairing.as_ref().unwrap(), &mm, 2).is_none());
    }
}

#[test]
fn invariance_agrees_with_symplectic_condition() {
    for (k, alg) in frobenius_models().into_iter().enumerate() {
        let s = setting(&alg);
        let a = s.alphabet();
        let sym = s.symplectic().unwrap();
        let pairing = alg.pairing.as_ref().unwrap();
        let mut rng = rng_from(500 + k as u64);
        let mut both = [0usize; 2];
        for trial in 0..12 {
            let order = 2 + trial % 3;
            let m = if trial % 2 == 0 {
                symplectic_field(&s, &mut rng, order + 1)
            } else {
                random_derivation(a, &mut rng, 1, order..=order)
            };
            let mm = Multimaps::from_derivation(a, &m);
            let inv = check_arity(a, pairing, &mm, order).is_none();
            let symp = sym.symplectic_residual(&m).is_zero();
            assert_eq!(inv, symp, "{:?} order {order} trial {trial}: {}", alg.basis, m.display(a));
            both[usize::from(symp && !m.is_zero())] += 1;
        }
        assert!(both[1] > 0, "{:?}", alg.basis);
    }
}

fn zero_product(degrees: &[i64]) -> Algebra {
    let elements = degrees.iter().enumerate().map(|(i, &d)| (format!("e{i}"), d)).collect();
    Algebra {
        basis: GradedBasis::new(elements, None).unwrap(),
        product: StructureConstants::new(),
        pairing: None,
    }
}

#[test]
fn upsilon_is_a_chain_map() {
    for alg in frobenius_models() {
        let s = setting(&alg);
        let a = s.alphabet();
        let sym = s.symplectic().unwrap();
        let mut rng = rng_from(31);
        for order in 2..=5 {
            for shift in [-2, -1, 0] {
                let beta = random_cyclic_form(a, &mut rng, order, Some(sym.omega_degree() + shift));
                if beta.is_zero() {
                    continue;
                }
                let lhs = sym.upsilon(&beta.lie_derivative(a, s.m2(), None)).unwrap();
                let rhs = Derivation::bracket(a, s.m2(), &sym.upsilon(&beta).unwrap(), None);
                assert!(lhs == rhs || lhs.is_zero() && rhs.is_zero(), "{:?} {}", alg.basis.generator_degrees(), beta.display(a));
            }
        }
    }
}

#[test]
fn strict_structure_is_cn_at_every_level() {
    for alg in frobenius_models() {
        let s = setting(&alg);
        for level in 3..=6 {
            let m = s.structure(s.m2().clone(), level).unwrap();
            assert!(check_cn(&s, &m).unwrap().is_zero());
            if level > 4 || alg.rank() > 4 {
                continue;
            }
            assert!(check_cn(&s, &m).unwrap().is_zero());
            let c = obs_structure(&s, &m, StructureFlavor::Plain).unwrap();
            assert!(c.representative.is_zero());
            assert!(c.is_zero());
            assert_eq!(c.bidegree(), (level + 1, 3));
        }
    }
}

#[test]
fn non_associative_product_is_not_c3() {
    let alg = models::non_associative();
    let s = setting(&alg);
    let m = s.structure(s.m2().clone(), 3).unwrap();
    let r = check_cn(&s, &m).unwrap();
    assert_eq!(r.min_order(), Some(3));
    assert!(matches!(
        obs_structure(&s, &m, StructureFlavor::Plain),
        Err(ObstructionError::NotCn { level: 3, order: 3 })
    ));
}

#[test]
fn wrong_quadratic_part_is_rejected() {
    let alg = models::truncated_polynomial(2, 2);
    let s = setting(&alg);
    let m = s.structure(s.m2().scale(&Scalar::from_int(2)), 4).unwrap();
    assert!(matches!(check_cn(&s, &m), Err(ObstructionError::WrongQuadraticPart)));
}

#[test]
fn obstruction_fields_by_level() {
    let alg = models::product_of_spheres(2, 2);
    let s = setting(&alg);
    let a = s.alphabet();
    let mut rng = rng_from(7);
    let half = Scalar::from_frac(1, 2);
    for _ in 0..3 {
        let m4 = random_cn_structure(&s, &mut rng, 4).unwrap();
        let m3 = m4.part(3);
        let low = s.structure(m4.field().clone(), 3).unwrap();
        assert!(obs_field(a, &low).is_zero());
        let sq = Derivation::bracket(a, &m3, &m3, None).scale(&half);
        assert_eq!(obs_field(a, &m4), sq.order_part(5));
        let too_high = s.structure(m4.field().clone(), 5).unwrap();
        assert!(matches!(check_cn(&s, &too_high).unwrap().min_order(), None | Some(5)));
        let m5 = random_cn_structure(&s, &mut rng, 5).unwrap();
        let expect = Derivation::bracket(a, &m5.part(3), &m5.part(4), None).order_part(6);
        assert_eq!(obs_field(a, &m5), expect);
    }
}

#[test]
fn extension_matches_class_and_solution_dimension() {
    for alg in [models::truncated_polynomial(2, 2), models::product_of_spheres(2, 2), models::exterior(&[1, 1])] {
        let s = setting(&alg);
        let mut rng = rng_from(41);
        for level in [4, 5] {
            let Some(m) = random_cn_structure(&s, &mut rng, level) else { continue };
            let class = obs_structure(&s, &m, StructureFlavor::Plain).unwrap();
            match extend_structure(&s, &m, StructureFlavor::Plain).unwrap() {
                Extension::Extended(e) => {
                    assert!(class.is_zero());
                    assert_eq!(e.solution_dim, e.cocycle_dim);
                    assert_eq!(e.structure.level(), level + 1);
                    assert!(check_cn(&s, &e.structure).unwrap().is_zero());
                }
                Extension::Obstructed(c) => assert!(!c.is_zero()),
            }
        }
    }
}

#[test]
fn zero_product_gives_genuine_obstructions() {
    let alg = zero_product(&[0, 1, 2]);
    let s = setting(&alg);
    let a = s.alphabet();
    let mut seen = 0;
    for seed in 0..40 {
        let mut rng = rng_from(seed);
        let m3 = random_derivation(a, &mut rng, 1, 3..=3);
        let m = s.structure(s.m2().add(&m3), 4).unwrap();
        let obs = obs_field(a, &m);
        match extend_structure(&s, &m, StructureFlavor::Plain).unwrap() {
            Extension::Obstructed(c) => {
                assert!(!obs.is_zero());
                assert!(!c.is_zero());
                assert_eq!(c.bidegree(), (5, 3));
                seen += 1;
            }
            Extension::Extended(e) => {
                assert!(obs.is_zero());
                assert!(e.part.is_zero());
            }
        }
    }
    assert!(seen > 0);
}

#[test]
fn symplectic_extension_follows_plain_extension() {
    for alg in frobenius_models() {
        let s = setting(&alg);
        let a = s.alphabet();
        let mut rng = rng_from(77);
        for _ in 0..3 {
            let Some(m) = random_symplectic_c4(&s, &mut rng) else { continue };
            let plain = obs_structure(&s, &m, StructureFlavor::Plain).unwrap();
            let symp = obs_structure(&s, &m, StructureFlavor::Symplectic).unwrap();
            let Cochain::Zero(beta) = &symp.representative else { panic!() };
            let psi = s.symplectic().unwrap().upsilon(beta).unwrap();
            let Cochain::Field(obs) = &plain.representative else { panic!() };
            assert!(&psi == obs || psi.is_zero() && obs.is_zero());
            assert_eq!(symp.bidegree().0, plain.bidegree().0 + 1);
            if let Extension::Extended(_) = extend_structure(&s, &m, StructureFlavor::Plain).unwrap() {
                match extend_structure(&s, &m, StructureFlavor::Symplectic).unwrap() {
                    Extension::Extended(e) => {
                        assert!(s.symplectic().unwrap().symplectic_residual(e.structure.field()).is_zero());
                        assert!(check_cn(&s, &e.structure).unwrap().is_zero());
                    }
                    Extension::Obstructed(c) => panic!("{:?} {:?}", alg.basis.generator_degrees(), c.bidegree()),
                }
            }
            let _ = a;
        }
    }
}

#[test]
fn conjugated_structures_have_cohomologous_obstructions() {
    for alg in [models::product_of_spheres(2, 2), models::truncated_polynomial(3, 2)] {
        let s = setting(&alg);
        let a = s.alphabet();
        let mut rng = rng_from(5);
        let Some(m) = random_cn_structure(&s, &mut rng, 4) else { continue };
        let gamma = random_derivation(a, &mut rng, 0, 2..=3);
        let phi = PointedDiffeo::exp(a, &gamma, 6).unwrap();
        let conj = s.structure(phi.conjugate(a, m.field()).truncate(3), 4).unwrap();
        assert!(check_cn(&s, &conj).unwrap().is_zero());
        let c1 = obs_structure(&s, &m, StructureFlavor::Plain).unwrap();
        let c2 = obs_structure(&s, &conj, StructureFlavor::Plain).unwrap();
        assert_eq!(c1.is_zero(), c2.is_zero());
    }
}

#[test]
fn identity_morphism_is_unobstructed() {
    let alg = models::product_of_spheres(2, 2);
    let s = setting(&alg);
    let mut rng = rng_from(3);
    let m = random_cn_structure(&s, &mut rng, 5).unwrap();
    let id = PointedDiffeo::identity(alg.rank(), 6);
    let c = obs_morphism(&s, &id, &m, &m, StructureFlavor::Plain).unwrap();
    assert!(c.representative.is_zero());
    match extend_morphism(&s, &id, &m, &m, StructureFlavor::Plain).unwrap() {
        Extension::Extended(e) => assert!(e.gamma.is_zero()),
        Extension::Obstructed(_) => panic!(),
    }
}

#[test]
fn exponential_morphism_obstruction_is_a_coboundary() {
    for alg in [models::product_of_spheres(2, 2), models::truncated_polynomial(3, 2), models::exterior(&[1, 3])] {
        let s = setting(&alg);
        let a = s.alphabet();
        let mut rng = rng_from(9);
        let m = s.strict();
        let level = 5;
        let m = s.structure(m.field().clone(), level).unwrap();
        let gamma = random_derivation(a, &mut rng, 0, 3..=3);
        let phi = PointedDiffeo::exp(a, &gamma, level).unwrap();
        let m_prime = s.structure(phi.conjugate(a, m.field()).truncate(level - 2), level).unwrap();
        if !check_cn(&s, &m_prime).unwrap().is_zero() {
            continue;
        }
        let c = obs_morphism(&s, &phi, &m, &m_prime, StructureFlavor::Plain).unwrap();
        let Cochain::Field(obs) = &c.representative else { panic!() };
        let expect = Derivation::bracket(a, &gamma, s.m2(), None).order_part(level - 1);
        assert_eq!(obs, &expect);
        assert!(c.is_zero());
        match extend_morphism(&s, &phi, &m, &m_prime, StructureFlavor::Plain).unwrap() {
            Extension::Extended(e) => {
                assert!(morphism_residual(a, &e.phi, m.field(), m_prime.field(), level - 1).is_zero());
            }
            Extension::Obstructed(_) => panic!(),
        }
    }
}

fn lift_inputs(s: &Setting, rng: &mut SampleRng, level: usize, exp_conj: bool) -> CnStructure {
    let a = s.alphabet();
    let gamma = random_derivation(a, rng, 0, 2..=level - 2);
    let m = if exp_conj {
        PointedDiffeo::exp(a, &gamma, level).unwrap().conjugate(a, s.m2()).truncate(level - 1)
    } else {
        let g3 = random_derivation(a, rng, 0, 3..=3);
        s.m2().add(&Derivation::bracket(a, s.m2(), &g3, None))
    };
    s.structure(m, level).unwrap()
}

#[test]
fn lift_succeeds_in_every_mode() {
    for alg in [models::truncated_polynomial(1, 2), models::truncated_polynomial(3, 2), models::product_of_spheres(2, 2), models::exterior(&[1, 1])] {
        let s = setting(&alg);
        let sym = s.symplectic().unwrap();
        let mut rng = rng_from(13);
        for exp_conj in [false, true] {
            let m = lift_inputs(&s, &mut rng, 6, exp_conj);
            assert!(check_cn(&s, &m).unwrap().is_zero());
            for unital in [false, true] {
                for two_step in [false, true] {
                    let opts = LiftOptions { unital, two_step };
                    let r = lift_to_symplectic(&s, &m, opts).unwrap();
                    assert!(r.residuals.all_zero(), "{:?} {opts:?}", alg.basis.generator_degrees());
                    assert!(sym.symplectic_residual(r.structure.field()).is_zero());
                    assert!(check_cn(&s, &r.structure).unwrap().is_zero());
                    if unital {
                        assert!(normalised_parts(s.alphabet(), r.structure.field()));
                    }
                }
            }
        }
    }
}

#[test]
fn lift_is_deterministic() {
    let alg = models::product_of_spheres(2, 2);
    let s = setting(&alg);
    let mut rng = rng_from(2);
    let m = lift_inputs(&s, &mut rng, 6, false);
    let a = lift_to_symplectic(&s, &m, LiftOptions::default()).unwrap();
    let b = lift_to_symplectic(&s, &m, LiftOptions::default()).unwrap();
    assert_eq!(a.structure, b.structure);
    assert_eq!(a.phi, b.phi);
}

#[test]
fn lift_rejects_non_cn_input() {
    let mut seen = 0;
    for alg in frobenius_models() {
        let s = setting(&alg);
        let a = s.alphabet();
        let mut rng = rng_from(4);
        for order in 3..=4 {
            let Some(m) = (0..10)
                .map(|_| s.structure(s.m2().add(&random_derivation(a, &mut rng, 1, order..=order)), 5).unwrap())
                .find(|m| !check_cn(&s, m).unwrap().is_zero())
            else {
                continue;
            };
            assert!(matches!(
                lift_to_symplectic(&s, &m, LiftOptions::default()),
                Err(ObstructionError::NotCn { level: 5, .. })
            ));
            seen += 1;
        }
    }
    assert!(seen > 0);
}

#[test]
fn morphism_lift_recovers_symplectic_morphism() {
    for alg in [models::truncated_polynomial(2, 2), models::product_of_spheres(2, 2), models::exterior(&[1, 1])] {
        let s = setting(&alg);
        let a = s.alphabet();
        let mut rng = rng_from(17);
        let level = 6;
        let m = s.structure(s.m2().add(&symplectic_field(&s, &mut rng, 4)), level).unwrap();
        if !check_cn(&s, &m).unwrap().is_zero() {
            continue;
        }
        let gamma = random_derivation(a, &mut rng, 0, 2..=3);
        let phi = PointedDiffeo::exp(a, &gamma, level).unwrap();
        let conj = s.structure(phi.conjugate(a, m.field()).truncate(level - 1), level).unwrap();
        let lifted = lift_to_symplectic(&s, &conj, LiftOptions::default()).unwrap();
        assert!(lifted.residuals.all_zero());
        let total = lifted.phi.compose(&phi);
        let r = lift_morphism_to_symplectic(&s, &total, &m, &lifted.structure, false).unwrap();
        assert!(r.residuals.all_zero(), "{:?}", alg.basis.generator_degrees());
        let sym = s.symplectic().unwrap();
        assert!(sym.symplectomorphism_residual(&r.phi, level).is_zero());
    }
}

#[test]
fn invariance_violation_has_a_witness() {
    let mut found = 0;
    for alg in frobenius_models() {
        let s = setting(&alg);
        let a = s.alphabet();
        let mut rng = rng_from(101);
        for order in 2..=3 {
            let Some(m) = (0..20)
                .map(|_| random_derivation(a, &mut rng, 1, order..=order))
                .find(|m| !s.symplectic().unwrap().symplectic_residual(m).is_zero())
            else {
                continue;
            };
            let mm = Multimaps::from_derivation(a, &m);
            let v = check_invariance(a, alg.pairing.as_ref().unwrap(), &mm, 3).unwrap();
            assert_eq!(v.arity, order);
            assert_eq!(v.tuple.len(), order + 1);
            assert_ne!(v.lhs, v.rhs);
            found += 1;
        }
    }
    assert!(found > 0);
}
