use super::*;
use crate::lie::{m2_from_product, Derivation, PointedDiffeo};
use crate::testkit::*;
use rand::Rng;

fn alphabets() -> Vec<Alphabet> {
    vec![alpha_tau_t(), alpha_mixed(), alpha_three()]
}

fn field(alpha: &Alphabet, rng: &mut SampleRng, degree: i64) -> Derivation {
    random_derivation(alpha, rng, degree, 1..=2)
}

fn parity(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

fn s(odd: bool) -> Scalar {
    Scalar::sign(odd)
}

#[test]
fn cyclic_rotation_signs() {
    let a = alpha_tau_t();
    let mut f = CyclicZeroForm::zero();
    f.add_word(&a, &[1, 1], Scalar::one());
    f.add_word(&a, &[0, 0], Scalar::one());
    assert!(f.is_zero());
    let mut g = CyclicZeroForm::zero();
    g.add_word(&a, &[1, 0], Scalar::one());
    g.add_word(&a, &[0, 1], Scalar::one());
    // τt = (−1)^{1·1} tτ
    assert!(g.is_zero());
    let m = alpha_mixed();
    let mut h = CyclicZeroForm::zero();
    h.add_word(&m, &[1, 1], Scalar::one());
    assert_eq!(h.terms().len(), 1);
}

#[test]
fn small_differentials() {
    let a = alpha_tau_t();
    let tau = TensorElement::generator(0);
    let t = TensorElement::generator(1);
    let br = TensorElement::bracket(&a, &tau, &t);
    let dbr = LieOneForm::differential(&a, &br).unwrap();
    let mut expect = LieOneForm::zero();
    expect.add_term(vec![0], 1, Scalar::one());
    expect.add_term(vec![1], 0, Scalar::one());
    assert_eq!(dbr, expect);
    assert_eq!(LieOneForm::differential(&a, &TensorElement::word(vec![0, 1], Scalar::one())), Err(FormError::NotLie));
}

#[test]
fn cyclic_differential_matches_leibniz() {
    for (k, a) in alphabets().iter().enumerate() {
        let mut rng = rng_from(10 + k as u64);
        for _ in 0..12 {
            let lx = rng.gen_range(1..=2);
            let ly = rng.gen_range(1..=2);
            let x = random_homogeneous_lie(a, &mut rng, lx);
            let y = random_homogeneous_lie(a, &mut rng, ly);
            if x.is_zero() || y.is_zero() {
                continue;
            }
            let xd = x.degree(a).unwrap();
            let yd = y.degree(a).unwrap();
            let lhs = CyclicZeroForm::pair(a, &x, &y).differential(a);
            let dx_y = OneForm::pair(a, &y, &LieOneForm::split(&x), None).scale(&s(parity((xd + 1) * yd)));
            let x_dy = OneForm::pair(a, &x, &LieOneForm::split(&y), None).scale(&s(parity(xd)));
            assert_eq!(lhs, dx_y.add(&x_dy), "x = {}, y = {}", x.display(a), y.display(a));
        }
    }
}

#[test]
fn differential_of_functions_is_lie_valued() {
    for (k, a) in alphabets().iter().enumerate() {
        let mut rng = rng_from(20 + k as u64);
        for n in 2..=4 {
            let f = random_cyclic_form(a, &mut rng, n, None);
            assert!(f.differential(a).is_lie_valued(a));
        }
    }
}

#[test]
fn one_form_differential_matches_pairing() {
    for (k, a) in alphabets().iter().enumerate() {
        let mut rng = rng_from(30 + k as u64);
        for n in 2..=4 {
            let x = random_homogeneous_lie(a, &mut rng, n - 1);
            let g = rng.gen_range(0..a.rank()) as u8;
            let lhs = OneForm::from_coefficient(&x, g).differential(a);
            let rhs = TwoForm::pair(a, &LieOneForm::split(&x), &LieOneForm::dg(g), None);
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn two_form_pairing_is_graded_symmetric() {
    for (k, a) in alphabets().iter().enumerate() {
        let mut rng = rng_from(40 + k as u64);
        for _ in 0..20 {
            let (np, nq) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let p = random_lie_one_form(a, &mut rng, np);
            let q = random_lie_one_form(a, &mut rng, nq);
            for ((u, g), c) in p.terms() {
                for ((v, h), e) in q.terms() {
                    let mut x = LieOneForm::zero();
                    x.add_term(u.clone(), *g, c.clone());
                    let mut y = LieOneForm::zero();
                    y.add_term(v.clone(), *h, e.clone());
                    let xo = parity(LieOneForm::term_degree(a, u, *g));
                    let yo = parity(LieOneForm::term_degree(a, v, *h));
                    let lhs = TwoForm::pair(a, &x, &y, None);
                    let rhs = TwoForm::pair(a, &y, &x, None).scale(&s(xo && yo));
                    assert_eq!(lhs, rhs, "({u:?},{g}) ({v:?},{h})");
                }
            }
        }
    }
}

#[test]
fn partner_is_an_involution() {
    for a in alphabets() {
        for len in 0..=3 {
            for w in a.words(len) {
                for g in 0..a.rank() as u8 {
                    for h in 0..a.rank() as u8 {
                        let ((w2, g2, h2), o1) = TwoForm::partner(&a, &w, g, h);
                        let (back, o2) = TwoForm::partner(&a, &w2, g2, h2);
                        assert_eq!(back, (w.clone(), g, h));
                        assert!(!(o1 ^ o2));
                    }
                }
            }
        }
    }
}

#[test]
fn d_squared_vanishes() {
    for (k, a) in alphabets().iter().enumerate() {
        let mut rng = rng_from(50 + k as u64);
        for n in 2..=5 {
            let f = random_cyclic_form(a, &mut rng, n, None);
            assert!(f.differential(a).differential(a).is_zero());
        }
    }
}

#[test]
fn cartan_on_functions() {
    for (k, a) in alphabets().iter().enumerate() {
        let mut rng = rng_from(60 + k as u64);
        for degree in -1..=2 {
            for n in 2..=3 {
                let xi = field(a, &mut rng, degree);
                let f = random_cyclic_form(a, &mut rng, n, None);
                let lf = f.lie_derivative(a, &xi, None);
                // L_ξ = i_ξ d on functions
                assert_eq!(lf, f.differential(a).contract(a, &xi, None));
                // d L_ξ = (−1)^{|ξ|} L_ξ d
                let lhs = lf.differential(a);
                let rhs = f.differential(a).lie_derivative(a, &xi, None).scale(&s(xi.is_odd()));
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn cartan_on_one_forms() {
    for (k, a) in alphabets().iter().enumerate() {
        let mut rng = rng_from(70 + k as u64);
        for degree in -1..=2 {
            for n in 1..=3 {
                let xi = field(a, &mut rng, degree);
                let al = random_one_form(a, &mut rng, n);
                let xo = xi.is_odd();
                let l = al.lie_derivative(a, &xi, None);
                let rhs = al
                    .differential(a)
                    .contract(a, &xi, None)
                    .add(&al.contract(a, &xi, None).differential(a).scale(&s(xo)));
                assert_eq!(l, rhs, "xi = {}, alpha = {}", xi.display(a), al.display(a));
                assert!(l.is_lie_valued(a));
                let lhs = l.differential(a);
                let rhs = al.differential(a).lie_derivative(a, &xi, None).scale(&s(xo));
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn cartan_on_two_forms() {
    for (k, a) in alphabets().iter().enumerate() {
        let mut rng = rng_from(80 + k as u64);
        for degree in -1..=2 {
            for n in 2..=4 {
                let xi = field(a, &mut rng, degree);
                // on closed 2-forms L_ξ = (−1)^{|ξ|} d i_ξ
                let om = random_one_form(a, &mut rng, n).differential(a);
                let rhs = om.contract(a, &xi, None).differential(a).scale(&s(xi.is_odd()));
                assert_eq!(om.lie_derivative(a, &xi, None), rhs);
            }
        }
    }
}

#[test]
fn brackets_of_lie_derivatives() {
    for (k, a) in alphabets().iter().enumerate() {
        let mut rng = rng_from(90 + k as u64);
        for (d1, d2) in [(0, 1), (1, 1), (-1, 2), (2, 0)] {
            let xi = field(a, &mut rng, d1);
            let ga = field(a, &mut rng, d2);
            let br = Derivation::bracket(a, &xi, &ga, None);
            let sg = s(xi.is_odd() && ga.is_odd());
            let f = random_cyclic_form(a, &mut rng, 3, None);
            let lhs = f.lie_derivative(a, &ga, None).lie_derivative(a, &xi, None).sub(
                &f.lie_derivative(a, &xi, None).lie_derivative(a, &ga, None).scale(&sg),
            );
            assert_eq!(lhs, f.lie_derivative(a, &br, None));
            let al = random_one_form(a, &mut rng, 2);
            let lhs = al.lie_derivative(a, &ga, None).lie_derivative(a, &xi, None).sub(
                &al.lie_derivative(a, &xi, None).lie_derivative(a, &ga, None).scale(&sg),
            );
            assert_eq!(lhs, al.lie_derivative(a, &br, None));
            let om = random_two_form(a, &mut rng, 2);
            let lhs = om.lie_derivative(a, &ga, None).lie_derivative(a, &xi, None).sub(
                &om.lie_derivative(a, &xi, None).lie_derivative(a, &ga, None).scale(&sg),
            );
            assert_eq!(lhs, om.lie_derivative(a, &br, None));
            // [L_ξ, i_γ] = i_{[ξ,γ]}
            let s2 = s(xi.is_odd() && !ga.is_odd());
            let lhs = al.contract(a, &ga, None).lie_derivative(a, &xi, None).sub(
                &al.lie_derivative(a, &xi, None).contract(a, &ga, None).scale(&s2),
            );
            assert_eq!(lhs, al.contract(a, &br, None));
            let lhs = om.contract(a, &ga, None).lie_derivative(a, &xi, None).sub(
                &om.lie_derivative(a, &xi, None).contract(a, &ga, None).scale(&s2),
            );
            assert_eq!(lhs, om.contract(a, &br, None));
            // [i_ξ, i_γ] = 0
            let s3 = s((xi.is_odd() ^ true) && (ga.is_odd() ^ true));
            let lhs = om.contract(a, &ga, None).contract(a, &xi, None);
            let rhs = om.contract(a, &xi, None).contract(a, &ga, None).scale(&s3);
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn pullback_commutes_with_d_and_composes() {
    for (k, a) in alphabets().iter().enumerate() {
        let mut rng = rng_from(100 + k as u64);
        let n = 4;
        let phi = random_pointed_diffeo(a, &mut rng, n);
        let psi = random_pointed_diffeo(a, &mut rng, n);
        let f = random_cyclic_form(a, &mut rng, 2, None);
        assert_eq!(
            f.pullback(a, &phi, n).differential(a),
            f.differential(a).pullback(a, &phi, n)
        );
        let al = random_one_form(a, &mut rng, 2);
        assert_eq!(
            al.pullback(a, &phi, n).differential(a),
            al.differential(a).pullback(a, &phi, n)
        );
        let om = random_two_form(a, &mut rng, 2);
        assert_eq!(
            om.pullback(a, &phi.compose(&psi), n),
            om.pullback(a, &psi, n).pullback(a, &phi, n)
        );
        assert_eq!(om.pullback(a, &PointedDiffeo::identity(a.rank(), n), n), om.truncate(n));
        // φ^* L_ξ = L_{φξφ⁻¹} φ^*
        let xi = field(a, &mut rng, 0);
        let c = phi.conjugate(a, &xi);
        let lhs = om.lie_derivative(a, &xi, None).pullback(a, &phi, n);
        let rhs = om.pullback(a, &phi, n).lie_derivative(a, &c, Some(n));
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn euler_homotopy_inverts_d() {
    for (k, a) in alphabets().iter().enumerate() {
        let mut rng = rng_from(110 + k as u64);
        let mut f = CyclicZeroForm::zero();
        for n in 2..=4 {
            f.add_scaled(&random_cyclic_form(a, &mut rng, n, None), &Scalar::one());
        }
        assert_eq!(f.differential(a).euler_homotopy(a).unwrap(), f);
        let x = random_homogeneous_lie(a, &mut rng, 3);
        assert_eq!(LieOneForm::split(&x).euler_homotopy(a).unwrap(), x);
    }
    let a = alpha_tau_t();
    let open = OneForm::from_coefficient(&TensorElement::generator(0), 1);
    assert!(matches!(open.euler_homotopy(&a), Err(FormError::NotClosed(_))));
}

#[test]
fn kappa_roundtrip() {
    for alg in frobenius_models() {
        let a = Alphabet::from_basis(&alg.basis);
        let om = ConstantTwoForm::from_pairing(&a, alg.pairing.as_ref().unwrap()).unwrap();
        let b = om.kappa(&a);
        assert_eq!(ConstantTwoForm::kappa_inv(&a, &b).unwrap(), om);
        assert!(om.is_nondegenerate(&a));
    }
}

#[test]
fn product_preserves_the_pairing_form() {
    for alg in frobenius_models() {
        let a = Alphabet::from_basis(&alg.basis);
        let sym = Symplectic::from_pairing(&a, alg.pairing.as_ref().unwrap()).unwrap();
        let m2 = m2_from_product(&alg, &a);
        assert!(sym.symplectic_residual(&m2).is_zero(), "{:?}", alg.basis);
    }
}

#[test]
fn phi_is_contraction_and_upsilon_roundtrips() {
    for (k, alg) in frobenius_models().into_iter().enumerate() {
        let a = Alphabet::from_basis(&alg.basis);
        let sym = Symplectic::from_pairing(&a, alg.pairing.as_ref().unwrap()).unwrap();
        let mut rng = rng_from(120 + k as u64);
        for degree in -2..=2 {
            let xi = field(&a, &mut rng, degree);
            assert_eq!(sym.phi(&xi), sym.omega().form().contract(&a, &xi, None));
            if !xi.is_zero() {
                assert_eq!(sym.phi_inv(&sym.phi(&xi)).unwrap(), xi);
            }
        }
        for n in 2..=4 {
            let w: Vec<u8> = (0..n).map(|_| rng.gen_range(0..a.rank()) as u8).collect();
            let beta = random_cyclic_form(&a, &mut rng, n, Some(a.word_degree(&w)));
            if beta.is_zero() {
                continue;
            }
            let xi = sym.upsilon(&beta).unwrap();
            assert!(sym.symplectic_residual(&xi).is_zero());
            assert_eq!(sym.upsilon_inv(&xi).unwrap(), beta);
            assert_eq!(xi.degree(), beta.degree(&a).unwrap() + 2 - sym.omega_degree());
        }
    }
}

#[test]
fn conjugation_identities() {
    for (k, a) in alphabets().iter().enumerate() {
        let mut rng = rng_from(130 + k as u64);
        let n = 4;
        for degree in -1..=1 {
            let phi = random_pointed_diffeo(a, &mut rng, n);
            let xi = field(a, &mut rng, degree);
            let c = phi.conjugate(a, &xi);
            let al = random_one_form(a, &mut rng, 2);
            assert_eq!(
                al.lie_derivative(a, &xi, None).pullback(a, &phi, n),
                al.pullback(a, &phi, n).lie_derivative(a, &c, Some(n))
            );
            assert_eq!(
                al.contract(a, &xi, None).pullback(a, &phi, n),
                al.pullback(a, &phi, n).contract(a, &c, Some(n)).truncate(n)
            );
            let om = random_two_form(a, &mut rng, 2);
            assert_eq!(
                om.contract(a, &xi, None).pullback(a, &phi, n),
                om.pullback(a, &phi, n).contract(a, &c, Some(n)).truncate(n)
            );
        }
    }
}

#[test]
fn lie_derivative_respects_rotation_classes() {
    for (k, a) in alphabets().iter().enumerate() {
        let mut rng = rng_from(140 + k as u64);
        for n in 2..=4 {
            let degree = rng.gen_range(-1..=1);
            let xi = field(a, &mut rng, degree);
            let w: Vec<u8> = (0..n).map(|_| rng.gen_range(0..a.rank()) as u8).collect();
            let mut rot = w[1..].to_vec();
            rot.push(w[0]);
            // w = g·B = (−1)^{|g||B|} B·g
            let sg = s(a.is_odd(w[0]) && a.word_parity(&w[1..]));
            let lw = xi.apply(a, &TensorElement::word(w.clone(), Scalar::one()));
            let lr = xi.apply(a, &TensorElement::word(rot, sg));
            assert_eq!(CyclicZeroForm::from_tensor(a, &lw), CyclicZeroForm::from_tensor(a, &lr));
        }
    }
}

#[test]
fn d_of_bracket_square_and_euler_examples() {
    let a = alpha_tau_t();
    let t = TensorElement::generator(1);
    let tt = TensorElement::bracket(&a, &t, &t);
    let d = LieOneForm::differential(&a, &tt).unwrap();
    let mut expect = LieOneForm::zero();
    expect.add_term(vec![1], 1, Scalar::from_int(2));
    assert_eq!(d, expect);
    assert_eq!(LieOneForm::zero().euler_homotopy(&a).unwrap(), TensorElement::zero());
    assert_eq!(OneForm::zero().euler_homotopy(&a).unwrap(), CyclicZeroForm::zero());
    let i = LieOneForm::dg(1).contract(&a, &Derivation::euler(2), None);
    assert_eq!(i, t);
}

fn symplectic_models() -> Vec<(crate::graded::Algebra, Alphabet, Symplectic, Derivation)> {
    frobenius_models()
        .into_iter()
        .map(|alg| {
            let a = Alphabet::from_basis(&alg.basis);
            let sym = Symplectic::from_pairing(&a, alg.pairing.as_ref().unwrap()).unwrap();
            let m2 = m2_from_product(&alg, &a);
            (alg, a, sym, m2)
        })
        .collect()
}

#[test]
fn phi_intertwines_differentials() {
    for (k, (_, a, sym, m2)) in symplectic_models().into_iter().enumerate() {
        let mut rng = rng_from(150 + k as u64);
        for degree in -1..=2 {
            let xi = random_derivation(&a, &mut rng, degree, 1..=3);
            let lhs = sym.phi(&Derivation::bracket(&a, &m2, &xi, None));
            let rhs = sym.phi(&xi).lie_derivative(&a, &m2, None);
            assert_eq!(lhs, rhs);
        }
        for n in 2..=4 {
            let f = random_cyclic_form(&a, &mut rng, n, None);
            let mm = f.lie_derivative(&a, &m2, None).lie_derivative(&a, &m2, None);
            assert!(mm.is_zero());
        }
    }
}

#[test]
fn symplectic_flows_preserve_omega() {
    for (k, (_, a, sym, _)) in symplectic_models().into_iter().enumerate() {
        let mut rng = rng_from(160 + k as u64);
        let n = 5;
        for order in 3..=4 {
            let deg = sym.omega_degree() - 2;
            let beta = random_cyclic_form(&a, &mut rng, order, Some(deg));
            if beta.is_zero() {
                continue;
            }
            let gamma = sym.upsilon(&beta).unwrap();
            assert_eq!(gamma.degree(), 0);
            let phi = PointedDiffeo::exp(&a, &gamma, n).unwrap();
            assert!(sym.symplectomorphism_residual(&phi, n).is_zero());
        }
        let id = PointedDiffeo::identity(a.rank(), n);
        assert!(sym.symplectomorphism_residual(&id, n).is_zero());
    }
}
