use crate::graded::{odd, Algebra};
use crate::scalar::Scalar;

use super::derivation::Derivation;
use super::tensor::{Alphabet, TensorElement};
use super::LieError;

/// Quadratic part m_2 dual to the product:
/// m_2(g_k) = ½ Σ_{i,j} (−1)^{|x_i|} a^k_{ij} [g_i, g_j].
pub fn m2_from_product(alg: &Algebra, alpha: &Alphabet) -> Derivation {
    let r = alg.rank();
    let mut images = vec![TensorElement::zero(); r];
    let half = Scalar::from_frac(1, 2);
    for (&(i, j, k), a) in alg.product.entries() {
        let c = &(&half * a) * &Scalar::sign(odd(alg.basis.degree(i)));
        let br = TensorElement::bracket(alpha, &TensorElement::generator(i as u8), &TensorElement::generator(j as u8));
        images[k].add_scaled(&br, &c);
    }
    Derivation::from_parts_unchecked(images, 1)
}

/// True when every generator image avoids the unit letter.
pub fn is_normalised(xi: &Derivation, alpha: &Alphabet) -> bool {
    match alpha.unit() {
        Some(u) => xi.avoids_letter(u),
        None => false,
    }
}

/// Minimal C_n-structure m = m_2 + … + m_{n−1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnStructure {
    m: Derivation,
    level: usize,
}

impl CnStructure {
    /// Parts must have degree 1 and orders in 2..=level−1.
    pub fn new(m: Derivation, level: usize) -> Result<Self, LieError> {
        if !m.is_zero() && m.degree() != 1 {
            return Err(LieError::PartDegree(m.degree()));
        }
        for o in m.orders() {
            if o < 2 || o + 1 > level {
                return Err(LieError::PartOrder {
                    order: o,
                    max: level - 1,
                });
            }
        }
        Ok(CnStructure { m, level })
    }

    pub fn field(&self) -> &Derivation {
        &self.m
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn part(&self, i: usize) -> Derivation {
        self.m.order_part(i)
    }

    /// ½[m,m] restricted to orders ≤ level; zero iff m is a C_level-structure.
    pub fn residual(&self, alpha: &Alphabet) -> Derivation {
        let sq = Derivation::bracket(alpha, &self.m, &self.m, Some(self.level));
        sq.scale(&Scalar::from_frac(1, 2))
    }

    pub fn with_part(&self, part: &Derivation) -> CnStructure {
        CnStructure {
            m: self.m.add(part),
            level: self.level + 1,
        }
    }

    /// Unital shape: m_2 agrees with the product's (which carries ad τ − τ²∂_τ)
    /// and higher parts are normalised.
    pub fn is_unital_shaped(&self, alg: &Algebra, alpha: &Alphabet) -> bool {
        if alpha.unit().is_none() {
            return false;
        }
        if self.part(2) != m2_from_product(alg, alpha) {
            return false;
        }
        (3..self.level).all(|i| is_normalised(&self.part(i), alpha))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::models;
    use crate::testkit::*;

    fn square_zero_at_three(alg: &Algebra) -> bool {
        let alpha = Alphabet::from_basis(&alg.basis);
        let m = m2_from_product(alg, &alpha);
        Derivation::bracket(&alpha, &m, &m, None).is_zero()
    }

    #[test]
    fn associativity_iff_square_zero() {
        for alg in [
            models::truncated_polynomial(1, 2),
            models::truncated_polynomial(2, 2),
            models::exterior(&[1]),
            models::exterior(&[3]),
            models::exterior(&[1, 1]),
            models::product_of_spheres(2, 2),
        ] {
            assert!(square_zero_at_three(&alg), "{:?}", alg.basis);
            let alpha = Alphabet::from_basis(&alg.basis);
            let m = m2_from_product(&alg, &alpha);
            assert!(m.is_lie(&alpha));
            assert_eq!(Derivation::new(&alpha, m.images().to_vec(), 1).unwrap(), m);
        }
        let bad = models::non_associative();
        assert!(!square_zero_at_three(&bad));
    }

    /// m_2 of Q[x]/x² is ad τ − τ²∂_τ: m(τ) = ½[τ,τ], m(t) = [τ,t].
    #[test]
    fn unital_shape_on_sphere() {
        let alg = models::truncated_polynomial(1, 2);
        let alpha = Alphabet::from_basis(&alg.basis);
        let m = m2_from_product(&alg, &alpha);
        let tau = TensorElement::generator(0);
        let t = TensorElement::generator(1);
        let br = |x: &TensorElement, y: &TensorElement| TensorElement::bracket(&alpha, x, y);
        assert_eq!(m.image(0), &br(&tau, &tau).scale(&Scalar::from_frac(1, 2)));
        assert_eq!(m.image(1), &br(&tau, &t));
    }

    #[test]
    fn non_associative_residual_has_order_three() {
        let alg = models::non_associative();
        let alpha = Alphabet::from_basis(&alg.basis);
        let s = CnStructure::new(m2_from_product(&alg, &alpha), 3).unwrap();
        let r = s.residual(&alpha);
        assert!(!r.is_zero());
        assert_eq!(r.orders(), vec![3]);
    }

    #[test]
    fn malformed_parts_rejected() {
        let alpha = alpha_tau_t();
        let m = random_derivation(&alpha, &mut rng_from(2), 1, 2..=4);
        assert!(matches!(CnStructure::new(m.clone(), 4), Err(LieError::PartOrder { .. })));
        assert!(CnStructure::new(m, 5).is_ok());
        let d0 = nonzero_derivation(&alpha_mixed(), &mut rng_from(2), 0, 2..=2);
        assert!(matches!(CnStructure::new(d0, 4), Err(LieError::PartDegree(0))));
    }
}
