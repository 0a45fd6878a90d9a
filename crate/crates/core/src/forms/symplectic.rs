use crate::graded::{odd, Pairing};
use crate::lie::{Alphabet, Derivation, PointedDiffeo, TensorElement};
use crate::linalg;
use crate::scalar::Scalar;

use super::cyclic::CyclicZeroForm;
use super::one::OneForm;
use super::two::TwoForm;
use super::{sign, FormError};

/// Constant 2-form Σ c_{gh} dg dh.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConstantTwoForm {
    form: TwoForm,
}

impl ConstantTwoForm {
    pub fn new(form: TwoForm) -> Result<Self, FormError> {
        if !form.is_constant() {
            return Err(FormError::NotConstant);
        }
        Ok(ConstantTwoForm { form })
    }

    pub fn form(&self) -> &TwoForm {
        &self.form
    }

    /// Total degree (each d counts +1).
    pub fn degree(&self, alpha: &Alphabet) -> Option<i64> {
        self.form.degree(alpha)
    }

    /// κ(dg dh) = (−1)^{|g|} [g ⊗ h − (−1)^{|g||h|} h ⊗ g], as a matrix B with
    /// B[a][b] the value on the dual basis pair (a, b).
    pub fn kappa(&self, alpha: &Alphabet) -> Vec<Vec<Scalar>> {
        let r = alpha.rank();
        let mut b = vec![vec![Scalar::zero(); r]; r];
        for ((_, g, h), c) in self.form.terms() {
            let (g, h) = (*g as usize, *h as usize);
            let og = alpha.is_odd(g as u8);
            let oh = alpha.is_odd(h as u8);
            b[g][h] += c * &sign(og ^ (og && oh));
            b[h][g] -= &(c * &sign(og));
        }
        b
    }

    /// Inverse of κ on graded skew forms: B[h][g] = −(−1)^{|g||h|} B[g][h].
    pub fn kappa_inv(alpha: &Alphabet, b: &[Vec<Scalar>]) -> Result<Self, FormError> {
        let r = alpha.rank();
        for g in 0..r {
            for h in 0..r {
                let s = sign(alpha.is_odd(g as u8) && alpha.is_odd(h as u8));
                if b[h][g] != -(&b[g][h] * &s) {
                    return Err(FormError::NotSkew(g, h));
                }
            }
        }
        let mut form = TwoForm::zero();
        for g in 0..r {
            let og = alpha.is_odd(g as u8);
            for h in g..r {
                let oh = alpha.is_odd(h as u8);
                let c = if g == h {
                    &b[g][g] * &Scalar::from_frac(1, 2)
                } else {
                    &b[g][h] * &sign(og ^ (og && oh))
                };
                form.add_basis(alpha, Vec::new(), g as u8, h as u8, c);
            }
        }
        Ok(ConstantTwoForm { form })
    }

    /// The 2-form whose κ is B(a, b) = (−1)^{|a|(|b|+1)} ⟨a, b⟩.
    pub fn from_pairing(alpha: &Alphabet, pairing: &Pairing) -> Result<Self, FormError> {
        let r = alpha.rank();
        let b: Vec<Vec<Scalar>> = (0..r)
            .map(|a| {
                let a_odd = !alpha.is_odd(a as u8);
                (0..r)
                    .map(|c| pairing.get(a, c) * &sign(a_odd && alpha.is_odd(c as u8)))
                    .collect()
            })
            .collect();
        Self::kappa_inv(alpha, &b)
    }

    pub fn is_nondegenerate(&self, alpha: &Alphabet) -> bool {
        !linalg::determinant(&self.kappa(alpha)).is_zero()
    }

    /// Matrix P with i_ξ(ω) = Σ_h (Σ_g P[h][g] ξ(g)) ⊗ dh for every ξ.
    pub fn phi_matrix(&self, alpha: &Alphabet) -> Vec<Vec<Scalar>> {
        let r = alpha.rank();
        let mut p = vec![vec![Scalar::zero(); r]; r];
        for ((_, g, h), c) in self.form.terms() {
            let (g, h) = (*g as usize, *h as usize);
            p[h][g] += c.clone();
            let s = sign(!alpha.is_odd(g as u8) && !alpha.is_odd(h as u8));
            p[g][h] += c * &s;
        }
        p
    }
}

/// A nondegenerate constant 2-form together with the data for Φ and Υ.
#[derive(Clone, Debug)]
pub struct Symplectic {
    alpha: Alphabet,
    omega: ConstantTwoForm,
    p: Vec<Vec<Scalar>>,
    p_inv: Vec<Vec<Scalar>>,
}

impl Symplectic {
    pub fn new(alpha: &Alphabet, omega: ConstantTwoForm) -> Result<Self, FormError> {
        let p = omega.phi_matrix(alpha);
        let p_inv = linalg::inverse(&p).ok_or(FormError::Degenerate)?;
        Ok(Symplectic {
            alpha: alpha.clone(),
            omega,
            p,
            p_inv,
        })
    }

    pub fn from_pairing(alpha: &Alphabet, pairing: &Pairing) -> Result<Self, FormError> {
        Self::new(alpha, ConstantTwoForm::from_pairing(alpha, pairing)?)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alpha
    }

    pub fn omega(&self) -> &ConstantTwoForm {
        &self.omega
    }

    /// Total degree of ω.
    pub fn omega_degree(&self) -> i64 {
        self.omega.degree(&self.alpha).unwrap_or(0)
    }

    /// Φ(ξ) = i_ξ(ω).
    pub fn phi(&self, xi: &Derivation) -> OneForm {
        let mut f = OneForm::zero();
        for h in 0..self.alpha.rank() {
            for g in 0..self.alpha.rank() {
                let c = &self.p[h][g];
                if !c.is_zero() {
                    f.add_scaled(&OneForm::from_coefficient(xi.image(g as u8), h as u8), c);
                }
            }
        }
        f
    }

    /// Φ^{-1}; the result has degree |α| − |ω| + 1.
    pub fn phi_inv(&self, a: &OneForm) -> Result<Derivation, FormError> {
        let r = self.alpha.rank();
        if a.is_zero() {
            return Ok(Derivation::zero(r, 0));
        }
        let deg = a.degree(&self.alpha).ok_or(FormError::Inhomogeneous)? - self.omega_degree() + 1;
        let coeffs: Vec<TensorElement> = (0..r as u8).map(|h| a.coefficient(h)).collect();
        let images = (0..r)
            .map(|g| {
                let mut x = TensorElement::zero();
                for (h, l) in coeffs.iter().enumerate() {
                    x.add_scaled(l, &self.p_inv[g][h]);
                }
                x
            })
            .collect();
        Derivation::new(&self.alpha, images, deg).map_err(|_| FormError::Inhomogeneous)
    }

    /// Υ(β) = (−1)^{|β|} Φ^{-1}(dβ).
    pub fn upsilon(&self, beta: &CyclicZeroForm) -> Result<Derivation, FormError> {
        if beta.is_zero() {
            return Ok(Derivation::zero(self.alpha.rank(), 0));
        }
        let deg = beta.degree(&self.alpha).ok_or(FormError::Inhomogeneous)?;
        let xi = self.phi_inv(&beta.differential(&self.alpha))?;
        Ok(xi.scale(&sign(odd(deg))))
    }

    /// Υ^{-1}(ξ) = (−1)^{|β|} β with β the Euler primitive of Φ(ξ).
    pub fn upsilon_inv(&self, xi: &Derivation) -> Result<CyclicZeroForm, FormError> {
        let res = self.symplectic_residual(xi);
        if !res.is_zero() {
            return Err(FormError::NotSymplectic(res.display(&self.alpha)));
        }
        let beta = self.phi(xi).euler_homotopy(&self.alpha)?;
        let deg = xi.degree() + self.omega_degree() - 2;
        Ok(beta.scale(&sign(odd(deg))))
    }

    /// L_ξ(ω); zero iff ξ is symplectic.
    pub fn symplectic_residual(&self, xi: &Derivation) -> TwoForm {
        self.omega.form.lie_derivative(&self.alpha, xi, None)
    }

    /// φ^*(ω') − ω through order `max_order`, with ω' = ω.
    pub fn symplectomorphism_residual(&self, phi: &PointedDiffeo, max_order: usize) -> TwoForm {
        self.omega.form.pullback(&self.alpha, phi, max_order).sub(&self.omega.form.truncate(max_order))
    }
}

/// φ^*(ω') − ω for two constant forms on the same generators.
pub fn symplectomorphism_residual(
    alpha: &Alphabet,
    phi: &PointedDiffeo,
    omega: &ConstantTwoForm,
    omega_prime: &ConstantTwoForm,
    max_order: usize,
) -> TwoForm {
    omega_prime
        .form()
        .pullback(alpha, phi, max_order)
        .sub(&omega.form().truncate(max_order))
}
