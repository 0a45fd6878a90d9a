use std::collections::BTreeMap;

use crate::lie::{Alphabet, Derivation, PointedDiffeo, TensorElement, Word};
use crate::scalar::Scalar;

use super::cyclic::CyclicZeroForm;
use super::lie_one::LieOneForm;
use super::two::TwoForm;
use super::{accumulate, display_terms, right_ad_word, sign, FormError};

/// de Rham 1-form Σ_g ℓ_g ⊗ dg with Lie coefficients ℓ_g, stored through the
/// tensor expansion of each ℓ_g.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct OneForm {
    terms: BTreeMap<(Word, u8), Scalar>,
}

impl OneForm {
    pub fn zero() -> Self {
        Self::default()
    }

    /// ℓ ⊗ dg.
    pub fn from_coefficient(l: &TensorElement, g: u8) -> Self {
        let mut f = Self::zero();
        for (w, c) in l.terms() {
            f.add_term(w.clone(), g, c.clone());
        }
        f
    }

    pub fn terms(&self) -> &BTreeMap<(Word, u8), Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, x: Word, g: u8, c: Scalar) {
        accumulate(&mut self.terms, (x, g), c);
    }

    pub fn add_scaled(&mut self, other: &OneForm, c: &Scalar) {
        for ((x, g), a) in &other.terms {
            self.add_term(x.clone(), *g, a * c);
        }
    }

    pub fn add(&self, other: &OneForm) -> OneForm {
        let mut f = self.clone();
        f.add_scaled(other, &Scalar::one());
        f
    }

    pub fn sub(&self, other: &OneForm) -> OneForm {
        let mut f = self.clone();
        f.add_scaled(other, &Scalar::from_int(-1));
        f
    }

    pub fn scale(&self, c: &Scalar) -> OneForm {
        let mut f = Self::zero();
        f.add_scaled(self, c);
        f
    }

    /// Coefficient ℓ_g of dg.
    pub fn coefficient(&self, g: u8) -> TensorElement {
        TensorElement::from_terms(
            self.terms
                .iter()
                .filter(|((_, h), _)| *h == g)
                .map(|((x, _), c)| (x.clone(), c.clone())),
        )
    }

    pub fn term_degree(alpha: &Alphabet, x: &[u8], g: u8) -> i64 {
        alpha.word_degree(x) + alpha.degree(g) + 1
    }

    pub fn degree(&self, alpha: &Alphabet) -> Option<i64> {
        super::common_degree(self.terms.keys().map(|(x, g)| Self::term_degree(alpha, x, *g)))
    }

    pub fn truncate(&self, max_order: usize) -> OneForm {
        OneForm {
            terms: self
                .terms
                .iter()
                .filter(|((x, _), _)| x.len() < max_order)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// Part with coefficients of length n − 1.
    pub fn order_part(&self, n: usize) -> OneForm {
        OneForm {
            terms: self
                .terms
                .iter()
                .filter(|((x, _), _)| x.len() + 1 == n)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn orders(&self) -> Vec<usize> {
        let mut o: Vec<usize> = self.terms.keys().map(|(x, _)| x.len() + 1).collect();
        o.sort_unstable();
        o.dedup();
        o
    }

    /// Every coefficient ℓ_g is a Lie element.
    pub fn is_lie_valued(&self, alpha: &Alphabet) -> bool {
        let gens: std::collections::BTreeSet<u8> = self.terms.keys().map(|(_, g)| *g).collect();
        gens.into_iter().all(|g| self.coefficient(g).is_lie(alpha))
    }

    /// Normalised: coefficients avoid the unit letter.
    pub fn is_normalised(&self, alpha: &Alphabet) -> bool {
        match alpha.unit() {
            Some(t) => self.terms.keys().all(|(x, _)| !x.contains(&t)),
            None => false,
        }
    }

    /// x ⊗ β for a Lie element x and a Lie 1-form β, using
    /// x ⊗ (u ⊗ dh) = (−1)^{|u|} [[x,u_1],…,u_k] ⊗ dh.
    pub fn pair(alpha: &Alphabet, x: &TensorElement, beta: &LieOneForm, max_order: Option<usize>) -> OneForm {
        let mut f = Self::zero();
        let max_len = max_order.map(|m| m.saturating_sub(1));
        for ((u, h), c) in beta.terms() {
            let s = sign(alpha.word_parity(u));
            let y = right_ad_word(alpha, x, u, max_len);
            for (w, a) in y.terms() {
                f.add_term(w.clone(), *h, &(a * c) * &s);
            }
        }
        f
    }

    /// d(ℓ ⊗ dg) = dℓ ⊗ dg.
    pub fn differential(&self, alpha: &Alphabet) -> TwoForm {
        let mut f = TwoForm::zero();
        for ((x, g), c) in &self.terms {
            if let Some((&last, init)) = x.split_last() {
                f.add_basis(alpha, init.to_vec(), last, *g, c.clone());
            }
        }
        f
    }

    /// i_ξ(x ⊗ dg) = (−1)^{(|ξ|−1)|x|} x ⊗ ξ(g).
    pub fn contract(&self, alpha: &Alphabet, xi: &Derivation, max_order: Option<usize>) -> CyclicZeroForm {
        let mut t = TensorElement::zero();
        for ((x, g), c) in &self.terms {
            let s = sign(!xi.is_odd() && alpha.word_parity(x));
            let lhs = TensorElement::word(x.clone(), c * &s);
            t.add_scaled(&lhs.concat(xi.image(*g), max_order), &Scalar::one());
        }
        CyclicZeroForm::from_tensor(alpha, &t)
    }

    /// L_ξ(x ⊗ dg) = ξ(x) ⊗ dg + (−1)^{|ξ||x| + |ξ|} x ⊗ d(ξ(g)).
    pub fn lie_derivative(&self, alpha: &Alphabet, xi: &Derivation, max_order: Option<usize>) -> OneForm {
        let mut f = Self::zero();
        let xo = xi.is_odd();
        let max_len = max_order.map(|m| m.saturating_sub(1));
        for ((x, g), c) in &self.terms {
            let mut xx = TensorElement::zero();
            xi.apply_word(alpha, x, c, max_len, &mut xx);
            for (w, a) in xx.terms() {
                f.add_term(w.clone(), *g, a.clone());
            }
            let img = xi.image(*g);
            if img.is_zero() {
                continue;
            }
            let s = sign(xo && !alpha.word_parity(x));
            let lhs = TensorElement::word(x.clone(), c * &s);
            f.add_scaled(&Self::pair(alpha, &lhs, &LieOneForm::split(img), max_order), &Scalar::one());
        }
        f
    }

    /// φ^*(x ⊗ dg) = φ(x) ⊗ d(φ(g)), truncated at `max_order`.
    pub fn pullback(&self, alpha: &Alphabet, phi: &PointedDiffeo, max_order: usize) -> OneForm {
        let mut f = Self::zero();
        let lim = max_order.saturating_sub(1);
        for ((x, g), c) in &self.terms {
            let px = phi.apply_trunc(&TensorElement::word(x.clone(), c.clone()), lim);
            let pg = phi.apply_trunc(&TensorElement::generator(*g), lim);
            f.add_scaled(&Self::pair(alpha, &px, &LieOneForm::split(&pg), Some(max_order)), &Scalar::one());
        }
        f
    }

    /// i_E(α)/n on each order-n part; fails on forms that are not closed.
    pub fn euler_homotopy(&self, alpha: &Alphabet) -> Result<CyclicZeroForm, FormError> {
        let d = self.differential(alpha);
        if !d.is_zero() {
            return Err(FormError::NotClosed(d.display(alpha)));
        }
        let e = Derivation::euler(alpha.rank());
        let mut beta = CyclicZeroForm::zero();
        for n in self.orders() {
            let part = self.order_part(n).contract(alpha, &e, None);
            beta.add_scaled(&part, &Scalar::from_frac(1, n as i64));
        }
        Ok(beta)
    }

    pub fn display(&self, alpha: &Alphabet) -> String {
        display_terms(&self.terms, |(x, g)| format!("{} ⊗ d{}", alpha.format_word(x), alpha.name(*g)))
    }
}
