use std::collections::BTreeMap;

use crate::lie::{Alphabet, Derivation, PointedDiffeo, TensorElement, Word};
use crate::scalar::Scalar;

use super::{accumulate, ad_word, display_terms, sign, within, FormError};

/// Lie 1-form Σ A_g ⊗ dg with A_g in the tensor algebra. The key `(u, g)`
/// stands for u ⊗ dg = (−1)^{|u|} ad_u(dg).
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct LieOneForm {
    terms: BTreeMap<(Word, u8), Scalar>,
}

impl LieOneForm {
    pub fn zero() -> Self {
        Self::default()
    }

    /// dg.
    pub fn dg(g: u8) -> Self {
        let mut f = Self::zero();
        f.add_term(Vec::new(), g, Scalar::one());
        f
    }

    pub fn terms(&self) -> &BTreeMap<(Word, u8), Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, u: Word, g: u8, c: Scalar) {
        accumulate(&mut self.terms, (u, g), c);
    }

    pub fn add_scaled(&mut self, other: &LieOneForm, c: &Scalar) {
        for ((u, g), x) in &other.terms {
            self.add_term(u.clone(), *g, x * c);
        }
    }

    pub fn add(&self, other: &LieOneForm) -> LieOneForm {
        let mut f = self.clone();
        f.add_scaled(other, &Scalar::one());
        f
    }

    pub fn sub(&self, other: &LieOneForm) -> LieOneForm {
        let mut f = self.clone();
        f.add_scaled(other, &Scalar::from_int(-1));
        f
    }

    pub fn scale(&self, c: &Scalar) -> LieOneForm {
        let mut f = Self::zero();
        f.add_scaled(self, c);
        f
    }

    /// Total degree of the basis element (u, g).
    pub fn term_degree(alpha: &Alphabet, u: &[u8], g: u8) -> i64 {
        alpha.word_degree(u) + alpha.degree(g) + 1
    }

    pub(crate) fn term_odd(alpha: &Alphabet, u: &[u8], g: u8) -> bool {
        alpha.word_parity(u) ^ alpha.is_odd(g) ^ true
    }

    pub fn degree(&self, alpha: &Alphabet) -> Option<i64> {
        super::common_degree(self.terms.keys().map(|(u, g)| Self::term_degree(alpha, u, *g)))
    }

    pub fn truncate(&self, max_order: usize) -> LieOneForm {
        LieOneForm {
            terms: self
                .terms
                .iter()
                .filter(|((u, _), _)| u.len() < max_order)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// Part of order n (coefficient words of length n − 1).
    pub fn order_part(&self, n: usize) -> LieOneForm {
        LieOneForm {
            terms: self
                .terms
                .iter()
                .filter(|((u, _), _)| u.len() + 1 == n)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn orders(&self) -> Vec<usize> {
        let mut o: Vec<usize> = self.terms.keys().map(|(u, _)| u.len() + 1).collect();
        o.sort_unstable();
        o.dedup();
        o
    }

    /// Normalised: no coefficient word involves the unit letter.
    pub fn is_normalised(&self, alpha: &Alphabet) -> bool {
        match alpha.unit() {
            Some(t) => self.terms.keys().all(|(u, _)| !u.contains(&t)),
            None => false,
        }
    }

    /// dx for a Lie element x.
    pub fn differential(alpha: &Alphabet, x: &TensorElement) -> Result<LieOneForm, FormError> {
        if !x.is_lie(alpha) {
            return Err(FormError::NotLie);
        }
        Ok(Self::split(x))
    }

    /// Last-letter splitting w ↦ w' ⊗ d(w_last); equals d on Lie elements.
    pub(crate) fn split(x: &TensorElement) -> LieOneForm {
        let mut f = Self::zero();
        for (w, c) in x.terms() {
            if let Some((&last, init)) = w.split_last() {
                f.add_term(init.to_vec(), last, c.clone());
            }
        }
        f
    }

    /// Module action x · (u ⊗ dg) = xu ⊗ dg.
    pub fn left_multiply(&self, x: &TensorElement, max_order: Option<usize>) -> LieOneForm {
        let mut f = Self::zero();
        for (v, a) in x.terms() {
            for ((u, g), b) in &self.terms {
                if !within(max_order, v.len() + u.len() + 1) {
                    continue;
                }
                let mut w = v.clone();
                w.extend_from_slice(u);
                f.add_term(w, *g, a * b);
            }
        }
        f
    }

    /// i_ξ(u ⊗ dg) = (−1)^{|ξ||u|} ad_u(ξ(g)).
    pub fn contract(&self, alpha: &Alphabet, xi: &Derivation, max_order: Option<usize>) -> TensorElement {
        let mut out = TensorElement::zero();
        for ((u, g), c) in &self.terms {
            let img = xi.image(*g);
            if img.is_zero() {
                continue;
            }
            let s = sign(xi.is_odd() && alpha.word_parity(u));
            out.add_scaled(&ad_word(alpha, u, img, max_order), &(c * &s));
        }
        out
    }

    /// L_ξ(u ⊗ dg) = (−1)^{|ξ|} ξ(u) ⊗ dg + (−1)^{|ξ|(|u|+1)} u · d(ξ(g)).
    pub fn lie_derivative(&self, alpha: &Alphabet, xi: &Derivation, max_order: Option<usize>) -> LieOneForm {
        let mut f = Self::zero();
        let xo = xi.is_odd();
        let max_len = max_order.map(|m| m.saturating_sub(1));
        for ((u, g), c) in &self.terms {
            let mut xu = TensorElement::zero();
            xi.apply_word(alpha, u, c, max_len, &mut xu);
            let s1 = sign(xo);
            for (w, a) in xu.terms() {
                f.add_term(w.clone(), *g, a * &s1);
            }
            let s2 = sign(xo && !alpha.word_parity(u));
            let dx = Self::split(xi.image(*g));
            let uw = TensorElement::word(u.clone(), c * &s2);
            f.add_scaled(&dx.left_multiply(&uw, max_order), &Scalar::one());
        }
        f
    }

    /// φ^*(u ⊗ dg) = φ(u) · d(φ(g)).
    pub fn pullback(&self, phi: &PointedDiffeo, max_order: usize) -> LieOneForm {
        let mut f = Self::zero();
        for ((u, g), c) in &self.terms {
            let pu = phi.apply_trunc(&TensorElement::word(u.clone(), c.clone()), max_order.saturating_sub(1));
            let pg = phi.apply_trunc(&TensorElement::generator(*g), max_order);
            f.add_scaled(&Self::split(&pg).left_multiply(&pu, Some(max_order)), &Scalar::one());
        }
        f
    }

    /// Poincaré homotopy β = Σ_n i_E(α_n)/n; fails unless dβ = α.
    pub fn euler_homotopy(&self, alpha: &Alphabet) -> Result<TensorElement, FormError> {
        let e = Derivation::euler(alpha.rank());
        let mut beta = TensorElement::zero();
        for n in self.orders() {
            let part = self.order_part(n).contract(alpha, &e, None);
            beta.add_scaled(&part, &Scalar::from_frac(1, n as i64));
        }
        let residual = self.sub(&Self::split(&beta));
        if !residual.is_zero() {
            return Err(FormError::NotClosed(residual.display(alpha)));
        }
        Ok(beta)
    }

    pub fn display(&self, alpha: &Alphabet) -> String {
        display_terms(&self.terms, |(u, g)| {
            if u.is_empty() {
                format!("d{}", alpha.name(*g))
            } else {
                format!("{} ⊗ d{}", alpha.format_word(u), alpha.name(*g))
            }
        })
    }
}
