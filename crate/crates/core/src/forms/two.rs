use std::collections::BTreeMap;

use crate::lie::{Alphabet, Derivation, PointedDiffeo, TensorElement, Word};
use crate::scalar::Scalar;

use super::lie_one::LieOneForm;
use super::one::OneForm;
use super::{accumulate, ad_word, display_terms, sign, within};

/// de Rham 2-form. The key `(w, g, h)` stands for (w ⊗ dg) ⊗ dh; every
/// product of two Lie 1-forms reduces to this shape, and (w, g, h) equals
/// ± (rev w, h, g). Only the lesser key of each such pair is stored.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct TwoForm {
    terms: BTreeMap<(Word, u8, u8), Scalar>,
}

/// Parity of the sign in α ⊗ (u ⊗ dh) = ± (rev(u)·a ⊗ dg) ⊗ dh, where α =
/// a ⊗ dg has parity `a_odd`: the product over j of −(−1)^{(|α|+|u_{<j}|)|u_j|}.
fn reduction_odd(alpha: &Alphabet, a_odd: bool, u: &[u8]) -> bool {
    let mut odd = false;
    let mut cur = a_odd;
    for &y in u {
        let y_odd = alpha.is_odd(y);
        odd ^= true ^ (cur && y_odd);
        cur ^= y_odd;
    }
    odd
}

impl TwoForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> &BTreeMap<(Word, u8, u8), Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The other key of the symmetry pair and the parity of the sign relating
    /// the two.
    pub(crate) fn partner(alpha: &Alphabet, w: &[u8], g: u8, h: u8) -> ((Word, u8, u8), bool) {
        let a_odd = LieOneForm::term_odd(alpha, w, g);
        let b_odd = !alpha.is_odd(h);
        let mut rw = w.to_vec();
        rw.reverse();
        let odd = (a_odd && b_odd) ^ reduction_odd(alpha, b_odd, w);
        ((rw, h, g), odd)
    }

    /// Add c · (w ⊗ dg) ⊗ dh.
    pub fn add_basis(&mut self, alpha: &Alphabet, w: Word, g: u8, h: u8, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let (other, odd) = Self::partner(alpha, &w, g, h);
        let key = (w, g, h);
        if other == key {
            if !odd {
                accumulate(&mut self.terms, key, c);
            }
        } else if other < key {
            accumulate(&mut self.terms, other, if odd { -c } else { c });
        } else {
            accumulate(&mut self.terms, key, c);
        }
    }

    /// α ⊗ β for Lie 1-forms α, β.
    pub fn pair(alpha: &Alphabet, a: &LieOneForm, b: &LieOneForm, max_order: Option<usize>) -> TwoForm {
        let mut f = Self::zero();
        for ((x, g), c1) in a.terms() {
            let a_odd = LieOneForm::term_odd(alpha, x, *g);
            for ((u, h), c2) in b.terms() {
                if !within(max_order, x.len() + u.len() + 2) {
                    continue;
                }
                let mut w: Word = u.iter().rev().copied().collect();
                w.extend_from_slice(x);
                let s = sign(reduction_odd(alpha, a_odd, u));
                f.add_basis(alpha, w, *g, *h, &(c1 * c2) * &s);
            }
        }
        f
    }

    pub fn add_scaled(&mut self, other: &TwoForm, c: &Scalar) {
        for (k, x) in &other.terms {
            accumulate(&mut self.terms, k.clone(), x * c);
        }
    }

    pub fn add(&self, other: &TwoForm) -> TwoForm {
        let mut f = self.clone();
        f.add_scaled(other, &Scalar::one());
        f
    }

    pub fn sub(&self, other: &TwoForm) -> TwoForm {
        let mut f = self.clone();
        f.add_scaled(other, &Scalar::from_int(-1));
        f
    }

    pub fn scale(&self, c: &Scalar) -> TwoForm {
        let mut f = Self::zero();
        f.add_scaled(self, c);
        f
    }

    pub fn term_degree(alpha: &Alphabet, w: &[u8], g: u8, h: u8) -> i64 {
        alpha.word_degree(w) + alpha.degree(g) + alpha.degree(h) + 2
    }

    pub fn degree(&self, alpha: &Alphabet) -> Option<i64> {
        super::common_degree(self.terms.keys().map(|(w, g, h)| Self::term_degree(alpha, w, *g, *h)))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|(w, _, _)| w.is_empty())
    }

    pub fn truncate(&self, max_order: usize) -> TwoForm {
        TwoForm {
            terms: self
                .terms
                .iter()
                .filter(|((w, _, _), _)| w.len() + 2 <= max_order)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn order_part(&self, n: usize) -> TwoForm {
        TwoForm {
            terms: self
                .terms
                .iter()
                .filter(|((w, _, _), _)| w.len() + 2 == n)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn orders(&self) -> Vec<usize> {
        let mut o: Vec<usize> = self.terms.keys().map(|(w, _, _)| w.len() + 2).collect();
        o.sort_unstable();
        o.dedup();
        o
    }

    /// i_ξ(α ⊗ dh) = i_ξ(α) ⊗ dh + (−1)^{(|ξ|−1)|α|} α ⊗ ξ(h).
    pub fn contract(&self, alpha: &Alphabet, xi: &Derivation, max_order: Option<usize>) -> OneForm {
        let mut f = OneForm::zero();
        let xo = xi.is_odd();
        let max_len = max_order.map(|m| m.saturating_sub(1));
        for ((w, g, h), c) in &self.terms {
            let a_odd = LieOneForm::term_odd(alpha, w, *g);
            let xg = xi.image(*g);
            if !xg.is_zero() {
                let s = sign(xo && alpha.word_parity(w));
                let l = ad_word(alpha, w, xg, max_len);
                f.add_scaled(&OneForm::from_coefficient(&l, *h), &(c * &s));
            }
            let y = xi.image(*h);
            if !y.is_zero() {
                // α ⊗ y = (−1)^{|α||y|} y ⊗ α
                let y_odd = alpha.is_odd(*h) ^ xo;
                let s = sign((a_odd && !xo) ^ (a_odd && y_odd));
                let mut a = LieOneForm::zero();
                a.add_term(w.clone(), *g, c * &s);
                f.add_scaled(&OneForm::pair(alpha, y, &a, max_order), &Scalar::one());
            }
        }
        f
    }

    /// L_ξ(α ⊗ dh) = L_ξ(α) ⊗ dh + (−1)^{|ξ||α| + |ξ|} α ⊗ d(ξ(h)).
    pub fn lie_derivative(&self, alpha: &Alphabet, xi: &Derivation, max_order: Option<usize>) -> TwoForm {
        let mut f = Self::zero();
        let xo = xi.is_odd();
        for ((w, g, h), c) in &self.terms {
            let mut a = LieOneForm::zero();
            a.add_term(w.clone(), *g, c.clone());
            let la = a.lie_derivative(alpha, xi, max_order.map(|m| m.saturating_sub(1)));
            for ((u, k), x) in la.terms() {
                f.add_basis(alpha, u.clone(), *k, *h, x.clone());
            }
            let y = xi.image(*h);
            if !y.is_zero() {
                let a_odd = LieOneForm::term_odd(alpha, w, *g);
                let s = sign(xo && !a_odd);
                f.add_scaled(&Self::pair(alpha, &a, &LieOneForm::split(y), max_order), &s);
            }
        }
        f
    }

    /// φ^*((w ⊗ dg) ⊗ dh) = φ^*(w ⊗ dg) ⊗ d(φ(h)), truncated at `max_order`.
    pub fn pullback(&self, alpha: &Alphabet, phi: &PointedDiffeo, max_order: usize) -> TwoForm {
        let mut f = Self::zero();
        let lim = max_order.saturating_sub(1);
        for ((w, g, h), c) in &self.terms {
            let mut a = LieOneForm::zero();
            a.add_term(w.clone(), *g, c.clone());
            let pa = a.pullback(phi, lim);
            let ph = phi.apply_trunc(&TensorElement::generator(*h), lim);
            f.add_scaled(&Self::pair(alpha, &pa, &LieOneForm::split(&ph), Some(max_order)), &Scalar::one());
        }
        f
    }

    pub fn display(&self, alpha: &Alphabet) -> String {
        display_terms(&self.terms, |(w, g, h)| {
            if w.is_empty() {
                format!("d{} d{}", alpha.name(*g), alpha.name(*h))
            } else {
                format!("({} ⊗ d{}) d{}", alpha.format_word(w), alpha.name(*g), alpha.name(*h))
            }
        })
    }
}
