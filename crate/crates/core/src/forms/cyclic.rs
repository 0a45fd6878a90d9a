use std::collections::BTreeMap;

use crate::lie::{Alphabet, Derivation, PointedDiffeo, TensorElement, Word};
use crate::scalar::Scalar;

use super::one::OneForm;
use super::{accumulate, display_terms};

/// 0-form in DR⁰: a combination of cyclic words of length ≥ 2 with
/// AB = (−1)^{|A||B|} BA. Each class is stored at its lexicographically least
/// rotation.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct CyclicZeroForm {
    terms: BTreeMap<Word, Scalar>,
}

/// Least rotation of `w` and whether moving there flips the sign; `None` when
/// the class vanishes because a rotation fixes `w` with sign −1.
pub(crate) fn canonical_rotation(alpha: &Alphabet, w: &[u8]) -> Option<(Word, bool)> {
    let n = w.len();
    let mut best: Option<(Word, bool)> = None;
    let mut prefix_odd = false;
    let total_odd = alpha.word_parity(w);
    for k in 0..n {
        // w = A B with |A| = k; AB = (−1)^{|A||B|} BA
        let flip = prefix_odd && (total_odd ^ prefix_odd);
        let mut r = w[k..].to_vec();
        r.extend_from_slice(&w[..k]);
        match &best {
            Some((b, s)) if *b == r => {
                if *s != flip {
                    return None;
                }
            }
            Some((b, _)) if *b < r => {}
            _ => best = Some((r, flip)),
        }
        prefix_odd ^= alpha.is_odd(w[k]);
    }
    best
}

impl CyclicZeroForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> &BTreeMap<Word, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Add c · (class of the word w). Words shorter than 2 are ignored.
    pub fn add_word(&mut self, alpha: &Alphabet, w: &[u8], c: Scalar) {
        if w.len() < 2 || c.is_zero() {
            return;
        }
        if let Some((r, flip)) = canonical_rotation(alpha, w) {
            accumulate(&mut self.terms, r, if flip { -c } else { c });
        }
    }

    /// Class of a tensor element; words of length < 2 are dropped.
    pub fn from_tensor(alpha: &Alphabet, x: &TensorElement) -> Self {
        let mut f = Self::zero();
        for (w, c) in x.terms() {
            f.add_word(alpha, w, c.clone());
        }
        f
    }

    /// x ⊗ y for Lie elements x, y.
    pub fn pair(alpha: &Alphabet, x: &TensorElement, y: &TensorElement) -> Self {
        Self::from_tensor(alpha, &x.concat(y, None))
    }

    pub fn add_scaled(&mut self, other: &CyclicZeroForm, c: &Scalar) {
        for (w, x) in &other.terms {
            accumulate(&mut self.terms, w.clone(), x * c);
        }
    }

    pub fn add(&self, other: &CyclicZeroForm) -> CyclicZeroForm {
        let mut f = self.clone();
        f.add_scaled(other, &Scalar::one());
        f
    }

    pub fn sub(&self, other: &CyclicZeroForm) -> CyclicZeroForm {
        let mut f = self.clone();
        f.add_scaled(other, &Scalar::from_int(-1));
        f
    }

    pub fn scale(&self, c: &Scalar) -> CyclicZeroForm {
        let mut f = Self::zero();
        f.add_scaled(self, c);
        f
    }

    pub fn degree(&self, alpha: &Alphabet) -> Option<i64> {
        super::common_degree(self.terms.keys().map(|w| alpha.word_degree(w)))
    }

    pub fn truncate(&self, max_order: usize) -> CyclicZeroForm {
        CyclicZeroForm {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() <= max_order)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn order_part(&self, n: usize) -> CyclicZeroForm {
        CyclicZeroForm {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == n)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn orders(&self) -> Vec<usize> {
        let mut o: Vec<usize> = self.terms.keys().map(|w| w.len()).collect();
        o.sort_unstable();
        o.dedup();
        o
    }

    /// Normalised: no word involves the unit letter.
    pub fn is_normalised(&self, alpha: &Alphabet) -> bool {
        match alpha.unit() {
            Some(t) => self.terms.keys().all(|w| !w.contains(&t)),
            None => false,
        }
    }

    /// d(A g B) summed over the position of g: each term is rotated to
    /// B A g (with its Koszul sign) and read as (−1)^{|BA|} BA ⊗ dg.
    pub fn differential(&self, alpha: &Alphabet) -> OneForm {
        let mut f = OneForm::zero();
        for (w, c) in &self.terms {
            let mut a_odd = false;
            for p in 0..w.len() {
                let g = w[p];
                let b = &w[p + 1..];
                let b_odd = alpha.word_parity(b);
                let odd = a_odd ^ (b_odd && (a_odd ^ alpha.is_odd(g) ^ true));
                let mut x = b.to_vec();
                x.extend_from_slice(&w[..p]);
                f.add_term(x, g, if odd { -c } else { c.clone() });
                a_odd ^= alpha.is_odd(g);
            }
        }
        f
    }

    /// L_ξ on functions is ξ itself, applied to cyclic words.
    pub fn lie_derivative(&self, alpha: &Alphabet, xi: &Derivation, max_order: Option<usize>) -> CyclicZeroForm {
        let mut x = TensorElement::zero();
        for (w, c) in &self.terms {
            xi.apply_word(alpha, w, c, max_order, &mut x);
        }
        Self::from_tensor(alpha, &x)
    }

    pub fn pullback(&self, alpha: &Alphabet, phi: &PointedDiffeo, max_order: usize) -> CyclicZeroForm {
        let mut f = Self::zero();
        for (w, c) in &self.terms {
            let x = phi.apply_trunc(&TensorElement::word(w.clone(), c.clone()), max_order);
            f.add_scaled(&Self::from_tensor(alpha, &x), &Scalar::one());
        }
        f
    }

    pub fn display(&self, alpha: &Alphabet) -> String {
        display_terms(&self.terms, |w| format!("({})", alpha.format_word(w)))
    }
}
