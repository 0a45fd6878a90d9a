use crate::graded::odd;
use crate::scalar::Scalar;

use super::tensor::{Alphabet, TensorElement, Word};
use super::LieError;

/// A vector field on the truncated free Lie algebra, given by generator images.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation {
    images: Vec<TensorElement>,
    degree: i64,
}

impl Derivation {
    pub fn zero(rank: usize, degree: i64) -> Self {
        Derivation {
            images: vec![TensorElement::zero(); rank],
            degree,
        }
    }

    /// Build from images, checking |ξ(g)| = |g| + degree for every word.
    pub fn new(alpha: &Alphabet, images: Vec<TensorElement>, degree: i64) -> Result<Self, LieError> {
        if images.len() != alpha.rank() {
            return Err(LieError::Rank {
                expected: alpha.rank(),
                found: images.len(),
            });
        }
        for (g, img) in images.iter().enumerate() {
            for w in img.terms().keys() {
                if w.is_empty() {
                    return Err(LieError::OrderZero);
                }
                let d = alpha.word_degree(w);
                if d != alpha.degree(g as u8) + degree {
                    return Err(LieError::Degree {
                        generator: alpha.name(g as u8).to_string(),
                        expected: alpha.degree(g as u8) + degree,
                        found: d,
                    });
                }
            }
        }
        Ok(Derivation { images, degree })
    }

    /// Like [`Derivation::new`] but additionally requires Lie images.
    pub fn new_lie(alpha: &Alphabet, images: Vec<TensorElement>, degree: i64) -> Result<Self, LieError> {
        let d = Self::new(alpha, images, degree)?;
        for (g, img) in d.images.iter().enumerate() {
            if !img.is_lie(alpha) {
                return Err(LieError::NotLie(alpha.name(g as u8).to_string()));
            }
        }
        Ok(d)
    }

    pub(crate) fn from_parts_unchecked(images: Vec<TensorElement>, degree: i64) -> Self {
        Derivation { images, degree }
    }

    /// ξ(g) = g for every generator.
    pub fn euler(rank: usize) -> Self {
        Derivation {
            images: (0..rank as u8).map(TensorElement::generator).collect(),
            degree: 0,
        }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_odd(&self) -> bool {
        odd(self.degree)
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, g: u8) -> &TensorElement {
        &self.images[g as usize]
    }

    pub fn images(&self) -> &[TensorElement] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|x| x.is_zero())
    }

    pub fn is_lie(&self, alpha: &Alphabet) -> bool {
        self.images.iter().all(|x| x.is_lie(alpha))
    }

    /// Order-i part: generator images restricted to words of length i.
    pub fn order_part(&self, i: usize) -> Derivation {
        Derivation {
            images: self.images.iter().map(|x| x.order_part(i)).collect(),
            degree: self.degree,
        }
    }

    pub fn orders(&self) -> Vec<usize> {
        let mut o: Vec<usize> = self.images.iter().flat_map(|x| x.orders()).collect();
        o.sort_unstable();
        o.dedup();
        o
    }

    pub fn min_order(&self) -> Option<usize> {
        self.images.iter().filter_map(|x| x.min_order()).min()
    }

    pub fn max_order(&self) -> Option<usize> {
        self.images.iter().filter_map(|x| x.max_order()).max()
    }

    pub fn truncate(&self, max_len: usize) -> Derivation {
        Derivation {
            images: self.images.iter().map(|x| x.truncate(max_len)).collect(),
            degree: self.degree,
        }
    }

    fn check_same_degree(&self, other: &Derivation) {
        assert!(
            self.degree == other.degree || self.is_zero() || other.is_zero(),
            "adding derivations of degrees {} and {}",
            self.degree,
            other.degree
        );
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        self.check_same_degree(other);
        let degree = if self.is_zero() { other.degree } else { self.degree };
        Derivation {
            images: self.images.iter().zip(&other.images).map(|(a, b)| a.add(b)).collect(),
            degree,
        }
    }

    pub fn sub(&self, other: &Derivation) -> Derivation {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Derivation {
        Derivation {
            images: self.images.iter().map(|x| x.scale(c)).collect(),
            degree: self.degree,
        }
    }

    pub fn neg(&self) -> Derivation {
        self.scale(&Scalar::from_int(-1))
    }

    /// Leibniz extension to a single word, Koszul signs included.
    pub fn apply_word(&self, alpha: &Alphabet, w: &[u8], c: &Scalar, max_len: Option<usize>, out: &mut TensorElement) {
        let mut prefix_odd = false;
        let xi_odd = self.is_odd();
        for (p, &g) in w.iter().enumerate() {
            let img = &self.images[g as usize];
            if !img.is_zero() {
                let sign = if xi_odd && prefix_odd { -c } else { c.clone() };
                for (v, a) in img.terms() {
                    let len = w.len() - 1 + v.len();
                    if max_len.is_some_and(|n| len > n) {
                        continue;
                    }
                    let mut nw: Word = Vec::with_capacity(len);
                    nw.extend_from_slice(&w[..p]);
                    nw.extend_from_slice(v);
                    nw.extend_from_slice(&w[p + 1..]);
                    out.add_term(nw, &sign * a);
                }
            }
            prefix_odd ^= alpha.is_odd(g);
        }
    }

    pub fn apply(&self, alpha: &Alphabet, x: &TensorElement) -> TensorElement {
        self.apply_trunc(alpha, x, None)
    }

    pub fn apply_trunc(&self, alpha: &Alphabet, x: &TensorElement, max_len: Option<usize>) -> TensorElement {
        let mut out = TensorElement::zero();
        for (w, c) in x.terms() {
            self.apply_word(alpha, w, c, max_len, &mut out);
        }
        out
    }

    /// Operator composition on generators: g ↦ self(other(g)). Not a derivation
    /// in general; used for brackets and exponentials.
    fn compose_images(&self, alpha: &Alphabet, other: &Derivation, max_len: Option<usize>) -> Vec<TensorElement> {
        other.images.iter().map(|x| self.apply_trunc(alpha, x, max_len)).collect()
    }

    /// [ξ,γ] = ξ∘γ − (−1)^{|ξ||γ|} γ∘ξ, truncated to words of length ≤ `max_len`.
    pub fn bracket(alpha: &Alphabet, xi: &Derivation, gamma: &Derivation, max_len: Option<usize>) -> Derivation {
        let a = xi.compose_images(alpha, gamma, max_len);
        let b = gamma.compose_images(alpha, xi, max_len);
        let s = Scalar::sign(!(xi.is_odd() && gamma.is_odd()));
        Derivation {
            images: a.iter().zip(&b).map(|(x, y)| {
                let mut t = x.clone();
                t.add_scaled(y, &s);
                t
            }).collect(),
            degree: xi.degree + gamma.degree,
        }
    }

    /// True when no image involves the letter `g`.
    pub fn avoids_letter(&self, g: u8) -> bool {
        self.images.iter().all(|x| !x.contains_letter(g))
    }

    pub fn display(&self, alpha: &Alphabet) -> String {
        self.images
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(g, x)| format!("{} -> {}", alpha.name(g as u8), x.display(alpha)))
            .collect::<Vec<_>>()
            .join("; ")
    }
}
