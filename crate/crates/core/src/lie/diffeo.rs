use crate::scalar::Scalar;

use super::derivation::Derivation;
use super::tensor::{Alphabet, TensorElement};
use super::LieError;

/// Algebra automorphism g ↦ g + (words of length ≥ 2), stored mod words
/// longer than `max_len`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointedDiffeo {
    images: Vec<TensorElement>,
    max_len: usize,
}

impl PointedDiffeo {
    pub fn identity(rank: usize, max_len: usize) -> Self {
        PointedDiffeo {
            images: (0..rank as u8).map(TensorElement::generator).collect(),
            max_len,
        }
    }

    /// Build from images; the order-1 part must be the identity and every
    /// higher part must have degree 0.
    pub fn new(alpha: &Alphabet, images: Vec<TensorElement>, max_len: usize) -> Result<Self, LieError> {
        if images.len() != alpha.rank() {
            return Err(LieError::Rank {
                expected: alpha.rank(),
                found: images.len(),
            });
        }
        for (g, img) in images.iter().enumerate() {
            let g = g as u8;
            if img.order_part(1) != TensorElement::generator(g) || img.order_part(0).len() != 0 {
                return Err(LieError::NotPointed(alpha.name(g).to_string()));
            }
            let higher = img.sub(&TensorElement::generator(g));
            Derivation::new(alpha, vec_with(alpha.rank(), g as usize, higher), 0)?;
        }
        Ok(PointedDiffeo {
            images: images.into_iter().map(|x| x.truncate(max_len)).collect(),
            max_len,
        })
    }

    pub fn max_len(&self) -> usize {
        self.max_len
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

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(g, x)| x == &TensorElement::generator(g as u8))
    }

    pub fn is_lie(&self, alpha: &Alphabet) -> bool {
        self.images.iter().all(|x| x.is_lie(alpha))
    }

    pub fn with_max_len(&self, max_len: usize) -> PointedDiffeo {
        PointedDiffeo {
            images: self.images.iter().map(|x| x.truncate(max_len)).collect(),
            max_len,
        }
    }

    /// φ − id as a degree-0 derivation-shaped object (images of g minus g).
    pub fn displacement(&self) -> Derivation {
        Derivation::from_parts_unchecked(
            self.images
                .iter()
                .enumerate()
                .map(|(g, x)| x.sub(&TensorElement::generator(g as u8)))
                .collect(),
            0,
        )
    }

    /// Apply as an algebra homomorphism, dropping words longer than `max_len`.
    pub fn apply(&self, x: &TensorElement) -> TensorElement {
        self.apply_trunc(x, self.max_len)
    }

    pub fn apply_trunc(&self, x: &TensorElement, max_len: usize) -> TensorElement {
        let mut out = TensorElement::zero();
        for (w, c) in x.terms() {
            if w.len() > max_len {
                continue;
            }
            let mut acc = TensorElement::word(Vec::new(), c.clone());
            for (i, &g) in w.iter().enumerate() {
                // remaining letters contribute at least one letter each
                let room = max_len - (w.len() - i - 1);
                acc = acc.concat(&self.images[g as usize], Some(room));
                if acc.is_zero() {
                    break;
                }
            }
            out.add_scaled(&acc, &Scalar::one());
        }
        out
    }

    /// self ∘ other.
    pub fn compose(&self, other: &PointedDiffeo) -> PointedDiffeo {
        let n = self.max_len.min(other.max_len);
        PointedDiffeo {
            images: other.images.iter().map(|x| self.apply_trunc(x, n)).collect(),
            max_len: n,
        }
    }

    /// Two-sided inverse mod words longer than `max_len`.
    pub fn inverse(&self) -> PointedDiffeo {
        // ψ(g) = g − R(ψ(g)) with R = φ − id, iterated to a fixed point.
        let rank = self.rank();
        let mut psi = PointedDiffeo::identity(rank, self.max_len);
        for _ in 0..self.max_len {
            let next: Vec<TensorElement> = (0..rank)
                .map(|g| {
                    let cur = &psi.images[g];
                    let r = self.apply(cur).sub(cur);
                    TensorElement::generator(g as u8).sub(&r)
                })
                .collect();
            if next == psi.images {
                break;
            }
            psi.images = next;
        }
        psi
    }

    /// exp(γ) for γ of degree 0 with lowest order ≥ 2.
    pub fn exp(alpha: &Alphabet, gamma: &Derivation, max_len: usize) -> Result<PointedDiffeo, LieError> {
        if gamma.is_zero() {
            return Ok(PointedDiffeo::identity(alpha.rank(), max_len));
        }
        if gamma.degree() != 0 {
            return Err(LieError::ExpDegree(gamma.degree()));
        }
        if gamma.min_order().unwrap_or(2) < 2 {
            return Err(LieError::ExpOrder);
        }
        let images = (0..alpha.rank() as u8)
            .map(|g| {
                let mut sum = TensorElement::generator(g);
                let mut term = TensorElement::generator(g);
                let mut k = 1;
                loop {
                    term = gamma.apply_trunc(alpha, &term, Some(max_len)).scale(&Scalar::from_frac(1, k));
                    if term.is_zero() {
                        break;
                    }
                    sum.add_scaled(&term, &Scalar::one());
                    k += 1;
                }
                sum
            })
            .collect();
        Ok(PointedDiffeo { images, max_len })
    }

    /// φ ∘ m ∘ φ^{-1}, truncated to words of length ≤ `max_len`.
    pub fn conjugate(&self, alpha: &Alphabet, m: &Derivation) -> Derivation {
        let inv = self.inverse();
        let images = inv
            .images
            .iter()
            .map(|x| {
                let mx = m.apply_trunc(alpha, x, Some(self.max_len));
                self.apply(&mx)
            })
            .collect();
        Derivation::from_parts_unchecked(images, m.degree())
    }

    pub fn display(&self, alpha: &Alphabet) -> String {
        self.images
            .iter()
            .enumerate()
            .map(|(g, x)| format!("{} -> {}", alpha.name(g as u8), x.display(alpha)))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

fn vec_with(rank: usize, i: usize, x: TensorElement) -> Vec<TensorElement> {
    let mut v = vec![TensorElement::zero(); rank];
    v[i] = x;
    v
}
