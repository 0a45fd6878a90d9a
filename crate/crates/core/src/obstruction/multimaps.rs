use std::collections::BTreeMap;

use serde::Serialize;

use crate::graded::Pairing;
use crate::lie::{Alphabet, Derivation, TensorElement, Word};
use crate::linalg::SparseVec;
use crate::scalar::Scalar;

/// Multilinear maps m̌_n : V^{⊗n} → V on basis tuples, dual to the
/// generator images of a vector field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multimaps {
    degree: i64,
    maps: BTreeMap<usize, BTreeMap<Word, SparseVec<usize>>>,
}

/// Unsuspended degree |x_g| = 1 − δ_g.
fn base_degree(alpha: &Alphabet, g: u8) -> i64 {
    1 - alpha.degree(g)
}

/// Σ_j (n − j)|x_{w_j}|: the sign of moving the suspensions through the
/// arguments.
fn suspension_odd(alpha: &Alphabet, w: &[u8]) -> bool {
    let n = w.len();
    w.iter()
        .enumerate()
        .map(|(j, &g)| (n - j - 1) as i64 * base_degree(alpha, g))
        .sum::<i64>()
        .rem_euclid(2)
        == 1
}

impl Multimaps {
    pub fn from_derivation(alpha: &Alphabet, m: &Derivation) -> Self {
        let mut maps: BTreeMap<usize, BTreeMap<Word, SparseVec<usize>>> = BTreeMap::new();
        for (k, img) in m.images().iter().enumerate() {
            for (w, c) in img.terms() {
                let c = c * &Scalar::sign(suspension_odd(alpha, w));
                maps.entry(w.len()).or_default().entry(w.clone()).or_default().insert(k, c);
            }
        }
        Multimaps {
            degree: m.degree(),
            maps,
        }
    }

    pub fn to_derivation(&self, alpha: &Alphabet) -> Derivation {
        let mut images = vec![TensorElement::zero(); alpha.rank()];
        for by_word in self.maps.values() {
            for (w, out) in by_word {
                let s = Scalar::sign(suspension_odd(alpha, w));
                for (k, c) in out {
                    images[*k].add_term(w.clone(), c * &s);
                }
            }
        }
        Derivation::from_parts_unchecked(images, self.degree)
    }

    pub fn arities(&self) -> Vec<usize> {
        self.maps.keys().copied().collect()
    }

    /// m̌_n(x_{w_1}, …, x_{w_n}) as coordinates in the basis.
    pub fn evaluate(&self, w: &[u8]) -> SparseVec<usize> {
        self.maps
            .get(&w.len())
            .and_then(|m| m.get(w))
            .cloned()
            .unwrap_or_default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceViolation {
    pub arity: usize,
    /// Indices (x_0, …, x_n).
    pub tuple: Vec<usize>,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

fn pair_with(pairing: &Pairing, v: &SparseVec<usize>, b: usize) -> Scalar {
    let mut s = Scalar::zero();
    for (k, c) in v {
        s += &(c * pairing.get(*k, b));
    }
    s
}

/// ⟨m̌_n(x_1,…,x_n), x_0⟩ = (−1)^{n+|x_0|(|x_1|+…+|x_n|)} ⟨m̌_n(x_0,…,x_{n−1}), x_n⟩
/// on every basis tuple of the given arity.
pub fn check_arity(alpha: &Alphabet, pairing: &Pairing, mm: &Multimaps, n: usize) -> Option<InvarianceViolation> {
    let r = alpha.rank();
    let total = r.pow(n as u32 + 1);
    let mut tuple = vec![0u8; n + 1];
    for code in 0..total {
        let mut c = code;
        for slot in tuple.iter_mut().rev() {
            *slot = (c % r) as u8;
            c /= r;
        }
        let x0 = tuple[0];
        let rest: i64 = tuple[1..].iter().map(|&g| base_degree(alpha, g)).sum();
        let odd = (n as i64 + base_degree(alpha, x0) * rest).rem_euclid(2) == 1;
        let lhs = pair_with(pairing, &mm.evaluate(&tuple[1..]), x0 as usize);
        let rhs = &pair_with(pairing, &mm.evaluate(&tuple[..n]), tuple[n] as usize) * &Scalar::sign(odd);
        if lhs != rhs {
            return Some(InvarianceViolation {
                arity: n,
                tuple: tuple.iter().map(|&g| g as usize).collect(),
                lhs,
                rhs,
            });
        }
    }
    None
}

/// First violated instance over arities 1..=max_arity, or `None` on pass.
pub fn check_invariance(alpha: &Alphabet, pairing: &Pairing, mm: &Multimaps, max_arity: usize) -> Option<InvarianceViolation> {
    (1..=max_arity).find_map(|n| check_arity(alpha, pairing, mm, n))
}
