//! Noncommutative differential forms over the truncated free Lie algebra:
//! Lie 1-forms, cyclic 0-forms, de Rham 1- and 2-forms, and constant
//! symplectic forms.
//!
//! Orders: a cyclic word of length n has order n; `x ⊗ dg` has order
//! len(x) + 1; `(w, g) ⊗ dh` has order len(w) + 2. Degrees are total degrees
//! in which each `d` contributes +1.

use std::collections::BTreeMap;

use crate::lie::{Alphabet, TensorElement};
use crate::scalar::Scalar;

mod cartan;
mod cyclic;
mod lie_one;
mod one;
mod symplectic;
mod two;

pub use cartan::{cartan_alphabets, verify_cartan, CartanFailure, CartanReport, IdentityTally, IDENTITIES};
pub use cyclic::CyclicZeroForm;
pub use lie_one::LieOneForm;
pub use one::OneForm;
pub use symplectic::{symplectomorphism_residual, ConstantTwoForm, Symplectic};
pub use two::TwoForm;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("input is not a Lie element")]
    NotLie,
    #[error("form is not closed; d of it is {0}")]
    NotClosed(String),
    #[error("vector field is not symplectic; L_xi(omega) = {0}")]
    NotSymplectic(String),
    #[error("2-form is degenerate")]
    Degenerate,
    #[error("2-form is not constant")]
    NotConstant,
    #[error("input is not homogeneous in degree")]
    Inhomogeneous,
    #[error("bilinear form is not graded skew at ({0}, {1})")]
    NotSkew(usize, usize),
}

pub(crate) fn accumulate<K: Ord>(map: &mut BTreeMap<K, Scalar>, key: K, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += &c;
            if e.get().is_zero() {
                e.remove();
            }
        }
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

pub(crate) fn sign(odd: bool) -> Scalar {
    Scalar::sign(odd)
}

fn within(max: Option<usize>, order: usize) -> bool {
    max.map_or(true, |m| order <= m)
}

/// ad_u(y) = [u_1,[u_2,…[u_k, y]]].
pub(crate) fn ad_word(alpha: &Alphabet, u: &[u8], y: &TensorElement, max_len: Option<usize>) -> TensorElement {
    let mut acc = y.clone();
    for &g in u.iter().rev() {
        acc = TensorElement::bracket_trunc(alpha, &TensorElement::generator(g), &acc, max_len);
    }
    acc
}

/// x ◁ u = [[x,u_1],…,u_k].
pub(crate) fn right_ad_word(alpha: &Alphabet, x: &TensorElement, u: &[u8], max_len: Option<usize>) -> TensorElement {
    let mut acc = x.clone();
    for &g in u {
        acc = TensorElement::bracket_trunc(alpha, &acc, &TensorElement::generator(g), max_len);
    }
    acc
}

fn display_terms<K>(map: &BTreeMap<K, Scalar>, f: impl Fn(&K) -> String) -> String {
    if map.is_empty() {
        return "0".into();
    }
    map.iter()
        .map(|(k, c)| format!("{c} {}", f(k)))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Common homogeneous degree of a family of term degrees.
fn common_degree(mut it: impl Iterator<Item = i64>) -> Option<i64> {
    let d = it.next()?;
    it.all(|e| e == d).then_some(d)
}

#[cfg(test)]
mod tests;
