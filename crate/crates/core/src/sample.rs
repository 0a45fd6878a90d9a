//! Seeded random objects for property checks and the `verify-*` commands.

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::forms::{CyclicZeroForm, LieOneForm, OneForm, TwoForm};
use crate::harrison::{kernel, Cochain, Complex, Flavor};
use crate::lie::{Alphabet, CnStructure, Derivation, PointedDiffeo, TensorElement};
use crate::linalg::{axpy, SparseVec};
use crate::obstruction::{extend_structure, Extension, Setting, StructureFlavor};
use crate::scalar::Scalar;

pub type SampleRng = ChaCha8Rng;

pub fn rng_from(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero rational with small numerator and denominator.
pub fn random_scalar(rng: &mut SampleRng) -> Scalar {
    let p = *[-3, -2, -1, 1, 2, 3].choose(rng).unwrap();
    let q = *[1, 1, 1, 2].choose(rng).unwrap();
    Scalar::from_frac(p, q)
}

/// Random combination of a few words of the given length and degree.
pub fn random_words_of_degree(alpha: &Alphabet, rng: &mut SampleRng, len: usize, degree: i64, avoid_unit: bool) -> TensorElement {
    let words = alpha.words_of_degree(len, degree, avoid_unit);
    let mut t = TensorElement::zero();
    if words.is_empty() {
        return t;
    }
    let k = rng.gen_range(1..=3);
    for _ in 0..k {
        let w = words.choose(rng).unwrap().clone();
        t.add_term(w, random_scalar(rng));
    }
    t
}

/// Random Lie element of the given order and degree (possibly zero).
pub fn random_lie_of_degree(alpha: &Alphabet, rng: &mut SampleRng, len: usize, degree: i64, avoid_unit: bool) -> TensorElement {
    random_words_of_degree(alpha, rng, len, degree, avoid_unit)
        .dynkin_project(alpha)
        .unwrap_or_default()
}

/// Random homogeneous Lie element of the given order.
pub fn random_homogeneous_lie(alpha: &Alphabet, rng: &mut SampleRng, len: usize) -> TensorElement {
    let w: Vec<u8> = (0..len).map(|_| rng.gen_range(0..alpha.rank()) as u8).collect();
    random_lie_of_degree(alpha, rng, len, alpha.word_degree(&w), false)
}

/// Random (not necessarily homogeneous) combination of words of one length.
pub fn random_word_combination(alpha: &Alphabet, rng: &mut SampleRng, len: usize) -> TensorElement {
    let mut t = TensorElement::zero();
    for _ in 0..rng.gen_range(1..=4) {
        let w: Vec<u8> = (0..len).map(|_| rng.gen_range(0..alpha.rank()) as u8).collect();
        t.add_term(w, random_scalar(rng));
    }
    t
}

fn random_field(alpha: &Alphabet, rng: &mut SampleRng, degree: i64, orders: RangeInclusive<usize>, normalised: bool) -> Derivation {
    let images = (0..alpha.rank() as u8)
        .map(|g| {
            let mut img = TensorElement::zero();
            for len in orders.clone() {
                if rng.gen_bool(0.8) {
                    let x = random_lie_of_degree(alpha, rng, len, alpha.degree(g) + degree, normalised);
                    img.add_scaled(&x, &Scalar::one());
                }
            }
            img
        })
        .collect();
    Derivation::new(alpha, images, degree).expect("sampled field has consistent degrees")
}

/// Random vector field with Lie images, of fixed degree, in the given orders.
pub fn random_derivation(alpha: &Alphabet, rng: &mut SampleRng, degree: i64, orders: RangeInclusive<usize>) -> Derivation {
    random_field(alpha, rng, degree, orders, false)
}

/// Random normalised vector field: all images are free of the unit letter.
pub fn random_normalised_derivation(alpha: &Alphabet, rng: &mut SampleRng, degree: i64, orders: RangeInclusive<usize>) -> Derivation {
    random_field(alpha, rng, degree, orders, true)
}

/// Random cyclic 0-form: classes of ℓ·g with ℓ Lie of length `order − 1`.
pub fn random_cyclic_form(alpha: &Alphabet, rng: &mut SampleRng, order: usize, degree: Option<i64>) -> CyclicZeroForm {
    let mut f = CyclicZeroForm::zero();
    for _ in 0..rng.gen_range(1..=2) {
        let g = rng.gen_range(0..alpha.rank()) as u8;
        let l = match degree {
            Some(d) => random_lie_of_degree(alpha, rng, order - 1, d - alpha.degree(g), false),
            None => random_homogeneous_lie(alpha, rng, order - 1),
        };
        f.add_scaled(&CyclicZeroForm::from_tensor(alpha, &l.concat(&TensorElement::generator(g), None)), &Scalar::one());
    }
    f
}

/// Random de Rham 1-form Σ ℓ_g ⊗ dg with ℓ_g Lie of length `order − 1`.
pub fn random_one_form(alpha: &Alphabet, rng: &mut SampleRng, order: usize) -> OneForm {
    let mut f = OneForm::zero();
    for g in 0..alpha.rank() as u8 {
        if rng.gen_bool(0.7) {
            let l = random_homogeneous_lie(alpha, rng, order - 1);
            f.add_scaled(&OneForm::from_coefficient(&l, g), &Scalar::one());
        }
    }
    f
}

/// Random Lie 1-form with coefficient words of length `order − 1`.
pub fn random_lie_one_form(alpha: &Alphabet, rng: &mut SampleRng, order: usize) -> LieOneForm {
    let mut f = LieOneForm::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let u: Vec<u8> = (0..order - 1).map(|_| rng.gen_range(0..alpha.rank()) as u8).collect();
        let g = rng.gen_range(0..alpha.rank()) as u8;
        f.add_term(u, g, random_scalar(rng));
    }
    f
}

/// Random 2-form of the given order.
pub fn random_two_form(alpha: &Alphabet, rng: &mut SampleRng, order: usize) -> TwoForm {
    let mut f = TwoForm::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let w: Vec<u8> = (0..order - 2).map(|_| rng.gen_range(0..alpha.rank()) as u8).collect();
        let g = rng.gen_range(0..alpha.rank()) as u8;
        let h = rng.gen_range(0..alpha.rank()) as u8;
        f.add_basis(alpha, w, g, h, random_scalar(rng));
    }
    f
}

/// Random pointed diffeomorphism exp(γ) with γ of degree 0 in orders 2..=max_len.
pub fn random_pointed_diffeo(alpha: &Alphabet, rng: &mut SampleRng, max_len: usize) -> PointedDiffeo {
    let gamma = random_derivation(alpha, rng, 0, 2..=max_len.max(2));
    PointedDiffeo::exp(alpha, &gamma, max_len).expect("degree-0 field of order at least 2")
}

/// Random element of the cocycle space of a block, as a cochain; `None`
/// when the block has no cocycles.
pub fn random_cocycle(c: &Complex, rng: &mut SampleRng, order: usize, label: i64) -> Option<Cochain> {
    let (_, cur, _, _, d_out) = c.neighbourhood(order, label);
    let ker = kernel(&d_out);
    if ker.is_empty() {
        return None;
    }
    let mut x = SparseVec::new();
    for k in &ker {
        if rng.gen_bool(0.7) {
            axpy(&mut x, &random_scalar(rng), k);
        }
    }
    Some(c.element(label, &cur.vector(&x)))
}

fn field(c: Option<Cochain>, rank: usize) -> Derivation {
    match c {
        Some(Cochain::Field(x)) if !x.is_zero() => x,
        _ => Derivation::zero(rank, 1),
    }
}

/// A C_4-structure m_2 + m_3 with m_3 = [m_2, γ] plus a random cocycle, or a
/// C_5-structure obtained by extending it with a random choice of m_4.
/// `None` when the sampled C_4-structure is obstructed.
pub fn random_cn_structure(setting: &Setting, rng: &mut SampleRng, level: usize) -> Option<CnStructure> {
    let a = setting.alphabet();
    let h = setting.complex(Flavor::Harrison, false).ok()?;
    let gamma = random_derivation(a, rng, 0, 2..=2);
    let m3 = Derivation::bracket(a, setting.m2(), &gamma, None).add(&field(random_cocycle(&h, rng, 3, 2), a.rank()));
    let mut m = CnStructure::new(setting.m2().add(&m3), 4).ok()?;
    while m.level() < level {
        let n = m.level();
        match extend_structure(setting, &m, StructureFlavor::Plain).ok()? {
            Extension::Extended(e) => {
                let extra = field(random_cocycle(&h, rng, n, 2), a.rank());
                m = m.with_part(&e.part.add(&extra));
            }
            Extension::Obstructed(_) => return None,
        }
    }
    Some(m)
}

/// A symplectic C_4-structure m_2 + Υ(β) with β a random cyclic cocycle.
pub fn random_symplectic_c4(setting: &Setting, rng: &mut SampleRng) -> Option<CnStructure> {
    let sym = setting.symplectic().ok()?;
    let c = setting.complex(Flavor::Cyclic, false).ok()?;
    let beta = match random_cocycle(&c, rng, 4, c.label(sym.omega_degree() - 1))? {
        Cochain::Zero(b) => b,
        _ => return None,
    };
    CnStructure::new(setting.m2().add(&sym.upsilon(&beta).ok()?), 4).ok()
}
