pub use crate::sample::*;
use crate::lie::Alphabet;

/// τ (degree 1) and t (degree −1): the generators for Q[x]/x², |x| = 2.
pub fn alpha_tau_t() -> Alphabet {
    Alphabet::new(vec!["tau".into(), "t".into()], vec![1, -1], Some(0))
}

/// Three odd generators, as for Q[x]/x³ with |x| = 2.
pub fn alpha_three() -> Alphabet {
    Alphabet::new(vec!["tau".into(), "t1".into(), "t2".into()], vec![1, -1, -3], Some(0))
}

/// Mixed parities.
pub fn alpha_mixed() -> Alphabet {
    Alphabet::new(vec!["tau".into(), "s".into(), "t".into()], vec![1, 0, -1], Some(0))
}

/// Resample until the field is nonzero.
pub fn nonzero_derivation(
    alpha: &Alphabet,
    rng: &mut SampleRng,
    degree: i64,
    orders: std::ops::RangeInclusive<usize>,
) -> crate::lie::Derivation {
    loop {
        let d = random_derivation(alpha, rng, degree, orders.clone());
        if !d.is_zero() {
            return d;
        }
    }
}

/// Frobenius algebras covering even, odd and mixed pairing blocks.
pub fn frobenius_models() -> Vec<crate::graded::Algebra> {
    use crate::graded::models;
    vec![
        models::truncated_polynomial(1, 2),
        models::truncated_polynomial(2, 2),
        models::truncated_polynomial(3, 2),
        models::exterior(&[3]),
        models::exterior(&[1, 1]),
        models::exterior(&[1, 3]),
        models::exterior(&[1, 1, 1]),
        models::product_of_spheres(2, 2),
    ]
}
