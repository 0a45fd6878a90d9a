use std::collections::BTreeMap;
use std::fmt;

use crate::graded::{odd, GradedBasis};
use crate::scalar::Scalar;

use super::LieError;

pub type Word = Vec<u8>;

/// Generators g_i of the free Lie algebra, with their degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    degrees: Vec<i64>,
    unit: Option<u8>,
}

impl Alphabet {
    pub fn new(names: Vec<String>, degrees: Vec<i64>, unit: Option<u8>) -> Self {
        assert_eq!(names.len(), degrees.len());
        assert!(names.len() <= 255);
        Alphabet { names, degrees, unit }
    }

    /// Generators dual to the suspended basis: g_i has degree 1 − |x_i|.
    pub fn from_basis(basis: &GradedBasis) -> Self {
        let names = (0..basis.rank())
            .map(|i| {
                if Some(i) == basis.unit() {
                    "tau".to_string()
                } else {
                    format!("t_{}", basis.name(i))
                }
            })
            .collect();
        Alphabet::new(names, basis.generator_degrees(), basis.unit().map(|u| u as u8))
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, g: u8) -> i64 {
        self.degrees[g as usize]
    }

    pub fn is_odd(&self, g: u8) -> bool {
        odd(self.degrees[g as usize])
    }

    pub fn name(&self, g: u8) -> &str {
        &self.names[g as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn unit(&self) -> Option<u8> {
        self.unit
    }

    pub fn index_of(&self, name: &str) -> Option<u8> {
        self.names.iter().position(|n| n == name).map(|i| i as u8)
    }

    pub fn word_degree(&self, w: &[u8]) -> i64 {
        w.iter().map(|&g| self.degree(g)).sum()
    }

    pub fn word_parity(&self, w: &[u8]) -> bool {
        w.iter().filter(|&&g| self.is_odd(g)).count() % 2 == 1
    }

    /// All words of the given length (lexicographic order).
    pub fn words(&self, len: usize) -> Vec<Word> {
        let r = self.rank();
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            let mut next = Vec::with_capacity(out.len() * r);
            for w in &out {
                for g in 0..r {
                    let mut v = w.clone();
                    v.push(g as u8);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    /// Words of the given length and degree, optionally avoiding the unit letter.
    pub fn words_of_degree(&self, len: usize, degree: i64, avoid_unit: bool) -> Vec<Word> {
        let letters: Vec<u8> = (0..self.rank() as u8)
            .filter(|&g| !(avoid_unit && Some(g) == self.unit))
            .collect();
        let (lo, hi) = letters.iter().fold((i64::MAX, i64::MIN), |(l, h), &g| {
            (l.min(self.degree(g)), h.max(self.degree(g)))
        });
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(len);
        self.words_rec(&letters, len, degree, lo, hi, &mut cur, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn words_rec(&self, letters: &[u8], len: usize, degree: i64, lo: i64, hi: i64, cur: &mut Word, out: &mut Vec<Word>) {
        let left = (len - cur.len()) as i64;
        if left == 0 {
            if degree == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if letters.is_empty() || degree < lo * left || degree > hi * left {
            return;
        }
        for &g in letters {
            cur.push(g);
            self.words_rec(letters, len, degree - self.degree(g), lo, hi, cur, out);
            cur.pop();
        }
    }

    pub fn format_word(&self, w: &[u8]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&g| self.name(g)).collect::<Vec<_>>().join("*")
    }
}

/// Sign (−1)^{|u||v|} for words u, v.
pub(crate) fn swap_sign(alpha: &Alphabet, u: &[u8], v: &[u8]) -> bool {
    alpha.word_parity(u) && alpha.word_parity(v)
}

/// A finite linear combination of tensor words.
#[derive(Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct TensorElement {
    terms: BTreeMap<Word, Scalar>,
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("{c}·{w:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl TensorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(g: u8) -> Self {
        Self::word(vec![g], Scalar::one())
    }

    pub fn word(w: Word, c: Scalar) -> Self {
        let mut t = Self::zero();
        t.add_term(w, c);
        t
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, Scalar)>) -> Self {
        let mut t = Self::zero();
        for (w, c) in terms {
            t.add_term(w, c);
        }
        t
    }

    pub fn terms(&self) -> &BTreeMap<Word, Scalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Word, Scalar> {
        self.terms
    }

    pub fn coefficient(&self, w: &[u8]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(e) => {
                *e += &c;
                if e.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &TensorElement, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x * c);
        }
    }

    pub fn add(&self, other: &TensorElement) -> TensorElement {
        let mut t = self.clone();
        t.add_scaled(other, &Scalar::one());
        t
    }

    pub fn sub(&self, other: &TensorElement) -> TensorElement {
        let mut t = self.clone();
        t.add_scaled(other, &Scalar::from_int(-1));
        t
    }

    pub fn scale(&self, c: &Scalar) -> TensorElement {
        let mut t = TensorElement::zero();
        t.add_scaled(self, c);
        t
    }

    pub fn neg(&self) -> TensorElement {
        self.scale(&Scalar::from_int(-1))
    }

    /// Associative (concatenation) product, dropping words longer than `max_len`.
    pub fn concat(&self, other: &TensorElement, max_len: Option<usize>) -> TensorElement {
        let mut t = TensorElement::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                if max_len.is_some_and(|n| u.len() + v.len() > n) {
                    continue;
                }
                let mut w = u.clone();
                w.extend_from_slice(v);
                t.add_term(w, a * b);
            }
        }
        t
    }

    /// Graded commutator ab − (−1)^{|a||b|} ba, computed termwise.
    pub fn bracket(alpha: &Alphabet, a: &TensorElement, b: &TensorElement) -> TensorElement {
        Self::bracket_trunc(alpha, a, b, None)
    }

    pub(crate) fn bracket_trunc(alpha: &Alphabet, a: &TensorElement, b: &TensorElement, max_len: Option<usize>) -> TensorElement {
        let mut t = TensorElement::zero();
        for (u, x) in &a.terms {
            for (v, y) in &b.terms {
                if max_len.is_some_and(|n| u.len() + v.len() > n) {
                    continue;
                }
                let c = x * y;
                let mut uv = u.clone();
                uv.extend_from_slice(v);
                let mut vu = v.clone();
                vu.extend_from_slice(u);
                t.add_term(uv, c.clone());
                let s = if swap_sign(alpha, u, v) { c } else { -c };
                t.add_term(vu, s);
            }
        }
        t
    }

    /// Bracket that refuses to produce words longer than `max_len`.
    pub fn bracket_within(alpha: &Alphabet, a: &TensorElement, b: &TensorElement, max_len: usize) -> Result<TensorElement, LieError> {
        let la = a.max_order().unwrap_or(0);
        let lb = b.max_order().unwrap_or(0);
        if !a.is_zero() && !b.is_zero() && la + lb > max_len {
            return Err(LieError::Truncation {
                order: la + lb,
                limit: max_len,
            });
        }
        Ok(Self::bracket(alpha, a, b))
    }

    pub fn truncate(&self, max_len: usize) -> TensorElement {
        TensorElement {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() <= max_len)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn order_part(&self, n: usize) -> TensorElement {
        TensorElement {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == n)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn orders(&self) -> Vec<usize> {
        let mut o: Vec<usize> = self.terms.keys().map(|w| w.len()).collect();
        o.sort_unstable();
        o.dedup();
        o
    }

    pub fn min_order(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).min()
    }

    pub fn max_order(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).max()
    }

    /// Common degree of all words, if any; `None` for inhomogeneous or zero.
    pub fn degree(&self, alpha: &Alphabet) -> Option<i64> {
        let mut it = self.terms.keys().map(|w| alpha.word_degree(w));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn contains_letter(&self, g: u8) -> bool {
        self.terms.keys().any(|w| w.contains(&g))
    }

    /// θ(w) = [[…[g1,g2],…],gn] on a single word.
    pub fn left_bracketing(alpha: &Alphabet, w: &[u8]) -> TensorElement {
        let Some((&first, rest)) = w.split_first() else {
            return TensorElement::zero();
        };
        let mut cur = TensorElement::generator(first);
        let mut cur_odd = alpha.is_odd(first);
        for &h in rest {
            let mut next = TensorElement::zero();
            let h_odd = alpha.is_odd(h);
            for (u, c) in &cur.terms {
                let mut uh = u.clone();
                uh.push(h);
                next.add_term(uh, c.clone());
                let mut hu = vec![h];
                hu.extend_from_slice(u);
                next.add_term(hu, if cur_odd && h_odd { c.clone() } else { -c });
            }
            cur = next;
            cur_odd ^= h_odd;
        }
        cur
    }

    /// Dynkin projection θ(x)/n applied to each order-n component.
    pub fn dynkin_project(&self, alpha: &Alphabet) -> Result<TensorElement, LieError> {
        let mut out = TensorElement::zero();
        for (w, c) in &self.terms {
            if w.is_empty() {
                return Err(LieError::OrderZero);
            }
            let f = c / &Scalar::from_int(w.len() as i64);
            out.add_scaled(&Self::left_bracketing(alpha, w), &f);
        }
        Ok(out)
    }

    /// Membership in the free Lie algebra (Dynkin fixpoint).
    pub fn is_lie(&self, alpha: &Alphabet) -> bool {
        match self.dynkin_project(alpha) {
            Ok(p) => &p == self,
            Err(_) => false,
        }
    }

    pub fn display(&self, alpha: &Alphabet) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(w, c)| format!("{c} {}", alpha.format_word(w)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}
