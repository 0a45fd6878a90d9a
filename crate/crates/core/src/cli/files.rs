//! Input file formats and the bracket-expression syntax.
//!
//! Algebra files list the basis, the nonzero products `[a, b, c, coeff]`
//! meaning a·b = coeff·c + …, and optionally a pairing matrix. Products with
//! a flagged unit and the graded-symmetric partner of each listed product
//! are filled in when absent.
//!
//! Expressions are sums of rational multiples of nested brackets over
//! generator names, e.g. `1/2 [t_x, [tau, t_x]] - 3 [tau, t_x]`; the comma
//! is optional.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{CliError, ErrorCode};
use crate::graded::{odd, validate_frobenius, Algebra, GradedBasis, Pairing, StructureConstants};
use crate::lie::{m2_from_product, Alphabet, CnStructure, Derivation, PointedDiffeo, TensorElement};
use crate::scalar::Scalar;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BasisEntry {
    pub name: String,
    pub degree: i64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unit: bool,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub basis: Vec<BasisEntry>,
    #[serde(default)]
    pub product: Vec<[String; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing_degree: Option<i64>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PartEntry {
    pub order: usize,
    #[serde(default = "one")]
    pub degree: i64,
    pub images: BTreeMap<String, String>,
}

fn one() -> i64 {
    1
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    #[serde(default)]
    pub parts: Vec<PartEntry>,
}

/// A pointed morphism, either as exp(γ) or as g ↦ g + displacement(g).
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismFile {
    pub max_len: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exp: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub displacement: Option<BTreeMap<String, String>>,
}

fn read(path: &std::path::Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::new(ErrorCode::Io, format!("{}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| {
        let mut err = CliError::new(ErrorCode::Syntax, format!("{what}: {e}"));
        err.line = Some(e.line());
        err.column = Some(e.column());
        err
    })
}

fn scalar(s: &str, at: &str) -> Result<Scalar, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::new(ErrorCode::Syntax, format!("{at}: {s:?} is not a rational \"p/q\"")))
}

impl AlgebraFile {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        parse_json(&read(path)?, &path.display().to_string())
    }

    /// Parse from JSON text; `source` names the input in error messages.
    pub fn parse(text: &str, source: &str) -> Result<Self, CliError> {
        parse_json(text, source)
    }

    /// Build the algebra; the pairing is validated only when `need_pairing`.
    pub fn build(&self, need_pairing: bool) -> Result<Algebra, CliError> {
        let units: Vec<usize> = self.basis.iter().enumerate().filter(|(_, b)| b.unit).map(|(i, _)| i).collect();
        if units.len() > 1 {
            return Err(CliError::new(ErrorCode::Validation, "at most one basis element may be the unit"));
        }
        let basis = GradedBasis::new(self.basis.iter().map(|b| (b.name.clone(), b.degree)).collect(), units.first().copied())
            .map_err(|e| CliError::new(ErrorCode::Validation, format!("basis: {e}")))?;
        let index = |n: &str, at: &str| {
            basis
                .index_of(n)
                .ok_or_else(|| CliError::new(ErrorCode::Syntax, format!("{at}: unknown basis element {n:?}")))
        };
        let mut given: BTreeMap<(usize, usize, usize), Scalar> = BTreeMap::new();
        for (k, [a, b, c, coeff]) in self.product.iter().enumerate() {
            let at = format!("product[{k}]");
            let (i, j, l) = (index(a, &at)?, index(b, &at)?, index(c, &at)?);
            if basis.degree(i) + basis.degree(j) != basis.degree(l) {
                return Err(CliError::new(
                    ErrorCode::Degree,
                    format!("{at}: |{a}| + |{b}| = {} but |{c}| = {}", basis.degree(i) + basis.degree(j), basis.degree(l)),
                ));
            }
            *given.entry((i, j, l)).or_insert_with(Scalar::zero) += &scalar(coeff, &at)?;
        }
        let mut filled = given.clone();
        for ((i, j, l), c) in &given {
            let s = Scalar::sign(odd(basis.degree(*i)) && odd(basis.degree(*j)));
            if !given.keys().any(|(a, b, _)| (*a, *b) == (*j, *i)) {
                filled.insert((*j, *i, *l), &s * c);
            }
        }
        if let Some(u) = basis.unit() {
            for x in 0..basis.rank() {
                for (a, b) in [(u, x), (x, u)] {
                    if !given.keys().any(|(p, q, _)| (*p, *q) == (a, b)) {
                        filled.insert((a, b, x), Scalar::one());
                    }
                }
            }
        }
        let mut product = StructureConstants::new();
        for ((i, j, l), c) in filled {
            product.set(i, j, l, c);
        }
        let pairing = match &self.pairing {
            None => None,
            Some(rows) => {
                let degree = self
                    .pairing_degree
                    .ok_or_else(|| CliError::new(ErrorCode::Syntax, "pairing given without pairing_degree"))?;
                let mut matrix = Vec::new();
                for (i, row) in rows.iter().enumerate() {
                    let mut r = Vec::new();
                    for (j, s) in row.iter().enumerate() {
                        r.push(scalar(s, &format!("pairing[{i}][{j}]"))?);
                    }
                    matrix.push(r);
                }
                Some(Pairing { matrix, degree })
            }
        };
        let alg = Algebra { basis, product, pairing };
        let violations = if need_pairing {
            if alg.pairing.is_none() {
                return Err(CliError::new(ErrorCode::Validation, "this command needs a pairing"));
            }
            validate_frobenius(&alg)
        } else {
            alg.validate_product()
        };
        if let Some(v) = violations.first() {
            let mut e = CliError::new(ErrorCode::Validation, format!("{}: {} at ({})", v.kind, v.detail, v.witness.join(", ")));
            e.witness = v.witness.clone();
            return Err(e);
        }
        Ok(alg)
    }

    pub fn from_algebra(alg: &Algebra) -> Self {
        let b = &alg.basis;
        let basis = (0..b.rank())
            .map(|i| BasisEntry {
                name: b.name(i).to_string(),
                degree: b.degree(i),
                unit: b.unit() == Some(i),
            })
            .collect();
        let product = alg
            .product
            .entries()
            .filter(|(_, c)| !c.is_zero())
            .filter(|((i, j, _), _)| b.unit() != Some(*i) && b.unit() != Some(*j))
            .map(|((i, j, k), c)| [b.name(*i).to_string(), b.name(*j).to_string(), b.name(*k).to_string(), c.to_string()])
            .collect();
        AlgebraFile {
            basis,
            product,
            pairing: alg
                .pairing
                .as_ref()
                .map(|p| p.matrix.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect()),
            pairing_degree: alg.pairing.as_ref().map(|p| p.degree),
        }
    }
}

impl StructureFile {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        parse_json(&read(path)?, &path.display().to_string())
    }

    /// Parse from JSON text; `source` names the input in error messages.
    pub fn parse(text: &str, source: &str) -> Result<Self, CliError> {
        parse_json(text, source)
    }

    /// m_2 from the algebra plus the listed parts. The level defaults to one
    /// more than the highest order present, and at least 3.
    pub fn build(&self, alg: &Algebra, alpha: &Alphabet, level: Option<usize>) -> Result<CnStructure, CliError> {
        let mut m = if self.parts.iter().any(|p| p.order == 2) {
            Derivation::zero(alpha.rank(), 1)
        } else {
            m2_from_product(alg, alpha)
        };
        for (k, part) in self.parts.iter().enumerate() {
            let at = format!("parts[{k}]");
            if part.degree != 1 {
                return Err(CliError::new(ErrorCode::Degree, format!("{at}: structure parts have degree 1, not {}", part.degree)));
            }
            let xi = field_from_images(alpha, &part.images, part.degree, Some(part.order), &at)?;
            m = m.add(&xi);
        }
        let top = m.max_order().unwrap_or(2);
        let level = level.or(self.level).unwrap_or((top + 1).max(3));
        CnStructure::new(m, level).map_err(|e| CliError::new(ErrorCode::Validation, format!("structure: {e}")))
    }

    pub fn from_structure(alpha: &Alphabet, m: &CnStructure) -> Self {
        let parts = (3..m.level())
            .map(|i| (i, m.part(i)))
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, p)| PartEntry {
                order: i,
                degree: 1,
                images: images_of(alpha, &p),
            })
            .collect();
        StructureFile {
            level: Some(m.level()),
            parts,
        }
    }
}

impl MorphismFile {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        parse_json(&read(path)?, &path.display().to_string())
    }

    /// Parse from JSON text; `source` names the input in error messages.
    pub fn parse(text: &str, source: &str) -> Result<Self, CliError> {
        parse_json(text, source)
    }

    pub fn build(&self, alpha: &Alphabet) -> Result<PointedDiffeo, CliError> {
        let bad = |e: crate::lie::LieError| CliError::new(ErrorCode::Validation, format!("morphism: {e}"));
        match (&self.exp, &self.displacement) {
            (Some(g), None) => {
                let gamma = field_from_images(alpha, g, 0, None, "exp")?;
                PointedDiffeo::exp(alpha, &gamma, self.max_len).map_err(bad)
            }
            (None, Some(d)) => {
                let disp = field_from_images(alpha, d, 0, None, "displacement")?;
                let images = (0..alpha.rank() as u8)
                    .map(|g| TensorElement::generator(g).add(disp.image(g)))
                    .collect();
                PointedDiffeo::new(alpha, images, self.max_len).map_err(bad)
            }
            _ => Err(CliError::new(ErrorCode::Syntax, "morphism file needs exactly one of \"exp\" and \"displacement\"")),
        }
    }

    pub fn from_diffeo(alpha: &Alphabet, phi: &PointedDiffeo) -> Self {
        MorphismFile {
            max_len: phi.max_len(),
            exp: None,
            displacement: Some(images_of(alpha, &phi.displacement())),
        }
    }
}

/// Generator images keyed by name; unnamed generators map to 0.
fn field_from_images(
    alpha: &Alphabet,
    images: &BTreeMap<String, String>,
    degree: i64,
    order: Option<usize>,
    at: &str,
) -> Result<Derivation, CliError> {
    let mut out = vec![TensorElement::zero(); alpha.rank()];
    for (name, text) in images {
        let at = format!("{at}.images.{name}");
        let g = alpha
            .index_of(name)
            .ok_or_else(|| CliError::new(ErrorCode::Syntax, format!("{at}: unknown generator {name:?}")))?;
        let x = parse_expression(alpha, text).map_err(|mut e| {
            e.message = format!("{at}: {}", e.message);
            e
        })?;
        for w in x.terms().keys() {
            if let Some(n) = order {
                if w.len() != n {
                    return Err(CliError::new(ErrorCode::Degree, format!("{at}: term of order {} in a part of order {n}", w.len())));
                }
            }
            let d = alpha.word_degree(w);
            if d != alpha.degree(g) + degree {
                return Err(CliError::new(
                    ErrorCode::Degree,
                    format!("{at}: term of degree {d}, expected {}", alpha.degree(g) + degree),
                ));
            }
        }
        out[g as usize] = x;
    }
    Derivation::new_lie(alpha, out, degree).map_err(|e| CliError::new(ErrorCode::Validation, format!("{at}: {e}")))
}

fn images_of(alpha: &Alphabet, xi: &Derivation) -> BTreeMap<String, String> {
    (0..alpha.rank() as u8)
        .filter(|&g| !xi.image(g).is_zero())
        .map(|g| (alpha.name(g).to_string(), format_expression(alpha, xi.image(g))))
        .collect()
}

struct Parser<'a> {
    alpha: &'a Alphabet,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> CliError {
        let mut e = CliError::new(ErrorCode::Syntax, format!("column {}: {}", self.pos + 1, msg.into()));
        e.column = Some(self.pos + 1);
        e
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Option<Scalar> {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'/') {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    fn lie(&mut self) -> Result<TensorElement, CliError> {
        match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                let a = self.lie()?;
                if self.peek() == Some(b',') {
                    self.pos += 1;
                }
                let b = self.lie()?;
                if self.peek() != Some(b']') {
                    return Err(self.err("expected ']'"));
                }
                self.pos += 1;
                Ok(TensorElement::bracket(self.alpha, &a, &b))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
                match self.alpha.index_of(name) {
                    Some(g) => Ok(TensorElement::generator(g)),
                    None => {
                        self.pos = start;
                        Err(self.err(format!("unknown generator {name:?}")))
                    }
                }
            }
            _ => Err(self.err("expected a generator or '['")),
        }
    }

    fn term(&mut self) -> Result<TensorElement, CliError> {
        let coeff = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let at = self.pos;
                let c = self.number().ok_or_else(|| {
                    self.pos = at;
                    self.err("malformed coefficient")
                })?;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                }
                if self.peek().is_none() || matches!(self.peek(), Some(b'+' | b'-')) {
                    if c.is_zero() {
                        return Ok(TensorElement::zero());
                    }
                    return Err(self.err("a coefficient must multiply a bracket"));
                }
                c
            }
            _ => Scalar::one(),
        };
        Ok(self.lie()?.scale(&coeff))
    }

    fn expression(&mut self) -> Result<TensorElement, CliError> {
        let mut total = TensorElement::zero();
        let mut sign = Scalar::one();
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = Scalar::from_int(-1);
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        loop {
            total.add_scaled(&self.term()?, &sign);
            match self.peek() {
                None => return Ok(total),
                Some(b'+') => sign = Scalar::one(),
                Some(b'-') => sign = Scalar::from_int(-1),
                Some(_) => return Err(self.err("expected '+', '-' or end of expression")),
            }
            self.pos += 1;
        }
    }
}

pub fn parse_expression(alpha: &Alphabet, text: &str) -> Result<TensorElement, CliError> {
    Parser {
        alpha,
        src: text.as_bytes(),
        pos: 0,
    }
    .expression()
}

fn left_normed(alpha: &Alphabet, w: &[u8]) -> String {
    let mut s = alpha.name(w[0]).to_string();
    for &g in &w[1..] {
        s = format!("[{s}, {}]", alpha.name(g));
    }
    s
}

/// A Lie element as a sum of left-normed brackets: by the Dynkin projector,
/// x = Σ_w (c_w / n) [[w_1, w_2], …, w_n] on order-n words.
pub fn format_expression(alpha: &Alphabet, x: &TensorElement) -> String {
    let mut out = String::new();
    for (w, c) in x.terms() {
        let c = if w.len() > 1 { c * &Scalar::from_frac(1, w.len() as i64) } else { c.clone() };
        let neg = c.is_negative();
        let abs = if neg { -c } else { c };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() {
            out.push_str(&format!("{abs} "));
        }
        out.push_str(&left_normed(alpha, w));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::models;
    use crate::testkit::*;

    #[test]
    fn expressions_roundtrip_through_the_dynkin_form() {
        for a in [alpha_tau_t(), alpha_mixed(), alpha_three()] {
            let mut rng = rng_from(8);
            for n in 1..=4 {
                let x = random_homogeneous_lie(&a, &mut rng, n);
                assert_eq!(parse_expression(&a, &format_expression(&a, &x)).unwrap(), x);
            }
        }
    }

    #[test]
    fn bracket_syntax() {
        let a = alpha_tau_t();
        let x = parse_expression(&a, "2 [tau t] - 1/2*[t, [t, t]]").unwrap();
        let tau = TensorElement::generator(0);
        let t = TensorElement::generator(1);
        let expect = TensorElement::bracket(&a, &tau, &t)
            .scale(&Scalar::from_int(2))
            .sub(&TensorElement::bracket(&a, &t, &TensorElement::bracket(&a, &t, &t)).scale(&Scalar::from_frac(1, 2)));
        assert_eq!(x, expect);
        assert!(parse_expression(&a, "0").unwrap().is_zero());
    }

    #[test]
    fn expression_errors_carry_columns() {
        let a = alpha_tau_t();
        let e = parse_expression(&a, "[tau, s]").unwrap_err();
        assert_eq!(e.code, ErrorCode::Syntax);
        assert_eq!(e.column, Some(7));
        let e = parse_expression(&a, "[tau, t").unwrap_err();
        assert_eq!(e.column, Some(8));
    }

    #[test]
    fn empty_structure_is_the_product() {
        let alg = models::truncated_polynomial(1, 2);
        let a = Alphabet::from_basis(&alg.basis);
        let m = StructureFile::default().build(&alg, &a, None).unwrap();
        assert_eq!(m.level(), 3);
        assert_eq!(m.field(), &m2_from_product(&alg, &a));
    }

    #[test]
    fn algebra_files_roundtrip() {
        for alg in frobenius_models() {
            let f = AlgebraFile::from_algebra(&alg);
            let text = serde_json::to_string(&f).unwrap();
            let back: AlgebraFile = serde_json::from_str(&text).unwrap();
            assert_eq!(back.build(true).unwrap(), alg);
        }
    }

    #[test]
    fn degree_mismatch_is_its_own_code() {
        let f: AlgebraFile = serde_json::from_str(
            r#"{"basis": [{"name": "1", "degree": 0, "unit": true}, {"name": "x", "degree": 2}],
                "product": [["x", "x", "x", "1"]]}"#,
        )
        .unwrap();
        assert_eq!(f.build(false).unwrap_err().code, ErrorCode::Degree);
    }
}
