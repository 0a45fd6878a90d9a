//! Graded bases, Koszul signs, and finite-dimensional Frobenius algebra data.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::linalg::determinant;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GradedError {
    #[error("basis must have at least one element")]
    EmptyBasis,
    #[error("duplicate basis name {0:?}")]
    DuplicateName(String),
    #[error("basis rank {0} exceeds the supported maximum of 255")]
    TooLarge(usize),
    #[error("unit element {0:?} must have degree 0")]
    UnitDegree(String),
    #[error("index {0} out of range")]
    Index(usize),
    #[error("not a permutation: {0:?}")]
    NotPermutation(Vec<usize>),
}

pub(crate) fn odd(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

/// Sign of rearranging homogeneous symbols of the given degrees so that
/// position `i` of the result holds symbol `perm[i]`.
pub fn koszul_sign(perm: &[usize], degrees: &[i64]) -> Result<Scalar, GradedError> {
    let k = perm.len();
    if degrees.len() != k {
        return Err(GradedError::NotPermutation(perm.to_vec()));
    }
    let mut seen = vec![false; k];
    for &p in perm {
        if p >= k || seen[p] {
            return Err(GradedError::NotPermutation(perm.to_vec()));
        }
        seen[p] = true;
    }
    let mut flips = false;
    for i in 0..k {
        for j in i + 1..k {
            if perm[i] > perm[j] && odd(degrees[perm[i]]) && odd(degrees[perm[j]]) {
                flips = !flips;
            }
        }
    }
    Ok(Scalar::sign(flips))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    pub name: String,
    pub degree: i64,
}

/// Homogeneous basis x_0..x_{r-1} of V, optionally with a distinguished unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    elements: Vec<BasisElement>,
    unit: Option<usize>,
}

impl GradedBasis {
    pub fn new(elements: Vec<(String, i64)>, unit: Option<usize>) -> Result<Self, GradedError> {
        if elements.is_empty() {
            return Err(GradedError::EmptyBasis);
        }
        if elements.len() > 255 {
            return Err(GradedError::TooLarge(elements.len()));
        }
        let mut names = BTreeSet::new();
        for (n, _) in &elements {
            if !names.insert(n.clone()) {
                return Err(GradedError::DuplicateName(n.clone()));
            }
        }
        if let Some(u) = unit {
            let (n, d) = elements.get(u).ok_or(GradedError::Index(u))?;
            if *d != 0 {
                return Err(GradedError::UnitDegree(n.clone()));
            }
        }
        Ok(GradedBasis {
            elements: elements
                .into_iter()
                .map(|(name, degree)| BasisElement { name, degree })
                .collect(),
            unit,
        })
    }

    pub fn rank(&self) -> usize {
        self.elements.len()
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.elements[i].degree
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elements[i].name
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e.name == name)
    }

    /// Degree of the dual suspended generator g_i.
    pub fn generator_degree(&self, i: usize) -> i64 {
        1 - self.elements[i].degree
    }

    pub fn generator_degrees(&self) -> Vec<i64> {
        (0..self.rank()).map(|i| self.generator_degree(i)).collect()
    }

    /// Relabel the basis: new element `i` is old element `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> GradedBasis {
        GradedBasis {
            elements: perm.iter().map(|&p| self.elements[p].clone()).collect(),
            unit: self.unit.map(|u| perm.iter().position(|&p| p == u).unwrap()),
        }
    }
}

/// Structure constants a^k_{ij} with x_i x_j = Σ_k a^k_{ij} x_k, keyed (i, j, k).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StructureConstants {
    entries: BTreeMap<(usize, usize, usize), Scalar>,
}

impl StructureConstants {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, c: Scalar) {
        if c.is_zero() {
            self.entries.remove(&(i, j, k));
        } else {
            self.entries.insert((i, j, k), c);
        }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.entries.get(&(i, j, k)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &Scalar)> {
        self.entries.iter()
    }

    /// Coefficient vector of x_i x_j.
    pub fn product(&self, i: usize, j: usize) -> BTreeMap<usize, Scalar> {
        self.entries
            .range((i, j, 0)..=(i, j, usize::MAX))
            .map(|(&(_, _, k), c)| (k, c.clone()))
            .collect()
    }

    pub fn multiply(&self, a: &BTreeMap<usize, Scalar>, b: &BTreeMap<usize, Scalar>) -> BTreeMap<usize, Scalar> {
        let mut out = BTreeMap::new();
        for (i, ca) in a {
            for (j, cb) in b {
                for (k, c) in self.product(*i, *j) {
                    let e = out.entry(k).or_insert_with(Scalar::zero);
                    *e += &(&(ca * cb) * &c);
                }
            }
        }
        out.retain(|_, c: &mut Scalar| !c.is_zero());
        out
    }

    pub fn permuted(&self, perm: &[usize]) -> StructureConstants {
        let inv = invert_perm(perm);
        let mut out = StructureConstants::new();
        for (&(i, j, k), c) in &self.entries {
            out.set(inv[i], inv[j], inv[k], c.clone());
        }
        out
    }
}

fn invert_perm(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// Bilinear pairing on V, nonzero only in total degree `degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    pub matrix: Vec<Vec<Scalar>>,
    pub degree: i64,
}

impl Pairing {
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.matrix[i][j]
    }

    pub fn permuted(&self, perm: &[usize]) -> Pairing {
        Pairing {
            matrix: perm
                .iter()
                .map(|&a| perm.iter().map(|&b| self.matrix[a][b].clone()).collect())
                .collect(),
            degree: self.degree,
        }
    }
}

/// Underlying graded commutative algebra together with an optional pairing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    pub basis: GradedBasis,
    pub product: StructureConstants,
    pub pairing: Option<Pairing>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: String,
    pub witness: Vec<String>,
    pub detail: String,
}

impl Algebra {
    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    /// Connected: degrees are nonnegative and degree 0 is spanned by the unit.
    pub fn is_connected(&self) -> bool {
        let Some(u) = self.basis.unit() else {
            return false;
        };
        (0..self.rank()).all(|i| {
            let d = self.basis.degree(i);
            d > 0 || (d == 0 && i == u)
        })
    }

    /// Relabel the basis; new element `i` is old element `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Algebra {
        Algebra {
            basis: self.basis.permuted(perm),
            product: self.product.permuted(perm),
            pairing: self.pairing.as_ref().map(|p| p.permuted(perm)),
        }
    }

    fn names(&self, idx: &[usize]) -> Vec<String> {
        idx.iter().map(|&i| self.basis.name(i).to_string()).collect()
    }

    /// Exhaustive check of the commutative algebra axioms.
    pub fn validate_product(&self) -> Vec<Violation> {
        let r = self.rank();
        let deg = |i: usize| self.basis.degree(i);
        let mut out = Vec::new();
        for (&(i, j, k), _) in self.product.entries() {
            if i >= r || j >= r || k >= r {
                out.push(Violation {
                    kind: "index".into(),
                    witness: vec![i.to_string(), j.to_string(), k.to_string()],
                    detail: "structure constant index out of range".into(),
                });
                return out;
            }
            if deg(i) + deg(j) != deg(k) {
                out.push(Violation {
                    kind: "degree".into(),
                    witness: self.names(&[i, j, k]),
                    detail: format!(
                        "product of degrees {} and {} has a component of degree {}",
                        deg(i),
                        deg(j),
                        deg(k)
                    ),
                });
            }
        }
        for i in 0..r {
            for j in 0..r {
                let s = Scalar::sign(odd(deg(i)) && odd(deg(j)));
                for k in 0..r {
                    if self.product.get(i, j, k) != &s * &self.product.get(j, i, k) {
                        out.push(Violation {
                            kind: "commutativity".into(),
                            witness: self.names(&[i, j]),
                            detail: format!("x_i x_j != ±x_j x_i in component {}", self.basis.name(k)),
                        });
                        break;
                    }
                }
            }
        }
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let ij = self.product.product(i, j);
                    let jk = self.product.product(j, k);
                    let left = self.product.multiply(&ij, &BTreeMap::from([(k, Scalar::one())]));
                    let right = self.product.multiply(&BTreeMap::from([(i, Scalar::one())]), &jk);
                    if left != right {
                        out.push(Violation {
                            kind: "associativity".into(),
                            witness: self.names(&[i, j, k]),
                            detail: "(ab)c != a(bc)".into(),
                        });
                    }
                }
            }
        }
        if let Some(u) = self.basis.unit() {
            for i in 0..r {
                let expect = BTreeMap::from([(i, Scalar::one())]);
                if self.product.product(u, i) != expect || self.product.product(i, u) != expect {
                    out.push(Violation {
                        kind: "unit".into(),
                        witness: self.names(&[u, i]),
                        detail: "1·x != x".into(),
                    });
                }
            }
        }
        out
    }

    /// Exhaustive check of the pairing axioms and of ⟨ab,c⟩ = ⟨a,bc⟩.
    pub fn validate_pairing(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let Some(p) = &self.pairing else {
            out.push(Violation {
                kind: "pairing".into(),
                witness: vec![],
                detail: "no pairing supplied".into(),
            });
            return out;
        };
        let r = self.rank();
        let deg = |i: usize| self.basis.degree(i);
        if p.matrix.len() != r || p.matrix.iter().any(|row| row.len() != r) {
            out.push(Violation {
                kind: "pairing-shape".into(),
                witness: vec![],
                detail: format!("pairing matrix must be {r}x{r}"),
            });
            return out;
        }
        for i in 0..r {
            for j in 0..r {
                let v = p.get(i, j);
                if !v.is_zero() && deg(i) + deg(j) != p.degree {
                    out.push(Violation {
                        kind: "pairing-degree".into(),
                        witness: self.names(&[i, j]),
                        detail: format!("nonzero pairing in total degree {} != {}", deg(i) + deg(j), p.degree),
                    });
                }
                let s = Scalar::sign(odd(deg(i)) && odd(deg(j)));
                if v != &(&s * p.get(j, i)) {
                    out.push(Violation {
                        kind: "pairing-symmetry".into(),
                        witness: self.names(&[i, j]),
                        detail: "pairing is not graded symmetric".into(),
                    });
                }
            }
        }
        if determinant(&p.matrix).is_zero() {
            out.push(Violation {
                kind: "pairing-degenerate".into(),
                witness: vec![],
                detail: "pairing matrix is singular".into(),
            });
        }
        let pair = |a: &BTreeMap<usize, Scalar>, c: usize| -> Scalar {
            a.iter().map(|(k, x)| x * p.get(*k, c)).sum()
        };
        let pair_r = |a: usize, b: &BTreeMap<usize, Scalar>| -> Scalar {
            b.iter().map(|(k, x)| x * p.get(a, *k)).sum()
        };
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    if pair(&self.product.product(i, j), k) != pair_r(i, &self.product.product(j, k)) {
                        out.push(Violation {
                            kind: "invariance".into(),
                            witness: self.names(&[i, j, k]),
                            detail: "<ab,c> != <a,bc>".into(),
                        });
                    }
                }
            }
        }
        out
    }
}

/// Full Frobenius validation: algebra axioms plus pairing axioms.
pub fn validate_frobenius(a: &Algebra) -> Vec<Violation> {
    let mut v = a.validate_product();
    v.extend(a.validate_pairing());
    v
}

/// Standard small models used in tests, examples and the CLI.
pub mod models {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    /// Truncated polynomial algebra Q[x]/x^{k+1} with |x| = d, and
    /// ⟨x^i, x^j⟩ = δ_{i+j,k}.
    pub fn truncated_polynomial(k: usize, d: i64) -> Algebra {
        let elements = (0..=k)
            .map(|i| {
                let name = match i {
                    0 => "1".to_string(),
                    1 => "x".to_string(),
                    _ => format!("x{i}"),
                };
                (name, d * i as i64)
            })
            .collect();
        let basis = GradedBasis::new(elements, Some(0)).unwrap();
        let mut product = StructureConstants::new();
        for i in 0..=k {
            for j in 0..=k {
                if i + j <= k {
                    product.set(i, j, i + j, s(1));
                }
            }
        }
        let matrix = (0..=k)
            .map(|i| (0..=k).map(|j| if i + j == k { s(1) } else { s(0) }).collect())
            .collect();
        Algebra {
            basis,
            product,
            pairing: Some(Pairing {
                matrix,
                degree: d * k as i64,
            }),
        }
    }

    /// Exterior algebra on generators of the given odd degrees, with the
    /// pairing read off from the top class.
    pub fn exterior(degrees: &[i64]) -> Algebra {
        let n = degrees.len();
        let subsets: Vec<Vec<usize>> = (0..1usize << n)
            .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
            .collect();
        let mut order: Vec<usize> = (0..subsets.len()).collect();
        order.sort_by_key(|&m| (subsets[m].len(), subsets[m].clone()));
        let subsets: Vec<Vec<usize>> = order.iter().map(|&m| subsets[m].clone()).collect();
        let letters = ["a", "b", "c", "e", "f"];
        let elements = subsets
            .iter()
            .map(|s| {
                let name = if s.is_empty() {
                    "1".to_string()
                } else {
                    s.iter().map(|&i| letters[i]).collect::<String>()
                };
                (name, s.iter().map(|&i| degrees[i]).sum())
            })
            .collect();
        let basis = GradedBasis::new(elements, Some(0)).unwrap();
        let index = |s: &[usize]| subsets.iter().position(|t| t == s).unwrap();
        let mut product = StructureConstants::new();
        for (i, a) in subsets.iter().enumerate() {
            for (j, b) in subsets.iter().enumerate() {
                if a.iter().any(|x| b.contains(x)) {
                    continue;
                }
                let mut word: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
                let mut sign = false;
                for p in 0..word.len() {
                    for q in 0..word.len() - 1 - p {
                        if word[q] > word[q + 1] {
                            word.swap(q, q + 1);
                            sign ^= odd(degrees[word[q]]) && odd(degrees[word[q + 1]]);
                        }
                    }
                }
                product.set(i, j, index(&word), Scalar::sign(sign));
            }
        }
        let top = subsets.len() - 1;
        let dtop: i64 = degrees.iter().sum();
        let r = subsets.len();
        let mut matrix = vec![vec![s(0); r]; r];
        for i in 0..r {
            for j in 0..r {
                matrix[i][j] = product.get(i, j, top);
            }
        }
        Algebra {
            basis,
            product,
            pairing: Some(Pairing { matrix, degree: dtop }),
        }
    }

    /// Commutative but non-associative two-dimensional algebra: e·e = 2e,
    /// e·x = x·e = x, so (ee)x = 2x while e(ex) = x.
    pub fn non_associative() -> Algebra {
        let basis = GradedBasis::new(vec![("e".into(), 0), ("x".into(), 2)], None).unwrap();
        let mut product = StructureConstants::new();
        product.set(0, 0, 0, s(2));
        product.set(0, 1, 1, s(1));
        product.set(1, 0, 1, s(1));
        Algebra {
            basis,
            product,
            pairing: None,
        }
    }

    /// H*(S^d × S^e) with generators of even degrees d, e.
    pub fn product_of_spheres(d: i64, e: i64) -> Algebra {
        let basis = GradedBasis::new(
            vec![("1".into(), 0), ("a".into(), d), ("b".into(), e), ("ab".into(), d + e)],
            Some(0),
        )
        .unwrap();
        let mut product = StructureConstants::new();
        for i in 0..4 {
            product.set(0, i, i, s(1));
            product.set(i, 0, i, s(1));
        }
        let sg = Scalar::sign(odd(d) && odd(e));
        product.set(1, 2, 3, s(1));
        product.set(2, 1, 3, sg);
        let mut matrix = vec![vec![s(0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                matrix[i][j] = product.get(i, j, 3);
            }
        }
        Algebra {
            basis,
            product,
            pairing: Some(Pairing { matrix, degree: d + e }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::models::*;
    use super::*;

    fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
        p.iter().map(|&i| q[i]).collect()
    }

    fn all_perms(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_perms(k - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, k - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn koszul_basic() {
        assert_eq!(koszul_sign(&[0, 1, 2], &[1, 1, 1]).unwrap(), Scalar::one());
        assert_eq!(koszul_sign(&[1, 0], &[1, 3]).unwrap(), Scalar::from_int(-1));
        assert_eq!(koszul_sign(&[1, 0], &[1, 2]).unwrap(), Scalar::one());
        assert!(koszul_sign(&[0, 0], &[1, 1]).is_err());
    }

    #[test]
    fn koszul_three_cycle_matches_transpositions() {
        let d = [1, 1, 2];
        let cycle = [1, 2, 0];
        let t1 = [1, 0, 2];
        let t2 = [0, 2, 1];
        let dt1: Vec<i64> = t1.iter().map(|&i| d[i]).collect();
        let composite = compose(&t2, &t1);
        assert_eq!(composite, cycle);
        let lhs = koszul_sign(&cycle, &d).unwrap();
        let rhs = koszul_sign(&t1, &d).unwrap() * koszul_sign(&t2, &dt1).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn koszul_is_multiplicative_on_five_symbols() {
        let d = [1, 2, -1, 3, 0];
        let perms = all_perms(5);
        for p in perms.iter().step_by(7) {
            for q in perms.iter().step_by(11) {
                let dq: Vec<i64> = q.iter().map(|&i| d[i]).collect();
                let lhs = koszul_sign(&compose(p, q), &d).unwrap();
                let rhs = koszul_sign(q, &d).unwrap() * koszul_sign(p, &dq).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn standard_models_are_frobenius() {
        for a in [
            truncated_polynomial(1, 2),
            truncated_polynomial(2, 2),
            truncated_polynomial(1, 3),
            exterior(&[1]),
            exterior(&[1, 1]),
            exterior(&[1, 3]),
            product_of_spheres(2, 2),
        ] {
            assert_eq!(validate_frobenius(&a), vec![], "{:?}", a.basis);
        }
    }

    #[test]
    fn associativity_brute_force_on_cp2() {
        let a = truncated_polynomial(2, 2);
        let mut count = 0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let l = a.product.multiply(&a.product.product(i, j), &BTreeMap::from([(k, Scalar::one())]));
                    let r = a.product.multiply(&BTreeMap::from([(i, Scalar::one())]), &a.product.product(j, k));
                    let expect: BTreeMap<usize, Scalar> = if i + j + k <= 2 {
                        BTreeMap::from([(i + j + k, Scalar::one())])
                    } else {
                        BTreeMap::new()
                    };
                    assert_eq!(l, expect);
                    assert_eq!(r, expect);
                    count += 1;
                }
            }
        }
        assert_eq!(count, 27);
    }

    #[test]
    fn degree_violation_reported() {
        let mut a = truncated_polynomial(1, 2);
        a.pairing.as_mut().unwrap().matrix[0][0] = Scalar::one();
        let v = validate_frobenius(&a);
        assert!(v.iter().any(|v| v.kind == "pairing-degree" && v.witness == ["1", "1"]));
    }

    #[test]
    fn non_associative_product_rejected() {
        let v = models::non_associative().validate_product();
        assert!(v.iter().any(|v| v.kind == "associativity" && v.witness == ["e", "e", "x"]));
    }

    #[test]
    fn connectedness() {
        assert!(truncated_polynomial(2, 2).is_connected());
        assert!(exterior(&[1, 1]).is_connected());
    }
}
