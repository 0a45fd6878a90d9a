//! Harrison, dual-coefficient and cyclic Harrison complexes of a strictly
//! graded commutative algebra, assembled block by block in bidegree
//! (order, degree) and solved with exact elimination.
//!
//! Bidegree labels: a vector field ξ of order i has label (i, |ξ| + 1); a
//! 1-form Σ ℓ_g ⊗ dg with coefficients of length i has label (i, |α| − 2)
//! in total degree; a cyclic word of length i has label (i, |β| − 1). All
//! three differentials have bidegree (1, 1).

use std::collections::BTreeSet;

use serde::Serialize;

use crate::forms::{CyclicZeroForm, FormError, OneForm, Symplectic};
use crate::graded::Algebra;
use crate::lie::{m2_from_product, Alphabet, Derivation, TensorElement, Word};
use crate::linalg::{self, Eliminator, PivotStrategy, SparseMatrix, SparseVec};
use crate::scalar::Scalar;

/// Ambient coordinate of a cochain: (word, generator). Cyclic words use the
/// generator slot [`CYCLIC`].
pub type Coord = (Word, u8);

pub const CYCLIC: u8 = u8::MAX;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HarrisonError {
    #[error("normalised complexes need a unital algebra")]
    NotUnital,
    #[error("algebra has no pairing")]
    NoPairing,
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("cochain does not lie in block ({order}, {degree})")]
    OutsideBlock { order: usize, degree: i64 },
    #[error("cochain in block ({order}, {degree}) is not a cocycle")]
    NotCocycle { order: usize, degree: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    /// C(A, A): vector fields with [m, ·].
    Harrison,
    /// C(A, A*): 1-forms with L_m.
    Dual,
    /// CC(A): cyclic 0-forms with L_m.
    Cyclic,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Harrison => "harrison",
            Flavor::Dual => "dual",
            Flavor::Cyclic => "cyclic",
        }
    }

    pub fn parse(s: &str) -> Option<Flavor> {
        match s {
            "harrison" => Some(Flavor::Harrison),
            "dual" => Some(Flavor::Dual),
            "cyclic" => Some(Flavor::Cyclic),
            _ => None,
        }
    }

    /// Lowest order carrying cochains.
    pub fn min_order(self) -> usize {
        match self {
            Flavor::Harrison => 1,
            Flavor::Dual => 0,
            Flavor::Cyclic => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cochain {
    Field(Derivation),
    One(OneForm),
    Zero(CyclicZeroForm),
}

impl Cochain {
    pub fn coords(&self) -> SparseVec<Coord> {
        let mut v = SparseVec::new();
        match self {
            Cochain::Field(xi) => {
                for (g, img) in xi.images().iter().enumerate() {
                    for (w, c) in img.terms() {
                        v.insert((w.clone(), g as u8), c.clone());
                    }
                }
            }
            Cochain::One(f) => {
                for (k, c) in f.terms() {
                    v.insert(k.clone(), c.clone());
                }
            }
            Cochain::Zero(f) => {
                for (w, c) in f.terms() {
                    v.insert((w.clone(), CYCLIC), c.clone());
                }
            }
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Cochain::Field(x) => x.is_zero(),
            Cochain::One(x) => x.is_zero(),
            Cochain::Zero(x) => x.is_zero(),
        }
    }

    pub fn display(&self, alpha: &Alphabet) -> String {
        match self {
            Cochain::Field(x) => x.display(alpha),
            Cochain::One(x) => x.display(alpha),
            Cochain::Zero(x) => x.display(alpha),
        }
    }
}

/// One bidegree block: an echelon basis in ambient coordinates.
#[derive(Clone, Debug)]
pub struct Block {
    pub flavor: Flavor,
    pub normalised: bool,
    pub order: usize,
    pub degree: i64,
    basis: Vec<SparseVec<Coord>>,
    solver: Eliminator<Coord>,
}

impl Block {
    fn from_spanning(flavor: Flavor, normalised: bool, order: usize, degree: i64, span: Vec<SparseVec<Coord>>) -> Self {
        let mut e = Eliminator::new(PivotStrategy::FirstKey, false);
        for v in span {
            e.insert(v);
        }
        let basis: Vec<SparseVec<Coord>> = e.rows().cloned().collect();
        let mut solver = Eliminator::tracking();
        for b in &basis {
            solver.insert(b.clone());
        }
        Block {
            flavor,
            normalised,
            order,
            degree,
            basis,
            solver,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec<Coord>] {
        &self.basis
    }

    /// Coordinates of an ambient vector in this block's basis.
    pub fn coordinates(&self, v: &SparseVec<Coord>) -> Option<SparseVec<usize>> {
        self.solver.solve(v)
    }

    pub fn contains(&self, v: &SparseVec<Coord>) -> bool {
        self.solver.contains(v)
    }

    /// Ambient vector with the given basis coordinates.
    pub fn vector(&self, x: &SparseVec<usize>) -> SparseVec<Coord> {
        let mut v = SparseVec::new();
        for (k, c) in x {
            linalg::axpy(&mut v, c, &self.basis[*k]);
        }
        v
    }
}

/// Cohomology of one block.
#[derive(Clone, Debug, Serialize)]
pub struct CohomologyGroup {
    pub order: usize,
    pub degree: i64,
    pub cochains: usize,
    pub cocycles: usize,
    pub coboundaries: usize,
    pub dim: usize,
    /// Representatives in ambient coordinates, chosen in echelon order.
    #[serde(skip)]
    pub representatives: Vec<SparseVec<Coord>>,
}

/// Rank report for a map induced on cohomology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedMap {
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
}

impl InducedMap {
    pub fn injective(&self) -> bool {
        self.rank == self.source_dim
    }

    pub fn surjective(&self) -> bool {
        self.rank == self.target_dim
    }
}

/// The complex of one flavor over a fixed structure field m.
#[derive(Clone, Debug)]
pub struct Complex {
    alpha: Alphabet,
    m: Derivation,
    flavor: Flavor,
    normalised: bool,
}

impl Complex {
    /// Complex of the strict algebra (differential from m_2).
    pub fn new(alg: &Algebra, flavor: Flavor, normalised: bool) -> Result<Self, HarrisonError> {
        let alpha = Alphabet::from_basis(&alg.basis);
        let m = m2_from_product(alg, &alpha);
        Self::with_field(alpha, m, flavor, normalised)
    }

    pub fn with_field(alpha: Alphabet, m: Derivation, flavor: Flavor, normalised: bool) -> Result<Self, HarrisonError> {
        if normalised && alpha.unit().is_none() {
            return Err(HarrisonError::NotUnital);
        }
        Ok(Complex {
            alpha,
            m,
            flavor,
            normalised,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alpha
    }

    pub fn field(&self) -> &Derivation {
        &self.m
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn normalised(&self) -> bool {
        self.normalised
    }

    /// Same algebra, other flavor or normalisation.
    pub fn sibling(&self, flavor: Flavor, normalised: bool) -> Result<Complex, HarrisonError> {
        Self::with_field(self.alpha.clone(), self.m.clone(), flavor, normalised)
    }

    /// Internal degree carried by label j: |ξ| for fields, total degree for
    /// forms.
    pub fn internal_degree(&self, j: i64) -> i64 {
        match self.flavor {
            Flavor::Harrison => j - 1,
            Flavor::Dual => j + 2,
            Flavor::Cyclic => j + 1,
        }
    }

    pub fn label(&self, internal: i64) -> i64 {
        match self.flavor {
            Flavor::Harrison => internal + 1,
            Flavor::Dual => internal - 2,
            Flavor::Cyclic => internal - 1,
        }
    }

    fn unit_skip(&self) -> Option<u8> {
        if self.normalised {
            self.alpha.unit()
        } else {
            None
        }
    }

    fn word_degrees(&self, len: usize) -> BTreeSet<i64> {
        let skip = self.unit_skip();
        let mut set = BTreeSet::from([0i64]);
        for _ in 0..len {
            let mut next = BTreeSet::new();
            for d in &set {
                for g in 0..self.alpha.rank() as u8 {
                    if Some(g) != skip {
                        next.insert(d + self.alpha.degree(g));
                    }
                }
            }
            set = next;
        }
        set
    }

    /// Labels j for which block (order, j) can be nonzero.
    pub fn degrees(&self, order: usize) -> Vec<i64> {
        if order < self.flavor.min_order() {
            return Vec::new();
        }
        let r = self.alpha.rank() as u8;
        let mut out = BTreeSet::new();
        match self.flavor {
            Flavor::Harrison => {
                for d in self.word_degrees(order) {
                    for g in 0..r {
                        out.insert(d - self.alpha.degree(g) + 1);
                    }
                }
            }
            Flavor::Dual => {
                for d in self.word_degrees(order) {
                    for g in 0..r {
                        out.insert(d + self.alpha.degree(g) - 1);
                    }
                }
            }
            Flavor::Cyclic => {
                for d in self.word_degrees(order) {
                    out.insert(d - 1);
                }
            }
        }
        out.into_iter().collect()
    }

    fn spanning(&self, order: usize, j: i64) -> Vec<SparseVec<Coord>> {
        let mut span = Vec::new();
        if order < self.flavor.min_order() {
            return span;
        }
        let a = &self.alpha;
        let avoid = self.normalised;
        let internal = self.internal_degree(j);
        for g in 0..a.rank() as u8 {
            match self.flavor {
                Flavor::Harrison => {
                    for w in a.words_of_degree(order, a.degree(g) + internal, avoid) {
                        let l = TensorElement::left_bracketing(a, &w);
                        span.push(l.terms().iter().map(|(u, c)| ((u.clone(), g), c.clone())).collect());
                    }
                }
                Flavor::Dual => {
                    let deg = internal - 1 - a.degree(g);
                    if order == 0 {
                        if deg == 0 {
                            span.push(SparseVec::from([((Vec::new(), g), Scalar::one())]));
                        }
                        continue;
                    }
                    for w in a.words_of_degree(order, deg, avoid) {
                        let l = TensorElement::left_bracketing(a, &w);
                        span.push(l.terms().iter().map(|(u, c)| ((u.clone(), g), c.clone())).collect());
                    }
                }
                Flavor::Cyclic => {
                    if Some(g) == self.unit_skip() {
                        continue;
                    }
                    for w in a.words_of_degree(order - 1, internal - a.degree(g), avoid) {
                        let l = TensorElement::left_bracketing(a, &w);
                        let f = CyclicZeroForm::pair(a, &l, &TensorElement::generator(g));
                        span.push(Cochain::Zero(f).coords());
                    }
                }
            }
        }
        span
    }

    pub fn block(&self, order: usize, j: i64) -> Block {
        Block::from_spanning(self.flavor, self.normalised, order, j, self.spanning(order, j))
    }

    /// The cochain with the given ambient coordinates in label degree j.
    pub fn element(&self, j: i64, v: &SparseVec<Coord>) -> Cochain {
        match self.flavor {
            Flavor::Harrison => {
                let mut images = vec![TensorElement::zero(); self.alpha.rank()];
                for ((w, g), c) in v {
                    images[*g as usize].add_term(w.clone(), c.clone());
                }
                Cochain::Field(
                    Derivation::new(&self.alpha, images, self.internal_degree(j)).expect("block vectors are homogeneous"),
                )
            }
            Flavor::Dual => {
                let mut f = OneForm::zero();
                for ((w, g), c) in v {
                    f.add_term(w.clone(), *g, c.clone());
                }
                Cochain::One(f)
            }
            Flavor::Cyclic => {
                let mut f = CyclicZeroForm::zero();
                for ((w, _), c) in v {
                    f.add_word(&self.alpha, w, c.clone());
                }
                Cochain::Zero(f)
            }
        }
    }

    /// The differential [m, ·] or L_m.
    pub fn apply_d(&self, c: &Cochain) -> Cochain {
        match c {
            Cochain::Field(xi) => Cochain::Field(Derivation::bracket(&self.alpha, &self.m, xi, None)),
            Cochain::One(f) => Cochain::One(f.lie_derivative(&self.alpha, &self.m, None)),
            Cochain::Zero(f) => Cochain::Zero(f.lie_derivative(&self.alpha, &self.m, None)),
        }
    }

    /// Matrix of d from `src` to `dst` in their bases. Panics if the image
    /// leaves `dst`, which would mean the blocks are not adjacent.
    pub fn differential(&self, src: &Block, dst: &Block) -> SparseMatrix {
        let mut m = SparseMatrix::zero(dst.dim(), 0);
        for b in src.basis() {
            let img = self.apply_d(&self.element(src.degree, b)).coords();
            let col = dst.coordinates(&img).expect("differential lands in the next block");
            m.cols.push(col);
        }
        m
    }

    /// The three blocks around (order, j) and the two differentials.
    pub fn neighbourhood(&self, order: usize, j: i64) -> (Block, Block, Block, SparseMatrix, SparseMatrix) {
        let prev = match order {
            0 => Block::from_spanning(self.flavor, self.normalised, 0, j - 1, Vec::new()),
            _ => self.block(order - 1, j - 1),
        };
        let cur = self.block(order, j);
        let next = self.block(order + 1, j + 1);
        let d_in = self.differential(&prev, &cur);
        let d_out = self.differential(&cur, &next);
        (prev, cur, next, d_in, d_out)
    }

    pub fn cohomology(&self, order: usize, j: i64) -> CohomologyGroup {
        let (_, cur, _, d_in, d_out) = self.neighbourhood(order, j);
        let kernel = kernel(&d_out);
        let mut img = Eliminator::new(PivotStrategy::FirstKey, false);
        for c in &d_in.cols {
            img.insert(c.clone());
        }
        let coboundaries = img.rank();
        let mut reps = Vec::new();
        for k in &kernel {
            if img.insert(k.clone()) {
                reps.push(cur.vector(k));
            }
        }
        CohomologyGroup {
            order,
            degree: j,
            cochains: cur.dim(),
            cocycles: kernel.len(),
            coboundaries,
            dim: reps.len(),
            representatives: reps,
        }
    }

    /// Same dimensions through dense Bareiss ranks, as an independent check.
    pub fn dense_dims(&self, order: usize, j: i64) -> (usize, usize, usize) {
        let (_, cur, _, d_in, d_out) = self.neighbourhood(order, j);
        let r_out = linalg::bareiss_rank(&d_out.to_dense());
        let r_in = linalg::bareiss_rank(&d_in.to_dense());
        (cur.dim() - r_out, r_in, cur.dim() - r_out - r_in)
    }

    /// Cohomology dimension with the alternative pivot rule.
    pub fn dim_with(&self, order: usize, j: i64, strategy: PivotStrategy) -> usize {
        let (_, cur, _, d_in, d_out) = self.neighbourhood(order, j);
        let r_out = linalg::rank_of(d_out.cols.iter().cloned(), strategy);
        let r_in = linalg::rank_of(d_in.cols.iter().cloned(), strategy);
        cur.dim() - r_out - r_in
    }

    /// A preimage b with d(b) = c, or `None` when c is not a coboundary.
    pub fn solve_coboundary(&self, c: &Cochain, order: usize, j: i64) -> Result<Option<Cochain>, HarrisonError> {
        if order == 0 {
            return Ok(if c.is_zero() { Some(c.clone()) } else { None });
        }
        let (prev, cur, _, d_in, _) = self.neighbourhood(order, j);
        let x = cur
            .coordinates(&c.coords())
            .ok_or(HarrisonError::OutsideBlock { order, degree: j })?;
        let mut e = Eliminator::tracking();
        for col in &d_in.cols {
            e.insert(col.clone());
        }
        Ok(e.solve(&x).map(|y| self.element(j - 1, &prev.vector(&y))))
    }

    /// Coordinates of the class of a cocycle against the representatives of
    /// `cohomology(order, j)`; all zero iff c is a coboundary.
    pub fn class_of(&self, c: &Cochain, order: usize, j: i64) -> Result<Vec<Scalar>, HarrisonError> {
        let (_, cur, _, d_in, d_out) = self.neighbourhood(order, j);
        let x = cur
            .coordinates(&c.coords())
            .ok_or(HarrisonError::OutsideBlock { order, degree: j })?;
        if !d_out.apply(&x).is_empty() {
            return Err(HarrisonError::NotCocycle { order, degree: j });
        }
        let reps = self.cohomology(order, j).representatives;
        let mut e = Eliminator::tracking();
        let k0 = d_in.ncols();
        for col in &d_in.cols {
            e.insert(col.clone());
        }
        for r in &reps {
            e.insert(cur.coordinates(r).expect("representatives lie in the block"));
        }
        let y = e.solve(&x).expect("cocycles are spanned by coboundaries and representatives");
        Ok((0..reps.len()).map(|k| y.get(&(k0 + k)).cloned().unwrap_or_default()).collect())
    }

    /// Check d∘d = 0 from (order, j) by an exact matrix product.
    pub fn d_squared_vanishes(&self, order: usize, j: i64) -> bool {
        let b0 = self.block(order, j);
        let b1 = self.block(order + 1, j + 1);
        let b2 = self.block(order + 2, j + 2);
        self.differential(&b1, &b2).mul(&self.differential(&b0, &b1)).is_zero()
    }
}

/// Basis of the kernel of a column-stored matrix, as coordinate vectors.
pub fn kernel(m: &SparseMatrix) -> Vec<SparseVec<usize>> {
    let mut e = Eliminator::tracking();
    for c in &m.cols {
        e.insert(c.clone());
    }
    e.nullspace().to_vec()
}

/// Rank of the map H(src) → H(dst) induced by a chain map `f` between
/// blocks of two complexes.
fn induced_rank(
    src: &Complex,
    src_order: usize,
    src_j: i64,
    dst: &Complex,
    dst_order: usize,
    dst_j: i64,
    f: impl Fn(&Cochain) -> SparseVec<Coord>,
) -> InducedMap {
    let hs = src.cohomology(src_order, src_j);
    let (_, dcur, _, d_in, _) = dst.neighbourhood(dst_order, dst_j);
    let hd = dst.cohomology(dst_order, dst_j);
    let mut e = Eliminator::new(PivotStrategy::FirstKey, false);
    for c in &d_in.cols {
        e.insert(dcur.vector(c));
    }
    let base = e.rank();
    for r in &hs.representatives {
        e.insert(f(&src.element(src_j, r)));
    }
    InducedMap {
        source_dim: hs.dim,
        target_dim: hd.dim,
        rank: e.rank() - base,
    }
}

/// I: HC^{i+1, j} → H^{i, j}(A, A*) induced by the de Rham differential.
pub fn map_i(alg: &Algebra, i: usize, j: i64) -> Result<InducedMap, HarrisonError> {
    if alg.basis.unit().is_none() {
        return Err(HarrisonError::NotUnital);
    }
    let cc = Complex::new(alg, Flavor::Cyclic, false)?;
    let dual = cc.sibling(Flavor::Dual, false)?;
    let alpha = cc.alphabet().clone();
    Ok(induced_rank(&cc, i + 1, j, &dual, i, j, |c| match c {
        Cochain::Zero(f) => Cochain::One(f.differential(&alpha)).coords(),
        _ => unreachable!("cyclic complex yields 0-forms"),
    }))
}

/// Expected (injective, surjective) for I in order i.
pub fn map_i_expectation(i: usize) -> (bool, bool) {
    match i {
        1 => (true, false),
        2 => (false, true),
        _ => (true, true),
    }
}

/// H̄^{i,j} → H^{i,j} induced by the inclusion of normalised cochains.
pub fn normalised_inclusion(alg: &Algebra, flavor: Flavor, i: usize, j: i64) -> Result<InducedMap, HarrisonError> {
    let norm = Complex::new(alg, flavor, true)?;
    let full = norm.sibling(flavor, false)?;
    Ok(induced_rank(&norm, i, j, &full, i, j, |c| c.coords()))
}

/// Ψ = Φ^{-1} ∘ I on a cyclic cochain.
pub fn psi(sym: &Symplectic, beta: &CyclicZeroForm) -> Result<Derivation, HarrisonError> {
    Ok(sym.phi_inv(&beta.differential(sym.alphabet()))?)
}

/// Φ as a map of blocks: C(A,A) block (i, j) into C(A,A*) block
/// (i, j + |ω|_internal − 2), where the internal degree of ω is its total
/// degree minus 2.
pub fn phi_block_matrix(sym: &Symplectic, harrison: &Complex, dual: &Complex, i: usize, j: i64) -> Option<SparseMatrix> {
    let src = harrison.block(i, j);
    let shift = sym.omega_degree() - 4;
    let dst = dual.block(i, j + shift);
    let mut m = SparseMatrix::zero(dst.dim(), 0);
    for b in src.basis() {
        let Cochain::Field(xi) = harrison.element(j, b) else { unreachable!() };
        m.cols.push(dst.coordinates(&Cochain::One(sym.phi(&xi)).coords())?);
    }
    Some(m)
}
