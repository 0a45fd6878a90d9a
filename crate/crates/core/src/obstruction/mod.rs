//! Obstruction classes for extending C_n-structures and C_n-morphisms, the
//! extension solvers, and the lifting of C∞-structures and morphisms to
//! symplectic ones.

use serde::Serialize;

use crate::forms::{CyclicZeroForm, FormError, Symplectic};
use crate::graded::{validate_frobenius, Algebra};
use crate::harrison::{Block, Cochain, Complex, Coord, Flavor, HarrisonError};
use crate::lie::{is_normalised, m2_from_product, Alphabet, CnStructure, Derivation, LieError, PointedDiffeo};
use crate::linalg::{Eliminator, SparseVec};
use crate::scalar::Scalar;

mod lift;
mod multimaps;

pub use lift::{lift_morphism_to_symplectic, lift_to_symplectic, LiftOptions, LiftResult, MorphismLift, StageLog};
pub use multimaps::{check_arity, check_invariance, InvarianceViolation, Multimaps};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ObstructionError {
    #[error("m_2 does not match the algebra's product")]
    WrongQuadraticPart,
    #[error("not a C_{level}-structure: [m,m] has a nonzero part of order {order}")]
    NotCn { level: usize, order: usize },
    #[error("part of order {order} is not symplectic")]
    NotSymplectic { order: usize },
    #[error("morphism does not preserve ω")]
    NotSymplectomorphism,
    #[error("part of order {order} is not normalised")]
    NotNormalised { order: usize },
    #[error("not a C_{level}-morphism: residual has a nonzero part of order {order}")]
    NotMorphism { level: usize, order: usize },
    #[error("the algebra has no nondegenerate pairing")]
    NoPairing,
    #[error("algebra fails the Frobenius checks: {0}")]
    NotFrobenius(String),
    #[error("unital lifting needs a connected unital algebra")]
    NotConnectedUnital,
    #[error("structure is not unital-shaped")]
    NotUnitalShaped,
    #[error("invalid truncation: {0}")]
    Truncation(String),
    #[error("stage {stage}: obstruction lands in bidegree (3,2)")]
    ExceptionalBidegree { stage: usize },
    #[error("stage {stage}: the linear system has no solution\n{system}")]
    Infeasible { stage: usize, system: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Harrison(#[from] HarrisonError),
    #[error(transparent)]
    Form(#[from] FormError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureFlavor {
    Plain,
    Symplectic,
    Unital,
}

impl StructureFlavor {
    pub fn name(self) -> &'static str {
        match self {
            StructureFlavor::Plain => "plain",
            StructureFlavor::Symplectic => "symplectic",
            StructureFlavor::Unital => "unital",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "plain" => Some(StructureFlavor::Plain),
            "symplectic" => Some(StructureFlavor::Symplectic),
            "unital" => Some(StructureFlavor::Unital),
            _ => None,
        }
    }

    fn normalised(self) -> bool {
        self == StructureFlavor::Unital
    }
}

/// An algebra with its alphabet, m_2 and (when the pairing allows) the
/// constant symplectic form.
#[derive(Clone, Debug)]
pub struct Setting {
    alg: Algebra,
    alpha: Alphabet,
    m2: Derivation,
    sym: Option<Symplectic>,
}

impl Setting {
    pub fn new(alg: &Algebra) -> Self {
        let alpha = Alphabet::from_basis(&alg.basis);
        let m2 = m2_from_product(alg, &alpha);
        let sym = alg.pairing.as_ref().and_then(|p| Symplectic::from_pairing(&alpha, p).ok());
        Setting {
            alg: alg.clone(),
            alpha,
            m2,
            sym,
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alpha
    }

    pub fn m2(&self) -> &Derivation {
        &self.m2
    }

    pub fn symplectic(&self) -> Result<&Symplectic, ObstructionError> {
        self.sym.as_ref().ok_or(ObstructionError::NoPairing)
    }

    /// Total degree of ω.
    pub fn omega_degree(&self) -> Result<i64, ObstructionError> {
        Ok(self.symplectic()?.omega_degree())
    }

    pub fn complex(&self, flavor: Flavor, normalised: bool) -> Result<Complex, ObstructionError> {
        Ok(Complex::with_field(self.alpha.clone(), self.m2.clone(), flavor, normalised)?)
    }

    /// The structure m_2 alone, as a C_3-structure.
    pub fn strict(&self) -> CnStructure {
        CnStructure::new(self.m2.clone(), 3).expect("m_2 is a degree-1 order-2 field")
    }

    pub fn structure(&self, m: Derivation, level: usize) -> Result<CnStructure, ObstructionError> {
        Ok(CnStructure::new(m, level)?)
    }

    fn check_frobenius(&self) -> Result<(), ObstructionError> {
        let v = validate_frobenius(&self.alg);
        if let Some(first) = v.first() {
            return Err(ObstructionError::NotFrobenius(format!("{} at ({}): {}", first.kind, first.witness.join(", "), first.detail)));
        }
        self.symplectic()?;
        Ok(())
    }

    fn check_connected_unital(&self) -> Result<(), ObstructionError> {
        if self.alpha.unit().is_none() || !self.alg.is_connected() {
            return Err(ObstructionError::NotConnectedUnital);
        }
        Ok(())
    }

    fn check_unital(&self, m: &CnStructure) -> Result<(), ObstructionError> {
        self.check_connected_unital()?;
        if !m.is_unital_shaped(&self.alg, &self.alpha) {
            return Err(ObstructionError::NotUnitalShaped);
        }
        Ok(())
    }

    fn check_parts_symplectic(&self, m: &Derivation) -> Result<(), ObstructionError> {
        let sym = self.symplectic()?;
        for o in m.orders() {
            if !sym.symplectic_residual(&m.order_part(o)).is_zero() {
                return Err(ObstructionError::NotSymplectic { order: o });
            }
        }
        Ok(())
    }

    fn check_flavor(&self, m: &CnStructure, flavor: StructureFlavor) -> Result<(), ObstructionError> {
        match flavor {
            StructureFlavor::Plain => Ok(()),
            StructureFlavor::Symplectic => self.check_parts_symplectic(m.field()),
            StructureFlavor::Unital => {
                self.check_unital(m)?;
                self.check_parts_symplectic(m.field())
            }
        }
    }

    /// Υ^{-1}(ξ), normalised when asked.
    fn form_of(&self, xi: &Derivation, normalised: bool) -> Result<CyclicZeroForm, ObstructionError> {
        let order = xi.min_order().unwrap_or(0);
        let sym = self.symplectic()?;
        let beta = sym
            .upsilon_inv(xi)
            .map_err(|_| ObstructionError::NotSymplectic { order })?;
        if normalised && !beta.is_normalised(&self.alpha) {
            return Err(ObstructionError::NotNormalised { order });
        }
        Ok(beta)
    }
}

/// ½[m,m] restricted to orders ≤ level, after checking m_2 against the
/// algebra.
pub fn check_cn(setting: &Setting, m: &CnStructure) -> Result<Derivation, ObstructionError> {
    if m.part(2) != setting.m2 {
        return Err(ObstructionError::WrongQuadraticPart);
    }
    Ok(m.residual(&setting.alpha))
}

fn require_cn(setting: &Setting, m: &CnStructure) -> Result<(), ObstructionError> {
    let r = check_cn(setting, m)?;
    match r.min_order() {
        None => Ok(()),
        Some(order) => Err(ObstructionError::NotCn { level: m.level(), order }),
    }
}

/// A cocycle representative together with its class.
#[derive(Clone, Debug, Serialize)]
pub struct ObstructionClass {
    pub flavor: StructureFlavor,
    pub complex: Flavor,
    pub normalised: bool,
    pub order: usize,
    pub degree: i64,
    #[serde(skip)]
    pub representative: Cochain,
    /// Coordinates against the representatives of the cohomology group.
    pub class: Vec<Scalar>,
}

impl ObstructionClass {
    pub fn is_zero(&self) -> bool {
        self.class.iter().all(Scalar::is_zero)
    }

    pub fn bidegree(&self) -> (usize, i64) {
        (self.order, self.degree)
    }

    fn build(flavor: StructureFlavor, complex: &Complex, rep: Cochain, order: usize, degree: i64) -> Result<Self, ObstructionError> {
        if !complex.apply_d(&rep).is_zero() {
            return Err(ObstructionError::Internal(format!(
                "obstruction in ({order}, {degree}) is not a cocycle"
            )));
        }
        let class = complex.class_of(&rep, order, degree)?;
        Ok(ObstructionClass {
            flavor,
            complex: complex.flavor(),
            normalised: complex.normalised(),
            order,
            degree,
            representative: rep,
            class,
        })
    }
}

/// ½ Σ_{i+j=n+2} [m_i, m_j] with 3 ≤ i, j ≤ n−1: the order n+1 part of ½[m,m].
pub fn obs_field(alpha: &Alphabet, m: &CnStructure) -> Derivation {
    let n = m.level();
    let sq = Derivation::bracket(alpha, m.field(), m.field(), Some(n + 1));
    let obs = sq.order_part(n + 1).scale(&Scalar::from_frac(1, 2));
    if obs.is_zero() {
        Derivation::zero(alpha.rank(), 2)
    } else {
        obs
    }
}

pub fn obs_structure(setting: &Setting, m: &CnStructure, flavor: StructureFlavor) -> Result<ObstructionClass, ObstructionError> {
    require_cn(setting, m)?;
    setting.check_flavor(m, flavor)?;
    let n = m.level();
    let obs = obs_field(&setting.alpha, m);
    match flavor {
        StructureFlavor::Plain => {
            let c = setting.complex(Flavor::Harrison, false)?;
            ObstructionClass::build(flavor, &c, Cochain::Field(obs), n + 1, 3)
        }
        _ => {
            let beta = setting.form_of(&obs, flavor.normalised())?;
            let c = setting.complex(Flavor::Cyclic, flavor.normalised())?;
            let label = c.label(setting.omega_degree()?);
            ObstructionClass::build(flavor, &c, Cochain::Zero(beta), n + 2, label)
        }
    }
}

/// Outcome of an extension attempt.
#[derive(Clone, Debug)]
pub enum Extension<T> {
    Extended(T),
    Obstructed(ObstructionClass),
}

#[derive(Clone, Debug)]
pub struct StructureExtension {
    pub part: Derivation,
    pub structure: CnStructure,
    /// Dimension of the affine solution space of the block system.
    pub solution_dim: usize,
    /// Dimension of the cocycle space acting on it, computed separately.
    pub cocycle_dim: usize,
}

/// Columns and target of a block system, kept for diagnostics.
pub(crate) struct BlockSystem {
    columns: Vec<SparseVec<Coord>>,
    solver: Eliminator<Coord>,
}

impl BlockSystem {
    pub(crate) fn new(columns: Vec<SparseVec<Coord>>) -> Self {
        let mut solver = Eliminator::tracking();
        for c in &columns {
            solver.insert(c.clone());
        }
        BlockSystem { columns, solver }
    }

    pub(crate) fn solve(&self, target: &SparseVec<Coord>) -> Option<SparseVec<usize>> {
        self.solver.solve(target)
    }

    pub(crate) fn unknowns(&self) -> usize {
        self.columns.len()
    }

    pub(crate) fn rank(&self) -> usize {
        self.solver.rank()
    }

    pub(crate) fn nullity(&self) -> usize {
        self.columns.len() - self.solver.rank()
    }

    pub(crate) fn describe(&self, alpha: &Alphabet, target: &SparseVec<Coord>) -> String {
        let fmt = |v: &SparseVec<Coord>| {
            v.iter()
                .map(|((w, g), c)| {
                    let slot = if *g == crate::harrison::CYCLIC { "cyc".to_string() } else { alpha.name(*g).to_string() };
                    format!("{c}·{}@{slot}", alpha.format_word(w))
                })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        let mut s = format!("{} unknowns, rank {}\n", self.columns.len(), self.solver.rank());
        for (k, c) in self.columns.iter().enumerate() {
            s.push_str(&format!("  col {k}: {}\n", fmt(c)));
        }
        s.push_str(&format!("  target: {}", fmt(target)));
        s
    }
}

fn combine(block: &Block, x: &SparseVec<usize>, range: std::ops::Range<usize>) -> SparseVec<Coord> {
    let local: SparseVec<usize> = x
        .iter()
        .filter(|(k, _)| range.contains(k))
        .map(|(k, c)| (k - range.start, c.clone()))
        .collect();
    block.vector(&local)
}

/// Υ of every basis element of a cyclic block.
fn upsilon_basis(sym: &Symplectic, c: &Complex, block: &Block) -> Result<Vec<Derivation>, ObstructionError> {
    block
        .basis()
        .iter()
        .map(|v| match c.element(block.degree, v) {
            Cochain::Zero(beta) => Ok(sym.upsilon(&beta)?),
            _ => unreachable!("cyclic blocks hold 0-forms"),
        })
        .collect()
}

fn field_of(c: &Complex, block: &Block, v: &SparseVec<Coord>) -> Derivation {
    match c.element(block.degree, v) {
        Cochain::Field(x) => x,
        _ => unreachable!("harrison blocks hold fields"),
    }
}

fn form_of_coords(c: &Complex, block: &Block, v: &SparseVec<Coord>) -> CyclicZeroForm {
    match c.element(block.degree, v) {
        Cochain::Zero(x) => x,
        _ => unreachable!("cyclic blocks hold 0-forms"),
    }
}

/// Field ↦ ambient coordinates.
pub(crate) fn coords(xi: &Derivation) -> SparseVec<Coord> {
    Cochain::Field(xi.clone()).coords()
}

pub fn extend_structure(
    setting: &Setting,
    m: &CnStructure,
    flavor: StructureFlavor,
) -> Result<Extension<StructureExtension>, ObstructionError> {
    let class = obs_structure(setting, m, flavor)?;
    let n = m.level();
    let alpha = &setting.alpha;
    let obs = obs_field(alpha, m);
    let target = coords(&obs.neg());
    let (system, solution_of, cocycle_dim): (BlockSystem, Box<dyn Fn(&SparseVec<usize>) -> Derivation>, usize) = match flavor {
        StructureFlavor::Plain => {
            let c = setting.complex(Flavor::Harrison, false)?;
            let block = c.block(n, 2);
            let cols = block
                .basis()
                .iter()
                .map(|v| coords(&Derivation::bracket(alpha, &setting.m2, &field_of(&c, &block, v), None)))
                .collect();
            let cocycles = c.cohomology(n, 2).cocycles;
            let dim = block.dim();
            let sol = move |x: &SparseVec<usize>| {
                let v = combine(&block, x, 0..dim);
                if v.is_empty() {
                    Derivation::zero(c.alphabet().rank(), 1)
                } else {
                    field_of(&c, &block, &v)
                }
            };
            (BlockSystem::new(cols), Box::new(sol), cocycles)
        }
        _ => {
            let sym = setting.symplectic()?.clone();
            let c = setting.complex(Flavor::Cyclic, flavor.normalised())?;
            let label = c.label(sym.omega_degree() - 1);
            let block = c.block(n + 1, label);
            let ups = upsilon_basis(&sym, &c, &block)?;
            let cols = ups
                .iter()
                .map(|u| coords(&Derivation::bracket(alpha, &setting.m2, u, None)))
                .collect();
            let cocycles = c.cohomology(n + 1, label).cocycles;
            let dim = block.dim();
            let sol = move |x: &SparseVec<usize>| {
                let v = combine(&block, x, 0..dim);
                let beta = form_of_coords(&c, &block, &v);
                if beta.is_zero() {
                    Derivation::zero(c.alphabet().rank(), 1)
                } else {
                    sym.upsilon(&beta).expect("block forms are homogeneous")
                }
            };
            (BlockSystem::new(cols), Box::new(sol), cocycles)
        }
    };
    let Some(x) = system.solve(&target) else {
        if class.is_zero() {
            return Err(ObstructionError::Internal(format!(
                "order {} obstruction is a coboundary but the block system has no solution",
                n + 1
            )));
        }
        return Ok(Extension::Obstructed(class));
    };
    if !class.is_zero() {
        return Err(ObstructionError::Internal(format!(
            "block system solved although the order {} class is nonzero",
            n + 1
        )));
    }
    let part = solution_of(&x);
    let structure = m.with_part(&part);
    require_cn(setting, &structure).map_err(|e| ObstructionError::Internal(format!("extension fails re-check: {e}")))?;
    setting
        .check_flavor(&structure, flavor)
        .map_err(|e| ObstructionError::Internal(format!("extension leaves the flavor: {e}")))?;
    Ok(Extension::Extended(StructureExtension {
        part,
        structure,
        solution_dim: system.nullity(),
        cocycle_dim,
    }))
}

/// φ∘m∘φ^{-1} − m' restricted to orders ≤ max.
pub fn morphism_residual(alpha: &Alphabet, phi: &PointedDiffeo, m: &Derivation, m_prime: &Derivation, max: usize) -> Derivation {
    phi.with_max_len(max)
        .conjugate(alpha, &m.truncate(max))
        .truncate(max)
        .sub(&m_prime.truncate(max))
}

#[derive(Clone, Debug)]
pub struct MorphismExtension {
    pub gamma: Derivation,
    pub phi: PointedDiffeo,
}

fn check_morphism_inputs(
    setting: &Setting,
    phi: &PointedDiffeo,
    m: &CnStructure,
    m_prime: &CnStructure,
    flavor: StructureFlavor,
) -> Result<usize, ObstructionError> {
    if m.level() != m_prime.level() {
        return Err(ObstructionError::Truncation("structures must share the level".into()));
    }
    let n = m.level() - 1;
    if phi.max_len() < n {
        return Err(ObstructionError::Truncation(format!("φ is stored only to order {}", phi.max_len())));
    }
    require_cn(setting, m)?;
    require_cn(setting, m_prime)?;
    setting.check_flavor(m, flavor)?;
    setting.check_flavor(m_prime, flavor)?;
    if flavor != StructureFlavor::Plain {
        let sym = setting.symplectic()?;
        if !sym.symplectomorphism_residual(phi, n).is_zero() {
            return Err(ObstructionError::NotSymplectomorphism);
        }
    }
    let r = morphism_residual(&setting.alpha, phi, m.field(), m_prime.field(), n - 1);
    if let Some(order) = r.min_order() {
        return Err(ObstructionError::NotMorphism { level: n, order });
    }
    Ok(n)
}

/// obs(φ) = φ∘m∘φ^{-1} − m' at order n, for a C_n-morphism φ between
/// C_{n+1}-structures.
pub fn obs_morphism(
    setting: &Setting,
    phi: &PointedDiffeo,
    m: &CnStructure,
    m_prime: &CnStructure,
    flavor: StructureFlavor,
) -> Result<ObstructionClass, ObstructionError> {
    let n = check_morphism_inputs(setting, phi, m, m_prime, flavor)?;
    let obs = morphism_residual(&setting.alpha, phi, m.field(), m_prime.field(), n).order_part(n);
    let obs = if obs.is_zero() { Derivation::zero(setting.alpha.rank(), 1) } else { obs };
    match flavor {
        StructureFlavor::Plain => {
            let c = setting.complex(Flavor::Harrison, false)?;
            ObstructionClass::build(flavor, &c, Cochain::Field(obs), n, 2)
        }
        _ => {
            let beta = setting.form_of(&obs, flavor.normalised())?;
            let c = setting.complex(Flavor::Cyclic, flavor.normalised())?;
            let label = c.label(setting.omega_degree()? - 1);
            ObstructionClass::build(flavor, &c, Cochain::Zero(beta), n + 1, label)
        }
    }
}

/// Solve [m_2, γ] = obs(φ) for γ of order n−1 and degree 0 in the flavor's
/// space; exp(γ)∘φ is then a C_{n+1}-morphism.
pub fn extend_morphism(
    setting: &Setting,
    phi: &PointedDiffeo,
    m: &CnStructure,
    m_prime: &CnStructure,
    flavor: StructureFlavor,
) -> Result<Extension<MorphismExtension>, ObstructionError> {
    let class = obs_morphism(setting, phi, m, m_prime, flavor)?;
    let n = m.level() - 1;
    let alpha = &setting.alpha;
    let obs = morphism_residual(alpha, phi, m.field(), m_prime.field(), n).order_part(n);
    let target = coords(&obs);
    let candidates: Vec<Derivation> = match flavor {
        StructureFlavor::Plain => {
            let c = setting.complex(Flavor::Harrison, false)?;
            let block = c.block(n - 1, 1);
            block.basis().iter().map(|v| field_of(&c, &block, v)).collect()
        }
        _ => {
            let sym = setting.symplectic()?;
            let c = setting.complex(Flavor::Cyclic, flavor.normalised())?;
            let block = c.block(n, c.label(sym.omega_degree() - 2));
            upsilon_basis(sym, &c, &block)?
        }
    };
    let cols = candidates
        .iter()
        .map(|g| coords(&Derivation::bracket(alpha, &setting.m2, g, None)))
        .collect();
    let system = BlockSystem::new(cols);
    let Some(x) = system.solve(&target) else {
        if class.is_zero() {
            return Err(ObstructionError::Internal(format!(
                "order {n} morphism obstruction is a coboundary but the block system has no solution"
            )));
        }
        return Ok(Extension::Obstructed(class));
    };
    let mut gamma = Derivation::zero(alpha.rank(), 0);
    for (k, c) in &x {
        gamma = gamma.add(&candidates[*k].scale(c));
    }
    let next = PointedDiffeo::exp(alpha, &gamma, phi.max_len())?.compose(phi);
    let r = morphism_residual(alpha, &next, m.field(), m_prime.field(), n);
    if !r.is_zero() {
        return Err(ObstructionError::Internal(format!(
            "extended morphism leaves residual {}",
            r.display(alpha)
        )));
    }
    Ok(Extension::Extended(MorphismExtension { gamma, phi: next }))
}

pub(crate) fn normalised_parts(alpha: &Alphabet, m: &Derivation) -> bool {
    m.orders().into_iter().filter(|&o| o >= 3).all(|o| is_normalised(&m.order_part(o), alpha))
}

#[cfg(test)]
mod tests;
