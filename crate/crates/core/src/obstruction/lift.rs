use serde::Serialize;

use crate::forms::{Symplectic, TwoForm};
use crate::harrison::{kernel, Block, Complex, Flavor};
use crate::lie::{Alphabet, CnStructure, Derivation, PointedDiffeo};
use crate::linalg::SparseVec;

use super::{
    coords, field_of, morphism_residual, normalised_parts, obs_field, require_cn, upsilon_basis, BlockSystem,
    ObstructionError, Setting,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LiftOptions {
    pub unital: bool,
    pub two_step: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageLog {
    pub order: usize,
    pub mode: &'static str,
    /// Dimension of the cyclic block feeding the symplectic unknown.
    pub form_dim: usize,
    /// Dimension of the vector-field block feeding γ (or η).
    pub field_dim: usize,
    pub normalised_fields: bool,
    pub unknowns: usize,
    pub rank: usize,
    pub support: usize,
    /// Bidegree of the structure obstruction and of the class being killed.
    pub obstruction_bidegree: (usize, i64),
    pub class_bidegree: (usize, i64),
    pub part: String,
    pub gamma: String,
}

#[derive(Clone, Debug)]
pub struct LiftResiduals {
    /// ½[m', m'] through order N.
    pub square: Derivation,
    /// L_{m'} ω.
    pub symplectic: TwoForm,
    /// φ∘m∘φ^{-1} − m' through order N − 1.
    pub conjugation: Derivation,
    pub pointed: bool,
    /// Unital runs only: every part of order ≥ 3 avoids τ.
    pub normalised: Option<bool>,
}

impl LiftResiduals {
    pub fn all_zero(&self) -> bool {
        self.square.is_zero()
            && self.symplectic.is_zero()
            && self.conjugation.is_zero()
            && self.pointed
            && self.normalised != Some(false)
    }
}

#[derive(Clone, Debug)]
pub struct LiftResult {
    pub order: usize,
    pub structure: CnStructure,
    pub phi: PointedDiffeo,
    pub stages: Vec<StageLog>,
    pub residuals: LiftResiduals,
}

struct Stage<'a> {
    setting: &'a Setting,
    sym: &'a Symplectic,
    cyclic: Complex,
    fields: Complex,
    unital: bool,
}

impl<'a> Stage<'a> {
    /// `unital` normalises the symplectic unknowns; `normalised_fields` the
    /// γ (or η) unknowns.
    fn new(setting: &'a Setting, unital: bool, normalised_fields: bool) -> Result<Self, ObstructionError> {
        Ok(Stage {
            setting,
            sym: setting.symplectic()?,
            cyclic: setting.complex(Flavor::Cyclic, unital)?,
            fields: setting.complex(Flavor::Harrison, normalised_fields)?,
            unital,
        })
    }

    fn alpha(&self) -> &Alphabet {
        self.setting.alphabet()
    }

    fn omega(&self) -> i64 {
        self.sym.omega_degree()
    }

    fn form_block(&self, order: usize, field_degree: i64) -> Block {
        self.cyclic.block(order, self.cyclic.label(field_degree + self.omega() - 2))
    }

    fn fields_of(&self, block: &Block) -> Vec<Derivation> {
        block.basis().iter().map(|v| field_of(&self.fields, block, v)).collect()
    }

    fn bracket_m2(&self, xi: &Derivation) -> SparseVec<crate::harrison::Coord> {
        coords(&Derivation::bracket(self.alpha(), self.setting.m2(), xi, None))
    }

    fn check_bidegrees(&self, stage: usize, bidegrees: &[(usize, i64)]) -> Result<(), ObstructionError> {
        if self.unital && bidegrees.contains(&(3, 2)) {
            return Err(ObstructionError::ExceptionalBidegree { stage });
        }
        Ok(())
    }

    /// Solve Σ x_k u_k + Σ y_l v_l = target; returns the two combinations.
    fn solve_split(
        &self,
        stage: usize,
        us: &[Derivation],
        us_cols: Vec<SparseVec<crate::harrison::Coord>>,
        vs: &[Derivation],
        vs_cols: Vec<SparseVec<crate::harrison::Coord>>,
        target: &Derivation,
    ) -> Result<(Derivation, Derivation, usize, usize, usize), ObstructionError> {
        let rank = self.alpha().rank();
        let mut cols = us_cols;
        cols.extend(vs_cols);
        let system = BlockSystem::new(cols);
        let t = coords(target);
        let x = system.solve(&t).ok_or_else(|| ObstructionError::Infeasible {
            stage,
            system: system.describe(self.alpha(), &t),
        })?;
        let mut a = Derivation::zero(rank, 0);
        let mut b = Derivation::zero(rank, 0);
        for (k, c) in &x {
            if *k < us.len() {
                a = a.add(&us[*k].scale(c));
            } else {
                b = b.add(&vs[*k - us.len()].scale(c));
            }
        }
        Ok((a, b, system.unknowns(), system.rank(), x.len()))
    }
}

fn log(
    st: &Stage,
    n: usize,
    mode: &'static str,
    dims: (usize, usize),
    solve: (usize, usize, usize),
    bidegrees: ((usize, i64), (usize, i64)),
    part: &Derivation,
    gamma: &Derivation,
) -> StageLog {
    StageLog {
        order: n,
        mode,
        form_dim: dims.0,
        field_dim: dims.1,
        normalised_fields: st.fields.normalised(),
        unknowns: solve.0,
        rank: solve.1,
        support: solve.2,
        obstruction_bidegree: bidegrees.0,
        class_bidegree: bidegrees.1,
        part: part.display(st.alpha()),
        gamma: gamma.display(st.alpha()),
    }
}

/// One stage: find a symplectic m'_n and γ of order n−1 with
/// ṁ_n − m'_n = [m_2, γ].
fn joint_stage(st: &Stage, n: usize, target: &Derivation) -> Result<(Derivation, Derivation, StageLog), ObstructionError> {
    let fb = st.form_block(n + 1, 1);
    let ups = upsilon_basis(st.sym, &st.cyclic, &fb)?;
    let gb = st.fields.block(n - 1, 1);
    let gs = st.fields_of(&gb);
    let bideg = ((n + 2, st.cyclic.label(st.omega())), (n + 1, fb.degree));
    st.check_bidegrees(n, &[bideg.0, bideg.1])?;
    let us_cols = ups.iter().map(coords).collect();
    let vs_cols = gs.iter().map(|g| st.bracket_m2(g)).collect();
    let (part, gamma, unknowns, rank, support) = st.solve_split(n, &ups, us_cols, &gs, vs_cols, target)?;
    let l = log(st, n, "joint", (fb.dim(), gb.dim()), (unknowns, rank, support), bideg, &part, &gamma);
    Ok((part, gamma, l))
}

/// Two-step variant: extend m'_{<n} symplectically, then absorb the cocycle
/// ṁ_n − s into a symplectic cocycle plus a coboundary.
fn two_step_stage(
    st: &Stage,
    n: usize,
    lower: &Derivation,
    target: &Derivation,
) -> Result<(Derivation, Derivation, StageLog), ObstructionError> {
    let alpha = st.alpha();
    let fb = st.form_block(n + 1, 1);
    let ups = upsilon_basis(st.sym, &st.cyclic, &fb)?;
    let bideg = ((n + 2, st.cyclic.label(st.omega())), (n + 1, fb.degree));
    st.check_bidegrees(n, &[bideg.0, bideg.1])?;

    let obs = obs_field(alpha, &CnStructure::new(lower.clone(), n)?);
    let ext = BlockSystem::new(ups.iter().map(|u| st.bracket_m2(u)).collect());
    let t = coords(&obs.neg());
    let x = ext.solve(&t).ok_or_else(|| ObstructionError::Infeasible {
        stage: n,
        system: ext.describe(alpha, &t),
    })?;
    let mut s = Derivation::zero(alpha.rank(), 1);
    for (k, c) in &x {
        s = s.add(&ups[*k].scale(c));
    }

    let cocycle = target.sub(&s);
    if !Derivation::bracket(alpha, st.setting.m2(), &cocycle, None).is_zero() {
        return Err(ObstructionError::Internal(format!("stage {n}: ṁ_n − s is not a cocycle")));
    }
    let (_, _, _, _, d_out) = st.cyclic.neighbourhood(n + 1, fb.degree);
    let zs: Vec<Derivation> = kernel(&d_out)
        .iter()
        .map(|k| {
            let mut z = Derivation::zero(alpha.rank(), 1);
            for (i, c) in k {
                z = z.add(&ups[*i].scale(c));
            }
            z
        })
        .collect();
    let gb = st.fields.block(n - 1, 1);
    let gs = st.fields_of(&gb);
    let us_cols = zs.iter().map(coords).collect();
    let vs_cols = gs.iter().map(|g| st.bracket_m2(g)).collect();
    let (z, gamma, unknowns, rank, support) = st.solve_split(n, &zs, us_cols, &gs, vs_cols, &cocycle)?;
    let part = s.add(&z);
    let l = log(st, n, "two-step", (fb.dim(), gb.dim()), (unknowns, rank, support), bideg, &part, &gamma);
    Ok((part, gamma, l))
}

/// Lift a C∞-structure known mod (N+1), i.e. a C_N-structure with N the
/// level, to a symplectic one: returns m' and φ with φ∘m∘φ^{-1} = m' mod (N).
pub fn lift_to_symplectic(setting: &Setting, m: &CnStructure, opts: LiftOptions) -> Result<LiftResult, ObstructionError> {
    setting.check_frobenius()?;
    let big_n = m.level();
    if big_n < 3 {
        return Err(ObstructionError::Truncation(format!("lift order {big_n} is below 3")));
    }
    require_cn(setting, m)?;
    // A unital-shaped input keeps φ unital; otherwise γ ranges over all
    // fields and only m' is made unital.
    let unital_input = opts.unital && m.is_unital_shaped(setting.algebra(), setting.alphabet());
    if opts.unital {
        setting.check_connected_unital()?;
    }
    let alpha = setting.alphabet();
    let st = Stage::new(setting, opts.unital, unital_input)?;
    let mut phi = PointedDiffeo::identity(alpha.rank(), big_n);
    let mut mprime = setting.m2().clone();
    let mut stages = Vec::new();
    for n in 3..big_n {
        let mdot = phi.conjugate(alpha, m.field());
        if !mdot.truncate(n - 1).sub(&mprime).is_zero() {
            return Err(ObstructionError::Internal(format!("stage {n}: lower orders drifted")));
        }
        let target = mdot.order_part(n);
        let (part, gamma, l) = if opts.two_step {
            two_step_stage(&st, n, &mprime, &target)?
        } else {
            joint_stage(&st, n, &target)?
        };
        mprime = mprime.add(&part);
        phi = PointedDiffeo::exp(alpha, &gamma, big_n)?.compose(&phi);
        stages.push(l);
    }
    let structure = CnStructure::new(mprime, big_n)?;
    let residuals = LiftResiduals {
        square: structure.residual(alpha),
        symplectic: st.sym.symplectic_residual(structure.field()),
        conjugation: morphism_residual(alpha, &phi, m.field(), structure.field(), big_n - 1),
        pointed: PointedDiffeo::new(alpha, phi.images().to_vec(), big_n).is_ok(),
        normalised: opts.unital.then(|| normalised_parts(alpha, structure.field())),
    };
    Ok(LiftResult {
        order: big_n,
        structure,
        phi,
        stages,
        residuals,
    })
}

#[derive(Clone, Debug)]
pub struct MorphismResiduals {
    /// φ'^*ω − ω through order N.
    pub symplectic: TwoForm,
    /// φ'∘m∘φ'^{-1} − m' through order N − 2.
    pub conjugation: Derivation,
    /// φ − φ'∘h on generators through order N − 2, h the homotopy part.
    pub homotopy: Derivation,
}

impl MorphismResiduals {
    pub fn all_zero(&self) -> bool {
        self.symplectic.is_zero() && self.conjugation.is_zero() && self.homotopy.is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct MorphismLift {
    pub order: usize,
    pub phi: PointedDiffeo,
    /// η_i in the order they were applied.
    pub etas: Vec<Derivation>,
    pub homotopy: PointedDiffeo,
    pub stages: Vec<StageLog>,
    pub residuals: MorphismResiduals,
}

/// Replace a pointed C∞-morphism φ (mod (N)) between symplectic structures
/// by a symplectic φ' with φ = φ'∘exp([m,η_k])∘…∘exp([m,η_1]) mod (N−1).
pub fn lift_morphism_to_symplectic(
    setting: &Setting,
    phi: &PointedDiffeo,
    m: &CnStructure,
    m_prime: &CnStructure,
    unital: bool,
) -> Result<MorphismLift, ObstructionError> {
    setting.check_frobenius()?;
    if m.level() != m_prime.level() {
        return Err(ObstructionError::Truncation("structures must share the level".into()));
    }
    let big_n = m.level();
    if phi.max_len() < big_n {
        return Err(ObstructionError::Truncation(format!("φ is stored only to order {}", phi.max_len())));
    }
    let phi = phi.with_max_len(big_n);
    for s in [m, m_prime] {
        require_cn(setting, s)?;
        setting.check_parts_symplectic(s.field())?;
        if unital {
            setting.check_unital(s)?;
        }
    }
    let alpha = setting.alphabet();
    if let Some(order) = morphism_residual(alpha, &phi, m.field(), m_prime.field(), big_n - 1).min_order() {
        return Err(ObstructionError::NotMorphism { level: big_n, order });
    }
    let st = Stage::new(setting, unital, unital)?;
    let rank = alpha.rank();
    let mut phi_s = PointedDiffeo::identity(rank, big_n);
    let mut h = PointedDiffeo::identity(rank, big_n);
    let mut etas = Vec::new();
    let mut stages = Vec::new();
    for n in 2..=big_n.saturating_sub(2) {
        let chi = phi.compose(&h.inverse()).compose(&phi_s.inverse());
        let disp = chi.displacement();
        if !disp.truncate(n - 1).is_zero() {
            return Err(ObstructionError::Internal(format!("stage {n}: lower orders of χ drifted")));
        }
        let delta = disp.order_part(n);
        let fb = st.form_block(n + 1, 0);
        let ups = upsilon_basis(st.sym, &st.cyclic, &fb)?;
        let eb = st.fields.block(n - 1, 0);
        let es = st.fields_of(&eb);
        let bideg = ((n + 2, st.cyclic.label(st.omega() - 1)), (n + 1, fb.degree));
        st.check_bidegrees(n, &[bideg.0, bideg.1])?;
        let us_cols = ups.iter().map(coords).collect();
        let vs_cols = es.iter().map(|e| st.bracket_m2(e)).collect();
        let (sigma, eta, unknowns, rnk, support) = st.solve_split(n, &ups, us_cols, &es, vs_cols, &delta)?;
        phi_s = PointedDiffeo::exp(alpha, &sigma, big_n)?.compose(&phi_s);
        let gen = Derivation::bracket(alpha, m.field(), &eta, Some(big_n));
        h = PointedDiffeo::exp(alpha, &gen, big_n)?.compose(&h);
        stages.push(log(&st, n, "morphism", (fb.dim(), eb.dim()), (unknowns, rnk, support), bideg, &sigma, &eta));
        etas.push(eta);
    }
    let keep = big_n.saturating_sub(2);
    let composed = phi_s.compose(&h);
    let homotopy = Derivation::from_parts_unchecked(
        phi.images()
            .iter()
            .zip(composed.images())
            .map(|(a, b)| a.sub(b).truncate(keep))
            .collect(),
        0,
    );
    let residuals = MorphismResiduals {
        symplectic: st.sym.symplectomorphism_residual(&phi_s, big_n),
        conjugation: morphism_residual(alpha, &phi_s, m.field(), m_prime.field(), keep),
        homotopy,
    };
    Ok(MorphismLift {
        order: big_n,
        phi: phi_s,
        etas,
        homotopy: h,
        stages,
        residuals,
    })
}
