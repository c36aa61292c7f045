//! The partial compactification `⊔_σ N_σ` of a fan and cones and fans inside it.

use std::sync::Arc;

use crate::algebra::matrix::express;
use crate::algebra::rational::{dot_i, to_i64, to_q, IVec};
use crate::algebra::snf::{hermite_rows, integer_kernel};
use crate::error::{Error, Result};
use crate::fan::{Cone, Fan, PolyCone};

/// The stratum `N_σ = Hom(M ∩ σ^⊥, ℤ)` of a cone `σ`.
///
/// `basis` is a lattice basis of `M ∩ σ^⊥` in Hermite form; its rows are
/// also the rows of the projection `π_σ: N → N_σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    sigma: Cone,
    basis: Vec<IVec>,
}

impl Stratum {
    pub fn sigma(&self) -> &Cone {
        &self.sigma
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[IVec] {
        &self.basis
    }

    pub fn projection(&self) -> &[IVec] {
        &self.basis
    }

    pub fn project(&self, x: &[i64]) -> IVec {
        self.basis.iter().map(|b| dot_i(b, x)).collect()
    }

    /// Writes `m ∈ M ∩ σ^⊥` in the stratum basis.
    pub fn coordinates(&self, m: &[i64]) -> Option<IVec> {
        let b: Vec<_> = self.basis.iter().map(|r| to_q(r)).collect();
        let c = express(&b, &to_q(m))?;
        c.iter().map(|x| to_i64(x).ok()).collect()
    }

    /// Integer matrix of the quotient map `N_σ → N_τ` for `σ ⪯ τ`.
    pub fn map_to(&self, tau: &Stratum) -> Result<Vec<IVec>> {
        tau.basis
            .iter()
            .map(|m| self.coordinates(m).ok_or(Error::NotAFacePair))
            .collect()
    }
}

/// Lattice basis of `M ∩ σ^⊥` and the projection to `N_σ`.
pub fn stratum_projection(fan: &Fan, sigma: &Cone) -> Result<Stratum> {
    if !fan.contains_cone(sigma) {
        return Err(Error::ConeNotInFan);
    }
    Ok(stratum_of(sigma))
}

fn stratum_of(sigma: &Cone) -> Stratum {
    let n = sigma.ambient();
    let basis = if sigma.dim() == 0 {
        (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
    } else {
        let k = integer_kernel(sigma.rays(), n).expect("small lattice");
        hermite_rows(&k, n).expect("small lattice")
    };
    Stratum { sigma: sigma.clone(), basis }
}

/// A fan together with all its strata.
#[derive(Debug)]
pub struct Compactification {
    fan: Fan,
    strata: Vec<Stratum>,
}

impl Compactification {
    pub fn new(fan: Fan) -> Arc<Self> {
        let strata = fan.cones().iter().map(stratum_of).collect();
        Arc::new(Compactification { fan, strata })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn stratum(&self, i: usize) -> &Stratum {
        &self.strata[i]
    }

    fn is_face(&self, s: usize, t: usize) -> bool {
        self.fan.cone(s).is_face_of(self.fan.cone(t))
    }

    /// Limit points in `N_τ` of a cone `c ⊂ N_σ`; `None` when `c` misses `rel.int(τ)`.
    pub fn boundary_trace(&self, sigma: usize, c: &PolyCone, tau: usize) -> Result<Option<PolyCone>> {
        if !self.is_face(sigma, tau) {
            return Err(Error::NotAFacePair);
        }
        let ss = &self.strata[sigma];
        if c.ambient() != ss.rank() {
            return Err(Error::DimensionMismatch { expected: ss.rank(), found: c.ambient() });
        }
        if sigma == tau {
            return Ok(Some(c.clone()));
        }
        let tau_img: Vec<IVec> = self.fan.cone(tau).rays().iter().map(|r| ss.project(r)).collect();
        let tau_bar = PolyCone::from_generators(ss.rank(), &tau_img)?;
        let meet = c.intersect(&tau_bar)?;
        let probe: IVec = meet.generators().iter().fold(vec![0; ss.rank()], |acc, g| {
            acc.iter().zip(g).map(|(a, b)| a + b).collect()
        });
        if !tau_bar.relint_contains(&probe) {
            return Ok(None);
        }
        let r = ss.map_to(&self.strata[tau])?;
        Ok(Some(c.image(&r)?))
    }
}

/// Free-function form of [`Compactification::boundary_trace`].
pub fn boundary_trace(
    comp: &Compactification,
    sigma: &Cone,
    c: &PolyCone,
    tau: &Cone,
) -> Result<Option<PolyCone>> {
    let s = comp.fan.index_of(sigma).ok_or(Error::ConeNotInFan)?;
    let t = comp.fan.index_of(tau).ok_or(Error::ConeNotInFan)?;
    comp.boundary_trace(s, c, t)
}

/// The closure of a cone `C ⊂ N_σ`, with its trace on every stratum.
#[derive(Clone, Debug)]
pub struct CompactifiedCone {
    comp: Arc<Compactification>,
    carrier: usize,
    cone: PolyCone,
    traces: Vec<Option<PolyCone>>,
}

impl CompactifiedCone {
    pub fn new(comp: &Arc<Compactification>, carrier: usize, cone: PolyCone) -> Result<Self> {
        if carrier >= comp.fan.len() {
            return Err(Error::ConeNotInFan);
        }
        let traces = (0..comp.fan.len())
            .map(|t| if comp.is_face(carrier, t) { comp.boundary_trace(carrier, &cone, t) } else { Ok(None) })
            .collect::<Result<_>>()?;
        Ok(CompactifiedCone { comp: comp.clone(), carrier, cone, traces })
    }

    /// Closure of an ordinary cone of `N_ℝ`.
    pub fn closure_of(comp: &Arc<Compactification>, c: &Cone) -> Result<Self> {
        let zero = comp.fan.index_of(&Cone::zero(comp.fan.ambient())).ok_or(Error::ConeNotInFan)?;
        CompactifiedCone::new(comp, zero, c.poly().clone())
    }

    pub fn compactification(&self) -> &Arc<Compactification> {
        &self.comp
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn cone(&self) -> &PolyCone {
        &self.cone
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn trace(&self, tau: usize) -> Option<&PolyCone> {
        self.traces[tau].as_ref()
    }

    pub fn traces(&self) -> &[Option<PolyCone>] {
        &self.traces
    }

    /// Equality as subsets of the compactification.
    pub fn same_set(&self, other: &CompactifiedCone) -> bool {
        same_tables(&self.traces, &other.traces)
    }

    /// All nonempty faces.
    pub fn faces(&self) -> Vec<CompactifiedCone> {
        let mut out: Vec<CompactifiedCone> = Vec::new();
        for f in self.cone.faces() {
            for t in 0..self.comp.fan.len() {
                if !self.comp.is_face(self.carrier, t) {
                    continue;
                }
                if let Ok(Some(d)) = self.comp.boundary_trace(self.carrier, &f, t) {
                    let face = CompactifiedCone::new(&self.comp, t, d).expect("trace of a face");
                    if !out.iter().any(|g| g.same_set(&face)) {
                        out.push(face);
                    }
                }
            }
        }
        out
    }
}

fn same_tables(a: &[Option<PolyCone>], b: &[Option<PolyCone>]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| match (x, y) {
            (None, None) => true,
            (Some(x), Some(y)) => x.same_set(y),
            _ => false,
        })
}

/// The face `closure(P^a ∩ N_τ)`.
///
/// `a` is given in coordinates of the stratum basis of `M ∩ σ_P^⊥` and
/// must be nonnegative on `P ∩ N_{σ_P}`, so that the minimum of `a` is
/// attained. Returns `None` when the face misses `N_τ`.
pub fn compactified_face(p: &CompactifiedCone, a: &[i64], tau: usize) -> Result<Option<CompactifiedCone>> {
    if a.len() != p.cone.ambient() {
        return Err(Error::DimensionMismatch { expected: p.cone.ambient(), found: a.len() });
    }
    let face = p.cone.argmin_face(a).ok_or(Error::InvalidFunctional)?;
    if tau >= p.comp.fan.len() || !p.comp.is_face(p.carrier, tau) {
        return Ok(None);
    }
    match p.comp.boundary_trace(p.carrier, &face, tau)? {
        Some(d) => Ok(Some(CompactifiedCone::new(&p.comp, tau, d)?)),
        None => Ok(None),
    }
}

/// First failing axiom found by [`is_compactified_fan`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompactifiedViolation {
    MixedAmbient(usize),
    MissingFace { cone: usize, carrier: usize },
    BadIntersection(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactifiedCheck {
    pub ok: bool,
    pub violation: Option<CompactifiedViolation>,
}

/// Checks both fan axioms stratum by stratum on the trace tables.
pub fn is_compactified_fan(cones: &[CompactifiedCone]) -> CompactifiedCheck {
    let fail = |v| CompactifiedCheck { ok: false, violation: Some(v) };
    let Some(first) = cones.first() else {
        return CompactifiedCheck { ok: true, violation: None };
    };
    if let Some(i) = cones.iter().position(|c| !Arc::ptr_eq(&c.comp, &first.comp)) {
        return fail(CompactifiedViolation::MixedAmbient(i));
    }
    let faces: Vec<Vec<CompactifiedCone>> = cones.iter().map(CompactifiedCone::faces).collect();
    for (i, fs) in faces.iter().enumerate() {
        for f in fs {
            if !cones.iter().any(|c| c.same_set(f)) {
                return fail(CompactifiedViolation::MissingFace { cone: i, carrier: f.carrier });
            }
        }
    }
    for i in 0..cones.len() {
        for j in i + 1..cones.len() {
            let meet: Option<Vec<Option<PolyCone>>> = cones[i]
                .traces
                .iter()
                .zip(&cones[j].traces)
                .map(|(x, y)| match (x, y) {
                    (Some(x), Some(y)) => {
                        let z = x.intersect(y).ok()?;
                        Some(Some(z))
                    }
                    _ => Some(None),
                })
                .collect();
            let Some(meet) = meet else {
                return fail(CompactifiedViolation::BadIntersection(i, j));
            };
            // An empty intersection counts as the empty face.
            if meet.iter().all(Option::is_none) {
                continue;
            }
            let is_face_of = |fs: &[CompactifiedCone]| fs.iter().any(|f| same_tables(&f.traces, &meet));
            if !is_face_of(&faces[i]) || !is_face_of(&faces[j]) {
                return fail(CompactifiedViolation::BadIntersection(i, j));
            }
        }
    }
    CompactifiedCheck { ok: true, violation: None }
}

/// A fan in the compactification, closed under faces.
#[derive(Clone, Debug)]
pub struct CompactifiedFan {
    cones: Vec<CompactifiedCone>,
}

impl CompactifiedFan {
    /// Adds all faces, then checks the intersection axiom.
    pub fn closure(cones: Vec<CompactifiedCone>) -> Result<Self> {
        let mut all: Vec<CompactifiedCone> = Vec::new();
        for c in cones {
            for f in c.faces() {
                if !all.iter().any(|g| g.same_set(&f)) {
                    all.push(f);
                }
            }
        }
        all.sort_by_key(|c| (c.carrier, c.dim()));
        let check = is_compactified_fan(&all);
        if let Some(v) = check.violation {
            return Err(Error::InvalidInput(format!("not a fan: {v:?}")));
        }
        Ok(CompactifiedFan { cones: all })
    }

    /// Closures of all cones of an ordinary fan together with their boundary faces.
    pub fn from_fan(comp: &Arc<Compactification>, fan: &Fan) -> Result<Self> {
        let cones = fan.maximal_cones().into_iter().map(|c| CompactifiedCone::closure_of(comp, c)).collect::<Result<_>>()?;
        CompactifiedFan::closure(cones)
    }

    pub fn cones(&self) -> &[CompactifiedCone] {
        &self.cones
    }

    /// Cones lying in the open stratum `N_ℝ`, as an ordinary fan.
    pub fn open_part(&self) -> Result<Fan> {
        let comp = &self.cones[0].comp;
        let zero = comp.fan.index_of(&Cone::zero(comp.fan.ambient()));
        let cones = self
            .cones
            .iter()
            .filter(|c| Some(c.carrier) == zero)
            .map(|c| c.cone.clone().into_cone())
            .collect::<Result<_>>()?;
        Fan::closure(comp.fan.ambient(), cones)
    }
}
