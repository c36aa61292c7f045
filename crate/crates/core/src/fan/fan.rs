//! Fans: face-closed collections of cones.

use std::collections::{BTreeSet, HashMap};

use crate::algebra::rational::{dot_i, primitive_i, IVec};
use crate::error::{Error, Result};

use super::cone::Cone;

/// A fan in `N_ℝ = ℝ^n`, stored with all faces.
#[derive(Clone, Debug)]
pub struct Fan {
    ambient: usize,
    cones: Vec<Cone>,
    index: HashMap<Vec<IVec>, usize>,
    maximal: Vec<usize>,
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.cones == other.cones
    }
}

impl Eq for Fan {}

/// First failing fan axiom found by [`is_fan`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FanViolation {
    RankMismatch(usize),
    MissingFace { cone: usize, face: Cone },
    BadIntersection(usize, usize),
}

/// Result of checking the fan axioms on a list of cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanCheck {
    pub ok: bool,
    pub violation: Option<FanViolation>,
}

/// Checks face closure and that pairwise intersections are common faces.
pub fn is_fan(ambient: usize, cones: &[Cone]) -> FanCheck {
    let fail = |v| FanCheck { ok: false, violation: Some(v) };
    if let Some(i) = cones.iter().position(|c| c.ambient() != ambient) {
        return fail(FanViolation::RankMismatch(i));
    }
    let present: BTreeSet<&[IVec]> = cones.iter().map(|c| c.rays()).collect();
    for (i, c) in cones.iter().enumerate() {
        for f in c.faces() {
            if !present.contains(f.rays()) {
                return fail(FanViolation::MissingFace { cone: i, face: f });
            }
        }
    }
    for i in 0..cones.len() {
        for j in i + 1..cones.len() {
            if !intersects_in_common_face(&cones[i], &cones[j]) {
                return fail(FanViolation::BadIntersection(i, j));
            }
        }
    }
    FanCheck { ok: true, violation: None }
}

fn intersects_in_common_face(a: &Cone, b: &Cone) -> bool {
    match a.intersect(b) {
        Ok(c) => c.is_face_of(a) && c.is_face_of(b),
        Err(_) => false,
    }
}

impl Fan {
    /// Closes `cones` under faces and validates the fan axioms.
    pub fn new(ambient: usize, cones: Vec<Cone>) -> Result<Fan> {
        let fan = Fan::closure(ambient, cones)?;
        let check = is_fan(ambient, &fan.cones);
        if let Some(v) = check.violation {
            return Err(Error::InvalidInput(format!("not a fan: {v:?}")));
        }
        Ok(fan)
    }

    /// Closes under faces without checking the intersection axiom.
    pub fn closure(ambient: usize, cones: Vec<Cone>) -> Result<Fan> {
        let mut all: BTreeSet<Cone> = BTreeSet::new();
        for c in cones {
            if c.ambient() != ambient {
                return Err(Error::DimensionMismatch { expected: ambient, found: c.ambient() });
            }
            if all.contains(&c) {
                continue;
            }
            all.extend(c.faces());
        }
        Ok(Fan::from_sorted(ambient, all.into_iter().collect()))
    }

    fn from_sorted(ambient: usize, cones: Vec<Cone>) -> Fan {
        let index: HashMap<Vec<IVec>, usize> =
            cones.iter().enumerate().map(|(i, c)| (c.rays().to_vec(), i)).collect();
        let mut is_max = vec![true; cones.len()];
        for c in &cones {
            for f in c.facet_cones() {
                if let Some(&j) = index.get(f.rays()) {
                    is_max[j] = false;
                }
            }
        }
        let maximal = (0..cones.len()).filter(|&i| is_max[i]).collect();
        Fan { ambient, cones, index, maximal }
    }

    /// Builds from a ray list and cones given as ray-index lists.
    pub fn from_rays(ambient: usize, rays: &[IVec], cones: &[Vec<usize>]) -> Result<Fan> {
        let mut out = Vec::with_capacity(cones.len());
        for c in cones {
            let gens: Vec<IVec> = c
                .iter()
                .map(|&i| rays.get(i).cloned().ok_or_else(|| Error::InvalidInput(format!("ray index {i} out of range"))))
                .collect::<Result<_>>()?;
            out.push(Cone::from_generators(ambient, &gens)?);
        }
        Fan::new(ambient, out)
    }

    /// The fan with no cones; its support is empty.
    pub fn empty(ambient: usize) -> Fan {
        Fan::from_sorted(ambient, Vec::new())
    }

    /// Fan of projective space: rays `e_1, …, e_n, -(e_1 + … + e_n)`.
    pub fn projective_space(n: usize) -> Fan {
        let mut rays: Vec<IVec> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        rays.push(vec![-1; n]);
        let cones = (0..=n)
            .map(|skip| {
                let gens: Vec<IVec> = (0..=n).filter(|&i| i != skip).map(|i| rays[i].clone()).collect();
                Cone::from_generators(n, &gens).expect("simplicial")
            })
            .collect();
        Fan::closure(n, cones).expect("consistent ranks")
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// All cones, ordered by dimension and then by rays.
    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cone(&self, i: usize) -> &Cone {
        &self.cones[i]
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn maximal_indices(&self) -> &[usize] {
        &self.maximal
    }

    pub fn maximal_cones(&self) -> Vec<&Cone> {
        self.maximal.iter().map(|&i| &self.cones[i]).collect()
    }

    pub fn index_of(&self, c: &Cone) -> Option<usize> {
        self.index.get(c.rays()).copied()
    }

    pub fn contains_cone(&self, c: &Cone) -> bool {
        c.ambient() == self.ambient && self.index.contains_key(c.rays())
    }

    pub fn cones_of_dim(&self, d: usize) -> impl Iterator<Item = &Cone> {
        self.cones.iter().filter(move |c| c.dim() == d)
    }

    pub fn rays(&self) -> Vec<IVec> {
        self.cones_of_dim(1).map(|c| c.rays()[0].clone()).collect()
    }

    pub fn dim(&self) -> Option<usize> {
        self.cones.last().map(Cone::dim)
    }

    pub fn is_pure(&self) -> bool {
        let d = self.dim();
        self.maximal_cones().iter().all(|c| Some(c.dim()) == d)
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(Cone::is_simplicial)
    }

    pub fn support_contains_point(&self, x: &[i64]) -> bool {
        self.maximal_cones().iter().any(|c| c.contains_point(x))
    }

    /// Cones having `c` as a face, `c` included.
    pub fn star(&self, c: &Cone) -> Vec<&Cone> {
        self.cones.iter().filter(|d| c.is_face_of(d)).collect()
    }

    /// Whether the support is all of `ℝ^n`.
    pub fn is_complete(&self) -> bool {
        support_contains(self, &orthant_fan(self.ambient))
    }
}

/// The fan of all coordinate orthants; its support is `ℝ^n`.
pub fn orthant_fan(n: usize) -> Fan {
    let cones = (0..1usize << n)
        .map(|mask| {
            let gens: Vec<IVec> = (0..n)
                .map(|i| (0..n).map(|j| if i == j { if mask >> i & 1 == 1 { -1 } else { 1 } } else { 0 }).collect())
                .collect();
            Cone::from_generators(n, &gens).expect("orthant")
        })
        .collect();
    Fan::closure(n, cones).expect("consistent ranks")
}

/// How to refine a fan.
#[derive(Clone, Debug)]
pub enum Refinement<'a> {
    /// All pairwise intersections with another fan.
    Common(&'a Fan),
    /// Stellar subdivision at a ray.
    Stellar(IVec),
}

pub fn refine(fan: &Fan, mode: Refinement<'_>) -> Result<Fan> {
    match mode {
        Refinement::Common(other) => common_refinement(fan, other),
        Refinement::Stellar(v) => stellar_subdivision(fan, &v),
    }
}

/// Pairwise intersections of maximal cones, closed under faces.
pub fn common_refinement(a: &Fan, b: &Fan) -> Result<Fan> {
    if a.ambient != b.ambient {
        return Err(Error::DimensionMismatch { expected: a.ambient, found: b.ambient });
    }
    let mut cones = BTreeSet::new();
    for p in a.maximal_cones() {
        for q in b.maximal_cones() {
            cones.insert(p.intersect(q)?);
        }
    }
    Fan::closure(a.ambient, cones.into_iter().collect())
}

/// Replaces every cone `σ ∋ v` by the cones `τ + ℝ_{≥0}v` over faces `τ ⊂ σ` missing `v`.
pub fn stellar_subdivision(fan: &Fan, v: &[i64]) -> Result<Fan> {
    if v.len() != fan.ambient {
        return Err(Error::DimensionMismatch { expected: fan.ambient, found: v.len() });
    }
    if v.iter().all(|&x| x == 0) || !fan.support_contains_point(v) {
        return Err(Error::RayOutsideSupport(v.to_vec()));
    }
    let v = primitive_i(v);
    if fan.rays().contains(&v) {
        return Ok(fan.clone());
    }
    let mut out = BTreeSet::new();
    for &i in &fan.maximal {
        let sigma = &fan.cones[i];
        if !sigma.contains_point(&v) {
            out.insert(sigma.clone());
            continue;
        }
        for tau in sigma.faces() {
            if !tau.contains_point(&v) {
                let mut gens = tau.rays().to_vec();
                gens.push(v.clone());
                out.insert(Cone::from_generators(fan.ambient, &gens)?);
            }
        }
    }
    Fan::closure(fan.ambient, out.into_iter().collect())
}

/// Exact containment and equality of supports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SupportRelation {
    pub contains: bool,
    pub equal: bool,
}

/// Compares `|a|` with `|b|`.
pub fn support_predicates(a: &Fan, b: &Fan) -> Result<SupportRelation> {
    if a.ambient != b.ambient {
        return Err(Error::DimensionMismatch { expected: a.ambient, found: b.ambient });
    }
    let contains = support_contains(a, b);
    let equal = contains && support_contains(b, a);
    Ok(SupportRelation { contains, equal })
}

/// Whether `|a| ⊇ |b|`.
pub fn support_contains(a: &Fan, b: &Fan) -> bool {
    b.maximal_cones().iter().all(|q| covers(a, q))
}

/// Whether `|fan| ⊇ q`.
///
/// The pieces `q ∩ P` form a fan subdividing part of `q`. They cover `q`
/// iff some piece is full-dimensional in `q` and every wall of a
/// full-dimensional piece that is not on the boundary of `q` is shared by
/// exactly two of them.
fn covers(fan: &Fan, q: &Cone) -> bool {
    let d = q.dim();
    let mut pieces: BTreeSet<Cone> = BTreeSet::new();
    for p in fan.maximal_cones() {
        if let Ok(c) = p.intersect(q) {
            if c.dim() == d {
                pieces.insert(c);
            }
        }
    }
    if d == 0 {
        return !fan.is_empty();
    }
    if pieces.is_empty() {
        return false;
    }
    let mut walls: HashMap<Vec<IVec>, usize> = HashMap::new();
    for piece in &pieces {
        for w in piece.facet_cones() {
            let on_boundary = q.facets().iter().any(|f| w.rays().iter().all(|r| dot_i(f, r) == 0));
            if !on_boundary {
                *walls.entry(w.rays().to_vec()).or_default() += 1;
            }
        }
    }
    walls.values().all(|&c| c == 2)
}
