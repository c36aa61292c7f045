//! Rational polyhedral cones in double description.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::algebra::matrix::{nullspace, rank};
use crate::algebra::rational::{dot_i, dot_q, primitive_from_q, primitive_i, to_q, IVec, QVec, Rational};
use crate::algebra::subspace::QSubspace;
use crate::algebra::wedge::combinations;
use crate::error::{Error, Result};

/// A rational polyhedral cone, possibly containing lines.
///
/// `equations` cut out the linear span, `facets` are the facet normals
/// (each chosen inside the span and primitive), `rays` are generators of
/// the minimal nonzero faces modulo `lineality`.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyCone {
    ambient: usize,
    rays: Vec<IVec>,
    lineality: Vec<IVec>,
    equations: Vec<IVec>,
    facets: Vec<IVec>,
    dim: usize,
}

fn qrows(v: &[IVec]) -> Vec<QVec> {
    v.iter().map(|r| to_q(r)).collect()
}

fn integer_rows(rows: &[QVec]) -> Vec<IVec> {
    rows.iter().map(|r| primitive_from_q(r).expect("small entries")).collect()
}

impl PolyCone {
    pub fn from_generators(ambient: usize, gens: &[IVec]) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.len() != ambient) {
            return Err(Error::DimensionMismatch { expected: ambient, found: g.len() });
        }
        let gens: Vec<IVec> = {
            let mut seen = BTreeSet::new();
            gens.iter()
                .filter(|g| g.iter().any(|&x| x != 0))
                .map(|g| primitive_i(g))
                .filter(|g| seen.insert(g.clone()))
                .collect()
        };
        let span = QSubspace::span_i(ambient, &gens)?;
        let d = span.dim();
        let equations = integer_rows(span.annihilator().basis());
        let gq = qrows(&gens);

        // Facets: hyperplanes inside the span through d-1 independent generators.
        let mut facets: Vec<IVec> = Vec::new();
        if d > 0 {
            let sb = span.basis();
            let mut seen = HashSet::new();
            for sel in combinations(gens.len(), d - 1) {
                let sub: Vec<QVec> = sel.iter().map(|&i| gq[i].clone()).collect();
                if rank(&sub, ambient) != d - 1 {
                    continue;
                }
                // m = Σ c_j sb_j with m·g = 0 on the chosen generators.
                let constraints: Vec<QVec> = sub
                    .iter()
                    .map(|g| sb.iter().map(|s| dot_q(s, g)).collect())
                    .collect();
                let ns = nullspace(&constraints, d);
                debug_assert_eq!(ns.len(), 1);
                let c = &ns[0];
                let m: QVec = (0..ambient)
                    .map(|k| c.iter().zip(sb).fold(Rational::zero(), |acc, (cj, s)| acc + cj * &s[k]))
                    .collect();
                let vals: Vec<Rational> = gq.iter().map(|g| dot_q(&m, g)).collect();
                let m = if vals.iter().all(|v| !v.is_negative()) {
                    m
                } else if vals.iter().all(|v| !v.is_positive()) {
                    m.iter().map(|x| -x).collect()
                } else {
                    continue;
                };
                let mi = primitive_from_q(&m)?;
                if seen.insert(mi.clone()) {
                    facets.push(mi);
                }
            }
        }
        facets.sort();

        // Lineality: the part of the span killed by every facet normal.
        let mut cut = equations.clone();
        cut.extend(facets.iter().cloned());
        let lin_q = nullspace(&qrows(&cut), ambient);
        let lineality = integer_rows(QSubspace::span(ambient, &lin_q)?.basis());
        let l = lineality.len();

        let mut rays = Vec::new();
        if d > l {
            let mut seen_tight = HashSet::new();
            for (g, gqv) in gens.iter().zip(&gq) {
                let tight: Vec<usize> = (0..facets.len()).filter(|&i| dot_i(&facets[i], g) == 0).collect();
                if tight.len() == facets.len() {
                    continue; // in the lineality space
                }
                let mut rows = qrows(&equations);
                rows.extend(tight.iter().map(|&i| to_q(&facets[i])));
                if rank(&rows, ambient) + 1 + l != ambient {
                    continue;
                }
                if seen_tight.insert(tight) {
                    let _ = gqv;
                    rays.push(g.clone());
                }
            }
        }
        rays.sort();
        Ok(PolyCone { ambient, rays, lineality, equations, facets, dim: d })
    }

    /// `{x : eq·x = 0 for eq in equations, ineq·x >= 0 for ineq in inequalities}`.
    pub fn from_constraints(ambient: usize, equations: &[IVec], inequalities: &[IVec]) -> Result<Self> {
        for r in equations.iter().chain(inequalities) {
            if r.len() != ambient {
                return Err(Error::DimensionMismatch { expected: ambient, found: r.len() });
            }
        }
        let mut all = equations.to_vec();
        all.extend(inequalities.iter().cloned());
        let lin_q = nullspace(&qrows(&all), ambient);
        let lin = integer_rows(&lin_q);

        // Pointed part: intersect with the orthogonal complement of the lineality.
        let mut eqs = equations.to_vec();
        eqs.extend(lin.iter().cloned());
        let eq_rank = rank(&qrows(&eqs), ambient);
        let mut gens: Vec<IVec> = Vec::new();
        if eq_rank < ambient {
            let need = ambient - 1 - eq_rank;
            let ineq_q = qrows(inequalities);
            let mut seen = HashSet::new();
            for sel in combinations(inequalities.len(), need) {
                let mut rows = qrows(&eqs);
                rows.extend(sel.iter().map(|&i| ineq_q[i].clone()));
                let ns = nullspace(&rows, ambient);
                if ns.len() != 1 {
                    continue;
                }
                let r = primitive_from_q(&ns[0])?;
                for cand in [r.clone(), r.iter().map(|x| -x).collect::<IVec>()] {
                    if inequalities.iter().all(|b| dot_i(b, &cand) >= 0) && seen.insert(cand.clone()) {
                        gens.push(cand);
                    }
                }
            }
        }
        for l in &lin {
            gens.push(l.clone());
            gens.push(l.iter().map(|x| -x).collect());
        }
        Self::from_generators(ambient, &gens)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[IVec] {
        &self.rays
    }

    pub fn lineality(&self) -> &[IVec] {
        &self.lineality
    }

    pub fn equations(&self) -> &[IVec] {
        &self.equations
    }

    pub fn facets(&self) -> &[IVec] {
        &self.facets
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    /// All generators, lines included in both directions.
    pub fn generators(&self) -> Vec<IVec> {
        let mut g = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(l.iter().map(|x| -x).collect());
        }
        g
    }

    pub fn contains_point(&self, x: &[i64]) -> bool {
        self.equations.iter().all(|e| dot_i(e, x) == 0) && self.facets.iter().all(|f| dot_i(f, x) >= 0)
    }

    pub fn contains_point_q(&self, x: &[Rational]) -> bool {
        self.equations.iter().all(|e| dot_q(&to_q(e), x).is_zero())
            && self.facets.iter().all(|f| !dot_q(&to_q(f), x).is_negative())
    }

    pub fn relint_contains(&self, x: &[i64]) -> bool {
        self.equations.iter().all(|e| dot_i(e, x) == 0) && self.facets.iter().all(|f| dot_i(f, x) > 0)
    }

    pub fn contains_cone(&self, other: &PolyCone) -> bool {
        other.generators().iter().all(|g| self.contains_point(g))
    }

    pub fn same_set(&self, other: &PolyCone) -> bool {
        self.ambient == other.ambient && self.contains_cone(other) && other.contains_cone(self)
    }

    pub fn intersect(&self, other: &PolyCone) -> Result<PolyCone> {
        let mut eqs = self.equations.clone();
        eqs.extend(other.equations.iter().cloned());
        let mut ineqs = self.facets.clone();
        ineqs.extend(other.facets.iter().cloned());
        PolyCone::from_constraints(self.ambient, &eqs, &ineqs)
    }

    /// Image under the integer linear map `x ↦ A x` (`A` has `rows` rows).
    pub fn image(&self, a: &[IVec]) -> Result<PolyCone> {
        let gens: Vec<IVec> = self.generators().iter().map(|g| a.iter().map(|r| dot_i(r, g)).collect()).collect();
        PolyCone::from_generators(a.len(), &gens)
    }

    pub fn span(&self) -> QSubspace {
        QSubspace::span_i(self.ambient, &self.generators()).expect("consistent ambient")
    }

    /// Faces, each keyed by the set of own facet normals vanishing on it.
    pub fn faces(&self) -> Vec<PolyCone> {
        let key = |c: &PolyCone| -> Vec<usize> {
            (0..self.facets.len())
                .filter(|&i| c.generators().iter().all(|g| dot_i(&self.facets[i], g) == 0))
                .collect()
        };
        let mut seen = HashSet::new();
        seen.insert(Vec::<usize>::new());
        let mut out = Vec::new();
        let mut stack = vec![self.clone()];
        while let Some(c) = stack.pop() {
            for f in &c.facets {
                let sub: Vec<IVec> = c.generators().into_iter().filter(|g| dot_i(f, g) == 0).collect();
                let face = PolyCone::from_generators(self.ambient, &sub).expect("face of a cone");
                if seen.insert(key(&face)) {
                    stack.push(face);
                }
            }
            out.push(c);
        }
        out.sort_by_key(|c| c.dim);
        out
    }

    /// Face minimizing `m`, or `None` when `m` is unbounded below.
    pub fn argmin_face(&self, m: &[i64]) -> Option<PolyCone> {
        let gens = self.generators();
        if gens.iter().any(|g| dot_i(m, g) < 0) {
            return None;
        }
        let sub: Vec<IVec> = gens.into_iter().filter(|g| dot_i(m, g) == 0).collect();
        Some(PolyCone::from_generators(self.ambient, &sub).expect("face of a cone"))
    }

    pub fn into_cone(self) -> Result<Cone> {
        if !self.is_pointed() {
            return Err(Error::NotStronglyConvex);
        }
        Ok(Cone(self))
    }
}

impl fmt::Debug for PolyCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone{:?}", self.rays)?;
        if !self.lineality.is_empty() {
            write!(f, "+lin{:?}", self.lineality)?;
        }
        Ok(())
    }
}

/// A strongly convex rational polyhedral cone, identified by its sorted
/// primitive extreme rays.
#[derive(Clone)]
pub struct Cone(PolyCone);

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.0.ambient == other.0.ambient && self.0.rays == other.0.rays
    }
}

impl Eq for Cone {}

impl std::hash::Hash for Cone {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.ambient.hash(state);
        self.0.rays.hash(state);
    }
}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cone {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.dim(), &self.0.rays).cmp(&(other.dim(), &other.0.rays))
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone{:?}", self.0.rays)
    }
}

impl Cone {
    /// Primitivizes, drops redundant generators and dualizes.
    pub fn from_generators(ambient: usize, gens: &[IVec]) -> Result<Cone> {
        PolyCone::from_generators(ambient, gens)?.into_cone()
    }

    pub fn from_constraints(ambient: usize, equations: &[IVec], inequalities: &[IVec]) -> Result<Cone> {
        PolyCone::from_constraints(ambient, equations, inequalities)?.into_cone()
    }

    pub fn zero(ambient: usize) -> Cone {
        Cone::from_generators(ambient, &[]).expect("zero cone")
    }

    pub fn ray(v: &[i64]) -> Result<Cone> {
        Cone::from_generators(v.len(), &[v.to_vec()])
    }

    pub fn poly(&self) -> &PolyCone {
        &self.0
    }

    pub fn ambient(&self) -> usize {
        self.0.ambient
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn rays(&self) -> &[IVec] {
        &self.0.rays
    }

    pub fn facets(&self) -> &[IVec] {
        &self.0.facets
    }

    pub fn equations(&self) -> &[IVec] {
        &self.0.equations
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays().len() == self.dim()
    }

    pub fn contains_point(&self, x: &[i64]) -> bool {
        self.0.contains_point(x)
    }

    pub fn contains_point_q(&self, x: &[Rational]) -> bool {
        self.0.contains_point_q(x)
    }

    pub fn relint_contains(&self, x: &[i64]) -> bool {
        self.0.relint_contains(x)
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.rays().iter().all(|r| self.contains_point(r))
    }

    /// Sum of the rays; lies in the relative interior.
    pub fn interior_point(&self) -> IVec {
        let mut p = vec![0; self.ambient()];
        for r in self.rays() {
            for (a, b) in p.iter_mut().zip(r) {
                *a += b;
            }
        }
        p
    }

    pub fn span(&self) -> QSubspace {
        QSubspace::span_i(self.ambient(), self.rays()).expect("consistent ambient")
    }

    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        self.0.intersect(&other.0)?.into_cone()
    }

    /// All faces, from the zero cone up to the cone itself.
    pub fn faces(&self) -> Vec<Cone> {
        let mut seen: HashSet<Vec<IVec>> = HashSet::new();
        let mut out = Vec::new();
        let mut stack = vec![self.clone()];
        seen.insert(self.rays().to_vec());
        while let Some(c) = stack.pop() {
            for f in c.facets() {
                let sub: Vec<IVec> = c.rays().iter().filter(|r| dot_i(f, r) == 0).cloned().collect();
                if seen.insert(sub.clone()) {
                    stack.push(Cone::from_generators(c.ambient(), &sub).expect("face of a cone"));
                }
            }
            out.push(c);
        }
        if seen.insert(Vec::new()) {
            out.push(Cone::zero(self.ambient()));
        }
        out.sort();
        out
    }

    /// Facets as cones.
    pub fn facet_cones(&self) -> Vec<Cone> {
        self.facets()
            .iter()
            .map(|f| {
                let sub: Vec<IVec> = self.rays().iter().filter(|r| dot_i(f, r) == 0).cloned().collect();
                Cone::from_generators(self.ambient(), &sub).expect("facet of a cone")
            })
            .collect()
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        if !other.contains_cone(self) {
            return false;
        }
        if self == other {
            return true;
        }
        // A face is cut out by the facets of `other` vanishing on it.
        let tight: Vec<&IVec> = other
            .facets()
            .iter()
            .filter(|f| self.rays().iter().all(|r| dot_i(f, r) == 0))
            .collect();
        let face_rays: Vec<IVec> = other
            .rays()
            .iter()
            .filter(|r| tight.iter().all(|f| dot_i(f, r) == 0))
            .cloned()
            .collect();
        face_rays == self.rays()
    }
}

/// Free-function constructor.
pub fn cone_from_generators(ambient: usize, vectors: &[IVec]) -> Result<Cone> {
    Cone::from_generators(ambient, vectors)
}
