//! Supports of tropical varieties: constant-coefficient hypersurfaces, their
//! images under monomial maps, and tropicalization of monomial valuations.

use std::collections::BTreeSet;

use crate::algebra::rational::{dot_i, IVec};
use crate::error::{Error, Result};
use crate::fan::{common_refinement, is_fan, orthant_fan, support_contains, Cone, Fan, PolyCone};
use crate::flag::{canonicalize, limit_point};
use crate::valuation::MonomialValuation;

/// A Laurent polynomial over a trivially valued field, remembered only by its exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentPolynomial {
    vars: usize,
    exponents: Vec<IVec>,
}

impl ExponentPolynomial {
    pub fn new(vars: usize, exponents: Vec<IVec>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidInput("polynomial needs at least one exponent".into()));
        }
        if let Some(e) = exponents.iter().find(|e| e.len() != vars) {
            return Err(Error::DimensionMismatch { expected: vars, found: e.len() });
        }
        let exponents: BTreeSet<IVec> = exponents.into_iter().collect();
        Ok(ExponentPolynomial { vars, exponents: exponents.into_iter().collect() })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn exponents(&self) -> &[IVec] {
        &self.exponents
    }
}

fn sub(a: &[i64], b: &[i64]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// The locus where the minimum of `⟨m, w⟩` over the exponents is attained
/// at least twice, as the fan of normal cones of positive-dimensional faces
/// of the Newton polytope. Cones containing lines are split along the
/// coordinate orthants.
pub fn tropical_hypersurface(f: &ExponentPolynomial) -> Result<Fan> {
    let n = f.vars;
    if f.exponents.len() == 1 {
        return Ok(Fan::empty(n));
    }
    let lifted: Vec<IVec> = f.exponents.iter().map(|m| m.iter().copied().chain([1]).collect()).collect();
    let newton = Cone::from_generators(n + 1, &lifted)?;
    let vertices: Vec<IVec> = newton.rays().iter().map(|r| r[..n].to_vec()).collect();
    let mut normals: Vec<PolyCone> = Vec::new();
    for face in newton.faces() {
        if face.dim() < 2 {
            continue;
        }
        let fv: Vec<IVec> = face.rays().iter().map(|r| r[..n].to_vec()).collect();
        let base = &fv[0];
        let eqs: Vec<IVec> = fv[1..].iter().map(|m| sub(m, base)).collect();
        let ineqs: Vec<IVec> = vertices.iter().map(|m| sub(m, base)).filter(|d| d.iter().any(|&x| x != 0)).collect();
        normals.push(PolyCone::from_constraints(n, &eqs, &ineqs)?);
    }
    if normals.iter().all(PolyCone::is_pointed) {
        let cones = normals.into_iter().map(PolyCone::into_cone).collect::<Result<_>>()?;
        return Fan::closure(n, cones);
    }
    let orthants = orthant_fan(n);
    let mut pieces = BTreeSet::new();
    for c in &normals {
        for o in orthants.maximal_cones() {
            pieces.insert(c.intersect(o.poly())?.into_cone()?);
        }
    }
    Fan::closure(n, pieces.into_iter().collect())
}

/// The map of cocharacter lattices `N_l → N_r`, `x ↦ B x`, of a toric morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMap {
    source: usize,
    rows: Vec<IVec>,
}

impl MonomialMap {
    /// From the `r × l` matrix acting on cocharacters.
    pub fn from_cocharacters(source: usize, rows: Vec<IVec>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != source) {
            return Err(Error::DimensionMismatch { expected: source, found: r.len() });
        }
        Ok(MonomialMap { source, rows })
    }

    /// From the `l × r` matrix acting on characters `M_r → M_l`; its transpose acts on cocharacters.
    pub fn from_characters(target: usize, cols: Vec<IVec>) -> Result<Self> {
        if let Some(c) = cols.iter().find(|c| c.len() != target) {
            return Err(Error::DimensionMismatch { expected: target, found: c.len() });
        }
        let source = cols.len();
        let rows = (0..target).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        Ok(MonomialMap { source, rows })
    }

    pub fn identity(n: usize) -> Self {
        MonomialMap { source: n, rows: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect() }
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.rows.len()
    }

    pub fn cocharacter_rows(&self) -> &[IVec] {
        &self.rows
    }

    /// Rows of the character map `M_r → M_l` (transpose of the cocharacter matrix).
    pub fn character_rows(&self) -> Vec<IVec> {
        (0..self.source).map(|j| self.rows.iter().map(|r| r[j]).collect()).collect()
    }

    pub fn apply(&self, x: &[i64]) -> IVec {
        self.rows.iter().map(|r| dot_i(r, x)).collect()
    }
}

/// Splits every cone along each hyperplane that crosses it.
fn cut_by(cones: Vec<PolyCone>, hyperplanes: &[IVec]) -> Result<Vec<PolyCone>> {
    let mut current = cones;
    for h in hyperplanes {
        let neg: IVec = h.iter().map(|x| -x).collect();
        let mut next = Vec::with_capacity(current.len());
        for c in current {
            let vals: Vec<i64> = c.generators().iter().map(|g| dot_i(h, g)).collect();
            if vals.iter().any(|&v| v > 0) && vals.iter().any(|&v| v < 0) {
                for side in [h, &neg] {
                    let mut ineqs = c.facets().to_vec();
                    ineqs.push(side.clone());
                    next.push(PolyCone::from_constraints(c.ambient(), c.equations(), &ineqs)?);
                }
            } else {
                next.push(c);
            }
        }
        current = next;
    }
    Ok(current)
}

/// A fan structure on `ψ(|A|)`.
///
/// When the images of the cones of `A` already form a fan it is returned;
/// otherwise all images are cut along the arrangement of their facet and
/// span hyperplanes and the coordinate hyperplanes, whose cells form a fan.
pub fn image_support(psi: &MonomialMap, a: &Fan) -> Result<Fan> {
    if a.ambient() != psi.source {
        return Err(Error::DimensionMismatch { expected: psi.source, found: a.ambient() });
    }
    let r = psi.target();
    let images: Vec<PolyCone> = a
        .maximal_cones()
        .iter()
        .map(|c| PolyCone::from_generators(r, &c.rays().iter().map(|x| psi.apply(x)).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;
    if images.iter().all(PolyCone::is_pointed) {
        let cones: Vec<Cone> = images.iter().map(|c| c.clone().into_cone()).collect::<Result<_>>()?;
        let closed = Fan::closure(r, cones)?;
        if is_fan(r, closed.cones()).ok {
            return Ok(closed);
        }
    }
    let mut hyperplanes: BTreeSet<IVec> = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
    for c in &images {
        hyperplanes.extend(c.facets().iter().cloned());
        hyperplanes.extend(c.equations().iter().cloned());
    }
    let hyperplanes: Vec<IVec> = hyperplanes.into_iter().collect();
    let pieces = cut_by(images, &hyperplanes)?;
    let cones: BTreeSet<Cone> = pieces.into_iter().map(PolyCone::into_cone).collect::<Result<_>>()?;
    Fan::closure(r, cones.into_iter().collect())
}

/// Whether the closure in the toric variety of `Σ` is proper: `|A| ⊆ |Σ|`.
pub fn properness_check(a: &Fan, sigma: &Fan) -> Result<bool> {
    if a.ambient() != sigma.ambient() {
        return Err(Error::DimensionMismatch { expected: sigma.ambient(), found: a.ambient() });
    }
    Ok(support_contains(sigma, a))
}

/// The cone of `Λ` containing the tropicalization of `v`.
pub fn trop_ad(v: &MonomialValuation, lambda: &Fan) -> Result<Cone> {
    match limit_point(&canonicalize(v.flag())?, lambda) {
        Err(Error::OutsideSupport) => Err(Error::NoCenter),
        other => other,
    }
}

/// Common refinement of a fan with the normal fan skeleton of `f`: a fan
/// structure on `|Σ| ∩ Trop(f)`.
pub fn restrict_to_hypersurface(sigma: &Fan, f: &ExponentPolynomial) -> Result<Fan> {
    common_refinement(sigma, &tropical_hypersurface(f)?)
}
