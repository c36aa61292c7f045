//! Points `l_1 + ε l_2 + ε² l_3 + …` with `ε` infinitesimal, and their location in fans.

use std::sync::Arc;

use crate::algebra::formal::{Basis, FormalReal, Sign};
use crate::algebra::rational::{q, to_q, IVec, Rational};
use crate::error::{Error, Result};

use super::cone::{Cone, PolyCone};
use super::fan::Fan;

/// A sequence of levels `(l_1, …, l_r)` in `N_ℝ` with formal-real entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexPoint {
    ambient: usize,
    basis: Arc<Basis>,
    levels: Vec<Vec<FormalReal>>,
}

impl LexPoint {
    pub fn new(ambient: usize, basis: Arc<Basis>, levels: Vec<Vec<FormalReal>>) -> Result<Self> {
        for l in &levels {
            if l.len() != ambient {
                return Err(Error::DimensionMismatch { expected: ambient, found: l.len() });
            }
            if l.iter().any(|x| x.basis() != &basis) {
                return Err(Error::InvalidInput("level entries use a different basis".into()));
            }
        }
        Ok(LexPoint { ambient, basis, levels })
    }

    pub fn from_rational_levels(ambient: usize, levels: &[Vec<Rational>]) -> Result<Self> {
        let basis = Basis::rational();
        let levels = levels
            .iter()
            .map(|l| l.iter().map(|x| FormalReal::rational(&basis, x.clone())).collect())
            .collect();
        LexPoint::new(ambient, basis, levels)
    }

    pub fn from_integer_levels(ambient: usize, levels: &[IVec]) -> Result<Self> {
        let lq: Vec<Vec<Rational>> = levels.iter().map(|l| to_q(l)).collect();
        LexPoint::from_rational_levels(ambient, &lq)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn levels(&self) -> &[Vec<FormalReal>] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// `(m(l_1), …, m(l_r))`.
    pub fn evaluate(&self, m: &[Rational]) -> Vec<FormalReal> {
        self.levels.iter().map(|l| FormalReal::combination(&self.basis, m, l)).collect()
    }

    /// First nonzero sign of `(m(l_1), …, m(l_r))`.
    pub fn sign_of(&self, m: &[Rational]) -> Result<Sign> {
        for l in &self.levels {
            let s = FormalReal::combination(&self.basis, m, l).sign()?;
            if s != Sign::Zero {
                return Ok(s);
            }
        }
        Ok(Sign::Zero)
    }

    pub fn sign_of_i(&self, m: &[i64]) -> Result<Sign> {
        self.sign_of(&to_q(m))
    }

    /// Truncation to the first `k` levels.
    pub fn prefix(&self, k: usize) -> LexPoint {
        LexPoint { ambient: self.ambient, basis: self.basis.clone(), levels: self.levels[..k].to_vec() }
    }

    /// Image under an integer linear map with the given rows.
    pub fn map(&self, rows: &[IVec]) -> LexPoint {
        let levels = self
            .levels
            .iter()
            .map(|l| rows.iter().map(|r| FormalReal::combination(&self.basis, &to_q(r), l)).collect())
            .collect();
        LexPoint { ambient: rows.len(), basis: self.basis.clone(), levels }
    }

    pub fn scale_level(&self, i: usize, c: &Rational) -> LexPoint {
        let mut out = self.clone();
        out.levels[i] = out.levels[i].iter().map(|x| x.scale(c)).collect();
        out
    }

    pub fn negate(&self) -> LexPoint {
        let mut out = self.clone();
        for i in 0..out.levels.len() {
            out = out.scale_level(i, &q(-1));
        }
        out
    }
}

/// Whether the perturbed point lies in the (possibly non-pointed) cone.
pub fn in_cone_lex(cone: &PolyCone, x: &LexPoint) -> Result<bool> {
    for e in cone.equations() {
        if x.sign_of_i(e)? != Sign::Zero {
            return Ok(false);
        }
    }
    for f in cone.facets() {
        if x.sign_of_i(f)? == Sign::Negative {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the perturbed point lies in the relative interior of the cone.
pub fn in_relint_lex(cone: &PolyCone, x: &LexPoint) -> Result<bool> {
    for e in cone.equations() {
        if x.sign_of_i(e)? != Sign::Zero {
            return Ok(false);
        }
    }
    for f in cone.facets() {
        if x.sign_of_i(f)? != Sign::Positive {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The unique cone of `fan` whose relative interior contains the perturbed point.
pub fn locate_lex(fan: &Fan, x: &LexPoint) -> Result<usize> {
    if x.ambient() != fan.ambient() {
        return Err(Error::DimensionMismatch { expected: fan.ambient(), found: x.ambient() });
    }
    for &i in fan.maximal_indices() {
        let c = fan.cone(i);
        if !in_cone_lex(c.poly(), x)? {
            continue;
        }
        let mut tight = Vec::new();
        for f in c.facets() {
            if x.sign_of_i(f)? == Sign::Zero {
                tight.push(f);
            }
        }
        let face: Vec<IVec> = c
            .rays()
            .iter()
            .filter(|r| tight.iter().all(|f| crate::algebra::rational::dot_i(f, r) == 0))
            .cloned()
            .collect();
        let face = Cone::from_generators(fan.ambient(), &face)?;
        return fan.index_of(&face).ok_or(Error::OutsideSupport);
    }
    Err(Error::OutsideSupport)
}
