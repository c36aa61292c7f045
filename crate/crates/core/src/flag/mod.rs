//! Higher-rank tropical points: flags `(l_1, …, l_r)`, their canonical
//! forms and their location in fan structures.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, RwLock};

use num_traits::{Signed, Zero};

use crate::algebra::formal::{Basis, FormalReal, Sign};
use crate::algebra::matrix::{express, rref};
use crate::algebra::rational::{primitive_from_q, primitive_scale, q, to_q, IVec, QVec, Rational};
use crate::algebra::subspace::QSubspace;
use crate::error::{Error, Result};
use crate::fan::{locate_lex, Cone, Fan, LexPoint};
use crate::valuation::OrderedValueGroup;

/// A raw flag; any sequence of levels.
pub type Flag = LexPoint;

/// `l = Σ_k β_k v_k`: the rational coefficient vectors of a level, one per basis element.
pub fn level_components(x: &LexPoint, i: usize) -> Vec<QVec> {
    let l = &x.levels()[i];
    (0..x.basis().len()).map(|k| l.iter().map(|e| e.coeffs()[k].clone()).collect()).collect()
}

/// Decomposition `l_i = Σ_k a_{i,k} l_{i,k}` of one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelDecomposition {
    /// Primitive integer vectors, linearly independent.
    pub components: Vec<IVec>,
    /// ℚ-linearly independent formal reals.
    pub coefficients: Vec<FormalReal>,
}

pub type ResidualDecomposition = Vec<LevelDecomposition>;

fn decompose(basis: &Arc<Basis>, rows: &[QVec], n: usize) -> Result<LevelDecomposition> {
    let (w, _) = rref(rows, n);
    let mut components = Vec::with_capacity(w.len());
    let mut scales = Vec::with_capacity(w.len());
    for wt in &w {
        let c = primitive_scale(wt);
        components.push(primitive_from_q(wt)?);
        scales.push(c);
    }
    // rows[k] = Σ_t e[k][t] w_t, so a_t = Σ_k β_k e[k][t] / scale_t.
    let e: Vec<QVec> = rows.iter().map(|r| express(&w, r).expect("row lies in its own span")).collect();
    let coefficients = (0..w.len())
        .map(|t| {
            let coeffs: QVec = e.iter().map(|row| &row[t] / &scales[t]).collect();
            FormalReal::new(basis.clone(), coeffs)
        })
        .collect::<Result<_>>()?;
    Ok(LevelDecomposition { components, coefficients })
}

/// Splits every level into rational directions with independent real coefficients.
pub fn residual_decomposition(x: &Flag) -> Result<ResidualDecomposition> {
    (0..x.len()).map(|i| decompose(x.basis(), &level_components(x, i), x.ambient())).collect()
}

/// A flag in normal form: zero residuals removed, each level reduced modulo
/// the rational span of the earlier ones and positively rescaled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalFlag(LexPoint);

impl CanonicalFlag {
    pub fn point(&self) -> &LexPoint {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Rational span of all residual components.
    pub fn component_span(&self) -> QSubspace {
        let n = self.0.ambient();
        let rows: Vec<QVec> = (0..self.0.len()).flat_map(|i| level_components(&self.0, i)).collect();
        QSubspace::span(n, &rows).expect("consistent ambient")
    }
}

fn reduce_modulo(echelon: &[QVec], pivots: &[usize], v: &QVec) -> QVec {
    let mut r = v.clone();
    for (row, &p) in echelon.iter().zip(pivots) {
        if !r[p].is_zero() {
            let f = r[p].clone();
            for (a, b) in r.iter_mut().zip(row) {
                *a -= &f * b;
            }
        }
    }
    r
}

/// Sign-preserving positive rescaling of a residual `Σ_k β_k r_k`.
fn normalize(basis: &Arc<Basis>, rows: Vec<QVec>, n: usize) -> Result<Vec<FormalReal>> {
    let d = decompose(basis, &rows, n)?;
    let level: Vec<QVec> = if d.components.len() == 1 {
        let s = d.coefficients[0].sign()?;
        let sign = if s == Sign::Negative { q(-1) } else { q(1) };
        let mut out = vec![vec![Rational::zero(); n]; basis.len()];
        out[0] = d.components[0].iter().map(|&c| &sign * q(c)).collect();
        out
    } else {
        let j = (0..n).find(|&j| rows.iter().any(|r| !r[j].is_zero())).expect("nonzero residual");
        let lead: QVec = rows.iter().map(|r| r[j].clone()).collect();
        let c = primitive_scale(&lead).abs();
        rows.iter().map(|r| r.iter().map(|x| x * &c).collect()).collect()
    };
    (0..n).map(|j| FormalReal::new(basis.clone(), level.iter().map(|r| r[j].clone()).collect())).collect()
}

/// Normal form under deleting zero residuals, adding earlier spans and
/// positive rescaling of residuals.
pub fn canonicalize(x: &Flag) -> Result<CanonicalFlag> {
    let n = x.ambient();
    let mut span: Vec<QVec> = Vec::new();
    let mut levels = Vec::new();
    for i in 0..x.len() {
        let (ech, piv) = rref(&span, n);
        let rows: Vec<QVec> = level_components(x, i).iter().map(|v| reduce_modulo(&ech, &piv, v)).collect();
        if rows.iter().all(|r| r.iter().all(Zero::is_zero)) {
            continue;
        }
        span.extend(rows.iter().cloned());
        levels.push(normalize(x.basis(), rows, n)?);
    }
    Ok(CanonicalFlag(LexPoint::new(n, x.basis().clone(), levels)?))
}

/// The cone `P_Λ` whose relative interior contains `Σ ε^i l_i` for small `ε`.
pub fn limit_point(x: &CanonicalFlag, fan: &Fan) -> Result<Cone> {
    Ok(fan.cone(locate_lex(fan, &x.0)?).clone())
}

fn fingerprint(fan: &Fan) -> u64 {
    let mut h = DefaultHasher::new();
    fan.ambient().hash(&mut h);
    for c in fan.cones() {
        c.rays().hash(&mut h);
    }
    h.finish()
}

/// A canonical flag evaluated lazily on fan structures, with memoized locations.
#[derive(Debug)]
pub struct LimitPoint {
    flag: CanonicalFlag,
    cache: RwLock<HashMap<u64, Cone>>,
}

impl LimitPoint {
    pub fn new(flag: CanonicalFlag) -> Self {
        LimitPoint { flag, cache: RwLock::new(HashMap::new()) }
    }

    pub fn flag(&self) -> &CanonicalFlag {
        &self.flag
    }

    pub fn at(&self, fan: &Fan) -> Result<Cone> {
        let key = fingerprint(fan);
        if let Some(c) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(c.clone());
        }
        let c = limit_point(&self.flag, fan)?;
        self.cache.write().expect("cache lock").entry(key).or_insert_with(|| c.clone());
        Ok(c)
    }
}

/// Length of the canonical form, and the height of the value group the flag
/// induces on the standard lattice basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlagHeight {
    pub height: usize,
    pub value_group_height: usize,
}

impl FlagHeight {
    pub fn consistent(&self) -> bool {
        self.height == self.value_group_height
    }
}

pub fn flag_height(x: &Flag) -> Result<FlagHeight> {
    let height = canonicalize(x)?.len();
    let value_group_height = OrderedValueGroup::from_flag(x).height().height;
    Ok(FlagHeight { height, value_group_height })
}

/// Spans of the located cones along a refinement tower, and the first index
/// from which the span no longer changes.
pub fn span_stabilization(x: &CanonicalFlag, tower: &[Fan]) -> Result<(QSubspace, usize)> {
    let spans: Vec<QSubspace> = tower.iter().map(|f| limit_point(x, f).map(|c| c.span())).collect::<Result<_>>()?;
    let last = spans.last().cloned().ok_or_else(|| Error::InvalidInput("empty tower".into()))?;
    let mut idx = spans.len() - 1;
    while idx > 0 && spans[idx - 1] == last {
        idx -= 1;
    }
    Ok((last, idx))
}

/// The height-at-most-one flag of a direction: empty for zero, else one canonical level.
pub fn ht1_compare(direction: &[FormalReal]) -> Result<CanonicalFlag> {
    let basis = direction.first().map_or_else(Basis::rational, |d| d.basis().clone());
    let levels = if direction.iter().all(FormalReal::is_zero) { vec![] } else { vec![direction.to_vec()] };
    canonicalize(&LexPoint::new(direction.len(), basis, levels)?)
}

/// Integer direction as a one-level canonical flag.
pub fn ht1_compare_i(direction: &[i64]) -> Result<CanonicalFlag> {
    let basis = Basis::rational();
    let d: Vec<FormalReal> = to_q(direction).into_iter().map(|x| FormalReal::rational(&basis, x)).collect();
    ht1_compare(&d)
}
