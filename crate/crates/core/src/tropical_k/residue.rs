//! Residue maps: contraction along a ray between torus orbits, tame symbols
//! of univariate factored functions, and factorization of symbols into
//! monomial charts.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::matrix::express;
use crate::algebra::rational::{dot_i, primitive_i, q, to_q, IVec, QVec, Rational};
use crate::algebra::snf::integer_solve;
use crate::algebra::wedge::{binomial, compound, contract, wedge_of};
use crate::compact::{stratum_projection, Stratum};
use crate::error::{Error, Result};
use crate::fan::{orthant_fan, Cone, Fan};

use super::f_spaces;

struct RayData {
    u: IVec,
    sigma_in_tau: Vec<QVec>,
    rank_tau: usize,
    rank_sigma: usize,
}

fn ray_data(fan: &Fan, tau: &Cone, sigma: &Cone) -> Result<RayData> {
    if sigma.dim() != tau.dim() + 1 || !tau.is_face_of(sigma) {
        return Err(Error::NotAFacePair);
    }
    let st: Stratum = stratum_projection(fan, tau)?;
    let ss: Stratum = stratum_projection(fan, sigma)?;
    let v = sigma.rays().iter().find(|r| !tau.contains_point(r)).expect("sigma is larger than tau");
    let u = primitive_i(&st.project(v));
    let sigma_in_tau = ss
        .basis()
        .iter()
        .map(|b| st.coordinates(b).map(|c| to_q(&c)).ok_or(Error::NotAFacePair))
        .collect::<Result<_>>()?;
    Ok(RayData { u, sigma_in_tau, rank_tau: st.rank(), rank_sigma: ss.rank() })
}

fn contract_project(d: &RayData, omega: &[Rational], q_deg: usize, m_pi: &[i64]) -> Result<QVec> {
    let n = d.rank_tau;
    let eta = contract(&to_q(&d.u), omega, n, q_deg)?;
    // m ↦ m − ⟨m,u⟩ m_π on M ∩ τ^⊥, extended to ∧^{q−1}.
    let proj: Vec<QVec> = (0..n)
        .map(|i| (0..n).map(|j| q(i64::from(i == j) - m_pi[i] * d.u[j])).collect())
        .collect();
    let cp = compound(&proj, n, q_deg - 1);
    let eta: QVec = cp.iter().map(|row| crate::algebra::rational::dot_q(row, &eta)).collect();
    let basis = compound(&d.sigma_in_tau, n, q_deg - 1);
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    express(&basis, &eta).ok_or_else(|| Error::InvalidInput("residue does not lie over the smaller orbit".into()))
}

/// `∂(ω)` for `ω ∈ ∧^q (M ∩ τ^⊥)_ℚ`, with `σ ⊃ τ` of one dimension more.
///
/// `omega` and `m_pi` are in the stratum basis of `τ`; the result is in the
/// stratum basis of `σ`. Requires `⟨m_π, u⟩ = 1` for the primitive
/// generator `u` of the image of `σ` in `N_τ`.
pub fn residue_contract(
    fan: &Fan,
    tau: &Cone,
    sigma: &Cone,
    omega: &[Rational],
    q_deg: usize,
    m_pi: &[i64],
) -> Result<QVec> {
    let d = ray_data(fan, tau, sigma)?;
    if m_pi.len() != d.rank_tau {
        return Err(Error::DimensionMismatch { expected: d.rank_tau, found: m_pi.len() });
    }
    let pairing = dot_i(m_pi, &d.u);
    if pairing != 1 {
        return Err(Error::InvalidUniformizer(format!("<m_pi, u> = {pairing}, expected 1")));
    }
    if omega.len() != binomial(d.rank_tau, q_deg) {
        return Err(Error::DimensionMismatch { expected: binomial(d.rank_tau, q_deg), found: omega.len() });
    }
    contract_project(&d, omega, q_deg, m_pi)
}

/// Some `m_π` with `⟨m_π, u⟩ = 1` for the pair `τ ⊂ σ`, in the stratum basis of `τ`.
pub fn uniformizer(fan: &Fan, tau: &Cone, sigma: &Cone) -> Result<IVec> {
    let d = ray_data(fan, tau, sigma)?;
    integer_solve(std::slice::from_ref(&d.u), d.rank_tau, &[1])?.ok_or_else(|| Error::InvalidUniformizer("ray is not primitive".into()))
}

/// Matrix of `∂ : ∧^q (M∩τ^⊥)_ℚ → ∧^{q−1} (M∩σ^⊥)_ℚ`; one row per output coordinate.
pub fn residue_matrix(fan: &Fan, tau: &Cone, sigma: &Cone, q_deg: usize) -> Result<Vec<QVec>> {
    let d = ray_data(fan, tau, sigma)?;
    let m_pi = integer_solve(std::slice::from_ref(&d.u), d.rank_tau, &[1])?
        .ok_or_else(|| Error::InvalidUniformizer("ray is not primitive".into()))?;
    let src = binomial(d.rank_tau, q_deg);
    let dst = binomial(d.rank_sigma, q_deg - 1);
    let mut m = vec![vec![Rational::zero(); src]; dst];
    for j in 0..src {
        let mut e = vec![Rational::zero(); src];
        e[j] = Rational::one();
        let col = contract_project(&d, &e, q_deg, &m_pi)?;
        for (i, x) in col.into_iter().enumerate() {
            m[i][j] = x;
        }
    }
    Ok(m)
}

/// A discrete valuation of `ℚ(t)` trivial on `ℚ`: `t = c` or `t = ∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    Finite(Rational),
    Infinity,
}

/// `a · Π (t − c_i)^{e_i} · Π g_k(t)^{f_k}` with the `g_k` irreducible of degree ≥ 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredFunction {
    constant: Rational,
    roots: Vec<Rational>,
    exps: Vec<i64>,
    unsplit: Vec<(Vec<Rational>, i64)>,
}

impl FactoredFunction {
    pub fn new(constant: Rational, roots: Vec<Rational>, exps: Vec<i64>) -> Result<Self> {
        if constant.is_zero() {
            return Err(Error::InvalidInput("zero constant".into()));
        }
        if roots.len() != exps.len() {
            return Err(Error::DimensionMismatch { expected: roots.len(), found: exps.len() });
        }
        if roots.iter().collect::<BTreeSet<_>>().len() != roots.len() {
            return Err(Error::InvalidInput("roots must be distinct".into()));
        }
        if exps.contains(&0) {
            return Err(Error::InvalidInput("exponents must be nonzero".into()));
        }
        Ok(FactoredFunction { constant, roots, exps, unsplit: Vec::new() })
    }

    pub fn constant(c: Rational) -> Result<Self> {
        FactoredFunction::new(c, vec![], vec![])
    }

    /// `t − c`.
    pub fn linear(c: Rational) -> Self {
        FactoredFunction { constant: q(1), roots: vec![c], exps: vec![1], unsplit: Vec::new() }
    }

    /// Adds a factor `g(t)^e` with `g` given by coefficients from degree 0 up,
    /// assumed to have no root in `ℚ`.
    pub fn with_unsplit(mut self, coeffs: Vec<Rational>, e: i64) -> Result<Self> {
        if coeffs.len() < 3 || coeffs.last().is_none_or(Zero::is_zero) || e == 0 {
            return Err(Error::InvalidInput("unsplit factors need degree at least 2 and e ≠ 0".into()));
        }
        self.unsplit.push((coeffs, e));
        Ok(self)
    }

    pub fn roots(&self) -> &[Rational] {
        &self.roots
    }

    pub fn exps(&self) -> &[i64] {
        &self.exps
    }

    pub fn is_constant(&self) -> bool {
        self.roots.is_empty() && self.unsplit.is_empty()
    }

    fn eval_poly(coeffs: &[Rational], t: &Rational) -> Rational {
        coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
    }

    /// Value at `t`, when `t` is neither a zero nor a pole.
    pub fn eval(&self, t: &Rational) -> Option<Rational> {
        if self.roots.contains(t) {
            return None;
        }
        let mut v = self.constant.clone();
        for (c, &e) in self.roots.iter().zip(&self.exps) {
            v *= pow(&(t - c), e);
        }
        for (g, e) in &self.unsplit {
            let x = Self::eval_poly(g, t);
            if x.is_zero() {
                return None;
            }
            v *= pow(&x, *e);
        }
        Some(v)
    }

    /// `(ord, ū)` with `f = π^{ord} u` and `ū` the residue of the unit.
    pub fn order_and_unit(&self, place: &Place) -> Result<(i64, Rational)> {
        match place {
            Place::Finite(c) => {
                let mut unit = self.constant.clone();
                let mut ord = 0;
                for (r, &e) in self.roots.iter().zip(&self.exps) {
                    if r == c {
                        ord = e;
                    } else {
                        unit *= pow(&(c - r), e);
                    }
                }
                for (g, e) in &self.unsplit {
                    let x = Self::eval_poly(g, c);
                    if x.is_zero() {
                        return Err(Error::UnsplitFactor(format!("factor vanishes at t = {c}")));
                    }
                    unit *= pow(&x, *e);
                }
                Ok((ord, unit))
            }
            Place::Infinity => {
                let mut unit = self.constant.clone();
                let mut ord: i64 = -self.exps.iter().sum::<i64>();
                for (g, e) in &self.unsplit {
                    ord -= (g.len() as i64 - 1) * e;
                    unit *= pow(g.last().expect("nonempty"), *e);
                }
                Ok((ord, unit))
            }
        }
    }
}

fn pow(x: &Rational, e: i64) -> Rational {
    let b = if e < 0 { x.recip() } else { x.clone() };
    num_traits::pow(b, e.unsigned_abs() as usize)
}

/// Value of a residue in `K^M_{p−1}(ℚ) ⊗ ℚ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidueValue {
    /// `K_0 ⊗ ℚ = ℚ`.
    Degree0(Rational),
    /// `ℚ^× ⊗ ℚ`, as exponents of primes (signs are torsion).
    Degree1(BTreeMap<BigInt, Rational>),
    /// `K^M_d(ℚ) ⊗ ℚ = 0` for `d ≥ 2`.
    Vanishing(usize),
}

impl ResidueValue {
    pub fn is_zero(&self) -> bool {
        match self {
            ResidueValue::Degree0(x) => x.is_zero(),
            ResidueValue::Degree1(m) => m.is_empty(),
            ResidueValue::Vanishing(_) => true,
        }
    }

    /// Class of a rational number in `ℚ^× ⊗ ℚ`.
    pub fn class_of(x: &Rational) -> ResidueValue {
        let mut out = BTreeMap::new();
        add_log(&mut out, x, &q(1));
        ResidueValue::Degree1(out)
    }
}

fn factor_into(out: &mut BTreeMap<BigInt, Rational>, n: &BigInt, c: &Rational) {
    let mut n = n.abs();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        while n.is_multiple_of(&d) {
            n /= &d;
            *out.entry(d.clone()).or_insert_with(Rational::zero) += c;
        }
        d += 1;
    }
    if n > BigInt::one() {
        *out.entry(n).or_insert_with(Rational::zero) += c;
    }
}

fn add_log(out: &mut BTreeMap<BigInt, Rational>, x: &Rational, c: &Rational) {
    factor_into(out, x.numer(), c);
    factor_into(out, x.denom(), &-c.clone());
    out.retain(|_, v| !v.is_zero());
}

/// Tame residue `∂_x{f_1, …, f_p}` at a place of `ℚ(t)`, with rational coefficients.
///
/// Writing `f_j = π^{e_j} u_j`, multilinearity and `{π, π} = {π, −1}` give
/// `∂ = Σ_j (−1)^{j−1} e_j {ū_1, …, ū_{j−1}, ū_{j+1}, …, ū_p}`.
pub fn tame_residue(symbol: &[FactoredFunction], place: &Place) -> Result<ResidueValue> {
    let p = symbol.len();
    if p == 0 {
        return Err(Error::InvalidInput("residue of a degree-0 symbol".into()));
    }
    let data: Vec<(i64, Rational)> = symbol.iter().map(|f| f.order_and_unit(place)).collect::<Result<_>>()?;
    Ok(match p {
        1 => ResidueValue::Degree0(q(data[0].0)),
        2 => {
            let mut out = BTreeMap::new();
            add_log(&mut out, &data[1].1, &q(data[0].0));
            add_log(&mut out, &data[0].1, &q(-data[1].0));
            ResidueValue::Degree1(out)
        }
        _ => ResidueValue::Vanishing(p - 1),
    })
}

/// One entry of a symbol `{a_1, …, a_p}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymbolEntry {
    /// A nonzero constant of the base field.
    Constant(Rational),
    /// A character `χ^m` of `K(M)`.
    Monomial(IVec),
    /// A univariate function of `K(t)`.
    Factored(FactoredFunction),
}

/// A symbol written in a monomial chart: `∧^p` of the exponent vectors, its
/// class in `F^p` of the chart's tropical fan, and the fan itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredSymbol {
    pub p: usize,
    pub rank: usize,
    pub fan: Fan,
    pub symbol: QVec,
    pub class: QVec,
}

impl FactoredSymbol {
    pub fn is_zero(&self) -> bool {
        !super::nonzero(&self.class)
    }
}

/// Multilinear expansion of a symbol in a monomial chart.
///
/// Monomial entries use the identity chart on `K(M)` with the complete fan.
/// Univariate entries use the torus coordinates `t − c_i` (and the unsplit
/// factors); the chart's fan consists of the rays `e_i` of the finite places
/// and the ray `−(deg)` of `t = ∞`. Constants die.
pub fn symbol_factor(entries: &[SymbolEntry]) -> Result<FactoredSymbol> {
    let p = entries.len();
    let has_mono = entries.iter().any(|e| matches!(e, SymbolEntry::Monomial(_)));
    let has_fact = entries.iter().any(|e| matches!(e, SymbolEntry::Factored(f) if !f.is_constant()));
    if has_mono && has_fact {
        return Err(Error::UnsupportedEntry("monomial and univariate entries in one symbol".into()));
    }
    let has_const = entries
        .iter()
        .any(|e| matches!(e, SymbolEntry::Constant(_)) || matches!(e, SymbolEntry::Factored(f) if f.is_constant()));
    let (rank, vectors, fan): (usize, Vec<IVec>, Fan) = if has_fact {
        let mut roots: BTreeSet<Rational> = BTreeSet::new();
        let mut unsplit: Vec<Vec<Rational>> = Vec::new();
        for e in entries {
            if let SymbolEntry::Factored(f) = e {
                roots.extend(f.roots.iter().cloned());
                for (g, _) in &f.unsplit {
                    if !unsplit.contains(g) {
                        unsplit.push(g.clone());
                    }
                }
            }
        }
        let roots: Vec<Rational> = roots.into_iter().collect();
        let k = roots.len() + unsplit.len();
        let vectors = entries
            .iter()
            .map(|e| {
                let mut v = vec![0; k];
                if let SymbolEntry::Factored(f) = e {
                    for (r, &x) in f.roots.iter().zip(&f.exps) {
                        v[roots.iter().position(|s| s == r).expect("collected")] += x;
                    }
                    for (g, x) in &f.unsplit {
                        v[roots.len() + unsplit.iter().position(|h| h == g).expect("collected")] += x;
                    }
                }
                v
            })
            .collect();
        let mut rays: Vec<IVec> = (0..k).map(|i| (0..k).map(|j| i64::from(i == j)).collect()).collect();
        let infinity: IVec = (0..k).map(|i| if i < roots.len() { -1 } else { -(unsplit[i - roots.len()].len() as i64 - 1) }).collect();
        if k > 0 {
            rays.push(infinity);
        }
        let cones: Vec<Vec<usize>> = (0..rays.len()).map(|i| vec![i]).collect();
        (k, vectors, Fan::from_rays(k, &rays, &cones)?)
    } else {
        let n = entries
            .iter()
            .find_map(|e| if let SymbolEntry::Monomial(m) = e { Some(m.len()) } else { None })
            .unwrap_or(0);
        let vectors = entries
            .iter()
            .map(|e| match e {
                SymbolEntry::Monomial(m) if m.len() == n => Ok(m.clone()),
                SymbolEntry::Monomial(m) => Err(Error::DimensionMismatch { expected: n, found: m.len() }),
                _ => Ok(vec![0; n]),
            })
            .collect::<Result<_>>()?;
        (n, vectors, orthant_fan(n))
    };
    let symbol = if has_const {
        vec![Rational::zero(); binomial(rank, p)]
    } else {
        wedge_of(&vectors.iter().map(|v| to_q(v)).collect::<Vec<_>>(), rank)
    };
    let class = f_spaces(&fan, p).1.class_of(&symbol);
    Ok(FactoredSymbol { p, rank, fan, symbol, class })
}
