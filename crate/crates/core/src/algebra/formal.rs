//! Real numbers represented as rational combinations of a declared basis
//! `β_0 = 1, β_1, ..., β_s` of reals that are assumed linearly independent
//! over `Q`. Signs are decided by interval evaluation over rational
//! enclosures of the `β_k`.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, q, QVec, Rational};
use crate::error::{Error, Result};

/// Default number of interval bisections before giving up on a sign.
pub const DEFAULT_INTERVAL_DEPTH: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(x: &Rational) -> Sign {
        if x.is_zero() {
            Sign::Zero
        } else if x.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// How the enclosure of a basis element can be tightened.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Refinement {
    /// The enclosure is all that is known.
    Fixed,
    /// The element is `sqrt(radicand)`; enclosures are refined by bisection.
    Sqrt(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisElement {
    pub name: String,
    pub lo: Rational,
    pub hi: Rational,
    pub refinement: Refinement,
}

impl BasisElement {
    pub fn fixed(name: impl Into<String>, lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::invalid("enclosure has lo > hi"));
        }
        Ok(BasisElement { name: name.into(), lo, hi, refinement: Refinement::Fixed })
    }

    /// `sqrt(radicand)` with a coarse integer enclosure; refined on demand.
    pub fn sqrt(name: impl Into<String>, radicand: Rational) -> Result<Self> {
        if !radicand.is_positive() {
            return Err(Error::invalid("sqrt radicand must be positive"));
        }
        let mut hi = Rational::one();
        while &hi * &hi < radicand {
            hi *= q(2);
        }
        Ok(BasisElement {
            name: name.into(),
            lo: Rational::zero(),
            hi,
            refinement: Refinement::Sqrt(radicand),
        })
    }

    fn refine(&self, lo: &mut Rational, hi: &mut Rational) -> bool {
        match &self.refinement {
            Refinement::Fixed => false,
            Refinement::Sqrt(r) => {
                let mid = (&*lo + &*hi) / q(2);
                let sq = &mid * &mid;
                if &sq < r {
                    *lo = mid;
                } else if &sq > r {
                    *hi = mid;
                } else {
                    *lo = mid.clone();
                    *hi = mid;
                }
                true
            }
        }
    }
}

/// A declared basis. Index 0 is the constant `1` and is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Basis {
    elements: Vec<BasisElement>,
    depth: u32,
}

impl Basis {
    pub fn new(elements: Vec<BasisElement>) -> Arc<Self> {
        Self::with_depth(elements, DEFAULT_INTERVAL_DEPTH)
    }

    pub fn with_depth(elements: Vec<BasisElement>, depth: u32) -> Arc<Self> {
        Arc::new(Basis { elements, depth })
    }

    /// The basis `{1}`: formal reals over it are exactly the rationals.
    pub fn rational() -> Arc<Self> {
        Self::new(Vec::new())
    }

    /// Number of coefficients of a formal real over this basis (`s + 1`).
    pub fn len(&self) -> usize {
        self.elements.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn name(&self, k: usize) -> &str {
        if k == 0 { "1" } else { &self.elements[k - 1].name }
    }

    /// Sign of `Σ c_k β_k`. Zero exactly when every coefficient vanishes.
    pub fn sign(&self, coeffs: &[Rational]) -> Result<Sign> {
        if coeffs.iter().all(Zero::is_zero) {
            return Ok(Sign::Zero);
        }
        if coeffs[1..].iter().all(Zero::is_zero) {
            return Ok(Sign::of(&coeffs[0]));
        }
        let mut bounds: Vec<(Rational, Rational)> =
            self.elements.iter().map(|e| (e.lo.clone(), e.hi.clone())).collect();
        for _ in 0..=self.depth {
            let (lo, hi) = Self::evaluate(coeffs, &bounds);
            if lo.is_positive() {
                return Ok(Sign::Positive);
            }
            if hi.is_negative() {
                return Ok(Sign::Negative);
            }
            let mut refined = false;
            for (k, (e, b)) in self.elements.iter().zip(bounds.iter_mut()).enumerate() {
                if !coeffs[k + 1].is_zero() {
                    refined |= e.refine(&mut b.0, &mut b.1);
                }
            }
            if !refined {
                break;
            }
        }
        Err(Error::IndeterminateSign { depth: self.depth })
    }

    fn evaluate(coeffs: &[Rational], bounds: &[(Rational, Rational)]) -> (Rational, Rational) {
        let mut lo = coeffs[0].clone();
        let mut hi = coeffs[0].clone();
        for (c, (l, h)) in coeffs[1..].iter().zip(bounds) {
            if c.is_positive() {
                lo += c * l;
                hi += c * h;
            } else {
                lo += c * h;
                hi += c * l;
            }
        }
        (lo, hi)
    }
}

/// `Σ_k coeffs[k] β_k` over a declared basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FormalReal {
    basis: Arc<Basis>,
    coeffs: QVec,
}

impl FormalReal {
    pub fn new(basis: Arc<Basis>, coeffs: QVec) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(Error::DimensionMismatch { expected: basis.len(), found: coeffs.len() });
        }
        Ok(FormalReal { basis, coeffs })
    }

    pub fn zero(basis: &Arc<Basis>) -> Self {
        FormalReal { basis: basis.clone(), coeffs: vec![Rational::zero(); basis.len()] }
    }

    pub fn rational(basis: &Arc<Basis>, x: Rational) -> Self {
        let mut f = Self::zero(basis);
        f.coeffs[0] = x;
        f
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `Some(x)` when only the `β_0` coordinate is nonzero.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    pub fn sign(&self) -> Result<Sign> {
        self.basis.sign(&self.coeffs)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        FormalReal { basis: self.basis.clone(), coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.basis, other.basis);
        FormalReal {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&q(-1)))
    }

    /// `Σ_i c_i x_i` for rational `c` and formal reals `x`.
    pub fn combination(basis: &Arc<Basis>, c: &[Rational], xs: &[FormalReal]) -> Self {
        let mut acc = vec![Rational::zero(); basis.len()];
        for (ci, x) in c.iter().zip(xs) {
            if ci.is_zero() {
                continue;
            }
            for (a, b) in acc.iter_mut().zip(&x.coeffs) {
                *a += ci * b;
            }
        }
        FormalReal { basis: basis.clone(), coeffs: acc }
    }
}

impl fmt::Debug for FormalReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FormalReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                if k == 0 {
                    format_rational(c)
                } else {
                    format!("{}*{}", format_rational(c), self.basis.name(k))
                }
            })
            .collect();
        if terms.is_empty() { write!(f, "0") } else { write!(f, "{}", terms.join(" + ")) }
    }
}

/// Sign of `x`; free-function form of [`FormalReal::sign`].
pub fn formal_real_sign(x: &FormalReal) -> Result<Sign> {
    x.sign()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::qr;

    fn sqrt2_fixed() -> Arc<Basis> {
        Basis::new(vec![BasisElement::fixed("b1", qr(1414, 1000), qr(1415, 1000)).unwrap()])
    }

    #[test]
    fn rational_cases() {
        let b = sqrt2_fixed();
        let x = FormalReal::new(b.clone(), vec![qr(1, 2), q(0)]).unwrap();
        assert_eq!(x.sign().unwrap(), Sign::Positive);
        assert_eq!(FormalReal::zero(&b).sign().unwrap(), Sign::Zero);
    }

    #[test]
    fn interval_evaluation() {
        // -3 + 2 β1 with β1 in [1.414, 1.415]: 2 * 1.415 < 3
        let x = FormalReal::new(sqrt2_fixed(), vec![q(-3), q(2)]).unwrap();
        assert_eq!(x.sign().unwrap(), Sign::Negative);
    }

    #[test]
    fn fixed_enclosure_can_be_indeterminate() {
        // 1414/1000 < β1 < 1415/1000 cannot decide β1 - 1.4145
        let x = FormalReal::new(sqrt2_fixed(), vec![qr(-14145, 10000), q(1)]).unwrap();
        assert!(matches!(x.sign(), Err(Error::IndeterminateSign { .. })));
    }

    #[test]
    fn sqrt_elements_refine() {
        let b = Basis::new(vec![BasisElement::sqrt("r2", q(2)).unwrap()]);
        // sqrt(2) - 1.41421356 > 0
        let x = FormalReal::new(b.clone(), vec![qr(-141421356, 100000000), q(1)]).unwrap();
        assert_eq!(x.sign().unwrap(), Sign::Positive);
        let y = FormalReal::new(b, vec![qr(141421357, 100000000), q(-1)]).unwrap();
        assert_eq!(y.sign().unwrap(), Sign::Positive);
    }

    #[test]
    fn shallow_depth_gives_up() {
        let b = Basis::with_depth(vec![BasisElement::sqrt("r2", q(2)).unwrap()], 3);
        let x = FormalReal::new(b, vec![qr(-141421356, 100000000), q(1)]).unwrap();
        assert!(matches!(x.sign(), Err(Error::IndeterminateSign { depth: 3 })));
    }
}
