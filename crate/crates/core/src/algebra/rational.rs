//! Rational scalars and integer/rational vector helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub type IVec = Vec<i64>;
pub type QVec = Vec<Rational>;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_q(v: &[i64]) -> QVec {
    v.iter().map(|&x| q(x)).collect()
}

pub fn dot_q(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_i(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn gcd_i(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn content_i(v: &[i64]) -> i64 {
    v.iter().fold(0, |g, &x| g.gcd(&x))
}

/// Divide an integer vector by the gcd of its entries. Zero stays zero.
pub fn primitive_i(v: &[i64]) -> IVec {
    let g = content_i(v);
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

/// Scale a rational vector by a positive rational so that it becomes a
/// primitive integer vector.
pub fn primitive_from_q(v: &[Rational]) -> Result<IVec> {
    if is_zero_vec(v) {
        return Ok(vec![0; v.len()]);
    }
    let den = v
        .iter()
        .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    ints.iter()
        .map(|x| {
            (x / &g)
                .to_i64()
                .ok_or_else(|| Error::invalid("integer overflow while primitivizing"))
        })
        .collect()
}

/// The positive rational factor `c` with `c * v = primitive_from_q(v)`.
pub fn primitive_scale(v: &[Rational]) -> Rational {
    let first = v.iter().find(|x| !x.is_zero());
    match first {
        None => Rational::one(),
        Some(_) => {
            let den = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect();
            let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            Rational::new(den, g.abs())
        }
    }
}

pub fn to_i64(x: &Rational) -> Result<i64> {
    if !x.is_integer() {
        return Err(Error::invalid(format!("{x} is not an integer")));
    }
    x.to_integer()
        .to_i64()
        .ok_or_else(|| Error::invalid("integer overflow"))
}

/// Parse `"a"`, `"a/b"` or a decimal such as `"1.414"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches(['-', '+']), fp);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let r = Rational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Canonical `"a/b"` string (`"a"` for integers).
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
