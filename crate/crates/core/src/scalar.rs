//! Numeric modes shared by every kernel.
//!
//! Two scalar types implement [`Scalar`]: [`Q`] (arbitrary precision
//! rationals, the reference mode) and `f64`. Zero decisions are exact for
//! rationals and use a relative tolerance for floats.

use std::fmt::Debug;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Exact rational scalar.
pub type Q = BigRational;

/// Default relative tolerance for float-mode zero tests.
pub const DEFAULT_TAU: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NumericMode {
    #[default]
    #[serde(rename = "rational")]
    Rational,
    #[serde(rename = "f64")]
    F64,
}

impl NumericMode {
    pub fn as_str(self) -> &'static str {
        match self {
            NumericMode::Rational => "rational",
            NumericMode::F64 => "f64",
        }
    }
}

impl FromStr for NumericMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rational" => Ok(NumericMode::Rational),
            "f64" => Ok(NumericMode::F64),
            other => Err(format!("unknown numeric mode `{other}`")),
        }
    }
}

/// Zero-test policy for float mode. Ignored by exact scalars.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub tau: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { tau: DEFAULT_TAU }
    }
}

impl Tolerance {
    pub fn new(tau: f64) -> Self {
        Tolerance { tau }
    }
}

pub trait Scalar:
    Clone + Debug + PartialEq + PartialOrd + Num + Signed + Neg<Output = Self> + Send + Sync + 'static
{
    const MODE: NumericMode;

    /// Exact for rationals (every finite double is a dyadic rational).
    fn from_f64(x: f64) -> Self;
    fn from_i64(x: i64) -> Self;
    fn ratio(n: i64, d: i64) -> Self;
    fn to_f64(&self) -> f64;

    /// `true` when `self` is zero exactly (rational) or `|self| <= tau * max(scale, 1)` (float).
    fn is_negligible(&self, tol: Tolerance, scale: f64) -> bool;

    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self, String>;

    fn is_finite_value(&self) -> bool {
        true
    }

    /// Exact rational image of this scalar.
    fn to_rational(&self) -> Q;
}

impl Scalar for Q {
    const MODE: NumericMode = NumericMode::Rational;

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite float")
    }

    fn from_i64(x: i64) -> Self {
        Q::from_integer(BigInt::from(x))
    }

    fn ratio(n: i64, d: i64) -> Self {
        Q::new(BigInt::from(n), BigInt::from(d))
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn is_negligible(&self, _tol: Tolerance, _scale: f64) -> bool {
        self.is_zero()
    }

    fn to_json(&self) -> Value {
        Value::String(format!("{}/{}", self.numer(), self.denom()))
    }

    fn from_json(v: &Value) -> Result<Self, String> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(<Q as Scalar>::from_i64(i))
                } else if let Some(f) = n.as_f64() {
                    Ok(<Q as Scalar>::from_f64(f))
                } else {
                    Err(format!("unrepresentable number {n}"))
                }
            }
            other => Err(format!("expected rational string, found {other}")),
        }
    }

    fn to_rational(&self) -> Q {
        self.clone()
    }
}

impl Scalar for f64 {
    const MODE: NumericMode = NumericMode::F64;

    fn from_f64(x: f64) -> Self {
        x
    }

    fn from_i64(x: i64) -> Self {
        x as f64
    }

    fn ratio(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self, tol: Tolerance, scale: f64) -> bool {
        self.abs() <= tol.tau * scale.abs().max(1.0)
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }

    fn from_json(v: &Value) -> Result<Self, String> {
        match v {
            Value::Number(n) => n.as_f64().ok_or_else(|| format!("bad number {n}")),
            Value::String(s) => parse_rational(s).map(|q| rational_to_f64(&q)),
            other => Err(format!("expected number, found {other}")),
        }
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn to_rational(&self) -> Q {
        <Q as Scalar>::from_f64(*self)
    }
}

/// Correctly scaled conversion that survives numerators and denominators
/// beyond the f64 range.
pub fn rational_to_f64(q: &Q) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = nb - db - 60;
    let scaled = if shift > 0 {
        q.numer() / (q.denom() << (shift as usize))
    } else {
        (q.numer() << ((-shift) as usize)) / q.denom()
    };
    scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
}

/// Parses `"p/q"`, integers, and plain decimals (`"0.1"` is exactly 1/10).
pub fn parse_rational(s: &str) -> Result<Q, String> {
    let s = s.trim();
    if s.contains('/') {
        return Q::from_str(s).map_err(|e| format!("bad rational `{s}`: {e}"));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (
            &s[..i],
            s[i + 1..]
                .parse::<i32>()
                .map_err(|e| format!("bad exponent in `{s}`: {e}"))?,
        ),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(i) => (&digits[..i], &digits[i + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("bad number `{s}`"));
    }
    let all: String = format!("{int_part}{frac_part}");
    if !all.chars().all(|c| c.is_ascii_digit()) {
        return Err(format!("bad number `{s}`"));
    }
    let numer = BigInt::from_str(&all).map_err(|e| format!("bad number `{s}`: {e}"))?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        Q::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Q::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        q = -q;
    }
    Ok(q)
}

/// Rounds `x` to the nearest multiple of `2^-bits`. Keeps denominators small
/// when irrational quantities (trig values, square roots) enter exact code.
pub fn dyadic(x: f64, bits: u32) -> Q {
    let scaled = (x * 2f64.powi(bits as i32)).round();
    let n = BigInt::from_f64(scaled).unwrap_or_default();
    Q::new(n, BigInt::one() << bits as usize)
}

/// Rational bounds `lo <= sqrt(q) <= hi`, with relative width about 1e-12.
pub fn sqrt_bounds(q: &Q) -> (Q, Q) {
    assert!(!q.is_negative(), "sqrt of negative rational");
    if q.is_zero() {
        return (Q::zero(), Q::zero());
    }
    let approx = rational_to_f64(q).sqrt();
    let mut rel = 1e-12;
    loop {
        let lo = <Q as Scalar>::from_f64(approx * (1.0 - rel));
        let hi = <Q as Scalar>::from_f64(approx * (1.0 + rel));
        if &(&lo * &lo) <= q && &(&hi * &hi) >= q {
            return (lo, hi);
        }
        rel *= 16.0;
        if rel > 0.5 {
            // Fall back to a coarse but always-valid bracket.
            let hi = if q > &Q::one() { q.clone() } else { Q::one() };
            return (Q::zero(), hi);
        }
    }
}

pub fn sqrt_upper(q: &Q) -> Q {
    sqrt_bounds(q).1
}

pub fn sqrt_lower(q: &Q) -> Q {
    sqrt_bounds(q).0
}

/// Exact zero test for a complex scalar.
pub fn complex_is_negligible<S: Scalar>(z: &Complex<S>, tol: Tolerance, scale: f64) -> bool {
    z.re.is_negligible(tol, scale) && z.im.is_negligible(tol, scale)
}

pub fn complex_to_f64<S: Scalar>(z: &Complex<S>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

pub fn complex_to_json<S: Scalar>(z: &Complex<S>) -> Value {
    Value::Array(vec![z.re.to_json(), z.im.to_json()])
}

pub fn complex_from_json<S: Scalar>(v: &Value) -> Result<Complex<S>, String> {
    match v.as_array() {
        Some(items) if items.len() == 2 => {
            Ok(Complex::new(S::from_json(&items[0])?, S::from_json(&items[1])?))
        }
        _ => Err(format!("expected [re, im] pair, found {v}")),
    }
}

pub fn abs2<S: Scalar>(z: &Complex<S>) -> S {
    z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone()
}
