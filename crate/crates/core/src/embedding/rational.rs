//! Exact rationals extended by `+inf`.

use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtRational {
    Finite(BigRational),
    Infinity,
}

impl ExtRational {
    pub fn int(n: i64) -> Self {
        ExtRational::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        ExtRational::Finite(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRational::Infinity)
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            ExtRational::Finite(q) => Some(q),
            ExtRational::Infinity => None,
        }
    }

    /// `1/x` with `1/inf = 0`; `None` for zero.
    pub fn recip(&self) -> Option<BigRational> {
        match self {
            ExtRational::Infinity => Some(BigRational::zero()),
            ExtRational::Finite(q) if q.is_zero() => None,
            ExtRational::Finite(q) => Some(q.recip()),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            ExtRational::Infinity => true,
            ExtRational::Finite(q) => q.is_positive(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtRational::Infinity => f64::INFINITY,
            ExtRational::Finite(q) => q.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Parses `"3/2"`, `"-4"`, `"0.125"`, `"inf"` or `"∞"`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "inf" | "+inf" | "infinity" | "Infinity" | "∞" => return Ok(ExtRational::Infinity),
            _ => {}
        }
        parse_rational(t).map(ExtRational::Finite)
    }
}

/// Parses a finite exact rational.
pub fn parse_rational(t: &str) -> Result<BigRational> {
    let bad = || invalid("rational", alloc::format!("cannot parse {t:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(invalid("rational", "zero denominator"));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let mut all = String::from(int_part);
    all.push_str(frac_part);
    let num: BigInt = all.parse().map_err(|_| bad())?;
    let ten = BigInt::from(10);
    let scale = exp - frac_part.len() as i32;
    let mut q = BigRational::from_integer(num);
    if scale >= 0 {
        q *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        q /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -q } else { q })
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRational::Infinity, ExtRational::Infinity) => Ordering::Equal,
            (ExtRational::Infinity, _) => Ordering::Greater,
            (_, ExtRational::Infinity) => Ordering::Less,
            (ExtRational::Finite(a), ExtRational::Finite(b)) => a.cmp(b),
        }
    }
}

impl From<BigRational> for ExtRational {
    fn from(q: BigRational) -> Self {
        ExtRational::Finite(q)
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Infinity => f.write_str("inf"),
            ExtRational::Finite(q) => f.write_str(&format_rational(q)),
        }
    }
}

/// `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        alloc::format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn half() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}

pub(crate) fn one() -> BigRational {
    BigRational::one()
}
