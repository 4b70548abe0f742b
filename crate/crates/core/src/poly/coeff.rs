use std::fmt;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Complex number with arbitrary-precision rational parts.
pub type ComplexRational = Complex<BigRational>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoeffKind {
    Exact,
    Float,
}

/// A polynomial coefficient. Exact values are never demoted implicitly.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficient {
    Exact(ComplexRational),
    Float(Complex64),
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn cr(n: i64) -> ComplexRational {
    Complex::new(BigRational::from_integer(n.into()), BigRational::zero())
}

pub fn cr_rat(n: i64, d: i64) -> ComplexRational {
    Complex::new(rat(n, d), BigRational::zero())
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator/denominator too large for a direct conversion
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn cr_to_c64(c: &ComplexRational) -> Complex64 {
    Complex64::new(rational_to_f64(&c.re), rational_to_f64(&c.im))
}

pub fn cr_is_zero(c: &ComplexRational) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

/// Exact reciprocal; `None` for zero.
pub fn cr_inv(c: &ComplexRational) -> Option<ComplexRational> {
    if cr_is_zero(c) {
        return None;
    }
    let norm = &c.re * &c.re + &c.im * &c.im;
    Some(Complex::new(&c.re / &norm, -&c.im / &norm))
}

/// Exact rational parse of a decimal literal like `-12.375` or `3e-2`.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(pos) => (&digits[..pos], &digits[pos + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all.parse::<BigInt>().ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Some(if neg { -value } else { value })
}

/// Parses `p/q`, an integer, or a decimal.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    parse_decimal(text)
}

pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Coefficient {
    pub fn kind(&self) -> CoeffKind {
        match self {
            Coefficient::Exact(_) => CoeffKind::Exact,
            Coefficient::Float(_) => CoeffKind::Float,
        }
    }

    pub fn zero(kind: CoeffKind) -> Self {
        match kind {
            CoeffKind::Exact => Coefficient::Exact(cr(0)),
            CoeffKind::Float => Coefficient::Float(Complex64::new(0.0, 0.0)),
        }
    }

    pub fn one(kind: CoeffKind) -> Self {
        match kind {
            CoeffKind::Exact => Coefficient::Exact(cr(1)),
            CoeffKind::Float => Coefficient::Float(Complex64::new(1.0, 0.0)),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Coefficient::Exact(cr(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Coefficient::Exact(cr_rat(n, d))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Exact(c) => cr_is_zero(c),
            Coefficient::Float(c) => c.re == 0.0 && c.im == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coefficient::Exact(c) => c.re.is_one() && c.im.is_zero(),
            Coefficient::Float(c) => c.re == 1.0 && c.im == 0.0,
        }
    }

    /// The explicit (and only) exact-to-float conversion.
    pub fn to_float(&self) -> Complex64 {
        match self {
            Coefficient::Exact(c) => cr_to_c64(c),
            Coefficient::Float(c) => *c,
        }
    }

    pub fn as_exact(&self) -> Option<&ComplexRational> {
        match self {
            Coefficient::Exact(c) => Some(c),
            Coefficient::Float(_) => None,
        }
    }

    pub fn abs(&self) -> f64 {
        self.to_float().norm()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Coefficient::Exact(a), Coefficient::Exact(b)) => Ok(Coefficient::Exact(a + b)),
            (Coefficient::Float(a), Coefficient::Float(b)) => Ok(Coefficient::Float(a + b)),
            _ => Err(Error::MixedMode),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Coefficient::Exact(a), Coefficient::Exact(b)) => Ok(Coefficient::Exact(a * b)),
            (Coefficient::Float(a), Coefficient::Float(b)) => Ok(Coefficient::Float(a * b)),
            _ => Err(Error::MixedMode),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Coefficient::Exact(a) => Coefficient::Exact(-a.clone()),
            Coefficient::Float(a) => Coefficient::Float(-a),
        }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        match self {
            Coefficient::Exact(a) => Coefficient::Exact(a * cr(k)),
            Coefficient::Float(a) => Coefficient::Float(a * k as f64),
        }
    }

    /// Exact inverse; float inverse for float coefficients.
    pub fn inv(&self) -> Option<Self> {
        match self {
            Coefficient::Exact(a) => cr_inv(a).map(Coefficient::Exact),
            Coefficient::Float(_) if self.is_zero() => None,
            Coefficient::Float(a) => Some(Coefficient::Float(a.inv())),
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Exact(c) => {
                if c.im.is_zero() {
                    write!(f, "{}", format_rational(&c.re))
                } else {
                    write!(f, "({}, {})", format_rational(&c.re), format_rational(&c.im))
                }
            }
            Coefficient::Float(c) => {
                if c.im == 0.0 {
                    write!(f, "{:?}", c.re)
                } else {
                    write!(f, "({:?}, {:?})", c.re, c.im)
                }
            }
        }
    }
}

/// True when the coefficient is a real number with negative sign (used for `-` rendering).
pub(crate) fn is_negative_real(c: &Coefficient) -> bool {
    match c {
        Coefficient::Exact(c) => c.im.is_zero() && c.re.is_negative(),
        Coefficient::Float(c) => c.im == 0.0 && c.re < 0.0,
    }
}
