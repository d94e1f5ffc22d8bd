//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! The solvers only need field arithmetic, ordering and a floor. Floating
//! types carry the usual tolerances; exact rationals collapse every tolerance
//! to zero so the same code paths run in exact arithmetic.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Converts an `f64` constant into `Self`. Rationals take the exact binary value.
    fn cast_f64(v: f64) -> Self;

    /// A tolerance of magnitude `v` for this type. Exact types return zero.
    fn tolerance(v: f64) -> Self;

    fn floor(&self) -> Self;

    /// Parses a numeric literal: decimal, scientific, and (for rationals) `a/b`.
    fn parse_literal(s: &str) -> Option<Self>;

    fn is_exact() -> bool {
        false
    }

    fn approx_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer representable in scalar type")
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

macro_rules! impl_float_scalar {
    ($($t:ty),*) => {
        $(
            impl Scalar for $t {
                #[inline]
                fn cast_f64(v: f64) -> Self {
                    v as $t
                }
                #[inline]
                fn tolerance(v: f64) -> Self {
                    v as $t
                }
                #[inline]
                fn floor(&self) -> Self {
                    <$t>::floor(*self)
                }
                fn parse_literal(s: &str) -> Option<Self> {
                    s.parse::<$t>().ok()
                }
            }
        )*
    };
}

impl_float_scalar!(f32, f64);

impl Scalar for BigRational {
    fn cast_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite f64 constant")
    }

    fn tolerance(_v: f64) -> Self {
        BigRational::zero()
    }

    fn floor(&self) -> Self {
        BigRational::floor(self)
    }

    fn parse_literal(s: &str) -> Option<Self> {
        if let Some((num, den)) = s.split_once('/') {
            let num: BigInt = num.trim().parse().ok()?;
            let den: BigInt = den.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            return Some(BigRational::new(num, den));
        }
        parse_decimal(s)
    }

    fn is_exact() -> bool {
        true
    }
}

/// Exact decimal parsing: `[-+]digits[.digits][e[-+]digits]`.
fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all_digits.parse::<BigInt>().ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Some(if negative { -value } else { value })
}

/// Sum of element-wise products.
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn ints_to_scalars<T: Scalar>(v: &[i64]) -> Vec<T> {
    v.iter().map(|&k| T::from_int(k)).collect()
}
