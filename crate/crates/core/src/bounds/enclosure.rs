use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Fractional bits kept when enclosing a square root.
const SQRT_BITS: u32 = 64;

/// A closed interval `[lo, hi]` with exact rational endpoints known to
/// contain a real quantity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    lo: Rational,
    hi: Rational,
}

impl Enclosure {
    pub fn exact(x: Rational) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "empty enclosure");
        Self { lo, hi }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn midpoint(&self) -> f64 {
        rational::to_f64(&((&self.lo + &self.hi) / rational::int(2)))
    }

    /// `sqrt(x)` for `x >= 0`, exact when `x` is the square of a rational and
    /// otherwise of width at most `2^-63`.
    pub fn sqrt(x: &Rational) -> Result<Self> {
        if x.is_negative() {
            return Err(Error::BadBoundParams(format!("square root of {}", rational::display(x))));
        }
        let (n, d) = (x.numer(), x.denom());
        let (rn, rd) = (n.sqrt(), d.sqrt());
        if &(&rn * &rn) == n && &(&rd * &rd) == d {
            return Ok(Self::exact(Rational::new(rn, rd)));
        }
        let scale = BigInt::from(1) << (2 * SQRT_BITS);
        let scaled = x * Rational::from_integer(scale);
        let below = scaled.floor().to_integer();
        let above = scaled.ceil().to_integer();
        let unit = BigInt::from(1) << SQRT_BITS;
        let lo = Rational::new(below.sqrt(), unit.clone());
        let hi = Rational::new(above.sqrt() + 1, unit);
        debug_assert!(&lo * &lo <= *x && *x <= &hi * &hi);
        Ok(Self { lo, hi })
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    /// Product of two enclosures of nonnegative quantities.
    pub fn mul_nonneg(&self, other: &Self) -> Self {
        assert!(!self.lo.is_negative() && !other.lo.is_negative());
        Self {
            lo: &self.lo * &other.lo,
            hi: &self.hi * &other.hi,
        }
    }

    pub fn scale_nonneg(&self, k: &Rational) -> Self {
        assert!(!k.is_negative());
        Self {
            lo: &self.lo * k,
            hi: &self.hi * k,
        }
    }

    /// `self^t` for a nonnegative enclosure.
    pub fn powi(&self, t: usize) -> Self {
        assert!(!self.lo.is_negative());
        Self {
            lo: rational::pow(&self.lo, t),
            hi: rational::pow(&self.hi, t),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", rational::display(&self.lo))
        } else {
            write!(f, "{:.6}", self.midpoint())
        }
    }
}
