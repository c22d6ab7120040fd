//! Gaussian rationals `Q(i)`, the exact scalar field of every computation.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An element `re + im*I` with exact rational parts.
///
/// `BigRational` keeps both parts in lowest terms with a positive denominator,
/// so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Coeff {
    pub re: BigRational,
    pub im: BigRational,
}

impl Coeff {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Coeff { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Coeff::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Coeff::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn from_rational(r: BigRational) -> Self {
        Coeff::new(r, BigRational::zero())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Coeff::new(BigRational::zero(), BigRational::one())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Coeff::new(self.re.clone(), -self.im.clone())
    }

    /// `re^2 + im^2`.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Coeff::new(&self.re / &n, -&self.im / &n))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Coeff::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// "Negative" for printing: the leading nonzero part is negative.
    pub(crate) fn prints_negative(&self) -> bool {
        if self.re.is_zero() {
            self.im.is_negative()
        } else {
            self.im.is_zero() && self.re.is_negative()
        }
    }
}

impl Zero for Coeff {
    fn zero() -> Self {
        Coeff::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Coeff {
    fn one() -> Self {
        Coeff::new(BigRational::one(), BigRational::zero())
    }
}

impl From<i64> for Coeff {
    fn from(n: i64) -> Self {
        Coeff::from_int(n)
    }
}

impl From<BigRational> for Coeff {
    fn from(r: BigRational) -> Self {
        Coeff::from_rational(r)
    }
}

impl<'a> Add<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        Coeff::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        Coeff::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Coeff::from_rational(&self.re * &rhs.re);
        }
        Coeff::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl<'a> Div<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Coeff) -> Coeff {
        let inv = rhs.inv().expect("division by zero in Q(i)");
        self * &inv
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff::new(-self.re, -self.im)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Coeff> for Coeff {
            type Output = Coeff;
            fn $m(self, rhs: Coeff) -> Coeff {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Coeff> for Coeff {
    fn add_assign(&mut self, rhs: &Coeff) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Coeff> for Coeff {
    fn sub_assign(&mut self, rhs: &Coeff) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&Coeff> for Coeff {
    fn mul_assign(&mut self, rhs: &Coeff) {
        *self = &*self * rhs;
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Renders in the polynomial grammar: `3`, `-1/2`, `I`, `-2*I`, `(1 + 2*I)`.
impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => fmt_rational(&self.re, f),
            (true, false) => fmt_imag(&self.im, f),
            (false, false) => {
                write!(f, "(")?;
                fmt_rational(&self.re, f)?;
                if self.im.is_negative() {
                    write!(f, " - ")?;
                    fmt_imag(&-self.im.clone(), f)?;
                } else {
                    write!(f, " + ")?;
                    fmt_imag(&self.im, f)?;
                }
                write!(f, ")")
            }
        }
    }
}

fn fmt_imag(im: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if im.is_one() {
        write!(f, "I")
    } else if (-im.clone()).is_one() {
        write!(f, "-I")
    } else {
        fmt_rational(im, f)?;
        write!(f, "*I")
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_gaussian() {
        let z = Coeff::new(BigRational::from_integer(1.into()), BigRational::from_integer(2.into()));
        let w = z.inv().unwrap();
        assert_eq!(&z * &w, Coeff::one());
        assert_eq!(w.to_string(), "(1/5 - 2/5*I)");
        assert!(Coeff::zero().inv().is_none());
    }

    #[test]
    fn i_squared_is_minus_one() {
        assert_eq!(Coeff::i().pow(2), Coeff::from_int(-1));
        assert_eq!(Coeff::i().pow(4), Coeff::one());
    }

    #[test]
    fn lowest_terms() {
        assert_eq!(Coeff::from_ratio(2, -4), Coeff::from_ratio(-1, 2));
        assert_eq!(Coeff::from_ratio(2, -4).to_string(), "-1/2");
    }
}
