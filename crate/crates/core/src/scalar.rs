//! Scalar abstraction for the numeric core.
//!
//! Everything numeric in this crate is generic over [`Scalar`], so the same
//! network and loss code runs in `f32` (default), `f64` (gradient checks)
//! and [`Dual`] numbers (forward-mode tangents, used for the second-order
//! gradient-penalty terms).

use std::fmt;
use std::iter::Sum;
use std::num::FpCategory;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, Sub, SubAssign};

use num_traits::{Float, FromPrimitive, Num, NumCast, One, ToPrimitive, Zero};

/// Floating-point scalar usable inside tensors and tapes.
pub trait Scalar:
    Float
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`, used for constants.
    fn from_c(v: f64) -> Self {
        Self::from_f64(v).expect("constant not representable")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Shorthand for lifting an `f64` constant into a generic scalar.
#[inline]
pub fn sc<S: Scalar>(v: f64) -> S {
    S::from_c(v)
}

/// A dual number `re + ε·du` with `ε² = 0`.
///
/// Arithmetic propagates first derivatives alongside values, which turns any
/// generic computation over [`Scalar`] into a forward-mode derivative
/// evaluation. Comparisons and classification look at the real part only, so
/// branches taken by generic code match the underlying real computation.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dual<T> {
    pub re: T,
    pub du: T,
}

impl<T: Scalar> Dual<T> {
    #[inline]
    pub fn new(re: T, du: T) -> Self {
        Dual { re, du }
    }

    /// Lift a plain value with zero tangent.
    #[inline]
    pub fn constant(re: T) -> Self {
        Dual { re, du: T::zero() }
    }
}

impl<T: fmt::Display> fmt::Display for Dual<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}ε", self.re, self.du)
    }
}

impl<T: Scalar> PartialOrd for Dual<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        // Real part decides; tangent breaks exact ties so the order stays
        // consistent with structural equality.
        match self.re.partial_cmp(&other.re) {
            Some(std::cmp::Ordering::Equal) => self.du.partial_cmp(&other.du),
            ord => ord,
        }
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Dual::new(self.re + o.re, self.du + o.du)
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Dual::new(self.re - o.re, self.du - o.du)
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Dual::new(self.re * o.re, self.du * o.re + self.re * o.du)
    }
}

impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    #[inline]
    fn div(self, o: Self) -> Self {
        let inv = T::one() / o.re;
        Dual::new(
            self.re * inv,
            (self.du * o.re - self.re * o.du) * inv * inv,
        )
    }
}

impl<T: Scalar> Rem for Dual<T> {
    type Output = Self;
    fn rem(self, o: Self) -> Self {
        // d(x mod y)/dx = 1 almost everywhere; y-dependence ignored.
        Dual::new(self.re % o.re, self.du)
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Dual::new(-self.re, -self.du)
    }
}

impl<T: Scalar> AddAssign for Dual<T> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}
impl<T: Scalar> SubAssign for Dual<T> {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}
impl<T: Scalar> MulAssign for Dual<T> {
    #[inline]
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}
impl<T: Scalar> DivAssign for Dual<T> {
    #[inline]
    fn div_assign(&mut self, o: Self) {
        *self = *self / o;
    }
}

impl<T: Scalar> Zero for Dual<T> {
    #[inline]
    fn zero() -> Self {
        Dual::new(T::zero(), T::zero())
    }
    #[inline]
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.du.is_zero()
    }
}

impl<T: Scalar> One for Dual<T> {
    #[inline]
    fn one() -> Self {
        Dual::new(T::one(), T::zero())
    }
}

impl<T: Scalar> Sum for Dual<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl<T: Scalar> Num for Dual<T> {
    type FromStrRadixErr = T::FromStrRadixErr;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        T::from_str_radix(s, radix).map(Dual::constant)
    }
}

impl<T: Scalar> ToPrimitive for Dual<T> {
    fn to_i64(&self) -> Option<i64> {
        self.re.to_i64()
    }
    fn to_u64(&self) -> Option<u64> {
        self.re.to_u64()
    }
    fn to_f64(&self) -> Option<f64> {
        self.re.to_f64()
    }
}

impl<T: Scalar> NumCast for Dual<T> {
    fn from<N: ToPrimitive>(n: N) -> Option<Self> {
        T::from(n).map(Dual::constant)
    }
}

impl<T: Scalar> FromPrimitive for Dual<T> {
    fn from_i64(n: i64) -> Option<Self> {
        T::from_i64(n).map(Dual::constant)
    }
    fn from_u64(n: u64) -> Option<Self> {
        T::from_u64(n).map(Dual::constant)
    }
    fn from_f64(n: f64) -> Option<Self> {
        T::from_f64(n).map(Dual::constant)
    }
}

/// Chain rule helper: `f(re)` with derivative `d`.
#[inline]
fn lift<T: Scalar>(x: Dual<T>, f: T, d: T) -> Dual<T> {
    Dual::new(f, x.du * d)
}

impl<T: Scalar> Float for Dual<T> {
    fn nan() -> Self {
        Dual::constant(T::nan())
    }
    fn infinity() -> Self {
        Dual::constant(T::infinity())
    }
    fn neg_infinity() -> Self {
        Dual::constant(T::neg_infinity())
    }
    fn neg_zero() -> Self {
        Dual::constant(T::neg_zero())
    }
    fn min_value() -> Self {
        Dual::constant(T::min_value())
    }
    fn min_positive_value() -> Self {
        Dual::constant(T::min_positive_value())
    }
    fn max_value() -> Self {
        Dual::constant(T::max_value())
    }
    fn is_nan(self) -> bool {
        self.re.is_nan()
    }
    fn is_infinite(self) -> bool {
        self.re.is_infinite()
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.du.is_finite()
    }
    fn is_normal(self) -> bool {
        self.re.is_normal()
    }
    fn classify(self) -> FpCategory {
        self.re.classify()
    }
    fn floor(self) -> Self {
        Dual::constant(self.re.floor())
    }
    fn ceil(self) -> Self {
        Dual::constant(self.re.ceil())
    }
    fn round(self) -> Self {
        Dual::constant(self.re.round())
    }
    fn trunc(self) -> Self {
        Dual::constant(self.re.trunc())
    }
    fn fract(self) -> Self {
        Dual::new(self.re.fract(), self.du)
    }
    fn abs(self) -> Self {
        if self.re.is_sign_negative() {
            -self
        } else {
            self
        }
    }
    fn signum(self) -> Self {
        Dual::constant(self.re.signum())
    }
    fn is_sign_positive(self) -> bool {
        self.re.is_sign_positive()
    }
    fn is_sign_negative(self) -> bool {
        self.re.is_sign_negative()
    }
    fn mul_add(self, a: Self, b: Self) -> Self {
        self * a + b
    }
    fn recip(self) -> Self {
        Self::one() / self
    }
    fn powi(self, n: i32) -> Self {
        let d = T::from_i32(n).unwrap() * self.re.powi(n - 1);
        lift(self, self.re.powi(n), d)
    }
    fn powf(self, p: Self) -> Self {
        let f = self.re.powf(p.re);
        let dx = p.re * self.re.powf(p.re - T::one());
        let dp = if self.re > T::zero() {
            f * self.re.ln()
        } else {
            T::zero()
        };
        Dual::new(f, self.du * dx + p.du * dp)
    }
    fn sqrt(self) -> Self {
        let s = self.re.sqrt();
        lift(self, s, T::from_c(0.5) / s)
    }
    fn exp(self) -> Self {
        let e = self.re.exp();
        lift(self, e, e)
    }
    fn exp2(self) -> Self {
        let e = self.re.exp2();
        lift(self, e, e * T::from_c(std::f64::consts::LN_2))
    }
    fn ln(self) -> Self {
        lift(self, self.re.ln(), self.re.recip())
    }
    fn log(self, base: Self) -> Self {
        self.ln() / base.ln()
    }
    fn log2(self) -> Self {
        lift(
            self,
            self.re.log2(),
            (self.re * T::from_c(std::f64::consts::LN_2)).recip(),
        )
    }
    fn log10(self) -> Self {
        lift(
            self,
            self.re.log10(),
            (self.re * T::from_c(std::f64::consts::LN_10)).recip(),
        )
    }
    fn max(self, other: Self) -> Self {
        if self.re >= other.re {
            self
        } else {
            other
        }
    }
    fn min(self, other: Self) -> Self {
        if self.re <= other.re {
            self
        } else {
            other
        }
    }
    fn abs_sub(self, other: Self) -> Self {
        if self.re > other.re {
            self - other
        } else {
            Self::zero()
        }
    }
    fn cbrt(self) -> Self {
        let c = self.re.cbrt();
        lift(self, c, (T::from_c(3.0) * c * c).recip())
    }
    fn hypot(self, other: Self) -> Self {
        (self * self + other * other).sqrt()
    }
    fn sin(self) -> Self {
        lift(self, self.re.sin(), self.re.cos())
    }
    fn cos(self) -> Self {
        lift(self, self.re.cos(), -self.re.sin())
    }
    fn tan(self) -> Self {
        let t = self.re.tan();
        lift(self, t, T::one() + t * t)
    }
    fn asin(self) -> Self {
        lift(
            self,
            self.re.asin(),
            (T::one() - self.re * self.re).sqrt().recip(),
        )
    }
    fn acos(self) -> Self {
        lift(
            self,
            self.re.acos(),
            -(T::one() - self.re * self.re).sqrt().recip(),
        )
    }
    fn atan(self) -> Self {
        lift(self, self.re.atan(), (T::one() + self.re * self.re).recip())
    }
    fn atan2(self, other: Self) -> Self {
        let denom = self.re * self.re + other.re * other.re;
        Dual::new(
            self.re.atan2(other.re),
            (self.du * other.re - other.du * self.re) / denom,
        )
    }
    fn sin_cos(self) -> (Self, Self) {
        (self.sin(), self.cos())
    }
    fn exp_m1(self) -> Self {
        lift(self, self.re.exp_m1(), self.re.exp())
    }
    fn ln_1p(self) -> Self {
        lift(self, self.re.ln_1p(), (T::one() + self.re).recip())
    }
    fn sinh(self) -> Self {
        lift(self, self.re.sinh(), self.re.cosh())
    }
    fn cosh(self) -> Self {
        lift(self, self.re.cosh(), self.re.sinh())
    }
    fn tanh(self) -> Self {
        let t = self.re.tanh();
        lift(self, t, T::one() - t * t)
    }
    fn asinh(self) -> Self {
        lift(
            self,
            self.re.asinh(),
            (self.re * self.re + T::one()).sqrt().recip(),
        )
    }
    fn acosh(self) -> Self {
        lift(
            self,
            self.re.acosh(),
            (self.re * self.re - T::one()).sqrt().recip(),
        )
    }
    fn atanh(self) -> Self {
        lift(
            self,
            self.re.atanh(),
            (T::one() - self.re * self.re).recip(),
        )
    }
    fn integer_decode(self) -> (u64, i16, i8) {
        self.re.integer_decode()
    }
}

impl<T: Scalar> Scalar for Dual<T> {}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(re: f64, du: f64) -> Dual<f64> {
        Dual::new(re, du)
    }

    /// Forward-mode derivative of f at x against central differences.
    fn check_unary(f: impl Fn(Dual<f64>) -> Dual<f64>, g: impl Fn(f64) -> f64, x: f64) {
        let ad = f(d(x, 1.0)).du;
        let h = 1e-6;
        let fd = (g(x + h) - g(x - h)) / (2.0 * h);
        assert!(
            (ad - fd).abs() <= 1e-5 * (1.0 + fd.abs()),
            "ad={ad} fd={fd} at x={x}"
        );
    }

    #[test]
    fn dual_arithmetic_chain_rules() {
        check_unary(|x| x * x * x, |x| x * x * x, 0.7);
        check_unary(|x| x.exp(), f64::exp, 0.3);
        check_unary(|x| x.ln(), f64::ln, 1.9);
        check_unary(|x| x.sqrt(), f64::sqrt, 2.5);
        check_unary(|x| x.tanh(), f64::tanh, -0.4);
        check_unary(|x| (x * x + d(1.0, 0.0)).recip(), |x| 1.0 / (x * x + 1.0), 0.9);
        check_unary(|x| x.abs(), f64::abs, -1.3);
        check_unary(|x| x.powi(4), |x| x.powi(4), -0.8);
    }

    #[test]
    fn dual_quotient_rule() {
        // f = x / (2 + x), f' = 2/(2+x)^2
        let x = d(1.5, 1.0);
        let y = x / (Dual::constant(2.0) + x);
        assert!((y.du - 2.0 / (3.5f64 * 3.5)).abs() < 1e-12);
    }

    #[test]
    fn dual_max_picks_subgradient_of_winner() {
        let a = d(2.0, 5.0);
        let b = d(1.0, 7.0);
        assert_eq!(a.max(b).du, 5.0);
        assert_eq!(a.min(b).du, 7.0);
    }

    #[test]
    fn dual_comparisons_use_real_part() {
        assert!(d(1.0, 99.0) < d(2.0, -99.0));
        assert!(d(3.0, 0.0) > d(2.0, 50.0));
    }

    #[test]
    fn second_order_via_nested_forward_matches_analytic() {
        // f(x) = exp(x)·x, f'' = exp(x)(x + 2); nest Dual<Dual<f64>>.
        type D2 = Dual<Dual<f64>>;
        let x = 0.6f64;
        let xx: D2 = Dual::new(Dual::new(x, 1.0), Dual::new(1.0, 0.0));
        let y = xx.exp() * xx;
        let f2 = y.du.du;
        let expect = x.exp() * (x + 2.0);
        assert!((f2 - expect).abs() < 1e-12, "{f2} vs {expect}");
    }
}
