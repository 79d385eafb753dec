//! Exact arithmetic in Q(√3) and Q(i, √3).
//!
//! `Surd` is a real quadratic surd `a + b√3`; `Cyclo` is `x + i·y` with
//! `x, y` surds, i.e. an element of the 12th cyclotomic field. All
//! coefficients are arbitrary-precision rationals so nothing can overflow.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // huge numerators/denominators: fall back to a ratio of floats
        q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
    })
}

/// `rat + irr·√3`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Surd {
    pub rat: Rational,
    pub irr: Rational,
}

impl Surd {
    pub fn new(rat: Rational, irr: Rational) -> Self {
        Surd { rat, irr }
    }

    pub fn from_int(n: i64) -> Self {
        Surd::new(int(n), Rational::zero())
    }

    pub fn from_rational(q: Rational) -> Self {
        Surd::new(q, Rational::zero())
    }

    pub fn sqrt3() -> Self {
        Surd::new(Rational::zero(), Rational::one())
    }

    /// `(a + b√3)/d` with integer parts, the shape every matrix entry here takes.
    pub fn frac(a: i64, b: i64, d: i64) -> Self {
        Surd::new(rat(a, d), rat(b, d))
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    /// Galois conjugate `a − b√3`.
    pub fn conj(&self) -> Self {
        Surd::new(self.rat.clone(), -self.irr.clone())
    }

    /// Field norm `a² − 3b²`.
    pub fn norm(&self) -> Rational {
        &self.rat * &self.rat - int(3) * &self.irr * &self.irr
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(Surd::new(c.rat / &n, c.irr / &n))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Surd::new(&self.rat * q, &self.irr * q)
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.rat) + rat_to_f64(&self.irr) * 3f64.sqrt()
    }

    /// Sign of the real number; exact, via comparison of squares.
    pub fn signum(&self) -> i32 {
        let a = &self.rat;
        let b = &self.irr;
        let sa = if a.is_zero() {
            0
        } else if a.is_positive() {
            1
        } else {
            -1
        };
        let sb = if b.is_zero() {
            0
        } else if b.is_positive() {
            1
        } else {
            -1
        };
        if sa == sb || sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        // opposite signs: compare a² with 3b²
        let lhs = a * a;
        let rhs = int(3) * b * b;
        if lhs > rhs {
            sa
        } else if lhs < rhs {
            sb
        } else {
            0
        }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rat.is_zero(), self.irr.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.rat),
            (true, false) => write!(f, "{}·√3", self.irr),
            (false, false) => write!(f, "({} + {}·√3)", self.rat, self.irr),
        }
    }
}

impl Zero for Surd {
    fn zero() -> Self {
        Surd::default()
    }
    fn is_zero(&self) -> bool {
        Surd::is_zero(self)
    }
}

impl One for Surd {
    fn one() -> Self {
        Surd::from_int(1)
    }
}

impl Add<&Surd> for &Surd {
    type Output = Surd;
    fn add(self, o: &Surd) -> Surd {
        Surd::new(&self.rat + &o.rat, &self.irr + &o.irr)
    }
}

impl Sub<&Surd> for &Surd {
    type Output = Surd;
    fn sub(self, o: &Surd) -> Surd {
        Surd::new(&self.rat - &o.rat, &self.irr - &o.irr)
    }
}

impl Mul<&Surd> for &Surd {
    type Output = Surd;
    fn mul(self, o: &Surd) -> Surd {
        // √3·√3 = 3 folded in immediately
        let rat = &self.rat * &o.rat + int(3) * &self.irr * &o.irr;
        let irr = &self.rat * &o.irr + &self.irr * &o.rat;
        Surd::new(rat, irr)
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::new(-self.rat.clone(), -self.irr.clone())
    }
}

/// `re + i·im` with `re, im ∈ Q(√3)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Cyclo {
    pub re: Surd,
    pub im: Surd,
}

impl Cyclo {
    pub fn new(re: Surd, im: Surd) -> Self {
        Cyclo { re, im }
    }

    pub fn real(re: Surd) -> Self {
        Cyclo::new(re, Surd::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Cyclo::real(Surd::from_int(n))
    }

    pub fn i() -> Self {
        Cyclo::new(Surd::zero(), Surd::one())
    }

    pub fn sqrt3() -> Self {
        Cyclo::real(Surd::sqrt3())
    }

    /// e^{iπ/6} = √3/2 + i/2, a primitive 12th root of unity.
    pub fn zeta12() -> Self {
        Cyclo::new(Surd::frac(0, 1, 2), Surd::frac(1, 0, 2))
    }

    /// e^{iπ/3}.
    pub fn e_pi_3() -> Self {
        Cyclo::new(Surd::frac(1, 0, 2), Surd::frac(0, 1, 2))
    }

    /// e^{2πi/3}, the primitive cube root of unity ω.
    pub fn omega() -> Self {
        Cyclo::new(Surd::frac(-1, 0, 2), Surd::frac(0, 1, 2))
    }

    /// `zeta12^k` for any integer k.
    pub fn root_of_unity(k: i64) -> Self {
        let k = k.rem_euclid(12);
        let z = Cyclo::zeta12();
        let mut acc = Cyclo::one();
        for _ in 0..k {
            acc = &acc * &z;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        Cyclo::new(self.re.clone(), -&self.im)
    }

    pub fn inv(&self) -> Option<Self> {
        // (re + i im)(re − i im) = re² + im², a nonzero real surd unless both vanish
        let n = &(&self.re * &self.re) + &(&self.im * &self.im);
        let ninv = n.inv()?;
        let c = self.conj();
        Some(Cyclo::new(&c.re * &ninv, &c.im * &ninv))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Cyclo::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Cyclo::new(self.re.scale(q), self.im.scale(q))
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "i·{}", self.im)
        } else {
            write!(f, "{} + i·{}", self.re, self.im)
        }
    }
}

impl Zero for Cyclo {
    fn zero() -> Self {
        Cyclo::default()
    }
    fn is_zero(&self) -> bool {
        Cyclo::is_zero(self)
    }
}

impl One for Cyclo {
    fn one() -> Self {
        Cyclo::from_int(1)
    }
}

impl Add<&Cyclo> for &Cyclo {
    type Output = Cyclo;
    fn add(self, o: &Cyclo) -> Cyclo {
        Cyclo::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub<&Cyclo> for &Cyclo {
    type Output = Cyclo;
    fn sub(self, o: &Cyclo) -> Cyclo {
        Cyclo::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul<&Cyclo> for &Cyclo {
    type Output = Cyclo;
    fn mul(self, o: &Cyclo) -> Cyclo {
        let re = &(&self.re * &o.re) - &(&self.im * &o.im);
        let im = &(&self.re * &o.im) + &(&self.im * &o.re);
        Cyclo::new(re, im)
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo::new(-&self.re, -&self.im)
    }
}

macro_rules! forward_owned {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t {
                (&self).$m(&o)
            }
        }
    };
}

forward_owned!(Surd, Add, add);
forward_owned!(Surd, Sub, sub);
forward_owned!(Surd, Mul, mul);
forward_owned!(Cyclo, Add, add);
forward_owned!(Cyclo, Sub, sub);
forward_owned!(Cyclo, Mul, mul);

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        -&self
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -&self
    }
}

impl AddAssign<&Surd> for Surd {
    fn add_assign(&mut self, o: &Surd) {
        self.rat += &o.rat;
        self.irr += &o.irr;
    }
}

impl AddAssign<&Cyclo> for Cyclo {
    fn add_assign(&mut self, o: &Cyclo) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt3_squares_to_three() {
        let s = Surd::sqrt3();
        assert_eq!(&s * &s, Surd::from_int(3));
    }

    #[test]
    fn roots_of_unity_have_expected_orders() {
        let z = Cyclo::zeta12();
        assert_eq!(z.pow(12), Cyclo::one());
        assert_ne!(z.pow(6), Cyclo::one());
        assert_eq!(Cyclo::omega().pow(3), Cyclo::one());
        assert_eq!(Cyclo::e_pi_3(), Cyclo::root_of_unity(2));
        assert_eq!(Cyclo::omega(), Cyclo::root_of_unity(4));
        assert_eq!(Cyclo::i(), Cyclo::root_of_unity(3));
    }

    #[test]
    fn inverse_round_trips() {
        let x = Cyclo::new(Surd::frac(3, -2, 5), Surd::frac(1, 7, 3));
        let y = x.inv().unwrap();
        assert_eq!(&x * &y, Cyclo::one());
        assert!(Cyclo::zero().inv().is_none());
    }

    #[test]
    fn surd_sign_is_exact() {
        assert_eq!(Surd::frac(2, -1, 1).signum(), 1); // 2 − √3 > 0
        assert_eq!(Surd::frac(1, -1, 1).signum(), -1); // 1 − √3 < 0
        assert_eq!(Surd::zero().signum(), 0);
    }

    #[test]
    fn numeric_embedding_matches_floats() {
        let w = Cyclo::omega().to_complex();
        let expected = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        assert!((w - expected).norm() < 1e-15);
    }
}
