//! Scalar abstraction shared by the evaluation paths.
//!
//! Master functions, Bethe equations, and weight-function coefficients are all
//! rational expressions in the variables `t`, `z` with rational structure
//! constants. They are evaluated in three arithmetics: double-precision
//! complex numbers for numerical solving, exact rationals for closed-form
//! seeds, and a quadratic extension of the rationals for critical points whose
//! coordinates involve a single square root (conjugate seed pairs, cube roots
//! of unity).

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Field operations needed to evaluate rational expressions, plus an embedding
/// into `Complex64` for diagnostics and pivot selection.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Sub<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Whether arithmetic is exact, so zero tests are decisive and tolerance
    /// checks degrade to equality.
    const EXACT: bool;

    fn from_rational(q: &BigRational) -> Self;
    /// Numeric embedding. Exact to double precision for the exact types.
    fn to_c64(&self) -> Complex64;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    /// Magnitude of the numeric embedding, used for pivoting and tolerances.
    fn approx_abs(&self) -> f64 {
        self.to_c64().norm()
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(rational_to_f64(q), 0.0)
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// An element `a + b sqrt(d)` of a quadratic extension of the rationals.
///
/// The radicand is carried per element; elements with `b = 0` are plain
/// rationals and combine with any radicand. Mixing two distinct non-trivial
/// radicands is a programming error and panics. `d` must not be a square of a
/// rational (in particular not 0 or 1), so that `a + b sqrt(d) = 0` forces
/// `a = b = 0` and division is always defined for nonzero elements.
#[derive(Clone, Debug)]
pub struct QuadExt {
    a: BigRational,
    b: BigRational,
    d: BigRational,
}

impl QuadExt {
    pub fn new(a: BigRational, b: BigRational, d: BigRational) -> Self {
        let mut x = QuadExt { a, b, d };
        x.normalize();
        x
    }

    pub fn rational(a: BigRational) -> Self {
        QuadExt {
            a,
            b: <BigRational as Zero>::zero(),
            d: <BigRational as Zero>::zero(),
        }
    }

    /// The generator `sqrt(d)` itself.
    pub fn sqrt(d: BigRational) -> Self {
        QuadExt::new(
            <BigRational as Zero>::zero(),
            <BigRational as num_traits::One>::one(),
            d,
        )
    }

    /// `(-1 + sqrt(-3)) / 2`, a primitive cube root of unity.
    pub fn cbrt_unity() -> Self {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        QuadExt::new(-half.clone(), half, BigRational::from_integer(BigInt::from(-3)))
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> &BigRational {
        &self.d
    }

    pub fn conj(&self) -> Self {
        QuadExt::new(self.a.clone(), -self.b.clone(), self.d.clone())
    }

    fn normalize(&mut self) {
        if <BigRational as Zero>::is_zero(&self.b) {
            self.d = <BigRational as Zero>::zero();
        }
    }

    fn unified_d(&self, other: &Self) -> BigRational {
        if <BigRational as Zero>::is_zero(&self.b) {
            other.d.clone()
        } else if <BigRational as Zero>::is_zero(&other.b) {
            self.d.clone()
        } else if self.d == other.d {
            self.d.clone()
        } else {
            panic!(
                "mixed quadratic extensions: sqrt({}) and sqrt({})",
                self.d, other.d
            );
        }
    }

    fn inverse(&self) -> Self {
        let n = &self.a * &self.a - &self.b * &self.b * &self.d;
        if <BigRational as Zero>::is_zero(&n) {
            panic!("division by zero in quadratic extension");
        }
        QuadExt::new(&self.a / &n, -(&self.b / &n), self.d.clone())
    }
}

impl PartialEq for QuadExt {
    fn eq(&self, other: &Self) -> bool {
        if self.a != other.a || self.b != other.b {
            return false;
        }
        <BigRational as Zero>::is_zero(&self.b) || self.d == other.d
    }
}

impl Add for QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: Self) -> Self {
        let d = self.unified_d(&rhs);
        QuadExt::new(self.a + rhs.a, self.b + rhs.b, d)
    }
}

impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: Self) -> Self {
        let d = self.unified_d(&rhs);
        QuadExt::new(self.a - rhs.a, self.b - rhs.b, d)
    }
}

impl Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: Self) -> Self {
        let d = self.unified_d(&rhs);
        let a = &self.a * &rhs.a + &self.b * &rhs.b * &d;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QuadExt::new(a, b, d)
    }
}

impl Div for QuadExt {
    type Output = QuadExt;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inverse()
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> Self {
        QuadExt {
            a: -self.a,
            b: -self.b,
            d: self.d,
        }
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if <BigRational as Zero>::is_zero(&self.b) {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

impl Zero for QuadExt {
    fn zero() -> Self {
        QuadExt::rational(<BigRational as Zero>::zero())
    }

    fn is_zero(&self) -> bool {
        <BigRational as Zero>::is_zero(&self.a) && <BigRational as Zero>::is_zero(&self.b)
    }
}

impl One for QuadExt {
    fn one() -> Self {
        QuadExt::rational(<BigRational as One>::one())
    }
}

impl Scalar for QuadExt {
    const EXACT: bool = true;

    fn from_rational(q: &BigRational) -> Self {
        QuadExt::rational(q.clone())
    }

    fn to_c64(&self) -> Complex64 {
        let a = rational_to_f64(&self.a);
        let b = rational_to_f64(&self.b);
        let d = rational_to_f64(&self.d);
        if d >= 0.0 {
            Complex64::new(a + b * d.sqrt(), 0.0)
        } else {
            Complex64::new(a, b * (-d).sqrt())
        }
    }
}
