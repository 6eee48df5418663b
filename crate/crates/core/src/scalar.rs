//! Exact scalar fields.
//!
//! Everything that is generic in this crate (elimination, sparse polynomials,
//! truncated series) is generic over [`Field`]. Two implementations ship:
//! arbitrary-precision rationals ([`BigRational`]) and residues modulo a
//! runtime prime ([`Fp`]). Floating point types are deliberately not fields
//! here: every decision path is exact.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// An exact field.
///
/// `embed` maps a rational into the field, using `self` only as context
/// (the modulus, for residues). It returns `None` when the rational has no
/// image, e.g. a denominator divisible by the characteristic.
pub trait Field:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Zero
    + One
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Div<Output = Self>
{
    fn inverse(&self) -> Option<Self>;

    fn embed(&self, q: &BigRational) -> Option<Self>;

    fn embed_int(&self, n: &BigInt) -> Self {
        self.embed(&BigRational::from_integer(n.clone()))
            .expect("integers embed in every field")
    }
}

impl Field for BigRational {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn embed(&self, q: &BigRational) -> Option<Self> {
        Some(q.clone())
    }
}

/// A residue modulo a prime `p`, carrying its modulus.
///
/// `Fp::zero()` and `Fp::one()` (required by `num_traits`) have no modulus of
/// their own; such literals adopt the modulus of the first bound operand
/// they are combined with. Moduli must fit in 32 bits so products fit in
/// `u64` before reduction.
#[derive(Clone, Copy, Debug)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn new(value: i64, p: u64) -> Self {
        assert!(p >= 2 && p <= u32::MAX as u64, "modulus out of range: {p}");
        Fp {
            value: value.rem_euclid(p as i64) as u64,
            modulus: p,
        }
    }

    pub fn from_bigint(n: &BigInt, p: u64) -> Self {
        let r = n.mod_floor(&BigInt::from(p));
        Fp {
            value: r.to_u64().expect("reduced residue fits"),
            modulus: p,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// The modulus, or `None` for an unbound literal.
    pub fn modulus(&self) -> Option<u64> {
        (self.modulus != 0).then_some(self.modulus)
    }

    fn join(a: &Fp, b: &Fp) -> u64 {
        match (a.modulus, b.modulus) {
            (0, m) | (m, 0) => m,
            (m, n) => {
                assert_eq!(m, n, "mixing residues with different moduli");
                m
            }
        }
    }

    fn reduce(v: u64, m: u64) -> Fp {
        if m == 0 {
            Fp {
                value: v,
                modulus: 0,
            }
        } else {
            Fp {
                value: v % m,
                modulus: m,
            }
        }
    }

    pub fn pow(&self, mut e: u64) -> Fp {
        let mut base = *self;
        let mut acc = Fp::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl PartialEq for Fp {
    fn eq(&self, other: &Self) -> bool {
        let m = Fp::join(self, other);
        if m == 0 {
            self.value == other.value
        } else {
            self.value % m == other.value % m
        }
    }
}

impl Eq for Fp {}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let m = Fp::join(&self, &rhs);
        Fp::reduce(self.value + rhs.value, m)
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self + (-rhs)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        if self.value == 0 {
            return self;
        }
        assert!(
            self.modulus != 0,
            "cannot negate an unbound residue literal"
        );
        Fp {
            value: self.modulus - self.value % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        let m = Fp::join(&self, &rhs);
        Fp::reduce(self.value * rhs.value, m)
    }
}

impl Div for Fp {
    type Output = Fp;
    // division is multiplication by the inverse
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Fp) -> Fp {
        self * rhs.inverse().expect("division by zero residue")
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp {
            value: 0,
            modulus: 0,
        }
    }
    fn is_zero(&self) -> bool {
        self.value == 0 || self.value.is_multiple_of(self.modulus)
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp {
            value: 1,
            modulus: 0,
        }
    }
}

impl Field for Fp {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.modulus == 0 {
            // only the literal one is invertible without a modulus
            return (self.value == 1).then_some(*self);
        }
        // Fermat: p is prime
        Some(self.pow(self.modulus - 2))
    }

    fn embed(&self, q: &BigRational) -> Option<Self> {
        assert!(self.modulus != 0, "embedding needs a bound residue");
        let p = self.modulus;
        let num = Fp::from_bigint(q.numer(), p);
        let den = Fp::from_bigint(q.denom(), p);
        den.inverse().map(|d| num * d)
    }
}

/// Deterministic primality test for the moduli used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Fractional part `q - floor(q)`, in `[0, 1)`.
pub fn frac(q: &BigRational) -> BigRational {
    q - q.floor()
}

/// Parses `"p/q"` or `"p"` into a canonical rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Canonical `p/q` rendering; integers print without a denominator.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_integral(q: &BigRational) -> bool {
    q.denom().is_one()
}
