//! Exact scalar fields.
//!
//! Everything in the crate is generic over [`Scalar`], a field with exact
//! arithmetic. Two families are provided: prime fields [`Fp<P>`] with the
//! modulus fixed at compile time, and the arbitrary-precision rationals
//! [`Rational`].

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// An exact field.
///
/// `elements` is `Some` exactly when the field is finite; enumeration-based
/// operations (subspace lattices, sieve lattices, functor search) use it and
/// refuse to run otherwise.
pub trait Scalar:
    Clone
    + Eq
    + Ord
    + Hash
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// Image of an integer under the canonical ring map `Z -> k`.
    fn from_i64(n: i64) -> Self;

    /// Parses the textual form used in bundles.
    fn parse_scalar(s: &str) -> Option<Self>;

    /// `0` for the rationals, `p` for `F_p`.
    fn characteristic() -> u64;

    /// All field elements in a fixed order (zero first), if finite.
    fn elements() -> Option<Vec<Self>>;

    /// Short human-readable field name, e.g. `F_3` or `Q`.
    fn field_name() -> String;

    fn order() -> Option<u64> {
        match Self::characteristic() {
            0 => None,
            p => Some(p),
        }
    }
}

pub const fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Residue modulo the prime `P`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    const VALID: () = assert!(is_prime(P) && P < (1 << 31), "modulus must be a prime below 2^31");

    pub fn new(v: u64) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::VALID;
        Fp(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp::new(1);
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

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp(if self.0 >= rhs.0 { self.0 - rhs.0 } else { self.0 + P - rhs.0 })
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(self.0 * rhs.0 % P)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv().expect("division by zero in F_p")
    }
}

impl<const P: u64> AddAssign for Fp<P> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const P: u64> SubAssign for Fp<P> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const P: u64> MulAssign for Fp<P> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp::new(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp::new(1)
    }
}

impl<const P: u64> FromStr for Fp<P> {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        Self::parse_scalar(s).ok_or(())
    }
}

impl<const P: u64> Scalar for Fp<P> {
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }

    fn from_i64(n: i64) -> Self {
        Fp::new(n.rem_euclid(P as i64) as u64)
    }

    /// Accepts canonical residues `0..P` only.
    fn parse_scalar(s: &str) -> Option<Self> {
        let v: u64 = s.trim().parse().ok()?;
        (v < P).then(|| Fp::new(v))
    }

    fn characteristic() -> u64 {
        P
    }

    fn elements() -> Option<Vec<Self>> {
        Some((0..P).map(Fp::new).collect())
    }

    fn field_name() -> String {
        format!("F_{P}")
    }
}

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

impl Scalar for Rational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    /// Integers (`-3`) or fractions (`5/7`).
    fn parse_scalar(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().ok()?;
                let d: BigInt = d.trim().parse().ok()?;
                if d.is_zero() {
                    None
                } else {
                    Some(Rational::new(n, d))
                }
            }
            None => s.parse::<BigInt>().ok().map(Rational::from_integer),
        }
    }

    fn characteristic() -> u64 {
        0
    }

    fn elements() -> Option<Vec<Self>> {
        None
    }

    fn field_name() -> String {
        "Q".to_string()
    }
}
