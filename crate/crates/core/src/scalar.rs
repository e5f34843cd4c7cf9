//! Exact scalars: arbitrary-precision rationals and residues in a prime field.
//!
//! All arithmetic is exact. The two forms never mix implicitly: combining a
//! rational with a prime-field residue, or residues with different moduli, is
//! a caller bug and panics. [`ExactScalar::to_mod`] performs the canonical
//! reduction of a rational into a prime field where that is wanted.

use alloc::string::String;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default prime modulus for probabilistic identity testing: `2^61 - 1`.
pub const DEFAULT_MODULUS: u64 = (1u64 << 61) - 1;

/// An exact scalar, either a reduced rational or a prime-field residue.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ExactScalar {
    /// Reduced fraction with positive denominator (maintained by `num-rational`).
    Rat(BigRational),
    /// Residue `value` modulo `modulus`, with `0 <= value < modulus`.
    /// The modulus must be prime; inversion uses Fermat's little theorem.
    Mod { value: u64, modulus: u64 },
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar::Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactScalar::Rat(BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        ExactScalar::Rat(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_big(v: BigInt) -> Self {
        ExactScalar::Rat(BigRational::from_integer(v))
    }

    /// `num/den` as a reduced rational. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        ExactScalar::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Residue class of `value` in the prime field with the given modulus.
    pub fn mod_p(value: u64, modulus: u64) -> Self {
        assert!(modulus > 1, "modulus must exceed 1");
        ExactScalar::Mod { value: value % modulus, modulus }
    }

    pub fn zero_like(&self) -> Self {
        match self {
            ExactScalar::Rat(_) => ExactScalar::zero(),
            ExactScalar::Mod { modulus, .. } => ExactScalar::Mod { value: 0, modulus: *modulus },
        }
    }

    pub fn one_like(&self) -> Self {
        match self {
            ExactScalar::Rat(_) => ExactScalar::one(),
            ExactScalar::Mod { modulus, .. } => ExactScalar::Mod { value: 1, modulus: *modulus },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactScalar::Rat(r) => r.is_zero(),
            ExactScalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            ExactScalar::Rat(r) => r.is_one(),
            ExactScalar::Mod { value, .. } => *value == 1,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, ExactScalar::Rat(_))
    }

    /// The rational payload; panics on a prime-field residue.
    pub fn expect_rational(&self) -> &BigRational {
        match self {
            ExactScalar::Rat(r) => r,
            ExactScalar::Mod { .. } => panic!("expected rational scalar, found prime-field residue"),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        match self {
            ExactScalar::Rat(r) => {
                if r.is_zero() {
                    None
                } else {
                    Some(ExactScalar::Rat(r.recip()))
                }
            }
            ExactScalar::Mod { value, modulus } => {
                if *value == 0 {
                    None
                } else {
                    Some(ExactScalar::Mod { value: inv_mod(*value, *modulus), modulus: *modulus })
                }
            }
        }
    }

    /// Exact division; `None` when dividing by zero.
    pub fn divide(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|i| self * &i)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = self.one_like();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Reduce a rational into `F_p`; `None` when `p` divides the denominator.
    /// Residues are returned unchanged if the modulus matches.
    pub fn to_mod(&self, p: u64) -> Option<Self> {
        match self {
            ExactScalar::Rat(r) => {
                let num = big_mod(r.numer(), p);
                let den = big_mod(r.denom(), p);
                if den == 0 {
                    return None;
                }
                Some(ExactScalar::Mod { value: mul_mod(num, inv_mod(den, p), p), modulus: p })
            }
            ExactScalar::Mod { modulus, .. } => {
                if *modulus == p {
                    Some(self.clone())
                } else {
                    None
                }
            }
        }
    }
}

/// Non-negative residue of a big integer modulo `p`.
fn big_mod(v: &BigInt, p: u64) -> u64 {
    let p_big = BigInt::from(p);
    let mut r = v % &p_big;
    if r.is_negative() {
        r += &p_big;
    }
    r.to_u64().expect("residue fits in u64")
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = (a as u128) + (b as u128);
    (s % p as u128) as u64
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Inverse mod a prime via Fermat's little theorem.
fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn check_same_modulus(a: u64, b: u64) {
    assert!(a == b, "mixed moduli in prime-field arithmetic: {a} vs {b}");
}

impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        match (self, rhs) {
            (ExactScalar::Rat(a), ExactScalar::Rat(b)) => ExactScalar::Rat(a + b),
            (
                ExactScalar::Mod { value: a, modulus: p },
                ExactScalar::Mod { value: b, modulus: q },
            ) => {
                check_same_modulus(*p, *q);
                ExactScalar::Mod { value: add_mod(*a, *b, *p), modulus: *p }
            }
            _ => panic!("mixed scalar domains: rational vs prime-field residue"),
        }
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        match (self, rhs) {
            (ExactScalar::Rat(a), ExactScalar::Rat(b)) => ExactScalar::Rat(a - b),
            (
                ExactScalar::Mod { value: a, modulus: p },
                ExactScalar::Mod { value: b, modulus: q },
            ) => {
                check_same_modulus(*p, *q);
                ExactScalar::Mod { value: sub_mod(*a, *b, *p), modulus: *p }
            }
            _ => panic!("mixed scalar domains: rational vs prime-field residue"),
        }
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        match (self, rhs) {
            (ExactScalar::Rat(a), ExactScalar::Rat(b)) => ExactScalar::Rat(a * b),
            (
                ExactScalar::Mod { value: a, modulus: p },
                ExactScalar::Mod { value: b, modulus: q },
            ) => {
                check_same_modulus(*p, *q);
                ExactScalar::Mod { value: mul_mod(*a, *b, *p), modulus: *p }
            }
            _ => panic!("mixed scalar domains: rational vs prime-field residue"),
        }
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        match self {
            ExactScalar::Rat(a) => ExactScalar::Rat(-a),
            ExactScalar::Mod { value, modulus } => {
                ExactScalar::Mod { value: sub_mod(0, *value, *modulus), modulus: *modulus }
            }
        }
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: ExactScalar) -> ExactScalar {
        &self + &rhs
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: ExactScalar) -> ExactScalar {
        &self - &rhs
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: ExactScalar) -> ExactScalar {
        &self * &rhs
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Rat(r) => write!(f, "{r}"),
            ExactScalar::Mod { value, modulus } => write!(f, "{value} mod {modulus}"),
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactScalar {
    type Err = String;

    /// Parses `p` or `p/q` into a reduced rational.
    fn from_str(s: &str) -> core::result::Result<Self, String> {
        let r: BigRational =
            s.trim().parse().map_err(|_| alloc::format!("not a rational: {s:?}"))?;
        Ok(ExactScalar::Rat(r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_reduces() {
        let a = ExactScalar::ratio(1, 2);
        let b = ExactScalar::ratio(1, 3);
        let s = &a + &b;
        assert_eq!(s, ExactScalar::ratio(5, 6));
        assert_eq!(&a * &b, ExactScalar::ratio(1, 6));
        assert_eq!((&a - &a).is_zero(), true);
        assert_eq!(ExactScalar::ratio(2, 4), ExactScalar::ratio(1, 2));
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["3", "-7/2", "0", "22/7"] {
            let v: ExactScalar = s.parse().unwrap();
            assert_eq!(alloc::format!("{v}"), s);
        }
        assert!("1/0".parse::<ExactScalar>().is_err());
        assert!("x".parse::<ExactScalar>().is_err());
    }

    #[test]
    fn prime_field_inverse() {
        let p = DEFAULT_MODULUS;
        let a = ExactScalar::mod_p(123456789, p);
        let inv = a.inv().unwrap();
        assert!((&a * &inv).is_one());
        assert!(ExactScalar::mod_p(0, p).inv().is_none());
    }

    #[test]
    fn rational_reduction_into_prime_field() {
        let p = 101u64;
        let half = ExactScalar::ratio(1, 2);
        let r = half.to_mod(p).unwrap();
        let two = ExactScalar::mod_p(2, p);
        assert!((&r * &two).is_one());
        // Denominator divisible by p has no image.
        assert!(ExactScalar::ratio(1, 101).to_mod(p).is_none());
        // Negative numerators reduce to canonical residues.
        let neg = ExactScalar::from_int(-1).to_mod(p).unwrap();
        assert_eq!(neg, ExactScalar::mod_p(100, p));
    }

    #[test]
    #[should_panic(expected = "mixed scalar domains")]
    fn mixing_forms_panics() {
        let _ = &ExactScalar::one() + &ExactScalar::mod_p(1, 7);
    }

    #[test]
    #[should_panic(expected = "mixed moduli")]
    fn mixing_moduli_panics() {
        let _ = &ExactScalar::mod_p(1, 7) + &ExactScalar::mod_p(1, 11);
    }
}
