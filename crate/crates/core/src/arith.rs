//! Exact scalar helpers: big rationals, "p/q" text, modular reduction and
//! p-adic bookkeeping.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: &Int) -> Rat {
    BigRational::from_integer(n.clone())
}

/// Parses `"p"`, `"p/q"` or `"-p/q"` into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Formats a rational as `"p"` or `"p/q"` in lowest terms.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn fmt_rat64(r: &Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Reduces `r` into `[0, m)`.
pub fn rat64_mod(r: Rational64, m: i64) -> Rational64 {
    let m = Rational64::from_integer(m);
    let k = (r / m).floor();
    r - k * m
}

pub fn to_rat64(r: &Rat) -> Result<Rational64> {
    let n = r.numer().to_i64();
    let d = r.denom().to_i64();
    match (n, d) {
        (Some(n), Some(d)) => Ok(Rational64::new(n, d)),
        _ => Err(Error::Overflow(fmt_rat(r))),
    }
}

/// Least common multiple of the denominators of a slice of rationals.
pub fn common_denominator<'a>(it: impl IntoIterator<Item = &'a Rat>) -> Int {
    it.into_iter()
        .fold(Int::one(), |acc, r| acc.lcm(r.denom()))
}

/// `(v, n / p^v)` for nonzero `n`.
pub fn split_valuation(n: &Int, p: u64) -> (u32, Int) {
    assert!(!n.is_zero(), "valuation of zero");
    let p = Int::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    (v, m)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Class of a nonzero p-adic unit modulo squares.
///
/// For p = 2 the classes are the residues {1, 3, 5, 7} mod 8; for odd p the
/// class is whether the unit is a quadratic residue mod p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitClass {
    Dyadic(u8),
    Residue(bool),
}

impl UnitClass {
    pub fn one(p: u64) -> Self {
        if p == 2 {
            UnitClass::Dyadic(1)
        } else {
            UnitClass::Residue(true)
        }
    }

    /// Class of an integer coprime to p.
    pub fn of_unit(u: &Int, p: u64) -> Self {
        if p == 2 {
            let r = u.mod_floor(&Int::from(8)).to_u8().unwrap();
            debug_assert!(r % 2 == 1);
            UnitClass::Dyadic(r)
        } else {
            UnitClass::Residue(legendre(u, p) == 1)
        }
    }

    pub fn mul(self, other: Self) -> Self {
        match (self, other) {
            (UnitClass::Dyadic(a), UnitClass::Dyadic(b)) => UnitClass::Dyadic(((a as u16 * b as u16) % 8) as u8),
            (UnitClass::Residue(a), UnitClass::Residue(b)) => UnitClass::Residue(a == b),
            _ => panic!("mixing unit classes of different primes"),
        }
    }

    /// Class of `-1` at p.
    pub fn minus_one(p: u64) -> Self {
        if p == 2 {
            UnitClass::Dyadic(7)
        } else {
            UnitClass::Residue(p % 4 == 1)
        }
    }
}

impl fmt::Display for UnitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitClass::Dyadic(r) => write!(f, "{r}"),
            UnitClass::Residue(true) => write!(f, "square"),
            UnitClass::Residue(false) => write!(f, "non-square"),
        }
    }
}

/// Legendre symbol (u/p) for odd prime p and u coprime to p.
pub fn legendre(u: &Int, p: u64) -> i32 {
    let pp = Int::from(p);
    let e = Int::from((p - 1) / 2);
    let r = u.mod_floor(&pp).modpow(&e, &pp);
    if r.is_one() {
        1
    } else if r.is_zero() {
        0
    } else {
        -1
    }
}

pub fn abs_int(n: &Int) -> Int {
    n.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_rationals() {
        assert_eq!(parse_rat("3/8").unwrap(), rat(3, 8));
        assert_eq!(parse_rat("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rat(" 7 ").unwrap(), rat(7, 1));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(fmt_rat(&rat(-3, 2)), "-3/2");
        assert_eq!(fmt_rat(&rat(4, 2)), "2");
    }

    #[test]
    fn modular_reduction_lands_in_range() {
        assert_eq!(rat64_mod(Rational64::new(-1, 2), 2), Rational64::new(3, 2));
        assert_eq!(rat64_mod(Rational64::new(17, 8), 2), Rational64::new(1, 8));
        assert_eq!(rat64_mod(Rational64::new(-1, 8), 1), Rational64::new(7, 8));
    }

    #[test]
    fn unit_classes() {
        assert_eq!(UnitClass::of_unit(&int(-1), 2), UnitClass::Dyadic(7));
        assert_eq!(UnitClass::of_unit(&int(3), 2).mul(UnitClass::Dyadic(5)), UnitClass::Dyadic(7));
        assert_eq!(UnitClass::of_unit(&int(2), 7), UnitClass::Residue(true));
        assert_eq!(UnitClass::of_unit(&int(3), 7), UnitClass::Residue(false));
        assert_eq!(UnitClass::minus_one(5), UnitClass::Residue(true));
        assert_eq!(UnitClass::minus_one(3), UnitClass::Residue(false));
        assert_eq!(split_valuation(&int(-24), 2), (3, int(-3)));
    }
}
