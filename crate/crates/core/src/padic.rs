//! Exact digit arithmetic in `ℤ_(p)`: residue trees across levels, periodic
//! expansions and rational reconstruction. Digits are little-endian.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::frobenius::is_prime;

/// Default bounds for period detection.
pub const DEFAULT_MAX_PREPERIOD: usize = 8;
pub const DEFAULT_MAX_PERIOD: usize = 12;

/// A reduced rational number. Serializes as `{"num": "...", "den": "..."}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// `num/den`; fails when `den` is zero.
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn from_i64s(num: i64, den: i64) -> Result<Self> {
        Self::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn from_integer(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    pub fn from_big_rational(r: BigRational) -> Self {
        Rational(r)
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Whether the value lies in `ℤ_(p)`, i.e. `p` does not divide the denominator.
    pub fn in_z_p(&self, p: u64) -> bool {
        !self.denom().is_multiple_of(&BigInt::from(p))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({"den": self.denom().to_string(), "num": self.numer().to_string()})
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |_| Error::Parse {
            pos: 0,
            msg: format!("invalid rational {s:?}"),
        };
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => Rational::new(
                n.trim().parse().map_err(bad)?,
                d.trim().parse().map_err(bad)?,
            ),
            None => Ok(Rational::from_integer(s.parse().map_err(bad)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            den: String,
            num: String,
        }
        Repr {
            den: self.denom().to_string(),
            num: self.numer().to_string(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            num: String,
            den: String,
        }
        let r = Repr::deserialize(de)?;
        let parse = |s: &str| s.parse::<BigInt>().map_err(serde::de::Error::custom);
        Rational::new(parse(&r.num)?, parse(&r.den)?).map_err(serde::de::Error::custom)
    }
}

/// A truncated base-`p` digit stream; digit `i` is the coefficient of `p^i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PAdicBranch {
    p: u64,
    digits: Vec<u64>,
}

impl PAdicBranch {
    pub fn new(p: u64, digits: Vec<u64>) -> Result<Self> {
        check_prime(p)?;
        if let Some(d) = digits.iter().find(|&&d| d >= p) {
            return Err(Error::precondition(format!("digit {d} out of range for p = {p}")));
        }
        Ok(PAdicBranch { p, digits })
    }

    /// The first `len` digits of the nonnegative integer `n`.
    pub fn from_residue(p: u64, n: &BigUint, len: usize) -> Self {
        let pb = BigUint::from(p);
        let mut n = n.clone();
        let mut digits = Vec::with_capacity(len);
        for _ in 0..len {
            let (q, r) = n.div_rem(&pb);
            digits.push(r.to_u64().expect("digit below p"));
            n = q;
        }
        PAdicBranch { p, digits }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// The residue `Σ d_i p^i` modulo `p^len`.
    pub fn residue(&self) -> BigUint {
        let pb = BigUint::from(self.p);
        self.digits
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &d| acc * &pb + d)
    }

    pub fn truncate(&self, len: usize) -> PAdicBranch {
        PAdicBranch {
            p: self.p,
            digits: self.digits[..len.min(self.digits.len())].to_vec(),
        }
    }
}

impl fmt::Display for PAdicBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ds: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
        write!(f, "({}) base {}", ds.join(","), self.p)
    }
}

/// An eventually periodic digit stream: `preperiod` then `period` forever.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicExpansion {
    pub p: u64,
    pub preperiod: Vec<u64>,
    pub period: Vec<u64>,
}

/// Compatible residue branches of a sequence of level sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueTree {
    /// Full-depth branches, sorted by residue.
    pub branches: Vec<PAdicBranch>,
    /// First level (1-based) whose residue set admits no compatible branch.
    pub empty_level: Option<usize>,
}

/// Branches `ρ_1, ..., ρ_E` with `ρ_e ∈ {n mod p^e : n ∈ level_sets[e-1]}`
/// and `ρ_{e+1} ≡ ρ_e mod p^e`.
pub fn residue_tree(p: u64, level_sets: &[BTreeSet<BigUint>]) -> Result<ResidueTree> {
    check_prime(p)?;
    if level_sets.is_empty() {
        return Err(Error::precondition("residue tree needs at least one level"));
    }
    let pb = BigUint::from(p);
    let mut modulus = BigUint::one();
    let mut frontier: BTreeSet<BigUint> = BTreeSet::from([BigUint::zero()]);
    for (idx, set) in level_sets.iter().enumerate() {
        let prev = modulus.clone();
        modulus *= &pb;
        frontier = set
            .iter()
            .map(|n| n % &modulus)
            .filter(|rho| frontier.contains(&(rho % &prev)))
            .collect();
        if frontier.is_empty() {
            return Ok(ResidueTree {
                branches: Vec::new(),
                empty_level: Some(idx + 1),
            });
        }
    }
    let depth = level_sets.len();
    Ok(ResidueTree {
        branches: frontier
            .iter()
            .map(|rho| PAdicBranch::from_residue(p, rho, depth))
            .collect(),
        empty_level: None,
    })
}

/// Smallest preperiod `k ≤ max_preperiod`, then smallest period
/// `d ≤ max_period`, such that the digits after position `k` repeat with
/// period `d` through the end of the branch.
pub fn detect_period(
    branch: &PAdicBranch,
    max_preperiod: usize,
    max_period: usize,
) -> Result<Option<PeriodicExpansion>> {
    if max_period == 0 {
        return Err(Error::precondition("max_period must be positive"));
    }
    let need = max_preperiod + 3 * max_period;
    if branch.len() < need {
        return Err(Error::precondition(format!(
            "branch has {} digits, period detection needs {need}",
            branch.len()
        )));
    }
    let ds = &branch.digits;
    for k in 0..=max_preperiod {
        for d in 1..=max_period {
            if (k..ds.len() - d).all(|i| ds[i] == ds[i + d]) {
                return Ok(Some(PeriodicExpansion {
                    p: branch.p,
                    preperiod: ds[..k].to_vec(),
                    period: ds[k..k + d].to_vec(),
                }));
            }
        }
    }
    Ok(None)
}

fn digits_value(p: &BigInt, digits: &[u64]) -> BigInt {
    digits
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, &d| acc * p + d)
}

/// `Σ_{i<k} a_i p^i + p^k · V / (1 − p^d)` with `V` the value of the period block.
pub fn rational_from_expansion(exp: &PeriodicExpansion) -> Result<Rational> {
    check_prime(exp.p)?;
    if exp.period.is_empty() {
        return Err(Error::precondition("period must be nonempty"));
    }
    let p = BigInt::from(exp.p);
    let pre = digits_value(&p, &exp.preperiod);
    let v = digits_value(&p, &exp.period);
    let pk: BigInt = Pow::pow(&p, exp.preperiod.len());
    let pd: BigInt = Pow::pow(&p, exp.period.len());
    let tail = BigRational::new(pk * v, BigInt::one() - pd);
    Ok(Rational(BigRational::from_integer(pre) + tail))
}

/// The first `e` base-`p` digits of `x` as a `p`-adic integer.
pub fn digits_of_rational(x: &Rational, p: u64, e: usize) -> Result<PAdicBranch> {
    check_prime(p)?;
    if !x.in_z_p(p) {
        return Err(Error::Domain(format!("{x} is not in Z_({p})")));
    }
    let pb = BigInt::from(p);
    let modulus: BigInt = Pow::pow(&pb, e);
    let inv = mod_inverse(x.denom(), &modulus);
    let residue = (x.numer() * inv).mod_floor(&modulus);
    let (_, mag) = residue.into_parts();
    Ok(PAdicBranch::from_residue(p, &mag, e))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let g = a.mod_floor(m).extended_gcd(m);
    debug_assert!(g.gcd.is_one());
    g.x.mod_floor(m)
}

/// Digits of `x` as a `p`-adic integer, reduced to an exact `p^e` residue.
pub fn residue_of_rational(x: &Rational, p: u64, e: usize) -> Result<BigUint> {
    Ok(digits_of_rational(x, p, e)?.residue())
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::precondition(format!("{p} is not prime")))
    }
}
