//! Bernstein-Sato roots of `a` in characteristic `p`.
//!
//! Level sets of ν-invariants give a residue tree; each full-depth branch is
//! tested for periodicity, turned into an exact rational, and certified by
//! finding `J` and `β` with `ν^J(p^{ed}) = β·p^{ed} + α` on consecutive `e`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frobenius::{is_prime, nu_set_chain_with_budget, PrimePower};
use crate::jobs::Jobs;
use crate::monomial::MonomialIdeal;
use crate::nu::{default_grid, nu_set_grid_with, GridSpec, LevelSet, NuEngine, NuQuery};
use crate::padic::{
    detect_period, digits_of_rational, rational_from_expansion, residue_tree, PAdicBranch,
    PeriodicExpansion, Rational, DEFAULT_MAX_PERIOD, DEFAULT_MAX_PREPERIOD,
};

/// Largest `d` tried when certifying a root.
pub const MAX_D: u32 = 20;

#[derive(Clone, Debug)]
pub struct BsConfig {
    /// Depth `E` of the reported branches; `None` picks the smallest `E` with
    /// `p^E ≥ 10^6` that also leaves room for period detection.
    pub levels: Option<u32>,
    /// Extra levels computed past `E`. Branches that die within them are
    /// discarded before truncating back to `E`.
    pub lookahead: u32,
    pub grid: Option<GridSpec>,
    pub certify: bool,
    /// Consecutive exponents a certificate must match.
    pub samples: u32,
    pub max_preperiod: usize,
    pub max_period: usize,
    /// Levels `e ≤ chain_check_levels` are recomputed with the Cartier chain
    /// when its length `r·p^e` is at most `chain_check_budget`.
    pub chain_check_levels: u32,
    pub chain_check_budget: u64,
    pub jobs: Jobs,
}

impl Default for BsConfig {
    fn default() -> Self {
        BsConfig {
            levels: None,
            lookahead: 4,
            grid: None,
            certify: true,
            samples: 3,
            max_preperiod: DEFAULT_MAX_PREPERIOD,
            max_period: DEFAULT_MAX_PERIOD,
            chain_check_levels: 2,
            chain_check_budget: 200,
            jobs: Jobs::sequential(),
        }
    }
}

impl BsConfig {
    pub fn default_levels(&self, p: u64) -> u32 {
        let mut e = 1;
        while BigUint::from(p).pow(e) < BigUint::from(1_000_000u32) {
            e += 1;
        }
        e.max((self.max_preperiod + 3 * self.max_period) as u32)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootStatus {
    Certified,
    PeriodicUncertified,
}

/// Evidence that `ν^J(p^{e·d}) = slope·p^{e·d} + α` for every `e` in `exponents`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    #[serde(rename = "J", serialize_with = "ser_ideal")]
    pub j: MonomialIdeal,
    pub d: u32,
    pub slope: Rational,
    pub exponents: Vec<u32>,
}

fn ser_ideal<S: serde::Serializer>(
    j: &MonomialIdeal,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&j.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootEntry {
    pub value: Rational,
    pub status: RootStatus,
    pub certificate: Option<Certificate>,
    pub expansion: PeriodicExpansion,
}

/// A branch that could not be turned into a root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unresolved {
    pub branch: PAdicBranch,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootReport {
    pub p: u64,
    /// Sorted by value.
    pub roots: Vec<RootEntry>,
    pub unresolved: Vec<Unresolved>,
    pub level_reached: u32,
    pub lookahead: u32,
    /// Set when some level admitted no compatible residue.
    pub empty_level: Option<usize>,
}

impl RootReport {
    pub fn root_values(&self) -> BTreeSet<Rational> {
        self.roots.iter().map(|r| r.value.clone()).collect()
    }

    pub fn all_certified(&self) -> bool {
        self.roots.iter().all(|r| r.status == RootStatus::Certified)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let roots: Vec<serde_json::Value> = self
            .roots
            .iter()
            .map(|r| {
                serde_json::json!({
                    "value": r.value,
                    "status": r.status,
                    "certificate": r.certificate,
                    "expansion": {"preperiod": r.expansion.preperiod, "period": r.expansion.period},
                })
            })
            .collect();
        let unresolved: Vec<serde_json::Value> = self
            .unresolved
            .iter()
            .map(|u| serde_json::json!({"digits": u.branch.digits(), "reason": u.reason}))
            .collect();
        serde_json::json!({
            "p": self.p,
            "roots": roots,
            "unresolved": unresolved,
            "level_reached": self.level_reached,
            "lookahead": self.lookahead,
            "empty_level": self.empty_level,
        })
    }
}

/// Level sets `e = 1..=levels`, cross-checked against the Cartier chain at
/// small levels.
pub fn level_sets(
    a: &MonomialIdeal,
    p: u64,
    levels: u32,
    grid: &GridSpec,
    config: &BsConfig,
) -> Result<Vec<LevelSet>> {
    let mut out = Vec::with_capacity(levels as usize);
    for e in 1..=levels {
        let pp = PrimePower::new(p, e)?;
        let set = nu_set_grid_with(a, &pp, grid, config.jobs)?;
        if e <= config.chain_check_levels {
            match nu_set_chain_with_budget(a, &pp, config.chain_check_budget) {
                Ok(chain) if chain != set.values => {
                    return Err(Error::Internal(format!(
                        "grid and chain level sets differ at {pp}"
                    )))
                }
                Ok(_) | Err(Error::Resource { .. }) => {}
                Err(err) => return Err(err),
            }
        }
        out.push(set);
    }
    Ok(out)
}

/// Bernstein-Sato roots of `a` over `F_p` detectable at the configured depth.
pub fn bs_roots(a: &MonomialIdeal, p: u64, config: &BsConfig) -> Result<RootReport> {
    if !is_prime(p) {
        return Err(Error::precondition(format!("{p} is not prime")));
    }
    if a.is_zero() || a.is_unit() {
        return Err(Error::precondition("a must be a nonzero proper ideal"));
    }
    let depth = config.levels.unwrap_or_else(|| config.default_levels(p));
    if depth == 0 {
        return Err(Error::precondition("levels must be positive"));
    }
    let grid = match &config.grid {
        Some(g) => g.clone(),
        None => default_grid(a)?,
    };
    let total = depth + config.lookahead;
    let sets = level_sets(a, p, total, &grid, config)?;
    let values: Vec<BTreeSet<BigUint>> = sets.into_iter().map(|s| s.values).collect();
    let tree = residue_tree(p, &values)?;

    let branches: BTreeSet<PAdicBranch> = tree
        .branches
        .iter()
        .map(|b| b.truncate(depth as usize))
        .collect();

    let period_room = config.max_preperiod + 3 * config.max_period;
    let mut roots: BTreeMap<Rational, RootEntry> = BTreeMap::new();
    let mut unresolved = Vec::new();
    for branch in branches {
        if branch.len() < period_room {
            unresolved.push(Unresolved {
                branch,
                reason: format!("depth below {period_room} digits needed for period detection"),
            });
            continue;
        }
        let Some(exp) = detect_period(&branch, config.max_preperiod, config.max_period)? else {
            unresolved.push(Unresolved {
                branch,
                reason: format!("no period found at level {depth}"),
            });
            continue;
        };
        let value = rational_from_expansion(&exp)?;
        if !value.is_negative() {
            unresolved.push(Unresolved {
                branch,
                reason: format!("periodic limit {value} is not negative"),
            });
            continue;
        }
        let certificate = if config.certify {
            certify_root(a, p, &value, &grid, config.samples)?
        } else {
            None
        };
        let status = if certificate.is_some() {
            RootStatus::Certified
        } else {
            RootStatus::PeriodicUncertified
        };
        roots.insert(
            value.clone(),
            RootEntry {
                value,
                status,
                certificate,
                expansion: exp,
            },
        );
    }
    Ok(RootReport {
        p,
        roots: roots.into_values().collect(),
        unresolved,
        level_reached: depth,
        lookahead: config.lookahead,
        empty_level: tree.empty_level,
    })
}

/// The least `d ≥ 1` with `den(α) | p^d − 1`.
pub fn find_d(alpha: &Rational, p: u64) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::precondition(format!("{p} is not prime")));
    }
    if !alpha.in_z_p(p) {
        return Err(Error::precondition(format!("{alpha} is not in Z_({p})")));
    }
    let den = alpha.denom();
    let pb = BigInt::from(p);
    let base = pb.mod_floor(den);
    let mut x = base.clone();
    let mut d = 1u32;
    while !(x.clone() - 1u32).is_multiple_of(den) {
        x = (x * &base).mod_floor(den);
        d += 1;
    }
    Ok(d)
}

/// Writes `α = m + p^d·γ` with `0 ≤ m < p^d`; returns `γ`.
fn tail_after(alpha: &Rational, p: u64, d: u32) -> Result<BigRational> {
    let m = digits_of_rational(alpha, p, d as usize)?.residue();
    let pd: BigInt = Pow::pow(&BigInt::from(p), d);
    Ok((alpha.as_big_rational() - BigRational::from_integer(BigInt::from(m)))
        / BigRational::from_integer(pd))
}

/// Picks `d`: the least multiple of [`find_d`] for which the tail `γ` falls
/// in `[−1, 0]`, falling back to the order itself.
pub fn certificate_d(alpha: &Rational, p: u64) -> Result<u32> {
    let d0 = find_d(alpha, p)?;
    let minus_one = -BigRational::one();
    let mut d = d0;
    while d <= MAX_D {
        let g = tail_after(alpha, p, d)?;
        if g >= minus_one && !g.is_positive() {
            return Ok(d);
        }
        d += d0;
    }
    Ok(d0)
}

/// Searches the grid for `J` and `β > 0` with
/// `ν^J(p^{e·d}) = β·p^{e·d} + α` on `samples` consecutive `e`.
pub fn certify_root(
    a: &MonomialIdeal,
    p: u64,
    alpha: &Rational,
    grid: &GridSpec,
    samples: u32,
) -> Result<Option<Certificate>> {
    if !alpha.is_negative() {
        return Err(Error::precondition(format!("root candidate {alpha} is not negative")));
    }
    if samples < 2 {
        return Err(Error::precondition("certification needs at least two samples"));
    }
    let d = certificate_d(alpha, p)?;
    let engine = NuEngine::new();
    let alpha_q = alpha.as_big_rational();
    for j in grid.ideals() {
        if !j.radical_contains(a)? {
            continue;
        }
        let mut cache: BTreeMap<u32, BigRational> = BTreeMap::new();
        let mut nu_at = |e: u32| -> Result<(BigRational, BigRational)> {
            let q = BigUint::from(p).pow(e * d);
            let qr = BigRational::from_integer(BigInt::from(q.clone()));
            if let Some(v) = cache.get(&e) {
                return Ok((qr, v.clone()));
            }
            let v = engine.nu(&NuQuery::new(a.clone(), j.clone(), q)?)?;
            let v = BigRational::from_integer(BigInt::from(v));
            cache.insert(e, v.clone());
            Ok((qr, v))
        };
        for start in 1..=3u32 {
            let (q1, v1) = nu_at(start)?;
            let (q2, v2) = nu_at(start + 1)?;
            let slope = (&v2 - &v1) / (&q2 - &q1);
            if !slope.is_positive() || v1 != &slope * &q1 + alpha_q {
                continue;
            }
            let mut ok = true;
            for e in start + 2..start + samples {
                let (q, v) = nu_at(e)?;
                if v != &slope * &q + alpha_q {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(Some(Certificate {
                    j,
                    d,
                    slope: Rational::from_big_rational(slope),
                    exponents: (start..start + samples).collect(),
                }));
            }
        }
    }
    Ok(None)
}

/// Re-evaluates a certificate at one more exponent past its samples.
pub fn recheck_certificate(
    a: &MonomialIdeal,
    p: u64,
    alpha: &Rational,
    cert: &Certificate,
) -> Result<bool> {
    let e = cert.exponents.last().copied().unwrap_or(0) + 1;
    let q = BigUint::from(p).pow(e * cert.d);
    let v = NuEngine::new().nu(&NuQuery::new(a.clone(), cert.j.clone(), q.clone())?)?;
    let predicted = cert.slope.as_big_rational()
        * BigRational::from_integer(BigInt::from(q))
        + alpha.as_big_rational();
    Ok(predicted == BigRational::from_integer(BigInt::from(v)))
}
