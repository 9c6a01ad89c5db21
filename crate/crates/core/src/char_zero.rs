//! Roots of the characteristic-zero Bernstein-Sato polynomial, read off as
//! intercepts of affine laws `ν^J(q) = βq + η` on progressions `q ≡ 1 mod M`,
//! and the comparison with characteristic-`p` roots.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Signed;

use crate::bs::{bs_roots, BsConfig, RootReport};
use crate::error::{Error, Result};
use crate::jobs::Jobs;
use crate::monomial::MonomialIdeal;
use crate::nu::{default_grid, GridSpec, NuEngine, NuQuery};
use crate::padic::Rational;

/// `ν^J(q) = slope·q + intercept` for `q ≡ 1 mod m`, checked at
/// `validated_samples` values of `q` starting at `q0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineLaw {
    pub j: MonomialIdeal,
    pub m: u64,
    pub slope: Rational,
    pub intercept: Rational,
    pub q0: u64,
    pub validated_samples: u32,
}

impl AffineLaw {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "J": self.j.to_string(),
            "M": self.m,
            "slope": self.slope,
            "intercept": self.intercept,
            "q0": self.q0,
            "validated_samples": self.validated_samples,
        })
    }
}

/// ν-values of one `(a, J)` pair, memoized by `q`.
struct NuSeries<'a> {
    engine: &'a NuEngine,
    a: &'a MonomialIdeal,
    j: &'a MonomialIdeal,
    memo: HashMap<u64, BigInt>,
}

impl<'a> NuSeries<'a> {
    fn new(engine: &'a NuEngine, a: &'a MonomialIdeal, j: &'a MonomialIdeal) -> Result<Self> {
        // Validates the pair once; later queries only vary q.
        NuQuery::new(a.clone(), j.clone(), BigUint::from(1u32))?;
        Ok(NuSeries {
            engine,
            a,
            j,
            memo: HashMap::new(),
        })
    }

    fn at(&mut self, q: u64) -> Result<BigInt> {
        if let Some(v) = self.memo.get(&q) {
            return Ok(v.clone());
        }
        let query = NuQuery::new(self.a.clone(), self.j.clone(), BigUint::from(q))?;
        let v = BigInt::from(self.engine.nu(&query)?);
        self.memo.insert(q, v.clone());
        Ok(v)
    }

    /// Fits on `q0, q0 + m` and validates `q0 + k·m` for `k < samples`.
    fn fit(&mut self, m: u64, q0: u64, samples: u32) -> Result<Option<(BigRational, BigRational)>> {
        let v0 = self.at(q0)?;
        let v1 = self.at(q0 + m)?;
        let slope = BigRational::new(v1 - &v0, BigInt::from(m));
        if !slope.is_positive() {
            return Ok(None);
        }
        let intercept = BigRational::from_integer(v0) - &slope * BigRational::from_integer(q0.into());
        if self.holds(&slope, &intercept, m, q0, 2..samples)? {
            Ok(Some((slope, intercept)))
        } else {
            Ok(None)
        }
    }

    fn holds(
        &mut self,
        slope: &BigRational,
        intercept: &BigRational,
        m: u64,
        q0: u64,
        ks: std::ops::Range<u32>,
    ) -> Result<bool> {
        for k in ks {
            let q = q0 + u64::from(k) * m;
            let predicted = slope * BigRational::from_integer(q.into()) + intercept;
            if predicted != BigRational::from_integer(self.at(q)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn check_progression(m: u64, q_start: u64, samples: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::precondition("M must be positive"));
    }
    if samples < 5 {
        return Err(Error::precondition("an affine law needs at least 5 samples"));
    }
    if q_start == 0 || q_start % m != 1 % m {
        return Err(Error::precondition(format!("q_start = {q_start} is not 1 mod {m}")));
    }
    Ok(())
}

/// Fits `ν^J(q) = βq + η` on `q = q_start + k·M`, `k < samples`, from the
/// first two samples, returning `None` unless every sample agrees and `β > 0`.
pub fn fit_affine_law(
    a: &MonomialIdeal,
    j: &MonomialIdeal,
    m: u64,
    q_start: u64,
    samples: u32,
) -> Result<Option<AffineLaw>> {
    check_progression(m, q_start, samples)?;
    let engine = NuEngine::new();
    let mut series = NuSeries::new(&engine, a, j)?;
    Ok(series.fit(m, q_start, samples)?.map(|(slope, intercept)| AffineLaw {
        j: j.clone(),
        m,
        slope: Rational::from_big_rational(slope),
        intercept: Rational::from_big_rational(intercept),
        q0: q_start,
        validated_samples: samples,
    }))
}

/// Trial moduli `1..=m_max`.
pub fn candidate_moduli(m_max: u64) -> Vec<u64> {
    (1..=m_max).collect()
}

/// `1 + M·⌈q_min/M⌉`, the first `q ≡ 1 mod M` past `q_min`.
pub fn progression_start(m: u64, q_min: u64) -> u64 {
    1 + m * q_min.div_ceil(m)
}

#[derive(Clone, Debug)]
pub struct Char0Config {
    /// Multiplier applied to the default grid.
    pub grid_scale: u64,
    pub m_max: u64,
    pub q_min: u64,
    pub samples: u32,
    /// Extra samples each law must also satisfy before its intercept counts.
    pub audit: u32,
    pub jobs: Jobs,
    /// Also rerun on the grid scaled by `grid_scale + 1` and report whether the
    /// answer moved.
    pub check_grid: bool,
}

impl Default for Char0Config {
    fn default() -> Self {
        Char0Config {
            grid_scale: 1,
            m_max: 60,
            q_min: 50,
            samples: 5,
            audit: 3,
            jobs: Jobs::sequential(),
            check_grid: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Char0Root {
    pub value: Rational,
    /// The law with the smallest `J` (grid order), then smallest `M`.
    pub law: AffineLaw,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Char0Report {
    /// Sorted by value.
    pub roots: Vec<Char0Root>,
    pub grid: GridSpec,
    pub moduli: u64,
    /// `Some(true)` when enlarging the grid changed the root set.
    pub grid_limited: Option<bool>,
}

impl Char0Report {
    pub fn root_values(&self) -> BTreeSet<Rational> {
        self.roots.iter().map(|r| r.value.clone()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let roots: Vec<serde_json::Value> = self
            .roots
            .iter()
            .map(|r| serde_json::json!({"value": r.value, "law": r.law.to_json()}))
            .collect();
        serde_json::json!({
            "roots": roots,
            "grid_degree_bound": self.grid.degree_bound(),
            "m_max": self.moduli,
            "grid_limited": self.grid_limited,
        })
    }
}

/// First validated law per intercept for one `J`, scanning `M` upward.
fn laws_for(
    engine: &NuEngine,
    a: &MonomialIdeal,
    j: &MonomialIdeal,
    config: &Char0Config,
) -> Result<Vec<AffineLaw>> {
    let mut series = NuSeries::new(engine, a, j)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for m in candidate_moduli(config.m_max) {
        let q0 = progression_start(m, config.q_min);
        let Some((slope, intercept)) = series.fit(m, q0, config.samples)? else {
            continue;
        };
        let total = config.samples + config.audit;
        if !series.holds(&slope, &intercept, m, q0, config.samples..total)? {
            continue;
        }
        if seen.insert(intercept.clone()) {
            out.push(AffineLaw {
                j: j.clone(),
                m,
                slope: Rational::from_big_rational(slope),
                intercept: Rational::from_big_rational(intercept),
                q0,
                validated_samples: total,
            });
        }
    }
    Ok(out)
}

fn roots_on_grid(a: &MonomialIdeal, grid: &GridSpec, config: &Char0Config) -> Result<Vec<Char0Root>> {
    let ideals: Vec<MonomialIdeal> = grid
        .ideals()
        .into_iter()
        .filter(|j| j.radical_contains(a).unwrap_or(false))
        .collect();
    let engine = NuEngine::new();
    let per_j = config.jobs.map(&ideals, |j| laws_for(&engine, a, j, config));
    let mut roots: BTreeMap<Rational, AffineLaw> = BTreeMap::new();
    for laws in per_j {
        for law in laws? {
            roots.entry(law.intercept.clone()).or_insert(law);
        }
    }
    Ok(roots
        .into_iter()
        .map(|(value, law)| Char0Root { value, law })
        .collect())
}

/// Intercepts of all validated affine laws over the grid and `M ≤ m_max`.
pub fn char0_roots(a: &MonomialIdeal, config: &Char0Config) -> Result<Char0Report> {
    if a.is_zero() || a.is_unit() {
        return Err(Error::precondition("a must be a nonzero proper ideal"));
    }
    if config.m_max == 0 || config.grid_scale == 0 {
        return Err(Error::precondition("m_max and grid_scale must be positive"));
    }
    check_progression(1, 1, config.samples)?;
    let grid = default_grid(a)?.scaled(config.grid_scale);
    let roots = roots_on_grid(a, &grid, config)?;
    let grid_limited = if config.check_grid {
        let bigger = default_grid(a)?.scaled(config.grid_scale + 1);
        let alt = roots_on_grid(a, &bigger, config)?;
        let values = |rs: &[Char0Root]| rs.iter().map(|r| r.value.clone()).collect::<BTreeSet<_>>();
        Some(values(&alt) != values(&roots))
    } else {
        None
    };
    Ok(Char0Report {
        roots,
        grid,
        moduli: config.m_max,
        grid_limited,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeComparison {
    pub p: u64,
    pub char_p: RootReport,
    /// Char-0 roots not found in characteristic `p`.
    pub missing: BTreeSet<Rational>,
    /// Char-`p` roots that are not char-0 roots.
    pub extra: BTreeSet<Rational>,
    /// The char-0 roots lying in `ℤ_(p)`.
    pub char0_in_z_p: BTreeSet<Rational>,
}

impl PrimeComparison {
    pub fn equal(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }

    /// Whether the char-`p` roots are exactly the char-0 roots in `ℤ_(p)`.
    pub fn matches_z_p_restriction(&self) -> bool {
        self.char_p.root_values() == self.char0_in_z_p
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub char0: Char0Report,
    pub primes: Vec<PrimeComparison>,
}

impl Comparison {
    pub fn to_json(&self) -> serde_json::Value {
        let set = |s: &BTreeSet<Rational>| s.iter().cloned().collect::<Vec<_>>();
        let primes: Vec<serde_json::Value> = self
            .primes
            .iter()
            .map(|c| {
                serde_json::json!({
                    "p": c.p,
                    "char_p": set(&c.char_p.root_values()),
                    "all_certified": c.char_p.all_certified(),
                    "missing": set(&c.missing),
                    "extra": set(&c.extra),
                    "equal": c.equal(),
                    "char0_in_z_p": set(&c.char0_in_z_p),
                    "matches_z_p_restriction": c.matches_z_p_restriction(),
                })
            })
            .collect();
        serde_json::json!({
            "char0": set(&self.char0.root_values()),
            "primes": primes,
        })
    }
}

/// Characteristic-`p` roots for each prime next to the char-0 roots.
pub fn compare_char_p(
    a: &MonomialIdeal,
    primes: &[u64],
    bs_config: &BsConfig,
    char0_config: &Char0Config,
) -> Result<Comparison> {
    let char0 = char0_roots(a, char0_config)?;
    let zero_set = char0.root_values();
    let mut out = Vec::with_capacity(primes.len());
    for &p in primes {
        let report = bs_roots(a, p, bs_config)?;
        let char_p = report.root_values();
        out.push(PrimeComparison {
            p,
            missing: zero_set.difference(&char_p).cloned().collect(),
            extra: char_p.difference(&zero_set).cloned().collect(),
            char0_in_z_p: zero_set.iter().filter(|r| r.in_z_p(p)).cloned().collect(),
            char_p: report,
        });
    }
    Ok(Comparison { char0, primes: out })
}
