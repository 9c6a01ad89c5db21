//! ν-invariants `ν^J_a(q) = max{n : a^n ⊄ J^{[q]}}` for monomial ideals.
//!
//! Against an irreducible `J = (x_i^{c_i} : i ∈ S)` the invariant is the
//! integer program `max sum(β)` with `Σ_j a_ij β_j ≤ q·c_i − 1` for `i ∈ S`.
//! A general `J` is the intersection of its irreducible components and
//! `ν^J` is the maximum over them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::frobenius::{bracket_power, PrimePower};
use crate::ilp::{optimum_value, NuProblem};
use crate::jobs::Jobs;
use crate::monomial::MonomialIdeal;

/// Default limit on the number of powers `a^n` the brute-force scan builds.
pub const DEFAULT_BRUTE_BUDGET: u64 = 5_000;

/// A validated ν-invariant query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NuQuery {
    a: MonomialIdeal,
    j: MonomialIdeal,
    q: BigUint,
}

impl NuQuery {
    pub fn new(a: MonomialIdeal, j: MonomialIdeal, q: BigUint) -> Result<Self> {
        check_a(&a)?;
        if a.dim() != j.dim() {
            return Err(Error::Dimension {
                expected: a.dim(),
                found: j.dim(),
            });
        }
        if j.is_unit() {
            return Err(Error::precondition("J must be a proper ideal"));
        }
        if q.is_zero() {
            return Err(Error::precondition("q must be positive"));
        }
        if !j.radical_contains(&a)? {
            return Err(Error::precondition("J does not contain a in its radical"));
        }
        Ok(NuQuery { a, j, q })
    }

    pub fn a(&self) -> &MonomialIdeal {
        &self.a
    }

    pub fn j(&self) -> &MonomialIdeal {
        &self.j
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }
}

fn check_a(a: &MonomialIdeal) -> Result<()> {
    if a.is_zero() {
        return Err(Error::precondition("a must be nonzero"));
    }
    if a.is_unit() {
        return Err(Error::precondition("a must be a proper ideal"));
    }
    Ok(())
}

/// Computes ν-invariants, caching irreducible decompositions of `J`.
///
/// The cache is shared behind a read-mostly lock, so one engine can serve
/// concurrent callers.
#[derive(Debug, Default)]
pub struct NuEngine {
    components: RwLock<HashMap<MonomialIdeal, Arc<[MonomialIdeal]>>>,
}

impl NuEngine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn nu(&self, query: &NuQuery) -> Result<BigUint> {
        let mut best = BigUint::zero();
        for comp in self.components(&query.j)?.iter() {
            let v = nu_irreducible(&query.a, comp, &query.q)?;
            if v > best {
                best = v;
            }
        }
        Ok(best)
    }

    fn components(&self, j: &MonomialIdeal) -> Result<Arc<[MonomialIdeal]>> {
        if j.is_irreducible_form() {
            return Ok(Arc::from(vec![j.clone()]));
        }
        if let Some(hit) = self
            .components
            .read()
            .expect("cache lock poisoned")
            .get(j)
        {
            return Ok(hit.clone());
        }
        let comps: Arc<[MonomialIdeal]> = Arc::from(j.irreducible_decomposition()?);
        self.components
            .write()
            .expect("cache lock poisoned")
            .insert(j.clone(), comps.clone());
        Ok(comps)
    }
}

/// `ν^J_a(q)` for a validated query.
pub fn nu(query: &NuQuery) -> Result<BigUint> {
    NuEngine::new().nu(query)
}

/// The integer program behind `ν^J_a(q)` for irreducible `J`.
pub fn nu_problem(a: &MonomialIdeal, j: &MonomialIdeal, q: &BigUint) -> Result<NuProblem> {
    let mut matrix = Vec::with_capacity(j.num_gens());
    let mut caps = Vec::with_capacity(j.num_gens());
    for g in j.gens() {
        let mut support = g.support();
        let (Some(var), None) = (support.next(), support.next()) else {
            return Err(Error::precondition(format!(
                "generator {g} of J is not a pure power"
            )));
        };
        matrix.push(a.gens().iter().map(|f| f.exponent(var).clone()).collect());
        caps.push(BigInt::from(q * g.exponent(var)) - 1);
    }
    NuProblem::new(matrix, caps)
}

fn nu_irreducible(a: &MonomialIdeal, j: &MonomialIdeal, q: &BigUint) -> Result<BigUint> {
    let prob = nu_problem(a, j, q)?;
    optimum_value(&prob)?
        .ok_or_else(|| Error::Internal("ν program with nonnegative caps was infeasible".into()))
}

/// Reference value by scanning `n = 0, 1, ...` until `a^n ⊆ J^{[q]}`.
pub fn nu_brute(query: &NuQuery) -> Result<BigUint> {
    nu_brute_with_budget(query, DEFAULT_BRUTE_BUDGET)
}

pub fn nu_brute_with_budget(query: &NuQuery, budget: u64) -> Result<BigUint> {
    // a^N ⊆ J^{[q]} once N ≥ r·q·(max exponent of J), by pigeonhole on the
    // generators of a.
    let max_exp = query
        .j
        .gens()
        .iter()
        .flat_map(|g| g.exponents().iter().cloned())
        .max()
        .unwrap_or_default();
    let bound = BigUint::from(query.a.num_gens()) * &query.q * max_exp;
    if bound > BigUint::from(budget) {
        return Err(Error::resource(format!("brute-force scan length {bound}"), budget));
    }
    let bracket = bracket_power(&query.j, &query.q)?;
    let mut power = MonomialIdeal::unit(query.a.dim());
    let mut n: u64 = 0;
    loop {
        if bracket.contains_ideal(&power)? {
            // n ≥ 1: J is proper, so a^0 = (1) ⊄ J^{[q]}.
            return Ok(BigUint::from(n - 1));
        }
        n += 1;
        if n > budget {
            return Err(Error::resource("brute-force scan length", budget));
        }
        power = power.multiply(&query.a)?;
    }
}

/// The family of witness ideals `J = (x_1^{b_1+1}, ..., x_n^{b_n+1})` with
/// `b_i ≤ per_variable_bound[i]` and `Σ b_i ≤ degree_bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    degree_bound: u64,
    per_variable_bound: Vec<u64>,
}

impl GridSpec {
    pub fn new(degree_bound: u64, per_variable_bound: Vec<u64>) -> Result<Self> {
        if degree_bound == 0 {
            return Err(Error::precondition("grid degree bound must be positive"));
        }
        if per_variable_bound.iter().any(|&b| b > degree_bound) {
            return Err(Error::precondition(
                "per-variable grid bounds cannot exceed the degree bound",
            ));
        }
        Ok(GridSpec {
            degree_bound,
            per_variable_bound,
        })
    }

    pub fn degree_bound(&self) -> u64 {
        self.degree_bound
    }

    pub fn per_variable_bound(&self) -> &[u64] {
        &self.per_variable_bound
    }

    /// Multiplies every bound by `k`.
    pub fn scaled(&self, k: u64) -> GridSpec {
        let k = k.max(1);
        GridSpec {
            degree_bound: self.degree_bound * k,
            per_variable_bound: self.per_variable_bound.iter().map(|b| b * k).collect(),
        }
    }

    /// All witness exponent vectors `b`, ordered by `Σ b` and then
    /// lexicographically.
    pub fn witness_exponents(&self) -> Vec<Vec<u64>> {
        let mut out: Vec<Vec<u64>> = vec![vec![]];
        for &bound in &self.per_variable_bound {
            let mut next = Vec::new();
            for prefix in &out {
                let used: u64 = prefix.iter().sum();
                for b in 0..=bound.min(self.degree_bound - used) {
                    let mut v = prefix.clone();
                    v.push(b);
                    next.push(v);
                }
            }
            out = next;
        }
        out.sort_by(|x, y| {
            x.iter()
                .sum::<u64>()
                .cmp(&y.iter().sum::<u64>())
                .then_with(|| x.cmp(y))
        });
        out
    }

    /// The grid ideals, in the same order as [`GridSpec::witness_exponents`].
    pub fn ideals(&self) -> Vec<MonomialIdeal> {
        self.witness_exponents()
            .iter()
            .map(|b| {
                let exps: Vec<BigUint> = b.iter().map(|&x| BigUint::from(x + 1)).collect();
                MonomialIdeal::pure_powers(&exps)
            })
            .collect()
    }
}

/// Grid covering all level sets below `r·p^e`: with `D` the largest
/// generator degree of `a`, Cartier images of `a^m` for `m ≤ r·p^e` are
/// generated in degree `≤ D·r`. We use `D·(r+1)` for slack.
pub fn default_grid(a: &MonomialIdeal) -> Result<GridSpec> {
    check_a(a)?;
    let d = a
        .max_degree()
        .to_u64()
        .ok_or_else(|| Error::resource("generator degree", u64::MAX))?;
    let bound = d * (a.num_gens() as u64 + 1);
    GridSpec::new(bound, vec![bound; a.dim()])
}

/// A level-`e` ν-invariant set with one witness ideal per value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelSet {
    pub level: u32,
    pub values: BTreeSet<BigUint>,
    /// For each value, the first grid ideal (smallest total degree) realizing it.
    pub witnesses: BTreeMap<BigUint, MonomialIdeal>,
}

/// `{ν^J_a(p^e) : J in the grid} ∩ [0, r·p^e)`.
pub fn nu_set_grid(a: &MonomialIdeal, pp: &PrimePower, grid: &GridSpec) -> Result<LevelSet> {
    nu_set_grid_with(a, pp, grid, Jobs::sequential())
}

pub fn nu_set_grid_with(
    a: &MonomialIdeal,
    pp: &PrimePower,
    grid: &GridSpec,
    jobs: Jobs,
) -> Result<LevelSet> {
    check_a(a)?;
    if grid.per_variable_bound.len() != a.dim() {
        return Err(Error::Dimension {
            expected: a.dim(),
            found: grid.per_variable_bound.len(),
        });
    }
    let ideals: Vec<MonomialIdeal> = grid
        .ideals()
        .into_iter()
        .filter(|j| j.radical_contains(a).unwrap_or(false))
        .collect();
    if ideals.is_empty() {
        return Err(Error::precondition(
            "no grid ideal contains a in its radical",
        ));
    }
    let limit = BigUint::from(a.num_gens()) * pp.value();
    let engine = NuEngine::new();
    let values = jobs.map(&ideals, |j| {
        let query = NuQuery::new(a.clone(), j.clone(), pp.value().clone())?;
        engine.nu(&query)
    });

    let mut out = LevelSet {
        level: pp.e(),
        values: BTreeSet::new(),
        witnesses: BTreeMap::new(),
    };
    for (j, v) in ideals.into_iter().zip(values) {
        let v = v?;
        if v < limit && out.values.insert(v.clone()) {
            out.witnesses.insert(v, j);
        }
    }
    Ok(out)
}

/// Convenience for tests and callers that only hold small integers.
pub fn nu_small(a: &MonomialIdeal, j: &MonomialIdeal, q: u64) -> Result<BigUint> {
    nu(&NuQuery::new(a.clone(), j.clone(), BigUint::from(q))?)
}
