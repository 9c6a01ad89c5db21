//! Bracket powers, Cartier images and the Cartier chain of `a^n`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialIdeal};

/// Default cap on `r·p^e`, the number of chain steps.
pub const DEFAULT_CHAIN_BUDGET: u64 = 100_000;

/// `q = p^e` with `p` prime and `e ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimePower {
    p: u64,
    e: u32,
    value: BigUint,
}

impl PrimePower {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::precondition(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::precondition("exponent e must be positive"));
        }
        Ok(PrimePower {
            p,
            e,
            value: BigUint::from(p).pow(e),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.e)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `J^{[q]}`: every generator raised to the `q`-th power.
pub fn bracket_power(j: &MonomialIdeal, q: &BigUint) -> Result<MonomialIdeal> {
    if q.is_zero() {
        return Err(Error::precondition("bracket power needs q ≥ 1"));
    }
    // Scaling preserves the antichain, so the result is already minimal.
    let gens = j.gens().iter().map(|g| g.scale(q)).collect();
    MonomialIdeal::new(j.dim(), gens)
}

/// `x^m ∈ J^{[q]}` iff `x^{⌊m/q⌋} ∈ J`.
pub fn bracket_member(m: &Monomial, j: &MonomialIdeal, q: &BigUint) -> Result<bool> {
    if q.is_zero() {
        return Err(Error::precondition("bracket power needs q ≥ 1"));
    }
    j.contains_monomial(&m.floor_div(q))
}

/// `C^e · I`: each generator `x^u` maps to `x^{⌊u/p^e⌋}`.
pub fn cartier_image(i: &MonomialIdeal, pp: &PrimePower) -> MonomialIdeal {
    let q = pp.value();
    let gens = i.gens().iter().map(|g| g.floor_div(q)).collect();
    MonomialIdeal::from_gens_unchecked(i.dim(), gens)
}

fn check_chain_input(a: &MonomialIdeal) -> Result<()> {
    if a.is_zero() {
        return Err(Error::precondition("a must be nonzero"));
    }
    if a.is_unit() {
        return Err(Error::precondition("a must be a proper ideal"));
    }
    Ok(())
}

/// The level-`e` ν-invariants below `r·p^e`, read off as the jumps of the
/// chain `C^e·a^n ⊋ C^e·a^{n+1}`.
pub fn nu_set_chain(a: &MonomialIdeal, pp: &PrimePower) -> Result<BTreeSet<BigUint>> {
    nu_set_chain_with_budget(a, pp, DEFAULT_CHAIN_BUDGET)
}

pub fn nu_set_chain_with_budget(
    a: &MonomialIdeal,
    pp: &PrimePower,
    budget: u64,
) -> Result<BTreeSet<BigUint>> {
    check_chain_input(a)?;
    let limit = BigUint::from(a.num_gens()) * pp.value();
    let limit = limit
        .to_u64()
        .filter(|&l| l <= budget)
        .ok_or_else(|| Error::resource(format!("chain length r·p^e = {limit}"), budget))?;
    chain_jumps(a, pp, limit)
}

/// Every `n < limit` with `C^e·a^n ≠ C^e·a^{n+1}`, without the `r·p^e` cut.
pub fn chain_jumps(a: &MonomialIdeal, pp: &PrimePower, limit: u64) -> Result<BTreeSet<BigUint>> {
    check_chain_input(a)?;
    let mut out = BTreeSet::new();
    let mut power = MonomialIdeal::unit(a.dim());
    let mut image = cartier_image(&power, pp);
    for n in 0..limit {
        power = power.multiply(a)?;
        let next = cartier_image(&power, pp);
        if next != image {
            out.insert(BigUint::from(n));
        }
        image = next;
    }
    Ok(out)
}
