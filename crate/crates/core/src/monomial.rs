//! Monomials and monomial ideals over an implicit coefficient ring.
//!
//! Coefficients never matter for monomial ideals, so everything here is
//! combinatorics on exponent vectors. Ideals are stored by their minimal
//! generators, sorted, which makes structural equality ideal equality.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// An exponent vector `x1^e1 * ... * xn^en`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exponents: Vec<BigUint>,
}

impl Monomial {
    pub fn new(exponents: Vec<BigUint>) -> Self {
        Monomial { exponents }
    }

    pub fn from_u64s(exponents: &[u64]) -> Self {
        Monomial {
            exponents: exponents.iter().map(|&e| BigUint::from(e)).collect(),
        }
    }

    /// The monomial `1` in `n` variables.
    pub fn one(n: usize) -> Self {
        Monomial {
            exponents: vec![BigUint::zero(); n],
        }
    }

    /// `x_i^e` in `n` variables.
    pub fn pure_power(n: usize, i: usize, e: BigUint) -> Self {
        let mut m = Monomial::one(n);
        m.exponents[i] = e;
        m
    }

    pub fn exponents(&self) -> &[BigUint] {
        &self.exponents
    }

    pub fn exponent(&self, i: usize) -> &BigUint {
        &self.exponents[i]
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> BigUint {
        self.exponents.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exponents.iter().all(Zero::is_zero)
    }

    /// Indices of the variables that occur with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exponents
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(i, _)| i)
    }

    fn check_dim(&self, other: &Monomial) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    /// Componentwise `self <= other`, i.e. `self | other`.
    pub fn divides(&self, other: &Monomial) -> Result<bool> {
        self.check_dim(other)?;
        Ok(self.divides_unchecked(other))
    }

    pub(crate) fn divides_unchecked(&self, other: &Monomial) -> bool {
        self.exponents
            .iter()
            .zip(&other.exponents)
            .all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        self.check_dim(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Monomial) -> Monomial {
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Result<Monomial> {
        self.check_dim(other)?;
        Ok(Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a.max(b).clone())
                .collect(),
        })
    }

    /// Every exponent multiplied by `q`.
    pub fn scale(&self, q: &BigUint) -> Monomial {
        Monomial {
            exponents: self.exponents.iter().map(|e| e * q).collect(),
        }
    }

    /// Componentwise floor division by `q`.
    pub fn floor_div(&self, q: &BigUint) -> Monomial {
        Monomial {
            exponents: self.exponents.iter().map(|e| e / q).collect(),
        }
    }
}

/// A monomial ideal, stored as the antichain of its minimal generators.
///
/// The empty generator set is the zero ideal and the single generator `1`
/// is the unit ideal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialIdeal {
    n: usize,
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    /// Builds the ideal generated by `gens`, minimalizing them.
    pub fn new(n: usize, gens: Vec<Monomial>) -> Result<Self> {
        if n == 0 {
            return Err(Error::precondition("ambient dimension must be positive"));
        }
        for g in &gens {
            if g.dim() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: g.dim(),
                });
            }
        }
        Ok(Self::from_gens_unchecked(n, gens))
    }

    /// Convenience constructor from small exponent rows.
    pub fn from_exponents(n: usize, rows: &[&[u64]]) -> Result<Self> {
        Self::new(n, rows.iter().map(|r| Monomial::from_u64s(r)).collect())
    }

    pub(crate) fn from_gens_unchecked(n: usize, gens: Vec<Monomial>) -> Self {
        MonomialIdeal {
            n,
            gens: minimal_antichain(gens),
        }
    }

    pub fn zero(n: usize) -> Self {
        MonomialIdeal { n, gens: Vec::new() }
    }

    pub fn unit(n: usize) -> Self {
        MonomialIdeal {
            n,
            gens: vec![Monomial::one(n)],
        }
    }

    /// The irreducible ideal `(x_i^{c_i})` for all `i`; zero entries are skipped.
    pub fn pure_powers(exps: &[BigUint]) -> Self {
        let n = exps.len();
        let gens = exps
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(i, e)| Monomial::pure_power(n, i, e.clone()))
            .collect();
        Self::from_gens_unchecked(n, gens)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_one()
    }

    /// Largest total degree among the minimal generators.
    pub fn max_degree(&self) -> BigUint {
        self.gens
            .iter()
            .map(Monomial::degree)
            .max()
            .unwrap_or_default()
    }

    /// Sum of all generator exponents; used to rank witness ideals.
    pub fn total_degree(&self) -> BigUint {
        self.gens.iter().map(Monomial::degree).sum()
    }

    /// Whether every generator is a pure power of one variable.
    pub fn is_irreducible_form(&self) -> bool {
        self.gens.iter().all(|g| g.support().count() == 1)
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if self.n != found {
            return Err(Error::Dimension {
                expected: self.n,
                found,
            });
        }
        Ok(())
    }

    pub fn contains_monomial(&self, m: &Monomial) -> Result<bool> {
        self.check_dim(m.dim())?;
        Ok(self.contains_unchecked(m))
    }

    pub(crate) fn contains_unchecked(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides_unchecked(m))
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &MonomialIdeal) -> Result<bool> {
        self.check_dim(other.n)?;
        Ok(other.gens.iter().all(|g| self.contains_unchecked(g)))
    }

    pub fn multiply(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_dim(other.n)?;
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.mul_unchecked(b));
            }
        }
        Ok(Self::from_gens_unchecked(self.n, gens))
    }

    /// `self^s` by repeated multiplication, minimalizing after every step.
    pub fn power(&self, s: u64) -> MonomialIdeal {
        let mut acc = MonomialIdeal::unit(self.n);
        for _ in 0..s {
            acc = acc
                .multiply(self)
                .expect("dimensions agree within one ideal");
        }
        acc
    }

    pub fn intersect(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_dim(other.n)?;
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.lcm(b)?);
            }
        }
        Ok(Self::from_gens_unchecked(self.n, gens))
    }

    /// Whether `a ⊆ √self`: every generator of `a` is divisible by the
    /// support of some generator of `self`.
    pub fn radical_contains(&self, a: &MonomialIdeal) -> Result<bool> {
        self.check_dim(a.n)?;
        if self.is_unit() {
            return Err(Error::precondition("J must be a proper ideal"));
        }
        Ok(a.gens.iter().all(|f| {
            self.gens
                .iter()
                .any(|g| g.support().all(|i| !f.exponents[i].is_zero()))
        }))
    }

    /// Irredundant decomposition into ideals generated by pure powers.
    ///
    /// A generator `m` with `x_i^u || m` splits as
    /// `(G, m) = (G, x_i^u) ∩ (G, m / x_i^u)` until every generator is a
    /// pure power; components containing another component are dropped.
    pub fn irreducible_decomposition(&self) -> Result<Vec<MonomialIdeal>> {
        if self.is_zero() {
            return Err(Error::precondition(
                "irreducible decomposition of the zero ideal",
            ));
        }
        if self.is_unit() {
            return Err(Error::precondition(
                "irreducible decomposition of the unit ideal",
            ));
        }
        let mut pending = vec![self.clone()];
        let mut leaves: Vec<MonomialIdeal> = Vec::new();
        while let Some(ideal) = pending.pop() {
            let split = ideal
                .gens
                .iter()
                .position(|g| g.support().nth(1).is_some());
            let Some(idx) = split else {
                if !leaves.contains(&ideal) {
                    leaves.push(ideal);
                }
                continue;
            };
            let m = &ideal.gens[idx];
            let var = m.support().next().expect("support has two entries");
            let rest: Vec<Monomial> = ideal
                .gens
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != idx)
                .map(|(_, g)| g.clone())
                .collect();

            let mut left = rest.clone();
            left.push(Monomial::pure_power(self.n, var, m.exponents[var].clone()));
            let mut right = rest;
            let mut cofactor = m.clone();
            cofactor.exponents[var] = BigUint::zero();
            right.push(cofactor);

            pending.push(Self::from_gens_unchecked(self.n, left));
            pending.push(Self::from_gens_unchecked(self.n, right));
        }

        let mut components: Vec<MonomialIdeal> = Vec::new();
        for (i, k) in leaves.iter().enumerate() {
            let redundant = leaves.iter().enumerate().any(|(j, other)| {
                j != i && k.contains_ideal(other).unwrap_or(false) && k != other
            });
            if !redundant {
                components.push(k.clone());
            }
        }
        components.sort();
        components.dedup();
        Ok(components)
    }
}

/// The `≤`-minimal elements of `gens`, deduplicated and sorted.
pub fn minimal_antichain(gens: Vec<Monomial>) -> Vec<Monomial> {
    let mut keyed: Vec<(BigUint, Monomial)> = gens.into_iter().map(|g| (g.degree(), g)).collect();
    keyed.sort();
    keyed.dedup();
    let mut kept: Vec<Monomial> = Vec::with_capacity(keyed.len());
    let mut lower = 0;
    let mut current: Option<BigUint> = None;
    for (deg, g) in keyed {
        if current.as_ref() != Some(&deg) {
            lower = kept.len();
            current = Some(deg);
        }
        // Only strictly smaller degrees can divide `g`.
        if !kept[..lower].iter().any(|k| k.divides_unchecked(&g)) {
            kept.push(g);
        }
    }
    kept.sort();
    kept
}

/// Minimalizes a generator list into an ideal of dimension `n`.
pub fn minimalize(n: usize, gens: Vec<Monomial>) -> Result<MonomialIdeal> {
    MonomialIdeal::new(n, gens)
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, e) in self.exponents.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e.is_one() {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, g) in self.gens.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u64]) -> Monomial {
        Monomial::from_u64s(e)
    }

    fn ideal(n: usize, rows: &[&[u64]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(n, rows).unwrap()
    }

    #[test]
    fn divides_examples() {
        assert!(m(&[1, 1]).divides(&m(&[2, 1])).unwrap());
        assert!(!m(&[2, 0]).divides(&m(&[1, 3])).unwrap());
        assert!(m(&[0, 0]).divides(&m(&[5, 7])).unwrap());
        assert!(matches!(
            m(&[1]).divides(&m(&[1, 2])),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn containment_examples() {
        let i = ideal(2, &[&[1, 1], &[0, 2]]);
        assert!(i.contains_monomial(&m(&[2, 1])).unwrap());
        assert!(!ideal(1, &[&[2]]).contains_monomial(&m(&[1])).unwrap());
        assert!(!MonomialIdeal::zero(2).contains_monomial(&m(&[3, 3])).unwrap());

        let x = ideal(2, &[&[1, 0]]);
        assert!(x.contains_ideal(&ideal(2, &[&[2, 0], &[1, 1]])).unwrap());
        let big = ideal(2, &[&[2, 0], &[0, 1]]);
        assert!(!big.contains_ideal(&x).unwrap());
        assert!(big.contains_ideal(&big).unwrap());
        assert!(big.contains_ideal(&ideal(3, &[])).is_err());
    }

    #[test]
    fn minimalize_examples() {
        let i = minimalize(2, vec![m(&[2, 0]), m(&[3, 0]), m(&[1, 1])]).unwrap();
        assert_eq!(i.gens(), &[m(&[1, 1]), m(&[2, 0])]);
        assert!(minimalize(2, vec![]).unwrap().is_zero());
        let anti = ideal(2, &[&[2, 0], &[0, 3]]);
        assert_eq!(minimalize(2, anti.gens().to_vec()).unwrap(), anti);
    }

    #[test]
    fn multiply_examples() {
        let x = ideal(2, &[&[1, 0]]);
        let y = ideal(2, &[&[0, 1]]);
        assert_eq!(x.multiply(&y).unwrap(), ideal(2, &[&[1, 1]]));
        let i = ideal(2, &[&[2, 0], &[1, 1]]);
        assert_eq!(i.multiply(&MonomialIdeal::unit(2)).unwrap(), i);
        let maxi = ideal(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(
            maxi.multiply(&maxi).unwrap(),
            ideal(2, &[&[2, 0], &[1, 1], &[0, 2]])
        );
    }

    #[test]
    fn power_examples() {
        let a = ideal(2, &[&[2, 0], &[0, 3]]);
        assert!(a.power(0).is_unit());
        assert_eq!(a.power(2), ideal(2, &[&[4, 0], &[2, 3], &[0, 6]]));

        // Brute-force expansion over all (u, v, w) with u + v + w = 2.
        let b = ideal(3, &[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        let mut expanded = Vec::new();
        for g in b.gens() {
            for h in b.gens() {
                expanded.push(g.mul(h).unwrap());
            }
        }
        let expected = minimalize(3, expanded).unwrap();
        assert_eq!(b.power(2), expected);
        assert_eq!(expected.num_gens(), 6);
        assert!(expected.contains_monomial(&m(&[1, 1, 2])).unwrap());
    }

    #[test]
    fn radical_examples() {
        let j = ideal(2, &[&[3, 0], &[0, 3]]);
        assert!(j.radical_contains(&ideal(2, &[&[2, 0], &[0, 3]])).unwrap());
        assert!(!ideal(2, &[&[2, 0]])
            .radical_contains(&ideal(2, &[&[0, 1]]))
            .unwrap());
        assert!(!ideal(2, &[&[1, 1]])
            .radical_contains(&ideal(2, &[&[1, 0]]))
            .unwrap());
        assert!(MonomialIdeal::unit(2)
            .radical_contains(&ideal(2, &[&[1, 0]]))
            .is_err());
    }

    #[test]
    fn decomposition_examples() {
        let j = ideal(2, &[&[2, 0], &[1, 1]]);
        assert_eq!(
            j.irreducible_decomposition().unwrap(),
            vec![ideal(2, &[&[2, 0], &[0, 1]]), ideal(2, &[&[1, 0]])]
        );
        let k = ideal(2, &[&[2, 0], &[0, 3]]);
        assert_eq!(k.irreducible_decomposition().unwrap(), vec![k.clone()]);
        let xy = ideal(2, &[&[1, 1]]);
        assert_eq!(
            xy.irreducible_decomposition().unwrap(),
            vec![ideal(2, &[&[0, 1]]), ideal(2, &[&[1, 0]])]
        );
        assert!(MonomialIdeal::zero(2).irreducible_decomposition().is_err());
        assert!(MonomialIdeal::unit(2).irreducible_decomposition().is_err());
    }

    #[test]
    fn display_format() {
        let a = ideal(3, &[&[2, 0, 1], &[0, 3, 0]]);
        assert_eq!(a.to_string(), "(x2^3, x1^2*x3)");
        assert_eq!(MonomialIdeal::unit(2).to_string(), "(1)");
        assert_eq!(MonomialIdeal::zero(2).to_string(), "()");
    }

    fn small_ideal(n: usize) -> impl Strategy<Value = MonomialIdeal> {
        prop::collection::vec(prop::collection::vec(0u64..=3, n), 1..=4).prop_map(move |rows| {
            MonomialIdeal::new(n, rows.iter().map(|r| Monomial::from_u64s(r)).collect()).unwrap()
        })
    }

    fn proper_ideal(n: usize) -> impl Strategy<Value = MonomialIdeal> {
        small_ideal(n).prop_filter("proper", |i| !i.is_unit())
    }

    fn all_monomials(n: usize, max: u64) -> Vec<Monomial> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v: Vec<u64>| {
                    (0..=max).map(move |e| {
                        let mut w = v.clone();
                        w.push(e);
                        w
                    })
                })
                .collect();
        }
        out.iter().map(|v| Monomial::from_u64s(v)).collect()
    }

    proptest! {
        #[test]
        fn minimalize_idempotent_and_order_free(i in small_ideal(3), seed in any::<u64>()) {
            let mut gens = i.gens().to_vec();
            gens.push(Monomial::from_u64s(&[3, 3, 3]));
            let k = (seed as usize) % gens.len().max(1);
            gens.rotate_left(k);
            let a = minimalize(3, gens.clone()).unwrap();
            gens.reverse();
            let b = minimalize(3, gens).unwrap();
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(minimalize(3, a.gens().to_vec()).unwrap(), a);
        }

        #[test]
        fn multiply_commutative_associative(i in small_ideal(3), k in small_ideal(3), l in small_ideal(2)) {
            prop_assert_eq!(i.multiply(&k).unwrap(), k.multiply(&i).unwrap());
            let i2 = MonomialIdeal::new(2, i.gens().iter().map(|g| Monomial::new(g.exponents()[..2].to_vec())).collect()).unwrap();
            let k2 = MonomialIdeal::new(2, k.gens().iter().map(|g| Monomial::new(g.exponents()[1..].to_vec())).collect()).unwrap();
            prop_assert_eq!(
                i2.multiply(&k2).unwrap().multiply(&l).unwrap(),
                i2.multiply(&k2.multiply(&l).unwrap()).unwrap()
            );
            // I·K contains g·I for every generator g of K.
            let prod = i.multiply(&k).unwrap();
            for g in k.gens() {
                let shifted = MonomialIdeal::new(3, i.gens().iter().map(|h| h.mul(g).unwrap()).collect()).unwrap();
                prop_assert!(prod.contains_ideal(&shifted).unwrap());
            }
        }

        #[test]
        fn power_is_iterated_multiply(i in small_ideal(2), s in 0u64..5) {
            prop_assert_eq!(i.power(s + 1), i.power(s).multiply(&i).unwrap());
        }

        #[test]
        fn decomposition_matches_membership(j in proper_ideal(3)) {
            let comps = j.irreducible_decomposition().unwrap();
            for c in &comps {
                prop_assert!(c.is_irreducible_form());
            }
            // Irredundant: dropping any component changes the intersection.
            for skip in 0..comps.len() {
                if comps.len() == 1 { break; }
                for (t, c) in comps.iter().enumerate() {
                    if t != skip {
                        prop_assert!(!comps[skip].contains_ideal(c).unwrap());
                    }
                }
            }
            for mono in all_monomials(3, 4) {
                let direct = j.contains_monomial(&mono).unwrap();
                let via = comps.iter().all(|c| c.contains_monomial(&mono).unwrap());
                prop_assert_eq!(direct, via);
            }
        }

        #[test]
        fn radical_agrees_with_power_test(j in proper_ideal(3), a in proper_ideal(3)) {
            let fast = j.radical_contains(&a).unwrap();
            let bound = 3 * 3 + 1;
            let brute = (0..=bound).any(|n| j.contains_ideal(&a.power(n)).unwrap());
            prop_assert_eq!(fast, brute);
        }
    }
}
