//! Exact maximization of `sum(β)` over `β ∈ ℕ^r` subject to `A·β ≤ c`.
//!
//! Every ν-invariant against an irreducible ideal is one such program: the
//! rows are variables of the ambient ring, the columns are generators of the
//! ideal, and the caps are `q·b_i − 1`. Dimensions are tiny but caps grow
//! like `p^e`, so the solver branches on columns with an exact LP bound and
//! never enumerates values.

mod scalar;
mod simplex;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use scalar::Scalar;
use simplex::solve_packing_lp;

/// `max sum(β)` subject to `matrix · β ≤ caps`, `β ≥ 0` integral.
///
/// `matrix[i][j]` is the exponent of variable `i` in generator `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NuProblem {
    matrix: Vec<Vec<BigUint>>,
    caps: Vec<BigInt>,
    cols: usize,
}

impl NuProblem {
    pub fn new(matrix: Vec<Vec<BigUint>>, caps: Vec<BigInt>) -> Result<Self> {
        if matrix.len() != caps.len() {
            return Err(Error::Dimension {
                expected: matrix.len(),
                found: caps.len(),
            });
        }
        let cols = matrix.first().map_or(0, Vec::len);
        if let Some(bad) = matrix.iter().find(|row| row.len() != cols) {
            return Err(Error::Dimension {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(NuProblem { matrix, caps, cols })
    }

    /// Small-integer convenience constructor.
    pub fn from_i64(matrix: &[&[u64]], caps: &[i64]) -> Result<Self> {
        Self::new(
            matrix
                .iter()
                .map(|row| row.iter().map(|&x| BigUint::from(x)).collect())
                .collect(),
            caps.iter().map(|&c| BigInt::from(c)).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn matrix(&self) -> &[Vec<BigUint>] {
        &self.matrix
    }

    pub fn caps(&self) -> &[BigInt] {
        &self.caps
    }

    fn check_bounded(&self) -> Result<()> {
        for j in 0..self.cols {
            if self.matrix.iter().all(|row| row[j].is_zero()) {
                return Err(Error::precondition(format!(
                    "column {j} has no positive entry; the program is unbounded"
                )));
            }
        }
        Ok(())
    }

    fn signed_matrix(&self) -> Vec<Vec<BigInt>> {
        self.matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| BigInt::from_biguint(Sign::Plus, x.clone()))
                    .collect()
            })
            .collect()
    }

    /// Whether `witness` satisfies every constraint.
    pub fn is_feasible(&self, witness: &[BigUint]) -> bool {
        witness.len() == self.cols
            && self.matrix.iter().zip(&self.caps).all(|(row, cap)| {
                let lhs: BigUint = row.iter().zip(witness).map(|(a, b)| a * b).sum();
                BigInt::from(lhs) <= *cap
            })
    }
}

/// An optimum with its lexicographically smallest optimal witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IlpResult {
    pub value: BigUint,
    pub witness: Vec<BigUint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IlpOutcome {
    Optimal(IlpResult),
    /// Some cap is negative, so not even `β = 0` is feasible.
    Infeasible,
}

impl IlpOutcome {
    pub fn value(&self) -> Option<&BigUint> {
        match self {
            IlpOutcome::Optimal(r) => Some(&r.value),
            IlpOutcome::Infeasible => None,
        }
    }

    pub fn into_optimal(self) -> Option<IlpResult> {
        match self {
            IlpOutcome::Optimal(r) => Some(r),
            IlpOutcome::Infeasible => None,
        }
    }
}

/// Exact optimum by branch-and-bound, with the lexicographically smallest
/// optimal witness.
pub fn maximize(prob: &NuProblem) -> Result<IlpOutcome> {
    prob.check_bounded()?;
    let a = prob.signed_matrix();
    let Some(value) = solve_value(&a, &prob.caps) else {
        return Ok(IlpOutcome::Infeasible);
    };
    let witness = lex_smallest_witness(&a, &prob.caps, &value);
    let result = IlpResult {
        value: value.to_biguint().expect("optimum is nonnegative"),
        witness,
    };
    debug_assert!(prob.is_feasible(&result.witness));
    debug_assert_eq!(result.witness.iter().sum::<BigUint>(), result.value);
    Ok(IlpOutcome::Optimal(result))
}

/// The optimum alone, `None` when infeasible. Cheaper than [`maximize`].
pub fn optimum_value(prob: &NuProblem) -> Result<Option<BigUint>> {
    prob.check_bounded()?;
    let a = prob.signed_matrix();
    Ok(solve_value(&a, &prob.caps).map(|v| v.to_biguint().expect("nonnegative")))
}

/// Reference solver enumerating every feasible point, coordinate 0 outermost.
pub fn brute_force_maximize(prob: &NuProblem) -> Result<IlpOutcome> {
    const PER_VAR: u64 = 10_000;
    const VISITS: u64 = 10_000_000;

    prob.check_bounded()?;
    if prob.caps.iter().any(|c| c.sign() == Sign::Minus) {
        return Ok(IlpOutcome::Infeasible);
    }
    let to_i64 = |x: &BigInt| {
        x.to_i64()
            .ok_or_else(|| Error::resource("brute-force entry size", i64::MAX))
    };
    let a: Vec<Vec<i64>> = prob
        .signed_matrix()
        .iter()
        .map(|row| row.iter().map(to_i64).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let caps: Vec<i64> = prob.caps.iter().map(to_i64).collect::<Result<_>>()?;
    for j in 0..prob.cols {
        let b = (0..a.len())
            .filter(|&i| a[i][j] > 0)
            .map(|i| caps[i] / a[i][j])
            .min()
            .expect("bounded column") as u64;
        if b > PER_VAR {
            return Err(Error::resource("brute-force per-variable range", PER_VAR));
        }
    }

    struct Walk<'a> {
        a: &'a [Vec<i64>],
        beta: Vec<i64>,
        best: Option<(i64, Vec<i64>)>,
        visits: u64,
    }
    impl Walk<'_> {
        fn go(&mut self, j: usize, residual: &mut [i64], sum: i64) -> Result<()> {
            self.visits += 1;
            if self.visits > VISITS {
                return Err(Error::resource("brute-force enumeration size", VISITS));
            }
            if j == self.beta.len() {
                // Lex order of visits: the first optimum seen is lex-smallest.
                if self.best.as_ref().is_none_or(|(v, _)| sum > *v) {
                    self.best = Some((sum, self.beta.clone()));
                }
                return Ok(());
            }
            let mut taken = 0;
            loop {
                self.beta[j] = taken;
                self.go(j + 1, residual, sum + taken)?;
                let fits = self.a.iter().zip(residual.iter()).all(|(row, &c)| row[j] <= c);
                if !fits {
                    break;
                }
                for (row, c) in self.a.iter().zip(residual.iter_mut()) {
                    *c -= row[j];
                }
                taken += 1;
            }
            for (row, c) in self.a.iter().zip(residual.iter_mut()) {
                *c += row[j] * taken;
            }
            self.beta[j] = 0;
            Ok(())
        }
    }

    let mut walk = Walk {
        a: &a,
        beta: vec![0; prob.cols],
        best: None,
        visits: 0,
    };
    let mut residual = caps.clone();
    walk.go(0, &mut residual, 0)?;
    let (value, witness) = walk.best.expect("β = 0 is feasible");
    Ok(IlpOutcome::Optimal(IlpResult {
        value: BigUint::from(value as u64),
        witness: witness.iter().map(|&b| BigUint::from(b as u64)).collect(),
    }))
}

/// Optimal value over all columns of `a`, or `None` if infeasible.
fn solve_value(a: &[Vec<BigInt>], caps: &[BigInt]) -> Option<BigInt> {
    if caps.iter().any(|c| c.sign() == Sign::Minus) {
        return None;
    }
    if let Some(v) = try_solve::<i128>(a, caps) {
        return Some(v.to_big());
    }
    Some(try_solve::<BigInt>(a, caps).expect("big integers do not overflow"))
}

fn try_solve<T: Scalar>(a: &[Vec<BigInt>], caps: &[BigInt]) -> Option<T> {
    let a: Vec<Vec<T>> = a
        .iter()
        .map(|row| row.iter().map(T::from_big).collect::<Option<_>>())
        .collect::<Option<_>>()?;
    let caps: Vec<T> = caps.iter().map(T::from_big).collect::<Option<_>>()?;
    branch_and_bound(&a, &caps)
}

struct Node<T> {
    lower: Vec<T>,
    upper: Vec<T>,
}

/// Depth-first branch-and-bound. Caps must be nonnegative. `None` means
/// overflow in `T`.
fn branch_and_bound<T: Scalar>(a: &[Vec<T>], caps: &[T]) -> Option<T> {
    let n = a.len();
    let r = a.first().map_or(0, Vec::len);
    if r == 0 {
        return Some(T::zero());
    }

    let mut root_upper = Vec::with_capacity(r);
    for j in 0..r {
        let mut u: Option<T> = None;
        for i in 0..n {
            if a[i][j].is_positive() {
                let b = caps[i].div_floor(&a[i][j])?;
                u = Some(match u {
                    Some(cur) if cur <= b => cur,
                    _ => b,
                });
            }
        }
        root_upper.push(u.expect("bounded column"));
    }

    let mut best = T::zero();
    let mut stack = vec![Node {
        lower: vec![T::zero(); r],
        upper: root_upper,
    }];

    'nodes: while let Some(node) = stack.pop() {
        let mut c = caps.to_vec();
        for i in 0..n {
            for j in 0..r {
                if !node.lower[j].is_zero() {
                    c[i] = c[i].sub(&a[i][j].mul(&node.lower[j])?)?;
                }
            }
            if c[i].is_negative() {
                continue 'nodes;
            }
        }
        let mut lower_sum = T::zero();
        for l in &node.lower {
            lower_sum = lower_sum.add(l)?;
        }

        let mut up = Vec::with_capacity(r);
        let mut trivial = lower_sum.clone();
        for j in 0..r {
            let mut u = node.upper[j].sub(&node.lower[j])?;
            if u.is_negative() {
                continue 'nodes;
            }
            for i in 0..n {
                if a[i][j].is_positive() {
                    let b = c[i].div_floor(&a[i][j])?;
                    if b < u {
                        u = b;
                    }
                }
            }
            trivial = trivial.add(&u)?;
            up.push(u);
        }
        if trivial <= best {
            continue;
        }

        let lp = solve_packing_lp(a, &c, &up)?;
        let bound = lower_sum.add(&lp.value_num.div_floor(&lp.denom)?)?;
        if bound <= best {
            continue;
        }

        // Round the LP point down, then fill greedily.
        let mut x = Vec::with_capacity(r);
        for v in &lp.x_num {
            x.push(v.div_floor(&lp.denom)?);
        }
        let mut slack = c.clone();
        for i in 0..n {
            for j in 0..r {
                slack[i] = slack[i].sub(&a[i][j].mul(&x[j])?)?;
            }
        }
        for j in 0..r {
            let mut add = up[j].sub(&x[j])?;
            for i in 0..n {
                if a[i][j].is_positive() {
                    let b = slack[i].div_floor(&a[i][j])?;
                    if b < add {
                        add = b;
                    }
                }
            }
            if add.is_positive() {
                x[j] = x[j].add(&add)?;
                for i in 0..n {
                    slack[i] = slack[i].sub(&a[i][j].mul(&add)?)?;
                }
            }
        }
        let mut heuristic = lower_sum.clone();
        for v in &x {
            heuristic = heuristic.add(v)?;
        }
        if heuristic > best {
            best = heuristic;
        }
        if best >= bound {
            continue;
        }

        let Some(j) = (0..r).find(|&j| !lp.x_num[j].divisible_by(&lp.denom)) else {
            continue;
        };
        let split = node.lower[j].add(&lp.x_num[j].div_floor(&lp.denom)?)?;
        let mut down = Node {
            lower: node.lower.clone(),
            upper: node.upper.clone(),
        };
        down.upper[j] = split.clone();
        let mut upward = node;
        upward.lower[j] = split.add(&T::one())?;
        stack.push(down);
        stack.push(upward);
    }
    Some(best)
}

/// Fixes coordinates left to right at their smallest values that still admit
/// a completion reaching `value`.
///
/// With `f(t)` the best completion after setting `β_j = t`, `t + f(t) ≤ value`
/// and `f` is nonincreasing, so iterating `t ← value − f(t)` from `t = 0`
/// climbs monotonically to the least feasible `t`.
fn lex_smallest_witness(a: &[Vec<BigInt>], caps: &[BigInt], value: &BigInt) -> Vec<BigUint> {
    let r = a.first().map_or(0, Vec::len);
    let mut remaining_caps = caps.to_vec();
    let mut remaining = value.clone();
    let mut witness = Vec::with_capacity(r);
    for j in 0..r {
        let tail: Vec<Vec<BigInt>> = a.iter().map(|row| row[j + 1..].to_vec()).collect();
        let mut t = <BigInt as Zero>::zero();
        loop {
            let trial: Vec<BigInt> = remaining_caps
                .iter()
                .zip(a)
                .map(|(c, row)| c - &row[j] * &t)
                .collect();
            let f = solve_value(&tail, &trial).expect("iterates stay below the least feasible t");
            if &t + &f == remaining {
                remaining_caps = trial;
                break;
            }
            t = &remaining - f;
        }
        remaining -= &t;
        witness.push(t.to_biguint().expect("nonnegative"));
    }
    witness
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    /// Independent oracle: enumerates every β in the box directly.
    fn enumerate(a: &[&[u64]], caps: &[i64]) -> (u64, Vec<u64>) {
        let r = a[0].len();
        let bound: Vec<u64> = (0..r)
            .map(|j| {
                (0..a.len())
                    .filter(|&i| a[i][j] > 0)
                    .map(|i| caps[i] as u64 / a[i][j])
                    .min()
                    .unwrap()
            })
            .collect();
        let mut best = (0, vec![0; r]);
        let mut stack = vec![vec![]];
        while let Some(prefix) = stack.pop() {
            if prefix.len() == r {
                let ok = a.iter().zip(caps).all(|(row, &c)| {
                    row.iter().zip(&prefix).map(|(x, y)| x * y).sum::<u64>() as i64 <= c
                });
                let s: u64 = prefix.iter().sum();
                if ok && (s > best.0 || (s == best.0 && prefix < best.1)) {
                    best = (s, prefix);
                }
                continue;
            }
            for v in 0..=bound[prefix.len()] {
                let mut p = prefix.clone();
                p.push(v);
                stack.push(p);
            }
        }
        best
    }

    #[test]
    fn separable_example() {
        let p = NuProblem::from_i64(&[&[2, 0], &[0, 3]], &[9, 9]).unwrap();
        assert_eq!(enumerate(&[&[2, 0], &[0, 3]], &[9, 9]), (7, vec![4, 3]));
        let res = maximize(&p).unwrap().into_optimal().unwrap();
        assert_eq!(res.value, BigUint::from(7u32));
        assert_eq!(res.witness, big(&[4, 3]));
    }

    #[test]
    fn single_variable() {
        for q in [1i64, 2, 7, 1000, 1 << 40] {
            let p = NuProblem::from_i64(&[&[1]], &[q - 1]).unwrap();
            assert_eq!(
                maximize(&p).unwrap().value().unwrap(),
                &BigUint::from((q - 1) as u64)
            );
        }
    }

    #[test]
    fn cubic_example_at_q5() {
        let a: [&[u64]; 3] = [&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]];
        // Closed form (9q − 5)/4 at q = 5 is 10; confirm by enumeration.
        assert_eq!((9 * 5 - 5) / 4, 10);
        let (v, w) = enumerate(&a, &[14, 14, 14]);
        assert_eq!(v, 10);
        let res = maximize(&NuProblem::from_i64(&a, &[14, 14, 14]).unwrap())
            .unwrap()
            .into_optimal()
            .unwrap();
        assert_eq!(res.value, BigUint::from(10u32));
        assert_eq!(res.witness, big(&w));
    }

    #[test]
    fn trivial_and_separable_brute_force() {
        let p = NuProblem::from_i64(&[&[1, 1]], &[0]).unwrap();
        let res = brute_force_maximize(&p).unwrap().into_optimal().unwrap();
        assert_eq!(res.value, BigUint::zero());
        assert_eq!(res.witness, big(&[0, 0]));
        let p = NuProblem::from_i64(&[&[1, 0], &[0, 1]], &[2, 3]).unwrap();
        let res = brute_force_maximize(&p).unwrap().into_optimal().unwrap();
        assert_eq!(res.value, BigUint::from(5u32));
        assert_eq!(res.witness, big(&[2, 3]));
    }

    #[test]
    fn error_paths() {
        let unbounded = NuProblem::from_i64(&[&[1, 0]], &[5]).unwrap();
        assert!(matches!(maximize(&unbounded), Err(Error::Precondition(_))));
        assert!(matches!(
            brute_force_maximize(&unbounded),
            Err(Error::Precondition(_))
        ));
        let negative = NuProblem::from_i64(&[&[1, 1], &[1, 0]], &[3, -1]).unwrap();
        assert_eq!(maximize(&negative).unwrap(), IlpOutcome::Infeasible);
        assert_eq!(brute_force_maximize(&negative).unwrap(), IlpOutcome::Infeasible);
        let zero = NuProblem::from_i64(&[&[1, 1]], &[0]).unwrap();
        assert_eq!(maximize(&zero).unwrap().value(), Some(&BigUint::zero()));
        let too_big = NuProblem::from_i64(&[&[1, 0], &[0, 1]], &[1_000_000, 3]).unwrap();
        assert!(matches!(
            brute_force_maximize(&too_big),
            Err(Error::Resource { .. })
        ));
        assert!(NuProblem::from_i64(&[&[1, 0], &[1]], &[1, 1]).is_err());
        assert!(NuProblem::from_i64(&[&[1, 0]], &[1, 1]).is_err());
    }

    #[test]
    fn big_caps_fall_back_to_bigint() {
        // Caps near 2^200 overflow the i128 fast path.
        let cap: BigInt = (BigInt::from(1) << 200u32) - 1;
        let p = NuProblem::new(
            vec![big(&[2, 1, 1]), big(&[1, 2, 1]), big(&[1, 1, 2])],
            vec![cap.clone(), cap.clone(), cap.clone()],
        )
        .unwrap();
        let res = maximize(&p).unwrap().into_optimal().unwrap();
        // Summing the rows gives 4·sum ≤ 3·cap.
        let expected = (BigInt::from(3) * &cap) / 4;
        assert_eq!(BigInt::from(res.value.clone()), expected);
        assert!(p.is_feasible(&res.witness));
    }

    fn random_problem(rng: &mut ChaCha8Rng) -> NuProblem {
        let n = rng.gen_range(1..=4);
        let r = rng.gen_range(1..=4);
        let mut m: Vec<Vec<u64>> = (0..n)
            .map(|_| (0..r).map(|_| rng.gen_range(0..=5)).collect())
            .collect();
        for j in 0..r {
            if m.iter().all(|row| row[j] == 0) {
                let i = rng.gen_range(0..n);
                m[i][j] = rng.gen_range(1..=5);
            }
        }
        let caps: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=60)).collect();
        let rows: Vec<&[u64]> = m.iter().map(Vec::as_slice).collect();
        NuProblem::from_i64(&rows, &caps).unwrap()
    }

    #[test]
    fn agrees_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let p = random_problem(&mut rng);
            assert_eq!(maximize(&p).unwrap(), brute_force_maximize(&p).unwrap(), "{p:?}");
        }
    }

    #[test]
    fn monotone_in_caps() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let p = random_problem(&mut rng);
            let i = rng.gen_range(0..p.rows());
            let mut caps = p.caps().to_vec();
            caps[i] += rng.gen_range(1..20);
            let bigger = NuProblem::new(p.matrix().to_vec(), caps).unwrap();
            assert!(optimum_value(&bigger).unwrap() >= optimum_value(&p).unwrap());
        }
    }

    #[test]
    fn scaled_caps_dominate() {
        // value(q·b − 1) + 1 ≥ value(b − 1) + 1 for q ≥ 1.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let p = random_problem(&mut rng);
            let b: Vec<i64> = (0..p.rows()).map(|_| rng.gen_range(1..=4)).collect();
            let q: i64 = rng.gen_range(1..=6);
            let at = |scale: i64| {
                let caps = b.iter().map(|&x| BigInt::from(scale * x - 1)).collect();
                let prob = NuProblem::new(p.matrix().to_vec(), caps).unwrap();
                optimum_value(&prob).unwrap().unwrap()
            };
            assert!(at(q) >= at(1));
        }
    }
}
