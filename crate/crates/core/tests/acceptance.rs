//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bsroots_core::bs::recheck_certificate;
use bsroots_core::frobenius::{bracket_power, cartier_image, chain_jumps, nu_set_chain};
use bsroots_core::ilp::{brute_force_maximize, maximize, NuProblem};
use bsroots_core::nu::{default_grid, nu, nu_brute, nu_set_grid, NuQuery};
use bsroots_core::padic::{detect_period, digits_of_rational, rational_from_expansion};
use bsroots_core::*;
use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ideal(n: usize, rows: &[&[u64]]) -> MonomialIdeal {
    MonomialIdeal::from_exponents(n, rows).unwrap()
}

fn ex1() -> MonomialIdeal {
    ideal(2, &[&[2, 0], &[0, 3]])
}

fn ex2() -> MonomialIdeal {
    ideal(3, &[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]])
}

fn cubic() -> MonomialIdeal {
    ideal(3, &[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]])
}

fn roots(xs: &[(i64, i64)]) -> BTreeSet<Rational> {
    xs.iter().map(|&(n, d)| Rational::from_i64s(n, d).unwrap()).collect()
}

fn show(s: &BTreeSet<Rational>) -> String {
    let v: Vec<String> = s.iter().map(|r| r.to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn char_p_case(a: &MonomialIdeal, p: u64, want: &BTreeSet<Rational>, limit: Duration) -> Check {
    let t = Instant::now();
    let report = bs_roots(a, p, &BsConfig::default()).map_err(|e| e.to_string())?;
    let took = t.elapsed();
    let got = report.root_values();
    ensure(&got == want, || format!("p={p}: got {} want {}", show(&got), show(want)))?;
    ensure(report.all_certified(), || format!("p={p}: not all roots certified"))?;
    for r in &report.roots {
        let cert = r.certificate.as_ref().expect("certified");
        let ok = recheck_certificate(a, p, &r.value, cert).map_err(|e| e.to_string())?;
        ensure(ok, || format!("p={p}: certificate for {} fails one more exponent", r.value))?;
    }
    ensure(took <= limit, || format!("p={p}: took {took:.2?}"))?;
    Ok(format!("p={p} {} in {took:.2?}", show(&got)))
}

fn criterion_1() -> Check {
    let six = roots(&[(-5, 6), (-7, 6), (-4, 3), (-3, 2), (-5, 3), (-2, 1)]);
    let cases = [
        (2, roots(&[(-4, 3), (-5, 3), (-2, 1)])),
        (3, roots(&[(-3, 2), (-2, 1)])),
        (5, six.clone()),
        (7, six),
    ];
    let mut parts = vec![];
    for (p, want) in cases {
        parts.push(char_p_case(&ex1(), p, &want, Duration::from_secs(60))?);
    }
    Ok(parts.join("; "))
}

fn criterion_2() -> Check {
    let both = roots(&[(-3, 2), (-2, 1)]);
    let cases = [(2, roots(&[(-2, 1)])), (3, both.clone()), (5, both)];
    let mut parts = vec![];
    for (p, want) in cases {
        parts.push(char_p_case(&ex2(), p, &want, Duration::from_secs(60))?);
    }
    Ok(parts.join("; "))
}

fn criterion_3() -> Check {
    let t = Instant::now();
    let a = cubic();
    let j = ideal(3, &[&[3, 0, 0], &[0, 3, 0], &[0, 0, 3]]);
    let law = fit_affine_law(&a, &j, 4, 5, 5)
        .map_err(|e| e.to_string())?
        .ok_or("no law found")?;
    let (slope, intercept) = (Rational::from_i64s(9, 4).unwrap(), Rational::from_i64s(-5, 4).unwrap());
    ensure(law.slope == slope && law.intercept == intercept, || {
        format!("law {} q + {}", law.slope, law.intercept)
    })?;
    for (q, want) in [(5u64, 10u64), (9, 19)] {
        let v = nu(&NuQuery::new(a.clone(), j.clone(), BigUint::from(q)).unwrap()).map_err(|e| e.to_string())?;
        ensure(v == BigUint::from(want), || format!("nu at q={q} is {v}"))?;
    }
    let took = t.elapsed();
    ensure(took < Duration::from_secs(5), || format!("took {took:.2?}"))?;
    Ok(format!("slope 9/4, intercept -5/4, nu(5)=10, nu(9)=19 in {took:.2?}"))
}

fn criterion_4() -> Check {
    let cases = [
        ("(x1^2,x2^3)", ex1(), roots(&[(-5, 6), (-7, 6), (-4, 3), (-3, 2), (-5, 3), (-2, 1)])),
        ("(x1^2x2x3,...)", cubic(), roots(&[(-3, 4), (-5, 4), (-3, 2), (-1, 1)])),
        ("(x2x3,x1x3,x1x2)", ex2(), roots(&[(-3, 2), (-2, 1)])),
    ];
    let mut parts = vec![];
    for (name, a, want) in cases {
        let t = Instant::now();
        let got = char0_roots(&a, &Char0Config::default())
            .map_err(|e| e.to_string())?
            .root_values();
        let took = t.elapsed();
        ensure(got == want, || format!("{name}: got {} want {}", show(&got), show(&want)))?;
        ensure(took < Duration::from_secs(300), || format!("{name}: took {took:.2?}"))?;
        parts.push(format!("{name} {} in {took:.2?}", show(&got)));
    }
    Ok(parts.join("; "))
}

fn criterion_5() -> Check {
    let primes = [2, 3, 5, 7, 11, 13];
    let ex1_char0 = roots(&[(-5, 6), (-7, 6), (-4, 3), (-3, 2), (-5, 3), (-2, 1)]);
    // (ideal, expected char-p roots at p = 2 and p = 3)
    let cases = [
        ("ex1", ex1(), roots(&[(-4, 3), (-5, 3), (-2, 1)]), roots(&[(-3, 2), (-2, 1)])),
        ("ex2", ex2(), roots(&[(-2, 1)]), roots(&[(-3, 2), (-2, 1)])),
        ("cubic", cubic(), roots(&[(-1, 1)]), roots(&[(-3, 4), (-5, 4), (-3, 2), (-1, 1)])),
    ];
    let mut parts = vec![];
    for (name, a, at2, at3) in cases {
        let cmp = compare_char_p(&a, &primes, &BsConfig::default(), &Char0Config::default())
            .map_err(|e| e.to_string())?;
        if name == "ex1" {
            ensure(cmp.char0.root_values() == ex1_char0, || "ex1 char-0 set".into())?;
        }
        for c in &cmp.primes {
            let got = c.char_p.root_values();
            match c.p {
                2 | 3 => {
                    let want = if c.p == 2 { &at2 } else { &at3 };
                    ensure(&got == want, || {
                        format!("{name} p={}: got {} want {}", c.p, show(&got), show(want))
                    })?;
                    ensure(c.extra.is_empty(), || format!("{name} p={}: extra roots", c.p))?;
                    ensure(c.matches_z_p_restriction(), || {
                        format!("{name} p={}: char-p roots differ from char-0 roots in Z_(p)", c.p)
                    })?;
                }
                _ => ensure(c.equal(), || {
                    format!("{name} p={}: missing {} extra {}", c.p, show(&c.missing), show(&c.extra))
                })?,
            }
        }
        let deficits: Vec<String> = cmp
            .primes
            .iter()
            .filter(|c| !c.missing.is_empty())
            .map(|c| format!("p={} missing {}", c.p, show(&c.missing)))
            .collect();
        parts.push(format!("{name}: equal for p>=5; {}", deficits.join(", ")));
    }
    Ok(parts.join("; "))
}

fn random_ideal(rng: &mut ChaCha8Rng, n: usize, max_exp: u64) -> MonomialIdeal {
    loop {
        let k = rng.gen_range(1..=3);
        let rows: Vec<Vec<u64>> = (0..k)
            .map(|_| (0..n).map(|_| rng.gen_range(0..=max_exp)).collect())
            .collect();
        let refs: Vec<&[u64]> = rows.iter().map(|r| r.as_slice()).collect();
        let i = ideal(n, &refs);
        if !i.is_unit() {
            return i;
        }
    }
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut ilps = 0;
    while ilps < 1000 {
        let n = rng.gen_range(1..=4);
        let r = rng.gen_range(1..=4);
        let matrix: Vec<Vec<u64>> = (0..n)
            .map(|_| (0..r).map(|_| rng.gen_range(0..=5)).collect())
            .collect();
        // A column without a positive entry makes the program unbounded.
        if (0..r).any(|c| matrix.iter().all(|row| row[c] == 0)) {
            continue;
        }
        let caps: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=60)).collect();
        let refs: Vec<&[u64]> = matrix.iter().map(|m| m.as_slice()).collect();
        let Ok(prob) = NuProblem::from_i64(&refs, &caps) else { continue };
        let fast = maximize(&prob).map_err(|e| e.to_string())?;
        let slow = brute_force_maximize(&prob).map_err(|e| e.to_string())?;
        ensure(fast == slow, || format!("ILP mismatch on {matrix:?} caps {caps:?}"))?;
        ilps += 1;
    }

    let mut queries = 0;
    while queries < 200 {
        let n = rng.gen_range(1..=3);
        let a = random_ideal(&mut rng, n, 3);
        let j = random_ideal(&mut rng, n, 3);
        let q = rng.gen_range(1..=11u64);
        let Ok(query) = NuQuery::new(a, j, BigUint::from(q)) else { continue };
        let fast = nu(&query).map_err(|e| e.to_string())?;
        let slow = nu_brute(&query).map_err(|e| e.to_string())?;
        ensure(fast == slow, || format!("nu mismatch on {query:?}"))?;
        queries += 1;
    }

    let mut levels = 0;
    for a in [ex1(), ex2()] {
        let grid = default_grid(&a).map_err(|e| e.to_string())?;
        for p in [2, 3] {
            for e in [1, 2] {
                let pp = PrimePower::new(p, e).unwrap();
                let g = nu_set_grid(&a, &pp, &grid).map_err(|e| e.to_string())?.values;
                let c = nu_set_chain(&a, &pp).map_err(|e| e.to_string())?;
                ensure(g == c, || format!("grid and chain differ for {a} at {pp}"))?;
                levels += 1;
            }
        }
    }
    Ok(format!("{ilps} ILPs, {queries} nu queries, {levels} level sets: zero discrepancies"))
}

fn criterion_7() -> Check {
    fn order(p: u64, m: u64) -> u64 {
        let (mut x, mut k) = (p % m, 1);
        while x != 1 % m {
            x = x * p % m;
            k += 1;
        }
        k
    }
    let (max_pre, max_per) = (10, 10);
    let mut total = 0;
    for p in [2u64, 3, 5, 7] {
        let dens: Vec<i64> = (1..200i64)
            .filter(|&d| !(d as u64).is_multiple_of(p) && order(p, d as u64) <= max_per as u64)
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(70 + p);
        for _ in 0..500 {
            let x = Rational::new(
                BigInt::from(rng.gen_range(-500..=500)),
                BigInt::from(dens[rng.gen_range(0..dens.len())]),
            )
            .unwrap();
            let digits = digits_of_rational(&x, p, 40).map_err(|e| e.to_string())?;
            let exp = detect_period(&digits, max_pre, max_per)
                .map_err(|e| e.to_string())?
                .ok_or_else(|| format!("no period for {x} base {p}"))?;
            let y = rational_from_expansion(&exp).map_err(|e| e.to_string())?;
            ensure(y == x && y.in_z_p(p), || format!("{x} base {p} came back as {y}"))?;
            total += 1;
        }
    }
    Ok(format!("{total} rationals round-tripped at depth 40"))
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let primes = [2u64, 3, 5];

    // C^e(I) ⊆ J  ⟺  I ⊆ J^{[p^e]}
    for _ in 0..300 {
        let n = rng.gen_range(1..=3);
        let i = random_ideal(&mut rng, n, 9);
        let j = random_ideal(&mut rng, n, 3);
        let pp = PrimePower::new(primes[rng.gen_range(0..3)], rng.gen_range(1..=2)).unwrap();
        let lhs = j.contains_ideal(&cartier_image(&i, &pp)).unwrap();
        let rhs = bracket_power(&j, pp.value()).unwrap().contains_ideal(&i).unwrap();
        ensure(lhs == rhs, || format!("adjunction fails for I={i}, J={j}, {pp}"))?;
    }

    // ν^{J^{[p]}}(p^e) = ν^J(p^{e+1})
    let mut rescaled = 0;
    while rescaled < 100 {
        let n = rng.gen_range(1..=3);
        let a = random_ideal(&mut rng, n, 3);
        let j = random_ideal(&mut rng, n, 3);
        let p = primes[rng.gen_range(0..3)];
        let e = rng.gen_range(1..=3u32);
        let q = BigUint::from(p).pow(e);
        let Ok(base) = NuQuery::new(a.clone(), j.clone(), &q * p) else { continue };
        let jp = bracket_power(&j, &BigUint::from(p)).unwrap();
        let lifted = NuQuery::new(a, jp, q).unwrap();
        ensure(nu(&base).unwrap() == nu(&lifted).unwrap(), || format!("rescaling fails for {base:?}"))?;
        rescaled += 1;
    }

    // Level sets nest; chain jumps at n >= r·p^e come from n − p^e.
    let mut nested = 0;
    let mut dynamics = 0;
    while nested < 40 {
        let n = rng.gen_range(1..=3);
        let a = random_ideal(&mut rng, n, 3);
        if a.is_zero() {
            continue;
        }
        let r = a.num_gens() as u64;
        let p = primes[rng.gen_range(0..2)];
        let low = nu_set_chain(&a, &PrimePower::new(p, 1).unwrap()).unwrap();
        let high = nu_set_chain(&a, &PrimePower::new(p, 2).unwrap()).unwrap();
        for v in &high {
            let mut v = v.clone();
            while v >= BigUint::from(r * p) {
                v -= p;
            }
            ensure(low.contains(&v), || format!("level sets of {a} at p={p} do not nest"))?;
        }
        nested += 1;

        let pp = PrimePower::new(p, 1).unwrap();
        let jumps = chain_jumps(&a, &pp, (r + 2) * p).unwrap();
        for v in jumps.iter().filter(|v| **v >= BigUint::from(r * p)) {
            ensure(jumps.contains(&(v - p)), || format!("jump {v} of {a} at p={p} has no predecessor"))?;
            dynamics += 1;
        }
    }
    Ok(format!(
        "300 adjunction, {rescaled} rescaling, {nested} nesting cases, {dynamics} shifted jumps"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 char-p roots of (x1^2,x2^3)", criterion_1),
        ("2 char-p roots of (x2x3,x1x3,x1x2)", criterion_2),
        ("3 affine law of the cubic example", criterion_3),
        ("4 char-0 recovery", criterion_4),
        ("5 char-0 vs char-p comparison", criterion_5),
        ("6 oracle equivalence", criterion_6),
        ("7 p-adic round trip", criterion_7),
        ("8 invariant suite", criterion_8),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{:.2?}]", t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why} [{:.2?}]", t.elapsed());
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
