use bsroots_core::format::biguint_to_json;
use bsroots_core::frobenius::{bracket_power, cartier_image, nu_set_chain};
use bsroots_core::nu::{default_grid, nu_set_grid_with, NuEngine, NuQuery};
use bsroots_core::{
    bs_roots, char0_roots, compare_char_p, ideal_to_json, parse_ideal, BsConfig, Char0Config,
    Error, Jobs, MonomialIdeal, PrimePower,
};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::cache::{query_key, Cache};
use crate::{ideal_text, Char0Opts, Command, Common, Format, Method};

type Result<T> = std::result::Result<T, Error>;

fn ideal(arg: &str, common: &Common) -> Result<MonomialIdeal> {
    parse_ideal(&ideal_text(arg)?, common.vars)
}

/// Parses `a` and `J` in a common ring: without `--vars`, the larger
/// inferred dimension wins.
fn ideal_pair(a: &str, j: &str, common: &Common) -> Result<(MonomialIdeal, MonomialIdeal)> {
    let (a, j) = (ideal_text(a)?, ideal_text(j)?);
    let (ia, ij) = (parse_ideal(&a, common.vars)?, parse_ideal(&j, common.vars)?);
    if common.vars.is_some() || ia.dim() == ij.dim() {
        return Ok((ia, ij));
    }
    let n = Some(ia.dim().max(ij.dim()));
    Ok((parse_ideal(&a, n)?, parse_ideal(&j, n)?))
}

fn big(arg: &str, name: &str) -> Result<BigUint> {
    arg.trim().parse().map_err(|_| Error::Parse {
        pos: 0,
        msg: format!("--{name} expects a nonnegative integer, got {arg:?}"),
    })
}

fn positive(x: u64, name: &str) -> Result<()> {
    if x == 0 {
        return Err(Error::Precondition(format!("--{name} must be positive")));
    }
    Ok(())
}

fn char0_config(opts: &Char0Opts, common: &Common) -> Result<Char0Config> {
    positive(opts.grid_scale, "grid-scale")?;
    positive(opts.m_max, "m-max")?;
    Ok(Char0Config {
        grid_scale: opts.grid_scale,
        m_max: opts.m_max,
        q_min: opts.q_min,
        samples: opts.samples,
        jobs: Jobs::new(common.jobs),
        check_grid: opts.check_grid,
        ..Char0Config::default()
    })
}

fn char0_flags(opts: &Char0Opts) -> Value {
    json!({
        "grid_scale": opts.grid_scale,
        "m_max": opts.m_max,
        "q_min": opts.q_min,
        "samples": opts.samples,
        "check_grid": opts.check_grid,
    })
}

fn warn_grid(report: &Value) {
    eprintln!(
        "warning: the default grid is complete for char-p level sets but only heuristic for \
         char-0 roots; enlarge it with --grid-scale or test with --check-grid"
    );
    if report.get("grid_limited") == Some(&Value::Bool(true)) {
        eprintln!("warning: grid-limited: a larger grid changed the root set");
    }
}

/// Parses the inputs into a canonical query and a thunk producing the result.
fn plan(command: &Command, common: &Common) -> Result<(Value, Box<dyn FnOnce() -> Result<Value>>)> {
    let jobs = Jobs::new(common.jobs);
    Ok(match command {
        Command::Nu { ideal: a, j, q } => {
            let (a, j) = ideal_pair(a, j, common)?;
            let q = big(q, "q")?;
            let query = json!({"command": "nu", "ideal": ideal_to_json(&a), "J": ideal_to_json(&j), "q": q.to_string()});
            let run = move || {
                let v = NuEngine::new().nu(&NuQuery::new(a.clone(), j.clone(), q.clone())?)?;
                Ok(json!({
                    "command": "nu",
                    "ideal": a.to_string(),
                    "J": j.to_string(),
                    "q": biguint_to_json(&q),
                    "nu": biguint_to_json(&v),
                }))
            };
            (query, Box::new(run))
        }
        Command::NuSet { ideal: a, p, e, method, grid_scale } => {
            let a = ideal(a, common)?;
            positive(*grid_scale, "grid-scale")?;
            let pp = PrimePower::new(*p, *e)?;
            let (method, scale) = (*method, *grid_scale);
            let name = format!("{method:?}").to_lowercase();
            let query = json!({"command": "nu-set", "ideal": ideal_to_json(&a), "p": p, "e": e, "method": name, "grid_scale": scale});
            let run = move || {
                let mut out = json!({
                    "command": "nu-set",
                    "ideal": a.to_string(),
                    "p": pp.p(),
                    "e": pp.e(),
                    "method": name,
                });
                let grid = match method {
                    Method::Chain => None,
                    _ => Some(nu_set_grid_with(&a, &pp, &default_grid(&a)?.scaled(scale), jobs)?),
                };
                let chain = match method {
                    Method::Grid => None,
                    _ => Some(nu_set_chain(&a, &pp)?),
                };
                if let (Some(g), Some(c)) = (&grid, &chain) {
                    if &g.values != c {
                        return Err(Error::Internal(format!("grid and chain level sets differ at {pp}")));
                    }
                }
                let values = grid.as_ref().map(|g| g.values.clone()).or(chain).unwrap_or_default();
                out["values"] = values.iter().map(biguint_to_json).collect();
                if let Some(g) = grid {
                    out["witnesses"] = g
                        .witnesses
                        .iter()
                        .map(|(v, j)| json!({"value": biguint_to_json(v), "J": j.to_string()}))
                        .collect();
                }
                Ok(out)
            };
            (query, Box::new(run))
        }
        Command::BsRoots { ideal: a, p, levels, lookahead, certify, samples, grid_scale } => {
            let a = ideal(a, common)?;
            positive(*grid_scale, "grid-scale")?;
            positive(*p, "p")?;
            let config = BsConfig {
                levels: *levels,
                lookahead: *lookahead,
                grid: Some(default_grid(&a)?.scaled(*grid_scale)),
                certify: *certify,
                samples: *samples,
                jobs,
                ..BsConfig::default()
            };
            let query = json!({
                "command": "bs-roots", "ideal": ideal_to_json(&a), "p": p, "levels": levels,
                "lookahead": lookahead, "certify": certify, "samples": samples, "grid_scale": grid_scale,
            });
            let p = *p;
            let run = move || {
                let mut out = bs_roots(&a, p, &config)?.to_json();
                out["command"] = json!("bs-roots");
                out["ideal"] = json!(a.to_string());
                Ok(out)
            };
            (query, Box::new(run))
        }
        Command::Char0Roots { ideal: a, opts } => {
            let a = ideal(a, common)?;
            let config = char0_config(opts, common)?;
            let query = json!({"command": "char0-roots", "ideal": ideal_to_json(&a), "flags": char0_flags(opts)});
            let run = move || {
                let mut out = char0_roots(&a, &config)?.to_json();
                out["command"] = json!("char0-roots");
                out["ideal"] = json!(a.to_string());
                Ok(out)
            };
            (query, Box::new(run))
        }
        Command::Compare { ideal: a, primes, opts } => {
            let a = ideal(a, common)?;
            let config = char0_config(opts, common)?;
            let primes = primes.clone();
            let query = json!({"command": "compare", "ideal": ideal_to_json(&a), "primes": primes, "flags": char0_flags(opts)});
            let run = move || {
                let bs = BsConfig { jobs, ..BsConfig::default() };
                let mut out = compare_char_p(&a, &primes, &bs, &config)?.to_json();
                out["command"] = json!("compare");
                out["ideal"] = json!(a.to_string());
                Ok(out)
            };
            (query, Box::new(run))
        }
        Command::Cartier { ideal: i, p, e } => {
            let i = ideal(i, common)?;
            let pp = PrimePower::new(*p, *e)?;
            let query = json!({"command": "cartier", "ideal": ideal_to_json(&i), "p": p, "e": e});
            let run = move || {
                let c = cartier_image(&i, &pp);
                Ok(json!({"command": "cartier", "p": pp.p(), "e": pp.e(), "input": i.to_string(), "ideal": c.to_string(), "structure": ideal_to_json(&c)}))
            };
            (query, Box::new(run))
        }
        Command::Bracket { ideal: j, q } => {
            let j = ideal(j, common)?;
            let q = big(q, "q")?;
            let query = json!({"command": "bracket", "ideal": ideal_to_json(&j), "q": q.to_string()});
            let run = move || {
                let b = bracket_power(&j, &q)?;
                Ok(json!({"command": "bracket", "q": biguint_to_json(&q), "input": j.to_string(), "ideal": b.to_string(), "structure": ideal_to_json(&b)}))
            };
            (query, Box::new(run))
        }
    })
}

pub fn run(command: &Command, common: &Common) -> Result<String> {
    let (query, compute) = plan(command, common)?;
    let cache = common.cache.as_ref().map(Cache::new);
    let key = query_key(&query);
    let result = match cache.as_ref().and_then(|c| c.lookup(&key)) {
        Some(hit) => hit,
        None => {
            let fresh = compute()?;
            if let Some(c) = &cache {
                c.store(&key, &fresh);
            }
            fresh
        }
    };
    if matches!(command, Command::Char0Roots { .. } | Command::Compare { .. }) {
        warn_grid(&result);
    }
    Ok(match common.format {
        Format::Json => result.to_string(),
        Format::Table => table(&result),
    })
}

fn rational(v: &Value) -> String {
    let num = v["num"].as_str().unwrap_or("?");
    match v["den"].as_str() {
        Some("1") => num.to_owned(),
        Some(den) => format!("{num}/{den}"),
        None => num.to_owned(),
    }
}

fn rationals(v: &Value) -> String {
    let items: Vec<String> = v.as_array().into_iter().flatten().map(rational).collect();
    format!("{{{}}}", items.join(", "))
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Human-oriented rendering; not covered by the byte-stability guarantee.
fn table(r: &Value) -> String {
    let mut lines = Vec::new();
    match r["command"].as_str().unwrap_or("") {
        "nu" => lines.push(format!("nu = {}", plain(&r["nu"]))),
        "nu-set" => {
            lines.push(format!("level set at p={} e={} ({}):", r["p"], r["e"], plain(&r["method"])));
            let vals: Vec<String> = r["values"].as_array().into_iter().flatten().map(plain).collect();
            lines.push(format!("  {{{}}}", vals.join(", ")));
            for w in r["witnesses"].as_array().into_iter().flatten() {
                lines.push(format!("  {:>8}  {}", plain(&w["value"]), plain(&w["J"])));
            }
        }
        "bs-roots" => {
            lines.push(format!("p = {}, level {}", r["p"], r["level_reached"]));
            lines.push(format!("{:<10} {:<22} certificate", "root", "status"));
            for root in r["roots"].as_array().into_iter().flatten() {
                let cert = &root["certificate"];
                let cert = if cert.is_null() {
                    "-".to_owned()
                } else {
                    format!("J={} d={} slope={}", plain(&cert["J"]), cert["d"], rational(&cert["slope"]))
                };
                lines.push(format!("{:<10} {:<22} {cert}", rational(&root["value"]), plain(&root["status"])));
            }
            for u in r["unresolved"].as_array().into_iter().flatten() {
                lines.push(format!("unresolved: {}", plain(&u["reason"])));
            }
        }
        "char0-roots" => {
            lines.push(format!("{:<10} {:<28} {:>3}  slope", "root", "J", "M"));
            for root in r["roots"].as_array().into_iter().flatten() {
                let law = &root["law"];
                lines.push(format!(
                    "{:<10} {:<28} {:>3}  {}",
                    rational(&root["value"]),
                    plain(&law["J"]),
                    law["M"],
                    rational(&law["slope"])
                ));
            }
        }
        "compare" => {
            lines.push(format!("char 0: {}", rationals(&r["char0"])));
            for c in r["primes"].as_array().into_iter().flatten() {
                lines.push(format!(
                    "p = {:<3} {}  missing {}  extra {}  equal={}  Z_(p)-restriction={}",
                    c["p"],
                    rationals(&c["char_p"]),
                    rationals(&c["missing"]),
                    rationals(&c["extra"]),
                    c["equal"],
                    c["matches_z_p_restriction"],
                ));
            }
        }
        _ => lines.push(plain(&r["ideal"])),
    }
    lines.join("\n")
}
