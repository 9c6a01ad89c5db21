//! Textual and structural encodings of monomial ideals.
//!
//! Text: `(x1^2, x2^3)`, with `1` for the unit monomial and `()` for the
//! zero ideal. Structural: `{"n": 2, "gens": [[2,0],[0,3]]}`.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialIdeal};

/// Parses either the text grammar or the structural JSON form.
///
/// With `vars = None` the ambient dimension is the highest variable index
/// used (at least 1). A declared dimension smaller than an index used is an
/// error.
pub fn parse_ideal(text: &str, vars: Option<usize>) -> Result<MonomialIdeal> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "empty input".into(),
        });
    }
    if trimmed.starts_with('{') {
        return parse_ideal_json(trimmed, vars);
    }
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let raw = parser.ideal()?;
    let used = raw
        .iter()
        .flat_map(|mono| mono.iter().map(|(idx, _)| *idx))
        .max()
        .unwrap_or(1);
    let n = match vars {
        Some(n) if n < used => {
            return Err(Error::Parse {
                pos: 0,
                msg: format!("variable x{used} exceeds declared count {n}"),
            })
        }
        Some(n) => n,
        None => used,
    };
    let gens = raw
        .into_iter()
        .map(|factors| {
            let mut exps = vec![BigUint::zero(); n];
            for (idx, e) in factors {
                exps[idx - 1] += e;
            }
            Monomial::new(exps)
        })
        .collect();
    MonomialIdeal::new(n, gens)
}

#[derive(Deserialize, Serialize)]
struct StructuralIdeal {
    n: usize,
    gens: Vec<Vec<u64>>,
}

fn parse_ideal_json(text: &str, vars: Option<usize>) -> Result<MonomialIdeal> {
    let parsed: StructuralIdeal = serde_json::from_str(text).map_err(|e| Error::Parse {
        pos: e.column().saturating_sub(1),
        msg: e.to_string(),
    })?;
    if let Some(v) = vars {
        if v != parsed.n {
            return Err(Error::Dimension {
                expected: v,
                found: parsed.n,
            });
        }
    }
    let gens = parsed.gens.iter().map(|g| Monomial::from_u64s(g)).collect();
    MonomialIdeal::new(parsed.n, gens)
}

/// Structural JSON form of an ideal. Exponents are emitted as JSON numbers
/// when they fit in a `u64` and as decimal strings otherwise.
pub fn ideal_to_json(ideal: &MonomialIdeal) -> Value {
    let gens: Vec<Value> = ideal
        .gens()
        .iter()
        .map(|g| Value::Array(g.exponents().iter().map(biguint_to_json).collect()))
        .collect();
    json!({ "n": ideal.dim(), "gens": gens })
}

pub fn biguint_to_json(x: &BigUint) -> Value {
    match u64::try_from(x) {
        Ok(v) => Value::from(v),
        Err(_) => Value::String(x.to_string()),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

type RawMonomial = Vec<(usize, BigUint)>;

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn ideal(&mut self) -> Result<Vec<RawMonomial>> {
        self.expect(b'(')?;
        let mut gens = Vec::new();
        if self.peek() == Some(b')') {
            self.pos += 1;
        } else {
            loop {
                gens.push(self.monomial()?);
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return self.err("expected ',' or ')'"),
                }
            }
        }
        if self.peek().is_some() {
            return self.err("trailing input after ideal");
        }
        Ok(gens)
    }

    fn monomial(&mut self) -> Result<RawMonomial> {
        if self.peek() == Some(b'1') {
            self.pos += 1;
            return Ok(Vec::new());
        }
        let mut factors = vec![self.factor()?];
        while self.peek() == Some(b'*') {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        Ok(factors)
    }

    fn factor(&mut self) -> Result<(usize, BigUint)> {
        if self.peek() != Some(b'x') {
            return self.err("expected a variable x<index>");
        }
        self.pos += 1;
        let idx_pos = self.pos;
        let idx = self.digits()?;
        let idx: usize = match usize::try_from(&idx) {
            Ok(i) if i >= 1 => i,
            _ => {
                self.pos = idx_pos;
                return self.err("variable index must be a positive integer");
            }
        };
        let exp = if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            if self.src.get(self.pos) == Some(&b'-') {
                return self.err("negative exponent");
            }
            self.digits()?
        } else {
            BigUint::from(1u8)
        };
        Ok((idx, exp))
    }

    fn digits(&mut self) -> Result<BigUint> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("validated digits"))
    }
}
