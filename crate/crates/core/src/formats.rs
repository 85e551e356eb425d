//! File formats. Rationals are written as strings (`"3"`, `"-2/7"`) and read
//! from JSON numbers, `"p/q"` strings or decimal strings, always exactly.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::apps::Graph;
use crate::cones::SosCertificate;
use crate::error::{Error, Result};
use crate::poly::{Rational, SymMatrix};
use crate::relax::{ConeConstraint, ConicProgram};

/// Parses `"p/q"`, an integer, or a decimal such as `"-1.25e-3"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {:?}", s));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {:?}", s)));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all = format!("{}{}", int, frac);
    let mut v = Rational::from_integer(BigInt::from_str(&all).map_err(|_| bad())?);
    let shift = exp - frac.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if shift >= 0 {
        v *= num_traits::pow(ten, shift as usize);
    } else {
        v /= num_traits::pow(ten, (-shift) as usize);
    }
    Ok(if neg { -v } else { v })
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Serde wrapper for an exact rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rat(pub Rational);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Rat;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a rational string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rat, E> {
                Ok(Rat(Rational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rat, E> {
                Ok(Rat(Rational::from_integer(v.into())))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Rat, E> {
                // shortest round-trip decimal of the float
                parse_rational(&v.to_string()).map(Rat).map_err(E::custom)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rat, E> {
                parse_rational(v).map(Rat).map_err(E::custom)
            }
            fn visit_map<A: de::MapAccess<'de>>(
                self,
                map: A,
            ) -> std::result::Result<Rat, A::Error> {
                // arbitrary-precision numbers arrive as a single-entry map
                let n =
                    serde_json::Number::deserialize(de::value::MapAccessDeserializer::new(map))?;
                parse_rational(&n.to_string())
                    .map(Rat)
                    .map_err(de::Error::custom)
            }
        }
        d.deserialize_any(V)
    }
}

fn rats(v: &[Rational]) -> Vec<Rat> {
    v.iter().cloned().map(Rat).collect()
}

fn unrat(v: Vec<Rat>) -> Vec<Rational> {
    v.into_iter().map(|r| r.0).collect()
}

fn matrix_rows(m: &SymMatrix) -> Vec<Vec<Rat>> {
    m.rows().iter().map(|r| rats(r)).collect()
}

fn matrix_from_rows(n: usize, rows: Vec<Vec<Rat>>, what: &str) -> Result<SymMatrix> {
    if rows.len() != n {
        return Err(Error::Dimension(format!(
            "{} has {} rows, declared n = {}",
            what,
            rows.len(),
            n
        )));
    }
    SymMatrix::from_rows(rows.into_iter().map(unrat).collect())
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    n: usize,
    data: Vec<Vec<Rat>>,
}

pub fn matrix_from_json(s: &str) -> Result<SymMatrix> {
    let f: MatrixFile = serde_json::from_str(s)?;
    matrix_from_rows(f.n, f.data, "matrix")
}

pub fn matrix_to_json(m: &SymMatrix) -> String {
    serde_json::to_string_pretty(&MatrixFile {
        n: m.n(),
        data: matrix_rows(m),
    })
    .expect("serialisable")
}

#[derive(Serialize, Deserialize)]
struct ConstraintFile {
    n: usize,
    #[serde(rename = "C")]
    c: Vec<Vec<Rat>>,
    #[serde(rename = "A")]
    a: Vec<Vec<Vec<Rat>>>,
}

#[derive(Serialize, Deserialize)]
struct ProgramFile {
    m: usize,
    b: Vec<Rat>,
    constraints: Vec<ConstraintFile>,
}

pub fn program_from_json(s: &str) -> Result<ConicProgram> {
    let f: ProgramFile = serde_json::from_str(s)?;
    if f.b.len() != f.m {
        return Err(Error::Dimension(format!(
            "b has {} entries, declared m = {}",
            f.b.len(),
            f.m
        )));
    }
    let constraints = f
        .constraints
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            let cm = matrix_from_rows(c.n, c.c, &format!("C of constraint {}", k))?;
            let a = c
                .a
                .into_iter()
                .enumerate()
                .map(|(i, a)| matrix_from_rows(c.n, a, &format!("A_{} of constraint {}", i + 1, k)))
                .collect::<Result<Vec<_>>>()?;
            Ok(ConeConstraint { c: cm, a })
        })
        .collect::<Result<Vec<_>>>()?;
    ConicProgram::new(unrat(f.b), constraints)
}

pub fn program_to_json(p: &ConicProgram) -> String {
    let f = ProgramFile {
        m: p.m,
        b: rats(&p.b),
        constraints: p
            .constraints
            .iter()
            .map(|c| ConstraintFile {
                n: c.n(),
                c: matrix_rows(&c.c),
                a: c.a.iter().map(matrix_rows).collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&f).expect("serialisable")
}

#[derive(Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default)]
    weights: Option<Vec<Rat>>,
}

/// JSON (`{"n", "edges", "weights"?}`, 0-indexed) or DIMACS (`p edge n m`,
/// `e i j`, 1-indexed).
pub fn graph_from_str(s: &str) -> Result<Graph> {
    if s.trim_start().starts_with('{') {
        let f: GraphFile = serde_json::from_str(s)?;
        return Graph::new(f.n, f.edges, f.weights.map(unrat));
    }
    let mut n = None;
    let mut edges = Vec::new();
    for (ln, line) in s.lines().enumerate() {
        let tok: Vec<&str> = line.split_whitespace().collect();
        let err = |msg: &str| Error::Parse(format!("line {}: {}", ln + 1, msg));
        match tok.first() {
            None | Some(&"c") => {}
            Some(&"p") => {
                if tok.len() < 4 {
                    return Err(err("expected `p edge <n> <m>`"));
                }
                n = Some(
                    tok[2]
                        .parse::<usize>()
                        .map_err(|_| err("bad vertex count"))?,
                );
            }
            Some(&"e") => {
                if tok.len() < 3 {
                    return Err(err("expected `e <i> <j>`"));
                }
                let i: usize = tok[1].parse().map_err(|_| err("bad vertex"))?;
                let j: usize = tok[2].parse().map_err(|_| err("bad vertex"))?;
                if i == 0 || j == 0 {
                    return Err(err("DIMACS vertices are 1-indexed"));
                }
                edges.push((i - 1, j - 1));
            }
            Some(other) => return Err(err(&format!("unknown line type {:?}", other))),
        }
    }
    let n = n.ok_or_else(|| Error::Parse("missing `p edge` line".into()))?;
    Graph::new(n, edges, None)
}

pub fn graph_to_json(g: &Graph) -> String {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut v = serde_json::json!({ "n": g.n(), "edges": edges });
    if let Some(w) = g.weights() {
        v["weights"] = serde_json::to_value(rats(w)).expect("serialisable");
    }
    serde_json::to_string_pretty(&v).expect("serialisable")
}

/// A JSON array of rationals or whitespace-separated rationals.
pub fn weights_from_str(s: &str) -> Result<Vec<Rational>> {
    if s.trim_start().starts_with('[') {
        let v: Vec<Rat> = serde_json::from_str(s)?;
        return Ok(unrat(v));
    }
    s.split_whitespace().map(parse_rational).collect()
}

pub fn certificate_from_json(s: &str) -> Result<SosCertificate> {
    Ok(serde_json::from_str(s)?)
}

pub fn certificate_to_json(c: &SosCertificate) -> String {
    serde_json::to_string_pretty(c).expect("serialisable")
}
