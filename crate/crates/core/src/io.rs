//! Line-based text formats: complexes, graph-product specs, cover specs,
//! immersion coordinates, and the `key = value` report format.
//!
//! Parsing is whitespace-tolerant and order-preserving; `#` starts a
//! comment anywhere on a line.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::One;
use thiserror::Error;

use crate::complexes::{ComplexError, SimplicialComplex};
use crate::covers::{CoverError, CoverMap, GraphProductSpec, Perm};
use crate::embedding::{EmbedError, Immersion};
use crate::{Int, Rat};

#[derive(Error, Debug)]
pub enum ParseError {
    #[error("line {0}: {1}")]
    Syntax(usize, String),
    #[error("line {0}: {1}")]
    Complex(usize, ComplexError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error("missing `order` for vertex `{0}`")]
    MissingOrder(String),
    #[error("missing `degree` line")]
    MissingDegree,
}

fn tokens(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(n, line)| {
        let stripped = line.split('#').next().unwrap_or("");
        let toks: Vec<&str> = stripped.split_whitespace().collect();
        if toks.is_empty() {
            None
        } else {
            Some((n + 1, toks))
        }
    })
}

/// Complex text format: optional `vertex <id>` lines, `simplex <id> ...`
/// lines listing maximal simplices.
pub fn parse_complex(text: &str) -> Result<SimplicialComplex, ParseError> {
    let mut vertices: Vec<String> = Vec::new();
    let mut simplices: Vec<Vec<String>> = Vec::new();
    for (n, toks) in tokens(text) {
        match toks[0] {
            "vertex" => {
                if toks.len() != 2 {
                    return Err(ParseError::Syntax(n, "vertex takes one identifier".into()));
                }
                vertices.push(toks[1].to_owned());
            }
            "simplex" => {
                if toks.len() < 2 {
                    return Err(ParseError::Syntax(n, "empty simplex".into()));
                }
                simplices.push(toks[1..].iter().map(|s| s.to_string()).collect());
            }
            "order" => {
                // graph-product files reuse the complex format
                continue;
            }
            other => {
                return Err(ParseError::Syntax(n, format!("unknown directive `{other}`")));
            }
        }
    }
    SimplicialComplex::build_with_vertices(&vertices, &simplices)
        .map_err(|e| ParseError::Complex(0, e))
}

/// Serialize with explicit vertex order and maximal simplices.
pub fn write_complex(k: &SimplicialComplex) -> String {
    let mut out = String::new();
    for name in k.vertex_names() {
        let _ = writeln!(out, "vertex {name}");
    }
    // maximal = not a proper face of another simplex
    let all: Vec<_> = k.all_simplices().collect();
    for spx in &all {
        let maximal = !all.iter().any(|other| {
            other.len() > spx.len() && spx.iter().all(|v| other.contains(v))
        });
        if maximal && spx.len() > 1 {
            let names: Vec<&str> = spx.iter().map(|&v| k.vertex_name(v)).collect();
            let _ = writeln!(out, "simplex {}", names.join(" "));
        }
    }
    // isolated vertices are carried by their `vertex` lines
    out
}

/// Graph-product spec: complex format plus `order <vertex> <m>` lines and
/// an optional `order * <m>` default.
pub fn parse_graph_product(text: &str) -> Result<GraphProductSpec, ParseError> {
    let complex = parse_complex(text)?;
    let mut explicit: BTreeMap<String, u64> = BTreeMap::new();
    let mut default: Option<u64> = None;
    for (n, toks) in tokens(text) {
        if toks[0] != "order" {
            continue;
        }
        if toks.len() != 3 {
            return Err(ParseError::Syntax(n, "order takes a vertex and a value".into()));
        }
        let m: u64 = toks[2]
            .parse()
            .map_err(|_| ParseError::Syntax(n, format!("bad order `{}`", toks[2])))?;
        if toks[1] == "*" {
            default = Some(m);
        } else {
            explicit.insert(toks[1].to_owned(), m);
        }
    }
    let orders: Result<Vec<u64>, ParseError> = complex
        .vertex_names()
        .iter()
        .map(|name| {
            explicit
                .get(name)
                .copied()
                .or(default)
                .ok_or_else(|| ParseError::MissingOrder(name.clone()))
        })
        .collect();
    Ok(GraphProductSpec::new(complex, orders?)?)
}

/// Cover spec: `degree <n>` and `perm <generator-index> <cycles>` lines,
/// cycles in 1-based notation like `(1 2 3)(4 5)`. Generators without a
/// perm line act trivially; `generators` fixes the total count.
pub fn parse_cover(text: &str, generators: usize) -> Result<CoverMap, ParseError> {
    let mut degree: Option<usize> = None;
    let mut perms: BTreeMap<usize, Perm> = BTreeMap::new();
    for (n, toks) in tokens(text) {
        match toks[0] {
            "degree" => {
                let d: usize = toks
                    .get(1)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| ParseError::Syntax(n, "bad degree".into()))?;
                degree = Some(d);
            }
            "perm" => {
                let d = degree.ok_or(ParseError::MissingDegree)?;
                let g: usize = toks
                    .get(1)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| ParseError::Syntax(n, "bad generator index".into()))?;
                let cycles = toks[2..].join(" ");
                let perm = parse_cycles(&cycles, d)
                    .map_err(|e| ParseError::Syntax(n, e))?;
                perms.insert(g, perm);
            }
            _ => {}
        }
    }
    let degree = degree.ok_or(ParseError::MissingDegree)?;
    let perms = (0..generators)
        .map(|g| {
            perms
                .get(&g)
                .cloned()
                .unwrap_or_else(|| (0..degree).collect())
        })
        .collect();
    Ok(CoverMap { degree, perms })
}

/// 1-based disjoint cycle notation, e.g. `(1 2 3)(4 5)`.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Perm, String> {
    let mut perm: Perm = (0..degree).collect();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let open = rest.find('(').ok_or("expected `(`")?;
        let close = rest.find(')').ok_or("unbalanced `(`")?;
        let inner = &rest[open + 1..close];
        let cycle: Result<Vec<usize>, String> = inner
            .split_whitespace()
            .map(|s| {
                let v: usize = s.parse().map_err(|_| format!("bad entry `{s}`"))?;
                if v == 0 || v > degree {
                    return Err(format!("entry {v} out of 1..={degree}"));
                }
                Ok(v - 1)
            })
            .collect();
        let cycle = cycle?;
        for w in cycle.windows(2) {
            perm[w[0]] = w[1];
        }
        if cycle.len() > 1 {
            perm[*cycle.last().unwrap()] = cycle[0];
        }
        rest = rest[close + 1..].trim();
    }
    Ok(perm)
}

/// Immersion file: `coord <vertex> <q1> ... <q2d>` with rationals `p/q`.
pub fn parse_immersion(k: &SimplicialComplex, text: &str) -> Result<Immersion, ParseError> {
    let mut coords: Vec<Option<Vec<Rat>>> = vec![None; k.vertex_count()];
    let mut width: Option<usize> = None;
    for (n, toks) in tokens(text) {
        if toks[0] != "coord" {
            return Err(ParseError::Syntax(n, format!("unknown directive `{}`", toks[0])));
        }
        if toks.len() < 3 {
            return Err(ParseError::Syntax(n, "coord needs a vertex and values".into()));
        }
        let v = k
            .vertex_index(toks[1])
            .map_err(|e| ParseError::Complex(n, e))?;
        let values: Result<Vec<Rat>, ParseError> = toks[2..]
            .iter()
            .map(|s| parse_rat(s).ok_or_else(|| ParseError::Syntax(n, format!("bad rational `{s}`"))))
            .collect();
        let values = values?;
        if let Some(w) = width {
            if values.len() != w {
                return Err(ParseError::Syntax(n, "inconsistent coordinate width".into()));
            }
        } else if values.len() % 2 != 0 {
            return Err(ParseError::Syntax(n, "target dimension must be even".into()));
        } else {
            width = Some(values.len());
        }
        coords[v as usize] = Some(values);
    }
    let width = width.ok_or(ParseError::MissingDegree)?;
    let coords: Result<Vec<Vec<Rat>>, ParseError> = coords
        .into_iter()
        .enumerate()
        .map(|(v, c)| {
            c.ok_or_else(|| {
                ParseError::Syntax(0, format!("no coordinates for vertex `{}`", k.vertex_name(v as u32)))
            })
        })
        .collect();
    Ok(Immersion::new(k.clone(), width / 2, coords?)?)
}

pub fn write_immersion(f: &Immersion) -> String {
    let mut out = String::new();
    for (v, c) in f.coords.iter().enumerate() {
        let vals: Vec<String> = c.iter().map(fmt_rat).collect();
        let _ = writeln!(
            out,
            "coord {} {}",
            f.source.vertex_name(v as u32),
            vals.join(" ")
        );
    }
    out
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    match s.split_once('/') {
        Some((p, q)) => {
            let p: Int = p.parse().ok()?;
            let q: Int = q.parse().ok()?;
            if q == Int::from(0) {
                None
            } else {
                Some(Rat::new(p, q))
            }
        }
        None => {
            let p: Int = s.parse().ok()?;
            Some(Rat::from(p))
        }
    }
}

/// Exact rationals print as `p/q`, integers as plain `p`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Plain `key = value` report with a final verdict line. Identical inputs
/// produce byte-identical reports.
#[derive(Default)]
pub struct Report {
    lines: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn set(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.lines.push((key.into(), value.to_string()));
        self
    }

    pub fn set_rat(&mut self, key: impl Into<String>, value: &Rat) -> &mut Self {
        self.set(key, fmt_rat(value))
    }

    pub fn render(&self, verdict: Option<bool>) -> String {
        let mut out = String::new();
        for (k, v) in &self.lines {
            let _ = writeln!(out, "{k} = {v}");
        }
        if let Some(pass) = verdict {
            let _ = writeln!(out, "verdict = {}", if pass { "pass" } else { "fail" });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn parse_and_write_complex() {
        let text = "
            # the 4-cycle
            simplex a b
            simplex b c
            simplex c d
            simplex d a
        ";
        let k = parse_complex(text).unwrap();
        assert_eq!(k.f_vector(), vec![4, 4]);
        let round = parse_complex(&write_complex(&k)).unwrap();
        assert_eq!(k, round);
    }

    #[test]
    fn parse_complex_with_vertices() {
        let k = parse_complex("vertex p\nvertex q\nsimplex p q\n").unwrap();
        assert_eq!(k.vertex_names(), &["p", "q"]);
        assert!(parse_complex("simplex a a\n").is_err());
        assert!(parse_complex("squiggle a\n").is_err());
    }

    #[test]
    fn parse_gp_orders() {
        let text = "simplex a b\norder * 3\norder a 6\n";
        let spec = parse_graph_product(text).unwrap();
        assert_eq!(spec.orders, vec![6, 3]);
        let missing = parse_graph_product("simplex a b\norder a 4\n");
        assert!(matches!(missing, Err(ParseError::MissingOrder(_))));
    }

    #[test]
    fn parse_cover_cycles() {
        let c = parse_cover("degree 3\nperm 0 (1 2 3)\n", 2).unwrap();
        assert_eq!(c.perms[0], vec![1, 2, 0]);
        assert_eq!(c.perms[1], vec![0, 1, 2]);
        assert_eq!(parse_cycles("(1 2)(3 4)", 4).unwrap(), vec![1, 0, 3, 2]);
        assert!(parse_cycles("(1 5)", 3).is_err());
    }

    #[test]
    fn rationals_roundtrip() {
        assert_eq!(parse_rat("3/4"), Some(rat(3, 4)));
        assert_eq!(parse_rat("-2"), Some(rat(-2, 1)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(fmt_rat(&rat(16, 25)), "16/25");
        assert_eq!(fmt_rat(&rat(4, 1)), "4");
        assert_eq!(fmt_rat(&rat(4, 2)), "2");
    }

    #[test]
    fn immersion_roundtrip() {
        let k = parse_complex("simplex a b\nsimplex c d\n").unwrap();
        let text = "coord a 0 0\ncoord b 1 1\ncoord c 0 1\ncoord d 1/2 -3/2\n";
        let f = parse_immersion(&k, text).unwrap();
        assert_eq!(f.d, 1);
        assert_eq!(f.coords[3], vec![rat(1, 2), rat(-3, 2)]);
        let round = parse_immersion(&k, &write_immersion(&f)).unwrap();
        assert_eq!(f.coords, round.coords);
    }

    #[test]
    fn report_rendering() {
        let mut r = Report::new();
        r.set("betti", 3).set_rat("value", &rat(2, 3));
        assert_eq!(r.render(Some(true)), "betti = 3\nvalue = 2/3\nverdict = pass\n");
    }
}
