//! Line-oriented text formats for colored covers and Jacobi graphs.
//!
//! A colored multigraph is written as
//!
//! ```text
//! rose-cover ℓ=2 n=5
//! 0 (1,+) 1 (1,-)
//! 3 (2,-) -
//! ```
//!
//! with one line per glued pair followed by one line per dangling half-edge.
//! A Jacobi graph is written as
//!
//! ```text
//! jacobi-graph p=2
//! b 0 1/2
//! e 0 1 3
//! ```
//!
//! where unlisted diagonal values are zero and `#` starts a comment.

use std::fmt::Write as _;

use super::{ColoredMultigraph, EdgeSet, FiniteGraph, HalfEdge, HalfEdgeColor, Sign};
use crate::error::{Error, Result};
use crate::jacobi::JacobiData;
use crate::rational::{parse_fraction, to_fraction_string, Rational};

impl ColoredMultigraph {
    pub fn to_text(&self) -> String {
        let mut out = format!("rose-cover ℓ={} n={}\n", self.ell(), self.vertex_count());
        let hes = self.half_edges();
        for e in self.colored_edges() {
            let (p, m) = (hes[e.plus], hes[e.minus]);
            writeln!(out, "{} {} {} {}", p.owner, p.color, m.owner, m.color).unwrap();
        }
        for (h, he) in hes.iter().enumerate() {
            if self.mate(h).is_none() {
                writeln!(out, "{} {} -", he.owner, he.color).unwrap();
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("rose-cover") {
            return Err(Error::parse(line, "expected `rose-cover` header"));
        }
        let ell = header_value(fields.next(), &["ℓ", "ell"], line)?;
        let n = header_value(fields.next(), &["n"], line)?;

        let mut half_edges = Vec::new();
        let mut mate = Vec::new();
        for (line, text) in lines {
            let parts: Vec<&str> = text.split_whitespace().collect();
            let vertex = |s: &str| -> Result<usize> {
                s.parse()
                    .map_err(|_| Error::parse(line, format!("bad vertex {s:?}")))
            };
            match parts.as_slice() {
                [u, c, "-"] => {
                    half_edges.push(HalfEdge {
                        owner: vertex(u)?,
                        color: parse_color(c, line)?,
                    });
                    mate.push(None);
                }
                [u, c, v, d] => {
                    let h = half_edges.len();
                    half_edges.push(HalfEdge {
                        owner: vertex(u)?,
                        color: parse_color(c, line)?,
                    });
                    half_edges.push(HalfEdge {
                        owner: vertex(v)?,
                        color: parse_color(d, line)?,
                    });
                    mate.push(Some(h + 1));
                    mate.push(Some(h));
                }
                _ => return Err(Error::parse(line, "expected `u (j,s) v (j,s)` or `u (j,s) -`")),
            }
        }
        ColoredMultigraph::new(ell, n, half_edges, mate)
    }
}

fn header_value(field: Option<&str>, keys: &[&str], line: usize) -> Result<usize> {
    let field = field.ok_or_else(|| Error::parse(line, "truncated header"))?;
    let (key, value) = field
        .split_once('=')
        .ok_or_else(|| Error::parse(line, format!("expected key=value, got {field:?}")))?;
    if !keys.contains(&key) {
        return Err(Error::parse(line, format!("expected {}=…", keys[0])));
    }
    value
        .parse()
        .map_err(|_| Error::parse(line, format!("bad value {value:?}")))
}

fn parse_color(s: &str, line: usize) -> Result<HalfEdgeColor> {
    let bad = || Error::parse(line, format!("bad color {s:?}"));
    let inner = s
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(bad)?;
    let (j, sign) = inner.split_once(',').ok_or_else(bad)?;
    let index: usize = j.parse().map_err(|_| bad())?;
    let sign = match sign {
        "+" => Sign::Plus,
        "-" | "−" => Sign::Minus,
        _ => return Err(bad()),
    };
    Ok(HalfEdgeColor { index, sign })
}

/// Parses the `jacobi-graph` format into a leafless connected graph and its
/// data.
pub fn parse_jacobi_graph(text: &str) -> Result<(FiniteGraph, JacobiData)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let mut fields = header.split_whitespace();
    if fields.next() != Some("jacobi-graph") {
        return Err(Error::parse(line, "expected `jacobi-graph` header"));
    }
    let p = header_value(fields.next(), &["p"], line)?;

    let mut b = vec![Rational::from_integer(0.into()); p];
    let mut edges = Vec::new();
    let mut a = Vec::new();
    for (line, text) in lines {
        let parts: Vec<&str> = text.split_whitespace().collect();
        let vertex = |s: &str| -> Result<usize> {
            match s.parse::<usize>() {
                Ok(v) if v < p => Ok(v),
                _ => Err(Error::parse(line, format!("bad vertex {s:?}"))),
            }
        };
        let value = |s: &str| parse_fraction(s).map_err(|e| Error::parse(line, e.to_string()));
        match parts.as_slice() {
            ["b", v, x] => b[vertex(v)?] = value(x)?,
            ["e", u, v, x] => {
                edges.push((vertex(u)?, vertex(v)?));
                a.push(value(x)?);
            }
            _ => return Err(Error::parse(line, "expected `b v x` or `e u v a`")),
        }
    }
    let graph = FiniteGraph::new(p, edges)?;
    let data = JacobiData::new(b, a)?;
    Ok((graph, data))
}

pub fn write_jacobi_graph<G: EdgeSet + ?Sized>(g: &G, data: &JacobiData) -> Result<String> {
    data.check_matches(g)?;
    let mut out = format!("jacobi-graph p={}\n", g.vertex_count());
    for (v, x) in data.b().iter().enumerate() {
        writeln!(out, "b {v} {}", to_fraction_string(x)).unwrap();
    }
    for (&(u, v), x) in g.edges().iter().zip(data.a()) {
        writeln!(out, "e {u} {v} {}", to_fraction_string(x)).unwrap();
    }
    Ok(out)
}
