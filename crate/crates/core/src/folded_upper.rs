//! The upper-bound drawing `D_n` of `FQ_n`.
//!
//! `D_3` is realized as a straight-line drawing of `K_{4,4}`: the even-weight
//! class on the x-axis and the odd-weight class on the y-axis, two points on
//! each side of the origin. For `n >= 4` each vertex of `D_3` is blown up into a
//! copy of `Γ_{n-3}` and each edge into a bunch of `2^{n-3}` parallel edges;
//! the crossing count is assembled from measurements of `Γ_{n-3}`:
//!
//! ```text
//! ν(D_n) = 8 · (ν_red + ν_blue + ν_mixed) + 2^{n-3} · 2^{n-3} · ν(D_3)
//! ```

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arc_diagram::{self, build_gamma, bunch_crossings, cover_profile, CrossingReport, MAX_GAMMA_DIM};
use crate::error::{check_range, Error, Result};
use crate::hypercube::{fq_edges, vertices, VertexLabel};
use crate::rational::{int, parse_pq, pow2, to_pq};

pub type Point = (BigRational, BigRational);

/// A straight-line drawing with exact rational vertex coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateDrawing {
    pub points: BTreeMap<VertexLabel, Point>,
    pub edges: Vec<(VertexLabel, VertexLabel)>,
}

#[derive(Serialize, Deserialize)]
struct CoordinateDoc {
    points: BTreeMap<String, [String; 2]>,
    edges: Vec<[VertexLabel; 2]>,
}

impl CoordinateDrawing {
    pub fn to_json(&self) -> serde_json::Value {
        let doc = CoordinateDoc {
            points: self
                .points
                .iter()
                .map(|(v, (x, y))| (v.to_string(), [to_pq(x), to_pq(y)]))
                .collect(),
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
        };
        serde_json::to_value(doc).expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let doc: CoordinateDoc =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut points = BTreeMap::new();
        for (label, [x, y]) in doc.points {
            points.insert(label.parse()?, (parse_pq(&x)?, parse_pq(&y)?));
        }
        let edges = doc.edges.into_iter().map(|[u, v]| (u, v)).collect();
        Ok(CoordinateDrawing { points, edges })
    }
}

/// `D_3`: even-weight vertices at `x = -2, -1, 1, 2`, odd-weight vertices at
/// `y = -2, -1, 1, 2`, all 16 edges of `FQ_3` straight.
pub fn d3_base_drawing() -> CoordinateDrawing {
    let slots = [-2, -1, 1, 2];
    let mut points = BTreeMap::new();
    let (even, odd): (Vec<_>, Vec<_>) = vertices(3).expect("n=3").partition(|v| v.parity() == 0);
    for (v, &s) in even.iter().zip(&slots) {
        points.insert(*v, (int(s), int(0)));
    }
    for (v, &s) in odd.iter().zip(&slots) {
        points.insert(*v, (int(0), int(s)));
    }
    let edges = fq_edges(3).expect("n=3").iter().map(|e| (e.u(), e.v())).collect();
    CoordinateDrawing { points, edges }
}

fn sub(a: &Point, b: &Point) -> Point {
    (&a.0 - &b.0, &a.1 - &b.1)
}

fn cross(a: &Point, b: &Point) -> BigRational {
    &a.0 * &b.1 - &a.1 * &b.0
}

/// Sign of the turn `a -> b -> c`.
fn orient(a: &Point, b: &Point, c: &Point) -> i8 {
    let v = cross(&sub(b, a), &sub(c, a));
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// For `p` collinear with `a b`: is `p` strictly between them?
fn strictly_between(a: &Point, b: &Point, p: &Point) -> bool {
    let inside = |lo: &BigRational, hi: &BigRational, x: &BigRational| {
        (lo < x && x < hi) || (hi < x && x < lo)
    };
    if a.0 != b.0 {
        inside(&a.0, &b.0, &p.0)
    } else {
        inside(&a.1, &b.1, &p.1)
    }
}

/// Counts proper interior intersections between straight edges with exact
/// orientation predicates. Concurrent crossings, vertices on edge interiors
/// and collinear overlaps are reported as [`Error::Degenerate`].
pub fn count_segment_crossings(d: &CoordinateDrawing) -> Result<CrossingReport> {
    let coords = |v: &VertexLabel| {
        d.points
            .get(v)
            .ok_or_else(|| Error::Parse(format!("no coordinates for vertex {v}")))
    };
    let segs = d
        .edges
        .iter()
        .map(|(u, v)| Ok((coords(u)?, coords(v)?)))
        .collect::<Result<Vec<_>>>()?;

    {
        let mut seen: BTreeMap<&Point, &VertexLabel> = BTreeMap::new();
        for (v, p) in &d.points {
            if let Some(w) = seen.insert(p, v) {
                return Err(Error::Degenerate(format!("vertices {w} and {v} coincide")));
            }
        }
    }
    for (i, &(a, b)) in segs.iter().enumerate() {
        for (v, p) in &d.points {
            if *v != d.edges[i].0 && *v != d.edges[i].1 && orient(a, b, p) == 0 && strictly_between(a, b, p) {
                return Err(Error::Degenerate(format!(
                    "vertex {v} lies on edge {}-{}",
                    d.edges[i].0, d.edges[i].1
                )));
            }
        }
    }

    let mut pairs = BTreeMap::new();
    let mut at: BTreeMap<Point, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            let (a, b) = segs[i];
            let (c, e) = segs[j];
            let (o1, o2) = (orient(a, b, c), orient(a, b, e));
            let (o3, o4) = (orient(c, e, a), orient(c, e, b));
            if o1 == 0 && o2 == 0 {
                let overlap = strictly_between(a, b, c)
                    || strictly_between(a, b, e)
                    || strictly_between(c, e, a)
                    || strictly_between(c, e, b)
                    || (a == c && b == e)
                    || (a == e && b == c);
                if overlap {
                    return Err(Error::Degenerate(format!("edges {i} and {j} overlap")));
                }
                continue;
            }
            if o1 * o2 < 0 && o3 * o4 < 0 {
                let r = sub(b, a);
                let t = cross(&sub(c, a), &sub(e, c)) / cross(&r, &sub(e, c));
                let p = (&a.0 + &t * &r.0, &a.1 + &t * &r.1);
                at.entry(p).or_default().push((i, j));
                pairs.insert((i, j), 1u32);
            }
        }
    }
    if let Some((p, list)) = at.iter().find(|(_, l)| l.len() > 1) {
        return Err(Error::Degenerate(format!(
            "{} crossings meet at ({}, {})",
            list.len(),
            p.0,
            p.1
        )));
    }
    Ok(CrossingReport {
        total: pairs.len() as u64,
        pairs: Some(pairs),
    })
}

/// The three crossing classes in the neighborhood of one blown-up vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NeighborhoodBreakdown {
    /// Crossings among the subcube's own edges.
    pub nu_red: u64,
    /// Crossings among the bunches leaving the subcube.
    pub nu_blue: u64,
    /// Crossings between subcube edges and bunch edges.
    pub nu_mixed: u64,
    pub total: u64,
}

/// Assembles the neighborhood count from engine measurements of `Γ_{n-3}`.
pub fn neighborhood_breakdown(n: u32) -> Result<NeighborhoodBreakdown> {
    check_range("dimension", n, 4, MAX_GAMMA_DIM + 3)?;
    let gamma = build_gamma(n - 3)?;
    let nu_red = arc_diagram::count_crossings_fast(&gamma);
    let nu_blue = 2 * bunch_crossings(1u64 << (n - 3))?;
    let cover = cover_profile(&gamma);
    let nu_mixed = 2 * cover.upper_sum + 2 * cover.lower_sum;
    Ok(NeighborhoodBreakdown {
        nu_red,
        nu_blue,
        nu_mixed,
        total: nu_red + nu_blue + nu_mixed,
    })
}

/// Closed form `9 · 4^{n-4} - (n^2 + 3n) 2^{n-6}` for one neighborhood.
pub fn neighborhood_formula(n: u32) -> Result<BigRational> {
    check_range("dimension", n, 4, u32::MAX)?;
    let n = n as i64;
    Ok(int(9) * pow2(2 * (n - 4)) - int(n * n + 3 * n) * pow2(n - 6))
}

/// `ν(D_n)`: 4 for `n = 3` (measured on [`d3_base_drawing`]); for `n >= 4`
/// eight neighborhoods plus the bunch-pair crossings `2^{n-3} · 2^{n-3} · 4`.
pub fn fq_upper_count(n: u32) -> Result<BigInt> {
    check_range("dimension", n, 3, MAX_GAMMA_DIM + 3)?;
    let d3 = count_segment_crossings(&d3_base_drawing())?.total;
    if n == 3 {
        return Ok(BigInt::from(d3));
    }
    let hood = neighborhood_breakdown(n)?;
    let m = BigInt::from(1u64) << (n - 3);
    Ok(BigInt::from(8) * hood.total + &m * &m * d3)
}

/// Closed form `(11/32) 4^n - (n^2 + 3n) 2^{n-3}`.
pub fn fq_upper_formula(n: u32) -> Result<BigInt> {
    check_range("dimension", n, 3, u32::MAX)?;
    let n_i = n as i64;
    let v = int(11) * pow2(2 * n_i - 5) - int(n_i * n_i + 3 * n_i) * pow2(n_i - 3);
    debug_assert!(v.is_integer());
    Ok(v.to_integer())
}
