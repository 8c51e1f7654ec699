//! The recursive arc drawing `Γ_n` of `Q_n`.
//!
//! Vertices sit on the real axis at their decimal value. Every edge is drawn as
//! one upper half-plane arc, or as an upper arc followed by a lower arc that
//! meet at a non-integer point of the axis. Two arcs in the same half-plane
//! cross iff their endpoints strictly interleave (`a < c < b < d`); arcs that
//! share an endpoint never cross.
//!
//! `Γ_n` is `Γ_{n-1}` on `0..2^{n-1}`, a translate of it on `2^{n-1}..2^n`, and
//! `2^{n-1}` level-`n` curves joining `i` with `2^{n-1} + i`. Curve 0 is the
//! upper arc `[0, 2^{n-1}]`; curve `i >= 1` is the upper arc `[i, g_i]` followed
//! by the lower arc `[g_i, 2^{n-1} + i]`, with
//! `g_i = (2^{n-1} - 1) + (2^{n-1} - i) / (2^{n-1} + 1)`.
//! The gap points decrease in `i`, so the curves of one level are nested in
//! both half-planes and never cross each other.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::hypercube::{EdgeRef, VertexLabel};
use crate::rational::{frac, int, parse_pq, to_pq};

/// Largest `n` accepted by [`build_gamma`].
pub const MAX_GAMMA_DIM: u32 = 16;
/// Largest `n` for which [`count_crossings`] also records pair multiplicities.
pub const MAX_PAIRWISE_DIM: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HalfPlane {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcSegment {
    pub half: HalfPlane,
    pub left: BigRational,
    pub right: BigRational,
    /// Index into [`ArcDrawing::edges`].
    pub edge: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcDrawing {
    n: u32,
    edges: Vec<EdgeRef>,
    segments: Vec<ArcSegment>,
    positions: Vec<u64>,
}

impl ArcDrawing {
    /// Assembles a drawing from raw parts without checking the `Γ_n` invariants;
    /// `positions[x]` is the axis position of the vertex with decimal value `x`.
    /// Meant for alternative or deliberately broken drawings; see
    /// [`validate_good`] and [`verify_placement`].
    pub fn from_parts(
        n: u32,
        edges: Vec<EdgeRef>,
        segments: Vec<ArcSegment>,
        positions: Vec<u64>,
    ) -> Result<Self> {
        check_range("dimension", n, 1, MAX_GAMMA_DIM)?;
        if positions.len() != 1usize << n {
            return Err(Error::Parse(format!(
                "{} positions for 2^{n} vertices",
                positions.len()
            )));
        }
        for s in &segments {
            if s.edge >= edges.len() {
                return Err(Error::Parse(format!("segment references edge {}", s.edge)));
            }
            if s.left >= s.right {
                return Err(Error::Parse(format!(
                    "segment [{}, {}] is not left < right",
                    s.left, s.right
                )));
            }
        }
        Ok(ArcDrawing {
            n,
            edges,
            segments,
            positions,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn edges(&self) -> &[EdgeRef] {
        &self.edges
    }

    pub fn segments(&self) -> &[ArcSegment] {
        &self.segments
    }

    pub fn position(&self, v: &VertexLabel) -> u64 {
        self.positions[v.decimal() as usize]
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexLabel> + '_ {
        (0..self.positions.len() as u64).map(move |x| VertexLabel::new(self.n, x).expect("in range"))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = ArcDrawingDoc {
            n: self.n,
            segments: self
                .segments
                .iter()
                .map(|s| {
                    let e = &self.edges[s.edge];
                    SegmentDoc {
                        edge: [e.u(), e.v()],
                        half: s.half,
                        left: to_pq(&s.left),
                        right: to_pq(&s.right),
                    }
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("serializable")
    }

    /// Reads the JSON form back; vertex positions are taken to be decimal values.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let doc: ArcDrawingDoc =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut index: BTreeMap<EdgeRef, usize> = BTreeMap::new();
        let mut edges = Vec::new();
        let mut segments = Vec::with_capacity(doc.segments.len());
        for s in doc.segments {
            let [a, b] = s.edge;
            if a.dim() != doc.n || b.dim() != doc.n {
                return Err(Error::DimensionMismatch {
                    left: doc.n,
                    right: a.dim().max(b.dim()),
                });
            }
            let e = if a.hamming(&b)? == 1 {
                let t = (1..=doc.n).find(|&t| a.flip(t) == b).expect("hamming 1");
                EdgeRef::dimension_edge(a, t)
            } else {
                EdgeRef::new(a, b)?
            };
            let id = *index.entry(e).or_insert_with(|| {
                edges.push(e);
                edges.len() - 1
            });
            segments.push(ArcSegment {
                half: s.half,
                left: parse_pq(&s.left)?,
                right: parse_pq(&s.right)?,
                edge: id,
            });
        }
        let positions = (0..1u64 << doc.n).collect();
        ArcDrawing::from_parts(doc.n, edges, segments, positions)
    }
}

#[derive(Serialize, Deserialize)]
struct ArcDrawingDoc {
    n: u32,
    segments: Vec<SegmentDoc>,
}

#[derive(Serialize, Deserialize)]
struct SegmentDoc {
    edge: [VertexLabel; 2],
    half: HalfPlane,
    left: String,
    right: String,
}

/// Gap point of level-`k` curve `i >= 1`, relative to the block origin.
pub fn gap_point(k: u32, i: u64) -> BigRational {
    let half = 1i64 << (k - 1);
    int(half - 1) + frac(half - i as i64, half + 1)
}

/// Builds `Γ_n` by the doubling recursion.
pub fn build_gamma(n: u32) -> Result<ArcDrawing> {
    check_range("dimension", n, 1, MAX_GAMMA_DIM)?;
    // Γ_1
    let mut edges = vec![(0u64, 1u64, 1u32)];
    let mut segments = vec![ArcSegment {
        half: HalfPlane::Upper,
        left: int(0),
        right: int(1),
        edge: 0,
    }];
    for k in 2..=n {
        let half = 1u64 << (k - 1);
        let shift = int(half as i64);
        let base_edges = edges.len();
        // Existing labels gain a leading 0 bit, so dims shift up by one.
        for e in edges.iter_mut() {
            e.2 += 1;
        }
        let copy: Vec<_> = edges.iter().map(|&(u, v, t)| (u + half, v + half, t)).collect();
        edges.extend(copy);
        let translated: Vec<_> = segments
            .iter()
            .map(|s| ArcSegment {
                half: s.half,
                left: &s.left + &shift,
                right: &s.right + &shift,
                edge: s.edge + base_edges,
            })
            .collect();
        segments.extend(translated);
        for i in 0..half {
            let id = edges.len();
            edges.push((i, half + i, 1));
            if i == 0 {
                segments.push(ArcSegment {
                    half: HalfPlane::Upper,
                    left: int(0),
                    right: shift.clone(),
                    edge: id,
                });
            } else {
                let g = gap_point(k, i);
                segments.push(ArcSegment {
                    half: HalfPlane::Upper,
                    left: int(i as i64),
                    right: g.clone(),
                    edge: id,
                });
                segments.push(ArcSegment {
                    half: HalfPlane::Lower,
                    left: g,
                    right: int((half + i) as i64),
                    edge: id,
                });
            }
        }
    }
    let edges = edges
        .into_iter()
        .map(|(u, _, t)| EdgeRef::dimension_edge(VertexLabel::new(n, u).expect("in range"), t))
        .collect();
    Ok(ArcDrawing {
        n,
        edges,
        segments,
        positions: (0..1u64 << n).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossingReport {
    pub total: u64,
    /// Unordered edge-index pairs `(a, b)`, `a <= b`, with their crossing counts.
    pub pairs: Option<BTreeMap<(usize, usize), u32>>,
}

impl CrossingReport {
    pub fn multiplicity(&self, a: usize, b: usize) -> Option<u32> {
        let key = (a.min(b), a.max(b));
        self.pairs.as_ref().map(|p| p.get(&key).copied().unwrap_or(0))
    }
}

/// Segment endpoints replaced by their rank among all distinct coordinates.
struct Ranked {
    upper: Vec<(usize, usize, usize)>,
    lower: Vec<(usize, usize, usize)>,
    coords: usize,
}

fn rank_segments(d: &ArcDrawing) -> Ranked {
    let mut coords: Vec<&BigRational> = d
        .segments
        .iter()
        .flat_map(|s| [&s.left, &s.right])
        .collect();
    coords.par_sort_unstable();
    coords.dedup();
    let rank = |r: &BigRational| coords.binary_search(&r).expect("present");
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for s in &d.segments {
        let item = (rank(&s.left), rank(&s.right), s.edge);
        match s.half {
            HalfPlane::Upper => upper.push(item),
            HalfPlane::Lower => lower.push(item),
        }
    }
    upper.sort_unstable();
    lower.sort_unstable();
    Ranked {
        upper,
        lower,
        coords: coords.len(),
    }
}

/// Crossing pairs of one half-plane, found by scanning for each segment
/// `[a, b]` the segments whose left end lies strictly inside it.
fn pairwise_half(segs: &[(usize, usize, usize)]) -> Vec<(usize, usize)> {
    segs.par_iter()
        .enumerate()
        .flat_map_iter(|(idx, &(a, b, e))| {
            let start = idx + segs[idx..].partition_point(|s| s.0 <= a);
            segs[start..]
                .iter()
                .take_while(move |s| s.0 < b)
                .filter(move |s| s.1 > b)
                .map(move |s| (e.min(s.2), e.max(s.2)))
        })
        .collect()
}

/// Number of strictly interleaving pairs among `segs` (sorted by left end),
/// via a Fenwick tree over right endpoints.
fn interleave_count(segs: &[(usize, usize, usize)], coords: usize) -> u64 {
    let mut tree = vec![0u64; coords + 1];
    let add = |tree: &mut Vec<u64>, i: usize| {
        let mut i = i + 1;
        while i < tree.len() {
            tree[i] += 1;
            i += i & i.wrapping_neg();
        }
    };
    let prefix = |tree: &Vec<u64>, i: usize| {
        // count of inserted values < i
        let mut i = i;
        let mut s = 0;
        while i > 0 {
            s += tree[i];
            i -= i & i.wrapping_neg();
        }
        s
    };
    let mut total = 0;
    let mut i = 0;
    while i < segs.len() {
        let mut j = i;
        while j < segs.len() && segs[j].0 == segs[i].0 {
            j += 1;
        }
        // Earlier segments have a strictly smaller left end; count those whose
        // right end is strictly inside (c, d).
        for &(c, d, _) in &segs[i..j] {
            if d > c + 1 {
                total += prefix(&tree, d) - prefix(&tree, c + 1);
            }
        }
        for &(_, d, _) in &segs[i..j] {
            add(&mut tree, d);
        }
        i = j;
    }
    total
}

/// Crossing total by sorted interleave counting, `O(S log S)`.
pub fn count_crossings_fast(d: &ArcDrawing) -> u64 {
    let r = rank_segments(d);
    interleave_count(&r.upper, r.coords) + interleave_count(&r.lower, r.coords)
}

/// Crossing total with per-edge-pair multiplicities, by pairwise scan.
pub fn count_crossings_pairwise(d: &ArcDrawing) -> CrossingReport {
    let r = rank_segments(d);
    let mut pairs: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    for p in pairwise_half(&r.upper).into_iter().chain(pairwise_half(&r.lower)) {
        *pairs.entry(p).or_default() += 1;
    }
    let total = pairs.values().map(|&c| c as u64).sum();
    CrossingReport {
        total,
        pairs: Some(pairs),
    }
}

/// `ν(Γ)`: pairwise with multiplicities up to [`MAX_PAIRWISE_DIM`], total only
/// above. Where both methods run they are required to agree.
pub fn count_crossings(d: &ArcDrawing) -> CrossingReport {
    if d.n <= MAX_PAIRWISE_DIM {
        let report = count_crossings_pairwise(d);
        debug_assert_eq!(report.total, count_crossings_fast(d));
        report
    } else {
        CrossingReport {
            total: count_crossings_fast(d),
            pairs: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverProfile {
    /// Indexed by vertex decimal value.
    pub upper: Vec<u64>,
    pub lower: Vec<u64>,
    pub upper_sum: u64,
    pub lower_sum: u64,
}

impl CoverProfile {
    pub fn upper_at(&self, v: &VertexLabel) -> u64 {
        self.upper[v.decimal() as usize]
    }

    pub fn lower_at(&self, v: &VertexLabel) -> u64 {
        self.lower[v.decimal() as usize]
    }
}

/// `C_a(v)` and `C_b(v)`: arcs of each half-plane passing strictly over `v`.
pub fn cover_profile(d: &ArcDrawing) -> CoverProfile {
    let size = d.positions.len();
    let max_pos = d.positions.iter().copied().max().unwrap_or(0) as usize;
    let mut diff_up = vec![0i64; max_pos + 2];
    let mut diff_low = vec![0i64; max_pos + 2];
    for s in &d.segments {
        // integer points strictly inside (left, right)
        let first: num_bigint::BigInt = s.left.floor().to_integer() + 1;
        let last: num_bigint::BigInt = s.right.ceil().to_integer() - 1;
        let (Some(first), Some(last)) = (first.to_i64(), last.to_i64()) else {
            continue;
        };
        let first = first.max(0);
        let last = last.min(max_pos as i64);
        if first > last {
            continue;
        }
        let diff = match s.half {
            HalfPlane::Upper => &mut diff_up,
            HalfPlane::Lower => &mut diff_low,
        };
        diff[first as usize] += 1;
        diff[last as usize + 1] -= 1;
    }
    let scan = |diff: &[i64]| -> Vec<u64> {
        let mut acc = 0i64;
        diff.iter()
            .map(|&x| {
                acc += x;
                acc as u64
            })
            .collect()
    };
    let at_pos_up = scan(&diff_up);
    let at_pos_low = scan(&diff_low);
    let upper: Vec<u64> = (0..size).map(|x| at_pos_up[d.positions[x] as usize]).collect();
    let lower: Vec<u64> = (0..size).map(|x| at_pos_low[d.positions[x] as usize]).collect();
    CoverProfile {
        upper_sum: upper.iter().sum(),
        lower_sum: lower.iter().sum(),
        upper,
        lower,
    }
}

/// Closed form `4^{n-1} - (n+1) 2^{n-2}` for the cover sums of `Γ_n`.
pub fn gamma_cover_sum_formula(n: u32) -> Result<num_bigint::BigInt> {
    check_range("dimension", n, 1, u32::MAX)?;
    let n_i = n as i64;
    let v = crate::rational::pow2(2 * (n_i - 1)) - int(n_i + 1) * crate::rational::pow2(n_i - 2);
    Ok(integral(v))
}

/// Closed form `4^{n-1} - (n^2 + n + 2) 2^{n-3}` for `ν(Γ_n)`.
pub fn gamma_crossing_formula(n: u32) -> Result<num_bigint::BigInt> {
    check_range("dimension", n, 1, u32::MAX)?;
    let n_i = n as i64;
    let v = crate::rational::pow2(2 * (n_i - 1))
        - int(n_i * n_i + n_i + 2) * crate::rational::pow2(n_i - 3);
    Ok(integral(v))
}

fn integral(v: BigRational) -> num_bigint::BigInt {
    assert!(v.is_integer(), "closed form is not integral: {v}");
    v.to_integer()
}

/// Crossings between two bunches of `m` parallel lines: `m(m-1)/2`.
pub fn bunch_crossings(m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::range("bunch size", 0u64, 1, i64::MAX));
    }
    Ok(m * (m - 1) / 2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// The report carried no pair multiplicities.
    MissingMultiplicities,
    MultipleCrossing { a: String, b: String, count: u32 },
    AdjacentCrossing { a: String, b: String, count: u32 },
    SelfCrossing { edge: String, count: u32 },
    SharedEndpoint { half: HalfPlane, coordinate: String, count: usize },
}

/// Good-drawing conditions: every edge pair crosses at most once, adjacent
/// edges never cross, no edge crosses itself, and within a half-plane no two
/// segments share a non-vertex endpoint.
pub fn validate_good(d: &ArcDrawing, r: &CrossingReport) -> std::result::Result<(), Vec<Violation>> {
    let Some(pairs) = &r.pairs else {
        return Err(vec![Violation::MissingMultiplicities]);
    };
    let mut out = Vec::new();
    for (&(a, b), &count) in pairs {
        if count == 0 {
            continue;
        }
        let (ea, eb) = (&d.edges[a], &d.edges[b]);
        if a == b {
            out.push(Violation::SelfCrossing {
                edge: ea.to_string(),
                count,
            });
            continue;
        }
        if count > 1 {
            out.push(Violation::MultipleCrossing {
                a: ea.to_string(),
                b: eb.to_string(),
                count,
            });
        }
        if ea.touches(eb) {
            out.push(Violation::AdjacentCrossing {
                a: ea.to_string(),
                b: eb.to_string(),
                count,
            });
        }
    }
    let mut endpoints: BTreeMap<(HalfPlane, &BigRational), usize> = BTreeMap::new();
    for s in &d.segments {
        for c in [&s.left, &s.right] {
            if !c.is_integer() {
                *endpoints.entry((s.half, c)).or_default() += 1;
            }
        }
    }
    for ((half, c), count) in endpoints {
        if count > 1 {
            out.push(Violation::SharedEndpoint {
                half,
                coordinate: to_pq(c),
                count,
            });
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Crossings between edges of the same dimension (same recursion level).
pub fn same_level_crossings(d: &ArcDrawing, r: &CrossingReport) -> Option<u64> {
    let pairs = r.pairs.as_ref()?;
    Some(
        pairs
            .iter()
            .filter(|((a, b), _)| d.edges[*a].dim() == d.edges[*b].dim())
            .map(|(_, &c)| c as u64)
            .sum(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlacementMismatch {
    pub vertex: VertexLabel,
    pub expected: u64,
    pub found: u64,
}

/// `x` sits at `D(x)` and its complement at `2^n - 1 - D(x)`.
pub fn verify_placement(d: &ArcDrawing) -> std::result::Result<(), PlacementMismatch> {
    let top = (1u64 << d.n) - 1;
    for x in d.vertices() {
        let checks = [(x, x.decimal()), (x.complement(), top - x.decimal())];
        for (v, expected) in checks {
            let found = d.position(&v);
            if found != expected {
                return Err(PlacementMismatch {
                    vertex: v,
                    expected,
                    found,
                });
            }
        }
    }
    Ok(())
}
