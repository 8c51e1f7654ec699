//! Canonical routing of `2K_{2^n}` into `FQ_n` and the resulting edge congestion.
//!
//! For `u ≠ v` with agreement `I = I(u, v)` the canonical path is:
//!
//! * `I <= ⌊n/2⌋ - 1`: take the complementary edge first, then flip the `I`
//!   positions where `ū` and `v` differ, in increasing dimension order
//!   (length `I + 1`);
//! * `I >= ⌊n/2⌋`: flip the `n - I` positions where `u` and `v` differ, in
//!   increasing dimension order (length `n - I`).
//!
//! Each unordered pair `{u, v}` carries two guest edges, routed along
//! `P_{u,v}` and `P_{v,u}`; the census therefore routes every ordered pair.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::binomial;
use crate::error::{check_range, Error, Result};
use crate::hypercube::{fq_edges, mask, EdgeRef, VertexLabel, MAX_DIM};

/// Largest `n` for which [`congestion_census`] runs exhaustively.
pub const MAX_CENSUS_DIM: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalPath {
    pub vertices: Vec<VertexLabel>,
    pub dims: Vec<u32>,
}

impl CanonicalPath {
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }
}

/// Whether `P_{u,v}` opens with the complementary edge, given `I(u, v)`.
#[inline]
fn starts_complementary(n: u32, agreement: u32) -> bool {
    agreement < n / 2
}

/// Expected length of `P_{u,v}` for a given agreement.
pub fn canonical_length(n: u32, agreement: u32) -> u32 {
    if starts_complementary(n, agreement) {
        agreement + 1
    } else {
        n - agreement
    }
}

pub fn canonical_path(u: &VertexLabel, v: &VertexLabel) -> Result<CanonicalPath> {
    let agree = u.agreement(v)?;
    let n = u.dim();
    check_range("FQ_n dimension", n, 2, MAX_DIM)?;
    if u == v {
        return Err(Error::IdenticalEndpoints(u.to_string()));
    }
    let mut cur = *u;
    let mut vertices = vec![cur];
    let mut dims = Vec::new();
    if starts_complementary(n, agree) {
        cur = cur.complement();
        vertices.push(cur);
        dims.push(0);
    }
    for t in 1..=n {
        if cur.bit(t) != v.bit(t) {
            cur = cur.flip(t);
            vertices.push(cur);
            dims.push(t);
        }
    }
    debug_assert_eq!(cur, *v);
    Ok(CanonicalPath { vertices, dims })
}

/// Load record for one class of edges (dimension 0, 1, …, n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassSummary {
    pub dim: u32,
    pub min: u64,
    pub max: u64,
    pub count: u64,
}

impl ClassSummary {
    pub fn is_uniform(&self) -> bool {
        self.min == self.max
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongestionCensus {
    n: u32,
    /// `loads[dim * 2^n + key]`; `key` is the endpoint with bit `dim` cleared,
    /// or the smaller endpoint for complementary edges.
    loads: Vec<u64>,
    pub class_summary: Vec<ClassSummary>,
    pub max_congestion: u64,
    /// `Σ_e cg_e`.
    pub total_load: u64,
    /// `Σ_{u≠v} ℓ(P_{u,v})`, from the length rule rather than the walk.
    pub total_path_length: u64,
}

#[inline]
fn edge_slot(n: u32, from: u64, dim: u32) -> usize {
    let key = if dim == 0 {
        from.min(!from & mask(n))
    } else {
        from & !(1u64 << (n - dim))
    };
    ((dim as usize) << n) + key as usize
}

/// Adds the loads of every path leaving `u` into `loads`.
fn route_from(n: u32, u: u64, loads: &mut [u64]) {
    let full = mask(n);
    for v in 0..=full {
        if v == u {
            continue;
        }
        let agree = n - (u ^ v).count_ones();
        let mut cur = u;
        if starts_complementary(n, agree) {
            loads[edge_slot(n, cur, 0)] += 1;
            cur = !cur & full;
        }
        let mut diff = cur ^ v;
        // increasing dimension t = decreasing machine bit
        while diff != 0 {
            let bit = 63 - diff.leading_zeros();
            let t = n - bit;
            loads[edge_slot(n, cur, t)] += 1;
            cur ^= 1u64 << bit;
            diff ^= 1u64 << bit;
        }
    }
}

/// Routes all `2^n (2^n - 1)` ordered pairs and tallies per-edge loads.
/// Sources are split across worker threads, each with a private counter.
pub fn congestion_census(n: u32) -> Result<CongestionCensus> {
    check_range("census dimension", n, 2, MAX_CENSUS_DIM)?;
    let size = 1usize << n;
    let slots = (n as usize + 1) * size;
    let loads = (0..size as u64)
        .into_par_iter()
        .fold(
            || vec![0u64; slots],
            |mut acc, u| {
                route_from(n, u, &mut acc);
                acc
            },
        )
        .reduce(
            || vec![0u64; slots],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        );
    // Every source sees C(n, d) targets at Hamming distance d.
    let mut total_path_length = 0u64;
    for d in 1..=n {
        let targets = u64::try_from(binomial(n as u64, d as u64)?).expect("n <= 12");
        total_path_length += size as u64 * targets * canonical_length(n, n - d) as u64;
    }

    let mut census = CongestionCensus {
        n,
        loads,
        class_summary: Vec::new(),
        max_congestion: 0,
        total_load: 0,
        total_path_length,
    };
    let mut summary: Vec<ClassSummary> = (0..=n)
        .map(|dim| ClassSummary {
            dim,
            min: u64::MAX,
            max: 0,
            count: 0,
        })
        .collect();
    for e in fq_edges(n)? {
        let load = census.load(&e);
        let s = &mut summary[e.dim() as usize];
        s.min = s.min.min(load);
        s.max = s.max.max(load);
        s.count += 1;
        census.total_load += load;
    }
    census.max_congestion = summary.iter().map(|s| s.max).max().unwrap_or(0);
    census.class_summary = summary;
    Ok(census)
}

impl CongestionCensus {
    pub fn n(&self) -> u32 {
        self.n
    }

    /// `cg_e`.
    pub fn load(&self, e: &EdgeRef) -> u64 {
        assert_eq!(e.u().dim(), self.n, "edge from another dimension");
        self.loads[edge_slot(self.n, e.u().decimal(), e.dim())]
    }

    pub fn per_edge(&self) -> impl Iterator<Item = (EdgeRef, u64)> + '_ {
        fq_edges(self.n)
            .expect("census dimension")
            .into_iter()
            .map(move |e| (e, self.load(&e)))
    }

    /// Summary over all dimension edges `t >= 1`.
    pub fn dimension_summary(&self) -> ClassSummary {
        self.class_summary[1..].iter().fold(
            ClassSummary {
                dim: 1,
                min: u64::MAX,
                max: 0,
                count: 0,
            },
            |acc, s| ClassSummary {
                dim: 1,
                min: acc.min.min(s.min),
                max: acc.max.max(s.max),
                count: acc.count + s.count,
            },
        )
    }

    pub fn complementary_summary(&self) -> ClassSummary {
        self.class_summary[0]
    }

    /// First edge (in [`fq_edges`] order) carrying more than `bound`.
    pub fn first_above(&self, bound: u64) -> Option<EdgeRef> {
        self.per_edge().find(|&(_, l)| l > bound).map(|(e, _)| e)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let audit = audit_from_census(self);
        let class = |s: ClassSummary| serde_json::json!({ "cg": s.max, "count": s.count });
        serde_json::json!({
            "n": self.n,
            "classes": {
                "0": class(self.complementary_summary()),
                "t": class(self.dimension_summary()),
            },
            "max": self.max_congestion,
            "bound1": audit.bound.to_string(),
            "bound1_holds": audit.holds,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeClass {
    /// Complementary edges, dimension 0.
    Dim0,
    /// Edges of dimension `t >= 1`.
    DimT,
}

/// Per-edge load of each class under canonical routing:
/// `2 Σ_{k<⌊n/2⌋} C(n, k)` for dimension 0 and
/// `2 (2^{n-1} - C(n-1, ⌊n/2⌋ - 1))` for dimension `t >= 1`.
pub fn class_formula(n: u32, class: EdgeClass) -> Result<BigUint> {
    check_range("FQ_n dimension", n, 2, 1000)?;
    let h = n / 2;
    Ok(match class {
        EdgeClass::Dim0 => {
            let mut s = BigUint::from(0u32);
            for k in 0..h {
                s += binomial(n as u64, k as u64)?;
            }
            s * 2u32
        }
        EdgeClass::DimT => {
            (BigUint::from(1u32) << (n - 1)) * 2u32 - binomial(n as u64 - 1, h as u64 - 1)? * 2u32
        }
    })
}

/// Closed-form load of a single edge, for any `n` the labels support.
pub fn edge_load_formula(e: &EdgeRef) -> Result<BigUint> {
    let class = if e.is_complementary() {
        EdgeClass::Dim0
    } else {
        EdgeClass::DimT
    };
    class_formula(e.u().dim(), class)
}

/// `2^n - C(n, ⌊n/2⌋)`, the claimed bound on every edge load.
pub fn claimed_global_bound(n: u32) -> Result<BigUint> {
    check_range("dimension", n, 1, u32::MAX)?;
    Ok((BigUint::from(1u32) << n) - binomial(n as u64, n as u64 / 2)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Inequality1Audit {
    pub n: u32,
    pub holds: bool,
    pub max_measured: u64,
    #[serde(serialize_with = "crate::bounds::ser_display")]
    pub bound: BigUint,
    pub witness: Option<EdgeRef>,
}

/// Measured maximum load against [`claimed_global_bound`]; an audit, the
/// bound is not expected to hold for odd `n >= 3`.
pub fn audit_inequality_1(n: u32) -> Result<Inequality1Audit> {
    Ok(audit_from_census(&congestion_census(n)?))
}

pub fn audit_from_census(c: &CongestionCensus) -> Inequality1Audit {
    let bound = claimed_global_bound(c.n).expect("census dimension");
    let holds = BigUint::from(c.max_congestion) <= bound;
    let witness = if holds {
        None
    } else {
        // bound < max <= u64::MAX here
        let b = u64::try_from(&bound).expect("bound below a u64 load");
        c.first_above(b)
    };
    Inequality1Audit {
        n: c.n,
        holds,
        max_measured: c.max_congestion,
        bound,
        witness,
    }
}
