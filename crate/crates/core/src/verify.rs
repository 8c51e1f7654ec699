//! One-shot verification suite over every module invariant up to `max_n`.
//!
//! The two inequality audits are expected to fail for odd `n`; when they fail
//! exactly there they are reported as [`CheckStatus::ExpectedErratum`] and do
//! not affect the exit code.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use crate::arc_diagram::{
    build_gamma, count_crossings, count_crossings_fast, cover_profile, gamma_cover_sum_formula,
    gamma_crossing_formula, same_level_crossings, validate_good, verify_placement,
};
use crate::bounds::{
    audit_inequality_2, bipartite_euler_lb, fq_lower_assembled, fq_lower_paper, qn_upper_conjecture,
};
use crate::error::{check_range, Result};
use crate::folded_upper::{
    count_segment_crossings, d3_base_drawing, fq_upper_count, fq_upper_formula, neighborhood_breakdown,
    neighborhood_formula,
};
use crate::hypercube::{check_small_isomorphisms, subcube_vertices, vertices};
use crate::routing::{
    audit_from_census, canonical_length, canonical_path, class_formula,
    congestion_census, EdgeClass,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    ExpectedErratum,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::ExpectedErratum => "expected-erratum",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub n_range: String,
    pub status: CheckStatus,
    pub details: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifySuiteResult {
    pub checks: Vec<CheckResult>,
    pub exit_code: i32,
}

pub const MIN_VERIFY_DIM: u32 = 3;
pub const MAX_VERIFY_DIM: u32 = 12;

struct Suite {
    checks: Vec<CheckResult>,
}

impl Suite {
    fn record(&mut self, name: &str, lo: u32, hi: u32, outcome: std::result::Result<String, String>) {
        let (status, details) = match outcome {
            Ok(d) => (CheckStatus::Pass, d),
            Err(d) => (CheckStatus::Fail, d),
        };
        self.push(name, lo, hi, status, details);
    }

    fn push(&mut self, name: &str, lo: u32, hi: u32, status: CheckStatus, details: String) {
        let n_range = if lo == hi { format!("{lo}") } else { format!("{lo}..={hi}") };
        self.checks.push(CheckResult {
            name: name.to_string(),
            n_range,
            status,
            details,
        });
    }
}

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gamma_formulas(hi: u32) -> Outcome {
    for n in 1..=hi {
        let d = build_gamma(n).map_err(|e| e.to_string())?;
        let nu = BigInt::from(count_crossings(&d).total);
        let want = gamma_crossing_formula(n).map_err(|e| e.to_string())?;
        ensure(nu == want, || format!("n={n}: crossings {nu} != {want}"))?;
        let c = cover_profile(&d);
        let want = gamma_cover_sum_formula(n).map_err(|e| e.to_string())?;
        ensure(
            BigInt::from(c.upper_sum) == want && BigInt::from(c.lower_sum) == want,
            || format!("n={n}: cover sums ({}, {}) != {want}", c.upper_sum, c.lower_sum),
        )?;
    }
    Ok(format!("crossings and cover sums equal the closed forms for n=1..={hi}"))
}

fn gamma_recurrences(hi: u32) -> Outcome {
    let measure = |n| -> std::result::Result<(u64, u64, u64), String> {
        let d = build_gamma(n).map_err(|e| e.to_string())?;
        let c = cover_profile(&d);
        Ok((count_crossings_fast(&d), c.upper_sum, c.lower_sum))
    };
    let mut prev = measure(1)?;
    for n in 2..=hi {
        let cur = measure(n)?;
        let half = 1u64 << (n - 1);
        let level = (half / 2) * (half - 1);
        ensure(cur.1 == level + 2 * prev.1 && cur.2 == level + 2 * prev.2, || {
            format!("n={n}: cover recurrence broken ({cur:?} vs {prev:?})")
        })?;
        ensure(cur.0 == 2 * prev.0 + prev.1 + prev.2, || {
            format!("n={n}: crossing recurrence broken ({cur:?} vs {prev:?})")
        })?;
        prev = cur;
    }
    Ok(format!("cover and crossing recurrences hold for n=2..={hi}"))
}

fn gamma_good(hi: u32) -> Outcome {
    for n in 1..=hi {
        let d = build_gamma(n).map_err(|e| e.to_string())?;
        let r = count_crossings(&d);
        validate_good(&d, &r).map_err(|v| format!("n={n}: {} violations, first {:?}", v.len(), v[0]))?;
        ensure(same_level_crossings(&d, &r) == Some(0), || {
            format!("n={n}: curves of one level cross")
        })?;
    }
    Ok(format!("good drawing, level bunches parallel, n=1..={hi}"))
}

fn gamma_placement(hi: u32) -> Outcome {
    for n in 1..=hi {
        let d = build_gamma(n).map_err(|e| e.to_string())?;
        verify_placement(&d).map_err(|m| format!("n={n}: {m:?}"))?;
    }
    Ok(format!("every vertex and its complement placed as required, n=1..={hi}"))
}

fn fq_regular(hi: u32) -> Outcome {
    for n in 2..=hi {
        for v in vertices(n).map_err(|e| e.to_string())? {
            let nb = v.fq_neighbors().map_err(|e| e.to_string())?;
            ensure(nb.len() == n as usize + 1, || format!("n={n}: {v} has degree {}", nb.len()))?;
            for w in &nb {
                ensure(w.is_fq_adjacent(&v), || format!("n={n}: {v}-{w} not symmetric"))?;
            }
        }
    }
    Ok(format!("FQ_n is (n+1)-regular and symmetric, n=2..={hi}"))
}

fn subcube_iso(hi: u32) -> Outcome {
    for n in 2..=hi {
        for m in 1..n {
            for p in vertices(m).map_err(|e| e.to_string())? {
                let vs = subcube_vertices(n, &p).map_err(|e| e.to_string())?;
                for a in &vs {
                    for b in &vs {
                        let pa = a.subcube_project(m).map_err(|e| e.to_string())?;
                        let pb = b.subcube_project(m).map_err(|e| e.to_string())?;
                        let q = pa.hamming(&pb).map_err(|e| e.to_string())? == 1;
                        ensure(a.is_fq_adjacent(b) == q, || format!("n={n}, prefix {p}: {a} {b}"))?;
                    }
                }
            }
        }
    }
    Ok(format!("projection onto Q_(n-m) preserves adjacency, n=2..={hi}"))
}

fn fq_upper(hi: u32) -> Outcome {
    for n in 3..=hi {
        let got = fq_upper_count(n).map_err(|e| e.to_string())?;
        let want = fq_upper_formula(n).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("n={n}: assembled {got} != {want}"))?;
        if n >= 4 {
            let b = neighborhood_breakdown(n).map_err(|e| e.to_string())?;
            let f = neighborhood_formula(n).map_err(|e| e.to_string())?;
            ensure(BigRational::from_integer(BigInt::from(b.total)) == f, || {
                format!("n={n}: neighborhood {} != {f}", b.total)
            })?;
        }
    }
    Ok(format!("assembled D_n count equals the closed form, n=3..={hi}"))
}

fn d3_check() -> Outcome {
    let r = count_segment_crossings(&d3_base_drawing()).map_err(|e| e.to_string())?;
    let euler = bipartite_euler_lb(8, 16).map_err(|e| e.to_string())?;
    let pairs = r.pairs.unwrap_or_default();
    ensure(r.total == 4 && pairs.values().all(|&c| c == 1) && euler == 4, || {
        format!("D_3 has {} crossings, Euler bound {euler}", r.total)
    })?;
    Ok("D_3 has 4 crossings and cr(K_4,4) >= 4, so cr(FQ_3) = 4".into())
}

fn paths(hi: u32) -> Outcome {
    let mut count = 0u64;
    for n in 2..=hi {
        let vs: Vec<_> = vertices(n).map_err(|e| e.to_string())?.collect();
        for u in &vs {
            for v in &vs {
                if u == v {
                    continue;
                }
                let p = canonical_path(u, v).map_err(|e| e.to_string())?;
                check_path(u, v, &p).map_err(|e| format!("n={n} {u}->{v}: {e}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} canonical paths valid, n=2..={hi}"))
}

/// Validity of one canonical path: endpoints, adjacency, dims, simplicity, length.
pub fn check_path(
    u: &crate::hypercube::VertexLabel,
    v: &crate::hypercube::VertexLabel,
    p: &crate::routing::CanonicalPath,
) -> std::result::Result<(), String> {
    let n = u.dim();
    ensure(p.vertices.first() == Some(u) && p.vertices.last() == Some(v), || "endpoints".into())?;
    ensure(p.vertices.len() == p.dims.len() + 1, || "vertex/dim count".into())?;
    for (w, &d) in p.vertices.windows(2).zip(&p.dims) {
        let got = w[0].edge_dim(&w[1]).map_err(|e| e.to_string())?;
        ensure(got == d && w[0] != w[1], || format!("step {}-{} has dim {got}, recorded {d}", w[0], w[1]))?;
    }
    let tail = if p.dims.first() == Some(&0) { &p.dims[1..] } else { &p.dims[..] };
    ensure(tail.iter().all(|&d| d >= 1) && tail.windows(2).all(|w| w[0] < w[1]), || {
        format!("dims {:?} not strictly increasing", p.dims)
    })?;
    let mut seen = p.vertices.clone();
    seen.sort();
    seen.dedup();
    ensure(seen.len() == p.vertices.len(), || "path revisits a vertex".into())?;
    let agree = u.agreement(v).map_err(|e| e.to_string())?;
    let want = canonical_length(n, agree) as usize;
    ensure(p.len() == want, || format!("length {} != {want}", p.len()))?;
    ensure((p.dims.first() == Some(&0)) == (agree < n / 2), || "opening edge rule".into())?;
    Ok(())
}

fn census(hi: u32) -> Outcome {
    for n in 2..=hi {
        let c = congestion_census(n).map_err(|e| e.to_string())?;
        let dim0 = c.complementary_summary();
        let dimt = c.dimension_summary();
        ensure(dim0.is_uniform() && dimt.is_uniform(), || format!("n={n}: loads not uniform per class"))?;
        let f0 = class_formula(n, EdgeClass::Dim0).map_err(|e| e.to_string())?;
        let ft = class_formula(n, EdgeClass::DimT).map_err(|e| e.to_string())?;
        ensure(BigUint::from(dim0.max) == f0 && BigUint::from(dimt.max) == ft, || {
            format!("n={n}: measured ({}, {}) vs closed form ({f0}, {ft})", dim0.max, dimt.max)
        })?;
        ensure(BigUint::from(c.max_congestion) == ft, || format!("n={n}: max is not the dimension class"))?;
        ensure(c.total_load == c.total_path_length, || {
            format!("n={n}: sum of loads {} != sum of lengths {}", c.total_load, c.total_path_length)
        })?;
    }
    Ok(format!("class loads uniform, equal to the closed forms, conserved, n=2..={hi}"))
}

fn bounds_sanity(hi: u32) -> Outcome {
    ensure(
        qn_upper_conjecture(4).ok() == Some(BigInt::from(8)) && qn_upper_conjecture(5).ok() == Some(BigInt::from(56)),
        || "Q_n conjecture values".into(),
    )?;
    for n in 2..=hi {
        let cg = class_formula(n, EdgeClass::DimT).map_err(|e| e.to_string())?;
        let lower = fq_lower_assembled(n, &cg).map_err(|e| e.to_string())?;
        if n >= 3 && lower.is_positive() {
            let up = fq_upper_formula(n).map_err(|e| e.to_string())?;
            ensure(lower <= BigRational::from_integer(up.clone()), || {
                format!("n={n}: assembled lower {lower} > upper {up}")
            })?;
        }
    }
    let neg9 = fq_lower_paper(9).map_err(|e| e.to_string())? < 0.0;
    let pos10 = fq_lower_paper(10).map_err(|e| e.to_string())? > 0.0;
    ensure(neg9 && pos10, || "closed-form lower bound sign change not between 9 and 10".into())?;
    Ok(format!("lower <= upper for n=2..={hi}; Q_4, Q_5 values; sign change at 9/10"))
}

/// Audit over `ns`: must hold for even `n` and fail for odd `n`.
fn audit_split(
    suite: &mut Suite,
    name: &str,
    ns: &[u32],
    holds: impl Fn(u32) -> Result<(bool, String)>,
) -> Result<()> {
    let (even, odd): (Vec<u32>, Vec<u32>) = ns.iter().partition(|&&n| n % 2 == 0);
    if let (Some(&lo), Some(&hi)) = (even.first(), even.last()) {
        let mut bad = Vec::new();
        for &n in &even {
            let (h, d) = holds(n)?;
            if !h {
                bad.push(d);
            }
        }
        let outcome = if bad.is_empty() {
            Ok(format!("holds for n in {even:?}"))
        } else {
            Err(format!("unexpectedly violated: {}", bad.join("; ")))
        };
        suite.record(&format!("{name} (even n)"), lo, hi, outcome);
    }
    if let (Some(&lo), Some(&hi)) = (odd.first(), odd.last()) {
        let mut details = Vec::new();
        let mut all_violated = true;
        for &n in &odd {
            let (h, d) = holds(n)?;
            all_violated &= !h;
            details.push(d);
        }
        let status = if all_violated {
            CheckStatus::ExpectedErratum
        } else {
            CheckStatus::Fail
        };
        suite.push(&format!("{name} (odd n)"), lo, hi, status, details.join("; "));
    }
    Ok(())
}

/// Runs every invariant up to `max_n` (`3 <= max_n <= 12`).
pub fn run_verify(max_n: u32) -> Result<VerifySuiteResult> {
    check_range("max_n", max_n, MIN_VERIFY_DIM, MAX_VERIFY_DIM)?;
    let mut s = Suite { checks: Vec::new() };
    let small = max_n.min(8);
    let paths_hi = max_n.min(10);

    let iso = check_small_isomorphisms();
    let iso_ok = iso.iter().all(|c| c.passed);
    let iso_detail = iso.iter().map(|c| format!("{}: {}", c.name, c.detail)).collect::<Vec<_>>().join("; ");
    s.record("small-isomorphisms", 2, 3, if iso_ok { Ok(iso_detail) } else { Err(iso_detail) });
    s.record("fq-neighbors-regular", 2, max_n, fq_regular(max_n));
    s.record("subcube-projection-isomorphism", 2, small, subcube_iso(small));
    s.record("gamma-closed-forms", 1, max_n, gamma_formulas(max_n));
    s.record("gamma-recurrences", 2, max_n, gamma_recurrences(max_n));
    s.record("gamma-good-drawing", 1, small, gamma_good(small));
    s.record("gamma-placement", 1, max_n, gamma_placement(max_n));
    s.record("d3-realization", 3, 3, d3_check());
    s.record("fq-upper-assembly", 3, max_n, fq_upper(max_n));
    s.record("canonical-paths", 2, paths_hi, paths(paths_hi));
    s.record("congestion-census", 2, max_n, census(max_n));
    s.record("bounds-sanity", 2, max_n, bounds_sanity(max_n));

    let ns: Vec<u32> = (2..=max_n).collect();
    audit_split(&mut s, "inequality-1", &ns, |n| {
        let a = audit_from_census(&congestion_census(n)?);
        Ok((a.holds, format!("n={n}: max {} vs bound {}", a.max_measured, a.bound)))
    })?;
    audit_split(&mut s, "inequality-2", &ns, |n| {
        let a = audit_inequality_2(n)?;
        Ok((a.holds, format!("n={n}: C = {} vs {:.6}", a.lhs, a.rhs)))
    })?;
    let even_to_64: Vec<u32> = (2..=64).step_by(2).collect();
    audit_split(&mut s, "inequality-2 to 64", &even_to_64, |n| {
        let a = audit_inequality_2(n)?;
        Ok((a.holds, format!("n={n}")))
    })?;

    let exit_code = if s.checks.iter().any(|c| c.status == CheckStatus::Fail) { 1 } else { 0 };
    Ok(VerifySuiteResult {
        checks: s.checks,
        exit_code,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_small() {
        let r = run_verify(4).unwrap();
        for c in &r.checks {
            println!("{} [{}] {}: {}", c.status, c.n_range, c.name, c.details);
        }
        assert_eq!(r.exit_code, 0);
        let errata: Vec<_> = r
            .checks
            .iter()
            .filter(|c| c.status == CheckStatus::ExpectedErratum)
            .collect();
        assert_eq!(errata.len(), 2);
        assert!(errata.iter().all(|c| c.n_range == "3"));
    }

    #[test]
    fn verify_range() {
        assert!(run_verify(2).is_err());
        assert!(run_verify(13).is_err());
    }
}
