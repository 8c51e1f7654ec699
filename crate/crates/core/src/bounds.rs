//! Closed-form crossing bounds for `FQ_n` and `Q_n`.
//!
//! Rational formulas are evaluated exactly. The lower bound that involves
//! `√(2/π)` is evaluated in `f64` and rounded one ulp toward `-∞` so the
//! reported number stays a valid lower bound.

use std::fmt::Display;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{check_range, Error, Result};
use crate::folded_upper::fq_upper_formula;
use crate::rational::{int, pow2, to_pq};
use crate::routing::{self, class_formula, claimed_global_bound, EdgeClass};

pub(crate) fn ser_display<T: Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn ser_opt_display<T: Display, S: Serializer>(v: &Option<T>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

fn ser_pq<S: Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&to_pq(v))
}

/// `C(a, b)` exactly.
pub fn binomial(a: u64, b: u64) -> Result<BigUint> {
    if b > a {
        return Err(Error::range("binomial lower index", b, 0, a as i64));
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        // exact at every step: acc = C(a, i) * (a - i) / (i + 1) = C(a, i + 1)
        acc = acc * (a - i) / (i + 1);
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inequality2Audit {
    pub n: u32,
    pub holds: bool,
    #[serde(serialize_with = "ser_display")]
    pub lhs: BigUint,
    pub rhs: f64,
}

/// Relative slack granted to the floating right-hand side of inequality (2).
pub const INEQUALITY_2_SLACK: f64 = 1e-12;

/// `C(n, ⌊n/2⌋) >= √(2/π) 2^n / √(2⌊n/2⌋ + 1)`, audited in `f64`.
pub fn audit_inequality_2(n: u32) -> Result<Inequality2Audit> {
    check_range("dimension", n, 1, 1000)?;
    let lhs = binomial(n as u64, n as u64 / 2)?;
    let rhs = (2.0 / std::f64::consts::PI).sqrt() * 2f64.powi(n as i32)
        / ((2 * (n / 2) + 1) as f64).sqrt();
    let l = lhs.to_f64().unwrap_or(f64::INFINITY);
    Ok(Inequality2Audit {
        n,
        holds: l >= rhs * (1.0 - INEQUALITY_2_SLACK),
        lhs,
        rhs,
    })
}

fn kn_lower_big(m: &BigInt) -> BigRational {
    let one = BigInt::one();
    let p = m * (m - &one) * (m - 2 * &one) * (m - 3 * &one);
    BigRational::new(p, BigInt::from(80))
}

/// `m(m-1)(m-2)(m-3)/80`, the lower bound on `cr(K_m)`, unfloored.
pub fn kn_crossing_lower(m: u64) -> Result<BigRational> {
    if m == 0 {
        return Err(Error::range("vertex count", 0u64, 1, i64::MAX));
    }
    Ok(kn_lower_big(&BigInt::from(m)))
}

/// `cr(2K_m) = 4 cr(K_m)`.
pub fn multigraph_factor(x: &BigRational) -> Result<BigRational> {
    if x.is_negative() {
        return Err(Error::Parse(format!("negative crossing count {x}")));
    }
    Ok(x * int(4))
}

/// `cr(G_2) >= cr(G_1) / cg^2 - (|V_2| / 2) Δ(G_2)^2`.
pub fn leighton_bound(cr1: &BigRational, cg: u64, v2: u64, delta: u64) -> Result<BigRational> {
    if cg == 0 {
        return Err(Error::range("congestion", 0u64, 1, i64::MAX));
    }
    if v2 == 0 {
        return Err(Error::range("host vertex count", 0u64, 1, i64::MAX));
    }
    let cg = BigInt::from(cg);
    let delta = BigInt::from(delta);
    Ok(cr1 / BigRational::from_integer(&cg * &cg)
        - BigRational::new(BigInt::from(v2) * &delta * &delta, BigInt::from(2)))
}

/// The closed-form lower bound on `cr(FQ_n)`:
/// `4^n / (20 (1 - √(2/π) / √(2⌊n/2⌋ + 1))^2) - (n^2 + 2n + 4) 2^{n-1}`,
/// rounded toward `-∞`; negative values are returned as is.
pub fn fq_lower_paper(n: u32) -> Result<f64> {
    check_range("dimension", n, 1, 500)?;
    let nf = n as f64;
    let ratio = (2.0 / std::f64::consts::PI).sqrt() / ((2 * (n / 2) + 1) as f64).sqrt();
    let denom = 20.0 * (1.0 - ratio).powi(2);
    let a = 4f64.powi(n as i32) / denom;
    let b = (nf * nf + 2.0 * nf + 4.0) * 2f64.powi(n as i32 - 1);
    // each term carries a few ulps of error and the difference can cancel,
    // so step down by a bound on the absolute error before rounding
    let slop = 16.0 * f64::EPSILON * (a.abs() + b.abs());
    Ok((a - b - slop).next_down())
}

/// Leighton's inequality with `G_1 = 2K_{2^n}`, `G_2 = FQ_n` and a given
/// congestion: `4 · kn_crossing_lower(2^n) / cg^2 - 2^{n-1} (n+1)^2`.
pub fn fq_lower_assembled(n: u32, cg: &BigUint) -> Result<BigRational> {
    check_range("dimension", n, 2, 1000)?;
    if cg.is_zero() {
        return Err(Error::range("congestion", 0u64, 1, i64::MAX));
    }
    let m = BigInt::one() << n;
    let cr1 = kn_lower_big(&m) * int(4);
    let cg = BigInt::from(cg.clone());
    let delta = BigInt::from(n + 1);
    Ok(cr1 / BigRational::from_integer(&cg * &cg)
        - BigRational::from_integer((BigInt::one() << (n - 1)) * &delta * &delta))
}

/// `(5/32) 4^n - ⌊(n^2 + 1)/2⌋ 2^{n-2}`.
pub fn qn_upper_conjecture(n: u32) -> Result<BigInt> {
    check_range("dimension", n, 3, 1000)?;
    let n_i = n as i64;
    let v = int(5) * pow2(2 * n_i - 5) - int((n_i * n_i + 1) / 2) * pow2(n_i - 2);
    Ok(v.to_integer())
}

/// `(1/20) 4^n - (n^2 + 1) 2^{n-1}`, exactly.
pub fn qn_lower_sv(n: u32) -> Result<BigRational> {
    check_range("dimension", n, 1, 1000)?;
    let n_i = n as i64;
    Ok(pow2(2 * n_i) / int(20) - int(n_i * n_i + 1) * pow2(n_i - 1))
}

/// Euler's bound for graphs without triangles: `max(0, e - 2v + 4)`.
pub fn bipartite_euler_lb(v: u64, e: u64) -> Result<u64> {
    if v < 3 {
        return Err(Error::range("vertex count", v, 3, i64::MAX));
    }
    Ok((e + 4).saturating_sub(2 * v))
}

/// A real value rounded toward `-∞`, serialized with 15 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerReal(pub f64);

impl LowerReal {
    /// 15 significant digits, never above the stored value.
    pub fn to_digits(&self) -> String {
        let v = self.0;
        if !v.is_finite() || v == 0.0 {
            return format!("{v:e}");
        }
        let mut s = format!("{v:.14e}");
        if s.parse::<f64>().map(|p| p > v).unwrap_or(false) {
            let (mant, exp) = s.split_once('e').expect("exponent");
            let neg = mant.starts_with('-');
            let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
            let mut m: i64 = digits.parse().expect("digits");
            let mut e: i32 = exp.parse().expect("exponent");
            // step the 15-digit mantissa one unit toward -inf
            if neg {
                m += 1;
            } else {
                m -= 1;
            }
            if m >= 1_000_000_000_000_000 {
                m /= 10;
                e += 1;
            } else if m < 100_000_000_000_000 {
                m = m * 10 + 9;
                e -= 1;
            }
            let ds = m.to_string();
            s = format!("{}{}.{}e{}", if neg { "-" } else { "" }, &ds[..1], &ds[1..], e);
        }
        s
    }
}

impl Serialize for LowerReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("LowerReal", 2)?;
        st.serialize_field("value", &self.to_digits())?;
        st.serialize_field("rounding", "toward-negative-infinity")?;
        st.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CongestionSource {
    Census,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Inequality1Summary {
    pub holds: bool,
    #[serde(serialize_with = "ser_display")]
    pub measured: BigUint,
    #[serde(serialize_with = "ser_display")]
    pub bound: BigUint,
    pub source: CongestionSource,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundAudits {
    pub inequality_1: Inequality1Summary,
    pub inequality_2: Inequality2Audit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: u32,
    /// Upper bound on `cr(FQ_n)` from the `D_n` drawing; defined for `n >= 3`.
    #[serde(serialize_with = "ser_opt_display")]
    pub upper_fq: Option<BigInt>,
    pub lower_fq_paper: LowerReal,
    #[serde(serialize_with = "ser_pq")]
    pub lower_fq_assembled: BigRational,
    /// Congestion fed into `lower_fq_assembled`.
    #[serde(serialize_with = "ser_display")]
    pub congestion: BigUint,
    #[serde(serialize_with = "ser_opt_display")]
    pub qn_upper_conj: Option<BigInt>,
    #[serde(serialize_with = "ser_pq")]
    pub qn_lower_sv: BigRational,
    pub audits: BoundAudits,
    /// Known exact `cr(FQ_n)` for `n <= 3`.
    pub small_case_exact: Option<u64>,
}

impl BoundReport {
    /// The assembled lower bound never exceeds the upper bound.
    pub fn is_consistent(&self) -> bool {
        match &self.upper_fq {
            Some(up) if self.lower_fq_assembled.is_positive() => {
                self.lower_fq_assembled <= BigRational::from_integer(up.clone())
            }
            _ => true,
        }
    }
}

/// Largest `n` for which [`bound_report`] runs the congestion census itself.
pub const REPORT_CENSUS_DIM: u32 = 10;

pub fn bound_report(n: u32) -> Result<BoundReport> {
    check_range("dimension", n, 2, 64)?;
    let (measured, source) = if n <= REPORT_CENSUS_DIM {
        let c = routing::congestion_census(n)?;
        (BigUint::from(c.max_congestion), CongestionSource::Census)
    } else {
        (class_formula(n, EdgeClass::DimT)?, CongestionSource::ClosedForm)
    };
    let bound = claimed_global_bound(n)?;
    let inequality_1 = Inequality1Summary {
        holds: measured <= bound,
        measured: measured.clone(),
        bound,
        source,
    };
    Ok(BoundReport {
        n,
        upper_fq: if n >= 3 { Some(fq_upper_formula(n)?) } else { None },
        lower_fq_paper: LowerReal(fq_lower_paper(n)?),
        lower_fq_assembled: fq_lower_assembled(n, &measured)?,
        congestion: measured,
        qn_upper_conj: if n >= 3 { Some(qn_upper_conjecture(n)?) } else { None },
        qn_lower_sv: qn_lower_sv(n)?,
        audits: BoundAudits {
            inequality_1,
            inequality_2: audit_inequality_2(n)?,
        },
        small_case_exact: match n {
            2 => Some(0),
            3 => Some(4),
            _ => None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    // factorial quotient, independent of the multiplicative routine
    fn factorial_binomial(a: u64, b: u64) -> BigUint {
        let f = |k: u64| (1..=k).fold(BigUint::one(), |acc, i| acc * i);
        f(a) / (f(b) * f(a - b))
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2).unwrap(), BigUint::from(6u32));
        assert_eq!(binomial(9, 0).unwrap(), BigUint::one());
        assert_eq!(binomial(10, 5).unwrap(), BigUint::from(252u32));
        assert!(binomial(3, 4).is_err());
        for a in 0..40 {
            for b in 0..=a {
                assert_eq!(binomial(a, b).unwrap(), factorial_binomial(a, b));
            }
        }
        assert_eq!(binomial(64, 32).unwrap(), BigUint::from(1832624140942590534u64));
    }

    #[test]
    fn inequality_2_examples() {
        // right-hand sides from a 30-digit mpmath evaluation
        let a = audit_inequality_2(2).unwrap();
        assert!(a.holds);
        assert_eq!(a.lhs, BigUint::from(2u32));
        assert!((a.rhs - 1.842_635_463_847_122_6).abs() < 1e-12);

        let a = audit_inequality_2(3).unwrap();
        assert!(!a.holds);
        assert_eq!(a.lhs, BigUint::from(3u32));
        assert!((a.rhs - 3.685_270_927_694_245).abs() < 1e-12);

        assert!(audit_inequality_2(64).unwrap().holds);
        assert!(!audit_inequality_2(1).unwrap().holds);
    }

    #[test]
    fn inequality_2_holds_for_even_fails_for_odd() {
        for n in 1..=64 {
            assert_eq!(audit_inequality_2(n).unwrap().holds, n % 2 == 0, "n={n}");
        }
    }

    #[test]
    fn kn_values() {
        assert_eq!(kn_crossing_lower(8).unwrap(), int(21));
        assert_eq!(kn_crossing_lower(4).unwrap(), frac(3, 10));
        assert_eq!(kn_crossing_lower(16).unwrap(), int(546));
        assert!(kn_crossing_lower(0).is_err());
    }

    #[test]
    fn multigraph_values() {
        assert_eq!(multigraph_factor(&int(21)).unwrap(), int(84));
        assert_eq!(multigraph_factor(&int(0)).unwrap(), int(0));
        assert_eq!(multigraph_factor(&int(546)).unwrap(), int(2184));
        assert!(multigraph_factor(&int(-1)).is_err());
    }

    #[test]
    fn leighton_values() {
        assert_eq!(leighton_bound(&int(84), 6, 8, 4).unwrap(), frac(-185, 3));
        assert_eq!(leighton_bound(&int(0), 1, 2, 0).unwrap(), int(0));
        assert_eq!(leighton_bound(&int(2184), 10, 16, 5).unwrap(), frac(-4454, 25));
        assert!(leighton_bound(&int(1), 0, 2, 0).is_err());
    }

    #[test]
    fn assembled_values() {
        assert_eq!(fq_lower_assembled(4, &BigUint::from(10u32)).unwrap(), frac(-4454, 25));
        assert_eq!(fq_lower_assembled(3, &BigUint::from(6u32)).unwrap(), frac(-185, 3));
        let cg = class_formula(12, EdgeClass::DimT).unwrap();
        let v = fq_lower_assembled(12, &cg).unwrap();
        assert!(v.is_positive());
        assert_eq!(v, frac(50820707968, 48373));
        assert!(fq_lower_assembled(3, &BigUint::zero()).is_err());
    }

    #[test]
    fn closed_form_lower_sign_change() {
        assert!(fq_lower_paper(3).unwrap() < 0.0);
        assert!(fq_lower_paper(9).unwrap() < 0.0);
        let v10 = fq_lower_paper(10).unwrap();
        assert!(v10 > 0.0);
        assert!((v10 - 27418.69003519474).abs() / v10 < 1e-12);
    }

    #[test]
    fn qn_values() {
        assert_eq!(qn_upper_conjecture(3).unwrap(), BigInt::from(0));
        assert_eq!(qn_upper_conjecture(4).unwrap(), BigInt::from(8));
        assert_eq!(qn_upper_conjecture(5).unwrap(), BigInt::from(56));
        assert_eq!(qn_lower_sv(4).unwrap(), frac(-616, 5));
        assert_eq!(qn_lower_sv(1).unwrap(), frac(-9, 5));
        assert!(qn_lower_sv(12).unwrap().is_positive());
    }

    #[test]
    fn euler_values() {
        assert_eq!(bipartite_euler_lb(8, 16).unwrap(), 4);
        assert_eq!(bipartite_euler_lb(4, 4).unwrap(), 0);
        assert_eq!(bipartite_euler_lb(8, 12).unwrap(), 0);
        assert!(bipartite_euler_lb(2, 1).is_err());
    }

    #[test]
    fn lower_real_digits_never_round_up() {
        for &v in &[27418.69003519474f64, -2041.9120753844254, 1.0 / 3.0, -2.0 / 3.0, 0.1, 1e23f64.next_down()] {
            let s = LowerReal(v).to_digits();
            let parsed: f64 = s.parse().unwrap();
            assert!(parsed <= v, "{s} > {v}");
            assert!((v - parsed).abs() <= v.abs() * 1e-13, "{s} vs {v}");
        }
    }

    #[test]
    fn reports() {
        let r = bound_report(3).unwrap();
        assert_eq!(r.upper_fq, Some(BigInt::from(4)));
        assert_eq!(r.small_case_exact, Some(4));
        assert!(r.lower_fq_paper.0 < 0.0);
        assert!(!r.audits.inequality_1.holds);

        let r = bound_report(2).unwrap();
        assert_eq!(r.small_case_exact, Some(0));
        assert_eq!(r.upper_fq, None);

        let r = bound_report(6).unwrap();
        assert_eq!(r.upper_fq, Some(BigInt::from(976)));
        assert!(r.audits.inequality_1.holds);

        let r = bound_report(5).unwrap();
        assert_eq!(r.upper_fq, Some(BigInt::from(192)));
        assert!(!r.audits.inequality_1.holds);

        let r = bound_report(10).unwrap();
        assert_eq!(r.upper_fq, Some(BigInt::from(343808)));
        assert!(r.lower_fq_paper.0 > 0.0);
        assert!(r.is_consistent());
        assert_eq!(r.audits.inequality_1.source, CongestionSource::Census);
        assert_eq!(bound_report(11).unwrap().audits.inequality_1.source, CongestionSource::ClosedForm);
        assert!(bound_report(1).is_err());
    }

    #[test]
    fn report_json() {
        let v = serde_json::to_value(bound_report(3).unwrap()).unwrap();
        assert_eq!(v["upper_fq"], "4");
        assert_eq!(v["lower_fq_assembled"], "-185/3");
        assert_eq!(v["lower_fq_paper"]["rounding"], "toward-negative-infinity");
        assert_eq!(v["qn_lower_sv"], "-184/5");
        assert_eq!(v["audits"]["inequality_1"]["bound"], "5");
        assert_eq!(v["small_case_exact"], 4);
    }
}
