//! Statistics over a finite set of orbit records: the epsilon-sum, its Abel
//! regrouping, logarithmic densities, `log N D(m)` and the growth of `D'(m)`.
//!
//! Every value is a truncation at the largest prime of the record set. Bad
//! primes carry `m_p = inf` and contribute zero to all sums.

mod report;

use serde::Serialize;
use thiserror::Error;

pub use report::{write_csv, AnalysisReport, AnalysisOptions, CsvTable};

use crate::algebra::ProjectivePointQ;
use crate::dynamics::{dprime, pigeonhole_length, DPrimeOptions, DynamicsError, SemigroupSystem};
use crate::modp::OrbitRecord;

/// Relative tolerance for the Abel identity.
pub const ABEL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticsError {
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(f64),
    #[error("gamma must lie in (0, 1), got {0}")]
    GammaOutOfRange(f64),
    #[error("invalid subexponential spec: {0}")]
    InvalidSpec(String),
    #[error("m must be at least 1")]
    ZeroM,
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// Compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

impl FromIterator<f64> for Kahan {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut k = Kahan::default();
        iter.into_iter().for_each(|x| k.add(x));
        k
    }
}

/// Pairwise summation with a shape fixed by the length alone. Since rounded
/// addition is monotone, so is this sum in each term, which keeps the density
/// and `D(m)` columns exactly monotone.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().fold(0.0, |a, &x| a + x);
    }
    let (l, r) = xs.split_at(xs.len() / 2);
    pairwise_sum(l) + pairwise_sum(r)
}

/// `g(t) = log t / t`.
fn g(p: u64) -> f64 {
    (p as f64).ln() / p as f64
}

fn good(records: &[OrbitRecord]) -> impl Iterator<Item = (u64, u64)> + '_ {
    records.iter().filter_map(|r| r.m_finite().filter(|_| r.good).map(|m| (r.p, m)))
}

fn prime_bound(records: &[OrbitRecord]) -> u64 {
    records.iter().map(|r| r.p).max().unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpsilonSumResult {
    pub epsilon: f64,
    pub prime_bound: u64,
    pub value: f64,
    /// `epsilon * value`, the constant implied by the truncated data.
    pub implied_c: f64,
}

/// `sum_p log p / (p m_p^eps)` over the good primes of the records.
pub fn epsilon_sum(records: &[OrbitRecord], epsilon: f64) -> Result<EpsilonSumResult, AnalyticsError> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(AnalyticsError::NonPositiveEpsilon(epsilon));
    }
    let terms: Vec<f64> = good(records).map(|(p, m)| g(p) * (m as f64).powf(-epsilon)).collect();
    let value = pairwise_sum(&terms);
    Ok(EpsilonSumResult { epsilon, prime_bound: prime_bound(records), value, implied_c: epsilon * value })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AbelCheck {
    pub epsilon: f64,
    pub direct: f64,
    pub regrouped: f64,
    pub relative_residual: f64,
}

impl AbelCheck {
    pub fn passes(&self) -> bool {
        self.relative_residual <= ABEL_TOLERANCE
    }
}

/// The epsilon-sum evaluated directly and by Abel summation,
/// `sum_{m=1}^{M} (G(m) - G(m+1)) S(m) + G(M+1) S(M)` with `G(t) = t^-eps` and
/// `S(m) = sum_{m_p <= m} log p / p`.
pub fn abel_crosscheck(records: &[OrbitRecord], epsilon: f64) -> Result<AbelCheck, AnalyticsError> {
    let direct = epsilon_sum(records, epsilon)?.value;
    let mut by_m: Vec<(u64, f64)> = good(records).map(|(p, m)| (m, g(p))).collect();
    by_m.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let big_g = |t: u64| (-epsilon * (t as f64).ln()).exp();
    let mut s = Kahan::default();
    let mut total = Kahan::default();
    let mut idx = 0;
    let max_m = by_m.last().map_or(0, |x| x.0);
    for m in 1..=max_m {
        while idx < by_m.len() && by_m[idx].0 == m {
            s.add(by_m[idx].1);
            idx += 1;
        }
        // G(m) - G(m+1) = m^-eps (1 - (1 + 1/m)^-eps), evaluated without cancellation
        let dg = big_g(m) * -(-epsilon * (1.0 / m as f64).ln_1p()).exp_m1();
        total.add(dg * s.value());
    }
    total.add(big_g(max_m + 1) * s.value());
    let regrouped = total.value();
    let scale = direct.abs().max(regrouped.abs());
    let relative_residual = if scale == 0.0 { 0.0 } else { (direct - regrouped).abs() / scale };
    Ok(AbelCheck { epsilon, direct, regrouped, relative_residual })
}

/// Which family of prime sets a density curve belongs to.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityParameter {
    /// `P_gamma = {p : m_p <= p^gamma}`.
    Gamma { gamma: f64 },
    /// `P_L = {p : m_p <= L(p)}`.
    Subexponential { c: f64, beta: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityPoint {
    pub s: f64,
    pub value: f64,
}

/// Truncated `(s - 1) sum_{p in P, p <= X} log p / p^s` over a grid of `s`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityCurve {
    pub parameter: DensityParameter,
    pub prime_bound: u64,
    pub members: usize,
    pub points: Vec<DensityPoint>,
    /// `implied_C * gamma` from a companion epsilon-sum, when attached.
    pub comparison: Option<f64>,
}

impl DensityCurve {
    pub fn with_comparison(mut self, implied_c: f64) -> Self {
        if let DensityParameter::Gamma { gamma } = self.parameter {
            self.comparison = Some(implied_c * gamma);
        }
        self
    }
}

fn density_curve(
    records: &[OrbitRecord],
    parameter: DensityParameter,
    s_grid: &[f64],
    member: impl Fn(u64, u64) -> bool,
) -> DensityCurve {
    let flags: Vec<(u64, bool)> = good(records).map(|(p, m)| (p, member(p, m))).collect();
    let members = flags.iter().filter(|f| f.1).count();
    let points = s_grid
        .iter()
        .map(|&s| {
            let terms: Vec<f64> =
                flags.iter().map(|&(p, inside)| if inside { (p as f64).ln() * (p as f64).powf(-s) } else { 0.0 }).collect();
            DensityPoint { s, value: (s - 1.0) * pairwise_sum(&terms) }
        })
        .collect();
    DensityCurve { parameter, prime_bound: prime_bound(records), members, points, comparison: None }
}

/// Density curve of `P_gamma`.
pub fn density_estimate(records: &[OrbitRecord], gamma: f64, s_grid: &[f64]) -> Result<DensityCurve, AnalyticsError> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(AnalyticsError::GammaOutOfRange(gamma));
    }
    Ok(density_curve(records, DensityParameter::Gamma { gamma }, s_grid, |p, m| {
        (m as f64).ln() <= gamma * (p as f64).ln()
    }))
}

/// `L(t) = exp(c (log t)^beta)` with `c > 0` and `0 < beta < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SubexponentialSpec {
    c: f64,
    beta: f64,
}

impl SubexponentialSpec {
    pub fn new(c: f64, beta: f64) -> Result<Self, AnalyticsError> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(AnalyticsError::InvalidSpec(format!("c must be positive and finite, got {c}")));
        }
        if !(beta > 0.0 && beta < 1.0) {
            return Err(AnalyticsError::InvalidSpec(format!("beta must lie in (0, 1), got {beta}")));
        }
        Ok(Self { c, beta })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn log_l(&self, t: f64) -> f64 {
        self.c * t.ln().powf(self.beta)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.log_l(t).exp()
    }
}

/// Density curve of `P_L`.
pub fn subexp_density(records: &[OrbitRecord], spec: &SubexponentialSpec, s_grid: &[f64]) -> DensityCurve {
    let parameter = DensityParameter::Subexponential { c: spec.c, beta: spec.beta };
    density_curve(records, parameter, s_grid, |p, m| (m as f64).ln() <= spec.log_l(p as f64))
}

/// `log N D(m) = sum_{m_p <= m} log p`.
pub fn dm_lognorm(records: &[OrbitRecord], m: u64) -> f64 {
    let terms: Vec<f64> = good(records).map(|(p, mp)| if mp <= m { (p as f64).ln() } else { 0.0 }).collect();
    pairwise_sum(&terms)
}

/// `C5 = 1 + log(d_1 + ... + d_r) / log r`.
pub fn growth_constant(degrees: &[usize]) -> f64 {
    let total: usize = degrees.iter().sum();
    1.0 + (total as f64).ln() / (degrees.len() as f64).ln()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    pub m: u64,
    pub k: usize,
    /// `None` when `D'(m) = 0`.
    pub log_dprime: Option<f64>,
    pub loglog_dprime: Option<f64>,
    /// `C5 log(m + 1)`.
    pub slope_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub c5: f64,
    pub rows: Vec<GrowthRow>,
}

/// Compares `log log D'(m)` with `C5 log(m + 1)` for each `m`.
pub fn growth_report(
    system: &SemigroupSystem,
    point: &ProjectivePointQ,
    m_list: &[u64],
    options: &DPrimeOptions,
) -> Result<GrowthReport, AnalyticsError> {
    if system.rank() < 2 {
        return Err(DynamicsError::InvalidArgument("growth report needs at least two maps".into()).into());
    }
    let c5 = growth_constant(&system.degrees());
    let mut rows = Vec::with_capacity(m_list.len());
    for &m in m_list {
        if m == 0 {
            return Err(AnalyticsError::ZeroM);
        }
        let d = dprime(system, point, m, options)?;
        let log_dprime = d.log_value();
        rows.push(GrowthRow {
            m,
            k: pigeonhole_length(m, system.rank()),
            log_dprime,
            loglog_dprime: log_dprime.filter(|&l| l > 0.0).map(f64::ln),
            slope_bound: c5 * ((m + 1) as f64).ln(),
        });
    }
    Ok(GrowthReport { c5, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::RationalMapQ;
    use crate::modp::OrbitSize;
    use proptest::prelude::*;

    fn rec(p: u64, m: Option<u64>) -> OrbitRecord {
        OrbitRecord {
            p,
            good: m.is_some(),
            m: m.map_or(OrbitSize::Infinite, OrbitSize::Finite),
            visited_cap_hit: false,
            t_ms: 0.0,
        }
    }

    fn toy() -> Vec<OrbitRecord> {
        vec![rec(2, Some(1)), rec(3, Some(2)), rec(5, Some(3))]
    }

    #[test]
    fn epsilon_sum_examples() {
        let want = 2f64.ln() / 2.0 + 3f64.ln() / 6.0 + 5f64.ln() / 15.0;
        let r = epsilon_sum(&toy(), 1.0).unwrap();
        assert!((r.value - want).abs() < 1e-15);
        assert!((r.value - 0.6370).abs() < 5e-5);
        assert_eq!(r.prime_bound, 5);
        let mut with_bad = toy();
        with_bad.insert(0, rec(2, None));
        with_bad.remove(1);
        with_bad.push(rec(7, None));
        let a = epsilon_sum(&with_bad, 0.5).unwrap().value;
        let b = epsilon_sum(&toy()[1..], 0.5).unwrap().value;
        assert_eq!(a, b);
        let ones: Vec<_> = [2, 3, 5, 7, 11].iter().map(|&p| rec(p, Some(1))).collect();
        let mertens: f64 = [2u64, 3, 5, 7, 11].iter().map(|&p| g(p)).sum();
        assert!((epsilon_sum(&ones, 0.3).unwrap().value - mertens).abs() < 1e-14);
        assert_eq!(epsilon_sum(&toy(), 0.0), Err(AnalyticsError::NonPositiveEpsilon(0.0)));
    }

    #[test]
    fn abel_examples() {
        let c = abel_crosscheck(&toy(), 1.0).unwrap();
        assert!(c.passes(), "{c:?}");
        assert!((c.regrouped - 0.6370).abs() < 5e-5);
        let one = abel_crosscheck(&[rec(2, Some(1))], 0.7).unwrap();
        assert!((one.direct - 2f64.ln() / 2.0).abs() < 1e-15);
        assert!(one.passes());
        let empty = abel_crosscheck(&[], 1.0).unwrap();
        assert_eq!((empty.direct, empty.regrouped), (0.0, 0.0));
    }

    #[test]
    fn density_examples() {
        let c = density_estimate(&[rec(5, Some(2))], 0.5, &[1.5]).unwrap();
        assert_eq!(c.members, 1);
        assert!((c.points[0].value - 0.5 * 5f64.ln() / 5f64.powf(1.5)).abs() < 1e-15);
        assert!((c.points[0].value - 0.0720).abs() < 5e-5);
        let full: Vec<_> = [3u64, 5, 7, 11].iter().map(|&p| rec(p, Some(p + 1))).collect();
        let c = density_estimate(&full, 0.9, &[1.1, 2.0]).unwrap();
        assert_eq!(c.members, 0);
        assert!(c.points.iter().all(|pt| pt.value == 0.0));
        assert_eq!(density_estimate(&full, 1.0, &[1.1]), Err(AnalyticsError::GammaOutOfRange(1.0)));
        let c = density_estimate(&toy(), 0.5, &[1.5]).unwrap().with_comparison(2.0);
        assert_eq!(c.comparison, Some(1.0));
    }

    #[test]
    fn subexponential_examples() {
        let spec = SubexponentialSpec::new(1.0, 0.5).unwrap();
        assert!((spec.eval(100.0) - 8.55).abs() < 0.01);
        let c = subexp_density(&[rec(97, Some(9))], &spec, &[1.1]);
        assert_eq!(c.members, 0);
        let c = subexp_density(&[rec(97, Some(8))], &spec, &[1.1]);
        assert_eq!(c.members, 1);
        let ones: Vec<_> = [2u64, 3, 5].iter().map(|&p| rec(p, Some(1))).collect();
        let tiny = SubexponentialSpec::new(1e-9, 0.5).unwrap();
        assert_eq!(subexp_density(&ones, &tiny, &[1.1]).members, 3);
        assert_eq!(subexp_density(&toy(), &tiny, &[1.1]).members, 1);
        assert!(SubexponentialSpec::new(1.0, 1.0).is_err());
        assert!(SubexponentialSpec::new(0.0, 0.5).is_err());
    }

    #[test]
    fn dm_examples() {
        assert!((dm_lognorm(&toy(), 2) - 6f64.ln()).abs() < 1e-15);
        assert_eq!(dm_lognorm(&toy(), 0), 0.0);
        assert!((dm_lognorm(&toy(), 99) - 30f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn growth_constants() {
        assert!((growth_constant(&[2, 2]) - 3.0).abs() < 1e-15);
        assert!((growth_constant(&[4, 4]) - 4.0).abs() < 1e-15);
        let s = SemigroupSystem::new(vec![
            RationalMapQ::poly(&[1, 0, 1]).unwrap(),
            RationalMapQ::poly(&[0, 1, 2]).unwrap(),
        ])
        .unwrap();
        let rep = growth_report(&s, &ProjectivePointQ::affine(3), &[1, 2, 5], &DPrimeOptions::default()).unwrap();
        assert_eq!(rep.rows[0].k, 1);
        assert_eq!(rep.rows.iter().map(|r| r.k).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert!(rep.rows.iter().all(|r| r.log_dprime.is_some()));
        let pm = SemigroupSystem::new(vec![
            RationalMapQ::poly(&[1, 0, 1]).unwrap(),
            RationalMapQ::poly(&[-1, 0, 1]).unwrap(),
        ])
        .unwrap();
        let rep = growth_report(&pm, &ProjectivePointQ::affine(0), &[1, 3], &DPrimeOptions::default()).unwrap();
        assert!(rep.rows[0].log_dprime.is_some());
        assert_eq!(rep.rows[1].log_dprime, None);
    }

    fn records() -> impl Strategy<Value = Vec<OrbitRecord>> {
        proptest::collection::vec((0u64..400, proptest::option::weighted(0.9, 1u64..500)), 0..60).prop_map(|v| {
            let primes: Vec<u64> = primal::Primes::all().take(v.len()).map(|p| p as u64).collect();
            v.iter()
                .zip(primes)
                .map(|(&(_, m), p)| rec(p, m.map(|m| 1 + m % (p + 1))))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn abel_identity_holds(rs in records(), eps in 0.01f64..3.0) {
            let c = abel_crosscheck(&rs, eps).unwrap();
            prop_assert!(c.passes(), "{:?}", c);
        }

        #[test]
        fn epsilon_sum_is_non_increasing(rs in records(), a in 0.01f64..3.0, b in 0.01f64..3.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(epsilon_sum(&rs, hi).unwrap().value <= epsilon_sum(&rs, lo).unwrap().value);
        }

        #[test]
        fn densities_are_monotone_in_gamma(rs in records(), a in 0.01f64..0.99, b in 0.01f64..0.99, s in 1.01f64..2.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let x = density_estimate(&rs, lo, &[s]).unwrap();
            let y = density_estimate(&rs, hi, &[s]).unwrap();
            prop_assert!(x.members <= y.members);
            prop_assert!(x.points[0].value <= y.points[0].value);
        }

        #[test]
        fn dm_is_non_decreasing(rs in records(), a in 0u64..600, b in 0u64..600) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(dm_lognorm(&rs, lo) <= dm_lognorm(&rs, hi));
        }
    }
}
