use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::{
    abel_crosscheck, density_estimate, dm_lognorm, epsilon_sum, growth_report, subexp_density, AbelCheck,
    AnalyticsError, DensityCurve, DensityParameter, EpsilonSumResult, GrowthReport, SubexponentialSpec,
};
use crate::algebra::ProjectivePointQ;
use crate::dynamics::{DPrimeOptions, SemigroupSystem};
use crate::modp::OrbitRecord;

#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    pub epsilons: Vec<f64>,
    pub gammas: Vec<f64>,
    /// Grid of `s`; `None` uses `1 + 1/log X` alone.
    pub s_grid: Option<Vec<f64>>,
    pub subexponential: SubexponentialSpec,
    pub m_list: Vec<u64>,
    pub dprime: DPrimeOptions,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            epsilons: vec![0.1, 0.5, 1.0],
            gammas: (1..=9).map(|i| i as f64 / 10.0).collect(),
            s_grid: None,
            subexponential: SubexponentialSpec::new(1.0, 0.5).expect("valid constants"),
            m_list: (1..=8).collect(),
            dprime: DPrimeOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DmRow {
    pub m: u64,
    pub log_norm: f64,
}

/// Everything `analyze` reports, truncated at `prime_bound`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub prime_bound: u64,
    pub truncation: String,
    pub primes: usize,
    pub good_primes: usize,
    pub epsilon_sums: Vec<EpsilonSumResult>,
    /// Largest `epsilon * value` over the epsilon grid.
    pub implied_c_max: f64,
    pub abel: Vec<AbelCheck>,
    pub abel_ok: bool,
    pub densities: Vec<DensityCurve>,
    pub subexponential: DensityCurve,
    pub dm: Vec<DmRow>,
    pub growth: Option<GrowthReport>,
    pub growth_note: Option<String>,
}

impl AnalysisReport {
    pub fn build(
        system: &SemigroupSystem,
        point: &ProjectivePointQ,
        records: &[OrbitRecord],
        prime_bound: u64,
        options: &AnalysisOptions,
    ) -> Result<Self, AnalyticsError> {
        let s_grid = options.s_grid.clone().unwrap_or_else(|| vec![1.0 + 1.0 / (prime_bound as f64).ln()]);
        let epsilon_sums =
            options.epsilons.iter().map(|&e| epsilon_sum(records, e)).collect::<Result<Vec<_>, _>>()?;
        let implied_c_max = epsilon_sums.iter().map(|e| e.implied_c).fold(0.0, f64::max);
        let abel = options.epsilons.iter().map(|&e| abel_crosscheck(records, e)).collect::<Result<Vec<_>, _>>()?;
        let densities = options
            .gammas
            .iter()
            .map(|&g| density_estimate(records, g, &s_grid).map(|c| c.with_comparison(implied_c_max)))
            .collect::<Result<Vec<_>, _>>()?;
        let (growth, growth_note) = if system.rank() < 2 {
            (None, Some("D'(m) needs at least two maps".to_string()))
        } else {
            match growth_report(system, point, &options.m_list, &options.dprime) {
                Ok(g) => (Some(g), None),
                Err(e) => (None, Some(e.to_string())),
            }
        };
        Ok(Self {
            prime_bound,
            truncation: format!("all sums truncated at X = {prime_bound}"),
            primes: records.len(),
            good_primes: records.iter().filter(|r| r.good).count(),
            abel_ok: abel.iter().all(AbelCheck::passes),
            epsilon_sums,
            implied_c_max,
            abel,
            densities,
            subexponential: subexp_density(records, &options.subexponential, &s_grid),
            dm: options.m_list.iter().map(|&m| DmRow { m, log_norm: dm_lognorm(records, m) }).collect(),
            growth,
            growth_note,
        })
    }

    /// Plot-ready tables, one per grid.
    pub fn tables(&self) -> Vec<CsvTable> {
        let f = |x: f64| x.to_string();
        let opt = |x: Option<f64>| x.map_or_else(|| "NA".to_string(), f);
        let mut tables = vec![
            CsvTable {
                name: "epsilon_sums",
                header: vec!["epsilon", "value", "implied_c", "abel_regrouped", "abel_relative_residual"],
                rows: self
                    .epsilon_sums
                    .iter()
                    .zip(&self.abel)
                    .map(|(e, a)| vec![f(e.epsilon), f(e.value), f(e.implied_c), f(a.regrouped), f(a.relative_residual)])
                    .collect(),
            },
            CsvTable {
                name: "densities",
                header: vec!["family", "gamma", "c", "beta", "s", "members", "value", "comparison"],
                rows: self
                    .densities
                    .iter()
                    .chain(std::iter::once(&self.subexponential))
                    .flat_map(|c| {
                        let (family, gamma, cc, beta) = match c.parameter {
                            DensityParameter::Gamma { gamma } => ("gamma", f(gamma), "NA".into(), "NA".into()),
                            DensityParameter::Subexponential { c, beta } => ("subexponential", "NA".into(), f(c), f(beta)),
                        };
                        c.points
                            .iter()
                            .map(|pt| {
                                vec![
                                    family.to_string(),
                                    gamma.clone(),
                                    cc.clone(),
                                    beta.clone(),
                                    f(pt.s),
                                    c.members.to_string(),
                                    f(pt.value),
                                    opt(c.comparison),
                                ]
                            })
                            .collect::<Vec<_>>()
                    })
                    .collect(),
            },
            CsvTable {
                name: "dm",
                header: vec!["m", "log_norm_dm"],
                rows: self.dm.iter().map(|r| vec![r.m.to_string(), f(r.log_norm)]).collect(),
            },
        ];
        if let Some(g) = &self.growth {
            tables.push(CsvTable {
                name: "growth",
                header: vec!["m", "k", "log_dprime", "loglog_dprime", "c5_log_m_plus_1"],
                rows: g
                    .rows
                    .iter()
                    .map(|r| {
                        vec![r.m.to_string(), r.k.to_string(), opt(r.log_dprime), opt(r.loglog_dprime), f(r.slope_bound)]
                    })
                    .collect(),
            });
        }
        tables
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CsvTable {
    pub name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// Writes `<dir>/<name>.csv` with a leading `# truncated at X = ...` line.
pub fn write_csv(dir: &Path, table: &CsvTable, prime_bound: u64) -> std::io::Result<()> {
    let mut file = std::fs::File::create(dir.join(format!("{}.csv", table.name)))?;
    writeln!(file, "# truncated at X = {prime_bound}")?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    w.flush()
}
