//! Figure sweeps rendered as CSV tables.

use std::fmt;
use std::str::FromStr;

use crate::csv::CsvTable;
use crate::error::{Error, Result};
use crate::metrics::{
    averaged_distances, distance_mean, distance_variance, optimal_cor_widths, optimal_d1_cor,
    printed_sequential_average_d2, printed_sequential_d2, AverageMethod, AverageSpec, Convention, EnsembleSpec,
};
use crate::schemes::{MeterConfig, SchemeSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
    Fig5a,
    Fig5b,
    Fig6a,
    Fig6b,
    Fig7a,
    Fig7b,
    Fig8a,
    Fig8b,
    VarcorA,
    VarcorB,
}

impl FigureId {
    pub const ALL: [FigureId; 14] = [
        Self::Fig3a,
        Self::Fig3b,
        Self::Fig4a,
        Self::Fig4b,
        Self::Fig5a,
        Self::Fig5b,
        Self::Fig6a,
        Self::Fig6b,
        Self::Fig7a,
        Self::Fig7b,
        Self::Fig8a,
        Self::Fig8b,
        Self::VarcorA,
        Self::VarcorB,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Fig3a => "fig3a",
            Self::Fig3b => "fig3b",
            Self::Fig4a => "fig4a",
            Self::Fig4b => "fig4b",
            Self::Fig5a => "fig5a",
            Self::Fig5b => "fig5b",
            Self::Fig6a => "fig6a",
            Self::Fig6b => "fig6b",
            Self::Fig7a => "fig7a",
            Self::Fig7b => "fig7b",
            Self::Fig8a => "fig8a",
            Self::Fig8b => "fig8b",
            Self::VarcorA => "varcor_a",
            Self::VarcorB => "varcor_b",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|id| id.as_str() == s).ok_or_else(|| {
            let valid: Vec<_> = Self::ALL.iter().map(|id| id.as_str()).collect();
            Error::InvalidParameter(format!("unknown figure id {s:?}; valid ids: {}", valid.join(", ")))
        })
    }
}

pub const DEFAULT_POINTS: usize = 200;
pub const DEFAULT_N: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub figure: FigureId,
    pub n: Option<usize>,
    pub nbar: Option<f64>,
    pub r: Option<f64>,
    pub points: Option<usize>,
    /// Use the printed sequential `d2` expressions instead of the re-derived ones.
    pub paper_verbatim: bool,
    pub convention: Convention,
}

impl SweepSpec {
    pub fn new(figure: FigureId) -> Self {
        Self {
            figure,
            n: None,
            nbar: None,
            r: None,
            points: None,
            paper_verbatim: false,
            convention: Convention::PaperAsymptotic,
        }
    }
}

/// Grid from `start/denom` to `end/denom`; each node is a single rounded division.
fn grid(start: i64, end: i64, denom: f64, points: usize) -> Vec<f64> {
    let k = (points - 1) as f64;
    (0..points)
        .map(|i| {
            let i = i as f64;
            (start as f64 * (k - i) + end as f64 * i) / (k * denom)
        })
        .collect()
}

#[derive(Clone, Copy)]
enum Measure {
    Mean,
    Variance,
}

fn table(header: &[&str], rows: Vec<Vec<f64>>) -> Result<CsvTable> {
    CsvTable::new(header.iter().map(|h| h.to_string()).collect(), rows)
}

pub fn run_sweep(spec: &SweepSpec) -> Result<CsvTable> {
    use FigureId::*;
    let points = spec.points.unwrap_or(DEFAULT_POINTS);
    if points < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid resolution must be at least 2, got {points}"
        )));
    }
    let n = spec.n.unwrap_or(DEFAULT_N);
    let width_grid = || grid(1, 200, 100.0, points);
    let unit_grid = || grid(0, 199, 100.0, points);

    let point_value = |scheme: &SchemeSpec, ens: &EnsembleSpec, measure: Measure| -> Result<f64> {
        match (measure, scheme) {
            (Measure::Mean, _) => distance_mean(scheme, ens),
            (Measure::Variance, SchemeSpec::Sequential(m)) if spec.paper_verbatim => printed_sequential_d2(ens, *m),
            (Measure::Variance, _) => distance_variance(scheme, ens, spec.convention),
        }
    };

    let width_sweep = |r: f64, measure: Measure| -> Result<CsvTable> {
        let ens = EnsembleSpec::squeezed(n, 0.0, 0.0, r, spec.nbar.unwrap_or(0.0))?;
        let hom = point_value(&SchemeSpec::Homodyne, &ens, measure)?;
        let het = point_value(&SchemeSpec::Heterodyne, &ens, measure)?;
        let rows = width_grid()
            .into_iter()
            .map(|dq1| {
                let seq = SchemeSpec::Sequential(MeterConfig::single(dq1)?);
                let ak = SchemeSpec::ArthursKelly(MeterConfig::from_dq1_dp2(dq1, 0.5)?);
                Ok(vec![
                    dq1,
                    hom,
                    het,
                    point_value(&seq, &ens, measure)?,
                    point_value(&ak, &ens, measure)?,
                ])
            })
            .collect::<Result<_>>()?;
        table(&["dq1", "homodyne", "heterodyne", "sequential", "arthurs_kelly"], rows)
    };

    let squeeze_sweep = |measure: Measure| -> Result<CsvTable> {
        let nbar = spec.nbar.unwrap_or(0.0);
        let rows = unit_grid()
            .into_iter()
            .map(|r| {
                let ens = EnsembleSpec::squeezed(n, 0.0, 0.0, r, nbar)?;
                Ok(vec![
                    r,
                    point_value(&SchemeSpec::Homodyne, &ens, measure)?,
                    point_value(&SchemeSpec::Heterodyne, &ens, measure)?,
                ])
            })
            .collect::<Result<_>>()?;
        table(&["r", "homodyne", "heterodyne"], rows)
    };

    let thermal_sweep = |measure: Measure| -> Result<CsvTable> {
        let r = spec.r.unwrap_or(1.0);
        let rows = unit_grid()
            .into_iter()
            .map(|nbar| {
                let ens = EnsembleSpec::squeezed(n, 0.0, 0.0, r, nbar)?;
                Ok(vec![
                    nbar,
                    point_value(&SchemeSpec::Homodyne, &ens, measure)?,
                    point_value(&SchemeSpec::Heterodyne, &ens, measure)?,
                ])
            })
            .collect::<Result<_>>()?;
        table(&["nbar", "homodyne", "heterodyne"], rows)
    };

    let averaged_sweep = |default_nbar: f64, measure: Measure| -> Result<CsvTable> {
        let avg = AverageSpec::new(spec.nbar.unwrap_or(default_nbar), n)?;
        let (method, convention) = match (measure, spec.convention) {
            (Measure::Mean, _) => (AverageMethod::ClosedForm, Convention::PaperAsymptotic),
            (Measure::Variance, Convention::PaperAsymptotic) => {
                (AverageMethod::ClosedForm, Convention::PaperAsymptotic)
            }
            (Measure::Variance, c) => (AverageMethod::Quadrature, c),
        };
        let pick = |(d1, d2): (f64, f64)| match measure {
            Measure::Mean => d1,
            Measure::Variance => d2,
        };
        let value = |scheme: &SchemeSpec| -> Result<f64> {
            match (measure, scheme) {
                (Measure::Variance, SchemeSpec::Sequential(m)) if spec.paper_verbatim => {
                    Ok(printed_sequential_average_d2(*m, avg.nbar, avg.n))
                }
                _ => averaged_distances(scheme, &avg, method, convention).map(pick),
            }
        };
        let hom = value(&SchemeSpec::Homodyne)?;
        let het = value(&SchemeSpec::Heterodyne)?;
        let rows = width_grid()
            .into_iter()
            .map(|dq1| {
                let seq = SchemeSpec::Sequential(MeterConfig::single(dq1)?);
                let ak = SchemeSpec::ArthursKelly(MeterConfig::from_dq1_dp2(dq1, 0.5)?);
                Ok(vec![dq1, hom, het, value(&seq)?, value(&ak)?])
            })
            .collect::<Result<_>>()?;
        table(&["dq1", "homodyne", "heterodyne", "sequential", "arthurs_kelly"], rows)
    };

    let kappa_grid = || grid(-100, 99, 50.0, points);

    match spec.figure {
        Fig3a => width_sweep(spec.r.unwrap_or(0.0), Measure::Mean),
        Fig3b => width_sweep(spec.r.unwrap_or(1.0), Measure::Mean),
        Fig4a => width_sweep(spec.r.unwrap_or(0.0), Measure::Variance),
        Fig4b => width_sweep(spec.r.unwrap_or(1.0), Measure::Variance),
        Fig5a => squeeze_sweep(Measure::Mean),
        Fig5b => thermal_sweep(Measure::Mean),
        Fig6a => squeeze_sweep(Measure::Variance),
        Fig6b => thermal_sweep(Measure::Variance),
        Fig7a => averaged_sweep(0.0, Measure::Mean),
        Fig7b => averaged_sweep(1.0, Measure::Mean),
        Fig8a => averaged_sweep(0.0, Measure::Variance),
        Fig8b => averaged_sweep(1.0, Measure::Variance),
        VarcorA => {
            let ens = EnsembleSpec::squeezed(n, 0.0, 0.0, spec.r.unwrap_or(0.0), spec.nbar.unwrap_or(0.0))?;
            let het = distance_mean(&SchemeSpec::Heterodyne, &ens)?;
            let rows = kappa_grid()
                .into_iter()
                .map(|k| Ok(vec![k, optimal_d1_cor(k, &ens)?, het]))
                .collect::<Result<_>>()?;
            table(&["kappa", "modified_ak_optimal", "heterodyne"], rows)
        }
        VarcorB => {
            let rows = kappa_grid()
                .into_iter()
                .map(|k| {
                    let (dq1, dp2) = optimal_cor_widths(k);
                    vec![k, dq1, dp2]
                })
                .collect();
            table(&["kappa", "dq1", "dp2"], rows)
        }
    }
}
