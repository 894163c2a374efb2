//! Distance measures for finite-ensemble estimation of the mean (`d1`) and the
//! quadrature variances (`d2`).
//!
//! Every scheme estimates each quadrature by an equal-weight average over the
//! channels that read it. A channel fed by `m` copies with readout variance
//! `s2` contributes `s2/m` to the mean error and `2 s2^2/m` (or `2 s2^2/(m-1)`
//! with Bessel-corrected sample variances) to the variance error.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::numeric::{golden_section, integrate};
use crate::phase::{make_state, GaussianState, StateKind};
use crate::schemes::{readout_distributions, EnsembleShare, MeterConfig, Quadrature, SchemeSpec};

/// Number of identically prepared copies and their state.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    n: usize,
    state: GaussianState,
}

impl EnsembleSpec {
    pub fn new(n: usize, state: GaussianState) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidEnsemble { n, min: 1 });
        }
        if state.modes() != 1 {
            return Err(Error::InvalidDimension(format!(
                "ensemble state must be single-mode, got {} modes",
                state.modes()
            )));
        }
        Ok(Self { n, state })
    }

    /// Ensemble of squeezed coherent thermal states.
    pub fn squeezed(n: usize, q0: f64, p0: f64, r: f64, nbar: f64) -> Result<Self> {
        Self::new(n, make_state(StateKind::SqueezedCoherentThermal { q0, p0, r, nbar })?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn state(&self) -> &GaussianState {
        &self.state
    }
}

/// How the spread of a sample variance is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// `Var(s^2) = 2 sigma^4 / m`.
    #[default]
    PaperAsymptotic,
    /// Bessel-corrected sample variance of Gaussian data: `2 sigma^4 / (m - 1)`.
    ExactSmallSample,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceReport {
    pub d1: f64,
    pub d2: f64,
    pub scheme: SchemeSpec,
    pub convention: Convention,
}

fn channel_copies(share: EnsembleShare, n: usize) -> Result<usize> {
    if share == EnsembleShare::Half && n % 2 == 1 {
        return Err(Error::InvalidEnsemble { n, min: 2 });
    }
    Ok(share.copies(n))
}

fn accumulate<F>(scheme: &SchemeSpec, ens: &EnsembleSpec, term: F) -> Result<f64>
where
    F: Fn(f64, usize) -> Result<f64>,
{
    let channels = readout_distributions(scheme, ens.state())?;
    let mut total = 0.0;
    for quad in [Quadrature::Q, Quadrature::P] {
        let chans: Vec<_> = channels.for_quadrature(quad).collect();
        let weight = 1.0 / chans.len() as f64;
        for c in chans {
            let m = channel_copies(c.share, ens.n())?;
            total += weight * weight * term(c.law.variance, m)?;
        }
    }
    Ok(total)
}

/// Mean-estimation error `d1`.
pub fn distance_mean(scheme: &SchemeSpec, ens: &EnsembleSpec) -> Result<f64> {
    accumulate(scheme, ens, |var, m| Ok(var / m as f64))
}

/// Variance-estimation error `d2` under the given convention.
pub fn distance_variance(scheme: &SchemeSpec, ens: &EnsembleSpec, convention: Convention) -> Result<f64> {
    accumulate(scheme, ens, |var, m| {
        let dof = match convention {
            Convention::PaperAsymptotic => m,
            Convention::ExactSmallSample => {
                if m < 2 {
                    return Err(Error::InvalidEnsemble { n: ens.n(), min: 2 });
                }
                m - 1
            }
        };
        Ok(2.0 * var * var / dof as f64)
    })
}

pub fn distance_report(scheme: &SchemeSpec, ens: &EnsembleSpec, convention: Convention) -> Result<DistanceReport> {
    Ok(DistanceReport {
        d1: distance_mean(scheme, ens)?,
        d2: distance_variance(scheme, ens, convention)?,
        scheme: *scheme,
        convention,
    })
}

/// The sequential-scheme `d2` expression exactly as it appears in print.
///
/// Kept for comparison only; it does not reduce to the heterodyne value at the
/// optimal meter width (4.75/N against 4/N for a coherent state).
pub fn printed_sequential_d2(ens: &EnsembleSpec, meters: MeterConfig) -> Result<f64> {
    let (vq, vp) = (ens.state().cov().get(0, 0), ens.state().cov().get(1, 1));
    let (u, v) = (meters.dq1().powi(2), meters.dp1().powi(2));
    let n = ens.n() as f64;
    Ok(2.0 / n * (vp * vp + vq * (u + vq).powi(2) + v * (vq + vp + v).powi(2) + u * (u + vp).powi(2)))
}

/// Squeezing-averaged ensemble family: `r` uniform on `[r_lo, r_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AverageSpec {
    pub nbar: f64,
    pub r_lo: f64,
    pub r_hi: f64,
    pub n: usize,
}

impl AverageSpec {
    pub fn new(nbar: f64, n: usize) -> Result<Self> {
        Self::with_range(nbar, -1.0, 1.0, n)
    }

    pub fn with_range(nbar: f64, r_lo: f64, r_hi: f64, n: usize) -> Result<Self> {
        if !(nbar.is_finite() && nbar >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "nbar must be non-negative, got {nbar}"
            )));
        }
        if !(r_lo.is_finite() && r_hi.is_finite() && r_lo < r_hi) {
            return Err(Error::InvalidParameter(format!(
                "need r_lo < r_hi, got [{r_lo}, {r_hi}]"
            )));
        }
        if n < 2 {
            return Err(Error::InvalidEnsemble { n, min: 1 });
        }
        Ok(Self { nbar, r_lo, r_hi, n })
    }

    fn is_default_range(&self) -> bool {
        self.r_lo == -1.0 && self.r_hi == 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AverageMethod {
    ClosedForm,
    Quadrature,
}

/// Absolute tolerance of the quadrature route.
pub const AVERAGE_QUAD_TOL: f64 = 1e-10;

/// Squeezing-averaged `(d1, d2)`.
///
/// The closed form covers `r` uniform on `[-1, 1]` under the asymptotic
/// convention; the quadrature route accepts any range and convention.
pub fn averaged_distances(
    scheme: &SchemeSpec,
    avg: &AverageSpec,
    method: AverageMethod,
    convention: Convention,
) -> Result<(f64, f64)> {
    match method {
        AverageMethod::ClosedForm => {
            if !avg.is_default_range() {
                return Err(Error::Unsupported("closed-form averages require r in [-1, 1]".into()));
            }
            if convention != Convention::PaperAsymptotic {
                return Err(Error::Unsupported(
                    "closed-form averages use the asymptotic convention".into(),
                ));
            }
            Ok(closed_form_average(scheme, avg.nbar, avg.n))
        }
        AverageMethod::Quadrature => {
            let width = avg.r_hi - avg.r_lo;
            let ens_at = |r: f64| EnsembleSpec::squeezed(avg.n, 0.0, 0.0, r, avg.nbar);
            // Surface parameter errors before integrating.
            let probe = ens_at(avg.r_lo)?;
            distance_mean(scheme, &probe)?;
            distance_variance(scheme, &probe, convention)?;
            let d1 = integrate(
                |r| ens_at(r).and_then(|e| distance_mean(scheme, &e)).unwrap_or(f64::NAN),
                avg.r_lo,
                avg.r_hi,
                AVERAGE_QUAD_TOL * width,
            )? / width;
            let d2 = integrate(
                |r| {
                    ens_at(r)
                        .and_then(|e| distance_variance(scheme, &e, convention))
                        .unwrap_or(f64::NAN)
                },
                avg.r_lo,
                avg.r_hi,
                AVERAGE_QUAD_TOL * width,
            )? / width;
            Ok((d1, d2))
        }
    }
}

/// Meter-dependent offsets `(alpha, beta)` added to the `q` and `p` readout
/// variances by the Arthurs-Kelly family.
fn ak_offsets(m: MeterConfig, kappa: f64) -> (f64, f64) {
    (
        m.dq1().powi(2) + (kappa - 1.0).powi(2) / 4.0 * m.dq2().powi(2),
        (kappa + 1.0).powi(2) / 4.0 * m.dp1().powi(2) + m.dp2().powi(2),
    )
}

fn closed_form_average(scheme: &SchemeSpec, nbar: f64, n: usize) -> (f64, f64) {
    let n1 = 2.0 * nbar + 1.0;
    let s2 = 2.0_f64.sinh();
    let s4 = 4.0_f64.sinh();
    let n = n as f64;
    match *scheme {
        SchemeSpec::Homodyne => (n1 * s2 / n, n1 * n1 * s4 / (2.0 * n)),
        SchemeSpec::Heterodyne => (
            (2.0 + n1 * s2) / (2.0 * n),
            (4.0 + 4.0 * n1 * s2 + n1 * n1 * s4) / (4.0 * n),
        ),
        SchemeSpec::Sequential(m) => {
            let (u, v) = (m.dq1().powi(2), m.dp1().powi(2));
            (
                (2.0 * (u + v) + n1 * s2) / (2.0 * n),
                (n1 * n1 * s4 + 4.0 * (u + v) * n1 * s2 + 8.0 * (u * u + v * v)) / (4.0 * n),
            )
        }
        SchemeSpec::ArthursKelly(m) => {
            let (q2, p1, q1, p2) = (m.dq2().powi(2), m.dp1().powi(2), m.dq1().powi(2), m.dp2().powi(2));
            let a = 4.0 * q1 + q2;
            let b = p1 + 4.0 * p2;
            (
                (q2 + p1 + 4.0 * (q1 + p2) + 2.0 * n1 * s2) / (4.0 * n),
                ((a + 2.0 * n1 * s2) * a + b * (b + 2.0 * n1 * s2) + 2.0 * n1 * n1 * s4) / (8.0 * n),
            )
        }
        SchemeSpec::ModifiedAK { meters, kappa } => {
            let (alpha, beta) = ak_offsets(meters, kappa);
            let (a, b) = (4.0 * alpha, 4.0 * beta);
            (
                (a + b + 2.0 * n1 * s2) / (4.0 * n),
                ((a + 2.0 * n1 * s2) * a + b * (b + 2.0 * n1 * s2) + 2.0 * n1 * n1 * s4) / (8.0 * n),
            )
        }
    }
}

/// Printed squeezing-averaged sequential `d2`, for comparison output.
pub fn printed_sequential_average_d2(meters: MeterConfig, nbar: f64, n: usize) -> f64 {
    let n1 = 2.0 * nbar + 1.0;
    let (u, v) = (meters.dq1().powi(2), meters.dp1().powi(2));
    (4.0 * (u + v) * (2.0 + n1 * 2.0_f64.sinh()) + n1 * n1 * 4.0_f64.sinh()) / (4.0 * n as f64)
}

/// Schemes that carry tunable meters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeterScheme {
    Sequential,
    ArthursKelly,
    ModifiedAK,
}

/// Meter widths minimizing `d1`.
///
/// For the coupled-meter scheme at `|kappa| = 1` one optimal width collapses
/// to zero, which no pure meter attains; that case is reported as an error
/// (see [`optimal_cor_widths`] for the limiting values).
pub fn optimal_widths(kind: MeterScheme, kappa: Option<f64>) -> Result<MeterConfig> {
    match (kind, kappa) {
        (MeterScheme::Sequential, None) => MeterConfig::single(FRAC_1_SQRT_2),
        (MeterScheme::ArthursKelly, None) => MeterConfig::from_dq1_dp2(0.5, 0.5),
        (MeterScheme::ModifiedAK, Some(k)) => {
            if !k.is_finite() {
                return Err(Error::NonFinite("kappa"));
            }
            let (dq1, dp2) = optimal_cor_widths(k);
            MeterConfig::from_dq1_dp2(dq1, dp2)
                .map_err(|_| Error::Unsupported(format!("optimal meter width degenerates to zero at kappa = {k}")))
        }
        (MeterScheme::ModifiedAK, None) => Err(Error::InvalidParameter(
            "kappa is required for the coupled-meter scheme".into(),
        )),
        (_, Some(_)) => Err(Error::InvalidParameter(
            "kappa only applies to the coupled-meter scheme".into(),
        )),
    }
}

/// Optimal `(dQ1, dP2)` of the coupled-meter scheme; continuous in `kappa`.
pub fn optimal_cor_widths(kappa: f64) -> (f64, f64) {
    let dq1 = if kappa > -1.0 {
        (1.0 + kappa).sqrt() / 2.0
    } else {
        (-1.0 - kappa).sqrt() / 2.0
    };
    let dp2 = if kappa > 1.0 {
        (kappa - 1.0).sqrt() / 2.0
    } else {
        (1.0 - kappa).sqrt() / 2.0
    };
    (dq1, dp2)
}

/// Smallest `d1` of the coupled-meter scheme over its meter widths.
pub fn optimal_d1_cor(kappa: f64, ens: &EnsembleSpec) -> Result<f64> {
    if !kappa.is_finite() {
        return Err(Error::NonFinite("kappa"));
    }
    let s = ens.state().cov();
    let floor = kappa.abs().max(1.0);
    Ok((floor + s.get(0, 0) + s.get(1, 1)) / ens.n() as f64)
}

/// Numerical minimum of the coupled-meter `d2` over `(dQ1, dP2)` in `(0, 3]^2`.
pub fn optimal_d2_cor(kappa: f64, ens: &EnsembleSpec, convention: Convention) -> Result<(f64, MeterConfig)> {
    if !kappa.is_finite() {
        return Err(Error::NonFinite("kappa"));
    }
    let eval = |dq1: f64, dp2: f64| -> f64 {
        MeterConfig::from_dq1_dp2(dq1, dp2)
            .and_then(|meters| distance_variance(&SchemeSpec::ModifiedAK { meters, kappa }, ens, convention))
            .unwrap_or(f64::INFINITY)
    };
    distance_variance(
        &SchemeSpec::ModifiedAK {
            meters: MeterConfig::new(1.0, 1.0)?,
            kappa,
        },
        ens,
        convention,
    )?;

    const LO: f64 = 1e-3;
    const HI: f64 = 3.0;
    const GRID: usize = 60;
    let at = |i: usize| LO + (HI - LO) * i as f64 / (GRID - 1) as f64;
    let (mut best, mut bx, mut by) = (f64::INFINITY, 1.0, 1.0);
    for i in 0..GRID {
        for j in 0..GRID {
            let v = eval(at(i), at(j));
            if v < best {
                (best, bx, by) = (v, at(i), at(j));
            }
        }
    }
    // Alternating golden-section refinement.
    let step = (HI - LO) / (GRID - 1) as f64;
    let (mut x, mut y) = (bx, by);
    let mut span = 2.0 * step;
    for _ in 0..60 {
        x = golden_section(|t| eval(t, y), (x - span).max(LO), (x + span).min(HI), 1e-12);
        y = golden_section(|t| eval(x, t), (y - span).max(LO), (y + span).min(HI), 1e-12);
        span = (span * 0.7).max(1e-6);
    }
    let refined = eval(x, y);
    if refined <= best {
        Ok((refined, MeterConfig::from_dq1_dp2(x, y)?))
    } else {
        Ok((best, MeterConfig::from_dq1_dp2(bx, by)?))
    }
}

/// Squeezing value where homodyne and heterodyne variance estimation tie.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriticalSqueezing {
    Crossing(f64),
    /// Homodyne is worse for every squeezing (high thermal occupation).
    NoCrossing,
}

impl CriticalSqueezing {
    pub fn value(self) -> Option<f64> {
        match self {
            Self::Crossing(r) => Some(r),
            Self::NoCrossing => None,
        }
    }
}

/// Positive critical squeezing `r_c` with `d2_hom(r_c) = d2_het(r_c)`.
pub fn critical_squeezing(nbar: f64) -> Result<CriticalSqueezing> {
    if !(nbar.is_finite() && nbar >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "nbar must be non-negative, got {nbar}"
        )));
    }
    let n1 = 2.0 * nbar + 1.0;
    let root = (3.0 + 2.0 * n1 * n1).sqrt();
    let inner = 2.0 - n1 * n1 + root;
    if inner < 0.0 {
        return Ok(CriticalSqueezing::NoCrossing);
    }
    let e2r = (1.0 + root + (2.0 * inner).sqrt()) / (2.0 * n1);
    Ok(CriticalSqueezing::Crossing(0.5 * e2r.ln()))
}
