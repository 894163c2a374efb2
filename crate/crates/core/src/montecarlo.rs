//! Monte Carlo simulation of finite ensembles: draw readouts, form the sample
//! estimators and measure their squared errors.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metrics::{Convention, EnsembleSpec};
use crate::phase::GaussianState;
use crate::schemes::{readout_distributions, readout_laws, EnsembleShare, GroupLaw, Quadrature, SchemeSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub scheme: SchemeSpec,
    pub ens: EnsembleSpec,
    pub trials: usize,
    pub seed: u64,
}

impl TrialConfig {
    pub fn new(scheme: SchemeSpec, ens: EnsembleSpec, trials: usize, seed: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        Ok(Self {
            scheme,
            ens,
            trials,
            seed,
        })
    }
}

/// Independent random stream for one trial: ChaCha8 keyed by `seed`, with the
/// trial index as stream id.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Draws from one group of copies; `columns[k]` holds readouts of `quadratures[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeGroup {
    pub quadratures: Vec<Quadrature>,
    pub columns: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeTable {
    pub groups: Vec<OutcomeGroup>,
}

impl OutcomeTable {
    pub fn len(&self) -> usize {
        self.groups.iter().map(|g| g.columns.first().map_or(0, Vec::len)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

struct PreparedLaw {
    quadratures: Vec<Quadrature>,
    mean: Vec<f64>,
    chol: DMatrix<f64>,
    copies: usize,
}

fn prepare(scheme: &SchemeSpec, state: &GaussianState, n: usize) -> Result<Vec<PreparedLaw>> {
    let laws = readout_laws(scheme, state)?;
    if n == 0 || laws.iter().any(|l| l.share == EnsembleShare::Half) && n % 2 == 1 {
        return Err(Error::InvalidEnsemble { n, min: 2 });
    }
    laws.into_iter()
        .map(
            |GroupLaw {
                 share,
                 quadratures,
                 mean,
                 cov,
             }| {
                let chol = cov
                    .clone()
                    .cholesky()
                    .ok_or_else(|| Error::Numerical("readout covariance is not positive definite".into()))?
                    .l();
                Ok(PreparedLaw {
                    quadratures,
                    mean: mean.iter().copied().collect(),
                    chol,
                    copies: share.copies(n),
                })
            },
        )
        .collect()
}

fn draw<R: Rng + ?Sized>(laws: &[PreparedLaw], rng: &mut R) -> OutcomeTable {
    let groups = laws
        .iter()
        .map(|law| {
            let k = law.mean.len();
            let mut columns = vec![Vec::with_capacity(law.copies); k];
            let mut z = vec![0.0; k];
            for _ in 0..law.copies {
                for zi in z.iter_mut() {
                    *zi = rng.sample(StandardNormal);
                }
                for (a, col) in columns.iter_mut().enumerate() {
                    let x = law.mean[a] + (0..=a).map(|b| law.chol[(a, b)] * z[b]).sum::<f64>();
                    col.push(x);
                }
            }
            OutcomeGroup {
                quadratures: law.quadratures.clone(),
                columns,
            }
        })
        .collect();
    OutcomeTable { groups }
}

/// Readouts of `n_copies` copies of `state` under `scheme`.
pub fn sample_outcomes<R: Rng + ?Sized>(
    scheme: &SchemeSpec,
    state: &GaussianState,
    n_copies: usize,
    rng: &mut R,
) -> Result<OutcomeTable> {
    let laws = prepare(scheme, state, n_copies)?;
    Ok(draw(&laws, rng))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointEstimates {
    pub q: f64,
    pub p: f64,
    pub vq: f64,
    pub vp: f64,
    /// Some channel had zero sample variance.
    pub degenerate: bool,
}

/// Added readout noise of every channel, in group order; it does not depend on the state.
fn added_noise(scheme: &SchemeSpec) -> Result<Vec<(usize, Quadrature, f64)>> {
    let vacuum = crate::phase::make_state(crate::phase::StateKind::Vacuum)?;
    Ok(readout_distributions(scheme, &vacuum)?
        .channels
        .iter()
        .map(|c| (c.group, c.quadrature, c.added_noise))
        .collect())
}

fn estimates_with(table: &OutcomeTable, noise: &[(usize, Quadrature, f64)]) -> Result<PointEstimates> {
    let mut sums = [(0.0, 0.0, 0usize); 2];
    let mut degenerate = false;
    for (gi, group) in table.groups.iter().enumerate() {
        for (quad, col) in group.quadratures.iter().zip(&group.columns) {
            if col.len() < 2 {
                return Err(Error::InvalidEnsemble { n: col.len(), min: 2 });
            }
            let added = noise
                .iter()
                .find(|&&(g, q, _)| g == gi && q == *quad)
                .map(|&(_, _, a)| a)
                .ok_or_else(|| Error::InvalidParameter("outcome table does not match the scheme".into()))?;
            let m = col.len() as f64;
            let mean = col.iter().sum::<f64>() / m;
            let ss = col.iter().map(|x| (x - mean).powi(2)).sum::<f64>();
            if ss == 0.0 {
                degenerate = true;
            }
            let slot = &mut sums[quad.index()];
            slot.0 += mean;
            slot.1 += ss / (m - 1.0) - added;
            slot.2 += 1;
        }
    }
    if sums.iter().any(|s| s.2 == 0) {
        return Err(Error::InvalidParameter("outcome table lacks a quadrature".into()));
    }
    let [q, p] = sums.map(|(mean, var, k)| (mean / k as f64, var / k as f64));
    Ok(PointEstimates {
        q: q.0,
        p: p.0,
        vq: q.1,
        vp: p.1,
        degenerate,
    })
}

/// Sample means and noise-corrected Bessel variances; channels reading the same
/// quadrature are averaged with equal weight.
pub fn point_estimates(outcomes: &OutcomeTable, scheme: &SchemeSpec) -> Result<PointEstimates> {
    if outcomes.is_empty() {
        return Err(Error::InvalidEnsemble { n: 0, min: 2 });
    }
    estimates_with(outcomes, &added_noise(scheme)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalReport {
    pub d1_hat: f64,
    pub d2_hat: f64,
    pub se_d1: f64,
    pub se_d2: f64,
    /// Trial mean of `q^M - q0` and its standard error.
    pub bias_q: f64,
    pub se_bias_q: f64,
    pub trials: usize,
    pub degenerate_trials: usize,
    pub convention: Convention,
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

/// Empirical `d1`/`d2` over independent trials. Results are identical for any
/// thread count: each trial owns its stream and the reduction runs in trial order.
pub fn empirical_distances(cfg: &TrialConfig) -> Result<EmpiricalReport> {
    let state = cfg.ens.state();
    let laws = prepare(&cfg.scheme, state, cfg.ens.n())?;
    let noise = added_noise(&cfg.scheme)?;
    let (q0, p0) = (state.mean().get(0), state.mean().get(1));
    let (vq, vp) = (state.cov().get(0, 0), state.cov().get(1, 1));

    let per_trial: Vec<(f64, f64, f64, bool)> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t);
            let est = estimates_with(&draw(&laws, &mut rng), &noise)?;
            Ok((
                (q0 - est.q).powi(2) + (p0 - est.p).powi(2),
                (vq - est.vq).powi(2) + (vp - est.vp).powi(2),
                est.q - q0,
                est.degenerate,
            ))
        })
        .collect::<Result<_>>()?;

    let col = |f: fn(&(f64, f64, f64, bool)) -> f64| per_trial.iter().map(f).collect::<Vec<_>>();
    let (d1_hat, se_d1) = mean_se(&col(|t| t.0));
    let (d2_hat, se_d2) = mean_se(&col(|t| t.1));
    let (bias_q, se_bias_q) = mean_se(&col(|t| t.2));
    Ok(EmpiricalReport {
        d1_hat,
        d2_hat,
        se_d1,
        se_d2,
        bias_q,
        se_bias_q,
        trials: cfg.trials,
        degenerate_trials: per_trial.iter().filter(|t| t.3).count(),
        convention: Convention::ExactSmallSample,
    })
}
