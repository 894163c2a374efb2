//! Measurement schemes and their readout laws.
//!
//! Homodyne and heterodyne readouts are Gaussian laws taken straight from the
//! state. Sequential and Arthurs-Kelly readouts come from meters coupled to
//! the system by an impulsive quadratic interaction; their laws are available
//! both in closed form ([`readout_distributions`]) and from the joint
//! covariance matrix built by the symplectic engine ([`readout_laws`]).

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::phase::{
    apply_symplectic, reduce_modes, symplectic_eigenvalues, CovarianceMatrix, GaussianState, Marginal1D,
    PHYSICALITY_TOL,
};
use crate::symplectic::{canonical_interaction, Interaction};

/// Pure meter widths. The momentum widths follow from `dQ dP = 1/2`.
///
/// The sequential scheme uses only the first meter; `dq2` is ignored there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeterConfig {
    dq1: f64,
    dq2: f64,
}

fn check_width(name: &str, w: f64) -> Result<()> {
    if !(w.is_finite() && w > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {w}"
        )));
    }
    Ok(())
}

impl MeterConfig {
    pub fn new(dq1: f64, dq2: f64) -> Result<Self> {
        check_width("dq1", dq1)?;
        check_width("dq2", dq2)?;
        Ok(Self { dq1, dq2 })
    }

    /// Single meter (sequential scheme).
    pub fn single(dq1: f64) -> Result<Self> {
        Self::new(dq1, dq1)
    }

    /// Widths given as position width of meter 1 and momentum width of meter 2.
    pub fn from_dq1_dp2(dq1: f64, dp2: f64) -> Result<Self> {
        check_width("dp2", dp2)?;
        Self::new(dq1, 0.5 / dp2)
    }

    pub fn dq1(&self) -> f64 {
        self.dq1
    }

    pub fn dq2(&self) -> f64 {
        self.dq2
    }

    pub fn dp1(&self) -> f64 {
        0.5 / self.dq1
    }

    pub fn dp2(&self) -> f64 {
        0.5 / self.dq2
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeSpec {
    /// `q` read on one half of the ensemble, `p` on the other.
    Homodyne,
    Heterodyne,
    /// Weak meter readout followed by homodyne of the conjugate quadrature,
    /// both orders on separate halves.
    Sequential(MeterConfig),
    ArthursKelly(MeterConfig),
    ModifiedAK {
        meters: MeterConfig,
        kappa: f64,
    },
}

impl SchemeSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Homodyne => "homodyne",
            Self::Heterodyne => "heterodyne",
            Self::Sequential(_) => "sequential",
            Self::ArthursKelly(_) => "arthurs_kelly",
            Self::ModifiedAK { .. } => "modified_ak",
        }
    }

    pub fn meters(&self) -> Option<MeterConfig> {
        match *self {
            Self::Sequential(m) | Self::ArthursKelly(m) | Self::ModifiedAK { meters: m, .. } => Some(m),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        if let Self::ModifiedAK { kappa, .. } = self {
            if !kappa.is_finite() {
                return Err(Error::NonFinite("kappa"));
            }
        }
        Ok(())
    }
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quadrature {
    Q,
    P,
}

impl Quadrature {
    pub fn index(self) -> usize {
        match self {
            Self::Q => 0,
            Self::P => 1,
        }
    }
}

/// Fraction of the ensemble feeding one readout channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnsembleShare {
    Half,
    Full,
}

impl EnsembleShare {
    pub fn copies(self, n: usize) -> usize {
        match self {
            Self::Half => n / 2,
            Self::Full => n,
        }
    }
}

/// One readout channel. Channels sharing a `group` are read off the same copies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    pub quadrature: Quadrature,
    pub law: Marginal1D,
    /// Noise added on top of the state's quadrature variance.
    pub added_noise: f64,
    pub share: EnsembleShare,
    pub group: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutChannels {
    pub channels: Vec<Channel>,
}

impl ReadoutChannels {
    pub fn for_quadrature(&self, quad: Quadrature) -> impl Iterator<Item = &Channel> {
        self.channels.iter().filter(move |c| c.quadrature == quad)
    }

    /// First channel reading `q` (the meter channel for the sequential scheme).
    pub fn q_channel(&self) -> &Channel {
        self.for_quadrature(Quadrature::Q).next().expect("every scheme reads q")
    }

    pub fn p_channel(&self) -> &Channel {
        self.for_quadrature(Quadrature::P).next().expect("every scheme reads p")
    }

    pub fn copies_per_outcome_pair(&self) -> EnsembleShare {
        self.q_channel().share
    }
}

fn single_mode_moments(state: &GaussianState) -> Result<(f64, f64, f64, f64)> {
    if state.modes() != 1 {
        return Err(Error::InvalidDimension(format!(
            "scheme readout needs a single-mode state, got {} modes",
            state.modes()
        )));
    }
    Ok((
        state.mean().get(0),
        state.mean().get(1),
        state.cov().get(0, 0),
        state.cov().get(1, 1),
    ))
}

fn channel(
    quadrature: Quadrature,
    mean: f64,
    base: f64,
    added: f64,
    share: EnsembleShare,
    group: usize,
) -> Result<Channel> {
    Ok(Channel {
        quadrature,
        law: Marginal1D::new(mean, base + added)?,
        added_noise: added,
        share,
        group,
    })
}

/// Closed-form readout laws per scheme.
pub fn readout_distributions(scheme: &SchemeSpec, state: &GaussianState) -> Result<ReadoutChannels> {
    scheme.validate()?;
    let (q0, p0, vq, vp) = single_mode_moments(state)?;
    use EnsembleShare::*;
    use Quadrature::*;
    let channels = match *scheme {
        SchemeSpec::Homodyne => vec![channel(Q, q0, vq, 0.0, Half, 0)?, channel(P, p0, vp, 0.0, Half, 1)?],
        SchemeSpec::Heterodyne => vec![channel(Q, q0, vq, 0.5, Full, 0)?, channel(P, p0, vp, 0.5, Full, 0)?],
        SchemeSpec::Sequential(m) => {
            let (dq1s, dp1s) = (m.dq1().powi(2), m.dp1().powi(2));
            vec![
                // q read by the meter, then p by homodyne.
                channel(Q, q0, vq, dq1s, Half, 0)?,
                channel(P, p0, vp, dp1s, Half, 0)?,
                // p read by the meter, then q by homodyne.
                channel(P, p0, vp, dq1s, Half, 1)?,
                channel(Q, q0, vq, dp1s, Half, 1)?,
            ]
        }
        SchemeSpec::ArthursKelly(m) => {
            let aq = m.dq1().powi(2) + m.dq2().powi(2) / 4.0;
            let ap = m.dp1().powi(2) / 4.0 + m.dp2().powi(2);
            vec![channel(Q, q0, vq, aq, Full, 0)?, channel(P, p0, vp, ap, Full, 0)?]
        }
        SchemeSpec::ModifiedAK { meters: m, kappa } => {
            let aq = m.dq1().powi(2) + (kappa - 1.0).powi(2) / 4.0 * m.dq2().powi(2);
            let ap = (kappa + 1.0).powi(2) / 4.0 * m.dp1().powi(2) + m.dp2().powi(2);
            vec![channel(Q, q0, vq, aq, Full, 0)?, channel(P, p0, vp, ap, Full, 0)?]
        }
    };
    Ok(ReadoutChannels { channels })
}

/// Order of the two readouts in the sequential scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequentialOrder {
    /// Meter reads `q`, then `p` is measured on the system.
    QThenP,
    /// Meter reads `p`, then `q` is measured on the system.
    PThenQ,
}

/// Joint system-meter state after the sequential interaction of the given order.
pub fn sequential_joint_state(
    state: &GaussianState,
    meters: MeterConfig,
    order: SequentialOrder,
) -> Result<GaussianState> {
    single_mode_moments(state)?;
    let input = GaussianState::product(&[state.clone(), GaussianState::squeezed_vacuum(meters.dq1())?])?;
    let kind = match order {
        SequentialOrder::QThenP => Interaction::SequentialQ,
        SequentialOrder::PThenQ => Interaction::SequentialP,
    };
    let (_, s) = canonical_interaction(kind)?;
    apply_symplectic(&input, &s)
}

/// Joint post-interaction state. Sequential returns the `q`-then-`p` ordering;
/// the Arthurs-Kelly variants return the three-mode (system, meter 1, meter 2) state.
pub fn post_interaction_state(scheme: &SchemeSpec, state: &GaussianState) -> Result<GaussianState> {
    scheme.validate()?;
    match *scheme {
        SchemeSpec::Homodyne | SchemeSpec::Heterodyne => Err(Error::NoMeters(scheme.name())),
        SchemeSpec::Sequential(m) => sequential_joint_state(state, m, SequentialOrder::QThenP),
        SchemeSpec::ArthursKelly(m) => ak_joint(state, m, Interaction::ArthursKelly),
        SchemeSpec::ModifiedAK { meters, kappa } => {
            ak_joint(state, meters, Interaction::ModifiedArthursKelly { kappa })
        }
    }
}

fn ak_joint(state: &GaussianState, m: MeterConfig, kind: Interaction) -> Result<GaussianState> {
    single_mode_moments(state)?;
    let input = GaussianState::product(&[
        state.clone(),
        GaussianState::squeezed_vacuum(m.dq1())?,
        GaussianState::squeezed_vacuum(m.dq2())?,
    ])?;
    let (_, s) = canonical_interaction(kind)?;
    apply_symplectic(&input, &s)
}

/// Joint Gaussian law of the readouts taken on one group of copies.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupLaw {
    pub share: EnsembleShare,
    pub quadratures: Vec<Quadrature>,
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
}

fn group_from(state: &GaussianState, share: EnsembleShare, picks: &[(Quadrature, usize)]) -> GroupLaw {
    let mean = DVector::from_iterator(picks.len(), picks.iter().map(|&(_, i)| state.mean().get(i)));
    let cov = DMatrix::from_fn(picks.len(), picks.len(), |a, b| state.cov().get(picks[a].1, picks[b].1));
    GroupLaw {
        share,
        quadratures: picks.iter().map(|&(q, _)| q).collect(),
        mean,
        cov,
    }
}

/// Readout laws built from the joint covariance matrices, one per group of copies.
pub fn readout_laws(scheme: &SchemeSpec, state: &GaussianState) -> Result<Vec<GroupLaw>> {
    scheme.validate()?;
    single_mode_moments(state)?;
    use Quadrature::*;
    Ok(match *scheme {
        SchemeSpec::Homodyne => vec![
            group_from(state, EnsembleShare::Half, &[(Q, 0)]),
            group_from(state, EnsembleShare::Half, &[(P, 1)]),
        ],
        SchemeSpec::Heterodyne => {
            // Overlap with a coherent-state projector adds vacuum noise I/2.
            let mut g = group_from(state, EnsembleShare::Full, &[(Q, 0), (P, 1)]);
            g.cov += DMatrix::identity(2, 2) * 0.5;
            vec![g]
        }
        SchemeSpec::Sequential(m) => {
            // Layout (q, p, Q1, P1).
            let qp = sequential_joint_state(state, m, SequentialOrder::QThenP)?;
            let pq = sequential_joint_state(state, m, SequentialOrder::PThenQ)?;
            vec![
                group_from(&qp, EnsembleShare::Half, &[(Q, 2), (P, 1)]),
                group_from(&pq, EnsembleShare::Half, &[(P, 2), (Q, 0)]),
            ]
        }
        SchemeSpec::ArthursKelly(_) | SchemeSpec::ModifiedAK { .. } => {
            // Layout (q, p, Q1, P1, Q2, P2): Q1 reads q, P2 reads p.
            let joint = post_interaction_state(scheme, state)?;
            vec![group_from(&joint, EnsembleShare::Full, &[(Q, 2), (P, 5)])]
        }
    })
}

/// Readout channels assembled from [`readout_laws`]; added noise is the excess
/// of each readout variance over the state's own variance.
pub fn readout_from_joint(scheme: &SchemeSpec, state: &GaussianState) -> Result<ReadoutChannels> {
    let laws = readout_laws(scheme, state)?;
    let mut channels = Vec::new();
    for (group, law) in laws.iter().enumerate() {
        for (k, &quad) in law.quadratures.iter().enumerate() {
            let var = law.cov[(k, k)];
            let base = state.cov().get(quad.index(), quad.index());
            channels.push(Channel {
                quadrature: quad,
                law: Marginal1D::new(law.mean[k], var)?,
                added_noise: var - base,
                share: law.share,
                group,
            });
        }
    }
    Ok(ReadoutChannels { channels })
}

/// Reduced state of the two meters after the (modified) Arthurs-Kelly interaction.
pub fn meter_pair_state(scheme: &SchemeSpec, state: &GaussianState) -> Result<GaussianState> {
    match scheme {
        SchemeSpec::ArthursKelly(_) | SchemeSpec::ModifiedAK { .. } => {
            reduce_modes(&post_interaction_state(scheme, state)?, &[1, 2])
        }
        _ => Err(Error::Unsupported(format!("{} has no meter pair", scheme.name()))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Separability {
    Separable,
    Entangled,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimonReport {
    pub verdict: Separability,
    /// Smallest symplectic eigenvalue of the partially transposed covariance matrix.
    pub witness: f64,
}

impl SimonReport {
    pub fn is_entangled(&self) -> bool {
        self.verdict == Separability::Entangled
    }
}

/// PPT test for a two-mode Gaussian state: flip the sign of the second mode's
/// momentum and check the uncertainty relation on the result.
pub fn simon_separability(two_mode_cov: &CovarianceMatrix) -> Result<SimonReport> {
    if two_mode_cov.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: two_mode_cov.dim(),
        });
    }
    let mut pt = two_mode_cov.as_matrix().clone();
    for k in 0..4 {
        if k != 3 {
            pt[(3, k)] = -pt[(3, k)];
            pt[(k, 3)] = -pt[(k, 3)];
        }
    }
    let witness = symplectic_eigenvalues(&pt)?[0];
    let verdict = if witness < 0.5 - PHYSICALITY_TOL {
        Separability::Entangled
    } else {
        Separability::Separable
    };
    Ok(SimonReport { verdict, witness })
}

/// Sequential meter width with the smallest added noise.
pub const SEQUENTIAL_OPTIMAL_DQ1: f64 = FRAC_1_SQRT_2;
