//! End-to-end runs of the coding scheme and their Monte Carlo verification.
//!
//! One trial: the sender applies the message unitary to the shared state and
//! ships her particle; the receiver first projects onto the shifted-diagonal
//! subspaces (recovering `m`, or landing in the residual tail when the
//! resource has more levels than the alphabet), then performs unambiguous
//! discrimination inside that subspace (recovering `n`, or giving up).
//! Conclusive outcomes are correct by construction; the interesting quantity
//! is how often the chain stays conclusive.
//!
//! Simulation is exact Born-rule sampling by inverse CDF, seeded and
//! reproducible: trials are partitioned into fixed-size batches of
//! [`TRIALS_PER_STREAM`], batch `b` draws from a dedicated ChaCha8 stream
//! seeded with `mix64(seed ^ mix64(b+1))`, and tallies are order-independent
//! sums, so any scheduling of batches gives bit-identical statistics.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coding::{encode_family, EncodedFamily, MessageIndex};
use crate::discrimination::{
    born_probabilities, embedded_bound, gram, is_linearly_independent, max_uniform_gamma,
    subspace_projectors, usd_povm, GramMatrix, OutcomeLabel, Povm, LINEAR_INDEPENDENCE_TOL,
};
use crate::error::{Error, Result};
use crate::qmath::{Scalar, StateVector};
use crate::states::SchmidtState;

/// Number of trials served by one RNG stream.
pub const TRIALS_PER_STREAM: u64 = 4096;

/// Full description of one protocol setup.
#[derive(Debug, Clone)]
pub struct ProtocolConfig {
    /// Message alphabet dimension (`d²` messages).
    pub d: usize,
    /// Local dimension of the shared resource, `>= d`.
    pub resource_dim: usize,
    /// Schmidt spectrum of the resource, length `resource_dim`.
    pub spectrum: Vec<f64>,
    /// Monte Carlo trial count (ignored by pure analysis).
    pub trials: u64,
    /// Base seed for the trial streams.
    pub seed: u64,
}

impl ProtocolConfig {
    pub fn new(
        d: usize,
        resource_dim: usize,
        spectrum: Vec<f64>,
        trials: u64,
        seed: u64,
    ) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(format!("need d >= 2, got {d}")));
        }
        if resource_dim < d {
            return Err(Error::InvalidDimension(format!(
                "resource dimension {resource_dim} is smaller than alphabet dimension {d}"
            )));
        }
        if spectrum.len() != resource_dim {
            return Err(Error::InvalidSpectrum(format!(
                "spectrum has {} entries for resource dimension {resource_dim}",
                spectrum.len()
            )));
        }
        // Delegates the probability-vector checks.
        let _ = SchmidtState::new(spectrum.clone())?;
        Ok(Self {
            d,
            resource_dim,
            spectrum,
            trials,
            seed,
        })
    }

    pub fn shared_state(&self) -> SchmidtState {
        SchmidtState::new(self.spectrum.clone()).expect("validated at construction")
    }
}

/// Analytic summary of a setup: what the bounds promise and what the
/// synthesized measurements achieve.
#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub d: usize,
    pub resource_dim: usize,
    /// Entanglement of the resource in ebits.
    pub entropy_ebits: f64,
    /// Eigenvalues of the full `d²×d²` encoded-family Gram, ascending.
    pub gram_spectrum: Vec<f64>,
    /// Whether the full family is linearly independent.
    pub linearly_independent: bool,
    /// Pairwise-sum average bound for this spectrum and alphabet.
    pub paper_bound: f64,
    /// End-to-end conclusive rate of the synthesized two-stage measurement.
    pub achievable_gamma: f64,
    /// Conclusive rate inside each subspace, conditional on reaching stage 2.
    pub subspace_gamma: Vec<f64>,
    /// Probability that stage 1 lands in the residual tail.
    pub residual_probability: f64,
}

/// First-stage result of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage1Outcome {
    Subspace(usize),
    Residual,
}

/// Final decoding result of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeOutcome {
    Message(MessageIndex),
    Inconclusive,
}

/// What happened in a single run: conclusive outcomes must reproduce `sent`.
#[derive(Debug, Clone, Copy)]
pub struct TrialRecord {
    pub sent: MessageIndex,
    pub stage1: Stage1Outcome,
    pub outcome: DecodeOutcome,
}

/// Per-message conclusive/attempt tallies.
#[derive(Debug, Clone, Copy, Default)]
pub struct MessageTally {
    pub conclusive: u64,
    pub trials: u64,
}

/// Aggregated Monte Carlo statistics.
#[derive(Debug, Clone)]
pub struct SimulationStats {
    pub trials: u64,
    /// Trials that ended with a conclusive decode.
    pub conclusive: u64,
    /// `conclusive / trials`.
    pub success_rate: f64,
    /// Binomial standard error `√(r(1-r)/trials)`.
    pub stderr: f64,
    /// Tallies per flattened message index.
    pub per_message: Vec<MessageTally>,
    /// Conclusive decodes that disagreed with the sent message. Unambiguity
    /// makes this zero; anything else is a defect.
    pub decode_errors: u64,
    /// First-stage outcome counts: one slot per subspace, plus a final
    /// residual slot when the resource is larger than the alphabet.
    pub stage1_counts: Vec<u64>,
}

/// Precomputed machinery for running trials of one configuration.
///
/// The second-stage measurement is identical across subspaces in subspace
/// coordinates (the conditional amplitudes do not depend on `m`), so a single
/// coordinate POVM serves every branch.
pub struct ProtocolInstance {
    config: ProtocolConfig,
    family: EncodedFamily,
    stage1: Povm,
    /// Born distribution over stage-1 outcomes, per flattened message.
    stage1_dist: Vec<Vec<f64>>,
    /// Second-stage POVM in subspace coordinates.
    stage2: Povm,
    /// Born distribution over stage-2 outcomes given the correct subspace,
    /// per flattened message.
    stage2_dist: Vec<Vec<f64>>,
    /// Uniform conclusive rate inside a subspace.
    conditional_gamma: f64,
    /// Total weight of the first `d` Schmidt levels.
    head_weight: f64,
}

impl ProtocolInstance {
    pub fn new(config: ProtocolConfig) -> Result<Self> {
        let d = config.d;
        let shared = config.shared_state();
        let family = encode_family(&shared, d)?;
        let stage1 = subspace_projectors(d, config.resource_dim)?;

        let stage1_dist = family
            .states()
            .iter()
            .map(|s| born_probabilities(&stage1, s))
            .collect::<Result<Vec<_>>>()?;

        let head_weight: f64 = config.spectrum[..d].iter().sum();
        let (stage2, conditional_gamma) = build_stage2(&config, &family, head_weight)?;

        let mut stage2_dist = Vec::with_capacity(family.len());
        for idx in 0..family.len() {
            let msg = MessageIndex::from_flat(idx, d);
            let dist = stage2_distribution(&config, &family, &stage2, msg, msg.m)?
                .unwrap_or_else(|| degenerate_distribution(&stage2));
            stage2_dist.push(dist);
        }

        Ok(Self {
            config,
            family,
            stage1,
            stage1_dist,
            stage2,
            stage2_dist,
            conditional_gamma,
            head_weight,
        })
    }

    pub fn config(&self) -> &ProtocolConfig {
        &self.config
    }

    pub fn family(&self) -> &EncodedFamily {
        &self.family
    }

    pub fn stage1_povm(&self) -> &Povm {
        &self.stage1
    }

    /// The shared second-stage POVM, in subspace coordinates.
    pub fn stage2_povm(&self) -> &Povm {
        &self.stage2
    }

    pub fn conditional_gamma(&self) -> f64 {
        self.conditional_gamma
    }

    /// End-to-end conclusive rate: reach the right subspace, then identify.
    pub fn achievable_gamma(&self) -> f64 {
        self.head_weight * self.conditional_gamma
    }

    /// One protocol run for a fixed message: sample stage 1 over the
    /// projector outcomes, then (unless the residual fired) the in-subspace
    /// unambiguous measurement. Consumes one uniform draw per stage.
    pub fn run_trial(&self, message: MessageIndex, rng: &mut impl Rng) -> TrialRecord {
        let d = self.config.d;
        let flat = message.flat(d);
        let u1: f64 = rng.random();
        let k = sample_index(&self.stage1_dist[flat], u1);
        let stage1 = match self.stage1.label(k) {
            OutcomeLabel::Subspace(m) => Stage1Outcome::Subspace(m),
            _ => Stage1Outcome::Residual,
        };
        let m = match stage1 {
            Stage1Outcome::Residual => {
                return TrialRecord {
                    sent: message,
                    stage1,
                    outcome: DecodeOutcome::Inconclusive,
                };
            }
            Stage1Outcome::Subspace(m) => m,
        };

        // The cached distribution covers the only branch with nonzero
        // stage-1 probability; any other subspace is recomputed exactly.
        let cached;
        let dist: &[f64] = if m == message.m {
            &self.stage2_dist[flat]
        } else {
            cached = stage2_distribution(&self.config, &self.family, &self.stage2, message, m)
                .expect("dims fixed at construction")
                .unwrap_or_else(|| degenerate_distribution(&self.stage2));
            &cached
        };
        let u2: f64 = rng.random();
        let j = sample_index(dist, u2);
        let outcome = match self.stage2.label(j) {
            OutcomeLabel::State(n) => DecodeOutcome::Message(MessageIndex { m, n }),
            _ => DecodeOutcome::Inconclusive,
        };
        TrialRecord {
            sent: message,
            stage1,
            outcome,
        }
    }
}

/// Second-stage synthesis: unambiguous discrimination of the conditional
/// (projected, renormalized) family at the uniform optimum. A degenerate
/// conditional family gets the give-up POVM, so stage 2 is simply never
/// conclusive there.
fn build_stage2(
    config: &ProtocolConfig,
    family: &EncodedFamily,
    head_weight: f64,
) -> Result<(Povm, f64)> {
    let d = config.d;
    if head_weight <= 1e-12 {
        let povm = Povm::new(vec![(
            OutcomeLabel::Inconclusive,
            crate::qmath::Operator::identity(d),
        )])?;
        return Ok((povm, 0.0));
    }
    // Conditional states, read off the m = 0 subspace of the actual family.
    let states: Vec<StateVector> = (0..d)
        .map(|n| {
            let coords = subspace_coordinates(
                family.state(MessageIndex { m: 0, n }),
                d,
                config.resource_dim,
                0,
            );
            StateVector::new(coords)
                .expect("finite amplitudes")
                .normalized()
        })
        .collect::<Result<Vec<_>>>()?;
    let g = GramMatrix::from_states(&states)?;
    if !is_linearly_independent(&g, LINEAR_INDEPENDENCE_TOL) {
        let povm = Povm::new(vec![(
            OutcomeLabel::Inconclusive,
            crate::qmath::Operator::identity(d),
        )])?;
        return Ok((povm, 0.0));
    }
    let gamma = max_uniform_gamma(&g).min(1.0);
    let povm = usd_povm(&states, &vec![gamma; d])?;
    Ok((povm, gamma))
}

/// Amplitudes of a full-space state on the basis kets of subspace `m`,
/// ordered by `k`: entry `k` reads position `((k+m) mod d)·dim + k`.
fn subspace_coordinates(state: &StateVector, d: usize, dim: usize, m: usize) -> Vec<Scalar> {
    (0..d).map(|k| state.amp(((k + m) % d) * dim + k)).collect()
}

/// Born distribution of the coordinate POVM on the projected, renormalized
/// state; `None` when the state has no weight in subspace `m`.
fn stage2_distribution(
    config: &ProtocolConfig,
    family: &EncodedFamily,
    stage2: &Povm,
    message: MessageIndex,
    m: usize,
) -> Result<Option<Vec<f64>>> {
    let coords = subspace_coordinates(family.state(message), config.d, config.resource_dim, m);
    let weight: f64 = coords.iter().map(|a| a.norm_sqr()).sum();
    if weight <= 1e-300 {
        return Ok(None);
    }
    if stage2.dim() != config.d {
        // Degenerate give-up POVM acts on a single slot.
        return Ok(None);
    }
    let normalized = StateVector::new(coords)?.normalized()?;
    Ok(Some(born_probabilities(stage2, &normalized)?))
}

/// The always-inconclusive distribution matching a give-up POVM.
fn degenerate_distribution(stage2: &Povm) -> Vec<f64> {
    let mut dist = vec![0.0; stage2.len()];
    for (i, (label, _)) in stage2.iter().enumerate() {
        if matches!(label, OutcomeLabel::Inconclusive) {
            dist[i] = 1.0;
        }
    }
    dist
}

/// Inverse-CDF draw over an explicit distribution. Zero-probability slots
/// can never fire; mass beyond roundoff falls to the last slot.
fn sample_index(probs: &[f64], u: f64) -> usize {
    let mut cum = 0.0;
    for (i, p) in probs.iter().enumerate() {
        cum += p;
        if u < cum {
            return i;
        }
    }
    probs.len() - 1
}

/// SplitMix64 finalizer, used to derive independent stream seeds.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for batch `stream` of a run with base `seed`.
pub fn stream_seed(seed: u64, stream: u64) -> u64 {
    mix64(seed ^ mix64(stream.wrapping_add(1)))
}

/// Purely analytic summary of a configuration.
pub fn analyze(config: &ProtocolConfig) -> Result<AnalysisReport> {
    let shared = config.shared_state();
    let family = encode_family(&shared, config.d)?;
    let g = gram(&family);
    let gram_spectrum = g.eigenvalues();
    let instance = ProtocolInstance::new(config.clone())?;
    Ok(AnalysisReport {
        d: config.d,
        resource_dim: config.resource_dim,
        entropy_ebits: shared.entanglement_entropy(),
        linearly_independent: is_linearly_independent(&g, LINEAR_INDEPENDENCE_TOL),
        gram_spectrum,
        paper_bound: embedded_bound(&config.spectrum, config.d)?,
        achievable_gamma: instance.achievable_gamma(),
        subspace_gamma: vec![instance.conditional_gamma(); config.d],
        residual_probability: 1.0 - config.spectrum[..config.d].iter().sum::<f64>(),
    })
}

/// Monte Carlo estimate over uniformly random messages.
///
/// Each trial consumes one message draw and one uniform per measurement
/// stage from its batch stream; identical `(config, seed)` reproduce the
/// statistics bit for bit.
pub fn simulate(config: &ProtocolConfig) -> Result<SimulationStats> {
    if config.trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let instance = ProtocolInstance::new(config.clone())?;
    simulate_with(&instance)
}

/// Runs the Monte Carlo loop on an already-built instance.
pub fn simulate_with(instance: &ProtocolInstance) -> Result<SimulationStats> {
    let config = instance.config();
    let d = config.d;
    let n_messages = (d * d) as u64;
    let trials = config.trials;

    let mut conclusive = 0u64;
    let mut decode_errors = 0u64;
    let mut per_message = vec![MessageTally::default(); d * d];
    let with_residual = config.resource_dim > d;
    let mut stage1_counts = vec![0u64; d + usize::from(with_residual)];

    let streams = trials.div_ceil(TRIALS_PER_STREAM);
    for stream in 0..streams {
        let lo = stream * TRIALS_PER_STREAM;
        let hi = (lo + TRIALS_PER_STREAM).min(trials);
        let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(config.seed, stream));
        for _ in lo..hi {
            let flat = rng.random_range(0..n_messages) as usize;
            let message = MessageIndex::from_flat(flat, d);
            let record = instance.run_trial(message, &mut rng);

            per_message[flat].trials += 1;
            match record.stage1 {
                Stage1Outcome::Subspace(m) => stage1_counts[m] += 1,
                Stage1Outcome::Residual => *stage1_counts.last_mut().expect("non-empty") += 1,
            }
            if let DecodeOutcome::Message(decoded) = record.outcome {
                conclusive += 1;
                per_message[flat].conclusive += 1;
                if decoded != message {
                    decode_errors += 1;
                }
            }
        }
    }

    let rate = conclusive as f64 / trials as f64;
    Ok(SimulationStats {
        trials,
        conclusive,
        success_rate: rate,
        stderr: (rate * (1.0 - rate) / trials as f64).sqrt(),
        per_message,
        decode_errors,
        stage1_counts,
    })
}
