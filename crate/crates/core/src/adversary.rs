//! Monte-Carlo runs of Alice → channel → Bob with an eavesdropper whose frame
//! is related to Alice's by a random group element, drawn afresh per trial.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::certify::{certify_classical, Tolerances};
use crate::error::{Error, Result};
use crate::matcore::{hermitian_eigh, trace_distance, ComplexMatrix, DensityMatrix, Ket};
use crate::schemes::ClassicalScheme;
use crate::schurweyl::{apply_collective, permute_ket, Permutation, Rotation, SchurTransform};
use crate::twirl::{sample_rng, twirl_su2_exact, SrfKind, TwirlImage};

/// Eigenvalues at or below this are treated as zero when building Eve's
/// Helstrom projector, so that numerically identical images give no advantage.
const HELSTROM_CUTOFF: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EveStrategy {
    /// Alice sends `a` or `b` with probability ½ each; Eve applies the optimal
    /// two-outcome measurement for her averaged images of the pair.
    HelstromPairwise { a: usize, b: usize },
    /// Alice sends any message uniformly; Eve measures in the computational
    /// basis and guesses the message with the highest likelihood.
    FixedMeasurement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub sent: usize,
    pub bob: usize,
    pub eve: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolRun {
    pub scheme_id: String,
    pub srf: SrfKind,
    pub n_messages: usize,
    pub n_trials: u64,
    pub seed: u64,
    pub strategy: EveStrategy,
    pub results: Vec<TrialRecord>,
}

fn rate(hits: usize, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        hits as f64 / n as f64
    }
}

/// Normal-approximation 95% interval, clipped to `[0, 1]`.
fn ci95(p: f64, n: usize) -> [f64; 2] {
    let half = 1.96 * (p * (1.0 - p) / n.max(1) as f64).sqrt();
    [(p - half).max(0.0), (p + half).min(1.0)]
}

impl ProtocolRun {
    pub fn bob_success_rate(&self) -> f64 {
        rate(self.results.iter().filter(|r| r.bob == r.sent).count(), self.results.len())
    }

    pub fn eve_guess_rate(&self) -> f64 {
        rate(self.results.iter().filter(|r| r.eve == r.sent).count(), self.results.len())
    }

    pub fn summary(&self) -> RunSummary {
        let n = self.results.len();
        let (bob, eve) = (self.bob_success_rate(), self.eve_guess_rate());
        let chance = match self.strategy {
            EveStrategy::HelstromPairwise { .. } => 0.5,
            EveStrategy::FixedMeasurement => 1.0 / self.n_messages as f64,
        };
        RunSummary {
            scheme_id: self.scheme_id.clone(),
            srf: self.srf,
            n_trials: self.n_trials,
            seed: self.seed,
            strategy: self.strategy,
            bob_success_rate: bob,
            bob_ci95: ci95(bob, n),
            eve_guess_rate: eve,
            eve_ci95: ci95(eve, n),
            eve_chance_rate: chance,
            eve_sigma: (chance * (1.0 - chance) / n.max(1) as f64).sqrt(),
            eve_mutual_information_bits: eve_mutual_information_estimate(self),
        }
    }

    /// One JSON object per line: `{"trial", "sent", "bob", "eve"}`.
    pub fn transcript_jsonl(&self) -> Result<String> {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(&serde_json::to_string(r)?);
            out.push('\n');
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub scheme_id: String,
    pub srf: SrfKind,
    pub n_trials: u64,
    pub seed: u64,
    pub strategy: EveStrategy,
    pub bob_success_rate: f64,
    pub bob_ci95: [f64; 2],
    pub eve_guess_rate: f64,
    pub eve_ci95: [f64; 2],
    /// Guess rate of an eavesdropper who learns nothing.
    pub eve_chance_rate: f64,
    /// Binomial standard deviation of the guess rate at chance.
    pub eve_sigma: f64,
    pub eve_mutual_information_bits: f64,
}

/// Applies a random frame relation of the given kind to `amps` in place.
fn misalign<R: Rng + ?Sized>(srf: SrfKind, n_qubits: usize, amps: &mut Vec<Complex64>, rng: &mut R) -> Result<()> {
    if matches!(srf, SrfKind::Su2 | SrfKind::Both) {
        apply_collective(&Rotation::haar_random(rng), n_qubits, amps);
    }
    if matches!(srf, SrfKind::Perm | SrfKind::Both) {
        let p = Permutation::random(n_qubits, rng);
        *amps = permute_ket(&p, &Ket::from_raw(std::mem::take(amps)))?.into_amplitudes();
    }
    Ok(())
}

/// Samples an outcome from (possibly subnormalized) probabilities; missing
/// mass beyond rounding maps to `probs.len()`.
fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    if acc > 1.0 - 1e-9 {
        // u landed in the rounding gap
        let last = probs.iter().rposition(|&p| p > 0.0);
        return last.unwrap_or(probs.len());
    }
    probs.len()
}

/// Projector onto the eigenvectors of `delta` with eigenvalue above the cutoff.
fn positive_projector(delta: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (vals, vecs) = hermitian_eigh(delta)?;
    let dim = delta.rows();
    let mut proj = ComplexMatrix::zeros(dim, dim);
    for (k, &v) in vals.iter().enumerate() {
        if v > HELSTROM_CUTOFF {
            let col = vecs.column(k);
            proj = proj.add(&ComplexMatrix::outer(&col, &col))?;
        }
    }
    Ok(proj)
}

fn expectation(op: &ComplexMatrix, amps: &[Complex64]) -> Result<f64> {
    let v = op.matvec(amps)?;
    Ok(amps.iter().zip(&v).map(|(a, b)| (a.conj() * b).re).sum())
}

enum Eve {
    Helstrom { a: usize, b: usize, proj: ComplexMatrix },
    Fixed { likelihood: Vec<Vec<f64>> },
}

impl Eve {
    fn prepare(scheme: &ClassicalScheme, strategy: EveStrategy, t: &SchurTransform) -> Result<Self> {
        let image = |i: usize| -> Result<DensityMatrix> {
            TwirlImage::of_amplitudes(scheme.srf(), t, scheme.states()[i].amplitudes())?.to_density(t)
        };
        match strategy {
            EveStrategy::HelstromPairwise { a, b } => {
                if a == b || a >= scheme.len() || b >= scheme.len() {
                    return Err(Error::InvalidArgument(format!("bad message pair ({a}, {b}) for {} messages", scheme.len())));
                }
                let delta = image(a)?.matrix().sub(image(b)?.matrix())?;
                Ok(Eve::Helstrom { a, b, proj: positive_projector(&delta)? })
            }
            EveStrategy::FixedMeasurement => {
                // likelihood[x][i] = ⟨x| T(ρ_i) |x⟩
                let diags: Vec<Vec<f64>> = (0..scheme.len())
                    .map(|i| image(i).map(|d| (0..t.dim()).map(|x| d.matrix()[(x, x)].re).collect()))
                    .collect::<Result<_>>()?;
                let likelihood = (0..t.dim()).map(|x| diags.iter().map(|d| d[x]).collect()).collect();
                Ok(Eve::Fixed { likelihood })
            }
        }
    }

    fn guess<R: Rng + ?Sized>(&self, amps: &[Complex64], rng: &mut R) -> Result<usize> {
        match self {
            Eve::Helstrom { a, b, proj } => {
                let p_a = expectation(proj, amps)?.clamp(0.0, 1.0);
                Ok(if rng.random::<f64>() < p_a { *a } else { *b })
            }
            Eve::Fixed { likelihood } => {
                let probs: Vec<f64> = amps.iter().map(|z| z.norm_sqr()).collect();
                let x = sample_index(&probs, rng).min(probs.len() - 1);
                let row = &likelihood[x];
                let mut best = 0;
                for (i, &l) in row.iter().enumerate() {
                    if l > row[best] + 1e-12 {
                        best = i;
                    }
                }
                Ok(best)
            }
        }
    }
}

/// Runs the protocol on a scheme that passes certification at default
/// tolerances; refuses otherwise.
pub fn run_protocol(scheme: &ClassicalScheme, n_trials: u64, seed: u64, strategy: EveStrategy) -> Result<ProtocolRun> {
    let report = certify_classical(scheme, Tolerances::default())?;
    if !report.passed {
        return Err(Error::Uncertified(report.failures.join("; ")));
    }
    run_protocol_unchecked(scheme, n_trials, seed, strategy)
}

/// As `run_protocol` but without the certification gate; used for negative controls.
pub fn run_protocol_unchecked(
    scheme: &ClassicalScheme,
    n_trials: u64,
    seed: u64,
    strategy: EveStrategy,
) -> Result<ProtocolRun> {
    let n = scheme.n_qubits();
    let t = SchurTransform::shared(n)?;
    let eve = Eve::prepare(scheme, strategy, &t)?;
    let states = scheme.states();
    let mut results = Vec::with_capacity(n_trials as usize);
    for trial in 0..n_trials {
        let mut rng = sample_rng(seed, trial);
        let sent = match strategy {
            EveStrategy::HelstromPairwise { a, b } => {
                if rng.random_bool(0.5) {
                    a
                } else {
                    b
                }
            }
            EveStrategy::FixedMeasurement => rng.random_range(0..states.len()),
        };
        let psi = &states[sent];
        // Bob shares Alice's frame and measures in the signal basis
        let probs: Vec<f64> = states.iter().map(|s| s.inner(psi).map(|z| z.norm_sqr())).collect::<Result<_>>()?;
        let bob = sample_index(&probs, &mut rng);
        let mut view = psi.amplitudes().to_vec();
        misalign(scheme.srf(), n, &mut view, &mut rng)?;
        let eve_guess = eve.guess(&view, &mut rng)?;
        results.push(TrialRecord { trial, sent, bob, eve: eve_guess });
    }
    Ok(ProtocolRun {
        scheme_id: scheme.id(),
        srf: scheme.srf(),
        n_messages: states.len(),
        n_trials,
        seed,
        strategy,
        results,
    })
}

/// Plug-in estimate of `I(sent; eve)` in bits from the empirical joint counts.
pub fn eve_mutual_information_estimate(run: &ProtocolRun) -> f64 {
    let n = run.results.len();
    if n == 0 {
        return 0.0;
    }
    let m = run.n_messages;
    let mut joint = vec![0usize; m * m];
    let (mut sent_counts, mut eve_counts) = (vec![0usize; m], vec![0usize; m]);
    for r in &run.results {
        let (s, e) = (r.sent.min(m - 1), r.eve.min(m - 1));
        joint[s * m + e] += 1;
        sent_counts[s] += 1;
        eve_counts[e] += 1;
    }
    let nf = n as f64;
    let mut mi = 0.0;
    for s in 0..m {
        for e in 0..m {
            let c = joint[s * m + e];
            if c > 0 {
                let p = c as f64 / nf;
                mi += p * (p * nf * nf / (sent_counts[s] as f64 * eve_counts[e] as f64)).log2();
            }
        }
    }
    mi.max(0.0)
}

/// Two messages sent under the same, unknown rotation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReuseReport {
    pub scheme_id: String,
    pub n_trials: u64,
    pub seed: u64,
    /// Optimal rate for deciding "same message twice" vs "two different
    /// messages" when both transmissions share one frame relation.
    pub reused_frame_helstrom: f64,
    /// The same figure when each transmission gets an independent rotation.
    pub fresh_frame_helstrom: f64,
    pub empirical_rate: f64,
    pub empirical_ci95: [f64; 2],
    pub advantage: f64,
}

/// Alice sends two messages through one frame relation; Eve, measuring the
/// joint `2N`-qubit state, tries to tell whether they were equal. Equal and
/// unequal pairs are sent with probability ½ each.
pub fn reuse_frame_demo(scheme: &ClassicalScheme, n_trials: u64, seed: u64) -> Result<ReuseReport> {
    if scheme.srf() != SrfKind::Su2 {
        return Err(Error::InvalidArgument("frame reuse is modelled for SU(2) schemes only".into()));
    }
    let n = scheme.n_qubits();
    let joint_t = SchurTransform::shared(2 * n)?;
    let single_t = SchurTransform::shared(n)?;
    let states = scheme.states();
    let m = states.len();
    let pair_ket = |i: usize, k: usize| states[i].kron(&states[k]);

    let dim2 = joint_t.dim();
    let (mut same, mut diff) = (ComplexMatrix::zeros(dim2, dim2), ComplexMatrix::zeros(dim2, dim2));
    let (mut same_fresh, mut diff_fresh) = (same.clone(), diff.clone());
    let images: Vec<DensityMatrix> =
        states.iter().map(|s| twirl_su2_exact(&s.projector(), &single_t)).collect::<Result<_>>()?;
    let w_same = Complex64::new(1.0 / m as f64, 0.0);
    let w_diff = Complex64::new(1.0 / (m * (m - 1)) as f64, 0.0);
    for i in 0..m {
        for k in 0..m {
            let (acc, fresh, w) = if i == k { (&mut same, &mut same_fresh, w_same) } else { (&mut diff, &mut diff_fresh, w_diff) };
            acc.add_assign_scaled(pair_ket(i, k).projector().matrix(), w);
            fresh.add_assign_scaled(&images[i].kron(&images[k]).into_matrix(), w);
        }
    }
    let same = twirl_su2_exact(&DensityMatrix::from_trusted(same), &joint_t)?;
    let diff = twirl_su2_exact(&DensityMatrix::from_trusted(diff), &joint_t)?;
    let reused = 0.5 + 0.5 * trace_distance(&same, &diff)?;
    let fresh = 0.5
        + 0.5 * trace_distance(&DensityMatrix::from_trusted(same_fresh), &DensityMatrix::from_trusted(diff_fresh))?;

    let proj = positive_projector(&same.matrix().sub(diff.matrix())?)?;
    let mut hits = 0usize;
    for trial in 0..n_trials {
        let mut rng = sample_rng(seed, trial);
        let is_same = rng.random_bool(0.5);
        let i = rng.random_range(0..m);
        let k = if is_same { i } else { (i + rng.random_range(1..m)) % m };
        let mut view = pair_ket(i, k).into_amplitudes();
        apply_collective(&Rotation::haar_random(&mut rng), 2 * n, &mut view);
        let says_same = rng.random::<f64>() < expectation(&proj, &view)?.clamp(0.0, 1.0);
        if says_same == is_same {
            hits += 1;
        }
    }
    let empirical = rate(hits, n_trials as usize);
    Ok(ReuseReport {
        scheme_id: scheme.id(),
        n_trials,
        seed,
        reused_frame_helstrom: reused,
        fresh_frame_helstrom: fresh,
        empirical_rate: empirical,
        empirical_ci95: ci95(empirical, n_trials as usize),
        advantage: empirical - 0.5,
    })
}
