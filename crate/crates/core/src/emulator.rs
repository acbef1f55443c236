//! Shot-noise emulation of the measurement pipeline: informationally
//! complete Pauli settings on the three qubits, multinomial count
//! sampling, linear-inversion tomography with positivity projection,
//! and Monte Carlo error bars for the derived metrics.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::infomeasures::{computational_basis, free_coherence, mutual_information, Bipartition};
use crate::qmath::{
    eig_hermitian, fidelity, kron, kron_vec, require, ComplexMatrix, DensityMatrix,
};
use crate::scalar::Scalar;
use crate::switch::joint_layout;

/// Measurement basis for one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliBasis {
    X,
    Y,
    Z,
}

impl PauliBasis {
    pub const ALL: [PauliBasis; 3] = [PauliBasis::X, PauliBasis::Y, PauliBasis::Z];

    fn letter(&self) -> char {
        match self {
            Self::X => 'X',
            Self::Y => 'Y',
            Self::Z => 'Z',
        }
    }

    /// Eigenvectors `[+1, -1]` of the basis operator; outcome bit 0
    /// means the +1 eigenstate.
    fn eigenvectors<T: Scalar>(&self) -> [[Complex<T>; 2]; 2] {
        let zero = Complex::new(T::zero(), T::zero());
        let one = Complex::new(T::one(), T::zero());
        let h = Complex::new(T::real(0.5).sqrt(), T::zero());
        let ih = Complex::new(T::zero(), T::real(0.5).sqrt());
        match self {
            Self::Z => [[one, zero], [zero, one]],
            Self::X => [[h, h], [h, -h]],
            Self::Y => [[h, ih], [h, -ih]],
        }
    }

    fn operator<T: Scalar>(&self) -> ComplexMatrix<T> {
        let zero = Complex::new(T::zero(), T::zero());
        let one = Complex::new(T::one(), T::zero());
        let i = Complex::new(T::zero(), T::one());
        let mut m = ComplexMatrix::zeros(2, 2);
        match self {
            Self::X => {
                m[(0, 1)] = one;
                m[(1, 0)] = one;
            }
            Self::Y => {
                m[(0, 1)] = zero - i;
                m[(1, 0)] = i;
            }
            Self::Z => {
                m[(0, 0)] = one;
                m[(1, 1)] = zero - one;
            }
        }
        m
    }
}

/// Per-qubit basis choice for one tomography setting on (A, M, C).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeasurementSetting {
    pub bases: [PauliBasis; 3],
}

impl MeasurementSetting {
    /// The 27 settings in canonical (X, Y, Z)³ order.
    pub fn all() -> Vec<Self> {
        let mut out = Vec::with_capacity(27);
        for a in PauliBasis::ALL {
            for m in PauliBasis::ALL {
                for c in PauliBasis::ALL {
                    out.push(Self { bases: [a, m, c] });
                }
            }
        }
        out
    }

    /// Three-letter label such as `XYZ`, ordered (A, M, C).
    pub fn label(&self) -> String {
        self.bases.iter().map(|b| b.letter()).collect()
    }
}

/// Outcome counts for one setting; `counts[o]` indexes the joint
/// outcome bits as `o = a·4 + m·2 + c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    pub setting: MeasurementSetting,
    pub shots: u64,
    pub counts: [u64; 8],
}

/// Seed for the emulation RNG.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomSeed(pub u64);

/// SplitMix64 over (master, index): decorrelated per-trial seeds that
/// are reproducible under any execution order.
pub(crate) fn trial_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Born-rule probabilities of the 8 joint outcomes of a setting.
pub fn born_probabilities<T: Scalar>(
    rho: &DensityMatrix<T>,
    setting: &MeasurementSetting,
) -> Result<[T; 8]> {
    require(rho.dim() == 8 && rho.layout().len() == 3, || {
        Error::DimMismatch("tomography emulation expects a three-qubit state".into())
    })?;
    let vecs: Vec<[[Complex<T>; 2]; 2]> =
        setting.bases.iter().map(|b| b.eigenvectors()).collect();
    let mut probs = [T::zero(); 8];
    for (o, slot) in probs.iter_mut().enumerate() {
        let bits = [(o >> 2) & 1, (o >> 1) & 1, o & 1];
        let v = kron_vec(
            &kron_vec(&vecs[0][bits[0]], &vecs[1][bits[1]]),
            &vecs[2][bits[2]],
        );
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..8 {
            for j in 0..8 {
                acc += v[i].conj() * rho.matrix()[(i, j)] * v[j];
            }
        }
        *slot = acc.re.max(T::zero());
    }
    Ok(probs)
}

/// Multinomial draw by sequential binomial splitting; deterministic
/// given the seed.
pub fn sample_counts<T: Scalar>(
    setting: &MeasurementSetting,
    probs: &[T; 8],
    shots: u64,
    seed: RandomSeed,
) -> CountTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    sample_counts_with_rng(setting, probs, shots, &mut rng)
}

/// One emulated tomography run: counts for all 27 settings drawn from
/// a single seeded stream, in canonical setting order.
pub fn sample_run<T: Scalar>(
    rho: &DensityMatrix<T>,
    shots: u64,
    seed: RandomSeed,
) -> Result<Vec<CountTable>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    MeasurementSetting::all()
        .into_iter()
        .map(|s| {
            let probs = born_probabilities(rho, &s)?;
            Ok(sample_counts_with_rng(&s, &probs, shots, &mut rng))
        })
        .collect()
}

fn sample_counts_with_rng<T: Scalar>(
    setting: &MeasurementSetting,
    probs: &[T; 8],
    shots: u64,
    rng: &mut impl Rng,
) -> CountTable {
    let p64: Vec<f64> = probs.iter().map(|p| p.to_f64().unwrap().max(0.0)).collect();
    let total: f64 = p64.iter().sum();

    let mut counts = [0u64; 8];
    let mut remaining_shots = shots;
    let mut remaining_mass = total;
    for o in 0..7 {
        if remaining_shots == 0 {
            break;
        }
        let ratio = if remaining_mass > 0.0 {
            (p64[o] / remaining_mass).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let draw = if ratio >= 1.0 {
            remaining_shots
        } else {
            Binomial::new(remaining_shots, ratio)
                .expect("ratio clamped to [0, 1]")
                .sample(rng)
        };
        counts[o] = draw;
        remaining_shots -= draw;
        remaining_mass -= p64[o];
    }
    counts[7] = remaining_shots;

    CountTable {
        setting: *setting,
        shots,
        counts,
    }
}

/// Project a Hermitian matrix to the nearest trace-one PSD matrix by
/// zeroing negative eigenvalues and renormalizing the trace.
pub fn project_to_state<T: Scalar>(m: &ComplexMatrix<T>) -> Result<DensityMatrix<T>> {
    let eig = eig_hermitian(m)?;
    let mass: T = eig.values.iter().map(|&v| v.max(T::zero())).sum();
    require(mass > T::zero(), || {
        Error::InvalidState("projection target has no positive spectrum".into())
    })?;
    let projected = eig.map_rebuild(|lambda| {
        if lambda > T::zero() {
            Some(lambda / mass)
        } else {
            None
        }
    });
    DensityMatrix::new(projected, joint_layout())
}

/// Linear-inversion tomography from outcome frequencies: empirical
/// Pauli expectations (averaged over every consistent setting) are
/// assembled into `ρ = (1/8) Σ ⟨P⟩ P`, then projected to a physical
/// state.
pub fn reconstruct_from_frequencies<T: Scalar>(
    data: &[(MeasurementSetting, [T; 8])],
) -> Result<DensityMatrix<T>> {
    require(data.len() == 27, || {
        Error::InvalidArgument(format!("need all 27 settings, got {}", data.len()))
    })?;
    let canonical = MeasurementSetting::all();
    for s in &canonical {
        require(data.iter().filter(|(d, _)| d == s).count() == 1, || {
            Error::InvalidArgument(format!("setting {} missing or duplicated", s.label()))
        })?;
    }

    // expectation of the Pauli word restricted to `support` under one setting
    let word_expectation = |freqs: &[T; 8], support: &[usize]| -> T {
        let mut acc = T::zero();
        for (o, &f) in freqs.iter().enumerate() {
            let bits = [(o >> 2) & 1, (o >> 1) & 1, o & 1];
            let parity: usize = support.iter().map(|&q| bits[q]).sum();
            let sign = if parity.is_multiple_of(2) { T::one() } else { -T::one() };
            acc += sign * f;
        }
        acc
    };

    let id2 = ComplexMatrix::<T>::identity(2);
    let mut rho = ComplexMatrix::zeros(8, 8);
    // words indexed by 0 = I, 1..3 = X, Y, Z on each qubit
    for word in 0..64usize {
        let letters = [(word >> 4) & 3, (word >> 2) & 3, word & 3];
        let support: Vec<usize> = (0..3).filter(|&q| letters[q] != 0).collect();

        let expectation = if support.is_empty() {
            T::one()
        } else {
            let mut total = T::zero();
            let mut hits = 0usize;
            for (setting, freqs) in data {
                let consistent = support
                    .iter()
                    .all(|&q| setting.bases[q] == PauliBasis::ALL[letters[q] - 1]);
                if consistent {
                    total += word_expectation(freqs, &support);
                    hits += 1;
                }
            }
            total / T::from_usize(hits).unwrap()
        };

        let mut op = ComplexMatrix::identity(1);
        for &letter in &letters {
            let factor = if letter == 0 {
                id2.clone()
            } else {
                PauliBasis::ALL[letter - 1].operator()
            };
            op = kron(&op, &factor);
        }
        rho = &rho + &op.scale_real(expectation / T::real(8.0));
    }

    project_to_state(&rho)
}

/// Tomographic reconstruction from shot counts of all 27 settings.
pub fn tomo_reconstruct<T: Scalar>(tables: &[CountTable]) -> Result<DensityMatrix<T>> {
    let data: Vec<(MeasurementSetting, [T; 8])> = tables
        .iter()
        .map(|t| {
            require(t.shots > 0, || {
                Error::InvalidArgument("count table has zero shots".into())
            })?;
            require(t.counts.iter().sum::<u64>() == t.shots, || {
                Error::InvalidArgument("counts do not sum to shots".into())
            })?;
            let shots = T::from_u64(t.shots).unwrap();
            let mut freqs = [T::zero(); 8];
            for (f, &c) in freqs.iter_mut().zip(&t.counts) {
                *f = T::from_u64(c).unwrap() / shots;
            }
            Ok((t.setting, freqs))
        })
        .collect::<Result<_>>()?;
    reconstruct_from_frequencies(&data)
}

/// Mean and sample standard deviation of a metric over trials; the
/// standard deviation is the reported error bar.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MetricStat<T> {
    pub mean: T,
    pub std: T,
}

fn stat_of<T: Scalar>(samples: &[T]) -> MetricStat<T> {
    let n = T::from_usize(samples.len()).unwrap();
    let mean = samples.iter().copied().sum::<T>() / n;
    let var = samples
        .iter()
        .map(|&x| (x - mean) * (x - mean))
        .sum::<T>()
        / (n - T::one());
    MetricStat {
        mean,
        std: var.max(T::zero()).sqrt(),
    }
}

/// Monte Carlo summary for the tracked metrics.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MonteCarloReport<T> {
    /// `I(A:CM)` of the reconstructed state.
    pub mutual_information: MetricStat<T>,
    /// Free coherence of the reconstructed control marginal.
    pub free_coherence: MetricStat<T>,
    /// Squared Uhlmann fidelity of the reconstruction to the truth.
    pub fidelity: MetricStat<T>,
    /// The same fidelity in the amplitude convention `√F`.
    pub fidelity_amplitude: MetricStat<T>,
}

/// Emulate `trials` independent tomography experiments of
/// `shots` per setting on `rho_true` and report per-metric statistics.
/// Trials run in parallel; per-trial sub-seeding keeps the output
/// identical for a given seed regardless of scheduling.
pub fn monte_carlo_metrics<T: Scalar>(
    rho_true: &DensityMatrix<T>,
    shots: u64,
    trials: usize,
    seed: RandomSeed,
) -> Result<MonteCarloReport<T>> {
    require(trials >= 2, || {
        Error::InvalidArgument("need at least two trials for an error bar".into())
    })?;
    require(shots > 0, || {
        Error::InvalidArgument("need at least one shot per setting".into())
    })?;
    let settings = MeasurementSetting::all();
    let probs: Vec<[T; 8]> = settings
        .iter()
        .map(|s| born_probabilities(rho_true, s))
        .collect::<Result<_>>()?;

    let part = Bipartition::new(&["A"], &["M", "C"]);
    let samples: Vec<(T, T, T)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed.0, t));
            let tables: Vec<CountTable> = settings
                .iter()
                .zip(&probs)
                .map(|(s, p)| sample_counts_with_rng(s, p, shots, &mut rng))
                .collect();
            let rec = tomo_reconstruct(&tables).expect("tables are complete by construction");
            let i = mutual_information(&rec, &part).expect("layout matches");
            let control = rec.partial_trace(&["C"]).expect("C marginal");
            let a = free_coherence(&control, &computational_basis(2)).expect("orthonormal basis");
            let f = fidelity(&rec, rho_true).expect("same dimensions");
            (i, a, f)
        })
        .collect();

    let i: Vec<T> = samples.iter().map(|s| s.0).collect();
    let a: Vec<T> = samples.iter().map(|s| s.1).collect();
    let f: Vec<T> = samples.iter().map(|s| s.2).collect();
    let f_amp: Vec<T> = f.iter().map(|&x| x.sqrt()).collect();
    Ok(MonteCarloReport {
        mutual_information: stat_of(&i),
        free_coherence: stat_of(&a),
        fidelity: stat_of(&f),
        fidelity_amplitude: stat_of(&f_amp),
    })
}
