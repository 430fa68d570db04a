//! Adiabatic evolution `i dψ/dt = H(t/T) ψ` (ħ = 1) in reduced bases.
//!
//! Two interpolating models are provided:
//!
//! * the projector model `H(s) = -(1-s)|s⟩⟨s| - s|0⟩⟨0|`, which lives in the
//!   two-dimensional span of `|0⟩` and `|0⊥⟩`;
//! * the transverse-field model with `H0 = Σ_i (1 - σx)^(i)`, reduced to the
//!   `n+1` symmetric states `|k⟩` (k qubits set), and `H1 = -|0⟩⟨0|`.
//!
//! Both are integrated with fixed-step classic RK4. The time-independent
//! mixture `-|s⟩⟨s| - |0⟩⟨0|` is also solved exactly via its 2×2
//! eigendecomposition.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::majorder::{ProbVector, Trace};

/// Upper bound on `dt · ‖H‖₂`.
pub const STABILITY_LIMIT: f64 = 0.05;
/// Upper bound on the step size regardless of `‖H‖`.
pub const MAX_DT: f64 = 0.01;
/// Snapshots recorded per sweep, approximately.
pub const TARGET_SNAPSHOTS: usize = 500;
/// Norm drift that aborts an integration.
pub const UNSTABLE_DRIFT: f64 = 1e-3;
/// Minimum prominence of the success-probability peak.
pub const PEAK_PROMINENCE: f64 = 1e-6;

/// A real-symmetric Hamiltonian parameterized by `s = t/T ∈ [0, 1]`.
pub trait HamiltonianProvider {
    fn dim(&self) -> usize;
    fn eval(&self, s: f64) -> DMatrix<f64>;
}

/// `H(s) = (1-s) H0 + s H1`
#[derive(Clone, Debug)]
pub struct Interpolated {
    pub h0: DMatrix<f64>,
    pub h1: DMatrix<f64>,
}

impl HamiltonianProvider for Interpolated {
    fn dim(&self) -> usize {
        self.h0.nrows()
    }

    fn eval(&self, s: f64) -> DMatrix<f64> {
        &self.h0 * (1.0 - s) + &self.h1 * s
    }
}

#[derive(Clone, Debug)]
pub struct Constant(pub DMatrix<f64>);

impl HamiltonianProvider for Constant {
    fn dim(&self) -> usize {
        self.0.nrows()
    }

    fn eval(&self, _s: f64) -> DMatrix<f64> {
        self.0.clone()
    }
}

fn check_n(n: usize, max: usize) -> Result<()> {
    if n == 0 || n > max {
        return Err(Error::InvalidArgument(format!(
            "qubit count {n} outside 1..={max}"
        )));
    }
    Ok(())
}

/// `|s⟩⟨s|` in the basis `{|0⟩, |0⊥⟩}`.
fn uniform_projector_2d(n: usize) -> DMatrix<f64> {
    let size = (1u64 << n) as f64;
    let off = (size - 1.0).sqrt() / size;
    DMatrix::from_row_slice(2, 2, &[1.0 / size, off, off, (size - 1.0) / size])
}

fn target_projector(dim: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(dim, dim);
    m[(0, 0)] = 1.0;
    m
}

pub fn projector_hamiltonian(n: usize) -> Result<Interpolated> {
    check_n(n, 52)?;
    Ok(Interpolated {
        h0: -uniform_projector_2d(n),
        h1: -target_projector(2),
    })
}

/// `-|s⟩⟨s| - |0⟩⟨0|` with no time dependence.
pub fn static_mixture_hamiltonian(n: usize) -> Result<Constant> {
    check_n(n, 52)?;
    Ok(Constant(-uniform_projector_2d(n) - target_projector(2)))
}

/// `Σ_i σx^(i)` in the symmetric basis: tridiagonal with
/// `N[j-1][j] = N[j][j-1] = √j · √(n-j+1)`.
pub fn symmetric_sigma_x(n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n + 1, n + 1);
    for j in 1..=n {
        let v = (j as f64).sqrt() * ((n - j + 1) as f64).sqrt();
        m[(j - 1, j)] = v;
        m[(j, j - 1)] = v;
    }
    m
}

/// `H0 = nI - N`, `H1 = -|0⟩⟨0|` over the symmetric states `|k⟩`.
pub fn farhi_hamiltonian(n: usize) -> Result<Interpolated> {
    check_n(n, 30)?;
    let h0 = DMatrix::identity(n + 1, n + 1) * n as f64 - symmetric_sigma_x(n);
    Ok(Interpolated {
        h0,
        h1: -target_projector(n + 1),
    })
}

/// Largest absolute eigenvalue of a symmetric matrix.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .fold(0.0, |acc: f64, e| acc.max(e.abs()))
}

/// `max ‖H(s)‖₂` estimated at `s ∈ {0, 1/2, 1}`.
pub fn norm_estimate(h: &dyn HamiltonianProvider) -> f64 {
    [0.0, 0.5, 1.0]
        .iter()
        .map(|&s| spectral_norm(&h.eval(s)))
        .fold(0.0, f64::max)
}

/// Eigenpairs of `[[a, b], [b, c]]`, ascending.
#[derive(Clone, Copy, Debug)]
pub struct Eigen2 {
    pub values: [f64; 2],
    pub vectors: [[f64; 2]; 2],
}

pub fn sym2_eigen(a: f64, b: f64, c: f64) -> Eigen2 {
    let mean = 0.5 * (a + c);
    let radius = (0.25 * (a - c).powi(2) + b * b).sqrt();
    let phi = 0.5 * (2.0 * b).atan2(a - c);
    let (s, co) = phi.sin_cos();
    Eigen2 {
        values: [mean - radius, mean + radius],
        vectors: [[-s, co], [co, s]],
    }
}

fn eigen_of(m: &DMatrix<f64>) -> Eigen2 {
    sym2_eigen(m[(0, 0)], m[(0, 1)], m[(1, 1)])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolutionConfig {
    pub total_time: f64,
    pub dt: f64,
    pub snapshot_stride: usize,
}

impl EvolutionConfig {
    pub fn new(total_time: f64, dt: f64, snapshot_stride: usize) -> Result<Self> {
        if !(total_time.is_finite() && total_time > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "total time {total_time} must be positive"
            )));
        }
        if !(dt > 0.0 && dt <= total_time) {
            return Err(Error::InvalidArgument(format!(
                "step {dt} outside (0, {total_time}]"
            )));
        }
        if snapshot_stride == 0 {
            return Err(Error::InvalidArgument("snapshot stride must be >= 1".into()));
        }
        Ok(Self {
            total_time,
            dt,
            snapshot_stride,
        })
    }

    /// `dt = min(0.01, 0.05 / max‖H‖)`, shrunk so the steps land exactly on
    /// `total_time`, with a stride giving about [`TARGET_SNAPSHOTS`] samples.
    pub fn with_policy(h: &dyn HamiltonianProvider, total_time: f64) -> Result<Self> {
        let norm = norm_estimate(h);
        let dt = if norm > 0.0 {
            MAX_DT.min(STABILITY_LIMIT / norm)
        } else {
            MAX_DT
        };
        Self::with_step(total_time, dt.min(total_time))
    }

    /// Uses at most `dt`, adjusted to divide `total_time` evenly.
    pub fn with_step(total_time: f64, dt: f64) -> Result<Self> {
        if !(total_time.is_finite() && total_time > 0.0 && dt > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "invalid time {total_time} or step {dt}"
            )));
        }
        let steps = (total_time / dt - 1e-9).ceil().max(1.0) as usize;
        Self::new(
            total_time,
            total_time / steps as f64,
            (steps / TARGET_SNAPSHOTS).max(1),
        )
    }

    pub fn steps(&self) -> usize {
        (self.total_time / self.dt).round().max(1.0) as usize
    }
}

#[derive(Clone, Debug)]
pub struct Sample {
    pub time: f64,
    pub probs: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct Evolution {
    pub samples: Vec<Sample>,
    pub final_state: Vec<Complex64>,
    /// Largest `|‖ψ‖ - 1|` seen at any step.
    pub max_norm_drift: f64,
}

impl Evolution {
    pub fn into_trace(self, algorithm: &str, n: usize) -> Result<Trace> {
        let mut trace = Trace::new(algorithm, n);
        for s in self.samples {
            trace.push(time_label(s.time), ProbVector::from_weights(s.probs)?)?;
        }
        Ok(trace)
    }
}

pub fn time_label(t: f64) -> String {
    format!("t={t:.6}")
}

fn apply_scaled(h: &DMatrix<f64>, psi: &[Complex64], out: &mut [Complex64]) {
    // out = -i H psi
    for (r, o) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, p) in psi.iter().enumerate() {
            acc += p * h[(r, c)];
        }
        *o = Complex64::new(acc.im, -acc.re);
    }
}

fn norm(psi: &[Complex64]) -> f64 {
    psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Classic fixed-step RK4 on `ψ' = -i H(t/T) ψ`, no renormalization.
///
/// Probabilities are sampled at `t = 0`, every `snapshot_stride` steps and at
/// the final step.
pub fn rk4_evolve(
    h: &dyn HamiltonianProvider,
    psi0: &[Complex64],
    cfg: &EvolutionConfig,
) -> Result<Evolution> {
    let dim = h.dim();
    if psi0.len() != dim {
        return Err(Error::DimensionMismatch {
            left: dim,
            right: psi0.len(),
        });
    }
    let bound = norm_estimate(h) * cfg.dt;
    if bound > STABILITY_LIMIT * (1.0 + 1e-9) {
        return Err(Error::InvalidArgument(format!(
            "dt·‖H‖ = {bound} exceeds {STABILITY_LIMIT}"
        )));
    }

    let total = cfg.total_time;
    let dt = cfg.dt;
    let steps = cfg.steps();
    let initial_norm = norm(psi0);

    let mut psi = psi0.to_vec();
    let zero = Complex64::new(0.0, 0.0);
    let (mut k1, mut k2, mut k3, mut k4) = (vec![zero; dim], vec![zero; dim], vec![zero; dim], vec![zero; dim]);
    let mut scratch = vec![zero; dim];

    let probs = |psi: &[Complex64]| psi.iter().map(|c| c.norm_sqr()).collect::<Vec<f64>>();
    let mut samples = vec![Sample {
        time: 0.0,
        probs: probs(&psi),
    }];
    let mut max_norm_drift: f64 = 0.0;

    for step in 0..steps {
        let t = step as f64 * dt;
        let h_start = h.eval(t / total);
        let h_mid = h.eval((t + 0.5 * dt) / total);
        let h_end = h.eval(((t + dt) / total).min(1.0));

        apply_scaled(&h_start, &psi, &mut k1);
        for i in 0..dim {
            scratch[i] = psi[i] + k1[i] * (0.5 * dt);
        }
        apply_scaled(&h_mid, &scratch, &mut k2);
        for i in 0..dim {
            scratch[i] = psi[i] + k2[i] * (0.5 * dt);
        }
        apply_scaled(&h_mid, &scratch, &mut k3);
        for i in 0..dim {
            scratch[i] = psi[i] + k3[i] * dt;
        }
        apply_scaled(&h_end, &scratch, &mut k4);
        for i in 0..dim {
            psi[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
        }

        let nrm = norm(&psi);
        let drift = (nrm - initial_norm).abs();
        max_norm_drift = max_norm_drift.max(drift);
        if drift.is_nan() || drift > UNSTABLE_DRIFT {
            return Err(Error::Unstable {
                time: t + dt,
                norm: nrm,
            });
        }
        if (step + 1) % cfg.snapshot_stride == 0 || step + 1 == steps {
            samples.push(Sample {
                time: if step + 1 == steps { total } else { (step + 1) as f64 * dt },
                probs: probs(&psi),
            });
        }
    }

    Ok(Evolution {
        samples,
        final_state: psi,
        max_norm_drift,
    })
}

/// Index of the first local maximum whose drop before the series next
/// exceeds it is larger than `prominence`. Falls back to the last index.
pub fn find_peak(values: &[f64], prominence: f64) -> usize {
    let last = values.len().saturating_sub(1);
    for i in 0..last {
        if values[i + 1] >= values[i] {
            continue;
        }
        let mut lowest = values[i];
        for &v in &values[i + 1..] {
            if v > values[i] {
                break;
            }
            lowest = lowest.min(v);
        }
        if values[i] - lowest > prominence {
            return i;
        }
    }
    last
}

/// Output of an adiabatic sweep.
#[derive(Clone, Debug)]
pub struct Sweep {
    /// Probability snapshots in the verdicting domain.
    pub trace: Trace,
    /// Probability of the target `|0⟩` at each snapshot.
    pub success: Vec<f64>,
    pub times: Vec<f64>,
    /// Snapshot index of the success-probability peak.
    pub peak: usize,
    pub max_norm_drift: f64,
}

impl Sweep {
    pub fn final_success(&self) -> f64 {
        *self.success.last().expect("sweep has snapshots")
    }

    /// Trace cut at the success peak, the window where majorization is asserted.
    pub fn up_to_peak(&self) -> Trace {
        self.trace.truncated(self.peak)
    }

    fn from_evolution(
        evo: Evolution,
        algorithm: &str,
        n: usize,
        expand: impl Fn(&[f64]) -> Vec<f64>,
    ) -> Result<Self> {
        let mut trace = Trace::new(algorithm, n);
        let mut success = Vec::with_capacity(evo.samples.len());
        let mut times = Vec::with_capacity(evo.samples.len());
        for s in &evo.samples {
            // RK4 does not renormalize; report probabilities at unit mass
            let norm: f64 = s.probs.iter().sum();
            let scaled: Vec<f64> = s.probs.iter().map(|p| p / norm).collect();
            success.push(scaled[0]);
            times.push(s.time);
            trace.push(time_label(s.time), ProbVector::new(expand(&scaled))?)?;
        }
        Ok(Self {
            trace,
            peak: find_peak(&success, PEAK_PROMINENCE),
            success,
            times,
            max_norm_drift: evo.max_norm_drift,
        })
    }
}

fn sweep_config(h: &dyn HamiltonianProvider, total_time: f64, dt: Option<f64>) -> Result<EvolutionConfig> {
    match dt {
        Some(dt) => EvolutionConfig::with_step(total_time, dt),
        None => EvolutionConfig::with_policy(h, total_time),
    }
}

/// Expands `[p, q]` over `{|0⟩, |0⊥⟩}` to the `2ⁿ` list `[p, q/(N-1), ...]`.
pub fn expand_two_level(probs: &[f64], n: usize) -> Vec<f64> {
    let size = 1usize << n;
    let rest = probs[1] / (size - 1) as f64;
    let mut v = vec![rest; size];
    v[0] = probs[0];
    v
}

/// Sweep of the projector model from `|s⟩`. Snapshots are expanded to the
/// full `2ⁿ` symmetric list before verdicting.
pub fn run_projector_sweep(n: usize, total_time: f64, dt: Option<f64>) -> Result<Sweep> {
    check_n(n, 12)?;
    let h = projector_hamiltonian(n)?;
    let cfg = sweep_config(&h, total_time, dt)?;
    let evo = rk4_evolve(&h, &two_level_uniform(n), &cfg)?;
    Sweep::from_evolution(evo, "adiabatic-projector", n, |p| expand_two_level(p, n))
}

/// `|s⟩` in the basis `{|0⟩, |0⊥⟩}`.
pub fn two_level_uniform(n: usize) -> Vec<Complex64> {
    let inv = 1.0 / (1u64 << n) as f64;
    vec![
        Complex64::new(inv.sqrt(), 0.0),
        Complex64::new((1.0 - inv).sqrt(), 0.0),
    ]
}

/// Which distribution a transverse-field sweep is verdicted on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FarhiDomain {
    /// The `2ⁿ` computational-basis probabilities: weight `|ψ_k|²` shared
    /// evenly by the `C(n, k)` basis states with `k` bits set.
    #[default]
    Computational,
    /// The `n+1` weights `|ψ_k|²` of the symmetric states.
    Subspace,
}

pub fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `|s⟩` over the symmetric states: `√(C(n,k) / 2ⁿ)`.
pub fn symmetric_uniform(n: usize) -> Vec<Complex64> {
    let size = (1u64 << n) as f64;
    (0..=n)
        .map(|k| Complex64::new((binomial(n, k) / size).sqrt(), 0.0))
        .collect()
}

/// Spreads symmetric-state weights over computational basis states.
pub fn expand_symmetric(weights: &[f64], n: usize) -> Vec<f64> {
    let per_state: Vec<f64> = weights
        .iter()
        .enumerate()
        .map(|(k, w)| w / binomial(n, k))
        .collect();
    (0..1usize << n)
        .map(|x| per_state[x.count_ones() as usize])
        .collect()
}

pub fn run_farhi_sweep(
    n: usize,
    total_time: f64,
    dt: Option<f64>,
    domain: FarhiDomain,
) -> Result<Sweep> {
    check_n(n, 10)?;
    let h = farhi_hamiltonian(n)?;
    let cfg = sweep_config(&h, total_time, dt)?;
    let evo = rk4_evolve(&h, &symmetric_uniform(n), &cfg)?;
    match domain {
        FarhiDomain::Computational => {
            Sweep::from_evolution(evo, "adiabatic-farhi", n, |p| expand_symmetric(p, n))
        }
        FarhiDomain::Subspace => Sweep::from_evolution(evo, "adiabatic-farhi", n, |p| p.to_vec()),
    }
}

/// RK4 under the constant mixture `-|s⟩⟨s| - |0⟩⟨0|`, expanded like the
/// projector sweep.
pub fn run_static_sweep(n: usize, total_time: f64, dt: Option<f64>) -> Result<Sweep> {
    check_n(n, 12)?;
    let h = static_mixture_hamiltonian(n)?;
    let cfg = sweep_config(&h, total_time, dt)?;
    let evo = rk4_evolve(&h, &two_level_uniform(n), &cfg)?;
    Sweep::from_evolution(evo, "adiabatic-static", n, |p| expand_two_level(p, n))
}

/// `exp(-iHt) ψ` for a 2×2 real-symmetric `H`, via its eigendecomposition.
pub fn exact_two_level(h: &DMatrix<f64>, psi: &[Complex64], t: f64) -> [Complex64; 2] {
    let e = eigen_of(h);
    let mut out = [Complex64::new(0.0, 0.0); 2];
    for (lambda, v) in e.values.iter().zip(e.vectors.iter()) {
        let overlap = psi[0] * v[0] + psi[1] * v[1];
        let phase = Complex64::from_polar(1.0, -lambda * t);
        out[0] += phase * overlap * v[0];
        out[1] += phase * overlap * v[1];
    }
    out
}

/// `|⟨0| e^{-iHt} |s⟩|²` for the constant mixture.
pub fn static_mixture_success(n: usize, t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::InvalidArgument(format!("negative time {t}")));
    }
    let h = static_mixture_hamiltonian(n)?;
    Ok(exact_two_level(&h.0, &two_level_uniform(n), t)[0].norm_sqr())
}

/// Gap between the two eigenvalues of the projector model at `s`.
pub fn projector_gap(n: usize, s: f64) -> Result<f64> {
    let e = eigen_of(&projector_hamiltonian(n)?.eval(s));
    Ok(e.values[1] - e.values[0])
}

/// Instantaneous ground state of the projector model at `s`.
pub fn projector_ground_state(n: usize, s: f64) -> Result<[f64; 2]> {
    Ok(eigen_of(&projector_hamiltonian(n)?.eval(s)).vectors[0])
}

/// Minimum gap of the projector model over `s ∈ [0, 1]`: dense scan with
/// step `1e-4`, then golden-section refinement around the best grid point.
pub fn min_gap_projector(n: usize) -> Result<(f64, f64)> {
    let h = projector_hamiltonian(n)?;
    let gap = |s: f64| {
        let e = eigen_of(&h.eval(s));
        e.values[1] - e.values[0]
    };
    const STEPS: usize = 10_000;
    let step = 1.0 / STEPS as f64;
    let (mut best_s, mut best_gap) = (0.0, gap(0.0));
    for i in 1..=STEPS {
        let s = i as f64 * step;
        let g = gap(s);
        if g < best_gap {
            best_s = s;
            best_gap = g;
        }
    }

    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = ((best_s - step).max(0.0), (best_s + step).min(1.0));
    for _ in 0..100 {
        let a = hi - ratio * (hi - lo);
        let b = lo + ratio * (hi - lo);
        if gap(a) < gap(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    let s = 0.5 * (lo + hi);
    let g = gap(s);
    Ok(if g < best_gap { (s, g) } else { (best_s, best_gap) })
}
