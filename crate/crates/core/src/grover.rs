//! Grover search, simulated in full and through its two-dimensional reduction.
//!
//! One kernel application is `K = U_s U_{y0}`: an oracle reflection that
//! flips the sign of the marked amplitude, followed by inversion about the
//! mean. From the uniform start the dynamics stay in `span{|y0⟩, |y0⊥⟩}`,
//! where `K` is a rotation by `θ` with `cos θ = 1 - 2/N`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::majorder::{compare, ProbVector, Trace};
use crate::statevec::StateVector;

#[derive(Clone, Debug)]
pub enum InitialState {
    Symmetric,
    Custom(StateVector),
}

#[derive(Clone, Debug)]
pub struct GroverConfig {
    pub n: usize,
    pub target: usize,
    pub max_iters: usize,
    pub initial: InitialState,
}

impl GroverConfig {
    pub fn symmetric(n: usize, target: usize, max_iters: usize) -> Self {
        Self {
            n,
            target,
            max_iters,
            initial: InitialState::Symmetric,
        }
    }

    fn validate(&self) -> Result<()> {
        let dim = 1usize << self.n;
        if self.target >= dim {
            return Err(Error::OutOfRange {
                index: self.target,
                bound: dim,
            });
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidArgument("max_iters must be >= 1".into()));
        }
        if let InitialState::Custom(s) = &self.initial {
            if s.n_qubits() != self.n {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: s.dim(),
                });
            }
        }
        Ok(())
    }
}

/// `U_{y0} = 1 - 2|y0⟩⟨y0|`
pub fn oracle_reflect(state: &mut StateVector, target: usize) -> Result<()> {
    let dim = state.dim();
    let amps = state.amplitudes_mut();
    let a = amps
        .get_mut(target)
        .ok_or(Error::OutOfRange { index: target, bound: dim })?;
    *a = -*a;
    Ok(())
}

/// `U_s = 2|s⟩⟨s| - 1`: `c_x ← 2·mean(c) - c_x`.
pub fn diffusion(state: &mut StateVector) {
    let amps = state.amplitudes_mut();
    let mean = amps.iter().sum::<Complex64>() / amps.len() as f64;
    for c in amps.iter_mut() {
        *c = 2.0 * mean - *c;
    }
}

pub fn kernel(state: &mut StateVector, target: usize) -> Result<()> {
    oracle_reflect(state, target)?;
    diffusion(state);
    Ok(())
}

/// Probabilities before and after each of `max_iters` kernel applications,
/// labeled `m=0`, `m=1`, ...
pub fn run(cfg: &GroverConfig) -> Result<Trace> {
    cfg.validate()?;
    let mut state = match &cfg.initial {
        InitialState::Symmetric => StateVector::uniform_superposition(cfg.n)?,
        InitialState::Custom(s) => s.clone(),
    };
    let mut trace = Trace::new("grover", cfg.n);
    trace.push("m=0", state.probabilities())?;
    for m in 1..=cfg.max_iters {
        kernel(&mut state, cfg.target)?;
        trace.push(format!("m={m}"), state.probabilities())?;
    }
    Ok(trace)
}

/// Uniform amplitudes with one non-target amplitude doubled, renormalized.
/// From this start the off-target subspace is no longer symmetric.
pub fn boosted_initial_state(n: usize, target: usize, boosted: usize) -> Result<StateVector> {
    let dim = 1usize << n;
    if target >= dim || boosted >= dim {
        return Err(Error::OutOfRange {
            index: target.max(boosted),
            bound: dim,
        });
    }
    if boosted == target {
        return Err(Error::InvalidArgument(
            "boosted amplitude must differ from the target".into(),
        ));
    }
    let mut amps = vec![Complex64::new(1.0, 0.0); dim];
    amps[boosted] = Complex64::new(2.0, 0.0);
    StateVector::from_amplitudes(amps)
}

/// The kernel restricted to `{|y0⟩, |y0⊥⟩}`.
#[derive(Clone, Copy, Debug)]
pub struct ReducedModel {
    pub size: usize,
    pub theta: f64,
}

impl ReducedModel {
    pub fn new(size: usize) -> Result<Self> {
        if size < 2 {
            return Err(Error::InvalidArgument(format!(
                "search space size {size} < 2"
            )));
        }
        let theta = (1.0 - 2.0 / size as f64).acos();
        Ok(Self { size, theta })
    }

    /// Rotation matrix of one kernel application in the `(|y0⟩, |y0⊥⟩)` basis.
    ///
    /// Oriented so the `|y0⟩` component grows from the uniform start.
    pub fn rotation(&self) -> [[f64; 2]; 2] {
        let (s, c) = self.theta.sin_cos();
        [[c, s], [-s, c]]
    }

    /// `|s⟩ = (1/√N, √(1-1/N))`
    pub fn initial(&self) -> [f64; 2] {
        let inv = 1.0 / self.size as f64;
        [inv.sqrt(), (1.0 - inv).sqrt()]
    }

    /// `K^m |s⟩`, rotating by `mθ` in one step.
    pub fn state_after(&self, m: usize) -> [f64; 2] {
        let (s, c) = (m as f64 * self.theta).sin_cos();
        let [a, b] = self.initial();
        [c * a + s * b, -s * a + c * b]
    }
}

pub fn reduced_success_amplitude(model: &ReducedModel, m: usize) -> f64 {
    model.state_after(m)[0]
}

/// Iteration count that first maximizes the success probability.
///
/// Scans `m = 1..=⌈π/(2θ)⌉`, which covers the first rise of the rotation
/// angle `(2m+1)θ/2` through `π/2`. Later revivals are ignored.
pub fn optimal_iterations(size: usize) -> Result<usize> {
    let model = ReducedModel::new(size)?;
    let last = (std::f64::consts::FRAC_PI_2 / model.theta).ceil() as usize;
    let mut best = (1, f64::NEG_INFINITY);
    for m in 1..=last.max(1) {
        let p = reduced_success_amplitude(&model, m).powi(2);
        if p > best.1 {
            best = (m, p);
        }
    }
    Ok(best.0)
}

/// The symmetric list `[p, (1-p)/(N-1), ..., (1-p)/(N-1)]`.
pub fn symmetric_list(p: f64, size: usize) -> Result<ProbVector> {
    if size < 2 {
        return Err(Error::InvalidArgument(format!(
            "search space size {size} < 2"
        )));
    }
    let rest = (1.0 - p) / (size - 1) as f64;
    let mut v = vec![rest; size];
    v[0] = p;
    ProbVector::new(v)
}

/// Checks one step of symmetric Grover evolution, `p → p_next`.
///
/// True iff `p ≤ p_next + tol` and the two symmetric lists compare as
/// `list(p) ≺ list(p_next)` (or equal). The two agree whenever `p ≥ 1/N`.
pub fn check_symmetric_step(p: f64, p_next: f64, size: usize, tol: f64) -> Result<bool> {
    for q in [p, p_next] {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidArgument(format!(
                "probability {q} outside [0, 1]"
            )));
        }
    }
    let before = symmetric_list(p, size)?;
    let after = symmetric_list(p_next, size)?;
    let verdict = compare(&before, &after, tol)?;
    Ok(p <= p_next + tol && verdict.relation.is_forward())
}
