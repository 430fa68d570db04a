//! Dense statevector over `n` qubits.
//!
//! Basis index `x = Σ_j x_j 2^j`: qubit `j` is bit `j` of the index.

use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::majorder::ProbVector;

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateOp {
    Hadamard(usize),
    /// Multiplies the |1⟩ component of the qubit by `e^{iθ}`.
    Phase(usize, f64),
    /// Multiplies amplitudes with both qubits set by `e^{iθ}`.
    ControlledPhase { ctrl: usize, tgt: usize, angle: f64 },
    Swap(usize, usize),
}

impl GateOp {
    pub fn inverse(self) -> GateOp {
        match self {
            GateOp::Phase(q, a) => GateOp::Phase(q, -a),
            GateOp::ControlledPhase { ctrl, tgt, angle } => GateOp::ControlledPhase {
                ctrl,
                tgt,
                angle: -angle,
            },
            g => g,
        }
    }

    /// Diagonal gates only add phases and leave probabilities untouched.
    pub fn is_diagonal(self) -> bool {
        matches!(self, GateOp::Phase(..) | GateOp::ControlledPhase { .. })
    }

    fn check(self, n: usize) -> Result<()> {
        let qubit = |q: usize| {
            if q < n {
                Ok(())
            } else {
                Err(Error::OutOfRange { index: q, bound: n })
            }
        };
        match self {
            GateOp::Hadamard(q) | GateOp::Phase(q, _) => qubit(q),
            GateOp::ControlledPhase { ctrl, tgt, .. } => {
                qubit(ctrl)?;
                qubit(tgt)?;
                if ctrl == tgt {
                    return Err(Error::InvalidArgument(format!(
                        "controlled phase with ctrl == tgt == {ctrl}"
                    )));
                }
                Ok(())
            }
            GateOp::Swap(a, b) => {
                qubit(a)?;
                qubit(b)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::InvalidArgument(format!(
            "qubit count {n} outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

impl StateVector {
    pub fn from_basis(n: usize, x: usize) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        if x >= dim {
            return Err(Error::OutOfRange { index: x, bound: dim });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[x] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// `|s⟩ = 2^{-n/2} Σ_x |x⟩`.
    pub fn uniform_superposition(n: usize) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        let a = Complex64::new((dim as f64).sqrt().recip(), 0.0);
        Ok(Self {
            n,
            amps: vec![a; dim],
        })
    }

    /// Wraps raw amplitudes, normalizing them. The length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "amplitude count {dim} is not a power of two >= 2"
            )));
        }
        let n = dim.trailing_zeros() as usize;
        check_qubits(n)?;
        let norm = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized { sum: norm * norm });
        }
        Ok(Self {
            n,
            amps: amps.into_iter().map(|c| c / norm).collect(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> ProbVector {
        // unitary evolution keeps the norm within MASS_TOL
        ProbVector::new(self.amps.iter().map(|c| c.norm_sqr()).collect())
            .expect("state vector is normalized")
    }

    pub fn apply_gate(&mut self, gate: GateOp) -> Result<()> {
        gate.check(self.n)?;
        match gate {
            GateOp::Hadamard(q) => {
                let bit = 1usize << q;
                for x in 0..self.amps.len() {
                    if x & bit == 0 {
                        let a = self.amps[x];
                        let b = self.amps[x | bit];
                        self.amps[x] = (a + b) * FRAC_1_SQRT_2;
                        self.amps[x | bit] = (a - b) * FRAC_1_SQRT_2;
                    }
                }
            }
            GateOp::Phase(q, angle) => {
                let bit = 1usize << q;
                let w = Complex64::from_polar(1.0, angle);
                for (x, c) in self.amps.iter_mut().enumerate() {
                    if x & bit != 0 {
                        *c *= w;
                    }
                }
            }
            GateOp::ControlledPhase { ctrl, tgt, angle } => {
                let mask = (1usize << ctrl) | (1usize << tgt);
                let w = Complex64::from_polar(1.0, angle);
                for (x, c) in self.amps.iter_mut().enumerate() {
                    if x & mask == mask {
                        *c *= w;
                    }
                }
            }
            GateOp::Swap(a, b) => {
                if a != b {
                    let (ba, bb) = (1usize << a, 1usize << b);
                    for x in 0..self.amps.len() {
                        // visit each pair once, from the side with bit a set
                        if x & ba != 0 && x & bb == 0 {
                            self.amps.swap(x, x ^ ba ^ bb);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply_all(&mut self, gates: &[GateOp]) -> Result<()> {
        gates.iter().try_for_each(|&g| self.apply_gate(g))
    }
}

/// QFT as elementary gates, mapping `|x⟩ → 2^{-n/2} Σ_y e^{+2πi xy/2ⁿ} |y⟩`.
///
/// Qubits are processed from most significant down. Each gets a Hadamard and
/// then controlled phases `2π/2^k` (k = 2, 3, ...) from every lower qubit.
/// The output lands bit-reversed, so the sequence ends with `⌊n/2⌋` swaps.
pub fn qft_gate_sequence(n: usize) -> Vec<GateOp> {
    let mut gates = qft_core_gates(n);
    gates.extend(bit_reversal_swaps(n));
    gates
}

/// The Hadamard and controlled-phase part of [`qft_gate_sequence`].
pub fn qft_core_gates(n: usize) -> Vec<GateOp> {
    let mut gates = Vec::with_capacity(n + n * n.saturating_sub(1) / 2);
    for tgt in (0..n).rev() {
        gates.push(GateOp::Hadamard(tgt));
        for (k, ctrl) in (0..tgt).rev().enumerate() {
            gates.push(GateOp::ControlledPhase {
                ctrl,
                tgt,
                angle: 2.0 * PI / (1u64 << (k + 2)) as f64,
            });
        }
    }
    gates
}

pub fn bit_reversal_swaps(n: usize) -> Vec<GateOp> {
    (0..n / 2).map(|q| GateOp::Swap(q, n - 1 - q)).collect()
}
