//! Phase estimation with a majorization checkpoint at every time slice.
//!
//! The eigenvector register is never stored: a controlled `U^{2^j}` acting on
//! an eigenvector of `U` with eigenvalue `e^{-2πiφ}` leaves it unchanged and
//! puts the phase `e^{-2πi 2^j φ}` on the `|1⟩` branch of control qubit `j`.
//!
//! Slices are labeled `t0` (after the Hadamards), `t1..tn` (after each
//! controlled power), `tn|1, tn|2, ...` (after each QFT gate but the last) and
//! `t{n+1}` (end of the circuit).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::majorder::{ProbVector, Trace};
use crate::statevec::{bit_reversal_swaps, qft_core_gates, GateOp, StateVector, MAX_QUBITS};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QpeConfig {
    pub n: usize,
    pub phi: f64,
}

impl QpeConfig {
    pub fn new(n: usize, phi: f64) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::InvalidArgument(format!(
                "qubit count {n} outside 1..={MAX_QUBITS}"
            )));
        }
        if !(0.0..1.0).contains(&phi) {
            return Err(Error::InvalidArgument(format!("phase {phi} outside [0, 1)")));
        }
        Ok(Self { n, phi })
    }
}

pub fn kickback_label(m: usize) -> String {
    format!("t{m}")
}

pub fn qft_label(n: usize, gate: usize) -> String {
    format!("t{n}|{gate}")
}

pub fn final_label(n: usize) -> String {
    format!("t{}", n + 1)
}

/// Runs the Hadamard and controlled-power stages, recording `t0..tn`.
///
/// Returns `2^{-n/2} Σ_x e^{-2πi xφ} |x⟩`.
pub fn prepare_kickback(cfg: &QpeConfig, record: &mut Trace) -> Result<StateVector> {
    let mut state = StateVector::from_basis(cfg.n, 0)?;
    for q in 0..cfg.n {
        state.apply_gate(GateOp::Hadamard(q))?;
    }
    record.push(kickback_label(0), state.probabilities())?;
    for j in 0..cfg.n {
        // reduce 2^j φ mod 1 before scaling to keep the angle small
        let turns = ((1u64 << j) as f64 * cfg.phi).fract();
        state.apply_gate(GateOp::Phase(j, -2.0 * PI * turns))?;
        record.push(kickback_label(j + 1), state.probabilities())?;
    }
    Ok(state)
}

/// The full circuit. The bit-reversal swaps are folded into the final slice;
/// they permute probabilities without changing the sorted vector.
pub fn run_qpe(cfg: &QpeConfig) -> Result<Trace> {
    let mut trace = Trace::new("qpe", cfg.n);
    let mut state = prepare_kickback(cfg, &mut trace)?;
    let gates = qft_core_gates(cfg.n);
    let (last, body) = gates.split_last().expect("n >= 1 gives at least one gate");
    for (i, &g) in body.iter().enumerate() {
        state.apply_gate(g)?;
        trace.push(qft_label(cfg.n, i + 1), state.probabilities())?;
    }
    state.apply_gate(*last)?;
    state.apply_all(&bit_reversal_swaps(cfg.n))?;
    trace.push(final_label(cfg.n), state.probabilities())?;
    Ok(trace)
}

/// Outcome distribution `p_y = sin²(2ⁿπδ) / (2^{2n} sin²(πδ))`, `δ = φ - y/2ⁿ`.
pub fn final_distribution(cfg: &QpeConfig) -> ProbVector {
    let size = 1usize << cfg.n;
    let scale = size as f64;
    let probs = (0..size)
        .map(|y| {
            let delta = cfg.phi - y as f64 / scale;
            let den = (PI * delta).sin();
            if den == 0.0 {
                1.0
            } else {
                let num = (scale * PI * delta).sin();
                (num / (scale * den)).powi(2)
            }
        })
        .collect();
    ProbVector::new(probs).expect("geometric sum is normalized")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Interference {
    Plus,
    Minus,
}

/// `|(1 ± e^{2πiα}) / √2|² = 1 ± cos(2πα)`
pub fn interference_value(alpha: f64, sign: Interference) -> f64 {
    let c = (2.0 * PI * alpha).cos();
    match sign {
        Interference::Plus => 1.0 + c,
        Interference::Minus => 1.0 - c,
    }
}

pub fn interference_inequality(alpha: f64, sign: Interference) -> bool {
    interference_value(alpha, sign) >= 1.0 - 1e-12
}

/// Range of `α ∈ [0, 1)` where the inequality is guaranteed: `[0, ¼] ∪ [¾, 1)`
/// for `+`, `[¼, ¾]` for `-`.
pub fn in_constructive_range(alpha: f64, sign: Interference) -> bool {
    match sign {
        Interference::Plus => alpha <= 0.25 || alpha >= 0.75,
        Interference::Minus => (0.25..=0.75).contains(&alpha),
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Smallest `r ≥ 1` with `a^r ≡ 1 (mod modulus)`.
pub fn multiplicative_order(a: u64, modulus: u64) -> Result<u64> {
    if modulus < 2 {
        return Err(Error::InvalidArgument(format!("modulus {modulus} < 2")));
    }
    if gcd(a % modulus, modulus) != 1 {
        return Err(Error::InvalidArgument(format!(
            "{a} is not coprime to {modulus}"
        )));
    }
    let a = a % modulus;
    let mut x = a;
    let mut r = 1;
    while x != 1 {
        x = ((x as u128 * a as u128) % modulus as u128) as u64;
        r += 1;
    }
    Ok(r)
}

/// Eigenphase `s/r` of `U|x⟩ = |ax mod modulus⟩`, where `r` is the order of `a`.
pub fn order_finding_phase(a: u64, modulus: u64, s: u64) -> Result<f64> {
    let r = multiplicative_order(a, modulus)?;
    if s >= r {
        return Err(Error::InvalidArgument(format!(
            "eigenphase index {s} must be below the order {r}"
        )));
    }
    Ok(s as f64 / r as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::majorder::{compare, greatest_element, least_element, verify_trace, DEFAULT_TOL};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    /// Direct summation of `2^{-n} Σ_x e^{-2πi x(φ - y/2ⁿ)}`.
    fn summed_distribution(n: usize, phi: f64) -> Vec<f64> {
        let size = 1usize << n;
        (0..size)
            .map(|y| {
                let amp: Complex64 = (0..size)
                    .map(|x| {
                        let delta = phi - y as f64 / size as f64;
                        Complex64::from_polar(1.0, -2.0 * PI * x as f64 * delta)
                    })
                    .sum();
                (amp / size as f64).norm_sqr()
            })
            .collect()
    }

    #[test]
    fn kickback_stage_is_uniform() {
        let cfg = QpeConfig::new(3, 0.2).unwrap();
        let mut t = Trace::new("qpe", 3);
        let s = prepare_kickback(&cfg, &mut t).unwrap();
        assert_eq!(t.len(), 4);
        let uniform = least_element(8).unwrap();
        for snap in t.snapshots() {
            for (a, b) in snap.probs.as_slice().iter().zip(uniform.as_slice()) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-15);
            }
        }
        // x·φ = 5 · 0.2 = 1
        assert_abs_diff_eq!(s.amplitudes()[5].re, 2f64.powf(-1.5), epsilon = 1e-14);
        assert_abs_diff_eq!(s.amplitudes()[5].im, 0.0, epsilon = 1e-14);
        for (x, a) in s.amplitudes().iter().enumerate() {
            let expected = Complex64::from_polar(2f64.powf(-1.5), -2.0 * PI * x as f64 * 0.2);
            assert_abs_diff_eq!((a - expected).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn zero_phase_kickback_is_real_uniform() {
        let cfg = QpeConfig::new(2, 0.0).unwrap();
        let s = prepare_kickback(&cfg, &mut Trace::new("qpe", 2)).unwrap();
        assert!(s
            .amplitudes()
            .iter()
            .all(|a| (a.re - 0.5).abs() < 1e-15 && a.im.abs() < 1e-15));
    }

    #[test]
    fn labels_follow_the_circuit() {
        let t = run_qpe(&QpeConfig::new(3, 0.2).unwrap()).unwrap();
        let labels: Vec<&str> = t.snapshots().iter().map(|s| s.label.as_str()).collect();
        assert_eq!(
            labels,
            ["t0", "t1", "t2", "t3", "t3|1", "t3|2", "t3|3", "t3|4", "t3|5", "t4"]
        );
        let t = run_qpe(&QpeConfig::new(1, 0.0).unwrap()).unwrap();
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn fig_four_scenario_majorizes() {
        let t = run_qpe(&QpeConfig::new(3, 0.2).unwrap()).unwrap();
        assert!(verify_trace(&t, DEFAULT_TOL).unwrap().holds());
    }

    #[test]
    fn dyadic_phase_gives_point_mass() {
        let t = run_qpe(&QpeConfig::new(3, 0.25).unwrap()).unwrap();
        let last = t.snapshots().last().unwrap().probs.as_slice();
        assert_abs_diff_eq!(last[2], 1.0, epsilon = 1e-12);

        let t = run_qpe(&QpeConfig::new(1, 0.0).unwrap()).unwrap();
        let last = t.snapshots().last().unwrap().probs.as_slice();
        assert_abs_diff_eq!(last[0], 1.0, epsilon = 1e-15);

        let p = final_distribution(&QpeConfig::new(4, 5.0 / 16.0).unwrap());
        assert_eq!(p.as_slice()[5], 1.0);
        let v = compare(&p, &greatest_element(16).unwrap(), DEFAULT_TOL).unwrap();
        assert!(v.relation == crate::majorder::Relation::Equal);
    }

    #[test]
    fn closed_form_matches_direct_sum() {
        let p = final_distribution(&QpeConfig::new(3, 0.2).unwrap());
        let oracle = summed_distribution(3, 0.2);
        for (a, b) in p.as_slice().iter().zip(&oracle) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-13);
        }
        // largest entry: y/8 = 0.25 is closest to 0.2
        assert_abs_diff_eq!(oracle[2], 0.577_521_018_069_861_1, epsilon = 1e-12);
        assert_abs_diff_eq!(p.total(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn final_slice_matches_closed_form() {
        for &(n, phi) in &[(2, 0.1), (3, 0.2), (4, 0.7), (5, 0.33)] {
            let cfg = QpeConfig::new(n, phi).unwrap();
            let t = run_qpe(&cfg).unwrap();
            let sim = t.snapshots().last().unwrap().probs.as_slice();
            for (a, b) in sim.iter().zip(final_distribution(&cfg).as_slice()) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn interference_examples() {
        assert_abs_diff_eq!(interference_value(0.0, Interference::Plus), 2.0);
        assert!(interference_inequality(0.0, Interference::Plus));
        assert_abs_diff_eq!(interference_value(0.5, Interference::Minus), 2.0);
        assert!(interference_inequality(0.5, Interference::Minus));
        assert_abs_diff_eq!(interference_value(0.25, Interference::Plus), 1.0, epsilon = 1e-15);
        assert!(interference_inequality(0.25, Interference::Plus));
        assert!(!interference_inequality(0.5, Interference::Plus));
    }

    #[test]
    fn interference_holds_on_stated_ranges() {
        for i in 0..1000 {
            let alpha = i as f64 / 1000.0;
            for sign in [Interference::Plus, Interference::Minus] {
                if in_constructive_range(alpha, sign) {
                    assert!(interference_inequality(alpha, sign), "{alpha} {sign:?}");
                }
            }
        }
    }

    #[test]
    fn order_finding_examples() {
        assert_eq!(multiplicative_order(7, 15).unwrap(), 4);
        assert_eq!(order_finding_phase(7, 15, 1).unwrap(), 0.25);
        assert_eq!(order_finding_phase(2, 5, 1).unwrap(), 0.25);
        assert_eq!(order_finding_phase(4, 15, 1).unwrap(), 0.5);
        assert!(order_finding_phase(3, 15, 1).is_err());
        assert!(order_finding_phase(2, 1, 0).is_err());
        assert!(order_finding_phase(7, 15, 4).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(QpeConfig::new(0, 0.1).is_err());
        assert!(QpeConfig::new(3, 1.0).is_err());
        assert!(QpeConfig::new(3, -0.1).is_err());
    }
}
