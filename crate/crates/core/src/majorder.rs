//! The majorization order on probability vectors.
//!
//! `x ≺ y` ("x is majorized by y") holds when every prefix sum of the
//! descending-sorted `x` is bounded by the matching prefix sum of sorted `y`
//! and both vectors carry the same total mass. The uniform vector is the
//! least element of this order and a point mass is the greatest.
//!
//! A [`Trace`] records the probability vector of a register at successive
//! steps of an algorithm; [`verify_trace`] checks that each step is majorized
//! by the next.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Default absolute tolerance on prefix-sum comparisons.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Negative entries down to this magnitude are rounding noise and clamp to 0.
pub const NEGATIVE_CLAMP: f64 = 1e-12;

/// Allowed deviation of the total mass from 1.
pub const MASS_TOL: f64 = 1e-9;

/// A probability vector: nonnegative entries summing to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        for (index, v) in values.iter_mut().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if *v < 0.0 {
                if *v < -NEGATIVE_CLAMP {
                    return Err(Error::NegativeProbability { index, value: *v });
                }
                *v = 0.0;
            }
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > MASS_TOL {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self(values))
    }

    /// Normalizes nonnegative weights to unit mass.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !(sum.is_finite() && sum > 0.0) {
            return Err(Error::NotNormalized { sum });
        }
        Self::new(weights.into_iter().map(|w| w / sum).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn sorted_desc(&self) -> Vec<f64> {
        // entries are finite by construction
        sort_desc(&self.0).expect("finite entries")
    }

    /// Shannon entropy in nats.
    pub fn entropy(&self) -> f64 {
        -self
            .0
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * p.ln())
            .sum::<f64>()
    }
}

impl TryFrom<Vec<f64>> for ProbVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<ProbVector> for Vec<f64> {
    fn from(p: ProbVector) -> Self {
        p.0
    }
}

impl AsRef<[f64]> for ProbVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Sorts into non-increasing order. Rejects NaN.
pub fn sort_desc(v: &[f64]) -> Result<Vec<f64>> {
    if let Some(index) = v.iter().position(|x| x.is_nan()) {
        return Err(Error::NonFinite { index });
    }
    let mut out = v.to_vec();
    out.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    Ok(out)
}

pub fn prefix_sums(v: &[f64]) -> Vec<f64> {
    v.iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Equal,
    /// x ≺ y
    FirstPrecedes,
    /// y ≺ x
    SecondPrecedes,
    Incomparable,
}

impl Relation {
    /// True when the step respects the majorization arrow.
    pub fn is_forward(self) -> bool {
        matches!(self, Relation::Equal | Relation::FirstPrecedes)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Equal => "equal",
            Relation::FirstPrecedes => "precedes",
            Relation::SecondPrecedes => "succeeds",
            Relation::Incomparable => "incomparable",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MajorizationVerdict {
    pub relation: Relation,
    /// `prefix(sorted y)[k] - prefix(sorted x)[k]` for every k.
    pub prefix_margins: Vec<f64>,
}

impl MajorizationVerdict {
    /// Most negative margin over the first d-1 prefixes; negative means the
    /// `x ≺ y` condition is broken by that much.
    pub fn worst_margin(&self) -> f64 {
        let d = self.prefix_margins.len();
        self.prefix_margins[..d.saturating_sub(1)]
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Compares two probability vectors under majorization.
///
/// `a ≤ b + tol` counts as `≤`. The final prefix (total mass) is checked
/// separately against [`MASS_TOL`].
pub fn compare(x: &ProbVector, y: &ProbVector, tol: f64) -> Result<MajorizationVerdict> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    let (sx, sy) = (x.total(), y.total());
    if (sx - sy).abs() > MASS_TOL {
        return Err(Error::MassMismatch {
            left: sx,
            right: sy,
        });
    }
    let px = prefix_sums(&x.sorted_desc());
    let py = prefix_sums(&y.sorted_desc());
    let prefix_margins: Vec<f64> = px.iter().zip(&py).map(|(a, b)| b - a).collect();

    let d = prefix_margins.len();
    let inner = &prefix_margins[..d - 1];
    let first = inner.iter().all(|&m| m >= -tol);
    let second = inner.iter().all(|&m| m <= tol);
    let relation = match (first, second) {
        (true, true) => Relation::Equal,
        (true, false) => Relation::FirstPrecedes,
        (false, true) => Relation::SecondPrecedes,
        (false, false) => Relation::Incomparable,
    };
    Ok(MajorizationVerdict {
        relation,
        prefix_margins,
    })
}

/// The uniform distribution, bottom of the order.
pub fn least_element(d: usize) -> Result<ProbVector> {
    if d == 0 {
        return Err(Error::Empty);
    }
    ProbVector::new(vec![1.0 / d as f64; d])
}

/// The point mass `[1, 0, ..., 0]`, top of the order.
pub fn greatest_element(d: usize) -> Result<ProbVector> {
    if d == 0 {
        return Err(Error::Empty);
    }
    let mut v = vec![0.0; d];
    v[0] = 1.0;
    ProbVector::new(v)
}

/// Lorenz curve: `(k, sum of the k+1 largest entries)` for `k = 0..d`.
pub fn lorenz_points(v: &ProbVector) -> Vec<(usize, f64)> {
    prefix_sums(&v.sorted_desc()).into_iter().enumerate().collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub label: String,
    pub probs: ProbVector,
}

/// Labeled probability snapshots from one algorithm run, all of one dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTrace")]
pub struct Trace {
    #[serde(rename = "algorithm")]
    algorithm_name: String,
    #[serde(rename = "n")]
    n_qubits: usize,
    snapshots: Vec<Snapshot>,
}

#[derive(Deserialize)]
struct RawTrace {
    algorithm: String,
    n: usize,
    snapshots: Vec<Snapshot>,
}

impl TryFrom<RawTrace> for Trace {
    type Error = Error;

    fn try_from(raw: RawTrace) -> Result<Self> {
        let mut trace = Trace::new(raw.algorithm, raw.n);
        for s in raw.snapshots {
            trace.push(s.label, s.probs)?;
        }
        Ok(trace)
    }
}

impl Trace {
    pub fn new(algorithm_name: impl Into<String>, n_qubits: usize) -> Self {
        Self {
            algorithm_name: algorithm_name.into(),
            n_qubits,
            snapshots: Vec::new(),
        }
    }

    pub fn push(&mut self, label: impl Into<String>, probs: ProbVector) -> Result<()> {
        if let Some(first) = self.snapshots.first() {
            if first.probs.dim() != probs.dim() {
                return Err(Error::DimensionMismatch {
                    left: first.probs.dim(),
                    right: probs.dim(),
                });
            }
        }
        self.snapshots.push(Snapshot {
            label: label.into(),
            probs,
        });
        Ok(())
    }

    pub fn algorithm_name(&self) -> &str {
        &self.algorithm_name
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.snapshots.first().map(|s| s.probs.dim())
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.snapshots.iter().position(|s| s.label == label)
    }

    /// Copy holding snapshots `0..=last`.
    pub fn truncated(&self, last: usize) -> Trace {
        Trace {
            algorithm_name: self.algorithm_name.clone(),
            n_qubits: self.n_qubits,
            snapshots: self.snapshots[..=last.min(self.snapshots.len().saturating_sub(1))]
                .to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceReport {
    pub step_verdicts: Vec<MajorizationVerdict>,
    pub first_violation: Option<usize>,
    pub monotone_prefix_len: usize,
}

impl TraceReport {
    pub fn violations(&self) -> usize {
        self.step_verdicts
            .iter()
            .filter(|v| !v.relation.is_forward())
            .count()
    }

    pub fn holds(&self) -> bool {
        self.first_violation.is_none()
    }

    /// Most negative forward margin over all steps.
    pub fn worst_margin(&self) -> f64 {
        self.step_verdicts
            .iter()
            .map(MajorizationVerdict::worst_margin)
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Serialize)]
struct ReportJson<'a> {
    verdicts: Vec<&'a str>,
    first_violation: Option<usize>,
}

impl Serialize for TraceReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ReportJson {
            verdicts: self
                .step_verdicts
                .iter()
                .map(|v| v.relation.as_str())
                .collect(),
            first_violation: self.first_violation,
        }
        .serialize(s)
    }
}

/// Verdicts every consecutive pair of snapshots in `trace`.
pub fn verify_trace(trace: &Trace, tol: f64) -> Result<TraceReport> {
    let snaps = trace.snapshots();
    if snaps.len() < 2 {
        return Err(Error::TooFewSnapshots {
            needed: 2,
            got: snaps.len(),
        });
    }
    let step_verdicts = snaps
        .windows(2)
        .map(|w| compare(&w[0].probs, &w[1].probs, tol))
        .collect::<Result<Vec<_>>>()?;
    let first_violation = step_verdicts
        .iter()
        .position(|v| !v.relation.is_forward());
    Ok(TraceReport {
        monotone_prefix_len: first_violation.unwrap_or(step_verdicts.len()),
        step_verdicts,
        first_violation,
    })
}
