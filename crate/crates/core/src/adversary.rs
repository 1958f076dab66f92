//! Lower-bound machinery: for any `m = ⌊(1 - 1/q)n⌋` vertices build an evader
//! `w` with `d(v_i, w) >= m + 1 - i`, so no sequence of length `m` burns
//! H(n, q).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::colorcode::{decode, encode, high, CodeVector};
use crate::error::{Error, Result};
use crate::floatvar::{self, TraceStep};
use crate::hamming::{hdist, BurnSequence, Vertex};
use crate::linrat::int;

/// `⌊(q - 1)n / q⌋`, the number of vertices an adversary must dodge.
pub fn evader_length(n: usize, q: usize) -> usize {
    (q - 1) * n / q
}

/// `⌊(1 - 1/q)n⌋ + 1`.
pub fn lower_bound(n: usize, q: usize) -> Result<usize> {
    if q < 3 {
        return Err(Error::Unsupported(format!(
            "lower bound needs q >= 3, got {q}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(evader_length(n, q) + 1)
}

/// `⌊(1 - 1/q)n + (q + 1)/2⌋ = ⌊(2(q - 1)n + q(q + 1)) / 2q⌋`.
pub fn upper_bound(n: usize, q: usize) -> Result<usize> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!(
            "q must be at least 2, got {q}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok((2 * (q - 1) * n + q * (q + 1)) / (2 * q))
}

/// `(1,...,1), (2,...,2), ..., (q,...,q)` followed by `(1,...,1)` up to
/// length `upper_bound(n, q)`.
pub fn canonical_sequence(n: usize, q: usize) -> Result<BurnSequence> {
    let len = upper_bound(n, q)?;
    let vertices = (1..=len)
        .map(|i| Vertex::constant(n, q, if i <= q { i } else { 1 }))
        .collect::<Result<Vec<_>>>()?;
    BurnSequence::new(vertices)
}

/// `n = qk + r` with `0 <= r < q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FloorCase {
    pub k: usize,
    pub r: usize,
}

impl FloorCase {
    pub fn of(n: usize, q: usize) -> Self {
        FloorCase { k: n / q, r: n % q }
    }

    /// Smallest integer `d` with `d > (1 - 1/q)n - i`, written per case:
    /// `(q-1)k - i + 1` when `r = 0`, `(q-1)k + r - i` otherwise.
    /// Negative values mean the requirement is vacuous.
    pub fn required(&self, q: usize, i: usize) -> i64 {
        let base = ((q - 1) * self.k) as i64;
        let i = i as i64;
        if self.r == 0 {
            base - i + 1
        } else {
            base + self.r as i64 - i
        }
    }
}

/// Evader `w` with the exact data proving `d(v_i, w) >= m + 1 - i`.
#[derive(Clone, Debug, Serialize)]
pub struct EvaderCertificate {
    pub w: Vertex,
    pub n: usize,
    pub q: usize,
    pub m: usize,
    /// The caller's vertices, before padding.
    pub vertices: Vec<Vertex>,
    pub distances: Vec<usize>,
    pub required: Vec<usize>,
    pub floor_case: FloorCase,
    pub trace: Vec<TraceStep>,
}

impl EvaderCertificate {
    /// `min_i (d(v_i, w) - (m + 1 - i))`, or `None` for an empty list.
    pub fn slack(&self) -> Option<i64> {
        self.distances
            .iter()
            .zip(&self.required)
            .map(|(&d, &r)| d as i64 - r as i64)
            .min()
    }

    pub fn holds(&self) -> bool {
        self.distances
            .iter()
            .zip(&self.required)
            .all(|(d, r)| d >= r)
    }

    /// `w` escapes every staggered ball `Γ_{m-i}(v_i)`.
    pub fn escapes(&self) -> Result<bool> {
        if self.vertices.is_empty() {
            return Ok(true);
        }
        // The burning sequence has length m; pad so radii line up.
        let mut seq = self.vertices.clone();
        seq.resize(self.m, self.w.clone());
        let seq = BurnSequence::new(seq)?;
        for (i, v) in self.vertices.iter().enumerate() {
            if hdist(v, &self.w)? <= seq.radius(i) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Pad `vs` to `n` vertices with `pad`, round with the floating-variable
/// walk and decode the evader.
pub fn evade_with_pad(
    vs: &[Vertex],
    n: usize,
    q: usize,
    pad: &[Vertex],
) -> Result<EvaderCertificate> {
    if q < 3 {
        return Err(Error::Unsupported(format!(
            "evader construction needs q >= 3, got {q}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let m = evader_length(n, q);
    if vs.len() > m {
        return Err(Error::InvalidArgument(format!(
            "{} vertices given but only m = {m} can be evaded in H({n},{q})",
            vs.len()
        )));
    }
    for v in vs.iter().chain(pad) {
        if v.n() != n || v.q() != q {
            return Err(Error::Dimension(format!(
                "vertex {v:?} is not in H({n},{q})"
            )));
        }
    }
    if vs.len() + pad.len() < n {
        return Err(Error::InvalidArgument("padding too short".into()));
    }
    let a: Vec<CodeVector> = vs.iter().chain(pad).take(n).map(encode).collect();
    let fv = floatvar::run(&a)?;
    let w = decode(&fv.x_final)?;

    let floor_case = FloorCase::of(n, q);
    let target = high(q) * int(n as i64);
    let mut distances = Vec::with_capacity(vs.len());
    let mut required = Vec::with_capacity(vs.len());
    for (idx, v) in vs.iter().enumerate() {
        let i = idx + 1;
        let d = hdist(v, &w)?;
        // |(1 - 1/q)n - d| < i, hence d > (1 - 1/q)n - i
        if !(int(d as i64) > &target - int(i as i64)) {
            return Err(Error::Invariant(format!(
                "d(v_{i}, w) = {d} does not exceed (1-1/q)n - {i}"
            )));
        }
        let by_case = floor_case.required(q, i);
        let req = (m + 1 - i) as i64;
        if by_case != req {
            return Err(Error::Invariant(format!(
                "floor case gives {by_case} but m + 1 - i = {req}"
            )));
        }
        if (d as i64) < req {
            return Err(Error::Invariant(format!("d(v_{i}, w) = {d} < {req}")));
        }
        distances.push(d);
        required.push(req as usize);
    }
    Ok(EvaderCertificate {
        w,
        n,
        q,
        m,
        vertices: vs.to_vec(),
        distances,
        required,
        floor_case,
        trace: fv.trace,
    })
}

/// [`evade_with_pad`] with the pad fixed to copies of `(1, ..., 1)`.
pub fn evade(vs: &[Vertex], n: usize, q: usize) -> Result<EvaderCertificate> {
    if n == 0 || q < 2 {
        return Err(Error::InvalidArgument(format!(
            "H({n},{q}) is not a valid graph"
        )));
    }
    let ones = Vertex::constant(n, q, 1)?;
    let pad = vec![ones; n.saturating_sub(vs.len())];
    evade_with_pad(vs, n, q, &pad)
}

/// `len` uniformly random vertices of H(n, q).
pub fn random_vertices(rng: &mut impl Rng, n: usize, q: usize, len: usize) -> Vec<Vertex> {
    (0..len)
        .map(|_| {
            let symbols = (0..n).map(|_| rng.random_range(1..=q)).collect();
            Vertex::new(symbols, q).expect("random symbols are in range")
        })
        .collect()
}

/// Per-trial generator: ChaCha8 keyed by `seed`, stream `trial`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub n: usize,
    pub q: usize,
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    pub passes: usize,
    pub failures: usize,
    /// Smallest `d(v_i, w) - (m + 1 - i)` seen over all trials.
    pub worst_slack: Option<i64>,
}

/// Run [`evade`] on `trials` random m-vertex sequences and confirm each
/// evader escapes the staggered balls.
pub fn lower_bound_witnessed(
    n: usize,
    q: usize,
    trials: usize,
    seed: u64,
) -> Result<WitnessReport> {
    lower_bound(n, q)?;
    let m = evader_length(n, q);
    let outcomes: Vec<Result<Option<i64>>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let vs = random_vertices(&mut rng, n, q, m);
            let cert = match evade(&vs, n, q) {
                Ok(c) => c,
                Err(Error::Invariant(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            Ok((cert.holds() && cert.escapes()?).then(|| cert.slack().unwrap_or(0)))
        })
        .collect();
    let mut passes = 0;
    let mut failures = 0;
    let mut worst_slack: Option<i64> = None;
    for o in outcomes {
        match o? {
            Some(slack) => {
                passes += 1;
                if m > 0 {
                    worst_slack = Some(worst_slack.map_or(slack, |w| w.min(slack)));
                }
            }
            None => failures += 1,
        }
    }
    Ok(WitnessReport {
        n,
        q,
        m,
        trials,
        seed,
        passes,
        failures,
        worst_slack,
    })
}
