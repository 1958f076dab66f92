//! Multicolor floating-variable rounding.
//!
//! Given `a_1, ..., a_n` in Q^n (encoded vertices of H(n, q), q >= 3), walk
//! from the origin through Q̃^n along kernel directions of a shrinking linear
//! system until every block is a color vector. The resulting `x` in Q^n
//! satisfies `|a_i·x| < i` for every `i`.
//!
//! An entry is *fixed* once it reaches `-1/q` or `1 - 1/q` and never moves
//! again. At step `s` the system holds `a_i·x = 0` for `i <= n - s` and the
//! block-sum rows of every block that still has a floating entry. Step `s`
//! is complete (and `x_s` recorded) once at least `s` blocks are fully fixed.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::colorcode::{self, dot, high, in_hull, low, CodeVector};
use crate::error::{Error, Result};
use crate::linrat::{kernel_vector, RatMatrix, Rational};
use crate::report::{rational_str, rational_strs};

/// Fixed-entry mask and block counts `f_0..f_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub fixed: Vec<bool>,
    /// `counts[r]` = number of blocks with exactly `r` fixed entries.
    pub counts: Vec<usize>,
}

impl Classification {
    pub fn fully_fixed(&self) -> usize {
        *self.counts.last().unwrap_or(&0)
    }

    pub fn floating_columns(&self) -> Vec<usize> {
        self.fixed
            .iter()
            .enumerate()
            .filter(|(_, f)| !**f)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Mark every entry sitting on a boundary value as fixed.
///
/// A block with exactly `q - 1` fixed entries cannot occur inside Q̃ with
/// sum zero; seeing one is reported as an invariant violation.
pub fn classify(x: &CodeVector) -> Result<Classification> {
    let q = x.q();
    let (lo, hi) = (low(q), high(q));
    let fixed: Vec<bool> = x.entries().iter().map(|v| *v == lo || *v == hi).collect();
    let mut counts = vec![0; q + 1];
    for (j, block) in fixed.chunks(q).enumerate() {
        let r = block.iter().filter(|f| **f).count();
        if r == q - 1 {
            return Err(Error::Invariant(format!(
                "block {j} has exactly q-1 = {} fixed entries",
                q - 1
            )));
        }
        counts[r] += 1;
    }
    Ok(Classification { fixed, counts })
}

/// Homogeneous system over the floating columns for step `s`.
#[derive(Clone, Debug)]
pub struct StepSystem {
    pub matrix: RatMatrix,
    /// Global entry index of each matrix column.
    pub columns: Vec<usize>,
    pub inner_rows: usize,
    pub block_rows: usize,
}

/// Rows `a_i` restricted to floating entries for `i <= n - s`, then one
/// all-ones row per block that still has a floating entry.
pub fn build_system(a: &[CodeVector], fixed: &[bool], s: usize) -> Result<StepSystem> {
    let n = a.len();
    if s == 0 || s > n {
        return Err(Error::InvalidArgument(format!("step {s} outside 1..={n}")));
    }
    let q = a[0].q();
    if fixed.len() != n * q {
        return Err(Error::Dimension(format!(
            "mask of length {} for {n} blocks of size {q}",
            fixed.len()
        )));
    }
    let columns: Vec<usize> = (0..n * q).filter(|&e| !fixed[e]).collect();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for ai in &a[..n - s] {
        rows.push(columns.iter().map(|&e| ai.entries()[e].clone()).collect());
    }
    let inner_rows = rows.len();
    for j in 0..n {
        let span = j * q..(j + 1) * q;
        if fixed[span.clone()].iter().all(|f| *f) {
            continue;
        }
        rows.push(
            columns
                .iter()
                .map(|e| {
                    if span.contains(e) {
                        Rational::from_integer(1.into())
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
        );
    }
    let block_rows = rows.len() - inner_rows;
    let matrix = RatMatrix::from_rows(rows, columns.len())?;
    Ok(StepSystem {
        matrix,
        columns,
        inner_rows,
        block_rows,
    })
}

/// Largest `λ` keeping `x + λy` inside the box `[-1/q, 1 - 1/q]` on the
/// floating entries; at `λ*` at least one of them lands on a boundary.
pub fn max_step(x: &CodeVector, fixed: &[bool], y: &[Rational]) -> Result<Rational> {
    let q = x.q();
    let (lo, hi) = (low(q), high(q));
    let mut best: Option<Rational> = None;
    for (k, yk) in y.iter().enumerate() {
        if yk.is_zero() {
            continue;
        }
        if fixed[k] {
            return Err(Error::Invariant(format!("direction moves fixed entry {k}")));
        }
        let xk = &x.entries()[k];
        let bound = if yk.is_positive() { &hi } else { &lo };
        let cand = (bound - xk) / yk;
        if !cand.is_positive() {
            return Err(Error::Invariant(format!(
                "floating entry {k} = {xk} is not strictly inside the box"
            )));
        }
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    }
    best.ok_or(Error::DegenerateDirection)
}

/// One advance of the walk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub step: usize,
    /// |F_q| before the advance.
    pub fully_fixed: usize,
    #[serde(serialize_with = "rational_str")]
    pub lambda: Rational,
    /// Entries fixed by this advance.
    pub newly_fixed: usize,
}

/// Output of [`run`], with everything needed to re-check the guarantee.
#[derive(Clone, Debug, Serialize)]
pub struct FvCertificate {
    #[serde(skip)]
    pub x_final: CodeVector,
    /// `|a_i·x|` for `i = 1..=n`.
    #[serde(serialize_with = "rational_strs")]
    pub per_i_inner: Vec<Rational>,
    /// The strict bound `i` for each `|a_i·x|`.
    pub per_i_bound: Vec<usize>,
    pub trace: Vec<TraceStep>,
    /// `snapshots[s]` is `x_s`; `snapshots[0]` is the origin.
    #[serde(skip)]
    pub snapshots: Vec<CodeVector>,
}

impl FvCertificate {
    /// Re-check every claim of the certificate against the inputs.
    pub fn verify(&self, a: &[CodeVector]) -> Result<()> {
        let n = a.len();
        if !self.x_final.is_codeword() {
            return Err(Error::Invariant("final point is not in Q^n".into()));
        }
        if self.snapshots.len() != n + 1 || self.snapshots[n] != self.x_final {
            return Err(Error::Invariant("snapshot list malformed".into()));
        }
        for (idx, ai) in a.iter().enumerate() {
            let i = idx + 1;
            let v = dot(ai.entries(), self.x_final.entries()).abs();
            if v != self.per_i_inner[idx] || self.per_i_bound[idx] != i {
                return Err(Error::Invariant(format!(
                    "recorded value for a_{i} is wrong"
                )));
            }
            if v >= Rational::from_integer(i.into()) {
                return Err(Error::Invariant(format!(
                    "|a_{i}·x| = {v} is not below {i}"
                )));
            }
            if !dot(ai.entries(), self.snapshots[n - i].entries()).is_zero() {
                return Err(Error::Invariant(format!("a_{i}·x_{} != 0", n - i)));
            }
        }
        for (s, snap) in self.snapshots.iter().enumerate() {
            let fq = classify(snap)?.fully_fixed();
            if fq < s {
                return Err(Error::Invariant(format!("|F_q(x_{s})| = {fq} < {s}")));
            }
        }
        Ok(())
    }
}

fn validate_inputs(a: &[CodeVector]) -> Result<(usize, usize)> {
    let first = a
        .first()
        .ok_or_else(|| Error::InvalidArgument("need at least one vector".into()))?;
    let (n, q) = (a.len(), first.q());
    if q < 3 {
        return Err(Error::Unsupported(format!(
            "floating-variable rounding needs q >= 3, got q = {q}"
        )));
    }
    for (i, ai) in a.iter().enumerate() {
        if ai.n() != n || ai.q() != q {
            return Err(Error::Dimension(format!(
                "a_{} has shape {}x{}, expected {n}x{q}",
                i + 1,
                ai.n(),
                ai.q()
            )));
        }
        if !ai.is_codeword() {
            return Err(Error::InvalidArgument(format!("a_{} is not in Q^n", i + 1)));
        }
    }
    Ok((n, q))
}

/// Round the origin to a point `x` of Q^n with `|a_i·x| < i` for all `i`.
pub fn run(a: &[CodeVector]) -> Result<FvCertificate> {
    let (n, q) = validate_inputs(a)?;
    let mut x = CodeVector::zeros(n, q);
    let mut snapshots = vec![x.clone()];
    let mut trace = Vec::new();
    let mut s = 1;

    'walk: loop {
        let class = classify(&x)?;
        while class.fully_fixed() >= s {
            snapshots.push(x.clone());
            s += 1;
            if s > n {
                break 'walk;
            }
        }

        let system = build_system(a, &class.fixed, s)?;
        let cols = system.columns.len();
        let rows = system.inner_rows + system.block_rows;
        if cols < rows + 1 {
            return Err(Error::Invariant(format!(
                "step {s}: {cols} floating variables against {rows} equations"
            )));
        }
        let local = kernel_vector(&system.matrix)
            .ok_or_else(|| Error::Invariant(format!("step {s}: kernel is trivial")))?;
        let mut y = vec![Rational::zero(); n * q];
        for (v, &e) in local.into_iter().zip(&system.columns) {
            y[e] = v;
        }
        let lambda = max_step(&x, &class.fixed, &y)?;
        for (xe, ye) in x.entries_mut().iter_mut().zip(&y) {
            if !ye.is_zero() {
                *xe += &lambda * ye;
            }
        }

        let before = class.fixed.iter().filter(|f| **f).count();
        let after = classify(&x)?;
        let now = after.fixed.iter().filter(|f| **f).count();
        if now <= before || class.fixed.iter().zip(&after.fixed).any(|(b, a)| *b && !*a) {
            return Err(Error::Invariant(format!(
                "step {s}: advance fixed no new entry"
            )));
        }
        check_state(a, &x, s)?;
        trace.push(TraceStep {
            step: s,
            fully_fixed: class.fully_fixed(),
            lambda,
            newly_fixed: now - before,
        });
    }

    let x_final = snapshots[n].clone();
    if !x_final.is_codeword() {
        return Err(Error::Invariant("walk ended outside Q^n".into()));
    }
    let per_i_inner: Vec<Rational> = a
        .iter()
        .map(|ai| dot(ai.entries(), x_final.entries()).abs())
        .collect();
    let cert = FvCertificate {
        x_final,
        per_i_inner,
        per_i_bound: (1..=n).collect(),
        trace,
        snapshots,
    };
    cert.verify(a)?;
    Ok(cert)
}

/// Block sums zero, box membership and the live inner-product rows.
fn check_state(a: &[CodeVector], x: &CodeVector, s: usize) -> Result<()> {
    if let Some(j) = x.blocks().position(|b| !in_hull(b)) {
        return Err(Error::Invariant(format!("block {j} left Q̃ at step {s}")));
    }
    let n = a.len();
    for (i, ai) in a[..n - s].iter().enumerate() {
        if !dot(ai.entries(), x.entries()).is_zero() {
            return Err(Error::Invariant(format!(
                "a_{}·x drifted at step {s}",
                i + 1
            )));
        }
    }
    Ok(())
}

/// `|ā·x̄ - ā·ȳ|` for `ā, x̄` in Q and `ȳ` in Q̃. Never exceeds 1.
pub fn claim1_gap(a: &[Rational], x: &[Rational], y: &[Rational]) -> Result<Rational> {
    check_gap_domain(a, x, y)?;
    Ok((dot(a, x) - dot(a, y)).abs())
}

/// The only ways `claim1_gap` can reach 1: `ȳ` is itself a color vector, or
/// `ā = x̄ = c_i` while entry `i` of `ȳ` sits at `-1/q`.
pub fn claim1_equality_case(a: &[Rational], x: &[Rational], y: &[Rational]) -> Result<bool> {
    check_gap_domain(a, x, y)?;
    let q = a.len();
    if colorcode::Block::new(y.to_vec()).color().is_some() {
        return Ok(true);
    }
    let ca = colorcode::Block::new(a.to_vec()).color();
    let cx = colorcode::Block::new(x.to_vec()).color();
    Ok(match (ca, cx) {
        (Some(i), Some(j)) if i == j => y[i - 1] == low(q),
        _ => false,
    })
}

fn check_gap_domain(a: &[Rational], x: &[Rational], y: &[Rational]) -> Result<()> {
    if a.len() != x.len() || a.len() != y.len() {
        return Err(Error::Dimension("blocks of unequal size".into()));
    }
    let code = |b: &[Rational]| colorcode::Block::new(b.to_vec()).color().is_some();
    if !code(a) || !code(x) {
        return Err(Error::InvalidArgument(
            "ā and x̄ must be color vectors".into(),
        ));
    }
    if !in_hull(y) {
        return Err(Error::InvalidArgument("ȳ must lie in Q̃".into()));
    }
    Ok(())
}
