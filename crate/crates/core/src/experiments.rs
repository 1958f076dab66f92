//! Checks around the burning-number bounds: the q >= n proposition, the
//! alphabet-monotonicity claim, a two-color existence oracle, and the
//! search over the q = 3 shifted-distance problem.
//!
//! The shifted-distance problem works with 0-based symbols `{0, 1, 2}`.
//! [`Vertex0`] carries that convention; conversion to the 1-based
//! [`Vertex`] happens only at this module's boundary.

use std::collections::BTreeMap;

use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::adversary::trial_rng;
use crate::error::{Error, Result};
use crate::hamming::{burning_number, raw_dist, vertex_count, SearchLimits, Vertex};
use crate::linrat::{int, ratio, Rational};

/// Vertex with 0-based symbols in `0..q`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex0 {
    symbols: Vec<usize>,
    q: usize,
}

impl Vertex0 {
    pub fn new(symbols: Vec<usize>, q: usize) -> Result<Self> {
        if let Some(&s) = symbols.iter().find(|&&s| s >= q) {
            return Err(Error::SymbolOutOfRange { symbol: s + 1, q });
        }
        if symbols.is_empty() || q < 2 {
            return Err(Error::InvalidArgument("empty vertex or q < 2".into()));
        }
        Ok(Vertex0 { symbols, q })
    }

    pub fn from_index(mut index: usize, n: usize, q: usize) -> Self {
        let mut symbols = vec![0; n];
        for slot in symbols.iter_mut().rev() {
            *slot = index % q;
            index /= q;
        }
        Vertex0 { symbols, q }
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn n(&self) -> usize {
        self.symbols.len()
    }

    pub fn to_vertex(&self) -> Vertex {
        Vertex::new(self.symbols.iter().map(|s| s + 1).collect(), self.q)
            .expect("0-based symbols are in range")
    }

    pub fn from_vertex(v: &Vertex) -> Self {
        Vertex0 {
            symbols: v.symbols().iter().map(|s| s - 1).collect(),
            q: v.q(),
        }
    }
}

fn require_ternary(q: usize) -> Result<()> {
    if q != 3 {
        return Err(Error::Unsupported(format!(
            "shifts are defined for q = 3, got {q}"
        )));
    }
    Ok(())
}

/// `(x_1 + t, ..., x_n + t)` mod 3.
pub fn shift(v: &Vertex0, t: usize) -> Result<Vertex0> {
    require_ternary(v.q)?;
    Ok(Vertex0 {
        symbols: v.symbols.iter().map(|s| (s + t) % 3).collect(),
        q: 3,
    })
}

fn check_pair(u: &Vertex0, v: &Vertex0, k: usize) -> Result<()> {
    require_ternary(u.q)?;
    require_ternary(v.q)?;
    if u.n() != 3 * k + 1 || v.n() != 3 * k + 1 {
        return Err(Error::Dimension(format!(
            "vertices of length {} and {} but n = 3k+1 = {}",
            u.n(),
            v.n(),
            3 * k + 1
        )));
    }
    Ok(())
}

/// `f(u, v) = |(2/3)(3k + 1) - d(u, v)|`.
pub fn f_value(u: &Vertex0, v: &Vertex0, k: usize) -> Result<Rational> {
    check_pair(u, v, k)?;
    let d = raw_dist(&u.symbols, &v.symbols);
    Ok((ratio(2 * (3 * k as i64 + 1), 3) - int(d as i64)).abs())
}

/// `g(u, v) = max(f(u, v), f(u, v'), f(u, v''))`.
pub fn g_value(u: &Vertex0, v: &Vertex0, k: usize) -> Result<Rational> {
    check_pair(u, v, k)?;
    let mut best = f_value(u, v, k)?;
    for t in 1..3 {
        best = best.max(f_value(u, &shift(v, t)?, k)?);
    }
    Ok(best)
}

/// `d(v, w) + d(v, w') + d(v, w'') == 2n`.
pub fn triangle_identity(v: &Vertex0, w: &Vertex0) -> Result<bool> {
    require_ternary(v.q)?;
    if v.n() != w.n() {
        return Err(Error::Dimension("vertices of unequal length".into()));
    }
    let total: usize = (0..3)
        .map(|t| shift(w, t).map(|wt| raw_dist(&v.symbols, &wt.symbols)))
        .sum::<Result<usize>>()?;
    Ok(total == 2 * v.n())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Randomized,
}

impl std::str::FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(SearchMode::Exhaustive),
            "randomized" => Ok(SearchMode::Randomized),
            other => Err(Error::InvalidArgument(format!("unknown mode {other:?}"))),
        }
    }
}

/// Outcome of [`open_problem_search`]. Vertices are reported 1-based:
/// symbol `s` here stands for `s - 1` in `{0, 1, 2}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpenProblemReport {
    pub k: usize,
    pub n: usize,
    pub mode: SearchMode,
    pub seed: u64,
    /// Instances in the full (symmetry-reduced) sweep; `None` when randomized.
    pub total_instances: Option<u64>,
    pub instances_checked: u64,
    pub complete: bool,
    pub symmetry_reduction: Option<String>,
    /// Instances `(u_1, ..., u_n)` admitting no `w`, sorted.
    pub counterexamples: Vec<Vec<Vertex>>,
    /// Number of feasible `w` → number of instances with that many.
    pub witness_stats: BTreeMap<u64, u64>,
    /// Witnesses re-checked with exact `g` values.
    pub witnesses_reverified: u64,
    /// Witnesses for which some `w* ∈ {w, w', w''}` escapes the shifted
    /// sequence `v_1 = u_{2k+1}, v_{i+1} = u_i`.
    pub implication_holds: u64,
    pub implication_fails: u64,
}

/// Largest vertex count for which the `g` table is precomputed.
const G_TABLE_MAX: usize = 2187;

struct Problem {
    n: usize,
    k: usize,
    count: usize,
    digits: Vec<Vec<usize>>,
    /// `3·g(u, w)` for all pairs when small enough.
    g3: Option<Vec<u8>>,
}

impl Problem {
    fn new(k: usize) -> Self {
        let n = 3 * k + 1;
        let count = 3usize.pow(n as u32);
        let digits: Vec<Vec<usize>> = (0..count)
            .map(|i| Vertex0::from_index(i, n, 3).symbols)
            .collect();
        let mut p = Problem {
            n,
            k,
            count,
            digits,
            g3: None,
        };
        if count <= G_TABLE_MAX {
            let table = (0..count * count)
                .into_par_iter()
                .map(|idx| p.g3_direct(idx / count, idx % count) as u8)
                .collect();
            p.g3 = Some(table);
        }
        p
    }

    /// `3·g(u, w) = max_t |2n - 3·d(u, w + t)|`.
    fn g3_direct(&self, u: usize, w: usize) -> usize {
        let (du, dw) = (&self.digits[u], &self.digits[w]);
        let mut d = [0usize; 3];
        for (a, b) in du.iter().zip(dw) {
            // w + t agrees with u at this coordinate for exactly one t
            let t = (a + 3 - b) % 3;
            for (tt, dd) in d.iter_mut().enumerate() {
                if tt != t {
                    *dd += 1;
                }
            }
        }
        d.iter()
            .map(|&d| (2 * self.n).abs_diff(3 * d))
            .max()
            .unwrap()
    }

    fn g3(&self, u: usize, w: usize) -> usize {
        match &self.g3 {
            Some(t) => t[u * self.count + w] as usize,
            None => self.g3_direct(u, w),
        }
    }

    fn feasible(&self, us: &[usize], w: usize) -> bool {
        us.iter()
            .enumerate()
            .all(|(idx, &u)| self.g3(u, w) < 3 * (idx + 1))
    }

    fn shifted(&self, w: usize, t: usize) -> usize {
        self.digits[w]
            .iter()
            .fold(0, |acc, s| acc * 3 + (s + t) % 3)
    }

    /// Escape check for `v_1 = u_{2k+1}`, `v_{i+1} = u_i` (i <= 2k).
    fn implication(&self, us: &[usize], w: usize) -> bool {
        let len = 2 * self.k + 1;
        let vs: Vec<usize> = std::iter::once(us[2 * self.k])
            .chain(us[..2 * self.k].iter().copied())
            .collect();
        (0..3).any(|t| {
            let ws = self.shifted(w, t);
            // d(v_i, w*) >= 2k + 2 - i with i = idx + 1
            vs.iter()
                .enumerate()
                .all(|(idx, &v)| raw_dist(&self.digits[v], &self.digits[ws]) + idx >= len)
        })
    }

    fn reverify(&self, us: &[usize], w: usize) -> Result<bool> {
        let wv = Vertex0::from_index(w, self.n, 3);
        for (idx, &u) in us.iter().enumerate() {
            let uv = Vertex0::from_index(u, self.n, 3);
            if g_value(&uv, &wv, self.k)? >= int(idx as i64 + 1) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn solve(&self, us: &[usize]) -> Result<Outcome> {
        let mut count = 0u64;
        let mut first = None;
        for w in 0..self.count {
            if self.feasible(us, w) {
                count += 1;
                first.get_or_insert(w);
            }
        }
        let Some(w) = first else {
            return Ok(Outcome {
                feasible: 0,
                counterexample: Some(us.to_vec()),
                ..Outcome::default()
            });
        };
        if !self.reverify(us, w)? {
            return Err(Error::Invariant(format!(
                "witness {w} failed exact re-verification"
            )));
        }
        Ok(Outcome {
            feasible: count,
            counterexample: None,
            implication: Some(self.implication(us, w)),
        })
    }
}

#[derive(Default)]
struct Outcome {
    feasible: u64,
    counterexample: Option<Vec<usize>>,
    implication: Option<bool>,
}

#[derive(Default)]
struct Tally {
    checked: u64,
    counterexamples: Vec<Vec<usize>>,
    stats: BTreeMap<u64, u64>,
    reverified: u64,
    implication_holds: u64,
    implication_fails: u64,
}

impl Tally {
    fn add(mut self, o: Outcome) -> Self {
        self.checked += 1;
        *self.stats.entry(o.feasible).or_default() += 1;
        if let Some(c) = o.counterexample {
            self.counterexamples.push(c);
        }
        match o.implication {
            Some(true) => {
                self.reverified += 1;
                self.implication_holds += 1;
            }
            Some(false) => {
                self.reverified += 1;
                self.implication_fails += 1;
            }
            None => {}
        }
        self
    }

    fn merge(mut self, other: Tally) -> Self {
        self.checked += other.checked;
        self.counterexamples.extend(other.counterexamples);
        for (k, v) in other.stats {
            *self.stats.entry(k).or_default() += v;
        }
        self.reverified += other.reverified;
        self.implication_holds += other.implication_holds;
        self.implication_fails += other.implication_fails;
        self
    }
}

/// Search for instances `(u_1, ..., u_n)`, `n = 3k + 1`, admitting no `w`
/// with `g(u_i, w) < i` for all `i`.
///
/// Exhaustive mode (k = 1 only) fixes `u_1 = (0, 0, 0, 0)`: translating every
/// vertex by the same element of Z_3^n preserves distances and commutes
/// with shifts. `budget` caps the number of instances; in exhaustive mode a
/// cap below the full count yields a partial, lexicographically-first sweep.
pub fn open_problem_search(
    k: usize,
    mode: SearchMode,
    budget: Option<u64>,
    seed: u64,
    vertex_cap: u64,
) -> Result<OpenProblemReport> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let n = 3 * k + 1;
    let needed = vertex_count(n, 3);
    if needed > vertex_cap as u128 {
        return Err(Error::Capacity {
            needed,
            cap: vertex_cap,
        });
    }
    let (total, checked, symmetry) = match mode {
        SearchMode::Exhaustive => {
            if k >= 2 {
                return Err(Error::Capacity {
                    needed: vertex_count(n, 3).saturating_pow(n as u32 - 1),
                    cap: vertex_cap,
                });
            }
            let total = (needed as u64).pow(n as u32 - 1);
            let checked = budget.map_or(total, |b| b.min(total));
            (
                Some(total),
                checked,
                Some("u_1 fixed to the all-zero vertex".to_string()),
            )
        }
        SearchMode::Randomized => (None, budget.unwrap_or(10_000), None),
    };

    let problem = Problem::new(k);
    let count = problem.count;
    let tally = (0..checked)
        .into_par_iter()
        .map(|t| {
            let us: Vec<usize> = match mode {
                SearchMode::Exhaustive => {
                    let mut rest = t as usize;
                    let mut tail = vec![0; n - 1];
                    for slot in tail.iter_mut().rev() {
                        *slot = rest % count;
                        rest /= count;
                    }
                    std::iter::once(0).chain(tail).collect()
                }
                SearchMode::Randomized => {
                    use rand::Rng;
                    let mut rng = trial_rng(seed, t);
                    (0..n).map(|_| rng.random_range(0..count)).collect()
                }
            };
            problem.solve(&us)
        })
        .try_fold(Tally::default, |acc, o| o.map(|o| acc.add(o)))
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;

    let mut counterexamples: Vec<Vec<Vertex>> = tally
        .counterexamples
        .iter()
        .map(|us| {
            us.iter()
                .map(|&u| Vertex0::from_index(u, n, 3).to_vertex())
                .collect()
        })
        .collect();
    counterexamples.sort();
    Ok(OpenProblemReport {
        k,
        n,
        mode,
        seed,
        total_instances: total,
        instances_checked: tally.checked,
        complete: total.is_none_or(|t| t == tally.checked),
        symmetry_reduction: symmetry,
        counterexamples,
        witness_stats: tally.stats,
        witnesses_reverified: tally.reverified,
        implication_holds: tally.implication_holds,
        implication_fails: tally.implication_fails,
    })
}

/// Largest `n` accepted by [`bs_existence`].
pub const BS_MAX_N: usize = 20;

/// Some `x ∈ {-1, 1}^n` with `|a_i·x| < 2i` for all `i`, found by
/// enumeration in order of the mask whose set bits mark `-1` entries.
pub fn bs_existence(a: &[Vec<i8>]) -> Result<Option<Vec<i8>>> {
    let n = a.len();
    if n > BS_MAX_N {
        return Err(Error::Capacity {
            needed: 1u128 << n,
            cap: 1u64 << BS_MAX_N,
        });
    }
    if a.iter().any(|ai| ai.len() != n) {
        return Err(Error::Dimension(
            "expected n sign vectors of length n".into(),
        ));
    }
    if a.iter().flatten().any(|&e| e != 1 && e != -1) {
        return Err(Error::InvalidArgument("entries must be -1 or +1".into()));
    }
    let rows: Vec<(i64, u32)> = a
        .iter()
        .map(|ai| {
            let neg = ai
                .iter()
                .enumerate()
                .filter(|(_, e)| **e < 0)
                .fold(0u32, |m, (j, _)| m | 1 << j);
            (n as i64, neg)
        })
        .collect();
    for mask in 0u32..(1u32 << n) {
        let ok = rows.iter().enumerate().all(|(idx, &(n, neg))| {
            // a·x = n - 2·(number of coordinates where signs differ)
            let dot = n - 2 * (neg ^ mask).count_ones() as i64;
            dot.abs() < 2 * (idx as i64 + 1)
        });
        if ok {
            let x = (0..n)
                .map(|j| if mask >> j & 1 == 1 { -1 } else { 1 })
                .collect();
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Cube vertex as a sign vector: symbol 1 → +1, symbol 2 → -1.
pub fn sign_vector(v: &Vertex) -> Result<Vec<i8>> {
    if v.q() != 2 {
        return Err(Error::Unsupported("sign vectors need q = 2".into()));
    }
    Ok(v.symbols()
        .iter()
        .map(|&s| if s == 1 { 1 } else { -1 })
        .collect())
}

/// Claim check `b(n, q-1) >= s ⇒ b(n, q) >= s + 1`, applied with the
/// largest admissible `s = min(b(n, q-1), n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotonicityReport {
    pub n: usize,
    pub q: usize,
    pub b_smaller: usize,
    pub b: usize,
    pub s: usize,
    pub holds: bool,
}

pub fn monotonicity_check(n: usize, q: usize, vertex_cap: u64) -> Result<MonotonicityReport> {
    if q < 3 {
        return Err(Error::Unsupported(format!(
            "the claim needs q >= 3, got {q}"
        )));
    }
    let limits = SearchLimits {
        max_len: None,
        vertex_cap,
    };
    let solve = |q| {
        burning_number(n, q, limits)?
            .map(|b| b.value)
            .ok_or_else(|| {
                Error::Invariant(format!("no burning sequence of length n+1 in H({n},{q})"))
            })
    };
    let b_smaller = solve(q - 1)?;
    let b = solve(q)?;
    let s = b_smaller.min(n);
    Ok(MonotonicityReport {
        n,
        q,
        b_smaller,
        b,
        s,
        holds: b > s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v0(s: &[usize]) -> Vertex0 {
        Vertex0::new(s.to_vec(), 3).unwrap()
    }

    #[test]
    fn shifts() {
        assert_eq!(shift(&v0(&[0, 1, 2]), 1).unwrap(), v0(&[1, 2, 0]));
        let v = v0(&[2, 0, 0, 1]);
        assert_eq!(shift(&v, 0).unwrap(), v);
        assert_eq!(shift(&shift(&v, 1).unwrap(), 2).unwrap(), v);
        let q4 = Vertex0::new(vec![0, 3], 4).unwrap();
        assert!(matches!(shift(&q4, 1), Err(Error::Unsupported(_))));
    }

    #[test]
    fn f_values() {
        let u = v0(&[0, 0, 0, 0]);
        assert_eq!(f_value(&u, &v0(&[1, 1, 1, 0]), 1).unwrap(), ratio(1, 3));
        assert_eq!(f_value(&u, &u, 1).unwrap(), ratio(8, 3));
        assert_eq!(f_value(&u, &v0(&[1, 1, 0, 0]), 1).unwrap(), ratio(2, 3));
        assert!(matches!(
            f_value(&u, &v0(&[0, 0, 0]), 1),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn g_of_equal_vertices() {
        // d = 0, and the two shifts are at distance 4 each: f = 8/3, 4/3, 4/3
        let u = v0(&[0, 1, 2, 0]);
        assert_eq!(g_value(&u, &u, 1).unwrap(), ratio(8, 3));
    }

    #[test]
    fn g_is_shift_invariant() {
        let u = v0(&[0, 1, 2, 2]);
        for idx in 0..81 {
            let v = Vertex0::from_index(idx, 4, 3);
            let g = g_value(&u, &v, 1).unwrap();
            for t in 1..3 {
                assert_eq!(g_value(&u, &shift(&v, t).unwrap(), 1).unwrap(), g);
            }
        }
    }

    #[test]
    fn triangle_identity_exhaustive_small() {
        for a in 0..27 {
            for b in 0..27 {
                let (v, w) = (Vertex0::from_index(a, 3, 3), Vertex0::from_index(b, 3, 3));
                assert!(triangle_identity(&v, &w).unwrap());
            }
        }
    }

    #[test]
    fn table_agrees_with_exact_g() {
        let p = Problem::new(1);
        for u in (0..81).step_by(7) {
            for w in 0..81 {
                let g = g_value(
                    &Vertex0::from_index(u, 4, 3),
                    &Vertex0::from_index(w, 4, 3),
                    1,
                )
                .unwrap();
                assert_eq!(int(p.g3(u, w) as i64), g * int(3));
            }
        }
    }

    #[test]
    fn exhaustive_requires_k1() {
        assert!(matches!(
            open_problem_search(2, SearchMode::Exhaustive, None, 0, 10_000_000),
            Err(Error::Capacity { .. })
        ));
        assert!(open_problem_search(0, SearchMode::Randomized, None, 0, 10_000_000).is_err());
    }

    #[test]
    fn partial_exhaustive_sweep() {
        let r = open_problem_search(1, SearchMode::Exhaustive, Some(500), 0, 10_000_000).unwrap();
        assert_eq!(r.instances_checked, 500);
        assert_eq!(r.total_instances, Some(81u64.pow(3)));
        assert!(!r.complete);
        let solved: u64 = r
            .witness_stats
            .iter()
            .filter(|(c, _)| **c > 0)
            .map(|(_, n)| n)
            .sum();
        assert_eq!(solved, r.witnesses_reverified);
        assert_eq!(solved + r.counterexamples.len() as u64, 500);
    }

    #[test]
    fn randomized_is_deterministic() {
        let a = open_problem_search(1, SearchMode::Randomized, Some(300), 9, 10_000_000).unwrap();
        let b = open_problem_search(1, SearchMode::Randomized, Some(300), 9, 10_000_000).unwrap();
        assert_eq!(a, b);
        assert!(a.complete);
    }

    #[test]
    fn bs_trivial_instance() {
        let x = bs_existence(&[vec![1]]).unwrap().unwrap();
        assert_eq!(x.len(), 1);
        assert!(bs_existence(&[vec![2]]).is_err());
        assert!(bs_existence(&vec![vec![1; 21]; 21]).is_err());
    }

    #[test]
    fn sign_vector_distance_identity() {
        for n in 1..=4 {
            let count = 1u64 << n;
            for a in 0..count {
                for b in 0..count {
                    let v = Vertex::from_index(a, n, 2);
                    let w = Vertex::from_index(b, n, 2);
                    let (sv, sw) = (sign_vector(&v).unwrap(), sign_vector(&w).unwrap());
                    let dot: i64 = sv
                        .iter()
                        .zip(&sw)
                        .map(|(x, y)| (*x as i64) * (*y as i64))
                        .sum();
                    let d = crate::hamming::hdist(&v, &w).unwrap() as i64;
                    assert_eq!(dot, n as i64 - 2 * d);
                }
            }
        }
    }

    #[test]
    fn monotonicity_examples() {
        let r = monotonicity_check(3, 3, 10_000_000).unwrap();
        assert_eq!((r.b_smaller, r.b, r.s), (3, 4, 3));
        assert!(r.holds);
        let r = monotonicity_check(2, 3, 10_000_000).unwrap();
        assert_eq!((r.b_smaller, r.b), (2, 3));
        assert!(r.holds);
        let r = monotonicity_check(3, 4, 10_000_000).unwrap();
        assert_eq!((r.b_smaller, r.b, r.s), (4, 4, 3));
        assert!(r.holds);
    }

    #[test]
    fn vertex0_round_trip() {
        let v = Vertex::new(vec![3, 1, 2], 3).unwrap();
        let v0 = Vertex0::from_vertex(&v);
        assert_eq!(v0.symbols(), &[2, 0, 1]);
        assert_eq!(v0.to_vertex(), v);
    }
}
