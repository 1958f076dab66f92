//! Hamming graphs H(n, q): vertices, distances, staggered balls and
//! brute-force burning numbers.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default limit on the number of vertices any exhaustive routine may touch.
pub const DEFAULT_VERTEX_CAP: u64 = 10_000_000;

/// A vertex of H(n, q): `n` symbols, each in `1..=q`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    symbols: Vec<usize>,
    q: usize,
}

impl Vertex {
    pub fn new(symbols: Vec<usize>, q: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidArgument(format!(
                "q must be at least 2, got {q}"
            )));
        }
        if symbols.is_empty() {
            return Err(Error::InvalidArgument(
                "a vertex needs n >= 1 symbols".into(),
            ));
        }
        if let Some(&bad) = symbols.iter().find(|&&s| s == 0 || s > q) {
            return Err(Error::SymbolOutOfRange { symbol: bad, q });
        }
        Ok(Vertex { symbols, q })
    }

    /// The vertex `(s, s, ..., s)`.
    pub fn constant(n: usize, q: usize, s: usize) -> Result<Self> {
        Vertex::new(vec![s; n], q)
    }

    /// Inverse of [`Vertex::index`].
    pub fn from_index(mut index: u64, n: usize, q: usize) -> Self {
        let mut symbols = vec![1; n];
        for slot in symbols.iter_mut().rev() {
            *slot = (index % q as u64) as usize + 1;
            index /= q as u64;
        }
        Vertex { symbols, q }
    }

    pub fn n(&self) -> usize {
        self.symbols.len()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    /// Mixed-radix position: symbol `s` at coordinate `i` contributes
    /// `(s - 1) * q^(n - 1 - i)`. Index order is lexicographic order.
    pub fn index(&self) -> u64 {
        self.symbols
            .iter()
            .fold(0u64, |acc, &s| acc * self.q as u64 + (s - 1) as u64)
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.symbols)
    }
}

impl Serialize for Vertex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.symbols.serialize(s)
    }
}

/// Hamming distance. Fails when the vertices live in different graphs.
pub fn hdist(u: &Vertex, v: &Vertex) -> Result<usize> {
    if u.n() != v.n() || u.q != v.q {
        return Err(Error::Dimension(format!(
            "H({},{}) vs H({},{})",
            u.n(),
            u.q,
            v.n(),
            v.q
        )));
    }
    Ok(raw_dist(&u.symbols, &v.symbols))
}

pub(crate) fn raw_dist(u: &[usize], v: &[usize]) -> usize {
    u.iter().zip(v).filter(|(a, b)| a != b).count()
}

/// |Γ_k(v)| = Σ_{j ≤ min(k, n)} C(n, j) (q - 1)^j.
pub fn ball_size(n: usize, q: usize, k: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    let mut pow = 1u128;
    for j in 0..=k.min(n) {
        total += binom * pow;
        binom = binom * (n - j) as u128 / (j + 1) as u128;
        pow *= (q - 1) as u128;
    }
    total
}

/// q^n, saturating.
pub fn vertex_count(n: usize, q: usize) -> u128 {
    (0..n).fold(1u128, |acc, _| acc.saturating_mul(q as u128))
}

fn check_cap(n: usize, q: usize, cap: u64) -> Result<usize> {
    let needed = vertex_count(n, q);
    if needed > cap as u128 {
        return Err(Error::Capacity { needed, cap });
    }
    Ok(needed as usize)
}

/// Calls `f` with the index of every vertex within distance `radius` of
/// `center`.
pub fn for_each_in_ball(center: &[usize], q: usize, radius: usize, mut f: impl FnMut(usize)) {
    let n = center.len();
    let weights: Vec<usize> = (0..n).map(|i| q.pow((n - 1 - i) as u32)).collect();
    let base: usize = center
        .iter()
        .zip(&weights)
        .map(|(&s, &w)| (s - 1) * w)
        .sum();
    ball_rec(center, q, &weights, 0, radius, base, &mut f);
}

fn ball_rec(
    center: &[usize],
    q: usize,
    weights: &[usize],
    coord: usize,
    budget: usize,
    index: usize,
    f: &mut impl FnMut(usize),
) {
    if coord == center.len() {
        f(index);
        return;
    }
    ball_rec(center, q, weights, coord + 1, budget, index, f);
    if budget == 0 {
        return;
    }
    let own = center[coord] - 1;
    let stripped = index - own * weights[coord];
    for s in (0..q).filter(|&s| s != own) {
        ball_rec(
            center,
            q,
            weights,
            coord + 1,
            budget - 1,
            stripped + s * weights[coord],
            f,
        );
    }
}

/// Ordered burning-sequence candidate. Entry `i` (0-based) of a sequence of
/// length `b` burns a ball of radius `b - 1 - i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BurnSequence {
    vertices: Vec<Vertex>,
}

impl BurnSequence {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self> {
        let first = vertices
            .first()
            .ok_or_else(|| Error::InvalidArgument("burning sequence must be nonempty".into()))?;
        let (n, q) = (first.n(), first.q());
        if let Some(v) = vertices.iter().find(|v| v.n() != n || v.q() != q) {
            return Err(Error::Dimension(format!(
                "sequence mixes H({n},{q}) with H({},{})",
                v.n(),
                v.q()
            )));
        }
        Ok(BurnSequence { vertices })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn n(&self) -> usize {
        self.vertices[0].n()
    }

    pub fn q(&self) -> usize {
        self.vertices[0].q()
    }

    /// Radius of the ball burnt from entry `i` (0-based).
    pub fn radius(&self, i: usize) -> usize {
        self.len() - 1 - i
    }

    /// Whether `w` lies in one of the staggered balls. No enumeration needed.
    pub fn covers(&self, w: &Vertex) -> Result<bool> {
        for (i, v) in self.vertices.iter().enumerate() {
            if hdist(v, w)? <= self.radius(i) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn coverage(&self, cap: u64) -> Result<Vec<bool>> {
        let total = check_cap(self.n(), self.q(), cap)?;
        let mut covered = vec![false; total];
        for (i, v) in self.vertices.iter().enumerate() {
            for_each_in_ball(v.symbols(), self.q(), self.radius(i), |idx| {
                covered[idx] = true
            });
        }
        Ok(covered)
    }
}

impl Serialize for BurnSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.vertices.serialize(s)
    }
}

/// Whether the staggered balls of `seq` cover every vertex of H(n, q).
pub fn burns(seq: &BurnSequence, cap: u64) -> Result<bool> {
    Ok(seq.coverage(cap)?.into_iter().all(|c| c))
}

/// Lexicographically smallest vertex left uncovered by `seq`, if any.
pub fn uncovered(seq: &BurnSequence, cap: u64) -> Result<Option<Vertex>> {
    Ok(seq
        .coverage(cap)?
        .iter()
        .position(|c| !c)
        .map(|idx| Vertex::from_index(idx as u64, seq.n(), seq.q())))
}

/// Result of an exhaustive burning-number search.
#[derive(Clone, Debug, Serialize)]
pub struct BurningNumber {
    pub n: usize,
    pub q: usize,
    pub value: usize,
    /// A burning sequence of length `value`.
    pub witness: BurnSequence,
}

/// Search parameters for [`burning_number`].
#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    /// Longest sequence length tried. `None` means `n + 1`.
    pub max_len: Option<usize>,
    pub vertex_cap: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_len: None,
            vertex_cap: DEFAULT_VERTEX_CAP,
        }
    }
}

/// Exact b(H(n, q)) by exhaustive search with v_1 fixed to (1, ..., 1).
///
/// Returns `Ok(None)` when no sequence up to `limits.max_len` burns the
/// graph (impossible once `max_len >= n + 1`).
pub fn burning_number(n: usize, q: usize, limits: SearchLimits) -> Result<Option<BurningNumber>> {
    validate_nq(n, q)?;
    check_cap(n, q, limits.vertex_cap)?;
    let max_len = limits.max_len.unwrap_or(n + 1);
    for len in 1..=max_len {
        if let Some(witness) = find_burning_sequence(n, q, len, limits.vertex_cap)? {
            return Ok(Some(BurningNumber {
                n,
                q,
                value: len,
                witness,
            }));
        }
    }
    Ok(None)
}

fn validate_nq(n: usize, q: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if q < 2 {
        return Err(Error::InvalidArgument(format!(
            "q must be at least 2, got {q}"
        )));
    }
    Ok(())
}

/// Some burning sequence of exactly `len` entries starting at (1, ..., 1),
/// or `None` if there is none. The second center is branched in parallel;
/// the witness returned is always the lexicographically first one found in
/// depth-first order, independent of the thread count.
pub fn find_burning_sequence(
    n: usize,
    q: usize,
    len: usize,
    cap: u64,
) -> Result<Option<BurnSequence>> {
    validate_nq(n, q)?;
    let total = check_cap(n, q, cap)?;
    if len == 0 {
        return Ok(None);
    }
    let search = Search::new(n, q, len, total);
    let mut root = SearchState::new(total, len);
    search.place(&mut root, 0, 0);
    let found = if len == 1 {
        (root.uncovered == 0).then(|| vec![0])
    } else if search.prunable(&root, 1) {
        None
    } else {
        (0..total).into_par_iter().find_map_first(|v2| {
            let mut state = root.clone();
            search.place(&mut state, 1, v2);
            search.dfs(&mut state, 2)
        })
    };
    found
        .map(|indices| {
            let vertices = indices
                .into_iter()
                .map(|i| Vertex::from_index(i as u64, n, q))
                .collect();
            BurnSequence::new(vertices)
        })
        .transpose()
}

struct Search {
    n: usize,
    q: usize,
    len: usize,
    total: usize,
    /// `tail_capacity[t]`: Σ ball sizes of rounds t..len.
    tail_capacity: Vec<u128>,
}

#[derive(Clone)]
struct SearchState {
    cover: Vec<u8>,
    uncovered: usize,
    centers: Vec<usize>,
}

impl SearchState {
    fn new(total: usize, len: usize) -> Self {
        SearchState {
            cover: vec![0; total],
            uncovered: total,
            centers: Vec::with_capacity(len),
        }
    }
}

impl Search {
    fn new(n: usize, q: usize, len: usize, total: usize) -> Self {
        let mut tail_capacity = vec![0u128; len + 1];
        for t in (0..len).rev() {
            tail_capacity[t] = tail_capacity[t + 1] + ball_size(n, q, len - 1 - t);
        }
        Search {
            n,
            q,
            len,
            total,
            tail_capacity,
        }
    }

    fn center(&self, idx: usize) -> Vertex {
        Vertex::from_index(idx as u64, self.n, self.q)
    }

    fn place(&self, state: &mut SearchState, round: usize, idx: usize) {
        let c = self.center(idx);
        let cover = &mut state.cover;
        let uncovered = &mut state.uncovered;
        for_each_in_ball(c.symbols(), self.q, self.len - 1 - round, |i| {
            if cover[i] == 0 {
                *uncovered -= 1;
            }
            cover[i] += 1;
        });
        state.centers.push(idx);
    }

    fn unplace(&self, state: &mut SearchState, round: usize) {
        let idx = state.centers.pop().expect("unplace without place");
        let c = self.center(idx);
        let cover = &mut state.cover;
        let uncovered = &mut state.uncovered;
        for_each_in_ball(c.symbols(), self.q, self.len - 1 - round, |i| {
            cover[i] -= 1;
            if cover[i] == 0 {
                *uncovered += 1;
            }
        });
    }

    /// Even granting every remaining round a fully fresh ball cannot cover
    /// what is left.
    fn prunable(&self, state: &SearchState, next_round: usize) -> bool {
        state.uncovered as u128 > self.tail_capacity[next_round]
    }

    fn dfs(&self, state: &mut SearchState, round: usize) -> Option<Vec<usize>> {
        if state.uncovered == 0 {
            // Remaining rounds can be filled with anything.
            let mut out = state.centers.clone();
            out.resize(self.len, 0);
            return Some(out);
        }
        if round == self.len || self.prunable(state, round) {
            return None;
        }
        for idx in 0..self.total {
            self.place(state, round, idx);
            let hit = self.dfs(state, round + 1);
            self.unplace(state, round);
            if hit.is_some() {
                return hit;
            }
        }
        None
    }
}
