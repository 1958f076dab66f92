//! Simplex vector-coloring of H(n, q).
//!
//! Symbol `i` is sent to the color vector `c_i = e_i - (1/q)·1` in R^q and a
//! vertex to the concatenation of its symbols' color vectors. Inner products
//! of encodings recover Hamming distances:
//! `φ(v)·φ(w) = (1 - 1/q)·n - d(v, w)`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hamming::{hdist, Vertex};
use crate::linrat::{int, ratio, Rational};

/// A q-dimensional block of a code vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub entries: Vec<Rational>,
}

impl Block {
    pub fn new(entries: Vec<Rational>) -> Self {
        Block { entries }
    }

    pub fn zero(q: usize) -> Self {
        Block::new(vec![Rational::zero(); q])
    }

    pub fn q(&self) -> usize {
        self.entries.len()
    }

    pub fn dot(&self, other: &Block) -> Result<Rational> {
        block_dot(&self.entries, &other.entries)
    }

    pub fn in_hull(&self) -> bool {
        in_hull(&self.entries)
    }

    /// 1-based color `i` if this block equals `c_i`.
    pub fn color(&self) -> Option<usize> {
        block_color(&self.entries)
    }
}

/// `-1/q`, the low boundary value of an entry.
pub fn low(q: usize) -> Rational {
    ratio(-1, q as i64)
}

/// `1 - 1/q`, the high boundary value of an entry.
pub fn high(q: usize) -> Rational {
    ratio(q as i64 - 1, q as i64)
}

/// The color vector `c_i`: `1 - 1/q` at entry `i`, `-1/q` elsewhere.
pub fn color_vector(i: usize, q: usize) -> Result<Block> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!(
            "q must be at least 2, got {q}"
        )));
    }
    if i == 0 || i > q {
        return Err(Error::SymbolOutOfRange { symbol: i, q });
    }
    let mut entries = vec![low(q); q];
    entries[i - 1] = high(q);
    Ok(Block::new(entries))
}

pub(crate) fn block_dot(a: &[Rational], b: &[Rational]) -> Result<Rational> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!(
            "blocks of size {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(dot(a, b))
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Membership in Q̃ = conv{c_1, ..., c_q}: entry sum 0 and every entry at
/// least `-1/q`.
pub fn in_hull(block: &[Rational]) -> bool {
    let q = block.len();
    if q == 0 {
        return false;
    }
    let floor = low(q);
    block
        .iter()
        .fold(Rational::zero(), |acc, v| acc + v)
        .is_zero()
        && block.iter().all(|v| *v >= floor)
}

/// Coefficients `λ` with `λ_i >= 0`, `Σλ_i <= 1` and `Σ λ_i c_i = block`,
/// or `None` when the block is outside Q̃.
///
/// With `t = max(0, -q·min_j z_j)`, `λ_j = z_j + t/q`.
pub fn hull_coefficients(block: &[Rational]) -> Option<Vec<Rational>> {
    if !in_hull(block) {
        return None;
    }
    let q = int(block.len() as i64);
    let min = block.iter().min().cloned().unwrap_or_else(Rational::zero);
    let t = (-(&q * min)).max(Rational::zero());
    let shift = &t / &q;
    let lambda: Vec<Rational> = block.iter().map(|z| z + &shift).collect();
    debug_assert!(t <= Rational::one());
    Some(lambda)
}

/// `Σ λ_i c_i` for arbitrary coefficients.
pub fn combine(lambda: &[Rational]) -> Block {
    let q = lambda.len();
    let total: Rational = lambda.iter().fold(Rational::zero(), |acc, v| acc + v);
    let shift = total / int(q as i64);
    Block::new(lambda.iter().map(|l| l - &shift).collect())
}

fn block_color(block: &[Rational]) -> Option<usize> {
    let q = block.len();
    let hi = high(q);
    let lo = low(q);
    let mut color = None;
    for (j, v) in block.iter().enumerate() {
        if *v == hi {
            if color.is_some() {
                return None;
            }
            color = Some(j + 1);
        } else if *v != lo {
            return None;
        }
    }
    color
}

/// A vector of `n` blocks of `q` rationals, stored flat.
#[derive(Clone, PartialEq, Eq)]
pub struct CodeVector {
    n: usize,
    q: usize,
    entries: Vec<Rational>,
}

impl std::fmt::Debug for CodeVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let blocks: Vec<String> = self
            .blocks()
            .map(|b| {
                let s: Vec<String> = b.iter().map(|v| v.to_string()).collect();
                format!("({})", s.join(","))
            })
            .collect();
        write!(f, "[{}]", blocks.join(" "))
    }
}

impl CodeVector {
    pub fn zeros(n: usize, q: usize) -> Self {
        CodeVector {
            n,
            q,
            entries: vec![Rational::zero(); n * q],
        }
    }

    pub fn from_blocks(blocks: Vec<Block>) -> Result<Self> {
        let q = blocks.first().map_or(0, Block::q);
        if blocks.is_empty() || q == 0 {
            return Err(Error::InvalidArgument(
                "code vector needs n >= 1 blocks of size q >= 1".into(),
            ));
        }
        if blocks.iter().any(|b| b.q() != q) {
            return Err(Error::Dimension("blocks of unequal size".into()));
        }
        let n = blocks.len();
        let entries = blocks.into_iter().flat_map(|b| b.entries).collect();
        Ok(CodeVector { n, q, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [Rational] {
        &mut self.entries
    }

    pub fn block(&self, j: usize) -> &[Rational] {
        &self.entries[j * self.q..(j + 1) * self.q]
    }

    pub fn blocks(&self) -> impl Iterator<Item = &[Rational]> {
        self.entries.chunks(self.q)
    }

    /// Every block is a color vector (the vector lies in Q^n).
    pub fn is_codeword(&self) -> bool {
        self.blocks().all(|b| block_color(b).is_some())
    }

    /// Every block lies in Q̃ (the vector lies in Q̃^n).
    pub fn in_hull(&self) -> bool {
        self.blocks().all(in_hull)
    }

    fn check_shape(&self, other: &CodeVector) -> Result<()> {
        if self.n != other.n || self.q != other.q {
            return Err(Error::Dimension(format!(
                "code vectors of shape {}x{} and {}x{}",
                self.n, self.q, other.n, other.q
            )));
        }
        Ok(())
    }
}

/// φ: block `i` is `c_{v_i}`.
pub fn encode(v: &Vertex) -> CodeVector {
    let q = v.q();
    let (lo, hi) = (low(q), high(q));
    let mut entries = Vec::with_capacity(v.n() * q);
    for &s in v.symbols() {
        entries.extend((1..=q).map(|j| if j == s { hi.clone() } else { lo.clone() }));
    }
    CodeVector {
        n: v.n(),
        q,
        entries,
    }
}

/// φ⁻¹. Fails on the first block that is not a color vector.
pub fn decode(x: &CodeVector) -> Result<Vertex> {
    let symbols = x
        .blocks()
        .enumerate()
        .map(|(j, b)| block_color(b).ok_or(Error::NotACodeword { block: j }))
        .collect::<Result<Vec<_>>>()?;
    Vertex::new(symbols, x.q)
}

/// Exact inner product of two qn-dimensional vectors.
pub fn inner(a: &CodeVector, x: &CodeVector) -> Result<Rational> {
    a.check_shape(x)?;
    Ok(dot(&a.entries, &x.entries))
}

/// `φ(v)·φ(w) == (1 - 1/q)·n - d(v, w)`.
pub fn dist_identity_check(v: &Vertex, w: &Vertex) -> Result<bool> {
    let d = hdist(v, w)?;
    let lhs = inner(&encode(v), &encode(w))?;
    let rhs = high(v.q()) * int(v.n() as i64) - int(d as i64);
    Ok(lhs == rhs)
}
