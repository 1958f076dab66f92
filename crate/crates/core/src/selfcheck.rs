//! Deterministic invariant suites behind `hamburn selfcheck`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::adversary::{lower_bound, random_vertices, upper_bound};
use crate::colorcode::{
    self, color_vector, combine, dist_identity_check, encode, in_hull, Block, CodeVector,
};
use crate::error::Result;
use crate::experiments::{triangle_identity, Vertex0};
use crate::floatvar;
use crate::hamming::{vertex_count, Vertex};
use crate::linrat::{int, ratio, Rational};

const SEED: u64 = 0x5e1f_c4ec;

/// Deliberate faults for exercising the suites themselves.
#[derive(Clone, Copy, Debug, Default)]
pub struct Faults {
    /// Hand the inner-product table the color vector of the next symbol.
    pub corrupt_color_vector: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub checks: u64,
    pub failures: u64,
    pub passed: bool,
}

impl SuiteResult {
    fn new(name: &str, checks: u64, failures: u64) -> Self {
        SuiteResult {
            name: name.to_string(),
            checks,
            failures,
            passed: failures == 0,
        }
    }
}

pub fn run_all(faults: Faults) -> Result<Vec<SuiteResult>> {
    Ok(vec![
        inner_product_table(faults)?,
        distance_identity()?,
        hull_characterization()?,
        floatvar_oracle()?,
        bound_identities()?,
        triangle()?,
    ])
}

/// `c_i·c_j` is `1 - 1/q` on the diagonal and `-1/q` off it, q = 2..8.
pub fn inner_product_table(faults: Faults) -> Result<SuiteResult> {
    let lookup = |i: usize, q: usize| -> Result<Block> {
        if faults.corrupt_color_vector {
            color_vector(i % q + 1, q)
        } else {
            color_vector(i, q)
        }
    };
    let (mut checks, mut failures) = (0, 0);
    for q in 2..=8 {
        for i in 1..=q {
            let ci = lookup(i, q)?;
            checks += 1;
            if ci.entries.iter().fold(Rational::default(), |a, v| a + v) != int(0) {
                failures += 1;
            }
            for j in 1..=q {
                let want = if i == j {
                    ratio(q as i64 - 1, q as i64)
                } else {
                    ratio(-1, q as i64)
                };
                checks += 1;
                if ci.dot(&color_vector(j, q)?)? != want {
                    failures += 1;
                }
            }
        }
    }
    Ok(SuiteResult::new("inner-product-table", checks, failures))
}

/// `φ(v)·φ(w) = (1 - 1/q)n - d(v, w)`: exhaustive on small graphs plus random
/// pairs in H(20, 5).
pub fn distance_identity() -> Result<SuiteResult> {
    let (mut checks, mut failures) = (0, 0);
    for n in 1..=3 {
        for q in 2..=4 {
            let count = vertex_count(n, q) as u64;
            for a in 0..count {
                for b in 0..count {
                    checks += 1;
                    let ok = dist_identity_check(
                        &Vertex::from_index(a, n, q),
                        &Vertex::from_index(b, n, q),
                    )?;
                    failures += u64::from(!ok);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..1000 {
        let pair = random_vertices(&mut rng, 20, 5, 2);
        checks += 1;
        failures += u64::from(!dist_identity_check(&pair[0], &pair[1])?);
    }
    Ok(SuiteResult::new("distance-identity", checks, failures))
}

/// Random rational in `[0, 1]` with denominator `den`.
fn unit(rng: &mut impl Rng, den: i64) -> Rational {
    ratio(rng.random_range(0..=den), den)
}

/// Q̃ equals `{z : Σz = 0, z_j >= -1/q}` on sampled convex combinations and
/// sampled sum-zero blocks.
pub fn hull_characterization() -> Result<SuiteResult> {
    hull_samples(1000, SEED)
}

pub fn hull_samples(samples: usize, seed: u64) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut checks, mut failures) = (0, 0);
    for _ in 0..samples {
        let q = rng.random_range(2..=6);
        // λ_i >= 0 with Σλ_i <= 1
        let mut budget = unit(&mut rng, 12);
        let mut lambda = Vec::with_capacity(q);
        for _ in 0..q {
            let take = &budget * unit(&mut rng, 12);
            budget -= &take;
            lambda.push(take);
        }
        let z = combine(&lambda);
        checks += 1;
        let high_count = z
            .entries
            .iter()
            .filter(|v| **v == colorcode::high(q))
            .count();
        failures += u64::from(!in_hull(&z.entries) || high_count > 1);

        // sum-zero block with entries spread around the box
        let mut entries: Vec<Rational> = (0..q - 1)
            .map(|_| {
                ratio(
                    rng.random_range(-2 * q as i64..=2 * q as i64),
                    2 * q as i64 * q as i64,
                )
            })
            .collect();
        let last = -entries.iter().fold(Rational::default(), |a, v| a + v);
        entries.push(last);
        checks += 1;
        let by_test = in_hull(&entries);
        let by_coefficients = match colorcode::hull_coefficients(&entries) {
            Some(l) => {
                let total = l.iter().fold(Rational::default(), |a, v| a + v);
                l.iter().all(|v| *v >= int(0)) && total <= int(1) && combine(&l).entries == entries
            }
            None => false,
        };
        // outside Q̃ means some entry falls below -1/q, which no convex
        // combination of color vectors can produce
        let below = entries.iter().any(|v| *v < colorcode::low(q));
        failures += u64::from(by_test != by_coefficients || by_test == below);
    }
    Ok(SuiteResult::new("hull-characterization", checks, failures))
}

/// All `w` whose encoding satisfies `|a_i·φ(w)| < i` for every `i`.
pub fn feasible_codewords(a: &[CodeVector]) -> Result<Vec<Vertex>> {
    let n = a.len();
    let q = a[0].q();
    let mut out = Vec::new();
    for idx in 0..vertex_count(n, q) as u64 {
        let w = Vertex::from_index(idx, n, q);
        let x = encode(&w);
        let mut ok = true;
        for (i, ai) in a.iter().enumerate() {
            let v = colorcode::inner(ai, &x)?;
            if v >= int(i as i64 + 1) || v <= int(-(i as i64) - 1) {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(w);
        }
    }
    Ok(out)
}

/// Floating-variable output lies in the brute-force feasible set, n <= 3, q = 3.
pub fn floatvar_oracle() -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let (mut checks, mut failures) = (0, 0);
    for t in 0..60 {
        let n = 1 + t % 3;
        let a: Vec<CodeVector> = random_vertices(&mut rng, n, 3, n)
            .iter()
            .map(encode)
            .collect();
        let feasible = feasible_codewords(&a)?;
        let ok = match floatvar::run(&a) {
            Ok(cert) => feasible.contains(&colorcode::decode(&cert.x_final)?),
            Err(_) => false,
        };
        checks += 1;
        failures += u64::from(!ok);
    }
    Ok(SuiteResult::new("floatvar-oracle", checks, failures))
}

/// Closed-form bound relations.
pub fn bound_identities() -> Result<SuiteResult> {
    let (mut checks, mut failures) = (0, 0);
    for n in 1..=50 {
        checks += 1;
        failures += u64::from(upper_bound(n, 2)? != n.div_ceil(2) + 1);
        for q in 3..=8 {
            checks += 1;
            failures += u64::from(lower_bound(n, q)? > upper_bound(n, q)?);
        }
    }
    Ok(SuiteResult::new("bound-identities", checks, failures))
}

/// `d(v, w) + d(v, w') + d(v, w'') = 2n` over all of H(4, 3)².
pub fn triangle() -> Result<SuiteResult> {
    let (mut checks, mut failures) = (0, 0);
    for a in 0..81 {
        for b in 0..81 {
            checks += 1;
            let ok =
                triangle_identity(&Vertex0::from_index(a, 4, 3), &Vertex0::from_index(b, 4, 3))?;
            failures += u64::from(!ok);
        }
    }
    Ok(SuiteResult::new("triangle-identity", checks, failures))
}
