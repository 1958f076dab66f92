use hamburn_core::adversary::{evade, evade_with_pad, evader_length, random_vertices, trial_rng};
use hamburn_core::colorcode::{combine, encode, hull_coefficients, in_hull, low};
use hamburn_core::floatvar::{self, classify};
use hamburn_core::hamming::{burning_number, burns, hdist, BurnSequence, SearchLimits, Vertex};
use hamburn_core::linrat::{int, kernel_vector, ratio, rref, rref_rational, RatMatrix, Rational};
use hamburn_core::{decode, CodeVector};
use proptest::prelude::*;

fn small_matrix() -> impl Strategy<Value = RatMatrix> {
    (0usize..5, 1usize..6).prop_flat_map(|(r, c)| {
        prop::collection::vec((-4i64..=4, 1i64..=3), r * c).prop_map(move |cells| {
            let rows = cells
                .chunks(c.max(1))
                .take(r)
                .map(|row| row.iter().map(|&(p, q)| ratio(p, q)).collect())
                .collect();
            RatMatrix::from_rows(rows, c).unwrap()
        })
    })
}

fn vertex(n: usize, q: usize) -> impl Strategy<Value = Vertex> {
    prop::collection::vec(1..=q, n).prop_map(move |s| Vertex::new(s, q).unwrap())
}

proptest! {
    #[test]
    fn kernel_vector_is_in_the_kernel(m in small_matrix()) {
        let (_, pivots) = rref(&m);
        match kernel_vector(&m) {
            Some(y) => {
                prop_assert!(m.cols() > pivots.len());
                prop_assert!(y.iter().any(|v| *v != int(0)));
                prop_assert!(m.mul_vec(&y).unwrap().iter().all(|v| *v == int(0)));
                prop_assert_eq!(kernel_vector(&m), Some(y));
            }
            None => prop_assert_eq!(m.cols(), pivots.len()),
        }
    }

    #[test]
    fn rref_is_idempotent_and_matches_plain_elimination(m in small_matrix()) {
        let (r, p) = rref(&m);
        prop_assert_eq!(rref(&r), (r.clone(), p.clone()));
        prop_assert_eq!(rref_rational(&m), (r, p));
    }

    #[test]
    fn hamming_distance_is_a_metric(
        (u, v, w) in (1usize..8, 2usize..6).prop_flat_map(|(n, q)| (vertex(n, q), vertex(n, q), vertex(n, q)))
    ) {
        let d = |a: &Vertex, b: &Vertex| hdist(a, b).unwrap();
        prop_assert_eq!(d(&u, &v), d(&v, &u));
        prop_assert_eq!(d(&u, &v) == 0, u == v);
        prop_assert!(d(&u, &w) <= d(&u, &v) + d(&v, &w));
        prop_assert!(d(&u, &v) <= u.n());
    }

    #[test]
    fn prepending_keeps_a_sequence_burning(
        (seq, extra) in (2usize..4, 2usize..4).prop_flat_map(|(n, q)| {
            (prop::collection::vec(vertex(n, q), 1..=n + 1), vertex(n, q))
        })
    ) {
        let cap = 1_000_000;
        let s = BurnSequence::new(seq.clone()).unwrap();
        if burns(&s, cap).unwrap() {
            let mut longer = vec![extra];
            longer.extend(seq);
            prop_assert!(burns(&BurnSequence::new(longer).unwrap(), cap).unwrap());
        }
    }

    #[test]
    fn encoding_is_a_bijection_and_recovers_distance(
        (v, w) in (1usize..10, 2usize..7).prop_flat_map(|(n, q)| (vertex(n, q), vertex(n, q)))
    ) {
        prop_assert_eq!(decode(&encode(&v)).unwrap(), v.clone());
        let lhs = hamburn_core::colorcode::inner(&encode(&v), &encode(&w)).unwrap();
        let (n, q) = (v.n() as i64, v.q() as i64);
        prop_assert_eq!(lhs, ratio((q - 1) * n, q) - int(hdist(&v, &w).unwrap() as i64));
    }

    #[test]
    fn convex_combinations_lie_in_the_hull(
        weights in prop::collection::vec(0i64..=6, 2..7), total in 0i64..=6
    ) {
        // λ_i = total/6 · w_i / Σw keeps Σλ <= 1
        let sum: i64 = weights.iter().sum::<i64>().max(1);
        let lambda: Vec<Rational> = weights.iter().map(|&w| ratio(w * total, 6 * sum)).collect();
        let z = combine(&lambda);
        prop_assert!(in_hull(&z.entries));
        let back = hull_coefficients(&z.entries).unwrap();
        prop_assert_eq!(combine(&back), z);
    }

    #[test]
    fn floatvar_certificates_hold(seed in any::<u64>(), n in 1usize..8, q in 3usize..6) {
        let mut rng = trial_rng(seed, 0);
        let a: Vec<CodeVector> = random_vertices(&mut rng, n, q, n).iter().map(encode).collect();
        let cert = floatvar::run(&a).unwrap();
        cert.verify(&a).unwrap();
        // every advance fixes something, so there are at most qn of them
        prop_assert!(cert.trace.len() <= q * n);
        prop_assert!(cert.trace.iter().all(|s| s.newly_fixed >= 1));
        for snap in &cert.snapshots {
            prop_assert!(snap.in_hull());
            prop_assert!(snap.entries().iter().all(|v| *v >= low(q)));
            prop_assert_eq!(classify(snap).unwrap().counts[q - 1], 0);
        }
    }

    #[test]
    fn padding_does_not_affect_the_guarantee(seed in any::<u64>(), n in 4usize..10, q in 3usize..6) {
        let m = evader_length(n, q);
        let mut rng = trial_rng(seed, 1);
        let vs = random_vertices(&mut rng, n, q, m);
        let pad = random_vertices(&mut rng, n, q, n - m);
        let fixed = evade(&vs, n, q).unwrap();
        let random = evade_with_pad(&vs, n, q, &pad).unwrap();
        for cert in [fixed, random] {
            prop_assert!(cert.holds());
            for (i, v) in vs.iter().enumerate() {
                prop_assert!(hdist(v, &cert.w).unwrap() >= m - i);
            }
        }
    }
}

#[test]
fn burning_number_table_is_monotone_in_q() {
    let limits = SearchLimits::default();
    for n in 1..=3 {
        let values: Vec<usize> = (2..=5)
            .map(|q| burning_number(n, q, limits).unwrap().unwrap().value)
            .collect();
        assert!(
            values.windows(2).all(|w| w[0] <= w[1]),
            "n = {n}: {values:?}"
        );
        assert!(values.iter().all(|&b| b <= n + 1));
    }
}

#[test]
fn fixed_entries_never_move() {
    let mut rng = trial_rng(99, 0);
    for _ in 0..20 {
        let a: Vec<CodeVector> = random_vertices(&mut rng, 6, 4, 6)
            .iter()
            .map(encode)
            .collect();
        let cert = floatvar::run(&a).unwrap();
        for pair in cert.snapshots.windows(2) {
            let before = classify(&pair[0]).unwrap();
            for (e, fixed) in before.fixed.iter().enumerate() {
                if *fixed {
                    assert_eq!(pair[0].entries()[e], pair[1].entries()[e]);
                }
            }
        }
    }
}
