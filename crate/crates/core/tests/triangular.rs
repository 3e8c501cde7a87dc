mod common;

use common::{dense, series_dims, triangular_bracket};
use leibniz_core::classify::{build_canonical, CanonicalForm};
use leibniz_core::triangular::{
    check_lemma_2_4, is_nilpotent_by_powers, is_nilpotent_matrix, nil_independent_count,
    pair_index, structure_matrices, triangular, PairIndex, StructureMatrices,
};
use leibniz_core::{Matrix, Scalar, StructureTable};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn ints(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| s(x)).collect()
}

#[test]
fn heisenberg_products() {
    let t = triangular(3).unwrap();
    let products: Vec<_> = t.products().map(|(i, j, v)| (i, j, v.to_vec())).collect();
    assert_eq!(
        products,
        vec![
            (0, 1, vec![(2, Scalar::one())]),
            (1, 0, vec![(2, -Scalar::one())])
        ]
    );
    assert!(triangular(2).is_err());
}

#[test]
fn t4_products_follow_the_delta_formula() {
    let t = triangular(4).unwrap();
    assert_eq!(t.dim(), 6);
    let idx = PairIndex::new(4);
    let expect = |a: (usize, usize), b: (usize, usize)| {
        let mut v = vec![Scalar::zero(); 6];
        for (p, c) in triangular_bracket(a, b) {
            v[idx.at(p.0, p.1)] = s(c);
        }
        v
    };
    for &a in idx.pairs() {
        for &b in idx.pairs() {
            let got = t.bracket(
                &t.basis_vector(idx.at(a.0, a.1)),
                &t.basis_vector(idx.at(b.0, b.1)),
            );
            assert_eq!(got.unwrap(), expect(a, b), "{a:?} {b:?}");
        }
    }
    let n = |l: &str| t.basis_vector(t.index_of(l).unwrap());
    assert_eq!(t.bracket(&n("N12"), &n("N24")).unwrap(), n("N14"));
    assert_eq!(t.bracket(&n("N13"), &n("N34")).unwrap(), n("N14"));
    assert_eq!(t.bracket(&n("N23"), &n("N34")).unwrap(), n("N24"));
}

#[test]
fn triangular_algebras_are_lie_and_nilpotent() {
    for n in 3..=6 {
        let t = triangular(n).unwrap();
        assert!(t.is_lie(), "n = {n}");
        let d = n * (n - 1) / 2;
        // L^k drops by the number of pairs on superdiagonal k
        let mut want = vec![d];
        let mut cur = d;
        for k in 1..n {
            cur -= n - k;
            want.push(cur);
        }
        let (lower, _) = t.series_signature();
        assert_eq!(lower, want, "n = {n}");
        assert_eq!(lower.len(), n);
        if n <= 4 {
            assert!(common::leibniz_failures(&dense(&t)).is_empty());
            assert_eq!(series_dims(&dense(&t), false), want);
        }
    }
}

#[test]
fn pair_index_examples() {
    let got: Vec<usize> = [(1, 2), (2, 3), (3, 4), (1, 3), (2, 4), (1, 4)]
        .iter()
        .map(|&(i, j)| pair_index(4, i, j).unwrap())
        .collect();
    assert_eq!(got, vec![0, 1, 2, 3, 4, 5]);
    assert_eq!(pair_index(3, 1, 3).unwrap(), 2);
    assert_eq!(pair_index(5, 1, 5).unwrap(), 9);
    assert!(pair_index(4, 3, 2).is_err());
    assert!(pair_index(4, 0, 2).is_err());
    assert!(pair_index(4, 1, 5).is_err());
}

#[test]
fn pair_index_round_trips() {
    for n in 3..=12 {
        let idx = PairIndex::new(n);
        // the oracle ordering: by gap, then by row
        let mut want = Vec::new();
        for gap in 1..n {
            for i in 1..=n - gap {
                want.push((i, i + gap));
            }
        }
        assert_eq!(idx.pairs(), want.as_slice());
        for (k, &(i, j)) in want.iter().enumerate() {
            assert_eq!(idx.index(i, j).unwrap(), k);
            assert_eq!(idx.pair(k).unwrap(), (i, j));
        }
    }
    assert_eq!(PairIndex::new(10).labels()[0], "N1_2");
}

#[test]
fn l3_structure_matrix() {
    let l3 = build_canonical(&CanonicalForm::L3 { a23_23: s(1) }).unwrap();
    let m = structure_matrices(&l3, 4, 1).unwrap();
    assert_eq!(m.a.diagonal(), ints(&[1, 1, -2, 2, -1, 0]));
    assert!(check_lemma_2_4(&m, 4).passed());
    assert!(structure_matrices(&l3, 4, 2).is_err());
}

#[test]
fn lie_extensions_have_skew_actions() {
    for form in [
        CanonicalForm::L3 { a23_23: s(3) },
        CanonicalForm::L1 {
            a12_24: s(1),
            b12_14: s(-1),
            s14: s(0),
        },
    ] {
        let t = build_canonical(&form).unwrap();
        if !t.is_lie() {
            continue;
        }
        let m = structure_matrices(&t, 4, 1).unwrap();
        let top = pair_index(4, 1, 4).unwrap();
        for r in 0..6 {
            for c in 0..6 {
                if c != top {
                    assert_eq!(m.b[(r, c)], -m.a[(r, c)].clone());
                }
            }
        }
    }
}

#[test]
fn zero_extension_gives_zero_matrices() {
    let t3 = triangular(3).unwrap();
    let mut labels = t3.labels().to_vec();
    labels.push("X".into());
    let mut ext = StructureTable::new(labels);
    for (i, j, v) in t3.products() {
        ext.set(i, j, v.to_vec()).unwrap();
    }
    let m = structure_matrices(&ext, 3, 1).unwrap();
    assert!(m.a.is_zero() && m.b.is_zero());
}

#[test]
fn right_action_examples() {
    let l1 = build_canonical(&CanonicalForm::L1 {
        a12_24: s(2),
        b12_14: s(1),
        s14: s(1),
    })
    .unwrap();
    let m = structure_matrices(&l1, 4, 1).unwrap();
    assert!(check_lemma_2_4(&m, 4).passed());

    let mut bad = m.clone();
    bad.a[(0, 2)] = s(1);
    let report = check_lemma_2_4(&bad, 4);
    assert!(!report.off_diagonal_pattern);
    assert!(report.upper_triangular && report.diagonal_sums);
    assert!(report.failures.iter().any(|f| f.contains("12,34")));

    let d = [s(2), s(-1), s(5)];
    let mut a = Matrix::zero(6, 6);
    let sums = [&d[0] + &d[1], &d[1] + &d[2], &(&d[0] + &d[1]) + &d[2]];
    for (k, v) in d.iter().chain(&sums).enumerate() {
        a[(k, k)] = v.clone();
    }
    let built = StructureMatrices {
        a,
        b: Matrix::zero(6, 6),
    };
    assert!(check_lemma_2_4(&built, 4).passed());

    let mut lower = built.clone();
    lower.a[(3, 0)] = s(1);
    assert!(!check_lemma_2_4(&lower, 4).upper_triangular);
    let mut off_sum = built;
    off_sum.a[(5, 5)] = s(0);
    assert!(!check_lemma_2_4(&off_sum, 4).diagonal_sums);
}

#[test]
fn nil_independence_examples() {
    assert_eq!(
        nil_independent_count(&[ints(&[1, 0, -1]), ints(&[0, 1, -1])]),
        2
    );
    for n in 3..=6 {
        let units: Vec<Vec<Scalar>> = (0..n - 1)
            .map(|k| {
                (0..n - 1)
                    .map(|j| if j == k { s(1) } else { s(0) })
                    .collect()
            })
            .collect();
        assert_eq!(nil_independent_count(&units), n - 1);
    }
    assert_eq!(nil_independent_count(&[ints(&[0, 0]), ints(&[0, 0])]), 0);
    assert_eq!(nil_independent_count(&[]), 0);
}

fn upper(d: usize) -> impl Strategy<Value = (Vec<Scalar>, bool)> {
    (
        prop::collection::vec(-2i64..=2, d * (d + 1) / 2),
        any::<bool>(),
    )
        .prop_map(|(v, zero_diag)| (v.into_iter().map(s).collect(), zero_diag))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zero_diagonal_matches_matrix_powers(d in prop_oneof![Just(3usize), Just(6usize)], (v, zero_diag) in upper(6)) {
        let mut m = Matrix::zero(d, d);
        let mut it = v.into_iter();
        for r in 0..d {
            for c in r..d {
                let x = it.next().unwrap();
                m[(r, c)] = if r == c && zero_diag { Scalar::zero() } else { x };
            }
        }
        let by_diag = m.diagonal().iter().all(Scalar::is_zero);
        prop_assert_eq!(is_nilpotent_by_powers(&m), by_diag);
        prop_assert_eq!(is_nilpotent_matrix(&m), by_diag);
    }
}
