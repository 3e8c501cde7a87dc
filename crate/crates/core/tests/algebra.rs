mod common;

use common::{dense, leibniz_failures, random_invertible, rank, series_dims, transport, unit};
use leibniz_core::algebra::{default_labels, derivation_matrix};
use leibniz_core::classify::{build_canonical, build_l41, CanonicalForm, L41Params};
use leibniz_core::triangular::{pair_index, triangular};
use leibniz_core::{
    change_of_basis, span, BasisChange, Matrix, Scalar, Side, StructureTable, Subspace,
};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn l3(a: i64) -> StructureTable<Scalar> {
    build_canonical(&CanonicalForm::L3 { a23_23: s(a) }).unwrap()
}

fn n(t: &StructureTable<Scalar>, label: &str) -> Vec<Scalar> {
    t.basis_vector(t.index_of(label).unwrap())
}

#[test]
fn brackets_in_small_triangular_algebras() {
    let t3 = triangular(3).unwrap();
    assert_eq!(
        t3.bracket(&n(&t3, "N12"), &n(&t3, "N23")).unwrap(),
        n(&t3, "N13")
    );
    let zero = vec![Scalar::zero(); 3];
    assert_eq!(t3.bracket(&n(&t3, "N12"), &zero).unwrap(), zero);
    let t4 = triangular(4).unwrap();
    assert!(t4
        .bracket(&n(&t4, "N13"), &n(&t4, "N24"))
        .unwrap()
        .iter()
        .all(Scalar::is_zero));
}

#[test]
fn residues_agree_with_brute_force() {
    let t4 = triangular(4).unwrap();
    assert!(t4.leibniz_residues().is_empty());
    assert!(leibniz_failures(&dense(&t4)).is_empty());

    let l = l3(1);
    assert!(l.leibniz_residues().is_empty());
    assert!(leibniz_failures(&dense(&l)).is_empty());

    let mut sq = StructureTable::new(default_labels(2));
    sq.set(0, 0, vec![(0, Scalar::one())]).unwrap();
    let triples: Vec<_> = sq.leibniz_residues().iter().map(|r| r.triple).collect();
    assert_eq!(triples, leibniz_failures(&dense(&sq)));
    assert!(triples.contains(&(0, 0, 0)));
}

#[test]
fn leibniz_and_lie_verdicts() {
    let t5 = triangular(5).unwrap();
    assert_eq!((t5.is_leibniz(), t5.is_lie()), (true, true));
    assert!(common::is_skew(&dense(&t5)));

    let l42 = build_canonical(&CanonicalForm::L42 {
        s11: s(1),
        s12: s(0),
        s21: s(0),
        s22: s(0),
    })
    .unwrap();
    assert_eq!((l42.is_leibniz(), l42.is_lie()), (true, false));
    assert!(leibniz_failures(&dense(&l42)).is_empty());
    assert!(!common::is_skew(&dense(&l42)));

    let mut t = StructureTable::new(default_labels(3));
    t.set(0, 1, vec![(2, Scalar::one())]).unwrap();
    assert!(!t.is_lie());
}

#[test]
fn multiplication_operators() {
    let t3 = triangular(3).unwrap();
    let r = t3.mult_matrix(&n(&t3, "N12"), Side::Right).unwrap();
    let (n23, n13) = (t3.index_of("N23").unwrap(), t3.index_of("N13").unwrap());
    for col in 0..3 {
        for row in 0..3 {
            let want = if (row, col) == (n13, n23) {
                -Scalar::one()
            } else {
                Scalar::zero()
            };
            assert_eq!(r[(row, col)], want);
        }
    }
    let t5 = triangular(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let x: Vec<Scalar> = (0..10).map(|_| common::small_scalar(&mut rng)).collect();
        let l = t5.mult_matrix(&x, Side::Left).unwrap();
        let r = t5.mult_matrix(&x, Side::Right).unwrap();
        assert!(l.add(&r).unwrap().is_zero());
    }
    assert!(t5
        .mult_matrix(&vec![Scalar::zero(); 10], Side::Right)
        .unwrap()
        .is_zero());
}

#[test]
fn series_match_the_oracle() {
    let t4 = triangular(4).unwrap();
    assert_eq!(t4.series_signature(), (vec![6, 3, 1, 0], vec![6, 3, 0]));
    let c = dense(&t4);
    assert_eq!(series_dims(&c, false), vec![6, 3, 1, 0]);
    assert_eq!(series_dims(&c, true), vec![6, 3, 0]);

    let ab = StructureTable::<Scalar>::new(default_labels(3));
    assert_eq!(ab.series_signature(), (vec![3, 0], vec![3, 0]));

    for table in [l3(1), l3(2), triangular(5).unwrap()] {
        let c = dense(&table);
        let (lower, derived) = table.series_signature();
        assert_eq!(lower, series_dims(&c, false));
        assert_eq!(derived, series_dims(&c, true));
    }
}

#[test]
fn nilpotency_and_solvability() {
    let t6 = triangular(6).unwrap();
    assert_eq!((t6.is_nilpotent(), t6.is_solvable()), (true, true));

    let l1 = build_canonical(&CanonicalForm::L1 {
        a12_24: s(0),
        b12_14: s(1),
        s14: s(0),
    })
    .unwrap();
    assert_eq!((l1.is_nilpotent(), l1.is_solvable()), (false, true));
    // N23 is an eigenvector of R_X with eigenvalue 1
    let x = n(&l1, "X");
    let n23 = n(&l1, "N23");
    assert_eq!(l1.bracket(&n23, &x).unwrap(), n23);

    let one = StructureTable::<Scalar>::new(default_labels(1));
    assert_eq!((one.is_nilpotent(), one.is_solvable()), (true, true));
}

#[test]
fn right_annihilators() {
    let t4 = triangular(4).unwrap();
    let ann = t4.right_annihilator();
    assert_eq!(ann.dim(), 1);
    assert!(ann.contains(&n(&t4, "N14")));
    // oracle: v with [e_i, v] = 0 for all i; N14 is the only basis vector with that property
    let c = dense(&t4);
    for k in 0..6 {
        let kills = (0..6).all(|i| {
            common::bracket(&c, &unit(6, i), &unit(6, k))
                .iter()
                .all(Scalar::is_zero)
        });
        assert_eq!(kills, k == pair_index(4, 1, 4).unwrap());
    }

    let ab = StructureTable::<Scalar>::new(default_labels(4));
    assert_eq!(ab.right_annihilator(), Subspace::full(4));

    let l = l3(1);
    assert!(l.right_annihilator().contains(&n(&l, "N14")));
    let xx = l.bracket(&n(&l, "X"), &n(&l, "X")).unwrap();
    assert!(l.right_annihilator().contains(&xx));
}

#[test]
fn ideals() {
    let t4 = triangular(4).unwrap();
    let square = span(6, &[n(&t4, "N13"), n(&t4, "N24"), n(&t4, "N14")]).unwrap();
    assert!(t4.is_ideal(&square).unwrap());
    assert_eq!(t4.lower_central_series()[1], square);

    let t3 = triangular(3).unwrap();
    assert!(!t3.is_ideal(&span(3, &[n(&t3, "N12")]).unwrap()).unwrap());
    assert!(t3.is_ideal(&Subspace::zero(3)).unwrap());
}

#[test]
fn derivations() {
    let t3 = triangular(3).unwrap();
    assert!(!t3.is_derivation(&Matrix::identity(3)).unwrap());
    assert!(t3.is_derivation(&Matrix::zero(3, 3)).unwrap());
    assert_eq!(t3.derivation_algebra().dim(), 6);

    let ab = StructureTable::<Scalar>::new(default_labels(3));
    assert_eq!(ab.derivation_algebra().dim(), 9);

    for table in [triangular(4).unwrap(), l3(2)] {
        let d = table.dim();
        let der = table.derivation_algebra();
        for v in der.basis_vectors() {
            assert!(table
                .is_derivation(&derivation_matrix(d, &v).unwrap())
                .unwrap());
        }
        for i in 0..d {
            let r = table.mult_matrix(&unit(d, i), Side::Right).unwrap();
            assert!(table.is_derivation(&r).unwrap());
            // R is stored with images in columns; the derivation vector is row-major
            let flat: Vec<Scalar> = (0..d).flat_map(|k| r.row(k).to_vec()).collect();
            assert!(der.contains(&flat));
        }
    }
}

/// dim Der by solving `D[x,y] = [Dx,y] + [x,Dy]` long-hand.
fn derivation_dimension_oracle(c: &common::Dense) -> usize {
    let d = c.len();
    let mut rows = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for r in 0..d {
                let mut row = vec![Scalar::zero(); d * d];
                // D e_m = Σ_k D[k][m] e_k, unknown index k*d + m
                for k in 0..d {
                    row[r * d + k] += &c[i][j][k];
                    row[k * d + i] -= &c[k][j][r];
                    row[k * d + j] -= &c[i][k][r];
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    d * d - rank(rows)
}

#[test]
fn derivation_dimensions_match_the_oracle() {
    for n in 3..=5 {
        let t = triangular(n).unwrap();
        assert_eq!(
            t.derivation_algebra().dim(),
            derivation_dimension_oracle(&dense(&t)),
            "n = {n}"
        );
    }
    assert_eq!(triangular(3).unwrap().derivation_algebra().dim(), 6);
    let l = l3(2);
    assert_eq!(
        l.derivation_algebra().dim(),
        derivation_dimension_oracle(&dense(&l))
    );
}

#[test]
fn change_of_basis_examples() {
    let l = l3(2);
    assert_eq!(change_of_basis(&l, &BasisChange::identity(7)).unwrap(), l);

    let p = L41Params::from_ints([0, 0, 0, 2, 2, -2, 4, 0, 0]);
    let table = build_l41(&p).unwrap();
    let (n23, n34, n13, n14, x) = (1, 2, 3, 5, 6);
    let one = Scalar::one();
    let mut rows: Vec<Vec<(usize, Scalar)>> = (0..7).map(|i| vec![(i, one.clone())]).collect();
    rows[x] = vec![(x, Scalar::ratio(1, 2))];
    rows[n23] = vec![(n23, one.clone()), (n14, s(1))];
    rows[n34] = vec![(n34, one), (n13, s(-1))];
    let change = BasisChange::from_sparse_rows(7, &rows).unwrap();
    let image = change_of_basis(&table, &change).unwrap();
    // the one-generator shape with a12_12 = 0, a23_23 = 1 and nothing else
    let expected = build_l41(&L41Params::from_ints([0, 0, 0, 1, 0, 0, 0, 0, 0])).unwrap();
    assert_eq!(image, expected);
    assert_eq!(change_of_basis(&image, &change.inverse()).unwrap(), table);
}

fn table_and_change(seed: u64) -> (StructureTable<Scalar>, Vec<Vec<Scalar>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let table = match seed % 3 {
        0 => triangular(4).unwrap(),
        1 => l3(3),
        _ => build_canonical(&CanonicalForm::L2 {
            a23_14: s(1),
            b23_14: s(2),
            s14: s(0),
        })
        .unwrap(),
    };
    let p = random_invertible(&mut rng, table.dim());
    (table, p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transport_matches_the_hand_formula(seed in 0u64..10_000) {
        let (table, p) = table_and_change(seed);
        let change = BasisChange::new(Matrix::from_rows(p.len(), p.clone()).unwrap()).unwrap();
        let q = change.inverse().matrix().row_vecs();
        let image = change_of_basis(&table, &change).unwrap();
        prop_assert_eq!(dense(&image), transport(&dense(&table), &p, &q));
        prop_assert_eq!(change_of_basis(&image, &change.inverse()).unwrap(), table.clone());
        prop_assert_eq!(image.series_signature(), table.series_signature());
        prop_assert_eq!(image.is_leibniz(), table.is_leibniz());
        prop_assert_eq!(image.is_lie(), table.is_lie());
    }
}
