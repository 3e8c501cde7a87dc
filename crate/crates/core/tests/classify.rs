mod common;

use std::collections::HashMap;

use common::{dense, leibniz_failures, transport};
use leibniz_core::classify::{
    build_canonical, build_l41, classify_l41, classify_l42, distinguish, sample_l41, sample_l42,
    CanonicalForm, Distinction, FormId, L41Params, Route,
};
use leibniz_core::extensions::{verify_eq_3, ExtensionSpec};
use leibniz_core::triangular::{nil_independent_count, structure_matrices, superdiagonal_diagonal};
use leibniz_core::{change_of_basis, BasisChange, Error, Scalar, StructureTable};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

const N12: usize = 0;
const N23: usize = 1;
const N34: usize = 2;
const N13: usize = 3;
const N24: usize = 4;
const N14: usize = 5;
const X: usize = 6;
const X2: usize = 7;

/// T(4) followed by `extra` generators, with the listed products added.
fn hand(extra: usize, entries: &[(usize, usize, usize, Scalar)]) -> StructureTable<Scalar> {
    let mut labels: Vec<String> = ["N12", "N23", "N34", "N13", "N24", "N14"]
        .map(String::from)
        .to_vec();
    if extra == 1 {
        labels.push("X".into());
    } else {
        labels.extend(["X1".to_string(), "X2".to_string()]);
    }
    let mut cells: HashMap<(usize, usize), Vec<(usize, Scalar)>> = HashMap::new();
    for (i, j, k) in [
        (N12, N23, N13),
        (N23, N34, N24),
        (N12, N24, N14),
        (N13, N34, N14),
    ] {
        cells.entry((i, j)).or_default().push((k, s(1)));
        cells.entry((j, i)).or_default().push((k, s(-1)));
    }
    for (i, j, k, c) in entries {
        if !c.is_zero() {
            cells.entry((*i, *j)).or_default().push((*k, c.clone()));
        }
    }
    let mut t = StructureTable::new(labels);
    for ((i, j), mut v) in cells {
        v.sort_by_key(|e| e.0);
        t.set(i, j, v).unwrap();
    }
    t
}

fn skew(x: usize, k: usize, c: i64) -> [(usize, usize, usize, Scalar); 2] {
    [(k, x, k, s(c)), (x, k, k, s(-c))]
}

fn l1_by_hand(a: &Scalar, b: &Scalar, sigma: &Scalar) -> StructureTable<Scalar> {
    let mut e = vec![
        (N12, X, N24, a.clone()),
        (X, N12, N24, -a.clone()),
        (X, N12, N14, b.clone()),
        (X, X, N14, sigma.clone()),
    ];
    for (k, c) in [(N23, 1), (N34, -1), (N13, 1)] {
        e.extend(skew(X, k, c));
    }
    hand(1, &e)
}

fn l2_by_hand(a: &Scalar, b: &Scalar, sigma: &Scalar) -> StructureTable<Scalar> {
    let mut e = vec![
        (N23, X, N14, a.clone()),
        (X, N23, N14, b.clone()),
        (X, X, N14, sigma.clone()),
    ];
    for (k, c) in [(N12, 1), (N34, -1), (N13, 1), (N24, -1)] {
        e.extend(skew(X, k, c));
    }
    hand(1, &e)
}

fn l3_by_hand(a: i64) -> StructureTable<Scalar> {
    let mut e = vec![(X, X, N14, s(1))];
    for (k, c) in [(N12, 1), (N23, a), (N34, -(1 + a)), (N13, 1 + a), (N24, -1)] {
        e.extend(skew(X, k, c));
    }
    hand(1, &e)
}

fn l42_by_hand(sig: [i64; 4]) -> StructureTable<Scalar> {
    let mut e = vec![
        (X, X, N14, s(sig[0])),
        (X, X2, N14, s(sig[1])),
        (X2, X, N14, s(sig[2])),
        (X2, X2, N14, s(sig[3])),
    ];
    for (k, c) in [(N12, 1), (N34, -1), (N13, 1), (N24, -1)] {
        e.extend(skew(X, k, c));
    }
    for (k, c) in [(N23, 1), (N34, -1), (N13, 1)] {
        e.extend(skew(X2, k, c));
    }
    hand(2, &e)
}

#[test]
fn canonical_tables_match_the_hand_tables() {
    let (a, b, c) = (Scalar::ratio(3, 2), s(-1), Scalar::i());
    let l1 = CanonicalForm::L1 {
        a12_24: a.clone(),
        b12_14: b.clone(),
        s14: c.clone(),
    };
    assert_eq!(build_canonical(&l1).unwrap(), l1_by_hand(&a, &b, &c));
    let l2 = CanonicalForm::L2 {
        a23_14: a.clone(),
        b23_14: b.clone(),
        s14: c.clone(),
    };
    assert_eq!(build_canonical(&l2).unwrap(), l2_by_hand(&a, &b, &c));
    assert_eq!(
        build_canonical(&CanonicalForm::L3 { a23_23: s(2) }).unwrap(),
        l3_by_hand(2)
    );
    let l42 = CanonicalForm::L42 {
        s11: s(1),
        s12: s(0),
        s21: s(0),
        s22: s(0),
    };
    assert_eq!(build_canonical(&l42).unwrap(), l42_by_hand([1, 0, 0, 0]));
}

#[test]
fn canonical_forms_reject_excluded_parameters() {
    let z = Scalar::zero();
    for a in [0, -1] {
        assert!(build_canonical(&CanonicalForm::L3 { a23_23: s(a) }).is_err());
    }
    assert!(build_canonical(&CanonicalForm::L1 {
        a12_24: s(1),
        b12_14: z.clone(),
        s14: z.clone()
    })
    .is_err());
    assert!(build_canonical(&CanonicalForm::L2 {
        a23_14: s(1),
        b23_14: s(-1),
        s14: z.clone()
    })
    .is_err());
    assert!(build_canonical(&CanonicalForm::L42 {
        s11: z.clone(),
        s12: z.clone(),
        s21: z.clone(),
        s22: z.clone()
    })
    .is_err());
    assert!(build_canonical(&CanonicalForm::L42 {
        s11: z.clone(),
        s12: s(2),
        s21: s(-2),
        s22: z
    })
    .is_err());
}

#[test]
fn canonical_forms_are_solvable_non_nilpotent_and_non_lie() {
    let forms = [
        CanonicalForm::L1 {
            a12_24: s(1),
            b12_14: s(1),
            s14: s(0),
        },
        CanonicalForm::L1 {
            a12_24: s(0),
            b12_14: s(0),
            s14: s(1),
        },
        CanonicalForm::L2 {
            a23_14: s(1),
            b23_14: s(0),
            s14: s(0),
        },
        CanonicalForm::L2 {
            a23_14: s(0),
            b23_14: s(0),
            s14: s(3),
        },
        CanonicalForm::L3 { a23_23: s(1) },
        CanonicalForm::L3 {
            a23_23: Scalar::ratio(-1, 2),
        },
        CanonicalForm::L42 {
            s11: s(0),
            s12: s(1),
            s21: s(0),
            s22: s(0),
        },
    ];
    for form in forms {
        let t = build_canonical(&form).unwrap();
        assert!(leibniz_failures(&dense(&t)).is_empty(), "{form}");
        assert!(t.is_leibniz() && t.is_solvable());
        assert!(!t.is_nilpotent() && !t.is_lie(), "{form}");
    }
}

#[test]
fn build_l41_examples() {
    let l2 = build_l41(&L41Params::from_ints([1, 0, 0, 0, 0, 0, 0, 0, 1])).unwrap();
    assert_eq!(l2, l2_by_hand(&s(0), &s(0), &s(1)));
    assert!(build_l41(&L41Params::from_ints([0; 9])).is_err());
    match build_l41(&L41Params::from_ints([1, 0, 1, 0, 0, 0, 0, 0, 0])) {
        Err(e) => assert!(e.to_string().contains("a1_12_12*b1_12_14"), "{e}"),
        Ok(_) => panic!("restriction not enforced"),
    }
}

fn check_witness(
    input: &StructureTable<Scalar>,
    witness: &BasisChange,
    want: &StructureTable<Scalar>,
) {
    let p = witness.matrix().row_vecs();
    let q = witness.inverse().matrix().row_vecs();
    assert_eq!(transport(&dense(input), &p, &q), dense(want));
    assert_eq!(&change_of_basis(input, witness).unwrap(), want);
}

#[test]
fn classify_examples() {
    // a12 = 0, a23 = 2, a23_14 = 2, b23_14 = -2, a34_13 = 4, b12_14 = 1
    let p = L41Params::from_ints([0, 0, 1, 2, 2, -2, 4, 0, 0]);
    let c = classify_l41(&p).unwrap();
    assert_eq!(c.route, Route::A12Zero);
    // X' = X/2 halves the N14 coefficient of [X, N12]
    assert_eq!(
        c.form,
        CanonicalForm::L1 {
            a12_24: s(0),
            b12_14: Scalar::ratio(1, 2),
            s14: s(0)
        }
    );
    check_witness(
        &build_l41(&p).unwrap(),
        &c.witness,
        &l1_by_hand(&s(0), &Scalar::ratio(1, 2), &s(0)),
    );

    let p = L41Params::from_ints([1, 0, 0, 1, 0, 0, 0, 0, 1]);
    let c = classify_l41(&p).unwrap();
    assert_eq!(
        (c.route, c.form.clone()),
        (Route::A23Generic, CanonicalForm::L3 { a23_23: s(1) })
    );
    check_witness(&build_l41(&p).unwrap(), &c.witness, &l3_by_hand(1));

    // a Lie member
    let lie = L41Params::from_ints([1, 0, 0, 1, 0, 0, 0, 0, 0]);
    assert!(matches!(classify_l41(&lie), Err(Error::LieMember)));
}

#[test]
fn opposite_branch_goes_to_l1_with_a_note() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let p = sample_l41(&mut rng, Route::A23Opposite);
    let c = classify_l41(&p).unwrap();
    assert_eq!(c.form.id(), FormId::L1);
    assert!(c.note.is_some());
}

#[test]
fn round_trips_across_all_routes() {
    let routes = [
        Route::A12Zero,
        Route::A23Zero,
        Route::A23Opposite,
        Route::A23Generic,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut count = 0;
    for k in 0..240 {
        let route = routes[k % 4];
        let p = sample_l41(&mut rng, route);
        let input = build_l41(&p).unwrap();
        let c = classify_l41(&p).unwrap();
        assert_eq!(c.route, route);
        let want = build_canonical(&c.form).unwrap();
        check_witness(&input, &c.witness, &want);
        let expected = match route {
            Route::A23Zero => FormId::L2,
            Route::A23Generic => FormId::L3,
            _ => FormId::L1,
        };
        assert_eq!(c.form.id(), expected);
        count += 1;
    }
    assert!(count >= 200);
}

#[test]
fn classifying_a_canonical_table_keeps_its_form() {
    let forms = [
        CanonicalForm::L1 {
            a12_24: s(2),
            b12_14: s(1),
            s14: s(-1),
        },
        CanonicalForm::L2 {
            a23_14: s(1),
            b23_14: s(3),
            s14: s(0),
        },
        CanonicalForm::L3 { a23_23: s(4) },
    ];
    for form in forms {
        let t = build_canonical(&form).unwrap();
        let p = L41Params::from_spec(&ExtensionSpec::from_table(&t, 4, 1).unwrap()).unwrap();
        let c = classify_l41(&p).unwrap();
        assert_eq!(c.form, form);
        assert_eq!(change_of_basis(&t, &c.witness).unwrap(), t);
    }
}

#[test]
fn the_three_forms_are_separated() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let reps: Vec<StructureTable<Scalar>> = [Route::A12Zero, Route::A23Zero, Route::A23Generic]
            .into_iter()
            .map(|r| {
                let c = classify_l41(&sample_l41(&mut rng, r)).unwrap();
                build_canonical(&c.form).unwrap()
            })
            .collect();
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(distinguish(&reps[i], &reps[j]).is_distinct(), "{i} {j}");
            }
        }
    }
}

#[test]
fn distinguish_examples() {
    let l1 = l1_by_hand(&s(0), &s(1), &s(0));
    let l3 = l3_by_hand(1);
    assert!(distinguish(&l1, &l3).is_distinct());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p = common::random_invertible(&mut rng, 7);
    let change = BasisChange::new(leibniz_core::Matrix::from_rows(7, p).unwrap()).unwrap();
    let moved = change_of_basis(&l3, &change).unwrap();
    assert_eq!(distinguish(&l3, &moved), Distinction::Inconclusive);

    let l42 = l42_by_hand([1, 0, 0, 0]);
    let split = hand(2, &[]);
    assert!(split.is_nilpotent() && !l42.is_nilpotent());
    assert!(distinguish(&l42, &split).is_distinct());
}

#[test]
fn two_generator_family() {
    let t = build_canonical(&CanonicalForm::L42 {
        s11: s(1),
        s12: s(0),
        s21: s(0),
        s22: s(0),
    })
    .unwrap();
    assert!(t.is_leibniz() && !t.is_lie());
    let diags: Vec<Vec<Scalar>> = (1..=2)
        .map(|a| superdiagonal_diagonal(&structure_matrices(&t, 4, a).unwrap().a, 4))
        .collect();
    assert_eq!(
        diags,
        vec![vec![s(1), s(0), s(-1)], vec![s(0), s(1), s(-1)]]
    );
    assert_eq!(nil_independent_count(&diags), 2);
    assert!(verify_eq_3(&t, 4, 2).unwrap());
    for x in [X, X2] {
        assert!(t.get(x, N14).is_empty() && t.get(N14, x).is_empty());
    }
}

#[test]
fn two_generator_members_normalize_to_l42() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..40 {
        let spec = sample_l42(&mut rng);
        let input = leibniz_core::extensions::master_extension(&spec).unwrap();
        assert!(!input.is_lie());
        assert!(verify_eq_3(&input, 4, 2).unwrap());
        let c = classify_l42(&spec).unwrap();
        assert_eq!(c.form.id(), FormId::L42);
        check_witness(&input, &c.witness, &build_canonical(&c.form).unwrap());
    }
}
