//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the library's linear algebra or identity checks.
#![allow(dead_code)]

use leibniz_core::{Scalar, StructureTable};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Dense = Vec<Vec<Vec<Scalar>>>;

/// `c[i][j][k]`, the coefficient of `e_k` in `[e_i, e_j]`.
pub fn dense(t: &StructureTable<Scalar>) -> Dense {
    let d = t.dim();
    let mut c = vec![vec![vec![Scalar::zero(); d]; d]; d];
    for (i, j, v) in t.products() {
        for (k, x) in v {
            c[i][j][*k] = x.clone();
        }
    }
    c
}

pub fn bracket(c: &Dense, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    let d = c.len();
    let mut out = vec![Scalar::zero(); d];
    for i in 0..d {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..d {
            if y[j].is_zero() {
                continue;
            }
            let w = &x[i] * &y[j];
            for k in 0..d {
                out[k] += &(&w * &c[i][j][k]);
            }
        }
    }
    out
}

pub fn unit(d: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); d];
    v[i] = Scalar::one();
    v
}

fn sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Triples where `[x,[y,z]] - [[x,y],z] + [[x,z],y]` is nonzero.
pub fn leibniz_failures(c: &Dense) -> Vec<(usize, usize, usize)> {
    let d = c.len();
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let (x, y, z) = (unit(d, i), unit(d, j), unit(d, k));
                let lhs = bracket(c, &x, &bracket(c, &y, &z));
                let rhs = sub(
                    &bracket(c, &bracket(c, &x, &y), &z),
                    &bracket(c, &bracket(c, &x, &z), &y),
                );
                if sub(&lhs, &rhs).iter().any(|s| !s.is_zero()) {
                    out.push((i, j, k));
                }
            }
        }
    }
    out
}

pub fn is_skew(c: &Dense) -> bool {
    let d = c.len();
    (0..d).all(|i| (0..d).all(|j| (0..d).all(|k| (&c[i][j][k] + &c[j][i][k]).is_zero())))
}

/// Row reduction written out long-hand; returns a basis of the row space.
pub fn row_basis(mut rows: Vec<Vec<Scalar>>) -> Vec<Vec<Scalar>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inv().unwrap();
        rows[r] = rows[r].iter().map(|x| x * &inv).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                let pivot = rows[r].clone();
                rows[i] = rows[i]
                    .iter()
                    .zip(&pivot)
                    .map(|(a, b)| a - &(&f * b))
                    .collect();
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

pub fn rank(rows: Vec<Vec<Scalar>>) -> usize {
    row_basis(rows).len()
}

/// All brackets `[a, b]` with `a` from `xs`, `b` from `ys`.
fn products(c: &Dense, xs: &[Vec<Scalar>], ys: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let mut out = Vec::new();
    for x in xs {
        for y in ys {
            out.push(bracket(c, x, y));
        }
    }
    out
}

/// `L^{k+1} = [L^k, L]` or, with `derived`, `[L^k, L^k]`; stops at zero or
/// when the dimension no longer drops.
pub fn series_dims(c: &Dense, derived: bool) -> Vec<usize> {
    let d = c.len();
    let all: Vec<Vec<Scalar>> = (0..d).map(|i| unit(d, i)).collect();
    let mut current = all.clone();
    let mut dims = vec![d];
    while !current.is_empty() {
        let next = if derived {
            products(c, &current, &current)
        } else {
            products(c, &current, &all)
        };
        let basis = row_basis(next);
        if basis.len() == current.len() {
            break;
        }
        dims.push(basis.len());
        current = basis;
    }
    dims
}

/// The bracket of `T(n)` from `[N_ij, N_kl] = δ_jk N_il - δ_il N_kj`, on pairs.
pub fn triangular_bracket(
    (i, j): (usize, usize),
    (k, l): (usize, usize),
) -> Vec<((usize, usize), i64)> {
    let mut out = Vec::new();
    if j == k {
        out.push(((i, l), 1));
    }
    if i == l {
        out.push(((k, j), -1));
    }
    out
}

pub fn small_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let re = Scalar::ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3));
    if rng.gen_bool(0.25) {
        &re + &(&Scalar::i() * &Scalar::from_int(rng.gen_range(-2..=2)))
    } else {
        re
    }
}

/// Random invertible `d × d` matrix as rows: unit lower times diagonal times
/// unit upper, with small entries so that transported tables stay small.
pub fn random_invertible(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<Scalar>> {
    let small = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.6) {
            Scalar::zero()
        } else {
            Scalar::from_int(rng.gen_range(-2..=2))
        }
    };
    let mut lower = vec![vec![Scalar::zero(); d]; d];
    let mut upper = vec![vec![Scalar::zero(); d]; d];
    for i in 0..d {
        lower[i][i] = Scalar::one();
        upper[i][i] = match rng.gen_range(0..5) {
            0 => Scalar::from_int(-1),
            1 => Scalar::from_int(2),
            2 => Scalar::ratio(1, 2),
            3 => Scalar::i(),
            _ => Scalar::one(),
        };
        for x in &mut lower[i][..i] {
            *x = small(rng);
        }
        for x in &mut upper[i][i + 1..] {
            *x = small(rng);
        }
    }
    let mut out = vec![vec![Scalar::zero(); d]; d];
    for i in 0..d {
        for k in 0..=i {
            if lower[i][k].is_zero() {
                continue;
            }
            for j in k..d {
                out[i][j] += &(&lower[i][k] * &upper[k][j]);
            }
        }
    }
    debug_assert_eq!(rank(out.clone()), d);
    out
}

/// Transport by hand: `c'_{ij}^r = Σ p_ik p_jl c_kl^m q_mr`.
pub fn transport(c: &Dense, p: &[Vec<Scalar>], q: &[Vec<Scalar>]) -> Dense {
    let d = c.len();
    let mut out = vec![vec![vec![Scalar::zero(); d]; d]; d];
    for i in 0..d {
        for j in 0..d {
            let v = bracket(c, &p[i], &p[j]);
            for r in 0..d {
                let mut s = Scalar::zero();
                for m in 0..d {
                    s += &(&v[m] * &q[m][r]);
                }
                out[i][j][r] = s;
            }
        }
    }
    out
}
