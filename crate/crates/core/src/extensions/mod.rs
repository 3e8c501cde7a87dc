//! Solvable extensions of `T(n)` by `f` outer generators `X^1..X^f`.
//!
//! Indeterminate names: `a{α}_{ij}_{pq}` is the coefficient of `N_pq` in
//! `[N_ij, X^α]`, `b{α}_{ij}_{pq}` the one in `[X^α, N_ij]`, and
//! `s{α}{β}_{pq}` the one in `[X^α, X^β]` (`s{α},{β}_{pq}` once `f ≥ 10`).

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::algebra::StructureTable;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::triangular::{generator_labels, pair_code, triangular, PairIndex};

mod relations;
mod sample;
mod theorem;

pub use relations::{
    derive_relations, LinearFamily, ResidueReport, FAMILY_COLUMN_1N, FAMILY_OFF_SUPERDIAGONAL,
    FAMILY_ROW_12, FAMILY_SQUARES, FAMILY_SUPERDIAGONAL, SAMPLE_POINTS,
};
pub use sample::ExtensionSampler;
pub use theorem::{
    maximal_rank_report, perturbation_detected, verify_eq_3, verify_theorem_3_4, MaximalRankReport,
    Normalization,
};

/// Largest `n` accepted for fully symbolic tables.
pub const SYMBOLIC_MAX_N: usize = 8;

pub fn a_name(n: usize, alpha: usize, row: (usize, usize), col: (usize, usize)) -> String {
    format!(
        "a{alpha}_{}_{}",
        pair_code(n, row.0, row.1),
        pair_code(n, col.0, col.1)
    )
}

pub fn b_name(n: usize, alpha: usize, row: (usize, usize), col: (usize, usize)) -> String {
    format!(
        "b{alpha}_{}_{}",
        pair_code(n, row.0, row.1),
        pair_code(n, col.0, col.1)
    )
}

pub fn sigma_name(n: usize, f: usize, alpha: usize, beta: usize, col: (usize, usize)) -> String {
    let code = pair_code(n, col.0, col.1);
    if f >= 10 {
        format!("s{alpha},{beta}_{code}")
    } else {
        format!("s{alpha}{beta}_{code}")
    }
}

/// What an indeterminate of the generic table stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarKind {
    /// Entry of the right action `[N_ij, X^α]`.
    Right {
        alpha: usize,
        row: (usize, usize),
        col: (usize, usize),
    },
    /// Entry of the left action `[X^α, N_ij]`.
    Left {
        alpha: usize,
        row: (usize, usize),
        col: (usize, usize),
    },
    /// Coefficient of `[X^α, X^β]`.
    Square {
        alpha: usize,
        beta: usize,
        col: (usize, usize),
    },
}

impl VarKind {
    /// The single generator the variable belongs to, `None` for `[X^α, X^β]`
    /// with `α ≠ β`.
    pub fn generator(&self) -> Option<usize> {
        match *self {
            VarKind::Right { alpha, .. } | VarKind::Left { alpha, .. } => Some(alpha),
            VarKind::Square { alpha, beta, .. } => (alpha == beta).then_some(alpha),
        }
    }
}

pub(crate) fn check_shape(n: usize, f: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::OutOfRange(format!("T(n) needs n >= 3, got {n}")));
    }
    if f == 0 || f > n - 1 {
        return Err(Error::InvalidParameters(format!(
            "f = {f} outside 1..={} for n = {n}",
            n - 1
        )));
    }
    Ok(())
}

fn sum_of(vars: impl IntoIterator<Item = String>) -> Poly {
    let mut p = Poly::zero();
    for v in vars {
        p.add_assign_ref(&Poly::var(&v));
    }
    p
}

/// Names of the superdiagonal diagonal entries `a^α_{p(p+1),p(p+1)}`.
pub fn diagonal_names(n: usize, alpha: usize) -> Vec<String> {
    (1..n)
        .map(|p| a_name(n, alpha, (p, p + 1), (p, p + 1)))
        .collect()
}

/// `Σ_p a^α_{p(p+1),p(p+1)}`, the eigenvalue of `R_{X^α}` on `N_1n`.
pub fn trace_poly(n: usize, alpha: usize) -> Poly {
    sum_of(diagonal_names(n, alpha))
}

/// Column of the single off-diagonal entry in row `N_{i(i+1)}` of the right
/// action. At `n = 3` the last row has none: `N_12` precedes `N_23`.
fn off_diagonal_column(n: usize, i: usize) -> Option<(usize, usize)> {
    if i == 1 {
        Some((2, n))
    } else if i < n - 1 {
        Some((1, n))
    } else if n > 3 {
        Some((1, n - 1))
    } else {
        None
    }
}

/// Right action of `X^α` in the constrained shape: rows in pair order,
/// each a sparse list of `(column, coefficient)`.
pub(crate) fn right_action(n: usize, alpha: usize) -> Vec<Vec<(usize, Poly)>> {
    let idx = PairIndex::new(n);
    idx.pairs()
        .iter()
        .map(|&(i, j)| {
            let mut row = Vec::new();
            if j == i + 1 {
                row.push((idx.at(i, j), Poly::var(&a_name(n, alpha, (i, j), (i, j)))));
                if let Some(col) = off_diagonal_column(n, i) {
                    row.push((
                        idx.at(col.0, col.1),
                        Poly::var(&a_name(n, alpha, (i, j), col)),
                    ));
                }
            } else {
                let diag = sum_of((i..j).map(|p| a_name(n, alpha, (p, p + 1), (p, p + 1))));
                row.push((idx.at(i, j), diag));
            }
            row.sort_by_key(|e| e.0);
            row
        })
        .collect()
}

fn assemble(
    n: usize,
    f: usize,
    left: impl Fn(usize, (usize, usize), &[(usize, Poly)]) -> Vec<(usize, Poly)>,
    square: impl Fn(usize, usize) -> Vec<(usize, Poly)>,
) -> Result<StructureTable<Poly>> {
    let idx = PairIndex::new(n);
    let dn = idx.len();
    let base = triangular(n)?.to_poly();
    let mut t = base.with_abelian(&generator_labels(f));
    for alpha in 1..=f {
        let x = dn + alpha - 1;
        let right = right_action(n, alpha);
        for (r, &(i, j)) in idx.pairs().iter().enumerate() {
            t.set(r, x, right[r].clone())?;
            t.set(x, r, left(alpha, (i, j), &right[r]))?;
        }
        for beta in 1..=f {
            t.set(x, dn + beta - 1, square(alpha, beta))?;
        }
    }
    Ok(t)
}

/// The symbolic table with generic left action and generator products.
#[derive(Clone, Debug)]
pub struct GenericExtension {
    pub n: usize,
    pub f: usize,
    pub table: StructureTable<Poly>,
    pub vars: BTreeMap<String, VarKind>,
}

impl GenericExtension {
    pub fn new(n: usize, f: usize) -> Result<Self> {
        check_shape(n, f)?;
        if n > SYMBOLIC_MAX_N {
            return Err(Error::Unsupported(format!(
                "symbolic extensions are limited to n <= {SYMBOLIC_MAX_N}"
            )));
        }
        let idx = PairIndex::new(n);
        let mut vars = BTreeMap::new();
        for alpha in 1..=f {
            for (r, &row) in idx.pairs().iter().enumerate() {
                for (c, _) in &right_action(n, alpha)[r] {
                    let col = idx.pairs()[*c];
                    if c == &r && row.1 > row.0 + 1 {
                        continue;
                    }
                    vars.insert(
                        a_name(n, alpha, row, col),
                        VarKind::Right { alpha, row, col },
                    );
                }
                for &col in idx.pairs() {
                    vars.insert(
                        b_name(n, alpha, row, col),
                        VarKind::Left { alpha, row, col },
                    );
                }
            }
            for beta in 1..=f {
                for &col in idx.pairs() {
                    vars.insert(
                        sigma_name(n, f, alpha, beta, col),
                        VarKind::Square { alpha, beta, col },
                    );
                }
            }
        }
        let table = assemble(
            n,
            f,
            |alpha, row, _| {
                idx.pairs()
                    .iter()
                    .enumerate()
                    .map(|(c, &col)| (c, Poly::var(&b_name(n, alpha, row, col))))
                    .collect()
            },
            |alpha, beta| {
                idx.pairs()
                    .iter()
                    .enumerate()
                    .map(|(c, &col)| (c, Poly::var(&sigma_name(n, f, alpha, beta, col))))
                    .collect()
            },
        )?;
        Ok(GenericExtension { n, f, table, vars })
    }

    /// The relations expressing the left action and generator products
    /// through the right action, as a substitution. Left-action entries in
    /// column `1n` of superdiagonal rows and `s_{1n}` stay free.
    pub fn stated_substitution(&self) -> HashMap<String, Poly> {
        let n = self.n;
        let idx = PairIndex::new(n);
        let one_n = (1, n);
        let mut map = HashMap::new();
        for alpha in 1..=self.f {
            let right = right_action(n, alpha);
            for (r, &row) in idx.pairs().iter().enumerate() {
                let superdiagonal = row.1 == row.0 + 1;
                for (c, &col) in idx.pairs().iter().enumerate() {
                    if superdiagonal && col == one_n {
                        continue;
                    }
                    let a = right[r]
                        .iter()
                        .find(|e| e.0 == c)
                        .map_or_else(Poly::zero, |e| e.1.clone());
                    map.insert(b_name(n, alpha, row, col), -a);
                }
            }
            for beta in 1..=self.f {
                for &col in idx.pairs() {
                    if col != one_n {
                        map.insert(sigma_name(n, self.f, alpha, beta, col), Poly::zero());
                    }
                }
            }
        }
        map
    }
}

/// The generic extension as a polynomial table.
pub fn generic_extension(n: usize, f: usize) -> Result<StructureTable<Poly>> {
    GenericExtension::new(n, f).map(|g| g.table)
}

/// Master-table parameters of one generator, in a fixed order.
pub fn generator_parameter_names(n: usize, alpha: usize) -> Vec<String> {
    let mut names = diagonal_names(n, alpha);
    for i in 1..n {
        if let Some(col) = off_diagonal_column(n, i) {
            names.push(a_name(n, alpha, (i, i + 1), col));
        }
    }
    for i in 1..n {
        names.push(b_name(n, alpha, (i, i + 1), (1, n)));
    }
    names
}

/// All master-table parameter names: per generator, then `s{α}{β}_{1n}`.
pub fn master_parameter_names(n: usize, f: usize) -> Vec<String> {
    let mut names: Vec<String> = (1..=f)
        .flat_map(|alpha| generator_parameter_names(n, alpha))
        .collect();
    for alpha in 1..=f {
        for beta in 1..=f {
            names.push(sigma_name(n, f, alpha, beta, (1, n)));
        }
    }
    names
}

/// The master family as a polynomial table in [`master_parameter_names`].
pub fn master_symbolic(n: usize, f: usize) -> Result<StructureTable<Poly>> {
    check_shape(n, f)?;
    let idx = PairIndex::new(n);
    let one_n = idx.at(1, n);
    assemble(
        n,
        f,
        |alpha, row, right| {
            let mut left: Vec<(usize, Poly)> = right
                .iter()
                .filter(|(c, _)| *c != one_n || row.1 > row.0 + 1)
                .map(|(c, p)| (*c, -p))
                .collect();
            if row.1 == row.0 + 1 {
                left.push((one_n, Poly::var(&b_name(n, alpha, row, (1, n)))));
            }
            left
        },
        |alpha, beta| vec![(one_n, Poly::var(&sigma_name(n, f, alpha, beta, (1, n))))],
    )
}

/// A product of two linear forms that must vanish.
#[derive(Clone, Debug, PartialEq)]
pub struct Restriction {
    pub alpha: usize,
    pub factors: [Poly; 2],
}

impl Restriction {
    pub fn product(&self) -> Poly {
        &self.factors[0] * &self.factors[1]
    }

    pub fn label(&self) -> String {
        let show = |p: &Poly| {
            if p.num_terms() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        format!("{}*{}", show(&self.factors[0]), show(&self.factors[1]))
    }

    fn substitute(&self, map: &HashMap<String, Poly>) -> Restriction {
        Restriction {
            alpha: self.alpha,
            factors: [
                self.factors[0].substitute(map),
                self.factors[1].substitute(map),
            ],
        }
    }
}

/// `a_{12,12} b_{12,1n}`, `a_{i(i+1),i(i+1)}(a_{i(i+1),1n} + b_{i(i+1),1n})`
/// for `2 ≤ i ≤ n-2`, and `a_{(n-1)n,(n-1)n} b_{(n-1)n,1n}`, per generator.
pub fn stated_restrictions(n: usize, f: usize) -> Vec<Restriction> {
    let mut out = Vec::new();
    for alpha in 1..=f {
        let diag = |i: usize| Poly::var(&a_name(n, alpha, (i, i + 1), (i, i + 1)));
        let b = |i: usize| Poly::var(&b_name(n, alpha, (i, i + 1), (1, n)));
        out.push(Restriction {
            alpha,
            factors: [diag(1), b(1)],
        });
        for i in 2..=n.saturating_sub(2) {
            let a = Poly::var(&a_name(n, alpha, (i, i + 1), (1, n)));
            out.push(Restriction {
                alpha,
                factors: [diag(i), &a + &b(i)],
            });
        }
        out.push(Restriction {
            alpha,
            factors: [diag(n - 1), b(n - 1)],
        });
    }
    out
}

/// Linear forms that all vanish exactly when the extension is skew:
/// `b_{12,1n}`, `a_{i(i+1),1n} + b_{i(i+1),1n}`, `b_{(n-1)n,1n}`,
/// `s^{αα}` and `s^{αβ} + s^{βα}`.
pub fn skew_witnesses(n: usize, f: usize) -> Vec<Poly> {
    let mut out = Vec::new();
    for alpha in 1..=f {
        let b = |i: usize| Poly::var(&b_name(n, alpha, (i, i + 1), (1, n)));
        out.push(b(1));
        for i in 2..=n.saturating_sub(2) {
            out.push(&Poly::var(&a_name(n, alpha, (i, i + 1), (1, n))) + &b(i));
        }
        out.push(b(n - 1));
    }
    for alpha in 1..=f {
        for beta in alpha..=f {
            let s = |x, y| Poly::var(&sigma_name(n, f, x, y, (1, n)));
            if alpha == beta {
                out.push(s(alpha, alpha));
            } else {
                out.push(&s(alpha, beta) + &s(beta, alpha));
            }
        }
    }
    out
}

/// Concrete parameters of a member of the master family; omitted names are 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionSpec {
    n: usize,
    f: usize,
    values: BTreeMap<String, Scalar>,
}

impl ExtensionSpec {
    pub fn new(n: usize, f: usize) -> Result<Self> {
        check_shape(n, f)?;
        let values = master_parameter_names(n, f)
            .into_iter()
            .map(|name| (name, Scalar::zero()))
            .collect();
        Ok(ExtensionSpec { n, f, values })
    }

    pub fn from_pairs<'a>(
        n: usize,
        f: usize,
        pairs: impl IntoIterator<Item = (&'a str, Scalar)>,
    ) -> Result<Self> {
        let mut spec = ExtensionSpec::new(n, f)?;
        for (name, v) in pairs {
            spec.set(name, v)?;
        }
        Ok(spec)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn set(&mut self, name: &str, value: Scalar) -> Result<()> {
        match self.values.get_mut(name) {
            Some(slot) => {
                *slot = value;
                Ok(())
            }
            None => Err(Error::InvalidParameters(format!(
                "unknown parameter {name:?} for n = {}, f = {}",
                self.n, self.f
            ))),
        }
    }

    pub fn get(&self, name: &str) -> Scalar {
        self.values.get(name).cloned().unwrap_or_default()
    }

    pub fn values(&self) -> &BTreeMap<String, Scalar> {
        &self.values
    }

    pub fn assignment(&self) -> HashMap<String, Scalar> {
        self.values
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }

    /// `(a^α_{12,12}, …, a^α_{(n-1)n,(n-1)n})`.
    pub fn diagonal(&self, alpha: usize) -> Vec<Scalar> {
        diagonal_names(self.n, alpha)
            .iter()
            .map(|v| self.get(v))
            .collect()
    }

    pub fn trace(&self, alpha: usize) -> Scalar {
        let mut s = Scalar::zero();
        for d in self.diagonal(alpha) {
            s += &d;
        }
        s
    }
}

impl ExtensionSpec {
    /// Reads the parameters off a table in the master basis and checks that
    /// the table is exactly the master member they describe.
    pub fn from_table(t: &StructureTable<Scalar>, n: usize, f: usize) -> Result<Self> {
        let mut spec = ExtensionSpec::new(n, f)?;
        let idx = PairIndex::new(n);
        if t.dim() != idx.len() + f {
            return Err(Error::DimensionMismatch {
                expected: idx.len() + f,
                found: t.dim(),
            });
        }
        let one_n = idx.at(1, n);
        for alpha in 1..=f {
            let x = idx.len() + alpha - 1;
            for i in 1..n {
                let r = idx.at(i, i + 1);
                spec.set(&a_name(n, alpha, (i, i + 1), (i, i + 1)), t.coeff(r, x, r))?;
                if let Some(col) = off_diagonal_column(n, i) {
                    let v = t.coeff(r, x, idx.at(col.0, col.1));
                    spec.set(&a_name(n, alpha, (i, i + 1), col), v)?;
                }
                spec.set(&b_name(n, alpha, (i, i + 1), (1, n)), t.coeff(x, r, one_n))?;
            }
            for beta in 1..=f {
                let y = idx.len() + beta - 1;
                spec.set(&sigma_name(n, f, alpha, beta, (1, n)), t.coeff(x, y, one_n))?;
            }
        }
        let rebuilt = master_symbolic(n, f)?.eval(&spec.assignment())?;
        if &rebuilt != t {
            return Err(Error::InvalidParameters(
                "table is not a member of the master family in this basis".into(),
            ));
        }
        Ok(spec)
    }
}

/// Builds the concrete member of the master family after checking the
/// product restrictions, the skew dichotomy forced by a generator acting
/// nontrivially on `N_1n`, and finally the Leibniz identity itself.
pub fn master_extension(spec: &ExtensionSpec) -> Result<StructureTable<Scalar>> {
    let (n, f) = (spec.n, spec.f);
    let values = spec.assignment();
    for r in stated_restrictions(n, f) {
        let v = r.product().eval(&values)?;
        if !v.is_zero() {
            return Err(Error::RestrictionViolated(format!(
                "{} = {v}, must vanish",
                r.label()
            )));
        }
    }
    if let Some(gamma) = (1..=f).find(|&g| !spec.trace(g).is_zero()) {
        for w in skew_witnesses(n, f) {
            let v = w.eval(&values)?;
            if !v.is_zero() {
                return Err(Error::RestrictionViolated(format!(
                    "X{gamma} acts on N{} with eigenvalue {}, which forces {w} = 0 (got {v})",
                    pair_code(n, 1, n),
                    spec.trace(gamma),
                )));
            }
        }
    }
    let table = master_symbolic(n, f)?.eval(&values)?;
    if let Some(r) = table.leibniz_residues().first() {
        let (i, j, k) = r.triple;
        let l = table.labels();
        return Err(Error::RestrictionViolated(format!(
            "Leibniz identity fails on ({}, {}, {})",
            l[i], l[j], l[k]
        )));
    }
    Ok(table)
}

/// Keeps the first occurrence of each polynomial up to a nonzero scalar.
pub(crate) fn dedup_monic(polys: impl IntoIterator<Item = Poly>) -> Vec<Poly> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for p in polys {
        if p.is_zero() {
            continue;
        }
        let m = monic(&p);
        if seen.insert(m.clone()) {
            out.push(m);
        }
    }
    out
}

/// Scales so that the leading coefficient is 1.
pub(crate) fn monic(p: &Poly) -> Poly {
    match p.terms().next_back() {
        Some((_, c)) => p.scale(&c.inv().expect("nonzero leading coefficient")),
        None => Poly::zero(),
    }
}
