//! Re-deriving the relations forced by the Leibniz identity on the generic
//! extension.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{
    dedup_monic, diagonal_names, skew_witnesses, stated_restrictions, trace_poly, GenericExtension,
    Restriction, VarKind,
};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::poly::{Monomial, Poly};
use crate::scalar::Scalar;

/// Random points used per residual polynomial.
pub const SAMPLE_POINTS: usize = 500;

/// A named group of stated linear relations and how many of them the
/// residues imply.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFamily {
    pub name: String,
    pub relations: Vec<Poly>,
    pub implied: usize,
}

impl LinearFamily {
    pub fn holds(&self) -> bool {
        self.implied == self.relations.len()
    }
}

/// Outcome of [`derive_relations`].
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueReport {
    pub n: usize,
    pub f: usize,
    pub seed: u64,
    /// Nonzero residues of the generic table, by basis labels.
    pub residues: Vec<([String; 3], Vec<Poly>)>,
    /// Linear relations implied by the residues, one per pivot.
    pub derived_linear: Vec<Poly>,
    pub families: Vec<LinearFamily>,
    /// Stated linear relations not implied by the residues.
    pub missing_linear: Vec<Poly>,
    /// Implied linear relations outside the stated ones.
    pub extra_linear: Vec<Poly>,
    /// Residue components after substituting the stated linear relations.
    pub residual: Vec<Poly>,
    /// `trace(X^γ) · w` outside the span of the residual, for skew witnesses `w`.
    pub dichotomy_failures: Vec<Poly>,
    /// Residual polynomials once every generator is traceless.
    pub derived_quadratic: Vec<Poly>,
    /// The stated product restrictions on the same branch.
    pub stated_quadratic: Vec<Poly>,
    pub unimplied_restrictions: Vec<Poly>,
    /// Single-generator parts of residuals not spanned by the restrictions.
    pub unexplained: Vec<Poly>,
    /// Relations mixing two generators, which the stated set does not cover.
    pub cross_generator: Vec<Poly>,
    pub sample_points: usize,
    pub sample_failures: usize,
}

impl ResidueReport {
    pub fn linear_relations_match(&self) -> bool {
        self.missing_linear.is_empty() && self.extra_linear.is_empty()
    }

    pub fn dichotomy_holds(&self) -> bool {
        self.dichotomy_failures.is_empty()
    }

    pub fn is_consistent(&self) -> bool {
        self.linear_relations_match()
            && self.dichotomy_holds()
            && self.unimplied_restrictions.is_empty()
            && self.unexplained.is_empty()
            && self.sample_failures == 0
    }

    pub fn family(&self, name: &str) -> Option<&LinearFamily> {
        self.families.iter().find(|f| f.name == name)
    }
}

/// Family names used in [`ResidueReport::families`].
pub const FAMILY_ROW_12: &str = "left action on N12";
pub const FAMILY_SUPERDIAGONAL: &str = "left action on the other superdiagonal elements";
pub const FAMILY_OFF_SUPERDIAGONAL: &str =
    "left action off the superdiagonal, columns other than 1n";
pub const FAMILY_COLUMN_1N: &str = "left action off the superdiagonal, column 1n";
pub const FAMILY_SQUARES: &str = "generator products outside N1n";

/// Span of polynomials over monomial coordinates.
pub(crate) struct PolySpan {
    index: HashMap<Monomial, usize>,
    echelon: Echelon,
}

impl PolySpan {
    pub(crate) fn new(gens: &[Poly]) -> Self {
        let mut index = HashMap::new();
        for p in gens {
            for (m, _) in p.terms() {
                let k = index.len();
                index.entry(m.clone()).or_insert(k);
            }
        }
        let mut echelon = Echelon::new(index.len());
        for p in gens {
            let v = Self::coords(&index, p).expect("indexed");
            echelon.insert(v);
        }
        PolySpan { index, echelon }
    }

    fn coords(index: &HashMap<Monomial, usize>, p: &Poly) -> Option<SparseVec> {
        let mut v: SparseVec = p
            .terms()
            .map(|(m, c)| index.get(m).map(|&k| (k, c.clone())))
            .collect::<Option<_>>()?;
        v.sort_by_key(|e| e.0);
        Some(v)
    }

    pub(crate) fn contains(&self, p: &Poly) -> bool {
        Self::coords(&self.index, p).is_some_and(|v| self.echelon.contains(v))
    }
}

/// Residual polynomials of a generic extension after the stated
/// substitution, shared with the maximal-rank check.
pub(crate) struct Reduction {
    pub generic: GenericExtension,
    pub residues: Vec<([String; 3], Vec<Poly>)>,
    pub components: Vec<Poly>,
    pub residual: Vec<Poly>,
}

impl Reduction {
    pub(crate) fn new(n: usize, f: usize) -> Result<Self> {
        let generic = GenericExtension::new(n, f)?;
        let labels = generic.table.labels().to_vec();
        let raw = generic.table.leibniz_residues();
        let residues: Vec<([String; 3], Vec<Poly>)> = raw
            .iter()
            .map(|r| {
                let (i, j, k) = r.triple;
                (
                    [labels[i].clone(), labels[j].clone(), labels[k].clone()],
                    r.value.clone(),
                )
            })
            .collect();
        let components = dedup_monic(raw.into_iter().flat_map(|r| r.value));
        let stated = generic.stated_substitution();
        let residual = dedup_monic(
            components
                .par_iter()
                .map(|p| p.substitute(&stated))
                .collect::<Vec<_>>(),
        );
        Ok(Reduction {
            generic,
            residues,
            components,
            residual,
        })
    }
}

/// Column order for linear relations: left-action and product unknowns
/// first so that they are solved for in terms of the right action.
fn variable_columns(generic: &GenericExtension) -> (Vec<String>, HashMap<String, usize>) {
    let mut names: Vec<String> = generic
        .vars
        .iter()
        .filter(|(_, k)| !matches!(k, VarKind::Right { .. }))
        .map(|(v, _)| v.clone())
        .collect();
    names.extend(
        generic
            .vars
            .iter()
            .filter(|(_, k)| matches!(k, VarKind::Right { .. }))
            .map(|(v, _)| v.clone()),
    );
    let cols = names
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), i))
        .collect();
    (names, cols)
}

fn linear_vector(p: &Poly, cols: &HashMap<String, usize>) -> SparseVec {
    let mut v: SparseVec = p
        .linear_coefficients()
        .into_iter()
        .map(|(name, c)| (cols[name], c.clone()))
        .collect();
    v.sort_by_key(|e| e.0);
    v
}

fn linear_poly(v: &SparseVec, names: &[String]) -> Poly {
    let mut p = Poly::zero();
    for (k, c) in v {
        p.add_scaled(&Poly::var(&names[*k]), c);
    }
    p
}

/// Closes the set of linear relations under substitution: solve the linear
/// residue components, substitute, and repeat until no new relation appears.
fn linear_fixpoint(
    components: &[Poly],
    names: &[String],
    cols: &HashMap<String, usize>,
) -> Vec<SparseVec> {
    let mut echelon = Echelon::new(names.len());
    let mut current: Vec<Poly> = components.to_vec();
    loop {
        let mut grew = false;
        for p in current.iter().filter(|p| p.is_linear_form()) {
            grew |= echelon.insert(linear_vector(p, cols));
        }
        if !grew {
            break;
        }
        let rows = echelon.clone().into_rref();
        let subst: HashMap<String, Poly> = rows
            .iter()
            .map(|r| {
                let pivot = r[0].0;
                let rest: SparseVec = r[1..].iter().map(|(k, c)| (*k, -c)).collect();
                (names[pivot].clone(), linear_poly(&rest, names))
            })
            .collect();
        current = components
            .par_iter()
            .map(|p| p.substitute(&subst))
            .filter(|p| !p.is_zero())
            .collect();
    }
    echelon.into_rref()
}

/// Stated linear relations grouped by family, as linear forms `b + a`, `s`.
fn stated_families(generic: &GenericExtension) -> Vec<(String, Vec<Poly>)> {
    let n = generic.n;
    let stated = generic.stated_substitution();
    let mut groups: BTreeMap<usize, Vec<Poly>> = BTreeMap::new();
    for (name, kind) in &generic.vars {
        let Some(value) = stated.get(name) else {
            continue;
        };
        let group = match kind {
            VarKind::Left { row, col, .. } => {
                if *row == (1, 2) {
                    0
                } else if row.1 == row.0 + 1 {
                    1
                } else if *col != (1, n) {
                    2
                } else {
                    3
                }
            }
            VarKind::Square { .. } => 4,
            VarKind::Right { .. } => continue,
        };
        groups
            .entry(group)
            .or_default()
            .push(&Poly::var(name) - value);
    }
    let titles = [
        FAMILY_ROW_12,
        FAMILY_SUPERDIAGONAL,
        FAMILY_OFF_SUPERDIAGONAL,
        FAMILY_COLUMN_1N,
        FAMILY_SQUARES,
    ];
    titles
        .iter()
        .enumerate()
        .map(|(g, t)| (t.to_string(), groups.remove(&g).unwrap_or_default()))
        .collect()
}

/// Substitution putting every generator on the traceless branch.
pub(crate) fn traceless_substitution(n: usize, f: usize) -> HashMap<String, Poly> {
    (1..=f)
        .map(|alpha| {
            let names = diagonal_names(n, alpha);
            let last = names.last().expect("n >= 3").clone();
            let mut rest = Poly::zero();
            for v in &names[..names.len() - 1] {
                rest.sub_assign_ref(&Poly::var(v));
            }
            (last, rest)
        })
        .collect()
}

fn generator_of(name: &str, generic: &GenericExtension) -> Option<usize> {
    generic.vars.get(name).and_then(VarKind::generator)
}

/// Splits `p` into its single-generator parts and the mixed remainder.
fn split_by_generator(p: &Poly, generic: &GenericExtension) -> (BTreeMap<usize, Poly>, Poly) {
    let mut parts: BTreeMap<usize, Poly> = BTreeMap::new();
    let mut cross = Poly::zero();
    for (m, c) in p.terms() {
        let owners: HashSet<Option<usize>> =
            m.factors().map(|(v, _)| generator_of(v, generic)).collect();
        let term = Poly::term(c.clone(), m.clone());
        match owners.iter().next() {
            Some(Some(alpha)) if owners.len() == 1 => {
                parts.entry(*alpha).or_default().add_assign_ref(&term);
            }
            None => parts.entry(0).or_default().add_assign_ref(&term),
            _ => cross.add_assign_ref(&term),
        }
    }
    (parts, cross)
}

/// The free diagonal entries of `X^α` on the branch: the right action is
/// upper triangular, so `X^α` is nilpotent exactly when they all vanish.
fn localizers(n: usize, alpha: usize) -> Vec<Poly> {
    let names = diagonal_names(n, alpha);
    names[..n - 2].iter().map(|v| Poly::var(v)).collect()
}

/// Monomials of degree at most `d` in `vars`, as polynomials.
fn monomials_up_to(vars: &[String], d: u32) -> Vec<Poly> {
    let mut out = vec![Poly::one()];
    let mut layer = vec![(Poly::one(), 0usize)];
    for _ in 0..d {
        let mut next = Vec::new();
        for (m, start) in &layer {
            for (k, v) in vars.iter().enumerate().skip(*start) {
                next.push((m * &Poly::var(v), k));
            }
        }
        out.extend(next.iter().map(|(m, _)| m.clone()));
        layer = next;
    }
    out
}

/// Membership of `p` in the ideal of `gens` away from the zero sets of
/// `local`: `g·p` must lie in the span of `m·q` for every `g` in `local`.
struct LocalizedIdeal {
    span: PolySpan,
    local: Vec<Poly>,
}

impl LocalizedIdeal {
    fn new(gens: &[Poly], local: Vec<Poly>, vars: &[String]) -> Self {
        let d = local.iter().filter_map(Poly::degree).max().unwrap_or(0);
        let multipliers = monomials_up_to(vars, d);
        let products: Vec<Poly> = gens
            .iter()
            .flat_map(|q| multipliers.iter().map(move |m| m * q))
            .collect();
        LocalizedIdeal {
            span: PolySpan::new(&products),
            local,
        }
    }

    fn contains(&self, p: &Poly) -> bool {
        !self.local.is_empty() && self.local.iter().all(|g| self.span.contains(&(g * p)))
    }
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::ratio(rng.gen_range(-30..=30), rng.gen_range(1..=7))
}

/// A random point on the common zero set of the restrictions, found by
/// zeroing one factor of each product and rejecting inconsistent choices.
fn point_on_restrictions(
    vars: &[String],
    restrictions: &[Restriction],
    rng: &mut ChaCha8Rng,
) -> Option<HashMap<String, Scalar>> {
    for _ in 0..200 {
        let mut point: HashMap<String, Scalar> = vars
            .iter()
            .map(|v| (v.clone(), random_scalar(rng)))
            .collect();
        for r in restrictions {
            let factor = &r.factors[rng.gen_range(0..2)];
            let coeffs = factor.linear_coefficients();
            if coeffs.is_empty() {
                continue;
            }
            let (v, c) = coeffs[rng.gen_range(0..coeffs.len())];
            let (v, c) = (v.to_string(), c.clone());
            point.insert(v.clone(), Scalar::zero());
            let rest = factor.eval(&point).ok()?;
            point.insert(v, -&rest.checked_div(&c).ok()?);
        }
        let on = restrictions
            .iter()
            .all(|r| r.product().eval(&point).is_ok_and(|x| x.is_zero()));
        if on {
            return Some(point);
        }
    }
    None
}

/// Re-derives the relations on the generic extension of `T(n)` by `f`
/// generators and compares them with the stated linear relations and
/// product restrictions.
pub fn derive_relations(n: usize, f: usize, seed: u64) -> Result<ResidueReport> {
    if !(3..=6).contains(&n) {
        return Err(Error::Unsupported(format!(
            "relation derivation runs for n in 3..=6, got {n}"
        )));
    }
    let red = Reduction::new(n, f)?;
    let generic = &red.generic;
    let (names, cols) = variable_columns(generic);

    // linear relations
    let derived_rows = linear_fixpoint(&red.components, &names, &cols);
    let mut derived_echelon = Echelon::new(names.len());
    for r in &derived_rows {
        derived_echelon.insert(r.clone());
    }
    let derived_linear: Vec<Poly> = derived_rows
        .iter()
        .map(|r| linear_poly(r, &names))
        .collect();
    let stated_groups = stated_families(generic);
    let mut stated_echelon = Echelon::new(names.len());
    let mut families = Vec::new();
    let mut missing_linear = Vec::new();
    for (name, relations) in stated_groups {
        let mut implied = 0;
        for rel in &relations {
            let v = linear_vector(rel, &cols);
            stated_echelon.insert(v.clone());
            if derived_echelon.contains(v) {
                implied += 1;
            } else {
                missing_linear.push(rel.clone());
            }
        }
        families.push(LinearFamily {
            name,
            relations,
            implied,
        });
    }
    let extra_linear: Vec<Poly> = derived_rows
        .iter()
        .filter(|r| !stated_echelon.contains((*r).clone()))
        .map(|r| linear_poly(r, &names))
        .collect();

    // dichotomy: a generator acting on N_1n forces every skew witness to vanish
    let residual_span = PolySpan::new(&red.residual);
    let witnesses = skew_witnesses(n, f);
    let mut dichotomy_failures = Vec::new();
    for gamma in 1..=f {
        let t = trace_poly(n, gamma);
        for w in &witnesses {
            let test = &t * w;
            if !residual_span.contains(&test) {
                dichotomy_failures.push(test);
            }
        }
    }

    // traceless branch
    let branch = traceless_substitution(n, f);
    let derived_quadratic = dedup_monic(
        red.residual
            .par_iter()
            .map(|p| p.substitute(&branch))
            .collect::<Vec<_>>(),
    );
    let restrictions: Vec<Restriction> = stated_restrictions(n, f)
        .iter()
        .map(|r| r.substitute(&branch))
        .collect();
    let stated_quadratic: Vec<Poly> = restrictions.iter().map(Restriction::product).collect();
    // membership is checked on the non-nilpotent locus of each generator
    let local: Vec<Vec<Poly>> = (1..=f).map(|alpha| localizers(n, alpha)).collect();
    let vars: Vec<String> = derived_quadratic
        .iter()
        .chain(&stated_quadratic)
        .flat_map(|p| p.variables())
        .map(|v| v.to_string())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let branch_span = PolySpan::new(&derived_quadratic);
    let mut unimplied_restrictions = Vec::new();
    for r in &restrictions {
        let q = r.product();
        if q.is_zero() || branch_span.contains(&q) {
            continue;
        }
        let ideal = LocalizedIdeal::new(&derived_quadratic, local[r.alpha - 1].clone(), &vars);
        if !ideal.contains(&q) {
            unimplied_restrictions.push(q);
        }
    }
    let stated_span = PolySpan::new(&stated_quadratic);
    let mut localized: BTreeMap<usize, LocalizedIdeal> = BTreeMap::new();
    let mut unexplained = Vec::new();
    let mut cross = Vec::new();
    let mut single_parts = Vec::with_capacity(derived_quadratic.len());
    for r in &derived_quadratic {
        let (parts, mixed) = split_by_generator(r, generic);
        for (alpha, p) in &parts {
            if p.is_zero() || stated_span.contains(p) {
                continue;
            }
            let explained = *alpha > 0
                && localized
                    .entry(*alpha)
                    .or_insert_with(|| {
                        LocalizedIdeal::new(&stated_quadratic, local[alpha - 1].clone(), &vars)
                    })
                    .contains(p);
            if !explained {
                unexplained.push(p.clone());
            }
        }
        single_parts.push(r - &mixed);
        cross.push(mixed);
    }
    let unexplained = dedup_monic(unexplained);
    let cross_generator = dedup_monic(cross);

    // seeded sampling on the zero set of the restrictions, away from
    // nilpotent generators
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample_points = 0;
    let mut failing = vec![false; single_parts.len()];
    for _ in 0..20 * SAMPLE_POINTS {
        if sample_points == SAMPLE_POINTS {
            break;
        }
        let Some(point) = point_on_restrictions(&vars, &restrictions, &mut rng) else {
            continue;
        };
        let nilpotent_generator = local.iter().any(|gs| {
            gs.iter().all(|g| {
                g.partial_eval(&point)
                    .as_constant()
                    .is_some_and(|c| c.is_zero())
            })
        });
        if nilpotent_generator {
            continue;
        }
        sample_points += 1;
        for (k, p) in single_parts.iter().enumerate() {
            if !p.eval(&point)?.is_zero() {
                failing[k] = true;
            }
        }
    }
    let sample_failures = failing.iter().filter(|x| **x).count();

    Ok(ResidueReport {
        n,
        f,
        seed,
        residues: red.residues,
        derived_linear,
        families,
        missing_linear,
        extra_linear,
        residual: red.residual,
        dichotomy_failures,
        derived_quadratic,
        stated_quadratic,
        unimplied_restrictions,
        unexplained,
        cross_generator,
        sample_points,
        sample_failures,
    })
}
