//! Canonical forms of the non-Lie extensions of `T(4)` by one and by two
//! outer generators.
//!
//! Basis order is `N12, N23, N34, N13, N24, N14, X` (then `X2`).

use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{change_of_basis, BasisChange, StructureTable};
use crate::error::{Error, Result};
use crate::extensions::{master_extension, ExtensionSpec};
use crate::scalar::Scalar;

const N12: usize = 0;
const N23: usize = 1;
const N34: usize = 2;
const N13: usize = 3;
const N24: usize = 4;
const N14: usize = 5;
const X: usize = 6;
const X2: usize = 7;

/// Parameters of the one-generator family, named as in the master family.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct L41Params {
    pub a12_12: Scalar,
    pub a12_24: Scalar,
    pub b12_14: Scalar,
    pub a23_23: Scalar,
    pub a23_14: Scalar,
    pub b23_14: Scalar,
    pub a34_13: Scalar,
    pub b34_14: Scalar,
    pub s14: Scalar,
}

impl L41Params {
    pub const NAMES: [&'static str; 9] = [
        "a1_12_12", "a1_12_24", "b1_12_14", "a1_23_23", "a1_23_14", "b1_23_14", "a1_34_13",
        "b1_34_14", "s11_14",
    ];

    /// Values in [`L41Params::NAMES`] order.
    pub fn from_values(v: [Scalar; 9]) -> Self {
        let [a12_12, a12_24, b12_14, a23_23, a23_14, b23_14, a34_13, b34_14, s14] = v;
        L41Params {
            a12_12,
            a12_24,
            b12_14,
            a23_23,
            a23_14,
            b23_14,
            a34_13,
            b34_14,
            s14,
        }
    }

    pub fn from_ints(v: [i64; 9]) -> Self {
        Self::from_values(v.map(Scalar::from_int))
    }

    pub fn values(&self) -> [&Scalar; 9] {
        [
            &self.a12_12,
            &self.a12_24,
            &self.b12_14,
            &self.a23_23,
            &self.a23_14,
            &self.b23_14,
            &self.a34_13,
            &self.b34_14,
            &self.s14,
        ]
    }

    pub fn set(&mut self, name: &str, value: Scalar) -> Result<()> {
        let slot = match name {
            "a1_12_12" => &mut self.a12_12,
            "a1_12_24" => &mut self.a12_24,
            "b1_12_14" => &mut self.b12_14,
            "a1_23_23" => &mut self.a23_23,
            "a1_23_14" => &mut self.a23_14,
            "b1_23_14" => &mut self.b23_14,
            "a1_34_13" => &mut self.a34_13,
            "b1_34_14" => &mut self.b34_14,
            "s11_14" => &mut self.s14,
            _ => {
                return Err(Error::InvalidParameters(format!(
                    "unknown parameter {name:?}; expected one of {}",
                    Self::NAMES.join(", ")
                )))
            }
        };
        *slot = value;
        Ok(())
    }

    /// The member of the master family with `a_{34,34} = -(a_{12,12} + a_{23,23})`.
    pub fn to_spec(&self) -> ExtensionSpec {
        let mut spec = ExtensionSpec::new(4, 1).expect("n = 4, f = 1 is valid");
        for (name, v) in Self::NAMES.iter().zip(self.values()) {
            spec.set(name, v.clone())
                .expect("names are master parameters");
        }
        let a34 = -(&self.a12_12 + &self.a23_23);
        spec.set("a1_34_34", a34).expect("diagonal parameter");
        spec
    }

    /// Inverse of [`L41Params::to_spec`]; the spec must be traceless.
    pub fn from_spec(spec: &ExtensionSpec) -> Result<Self> {
        if spec.n() != 4 || spec.f() != 1 {
            return Err(Error::InvalidParameters("expected n = 4, f = 1".into()));
        }
        if !spec.trace(1).is_zero() {
            return Err(Error::InvalidParameters(
                "a1_34_34 must equal -(a1_12_12 + a1_23_23)".into(),
            ));
        }
        let mut p = L41Params::default();
        for name in Self::NAMES {
            p.set(name, spec.get(name))?;
        }
        Ok(p)
    }

    fn check(&self) -> Result<()> {
        if self.a12_12.is_zero() && self.a23_23.is_zero() {
            return Err(Error::InvalidParameters(
                "non-nilpotency requires (a1_12_12, a1_23_23) != (0, 0)".into(),
            ));
        }
        let restrictions = [
            ("a1_12_12*b1_12_14", &self.a12_12 * &self.b12_14),
            (
                "a1_23_23*(a1_23_14 + b1_23_14)",
                &self.a23_23 * &(&self.a23_14 + &self.b23_14),
            ),
            (
                "(a1_12_12 + a1_23_23)*b1_34_14",
                &(&self.a12_12 + &self.a23_23) * &self.b34_14,
            ),
        ];
        for (label, v) in restrictions {
            if !v.is_zero() {
                return Err(Error::RestrictionViolated(format!(
                    "{label} = {v}, must vanish"
                )));
            }
        }
        Ok(())
    }

    fn scaled(&self, c: &Scalar) -> Result<Self> {
        let k = c.inv()?;
        let k2 = &k * &k;
        let mut out = self.clone();
        for v in [
            &mut out.a12_12,
            &mut out.a12_24,
            &mut out.b12_14,
            &mut out.a23_23,
            &mut out.a23_14,
            &mut out.b23_14,
            &mut out.a34_13,
            &mut out.b34_14,
        ] {
            *v = &*v * &k;
        }
        out.s14 = &out.s14 * &k2;
        Ok(out)
    }
}

impl fmt::Display for L41Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, v)) in Self::NAMES.iter().zip(self.values()).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{name} = {v}")?;
        }
        Ok(())
    }
}

/// The one-generator extension of `T(4)` with the given parameters.
pub fn build_l41(p: &L41Params) -> Result<StructureTable<Scalar>> {
    p.check()?;
    master_extension(&p.to_spec())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormId {
    L1,
    L2,
    L3,
    L42,
}

impl FormId {
    pub const ALL: [FormId; 4] = [FormId::L1, FormId::L2, FormId::L3, FormId::L42];

    /// Residual parameter names, in the order of [`CanonicalForm::params`].
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            FormId::L1 => &["a12_24", "b12_14", "s14"],
            FormId::L2 => &["a23_14", "b23_14", "s14"],
            FormId::L3 => &["a23_23"],
            FormId::L42 => &["s11", "s12", "s21", "s22"],
        }
    }
}

impl fmt::Display for FormId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormId::L1 => "L1",
            FormId::L2 => "L2",
            FormId::L3 => "L3",
            FormId::L42 => "L42",
        })
    }
}

impl std::str::FromStr for FormId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FormId::ALL
            .into_iter()
            .find(|id| id.to_string() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown form {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CanonicalForm {
    L1 {
        a12_24: Scalar,
        b12_14: Scalar,
        s14: Scalar,
    },
    L2 {
        a23_14: Scalar,
        b23_14: Scalar,
        s14: Scalar,
    },
    L3 {
        a23_23: Scalar,
    },
    L42 {
        s11: Scalar,
        s12: Scalar,
        s21: Scalar,
        s22: Scalar,
    },
}

impl CanonicalForm {
    pub fn id(&self) -> FormId {
        match self {
            CanonicalForm::L1 { .. } => FormId::L1,
            CanonicalForm::L2 { .. } => FormId::L2,
            CanonicalForm::L3 { .. } => FormId::L3,
            CanonicalForm::L42 { .. } => FormId::L42,
        }
    }

    pub fn params(&self) -> Vec<(&'static str, Scalar)> {
        let values = match self {
            CanonicalForm::L1 {
                a12_24,
                b12_14,
                s14,
            } => vec![a12_24, b12_14, s14],
            CanonicalForm::L2 {
                a23_14,
                b23_14,
                s14,
            } => vec![a23_14, b23_14, s14],
            CanonicalForm::L3 { a23_23 } => vec![a23_23],
            CanonicalForm::L42 { s11, s12, s21, s22 } => vec![s11, s12, s21, s22],
        };
        self.id()
            .param_names()
            .iter()
            .copied()
            .zip(values.into_iter().cloned())
            .collect()
    }

    /// Builds a form from named parameters; omitted names are 0.
    pub fn from_params<'a>(
        id: FormId,
        params: impl IntoIterator<Item = (&'a str, Scalar)>,
    ) -> Result<Self> {
        let names = id.param_names();
        let mut v = vec![Scalar::zero(); names.len()];
        for (name, value) in params {
            let k = names.iter().position(|n| *n == name).ok_or_else(|| {
                Error::InvalidParameters(format!(
                    "unknown parameter {name:?} for {id}; expected one of {}",
                    names.join(", ")
                ))
            })?;
            v[k] = value;
        }
        let mut v = v.into_iter();
        let mut next = || v.next().expect("one value per name");
        Ok(match id {
            FormId::L1 => CanonicalForm::L1 {
                a12_24: next(),
                b12_14: next(),
                s14: next(),
            },
            FormId::L2 => CanonicalForm::L2 {
                a23_14: next(),
                b23_14: next(),
                s14: next(),
            },
            FormId::L3 => CanonicalForm::L3 { a23_23: next() },
            FormId::L42 => CanonicalForm::L42 {
                s11: next(),
                s12: next(),
                s21: next(),
                s22: next(),
            },
        })
    }

    fn check(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidParameters(format!("{}: {msg}", self.id())));
        match self {
            CanonicalForm::L1 { b12_14, s14, .. } if b12_14.is_zero() && s14.is_zero() => {
                fail("requires (b12_14, s14) != (0, 0)")
            }
            CanonicalForm::L2 {
                a23_14,
                b23_14,
                s14,
            } if (a23_14 + b23_14).is_zero() && s14.is_zero() => {
                fail("requires (a23_14 + b23_14, s14) != (0, 0)")
            }
            CanonicalForm::L3 { a23_23 } if (a23_23 * &(a23_23 + &Scalar::one())).is_zero() => {
                fail("requires (1 + a23_23)*a23_23 != 0")
            }
            CanonicalForm::L42 { s11, s12, s21, s22 }
                if s11.is_zero() && s22.is_zero() && (s12 + s21).is_zero() =>
            {
                fail("requires s11, s22 or s12 + s21 nonzero; otherwise the algebra is Lie")
            }
            _ => Ok(()),
        }
    }

    fn spec(&self) -> ExtensionSpec {
        let one = Scalar::one;
        let pairs: Vec<(&str, Scalar)> = match self.clone() {
            CanonicalForm::L1 {
                a12_24,
                b12_14,
                s14,
            } => vec![
                ("a1_23_23", one()),
                ("a1_34_34", -one()),
                ("a1_12_24", a12_24),
                ("b1_12_14", b12_14),
                ("s11_14", s14),
            ],
            CanonicalForm::L2 {
                a23_14,
                b23_14,
                s14,
            } => vec![
                ("a1_12_12", one()),
                ("a1_34_34", -one()),
                ("a1_23_14", a23_14),
                ("b1_23_14", b23_14),
                ("s11_14", s14),
            ],
            CanonicalForm::L3 { a23_23 } => vec![
                ("a1_12_12", one()),
                ("a1_34_34", -(&a23_23 + &one())),
                ("a1_23_23", a23_23),
                ("s11_14", one()),
            ],
            CanonicalForm::L42 { s11, s12, s21, s22 } => vec![
                ("a1_12_12", one()),
                ("a1_34_34", -one()),
                ("a2_23_23", one()),
                ("a2_34_34", -one()),
                ("s11_14", s11),
                ("s12_14", s12),
                ("s21_14", s21),
                ("s22_14", s22),
            ],
        };
        let f = if self.id() == FormId::L42 { 2 } else { 1 };
        ExtensionSpec::from_pairs(4, f, pairs).expect("canonical parameters are master names")
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.id())?;
        for (i, (name, v)) in self.params().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{name} = {v}")?;
        }
        write!(f, ")")
    }
}

/// The multiplication table of a canonical form.
pub fn build_canonical(form: &CanonicalForm) -> Result<StructureTable<Scalar>> {
    form.check()?;
    master_extension(&form.spec())
}

/// Which normalization sequence was applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Route {
    /// `a_{12,12} = 0`.
    A12Zero,
    /// `a_{12,12} ≠ 0`, `a_{23,23} = 0`.
    A23Zero,
    /// `a_{23,23} = -a_{12,12}`, sent to `L1` by reversing the indices.
    A23Opposite,
    /// `a_{12,12} ≠ 0`, `a_{23,23} ∉ {0, -a_{12,12}}`.
    A23Generic,
    /// Two generators.
    TwoGenerators,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub form: CanonicalForm,
    /// Carries the input table exactly onto `build_canonical(&form)`.
    pub witness: BasisChange,
    pub route: Route,
    pub note: Option<String>,
}

/// Basis change that is the identity except on the listed rows.
fn change(d: usize, rows: &[(usize, Vec<(usize, Scalar)>)]) -> Result<BasisChange> {
    let mut all: Vec<Vec<(usize, Scalar)>> = (0..d).map(|i| vec![(i, Scalar::one())]).collect();
    for (i, r) in rows {
        all[*i] = r.clone();
    }
    BasisChange::from_sparse_rows(d, &all)
}

fn half(x: &Scalar) -> Scalar {
    x * &Scalar::ratio(1, 2)
}

const A23_OPPOSITE_NOTE: &str = "the non-Lie condition for this branch is printed with b12_14, \
which vanishes here; it is read as (b34_14, s14) != (0, 0)";

/// Normalizes a non-Lie one-generator extension to `L1`, `L2` or `L3`.
pub fn classify_l41(p: &L41Params) -> Result<Classification> {
    let table = build_l41(p)?;
    if table.is_lie() {
        return Err(Error::LieMember);
    }
    let d = 7;
    let (witness, route) = if p.a12_12.is_zero() {
        let a = &p.a23_23;
        let w = change(
            d,
            &[
                (X, vec![(X, a.inv()?)]),
                (
                    N23,
                    vec![(N23, Scalar::one()), (N14, p.a23_14.checked_div(a)?)],
                ),
                (
                    N34,
                    vec![
                        (N34, Scalar::one()),
                        (N13, -half(&p.a34_13.checked_div(a)?)),
                    ],
                ),
            ],
        )?;
        (w, Route::A12Zero)
    } else {
        let scale = change(d, &[(X, vec![(X, p.a12_12.inv()?)])])?;
        let q = p.scaled(&p.a12_12)?;
        let shift_12 = (N12, vec![(N12, Scalar::one()), (N24, half(&q.a12_24))]);
        if q.a23_23.is_zero() {
            let step = change(
                d,
                &[
                    shift_12,
                    (N34, vec![(N34, Scalar::one()), (N13, -half(&q.a34_13))]),
                ],
            )?;
            (scale.then(&step)?, Route::A23Zero)
        } else if q.a23_23 == -Scalar::one() {
            let step = change(
                d,
                &[
                    (N23, vec![(N23, Scalar::one()), (N14, -&q.a23_14)]),
                    shift_12,
                ],
            )?;
            let m = -Scalar::one();
            let reverse = change(
                d,
                &[
                    (N12, vec![(N34, m.clone())]),
                    (N23, vec![(N23, m.clone())]),
                    (N34, vec![(N12, m.clone())]),
                    (N13, vec![(N24, m.clone())]),
                    (N24, vec![(N13, m.clone())]),
                    (N14, vec![(N14, m.clone())]),
                    (X, vec![(X, m)]),
                ],
            )?;
            (scale.then(&step)?.then(&reverse)?, Route::A23Opposite)
        } else {
            let s = &q.s14;
            if s.is_zero() {
                return Err(Error::InvalidParameters(
                    "s11_14 = 0 with a1_23_23 not in {0, -a1_12_12}".into(),
                ));
            }
            let one_plus = &q.a23_23 + &Scalar::one();
            let step = change(
                d,
                &[
                    shift_12,
                    (
                        N23,
                        vec![
                            (N23, Scalar::one()),
                            (N14, q.a23_14.checked_div(&q.a23_23)?),
                        ],
                    ),
                    (
                        N34,
                        vec![
                            (N34, s.clone()),
                            (N13, -&(s * &half(&q.a34_13.checked_div(&one_plus)?))),
                        ],
                    ),
                    (N24, vec![(N24, s.clone())]),
                    (N14, vec![(N14, s.clone())]),
                ],
            )?;
            (scale.then(&step)?, Route::A23Generic)
        }
    };
    let image = change_of_basis(&table, &witness)?;
    let form = match route {
        Route::A12Zero | Route::A23Opposite => CanonicalForm::L1 {
            a12_24: image.coeff(N12, X, N24),
            b12_14: image.coeff(X, N12, N14),
            s14: image.coeff(X, X, N14),
        },
        Route::A23Zero => CanonicalForm::L2 {
            a23_14: image.coeff(N23, X, N14),
            b23_14: image.coeff(X, N23, N14),
            s14: image.coeff(X, X, N14),
        },
        _ => CanonicalForm::L3 {
            a23_23: image.coeff(N23, X, N23),
        },
    };
    confirm(&image, &form)?;
    let note = (route == Route::A23Opposite).then(|| A23_OPPOSITE_NOTE.to_string());
    Ok(Classification {
        form,
        witness,
        route,
        note,
    })
}

fn confirm(image: &StructureTable<Scalar>, form: &CanonicalForm) -> Result<()> {
    if &build_canonical(form)? != image {
        return Err(Error::Unsupported(format!(
            "normalization did not reach the {} table",
            form.id()
        )));
    }
    Ok(())
}

/// Normalizes a non-Lie two-generator extension of `T(4)`, given as a
/// member of the master family, to the `L42` table.
pub fn classify_l42(spec: &ExtensionSpec) -> Result<Classification> {
    if spec.n() != 4 || spec.f() != 2 {
        return Err(Error::InvalidParameters("expected n = 4, f = 2".into()));
    }
    let table = master_extension(spec)?;
    if table.is_lie() {
        return Err(Error::LieMember);
    }
    let (a1, b1) = (spec.get("a1_12_12"), spec.get("a1_23_23"));
    let (a2, b2) = (spec.get("a2_12_12"), spec.get("a2_23_23"));
    let det = &(&a1 * &b2) - &(&a2 * &b1);
    if det.is_zero() {
        return Err(Error::InvalidParameters(
            "a1_12_12*a2_23_23 - a2_12_12*a1_23_23 = 0: the generators are not nil-independent"
                .into(),
        ));
    }
    let k = det.inv()?;
    let d = 8;
    let mix = change(
        d,
        &[
            (X, vec![(X, &b2 * &k), (X2, -&(&b1 * &k))]),
            (X2, vec![(X, -&(&a2 * &k)), (X2, &a1 * &k)]),
        ],
    )?;
    let mid = change_of_basis(&table, &mix)?;
    let shift = change(
        d,
        &[
            (
                N12,
                vec![(N12, Scalar::one()), (N24, half(&mid.coeff(N12, X, N24)))],
            ),
            (
                N23,
                vec![(N23, Scalar::one()), (N14, mid.coeff(N23, X2, N14))],
            ),
        ],
    )?;
    let witness = mix.then(&shift)?;
    let image = change_of_basis(&table, &witness)?;
    let form = CanonicalForm::L42 {
        s11: image.coeff(X, X, N14),
        s12: image.coeff(X, X2, N14),
        s21: image.coeff(X2, X, N14),
        s22: image.coeff(X2, X2, N14),
    };
    confirm(&image, &form)?;
    Ok(Classification {
        form,
        witness,
        route: Route::TwoGenerators,
        note: None,
    })
}

/// Outcome of comparing two tables by isomorphism invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distinction {
    /// The named invariant differs, so the algebras are not isomorphic.
    Distinct(String),
    /// Every invariant agrees; nothing is claimed.
    Inconclusive,
}

impl Distinction {
    pub fn is_distinct(&self) -> bool {
        matches!(self, Distinction::Distinct(_))
    }
}

pub fn distinguish(a: &StructureTable<Scalar>, b: &StructureTable<Scalar>) -> Distinction {
    if a.dim() != b.dim() {
        return Distinction::Distinct(format!("dimension {} vs {}", a.dim(), b.dim()));
    }
    let (sa, sb) = (a.series_signature(), b.series_signature());
    if sa.0 != sb.0 {
        return Distinction::Distinct(format!("lower central series {:?} vs {:?}", sa.0, sb.0));
    }
    if sa.1 != sb.1 {
        return Distinction::Distinct(format!("derived series {:?} vs {:?}", sa.1, sb.1));
    }
    let (la, lb) = (a.is_lie(), b.is_lie());
    if la != lb {
        return Distinction::Distinct(format!("is_lie {la} vs {lb}"));
    }
    let (ra, rb) = (a.right_annihilator().dim(), b.right_annihilator().dim());
    if ra != rb {
        return Distinction::Distinct(format!("right annihilator dimension {ra} vs {rb}"));
    }
    Distinction::Inconclusive
}

fn nonzero(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let x = any(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

fn any(rng: &mut ChaCha8Rng) -> Scalar {
    let re = Scalar::ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4));
    if rng.gen_bool(0.2) {
        &re + &(&Scalar::i() * &Scalar::from_int(rng.gen_range(-3..=3)))
    } else {
        re
    }
}

/// A random valid non-Lie one-generator member taking the given route.
pub fn sample_l41(rng: &mut ChaCha8Rng, route: Route) -> L41Params {
    loop {
        let mut p = L41Params {
            a12_24: any(rng),
            a34_13: any(rng),
            a23_14: any(rng),
            s14: any(rng),
            ..L41Params::default()
        };
        let c = nonzero(rng);
        match route {
            Route::A12Zero => {
                p.a23_23 = c;
                p.b23_14 = -&p.a23_14;
                p.b12_14 = any(rng);
            }
            Route::A23Zero => {
                p.a12_12 = c;
                p.b23_14 = any(rng);
            }
            Route::A23Opposite => {
                p.a23_23 = -&c;
                p.a12_12 = c;
                p.b23_14 = -&p.a23_14;
                p.b34_14 = any(rng);
            }
            Route::A23Generic | Route::TwoGenerators => {
                let t = nonzero(rng);
                if t == -Scalar::one() {
                    continue;
                }
                p.a23_23 = &c * &t;
                p.a12_12 = c;
                p.b23_14 = -&p.a23_14;
                p.s14 = nonzero(rng);
            }
        }
        if build_l41(&p).is_ok_and(|t| !t.is_lie()) {
            return p;
        }
    }
}

/// A random non-Lie two-generator member of the master family, obtained
/// from a random `L42` table by a random change of the outer generators
/// and of `N12`, `N23` within the family's shape.
pub fn sample_l42(rng: &mut ChaCha8Rng) -> ExtensionSpec {
    loop {
        let form = CanonicalForm::L42 {
            s11: any(rng),
            s12: any(rng),
            s21: any(rng),
            s22: any(rng),
        };
        let Ok(table) = build_canonical(&form) else {
            continue;
        };
        let g = [any(rng), any(rng), any(rng), any(rng)];
        if (&(&g[0] * &g[3]) - &(&g[1] * &g[2])).is_zero() {
            continue;
        }
        let step = change(
            8,
            &[
                (N12, vec![(N12, Scalar::one()), (N24, any(rng))]),
                (N23, vec![(N23, Scalar::one()), (N14, any(rng))]),
                (X, vec![(X, g[0].clone()), (X2, g[1].clone())]),
                (X2, vec![(X, g[2].clone()), (X2, g[3].clone())]),
            ],
        )
        .expect("invertible by construction");
        let moved = change_of_basis(&table, &step).expect("same dimension");
        if let Ok(spec) = ExtensionSpec::from_table(&moved, 4, 2) {
            return spec;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn restrictions_are_named() {
        let e = build_l41(&L41Params::from_ints([1, 0, 1, 0, 0, 0, 0, 0, 0])).unwrap_err();
        assert!(e.to_string().contains("a1_12_12*b1_12_14"), "{e}");
        let e = build_l41(&L41Params::default()).unwrap_err();
        assert!(e.to_string().contains("non-nilpotency"), "{e}");
    }

    #[test]
    fn lie_members_are_rejected() {
        let p = L41Params::from_ints([1, 0, 0, 1, 0, 0, 0, 0, 0]);
        assert!(matches!(classify_l41(&p), Err(Error::LieMember)));
    }

    #[test]
    fn every_route_reaches_its_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (route, id) in [
            (Route::A12Zero, FormId::L1),
            (Route::A23Zero, FormId::L2),
            (Route::A23Opposite, FormId::L1),
            (Route::A23Generic, FormId::L3),
        ] {
            for _ in 0..5 {
                let p = sample_l41(&mut rng, route);
                let c = classify_l41(&p).unwrap();
                assert_eq!(c.route, route);
                assert_eq!(c.form.id(), id);
            }
        }
    }

    #[test]
    fn two_generators_normalize() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..5 {
            let spec = sample_l42(&mut rng);
            let c = classify_l42(&spec).unwrap();
            assert_eq!(c.form.id(), FormId::L42);
        }
    }

    #[test]
    fn form_ids_parse() {
        for id in FormId::ALL {
            assert_eq!(id.to_string().parse::<FormId>().unwrap(), id);
        }
        assert!("L4".parse::<FormId>().is_err());
    }
}
