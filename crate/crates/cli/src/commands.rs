use std::path::Path;

use leibniz_core::algebra::{derivation_matrix, io};
use leibniz_core::classify::{
    build_canonical, build_l41, classify_l41, CanonicalForm, FormId, L41Params,
};
use leibniz_core::extensions::{
    derive_relations, master_extension, maximal_rank_report, verify_eq_3, ExtensionSpec,
    Normalization, FAMILY_COLUMN_1N, FAMILY_OFF_SUPERDIAGONAL, FAMILY_ROW_12, FAMILY_SQUARES,
    FAMILY_SUPERDIAGONAL,
};
use leibniz_core::triangular::{triangular, PairIndex};
use leibniz_core::{change_of_basis, Matrix, Scalar, StructureTable, Subspace};
use num_traits::{One, Signed, Zero};

use crate::params;
use crate::report::Report;
use crate::Command;

type Outcome = Result<Report, String>;

/// Runs a command; input errors become a report with exit code 2.
pub fn run(cmd: &Command, seed: u64, echo: String) -> Report {
    let result = match cmd {
        Command::Triangular { n, out } => cmd_triangular(*n, out.as_deref(), &echo),
        Command::Extend { n, f, params, out } => cmd_extend(*n, *f, params, out.as_deref(), &echo),
        Command::Verify {
            lemma,
            theorem,
            eq,
            n,
            f,
            file,
        } => {
            if let Some(lemma) = lemma {
                cmd_relations(lemma, *n, *f, seed, &echo)
            } else if theorem.is_some() {
                cmd_maximal_rank(*n, seed, &echo)
            } else if eq.is_some() {
                cmd_n1n(file.as_deref(), *n, *f, &echo)
            } else {
                Err("nothing to verify".into())
            }
        }
        Command::Check { file } => cmd_check(file, &echo),
        Command::Series { file } => cmd_series(file, &echo),
        Command::Derivations { file } => cmd_derivations(file, &echo),
        Command::ClassifyL41 { params, witness } => cmd_classify(params, witness.as_deref(), &echo),
        Command::Canonical { form, params, out } => {
            cmd_canonical(form, params.as_deref(), out.as_deref(), &echo)
        }
    };
    result.unwrap_or_else(|e| {
        let mut r = Report::new(echo);
        r.error = Some(e);
        r.exit_code = 2;
        r
    })
}

fn refuted_unless(r: &mut Report, ok: bool) {
    r.verdict("verified", ok);
    r.exit_code = if ok { 0 } else { 1 };
}

fn read_algebra(path: &Path) -> Result<StructureTable<Scalar>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    io::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit_algebra(
    r: &mut Report,
    t: &StructureTable<Scalar>,
    out: Option<&Path>,
) -> Result<(), String> {
    let text = io::to_string(t);
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?;
            r.artifacts.push(path.display().to_string());
        }
        None => r.block("algebra", text.lines().map(String::from).collect()),
    }
    Ok(())
}

/// `2*N13 - N14`, with non-real coefficients parenthesized.
pub fn format_vector(labels: &[String], v: &[Scalar]) -> String {
    let mut out = String::new();
    for (c, label) in v.iter().zip(labels) {
        if c.is_zero() {
            continue;
        }
        let (neg, mag) = if c.is_real() && c.re().is_negative() {
            (true, -c.clone())
        } else {
            (false, c.clone())
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag.is_one() {
            out.push_str(label);
        } else if mag.is_real() {
            out.push_str(&format!("{mag}*{label}"));
        } else {
            out.push_str(&format!("({mag})*{label}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn matrix_rows(m: &Matrix) -> Vec<String> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(Scalar::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect()
}

fn subspace_lines(labels: &[String], s: &Subspace) -> Vec<String> {
    s.basis_vectors()
        .iter()
        .map(|v| format_vector(labels, v))
        .collect()
}

fn cmd_triangular(n: usize, out: Option<&Path>, echo: &str) -> Outcome {
    let t = triangular(n).map_err(|e| e.to_string())?;
    let mut r = Report::new(echo.into());
    r.verdict("dim", t.dim());
    emit_algebra(&mut r, &t, out)?;
    Ok(r)
}

fn cmd_extend(n: usize, f: usize, path: &Path, out: Option<&Path>, echo: &str) -> Outcome {
    let mut spec = ExtensionSpec::new(n, f).map_err(|e| e.to_string())?;
    let entries = params::read(path)?;
    params::apply(path, &entries, |name, v| spec.set(name, v))?;
    let t = master_extension(&spec).map_err(|e| e.to_string())?;
    let mut r = Report::new(echo.into());
    r.verdict("dim", t.dim());
    r.verdict("leibniz", t.is_leibniz());
    r.verdict("lie", t.is_lie());
    r.verdict("nilpotent", t.is_nilpotent());
    r.verdict(
        "n1n_dichotomy",
        verify_eq_3(&t, n, f).map_err(|e| e.to_string())?,
    );
    emit_algebra(&mut r, &t, out)?;
    Ok(r)
}

fn cmd_relations(
    lemma: &str,
    n: Option<usize>,
    f: Option<usize>,
    seed: u64,
    echo: &str,
) -> Outcome {
    let n = n.ok_or("--n is required")?;
    let f = f.ok_or("--f is required")?;
    let report = derive_relations(n, f, seed).map_err(|e| e.to_string())?;
    let families: &[(&str, &str)] = if lemma == "3.1" {
        &[
            ("row_12", FAMILY_ROW_12),
            ("superdiagonal", FAMILY_SUPERDIAGONAL),
            ("off_superdiagonal", FAMILY_OFF_SUPERDIAGONAL),
            ("column_1n", FAMILY_COLUMN_1N),
        ]
    } else {
        &[("squares", FAMILY_SQUARES)]
    };
    let mut r = Report::new(echo.into());
    let mut all = report.linear_relations_match();
    for (key, name) in families {
        let fam = report
            .family(name)
            .ok_or_else(|| format!("no family {name:?}"))?;
        all &= fam.holds();
        r.verdict(
            key,
            format!("{}/{} implied", fam.implied, fam.relations.len()),
        );
    }
    r.verdict("linear_relations_match", report.linear_relations_match());
    r.verdict("derived_linear", report.derived_linear.len());
    r.verdict("dichotomy", report.dichotomy_holds());
    r.verdict("unexplained", report.unexplained.len());
    r.verdict("cross_generator", report.cross_generator.len());
    r.verdict("sample_points", report.sample_points);
    r.verdict("sample_failures", report.sample_failures);
    let show =
        |ps: &[leibniz_core::Poly]| ps.iter().map(|p| format!("{p} = 0")).collect::<Vec<_>>();
    if !report.missing_linear.is_empty() {
        r.block("missing", show(&report.missing_linear));
    }
    if !report.extra_linear.is_empty() {
        r.block("extra", show(&report.extra_linear));
    }
    r.block("restrictions", show(&report.stated_quadratic));
    if !report.cross_generator.is_empty() {
        r.block("cross_generator", show(&report.cross_generator));
    }
    refuted_unless(&mut r, all);
    Ok(r)
}

fn cmd_maximal_rank(n: Option<usize>, seed: u64, echo: &str) -> Outcome {
    let n = n.ok_or("--n is required")?;
    let t = maximal_rank_report(n, Normalization::Proof, seed).map_err(|e| e.to_string())?;
    let mut r = Report::new(echo.into());
    r.verdict("forced_lie", t.forced_lie);
    r.verdict("samples", t.samples);
    r.verdict("lie_samples", t.lie_samples);
    r.verdict("leibniz_failures", t.leibniz_failures);
    if !t.unforced_witnesses.is_empty() {
        r.block(
            "unforced",
            t.unforced_witnesses.iter().map(|p| p.to_string()).collect(),
        );
    }
    refuted_unless(&mut r, t.verified());
    Ok(r)
}

/// `(n, f)` such that the labels start with those of `T(n)` followed by `f`
/// more basis vectors.
fn infer_shape(t: &StructureTable<Scalar>) -> Option<(usize, usize)> {
    (3..)
        .take_while(|n| n * (n - 1) / 2 < t.dim())
        .find(|&n| {
            let labels = PairIndex::new(n).labels();
            let f = t.dim() - labels.len();
            f < n && t.labels()[..labels.len()] == labels[..]
        })
        .map(|n| (n, t.dim() - n * (n - 1) / 2))
}

fn cmd_n1n(file: Option<&Path>, n: Option<usize>, f: Option<usize>, echo: &str) -> Outcome {
    let file = file.ok_or("--eq 3 needs an algebra file")?;
    let t = read_algebra(file)?;
    let (n, f) = match (n, f) {
        (Some(n), Some(f)) => (n, f),
        _ => infer_shape(&t).ok_or("cannot read T(n) and the generators off the labels")?,
    };
    let ok = verify_eq_3(&t, n, f).map_err(|e| e.to_string())?;
    let mut r = Report::new(echo.into());
    r.verdict("n", n);
    r.verdict("f", f);
    r.verdict("leibniz", t.is_leibniz());
    r.verdict("lie", t.is_lie());
    refuted_unless(&mut r, ok);
    Ok(r)
}

fn cmd_check(file: &Path, echo: &str) -> Outcome {
    let t = read_algebra(file)?;
    let mut r = Report::new(echo.into());
    let residues = t.leibniz_residues();
    let (lower, derived) = t.series_signature();
    r.verdict("dim", t.dim());
    r.verdict("leibniz", residues.is_empty());
    r.verdict("lie", t.is_lie());
    r.verdict("lower_central", lower);
    r.verdict("derived", derived);
    r.verdict("nilpotent", t.is_nilpotent());
    r.verdict("solvable", t.is_solvable());
    r.verdict("right_annihilator", t.right_annihilator().dim());
    if !residues.is_empty() {
        let l = t.labels();
        let lines = residues
            .iter()
            .take(10)
            .map(|res| {
                let (i, j, k) = res.triple;
                format!(
                    "({}, {}, {}): {}",
                    l[i],
                    l[j],
                    l[k],
                    format_vector(l, &res.value)
                )
            })
            .collect();
        r.block("failing_triples", lines);
    }
    r.exit_code = if residues.is_empty() { 0 } else { 1 };
    Ok(r)
}

fn cmd_series(file: &Path, echo: &str) -> Outcome {
    let t = read_algebra(file)?;
    let mut r = Report::new(echo.into());
    let lower = t.lower_central_series();
    let derived = t.derived_series();
    r.verdict(
        "lower_central",
        lower.iter().map(Subspace::dim).collect::<Vec<_>>(),
    );
    r.verdict(
        "derived",
        derived.iter().map(Subspace::dim).collect::<Vec<_>>(),
    );
    r.verdict("nilpotent", t.is_nilpotent());
    r.verdict("solvable", t.is_solvable());
    for (k, s) in lower.iter().enumerate().skip(1) {
        r.block(
            &format!("lower_central_{}", k + 1),
            subspace_lines(t.labels(), s),
        );
    }
    for (k, s) in derived.iter().enumerate().skip(1) {
        r.block(&format!("derived_{}", k + 1), subspace_lines(t.labels(), s));
    }
    Ok(r)
}

fn cmd_derivations(file: &Path, echo: &str) -> Outcome {
    let t = read_algebra(file)?;
    let der = t.derivation_algebra();
    let mut r = Report::new(echo.into());
    r.verdict("dim", der.dim());
    for (k, v) in der.basis_vectors().iter().enumerate() {
        let m = derivation_matrix(t.dim(), v).map_err(|e| e.to_string())?;
        r.block(&format!("D{}", k + 1), matrix_rows(&m));
    }
    Ok(r)
}

fn cmd_classify(path: &Path, witness_out: Option<&Path>, echo: &str) -> Outcome {
    let mut p = L41Params::default();
    let entries = params::read(path)?;
    params::apply(path, &entries, |name, v| p.set(name, v))?;
    let c = classify_l41(&p).map_err(|e| e.to_string())?;
    let canonical = build_canonical(&c.form).map_err(|e| e.to_string())?;
    let input = build_l41(&p).map_err(|e| e.to_string())?;
    let carried = change_of_basis(&input, &c.witness).map_err(|e| e.to_string())? == canonical;

    let mut r = Report::new(echo.into());
    r.verdict("form", c.form.id().to_string());
    r.verdict("route", format!("{:?}", c.route));
    for (name, v) in c.form.params() {
        r.verdict(name, v.to_string());
    }
    if let Some(note) = &c.note {
        r.verdict("note", note.as_str());
    }
    r.verdict("witness_checked", carried);
    let rows = matrix_rows(c.witness.matrix());
    if let Some(out) = witness_out {
        let mut text = rows.join("\n");
        text.push('\n');
        std::fs::write(out, text).map_err(|e| format!("{}: {e}", out.display()))?;
        r.artifacts.push(out.display().to_string());
    }
    r.block("witness", rows);
    r.exit_code = if carried { 0 } else { 1 };
    Ok(r)
}

fn cmd_canonical(form: &str, path: Option<&Path>, out: Option<&Path>, echo: &str) -> Outcome {
    let id: FormId = form
        .parse()
        .map_err(|e: leibniz_core::Error| e.to_string())?;
    let entries = match path {
        Some(p) => params::read(p)?,
        None => Vec::new(),
    };
    let form = CanonicalForm::from_params(
        id,
        entries.iter().map(|e| (e.name.as_str(), e.value.clone())),
    )
    .map_err(|e| e.to_string())?;
    let t = build_canonical(&form).map_err(|e| e.to_string())?;
    let mut r = Report::new(echo.into());
    r.verdict("form", id.to_string());
    r.verdict("leibniz", t.is_leibniz());
    r.verdict("lie", t.is_lie());
    emit_algebra(&mut r, &t, out)?;
    Ok(r)
}
