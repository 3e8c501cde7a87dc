//! The product dichotomy on `N_1n` and Lie-ness of maximal-rank extensions.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::relations::{traceless_substitution, PolySpan, Reduction};
use super::{
    b_name, diagonal_names, master_extension, skew_witnesses, ExtensionSampler, ExtensionSpec,
    GenericExtension,
};
use crate::algebra::StructureTable;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::triangular::{nil_independent_count, PairIndex};

/// Number of concrete points drawn by the maximal-rank check.
pub const THEOREM_SAMPLES: usize = 100;

/// Returns `true` when `a` is Lie, otherwise whether every generator
/// brackets to zero with `N_1n` on both sides. `a` must have the basis of
/// the master family: the pairs of `T(n)` followed by `f` generators.
pub fn verify_eq_3(a: &StructureTable<Scalar>, n: usize, f: usize) -> Result<bool> {
    let idx = PairIndex::new(n);
    if a.dim() != idx.len() + f {
        return Err(Error::DimensionMismatch {
            expected: idx.len() + f,
            found: a.dim(),
        });
    }
    if a.is_lie() {
        return Ok(true);
    }
    let one_n = idx.at(1, n);
    Ok((idx.len()..a.dim()).all(|x| a.get(x, one_n).is_empty() && a.get(one_n, x).is_empty()))
}

/// How the first generator is fixed in the maximal-rank check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// `X^1` acts on the superdiagonal by `e_1`, hence on `N_1n` by 1.
    Proof,
    /// The action on `N_1n` is dropped: every generator is traceless.
    Removed,
}

#[derive(Clone, Debug)]
pub struct MaximalRankReport {
    pub n: usize,
    pub normalization: Normalization,
    /// Every skew witness lies in the span of the reduced residues.
    pub forced_lie: bool,
    pub unforced_witnesses: Vec<Poly>,
    pub samples: usize,
    pub lie_samples: usize,
    pub leibniz_failures: usize,
}

impl MaximalRankReport {
    pub fn verified(&self) -> bool {
        self.forced_lie
            && self.samples >= THEOREM_SAMPLES
            && self.lie_samples == self.samples
            && self.leibniz_failures == 0
    }

    /// A concrete non-Lie member was found.
    pub fn non_lie_branch(&self) -> bool {
        self.lie_samples < self.samples
    }
}

fn normalization_substitution(n: usize, f: usize, mode: Normalization) -> HashMap<String, Poly> {
    match mode {
        Normalization::Proof => diagonal_names(n, 1)
            .into_iter()
            .enumerate()
            .map(|(p, v)| {
                let c = if p == 0 { Poly::one() } else { Poly::zero() };
                (v, c)
            })
            .collect(),
        Normalization::Removed => traceless_substitution(n, f),
    }
}

fn sample_diagonals(
    sampler: &ExtensionSampler,
    mode: Normalization,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<Scalar>> {
    let (n, f) = (sampler.n(), sampler.f());
    loop {
        let diags: Vec<Vec<Scalar>> = (1..=f)
            .map(|alpha| match mode {
                Normalization::Proof if alpha == 1 => {
                    let mut e = vec![Scalar::zero(); n - 1];
                    e[0] = Scalar::one();
                    e
                }
                Normalization::Proof => sampler.random_diagonal(rng, false),
                Normalization::Removed => sampler.random_diagonal(rng, true),
            })
            .collect();
        let wanted = match mode {
            Normalization::Proof => f,
            Normalization::Removed => f.min(n - 2),
        };
        if nil_independent_count(&diags) == wanted {
            return diags;
        }
    }
}

/// Runs the maximal-rank check for `L(n, n-1)`: symbolic forcing of the
/// skew witnesses under `mode`, then seeded concrete samples.
pub fn maximal_rank_report(n: usize, mode: Normalization, seed: u64) -> Result<MaximalRankReport> {
    if !(4..=5).contains(&n) {
        return Err(Error::Unsupported(format!(
            "the maximal-rank check runs for n in 4..=5, got {n}"
        )));
    }
    let f = n - 1;
    let red = Reduction::new(n, f)?;
    let subst = normalization_substitution(n, f, mode);
    let reduced: Vec<Poly> = red
        .residual
        .par_iter()
        .map(|p| p.substitute(&subst))
        .collect();
    let span = PolySpan::new(&reduced);
    let unforced_witnesses: Vec<Poly> = skew_witnesses(n, f)
        .iter()
        .map(|w| w.substitute(&subst))
        .filter(|w| !w.is_zero() && !span.contains(w))
        .collect();

    let sampler = ExtensionSampler::new(n, f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = 0;
    let mut lie_samples = 0;
    let mut leibniz_failures = 0;
    let mut attempts = 0;
    while samples < THEOREM_SAMPLES && attempts < 20 * THEOREM_SAMPLES {
        attempts += 1;
        let diags = sample_diagonals(&sampler, mode, &mut rng);
        let Ok(spec) = sampler.sample_with_diagonals(&diags, &mut rng) else {
            continue;
        };
        samples += 1;
        match master_extension(&spec) {
            Ok(t) => {
                if t.is_lie() {
                    lie_samples += 1;
                }
            }
            Err(_) => leibniz_failures += 1,
        }
    }

    Ok(MaximalRankReport {
        n,
        normalization: mode,
        forced_lie: unforced_witnesses.is_empty(),
        unforced_witnesses,
        samples,
        lie_samples,
        leibniz_failures,
    })
}

/// Every solvable Leibniz extension of `T(n)` of maximal rank is Lie.
pub fn verify_theorem_3_4(n: usize) -> Result<bool> {
    Ok(maximal_rank_report(n, Normalization::Proof, 0)?.verified())
}

/// Evaluates the generic table at a valid member of the master family
/// (expected Leibniz), then shifts `b1_{12,12}` off `-a1_{12,12}` by one
/// (expected not Leibniz). Returns whether both expectations hold.
pub fn perturbation_detected(n: usize, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = if n >= 4 {
        let sampler = ExtensionSampler::new(n, 1)?;
        loop {
            let diags = sampler.random_diagonals(&mut rng, true);
            if let Ok(spec) = sampler.sample_with_diagonals(&diags, &mut rng) {
                break spec;
            }
        }
    } else {
        let mut spec = ExtensionSpec::new(n, 1)?;
        let names = diagonal_names(n, 1);
        spec.set(&names[0], Scalar::ratio(3, 2))?;
        spec.set(&names[1], Scalar::from_int(-1))?;
        spec
    };
    let generic = GenericExtension::new(n, 1)?;
    let values = spec.assignment();
    let stated = generic.stated_substitution();
    let mut point = HashMap::new();
    for name in generic.vars.keys() {
        let v = match stated.get(name) {
            Some(p) => p.eval(&values)?,
            None => spec.get(name),
        };
        point.insert(name.clone(), v);
    }
    if !generic.table.eval(&point)?.is_leibniz() {
        return Ok(false);
    }
    let target = b_name(n, 1, (1, 2), (1, 2));
    let shifted = &point[&target] + &Scalar::one();
    point.insert(target, shifted);
    Ok(!generic.table.eval(&point)?.is_leibniz())
}
