//! Named verification suites with deterministic JSON reports.
//!
//! Each suite walks every instance up to a degree cap, in parallel over
//! independent work items, and merges the per-item results in the order of
//! the item list, so the report does not depend on the worker count.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::functionals::{mix_twisted, Functional, MixWeights, PlancherelKind};
use crate::graphs::{
    build_levels, coherence_check, structure_check, GraphKind, GraphVariant, StructureDefect,
};
use crate::hlbasis::{
    find_negative_fbar_with, pieri_weight, HLContext, ModifiedBasis, TwistedStructure,
};
use crate::partitions::{covers_box, covers_two, enumerate, enumerate_up_to, Partition};
use crate::scalar::{self, frac, Scalar};
use crate::serial::{partition_to_json as pj, scalar_to_json as sj};
use crate::symring::{mackey_check, SymElement, TensorElement};

/// Suite names with their default caps.
pub const SUITES: &[(&str, usize)] = &[
    ("pieri", 9),
    ("positivity-f", 8),
    ("positivity-ftilde", 10),
    ("mackey", 10),
    ("harmonic-embed", 10),
    ("twisted-mixing", 10),
    ("coherence", 10),
    ("prop2e", 10),
    ("negative-fbar", 4),
    ("plancherel", 10),
    ("cauchy", 6),
];

/// At most this many failures are listed; `failure_count` has the total.
const MAX_LISTED: usize = 100;

pub fn default_cap(suite: &str) -> Result<usize> {
    SUITES
        .iter()
        .find(|(name, _)| *name == suite)
        .map(|(_, cap)| *cap)
        .ok_or_else(|| Error::UnknownSuite(suite.to_string()))
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub t: Scalar,
    /// `None` selects the suite's default cap.
    pub cap: Option<usize>,
    /// `0` lets the thread pool pick.
    pub workers: usize,
}

impl RunConfig {
    pub fn new(t: Scalar) -> Self {
        RunConfig {
            t,
            cap: None,
            workers: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Report {
    pub suite: String,
    pub t: String,
    pub cap: usize,
    pub checked: u64,
    pub failure_count: u64,
    pub failures: Vec<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub observations: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serialises")
    }
}

#[derive(Default)]
struct Tally {
    checked: u64,
    failure_count: u64,
    failures: Vec<Value>,
    warnings: Vec<String>,
    observations: Vec<Value>,
    witness: Option<Value>,
}

impl Tally {
    fn fail(&mut self, v: Value) {
        self.failure_count += 1;
        if self.failures.len() < MAX_LISTED {
            self.failures.push(v);
        }
    }

    fn observe(&mut self, v: Value) {
        if self.observations.len() < MAX_LISTED {
            self.observations.push(v);
        }
    }

    /// A finding that is a failure under the prime-power hypothesis and an observation outside it.
    fn negative(&mut self, v: Value, under_hypothesis: bool) {
        if under_hypothesis {
            self.fail(v);
        } else {
            self.observe(v);
        }
    }

    fn merge(&mut self, part: Partial) {
        self.checked += part.checked;
        for f in part.failures {
            self.fail(f);
        }
    }
}

/// Result of one parallel work item.
#[derive(Default)]
struct Partial {
    checked: u64,
    failures: Vec<Value>,
}

/// Runs `suite` on a dedicated pool with `config.workers` threads.
pub fn run_suite(suite: &str, config: &RunConfig) -> Result<Report> {
    let cap = match config.cap {
        Some(c) => {
            default_cap(suite)?;
            c
        }
        None => default_cap(suite)?,
    };
    let t = &config.t;
    if !scalar::abs_below_one(t) {
        return Err(Error::ParameterRange(format!("|t| < 1 required, got {t}")));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Constraint(format!("cannot start worker pool: {e}")))?;
    let start = Instant::now();
    let tally = pool.install(|| -> Result<Tally> {
        match suite {
            "pieri" => pieri(t, cap),
            "positivity-f" => positivity_f(t, cap),
            "positivity-ftilde" => positivity_ftilde(t, cap),
            "mackey" => mackey(t, cap),
            "harmonic-embed" => harmonic_embed(t, cap),
            "twisted-mixing" => twisted_mixing(t, cap),
            "coherence" => coherence(t, cap),
            "prop2e" => prop2e(t, cap),
            "negative-fbar" => negative_fbar(t, cap),
            "plancherel" => plancherel(t, cap),
            "cauchy" => cauchy(t, cap),
            other => Err(Error::UnknownSuite(other.to_string())),
        }
    })?;
    Ok(Report {
        suite: suite.to_string(),
        t: scalar::format(t),
        cap,
        checked: tally.checked,
        failure_count: tally.failure_count,
        failures: tally.failures,
        warnings: tally.warnings,
        observations: tally.observations,
        witness: tally.witness,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

fn require_unit_interval(t: &Scalar, suite: &str) -> Result<()> {
    if scalar::in_open_unit_interval(t) {
        Ok(())
    } else {
        Err(Error::ParameterRange(format!(
            "suite `{suite}` needs t in (0,1), got {t}"
        )))
    }
}

/// Warns when `t` is not `1/q` for an odd prime power `q`; returns whether it is.
fn prime_power_hypothesis(t: &Scalar, tally: &mut Tally) -> bool {
    let ok = scalar::is_inverse_odd_prime_power(t);
    if !ok {
        tally.warnings.push(format!(
            "t = {t} is not 1/q for an odd prime power q; negative values are reported as observations"
        ));
    }
    ok
}

fn par_items<T, F>(items: &[T], f: F) -> Result<Vec<Partial>>
where
    T: Sync,
    F: Fn(&T) -> Result<Partial> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

fn pieri(t: &Scalar, cap: usize) -> Result<Tally> {
    let ctx = HLContext::new(t.clone(), cap + 1)?;
    let one = Partition::row(1);
    let mus = enumerate_up_to(cap);
    let parts = par_items(&mus, |mu| {
        let mut part = Partial::default();
        let f = ctx.structconst_f(mu, &one)?;
        let mut expected = BTreeMap::new();
        for (lam, _) in covers_box(mu) {
            let w = pieri_weight(mu, &lam, t)?;
            expected.insert(lam, w);
        }
        part.checked = expected.len() as u64;
        for lam in f
            .keys()
            .chain(expected.keys())
            .collect::<std::collections::BTreeSet<_>>()
        {
            let got = f.get(lam).cloned().unwrap_or_else(Scalar::zero);
            let want = expected.get(lam).cloned().unwrap_or_else(Scalar::zero);
            if got != want {
                part.failures.push(json!({
                    "mu": pj(mu), "lambda": pj(lam), "f": sj(&got), "pieri": sj(&want),
                }));
            }
        }
        Ok(part)
    })?;
    let mut tally = Tally::default();
    parts.into_iter().for_each(|p| tally.merge(p));
    Ok(tally)
}

fn positivity_f(t: &Scalar, cap: usize) -> Result<Tally> {
    let mut tally = Tally::default();
    let hypothesis = scalar::in_open_unit_interval(t);
    if !hypothesis {
        tally.warnings.push(format!(
            "t = {t} is outside (0,1); negative values are reported as observations"
        ));
    }
    let ctx = HLContext::new(t.clone(), cap)?;
    ctx.warm(cap)?;
    let mut pairs = Vec::new();
    for mu in enumerate_up_to(cap).into_iter().filter(|m| !m.is_empty()) {
        for nu in enumerate_up_to(cap - mu.size())
            .into_iter()
            .filter(|n| !n.is_empty())
        {
            if nu <= mu {
                pairs.push((mu.clone(), nu));
            }
        }
    }
    let results = pairs
        .par_iter()
        .map(|(mu, nu)| {
            let f = ctx.structconst_f(mu, nu)?;
            let n = mu.size() + nu.size();
            let negatives: Vec<Value> = f
                .iter()
                .filter(|(_, v)| v.is_negative())
                .map(|(lam, v)| json!({"lambda": pj(lam), "mu": pj(mu), "nu": pj(nu), "value": sj(v)}))
                .collect();
            Ok((enumerate(n).len() as u64, negatives))
        })
        .collect::<Result<Vec<_>>>()?;
    for (checked, negatives) in results {
        tally.checked += checked;
        for v in negatives {
            tally.negative(v, hypothesis);
        }
    }
    Ok(tally)
}

fn positivity_ftilde(t: &Scalar, cap: usize) -> Result<Tally> {
    require_unit_interval(t, "positivity-ftilde")?;
    let mut tally = Tally::default();
    let hypothesis = prime_power_hypothesis(t, &mut tally);
    let tw = TwistedStructure::new(t.clone(), cap)?;
    tw.b_side().context().warm(cap)?;
    tw.a_side().warm(cap / 2)?;
    let mut pairs = Vec::new();
    for mu in enumerate_up_to(cap / 2) {
        for nu in enumerate_up_to(cap - 2 * mu.size()) {
            pairs.push((mu.clone(), nu));
        }
    }
    let results = pairs
        .par_iter()
        .map(|(mu, nu)| {
            let f = tw.structconst_ftilde(mu, nu)?;
            let negatives: Vec<Value> = f
                .iter()
                .filter(|(_, v)| v.is_negative())
                .map(|(lam, v)| json!({"lambda": pj(lam), "mu": pj(mu), "nu": pj(nu), "value": sj(v)}))
                .collect();
            Ok((enumerate(2 * mu.size() + nu.size()).len() as u64, negatives))
        })
        .collect::<Result<Vec<_>>>()?;
    for (checked, negatives) in results {
        tally.checked += checked;
        for v in negatives {
            tally.negative(v, hypothesis);
        }
    }
    Ok(tally)
}

fn mackey(t: &Scalar, cap: usize) -> Result<Tally> {
    let mut pairs = Vec::new();
    for rho in enumerate_up_to(cap / 2) {
        for sigma in enumerate_up_to(cap - 2 * rho.size()) {
            pairs.push((rho.clone(), sigma));
        }
    }
    let parts = par_items(&pairs, |(rho, sigma)| {
        let report = mackey_check(
            &SymElement::p(rho.clone()),
            &SymElement::p(sigma.clone()),
            t,
        )?;
        let mut part = Partial {
            checked: 1,
            failures: Vec::new(),
        };
        if let Some(((a, b), l, r)) = report.first_difference {
            part.failures.push(json!({
                "rho": pj(rho), "sigma": pj(sigma),
                "at": [pj(&a), pj(&b)], "lhs": sj(&l), "rhs": sj(&r),
            }));
        }
        Ok(part)
    })?;
    let mut tally = Tally::default();
    parts.into_iter().for_each(|p| tally.merge(p));
    Ok(tally)
}

/// `φ_row`, `φ_col` and a finite extreme point, all at `t²`.
fn a_side_samples(t: &Scalar, cap: usize, tally: &mut Tally) -> Result<Vec<(String, Functional)>> {
    let t2 = t * t;
    let mut out = vec![
        ("row".to_string(), Functional::phi_row(cap)),
        ("col".to_string(), Functional::phi_col(&t2, cap)?),
    ];
    match Functional::extreme_phi(&[frac(1, 2), frac(1, 4)], &[frac(1, 8)], &t2, cap) {
        Ok(phi) => out.push(("extreme(1/2,1/4;1/8)".to_string(), phi)),
        Err(Error::Constraint(msg)) => tally
            .warnings
            .push(format!("extreme sample skipped at t^2 = {t2}: {msg}")),
        Err(e) => return Err(e),
    }
    Ok(out)
}

fn cone_checks(
    tally: &mut Tally,
    label: &Value,
    psi: &Functional,
    basis: &ModifiedBasis,
    cap: usize,
    hypothesis: bool,
) -> Result<()> {
    tally.checked += enumerate_up_to(cap.saturating_sub(2)).len() as u64;
    if let Some(v) = psi.check_p2_harmonic(cap.saturating_sub(2))? {
        tally.fail(json!({
            "functional": label, "check": "p2-harmonic", "mu": pj(&v.mu),
            "shifted": sj(&v.shifted), "original": sj(&v.original),
        }));
    }
    tally.checked += enumerate_up_to(cap).len() as u64;
    if let Some(w) = psi.check_modified_positive_with(basis, cap)? {
        tally.negative(
            json!({"functional": label, "check": "positivity", "lambda": pj(&w.lambda), "value": sj(&w.value)}),
            hypothesis,
        );
    }
    Ok(())
}

fn normalisation_check(
    tally: &mut Tally,
    label: &Value,
    psi: &Functional,
    odd: bool,
) -> Result<()> {
    tally.checked += 2;
    let (root, parity_ok) = if odd {
        (Partition::row(1), psi.is_odd_supported())
    } else {
        (Partition::empty(), psi.is_even_supported())
    };
    let value = psi.value(&root)?;
    if !value.is_one() {
        tally.fail(json!({"functional": label, "check": "normalisation", "at": pj(&root), "value": sj(&value)}));
    }
    if !parity_ok {
        tally.fail(json!({"functional": label, "check": "parity"}));
    }
    Ok(())
}

fn harmonic_embed(t: &Scalar, cap: usize) -> Result<Tally> {
    require_unit_interval(t, "harmonic-embed")?;
    let mut tally = Tally::default();
    let hypothesis = prime_power_hypothesis(t, &mut tally);
    let basis = ModifiedBasis::new(t.clone(), cap)?;
    basis.context().warm(cap)?;
    for (name, phi) in a_side_samples(t, cap.div_ceil(2), &mut tally)? {
        for odd in [false, true] {
            let psi = if odd {
                phi.embed_odd(t)?
            } else {
                phi.embed_even(t)?
            }
            .restrict(cap);
            let label = json!(format!(
                "embed_{}({name})",
                if odd { "odd" } else { "even" }
            ));
            cone_checks(&mut tally, &label, &psi, &basis, cap, hypothesis)?;
            normalisation_check(&mut tally, &label, &psi, odd)?;
        }
    }
    Ok(tally)
}

fn twisted_mixing(t: &Scalar, cap: usize) -> Result<Tally> {
    require_unit_interval(t, "twisted-mixing")?;
    let mut tally = Tally::default();
    let hypothesis = prime_power_hypothesis(t, &mut tally);
    let basis = ModifiedBasis::new(t.clone(), cap)?;
    basis.context().warm(cap)?;
    let phis = a_side_samples(t, cap.div_ceil(2), &mut tally)?;
    let row_half = Functional::phi_row(cap.div_ceil(2));
    let psis = vec![
        (
            "plancherel-even",
            Functional::plancherel(PlancherelKind::Even, cap),
            false,
        ),
        (
            "embed_even(row)",
            row_half.embed_even(t)?.restrict(cap),
            false,
        ),
        (
            "plancherel-odd",
            Functional::plancherel(PlancherelKind::Odd, cap),
            true,
        ),
        ("embed_odd(row)", row_half.embed_odd(t)?.restrict(cap), true),
    ];
    let weights = [
        (frac(1, 2), Scalar::zero()),
        (frac(3, 8), frac(1, 4)),
        (frac(1, 4), frac(1, 2)),
        (Scalar::zero(), Scalar::one()),
    ];
    for (phi_name, phi) in &phis {
        for (psi_name, psi, odd) in &psis {
            let shift = usize::from(*odd);
            for (r, s) in &weights {
                let w = MixWeights::twisted(r.clone(), s.clone())?;
                let mixed = mix_twisted(phi, psi, &w, t, shift)?;
                let label = json!({"phi": phi_name, "psi": psi_name, "r": sj(r), "s": sj(s)});
                cone_checks(&mut tally, &label, &mixed, &basis, cap, hypothesis)?;
                normalisation_check(&mut tally, &label, &mixed, *odd)?;
            }
            // s -> 0 with r = 1/2 recovers the embedding.
            let w = MixWeights::twisted_sqrt(frac(1, 2), Scalar::zero())?;
            let limit = mix_twisted(phi, psi, &w, t, shift)?;
            let embedded = if *odd {
                phi.embed_odd(t)?
            } else {
                phi.embed_even(t)?
            };
            for mu in enumerate_up_to(cap)
                .into_iter()
                .filter(|m| m.size() % 2 == shift)
            {
                tally.checked += 1;
                let (got, want) = (limit.value(&mu)?, embedded.value(&mu)?);
                if got != want {
                    tally.fail(json!({
                        "phi": phi_name, "psi": psi_name, "check": "embedding-limit",
                        "mu": pj(&mu), "mixed": sj(&got), "embedded": sj(&want),
                    }));
                }
            }
        }
    }
    Ok(tally)
}

fn coherence(t: &Scalar, cap: usize) -> Result<Tally> {
    let mut tally = Tally::default();
    let mut kinds = vec![(GraphKind::new(GraphVariant::Standard, t.clone())?, cap)];
    if scalar::in_open_unit_interval(t) {
        kinds.push((GraphKind::new(GraphVariant::Even, t.clone())?, cap / 2));
        kinds.push((
            GraphKind::new(GraphVariant::Odd, t.clone())?,
            cap.saturating_sub(1) / 2,
        ));
    } else {
        tally.warnings.push(format!(
            "t = {t} is outside (0,1); only the standard graph is checked"
        ));
    }
    for (kind, up_to) in kinds {
        let name = kind.variant().name();
        let levels = build_levels(&kind, up_to)?;
        tally.checked += levels
            .iter()
            .map(|l| (l.vertices.len() + l.edges.len()) as u64)
            .sum::<u64>();
        if let Some(v) = coherence_check(&levels) {
            tally.fail(json!({
                "graph": name, "check": "coherence", "level": v.level, "vertex": pj(&v.vertex),
                "ratio": v.ratio.as_ref().map(sj),
            }));
        }
        if let Some(defect) = structure_check(&levels) {
            let detail = match defect {
                StructureDefect::NonPositiveWeight(a, b, w) => {
                    json!({"defect": "weight", "from": pj(&a), "to": pj(&b), "w": sj(&w)})
                }
                StructureDefect::NoParent(v) => json!({"defect": "no-parent", "vertex": pj(&v)}),
                StructureDefect::NoChild(v) => json!({"defect": "no-child", "vertex": pj(&v)}),
            };
            tally.fail(json!({"graph": name, "check": "structure", "detail": detail}));
        }
        if kind.variant() != GraphVariant::Standard {
            for level in &levels[1..] {
                let mut by_source: BTreeMap<&Partition, Vec<Partition>> = BTreeMap::new();
                for (v, w, _) in &level.edges {
                    by_source.entry(v).or_default().push(w.clone());
                }
                for (v, mut targets) in by_source {
                    targets.sort();
                    if targets != covers_two(v) {
                        tally.fail(json!({"graph": name, "check": "support", "vertex": pj(v)}));
                    }
                }
            }
        }
    }
    Ok(tally)
}

fn prop2e(t: &Scalar, cap: usize) -> Result<Tally> {
    let ctx = HLContext::new(t.clone(), cap)?;
    ctx.warm(cap)?;
    let row = Functional::phi_row(cap);
    let col = Functional::phi_col(t, cap)?;
    let one_minus_t = Scalar::one() - t;
    let lams = enumerate_up_to(cap);
    let parts = par_items(&lams, |lam| {
        let mut part = Partial {
            checked: 2,
            failures: Vec::new(),
        };
        let r = row.evaluate(&ctx.hl_p(lam)?)?;
        let r_want = if lam.is_row() {
            Scalar::one()
        } else {
            Scalar::zero()
        };
        if r != r_want {
            part.failures.push(json!({"functional": "row", "lambda": pj(lam), "value": sj(&r), "expected": sj(&r_want)}));
        }
        let c = col.evaluate(&ctx.hl_q(lam)?)?;
        let c_want = if lam.is_column() {
            scalar::pow(&one_minus_t, lam.size())
        } else {
            Scalar::zero()
        };
        if c != c_want {
            part.failures.push(json!({"functional": "col", "lambda": pj(lam), "value": sj(&c), "expected": sj(&c_want)}));
        }
        Ok(part)
    })?;
    let mut tally = Tally::default();
    parts.into_iter().for_each(|p| tally.merge(p));
    Ok(tally)
}

fn negative_fbar(t: &Scalar, cap: usize) -> Result<Tally> {
    require_unit_interval(t, "negative-fbar")?;
    let mut tally = Tally::default();
    let basis = ModifiedBasis::new(t.clone(), cap)?;
    tally.checked = enumerate_up_to(cap).len() as u64;
    match find_negative_fbar_with(&basis, cap)? {
        Some(w) => {
            tally.witness = Some(json!({
                "lambda": pj(&w.lambda), "mu": pj(&w.mu), "nu": pj(&w.nu), "value": sj(&w.value),
            }));
        }
        None => {
            tally.fail(json!({"reason": format!("no negative constant with |lambda| <= {cap}")}))
        }
    }
    Ok(tally)
}

fn plancherel(t: &Scalar, cap: usize) -> Result<Tally> {
    require_unit_interval(t, "plancherel")?;
    let mut tally = Tally::default();
    let hypothesis = prime_power_hypothesis(t, &mut tally);
    let a = Functional::plancherel(PlancherelKind::A, cap.div_ceil(2));
    let basis = ModifiedBasis::new(t.clone(), cap)?;
    for (name, kind, embedded) in [
        ("even", PlancherelKind::Even, a.embed_even(t)?),
        ("odd", PlancherelKind::Odd, a.embed_odd(t)?),
    ] {
        let target = Functional::plancherel(kind, cap);
        let embedded = embedded.restrict(cap);
        for mu in enumerate_up_to(cap) {
            tally.checked += 1;
            let (got, want) = (embedded.value(&mu)?, target.value(&mu)?);
            if got != want {
                tally.fail(json!({"kind": name, "mu": pj(&mu), "embedded": sj(&got), "plancherel": sj(&want)}));
            }
        }
        cone_checks(
            &mut tally,
            &json!(format!("plancherel-{name}")),
            &target,
            &basis,
            cap,
            hypothesis,
        )?;
    }
    Ok(tally)
}

fn cauchy(t: &Scalar, cap: usize) -> Result<Tally> {
    let ctx = HLContext::new(t.clone(), cap)?;
    let degrees: Vec<usize> = (0..=cap).collect();
    let parts = par_items(&degrees, |&n| {
        let mut lhs = TensorElement::zero();
        for lam in enumerate(n) {
            lhs = lhs.add(&TensorElement::tensor(&ctx.hl_p(&lam)?, &ctx.hl_q(&lam)?));
        }
        let mut rhs = TensorElement::zero();
        for mu in enumerate(n) {
            rhs.add_term(mu.clone(), mu.clone(), mu.z_factor(t)?.recip());
        }
        let size = enumerate(n).len() as u64;
        let mut part = Partial {
            checked: size * size,
            failures: Vec::new(),
        };
        for a in enumerate(n) {
            for b in enumerate(n) {
                let (l, r) = (lhs.coeff(&a, &b), rhs.coeff(&a, &b));
                if l != r {
                    part.failures.push(
                        json!({"degree": n, "at": [pj(&a), pj(&b)], "lhs": sj(&l), "rhs": sj(&r)}),
                    );
                }
            }
        }
        Ok(part)
    })?;
    let mut tally = Tally::default();
    parts.into_iter().for_each(|p| tally.merge(p));
    Ok(tally)
}
