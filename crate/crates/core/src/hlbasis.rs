//! Hall-Littlewood bases at a rational parameter and their structure constants.
//!
//! `P_λ(·;t)` is obtained by Gram-Schmidt orthogonalisation of the monomial
//! basis with respect to `⟨·,·⟩_t`, processing each degree from the bottom of
//! the reverse-lexicographic order upward and keeping the leading `m_λ`
//! coefficient equal to one. Since reverse-lex refines dominance, the result
//! is the usual unitriangular HL basis. The monomial functions themselves
//! are recovered by inverting the triangular matrix expressing `p_μ` in
//! monomials.
//!
//! Bases are cached per degree inside an [`HLContext`]; several contexts
//! (at `t`, `t²` and `-t`) routinely coexist.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::partitions::{covers_box, enumerate, enumerate_up_to, Partition};
use crate::scalar::{self, Scalar};
use crate::symring::{plethysm_pi, SymElement};

/// Coefficient of `x^λ` (equivalently of `m_λ`) in `p_μ`: the number of ways
/// to distribute the parts of `μ` over the rows of `λ` filling each row exactly.
pub(crate) fn power_sum_monomial_coefficient(mu: &Partition, lam: &Partition) -> u64 {
    if mu.size() != lam.size() {
        return 0;
    }
    fn go(
        parts: &[usize],
        idx: usize,
        rest: &mut Vec<usize>,
        memo: &mut HashMap<(usize, Vec<usize>), u64>,
    ) -> u64 {
        if idx == parts.len() {
            return u64::from(rest.iter().all(|&r| r == 0));
        }
        let key = (idx, rest.clone());
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let mut total = 0;
        for i in 0..rest.len() {
            if rest[i] >= parts[idx] {
                rest[i] -= parts[idx];
                total += go(parts, idx + 1, rest, memo);
                rest[i] += parts[idx];
            }
        }
        memo.insert(key, total);
        total
    }
    let mut rest = lam.parts().to_vec();
    go(mu.parts(), 0, &mut rest, &mut HashMap::new())
}

/// The monomial symmetric functions of degree `n` in power-sum coordinates,
/// one dense row per partition in `enumerate(n)` order.
fn monomials_in_power_sums(parts: &[Partition]) -> Vec<Vec<Scalar>> {
    let n = parts.len();
    // r[i][k] = coefficient of m_k in p_i; nonzero only for k <= i.
    let r: Vec<Vec<Scalar>> = parts
        .iter()
        .map(|mu| {
            parts
                .iter()
                .map(|lam| scalar::int(power_sum_monomial_coefficient(mu, lam) as i64))
                .collect()
        })
        .collect();
    let mut m: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![Scalar::zero(); n];
        row[i] = Scalar::one();
        for k in 0..i {
            if r[i][k].is_zero() {
                continue;
            }
            for (j, x) in m[k].iter().enumerate() {
                if !x.is_zero() {
                    row[j] -= &r[i][k] * x;
                }
            }
        }
        let pivot = r[i][i].clone();
        for x in row.iter_mut() {
            *x /= &pivot;
        }
        m.push(row);
    }
    m
}

fn dot_weighted(a: &[Scalar], b: &[Scalar], w: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero();
    for ((x, y), z) in a.iter().zip(b).zip(w) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y * z;
        }
    }
    acc
}

/// All HL data for one degree.
#[derive(Debug)]
pub struct DegreeBasis {
    parts: Vec<Partition>,
    index: HashMap<Partition, usize>,
    /// `P_λ` in power-sum coordinates.
    p_rows: Vec<Vec<Scalar>>,
    /// `dual[λ][μ] = b_λ(t) P_λ[μ] z_μ(t)`, so that `⟨f, Q_λ⟩_t = Σ_μ f_μ dual[λ][μ]`.
    dual: Vec<Vec<Scalar>>,
}

impl DegreeBasis {
    fn build(n: usize, t: &Scalar) -> Result<Self> {
        let parts = enumerate(n);
        let index = parts
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let z = parts
            .iter()
            .map(|p| p.z_factor(t))
            .collect::<Result<Vec<_>>>()?;
        let m = monomials_in_power_sums(&parts);
        let len = parts.len();
        let mut p_rows: Vec<Vec<Scalar>> = vec![Vec::new(); len];
        let mut norms: Vec<Scalar> = vec![Scalar::zero(); len];
        for i in (0..len).rev() {
            let mut v = m[i].clone();
            for k in i + 1..len {
                let c = dot_weighted(&m[i], &p_rows[k], &z) / &norms[k];
                if c.is_zero() {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(&p_rows[k]) {
                    if !y.is_zero() {
                        *x -= &c * y;
                    }
                }
            }
            let norm = dot_weighted(&v, &v, &z);
            if norm.is_zero() {
                return Err(Error::DivisionByZero(format!(
                    "degenerate HL inner product at t = {t} for {}",
                    parts[i]
                )));
            }
            norms[i] = norm;
            p_rows[i] = v;
        }
        let dual = parts
            .iter()
            .zip(&p_rows)
            .map(|(lam, row)| {
                let b = lam.b_factor(t);
                row.iter().zip(&z).map(|(x, zz)| x * zz * &b).collect()
            })
            .collect();
        Ok(DegreeBasis {
            parts,
            index,
            p_rows,
            dual,
        })
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.parts
    }

    fn row_element(&self, i: usize) -> SymElement {
        SymElement::from_terms(
            self.parts
                .iter()
                .zip(&self.p_rows[i])
                .map(|(mu, c)| (mu.clone(), c.clone())),
        )
    }

    fn expand_homogeneous(&self, f: &SymElement, out: &mut BTreeMap<Partition, Scalar>) {
        let coords: Vec<(usize, &Scalar)> = f.iter().map(|(mu, c)| (self.index[mu], c)).collect();
        for (lam, row) in self.parts.iter().zip(&self.dual) {
            let mut acc = Scalar::zero();
            for &(j, c) in &coords {
                if !row[j].is_zero() {
                    acc += c * &row[j];
                }
            }
            if !acc.is_zero() {
                out.insert(lam.clone(), acc);
            }
        }
    }
}

/// HL basis `P_λ(·;t)` for one parameter value, cached per degree.
#[derive(Debug)]
pub struct HLContext {
    t: Scalar,
    degree_cap: usize,
    cache: RwLock<BTreeMap<usize, Arc<DegreeBasis>>>,
}

impl Clone for HLContext {
    fn clone(&self) -> Self {
        HLContext {
            t: self.t.clone(),
            degree_cap: self.degree_cap,
            cache: RwLock::new(self.cache.read().expect("cache lock").clone()),
        }
    }
}

impl HLContext {
    /// Requires `|t| < 1`.
    pub fn new(t: Scalar, degree_cap: usize) -> Result<Self> {
        if !scalar::abs_below_one(&t) {
            return Err(Error::ParameterRange(format!(
                "HL parameter must satisfy |t| < 1, got {t}"
            )));
        }
        Ok(HLContext {
            t,
            degree_cap,
            cache: RwLock::new(BTreeMap::new()),
        })
    }

    pub fn t(&self) -> &Scalar {
        &self.t
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    fn check_cap(&self, n: usize) -> Result<()> {
        if n > self.degree_cap {
            Err(Error::DegreeCap {
                requested: n,
                cap: self.degree_cap,
            })
        } else {
            Ok(())
        }
    }

    /// The cached basis data for degree `n`, computed on first use.
    pub fn degree(&self, n: usize) -> Result<Arc<DegreeBasis>> {
        self.check_cap(n)?;
        if let Some(b) = self.cache.read().expect("cache lock").get(&n) {
            return Ok(Arc::clone(b));
        }
        let built = Arc::new(DegreeBasis::build(n, &self.t)?);
        let mut cache = self.cache.write().expect("cache lock");
        Ok(Arc::clone(cache.entry(n).or_insert(built)))
    }

    /// Builds every degree up to `n`, in parallel.
    pub fn warm(&self, n: usize) -> Result<()> {
        use rayon::prelude::*;
        self.check_cap(n)?;
        (0..=n)
            .into_par_iter()
            .map(|d| self.degree(d).map(|_| ()))
            .collect::<Result<Vec<_>>>()?;
        Ok(())
    }

    /// `P_λ(·;t)` in power sums.
    pub fn hl_p(&self, lam: &Partition) -> Result<SymElement> {
        let basis = self.degree(lam.size())?;
        Ok(basis.row_element(basis.index[lam]))
    }

    /// `Q_λ(·;t) = b_λ(t) P_λ(·;t)`.
    pub fn hl_q(&self, lam: &Partition) -> Result<SymElement> {
        Ok(self.hl_p(lam)?.scale(&lam.b_factor(&self.t)))
    }

    /// Coefficients `c_λ` with `f = Σ c_λ P_λ(·;t)`, via `c_λ = ⟨f, Q_λ⟩_t`.
    pub fn expand_in_p(&self, f: &SymElement) -> Result<BTreeMap<Partition, Scalar>> {
        let mut out = BTreeMap::new();
        let degrees: std::collections::BTreeSet<usize> =
            f.terms().keys().map(Partition::size).collect();
        for d in degrees {
            let basis = self.degree(d)?;
            basis.expand_homogeneous(&f.homogeneous_part(d), &mut out);
        }
        Ok(out)
    }

    /// `Σ c_λ P_λ` back in power sums.
    pub fn from_p_coefficients(&self, coeffs: &BTreeMap<Partition, Scalar>) -> Result<SymElement> {
        let mut out = SymElement::zero();
        for (lam, c) in coeffs {
            out = out.add(&self.hl_p(lam)?.scale(c));
        }
        Ok(out)
    }

    /// `{f^λ_{μν}(t)}_λ` from `P_μ P_ν = Σ f^λ_{μν} P_λ`.
    pub fn structconst_f(
        &self,
        mu: &Partition,
        nu: &Partition,
    ) -> Result<BTreeMap<Partition, Scalar>> {
        self.check_cap(mu.size() + nu.size())?;
        let prod = self.hl_p(mu)?.multiply(&self.hl_p(nu)?);
        self.expand_in_p(&prod)
    }
}

/// `w(μ↗λ;t) = (1 - t^{λ'_j - λ'_{j+1}}) / (1 - t)` where `j` is the column of `λ/μ`.
pub fn pieri_weight(mu: &Partition, lam: &Partition, t: &Scalar) -> Result<Scalar> {
    let (_, j) = covers_box(mu)
        .into_iter()
        .find(|(l, _)| l == lam)
        .ok_or_else(|| Error::NotACover(mu.clone(), lam.clone()))?;
    let conj = lam.conjugate();
    let gap = conj.part(j) - conj.part(j + 1);
    let denom = Scalar::one() - t;
    if denom.is_zero() {
        return Err(Error::DivisionByZero("1 - t in the Pieri weight".into()));
    }
    Ok((Scalar::one() - scalar::pow(t, gap)) / denom)
}

/// Modified HL functions `P̃_λ(·;-t) = (-1)^{n(λ)} P_λ(·;-t)` for `t ∈ (0,1)`.
#[derive(Debug, Clone)]
pub struct ModifiedBasis {
    t: Scalar,
    ctx: HLContext,
}

impl ModifiedBasis {
    pub fn new(t: Scalar, degree_cap: usize) -> Result<Self> {
        if !scalar::in_open_unit_interval(&t) {
            return Err(Error::ParameterRange(format!(
                "modified HL functions need t in (0,1), got {t}"
            )));
        }
        let ctx = HLContext::new(-t.clone(), degree_cap)?;
        Ok(ModifiedBasis { t, ctx })
    }

    /// The positive parameter `t`; the underlying HL parameter is `-t`.
    pub fn t(&self) -> &Scalar {
        &self.t
    }

    /// The plain HL context at `-t`.
    pub fn context(&self) -> &HLContext {
        &self.ctx
    }

    pub fn degree_cap(&self) -> usize {
        self.ctx.degree_cap
    }

    pub fn p_tilde(&self, lam: &Partition) -> Result<SymElement> {
        Ok(self
            .ctx
            .hl_p(lam)?
            .scale(&scalar::sign(lam.n_stat().is_multiple_of(2))))
    }

    /// `Q̃_λ(·;-t) = b_λ(-t) P̃_λ(·;-t)`.
    pub fn q_tilde(&self, lam: &Partition) -> Result<SymElement> {
        Ok(self.p_tilde(lam)?.scale(&lam.b_factor(self.ctx.t())))
    }

    /// Coefficients in the `P̃(·;-t)` basis.
    pub fn expand(&self, f: &SymElement) -> Result<BTreeMap<Partition, Scalar>> {
        let mut out = self.ctx.expand_in_p(f)?;
        for (lam, c) in out.iter_mut() {
            if lam.n_stat() % 2 == 1 {
                *c = -c.clone();
            }
        }
        Ok(out)
    }

    /// `f̄^λ_{μν}(t) = (-1)^{n(λ)-n(μ)-n(ν)} f^λ_{μν}(-t)`.
    pub fn structconst_fbar(
        &self,
        mu: &Partition,
        nu: &Partition,
    ) -> Result<BTreeMap<Partition, Scalar>> {
        let mut out = self.ctx.structconst_f(mu, nu)?;
        let base = mu.n_stat() + nu.n_stat();
        for (lam, c) in out.iter_mut() {
            if (lam.n_stat() + base) % 2 == 1 {
                *c = -c.clone();
            }
        }
        Ok(out)
    }
}

/// The twisted action of `A = Sym` (basis `P(·;t²)`) on `B = Sym` (basis `P̃(·;-t)`).
#[derive(Debug, Clone)]
pub struct TwistedStructure {
    a: HLContext,
    b: ModifiedBasis,
}

impl TwistedStructure {
    /// `degree_cap` bounds degrees on the `B` side.
    pub fn new(t: Scalar, degree_cap: usize) -> Result<Self> {
        let b = ModifiedBasis::new(t.clone(), degree_cap)?;
        let a = HLContext::new(&t * &t, degree_cap / 2)?;
        Ok(TwistedStructure { a, b })
    }

    pub fn from_parts(a: HLContext, b: ModifiedBasis) -> Result<Self> {
        let t = b.t();
        if a.t() != &(t * t) {
            return Err(Error::ParameterRange(format!(
                "A-side parameter {} is not the square of {t}",
                a.t()
            )));
        }
        Ok(TwistedStructure { a, b })
    }

    pub fn t(&self) -> &Scalar {
        self.b.t()
    }

    pub fn a_side(&self) -> &HLContext {
        &self.a
    }

    pub fn b_side(&self) -> &ModifiedBasis {
        &self.b
    }

    /// `{f̃^λ_{μν}(t)}_λ` from `π(P_μ(·;t²)) P̃_ν(·;-t) = Σ f̃^λ_{μν} P̃_λ(·;-t)`.
    pub fn structconst_ftilde(
        &self,
        mu: &Partition,
        nu: &Partition,
    ) -> Result<BTreeMap<Partition, Scalar>> {
        let total = 2 * mu.size() + nu.size();
        if total > self.b.degree_cap() {
            return Err(Error::DegreeCap {
                requested: total,
                cap: self.b.degree_cap(),
            });
        }
        let acted = plethysm_pi(&self.a.hl_p(mu)?).multiply(&self.b.p_tilde(nu)?);
        self.b.expand(&acted)
    }
}

/// `f̄` family built from scratch at `(t, cap)`.
pub fn structconst_fbar(
    mu: &Partition,
    nu: &Partition,
    t: &Scalar,
    cap: usize,
) -> Result<BTreeMap<Partition, Scalar>> {
    ModifiedBasis::new(t.clone(), cap)?.structconst_fbar(mu, nu)
}

/// A negative sign-twisted structure constant `f̄^λ_{μν}(t) < 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FbarWitness {
    pub lambda: Partition,
    pub mu: Partition,
    pub nu: Partition,
    pub value: Scalar,
}

/// First negative `f̄^λ_{μν}` with `ν` a nonempty row or column and `|λ| ≤ cap`.
///
/// Scan order: increasing `|λ|`, then `λ` reverse-lexicographically; for a
/// fixed `λ`, `μ` in the crate order and then `ν` row before column.
pub fn find_negative_fbar(t: &Scalar, cap: usize) -> Result<Option<FbarWitness>> {
    find_negative_fbar_with(&ModifiedBasis::new(t.clone(), cap)?, cap)
}

pub fn find_negative_fbar_with(basis: &ModifiedBasis, cap: usize) -> Result<Option<FbarWitness>> {
    for n in 1..=cap {
        let mut negatives: BTreeMap<Partition, Vec<(Partition, Partition, Scalar)>> =
            BTreeMap::new();
        for mu in enumerate_up_to(n - 1) {
            let k = n - mu.size();
            let mut nus = vec![Partition::row(k)];
            if k > 1 {
                nus.push(Partition::column(k));
            }
            for nu in nus {
                for (lam, value) in basis.structconst_fbar(&mu, &nu)? {
                    if value.is_negative() {
                        negatives
                            .entry(lam)
                            .or_default()
                            .push((mu.clone(), nu.clone(), value));
                    }
                }
            }
        }
        if let Some((lambda, found)) = negatives.into_iter().next() {
            let (mu, nu, value) = found.into_iter().next().expect("nonempty");
            return Ok(Some(FbarWitness {
                lambda,
                mu,
                nu,
                value,
            }));
        }
    }
    Ok(None)
}
