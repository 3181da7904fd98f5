//! `Sym` in the power-sum basis.
//!
//! Elements are finite combinations `Σ c_μ p_μ` with exact coefficients.
//! The ring operations, the HL inner product, the plethysm `π: p_k ↦ p_{2k}`,
//! the doubling morphism `ξ: p_k ↦ 2p_k`, the coproduct `Δ` and the
//! `p_2`-twisted coproduct `Δ̃` are all closed formulas on `p_μ`.
//!
//! The two copies of `Sym` that appear in the twisted setting are not
//! separate types. Wherever a tensor carries HL parameters, the left slot
//! is paired at `t²` and the right slot at `-t`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::Result;
use crate::partitions::{split_even, split_multiset, Partition};
use crate::scalar::{self, Scalar};

#[derive(Clone, Default, PartialEq, Eq)]
pub struct SymElement {
    terms: BTreeMap<Partition, Scalar>,
}

impl SymElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::p(Partition::empty())
    }

    /// The power sum `p_μ`.
    pub fn p(mu: Partition) -> Self {
        Self::monomial(mu, Scalar::one())
    }

    /// `p_k`.
    pub fn pk(k: usize) -> Self {
        Self::p(Partition::row(k))
    }

    pub fn monomial(mu: Partition, c: Scalar) -> Self {
        let mut e = Self::zero();
        e.add_term(mu, c);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (Partition, Scalar)>>(terms: I) -> Self {
        let mut e = Self::zero();
        for (mu, c) in terms {
            e.add_term(mu, c);
        }
        e
    }

    pub fn add_term(&mut self, mu: Partition, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mu) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<Partition, Scalar> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mu: &Partition) -> Scalar {
        self.terms.get(mu).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest degree of a term, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Partition::size).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut sizes = self.terms.keys().map(Partition::size);
        match sizes.next() {
            None => true,
            Some(d) => sizes.all(|s| s == d),
        }
    }

    /// The degree-`d` component.
    pub fn homogeneous_part(&self, d: usize) -> SymElement {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(mu, _)| mu.size() == d)
                .map(|(mu, c)| (mu.clone(), c.clone())),
        )
    }

    /// Drops every term of degree above `d`.
    pub fn truncate(&self, d: usize) -> SymElement {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(mu, _)| mu.size() <= d)
                .map(|(mu, c)| (mu.clone(), c.clone())),
        )
    }

    pub fn scale(&self, c: &Scalar) -> SymElement {
        if c.is_zero() {
            return Self::zero();
        }
        SymElement {
            terms: self
                .terms
                .iter()
                .map(|(mu, x)| (mu.clone(), x * c))
                .collect(),
        }
    }

    pub fn add(&self, other: &SymElement) -> SymElement {
        let mut out = self.clone();
        for (mu, c) in &other.terms {
            out.add_term(mu.clone(), c.clone());
        }
        out
    }

    /// Bilinear extension of `p_μ p_ν = p_{μ∪ν}`.
    pub fn multiply(&self, other: &SymElement) -> SymElement {
        let mut out = Self::zero();
        for (mu, a) in &self.terms {
            for (nu, b) in &other.terms {
                out.add_term(mu.union(nu), a * b);
            }
        }
        out
    }

    /// Applies `p_μ ↦ factor(μ) · p_{image(μ)}` termwise.
    fn map_terms<F>(&self, mut f: F) -> SymElement
    where
        F: FnMut(&Partition, &Scalar) -> (Partition, Scalar),
    {
        Self::from_terms(self.terms.iter().map(|(mu, c)| f(mu, c)))
    }

    /// Counit: the coefficient of `p_∅`.
    pub fn counit(&self) -> Scalar {
        self.coeff(&Partition::empty())
    }
}

impl fmt::Display for SymElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(f, self.terms.iter().map(|(mu, c)| (format!("p{mu}"), c)))
    }
}

impl fmt::Debug for SymElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Writes `c1 x1 + c2 x2 - ...` with parenthesised non-unit coefficients.
pub fn write_combination<'a, W, I>(f: &mut W, terms: I) -> fmt::Result
where
    W: fmt::Write,
    I: IntoIterator<Item = (String, &'a Scalar)>,
{
    let mut first = true;
    for (name, c) in terms {
        let negative = c < &Scalar::zero();
        let mag = if negative { -c.clone() } else { c.clone() };
        match (first, negative) {
            (true, true) => write!(f, "-")?,
            (true, false) => {}
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
        }
        if mag.is_one() {
            write!(f, "{name}")?;
        } else {
            write!(f, "({mag}){name}")?;
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// [`write_combination`] into a fresh string.
pub fn format_combination<'a, I>(terms: I) -> String
where
    I: IntoIterator<Item = (String, &'a Scalar)>,
{
    let mut out = String::new();
    write_combination(&mut out, terms).expect("writing to a String cannot fail");
    out
}

impl Add for &SymElement {
    type Output = SymElement;
    fn add(self, rhs: &SymElement) -> SymElement {
        SymElement::add(self, rhs)
    }
}

impl Sub for &SymElement {
    type Output = SymElement;
    fn sub(self, rhs: &SymElement) -> SymElement {
        SymElement::add(self, &rhs.scale(&-Scalar::one()))
    }
}

impl Neg for &SymElement {
    type Output = SymElement;
    fn neg(self) -> SymElement {
        self.scale(&-Scalar::one())
    }
}

impl Mul for &SymElement {
    type Output = SymElement;
    fn mul(self, rhs: &SymElement) -> SymElement {
        self.multiply(rhs)
    }
}

/// `⟨f, g⟩_t = Σ_μ f_μ g_μ z_μ(t)`.
pub fn inner_product(f: &SymElement, g: &SymElement, t: &Scalar) -> Result<Scalar> {
    let (small, large) = if f.len() <= g.len() { (f, g) } else { (g, f) };
    let mut acc = Scalar::zero();
    for (mu, a) in small.iter() {
        if let Some(b) = large.terms.get(mu) {
            acc += a * b * mu.z_factor(t)?;
        }
    }
    Ok(acc)
}

/// Plethysm with `p_2`: the algebra morphism `p_μ ↦ p_{2μ}`.
pub fn plethysm_pi(f: &SymElement) -> SymElement {
    f.map_terms(|mu, c| (mu.double(), c.clone()))
}

/// The algebra morphism `p_μ ↦ 2^{ℓ(μ)} p_μ`, i.e. multiplication after `Δ`.
pub fn xi(f: &SymElement) -> SymElement {
    f.map_terms(|mu, c| (mu.clone(), c * scalar::pow(&scalar::int(2), mu.len())))
}

/// Finite combination of `p_ρ ⊗ p_σ`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct TensorElement {
    terms: BTreeMap<(Partition, Partition), Scalar>,
}

impl TensorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut t = Self::zero();
        t.add_term(Partition::empty(), Partition::empty(), Scalar::one());
        t
    }

    pub fn add_term(&mut self, rho: Partition, sigma: Partition, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((rho, sigma)) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `f ⊗ g`.
    pub fn tensor(f: &SymElement, g: &SymElement) -> Self {
        let mut out = Self::zero();
        for (rho, a) in f.iter() {
            for (sigma, b) in g.iter() {
                out.add_term(rho.clone(), sigma.clone(), a * b);
            }
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<(Partition, Partition), Scalar> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Partition, Partition), &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, rho: &Partition, sigma: &Partition) -> Scalar {
        self.terms
            .get(&(rho.clone(), sigma.clone()))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        for ((r, s), c) in &other.terms {
            out.add_term(r.clone(), s.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> TensorElement {
        let mut out = Self::zero();
        for ((r, s), x) in &self.terms {
            out.add_term(r.clone(), s.clone(), x * c);
        }
        out
    }

    /// Componentwise product `(a⊗b)(a'⊗b') = aa' ⊗ bb'`.
    pub fn multiply(&self, other: &TensorElement) -> TensorElement {
        let mut out = Self::zero();
        for ((r1, s1), a) in &self.terms {
            for ((r2, s2), b) in &other.terms {
                out.add_term(r1.union(r2), s1.union(s2), a * b);
            }
        }
        out
    }

    /// `(ε ⊗ id)`: keeps the terms whose left factor is `p_∅`.
    pub fn counit_left(&self) -> SymElement {
        SymElement::from_terms(
            self.terms
                .iter()
                .filter(|((r, _), _)| r.is_empty())
                .map(|((_, s), c)| (s.clone(), c.clone())),
        )
    }

    /// `(id ⊗ ε)`.
    pub fn counit_right(&self) -> SymElement {
        SymElement::from_terms(
            self.terms
                .iter()
                .filter(|((_, s), _)| s.is_empty())
                .map(|((r, _), c)| (r.clone(), c.clone())),
        )
    }

    /// The multiplication map `a ⊗ b ↦ ab`.
    pub fn contract(&self) -> SymElement {
        SymElement::from_terms(self.terms.iter().map(|((r, s), c)| (r.union(s), c.clone())))
    }

    /// Pairing with `g ⊗ h` under `⟨·,·⟩_{t_left} ⊗ ⟨·,·⟩_{t_right}`.
    pub fn pair(
        &self,
        g: &SymElement,
        h: &SymElement,
        t_left: &Scalar,
        t_right: &Scalar,
    ) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for ((r, s), c) in &self.terms {
            let a = g.coeff(r);
            if a.is_zero() {
                continue;
            }
            let b = h.coeff(s);
            if b.is_zero() {
                continue;
            }
            acc += c * a * b * r.z_factor(t_left)? * s.z_factor(t_right)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(
            f,
            self.terms
                .iter()
                .map(|((r, s), c)| (format!("p{r}⊗p{s}"), c)),
        )
    }
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Standard coproduct with `p_k` primitive.
pub fn coproduct(f: &SymElement) -> TensorElement {
    let mut out = TensorElement::zero();
    for (mu, c) in f.iter() {
        for (rho, sigma, mult) in split_multiset(mu) {
            out.add_term(rho, sigma, c * scalar::int(mult as i64));
        }
    }
    out
}

/// `Δ̃(p_τ) = Σ_{(2ρ)∪σ=τ} z_τ(-t) / (z_ρ(t²) z_σ(-t)) p_ρ ⊗ p_σ`.
pub fn twisted_coproduct(f: &SymElement, t: &Scalar) -> Result<TensorElement> {
    let neg_t = -t.clone();
    let t2 = t * t;
    let mut out = TensorElement::zero();
    for (tau, c) in f.iter() {
        let z_tau = tau.z_factor(&neg_t)?;
        for (rho, sigma) in split_even(tau) {
            let w = &z_tau / (rho.z_factor(&t2)? * sigma.z_factor(&neg_t)?);
            out.add_term(rho, sigma, c * w);
        }
    }
    Ok(out)
}

/// `Δ^m`: the `m`-fold coproduct into `Sym^{⊗m}`, keyed by tuples of partitions.
pub fn iterated_coproduct(f: &SymElement, m: usize) -> BTreeMap<Vec<Partition>, Scalar> {
    let mut acc: BTreeMap<Vec<Partition>, Scalar> = BTreeMap::new();
    if m == 0 {
        let e = f.counit();
        if !e.is_zero() {
            acc.insert(Vec::new(), e);
        }
        return acc;
    }
    for (mu, c) in f.iter() {
        acc.insert(vec![mu.clone()], c.clone());
    }
    for _ in 1..m {
        let mut next: BTreeMap<Vec<Partition>, Scalar> = BTreeMap::new();
        for (key, c) in acc {
            let (last, head) = key.split_last().expect("nonempty key");
            for (rho, sigma, mult) in split_multiset(last) {
                let mut k = head.to_vec();
                k.push(rho);
                k.push(sigma);
                *next.entry(k).or_insert_with(Scalar::zero) += &c * scalar::int(mult as i64);
            }
        }
        next.retain(|_, v| !v.is_zero());
        acc = next;
    }
    acc
}

/// Outcome of comparing both sides of the twisted Mackey identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MackeyReport {
    pub lhs: TensorElement,
    pub rhs: TensorElement,
    /// First tensor key (in key order) where the sides differ, with both coefficients.
    pub first_difference: Option<((Partition, Partition), Scalar, Scalar)>,
}

impl MackeyReport {
    pub fn holds(&self) -> bool {
        self.first_difference.is_none()
    }
}

/// Compares `Δ̃(π(a)·b)` with `Σ ξ(a₁)b₁ ⊗ π(a₂)b₂`, summing over `Δ(a) = Σ a₁⊗a₂`
/// and `Δ̃(b) = Σ b₁⊗b₂`. The left factor of `Δ(a)` is the one fed to `ξ`.
pub fn mackey_check(a: &SymElement, b: &SymElement, t: &Scalar) -> Result<MackeyReport> {
    let lhs = twisted_coproduct(&plethysm_pi(a).multiply(b), t)?;
    let delta_a = coproduct(a);
    let twisted_b = twisted_coproduct(b, t)?;
    let mut rhs = TensorElement::zero();
    for ((a1, a2), ca) in delta_a.iter() {
        let left_a = xi(&SymElement::p(a1.clone()));
        let right_a = plethysm_pi(&SymElement::p(a2.clone()));
        for ((b1, b2), cb) in twisted_b.iter() {
            let left = left_a.multiply(&SymElement::p(b1.clone()));
            let right = right_a.multiply(&SymElement::p(b2.clone()));
            rhs = rhs.add(&TensorElement::tensor(&left, &right).scale(&(ca * cb)));
        }
    }
    let first_difference = first_difference(&lhs, &rhs);
    Ok(MackeyReport {
        lhs,
        rhs,
        first_difference,
    })
}

fn first_difference(
    lhs: &TensorElement,
    rhs: &TensorElement,
) -> Option<((Partition, Partition), Scalar, Scalar)> {
    let keys: std::collections::BTreeSet<_> =
        lhs.terms.keys().chain(rhs.terms.keys()).cloned().collect();
    keys.into_iter().find_map(|k| {
        let l = lhs.coeff(&k.0, &k.1);
        let r = rhs.coeff(&k.0, &k.1);
        (l != r).then_some((k, l, r))
    })
}

/// An element of `A⊗A⊗B` in the power-sum basis.
pub type TripleTensor = BTreeMap<(Partition, Partition, Partition), Scalar>;

/// Both sides of the comodule coassociativity law `(Δ⊗id)∘Δ̃ = (id⊗Δ̃)∘Δ̃`.
pub fn coassociativity_sides(f: &SymElement, t: &Scalar) -> Result<(TripleTensor, TripleTensor)> {
    let twisted = twisted_coproduct(f, t)?;
    let mut left = BTreeMap::new();
    let mut right = BTreeMap::new();
    for ((rho, sigma), c) in twisted.iter() {
        for (r1, r2, mult) in split_multiset(rho) {
            accumulate(
                &mut left,
                (r1, r2, sigma.clone()),
                c * scalar::int(mult as i64),
            );
        }
        for ((s1, s2), d) in twisted_coproduct(&SymElement::p(sigma.clone()), t)?.iter() {
            accumulate(&mut right, (rho.clone(), s1.clone(), s2.clone()), c * d);
        }
    }
    left.retain(|_, v: &mut Scalar| !v.is_zero());
    right.retain(|_, v: &mut Scalar| !v.is_zero());
    Ok((left, right))
}

fn accumulate<K: Ord>(map: &mut BTreeMap<K, Scalar>, key: K, c: Scalar) {
    *map.entry(key).or_insert_with(Scalar::zero) += c;
}
