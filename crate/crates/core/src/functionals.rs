//! Linear functionals on `Sym`, stored as value tables on `p_μ` up to a degree cap.
//!
//! A functional on the `A` side of the twisted setting pairs with `P(·;t²)`,
//! one on the `B` side with `P̃(·;-t)`. The type is the same for both; the
//! side only matters to the operations that take a parameter.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hlbasis::{HLContext, ModifiedBasis};
use crate::partitions::{enumerate, enumerate_up_to, split_even, split_multiset, Partition};
use crate::scalar::{self, Scalar};
use crate::symring::SymElement;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functional {
    cap: usize,
    /// Values on `p_μ`; a missing entry with `|μ| ≤ cap` is zero.
    values: BTreeMap<Partition, Scalar>,
    spec: Option<Vec<Scalar>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlancherelKind {
    A,
    Even,
    Odd,
}

/// `φ(p_{μ∪κ}) ≠ φ(p_μ)` for the appended part(s) `κ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicViolation {
    pub mu: Partition,
    pub shifted: Scalar,
    pub original: Scalar,
}

/// `φ(P_λ) < 0` (or `φ(P̃_λ) < 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositivityWitness {
    pub lambda: Partition,
    pub value: Scalar,
}

impl Functional {
    /// Drops zero entries; every key must fit under `cap`.
    pub fn from_values(cap: usize, values: BTreeMap<Partition, Scalar>) -> Result<Self> {
        if let Some(mu) = values.keys().find(|mu| mu.size() > cap) {
            return Err(Error::DegreeCap {
                requested: mu.size(),
                cap,
            });
        }
        let values = values.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(Functional {
            cap,
            values,
            spec: None,
        })
    }

    /// The multiplicative functional with `φ(p_k) = spec[k-1]` and `φ(1) = 1`.
    pub fn multiplicative(spec: Vec<Scalar>, cap: usize) -> Result<Self> {
        if spec.len() < cap {
            return Err(Error::Constraint(format!(
                "a multiplicative spec of length {} cannot fill a table of cap {cap}",
                spec.len()
            )));
        }
        let spec: Vec<Scalar> = spec.into_iter().take(cap).collect();
        let values = enumerate_up_to(cap)
            .into_iter()
            .map(|mu| {
                let v = mu
                    .parts()
                    .iter()
                    .fold(Scalar::one(), |acc, &k| acc * &spec[k - 1]);
                (mu, v)
            })
            .filter(|(_, v)| !v.is_zero())
            .collect();
        Ok(Functional {
            cap,
            values,
            spec: Some(spec),
        })
    }

    /// The extreme point with finitely many parameters.
    pub fn extreme_phi(alpha: &[Scalar], beta: &[Scalar], t: &Scalar, cap: usize) -> Result<Self> {
        if !scalar::abs_below_one(t) {
            return Err(Error::ParameterRange(format!("|t| < 1 required, got {t}")));
        }
        for (name, seq) in [("alpha", alpha), ("beta", beta)] {
            if seq.iter().any(Signed::is_negative) {
                return Err(Error::Constraint(format!("{name} has a negative entry")));
            }
            if seq.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::Constraint(format!(
                    "{name} is not weakly decreasing"
                )));
            }
        }
        let one_minus_t = Scalar::one() - t;
        let total = alpha.iter().sum::<Scalar>() + beta.iter().sum::<Scalar>() / &one_minus_t;
        if total > Scalar::one() {
            return Err(Error::Constraint(format!(
                "sum(alpha) + sum(beta)/(1-t) = {total} exceeds 1"
            )));
        }
        let spec = (1..=cap)
            .map(|k| {
                if k == 1 {
                    return Scalar::one();
                }
                let a: Scalar = alpha.iter().map(|x| scalar::pow(x, k)).sum();
                let b: Scalar = beta.iter().map(|x| scalar::pow(x, k)).sum();
                a + scalar::sign(k % 2 == 1) * b / (Scalar::one() - scalar::pow(t, k))
            })
            .collect();
        Self::multiplicative(spec, cap)
    }

    /// `φ_row(p_k) = 1`.
    pub fn phi_row(cap: usize) -> Self {
        Self::multiplicative(vec![Scalar::one(); cap], cap).expect("spec covers the cap")
    }

    /// `φ_col(p_k) = (-1)^{k-1} (1-t)^k / (1-t^k)`.
    pub fn phi_col(t: &Scalar, cap: usize) -> Result<Self> {
        let beta = [Scalar::one() - t];
        Self::extreme_phi(&[], &beta, t, cap)
    }

    pub fn plancherel(kind: PlancherelKind, cap: usize) -> Self {
        let mut values = BTreeMap::new();
        for n in 0..=cap {
            let mu = match kind {
                PlancherelKind::A => Partition::column(n),
                PlancherelKind::Even => Partition::from_parts(vec![2; n]),
                PlancherelKind::Odd => Partition::from_parts(vec![2; n]).union(&Partition::row(1)),
            };
            if mu.size() <= cap {
                values.insert(mu, Scalar::one());
            }
        }
        Functional {
            cap,
            values,
            spec: None,
        }
    }

    /// `δ₀`: one on `p_∅`, zero elsewhere.
    pub fn counit(cap: usize) -> Self {
        let mut values = BTreeMap::new();
        values.insert(Partition::empty(), Scalar::one());
        Functional {
            cap,
            values,
            spec: None,
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn values(&self) -> &BTreeMap<Partition, Scalar> {
        &self.values
    }

    pub fn spec(&self) -> Option<&[Scalar]> {
        self.spec.as_deref()
    }

    pub fn value(&self, mu: &Partition) -> Result<Scalar> {
        if mu.size() > self.cap {
            return Err(Error::DegreeCap {
                requested: mu.size(),
                cap: self.cap,
            });
        }
        Ok(self.value_unchecked(mu))
    }

    fn value_unchecked(&self, mu: &Partition) -> Scalar {
        self.values.get(mu).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn evaluate(&self, f: &SymElement) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for (mu, c) in f.iter() {
            let v = self.value(mu)?;
            if !v.is_zero() {
                acc += c * v;
            }
        }
        Ok(acc)
    }

    /// The same functional on a smaller table.
    pub fn restrict(&self, cap: usize) -> Functional {
        let cap = cap.min(self.cap);
        Functional {
            cap,
            values: self
                .values
                .iter()
                .filter(|(mu, _)| mu.size() <= cap)
                .map(|(mu, v)| (mu.clone(), v.clone()))
                .collect(),
            spec: self.spec.as_ref().map(|s| s[..cap].to_vec()),
        }
    }

    /// Zero on every odd-degree `p_σ`.
    pub fn is_even_supported(&self) -> bool {
        self.values.keys().all(|mu| mu.size() % 2 == 0)
    }

    /// Zero on every even-degree `p_σ`.
    pub fn is_odd_supported(&self) -> bool {
        self.values.keys().all(|mu| mu.size() % 2 == 1)
    }

    fn map_values<F>(&self, f: F) -> Functional
    where
        F: Fn(&Partition, &Scalar) -> Scalar,
    {
        Functional {
            cap: self.cap,
            values: self
                .values
                .iter()
                .map(|(mu, v)| (mu.clone(), f(mu, v)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
            spec: None,
        }
    }

    /// `φ_r(a) = φ(a) r^{deg a}`, with `0^0 = 1`.
    pub fn dilate_a(&self, r: &Scalar) -> Functional {
        let mut out = self.map_values(|mu, v| v * scalar::pow(r, mu.size()));
        out.spec = self.spec.as_ref().map(|s| {
            s.iter()
                .enumerate()
                .map(|(i, x)| x * scalar::pow(r, i + 1))
                .collect()
        });
        out
    }

    /// `ψ(p_σ) ↦ ψ(p_σ) u^{|σ| - shift}` with `s = u²`.
    ///
    /// `shift = 1` is the normalised dilation `s^{-1/2} ψ_s`; it needs
    /// `ψ(1) = 0`.
    pub fn dilate_b(&self, u: &Scalar, shift: usize) -> Result<Functional> {
        self.check_shift(shift)?;
        if u.is_negative() {
            return Err(Error::ParameterRange(format!(
                "u must be nonnegative, got {u}"
            )));
        }
        Ok(self.map_values(|mu, v| v * scalar::pow(u, mu.size() - shift)))
    }

    /// `ψ(p_σ) ↦ ψ(p_σ) s^{(|σ| - shift)/2}` without a square root of `s`.
    ///
    /// Exact only when every `|σ| - shift` in the support is even, which is
    /// the case for even-supported `ψ` with `shift = 0` and odd-supported `ψ`
    /// with `shift = 1`.
    pub fn dilate_b_rational(&self, s: &Scalar, shift: usize) -> Result<Functional> {
        self.check_shift(shift)?;
        if s.is_negative() {
            return Err(Error::ParameterRange(format!(
                "s must be nonnegative, got {s}"
            )));
        }
        if let Some(mu) = self.values.keys().find(|mu| (mu.size() - shift) % 2 == 1) {
            return Err(Error::Constraint(format!(
                "s^(deg/2) is not rational at p{mu} unless s is a square; pass u = sqrt(s)"
            )));
        }
        Ok(self.map_values(|mu, v| v * scalar::pow(s, (mu.size() - shift) / 2)))
    }

    fn check_shift(&self, shift: usize) -> Result<()> {
        match shift {
            0 => Ok(()),
            1 if self.value_unchecked(&Partition::empty()).is_zero() => Ok(()),
            1 => Err(Error::Constraint(
                "the shifted dilation needs a functional vanishing at p[]".into(),
            )),
            _ => Err(Error::ParameterRange(format!(
                "shift must be 0 or 1, got {shift}"
            ))),
        }
    }

    /// `(φ * ψ)(a) = (φ ⊗ ψ)(Δ a)`.
    pub fn convolve_std(&self, other: &Functional) -> Functional {
        let cap = self.cap.min(other.cap);
        let values = build_table(cap, |mu| {
            let mut acc = Scalar::zero();
            for (rho, sigma, mult) in split_multiset(mu) {
                let a = self.value_unchecked(&rho);
                if a.is_zero() {
                    continue;
                }
                let b = other.value_unchecked(&sigma);
                if !b.is_zero() {
                    acc += a * b * scalar::int(mult as i64);
                }
            }
            acc
        });
        Functional {
            cap,
            values,
            spec: None,
        }
    }

    /// `(φ ⊛ ψ)(b) = (φ ⊗ ψ)(Δ̃ b)` with `self` on the `A` side and `other` on the `B` side.
    ///
    /// The result is capped at `min(ψ.cap, 2 φ.cap + 1)`.
    pub fn convolve_twisted(&self, other: &Functional, t: &Scalar) -> Result<Functional> {
        if !scalar::abs_below_one(t) {
            return Err(Error::ParameterRange(format!("|t| < 1 required, got {t}")));
        }
        let cap = other.cap.min(2 * self.cap + 1);
        let neg_t = -t.clone();
        let t2 = t * t;
        let rows = enumerate_up_to(cap)
            .into_par_iter()
            .map(|tau| -> Result<(Partition, Scalar)> {
                let z_tau = tau.z_factor(&neg_t)?;
                let mut acc = Scalar::zero();
                for (rho, sigma) in split_even(&tau) {
                    let a = self.value_unchecked(&rho);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.value_unchecked(&sigma);
                    if b.is_zero() {
                        continue;
                    }
                    let w = &z_tau / (rho.z_factor(&t2)? * sigma.z_factor(&neg_t)?);
                    acc += w * a * b;
                }
                Ok((tau, acc))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Functional {
            cap,
            values: rows.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
            spec: None,
        })
    }

    /// `ψ_even(p_{2ρ}) = φ(p_ρ) 2^{ℓ(ρ) - |ρ|}`, zero off `{2ρ}`. Capped at `2 φ.cap`.
    pub fn embed_even(&self, t: &Scalar) -> Result<Functional> {
        self.embed(t, false)
    }

    /// `ψ_odd(p_{2ρ ∪ (1)}) = φ(p_ρ) 2^{ℓ(ρ) - |ρ|}`, zero elsewhere. Capped at `2 φ.cap + 1`.
    pub fn embed_odd(&self, t: &Scalar) -> Result<Functional> {
        self.embed(t, true)
    }

    fn embed(&self, t: &Scalar, odd: bool) -> Result<Functional> {
        if !scalar::in_open_unit_interval(t) {
            return Err(Error::ParameterRange(format!(
                "the embeddings need t in (0,1), got {t}"
            )));
        }
        let two = scalar::int(2);
        let values = self
            .values
            .iter()
            .map(|(rho, v)| {
                let mut sigma = rho.double();
                if odd {
                    sigma = sigma.union(&Partition::row(1));
                }
                let w =
                    scalar::powi(&two, rho.len() as i64 - rho.size() as i64).expect("nonzero base");
                (sigma, v * w)
            })
            .collect();
        Ok(Functional {
            cap: 2 * self.cap + usize::from(odd),
            values,
            spec: None,
        })
    }

    /// First `μ` with `|μ| ≤ cap` and `φ(p_{μ∪(1)}) ≠ φ(p_μ)`.
    pub fn check_p1_harmonic(&self, cap: usize) -> Result<Option<HarmonicViolation>> {
        self.check_harmonic(cap, 1)
    }

    /// First `μ` with `|μ| ≤ cap` and `ψ(p_{μ∪(2)}) ≠ ψ(p_μ)`.
    pub fn check_p2_harmonic(&self, cap: usize) -> Result<Option<HarmonicViolation>> {
        self.check_harmonic(cap, 2)
    }

    fn check_harmonic(&self, cap: usize, k: usize) -> Result<Option<HarmonicViolation>> {
        if cap + k > self.cap {
            return Err(Error::DegreeCap {
                requested: cap + k,
                cap: self.cap,
            });
        }
        let part = Partition::row(k);
        for mu in enumerate_up_to(cap) {
            let original = self.value_unchecked(&mu);
            let shifted = self.value_unchecked(&mu.union(&part));
            if shifted != original {
                return Ok(Some(HarmonicViolation {
                    mu,
                    shifted,
                    original,
                }));
            }
        }
        Ok(None)
    }

    /// First `λ` with `|λ| ≤ cap` and `φ(P_λ(·;t)) < 0`, or with `P̃_λ(·;-t)` when `modified`.
    pub fn check_hl_positive(
        &self,
        t: &Scalar,
        cap: usize,
        modified: bool,
    ) -> Result<Option<PositivityWitness>> {
        if modified {
            self.check_modified_positive_with(&ModifiedBasis::new(t.clone(), cap)?, cap)
        } else {
            self.check_hl_positive_with(&HLContext::new(t.clone(), cap)?, cap)
        }
    }

    pub fn check_hl_positive_with(
        &self,
        ctx: &HLContext,
        cap: usize,
    ) -> Result<Option<PositivityWitness>> {
        self.first_negative(cap, |lam| ctx.hl_p(lam))
    }

    pub fn check_modified_positive_with(
        &self,
        basis: &ModifiedBasis,
        cap: usize,
    ) -> Result<Option<PositivityWitness>> {
        self.first_negative(cap, |lam| basis.p_tilde(lam))
    }

    fn first_negative<F>(&self, cap: usize, element: F) -> Result<Option<PositivityWitness>>
    where
        F: Fn(&Partition) -> Result<SymElement> + Sync,
    {
        if cap > self.cap {
            return Err(Error::DegreeCap {
                requested: cap,
                cap: self.cap,
            });
        }
        for n in 0..=cap {
            let values = enumerate(n)
                .into_par_iter()
                .map(|lam| Ok((self.evaluate(&element(&lam)?)?, lam)))
                .collect::<Result<Vec<_>>>()?;
            if let Some((value, lambda)) = values.into_iter().find(|(v, _)| v.is_negative()) {
                return Ok(Some(PositivityWitness { lambda, value }));
            }
        }
        Ok(None)
    }
}

fn build_table<F>(cap: usize, f: F) -> BTreeMap<Partition, Scalar>
where
    F: Fn(&Partition) -> Scalar + Sync,
{
    enumerate_up_to(cap)
        .into_par_iter()
        .map(|mu| {
            let v = f(&mu);
            (mu, v)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .collect()
}

/// Mixing parameters. Standard mixing has `r + s = 1`, twisted mixing `2r + s = 1`.
///
/// `u = √s` is kept when it is rational, since the `B`-side dilation needs
/// `s^{deg/2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixWeights {
    r: Scalar,
    s: Scalar,
    u: Option<Scalar>,
}

impl MixWeights {
    pub fn standard(r: Scalar, s: Scalar) -> Result<Self> {
        Self::validate(&r, &s)?;
        if &r + &s != Scalar::one() {
            return Err(Error::Constraint(format!(
                "standard mixing needs r + s = 1, got {r} + {s}"
            )));
        }
        let u = scalar::sqrt_exact(&s);
        Ok(MixWeights { r, s, u })
    }

    pub fn twisted(r: Scalar, s: Scalar) -> Result<Self> {
        Self::validate(&r, &s)?;
        if scalar::int(2) * &r + &s != Scalar::one() {
            return Err(Error::Constraint(format!(
                "twisted mixing needs 2r + s = 1, got 2*{r} + {s}"
            )));
        }
        let u = scalar::sqrt_exact(&s);
        Ok(MixWeights { r, s, u })
    }

    /// Twisted weights from `r` and `u`, with `s = u²`.
    pub fn twisted_sqrt(r: Scalar, u: Scalar) -> Result<Self> {
        if u.is_negative() {
            return Err(Error::ParameterRange(format!(
                "u must be nonnegative, got {u}"
            )));
        }
        let s = &u * &u;
        let mut w = Self::twisted(r, s)?;
        w.u = Some(u);
        Ok(w)
    }

    fn validate(r: &Scalar, s: &Scalar) -> Result<()> {
        if r.is_negative() || s.is_negative() {
            return Err(Error::ParameterRange(format!(
                "mixing weights must be nonnegative, got r = {r}, s = {s}"
            )));
        }
        Ok(())
    }

    pub fn r(&self) -> &Scalar {
        &self.r
    }

    pub fn s(&self) -> &Scalar {
        &self.s
    }

    pub fn u(&self) -> Option<&Scalar> {
        self.u.as_ref()
    }
}

/// `φ_r * ψ_s`.
pub fn mix_standard(phi: &Functional, psi: &Functional, w: &MixWeights) -> Functional {
    phi.dilate_a(w.r()).convolve_std(&psi.dilate_a(w.s()))
}

/// `φ_r ⊛ ψ_s`, or `φ_r ⊛ s^{-1/2} ψ_s` when `shift = 1`.
pub fn mix_twisted(
    phi: &Functional,
    psi: &Functional,
    w: &MixWeights,
    t: &Scalar,
    shift: usize,
) -> Result<Functional> {
    let psi_s = match w.u() {
        Some(u) => psi.dilate_b(u, shift)?,
        None => psi.dilate_b_rational(w.s(), shift)?,
    };
    phi.dilate_a(w.r()).convolve_twisted(&psi_s, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};
    use crate::symring::coproduct;
    use proptest::prelude::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn pe(v: &[usize]) -> SymElement {
        SymElement::p(p(v))
    }

    fn third() -> Scalar {
        frac(1, 3)
    }

    #[test]
    fn evaluate_examples() {
        let phi = Functional::phi_row(6);
        assert_eq!(phi.evaluate(&SymElement::zero()).unwrap(), int(0));
        assert_eq!(phi.evaluate(&SymElement::one()).unwrap(), int(1));
        let ctx = HLContext::new(third(), 6).unwrap();
        assert_eq!(phi.evaluate(&ctx.hl_p(&p(&[2])).unwrap()).unwrap(), int(1));
        assert!(matches!(
            phi.evaluate(&pe(&[7])),
            Err(Error::DegreeCap {
                requested: 7,
                cap: 6
            })
        ));
    }

    #[test]
    fn extreme_examples() {
        let t = third();
        let row = Functional::extreme_phi(&[int(1)], &[], &t, 8).unwrap();
        assert_eq!(row.values(), Functional::phi_row(8).values());

        let col = Functional::extreme_phi(&[], &[Scalar::one() - &t], &t, 8).unwrap();
        for k in 1..=8 {
            let expect = scalar::sign(k % 2 == 1) * scalar::pow(&(Scalar::one() - &t), k)
                / (Scalar::one() - scalar::pow(&t, k));
            assert_eq!(col.value(&Partition::row(k)).unwrap(), expect);
        }

        let half = Functional::extreme_phi(&[frac(1, 2)], &[], &t, 8).unwrap();
        assert_eq!(half.value(&p(&[2])).unwrap(), frac(1, 4));
        assert_eq!(half.value(&p(&[2, 2])).unwrap(), frac(1, 16));
        assert_eq!(half.value(&p(&[1])).unwrap(), int(1));
        assert_eq!(half.value(&p(&[])).unwrap(), int(1));
    }

    #[test]
    fn extreme_rejects_bad_parameters() {
        let t = third();
        assert!(matches!(
            Functional::extreme_phi(&[frac(1, 4), frac(1, 2)], &[], &t, 4),
            Err(Error::Constraint(_))
        ));
        assert!(matches!(
            Functional::extreme_phi(&[frac(3, 4)], &[frac(1, 4)], &t, 4),
            Err(Error::Constraint(_))
        ));
        assert!(matches!(
            Functional::extreme_phi(&[frac(-1, 4)], &[], &t, 4),
            Err(Error::Constraint(_))
        ));
        // 1/2 + (1/3)/(2/3) = 1 is on the boundary and allowed.
        assert!(Functional::extreme_phi(&[frac(1, 2)], &[frac(1, 3)], &t, 4).is_ok());
    }

    #[test]
    fn multiplicative_tables() {
        let spec = vec![int(2), frac(1, 3), int(-1)];
        let f = Functional::multiplicative(spec.clone(), 3).unwrap();
        assert_eq!(f.value(&p(&[])).unwrap(), int(1));
        assert_eq!(f.value(&p(&[1, 1, 1])).unwrap(), int(8));
        assert_eq!(f.value(&p(&[2, 1])).unwrap(), frac(2, 3));
        assert_eq!(f.value(&p(&[3])).unwrap(), int(-1));
        assert_eq!(f.spec(), Some(&spec[..]));
        assert!(Functional::multiplicative(spec, 4).is_err());
    }

    #[test]
    fn row_and_column_values() {
        for t in [third(), frac(2, 5)] {
            let ctx = HLContext::new(t.clone(), 8).unwrap();
            let row = Functional::phi_row(8);
            let col = Functional::phi_col(&t, 8).unwrap();
            assert_eq!(
                row.evaluate(&ctx.hl_p(&p(&[2, 1])).unwrap()).unwrap(),
                int(0)
            );
            let one_minus_t = Scalar::one() - &t;
            assert_eq!(
                col.evaluate(&ctx.hl_q(&p(&[1, 1])).unwrap()).unwrap(),
                &one_minus_t * &one_minus_t
            );
            assert_eq!(col.evaluate(&ctx.hl_q(&p(&[2])).unwrap()).unwrap(), int(0));
            for lam in enumerate_up_to(8) {
                let r = row.evaluate(&ctx.hl_p(&lam).unwrap()).unwrap();
                assert_eq!(r, if lam.is_row() { int(1) } else { int(0) }, "{lam}");
                let c = col.evaluate(&ctx.hl_q(&lam).unwrap()).unwrap();
                let expect = if lam.is_column() {
                    scalar::pow(&one_minus_t, lam.size())
                } else {
                    int(0)
                };
                assert_eq!(c, expect, "{lam}");
            }
        }
    }

    #[test]
    fn plancherel_examples() {
        let a = Functional::plancherel(PlancherelKind::A, 6);
        assert_eq!(a.value(&p(&[1, 1, 1])).unwrap(), int(1));
        assert_eq!(a.value(&p(&[2, 1])).unwrap(), int(0));
        assert_eq!(a.value(&p(&[])).unwrap(), int(1));
        let even = Functional::plancherel(PlancherelKind::Even, 6);
        assert_eq!(even.value(&p(&[2, 2])).unwrap(), int(1));
        assert_eq!(even.value(&p(&[1, 1])).unwrap(), int(0));
        let odd = Functional::plancherel(PlancherelKind::Odd, 6);
        assert_eq!(odd.value(&p(&[2, 1])).unwrap(), int(1));
        assert_eq!(odd.value(&p(&[1])).unwrap(), int(1));
        assert_eq!(odd.value(&p(&[3])).unwrap(), int(0));
        assert_eq!(odd.value(&p(&[])).unwrap(), int(0));
        assert_eq!(odd.values().len(), 3);
    }

    #[test]
    fn dilation_examples() {
        let row = Functional::phi_row(6);
        assert_eq!(row.dilate_a(&int(1)), row);
        let delta = row.dilate_a(&int(0));
        assert_eq!(delta.values(), Functional::counit(6).values());
        assert_eq!(
            row.dilate_a(&frac(1, 2)).value(&p(&[2, 1])).unwrap(),
            frac(1, 8)
        );

        let even = Functional::plancherel(PlancherelKind::Even, 6);
        assert_eq!(even.dilate_b(&int(1), 0).unwrap(), even);
        assert_eq!(
            even.dilate_b(&frac(1, 2), 0)
                .unwrap()
                .value(&p(&[2, 2]))
                .unwrap(),
            frac(1, 16)
        );
        assert_eq!(
            even.dilate_b_rational(&frac(1, 4), 0).unwrap(),
            even.dilate_b(&frac(1, 2), 0).unwrap()
        );

        let odd = Functional::plancherel(PlancherelKind::Odd, 7);
        let shifted = odd.dilate_b(&int(0), 1).unwrap();
        assert_eq!(shifted.value(&p(&[1])).unwrap(), int(1));
        assert_eq!(shifted.value(&p(&[2, 1])).unwrap(), int(0));
        assert_eq!(
            odd.dilate_b_rational(&frac(1, 2), 1)
                .unwrap()
                .value(&p(&[2, 2, 1]))
                .unwrap(),
            frac(1, 4)
        );
        assert!(matches!(
            even.dilate_b(&int(0), 1),
            Err(Error::Constraint(_))
        ));
        assert!(matches!(
            odd.dilate_b_rational(&frac(1, 2), 0),
            Err(Error::Constraint(_))
        ));
    }

    #[test]
    fn convolution_examples() {
        let row = Functional::phi_row(6);
        let delta = Functional::counit(6);
        assert_eq!(row.convolve_std(&delta).values(), row.values());
        assert_eq!(row.convolve_std(&row).value(&p(&[1])).unwrap(), int(2));
    }

    #[test]
    fn convolve_std_matches_coproduct() {
        let t = third();
        let phi = Functional::phi_col(&t, 6).unwrap();
        let psi = Functional::extreme_phi(&[frac(1, 2)], &[frac(1, 5)], &t, 6).unwrap();
        let conv = phi.convolve_std(&psi);
        for mu in enumerate_up_to(6) {
            let expect: Scalar = coproduct(&SymElement::p(mu.clone()))
                .iter()
                .map(|((a, b), c)| c * phi.value(a).unwrap() * psi.value(b).unwrap())
                .sum();
            assert_eq!(conv.value(&mu).unwrap(), expect, "{mu}");
        }
    }

    #[test]
    fn twisted_convolution_examples() {
        let t = third();
        let phi = Functional::extreme_phi(&[frac(1, 2)], &[], &(&t * &t), 4).unwrap();
        let psi = Functional::from_values(
            8,
            [
                (p(&[]), frac(2, 3)),
                (p(&[1]), frac(1, 7)),
                (p(&[2]), frac(5, 11)),
            ]
            .into_iter()
            .collect(),
        )
        .unwrap();
        let conv = phi.convolve_twisted(&psi, &t).unwrap();
        assert_eq!(conv.cap(), 8);
        assert_eq!(conv.value(&p(&[1])).unwrap(), frac(1, 7));
        assert_eq!(
            conv.value(&p(&[2])).unwrap(),
            int(2) * frac(2, 3) + frac(5, 11)
        );

        let w = MixWeights::twisted(frac(1, 4), frac(1, 2)).unwrap();
        let harmonic = Functional::plancherel(PlancherelKind::Even, 8);
        let mixed = mix_twisted(&Functional::phi_row(4), &harmonic, &w, &t, 0).unwrap();
        assert_eq!(mixed.value(&p(&[2])).unwrap(), int(1));
    }

    #[test]
    fn embedding_examples() {
        let t = third();
        let t2 = &t * &t;
        let phi =
            Functional::extreme_phi(&[frac(1, 2), frac(1, 4)], &[frac(1, 8)], &t2, 5).unwrap();
        let even = phi.embed_even(&t).unwrap();
        assert_eq!(even.cap(), 10);
        assert_eq!(even.value(&p(&[])).unwrap(), int(1));
        assert_eq!(even.value(&p(&[2])).unwrap(), phi.value(&p(&[1])).unwrap());
        assert_eq!(even.value(&p(&[1, 1])).unwrap(), int(0));
        assert_eq!(
            even.value(&p(&[4, 2])).unwrap(),
            phi.value(&p(&[2, 1])).unwrap() / int(2)
        );
        assert!(even.is_even_supported());

        let odd = phi.embed_odd(&t).unwrap();
        assert_eq!(odd.cap(), 11);
        assert_eq!(odd.value(&p(&[1])).unwrap(), int(1));
        assert_eq!(
            odd.value(&p(&[2, 1])).unwrap(),
            phi.value(&p(&[1])).unwrap()
        );
        assert_eq!(odd.value(&p(&[3])).unwrap(), int(0));
        assert!(odd.is_odd_supported());
        assert!(phi.embed_even(&-t).is_err());
    }

    #[test]
    fn embedding_matches_pullback_on_q_tilde() {
        use crate::hlbasis::TwistedStructure;
        let t = third();
        let tw = TwistedStructure::new(t.clone(), 9).unwrap();
        let phi = Functional::extreme_phi(&[frac(1, 2)], &[frac(1, 4)], &(&t * &t), 4).unwrap();
        let even = phi.embed_even(&t).unwrap();
        let odd = phi.embed_odd(&t).unwrap();
        for (psi, nu, max_n) in [(&even, p(&[]), 4), (&odd, p(&[1]), 4)] {
            for n in 0..=max_n {
                let size = 2 * n + nu.size();
                let scale = if nu.is_empty() {
                    Scalar::one()
                } else {
                    Scalar::one() + &t
                } / scalar::pow(&int(2), n);
                for lam in enumerate(size) {
                    let mut expect = Scalar::zero();
                    for mu in enumerate(n) {
                        let f = tw.structconst_ftilde(&mu, &nu).unwrap();
                        if let Some(c) = f.get(&lam) {
                            expect += c * phi.evaluate(&tw.a_side().hl_q(&mu).unwrap()).unwrap();
                        }
                    }
                    let got = psi.evaluate(&tw.b_side().q_tilde(&lam).unwrap()).unwrap();
                    assert_eq!(got, expect * &scale, "{lam}");
                }
            }
        }
    }

    #[test]
    fn harmonicity_checks() {
        assert_eq!(Functional::phi_row(9).check_p1_harmonic(8).unwrap(), None);
        assert_eq!(
            Functional::plancherel(PlancherelKind::Even, 10)
                .check_p2_harmonic(8)
                .unwrap(),
            None
        );
        let v = Functional::counit(9).check_p1_harmonic(8).unwrap().unwrap();
        assert_eq!(v.mu, p(&[]));
        assert_eq!(v.original, int(1));
        assert_eq!(v.shifted, int(0));
        assert!(Functional::phi_row(8).check_p1_harmonic(8).is_err());
    }

    #[test]
    fn positivity_checks() {
        let t = third();
        assert_eq!(
            Functional::phi_row(8)
                .check_hl_positive(&t, 8, false)
                .unwrap(),
            None
        );
        let even = Functional::phi_row(4).embed_even(&t).unwrap();
        assert_eq!(even.check_hl_positive(&t, 8, true).unwrap(), None);

        let alternating = Functional::multiplicative(vec![int(-1); 4], 4).unwrap();
        let w = alternating
            .check_hl_positive(&t, 4, false)
            .unwrap()
            .unwrap();
        assert_eq!(w.lambda, p(&[1]));
        assert_eq!(w.value, int(-1));
    }

    #[test]
    fn mix_weights_validation() {
        assert!(MixWeights::standard(frac(1, 4), frac(3, 4)).is_ok());
        assert!(MixWeights::standard(frac(1, 4), frac(1, 4)).is_err());
        assert!(MixWeights::twisted(frac(1, 4), frac(1, 2))
            .unwrap()
            .u()
            .is_none());
        assert_eq!(
            MixWeights::twisted(frac(3, 8), frac(1, 4)).unwrap().u(),
            Some(&frac(1, 2))
        );
        assert!(MixWeights::twisted(frac(1, 2), frac(1, 2)).is_err());
        assert!(MixWeights::twisted(frac(-1, 2), int(2)).is_err());
        let w = MixWeights::twisted_sqrt(frac(3, 8), frac(1, 2)).unwrap();
        assert_eq!(w.s(), &frac(1, 4));
    }

    #[test]
    fn kerov_closure() {
        let t = third();
        let cap = 8;
        let ctx = HLContext::new(t.clone(), cap).unwrap();
        let samples = [
            Functional::phi_row(cap + 1),
            Functional::phi_col(&t, cap + 1).unwrap(),
            Functional::extreme_phi(&[frac(1, 2)], &[frac(1, 5)], &t, cap + 1).unwrap(),
        ];
        let weights = [
            (int(1), int(0)),
            (frac(1, 2), frac(1, 2)),
            (frac(1, 4), frac(3, 4)),
        ];
        for phi in &samples {
            for psi in &samples {
                for (r, s) in &weights {
                    let w = MixWeights::standard(r.clone(), s.clone()).unwrap();
                    let mixed = mix_standard(phi, psi, &w);
                    assert_eq!(mixed.check_p1_harmonic(cap).unwrap(), None);
                    assert_eq!(mixed.check_hl_positive_with(&ctx, cap).unwrap(), None);
                    assert_eq!(mixed.value(&p(&[])).unwrap(), int(1));
                }
            }
        }
    }

    #[test]
    fn mixing_reconstructs_extremes() {
        let t = third();
        for (a1, a2) in [
            (frac(1, 2), frac(1, 2)),
            (frac(2, 3), frac(1, 3)),
            (frac(3, 5), frac(2, 5)),
        ] {
            let row = Functional::phi_row(8);
            let mixed = row.dilate_a(&a1).convolve_std(&row.dilate_a(&a2));
            let extreme = Functional::extreme_phi(&[a1.clone(), a2.clone()], &[], &t, 8).unwrap();
            assert_eq!(mixed.values(), extreme.values());
        }
    }

    #[test]
    fn embedding_limit_of_twisted_mixing() {
        let t = third();
        let t2 = &t * &t;
        let phi = Functional::phi_col(&t2, 3).unwrap();
        let arbitrary = Functional::from_values(
            6,
            [
                (p(&[]), int(1)),
                (p(&[2]), frac(7, 3)),
                (p(&[1, 1]), int(-4)),
                (p(&[4, 2]), int(9)),
            ]
            .into_iter()
            .collect(),
        )
        .unwrap();
        let w = MixWeights::twisted_sqrt(frac(1, 2), int(0)).unwrap();
        let limit = mix_twisted(&phi, &arbitrary, &w, &t, 0).unwrap();
        let embedded = phi.embed_even(&t).unwrap();
        for mu in enumerate_up_to(6).into_iter().filter(|m| m.size() % 2 == 0) {
            assert_eq!(
                limit.value(&mu).unwrap(),
                embedded.value(&mu).unwrap(),
                "{mu}"
            );
        }

        let arbitrary_odd = Functional::from_values(
            7,
            [
                (p(&[1]), int(1)),
                (p(&[3]), frac(2, 9)),
                (p(&[2, 1]), int(5)),
            ]
            .into_iter()
            .collect(),
        )
        .unwrap();
        let limit = mix_twisted(&phi, &arbitrary_odd, &w, &t, 1).unwrap();
        let embedded = phi.embed_odd(&t).unwrap();
        for mu in enumerate_up_to(7).into_iter().filter(|m| m.size() % 2 == 1) {
            assert_eq!(
                limit.value(&mu).unwrap(),
                embedded.value(&mu).unwrap(),
                "{mu}"
            );
        }
    }

    #[test]
    fn plancherel_correspondence() {
        let t = third();
        let a = Functional::plancherel(PlancherelKind::A, 5);
        assert_eq!(
            a.embed_even(&t).unwrap().values(),
            Functional::plancherel(PlancherelKind::Even, 10).values()
        );
        assert_eq!(
            a.embed_odd(&t).unwrap().values(),
            Functional::plancherel(PlancherelKind::Odd, 11).values()
        );
    }

    fn arb_functional(cap: usize) -> impl Strategy<Value = Functional> {
        let parts = enumerate_up_to(cap);
        proptest::collection::vec((-4i64..5, 1i64..4), parts.len()).prop_map(move |vals| {
            let values = parts
                .iter()
                .cloned()
                .zip(vals.into_iter().map(|(n, d)| frac(n, d)))
                .collect();
            Functional::from_values(cap, values).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn convolution_is_commutative_and_associative(
            a in arb_functional(6),
            b in arb_functional(6),
            c in arb_functional(6),
        ) {
            prop_assert_eq!(a.convolve_std(&b), b.convolve_std(&a));
            prop_assert_eq!(
                a.convolve_std(&b).convolve_std(&c),
                a.convolve_std(&b.convolve_std(&c))
            );
        }

        #[test]
        fn twisted_mixing_preserves_parity(psi in arb_functional(6), phi in arb_functional(3)) {
            let t = third();
            let even = Functional::from_values(
                6,
                psi.values().iter().filter(|(m, _)| m.size() % 2 == 0).map(|(m, v)| (m.clone(), v.clone())).collect(),
            ).unwrap();
            let odd = Functional::from_values(
                6,
                psi.values().iter().filter(|(m, _)| m.size() % 2 == 1).map(|(m, v)| (m.clone(), v.clone())).collect(),
            ).unwrap();
            prop_assert!(phi.convolve_twisted(&even, &t).unwrap().is_even_supported());
            prop_assert!(phi.convolve_twisted(&odd, &t).unwrap().is_odd_supported());
        }

        #[test]
        fn evaluation_is_linear(phi in arb_functional(4), a in -5i64..6, b in -5i64..6) {
            let f = pe(&[2, 1]).add(&pe(&[1]).scale(&frac(1, 2)));
            let g = pe(&[4]).add(&pe(&[]));
            let combo = f.scale(&int(a)).add(&g.scale(&int(b)));
            prop_assert_eq!(
                phi.evaluate(&combo).unwrap(),
                int(a) * phi.evaluate(&f).unwrap() + int(b) * phi.evaluate(&g).unwrap()
            );
        }
    }
}
