//! Named bases of `Sym` and the textual element grammar.
//!
//! An element is a signed sum of terms `c*B[λ]`, where `c` is an optional
//! exact rational, `B` one of `p`, `P`, `Q`, `Pt`, `Qt`, and `λ` a
//! partition. A bare rational stands for a multiple of `1`; a bare `[λ]`
//! takes the caller's default basis.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hlbasis::{HLContext, ModifiedBasis};
use crate::partitions::Partition;
use crate::scalar::{self, Scalar};
use crate::symring::{format_combination, SymElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    /// Power sums `p_λ`.
    Power,
    /// `P_λ(·;t)`.
    HallP,
    /// `Q_λ(·;t)`.
    HallQ,
    /// `P̃_λ(·;-t)`.
    ModifiedP,
    /// `Q̃_λ(·;-t)`.
    ModifiedQ,
}

impl Basis {
    pub fn symbol(self) -> &'static str {
        match self {
            Basis::Power => "p",
            Basis::HallP => "P",
            Basis::HallQ => "Q",
            Basis::ModifiedP => "Pt",
            Basis::ModifiedQ => "Qt",
        }
    }

    fn is_modified(self) -> bool {
        matches!(self, Basis::ModifiedP | Basis::ModifiedQ)
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "p" => Ok(Basis::Power),
            "P" => Ok(Basis::HallP),
            "Q" => Ok(Basis::HallQ),
            "Pt" | "Ptilde" => Ok(Basis::ModifiedP),
            "Qt" | "Qtilde" => Ok(Basis::ModifiedQ),
            other => Err(Error::Parse(format!("unknown basis `{other}`"))),
        }
    }
}

/// One parsed term `c * B[λ]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub basis: Option<Basis>,
    pub partition: Partition,
    pub coeff: Scalar,
}

/// Parses `3/2*p[2,1] - P[1] + 2`.
pub fn parse_element(text: &str) -> Result<Vec<Term>> {
    let mut pieces: Vec<(bool, String)> = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    let mut depth = 0usize;
    for ch in text.chars() {
        match ch {
            '[' => {
                depth += 1;
                current.push(ch);
            }
            ']' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::Parse(format!("unbalanced `]` in `{text}`")))?;
                current.push(ch);
            }
            '+' | '-' if depth == 0 => {
                let trimmed = current.trim();
                if trimmed.is_empty() || trimmed.ends_with('*') || trimmed.ends_with('/') {
                    if ch == '-' {
                        if trimmed.is_empty() {
                            negative = !negative;
                        } else {
                            current.push(ch);
                        }
                    }
                    continue;
                }
                pieces.push((negative, std::mem::take(&mut current)));
                negative = ch == '-';
            }
            _ => current.push(ch),
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced `[` in `{text}`")));
    }
    if current.trim().is_empty() {
        if !pieces.is_empty() || negative {
            return Err(Error::Parse(format!("dangling sign in `{text}`")));
        }
        return Err(Error::Parse("empty element".into()));
    }
    pieces.push((negative, current));
    pieces
        .into_iter()
        .map(|(neg, piece)| {
            let mut term = parse_term(piece.trim())?;
            if neg {
                term.coeff = -term.coeff;
            }
            Ok(term)
        })
        .collect()
}

fn parse_term(piece: &str) -> Result<Term> {
    let (coeff, rest) = match piece.split_once('*') {
        Some((c, rest)) => (scalar::parse(c)?, rest.trim()),
        None if piece.starts_with(|c: char| c.is_ascii_alphabetic() || c == '[') => {
            (scalar::int(1), piece)
        }
        None => {
            return Ok(Term {
                basis: None,
                partition: Partition::empty(),
                coeff: scalar::parse(piece)?,
            })
        }
    };
    if rest.starts_with('[') {
        return Ok(Term {
            basis: None,
            partition: rest.parse()?,
            coeff,
        });
    }
    let open = rest
        .find('[')
        .ok_or_else(|| Error::Parse(format!("`{piece}` has no partition")))?;
    if !rest.ends_with(']') {
        return Err(Error::Parse(format!("`{piece}` must end with a partition")));
    }
    Ok(Term {
        basis: Some(rest[..open].parse()?),
        partition: rest[open..].parse()?,
        coeff,
    })
}

/// Lazily built HL data for converting between bases at one parameter.
#[derive(Debug)]
pub struct Converter {
    t: Scalar,
    cap: usize,
    plain: Option<HLContext>,
    modified: Option<ModifiedBasis>,
}

impl Converter {
    pub fn new(t: Scalar, cap: usize) -> Result<Self> {
        if !scalar::abs_below_one(&t) {
            return Err(Error::ParameterRange(format!("|t| < 1 required, got {t}")));
        }
        Ok(Converter {
            t,
            cap,
            plain: None,
            modified: None,
        })
    }

    fn plain(&mut self) -> Result<&HLContext> {
        if self.plain.is_none() {
            self.plain = Some(HLContext::new(self.t.clone(), self.cap)?);
        }
        Ok(self.plain.as_ref().expect("just set"))
    }

    fn modified(&mut self) -> Result<&ModifiedBasis> {
        if self.modified.is_none() {
            self.modified = Some(ModifiedBasis::new(self.t.clone(), self.cap)?);
        }
        Ok(self.modified.as_ref().expect("just set"))
    }

    /// `B_λ` in power sums.
    pub fn to_power_sums(&mut self, basis: Basis, lam: &Partition) -> Result<SymElement> {
        if lam.size() > self.cap {
            return Err(Error::DegreeCap {
                requested: lam.size(),
                cap: self.cap,
            });
        }
        match basis {
            Basis::Power => Ok(SymElement::p(lam.clone())),
            Basis::HallP => self.plain()?.hl_p(lam),
            Basis::HallQ => self.plain()?.hl_q(lam),
            Basis::ModifiedP => self.modified()?.p_tilde(lam),
            Basis::ModifiedQ => self.modified()?.q_tilde(lam),
        }
    }

    /// Sums the terms in power sums; terms without a basis use `default`.
    pub fn element(&mut self, terms: &[Term], default: Basis) -> Result<SymElement> {
        let mut out = SymElement::zero();
        for term in terms {
            let basis = term.basis.unwrap_or(default);
            let basis = if term.partition.is_empty() {
                Basis::Power
            } else {
                basis
            };
            out = out.add(
                &self
                    .to_power_sums(basis, &term.partition)?
                    .scale(&term.coeff),
            );
        }
        Ok(out)
    }

    /// Coefficients of `f` in `basis`.
    pub fn expand(&mut self, f: &SymElement, basis: Basis) -> Result<BTreeMap<Partition, Scalar>> {
        if let Some(d) = f.degree() {
            if d > self.cap {
                return Err(Error::DegreeCap {
                    requested: d,
                    cap: self.cap,
                });
            }
        }
        let t = self.t.clone();
        let mut coeffs = match basis {
            Basis::Power => f.terms().clone(),
            Basis::HallP | Basis::HallQ => self.plain()?.expand_in_p(f)?,
            Basis::ModifiedP | Basis::ModifiedQ => self.modified()?.expand(f)?,
        };
        if matches!(basis, Basis::HallQ | Basis::ModifiedQ) {
            let param = if basis.is_modified() { -t } else { t };
            for (lam, c) in coeffs.iter_mut() {
                *c = &*c / lam.b_factor(&param);
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(coeffs)
    }
}

/// Power sums by increasing degree and then lexicographically (`p[1,1]` before `p[2]`);
/// HL bases in the crate order (`P[2]` before `P[1,1]`).
pub fn format_in_basis(basis: Basis, coeffs: &BTreeMap<Partition, Scalar>) -> String {
    let mut terms: Vec<(&Partition, &Scalar)> = coeffs.iter().collect();
    if basis == Basis::Power {
        terms.sort_by(|a, b| {
            a.0.size()
                .cmp(&b.0.size())
                .then_with(|| a.0.parts().cmp(b.0.parts()))
        });
    }
    format_combination(
        terms
            .into_iter()
            .map(|(lam, c)| (format!("{}{lam}", basis.symbol()), c)),
    )
}
