//! Integer partitions and the Young-lattice relations used by the branching graphs.
//!
//! A [`Partition`] is stored without trailing zeros, so `[]` is the empty
//! partition. Partitions are totally ordered by size first and then
//! reverse-lexicographically, so that `(2)` precedes `(1,1)`; within one
//! degree this refines the dominance order with the largest element first.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Validates that `parts` is weakly decreasing; trailing zeros are dropped.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        let mut parts = parts;
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::Parse(format!(
                "{parts:?} is not a weakly decreasing sequence of positive integers"
            )));
        }
        Ok(Partition(parts))
    }

    /// Sorts arbitrary positive parts into a partition, dropping zeros.
    pub fn from_parts<I: IntoIterator<Item = usize>>(parts: I) -> Self {
        let mut v: Vec<usize> = parts.into_iter().filter(|&p| p > 0).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition(v)
    }

    pub fn row(n: usize) -> Self {
        Partition::from_parts([n])
    }

    pub fn column(n: usize) -> Self {
        Partition(vec![1; n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `λ_i` with 1-based `i`, zero past the end.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn multiplicity(&self, i: usize) -> usize {
        self.0.iter().filter(|&&p| p == i).count()
    }

    /// Map from part size to multiplicity `m_i(λ)`.
    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &p in &self.0 {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    pub fn is_row(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn is_column(&self) -> bool {
        self.0.iter().all(|&p| p == 1)
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.part(1);
        Partition(
            (1..=first)
                .map(|j| self.0.iter().filter(|&&p| p >= j).count())
                .collect(),
        )
    }

    /// `n(λ) = Σ (i-1) λ_i`.
    pub fn n_stat(&self) -> usize {
        self.0.iter().enumerate().map(|(i, p)| i * p).sum()
    }

    /// `(2λ_1, 2λ_2, ...)`.
    pub fn double(&self) -> Partition {
        Partition(self.0.iter().map(|p| 2 * p).collect())
    }

    /// `ρ` with `2ρ = self`, or `None` when some part is odd.
    pub fn halve(&self) -> Option<Partition> {
        if self.0.iter().all(|p| p % 2 == 0) {
            Some(Partition(self.0.iter().map(|p| p / 2).collect()))
        } else {
            None
        }
    }

    /// Multiset union `λ ∪ μ`.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut v = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            if j == other.0.len() || (i < self.0.len() && self.0[i] >= other.0[j]) {
                v.push(self.0[i]);
                i += 1;
            } else {
                v.push(other.0[j]);
                j += 1;
            }
        }
        Partition(v)
    }

    /// Containment of Young diagrams `self ⊆ other`.
    pub fn is_contained_in(&self, other: &Partition) -> bool {
        self.len() <= other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Boxes `(row, column)` of the skew diagram `other / self`, 1-based.
    pub fn skew_cells(&self, other: &Partition) -> Vec<(usize, usize)> {
        let mut cells = Vec::new();
        for i in 1..=other.len() {
            for j in self.part(i) + 1..=other.part(i) {
                cells.push((i, j));
            }
        }
        cells
    }

    /// `z_κ(t) = z_κ Π_i (1 - t^i)^{-m_i(κ)}`, with `z_κ = Π i^{m_i} m_i!`.
    pub fn z_factor(&self, t: &Scalar) -> Result<Scalar> {
        let mut z = Scalar::one();
        for (&i, &m) in &self.multiplicities() {
            let mut fact = Scalar::one();
            for k in 1..=m {
                fact *= scalar::int(k as i64);
            }
            let base = Scalar::one() - scalar::pow(t, i);
            if base.is_zero() {
                return Err(Error::DivisionByZero(format!(
                    "1 - t^{i} vanishes at t = {t} in z_{self}(t)"
                )));
            }
            z *= scalar::pow(&scalar::int(i as i64), m) * fact / scalar::pow(&base, m);
        }
        Ok(z)
    }

    /// `b_λ(t) = Π_i (t;t)_{m_i(λ)}`.
    pub fn b_factor(&self, t: &Scalar) -> Scalar {
        self.multiplicities()
            .values()
            .map(|&m| q_pochhammer(t, m))
            .product()
    }
}

/// `(t;t)_m = (1-t)(1-t^2)...(1-t^m)`.
pub fn q_pochhammer(t: &Scalar, m: usize) -> Scalar {
    (1..=m).map(|k| Scalar::one() - scalar::pow(t, k)).product()
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;

    /// Accepts `[3,1,1]`, `[]`, and the bracket-free form `3,1,1`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim();
        let inner = inner
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .unwrap_or(inner)
            .trim();
        if inner.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("`{s}` is not a partition")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// All partitions of `n`, largest first in reverse-lexicographic order.
pub fn enumerate(n: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        for first in (1..=rest.min(max)).rev() {
            prefix.push(first);
            go(rest - first, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// All partitions with size at most `n`, in the crate order.
pub fn enumerate_up_to(n: usize) -> Vec<Partition> {
    (0..=n).flat_map(enumerate).collect()
}

/// Every `λ` with `μ ↗ λ`, paired with the (1-based) column of the added box.
pub fn covers_box(mu: &Partition) -> Vec<(Partition, usize)> {
    let mut out = Vec::new();
    for i in 1..=mu.len() + 1 {
        let row = mu.part(i);
        if i == 1 || mu.part(i - 1) > row {
            let mut parts = mu.0.clone();
            if i > mu.len() {
                parts.push(1);
            } else {
                parts[i - 1] += 1;
            }
            out.push((Partition(parts), row + 1));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Every `λ` with `ν ⇗ λ`: two added boxes in one column or in adjacent columns.
pub fn covers_two(nu: &Partition) -> Vec<Partition> {
    let mut out: Vec<Partition> = covers_box(nu)
        .into_iter()
        .flat_map(|(mid, _)| covers_box(&mid))
        .map(|(lam, _)| lam)
        .filter(|lam| is_two_cover(nu, lam))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// The relation `ν ⇗ λ`.
pub fn is_two_cover(nu: &Partition, lam: &Partition) -> bool {
    if lam.size() != nu.size() + 2 || !nu.is_contained_in(lam) {
        return false;
    }
    let cells = nu.skew_cells(lam);
    cells.len() == 2 && cells[0].1.abs_diff(cells[1].1) <= 1
}

/// Dominance `μ ≤ λ`; both must have the same size.
pub fn dominance_leq(mu: &Partition, lam: &Partition) -> Result<bool> {
    if mu.size() != lam.size() {
        return Err(Error::SizeMismatch(mu.clone(), lam.clone()));
    }
    let (mut a, mut b) = (0, 0);
    for k in 1..=mu.len().max(lam.len()) {
        a += mu.part(k);
        b += lam.part(k);
        if a > b {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All pairs `(ρ, σ)` with `(2ρ) ∪ σ = τ`.
pub fn split_even(tau: &Partition) -> Vec<(Partition, Partition)> {
    let mults: Vec<(usize, usize)> = tau.multiplicities().into_iter().collect();
    let mut out = Vec::new();
    // choice[k] = how many copies of an even part 2j go to ρ as j
    fn go(
        mults: &[(usize, usize)],
        idx: usize,
        rho: &mut Vec<usize>,
        sigma: &mut Vec<usize>,
        out: &mut Vec<(Partition, Partition)>,
    ) {
        if idx == mults.len() {
            out.push((
                Partition::from_parts(rho.iter().copied()),
                Partition::from_parts(sigma.iter().copied()),
            ));
            return;
        }
        let (part, m) = mults[idx];
        let max_to_rho = if part % 2 == 0 { m } else { 0 };
        for k in 0..=max_to_rho {
            let (r0, s0) = (rho.len(), sigma.len());
            rho.extend(std::iter::repeat_n(part / 2, k));
            sigma.extend(std::iter::repeat_n(part, m - k));
            go(mults, idx + 1, rho, sigma, out);
            rho.truncate(r0);
            sigma.truncate(s0);
        }
    }
    go(&mults, 0, &mut Vec::new(), &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Sub-multisets `ρ ⊆ μ` with complement `σ` and multiplicity `Π_i C(m_i(μ), m_i(ρ))`.
pub fn split_multiset(mu: &Partition) -> Vec<(Partition, Partition, u64)> {
    let mults: Vec<(usize, usize)> = mu.multiplicities().into_iter().collect();
    let mut out = Vec::new();
    fn go(
        mults: &[(usize, usize)],
        idx: usize,
        left: &mut Vec<usize>,
        right: &mut Vec<usize>,
        coeff: u64,
        out: &mut Vec<(Partition, Partition, u64)>,
    ) {
        if idx == mults.len() {
            out.push((
                Partition::from_parts(left.iter().copied()),
                Partition::from_parts(right.iter().copied()),
                coeff,
            ));
            return;
        }
        let (part, m) = mults[idx];
        for k in 0..=m {
            let (l0, r0) = (left.len(), right.len());
            left.extend(std::iter::repeat_n(part, k));
            right.extend(std::iter::repeat_n(part, m - k));
            go(mults, idx + 1, left, right, coeff * binomial(m, k), out);
            left.truncate(l0);
            right.truncate(r0);
        }
    }
    go(&mults, 0, &mut Vec::new(), &mut Vec::new(), 1, &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};
    use proptest::prelude::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(p(&[]).conjugate(), p(&[]));
        assert_eq!(p(&[3]).conjugate(), p(&[1, 1, 1]));
        assert_eq!(p(&[2, 1]).conjugate(), p(&[2, 1]));
    }

    #[test]
    fn n_stat_examples() {
        assert_eq!(p(&[]).n_stat(), 0);
        assert_eq!(p(&[1, 1]).n_stat(), 1);
        assert_eq!(p(&[2, 2, 1]).n_stat(), 4);
    }

    #[test]
    fn z_factor_examples() {
        assert_eq!(p(&[2, 1, 1]).z_factor(&int(0)).unwrap(), int(4));
        let u = frac(2, 7);
        assert_eq!(p(&[1]).z_factor(&-u.clone()).unwrap(), (int(1) + u).recip());
        assert_eq!(p(&[2]).z_factor(&frac(-1, 3)).unwrap(), frac(9, 4));
        assert!(p(&[1]).z_factor(&int(1)).is_err());
        assert!(p(&[2]).z_factor(&int(-1)).is_err());
    }

    #[test]
    fn b_factor_examples() {
        let t = frac(1, 5);
        assert_eq!(p(&[]).b_factor(&t), int(1));
        let expected = (int(1) - &t) * (int(1) - &t * &t);
        assert_eq!(p(&[1, 1]).b_factor(&t), expected);
        assert_eq!(p(&[2, 1]).b_factor(&frac(1, 2)), frac(1, 4));
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate(0), vec![p(&[])]);
        assert_eq!(enumerate(2), vec![p(&[2]), p(&[1, 1])]);
        assert_eq!(enumerate(5).len(), 7);
        let counts: Vec<usize> = (0..=12).map(|n| enumerate(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]);
    }

    /// Independent oracle: every weakly decreasing sequence of parts in 1..=n summing to n.
    fn brute_partitions(n: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut stack = vec![(Vec::<usize>::new(), 0usize)];
        while let Some((v, s)) = stack.pop() {
            if s == n {
                out.push(Partition(v));
                continue;
            }
            let max = v.last().copied().unwrap_or(n);
            for x in 1..=max.min(n - s) {
                let mut w = v.clone();
                w.push(x);
                stack.push((w, s + x));
            }
        }
        out.sort();
        out
    }

    #[test]
    fn enumerate_matches_brute_force_and_order() {
        for n in 0..=10 {
            let e = enumerate(n);
            assert_eq!(e, brute_partitions(n));
            assert!(e.windows(2).all(|w| w[0] < w[1]));
            assert!(e.windows(2).all(|w| w[0].parts() > w[1].parts()));
        }
    }

    #[test]
    fn covers_box_examples() {
        assert_eq!(covers_box(&p(&[])), vec![(p(&[1]), 1)]);
        assert_eq!(covers_box(&p(&[1])), vec![(p(&[2]), 2), (p(&[1, 1]), 1)]);
        assert_eq!(
            covers_box(&p(&[2, 1])),
            vec![(p(&[3, 1]), 3), (p(&[2, 2]), 2), (p(&[2, 1, 1]), 1)]
        );
    }

    #[test]
    fn covers_two_examples() {
        assert_eq!(covers_two(&p(&[])), vec![p(&[2]), p(&[1, 1])]);
        assert_eq!(
            covers_two(&p(&[1])),
            vec![p(&[3]), p(&[2, 1]), p(&[1, 1, 1])]
        );
        // brute force over all |λ| = 5 containing (2,1)
        let nu = p(&[2, 1]);
        let got = covers_two(&nu);
        for lam in enumerate(5) {
            if !nu.is_contained_in(&lam) {
                continue;
            }
            let cells = nu.skew_cells(&lam);
            let ok = cells[0].1.abs_diff(cells[1].1) <= 1;
            assert_eq!(got.contains(&lam), ok, "{lam}");
        }
        assert!(!got.contains(&p(&[3, 1, 1])));
        assert!(got.contains(&p(&[2, 2, 1])));
        assert!(got.contains(&p(&[4, 1])));
    }

    #[test]
    fn dominance_examples() {
        assert!(dominance_leq(&p(&[1, 1, 1]), &p(&[3])).unwrap());
        assert!(!dominance_leq(&p(&[3]), &p(&[1, 1, 1])).unwrap());
        assert!(dominance_leq(&p(&[2, 2]), &p(&[3, 1])).unwrap());
        assert!(!dominance_leq(&p(&[3, 1]), &p(&[2, 2])).unwrap());
        assert!(matches!(
            dominance_leq(&p(&[1]), &p(&[2])),
            Err(Error::SizeMismatch(..))
        ));
    }

    #[test]
    fn reverse_lex_refines_dominance() {
        for n in 0..=9 {
            let ps = enumerate(n);
            for (i, a) in ps.iter().enumerate() {
                for b in &ps[i + 1..] {
                    // a precedes b, so a cannot be strictly dominated by b
                    assert!(!dominance_leq(a, b).unwrap() || a == b);
                }
            }
        }
    }

    #[test]
    fn n_stat_equals_column_binomials() {
        for lam in enumerate_up_to(12) {
            assert_eq!(lam.conjugate().conjugate(), lam);
            let cols: usize = lam
                .conjugate()
                .parts()
                .iter()
                .map(|&c| c * c.saturating_sub(1) / 2)
                .sum();
            assert_eq!(lam.n_stat(), cols, "{lam}");
        }
    }

    #[test]
    fn covers_nonempty_and_consistent() {
        for mu in enumerate_up_to(10) {
            let ups = covers_box(&mu);
            assert!(!ups.is_empty());
            for (lam, j) in ups {
                assert_eq!(lam.size(), mu.size() + 1);
                assert!(mu.is_contained_in(&lam));
                assert_eq!(mu.skew_cells(&lam)[0].1, j);
            }
            assert!(!covers_two(&mu).is_empty());
            let mut first_row = mu.parts().to_vec();
            if first_row.is_empty() {
                first_row.push(2);
            } else {
                first_row[0] += 2;
            }
            assert!(covers_two(&mu).contains(&Partition(first_row)));
        }
    }

    #[test]
    fn every_large_partition_has_a_two_cover_below() {
        for lam in enumerate_up_to(12) {
            if lam.size() <= 1 {
                continue;
            }
            let found = enumerate(lam.size() - 2)
                .iter()
                .any(|nu| is_two_cover(nu, &lam));
            assert!(found, "{lam}");
        }
    }

    #[test]
    fn split_even_matches_filtered_product() {
        for tau in enumerate_up_to(10) {
            let got = split_even(&tau);
            let mut brute = Vec::new();
            for r in 0..=tau.size() / 2 {
                for rho in enumerate(r) {
                    for sigma in enumerate(tau.size() - 2 * r) {
                        if rho.double().union(&sigma) == tau {
                            brute.push((rho.clone(), sigma));
                        }
                    }
                }
            }
            brute.sort();
            assert_eq!(got, brute, "{tau}");
        }
    }

    #[test]
    fn union_halve_double() {
        assert_eq!(p(&[3, 1]).union(&p(&[2, 1])), p(&[3, 2, 1, 1]));
        assert_eq!(p(&[4, 2]).halve(), Some(p(&[2, 1])));
        assert_eq!(p(&[4, 1]).halve(), None);
        assert_eq!(p(&[2, 1]).double(), p(&[4, 2]));
    }

    #[test]
    fn parse_roundtrip_text() {
        assert_eq!("[3,1,1]".parse::<Partition>().unwrap(), p(&[3, 1, 1]));
        assert_eq!("[]".parse::<Partition>().unwrap(), p(&[]));
        assert_eq!(p(&[3, 1, 1]).to_string(), "[3,1,1]");
        assert!("[1,2]".parse::<Partition>().is_err());
        assert!("[a]".parse::<Partition>().is_err());
    }

    proptest! {
        #[test]
        fn from_parts_is_canonical(v in proptest::collection::vec(0usize..6, 0..8)) {
            let lam = Partition::from_parts(v.clone());
            prop_assert_eq!(lam.size(), v.iter().sum::<usize>());
            prop_assert!(lam.parts().windows(2).all(|w| w[0] >= w[1]));
            prop_assert_eq!(lam.conjugate().conjugate(), lam.clone());
            prop_assert_eq!(lam.to_string().parse::<Partition>().unwrap(), lam);
        }
    }
}
