//! The HL-deformed Young graph and its even/odd relatives built from `p_2`-multiplication.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::functionals::Functional;
use crate::hlbasis::{pieri_weight, HLContext, ModifiedBasis};
use crate::partitions::{covers_box, enumerate, Partition};
use crate::scalar::{self, Scalar};
use crate::symring::SymElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphVariant {
    Standard,
    Even,
    Odd,
}

impl GraphVariant {
    pub fn name(self) -> &'static str {
        match self {
            GraphVariant::Standard => "standard",
            GraphVariant::Even => "even",
            GraphVariant::Odd => "odd",
        }
    }
}

impl fmt::Display for GraphVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for GraphVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(GraphVariant::Standard),
            "even" => Ok(GraphVariant::Even),
            "odd" => Ok(GraphVariant::Odd),
            other => Err(Error::Parse(format!("unknown graph kind `{other}`"))),
        }
    }
}

/// A graph variant with its user-facing parameter.
///
/// The even and odd graphs use the modified HL functions at `-t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphKind {
    variant: GraphVariant,
    t: Scalar,
}

impl GraphKind {
    pub fn new(variant: GraphVariant, t: Scalar) -> Result<Self> {
        let ok = match variant {
            GraphVariant::Standard => scalar::abs_below_one(&t),
            GraphVariant::Even | GraphVariant::Odd => scalar::in_open_unit_interval(&t),
        };
        if !ok {
            return Err(Error::ParameterRange(format!(
                "t = {t} is out of range for the {variant} graph"
            )));
        }
        Ok(GraphKind { variant, t })
    }

    pub fn variant(&self) -> GraphVariant {
        self.variant
    }

    pub fn t(&self) -> &Scalar {
        &self.t
    }

    pub fn root(&self) -> Partition {
        match self.variant {
            GraphVariant::Odd => Partition::row(1),
            _ => Partition::empty(),
        }
    }

    /// Size of the partitions at level `n`.
    pub fn level_size(&self, n: usize) -> usize {
        match self.variant {
            GraphVariant::Standard => n,
            GraphVariant::Even => 2 * n,
            GraphVariant::Odd => 2 * n + 1,
        }
    }

    /// The basis that the graph's vertices stand for, large enough for `up_to` levels.
    pub fn basis(&self, up_to: usize) -> Result<VertexBasis> {
        let cap = self.level_size(up_to);
        Ok(match self.variant {
            GraphVariant::Standard => VertexBasis::Plain(HLContext::new(self.t.clone(), cap)?),
            _ => VertexBasis::Modified(ModifiedBasis::new(self.t.clone(), cap)?),
        })
    }
}

/// `P_λ(·;t)` for the standard graph, `P̃_λ(·;-t)` for the even and odd graphs.
#[derive(Debug, Clone)]
pub enum VertexBasis {
    Plain(HLContext),
    Modified(ModifiedBasis),
}

impl VertexBasis {
    pub fn element(&self, lam: &Partition) -> Result<SymElement> {
        match self {
            VertexBasis::Plain(ctx) => ctx.hl_p(lam),
            VertexBasis::Modified(b) => b.p_tilde(lam),
        }
    }

    pub fn expand(&self, f: &SymElement) -> Result<BTreeMap<Partition, Scalar>> {
        match self {
            VertexBasis::Plain(ctx) => ctx.expand_in_p(f),
            VertexBasis::Modified(b) => b.expand(f),
        }
    }
}

/// Level `n`: its vertices, the edges arriving from level `n-1`, and `d` on the vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelData {
    pub level: usize,
    pub vertices: Vec<Partition>,
    pub edges: Vec<(Partition, Partition, Scalar)>,
    pub dims: BTreeMap<Partition, Scalar>,
}

/// Levels `0..=up_to`.
pub fn build_levels(kind: &GraphKind, up_to: usize) -> Result<Vec<LevelData>> {
    match kind.variant {
        GraphVariant::Standard => build_levels_from(kind, up_to, None),
        _ => {
            let basis = ModifiedBasis::new(kind.t.clone(), kind.level_size(up_to))?;
            build_levels_from(kind, up_to, Some(&basis))
        }
    }
}

/// As [`build_levels`], reusing a modified basis for the even and odd graphs.
pub fn build_levels_with(
    kind: &GraphKind,
    basis: &ModifiedBasis,
    up_to: usize,
) -> Result<Vec<LevelData>> {
    if basis.t() != kind.t() {
        return Err(Error::ParameterRange(format!(
            "basis parameter {} does not match graph parameter {}",
            basis.t(),
            kind.t()
        )));
    }
    build_levels_from(kind, up_to, Some(basis))
}

fn build_levels_from(
    kind: &GraphKind,
    up_to: usize,
    basis: Option<&ModifiedBasis>,
) -> Result<Vec<LevelData>> {
    let root = kind.root();
    let mut dims = BTreeMap::new();
    dims.insert(root.clone(), Scalar::one());
    let mut levels = vec![LevelData {
        level: 0,
        vertices: vec![root],
        edges: Vec::new(),
        dims,
    }];
    for n in 1..=up_to {
        let prev = &levels[n - 1];
        let outgoing = prev
            .vertices
            .par_iter()
            .map(|v| out_edges(kind, v, basis))
            .collect::<Result<Vec<_>>>()?;
        let mut edges = Vec::new();
        let mut dims: BTreeMap<Partition, Scalar> = BTreeMap::new();
        for (v, targets) in prev.vertices.iter().zip(outgoing) {
            for (w, weight) in targets {
                *dims.entry(w.clone()).or_insert_with(Scalar::zero) += &prev.dims[v] * &weight;
                edges.push((v.clone(), w, weight));
            }
        }
        edges.sort_by(|a, b| (&a.1, &a.0).cmp(&(&b.1, &b.0)));
        levels.push(LevelData {
            level: n,
            vertices: enumerate(kind.level_size(n)),
            edges,
            dims,
        });
    }
    Ok(levels)
}

fn out_edges(
    kind: &GraphKind,
    v: &Partition,
    basis: Option<&ModifiedBasis>,
) -> Result<Vec<(Partition, Scalar)>> {
    match (kind.variant, basis) {
        (GraphVariant::Standard, _) => covers_box(v)
            .into_iter()
            .map(|(lam, _)| Ok((lam.clone(), pieri_weight(v, &lam, &kind.t)?)))
            .collect(),
        (_, Some(b)) => {
            let product = SymElement::pk(2).multiply(&b.p_tilde(v)?);
            Ok(b.expand(&product)?.into_iter().collect())
        }
        (_, None) => unreachable!("even and odd graphs always carry a basis"),
    }
}

/// A vertex where `Σ_{v→v'} d(v) w(v,v') / d(v') ≠ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherenceViolation {
    pub level: usize,
    pub vertex: Partition,
    pub ratio: Option<Scalar>,
}

/// Checks `Σ_{v→v'} d(v) w(v,v') = d(v')` at every vertex of levels `1..`.
///
/// `ratio` is `None` when `d(v') = 0`.
pub fn coherence_check(levels: &[LevelData]) -> Option<CoherenceViolation> {
    for pair in levels.windows(2) {
        let (prev, cur) = (&pair[0], &pair[1]);
        let mut incoming: BTreeMap<&Partition, Scalar> = BTreeMap::new();
        for (v, w, weight) in &cur.edges {
            let d = prev.dims.get(v).cloned().unwrap_or_else(Scalar::zero);
            *incoming.entry(w).or_insert_with(Scalar::zero) += d * weight;
        }
        for vertex in &cur.vertices {
            let d = cur.dims.get(vertex).cloned().unwrap_or_else(Scalar::zero);
            let total = incoming.remove(vertex).unwrap_or_else(Scalar::zero);
            let ratio = (!d.is_zero()).then(|| &total / &d);
            if ratio.as_ref() != Some(&Scalar::one()) {
                return Some(CoherenceViolation {
                    level: cur.level,
                    vertex: vertex.clone(),
                    ratio,
                });
            }
        }
    }
    None
}

/// Structural defects: a non-positive weight, a pending vertex, or a vertex without a parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureDefect {
    NonPositiveWeight(Partition, Partition, Scalar),
    NoParent(Partition),
    NoChild(Partition),
}

/// First structural defect among the built levels; the last level is not checked for children.
pub fn structure_check(levels: &[LevelData]) -> Option<StructureDefect> {
    for (i, level) in levels.iter().enumerate() {
        if let Some((v, w, weight)) = level.edges.iter().find(|e| !e.2.is_positive()) {
            return Some(StructureDefect::NonPositiveWeight(
                v.clone(),
                w.clone(),
                weight.clone(),
            ));
        }
        if i > 0 {
            if let Some(v) = level
                .vertices
                .iter()
                .find(|v| !level.edges.iter().any(|e| &e.1 == *v))
            {
                return Some(StructureDefect::NoParent(v.clone()));
            }
        }
        if let Some(next) = levels.get(i + 1) {
            if let Some(v) = level
                .vertices
                .iter()
                .find(|v| !next.edges.iter().any(|e| &e.0 == *v))
            {
                return Some(StructureDefect::NoChild(v.clone()));
            }
        }
    }
    None
}

/// `π_n(x)(v) = Σ_{v→v'} x(v') d(v) w(v,v') / d(v')`.
pub fn simplex_project(
    levels: &[LevelData],
    n: usize,
    x: &BTreeMap<Partition, Scalar>,
) -> Result<BTreeMap<Partition, Scalar>> {
    if n == 0 || n >= levels.len() {
        return Err(Error::ParameterRange(format!(
            "cannot project from level {n} of a graph with {} levels",
            levels.len()
        )));
    }
    let (prev, cur) = (&levels[n - 1], &levels[n]);
    let mut total = Scalar::zero();
    for (v, c) in x {
        if c.is_negative() {
            return Err(Error::NotInSimplex(format!("negative mass {c} at {v}")));
        }
        if !cur.dims.contains_key(v) {
            return Err(Error::NotInSimplex(format!(
                "{v} is not a vertex at level {n}"
            )));
        }
        total += c;
    }
    if !total.is_one() {
        return Err(Error::NotInSimplex(format!("masses sum to {total}")));
    }
    let mut out: BTreeMap<Partition, Scalar> = prev
        .vertices
        .iter()
        .map(|v| (v.clone(), Scalar::zero()))
        .collect();
    for (v, w, weight) in &cur.edges {
        if let Some(mass) = x.get(w) {
            if mass.is_zero() {
                continue;
            }
            let share = mass * &prev.dims[v] * weight / &cur.dims[w];
            *out.get_mut(v).expect("edge source is a vertex") += share;
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// `x_n = Σ_{v ∈ V_n} d(v) ψ(v) v`, with `ψ(v)` the value on the vertex basis element.
pub fn functional_to_coherent(
    kind: &GraphKind,
    levels: &[LevelData],
    psi: &Functional,
) -> Result<Vec<BTreeMap<Partition, Scalar>>> {
    let up_to = levels.len().saturating_sub(1);
    let basis = kind.basis(up_to)?;
    functional_to_coherent_with(&basis, levels, psi)
}

pub fn functional_to_coherent_with(
    basis: &VertexBasis,
    levels: &[LevelData],
    psi: &Functional,
) -> Result<Vec<BTreeMap<Partition, Scalar>>> {
    let mut out = Vec::with_capacity(levels.len());
    for level in levels {
        let values = level
            .vertices
            .par_iter()
            .map(|v| Ok((v.clone(), psi.evaluate(&basis.element(v)?)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut x = BTreeMap::new();
        let mut total = Scalar::zero();
        for (v, value) in values {
            let mass = &level.dims[&v] * value;
            if mass.is_negative() {
                return Err(Error::NotInSimplex(format!(
                    "negative mass {mass} at {v} on level {}",
                    level.level
                )));
            }
            total += &mass;
            if !mass.is_zero() {
                x.insert(v, mass);
            }
        }
        if !total.is_one() {
            return Err(Error::NotInSimplex(format!(
                "level {} has total mass {total}; the functional is not normalised and harmonic",
                level.level
            )));
        }
        out.push(x);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::PlancherelKind;
    use crate::partitions::covers_two;
    use crate::scalar::{frac, int};

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn third() -> Scalar {
        frac(1, 3)
    }

    fn weight(level: &LevelData, from: &[usize], to: &[usize]) -> Option<Scalar> {
        level
            .edges
            .iter()
            .find(|e| e.0 == p(from) && e.1 == p(to))
            .map(|e| e.2.clone())
    }

    #[test]
    fn standard_examples() {
        let t = third();
        let kind = GraphKind::new(GraphVariant::Standard, t.clone()).unwrap();
        let levels = build_levels(&kind, 2).unwrap();
        assert_eq!(weight(&levels[1], &[], &[1]), Some(int(1)));
        assert_eq!(weight(&levels[2], &[1], &[2]), Some(int(1)));
        assert_eq!(weight(&levels[2], &[1], &[1, 1]), Some(&t + int(1)));
        assert_eq!(levels[2].dims[&p(&[2])], int(1));
        assert_eq!(levels[2].dims[&p(&[1, 1])], &t + int(1));
    }

    #[test]
    fn even_and_odd_examples() {
        let t = third();
        let even =
            build_levels(&GraphKind::new(GraphVariant::Even, t.clone()).unwrap(), 1).unwrap();
        assert_eq!(even[1].vertices, vec![p(&[2]), p(&[1, 1])]);
        assert_eq!(weight(&even[1], &[], &[2]), Some(int(1)));
        assert_eq!(weight(&even[1], &[], &[1, 1]), Some(&t + int(1)));

        let odd = build_levels(&GraphKind::new(GraphVariant::Odd, t).unwrap(), 1).unwrap();
        assert_eq!(odd[0].vertices, vec![p(&[1])]);
        let targets: Vec<Partition> = odd[1].edges.iter().map(|e| e.1.clone()).collect();
        for lam in &targets {
            assert!([p(&[3]), p(&[2, 1]), p(&[1, 1, 1])].contains(lam));
        }
        assert_eq!(targets, covers_two(&p(&[1])));
    }

    #[test]
    fn kind_validation() {
        assert!(GraphKind::new(GraphVariant::Standard, frac(-1, 3)).is_ok());
        assert!(GraphKind::new(GraphVariant::Even, frac(-1, 3)).is_err());
        assert!(GraphKind::new(GraphVariant::Odd, int(1)).is_err());
        assert_eq!("even".parse::<GraphVariant>().unwrap(), GraphVariant::Even);
        assert!("other".parse::<GraphVariant>().is_err());
    }

    #[test]
    fn coherence_and_structure() {
        for t in [third(), frac(-1, 3), frac(1, 2)] {
            let kind = GraphKind::new(GraphVariant::Standard, t).unwrap();
            let levels = build_levels(&kind, 8).unwrap();
            assert_eq!(coherence_check(&levels), None);
            assert_eq!(structure_check(&levels), None);
        }
        for t in [third(), frac(1, 5), frac(1, 9)] {
            for variant in [GraphVariant::Even, GraphVariant::Odd] {
                let kind = GraphKind::new(variant, t.clone()).unwrap();
                let levels = build_levels(&kind, 3).unwrap();
                assert_eq!(coherence_check(&levels), None);
                assert_eq!(structure_check(&levels), None);
                for level in &levels[1..] {
                    let mut by_source: BTreeMap<&Partition, Vec<Partition>> = BTreeMap::new();
                    for (v, w, _) in &level.edges {
                        by_source.entry(v).or_default().push(w.clone());
                    }
                    for (v, mut targets) in by_source {
                        targets.sort();
                        assert_eq!(targets, covers_two(v));
                    }
                }
            }
        }
    }

    #[test]
    fn corrupted_weight_is_detected() {
        let kind = GraphKind::new(GraphVariant::Standard, third()).unwrap();
        let mut levels = build_levels(&kind, 3).unwrap();
        levels[3].edges[2].2 += frac(1, 7);
        let bad = coherence_check(&levels).unwrap();
        assert_eq!(bad.level, 3);
        assert_eq!(bad.vertex, levels[3].edges[2].1);
    }

    #[test]
    fn projection_examples() {
        let kind = GraphKind::new(GraphVariant::Standard, third()).unwrap();
        let levels = build_levels(&kind, 3).unwrap();
        let point =
            |v: &[usize]| -> BTreeMap<Partition, Scalar> { [(p(v), int(1))].into_iter().collect() };
        assert_eq!(
            simplex_project(&levels, 2, &point(&[2])).unwrap(),
            point(&[1])
        );
        let uniform = [(p(&[2]), frac(1, 2)), (p(&[1, 1]), frac(1, 2))]
            .into_iter()
            .collect();
        assert_eq!(simplex_project(&levels, 2, &uniform).unwrap(), point(&[1]));
        let bad = [(p(&[2]), frac(1, 2))].into_iter().collect();
        assert!(matches!(
            simplex_project(&levels, 2, &bad),
            Err(Error::NotInSimplex(_))
        ));
        let negative = [(p(&[2]), int(2)), (p(&[1, 1]), int(-1))]
            .into_iter()
            .collect();
        assert!(matches!(
            simplex_project(&levels, 2, &negative),
            Err(Error::NotInSimplex(_))
        ));

        let mixed: BTreeMap<_, _> = [
            (p(&[3]), frac(1, 4)),
            (p(&[2, 1]), frac(1, 4)),
            (p(&[1, 1, 1]), frac(1, 2)),
        ]
        .into_iter()
        .collect();
        let image = simplex_project(&levels, 3, &mixed).unwrap();
        assert_eq!(image.values().sum::<Scalar>(), int(1));
        assert!(image.values().all(|c| c.is_positive()));
    }

    #[test]
    fn coherent_sequences() {
        let t = third();
        let kind = GraphKind::new(GraphVariant::Standard, t.clone()).unwrap();
        let levels = build_levels(&kind, 5).unwrap();
        let xs = functional_to_coherent(&kind, &levels, &Functional::phi_row(5)).unwrap();
        for (n, x) in xs.iter().enumerate() {
            let expect: BTreeMap<_, _> = [(Partition::row(n), int(1))].into_iter().collect();
            assert_eq!(x, &expect);
        }
        let col = Functional::phi_col(&t, 5).unwrap();
        let xs = functional_to_coherent(&kind, &levels, &col).unwrap();
        for n in 1..xs.len() {
            assert_eq!(simplex_project(&levels, n, &xs[n]).unwrap(), xs[n - 1]);
        }

        let even = GraphKind::new(GraphVariant::Even, t.clone()).unwrap();
        let levels = build_levels(&even, 4).unwrap();
        let planch = Functional::plancherel(PlancherelKind::Even, 8);
        let xs = functional_to_coherent(&even, &levels, &planch).unwrap();
        for n in 1..xs.len() {
            assert_eq!(simplex_project(&levels, n, &xs[n]).unwrap(), xs[n - 1]);
        }
        let embedded = Functional::phi_col(&(&t * &t), 4)
            .unwrap()
            .embed_even(&t)
            .unwrap();
        let xs = functional_to_coherent(&even, &levels, &embedded).unwrap();
        for n in 1..xs.len() {
            assert_eq!(simplex_project(&levels, n, &xs[n]).unwrap(), xs[n - 1]);
        }

        let odd = GraphKind::new(GraphVariant::Odd, t.clone()).unwrap();
        let levels = build_levels(&odd, 3).unwrap();
        let embedded = Functional::phi_row(3).embed_odd(&t).unwrap();
        let xs = functional_to_coherent(&odd, &levels, &embedded).unwrap();
        for n in 1..xs.len() {
            assert_eq!(simplex_project(&levels, n, &xs[n]).unwrap(), xs[n - 1]);
        }

        let unnormalised = Functional::counit(5);
        assert!(
            functional_to_coherent(&kind, &build_levels(&kind, 2).unwrap(), &unnormalised).is_err()
        );
    }
}
