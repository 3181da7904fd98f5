//! JSON and CSV encodings shared by the CLI and the C ABI.
//!
//! Scalars are written as strings (`"1/3"`, `"-2"`); partitions as arrays of parts.

use std::collections::BTreeMap;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::functionals::{mix_standard, mix_twisted, Functional, MixWeights, PlancherelKind};
use crate::graphs::{GraphKind, LevelData};
use crate::hlbasis::{HLContext, ModifiedBasis, TwistedStructure};
use crate::partitions::{enumerate, Partition};
use crate::scalar::{self, Scalar};
use crate::symring::{SymElement, TensorElement};

pub fn partition_to_json(mu: &Partition) -> Value {
    Value::from(mu.parts().to_vec())
}

pub fn partition_from_json(v: &Value) -> Result<Partition> {
    let parts = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("expected a partition array, got {v}")))?
        .iter()
        .map(|x| {
            x.as_u64()
                .map(|n| n as usize)
                .ok_or_else(|| Error::Parse(format!("`{x}` is not a part")))
        })
        .collect::<Result<Vec<_>>>()?;
    Partition::new(parts)
}

pub fn scalar_to_json(x: &Scalar) -> Value {
    Value::String(scalar::format(x))
}

/// Accepts `"n/d"` strings and JSON integers.
pub fn scalar_from_json(v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => scalar::parse(s),
        Value::Number(n) if n.is_i64() => Ok(scalar::int(n.as_i64().expect("checked"))),
        other => Err(Error::Parse(format!(
            "expected an exact rational string, got {other}"
        ))),
    }
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::Parse(format!("missing field `{key}`")))
}

fn array<'a>(obj: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    field(obj, key)?
        .as_array()
        .ok_or_else(|| Error::Parse(format!("field `{key}` must be an array")))
}

/// `{"terms": [{"mu": [2,1], "c": "1/3"}]}`
pub fn sym_to_json(f: &SymElement) -> Value {
    let terms: Vec<Value> = f
        .iter()
        .map(|(mu, c)| json!({"mu": partition_to_json(mu), "c": scalar_to_json(c)}))
        .collect();
    json!({ "terms": terms })
}

pub fn sym_from_json(v: &Value) -> Result<SymElement> {
    let mut out = SymElement::zero();
    for term in array(v, "terms")? {
        out.add_term(
            partition_from_json(field(term, "mu")?)?,
            scalar_from_json(field(term, "c")?)?,
        );
    }
    Ok(out)
}

/// `{"terms": [{"rho": [1], "sigma": [2], "c": "2"}]}`
pub fn tensor_to_json(f: &TensorElement) -> Value {
    let terms: Vec<Value> = f
        .iter()
        .map(|((rho, sigma), c)| {
            json!({
                "rho": partition_to_json(rho),
                "sigma": partition_to_json(sigma),
                "c": scalar_to_json(c),
            })
        })
        .collect();
    json!({ "terms": terms })
}

pub fn tensor_from_json(v: &Value) -> Result<TensorElement> {
    let mut out = TensorElement::zero();
    for term in array(v, "terms")? {
        out.add_term(
            partition_from_json(field(term, "rho")?)?,
            partition_from_json(field(term, "sigma")?)?,
            scalar_from_json(field(term, "c")?)?,
        );
    }
    Ok(out)
}

/// Coefficients keyed by partition: `[{"mu": [...], "c": "..."}]`.
pub fn coefficients_to_json(coeffs: &BTreeMap<Partition, Scalar>) -> Value {
    Value::Array(
        coeffs
            .iter()
            .map(|(mu, c)| json!({"mu": partition_to_json(mu), "c": scalar_to_json(c)}))
            .collect(),
    )
}

/// `{"cap": 8, "values": [{"mu": [2,1], "v": "1/3"}], "spec": ["1", ...] | null}`
pub fn functional_to_json(phi: &Functional) -> Value {
    let values: Vec<Value> = phi
        .values()
        .iter()
        .map(|(mu, v)| json!({"mu": partition_to_json(mu), "v": scalar_to_json(v)}))
        .collect();
    let spec = phi
        .spec()
        .map(|s| Value::Array(s.iter().map(scalar_to_json).collect()))
        .unwrap_or(Value::Null);
    json!({"cap": phi.cap(), "values": values, "spec": spec})
}

/// Rebuilds from the spec when present, otherwise from the value table.
pub fn functional_from_json(v: &Value) -> Result<Functional> {
    let cap = field(v, "cap")?
        .as_u64()
        .ok_or_else(|| Error::Parse("`cap` must be a nonnegative integer".into()))?
        as usize;
    if let Some(spec) = v.get("spec").and_then(Value::as_array) {
        let spec = spec
            .iter()
            .map(scalar_from_json)
            .collect::<Result<Vec<_>>>()?;
        return Functional::multiplicative(spec, cap);
    }
    let mut values = BTreeMap::new();
    for entry in array(v, "values")? {
        values.insert(
            partition_from_json(field(entry, "mu")?)?,
            scalar_from_json(field(entry, "v")?)?,
        );
    }
    Functional::from_values(cap, values)
}

/// `{"kind": "even", "t": "1/3", "levels": [{"n", "vertices", "edges", "dims"}]}`
pub fn graph_to_json(kind: &GraphKind, levels: &[LevelData]) -> Value {
    let levels: Vec<Value> = levels
        .iter()
        .map(|level| {
            let edges: Vec<Value> = level
                .edges
                .iter()
                .map(|(v, w, weight)| {
                    json!({
                        "from": partition_to_json(v),
                        "to": partition_to_json(w),
                        "w": scalar_to_json(weight),
                    })
                })
                .collect();
            let dims: Map<String, Value> = level
                .vertices
                .iter()
                .filter_map(|v| {
                    level
                        .dims
                        .get(v)
                        .map(|d| (v.to_string(), scalar_to_json(d)))
                })
                .collect();
            json!({
                "n": level.level,
                "vertices": level.vertices.iter().map(partition_to_json).collect::<Vec<_>>(),
                "edges": edges,
                "dims": dims,
            })
        })
        .collect();
    json!({
        "kind": kind.variant().name(),
        "t": scalar_to_json(kind.t()),
        "levels": levels,
    })
}

/// One row of a structure-constant dump.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructRow {
    pub lambda: Partition,
    pub mu: Partition,
    pub nu: Partition,
    pub value: Scalar,
}

/// Which structure-constant family to tabulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructKind {
    /// `P_μ P_ν = Σ f^λ_{μν} P_λ`.
    F,
    /// `π(P_μ(·;t²)) P̃_ν = Σ f̃^λ_{μν} P̃_λ`.
    Ftilde,
    /// Sign-twisted `f` at `-t`.
    Fbar,
}

impl StructKind {
    pub fn name(self) -> &'static str {
        match self {
            StructKind::F => "f",
            StructKind::Ftilde => "ftilde",
            StructKind::Fbar => "fbar",
        }
    }

    /// Degree of the product for factors `(μ, ν)`.
    fn product_degree(self, mu: &Partition, nu: &Partition) -> usize {
        match self {
            StructKind::Ftilde => 2 * mu.size() + nu.size(),
            _ => mu.size() + nu.size(),
        }
    }
}

impl FromStr for StructKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f" => Ok(StructKind::F),
            "ftilde" => Ok(StructKind::Ftilde),
            "fbar" => Ok(StructKind::Fbar),
            other => Err(Error::Parse(format!(
                "unknown structure-constant kind `{other}`"
            ))),
        }
    }
}

enum StructSource {
    Plain(HLContext),
    Modified(ModifiedBasis),
    Twisted(TwistedStructure),
}

impl StructSource {
    fn row(&self, mu: &Partition, nu: &Partition) -> Result<BTreeMap<Partition, Scalar>> {
        match self {
            StructSource::Plain(c) => c.structconst_f(mu, nu),
            StructSource::Modified(b) => b.structconst_fbar(mu, nu),
            StructSource::Twisted(s) => s.structconst_ftilde(mu, nu),
        }
    }
}

/// Nonzero constants for one pair, or for every pair of nonempty factors within `cap`.
pub fn structconst_rows(
    kind: StructKind,
    t: &Scalar,
    cap: usize,
    pair: Option<(&Partition, &Partition)>,
) -> Result<Vec<StructRow>> {
    let pairs: Vec<(Partition, Partition)> = match pair {
        Some((mu, nu)) => vec![(mu.clone(), nu.clone())],
        None => {
            let mut out = Vec::new();
            for a in 1..=cap {
                for b in 1..=cap {
                    for mu in enumerate(a) {
                        for nu in enumerate(b) {
                            if kind.product_degree(&mu, &nu) <= cap {
                                out.push((mu.clone(), nu));
                            }
                        }
                    }
                }
            }
            out
        }
    };
    let needed = pairs
        .iter()
        .map(|(mu, nu)| kind.product_degree(mu, nu))
        .max()
        .unwrap_or(0);
    if needed > cap {
        return Err(Error::DegreeCap {
            requested: needed,
            cap,
        });
    }
    let source = match kind {
        StructKind::F => StructSource::Plain(HLContext::new(t.clone(), cap)?),
        StructKind::Fbar => StructSource::Modified(ModifiedBasis::new(t.clone(), cap)?),
        StructKind::Ftilde => StructSource::Twisted(TwistedStructure::new(t.clone(), cap)?),
    };
    let blocks = pairs
        .par_iter()
        .map(|(mu, nu)| {
            Ok(source
                .row(mu, nu)?
                .into_iter()
                .filter(|(_, v)| !num_traits::Zero::is_zero(v))
                .map(|(lambda, value)| StructRow {
                    lambda,
                    mu: mu.clone(),
                    nu: nu.clone(),
                    value,
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

/// `lambda,mu,nu,value` with a header line. Partition fields are quoted.
pub fn write_structconst_csv<W: Write>(rows: &[StructRow], out: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .quote_style(csv::QuoteStyle::Necessary)
        .from_writer(out);
    let io = |e: csv::Error| Error::Parse(format!("csv output failed: {e}"));
    writer
        .write_record(["lambda", "mu", "nu", "value"])
        .map_err(io)?;
    for row in rows {
        writer
            .write_record([
                row.lambda.to_string(),
                row.mu.to_string(),
                row.nu.to_string(),
                scalar::format(&row.value),
            ])
            .map_err(io)?;
    }
    writer
        .flush()
        .map_err(|e| Error::Parse(format!("csv output failed: {e}")))
}

pub fn read_structconst_csv<R: std::io::Read>(input: R) -> Result<Vec<StructRow>> {
    let mut reader = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse(format!("bad csv: {e}")))?;
        if record.len() != 4 {
            return Err(Error::Parse(format!(
                "expected 4 fields, got {}",
                record.len()
            )));
        }
        rows.push(StructRow {
            lambda: record[0].parse()?,
            mu: record[1].parse()?,
            nu: record[2].parse()?,
            value: scalar::parse(&record[3])?,
        });
    }
    Ok(rows)
}

pub fn structconst_to_json(kind: &str, t: &Scalar, rows: &[StructRow]) -> Value {
    let entries: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "lambda": partition_to_json(&r.lambda),
                "mu": partition_to_json(&r.mu),
                "nu": partition_to_json(&r.nu),
                "value": scalar_to_json(&r.value),
            })
        })
        .collect();
    json!({"kind": kind, "t": scalar_to_json(t), "entries": entries})
}

/// A functional named in a mix file.
#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FunctionalSource {
    Row,
    Col,
    Extreme {
        #[serde(default)]
        alpha: Vec<String>,
        #[serde(default)]
        beta: Vec<String>,
    },
    Plancherel {
        variant: String,
    },
    Counit,
    /// `of` lives at the squared parameter.
    EmbedEven {
        of: Box<FunctionalSource>,
    },
    EmbedOdd {
        of: Box<FunctionalSource>,
    },
    Table {
        table: Value,
    },
}

pub fn parse_plancherel_kind(name: &str) -> Result<PlancherelKind> {
    match name.to_ascii_lowercase().as_str() {
        "a" => Ok(PlancherelKind::A),
        "even" => Ok(PlancherelKind::Even),
        "odd" => Ok(PlancherelKind::Odd),
        other => Err(Error::Parse(format!("unknown Plancherel kind `{other}`"))),
    }
}

fn scalars(list: &[String]) -> Result<Vec<Scalar>> {
    list.iter().map(|s| scalar::parse(s)).collect()
}

impl FunctionalSource {
    /// Builds the functional at HL parameter `t` with table cap `cap`.
    pub fn build(&self, t: &Scalar, cap: usize) -> Result<Functional> {
        match self {
            FunctionalSource::Row => Ok(Functional::phi_row(cap)),
            FunctionalSource::Col => Functional::phi_col(t, cap),
            FunctionalSource::Extreme { alpha, beta } => {
                Functional::extreme_phi(&scalars(alpha)?, &scalars(beta)?, t, cap)
            }
            FunctionalSource::Plancherel { variant } => {
                Ok(Functional::plancherel(parse_plancherel_kind(variant)?, cap))
            }
            FunctionalSource::Counit => Ok(Functional::counit(cap)),
            FunctionalSource::EmbedEven { of } => of.build(&(t * t), cap / 2)?.embed_even(t),
            FunctionalSource::EmbedOdd { of } => {
                of.build(&(t * t), cap.saturating_sub(1) / 2)?.embed_odd(t)
            }
            FunctionalSource::Table { table } => functional_from_json(table),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum MixMode {
    Standard,
    Twisted,
}

/// Contents of a mix file, e.g.
/// `{"mode": "twisted", "r": "1/4", "s": "1/2", "phi": {"kind": "row"}, "psi": {"kind": "plancherel", "variant": "even"}}`.
///
/// In twisted mode `phi` is built at `t²` and `psi` at `t`; `u = √s` may be
/// given instead of `s`.
#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct MixSpec {
    pub mode: MixMode,
    pub r: String,
    #[serde(default)]
    pub s: Option<String>,
    #[serde(default)]
    pub u: Option<String>,
    #[serde(default)]
    pub shift: usize,
    pub phi: FunctionalSource,
    pub psi: FunctionalSource,
}

impl MixSpec {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad mix spec: {e}")))
    }

    pub fn weights(&self) -> Result<MixWeights> {
        let r = scalar::parse(&self.r)?;
        match (self.mode, &self.s, &self.u) {
            (_, Some(_), Some(_)) => Err(Error::Parse("give either `s` or `u`, not both".into())),
            (_, None, None) => Err(Error::Parse("one of `s` or `u` is required".into())),
            (MixMode::Standard, Some(s), None) => MixWeights::standard(r, scalar::parse(s)?),
            (MixMode::Standard, None, Some(u)) => {
                let u = scalar::parse(u)?;
                MixWeights::standard(r, &u * &u)
            }
            (MixMode::Twisted, Some(s), None) => MixWeights::twisted(r, scalar::parse(s)?),
            (MixMode::Twisted, None, Some(u)) => MixWeights::twisted_sqrt(r, scalar::parse(u)?),
        }
    }

    pub fn run(&self, t: &Scalar, cap: usize) -> Result<Functional> {
        let w = self.weights()?;
        match self.mode {
            MixMode::Standard => {
                if self.shift != 0 {
                    return Err(Error::Parse(
                        "`shift` only applies to twisted mixing".into(),
                    ));
                }
                let phi = self.phi.build(t, cap)?;
                let psi = self.psi.build(t, cap)?;
                Ok(mix_standard(&phi, &psi, &w))
            }
            MixMode::Twisted => {
                let phi = self.phi.build(&(t * t), cap / 2)?;
                let psi = self.psi.build(t, cap)?;
                mix_twisted(&phi, &psi.restrict(cap), &w, t, self.shift)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_levels, GraphVariant};
    use crate::scalar::{frac, int};

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn sym_round_trip() {
        let f = SymElement::from_terms([(p(&[2, 1]), frac(1, 3)), (p(&[]), int(-2))]);
        let v = sym_to_json(&f);
        assert_eq!(
            v,
            json!({"terms": [{"mu": [], "c": "-2"}, {"mu": [2, 1], "c": "1/3"}]})
        );
        assert_eq!(sym_from_json(&v).unwrap(), f);
        assert!(sym_from_json(&json!({"terms": [{"mu": [1, 2], "c": "1"}]})).is_err());
        assert!(sym_from_json(&json!({"terms": [{"mu": [1], "c": "0.5"}]})).is_err());
    }

    #[test]
    fn tensor_round_trip() {
        let mut f = TensorElement::zero();
        f.add_term(p(&[1]), p(&[]), int(2));
        f.add_term(p(&[]), p(&[2]), int(1));
        let v = tensor_to_json(&f);
        assert_eq!(tensor_from_json(&v).unwrap(), f);
        assert_eq!(v["terms"][0]["rho"], json!([]));
    }

    #[test]
    fn functional_round_trip() {
        let t = frac(1, 3);
        let phi = Functional::phi_col(&t, 4).unwrap();
        let v = functional_to_json(&phi);
        assert_eq!(v["cap"], json!(4));
        assert_eq!(v["spec"][1], json!("-1/2"));
        assert_eq!(functional_from_json(&v).unwrap(), phi);

        let table = Functional::plancherel(PlancherelKind::Odd, 5);
        let v = functional_to_json(&table);
        assert_eq!(v["spec"], Value::Null);
        assert_eq!(functional_from_json(&v).unwrap(), table);
    }

    #[test]
    fn graph_dump_shape() {
        let kind = GraphKind::new(GraphVariant::Even, frac(1, 3)).unwrap();
        let levels = build_levels(&kind, 1).unwrap();
        let v = graph_to_json(&kind, &levels);
        assert_eq!(v["kind"], json!("even"));
        assert_eq!(v["t"], json!("1/3"));
        assert_eq!(v["levels"][1]["n"], json!(1));
        assert_eq!(v["levels"][1]["vertices"], json!([[2], [1, 1]]));
        assert_eq!(
            v["levels"][1]["edges"][0],
            json!({"from": [], "to": [2], "w": "1"})
        );
        assert_eq!(v["levels"][1]["dims"]["[1,1]"], json!("4/3"));
    }

    #[test]
    fn csv_round_trip() {
        let rows = vec![
            StructRow {
                lambda: p(&[2, 1]),
                mu: p(&[1]),
                nu: p(&[1, 1]),
                value: frac(4, 3),
            },
            StructRow {
                lambda: p(&[3]),
                mu: p(&[]),
                nu: p(&[3]),
                value: int(1),
            },
        ];
        let mut buf = Vec::new();
        write_structconst_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(
            text,
            "lambda,mu,nu,value\n\"[2,1]\",[1],\"[1,1]\",4/3\n[3],[],[3],1\n"
        );
        assert_eq!(read_structconst_csv(&buf[..]).unwrap(), rows);
    }

    #[test]
    fn mix_spec_runs() {
        let spec = MixSpec::from_json_str(
            r#"{"mode": "twisted", "r": "1/4", "s": "1/2",
                "phi": {"kind": "row"}, "psi": {"kind": "plancherel", "variant": "even"}}"#,
        )
        .unwrap();
        let mixed = spec.run(&frac(1, 3), 10).unwrap();
        assert_eq!(mixed.cap(), 10);
        assert_eq!(mixed.check_p2_harmonic(8).unwrap(), None);

        let via_u = MixSpec::from_json_str(
            r#"{"mode": "twisted", "r": "3/8", "u": "1/2", "shift": 1,
                "phi": {"kind": "col"}, "psi": {"kind": "embed-odd", "of": {"kind": "row"}}}"#,
        )
        .unwrap();
        let mixed = via_u.run(&frac(1, 3), 9).unwrap();
        assert_eq!(mixed.value(&p(&[1])).unwrap(), int(1));
        assert!(mixed.is_odd_supported());

        let standard = MixSpec::from_json_str(
            r#"{"mode": "standard", "r": "1/2", "s": "1/2",
                "phi": {"kind": "row"}, "psi": {"kind": "extreme", "alpha": ["1/2"], "beta": ["1/4"]}}"#,
        )
        .unwrap();
        let mixed = standard.run(&frac(1, 3), 6).unwrap();
        assert_eq!(mixed.check_p1_harmonic(5).unwrap(), None);

        assert!(MixSpec::from_json_str(r#"{"mode": "twisted", "r": "1/4"}"#).is_err());
        let bad = MixSpec::from_json_str(
            r#"{"mode": "twisted", "r": "1/4", "s": "1/4", "phi": {"kind": "row"}, "psi": {"kind": "row"}}"#,
        )
        .unwrap();
        assert!(matches!(bad.run(&frac(1, 3), 6), Err(Error::Constraint(_))));
    }
}
