//! One-off evaluations read from JSON: validity, conditioning and asserts.
//!
//! ```json
//! { "instance": "prob", "op": "validity",
//!   "state": ["1/2", "1/2"], "pred": ["1", "0"] }
//! ```
//!
//! Quantum operands give matrices as nested rows whose entries are reals or
//! `[re, im]` pairs; states are either `{"vector": [...], "block": 0}` or
//! `{"density": [block, ...]}`.

use std::fmt::Write as _;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::boolean::{PartialFn, Sets, SubsetPred};
use crate::effectus::{condition, validity, Effectus};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::prob::{Dists, FuzzyPred, KernelMap, SubDist};
use crate::scalar::Rational01;
use crate::quantum::{BlockEffect, BlockState, Quantum, VnAlg};
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    /// `ω ⊨ p`.
    Validity,
    /// `ω|_p`, the normalised `asrt_p ∘ ω`.
    Condition,
    /// The unnormalised substate `asrt_p ∘ ω`.
    Assert,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "instance", rename_all = "lowercase", deny_unknown_fields)]
pub enum Request {
    Boolean {
        op: Op,
        size: usize,
        /// The point of a total state, or `null` for the zero substate.
        state: Option<usize>,
        /// Members of the subset.
        pred: Vec<usize>,
    },
    Prob {
        op: Op,
        /// One weight per element.
        state: Vec<Rational01>,
        pred: Vec<Rational01>,
    },
    Quantum {
        op: Op,
        state: QState,
        /// One matrix per block.
        pred: Vec<MatrixIn>,
        #[serde(default)]
        tolerances: Option<Tolerances>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Amp {
    Real(f64),
    Complex([f64; 2]),
}

impl Amp {
    fn c(&self) -> C64 {
        match *self {
            Amp::Real(r) => C64::new(r, 0.0),
            Amp::Complex([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(transparent)]
pub struct MatrixIn(pub Vec<Vec<Amp>>);

impl MatrixIn {
    fn matrix(&self) -> Result<CMatrix> {
        let n = self.0.len();
        if n == 0 || self.0.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch("blocks must be non-empty square matrices".into()));
        }
        let data: Vec<C64> = self.0.iter().flatten().map(Amp::c).collect();
        CMatrix::new(n, n, data)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum QState {
    Vector {
        vector: Vec<Amp>,
        #[serde(default)]
        block: usize,
    },
    Density {
        density: Vec<MatrixIn>,
    },
}

/// Result of an evaluation, with the tolerances that shaped it.
#[derive(Debug, Clone, Serialize)]
pub struct Evaluation {
    pub instance: &'static str,
    pub op: Op,
    /// `true` for exact rational arithmetic.
    pub exact: bool,
    pub value: Value,
    pub tolerances: Option<Tolerances>,
}

impl Evaluation {
    pub fn text(&self) -> String {
        let mut out = String::new();
        match &self.value {
            Value::String(s) => out.push_str(s),
            Value::Number(n) => out.push_str(&n.to_string()),
            v => out.push_str(&serde_json::to_string(v).unwrap_or_default()),
        }
        out.push('\n');
        match &self.tolerances {
            None => out.push_str("arithmetic: exact rational\n"),
            Some(t) => {
                let _ = writeln!(
                    out,
                    "arithmetic: f64; tolerances herm={:e} spec={:e} eig={:e} tight={:e} law={:e}",
                    t.herm, t.spec, t.eig, t.tight, t.law
                );
            }
        }
        out
    }
}

pub fn parse(text: &str) -> Result<Request> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn evaluate(req: &Request) -> Result<Evaluation> {
    match req {
        Request::Boolean { op, size, state, pred } => {
            let e = Sets;
            let w = PartialFn::new(1, *size, vec![*state])?;
            if pred.iter().any(|&m| m >= *size) {
                return Err(Error::OutOfRange(format!("predicate member outside a set of size {size}")));
            }
            let p = SubsetPred::from_members(*size, pred);
            let value = match op {
                Op::Validity => json!(validity(&e, &w, &p)?.to_string()),
                Op::Condition => match condition(&e, &w, &p)? {
                    Some(c) => json!(c.table[0]),
                    None => Value::Null,
                },
                Op::Assert => json!(e.compose(&e.assert_map(&p), &w)?.table[0]),
            };
            Ok(Evaluation {
                instance: "boolean",
                op: *op,
                exact: true,
                value,
                tolerances: None,
            })
        }
        Request::Prob { op, state, pred } => {
            let e = Dists;
            let size = state.len();
            if pred.len() != size {
                return Err(Error::ShapeMismatch(format!(
                    "predicate of length {} against a state of length {size}",
                    pred.len()
                )));
            }
            let w = KernelMap::state(size, SubDist::new(state.iter().cloned().enumerate())?)?;
            let p = FuzzyPred(pred.clone());
            let sub = |m: &KernelMap| json!((0..size).map(|x| m.row(0).get(x).to_string()).collect::<Vec<_>>());
            let value = match op {
                Op::Validity => json!(validity(&e, &w, &p)?.to_string()),
                Op::Condition => condition(&e, &w, &p)?.as_ref().map_or(Value::Null, sub),
                Op::Assert => sub(&e.compose(&e.assert_map(&p), &w)?),
            };
            Ok(Evaluation {
                instance: "prob",
                op: *op,
                exact: true,
                value,
                tolerances: None,
            })
        }
        Request::Quantum {
            op,
            state,
            pred,
            tolerances,
        } => {
            let tol = tolerances.unwrap_or_default();
            let e = Quantum::new(tol);
            let blocks = pred.iter().map(MatrixIn::matrix).collect::<Result<Vec<_>>>()?;
            let p = BlockEffect::new(blocks, &tol)?;
            let alg = p.alg();
            let w = quantum_state(&e, &alg, state, &tol)?;
            let density = |m: &crate::quantum::KrausMap| -> Result<Value> {
                let rho = e.state_of(m)?;
                Ok(Value::Array(rho.blocks.iter().map(rows_json).collect()))
            };
            let value = match op {
                Op::Validity => json!(validity(&e, &w, &p)?),
                Op::Condition => match condition(&e, &w, &p)? {
                    Some(c) => density(&c)?,
                    None => Value::Null,
                },
                Op::Assert => density(&e.compose(&e.assert_map(&p), &w)?)?,
            };
            Ok(Evaluation {
                instance: "quantum",
                op: *op,
                exact: false,
                value,
                tolerances: Some(tol),
            })
        }
    }
}

fn quantum_state(e: &Quantum, alg: &VnAlg, s: &QState, tol: &Tolerances) -> Result<crate::quantum::KrausMap> {
    match s {
        QState::Vector { vector, block } => {
            if *block >= alg.blocks() || vector.len() != alg.dim(*block) {
                return Err(Error::ShapeMismatch(format!(
                    "vector of length {} for block {block} of {:?}",
                    vector.len(),
                    alg.block_dims
                )));
            }
            let v: Vec<C64> = vector.iter().map(Amp::c).collect();
            e.vector_state(alg, *block, &v)
        }
        QState::Density { density } => {
            let blocks = density.iter().map(MatrixIn::matrix).collect::<Result<Vec<_>>>()?;
            let rho = BlockState::new(blocks, tol)?;
            let dims: Vec<usize> = rho.blocks.iter().map(CMatrix::rows).collect();
            if dims != alg.block_dims {
                return Err(Error::ShapeMismatch(format!(
                    "state blocks {dims:?} against predicate blocks {:?}",
                    alg.block_dims
                )));
            }
            e.state_map(&rho)
        }
    }
}

/// Real matrices print as nested reals, complex ones as `[re, im]` pairs.
fn rows_json(m: &CMatrix) -> Value {
    let clean = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
    let real = (0..m.rows()).all(|i| (0..m.cols()).all(|j| m[(i, j)].im.abs() < 1e-15));
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| {
                            let z = m[(i, j)];
                            if real {
                                json!(clean(z.re))
                            } else {
                                json!([clean(z.re), clean(z.im)])
                            }
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str) -> Evaluation {
        evaluate(&parse(text).unwrap()).unwrap()
    }

    #[test]
    fn prob_validity_is_exact() {
        let out = run(r#"{"instance":"prob","op":"validity",
            "state":["1/2","1/2"],"pred":["1","0"]}"#);
        assert_eq!(out.value, json!("1/2"));
        assert!(out.text().starts_with("1/2\n"));
    }

    #[test]
    fn prob_condition() {
        let out = run(r#"{"instance":"prob","op":"condition",
            "state":["1/2","1/2"],"pred":["1","1/3"]}"#);
        assert_eq!(out.value, json!(["3/4", "1/4"]));
        let out = run(r#"{"instance":"prob","op":"condition",
            "state":["1","0"],"pred":["0","1"]}"#);
        assert_eq!(out.value, Value::Null);
    }

    #[test]
    fn quantum_condition_plus_on_zero() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let text = format!(
            r#"{{"instance":"quantum","op":"condition",
                "state":{{"vector":[{h},{h}]}},"pred":[[[1,0],[0,0]]]}}"#
        );
        let out = run(&text);
        let rho = &out.value[0];
        assert!((rho[0][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
        for (i, j) in [(0, 1), (1, 0), (1, 1)] {
            assert!(rho[i][j].as_f64().unwrap().abs() < 1e-12);
        }
        assert!(out.text().contains("tight=1e-9"));
    }

    #[test]
    fn quantum_validity_with_complex_entries() {
        let text = r#"{"instance":"quantum","op":"validity",
            "state":{"density":[[[0.5,[0,-0.5]],[[0,0.5],0.5]]]},
            "pred":[[[0.5,[0,-0.5]],[[0,0.5],0.5]]]}"#;
        let v = run(text).value.as_f64().unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn boolean_ops() {
        let out = run(r#"{"instance":"boolean","op":"validity","size":3,"state":1,"pred":[0,1]}"#);
        assert_eq!(out.value, json!("1"));
        let out = run(r#"{"instance":"boolean","op":"assert","size":3,"state":2,"pred":[0,1]}"#);
        assert_eq!(out.value, Value::Null);
    }

    #[test]
    fn rejects_bad_operands() {
        assert!(matches!(parse("{ not json"), Err(Error::Parse(_))));
        assert!(matches!(parse(r#"{"instance":"nosuch","op":"validity"}"#), Err(Error::Parse(_))));
        let bad_mass = parse(r#"{"instance":"prob","op":"validity","state":["2/3","2/3"],"pred":["1","0"]}"#).unwrap();
        assert!(matches!(evaluate(&bad_mass), Err(Error::OutOfRange(_))));
        let not_effect = parse(r#"{"instance":"quantum","op":"validity","state":{"vector":[1,0]},"pred":[[[2,0],[0,0]]]}"#).unwrap();
        assert!(matches!(evaluate(&not_effect), Err(Error::NotEffect(_))));
        let wrong_len = parse(r#"{"instance":"quantum","op":"validity","state":{"vector":[1,0,0]},"pred":[[[1,0],[0,0]]]}"#).unwrap();
        assert!(matches!(evaluate(&wrong_len), Err(Error::ShapeMismatch(_))));
    }
}
