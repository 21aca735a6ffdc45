//! JSON wire formats.
//!
//! Complex numbers travel as `[re, im]` pairs. Conversions from wire structs
//! re-run full validation, so a deserialized value is as trustworthy as one
//! built in code.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circulant::CirculantSpec;
use crate::error::{Error, Result};
use crate::gram::GramMatrix;
use crate::linalg::ComplexMatrix;
use crate::states::{PureState, StateTuple};
use crate::synth::{Aux, Method, RealizationPlan};

pub type Pair = [f64; 2];

pub fn to_pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

pub fn from_pair(p: Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateTupleJson {
    pub dim: usize,
    pub states: Vec<Vec<Pair>>,
}

impl From<&StateTuple> for StateTupleJson {
    fn from(t: &StateTuple) -> Self {
        Self {
            dim: t.dim(),
            states: t
                .states()
                .iter()
                .map(|s| s.amps().iter().copied().map(to_pair).collect())
                .collect(),
        }
    }
}

impl TryFrom<StateTupleJson> for StateTuple {
    type Error = Error;

    fn try_from(j: StateTupleJson) -> Result<Self> {
        let states = j
            .states
            .into_iter()
            .map(|amps| {
                if amps.len() != j.dim {
                    return Err(Error::DimMismatch {
                        expected: j.dim,
                        found: amps.len(),
                    });
                }
                PureState::new(amps.into_iter().map(from_pair).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        StateTuple::new(states)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramMatrixJson {
    pub n: usize,
    pub entries: Vec<Vec<Pair>>,
}

impl GramMatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            n: m.rows(),
            entries: m
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(to_pair).collect())
                .collect(),
        }
    }

    /// The raw matrix, checked only for shape.
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.entries.len() != self.n {
            return Err(Error::SizeMismatch(self.n, self.entries.len()));
        }
        let rows: Vec<Vec<Complex64>> = self
            .entries
            .iter()
            .map(|r| r.iter().copied().map(from_pair).collect())
            .collect();
        let m = ComplexMatrix::from_rows(&rows)?;
        if !m.is_square() {
            return Err(Error::NonSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        Ok(m)
    }
}

impl From<&GramMatrix> for GramMatrixJson {
    fn from(g: &GramMatrix) -> Self {
        Self::from_matrix(g.matrix())
    }
}

impl TryFrom<GramMatrixJson> for GramMatrix {
    type Error = Error;

    fn try_from(j: GramMatrixJson) -> Result<Self> {
        GramMatrix::new(j.to_matrix()?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CirculantSpecJson {
    pub n: usize,
    pub z: Vec<Pair>,
}

impl From<&CirculantSpec> for CirculantSpecJson {
    fn from(s: &CirculantSpec) -> Self {
        Self {
            n: s.n(),
            z: s.z().iter().copied().map(to_pair).collect(),
        }
    }
}

impl TryFrom<CirculantSpecJson> for CirculantSpec {
    type Error = Error;

    fn try_from(j: CirculantSpecJson) -> Result<Self> {
        if j.z.len() != j.n {
            return Err(Error::SizeMismatch(j.n, j.z.len()));
        }
        CirculantSpec::new(j.z.into_iter().map(from_pair).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanMeta {
    pub method: Method,
    pub target: Pair,
    pub achieved: Pair,
    pub residual: f64,
    pub aux: Aux,
}

/// A realization plan: the tuple fields followed by a `plan` object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanJson {
    #[serde(flatten)]
    pub tuple: StateTupleJson,
    pub plan: PlanMeta,
}

impl From<&RealizationPlan> for PlanJson {
    fn from(p: &RealizationPlan) -> Self {
        Self {
            tuple: (&p.tuple).into(),
            plan: PlanMeta {
                method: p.method,
                target: to_pair(p.target),
                achieved: to_pair(p.achieved),
                residual: p.residual,
                aux: p.aux.clone(),
            },
        }
    }
}
