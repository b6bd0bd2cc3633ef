//! JSON form of module diagrams. A diagram is reloaded against the ring
//! diagram it was exported from; the index labels must match.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{ModuleDiagram, RingDiagram};
use crate::error::{Error, Result};
use crate::modules::{CompMap, CompModule, Elem, ModMap, ModuleValue, Pieces, Window};
use crate::ring::comp::{poly_from_json, poly_json, CompRingJson, PolyJson};
use crate::ring::poly::{q_parse, q_str};
use crate::ring::{CompRing, QMatrix, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionJson {
    pub num: PolyJson,
    pub den: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElemJson {
    Coords(Vec<FractionJson>),
    Piece { degree: i64, vector: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendJson {
    Free {
        degrees: Vec<i64>,
    },
    Pieces {
        dims: Vec<usize>,
        actions: Vec<Vec<MatrixJson>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompModuleJson {
    pub ring: CompRingJson,
    pub backend: BackendJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompMapJson {
    Basis(Vec<ElemJson>),
    Degreewise(Vec<MatrixJson>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub from: usize,
    pub to: usize,
    pub components: Vec<CompMapJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDiagramJson {
    pub objects: Vec<String>,
    pub window: Window,
    pub values: Vec<Vec<CompModuleJson>>,
    /// Strict relations only; identities are implied.
    pub maps: Vec<MapJson>,
}

fn q_of(s: &str) -> Result<Q> {
    q_parse(s).ok_or_else(|| Error::Construction(format!("bad rational {s:?}")))
}

fn matrix_json(m: &QMatrix) -> MatrixJson {
    MatrixJson {
        rows: m.rows(),
        cols: m.cols(),
        entries: (0..m.rows())
            .map(|i| m.row(i).iter().map(q_str).collect())
            .collect(),
    }
}

fn matrix_from(j: &MatrixJson) -> Result<QMatrix> {
    let rows = j
        .entries
        .iter()
        .map(|r| {
            if r.len() != j.cols {
                return Err(Error::Construction("ragged matrix".into()));
            }
            r.iter().map(|x| q_of(x)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.len() != j.rows {
        return Err(Error::Construction("matrix row count mismatch".into()));
    }
    Ok(QMatrix::from_rows(j.cols, rows))
}

fn elem_json(x: &Elem) -> ElemJson {
    match x {
        Elem::Coords(c) => ElemJson::Coords(
            c.iter()
                .map(|f| FractionJson {
                    num: poly_json(&f.num),
                    den: f.den.clone(),
                })
                .collect(),
        ),
        Elem::Piece(d, v) => ElemJson::Piece {
            degree: *d,
            vector: v.iter().map(q_str).collect(),
        },
    }
}

fn elem_from(j: &ElemJson, ring: &CompRing) -> Result<Elem> {
    Ok(match j {
        ElemJson::Coords(c) => Elem::Coords(
            c.iter()
                .map(|f| {
                    if f.den.len() != ring.inverted().len() {
                        return Err(Error::Construction("denominator length mismatch".into()));
                    }
                    Ok(ring.fraction(poly_from_json(ring.nvars(), &f.num)?, f.den.clone()))
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        ElemJson::Piece { degree, vector } => Elem::Piece(
            *degree,
            vector.iter().map(|x| q_of(x)).collect::<Result<_>>()?,
        ),
    })
}

fn module_json(m: &CompModule, w: Window) -> Result<CompModuleJson> {
    let backend = match m.free_degrees() {
        Some(d) => BackendJson::Free {
            degrees: d.to_vec(),
        },
        None => {
            let p = m.pieces(w)?;
            BackendJson::Pieces {
                dims: p.dims().to_vec(),
                actions: (0..m.ring().nvars())
                    .map(|v| w.degrees().map(|d| matrix_json(p.action(v, d))).collect())
                    .collect(),
            }
        }
    };
    Ok(CompModuleJson {
        ring: m.ring().to_json(),
        backend,
    })
}

fn module_from(j: &CompModuleJson, w: Window) -> Result<CompModule> {
    let ring = CompRing::from_json(&j.ring)?;
    match &j.backend {
        BackendJson::Free { degrees } => Ok(CompModule::free(ring, degrees.clone())),
        BackendJson::Pieces { dims, actions } => {
            let actions = actions
                .iter()
                .map(|per| per.iter().map(matrix_from).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let p = Pieces::new(&ring, w, dims.clone(), actions)?;
            CompModule::from_pieces(ring, p)
        }
    }
}

fn map_json(f: &CompMap) -> CompMapJson {
    match f {
        CompMap::Basis(images) => CompMapJson::Basis(images.iter().map(elem_json).collect()),
        CompMap::Degreewise(mats) => {
            CompMapJson::Degreewise(mats.iter().map(matrix_json).collect())
        }
    }
}

fn map_from(j: &CompMapJson, tgt: &CompRing) -> Result<CompMap> {
    Ok(match j {
        CompMapJson::Basis(images) => CompMap::Basis(
            images
                .iter()
                .map(|x| elem_from(x, tgt))
                .collect::<Result<_>>()?,
        ),
        CompMapJson::Degreewise(mats) => {
            CompMap::Degreewise(mats.iter().map(matrix_from).collect::<Result<_>>()?)
        }
    })
}

impl ModuleDiagram {
    pub fn to_json(&self) -> Result<ModuleDiagramJson> {
        let w = self.window();
        let idx = self.ring().index();
        let values = self
            .values()
            .iter()
            .map(|v| {
                v.components()
                    .iter()
                    .map(|c| module_json(c, w))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let maps = self
            .maps()
            .iter()
            .filter(|((a, b), _)| a != b)
            .map(|(&(a, b), m)| MapJson {
                from: a,
                to: b,
                components: m.components().iter().map(map_json).collect(),
            })
            .collect();
        Ok(ModuleDiagramJson {
            objects: (0..idx.len()).map(|i| idx.label(i)).collect(),
            window: w,
            values,
            maps,
        })
    }

    pub fn from_json(j: &ModuleDiagramJson, ring: Arc<RingDiagram>) -> Result<Self> {
        let idx = ring.index();
        let labels: Vec<String> = (0..idx.len()).map(|i| idx.label(i)).collect();
        if labels != j.objects {
            return Err(Error::Precondition(
                "diagram was exported over a different index".into(),
            ));
        }
        let w = j.window;
        let values = j
            .values
            .iter()
            .enumerate()
            .map(|(i, comps)| {
                let comps = comps
                    .iter()
                    .map(|c| module_from(c, w))
                    .collect::<Result<Vec<_>>>()?;
                ModuleValue::new(ring.ring(i), comps)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut maps = BTreeMap::new();
        for m in &j.maps {
            if m.from >= values.len() || m.to >= values.len() {
                return Err(Error::Construction("map endpoint out of range".into()));
            }
            let tgt = &values[m.to];
            if m.components.len() != tgt.len() {
                return Err(Error::Construction(
                    "map has the wrong number of components".into(),
                ));
            }
            let comps = m
                .components
                .iter()
                .zip(tgt.components())
                .map(|(c, t)| map_from(c, t.ring()))
                .collect::<Result<Vec<_>>>()?;
            maps.insert((m.from, m.to), ModMap::new(comps));
        }
        ModuleDiagram::new(ring, w, values, maps)
    }

    /// SHA-256 of the canonical JSON text, hex encoded.
    pub fn content_hash(&self) -> Result<String> {
        let text =
            serde_json::to_vec(&self.to_json()?).map_err(|e| Error::Construction(e.to_string()))?;
        Ok(hex::encode(Sha256::digest(&text)))
    }
}

/// One logged functor application.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub functor: String,
    pub input_hash: String,
    pub output_hash: String,
}

impl Trace {
    pub fn new(functor: &str, input: &ModuleDiagram, output: &ModuleDiagram) -> Result<Self> {
        Ok(Trace {
            functor: functor.to_string(),
            input_hash: input.content_hash()?,
            output_hash: output.content_hash()?,
        })
    }
}
