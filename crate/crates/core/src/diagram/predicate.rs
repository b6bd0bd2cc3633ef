use serde::Serialize;

use super::index::EdgeKind;
use super::module::ModuleDiagram;
use crate::error::Result;
use crate::modules::{Extension, ModuleValue};
use crate::ring::CompRingMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    PassOnWindow,
    Fail { witness: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredicateReport {
    pub predicate: String,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub window: String,
}

impl PredicateReport {
    pub fn new(predicate: &str, m: &ModuleDiagram, witness: Option<String>) -> Self {
        PredicateReport {
            predicate: predicate.to_string(),
            verdict: match witness {
                None => Verdict::PassOnWindow,
                Some(witness) => Verdict::Fail { witness },
            },
            window: m.window().to_string(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::PassOnWindow
    }

    pub fn witness(&self) -> Option<&str> {
        match &self.verdict {
            Verdict::PassOnWindow => None,
            Verdict::Fail { witness } => Some(witness),
        }
    }
}

/// `None` when `R(b) ⊗_{R(a)} M(a) → M(b)` is an isomorphism.
pub fn extension_defect(m: &ModuleDiagram, a: usize, b: usize) -> Result<Option<String>> {
    let w = m.window();
    let phi = m.ring().map(a, b);
    let f = m.map(a, b);
    for j in 0..phi.tgt_len() {
        let i = phi.src_of(j);
        let pj = phi.component(j);
        let src = m.value(a).component(i);
        let tgt = m.value(b).component(j);
        let defect = if pj.is_identity() {
            f.component(j).iso_defect(src, tgt, w)?
        } else {
            let ext = Extension::new(src, pj, w)?;
            let ind = ext.induced(
                src,
                tgt,
                pj,
                &CompRingMap::identity(pj.tgt()),
                f.component(j),
                w,
            )?;
            ind.iso_defect(&ext.module, tgt, w)?
        };
        if let Some(d) = defect {
            let label = &m.ring().ring(b).labels()[j];
            return Ok(Some(format!(
                "{} → {} [{label}]: {d}",
                m.label(a),
                m.label(b)
            )));
        }
    }
    Ok(None)
}

fn check_edges(m: &ModuleDiagram, kind: EdgeKind) -> Result<Option<String>> {
    for (a, b) in m.ring().index().edges(kind) {
        if let Some(d) = extension_defect(m, a, b)? {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Extensions of scalars along `∂₀` faces (flags) or horizontal arrows
/// (pairs).
pub fn is_qc(m: &ModuleDiagram) -> Result<PredicateReport> {
    Ok(PredicateReport::new("qc", m, check_edges(m, EdgeKind::Qc)?))
}

/// Extensions of scalars along `∂_s` faces (flags) or vertical arrows
/// (pairs).
pub fn is_extended(m: &ModuleDiagram) -> Result<PredicateReport> {
    Ok(PredicateReport::new(
        "extended",
        m,
        check_edges(m, EdgeKind::Extended)?,
    ))
}

pub fn is_qce(m: &ModuleDiagram) -> Result<PredicateReport> {
    let w = match check_edges(m, EdgeKind::Qc)? {
        Some(w) => Some(w),
        None => check_edges(m, EdgeKind::Extended)?,
    };
    Ok(PredicateReport::new("qce", m, w))
}

/// Maps along middle faces are isomorphisms.
pub fn is_middle_independent(m: &ModuleDiagram) -> Result<PredicateReport> {
    Ok(PredicateReport::new(
        "middle-independent",
        m,
        check_edges(m, EdgeKind::Middle)?,
    ))
}

/// `φ^K M`: the value on the length-zero flag or the pair `(K ⊇ K)`.
pub fn phi(m: &ModuleDiagram, k: usize) -> &ModuleValue {
    m.value(m.ring().index().diagonal(k))
}
