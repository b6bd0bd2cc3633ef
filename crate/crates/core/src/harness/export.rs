//! Deterministic exports: DOT for posets, JSON for instances, diagrams,
//! reports and functor traces.

use std::str::FromStr;

use serde::Serialize;

use super::corpus::{corpus, Side};
use super::instance::{Config, Instance};
use super::suites::LawReport;
use crate::diagram::{ModuleDiagram, RingDiagram, Trace};
use crate::error::{Error, Result};
use crate::functors::{apply_e, gamma_v, pi_shriek, pi_shriek_e};
use crate::lattice::{ClosureReport, SubgroupJson};
use crate::poset::{flag_poset_dot, pair_poset_dot, poset_dot, PosetJson};
use crate::ring::product::ProductRingJson;
use crate::ring::EulerVariant;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PosetChoice {
    Cotoral,
    Connected,
    Dimension,
}

impl FromStr for PosetChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "cotoral" => Ok(PosetChoice::Cotoral),
            "c" | "connected" => Ok(PosetChoice::Connected),
            "d" | "dimension" => Ok(PosetChoice::Dimension),
            _ => Err(Error::Precondition(format!(
                "unknown poset {s:?}; expected a, c or d"
            ))),
        }
    }
}

/// The coefficient diagrams an export can address.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagramChoice {
    ToralFlags,
    ToralPairs,
    ConnectedFlags,
    ConnectedPairs,
    DimensionFlags,
}

impl FromStr for DiagramChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "af" => Ok(DiagramChoice::ToralFlags),
            "ap" => Ok(DiagramChoice::ToralPairs),
            "cf" => Ok(DiagramChoice::ConnectedFlags),
            "cp" => Ok(DiagramChoice::ConnectedPairs),
            "df" => Ok(DiagramChoice::DimensionFlags),
            _ => Err(Error::Precondition(format!(
                "unknown diagram {s:?}; expected af, ap, cf, cp or df"
            ))),
        }
    }
}

impl DiagramChoice {
    pub fn ring<'a>(&self, inst: &'a Instance) -> &'a std::sync::Arc<RingDiagram> {
        match self {
            DiagramChoice::ToralFlags => &inst.r_af,
            DiagramChoice::ToralPairs => &inst.r_ap,
            DiagramChoice::ConnectedFlags => &inst.r_cf,
            DiagramChoice::ConnectedPairs => &inst.r_cp,
            DiagramChoice::DimensionFlags => &inst.r_df,
        }
    }
}

pub fn poset_dot_of(inst: &Instance, which: PosetChoice) -> String {
    poset_dot(match which {
        PosetChoice::Cotoral => &inst.sigma_a,
        PosetChoice::Connected => &inst.sigma_c,
        PosetChoice::Dimension => &inst.sigma_d,
    })
}

pub fn flag_dot_of(inst: &Instance, which: PosetChoice) -> String {
    flag_poset_dot(match which {
        PosetChoice::Cotoral => &inst.flags_a,
        PosetChoice::Connected => &inst.flags_c,
        PosetChoice::Dimension => &inst.flags_d,
    })
}

/// Pair categories exist for the cotoral and connected posets only.
pub fn pair_dot_of(inst: &Instance, which: PosetChoice) -> Result<String> {
    match which {
        PosetChoice::Cotoral => Ok(pair_poset_dot(&inst.pairs_a)),
        PosetChoice::Connected => Ok(pair_poset_dot(&inst.pairs_c)),
        PosetChoice::Dimension => Err(Error::Precondition(
            "no pair category is built over the dimension poset".into(),
        )),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RingValueJson {
    pub object: String,
    pub ring: ProductRingJson,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceJson {
    pub name: String,
    pub rank: usize,
    pub config: Config,
    pub universe: Vec<SubgroupJson>,
    pub closure: ClosureReport,
    pub sigma_a: PosetJson,
    pub sigma_c: PosetJson,
    pub sigma_d: PosetJson,
    pub variant: EulerVariant,
    pub toral_flags: Vec<RingValueJson>,
    pub connected_flags: Vec<RingValueJson>,
    pub connected_pairs: Vec<RingValueJson>,
    pub dimension_flags: Vec<RingValueJson>,
    pub sample_modules: Vec<String>,
}

fn ring_values(r: &RingDiagram) -> Vec<RingValueJson> {
    (0..r.len())
        .map(|i| RingValueJson {
            object: r.index().label(i),
            ring: r.ring(i).to_json(),
        })
        .collect()
}

pub fn instance_json(inst: &Instance) -> Result<InstanceJson> {
    let mut sample_modules = Vec::new();
    for side in [Side::Toral, Side::Connected] {
        for e in corpus(inst, side, 2, inst.config.seed)? {
            sample_modules.push(format!("{side:?} {}", e.name));
        }
    }
    Ok(InstanceJson {
        name: inst.name.clone(),
        rank: inst.rank,
        config: inst.config,
        universe: inst
            .universe
            .iter()
            .map(|h| h.to_json())
            .collect::<Result<_>>()?,
        closure: inst.closure.clone(),
        sigma_a: inst.sigma_a.to_json(),
        sigma_c: inst.sigma_c.to_json(),
        sigma_d: inst.sigma_d.to_json(),
        variant: inst.variant,
        toral_flags: ring_values(&inst.r_af),
        connected_flags: ring_values(&inst.r_cf),
        connected_pairs: ring_values(&inst.r_cp),
        dimension_flags: ring_values(&inst.r_df),
        sample_modules,
    })
}

pub fn pretty<T: Serialize>(x: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(x)?;
    s.push('\n');
    Ok(s)
}

pub fn diagram_json(m: &ModuleDiagram) -> Result<String> {
    pretty(&m.to_json()?)
}

pub fn report_json(r: &LawReport) -> Result<String> {
    r.to_json_string()
}

/// The functors applied to the ring modules of an instance, logged by
/// content hash.
pub fn functor_traces(inst: &Instance) -> Result<Vec<Trace>> {
    let w = inst.window();
    let mut out = Vec::new();
    for (name, push) in [
        ("q on flags", &inst.q_flags),
        ("q on pairs", &inst.q_pairs),
        ("dimension", &inst.d_flags),
    ] {
        let m = ModuleDiagram::ring_module(push.src().clone(), w)?;
        let pm = pi_shriek(push, &m)?;
        out.push(Trace::new(&format!("π_! ({name})"), &m, &pm)?);
        out.push(Trace::new(
            &format!("e ({name})"),
            &pm,
            &apply_e(push, &pm)?,
        )?);
        let a = pi_shriek_e(push, &m)?;
        out.push(Trace::new(&format!("π_!^e ({name})"), &m, &a.module)?);
    }
    let ring_c = ModuleDiagram::ring_module(inst.r_cf.clone(), w)?;
    match gamma_v(&ring_c) {
        Ok(g) => out.push(Trace::new("Γ_v", &ring_c, &g.module)?),
        Err(Error::Unsupported(_)) => {}
        Err(e) => return Err(e),
    }
    Ok(out)
}
