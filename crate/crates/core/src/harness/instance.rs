use std::sync::Arc;

use serde::Serialize;

use crate::diagram::{Index, RingDiagram};
use crate::error::Result;
use crate::functors::{Projection, Pushforward};
use crate::lattice::{close_universe, ClosedSubgroup, ClosureReport};
use crate::modules::Window;
use crate::poset::{FlagPoset, MultiplicitySystem, PairPoset, Poset, PosetMap};
use crate::ring::{EulerSystem, EulerVariant, SplittingDiagram};

pub const UNIVERSE_CAP: usize = 64;
pub const FLAG_CAP: usize = 5000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Config {
    pub window: Window,
    pub denominator_bound: u64,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            window: Window::default(),
            denominator_bound: 8,
            seed: 42,
        }
    }
}

/// The named universes the harness knows how to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UniverseSpec {
    /// `{1, C₂, C₃, T}` in the circle.
    Rank1,
    /// `{1, T}` in the circle.
    Minimal,
    /// The diagonal and first-factor circles in `T²` with `C₂ × 1`, closed.
    Rank2,
}

impl UniverseSpec {
    pub fn rank(self) -> usize {
        match self {
            UniverseSpec::Rank1 | UniverseSpec::Minimal => 1,
            UniverseSpec::Rank2 => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            UniverseSpec::Rank1 => "rank1",
            UniverseSpec::Minimal => "minimal",
            UniverseSpec::Rank2 => "rank2",
        }
    }

    pub fn generators(self) -> Vec<ClosedSubgroup> {
        match self {
            UniverseSpec::Rank1 => vec![
                ClosedSubgroup::trivial(1),
                ClosedSubgroup::cyclic(2),
                ClosedSubgroup::cyclic(3),
                ClosedSubgroup::torus(1),
            ],
            UniverseSpec::Minimal => vec![ClosedSubgroup::trivial(1), ClosedSubgroup::torus(1)],
            UniverseSpec::Rank2 => vec![
                ClosedSubgroup::trivial(2),
                ClosedSubgroup::from_annihilator("C2x1", 2, &[vec![2, 0], vec![0, 1]]),
                ClosedSubgroup::from_annihilator("HD", 2, &[vec![1, -1]]),
                ClosedSubgroup::from_annihilator("H1", 2, &[vec![0, 1]]),
                ClosedSubgroup::torus(2),
            ],
        }
    }
}

impl std::str::FromStr for UniverseSpec {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rank1" => Ok(UniverseSpec::Rank1),
            "minimal" => Ok(UniverseSpec::Minimal),
            "rank2" => Ok(UniverseSpec::Rank2),
            _ => Err(crate::Error::Precondition(format!(
                "unknown universe {s:?}; expected rank1, minimal or rank2"
            ))),
        }
    }
}

/// A universe with its posets, coefficient diagrams and the pushforwards
/// between them.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub rank: usize,
    pub spec: UniverseSpec,
    pub universe: Vec<ClosedSubgroup>,
    pub closure: ClosureReport,
    pub sigma_a: Arc<Poset>,
    pub sigma_c: Arc<Poset>,
    pub sigma_d: Arc<Poset>,
    pub ms: MultiplicitySystem,
    pub dim_map: PosetMap,
    pub variant: EulerVariant,
    pub rs_a: SplittingDiagram,
    pub sys_a: EulerSystem,
    pub rs_c: SplittingDiagram,
    pub sys_c: EulerSystem,
    pub flags_a: Arc<FlagPoset>,
    pub flags_c: Arc<FlagPoset>,
    pub flags_d: Arc<FlagPoset>,
    pub pairs_a: Arc<PairPoset>,
    pub pairs_c: Arc<PairPoset>,
    pub r_af: Arc<RingDiagram>,
    pub r_ap: Arc<RingDiagram>,
    pub r_cf: Arc<RingDiagram>,
    pub r_cp: Arc<RingDiagram>,
    pub r_df: Arc<RingDiagram>,
    /// `q` on flags, `R_a^f → R_c^f`.
    pub q_flags: Pushforward,
    /// `q` on pairs, `R_a^p → R_c^p`.
    pub q_pairs: Pushforward,
    /// `d` on flags, `R_c^f → R_d^f = d_!R_c^f`.
    pub d_flags: Pushforward,
    pub config: Config,
}

impl Instance {
    pub fn build(spec: UniverseSpec, config: Config) -> Result<Self> {
        Self::build_with(spec, EulerVariant::Natural, config)
    }

    pub fn build_with(spec: UniverseSpec, variant: EulerVariant, config: Config) -> Result<Self> {
        let rank = spec.rank();
        let (universe, closure) = close_universe(&spec.generators(), UNIVERSE_CAP)?;
        let sigma_a = Arc::new(Poset::sigma_a(&universe)?);
        let connected: Vec<ClosedSubgroup> = universe
            .iter()
            .filter(|h| h.is_connected())
            .cloned()
            .collect();
        let sigma_c = Arc::new(Poset::sigma_c(&connected)?);
        let sigma_d = Arc::new(Poset::sigma_d(rank));
        let ms = MultiplicitySystem::new(sigma_a.clone(), sigma_c.clone())?;
        let dim_map = PosetMap::dimension(sigma_c.clone(), sigma_d.clone())?;

        let rs_a = SplittingDiagram::borel(sigma_a.clone())?;
        let sys_a = EulerSystem::standard_borel(&rs_a)?;
        let rs_c = SplittingDiagram::fibered(&ms)?;
        let sys_c = EulerSystem::standard_fibered(&ms, &rs_c, variant)?;

        let flags_a = Arc::new(FlagPoset::new(sigma_a.clone(), FLAG_CAP)?);
        let flags_c = Arc::new(FlagPoset::new(sigma_c.clone(), FLAG_CAP)?);
        let flags_d = Arc::new(FlagPoset::new(sigma_d.clone(), FLAG_CAP)?);
        let pairs_a = Arc::new(PairPoset::new(sigma_a.clone()));
        let pairs_c = Arc::new(PairPoset::new(sigma_c.clone()));

        let r_af = Arc::new(RingDiagram::coefficient(&rs_a, &sys_a, flags_a.clone())?);
        let r_ap = Arc::new(RingDiagram::pairs(&rs_a, &sys_a, pairs_a.clone())?);
        let r_cf = Arc::new(RingDiagram::coefficient(&rs_c, &sys_c, flags_c.clone())?);
        let r_cp = Arc::new(RingDiagram::pairs(&rs_c, &sys_c, pairs_c.clone())?);

        let (ia, ic, id) = (
            Index::Flags(flags_a.clone()),
            Index::Flags(flags_c.clone()),
            Index::Flags(flags_d.clone()),
        );
        let q_flags = Pushforward::with_target(
            Projection::flags(&ia, &ic, ms.q())?,
            r_af.clone(),
            r_cf.clone(),
        )?;
        let q_pairs = Pushforward::with_target(
            Projection::pairs(
                &Index::Pairs(pairs_a.clone()),
                &Index::Pairs(pairs_c.clone()),
                ms.q(),
            )?,
            r_ap.clone(),
            r_cp.clone(),
        )?;
        let d_flags = Pushforward::new(Projection::flags(&ic, &id, &dim_map)?, r_cf.clone())?;
        let r_df = d_flags.tgt().clone();

        Ok(Instance {
            name: spec.name().to_string(),
            rank,
            spec,
            universe,
            closure,
            sigma_a,
            sigma_c,
            sigma_d,
            ms,
            dim_map,
            variant,
            rs_a,
            sys_a,
            rs_c,
            sys_c,
            flags_a,
            flags_c,
            flags_d,
            pairs_a,
            pairs_c,
            r_af,
            r_ap,
            r_cf,
            r_cp,
            r_df,
            q_flags,
            q_pairs,
            d_flags,
            config,
        })
    }

    pub fn window(&self) -> Window {
        self.config.window
    }
}
