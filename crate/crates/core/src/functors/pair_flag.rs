//! The functors `f` (pairs to flags) and `p` (middle-independent flags to
//! pairs).

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::diagram::{
    chain_flag, flag_of_pair, pair_of_flag, DiagramMorphism, ModuleDiagram, RingDiagram,
};
use crate::error::{precondition, Error, Result};
use crate::modules::ModuleValue;
use crate::ring::RingMap;

fn check_f_ring(rp: &RingDiagram, rf: &RingDiagram) -> Result<()> {
    let (pi, fi) = (rp.index(), rf.index());
    for i in 0..fi.len() {
        if rf.ring(i) != rp.ring(pair_of_flag(pi, fi, i)?) {
            return precondition(format!("flag ring at {} is not the pair ring", fi.label(i)));
        }
    }
    for (&(a, b), phi) in rf.maps() {
        if *phi != *rp.map(pair_of_flag(pi, fi, a)?, pair_of_flag(pi, fi, b)?) {
            return precondition(format!(
                "flag ring map {} → {} is not the pair map",
                fi.label(a),
                fi.label(b)
            ));
        }
    }
    Ok(())
}

/// `(fN)(F) = N(f(F) ⊇ l(F))`.
pub fn functor_f(n: &ModuleDiagram, rf: &Arc<RingDiagram>) -> Result<ModuleDiagram> {
    let rp = n.ring();
    check_f_ring(rp, rf)?;
    let (pi, fi) = (rp.index(), rf.index());
    let at = (0..fi.len())
        .map(|i| pair_of_flag(pi, fi, i))
        .collect::<Result<Vec<_>>>()?;
    let values = at.iter().map(|&p| n.value(p).clone()).collect();
    let mut maps = BTreeMap::new();
    for (a, b) in fi.relations() {
        if a != b {
            maps.insert((a, b), n.map(at[a], at[b]).clone());
        }
    }
    ModuleDiagram::new(rf.clone(), n.window(), values, maps)
}

/// `(pM)(K ⊇ L) = M(K ⊃ L)`; the map to `(H ⊇ M')` goes to the flag on
/// `{H, K, L, M'}` and back along the inverse of its middle faces.
pub fn functor_p(m: &ModuleDiagram, rp: &Arc<RingDiagram>) -> Result<ModuleDiagram> {
    let rf = m.ring();
    let (fi, pi) = (rf.index(), rp.index());
    if !fi.is_flags() || pi.is_flags() {
        return precondition("p takes a flag module to a pair module");
    }
    let w = m.window();
    let at = (0..pi.len())
        .map(|i| flag_of_pair(fi, pi.pair(i)))
        .collect::<Result<Vec<_>>>()?;
    let mut values = Vec::with_capacity(pi.len());
    for (i, &f) in at.iter().enumerate() {
        if rp.ring(i) != rf.ring(f) {
            return precondition(format!("pair ring at {} is not the flag ring", pi.label(i)));
        }
        values.push(m.value(f).clone());
    }
    let mut maps = BTreeMap::new();
    for (a, b) in pi.relations() {
        if a == b {
            continue;
        }
        let (pa, pb) = (pi.pair(a), pi.pair(b));
        let chain = chain_flag(fi, &[pb.first, pa.first, pa.last, pb.last])?;
        let (fa, fb) = (at[a], at[b]);
        let mid = m.map(fb, chain);
        if let Some(d) = mid.iso_defect(m.value(fb), m.value(chain), w)? {
            return Err(Error::Precondition(format!(
                "middle face {} → {} is not invertible: {d}",
                fi.label(fb),
                fi.label(chain)
            )));
        }
        let inv = mid.inverse(m.value(fb), m.value(chain), w)?;
        let id = RingMap::identity(rf.ring(chain));
        let comp = m.map(fa, chain).then(
            &inv,
            m.value(fa),
            m.value(chain),
            m.value(fb),
            rf.map(fa, chain),
            &id,
            w,
        )?;
        maps.insert((a, b), comp);
    }
    ModuleDiagram::new(rp.clone(), w, values, maps)
}

/// The isomorphism `f(pM) → M` given at `F` by the middle map
/// `M(f(F) ⊃ l(F)) → M(F)`.
pub fn fp_comparison(m: &ModuleDiagram, fpm: &ModuleDiagram) -> Result<DiagramMorphism> {
    let fi = m.ring().index();
    let comps = (0..fi.len())
        .map(|i| {
            let f = fi.flag(i);
            let short = flag_of_pair(
                fi,
                crate::poset::PairObj {
                    first: f.first(),
                    last: f.last(),
                },
            )?;
            Ok(m.map(short, i).clone())
        })
        .collect::<Result<Vec<_>>>()?;
    DiagramMorphism::new(fpm, m, comps)
}

/// Structural equality of module diagrams over the same ring diagram.
pub fn same_module(a: &ModuleDiagram, b: &ModuleDiagram) -> Result<bool> {
    if !a.ring().same_as(b.ring()) || a.window() != b.window() {
        return Ok(false);
    }
    if a.values() != b.values() {
        return Ok(false);
    }
    let w = a.window();
    for (&(x, y), f) in a.maps() {
        let vx: &ModuleValue = a.value(x);
        if !f.equals(b.map(x, y), vx, a.value(y), a.ring().map(x, y), w)? {
            return Ok(false);
        }
    }
    Ok(true)
}
