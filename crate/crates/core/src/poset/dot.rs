use std::fmt::Write;

use super::{FlagPoset, PairArrow, PairPoset, Poset};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Hasse diagram, edges pointing from smaller to larger.
pub fn poset_dot(p: &Poset) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", p.name()).unwrap();
    for i in 0..p.len() {
        writeln!(out, "  n{i} [label={}];", quote(p.label(i))).unwrap();
    }
    for (a, b) in p.covers() {
        writeln!(out, "  n{a} -> n{b};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// Flags with arrows `∂_i F → F`.
pub fn flag_poset_dot(fp: &FlagPoset) -> String {
    let mut out = String::new();
    writeln!(out, "digraph flag_{} {{", fp.base().name()).unwrap();
    for i in 0..fp.len() {
        writeln!(out, "  f{i} [label={}];", quote(&fp.label(i))).unwrap();
    }
    for (i, f) in fp.flags().iter().enumerate() {
        if f.len() == 0 {
            continue;
        }
        for k in 0..=f.len() {
            let e = f.face(k).expect("face in range");
            let j = fp.index_of(&e).expect("faces are flags");
            writeln!(out, "  f{j} -> f{i} [label=\"d{k}\"];").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// Generating arrows of the pair category; vertical arrows are dashed.
pub fn pair_poset_dot(pp: &PairPoset) -> String {
    let base = pp.base();
    let mut out = String::new();
    writeln!(out, "digraph pairs_{} {{", base.name()).unwrap();
    for (i, p) in pp.pairs().iter().enumerate() {
        writeln!(out, "  p{i} [label={}];", quote(&p.label(base))).unwrap();
    }
    for (a, b, kind) in pp.generators() {
        let ia = pp.index_of(a).unwrap();
        let ib = pp.index_of(b).unwrap();
        let style = match kind {
            PairArrow::Horizontal => "solid",
            PairArrow::Vertical => "dashed",
            PairArrow::Mixed => unreachable!(),
        };
        writeln!(out, "  p{ia} -> p{ib} [style={style}];").unwrap();
    }
    out.push_str("}\n");
    out
}
