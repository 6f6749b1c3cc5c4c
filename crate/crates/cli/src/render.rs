//! Text and SVG rendering of polygons and trees.

use std::fmt::Write;

use puiseux_core::algebra::rat::{fmt_rat, to_f64, Rat};
use puiseux_core::expansion::{CriticalPoint, KuoLuTree, TreeNode};
use puiseux_core::polygon::{Edge, Polygon};

pub fn fmt_opt(r: &Option<Rat>) -> String {
    r.as_ref().map_or("inf".to_string(), fmt_rat)
}

fn edge_label(e: &Edge) -> String {
    match &e.coslope {
        None => "vertical".into(),
        Some(h) if e.is_horizontal() => format!("horizontal (h = {})", fmt_rat(h)),
        Some(h) => format!("co-slope {}", fmt_rat(h)),
    }
}

pub fn polygon_text(p: &Polygon) -> String {
    let mut s = String::new();
    let hs: Vec<String> = p.sloped_edges().iter().filter_map(|e| e.coslope.as_ref().map(fmt_rat)).collect();
    writeln!(s, "order m = {}", p.order).unwrap();
    writeln!(s, "co-slopes: {{{}}}", hs.join(", ")).unwrap();
    for (i, e) in p.edges.iter().enumerate() {
        writeln!(
            s,
            "E_{i}: {} from ({}, {}) to ({}, {}), P_E = {}",
            edge_label(e),
            e.left.k,
            fmt_rat(&e.left.q),
            e.right.k,
            fmt_rat(&e.right.q),
            e.assoc.fmt_var("z")
        )
        .unwrap();
    }
    match p.top_edge() {
        Some(e) => writeln!(s, "P_top = {}", e.assoc.fmt_var("z")).unwrap(),
        None => writeln!(s, "P_top: none").unwrap(),
    }
    s
}

const W: f64 = 480.0;
const H: f64 = 360.0;
const PAD: f64 = 40.0;

fn svg_open(s: &mut String) {
    writeln!(
        s,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
}

/// Dots at `(k, q)`; the polygon boundary drawn through its vertices.
pub fn polygon_svg(p: &Polygon) -> String {
    let kmax = p.all_dots.iter().map(|d| d.k).max().unwrap_or(1).max(1) as f64;
    let qmax = p.all_dots.iter().map(|d| to_f64(&d.q)).fold(1.0, f64::max);
    let sx = |k: f64| PAD + k / kmax * (W - 2.0 * PAD);
    let sy = |q: f64| H - PAD - q / qmax * (H - 2.0 * PAD);
    let mut s = String::new();
    svg_open(&mut s);
    writeln!(
        s,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/><line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        sx(0.0), sy(0.0), sx(kmax), sy(0.0), sx(0.0), sy(0.0), sx(0.0), sy(qmax)
    )
    .unwrap();
    for e in p.sloped_edges() {
        let (x1, y1) = (sx(e.left.k as f64), sy(to_f64(&e.left.q)));
        let (x2, y2) = (sx(e.right.k as f64), sy(to_f64(&e.right.q)));
        writeln!(s, r#"<line x1="{x1:.1}" y1="{y1:.1}" x2="{x2:.1}" y2="{y2:.1}" stroke="steelblue" stroke-width="2"/>"#).unwrap();
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-size="12">{}</text>"#,
            (x1 + x2) / 2.0 + 4.0,
            (y1 + y2) / 2.0 - 4.0,
            edge_label(e)
        )
        .unwrap();
    }
    let lv = &p.last_vertex;
    writeln!(
        s,
        r#"<line x1="{0:.1}" y1="{1:.1}" x2="{0:.1}" y2="{2:.1}" stroke="steelblue" stroke-width="2" stroke-dasharray="4"/>"#,
        sx(lv.k as f64),
        sy(to_f64(&lv.q)),
        PAD
    )
    .unwrap();
    for d in &p.all_dots {
        writeln!(s, r#"<circle cx="{:.1}" cy="{:.1}" r="4" fill="black"/>"#, sx(d.k as f64), sy(to_f64(&d.q))).unwrap();
    }
    s.push_str("</svg>\n");
    s
}

pub fn tree_text(tree: &KuoLuTree, crit: &[CriticalPoint]) -> String {
    let mut s = String::new();
    writeln!(s, "root branches: {}", tree.branches.len()).unwrap();
    for (i, b) in tree.branches.iter().enumerate() {
        writeln!(s, "  [{i}] {} (multiplicity {})", b.series, b.multiplicity).unwrap();
    }
    let hs: Vec<String> = tree.heights().iter().map(fmt_rat).collect();
    writeln!(s, "bar heights: {{{}}}", hs.join(", ")).unwrap();
    match tree.top {
        TreeNode::Bar(top) => bar_lines(tree, top, 0, &mut s),
        TreeNode::Leaf(k) => writeln!(s, "no bars: single root [{k}]").unwrap(),
    }
    let total: u32 = crit.iter().map(|c| c.multiplicity).sum();
    writeln!(s, "critical points: {} (total multiplicity {total})", crit.len()).unwrap();
    for c in crit {
        writeln!(
            s,
            "  gamma = {}, m_crit = {}, L = {}, value = {}",
            c.gamma,
            c.multiplicity,
            fmt_opt(&c.lojasiewicz),
            c.value
        )
        .unwrap();
    }
    s
}

fn bar_lines(tree: &KuoLuTree, b: usize, depth: usize, s: &mut String) {
    let bar = &tree.bars[b];
    let pad = "  ".repeat(depth);
    writeln!(
        s,
        "{pad}bar B{b}: h = {}, L = {}, P_B = {}, roots {:?}",
        fmt_rat(&bar.height),
        fmt_rat(&bar.lojasiewicz),
        bar.assoc.fmt_var("z"),
        bar.roots
    )
    .unwrap();
    for (c, child) in &bar.children {
        match child {
            TreeNode::Bar(k) => {
                writeln!(s, "{pad}  z = {c}:").unwrap();
                bar_lines(tree, *k, depth + 2, s);
            }
            TreeNode::Leaf(k) => writeln!(s, "{pad}  z = {c}: root [{k}]").unwrap(),
        }
    }
}

/// Bars as horizontal segments at their heights, roots as vertical lines
/// to the top, critical points as hollow circles on their bar.
pub fn tree_svg(tree: &KuoLuTree, crit: &[CriticalPoint]) -> String {
    let hmax = tree.heights().iter().map(to_f64).fold(0.0, f64::max) * 1.25 + 0.5;
    let n = tree.branches.len().max(1) as f64;
    let sy = |h: f64| H - PAD - h / hmax * (H - 2.0 * PAD);
    // leaf positions in depth-first order
    let mut order = Vec::new();
    leaves(tree, tree.top, &mut order);
    let xs: Vec<f64> = {
        let mut v = vec![0.0; tree.branches.len()];
        for (i, l) in order.iter().enumerate() {
            v[*l] = PAD + (i as f64 + 0.5) / n * (W - 2.0 * PAD);
        }
        v
    };
    let mut s = String::new();
    svg_open(&mut s);
    let mut span = vec![(0.0, 0.0); tree.bars.len()];
    for (i, bar) in tree.bars.iter().enumerate() {
        let lo = bar.roots.iter().map(|r| xs[*r]).fold(f64::INFINITY, f64::min);
        let hi = bar.roots.iter().map(|r| xs[*r]).fold(f64::NEG_INFINITY, f64::max);
        span[i] = (lo, hi);
        let y = sy(to_f64(&bar.height));
        writeln!(s, r#"<line x1="{lo:.1}" y1="{y:.1}" x2="{hi:.1}" y2="{y:.1}" stroke="black" stroke-width="3"/>"#).unwrap();
        writeln!(s, r#"<text x="{:.1}" y="{:.1}" font-size="12">{}</text>"#, hi + 6.0, y + 4.0, fmt_rat(&bar.height)).unwrap();
        let from = bar.parent.map_or(H - PAD, |p| sy(to_f64(&tree.bars[p].height)));
        let mid = (lo + hi) / 2.0;
        writeln!(s, r#"<line x1="{mid:.1}" y1="{from:.1}" x2="{mid:.1}" y2="{y:.1}" stroke="black"/>"#).unwrap();
    }
    for (i, b) in tree.branches.iter().enumerate() {
        let base = tree
            .bars
            .iter()
            .filter(|bar| bar.children.iter().any(|(_, c)| *c == TreeNode::Leaf(i)))
            .map(|bar| sy(to_f64(&bar.height)))
            .next()
            .unwrap_or(H - PAD);
        writeln!(s, r#"<line x1="{0:.1}" y1="{base:.1}" x2="{0:.1}" y2="{PAD}" stroke="gray"/>"#, xs[i]).unwrap();
        writeln!(s, r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="middle">{}</text>"#, xs[i], PAD - 8.0, b.multiplicity).unwrap();
    }
    for (bi, _) in tree.bars.iter().enumerate() {
        let marks: Vec<&CriticalPoint> = crit.iter().filter(|c| c.bar == Some(bi)).collect();
        let (lo, hi) = span[bi];
        let y = sy(to_f64(&tree.bars[bi].height));
        for (j, _) in marks.iter().enumerate() {
            let x = lo + (hi - lo) * (j as f64 + 1.0) / (marks.len() as f64 + 1.0);
            writeln!(s, r#"<circle cx="{x:.1}" cy="{y:.1}" r="4" fill="white" stroke="crimson" stroke-width="2"/>"#).unwrap();
        }
    }
    s.push_str("</svg>\n");
    s
}

fn leaves(tree: &KuoLuTree, n: TreeNode, out: &mut Vec<usize>) {
    match n {
        TreeNode::Leaf(k) => out.push(k),
        TreeNode::Bar(b) => {
            for (_, c) in &tree.bars[b].children {
                leaves(tree, *c, out);
            }
        }
    }
}
