//! Kuo-Lu tree of the roots, truncated coordinates and valuations.

use serde::Serialize;

use crate::algebra::rat::{serde_rat, Rat};
use crate::algebra::{Coeff, Poly};
use crate::error::{Error, Result};
use crate::polygon::{polygon_of, XiPolynomial};
use crate::series::{contact_order_series, PuiseuxSeries};

use super::RootBranch;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TreeNode {
    Bar(usize),
    /// Index into the branch list.
    Leaf(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct Bar {
    #[serde(with = "serde_rat")]
    pub height: Rat,
    /// Terms common to every supported root, all of exponent `< height`.
    pub stem: PuiseuxSeries,
    /// `P_B(z)`: the edge polynomial of co-slope `height` at the stem.
    pub assoc: Poly<Coeff>,
    /// Value height `L(B)` shared by the critical points on the bar.
    #[serde(with = "serde_rat")]
    pub lojasiewicz: Rat,
    pub parent: Option<usize>,
    /// Children keyed by their coefficient at `y^height`.
    pub children: Vec<(Coeff, TreeNode)>,
    /// Supported branches.
    pub roots: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KuoLuTree {
    pub branches: Vec<RootBranch>,
    pub bars: Vec<Bar>,
    pub top: TreeNode,
}

impl KuoLuTree {
    pub fn heights(&self) -> Vec<Rat> {
        let mut h: Vec<Rat> = self.bars.iter().map(|b| b.height.clone()).collect();
        h.sort();
        h
    }

    /// Bars on the path from the top down to the given branch.
    pub fn path_to(&self, leaf: usize) -> Vec<usize> {
        self.bars
            .iter()
            .enumerate()
            .filter(|(_, b)| b.roots.contains(&leaf))
            .map(|(i, _)| i)
            .collect()
    }
}

fn min_contact(branches: &[RootBranch], group: &[usize]) -> Result<Rat> {
    let mut best: Option<Rat> = None;
    for (a, &i) in group.iter().enumerate() {
        for &j in &group[a + 1..] {
            let o = contact_order_series(&branches[i].series, &branches[j].series)?
                .ok_or_else(|| Error::Internal("two identical branches".into()))?;
            best = Some(best.map_or(o.clone(), |b: Rat| b.min(o)));
        }
    }
    best.ok_or_else(|| Error::Internal("bar with fewer than two roots".into()))
}

struct Builder<'a> {
    phi: &'a XiPolynomial,
    branches: &'a [RootBranch],
    bars: Vec<Bar>,
}

impl Builder<'_> {
    fn group(&mut self, members: Vec<usize>, parent: Option<usize>) -> Result<TreeNode> {
        if members.len() == 1 {
            return Ok(TreeNode::Leaf(members[0]));
        }
        let h = min_contact(self.branches, &members)?;
        let stem = self.branches[members[0]].series.head_below(&h);
        let edge = polygon_of(&self.phi.recenter(&stem))?.edge_at_coslope(&h)?;
        let lojasiewicz = edge.lojasiewicz().expect("sloped edge");
        let mut parts: Vec<(Coeff, Vec<usize>)> = Vec::new();
        for &i in &members {
            let c = self.branches[i].series.coeff(&h);
            match parts.iter_mut().find(|(d, _)| d.approx_eq(&c)) {
                Some((_, v)) => v.push(i),
                None => parts.push((c, vec![i])),
            }
        }
        parts.sort_by(|a, b| a.0.sort_cmp(&b.0));
        let mult: u32 = members.iter().map(|&i| self.branches[i].multiplicity).sum();
        if edge.assoc.deg() as u32 != mult {
            return Err(Error::Internal(format!(
                "bar at height {h} carries {mult} roots but P_B has degree {}",
                edge.assoc.deg()
            )));
        }
        let id = self.bars.len();
        self.bars.push(Bar {
            height: h,
            stem,
            assoc: edge.assoc,
            lojasiewicz,
            parent,
            children: Vec::new(),
            roots: members,
        });
        let mut children = Vec::new();
        for (c, part) in parts {
            children.push((c, self.group(part, Some(id))?));
        }
        self.bars[id].children = children;
        Ok(TreeNode::Bar(id))
    }
}

/// Group the roots by contact order into bars.
pub fn build_tree(phi: &XiPolynomial, branches: Vec<RootBranch>) -> Result<KuoLuTree> {
    if branches.is_empty() {
        return Err(Error::InvalidInput("no roots".into()));
    }
    let mut b = Builder { phi, branches: &branches, bars: Vec::new() };
    let top = b.group((0..branches.len()).collect(), None)?;
    let bars = b.bars;
    Ok(KuoLuTree { branches, bars, top })
}

/// Canonical coordinate of `μ` on the tree: drop every term beyond the
/// largest contact order of `μ` with a root.
pub fn truncate_at(mu: &PuiseuxSeries, branches: &[RootBranch]) -> Result<PuiseuxSeries> {
    let mut best: Option<Rat> = None;
    for b in branches {
        match contact_order_series(mu, &b.series)? {
            None => return Ok(mu.clone()),
            Some(o) => best = Some(best.map_or(o.clone(), |x: Rat| x.max(o))),
        }
    }
    let h = best.ok_or_else(|| Error::InvalidInput("no roots".into()))?;
    Ok(mu.head_upto(&h))
}

/// `val_φ(μ)`: leading coefficient and order of `φ(μ(y), y)`; both `None`
/// for the zero value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValuePair {
    pub coeff: Option<Coeff>,
    #[serde(with = "serde_rat::opt")]
    pub height: Option<Rat>,
}

impl ValuePair {
    pub fn zero() -> Self {
        ValuePair { coeff: None, height: None }
    }

    pub fn is_zero(&self) -> bool {
        self.height.is_none()
    }

    pub fn approx_eq(&self, o: &ValuePair) -> bool {
        self.height == o.height
            && match (&self.coeff, &o.coeff) {
                (Some(a), Some(b)) => a.approx_eq(b),
                (None, None) => true,
                _ => false,
            }
    }
}

impl std::fmt::Display for ValuePair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (&self.coeff, &self.height) {
            (Some(c), Some(h)) => write!(f, "({c}, {})", crate::algebra::rat::fmt_rat(h)),
            _ => write!(f, "0_V"),
        }
    }
}

pub fn valuation(phi: &XiPolynomial, mu: &PuiseuxSeries) -> Result<ValuePair> {
    let v = phi.evaluate(mu);
    match v.certified_order()? {
        None => Ok(ValuePair::zero()),
        Some(e) => Ok(ValuePair { coeff: Some(v.coeff(&e)), height: Some(e) }),
    }
}
