//! Radial tidy-tree layout of the hierarchy.
//!
//! Horizontal positions come from the linear-time Walker algorithm as
//! improved by Buchheim, Jünger and Leipert (unit separation between
//! neighbours). Depth becomes the radius and the tidy x coordinate the angle.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::model::{CodeGraph, NodeId};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayoutPoint {
    pub id: NodeId,
    pub path: String,
    pub depth: usize,
    pub angle: f64,
    pub x: f64,
    pub y: f64,
}

const SEPARATION: f64 = 1.0;

struct Walker<'g> {
    g: &'g CodeGraph,
    prelim: Vec<f64>,
    modifier: Vec<f64>,
    shift: Vec<f64>,
    change: Vec<f64>,
    thread: Vec<Option<usize>>,
    ancestor: Vec<usize>,
    /// Position among siblings.
    number: Vec<usize>,
}

impl<'g> Walker<'g> {
    fn new(g: &'g CodeGraph) -> Self {
        let n = g.node_count();
        let mut number = vec![0; n];
        for node in g.nodes() {
            for (i, c) in g.children(node.id).iter().enumerate() {
                number[c.index()] = i;
            }
        }
        Walker {
            g,
            prelim: vec![0.0; n],
            modifier: vec![0.0; n],
            shift: vec![0.0; n],
            change: vec![0.0; n],
            thread: vec![None; n],
            ancestor: (0..n).collect(),
            number,
        }
    }

    fn children(&self, v: usize) -> &'g [NodeId] {
        self.g.children(NodeId(v as u32))
    }

    fn parent(&self, v: usize) -> Option<usize> {
        self.g.parent(NodeId(v as u32)).map(NodeId::index)
    }

    fn sibling(&self, v: usize, offset: isize) -> Option<usize> {
        let p = self.parent(v)?;
        let i = self.number[v] as isize + offset;
        (i >= 0)
            .then(|| self.children(p).get(i as usize).map(|c| c.index()))
            .flatten()
    }

    fn left_sibling(&self, v: usize) -> Option<usize> {
        self.sibling(v, -1)
    }

    fn leftmost_sibling(&self, v: usize) -> usize {
        self.parent(v).map_or(v, |p| self.children(p)[0].index())
    }

    fn next_left(&self, v: usize) -> Option<usize> {
        self.children(v).first().map(|c| c.index()).or(self.thread[v])
    }

    fn next_right(&self, v: usize) -> Option<usize> {
        self.children(v).last().map(|c| c.index()).or(self.thread[v])
    }

    fn finish(&mut self, v: usize) {
        let kids = self.children(v);
        let left = self.left_sibling(v);
        if kids.is_empty() {
            self.prelim[v] = left.map_or(0.0, |w| self.prelim[w] + SEPARATION);
            return;
        }
        self.execute_shifts(v);
        let mid = (self.prelim[kids[0].index()] + self.prelim[kids[kids.len() - 1].index()]) / 2.0;
        match left {
            Some(w) => {
                self.prelim[v] = self.prelim[w] + SEPARATION;
                self.modifier[v] = self.prelim[v] - mid;
            }
            None => self.prelim[v] = mid,
        }
    }

    fn execute_shifts(&mut self, v: usize) {
        let (mut shift, mut change) = (0.0, 0.0);
        for w in self.children(v).iter().rev().map(|c| c.index()) {
            self.prelim[w] += shift;
            self.modifier[w] += shift;
            change += self.change[w];
            shift += self.shift[w] + change;
        }
    }

    fn move_subtree(&mut self, wl: usize, wr: usize, shift: f64) {
        let subtrees = (self.number[wr] - self.number[wl]) as f64;
        self.change[wr] -= shift / subtrees;
        self.shift[wr] += shift;
        self.change[wl] += shift / subtrees;
        self.prelim[wr] += shift;
        self.modifier[wr] += shift;
    }

    fn apportion(&mut self, v: usize, default_ancestor: usize) -> usize {
        let Some(w) = self.left_sibling(v) else {
            return default_ancestor;
        };
        let mut default_ancestor = default_ancestor;
        let (mut vir, mut vor, mut vil, mut vol) = (v, v, w, self.leftmost_sibling(v));
        let (mut sir, mut sor, mut sil, mut sol) = (
            self.modifier[vir],
            self.modifier[vor],
            self.modifier[vil],
            self.modifier[vol],
        );
        loop {
            let (Some(nil), Some(nir)) = (self.next_right(vil), self.next_left(vir)) else {
                break;
            };
            vil = nil;
            vir = nir;
            vol = self.next_left(vol).expect("outer left contour is at least as deep");
            vor = self.next_right(vor).expect("outer right contour is at least as deep");
            self.ancestor[vor] = v;
            let shift = (self.prelim[vil] + sil) - (self.prelim[vir] + sir) + SEPARATION;
            if shift > 0.0 {
                let a = self.ancestor[vil];
                let wl = if self.parent(a) == self.parent(v) {
                    a
                } else {
                    default_ancestor
                };
                self.move_subtree(wl, v, shift);
                sir += shift;
                sor += shift;
            }
            sil += self.modifier[vil];
            sir += self.modifier[vir];
            sol += self.modifier[vol];
            sor += self.modifier[vor];
        }
        if let (Some(t), None) = (self.next_right(vil), self.next_right(vor)) {
            self.thread[vor] = Some(t);
            self.modifier[vor] += sil - sor;
        } else {
            if let (Some(t), None) = (self.next_left(vir), self.next_left(vol)) {
                self.thread[vol] = Some(t);
                self.modifier[vol] += sir - sol;
            }
            default_ancestor = v;
        }
        default_ancestor
    }

    /// Post-order first walk with an explicit stack; each child is
    /// apportioned as soon as its subtree is done, before the next sibling.
    fn first_walk(&mut self, root: usize) {
        struct Frame {
            v: usize,
            next: usize,
            default_ancestor: usize,
        }
        let mut stack = vec![Frame {
            v: root,
            next: 0,
            default_ancestor: self.children(root).first().map_or(root, |c| c.index()),
        }];
        while let Some(top) = stack.last_mut() {
            let kids = self.g.children(NodeId(top.v as u32));
            if top.next < kids.len() {
                let c = kids[top.next].index();
                top.next += 1;
                stack.push(Frame {
                    v: c,
                    next: 0,
                    default_ancestor: self.children(c).first().map_or(c, |k| k.index()),
                });
                continue;
            }
            let done = stack.pop().expect("nonempty").v;
            self.finish(done);
            if let Some(parent) = stack.last_mut() {
                let da = parent.default_ancestor;
                let updated = self.apportion(done, da);
                stack.last_mut().expect("nonempty").default_ancestor = updated;
            }
        }
    }

    fn second_walk(&self, root: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.prelim.len()];
        let mut stack = vec![(root, 0.0)];
        while let Some((v, m)) = stack.pop() {
            x[v] = self.prelim[v] + m;
            for c in self.children(v) {
                stack.push((c.index(), m + self.modifier[v]));
            }
        }
        x
    }
}

/// Polar tidy-tree coordinates for every vertex, in id order. The root sits
/// at the origin and vertices at depth d lie on the circle of radius d.
pub fn layout_tree(g: &CodeGraph) -> Vec<LayoutPoint> {
    let root = g.root_id().index();
    let mut walker = Walker::new(g);
    walker.first_walk(root);
    let tidy = walker.second_walk(root);
    let lo = tidy.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = tidy.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo + SEPARATION;
    let mut depth = vec![0usize; g.node_count()];
    for id in g.preorder() {
        if let Some(p) = g.parent(id) {
            depth[id.index()] = depth[p.index()] + 1;
        }
    }
    g.nodes()
        .iter()
        .map(|n| {
            let i = n.id.index();
            let angle = TAU * (tidy[i] - lo) / span;
            let r = depth[i] as f64;
            let (x, y) = if r == 0.0 {
                (0.0, 0.0)
            } else {
                (r * angle.cos(), r * angle.sin())
            };
            LayoutPoint {
                id: n.id,
                path: n.path.to_string(),
                depth: depth[i],
                angle,
                x,
                y,
            }
        })
        .collect()
}
