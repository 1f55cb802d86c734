use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde_json::{json, Value};

use super::{Arrow, QuiverExpr, LOOP_VERTEX};
use crate::addr::VertexAddr;
use crate::error::{Error, Result};
use crate::series::ColorId;

/// The finite window of a quiver expression in which every level
/// coordinate is at most `budget`.
///
/// Arrows are all arrows of the infinite quiver between window vertices.
/// No arrow enters the window from outside along a window color, so the
/// window is a faithful truncation for forward computations.
#[derive(Clone, Debug)]
pub struct MaterializedQuiver {
    expr: Arc<QuiverExpr>,
    budget: u32,
    vertices: Vec<VertexAddr>,
    index: HashMap<VertexAddr, usize>,
    colors: Vec<ColorId>,
    /// `(source, target, color)` as indices, sorted.
    arrows: Vec<(usize, usize, usize)>,
    /// Per source vertex: `(color, target)` of its outgoing arrows.
    out: Vec<Vec<(usize, usize)>>,
}

type RawArrow = (VertexAddr, VertexAddr, ColorId);

fn window(expr: &QuiverExpr, n: u32) -> (Vec<VertexAddr>, Vec<RawArrow>) {
    match expr {
        QuiverExpr::Loop { site } => {
            let v = VertexAddr::base(LOOP_VERTEX);
            (vec![v.clone()], vec![(v.clone(), v, QuiverExpr::loop_color(site))])
        }
        QuiverExpr::Finite(fq) => (
            fq.vertices.iter().map(VertexAddr::base).collect(),
            fq.arrows
                .iter()
                .map(|(s, t, c)| (VertexAddr::base(s), VertexAddr::base(t), ColorId::named(&fq.site, c)))
                .collect(),
        ),
        QuiverExpr::Tilde { inner, site } => {
            let (iv, ia) = window(inner, n);
            let mut vertices = Vec::with_capacity(iv.len() * (n as usize + 1));
            let mut arrows = Vec::new();
            for i in 0..=n {
                vertices.extend(iv.iter().map(|x| VertexAddr::level(i, x.clone())));
                arrows.extend(
                    ia.iter()
                        .map(|(s, t, c)| (VertexAddr::level(i, s.clone()), VertexAddr::level(i, t.clone()), c.clone())),
                );
            }
            for i in 0..n {
                for v in &iv {
                    for w in &iv {
                        arrows.push((
                            VertexAddr::level(i, v.clone()),
                            VertexAddr::level(i + 1, w.clone()),
                            ColorId::cross(site.clone(), v.clone(), w.clone()),
                        ));
                    }
                }
            }
            (vertices, arrows)
        }
        QuiverExpr::Sum(parts) => {
            let mut vertices = Vec::new();
            let mut arrows = Vec::new();
            for (tag, part) in parts {
                let (pv, pa) = window(part, n);
                vertices.extend(pv.into_iter().map(|x| VertexAddr::tagged(tag.clone(), x)));
                arrows.extend(
                    pa.into_iter()
                        .map(|(s, t, c)| (VertexAddr::tagged(tag.clone(), s), VertexAddr::tagged(tag.clone(), t), c)),
                );
            }
            (vertices, arrows)
        }
    }
}

/// Number of window vertices at budget `n`, without building the window.
pub fn window_size(expr: &QuiverExpr, n: u32) -> usize {
    match expr {
        QuiverExpr::Loop { .. } => 1,
        QuiverExpr::Finite(fq) => fq.vertices.len(),
        QuiverExpr::Tilde { inner, .. } => (n as usize + 1).saturating_mul(window_size(inner, n)),
        QuiverExpr::Sum(parts) => parts.iter().map(|(_, p)| window_size(p, n)).fold(0, usize::saturating_add),
    }
}

/// Builds the window of `expr` with every level coordinate at most `budget`.
pub fn materialize(expr: &Arc<QuiverExpr>, budget: u32) -> MaterializedQuiver {
    let (mut vertices, raw) = window(expr, budget);
    vertices.sort();
    let index: HashMap<VertexAddr, usize> = vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let colors: Vec<ColorId> = raw.iter().map(|a| a.2.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let color_ix: HashMap<&ColorId, usize> = colors.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut arrows: Vec<(usize, usize, usize)> =
        raw.iter().map(|(s, t, c)| (index[s], index[t], color_ix[c])).collect();
    arrows.sort_unstable();
    let mut out = vec![Vec::new(); vertices.len()];
    for &(s, t, c) in &arrows {
        out[s].push((c, t));
    }
    MaterializedQuiver { expr: expr.clone(), budget, vertices, index, colors, arrows, out }
}

impl MaterializedQuiver {
    pub fn expr(&self) -> &Arc<QuiverExpr> {
        &self.expr
    }

    pub fn budget(&self) -> u32 {
        self.budget
    }

    /// Window vertices in canonical order.
    pub fn vertices(&self) -> &[VertexAddr] {
        &self.vertices
    }

    /// Colors carried by window arrows, sorted.
    pub fn colors(&self) -> &[ColorId] {
        &self.colors
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_index(&self, v: &VertexAddr) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &VertexAddr) -> bool {
        self.index.contains_key(v)
    }

    pub(crate) fn require(&self, v: &VertexAddr) -> Result<usize> {
        self.vertex_index(v).ok_or_else(|| {
            if self.expr.contains(v) {
                Error::Budget { needed: v.max_level(), budget: self.budget }
            } else {
                Error::OutsideWindow(v.to_string())
            }
        })
    }

    /// Outgoing `(color index, target index)` pairs of a window vertex.
    pub(crate) fn out_arrows(&self, v: usize) -> &[(usize, usize)] {
        &self.out[v]
    }

    pub fn arrows(&self) -> impl Iterator<Item = Arrow> + '_ {
        self.arrows.iter().map(|&(s, t, c)| Arrow {
            src: self.vertices[s].clone(),
            tgt: self.vertices[t].clone(),
            color: self.colors[c].clone(),
        })
    }

    /// Arrows carrying a fresh color of the top tilde node.
    pub fn cross_arrow_count(&self) -> usize {
        self.arrows.iter().filter(|&&(_, _, c)| self.expr.is_fresh_color(&self.colors[c])).count()
    }

    /// The same expression restricted to a smaller budget.
    pub fn shrink(&self, budget: u32) -> MaterializedQuiver {
        materialize(&self.expr, budget.min(self.budget))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "budget": self.budget,
            "vertices": self.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "colors": self.colors.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "arrows": self.arrows.iter().map(|&(s, t, c)| json!([
                self.vertices[s].to_string(), self.vertices[t].to_string(), self.colors[c].to_string()
            ])).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::examples::*;
    use super::*;

    #[test]
    fn one_loop_window() {
        for n in [0, 3] {
            let q = materialize(&one_loop("p"), n);
            assert_eq!((q.vertex_count(), q.arrow_count(), q.colors().len()), (1, 1, 1));
        }
    }

    #[test]
    fn ray_window() {
        let q = materialize(&ray(), 2);
        let names: Vec<String> = q.vertices().iter().map(|v| v.to_string()).collect();
        assert_eq!(names, ["0.v", "1.v", "2.v"]);
        assert_eq!(q.arrow_count(), 2);
        assert_eq!(q.colors(), [ColorId::cross("ray", VertexAddr::base("v"), VertexAddr::base("v"))]);
    }

    #[test]
    fn tilde_edge_window() {
        let q = materialize(&tilde_edge(), 1);
        assert_eq!(q.vertex_count(), 4);
        assert_eq!(q.arrow_count() - q.cross_arrow_count(), 2);
        assert_eq!(q.cross_arrow_count(), 4);
        assert_eq!(q.colors().len(), 5);
    }

    #[test]
    fn tilde_counts_follow_the_formula() {
        // (N+1) V vertices, (N+1) A in-level arrows, N V^2 cross arrows
        let base = QuiverExpr::finite(
            "b",
            ["x", "y", "z"],
            [("x".into(), "y".into(), "a".into()), ("y".into(), "z".into(), "a".into()), ("z".into(), "z".into(), "b".into())],
        )
        .unwrap();
        let t = QuiverExpr::tilde(base, "t").unwrap();
        for n in 0..5u32 {
            let q = materialize(&t, n);
            let n = n as usize;
            assert_eq!(q.vertex_count(), (n + 1) * 3);
            assert_eq!(q.arrow_count() - q.cross_arrow_count(), (n + 1) * 3);
            assert_eq!(q.cross_arrow_count(), n * 9);
            assert_eq!(window_size(&t, n as u32), q.vertex_count());
        }
    }

    #[test]
    fn windows_are_monotone() {
        let nested = QuiverExpr::tilde(
            QuiverExpr::sum([("q", QuiverExpr::tilde(QuiverExpr::sum([("r", one_loop("r"))]).unwrap(), "q").unwrap()), ("r", one_loop("r"))]).unwrap(),
            "p",
        )
        .unwrap();
        for n in 0..4 {
            let small = materialize(&nested, n);
            let big = materialize(&nested, n + 1);
            assert!(small.vertices().iter().all(|v| big.contains(v)));
            let big_arrows: BTreeSet<(String, String, String)> =
                big.arrows().map(|a| (a.src.to_string(), a.tgt.to_string(), a.color.to_string())).collect();
            // induced: arrows of the small window are exactly the big window's arrows among small vertices
            let induced: BTreeSet<_> = big
                .arrows()
                .filter(|a| small.contains(&a.src) && small.contains(&a.tgt))
                .map(|a| (a.src.to_string(), a.tgt.to_string(), a.color.to_string()))
                .collect();
            let small_arrows: BTreeSet<_> =
                small.arrows().map(|a| (a.src.to_string(), a.tgt.to_string(), a.color.to_string())).collect();
            assert_eq!(small_arrows, induced);
            assert!(small_arrows.is_subset(&big_arrows));
        }
    }

    #[test]
    fn cross_arrows_raise_one_level() {
        let q = materialize(&tilde_edge(), 3);
        for a in q.arrows() {
            let (s, t) = (a.src.top_level().unwrap(), a.tgt.top_level().unwrap());
            if a.color.is_cross() {
                assert_eq!(t, s + 1);
            } else {
                assert_eq!(t, s);
            }
        }
    }
}
