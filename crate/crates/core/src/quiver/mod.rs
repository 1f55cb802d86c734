//! Colored quivers given intensionally as expression trees.
//!
//! A [`QuiverExpr`] denotes a possibly infinite colored quiver built from
//! one-loop quivers, explicit finite quivers, the tilde construction (an
//! `N`-indexed tower of copies joined by fresh cross colors) and disjoint
//! unions. Adjacency is computed directly from the expression, so every path
//! query is exact; [`MaterializedQuiver`] gives a finite level-bounded window
//! for enumeration, linear algebra and rendering.

mod dot;
mod json;
mod materialize;
mod paths;

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::addr::{validate_id, VertexAddr};
use crate::error::{Error, Result};
use crate::series::{ColorId, ColorKind};

pub use dot::to_dot;
pub use materialize::{materialize, window_size, MaterializedQuiver};
pub use paths::{is_admissible, p_v, paths_from, paths_to, AdmissibilityReport, Arrow, Path};

/// Name of the single vertex of a one-loop quiver.
pub const LOOP_VERTEX: &str = "v";
/// Symbol of the loop color of a one-loop quiver.
pub const LOOP_COLOR: &str = "c";

/// An explicit finite colored quiver. Its colors are `symbol@site`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteQuiver {
    pub site: String,
    pub vertices: Vec<String>,
    /// `(source, target, color symbol)`
    pub arrows: Vec<(String, String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QuiverExpr {
    /// One vertex with one loop colored `c@site`.
    Loop { site: String },
    Finite(FiniteQuiver),
    /// Levels `0, 1, 2, ...` of copies of `inner`, with an arrow colored
    /// `c[v|w]@site` from `(i, v)` to `(i + 1, w)` for all inner vertices `v`, `w`.
    Tilde { inner: Arc<QuiverExpr>, site: String },
    /// Disjoint union on vertices; colors are shared.
    Sum(Vec<(String, Arc<QuiverExpr>)>),
}

impl QuiverExpr {
    pub fn looped(site: impl Into<String>) -> Result<Arc<QuiverExpr>> {
        QuiverExpr::Loop { site: site.into() }.checked()
    }

    pub fn finite<V, A>(site: impl Into<String>, vertices: V, arrows: A) -> Result<Arc<QuiverExpr>>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        A: IntoIterator<Item = (String, String, String)>,
    {
        QuiverExpr::Finite(FiniteQuiver {
            site: site.into(),
            vertices: vertices.into_iter().map(Into::into).collect(),
            arrows: arrows.into_iter().collect(),
        })
        .checked()
    }

    pub fn tilde(inner: Arc<QuiverExpr>, site: impl Into<String>) -> Result<Arc<QuiverExpr>> {
        QuiverExpr::Tilde { inner, site: site.into() }.checked()
    }

    pub fn sum<I, S>(parts: I) -> Result<Arc<QuiverExpr>>
    where
        I: IntoIterator<Item = (S, Arc<QuiverExpr>)>,
        S: Into<String>,
    {
        QuiverExpr::Sum(parts.into_iter().map(|(t, e)| (t.into(), e)).collect()).checked()
    }

    fn checked(self) -> Result<Arc<QuiverExpr>> {
        self.validate()?;
        Ok(Arc::new(self))
    }

    /// Checks identifiers, tag uniqueness, finite-quiver arrows, and that a
    /// site names a single subexpression wherever it occurs.
    pub fn validate(&self) -> Result<()> {
        let mut sites: HashMap<&str, &QuiverExpr> = HashMap::new();
        self.validate_into(&mut sites)
    }

    fn validate_into<'a>(&'a self, sites: &mut HashMap<&'a str, &'a QuiverExpr>) -> Result<()> {
        if let Some(site) = self.site() {
            validate_id(site)?;
            match sites.get(site) {
                Some(prev) if std::ptr::eq(*prev, self) => return Ok(()),
                Some(prev) if **prev == *self => return Ok(()),
                Some(_) => {
                    return Err(Error::InvalidExpr(format!("site `{site}` is used by two different subexpressions")))
                }
                None => {
                    sites.insert(site, self);
                }
            }
        }
        match self {
            QuiverExpr::Loop { .. } => Ok(()),
            QuiverExpr::Finite(fq) => {
                let mut seen = BTreeSet::new();
                for v in &fq.vertices {
                    validate_id(v)?;
                    if !seen.insert(v.as_str()) {
                        return Err(Error::InvalidExpr(format!("duplicate vertex `{v}`")));
                    }
                }
                for (s, t, c) in &fq.arrows {
                    validate_id(c)?;
                    for end in [s, t] {
                        if !seen.contains(end.as_str()) {
                            return Err(Error::InvalidExpr(format!("arrow endpoint `{end}` is not a vertex")));
                        }
                    }
                }
                Ok(())
            }
            QuiverExpr::Tilde { inner, .. } => inner.validate_into(sites),
            QuiverExpr::Sum(parts) => {
                let mut tags = BTreeSet::new();
                for (tag, part) in parts {
                    validate_id(tag)?;
                    if !tags.insert(tag.as_str()) {
                        return Err(Error::InvalidExpr(format!("duplicate tag `{tag}`")));
                    }
                    part.validate_into(sites)?;
                }
                Ok(())
            }
        }
    }

    pub fn site(&self) -> Option<&str> {
        match self {
            QuiverExpr::Loop { site } | QuiverExpr::Tilde { site, .. } => Some(site),
            QuiverExpr::Finite(fq) => Some(&fq.site),
            QuiverExpr::Sum(_) => None,
        }
    }

    /// `(inner, site)` when the top node is a tilde.
    pub fn as_tilde(&self) -> Option<(&Arc<QuiverExpr>, &str)> {
        match self {
            QuiverExpr::Tilde { inner, site } => Some((inner, site)),
            _ => None,
        }
    }

    pub fn part(&self, tag: &str) -> Option<&Arc<QuiverExpr>> {
        match self {
            QuiverExpr::Sum(parts) => parts.iter().find(|(t, _)| t == tag).map(|(_, e)| e),
            _ => None,
        }
    }

    pub fn loop_color(site: &str) -> ColorId {
        ColorId::named(site, LOOP_COLOR)
    }

    /// Whether `addr` names a vertex of the (infinite) quiver.
    pub fn contains(&self, addr: &VertexAddr) -> bool {
        match (self, addr) {
            (QuiverExpr::Loop { .. }, VertexAddr::Base(n)) => n == LOOP_VERTEX,
            (QuiverExpr::Finite(fq), VertexAddr::Base(n)) => fq.vertices.iter().any(|v| v == n),
            (QuiverExpr::Tilde { inner, .. }, VertexAddr::Level(_, a)) => inner.contains(a),
            (QuiverExpr::Sum(_), VertexAddr::Tagged(tag, a)) => self.part(tag).is_some_and(|p| p.contains(a)),
            _ => false,
        }
    }

    /// Whether `color` is a color of the quiver.
    pub fn has_color(&self, color: &ColorId) -> bool {
        match self {
            QuiverExpr::Loop { site } => *color == QuiverExpr::loop_color(site),
            QuiverExpr::Finite(fq) => {
                color.site == fq.site
                    && matches!(&color.kind, ColorKind::Named(sym) if fq.arrows.iter().any(|(_, _, c)| c == sym))
            }
            QuiverExpr::Tilde { inner, site } => {
                self.is_fresh_color(color) || (color.site != *site && inner.has_color(color))
            }
            QuiverExpr::Sum(parts) => parts.iter().any(|(_, p)| p.has_color(color)),
        }
    }

    /// For a tilde node: whether `color` is one of its cross colors `c[v|w]@site`.
    pub fn is_fresh_color(&self, color: &ColorId) -> bool {
        match (self, &color.kind) {
            (QuiverExpr::Tilde { inner, site }, ColorKind::Cross(v, w)) => {
                color.site == *site && inner.contains(v) && inner.contains(w)
            }
            _ => false,
        }
    }

    /// Targets of the arrows with source `addr` and color `color`, one entry per arrow.
    pub fn successors(&self, addr: &VertexAddr, color: &ColorId) -> Vec<VertexAddr> {
        match (self, addr) {
            (QuiverExpr::Loop { site }, VertexAddr::Base(n)) if n == LOOP_VERTEX => {
                if *color == QuiverExpr::loop_color(site) {
                    vec![addr.clone()]
                } else {
                    Vec::new()
                }
            }
            (QuiverExpr::Finite(fq), VertexAddr::Base(n)) => finite_step(fq, color, |(s, t, _)| (s == n).then_some(t)),
            (QuiverExpr::Tilde { inner, site }, VertexAddr::Level(i, x)) => {
                if color.site == *site {
                    match &color.kind {
                        ColorKind::Cross(v, w) if v == &**x && inner.contains(w) => {
                            vec![VertexAddr::level(i + 1, w.clone())]
                        }
                        _ => Vec::new(),
                    }
                } else {
                    inner.successors(x, color).into_iter().map(|t| VertexAddr::level(*i, t)).collect()
                }
            }
            (QuiverExpr::Sum(_), VertexAddr::Tagged(tag, x)) => match self.part(tag) {
                Some(p) => p.successors(x, color).into_iter().map(|t| VertexAddr::tagged(tag.clone(), t)).collect(),
                None => Vec::new(),
            },
            _ => Vec::new(),
        }
    }

    /// Sources of the arrows with target `addr` and color `color`, one entry per arrow.
    pub fn predecessors(&self, addr: &VertexAddr, color: &ColorId) -> Vec<VertexAddr> {
        match (self, addr) {
            (QuiverExpr::Loop { site }, VertexAddr::Base(n)) if n == LOOP_VERTEX => {
                if *color == QuiverExpr::loop_color(site) {
                    vec![addr.clone()]
                } else {
                    Vec::new()
                }
            }
            (QuiverExpr::Finite(fq), VertexAddr::Base(n)) => finite_step(fq, color, |(s, t, _)| (t == n).then_some(s)),
            (QuiverExpr::Tilde { inner, site }, VertexAddr::Level(i, x)) => {
                if color.site == *site {
                    match &color.kind {
                        ColorKind::Cross(v, w) if w == &**x && *i > 0 && inner.contains(v) => {
                            vec![VertexAddr::level(i - 1, v.clone())]
                        }
                        _ => Vec::new(),
                    }
                } else {
                    inner.predecessors(x, color).into_iter().map(|s| VertexAddr::level(*i, s)).collect()
                }
            }
            (QuiverExpr::Sum(_), VertexAddr::Tagged(tag, x)) => match self.part(tag) {
                Some(p) => p.predecessors(x, color).into_iter().map(|s| VertexAddr::tagged(tag.clone(), s)).collect(),
                None => Vec::new(),
            },
            _ => Vec::new(),
        }
    }

    /// Number of nodes when shared subexpressions are counted once per occurrence.
    pub fn tree_size(&self) -> usize {
        match self {
            QuiverExpr::Loop { .. } | QuiverExpr::Finite(_) => 1,
            QuiverExpr::Tilde { inner, .. } => 1 + inner.tree_size(),
            QuiverExpr::Sum(parts) => 1 + parts.iter().map(|(_, p)| p.tree_size()).sum::<usize>(),
        }
    }
}

fn finite_step(
    fq: &FiniteQuiver,
    color: &ColorId,
    pick: impl Fn(&(String, String, String)) -> Option<&String>,
) -> Vec<VertexAddr> {
    let ColorKind::Named(sym) = &color.kind else {
        return Vec::new();
    };
    if color.site != fq.site {
        return Vec::new();
    }
    fq.arrows
        .iter()
        .filter(|a| &a.2 == sym)
        .filter_map(pick)
        .map(|v| VertexAddr::base(v.clone()))
        .collect()
}

/// Quivers from the worked examples, handy in tests and demos.
pub mod examples {
    use super::*;

    /// One vertex with one loop (colors `{c@p}`).
    pub fn one_loop(site: &str) -> Arc<QuiverExpr> {
        QuiverExpr::looped(site).expect("valid site")
    }

    /// Tilde of a single vertex without arrows: a ray `(0,v) -> (1,v) -> ...`
    /// with the single color `c[v|v]@ray`.
    pub fn ray() -> Arc<QuiverExpr> {
        let point = QuiverExpr::finite("pt", ["v"], []).expect("valid point");
        QuiverExpr::tilde(point, "ray").expect("valid ray")
    }

    /// Tilde of the quiver `v --c--> w` (site `edge`, tilde site `sq`).
    pub fn tilde_edge() -> Arc<QuiverExpr> {
        let edge = QuiverExpr::finite("edge", ["v", "w"], [("v".into(), "w".into(), "c".into())]).expect("valid edge");
        QuiverExpr::tilde(edge, "sq").expect("valid tilde")
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    fn a(s: &str) -> VertexAddr {
        s.parse().unwrap()
    }

    #[test]
    fn membership_and_colors() {
        let sq = tilde_edge();
        assert!(sq.contains(&a("5.w")));
        assert!(!sq.contains(&a("5.x")));
        assert!(!sq.contains(&a("v")));
        assert!(sq.has_color(&ColorId::named("edge", "c")));
        assert!(sq.has_color(&ColorId::cross("sq", a("v"), a("w"))));
        assert!(!sq.has_color(&ColorId::cross("sq", a("v"), a("x"))));
        assert!(!sq.has_color(&ColorId::named("sq", "c")));
    }

    #[test]
    fn stepping_through_a_tilde() {
        let sq = tilde_edge();
        let c = ColorId::named("edge", "c");
        let cvw = ColorId::cross("sq", a("v"), a("w"));
        assert_eq!(sq.successors(&a("2.v"), &c), vec![a("2.w")]);
        assert_eq!(sq.successors(&a("2.v"), &cvw), vec![a("3.w")]);
        assert!(sq.successors(&a("2.w"), &cvw).is_empty());
        assert_eq!(sq.predecessors(&a("3.w"), &cvw), vec![a("2.v")]);
        assert!(sq.predecessors(&a("0.w"), &cvw).is_empty());
    }

    #[test]
    fn validation_rejects_conflicting_sites() {
        let l = one_loop("p");
        let other = QuiverExpr::finite("p", ["x"], []).unwrap();
        assert!(QuiverExpr::sum([("a", l.clone()), ("b", other)]).is_err());
        assert!(QuiverExpr::sum([("a", l.clone()), ("a", one_loop("q"))]).is_err());
        // the same subexpression may occur twice
        assert!(QuiverExpr::sum([("a", l.clone()), ("b", l)]).is_ok());
        assert!(QuiverExpr::looped("bad/site").is_err());
        assert!(QuiverExpr::finite("f", ["x"], [("x".into(), "y".into(), "c".into())]).is_err());
    }
}
