use std::collections::{BTreeMap, BTreeSet};

use super::MaterializedQuiver;
use crate::addr::VertexAddr;
use crate::error::{Error, Result};
use crate::series::{ColorId, Series, Word};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub src: VertexAddr,
    pub tgt: VertexAddr,
    pub color: ColorId,
}

/// A path: either the trivial path `e_v` or a nonempty composable arrow sequence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Path {
    Trivial(VertexAddr),
    Arrows(Vec<Arrow>),
}

impl Path {
    pub fn source(&self) -> &VertexAddr {
        match self {
            Path::Trivial(v) => v,
            Path::Arrows(a) => &a[0].src,
        }
    }

    pub fn target(&self) -> &VertexAddr {
        match self {
            Path::Trivial(v) => v,
            Path::Arrows(a) => &a[a.len() - 1].tgt,
        }
    }

    /// The word of colors read along the path.
    pub fn word(&self) -> Word {
        match self {
            Path::Trivial(_) => Word::empty(),
            Path::Arrows(a) => Word::new(a.iter().map(|r| r.color.clone()).collect()),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Path::Trivial(_) => 0,
            Path::Arrows(a) => a.len(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, Path::Trivial(_))
    }

    /// Splits `self` into its first `k` arrows and the rest.
    pub fn split_at(&self, k: usize) -> (Path, Path) {
        match self {
            Path::Trivial(v) => (Path::Trivial(v.clone()), Path::Trivial(v.clone())),
            Path::Arrows(a) => {
                let head = if k == 0 { Path::Trivial(a[0].src.clone()) } else { Path::Arrows(a[..k].to_vec()) };
                let tail = if k == a.len() { Path::Trivial(a[a.len() - 1].tgt.clone()) } else { Path::Arrows(a[k..].to_vec()) };
                (head, tail)
            }
        }
    }
}

/// All paths ending at `v` whose color word is `w`.
///
/// Walking backwards never raises a level coordinate, so the answer is
/// exact for every `v` inside the window.
pub fn paths_to(q: &MaterializedQuiver, v: &VertexAddr, w: &Word) -> Result<Vec<Path>> {
    q.require(v)?;
    if w.is_empty() {
        return Ok(vec![Path::Trivial(v.clone())]);
    }
    let expr = q.expr();
    // partial paths stored reversed
    let mut partial: Vec<(VertexAddr, Vec<Arrow>)> = vec![(v.clone(), Vec::new())];
    for color in w.colors().iter().rev() {
        let mut next = Vec::new();
        for (at, arrows) in partial {
            for src in expr.predecessors(&at, color) {
                let mut a = arrows.clone();
                a.push(Arrow { src: src.clone(), tgt: at.clone(), color: color.clone() });
                next.push((src, a));
            }
        }
        partial = next;
    }
    Ok(partial
        .into_iter()
        .map(|(_, mut a)| {
            a.reverse();
            Path::Arrows(a)
        })
        .collect())
}

/// All paths starting at `v` whose color word is `w`. Every vertex they
/// visit must lie in the window; otherwise a budget error names the level needed.
pub fn paths_from(q: &MaterializedQuiver, v: &VertexAddr, w: &Word) -> Result<Vec<Path>> {
    q.require(v)?;
    if w.is_empty() {
        return Ok(vec![Path::Trivial(v.clone())]);
    }
    let expr = q.expr();
    let mut partial: Vec<(VertexAddr, Vec<Arrow>)> = vec![(v.clone(), Vec::new())];
    let mut needed = 0;
    for color in w.colors() {
        let mut next = Vec::new();
        for (at, arrows) in partial {
            for tgt in expr.successors(&at, color) {
                needed = needed.max(tgt.max_level());
                let mut a = arrows.clone();
                a.push(Arrow { src: at.clone(), tgt: tgt.clone(), color: color.clone() });
                next.push((tgt, a));
            }
        }
        partial = next;
    }
    if needed > q.budget() {
        return Err(Error::Budget { needed, budget: q.budget() });
    }
    Ok(partial.into_iter().map(|(_, a)| Path::Arrows(a)).collect())
}

/// `P_v(B)`: paths into `v` whose color word lies in `words`.
pub fn p_v(q: &MaterializedQuiver, v: &VertexAddr, words: &BTreeSet<Word>) -> Result<BTreeSet<Path>> {
    let mut out = BTreeSet::new();
    for w in words {
        out.extend(paths_to(q, v, w)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    /// True when the series is only known up to a bound; the verdict then
    /// covers the known coefficients only.
    pub window_relative: bool,
    /// `|P_v(supp f)|` for every window vertex.
    pub counts: BTreeMap<VertexAddr, usize>,
}

/// Admissibility of `f`: every `P_v(supp f)` must be finite.
///
/// Expression quivers have finitely many arrows of a given color into any
/// vertex, so a finitely supported series is always admissible; the counts
/// are reported for every window vertex.
pub fn is_admissible(q: &MaterializedQuiver, f: &Series) -> Result<AdmissibilityReport> {
    let support = f.support();
    let mut counts = BTreeMap::new();
    for v in q.vertices() {
        let n = support.iter().map(|w| paths_to(q, v, w).map(|p| p.len())).sum::<Result<usize>>()?;
        counts.insert(v.clone(), n);
    }
    Ok(AdmissibilityReport { admissible: true, window_relative: !f.is_exact(), counts })
}
