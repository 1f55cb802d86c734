//! Seeded random generators for module elements, series and posets.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::modact::ModuleElem;
use crate::poset::Poset;
use crate::quiver::MaterializedQuiver;
use crate::rational::{ratio, Rational};
use crate::series::{Series, Word};

/// A nonzero rational with numerator in `±1..=4` and denominator in `1..=3`.
pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    let n = rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 };
    ratio(n, rng.gen_range(1..=3))
}

/// Window vertices with top level in `lo..=top_hi` and every level coordinate at most `hi`.
fn vertices_in_levels(q: &MaterializedQuiver, lo: u32, top_hi: u32, hi: u32) -> Vec<usize> {
    (0..q.vertex_count())
        .filter(|&i| {
            let v = &q.vertices()[i];
            v.max_level() <= hi && v.top_level().is_none_or(|l| lo <= l && l <= top_hi)
        })
        .collect()
}

/// A random element with top level at least `lo`, every level coordinate
/// (nested ones included) at most `hi`, and a nonzero coefficient on at
/// least one vertex of top level `lo`. The support has at most `terms`
/// distinct vertices. Vertices without a level (non-tilde
/// hosts) are always eligible.
pub fn elem_with_min_level<R: Rng>(rng: &mut R, q: &MaterializedQuiver, lo: u32, hi: u32, terms: usize) -> ModuleElem {
    let pool = vertices_in_levels(q, lo, hi, hi);
    let bottom = vertices_in_levels(q, lo, lo, hi);
    let first = *bottom.choose(rng).unwrap_or_else(|| panic!("no window vertex at level {lo}"));
    let rest: Vec<usize> = pool.into_iter().filter(|&i| i != first).collect();
    let mut picked = vec![first];
    picked.extend(rest.choose_multiple(rng, terms.saturating_sub(1)).copied());
    ModuleElem::from_terms(q.expr(), picked.into_iter().map(|i| (q.vertices()[i].clone(), small_rational(rng))))
        .expect("window vertices")
}

/// A word read along a random walk of at most `len` arrows in the window.
/// Walks that reach a vertex without outgoing arrows stop early.
pub fn walk_word<R: Rng>(rng: &mut R, q: &MaterializedQuiver, len: usize) -> Word {
    let mut at = rng.gen_range(0..q.vertex_count());
    let mut colors = Vec::with_capacity(len);
    for _ in 0..len {
        let Some(&(c, t)) = q.out_arrows(at).choose(rng) else { break };
        colors.push(q.colors()[c].clone());
        at = t;
    }
    Word::new(colors)
}

/// An exact series with up to `terms` terms of length at most `max_len`.
/// Most words follow walks in the window; the rest are arbitrary words in
/// the window colors, which usually act as zero.
pub fn series<R: Rng>(rng: &mut R, q: &MaterializedQuiver, max_len: usize, terms: usize) -> Series {
    let mut out = Series::zero();
    for _ in 0..terms {
        let len = rng.gen_range(0..=max_len);
        let w = if rng.gen_bool(0.75) || q.colors().is_empty() {
            walk_word(rng, q, len)
        } else {
            Word::new((0..len).map(|_| q.colors().choose(rng).expect("nonempty").clone()).collect())
        };
        out = out.add(&Series::monomial(small_rational(rng), w));
    }
    out
}

/// A random poset on `e0, ..., e{n-1}` whose order extends the index order:
/// each pair `i < j` is a cover candidate with probability `density`.
pub fn poset<R: Rng>(rng: &mut R, n: usize, density: f64) -> Poset {
    let ids: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let mut covers = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                covers.push((ids[i].clone(), ids[j].clone()));
            }
        }
    }
    Poset::from_hasse(ids, covers).expect("index order is acyclic")
}

