//! Exact row reduction over window coordinates, used to compute truncated
//! cyclic submodules `y·F` and to test membership in them.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::addr::VertexAddr;
use crate::error::{Error, Result};
use crate::modact::ModuleElem;
use crate::quiver::{MaterializedQuiver, QuiverExpr};
use crate::rational::Rational;

/// Sparse vector over window vertex indices.
type Row = BTreeMap<usize, Rational>;

/// A basis in reduced row-echelon form over the vertices of a window.
/// Pivots increase in canonical vertex order and every pivot column is
/// zero outside its own row.
#[derive(Clone, Debug)]
pub struct SpanBasis {
    host: Arc<QuiverExpr>,
    budget: u32,
    vertices: Vec<VertexAddr>,
    rows: Vec<Row>,
}

fn pivot(row: &Row) -> usize {
    *row.keys().next().expect("rows are nonzero")
}

fn axpy(target: &mut Row, k: &Rational, src: &Row) {
    for (i, v) in src {
        let e = target.entry(*i).or_insert_with(Rational::zero);
        *e -= k * v;
        if e.is_zero() {
            target.remove(i);
        }
    }
}

impl SpanBasis {
    pub fn empty(q: &MaterializedQuiver) -> Self {
        SpanBasis { host: q.expr().clone(), budget: q.budget(), vertices: q.vertices().to_vec(), rows: Vec::new() }
    }

    /// The span of `elems` inside the window of `q`.
    pub fn span_of<'a, I>(q: &MaterializedQuiver, elems: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a ModuleElem>,
    {
        let mut b = SpanBasis::empty(q);
        for e in elems {
            let row = b.to_row(e)?;
            b.insert_row(row);
        }
        Ok(b)
    }

    pub fn budget(&self) -> u32 {
        self.budget
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pivots(&self) -> Vec<&VertexAddr> {
        self.rows.iter().map(|r| &self.vertices[pivot(r)]).collect()
    }

    pub fn rows(&self) -> Vec<ModuleElem> {
        self.rows.iter().map(|r| self.to_elem(r)).collect()
    }

    fn to_elem(&self, r: &Row) -> ModuleElem {
        ModuleElem::from_valid_terms(&self.host, r.iter().map(|(i, c)| (self.vertices[*i].clone(), c.clone())))
    }

    fn to_row(&self, e: &ModuleElem) -> Result<Row> {
        if !(Arc::ptr_eq(e.host(), &self.host) || **e.host() == *self.host) {
            return Err(Error::HostMismatch);
        }
        e.terms()
            .map(|(v, c)| match self.vertices.binary_search(v) {
                Ok(i) => Ok((i, c.clone())),
                Err(_) => Err(Error::WindowMismatch(self.budget)),
            })
            .collect()
    }

    /// Reduces `row` against the basis; what remains is zero on every pivot.
    fn reduce(&self, row: &mut Row) {
        for r in &self.rows {
            if let Some(k) = row.get(&pivot(r)).cloned() {
                axpy(row, &k, r);
            }
        }
    }

    /// Adds `row` to the span; returns the reduced new direction if it was independent.
    fn insert_row(&mut self, mut row: Row) -> Option<Row> {
        self.reduce(&mut row);
        if row.is_empty() {
            return None;
        }
        let direction = row.clone();
        let p = pivot(&row);
        let lead = row[&p].clone();
        if !lead.is_one() {
            let inv = lead.recip();
            for v in row.values_mut() {
                *v *= &inv;
            }
        }
        for r in &mut self.rows {
            if let Some(k) = r.get(&p).cloned() {
                axpy(r, &k, &row);
            }
        }
        let at = self.rows.partition_point(|r| pivot(r) < p);
        self.rows.insert(at, row);
        Some(direction)
    }

    /// Adds `e` to the span; returns whether the rank grew.
    pub fn insert(&mut self, e: &ModuleElem) -> Result<bool> {
        let row = self.to_row(e)?;
        Ok(self.insert_row(row).is_some())
    }

    /// Coefficients expressing `z` in the basis rows, or `None` if `z` is not in the span.
    pub fn membership(&self, z: &ModuleElem) -> Result<Option<Vec<Rational>>> {
        let mut row = self.to_row(z)?;
        let coeffs: Vec<Rational> =
            self.rows.iter().map(|r| row.get(&pivot(r)).cloned().unwrap_or_else(Rational::zero)).collect();
        for (k, r) in coeffs.iter().zip(&self.rows) {
            if !k.is_zero() {
                axpy(&mut row, k, r);
            }
        }
        Ok(row.is_empty().then_some(coeffs))
    }

    pub fn contains(&self, z: &ModuleElem) -> Result<bool> {
        Ok(self.membership(z)?.is_some())
    }
}

/// Span of `g · w` over generators `g` and words `w` of length at most
/// `max_len` in the window colors, with coordinates restricted to the window.
///
/// Computed by closing the span of the generators under single colors
/// `max_len` times; only directions added in the previous round are acted on.
pub fn cyclic_span(q: &MaterializedQuiver, generators: &[ModuleElem], max_len: usize) -> Result<SpanBasis> {
    let mut basis = SpanBasis::empty(q);
    let mut frontier = Vec::new();
    for g in generators {
        if !(Arc::ptr_eq(g.host(), q.expr()) || **g.host() == **q.expr()) {
            return Err(Error::HostMismatch);
        }
        if let Some(v) = g.support().find(|v| !q.contains(v)) {
            return Err(if q.expr().contains(v) {
                Error::Budget { needed: v.max_level(), budget: q.budget() }
            } else {
                Error::OutsideWindow(v.to_string())
            });
        }
        let row = basis.to_row(g)?;
        frontier.extend(basis.insert_row(row));
    }
    for _ in 0..max_len {
        if frontier.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for x in &frontier {
            let mut by_color: BTreeMap<usize, Row> = BTreeMap::new();
            for (s, coef) in x {
                for &(c, t) in q.out_arrows(*s) {
                    *by_color.entry(c).or_default().entry(t).or_insert_with(Rational::zero) += coef;
                }
            }
            for (_, mut image) in by_color {
                if basis.rank() == basis.vertices.len() {
                    return Ok(basis);
                }
                image.retain(|_, v| !v.is_zero());
                if !image.is_empty() {
                    next.extend(basis.insert_row(image));
                }
            }
        }
        frontier = next;
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modact::act;
    use crate::quiver::examples::*;
    use crate::quiver::materialize;
    use crate::rational::int;
    use crate::series::{Series, Word};
    use proptest::prelude::*;

    fn a(s: &str) -> VertexAddr {
        s.parse().unwrap()
    }

    #[test]
    fn ray_span_from_level_one() {
        let r = ray();
        let q = materialize(&r, 6);
        let g = ModuleElem::basis(&r, a("1.v")).unwrap();
        let b = cyclic_span(&q, &[g], 2).unwrap();
        let pivots: Vec<String> = b.pivots().iter().map(|v| v.to_string()).collect();
        assert_eq!(pivots, ["1.v", "2.v", "3.v"]);
        let z = ModuleElem::basis(&r, a("2.v")).unwrap();
        assert!(b.contains(&z).unwrap());
        assert!(!b.contains(&ModuleElem::basis(&r, a("4.v")).unwrap()).unwrap());
    }

    #[test]
    fn zero_generator_and_loop() {
        let r = ray();
        let q = materialize(&r, 3);
        assert!(cyclic_span(&q, &[ModuleElem::zero(&r)], 3).unwrap().is_empty());
        let l = one_loop("p");
        let ql = materialize(&l, 0);
        for len in [0, 1, 4] {
            let b = cyclic_span(&ql, &[ModuleElem::basis(&l, a("v")).unwrap()], len).unwrap();
            assert_eq!(b.rank(), 1);
        }
    }

    #[test]
    fn membership_of_rows_and_zero() {
        let e = tilde_edge();
        let q = materialize(&e, 2);
        let g = ModuleElem::from_terms(&e, [(a("0.v"), int(1)), (a("1.w"), int(2))]).unwrap();
        let b = cyclic_span(&q, &[g], 2).unwrap();
        for (k, row) in b.rows().iter().enumerate() {
            let coeffs = b.membership(row).unwrap().unwrap();
            for (j, c) in coeffs.iter().enumerate() {
                assert_eq!(*c, int(i64::from(j == k)));
            }
        }
        let zero = b.membership(&ModuleElem::zero(&e)).unwrap().unwrap();
        assert!(zero.iter().all(Zero::is_zero));
        let far = ModuleElem::basis(&e, a("5.v")).unwrap();
        assert_eq!(b.membership(&far).unwrap_err(), Error::WindowMismatch(2));
    }

    #[test]
    fn closure_matches_word_enumeration_on_tilde_edge() {
        // enumerate all words over the window colors directly
        let e = tilde_edge();
        let q = materialize(&e, 3);
        let g = ModuleElem::from_terms(&e, [(a("0.v"), int(1)), (a("1.v"), int(-1))]).unwrap();
        let colors = q.colors().to_vec();
        let mut words = vec![Word::empty()];
        let mut all = words.clone();
        for _ in 0..2 {
            words = words
                .iter()
                .flat_map(|w| colors.iter().map(move |c| w.concat(&Word::letter(c.clone()))))
                .collect();
            all.extend(words.iter().cloned());
        }
        let mut oracle = SpanBasis::empty(&q);
        for w in &all {
            let image = act(&q, &g, &Series::word(w.clone())).unwrap();
            oracle.insert(&image).unwrap();
        }
        let b = cyclic_span(&q, &[g], 2).unwrap();
        assert_eq!(b.rank(), oracle.rank());
        for row in b.rows() {
            assert!(oracle.contains(&row).unwrap());
        }
    }

    /// Rank by dense fraction-free elimination, independent of `SpanBasis`.
    fn dense_rank(rows: &[Vec<i64>]) -> usize {
        let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
            m.swap(rank, p);
            for r in 0..m.len() {
                if r != rank && !m[r][c].is_zero() {
                    let k = &m[r][c] / &m[rank][c];
                    let pivot_row = m[rank].clone();
                    for (x, y) in m[r].iter_mut().zip(pivot_row) {
                        *x -= &k * y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    proptest! {
        #[test]
        fn membership_agrees_with_dense_rank(
            gens in prop::collection::vec(prop::collection::vec(-2i64..=2, 6), 0..5),
            z in prop::collection::vec(-2i64..=2, 6),
        ) {
            let r = ray();
            let q = materialize(&r, 5);
            let to_elem = |coords: &[i64]| ModuleElem::from_terms(
                &r,
                coords.iter().enumerate().map(|(i, &c)| (VertexAddr::level(i as u32, a("v")), int(c))),
            ).unwrap();
            let elems: Vec<ModuleElem> = gens.iter().map(|g| to_elem(g)).collect();
            let b = SpanBasis::span_of(&q, &elems).unwrap();
            prop_assert_eq!(b.rank(), dense_rank(&gens));
            let mut with_z = gens.clone();
            with_z.push(z.clone());
            let member = b.contains(&to_elem(&z)).unwrap();
            prop_assert_eq!(member, dense_rank(&with_z) == dense_rank(&gens));
        }

        #[test]
        fn span_is_monotone_in_length(c0 in -2i64..=2, c1 in -2i64..=2, c2 in -2i64..=2, len in 0usize..4) {
            let e = tilde_edge();
            let q = materialize(&e, 4);
            let g = ModuleElem::from_terms(&e, [(a("0.v"), int(c0)), (a("0.w"), int(c1)), (a("1.v"), int(c2))]).unwrap();
            let small = cyclic_span(&q, std::slice::from_ref(&g), len).unwrap();
            let big = cyclic_span(&q, &[g], len + 1).unwrap();
            prop_assert!(small.rank() <= big.rank());
            for row in small.rows() {
                prop_assert!(big.contains(&row).unwrap());
            }
        }
    }
}
