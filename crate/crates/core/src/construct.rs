//! Realization of a finite poset as a colored quiver, its expected atom
//! spectrum, and the maps relating a quiver's algebra to its tilde's.
//!
//! For `p` maximal, `Γ^p` is the one-loop quiver at site `p`. Otherwise
//! `Γ^p` is the tilde (site `p`) of the disjoint union of the `Γ^q` with
//! `q > p`. The realization is the disjoint union of all `Γ^p`. Each `Γ^p`
//! is built once and shared, so its colors are literally the same wherever
//! it occurs.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::addr::validate_id;
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::quiver::QuiverExpr;
use crate::series::{Series, Word};

/// Builds the quiver realizing `p`.
pub fn realize(p: &Poset) -> Result<Arc<QuiverExpr>> {
    if p.is_empty() {
        return Err(Error::EmptyPoset);
    }
    for id in p.elements() {
        validate_id(id)?;
    }
    let mut memo = BTreeMap::new();
    let parts = p
        .elements()
        .iter()
        .map(|id| Ok((id.clone(), component_for(p, id, &mut memo)?)))
        .collect::<Result<Vec<_>>>()?;
    QuiverExpr::sum(parts)
}

fn component_for(p: &Poset, id: &str, memo: &mut BTreeMap<String, Arc<QuiverExpr>>) -> Result<Arc<QuiverExpr>> {
    if let Some(e) = memo.get(id) {
        return Ok(e.clone());
    }
    let above = p.strictly_above(id);
    let e = if above.is_empty() {
        QuiverExpr::looped(id)?
    } else {
        let parts = above
            .into_iter()
            .map(|q| Ok((q.to_string(), component_for(p, q, memo)?)))
            .collect::<Result<Vec<_>>>()?;
        QuiverExpr::tilde(QuiverExpr::sum(parts)?, id)?
    };
    memo.insert(id.to_string(), e.clone());
    Ok(e)
}

/// The component `Γ^p` of a realization.
pub fn component(realization: &QuiverExpr, p: &str) -> Option<Arc<QuiverExpr>> {
    realization.part(p).cloned()
}

/// The atom spectrum predicted for a realization: a loop at `p` gives the
/// single atom `p`; a tilde at `p` adds `p` below every atom of its inner
/// quiver; a disjoint union takes the union, identifying equal labels.
pub fn expected_spectrum(expr: &QuiverExpr) -> Result<Poset> {
    let mut memo = HashMap::new();
    let (elements, pairs) = spectrum_parts(expr, &mut memo)?;
    Poset::from_relation(elements, pairs.iter().map(|(a, b)| (a, b)))
        .map_err(|e| Error::NotRealization(e.to_string()))
}

type Parts = (BTreeSet<String>, BTreeSet<(String, String)>);

fn spectrum_parts(expr: &QuiverExpr, memo: &mut HashMap<String, Parts>) -> Result<Parts> {
    if let Some(site) = expr.site() {
        if let Some(done) = memo.get(site) {
            return Ok(done.clone());
        }
    }
    let parts = match expr {
        QuiverExpr::Loop { site } => ([site.clone()].into_iter().collect(), BTreeSet::new()),
        QuiverExpr::Finite(fq) => {
            return Err(Error::NotRealization(format!("explicit quiver at site `{}` carries no atom label", fq.site)))
        }
        QuiverExpr::Tilde { inner, site } => {
            let (mut elements, mut pairs) = spectrum_parts(inner, memo)?;
            if elements.is_empty() {
                return Err(Error::NotRealization(format!("tilde at `{site}` has an empty inner quiver")));
            }
            if elements.contains(site) {
                return Err(Error::NotRealization(format!("label `{site}` occurs inside its own tilde")));
            }
            pairs.extend(elements.iter().map(|e| (site.clone(), e.clone())));
            elements.insert(site.clone());
            (elements, pairs)
        }
        QuiverExpr::Sum(children) => {
            let mut elements = BTreeSet::new();
            let mut pairs = BTreeSet::new();
            for (_, child) in children {
                let (e, p) = spectrum_parts(child, memo)?;
                elements.extend(e);
                pairs.extend(p);
            }
            (elements, pairs)
        }
    };
    if let Some(site) = expr.site() {
        memo.insert(site.to_string(), parts.clone());
    }
    Ok(parts)
}

fn tilde_inner(tilde: &QuiverExpr) -> Result<&Arc<QuiverExpr>> {
    tilde.as_tilde().map(|(inner, _)| inner).ok_or(Error::NotTilde)
}

fn over_inner(inner: &QuiverExpr, w: &Word) -> bool {
    w.colors().iter().all(|c| inner.has_color(c))
}

/// The inclusion of the inner algebra into the tilde algebra.
pub fn nu(tilde: &QuiverExpr, f: &Series) -> Result<Series> {
    let inner = tilde_inner(tilde)?;
    if let Some(c) = f.colors().into_iter().find(|c| !inner.has_color(c)) {
        return Err(Error::ForeignColor(c.to_string()));
    }
    Ok(f.clone())
}

/// The projection onto the inner algebra: drops every word that uses a
/// color outside the inner quiver.
pub fn pi(tilde: &QuiverExpr, f: &Series) -> Result<Series> {
    let inner = tilde_inner(tilde)?;
    Ok(f.filter_words(|w| over_inner(inner, w)))
}

/// Membership in the kernel of [`pi`]: every supported word uses a fresh color.
pub fn in_ideal(tilde: &QuiverExpr, f: &Series) -> Result<bool> {
    let inner = tilde_inner(tilde)?;
    Ok(f.terms().all(|(w, _)| !over_inner(inner, w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::addr::VertexAddr;
    use crate::quiver::examples::*;
    use crate::rational::int;
    use crate::series::ColorId;

    fn poset(ids: &[&str], covers: &[(&str, &str)]) -> Poset {
        Poset::from_hasse(ids.iter().copied(), covers.iter().copied()).unwrap()
    }

    #[test]
    fn antichain_realizes_to_loops() {
        let r = realize(&poset(&["p", "q"], &[])).unwrap();
        assert_eq!(*r, QuiverExpr::Sum(vec![("p".into(), one_loop("p")), ("q".into(), one_loop("q"))]));
        let single = realize(&poset(&["p"], &[])).unwrap();
        assert_eq!(*single, QuiverExpr::Sum(vec![("p".into(), one_loop("p"))]));
    }

    #[test]
    fn two_chain_shares_the_top_loop() {
        let r = realize(&poset(&["p", "q"], &[("p", "q")])).unwrap();
        let gp = component(&r, "p").unwrap();
        let gq = component(&r, "q").unwrap();
        let (inner, site) = gp.as_tilde().unwrap();
        assert_eq!(site, "p");
        assert!(Arc::ptr_eq(inner.part("q").unwrap(), &gq));
        assert_eq!(*gq, QuiverExpr::Loop { site: "q".into() });
    }

    #[test]
    fn empty_poset_is_rejected() {
        let empty = Poset::from_hasse(Vec::<String>::new(), Vec::<(String, String)>::new()).unwrap();
        assert_eq!(realize(&empty).unwrap_err(), Error::EmptyPoset);
    }

    #[test]
    fn spectrum_base_cases() {
        assert_eq!(expected_spectrum(&one_loop("p")).unwrap(), poset(&["p"], &[]));
        let t = QuiverExpr::tilde(QuiverExpr::sum([("q", one_loop("q"))]).unwrap(), "p").unwrap();
        assert_eq!(expected_spectrum(&t).unwrap(), poset(&["p", "q"], &[("p", "q")]));
        assert!(matches!(expected_spectrum(&ray()), Err(Error::NotRealization(_))));
    }

    #[test]
    fn v_poset_round_trip() {
        let v = poset(&["p", "q", "r"], &[("p", "q"), ("p", "r")]);
        let spec = expected_spectrum(&realize(&v).unwrap()).unwrap();
        assert!(spec.find_isomorphism(&v).is_some());
        assert_eq!(spec.len(), 3);
    }

    #[test]
    fn non_maximal_label_is_the_minimum_of_its_component() {
        let chain = poset(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        let r = realize(&chain).unwrap();
        for p in ["a", "b"] {
            let s = expected_spectrum(&component(&r, p).unwrap()).unwrap();
            for other in s.elements() {
                if other != p {
                    assert!(s.lt(p, other));
                }
            }
        }
    }

    #[test]
    fn nu_pi_and_the_ideal() {
        let e = tilde_edge();
        let c = ColorId::named("edge", "c");
        let cvw = ColorId::cross("sq", VertexAddr::base("v"), VertexAddr::base("w"));
        let one_plus_c = Series::one().add(&Series::color(c.clone()));
        assert!(nu(&e, &Series::zero()).unwrap().is_zero());
        assert_eq!(nu(&e, &one_plus_c).unwrap(), one_plus_c);
        assert_eq!(nu(&e, &Series::color(cvw.clone())).unwrap_err(), Error::ForeignColor(cvw.to_string()));

        assert_eq!(pi(&e, &nu(&e, &one_plus_c).unwrap()).unwrap(), one_plus_c);
        assert!(pi(&e, &Series::color(cvw.clone())).unwrap().is_zero());
        let mixed = Series::from_terms(
            [
                (Word::empty(), int(2)),
                (Word::letter(c.clone()), int(3)),
                (Word::new(vec![cvw.clone(), c.clone()]), int(5)),
            ],
            crate::series::Order::Exact,
        );
        let expected = Series::from_terms([(Word::empty(), int(2)), (Word::letter(c), int(3))], crate::series::Order::Exact);
        assert_eq!(pi(&e, &mixed).unwrap(), expected);

        assert!(in_ideal(&e, &Series::color(cvw)).unwrap());
        assert!(!in_ideal(&e, &Series::one()).unwrap());
        assert!(!in_ideal(&e, &mixed).unwrap());
        assert_eq!(pi(&one_loop("p"), &Series::one()).unwrap_err(), Error::NotTilde);
    }
}
