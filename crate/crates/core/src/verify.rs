//! Executable forms of the structural lemmas about tilde quivers: division
//! of a target by a generator, the layer decomposition of cyclic
//! submodules, and the compressibility probe.
//!
//! Every verdict here is relative to a finite window and never claims more.

use serde::Serialize;
use serde_json::Value;

use crate::addr::VertexAddr;
use crate::error::{Error, Result};
use crate::modact::{act_exact, in_m_geq, min_level, ModuleElem};
use crate::quiver::{materialize, MaterializedQuiver};
use crate::series::{ColorId, Order, Series, Word};
use crate::span::{cyclic_span, SpanBasis};

/// Output of [`divide`].
#[derive(Clone, Debug)]
pub struct Division {
    /// `f` with `z - y·f` in `M_{>= level + depth + 1}`.
    pub quotient: Series,
    /// `z - y·f`, exactly.
    pub residual: ModuleElem,
    /// The minimal level `i` of `y`.
    pub level: u32,
    /// The inner vertex `u` whose coefficient at level `i` was normalized.
    pub pivot: VertexAddr,
}

fn check_tilde_host(q: &MaterializedQuiver, elems: &[&ModuleElem]) -> Result<String> {
    let (_, site) = q.expr().as_tilde().ok_or(Error::NotTilde)?;
    for e in elems {
        if !(std::sync::Arc::ptr_eq(e.host(), q.expr()) || **e.host() == **q.expr()) {
            return Err(Error::HostMismatch);
        }
    }
    Ok(site.to_string())
}

/// Finds `f` of word length at most `depth` such that `z - y·f` lies in
/// `M_{>= i + depth + 1}`, where `i` is the minimal level of `y` and `z` is
/// in `M_{>= i + 1}`.
///
/// With `u` the first vertex of `y` at level `i`, step `d` clears level
/// `i + d` of the running remainder using `c_{u,u}^{d-1} c_{u,v}`.
pub fn divide(q: &MaterializedQuiver, y: &ModuleElem, z: &ModuleElem, depth: usize) -> Result<Division> {
    let site = check_tilde_host(q, &[y, z])?;
    let level = min_level(y)?;
    if !in_m_geq(z, level + 1)? {
        return Err(Error::NotInFiltration(level + 1));
    }
    let needed = level + depth as u32 + 1;
    if q.budget() < needed {
        return Err(Error::Budget { needed, budget: q.budget() });
    }
    let (lead_addr, lead) = y.terms().next().map(|(v, c)| (v.clone(), c.clone())).ok_or(Error::ZeroElement)?;
    let pivot = lead_addr.top_inner().expect("tilde address").clone();
    let normalized = y.scale(&lead.recip());
    let loop_color = ColorId::cross(site.clone(), pivot.clone(), pivot.clone());

    let mut remainder = z.clone();
    let mut quotient = Series::zero();
    for d in 1..=depth as u32 {
        let target = level + d;
        let prefix = Word::power(&loop_color, d as usize - 1);
        let step = Series::from_terms(
            remainder.terms().filter(|(v, _)| v.top_level() == Some(target)).map(|(v, mu)| {
                let exit = ColorId::cross(site.clone(), pivot.clone(), v.top_inner().expect("tilde address").clone());
                (prefix.concat(&Word::letter(exit)), mu.clone())
            }),
            Order::Exact,
        );
        if step.is_zero() {
            continue;
        }
        remainder = remainder.sub(&act_exact(&normalized, &step)?)?;
        quotient = quotient.add(&step);
    }
    Ok(Division { quotient: quotient.scale(&lead.recip()), residual: remainder, level, pivot })
}

/// One line of a [`Report`].
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub target: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(target: impl Into<String>, pass: bool) -> Self {
        Check { target: target.into(), pass, note: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// A window-relative verdict on one claim.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub claim: String,
    pub window: u32,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Report {
    pub fn new(claim: impl Into<String>, window: u32, checks: Vec<Check>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Report { claim: claim.into(), window, checks, pass }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Checks, inside the window of the given size, that every basis vector
/// `x_(j,w)` with `i < j <= window` lies in `y·F`, both by division and by
/// membership in the cyclic span of `y`.
pub fn compressibility_probe(q: &MaterializedQuiver, y: &ModuleElem, window: u32) -> Result<Report> {
    check_tilde_host(q, &[y])?;
    if window + 1 > q.budget() {
        return Err(Error::Budget { needed: window + 1, budget: q.budget() });
    }
    let level = min_level(y)?;
    let sub = materialize(q.expr(), window);
    if y.support().any(|v| !sub.contains(v)) {
        return Err(Error::WindowMismatch(window));
    }
    let mut checks = Vec::new();
    if level < window {
        let depth = (window - level) as usize;
        let span = cyclic_span(&sub, std::slice::from_ref(y), depth)?;
        for v in sub.vertices() {
            if v.top_level().is_some_and(|j| j > level) {
                let target = ModuleElem::basis(q.expr(), v.clone())?;
                let div = divide(q, y, &target, depth)?;
                let by_division = in_m_geq(&div.residual, window + 1)?;
                let by_span = span.contains(&target)?;
                let mut check = Check::new(format!("x[{v}]"), by_division && by_span);
                if !check.pass {
                    check = check.with_note(format!("division: {by_division}, span membership: {by_span}"));
                }
                checks.push(check);
            }
        }
    }
    Ok(Report::new(format!("x[(j,w)] in y*F for {} < j <= {window}", level), window, checks))
}

/// Output of [`decompose`].
#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Minimal level over the generators.
    pub level: u32,
    /// Budget of the window the verdict refers to.
    pub window: u32,
    /// Basis of the submodule's intersection with the layer `M_level`.
    pub layer_basis: SpanBasis,
    pub span_rank: usize,
    /// Whether the truncated submodule equals `(L ∩ M_i) ⊕ M_{>i}` in the window.
    pub certified: bool,
}

/// Decomposes the submodule generated by `generators` as its layer at the
/// minimal level plus everything above, within the window of budget
/// `min(budget, i + span_len)`. Every generator must lie in that window.
pub fn decompose(q: &MaterializedQuiver, generators: &[ModuleElem], span_len: usize) -> Result<Decomposition> {
    check_tilde_host(q, &generators.iter().collect::<Vec<_>>())?;
    let level = generators
        .iter()
        .filter(|g| !g.is_zero())
        .map(min_level)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min()
        .ok_or(Error::ZeroElement)?;
    if level > q.budget() {
        return Err(Error::Budget { needed: level, budget: q.budget() });
    }
    let window = q.budget().min(level.saturating_add(span_len as u32));
    let sub = materialize(q.expr(), window);
    // Outer cross arrows reach every inner level, so a generator sticking
    // out of the window cannot be replaced by its projection.
    if generators.iter().any(|g| g.support().any(|v| !sub.contains(v))) {
        return Err(Error::WindowMismatch(window));
    }
    let span = cyclic_span(&sub, generators, span_len)?;

    let layer_parts: Vec<ModuleElem> =
        span.rows().iter().map(|r| r.restrict(|v| v.top_level() == Some(level))).collect();
    let layer_basis = SpanBasis::span_of(&sub, &layer_parts)?;

    let mut certified = true;
    for row in layer_basis.rows() {
        certified &= span.contains(&row)?;
    }
    let mut higher = 0;
    for v in sub.vertices() {
        if v.top_level().is_some_and(|j| j > level) {
            higher += 1;
            if certified {
                certified &= span.contains(&ModuleElem::basis(q.expr(), v.clone())?)?;
            }
        }
    }
    certified &= span.rank() == layer_basis.rank() + higher;
    Ok(Decomposition { level, window, layer_basis, span_rank: span.rank(), certified })
}
