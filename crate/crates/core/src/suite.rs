//! The full verification run over a poset realization: spectrum round trip,
//! division soundness, decomposition certificates, compressibility probes
//! and module-axiom samples, each tied to an explicit window.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::construct::{component, expected_spectrum, realize};
use crate::error::{Error, Result};
use crate::modact::{act, act_exact, in_m_geq};
use crate::poset::Poset;
use crate::quiver::{materialize, window_size, QuiverExpr};
use crate::sample;
use crate::span::cyclic_span;
use crate::verify::{compressibility_probe, decompose, divide, Check, Report};

/// Largest number of window vertices materialized for one component.
pub const WINDOW_CAP: usize = 256;

const DIVISION_SAMPLES: usize = 8;
const DECOMPOSITION_SAMPLES: usize = 4;
const PROBE_SAMPLES: usize = 2;
const AXIOM_SAMPLES: usize = 8;

/// Note attached to every report about the noetherianity claims.
pub const NOETHERIAN_NOTE: &str = "noetherianity of the realized category and its components: property evidence only \
     (division and decomposition suites); not decidable on finite windows";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Config {
    pub budget: u32,
    pub span_len: usize,
    pub depth: usize,
    pub seed: u64,
    pub enum_cap: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { budget: 8, span_len: 6, depth: 5, seed: 0, enum_cap: crate::poset::ENUMERATION_CAP }
    }
}

impl Config {
    /// Enforces `budget >= max(span_len, depth + 2)`.
    pub fn validate(&self) -> Result<()> {
        let need = (self.span_len as u64).max(self.depth as u64 + 2);
        if (self.budget as u64) < need {
            return Err(Error::Config(format!(
                "budget {} is below max(span length {}, depth {} + 2)",
                self.budget, self.span_len, self.depth
            )));
        }
        Ok(())
    }
}

/// Aggregate result of [`check`].
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub poset: Value,
    pub config: Config,
    pub cn_realizable: bool,
    pub reports: Vec<Report>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl CheckReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Largest `m <= budget` whose window of `expr` has at most `cap` vertices.
pub fn component_budget(expr: &QuiverExpr, budget: u32, cap: usize) -> u32 {
    (0..=budget).rev().find(|&m| window_size(expr, m) <= cap).unwrap_or(0)
}

fn up_set(p: &Poset, id: &str) -> Result<Poset> {
    let members: Vec<&String> = p.elements().iter().filter(|q| p.leq(id, q)).collect();
    let pairs = p.leq_pairs().into_iter().filter(|(a, b)| p.leq(id, a) && p.leq(id, b));
    Poset::from_relation(members.into_iter().cloned(), pairs)
}

fn spectrum_report(p: &Poset, realization: &QuiverExpr, budget: u32) -> Result<Report> {
    let whole = expected_spectrum(realization)?;
    let mut checks = vec![Check::new("spectrum(realize(P)) ~ P", whole.find_isomorphism(p).is_some())];
    for id in p.elements() {
        let part = component(realization, id).ok_or_else(|| Error::UnknownElement(id.clone()))?;
        let ok = expected_spectrum(&part)?.find_isomorphism(&up_set(p, id)?).is_some();
        checks.push(Check::new(format!("spectrum(G^{id}) ~ up-set of {id}"), ok));
    }
    Ok(Report::new("atom spectrum round trip", budget, checks))
}

fn division_report(rng: &mut ChaCha8Rng, id: &str, comp: &Arc<QuiverExpr>, m: u32, depth: usize) -> Result<Option<Report>> {
    let depth = depth.min(m.saturating_sub(1) as usize);
    if depth == 0 {
        return Ok(None);
    }
    let q = materialize(comp, m);
    let mut checks = Vec::new();
    for k in 0..DIVISION_SAMPLES {
        let i = rng.gen_range(0..=m - depth as u32 - 1);
        let w = i + depth as u32;
        let y = sample::elem_with_min_level(rng, &q, i, w, 3);
        let z = sample::elem_with_min_level(rng, &q, i + 1, w, 3);
        let div = divide(&q, &y, &z, depth)?;
        let sound = in_m_geq(&div.residual, w + 1)? && z.sub(&act_exact(&y, &div.quotient)?)? == div.residual;
        let span = cyclic_span(&q.shrink(w), std::slice::from_ref(&y), depth)?;
        let member = span.contains(&z)?;
        let mut check = Check::new(format!("sample {k}: y = {y}, z = {z}"), sound && member);
        if !check.pass {
            check = check.with_note(format!("residual sound: {sound}, span membership: {member}"));
        }
        checks.push(check);
    }
    Ok(Some(Report::new(format!("division soundness on G^{id} (depth {depth})"), m, checks)))
}

fn decomposition_report(rng: &mut ChaCha8Rng, id: &str, comp: &Arc<QuiverExpr>, m: u32, span_len: usize) -> Result<Report> {
    let q = materialize(comp, m);
    let mut checks = Vec::new();
    for k in 0..DECOMPOSITION_SAMPLES {
        let count = rng.gen_range(1..=3);
        let lowest = rng.gen_range(0..=m);
        let window = m.min(lowest + span_len as u32);
        let mut gens = vec![sample::elem_with_min_level(rng, &q, lowest, window, 2)];
        for _ in 1..count {
            let lo = rng.gen_range(lowest..=window);
            gens.push(sample::elem_with_min_level(rng, &q, lo, window, 2));
        }
        let d = decompose(&q, &gens, span_len)?;
        let ok = d.certified && d.level == lowest;
        let mut check = Check::new(format!("sample {k}: {count} generators, level {lowest}"), ok);
        if !ok {
            check = check.with_note(format!("certified: {}, level: {}", d.certified, d.level));
        }
        checks.push(check);
    }
    Ok(Report::new(format!("layer decomposition on G^{id}"), m, checks))
}

fn probe_reports(rng: &mut ChaCha8Rng, id: &str, comp: &Arc<QuiverExpr>, m: u32) -> Result<Vec<Report>> {
    if m < 2 {
        return Ok(Vec::new());
    }
    let q = materialize(comp, m);
    let window = m - 1;
    let mut out = Vec::new();
    for _ in 0..PROBE_SAMPLES {
        let i = rng.gen_range(0..window);
        let y = sample::elem_with_min_level(rng, &q, i, window, 2);
        let mut rep = compressibility_probe(&q, &y, window)?;
        rep.claim = format!("compressibility on G^{id}, y = {y}: {}", rep.claim);
        out.push(rep);
    }
    Ok(out)
}

fn axiom_report(rng: &mut ChaCha8Rng, id: &str, comp: &Arc<QuiverExpr>, m: u32) -> Result<Report> {
    let q = materialize(comp, m);
    let tilde = comp.as_tilde().is_some();
    let mut checks = Vec::new();
    for k in 0..AXIOM_SAMPLES {
        // Letters from the window of budget `a` raise no coordinate past
        // `a` plus one per letter, so `a + b + c <= m` keeps paths inside.
        let (a, b, c) = if tilde {
            let a = rng.gen_range(0..=m / 3);
            let b = ((m - a) / 2).min(3);
            (a, b, (m - a - b).min(3))
        } else {
            (0, 3, 3)
        };
        let small = q.shrink(a);
        let y = sample::elem_with_min_level(rng, &small, 0, a, 3);
        let f = sample::series(rng, &small, b as usize, 3);
        let g = sample::series(rng, &small, c as usize, 3);
        let lhs = act(&q, &act(&q, &y, &f)?, &g)?;
        let rhs = act(&q, &y, &f.mul(&g))?;
        checks.push(Check::new(format!("sample {k}"), lhs == rhs));
    }
    Ok(Report::new(format!("module axiom (y*f)*g = y*(fg) on G^{id}"), m, checks))
}

/// Runs every suite on the realization of `p`.
pub fn check(p: &Poset, config: &Config) -> Result<CheckReport> {
    config.validate()?;
    if p.len() > config.enum_cap {
        return Err(Error::EnumerationCap { size: p.len(), cap: config.enum_cap });
    }
    let realization = realize(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut reports = vec![spectrum_report(p, &realization, config.budget)?];
    let cn = p.cn_realizable();
    let mut notes = vec![
        format!("seed {}", config.seed),
        format!(
            "cn_realizable = {cn}: {}",
            if cn { "no chain x < y < z" } else { "contains a chain x < y < z" }
        ),
        NOETHERIAN_NOTE.to_string(),
    ];
    for id in p.elements() {
        let comp = component(&realization, id).ok_or_else(|| Error::UnknownElement(id.clone()))?;
        let m = component_budget(&comp, config.budget, WINDOW_CAP);
        if m < config.budget {
            notes.push(format!("G^{id}: window reduced to budget {m} ({WINDOW_CAP} vertex cap)"));
        }
        if comp.as_tilde().is_some() {
            if let Some(r) = division_report(&mut rng, id, &comp, m, config.depth)? {
                reports.push(r);
            }
            reports.push(decomposition_report(&mut rng, id, &comp, m, config.span_len)?);
            reports.extend(probe_reports(&mut rng, id, &comp, m)?);
        }
        reports.push(axiom_report(&mut rng, id, &comp, m)?);
    }
    let pass = reports.iter().all(|r| r.pass);
    Ok(CheckReport { poset: p.to_json(), config: config.clone(), cn_realizable: cn, reports, notes, pass })
}

/// Summary line per report, for terminal output.
pub fn summary(report: &CheckReport) -> Value {
    json!(report
        .reports
        .iter()
        .map(|r| json!({"claim": r.claim, "checks": r.checks.len(), "pass": r.pass}))
        .collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poset(ids: &[&str], covers: &[(&str, &str)]) -> Poset {
        Poset::from_hasse(ids.iter().copied(), covers.iter().copied()).unwrap()
    }

    #[test]
    fn config_invariant() {
        assert!(Config::default().validate().is_ok());
        let bad = Config { budget: 6, depth: 5, ..Config::default() };
        assert!(matches!(bad.validate(), Err(Error::Config(_))));
        let bad = Config { budget: 5, span_len: 6, depth: 2, ..Config::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn component_budget_respects_cap() {
        let chain = poset(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        let r = realize(&chain).unwrap();
        let a = component(&r, "a").unwrap();
        assert_eq!(window_size(&a, 8), 90);
        assert_eq!(component_budget(&a, 8, 256), 8);
        assert_eq!(component_budget(&a, 8, 89), 7);
    }

    #[test]
    fn two_chain_passes() {
        let rep = check(&poset(&["p", "q"], &[("p", "q")]), &Config::default()).unwrap();
        assert!(rep.pass, "{}", serde_json::to_string_pretty(&rep.to_json()).unwrap());
        assert!(rep.cn_realizable);
        assert!(rep.notes.iter().any(|n| n.contains("property evidence only")));
    }

    #[test]
    fn deterministic_for_a_seed() {
        let v = poset(&["p", "q", "r"], &[("p", "q"), ("p", "r")]);
        let cfg = Config { seed: 7, ..Config::default() };
        assert_eq!(check(&v, &cfg).unwrap().to_json(), check(&v, &cfg).unwrap().to_json());
    }
}
