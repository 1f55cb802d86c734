//! The right module `M_Γ` of formal vertex sums and the action of the
//! formal monoid algebra on it.
//!
//! `x_v · f` sums `λ_{u(r)} x_{t(r)}` over the paths `r` leaving `v`. The
//! action is computed from the expression, so it is exact; the windowed
//! [`act`] additionally refuses results that leave its window.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::addr::VertexAddr;
use crate::error::{Error, Result};
use crate::quiver::{MaterializedQuiver, QuiverExpr};
use crate::rational::{format_rational, get_rational, is_negative, put_rational, Rational};
use crate::series::Series;

/// A finite formal sum `Σ μ_v x_v` over vertices of a host quiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleElem {
    host: Arc<QuiverExpr>,
    terms: BTreeMap<VertexAddr, Rational>,
}

fn same_host(a: &Arc<QuiverExpr>, b: &Arc<QuiverExpr>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl ModuleElem {
    pub fn zero(host: &Arc<QuiverExpr>) -> Self {
        ModuleElem { host: host.clone(), terms: BTreeMap::new() }
    }

    /// The basis vector `x_v`.
    pub fn basis(host: &Arc<QuiverExpr>, v: VertexAddr) -> Result<Self> {
        ModuleElem::from_terms(host, [(v, Rational::one())])
    }

    /// Sums repeated vertices and drops zero coefficients.
    pub fn from_terms<I>(host: &Arc<QuiverExpr>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexAddr, Rational)>,
    {
        let mut map: BTreeMap<VertexAddr, Rational> = BTreeMap::new();
        for (v, c) in terms {
            if !host.contains(&v) {
                return Err(Error::InvalidAddress(v.to_string()));
            }
            *map.entry(v).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(ModuleElem { host: host.clone(), terms: map })
    }

    /// Like [`ModuleElem::from_terms`] for addresses known to be valid.
    pub(crate) fn from_valid_terms<I>(host: &Arc<QuiverExpr>, terms: I) -> Self
    where
        I: IntoIterator<Item = (VertexAddr, Rational)>,
    {
        let mut map: BTreeMap<VertexAddr, Rational> = BTreeMap::new();
        for (v, c) in terms {
            *map.entry(v).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        ModuleElem { host: host.clone(), terms: map }
    }

    pub fn host(&self) -> &Arc<QuiverExpr> {
        &self.host
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, v: &VertexAddr) -> Rational {
        self.terms.get(v).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms in canonical vertex order.
    pub fn terms(&self) -> impl Iterator<Item = (&VertexAddr, &Rational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &VertexAddr> {
        self.terms.keys()
    }

    /// Largest level coordinate in the support; zero for the zero element.
    pub fn max_level(&self) -> u32 {
        self.terms.keys().map(VertexAddr::max_level).max().unwrap_or(0)
    }

    fn check_host(&self, other: &ModuleElem) -> Result<()> {
        if same_host(&self.host, &other.host) {
            Ok(())
        } else {
            Err(Error::HostMismatch)
        }
    }

    pub fn add(&self, other: &ModuleElem) -> Result<ModuleElem> {
        self.check_host(other)?;
        Ok(ModuleElem::from_valid_terms(
            &self.host,
            self.terms.iter().chain(other.terms.iter()).map(|(v, c)| (v.clone(), c.clone())),
        ))
    }

    pub fn sub(&self, other: &ModuleElem) -> Result<ModuleElem> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rational) -> ModuleElem {
        ModuleElem::from_valid_terms(&self.host, self.terms.iter().map(|(v, c)| (v.clone(), c * k)))
    }

    pub fn neg(&self) -> ModuleElem {
        self.scale(&-Rational::one())
    }

    /// Keeps the terms whose vertex satisfies `keep`.
    pub fn restrict(&self, keep: impl Fn(&VertexAddr) -> bool) -> ModuleElem {
        ModuleElem {
            host: self.host.clone(),
            terms: self.terms.iter().filter(|(v, _)| keep(v)).map(|(v, c)| (v.clone(), c.clone())).collect(),
        }
    }

    /// The part of `self` lying in the window of `q`.
    pub fn project_to_window(&self, q: &MaterializedQuiver) -> ModuleElem {
        self.restrict(|v| q.contains(v))
    }

    fn require_tilde(&self) -> Result<()> {
        match self.host.as_tilde() {
            Some(_) => Ok(()),
            None => Err(Error::NotTilde),
        }
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(v, c)| {
                let mut obj = serde_json::Map::new();
                obj.insert("vertex".into(), Value::String(v.to_string()));
                put_rational(&mut obj, c);
                Value::Object(obj)
            })
            .collect();
        json!({ "terms": terms })
    }

    pub fn from_json(host: &Arc<QuiverExpr>, v: &Value) -> Result<ModuleElem> {
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("module element needs a `terms` array".into()))?;
        let mut parsed = Vec::with_capacity(terms.len());
        for t in terms {
            let t = t.as_object().ok_or_else(|| Error::Parse("term must be an object".into()))?;
            let vertex: VertexAddr = t
                .get("vertex")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("term needs a `vertex` string".into()))?
                .parse()?;
            parsed.push((vertex, get_rational(t)?));
        }
        ModuleElem::from_terms(host, parsed)
    }
}

impl fmt::Display for ModuleElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (v, c)) in self.terms.iter().enumerate() {
            let neg = is_negative(c);
            let mag = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mag.is_one() {
                write!(f, "x[{v}]")?;
            } else {
                write!(f, "{}*x[{v}]", format_rational(&mag))?;
            }
        }
        Ok(())
    }
}

/// Exact action `y · f` on the infinite quiver, together with the largest
/// level coordinate touched along the way.
fn act_tracking(y: &ModuleElem, f: &Series) -> Result<(ModuleElem, u32)> {
    if let Some(d) = f.order().bound() {
        return Err(Error::InexactSeries(d));
    }
    let expr = &y.host;
    let mut touched = y.max_level();
    let mut out: BTreeMap<VertexAddr, Rational> = BTreeMap::new();
    for (word, lambda) in f.terms() {
        let mut current = y.terms.clone();
        for color in word.colors() {
            let mut next: BTreeMap<VertexAddr, Rational> = BTreeMap::new();
            for (v, mu) in &current {
                for t in expr.successors(v, color) {
                    touched = touched.max(t.max_level());
                    *next.entry(t).or_insert_with(Rational::zero) += mu;
                }
            }
            next.retain(|_, c| !c.is_zero());
            current = next;
            if current.is_empty() {
                break;
            }
        }
        for (v, mu) in current {
            *out.entry(v).or_insert_with(Rational::zero) += mu * lambda;
        }
    }
    Ok((ModuleElem::from_valid_terms(expr, out), touched))
}

/// Exact action `y · f` on the infinite quiver. `f` must be exact.
pub fn act_exact(y: &ModuleElem, f: &Series) -> Result<ModuleElem> {
    act_tracking(y, f).map(|(r, _)| r)
}

/// `y · f` inside the window of `q`: every vertex visited by a contributing
/// path must lie within the budget, otherwise the needed budget is reported.
pub fn act(q: &MaterializedQuiver, y: &ModuleElem, f: &Series) -> Result<ModuleElem> {
    if !same_host(q.expr(), &y.host) {
        return Err(Error::HostMismatch);
    }
    let (r, touched) = act_tracking(y, f)?;
    if touched > q.budget() {
        return Err(Error::Budget { needed: touched, budget: q.budget() });
    }
    Ok(r)
}

/// Smallest top level carrying a nonzero coefficient.
pub fn min_level(y: &ModuleElem) -> Result<u32> {
    y.require_tilde()?;
    y.terms.keys().next().and_then(VertexAddr::top_level).ok_or(Error::ZeroElement)
}

/// Membership in `M_{>=i}`.
pub fn in_m_geq(y: &ModuleElem, i: u32) -> Result<bool> {
    y.require_tilde()?;
    Ok(y.terms.keys().all(|v| v.top_level().is_some_and(|j| j >= i)))
}

/// The component of `y` in the layer `M_i`.
pub fn project_level(y: &ModuleElem, i: u32) -> Result<ModuleElem> {
    y.require_tilde()?;
    Ok(y.restrict(|v| v.top_level() == Some(i)))
}

/// The isomorphism `M ≅ M_{>=i}` sending `x_(j,v)` to `x_(j+i,v)`.
pub fn shift(y: &ModuleElem, i: u32) -> Result<ModuleElem> {
    y.require_tilde()?;
    Ok(ModuleElem {
        host: y.host.clone(),
        terms: y
            .terms
            .iter()
            .map(|(v, c)| (v.map_top_level(|j| j + i).expect("tilde address"), c.clone()))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::examples::*;
    use crate::quiver::materialize;
    use crate::rational::int;
    use crate::series::{ColorId, Word};

    fn a(s: &str) -> VertexAddr {
        s.parse().unwrap()
    }

    fn x(host: &Arc<QuiverExpr>, s: &str) -> ModuleElem {
        ModuleElem::basis(host, a(s)).unwrap()
    }

    fn cvv() -> ColorId {
        ColorId::cross("ray", a("v"), a("v"))
    }

    #[test]
    fn loop_module_is_simple() {
        let l = one_loop("p");
        let q = materialize(&l, 0);
        let xv = x(&l, "v");
        let c = Series::color(QuiverExpr::loop_color("p"));
        assert_eq!(act(&q, &xv, &c).unwrap(), xv);
        assert!(act(&q, &xv, &c.sub(&Series::one())).unwrap().is_zero());
        assert_eq!(act(&q, &xv, &Series::one()).unwrap(), xv);
    }

    #[test]
    fn ray_powers() {
        let r = ray();
        let q = materialize(&r, 4);
        let y = x(&r, "0.v");
        assert_eq!(act(&q, &y, &Series::word(Word::power(&cvv(), 2))).unwrap(), x(&r, "2.v"));
        assert_eq!(
            act(&q, &y, &Series::word(Word::power(&cvv(), 5))).unwrap_err(),
            Error::Budget { needed: 5, budget: 4 }
        );
        assert_eq!(act_exact(&y, &Series::word(Word::power(&cvv(), 5))).unwrap(), x(&r, "5.v"));
    }

    #[test]
    fn act_rejects_bounded_series_and_foreign_hosts() {
        let r = ray();
        let q = materialize(&r, 4);
        let y = x(&r, "0.v");
        assert_eq!(act(&q, &y, &Series::one().truncate(2)).unwrap_err(), Error::InexactSeries(2));
        let other = materialize(&tilde_edge(), 4);
        assert_eq!(act(&other, &y, &Series::one()).unwrap_err(), Error::HostMismatch);
    }

    #[test]
    fn level_functions() {
        let r = ray();
        assert_eq!(min_level(&x(&r, "3.v")).unwrap(), 3);
        let y = x(&r, "1.v").add(&x(&r, "4.v")).unwrap();
        assert_eq!(min_level(&y).unwrap(), 1);
        assert_eq!(min_level(&ModuleElem::zero(&r)).unwrap_err(), Error::ZeroElement);
        assert_eq!(min_level(&x(&one_loop("p"), "v")).unwrap_err(), Error::NotTilde);

        assert!(in_m_geq(&x(&r, "2.v"), 2).unwrap());
        assert!(!in_m_geq(&x(&r, "2.v"), 3).unwrap());
        assert!(in_m_geq(&ModuleElem::zero(&r), 7).unwrap());

        let y = x(&r, "0.v").add(&x(&r, "1.v")).unwrap();
        assert_eq!(project_level(&y, 1).unwrap(), x(&r, "1.v"));
        assert!(project_level(&x(&r, "3.v"), 2).unwrap().is_zero());
        let total = (0..4).fold(ModuleElem::zero(&r), |acc, i| acc.add(&project_level(&y, i).unwrap()).unwrap());
        assert_eq!(total, y);

        assert_eq!(shift(&y, 0).unwrap(), y);
        assert_eq!(shift(&x(&r, "0.v"), 2).unwrap(), x(&r, "2.v"));
        assert_eq!(shift(&shift(&y, 2).unwrap(), 3).unwrap(), shift(&y, 5).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let r = ray();
        let y = ModuleElem::from_terms(&r, [(a("0.v"), int(2)), (a("3.v"), crate::rational::ratio(-1, 3))]).unwrap();
        assert_eq!(y.to_string(), "2*x[0.v] - 1/3*x[3.v]");
        assert_eq!(ModuleElem::from_json(&r, &y.to_json()).unwrap(), y);
        assert!(ModuleElem::from_json(&r, &json!({"terms": [{"vertex": "0.w", "num": 1}]})).is_err());
    }
}
