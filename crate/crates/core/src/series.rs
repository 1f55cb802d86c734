//! Words over colors and truncated elements of the formal monoid algebra
//! `K<<C>>` over the rationals.
//!
//! A [`Series`] stores finitely many nonzero coefficients together with an
//! [`Order`]. `Order::Exact` means the stored terms are the whole element (a
//! noncommutative polynomial); `Order::Bounded(d)` means the coefficients
//! are known for words of length at most `d` and unknown beyond.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::addr::{validate_id, VertexAddr};
use crate::error::{Error, Result};
use crate::rational::{format_rational, get_rational, is_negative, put_rational, Rational};

/// A color, namespaced by the construction site that introduced it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColorId {
    pub site: String,
    pub kind: ColorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ColorKind {
    /// A base color such as the loop color `c` of a one-loop quiver.
    Named(String),
    /// The fresh color `c_{v,w}` of a tilde layer, `v` and `w` being inner vertices.
    Cross(VertexAddr, VertexAddr),
}

impl ColorId {
    pub fn named(site: impl Into<String>, symbol: impl Into<String>) -> Self {
        ColorId { site: site.into(), kind: ColorKind::Named(symbol.into()) }
    }

    pub fn cross(site: impl Into<String>, from: VertexAddr, to: VertexAddr) -> Self {
        ColorId { site: site.into(), kind: ColorKind::Cross(from, to) }
    }

    pub fn is_cross(&self) -> bool {
        matches!(self.kind, ColorKind::Cross(..))
    }
}

impl fmt::Display for ColorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ColorKind::Named(sym) => write!(f, "{sym}@{}", self.site),
            ColorKind::Cross(v, w) => write!(f, "c[{v}|{w}]@{}", self.site),
        }
    }
}

impl FromStr for ColorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidColor(s.to_string());
        let (kind, site) = s.rsplit_once('@').ok_or_else(bad)?;
        validate_id(site).map_err(|_| bad())?;
        if let Some(body) = kind.strip_prefix("c[").and_then(|k| k.strip_suffix(']')) {
            let (v, w) = body.split_once('|').ok_or_else(bad)?;
            Ok(ColorId::cross(site, v.parse().map_err(|_| bad())?, w.parse().map_err(|_| bad())?))
        } else {
            validate_id(kind).map_err(|_| bad())?;
            Ok(ColorId::named(site, kind))
        }
    }
}

/// An element of the free monoid `C*`. The empty word is the identity `1`.
///
/// Words are ordered by length first, then lexicographically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<ColorId>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(colors: Vec<ColorId>) -> Self {
        Word(colors)
    }

    pub fn letter(c: ColorId) -> Self {
        Word(vec![c])
    }

    pub fn power(c: &ColorId, k: usize) -> Self {
        Word(vec![c.clone(); k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn colors(&self) -> &[ColorId] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// All factorizations `self = a b`, including the trivial ones.
    pub fn splits(&self) -> impl Iterator<Item = (Word, Word)> + '_ {
        (0..=self.len()).map(move |k| (Word(self.0[..k].to_vec()), Word(self.0[k..].to_vec())))
    }
}

impl From<Vec<ColorId>> for Word {
    fn from(v: Vec<ColorId>) -> Self {
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let mut j = i + 1;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", self.0[i])?;
            if j - i > 1 {
                write!(f, "^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

/// Precision of a [`Series`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Exact,
    Bounded(usize),
}

impl Order {
    /// The sharper of two orders, `Exact` acting as infinity.
    pub fn min(self, other: Order) -> Order {
        match (self, other) {
            (Order::Exact, o) | (o, Order::Exact) => o,
            (Order::Bounded(a), Order::Bounded(b)) => Order::Bounded(a.min(b)),
        }
    }

    pub fn bound(self) -> Option<usize> {
        match self {
            Order::Exact => None,
            Order::Bounded(d) => Some(d),
        }
    }

    fn admits(self, len: usize) -> bool {
        self.bound().is_none_or(|d| len <= d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    terms: BTreeMap<Word, Rational>,
    order: Order,
}

impl Default for Series {
    fn default() -> Self {
        Series::zero()
    }
}

impl Series {
    pub fn zero() -> Self {
        Series { terms: BTreeMap::new(), order: Order::Exact }
    }

    pub fn one() -> Self {
        Series::monomial(Rational::one(), Word::empty())
    }

    pub fn word(w: Word) -> Self {
        Series::monomial(Rational::one(), w)
    }

    pub fn color(c: ColorId) -> Self {
        Series::word(Word::letter(c))
    }

    pub fn monomial(coeff: Rational, w: Word) -> Self {
        Series::from_terms([(w, coeff)], Order::Exact)
    }

    /// Collects terms, summing repeated words and discarding words longer
    /// than the bound of `order`.
    pub fn from_terms<I>(terms: I, order: Order) -> Self
    where
        I: IntoIterator<Item = (Word, Rational)>,
    {
        let mut map: BTreeMap<Word, Rational> = BTreeMap::new();
        for (w, c) in terms {
            if order.admits(w.len()) {
                *map.entry(w).or_insert_with(Rational::zero) += c;
            }
        }
        map.retain(|_, c| !c.is_zero());
        Series { terms: map, order }
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order == Order::Exact
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms in canonical word order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> BTreeSet<Word> {
        self.terms.keys().cloned().collect()
    }

    pub fn max_word_len(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    pub fn colors(&self) -> BTreeSet<ColorId> {
        self.terms.keys().flat_map(|w| w.colors().iter().cloned()).collect()
    }

    pub fn add(&self, other: &Series) -> Series {
        let order = self.order.min(other.order);
        Series::from_terms(
            self.terms.iter().chain(other.terms.iter()).map(|(w, c)| (w.clone(), c.clone())),
            order,
        )
    }

    pub fn scale(&self, k: &Rational) -> Series {
        Series::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), c * k)), self.order)
    }

    pub fn neg(&self) -> Series {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    /// Convolution over factorizations `w = w1 w2`.
    pub fn mul(&self, other: &Series) -> Series {
        let order = self.order.min(other.order);
        let mut out: Vec<(Word, Rational)> = Vec::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if order.admits(a.len() + b.len()) {
                    out.push((a.concat(b), ca * cb));
                }
            }
        }
        Series::from_terms(out, order)
    }

    /// Drops words longer than `d` and records the bound.
    pub fn truncate(&self, d: usize) -> Series {
        let order = self.order.min(Order::Bounded(d));
        Series::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), c.clone())), order)
    }

    /// Keeps only the terms whose word satisfies `keep`.
    pub fn filter_words(&self, keep: impl Fn(&Word) -> bool) -> Series {
        Series {
            terms: self.terms.iter().filter(|(w, _)| keep(w)).map(|(w, c)| (w.clone(), c.clone())).collect(),
            order: self.order,
        }
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let mut obj = serde_json::Map::new();
                obj.insert("word".into(), Value::from(w.colors().iter().map(|c| c.to_string()).collect::<Vec<_>>()));
                put_rational(&mut obj, c);
                Value::Object(obj)
            })
            .collect();
        let order = match self.order {
            Order::Exact => json!("exact"),
            Order::Bounded(d) => json!(d),
        };
        json!({ "order": order, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Series> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("series must be an object".into()))?;
        let order = match obj.get("order") {
            None => Order::Exact,
            Some(Value::String(s)) if s == "exact" => Order::Exact,
            Some(Value::Number(n)) => Order::Bounded(
                n.as_u64().ok_or_else(|| Error::Parse(format!("bad order {n}")))? as usize,
            ),
            Some(other) => return Err(Error::Parse(format!("bad order {other}"))),
        };
        let terms = obj
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("series needs a `terms` array".into()))?;
        let mut parsed = Vec::with_capacity(terms.len());
        for t in terms {
            let t = t.as_object().ok_or_else(|| Error::Parse("term must be an object".into()))?;
            let word = t
                .get("word")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("term needs a `word` array".into()))?
                .iter()
                .map(|c| {
                    c.as_str()
                        .ok_or_else(|| Error::Parse("color must be a string".into()))
                        .and_then(str::parse::<ColorId>)
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some(d) = order.bound() {
                if word.len() > d {
                    return Err(Error::Parse(format!("word of length {} exceeds order {d}", word.len())));
                }
            }
            parsed.push((Word::new(word), get_rational(t)?));
        }
        Ok(Series::from_terms(parsed, order))
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let neg = is_negative(c);
            let mag = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if w.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{}*{w}", format_rational(&mag))?;
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Series> for &Series {
            type Output = Series;
            fn $method(self, rhs: &Series) -> Series {
                Series::$method(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use proptest::prelude::*;

    fn c(sym: &str) -> ColorId {
        ColorId::named("t", sym)
    }

    fn s(terms: &[(i64, &[&str])]) -> Series {
        Series::from_terms(
            terms.iter().map(|(k, w)| (Word::new(w.iter().map(|x| c(x)).collect()), int(*k))),
            Order::Exact,
        )
    }

    #[test]
    fn color_strings_round_trip() {
        let cases = [ColorId::named("p", "c"), ColorId::cross("ray", "v".parse().unwrap(), "q/3.v".parse().unwrap())];
        for col in cases {
            let text = col.to_string();
            assert_eq!(text.parse::<ColorId>().unwrap(), col);
        }
        assert_eq!(ColorId::named("p", "c").to_string(), "c@p");
        assert!("c".parse::<ColorId>().is_err());
        assert!("c[v]@p".parse::<ColorId>().is_err());
    }

    #[test]
    fn add_cases() {
        let f = s(&[(1, &[]), (3, &["a"])]);
        assert_eq!(f.add(&Series::zero()), f);
        let cancel = s(&[(2, &["a"])]).add(&s(&[(-2, &["a"])]));
        assert!(cancel.is_zero());
        assert!(cancel.support().is_empty());

        let g = Series::from_terms([(Word::letter(c("b")), int(1))], Order::Bounded(1));
        let sum = s(&[(1, &[]), (1, &["a"])]).add(&g);
        assert_eq!(sum.order(), Order::Bounded(1));
        assert_eq!(sum, Series::from_terms(s(&[(1, &[]), (1, &["a"]), (1, &["b"])]).terms.clone(), Order::Bounded(1)));
    }

    #[test]
    fn mul_is_noncommutative() {
        let a = s(&[(1, &["a"])]);
        let b = s(&[(1, &["b"])]);
        assert_eq!(a.mul(&b), s(&[(1, &["a", "b"])]));
        assert_eq!(b.mul(&a), s(&[(1, &["b", "a"])]));
        assert_ne!(a.mul(&b), b.mul(&a));
        assert_eq!(a.mul(&Series::one()), a);
    }

    #[test]
    fn geometric_product_and_truncation() {
        let one_minus = s(&[(1, &[]), (-1, &["c"])]);
        let geo = s(&[(1, &[]), (1, &["c"]), (1, &["c", "c"])]);
        assert_eq!(one_minus.mul(&geo), s(&[(1, &[]), (-1, &["c", "c", "c"])]));
        let truncated = one_minus.truncate(2).mul(&geo);
        assert_eq!(truncated.order(), Order::Bounded(2));
        assert_eq!(truncated.to_string(), "1");
    }

    #[test]
    fn support_cases() {
        assert!(Series::zero().support().is_empty());
        let f = s(&[(2, &["a"]), (3, &["a", "b"])]);
        let expected: BTreeSet<Word> = [Word::letter(c("a")), Word::new(vec![c("a"), c("b")])].into_iter().collect();
        assert_eq!(f.support(), expected);
        assert!(f.add(&f.neg()).support().is_empty());
    }

    #[test]
    fn truncate_cases() {
        let geo = s(&[(1, &[]), (1, &["c"]), (1, &["c", "c"])]);
        let t = geo.truncate(1);
        assert_eq!(t.order(), Order::Bounded(1));
        assert_eq!(t.support().len(), 2);
        assert_eq!(t.truncate(1), t);
        assert_eq!(geo.truncate(5).terms, geo.terms);
        assert_eq!(t.truncate(3).order(), Order::Bounded(1));
    }

    #[test]
    fn display_and_json() {
        let f = s(&[(1, &[]), (-1, &["c"]), (1, &["c", "c"]), (2, &["a", "c"])]);
        assert_eq!(f.to_string(), "1 - c@t + 2*a@t*c@t + c@t^2");
        let back = Series::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        let b = f.truncate(1);
        assert_eq!(b.to_json()["order"], json!(1));
        assert_eq!(Series::from_json(&b.to_json()).unwrap(), b);
    }

    /// Dense univariate power-series product, independent of `Series::mul`.
    fn dense_mul(a: &[i64], b: &[i64], d: usize) -> Vec<i64> {
        let mut out = vec![0; d + 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if i + j <= d {
                    out[i + j] += x * y;
                }
            }
        }
        out
    }

    fn from_dense(a: &[i64]) -> Series {
        Series::from_terms(a.iter().enumerate().map(|(k, x)| (Word::power(&c("c"), k), int(*x))), Order::Exact)
    }

    fn arb_series(max_len: usize) -> impl Strategy<Value = Series> {
        let word = prop::collection::vec(prop::sample::select(vec!["a", "b", "c"]), 0..=max_len);
        prop::collection::vec((word, -3i64..=3), 0..6).prop_map(|terms| {
            Series::from_terms(terms.into_iter().map(|(w, k)| (Word::new(w.into_iter().map(c).collect()), int(k))), Order::Exact)
        })
    }

    proptest! {
        #[test]
        fn univariate_agrees_with_dense(a in prop::collection::vec(-4i64..=4, 0..6), b in prop::collection::vec(-4i64..=4, 0..6), d in 0usize..8) {
            let got = from_dense(&a).mul(&from_dense(&b)).truncate(d);
            let want = from_dense(&dense_mul(&a, &b, d)).truncate(d);
            prop_assert_eq!(got, want);
        }

        #[test]
        fn associative_at_truncation(f in arb_series(3), g in arb_series(3), h in arb_series(3), d in 0usize..6) {
            let (f, g, h) = (f.truncate(d + 1), g.truncate(d + 2), h.truncate(d));
            let left = f.mul(&g).mul(&h).truncate(d);
            let right = f.mul(&g.mul(&h)).truncate(d);
            prop_assert_eq!(left, right);
        }

        #[test]
        fn distributive(f in arb_series(3), g in arb_series(3), h in arb_series(3)) {
            prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        }

        #[test]
        fn product_support_is_within_pairwise_concatenations(f in arb_series(2), g in arb_series(2)) {
            let allowed: BTreeSet<Word> = f.support().iter()
                .flat_map(|a| g.support().into_iter().map(move |b| a.concat(&b)))
                .collect();
            prop_assert!(f.mul(&g).support().is_subset(&allowed));
        }
    }
}
