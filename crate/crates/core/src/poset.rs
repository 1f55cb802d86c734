//! Finite partially ordered sets and their upward-closed-set topology.
//!
//! A [`Poset`] keeps its elements sorted lexicographically and stores the
//! order relation as a dense boolean matrix, which is plenty for the
//! handful of elements a realization can handle.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of elements for [`Poset::upward_closed_sets`].
pub const ENUMERATION_CAP: usize = 16;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    elements: Vec<String>,
    leq: Vec<Vec<bool>>,
}

/// An upward-closed subset of a host poset; the open sets of its topology.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct UpSet {
    pub members: BTreeSet<String>,
}

impl UpSet {
    pub fn new<I, S>(members: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        UpSet { members: members.into_iter().map(Into::into).collect() }
    }

    pub fn contains(&self, id: &str) -> bool {
        self.members.contains(id)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn sorted_unique(elements: Vec<String>) -> Result<Vec<String>> {
    let mut sorted = elements;
    sorted.sort();
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::DuplicateElement(pair[0].clone()));
        }
    }
    Ok(sorted)
}

impl Poset {
    /// Builds a poset from its cover relation, taking the reflexive-transitive
    /// closure. Fails on unknown ids and on cyclic covers.
    pub fn from_hasse<I, S, C, A, B>(elements: I, covers: C) -> Result<Poset>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
        C: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let elements = sorted_unique(elements.into_iter().map(Into::into).collect())?;
        let n = elements.len();
        let index = |id: &str| {
            elements
                .binary_search_by(|e| e.as_str().cmp(id))
                .map_err(|_| Error::UnknownElement(id.to_string()))
        };
        let mut succ = vec![BTreeSet::new(); n];
        for (a, b) in covers {
            let (i, j) = (index(a.as_ref())?, index(b.as_ref())?);
            succ[i].insert(j);
        }
        if let Some(cycle) = find_cycle(&succ) {
            return Err(Error::Cycle(cycle.into_iter().map(|i| elements[i].clone()).collect()));
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            // depth-first reachability from i
            let mut stack = vec![i];
            while let Some(k) = stack.pop() {
                if !row[k] {
                    row[k] = true;
                    stack.extend(succ[k].iter().copied());
                }
            }
        }
        Ok(Poset { elements, leq })
    }

    /// Builds a poset from an arbitrary relation by reflexive-transitive closure.
    /// Fails if the closure is not antisymmetric.
    pub fn from_relation<I, S, C, A, B>(elements: I, pairs: C) -> Result<Poset>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
        C: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let elements = sorted_unique(elements.into_iter().map(Into::into).collect())?;
        let n = elements.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in pairs {
            let i = index_in(&elements, a.as_ref())?;
            let j = index_in(&elements, b.as_ref())?;
            leq[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::NotPartialOrder(format!(
                        "`{}` and `{}` are mutually related",
                        elements[i], elements[j]
                    )));
                }
            }
        }
        Ok(Poset { elements, leq })
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        index_in(&self.elements, id).ok()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index_of(id).is_some()
    }

    /// `a <= b`; false when either id is unknown.
    pub fn leq(&self, a: &str, b: &str) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.leq[i][j],
            _ => false,
        }
    }

    pub fn lt(&self, a: &str, b: &str) -> bool {
        a != b && self.leq(a, b)
    }

    /// All pairs `(a, b)` with `a <= b`, sorted lexicographically.
    pub fn leq_pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (i, a) in self.elements.iter().enumerate() {
            for (j, b) in self.elements.iter().enumerate() {
                if self.leq[i][j] {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out
    }

    /// The cover relation (Hasse diagram edges), sorted lexicographically.
    pub fn covers(&self) -> Vec<(String, String)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.leq[i][j] {
                    continue;
                }
                let between = (0..n).any(|k| k != i && k != j && self.leq[i][k] && self.leq[k][j]);
                if !between {
                    out.push((self.elements[i].clone(), self.elements[j].clone()));
                }
            }
        }
        out
    }

    pub fn is_maximal(&self, id: &str) -> bool {
        match self.index_of(id) {
            Some(i) => (0..self.len()).all(|j| j == i || !self.leq[i][j]),
            None => false,
        }
    }

    /// Elements strictly above `id`, in element order.
    pub fn strictly_above(&self, id: &str) -> Vec<&str> {
        let Some(i) = self.index_of(id) else {
            return Vec::new();
        };
        (0..self.len())
            .filter(|&j| j != i && self.leq[i][j])
            .map(|j| self.elements[j].as_str())
            .collect()
    }

    /// Enumerates every upward-closed subset (the open sets), up to [`ENUMERATION_CAP`].
    pub fn upward_closed_sets(&self) -> Result<Vec<UpSet>> {
        self.upward_closed_sets_capped(ENUMERATION_CAP)
    }

    pub fn upward_closed_sets_capped(&self, cap: usize) -> Result<Vec<UpSet>> {
        let n = self.len();
        if n > cap || n >= usize::BITS as usize {
            return Err(Error::EnumerationCap { size: n, cap });
        }
        // up[i] = bitmask of elements >= i
        let up: Vec<u64> = (0..n)
            .map(|i| (0..n).filter(|&j| self.leq[i][j]).fold(0u64, |m, j| m | (1 << j)))
            .collect();
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << n) {
            let closed = (0..n).all(|i| mask & (1 << i) == 0 || up[i] & !mask == 0);
            if closed {
                out.push(UpSet {
                    members: (0..n)
                        .filter(|&i| mask & (1 << i) != 0)
                        .map(|i| self.elements[i].clone())
                        .collect(),
                });
            }
        }
        Ok(out)
    }

    /// True iff `set` is upward closed in this poset.
    pub fn is_upward_closed(&self, set: &UpSet) -> bool {
        set.members.iter().all(|a| {
            self.contains(a)
                && self.elements.iter().all(|b| !self.leq(a, b) || set.contains(b))
        })
    }

    /// Recovers the specialization order from a family of open sets:
    /// `a <= b` iff every open set containing `a` also contains `b`.
    pub fn specialization_order<I, S>(elements: I, opens: &[UpSet]) -> Result<Poset>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let elements = sorted_unique(elements.into_iter().map(Into::into).collect())?;
        for open in opens {
            if let Some(bad) = open.members.iter().find(|m| index_in(&elements, m).is_err()) {
                return Err(Error::UnknownElement(bad.clone()));
            }
        }
        let n = elements.len();
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                leq[i][j] = opens
                    .iter()
                    .all(|u| !u.contains(&elements[i]) || u.contains(&elements[j]));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::Indistinguishable(elements[i].clone(), elements[j].clone()));
                }
            }
        }
        Ok(Poset { elements, leq })
    }

    /// Searches for an order isomorphism `self -> other`. The first bijection
    /// in lexicographic backtracking order is returned.
    pub fn find_isomorphism(&self, other: &Poset) -> Option<BTreeMap<String, String>> {
        let n = self.len();
        if n != other.len() {
            return None;
        }
        let signature = |p: &Poset, i: usize| {
            let up = (0..n).filter(|&j| p.leq[i][j]).count();
            let down = (0..n).filter(|&j| p.leq[j][i]).count();
            (up, down)
        };
        let sig_self: Vec<_> = (0..n).map(|i| signature(self, i)).collect();
        let sig_other: Vec<_> = (0..n).map(|i| signature(other, i)).collect();
        let mut a = sig_self.clone();
        let mut b = sig_other.clone();
        a.sort();
        b.sort();
        if a != b {
            return None;
        }

        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn extend(
            k: usize,
            p: &Poset,
            q: &Poset,
            sp: &[(usize, usize)],
            sq: &[(usize, usize)],
            map: &mut [usize],
            used: &mut [bool],
        ) -> bool {
            if k == p.len() {
                return true;
            }
            for cand in 0..q.len() {
                if used[cand] || sp[k] != sq[cand] {
                    continue;
                }
                let consistent = (0..k).all(|prev| {
                    p.leq[prev][k] == q.leq[map[prev]][cand] && p.leq[k][prev] == q.leq[cand][map[prev]]
                });
                if !consistent {
                    continue;
                }
                map[k] = cand;
                used[cand] = true;
                if extend(k + 1, p, q, sp, sq, map, used) {
                    return true;
                }
                used[cand] = false;
            }
            false
        }
        if !extend(0, self, other, &sig_self, &sig_other, &mut map, &mut used) {
            return None;
        }
        Some(
            map.iter()
                .enumerate()
                .map(|(i, &j)| (self.elements[i].clone(), other.elements[j].clone()))
                .collect(),
        )
    }

    pub fn is_isomorphic(&self, other: &Poset) -> bool {
        self.find_isomorphism(other).is_some()
    }

    /// Whether this poset is the prime spectrum of a commutative noetherian
    /// ring, i.e. it has no strict chain `x < y < z`.
    pub fn cn_realizable(&self) -> bool {
        let n = self.len();
        !(0..n).any(|y| {
            let below = (0..n).any(|x| x != y && self.leq[x][y]);
            let above = (0..n).any(|z| z != y && self.leq[y][z]);
            below && above
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PosetOutput::from(self)).expect("poset serializes")
    }

    /// Parses the input form `{"elements": [...], "hasse": [[a, b], ...]}`.
    /// The output form with `"leq"` is accepted as well.
    pub fn from_json_str(text: &str) -> Result<Poset> {
        let input: PosetInput = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        match (input.hasse, input.leq) {
            (Some(h), None) => Poset::from_hasse(input.elements, h),
            (None, Some(l)) => {
                let p = Poset::from_relation(input.elements, l.iter().map(|(a, b)| (a, b)))?;
                let given: BTreeSet<_> = l.into_iter().collect();
                let closure: BTreeSet<_> = p.leq_pairs().into_iter().collect();
                if !closure.is_subset(&given) || !given.is_subset(&closure) {
                    return Err(Error::NotPartialOrder("`leq` is not reflexive and transitive".into()));
                }
                Ok(p)
            }
            (None, None) => Poset::from_hasse(input.elements, Vec::<(String, String)>::new()),
            (Some(_), Some(_)) => Err(Error::Parse("give either `hasse` or `leq`, not both".into())),
        }
    }
}

fn index_in(elements: &[String], id: &str) -> Result<usize> {
    elements
        .binary_search_by(|e| e.as_str().cmp(id))
        .map_err(|_| Error::UnknownElement(id.to_string()))
}

/// Returns the vertices of some directed cycle, closing back on its first vertex.
fn find_cycle(succ: &[BTreeSet<usize>]) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    fn visit(v: usize, succ: &[BTreeSet<usize>], mark: &mut [Mark], stack: &mut Vec<usize>) -> Option<Vec<usize>> {
        mark[v] = Mark::Active;
        stack.push(v);
        for &w in &succ[v] {
            match mark[w] {
                Mark::Active => {
                    let start = stack.iter().position(|&x| x == w).unwrap();
                    let mut cycle = stack[start..].to_vec();
                    cycle.push(w);
                    return Some(cycle);
                }
                Mark::New => {
                    if let Some(c) = visit(w, succ, mark, stack) {
                        return Some(c);
                    }
                }
                Mark::Done => {}
            }
        }
        stack.pop();
        mark[v] = Mark::Done;
        None
    }
    let mut mark = vec![Mark::New; succ.len()];
    let mut stack = Vec::new();
    for v in 0..succ.len() {
        if mark[v] == Mark::New {
            if let Some(c) = visit(v, succ, &mut mark, &mut stack) {
                return Some(c);
            }
        }
    }
    None
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("elements", &self.elements)
            .field("covers", &self.covers())
            .finish()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PosetInput {
    elements: Vec<String>,
    #[serde(default)]
    hasse: Option<Vec<(String, String)>>,
    #[serde(default)]
    leq: Option<Vec<(String, String)>>,
}

#[derive(Serialize)]
struct PosetOutput {
    elements: Vec<String>,
    leq: Vec<(String, String)>,
}

impl From<&Poset> for PosetOutput {
    fn from(p: &Poset) -> Self {
        PosetOutput { elements: p.elements.clone(), leq: p.leq_pairs() }
    }
}

impl Serialize for Poset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PosetOutput::from(self).serialize(s)
    }
}
