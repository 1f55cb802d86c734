//! Identifiers and vertex addresses.
//!
//! Addresses are self-describing strings so that colors and module elements
//! can be parsed without their host quiver:
//!
//! * a base vertex is its bare name, e.g. `v`;
//! * a tilde layer is `<level>.<inner>`, e.g. `3.v`;
//! * a disjoint-union component is `<tag>/<inner>`, e.g. `q/0.v`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const RESERVED: &[char] = &['.', '/', '|', '[', ']', '@', '*', '^', ',', '+', '"'];

/// Checks that `id` can be used as a site, tag, vertex name or color symbol.
pub fn validate_id(id: &str) -> Result<()> {
    let ok = !id.is_empty()
        && !id.chars().any(|c| c.is_whitespace() || c.is_control() || RESERVED.contains(&c))
        && !id.starts_with('-');
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidId(id.to_string()))
    }
}

/// Position of a vertex inside a quiver expression.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexAddr {
    Base(String),
    Level(u32, Box<VertexAddr>),
    Tagged(String, Box<VertexAddr>),
}

impl VertexAddr {
    pub fn base(name: impl Into<String>) -> Self {
        VertexAddr::Base(name.into())
    }

    pub fn level(i: u32, inner: VertexAddr) -> Self {
        VertexAddr::Level(i, Box::new(inner))
    }

    pub fn tagged(tag: impl Into<String>, inner: VertexAddr) -> Self {
        VertexAddr::Tagged(tag.into(), Box::new(inner))
    }

    /// Outermost tilde level, if this address starts with one.
    pub fn top_level(&self) -> Option<u32> {
        match self {
            VertexAddr::Level(i, _) => Some(*i),
            _ => None,
        }
    }

    /// Address inside the outermost tilde layer.
    pub fn top_inner(&self) -> Option<&VertexAddr> {
        match self {
            VertexAddr::Level(_, inner) => Some(inner),
            _ => None,
        }
    }

    /// Largest level coordinate anywhere in the address; zero if none.
    pub fn max_level(&self) -> u32 {
        match self {
            VertexAddr::Base(_) => 0,
            VertexAddr::Level(i, inner) => (*i).max(inner.max_level()),
            VertexAddr::Tagged(_, inner) => inner.max_level(),
        }
    }

    /// Same address with the outermost level replaced by `f(level)`.
    pub(crate) fn map_top_level(&self, f: impl FnOnce(u32) -> u32) -> Option<VertexAddr> {
        match self {
            VertexAddr::Level(i, inner) => Some(VertexAddr::Level(f(*i), inner.clone())),
            _ => None,
        }
    }
}

impl fmt::Display for VertexAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexAddr::Base(name) => write!(f, "{name}"),
            VertexAddr::Level(i, inner) => write!(f, "{i}.{inner}"),
            VertexAddr::Tagged(tag, inner) => write!(f, "{tag}/{inner}"),
        }
    }
}

impl FromStr for VertexAddr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidAddress(s.to_string());
        match s.find(['.', '/']) {
            None => {
                validate_id(s).map_err(|_| bad())?;
                Ok(VertexAddr::Base(s.to_string()))
            }
            Some(pos) => {
                let (head, rest) = (&s[..pos], &s[pos + 1..]);
                let inner: VertexAddr = rest.parse().map_err(|_| bad())?;
                if s.as_bytes()[pos] == b'.' {
                    if head.is_empty() || !head.bytes().all(|b| b.is_ascii_digit()) {
                        return Err(bad());
                    }
                    let level = head.parse().map_err(|_| bad())?;
                    Ok(VertexAddr::level(level, inner))
                } else {
                    validate_id(head).map_err(|_| bad())?;
                    Ok(VertexAddr::tagged(head, inner))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        for s in ["v", "3.v", "q/0.r/v", "p/12.q/3.r/v", "a-b_c'"] {
            let a: VertexAddr = s.parse().unwrap();
            assert_eq!(a.to_string(), s);
        }
        let a: VertexAddr = "p/12.q/3.v".parse().unwrap();
        assert_eq!(a.max_level(), 12);
        assert_eq!(a.top_level(), None);
        for bad in ["", "x.v", ".v", "3.", "a//v", "a b", "3.v|w"] {
            assert!(bad.parse::<VertexAddr>().is_err(), "{bad}");
        }
    }

    #[test]
    fn canonical_order_puts_lower_levels_first() {
        let mut v: Vec<VertexAddr> = ["2.v", "0.w", "10.v", "0.v", "1.w"].iter().map(|s| s.parse().unwrap()).collect();
        v.sort();
        let s: Vec<String> = v.iter().map(|a| a.to_string()).collect();
        assert_eq!(s, ["0.v", "0.w", "1.w", "2.v", "10.v"]);
    }
}
