use thiserror::Error;

/// Errors raised by every fallible operation in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("duplicate element `{0}`")]
    DuplicateElement(String),

    #[error("cover relation contains a cycle: {}", .0.join(" -> "))]
    Cycle(Vec<String>),

    #[error("relation is not a partial order: {0}")]
    NotPartialOrder(String),

    #[error("poset has {size} elements, enumeration cap is {cap}")]
    EnumerationCap { size: usize, cap: usize },

    #[error("points `{0}` and `{1}` are not separated by any open set")]
    Indistinguishable(String, String),

    #[error("empty poset")]
    EmptyPoset,

    #[error("invalid identifier `{0}`")]
    InvalidId(String),

    #[error("invalid vertex address `{0}`")]
    InvalidAddress(String),

    #[error("invalid color `{0}`")]
    InvalidColor(String),

    #[error("invalid quiver expression: {0}")]
    InvalidExpr(String),

    #[error("vertex `{0}` lies outside the materialized window")]
    OutsideWindow(String),

    #[error("element does not fit the span window of budget {0}")]
    WindowMismatch(u32),

    #[error("budget {budget} is insufficient, {needed} required")]
    Budget { needed: u32, budget: u32 },

    #[error("module element belongs to a different quiver")]
    HostMismatch,

    #[error("operation requires a tilde quiver at the top level")]
    NotTilde,

    #[error("operation requires a nonzero module element")]
    ZeroElement,

    #[error("element is not in M_>={0}")]
    NotInFiltration(u32),

    #[error("series has bounded order {0}; an exact series is required")]
    InexactSeries(usize),

    #[error("color `{0}` is not a color of the inner quiver")]
    ForeignColor(String),

    #[error("expression is not a poset realization: {0}")]
    NotRealization(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by an insufficient materialization budget.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
