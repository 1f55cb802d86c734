//! Colored quivers, the formal monoid algebra acting on them, and the
//! realization of finite posets as atom spectra of quiver-built categories.

pub mod addr;
pub mod construct;
pub mod error;
pub mod modact;
pub mod poset;
pub mod quiver;
pub mod rational;
pub mod sample;
pub mod series;
pub mod span;
pub mod suite;
pub mod verify;

pub use addr::VertexAddr;
pub use error::{Error, Result};
pub use poset::{Poset, UpSet};
pub use quiver::{materialize, MaterializedQuiver, QuiverExpr};
pub use rational::Rational;
pub use series::{ColorId, ColorKind, Order, Series, Word};
pub use modact::{act, ModuleElem};
pub use span::{cyclic_span, SpanBasis};
pub use construct::{component, expected_spectrum, in_ideal, nu, pi, realize};
pub use verify::{compressibility_probe, decompose, divide, Check, Decomposition, Division, Report};
pub use suite::{check, CheckReport, Config};
