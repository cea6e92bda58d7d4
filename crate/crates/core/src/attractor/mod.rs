//! Attractors of the graph-directed systems attached to a spec.

pub mod desc;
pub mod ifs;
pub mod union;

pub use desc::{attractor_member, AttractorDesc, Tail};
pub use ifs::{hutchinson_step, iterate_hutchinson, Gdifs, IterReport, NodeImage, Side, TailGroup, Verdict};
pub use union::{between, rational_between, CircArc, IntervalUnion};
