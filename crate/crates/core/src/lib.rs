//! Virtual knot theory with exact arithmetic: Gauss codes and their planarity,
//! plane-graph diagrams with virtual crossings, the generalized Reidemeister
//! moves, and bracket, quandle, Alexander, rotational state-sum and Vassiliev
//! invariants.

pub mod algebra;
pub mod codes;
pub mod diagram;
pub mod fixtures;
pub mod fuzz;
pub mod panel;
pub mod poly;
pub mod quantum;
pub mod skein;
pub mod vassiliev;

pub use codes::{Flavor, Passage, SignedGaussCode};
pub use diagram::{Diagram, VertexKind};
pub use poly::{LaurentPoly, MultiPoly};
