pub mod budgets;
pub mod caps;
pub mod certificate;
pub mod combinatorial;
pub mod corpus;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod hrs;
pub mod hull;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod map;
pub mod points;
pub mod rational;
pub mod report;

pub use error::{Error, Result};
pub use graph::{Edge, Graph};
pub use map::CombinatorialMap;
pub use rational::Rational;
