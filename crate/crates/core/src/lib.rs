//! Precategories presented by polygraphs: normal forms, composition, free
//! functors, supports and polyplex shapes.

pub mod cli;
pub mod compose;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod functor;
pub mod io;
pub mod model;
pub mod oracle;
pub mod polyplex;
pub mod presheaf;
pub mod sample;
pub mod support;

pub use error::{Error, Result};
pub use model::{Cell, Element, GenRef, Polygraph, Sign};
