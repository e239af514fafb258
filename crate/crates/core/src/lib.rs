pub mod certificate;
pub mod corpus;
pub mod coset;
pub mod determinant;
pub mod driver;
pub mod error;
pub mod fox;
pub mod laurent;
pub mod lattice;
pub mod presentation;
pub mod rewrite;
pub mod vanish;
pub mod word;

pub use error::{Error, Result};
pub use presentation::{GroupPresentation, MagnusStats, Substitution};
pub use word::{Letter, Syllable, Word};
