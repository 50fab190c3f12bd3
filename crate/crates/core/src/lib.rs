pub mod cli;
pub mod cospectral;
pub mod cover;
pub mod cyclotomic;
pub mod dot;
pub mod error;
pub mod example25;
pub mod field;
pub mod graph;
pub mod io;
pub mod iso;
pub mod paley;
pub mod refine;
pub mod search;
pub mod spectrum;

pub use error::{Error, Result};
