//! Exact counting and enumeration of linear extensions of finite posets, driven by
//! modular partitions of the incomparability graph.
//!
//! Elements are `0..n` throughout the library API; the JSON formats and the
//! command-line tool use `1..=n`.

pub mod bitset;
pub mod counting;
pub mod enumeration;
pub mod error;
pub mod instances;
pub mod io;
pub mod modular;
pub mod netbuild;
pub mod poset;
pub mod tournament;

pub use counting::{count, count_le, Count, CountOptions, CountReport, Strategy};
pub use error::{Error, Result};
pub use poset::{Poset, UndirectedGraph};
