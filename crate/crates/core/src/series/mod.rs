//! Truncated power series over `Q`.
//!
//! Precision is a total-degree bound: a series of precision `N` knows every
//! coefficient of degree `< N` and nothing beyond. Binary operations return
//! the smaller of the two precisions.

mod multi;
mod uni;

pub use multi::{BiSeries, MvSeries, TriSeries};
pub use uni::{LaurentTail, UniSeries};
