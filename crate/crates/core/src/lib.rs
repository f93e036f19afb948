pub mod analysis;
pub mod coeffgen;
pub mod flux;
pub mod limiter;
pub mod output;
pub mod problems;
pub mod solver;
pub mod timeint;
pub mod weno;
