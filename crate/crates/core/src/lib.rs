pub mod algebra;
pub mod error;
pub mod inversion;
pub mod rings;
pub mod seminorm;
pub mod suite;
pub mod topology;
