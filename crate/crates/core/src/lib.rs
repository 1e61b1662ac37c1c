pub mod cohomology;
pub mod config;
pub mod geometry;
pub mod index_ring;
pub mod linalg;
pub mod pair_homology;
pub mod rep;
pub mod report;
pub mod spectral;
pub mod zgmodule;
