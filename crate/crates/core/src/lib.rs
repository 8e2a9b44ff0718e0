//! Truncated Besov and Triebel–Lizorkin sequence spaces: norms, embedding
//! predicates and an experimental harness.

pub mod norms;
pub mod embeddings;
pub mod gm;
pub mod interpolation;
pub mod params;
pub mod sequences;
pub mod verify;
pub mod cli;
