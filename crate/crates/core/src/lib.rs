//! Exact symbolic verification of operadic Lax representations for the
//! harmonic oscillator and of the quantum Jacobi operators built from them.

pub mod scalars;
pub mod weyl;
pub mod syntax;
pub mod operad;
pub mod oscillator;
pub mod report;
pub mod bianchi;
pub mod jacobi;
pub mod cli;
