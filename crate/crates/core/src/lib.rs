//! Exact solvers for trembling-hand perfect and proper equilibria of potential
//! games, driven by a symbolic tremble parameter ε.

pub mod circuit;
pub mod eps;
pub mod linalg;
pub mod dynamics;
pub mod game;
pub mod efg;
pub mod congestion;
pub mod polymatrix;
pub mod gamegen;
pub mod oracles;
pub mod strongpoly;
