//! Workbench for first-order interpretations between finite structures and
//! the hereditarily finite set constructions they act on.
//!
//! The crate is organized around five areas:
//!
//! * [`logic`] — signatures, formulas, parsing, Tarskian evaluation, and
//!   bounded enumeration of definable relations;
//! * [`model`] — finite structures, congruences, quotients, and a brute-force
//!   isomorphism oracle;
//! * [`interp`] — interpretations as data: formula translation, interpreted
//!   model construction, composition, and the mutual / bi-interpretation /
//!   synonymy checks;
//! * [`hf`] — hereditarily finite sets, Ackermann coding, Mostowski collapse,
//!   coded pairs, and the double-membership kernel;
//! * [`mathias`] — power-tower integers, growth profiles, fruitful-class
//!   clauses, and the Zermelo tower substitution.

pub mod hf;
pub mod interp;
pub mod logic;
pub mod mathias;
pub mod model;
pub mod selftest;
