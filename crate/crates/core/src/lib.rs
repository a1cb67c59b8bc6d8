//! Deductive verification of Hoare triples and n-ary relational properties
//! for a small While language with procedures and pointers.
//!
//! The pipeline is: [`parser`] reads `.rl` sources into the [`ast`];
//! [`vcgen`] and [`relcheck`] turn goals into first-order [`formula`]s;
//! [`smt`] discharges them with an external solver. [`interp`] and
//! [`testkit`] provide the executable semantics used to test all of that.

pub mod ast;
pub mod formula;
pub mod interp;
pub mod mem;
pub mod parser;
pub mod relcheck;
pub mod smt;
pub mod testkit;
pub mod vcgen;
