//! Arithmetization kernel: codes, syntax, encoding and proof checking.

pub mod arith;
pub mod calculus;
pub mod code;
pub mod corpus;
pub mod encode;
pub mod kleene;
pub mod primes;
pub mod script;
pub mod syntax;
