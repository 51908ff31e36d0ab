//! Orders of algebraic numbers modulo primes in Galois number fields:
//! forbidden-divisor sets, order computation with gcd profiles, density and
//! probability statistics, and the batch prime scans behind them.
//!
//! The crate is organized around five layers:
//!
//! * [`intarith`] — exact integer services (primality, factorization,
//!   divisors, cyclotomic polynomials).
//! * [`numfield`] — Galois number fields as explicit polynomial quotient
//!   data: residue arithmetic mod (P, p), splitting invariants, conjugation,
//!   the rank condition, and Archimedean size.
//! * [`forbidden`] — the forbidden divisors D_{h,δ}(p) of p^h − 1 and the
//!   candidate set of divisors that can still realize an order below p.
//! * [`order`] — orders modulo p and modulo individual primes above p,
//!   gcd profiles, and Archimedean lower bounds.
//! * [`scan`] — batch experiments over prime ranges, deterministic and
//!   data-parallel.

pub mod error;
pub mod forbidden;
pub mod intarith;
pub mod numfield;
pub mod order;
pub mod scan;

pub use error::{Error, Result};
