//! Exact arithmetic for delta-rings and prisms over truncated power-series windows.
//!
//! Everything in this crate is integer arithmetic: scalars live in `Z/p^N` with an
//! explicit precision ledger, multivariate series are truncated at a total-degree
//! cap `D`, and residue computations land in `F_p[T_1..T_n]` with no truncation at
//! all. There are no floats anywhere, and the only randomness is in explicitly
//! seeded samplers, so every result is reproducible bit for bit.
//!
//! The layering is strictly bottom-up:
//!
//! * [`arith`] — scalars, monomials, truncated series, residue polynomials;
//! * [`exactalg`] — linear algebra over `F_p` and `Z/p^N` (Howell form);
//! * [`groebner`] — Buchberger, dimension, membership, quotient bases;
//! * [`delta`] — Frobenius lifts and the delta operator;
//! * [`prism`] — orientation verification, normalization, classification;
//! * [`localring`] — embedding dimension, Hilbert–Samuel, regularity verdicts;
//! * [`koszul`] — Koszul homology windows and Hodge–Tate ranks;
//! * [`kunzartin`] — Frobenius flatness on finite local algebras;
//! * [`pdenv`] — truncated divided-power envelopes;
//! * [`cohen`] — presentations of complete local quotients and their automorphisms;
//! * [`reader`] — the `prismlab-spec v1` document format.

pub mod arith;
pub mod cohen;
pub mod delta;
pub mod exactalg;
pub mod groebner;
pub mod koszul;
pub mod kunzartin;
pub mod localring;
pub mod par;
pub mod pdenv;
pub mod prism;
pub mod reader;
