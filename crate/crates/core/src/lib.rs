//! Exact analysis of secure network codes on small relay networks.
//!
//! Everything in this crate is pure computation over exact residues and
//! exact rational probability tables:
//!
//! - [`algebra`]: residues in `Z_d` and `F_q`, matrices over them, and a
//!   systematic MDS generator.
//! - [`info`]: joint distributions with exact rational weights, entropies and
//!   Han-type inequality checkers.
//! - [`codes`]: one-hop relay codes stored as lookup tables, with the
//!   scalar-linear, standard non-linear, anti-Latin and vector-linear
//!   constructions.
//! - [`attack`]: wiretap strategy enumeration, exact simulation of Eve's view
//!   and security classification.
//! - [`antilatin`]: anti-Latin squares, decodability via Ξ-sets, pair search
//!   and mutual-set search.
//! - [`network`]: mincuts of wiretap networks, capacity formulas for r-wiretap
//!   and layered unicast relay networks, and a wiretap channel II code.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the
//! command-line driver live in the `relaysec` crate.
#![no_std]

extern crate alloc;

pub mod algebra;
pub mod antilatin;
pub mod attack;
pub mod codes;
pub mod info;
pub mod network;

mod radix;
