//! Exact, finite models of the algebraic objects around Steinberg pro-groups.
//!
//! Everything here is `no_std` with `alloc`: root systems, finite coefficient
//! rings, generalized matrix algebras and their homotopes, colocalization
//! towers, odd form algebras, realizations of groups with commutator
//! relations, identity verifiers and Todd–Coxeter coset enumeration. IO,
//! configuration and reporting live in the companion `stpro` crate.
#![no_std]

extern crate alloc;

mod lp;
pub mod algebra;
pub mod check;
pub mod coset;
pub mod cosheaf;
pub mod freegroup;
pub mod gauss;
pub mod gluing;
pub mod oddform;
pub mod presentation;
pub mod realize;
pub mod matrix;
pub mod ring;
pub mod rootsys;
pub mod relative;
pub mod steinberg;
pub mod tower;
