//! Exact computational algebra for integral lattices with finite group actions.
//!
//! The crate decides, for semisimple groups of the form `H^m/C` over an
//! algebraically closed field, whether the group is stably Cayley, and it
//! computes the Tate–Shafarevich obstruction groups `Sh²(Γ, L)` that witness
//! the negative cases.  All arithmetic is exact (arbitrary-precision
//! integers); there is no floating point anywhere.
//!
//! Module map:
//!
//! * [`intlinalg`] — integer matrices, Smith/Hermite normal forms, kernels,
//!   cokernels and homology of short complexes of free abelian groups.
//! * [`groups`] — finite groups realized as unimodular integer matrices.
//! * [`glattice`] — lattices `Z^d` carrying a matrix-group action.
//! * [`cohomology`] — `H⁰..H³`, cyclic Tate groups, restriction maps, `Sh²`
//!   and the obstruction search over small elementary-abelian subgroups.
//! * [`rootdata`] — root and weight lattices of types A, B, C, D, G₂ and the
//!   character lattices of quotients `H^m/C`.
//! * [`witnesses`] — the explicit non-quasi-invertible lattices together with
//!   their verification computations.
//! * [`classify`] — subgroup standardization, coordinate-subspace tests and
//!   the stably-Cayley decision procedure.

// Index loops are the house style for the matrix-heavy code here.
#![allow(clippy::needless_range_loop)]

pub mod classify;
pub mod cohomology;
pub mod glattice;
pub mod groups;
pub mod intlinalg;
pub mod rootdata;
pub mod witnesses;
