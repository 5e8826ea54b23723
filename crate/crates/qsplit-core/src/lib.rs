//! Computational engine for finite Bratteli diagrams with unitary connections.
//!
//! The crate models towers of finite semisimple C*-categories connected by
//! bi-faithful functors, 1-cells with unitary connections between such towers,
//! and Q-systems living on them. Its centerpiece is a constructive splitting:
//! given a Q-system Q on a tower, it builds a new tower of correspondence
//! categories, a dualizable 1-cell X into it, and a unitary isomorphism
//! Q ≅ X̄ ⊠ X, certifying every step to machine tolerance.
//!
//! Module layering, bottom up:
//!
//! * [`numkit`] — dense complex-matrix kernels (Jacobi eigensolver, spectral
//!   functional calculus, Gram orthonormalization, residual metrics).
//! * [`sscat`] — finite semisimple C*-categories: objects as multiplicity
//!   vectors, morphisms as per-simple blocks.
//! * [`funcalc`] — *-linear functors between such categories and natural
//!   transformations, with whiskering and canonical-form utilities.
//! * [`uc2`] — the 2-category structure: towers (0-cells), functor sequences
//!   with unitary connections (1-cells), exchange-compatible families (2-cells).
//! * [`qsys`] — Q-systems on an endo-1-cell: axioms, dimension calculus,
//!   stability level, Q-systems from dualizable 1-cells, fixture generators.
//! * [`tower`] — the inductive-limit algebras A_k = End(X'), the bimodules
//!   H_k with their C*-structure, conditional expectations, Pimsner–Popa
//!   bases, and Wedderburn decompositions of concrete *-algebras.
//! * [`corr`] — right correspondences over multi-matrix algebras: relative
//!   tensor products (Gram-quotient oracle and structure-isometry fast path),
//!   induction functors, duality cells, commuting-square connections.
//! * [`split`] — the splitting pipeline itself: the B-tower, the 1-cell X,
//!   its dual, the comparison 2-cells, and certificate generation.

#![forbid(unsafe_code)]

pub mod corr;
pub mod funcalc;
pub mod numkit;
pub mod qsys;
pub mod split;
pub mod sscat;
pub mod tower;
pub mod uc2;
