//! Exact Seifert-matrix algebra for odd-dimensional knots.
//!
//! [`seifert`] holds knots and their Arf and signature invariants, and
//! [`realize`] decides whether two knots can be consecutive cross-sections,
//! with a checkable certificate. The other modules supply the pieces:
//! [`exactalg`] for integer matrices and congruences, [`hyperbolic`] for
//! normal forms, [`passmove`] for schedules and [`cobordism`] for metabolizers.

pub mod cobordism;
pub mod exactalg;
pub mod hyperbolic;
pub mod passmove;
pub mod realize;
pub mod sample;
pub mod seifert;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/matrices.md")]
    mod matrices {}
    #[doc = include_str!("../../../book/src/invariants.md")]
    mod invariants {}
    #[doc = include_str!("../../../book/src/hyperbolic.md")]
    mod hyperbolic {}
    #[doc = include_str!("../../../book/src/passmoves.md")]
    mod passmoves {}
    #[doc = include_str!("../../../book/src/cobordism.md")]
    mod cobordism {}
    #[doc = include_str!("../../../book/src/realizability.md")]
    mod realizability {}
}
