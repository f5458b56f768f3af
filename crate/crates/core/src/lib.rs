//! Exact values of multi-player non-local games under no-signalling,
//! sub-no-signalling, and classical strategies, with parallel and threshold
//! repetition and explicit repetition bounds.

pub mod bounds;
pub mod catalog;
pub mod error;
pub mod format;
pub mod game;
pub mod lp;
pub mod polytope;
pub mod rational;
pub mod repair;
pub mod values;

pub use error::{Error, Result};
pub use game::{Correlation, Game, Limits, Scenario, SubsetIndex};
pub use rational::Rational;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/games.md")]
    mod games {}
    #[doc = include_str!("../../../book/src/values.md")]
    mod values {}
    #[doc = include_str!("../../../book/src/polytopes.md")]
    mod polytopes {}
    #[doc = include_str!("../../../book/src/repair.md")]
    mod repair {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
