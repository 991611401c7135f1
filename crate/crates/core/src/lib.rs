//! Theft, credit and collapse in account-based token economies.
//!
//! - [`taxonomy`] places tokens in the security-locus × trust-locus matrix.
//! - [`analytic`] evaluates the closed-form theft and sustainability conditions.
//! - [`ledger`] is an account ledger with theft, rewrite and collapse, plus a
//!   constant-product pool for sandwich attacks.
//! - [`engine`] simulates money and credit economies and checks them against
//!   the closed forms.
//! - [`scenario`] reads experiment files.
//!
//! ```
//! use tokenlab::analytic::{crypto_theft_benefit, resolve_upsilon, LedgerFate, ModelParams};
//!
//! let p = ModelParams { alpha: 0.2, c: 0.1, ..ModelParams::default() };
//! let upsilon = resolve_upsilon(p.u, LedgerFate::Survives);
//! assert!((crypto_theft_benefit(&p, upsilon) - 0.1).abs() < 1e-12);
//! ```

pub mod analytic;
pub mod engine;
pub mod error;
pub mod ledger;
pub mod scenario;
pub mod taxonomy;

pub use error::{LedgerError, PoolError, SimError, ValidationError};

// Book chapters are compiled as doc tests so their snippets stay current.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/taxonomy.md")]
    mod taxonomy {}
    #[doc = include_str!("../../../book/src/theft.md")]
    mod theft {}
    #[doc = include_str!("../../../book/src/ledger.md")]
    mod ledger {}
    #[doc = include_str!("../../../book/src/sandwich.md")]
    mod sandwich {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
