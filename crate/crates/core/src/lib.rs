//! Exact dual partitions of matrix spaces over finite chain rings.
//!
//! Matrices in `Mat_{m,n}(R)` are classified by the submodule their columns
//! span. [`duality`] computes dual partitions under the trace pairing with
//! exact cyclotomic arithmetic, [`macwilliams`] checks the resulting
//! identities on codes, and [`schemes`] decides whether the rank relations
//! form an association scheme. The `rd` binary drives all of it from the
//! command line; see [`cli`].

pub mod chainring;
pub mod cli;
pub mod cyclotomic;
pub mod duality;
pub mod error;
pub mod linalg;
pub mod macwilliams;
pub mod rankspace;
pub mod schemes;

// The guide's code blocks run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/rings.md")]
    mod rings {}
    #[doc = include_str!("../../../book/src/submodules.md")]
    mod submodules {}
    #[doc = include_str!("../../../book/src/partitions.md")]
    mod partitions {}
    #[doc = include_str!("../../../book/src/closed-forms.md")]
    mod closed_forms {}
    #[doc = include_str!("../../../book/src/macwilliams.md")]
    mod macwilliams {}
    #[doc = include_str!("../../../book/src/schemes.md")]
    mod schemes {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
