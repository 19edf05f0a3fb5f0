//! Compiles every chapter of the guide as doc-tests, so the snippets in the
//! book are checked by `cargo test`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/words.md")]
pub mod words {}
#[doc = include_str!("../../../book/src/presentations.md")]
pub mod presentations {}
#[doc = include_str!("../../../book/src/coset-enumeration.md")]
pub mod coset_enumeration {}
#[doc = include_str!("../../../book/src/homology.md")]
pub mod homology {}
#[doc = include_str!("../../../book/src/certificates.md")]
pub mod certificates {}
#[doc = include_str!("../../../book/src/scenarios.md")]
pub mod scenarios {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
