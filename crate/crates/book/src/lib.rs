//! The guide's chapters, one module each, so that `cargo test --doc` runs every listing.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/codes.md")]
pub mod codes {}
#[doc = include_str!("../../../book/src/krawtchouk.md")]
pub mod krawtchouk {}
#[doc = include_str!("../../../book/src/samples.md")]
pub mod samples {}
#[doc = include_str!("../../../book/src/decoder.md")]
pub mod decoder {}
#[doc = include_str!("../../../book/src/duality.md")]
pub mod duality {}
#[doc = include_str!("../../../book/src/exponents.md")]
pub mod exponents {}
#[doc = include_str!("../../../book/src/lattice.md")]
pub mod lattice {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
