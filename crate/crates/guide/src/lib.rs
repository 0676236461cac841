//! The chapters of the guide, one module each, so that `cargo test --doc`
//! compiles and runs every listing in the book.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/fields.md")]
pub mod fields {}
#[doc = include_str!("../../../book/src/contact_model.md")]
pub mod contact_model {}
#[doc = include_str!("../../../book/src/norms.md")]
pub mod norms {}
#[doc = include_str!("../../../book/src/rumin.md")]
pub mod rumin {}
#[doc = include_str!("../../../book/src/hodge.md")]
pub mod hodge {}
#[doc = include_str!("../../../book/src/flows.md")]
pub mod flows {}
#[doc = include_str!("../../../book/src/contact_maps.md")]
pub mod contact_maps {}
#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}
