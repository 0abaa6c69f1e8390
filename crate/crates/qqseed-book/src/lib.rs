//! The guide's chapters, compiled so every snippet runs as a doc-test.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/quantum-torus.md")]
pub mod quantum_torus {}
#[doc = include_str!("../../../book/src/seeds.md")]
pub mod seeds {}
#[doc = include_str!("../../../book/src/weights.md")]
pub mod weights {}
#[doc = include_str!("../../../book/src/continued-fractions.md")]
pub mod continued_fractions {}
#[doc = include_str!("../../../book/src/closed-form.md")]
pub mod closed_form {}
#[doc = include_str!("../../../book/src/oracle.md")]
pub mod oracle {}
#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
