//! Product embeddings from retail transaction logs.
//!
//! The pipeline has two steps. First, basket co-occurrence counts are
//! factorized into a product vector space with a GloVe-style weighted
//! least-squares objective ([`cooc`], [`embed`]). Second, the space is
//! fine-tuned with relation graphs derived from category metadata so that
//! category mates move together and unrelated products move apart
//! ([`graph`], [`tune`]).
//!
//! On top of the tuned space the crate answers replacement queries
//! ([`space`]), embeds brand-new items from their metadata ([`coldstart`])
//! and scores replacement quality with MRR@K / Recall@K ([`eval`]).
//! [`synth`] generates seeded data with planted category structure, and
//! [`cli`] wires every stage behind the `prodspace` binary.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod coldstart;
pub mod cooc;
pub mod embed;
pub mod error;
pub mod eval;
pub mod graph;
pub mod ingest;
pub mod io;
pub mod space;
pub mod synth;
pub mod tune;

pub use error::{Error, Result};
