//! Quasi journal citation reports and journal citation maps.
//!
//! The pipeline runs from field-tagged bibliographic exports ([`wos`]) through
//! journal resolution ([`registry`]) and aggregation ([`matrix`]) to
//! cosine-normalized similarity networks ([`network`]), stress layouts
//! ([`layout`]) and Pajek/CSV output ([`export`]). Descriptive corpus
//! statistics live in [`stats`]; [`pipeline`] chains the stages.

pub mod export;
pub mod layout;
pub mod matrix;
pub mod network;
pub mod params;
pub mod pipeline;
pub mod registry;
pub mod stats;
pub mod wos;

pub use matrix::{CitationEnvironment, CitationMatrix, Direction, DocJournalMatrix};
pub use network::{FactorSolution, SimilarityNetwork};
pub use params::AnalysisParams;
pub use registry::{JournalKey, SourceList};
pub use wos::{CitedReference, DocType, DocumentRecord};
