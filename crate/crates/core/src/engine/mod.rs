//! Cover pipelines for groups acting on trees and for quotients.

pub mod action;
pub mod audit;
pub mod embedding;
pub mod pipeline;
pub mod provider;
pub mod quotient;
pub mod strata;

pub use action::{action_cover, ActionInput, OrbitAction, StabCover};
pub use pipeline::{run_pipeline, PipelineConfig, PipelineKind, PipelineOutput, PipelineParams};
pub use quotient::{neighborhood_identity, Quotient, QuotientSpec};
pub use audit::{inequality_audit, neighborhood_containment, stabilizer_containment, AuditReport, ContainmentReport};
pub use embedding::{embedding_witness, EmbeddingReport, EmbeddingSpec};
