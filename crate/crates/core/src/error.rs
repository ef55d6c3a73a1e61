use crate::graph::VertexId;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("vertex {0} has not been explored in this window")]
    NotExplored(VertexId),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid graph parameters: {0}")]
    InvalidParams(String),

    #[error("ray {name} is invalid at index {index}: {reason}")]
    InvalidRay {
        name: String,
        index: u64,
        reason: String,
    },

    #[error("ray {0} carries no metric-ray evidence; metric equivalence is only defined on metric rays")]
    NotMetricRay(String),

    #[error("ray {0} never escapes the ball; classify it as a sequence instead")]
    NoEscape(String),

    #[error("descent is not a nested chain of ball-complement components: {0}")]
    InvalidDescent(String),

    #[error("conflicting evidence at depth {depth}: {detail}")]
    ConflictingEvidence { depth: u32, detail: String },

    #[error("step measure is not normalized (total weight {0})")]
    UnnormalizedMeasure(f64),

    #[error("invalid step measure: {0}")]
    InvalidMeasure(String),

    #[error("cannot parse {kind} from {input:?}")]
    Parse { kind: &'static str, input: String },

    #[error("geodesic interpolation failed between {from} and {to}: {reason}")]
    Interpolation {
        from: VertexId,
        to: VertexId,
        reason: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
