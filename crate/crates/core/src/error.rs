use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// The variants map one-to-one onto the CLI exit-code classes: input and
/// spec problems are caller mistakes, exhaustion and resource errors mean the
/// finite window was too small for a sound answer, and hypothesis failures
/// name the pipeline stage whose precondition did not hold.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("spec error: {0}")]
    Spec(String),

    #[error("window exhausted at {stage}: {detail}")]
    WindowExhausted { stage: String, detail: String },

    #[error("resource limit: {detail} (layer sizes so far: {growth:?})")]
    Resource { detail: String, growth: Vec<usize> },

    #[error("hypothesis `{name}` failed at {stage}: {detail}")]
    Hypothesis {
        stage: String,
        name: String,
        detail: String,
    },

    #[error("degenerate structure: {0}")]
    Degenerate(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn spec(msg: impl Into<String>) -> Self {
        Error::Spec(msg.into())
    }

    pub fn exhausted(stage: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::WindowExhausted {
            stage: stage.into(),
            detail: detail.into(),
        }
    }

    pub fn hypothesis(
        stage: impl Into<String>,
        name: impl Into<String>,
        detail: impl Into<String>,
    ) -> Self {
        Error::Hypothesis {
            stage: stage.into(),
            name: name.into(),
            detail: detail.into(),
        }
    }

    /// Prefix the stage name of exhaustion and hypothesis errors.
    pub fn at_stage(self, outer: &str) -> Self {
        match self {
            Error::WindowExhausted { stage, detail } => Error::WindowExhausted {
                stage: format!("{outer}/{stage}"),
                detail,
            },
            Error::Hypothesis { stage, name, detail } => Error::Hypothesis {
                stage: format!("{outer}/{stage}"),
                name,
                detail,
            },
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
