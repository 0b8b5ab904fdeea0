use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("intersection form is singular; the boundary is not a rational homology sphere")]
    SingularForm,

    #[error("unsupported graph: {0}")]
    Unsupported(String),

    #[error("not a characteristic vector: entry {index} is {value} but the vertex weight is {weight}")]
    NotCharacteristic {
        index: usize,
        value: i32,
        weight: i32,
    },

    #[error("Chern vector is not realizable on this graph: {0}")]
    NotRealizable(String),

    #[error("full path exceeded the step budget of {budget}")]
    StepBudget { budget: usize },

    #[error("not stabilized at depth {depth}: {detail}")]
    NotStabilized { depth: u32, detail: String },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
