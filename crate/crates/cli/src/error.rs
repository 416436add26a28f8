use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Lib(#[from] softedge::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use softedge::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Lib(E::InvalidParameter(_) | E::Domain(_) | E::OutsideSupport { .. }) => 2,
            _ => 1,
        }
    }
}
