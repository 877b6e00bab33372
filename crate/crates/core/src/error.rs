use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument fell outside the domain where a formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The default radius bound produced an empty strategy set.
    #[error(
        "degenerate geometry: maximum cluster radius {radius_m:.4} m holds {count} devices at \
         density {lambda_m}; supply `scenario.r_max_m` to override"
    )]
    DegenerateGeometry {
        radius_m: f64,
        count: u64,
        lambda_m: f64,
    },

    #[error("{path}:{line}: {msg}")]
    Config {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
