use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("order relation has a cycle through `{0}` and `{1}`")]
    Cycle(String, String),

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("{what} exceeds the configured cap ({limit})")]
    Size { what: String, limit: usize },

    #[error("subset is not downward closed: `{above}` is a member but `{below}` is not")]
    NotDownset { above: String, below: String },

    #[error("not a lattice: `{0}` and `{1}` lack a {2}")]
    NotLattice(String, String, &'static str),

    #[error("not distributive: {a} ∧ ({b} ∨ {c}) = {lhs} but ({a} ∧ {b}) ∨ ({a} ∧ {c}) = {rhs}")]
    NotDistributive {
        a: String,
        b: String,
        c: String,
        lhs: String,
        rhs: String,
    },

    #[error("not a frame homomorphism: {0}")]
    NotHom(String),

    #[error("map is not monotone: {0}")]
    NotMonotone(String),

    #[error("not a prenucleus: {0}")]
    NotPrenucleus(String),

    #[error("not a nucleus: {0}")]
    NotNucleus(String),

    #[error("not a frame: {0}")]
    NotFrame(String),

    #[error("not an isomorphism: {0}")]
    NotIso(String),

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("map is not continuous: {0}")]
    NotContinuous(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),

    #[error("subspace must be nonempty")]
    EmptySubspace,

    #[error("square does not commute: {0}")]
    NonCommuting(String),

    #[error("invalid pseudotopology: {0}")]
    InvalidPseudotopology(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn size(what: impl Into<String>, limit: usize) -> Self {
        Error::Size {
            what: what.into(),
            limit,
        }
    }

    /// Stable machine-readable tag used in CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Cycle(..) => "CycleError",
            Error::DuplicateLabel(_) => "DuplicateLabelError",
            Error::UnknownLabel(_) => "UnknownLabelError",
            Error::Size { .. } => "SizeError",
            Error::NotDownset { .. } => "NotDownsetError",
            Error::NotLattice(..) => "NotLatticeError",
            Error::NotDistributive { .. } => "NotDistributiveError",
            Error::NotHom(_) => "NotHomError",
            Error::NotMonotone(_) => "NotMonotoneError",
            Error::NotPrenucleus(_) => "NotPrenucleusError",
            Error::NotNucleus(_) => "NotNucleusError",
            Error::NotFrame(_) => "NotFrameError",
            Error::NotIso(_) => "NotIsoError",
            Error::InvalidSpace(_) => "InvalidSpaceError",
            Error::NotContinuous(_) => "NotContinuousError",
            Error::Hypothesis(_) => "HypothesisError",
            Error::CarrierMismatch(_) => "CarrierMismatchError",
            Error::EmptySubspace => "EmptySubspaceError",
            Error::NonCommuting(_) => "NonCommutingError",
            Error::InvalidPseudotopology(_) => "InvalidPseudotopologyError",
            Error::Parse(_) => "ParseError",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
