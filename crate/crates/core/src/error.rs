use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    // ---- geometry / basis ----
    #[error("XYZ parse error at line {line}: {msg}")]
    XyzParse { line: usize, msg: String },

    #[error("unknown element symbol '{symbol}' at line {line}")]
    UnknownElement { symbol: String, line: usize },

    #[error("invalid molecule: {0}")]
    InvalidMolecule(String),

    #[error(
        "unsupported element Z={0}: built-in bases cover hydrogen only; \
         use the FCIDUMP ingestion path for externally computed integrals"
    )]
    UnsupportedElement(u32),

    #[error("unknown basis set '{0}' (supported: STO-3G, 3-21G, 6-31G)")]
    UnknownBasis(String),

    // ---- integrals ----
    #[error("Boys function argument must be non-negative, got {0}")]
    NegativeBoysArgument(f64),

    // ---- SCF ----
    #[error("near-linear dependence in basis: overlap eigenvalue {0:.3e} below 1e-10")]
    LinearDependence(f64),

    #[error("invalid electron count: {0}")]
    BadElectronCount(String),

    // ---- CI ----
    #[error("reference SCF result is not converged (pass allow_unconverged to override)")]
    UnconvergedReference,

    #[error("determinants have mismatched electron counts")]
    ElectronCountMismatch,

    #[error("determinant list is empty")]
    EmptyDeterminantList,

    #[error("symmetric eigensolver failed to converge ({0})")]
    EigensolverFailure(String),

    // ---- entanglement ----
    #[error("operation requires a two-electron wavefunction, got {0} electrons")]
    NotTwoElectron(usize),

    #[error("two-electron closed form requires the reference to occupy spatial orbital 1 with both spins")]
    BadReferenceOccupation,

    #[error("Fock-space dimension 2^{exponent} exceeds the 2^16 guard")]
    FockSpaceTooLarge { exponent: usize },

    #[error("partial trace keep set is {0}")]
    BadKeepSet(String),

    #[error("not a valid density matrix: {0}")]
    InvalidDensity(String),

    #[error("entropy reports are not comparable: {0}")]
    ReportMismatch(String),

    // ---- scan / IO ----
    #[error("invalid scan configuration: {0}")]
    InvalidConfig(String),

    #[error("FCIDUMP error at line {line}: {msg}")]
    Fcidump { line: usize, msg: String },

    #[error("FCIDUMP header is missing {0}")]
    FcidumpMissingKey(&'static str),

    #[error("rows mix different scan modes; cannot emit a common column set")]
    ColumnSetMismatch,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
