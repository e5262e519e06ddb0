use thiserror::Error;

/// Errors shared across the whole library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero element where a nonzero element is required")]
    ZeroElement,
    #[error("archimedean place has no discrete valuation")]
    ArchimedeanPlace,
    #[error("element is not a unit at the place (valuation {0})")]
    NotAUnit(i64),
    #[error("residue characteristic 2 is refused by form-theoretic operations")]
    ResidueCharTwo,
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("zero scalar")]
    ZeroScalar,
    #[error("zero slot in a Pfister specification or symbol")]
    ZeroSlot,
    #[error("symbol degrees do not match")]
    DegreeMismatch,
    #[error("form is not in the requested power of the fundamental ideal")]
    NotInIdealPower,
    #[error("no invariant is implemented in degree {0}")]
    UnsupportedDegree(u32),
    #[error("no Pfister presentation is available and no signature rule applies")]
    NoPfisterPresentation,
    #[error("symbol could not be brought to residue normal form: {0}")]
    NormalizationFailure(String),
    #[error("(field, valuation set) pair has no certified entry: {0}")]
    UnsupportedConfiguration(String),
    #[error("undecidable at place: {0}")]
    UndecidableAtPlace(String),
    #[error("catalog member {0} has bad reduction inside V")]
    BadReductionInCatalog(String),
    #[error("catalog member {0} is not locally equivalent to the base form")]
    NotLocallyEquivalent(String),
    #[error("a sieve cell could not be refined: {0}")]
    InvariantUndecided(String),
    #[error("hermitian forms live over different quadratic extensions")]
    ExtensionMismatch,
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid catalog: {0}")]
    Catalog(String),
    #[error("internal invariant violation: {0}")]
    Internal(String),
}
