use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("p = {0} is not supported: the anisotropic torus [[a,b],[b*eps^2,a]] needs an odd prime characteristic")]
    EvenOrCompositeCharacteristic(u32),

    #[error("extension degree f = {f} out of range 1..={max}")]
    DegreeOutOfRange { f: u32, max: u32 },

    #[error("field of size {size} exceeds the table limit {limit}")]
    FieldTooLarge { size: u64, limit: u64 },

    #[error("no embedding from degree {from} into degree {to}: {from} does not divide {to}")]
    NoEmbedding { from: u32, to: u32 },

    #[error("element is not in the degree-{0} subfield")]
    NotInSubfield(u32),

    #[error("enumeration of {what} needs {estimate} elements, budget is {budget}")]
    EnumerationBudget {
        what: String,
        estimate: u64,
        budget: u64,
    },

    #[error("Hom space needs {estimate} unknowns, budget is {budget}")]
    HomBudget { estimate: u64, budget: u64 },

    #[error("unsupported subgroup: {0}")]
    UnsupportedSubgroup(String),

    #[error("element {0} is outside the domain of {1}")]
    OutsideDomain(String, String),

    #[error("{0} is not a subgroup of {1}")]
    NotASubgroup(String, String),

    #[error("representations act on different groups or dimensions: {0}")]
    Incompatible(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("cache: {0}")]
    Cache(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
