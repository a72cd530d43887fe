use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Collection did not finish inside the step budget. Usually a garbled
    /// or non-nilpotent presentation.
    #[error("collection exceeded the step budget of {0} steps")]
    StepBudgetExceeded(u64),

    /// The presentation defines a group smaller than the product of its
    /// relative orders, or a relation does not hold after construction.
    #[error("inconsistent presentation: {0}")]
    Consistency(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("not a group: {0}")]
    NotAGroup(String),

    /// A family side condition failed. `clause` names the violated condition.
    #[error("{family}: parameter condition violated: {clause}")]
    Param { family: String, clause: String },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("quotient is not abelian")]
    NotAbelianQuotient,

    #[error("A-index is undefined for abelian groups")]
    Undefined,

    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),

    #[error("{0} is not a unit modulo {1}")]
    NotAUnit(u64, u64),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn param(family: impl Into<String>, clause: impl Into<String>) -> Self {
        Error::Param {
            family: family.into(),
            clause: clause.into(),
        }
    }
}
