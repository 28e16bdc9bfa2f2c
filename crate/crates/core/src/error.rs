//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("{0} is not squarefree")]
    NotSquarefree(i64),

    #[error("{0} is not cubefree")]
    NotCubefree(i64),

    #[error("imaginary field: unit rank 0")]
    ImaginaryField,

    #[error("class number 1: proposition inapplicable")]
    ClassNumberOne,

    #[error("ring has 1 = -1: remark hypothesis fails")]
    CharacteristicTwo,

    #[error("indeterminate at precision: {0}")]
    Indeterminate(String),

    #[error("unverifiable at desk scale: {0}")]
    Unverifiable(String),

    #[error("no witness within bound: {0}")]
    NotWithinBound(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable tag, used by the CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division_by_zero",
            Error::NotSquarefree(_) => "not_squarefree",
            Error::NotCubefree(_) => "not_cubefree",
            Error::ImaginaryField => "imaginary_field",
            Error::ClassNumberOne => "class_number_one",
            Error::CharacteristicTwo => "characteristic_two",
            Error::Indeterminate(_) => "indeterminate",
            Error::Unverifiable(_) => "unverifiable",
            Error::NotWithinBound(_) => "not_within_bound",
            Error::Parse(_) => "parse",
            Error::Invalid(_) => "invalid",
        }
    }
}
