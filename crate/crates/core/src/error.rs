use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input to the Hermitian eigensolver was not Hermitian.
    #[error("matrix is not Hermitian: max |m - m^dagger| = {deviation:e}")]
    NonHermitianInput { deviation: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("matrix has a non-finite entry")]
    NonFinite,

    #[error("density matrix is not Hermitian: max |m - m^dagger| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("density matrix trace is {trace} (deviation from 1 is {deviation:e})")]
    TraceNotOne { trace: f64, deviation: f64 },

    #[error("density matrix is not PSD: smallest eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("{name}: argument {value} outside the domain [0, 1]")]
    DomainError { name: &'static str, value: f64 },

    #[error("bad rotation indices ({i}, {j}); need 1 <= i < j <= 4")]
    BadIndices { i: usize, j: usize },

    #[error("relative difference undefined: a + b = 0")]
    ZeroDenominator,

    #[error("pair comparison requires entangled states; state {which} is separable")]
    SeparableInput { which: u8 },

    #[error("malformed state record: {0}")]
    Parse(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
