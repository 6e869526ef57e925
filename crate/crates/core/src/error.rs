use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The initial rate of return is exactly zero, so the growth number is undefined.
    DegenerateInitialRate,
    /// η₀ = 0 with positive technological change: an unstable fixed point that
    /// sits on the boundary of the innovation mode.
    InnovationBoundary { eta_tech: f64 },
    /// `d ln η/dt` requested at η = 0.
    UndefinedLogarithm,
    /// Nominal production coefficient β must be positive.
    InvalidNominalProduction { beta: f64 },
    /// A quantity is outside its physical domain.
    Domain { quantity: &'static str, value: f64 },
    /// Reserve enthalpy is zero or negative.
    ReservesExhausted { delta_h_r: f64 },
    InvalidParameter { name: &'static str, reason: &'static str },
    EmptySeries,
    DuplicateYear { year: i32 },
    MissingValue { year: i32, column: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateInitialRate => {
                write!(f, "initial rate of return is zero; growth number undefined")
            }
            Error::InnovationBoundary { eta_tech } => write!(
                f,
                "eta0 = 0 with eta_tech = {eta_tech} > 0 lies on the innovation boundary"
            ),
            Error::UndefinedLogarithm => write!(f, "d ln(eta)/dt is undefined at eta = 0"),
            Error::InvalidNominalProduction { beta } => {
                write!(f, "nominal production coefficient beta = {beta} must be positive")
            }
            Error::Domain { quantity, value } => {
                write!(f, "{quantity} = {value} is outside its valid domain")
            }
            Error::ReservesExhausted { delta_h_r } => {
                write!(f, "reserve enthalpy exhausted (delta_h_r = {delta_h_r})")
            }
            Error::InvalidParameter { name, reason } => write!(f, "invalid {name}: {reason}"),
            Error::EmptySeries => write!(f, "historical series is empty"),
            Error::DuplicateYear { year } => write!(f, "year {year} appears more than once"),
            Error::MissingValue { year, column } => {
                write!(f, "year {year} is missing a value for {column}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn domain(quantity: &'static str, value: f64) -> Error {
    Error::Domain { quantity, value }
}
