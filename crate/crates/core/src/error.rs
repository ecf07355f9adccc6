use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A scalar argument or record field is outside its admissible range.
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    /// A material lacks a constant that the requested computation needs.
    MissingConstant {
        material: String,
        constant: &'static str,
    },
    /// Axial strain outside the linear-response guard.
    StrainOutOfRange { strain: f64, bound: f64 },
    /// `k` grid is empty or not strictly ascending.
    InvalidGrid { reason: &'static str },
    /// Neighboring scan points could not be unwrapped unambiguously even
    /// after refinement.
    UnwrapAmbiguity { k_lo: f64, k_hi: f64, step: f64 },
    /// Step-halving for the strain derivative did not settle.
    DerivativeNotConverged { previous: f64, last: f64 },
    /// Adaptive quadrature ran out of subdivisions.
    QuadratureTolerance { achieved: f64, requested: f64 },
    /// The total-strain radicand is swamped by quadrature error.
    CatastrophicCancellation { radicand: f64, error: f64 },
    /// A discrimination study needs a magic root that does not exist.
    NoMagicRoot { mirror: &'static str },
    /// Brent's method was handed an interval without a sign change.
    NotBracketed { lo: f64, hi: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter {
                name,
                value,
                reason,
            } => write!(f, "invalid {name} = {value}: {reason}"),
            Error::MissingConstant { material, constant } => {
                write!(f, "material `{material}` has no {constant}")
            }
            Error::StrainOutOfRange { strain, bound } => {
                write!(f, "strain {strain:e} outside linear regime |eps| < {bound:e}")
            }
            Error::InvalidGrid { reason } => write!(f, "invalid wavevector grid: {reason}"),
            Error::UnwrapAmbiguity { k_lo, k_hi, step } => write!(
                f,
                "phase unwrap ambiguous between k = {k_lo:e} and {k_hi:e} (step {step:.4} rad after refinement)"
            ),
            Error::DerivativeNotConverged { previous, last } => write!(
                f,
                "strain derivative did not converge (last estimates {previous:e}, {last:e})"
            ),
            Error::QuadratureTolerance {
                achieved,
                requested,
            } => write!(
                f,
                "quadrature tolerance not met: achieved {achieved:e}, requested {requested:e}"
            ),
            Error::CatastrophicCancellation { radicand, error } => write!(
                f,
                "total-strain radicand {radicand:e} is within 1e3x of its quadrature error {error:e}"
            ),
            Error::NoMagicRoot { mirror } => {
                write!(f, "mirror {mirror} has no magic wavevector in the window")
            }
            Error::NotBracketed { lo, hi } => {
                write!(f, "no sign change on [{lo:e}, {hi:e}]")
            }
        }
    }
}

impl Error {
    /// `true` for failures of a numerical method (quadrature, unwrapping,
    /// differentiation, root bracketing) as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::UnwrapAmbiguity { .. }
                | Error::DerivativeNotConverged { .. }
                | Error::QuadratureTolerance { .. }
                | Error::CatastrophicCancellation { .. }
                | Error::NotBracketed { .. }
        )
    }
}

impl core::error::Error for Error {}
