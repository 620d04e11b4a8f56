use serde::Serialize;

use dircurv::body::BodyError;
use dircurv::curvature::CurvatureError;
use dircurv::expr::ExprError;
use dircurv::goldman::GoldmanError;
use dircurv::linalg::LinalgError;
use dircurv::oracle::OracleError;

/// Bad input: unreadable file, malformed JSON or CSV, point off the body.
pub const EXIT_INPUT: u8 = 2;
/// The input was well formed but a computation could not finish.
pub const EXIT_NUMERICAL: u8 = 3;

/// Error object written to stdout in place of a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
    pub location: Option<String>,
    #[serde(skip)]
    pub exit: u8,
}

impl CliError {
    pub fn input(code: &'static str, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
            location: None,
            exit: EXIT_INPUT,
        }
    }

    pub fn numerical(code: &'static str, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
            location: None,
            exit: EXIT_NUMERICAL,
        }
    }

    pub fn at(mut self, location: impl Into<String>) -> Self {
        if self.location.is_none() {
            self.location = Some(location.into());
        }
        self
    }
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        let message = e.to_string();
        match e {
            ExprError::Syntax { position, .. }
            | ExprError::UnknownVariable { position, .. }
            | ExprError::NonIntegerExponent { position } => {
                let code = match e {
                    ExprError::Syntax { .. } => "Syntax",
                    ExprError::UnknownVariable { .. } => "UnknownVariable",
                    _ => "NonIntegerExponent",
                };
                CliError::input(code, message).at(format!("f:{position}"))
            }
            ExprError::DivisionByZero { location } => {
                CliError::numerical("DivisionByZero", message).at(location)
            }
            ExprError::DimensionMismatch { .. } => CliError::input("DimensionMismatch", message),
        }
    }
}

impl From<BodyError> for CliError {
    fn from(e: BodyError) -> Self {
        let message = e.to_string();
        match e {
            BodyError::BadDimension(_) => CliError::input("BadDimension", message).at("n"),
            BodyError::BadDelta(_) => CliError::input("BadDelta", message).at("delta"),
            BodyError::OriginNotInterior { .. } => {
                CliError::input("OriginNotInterior", message).at("f")
            }
            BodyError::DimensionMismatch { .. } => CliError::input("DimensionMismatch", message),
            BodyError::NotOnBoundary { .. } => CliError::input("NotOnBoundary", message),
            BodyError::NonSmoothPoint { .. } => CliError::input("NonSmoothPoint", message),
            BodyError::OrientationViolation { .. } => {
                CliError::input("OrientationViolation", message)
            }
            BodyError::RayEscapes => CliError::numerical("RayEscapes", message),
            BodyError::ZeroPoint => CliError::input("ZeroPoint", message),
            BodyError::Json(_) => CliError::input("InvalidBody", message),
            BodyError::Expr(inner) => inner.into(),
        }
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        let code = match e {
            LinalgError::DimensionMismatch { .. } => "DimensionMismatch",
            LinalgError::RankDeficient { .. } => "RankDeficient",
            LinalgError::NotSymmetric { .. } => "NotSymmetric",
        };
        CliError::numerical(code, e.to_string())
    }
}

impl From<CurvatureError> for CliError {
    fn from(e: CurvatureError) -> Self {
        let message = e.to_string();
        match e {
            CurvatureError::ZeroDirection => CliError::input("ZeroDirection", message),
            CurvatureError::NotTangent => CliError::input("NotTangent", message),
            CurvatureError::NegativeCurvature(_) => {
                CliError::numerical("NegativeCurvature", message)
            }
            CurvatureError::NotInterior { .. } => CliError::input("NotInterior", message),
            CurvatureError::Body(inner) => inner.into(),
            CurvatureError::Linalg(inner) => inner.into(),
        }
    }
}

impl From<GoldmanError> for CliError {
    fn from(e: GoldmanError) -> Self {
        let message = e.to_string();
        match e {
            GoldmanError::InvalidIndex { .. } => CliError::input("InvalidIndex", message).at("--j"),
            GoldmanError::DegenerateTangent { .. } => {
                CliError::numerical("DegenerateTangent", message)
            }
            GoldmanError::PointMismatch => CliError::numerical("PointMismatch", message),
            GoldmanError::Body(inner) => inner.into(),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        let message = e.to_string();
        match e {
            OracleError::NotTangent => CliError::input("NotTangent", message),
            OracleError::InvalidRadius { .. } => CliError::input("InvalidRadius", message),
            OracleError::TooFewSamples(_) => CliError::input("TooFewSamples", message),
            OracleError::NoBoundaryIntersection { .. } => {
                CliError::numerical("NoBoundaryIntersection", message)
            }
            OracleError::Body(inner) => inner.into(),
        }
    }
}
