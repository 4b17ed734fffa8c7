use thiserror::Error;

/// Failure to evaluate a scalar function at a point.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("point {x} lies outside [-1, 1]")]
    OutOfInterval { x: f64 },
    #[error("{op} is undefined at argument {arg}")]
    Domain { op: &'static str, arg: f64 },
    #[error("evaluation produced a non-finite value at x = {x}")]
    NonFinite { x: f64 },
}

/// A real function of one variable that may fail to evaluate.
///
/// Plain closures `Fn(f64) -> f64` implement this and never fail; parsed
/// expressions and coefficient vectors report domain errors instead of
/// producing NaN.
pub trait RealFunction: Sync {
    fn eval(&self, x: f64) -> Result<f64, EvalError>;
}

impl<F> RealFunction for F
where
    F: Fn(f64) -> f64 + Sync,
{
    fn eval(&self, x: f64) -> Result<f64, EvalError> {
        Ok(self(x))
    }
}
