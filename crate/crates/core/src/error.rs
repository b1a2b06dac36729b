use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FwmError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("frequency {omega:.6e} rad/s outside model window [{lo:.6e}, {hi:.6e}] rad/s")]
    OutOfWindow { omega: f64, lo: f64, hi: f64 },

    #[error("no sign change on bracket [{lo:.6e}, {hi:.6e}]")]
    NoRoot { lo: f64, hi: f64 },

    #[error("bisection did not converge in {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("incompatible dispersion: {0}")]
    IncompatibleDispersion(String),

    #[error(
        "grid too coarse: bin width {bin_width:.4e} rad/s exceeds main-lobe width {lobe_width:.4e} rad/s / 16"
    )]
    Resolution { bin_width: f64, lobe_width: f64 },

    #[error("grid coverage: {0}")]
    Coverage(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("integration step {step:.4e} m too large; use at most {max_step:.4e} m")]
    StepTooLarge { step: f64, max_step: f64 },

    #[error("dispersion table: {0}")]
    Table(String),
}

impl FwmError {
    /// True for failures of a numerical procedure on otherwise valid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            FwmError::NoRoot { .. }
                | FwmError::NoConvergence { .. }
                | FwmError::Resolution { .. }
                | FwmError::Coverage(_)
                | FwmError::StepTooLarge { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, FwmError>;
