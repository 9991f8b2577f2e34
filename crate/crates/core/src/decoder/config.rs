use crate::error::{param, Result};

/// Tuning knobs of the sampled-pdf belief-propagation decoder.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoderConfig {
    /// Maximum number of message-passing iterations.
    pub iterations: usize,
    /// Grid step of the sampled pdfs.
    pub grid_step: f64,
    /// Half-width of each variable's grid, in noise standard deviations.
    pub grid_halfwidth_sigmas: f64,
    /// Number of integer replicas summed in each check-to-variable message.
    pub integer_replicas: usize,
    /// Weight of the previous check message when updating, in `[0, 1)`.
    pub damping: f64,
    /// Early exit needs every check sum of `x_hat` within this distance of
    /// its rounded value, on top of `m_hat` being stable for 3 iterations.
    pub residual_tolerance: f64,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self {
            iterations: 100,
            grid_step: 1.0 / 64.0,
            grid_halfwidth_sigmas: 6.0,
            integer_replicas: 3,
            damping: 0.0,
            residual_tolerance: 0.05,
        }
    }
}

impl DecoderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(param("decoder needs at least one iteration"));
        }
        if !(self.grid_step > 0.0 && self.grid_step.is_finite()) {
            return Err(param(format!(
                "grid step {} must be positive",
                self.grid_step
            )));
        }
        if !(self.grid_halfwidth_sigmas > 0.0 && self.grid_halfwidth_sigmas.is_finite()) {
            return Err(param(format!(
                "grid half-width {} must be positive",
                self.grid_halfwidth_sigmas
            )));
        }
        if self.integer_replicas == 0 {
            return Err(param("at least one integer replica is needed"));
        }
        if !(0.0..1.0).contains(&self.damping) {
            return Err(param(format!("damping {} outside [0, 1)", self.damping)));
        }
        if !(self.residual_tolerance > 0.0 && self.residual_tolerance <= 0.5) {
            return Err(param(format!(
                "residual tolerance {} outside (0, 1/2]",
                self.residual_tolerance
            )));
        }
        Ok(())
    }
}

/// Output of a decoder run.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    /// Estimated lattice point.
    pub x_hat: Vec<f64>,
    /// Integer coordinates in the secret basis, `round(x_hat * H)`.
    pub m_hat: Vec<i64>,
    pub converged: bool,
    pub iterations_used: usize,
}
