/// Numerical thresholds threaded through every operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Defect allowed in `mᵀJm = J`, relative to `max(1, |m|²)`.
    pub orth: f64,
    /// Eigen-equation residual allowed for null frames.
    pub eig: f64,
    /// Trace band around 3 that separates hyperbolic, parabolic and elliptic.
    pub trace: f64,
    /// Relative threshold for null vectors and coincident boundary directions.
    pub null: f64,
    /// Distance to the identity below which an isometry is the identity.
    pub identity: f64,
    /// Frames with `trace - 3` below this carry a conditioning warning.
    pub near_parabolic: f64,
    /// Extra trace margin demanded of hyperbolized generators.
    pub hyperbolic_margin: f64,
    /// Minimal boundary distance between a fixed point and its image under an
    /// elliptic generator.
    pub elliptic_margin: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            orth: 1e-10,
            eig: 1e-10,
            trace: 1e-9,
            null: 1e-9,
            identity: 1e-10,
            near_parabolic: 1e-4,
            hyperbolic_margin: 1e-6,
            elliptic_margin: 1e-6,
        }
    }
}
