//! Published normalized frequencies of a uniform, uncracked arch and the
//! one-parameter fit that relates them to the consistent formulation.
//!
//! Under [`Formulation::Consistent`](crate::Formulation::Consistent) the first
//! mode of a uniform simply supported arch has `ω̄ = Ωβ²` with
//! `Ω² = (k⁴ − k²)/(1 + ηk²/R²)`, `k = π/β`. The ratio to the local value is
//! therefore `1/√(1 + ηk²/R²)`, which depends on the geometry only through
//! `k²/R²`. The published data omit R, so it is fitted to the ratios.

use std::f64::consts::PI;

/// Nonlocal parameters of the reference rows, nm².
pub const ETA_NM2: [f64; 5] = [0.0, 1.0, 2.0, 3.0, 4.0];

/// First-mode normalized frequency for each entry of [`ETA_NM2`].
pub const OMEGA_BAR: [f64; 5] = [9.75821445, 7.05584295, 5.80188130, 5.04192108, 4.51883759];

/// Central angle assumed for the reference data, rad.
pub const DEFAULT_BETA: f64 = 0.5;

/// `OMEGA_BAR[i] / OMEGA_BAR[0]`.
pub fn ratios() -> [f64; 5] {
    OMEGA_BAR.map(|w| w / OMEGA_BAR[0])
}

/// `k√(k² − 1)·β²` with `k = π/β`: the local (`η = 0`) value.
pub fn local_omega_bar(beta: f64) -> f64 {
    let k = PI / beta;
    k * (k * k - 1.0).sqrt() * beta * beta
}

/// `1/√(1 + ηk²/R²)` with `k = π/β`.
pub fn nonlocal_ratio(eta: f64, radius: f64, beta: f64) -> f64 {
    let k = PI / beta;
    1.0 / (1.0 + eta * k * k / (radius * radius)).sqrt()
}

/// Radius (m) minimizing the squared misfit of `1/r² − 1 = η·k²/R²` over the
/// nonzero-η rows. The relation is linear in `x = k²/R²`, so
/// `x = Σηy/Ση²` in closed form.
pub fn fit_radius(beta: f64) -> f64 {
    let r = ratios();
    let (mut num, mut den) = (0.0, 0.0);
    for i in 1..ETA_NM2.len() {
        let eta = ETA_NM2[i] * 1e-18;
        let y = 1.0 / (r[i] * r[i]) - 1.0;
        num += eta * y;
        den += eta * eta;
    }
    let x = num / den;
    let k = PI / beta;
    k / x.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tabulated_ratios() {
        let r = ratios();
        for (got, want) in r[1..].iter().zip([0.7231, 0.5946, 0.5167, 0.4631]) {
            assert!((got - want).abs() < 5e-5, "{got} vs {want}");
        }
    }

    #[test]
    fn local_value_near_tabulated() {
        let w = local_omega_bar(DEFAULT_BETA);
        assert!((w / OMEGA_BAR[0] - 1.0).abs() < 2e-3, "{w}");
    }

    #[test]
    fn fitted_radius_reproduces_ratios() {
        let radius = fit_radius(DEFAULT_BETA);
        assert!(radius > 6e-9 && radius < 7e-9, "{radius}");
        for i in 1..5 {
            let model = nonlocal_ratio(ETA_NM2[i] * 1e-18, radius, DEFAULT_BETA);
            assert!((model / ratios()[i] - 1.0).abs() < 5e-3);
        }
    }

    #[test]
    fn exact_data_recover_radius() {
        // residual of the normal equation vanishes for noise-free ratios
        let (beta, radius) = (0.5, 8e-9);
        let k2 = (PI / beta).powi(2);
        let x: f64 = (1..5)
            .map(|i| {
                let eta = i as f64 * 1e-18;
                let r = nonlocal_ratio(eta, radius, beta);
                eta * (1.0 / (r * r) - 1.0)
            })
            .sum::<f64>()
            / (1..5).map(|i| (i as f64 * 1e-18).powi(2)).sum::<f64>();
        assert!((x - k2 / (radius * radius)).abs() < 1e-9 * x);
    }
}
