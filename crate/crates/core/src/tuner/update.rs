use alloc::vec::Vec;

use super::TunerConfig;
use crate::math;
use crate::{Error, Result};

/// Weight `β` given to the new `μ` in the geometric update.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BetaRule {
    /// `β = 1/(κ+1)`.
    Harmonic,
    Fixed(f64),
}

impl BetaRule {
    pub fn beta(&self, kappa: u32) -> f64 {
        match *self {
            BetaRule::Harmonic => 1.0 / (kappa as f64 + 1.0),
            BetaRule::Fixed(b) => b,
        }
    }
}

/// `Δ_new = Δ_old^(1-β) μ^(-β)` elementwise, without rescaling.
pub fn update_delta_unscaled(delta_old: &[f64], mu: &[f64], beta: f64) -> Result<Vec<f64>> {
    if delta_old.len() != mu.len() {
        return Err(Error::input(alloc::format!(
            "delta has {} entries but mu has {}",
            delta_old.len(),
            mu.len()
        )));
    }
    if let Some((i, m)) = mu.iter().enumerate().find(|(_, m)| !(**m > 0.0) || !m.is_finite()) {
        return Err(Error::invariant(alloc::format!("mu[{i}] = {m} is not positive")));
    }
    Ok(delta_old
        .iter()
        .zip(mu)
        .map(|(d, m)| math::powf(*d, 1.0 - beta) * math::powf(*m, -beta))
        .collect())
}

/// Geometric update with `β` from the configured rule, then
/// [`rescale_delta`].
pub fn update_delta(delta_old: &[f64], mu: &[f64], kappa: u32, cfg: &TunerConfig) -> Result<Vec<f64>> {
    if kappa == 0 {
        return Err(Error::input("iteration number kappa starts at 1"));
    }
    let raw = update_delta_unscaled(delta_old, mu, cfg.beta_rule.beta(kappa))?;
    Ok(rescale_delta(&raw, cfg.delta_min, cfg.delta_max))
}

/// Scales so the smallest entry is `delta_min`, then clamps at `delta_max`.
pub fn rescale_delta(delta: &[f64], delta_min: f64, delta_max: f64) -> Vec<f64> {
    let lo = delta.iter().copied().fold(f64::INFINITY, f64::min);
    let k = delta_min / lo;
    delta.iter().map(|d| (d * k).min(delta_max)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn first_update_halves() {
        let d = update_delta_unscaled(&[1.0], &[4.0], BetaRule::Harmonic.beta(1)).unwrap();
        assert!((d[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn equal_mu_gives_uniform_minimum() {
        let d = update_delta(&[1.0, 2.0, 0.5], &[3.0, 3.0, 3.0], 1, &TunerConfig::default()).unwrap();
        // 0.5^(1/2) is the smallest, anchored at 1/4
        assert!((d[2] - 0.25).abs() < 1e-15);
        assert!((d[0] - 0.25 * libm::sqrt(2.0)).abs() < 1e-15);
    }

    #[test]
    fn rescale_examples() {
        assert_eq!(rescale_delta(&[0.1, 0.2], 0.25, 8.0), vec![0.25, 0.5]);
        assert_eq!(rescale_delta(&[1.0, 100.0], 0.25, 8.0), vec![0.25, 8.0]);
        assert_eq!(rescale_delta(&[0.25, 4.0], 0.25, 8.0), vec![0.25, 4.0]);
    }

    #[test]
    fn nonpositive_mu_is_an_invariant_error() {
        assert!(matches!(
            update_delta_unscaled(&[1.0], &[0.0], 0.5),
            Err(Error::Invariant(_))
        ));
        assert!(matches!(
            update_delta(&[1.0], &[1.0], 0, &TunerConfig::default()),
            Err(Error::Input(_))
        ));
    }
}
