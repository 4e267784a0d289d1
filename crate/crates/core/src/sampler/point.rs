use crate::spectrum::SpectrumProfile;
use crate::{Error, Result};

/// How far before the anticrossing to sample.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SamplePointRule {
    /// Largest grid point left of `s*` whose gap is at least `rho * g_min`.
    GapRatio { rho: f64 },
    /// `max(0, s* - delta)`.
    FixedOffset { delta: f64 },
}

impl SamplePointRule {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SamplePointRule::GapRatio { rho } if !(rho > 1.0) => {
                Err(Error::input(alloc::format!("gap ratio rho must exceed 1, got {rho}")))
            }
            SamplePointRule::FixedOffset { delta } if !(delta > 0.0 && delta <= 0.2) => Err(Error::input(
                alloc::format!("fixed offset must lie in (0, 0.2], got {delta}"),
            )),
            _ => Ok(()),
        }
    }
}

/// Fallback offset when the gap-ratio rule finds no qualifying point.
pub const FALLBACK_OFFSET: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SamplePoint {
    pub s: f64,
    /// The gap-ratio rule found no point and the fixed offset was used.
    pub fallback: bool,
}

pub fn choose_sample_point(profile: &SpectrumProfile, rule: &SamplePointRule) -> Result<SamplePoint> {
    rule.validate()?;
    let offset = |delta: f64| (profile.s_star - delta).max(0.0);
    Ok(match *rule {
        SamplePointRule::FixedOffset { delta } => SamplePoint {
            s: offset(delta),
            fallback: false,
        },
        SamplePointRule::GapRatio { rho } => {
            let target = rho * profile.g_min;
            let found = profile
                .s_grid
                .iter()
                .zip(&profile.gap)
                .rev()
                .find(|(s, g)| **s < profile.s_star && **g >= target);
            match found {
                Some((s, _)) => SamplePoint { s: *s, fallback: false },
                None => SamplePoint {
                    s: offset(FALLBACK_OFFSET),
                    fallback: true,
                },
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn dip(at: f64, depth: f64) -> SpectrumProfile {
        let s_grid: Vec<f64> = (0..101).map(|k| k as f64 / 100.0).collect();
        let gap = s_grid
            .iter()
            .map(|s| depth + 2.0 * libm::fabs(s - at).min(0.5))
            .collect();
        SpectrumProfile {
            energies: Vec::new(),
            gap,
            s_star: at,
            g_min: depth,
            degenerate_at_end: false,
            s_grid,
        }
    }

    #[test]
    fn gap_ratio_lands_left_of_the_dip() {
        // gap = 0.01 + 2|s - 0.8|; ten times g_min needs |s - 0.8| >= 0.045
        let p = choose_sample_point(&dip(0.8, 0.01), &SamplePointRule::GapRatio { rho: 10.0 }).unwrap();
        assert!(!p.fallback);
        assert!((p.s - 0.75).abs() < 1e-12);
    }

    #[test]
    fn fixed_offset_and_clamp() {
        let rule = SamplePointRule::FixedOffset { delta: 0.05 };
        assert!((choose_sample_point(&dip(0.8, 0.1), &rule).unwrap().s - 0.75).abs() < 1e-12);
        assert_eq!(choose_sample_point(&dip(0.02, 0.1), &rule).unwrap().s, 0.0);
    }

    #[test]
    fn falls_back_without_a_shoulder() {
        let p = choose_sample_point(&dip(0.8, 1.0), &SamplePointRule::GapRatio { rho: 10.0 }).unwrap();
        assert!(p.fallback);
        assert!((p.s - 0.75).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_rules() {
        assert!(SamplePointRule::GapRatio { rho: 1.0 }.validate().is_err());
        assert!(SamplePointRule::FixedOffset { delta: 0.3 }.validate().is_err());
        assert!(SamplePointRule::FixedOffset { delta: 0.0 }.validate().is_err());
    }
}
