use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParamsError {
    #[error("contribution fraction {0} outside [0, 1)")]
    Contribution(f64),
    #[error("cosine cutoff {0} outside [0, 1]")]
    Cosine(f64),
    #[error("factor count must be at least 1")]
    FactorCount,
    #[error("anchor weight {0} must be non-negative")]
    AnchorWeight(f64),
}

/// Thresholds and knobs shared by the aggregation, mapping and layout stages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalysisParams {
    /// A journal enters an environment when its count exceeds this share of the
    /// environment total.
    pub contribution_fraction: f64,
    /// Edges are kept when the cosine is strictly above this value.
    pub cosine_cutoff: f64,
    pub include_diagonal_in_similarity: bool,
    pub factor_count: Option<usize>,
    pub rng_seed: u64,
    /// Restrict citing documents to article, review, letter and proceedings paper.
    pub citable_only: bool,
    /// Inter-frame stability weight for animation layouts.
    pub anchor_weight: f64,
    /// Glyph scale applied to log-frequency node sizes.
    pub size_scale: f64,
}

impl Default for AnalysisParams {
    fn default() -> Self {
        AnalysisParams {
            contribution_fraction: 0.01,
            cosine_cutoff: 0.0,
            include_diagonal_in_similarity: false,
            factor_count: None,
            rng_seed: 1,
            citable_only: false,
            anchor_weight: 1.0,
            size_scale: 1.0,
        }
    }
}

impl AnalysisParams {
    /// Half-percent contribution threshold for humanities environments.
    pub fn humanities() -> Self {
        AnalysisParams {
            contribution_fraction: 0.005,
            ..Default::default()
        }
    }

    /// Cosine > 0.2 preset used to bring out structure in dense maps.
    pub fn structural() -> Self {
        AnalysisParams {
            cosine_cutoff: 0.2,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        let f = self.contribution_fraction;
        if !(0.0..1.0).contains(&f) {
            return Err(ParamsError::Contribution(f));
        }
        let c = self.cosine_cutoff;
        if !(0.0..=1.0).contains(&c) {
            return Err(ParamsError::Cosine(c));
        }
        if self.factor_count == Some(0) {
            return Err(ParamsError::FactorCount);
        }
        if self.anchor_weight.is_nan() || self.anchor_weight < 0.0 {
            return Err(ParamsError::AnchorWeight(self.anchor_weight));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets() {
        assert_eq!(AnalysisParams::default().contribution_fraction, 0.01);
        assert_eq!(AnalysisParams::default().cosine_cutoff, 0.0);
        assert_eq!(AnalysisParams::humanities().contribution_fraction, 0.005);
        assert_eq!(AnalysisParams::structural().cosine_cutoff, 0.2);
        assert!(AnalysisParams::default().validate().is_ok());
    }

    #[test]
    fn rejects_out_of_range() {
        let p = AnalysisParams {
            contribution_fraction: 1.0,
            ..Default::default()
        };
        assert_eq!(p.validate(), Err(ParamsError::Contribution(1.0)));
        let p = AnalysisParams {
            cosine_cutoff: -0.1,
            ..Default::default()
        };
        assert!(p.validate().is_err());
        let p = AnalysisParams {
            factor_count: Some(0),
            ..Default::default()
        };
        assert_eq!(p.validate(), Err(ParamsError::FactorCount));
    }

    #[test]
    fn partial_json_uses_defaults() {
        let p: AnalysisParams = serde_json::from_str(r#"{"cosine_cutoff": 0.2}"#).unwrap();
        assert_eq!(p.cosine_cutoff, 0.2);
        assert_eq!(p.contribution_fraction, 0.01);
    }
}
