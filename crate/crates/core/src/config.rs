//! Run configuration shared by all analysis pipelines.

use crate::error::Error;

/// Coefficient rule for the first generator (the weighted Euler pair) in the
/// six-generator codimension recipe. The remaining five generators always
/// carry full function coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorMode {
    /// Pick the calibrated default (resolved to one of the explicit modes).
    Auto,
    /// All six generators generate a module over the plane local ring.
    AllModule,
    /// The Euler pair enters as a single scalar direction; the other five
    /// generate a module.
    MixedEuler,
}

impl std::fmt::Display for GeneratorMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GeneratorMode::Auto => "auto",
            GeneratorMode::AllModule => "all_module",
            GeneratorMode::MixedEuler => "mixed",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Config {
    /// Hard cap on the truncation degree of every escalation schedule.
    pub max_degree: u32,
    /// Number of consecutive equal values required to declare the
    /// right-left codimension stabilized (>= 2).
    pub ae_plateau: usize,
    /// Generator coefficient rule for the preform codimension recipe.
    pub generator_mode: GeneratorMode,
    /// Master seed for the seeded family experiment.
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config { max_degree: 14, ae_plateau: 3, generator_mode: GeneratorMode::Auto, seed: 0 }
    }
}

impl Config {
    pub fn with_max_degree(mut self, d: u32) -> Self {
        self.max_degree = d;
        self
    }

    pub fn validate(&self, germ_degree: u32) -> Result<(), Error> {
        if self.ae_plateau < 2 {
            return Err(Error::BadConfig(format!(
                "plateau length must be at least 2, got {}",
                self.ae_plateau
            )));
        }
        if self.max_degree < germ_degree.max(2) {
            return Err(Error::BadConfig(format!(
                "degree cap {} is below the schedule start {}",
                self.max_degree,
                germ_degree.max(2)
            )));
        }
        Ok(())
    }
}
