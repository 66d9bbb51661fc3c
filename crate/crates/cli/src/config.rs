//! Run configuration. A TOML file with optional top-level `seed` and
//! `threads` and one table per command:
//!
//! ```toml
//! seed = 20
//! threads = 0            # 0 uses every core
//!
//! [freq]                 # freq-convergence
//! degree = 1
//! s = [0.0, -2.5]
//! h = [0.2, 0.1, 0.05, 0.025]
//! n_points = 20
//! solver = "monolithic"  # or "schur"
//! pattern = "criss_cross" # or "right"
//!
//! [time]                 # time-convergence
//! degree = 2
//! scheme = "tr"          # or "bdf2"
//! t_final = 1.5
//! h = [0.2, 0.1, 0.05, 0.025]
//! kappa = [0.075, 0.0375, 0.01875, 0.009375]
//! cq_eps = 1e-14
//!
//! [simulate]             # simulate
//! radius = 0.5           # regular pentagon, or give `vertices`
//! h = 0.1
//! degree = 2
//! scheme = "tr"
//! kappa = 0.005
//! t_final = 1.75
//! snapshots = [0.175, 0.35]
//! grid_min = [-1.5, -1.5]
//! grid_max = [1.5, 1.5]
//! grid_n = 41
//! dirichlet = { kind = "everywhere" }
//!
//! [simulate.materials]
//! lambda = 2.0
//! mu = 3.0
//! rho_solid = "gaussian_bump" # or a number
//! c = 1.0
//! rho_fluid = 1.0
//!
//! [simulate.pulse]
//! amplitude = 3.0
//! omega = 88.0
//! width = 0.3
//! direction = [1.0, 5.0]
//! delay = 0.55
//! ```
//!
//! Every key is optional; missing keys take the defaults shown. Unknown
//! keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use pzwave::verify::{FreqStudy, SampleConfig, TimeStudy};

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Overrides the seeds of both convergence studies.
    pub seed: Option<u64>,
    pub threads: usize,
    pub freq: FreqStudy,
    pub time: TimeStudy,
    pub simulate: SampleConfig,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Applies a command-line seed; without one the file's seed (if any)
    /// is pushed into the studies.
    pub fn apply_seed(&mut self, seed: Option<u64>) {
        if let Some(s) = seed.or(self.seed) {
            self.seed = Some(s);
            self.freq.seed = s;
            self.time.seed = s;
        }
    }

    pub fn check(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        let positive = |name: &str, v: &[f64]| {
            if v.is_empty() {
                return Err(CliError::Config(format!("`{name}` must not be empty")));
            }
            match v.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
                Some(x) => Err(CliError::Config(format!("`{name}` must be positive, got {x}"))),
                None => Ok(()),
            }
        };
        for (name, k) in [
            ("freq.degree", self.freq.degree),
            ("time.degree", self.time.degree),
            ("simulate.degree", self.simulate.degree),
        ] {
            if k != 1 && k != 2 {
                return bad(format!("`{name}` must be 1 or 2, got {k}"));
            }
        }
        positive("freq.h", &self.freq.h)?;
        positive("time.h", &self.time.h)?;
        positive("time.kappa", &self.time.kappa)?;
        positive("time.t_final", &[self.time.t_final])?;
        if self.time.h.len() != self.time.kappa.len() {
            return bad(format!(
                "`time.h` and `time.kappa` differ in length ({} vs {})",
                self.time.h.len(),
                self.time.kappa.len()
            ));
        }
        if self.freq.s[0] < 0.0 || (self.freq.s[0] == 0.0 && self.freq.s[1] == 0.0) {
            return bad(format!("`freq.s` must have Re s >= 0 and s != 0, got {:?}", self.freq.s));
        }
        let sim = &self.simulate;
        positive("simulate.h", &[sim.h])?;
        positive("simulate.kappa", &[sim.kappa])?;
        positive("simulate.t_final", &[sim.t_final])?;
        positive("simulate.radius", &[sim.radius])?;
        if sim.grid_n < 2 {
            return bad("`simulate.grid_n` must be at least 2".into());
        }
        if let Some(t) = sim.snapshots.iter().find(|t| !(**t >= 0.0 && **t <= sim.t_final)) {
            return bad(format!("snapshot time {t} lies outside [0, {}]", sim.t_final));
        }
        if sim.pulse.direction[0] == 0.0 && sim.pulse.direction[1] == 0.0 {
            return bad("`simulate.pulse.direction` must be nonzero".into());
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).unwrap_or_default()
    }
}
