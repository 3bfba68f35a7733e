//! The run configuration embedded in every output file. It holds everything
//! needed to regenerate the output except the destination path.

use std::fmt;

use direop::numerics::MIN_NODES;
use direop::potentials::{Family, PotentialSpec};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    Oscillator,
    Scarf,
    Pt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Quick,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum CommandConfig {
    Potential,
    Wavefunction {
        n: usize,
    },
    Spectrum {
        levels: usize,
        check: bool,
        tol: f64,
    },
    Verify {
        suite: Suite,
        tol: Option<f64>,
        perturb_energy: f64,
        perturb_level: Option<usize>,
    },
}

impl CommandConfig {
    pub fn name(&self) -> &'static str {
        match self {
            CommandConfig::Potential => "potential",
            CommandConfig::Wavefunction { .. } => "wavefunction",
            CommandConfig::Spectrum { .. } => "spectrum",
            CommandConfig::Verify { .. } => "verify",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandConfig,
    pub family: Option<FamilyName>,
    pub omega: Option<f64>,
    pub ell: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub m: Vec<u32>,
    pub parametric: bool,
    pub grid_count: usize,
    pub tail_tol: f64,
    pub seed: u64,
    pub format: Format,
    pub points: usize,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
}

/// A bad flag combination or an inadmissible spec; maps to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<T>(msg: impl Into<String>) -> anyhow::Result<T> {
    Err(UsageError(msg.into()).into())
}

impl RunConfig {
    pub fn family(&self) -> anyhow::Result<Family> {
        let need = |v: Option<f64>, flag: &str, fam: &str| match v {
            Some(v) => Ok(v),
            None => usage(format!("--{flag} is required for --family {fam}")),
        };
        match self.family {
            Some(FamilyName::Oscillator) => Ok(Family::RadialOscillator {
                omega: need(self.omega, "omega", "oscillator")?,
                ell: need(self.ell, "ell", "oscillator")?,
            }),
            Some(FamilyName::Scarf) => Ok(Family::TrigScarf {
                a: need(self.a, "A", "scarf")?,
                b: need(self.b, "B", "scarf")?,
            }),
            Some(FamilyName::Pt) => Ok(Family::HypPoschlTeller {
                a: need(self.a, "A", "pt")?,
                b: need(self.b, "B", "pt")?,
            }),
            None => usage("--family is required"),
        }
    }

    /// One validated spec per requested m.
    pub fn specs(&self) -> anyhow::Result<Vec<PotentialSpec>> {
        let family = self.family()?;
        if self.m.is_empty() {
            return usage("--m needs at least one value");
        }
        self.m
            .iter()
            .map(|&m| {
                let spec = PotentialSpec::new(family, m, self.parametric);
                match spec.validate() {
                    Ok(_) => Ok(spec),
                    Err(e) => usage(format!("{spec}: {e}")),
                }
            })
            .collect()
    }

    pub fn check(&self) -> anyhow::Result<()> {
        if self.points < MIN_NODES {
            return usage(format!("--points must be at least {MIN_NODES}"));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol <= 1e-6) {
            return usage(format!(
                "--tail-tol must lie in (0, 1e-6], got {}",
                self.tail_tol
            ));
        }
        match (self.x_min, self.x_max) {
            (Some(lo), Some(hi)) if !(lo < hi) => {
                usage(format!("--x-min {lo} must be below --x-max {hi}"))
            }
            _ => Ok(()),
        }
    }
}
