//! Experiment configuration and its metadata echo.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use super::ToolError;
use crate::classification::ClassifierDepth;
use crate::sphere::DeltaSpec;

/// The five simulation studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Curves,
    Bdp,
    Efficiency,
    Robustness,
    Classification,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::Curves,
        Experiment::Bdp,
        Experiment::Efficiency,
        Experiment::Robustness,
        Experiment::Classification,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Experiment::Curves => "curves",
            Experiment::Bdp => "bdp",
            Experiment::Efficiency => "efficiency",
            Experiment::Robustness => "robustness",
            Experiment::Classification => "classification",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Experiment {
    type Err = ToolError;

    fn from_str(s: &str) -> Result<Self, ToolError> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| ToolError::Config(format!("unknown experiment '{s}'")))
    }
}

/// Depth named in a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum KernelTag {
    Arc,
    Cos,
    Chord,
    Asd,
    Atd,
}

impl KernelTag {
    pub const DISTANCES: [KernelTag; 3] = [KernelTag::Arc, KernelTag::Cos, KernelTag::Chord];
    pub const ALL: [KernelTag; 5] = [KernelTag::Arc, KernelTag::Cos, KernelTag::Chord, KernelTag::Asd, KernelTag::Atd];

    pub fn as_str(self) -> &'static str {
        match self {
            KernelTag::Arc => "arc",
            KernelTag::Cos => "cos",
            KernelTag::Chord => "chord",
            KernelTag::Asd => "asd",
            KernelTag::Atd => "atd",
        }
    }

    pub fn is_baseline(self) -> bool {
        matches!(self, KernelTag::Asd | KernelTag::Atd)
    }

    /// The distance kernel, `None` for the circle baselines.
    pub fn delta(self) -> Option<DeltaSpec> {
        match self {
            KernelTag::Arc => Some(DeltaSpec::arc()),
            KernelTag::Cos => Some(DeltaSpec::cos()),
            KernelTag::Chord => Some(DeltaSpec::chord()),
            KernelTag::Asd | KernelTag::Atd => None,
        }
    }

    pub fn classifier_depth(self) -> ClassifierDepth {
        match self {
            KernelTag::Asd => ClassifierDepth::Asd,
            KernelTag::Atd => ClassifierDepth::Atd,
            other => ClassifierDepth::Distance(other.delta().expect("distance kernel")),
        }
    }
}

impl fmt::Display for KernelTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for KernelTag {
    type Err = ToolError;

    fn from_str(s: &str) -> Result<Self, ToolError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "arc" | "add" => Ok(KernelTag::Arc),
            "cos" | "cosine" | "cdd" => Ok(KernelTag::Cos),
            "chord" | "chdd" => Ok(KernelTag::Chord),
            "asd" => Ok(KernelTag::Asd),
            "atd" => Ok(KernelTag::Atd),
            other => Err(ToolError::Config(format!("unknown kernel '{other}'"))),
        }
    }
}

/// Contamination site relative to the location `theta = e_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    /// `e_{q-1}`
    Orthogonal,
    /// `-e_q`
    Antipodal,
}

impl Site {
    pub fn as_str(self) -> &'static str {
        match self {
            Site::Orthogonal => "orthogonal",
            Site::Antipodal => "antipodal",
        }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Site {
    type Err = ToolError;

    fn from_str(s: &str) -> Result<Self, ToolError> {
        match s {
            "orthogonal" => Ok(Site::Orthogonal),
            "antipodal" => Ok(Site::Antipodal),
            other => Err(ToolError::Config(format!("unknown contamination site '{other}'"))),
        }
    }
}

/// Classification setup. `Control` uses the same law for both populations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Setup {
    A,
    B,
    C,
    Control,
}

impl Setup {
    pub fn as_str(self) -> &'static str {
        match self {
            Setup::A => "A",
            Setup::B => "B",
            Setup::C => "C",
            Setup::Control => "control",
        }
    }

    pub(crate) fn index(self) -> u64 {
        match self {
            Setup::A => 0,
            Setup::B => 1,
            Setup::C => 2,
            Setup::Control => 3,
        }
    }
}

impl fmt::Display for Setup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Setup {
    type Err = ToolError;

    fn from_str(s: &str) -> Result<Self, ToolError> {
        match s {
            "A" | "a" => Ok(Setup::A),
            "B" | "b" => Ok(Setup::B),
            "C" | "c" => Ok(Setup::C),
            "control" => Ok(Setup::Control),
            other => Err(ToolError::Config(format!("unknown setup '{other}'"))),
        }
    }
}

/// Everything needed to rerun one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: u64,
    /// Replications `M`.
    pub replications: usize,
    pub q: Vec<usize>,
    pub n: Vec<usize>,
    pub n_train: usize,
    pub n_test: usize,
    pub kappa: Vec<f64>,
    pub eps: Vec<f64>,
    pub sites: Vec<Site>,
    pub setups: Vec<Setup>,
    pub kernels: Vec<KernelTag>,
    /// Angular grid of depth profiles.
    pub grid: usize,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Desk-scale defaults for `experiment`.
    pub fn desk(experiment: Experiment) -> Self {
        let base = Self {
            experiment,
            seed: 20240601,
            replications: 50,
            q: vec![3],
            n: vec![100],
            n_train: 200,
            n_test: 100,
            kappa: vec![5.0],
            eps: vec![0.0],
            sites: vec![Site::Orthogonal, Site::Antipodal],
            setups: vec![Setup::A, Setup::B, Setup::C],
            kernels: KernelTag::DISTANCES.to_vec(),
            grid: 360,
            output: None,
        };
        match experiment {
            Experiment::Curves => Self {
                replications: 1,
                q: vec![2],
                n: vec![500],
                kernels: KernelTag::ALL.to_vec(),
                ..base
            },
            Experiment::Bdp => Self {
                replications: 1,
                q: vec![2, 3, 5, 10],
                kappa: vec![0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0],
                ..base
            },
            Experiment::Efficiency => Self {
                q: vec![3, 5],
                n: vec![25, 50, 100],
                kappa: vec![5.0, 10.0],
                ..base
            },
            Experiment::Robustness => Self {
                eps: vec![0.0, 0.05, 0.10],
                ..base
            },
            Experiment::Classification => Self {
                q: vec![2, 10],
                kernels: KernelTag::ALL.to_vec(),
                ..base
            },
        }
    }

    /// Defaults at the scale of the published study.
    pub fn paper(experiment: Experiment) -> Self {
        let desk = Self::desk(experiment);
        match experiment {
            Experiment::Efficiency | Experiment::Robustness => Self {
                replications: 500,
                ..desk
            },
            Experiment::Classification => Self {
                replications: 250,
                ..desk
            },
            Experiment::Curves => Self { grid: 1440, ..desk },
            Experiment::Bdp => Self {
                kappa: (1..=200).map(|k| k as f64 * 0.5).collect(),
                ..desk
            },
        }
    }

    /// Checks counts and kernel availability.
    pub fn validate(&self) -> Result<(), ToolError> {
        let bad = |m: String| Err(ToolError::Config(m));
        if self.kernels.is_empty() {
            return bad("at least one kernel is required".into());
        }
        if self.q.is_empty() || self.q.iter().any(|&q| q < 2) {
            return bad("dimensions must be at least 2".into());
        }
        if self.replications == 0 {
            return bad("replication count must be positive".into());
        }
        if self.n.is_empty() || self.n.contains(&0) || self.n_train == 0 || self.n_test == 0 {
            return bad("sample sizes must be positive".into());
        }
        if self.kappa.is_empty() || self.kappa.iter().any(|k| !(*k > 0.0) || !k.is_finite()) {
            return bad("concentrations must be positive and finite".into());
        }
        if self.eps.iter().any(|e| !(0.0..=1.0).contains(e)) {
            return bad("contamination levels must lie in [0, 1]".into());
        }
        if self.grid < 4 {
            return bad("grid must have at least 4 points".into());
        }
        let baselines = self.kernels.iter().any(|k| k.is_baseline());
        match self.experiment {
            Experiment::Curves if self.q != [2] => return bad("depth curves are defined for q = 2 only".into()),
            Experiment::Bdp | Experiment::Efficiency | Experiment::Robustness if baselines => {
                return bad(format!("asd/atd are not available for the {} experiment", self.experiment))
            }
            Experiment::Classification if baselines && !self.q.contains(&2) => {
                return bad("asd/atd require q = 2".into())
            }
            Experiment::Classification if self.setups.is_empty() => return bad("no classification setups".into()),
            Experiment::Robustness if self.sites.is_empty() || self.eps.is_empty() => {
                return bad("robustness needs contamination levels and sites".into())
            }
            _ => {}
        }
        Ok(())
    }

    /// Key=value echo of every field, in a fixed order.
    pub fn to_metadata(&self) -> Vec<(String, String)> {
        fn join<T: ToString>(xs: &[T]) -> String {
            xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(";")
        }
        let reals = |xs: &[f64]| xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(";");
        vec![
            ("experiment".into(), self.experiment.to_string()),
            ("seed".into(), self.seed.to_string()),
            ("M".into(), self.replications.to_string()),
            ("q".into(), join(&self.q)),
            ("n".into(), join(&self.n)),
            ("n_train".into(), self.n_train.to_string()),
            ("n_test".into(), self.n_test.to_string()),
            ("kappa".into(), reals(&self.kappa)),
            ("eps".into(), reals(&self.eps)),
            ("sites".into(), join(&self.sites)),
            ("setups".into(), join(&self.setups)),
            ("kernels".into(), join(&self.kernels)),
            ("grid".into(), self.grid.to_string()),
            (
                "output".into(),
                self.output.as_ref().map(|p| p.display().to_string()).unwrap_or_default(),
            ),
        ]
    }

    /// Rebuilds a configuration from its metadata echo; unknown keys are ignored.
    pub fn from_metadata(meta: &[(String, String)]) -> Result<Self, ToolError> {
        let get = |key: &str| {
            meta.iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| ToolError::Config(format!("metadata lacks '{key}'")))
        };
        fn list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>, ToolError> {
            if v.is_empty() {
                return Ok(Vec::new());
            }
            v.split(';')
                .map(|x| x.parse::<T>().map_err(|_| ToolError::Config(format!("bad value '{x}' for '{key}'"))))
                .collect()
        }
        fn one<T: FromStr>(key: &str, v: &str) -> Result<T, ToolError> {
            v.parse::<T>().map_err(|_| ToolError::Config(format!("bad value '{v}' for '{key}'")))
        }
        let output = get("output")?;
        Ok(Self {
            experiment: get("experiment")?.parse()?,
            seed: one("seed", get("seed")?)?,
            replications: one("M", get("M")?)?,
            q: list("q", get("q")?)?,
            n: list("n", get("n")?)?,
            n_train: one("n_train", get("n_train")?)?,
            n_test: one("n_test", get("n_test")?)?,
            kappa: list("kappa", get("kappa")?)?,
            eps: list("eps", get("eps")?)?,
            sites: list("sites", get("sites")?)?,
            setups: list("setups", get("setups")?)?,
            kernels: list("kernels", get("kernels")?)?,
            grid: one("grid", get("grid")?)?,
            output: (!output.is_empty()).then(|| PathBuf::from(output)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metadata_round_trip() {
        for e in Experiment::ALL {
            for mut c in [ExperimentConfig::desk(e), ExperimentConfig::paper(e)] {
                c.validate().unwrap();
                c.kappa.push(0.1 + 0.2);
                c.output = Some(PathBuf::from("out/x.csv"));
                assert_eq!(ExperimentConfig::from_metadata(&c.to_metadata()).unwrap(), c);
            }
        }
    }

    #[test]
    fn validation() {
        let mut c = ExperimentConfig::desk(Experiment::Efficiency);
        c.kernels = vec![KernelTag::Atd];
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::desk(Experiment::Curves);
        c.q = vec![3];
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::desk(Experiment::Bdp);
        c.kernels.clear();
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::desk(Experiment::Robustness);
        c.eps = vec![1.5];
        assert!(c.validate().is_err());
    }

    #[test]
    fn parsing() {
        assert_eq!("chdd".parse::<KernelTag>().unwrap(), KernelTag::Chord);
        assert!("bogus".parse::<Experiment>().is_err());
        assert_eq!("control".parse::<Setup>().unwrap(), Setup::Control);
    }
}
