//! Experiment configuration: a TOML file overlaid by flags and `PBC_*`
//! environment variables, resolved into an [`ExperimentConfig`].

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use pbc_core::rational::{parse_fraction, to_fraction_string};
use pbc_core::Rational;
use serde::{Deserialize, Serialize};

use crate::RunError;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Q0Sweep,
    RandomSweep,
    Tower,
    LegoDemo,
    DosTable,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Q0Sweep => "q0-sweep",
            Experiment::RandomSweep => "random-sweep",
            Experiment::Tower => "tower",
            Experiment::LegoDemo => "lego-demo",
            Experiment::DosTable => "dos-table",
        }
    }
}

/// Cover family used by `lego-demo`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Q0,
    Random,
    Congruence,
}

/// Inclusive range written `a..b`, or a single value.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RangeRepr", into = "String")]
pub struct IntRange {
    pub start: usize,
    pub end: usize,
}

impl IntRange {
    pub fn iter(self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }
}

impl FromStr for IntRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad range bound {t:?}"))
        };
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
            None => (num(s)?, num(s)?),
        };
        if start > end {
            return Err(format!("empty range {s:?}"));
        }
        Ok(IntRange { start, end })
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

impl From<IntRange> for String {
    fn from(r: IntRange) -> String {
        r.to_string()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RangeRepr {
    Int(usize),
    Text(String),
}

impl TryFrom<RangeRepr> for IntRange {
    type Error = String;

    fn try_from(r: RangeRepr) -> Result<Self, String> {
        match r {
            RangeRepr::Int(v) => Ok(IntRange { start: v, end: v }),
            RangeRepr::Text(s) => s.parse(),
        }
    }
}

/// An exact value written as an integer or `p/q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FractionRepr", into = "String")]
pub struct Fraction(pub Rational);

impl FromStr for Fraction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        parse_fraction(s).map(Fraction).map_err(|e| e.to_string())
    }
}

impl From<Fraction> for String {
    fn from(f: Fraction) -> String {
        to_fraction_string(&f.0)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FractionRepr {
    Int(i64),
    Text(String),
}

impl TryFrom<FractionRepr> for Fraction {
    type Error = String;

    fn try_from(r: FractionRepr) -> Result<Self, String> {
        match r {
            FractionRepr::Int(v) => Ok(Fraction(Rational::from_integer(v.into()))),
            FractionRepr::Text(s) => s.parse(),
        }
    }
}

/// One layer of settings. Every key is optional; later layers win.
#[derive(Clone, Debug, Default, Deserialize, Args)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ConfigLayer {
    #[arg(long, env = "PBC_EXPERIMENT", value_enum)]
    pub experiment: Option<Experiment>,
    /// Number of petals of the base rose.
    #[arg(long, env = "PBC_ELL")]
    pub ell: Option<usize>,
    /// Ball radii, e.g. `1..6`.
    #[arg(long, env = "PBC_R")]
    pub r: Option<IntRange>,
    /// Congruence levels, e.g. `1..4`.
    #[arg(long, env = "PBC_N")]
    pub n: Option<IntRange>,
    /// Highest moment order.
    #[arg(long = "K", env = "PBC_K")]
    #[serde(rename = "K")]
    pub k: Option<usize>,
    #[arg(long, env = "PBC_SAMPLES")]
    pub samples: Option<usize>,
    /// Master seed for every random choice.
    #[arg(long, env = "PBC_SEED")]
    pub seed: Option<u64>,
    /// Largest cover or tree built, in vertices.
    #[arg(long, env = "PBC_CAP_VERTICES")]
    pub cap_vertices: Option<usize>,
    #[arg(long, env = "PBC_OUT")]
    pub out: Option<PathBuf>,
    /// Worker threads; all cores when unset.
    #[arg(long, env = "PBC_THREADS")]
    pub threads: Option<usize>,
    /// Pattern graph in `jacobi-graph` format.
    #[arg(long, env = "PBC_GRAPH")]
    pub graph: Option<PathBuf>,
    #[arg(long, env = "PBC_FAMILY", value_enum)]
    pub family: Option<Family>,
    /// Diagonal value of the rose data.
    #[arg(long, env = "PBC_B", allow_hyphen_values = true)]
    pub b: Option<Fraction>,
    /// Petal couplings, comma separated; one value applies to every petal.
    #[arg(long, env = "PBC_A", value_delimiter = ',')]
    pub a: Option<Vec<Fraction>>,
    /// Radii at which bad-vertex fractions are recorded.
    #[arg(long, env = "PBC_M", value_delimiter = ',')]
    pub m: Option<Vec<usize>>,
}

impl ConfigLayer {
    pub fn from_toml_file(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RunError::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))
    }

    /// `other` wins wherever it is set.
    pub fn overlay(self, other: ConfigLayer) -> ConfigLayer {
        ConfigLayer {
            experiment: other.experiment.or(self.experiment),
            ell: other.ell.or(self.ell),
            r: other.r.or(self.r),
            n: other.n.or(self.n),
            k: other.k.or(self.k),
            samples: other.samples.or(self.samples),
            seed: other.seed.or(self.seed),
            cap_vertices: other.cap_vertices.or(self.cap_vertices),
            out: other.out.or(self.out),
            threads: other.threads.or(self.threads),
            graph: other.graph.or(self.graph),
            family: other.family.or(self.family),
            b: other.b.or(self.b),
            a: other.a.or(self.a),
            m: other.m.or(self.m),
        }
    }

    pub fn resolve(self) -> Result<ExperimentConfig, RunError> {
        let bad = |msg: String| Err(RunError::Config(msg));
        let Some(experiment) = self.experiment else {
            return bad("no experiment given".into());
        };
        let ell = self.ell.unwrap_or(2);
        let k = self.k.unwrap_or(6);
        if k < 2 {
            return bad(format!("K must be at least 2, got {k}"));
        }
        let samples = self.samples.unwrap_or(30);
        if samples == 0 {
            return bad("samples must be positive".into());
        }
        let family = self.family.unwrap_or(Family::Q0);
        let random = experiment == Experiment::RandomSweep
            || (experiment == Experiment::LegoDemo && family == Family::Random);
        if random && self.seed.is_none() {
            return bad(format!("{} draws random covers and needs a seed", experiment.name()));
        }
        let needs_r = matches!(experiment, Experiment::Q0Sweep | Experiment::RandomSweep)
            || (experiment == Experiment::LegoDemo && family != Family::Congruence);
        let needs_n = experiment == Experiment::Tower
            || (experiment == Experiment::LegoDemo && family == Family::Congruence);
        if needs_r && self.r.is_none() {
            return bad(format!("{} needs a radius range r", experiment.name()));
        }
        if needs_n && self.n.is_none() {
            return bad(format!("{} needs a level range n", experiment.name()));
        }
        if let Some(r) = self.r {
            if r.start == 0 {
                return bad("radii start at 1".into());
            }
        }
        if let Some(n) = self.n {
            if n.start == 0 {
                return bad("levels start at 1".into());
            }
        }
        if experiment == Experiment::LegoDemo && self.graph.is_none() {
            return bad("lego-demo needs a pattern graph".into());
        }
        let m = self.m.unwrap_or_else(|| vec![1, 2]);
        if m.is_empty() || m.contains(&0) {
            return bad("bad-vertex radii m must be positive".into());
        }
        let a = match self.a {
            None => vec![Fraction(Rational::from_integer(1.into())); ell],
            Some(a) if a.len() == 1 => vec![a[0].clone(); ell],
            Some(a) if a.len() == ell => a,
            Some(a) => return bad(format!("{} couplings given for ℓ={ell}", a.len())),
        };
        Ok(ExperimentConfig {
            experiment,
            ell,
            r: self.r,
            n: self.n,
            k,
            samples,
            seed: self.seed,
            cap_vertices: self.cap_vertices.unwrap_or(pbc_core::ball::DEFAULT_BALL_CAP),
            out: self.out.unwrap_or_else(|| PathBuf::from("out")),
            threads: self.threads,
            graph: self.graph,
            family,
            b: self.b.unwrap_or(Fraction(Rational::from_integer(0.into()))),
            a,
            m,
        })
    }
}

/// A validated experiment description; echoed into the manifest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub ell: usize,
    pub r: Option<IntRange>,
    pub n: Option<IntRange>,
    #[serde(rename = "K")]
    pub k: usize,
    pub samples: usize,
    pub seed: Option<u64>,
    pub cap_vertices: usize,
    pub out: PathBuf,
    pub threads: Option<usize>,
    pub graph: Option<PathBuf>,
    pub family: Family,
    pub b: Fraction,
    pub a: Vec<Fraction>,
    pub m: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!("1..4".parse::<IntRange>().unwrap(), IntRange { start: 1, end: 4 });
        assert_eq!("1..=4".parse::<IntRange>().unwrap(), IntRange { start: 1, end: 4 });
        assert_eq!("3".parse::<IntRange>().unwrap(), IntRange { start: 3, end: 3 });
        assert!("4..1".parse::<IntRange>().is_err());
        assert!("a..b".parse::<IntRange>().is_err());
    }

    #[test]
    fn toml_layer() {
        let layer: ConfigLayer = toml::from_str(
            "experiment = \"random-sweep\"\nr = \"5..7\"\nK = 4\nseed = 9\nb = \"-1/2\"\na = [1, \"2/3\"]\n",
        )
        .unwrap();
        let c = layer.resolve().unwrap();
        assert_eq!(c.experiment, Experiment::RandomSweep);
        assert_eq!(c.r, Some(IntRange { start: 5, end: 7 }));
        assert_eq!(c.k, 4);
        assert_eq!(String::from(c.b), "-1/2");
        assert_eq!(c.a.len(), 2);
        assert!(toml::from_str::<ConfigLayer>("bogus = 1\n").is_err());
    }

    #[test]
    fn overlay_prefers_the_upper_layer() {
        let file = ConfigLayer {
            ell: Some(3),
            k: Some(8),
            ..Default::default()
        };
        let flags = ConfigLayer {
            k: Some(4),
            ..Default::default()
        };
        let merged = file.overlay(flags);
        assert_eq!((merged.ell, merged.k), (Some(3), Some(4)));
    }

    #[test]
    fn validation() {
        let base = || ConfigLayer {
            experiment: Some(Experiment::RandomSweep),
            r: Some(IntRange { start: 2, end: 3 }),
            seed: Some(1),
            ..Default::default()
        };
        assert!(base().resolve().is_ok());
        let no_seed = ConfigLayer { seed: None, ..base() };
        assert!(matches!(no_seed.resolve(), Err(RunError::Config(_))));
        let small_k = ConfigLayer { k: Some(1), ..base() };
        assert!(small_k.resolve().is_err());
        let no_range = ConfigLayer { r: None, ..base() };
        assert!(no_range.resolve().is_err());
        let couplings = ConfigLayer {
            a: Some(vec!["1".parse().unwrap(); 3]),
            ..base()
        };
        assert!(couplings.resolve().is_err());
    }
}
