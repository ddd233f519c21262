//! Declarative run configuration: one TOML file describes one experiment.

use crate::usage;
use anyhow::{Context, Result};
use axdse::accel::{synthetic_set, Benchmark, GrayImage};
use axdse::circgen::LibrarySpec;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub benchmark: Benchmark,
    /// Root seed; stage seeds are derived from it.
    pub seed: u64,
    pub images: ImageConfig,
    /// Gaussian kernels per image (generic GF only).
    pub kernels: usize,
    /// Circuit grids; the default grids of the benchmark's classes when absent.
    pub library: Option<LibrarySpec>,
    /// Evenly thins every reduced library to at most this many circuits.
    pub max_per_node: Option<usize>,
    pub sampling: SamplingConfig,
    /// Learned engines competing with the naive model.
    pub engines: Vec<String>,
    pub explore: ExploreConfig,
    /// Relative error levels of the uniform-selection baseline.
    pub uniform_levels: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ImageConfig {
    /// Directory of PGM files; synthetic images when absent.
    pub dir: Option<PathBuf>,
    pub count: usize,
    pub width: usize,
    pub height: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingConfig {
    pub train: usize,
    pub test: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExploreConfig {
    pub budget: usize,
    pub stagnation: usize,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            benchmark: Benchmark::Sobel,
            seed: 1,
            images: ImageConfig::default(),
            kernels: 50,
            library: None,
            max_per_node: None,
            sampling: SamplingConfig::default(),
            engines: ["linear", "knn", "decision_tree", "random_forest"].map(String::from).to_vec(),
            explore: ExploreConfig::default(),
            uniform_levels: 20,
        }
    }
}

impl Default for ImageConfig {
    fn default() -> ImageConfig {
        ImageConfig {
            dir: None,
            count: 4,
            width: 64,
            height: 64,
        }
    }
}

impl Default for SamplingConfig {
    fn default() -> SamplingConfig {
        SamplingConfig { train: 1500, test: 1500 }
    }
}

impl Default for ExploreConfig {
    fn default() -> ExploreConfig {
        ExploreConfig {
            budget: 100_000,
            stagnation: 50,
        }
    }
}

/// Seed of a pipeline stage, decorrelated from the root seed.
pub fn stage_seed(root: u64, stage: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in stage.bytes() {
        h = (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3);
    }
    h ^ root.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: RunConfig = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("run configuration serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.images.dir.is_none() && (self.images.count == 0 || self.images.width < 3 || self.images.height < 3) {
            return Err(usage("synthetic images need count >= 1 and sides >= 3"));
        }
        if self.benchmark == Benchmark::GenericGf && self.kernels == 0 {
            return Err(usage("generic_gf needs at least one kernel"));
        }
        if self.sampling.train == 0 || self.sampling.test == 0 {
            return Err(usage("train and test sample counts must be positive"));
        }
        if self.explore.budget == 0 {
            return Err(usage("exploration budget must be at least 1"));
        }
        if self.explore.stagnation == 0 {
            return Err(usage("stagnation limit must be at least 1"));
        }
        if self.max_per_node == Some(0) {
            return Err(usage("max_per_node must be at least 1"));
        }
        Ok(())
    }

    pub fn library_spec(&self) -> LibrarySpec {
        self.library.clone().unwrap_or_else(|| {
            let classes: Vec<_> = self.benchmark.graph().class_counts().into_keys().collect();
            LibrarySpec::default_for(&classes)
        })
    }

    /// Benchmark images: every `*.pgm` of the configured directory in name
    /// order, or the synthetic set.
    pub fn load_images(&self) -> Result<Vec<GrayImage>> {
        let Some(dir) = &self.images.dir else {
            let i = &self.images;
            return Ok(synthetic_set(i.count, i.width, i.height, stage_seed(self.seed, "images")));
        };
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
            .with_context(|| format!("reading image directory {}", dir.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("pgm")))
            .collect();
        paths.sort();
        if paths.is_empty() {
            return Err(usage(format!("no .pgm images in {}", dir.display())));
        }
        paths
            .iter()
            .map(|p| GrayImage::read_pgm(p).with_context(|| format!("loading {}", p.display())))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip_and_defaults() {
        let cfg: RunConfig = toml::from_str("benchmark = \"generic_gf\"\n[explore]\nbudget = 10\n").unwrap();
        assert_eq!(cfg.benchmark, Benchmark::GenericGf);
        assert_eq!(cfg.explore.budget, 10);
        assert_eq!(cfg.explore.stagnation, 50);
        let back: RunConfig = toml::from_str(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
        assert!(toml::from_str::<RunConfig>("bogus = 1").is_err());
        let zero = RunConfig {
            explore: ExploreConfig { budget: 0, stagnation: 50 },
            ..RunConfig::default()
        };
        assert!(zero.validate().is_err());
    }
}
