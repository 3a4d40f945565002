//! JSON configuration for languages, classes, generators, adversaries and
//! scenarios.
//!
//! Atoms serialize as `{"finite": [...]}` or
//! `{"progression": {"start": a, "stride": d}}`. Classes are either explicit
//! language lists or named parametric builders (`venn`, `littlestone`,
//! `tradeoff`, `random`). Generator and adversary selectors follow the
//! string forms `weighted`/`uniform_baseline`/`modified_greedy`/`lfd` and
//! `enumerator:i` / `venn:n` / `littlestone:n` / `tradeoff:n,iStar` /
//! `noisy` (with `base`, and `steps` or `m`).

use crate::classes;
use crate::error::Error;
use crate::lang::{Atom, Language, LanguageClass};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LanguageConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub atoms: Vec<Atom>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ClassConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builder: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element_bound: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_cap: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub languages: Option<Vec<LanguageConfig>>,
}

impl ClassConfig {
    /// Builds the class; `seed` feeds the `random` builder.
    pub fn resolve(&self, seed: u64) -> Result<LanguageClass, Error> {
        if let Some(languages) = &self.languages {
            let langs: Result<Vec<Language>, Error> = languages
                .iter()
                .map(|lc| Language::new(lc.atoms.clone(), lc.label.clone()))
                .collect();
            return Ok(LanguageClass::finite(langs?));
        }
        let builder = self
            .builder
            .as_deref()
            .ok_or_else(|| Error::config("class", "either `languages` or `builder` is required"))?;
        match builder {
            "venn" => {
                let n = self
                    .n
                    .ok_or_else(|| Error::config("class.n", "venn needs n"))?;
                Ok(classes::venn_class(n))
            }
            "littlestone" => {
                let n = self
                    .n
                    .ok_or_else(|| Error::config("class.n", "littlestone needs n"))?;
                classes::littlestone_class(n as usize)
            }
            "tradeoff" => {
                let n = self
                    .n
                    .ok_or_else(|| Error::config("class.n", "tradeoff needs n"))?;
                let max_index = self.max_index.unwrap_or(8);
                let row_cap = self.row_cap.unwrap_or(max_index as u64 + 1);
                classes::tradeoff_class(n, max_index, row_cap)
            }
            "random" => {
                let count = self.count.unwrap_or(5);
                let bound = self.element_bound.unwrap_or(64);
                Ok(classes::random_class(count, bound, seed))
            }
            other => Err(Error::config(
                "class.builder",
                format!("unknown builder `{other}`"),
            )),
        }
    }

    pub fn describe(&self) -> String {
        if self.languages.is_some() {
            return self.name.clone().unwrap_or_else(|| "explicit".into());
        }
        let mut parts = vec![self.builder.clone().unwrap_or_default()];
        if let Some(n) = self.n {
            parts.push(format!("n={n}"));
        }
        if let Some(c) = self.count {
            parts.push(format!("count={c}"));
        }
        if let Some(m) = self.max_index {
            parts.push(format!("max_index={m}"));
        }
        parts.join(":")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub generator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriorKind {
    Uniform,
    InverseSquare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthKind {
    /// `constant` (class size) or `constant:N`.
    Constant(Option<u64>),
    PowerOfTwo,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorKind {
    Weighted {
        prior: PriorKind,
        growth: GrowthKind,
    },
    UniformBaseline,
    ModifiedGreedy,
    Lfd {
        gamma: String,
        prior: PriorKind,
        growth: GrowthKind,
    },
}

impl GeneratorConfig {
    pub fn parse(&self) -> Result<GeneratorKind, Error> {
        let prior = || -> Result<PriorKind, Error> {
            match self.prior.as_deref() {
                Some("uniform") => Ok(PriorKind::Uniform),
                Some("inverse_square") => Ok(PriorKind::InverseSquare),
                Some(other) => Err(Error::config(
                    "generator.prior",
                    format!("unknown prior `{other}`"),
                )),
                None => Err(Error::config("generator.prior", "prior is required")),
            }
        };
        let growth = || -> Result<GrowthKind, Error> {
            match self.growth.as_deref() {
                Some("pow2") => Ok(GrowthKind::PowerOfTwo),
                Some("constant") => Ok(GrowthKind::Constant(None)),
                Some(s) if s.starts_with("constant:") => {
                    let n = s["constant:".len()..].parse::<u64>().map_err(|_| {
                        Error::config("generator.growth", format!("bad constant size in `{s}`"))
                    })?;
                    Ok(GrowthKind::Constant(Some(n)))
                }
                Some(other) => Err(Error::config(
                    "generator.growth",
                    format!("unknown growth `{other}`"),
                )),
                None => Err(Error::config("generator.growth", "growth is required")),
            }
        };
        match self.generator.as_str() {
            "weighted" => Ok(GeneratorKind::Weighted {
                prior: prior()?,
                growth: growth()?,
            }),
            "uniform_baseline" => Ok(GeneratorKind::UniformBaseline),
            "modified_greedy" => Ok(GeneratorKind::ModifiedGreedy),
            "lfd" => Ok(GeneratorKind::Lfd {
                gamma: self
                    .gamma
                    .clone()
                    .ok_or_else(|| Error::config("generator.gamma", "gamma is required"))?,
                prior: prior()?,
                growth: growth()?,
            }),
            other => Err(Error::config(
                "generator.generator",
                format!("unknown generator `{other}`"),
            )),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct AdversaryConfig {
    pub adversary: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<Atom>,
    // numeric fallbacks for selectors without colon parameters, so sweeps
    // can drive them through plain JSON paths
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i_star: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdversaryKind {
    Enumerator {
        target: usize,
    },
    Venn {
        n: u64,
    },
    Littlestone {
        n: usize,
    },
    Tradeoff {
        n: u64,
        i_star: usize,
    },
    Noisy {
        base: Box<AdversaryKind>,
        steps: Vec<u64>,
        source: Option<Atom>,
    },
}

fn parse_selector(cfg: &AdversaryConfig, s: &str, path: &str) -> Result<AdversaryKind, Error> {
    let (kind, args) = match s.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (s, None),
    };
    let one = |fallback: Option<u64>| -> Result<u64, Error> {
        args.and_then(|a| a.parse().ok())
            .or(fallback)
            .ok_or_else(|| Error::config(path, format!("`{s}` needs one numeric parameter")))
    };
    match kind {
        "enumerator" => Ok(AdversaryKind::Enumerator {
            target: one(cfg.target.map(|t| t as u64))? as usize,
        }),
        "venn" => Ok(AdversaryKind::Venn { n: one(cfg.n)? }),
        "littlestone" => Ok(AdversaryKind::Littlestone {
            n: one(cfg.n)? as usize,
        }),
        "tradeoff" => {
            let from_args = args.and_then(|a| {
                a.split_once(',')
                    .and_then(|(x, y)| Some((x.trim().parse().ok()?, y.trim().parse().ok()?)))
            });
            let (n, i_star) = match from_args {
                Some(pair) => pair,
                None => match (cfg.n, cfg.i_star) {
                    (Some(n), Some(i_star)) => (n, i_star),
                    _ => {
                        return Err(Error::config(path, "tradeoff needs `n,iStar`"));
                    }
                },
            };
            Ok(AdversaryKind::Tradeoff { n, i_star })
        }
        other => Err(Error::config(path, format!("unknown adversary `{other}`"))),
    }
}

impl AdversaryConfig {
    pub fn parse(&self) -> Result<AdversaryKind, Error> {
        if self.adversary == "noisy" {
            let base_str = self
                .base
                .as_deref()
                .ok_or_else(|| Error::config("adversary.base", "noisy needs a base selector"))?;
            let base = parse_selector(self, base_str, "adversary.base")?;
            let steps = match (&self.steps, self.m) {
                (Some(steps), _) => steps.clone(),
                (None, Some(m)) => (0..m).map(|k| 3 + 4 * k).collect(),
                (None, None) => {
                    return Err(Error::config(
                        "adversary.steps",
                        "noisy needs `steps` or `m`",
                    ))
                }
            };
            return Ok(AdversaryKind::Noisy {
                base: Box::new(base),
                steps,
                source: self.source.clone(),
            });
        }
        parse_selector(self, &self.adversary, "adversary.adversary")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<ClassConfig>,
    pub generator: GeneratorConfig,
    pub adversary: AdversaryConfig,
    pub horizon: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<u64>>,
    /// Relax adversary uniqueness (off by default, noisy exploration only).
    #[serde(default)]
    pub allow_repeats_noisy: bool,
}

pub fn class_from_json(json: &str) -> Result<ClassConfig, Error> {
    Ok(serde_json::from_str(json)?)
}

impl ScenarioConfig {
    pub fn from_json(json: &str) -> Result<ScenarioConfig, Error> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn from_path(path: &std::path::Path) -> Result<ScenarioConfig, Error> {
        let text = std::fs::read_to_string(path)?;
        ScenarioConfig::from_json(&text)
    }

    pub fn seeds(&self) -> Vec<u64> {
        self.seeds.clone().unwrap_or_else(|| vec![0])
    }
}
