//! Job configuration: merge of command-line flags and an optional key=value
//! config file (flags win), resolved into validated parameter sets.

use crate::CommonArgs;
use qortho::qlattice::QContext;
use qortho::scalar::{parse_rat, Rat};
use qortho::solver::MultiIndex;
use qortho::weights::{ClassicalParams, KravchukParams};
use std::collections::HashMap;

#[derive(Debug, Clone)]
pub struct JobConfig {
    entries: HashMap<String, String>,
}

const KNOWN_KEYS: &[&str] = &[
    "family", "v", "p", "beta", "N", "index", "format", "out", "checks", "convention",
    "precision", "delta", "steps",
];

impl JobConfig {
    pub fn from_common(
        common: &CommonArgs,
        extra: &[(&str, Option<String>)],
    ) -> Result<Self, String> {
        let mut entries = HashMap::new();
        if let Some(path) = &common.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("config file `{path}`: {e}"))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| format!("config line {}: expected key=value", lineno + 1))?;
                let key = key.trim();
                if !KNOWN_KEYS.contains(&key) {
                    return Err(format!("config line {}: unknown key `{key}`", lineno + 1));
                }
                entries.insert(key.to_string(), value.trim().to_string());
            }
        }
        let mut put = |key: &str, value: &Option<String>| {
            if let Some(v) = value {
                entries.insert(key.to_string(), v.clone());
            }
        };
        put("family", &common.family);
        put("v", &common.v);
        put("p", &common.p);
        put("beta", &common.beta);
        put("N", &common.big_n);
        put("index", &common.index);
        put("format", &common.format);
        put("out", &common.out);
        for (key, value) in extra {
            put(key, value);
        }
        Ok(JobConfig { entries })
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|s| s.as_str())
    }

    fn require(&self, key: &str) -> Result<&str, String> {
        self.get(key)
            .ok_or_else(|| format!("missing required field `{key}`"))
    }

    fn parse_rat_field(&self, key: &str) -> Result<Rat, String> {
        let raw = self.require(key)?;
        parse_rat(raw).ok_or_else(|| format!("field `{key}`: `{raw}` is not a rational NUM/DEN"))
    }

    fn parse_rat_list(&self, key: &str) -> Result<Vec<Rat>, String> {
        let raw = self.require(key)?;
        raw.split(',')
            .map(|tok| {
                parse_rat(tok)
                    .ok_or_else(|| format!("field `{key}`: `{tok}` is not a rational NUM/DEN"))
            })
            .collect()
    }

    pub fn resolve(&self) -> Result<ResolvedJob, String> {
        let family = self.require("family")?;
        let raw_n = self.require("N")?;
        let big_n: i64 = raw_n
            .parse()
            .map_err(|_| format!("field `N`: `{raw_n}` is not an integer"))?;
        if big_n < 0 {
            return Err("field `N`: must be nonnegative".into());
        }
        let index: Vec<u32> = self
            .require("index")?
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<u32>()
                    .map_err(|_| format!("field `index`: `{tok}` is not a nonnegative integer"))
            })
            .collect::<Result<_, _>>()?;
        let index = MultiIndex::new(index);
        let p = self.parse_rat_list("p")?;
        if index.len() != p.len() {
            return Err(format!(
                "field `index`: has {} entries but `p` has {}",
                index.len(),
                p.len()
            ));
        }

        let family = match family {
            "q" => {
                let v = self.parse_rat_field("v")?;
                let ctx = QContext::new(v).map_err(|e| format!("field `v`: {e}"))?;
                let beta = match self.get("beta") {
                    Some(_) => self.parse_rat_list("beta")?,
                    None => p.iter().map(|pi| Rat::from_integer(1.into()) - pi).collect(),
                };
                let params = KravchukParams::new(ctx, p, beta, big_n)
                    .map_err(|e| format!("field `p`/`beta`: {e}"))?;
                let violations = params.validate();
                if !violations.is_empty() {
                    return Err(format!(
                        "invalid parameters: {}",
                        violations
                            .iter()
                            .map(|v| v.to_string())
                            .collect::<Vec<_>>()
                            .join("; ")
                    ));
                }
                Family::Q {
                    params,
                    index,
                }
            }
            "classical" => {
                let params = ClassicalParams::new(p, big_n)
                    .map_err(|e| format!("field `p`: {e}"))?;
                let violations = params.validate();
                if !violations.is_empty() {
                    return Err(format!(
                        "invalid parameters: {}",
                        violations
                            .iter()
                            .map(|v| v.to_string())
                            .collect::<Vec<_>>()
                            .join("; ")
                    ));
                }
                Family::Classical { params, index }
            }
            other => return Err(format!("field `family`: `{other}` is not q|classical")),
        };

        let format = match self.get("format").unwrap_or("json") {
            "json" => OutputFormat::Json,
            "csv" => OutputFormat::Csv,
            other => return Err(format!("field `format`: `{other}` is not json|csv")),
        };

        let checks = match self.get("checks").unwrap_or("all") {
            "all" => match &family {
                Family::Q { params, .. } => {
                    let mut list = vec![
                        "orthogonality".to_string(),
                        "rodrigues".to_string(),
                        "raising".to_string(),
                        "lowering".to_string(),
                        "diffeq".to_string(),
                        "zeros".to_string(),
                    ];
                    if params.r() == 1 {
                        list.insert(5, "hypergeometric".to_string());
                    }
                    list
                }
                Family::Classical { .. } => vec![
                    "orthogonality".to_string(),
                    "rodrigues".to_string(),
                    "diffeq".to_string(),
                    "recurrence".to_string(),
                    "zeros".to_string(),
                ],
            },
            list => list.split(',').map(|s| s.trim().to_string()).collect(),
        };

        let precision: u32 = match self.get("precision") {
            None => 8,
            Some(raw) => raw
                .parse()
                .map_err(|_| format!("field `precision`: `{raw}` is not a nonnegative integer"))?,
        };
        let delta: Rat = match self.get("delta") {
            None => qortho::scalar::ratio(1, 8),
            Some(raw) => parse_rat(raw)
                .ok_or_else(|| format!("field `delta`: `{raw}` is not a rational NUM/DEN"))?,
        };
        if delta <= Rat::from_integer(0.into()) {
            return Err("field `delta`: must be positive".into());
        }
        let steps: u32 = match self.get("steps") {
            None => 5,
            Some(raw) => raw
                .parse()
                .map_err(|_| format!("field `steps`: `{raw}` is not a positive integer"))?,
        };
        let convention = self.get("convention").unwrap_or("both").to_string();

        Ok(ResolvedJob {
            family,
            format,
            out: self.get("out").map(String::from),
            checks,
            convention,
            precision,
            delta,
            steps,
        })
    }
}

#[derive(Debug, Clone)]
pub enum Family {
    Q {
        params: KravchukParams<Rat>,
        index: MultiIndex,
    },
    Classical {
        params: ClassicalParams<Rat>,
        index: MultiIndex,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone)]
pub struct ResolvedJob {
    pub family: Family,
    pub format: OutputFormat,
    pub out: Option<String>,
    pub checks: Vec<String>,
    pub convention: String,
    pub precision: u32,
    pub delta: Rat,
    pub steps: u32,
}
