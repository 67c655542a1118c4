use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;

use crate::query::IntentKind;

use super::BenchError;

/// Grid definition for [`run_experiment`](super::run_experiment).
///
/// File format, one setting per line, `#` comments:
///
/// ```text
/// ladder 4 8 12 16 20 24
/// repetitions 10
/// seed 42
/// templates I II III
/// out bench-out
/// graphs false
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    /// Attribute counts per subset, strictly increasing.
    pub ladder: Vec<usize>,
    pub repetitions: usize,
    pub seed: u64,
    /// Intent types instantiated for each cell.
    pub templates: BTreeSet<IntentKind>,
    pub out: Option<PathBuf>,
    /// Also write each cell's N-Triples.
    pub write_graphs: bool,
}

impl ExperimentConfig {
    pub fn demo() -> Self {
        ExperimentConfig {
            ladder: vec![4, 8, 12, 16, 20, 24],
            repetitions: 10,
            seed: 42,
            templates: [IntentKind::Inspection, IntentKind::Summary, IntentKind::Diagnostic].into(),
            out: None,
            write_graphs: false,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.ladder.is_empty() || self.ladder[0] == 0 || self.ladder.windows(2).any(|w| w[0] >= w[1]) {
            return Err(BenchError::Config("ladder must be non-empty, positive and strictly increasing".into()));
        }
        if self.repetitions == 0 {
            return Err(BenchError::Config("repetitions must be at least 1".into()));
        }
        if self.templates.is_empty() {
            return Err(BenchError::Config("at least one intent template is required".into()));
        }
        Ok(())
    }

    /// Parses the line format, starting from [`ExperimentConfig::demo`].
    pub fn parse(text: &str) -> Result<Self, BenchError> {
        let mut cfg = Self::demo();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| BenchError::Config(format!("line {}: {what}", idx + 1));
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let values: Vec<&str> = rest.split_whitespace().collect();
            let single = || match values.as_slice() {
                [v] => Ok(*v),
                _ => Err(bad(&format!("'{key}' takes one value"))),
            };
            match key {
                "ladder" => {
                    cfg.ladder = values
                        .iter()
                        .map(|v| v.parse().map_err(|_| bad(&format!("invalid count '{v}'"))))
                        .collect::<Result<_, _>>()?
                }
                "repetitions" => cfg.repetitions = single()?.parse().map_err(|_| bad("invalid repetitions"))?,
                "seed" => cfg.seed = single()?.parse().map_err(|_| bad("invalid seed"))?,
                "templates" => {
                    cfg.templates = values
                        .iter()
                        .map(|v| IntentKind::from_code(v).ok_or_else(|| bad(&format!("unknown template '{v}'"))))
                        .collect::<Result<_, _>>()?
                }
                "out" => cfg.out = Some(PathBuf::from(single()?)),
                "graphs" => cfg.write_graphs = single()?.parse().map_err(|_| bad("expected true or false"))?,
                other => return Err(bad(&format!("unknown setting '{other}'"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ladder: Vec<String> = self.ladder.iter().map(usize::to_string).collect();
        let templates: Vec<&str> = self.templates.iter().map(|k| k.code()).collect();
        writeln!(f, "ladder {}", ladder.join(" "))?;
        writeln!(f, "repetitions {}", self.repetitions)?;
        writeln!(f, "seed {}", self.seed)?;
        writeln!(f, "templates {}", templates.join(" "))?;
        if let Some(out) = &self.out {
            writeln!(f, "out {}", out.display())?;
        }
        writeln!(f, "graphs {}", self.write_graphs)
    }
}
