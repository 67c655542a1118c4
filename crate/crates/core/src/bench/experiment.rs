use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::kgen::{build_baseline, build_reshaped, KgBuildReport, Variant};
use crate::mapping::{MappingSpec, TableData};
use crate::ontology::OntologyGraph;
use crate::query::{evaluate_indexed, query_depth, synthesize, GraphIndex, SchemaView};
use crate::rdf::{serialize_ntriples, Graph, GraphStats};
use crate::reshape::reshape;

use super::{generate_intents, subsample_attributes, BenchError, ExperimentConfig};

/// Metrics of one variant in one (subset size, repetition) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RawRow {
    pub subset_size: usize,
    pub repetition: usize,
    pub variant: Variant,
    pub intents: usize,
    pub avg_depth: f64,
    pub max_depth: usize,
    #[serde(flatten)]
    pub stats: GraphStats,
    pub build_time_s: f64,
    /// Intents whose baseline and reshaped answers differ.
    pub mismatches: usize,
    pub error: Option<String>,
}

/// Means over the successful repetitions of one (subset size, variant).
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub subset_size: usize,
    pub variant: Variant,
    pub repetitions: usize,
    pub avg_depth: f64,
    pub max_depth: f64,
    pub entity_count: f64,
    pub blank_node_count: f64,
    pub triple_count: f64,
    pub storage_bytes: f64,
    pub build_time_s: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentReport {
    /// Sorted by (subset size, repetition, variant).
    pub rows: Vec<RawRow>,
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

impl ExperimentReport {
    pub fn subset_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.rows.iter().map(|r| r.subset_size).collect();
        sizes.dedup();
        sizes
    }

    /// Aggregates rows without an error.
    pub fn summary(&self) -> Vec<SummaryRow> {
        let mut out = Vec::new();
        for size in self.subset_sizes() {
            for variant in [Variant::Baseline, Variant::Reshaped] {
                let rows: Vec<&RawRow> = self
                    .rows
                    .iter()
                    .filter(|r| r.subset_size == size && r.variant == variant && r.error.is_none())
                    .collect();
                let m = |f: fn(&RawRow) -> f64| mean(rows.iter().map(|r| f(r)));
                out.push(SummaryRow {
                    subset_size: size,
                    variant,
                    repetitions: rows.len(),
                    avg_depth: m(|r| r.avg_depth),
                    max_depth: m(|r| r.max_depth as f64),
                    entity_count: m(|r| r.stats.entity_count as f64),
                    blank_node_count: m(|r| r.stats.blank_node_count as f64),
                    triple_count: m(|r| r.stats.triple_count as f64),
                    storage_bytes: m(|r| r.stats.storage_bytes as f64),
                    build_time_s: m(|r| r.build_time_s),
                });
            }
        }
        out
    }

    /// Total baseline build time over total reshaped build time.
    pub fn build_time_ratio(&self) -> Option<f64> {
        let total = |v| self.rows.iter().filter(|r| r.variant == v && r.error.is_none()).map(|r| r.build_time_s).sum::<f64>();
        let (b, r) = (total(Variant::Baseline), total(Variant::Reshaped));
        (r > 0.0).then(|| b / r)
    }

    pub fn total_intents(&self) -> usize {
        self.rows.iter().filter(|r| r.variant == Variant::Baseline).map(|r| r.intents).sum()
    }

    pub fn total_mismatches(&self) -> usize {
        self.rows.iter().filter(|r| r.variant == Variant::Baseline).map(|r| r.mismatches).sum()
    }
}

fn mix(seed: u64, a: u64, b: u64) -> u64 {
    let mut z = seed ^ a.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ b.wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct CellOutput {
    rows: [RawRow; 2],
    reports: Vec<KgBuildReport>,
    graphs: Option<(Graph, Graph)>,
}

struct Depths {
    intents: usize,
    baseline: Vec<usize>,
    reshaped: Vec<usize>,
    mismatches: usize,
}

fn row(size: usize, rep: usize, variant: Variant, depths: &[usize], report: Option<&KgBuildReport>, d: &Depths, error: Option<String>) -> RawRow {
    RawRow {
        subset_size: size,
        repetition: rep,
        variant,
        intents: d.intents,
        avg_depth: mean(depths.iter().map(|&x| x as f64)),
        max_depth: depths.iter().copied().max().unwrap_or(0),
        stats: report.map(|r| r.stats).unwrap_or_default(),
        build_time_s: report.map_or(0.0, |r| r.build_wall_time_s),
        mismatches: d.mismatches,
        error,
    }
}

fn run_cell(
    cfg: &ExperimentConfig,
    o: &OntologyGraph,
    tables: &[TableData],
    m: &MappingSpec,
    size: usize,
    rep: usize,
) -> CellOutput {
    let mut d = Depths {
        intents: 0,
        baseline: Vec::new(),
        reshaped: Vec::new(),
        mismatches: 0,
    };
    let failed = |d: &Depths, e: String| CellOutput {
        rows: [
            row(size, rep, Variant::Baseline, &[], None, d, Some(e.clone())),
            row(size, rep, Variant::Reshaped, &[], None, d, Some(e)),
        ],
        reports: Vec::new(),
        graphs: None,
    };
    let sub = match subsample_attributes(m, size, mix(cfg.seed, size as u64, rep as u64)) {
        Ok(s) => s,
        Err(e) => return failed(&d, e.to_string()),
    };
    let schema = match reshape(o, &sub, &sub.hints) {
        Ok(s) => s,
        Err(e) => return failed(&d, e.to_string()),
    };
    let (bg, br) = match build_baseline(o, &sub, tables) {
        Ok(x) => x,
        Err(e) => return failed(&d, e.to_string()),
    };
    let (rg, rr) = match build_reshaped(&schema, &sub, tables) {
        Ok(x) => x,
        Err(e) => return failed(&d, e.to_string()),
    };

    let intents = generate_intents(&sub, tables, &cfg.templates);
    d.intents = intents.len();
    let (bi, ri) = (GraphIndex::new(&bg), GraphIndex::new(&rg));
    let mut errors = Vec::new();
    for intent in &intents {
        let queries = synthesize(intent, SchemaView::Baseline { ontology: o, mapping: &sub }).and_then(|bq| {
            let rq = synthesize(intent, SchemaView::Reshaped { schema: &schema, mapping: &sub })?;
            Ok((query_depth(&bq)?, query_depth(&rq)?, evaluate_indexed(&bq, &bi)?, evaluate_indexed(&rq, &ri)?))
        });
        match queries {
            Ok((bdepth, rdepth, ba, ra)) => {
                d.baseline.push(bdepth);
                d.reshaped.push(rdepth);
                if ba != ra {
                    d.mismatches += 1;
                }
            }
            Err(e) => errors.push(format!("{}: {e}", intent.name)),
        }
    }
    let error = (!errors.is_empty()).then(|| errors.join("; "));
    CellOutput {
        rows: [
            row(size, rep, Variant::Baseline, &d.baseline, Some(&br), &d, error.clone()),
            row(size, rep, Variant::Reshaped, &d.reshaped, Some(&rr), &d, error),
        ],
        reports: vec![br, rr],
        graphs: cfg.write_graphs.then_some((bg, rg)),
    }
}

#[derive(Serialize)]
struct CellBuild<'a> {
    subset_size: usize,
    repetition: usize,
    #[serde(flatten)]
    report: &'a KgBuildReport,
}

/// Runs the grid: every ladder size × repetition subsamples the mapping,
/// reshapes, builds both KGs, synthesizes the intent suite against both
/// schemata and records depth, size and answer-agreement metrics. Cells run
/// in parallel and are seeded independently of scheduling. A failing cell
/// is recorded with its error and does not stop the grid.
///
/// When `cfg.out` is set, writes `report.md`, `report.csv`, `builds.jsonl`
/// and, with `write_graphs`, `graphs/k<size>_r<rep>_<variant>.nt`.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    o: &OntologyGraph,
    tables: &[TableData],
    m: &MappingSpec,
) -> Result<ExperimentReport, BenchError> {
    cfg.validate()?;
    if let Some(&too_big) = cfg.ladder.iter().find(|&&k| k > m.attributes.len()) {
        return Err(BenchError::SampleTooLarge {
            requested: too_big,
            available: m.attributes.len(),
        });
    }
    let cells: Vec<(usize, usize)> = cfg
        .ladder
        .iter()
        .flat_map(|&k| (0..cfg.repetitions).map(move |r| (k, r)))
        .collect();
    let outputs: Vec<((usize, usize), CellOutput)> = cells
        .par_iter()
        .map(|&(k, r)| ((k, r), run_cell(cfg, o, tables, m, k, r)))
        .collect();

    let mut report = ExperimentReport::default();
    for (_, out) in &outputs {
        report.rows.extend(out.rows.iter().cloned());
    }
    report.rows.sort_by_key(|r| (r.subset_size, r.repetition, r.variant));
    if let Some(dir) = &cfg.out {
        persist(dir, &report, &outputs)?;
    }
    Ok(report)
}

fn persist(dir: &Path, report: &ExperimentReport, outputs: &[((usize, usize), CellOutput)]) -> Result<(), BenchError> {
    fs::create_dir_all(dir)?;
    let (md, csv) = super::render_report(report);
    fs::write(dir.join("report.md"), md)?;
    fs::write(dir.join("report.csv"), csv)?;
    let mut lines = String::new();
    for ((k, r), out) in outputs {
        for rep in &out.reports {
            let line = CellBuild {
                subset_size: *k,
                repetition: *r,
                report: rep,
            };
            lines.push_str(&serde_json::to_string(&line).expect("report serializes"));
            lines.push('\n');
        }
        if let Some((bg, rg)) = &out.graphs {
            let graphs = dir.join("graphs");
            fs::create_dir_all(&graphs)?;
            fs::write(graphs.join(format!("k{k}_r{r}_baseline.nt")), serialize_ntriples(bg))?;
            fs::write(graphs.join(format!("k{k}_r{r}_reshaped.nt")), serialize_ntriples(rg))?;
        }
    }
    fs::write(dir.join("builds.jsonl"), lines)?;
    Ok(())
}
