use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};

use onto_reshape::bench::{self, generate_intents, generate_synthetic, ExperimentConfig, SynthConfig, WELDING_NS};
use onto_reshape::kgen::{build_baseline, build_reshaped, KgBuildReport};
use onto_reshape::mapping::{auto_annotate, load_csv, parse_mapping, validate_mapping, MappingSpec, TableData};
use onto_reshape::ontology::{load_ontology, OntologyGraph};
use onto_reshape::query::{
    evaluate_indexed, parse_intents, parse_sparql, synthesize, GraphIndex, QueryIntent, ResultSet, SchemaView,
};
use onto_reshape::rdf::{parse_turtle, serialize_ntriples, serialize_turtle, Graph};
use onto_reshape::reshape::{reshape, ReshapedSchema};

/// Marks failures caused by the user's inputs (exit code 2).
#[derive(Debug)]
struct InputError(String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input_err(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(InputError(msg.into()))
}

/// Answers differ between the two variants (exit code 1).
#[derive(Debug)]
struct NotEquivalent(Vec<String>);

impl fmt::Display for NotEquivalent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "baseline and reshaped answers differ for: {}", self.0.join(", "))
    }
}

impl std::error::Error for NotEquivalent {}

#[derive(Parser)]
#[command(name = "ontoreshape", version, about = "Reshape domain ontologies into compact KG schemas and compare the resulting knowledge graphs")]
struct Cli {
    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propose a mapping by matching CSV headers to ontology terms.
    Annotate(AnnotateArgs),
    /// Compute the reshaped schema from an ontology and a mapping.
    Reshape(ReshapeArgs),
    /// Materialize the baseline and/or reshaped knowledge graph.
    Build(BuildArgs),
    /// Evaluate intents or a SPARQL query against the built graphs.
    Query(QueryArgs),
    /// Run the sub-sampling depth experiment.
    Bench(BenchArgs),
    /// Write the synthetic welding corpus.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct Inputs {
    /// Ontology in Turtle.
    #[arg(long)]
    ontology: PathBuf,
    /// Mapping file.
    #[arg(long)]
    mapping: PathBuf,
    /// CSV table; the file stem is the table name.
    #[arg(long = "data")]
    data: Vec<PathBuf>,
}

#[derive(Args)]
struct AnnotateArgs {
    #[arg(long)]
    ontology: PathBuf,
    #[arg(long = "data", required = true)]
    data: Vec<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReshapeArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantSel {
    Baseline,
    Reshaped,
    Both,
}

impl VariantSel {
    fn baseline(self) -> bool {
        self != VariantSel::Reshaped
    }
    fn reshaped(self) -> bool {
        self != VariantSel::Baseline
    }
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long, value_enum, default_value = "both")]
    variant: VariantSel,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct QueryArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Intent file.
    #[arg(long, conflicts_with = "sparql", required_unless_present = "sparql")]
    intents: Option<PathBuf>,
    /// SPARQL query file.
    #[arg(long)]
    sparql: Option<PathBuf>,
    /// Intent name to run, or `all`.
    #[arg(long, default_value = "all")]
    intent: String,
    #[arg(long, value_enum, default_value = "both")]
    variant: VariantSel,
    /// Run both variants and fail unless their answers are identical.
    #[arg(long)]
    check_equivalence: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Experiment config file, or `demo`.
    #[arg(long, default_value = "demo")]
    config: String,
    /// Ontology; without it the synthetic demo corpus is generated.
    #[arg(long, requires = "mapping")]
    ontology: Option<PathBuf>,
    #[arg(long, requires = "ontology")]
    mapping: Option<PathBuf>,
    #[arg(long = "data")]
    data: Vec<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    rows: Option<usize>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| input_err(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn load_ontology_file(path: &Path) -> Result<OntologyGraph> {
    let g = parse_turtle(&read(path)?).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
    load_ontology(&g).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn table_name(path: &Path) -> Result<String> {
    path.file_stem()
        .and_then(|s| s.to_str())
        .map(String::from)
        .ok_or_else(|| input_err(format!("cannot derive a table name from {}", path.display())))
}

fn load_tables(paths: &[PathBuf]) -> Result<Vec<TableData>> {
    paths
        .iter()
        .map(|p| load_csv(&read(p)?, &table_name(p)?).map_err(|e| input_err(format!("{}: {e}", p.display()))))
        .collect()
}

struct Loaded {
    ontology: OntologyGraph,
    mapping: MappingSpec,
    tables: Vec<TableData>,
}

fn load_inputs(i: &Inputs) -> Result<Loaded> {
    let ontology = load_ontology_file(&i.ontology)?;
    let mapping = parse_mapping(&read(&i.mapping)?).map_err(|e| input_err(format!("{}: {e}", i.mapping.display())))?;
    let tables = load_tables(&i.data)?;
    let violations = validate_mapping(&mapping, &ontology, &tables);
    if !violations.is_empty() {
        let lines: Vec<String> = violations.iter().map(|v| format!("  {v}")).collect();
        return Err(input_err(format!("invalid mapping {}:\n{}", i.mapping.display(), lines.join("\n"))));
    }
    Ok(Loaded {
        ontology,
        mapping,
        tables,
    })
}

fn reshape_loaded(l: &Loaded) -> Result<ReshapedSchema> {
    reshape(&l.ontology, &l.mapping, &l.mapping.hints).map_err(|e| input_err(e.to_string()))
}

fn cmd_annotate(a: &AnnotateArgs) -> Result<()> {
    let o = load_ontology_file(&a.ontology)?;
    let tables = load_tables(&a.data)?;
    let mut mapping = MappingSpec::new();
    let mut report = String::new();
    for t in &tables {
        match auto_annotate(t, &o) {
            Ok((m, r)) => {
                mapping.merge(m);
                report.push_str(&r.render());
            }
            Err(e) => {
                warn!("{}: {e}", t.name);
                report.push_str(&format!("table {}\n  error: {e}\n", t.name));
            }
        }
    }
    write(&a.out.join("mapping.map"), mapping.serialize())?;
    write(&a.out.join("annotation.txt"), report)?;
    info!("annotated {} tables", tables.len());
    Ok(())
}

fn cmd_reshape(a: &ReshapeArgs) -> Result<()> {
    let l = load_inputs(&a.inputs)?;
    let s = reshape_loaded(&l)?;
    write(&a.out.join("schema.ttl"), s.to_turtle())?;
    write(&a.out.join("provenance.txt"), s.provenance_text())?;
    write(&a.out.join("connectors.log"), s.log_text())?;
    info!(
        "reshaped schema: {} classes, {} composites",
        s.ontology.classes().len(),
        s.composite_provenance.len()
    );
    Ok(())
}

fn emit(out: &Path, g: &Graph, report: &KgBuildReport) -> Result<()> {
    let name = report.variant.to_string();
    write(&out.join(format!("{name}.nt")), serialize_ntriples(g))?;
    write(&out.join(format!("{name}.report.json")), report.to_json_line() + "\n")?;
    info!("{name}: {} triples, {} blank nodes", report.stats.triple_count, report.stats.blank_node_count);
    Ok(())
}

fn cmd_build(a: &BuildArgs) -> Result<()> {
    let l = load_inputs(&a.inputs)?;
    let mut failures = Vec::new();
    if a.variant.baseline() {
        match build_baseline(&l.ontology, &l.mapping, &l.tables) {
            Ok((g, r)) => emit(&a.out, &g, &r)?,
            Err(e) => failures.push(format!("baseline: {e}")),
        }
    }
    if a.variant.reshaped() {
        match reshape_loaded(&l).and_then(|s| build_reshaped(&s, &l.mapping, &l.tables).map_err(|e| input_err(e.to_string()))) {
            Ok((g, r)) => emit(&a.out, &g, &r)?,
            Err(e) => failures.push(format!("reshaped: {e}")),
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(input_err(failures.join("\n")))
    }
}

fn cmd_query(a: &QueryArgs) -> Result<()> {
    let l = load_inputs(&a.inputs)?;
    let s = reshape_loaded(&l)?;
    let need_base = a.variant.baseline() || a.check_equivalence;
    let need_reshaped = a.variant.reshaped() || a.check_equivalence;
    let bg = if need_base {
        Some(build_baseline(&l.ontology, &l.mapping, &l.tables).map_err(|e| input_err(e.to_string()))?.0)
    } else {
        None
    };
    let rg = if need_reshaped {
        Some(build_reshaped(&s, &l.mapping, &l.tables).map_err(|e| input_err(e.to_string()))?.0)
    } else {
        None
    };
    let bi = bg.as_ref().map(GraphIndex::new);
    let ri = rg.as_ref().map(GraphIndex::new);

    if let Some(path) = &a.sparql {
        let q = parse_sparql(&read(path)?).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
        let mut answers = Vec::new();
        for (name, idx) in [("baseline", &bi), ("reshaped", &ri)] {
            if let Some(idx) = idx {
                let r = evaluate_indexed(&q, idx).map_err(|e| input_err(e.to_string()))?;
                write(&a.out.join(format!("sparql.{name}.csv")), r.to_csv())?;
                answers.push(r);
            }
        }
        if a.check_equivalence && answers[0] != answers[1] {
            return Err(anyhow!(NotEquivalent(vec!["sparql".into()])));
        }
        return Ok(());
    }

    let path = a.intents.as_ref().expect("clap requires --intents or --sparql");
    let all = parse_intents(&read(path)?).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
    let selected: Vec<&QueryIntent> = all.iter().filter(|i| a.intent == "all" || i.name == a.intent).collect();
    if selected.is_empty() {
        return Err(input_err(format!("no intent named '{}' in {}", a.intent, path.display())));
    }
    let mut differing = Vec::new();
    let mut sparql_text = String::new();
    for intent in selected {
        let run = |view: SchemaView<'_>, idx: &GraphIndex<'_>| -> Result<(String, ResultSet)> {
            let q = synthesize(intent, view).map_err(|e| input_err(e.to_string()))?;
            let r = evaluate_indexed(&q, idx).map_err(|e| input_err(e.to_string()))?;
            Ok((q.to_string(), r))
        };
        let mut answers = Vec::new();
        if let Some(idx) = &bi {
            let (q, r) = run(SchemaView::Baseline { ontology: &l.ontology, mapping: &l.mapping }, idx)?;
            sparql_text.push_str(&format!("# {} baseline\n{q}\n\n", intent.name));
            if a.variant.baseline() {
                write(&a.out.join(format!("{}.baseline.csv", intent.name)), r.to_csv())?;
            }
            answers.push(r);
        }
        if let Some(idx) = &ri {
            let (q, r) = run(SchemaView::Reshaped { schema: &s, mapping: &l.mapping }, idx)?;
            sparql_text.push_str(&format!("# {} reshaped\n{q}\n\n", intent.name));
            if a.variant.reshaped() {
                write(&a.out.join(format!("{}.reshaped.csv", intent.name)), r.to_csv())?;
            }
            answers.push(r);
        }
        if a.check_equivalence && answers[0] != answers[1] {
            differing.push(intent.name.clone());
        }
    }
    write(&a.out.join("queries.sparql"), sparql_text)?;
    if !differing.is_empty() {
        return Err(anyhow!(NotEquivalent(differing)));
    }
    if a.check_equivalence {
        println!("equivalent: baseline and reshaped answers agree");
    }
    Ok(())
}

fn cmd_bench(a: &BenchArgs) -> Result<()> {
    let mut cfg = if a.config == "demo" {
        ExperimentConfig::demo()
    } else {
        let path = Path::new(&a.config);
        ExperimentConfig::parse(&read(path)?).map_err(|e| input_err(format!("{}: {e}", path.display())))?
    };
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &a.out {
        cfg.out = Some(out.clone());
    }
    if cfg.out.is_none() {
        return Err(input_err("bench needs --out or an `out` line in the config"));
    }
    let l = match (&a.ontology, &a.mapping) {
        (Some(ontology), Some(mapping)) => load_inputs(&Inputs {
            ontology: ontology.clone(),
            mapping: mapping.clone(),
            data: a.data.clone(),
        })?,
        _ => {
            let c = generate_synthetic(&SynthConfig::demo()).map_err(|e| input_err(e.to_string()))?;
            Loaded {
                ontology: c.ontology,
                mapping: c.mapping,
                tables: c.tables,
            }
        }
    };
    let r = bench::run_experiment(&cfg, &l.ontology, &l.tables, &l.mapping).map_err(|e| match e {
        bench::BenchError::Io(_) => anyhow!(e),
        other => input_err(other.to_string()),
    })?;
    print!("{}", bench::render_report(&r).0);
    Ok(())
}

fn cmd_generate(a: &GenerateArgs) -> Result<()> {
    let mut cfg = SynthConfig::demo();
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    if let Some(rows) = a.rows {
        cfg.rows_per_table = rows;
    }
    let c = generate_synthetic(&cfg).map_err(|e| input_err(e.to_string()))?;
    let mut g = c.ontology.to_graph();
    g.set_prefix("w", WELDING_NS);
    write(&a.out.join("ontology.ttl"), serialize_turtle(&g))?;
    write(&a.out.join("mapping.map"), c.mapping.serialize())?;
    for t in &c.tables {
        write(&a.out.join(format!("{}.csv", t.name)), t.to_csv())?;
    }
    let templates = ExperimentConfig::demo().templates;
    let intents: String = generate_intents(&c.mapping, &c.tables, &templates)
        .iter()
        .map(|i| format!("{i}\n"))
        .collect();
    write(&a.out.join("intents.txt"), intents)?;
    write(&a.out.join("experiment.cfg"), ExperimentConfig::demo().to_string())?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let result = match &cli.command {
        Command::Annotate(a) => cmd_annotate(a),
        Command::Reshape(a) => cmd_reshape(a),
        Command::Build(a) => cmd_build(a),
        Command::Query(a) => cmd_query(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Generate(a) => cmd_generate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
