use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mapping::{AttributeBinding, AttributeTarget, MappingSpec, TableBinding, TableData, Value};
use crate::ontology::OntologyGraph;

use super::BenchError;

pub const WELDING_NS: &str = "http://example.org/welding#";

const TABLE_NAMES: &[&str] = &["Operation", "Maintenance"];

const CLASS_NAMES: &[&str] = &[
    "WeldingSystem",
    "Machine",
    "WeldingGun",
    "Controller",
    "Electrode",
    "ElectrodeCap",
    "Transformer",
    "Sensor",
    "WeldingProgram",
    "Robot",
    "Fixture",
    "Workpiece",
    "CoolingUnit",
    "Actuator",
    "Cable",
    "Dresser",
    "Servo",
    "Clamp",
];

const PROPERTY_NAMES: &[&str] = &[
    "current",
    "voltage",
    "resistance",
    "energy",
    "force",
    "temperature",
    "pressure",
    "duration",
    "phaseAngle",
    "flowRate",
    "thickness",
    "wearCount",
    "dressCount",
    "power",
    "stickout",
    "cycleTime",
    "gapWidth",
    "torque",
    "speed",
    "humidity",
    "frequency",
    "impedance",
    "spatterCount",
    "displacement",
];

/// Shape of a generated welding-like ontology and dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub class_count: usize,
    pub depth: usize,
    pub branching: usize,
    pub table_count: usize,
    pub attributes_per_table: usize,
    pub rows_per_table: usize,
    /// Share of each table's attributes elevated to class keys.
    pub elevation_fraction: f64,
    /// Probability that a data cell is empty.
    pub null_fraction: f64,
    pub seed: u64,
}

impl SynthConfig {
    /// 14 classes, depth 3, two tables of 12 attributes and 500 rows each.
    pub fn demo() -> Self {
        SynthConfig {
            class_count: 14,
            depth: 3,
            branching: 3,
            table_count: 2,
            attributes_per_table: 12,
            rows_per_table: 500,
            elevation_fraction: 0.25,
            null_fraction: 0.01,
            seed: 42,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let err = |m: &str| Err(BenchError::Config(m.to_string()));
        if self.class_count == 0
            || self.depth == 0
            || self.branching == 0
            || self.table_count == 0
            || self.attributes_per_table == 0
            || self.rows_per_table == 0
        {
            return err("class count, depth, branching, tables, attributes and rows must be positive");
        }
        if !(0.0..=1.0).contains(&self.elevation_fraction) || !(0.0..=1.0).contains(&self.null_fraction) {
            return err("elevation and null fractions must lie in [0, 1]");
        }
        let spine = if self.depth >= 2 { self.depth } else { 0 };
        if self.class_count < 1 + self.table_count + spine {
            return err("class count too small for the tables and the requested depth");
        }
        if self.table_count + usize::from(spine > 0) > self.branching {
            return err("branching too small for the root's children");
        }
        Ok(())
    }
}

/// Output of [`generate_synthetic`].
#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub ontology: OntologyGraph,
    pub tables: Vec<TableData>,
    pub mapping: MappingSpec,
}

fn name_at(pool: &[&str], i: usize, fallback: &str) -> String {
    pool.get(i).map(|s| s.to_string()).unwrap_or_else(|| format!("{fallback}{}", i - pool.len() + 1))
}

fn lower_first(s: &str) -> String {
    let mut c = s.chars();
    c.next().map(|f| f.to_ascii_lowercase().to_string() + c.as_str()).unwrap_or_default()
}

fn key_prefix(local: &str) -> String {
    let caps: String = local.chars().filter(char::is_ascii_uppercase).collect();
    if caps.is_empty() {
        local.chars().take(2).collect::<String>().to_ascii_uppercase()
    } else {
        caps
    }
}

struct Node {
    local: String,
    depth: usize,
    children: usize,
    is_table: bool,
}

/// Generates a tree-shaped ontology with a table/mapping/data corpus.
///
/// The root has one childless class per table plus a spine reaching the
/// configured depth; the remaining classes hang off random non-table
/// nodes. Elevated attributes key random non-root, non-table classes.
/// Data attributes get fresh datatype properties on random leaves outside
/// the table classes, or on the table's own class when no such leaf
/// exists. Everything is a pure function of the config.
pub fn generate_synthetic(cfg: &SynthConfig) -> Result<SyntheticCorpus, BenchError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let iri = |local: &str| format!("{WELDING_NS}{local}");

    let mut nodes = vec![Node {
        local: "Manufacturing".into(),
        depth: 0,
        children: 0,
        is_table: false,
    }];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut attach = |nodes: &mut Vec<Node>, parent: usize, local: String, is_table: bool| {
        let depth = nodes[parent].depth + 1;
        nodes[parent].children += 1;
        nodes.push(Node {
            local,
            depth,
            children: 0,
            is_table,
        });
        edges.push((parent, nodes.len() - 1));
    };
    for t in 0..cfg.table_count {
        attach(&mut nodes, 0, name_at(TABLE_NAMES, t, "Table"), true);
    }
    let mut named = 0;
    if cfg.depth >= 2 {
        let mut parent = 0;
        for _ in 0..cfg.depth {
            attach(&mut nodes, parent, name_at(CLASS_NAMES, named, "Component"), false);
            named += 1;
            parent = nodes.len() - 1;
        }
    }
    while nodes.len() < cfg.class_count {
        let open: Vec<usize> = (0..nodes.len())
            .filter(|&i| !nodes[i].is_table && nodes[i].depth < cfg.depth && nodes[i].children < cfg.branching)
            .collect();
        let &parent = open
            .choose(&mut rng)
            .ok_or_else(|| BenchError::Config("class count exceeds the tree's capacity".into()))?;
        attach(&mut nodes, parent, name_at(CLASS_NAMES, named, "Component"), false);
        named += 1;
    }

    let mut o = OntologyGraph::new();
    for n in &nodes {
        o.add_class(iri(&n.local));
    }
    for &(p, c) in &edges {
        let property = format!("has{}", nodes[c].local);
        o.add_object_property(iri(&property), iri(&nodes[p].local), iri(&nodes[c].local))
            .map_err(|e| BenchError::Config(e.to_string()))?;
    }

    let leaves: Vec<usize> = (1..nodes.len()).filter(|&i| nodes[i].children == 0 && !nodes[i].is_table).collect();
    let keyable: Vec<usize> = (1..nodes.len()).filter(|&i| !nodes[i].is_table).collect();
    let key_pool = (cfg.rows_per_table / 40).clamp(3, 50);

    let mut mapping = MappingSpec::new();
    mapping.prefixes.insert("w".into(), WELDING_NS.into());
    let mut tables = Vec::new();
    let mut property_index = 0;
    for (t, table_node) in nodes.iter().enumerate().filter(|(_, n)| n.is_table) {
        let table = table_node.local.clone();
        mapping.tables.push(TableBinding {
            table: table.clone(),
            class: iri(&table),
        });
        let elevated = ((cfg.attributes_per_table as f64) * cfg.elevation_fraction).round() as usize;
        if elevated > keyable.len() {
            return Err(BenchError::Config("more elevated attributes than keyable classes".into()));
        }
        let mut columns: Vec<Column> = keyable
            .choose_multiple(&mut rng, elevated)
            .map(|&k| Column::Key {
                attribute: format!("{}ID", lower_first(&nodes[k].local)),
                class: nodes[k].local.clone(),
            })
            .collect();
        for _ in elevated..cfg.attributes_per_table {
            let host = leaves.choose(&mut rng).copied().unwrap_or(t);
            let name = name_at(PROPERTY_NAMES, property_index, "measure");
            property_index += 1;
            o.add_datatype_property(iri(&name), iri(&nodes[host].local))
                .map_err(|e| BenchError::Config(e.to_string()))?;
            columns.push(Column::Data {
                attribute: name,
                integer: rng.gen_bool(0.3),
                centre: rng.gen_range(1.0..500.0),
            });
        }
        columns.shuffle(&mut rng);

        for c in &columns {
            let (attribute, target) = match c {
                Column::Key { attribute, class } => (attribute, AttributeTarget::ClassKey(iri(class))),
                Column::Data { attribute, .. } => (attribute, AttributeTarget::DataProperty(iri(attribute))),
            };
            mapping.attributes.push(AttributeBinding {
                table: table.clone(),
                attribute: attribute.clone(),
                target,
            });
        }

        let names: Vec<String> = columns.iter().map(|c| c.attribute().to_string()).collect();
        let mut data = TableData::new(table.clone(), names).map_err(|e| BenchError::Config(e.to_string()))?;
        for _ in 0..cfg.rows_per_table {
            let row = columns
                .iter()
                .map(|c| {
                    if rng.gen_bool(cfg.null_fraction) {
                        return Value::Null;
                    }
                    match c {
                        Column::Key { class, .. } => {
                            Value::Str(format!("{}{}", key_prefix(class), rng.gen_range(1..=key_pool)))
                        }
                        Column::Data { integer: true, centre, .. } => {
                            Value::Integer(format!("{}", (centre * rng.gen_range(0.5..1.5)).round() as i64))
                        }
                        Column::Data { centre, .. } => Value::Decimal(format!("{:.2}", centre * rng.gen_range(0.5..1.5))),
                    }
                })
                .collect();
            data.push_row(row).map_err(|e| BenchError::Config(e.to_string()))?;
        }
        tables.push(data);
    }
    Ok(SyntheticCorpus {
        ontology: o,
        tables,
        mapping,
    })
}

enum Column {
    Key { attribute: String, class: String },
    Data { attribute: String, integer: bool, centre: f64 },
}

impl Column {
    fn attribute(&self) -> &str {
        match self {
            Column::Key { attribute, .. } | Column::Data { attribute, .. } => attribute,
        }
    }
}
