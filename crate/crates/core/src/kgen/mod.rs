//! Materializes knowledge graphs from tables: a baseline KG shaped by the
//! domain ontology and a reshaped KG shaped by a [`ReshapedSchema`].
//!
//! [`ReshapedSchema`]: crate::reshape::ReshapedSchema

mod baseline;
mod reshaped;

use std::collections::BTreeMap;
use std::fmt;

use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use serde::Serialize;
use thiserror::Error;

use crate::mapping::{MappingSpec, TableData};
use crate::rdf::{graph_stats, local_name, namespace, Graph, GraphStats, Term};

pub use baseline::{baseline_access, build_baseline, BaselineAccess};
pub use reshaped::build_reshaped;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KgenError {
    #[error("no ontology path from <{class}> to the home of attribute '{attribute}'")]
    NoPath { class: String, attribute: String },
    #[error("attribute {table}.{attribute} has no home in the reshaped schema")]
    MissingHome { table: String, attribute: String },
    #[error("data for table '{table}' has no column '{attribute}'")]
    MissingColumn { table: String, attribute: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Baseline,
    Reshaped,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Baseline => "baseline",
            Variant::Reshaped => "reshaped",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KgBuildReport {
    pub variant: Variant,
    #[serde(flatten)]
    pub stats: GraphStats,
    pub build_wall_time_s: f64,
    pub rows_processed: usize,
    pub triples_per_row: f64,
}

impl KgBuildReport {
    pub(crate) fn new(variant: Variant, g: &Graph, build_wall_time_s: f64, rows_processed: usize) -> Self {
        let stats = graph_stats(g);
        KgBuildReport {
            variant,
            stats,
            build_wall_time_s,
            rows_processed,
            triples_per_row: stats.triple_count as f64 / rows_processed.max(1) as f64,
        }
    }

    /// One JSON object on a single line.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Everything except ASCII alphanumerics, `-`, `.` and `~` is encoded, so a
/// key segment never contains the `_` that separates row IRIs.
const KEY_SEGMENT: &AsciiSet = &NON_ALPHANUMERIC.remove(b'-').remove(b'.').remove(b'~');

/// IRI templates for minted entities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityMintingPolicy {
    pub base: String,
}

impl EntityMintingPolicy {
    /// Data IRIs live under the namespace of `class`, with its trailing
    /// `#` or `/` replaced by `/data`.
    pub fn for_class(class: &str) -> Self {
        EntityMintingPolicy {
            base: format!("{}/data", namespace(class).trim_end_matches(['#', '/'])),
        }
    }

    /// Policy shared by both builds of one mapping, based on its first table
    /// class.
    pub fn for_mapping(m: &MappingSpec) -> Self {
        Self::for_class(m.tables.first().map(|t| t.class.as_str()).unwrap_or("urn:x-data/"))
    }

    /// `<base>/<Class>/<table>_<row>`; also used for row-scoped nodes of
    /// other classes.
    pub fn row(&self, class: &str, table: &str, row: usize) -> Term {
        Term::iri(format!("{}/{}/{}_{row}", self.base, local_name(class), encode_table(table)))
    }

    /// `<base>/<Class>/<encoded key value>`.
    pub fn key(&self, class: &str, value: &str) -> Term {
        Term::iri(format!(
            "{}/{}/{}",
            self.base,
            local_name(class),
            utf8_percent_encode(value, KEY_SEGMENT)
        ))
    }
}

const TABLE_SEGMENT: &AsciiSet = &KEY_SEGMENT.remove(b'_');

fn encode_table(table: &str) -> String {
    utf8_percent_encode(table, TABLE_SEGMENT).to_string()
}

pub(crate) fn column(table: &TableData, attribute: &str) -> Result<usize, KgenError> {
    table.column_index(attribute).ok_or_else(|| KgenError::MissingColumn {
        table: table.name.clone(),
        attribute: attribute.to_string(),
    })
}

/// Multiset of (property local name, literal) over all literal-valued
/// triples, the literal in N-Triples form.
pub fn literal_payload(g: &Graph) -> BTreeMap<(String, String), usize> {
    let mut out = BTreeMap::new();
    for t in g.iter() {
        if let Term::Literal(l) = &t.object {
            *out.entry((local_name(t.predicate_iri()).to_string(), l.to_string()))
                .or_insert(0) += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::Literal;

    use crate::mapping::{load_csv, parse_mapping};
    use crate::ontology::OntologyGraph;
    use crate::reshape::reshape;

    const NS: &str = "http://ex.org/w#";

    /// Op -performedBy-> Machine -hasSensor-> Sensor(current);
    /// Op -uses-> Program; Op(duration).
    fn fixture() -> (OntologyGraph, MappingSpec) {
        let mut o = OntologyGraph::new();
        for c in ["Op", "Machine", "Sensor", "Program"] {
            o.add_class(format!("{NS}{c}"));
        }
        for (p, d, r) in [("performedBy", "Op", "Machine"), ("hasSensor", "Machine", "Sensor"), ("uses", "Op", "Program")] {
            o.add_object_property(format!("{NS}{p}"), format!("{NS}{d}"), format!("{NS}{r}"))
                .unwrap();
        }
        o.add_datatype_property(format!("{NS}current"), format!("{NS}Sensor")).unwrap();
        o.add_datatype_property(format!("{NS}duration"), format!("{NS}Op")).unwrap();
        let m = parse_mapping(&format!(
            "prefix w <{NS}>\ntable Op => class w:Op\nattr Op.opName => classkey w:Op\n\
             attr Op.machineID => classkey w:Machine\nattr Op.current => dataprop w:current\n\
             attr Op.duration => dataprop w:duration\nattr Op.programID => classkey w:Program\n"
        ))
        .unwrap();
        (o, m)
    }

    fn table(body: &str) -> TableData {
        load_csv(&format!("opName,machineID,current,duration,programID\n{body}"), "Op").unwrap()
    }

    #[test]
    fn zero_rows() {
        let (o, m) = fixture();
        let t = table("");
        let (g, r) = build_baseline(&o, &m, std::slice::from_ref(&t)).unwrap();
        assert!(g.is_empty());
        assert_eq!(r.rows_processed, 0);
        let s = reshape(&o, &m, &[]).unwrap();
        let (g, _) = build_reshaped(&s, &m, &[t]).unwrap();
        assert!(g.is_empty());
    }

    #[test]
    fn two_hop_attribute_uses_one_blank_node() {
        let (o, m) = fixture();
        let t = load_csv("current\n7.5\n", "Op").unwrap();
        let m = MappingSpec {
            attributes: m.attributes.into_iter().filter(|a| a.attribute == "current").collect(),
            ..m
        };
        let (g, r) = build_baseline(&o, &m, &[t]).unwrap();
        assert_eq!(r.stats.blank_node_count, 1);
        let text = crate::rdf::serialize_ntriples(&g);
        let row = "<http://ex.org/w/data/Op/Op_0>";
        let sensor = "<http://ex.org/w/data/Sensor/Op_0>";
        assert!(text.contains(&format!("{row} <{NS}performedBy> _:")));
        assert!(text.contains(&format!("<{NS}hasSensor> {sensor} .")));
        assert!(text.contains(&format!("{sensor} <{NS}current> \"7.5\"^^")));
    }

    #[test]
    fn shared_key_mints_one_entity() {
        let (o, m) = fixture();
        let t = table("a,M7,1.0,3,P1\nb,M7,2.0,4,P2\n");
        let s = reshape(&o, &m, &[]).unwrap();
        let (g, r) = build_reshaped(&s, &m, &[t]).unwrap();
        let machine = Term::iri("http://ex.org/w/data/Machine/M7");
        let links = g.iter().filter(|t| t.object == machine).count();
        assert_eq!(links, 2);
        assert_eq!(g.triples_for_subject(&machine).count(), 2);
        assert_eq!(r.stats.blank_node_count, 0);
    }

    #[test]
    fn builds_agree_on_payload() {
        let (o, m) = fixture();
        let t = table("a,M7,1.0,3,P1\nb,M7,,4,\n,M8,2.5,,P1\n");
        let s = reshape(&o, &m, &[]).unwrap();
        let (base, br) = build_baseline(&o, &m, std::slice::from_ref(&t)).unwrap();
        let (resh, rr) = build_reshaped(&s, &m, &[t]).unwrap();
        assert_eq!(literal_payload(&base), literal_payload(&resh));
        // Machine is keyed by the table, so its per-row node is an IRI.
        assert_eq!(br.stats.blank_node_count, 0);
        assert_eq!(rr.stats.blank_node_count, 0);
        assert!(rr.stats.entity_count < br.stats.entity_count);
        assert!(rr.stats.triple_count <= br.stats.triple_count);
    }

    #[test]
    fn missing_home_is_reported() {
        let (o, m) = fixture();
        let s = reshape(&o, &MappingSpec { attributes: vec![], ..m.clone() }, &[]).unwrap();
        assert!(matches!(
            build_reshaped(&s, &m, &[table("a,M7,1.0,3,P1\n")]),
            Err(KgenError::MissingHome { .. })
        ));
    }

    #[test]
    fn unreachable_home_is_no_path() {
        let (mut o, m) = fixture();
        o.add_class(format!("{NS}Island"));
        o.add_datatype_property(format!("{NS}height"), format!("{NS}Island")).unwrap();
        let mut m = m;
        let current = m.attributes.iter_mut().find(|a| a.attribute == "current").unwrap();
        current.target = crate::mapping::AttributeTarget::DataProperty(format!("{NS}height"));
        assert!(matches!(
            build_baseline(&o, &m, &[table("a,M7,1.0,3,P1\n")]),
            Err(KgenError::NoPath { .. })
        ));
    }

    #[test]
    fn minted_iris_are_valid_and_distinct() {
        let p = EntityMintingPolicy::for_class("http://ex.org/w#Machine");
        assert_eq!(p.base, "http://ex.org/w/data");
        let row = p.row("http://ex.org/w#Machine", "Op", 3);
        assert_eq!(row, Term::iri("http://ex.org/w/data/Machine/Op_3"));
        let key = p.key("http://ex.org/w#Machine", "Op_3");
        assert_ne!(row, key);
        let odd = p.key("http://ex.org/w#Machine", "a b/<c>\"#é");
        assert!(crate::rdf::valid_iri(odd.as_iri().unwrap()));
    }

    #[test]
    fn payload_counts_literals() {
        assert!(literal_payload(&Graph::new()).is_empty());
        let mut g = Graph::new();
        for (s, v) in [("a", 1), ("b", 1), ("c", 2)] {
            g.add(
                Term::iri(format!("http://x/{s}")),
                Term::iri("http://x/v"),
                Term::Literal(Literal::integer(v)),
            );
        }
        g.add(Term::iri("http://x/a"), Term::iri("http://x/p"), Term::iri("http://x/b"));
        let payload = literal_payload(&g);
        assert_eq!(payload.values().sum::<usize>(), 3);
        assert_eq!(payload[&("v".to_string(), Literal::integer(1).to_string())], 2);
    }

    #[test]
    fn report_json_line() {
        let r = KgBuildReport::new(Variant::Reshaped, &Graph::new(), 0.5, 0);
        let line = r.to_json_line();
        assert!(line.contains("\"variant\":\"reshaped\""));
        assert!(line.contains("\"blank_node_count\":0"));
        assert!(!line.contains('\n'));
    }
}
