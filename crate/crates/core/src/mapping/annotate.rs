use std::collections::BTreeSet;

use serde::Serialize;

use crate::ontology::OntologyGraph;
use crate::rdf::{local_name, namespace};

use super::{AttributeBinding, AttributeTarget, MappingError, MappingSpec, TableBinding, TableData};

/// Outcome of automatic annotation for one table. The four lists partition
/// the table's attributes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AnnotationReport {
    pub table: String,
    pub auto_bound: Vec<String>,
    pub elevated: Vec<String>,
    pub unbound: Vec<String>,
    pub ambiguous: Vec<(String, Vec<String>)>,
}

impl AnnotationReport {
    pub fn render(&self) -> String {
        let mut out = format!("table {}\n", self.table);
        for a in &self.auto_bound {
            out.push_str(&format!("  bound     {a}\n"));
        }
        for a in &self.elevated {
            out.push_str(&format!("  elevated  {a}\n"));
        }
        for a in &self.unbound {
            out.push_str(&format!("  unbound   {a}\n"));
        }
        for (a, candidates) in &self.ambiguous {
            out.push_str(&format!("  ambiguous {a}: {}\n", candidates.join(" ")));
        }
        out
    }
}

/// Lowercases and drops `_` / `-`.
pub fn normalize(name: &str) -> String {
    name.chars()
        .filter(|c| *c != '_' && *c != '-')
        .flat_map(char::to_lowercase)
        .collect()
}

/// Strips a trailing `ID` / `NAME` (case-insensitive), returning the stem.
fn key_stem(attribute: &str) -> Option<&str> {
    let lower = attribute.to_ascii_lowercase();
    ["id", "name"].iter().find_map(|suffix| {
        lower
            .ends_with(suffix)
            .then(|| &attribute[..attribute.len() - suffix.len()])
            .filter(|stem| !normalize(stem).is_empty())
    })
}

/// Binds a table and its attributes to ontology terms by name.
///
/// The table binds to the class whose normalized local name equals the
/// normalized table name. An attribute ending in `ID`/`NAME` whose stem names
/// a class is elevated to a key of that class; other attributes bind to the
/// datatype property of the same normalized name. Attributes with no match
/// are reported unbound; those with several matches are reported ambiguous
/// and left unbound.
pub fn auto_annotate(t: &TableData, o: &OntologyGraph) -> Result<(MappingSpec, AnnotationReport), MappingError> {
    let classes_named = |name: &str| -> Vec<String> {
        let n = normalize(name);
        o.classes()
            .iter()
            .filter(|c| normalize(local_name(c)) == n)
            .cloned()
            .collect()
    };
    let table_candidates = classes_named(&t.name);
    let table_class = match table_candidates.as_slice() {
        [] => return Err(MappingError::UnknownTableClass(t.name.clone())),
        [one] => one.clone(),
        _ => {
            return Err(MappingError::AmbiguousTableClass {
                table: t.name.clone(),
                candidates: table_candidates,
            })
        }
    };

    let mut spec = MappingSpec::new();
    spec.prefixes.insert("onto".into(), namespace(&table_class).to_string());
    spec.tables.push(TableBinding {
        table: t.name.clone(),
        class: table_class,
    });
    let mut report = AnnotationReport {
        table: t.name.clone(),
        ..Default::default()
    };

    for attr in &t.attributes {
        if let Some(stem) = key_stem(attr) {
            let candidates = classes_named(stem);
            match candidates.len() {
                0 => {}
                1 => {
                    spec.attributes.push(AttributeBinding {
                        table: t.name.clone(),
                        attribute: attr.clone(),
                        target: AttributeTarget::ClassKey(candidates[0].clone()),
                    });
                    report.elevated.push(attr.clone());
                    continue;
                }
                _ => {
                    report.ambiguous.push((attr.clone(), candidates));
                    continue;
                }
            }
        }
        let n = normalize(attr);
        let props: BTreeSet<&str> = o
            .datatype_properties()
            .iter()
            .filter(|p| normalize(local_name(&p.iri)) == n)
            .map(|p| p.iri.as_str())
            .collect();
        match props.len() {
            0 => report.unbound.push(attr.clone()),
            1 => {
                spec.attributes.push(AttributeBinding {
                    table: t.name.clone(),
                    attribute: attr.clone(),
                    target: AttributeTarget::DataProperty(props.into_iter().next().unwrap().to_string()),
                });
                report.auto_bound.push(attr.clone());
            }
            _ => report
                .ambiguous
                .push((attr.clone(), props.into_iter().map(String::from).collect())),
        }
    }
    Ok((spec, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::load_csv;

    const NS: &str = "http://ex.org/onto#";

    fn onto() -> OntologyGraph {
        let mut o = OntologyGraph::new();
        for c in ["Machine", "Program", "Welding_Operation"] {
            o.add_class(format!("{NS}{c}"));
        }
        o.add_datatype_property(format!("{NS}power"), format!("{NS}Machine")).unwrap();
        o.add_datatype_property(format!("{NS}current"), format!("{NS}Program")).unwrap();
        o
    }

    #[test]
    fn machine_table_elevates_key() {
        let t = load_csv("machineID,power\nM1,3.5\n", "Machine").unwrap();
        let (spec, report) = auto_annotate(&t, &onto()).unwrap();
        assert_eq!(spec.table_class("Machine"), Some(format!("{NS}Machine").as_str()));
        assert_eq!(
            spec.binding("Machine", "machineID").unwrap().target,
            AttributeTarget::ClassKey(format!("{NS}Machine"))
        );
        assert_eq!(
            spec.binding("Machine", "power").unwrap().target,
            AttributeTarget::DataProperty(format!("{NS}power"))
        );
        assert_eq!(report.elevated, vec!["machineID"]);
        assert_eq!(report.auto_bound, vec!["power"]);
        assert!(report.unbound.is_empty() && report.ambiguous.is_empty());
    }

    #[test]
    fn normalization_ignores_case_and_separators() {
        let t = load_csv("Power,CURRENT\n", "welding-operation").unwrap();
        let (spec, report) = auto_annotate(&t, &onto()).unwrap();
        assert_eq!(spec.table_class("welding-operation"), Some(format!("{NS}Welding_Operation").as_str()));
        assert!(report.elevated.is_empty() && report.unbound.is_empty());
        assert_eq!(report.auto_bound.len(), 2);
    }

    #[test]
    fn elevation_needs_a_class() {
        let t = load_csv("sensorID,power\n", "Machine").unwrap();
        let (spec, report) = auto_annotate(&t, &onto()).unwrap();
        assert_eq!(report.unbound, vec!["sensorID"]);
        assert!(spec.binding("Machine", "sensorID").is_none());
    }

    #[test]
    fn unknown_table() {
        let t = load_csv("a\n", "Spaceship").unwrap();
        assert_eq!(
            auto_annotate(&t, &onto()).unwrap_err(),
            MappingError::UnknownTableClass("Spaceship".into())
        );
    }

    #[test]
    fn ambiguous_matches_are_reported_not_bound() {
        let mut o = onto();
        o.add_class("http://other.org/Machine");
        let t = load_csv("power\n", "Program").unwrap();
        let (_, r) = auto_annotate(&t, &o).unwrap();
        assert_eq!(r.auto_bound, vec!["power"]);
        o.add_class("http://other.org/x#Program");
        assert!(matches!(auto_annotate(&t, &o), Err(MappingError::AmbiguousTableClass { .. })));
        let t = load_csv("machineName\n", "Welding_Operation").unwrap();
        let (spec, r) = auto_annotate(&t, &o).unwrap();
        assert_eq!(r.ambiguous.len(), 1);
        assert_eq!(r.ambiguous[0].1.len(), 2);
        assert!(spec.attributes.is_empty());
    }

    #[test]
    fn idempotent() {
        let t = load_csv("machineID,power,current,other\n", "Machine").unwrap();
        let a = auto_annotate(&t, &onto()).unwrap();
        let b = auto_annotate(&t, &onto()).unwrap();
        assert_eq!(a, b);
    }
}
