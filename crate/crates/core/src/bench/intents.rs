use std::collections::BTreeSet;

use crate::mapping::{AttributeBinding, AttributeTarget, MappingSpec, TableData};
use crate::query::{AttrRef, CompareOp, IntentFilter, IntentKind, QueryIntent};

fn is_key(a: &AttributeBinding) -> bool {
    matches!(a.target, AttributeTarget::ClassKey(_))
}

/// Value at the given percentile of a numeric column (nearest rank).
fn percentile(t: &TableData, attribute: &str, pct: f64) -> Option<crate::rdf::Literal> {
    let mut values: Vec<_> = t.column(attribute)?.filter(|v| v.as_f64().is_some()).collect();
    if values.is_empty() {
        return None;
    }
    values.sort_by(|a, b| a.as_f64().partial_cmp(&b.as_f64()).expect("finite values"));
    let rank = ((pct * values.len() as f64).ceil() as usize).clamp(1, values.len());
    values[rank - 1].to_literal()
}

/// Instantiates the intent suite for a mapping.
///
/// Per table: one Type I intent per consecutive group of three attributes;
/// one Type II intent per elevated attribute, counting the table's first
/// other attribute grouped by the key; one Type III intent per numeric
/// attribute, selecting values at or above its 90th percentile with the
/// first other attribute (keys preferred) as context.
pub fn generate_intents(m: &MappingSpec, tables: &[TableData], templates: &BTreeSet<IntentKind>) -> Vec<QueryIntent> {
    let mut out = Vec::new();
    for tb in &m.tables {
        let Some(data) = tables.iter().find(|d| d.name == tb.table) else {
            continue;
        };
        let attrs: Vec<&AttributeBinding> = m
            .attributes_of(&tb.table)
            .filter(|a| data.column_index(&a.attribute).is_some())
            .collect();
        let r = |a: &AttributeBinding| AttrRef::new(&a.table, &a.attribute);
        let first_other = |a: &AttributeBinding, prefer_key: bool| {
            let others = || attrs.iter().filter(|b| b.attribute != a.attribute);
            others()
                .find(|b| !prefer_key || is_key(b))
                .or_else(|| others().next())
                .map(|b| r(b))
        };

        if templates.contains(&IntentKind::Inspection) {
            for (n, chunk) in attrs.chunks(3).enumerate() {
                out.push(QueryIntent::inspection(
                    format!("{}_I{}", tb.table, n + 1),
                    chunk.iter().map(|a| r(a)).collect(),
                ));
            }
        }
        if templates.contains(&IntentKind::Summary) {
            for (n, key) in attrs.iter().filter(|a| is_key(a)).enumerate() {
                if let Some(target) = first_other(key, false) {
                    out.push(QueryIntent::summary(format!("{}_II{}", tb.table, n + 1), target, r(key)));
                }
            }
        }
        if templates.contains(&IntentKind::Diagnostic) {
            let numeric = attrs.iter().filter(|a| !is_key(a) && data.is_numeric_column(&a.attribute));
            for (n, a) in numeric.enumerate() {
                let Some(value) = percentile(data, &a.attribute, 0.9) else {
                    continue;
                };
                let filter = IntentFilter {
                    attribute: r(a),
                    op: CompareOp::Ge,
                    value,
                };
                let context = first_other(a, true).into_iter().collect();
                out.push(QueryIntent::diagnostic(format!("{}_III{}", tb.table, n + 1), filter, context));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{generate_synthetic, SynthConfig};

    #[test]
    fn counts_follow_templates() {
        let c = generate_synthetic(&SynthConfig::demo()).unwrap();
        let all: BTreeSet<_> = [IntentKind::Inspection, IntentKind::Summary, IntentKind::Diagnostic].into();
        let intents = generate_intents(&c.mapping, &c.tables, &all);
        let count = |k| intents.iter().filter(|i| i.kind == k).count();
        let keys = c.mapping.attributes.iter().filter(|a| is_key(a)).count();
        assert_eq!(count(IntentKind::Inspection), 8);
        assert_eq!(count(IntentKind::Summary), keys);
        assert_eq!(count(IntentKind::Diagnostic), 24 - keys);
        for i in &intents {
            i.check().unwrap();
        }
    }

    #[test]
    fn percentile_is_nearest_rank() {
        let t = crate::mapping::load_csv("x\n1\n2\n3\n4\n5\n6\n7\n8\n9\n10\n\n", "T").unwrap();
        assert_eq!(percentile(&t, "x", 0.9).unwrap().lexical(), "9");
        assert_eq!(percentile(&t, "x", 1.0).unwrap().lexical(), "10");
    }
}
