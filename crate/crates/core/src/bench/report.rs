use std::fmt::Write as _;

use crate::kgen::Variant;

use super::ExperimentReport;

fn variant_label(v: Variant) -> &'static str {
    match v {
        Variant::Baseline => "Baseline",
        Variant::Reshaped => "Onto-Reshape",
    }
}

fn table_row(out: &mut String, cells: &[String]) {
    let _ = writeln!(out, "| {} |", cells.join(" | "));
}

/// Renders the report as markdown and CSV.
///
/// The markdown leads with one column per subset and rows of average and
/// maximum query depth per variant (one decimal), followed by graph
/// statistics, the build-time ratio and answer agreement. The CSV lists the
/// raw rows without timing so that reruns compare byte for byte.
pub fn render_report(r: &ExperimentReport) -> (String, String) {
    let sizes = r.subset_sizes();
    let summary = r.summary();
    let mut md = String::from("# Query depth\n\n");
    let mut header = vec!["Metric".to_string()];
    header.extend((1..=sizes.len()).map(|i| format!("Set {i}")));
    table_row(&mut md, &header);
    table_row(&mut md, &vec!["---".to_string(); header.len()]);
    if !sizes.is_empty() {
        let mut attrs = vec!["Attributes".to_string()];
        attrs.extend(sizes.iter().map(usize::to_string));
        table_row(&mut md, &attrs);
        for variant in [Variant::Baseline, Variant::Reshaped] {
            for (label, pick) in [("avg.", true), ("max.", false)] {
                let mut cells = vec![format!("{} {label} query depth", variant_label(variant))];
                cells.extend(
                    summary
                        .iter()
                        .filter(|s| s.variant == variant)
                        .map(|s| format!("{:.1}", if pick { s.avg_depth } else { s.max_depth })),
                );
                table_row(&mut md, &cells);
            }
        }

        md.push_str("\n## Graph statistics\n\n");
        table_row(
            &mut md,
            &["Attributes", "Variant", "Entities", "Blank nodes", "Triples", "Storage bytes", "Build time (s)"]
                .map(String::from),
        );
        table_row(&mut md, &vec!["---".to_string(); 7]);
        for s in &summary {
            table_row(
                &mut md,
                &[
                    s.subset_size.to_string(),
                    variant_label(s.variant).to_string(),
                    format!("{:.1}", s.entity_count),
                    format!("{:.1}", s.blank_node_count),
                    format!("{:.1}", s.triple_count),
                    format!("{:.0}", s.storage_bytes),
                    format!("{:.4}", s.build_time_s),
                ],
            );
        }
        md.push('\n');
        match r.build_time_ratio() {
            Some(x) => {
                let _ = writeln!(md, "Build-time ratio (baseline / reshaped): {x:.2}");
            }
            None => md.push_str("Build-time ratio (baseline / reshaped): n/a\n"),
        }
        let _ = writeln!(
            md,
            "Answer agreement: {} of {} intents identical",
            r.total_intents() - r.total_mismatches(),
            r.total_intents()
        );
        let errors: Vec<_> = r
            .rows
            .iter()
            .filter(|row| row.variant == Variant::Baseline)
            .filter_map(|row| row.error.as_ref().map(|e| (row.subset_size, row.repetition, e)))
            .collect();
        if !errors.is_empty() {
            md.push_str("\n## Failed cells\n\n");
            for (k, rep, e) in errors {
                let _ = writeln!(md, "- {k} attributes, repetition {rep}: {e}");
            }
        }
    }

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "subset_size",
        "repetition",
        "variant",
        "intents",
        "avg_depth",
        "max_depth",
        "entity_count",
        "blank_node_count",
        "triple_count",
        "storage_bytes",
        "mismatches",
        "error",
    ])
    .expect("write to memory");
    for row in &r.rows {
        w.write_record([
            row.subset_size.to_string(),
            row.repetition.to_string(),
            row.variant.to_string(),
            row.intents.to_string(),
            format!("{:.4}", row.avg_depth),
            row.max_depth.to_string(),
            row.stats.entity_count.to_string(),
            row.stats.blank_node_count.to_string(),
            row.stats.triple_count.to_string(),
            row.stats.storage_bytes.to_string(),
            row.mismatches.to_string(),
            row.error.clone().unwrap_or_default(),
        ])
        .expect("write to memory");
    }
    let csv = String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf8");
    (md, csv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::RawRow;
    use crate::rdf::GraphStats;

    fn raw(size: usize, variant: Variant, avg: f64, max: usize) -> RawRow {
        RawRow {
            subset_size: size,
            repetition: 0,
            variant,
            intents: 3,
            avg_depth: avg,
            max_depth: max,
            stats: GraphStats::default(),
            build_time_s: 0.5,
            mismatches: 0,
            error: None,
        }
    }

    #[test]
    fn table_cells_use_one_decimal() {
        let mut r = ExperimentReport::default();
        for (size, b, s) in [(20, 4.2, 2.3), (40, 4.4, 2.4)] {
            r.rows.push(raw(size, Variant::Baseline, b, 5));
            r.rows.push(raw(size, Variant::Reshaped, s, 3));
        }
        let (md, csv) = render_report(&r);
        let line = |prefix: &str| md.lines().find(|l| l.starts_with(prefix)).unwrap().to_string();
        assert_eq!(line("| Baseline avg."), "| Baseline avg. query depth | 4.2 | 4.4 |");
        assert_eq!(line("| Onto-Reshape avg."), "| Onto-Reshape avg. query depth | 2.3 | 2.4 |");
        assert_eq!(line("| Baseline max."), "| Baseline max. query depth | 5.0 | 5.0 |");
        assert!(md.contains("Build-time ratio (baseline / reshaped): 1.00"));
        assert_eq!(csv.lines().count(), 5);
        assert!(!csv.contains("0.5"));
    }

    #[test]
    fn empty_report_is_header_only() {
        let (md, csv) = render_report(&ExperimentReport::default());
        assert_eq!(md, "# Query depth\n\n| Metric |\n| --- |\n");
        assert_eq!(csv.lines().count(), 1);
    }
}
