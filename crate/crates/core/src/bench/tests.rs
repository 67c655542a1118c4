use super::*;
use crate::kgen::Variant;
use crate::mapping::validate_mapping;
use crate::ontology::Adjacency;
use crate::reshape::{reshape, select_subgraph};

fn small() -> SynthConfig {
    SynthConfig {
        rows_per_table: 60,
        ..SynthConfig::demo()
    }
}

#[test]
fn demo_corpus_shape() {
    let c = generate_synthetic(&SynthConfig::demo()).unwrap();
    assert_eq!(c.ontology.classes().len(), 14);
    assert_eq!(c.tables.len(), 2);
    assert!(c.tables.iter().all(|t| t.attributes.len() == 12 && t.rows.len() == 500));
    assert_eq!(c.mapping.attributes.len(), 24);
    assert!(validate_mapping(&c.mapping, &c.ontology, &c.tables).is_empty());

    let root = format!("{WELDING_NS}Manufacturing");
    let dist = Adjacency::of(&c.ontology).distances(&root).values().copied().max();
    assert_eq!(dist, Some(3));
    assert_eq!(c.ontology.object_properties().len(), 13);

    let fragments = select_subgraph(&c.ontology, &c.mapping);
    assert!(fragments.len() >= 2, "{} fragments", fragments.len());
}

#[test]
fn generation_is_deterministic() {
    let a = generate_synthetic(&small()).unwrap();
    let b = generate_synthetic(&small()).unwrap();
    assert_eq!(a.ontology, b.ontology);
    assert_eq!(a.mapping.serialize(), b.mapping.serialize());
    assert_eq!(a.tables.iter().map(|t| t.to_csv()).collect::<Vec<_>>(), b.tables.iter().map(|t| t.to_csv()).collect::<Vec<_>>());
    let c = generate_synthetic(&SynthConfig { seed: 7, ..small() }).unwrap();
    assert_ne!(a.mapping.serialize(), c.mapping.serialize());
}

#[test]
fn depth_one_single_table_needs_no_compaction() {
    let cfg = SynthConfig {
        class_count: 2,
        depth: 1,
        branching: 1,
        table_count: 1,
        attributes_per_table: 4,
        rows_per_table: 10,
        elevation_fraction: 0.0,
        null_fraction: 0.0,
        seed: 1,
    };
    let c = generate_synthetic(&cfg).unwrap();
    let s = reshape(&c.ontology, &c.mapping, &[]).unwrap();
    assert_eq!(*s.ontology.classes(), c.ontology.classes().iter().filter(|x| x.ends_with("Operation")).cloned().collect::<std::collections::BTreeSet<_>>());
    assert!(s.composite_provenance.is_empty());
    let exp = ExperimentConfig {
        ladder: vec![4],
        repetitions: 1,
        ..ExperimentConfig::demo()
    };
    let r = run_experiment(&exp, &c.ontology, &c.tables, &c.mapping).unwrap();
    assert_eq!(r.rows[0].avg_depth, r.rows[1].avg_depth);
}

#[test]
fn invalid_configs() {
    let bad = [
        SynthConfig { class_count: 3, ..SynthConfig::demo() },
        SynthConfig { elevation_fraction: 1.5, ..SynthConfig::demo() },
        SynthConfig { rows_per_table: 0, ..SynthConfig::demo() },
        SynthConfig { class_count: 400, ..SynthConfig::demo() },
        SynthConfig { branching: 2, ..SynthConfig::demo() },
    ];
    for cfg in bad {
        assert!(matches!(generate_synthetic(&cfg), Err(BenchError::Config(_))), "{cfg:?}");
    }
}

#[test]
fn minimal_grid() {
    let c = generate_synthetic(&small()).unwrap();
    let cfg = ExperimentConfig {
        ladder: vec![24],
        repetitions: 1,
        ..ExperimentConfig::demo()
    };
    let r = run_experiment(&cfg, &c.ontology, &c.tables, &c.mapping).unwrap();
    assert_eq!(r.rows.len(), 2);
    assert_eq!(r.summary().len(), 2);
    assert!(r.rows.iter().all(|row| row.error.is_none()), "{:?}", r.rows);
    assert_eq!(r.total_mismatches(), 0);
    let (b, s) = (&r.rows[0], &r.rows[1]);
    assert_eq!((b.variant, s.variant), (Variant::Baseline, Variant::Reshaped));
    assert!(s.avg_depth < b.avg_depth);
    assert_eq!(s.stats.blank_node_count, 0);
    assert!(b.stats.blank_node_count > 0);
}

#[test]
fn oversized_ladder_rejected() {
    let c = generate_synthetic(&small()).unwrap();
    let cfg = ExperimentConfig {
        ladder: vec![25],
        ..ExperimentConfig::demo()
    };
    assert!(matches!(
        run_experiment(&cfg, &c.ontology, &c.tables, &c.mapping),
        Err(BenchError::SampleTooLarge { .. })
    ));
}

#[test]
fn persists_reports() {
    let c = generate_synthetic(&small()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig {
        ladder: vec![4, 8],
        repetitions: 2,
        out: Some(dir.path().to_path_buf()),
        write_graphs: true,
        ..ExperimentConfig::demo()
    };
    let r = run_experiment(&cfg, &c.ontology, &c.tables, &c.mapping).unwrap();
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert_eq!(csv, render_report(&r).1);
    let builds = std::fs::read_to_string(dir.path().join("builds.jsonl")).unwrap();
    assert_eq!(builds.lines().count(), 8);
    assert!(dir.path().join("graphs/k8_r1_reshaped.nt").exists());
}
