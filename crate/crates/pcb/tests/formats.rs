use std::path::Path;

use pcb::formats::{self, DatasetMeta, GraphFile, ModelFile};
use pcb_core::fixtures::{synthetic_model, synthetic_graph};
use pcb_core::Dataset;
use proptest::prelude::*;

fn fixture_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures"))
}

#[test]
fn bundled_files_match_builtins() {
    let g = formats::load_graph(fixture_dir().join("synthetic.graph.json").to_str().unwrap()).unwrap();
    assert_eq!(g, synthetic_graph());
    let m = formats::load_model(fixture_dir().join("synthetic.model.json").to_str().unwrap()).unwrap();
    assert_eq!(m, synthetic_model());
    // a model file doubles as a graph source
    let g2 = formats::load_graph(fixture_dir().join("synthetic.model.json").to_str().unwrap()).unwrap();
    assert_eq!(&g2, synthetic_model().graph());
}

#[test]
fn model_round_trips_through_json() {
    let m = synthetic_model();
    let text = serde_json::to_string(&ModelFile::from_model(&m)).unwrap();
    let back: ModelFile = serde_json::from_str(&text).unwrap();
    assert_eq!(back.build().unwrap(), m);
}

#[test]
fn malformed_graphs_are_rejected() {
    let bad_kind = r#"{"nodes": [{"name": "A", "kind": "hidden"}]}"#;
    let g: GraphFile = serde_json::from_str(bad_kind).unwrap();
    assert!(g.build().is_err());
    let cycle = r#"{"nodes": [{"name": "A", "kind": "observed"}, {"name": "B", "kind": "observed"}],
                    "edges": [["A", "B"], ["B", "A"]]}"#;
    let g: GraphFile = serde_json::from_str(cycle).unwrap();
    assert!(g.build().is_err());
    let extra = r#"{"nodes": [], "colour": 1}"#;
    assert!(serde_json::from_str::<GraphFile>(extra).is_err());
    assert!(formats::load_graph("builtin:nope").is_err());
}

#[test]
fn short_cpt_is_a_model_error() {
    let mut f = ModelFile::from_model(&synthetic_model());
    f.cpts.insert("Y".into(), vec![0.5]);
    assert!(matches!(f.build(), Err(pcb::CliError::Model(_))));
}

#[test]
fn dataset_sidecar_supplies_n_pre() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    let data = Dataset { columns: vec!["A".into(), "B".into()], rows: vec![0b01, 0b10, 0b11], n_pre: 10 };
    let meta = DatasetMeta {
        model: "m".into(),
        seed: 1,
        n_pre: 10,
        retained: 3,
        retention_rate: 0.3,
        columns: data.columns.clone(),
    };
    formats::write_dataset(&path, &data, &meta).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "A,B\n1,0\n0,1\n1,1\n");
    assert_eq!(formats::read_dataset(&path).unwrap(), data);
    std::fs::remove_file(formats::meta_path(&path)).unwrap();
    assert_eq!(formats::read_dataset(&path).unwrap().n_pre, 3);
}

#[test]
fn non_binary_cells_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    std::fs::write(&path, "A,B\n0,1\n2,0\n").unwrap();
    let err = formats::read_dataset(&path).unwrap_err();
    assert_eq!(err.kind(), "parse");
    assert!(err.to_string().contains("row 3"));
}

proptest! {
    #[test]
    fn dataset_csv_round_trips(cols in 1usize..8, rows in prop::collection::vec(any::<u64>(), 0..50)) {
        let mask = (1u64 << cols) - 1;
        let data = Dataset {
            columns: (0..cols).map(|i| format!("V{i}")).collect(),
            rows: rows.iter().map(|r| r & mask).collect(),
            n_pre: rows.len(),
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        std::fs::write(&path, formats::dataset_csv(&data)).unwrap();
        prop_assert_eq!(formats::read_dataset(&path).unwrap(), data);
    }
}
