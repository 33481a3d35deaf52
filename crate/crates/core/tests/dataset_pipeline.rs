use proptest::prelude::*;
use rdo_core::dataset::{
    format_sig17, generate_design, load_samples, synthetic_cht, synthetic_dataset, write_samples, DataError,
    DesignPoint, NormalizationMap,
};
use rdo_core::grid::Domain;

const GOLDEN: &str = include_str!("data/synthetic_cht_golden.csv");

fn parse(cell: &str) -> f64 {
    cell.parse().expect("numeric golden cell")
}

#[test]
fn synthetic_outputs_match_frozen_golden() {
    let mut lines = GOLDEN.lines();
    assert_eq!(lines.next(), Some("x1,x2,y1,y2"));
    let expected_points = Domain::extended(0.1).grid(13, 13);
    let mut rows = 0;
    for (line, want_p) in lines.zip(&expected_points) {
        let cells: Vec<f64> = line.split(',').map(parse).collect();
        assert_eq!((cells[0], cells[1]), (want_p.x1, want_p.x2), "grid drifted: {line}");
        let (y1, y2) = synthetic_cht(DesignPoint::new(cells[0], cells[1])).unwrap();
        assert!((y1 - cells[2]).abs() <= 1e-15, "y1 at {line}: {}", format_sig17(y1));
        assert!((y2 - cells[3]).abs() <= 1e-15, "y2 at {line}: {}", format_sig17(y2));
        rows += 1;
    }
    assert_eq!(rows, 169);
}

fn physical_csv() -> String {
    let map = NormalizationMap::channel_default();
    let recs = synthetic_dataset::<f64>(20, 80, 3).unwrap();
    let mut buf = Vec::new();
    write_samples(&mut buf, &recs, &map).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn hundred_row_file_loads_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("samples.csv");
    std::fs::write(&path, physical_csv()).unwrap();
    let (recs, map) = load_samples::<f64>(&path).unwrap();
    assert_eq!(recs.len(), 100);
    let original = synthetic_dataset::<f64>(20, 80, 3).unwrap();
    for (a, b) in recs.iter().zip(&original) {
        assert!(a.point.max_abs_diff(&b.point) < 1e-12);
        assert!((a.y1 - b.y1).abs() < 1e-12 && (a.y2 - b.y2).abs() < 1e-12);
    }
    assert_eq!(map.inputs[0].lo, 0.015);
    assert_eq!(map.outputs[0].hi, 1437.0);
}

#[test]
fn bad_cell_on_row_seven_is_named() {
    let text = physical_csv();
    let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
    let header = lines.iter().position(|l| l.starts_with("x1,")).unwrap();
    let target = header + 7;
    let mut cells: Vec<&str> = lines[target].split(',').collect();
    cells[2] = "n/a";
    lines[target] = cells.join(",");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, lines.join("\n")).unwrap();
    let err = load_samples::<f64>(&path).unwrap_err();
    assert!(matches!(err, DataError::Row { row: 7, .. }), "{err:?}");
    assert!(err.to_string().contains("row 7"), "{err}");
}

#[test]
fn column_span_becomes_output_bounds() {
    let text = "x1,x2,y1,y2\n0.1,0.06,50.87,13\n0.3,0.1,1437,16\n0.2,0.08,700,14.5\n";
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("span.csv");
    std::fs::write(&path, text).unwrap();
    let (recs, map) = load_samples::<f64>(&path).unwrap();
    assert_eq!((map.outputs[0].lo, map.outputs[0].hi), (50.87, 1437.0));
    assert_eq!(recs[0].y1, 0.0);
    assert_eq!(recs[1].y1, 1.0);
}

#[test]
fn missing_file_is_an_io_error() {
    let err = load_samples::<f64>("/nonexistent/samples.csv").unwrap_err();
    assert!(matches!(err, DataError::Io { .. }));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn perimeter_points_touch_the_box(quarter in 1usize..12, interior in 0usize..40, seed in any::<u64>()) {
        let nb = 4 * quarter;
        let pts = generate_design::<f64>(nb, interior, seed).unwrap();
        prop_assert_eq!(pts.len(), nb + interior);
        let on_edge = |v: f64| v == 0.0 || v == 1.0;
        for p in &pts[..nb] {
            prop_assert!(on_edge(p.x1) || on_edge(p.x2));
        }
        for p in &pts[nb..] {
            prop_assert!(p.x1 > 0.0 && p.x1 < 1.0 && p.x2 > 0.0 && p.x2 < 1.0);
        }
        prop_assert_eq!(pts, generate_design::<f64>(nb, interior, seed).unwrap());
    }

    #[test]
    fn normalization_round_trips(v in prop::array::uniform4(-0.1f64..1.1)) {
        let map = NormalizationMap::channel_default();
        let phys = map.denormalize(v).unwrap();
        let back = map.normalize(phys).unwrap();
        for i in 0..4 {
            prop_assert!((back[i] - v[i]).abs() <= 1e-12 * v[i].abs().max(1.0));
        }
    }
}
