use zzpa_wasm_demo::{limit_set_figure, salem_report_json, zigzag_figure};

#[test]
fn figures_render() {
    let svg = zigzag_figure(2, 1, 2).unwrap();
    assert!(svg.starts_with("<svg"));
    let ls = limit_set_figure(2, 1, 4).unwrap();
    assert_eq!(ls.matches("<rect class=").count(), 6);
}

#[test]
fn bad_labels_are_errors() {
    assert!(zigzag_figure(2, 2, 2).is_err());
    assert!(zigzag_figure(1, 1, 2).is_err());
}

#[test]
fn salem_report_is_json() {
    let v: serde_json::Value = serde_json::from_str(&salem_report_json(2).unwrap()).unwrap();
    assert_eq!(v["is_salem"], true);
    assert_eq!(v["degenerate"], false);
    assert_eq!(v["unit_circle_roots"], 2);
}
