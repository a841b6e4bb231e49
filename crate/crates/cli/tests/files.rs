use std::path::PathBuf;

use entassist::files::{
    builtin_protocol, catalog_state, load_protocol, read_state, write_protocol, write_state, StateFile, CATALOG_NAMES,
};
use entassist_core::locc::{run_protocol, SystemState};

fn bits(state: &SystemState) -> Vec<u64> {
    match state {
        SystemState::Pure(p) => p
            .amplitudes()
            .iter()
            .flat_map(|z| [z.re.to_bits(), z.im.to_bits()])
            .collect(),
        SystemState::Mixed(r) => r
            .matrix()
            .as_slice()
            .iter()
            .flat_map(|z| [z.re.to_bits(), z.im.to_bits()])
            .collect(),
    }
}

#[test]
fn catalog_states_round_trip_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    for name in CATALOG_NAMES {
        let state = catalog_state(name).unwrap();
        let path = dir.path().join(format!("{name}.json"));
        write_state(&path, &state).unwrap();
        let back = read_state(&path, false).unwrap();
        assert_eq!(bits(&state), bits(&back), "{name}");
        assert_eq!(state.space(), back.space(), "{name}");
    }
}

#[test]
fn shipped_catalog_files_match_library() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../catalog");
    for name in ["phi", "mixed", "bell", "maxent_8x4"] {
        let shipped = read_state(&dir.join(format!("{name}.json")), false).unwrap();
        assert_eq!(bits(&shipped), bits(&catalog_state(name).unwrap()), "{name}");
    }
}

#[test]
fn protocols_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (name, state) in [("phi", "phi"), ("mixed", "mixed")] {
        let p = builtin_protocol(name).unwrap();
        let path = dir.path().join("p.json");
        write_protocol(&path, &p).unwrap();
        let back = load_protocol(path.to_str().unwrap()).unwrap();
        assert_eq!(back.depth(), p.depth());
        let s = catalog_state(state).unwrap();
        let a = run_protocol(&s, &p).unwrap();
        let b = run_protocol(&s, &back).unwrap();
        assert_eq!(a, b, "{name}");
    }
}

fn pure_file(scale: f64) -> String {
    let h = std::f64::consts::FRAC_1_SQRT_2 * scale;
    format!(r#"{{"dims": [2, 2], "kind": "pure", "amplitudes": [[{h}, 0], [0, 0], [0, 0], [{h}, 0]]}}"#)
}

#[test]
fn normalization_enforced_unless_renormalizing() {
    let ok: StateFile = serde_json::from_str(&pure_file(1.0)).unwrap();
    assert!(ok.into_state(false).is_ok());
    let off: StateFile = serde_json::from_str(&pure_file(1.01)).unwrap();
    assert!(off.clone().into_state(false).is_err());
    let fixed = off.into_state(true).unwrap();
    let norm: f64 = match &fixed {
        SystemState::Pure(p) => p.amplitudes().iter().map(|z| z.norm_sqr()).sum(),
        SystemState::Mixed(_) => panic!("expected pure"),
    };
    assert!((norm - 1.0).abs() < 1e-15);
}

#[test]
fn malformed_files_rejected() {
    for text in [
        r#"{"dims": [2, 2], "kind": "pure"}"#,
        r#"{"dims": [2, 2], "kind": "pure", "amplitudes": [[1, 0]]}"#,
        r#"{"dims": [2], "kind": "mixed", "entries": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}"#,
        r#"{"dims": [2], "kind": "mixed", "entries": [[[1, 0], [0.5, 0]], [[0, 0], [0, 0]]]}"#,
        r#"{"dims": [2], "kind": "qutrit", "amplitudes": [[1, 0], [0, 0]]}"#,
        r#"{"dims": [2], "kind": "pure", "amplitudes": [[1, 0], [0, 0]], "extra": 1}"#,
    ] {
        let parsed: Result<StateFile, _> = serde_json::from_str(text);
        if let Ok(f) = parsed {
            assert!(f.into_state(false).is_err(), "{text}");
        }
    }
}

#[test]
fn incomplete_protocol_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"party": "A", "operators": {"0": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]}, "children": {"0": {}}}"#,
    )
    .unwrap();
    assert!(load_protocol(path.to_str().unwrap()).is_err());
}
