//! Frozen lattice shapes of the bundled examples. Set
//! `CLOCKLAT_UPDATE_GOLDENS=1` to rewrite the files after an intended change.

use clocklat::corpus;
use clocklat::dual_lattice::GenusClock;
use clocklat::multiverse::Multiverse;
use clocklat::planar_lattice::PlanarClock;
use serde_json::{json, Value};
use std::path::PathBuf;

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join("goldens")
}

fn render(mv: &Multiverse) -> String {
    let label = |s: &clocklat::multiverse::State| Value::String(mv.state_label(s));
    let stats = mv.stats();
    let planar = if mv.is_planar() {
        let l = PlanarClock::new(mv).unwrap().lattice();
        match l {
            Ok(l) => l.export_json_value(label),
            Err(e) => json!({ "error": e.to_string() }),
        }
    } else {
        Value::Null
    };
    let gc = GenusClock::new(mv).unwrap();
    let classes: Vec<Value> = gc
        .all_lattices()
        .unwrap()
        .iter()
        .map(|c| json!({ "circulation": c.circulation.values, "lattice": c.states.export_json_value(label) }))
        .collect();
    let doc = json!({
        "stats": stats,
        "states": mv.enumerate_states().len(),
        "planar": planar,
        "spanning_tree": gc.dual.tree,
        "classes": classes,
    });
    serde_json::to_string_pretty(&doc).unwrap() + "\n"
}

#[test]
fn bundled_lattices_match_goldens() {
    let update = std::env::var("CLOCKLAT_UPDATE_GOLDENS").is_ok_and(|v| v == "1");
    let dir = golden_dir();
    let mut stale = Vec::new();
    for (name, mv) in corpus::all() {
        let text = render(&mv);
        assert_eq!(text, render(&mv), "{name}: rendering is not deterministic");
        let path = dir.join(format!("{name}.json"));
        if update {
            std::fs::create_dir_all(&dir).unwrap();
            std::fs::write(&path, &text).unwrap();
        } else if std::fs::read_to_string(&path).ok().as_deref() != Some(text.as_str()) {
            stale.push(name);
        }
    }
    assert!(stale.is_empty(), "goldens differ: {stale:?}");
}

#[test]
fn example_shapes() {
    let load = |n: &str| corpus::load(n).unwrap().unwrap();
    // plane and surface transpositions give different covers on the same states
    for name in ["hasse_example1", "hasse_example2"] {
        let mv = load(name);
        let lp = PlanarClock::new(&mv).unwrap().lattice().unwrap();
        let ls = GenusClock::new(&mv).unwrap().all_lattices().unwrap();
        assert_eq!(ls.len(), 1, "{name}");
        assert_eq!(ls[0].states.elements, lp.elements, "{name}");
        assert_ne!(ls[0].states.covers, lp.covers, "{name}");
    }
    assert!(load("hasse_example2").is_string_universe());
    let torus = GenusClock::new(&load("torus")).unwrap().all_lattices().unwrap();
    assert!(torus.len() > 1);
    let right = load("multiverse_right");
    let s = right.stats();
    assert_eq!((s.n, s.v_int, s.f, s.star_count), (5, 9, 15, 6));
    assert!(right.graph_components().len() > 1);
    assert!(right.detect_dead_components().is_empty());
}
