//! The bundled example multiverses, frozen as JSON files under `corpus/`.

use crate::multiverse::{Multiverse, MultiverseError};

/// Name and file text of every bundled example, in a fixed order.
pub const FILES: &[(&str, &str)] = &[
    ("trefoil", include_str!("../corpus/trefoil.json")),
    ("multiverse_left", include_str!("../corpus/multiverse_left.json")),
    ("multiverse_right", include_str!("../corpus/multiverse_right.json")),
    ("hasse_example1", include_str!("../corpus/hasse_example1.json")),
    ("hasse_example2", include_str!("../corpus/hasse_example2.json")),
    ("torus", include_str!("../corpus/torus.json")),
    (
        "framing_counterexample",
        include_str!("../corpus/framing_counterexample.json"),
    ),
];

/// Parses one bundled example by name.
pub fn load(name: &str) -> Option<Result<Multiverse, MultiverseError>> {
    FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| Multiverse::from_json(text))
}

/// Every bundled example, parsed.
pub fn all() -> Vec<(&'static str, Multiverse)> {
    FILES
        .iter()
        .map(|(n, text)| (*n, Multiverse::from_json(text).expect("bundled example is valid")))
        .collect()
}

/// Bundled examples on planar surfaces.
pub fn planar() -> Vec<(&'static str, Multiverse)> {
    all().into_iter().filter(|(_, mv)| mv.is_planar()).collect()
}
