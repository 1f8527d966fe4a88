//! Scenarios bundled into the binary.

use crate::scenario::Scenario;

const FILES: [(&str, &str); 5] = [
    ("double_s3_z3", include_str!("../corpus/double_s3_z3.json")),
    ("double_z4_z2", include_str!("../corpus/double_z4_z2.json")),
    ("double_d4_center", include_str!("../corpus/double_d4_center.json")),
    ("hnn_klein", include_str!("../corpus/hnn_klein.json")),
    ("mixed_z4_klein", include_str!("../corpus/mixed_z4_klein.json")),
];

pub fn names() -> Vec<&'static str> {
    FILES.iter().map(|(n, _)| *n).collect()
}

pub fn get(name: &str) -> Option<Scenario> {
    FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, src)| serde_json::from_str(src).expect("bundled scenario parses"))
}

pub fn all() -> Vec<Scenario> {
    FILES
        .iter()
        .map(|(_, src)| serde_json::from_str(src).expect("bundled scenario parses"))
        .collect()
}
