//! Example files shipped with the crate.

pub const FILES: &[(&str, &str)] = &[
    ("appendix_example.json", include_str!("../data/appendix_example.json")),
    ("appendix_physical.json", include_str!("../data/appendix_physical.json")),
    ("helium.json", include_str!("../data/helium.json")),
    ("two_atoms.json", include_str!("../data/two_atoms.json")),
    ("hydra.json", include_str!("../data/hydra.json")),
    ("atom.json", include_str!("../data/atom.json")),
    ("hsh_benchmark.json", include_str!("../data/hsh_benchmark.json")),
];

pub fn get(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}
