pub fn fixture(name: &str) -> ptolemy::ManifoldDoc {
    let path = format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    ptolemy::ManifoldDoc::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}
