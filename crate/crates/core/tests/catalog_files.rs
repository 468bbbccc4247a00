use mealy_orbits::{catalog, format};

#[test]
fn shipped_files_match_builders() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    for (name, file) in catalog::SHIPPED {
        let text = std::fs::read_to_string(format!("{dir}/{file}")).unwrap();
        let built = catalog::by_name(name).unwrap();
        assert_eq!(text, format::to_json(&built), "{file} differs from builder {name}");
        assert_eq!(format::parse(&text).unwrap(), built);
    }
}
