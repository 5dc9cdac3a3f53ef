//! Regenerates the canonical example corpus under `corpus/` at the workspace
//! root. The files are committed; rerun this after changing the scenarios or
//! the canonical writer and review the diff.

use std::path::PathBuf;

use fmodel::interchange::serialize;
use fmodel::{scenarios, Store};

fn main() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    std::fs::create_dir_all(&dir).expect("create corpus dir");

    type BuildFn = fn(&mut Store);
    let files: Vec<(&str, BuildFn)> = vec![
        ("power-outage.f.ttl", |s| {
            scenarios::power_outage(s).map(|_| ()).unwrap();
        }),
        ("emergency.f.ttl", |s| {
            scenarios::emergency(s).map(|_| ()).unwrap();
        }),
        ("participation-basic.f.ttl", |s| {
            scenarios::participation_basic(s).map(|_| ()).unwrap();
        }),
        ("composition-constraints.f.ttl", |s| {
            scenarios::composition_constraints(s).map(|_| ()).unwrap();
        }),
        ("causality-chain.f.ttl", |s| {
            scenarios::causality_chain(s).map(|_| ()).unwrap();
        }),
        ("correlation.f.ttl", |s| {
            scenarios::correlation_pair(s).map(|_| ()).unwrap();
        }),
        ("documentation.f.ttl", |s| {
            scenarios::documentation_evidence(s).map(|_| ()).unwrap();
        }),
        ("interpretation-two-views.f.ttl", |s| {
            scenarios::interpretation_two_views(s).map(|_| ()).unwrap();
        }),
        ("mereology-nested.f.ttl", |s| {
            scenarios::mereology_nested(s).map(|_| ()).unwrap();
        }),
        ("spacetime-qualities.f.ttl", |s| {
            scenarios::spacetime_qualities(s).map(|_| ()).unwrap();
        }),
        ("exchange-a.f.ttl", |s| {
            scenarios::exchange_participation(s).map(|_| ()).unwrap();
        }),
        ("exchange-b.f.ttl", |s| {
            scenarios::exchange_documentation(s).map(|_| ()).unwrap();
        }),
    ];

    for (name, build) in files {
        let mut store = Store::new();
        build(&mut store);
        let text = serialize(&store.snapshot());
        let path = dir.join(name);
        std::fs::write(&path, text).expect("write corpus file");
        println!("wrote {}", path.display());
    }
}
