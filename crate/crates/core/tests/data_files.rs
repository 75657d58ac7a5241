//! The sample inputs under `data/` are serializations of the built-in
//! fixtures. Run with `HYPERPATH_BLESS=1` to rewrite them.

use std::fmt::Write;
use std::path::PathBuf;

use hyperpath::fixtures::{flux_demo, flux_demo_shared_core, glyoxal_network, glyoxal_query, uniform_barriers};
use hyperpath::kinetics::{load_barriers, BarrierTable};
use hyperpath::netcore::{from_json, to_json, Hypergraph};
use hyperpath::pathopt::PathwayQuery;

fn barrier_csv(table: &BarrierTable) -> String {
    let mut out = String::from("edge_id,barrier_kj_per_mol\n");
    for (e, g) in table.iter() {
        writeln!(out, "{},{}", e.0, g / 1000.0).unwrap();
    }
    out
}

fn check(dir: &str, h: &Hypergraph, q: &PathwayQuery) {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(dir);
    let barriers = uniform_barriers(h, 50.0);
    let mut query = q.to_json();
    query.push('\n');
    let files = [
        ("network.json", to_json(h)),
        ("barriers.csv", barrier_csv(&barriers)),
        ("query.json", query),
    ];
    if std::env::var_os("HYPERPATH_BLESS").is_some() {
        std::fs::create_dir_all(&root).unwrap();
        for (name, text) in &files {
            std::fs::write(root.join(name), text).unwrap();
        }
    }
    for (name, text) in &files {
        let on_disk = std::fs::read_to_string(root.join(name)).unwrap();
        assert_eq!(&on_disk, text, "{dir}/{name} is stale");
    }
    let h2 = from_json(&files[0].1).unwrap();
    assert_eq!(load_barriers(&files[1].1, &h2).unwrap(), barriers);
    assert_eq!(&PathwayQuery::from_json(&files[2].1).unwrap(), q);
}

#[test]
fn glyoxal_files() {
    let g = glyoxal_network();
    check("glyoxal", &g.network, &glyoxal_query());
}

#[test]
fn flux_demo_files() {
    let (h, q) = flux_demo();
    check("flux-demo", &h, &q);
    let (h, q) = flux_demo_shared_core();
    check("flux-demo-shared", &h, &q);
}
