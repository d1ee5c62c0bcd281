//! Writes the default synthetic series to fixtures/synthetic.csv at the
//! workspace root. The committed fixture must stay byte-identical to the
//! generator output; a test guards against drift.

use std::fmt::Write as _;
use std::path::Path;

use diffcast::synth::{generate, SynthConfig};

fn main() {
    let series = generate(&SynthConfig::default()).expect("default config is valid");
    let labels = series.labels().expect("synthetic series is labelled");
    let mut out = String::from("date,value\n");
    for (label, value) in labels.iter().zip(series.values()) {
        // `{}` prints the shortest decimal that round-trips to the same f64,
        // so parsing the fixture reproduces the generator bit for bit.
        writeln!(out, "{label},{value}").unwrap();
    }
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let dir = root.join("fixtures");
    std::fs::create_dir_all(&dir).expect("create fixtures dir");
    let path = dir.join("synthetic.csv");
    std::fs::write(&path, out).expect("write fixture");
    println!("wrote {}", path.display());
}
