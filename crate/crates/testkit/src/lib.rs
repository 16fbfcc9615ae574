//! Shared helpers for tests: fixture loading, a seeded random canvas
//! generator, and independent reference evaluators.

pub mod acceptance;
pub mod gen;
pub mod listing;
pub mod oracle;

use std::path::PathBuf;

use semsnap_core::model::Canvas;
use semsnap_core::spec_io::parse_canvas_in;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

pub fn fixture_path(name: &str) -> PathBuf {
    fixtures_dir().join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

/// Parses `<name>.canvas.json` from the fixtures directory.
pub fn load_fixture(name: &str) -> Canvas {
    let file = format!("{name}.canvas.json");
    parse_canvas_in(&fixture_text(&file), &fixtures_dir()).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}
