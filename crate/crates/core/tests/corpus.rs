mod common;

use holeforge::bench::corpus_files;
use holeforge::driver::{fill_source, FillConfig};
use holeforge::program::Program;

/// Each corpus file's canonical listing matches its `.expected` sidecar.
/// Set `HOLEFORGE_BLESS=1` to rewrite the sidecars instead.
#[test]
fn corpus_matches_sidecars() {
    let bless = std::env::var_os("HOLEFORGE_BLESS").is_some();
    let files = corpus_files(&common::corpus_dir()).unwrap();
    assert!(files.len() >= 7);
    for path in files {
        let src = std::fs::read_to_string(&path).unwrap();
        let report = fill_source(&Program::empty(), &src, &FillConfig::default()).unwrap_or_else(|d| panic!("{}: {d}", path.display()));
        let mut got = report.canonical_lines().join("\n");
        got.push('\n');
        let sidecar = path.with_extension("expected");
        if bless {
            std::fs::write(&sidecar, &got).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&sidecar).unwrap_or_else(|e| panic!("{}: {e}", sidecar.display()));
        assert_eq!(got, want, "{}", path.display());
    }
}
