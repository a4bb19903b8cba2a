//! The bundled prelude.

use std::path::PathBuf;

pub const PRELUDE: &str = include_str!("prelude.syn");

/// Environment variable naming a file that replaces the bundled prelude.
pub const PRELUDE_ENV: &str = "HOLEFORGE_PRELUDE";

/// Prelude source and the name used in diagnostics.
pub fn prelude_source() -> std::io::Result<(String, String)> {
    match std::env::var_os(PRELUDE_ENV) {
        Some(path) => {
            let path = PathBuf::from(path);
            let src = std::fs::read_to_string(&path)?;
            Ok((path.display().to_string(), src))
        }
        None => Ok(("<prelude>".to_string(), PRELUDE.to_string())),
    }
}
