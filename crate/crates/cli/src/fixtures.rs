//! The worked chain files, embedded at build time or read from a directory.

use std::fs;
use std::path::Path;

pub const NAMES: [&str; 5] = ["a_chain", "b_chain", "c_chain", "bz_chain", "cz_chain"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixtures {
    pub a: String,
    pub b: String,
    pub c: String,
    pub bz: String,
    pub cz: String,
}

impl Fixtures {
    pub fn embedded() -> Self {
        Fixtures {
            a: include_str!("../fixtures/a_chain.txt").into(),
            b: include_str!("../fixtures/b_chain.txt").into(),
            c: include_str!("../fixtures/c_chain.txt").into(),
            bz: include_str!("../fixtures/bz_chain.txt").into(),
            cz: include_str!("../fixtures/cz_chain.txt").into(),
        }
    }

    /// Reads `<name>.txt` for every fixture name; the error names the first
    /// missing or unreadable file.
    pub fn from_dir(dir: &Path) -> Result<Self, String> {
        let read = |name: &str| {
            let path = dir.join(format!("{name}.txt"));
            fs::read_to_string(&path).map_err(|e| format!("cannot read fixture {}: {e}", path.display()))
        };
        Ok(Fixtures {
            a: read(NAMES[0])?,
            b: read(NAMES[1])?,
            c: read(NAMES[2])?,
            bz: read(NAMES[3])?,
            cz: read(NAMES[4])?,
        })
    }
}
