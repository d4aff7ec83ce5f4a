//! CSV and report emission. Dialect: comma separator, '.' decimal,
//! scientific notation with 17 significant digits, '#'-prefixed header
//! comments carrying the resolved configuration.

use anyhow::{Context, Result};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub struct OutputDir {
    dir: PathBuf,
    header: String,
}

impl OutputDir {
    pub fn new(dir: &Path, resolved_config: &str) -> Result<Self> {
        fs::create_dir_all(dir)
            .with_context(|| format!("cannot create output dir {}", dir.display()))?;
        let mut header = String::new();
        for line in resolved_config.lines() {
            header.push_str("# ");
            header.push_str(line);
            header.push('\n');
        }
        Ok(OutputDir {
            dir: dir.to_path_buf(),
            header,
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// Write a text file prefixed by the provenance header.
    pub fn write(&self, name: &str, body: &str) -> Result<PathBuf> {
        let path = self.path(name);
        let mut f = fs::File::create(&path)
            .with_context(|| format!("cannot create {}", path.display()))?;
        f.write_all(self.header.as_bytes())?;
        f.write_all(body.as_bytes())?;
        Ok(path)
    }
}

/// One float in the canonical 17-significant-digit scientific form.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV row from float cells.
pub fn row(cells: &[f64]) -> String {
    let mut s = cells
        .iter()
        .map(|&c| fmt(c))
        .collect::<Vec<_>>()
        .join(",");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_roundtrip_is_lossless() {
        for &x in &[
            1.0,
            -3.7e-11,
            0.001474584300192241,
            std::f64::consts::PI,
            1.6e308,
        ] {
            let s = fmt(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s}");
        }
    }
}
