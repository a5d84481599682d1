//! Writing artifacts: all files are staged as temporaries in the target
//! directory and renamed only once every one of them is complete.

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

use crate::commands::Artifact;
use crate::config::Format;

/// Path for a labelled sibling: `dir/ber.csv` + `ofdm_zf` -> `dir/ber_ofdm_zf.csv`.
pub fn sibling(base: &Path, label: &str) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}_{label}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{label}"),
    };
    base.with_file_name(name)
}

pub fn emit(out: Option<&Path>, format: Format, artifacts: &[Artifact]) -> io::Result<()> {
    let Some(base) = out else {
        let mut stdout = io::stdout().lock();
        for (i, a) in artifacts.iter().enumerate() {
            if let Some(label) = &a.label {
                if i > 0 {
                    writeln!(stdout)?;
                }
                // Section marker only when several CSV curves share stdout.
                if format == Format::Csv {
                    writeln!(stdout, "# {label}")?;
                }
            }
            stdout.write_all(a.contents.as_bytes())?;
        }
        return stdout.flush();
    };
    let dir = match base.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut staged = Vec::with_capacity(artifacts.len());
    for a in artifacts {
        let target = match &a.label {
            Some(label) => sibling(base, label),
            None => base.to_path_buf(),
        };
        let mut tmp = NamedTempFile::new_in(&dir)?;
        tmp.write_all(a.contents.as_bytes())?;
        tmp.as_file().sync_all()?;
        staged.push((tmp, target));
    }
    for (tmp, target) in staged {
        tmp.persist(&target).map_err(|e| e.error)?;
    }
    Ok(())
}
