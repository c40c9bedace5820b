use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

use crate::CliError;

/// Writes through a temporary file in the target directory, renamed into
/// place only after `body` succeeds.
pub fn write_atomic<F>(path: &Path, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut BufWriter<&mut File>) -> dpcp_core::Result<()>,
{
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)
        .map_err(|e| CliError::Runtime(format!("cannot create a file in {}: {e}", dir.display())))?;
    {
        let mut w = BufWriter::new(tmp.as_file_mut());
        body(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path).map_err(|e| CliError::Runtime(format!("cannot write {}: {}", path.display(), e.error)))?;
    Ok(())
}

/// Writes to `path` atomically, or to standard output when `path` is `None`.
pub fn write_to<F>(path: Option<&Path>, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> dpcp_core::Result<()>,
{
    match path {
        Some(p) => write_atomic(p, |w| body(w)),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock)?;
            Ok(())
        }
    }
}

pub fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path).map(BufReader::new).map_err(|e| CliError::Runtime(format!("cannot open {}: {e}", path.display())))
}

/// `data.csv` becomes `data.basis.csv`.
pub fn basis_sibling(path: &Path) -> PathBuf {
    path.with_extension("basis.csv")
}
