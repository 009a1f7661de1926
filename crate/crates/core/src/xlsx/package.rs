use std::collections::HashSet;
use std::io::{Cursor, Write};
use std::path::Path;

use zip::write::SimpleFileOptions;
use zip::{CompressionMethod, DateTime, ZipWriter};

use super::EmitError;

/// Zips `parts` in the given order with fixed timestamps, so equal inputs
/// give equal bytes.
pub fn package_bytes(parts: &[(String, Vec<u8>)]) -> Result<Vec<u8>, EmitError> {
    if parts.is_empty() {
        return Err(EmitError::EmptyPackage);
    }
    let mut seen = HashSet::new();
    for (path, _) in parts {
        if !seen.insert(path.as_str()) {
            return Err(EmitError::DuplicatePart(path.clone()));
        }
    }
    let options = SimpleFileOptions::default()
        .compression_method(CompressionMethod::Deflated)
        .last_modified_time(DateTime::default())
        .unix_permissions(0o644);
    let mut zip = ZipWriter::new(Cursor::new(Vec::new()));
    for (path, bytes) in parts {
        zip.start_file(path.as_str(), options)?;
        zip.write_all(bytes)?;
    }
    Ok(zip.finish()?.into_inner())
}

/// [`package_bytes`], written to `destination`.
pub fn package_zip(parts: &[(String, Vec<u8>)], destination: &Path) -> Result<(), EmitError> {
    let bytes = package_bytes(parts)?;
    std::fs::write(destination, bytes)?;
    Ok(())
}
