use std::fs;
use std::io::Write;
use std::path::Path;

use crate::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// 12 significant digits, scientific notation; `inf`/`nan` spelled out.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// A CSV file with a `# ...` description line, a header and a leading `schema_version` column.
pub struct Table {
    description: String,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(description: &str, columns: &[&str]) -> Self {
        Self {
            description: description.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        writeln!(buf, "# {}; columns: schema_version,{}", self.description, self.columns.join(","))?;
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            let mut header = vec!["schema_version".to_string()];
            header.extend(self.columns.iter().cloned());
            w.write_record(&header).map_err(std::io::Error::other)?;
            for r in &self.rows {
                let mut rec = vec![SCHEMA_VERSION.to_string()];
                rec.extend(r.iter().cloned());
                w.write_record(&rec).map_err(std::io::Error::other)?;
            }
            w.flush()?;
        }
        Ok(buf)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, &self.to_bytes()?)
    }
}

/// Write through a sibling temporary file and rename it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension(format!(
        "{}.tmp{}",
        path.extension().and_then(|e| e.to_str()).unwrap_or(""),
        std::process::id()
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}
