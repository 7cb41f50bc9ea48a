use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use crate::commands::Output;
use crate::Format;

/// Directory used for reports when `--output` is absent.
pub const OUTPUT_DIR_ENV: &str = "AR_BRAID_OUTPUT_DIR";

fn render(out: &Output, format: Format) -> Result<Vec<u8>> {
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&out.json)?;
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &out.rows {
                w.serialize(row)?;
            }
            if out.rows.is_empty() {
                w.write_record(["c", "beta", "check", "value", "passed"])?;
            }
            w.into_inner().context("flushing csv")?
        }
        Format::Text => out.text.clone().into_bytes(),
    })
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Text => "txt",
    }
}

pub fn emit(command: &str, out: &Output, format: Format, path: Option<&Path>) -> Result<()> {
    let bytes = render(out, format)?;
    let target: Option<PathBuf> = match path {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os(OUTPUT_DIR_ENV)
            .filter(|d| !d.is_empty())
            .map(|d| PathBuf::from(d).join(format!("{command}.{}", extension(format)))),
    };
    match target {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            fs::write(&p, &bytes).with_context(|| format!("writing {}", p.display()))?;
            eprintln!("wrote {}", p.display());
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}
