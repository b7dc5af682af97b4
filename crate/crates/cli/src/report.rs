//! JSON-lines report writer. Records carry no timestamps or other
//! run-varying fields, so a re-run with the same configuration and seed is
//! byte-identical.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use anyhow::{Context, Result};
use serde_json::Value;

pub struct Reporter {
    out: Option<BufWriter<File>>,
    records: Vec<Value>,
}

impl Reporter {
    pub fn new(out: Option<PathBuf>) -> Result<Self> {
        let out = match out {
            Some(path) => {
                let file = File::create(&path)
                    .with_context(|| format!("creating report file {}", path.display()))?;
                Some(BufWriter::new(file))
            }
            None => None,
        };
        Ok(Reporter {
            out,
            records: Vec::new(),
        })
    }

    pub fn record(&mut self, value: Value) -> Result<()> {
        let line = serde_json::to_string(&value)?;
        match &mut self.out {
            Some(w) => writeln!(w, "{line}")?,
            None => println!("{line}"),
        }
        self.records.push(value);
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        if let Some(w) = &mut self.out {
            w.flush()?;
        }
        Ok(())
    }
}
