use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Everything a subcommand prints, in all three formats.
pub struct Report {
    pub text: String,
    pub json: Value,
    /// Header first.
    pub csv: Vec<Vec<String>>,
    /// False when a check or verdict failed.
    pub ok: bool,
}

impl Report {
    pub fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Text => out.write_all(self.text.as_bytes()),
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.json)?;
                writeln!(out)
            }
            Format::Csv => {
                let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
                for row in &self.csv {
                    w.write_record(row)?;
                }
                w.flush()
            }
        }
    }
}
