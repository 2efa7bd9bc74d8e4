//! Table, CSV and JSON-lines emitters for flat rows.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Jsonl,
}

/// A row that can be laid out as named text columns.
pub trait Row: Serialize {
    fn header() -> &'static [&'static str];
    fn cells(&self) -> Vec<String>;
}

pub fn sink(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn emit<R: Row>(rows: &[R], format: Format, w: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Table => table(R::header(), rows.iter().map(Row::cells).collect(), w),
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record(R::header())?;
            for row in rows {
                csv.write_record(row.cells())?;
            }
            csv.flush()
        }
        Format::Jsonl => {
            for row in rows {
                serde_json::to_writer(&mut *w, row)?;
                writeln!(w)?;
            }
            Ok(())
        }
    }
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: Vec<Vec<String>>, w: &mut dyn Write) -> io::Result<()> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in &rows {
        for (width, cell) in widths.iter_mut().zip(row) {
            *width = (*width).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>, w: &mut dyn Write| -> io::Result<()> {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &n)| format!("{c:<n$}")).collect();
        writeln!(w, "{}", padded.join("  ").trim_end())
    };
    line(header.to_vec(), w)?;
    for row in &rows {
        line(row.iter().map(String::as_str).collect(), w)?;
    }
    Ok(())
}

pub fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(T::to_string).unwrap_or_default()
}
