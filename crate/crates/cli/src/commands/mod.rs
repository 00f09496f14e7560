use std::io::Write;
use std::path::PathBuf;

use crate::error::{CliError, CliResult};
use crate::output::{Meta, Output};

pub mod basis;
pub mod bh;
pub mod ot;
pub mod rotor;
pub mod spin;

/// Where a command writes: the output directory (opened lazily, once the
/// parameters have been validated) and a text sink for the summary.
pub struct Env<'a> {
    pub out_dir: PathBuf,
    pub output: Option<Output>,
    pub stdout: &'a mut (dyn Write + Send),
    pub command: &'static str,
}

impl Env<'_> {
    pub fn open(&mut self, mut meta: Meta) -> CliResult<&mut Output> {
        let mut header: Meta = vec![
            ("physdist".into(), env!("CARGO_PKG_VERSION").into()),
            ("command".into(), self.command.into()),
        ];
        header.append(&mut meta);
        Ok(self.output.insert(Output::new(&self.out_dir, header)?))
    }

    pub fn say(&mut self, line: impl AsRef<str>) -> CliResult<()> {
        writeln!(self.stdout, "{}", line.as_ref()).map_err(|e| CliError::io("<stdout>", e))
    }
}

pub fn kv(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

/// Column names for a scan grid: row index, column index, row coordinate, column coordinate.
pub struct ScanAxes {
    pub row_index: &'static str,
    pub col_index: &'static str,
    pub row_coord: &'static str,
    pub col_coord: &'static str,
}

/// `<stem>.csv` with one row per grid point and `<stem>.pgm`.
pub fn write_scan(
    out: &mut Output,
    stem: &str,
    scan: &physdist_core::chaos::ChaosScanResult,
    axes: &ScanAxes,
    log: bool,
) -> CliResult<()> {
    use crate::output::{fmt_num, fmt_opt};
    let mut rows = Vec::with_capacity(scan.rows * scan.cols);
    for r in 0..scan.rows {
        for c in 0..scan.cols {
            rows.push(vec![
                r.to_string(),
                c.to_string(),
                fmt_num(scan.row_coords[r]),
                fmt_num(scan.col_coords[c]),
                fmt_opt(scan.get(r, c)),
            ]);
        }
    }
    let mut meta = scan.metadata.clone();
    meta.push(kv("median", fmt_opt(scan.median())));
    meta.push(kv("missing", scan.missing()));
    out.csv(
        &format!("{stem}.csv"),
        &meta,
        &[
            axes.row_index,
            axes.col_index,
            axes.row_coord,
            axes.col_coord,
            "upsilon",
        ],
        &rows,
    )?;
    out.pgm(
        &format!("{stem}.pgm"),
        scan.rows,
        scan.cols,
        &scan.values,
        log,
    )?;
    Ok(())
}
