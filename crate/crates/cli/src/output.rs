//! Output files: CSV tables with `#` metadata, PGM heatmaps and the run manifest.
//!
//! Everything numeric goes through [`fmt_num`] so repeated runs are byte-identical.
//! Wall-clock time only appears in the manifest.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use crate::error::{CliError, CliResult};

pub const SIG_DIGITS: usize = 12;
pub const MISSING: &str = "NA";
pub const MANIFEST: &str = "run_manifest.txt";

/// `%.12g`-style formatting: shortest of fixed and scientific notation with
/// 12 significant digits and trailing zeros removed.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return MISSING.into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa.to_string()),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| MISSING.into(), fmt_num)
}

pub type Meta = Vec<(String, String)>;

/// Writes into one output directory and remembers what it wrote.
#[derive(Debug)]
pub struct Output {
    dir: PathBuf,
    header: Meta,
    written: Vec<String>,
}

impl Output {
    pub fn new(dir: &Path, header: Meta) -> CliResult<Self> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            header,
            written: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }

    fn comment_block(&self, extra: &[(String, String)], out: &mut String) {
        for (k, v) in self.header.iter().chain(extra) {
            out.push_str(&format!("# {k}: {v}\n"));
        }
    }

    pub fn csv(
        &mut self,
        name: &str,
        extra: &[(String, String)],
        columns: &[&str],
        rows: &[Vec<String>],
    ) -> CliResult<PathBuf> {
        let mut text = String::new();
        self.comment_block(extra, &mut text);
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(text.into_bytes());
        let path = self.dir.join(name);
        let csv_err = |e: csv::Error| CliError::parse(&path, e.to_string());
        w.write_record(columns).map_err(csv_err)?;
        for r in rows {
            w.write_record(r).map_err(csv_err)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::parse(&path, e.to_string()))?;
        self.write(name, &bytes)
    }

    /// Grayscale `P2` heatmap of a row-major grid; the last row is drawn on top.
    ///
    /// Present values map linearly onto `1..=255` (after `log10` when `log` is
    /// set); missing or, under `log`, non-positive values are drawn as `0`.
    pub fn pgm(
        &mut self,
        name: &str,
        rows: usize,
        cols: usize,
        values: &[Option<f64>],
        log: bool,
    ) -> CliResult<PathBuf> {
        let shown: Vec<Option<f64>> = values
            .iter()
            .map(|v| match (*v, log) {
                (Some(x), true) if x > 0.0 => Some(x.log10()),
                (_, true) => None,
                (v, false) => v,
            })
            .collect();
        let lo = shown
            .iter()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let hi = shown
            .iter()
            .flatten()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let level = |v: Option<f64>| -> u8 {
            match v {
                None => 0,
                Some(_) if hi <= lo => 128,
                Some(x) => (1.0 + 254.0 * (x - lo) / (hi - lo)).round() as u8,
            }
        };
        let mut text = String::from("P2\n");
        self.comment_block(&[], &mut text);
        let (lo_s, hi_s) = if lo.is_finite() {
            (fmt_num(lo), fmt_num(hi))
        } else {
            (MISSING.into(), MISSING.into())
        };
        text.push_str(&format!(
            "# scale: {} min={lo_s} max={hi_s} -> 1..255, missing -> 0\n",
            if log { "log10" } else { "linear" }
        ));
        text.push_str(&format!("{cols} {rows}\n255\n"));
        for r in (0..rows).rev() {
            let line: Vec<String> = (0..cols)
                .map(|c| level(shown[r * cols + c]).to_string())
                .collect();
            text.push_str(&line.join(" "));
            text.push('\n');
        }
        self.write(name, text.as_bytes())
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> CliResult<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        self.written.push(name.to_string());
        Ok(path)
    }

    pub fn manifest(&self, argv: &[String], threads: usize, wall: Duration) -> CliResult<PathBuf> {
        let mut text = String::from("# physdist run manifest\n");
        for (k, v) in &self.header {
            text.push_str(&format!("{k}: {v}\n"));
        }
        text.push_str(&format!("argv: {}\n", argv.join(" ")));
        text.push_str(&format!("threads: {threads}\n"));
        text.push_str(&format!("wall_time_s: {:.3}\n", wall.as_secs_f64()));
        text.push_str("files:\n");
        for f in &self.written {
            text.push_str(&format!("  {f}\n"));
        }
        let path = self.dir.join(MANIFEST);
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }
}
