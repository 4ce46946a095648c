//! CSV formats read and written by the commands.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use tunnel_chrono::junction::{GapPoint, IvPoint};
use tunnel_chrono::partialwave3d::DosComparison;
use tunnel_chrono::times1d::{HartmanRow, TimeSuite};

use crate::error::CliError;

pub const SWEEP_HEADER: &str =
    "energy_ev,tau_phase_fs,tau_dwell_fs,tau_interference_fs,tau_bl_fs,tau_pm_fs,tau_larmor_fs";
pub const HARTMAN_HEADER: &str = "width_angstrom,tau_phase_fs,tau_dwell_fs,tau_phase_s,tau_dwell_s";
pub const IV_HEADER: &str = "voltage_v,current_density_a_per_cm2,temperature_k";
pub const GAP_HEADER: &str = "temperature_k,gap_ev";
pub const IV_PARAMS_HEADER: &str =
    "temperature_k,s_angstrom,phi0_ev,s_stderr_angstrom,phi0_stderr_ev,residual,converged";
pub const BU_HEADER: &str = "energy_ev,smooth_states_per_ev,counted_states_per_ev,relative_gap";

/// Twelve significant digits, scientific notation.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

fn row(values: &[f64]) -> String {
    values.iter().map(|&v| num(v)).collect::<Vec<_>>().join(",")
}

pub fn sweep_csv(rows: &[TimeSuite]) -> String {
    let mut out = format!("{SWEEP_HEADER}\n");
    for s in rows {
        let values =
            [s.energy, s.tau_phase, s.tau_dwell, s.tau_interference, s.tau_bl, s.tau_pm, s.tau_larmor_y];
        writeln!(out, "{}", row(&values)).unwrap();
    }
    out
}

pub fn hartman_csv(rows: &[HartmanRow]) -> String {
    let mut out = format!("{HARTMAN_HEADER}\n");
    for r in rows {
        let fs = tunnel_chrono::units::FS_PER_S;
        writeln!(out, "{}", row(&[r.width, r.tau_phase, r.tau_dwell, r.tau_phase / fs, r.tau_dwell / fs]))
            .unwrap();
    }
    out
}

pub fn iv_csv(points: &[IvPoint], comment: &str) -> String {
    let mut out = String::new();
    if !comment.is_empty() {
        writeln!(out, "# {comment}").unwrap();
    }
    writeln!(out, "{IV_HEADER}").unwrap();
    for p in points {
        writeln!(out, "{}", row(&[p.voltage, p.current_density, p.temperature])).unwrap();
    }
    out
}

pub fn gap_csv(points: &[GapPoint]) -> String {
    let mut out = format!("{GAP_HEADER}\n");
    for p in points {
        writeln!(out, "{}", row(&[p.temperature, p.gap])).unwrap();
    }
    out
}

pub fn bu_csv(rows: &[DosComparison]) -> String {
    let mut out = format!("{BU_HEADER}\n");
    for c in rows {
        writeln!(out, "{}", row(&[c.energy, c.smooth_side, c.counted_side, c.relative_gap()])).unwrap();
    }
    out
}

/// Rows of a numeric CSV with the given header. Blank lines and lines
/// starting with `#` are skipped; errors carry 1-based line numbers.
pub fn parse_numeric(text: &str, header: &str, path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let err = |line: u64, message: String| CliError::Parse {
        path: path.to_path_buf(),
        line: line as usize,
        message,
    };
    // physical line from the byte offset, stepping over the blank and
    // comment lines a record position may start on
    let physical = |pos: &csv::Position| {
        let mut line = text[..pos.byte() as usize].matches('\n').count() as u64 + 1;
        for raw in text[pos.byte() as usize..].lines() {
            let trimmed = raw.trim();
            if !(trimmed.is_empty() || trimmed.starts_with('#')) {
                break;
            }
            line += 1;
        }
        line
    };
    let line_of = |e: &csv::Error| e.position().map_or(1, physical);
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(text.as_bytes());
    let found = reader.headers().map_err(|e| err(line_of(&e), e.to_string()))?.clone();
    let header_line = reader.headers().ok().and_then(|h| h.position().map(physical)).unwrap_or(1);
    if found.is_empty() {
        return Err(err(1, format!("missing header `{header}`")));
    }
    if found.iter().collect::<Vec<_>>().join(",") != header {
        return Err(err(
            header_line,
            format!("expected header `{header}`, found `{}`", found.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let message = match e.kind() {
                csv::ErrorKind::UnequalLengths { len, expected_len, .. } => {
                    format!("expected {expected_len} fields, found {len}")
                }
                _ => e.to_string(),
            };
            err(line_of(&e), message)
        })?;
        let line = record.position().map_or(0, physical);
        let values = record
            .iter()
            .map(|f| match f.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(err(line, format!("`{f}` is not a finite number"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(values);
    }
    Ok(rows)
}

pub fn parse_iv(text: &str, path: &Path) -> Result<Vec<IvPoint>, CliError> {
    Ok(parse_numeric(text, IV_HEADER, path)?
        .into_iter()
        .map(|r| IvPoint { voltage: r[0], current_density: r[1], temperature: r[2] })
        .collect())
}

pub fn parse_gap(text: &str, path: &Path) -> Result<Vec<GapPoint>, CliError> {
    Ok(parse_numeric(text, GAP_HEADER, path)?
        .into_iter()
        .map(|r| GapPoint { temperature: r[0], gap: r[1] })
        .collect())
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: path.to_path_buf(), source };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(num(0.36574), "3.65740000000e-1");
        assert_eq!(num(1.0 / 3.0).parse::<f64>().unwrap(), 3.33333333333e-1);
    }

    #[test]
    fn line_numbers_in_errors() {
        let text =
            "# comment\nvoltage_v,current_density_a_per_cm2,temperature_k\n0.1,1e-5,300\n\n0.2,abc,300\n";
        match parse_iv(text, Path::new("iv.csv")) {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("{other:?}"),
        }
        let text = "temperature_k,gap_ev\n3.5,1.8,9\n";
        assert!(matches!(parse_gap(text, Path::new("g.csv")), Err(CliError::Parse { line: 2, .. })));
        assert!(matches!(parse_gap("t,g\n", Path::new("g.csv")), Err(CliError::Parse { line: 1, .. })));
        assert!(matches!(parse_gap("", Path::new("g.csv")), Err(CliError::Parse { line: 1, .. })));
    }

    #[test]
    fn round_trip() {
        let points = vec![
            IvPoint { voltage: 0.1, current_density: 1.23456789012e-5, temperature: 300.0 },
            IvPoint { voltage: 0.2, current_density: -2.5e-4, temperature: 3.5 },
        ];
        let text = iv_csv(&points, "label");
        assert_eq!(parse_iv(&text, Path::new("x")).unwrap(), points);
        let gaps = vec![GapPoint { temperature: 3.5, gap: 0.25 }, GapPoint { temperature: 300.0, gap: 0.21 }];
        assert_eq!(parse_gap(&gap_csv(&gaps), Path::new("x")).unwrap(), gaps);
    }
}
