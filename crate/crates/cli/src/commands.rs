//! Command execution.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use tunnel_chrono::junction::{
    extract_dwell, fit_gap, fit_iv_by_temperature, synth_iv, GapDataset, GapModelParams, IVDataset,
    JunctionError, JunctionModel,
};
use tunnel_chrono::numerics::{FitResult, NumericsError};
use tunnel_chrono::partialwave3d::{
    beth_uhlenbeck_check, counting_window, PartialWaveError, SphericalWell, DEFAULT_WINDOW_STATES,
};
use tunnel_chrono::potential::PotentialProfile;
use tunnel_chrono::times1d::{hartman_sweep, time_sweep};
use tunnel_chrono::units::FS_PER_S;

use crate::args::{Command, RunConfig};
use crate::error::CliError;
use crate::quantity::{parse_barrier, parse_count, parse_scalar, parse_seed, Kind};
use crate::table;

struct Params<'a>(&'a RunConfig);

impl Params<'_> {
    fn raw(&self, key: &str) -> Result<&str, CliError> {
        self.0.get(key).ok_or_else(|| CliError::MissingFlags(vec![key.to_string()]))
    }

    fn scalar(&self, key: &str, kind: Kind) -> Result<f64, CliError> {
        parse_scalar(key, self.raw(key)?, kind)
    }

    fn optional(&self, key: &str, kind: Kind) -> Result<Option<f64>, CliError> {
        self.0.get(key).map(|v| parse_scalar(key, v, kind)).transpose()
    }

    fn count(&self, key: &str) -> Result<usize, CliError> {
        parse_count(key, self.raw(key)?)
    }
}

fn numerical(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

fn junction_error(e: JunctionError) -> CliError {
    match e {
        JunctionError::Fit(_) | JunctionError::Time(_) => numerical(e),
        other => CliError::Validation(other.to_string()),
    }
}

fn partial_wave_error(e: PartialWaveError) -> CliError {
    match e {
        PartialWaveError::Numerics(_) | PartialWaveError::PhaseUnwrap { .. } => numerical(e),
        other => CliError::Validation(other.to_string()),
    }
}

fn grid(lo: f64, hi: f64, n: usize, what: &str) -> Result<Vec<f64>, CliError> {
    if n == 0 {
        return Err(CliError::Validation(format!("{what}: need at least one point")));
    }
    if n > 1 && hi.partial_cmp(&lo) != Some(std::cmp::Ordering::Greater) {
        return Err(CliError::Validation(format!("{what}: upper bound {hi} must exceed lower bound {lo}")));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

/// Executes a parsed command and returns the summary line.
pub fn execute(config: &RunConfig) -> Result<String, CliError> {
    let p = Params(config);
    let out = &config.output_path;
    match config.command {
        Command::Times => times(&p, out),
        Command::Hartman => hartman(&p, out),
        Command::SynthIv => synth(&p, out),
        Command::FitIv => fit_iv_command(&p, config.input_path.as_deref().expect("required"), out),
        Command::ExtractDwell => dwell(&p, out),
        Command::FitGap => fit_gap_command(&p, config.input_path.as_deref().expect("required"), out),
        Command::BuCheck => bu_check(&p, out),
    }
}

fn times(p: &Params, out: &Path) -> Result<String, CliError> {
    let profile = match (p.0.get("barrier"), p.0.get("profile")) {
        (Some(text), None) => parse_barrier("barrier", text)?,
        (None, Some(path)) => {
            let path = PathBuf::from(path);
            table::read_text(&path)?.parse::<PotentialProfile>().map_err(|e| CliError::Parse {
                path: path.clone(),
                line: match e {
                    tunnel_chrono::potential::PotentialError::Parse { line, .. } => line,
                    _ => 0,
                },
                message: e.to_string(),
            })?
        }
        _ => return Err(CliError::Validation("give exactly one of --barrier or --profile".into())),
    };
    let energies =
        grid(p.scalar("emin", Kind::Energy)?, p.scalar("emax", Kind::Energy)?, p.count("n")?, "energy grid")?;
    if energies[0] <= 0.0 {
        return Err(CliError::Validation("energies must be positive".into()));
    }
    let rows = time_sweep(&profile, &energies).map_err(numerical)?;
    table::write_atomic(out, &table::sweep_csv(&rows))?;
    Ok(format!("times: wrote {} rows to {}", rows.len(), out.display()))
}

fn hartman(p: &Params, out: &Path) -> Result<String, CliError> {
    let v0 = p.scalar("height", Kind::Energy)?;
    let energy = p.scalar("energy", Kind::Energy)?;
    let widths =
        grid(p.scalar("wmin", Kind::Length)?, p.scalar("wmax", Kind::Length)?, p.count("n")?, "width grid")?;
    let rows = hartman_sweep(v0, energy, &widths).map_err(|e| match e {
        tunnel_chrono::times1d::TimeError::InvalidArgument(m) => CliError::Validation(m),
        other => numerical(other),
    })?;
    table::write_atomic(out, &table::hartman_csv(&rows))?;
    let last = rows.last().expect("non-empty grid");
    Ok(format!(
        "hartman: wrote {} rows to {}; phase time at {} A: {} fs ({} s)",
        rows.len(),
        out.display(),
        table::num(last.width),
        table::num(last.tau_phase),
        table::num(last.tau_phase / FS_PER_S)
    ))
}

fn synth(p: &Params, out: &Path) -> Result<String, CliError> {
    let model = JunctionModel::new(
        p.scalar("width", Kind::Length)?,
        p.scalar("phi0", Kind::Energy)?,
        p.scalar("temperature", Kind::Temperature)?,
    )
    .map_err(junction_error)?;
    let voltages =
        grid(p.scalar("vmin", Kind::Voltage)?, p.scalar("vmax", Kind::Voltage)?, p.count("n")?, "bias grid")?;
    let noise = p.scalar("noise", Kind::Number)?;
    let seed = parse_seed("seed", p.raw("seed")?)?;
    let data = synth_iv(&model, &voltages, noise, seed).map_err(junction_error)?;
    table::write_atomic(out, &table::iv_csv(data.points(), data.source_label()))?;
    Ok(format!("synth-iv: wrote {} points to {}", data.points().len(), out.display()))
}

fn fit_block(out: &mut String, temperature: f64, params: &[f64], fit: &FitResult, converged: bool) {
    writeln!(out, "temperature_k={}", table::num(temperature)).unwrap();
    writeln!(out, "s_angstrom={}", table::num(params[0])).unwrap();
    writeln!(out, "phi0_ev={}", table::num(params[1])).unwrap();
    writeln!(out, "residual={}", table::num(fit.residual_norm)).unwrap();
    writeln!(out, "converged={converged}").unwrap();
    writeln!(out, "iterations={}", fit.iterations).unwrap();
}

fn params_path(p: &Params, out: &Path) -> PathBuf {
    match p.0.get("params-out") {
        Some(path) => PathBuf::from(path),
        None => {
            let mut name = out.file_stem().map(|s| s.to_os_string()).unwrap_or_default();
            name.push(".params.csv");
            out.with_file_name(name)
        }
    }
}

fn fit_iv_command(p: &Params, input: &Path, out: &Path) -> Result<String, CliError> {
    let points = table::parse_iv(&table::read_text(input)?, input)?;
    let data = IVDataset::new(points, input.display().to_string()).map_err(junction_error)?;
    let initial =
        JunctionModel::new(p.scalar("init-width", Kind::Length)?, p.scalar("init-phi0", Kind::Energy)?, 0.0)
            .map_err(junction_error)?;
    let groups = data.temperature_groups();
    let fits = fit_iv_by_temperature(&data, &initial);
    let mut report = String::new();
    let mut csv = format!("{}\n", table::IV_PARAMS_HEADER);
    let mut failure = None;
    let results: Vec<(f64, Vec<f64>, FitResult, bool)> = match fits {
        Ok(fits) => {
            fits.into_iter().map(|(m, r)| (m.temperature, vec![m.width_s, m.barrier_phi0], r, true)).collect()
        }
        Err(JunctionError::Fit(NumericsError::NonConvergence { best })) => {
            failure = Some("fit did not converge".to_string());
            let t = groups.first().map_or(0.0, |g| g.0);
            vec![(t, best.params.clone(), *best, false)]
        }
        Err(e) => return Err(junction_error(e)),
    };
    for (i, (t, params, fit, converged)) in results.iter().enumerate() {
        if i > 0 {
            report.push('\n');
        }
        fit_block(&mut report, *t, params, fit, *converged);
        let err = fit.std_errors();
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            table::num(*t),
            table::num(params[0]),
            table::num(params[1]),
            table::num(err[0]),
            table::num(err[1]),
            table::num(fit.residual_norm),
            converged
        )
        .unwrap();
    }
    let csv_path = params_path(p, out);
    table::write_atomic(out, &report)?;
    table::write_atomic(&csv_path, &csv)?;
    if let Some(msg) = failure {
        return Err(CliError::Numerical(msg));
    }
    let first = &results[0];
    Ok(format!(
        "fit-iv: {} temperature group(s); s = {} A, phi0 = {} eV at {} K; report {}",
        results.len(),
        table::num(first.1[0]),
        table::num(first.1[1]),
        table::num(first.0),
        out.display()
    ))
}

fn dwell(p: &Params, out: &Path) -> Result<String, CliError> {
    let model = JunctionModel::new(p.scalar("width", Kind::Length)?, p.scalar("phi0", Kind::Energy)?, 0.0)
        .map_err(junction_error)?;
    let fraction = p.scalar("fraction", Kind::Number)?;
    let seconds = extract_dwell(&model, fraction).map_err(junction_error)?;
    let mut report = String::new();
    writeln!(report, "s_angstrom={}", table::num(model.width_s)).unwrap();
    writeln!(report, "phi0_ev={}", table::num(model.barrier_phi0)).unwrap();
    writeln!(report, "energy_ev={}", table::num(fraction * model.barrier_phi0)).unwrap();
    writeln!(report, "tau_dwell_fs={}", table::num(seconds * FS_PER_S)).unwrap();
    writeln!(report, "tau_dwell_s={}", table::num(seconds)).unwrap();
    table::write_atomic(out, &report)?;
    Ok(format!("extract-dwell: tau_D = {} fs = {} s", table::num(seconds * FS_PER_S), table::num(seconds)))
}

fn fit_gap_command(p: &Params, input: &Path, out: &Path) -> Result<String, CliError> {
    let points = table::parse_gap(&table::read_text(input)?, input)?;
    let data = GapDataset::new(points).map_err(junction_error)?;
    let gap0 = match p.optional("init-gap0", Kind::Energy)? {
        Some(g) => g,
        None => data
            .points()
            .first()
            .map(|g| g.gap)
            .ok_or_else(|| CliError::Validation("empty gap data".into()))?,
    };
    let initial = GapModelParams::new(
        gap0,
        p.scalar("init-s", Kind::Number)?,
        p.scalar("init-omega", Kind::Frequency)?,
    )
    .map_err(junction_error)?;
    let (params, fit, converged) = match fit_gap(&data, &initial) {
        Ok((params, fit)) => (params, fit, true),
        Err(JunctionError::Fit(NumericsError::NonConvergence { best })) => {
            let q = &best.params;
            (GapModelParams { gap0: q[0], coupling_s: q[1], omega: q[2] * 1e13 }, *best, false)
        }
        Err(e) => return Err(junction_error(e)),
    };
    let mut report = String::new();
    writeln!(report, "gap0_ev={}", table::num(params.gap0)).unwrap();
    writeln!(report, "coupling_s={}", table::num(params.coupling_s)).unwrap();
    writeln!(report, "omega_per_s={}", table::num(params.omega)).unwrap();
    writeln!(report, "phonon_energy_ev={}", table::num(params.phonon_energy())).unwrap();
    writeln!(report, "residual={}", table::num(fit.residual_norm)).unwrap();
    writeln!(report, "converged={converged}").unwrap();
    writeln!(report, "near_singular={}", fit.near_singular()).unwrap();
    table::write_atomic(out, &report)?;
    if !converged {
        return Err(CliError::Numerical("gap fit did not converge".into()));
    }
    Ok(format!("fit-gap: omega = {} 1/s, report {}", table::num(params.omega), out.display()))
}

fn bu_check(p: &Params, out: &Path) -> Result<String, CliError> {
    let well = SphericalWell::new(p.scalar("strength", Kind::Energy)?, p.scalar("radius", Kind::Length)?)
        .map_err(partial_wave_error)?;
    let energy = p.scalar("energy", Kind::Energy)?;
    let box_radius = p.scalar("box", Kind::Length)?;
    let l_max = p.count("lmax")?;
    let window = match p.optional("window", Kind::Energy)? {
        Some(w) => w,
        None => counting_window(energy, box_radius, l_max, DEFAULT_WINDOW_STATES),
    };
    let c = beth_uhlenbeck_check(&well, energy, window, box_radius, l_max).map_err(partial_wave_error)?;
    table::write_atomic(out, &table::bu_csv(&[c]))?;
    Ok(format!(
        "bu-check: smooth {} states/eV, counted {} states/eV, relative gap {}",
        table::num(c.smooth_side),
        table::num(c.counted_side),
        table::num(c.relative_gap())
    ))
}
