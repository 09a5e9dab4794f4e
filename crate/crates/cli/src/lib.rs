//! Command-line front end for the twisted-cylinder solver.

pub mod config;
pub mod output;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use twistqm::scattering::{transmission_sweep, ScatteringScenario, ScenarioKind, SweepRecord};
use twistqm::spectrum::{bound_wavefunction, eigenenergy};
use twistqm::validation::{run_all, CheckOutcome};

pub use config::{check_requirements, parse_config, Command, ConfigError, OutputFormat, RunConfig};
use output::{write_table, Cell, Table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(#[from] twistqm::Error),
    #[error("i/o failure on {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("validation failed: {0} of 8 checks")]
    Validation(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) | CliError::Io { .. } => 2,
            CliError::Validation(_) => 3,
        }
    }

    /// Single-line report for stderr.
    pub fn report(&self) -> String {
        match self {
            CliError::Config(e) => e.to_json_line(),
            other => other.to_string().replace('\n', " "),
        }
    }
}

/// Options that override or complement the configuration document.
#[derive(Debug, Clone, Default)]
pub struct Invocation {
    pub command: Option<Command>,
    pub config_path: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

pub fn load_config(inv: &Invocation) -> Result<RunConfig, CliError> {
    let mut config = match &inv.config_path {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::Config(ConfigError {
                    field: None,
                    line: None,
                    message: format!("cannot read {}: {e}", path.display()),
                })
            })?;
            parse_config(&text)?
        }
        None if inv.command == Some(Command::Validate) => RunConfig::validate_default(),
        None => {
            return Err(CliError::Config(ConfigError {
                field: None,
                line: None,
                message: "--config is required for this command".into(),
            }))
        }
    };
    if let Some(c) = inv.command {
        config.command = c;
    }
    if let Some(out) = &inv.out {
        config.output_path = Some(out.clone());
    }
    if let Some(f) = inv.format {
        config.format = f;
    }
    check_requirements(&config)?;
    Ok(config)
}

fn sweep_cells(records: &[SweepRecord]) -> impl Iterator<Item = [Cell; 4]> + '_ {
    records.iter().map(|r| {
        [
            Cell::Num(r.energy),
            Cell::Num(r.transmission),
            Cell::Num(r.reflection),
            Cell::Text(r.flag.name().to_string()),
        ]
    })
}

pub fn spectrum_table(config: &RunConfig) -> Table {
    let mut states: Vec<_> = config
        .modes
        .iter()
        .map(|&m| (m, eigenenergy(m, &config.geometry, &config.physics)))
        .collect();
    states.sort_by(|a, b| {
        a.1.total_cmp(&b.1)
            .then(a.0.n.cmp(&b.0.n))
            .then(a.0.l.abs().cmp(&b.0.l.abs()))
            .then((a.0.l < 0).cmp(&(b.0.l < 0)))
    });
    let mut table = Table::new(&["n", "l", "energy"]);
    for (m, e) in states {
        table.push(vec![Cell::Int(m.n as i64), Cell::Int(m.l as i64), Cell::Num(e)]);
    }
    table
}

pub fn wavefunction_table(config: &RunConfig) -> Result<Table, CliError> {
    let twist = config.twist.profile();
    let mut table = Table::new(&["n", "l", "phi", "z", "re", "im", "density"]);
    for &m in &config.modes {
        let wf = bound_wavefunction(m, &config.geometry, &twist, config.grid)?;
        for (iz, &z) in wf.z.iter().enumerate() {
            for (ip, &phi) in wf.phi.iter().enumerate() {
                let v = wf.value(ip, iz);
                table.push(vec![
                    Cell::Int(m.n as i64),
                    Cell::Int(m.l as i64),
                    Cell::Num(phi),
                    Cell::Num(z),
                    Cell::Num(v.re),
                    Cell::Num(v.im),
                    Cell::Num(v.norm_sqr()),
                ]);
            }
        }
    }
    Ok(table)
}

pub fn scatter_table(config: &RunConfig, kind: ScenarioKind) -> Result<Table, CliError> {
    let alpha = match config.twist {
        config::TwistSpec::Constant(a) => a,
        config::TwistSpec::LinearRamp(_) => unreachable!("rejected by check_requirements"),
    };
    let scenario = ScatteringScenario::new(kind, config.geometry, alpha, config.scatter_l, config.physics)?;
    let energies = config.energy_grid.expect("checked").values();
    let records = transmission_sweep(&scenario, &energies)?;
    let mut table = Table::new(&["energy", "T", "R", "flag"]);
    for row in sweep_cells(&records) {
        table.push(row.to_vec());
    }
    Ok(table)
}

pub fn sweep_table(config: &RunConfig) -> Result<Table, CliError> {
    let energies = config.energy_grid.expect("checked").values();
    let kind = config.sweep.scenario;
    let mut table = Table::new(&["scenario", "l", "radius", "alpha", "energy", "T", "R", "flag"]);
    for &l in &config.sweep.ls {
        for &radius in &config.sweep.radii {
            let geom = twistqm::geometry::CylinderGeometry {
                radius,
                length: config.geometry.length,
            };
            for &alpha in &config.sweep.alphas {
                let scenario = ScatteringScenario::new(kind, geom, alpha, l, config.physics)?;
                let records = transmission_sweep(&scenario, &energies)?;
                for row in sweep_cells(&records) {
                    let mut cells = vec![
                        Cell::Text(kind.name().to_string()),
                        Cell::Int(l as i64),
                        Cell::Num(radius),
                        Cell::Num(alpha),
                    ];
                    cells.extend(row);
                    table.push(cells);
                }
            }
        }
    }
    Ok(table)
}

pub fn validation_table(outcomes: &[CheckOutcome]) -> Table {
    let mut table = Table::new(&["id", "name", "status", "measured", "detail"]);
    for o in outcomes {
        table.push(vec![
            Cell::Int(o.id as i64),
            Cell::Text(o.name.to_string()),
            Cell::Text(if o.passed { "PASS" } else { "FAIL" }.to_string()),
            Cell::Num(o.measured),
            Cell::Text(o.detail.replace(',', ";")),
        ]);
    }
    table
}

/// Plain-text summary printed by `validate`.
pub fn render_validation(outcomes: &[CheckOutcome]) -> String {
    let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
    let mut text = String::new();
    for o in outcomes {
        text.push_str(&format!(
            "{:>2}  {:<width$}  {}  {:.3e}  {}\n",
            o.id,
            o.name,
            if o.passed { "PASS" } else { "FAIL" },
            o.measured,
            o.detail
        ));
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    text.push_str(&format!("{passed}/{} checks passed\n", outcomes.len()));
    text
}

fn emit(table: &Table, config: &RunConfig) -> Result<(), CliError> {
    match &config.output_path {
        Some(path) => {
            let io_err = |source| CliError::Io {
                path: path.display().to_string(),
                source,
            };
            let mut buf = Vec::new();
            write_table(&mut buf, table, config, config.format).map_err(io_err)?;
            write_atomically(path, &buf).map_err(io_err)
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_table(&mut lock, table, config, config.format)
                .and_then(|_| lock.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn write_atomically(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

/// Executes a loaded configuration.
pub fn execute(config: &RunConfig) -> Result<(), CliError> {
    match config.command {
        Command::Spectrum => emit(&spectrum_table(config), config),
        Command::Wavefunction => emit(&wavefunction_table(config)?, config),
        Command::ScatterEmbedded => emit(&scatter_table(config, ScenarioKind::EmbeddedCylinder)?, config),
        Command::ScatterFree => emit(&scatter_table(config, ScenarioKind::FreeParticle)?, config),
        Command::Sweep => emit(&sweep_table(config)?, config),
        Command::Validate => {
            let outcomes = run_all();
            print!("{}", render_validation(&outcomes));
            if config.output_path.is_some() {
                emit(&validation_table(&outcomes), config)?;
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            if failed > 0 {
                return Err(CliError::Validation(failed));
            }
            Ok(())
        }
    }
}
