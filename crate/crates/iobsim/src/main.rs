//! Command-line front end.
//!
//! Exit codes: 0 success, 1 scenario/validation errors, 2 usage errors.
//! Diagnostics go to stderr, data to `--out` or stdout. Output files are
//! written to a temporary sibling and renamed into place, so a failing
//! run never leaves a partial file.

use std::fs;
use std::io::{self, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use iobsim::analysis::{
    compare_architectures, comparison_to_csv, curve_gnuplot,
    curve_to_csv, project_curve, Spacing, SweepSpec,
};
use iobsim::config::parse_scenario_lenient;
use iobsim::energy::{
    BatterySpec, HarvesterSpec, Lifetime,
};
use iobsim::link::LinkTech;
use iobsim::scenario::{
    default_catalog, find_class, has_errors, validate, Scenario,
    Severity,
};
use iobsim::sim::{result_to_csv, run_with_trace, NodeOutcome};
use iobsim::units;

#[derive(Parser)]
#[command(
    name = "iobsim",
    version,
    about = "Body-area-network battery-life projection and simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic battery-life-vs-rate projection
    Project(ProjectArgs),
    /// Run the epoch-based simulator on a scenario
    Simulate(SimulateArgs),
    /// Standalone-vs-hub-offload power comparison for one node
    Compare(CompareArgs),
    /// Print the built-in device-class catalog
    Catalog,
    /// Validate a scenario file and print diagnostics
    Validate(ValidateArgs),
}

#[derive(Args)]
struct ProjectArgs {
    /// Device class from the catalog (alternative to --scenario/--node)
    #[arg(long)]
    class: Option<String>,
    /// Link name: `wir`, `ble`, or a link from --scenario
    #[arg(long, default_value = "wir")]
    link: String,
    /// Sweep grid as min:max:spacing:points, e.g. 1kbps:10Mbps:log:50
    #[arg(long)]
    sweep: Option<String>,
    /// Battery capacity (mAh suffix accepted)
    #[arg(long, default_value = "1000 mAh")]
    battery: String,
    /// Battery nominal voltage
    #[arg(long, default_value = "3 V")]
    voltage: String,
    /// Constant harvest power (e.g. "100 uW")
    #[arg(long, default_value = "0 W")]
    harvest: String,
    /// Compression factor override (default: class default)
    #[arg(long)]
    compression: Option<f64>,
    /// Project at one node's configured rate instead of a sweep
    #[arg(long, requires = "node")]
    scenario: Option<PathBuf>,
    #[arg(long, requires = "scenario")]
    node: Option<String>,
    /// Also write a gnuplot script next to the data
    #[arg(long)]
    gnuplot: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// Override the scenario seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the epoch length (also via IOBSIM_EPOCH)
    #[arg(long)]
    epoch: Option<String>,
    /// Write a per-epoch trace CSV to this path
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long)]
    node: String,
    /// Radiative link name in the scenario
    #[arg(long, default_value = "ble")]
    rf_link: String,
    /// Body-channel link name in the scenario
    #[arg(long, default_value = "wir")]
    wir_link: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    scenario: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Project(args) => cmd_project(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Catalog => cmd_catalog(),
        Command::Validate(args) => cmd_validate(args),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn load_scenario(path: &Path) -> Result<Scenario, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_scenario_lenient(&text).map_err(|e| e.to_string())
}

fn load_validated(path: &Path) -> Result<Scenario, String> {
    let s = load_scenario(path)?;
    let diags = validate(&s);
    for d in &diags {
        if d.severity == Severity::Warning {
            eprintln!("{d}");
        }
    }
    if has_errors(&diags) {
        let msgs: Vec<String> = diags
            .iter()
            .filter(|d| d.severity == Severity::Error)
            .map(|d| d.to_string())
            .collect();
        return Err(msgs.join("\n"));
    }
    Ok(s)
}

/// Write via a temporary sibling and rename, so errors never leave a
/// partial output file.
fn write_atomic(path: &Path, data: &str) -> Result<(), String> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, data).map_err(|e| format!("cannot write {}: {e}", tmp.display()))?;
    fs::rename(&tmp, path)
        .map_err(|e| format!("cannot move output into {}: {e}", path.display()))
}

/// Data to --out as CSV, or to stdout: CSV when piped, a table when the
/// terminal is interactive.
fn emit(out: &Option<PathBuf>, csv: &str, table: &str) -> Result<(), String> {
    match out {
        Some(path) => write_atomic(path, csv),
        None => {
            let mut stdout = io::stdout();
            let text = if stdout.is_terminal() { table } else { csv };
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| e.to_string())
        }
    }
}

fn builtin_link(name: &str) -> Option<LinkTech> {
    match name {
        "wir" => Some(LinkTech::wir_default()),
        "ble" => Some(LinkTech::ble_default()),
        _ => None,
    }
}

fn parse_sweep(s: &str) -> Result<(f64, f64, Spacing, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 4 {
        return Err(format!(
            "sweep must be min:max:spacing:points, got `{s}`"
        ));
    }
    let min = units::parse_rate(parts[0]).map_err(|e| e.to_string())?;
    let max = units::parse_rate(parts[1]).map_err(|e| e.to_string())?;
    let spacing = match parts[2] {
        "log" => Spacing::Log,
        "linear" => Spacing::Linear,
        other => return Err(format!("spacing must be log or linear, got `{other}`")),
    };
    let points: usize = parts[3]
        .parse()
        .map_err(|_| format!("points must be an integer, got `{}`", parts[3]))?;
    Ok((min, max, spacing, points))
}

fn cmd_project(args: ProjectArgs) -> Result<ExitCode, String> {
    let spec = if let (Some(path), Some(node_id)) = (&args.scenario, &args.node) {
        let s = load_validated(path)?;
        let node = s
            .find_node(node_id)
            .ok_or_else(|| format!("no node `{node_id}` in scenario"))?;
        let class = s
            .class_of(node)
            .ok_or_else(|| format!("node `{node_id}` has unknown class"))?;
        let link = s
            .find_link(&node.link)
            .ok_or_else(|| format!("node `{node_id}` has unknown link"))?;
        let compression = args
            .compression
            .unwrap_or(node.tx_rate_bps() / node.raw_rate_bps);
        SweepSpec {
            rate_min_bps: node.raw_rate_bps,
            rate_max_bps: node.raw_rate_bps * 1.0000001,
            points: 2,
            spacing: Spacing::Linear,
            class: class.clone(),
            link: link.clone(),
            battery: node.battery,
            harvester: node.harvester,
            compression,
        }
    } else {
        let class_name = args
            .class
            .as_deref()
            .ok_or("either --class or --scenario/--node is required")?;
        let catalog = default_catalog();
        let class = find_class(&catalog, class_name)
            .ok_or_else(|| format!("unknown device class `{class_name}`"))?
            .clone();
        let link = builtin_link(&args.link)
            .ok_or_else(|| format!("unknown link `{}` (use wir or ble)", args.link))?;
        let (rate_min, rate_max, spacing, points) = parse_sweep(
            args.sweep
                .as_deref()
                .ok_or("--sweep is required with --class")?,
        )?;
        let battery = BatterySpec::new(
            units::parse_charge_mah(&args.battery).map_err(|e| e.to_string())?,
            units::parse_voltage(&args.voltage).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        let harvester =
            HarvesterSpec::new(units::parse_power(&args.harvest).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
        let compression = args.compression.unwrap_or(class.default_compression);
        SweepSpec {
            rate_min_bps: rate_min,
            rate_max_bps: rate_max,
            points,
            spacing,
            class,
            link,
            battery,
            harvester,
            compression,
        }
    };

    let rows = project_curve(&spec).map_err(|e| e.to_string())?;
    let csv = curve_to_csv(&rows);

    let mut table = format!(
        "{:>12}  {:>12}  {:>12}  {:>12}  {:>14}  {:>10}  {:>10}\n",
        "rate", "sense", "comm", "total", "life", "class", "feasible"
    );
    for r in &rows {
        let life = match r.life {
            Lifetime::Perpetual => "perpetual".to_string(),
            Lifetime::Hours(h) => format!("{h:.1} h"),
        };
        table.push_str(&format!(
            "{:>12}  {:>12}  {:>12}  {:>12}  {:>14}  {:>10}  {:>10}\n",
            units::format_rate(r.rate_bps),
            units::format_power(r.sense_w),
            units::format_power(r.comm_w),
            units::format_power(r.total_w),
            life,
            r.class_label.to_string(),
            if r.feasible { "ok" } else { "INFEASIBLE" }
        ));
    }

    if let Some(gp) = &args.gnuplot {
        let csv_name = args
            .out
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "curve.csv".into());
        write_atomic(gp, &curve_gnuplot(&csv_name, &format!("{} on {}", spec.class.name, spec.link.name)))?;
    }

    emit(&args.out, &csv, &table)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode, String> {
    let mut s = load_validated(&args.scenario)?;
    if let Some(seed) = args.seed {
        s.seed = seed;
    }
    // precedence: --epoch, then IOBSIM_EPOCH, then the scenario value
    if let Some(e) = &args.epoch {
        s.epoch_s = units::parse_duration_s(e).map_err(|e| e.to_string())?;
    } else if let Ok(e) = std::env::var("IOBSIM_EPOCH") {
        s.epoch_s = units::parse_duration_s(&e).map_err(|e| e.to_string())?;
    }

    let (result, trace) =
        run_with_trace(&s, args.trace.is_some()).map_err(|e| e.to_string())?;
    if let (Some(path), Some(trace)) = (&args.trace, trace) {
        write_atomic(path, &trace)?;
    }

    let csv = result_to_csv(&result);
    let mut table = format!(
        "{:<24} {:<20} {:<12} {:<6} {:>12} {:>16} {:>12}\n",
        "node", "class", "arch", "link", "avg power", "lifetime", "consumed"
    );
    for n in &result.nodes {
        let lifetime = match n.outcome {
            NodeOutcome::DiedAt { hours } => format!("died {hours:.1} h"),
            NodeOutcome::AliveAtEnd { projected } => match projected {
                Lifetime::Perpetual => "perpetual".into(),
                Lifetime::Hours(h) => format!("proj {h:.1} h"),
            },
        };
        table.push_str(&format!(
            "{:<24} {:<20} {:<12} {:<6} {:>12} {:>16} {:>10.3} J\n",
            n.id,
            n.class,
            n.architecture,
            n.link,
            units::format_power(n.avg_power_w),
            lifetime,
            n.ledger.consumed_j
        ));
    }
    table.push_str(&format!("hub energy: {:.3} J\n", result.hub_energy_j));
    for (link, util) in &result.channel_utilization {
        table.push_str(&format!("channel {link}: {:.1}% utilized\n", util * 100.0));
    }

    emit(&args.out, &csv, &table)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_compare(args: CompareArgs) -> Result<ExitCode, String> {
    let s = load_validated(&args.scenario)?;
    let node = s
        .find_node(&args.node)
        .ok_or_else(|| format!("no node `{}` in scenario", args.node))?;
    let class = s
        .class_of(node)
        .ok_or_else(|| format!("node `{}` has unknown class", args.node))?;
    let body = s
        .find_link(&args.wir_link)
        .cloned()
        .or_else(|| builtin_link(&args.wir_link))
        .ok_or_else(|| format!("unknown link `{}`", args.wir_link))?;
    let rf = s
        .find_link(&args.rf_link)
        .cloned()
        .or_else(|| builtin_link(&args.rf_link))
        .ok_or_else(|| format!("unknown link `{}`", args.rf_link))?;

    let c = compare_architectures(node, class, &body, &rf).map_err(|e| e.to_string())?;
    let csv = comparison_to_csv(&c);
    let table = format!(
        "node {}\n  standalone ({}): sense {} + compute {} + comm {} = {}\n  hub-offload ({}): sense {} + compute {} + comm {} = {}\n  ratio: {:.1}x\n",
        c.node_id,
        rf.name,
        units::format_power(c.standalone.sense_w),
        units::format_power(c.standalone.compute_w),
        units::format_power(c.standalone.comm_w),
        units::format_power(c.standalone.total_w()),
        body.name,
        units::format_power(c.hub_offload.sense_w),
        units::format_power(c.hub_offload.compute_w),
        units::format_power(c.hub_offload.comm_w),
        units::format_power(c.hub_offload.total_w()),
        c.ratio
    );
    emit(&args.out, &csv, &table)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_catalog() -> Result<ExitCode, String> {
    println!(
        "Built-in device classes. Sense-model coefficients are calibration\n\
         constants, not measured vendor data.\n"
    );
    for c in default_catalog() {
        println!(
            "{:<20} rate {:<10} sense {} + {} pJ/bit, compression {}\n  {}",
            c.name,
            units::format_rate(c.typical_raw_rate_bps),
            units::format_power(c.sense_model.static_power.watts()),
            c.sense_model.energy_per_sensed_bit.joules_per_bit() * 1e12,
            c.default_compression,
            c.catalog_note
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(args: ValidateArgs) -> Result<ExitCode, String> {
    let s = load_scenario(&args.scenario)?;
    let diags = validate(&s);
    for d in &diags {
        eprintln!("{d}");
    }
    if has_errors(&diags) {
        Ok(ExitCode::from(1))
    } else {
        eprintln!("scenario ok: {} nodes, {} links", s.nodes.len(), s.links.len());
        Ok(ExitCode::SUCCESS)
    }
}
