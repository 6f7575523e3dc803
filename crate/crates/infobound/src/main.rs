//! Command-line surface: compute measures, evaluate bounds, run
//! verification suites, and emit comparison data as CSV.
//!
//! Exit codes: 0 success (or: the checked property holds), 1 soundness
//! violation or ordering failure, 2 parse/validation error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use infobound::bounds::{
    cor1_report, default_beta, eq11_report, eq7_report, eq9_report, prop1_report,
};
use infobound::{
    cor1_closed_form, evaluate_all, literature_bound, subgaussian_bound, Error, Instance,
    MeasureSet, Method, Result, SuiteConfig,
};

/// Stand-in for the right limit `y -> 0` in the `ratio` command; both
/// bound functions are continuous at 0 from the right.
const RATIO_Y0: f64 = 1e-12;

#[derive(Parser)]
#[command(
    name = "infobound",
    version,
    about = "Dependence measures and verified event-probability bounds on finite joints"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the dependence measures of a JSON instance (nats).
    Measures { file: PathBuf },
    /// Evaluate the bounds on a JSON instance with an event mask.
    Bound {
        file: PathBuf,
        /// Single method to print (prop1, cor1, eq7, eq9, eq10, eq11,
        /// lautum, lautum_dv, leakage, jinf). Default: all.
        #[arg(long)]
        method: Option<String>,
        /// Override for the variational parameter of eq9/lautum_dv
        /// (default: log(1/q)).
        #[arg(long)]
        beta: Option<f64>,
        /// Override for the event-slice level of leakage/jinf (must
        /// dominate max_y P_X(E_y)).
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Run the seeded soundness suite; exit 0 iff no bound is violated.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long)]
        seed: u64,
        /// Upper bound on both alphabet sizes (2..=8).
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(2..=8))]
        max_size: u64,
        /// Event-mask cell density in (0, 1).
        #[arg(long, default_value_t = 0.4)]
        density: f64,
    },
    /// CSV comparison of the divergence-based bounds along a log-spaced
    /// grid of reference probabilities, with d = -k log(1 - q).
    Fig1 {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=4))]
        k: u8,
        #[arg(long, default_value_t = 1e-4)]
        qmin: f64,
        #[arg(long, default_value_t = 0.5)]
        qmax: f64,
        #[arg(long, default_value_t = 50)]
        steps: usize,
    },
    /// CSV of the closed-form/additive bound ratio at y -> 0+ (the ratio
    /// tends to 0 as q -> 0).
    Ratio {
        /// Comma-separated reference probabilities in (0, 0.5).
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<f64>,
    },
    /// Demonstrate the regime d = -log(q)/2 where the square-root bound
    /// is trivial (> 1) while the other two stay below 1.
    Remark1 {
        #[arg(long)]
        q: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Measures { file } => cmd_measures(&file),
        Command::Bound {
            file,
            method,
            beta,
            alpha,
        } => cmd_bound(&file, method.as_deref(), beta, alpha),
        Command::Verify {
            count,
            seed,
            max_size,
            density,
        } => cmd_verify(count as usize, seed, max_size as usize, density),
        Command::Fig1 {
            k,
            qmin,
            qmax,
            steps,
        } => cmd_fig1(f64::from(k), qmin, qmax, steps),
        Command::Ratio { q } => cmd_ratio(&q),
        Command::Remark1 { q } => cmd_remark1(q),
    }
}

/// Formats with 9 significant digits, locale-independent.
fn sig9(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0.000000000".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-3..9).contains(&mag) {
        let decimals = (8 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.8e}")
    }
}

fn cmd_measures(file: &Path) -> Result<ExitCode> {
    let instance = Instance::load(file)?;
    let m = MeasureSet::compute(&instance.joint);
    println!("mutual_information  {}", sig9(m.mutual_information));
    println!("lautum_information  {}", sig9(m.lautum));
    println!("max_leakage         {}", sig9(m.max_leakage));
    println!("j_infinity          {}", sig9(m.j_infinity));
    Ok(ExitCode::SUCCESS)
}

fn cmd_bound(
    file: &Path,
    method: Option<&str>,
    beta: Option<f64>,
    alpha: Option<f64>,
) -> Result<ExitCode> {
    let instance = Instance::load(file)?;
    let event = instance.require_event()?;
    let selected: Option<Method> = method.map(str::parse).transpose()?;
    let reports = evaluate_all(&instance.joint, event, beta, alpha)?;
    let exact = instance.joint.event_probability(event)?;
    println!("exact_p             {}", sig9(exact));
    println!("exact_q             {}", sig9(reports[0].q));
    println!(
        "{:<10} {:>15} {:>15} {:>11}  note",
        "method", "raw_value", "value", "applicable"
    );
    for r in &reports {
        if selected.is_some_and(|m| m != r.method) {
            continue;
        }
        let note = if r.condition_note.is_empty() {
            "-"
        } else {
            r.condition_note.as_str()
        };
        println!(
            "{:<10} {:>15} {:>15} {:>11}  {}",
            r.method.token(),
            sig9(r.raw_value),
            sig9(r.value),
            if r.applicable { "yes" } else { "no" },
            note
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(count: usize, seed: u64, max_size: usize, density: f64) -> Result<ExitCode> {
    if !(density > 0.0 && density < 1.0) {
        return Err(Error::Domain {
            what: "density must lie in (0, 1)",
            value: density,
        });
    }
    let mut cfg = SuiteConfig::new(count, seed);
    cfg.size_range = (2, max_size);
    cfg.density_range = (density, density);
    let summary = infobound::run_suite(&cfg)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&summary).expect("summary serializes")
    );
    if summary.is_sound() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn cmd_fig1(k: f64, qmin: f64, qmax: f64, steps: usize) -> Result<ExitCode> {
    if !(qmin > 0.0 && qmin < qmax && qmax <= 0.5) {
        return Err(Error::Domain {
            what: "grid must satisfy 0 < qmin < qmax <= 0.5",
            value: qmax,
        });
    }
    if steps == 0 {
        return Err(Error::Domain {
            what: "steps must be positive",
            value: 0.0,
        });
    }
    println!("q,d,prop1,cor1,eq7,eq9_default_beta,eq11");
    for i in 0..steps {
        let t = if steps == 1 {
            0.0
        } else {
            i as f64 / (steps - 1) as f64
        };
        let q = (qmin.ln() + t * (qmax.ln() - qmin.ln())).exp();
        let d = -k * (-q).ln_1p();
        let row = [
            q,
            d,
            prop1_report(q, d).value,
            cor1_report(q, d).value,
            eq7_report(q, d).value,
            eq9_report(q, d, default_beta(q)).value,
            eq11_report(q, d).value,
        ];
        let cells: Vec<String> = row.iter().map(|&v| sig9(v)).collect();
        println!("{}", cells.join(","));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_ratio(qs: &[f64]) -> Result<ExitCode> {
    for &q in qs {
        if !(q > 0.0 && q < 0.5) {
            return Err(Error::Domain {
                what: "ratio input q must lie in (0, 0.5)",
                value: q,
            });
        }
    }
    println!("q,eq7,cor1,ratio");
    for &q in qs {
        let eq7 = literature_bound(q, RATIO_Y0)?;
        let cor1 = cor1_closed_form(q, RATIO_Y0)?;
        // The ratio of the closed form to the additive bound; it tends to
        // 0 as q -> 0.
        let ratio = cor1 / eq7;
        println!(
            "{},{},{},{}",
            sig9(q),
            sig9(eq7),
            sig9(cor1),
            sig9(ratio)
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_remark1(q: f64) -> Result<ExitCode> {
    if !(q > 0.0 && q <= 1e-2) {
        return Err(Error::Domain {
            what: "remark1 expects a small q in (0, 1e-2]",
            value: q,
        });
    }
    let d = -q.ln() / 2.0;
    let eq11_raw = subgaussian_bound(q, d)?;
    let eq7 = literature_bound(q, d)?;
    let cor1 = cor1_closed_form(q, d)?;
    println!("q                   {}", sig9(q));
    println!("d = -log(q)/2       {}", sig9(d));
    println!("eq11 raw            {}  (expected > 1)", sig9(eq11_raw));
    println!("eq7                 {}  (expected < 1)", sig9(eq7));
    println!("cor1                {}  (expected < 1)", sig9(cor1));
    let holds = eq11_raw > 1.0 && eq7 < 1.0 && cor1 < 1.0;
    println!("ordering            {}", if holds { "holds" } else { "FAILS" });
    Ok(if holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
