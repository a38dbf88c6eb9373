//! Command-line front end: verification, class computation, reductions,
//! homotopy certification, demos and plot-data export.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 mathematical failure.
//! Human-readable reports go to standard error; machine-readable data
//! (integers, trace tables, generated files) goes to standard output or
//! the requested files.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use softpair::funcalg::{self, MatrixField, SpaceGrid};
use softpair::homotopy::{self, PairPath};
use softpair::io as spio;
use softpair::matrix::CMatrix;
use softpair::pairs::{self, SoftPair};
use softpair::reduction;
use softpair::universal;
use softpair::Error;

#[derive(Parser)]
#[command(
    name = "softpair",
    version,
    about = "Soft projection pairs: relation verification, integer classes, homotopy certificates, demos"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: ConfigFlags,
}

#[derive(Args, Clone)]
struct ConfigFlags {
    /// Relation tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Spectral clustering tolerance for reductions.
    #[arg(long = "cluster-tol", global = true)]
    cluster_tol: Option<f64>,
    /// Samples per homotopy path.
    #[arg(long, global = true)]
    steps: Option<usize>,
    /// Seed for all randomness.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Grid resolution, e.g. 32x64 (sphere) or 64 (circle).
    #[arg(long, global = true)]
    grid: Option<String>,
    /// Output file or directory, depending on the subcommand.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Optional config file with `key value` lines; flags win over the file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Tabular,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the relations for a pair file.
    Verify { pair_file: PathBuf },
    /// Print the integer class tr(a−b) of a valid pair.
    Class { pair_file: PathBuf },
    /// Split a valid pair into common part and projections.
    Reduce { pair_file: PathBuf },
    /// Construct and certify a homotopy path.
    Homotopy {
        #[arg(value_enum)]
        kind: HomotopyKind,
        pair_file: PathBuf,
        /// Reparametrization function (reparam paths only).
        #[arg(long, value_enum, default_value = "square")]
        function: ReparamFn,
    },
    /// Run a self-verifying demo and write its artifacts.
    Demo {
        #[arg(value_enum)]
        name: DemoName,
    },
    /// Generate a seeded valid pair file.
    Gen {
        n: usize,
        k: usize,
        /// Seed; falls back to --seed when omitted.
        #[arg(value_name = "SEED")]
        seed_arg: Option<u64>,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum HomotopyKind {
    Flip,
    Scale,
    Reparam,
    PqScale,
}

#[derive(Copy, Clone, ValueEnum)]
enum ReparamFn {
    Square,
    Smoothstep,
}

#[derive(Copy, Clone, ValueEnum)]
enum DemoName {
    Universal,
    Bott,
    Clutch,
}

/// Resolved configuration: defaults, overridden by the config file,
/// overridden by flags.
struct Config {
    tol: f64,
    cluster_tol: f64,
    steps: usize,
    seed: u64,
    grid: (usize, usize),
    out: Option<PathBuf>,
    format: Format,
}

fn resolve_config(flags: &ConfigFlags) -> Result<Config, CliError> {
    let mut tol = 1e-8;
    let mut cluster_tol = reduction::DEFAULT_CLUSTER_TOL;
    let mut steps = 101usize;
    let mut seed = 0u64;
    let mut grid = (32usize, 64usize);

    if let Some(path) = &flags.config {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(&e.to_string()))?;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let key = it.next().unwrap();
            let value = it
                .next()
                .ok_or_else(|| CliError::usage(&format!("config key '{key}' has no value")))?;
            match key {
                "tol" => tol = parse_num(value)?,
                "cluster-tol" => cluster_tol = parse_num(value)?,
                "steps" => steps = parse_num(value)?,
                "seed" => seed = parse_num(value)?,
                "grid" => grid = parse_grid(value)?,
                other => return Err(CliError::usage(&format!("unknown config key '{other}'"))),
            }
        }
    }
    if let Some(v) = flags.tol {
        tol = v;
    }
    if let Some(v) = flags.cluster_tol {
        cluster_tol = v;
    }
    if let Some(v) = flags.steps {
        steps = v;
    }
    if let Some(v) = flags.seed {
        seed = v;
    }
    if let Some(v) = &flags.grid {
        grid = parse_grid(v)?;
    }
    if tol <= 0.0 || cluster_tol <= 0.0 {
        return Err(CliError::usage("tolerances must be positive"));
    }
    if steps < 2 {
        return Err(CliError::usage("steps must be at least 2"));
    }
    if grid.0 < 3 {
        return Err(CliError::usage("grid resolution must be at least 3"));
    }
    Ok(Config {
        tol,
        cluster_tol,
        steps,
        seed,
        grid,
        out: flags.out.clone(),
        format: flags.format.unwrap_or(Format::Human),
    })
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T, CliError> {
    s.parse()
        .map_err(|_| CliError::usage(&format!("cannot parse '{s}'")))
}

fn parse_grid(s: &str) -> Result<(usize, usize), CliError> {
    if let Some((a, b)) = s.split_once('x') {
        Ok((parse_num(a)?, parse_num(b)?))
    } else {
        Ok((parse_num(s)?, 0))
    }
}

/// Carries the exit code together with the message.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(msg: &str) -> CliError {
        CliError {
            code: 1,
            message: msg.to_string(),
        }
    }

    fn math(msg: &str) -> CliError {
        CliError {
            code: 2,
            message: msg.to_string(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let code = match &e {
            Error::Io(_) | Error::Parse(_) | Error::InvalidInput(_) | Error::ShapeError(_)
            | Error::BadGrid(_) => 1,
            _ => 2,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn load_pair(path: &Path) -> Result<(SoftPair, Option<pairs::PairMeta>), CliError> {
    let text = spio::read_to_string(path)?;
    Ok(spio::pair_from_str(&text)?)
}

fn emit(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => spio::write_string(p, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn cmd_verify(pair_file: &Path, cfg: &Config) -> Result<(), CliError> {
    let (pair, _) = load_pair(pair_file)?;
    let rep = pairs::check_relations(&pair, cfg.tol)?;
    eprintln!("norm_a       {:.6e}", rep.norm_a);
    eprintln!("norm_b       {:.6e}", rep.norm_b);
    eprintln!("positivity_a {:.6e}", rep.positivity_a);
    eprintln!("positivity_b {:.6e}", rep.positivity_b);
    eprintln!("r1           {:.6e}", rep.r1);
    eprintln!("r2           {:.6e}", rep.r2);
    eprintln!("tol          {:.6e}", rep.tol);
    eprintln!("verdict      {}", if rep.pass { "pass" } else { "fail" });
    if cfg.format == Format::Tabular {
        println!(
            "{:.16e} {:.16e} {:.16e} {:.16e} {:.16e} {:.16e} {}",
            rep.norm_a,
            rep.norm_b,
            rep.positivity_a,
            rep.positivity_b,
            rep.r1,
            rep.r2,
            if rep.pass { "pass" } else { "fail" }
        );
    }
    if rep.pass {
        Ok(())
    } else {
        Err(CliError::math("relations violated"))
    }
}

fn cmd_class(pair_file: &Path, cfg: &Config) -> Result<(), CliError> {
    let (pair, _) = load_pair(pair_file)?;
    let class = reduction::class_of_pair(&pair, cfg.tol)?;
    println!("{class}");
    Ok(())
}

fn cmd_reduce(pair_file: &Path, cfg: &Config) -> Result<(), CliError> {
    let (pair, _) = load_pair(pair_file)?;
    let red = reduction::reduce_to_projections(&pair, cfg.cluster_tol)?;
    let (dev_a, dev_b) = red.reconstruction_deviations(&pair)?;
    eprintln!("common part dimension k = {}", red.k);
    if red.p.dim() == 0 {
        eprintln!("projection part empty");
    } else {
        eprintln!("rank p = {}, rank q = {}", red.rank_p, red.rank_q);
    }
    eprintln!("reconstruction deviations {:.3e} / {:.3e}", dev_a, dev_b);
    println!("k {}", red.k);
    println!("rank_p {}", red.rank_p);
    println!("rank_q {}", red.rank_q);
    println!("class {}", red.class);
    if let Some(prefix) = &cfg.out {
        let base = prefix.to_string_lossy();
        for (suffix, m) in [
            ("c", &red.c),
            ("p", &red.p),
            ("q", &red.q),
            ("frame", &red.frame),
        ] {
            let path = PathBuf::from(format!("{base}.{suffix}.matrix"));
            spio::write_string(&path, &spio::matrix_to_string(m))?;
        }
    }
    Ok(())
}

fn reparam_callable(f: ReparamFn) -> fn(f64) -> f64 {
    match f {
        ReparamFn::Square => |t| t * t,
        ReparamFn::Smoothstep => |t| 3.0 * t * t - 2.0 * t * t * t,
    }
}

fn cmd_homotopy(
    kind: HomotopyKind,
    pair_file: &Path,
    function: ReparamFn,
    cfg: &Config,
) -> Result<(), CliError> {
    let (pair, _) = load_pair(pair_file)?;
    let path: PairPath = match kind {
        HomotopyKind::Flip => homotopy::rotation_flip_path(&pair, cfg.steps)?,
        HomotopyKind::Scale => homotopy::linear_scaling_path(&pair.a, cfg.steps)?,
        HomotopyKind::Reparam => {
            homotopy::reparam_path(&pair, reparam_callable(function), cfg.steps)?
        }
        HomotopyKind::PqScale => universal::scaling_homotopy_pq(&pair, cfg.steps)?,
    };
    let report = homotopy::verify_path(&path, cfg.tol)?;
    let trace = spio::path_trace_to_string(&path, &report)?;
    emit(cfg.out.as_deref(), &trace)?;
    eprintln!(
        "samples {}  worst r1 {:.3e}  worst r2 {:.3e}  step bound {:.3e}",
        path.pairs.len(),
        report.worst_r1,
        report.worst_r2,
        report.step_bound
    );
    if report.pass {
        eprintln!("path certified");
        Ok(())
    } else {
        match report.failing_index {
            Some(i) => eprintln!("certification failed at sample {i}"),
            None => eprintln!("certification failed: class drifts along the path"),
        }
        Err(CliError::math("path certification failed"))
    }
}

fn out_dir(cfg: &Config) -> PathBuf {
    cfg.out.clone().unwrap_or_else(|| PathBuf::from("."))
}

fn cmd_demo_universal(cfg: &Config) -> Result<(), CliError> {
    let grid = universal::uniform_grid(universal::DEFAULT_GRID_POINTS)?;
    let ga = universal::generator_a(&grid)?;
    let gb = universal::generator_b(&grid)?;
    let dir = out_dir(cfg);
    std::fs::create_dir_all(&dir).map_err(Error::Io)?;
    spio::write_string(&dir.join("generator_a.delement"), &spio::delement_to_string(&ga))?;
    spio::write_string(&dir.join("generator_b.delement"), &spio::delement_to_string(&gb))?;
    let ma = universal::check_membership(&ga, 1e-12);
    let mb = universal::check_membership(&gb, 1e-12);
    let worst = universal::generator_pair_worst_residual(&grid)?;
    eprintln!(
        "membership a: {} (residuals {:.3e}/{:.3e}/{:.3e})",
        if ma.pass { "pass" } else { "fail" },
        ma.endpoint_zero,
        ma.endpoint_diagonal,
        ma.corner_confinement
    );
    eprintln!(
        "membership b: {} (residuals {:.3e}/{:.3e}/{:.3e})",
        if mb.pass { "pass" } else { "fail" },
        mb.endpoint_zero,
        mb.endpoint_diagonal,
        mb.corner_confinement
    );
    eprintln!("worst pointwise relation residual {worst:.3e}");
    println!("membership_a {}", if ma.pass { "pass" } else { "fail" });
    println!("membership_b {}", if mb.pass { "pass" } else { "fail" });
    println!("worst_residual {worst:.16e}");
    if ma.pass && mb.pass && worst <= cfg.tol {
        Ok(())
    } else {
        Err(CliError::math("universal demo self-verification failed"))
    }
}

fn cmd_demo_bott(cfg: &Config) -> Result<(), CliError> {
    let (lat, lon) = cfg.grid;
    let grid = SpaceGrid::sphere(lat, if lon == 0 { 2 * lat } else { lon })
        .map_err(CliError::from)?;
    let bott = funcalg::bott_projection(&grid)?;
    let dir = out_dir(cfg);
    std::fs::create_dir_all(&dir).map_err(Error::Io)?;
    spio::write_string(&dir.join("bott.field"), &spio::field_to_string(&bott))?;
    let chern = funcalg::chern_number(&bott)?;
    let chern_complement = funcalg::chern_number(&bott.complement())?;
    eprintln!("Chern number {chern}, complement {chern_complement}");
    println!("chern {chern}");
    println!("chern_complement {chern_complement}");
    if chern == 1 && chern_complement == -1 {
        Ok(())
    } else {
        Err(CliError::math("bott demo self-verification failed"))
    }
}

fn cmd_demo_clutch(cfg: &Config) -> Result<(), CliError> {
    let (lat, lon) = cfg.grid;
    let lat = if lat % 2 == 1 { lat + 1 } else { lat };
    let grid = SpaceGrid::sphere(lat, if lon == 0 { 2 * lat } else { lon })
        .map_err(CliError::from)?;
    // Two projection extensions of the equator data over the northern
    // hemisphere, one positive-contraction extension over the southern.
    let p = funcalg::bott_projection(&grid)?;
    let q = MatrixField::from_fn(&grid, |pt| {
        let [x, y, z] = *pt;
        let mut m = CMatrix::zeros(2);
        m[(0, 0)] = num_complex::Complex64::new(0.5 * (1.0 - z), 0.0);
        m[(0, 1)] = num_complex::Complex64::new(0.5 * x, -0.5 * y);
        m[(1, 0)] = num_complex::Complex64::new(0.5 * x, 0.5 * y);
        m[(1, 1)] = num_complex::Complex64::new(0.5 * (1.0 + z), 0.0);
        m
    });
    let s = MatrixField::from_fn(&grid, |pt| {
        let [x, y, _] = *pt;
        let mut m = CMatrix::zeros(2);
        m[(0, 0)] = num_complex::Complex64::new(0.5, 0.0);
        m[(0, 1)] = num_complex::Complex64::new(0.5 * x, -0.5 * y);
        m[(1, 0)] = num_complex::Complex64::new(0.5 * x, 0.5 * y);
        m[(1, 1)] = num_complex::Complex64::new(0.5, 0.0);
        m
    });
    let fp = funcalg::clutch(&grid, "north", "south", &p, &q, &s, funcalg::DEFAULT_GLUING_TOL)?;
    let rep = funcalg::check_relations_field(&fp, cfg.tol)?;
    let classes = funcalg::pointwise_class(&fp, cfg.tol)?;
    let dir = out_dir(cfg);
    std::fs::create_dir_all(&dir).map_err(Error::Io)?;
    spio::write_string(&dir.join("clutch_a.field"), &spio::field_to_string(&fp.a))?;
    spio::write_string(&dir.join("clutch_b.field"), &spio::field_to_string(&fp.b))?;
    spio::write_string(
        &dir.join("clutch_residuals.csv"),
        &spio::field_residuals_csv(&fp, &rep.per_point),
    )?;
    eprintln!(
        "relations {} (worst r1 {:.3e}, r2 {:.3e})",
        if rep.pass { "pass" } else { "fail" },
        rep.worst_r1,
        rep.worst_r2
    );
    eprintln!("pointwise classes {:?}", classes.per_component);
    println!(
        "relations {}",
        if rep.pass { "pass" } else { "fail" }
    );
    for (comp, class) in classes.per_component.iter().enumerate() {
        println!("class {comp} {class}");
    }
    if rep.pass {
        Ok(())
    } else {
        Err(CliError::math("clutch demo self-verification failed"))
    }
}

fn cmd_gen(n: usize, k: usize, seed: u64, cfg: &Config) -> Result<(), CliError> {
    let (pair, meta) = pairs::random_valid_pair(n, k, seed)?;
    let text = spio::pair_to_string(&pair, Some(&meta));
    emit(cfg.out.as_deref(), &text)?;
    eprintln!(
        "generated n={n} k={k} seed={seed}, class {}",
        meta.class
    );
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = resolve_config(&cli.config)?;
    match &cli.command {
        Command::Verify { pair_file } => cmd_verify(pair_file, &cfg),
        Command::Class { pair_file } => cmd_class(pair_file, &cfg),
        Command::Reduce { pair_file } => cmd_reduce(pair_file, &cfg),
        Command::Homotopy {
            kind,
            pair_file,
            function,
        } => cmd_homotopy(*kind, pair_file, *function, &cfg),
        Command::Demo { name } => match name {
            DemoName::Universal => cmd_demo_universal(&cfg),
            DemoName::Bott => cmd_demo_bott(&cfg),
            DemoName::Clutch => cmd_demo_clutch(&cfg),
        },
        Command::Gen { n, k, seed_arg } => cmd_gen(*n, *k, seed_arg.unwrap_or(cfg.seed), &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
