use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gcdm::descriptors::{delta_h, delta_u, descriptor_set, energy};
use gcdm::oracle::{ensemble_of, purity, FockSpaceSpec};
use gcdm::scan::{scan, write_scan_csv};
use gcdm::simplex::{
    assemble_state, classify, mean_particle_number, weights_from_omega_n, weights_from_reference,
    ChargeFraction, DomainSpec, ReferenceFraction, WeightVector, DEFAULT_CLASSIFY_TOL,
};
use gcdm::species::{parse_catalog, to_domain, CatalogFormat};
use gcdm::verify::{self, VerifyConfig};
use gcdm::Exec;

#[derive(Debug, Parser)]
#[command(name = "gcdm", version, about = "Three-state fractional-charge domain model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the three sector weights and the region of a point.
    Weights(PointArgs),
    /// Print the mixed state of a catalog species at a point.
    State(SpeciesPointArgs),
    /// Print the energy of a catalog species at a point.
    Energy(SpeciesPointArgs),
    /// Print the reactivity descriptors of a catalog species.
    Descriptors(SpeciesArgs),
    /// Print the region label of a point.
    Classify(PointArgs),
    /// Evaluate a grid over the diagram and write it as CSV.
    Scan(ScanArgs),
    /// Run the invariant suite over a catalog and synthetic domains.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct CatalogArgs {
    /// Species catalog (JSON or CSV).
    #[arg(long)]
    domain: PathBuf,
    /// Catalog format; guessed from the extension when omitted.
    #[arg(long)]
    format: Option<CatalogFormat>,
}

#[derive(Debug, Args)]
struct SpeciesArgs {
    #[command(flatten)]
    catalog: CatalogArgs,
    /// Species label within the catalog.
    #[arg(long)]
    label: String,
}

#[derive(Debug, Args)]
struct Coordinates {
    /// Normalized charge nu/q.
    #[arg(long, allow_negative_numbers = true, requires = "omega_n", conflicts_with_all = ["nu", "nu0"])]
    x: Option<f64>,
    /// Neutral-sector weight.
    #[arg(long, requires = "x")]
    omega_n: Option<f64>,
    /// Transferred charge.
    #[arg(long, allow_negative_numbers = true, requires = "nu0")]
    nu: Option<f64>,
    /// Reference (edge) charge of the horizontal line.
    #[arg(long, allow_negative_numbers = true, requires = "nu")]
    nu0: Option<f64>,
}

#[derive(Debug, Args)]
struct PointArgs {
    #[command(flatten)]
    coords: Coordinates,
    /// Transfer block size used with --nu/--nu0.
    #[arg(long, default_value_t = 1)]
    q: u32,
}

#[derive(Debug, Args)]
struct SpeciesPointArgs {
    #[command(flatten)]
    species: SpeciesArgs,
    #[command(flatten)]
    coords: Coordinates,
    /// Second reference charge; prints the energy change from --nu0.
    #[arg(long, allow_negative_numbers = true, requires = "nu0")]
    nu0_prime: Option<f64>,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[command(flatten)]
    species: SpeciesArgs,
    /// Intervals per axis.
    #[arg(long, default_value_t = 200)]
    grid: usize,
    /// Output file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Species catalog (JSON or CSV); synthetic domains only when omitted.
    #[arg(long)]
    domain: Option<PathBuf>,
    #[arg(long)]
    format: Option<CatalogFormat>,
    /// Number of synthetic domains added to the pool.
    #[arg(long, default_value_t = 100)]
    synthetic: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// A failure mapped onto the exit-code contract.
#[derive(Debug)]
enum Failure {
    Io(String),
    Invalid(String),
    Verify,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Verify => 3,
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure::Invalid(e.to_string())
}

fn io_failure(e: impl std::fmt::Display) -> Failure {
    Failure::Io(e.to_string())
}

fn load_catalog(path: &Path, format: Option<CatalogFormat>) -> Result<Vec<DomainSpec>, Failure> {
    let file = File::open(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let format = format.unwrap_or_else(|| CatalogFormat::from_path(path));
    let records = parse_catalog(BufReader::new(file), format)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    records
        .iter()
        .map(|r| to_domain(r).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))))
        .collect()
}

fn find_species(args: &SpeciesArgs) -> Result<DomainSpec, Failure> {
    load_catalog(&args.catalog.domain, args.catalog.format)?
        .into_iter()
        .find(|d| d.label() == args.label)
        .ok_or_else(|| Failure::Invalid(format!("no species labelled `{}`", args.label)))
}

fn resolve_weights(coords: &Coordinates, q: u32) -> Result<WeightVector, Failure> {
    match (coords.x, coords.omega_n, coords.nu, coords.nu0) {
        (Some(x), Some(w), None, None) => weights_from_omega_n(x, w).map_err(invalid),
        (None, None, Some(nu), Some(nu0)) => weights_from_reference(
            ChargeFraction::new(nu, q).map_err(invalid)?,
            ReferenceFraction::new(nu0, q).map_err(invalid)?,
        )
        .map_err(invalid),
        _ => Err(Failure::Invalid(
            "give exactly one of --x/--omega-n or --nu/--nu0".into(),
        )),
    }
}

fn region_of(w: WeightVector) -> gcdm::Region {
    classify(w.point(), DEFAULT_CLASSIFY_TOL)
}

fn cmd_point(args: &PointArgs, with_weights: bool, out: &mut impl Write) -> Result<(), Failure> {
    let w = resolve_weights(&args.coords, args.q)?;
    if with_weights {
        writeln!(
            out,
            "{:.6} {:.6} {:.6} {}",
            w.w_minus(),
            w.w_zero(),
            w.w_plus(),
            region_of(w)
        )
        .map_err(io_failure)
    } else {
        writeln!(out, "{}", region_of(w)).map_err(io_failure)
    }
}

fn cmd_state(args: &SpeciesPointArgs, out: &mut impl Write) -> Result<(), Failure> {
    let domain = find_species(&args.species)?;
    let w = resolve_weights(&args.coords, domain.q())?;
    let state = assemble_state(&domain, w);
    let space = FockSpaceSpec::three_state(&domain, 1).map_err(invalid)?;
    let matrix = ensemble_of(&state, &space).map_err(invalid)?;
    let text = (|| -> io::Result<()> {
        for (m, weight) in state.sectors() {
            writeln!(out, "M={m} weight={weight:.6}")?;
        }
        writeln!(out, "mean_particle_number={:.6}", mean_particle_number(&domain, w))?;
        writeln!(out, "purity={:.6}", purity(&matrix))?;
        writeln!(out, "region={}", region_of(w))
    })();
    text.map_err(io_failure)
}

fn cmd_energy(args: &SpeciesPointArgs, out: &mut impl Write) -> Result<(), Failure> {
    let domain = find_species(&args.species)?;
    let q = domain.q();
    let w = resolve_weights(&args.coords, q)?;
    writeln!(out, "energy={:.6}", energy(&domain, w)).map_err(io_failure)?;
    if let (Some(nu), Some(nu0)) = (args.coords.nu, args.coords.nu0) {
        let nu = ChargeFraction::new(nu, q).map_err(invalid)?;
        let nu0_ref = ReferenceFraction::new(nu0, q).map_err(invalid)?;
        let dh = delta_h(&domain, nu, nu0_ref).map_err(invalid)?;
        writeln!(out, "delta_h={dh:.6}").map_err(io_failure)?;
        if let Some(p) = args.nu0_prime {
            let prime = ReferenceFraction::new(p, q).map_err(invalid)?;
            let du = delta_u(&domain, nu, nu0_ref, prime).map_err(invalid)?;
            writeln!(out, "delta_u={du:.6}").map_err(io_failure)?;
        }
    }
    Ok(())
}

fn cmd_descriptors(args: &SpeciesArgs, out: &mut impl Write) -> Result<(), Failure> {
    let domain = find_species(args)?;
    let (d, warning) = descriptor_set(&domain);
    writeln!(
        out,
        "I_q={:.6} A_q={:.6} mu0={:.6} eta0={:.6} Ebar={:.6}",
        d.i_q, d.a_q, d.mu0, d.eta0, d.e_bar
    )
    .map_err(io_failure)?;
    if let Some(w) = warning {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn cmd_scan(args: &ScanArgs, out: &mut impl Write) -> Result<(), Failure> {
    let domain = find_species(&args.species)?;
    let rows = scan(&domain, args.grid, Exec::default()).map_err(invalid)?;
    match &args.output {
        None => write_scan_csv(&rows, out).map_err(io_failure),
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let tmp = tempfile::NamedTempFile::new_in(dir)
                .map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
            let mut writer = BufWriter::new(tmp);
            write_scan_csv(&rows, &mut writer).map_err(io_failure)?;
            let tmp = writer.into_inner().map_err(|e| io_failure(e.error()))?;
            tmp.persist(path)
                .map_err(|e| Failure::Io(format!("{}: {}", path.display(), e.error)))?;
            Ok(())
        }
    }
}

fn cmd_verify(args: &VerifyArgs, out: &mut impl Write) -> Result<(), Failure> {
    let catalog = match &args.domain {
        Some(path) => load_catalog(path, args.format)?,
        None => Vec::new(),
    };
    let config = VerifyConfig {
        seed: args.seed,
        synthetic: args.synthetic,
        ..VerifyConfig::default()
    };
    let report = verify::run(&catalog, &config, Exec::default());
    out.write_all(report.render().as_bytes()).map_err(io_failure)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match &cli.command {
        Command::Weights(a) => cmd_point(a, true, &mut out),
        Command::Classify(a) => cmd_point(a, false, &mut out),
        Command::State(a) => cmd_state(a, &mut out),
        Command::Energy(a) => cmd_energy(a, &mut out),
        Command::Descriptors(a) => cmd_descriptors(a, &mut out),
        Command::Scan(a) => cmd_scan(a, &mut out),
        Command::Verify(a) => cmd_verify(a, &mut out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Io(m) | Failure::Invalid(m) => eprintln!("error: {m}"),
                Failure::Verify => eprintln!("error: verification failed"),
            }
            ExitCode::from(failure.code())
        }
    }
}
