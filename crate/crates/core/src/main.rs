//! Command-line driver: single points, dissociation scans, two-fragment
//! scans and FCIDUMP ingestion, with CSV output for the scan modes.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use entcorr::entanglement::EntropyReport;
use entcorr::error::Error;
use entcorr::geom_basis::{parse_xyz, BasisName, Molecule, ANGSTROM_TO_BOHR};
use entcorr::scan::{
    fcidump_report, read_fcidump, run_dissociation_scan, run_fragment_scan, single_point,
    write_csv, MethodSet, ScanConfig, ScanMode, ScanRow,
};
use entcorr::scf::ScfOptions;

#[derive(Parser)]
#[command(
    name = "entcorr",
    about = "Correlation energy and entanglement entropy for small molecules",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Basis set: STO-3G, 3-21G or 6-31G.
    #[arg(long, default_value = "sto-3g")]
    basis: String,
    /// Comma list drawn from rhf, uhf, fci, cisd.
    #[arg(long, default_value = "rhf,uhf,fci")]
    methods: String,
    /// SCF energy convergence threshold (hartree).
    #[arg(long, default_value_t = 1e-10)]
    e_tol: f64,
    /// SCF density/gradient convergence threshold.
    #[arg(long, default_value_t = 1e-8)]
    d_tol: f64,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    /// Reserved; the pipeline is deterministic and takes no randomness.
    #[arg(long)]
    seed: Option<u64>,
}

impl CommonOpts {
    fn scf(&self) -> ScfOptions {
        ScfOptions {
            e_tol: self.e_tol,
            d_tol: self.d_tol,
            max_iter: self.max_iter,
            ..ScfOptions::default()
        }
    }
}

#[derive(Args)]
struct GridOpts {
    /// Smallest separation (with --rmax/--steps).
    #[arg(long)]
    rmin: Option<f64>,
    #[arg(long)]
    rmax: Option<f64>,
    /// Number of grid points between rmin and rmax, inclusive.
    #[arg(long)]
    steps: Option<usize>,
    /// Explicit comma list of separations, alternative to rmin/rmax/steps.
    #[arg(long)]
    rlist: Option<String>,
    /// Interpret separations as ångström instead of bohr.
    #[arg(long)]
    angstrom: bool,
    /// Exit with code 2 if any scan point fails to converge.
    #[arg(long)]
    strict: bool,
    /// Output CSV path.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// One geometry: print the full energy/entropy report.
    Single {
        /// XYZ geometry file (coordinates in ångström).
        #[arg(long)]
        geometry: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Dissociation scan of a diatomic over internuclear distance.
    Scan {
        #[arg(long)]
        geometry: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        grid: GridOpts,
    },
    /// Two identical fragments: face-to-face separation along z plus
    /// rotation of the second fragment about z through its centroid.
    Fragments {
        /// XYZ file of one fragment, laid out in the xy plane.
        #[arg(long)]
        geometry: PathBuf,
        /// Comma list of rotation angles in degrees.
        #[arg(long, default_value = "0")]
        thetalist: String,
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        grid: GridOpts,
    },
    /// Ingest an FCIDUMP file and print CI energies and entropies.
    Fcidump {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn parse_float_list(s: &str, what: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidConfig(format!("cannot parse {what} entry '{t}'")))
        })
        .collect()
}

fn r_values(grid: &GridOpts) -> Result<Vec<f64>, Error> {
    let values = match (&grid.rlist, grid.rmin, grid.rmax, grid.steps) {
        (Some(list), None, None, None) => parse_float_list(list, "rlist")?,
        (None, Some(lo), Some(hi), Some(steps)) => {
            if steps == 0 {
                return Err(Error::InvalidConfig("steps must be positive".into()));
            }
            if steps == 1 {
                vec![lo]
            } else {
                (0..steps)
                    .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
                    .collect()
            }
        }
        _ => {
            return Err(Error::InvalidConfig(
                "specify either --rlist or all of --rmin/--rmax/--steps".into(),
            ))
        }
    };
    Ok(if grid.angstrom {
        values.iter().map(|r| r * ANGSTROM_TO_BOHR).collect()
    } else {
        values
    })
}

fn load_geometry(path: &PathBuf) -> Result<Molecule, Error> {
    let text = fs::read_to_string(path)?;
    parse_xyz(&text)
}

fn print_report(report: &EntropyReport) {
    println!("basis        : {}", report.basis);
    println!("methods      : {}", report.methods);
    let field = |name: &str, v: Option<f64>| match v {
        Some(x) => println!("{name:<13}: {x:.12}"),
        None => println!("{name:<13}: -"),
    };
    field("e_rhf", report.e_hf_rhf);
    field("e_uhf", report.e_hf_uhf);
    field("e_fci", report.e_fci);
    field("e_c_rhf", report.e_c_rhf);
    field("e_c_uhf", report.e_c_uhf);
    field("s_rho1_cisd", report.s_rho1_cisd);
    field("s_nso", report.s_nso);
    field("<S^2>", report.spin_contamination);
    println!("converged    : {}", report.all_converged());
}

fn finish_scan(rows: &[ScanRow], output: &PathBuf, strict: bool) -> Result<u8, Error> {
    write_csv(rows, output)?;
    println!("wrote {} rows to {}", rows.len(), output.display());
    for row in rows {
        if let Some(note) = &row.note {
            eprintln!("warning: point r={} failed: {note}", row.r);
        }
    }
    if strict && rows.iter().any(|r| !r.converged) {
        eprintln!("error: at least one scan point did not converge (--strict)");
        return Ok(2);
    }
    Ok(0)
}

fn run() -> Result<u8, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Single { geometry, common } => {
            let mol = load_geometry(&geometry)?;
            let methods = MethodSet::parse(&common.methods)?;
            let basis = BasisName::parse(&common.basis)?;
            let report = single_point(&mol, basis, &methods, &common.scf())?;
            print_report(&report);
            Ok(0)
        }
        Command::Scan {
            geometry,
            common,
            grid,
        } => {
            let cfg = ScanConfig {
                mode: ScanMode::Dissociation,
                template: load_geometry(&geometry)?,
                fragment_b: None,
                basis: BasisName::parse(&common.basis)?,
                r_values: r_values(&grid)?,
                theta_values: vec![],
                methods: MethodSet::parse(&common.methods)?,
                scf: common.scf(),
                output_path: Some(grid.output.clone()),
            };
            let rows = run_dissociation_scan(&cfg)?;
            finish_scan(&rows, &grid.output, grid.strict)
        }
        Command::Fragments {
            geometry,
            thetalist,
            common,
            grid,
        } => {
            let cfg = ScanConfig {
                mode: ScanMode::Fragments,
                template: load_geometry(&geometry)?,
                fragment_b: None,
                basis: BasisName::parse(&common.basis)?,
                r_values: r_values(&grid)?,
                theta_values: parse_float_list(&thetalist, "thetalist")?,
                methods: MethodSet::parse(&common.methods)?,
                scf: common.scf(),
                output_path: Some(grid.output.clone()),
            };
            let rows = run_fragment_scan(&cfg)?;
            finish_scan(&rows, &grid.output, grid.strict)
        }
        Command::Fcidump { input, common } => {
            let methods = MethodSet::parse(&common.methods)?;
            let (mo, meta) = read_fcidump(&input)?;
            println!(
                "norb={} nelec={} ms2={} core={:.12}",
                meta.n_orb, meta.n_elec, meta.ms2, meta.core_energy
            );
            let report = fcidump_report(&mo, &meta, &methods)?;
            print_report(&report);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
