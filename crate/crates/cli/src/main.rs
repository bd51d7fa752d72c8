use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use divsec::winding::{self, DEFAULT_RADIUS, DEFAULT_SAMPLES};
use divsec::{
    continuity_modulus, evaluate, factor_map, nullhomotopy_witness, phase::phase_portrait, verify_continuity,
    winding_number_auto, ComplexMap, Divisor, Error, Region, Section,
};
use num_complex::Complex64;
use serde_json::json;

#[derive(Parser)]
#[command(name = "divsec", version, about = "Weierstrass-product sections of the divisor map on C minus the positive integers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate f_nu(z) with a truncation certificate.
    Eval {
        #[command(flatten)]
        divisor: DivisorArg,
        /// Evaluation point as RE,IM.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex64,
        /// Last puncture multiplied in; defaults to the largest support index.
        #[arg(long)]
        head: Option<u64>,
    },
    /// Continuity modulus k0 for a divisor, region and tolerance.
    K0 {
        #[command(flatten)]
        divisor: DivisorArg,
        #[command(flatten)]
        region: RegionArg,
        #[arg(long)]
        eps: f64,
    },
    /// Randomized check of the continuity certificate.
    VerifyContinuity {
        #[command(flatten)]
        divisor: DivisorArg,
        #[command(flatten)]
        region: RegionArg,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Winding number of f_nu about puncture k.
    Winding {
        #[command(flatten)]
        divisor: DivisorArg,
        #[arg(long)]
        k: u64,
    },
    /// Recover the divisor of f_nu and sample the remainder f / f_divisor.
    Factor {
        #[command(flatten)]
        divisor: DivisorArg,
        /// Largest puncture examined.
        #[arg(long, default_value_t = 25)]
        up_to: u64,
        /// Region for the remainder grid; defaults to a strip around the punctures.
        #[arg(long)]
        region: Option<PathBuf>,
        /// Divisor JSON output; the remainder grid goes to <out>.remainder.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Phase portrait of f_nu as a binary PPM.
    PhasePlot {
        #[command(flatten)]
        divisor: DivisorArg,
        #[command(flatten)]
        region: RegionArg,
        #[arg(long, default_value_t = 512)]
        resolution: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct DivisorArg {
    /// Divisor JSON: {"support": {"1": 3, "5": -2}}
    #[arg(long)]
    divisor: PathBuf,
}

#[derive(Args)]
struct RegionArg {
    /// Region JSON: {"pieces": [{"disk": {...}}, {"rect": {...}}], "puncture_margin": 0.2}
    #[arg(long)]
    region: PathBuf,
}

enum Failure {
    Verification(String),
    Input(String),
    Numerical(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Input(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::PoleAtEvaluationPoint { .. }
            | Error::ContourThroughZero { .. }
            | Error::AliasedContour { .. }
            | Error::AtPuncture { .. }
            | Error::Unrepresentable { .. }
            | Error::DegenerateInput(_) => Failure::Numerical(e.to_string()),
            Error::InvalidHead { .. }
            | Error::DegenerateRegion(_)
            | Error::RegionMeetsPole { .. }
            | Error::InvalidArgument(_)
            | Error::Parse(_) => Failure::Input(e.to_string()),
        }
    }
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected RE,IM, got {s:?}"))?;
    let re: f64 = re.trim().parse().map_err(|e| format!("bad real part: {e}"))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("bad imaginary part: {e}"))?;
    Ok(Complex64::new(re, im))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_divisor(arg: &DivisorArg) -> Result<Divisor, Failure> {
    Divisor::from_json(&read(&arg.divisor)?).map_err(|e| Failure::Input(format!("{}: {e}", arg.divisor.display())))
}

fn load_region(path: &Path) -> Result<Region, Failure> {
    Region::from_json(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn remainder_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".remainder.json");
    PathBuf::from(s)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Eval { divisor, z, head } => {
            let nu = load_divisor(&divisor)?;
            let head = head.unwrap_or_else(|| nu.max_index().unwrap_or(1));
            println!("{}", evaluate(&nu, z, head)?.to_json());
        }
        Command::K0 { divisor, region, eps } => {
            let nu = load_divisor(&divisor)?;
            let region = load_region(&region.region)?;
            println!("{}", continuity_modulus(&nu, &region, eps)?.to_json());
        }
        Command::VerifyContinuity { divisor, region, eps, trials, seed } => {
            let nu = load_divisor(&divisor)?;
            let region = load_region(&region.region)?;
            let report = verify_continuity(&nu, &region, eps, trials, seed)?;
            print!("{}", report.render());
            if !report.passed() {
                return Err(Failure::Verification("observed deviation reached eps".into()));
            }
        }
        Command::Winding { divisor, k } => {
            if k == 0 {
                return Err(Failure::Input("--k must be >= 1".into()));
            }
            let f = Section::new(load_divisor(&divisor)?);
            let cert = winding_number_auto(&f, k, DEFAULT_RADIUS, DEFAULT_SAMPLES)?;
            println!(
                "{}",
                json!({
                    "k": k,
                    "winding": cert.winding,
                    "residual": cert.residual,
                    "valid": cert.is_valid(),
                    "contour": {
                        "center": [cert.contour.center.re, cert.contour.center.im],
                        "radius": cert.contour.radius,
                        "samples": cert.contour.samples,
                    },
                })
            );
        }
        Command::Factor { divisor, up_to, region, out } => {
            let f = Section::new(load_divisor(&divisor)?);
            let fac = factor_map::<f64, _>(&f, up_to)?;
            let region = match region {
                Some(p) => load_region(&p)?,
                None => Region::rect(Complex64::new(0.5, -0.5), Complex64::new(up_to as f64 + 0.5, 0.5))?,
            };
            let points = region.grid(0.25);
            let samples = points
                .iter()
                .filter_map(|&z| fac.remainder.eval(z).ok().map(|g| [z.re, z.im, g.re, g.im]))
                .filter(|p| p.iter().all(|x| x.is_finite()))
                .collect::<Vec<_>>();
            let loops = winding::puncture_loops(up_to, DEFAULT_RADIUS, DEFAULT_SAMPLES);
            let witness = nullhomotopy_witness(&fac.remainder, &loops)?;

            write(&out, format!("{}\n", fac.divisor.to_json()).as_bytes())?;
            let grid = json!({ "step": 0.25, "samples": samples, "loop_increments": witness.increments });
            write(&remainder_path(&out), format!("{grid}\n").as_bytes())?;
            println!(
                "{}",
                json!({ "divisor": serde_json::from_str::<serde_json::Value>(&fac.divisor.to_json()).unwrap(),
                        "nullhomotopic": witness.nullhomotopic })
            );
        }
        Command::PhasePlot { divisor, region, resolution, out } => {
            let nu = load_divisor(&divisor)?;
            let region = load_region(&region.region)?;
            write(&out, &phase_portrait(&nu, &region, resolution)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Verification(m) => eprintln!("verification failed: {m}"),
                Failure::Input(m) => eprintln!("input error: {m}"),
                Failure::Numerical(m) => eprintln!("numerical error: {m}"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}
