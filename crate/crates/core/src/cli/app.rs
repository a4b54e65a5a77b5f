//! Argument parsing and command dispatch for `pwlinv`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use super::builtin;
use super::mapfile::{load_map, load_map_str, write_map_string, LoadError};
use super::report::{analyze, inverse_pieces};
use super::svg::{render_svg, DEFAULT_SAMPLES};
use crate::halfspace::random_halfspace_map;
use crate::nonsmooth::clarke_hull_min_det;
use crate::pwlmap::{random_map, MapError, PwlMap2, VerdictTag};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NOT_INVERTIBLE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "pwlinv",
    version,
    about = "Decide invertibility of planar piecewise linear maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Degree, verdict, witness or inverse, and the Clarke hull minimum.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Write the inverse map as a map file.
    Invert {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plot the image of the unit circle as SVG.
    Plot {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        log_radial: bool,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Analyze a builtin example: pie5, pie4-nonconvex or clarke4.
    Example {
        name: String,
        #[arg(long)]
        json: bool,
        /// Also write the example's map file here.
        #[arg(long)]
        write: Option<PathBuf>,
    },
    /// Print a random map file.
    Random {
        #[arg(long)]
        cones: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        force_invertible: bool,
    },
    /// Minimum determinant over the convex hull of the map's matrices.
    Clarke {
        file: PathBuf,
        #[arg(long, default_value_t = crate::nonsmooth::DEFAULT_RESOLUTION)]
        resolution: usize,
    },
    /// Decide a random two-piece map in k dimensions.
    Halfspace {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        let code = match e {
            LoadError::Validation(MapError::SingularMatrix | MapError::Degenerate(_)) => {
                EXIT_NOT_INVERTIBLE
            }
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<MapError> for Failure {
    fn from(e: MapError) -> Self {
        let code = match e {
            MapError::InvalidArgument(_) | MapError::GenerationFailed { .. } => EXIT_INVALID,
            _ => EXIT_FAILURE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn io(e: std::io::Error) -> Failure {
    fail(EXIT_FAILURE, e.to_string())
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "map".into())
}

/// Runs the tool on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn verdict_code(tag: VerdictTag) -> i32 {
    match tag {
        VerdictTag::Invertible => EXIT_OK,
        VerdictTag::NonInjective | VerdictTag::Degenerate => EXIT_NOT_INVERTIBLE,
    }
}

fn report(g: &PwlMap2, name: &str, json: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let r = analyze(g, name)?;
    if json {
        writeln!(out, "{}", r.to_json()).map_err(io)?;
    } else {
        write!(out, "{}", r.to_text()).map_err(io)?;
    }
    Ok(verdict_code(r.verdict))
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Analyze { file, json } => {
            let g = load_map(&file)?;
            report(&g, &file_stem(&file), json, out)
        }
        Command::Example { name, json, write } => {
            let src = builtin::source(&name).ok_or_else(|| {
                fail(
                    EXIT_USAGE,
                    format!(
                        "unknown example {name:?}; available: {}",
                        builtin::NAMES.join(", ")
                    ),
                )
            })?;
            let g = load_map_str(src)?;
            if let Some(path) = write {
                std::fs::write(&path, src).map_err(io)?;
            }
            report(&g, &name, json, out)
        }
        Command::Invert { file, out: target } => {
            let g = load_map(&file)?;
            let v = g.decide()?;
            let Some(inv) = v.inverse else {
                return Err(fail(
                    EXIT_NOT_INVERTIBLE,
                    format!(
                        "map is not invertible ({:?}, degree {})",
                        v.tag,
                        v.degree.map_or("undefined".into(), |d| d.to_string())
                    ),
                ));
            };
            let text = write_map_string(&inv, &format!("{}-inverse", file_stem(&file)));
            match target {
                Some(path) => {
                    std::fs::write(&path, text + "\n").map_err(io)?;
                    writeln!(
                        out,
                        "wrote inverse with {} pieces to {}",
                        inverse_pieces(&inv).len(),
                        path.display()
                    )
                    .map_err(io)?;
                }
                None => writeln!(out, "{text}").map_err(io)?,
            }
            Ok(EXIT_OK)
        }
        Command::Plot {
            file,
            out: target,
            log_radial,
            samples,
        } => {
            let g = load_map(&file)?;
            render_svg(&g, &target, log_radial, samples)
                .map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
            writeln!(out, "wrote {}", target.display()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Random {
            cones,
            seed,
            force_invertible,
        } => {
            let g = random_map(cones, seed, force_invertible)?;
            let name = format!("random-n{cones}-seed{seed}");
            writeln!(out, "{}", write_map_string(&g, &name)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Clarke { file, resolution } => {
            let g = load_map(&file)?;
            let h = clarke_hull_min_det(&g.matrices(), resolution)
                .map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
            let weights: Vec<String> = h.weights.iter().map(|w| format!("{w:.6}")).collect();
            writeln!(out, "min det: {:.12}", h.min_det).map_err(io)?;
            writeln!(out, "weights: ({})", weights.join(", ")).map_err(io)?;
            writeln!(
                out,
                "hull {}",
                if h.min_det > 0.0 {
                    "is nonsingular"
                } else {
                    "contains singular matrices"
                }
            )
            .map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Halfspace { dim, seed, json } => {
            let h =
                random_halfspace_map(dim, seed).map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
            let v = h.decide();
            if json {
                let text = serde_json::to_string_pretty(&v).expect("verdicts serialize");
                writeln!(out, "{text}").map_err(io)?;
            } else {
                writeln!(out, "k: {dim}").map_err(io)?;
                writeln!(out, "det A: {:.9}", v.det_a).map_err(io)?;
                writeln!(out, "det B: {:.9}", v.det_b).map_err(io)?;
                if let Some(g) = v.gamma_k {
                    writeln!(out, "gamma_k: {g:.9}").map_err(io)?;
                }
                writeln!(out, "verdict: {:?}", v.tag).map_err(io)?;
                if let Some(w) = &v.witness {
                    writeln!(
                        out,
                        "witness: x1 = {:?}, x2 = {:?}, image = {:?}",
                        w.x1, w.x2, w.image
                    )
                    .map_err(io)?;
                }
            }
            Ok(verdict_code(v.tag))
        }
    }
}
