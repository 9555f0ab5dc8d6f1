//! `polylinkage`: compile polynomial maps into linkages and check them.

mod model;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use polylinkage::compiler::{compile, curve_tracer, parse_region, realize_set, Mode};
use polylinkage::expr::{format_complex, infer_arity, parse_complex, parse_poly};
use polylinkage::json::LinkageDoc;
use polylinkage::solver::{probe_square_degeneracy_with, solve_from_random_seeds, trace_csv, trace_curve, SquareComponent, SEED_SPREAD};
use polylinkage::svg::render_svg;
use polylinkage::{Configuration, PlanePoint};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use model::{parse_interval, rebuild, sample_disc, Built};

#[derive(Parser)]
#[command(name = "polylinkage", version, about = "Compile polynomial maps into planar linkages and verify them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a polynomial into linkage JSON.
    Compile {
        #[arg(long)]
        poly: String,
        /// Input discs as `c:r;c:r;...`, one per variable.
        #[arg(long, required_unless_present = "curve")]
        domain: Option<String>,
        #[arg(long, default_value = "cabled")]
        mode: Mode,
        /// Realize the zero set instead: the first K outputs are equalities, the rest `>= 0`.
        #[arg(long, value_name = "K", conflicts_with = "curve")]
        equalities: Option<usize>,
        /// Build a curve tracer for the one-variable polynomial on the interval `a:b`.
        #[arg(long, value_name = "A:B")]
        curve: Option<String>,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Evaluate a compiled linkage at an input tuple.
    Eval {
        file: PathBuf,
        /// Comma-separated complex inputs.
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Trace a curve linkage around its drive circle.
    Trace {
        file: PathBuf,
        #[arg(long, default_value_t = 360)]
        steps: usize,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
        /// Also draw the linkage with the traced curve.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Check a linkage file and print a pass/fail report.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Report on the three components of the square linkage.
    ProbeSquare {
        #[arg(long, default_value_t = 1.0)]
        side: f64,
        /// Newton starts per degenerate component.
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Draw a linkage as SVG.
    ExportSvg {
        file: PathBuf,
        /// Input tuple to draw at (defaults to the domain centers).
        #[arg(long)]
        input: Option<String>,
        /// Trace CSV to overlay.
        #[arg(long, value_name = "CSV")]
        overlay: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
}

/// Bad flag values; reported with exit status 2.
#[derive(Debug)]
struct FlagError(String);

impl std::fmt::Display for FlagError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for FlagError {}

fn flag<T, E: std::fmt::Display>(r: Result<T, E>, what: &str) -> Result<T> {
    r.map_err(|e| FlagError(format!("{what}: {e}")).into())
}

fn seed() -> Result<u64> {
    match std::env::var("LINKAGE_SEED") {
        Ok(s) => flag(s.trim().parse::<u64>(), "LINKAGE_SEED"),
        Err(_) => Ok(0),
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<LinkageDoc> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    LinkageDoc::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_inputs(text: &str) -> Result<Vec<PlanePoint>> {
    text.split(',')
        .map(|s| flag(parse_complex(s.trim()), "--input"))
        .collect()
}

fn cmd_compile(
    poly: &str,
    domain: Option<&str>,
    mode: Mode,
    equalities: Option<usize>,
    curve: Option<&str>,
    output: Option<&Path>,
) -> Result<()> {
    let built = if let Some(iv) = curve {
        let (a, b) = flag(parse_interval(iv), "--curve")?;
        if !(a < b) {
            bail!(FlagError(format!("--curve: need a < b, got {a}:{b}")));
        }
        let alpha = flag(parse_poly(poly, 1), "--poly")?;
        Built::Curve(curve_tracer(&alpha, a, b, mode)?)
    } else {
        let region = flag(parse_region(domain.unwrap_or_default()), "--domain")?;
        if region.len() < infer_arity(poly) {
            bail!(FlagError(format!(
                "--domain has {} discs but the polynomial uses {} variables",
                region.len(),
                infer_arity(poly)
            )));
        }
        let expr = flag(parse_poly(poly, region.len()), "--poly")?;
        match equalities {
            Some(k) => {
                if k > expr.outputs.len() {
                    bail!(FlagError(format!("--equalities {k} exceeds the {} outputs", expr.outputs.len())));
                }
                let s = seed()?;
                Built::Set(realize_set(&expr, k, &region, mode, s)?, s)
            }
            None => Built::Map(compile(&expr, &region, mode)?),
        }
    };
    write_out(output, &(built.doc().to_json_pretty() + "\n"))
}

fn cmd_eval(path: &Path, input: &str, tol: f64) -> Result<()> {
    let z = parse_inputs(input)?;
    let doc = load(path)?;
    let built = rebuild(&doc)?;
    let g = built.gadget();
    if z.len() != g.inputs.len() {
        bail!(FlagError(format!("--input has {} values, linkage takes {}", z.len(), g.inputs.len())));
    }
    if !g.domain.contains(&z) {
        bail!("input lies outside the linkage domain");
    }
    let limit = if built.compiled().mode == Mode::Cabled { 1 } else { 64 };
    let gate = tol.max(built.compiled().tolerance());
    let mut printed = 0;
    for (_, conf) in g.branches_at(&z, limit)? {
        if g.linkage.residual(&conf)? > gate {
            continue;
        }
        let vals = g.output_positions(&conf).ok_or_else(|| anyhow!("configuration misses an output"))?;
        let line: Vec<String> = vals.into_iter().map(format_complex).collect();
        println!("{}", line.join(", "));
        printed += 1;
    }
    if printed == 0 {
        bail!("no configuration over this input");
    }
    Ok(())
}

/// A configuration of the document's linkage to draw.
fn drawing_conf(doc: &LinkageDoc, input: Option<&str>, tol: f64) -> Result<Configuration> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed()?);
    let z = input.map(parse_inputs).transpose()?;
    let Ok(built) = rebuild(doc) else {
        return solve_from_random_seeds(&doc.linkage, 100, tol, 200, &mut rng)
            .into_iter()
            .next()
            .ok_or_else(|| anyhow!("no configuration found to draw"));
    };
    let c = built.compiled();
    let gate = tol.max(c.tolerance());
    let with_anchors = |mut conf: Configuration| {
        for (v, p) in built.linkage().anchors() {
            if !conf.contains(v) {
                conf.insert(v.clone(), p);
            }
        }
        conf
    };
    let attempt = |z: &[PlanePoint]| -> Option<Configuration> {
        let (_, conf) = c.gadget.first_branch(z).ok()??;
        let conf = with_anchors(conf);
        (built.linkage().residual(&conf).ok()? <= gate).then_some(conf)
    };
    if let Built::Curve(t) = &built {
        let z = z.unwrap_or_else(|| vec![t.input_at(0.0)]);
        return attempt(&z).ok_or_else(|| anyhow!("input is not on the drive circle"));
    }
    if let Some(z) = z {
        return attempt(&z).ok_or_else(|| anyhow!("no configuration over the given input"));
    }
    let centers: Vec<PlanePoint> = c.region.iter().map(|d| d.center).collect();
    std::iter::once(centers)
        .chain((0..10_000).map(|_| c.region.iter().map(|d| sample_disc(d, &mut rng)).collect()))
        .find_map(|z| attempt(&z))
        .ok_or_else(|| anyhow!("no configuration found to draw"))
}

fn read_overlay(path: &Path) -> Result<Vec<PlanePoint>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap_or_default().split(',').collect();
    let col = |name: &str| header.iter().position(|h| h.trim() == name);
    let (re, im) = col("out_re")
        .zip(col("out_im"))
        .ok_or_else(|| anyhow!("{} has no out_re/out_im columns", path.display()))?;
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            let get = |k: usize| -> Result<f64> {
                f.get(k)
                    .ok_or_else(|| anyhow!("short CSV row {l:?}"))?
                    .trim()
                    .parse()
                    .with_context(|| format!("bad number in {l:?}"))
            };
            Ok(PlanePoint::new(get(re)?, get(im)?))
        })
        .collect()
}

fn cmd_trace(path: &Path, steps: usize, output: Option<&Path>, svg: Option<&Path>) -> Result<()> {
    if steps < 2 {
        bail!(FlagError(format!("--steps must be at least 2, got {steps}")));
    }
    let doc = load(path)?;
    let Built::Curve(t) = rebuild(&doc)? else {
        bail!("trace needs a curve linkage (compile with --curve)");
    };
    let trace = trace_curve(&t, steps)?;
    if !trace.gaps.is_empty() {
        eprintln!("warning: {} untraced intervals", trace.gaps.len());
    }
    write_out(output, &trace_csv(&trace))?;
    if let Some(p) = svg {
        let conf = drawing_conf(&doc, None, 1e-9)?;
        fs::write(p, render_svg(&doc, &conf, &trace.outputs())).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn cmd_verify(path: &Path, tol: f64, samples: usize) -> Result<bool> {
    let doc = load(path)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed()?);
    let checks = verify::run(&doc, tol, samples, &mut rng);
    for c in &checks {
        println!("{c}");
    }
    let ok = checks.iter().all(|c| c.pass);
    println!("{}", if ok { "verification passed" } else { "verification FAILED" });
    Ok(ok)
}

fn cmd_probe(side: f64, seeds: usize) -> Result<bool> {
    if !(side > 0.0 && side.is_finite()) || seeds == 0 {
        bail!(FlagError("--side must be positive and --samples nonzero".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed()?);
    let p = probe_square_degeneracy_with(side, seeds, SEED_SPREAD, &mut rng)?;
    println!("plain square, side {side}");
    for s in &p.plain {
        let name = match s.component {
            SquareComponent::Rhombus => "rhombus (C - D = B - A)",
            SquareComponent::DOnA => "D = A, C on the circle about A",
            SquareComponent::COnB => "C = B, D on the circle about B",
        };
        println!("  {name}: angle {:.4}, residual {:e}", s.angle, s.residual);
    }
    println!("rigidified square, {} Newton starts per degenerate component", p.seeds);
    println!("  residual floor at D = A: {:.6} (jointed midpoints {:.6})", p.rigid_floor_d_on_a, p.jointed_floor_d_on_a);
    println!("  residual floor at C = B: {:.6} (jointed midpoints {:.6})", p.rigid_floor_c_on_b, p.jointed_floor_c_on_b);
    let ok = p.plain_max_residual() <= 1e-12 && p.rigid_rejects();
    println!(
        "degenerate components {} (gate {})",
        if p.rigid_rejects() { "rejected" } else { "NOT rejected" },
        0.1 * side
    );
    Ok(ok)
}

fn cmd_svg(path: &Path, input: Option<&str>, overlay: Option<&Path>, tol: f64, output: Option<&Path>) -> Result<()> {
    let doc = load(path)?;
    let trace = overlay.map(read_overlay).transpose()?.unwrap_or_default();
    let conf = drawing_conf(&doc, input, tol)?;
    write_out(output, &render_svg(&doc, &conf, &trace))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Compile { poly, domain, mode, equalities, curve, output } => {
            cmd_compile(&poly, domain.as_deref(), mode, equalities, curve.as_deref(), output.as_deref())?;
            Ok(true)
        }
        Command::Eval { file, input, tol } => cmd_eval(&file, &input, tol).map(|_| true),
        Command::Trace { file, steps, output, svg } => {
            cmd_trace(&file, steps, output.as_deref(), svg.as_deref()).map(|_| true)
        }
        Command::Verify { file, tol, samples } => cmd_verify(&file, tol, samples),
        Command::ProbeSquare { side, samples } => cmd_probe(side, samples),
        Command::ExportSvg { file, input, overlay, tol, output } => {
            cmd_svg(&file, input.as_deref(), overlay.as_deref(), tol, output.as_deref()).map(|_| true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<FlagError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
