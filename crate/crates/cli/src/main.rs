use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use satband::certify::{certify_unknot, verify_family, Grid, VerifyOptions};
use satband::family::{
    build_generalized, build_pattern, build_satellite, family_band, FamilyParams, GeneralizedParams,
};
use satband::invariants::{alexander, dbc_homology, determinant, jones, DEFAULT_BRACKET_CUTOFF};
use satband::render::render_svg;
use satband::simplify::SearchBudget;
use satband::surgery::apply_band;
use satband::{InvariantError, Orientation, PlanarDiagram};
use serde_json::json;

#[derive(Parser)]
#[command(name = "satband", version, about = "Satellite knot family: diagrams, band surgery, invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = SearchBudget::default().max_nodes)]
    budget_nodes: usize,
    #[arg(long, global = true, default_value_t = SearchBudget::default().max_increase)]
    budget_increase: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_BRACKET_CUTOFF)]
    bracket_cutoff: usize,
    /// Worker threads for grid sweeps (defaults to available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Pd,
    Gauss,
    Json,
    Svg,
    Table,
}

#[derive(Args)]
struct Tuple {
    #[arg(allow_negative_numbers = true)]
    m: i64,
    #[arg(allow_negative_numbers = true)]
    n: i64,
    #[arg(allow_negative_numbers = true)]
    p: i64,
    #[arg(allow_negative_numbers = true)]
    q: i64,
}

impl Tuple {
    fn params(&self) -> Result<FamilyParams> {
        Ok(FamilyParams::new(self.m, self.n, self.p, self.q)?)
    }
}

#[derive(Args)]
struct Input {
    /// A diagram file (PD text or JSON) or the four parameters m n p q.
    #[arg(required = true, num_args = 1..=4, allow_negative_numbers = true)]
    input: Vec<String>,
    /// With parameters: use the banded satellite K_b.
    #[arg(long, conflicts_with = "pattern")]
    band: bool,
    /// With parameters: use the pattern closed in the solid torus.
    #[arg(long)]
    pattern: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Pattern diagram K(m,n,p;q) closed in the solid torus.
    Pattern(Tuple),
    /// Satellite knot K with the (2,q) torus knot as companion.
    Satellite(Tuple),
    /// Satellite after surgery along the family band.
    Band(Tuple),
    /// Determinant, Alexander and Jones polynomials, double branched cover homology.
    Invariants(Input),
    /// Unknot certificate (simplification trace or invariant evidence).
    Certify(Input),
    /// Run every check over a parameter grid.
    Verify {
        #[arg(long, default_value = "m=-2..2,n=-2..2,p=-2..2,q=3,5")]
        grid: String,
    },
    /// SVG drawing of a JSON diagram carrying geometry.
    Render { file: PathBuf },
    /// Generalized pattern a1..aN p q.
    Generalized {
        #[arg(required = true, num_args = 4.., allow_negative_numbers = true)]
        values: Vec<i64>,
    },
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            let nl = if text.ends_with('\n') { "" } else { "\n" };
            match write!(out, "{text}{nl}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => Ok(r?),
            }
        }
    }
}

fn diagram_text(d: &PlanarDiagram, format: Format) -> Result<String> {
    Ok(match format {
        Format::Pd => d.to_pd(),
        Format::Gauss => d.gauss_code()?,
        Format::Json => serde_json::to_string_pretty(d)?,
        Format::Svg => render_svg(d)?,
        Format::Table => bail!("table format applies to verify only"),
    })
}

fn read_diagram(path: &Path) -> Result<PlanarDiagram> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('{') {
        Ok(serde_json::from_str(&text).context("parsing JSON diagram")?)
    } else {
        Ok(PlanarDiagram::parse_pd(&text)?)
    }
}

fn resolve(input: &Input) -> Result<PlanarDiagram> {
    match input.input.as_slice() {
        [file] => read_diagram(Path::new(file)),
        [m, n, p, q] => {
            let num = |s: &String| s.parse::<i64>().with_context(|| format!("not an integer: {s}"));
            let params = FamilyParams::new(num(m)?, num(n)?, num(p)?, num(q)?)?;
            if input.pattern {
                return Ok(build_pattern(&params)?.diagram);
            }
            let sat = build_satellite(&params)?;
            if input.band {
                Ok(apply_band(&sat, &family_band(&params)?)?)
            } else {
                Ok(sat)
            }
        }
        _ => bail!("expected a diagram file or four parameters m n p q"),
    }
}

fn invariants_json(d: &PlanarDiagram, cutoff: usize) -> Result<serde_json::Value> {
    let components = d.count_components()?;
    let alex = match alexander(d) {
        Ok(a) => Some(a.to_string()),
        Err(InvariantError::NotAKnot(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let jones = match jones(d, &Orientation::default(), cutoff) {
        Ok(j) => Some(j.to_string()),
        Err(InvariantError::TooLarge { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(json!({
        "crossings": d.crossing_count(),
        "components": components,
        "determinant": determinant(d)?.to_string(),
        "alexander": alex,
        "jones": jones,
        "homology": dbc_homology(d)?.to_string(),
    }))
}

fn run(cli: &Cli) -> Result<bool> {
    let budget = SearchBudget { max_nodes: cli.budget_nodes, max_increase: cli.budget_increase };
    match &cli.command {
        Command::Pattern(t) => {
            let d = build_pattern(&t.params()?)?.diagram;
            emit(cli, &diagram_text(&d, cli.format.unwrap_or(Format::Pd))?)?;
        }
        Command::Satellite(t) => {
            let d = build_satellite(&t.params()?)?;
            emit(cli, &diagram_text(&d, cli.format.unwrap_or(Format::Pd))?)?;
        }
        Command::Band(t) => {
            let params = t.params()?;
            let d = apply_band(&build_satellite(&params)?, &family_band(&params)?)?;
            emit(cli, &diagram_text(&d, cli.format.unwrap_or(Format::Pd))?)?;
        }
        Command::Generalized { values } => {
            let (a, pq) = values.split_at(values.len() - 2);
            let params = GeneralizedParams::new(a.to_vec(), pq[0], pq[1])?;
            let d = build_generalized(&params)?.diagram;
            emit(cli, &diagram_text(&d, cli.format.unwrap_or(Format::Pd))?)?;
        }
        Command::Invariants(input) => {
            let d = resolve(input)?;
            let v = invariants_json(&d, cli.bracket_cutoff)?;
            emit(cli, &serde_json::to_string_pretty(&v)?)?;
        }
        Command::Certify(input) => {
            let d = resolve(input)?;
            let cert = certify_unknot(&d, &budget, cli.bracket_cutoff)?;
            emit(cli, &serde_json::to_string_pretty(&cert)?)?;
            return Ok(cert.verdict.is_trivial());
        }
        Command::Verify { grid } => {
            let grid = Grid::parse(grid).map_err(anyhow::Error::msg)?;
            let opts = VerifyOptions { budget, bracket_cutoff: cli.bracket_cutoff, jobs: cli.jobs };
            let report = verify_family(&grid.tuples(), &opts);
            let text = match cli.format.unwrap_or(Format::Table) {
                Format::Json => report.to_json(),
                Format::Table => report.to_table(),
                _ => bail!("verify supports --format json or table"),
            };
            emit(cli, &text)?;
            return Ok(report.all_pass());
        }
        Command::Render { file } => {
            let d = read_diagram(file)?;
            emit(cli, &render_svg(&d)?)?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
