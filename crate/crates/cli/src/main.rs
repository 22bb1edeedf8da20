mod report;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use z2coh::borel::{equivariant_cohomology, les_of_pair, relative_cohomology, Coefficients};
use z2coh::classify::{fkmm_space_invariant, fkmm_target, surjectivity_report, ClassifiedSpace, SignVector};
use z2coh::complex::{catalog, CatalogParams, EquivariantCellComplex, SubcomplexRef, CATALOG_NAMES};
use z2coh::error::{ClassifyError, CohomologyError, ComplexError, GroupError};

use report::Report;

#[derive(Parser)]
#[command(name = "z2coh", version, about = "Borel equivariant cohomology of Z/2-CW complexes and rank-2 bundle classification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Coeff {
    Z0,
    Z1,
}

#[derive(Args, Clone, Default)]
struct Params {
    /// Lens and sphere_pq parameter.
    #[arg(long)]
    q: Option<u32>,
    /// wedge_free lobes or antipodal_sphere dimension.
    #[arg(long)]
    n: Option<u32>,
    /// sphere_pq fixed coordinates.
    #[arg(long)]
    p: Option<u32>,
    /// Lens subdivision factor.
    #[arg(long)]
    s: Option<u32>,
}

impl Params {
    fn catalog(&self) -> CatalogParams {
        CatalogParams { q: self.q, n: self.n, p: self.p, s: self.s }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a catalog space in the space-file format.
    Space {
        name: String,
        #[command(flatten)]
        params: Params,
        /// Output path; standard output if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Equivariant cohomology of a catalog space or space file.
    Cohomology {
        /// Catalog name or path to a space file.
        space: String,
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum, default_value_t = Coeff::Z1)]
        coeff: Coeff,
        #[arg(long, default_value_t = 3)]
        max_deg: usize,
        /// `fixed`, or `sub=<id>,<id>,...` (closed under faces automatically).
        #[arg(long)]
        relative: Option<String>,
    },
    /// Recompute reference tables and report pass/fail per entry.
    Verify {
        suite: String,
        #[arg(long)]
        q: Option<u32>,
    },
    /// Rank-2 classification, FKMM target and surjectivity verdict.
    Classify {
        /// `lens`, `wedge` / `wedge_free`, or a catalog space of dimension at most 1.
        space: String,
        #[command(flatten)]
        params: Params,
        /// Sign vector at the fixed points, e.g. `+,-`, reduced modulo restrictions.
        #[arg(long)]
        signs: Option<String>,
    },
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Internal(String),
}

impl From<ComplexError> for CliError {
    fn from(e: ComplexError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CohomologyError> for CliError {
    fn from(e: CohomologyError) -> Self {
        match e {
            CohomologyError::Complex(c) => c.into(),
            CohomologyError::DegreeOutOfRange { .. } => CliError::Input(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Cohomology(c) => c.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

const MAX_DEG: usize = 32;

fn load_space(arg: &str, params: &Params) -> Result<(EquivariantCellComplex, String), CliError> {
    if CATALOG_NAMES.contains(&arg) {
        return Ok((catalog(arg, &params.catalog())?, arg.to_string()));
    }
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{arg}: {e}")))?;
        return Ok((EquivariantCellComplex::from_json(&text)?, format!("file {arg}")));
    }
    Err(CliError::Input(format!("`{arg}` is neither a catalog space ({}) nor a readable file", CATALOG_NAMES.join(", "))))
}

fn relative_sub(x: &EquivariantCellComplex, arg: &str) -> Result<SubcomplexRef, CliError> {
    if arg == "fixed" {
        return Ok(x.fixed_subcomplex());
    }
    let ids = arg
        .strip_prefix("sub=")
        .ok_or_else(|| CliError::Input(format!("--relative expects `fixed` or `sub=<ids>`, got `{arg}`")))?;
    let ids: Vec<&str> = ids.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let named = x.subcomplex(&ids)?;
    Ok(x.closure(&named.indices()))
}

fn echo(args: &[String]) -> String {
    args.iter().skip(1).cloned().collect::<Vec<_>>().join(" ")
}

fn cohomology(r: &mut Report, space: &str, params: &Params, coeff: Coeff, max_deg: usize, relative: Option<&str>) -> Result<(), CliError> {
    if max_deg > MAX_DEG {
        return Err(CliError::Input(format!("--max-deg {max_deg} above {MAX_DEG}")));
    }
    let (x, label) = load_space(space, params)?;
    let coeff = match coeff {
        Coeff::Z0 => Coefficients::Z0,
        Coeff::Z1 => Coefficients::Z1,
    };
    r.input("space", label);
    r.input("coefficients", coeff);
    r.input("max_deg", max_deg);
    let report = match relative {
        None => equivariant_cohomology(&x, coeff, max_deg)?,
        Some(arg) => {
            let y = relative_sub(&x, arg)?;
            r.input("relative", format!("{arg} ({} orbit cells)", y.len()));
            let les = les_of_pair(&x, &y, coeff, max_deg)?;
            r.certificate("long exact sequence of the pair", les.all_exact());
            relative_cohomology(&x, &y, coeff, max_deg)?
        }
    };
    for (k, g) in report.groups.iter().enumerate() {
        r.value(format!("H^{k}"), g);
    }
    r.certificate(format!("truncation stability N={} vs N={}", report.truncation, report.truncation + 1), report.stable);
    Ok(())
}

fn classified(space: &str, params: &Params) -> Result<ClassifiedSpace, CliError> {
    Ok(match space {
        "lens" => ClassifiedSpace::Lens { q: params.q.ok_or_else(|| CliError::Input("lens needs --q".into()))? },
        "wedge" | "wedge_free" => ClassifiedSpace::Wedge { n: params.n.ok_or_else(|| CliError::Input("wedge needs --n".into()))? },
        other if CATALOG_NAMES.contains(&other) => {
            ClassifiedSpace::LowDimensional { name: other.to_string(), p: params.p, q: params.q, n: params.n }
        }
        other => return Err(CliError::Input(format!("unsupported space `{other}`"))),
    })
}

fn parse_signs(s: &str) -> Result<Vec<i8>, CliError> {
    s.split(',')
        .map(|t| match t.trim() {
            "+" | "+1" | "1" => Ok(1),
            "-" | "-1" => Ok(-1),
            other => Err(CliError::Input(format!("bad sign `{other}`"))),
        })
        .collect()
}

fn classify(r: &mut Report, space: &str, params: &Params, signs: Option<&str>) -> Result<(), CliError> {
    let target = classified(space, params)?;
    r.input("space", &target);
    let classified = match surjectivity_report(&target) {
        Ok(rep) => {
            r.value("Vec^2_Q", &rep.classification);
            r.value("FKMM target H^2(X | X^τ; Z(1))", &rep.target);
            if let Some(ratio) = &rep.order_ratio {
                r.value("order ratio", ratio);
            }
            r.verdict("surjectivity", rep.verdict);
            true
        }
        // Sign classes make sense on any FKMM space, so only they are reported.
        Err(e) if signs.is_some() => {
            r.value("Vec^2_Q", format!("not computed: {e}"));
            false
        }
        Err(e) => return Err(e.into()),
    };
    if let Some(s) = signs {
        let x = match &target {
            ClassifiedSpace::LowDimensional { .. } => catalog(space, &params.catalog())?,
            _ => target.complex()?,
        };
        let sv = SignVector::new(&x, &parse_signs(s)?)?;
        r.input("signs", &sv);
        if !classified {
            r.value("FKMM target H^2(X | X^τ; Z(1))", fkmm_target(&x)?);
        }
        let c = fkmm_space_invariant(&x, &sv)?;
        r.value("sign quotient", &c.quotient);
        r.value("sign class representative", &c.representative);
        r.verdict("sign class", if c.is_identity { "identity" } else { "non-trivial" });
    }
    Ok(())
}

fn run(cli: Cli, args: &[String]) -> Result<Option<Report>, CliError> {
    let mut r = Report::new(echo(args));
    match cli.command {
        Command::Space { name, params, output } => {
            if !CATALOG_NAMES.contains(&name.as_str()) {
                return Err(CliError::Input(format!("unknown catalog space `{name}` (known: {})", CATALOG_NAMES.join(", "))));
            }
            let x = catalog(&name, &params.catalog())?;
            x.validate()?;
            let text = x.to_json();
            match output {
                Some(p) => std::fs::write(&p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
                None => print!("{text}"),
            }
            return Ok(None);
        }
        Command::Cohomology { space, params, coeff, max_deg, relative } => {
            cohomology(&mut r, &space, &params, coeff, max_deg, relative.as_deref())?;
        }
        Command::Verify { suite, q } => {
            r.input("suite", &suite);
            if let Some(q) = q {
                r.input("q", q);
            }
            verify::run(&suite, q, &mut r)?;
        }
        Command::Classify { space, params, signs } => {
            classify(&mut r, &space, &params, signs.as_deref())?;
        }
    }
    Ok(Some(r))
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli, &args) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(r)) => {
            match format {
                Format::Text => print!("{}", r.to_text()),
                Format::Json => print!("{}", r.to_json()),
            }
            if !r.certificates_ok() {
                ExitCode::from(3)
            } else if r.hard_failures() > 0 {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(CliError::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(3)
        }
    }
}
