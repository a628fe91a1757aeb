use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use calg::{Budget, CalgError};
use clap::{Args, Parser, Subcommand};
use ptolemy::pipeline::{self, IdealArtifact, ModeKind, SolutionArtifact, Variant};
use ptolemy::{ManifoldDoc, PtolemyError};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "ptolemy", version, about = "Ptolemy varieties, representations and A-polynomials of ideal triangulations")]
struct Cli {
    /// Directory for JSON artifacts; without it artifacts go to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Limit on S-pairs per Groebner computation.
    #[arg(long, global = true)]
    budget: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a document and describe the triangulation.
    Parse { input: PathBuf },
    /// Transitive partitions with degeneracy types.
    Partitions { input: PathBuf },
    /// H¹, H² and the obstruction cocycles.
    Obstructions { input: PathBuf },
    /// Ptolemy ideals and their Groebner bases.
    Ideal {
        input: PathBuf,
        #[command(flatten)]
        sel: Selection,
        #[arg(long)]
        reduced: bool,
    },
    /// Solve reduced varieties, or re-solve an ideal artifact.
    Solve {
        input: Option<PathBuf>,
        #[command(flatten)]
        sel: Selection,
        /// Ideal artifact written by `ideal --reduced`.
        #[arg(long, conflicts_with = "input")]
        from: Option<PathBuf>,
    },
    /// Representations of every solution.
    Reps {
        input: PathBuf,
        #[command(flatten)]
        sel: Selection,
        /// Solutions artifact to rebuild from instead of solving.
        #[arg(long)]
        from: Option<PathBuf>,
    },
    /// A-polynomial of a one-cusped manifold with cusp decoration.
    Apoly { input: PathBuf },
    /// Every stage for one mode, plus a summary.
    Pipeline {
        input: PathBuf,
        #[command(flatten)]
        sel: Selection,
        /// Also compute the A-polynomial (enhanced mode).
        #[arg(long)]
        apoly: bool,
    },
}

#[derive(Args, Clone)]
struct Selection {
    /// sl2, psl2 or enhanced.
    #[arg(long, default_value = "sl2")]
    mode: String,
    /// Obstruction class index (psl2 only).
    #[arg(long)]
    class: Option<usize>,
    /// Restrict to one partition index.
    #[arg(long)]
    partition: Option<usize>,
}

/// Failure carrying its exit status.
#[derive(Debug)]
enum Failure {
    Input(String),
    Budget(String),
    Consistency(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::Budget(m) | Failure::Consistency(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for Failure {}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Consistency(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Input(_) => "input",
            Failure::Budget(_) => "budget",
            Failure::Consistency(_) => "consistency",
        }
    }
}

fn classify(e: &anyhow::Error) -> Failure {
    let msg = format!("{e:#}");
    for cause in e.chain() {
        if let Some(f) = cause.downcast_ref::<Failure>() {
            return match f {
                Failure::Input(_) => Failure::Input(msg),
                Failure::Budget(_) => Failure::Budget(msg),
                Failure::Consistency(_) => Failure::Consistency(msg),
            };
        }
        let calg = cause
            .downcast_ref::<PtolemyError>()
            .and_then(|p| match p {
                PtolemyError::Algebra(c) => Some(c),
                _ => None,
            })
            .or_else(|| cause.downcast_ref::<CalgError>());
        if let Some(c) = calg {
            return match c {
                CalgError::BudgetExceeded(_) => Failure::Budget(msg),
                CalgError::Parse(_) | CalgError::RingMismatch(_) => Failure::Input(msg),
                _ => Failure::Consistency(msg),
            };
        }
        if let Some(p) = cause.downcast_ref::<PtolemyError>() {
            return match p {
                PtolemyError::Representation(_) => Failure::Consistency(msg),
                _ => Failure::Input(msg),
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() || cause.downcast_ref::<serde_json::Error>().is_some() {
            return Failure::Input(msg);
        }
    }
    Failure::Consistency(msg)
}

struct Ctx {
    out: Option<PathBuf>,
    budget: Budget,
}

impl Ctx {
    /// Writes `{manifold}.{stage}.{variant}.json` atomically, or prints it.
    fn emit<T: Serialize>(&self, manifold: &str, stage: &str, variant: &str, value: &T) -> Result<()> {
        let text = serde_json::to_string_pretty(value)? + "\n";
        match &self.out {
            None => print!("{text}"),
            Some(dir) => {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                let name = format!("{manifold}.{stage}.{variant}.json");
                let tmp = dir.join(format!(".{name}.tmp"));
                fs::write(&tmp, text).with_context(|| format!("writing {}", tmp.display()))?;
                fs::rename(&tmp, dir.join(&name)).with_context(|| format!("renaming into {name}"))?;
            }
        }
        Ok(())
    }
}

fn load(path: &Path) -> Result<(ManifoldDoc, String)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc = ManifoldDoc::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let name = doc
        .name
        .clone()
        .or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()))
        .unwrap_or_else(|| "manifold".into());
    Ok((doc, name))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())).into())
}

fn selected(doc: &ManifoldDoc, sel: &Selection) -> Result<Vec<Variant>> {
    let kind: ModeKind = sel.mode.parse().map_err(|e: PtolemyError| Failure::Input(e.to_string()))?;
    pipeline::variants(doc, kind, sel.class).map_err(|e| Failure::Input(e.to_string()).into())
}

fn check_reps(artifacts: &[pipeline::RepArtifact]) -> Result<()> {
    for a in artifacts {
        if !a.ok() {
            let tag = format!("partition {} branch {}", a.branch.partition, a.branch.branch);
            bail!(Failure::Consistency(format!("representation checks failed on {tag}")));
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let mut budget = Budget::default();
    if let Some(n) = cli.budget {
        budget.max_pairs = n;
    }
    let ctx = Ctx { out: cli.out, budget };
    match cli.cmd {
        Cmd::Parse { input } => {
            let (doc, name) = load(&input)?;
            ctx.emit(&name, "parse", "all", &pipeline::triangulation_summary(&doc)?)
        }
        Cmd::Partitions { input } => {
            let (doc, name) = load(&input)?;
            ctx.emit(&name, "partitions", "all", &pipeline::partition_records(&doc.tri)?)
        }
        Cmd::Obstructions { input } => {
            let (doc, name) = load(&input)?;
            ctx.emit(&name, "obstructions", "all", &pipeline::obstruction_artifact(&doc.tri)?)
        }
        Cmd::Ideal { input, sel, reduced } => {
            let (doc, name) = load(&input)?;
            for v in selected(&doc, &sel)? {
                let out = pipeline::branches(&doc, &v.mode, sel.partition)?
                    .iter()
                    .map(|b| pipeline::ideal_artifact(b, reduced, ctx.budget))
                    .collect::<ptolemy::Result<Vec<_>>>()?;
                let stage = if reduced { "ideal-reduced" } else { "ideal" };
                ctx.emit(&name, stage, &v.name, &out)?;
            }
            Ok(())
        }
        Cmd::Solve { input, sel, from } => {
            if let Some(path) = from {
                let ideals: Vec<IdealArtifact> = read_json(&path)?;
                let out = ideals
                    .iter()
                    .map(|a| pipeline::solve_from_artifact(a, ctx.budget))
                    .collect::<ptolemy::Result<Vec<_>>>()?;
                // {manifold}.ideal-reduced.{variant}.json → {manifold}.solutions.{variant}.json
                let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                let parts: Vec<&str> = stem.splitn(3, '.').collect();
                let (name, variant) = match parts.as_slice() {
                    [m, _, v] => (m.to_string(), v.to_string()),
                    _ => (stem.clone(), "all".to_string()),
                };
                return ctx.emit(&name, "solutions", &variant, &out);
            }
            let input = input.ok_or_else(|| Failure::Input("solve needs an input document or --from".into()))?;
            let (doc, name) = load(&input)?;
            for v in selected(&doc, &sel)? {
                let run = pipeline::run_variant(&doc, &v, sel.partition, ctx.budget)?;
                let out: Vec<SolutionArtifact> =
                    run.branches.iter().map(|(b, s)| pipeline::solution_artifact(b, s)).collect();
                ctx.emit(&name, "solutions", &v.name, &out)?;
            }
            Ok(())
        }
        Cmd::Reps { input, sel, from } => {
            let (doc, name) = load(&input)?;
            let vs = selected(&doc, &sel)?;
            if let Some(path) = from {
                if vs.len() != 1 {
                    bail!(Failure::Input("--from needs a single variant; pass --class".into()));
                }
                let sols: Vec<SolutionArtifact> = read_json(&path)?;
                let out = sols
                    .iter()
                    .map(|a| pipeline::reps_from_artifact(&doc, &vs[0].mode, a))
                    .collect::<ptolemy::Result<Vec<_>>>()?;
                ctx.emit(&name, "reps", &vs[0].name, &out)?;
                return check_reps(&out);
            }
            let mut all = Vec::new();
            for v in vs {
                let run = pipeline::run_variant(&doc, &v, sel.partition, ctx.budget)?;
                let out = run
                    .branches
                    .iter()
                    .map(|(b, s)| pipeline::rep_artifact(&doc, b, s.points()))
                    .collect::<ptolemy::Result<Vec<_>>>()?;
                ctx.emit(&name, "reps", &v.name, &out)?;
                all.extend(out);
            }
            check_reps(&all)
        }
        Cmd::Apoly { input } => {
            let (doc, name) = load(&input)?;
            if doc.decoration.is_none() {
                bail!(Failure::Input("the A-polynomial needs cusp_decorations".into()));
            }
            ctx.emit(&name, "apoly", "enhanced", &pipeline::apoly_artifact(&doc, ctx.budget)?)
        }
        Cmd::Pipeline { input, sel, apoly } => {
            let (doc, name) = load(&input)?;
            let mut summary = Vec::new();
            let mut reps = Vec::new();
            for v in selected(&doc, &sel)? {
                let run = pipeline::run_variant(&doc, &v, sel.partition, ctx.budget)?;
                let ideals: Vec<IdealArtifact> = run
                    .branches
                    .iter()
                    .map(|(b, s)| IdealArtifact {
                        branch: pipeline::BranchHeader::of(b),
                        ideal: calg::json::ideal_to_json(&s.ideal),
                        basis: pipeline::basis_json(&s.basis),
                    })
                    .collect();
                ctx.emit(&name, "ideal-reduced", &v.name, &ideals)?;
                let sols: Vec<SolutionArtifact> =
                    run.branches.iter().map(|(b, s)| pipeline::solution_artifact(b, s)).collect();
                ctx.emit(&name, "solutions", &v.name, &sols)?;
                let r = run
                    .branches
                    .iter()
                    .map(|(b, s)| pipeline::rep_artifact(&doc, b, s.points()))
                    .collect::<ptolemy::Result<Vec<_>>>()?;
                ctx.emit(&name, "reps", &v.name, &r)?;
                reps.extend(r);
                summary.extend(run.summary(&doc)?);
            }
            if apoly {
                if sel.mode != "enhanced" {
                    bail!(Failure::Input("--apoly needs --mode enhanced".into()));
                }
                ctx.emit(&name, "apoly", "enhanced", &pipeline::apoly_artifact(&doc, ctx.budget)?)?;
            }
            ctx.emit(&name, "summary", &sel.mode, &summary)?;
            if ctx.out.is_some() {
                print_summary(&summary);
            }
            check_reps(&reps)
        }
    }
}

fn print_summary(rows: &[pipeline::SummaryRow]) {
    println!("{:<10} {:>4} {:<10} {:<14} {:>6} {:<22} fields", "variant", "part", "zero", "type", "branch", "status");
    for r in rows {
        let fields: Vec<String> = r
            .fields
            .iter()
            .map(|c| calg::json::upoly_from_json(c).map(|p| p.to_string_in("w")).unwrap_or_default())
            .collect();
        println!(
            "{:<10} {:>4} {:<10} {:<14} {:>6} {:<22} {}",
            r.variant,
            r.partition,
            format!("{:?}", r.zero_edges),
            format!("{:?}", r.degeneracy),
            r.branch,
            r.status,
            fields.join(", ")
        );
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let f = classify(&e);
            let record = serde_json::json!({ "error": f.kind(), "message": f.to_string() });
            eprintln!("{record}");
            ExitCode::from(f.code())
        }
    }
}
