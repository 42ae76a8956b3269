//! The `cis` command line: loads JSON documents, runs constructions and
//! checks, and prints deterministic text reports.
//!
//! Exit status is 0 when every check passes, 1 when a check fails (the
//! report is still printed) and 2 on unreadable or malformed input.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use cis_core::cat::{
    check_limit_compatibility, cis_direct_limit, cocone_failures, induced_fundamental_map,
    is_cis_isomorphism, validate_morphism,
};
use cis_core::cis::{is_finitely_semicomponible, is_inductive, validate_cis, Cis, TailPolicy};
use cis_core::doc::{CisDoc, DiagramDoc, LimitDoc, MorphismDoc};
use cis_core::dot::to_dot;
use cis_core::fuzz::{run_suite, SuiteConfig};
use cis_core::gallery::{
    build_example, search_non_fundamental, GalleryId, SearchOutcome, DEFAULT_SEARCH_CAP,
};
use cis_core::homology::{
    betti_mod2, counter_functorial_check, functorial_invariance_check, order_complex,
};
use cis_core::limit::{
    build_fundamental, cover_profile, has_weak_topology, images_closed, verify_limit_axioms,
    verify_split_axioms, LimitSpace,
};
use cis_core::FinSpace;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cis",
    version,
    about = "Closed injective systems of finite spaces and their limits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a system document against the defining clauses.
    Validate { input: PathBuf },
    /// Build the fundamental limit space.
    ///
    /// Without `-o` the limit document goes to stdout and the report to stderr.
    Limit {
        input: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        /// Write the specialization order as a DOT digraph.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check a candidate limit document against a system.
    Verify { system: PathBuf, limit: PathBuf },
    /// Validate a morphism document.
    Morphism {
        input: PathBuf,
        /// Also compute the induced map of fundamental limits.
        #[arg(long)]
        induced: bool,
    },
    /// Direct limit of a chain of systems, checked against the limits of its objects.
    DiagramLimit {
        input: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Mod-2 Betti numbers of every stage and of the fundamental limit.
    Homology {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        pmax: usize,
    },
    /// Compare the (co)homology of the limit with the (co)limit of the stage modules.
    Invariance {
        input: PathBuf,
        #[arg(long = "p")]
        p: usize,
        /// Use cohomology and the inverse limit.
        #[arg(long)]
        co: bool,
    },
    /// Emit a gallery system, e.g. `gallery sphere_chain 2` or `gallery identity circle 3`.
    Gallery {
        name: String,
        params: Vec<String>,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Run the seeded property suite.
    Fuzz {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Look for limit spaces of a system that are not fundamental.
    Search {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
        cap: usize,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] cis_core::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(cis_core::Error::Invariant(_) | cis_core::Error::AxiomFailure(_)) => {
                EXIT_FAIL
            }
            _ => EXIT_INPUT,
        }
    }
}

type Outcome = Result<bool, CliError>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{e}");
                EXIT_PASS
            };
        }
    };
    match execute(&cli.command, out, err) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Validate { input } => validate(input, out),
        Command::Limit { input, output, dot } => {
            limit(input, output.as_deref(), dot.as_deref(), out, err)
        }
        Command::Verify { system, limit } => verify(system, limit, out),
        Command::Morphism { input, induced } => morphism(input, *induced, out),
        Command::DiagramLimit { input, output } => {
            diagram_limit(input, output.as_deref(), out, err)
        }
        Command::Homology { input, pmax } => homology(input, *pmax, out),
        Command::Invariance { input, p, co } => invariance(input, *p, *co, out),
        Command::Gallery {
            name,
            params,
            output,
        } => gallery(name, params, output.as_deref(), out),
        Command::Fuzz { count, seed } => {
            let report = run_suite(&SuiteConfig::new(*count, *seed));
            write!(out, "{report}")?;
            Ok(report.all_passed())
        }
        Command::Search { input, cap } => search(input, *cap, out),
    }
}

/// Reads a JSON document, naming the offending field and position on error.
pub fn read_doc<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_doc(&text).map_err(|msg| CliError::Input(format!("{}: {msg}", path.display())))
}

pub fn parse_doc<T: DeserializeOwned>(text: &str) -> Result<T, String> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = e.path().to_string();
        if field == "." {
            e.inner().to_string()
        } else {
            format!("field `{field}`: {}", e.inner())
        }
    })?;
    de.end().map_err(|e| e.to_string())?;
    Ok(value)
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn load_cis(path: &Path) -> Result<Cis, CliError> {
    let doc: CisDoc = read_doc(path)?;
    doc.to_cis()
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Loads a system and prints its validation failures; `None` when invalid.
fn load_valid_cis(path: &Path, out: &mut dyn Write) -> Result<Option<Cis>, CliError> {
    let c = load_cis(path)?;
    let report = validate_cis(&c);
    if report.is_valid() {
        Ok(Some(c))
    } else {
        write!(out, "{report}")?;
        Ok(None)
    }
}

fn emit(doc: &str, output: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    match output {
        Some(p) => fs::write(p, doc).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => Ok(out.write_all(doc.as_bytes())?),
    }
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

fn tail_text(t: TailPolicy) -> String {
    match t {
        TailPolicy::Stationary { n0 } => format!("stationary from stage {n0}"),
        TailPolicy::Cutoff => "cutoff".to_string(),
    }
}

fn validate(input: &Path, out: &mut dyn Write) -> Outcome {
    let c = load_cis(input)?;
    let report = validate_cis(&c);
    write!(out, "{report}")?;
    writeln!(out, "stages: {}", c.len())?;
    writeln!(out, "tail: {}", tail_text(c.tail()))?;
    if report.is_valid() {
        writeln!(out, "inductive: {}", is_inductive(&c))?;
        let fs = is_finitely_semicomponible(&c);
        let marker = if fs.truncation_relative {
            " (truncation-relative)"
        } else {
            ""
        };
        writeln!(out, "finitely semicomponible: {}{marker}", fs.value)?;
    }
    Ok(report.is_valid())
}

fn set_text(space: &FinSpace, ids: impl IntoIterator<Item = usize>) -> String {
    let names: Vec<&str> = ids.into_iter().map(|x| space.id(x)).collect();
    format!("{{{}}}", names.join(", "))
}

fn limit_summary(c: &Cis, ls: &LimitSpace, w: &mut dyn Write) -> Result<bool, CliError> {
    let x = ls.space();
    writeln!(w, "fundamental limit: {} points", x.len())?;
    for (i, embedding) in ls.embeddings().iter().enumerate() {
        writeln!(
            w,
            "  stage {i} image: {}",
            set_text(x, embedding.full_image().iter())
        )?;
    }
    let axioms = verify_limit_axioms(c, ls)?.passes();
    let split = verify_split_axioms(c, ls)?.passes();
    let weak = has_weak_topology(c, ls)?;
    let closed = images_closed(ls).all_closed;
    writeln!(w, "limit axioms: {}", pass(axioms))?;
    writeln!(w, "split axioms: {}", pass(split))?;
    writeln!(w, "weak topology: {}", pass(weak))?;
    writeln!(w, "images closed: {}", pass(closed))?;
    Ok(axioms && split && weak && closed)
}

fn limit(
    input: &Path,
    output: Option<&Path>,
    dot: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let Some(c) = load_valid_cis(input, out)? else {
        return Ok(false);
    };
    let ls = build_fundamental(&c)?;
    let doc = to_json(&LimitDoc::from_limit(&ls));
    let ok = match output {
        Some(_) => {
            emit(&doc, output, out)?;
            limit_summary(&c, &ls, out)?
        }
        None => {
            out.write_all(doc.as_bytes())?;
            limit_summary(&c, &ls, err)?
        }
    };
    if let Some(path) = dot {
        fs::write(path, to_dot(ls.space(), "limit"))
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(ok)
}

fn verify(system: &Path, limit: &Path, out: &mut dyn Write) -> Outcome {
    let Some(c) = load_valid_cis(system, out)? else {
        return Ok(false);
    };
    let doc: LimitDoc = read_doc(limit)?;
    let ls = doc
        .to_limit(&c)
        .map_err(|e| CliError::Input(format!("{}: {e}", limit.display())))?;
    let a = verify_limit_axioms(&c, &ls)?;
    let b = verify_split_axioms(&c, &ls)?;
    writeln!(out, "limit axioms: {}", pass(a.passes()))?;
    write!(out, "{a}")?;
    writeln!(out, "split axioms: {}", pass(b.passes()))?;
    write!(out, "{b}")?;
    writeln!(out, "readings agree: {}", a.passes() == b.passes())?;
    writeln!(out, "weak topology: {}", has_weak_topology(&c, &ls)?)?;
    let closed = images_closed(&ls);
    writeln!(out, "images closed: {}", closed.all_closed)?;
    if !closed.all_closed {
        writeln!(out, "  open images at stages {:?}", closed.open_stages)?;
    }
    let cp = cover_profile(&ls);
    writeln!(
        out,
        "cover: pointwise finite {}, locally finite {}, closed {}, max multiplicity {}",
        cp.pointwise_finite, cp.locally_finite, cp.closed_cover, cp.max_point_multiplicity
    )?;
    Ok(a.passes() && b.passes())
}

fn morphism(input: &Path, induced: bool, out: &mut dyn Write) -> Outcome {
    let doc: MorphismDoc = read_doc(input)?;
    let m = doc
        .to_morphism()
        .map_err(|e| CliError::Input(format!("{}: {e}", input.display())))?;
    let mut ok = true;
    for (name, c) in [("source", m.source()), ("target", m.target())] {
        let r = validate_cis(c);
        if !r.is_valid() {
            writeln!(out, "{name} system:")?;
            write!(out, "{r}")?;
            ok = false;
        }
    }
    let r = validate_morphism(&m);
    write!(out, "{r}")?;
    ok &= r.is_valid();
    if ok {
        writeln!(out, "isomorphism: {}", is_cis_isomorphism(&m))?;
    }
    if induced && ok {
        let induced = induced_fundamental_map(&m)?;
        writeln!(out, "induced map:")?;
        for x in 0..induced.source().len() {
            writeln!(
                out,
                "  {} -> {}",
                induced.source().id(x),
                induced.target().id(induced.apply(x))
            )?;
        }
        let p = induced.profile();
        writeln!(
            out,
            "  continuous {}, closed {}, injective {}, surjective {}, homeomorphism {}",
            p.continuous,
            p.closed,
            p.injective,
            p.surjective,
            induced.is_homeomorphism()
        )?;
    }
    Ok(ok)
}

fn diagram_limit(
    input: &Path,
    output: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let doc: DiagramDoc = read_doc(input)?;
    let d = doc
        .to_diagram()
        .map_err(|e| CliError::Input(format!("{}: {e}", input.display())))?;
    let dl = cis_direct_limit(&d)?;
    let fails = cocone_failures(&d, &dl)?;
    let comp = check_limit_compatibility(&d)?;
    let doc = to_json(&CisDoc::from_cis(&dl.cis));
    let report = &mut |w: &mut dyn Write| -> Result<(), CliError> {
        writeln!(w, "objects: {}", d.objects().len())?;
        writeln!(w, "limit stages: {}", dl.cis.len())?;
        for i in 0..dl.cis.len() {
            writeln!(w, "  stage {i}: {} points", dl.cis.space(i)?.len())?;
        }
        writeln!(w, "cocone identities: {}", pass(fails.is_empty()))?;
        for f in &fails {
            writeln!(w, "  {f}")?;
        }
        write!(w, "{comp}")?;
        Ok(())
    };
    if output.is_some() {
        emit(&doc, output, out)?;
        report(out)?;
    } else {
        out.write_all(doc.as_bytes())?;
        report(err)?;
    }
    Ok(fails.is_empty() && comp.passes())
}

fn homology(input: &Path, pmax: usize, out: &mut dyn Write) -> Outcome {
    let Some(c) = load_valid_cis(input, out)? else {
        return Ok(false);
    };
    writeln!(out, "mod-2 Betti numbers, degrees 0..={pmax}")?;
    for i in 0..c.len() {
        let b = betti_mod2(&order_complex(c.space(i)?), pmax);
        writeln!(out, "  stage {i}: {b:?}")?;
    }
    let ls = build_fundamental(&c)?;
    writeln!(
        out,
        "  limit: {:?}",
        betti_mod2(&order_complex(ls.space()), pmax)
    )?;
    Ok(true)
}

fn invariance(input: &Path, p: usize, co: bool, out: &mut dyn Write) -> Outcome {
    let Some(c) = load_valid_cis(input, out)? else {
        return Ok(false);
    };
    let r = if co {
        counter_functorial_check(&c, p)?
    } else {
        functorial_invariance_check(&c, p)?
    };
    write!(out, "{r}")?;
    if let Some(m) = &r.comparison {
        writeln!(out, "  comparison matrix {}x{}:", m.rows(), m.cols())?;
        for row in m.to_rows() {
            let cells: Vec<String> = row.iter().map(u8::to_string).collect();
            writeln!(out, "    {}", cells.join(" "))?;
        }
    }
    writeln!(out, "result: {}", pass(r.passes()))?;
    Ok(r.passes())
}

fn gallery(name: &str, params: &[String], output: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let id = GalleryId::parse(name, params)?;
    let c = build_example(id)?;
    emit(&to_json(&CisDoc::from_cis(&c)), output, out)?;
    Ok(true)
}

fn search(input: &Path, cap: usize, out: &mut dyn Write) -> Outcome {
    let Some(c) = load_valid_cis(input, out)? else {
        return Ok(false);
    };
    match search_non_fundamental(&c, cap)? {
        SearchOutcome::Completed {
            examined,
            limits,
            found,
        } => {
            writeln!(out, "topologies examined: {examined}")?;
            writeln!(out, "limit spaces: {limits}")?;
            writeln!(out, "non-fundamental limit spaces: {}", found.len())?;
            for (k, ls) in found.iter().enumerate() {
                writeln!(out, "  candidate {k}:")?;
                let x = ls.space();
                for p in 0..x.len() {
                    writeln!(
                        out,
                        "    U({}) = {}",
                        x.id(p),
                        set_text(x, x.min_open(p).iter())
                    )?;
                }
            }
        }
        SearchOutcome::Undecided { points, cap } => {
            writeln!(
                out,
                "undecided: the limit has {points} points, above the cap of {cap}"
            )?;
        }
    }
    Ok(true)
}
