//! The `evolalg` command line.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | inputs are not isomorphic |
//! | 2 | usage, I/O or parse error |
//! | 3 | input parses but is invalid, or file kinds do not match |
//! | 4 | algebra is not regular |
//! | 5 | algebra is not in the image of the graph functor |
//! | 6 | realization could not be verified |
//! | 7 | a size cap was exceeded |

use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::evolution::EvolutionAlgebra;
use crate::fields::{FieldDescriptor, FieldError};
use crate::frucht::{realize, verify_realization, FruchtError, VerificationReport};
use crate::functor::{build_algebra, recover_graph, FunctorError};
use crate::graph::{self, GraphError, PermGroup, SimpleGraph};
use crate::groups::{group_isomorphic, FiniteGroup, GroupError};
use crate::monomial::{self, permutation_image, MonomialError};
use crate::text::{FileKind, ReadError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_ISOMORPHIC: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_NOT_REGULAR: i32 = 4;
pub const EXIT_NOT_IN_IMAGE: i32 = 5;
pub const EXIT_REALIZATION_FAILED: i32 = 6;
pub const EXIT_CAP: i32 = 7;

#[derive(Parser, Debug)]
#[command(name = "evolalg", version, about = "Evolution algebras of graphs and their automorphism groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the evolution algebra of a graph.
    Build {
        graph: PathBuf,
        /// `Q` or `GF:p`.
        #[arg(long, default_value = "Q")]
        field: String,
        /// Output file (standard output if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Automorphism group of a graph or algebra file.
    Aut {
        file: PathBuf,
        /// Enumerate all permutations instead of searching.
        #[arg(long)]
        brute_force: bool,
    },
    /// Decide isomorphism of two graph, algebra or group files.
    Iso { a: PathBuf, b: PathBuf },
    /// Recover the graph behind an algebra in the image of the functor.
    Recover {
        algebra: PathBuf,
        /// Output file for the graph (standard output if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Realize a finite group as the automorphism group of an algebra.
    Realize {
        group: PathBuf,
        #[arg(long, default_value = "Q")]
        field: String,
        /// Tail length offset selecting a member of the realization family.
        #[arg(long, default_value_t = 0)]
        variant: usize,
        /// Output file for the algebra (standard output if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output file for the report (standard output if omitted).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Compare the automorphism group of an algebra with a given group.
    Verify { group: PathBuf, algebra: PathBuf },
}

/// A failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Display) -> Failure {
    Failure { code, message: message.to_string() }
}

impl From<ReadError> for Failure {
    fn from(e: ReadError) -> Self {
        match e {
            ReadError::Syntax(_) => fail(EXIT_PARSE, e),
            ReadError::Invalid(_) => fail(EXIT_INVALID, e),
            ReadError::TooLarge(_) => fail(EXIT_CAP, e),
        }
    }
}

impl From<MonomialError> for Failure {
    fn from(e: MonomialError) -> Self {
        match e {
            MonomialError::NotRegular => fail(EXIT_NOT_REGULAR, e),
            MonomialError::GroupTooLarge(_) | MonomialError::TooLargeForBruteForce(_) => fail(EXIT_CAP, e),
            _ => fail(EXIT_INVALID, e),
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::GroupTooLarge(_) | GraphError::TooLargeForBruteForce(_) => fail(EXIT_CAP, e),
            _ => fail(EXIT_INVALID, e),
        }
    }
}

impl From<FunctorError> for Failure {
    fn from(e: FunctorError) -> Self {
        match e {
            FunctorError::NotRegular => fail(EXIT_NOT_REGULAR, e),
            FunctorError::NotInImage(_) => fail(EXIT_NOT_IN_IMAGE, e),
            _ => fail(EXIT_INVALID, e),
        }
    }
}

impl From<FruchtError> for Failure {
    fn from(e: FruchtError) -> Self {
        match e {
            FruchtError::RealizationFailed { .. } => fail(EXIT_REALIZATION_FAILED, e),
            FruchtError::NotRegular => fail(EXIT_NOT_REGULAR, e),
            FruchtError::ClosureTooLarge(_) | FruchtError::GroupTooLarge(_) => fail(EXIT_CAP, e),
        }
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::ClosureTooLarge(_) | GroupError::OrderTooLarge { .. } => fail(EXIT_CAP, e),
            _ => fail(EXIT_INVALID, e),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        fail(EXIT_PARSE, e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn kind_of(path: &Path, text: &str) -> Result<FileKind, Failure> {
    FileKind::detect(text).ok_or_else(|| fail(EXIT_PARSE, format!("{}: unrecognised header", path.display())))
}

fn parse_field(s: &str) -> Result<FieldDescriptor, Failure> {
    s.parse().map_err(|e: FieldError| match e {
        FieldError::NotPrime(_) => fail(EXIT_INVALID, e),
        _ => fail(EXIT_PARSE, format!("bad field `{s}`: {e}")),
    })
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", p.display()))),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn print_group(out: &mut dyn Write, group: &PermGroup, order: impl Display) -> Result<(), Failure> {
    write!(out, "{}", group.to_text())?;
    writeln!(out, "order: {order}")?;
    Ok(())
}

/// Runs the command line with `args` (including the program name) and
/// returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_PARSE
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            };
            return code;
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

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Build { graph, field, out: path } => {
            let field = parse_field(&field)?;
            let g = SimpleGraph::from_text(&read(&graph)?)?;
            emit(out, path.as_deref(), &build_algebra(&g, field).to_text())?;
            Ok(EXIT_OK)
        }
        Command::Aut { file, brute_force } => aut(&file, brute_force, out),
        Command::Iso { a, b } => iso(&a, &b, out),
        Command::Recover { algebra, out: path } => {
            let x = EvolutionAlgebra::from_text(&read(&algebra)?)?;
            let (g, m) = recover_graph(&x)?;
            emit(out, path.as_deref(), &g.to_text())?;
            write!(out, "{}", m.to_text())?;
            Ok(EXIT_OK)
        }
        Command::Realize { group, field, variant, out: path, report } => {
            let start = Instant::now();
            let field = parse_field(&field)?;
            let g = FiniteGroup::from_text(&read(&group)?)?;
            let r = realize(&g, variant)?;
            let x = build_algebra(&r.graph, field);
            let verdict = verify_realization(&g, &x)?;
            emit(out, path.as_deref(), &x.to_text())?;
            let mut text = format!(
                "group order: {}\nvariant: {}\ngraph vertices: {}\ngraph edges: {}\nalgebra dim: {}\n",
                g.order(),
                r.variant,
                r.graph.vertex_count(),
                r.graph.edge_count(),
                x.dim()
            );
            text.push_str(&report_lines(&verdict));
            text.push_str(&format!("wall time: {:.3} s\n", start.elapsed().as_secs_f64()));
            emit(out, report.as_deref(), &text)?;
            Ok(if verdict.isomorphic { EXIT_OK } else { EXIT_REALIZATION_FAILED })
        }
        Command::Verify { group, algebra } => {
            let g = FiniteGroup::from_text(&read(&group)?)?;
            let x = EvolutionAlgebra::from_text(&read(&algebra)?)?;
            let verdict = verify_realization(&g, &x)?;
            write!(out, "group order: {}\nalgebra dim: {}\n{}", g.order(), x.dim(), report_lines(&verdict))?;
            Ok(if verdict.isomorphic { EXIT_OK } else { EXIT_NOT_ISOMORPHIC })
        }
    }
}

fn report_lines(v: &VerificationReport) -> String {
    let scales: Vec<String> = v.scales.iter().map(ToString::to_string).collect();
    format!("aut order: {}\nscales: {}\nisomorphic: {}\n", v.aut_order, scales.join(" "), yes_no(v.isomorphic))
}

fn aut(file: &Path, brute_force: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let text = read(file)?;
    match kind_of(file, &text)? {
        FileKind::Graph => {
            let g = SimpleGraph::from_text(&text)?;
            let group =
                if brute_force { graph::brute_force_automorphisms(&g)? } else { graph::graph_automorphisms(&g) };
            print_group(out, &group, group.order())?;
        }
        FileKind::Algebra => {
            let x = EvolutionAlgebra::from_text(&text)?;
            let (group, order, ones) = if brute_force {
                let all = monomial::brute_force_automorphisms(&x)?;
                let ones = all.iter().all(|m| m.lambda().iter().all(|l| l.is_one()));
                (permutation_image(x.dim(), &all), all.len().to_string(), ones)
            } else {
                let auts = monomial::algebra_automorphisms(&x)?;
                let ones = auts.all_scales_one();
                (auts.permutations.clone(), auts.order().to_string(), ones)
            };
            print_group(out, &group, order)?;
            writeln!(out, "all scales = 1: {}", yes_no(ones))?;
        }
        other => {
            return Err(fail(EXIT_INVALID, format!("cannot compute automorphisms of a `{}` file", other.header())))
        }
    }
    Ok(EXIT_OK)
}

fn iso(a: &Path, b: &Path, out: &mut dyn Write) -> Result<i32, Failure> {
    let (ta, tb) = (read(a)?, read(b)?);
    let (ka, kb) = (kind_of(a, &ta)?, kind_of(b, &tb)?);
    if ka != kb {
        return Err(fail(EXIT_INVALID, format!("file kinds differ: `{}` vs `{}`", ka.header(), kb.header())));
    }
    let witness = match ka {
        FileKind::Graph => {
            let (g1, g2) = (SimpleGraph::from_text(&ta)?, SimpleGraph::from_text(&tb)?);
            graph::graph_isomorphism(&g1, &g2).map(|f| format!("map: {}\n", crate::text::join(&f.images)))
        }
        FileKind::Algebra => {
            let (x1, x2) = (EvolutionAlgebra::from_text(&ta)?, EvolutionAlgebra::from_text(&tb)?);
            monomial::algebra_isomorphism(&x1, &x2)?.map(|m| m.to_text())
        }
        FileKind::Group => {
            let (g1, g2) = (FiniteGroup::from_text(&ta)?, FiniteGroup::from_text(&tb)?);
            group_isomorphic(&g1, &g2)?.then(String::new)
        }
        other => return Err(fail(EXIT_INVALID, format!("cannot compare `{}` files", other.header()))),
    };
    match witness {
        Some(w) => {
            write!(out, "isomorphic: yes\n{w}")?;
            Ok(EXIT_OK)
        }
        None => {
            writeln!(out, "isomorphic: no")?;
            Ok(EXIT_NOT_ISOMORPHIC)
        }
    }
}
