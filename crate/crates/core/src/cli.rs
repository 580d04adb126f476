//! The `psghost` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::json;

use crate::elim::{run_elimination, verify_procedure};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::ghost::{
    all_line_evaluations_zero, ghost_report, is_ghost, line_ghost, partial_pencil_ghost, plain_union,
    punctured_pencil_ghost, vandermonde_check,
};
use crate::msets::{phi, PointMultiset};
use crate::plane::{Plane, ProjLine};
use crate::poly::{declared_field, HomPoly};
use crate::tomo::Solver;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Pencils,
    Complements,
    Vandermonde,
    Elim,
    Union,
    All,
}

#[derive(Debug, Parser)]
#[command(name = "psghost", version, about = "Power sum polynomials and ghosts in PG(2,q)")]
pub struct Cli {
    /// Field as "p", "p^h" or a prime power; read from the input header if omitted.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Modulus coefficients, constant term first (e.g. "1,0,1" for x^2+1).
    #[arg(long, global = true, value_delimiter = ',')]
    pub modulus: Option<Vec<u32>>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Power sum polynomial of a multiset file.
    Psp {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Evaluate a polynomial file at one line or at every line.
    Eval {
        #[arg(long = "in")]
        input: PathBuf,
        /// Line coordinates "a b c".
        #[arg(long)]
        line: Option<String>,
    },
    /// Rank of the power sum map and the size of the ghost group.
    GhostReport,
    /// All multisets with the power sum polynomial of a file.
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        /// Also list plain sets among the solutions.
        #[arg(long)]
        sets: bool,
        #[arg(long, default_value_t = 100)]
        limit: usize,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Random multisets per randomized check.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Integer elimination trace over a prime field.
    ElimTrace {
        /// Also write the CSV trace to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

/// Parses arguments and runs, writing to stdout/stderr. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, &text).map_err(Error::from),
                None => out.write_all(text.as_bytes()).map_err(Error::from),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return EXIT_INPUT;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn resolve_field(cli: &Cli, input: Option<&str>) -> Result<Arc<FieldSpec>> {
    let label = match (&cli.field, input.and_then(declared_field)) {
        (Some(f), _) => f.clone(),
        (None, Some(f)) => f,
        (None, None) => return Err(Error::InvalidField("no --field given and no header to infer it from".into())),
    };
    let spec: FieldSpec = label.parse()?;
    let spec = match &cli.modulus {
        Some(m) => {
            let custom = FieldSpec::with_modulus(spec.characteristic(), m.clone())?;
            if custom.degree() != spec.degree() {
                return Err(Error::InvalidField(format!("modulus has degree {}, field {label} needs {}", custom.degree(), spec.degree())));
            }
            custom
        }
        None => spec,
    };
    Ok(Arc::new(spec))
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap_or_default();
    s.push('\n');
    s
}

fn poly_json(g: &HomPoly) -> serde_json::Value {
    json!({
        "field": g.field().to_string(),
        "polynomial": g.to_string(),
        "terms": g.terms().map(|(m, c)| json!({"i": m.i, "j": m.j, "coeff": c.value()})).collect::<Vec<_>>(),
    })
}

fn execute(cli: &Cli) -> Result<(String, i32)> {
    match &cli.command {
        Command::Psp { input } => {
            let text = read(input)?;
            let field = resolve_field(cli, Some(&text))?;
            let set = PointMultiset::parse(&text, &field)?;
            let g = phi(&set);
            let body = match cli.format {
                Format::Json => pretty(&poly_json(&g)),
                _ => g.to_text(),
            };
            Ok((body, EXIT_OK))
        }
        Command::Eval { input, line } => {
            let text = read(input)?;
            let field = resolve_field(cli, Some(&text))?;
            let g = HomPoly::parse(&text, &field)?;
            let lines = match line {
                Some(s) => vec![ProjLine::parse(&field, s)?],
                None => crate::plane::enumerate_lines(&field),
            };
            let values: Vec<(ProjLine, u32)> = lines.into_iter().map(|l| (l, g.evaluate(&l).value())).collect();
            let body = match cli.format {
                Format::Json => pretty(&json!(values
                    .iter()
                    .map(|(l, v)| json!({"line": l.values(), "value": v}))
                    .collect::<Vec<_>>())),
                Format::Csv => {
                    let mut s = String::from("a,b,c,value\n");
                    for (l, v) in &values {
                        let [a, b, c] = l.values();
                        s.push_str(&format!("{a},{b},{c},{v}\n"));
                    }
                    s
                }
                Format::Text => values.iter().map(|(l, v)| format!("{l} : {v}\n")).collect(),
            };
            Ok((body, EXIT_OK))
        }
        Command::GhostReport => {
            let field = resolve_field(cli, None)?;
            let report = ghost_report(field)?;
            let body = match cli.format {
                Format::Json => pretty(&report.to_json()),
                _ => report.to_text(),
            };
            Ok((body, EXIT_OK))
        }
        Command::Solve { input, sets, limit } => {
            let text = read(input)?;
            let field = resolve_field(cli, Some(&text))?;
            let g = HomPoly::parse(&text, &field)?;
            let solver = Solver::new(field)?;
            let coset = solver.solve(&g)?;
            let found = if *sets && coset.is_consistent() {
                Some(solver.set_solutions(&g, *limit)?)
            } else {
                None
            };
            let code = if coset.is_consistent() { EXIT_OK } else { EXIT_INCONSISTENT };
            let body = match cli.format {
                Format::Json => {
                    let mut v = coset.to_json();
                    if let Some(e) = &found {
                        v["sets"] = json!(e.solutions.iter().map(PointMultiset::to_text).collect::<Vec<_>>());
                        v["sets_exhaustive"] = json!(e.exhaustive);
                    }
                    pretty(&v)
                }
                _ => {
                    let mut s = coset.to_text();
                    if let Some(e) = &found {
                        let scope = if e.exhaustive { "all" } else { "partial search" };
                        s.push_str(&format!("\n# plain sets: {} ({scope})\n", e.solutions.len()));
                        for set in &e.solutions {
                            s.push('\n');
                            s.push_str(&set.to_text());
                        }
                    }
                    s
                }
            };
            Ok((body, code))
        }
        Command::Verify { suite, seed, samples } => {
            let field = resolve_field(cli, None)?;
            let checks = run_suite(&field, *suite, *seed, *samples)?;
            let passed = checks.iter().all(|c| c.passed);
            let body = match cli.format {
                Format::Json => pretty(&json!({
                    "field": field.to_string(),
                    "suite": format!("{suite:?}").to_lowercase(),
                    "seed": seed,
                    "passed": passed,
                    "checks": checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
                })),
                _ => {
                    let mut s: String = checks.iter().map(|c| format!("{c}\n")).collect();
                    s.push_str(if passed { "all checks passed\n" } else { "some checks FAILED\n" });
                    s
                }
            };
            Ok((body, if passed { EXIT_OK } else { EXIT_VERIFY_FAILED }))
        }
        Command::ElimTrace { trace } => {
            let field = resolve_field(cli, None)?;
            if field.degree() != 1 {
                return Err(Error::Domain("the elimination runs over prime fields only".into()));
            }
            let states = run_elimination(field.characteristic())?;
            let csv: String = states.iter().map(|s| s.to_csv()).collect::<Vec<_>>().join("\n");
            if let Some(path) = trace {
                fs::write(path, &csv)?;
            }
            let body = match cli.format {
                Format::Json => pretty(&json!(states
                    .iter()
                    .map(|s| json!({
                        "step": s.n,
                        "rows": s.rows.iter().map(ToString::to_string).collect::<Vec<_>>(),
                        "cols": s.cols.iter().map(ToString::to_string).collect::<Vec<_>>(),
                        "values": (0..s.values.rows()).map(|r| s.values.row(r).iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    }))
                    .collect::<Vec<_>>())),
                _ => csv,
            };
            Ok((body, EXIT_OK))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn check(name: impl Into<String>, ok: usize, total: usize) -> Check {
    Check {
        name: name.into(),
        passed: ok == total,
        detail: format!("{ok}/{total}"),
    }
}

/// Runs one verification suite; `seed` fixes every random choice.
pub fn run_suite(field: &Arc<FieldSpec>, suite: Suite, seed: u64, samples: usize) -> Result<Vec<Check>> {
    let plane = Plane::new(field.clone());
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Pencils {
        out.extend(pencil_checks(&plane, false)?);
    }
    if all || suite == Suite::Complements {
        out.extend(pencil_checks(&plane, true)?);
    }
    if all || suite == Suite::Vandermonde {
        out.push(vandermonde_checks(&plane, seed, samples));
    }
    if all || suite == Suite::Union {
        out.push(union_check(&plane)?);
    }
    if suite == Suite::Elim || (all && field.degree() == 1) {
        if field.degree() != 1 {
            return Err(Error::Domain("the elimination runs over prime fields only".into()));
        }
        let r = verify_procedure(field.characteristic())?;
        let steps = r.steps.len();
        out.push(Check {
            name: "elimination".into(),
            passed: r.passed(),
            detail: format!(
                "{steps} steps, {} closed-form cells, {} divisibility checks, image rank {}, {} mismatches",
                r.closed_form_cells,
                r.divisibility_checks,
                r.image_rank,
                r.discrepancies.len()
            ),
        });
        for d in r.discrepancies.iter().take(20) {
            out.push(Check {
                name: "elimination mismatch".into(),
                passed: false,
                detail: d.to_string(),
            });
        }
    }
    Ok(out)
}

fn pencil_checks(plane: &Plane, complements: bool) -> Result<Vec<Check>> {
    let field = plane.field();
    let p = field.characteristic();
    let q = field.order();
    let full = PointMultiset::full(field.clone());
    let test = |s: PointMultiset| -> Result<bool> {
        if complements {
            Ok(is_ghost(&s.complement_in(&full)?))
        } else {
            Ok(is_ghost(&s))
        }
    };
    let prefix = if complements { "complement of " } else { "" };
    let mut out = Vec::new();

    let mut ok = 0;
    for line in plane.lines() {
        ok += usize::from(test(line_ghost(plane, line)?)?);
    }
    out.push(check(format!("{prefix}lines"), ok, plane.lines().len()));

    let max_lambda = q / p;
    for lambda in 0..=max_lambda {
        let mut ok = 0;
        for v in plane.points() {
            ok += usize::from(test(partial_pencil_ghost(plane, v, lambda)?)?);
        }
        out.push(check(format!("{prefix}partial pencils lambda={lambda}"), ok, plane.points().len()));
    }
    for lambda in 0..=max_lambda {
        if lambda * p >= q {
            continue;
        }
        let mut ok = 0;
        for v in plane.points() {
            ok += usize::from(test(punctured_pencil_ghost(plane, v, lambda)?)?);
        }
        out.push(check(format!("{prefix}punctured pencils lambda={lambda}"), ok, plane.points().len()));
    }
    Ok(out)
}

/// Random multiset with multiplicities uniform in 0..p.
pub fn random_multiset(field: &Arc<FieldSpec>, rng: &mut StdRng) -> PointMultiset {
    let p = field.characteristic();
    let n = crate::plane::plane_size(field.order());
    let mult = (0..n).map(|_| rng.gen_range(0..p)).collect();
    PointMultiset::from_mults(field.clone(), mult).expect("multiplicities below p")
}

fn vandermonde_checks(plane: &Plane, seed: u64, samples: usize) -> Check {
    let field = plane.field();
    let agree = |s: &PointMultiset| {
        let g = is_ghost(s);
        g == vandermonde_check(plane, s) && g == all_line_evaluations_zero(plane, s)
    };
    let n = plane.size();
    let (mut ok, mut total) = (0, 0);
    if n <= 13 {
        for mask in 0u32..(1 << n) {
            let mult = (0..n).map(|k| (mask >> k) & 1).collect();
            let s = PointMultiset::from_mults(field.clone(), mult).expect("0/1 multiplicities");
            ok += usize::from(agree(&s));
            total += 1;
        }
    }
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..samples {
        ok += usize::from(agree(&random_multiset(field, &mut rng)));
        total += 1;
    }
    check("ghost <=> vandermonde <=> line evaluations", ok, total)
}

fn union_check(plane: &Plane) -> Result<Check> {
    let field = plane.field();
    let x0 = line_ghost(plane, &ProjLine::from_values(field, [1, 0, 0])?)?;
    let z0 = line_ghost(plane, &ProjLine::from_values(field, [0, 0, 1])?)?;
    let u = plain_union(&x0, &z0)?;
    let g = phi(&u);
    let lines_ok = is_ghost(&x0) && is_ghost(&z0);
    if field.order() == 2 {
        let mut y = HomPoly::zero(field.clone());
        y.set_coeff(0, 1, crate::field::FieldElement::ONE)?;
        Ok(Check {
            name: "union of lines X=0, Z=0".into(),
            passed: lines_ok && g == y,
            detail: format!("lines give 0: {lines_ok}; union gives {g}"),
        })
    } else {
        Ok(Check {
            name: "union of lines X=0, Z=0".into(),
            passed: lines_ok && !g.is_zero(),
            detail: format!("lines give 0: {lines_ok}; union is a ghost: {}", g.is_zero()),
        })
    }
}
