//! `umf`: verify matrix factorizations over GF(2^k) and run the check suite.
//!
//! Exit status: 0 success, 1 verification failure, 2 usage or input error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use umf_core::cohomwin::{self, find_critical_points};
use umf_core::groebner::{self, minimal_polynomial, QuotientRing, TermOrder};
use umf_core::mfcore::{double, search_factorizations, verify_mf, Morphism, UngradedMF};
use umf_core::mffile::{parse_field_arg, MfFile};
use umf_core::ringpoly::Exponents;
use umf_core::rp2::{self, Rp2Context};
use umf_core::sample::DEFAULT_SEED;
use umf_core::suite::{run_suite, SuiteConfig};
use umf_core::{Error, Exec, FieldElem, FieldSpec, Ring, RingMatrix, RingPoly};

#[derive(Parser, Debug)]
#[command(name = "umf", version, about = "Ungraded matrix factorizations over GF(2^k)")]
struct Cli {
    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Run single-threaded.
    #[arg(long, global = true)]
    serial: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check Q^2 = W Id.
    Verify { file: PathBuf },
    /// Emit forget(double(X)) as an MF file.
    Double { file: PathBuf },
    /// Window cohomology dimensions of Hom(X, Y) for d = 1..dmax.
    Cohomology {
        file: PathBuf,
        /// Target factorization; defaults to the source.
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        dmax: u32,
    },
    /// Jacobian ring of a Laurent potential.
    Jacobian {
        #[arg(long)]
        potential: String,
        /// Ring descriptor, `vars laurent:flags`.
        #[arg(long, default_value = "x,y laurent:1,1")]
        ring: String,
        #[arg(long, default_value = "2^1")]
        field: String,
    },
    /// Reduce a closed endomorphism of the projective-plane factorization to alpha * Id.
    Reduce {
        /// 4x4 matrix, rows separated by `;`; defaults to F_alpha.
        #[arg(long)]
        matrix: Option<String>,
        #[arg(long, default_value = "2^1")]
        field: String,
    },
    /// Local cohomology of End(X) at a point, or at every critical point.
    Evaluate {
        file: PathBuf,
        /// Coordinates as `{n}` or `n`; omitted means all critical points.
        #[arg(long)]
        point: Option<String>,
        /// Field of the point; defaults to the file's field.
        #[arg(long)]
        field: Option<String>,
    },
    /// Exhaustive search for size-n factorizations with a fixed monomial support.
    Search {
        #[arg(long)]
        potential: String,
        #[arg(long, default_value = "x,y laurent:0,0")]
        ring: String,
        #[arg(long, default_value = "2^1")]
        field: String,
        #[arg(long, default_value_t = 1)]
        size: usize,
        /// Support monomials separated by `;`, e.g. `x;y`.
        #[arg(long)]
        support: String,
        #[arg(long, default_value_t = 24)]
        budget_bits: u64,
    },
    /// Run every check.
    Suite {
        #[arg(long, default_value = "2^1")]
        field: String,
        #[arg(long, default_value_t = 6)]
        dmax: u32,
        #[arg(long, default_value_t = 24)]
        budget_bits: u64,
        #[arg(long, default_value_t = 100)]
        samples: u64,
    },
    /// Parse an MF file and print its canonical form.
    ParseCheck { file: PathBuf },
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

fn input_error(e: Error) -> Failure {
    Failure {
        code: 2,
        message: e.to_string(),
    }
}

fn check_error(e: Error) -> Failure {
    let code = match e {
        Error::Syntax { .. }
        | Error::UnknownVariable(_)
        | Error::NegativeExponent(_)
        | Error::InvalidField(_)
        | Error::InvalidRing(_)
        | Error::BudgetExceeded { .. } => 2,
        _ => 1,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

fn read_file(path: &Path) -> Result<MfFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })?;
    MfFile::parse(&text).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })
}

fn read_mf(path: &Path) -> Result<UngradedMF, Failure> {
    read_file(path)?.into_mf().map_err(|e| Failure {
        code: 1,
        message: format!("{}: {e}", path.display()),
    })
}

/// Text lines and `key=value` records of one command.
struct Report {
    format: Format,
    out: String,
    ok: bool,
}

impl Report {
    fn new(format: Format) -> Self {
        Report {
            format,
            out: String::new(),
            ok: true,
        }
    }

    fn text(&mut self, line: impl AsRef<str>) {
        if self.format == Format::Text {
            let _ = writeln!(self.out, "{}", line.as_ref());
        }
    }

    fn record(&mut self, line: impl AsRef<str>) {
        if self.format == Format::Records {
            let _ = writeln!(self.out, "{}", line.as_ref());
        }
    }

    fn raw(&mut self, s: &str) {
        self.out.push_str(s);
    }
}

fn compact(p: &RingPoly) -> String {
    p.to_string().replace(' ', "")
}

fn parse_point(text: &str, field: &FieldSpec) -> Result<Vec<FieldElem>, Failure> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            let digits = s.strip_prefix('{').and_then(|s| s.strip_suffix('}')).unwrap_or(s);
            let v: u32 = digits.parse().map_err(|_| Failure {
                code: 2,
                message: format!("bad field element `{s}`"),
            })?;
            field.elem(v).map_err(input_error)
        })
        .collect()
}

fn fmt_point(p: &[FieldElem]) -> String {
    p.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
}

fn run(cli: Cli) -> Result<Report, Failure> {
    let exec = if cli.serial { Exec::Serial } else { Exec::Parallel };
    let mut rep = Report::new(cli.format);
    let emits_file = matches!(cli.command, Command::Double { .. } | Command::ParseCheck { .. });
    match cli.command {
        Command::Verify { file } => {
            let f = read_file(&file)?;
            let v = f.verify().map_err(check_error)?;
            rep.ok = v.ok;
            let status = if v.ok { "OK" } else { "FAIL" };
            rep.text(format!("Q² = W·Id: {status}"));
            if !v.ok {
                rep.text(format!("residual terms: {}", v.residual_terms()));
            }
            rep.record(format!("ok={} residual_terms={}", v.ok, v.residual_terms()));
        }
        Command::Double { file } => {
            let x = read_mf(&file)?;
            let fx = double(&x).forget();
            let v = verify_mf(fx.matrix(), fx.potential()).map_err(check_error)?;
            rep.ok = v.ok;
            rep.raw(&MfFile::from_mf(&fx).to_string());
        }
        Command::Cohomology { file, target, dmax } => {
            let x = read_mf(&file)?;
            let y = match target {
                Some(t) => read_mf(&t)?,
                None => x.clone(),
            };
            let h = cohomwin::cohomology_dims(&x, &y, dmax, exec).map_err(check_error)?;
            for (i, v) in h.iter().enumerate() {
                let d = i + 1;
                let win = cohomwin::Window::symmetric(x.ring(), d as u32);
                rep.text(format!("d={d} window {win}: dim H = {v}"));
                rep.record(format!("h[{d}]={v}"));
            }
        }
        Command::Jacobian { potential, ring, field } => {
            let field = parse_field_arg(&field).map_err(input_error)?;
            let ring = Ring::parse_descriptor(field, &ring).map_err(input_error)?;
            let w = RingPoly::parse(&potential, &ring).map_err(input_error)?;
            let n = ring.nvars();
            // Later variables dominate, so the staircase favours the first.
            let order = TermOrder::grevlex(n)
                .with_precedence((0..n).rev().collect())
                .map_err(check_error)?;
            let jac = groebner::laurent_jacobian_ideal(&w, &order).map_err(check_error)?;
            let q = QuotientRing::new(&jac.basis).map_err(check_error)?;
            let gens: Vec<String> = jac.basis.generators().iter().map(compact).collect();
            rep.record(format!("basis={}", gens.join(";")));
            match (q.dimension(), q.mult_matrix(0)) {
                (Some(dim), Some(m)) => {
                    let var = &ring.vars()[0];
                    let mp = minimal_polynomial(m, var).map_err(check_error)?;
                    rep.text(format!(
                        "dimension {dim}, minimal polynomial of {var}: {}",
                        compact(&mp)
                    ));
                    rep.record(format!("dimension={dim}"));
                    rep.record(format!("minpoly[{var}]={}", compact(&mp)));
                }
                (Some(0), None) => {
                    rep.text("dimension 0");
                    rep.record("dimension=0");
                }
                _ => {
                    rep.text("dimension infinite");
                    rep.record("dimension=inf");
                }
            }
            rep.text(format!("basis: {}", gens.join(", ")));
        }
        Command::Reduce { matrix, field } => {
            let field = parse_field_arg(&field).map_err(input_error)?;
            let ctx = Rp2Context::with_seed(&field, cli.seed).map_err(check_error)?;
            let f = match matrix {
                Some(m) => RingMatrix::parse(&m, ctx.ring()).map_err(input_error)?,
                None => ctx.f_alpha().clone(),
            };
            let r = rp2::reduce_endomorphism(&ctx, &f).map_err(check_error)?;
            let verified = r.witness.verify();
            rep.ok = verified;
            rep.text(format!("alpha = {}", r.alpha));
            rep.text(format!("witness verified: {}", if verified { "yes" } else { "no" }));
            rep.record(format!("alpha={}", compact(&r.alpha)));
            rep.record(format!("witness_verified={verified}"));
        }
        Command::Evaluate { file, point, field } => {
            let x = read_mf(&file)?;
            let ext = match field {
                Some(f) => parse_field_arg(&f).map_err(input_error)?,
                None => x.ring().field().clone(),
            };
            let points = match point {
                Some(p) => vec![parse_point(&p, &ext)?],
                None => find_critical_points(x.potential(), &ext).map_err(check_error)?,
            };
            if points.is_empty() {
                rep.text(format!("no critical points over GF(2^{})", ext.degree()));
                rep.record("critical_points=0");
            }
            let id = Morphism::identity(&x);
            for p in &points {
                let grad: Vec<bool> = (0..x.ring().nvars())
                    .map(|i| x.potential().partial(i).evaluate(p).map(|v| v.is_zero()))
                    .collect::<Result<_, _>>()
                    .map_err(check_error)?;
                let critical = grad.iter().all(|&z| z);
                let lc = cohomwin::certify_at_point(&x, &x, p, std::slice::from_ref(&id)).map_err(check_error)?;
                let id_nonexact = !lc.nonexact_classes().is_empty();
                rep.text(format!(
                    "point ({}): critical={critical} local dim={} Id non-exact={id_nonexact}",
                    fmt_point(p),
                    lc.local_dim
                ));
                rep.record(format!(
                    "point=({}) critical={critical} local_dim={} id_nonexact={id_nonexact}",
                    fmt_point(p),
                    lc.local_dim
                ));
            }
        }
        Command::Search {
            potential,
            ring,
            field,
            size,
            support,
            budget_bits,
        } => {
            let field = parse_field_arg(&field).map_err(input_error)?;
            let ring = Ring::parse_descriptor(field, &ring).map_err(input_error)?;
            let w = RingPoly::parse(&potential, &ring).map_err(input_error)?;
            let support: Vec<Exponents> = support
                .split(';')
                .map(|m| {
                    let p = RingPoly::parse(m, &ring)?;
                    match p.terms().collect::<Vec<_>>().as_slice() {
                        [(e, c)] if c.value() == 1 => Ok(Exponents::from_slice(e)),
                        _ => Err(Error::Precondition(format!("support entry `{m}` is not a monomial"))),
                    }
                })
                .collect::<Result<_, _>>()
                .map_err(input_error)?;
            let found = search_factorizations(&w, size, &support, budget_bits, exec).map_err(check_error)?;
            rep.text(format!("{} factorization(s) of size {size}", found.len()));
            rep.record(format!("found={}", found.len()));
            for (i, q) in found.iter().enumerate() {
                let rows: Vec<String> = (0..q.rows())
                    .map(|r| {
                        (0..q.cols())
                            .map(|c| compact(q.get(r, c)))
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .collect();
                rep.text(format!("[{}]", rows.join("; ")));
                rep.record(format!("result[{i}]={}", rows.join(";")));
            }
        }
        Command::Suite {
            field,
            dmax,
            budget_bits,
            samples,
        } => {
            let field = parse_field_arg(&field).map_err(input_error)?;
            let cfg = SuiteConfig {
                field,
                seed: cli.seed,
                exec,
                d_max: dmax,
                budget_bits,
                samples,
            };
            let report = run_suite(&cfg);
            rep.ok = report.all_pass();
            rep.text(report.to_string());
            for c in &report.checks {
                rep.record(format!("check[{}]={}", c.id, if c.pass { "PASS" } else { "FAIL" }));
            }
            rep.record(format!("passed={}", report.passed()));
            rep.record(format!("failed={}", report.failed()));
        }
        Command::ParseCheck { file } => {
            let f = read_file(&file)?;
            rep.raw(&f.to_string());
        }
    }
    if !emits_file {
        rep.record(format!("seed={}", cli.seed));
    }
    Ok(rep)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(rep) => {
            print!("{}", rep.out);
            if rep.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
