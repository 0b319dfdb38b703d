//! `substrate`: parse, substitute, enumerate and check laws from the shell.
//!
//! Exit status is 0 on success, 1 when a law or a substitution fails and 2 on
//! usage errors (bad flags, unreadable or malformed input, ceilings).

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use substrate_core::contexts::{Mode, Renaming};
use substrate_core::enumeration::{count_table, enumerate_terms, Ceilings, EnumerationBounds};
use substrate_core::exec::Execution;
use substrate_core::laws::{all_pass, render_table, run_suite, LawBounds};
use substrate_core::sexpr::{parse_term, print_term};
use substrate_core::signature::Signature;
use substrate_core::substitution::{decompose, replace_shared, replace_split};
use substrate_core::term::{check_wellformed, rename, Term};

#[derive(Parser)]
#[command(name = "substrate", version, about = "Well-scoped syntax with binding in four structural modes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Signature file, one `name: (n1,...,nk)` per line.
    signature: PathBuf,
    /// cartesian, linear, affine or relevant.
    #[arg(long)]
    mode: Mode,
}

#[derive(Subcommand)]
enum Command {
    /// Run every applicable law check for a mode.
    CheckLaws {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        max_ctx: usize,
        #[arg(long, default_value_t = 3)]
        max_ops: usize,
        /// One JSON object per law instead of a table.
        #[arg(long)]
        json: bool,
        /// Evaluate instances on the calling thread only.
        #[arg(long)]
        sequential: bool,
    },
    /// Substitute PAYLOAD for the last position of BODY.
    Subst {
        #[command(flatten)]
        common: Common,
        /// Context of the body; its last position is replaced.
        #[arg(long)]
        ctx: usize,
        /// Context of the payload (defaults to CTX - 1 with --shared).
        #[arg(long)]
        payload_ctx: Option<usize>,
        /// Substitute over a shared context (cartesian and relevant).
        #[arg(long)]
        shared: bool,
        body: String,
        payload: String,
    },
    /// List the wellformed terms at a context with at most OPS operators.
    Enumerate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        ctx: usize,
        #[arg(long)]
        ops: usize,
        /// Print `ctx,ops,count` for terms with exactly OPS operators.
        #[arg(long)]
        count_only: bool,
        /// Print the count table for contexts 0..=CTX and sizes 0..=OPS.
        #[arg(long, value_enum)]
        table: Option<TableFormat>,
        /// One JSON object per term.
        #[arg(long)]
        json: bool,
    },
    /// Classify a pairing by which side uses the last position.
    ProductRule {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        ctx: usize,
        left: String,
        right: String,
        #[arg(long)]
        json: bool,
    },
    /// Apply a renaming such as `[2 1]` to a term.
    Rename {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        ctx: usize,
        #[arg(long)]
        map: String,
        #[arg(long)]
        codomain: Option<usize>,
        term: String,
    },
    /// Print a signature, or a term, in canonical form.
    Parse {
        signature: PathBuf,
        term: Option<String>,
        /// Also check the term at this context.
        #[arg(long)]
        ctx: Option<usize>,
        #[arg(long, default_value = "cartesian")]
        mode: Mode,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Text,
}

enum Failure {
    /// Law or substitution failure.
    Check(String),
    Usage(String),
}

type Outcome = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn check(e: impl std::fmt::Display) -> Failure {
    Failure::Check(e.to_string())
}

fn load_signature(path: &PathBuf) -> Result<Signature, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Signature::parse(&text).map_err(|e| usage(format!("{}:{e}", path.display())))
}

fn term(sig: &Signature, text: &str) -> Result<Term, Failure> {
    parse_term(sig, text).map_err(|e| usage(format!("in '{text}': {e}")))
}

fn emit(out: &mut impl Write, line: &str) -> Outcome {
    writeln!(out, "{line}").map_err(|e| usage(format!("write failed: {e}")))
}

fn term_json(sig: &Signature, t: &Term, ctx: usize) -> String {
    json!({ "ctx": ctx, "term": print_term(sig, t) }).to_string()
}

fn run(cli: Cli, out: &mut impl Write) -> Outcome {
    match cli.command {
        Command::CheckLaws {
            common,
            max_ctx,
            max_ops,
            json,
            sequential,
        } => {
            let sig = load_signature(&common.signature)?;
            let mut bounds = LawBounds::new(max_ctx, max_ops);
            if sequential {
                bounds = bounds.with_execution(Execution::Sequential);
            }
            let reports = run_suite(&sig, common.mode, bounds).map_err(usage)?;
            if json {
                for r in &reports {
                    emit(out, &r.to_json())?;
                }
            } else {
                write!(out, "{}", render_table(&reports)).map_err(usage)?;
            }
            if all_pass(&reports) {
                Ok(())
            } else {
                Err(check("law check failed"))
            }
        }
        Command::Subst {
            common,
            ctx,
            payload_ctx,
            shared,
            body,
            payload,
        } => {
            let sig = load_signature(&common.signature)?;
            let (body, payload) = (term(&sig, &body)?, term(&sig, &payload)?);
            if ctx == 0 {
                return Err(usage("--ctx must be at least 1: the body's last position is replaced"));
            }
            let n = ctx - 1;
            let (result, result_ctx) = if shared {
                if payload_ctx.is_some_and(|q| q != n) {
                    return Err(usage("with --shared the payload context must be CTX - 1"));
                }
                (replace_shared(&sig, common.mode, &body, n, &payload).map_err(check)?, n)
            } else {
                let q = payload_ctx.ok_or_else(|| usage("--payload-ctx is required without --shared"))?;
                (replace_split(&sig, common.mode, &body, n, &payload, q).map_err(check)?, n + q)
            };
            emit(out, &term_json(&sig, &result, result_ctx))
        }
        Command::Enumerate {
            common,
            ctx,
            ops,
            count_only,
            table,
            json,
        } => {
            let sig = load_signature(&common.signature)?;
            let ceilings = Ceilings::from_env();
            if let Some(format) = table {
                let t = count_table(&sig, common.mode, ctx, ops, ceilings).map_err(usage)?;
                let text = match format {
                    TableFormat::Csv => t.to_csv(),
                    TableFormat::Text => t.to_text(),
                };
                return write!(out, "{text}").map_err(usage);
            }
            if count_only {
                let t = count_table(&sig, common.mode, ctx, ops, ceilings).map_err(usage)?;
                return emit(out, &format!("{ctx},{ops},{}", t.get(ctx, ops)));
            }
            let bounds = EnumerationBounds {
                max_ops: ops,
                ctx,
                mode: common.mode,
            };
            for t in enumerate_terms(&sig, bounds, ceilings).map_err(usage)? {
                let line = if json { term_json(&sig, &t, ctx) } else { print_term(&sig, &t) };
                emit(out, &line)?;
            }
            Ok(())
        }
        Command::ProductRule {
            common,
            ctx,
            left,
            right,
            json,
        } => {
            let sig = load_signature(&common.signature)?;
            let (l, r) = (term(&sig, &left)?, term(&sig, &right)?);
            let s = decompose(&sig, common.mode, &l, &r, ctx).map_err(check)?;
            if json {
                let v = json!({
                    "tag": s.tag,
                    "left": { "ctx": s.left.1, "term": print_term(&sig, &s.left.0) },
                    "right": { "ctx": s.right.1, "term": print_term(&sig, &s.right.0) },
                });
                emit(out, &v.to_string())
            } else {
                emit(out, &format!("{:?}", s.tag))
            }
        }
        Command::Rename {
            common,
            ctx,
            map,
            codomain,
            term: text,
        } => {
            let sig = load_signature(&common.signature)?;
            let t = term(&sig, &text)?;
            let rho = Renaming::parse(&map, common.mode, codomain).map_err(usage)?;
            let r = rename(&sig, &t, ctx, &rho).map_err(check)?;
            emit(out, &term_json(&sig, &r, rho.codomain()))
        }
        Command::Parse {
            signature,
            term: text,
            ctx,
            mode,
        } => {
            let sig = load_signature(&signature)?;
            match text {
                None => write!(out, "{sig}{}", if sig.is_empty() { "" } else { "\n" }).map_err(usage),
                Some(text) => {
                    let t = term(&sig, &text)?;
                    if let Some(n) = ctx {
                        check_wellformed(&sig, mode, &t, n).map_err(check)?;
                    }
                    emit(out, &print_term(&sig, &t))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = run(cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
