//! Command-line front end. `run` returns the exit code: 0 ok, 1 domain error,
//! 2 usage error.

use std::collections::BTreeMap;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::families::{certify_edge, g0_level_graph, s3_family_member, FamilyId, PartitionFamily, PartitionSpec};
use crate::ktree::{
    density_witness_ht, density_witness_x3, h_member, h_tilde_member, kt_member,
    kt_prefix_consistent, kt_split_member, mirror, placed_decode, pred, pred_l, x3_member,
    Tristate, Verdict,
};
use crate::points::EpPoint;
use crate::seqcore::{dense_words, pair, prime_decode, unpair, Alphabet, PrimeCoder, Word};
use crate::verify::{Runner, ScanFamily};

#[derive(Parser, Debug)]
#[command(name = "dichotomy", version, about = "Dense words, placed words, example digraphs and property checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// ψ(n), s_n and w_n for n ≤ K
    Dense {
        #[arg(long = "n")]
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Cantor pairing
    Pair {
        #[command(subcommand)]
        op: PairOp,
    },
    /// Prime-power coding of ω-words
    Pcode {
        #[command(subcommand)]
        op: PcodeOp,
    },
    /// Placed binary words
    Placed {
        #[command(subcommand)]
        op: PlacedOp,
    },
    /// Membership of a point (or, for kt, a finite word) in a set
    Member(MemberArgs),
    /// Edge test with its certifying parameter
    Edge {
        #[arg(long)]
        family: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Finite level graph of G₀
    Graph {
        #[arg(long, default_value = "g0")]
        family: String,
        #[arg(long)]
        level: u32,
        #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
        format: GraphFormat,
    },
    /// Density witnesses in X₃ or H_t
    Witness {
        #[arg(long, value_name = "U", conflicts_with = "ht", required_unless_present = "ht")]
        x3: Option<String>,
        #[arg(long, num_args = 2, value_names = ["T", "U"])]
        ht: Option<Vec<String>>,
    },
    /// Run a verification suite; bounds as key=value
    Verify {
        #[arg(long)]
        suite: String,
        bounds: Vec<String>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Emit an in-cylinder edge for every cylinder of a depth
    Scan {
        #[arg(long)]
        family: String,
        #[arg(long)]
        depth: usize,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Include elapsed_ms in the report
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug)]
pub struct MemberArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    point: String,
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    i: Option<u64>,
    #[arg(long)]
    eps: Option<u8>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    bound: u64,
}

#[derive(Subcommand, Debug)]
pub enum PairOp {
    Encode { n: u64, p: u64 },
    Decode { q: u64 },
}

#[derive(Subcommand, Debug)]
pub enum PcodeOp {
    Decode {
        i: u64,
        #[arg(long)]
        bound: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum PlacedOp {
    Decode { u: String },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Dot,
    Json,
}

fn word_text(w: &Word) -> String {
    if w.is_empty() {
        "∅".into()
    } else {
        w.to_string()
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn bool_verdict(b: bool) -> Verdict {
    if b {
        Verdict::In
    } else {
        Verdict::Out
    }
}

fn parse_bounds(items: &[String]) -> Result<BTreeMap<String, u64>> {
    items
        .iter()
        .map(|s| {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bound {s:?} is not key=value")))?;
            let v = v
                .parse::<u64>()
                .map_err(|e| Error::Parse(format!("bound {k}: {e}")))?;
            Ok((k.to_string(), v))
        })
        .collect()
}

/// Output of a subcommand, and whether it counts as success.
struct Outcome {
    text: String,
    ok: bool,
}

impl From<String> for Outcome {
    fn from(text: String) -> Self {
        Outcome { text, ok: true }
    }
}

fn member(a: &MemberArgs) -> Result<String> {
    let family = a.family.to_ascii_lowercase();
    let t = || -> Result<Word> { Word::parse(Alphabet::Omega, a.t.as_deref().ok_or(Error::MissingParameter("--t"))?) };
    let bin = || EpPoint::parse(Alphabet::Binary, &a.point);
    let (verdict, certificate): (Verdict, Option<Tristate>) = match family.as_str() {
        // a bare word asks whether its cylinder meets K_t
        "kt" if !a.point.contains(';') => {
            let u = Word::parse(Alphabet::Binary, &a.point)?;
            (bool_verdict(kt_prefix_consistent(&t()?, &u)), None)
        }
        "kt" => (bool_verdict(kt_member(&t()?, &bin()?)), None),
        "kt0" | "kt1" => {
            let eps = (family == "kt1") as u8;
            (bool_verdict(kt_split_member(&t()?, eps, &bin()?)), None)
        }
        "h" => (bool_verdict(h_member(&t()?, &bin()?)), None),
        "htilde" => (bool_verdict(h_tilde_member(&t()?, &bin()?)), None),
        "x3" => {
            let r = x3_member(&bin()?);
            (r.verdict, Some(r))
        }
        "s3" => {
            let x = EpPoint::parse(Alphabet::Ternary, &a.point)?;
            let i = a.i.ok_or(Error::MissingParameter("--i"))?;
            let eps = a.eps.ok_or(Error::MissingParameter("--eps"))?;
            (bool_verdict(s3_family_member(i, eps, &x)), None)
        }
        _ => {
            let pf: PartitionFamily = family.parse()?;
            let alphabet = match pf {
                PartitionFamily::A2part => Alphabet::Omega,
                PartitionFamily::S3part => Alphabet::Ternary,
                PartitionFamily::KTpart => Alphabet::Binary,
            };
            let x = EpPoint::parse(alphabet, &a.point)?;
            let spec = PartitionSpec {
                family: pf,
                q: a.q.ok_or(Error::MissingParameter("--q"))?,
            };
            let p = a.p.ok_or(Error::MissingParameter("--p"))?;
            (spec.member(&PrimeCoder::with_bound(a.bound), p, &x)?, None)
        }
    };
    let mut out = json!({ "family": family, "point": a.point });
    let extra = match certificate {
        Some(c) => serde_json::to_value(c),
        None => serde_json::to_value(verdict),
    }
    .expect("serializable");
    out.as_object_mut().unwrap().extend(extra.as_object().unwrap().clone());
    Ok(out.to_string())
}

fn report_text(r: &crate::verify::VerifyReport, format: Format) -> String {
    match format {
        Format::Json => r.to_json(),
        Format::Text => {
            let mut s = format!(
                "{}: {} cases, {} failures\n",
                r.suite,
                r.cases_checked,
                r.failures.len()
            );
            for (k, v) in &r.branch_counts {
                s.push_str(&format!("  {k}: {v}\n"));
            }
            for f in &r.failures {
                s.push_str(&format!("  FAIL {}: expected {}, got {}\n", f.case, f.expected, f.got));
            }
            s.trim_end().to_string()
        }
    }
}

fn execute(cmd: &Command) -> Result<Outcome> {
    Ok(match cmd {
        Command::Dense { n, format } => {
            let rows: Vec<_> = (0..=*n).map(|k| (k, dense_words(k))).collect();
            match format {
                Format::Json => {
                    let v: Vec<_> = rows
                        .iter()
                        .map(|(k, d)| json!({ "n": k, "psi": d.psi, "s": d.s, "w": d.w }))
                        .collect();
                    to_json(&v).into()
                }
                Format::Text => {
                    let mut s = String::from("n\tpsi\ts\tw");
                    for (k, d) in &rows {
                        s.push_str(&format!("\n{k}\t{}\t{}\t{}", word_text(&d.psi), word_text(&d.s), d.w));
                    }
                    s.into()
                }
            }
        }
        Command::Pair { op } => match op {
            PairOp::Encode { n, p } => pair(*n, *p).to_string().into(),
            PairOp::Decode { q } => {
                let ix = unpair(*q);
                format!("n={} p={} M={}", ix.n, ix.p, ix.n + ix.p).into()
            }
        },
        Command::Pcode { op: PcodeOp::Decode { i, bound } } => word_text(&prime_decode(*i, *bound)?).into(),
        Command::Placed { op: PlacedOp::Decode { u } } => {
            let u = Word::parse(Alphabet::Binary, u)?;
            let info = placed_decode(&u).ok_or_else(|| Error::NotPlaced(u.to_string()))?;
            let mut v = serde_json::to_value(&info).expect("serializable");
            let obj = v.as_object_mut().unwrap();
            obj.insert("mirror".into(), json!(mirror(&u)?));
            obj.insert("pred".into(), json!(pred(&u)));
            obj.insert("pred_l".into(), json!(pred_l(&u, info.l)));
            v.to_string().into()
        }
        Command::Member(a) => member(a)?.into(),
        Command::Edge { family, left, right } => {
            let f: FamilyId = family.parse()?;
            let x = EpPoint::parse(f.alphabet(), left)?;
            let y = EpPoint::parse(f.alphabet(), right)?;
            match certify_edge(f, &x, &y)? {
                Some(e) => {
                    let mut v = serde_json::to_value(&e).expect("serializable");
                    v.as_object_mut().unwrap().insert("edge".into(), json!(true));
                    v.to_string().into()
                }
                None => json!({ "family": f, "left": x, "right": y, "edge": false }).to_string().into(),
            }
        }
        Command::Graph { family, level, format } => {
            if family.parse::<FamilyId>()? != FamilyId::G0 {
                return Err(Error::UnknownFamily(format!("{family} (only g0 has level graphs)")));
            }
            let g = g0_level_graph(*level)?;
            match format {
                GraphFormat::Dot => g.to_dot().trim_end().to_string().into(),
                GraphFormat::Json => g.to_json().into(),
            }
        }
        Command::Witness { x3, ht } => {
            let (x, cert) = match (x3, ht) {
                (Some(u), _) => {
                    let x = density_witness_x3(&Word::parse(Alphabet::Binary, u)?)?;
                    let c = x3_member(&x);
                    (x, json!({ "x3": c }))
                }
                (None, Some(tu)) => {
                    let t = Word::parse(Alphabet::Omega, &tu[0])?;
                    let x = density_witness_ht(&t, &Word::parse(Alphabet::Binary, &tu[1])?)?;
                    let c = x3_member(&x);
                    (x.clone(), json!({ "h": h_member(&t, &x), "x3": c }))
                }
                (None, None) => return Err(Error::MissingParameter("--x3 or --ht")),
            };
            let mut v = json!({ "point": x });
            v.as_object_mut().unwrap().extend(cert.as_object().unwrap().clone());
            v.to_string().into()
        }
        Command::Verify { suite, bounds, run } => {
            let runner = Runner::new(run.jobs, run.timing)?;
            let r = runner.run_suite(suite, &parse_bounds(bounds)?)?;
            Outcome {
                text: report_text(&r, run.format),
                ok: r.passed(),
            }
        }
        Command::Scan { family, depth, run } => {
            let f: ScanFamily = family.parse()?;
            let r = Runner::new(run.jobs, run.timing)?.scan(f, *depth)?;
            Outcome {
                text: report_text(&r, run.format),
                ok: r.passed(),
            }
        }
    })
}

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(o) => {
            let _ = writeln!(out, "{}", o.text);
            if o.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
