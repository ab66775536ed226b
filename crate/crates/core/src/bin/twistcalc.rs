use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use twistcalc::family::resolve_known_blocks;
use twistcalc::json::{self, int, tagged, to_stable_string};
use twistcalc::lefschetz::{excise_fiber_and_sections, family_fibration};
use twistcalc::{
    build_factorization, build_generalized, build_y, certify_relation, family_invariants, first_homology,
    linking_matrix, parse_word, print_word, spinal_tap, CurveModel, Error, FamilyParams, SpinalOpenBook,
    TapSpec, Verdict,
};

#[derive(Parser)]
#[command(name = "twistcalc", version, about = "Dehn twist words, Lefschetz fibration families, spinal open books and plumbings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FamilyArgs {
    /// Fiber genus (>= 2)
    #[arg(long)]
    g: u32,
    /// Base genus (>= 1)
    #[arg(long)]
    h: u32,
    /// Section self-intersection (<= 2h-2)
    #[arg(long, allow_hyphen_values = true)]
    n: i64,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants and factorization summary of X_{g,h,n}(m)
    Family {
        #[command(flatten)]
        params: FamilyArgs,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        json: bool,
    },
    /// Invariants of X_{g,h,n}(m) for m = 0..=m-max
    Table {
        #[command(flatten)]
        params: FamilyArgs,
        #[arg(long = "m-max")]
        m_max: u32,
        #[arg(long)]
        json: bool,
    },
    /// Compare two twist words in Sp(2g, Z) over the standard curve model
    Verify {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        json: bool,
    },
    /// Apply a spinal tap to a spinal open book
    Tap {
        #[arg(long)]
        book: PathBuf,
        #[arg(long)]
        spec: PathBuf,
    },
    /// Plumbing graph of Y_{g,h,n} or its generalization, with H_1
    Plumbing {
        #[command(flatten)]
        params: FamilyArgs,
        /// Number of top vertices
        #[arg(long)]
        k: Option<usize>,
        /// Number of bottom vertices
        #[arg(long)]
        l: Option<usize>,
        /// Comma-separated bottom framings, one per bottom vertex
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        framings: Option<Vec<i64>>,
    },
}

enum Failure {
    Domain(Error),
    Usage(String),
    Exit(u8),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::Domain(Error::Domain(format!("{}: {e}", path.display()))))
}

fn opt(x: Option<i64>) -> Value {
    x.map_or(Value::Null, int)
}

fn cell(x: Option<i64>) -> String {
    x.map_or_else(|| "-".into(), |v| v.to_string())
}

fn family(p: &FamilyArgs, m: u32, as_json: bool) -> Result<(), Failure> {
    let params = FamilyParams::new(p.g, p.h, p.n, m)?;
    let inv = family_invariants(p.g, p.h, p.n, m)?;
    let fact = build_factorization(params)?;
    let anonymous = fact
        .vanishing_cycles
        .iter()
        .filter(|c| matches!(c, twistcalc::family::VanishingCycle::Anonymous { .. }))
        .count();
    let word = print_word(&fact.word);
    if as_json {
        let v = json!({
            "params": {"g": p.g, "h": p.h, "n": int(p.n), "m": m, "k": int(params.k())},
            "invariants": {
                "M": int(inv.critical_points),
                "euler": int(inv.euler),
                "signature": opt(inv.signature),
                "c1_squared": opt(inv.c1_squared),
                "c2": opt(inv.c2),
                "hyperelliptic": inv.hyperelliptic,
            },
            "factorization": {
                "boundary_twist_power": int(fact.boundary_twist_power),
                "section_self_intersection": int(fact.section_self_intersection()),
                "vanishing_cycles": fact.vanishing_cycles.len(),
                "anonymous_vanishing_cycles": anonymous,
                "commutator_blocks": fact.commutator_blocks.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
                "word": word,
            },
        });
        print!("{}", to_stable_string(&tagged(json::SCHEMA_FAMILY, v)));
    } else {
        println!("X_{{{},{},{}}}({m})", p.g, p.h, p.n);
        println!("  M     = {}", inv.critical_points);
        println!("  e     = {}", inv.euler);
        println!("  sigma = {}", cell(inv.signature));
        println!("  c1^2  = {}", cell(inv.c1_squared));
        println!("  c2    = {}", cell(inv.c2));
        println!(
            "  vanishing cycles: {} ({anonymous} inside opaque blocks)",
            fact.vanishing_cycles.len()
        );
        println!("  commutator blocks: {}", fact.commutator_blocks.len());
        println!("  section self-intersection: {}", fact.section_self_intersection());
        println!("  t_delta^{} = {word}", fact.boundary_twist_power);
    }
    Ok(())
}

fn table(p: &FamilyArgs, m_max: u32, as_json: bool) -> Result<(), Failure> {
    let mut rows = Vec::new();
    for m in 0..=m_max {
        let inv = family_invariants(p.g, p.h, p.n, m)?;
        let (excised, _) = excise_fiber_and_sections(&family_fibration(p.g, p.h, p.n, m)?, &["S"])?;
        rows.push((m, inv, twistcalc::euler_characteristic(&excised)));
    }
    if as_json {
        let v = json!({
            "params": {"g": p.g, "h": p.h, "n": int(p.n)},
            "rows": rows.iter().map(|(m, inv, ex)| json!({
                "m": m,
                "M": int(inv.critical_points),
                "euler": int(inv.euler),
                "signature": opt(inv.signature),
                "c1_squared": opt(inv.c1_squared),
                "euler_excised": int(*ex),
            })).collect::<Vec<_>>(),
        });
        print!("{}", to_stable_string(&tagged(json::SCHEMA_TABLE, v)));
    } else {
        println!("{:>4} {:>8} {:>8} {:>8} {:>8} {:>10}", "m", "M", "e", "sigma", "c1^2", "e(excised)");
        for (m, inv, ex) in &rows {
            println!(
                "{:>4} {:>8} {:>8} {:>8} {:>8} {:>10}",
                m,
                inv.critical_points,
                inv.euler,
                cell(inv.signature),
                cell(inv.c1_squared),
                ex
            );
        }
    }
    Ok(())
}

fn verify(lhs: &Path, rhs: &Path, genus: u32, as_json: bool) -> Result<(), Failure> {
    let model = CurveModel::standard(genus)?;
    let l = resolve_known_blocks(&parse_word(&read(lhs)?)?, genus)?;
    let r = resolve_known_blocks(&parse_word(&read(rhs)?)?, genus)?;
    let verdict = certify_relation(&l, &r, &model)?;
    if as_json {
        let v = serde_json::to_value(&verdict).expect("verdicts serialize");
        print!("{}", to_stable_string(&tagged(json::SCHEMA_VERDICT, v)));
    } else {
        match &verdict {
            Verdict::Verified => println!("verified: both sides act identically on H_1"),
            Verdict::Refuted {
                witness,
                lhs_image,
                rhs_image,
            } => println!("refuted: on {witness} the left side gives {lhs_image}, the right side {rhs_image}"),
            Verdict::Indeterminate { opaque } => {
                println!("indeterminate: opaque blocks {}", opaque.join(", "))
            }
        }
    }
    match verdict {
        Verdict::Verified => Ok(()),
        Verdict::Refuted { .. } => Err(Failure::Exit(3)),
        Verdict::Indeterminate { .. } => Err(Failure::Exit(4)),
    }
}

fn tap(book: &Path, spec: &Path) -> Result<(), Failure> {
    let b: SpinalOpenBook = read_json(book)?;
    let s: TapSpec = read_json(spec)?;
    let (out, account, inverse) = spinal_tap(&b, &s)?;
    let v = json!({
        "book": tagged(json::SCHEMA_SPINAL_BOOK, serde_json::to_value(&out).expect("books serialize")),
        "account": account,
        "fold": inverse,
    });
    print!("{}", to_stable_string(&tagged(json::SCHEMA_TAP_RESULT, v)));
    Ok(())
}

fn plumbing(
    p: &FamilyArgs,
    k: Option<usize>,
    l: Option<usize>,
    framings: Option<Vec<i64>>,
) -> Result<(), Failure> {
    let graph = match (k, l, framings) {
        (None, None, None) => build_y(p.g, p.h, p.n)?,
        (k, l, f) => {
            let l = l.or(f.as_ref().map(Vec::len)).unwrap_or(1);
            let f = f.unwrap_or_else(|| vec![p.n; l]);
            build_generalized(k.unwrap_or(1), l, p.g, p.h, &f)?
        }
    };
    let h1 = first_homology(&graph)?;
    let v = json!({
        "graph": serde_json::to_value(&graph).expect("graphs serialize"),
        "linking_matrix": linking_matrix(&graph),
        "first_homology": h1,
    });
    print!("{}", to_stable_string(&tagged(json::SCHEMA_PLUMBING, v)));
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Family { params, m, json } => family(&params, m, json),
        Command::Table { params, m_max, json } => table(&params, m_max, json),
        Command::Verify {
            lhs,
            rhs,
            genus,
            json,
        } => verify(&lhs, &rhs, genus, json),
        Command::Tap { book, spec } => tap(&book, &spec),
        Command::Plumbing {
            params,
            k,
            l,
            framings,
        } => plumbing(&params, k, l, framings),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Exit(code)) => ExitCode::from(code),
    }
}
