//! Command-line front end for the `delsarte` library.
//!
//! Every subcommand prints a human-readable table by default and a stable
//! JSON document with `--json`: keys are sorted and all numbers appear as
//! decimal or lowest-terms `p/q` strings, so output is diffable. Validation
//! errors go to standard error and exit with status 1; usage errors exit
//! with status 2.

use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use delsarte::dbscan::{load_weight_systems, scan_rank, ScanMode, ScanOptions, ScanRecord};
use delsarte::examples::{generate_extremal, liu_potential, verify_identity, ExtremalExample};
use delsarte::oracle::{mld_oracle, GroupMode, MldReport, OracleOptions, StrataMode};
use delsarte::potential::{parse_potential, serialize_potential, Atom, AtomKind, Potential};
use delsarte::report::{analyze, witness_json, AnalyzeOptions};
use delsarte::{certify, mld_even_subquotient, mld_formula, Certificate, Int};

#[derive(Parser)]
#[command(
    name = "delsarte",
    version,
    about = "Exact mirror data and minimal log discrepancies for Delsarte hypersurface quotients"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for one potential
    Analyze(AnalyzeArgs),
    /// Mirror potential and its weight data
    Mirror(MirrorArgs),
    /// Minimal log discrepancy of one quotient
    Mld(MldArgs),
    /// Construct the extremal example in dimension n
    GenExample(GenExampleArgs),
    /// Check the extremal family over a dimension range
    Verify(VerifyArgs),
    /// The pure-power comparison example in dimension n
    Liu(LiuArgs),
    /// Rank the weight systems in a file by best mld
    Scan(ScanArgs),
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["potential", "file"])))]
struct PotentialInput {
    /// Inline potential, e.g. "x0^2 + x1^3*x3 + x1*x2^5 + x2*x3^19"
    potential: Option<String>,
    /// Read the potential from this file instead
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
    /// Number of variables; inferred from the highest index otherwise
    #[arg(long)]
    vars: Option<usize>,
}

impl PotentialInput {
    fn load(&self) -> Result<Potential, String> {
        let text = match (&self.potential, &self.file) {
            (Some(inline), None) => inline.clone(),
            (None, Some(path)) => std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?,
            _ => unreachable!("clap enforces exactly one source"),
        };
        parse_potential(&text, self.vars).map_err(|e| e.to_string())
    }
}

#[derive(Args)]
struct OracleFlags {
    /// Cross-check with the exact toric oracle
    #[arg(long)]
    oracle: bool,
    /// Which strata the oracle visits
    #[arg(long, value_enum, default_value_t = StrataChoice::Exhaustive)]
    strata: StrataChoice,
    /// Cap on materialized group elements before the oracle gives up
    #[arg(long, value_name = "N", default_value_t = delsarte::DEFAULT_ELEMENT_BOUND)]
    group_bound: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrataChoice {
    Exhaustive,
    Remark,
}

impl From<StrataChoice> for StrataMode {
    fn from(choice: StrataChoice) -> StrataMode {
        match choice {
            StrataChoice::Exhaustive => StrataMode::Exhaustive,
            StrataChoice::Remark => StrataMode::Remark,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum QuotientChoice {
    /// Quotient by the full induced torus automorphisms
    #[value(name = "autT")]
    AutT,
    /// Quotient by the index-two subgroup of a squared-variable-plus-loop potential
    #[value(name = "even")]
    Even,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScanModeChoice {
    Pair,
    Variety,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: PotentialInput,
    #[command(flatten)]
    oracle: OracleFlags,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct MirrorArgs {
    #[command(flatten)]
    input: PotentialInput,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct MldArgs {
    #[command(flatten)]
    input: PotentialInput,
    /// Which quotient to measure
    #[arg(long, value_enum, default_value_t = QuotientChoice::AutT)]
    mode: QuotientChoice,
    #[command(flatten)]
    oracle: OracleFlags,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenExampleArgs {
    /// Dimension of the hypersurface (at least 2)
    n: usize,
    #[command(flatten)]
    oracle: OracleFlags,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Dimension or inclusive range, e.g. "3" or "2..8"
    #[arg(value_parser = parse_dimension_range)]
    range: DimensionRange,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct LiuArgs {
    /// Dimension of the hypersurface (at least 1)
    n: usize,
    #[command(flatten)]
    oracle: OracleFlags,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ScanArgs {
    /// Weight-system file: weights then degree per line, '#' comments
    file: PathBuf,
    /// Which quotient family to rank
    #[arg(long, value_enum, default_value_t = ScanModeChoice::Pair)]
    mode: ScanModeChoice,
    /// Reject weight systems whose weights do not sum to the degree
    #[arg(long)]
    cy_only: bool,
    /// Re-verify the best candidate of this many leading records
    #[arg(long, value_name = "K", default_value_t = 1)]
    check_top: usize,
    /// Worker count for the enumeration phase
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
    /// Cap on materialized group elements in the oracle cross-check
    #[arg(long, value_name = "N", default_value_t = delsarte::DEFAULT_ELEMENT_BOUND)]
    group_bound: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy)]
struct DimensionRange {
    lo: usize,
    hi: usize,
}

fn parse_dimension_range(text: &str) -> Result<DimensionRange, String> {
    let (lo, hi) = if let Some((a, b)) = text.split_once("..") {
        (a, b)
    } else {
        (text, text)
    };
    let lo: usize = lo
        .trim()
        .parse()
        .map_err(|_| format!("invalid dimension {:?}", lo.trim()))?;
    let hi: usize = hi
        .trim()
        .parse()
        .map_err(|_| format!("invalid dimension {:?}", hi.trim()))?;
    if lo > hi {
        return Err(format!("empty range {text:?}"));
    }
    Ok(DimensionRange { lo, hi })
}

fn main() -> ExitCode {
    // Die quietly when the read end of a pipe closes, e.g. `delsarte scan | head`.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => run_analyze(args),
        Command::Mirror(args) => run_mirror(args),
        Command::Mld(args) => run_mld(args),
        Command::GenExample(args) => run_gen_example(args),
        Command::Verify(args) => run_verify(args),
        Command::Liu(args) => run_liu(args),
        Command::Scan(args) => run_scan(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn print_kv(key: &str, value: impl Display) {
    println!("{key:<18} {value}");
}

fn joined<T: Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn tuple<T: Display>(items: impl IntoIterator<Item = T>) -> String {
    format!("({})", joined(items))
}

fn yes_no(flag: bool) -> &'static str {
    if flag {
        "yes"
    } else {
        "no"
    }
}

fn atom_text(atom: &Atom) -> String {
    let vars: Vec<String> = atom.indices.iter().map(|i| format!("x{i}")).collect();
    match atom.kind {
        AtomKind::Fermat => format!("fermat({})", vars[0]),
        AtomKind::Loop => format!("loop({})", vars.join(" -> ")),
        AtomKind::Chain => format!("chain({})", vars.join(" -> ")),
    }
}

fn witness_text(report: &MldReport) -> String {
    use delsarte::oracle::{MldWitness, StratumCase};
    match &report.witness {
        MldWitness::MirrorWeight { index } => format!("mirror charge of x{index}"),
        MldWitness::Stratum {
            stratum,
            case,
            element,
        } => {
            let vars = joined(stratum.iter().map(|i| format!("x{i}")));
            let kind = match case {
                StratumCase::MeetsHypersurface => "meets the hypersurface".to_string(),
                StratumCase::BaseLocus { transverse } => {
                    format!("base locus, transverse x{transverse}")
                }
            };
            format!(
                "stratum {{{vars}}} ({kind}), element {}",
                tuple(element.iter())
            )
        }
        MldWitness::SmoothCap => "every stabilizer age is at least 1".to_string(),
    }
}

fn run_analyze(args: AnalyzeArgs) -> Result<(), String> {
    let potential = args.input.load()?;
    let options = AnalyzeOptions {
        oracle: args.oracle.oracle,
        strata: args.oracle.strata.into(),
        element_bound: args.oracle.group_bound,
    };
    let report = analyze(&potential, &options).map_err(|e| e.to_string())?;
    if args.json {
        println!("{}", report.to_json());
        return Ok(());
    }
    let cert = &report.certificate;
    print_kv("potential", serialize_potential(&cert.potential));
    print_kv(
        "atoms",
        cert.atoms
            .iter()
            .map(atom_text)
            .collect::<Vec<_>>()
            .join(" + "),
    );
    print_kv("determinant", cert.exponent_matrix.determinant());
    print_kv("weights", tuple(&cert.charges.weights));
    print_kv("degree", &cert.charges.degree);
    print_kv("charges", tuple(&cert.charges.charges));
    print_kv("mirror weights", tuple(&cert.mirror.weights));
    print_kv("mirror degree", &cert.mirror.degree);
    print_kv("mirror charges", tuple(&cert.mirror.charges));
    print_kv(
        "mirror potential",
        serialize_potential(&delsarte::transpose_potential(&cert.exponent_matrix)),
    );
    print_kv("calabi-yau", yes_no(cert.calabi_yau));
    print_kv("well-formed", yes_no(cert.well_formed));
    print_kv("quasismooth", yes_no(cert.quasismooth.verdict));
    print_kv("|Aut_F|", &cert.orders.aut_f);
    print_kv("|j_F|", &cert.orders.j_f);
    print_kv("|Aut_T|", &cert.orders.aut_t);
    match &report.mld {
        Some(value) => print_kv("mld (formula)", value),
        None => print_kv("mld (formula)", "not applicable"),
    }
    if let Some(value) = &report.mld_even {
        print_kv("mld (even)", value);
    }
    if let Some(oracle) = &report.oracle {
        print_kv(
            "mld (oracle)",
            format!("{}  [{}]", oracle.value, witness_text(oracle)),
        );
    }
    if let Some(oracle) = &report.oracle_even {
        print_kv(
            "mld (oracle even)",
            format!("{}  [{}]", oracle.value, witness_text(oracle)),
        );
    }
    if let Some(note) = &report.oracle_error {
        print_kv("oracle", format!("skipped: {note}"));
    }
    if let Some(agreement) = report.agreement {
        print_kv("agreement", yes_no(agreement));
    }
    Ok(())
}

fn run_mirror(args: MirrorArgs) -> Result<(), String> {
    let potential = args.input.load()?;
    let cert = certify(&potential).map_err(|e| e.to_string())?;
    let mirror = delsarte::transpose_potential(&cert.exponent_matrix);
    if args.json {
        let value = json!({
            "potential": serialize_potential(&cert.potential),
            "mirrorPotential": serialize_potential(&mirror),
            "mirrorCharges": cert.mirror.charges.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            "mirrorWeights": cert.mirror.weights.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "mirrorDegree": cert.mirror.degree.to_string(),
        });
        println!("{value}");
        return Ok(());
    }
    print_kv("potential", serialize_potential(&cert.potential));
    print_kv("mirror potential", serialize_potential(&mirror));
    print_kv("mirror weights", tuple(&cert.mirror.weights));
    print_kv("mirror degree", &cert.mirror.degree);
    print_kv("mirror charges", tuple(&cert.mirror.charges));
    Ok(())
}

fn oracle_for(
    cert: &Certificate,
    mode: GroupMode,
    flags: &OracleFlags,
) -> (Option<MldReport>, Option<String>) {
    let options = OracleOptions {
        mode,
        strata: flags.strata.into(),
        element_bound: flags.group_bound,
    };
    match mld_oracle(cert, &options) {
        Ok(report) => (Some(report), None),
        Err(e) => (None, Some(e.to_string())),
    }
}

fn run_mld(args: MldArgs) -> Result<(), String> {
    let potential = args.input.load()?;
    let cert = certify(&potential).map_err(|e| e.to_string())?;
    let (value, group_mode, mode_name) = match args.mode {
        QuotientChoice::AutT => (
            mld_formula(&cert).map_err(|e| e.to_string())?,
            GroupMode::AutT,
            "autT",
        ),
        QuotientChoice::Even => (
            mld_even_subquotient(&cert).map_err(|e| e.to_string())?,
            GroupMode::EvenSubgroup,
            "even",
        ),
    };
    let (oracle, oracle_note) = if args.oracle.oracle {
        oracle_for(&cert, group_mode, &args.oracle)
    } else {
        (None, None)
    };
    let agreement = oracle.as_ref().map(|report| report.value == value);
    if args.json {
        let value = json!({
            "mld": value.to_string(),
            "mode": mode_name,
            "oracle": oracle.as_ref().map(|r| r.value.to_string()),
            "witness": oracle.as_ref().map(|r| witness_json(&r.witness)),
            "oracleError": oracle_note,
            "agreement": agreement,
        });
        println!("{value}");
        return Ok(());
    }
    print_kv("mld", &value);
    if let Some(report) = &oracle {
        print_kv(
            "oracle",
            format!("{}  [{}]", report.value, witness_text(report)),
        );
    }
    if let Some(note) = &oracle_note {
        print_kv("oracle", format!("skipped: {note}"));
    }
    if let Some(agreement) = agreement {
        print_kv("agreement", yes_no(agreement));
    }
    Ok(())
}

fn identity_parts(example: &ExtremalExample) -> (Int, Vec<String>) {
    let skip = usize::from(example.n % 2 == 0);
    let mut factors: Vec<String> = Vec::new();
    let mut product = Int::from(1);
    for b in &example.b[skip..] {
        factors.push(b.to_string());
        product *= b;
    }
    factors.push(example.v.to_string());
    product *= &example.v;
    (product, factors)
}

fn extremal_oracle_mode(example: &ExtremalExample) -> GroupMode {
    if example.n % 2 == 1 {
        GroupMode::AutT
    } else {
        GroupMode::EvenSubgroup
    }
}

fn run_gen_example(args: GenExampleArgs) -> Result<(), String> {
    let example = generate_extremal(args.n).map_err(|e| e.to_string())?;
    verify_identity(&example).map_err(|e| e.to_string())?;
    let (oracle, oracle_note) = if args.oracle.oracle {
        let cert = certify(&example.potential).map_err(|e| e.to_string())?;
        oracle_for(&cert, extremal_oracle_mode(&example), &args.oracle)
    } else {
        (None, None)
    };
    let agreement = oracle.as_ref().map(|report| report.value == example.mld);
    let (product, factors) = identity_parts(&example);
    if args.json {
        let value = json!({
            "n": example.n,
            "b": example.b.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "v": example.v.to_string(),
            "degree": example.degree.to_string(),
            "m": example.m.to_string(),
            "weights": example.weights.weights.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "potential": serialize_potential(&example.potential),
            "mld": example.mld.to_string(),
            "minMirrorCharge": example.min_mirror_charge.to_string(),
            "identity": true,
            "oracle": oracle.as_ref().map(|r| r.value.to_string()),
            "oracleError": oracle_note,
            "agreement": agreement,
        });
        println!("{value}");
        return Ok(());
    }
    print_kv("n", example.n);
    print_kv("b", tuple(&example.b));
    print_kv("v", &example.v);
    print_kv("degree", &example.degree);
    print_kv("m", &example.m);
    print_kv("weights", tuple(&example.weights.weights));
    print_kv("potential", serialize_potential(&example.potential));
    print_kv(
        "identity",
        format!(
            "{}*{} - 1 = {} = {}",
            example.m,
            example.degree,
            product,
            factors.join("*")
        ),
    );
    print_kv("mld", &example.mld);
    print_kv("min mirror charge", &example.min_mirror_charge);
    if let Some(report) = &oracle {
        print_kv(
            "oracle",
            format!("{}  [{}]", report.value, witness_text(report)),
        );
    }
    if let Some(note) = &oracle_note {
        print_kv("oracle", format!("skipped: {note}"));
    }
    if let Some(agreement) = agreement {
        print_kv("agreement", yes_no(agreement));
    }
    Ok(())
}

fn run_verify(args: VerifyArgs) -> Result<(), String> {
    for n in args.range.lo..=args.range.hi {
        let example = generate_extremal(n).map_err(|e| format!("n={n}: {e}"))?;
        verify_identity(&example).map_err(|e| format!("n={n}: {e}"))?;
        let gap_bound = if n >= 3 {
            let threshold = Int::from(1) << (1u32 << n);
            if example.m <= threshold {
                return Err(format!(
                    "n={n}: m = {} is not above the doubly exponential threshold {threshold}",
                    example.m
                ));
            }
            Some(true)
        } else {
            None
        };
        if args.json {
            let value = json!({
                "n": n,
                "degree": example.degree.to_string(),
                "m": example.m.to_string(),
                "mld": example.mld.to_string(),
                "identity": true,
                "gapBound": gap_bound,
            });
            println!("{value}");
        } else {
            let gap = match gap_bound {
                Some(_) => "  gap bound ok",
                None => "",
            };
            println!(
                "n={n}  degree={}  m={}  mld={}  identity ok{gap}",
                example.degree, example.m, example.mld
            );
        }
    }
    Ok(())
}

fn run_liu(args: LiuArgs) -> Result<(), String> {
    let example = liu_potential(args.n).map_err(|e| e.to_string())?;
    let cert = certify(&example.potential).map_err(|e| e.to_string())?;
    let mld = mld_formula(&cert).map_err(|e| e.to_string())?;
    if cert.charges.weights != example.expected_weights
        || cert.charges.degree != example.expected_degree
        || mld != example.expected_mld
    {
        return Err(format!(
            "computed data ({}, {}; mld {}) does not match the published family",
            tuple(&cert.charges.weights),
            cert.charges.degree,
            mld
        ));
    }
    let (oracle, oracle_note) = if args.oracle.oracle {
        oracle_for(&cert, GroupMode::AutT, &args.oracle)
    } else {
        (None, None)
    };
    let agreement = oracle.as_ref().map(|report| report.value == mld);
    if args.json {
        let value = json!({
            "n": example.n,
            "potential": serialize_potential(&example.potential),
            "weights": cert.charges.weights.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "degree": cert.charges.degree.to_string(),
            "mld": mld.to_string(),
            "oracle": oracle.as_ref().map(|r| r.value.to_string()),
            "oracleError": oracle_note,
            "agreement": agreement,
        });
        println!("{value}");
        return Ok(());
    }
    print_kv("n", example.n);
    print_kv("potential", serialize_potential(&example.potential));
    print_kv("weights", tuple(&cert.charges.weights));
    print_kv("degree", &cert.charges.degree);
    print_kv("mld", &mld);
    if let Some(report) = &oracle {
        print_kv(
            "oracle",
            format!("{}  [{}]", report.value, witness_text(report)),
        );
    }
    if let Some(note) = &oracle_note {
        print_kv("oracle", format!("skipped: {note}"));
    }
    if let Some(agreement) = agreement {
        print_kv("agreement", yes_no(agreement));
    }
    Ok(())
}

fn scan_record_line(rank: usize, record: &ScanRecord) -> String {
    let mut line = format!("#{rank:<3} {}", record.system);
    match &record.best {
        Some(best) => {
            line.push_str(&format!(
                "  best {} [{}]  {}",
                best.mld,
                best.tag.label(),
                serialize_potential(&best.potential)
            ));
            if record.oracle_checked {
                line.push_str("  oracle ok");
            }
        }
        None => line.push_str("  no candidates"),
    }
    if let Some(note) = &record.error {
        line.push_str(&format!("  [{note}]"));
    }
    line
}

fn run_scan(args: ScanArgs) -> Result<(), String> {
    let systems = load_weight_systems(&args.file, args.cy_only).map_err(|e| e.to_string())?;
    let options = ScanOptions {
        mode: match args.mode {
            ScanModeChoice::Pair => ScanMode::Pair,
            ScanModeChoice::Variety => ScanMode::Variety,
        },
        check_top: args.check_top,
        jobs: args.jobs,
        element_bound: args.group_bound,
    };
    let records = scan_rank(&systems, &options);
    for (index, record) in records.iter().enumerate() {
        if args.json {
            println!("{}", record.to_json());
        } else {
            println!("{}", scan_record_line(index + 1, record));
        }
    }
    Ok(())
}
