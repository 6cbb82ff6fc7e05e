//! The `relaysec` command line.
//!
//! Exit codes: 0 success, 1 an expectation or verification failed, 2 bad
//! arguments or input, 3 a search budget ran out.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use relaysec_core::algebra::{build_mds_generator, singular_selections, verify_mds};
use relaysec_core::antilatin::{
    find_decodable_pair, is_anti_latin, is_decodable_pair, is_one_to_one_pair, max_mutual_set, reference_pair_d3,
    reference_pair_d4, xi_set, AntiLatinError, AntiLatinSquare, PairMode, PairSearch, SearchMethod,
};
use relaysec_core::attack::{
    classification_table, classify, classify_per_shot, enumerate_attacks, AttackClass, AttackError,
    SecurityLevel,
};
use relaysec_core::codes::{
    anti_latin_code, scalar_linear_code, standard_nonlinear_code, vector_linear_code, OneHopCode,
};
use relaysec_core::info::{check_han_collection, check_han_subsets, HanReport, JointDistribution, Variable};
use relaysec_core::network::{
    rwiretap_capacities, unicast_capacities, wiretap2_verify, LayeredUnicastNetwork, Node, NodeRole,
    WiretapIICode, WiretapNetwork,
};

use crate::formats::{
    parse_code, parse_distribution, parse_inline_rows, parse_inline_square, parse_layered, parse_matrix,
    parse_network, parse_rows, parse_square, write_matrix, write_square,
};
use crate::report::{self, envelope, mode_name, square_json};
use crate::{read_file, Error};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 0x005E_ED0F_2024;

/// Mutation budget of the randomized anti-Latin searches.
pub const DEFAULT_SEARCH_BUDGET: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "relaysec", version, about = "Exact security analysis of relay network codes")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Seed for every randomized search.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    pub seed: u64,
    /// Iteration cap for randomized searches.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify codes against wiretap attack classes.
    Classify(ClassifyArgs),
    /// Anti-Latin square checks and searches.
    Antilatin(AntiLatinArgs),
    /// r-wiretap or layered unicast capacities.
    Capacity(CapacityArgs),
    /// Both mincuts of a wiretap network.
    Mincut(MincutArgs),
    /// Build or verify MDS generators.
    Mds(MdsArgs),
    /// Wiretap channel II code: verify or encode.
    Wiretap2(Wiretap2Args),
    /// Han-type inequality check on a distribution file.
    Han(HanArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Linear code with relay randomness.
    ScalarLinear,
    #[value(alias = "standard-nonlinear")]
    Standard,
    AntiLatin,
    VectorLinear,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Code JSON file instead of a family.
    #[arg(long, conflicts_with = "family")]
    pub code: Option<PathBuf>,
    /// Alphabet size; a comma-separated list with `--table`.
    #[arg(long, value_delimiter = ',')]
    pub d: Vec<u32>,
    /// Attack classes (full names, or passive/active/adaptive); all four by
    /// default.
    #[arg(long, value_delimiter = ',', value_parser = parse_class)]
    pub class: Vec<AttackClass>,
    /// Let Eve re-pick her edges in every shot.
    #[arg(long)]
    pub per_shot: bool,
    /// Print the full summary table.
    #[arg(long)]
    pub table: bool,
    /// Exit 1 unless every table cell has its expected level.
    #[arg(long, requires = "table")]
    pub expect_table1: bool,
    #[arg(long)]
    pub selftest: bool,
}

/// Full class names plus the short column names.
pub fn parse_class(s: &str) -> Result<AttackClass, String> {
    match s {
        "passive" => Ok(AttackClass::DeterministicPassive),
        "active" => Ok(AttackClass::DeterministicActive),
        "adaptive" => Ok(AttackClass::AdaptivePassive),
        other => other.parse(),
    }
}

#[derive(Debug, Args)]
pub struct AntiLatinArgs {
    #[arg(long)]
    pub selftest: bool,
    #[command(subcommand)]
    pub action: Option<AntiLatinAction>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Decodable,
    OneToOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exact,
    Heuristic,
}

/// Squares are given as a file path or inline as `0,1,0;1,1,2;0,2,2`.
#[derive(Debug, Subcommand)]
pub enum AntiLatinAction {
    /// Check that every row and column repeats a value.
    Verify {
        #[arg(long)]
        square: String,
    },
    /// The set of Y4 values compatible with Y3 = z and message m.
    Xi {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        z: u32,
        #[arg(long)]
        m: u32,
    },
    /// Decodability and injectivity of a pair.
    PairCheck {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Find a decodable pair.
    Find {
        #[arg(long)]
        d: u32,
    },
    /// Largest pairwise compatible set.
    Maxset {
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Decodable)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
        method: MethodArg,
    },
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    /// Network text file.
    #[arg(long, conflicts_with = "layered")]
    pub net: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub r: u32,
    /// Layered network as inline JSON or a JSON file.
    #[arg(long)]
    pub layered: Option<String>,
    #[arg(long)]
    pub selftest: bool,
}

#[derive(Debug, Args)]
pub struct MincutArgs {
    #[arg(long)]
    pub net: Option<PathBuf>,
    #[arg(long)]
    pub selftest: bool,
}

#[derive(Debug, Args)]
pub struct MdsArgs {
    #[arg(long)]
    pub selftest: bool,
    #[command(subcommand)]
    pub action: Option<MdsAction>,
}

#[derive(Debug, Subcommand)]
pub enum MdsAction {
    /// Systematic `r × k` generator over `F_q`.
    Build {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        q: u64,
    },
    /// Check every `r × r` column selection of a matrix file.
    Verify {
        #[arg(long)]
        matrix: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct Wiretap2Args {
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    /// Encode this message (`k - r` symbols) instead of verifying.
    #[arg(long, value_delimiter = ',', requires = "scrambles")]
    pub message: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',')]
    pub scrambles: Option<Vec<u64>>,
    #[arg(long)]
    pub selftest: bool,
}

#[derive(Debug, Args)]
pub struct HanArgs {
    /// Distribution JSON file.
    #[arg(long)]
    pub dist: Option<PathBuf>,
    /// Blocks separated by `;`, variables within a block by `,`.
    #[arg(long)]
    pub blocks: Option<String>,
    /// Conditioning variables, comma separated.
    #[arg(long, default_value = "")]
    pub given: String,
    /// Use all r-subsets.
    #[arg(long, conflicts_with = "collection")]
    pub r: Option<usize>,
    /// Explicit collection of 0-based block index sets, e.g. `0,1;1,2;0,2`.
    #[arg(long, requires = "h")]
    pub collection: Option<String>,
    /// Cover multiplicity of the collection.
    #[arg(long)]
    pub h: Option<usize>,
    #[arg(long)]
    pub selftest: bool,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok,
    Failed,
    Budget,
}

impl Status {
    fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Failed => 1,
            Status::Budget => 3,
        }
    }

    fn unless(ok: bool) -> Self {
        if ok {
            Status::Ok
        } else {
            Status::Failed
        }
    }
}

struct Report {
    json: Value,
    text: String,
    csv: Option<String>,
    status: Status,
}

impl Report {
    fn new(json: Value, text: String) -> Self {
        Report {
            json,
            text,
            csv: None,
            status: Status::Ok,
        }
    }

    fn status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }
}

enum Failure {
    Usage(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let budget = matches!(
            e,
            Error::AntiLatin(AntiLatinError::BudgetExhausted { .. }) | Error::Attack(AttackError::BudgetExceeded { .. })
        );
        if budget {
            Failure::Budget(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

macro_rules! impl_failure_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Error::from(e).into()
            }
        }
    )*};
}

impl_failure_from!(
    relaysec_core::algebra::AlgebraError,
    relaysec_core::info::InfoError,
    relaysec_core::codes::CodeError,
    AntiLatinError,
    AttackError,
    relaysec_core::network::NetworkError,
    serde_json::Error
);

type CmdResult = Result<Report, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Classify(a) => cmd_classify(cli, a),
        Command::Antilatin(a) => cmd_antilatin(cli, a),
        Command::Capacity(a) => cmd_capacity(a),
        Command::Mincut(a) => cmd_mincut(a),
        Command::Mds(a) => cmd_mds(a),
        Command::Wiretap2(a) => cmd_wiretap2(a),
        Command::Han(a) => cmd_han(a),
    };
    match result {
        Ok(report) => {
            let stdout = match cli.format {
                Format::Text => report.text,
                Format::Json => serde_json::to_string_pretty(&report.json).expect("plain data") + "\n",
                Format::Csv => match report.csv {
                    Some(csv) => csv,
                    None => {
                        return Outcome {
                            code: 2,
                            stdout: String::new(),
                            stderr: "error: this command has no CSV output\n".into(),
                        }
                    }
                },
            };
            Outcome {
                code: report.status.code(),
                stdout,
                stderr: String::new(),
            }
        }
        Err(Failure::Usage(msg)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Budget(msg)) => Outcome {
            code: 3,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

/// Runs named checks and reports them one per line.
fn selftest(kind: &str, checks: Vec<(&'static str, bool)>) -> Report {
    let all = checks.iter().all(|c| c.1);
    let text: String = checks
        .iter()
        .map(|(name, ok)| format!("{} {name}\n", if *ok { "ok  " } else { "FAIL" }))
        .collect();
    let json = envelope(
        "selftest",
        json!({
            "command": kind,
            "passed": all,
            "checks": checks.iter().map(|(n, ok)| json!({"name": n, "ok": ok})).collect::<Vec<_>>(),
        }),
    );
    Report::new(json, text).status(Status::unless(all))
}

fn family_code(family: Family, d: u32, seed: u64, budget: u64) -> Result<(OneHopCode, String), Failure> {
    let code = match family {
        Family::ScalarLinear => scalar_linear_code(d)?,
        Family::Standard => standard_nonlinear_code(d)?,
        Family::VectorLinear => vector_linear_code(d)?,
        Family::AntiLatin => {
            let (a, b) = match d {
                3 => reference_pair_d3(),
                4 => reference_pair_d4(),
                _ => match find_decodable_pair(d, seed, budget)? {
                    PairSearch::Found(a, b) => (a, b),
                    PairSearch::NotFound { .. } => {
                        return Err(usage(format!("no decodable anti-Latin pair exists for d={d}")))
                    }
                },
            };
            anti_latin_code(&a, &b)?
        }
    };
    let name = family.to_possible_value().expect("no skipped variants").get_name().to_string();
    Ok((code, format!("{name}/d={d}")))
}

fn cmd_classify(cli: &Cli, a: &ClassifyArgs) -> CmdResult {
    if a.selftest {
        let std2 = standard_nonlinear_code(2)?;
        let dp = classify(&std2, AttackClass::DeterministicPassive)?;
        let checks = vec![
            ("deterministic-passive count is 4 at d=2", enumerate_attacks(2, AttackClass::DeterministicPassive)?.len() == 4),
            ("adaptive-passive count is 8 at d=2", enumerate_attacks(2, AttackClass::AdaptivePassive)?.len() == 8),
            ("adaptive-active count is 432 at d=3", enumerate_attacks(3, AttackClass::AdaptiveActive)?.len() == 432),
            (
                "standard code d=2 leaks half a bit passively",
                dp.level == SecurityLevel::ImperfectlySecret && (dp.max_leakage_bits - 0.5).abs() < 1e-12,
            ),
            (
                "standard code d=2 falls to adaptive-passive",
                classify(&std2, AttackClass::AdaptivePassive)?.level == SecurityLevel::Insecure,
            ),
            (
                "vector-linear d=2 perfect under adaptive-active",
                classify(&vector_linear_code(2)?, AttackClass::AdaptiveActive)?.level == SecurityLevel::PerfectlySecret,
            ),
            (
                "randomized scalar-linear d=3 perfect under adaptive-active",
                classify(&scalar_linear_code(3)?, AttackClass::AdaptiveActive)?.level == SecurityLevel::PerfectlySecret,
            ),
        ];
        return Ok(selftest("classify", checks));
    }
    if a.table {
        let ds = if a.d.is_empty() { vec![2, 3, 4] } else { a.d.clone() };
        let table = classification_table(&ds)?;
        let ok = table.matches_expected();
        let mut text = report::table_text(&table);
        if !ok {
            text += "cells marked ! differ from the expected table\n";
        }
        let mut rep = Report::new(report::table_json(&table), text);
        rep.csv = Some(report::table_csv(&table));
        return Ok(rep.status(Status::unless(ok || !a.expect_table1)));
    }
    let budget = cli.budget.unwrap_or(DEFAULT_SEARCH_BUDGET);
    let (code, code_id) = match (&a.code, a.family) {
        (Some(path), _) => (parse_code(&read_file(path)?)?, path.display().to_string()),
        (None, Some(family)) => {
            let d = match a.d.as_slice() {
                [d] => *d,
                _ => return Err(usage("give exactly one --d with --family")),
            };
            family_code(family, d, cli.seed, budget)?
        }
        (None, None) => return Err(usage("give --family, --code, --table or --selftest")),
    };
    let classes = if a.class.is_empty() {
        AttackClass::ALL.to_vec()
    } else {
        a.class.clone()
    };
    let mut verdicts = Vec::new();
    let mut text = String::new();
    let mut rows = vec![];
    for class in classes {
        if a.per_shot {
            let v = classify_per_shot(&code, class)?;
            text += &report::per_shot_text(&code_id, &v);
            rows.push(vec![code_id.clone(), class.name().into(), v.level.name().into(), format!("{:.12}", v.max_leakage_bits)]);
            verdicts.push(report::per_shot_json(&code_id, &v));
        } else {
            let v = classify(&code, class)?;
            text += &report::verdict_text(&code_id, &v);
            rows.push(vec![code_id.clone(), class.name().into(), v.level.name().into(), format!("{:.12}", v.max_leakage_bits)]);
            verdicts.push(report::verdict_json(&code_id, &v));
        }
    }
    let json = envelope("classification", json!({ "verdicts": verdicts }));
    let mut rep = Report::new(json, text);
    rep.csv = Some(csv_rows(&["code_id", "class", "level", "max_leakage_bits"], &rows));
    Ok(rep)
}

fn csv_rows(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn load_rows(arg: &str) -> Result<Vec<Vec<u32>>, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        Ok(parse_rows(&read_file(path)?)?)
    } else {
        Ok(parse_inline_rows(arg)?)
    }
}

fn load_square(arg: &str) -> Result<AntiLatinSquare, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        Ok(parse_square(&read_file(path)?)?)
    } else {
        Ok(parse_inline_square(arg)?)
    }
}

fn squares_text(squares: &[AntiLatinSquare]) -> String {
    squares.iter().map(write_square).collect::<Vec<_>>().join("\n")
}

fn cmd_antilatin(cli: &Cli, a: &AntiLatinArgs) -> CmdResult {
    let budget = cli.budget.unwrap_or(DEFAULT_SEARCH_BUDGET);
    if a.selftest {
        let latin = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        let (a3, b3) = reference_pair_d3();
        let (a4, b4) = reference_pair_d4();
        let checks = vec![
            ("constant square is anti-Latin", is_anti_latin(&[vec![1, 1], vec![1, 1]])?),
            ("cyclic Latin square is not anti-Latin", !is_anti_latin(&latin)?),
            ("reference pair d=3 decodable", is_decodable_pair(&a3, &b3)?),
            ("reference pair d=4 decodable", is_decodable_pair(&a4, &b4)?),
            (
                "d=2 search proves no decodable pair over 16 tables",
                matches!(find_decodable_pair(2, cli.seed, 0)?, PairSearch::NotFound { tables_examined: 16, .. }),
            ),
        ];
        return Ok(selftest("antilatin", checks));
    }
    let Some(action) = &a.action else {
        return Err(usage("give an antilatin action or --selftest"));
    };
    match action {
        AntiLatinAction::Verify { square } => {
            let rows = load_rows(square)?;
            let ok = is_anti_latin(&rows)?;
            let json = envelope("antilatin-verify", json!({ "rows": rows, "anti_latin": ok }));
            Ok(Report::new(json, format!("anti-Latin: {ok}\n")).status(Status::unless(ok)))
        }
        AntiLatinAction::Xi { a, b, z, m } => {
            let (sa, sb) = (load_square(a)?, load_square(b)?);
            let xi = xi_set(&sa, &sb, *z, *m)?;
            let json = envelope("antilatin-xi", json!({ "z": z, "m": m, "members": xi.members }));
            Ok(Report::new(json, format!("Xi(z={z}, m={m}) = {:?}\n", xi.members)))
        }
        AntiLatinAction::PairCheck { a, b } => {
            let (sa, sb) = (load_square(a)?, load_square(b)?);
            let dec = is_decodable_pair(&sa, &sb)?;
            let oto = is_one_to_one_pair(&sa, &sb)?;
            let json = envelope("antilatin-pair-check", json!({ "decodable": dec, "one_to_one": oto }));
            Ok(Report::new(json, format!("decodable: {dec}\none-to-one: {oto}\n")))
        }
        AntiLatinAction::Find { d } => match find_decodable_pair(*d, cli.seed, budget)? {
            PairSearch::Found(sa, sb) => {
                let json = envelope(
                    "antilatin-find",
                    json!({ "d": d, "found": true, "a": square_json(&sa), "b": square_json(&sb), "seed": cli.seed }),
                );
                Ok(Report::new(json, format!("found decodable pair for d={d}\n{}\n{}", write_square(&sa), write_square(&sb))))
            }
            PairSearch::NotFound {
                tables_examined,
                anti_latin_squares,
                pairs_checked,
            } => {
                let json = envelope(
                    "antilatin-find",
                    json!({
                        "d": d,
                        "found": false,
                        "proof": "exhaustive",
                        "tables_examined": tables_examined,
                        "anti_latin_squares": anti_latin_squares,
                        "pairs_checked": pairs_checked,
                    }),
                );
                let text = format!(
                    "NotFound for d={d}: exhaustive over {tables_examined} tables, {anti_latin_squares} anti-Latin, {pairs_checked} ordered pairs checked\n"
                );
                Ok(Report::new(json, text))
            }
        },
        AntiLatinAction::Maxset { d, mode, method } => {
            let mode = match mode {
                ModeArg::Decodable => PairMode::Decodable,
                ModeArg::OneToOne => PairMode::OneToOne,
            };
            let method = match method {
                MethodArg::Exact => SearchMethod::Exact,
                MethodArg::Heuristic => SearchMethod::Heuristic,
            };
            let set = max_mutual_set(*d, mode, method, cli.seed, budget)?;
            let bound = if set.exact { "exact" } else { "lower bound" };
            let text = format!(
                "d={d} {}: size {} ({bound})\n{}",
                mode_name(mode),
                set.size,
                squares_text(&set.certificate)
            );
            let status = if set.budget_exhausted { Status::Budget } else { Status::Ok };
            Ok(Report::new(report::mutual_set_json(&set), text).status(status))
        }
    }
}

fn load_json_arg(arg: &str) -> Result<String, Failure> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        Ok(read_file(Path::new(arg))?)
    }
}

fn single_edge() -> WiretapNetwork {
    WiretapNetwork::new(
        vec![Node::new("s", NodeRole::Source), Node::new("t", NodeRole::Terminal)],
        &[("s", "t")],
    )
    .expect("valid network")
}

fn cmd_capacity(a: &CapacityArgs) -> CmdResult {
    if a.selftest {
        let flat = unicast_capacities(&LayeredUnicastNetwork::new(vec![3, 2, 4], vec![0, 0, 0], 4)?)?;
        let one = unicast_capacities(&LayeredUnicastNetwork::new(vec![5], vec![2], 2)?)?;
        let net = single_edge();
        let checks = vec![
            ("r=0 layered gives log q times min k", flat.c1_bits == 4.0 && flat.c2_bits == 4.0),
            ("single layer gives log q times (k - r)", one.c1_bits == 3.0 && one.c2_bits == 3.0),
            ("r=0 gives C2 = mincut2", rwiretap_capacities(&net, 0).c2 == net.mincut2()),
        ];
        return Ok(selftest("capacity", checks));
    }
    if let Some(spec) = &a.layered {
        let net = parse_layered(&load_json_arg(spec)?)?;
        let c = unicast_capacities(&net)?;
        let exact = format!("{}/{}", c.c2_symbols.numer(), c.c2_symbols.denom());
        let json = envelope(
            "unicast-capacity",
            json!({
                "c": net.layers(),
                "k": net.k(),
                "r": net.r(),
                "q": net.q(),
                "C1": c.c1_bits,
                "C2": c.c2_bits,
                "C1_symbols": c.c1_symbols,
                "C2_symbols": exact,
            }),
        );
        let text = format!("C1 = {} bits\nC2 = {} bits ({exact} symbols)\n", c.c1_bits, c.c2_bits);
        return Ok(Report::new(json, text));
    }
    let Some(path) = &a.net else {
        return Err(usage("give --net, --layered or --selftest"));
    };
    let net = parse_network(&read_file(path)?)?;
    let c = rwiretap_capacities(&net, a.r);
    let warning = c
        .clamped
        .then(|| format!("r={} reaches a mincut; capacities clamped at 0", a.r));
    let json = envelope(
        "rwiretap-capacity",
        json!({
            "r": c.r,
            "mincut1": c.mincut1,
            "mincut2": c.mincut2,
            "C2": c.c2,
            "C1_lower": c.c1_lower,
            "C1_upper": c.c1_upper,
            "collapsed": c.collapsed,
            "clamped": c.clamped,
            "warning": warning,
        }),
    );
    let mut text = format!(
        "mincut1 = {}\nmincut2 = {}\nC2 = {}\nC1 in [{}, {}]\n",
        c.mincut1, c.mincut2, c.c2, c.c1_lower, c.c1_upper
    );
    if let Some(w) = warning {
        text += &format!("warning: {w}\n");
    }
    Ok(Report::new(json, text))
}

fn cmd_mincut(a: &MincutArgs) -> CmdResult {
    if a.selftest {
        let net = single_edge();
        let checks = vec![
            ("single edge has mincut 1", net.mincut1() == 1),
            ("no pseudo source gives equal mincuts", net.mincut2() == net.mincut1()),
        ];
        return Ok(selftest("mincut", checks));
    }
    let Some(path) = &a.net else {
        return Err(usage("give --net or --selftest"));
    };
    let net = parse_network(&read_file(path)?)?;
    let pseudo: Vec<&str> = net.pseudo_sources().iter().map(|&v| net.nodes()[v].id.as_str()).collect();
    let (m1, m2) = (net.mincut1(), net.mincut2());
    let json = envelope("mincut", json!({ "mincut1": m1, "mincut2": m2, "pseudo_sources": pseudo }));
    let text = format!("mincut1 = {m1}\nmincut2 = {m2}\npseudo sources: {}\n", pseudo.join(" "));
    Ok(Report::new(json, text))
}

fn cmd_mds(a: &MdsArgs) -> CmdResult {
    if a.selftest {
        let g = build_mds_generator(2, 1, 2)?;
        let checks = vec![
            ("(k=2, r=1, q=2) generator is [1 1]", g.entries() == [1, 1]),
            ("(k=4, r=2, q=7) generator is MDS", verify_mds(&build_mds_generator(4, 2, 7)?)?),
        ];
        return Ok(selftest("mds", checks));
    }
    match &a.action {
        Some(MdsAction::Build { k, r, q }) => {
            let g = build_mds_generator(*k, *r, *q)?;
            let rows: Vec<&[u64]> = g.entries().chunks(g.cols()).collect();
            let json = envelope("mds-generator", json!({ "k": k, "r": r, "q": q, "rows": rows }));
            Ok(Report::new(json, write_matrix(&g)))
        }
        Some(MdsAction::Verify { matrix }) => {
            let m = parse_matrix(&read_file(matrix)?)?;
            let ok = verify_mds(&m)?;
            let bad = singular_selections(&m)?;
            let json = envelope("mds-verify", json!({ "mds": ok, "singular_selections": bad }));
            let mut text = format!("MDS: {ok}\n");
            for s in &bad {
                text += &format!("singular columns {s:?}\n");
            }
            Ok(Report::new(json, text).status(Status::unless(ok)))
        }
        None => Err(usage("give build, verify or --selftest")),
    }
}

fn cmd_wiretap2(a: &Wiretap2Args) -> CmdResult {
    if a.selftest {
        let plain = wiretap2_verify(&WiretapIICode::new(2, 0, 3)?)?;
        let small = wiretap2_verify(&WiretapIICode::new(3, 1, 3)?)?;
        let checks = vec![
            ("r=0 code leaks nothing and decodes", plain.passed()),
            ("(q=3, k=3, r=1) code passes", small.passed()),
        ];
        return Ok(selftest("wiretap2", checks));
    }
    let (Some(q), Some(k), Some(r)) = (a.q, a.k, a.r) else {
        return Err(usage("give --q, --k and --r"));
    };
    let code = WiretapIICode::new(k, r, q)?;
    if let Some(message) = &a.message {
        let scrambles = a.scrambles.clone().unwrap_or_default();
        let word = code.encode(message, &scrambles)?;
        let back = code.decode(&word)?;
        let json = envelope("wiretap2-encode", json!({ "codeword": word, "decoded": back }));
        return Ok(Report::new(json, format!("codeword: {word:?}\ndecoded: {back:?}\n")));
    }
    let rep = wiretap2_verify(&code)?;
    let json = envelope(
        "wiretap2-verify",
        json!({
            "q": q,
            "k": k,
            "r": r,
            "combinations": rep.combinations,
            "subsets_checked": rep.subsets_checked,
            "leaking_subsets": rep.leaking_subsets,
            "max_leakage_bits": rep.max_leakage_bits,
            "decodable": rep.decodable,
            "passed": rep.passed(),
        }),
    );
    let text = format!(
        "{} tap sets of size {r} checked over {} combinations\nleaking: {}\nmax leakage: {} bits\ndecodable: {}\n",
        rep.subsets_checked,
        rep.combinations,
        rep.leaking_subsets.len(),
        rep.max_leakage_bits,
        rep.decodable
    );
    Ok(Report::new(json, text).status(Status::unless(rep.passed())))
}

fn split_list(s: &str, sep: char) -> Vec<String> {
    s.split(sep).map(str::trim).filter(|t| !t.is_empty()).map(String::from).collect()
}

fn han_json(rep: &HanReport) -> Value {
    envelope(
        "han",
        json!({ "holds": rep.holds, "slack": rep.slack, "lhs": rep.lhs, "rhs": rep.rhs, "h": rep.h }),
    )
}

fn cmd_han(a: &HanArgs) -> CmdResult {
    if a.selftest {
        let bits = JointDistribution::uniform(vec![Variable::new("Y1", 2), Variable::new("Y2", 2)])?;
        let blocks = vec![vec!["Y1"], vec!["Y2"]];
        let single = check_han_collection(&bits, &[], &blocks, &[vec![0, 1]], 1)?;
        let full = check_han_subsets(&bits, &[], &blocks, 2)?;
        let checks = vec![
            ("single-subset collection has zero slack", single.slack == 0.0),
            ("r = k has zero slack", full.slack == 0.0),
        ];
        return Ok(selftest("han", checks));
    }
    let (Some(path), Some(blocks)) = (&a.dist, &a.blocks) else {
        return Err(usage("give --dist and --blocks"));
    };
    let dist = parse_distribution(&read_file(path)?)?;
    let block_names: Vec<Vec<String>> = split_list(blocks, ';').iter().map(|b| split_list(b, ',')).collect();
    let blocks: Vec<Vec<&str>> = block_names.iter().map(|b| b.iter().map(String::as_str).collect()).collect();
    let given_names = split_list(&a.given, ',');
    let given: Vec<&str> = given_names.iter().map(String::as_str).collect();
    let rep = match (&a.collection, a.r) {
        (Some(coll), _) => {
            let collection = split_list(coll, ';')
                .iter()
                .map(|m| {
                    split_list(m, ',')
                        .iter()
                        .map(|t| t.parse::<usize>().map_err(|_| usage(format!("bad index `{t}`"))))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            check_han_collection(&dist, &given, &blocks, &collection, a.h.expect("clap requires --h"))?
        }
        (None, Some(r)) => check_han_subsets(&dist, &given, &blocks, r)?,
        (None, None) => return Err(usage("give --r or --collection")),
    };
    let text = format!(
        "holds: {}\nlhs = {}\nrhs = {} (h = {})\nslack = {}\n",
        rep.holds, rep.lhs, rep.rhs, rep.h, rep.slack
    );
    Ok(Report::new(han_json(&rep), text).status(Status::unless(rep.holds)))
}
