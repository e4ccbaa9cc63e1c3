//! Command-line front end over the decomposition library: encode tables,
//! convert between propagator and checker clause sets, normalize checkers,
//! lower them to monotone circuits and back, validate against executable
//! oracles, and compare artifacts exhaustively.
//!
//! Exit codes: 0 success (or equivalence), 1 a validation or comparison
//! found counterexamples (printed on standard output), 2 usage, parse or
//! refusal errors (printed on standard error). All outputs are
//! deterministic: the same invocation yields byte-identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use cnfdecomp::circuit::{tseitin_encode, Circuit};
use cnfdecomp::cnf::{ClauseSet, PartialAssignment, TruthValue, Var};
use cnfdecomp::csp::{
    enumerate_domain_states, uniform_vars, CspVariable, DirectEncodingMap, DomainState,
    EnumerationBudget,
};
use cnfdecomp::decomp::{
    validate_checker_decomposition, validate_propagator_decomposition, CheckerDecomposition,
    EncodeVariant, PropagatorDecomposition,
};
use cnfdecomp::fixtures;
use cnfdecomp::io::{emit_dimacs, emit_gates, emit_table, parse_dimacs, parse_gates, parse_table};
use cnfdecomp::oracle::{
    alldifferent_checker, bacchus_table_encoding, enumeration_checker, lift_checker_to_propagator,
    CheckerFunction,
};
use cnfdecomp::propagate::unit_propagate;
use cnfdecomp::transforms::{
    checker_to_circuit, checker_to_propagator, propagator_to_checker, to_propagation_normal_form,
    StripMode,
};

#[derive(Parser)]
#[command(
    name = "cnfdecomp",
    version,
    about = "Clause-set decompositions of propagators and checkers, and their circuit forms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a constraint table as clauses that prune unsupported values.
    EncodeTable {
        /// Table file: `table <arity> <size...>` header, one tuple per line.
        table: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Wrap a propagator clause set into a checker with a fresh output.
    PropToChecker {
        /// Annotated DIMACS file without an output variable.
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Project a checker clause set into a value-pruning propagator.
    CheckerToProp {
        /// Annotated DIMACS file with an output variable.
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rewrite a checker into propagation normal form: no negative input
    /// literals, auxiliaries only forced FALSE, one negative per clause.
    Normalize {
        /// Annotated DIMACS file with an output variable.
        file: PathBuf,
        /// How to eliminate negative input literals.
        #[arg(long, value_enum, default_value_t = StripModeArg::Substitute)]
        strip_mode: StripModeArg,
        /// Refuse enumerations beyond 2^budget domain states.
        #[arg(long, default_value_t = 24)]
        budget: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Lower a checker in exactly-one-negative form to a monotone circuit.
    ToCircuit {
        /// Annotated DIMACS file with an output variable.
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Encode a monotone circuit as clauses whose propagation is exact.
    ToCnf {
        /// Gate-list file.
        file: PathBuf,
        /// Comma-separated CSP domain sizes for the circuit inputs, in
        /// order; their sum must equal the input count. Defaults to one
        /// single-valued CSP variable per input.
        #[arg(long, value_delimiter = ',')]
        domains: Option<Vec<usize>>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a clause set against an executable oracle over every domain
    /// state, under both faithful encodings.
    Validate {
        /// Annotated DIMACS file; validated as a checker if it declares an
        /// output variable, as a propagator otherwise.
        file: PathBuf,
        /// `table:<file>` or `alldiff:<n>:<d>`.
        #[arg(long)]
        oracle: String,
        /// Refuse enumerations beyond 2^budget domain states.
        #[arg(long, default_value_t = 24)]
        budget: u32,
    },
    /// Compare the observable behavior of two artifacts exhaustively:
    /// checkers and circuits by output forcing, propagators by pruning.
    VerifyEquiv {
        left: PathBuf,
        right: PathBuf,
        /// Refuse enumerations beyond 2^budget states.
        #[arg(long, default_value_t = 24)]
        budget: u32,
    },
    /// Print a built-in worked artifact.
    Fixtures {
        /// One of: example1, example1-table, example2, example3, example4.
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StripModeArg {
    /// Delete clauses containing negative input literals.
    Remove,
    /// Rewrite negative input literals into sibling-value disjunctions.
    Substitute,
}

impl From<StripModeArg> for StripMode {
    fn from(arg: StripModeArg) -> Self {
        match arg {
            StripModeArg::Remove => StripMode::Remove,
            StripModeArg::Substitute => StripMode::Substitute,
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::EncodeTable { table, output } => {
            let t = parse_table(&read(&table)?).with_context(|| context_for(&table))?;
            let p = bacchus_table_encoding(&t)?;
            write_out(
                output.as_deref(),
                &emit_dimacs(p.formula(), Some(p.encoding()))?,
            )?;
            Ok(0)
        }
        Command::PropToChecker { file, output } => {
            let p = load_propagator(&file)?;
            let c = propagator_to_checker(&p)?;
            write_out(
                output.as_deref(),
                &emit_dimacs(c.formula(), Some(c.encoding()))?,
            )?;
            Ok(0)
        }
        Command::CheckerToProp { file, output } => {
            let c = load_checker(&file)?;
            let p = checker_to_propagator(&c)?;
            write_out(
                output.as_deref(),
                &emit_dimacs(p.formula(), Some(p.encoding()))?,
            )?;
            Ok(0)
        }
        Command::Normalize {
            file,
            strip_mode,
            budget,
            output,
        } => {
            let c = load_checker(&file)?;
            let normalized =
                to_propagation_normal_form(&c, strip_mode.into(), EnumerationBudget::new(budget))?;
            write_out(
                output.as_deref(),
                &emit_dimacs(normalized.formula(), Some(normalized.encoding()))?,
            )?;
            Ok(0)
        }
        Command::ToCircuit { file, output } => {
            let c = load_checker(&file)?;
            let lowered = checker_to_circuit(&c)?;
            write_out(output.as_deref(), &emit_gates(lowered.circuit()))?;
            Ok(0)
        }
        Command::ToCnf {
            file,
            domains,
            output,
        } => {
            let circuit = parse_gates(&read(&file)?).with_context(|| context_for(&file))?;
            if !circuit.is_structurally_monotone() {
                bail!(
                    "circuit is not structurally monotone: the propagation-exact \
                     encoding applies to AND/OR circuits only"
                );
            }
            let vars = match domains {
                Some(sizes) => {
                    let total: usize = sizes.iter().sum();
                    if total != circuit.num_inputs() {
                        bail!(
                            "domain sizes sum to {total} but the circuit has {} inputs",
                            circuit.num_inputs()
                        );
                    }
                    sizes
                        .into_iter()
                        .enumerate()
                        .map(|(id, domain_size)| CspVariable { id, domain_size })
                        .collect()
                }
                None => uniform_vars(circuit.num_inputs(), 1),
            };
            let map = DirectEncodingMap::new(&vars)?;
            write_out(
                output.as_deref(),
                &emit_dimacs(&tseitin_encode(&circuit), Some(&map))?,
            )?;
            Ok(0)
        }
        Command::Validate {
            file,
            oracle,
            budget,
        } => validate(&file, &oracle, budget),
        Command::VerifyEquiv {
            left,
            right,
            budget,
        } => verify_equiv(&left, &right, budget),
        Command::Fixtures { name, output } => {
            write_out(output.as_deref(), &fixture_text(&name)?)?;
            Ok(0)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn context_for(path: &Path) -> String {
    format!("parsing {}", path.display())
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// An annotated clause file together with its reconstructed encoding map.
fn load_annotated(path: &Path) -> Result<(ClauseSet, DirectEncodingMap)> {
    let parsed = parse_dimacs(&read(path)?).with_context(|| context_for(path))?;
    let encoding = parsed.encoding.ok_or_else(|| {
        anyhow!(
            "{} has no `c role input` annotations to reconstruct the encoding",
            path.display()
        )
    })?;
    Ok((parsed.formula, encoding))
}

fn load_checker(path: &Path) -> Result<CheckerDecomposition> {
    let (formula, encoding) = load_annotated(path)?;
    CheckerDecomposition::new(formula, encoding).with_context(|| context_for(path))
}

fn load_propagator(path: &Path) -> Result<PropagatorDecomposition> {
    let (formula, encoding) = load_annotated(path)?;
    PropagatorDecomposition::new(formula, encoding).with_context(|| context_for(path))
}

enum OracleSpec {
    Table(PathBuf),
    AllDiff { n: usize, d: usize },
}

fn parse_oracle(spec: &str) -> Result<OracleSpec> {
    if let Some(path) = spec.strip_prefix("table:") {
        if path.is_empty() {
            bail!("oracle `table:` needs a file path");
        }
        return Ok(OracleSpec::Table(PathBuf::from(path)));
    }
    if let Some(rest) = spec.strip_prefix("alldiff:") {
        let (n, d) = rest
            .split_once(':')
            .ok_or_else(|| anyhow!("oracle `alldiff:` needs the form alldiff:<n>:<d>"))?;
        let n: usize = n.parse().context("parsing <n> of alldiff:<n>:<d>")?;
        let d: usize = d.parse().context("parsing <d> of alldiff:<n>:<d>")?;
        if n == 0 || d == 0 {
            bail!("alldiff oracle needs at least one variable and one value");
        }
        return Ok(OracleSpec::AllDiff { n, d });
    }
    bail!("unknown oracle `{spec}`; use table:<file> or alldiff:<n>:<d>");
}

fn validate(file: &Path, oracle: &str, budget: u32) -> Result<i32> {
    let (formula, encoding) = load_annotated(file)?;
    match parse_oracle(oracle)? {
        OracleSpec::Table(path) => {
            let t = parse_table(&read(&path)?).with_context(|| context_for(&path))?;
            validate_against(
                formula,
                encoding,
                &t.scope_vars(),
                enumeration_checker(&t),
                budget,
            )
        }
        OracleSpec::AllDiff { n, d } => validate_against(
            formula,
            encoding,
            &uniform_vars(n, d),
            alldifferent_checker(n),
            budget,
        ),
    }
}

fn validate_against(
    formula: ClauseSet,
    encoding: DirectEncodingMap,
    oracle_vars: &[CspVariable],
    checker: CheckerFunction<'_>,
    budget: u32,
) -> Result<i32> {
    if encoding.csp_vars() != oracle_vars {
        bail!(
            "oracle shape {} does not match the file's input annotations {}",
            describe_vars(oracle_vars),
            describe_vars(encoding.csp_vars())
        );
    }
    let budget = EnumerationBudget::new(budget);
    let report = if formula.output_var().is_some() {
        let d = CheckerDecomposition::new(formula, encoding)?;
        validate_checker_decomposition(&d, &*checker, budget)?
    } else {
        let d = PropagatorDecomposition::new(formula, encoding)?;
        let oracle = lift_checker_to_propagator(checker);
        validate_propagator_decomposition(&d, &*oracle, budget)?
    };
    println!("{report}");
    Ok(if report.passed() { 0 } else { 1 })
}

fn describe_vars(vars: &[CspVariable]) -> String {
    let sizes: Vec<String> = vars.iter().map(|v| v.domain_size.to_string()).collect();
    format!(
        "{} variables with domain sizes [{}]",
        vars.len(),
        sizes.join(",")
    )
}

/// What a clause artifact or circuit says at one start assignment.
#[derive(PartialEq, Eq)]
enum Verdict {
    Conflict,
    OutputFalse,
    Quiet,
    /// Propagator view: the set of pruned (variable, value) pairs.
    Pruned(Vec<(usize, usize)>),
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Conflict => write!(f, "conflict"),
            Verdict::OutputFalse => write!(f, "output-false"),
            Verdict::Quiet => write!(f, "quiet"),
            Verdict::Pruned(pairs) => {
                write!(f, "pruned={{")?;
                for (k, (var, value)) in pairs.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "x{var}={value}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

enum Artifact {
    Checker(CheckerDecomposition),
    Propagator(PropagatorDecomposition),
    Circuit(Circuit),
}

/// Evaluates both artifacts' verdicts at one start assignment.
type VerdictPair<'a> = Box<dyn Fn(&PartialAssignment) -> (Verdict, Verdict) + 'a>;

impl Artifact {
    fn kind(&self) -> &'static str {
        match self {
            Artifact::Checker(_) => "checker",
            Artifact::Propagator(_) => "propagator",
            Artifact::Circuit(_) => "circuit",
        }
    }
}

fn load_artifact(path: &Path) -> Result<Artifact> {
    let text = read(path)?;
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .ok_or_else(|| anyhow!("{} is empty", path.display()))?;
    let token = first.split_whitespace().next().unwrap_or_default();
    match token {
        "c" | "p" => {
            let (formula, encoding) = load_annotated(path)?;
            if formula.output_var().is_some() {
                Ok(Artifact::Checker(
                    CheckerDecomposition::new(formula, encoding)
                        .with_context(|| context_for(path))?,
                ))
            } else {
                Ok(Artifact::Propagator(
                    PropagatorDecomposition::new(formula, encoding)
                        .with_context(|| context_for(path))?,
                ))
            }
        }
        "input" | "gate" | "output" | "#" => Ok(Artifact::Circuit(
            parse_gates(&text).with_context(|| context_for(path))?,
        )),
        _ => bail!(
            "{} is neither an annotated clause file nor a gate list",
            path.display()
        ),
    }
}

/// The encoded starts of every domain state under both faithful
/// encodings, at input width.
fn domain_starts(
    map: &DirectEncodingMap,
    budget: EnumerationBudget,
) -> Result<Vec<(DomainState, EncodeVariant, PartialAssignment)>> {
    let mut out = Vec::new();
    for state in enumerate_domain_states(map.csp_vars(), budget)? {
        out.push((
            state.clone(),
            EncodeVariant::Canonical,
            map.encode_domain(&state),
        ));
        out.push((
            state.clone(),
            EncodeVariant::FalseOnly,
            map.encode_domain_false_only(&state),
        ));
    }
    Ok(out)
}

fn checker_verdict(d: &CheckerDecomposition, inputs: &PartialAssignment) -> Verdict {
    let out = unit_propagate(d.formula(), &inputs.extended_to(d.formula().num_vars()));
    if out.is_conflict() {
        Verdict::Conflict
    } else if out.assignment.value(d.output_var()) == TruthValue::False {
        Verdict::OutputFalse
    } else {
        Verdict::Quiet
    }
}

fn propagator_verdict(p: &PropagatorDecomposition, inputs: &PartialAssignment) -> Verdict {
    let out = unit_propagate(p.formula(), &inputs.extended_to(p.formula().num_vars()));
    if out.is_conflict() {
        return Verdict::Conflict;
    }
    let map = p.encoding();
    let pruned = map
        .pairs()
        .filter(|&(_, _, v)| {
            !inputs.value(v).is_set() && out.assignment.value(v) == TruthValue::False
        })
        .map(|(i, j, _)| (i, j))
        .collect();
    Verdict::Pruned(pruned)
}

fn circuit_verdict(c: &Circuit, inputs: &PartialAssignment) -> Verdict {
    let bits: Vec<bool> = (0..c.num_inputs())
        .map(|k| inputs.value(Var(k)) != TruthValue::False)
        .collect();
    if c.evaluate(&bits) {
        Verdict::Quiet
    } else {
        Verdict::OutputFalse
    }
}

fn require_same_encoding(a: &DirectEncodingMap, b: &DirectEncodingMap) -> Result<()> {
    if a != b {
        bail!(
            "the artifacts annotate different input encodings: {} vs {}",
            describe_vars(a.csp_vars()),
            describe_vars(b.csp_vars())
        );
    }
    Ok(())
}

fn verify_equiv(left: &Path, right: &Path, budget: u32) -> Result<i32> {
    let a = load_artifact(left)?;
    let b = load_artifact(right)?;
    let budget = EnumerationBudget::new(budget);

    // Circuit-vs-circuit compares complete input vectors; everything else
    // compares per domain state under both encodings.
    if let (Artifact::Circuit(ca), Artifact::Circuit(cb)) = (&a, &b) {
        if ca.num_inputs() != cb.num_inputs() {
            bail!(
                "circuits have {} and {} inputs",
                ca.num_inputs(),
                cb.num_inputs()
            );
        }
        let n = ca.num_inputs();
        if n as u64 > budget.log2_states as u64 {
            bail!(
                "comparing {n}-input circuits needs 2^{n} evaluations, over the 2^{} budget",
                budget.log2_states
            );
        }
        let mut mismatches = 0usize;
        let mut lines = String::new();
        for mask in 0..1u64 << n {
            let bits: Vec<bool> = (0..n).map(|k| mask >> k & 1 == 1).collect();
            let va = ca.evaluate(&bits);
            let vb = cb.evaluate(&bits);
            if va != vb {
                mismatches += 1;
                let rendered: String = bits
                    .iter()
                    .map(|&bit| if bit { '1' } else { '0' })
                    .collect();
                let _ = writeln!(lines, "mismatch inputs={rendered} left={va} right={vb}");
            }
        }
        println!("inputs-checked={}", 1u64 << n);
        print!("{lines}");
        println!(
            "verdict={}",
            if mismatches == 0 {
                "equivalent"
            } else {
                "different"
            }
        );
        return Ok(if mismatches == 0 { 0 } else { 1 });
    }

    let verdicts: VerdictPair<'_> = match (&a, &b) {
        (Artifact::Checker(da), Artifact::Checker(db)) => {
            require_same_encoding(da.encoding(), db.encoding())?;
            Box::new(|s| (checker_verdict(da, s), checker_verdict(db, s)))
        }
        (Artifact::Propagator(pa), Artifact::Propagator(pb)) => {
            require_same_encoding(pa.encoding(), pb.encoding())?;
            Box::new(|s| (propagator_verdict(pa, s), propagator_verdict(pb, s)))
        }
        (Artifact::Checker(d), Artifact::Circuit(c)) => {
            require_circuit_fit(c, d.encoding())?;
            Box::new(|s| (checker_verdict(d, s), circuit_verdict(c, s)))
        }
        (Artifact::Circuit(c), Artifact::Checker(d)) => {
            require_circuit_fit(c, d.encoding())?;
            Box::new(|s| (circuit_verdict(c, s), checker_verdict(d, s)))
        }
        _ => bail!(
            "cannot compare a {} with a {}: one reports consistency, the other prunes values",
            a.kind(),
            b.kind()
        ),
    };

    let map = match (&a, &b) {
        (Artifact::Checker(d), _) | (_, Artifact::Checker(d)) => d.encoding(),
        (Artifact::Propagator(p), _) => p.encoding(),
        _ => unreachable!("circuit pairs were handled above"),
    };
    let starts = domain_starts(map, budget)?;
    let mut mismatches = 0usize;
    let mut lines = String::new();
    let states = starts.len() / 2;
    for (state, variant, inputs) in &starts {
        let (va, vb) = verdicts(inputs);
        if va != vb {
            mismatches += 1;
            let _ = writeln!(
                lines,
                "mismatch state={state} encoding={variant} left={va} right={vb}"
            );
        }
    }
    println!("states-checked={states}");
    print!("{lines}");
    println!(
        "verdict={}",
        if mismatches == 0 {
            "equivalent"
        } else {
            "different"
        }
    );
    Ok(if mismatches == 0 { 0 } else { 1 })
}

fn require_circuit_fit(c: &Circuit, map: &DirectEncodingMap) -> Result<()> {
    if c.num_inputs() != map.num_prop_vars() {
        bail!(
            "circuit has {} inputs but the clause file annotates {}",
            c.num_inputs(),
            map.num_prop_vars()
        );
    }
    Ok(())
}

fn fixture_text(name: &str) -> Result<String> {
    match name {
        "example1" => {
            let p = fixtures::pair_table_propagator();
            Ok(emit_dimacs(p.formula(), Some(p.encoding()))?)
        }
        "example1-table" => Ok(emit_table(&fixtures::pair_table())),
        "example2" => {
            let c = fixtures::pair_table_checker();
            Ok(emit_dimacs(c.formula(), Some(c.encoding()))?)
        }
        "example3" => {
            let circuit = fixtures::non_monotone_two_input_circuit();
            let map = DirectEncodingMap::new(&uniform_vars(circuit.num_inputs(), 1))?;
            Ok(emit_dimacs(&tseitin_encode(&circuit), Some(&map))?)
        }
        "example4" => {
            let c = fixtures::chained_aux_checker();
            Ok(emit_dimacs(c.formula(), Some(c.encoding()))?)
        }
        _ => bail!(
            "unknown fixture `{name}`; available: example1, example1-table, \
             example2, example3, example4"
        ),
    }
}
