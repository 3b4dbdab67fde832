use std::process::ExitCode;

use avoidlab::bijection::{corollary_q, p132, shrink_odd_to_even};
use avoidlab::enumerate::{
    closed_form, count_a, count_s, gen_all, gen_alternating_avoiders_132, gen_avoiders_132,
};
use avoidlab::verify::{reports_to_json, run_suite, summary_table, Suite, VerifyConfig};
use avoidlab::{
    parse_permutation, phi, phi_inverse, CorollaryFamily, Error, Guards, LabeledBinaryTree,
    Pattern, Permutation, SequenceSpec,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

const SCHEMA_VERSION: u32 = 1;
const MAX_N_ENV: &str = "AVOIDLAB_MAX_N";

#[derive(Parser)]
#[command(
    name = "avoidlab",
    version,
    about = "132-avoiding permutations and their alternating completions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format. CSV is available for enumerate and sequence only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,

    /// Largest n for brute-force scans over all of S_n.
    #[arg(long, global = true, value_name = "N")]
    max_brute: Option<usize>,

    /// Largest n for structural generation (default from AVOIDLAB_MAX_N, else 16).
    #[arg(long, global = true, value_name = "N")]
    max_structural: Option<usize>,

    /// Permit raising a guard above its default.
    #[arg(long, global = true)]
    allow_large: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Map a 132-avoiding permutation to its alternating image, or back.
    Phi {
        perm: String,
        #[arg(long)]
        inverse: bool,
    },
    /// List or count a permutation class in lexicographic order.
    Enumerate(EnumerateArgs),
    /// Print the decreasing binary tree of a permutation.
    Tree {
        perm: String,
        /// Print the completed tree with its canonical labels instead.
        #[arg(long)]
        complete: bool,
    },
    /// Print terms of a closed-form sequence, or counts for a corollary family.
    Sequence {
        /// catalan, pow2-ceiling, even-fibonacci, quadratic, or 12k, 21k, k21 (with --k)
        #[arg(long)]
        family: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        terms: usize,
    },
    /// Run the claim catalog.
    Verify {
        #[arg(long, default_value = "all", value_parser = Suite::NAMES)]
        suite: String,
        /// Run corollary suites for this k only.
        #[arg(long)]
        k: Option<usize>,
        /// Cap every n bound of the suite.
        #[arg(long)]
        max_n: Option<usize>,
        /// Longest pattern used by the transport claim.
        #[arg(long)]
        max_k: Option<usize>,
        /// Include per-claim elapsed times.
        #[arg(long)]
        timings: bool,
        /// Test mode: report C_n + 1 from the Catalan oracle so claims fail.
        #[arg(long, hide = true)]
        corrupt_oracle: bool,
    },
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    length: usize,
    #[arg(long)]
    alternating: bool,
    /// Patterns to avoid, e.g. `132,3412` or `1,3,2;3,4,1,2`. Repeatable.
    #[arg(long)]
    avoid: Vec<String>,
    #[arg(long)]
    count_only: bool,
    /// Brute force over all of S_n with no implicit 132.
    #[arg(long)]
    raw: bool,
}

enum Failure {
    Claims,
    Lib(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Claims) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_guard() { 4 } else { 3 })
        }
    }
}

fn guards(cli: &Cli) -> Result<Guards, Failure> {
    let structural = match cli.max_structural {
        Some(n) => Some(n),
        None => match std::env::var(MAX_N_ENV) {
            Ok(v) => Some(v.trim().parse().map_err(|_| {
                Failure::Usage(format!(
                    "{MAX_N_ENV} must be a non-negative integer, got {v:?}"
                ))
            })?),
            Err(_) => None,
        },
    };
    Ok(Guards::with_overrides(
        cli.max_brute,
        structural,
        cli.allow_large,
    )?)
}

fn run(cli: &Cli) -> CliResult {
    let guards = guards(cli)?;
    let csv_ok = matches!(
        cli.command,
        Command::Enumerate(_) | Command::Sequence { .. }
    );
    if cli.format == Format::Csv && !csv_ok {
        return Err(Failure::Usage(
            "csv output is only available for enumerate and sequence".into(),
        ));
    }
    match &cli.command {
        Command::Phi { perm, inverse } => cmd_phi(perm, *inverse, cli.format),
        Command::Enumerate(args) => cmd_enumerate(args, &guards, cli.format),
        Command::Tree { perm, complete } => cmd_tree(perm, *complete, cli.format),
        Command::Sequence { family, k, terms } => {
            cmd_sequence(family, *k, *terms, &guards, cli.format)
        }
        Command::Verify {
            suite,
            k,
            max_n,
            max_k,
            timings,
            corrupt_oracle,
        } => {
            let mut config = VerifyConfig {
                guards,
                corollary_k: *k,
                corrupt_oracle: *corrupt_oracle,
                ..VerifyConfig::default()
            };
            if let Some(n) = max_n {
                config = config.capped(*n);
            }
            if let Some(k) = max_k {
                config.transport_max_k = *k;
            }
            cmd_verify(suite, &config, *timings, cli.format)
        }
    }
}

fn print_json(v: Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(&v).expect("json value serializes")
    );
}

fn show(w: &Permutation, digits: bool) -> String {
    if digits && w.len() <= 9 {
        w.to_compact_string()
    } else {
        w.to_comma_string()
    }
}

fn cmd_phi(text: &str, inverse: bool, format: Format) -> CliResult {
    let input = parse_permutation(text)?;
    let output = if inverse {
        phi_inverse(&input)?
    } else {
        phi(&input)?
    };
    let digits = !text.contains(',');
    match format {
        Format::Json => print_json(json!({
            "schema_version": SCHEMA_VERSION,
            "inverse": inverse,
            "input": input.entries(),
            "output": output.entries(),
        })),
        _ => println!("{}", show(&output, digits)),
    }
    Ok(())
}

fn parse_avoid(values: &[String]) -> Result<Vec<Pattern>, Error> {
    let mut out = Vec::new();
    for value in values {
        let items: Vec<&str> = if value.contains(';') {
            value.split(';').collect()
        } else {
            value.split(',').collect()
        };
        for item in items {
            out.push(parse_permutation(item.trim())?);
        }
    }
    Ok(out)
}

fn list_class(
    args: &EnumerateArgs,
    avoid: &[Pattern],
    guards: &Guards,
) -> Result<Vec<Permutation>, Error> {
    let m = args.length;
    if args.raw {
        return Ok(gen_all(m, guards)?
            .filter(|w| !args.alternating || w.is_alternating())
            .filter(|w| w.avoids_all(avoid))
            .collect());
    }
    if !args.alternating {
        return Ok(gen_avoiders_132(m, guards)?
            .filter(|w| w.avoids_all(avoid))
            .collect());
    }
    if m % 2 == 1 {
        return Ok(gen_alternating_avoiders_132(m, guards)?
            .filter(|w| w.avoids_all(avoid))
            .collect());
    }
    // even lengths are the odd class one longer with its trailing 1 removed,
    // which keeps lexicographic order
    let mut out = Vec::new();
    for w in gen_alternating_avoiders_132(m + 1, guards)? {
        let e = shrink_odd_to_even(&w)?;
        if e.avoids_all(avoid) {
            out.push(e);
        }
    }
    Ok(out)
}

fn count_class(args: &EnumerateArgs, avoid: &[Pattern], guards: &Guards) -> Result<u64, Error> {
    if args.raw {
        return Ok(list_class(args, avoid, guards)?.len() as u64);
    }
    if avoid.iter().any(Permutation::is_empty) {
        return Err(Error::EmptyPattern);
    }
    let tally = if args.alternating {
        count_a(args.length, avoid, guards)?
    } else {
        count_s(args.length, avoid, guards)?
    };
    Ok(tally.count)
}

fn cmd_enumerate(args: &EnumerateArgs, guards: &Guards, format: Format) -> CliResult {
    let avoid = parse_avoid(&args.avoid)?;
    let mut implied = avoid.clone();
    if !args.raw && !implied.contains(&p132()) {
        implied.push(p132());
    }
    let avoid_json: Vec<String> = implied.iter().map(|p| p.to_comma_string()).collect();
    if args.count_only {
        let count = count_class(args, &avoid, guards)?;
        match format {
            Format::Plain => println!("{count}"),
            Format::Csv => println!("{},{count}", args.length),
            Format::Json => print_json(json!({
                "schema_version": SCHEMA_VERSION,
                "length": args.length,
                "alternating": args.alternating,
                "raw": args.raw,
                "avoid": avoid_json,
                "count": count,
            })),
        }
        return Ok(());
    }
    let class = list_class(args, &avoid, guards)?;
    match format {
        Format::Plain => {
            for w in &class {
                println!("{}", show(w, true));
            }
        }
        Format::Csv => {
            for w in &class {
                println!("{}", w.to_comma_string());
            }
        }
        Format::Json => print_json(json!({
            "schema_version": SCHEMA_VERSION,
            "length": args.length,
            "alternating": args.alternating,
            "raw": args.raw,
            "avoid": avoid_json,
            "count": class.len(),
            "permutations": class.iter().map(|w| w.entries().to_vec()).collect::<Vec<_>>(),
        })),
    }
    Ok(())
}

fn cmd_tree(text: &str, complete: bool, format: Format) -> CliResult {
    let w = parse_permutation(text)?;
    let tree = LabeledBinaryTree::from_permutation(&w)?;
    let tree = if complete {
        tree.erase_labels().complete().canonical_label()
    } else {
        tree
    };
    match format {
        Format::Json => print_json(json!({
            "schema_version": SCHEMA_VERSION,
            "size": tree.size(),
            "tree": tree.to_json(),
        })),
        _ => println!("{tree}"),
    }
    Ok(())
}

fn cmd_sequence(
    family: &str,
    k: Option<usize>,
    terms: usize,
    guards: &Guards,
    format: Format,
) -> CliResult {
    let (first, values): (usize, Vec<u64>) = if let Ok(spec) = family.parse::<SequenceSpec>() {
        if k.is_some() {
            return Err(Failure::Usage(format!("--k does not apply to {spec}")));
        }
        let first = spec.first_index();
        let values = (first..first + terms)
            .map(|n| closed_form(spec, n))
            .collect::<Result<_, _>>()?;
        (first, values)
    } else if let Ok(corollary) = family.parse::<CorollaryFamily>() {
        let k = k.ok_or_else(|| Failure::Usage(format!("--k is required for {corollary}")))?;
        let pair = corollary_q(corollary, k)?;
        let values = (0..terms)
            .map(|n| count_s(n, std::slice::from_ref(&pair.p), guards).map(|t| t.count))
            .collect::<Result<_, _>>()?;
        (0, values)
    } else {
        return Err(Failure::Usage(format!(
            "unknown family {family:?}; expected catalan, pow2-ceiling, even-fibonacci, quadratic, 12k, 21k or k21"
        )));
    };
    match format {
        Format::Plain => {
            let parts: Vec<String> = values.iter().map(u64::to_string).collect();
            println!("{}", parts.join(" "));
        }
        Format::Csv => {
            for (i, v) in values.iter().enumerate() {
                println!("{},{v}", first + i);
            }
        }
        Format::Json => print_json(json!({
            "schema_version": SCHEMA_VERSION,
            "family": family,
            "k": k,
            "first_index": first,
            "terms": values,
        })),
    }
    Ok(())
}

fn cmd_verify(suite: &str, config: &VerifyConfig, timings: bool, format: Format) -> CliResult {
    let suite: Suite = suite
        .parse()
        .map_err(|e: Error| Failure::Usage(e.to_string()))?;
    if let (Some(k), Suite::Corollary(family)) = (config.corollary_k, suite) {
        if k < family.min_k() {
            return Err(Failure::Usage(format!(
                "{family} needs k >= {}",
                family.min_k()
            )));
        }
    }
    let reports = run_suite(suite, config)?;
    match format {
        Format::Json => print_json(reports_to_json(&reports, timings)),
        _ => print!("{}", summary_table(&reports, timings)),
    }
    if reports.iter().all(|r| r.pass) {
        Ok(())
    } else {
        Err(Failure::Claims)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn avoid_lists_split_on_commas_or_semicolons() {
        let ps = parse_avoid(&["132,3412".into()]).unwrap();
        assert_eq!(ps.len(), 2);
        assert_eq!(ps[1].entries(), &[3, 4, 1, 2]);
        let ps = parse_avoid(&["1,3,2;10,1,2,3,4,5,6,7,8,9".into(), "21".into()]).unwrap();
        assert_eq!(ps.len(), 3);
        assert_eq!(ps[1].len(), 10);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
