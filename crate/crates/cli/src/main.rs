use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thmon::Alphabet;
use thmon_cli::commands::{self, CountArgs, ReduceArgs};
use thmon_cli::{parse_budget, parse_def, CliError, Env, Output, RunConfig};

#[derive(Parser)]
#[command(name = "thmon", version, about = "Table arithmetic for the Thompson-Higman monoids")]
struct Cli {
    /// Alphabet size.
    #[arg(long, global = true, default_value_t = 2)]
    k: u8,
    /// Number of head letters; selects the B A* alphabet.
    #[arg(long, global = true)]
    b: Option<u8>,
    /// Cap on exhaustive enumerations.
    #[arg(long, global = true, default_value_t = 1 << 24)]
    cap: u64,
    /// Oracle budget as entries,dom-len,img-len.
    #[arg(long, global = true, default_value = "4,3,4")]
    budget: String,
    #[arg(long, global = true, default_value_t = 0x74686d6f6e)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Named binding `name=expr`, usable in later expressions.
    #[arg(long = "def", global = true)]
    defs: Vec<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Cmd {
    /// Canonical form and invariants of an element.
    Element { e: String },
    /// Green relation: leq-j, j, d, r, l or h.
    Green { rel: String, e1: String, e2: String },
    /// D-class index.
    Dclass { e: String },
    /// Pivot chi with e1 L chi R e2.
    Pivot { e1: String, e2: String },
    /// Multipliers beta, alpha with beta o e2 o alpha = e1.
    Multipliers { e1: String, e2: String },
    /// Membership in the maximal subgroup at eta_i.
    Subgroup { e: String, i: u8 },
    /// The embedding of M_{k,n} into M_{k,1} (needs --b).
    Embed { e: String },
    /// Bounded witness search for a preorder r, l or j.
    Oracle { rel: String, e1: String, e2: String },
    /// Circuit queries: eval, image, image-size, image-size-mod,
    /// domain-size, domain-size-mod, element, print.
    Circuit {
        sub: String,
        file: String,
        #[arg(long)]
        h: Option<u64>,
        #[arg(long)]
        input: Option<String>,
    },
    /// Reductions: taut, nontaut-or-taut, phi0, inv-d, gadget,
    /// domain-gadget, formula-circuit.
    Reduce {
        kind: String,
        #[arg(required = true)]
        formulas: Vec<String>,
        #[arg(long)]
        vars: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Counting: sat, exists-sat, oplus, oplus10.
    Count {
        sub: String,
        formula: String,
        #[arg(long)]
        vars: Option<usize>,
        /// Existential variables.
        #[arg(long)]
        m: Option<usize>,
        /// Free variables.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        h: Option<u64>,
        #[arg(long)]
        i: Option<u64>,
    },
    /// Seeded random samples: element, nonzero, injective, formula.
    Random {
        what: String,
        #[arg(long, default_value_t = 5)]
        count: usize,
        /// Entries (variables for formulas).
        #[arg(long, default_value_t = 3)]
        entries: usize,
        /// Word length (depth for formulas).
        #[arg(long, default_value_t = 3)]
        len: usize,
    },
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::Element { .. } => "element",
            Cmd::Green { .. } => "green",
            Cmd::Dclass { .. } => "dclass",
            Cmd::Pivot { .. } => "pivot",
            Cmd::Multipliers { .. } => "multipliers",
            Cmd::Subgroup { .. } => "subgroup",
            Cmd::Embed { .. } => "embed",
            Cmd::Oracle { .. } => "oracle",
            Cmd::Circuit { .. } => "circuit",
            Cmd::Reduce { .. } => "reduce",
            Cmd::Count { .. } => "count",
            Cmd::Random { .. } => "random",
        }
    }
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let alphabet = match cli.b {
        Some(b) => Alphabet::with_heads(cli.k, b)?,
        None => Alphabet::new(cli.k)?,
    };
    if cli.cap == 0 {
        return Err(CliError::Usage("--cap must be positive".into()));
    }
    let cfg = RunConfig { alphabet, cap: cli.cap, budget: parse_budget(&cli.budget)?, seed: cli.seed };
    let mut env = Env::new(alphabet, cli.cap);
    for d in &cli.defs {
        let (name, text) = parse_def(d)?;
        env.define(name, text)?;
    }
    match &cli.cmd {
        Cmd::Element { e } => commands::element(&env, e),
        Cmd::Green { rel, e1, e2 } => commands::green(&env, rel, e1, e2),
        Cmd::Dclass { e } => commands::dclass(&env, e),
        Cmd::Pivot { e1, e2 } => commands::pivot(&env, e1, e2),
        Cmd::Multipliers { e1, e2 } => commands::multipliers(&env, e1, e2),
        Cmd::Subgroup { e, i } => commands::subgroup(&env, e, *i),
        Cmd::Embed { e } => commands::embed(&env, e),
        Cmd::Oracle { rel, e1, e2 } => commands::oracle(&cfg, &env, rel, e1, e2),
        Cmd::Circuit { sub, file, h, input } => commands::circuit(&cfg, sub, file, *h, input.as_deref()),
        Cmd::Reduce { kind, formulas, vars, m, n } => {
            commands::reduce(&cfg, kind, &ReduceArgs { formulas, vars: *vars, m: *m, n: *n })
        }
        Cmd::Count { sub, formula, vars, m, n, h, i } => {
            commands::count(&cfg, sub, &CountArgs { formula, vars: *vars, m: *m, n: *n, h: *h, i: *i })
        }
        Cmd::Random { what, count, entries, len } => commands::random(&cfg, what, *count, *entries, *len),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text()),
                Format::Machine => print!("{}", out.machine(cli.cmd.name())),
            }
            ExitCode::from(out.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
