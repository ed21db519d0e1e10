//! Subcommand bodies. Each returns an [`Output`] holding the verdict, the
//! human-readable lines and the machine-readable result.

use serde_json::{json, Value};
use thmon::circuits::{
    c_gadget, circuit_to_element, count_sat, domain_gadget, formula_to_circuit, inv_d_reduction,
    inv_d_table, is_tautology, nontaut_or_taut_instance, phi0_b, taut_reduction, BoolFormula, Circuit,
    EvalResult,
};
use thmon::counting::{exists_sat_counts, oplus_10_exists_sat, oplus_exists_sat};
use thmon::green::{
    dclass_index, equiv_d, equiv_h, equiv_j, equiv_l, equiv_r, leq_j, multiplier_search, pivot_search,
    GreenVerdict, OracleBudget, Preorder, Witness, WitnessOracle,
};
use thmon::structure::{embed_e, in_max_subgroup, subgroup_to_higman};
use thmon::{gen, Alphabet, Element, Error};

use crate::expr::{describe, Env};
use crate::CliError;

pub type CmdResult = std::result::Result<Output, CliError>;

#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub alphabet: Alphabet,
    pub cap: u64,
    pub budget: OracleBudget,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    /// `None` for commands that only construct or report.
    pub holds: Option<bool>,
    pub lines: Vec<String>,
    pub result: Value,
}

impl Output {
    fn report(lines: Vec<String>, result: Value) -> Self {
        Output { holds: None, lines, result }
    }

    fn verdict(holds: bool, lines: Vec<String>, result: Value) -> Self {
        Output { holds: Some(holds), lines, result }
    }

    pub fn exit_code(&self) -> u8 {
        match self.holds {
            Some(false) => 1,
            _ => 0,
        }
    }

    pub fn text(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }

    /// Header line plus one JSON line.
    pub fn machine(&self, command: &str) -> String {
        let v = json!({ "command": command, "holds": self.holds, "result": self.result });
        format!("{}\n{}\n", crate::MACHINE_HEADER, v)
    }
}

fn witness_json(w: &Witness) -> Value {
    let s = |e: &Element| Value::String(e.to_string());
    match w {
        Witness::TwoSided { beta, alpha } => json!({ "kind": "two-sided", "beta": s(beta), "alpha": s(alpha) }),
        Witness::Right { alpha, alpha_back } => {
            json!({ "kind": "right", "alpha": s(alpha), "alpha_back": s(alpha_back) })
        }
        Witness::Left { beta, beta_back } => json!({ "kind": "left", "beta": s(beta), "beta_back": s(beta_back) }),
        Witness::Pivot { chi, left, right } => {
            json!({ "kind": "pivot", "chi": s(chi), "left": witness_json(left), "right": witness_json(right) })
        }
        Witness::Both { right, left } => json!({ "kind": "both", "right": witness_json(right), "left": witness_json(left) }),
        Witness::Mutual { forward, backward } => {
            json!({ "kind": "mutual", "forward": witness_json(forward), "backward": witness_json(backward) })
        }
    }
}

/// One-line summary used after the verdict.
fn witness_summary(w: &Witness) -> String {
    match w {
        Witness::TwoSided { beta, alpha } => format!("beta {beta}, alpha {alpha}"),
        Witness::Right { alpha, alpha_back } => format!("alpha {alpha}, back {alpha_back}"),
        Witness::Left { beta, beta_back } => format!("beta {beta}, back {beta_back}"),
        Witness::Pivot { chi, .. } => format!("pivot {chi}"),
        Witness::Both { .. } => "R and L".into(),
        Witness::Mutual { .. } => "both directions".into(),
    }
}

fn witness_lines(w: &Witness, indent: usize, out: &mut Vec<String>) {
    let pad = "  ".repeat(indent);
    let sub = |label: &str, w: &Witness, out: &mut Vec<String>| {
        out.push(format!("{pad}{label}: {}", witness_summary(w)));
        witness_lines(w, indent + 1, out);
    };
    match w {
        Witness::Pivot { left, right, .. } => {
            sub("L", left, out);
            sub("R", right, out);
        }
        Witness::Both { right, left } => {
            sub("R", right, out);
            sub("L", left, out);
        }
        Witness::Mutual { forward, backward } => {
            sub("forward", forward, out);
            sub("backward", backward, out);
        }
        _ => {}
    }
}

fn verdict_output(v: &GreenVerdict, psi: &Element, phi: &Element) -> Output {
    let mut lines = Vec::new();
    match &v.witness {
        Some(w) if v.holds => {
            lines.push(format!("true, {}", witness_summary(w)));
            witness_lines(w, 1, &mut lines);
        }
        _ => lines.push(v.holds.to_string()),
    }
    let result = json!({
        "relation": v.relation.to_string(),
        "psi": psi.to_string(),
        "phi": phi.to_string(),
        "witness": v.witness.as_ref().map(witness_json),
    });
    Output::verdict(v.holds, lines, result)
}

pub fn element(env: &Env, e: &str) -> CmdResult {
    let x = env.eval_str(e)?;
    let lines = vec![
        x.to_string(),
        format!("alphabet: {}", describe(x.alphabet())),
        format!("entries: {}", x.entries().len()),
        format!("domain code: {}", x.dom_code()),
        format!("image code: {}", x.im_code()),
        format!("|imC|: {}", x.imc_size()),
        format!("D-class: {}", dclass_index(&x)),
        format!(
            "zero: {}, identity: {}, idempotent: {}, injective: {}, unit: {}",
            x.is_zero(),
            x.is_identity(),
            x.is_idempotent(),
            x.is_injective(),
            x.is_unit()
        ),
    ];
    let result = json!({
        "element": x.to_string(),
        "entries": x.entries().len(),
        "domain_code": x.dom_code().to_string(),
        "image_code": x.im_code().to_string(),
        "imc_size": x.imc_size(),
        "dclass": dclass_index(&x),
        "zero": x.is_zero(),
        "identity": x.is_identity(),
        "idempotent": x.is_idempotent(),
        "injective": x.is_injective(),
        "unit": x.is_unit(),
    });
    Ok(Output::report(lines, result))
}

pub fn green(env: &Env, rel: &str, e1: &str, e2: &str) -> CmdResult {
    let (psi, phi) = (env.eval_str(e1)?, env.eval_str(e2)?);
    let v = match rel.to_ascii_lowercase().as_str() {
        "leq-j" | "le-j" => leq_j(&psi, &phi)?,
        "j" => equiv_j(&psi, &phi)?,
        "d" => equiv_d(&psi, &phi)?,
        "r" => equiv_r(&psi, &phi)?,
        "l" => equiv_l(&psi, &phi)?,
        "h" => equiv_h(&psi, &phi)?,
        _ => return Err(CliError::Usage(format!("unknown relation `{rel}` (leq-j, j, d, r, l, h)"))),
    };
    Ok(verdict_output(&v, &psi, &phi))
}

pub fn dclass(env: &Env, e: &str) -> CmdResult {
    let x = env.eval_str(e)?;
    let d = dclass_index(&x);
    let line = if d == 0 { "0 (zero element)".to_string() } else { format!("{d} (|imC| = {})", x.imc_size()) };
    Ok(Output::report(vec![line], json!({ "element": x.to_string(), "dclass": d, "imc_size": x.imc_size() })))
}

pub fn pivot(env: &Env, e1: &str, e2: &str) -> CmdResult {
    let (psi, phi) = (env.eval_str(e1)?, env.eval_str(e2)?);
    if dclass_index(&psi) != dclass_index(&phi) {
        let lines = vec!["false, not D-equivalent".into()];
        return Ok(Output::verdict(false, lines, json!({ "chi": null })));
    }
    let chi = pivot_search(&psi, &phi)?;
    let l = equiv_l(&psi, &chi)?;
    let r = equiv_r(&chi, &phi)?;
    let ok = l.holds && r.holds && l.verify(&psi, &chi) && r.verify(&chi, &phi);
    let mut lines = vec![format!("pivot {chi}")];
    lines.push(format!("  psi L chi: {}", l.holds));
    lines.push(format!("  chi R phi: {}", r.holds));
    let result = json!({
        "chi": chi.to_string(),
        "left": l.witness.as_ref().map(witness_json),
        "right": r.witness.as_ref().map(witness_json),
    });
    Ok(Output::verdict(ok, lines, result))
}

pub fn multipliers(env: &Env, e1: &str, e2: &str) -> CmdResult {
    let (psi, phi) = (env.eval_str(e1)?, env.eval_str(e2)?);
    let (beta, alpha) = multiplier_search(&psi, &phi)?;
    let ok = beta.compose(&phi.compose(&alpha)?)? == psi;
    let lines = vec![format!("beta {beta}"), format!("alpha {alpha}"), format!("beta o phi o alpha = psi: {ok}")];
    Ok(Output::verdict(ok, lines, json!({ "beta": beta.to_string(), "alpha": alpha.to_string() })))
}

pub fn subgroup(env: &Env, e: &str, i: u8) -> CmdResult {
    let x = env.eval_str(e)?;
    let holds = in_max_subgroup(&x, i)?;
    let mut lines = vec![holds.to_string()];
    let mut result = json!({ "element": x.to_string(), "i": i, "relabeled": null });
    if holds {
        let h = subgroup_to_higman(&x, i)?;
        lines.push(format!("relabeled {h}"));
        result["relabeled"] = Value::String(h.to_string());
    }
    Ok(Output::verdict(holds, lines, result))
}

pub fn embed(env: &Env, e: &str) -> CmdResult {
    let x = env.eval_str(e)?;
    let y = embed_e(&x)?;
    let lines = vec![y.to_string(), format!("alphabet: {}", describe(y.alphabet()))];
    Ok(Output::report(lines, json!({ "element": x.to_string(), "image": y.to_string() })))
}

pub fn oracle(cfg: &RunConfig, env: &Env, rel: &str, e1: &str, e2: &str) -> CmdResult {
    let x = match rel.to_ascii_lowercase().as_str() {
        "r" => Preorder::R,
        "l" => Preorder::L,
        "j" => Preorder::J,
        _ => return Err(CliError::Usage(format!("unknown preorder `{rel}` (r, l, j)"))),
    };
    let (psi, phi) = (env.eval_str(e1)?, env.eval_str(e2)?);
    if psi.alphabet() != phi.alphabet() {
        return Err(Error::AlphabetMismatch.into());
    }
    let mut o = WitnessOracle::new(psi.alphabet(), cfg.budget)?;
    let w = o.search(&psi, &phi, x)?;
    let b = cfg.budget;
    let budget = format!("{},{},{}", b.max_entries, b.max_dom_len, b.max_img_len);
    let lines = match &w {
        Some(w) => vec![format!("true, {}", witness_summary(w))],
        None => vec![format!("false, no witness within budget {budget}")],
    };
    let result = json!({ "budget": budget, "witness": w.as_ref().map(witness_json) });
    Ok(Output::verdict(w.is_some(), lines, result))
}

fn bits(v: &[bool]) -> String {
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn read_circuit(path: &str) -> std::result::Result<Circuit, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    Ok(Circuit::parse_netlist(&text)?)
}

pub fn circuit(cfg: &RunConfig, sub: &str, path: &str, h: Option<u64>, input: Option<&str>) -> CmdResult {
    let c = read_circuit(path)?;
    let need_h = || h.ok_or_else(|| CliError::Usage(format!("`circuit {sub}` needs --h")));
    let yes_no = |b: bool| if b { "yes" } else { "no" }.to_string();
    Ok(match sub {
        "print" => Output::report(c.to_netlist().lines().map(str::to_string).collect(), json!({ "netlist": c.to_netlist() })),
        "eval" => {
            let input = input.ok_or_else(|| CliError::Usage("`circuit eval` needs --input".into()))?;
            let x = input
                .chars()
                .map(|ch| match ch {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(CliError::Usage(format!("input `{input}` is not a bit string"))),
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            match c.eval(&x)? {
                EvalResult::Bits(y) => Output::verdict(true, vec![bits(&y)], json!({ "output": bits(&y) })),
                EvalResult::Bottom => Output::verdict(false, vec!["undefined".into()], json!({ "output": null })),
            }
        }
        "image" => {
            let img: Vec<String> = c.image(cfg.cap)?.iter().map(|v| bits(v)).collect();
            Output::report(img.clone(), json!({ "image": img }))
        }
        "image-size" => {
            let n = c.image_size(cfg.cap)?;
            Output::report(vec![n.to_string()], json!({ "size": n }))
        }
        "domain-size" => {
            let n = c.domain_size(cfg.cap)?;
            Output::report(vec![n.to_string()], json!({ "size": n }))
        }
        "image-size-mod" => {
            let h = need_h()?;
            let b = c.image_size_mod(h, cfg.cap)?;
            Output::verdict(b, vec![yes_no(b)], json!({ "h": h, "one_mod_h": b }))
        }
        "domain-size-mod" => {
            let h = need_h()?;
            let b = c.domain_size_mod(h, cfg.cap)?;
            Output::verdict(b, vec![yes_no(b)], json!({ "h": h, "one_mod_h": b }))
        }
        "element" => {
            let e = circuit_to_element(&c, cfg.cap)?;
            Output::report(vec![e.to_string()], json!({ "element": e.to_string() }))
        }
        _ => return Err(CliError::Usage(format!("unknown circuit subcommand `{sub}`"))),
    })
}

fn formula(text: &str, vars: Option<usize>) -> std::result::Result<(BoolFormula, usize), CliError> {
    let b = BoolFormula::parse(text)?;
    let m = vars.unwrap_or(b.arity());
    if m < b.arity() {
        return Err(CliError::Usage(format!("`{text}` uses {} variables, --vars is {m}", b.arity())));
    }
    Ok((b, m))
}

fn check_cap(cfg: &RunConfig, vars: usize) -> std::result::Result<(), CliError> {
    let needed = 1u128 << vars.min(127);
    if needed > u128::from(cfg.cap) {
        return Err(Error::Cap { needed, cap: u128::from(cfg.cap) }.into());
    }
    Ok(())
}

fn netlist_output(c: &Circuit) -> Output {
    Output::report(c.to_netlist().lines().map(str::to_string).collect(), json!({ "netlist": c.to_netlist() }))
}

pub struct ReduceArgs<'a> {
    pub formulas: &'a [String],
    pub vars: Option<usize>,
    pub m: Option<usize>,
    pub n: Option<usize>,
}

pub fn reduce(cfg: &RunConfig, kind: &str, args: &ReduceArgs) -> CmdResult {
    let want = if kind == "nontaut-or-taut" { 2 } else { 1 };
    if args.formulas.len() != want {
        return Err(CliError::Usage(format!("`reduce {kind}` takes {want} formula(s)")));
    }
    let (b, m) = formula(&args.formulas[0], args.vars)?;
    if kind != "gadget" {
        check_cap(cfg, m)?;
    }
    Ok(match kind {
        "taut" => {
            let e = taut_reduction(&b, m)?;
            let verdict = if e.is_zero() {
                "zero element: B is a tautology"
            } else {
                "nonzero element: B is not a tautology"
            };
            let result = json!({ "element": e.to_string(), "zero": e.is_zero(), "tautology": is_tautology(&b, m) });
            Output::report(vec![e.to_string(), verdict.into()], result)
        }
        "nontaut-or-taut" => {
            let (b2, m2) = formula(&args.formulas[1], args.vars)?;
            check_cap(cfg, m2)?;
            let (psi, phi) = nontaut_or_taut_instance(&b, m, &b2, m2)?;
            let v = leq_j(&psi, &phi)?;
            let lines = vec![
                format!("psi {psi}"),
                format!("phi {phi}"),
                format!("psi <=_J phi: {}", v.holds),
            ];
            let result = json!({ "psi": psi.to_string(), "phi": phi.to_string(), "leq_j": v.holds });
            Output::verdict(v.holds, lines, result)
        }
        "phi0" => {
            let e = phi0_b(&b, m)?;
            Output::report(vec![e.to_string()], json!({ "element": e.to_string() }))
        }
        "inv-d" => {
            let t = inv_d_table(&b, m)?;
            let e = inv_d_reduction(&b, m)?;
            let sat = count_sat(&b, m);
            let lines = vec![
                e.to_string(),
                format!("table {t}"),
                format!("|imC| of table: {}, satisfying assignments: {sat}", t.image_code().len()),
                format!("injective: {}", e.is_injective()),
            ];
            let result = json!({
                "element": e.to_string(),
                "table": t.to_string(),
                "imc_size": t.image_code().len(),
                "sat": sat,
                "dclass": dclass_index(&e),
            });
            Output::report(lines, result)
        }
        "formula-circuit" => netlist_output(&formula_to_circuit(&b, m)?),
        "domain-gadget" => netlist_output(&domain_gadget(&b, m)?),
        "gadget" => {
            let gm = args.m.ok_or_else(|| CliError::Usage("`reduce gadget` needs --m".into()))?;
            let gn = args.n.unwrap_or(m.saturating_sub(gm));
            netlist_output(&c_gadget(&b, gm, gn)?)
        }
        _ => return Err(CliError::Usage(format!("unknown reduction `{kind}`"))),
    })
}

pub struct CountArgs<'a> {
    pub formula: &'a str,
    pub vars: Option<usize>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub h: Option<u64>,
    pub i: Option<u64>,
}

pub fn count(cfg: &RunConfig, sub: &str, args: &CountArgs) -> CmdResult {
    let (b, vars) = formula(args.formula, args.vars)?;
    if sub == "sat" {
        check_cap(cfg, vars)?;
        let s = count_sat(&b, vars);
        return Ok(Output::report(vec![s.to_string()], json!({ "sat": s, "vars": vars })));
    }
    let m = args.m.ok_or_else(|| CliError::Usage(format!("`count {sub}` needs --m")))?;
    let n = args.n.unwrap_or(vars.saturating_sub(m));
    if m + n < b.arity() {
        return Err(CliError::Usage(format!("formula uses {} variables, m + n = {}", b.arity(), m + n)));
    }
    let need_h = || args.h.ok_or_else(|| CliError::Usage(format!("`count {sub}` needs --h")));
    Ok(match sub {
        "exists-sat" => {
            let (sat, unsat) = exists_sat_counts(&b, m, n, cfg.cap)?;
            let lines = vec![format!("exists-satisfiable: {sat}"), format!("not: {unsat}")];
            Output::report(lines, json!({ "sat": sat, "unsat": unsat }))
        }
        "oplus" => {
            let (h, i) = (need_h()?, args.i.unwrap_or(0));
            let r = oplus_exists_sat(&b, m, n, h, i, cfg.cap)?;
            Output::verdict(r, vec![r.to_string()], json!({ "h": h, "i": i, "holds": r }))
        }
        "oplus10" => {
            let h = need_h()?;
            let r = oplus_10_exists_sat(&b, m, n, h, cfg.cap)?;
            Output::verdict(r, vec![r.to_string()], json!({ "h": h, "holds": r }))
        }
        _ => return Err(CliError::Usage(format!("unknown count subcommand `{sub}`"))),
    })
}

pub fn random(cfg: &RunConfig, what: &str, count: usize, entries: usize, maxlen: usize) -> CmdResult {
    let mut rng = gen::rng(cfg.seed);
    let a = cfg.alphabet;
    let mut items = Vec::with_capacity(count);
    for _ in 0..count {
        let s = match what {
            "element" => gen::element(&mut rng, a, entries, maxlen).to_string(),
            "nonzero" => gen::nonzero_element(&mut rng, a, entries, maxlen).to_string(),
            "injective" => gen::injective_element(&mut rng, a, entries, maxlen).to_string(),
            "formula" => gen::formula(&mut rng, entries, maxlen).to_string(),
            _ => return Err(CliError::Usage(format!("unknown random kind `{what}` (element, nonzero, injective, formula)"))),
        };
        items.push(s);
    }
    let mut lines = vec![format!("seed {}", cfg.seed)];
    lines.extend(items.iter().cloned());
    Ok(Output::report(lines, json!({ "seed": cfg.seed, "items": items })))
}
