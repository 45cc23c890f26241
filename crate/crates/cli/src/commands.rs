use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::ValueEnum;
use nearvec_core::classify::st1_size;
use nearvec_core::sequences::parse_values;
use nearvec_core::{
    all_subgroups, brute_force_classes, brute_force_counts, build_witness, check_axioms,
    isomorphic, orbit, total_count, verify_witness, ActionSpec, Error, FiniteField, QuotientGroup,
    SuitableSequence, VerifyMode, DEFAULT_ENUMERATION_BUDGET, DEFAULT_VERIFICATION_BUDGET,
};
use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use crate::{Method, Verify};

pub const BUDGET_VAR: &str = "NEARVEC_BUDGET";

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => f.write_str(s),
            CliError::Core(Error::BudgetExceeded { required, budget }) => write!(
                f,
                "work size {required} exceeds budget {budget}; raise it with {BUDGET_VAR}"
            ),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::BudgetExceeded { .. }) => 3,
            CliError::Core(Error::NotIsomorphic) => 1,
            _ => 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Rendered output and exit code of a successful run.
pub struct Output {
    pub stdout: String,
    pub code: u8,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, code: 0 }
    }
}

fn budget(default: u128) -> Result<u128> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{BUDGET_VAR}={v:?} is not a non-negative integer"))),
        Err(_) => Ok(default),
    }
}

fn load_group(p: u64, n: u32) -> Result<QuotientGroup> {
    Ok(QuotientGroup::from_prime_power(p, n)?)
}

fn describe(g: &QuotientGroup) -> String {
    let params = g.params();
    let elements: Vec<String> = g.element_values().iter().map(u64::to_string).collect();
    format!(
        "G = U({})/<{}> = {{{}}}, |G| = {}",
        params.modulus(),
        params.p(),
        elements.join(", "),
        g.order()
    )
}

fn big(v: &BigUint) -> Value {
    Value::Number(v.to_string().parse().expect("decimal integers are valid JSON numbers"))
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

fn no_csv(command: &str) -> CliError {
    CliError::Usage(format!("csv output is not available for `{command}`"))
}

/// Pads every column to its widest cell.
fn grid(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(String::len).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, cell)| format!("{cell:>w$}", w = widths[c]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn csv_string(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is UTF-8")
}

pub fn group(p: u64, n: u32, format: Format) -> Result<Output> {
    let g = load_group(p, n)?;
    let table = g.cayley_table();
    let values = g.element_values();
    let product = |a: usize, b: usize| values[table.mul(a as u32, b as u32) as usize];
    match format {
        Format::Plain => {
            let mut out = describe(&g);
            out.push('\n');
            if g.is_trivial() {
                out.push_str("G is trivial: every unit is a power of p, so 1 is the only class\n");
            }
            let mut rows = vec![std::iter::once("*".to_string())
                .chain(values.iter().map(u64::to_string))
                .collect::<Vec<_>>()];
            for (a, va) in values.iter().enumerate() {
                rows.push(
                    std::iter::once(va.to_string())
                        .chain((0..values.len()).map(|b| product(a, b).to_string()))
                        .collect(),
                );
            }
            out.push_str(&grid(&rows));
            Ok(Output::ok(out))
        }
        Format::Json => {
            let rows: Vec<Vec<u64>> = (0..values.len())
                .map(|a| (0..values.len()).map(|b| product(a, b)).collect())
                .collect();
            Ok(Output::ok(render_json(&json!({
                "p": p,
                "n": n,
                "m": null,
                "G": values,
                "per_N": null,
                "total": null,
                "classes": null,
                "trivial": g.is_trivial(),
                "table": rows,
            }))))
        }
        Format::Csv => Err(no_csv("group")),
    }
}

struct Cell {
    t_n: BigUint,
    formula: Option<BigUint>,
    brute: Option<u64>,
}

impl Cell {
    fn matches(&self) -> Option<bool> {
        Some(self.formula.as_ref()? == &BigUint::from(self.brute?))
    }

    fn value(&self) -> BigUint {
        self.formula
            .clone()
            .unwrap_or_else(|| BigUint::from(self.brute.expect("one method ran")))
    }
}

struct TableRow {
    m: usize,
    cells: BTreeMap<usize, Cell>,
    formula_total: Option<BigUint>,
    brute_total: Option<u64>,
}

impl TableRow {
    fn total(&self) -> BigUint {
        self.formula_total
            .clone()
            .unwrap_or_else(|| BigUint::from(self.brute_total.expect("one method ran")))
    }

    fn total_matches(&self) -> Option<bool> {
        Some(self.formula_total.as_ref()? == &BigUint::from(self.brute_total?))
    }
}

pub fn table(p: u64, n: u32, (lo, hi): (usize, usize), method: Method, format: Format) -> Result<Output> {
    let g = load_group(p, n)?;
    let lat = all_subgroups(&g);
    let enumeration_budget = budget(DEFAULT_ENUMERATION_BUDGET)?;
    let mut rows = Vec::new();
    for m in lo..=hi {
        let formula = match method {
            Method::Brute => None,
            _ => Some(total_count(&lat, m)?),
        };
        let brute = match method {
            Method::Formula => None,
            _ => Some(brute_force_counts(&g, m, enumeration_budget)?),
        };
        let mut cells = BTreeMap::new();
        for nn in 1..=m.min(g.order()) {
            cells.insert(
                nn,
                Cell {
                    t_n: nearvec_core::t_n(g.order(), m, nn)?,
                    formula: formula.as_ref().map(|f| f.per_n[&nn].classes.clone()),
                    brute: brute.as_ref().map(|b| b.per_n.get(&nn).copied().unwrap_or(0)),
                },
            );
        }
        rows.push(TableRow {
            m,
            cells,
            formula_total: formula.map(|f| f.total),
            brute_total: brute.map(|b| b.total),
        });
    }
    let mismatches: Vec<String> = rows
        .iter()
        .flat_map(|r| {
            let cells = r
                .cells
                .iter()
                .filter(|(_, c)| c.matches() == Some(false))
                .map(move |(nn, _)| format!("m={} N={nn}", r.m));
            let total = (r.total_matches() == Some(false)).then(|| format!("m={} total", r.m));
            cells.chain(total)
        })
        .collect();
    let code = u8::from(!mismatches.is_empty());
    let method_name = match method {
        Method::Formula => "formula",
        Method::Brute => "brute",
        Method::Both => "both",
    };

    let stdout = match format {
        Format::Plain => {
            let max_n = hi.min(g.order());
            let mut out = describe(&g);
            let _ = writeln!(out, "\nmethod: {method_name}");
            let mut grid_rows = vec![std::iter::once("m".to_string())
                .chain((1..=max_n).map(|nn| format!("N={nn}")))
                .chain(["total".to_string()])
                .collect::<Vec<_>>()];
            for r in &rows {
                let mut line = vec![r.m.to_string()];
                for nn in 1..=max_n {
                    line.push(match r.cells.get(&nn) {
                        Some(c) if c.matches() == Some(false) => {
                            format!("{}/{}", c.formula.as_ref().unwrap(), c.brute.unwrap())
                        }
                        Some(c) => c.value().to_string(),
                        None => "-".into(),
                    });
                }
                line.push(r.total().to_string());
                grid_rows.push(line);
            }
            out.push_str(&grid(&grid_rows));
            if method == Method::Both {
                for r in &rows {
                    let verdicts: Vec<String> = r
                        .cells
                        .iter()
                        .map(|(nn, c)| format!("N={nn} {}", verdict(c.matches())))
                        .chain([format!("total {}", verdict(r.total_matches()))])
                        .collect();
                    let _ = writeln!(out, "m={}: {}", r.m, verdicts.join(", "));
                }
                if mismatches.is_empty() {
                    out.push_str("all cells MATCH\n");
                } else {
                    let _ = writeln!(out, "MISMATCH in {}", mismatches.join(", "));
                }
            }
            out
        }
        Format::Json => {
            let docs: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut per_n = Map::new();
                    for (nn, c) in &r.cells {
                        let mut cell = Map::new();
                        cell.insert("t_N".into(), big(&c.t_n));
                        cell.insert("T_N".into(), big(&c.value()));
                        if method == Method::Both {
                            cell.insert("brute".into(), json!(c.brute));
                            cell.insert("match".into(), json!(c.matches()));
                        }
                        per_n.insert(nn.to_string(), Value::Object(cell));
                    }
                    let mut doc = Map::new();
                    doc.insert("p".into(), json!(p));
                    doc.insert("n".into(), json!(n));
                    doc.insert("m".into(), json!(r.m));
                    doc.insert("G".into(), json!(g.element_values()));
                    doc.insert("method".into(), json!(method_name));
                    doc.insert("per_N".into(), Value::Object(per_n));
                    doc.insert("total".into(), big(&r.total()));
                    if method == Method::Both {
                        doc.insert("total_brute".into(), json!(r.brute_total));
                        doc.insert("total_match".into(), json!(r.total_matches()));
                    }
                    doc.insert("classes".into(), Value::Null);
                    Value::Object(doc)
                })
                .collect();
            render_json(&Value::Array(docs))
        }
        Format::Csv => {
            let mut records = vec![["p", "n", "m", "N", "t_N", "T_N", "method"]
                .map(String::from)
                .to_vec()];
            for r in &rows {
                let mut emit = |nn: String, t: String, value: String, which: &str| {
                    records.push(vec![
                        p.to_string(),
                        n.to_string(),
                        r.m.to_string(),
                        nn,
                        t,
                        value,
                        which.to_string(),
                    ]);
                };
                let st1 = st1_size(g.order(), r.m).to_string();
                for (nn, c) in &r.cells {
                    if let Some(f) = &c.formula {
                        emit(nn.to_string(), c.t_n.to_string(), f.to_string(), "formula");
                    }
                    if let Some(b) = c.brute {
                        emit(nn.to_string(), c.t_n.to_string(), b.to_string(), "brute");
                    }
                }
                if let Some(f) = &r.formula_total {
                    emit("total".into(), st1.clone(), f.to_string(), "formula");
                }
                if let Some(b) = r.brute_total {
                    emit("total".into(), st1.clone(), b.to_string(), "brute");
                }
            }
            csv_string(records)
        }
    };
    Ok(Output { stdout, code })
}

fn verdict(m: Option<bool>) -> &'static str {
    match m {
        Some(true) => "MATCH",
        Some(false) => "MISMATCH",
        None => "n/a",
    }
}

/// Canonicalizes and sorts, warning on stderr when the input changed.
fn read_sequence(g: &QuotientGroup, flag: &str, text: &str) -> Result<SuitableSequence> {
    let normalized = SuitableSequence::normalize(g, &parse_values(text)?)?;
    if normalized.changed {
        eprintln!(
            "warning: {flag} {text:?} normalized to {}",
            normalized.sequence
        );
    }
    Ok(normalized.sequence)
}

pub fn witness(
    p: u64,
    n: u32,
    s1: &str,
    s2: &str,
    verify: Option<Verify>,
    format: Format,
) -> Result<Output> {
    if format == Format::Csv {
        return Err(no_csv("witness"));
    }
    let g = load_group(p, n)?;
    let s1 = read_sequence(&g, "--s1", s1)?;
    let s2 = read_sequence(&g, "--s2", s2)?;
    let Some(q) = isomorphic(&g, &s1, &s2)? else {
        let stdout = match format {
            Format::Json => render_json(&json!({
                "p": p, "n": n, "m": s1.len(), "G": g.element_values(),
                "s1": s1.values(), "s2": s2.values(), "isomorphic": false,
            })),
            _ => "NOT-ISOMORPHIC\n".to_string(),
        };
        return Ok(Output { stdout, code: 1 });
    };
    let w = build_witness(&g, &s1, &s2, q)?;
    let verification = match verify {
        None => None,
        Some(mode) => {
            let field = FiniteField::new(p, n)?;
            let mode = match mode {
                Verify::Exhaustive => VerifyMode::Exhaustive,
                Verify::Sampled => VerifyMode::sampled(),
            };
            let label = match mode {
                VerifyMode::Exhaustive => "exhaustive",
                VerifyMode::Sampled { .. } => "sampled",
            };
            let r = verify_witness(&field, &s1, &s2, &w, mode, budget(DEFAULT_VERIFICATION_BUDGET)?)?;
            Some((label, r))
        }
    };
    let code = match &verification {
        Some((_, r)) if !r.verified() => 1,
        _ => 0,
    };
    let exponents = w.frobenius_exponents(p);
    let stdout = match format {
        Format::Json => {
            let v = verification.as_ref().map(|(label, r)| {
                json!({
                    "mode": label,
                    "checks": r.checks,
                    "additive": r.additive,
                    "bijective": r.bijective,
                    "compatible": r.compatible,
                    "verified": r.verified(),
                })
            });
            render_json(&json!({
                "p": p, "n": n, "m": s1.len(), "G": g.element_values(),
                "s1": s1.values(), "s2": s2.values(), "isomorphic": true,
                "q": q.value(),
                "sigma": w.sigma_one_based(),
                "frobenius_powers": w.frobenius_powers,
                "frobenius_exponents": exponents,
                "verification": v,
            }))
        }
        _ => {
            let join = |v: Vec<String>| v.join(" ");
            let mut out = String::new();
            let _ = writeln!(out, "q = {q}");
            let _ = writeln!(
                out,
                "sigma = {}",
                join(w.sigma_one_based().iter().map(usize::to_string).collect())
            );
            let _ = writeln!(
                out,
                "frobenius powers = {}",
                join(w.frobenius_powers.iter().map(u32::to_string).collect())
            );
            let _ = writeln!(
                out,
                "frobenius exponents = {}",
                join(exponents.iter().map(u64::to_string).collect())
            );
            let theta: Vec<String> = w
                .sigma_one_based()
                .iter()
                .zip(&exponents)
                .map(|(j, &e)| if e == 1 { format!("x{j}") } else { format!("x{j}^{e}") })
                .collect();
            let _ = writeln!(out, "theta(x) = ({})", theta.join(", "));
            let _ = writeln!(out, "eta(s_a) = t_(a^{q})");
            if let Some((label, r)) = &verification {
                let word = if r.verified() { "VERIFIED" } else { "NOT VERIFIED" };
                let _ = writeln!(out, "{word} ({label}, {} checks)", r.checks);
                if !r.verified() {
                    let _ = writeln!(
                        out,
                        "additive: {}, bijective: {}, compatible: {}",
                        r.additive, r.bijective, r.compatible
                    );
                }
            }
            out
        }
    };
    Ok(Output { stdout, code })
}

pub fn classes(p: u64, n: u32, m: usize, format: Format) -> Result<Output> {
    let g = load_group(p, n)?;
    let result = brute_force_classes(&g, m, budget(DEFAULT_ENUMERATION_BUDGET)?)?;
    let orbits = result
        .classes
        .iter()
        .map(|c| orbit(&g, &c.representative))
        .collect::<nearvec_core::Result<Vec<_>>>()?;
    let paren = |s: &SuitableSequence| format!("({s})");
    let stdout = match format {
        Format::Plain => {
            let mut out = describe(&g);
            let _ = writeln!(out, "\nm = {m}: {} classes", result.total);
            let mut rows = vec![["N", "size", "representative", "orbit"].map(String::from).to_vec()];
            for (c, o) in result.classes.iter().zip(&orbits) {
                rows.push(vec![
                    c.support_size.to_string(),
                    c.orbit_size.to_string(),
                    paren(&c.representative),
                    o.iter().map(paren).collect::<Vec<_>>().join(" ~ "),
                ]);
            }
            // sequence columns are left-aligned
            let widths: Vec<usize> = (0..4)
                .map(|i| rows.iter().map(|r| r[i].len()).max().unwrap())
                .collect();
            for r in &rows {
                let line = format!(
                    "{:>w0$}  {:>w1$}  {:<w2$}  {}",
                    r[0],
                    r[1],
                    r[2],
                    r[3],
                    w0 = widths[0],
                    w1 = widths[1],
                    w2 = widths[2]
                );
                out.push_str(line.trim_end());
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let mut per_n = Map::new();
            for (nn, count) in &result.per_n {
                per_n.insert(nn.to_string(), json!({ "T_N": count }));
            }
            let classes: Vec<Value> = result
                .classes
                .iter()
                .zip(&orbits)
                .map(|(c, o)| {
                    json!({
                        "N": c.support_size,
                        "orbit_size": c.orbit_size,
                        "representative": c.representative.values(),
                        "orbit": o.iter().map(SuitableSequence::values).collect::<Vec<_>>(),
                    })
                })
                .collect();
            render_json(&json!({
                "p": p,
                "n": n,
                "m": m,
                "G": g.element_values(),
                "per_N": per_n,
                "total": result.total,
                "classes": classes,
            }))
        }
        Format::Csv => {
            let mut records = vec![["p", "n", "m", "N", "orbit_size", "representative", "orbit"]
                .map(String::from)
                .to_vec()];
            for (c, o) in result.classes.iter().zip(&orbits) {
                records.push(vec![
                    p.to_string(),
                    n.to_string(),
                    m.to_string(),
                    c.support_size.to_string(),
                    c.orbit_size.to_string(),
                    c.representative.to_string(),
                    o.iter().map(ToString::to_string).collect::<Vec<_>>().join(";"),
                ]);
            }
            csv_string(records)
        }
    };
    Ok(Output::ok(stdout))
}

fn poly(coeffs: &[u64]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| {
            let c = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            match i {
                0 => c,
                1 => format!("{c}x"),
                _ => format!("{c}x^{i}"),
            }
        })
        .collect();
    terms.join(" + ")
}

pub fn axioms(p: u64, n: u32, m: Option<usize>, seq: &str, format: Format) -> Result<Output> {
    if format == Format::Csv {
        return Err(no_csv("axioms"));
    }
    let exponents = parse_values(seq)?;
    if let Some(m) = m {
        if m != exponents.len() {
            return Err(CliError::Usage(format!(
                "--m {m} does not match the {} exponents in --seq",
                exponents.len()
            )));
        }
    }
    let field = FiniteField::new(p, n)?;
    let spec = ActionSpec::new(&field, exponents.clone(), None)?;
    let r = check_axioms(&field, &spec, budget(DEFAULT_VERIFICATION_BUDGET)?)?;
    let code = u8::from(!r.all_hold());
    let stdout = match format {
        Format::Json => render_json(&json!({
            "p": p,
            "n": n,
            "m": exponents.len(),
            "exponents": exponents,
            "modulus": field.modulus_poly(),
            "endomorphisms": r.endomorphisms,
            "contains_zero_id_neg": r.contains_zero_id_neg,
            "units_form_group": r.units_form_group,
            "fixed_point_free": r.fixed_point_free,
            "quasi_kernel_size": r.quasi_kernel_size,
            "quasi_kernel_generates": r.quasi_kernel_generates,
            "near_vector_space": r.all_hold(),
        })),
        _ => {
            let yes = |b: bool| if b { "yes" } else { "no" }.to_string();
            let mut out = String::new();
            let _ = writeln!(
                out,
                "GF({}) = GF({p})[x]/({}), exponents ({seq})",
                field.order(),
                poly(field.modulus_poly())
            );
            let rows = vec![
                vec!["scalars are endomorphisms".into(), yes(r.endomorphisms)],
                vec!["contains 0, id, -id".into(), yes(r.contains_zero_id_neg)],
                vec!["nonzero scalars form a group".into(), yes(r.units_form_group)],
                vec!["fixed-point free".into(), yes(r.fixed_point_free)],
                vec!["quasi-kernel size".into(), r.quasi_kernel_size.to_string()],
                vec!["quasi-kernel generates V".into(), yes(r.quasi_kernel_generates)],
            ];
            for row in &rows {
                let _ = writeln!(out, "{:<30}{}", row[0], row[1]);
            }
            out.push_str(if r.all_hold() {
                "NEAR-VECTOR SPACE\n"
            } else {
                "NOT A NEAR-VECTOR SPACE\n"
            });
            out
        }
    };
    Ok(Output { stdout, code })
}
