use ewl_core::exactnum::q_to_decimal;
use ewl_core::oracle::OracleResult;
use ewl_core::{Hint, QValue, RunReport};

use crate::{CliError, StressSummary};

fn exact_and_decimal(x: &QValue) -> String {
    if x.is_rational() && x.a().is_integer() {
        x.to_string()
    } else {
        format!("{x}  ≈ {}", q_to_decimal(x, 10))
    }
}

fn hint(h: &Hint) -> String {
    match h.value() {
        Some(v) => format!("{} = {v}", h.kind()),
        None => h.kind().to_string(),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "NO"
    }
}

pub(crate) fn report(r: &RunReport) -> String {
    let mut s = String::new();
    if let Some(adv) = &r.adversary {
        s += &format!("adversary    {adv}\n");
    }
    s += &format!("decider      {}\n", r.decider);
    s += &format!("d            {}\n", r.d);
    s += &format!(
        "hint         {} ({})\n",
        hint(&r.hint),
        if r.hint_valid { "truthful" } else { "not truthful" }
    );
    for step in &r.trace {
        s += &format!("  {} -> {}\n", step.job, step.machine);
    }
    s += &format!("c_alg        {}\n", exact_and_decimal(&r.c_alg));
    s += &format!("c_opt        {}\n", exact_and_decimal(&r.c_opt));
    s += &format!("ratio        {}\n", r.ratio_decimal);
    let rel = match r.check {
        ewl_core::BoundCheck::Upper => "c_opt ≤ bound·c_alg",
        ewl_core::BoundCheck::Lower => "c_opt ≥ bound·c_alg",
    };
    s += &format!("bound        {rel}, bound = {}: {}\n", r.bound, yes(r.bound_holds));
    s += &format!("c_opt ≤ min(T, 2d): {}\n", yes(r.opt_bound_holds));
    s
}

fn csv_string(header: &[&str], row: &[String]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)
        .and_then(|_| w.write_record(row))
        .map_err(|e| CliError::Failed(e.to_string()))?;
    let bytes = w.into_inner().map_err(|e| CliError::Failed(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub(crate) fn report_csv(r: &RunReport) -> Result<String, CliError> {
    csv_string(
        &["decider", "adversary", "c_alg", "c_opt", "ratio", "bound_holds"],
        &[
            r.decider.clone(),
            r.adversary.clone().unwrap_or_default(),
            q_to_decimal(&r.c_alg, 10),
            q_to_decimal(&r.c_opt, 10),
            r.ratio_decimal.clone(),
            r.bound_holds.to_string(),
        ],
    )
}

pub(crate) fn oracle(r: &OracleResult) -> String {
    let w: Vec<String> = r.witness.iter().map(usize::to_string).collect();
    format!(
        "c_opt    {}\non M2    [{}]\n",
        exact_and_decimal(&r.value),
        w.join(", ")
    )
}

pub(crate) fn oracle_csv(r: &OracleResult) -> Result<String, CliError> {
    let w: Vec<String> = r.witness.iter().map(usize::to_string).collect();
    csv_string(&["c_opt", "witness"], &[q_to_decimal(&r.value, 10), w.join(" ")])
}

pub(crate) fn stress_line(s: &StressSummary) -> String {
    format!(
        "{}: {} trials from seed {}, {} violations, max ratio {} (seed {})",
        s.policy,
        s.trials,
        s.base_seed,
        s.violations.len(),
        s.max_ratio,
        s.max_ratio_seed
    )
}

pub(crate) fn stress_summary(s: &StressSummary) -> String {
    let mut out = format!("{}\n", stress_line(s));
    out += &format!(
        "bound {} ≈ {}, hint {}, n ≤ {}\n",
        s.bound,
        q_to_decimal(&s.bound, 10),
        s.hint,
        s.max_n
    );
    if !s.violations.is_empty() {
        let seeds: Vec<String> = s.violations.iter().map(u64::to_string).collect();
        out += &format!("violating seeds: {}\n", seeds.join(", "));
    }
    out
}
