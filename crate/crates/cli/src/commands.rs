use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use seczeta_core::closed_forms::{
    beta, denominator_profile, psi2_pell_family, psi_fixed_point, psi_gen1, psi_gen2, psi_semiperiod, ExactPsiValue,
};
use seczeta_core::diophantine::{hard_indices, pell_fundamental};
use seczeta_core::exact::QuadSurd;
use seczeta_core::modular::{fixed_point_matrix, sanov_factor, Mat2Z, ModularError};
use seczeta_core::numeric::{
    conjecture1_scan, cosecant_series, cotangent_zeta, liouville_constant, psi_numeric, tail_bound, BigReal,
    NumericError, TrigKind, TwoPath,
};
use seczeta_core::unimodular::{conj_poly, unit_circle_report};

use crate::args::{parse_list, parse_matrix, Command, FamilyArg, PointArgs};
use crate::CliError;

/// One output record: the machine form and its human rendering.
#[derive(Debug, Clone)]
pub struct Row {
    pub record: Value,
    pub human: String,
    pub failed: bool,
}

impl Row {
    fn ok<T: Serialize>(record: &T, human: String) -> Self {
        Row { record: serde_json::to_value(record).expect("records serialize"), human, failed: false }
    }

    fn failed(record: Value, human: String) -> Self {
        Row { record, human, failed: true }
    }
}

/// Rows plus whether the result is precision-unresolved.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub rows: Vec<Row>,
    pub unresolved: bool,
}

impl Outcome {
    fn rows(rows: Vec<Row>) -> Self {
        Outcome { rows, unresolved: false }
    }
}

pub fn execute(cmd: &Command, digits: u32) -> Result<Outcome, CliError> {
    match cmd {
        Command::Exact { k, family, j, n } => cmd_exact(*k, *family, *j, *n).map(|r| Outcome::rows(vec![r])),
        Command::Numeric { s, point, cotangent, tangent, cosecant } => {
            let kind = match (cotangent, tangent, cosecant) {
                (true, _, _) => TrigKind::Cot,
                (_, true, _) => TrigKind::Tan,
                (_, _, true) => TrigKind::Csc,
                _ => TrigKind::Sec,
            };
            cmd_numeric(*s, point, kind, digits)
        }
        Command::Scan { k, j, max_den } => cmd_scan(k, j, *max_den, digits),
        Command::Beta { k, profile } => cmd_beta(k, *profile),
        Command::Pell { j } => cmd_pell(j),
        Command::Factor { matrix } => cmd_factor(matrix).map(|r| Outcome::rows(vec![r])),
        Command::Unimodular { k } => cmd_unimodular(k, digits),
        Command::Audit { point, n, s } => cmd_audit(point, *n, *s, digits).map(|r| Outcome::rows(vec![r])),
    }
}

#[derive(Serialize)]
struct ExactRecord {
    k: u64,
    family: String,
    j: i64,
    n: Option<i64>,
    argument: String,
    coefficient: String,
}

pub fn exact_value(k: u64, family: FamilyArg, j: i64, n: Option<i64>) -> Result<ExactPsiValue, CliError> {
    let v = match family {
        FamilyArg::Gen1 => psi_gen1(k, j),
        FamilyArg::Gen2 => psi_gen2(k, j),
        FamilyArg::Semiperiod => psi_semiperiod(k, j),
        FamilyArg::Pell => {
            if k != 2 {
                return Err(CliError::Domain(format!("the pell family is only available for k = 2, got k = {k}")));
            }
            let n = n.ok_or_else(|| CliError::Domain("the pell family needs --n".into()))?;
            psi2_pell_family(j, n)
        }
        FamilyArg::Fixed => {
            let ju = u64::try_from(j).map_err(|_| CliError::Domain(format!("j = {j} must be positive")))?;
            psi_fixed_point(k, ju)
        }
    };
    v.map_err(|e| CliError::Domain(e.to_string()))
}

fn cmd_exact(k: u64, family: FamilyArg, j: i64, n: Option<i64>) -> Result<Row, CliError> {
    let v = exact_value(k, family, j, n)?;
    let rec = ExactRecord {
        k,
        family: v.family.to_string(),
        j,
        n,
        argument: v.argument.to_string(),
        coefficient: v.coefficient.to_string(),
    };
    let human = format!("{} × π^{} (argument {})", v.coefficient, k, v.argument);
    Ok(Row::ok(&rec, human))
}

#[derive(Serialize)]
struct NumericRecord {
    series: &'static str,
    s: f64,
    z: String,
    digits: u32,
    value: String,
    error_bound: String,
    resolved: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    direct_value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    path_residual: Option<String>,
}

/// Whether the radius is at most 10^{−digits}·max(1, |value|).
pub fn meets_target(v: &BigReal, digits: u32) -> bool {
    if !v.is_finite() {
        return false;
    }
    let scale = v.abs_upper().log2().max(0.0);
    v.rad().log2() <= scale - digits as f64 * std::f64::consts::LOG2_10
}

fn numeric_error(e: NumericError) -> CliError {
    match e {
        NumericError::Precision(m) => CliError::Unresolved(m),
        other => CliError::Domain(other.to_string()),
    }
}

fn cmd_numeric(s: f64, point: &PointArgs, kind: TrigKind, digits: u32) -> Result<Outcome, CliError> {
    let z = point.parse()?;
    let int_s = || -> Result<u32, CliError> {
        if s.fract() == 0.0 && (2.0..=1e6).contains(&s) {
            Ok(s as u32)
        } else {
            Err(CliError::Domain(format!("exponent {s} must be an integer ≥ 2 for this series")))
        }
    };
    let (series, value, two): (&str, BigReal, Option<TwoPath>) = match kind {
        TrigKind::Sec => ("sec", psi_numeric(s, &z, digits).map_err(numeric_error)?, None),
        TrigKind::Cot => ("cot", cotangent_zeta(int_s()?, &z, digits).map_err(numeric_error)?, None),
        TrigKind::Tan => {
            let t = seczeta_core::numeric::tangent_series(int_s()?, &z, digits).map_err(numeric_error)?;
            ("tan", t.identity.clone(), Some(t))
        }
        TrigKind::Csc => {
            let t = cosecant_series(int_s()?, &z, digits).map_err(numeric_error)?;
            ("csc", t.identity.clone(), Some(t))
        }
    };
    let resolved = meets_target(&value, digits);
    let text = value.mid_to_decimal(digits as usize);
    let bound = value.rad().to_sci_string();
    let rec = NumericRecord {
        series,
        s,
        z: z.to_string(),
        digits,
        value: text.clone(),
        error_bound: bound.clone(),
        resolved,
        direct_value: two.as_ref().map(|t| t.direct.to_decimal_string(20)),
        path_residual: two.as_ref().map(|t| t.residual().to_sci_string()),
    };
    let mut human = format!("{text} ± {bound}");
    if !resolved {
        human.push_str(" (unresolved)");
    }
    Ok(Outcome { rows: vec![Row::ok(&rec, human)], unresolved: !resolved })
}

fn to_u64_list(s: &str, even_only: bool, what: &str) -> Result<Vec<u64>, CliError> {
    parse_list(s, even_only)?
        .into_iter()
        .map(|v| u64::try_from(v).map_err(|_| CliError::Domain(format!("{what} = {v} must be non-negative"))))
        .collect()
}

fn cmd_scan(k: &str, j: &str, max_den: u64, digits: u32) -> Result<Outcome, CliError> {
    let ks: Vec<u32> = to_u64_list(k, true, "k")?.into_iter().map(|v| v as u32).collect();
    let js = to_u64_list(j, false, "j")?;
    let recs = conjecture1_scan(&ks, &js, digits, max_den);
    let rows = recs
        .iter()
        .map(|r| {
            let verdict = match (&r.recognized, &r.candidate, &r.error) {
                (_, _, Some(e)) => format!("error: {e}"),
                (Some(c), _, _) => format!("{c} (verified at {} digits)", r.digits + 20),
                (None, Some(c), _) => format!("candidate {c} failed re-verification"),
                _ => "not recognized".to_string(),
            };
            let human = format!("k={:<3} j={:<5} {}  {}", r.k, r.j, short(&r.value, 24), verdict);
            let mut row = Row::ok(r, human);
            row.failed = r.error.is_some();
            row
        })
        .collect();
    Ok(Outcome::rows(rows))
}

fn short(s: &str, n: usize) -> String {
    match s.split_once('e') {
        Some((m, e)) if m.len() > n => format!("{}…e{e}", &m[..n]),
        _ => s.to_string(),
    }
}

#[derive(Serialize)]
struct BetaRecord {
    k: u64,
    beta: String,
}

fn cmd_beta(k: &str, profile: bool) -> Result<Outcome, CliError> {
    let ks = to_u64_list(k, true, "k")?;
    let rows: Vec<Row> = ks
        .par_iter()
        .map(|&k| {
            let res = if profile {
                denominator_profile(k).map(|p| {
                    let anomalous: Vec<String> = p.anomalous.iter().map(|x| x.to_string()).collect();
                    let human = format!(
                        "k={:<3} denominator={:<12} anomalous={{{}}}  β={}",
                        k,
                        p.denominator,
                        anomalous.join(","),
                        p.beta
                    );
                    Row::ok(&p, human)
                })
            } else {
                beta(k).map(|b| Row::ok(&BetaRecord { k, beta: b.to_string() }, format!("β_{k} = {b}")))
            };
            res.unwrap_or_else(|e| error_row(json!({ "k": k }), e.to_string()))
        })
        .collect();
    Ok(Outcome::rows(rows))
}

fn error_row(mut key: Value, msg: String) -> Row {
    let human = format!("{key}: error: {msg}");
    if let Value::Object(m) = &mut key {
        m.insert("error".into(), Value::String(msg));
    }
    Row::failed(key, human)
}

#[derive(Serialize)]
struct PellRecord {
    j: u64,
    x: String,
    y: String,
    matrix: Option<String>,
    word: Option<String>,
    scan_log: Vec<String>,
    error: Option<String>,
}

fn cmd_pell(j: &str) -> Result<Outcome, CliError> {
    let js = to_u64_list(j, false, "j")?;
    let rows = js
        .par_iter()
        .map(|&j| match pell_fundamental(j) {
            Err(e) => error_row(json!({ "j": j }), e.to_string()),
            Ok((x, y)) => {
                let mut rec = PellRecord {
                    j,
                    x: x.to_string(),
                    y: y.to_string(),
                    matrix: None,
                    word: None,
                    scan_log: Vec::new(),
                    error: None,
                };
                match fixed_point_matrix(j) {
                    Ok(f) => {
                        rec.matrix = Some(f.matrix.to_string());
                        rec.word = Some(f.word.to_string());
                        rec.scan_log = f.scan_log;
                    }
                    Err(ModularError::NoFactorableSolution { log, .. }) => {
                        rec.error = Some("no factorable solution in the scan".into());
                        rec.scan_log = log;
                    }
                    Err(e) => rec.error = Some(e.to_string()),
                }
                let human = match (&rec.word, &rec.error) {
                    (Some(w), _) => format!("j={j:<4} (x, y) = ({x}, {y})  fixed point: {w}"),
                    (None, Some(e)) => format!("j={j:<4} (x, y) = ({x}, {y})  {e}"),
                    _ => unreachable!(),
                };
                Row::ok(&rec, human)
            }
        })
        .collect();
    Ok(Outcome::rows(rows))
}

#[derive(Serialize)]
struct FactorRecord {
    matrix: String,
    word: String,
}

fn cmd_factor(matrix: &str) -> Result<Row, CliError> {
    let [a, b, c, d] = parse_matrix(matrix)?;
    let m = Mat2Z::new::<BigInt>(a, b, c, d).map_err(|e| CliError::Domain(e.to_string()))?;
    let w = sanov_factor(&m).map_err(|e| CliError::Domain(e.to_string()))?;
    Ok(Row::ok(&FactorRecord { matrix: m.to_string(), word: w.to_string() }, w.to_string()))
}

#[derive(Serialize)]
struct UnimodularRecord {
    k: u64,
    degree: usize,
    polynomial: String,
    self_inversive: bool,
    max_deviation: f64,
    certified: bool,
    inversion_isolated: bool,
    max_residual: f64,
    status: &'static str,
}

fn cmd_unimodular(k: &str, digits: u32) -> Result<Outcome, CliError> {
    let ks = to_u64_list(k, true, "k")?;
    let rows = ks
        .par_iter()
        .map(|&k| {
            let res = conj_poly(k).and_then(|p| unit_circle_report(&p, digits).map(|r| (p, r)));
            match res {
                Err(e) => error_row(json!({ "k": k }), e.to_string()),
                Ok((p, r)) => {
                    let status = if r.certified && r.self_inversive { "numerically verified" } else { "not verified" };
                    let rec = UnimodularRecord {
                        k,
                        degree: r.degree,
                        polynomial: p.to_string(),
                        self_inversive: r.self_inversive,
                        max_deviation: r.max_deviation,
                        certified: r.certified,
                        inversion_isolated: r.inversion_isolated,
                        max_residual: r.max_residual,
                        status,
                    };
                    let human =
                        format!("k={k:<3} degree={:<3} max |1-|z||={:.3e}  {status}", r.degree, r.max_deviation);
                    Row::ok(&rec, human)
                }
            }
        })
        .collect();
    Ok(Outcome::rows(rows))
}

#[derive(Serialize)]
struct TailRow {
    log2_terms: u32,
    sec: String,
    tan: String,
    csc: String,
    cot: String,
}

#[derive(Serialize)]
struct AuditRecord {
    z: String,
    liouville_constant: f64,
    n: u64,
    s: f64,
    hard_index_count: usize,
    hard_indices: Vec<u64>,
    tail_bounds: Vec<TailRow>,
}

fn cmd_audit(point: &PointArgs, n: u64, s: f64, _digits: u32) -> Result<Row, CliError> {
    let z: QuadSurd = point.parse()?;
    if !(s > 1.0) {
        return Err(CliError::Domain(format!("exponent {s} must exceed 1")));
    }
    let l = liouville_constant(&z).map_err(numeric_error)?;
    if n > 1 << 24 {
        return Err(CliError::Domain(format!("n = {n} exceeds 2^24")));
    }
    let hard = hard_indices(&z, n);
    let tail_bounds = (8..=26)
        .step_by(2)
        .map(|m| TailRow {
            log2_terms: m,
            sec: tail_bound(TrigKind::Sec, l, s, m).to_sci_string(),
            tan: tail_bound(TrigKind::Tan, l, s, m).to_sci_string(),
            csc: tail_bound(TrigKind::Csc, l, s, m).to_sci_string(),
            cot: tail_bound(TrigKind::Cot, l, s, m).to_sci_string(),
        })
        .collect::<Vec<_>>();
    let mut human = format!("z = {z}  L = {l:.6}  hard indices ≤ {n}: {}\n", hard.len());
    let preview: Vec<String> = hard.iter().take(20).map(|h| h.to_string()).collect();
    human.push_str(&format!("  first: {}\n", preview.join(" ")));
    for t in &tail_bounds {
        human.push_str(&format!("  2^{:<2} terms: sec tail ≤ {}  cot tail ≤ {}\n", t.log2_terms, t.sec, t.cot));
    }
    let human = human.trim_end().to_string();
    let rec = AuditRecord {
        z: z.to_string(),
        liouville_constant: l,
        n,
        s,
        hard_index_count: hard.len(),
        hard_indices: hard,
        tail_bounds,
    };
    Ok(Row::ok(&rec, human))
}
