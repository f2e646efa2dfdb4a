use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use tsinorm_core::corpus::{small_grid, standard_grid};
use tsinorm_core::dualnorm::{dual_norm_bounds, verify_dual_certificate, DualCertificate, DualCertificateDoc, DualEngine};
use tsinorm_core::norming::build_norming_set;
use tsinorm_core::primal::{
    fj_norm, mixed_norm_with, verify_certificate, CertificateDoc, MixedNormOptions, PrimalCertificate,
};
use tsinorm_core::{Error as CoreError, FinVec, Interval, MixedSpaceSpec, Rational, SpaceConfig};

use crate::output::{csv_string, decimal_json, decimal_text, print_json, value_json, value_text};
use crate::suites::{self, Report, SuiteParams};
use crate::{resolve_space, CertKind, Cli, CliError, CliResult, Command, Format, GlobalOpts, NormKind, Suite, TableKind, TableNorm};

pub fn run(cli: &Cli) -> CliResult<u8> {
    let o = &cli.opts;
    match &cli.command {
        Command::Norm { kind, vector, certify, target_bits } => norm(o, *kind, vector, *certify, *target_bits),
        Command::Table { kind, from, to, norm } => table(o, *kind, *from, *to, *norm),
        Command::Check { suite, support, pairs, cap, grid } => check(o, *suite, *support, *pairs, *cap, grid.as_deref()),
        Command::NormingSet { window, output } => norming_set(o, *window, output.as_deref()),
        Command::Certify { kind, vector, check } => match check {
            Some(path) => certify_check(o, path),
            None => certify(o, *kind, vector.as_deref().unwrap_or("")),
        },
    }
}

fn parse_vector(s: &str) -> CliResult<FinVec> {
    Ok(s.parse::<FinVec>()?)
}

struct Evaluated {
    value: Interval,
    certificate: Option<Value>,
    precision: u32,
}

fn evaluate(o: &GlobalOpts, spec: &MixedSpaceSpec, kind: NormKind, x: &FinVec, target_bits: u32) -> CliResult<Evaluated> {
    let opts = MixedNormOptions { target_bits, precision_cap: o.precision_cap };
    Ok(match kind {
        NormKind::Fj => {
            let (v, cert) = fj_norm(x);
            Evaluated { value: Interval::point(v), certificate: Some(to_value(&cert.to_doc())), precision: 0 }
        }
        NormKind::Mixed => {
            let m = mixed_norm_with(spec, x, opts)?;
            Evaluated { value: m.value, certificate: Some(to_value(&m.certificate.to_doc())), precision: m.precision }
        }
        NormKind::Dual => {
            let d = DualEngine::new(spec, o.budget)?.dual_norm(x)?;
            Evaluated {
                value: Interval::point(d.value),
                certificate: Some(to_value(&d.certificate.to_doc())),
                precision: 0,
            }
        }
        NormKind::DualBounds => {
            let target = Rational::pow2(-(target_bits as i64));
            let mut precision = (target_bits + 8).min(o.precision_cap.max(1));
            loop {
                let v = dual_norm_bounds(spec, x, precision, o.precision_cap, o.budget)?;
                if v.width() <= target || spec.is_rational() {
                    break Evaluated { value: v, certificate: None, precision: if spec.is_rational() { 0 } else { precision } };
                }
                if precision >= o.precision_cap {
                    return Err(CoreError::PrecisionExhausted(format!(
                        "dual enclosure of width {} at {precision} bits",
                        v.width().to_decimal(6)
                    ))
                    .into());
                }
                precision = (precision * 2).min(o.precision_cap);
            }
        }
    })
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("documents serialize")
}

fn kind_name(kind: NormKind) -> &'static str {
    match kind {
        NormKind::Fj => "fj",
        NormKind::Mixed => "mixed",
        NormKind::Dual => "dual",
        NormKind::DualBounds => "dual-bounds",
    }
}

fn norm(o: &GlobalOpts, kind: NormKind, vector: &str, certify: bool, target_bits: u32) -> CliResult<u8> {
    let spec = if kind == NormKind::Fj { MixedSpaceSpec::tsirelson() } else { resolve_space(&o.space)? };
    let x = parse_vector(vector)?;
    if certify && o.format == Format::Csv {
        return Err(CliError::Usage("certificates are not available in csv format".into()));
    }
    let ev = evaluate(o, &spec, kind, &x, target_bits)?;
    match o.format {
        Format::Human => {
            println!("{}", value_text(&ev.value, ev.precision == 0));
            if certify {
                match &ev.certificate {
                    Some(c) => print_json(c),
                    None => println!("(no certificate: value is an enclosure)"),
                }
            }
        }
        Format::Json => {
            let mut doc = json!({
                "command": "norm",
                "kind": kind_name(kind),
                "space": spec.name,
                "vector": x.to_string(),
                "value": value_json(&ev.value, ev.precision == 0),
                "decimal": decimal_json(&ev.value, ev.precision == 0),
                "exact": ev.precision == 0,
                "precision": ev.precision,
            });
            if certify {
                doc["certificate"] = ev.certificate.unwrap_or(Value::Null);
            }
            print_json(&doc);
        }
        Format::Csv => {
            let row = vec![kind_name(kind).to_string(), spec.name.clone(), x.to_string(), value_text(&ev.value, ev.precision == 0), decimal_text(&ev.value, ev.precision == 0)];
            print!("{}", csv_string(&["kind", "space", "vector", "value", "decimal"], &[row]));
        }
    }
    Ok(0)
}

fn table(o: &GlobalOpts, kind: TableKind, from: usize, to: usize, which: TableNorm) -> CliResult<u8> {
    let spec = if which == TableNorm::Fj { MixedSpaceSpec::tsirelson() } else { resolve_space(&o.space)? };
    let norm_kind = match which {
        TableNorm::Fj => NormKind::Fj,
        TableNorm::Mixed => NormKind::Mixed,
        TableNorm::Dual if spec.is_rational() => NormKind::Dual,
        TableNorm::Dual => NormKind::DualBounds,
    };
    let mut rows = Vec::new();
    for n in from.max(1)..=to {
        let x = match kind {
            TableKind::SchreierBlockGrowth => FinVec::ones(1..=n),
            TableKind::BasisGrowth => FinVec::ones(n..=2 * n - 1),
        };
        let ev = evaluate(o, &spec, norm_kind, &x, 32)?;
        rows.push((n, ev.value, ev.precision == 0));
    }
    let name = match kind {
        TableKind::SchreierBlockGrowth => "schreier-block-growth",
        TableKind::BasisGrowth => "basis-growth",
    };
    match o.format {
        Format::Json => print_json(&json!({
            "command": "table",
            "kind": name,
            "space": spec.name,
            "norm": kind_name(norm_kind),
            "rows": rows.iter().map(|(n, v, exact)| json!({
                "n": n,
                "value": value_json(v, *exact),
                "decimal": decimal_json(v, *exact),
            })).collect::<Vec<_>>(),
        })),
        Format::Human | Format::Csv => {
            let rows: Vec<Vec<String>> =
                rows.iter().map(|(n, v, e)| vec![n.to_string(), value_text(v, *e), decimal_text(v, *e)]).collect();
            print!("{}", csv_string(&["n", "value", "decimal"], &rows));
        }
    }
    Ok(0)
}

fn parse_grid(s: &str) -> CliResult<Vec<Rational>> {
    let grid = s
        .split(',')
        .map(|t| t.trim().parse::<Rational>())
        .collect::<Result<Vec<_>, _>>()?;
    if grid.is_empty() || grid.iter().any(|g| g.is_zero()) {
        return Err(CliError::Usage("the grid needs nonzero entries".into()));
    }
    Ok(grid)
}

fn check(o: &GlobalOpts, suite: Suite, support: usize, pairs: usize, cap: usize, grid: Option<&str>) -> CliResult<u8> {
    let spec = resolve_space(&o.space)?;
    let grid = match grid {
        Some(g) => parse_grid(g)?,
        None if suite == Suite::Ell1Falsify => small_grid(),
        None => standard_grid(),
    };
    if support > 8 {
        return Err(CliError::Usage(format!("support bound {support} is too large; at most 8")));
    }
    let params = SuiteParams { spec: &spec, support, grid: &grid, pairs, seed: o.seed, cap, budget: o.budget };
    let report = match suite {
        Suite::Lemmas => suites::lemmas(&params)?,
        Suite::Duality => suites::duality(&params)?,
        Suite::ImplicitEq => suites::implicit_eq(&params)?,
        Suite::Ell1Falsify => suites::ell1_falsify(&params)?,
    };
    print_report(o.format, &report);
    Ok(if report.passed { 0 } else { 1 })
}

fn print_report(format: Format, r: &Report) {
    match format {
        Format::Json => {
            let mut doc = to_value(r);
            doc["command"] = json!("check");
            print_json(&doc);
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = r
                .properties
                .iter()
                .map(|p| {
                    vec![
                        r.suite.to_string(),
                        p.name.to_string(),
                        p.checked.to_string(),
                        p.violations.to_string(),
                        if p.violations == 0 { "pass" } else { "fail" }.to_string(),
                    ]
                })
                .collect();
            print!("{}", csv_string(&["suite", "property", "checked", "violations", "status"], &rows));
        }
        Format::Human => {
            println!("check {} on {} (supports in [1, {}], {} vectors)", r.suite, r.space, r.support, r.vectors);
            for p in &r.properties {
                let status = if p.violations == 0 { "PASS" } else { "FAIL" };
                println!("  {status}  {:<28} {:>9} checked  {}", p.name, p.checked, p.statement);
                if let Some(v) = &p.first_violation {
                    println!("        first violation: {v}");
                }
            }
            for (k, v) in &r.details {
                println!("  {k}: {v}");
            }
            println!("{}", if r.passed { "passed" } else { "FAILED" });
        }
    }
}

fn norming_set(o: &GlobalOpts, window: usize, output: Option<&Path>) -> CliResult<u8> {
    let spec = resolve_space(&o.space)?;
    let set = build_norming_set(&spec, window, o.budget)?;
    let text = set.export();
    let summary = json!({
        "command": "norming-set",
        "space": spec.name,
        "window": window,
        "representatives": set.representatives().len(),
        "signed": set.signed_len().to_string(),
        "generation": set.generation,
        "stabilized": set.stabilized,
        "output": output.map(|p| p.display().to_string()),
    });
    let line = format!(
        "{} functionals ({} nonnegative representatives), stabilized at generation {}",
        set.signed_len(),
        set.representatives().len(),
        set.generation
    );
    match output {
        Some(path) => {
            std::fs::write(path, text)?;
            match o.format {
                Format::Json => print_json(&summary),
                Format::Csv => {
                    let row = vec![
                        spec.name.clone(),
                        window.to_string(),
                        set.signed_len().to_string(),
                        set.representatives().len().to_string(),
                        set.generation.to_string(),
                    ];
                    print!("{}", csv_string(&["space", "window", "signed", "representatives", "generation"], &[row]));
                }
                Format::Human => println!("{line}"),
            }
        }
        None => {
            print!("{text}");
            eprintln!("{line}");
        }
    }
    Ok(0)
}

/// File format of `tsinorm certify`.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum CertificateFile {
    Primal {
        space: SpaceConfig,
        /// θ precision in bits; 0 for rational spaces.
        #[serde(default)]
        precision: u32,
        certificate: CertificateDoc,
    },
    Dual { space: SpaceConfig, certificate: DualCertificateDoc },
}

fn certify(o: &GlobalOpts, kind: CertKind, vector: &str) -> CliResult<u8> {
    let spec = resolve_space(&o.space)?;
    let x = parse_vector(vector)?;
    let space = SpaceConfig::from_spec(&spec);
    let file = match kind {
        CertKind::Primal => {
            let m = mixed_norm_with(&spec, &x, MixedNormOptions { precision_cap: o.precision_cap, ..Default::default() })?;
            CertificateFile::Primal { space, precision: m.precision, certificate: m.certificate.to_doc() }
        }
        CertKind::Dual => {
            let d = DualEngine::new(&spec, o.budget)?.dual_norm(&x)?;
            CertificateFile::Dual { space, certificate: d.certificate.to_doc() }
        }
    };
    print_json(&to_value(&file));
    Ok(0)
}

fn certify_check(o: &GlobalOpts, path: &Path) -> CliResult<u8> {
    let text = std::fs::read_to_string(path)?;
    let file: CertificateFile =
        serde_json::from_str(&text).map_err(|e| CoreError::Parse(format!("certificate file: {e}")))?;
    let exact = match &file {
        CertificateFile::Primal { precision, .. } => *precision == 0,
        CertificateFile::Dual { .. } => true,
    };
    let (kind, spec, vector, result) = match &file {
        CertificateFile::Primal { space, precision, certificate } => {
            let spec = space.to_spec()?;
            let cert = PrimalCertificate::from_doc(certificate);
            let r = verify_certificate(&spec, &cert, *precision).map(|_| cert.value.clone());
            ("primal", spec, cert.vector.clone(), r)
        }
        CertificateFile::Dual { space, certificate } => {
            let spec = space.to_spec()?;
            let r = DualCertificate::from_doc(certificate)
                .and_then(|c| verify_dual_certificate(&spec, &c).map(|_| Interval::point(c.value.clone())));
            ("dual", spec, certificate.vector.clone(), r)
        }
    };
    let (valid, value, message) = match result {
        Ok(v) => (true, Some(v), None),
        Err(e @ CoreError::Inconsistent(_)) => (false, None, Some(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    match o.format {
        Format::Json => print_json(&json!({
            "command": "certify",
            "kind": kind,
            "space": spec.name,
            "vector": vector.to_string(),
            "valid": valid,
            "value": value.as_ref().map(|v| value_json(v, exact)),
            "message": message,
        })),
        Format::Csv => {
            let row = vec![
                kind.to_string(),
                vector.to_string(),
                valid.to_string(),
                value.as_ref().map(|v| value_text(v, exact)).unwrap_or_default(),
            ];
            print!("{}", csv_string(&["kind", "vector", "valid", "value"], &[row]));
        }
        Format::Human => match (&value, &message) {
            (Some(v), _) => println!("valid {kind} certificate for ({vector}): {}", value_text(v, exact)),
            (_, Some(m)) => println!("INVALID {kind} certificate: {m}"),
            _ => unreachable!(),
        },
    }
    Ok(if valid { 0 } else { 1 })
}
