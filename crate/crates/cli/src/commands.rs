use std::fmt::Write as _;

use anyhow::Result;
use doldlab::chains::dold_chain_complex;
use doldlab::closedform::{betti_torsion_summary, homology_closed_all, orientable, summary_from_homology, BettiSummary};
use doldlab::cohomring::{emit, presentation, verify_presentation_with, PresentationReport};
use doldlab::homalg::{cohomology_from_homology, homology_all, AbelianGroupInvariants};
use doldlab::ktheory::{fujii_table, k_summary, verify_k_flag_relations, verify_k_identities, FujiiEntry, KIdentityReport};
use doldlab::sweep::{run_sweep, SweepConfig, SweepReport};
use serde_json::{json, Value};

use crate::args::{Case, Format};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Rendered report plus whether every requested check passed.
pub struct Report {
    pub body: String,
    pub passed: bool,
    pub failures: Vec<String>,
}

fn to_json(mut v: Value) -> String {
    if let Value::Object(map) = &mut v {
        map.insert("version".into(), json!(VERSION));
    }
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn latex_table(columns: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = format!("\\begin{{tabular}}{{{}}}\n", "c".repeat(columns.len()));
    let _ = writeln!(s, "{} \\\\ \\hline", columns.join(" & "));
    for r in rows {
        let _ = writeln!(s, "{} \\\\", r.join(" & "));
    }
    s.push_str("\\end{tabular}\n");
    s
}

fn group_latex(g: &AbelianGroupInvariants) -> String {
    let mut terms = Vec::new();
    match g.rank {
        0 => {}
        1 => terms.push("\\mathbb{Z}".to_string()),
        r => terms.push(format!("\\mathbb{{Z}}^{{{r}}}")),
    }
    terms.extend(g.torsion.iter().map(|d| format!("\\mathbb{{Z}}_{{{d}}}")));
    if terms.is_empty() {
        "$0$".into()
    } else {
        format!("${}$", terms.join(" \\oplus "))
    }
}

fn oracle_homology(c: &Case) -> Result<Vec<AbelianGroupInvariants>> {
    Ok(homology_all(&dold_chain_complex(c.m, &c.nu)?))
}

pub fn betti(c: &Case) -> Result<Report> {
    let s = betti_torsion_summary(c.m, &c.nu)?;
    let oracle: Option<BettiSummary> = if c.verify { Some(summary_from_homology(&oracle_homology(c)?)) } else { None };
    let agree = oracle.map(|o| o == s);
    let body = match c.output.format {
        Format::Json => {
            let mut v = json!({ "m": c.m, "nu": c.nu.parts(), "b_e": s.b_e, "b_o": s.b_o, "bp_e": s.bp_e, "bp_o": s.bp_o });
            if let Some(a) = agree {
                v["verified"] = json!(a);
            }
            to_json(v)
        }
        Format::Text => {
            let mut t = format!(
                "P({}, {}): b_e = {}, b_o = {}, b'_e = {}, b'_o = {}\n",
                c.m, c.nu, s.b_e, s.b_o, s.bp_e, s.bp_o
            );
            match (agree, oracle) {
                (Some(true), _) => t.push_str("oracle: agree\n"),
                (Some(false), Some(o)) => {
                    let _ = writeln!(t, "oracle: DISAGREE ({}, {}, {}, {})", o.b_e, o.b_o, o.bp_e, o.bp_o);
                }
                _ => {}
            }
            t
        }
        Format::Latex => {
            let mut t = latex_table(
                &["$m$", "$\\nu$", "$b_e$", "$b_o$", "$b'_e$", "$b'_o$"],
                &[vec![
                    c.m.to_string(),
                    format!("${}$", c.nu),
                    s.b_e.to_string(),
                    s.b_o.to_string(),
                    s.bp_e.to_string(),
                    s.bp_o.to_string(),
                ]],
            );
            if let Some(a) = agree {
                let _ = writeln!(t, "% oracle: {}", if a { "agree" } else { "DISAGREE" });
            }
            t
        }
    };
    let failures = if agree == Some(false) { vec![format!("P({}, {}): oracle disagrees", c.m, c.nu)] } else { vec![] };
    Ok(Report { body, passed: failures.is_empty(), failures })
}

pub fn homology(c: &Case) -> Result<Report> {
    let h = homology_closed_all(c.m, &c.nu)?;
    let mut failures = Vec::new();
    if c.verify {
        let oracle = oracle_homology(c)?;
        for (q, (a, b)) in h.iter().zip(&oracle).enumerate() {
            if a != b {
                failures.push(format!("H_{q}: closed form {a}, oracle {b}"));
            }
        }
    }
    let co: Vec<AbelianGroupInvariants> = (0..h.len()).map(|q| cohomology_from_homology(&h, q)).collect();
    let orient = orientable(c.m, &c.nu)?;
    let body = match c.output.format {
        Format::Json => {
            let degrees: Vec<Value> = h
                .iter()
                .zip(&co)
                .enumerate()
                .map(|(q, (a, b))| json!({ "degree": q, "homology": a, "cohomology": b }))
                .collect();
            let mut v = json!({ "m": c.m, "nu": c.nu.parts(), "orientable": orient, "degrees": degrees });
            if c.verify {
                v["verified"] = json!(failures.is_empty());
            }
            to_json(v)
        }
        Format::Text => {
            let mut t = format!("H_*(P({}, {}); Z)\n", c.m, c.nu);
            let width = h.iter().map(|g| g.to_string().chars().count()).max().unwrap_or(1).max(3);
            let _ = writeln!(t, "{:>3}  {:<width$}  H^q", "q", "H_q");
            for (q, (a, b)) in h.iter().zip(&co).enumerate() {
                let a = a.to_string();
                let pad = width - a.chars().count();
                let _ = writeln!(t, "{q:>3}  {a}{}  {b}", " ".repeat(pad));
            }
            let _ = writeln!(t, "orientable: {}", if orient { "yes" } else { "no" });
            if c.verify {
                let _ = writeln!(t, "oracle: {}", if failures.is_empty() { "agree" } else { "DISAGREE" });
            }
            t
        }
        Format::Latex => {
            let rows: Vec<Vec<String>> = h
                .iter()
                .zip(&co)
                .enumerate()
                .map(|(q, (a, b))| vec![q.to_string(), group_latex(a), group_latex(b)])
                .collect();
            latex_table(&["$q$", "$H_q$", "$H^q$"], &rows)
        }
    };
    Ok(Report { body, passed: failures.is_empty(), failures })
}

pub fn presentation_cmd(c: &Case) -> Result<Report> {
    let p = presentation(c.m, &c.nu)?;
    let report: Option<PresentationReport> =
        if c.verify { Some(verify_presentation_with(c.m, &c.nu, c.nu.n() <= 4)?) } else { None };
    let failures: Vec<String> = match &report {
        Some(r) if !r.passed => vec![format!(
            "P({}, {}): relation {:?}, degree {:?}",
            c.m, c.nu, r.first_nonvanishing_relation, r.first_failing_degree
        )],
        _ => vec![],
    };
    let body = match c.output.format {
        Format::Json => {
            let mut v = serde_json::to_value(emit::to_doc(&p))?;
            if let Some(r) = &report {
                v["verification"] = serde_json::to_value(r)?;
            }
            to_json(v)
        }
        Format::Text => {
            let mut t = emit::to_text(&p);
            if let Some(r) = &report {
                let _ = writeln!(
                    t,
                    "\nverification: {} (subring dimensions {:?})",
                    if r.passed { "pass" } else { "FAIL" },
                    r.subring_dimensions
                );
            }
            t
        }
        Format::Latex => emit::to_latex(&p),
    };
    Ok(Report { body, passed: failures.is_empty(), failures })
}

fn fujii_for(c: &Case) -> Result<Option<FujiiEntry>> {
    let parts = c.nu.parts();
    Ok(if parts.len() == 2 && parts[0] == 1 { Some(fujii_table(c.m, parts[1])?) } else { None })
}

pub fn ktheory(c: &Case) -> Result<Report> {
    let k = k_summary(c.m, &c.nu)?;
    let fujii = fujii_for(c)?;
    let identities: Option<KIdentityReport> =
        if c.m.is_multiple_of(2) { Some(verify_k_identities(c.m, &c.nu)?) } else { None };
    let flag = verify_k_flag_relations(&c.nu)?;
    let mut failures = Vec::new();
    let fujii_ok = fujii.map(|f| {
        (f.b_e, f.b_o) == (k.k0_rank, k.k1_rank)
            && f.order_a0 >= 1 << k.guaranteed_summand_exponent
            && (k.k0_torsion_exponent_bound >= 64 || f.order_a0 <= 1 << k.k0_torsion_exponent_bound)
            && (k.k1_torsion_exponent_bound >= 64 || f.order_a1 <= 1 << k.k1_torsion_exponent_bound)
    });
    if fujii_ok == Some(false) {
        failures.push("classical table disagrees".to_string());
    }
    if let Some(r) = identities.as_ref().filter(|r| !r.passed) {
        failures.push(r.first_failure.clone().unwrap_or_else(|| "identity check failed".into()));
    }
    if !flag.passed {
        failures.push(format!("ch(h_{:?}) differs from C(n, p)", flag.first_failing_p));
    }
    let body = match c.output.format {
        Format::Json => {
            let mut v = serde_json::to_value(&k)?;
            v["k0_torsion_determined"] = json!(k.k0_torsion_determined());
            if let Some(f) = fujii {
                v["classical"] = json!({ "entry": f, "agree": fujii_ok });
            }
            v["identities"] = serde_json::to_value(&identities)?;
            v["flag_relations"] = serde_json::to_value(&flag)?;
            to_json(v)
        }
        Format::Text | Format::Latex => {
            let mut t = format!("K^*(P({}, {}))\n", c.m, c.nu);
            let _ = writeln!(t, "K^0 rank {}, K^1 rank {}", k.k0_rank, k.k1_rank);
            if k.k0_torsion_determined() {
                let _ = writeln!(t, "A_0 = Z_{} exactly", 1u128 << k.guaranteed_summand_exponent.min(127));
            } else {
                let _ = writeln!(
                    t,
                    "A_0: Z_{} summand, order between 2^{} and 2^{}",
                    1u128 << k.guaranteed_summand_exponent.min(127),
                    k.guaranteed_summand_exponent,
                    k.k0_torsion_exponent_bound
                );
            }
            let _ = writeln!(t, "A_1: order at most 2^{}", k.k1_torsion_exponent_bound);
            if let Some(f) = fujii {
                let _ = writeln!(
                    t,
                    "classical table: b_e = {}, o(A_0) = {}, b_o = {}, o(A_1) = {} ({})",
                    f.b_e,
                    f.order_a0,
                    f.b_o,
                    f.order_a1,
                    if fujii_ok == Some(true) { "agree" } else { "DISAGREE" }
                );
            }
            match &identities {
                Some(r) => {
                    let _ = writeln!(
                        t,
                        "identities: {} ({} flag classes, rank Fix = {}, b_e = {})",
                        if r.passed { "pass" } else { "FAIL" },
                        r.omegas_tested,
                        r.fix_rank,
                        r.b_e
                    );
                }
                None => t.push_str("identities: not applicable for odd m\n"),
            }
            let _ = writeln!(t, "flag relations: {}", if flag.passed { "pass" } else { "FAIL" });
            t
        }
    };
    Ok(Report { body, passed: failures.is_empty(), failures })
}

pub fn verify(config: &SweepConfig, format: Format) -> Result<Report> {
    let report: SweepReport = run_sweep(config)?;
    let failures: Vec<String> = report
        .failures()
        .map(|c| format!("{} m={} nu={}: {}", c.suite, c.m.map_or("-".into(), |m| m.to_string()), c.nu, c.detail))
        .collect();
    let body = match format {
        Format::Json => to_json(serde_json::to_value(&report)?),
        Format::Text => {
            let mut t = String::new();
            for c in &report.cases {
                let m = c.m.map_or("-".to_string(), |m| m.to_string());
                let _ = writeln!(
                    t,
                    "{} {:<13} m={:<2} nu={:<12} {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.suite,
                    m,
                    c.nu.to_string(),
                    c.detail
                );
            }
            if !report.torsion_discrepancies.is_empty() {
                let _ = writeln!(
                    t,
                    "\nodd-degree torsion: the count floor((m-1)/2) l_e differs from the cellular count in {} cases, e.g.",
                    report.torsion_discrepancies.len()
                );
                for (m, nu, confirmed, alt) in report.torsion_discrepancies.iter().take(5) {
                    let _ = writeln!(t, "  m={m} nu={nu}: cellular {confirmed}, alternative {alt}");
                }
            }
            let _ = writeln!(t, "\n{} cases, {} failed", report.cases.len(), failures.len());
            t
        }
        Format::Latex => {
            let rows: Vec<Vec<String>> = report
                .cases
                .iter()
                .map(|c| {
                    vec![
                        c.suite.to_string(),
                        c.m.map_or("--".into(), |m| m.to_string()),
                        format!("${}$", c.nu),
                        if c.passed { "pass" } else { "fail" }.into(),
                    ]
                })
                .collect();
            latex_table(&["suite", "$m$", "$\\nu$", "result"], &rows)
        }
    };
    Ok(Report { body, passed: failures.is_empty(), failures })
}
