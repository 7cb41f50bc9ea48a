//! Report assembly for each subcommand.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::Result;
use ar_braid::irred::{block_criterion_check, invariant_subspace_search, Verdict};
use ar_braid::linalg::{frobenius_distance, CMatrix, DEFAULT_RANK_TOL};
use ar_braid::proofchain::{
    root_inventory, route_agreement_with, split_identities, theorem_verdict, Equation,
    ProofVerdict, DENOMINATOR_TOL, EIGEN_RELATION_TOL, NONVANISHING_TOL, ROUTE_TOL,
};
use ar_braid::rep::{
    build_general, entry_symbols, images, pure_braid_images, random_valid_params, verify_relations,
    ARSpecialization, BetaChoice, RepError, CLOSED_FORM_TOL, RELATION_TOL,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

/// A user input that fails validation; exits with code 2.
#[derive(Debug)]
pub struct Invalid(pub String);

impl std::fmt::Display for Invalid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Invalid {}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    Invalid(msg.into()).into()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Ok,
    Failed(String),
    Inconclusive(String),
    Discrepancy(String),
}

impl Status {
    pub fn code(&self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Failed(_) => 1,
            Status::Inconclusive(_) => 3,
            Status::Discrepancy(_) => 4,
        }
    }

    pub fn note(&self) -> Option<String> {
        match self {
            Status::Ok => None,
            Status::Failed(m) => Some(format!("failed: {m}")),
            Status::Inconclusive(m) => Some(format!("inconclusive: {m}")),
            Status::Discrepancy(m) => Some(format!("discrepancy: {m}")),
        }
    }

    fn as_str(&self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Failed(_) => "failed",
            Status::Inconclusive(_) => "inconclusive",
            Status::Discrepancy(_) => "discrepancy",
        }
    }
}

/// One CSV line: a single check at a single parameter value.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub c: Option<f64>,
    pub beta: Option<&'static str>,
    pub check: String,
    pub value: String,
    pub passed: Option<bool>,
}

impl Row {
    fn new(
        c: Option<f64>,
        beta: Option<BetaChoice>,
        check: impl Into<String>,
        value: impl ToString,
    ) -> Self {
        Self {
            c,
            beta: beta.map(BetaChoice::as_str),
            check: check.into(),
            value: value.to_string(),
            passed: None,
        }
    }

    fn passed(mut self, ok: bool) -> Self {
        self.passed = Some(ok);
        self
    }
}

pub struct Output {
    pub json: Value,
    pub rows: Vec<Row>,
    pub text: String,
    pub status: Status,
}

pub struct PointSpec {
    pub c: Option<f64>,
    pub sweep: Option<String>,
    pub allow_degenerate: bool,
}

pub struct Settings {
    pub beta: BetaChoice,
    pub tol: Vec<String>,
}

fn tolerances(defaults: &[(&str, f64)], overrides: &[String]) -> Result<BTreeMap<String, f64>> {
    let mut map: BTreeMap<String, f64> =
        defaults.iter().map(|&(k, v)| (k.to_string(), v)).collect();
    for item in overrides {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| invalid(format!("tolerance override {item:?} is not KEY=VALUE")))?;
        let key = key.trim();
        if !map.contains_key(key) {
            let known: Vec<&str> = defaults.iter().map(|&(k, _)| k).collect();
            return Err(invalid(format!(
                "unknown tolerance {key:?} for this command (known: {})",
                if known.is_empty() {
                    "none".to_string()
                } else {
                    known.join(", ")
                }
            )));
        }
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| invalid(format!("tolerance {key} = {value:?} is not a number")))?;
        if !(v.is_finite() && v > 0.0) {
            return Err(invalid(format!(
                "tolerance {key} must be positive, got {v}"
            )));
        }
        map.insert(key.to_string(), v);
    }
    Ok(map)
}

fn round12(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Grid values `start, start + step, …` up to and including `stop`.
pub fn parse_sweep(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(invalid(format!("sweep {text:?} is not start:stop:step")));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| invalid(format!("sweep component {p:?} is not a number")))
        })
        .collect::<Result<_>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if !nums.iter().all(|x| x.is_finite()) || start >= stop || step <= 0.0 {
        return Err(invalid(format!(
            "sweep {text:?} needs finite start < stop and step > 0"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return Err(invalid(format!(
            "sweep {text:?} has {count} points (limit 100000)"
        )));
    }
    Ok((0..count)
        .map(|k| round12(start + k as f64 * step))
        .collect())
}

fn rep_invalid(e: RepError) -> anyhow::Error {
    match e {
        RepError::Domain(_) | RepError::Constraint { .. } => invalid(e.to_string()),
        other => other.into(),
    }
}

/// Validated parameter points plus the values skipped as degenerate.
fn resolve_points(
    points: &PointSpec,
    beta: BetaChoice,
) -> Result<(Vec<ARSpecialization>, Vec<f64>)> {
    let make = |c: f64| {
        if points.allow_degenerate {
            ARSpecialization::with_degenerate(c, beta)
        } else {
            ARSpecialization::new(c, beta)
        }
        .map_err(rep_invalid)
    };
    match (&points.c, &points.sweep) {
        (Some(c), None) => Ok((vec![make(*c)?], Vec::new())),
        (None, Some(sweep)) => {
            let mut specs = Vec::new();
            let mut skipped = Vec::new();
            for c in parse_sweep(sweep)? {
                if c == 0.0 && !points.allow_degenerate {
                    eprintln!(
                        "notice: skipping degenerate c = 0 (pass --allow-degenerate to include it)"
                    );
                    skipped.push(c);
                    continue;
                }
                specs.push(make(c)?);
            }
            Ok((specs, skipped))
        }
        _ => Err(invalid("exactly one of --c or --sweep is required")),
    }
}

fn matrix_rows(rows: &mut Vec<Row>, c: f64, beta: BetaChoice, name: &str, m: &CMatrix) {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let z = m[(i, j)];
            rows.push(Row::new(
                Some(c),
                Some(beta),
                format!("{name}[{i}][{j}].re"),
                z.re,
            ));
            rows.push(Row::new(
                Some(c),
                Some(beta),
                format!("{name}[{i}][{j}].im"),
                z.im,
            ));
        }
    }
}

fn fmt_matrix(out: &mut String, name: &str, m: &CMatrix) {
    let _ = writeln!(out, "{name}:");
    for i in 0..m.rows() {
        let cells: Vec<String> = m
            .row(i)
            .iter()
            .map(|z| format!("{:>10.6}{:+.6}i", z.re, z.im))
            .collect();
        let _ = writeln!(out, "  [{}]", cells.join(", "));
    }
}

pub fn matrices(points: &PointSpec, settings: &Settings) -> Result<Output> {
    if points.sweep.is_some() {
        return Err(invalid("matrices takes a single --c, not --sweep"));
    }
    let tols = tolerances(&[], &settings.tol)?;
    let mut tols_echo = tols.clone();
    tols_echo.insert("closed_form".into(), CLOSED_FORM_TOL);
    let (specs, _) = resolve_points(points, settings.beta)?;
    let spec = specs[0];
    let im = images(&spec)?;
    let sym = entry_symbols(&spec);
    let be = spec.beta();
    let json = json!({
        "command": "matrices",
        "c": spec.c(),
        "beta": spec.beta_choice(),
        "beta_value": [be.re, be.im],
        "b": spec.b(),
        "tolerances": tols_echo,
        "matrices": im,
        "entry_symbols": sym,
    });
    let named = [
        ("U", &im.u),
        ("V", &im.v),
        ("sigma1", &im.sigma1),
        ("sigma2", &im.sigma2),
        ("A12", &im.a12),
        ("A23", &im.a23),
        ("A13", &im.a13),
    ];
    let mut rows = Vec::new();
    let mut text = format!("c = {}, beta = {}\n", spec.c(), spec.beta_choice().as_str());
    for (name, m) in named {
        matrix_rows(&mut rows, spec.c(), spec.beta_choice(), name, m);
        fmt_matrix(&mut text, name, m);
    }
    for (name, z) in [
        ("I", sym.i),
        ("Jent", sym.jent),
        ("P", sym.p),
        ("M", sym.m),
        ("Q", sym.q),
        ("R", sym.r),
    ] {
        rows.push(Row::new(
            Some(spec.c()),
            Some(spec.beta_choice()),
            format!("{name}.re"),
            z.re,
        ));
        rows.push(Row::new(
            Some(spec.c()),
            Some(spec.beta_choice()),
            format!("{name}.im"),
            z.im,
        ));
        let _ = writeln!(text, "{name} = {:.12}{:+.12}i", z.re, z.im);
    }
    Ok(Output {
        json,
        rows,
        text,
        status: Status::Ok,
    })
}

pub fn check(points: &PointSpec, settings: &Settings) -> Result<Output> {
    let tols = tolerances(&[("relation", RELATION_TOL)], &settings.tol)?;
    let tol = tols["relation"];
    let (specs, skipped) = resolve_points(points, settings.beta)?;
    let reports = specs
        .par_iter()
        .map(|s| {
            let mut r = verify_relations(s)?;
            r.tolerance = tol;
            r.passed = r.residuals.values().all(|&x| x <= tol);
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    let failed: Vec<f64> = reports.iter().filter(|r| !r.passed).map(|r| r.c).collect();
    let mut rows = Vec::new();
    let mut text = String::new();
    for r in &reports {
        for (k, &v) in &r.residuals {
            rows.push(Row::new(Some(r.c), Some(r.beta), k.clone(), v).passed(v <= tol));
        }
        let _ = writeln!(
            text,
            "c = {:<8} max residual {:.3e}  {}",
            r.c,
            r.max_residual(),
            if r.passed { "PASS" } else { "FAIL" }
        );
    }
    let status = if failed.is_empty() {
        Status::Ok
    } else {
        Status::Failed(format!("relations exceed tolerance at c = {failed:?}"))
    };
    let json = json!({
        "command": "check",
        "beta": settings.beta,
        "tolerances": tols,
        "skipped": skipped,
        "reports": reports,
        "passed": failed.is_empty(),
    });
    Ok(Output {
        json,
        rows,
        text,
        status,
    })
}

pub fn irreducible(points: &PointSpec, settings: &Settings) -> Result<Output> {
    let tols = tolerances(&[("rank", DEFAULT_RANK_TOL)], &settings.tol)?;
    let tol = tols["rank"];
    let (specs, skipped) = resolve_points(points, settings.beta)?;
    let results = specs
        .par_iter()
        .map(|s| {
            let (a12, a23, _) = pure_braid_images(s)?;
            let report = invariant_subspace_search(&[a12, a23], tol)?;
            let expected = if s.is_degenerate() {
                Verdict::Reducible
            } else {
                Verdict::Irreducible
            };
            Ok((*s, expected, report))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut mismatched = Vec::new();
    let mut inconclusive = Vec::new();
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut items = Vec::new();
    for (s, expected, report) in &results {
        *counts.entry(report.verdict.as_str()).or_default() += 1;
        let matches = report.verdict == *expected;
        match report.verdict {
            Verdict::Inconclusive => inconclusive.push(s.c()),
            _ if !matches => mismatched.push(s.c()),
            _ => {}
        }
        let (c, b) = (Some(s.c()), Some(s.beta_choice()));
        rows.push(Row::new(c, b, "verdict", report.verdict.as_str()).passed(matches));
        rows.push(Row::new(c, b, "commutant_dim", report.commutant_dim));
        for (k, v) in &report.residuals {
            rows.push(Row::new(c, b, k.clone(), v));
        }
        let _ = writeln!(
            text,
            "c = {:<8} {:<13} commutant_dim {}{}",
            s.c(),
            report.verdict.as_str(),
            report.commutant_dim,
            report
                .witness
                .as_ref()
                .map(|w| format!(", witness of dimension {}", w.dimension))
                .unwrap_or_default()
        );
        items.push(json!({
            "c": s.c(),
            "expected": expected,
            "matches": matches,
            "report": report,
        }));
    }
    let status = if !mismatched.is_empty() {
        Status::Failed(format!("unexpected verdict at c = {mismatched:?}"))
    } else if !inconclusive.is_empty() {
        Status::Inconclusive(format!(
            "near-threshold rank decision at c = {inconclusive:?}"
        ))
    } else {
        Status::Ok
    };
    let json = json!({
        "command": "irreducible",
        "beta": settings.beta,
        "tolerances": tols,
        "allow_degenerate": points.allow_degenerate,
        "skipped": skipped,
        "points": items,
        "summary": counts,
        "status": status.as_str(),
    });
    Ok(Output {
        json,
        rows,
        text,
        status,
    })
}

fn check_precision(precision: f64) -> Result<()> {
    if precision.is_finite() && precision > 0.0 && precision < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!(
            "precision must lie in (0, 1), got {precision}"
        )))
    }
}

pub fn verify_proof(
    samples: usize,
    seed: u64,
    precision: f64,
    settings: &Settings,
) -> Result<Output> {
    check_precision(precision)?;
    let mut tols = tolerances(&[("route", ROUTE_TOL)], &settings.tol)?;
    let route_tol = tols["route"];
    let identities = split_identities();
    let proof = theorem_verdict(precision)?;
    let route = route_agreement_with(samples, seed, route_tol)?;
    tols.insert("eigen_relation".into(), EIGEN_RELATION_TOL);
    tols.insert("nonvanishing".into(), NONVANISHING_TOL);
    tols.insert("denominator".into(), DENOMINATOR_TOL);

    let status = if proof.verdict == ProofVerdict::Failed {
        Status::Discrepancy(
            "root sets or split identities do not establish the contradiction".into(),
        )
    } else if let Some(d) = &route.first_discrepancy {
        Status::Discrepancy(format!(
            "first disagreeing formula {} (c = {}, beta = {}, relative error {:.3e})",
            d.formula,
            d.c,
            d.beta.as_str(),
            d.relative_error
        ))
    } else if !route.eigen_relation_nonvanishing {
        Status::Discrepancy("eigenvalue relation residual vanishes at a sampled point".into())
    } else {
        Status::Ok
    };

    let mut rows = Vec::new();
    for (k, &v) in &proof.identity_checks {
        rows.push(Row::new(None, None, format!("identity.{k}"), v).passed(v));
    }
    for (label, roots) in [
        ("imaginary", &proof.imaginary_accepted),
        ("real", &proof.real_accepted),
    ] {
        for (i, r) in roots.iter().enumerate() {
            rows.push(Row::new(
                None,
                None,
                format!("{label}_accepted[{i}]"),
                r.refined,
            ));
        }
    }
    rows.push(Row::new(None, None, "min_gap", proof.min_gap));
    for (k, &v) in &route.max_relative_error {
        let ok = route.failures.get(k).copied().unwrap_or(0) == 0;
        rows.push(Row::new(None, None, format!("route.{k}"), v).passed(ok));
    }
    if let Some(m) = route.min_abs_eigen_relation_residual {
        rows.push(
            Row::new(None, None, "min_abs_eigen_relation_residual", m)
                .passed(m > EIGEN_RELATION_TOL),
        );
    }
    rows.push(
        Row::new(None, None, "verdict", proof.verdict.as_str())
            .passed(proof.verdict == ProofVerdict::ContradictionEstablished),
    );

    let mut text = String::new();
    for (k, v) in &proof.identity_checks {
        let _ = writeln!(text, "identity {k}: {}", if *v { "pass" } else { "FAIL" });
    }
    let list = |rs: &[ar_braid::poly::RootInterval]| {
        rs.iter()
            .map(|r| format!("{:.12}", r.refined))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let _ = writeln!(
        text,
        "imaginary-part accepted roots: {}",
        list(&proof.imaginary_accepted)
    );
    let _ = writeln!(
        text,
        "real-part accepted roots: {}",
        list(&proof.real_accepted)
    );
    let _ = writeln!(text, "min gap: {:.12}", proof.min_gap);
    let _ = writeln!(text, "verdict: {}", proof.verdict.as_str());
    for (k, v) in &route.max_relative_error {
        let n = route.failures.get(k).copied().unwrap_or(0);
        let _ = writeln!(text, "route {k:<7} max rel. error {v:.3e}  failures {n}");
    }
    let _ = writeln!(text, "status: {}", status.as_str());

    let json = json!({
        "command": "verify-proof",
        "samples": samples,
        "seed": seed,
        "precision": precision,
        "tolerances": tols,
        "split_identities": identities,
        "proof": proof,
        "route_agreement": route,
        "verdict": proof.verdict,
        "status": status.as_str(),
    });
    Ok(Output {
        json,
        rows,
        text,
        status,
    })
}

pub fn roots(equation: Equation, precision: f64, settings: &Settings) -> Result<Output> {
    check_precision(precision)?;
    let tols = tolerances(&[], &settings.tol)?;
    let inv = root_inventory(equation, precision)?;
    let mut rows = Vec::new();
    let mut text = format!(
        "{}-part equation, degree {}, {} distinct real roots\n",
        equation.as_str(),
        inv.degree,
        inv.distinct_real_roots
    );
    for r in &inv.accepted {
        rows.push(Row::new(None, None, "accepted", r.refined));
        let _ = writeln!(text, "accepted  {:+.15}", r.refined);
    }
    for r in &inv.rejected {
        rows.push(Row::new(
            None,
            None,
            format!("rejected ({})", r.reason),
            r.root.refined,
        ));
        let _ = writeln!(text, "rejected  {:+.15}  {}", r.root.refined, r.reason);
    }
    let json = json!({
        "command": "roots",
        "equation": equation,
        "precision": precision,
        "tolerances": tols,
        "inventory": inv,
    });
    Ok(Output {
        json,
        rows,
        text,
        status: Status::Ok,
    })
}

pub fn general(n: usize, m: usize, seed: u64, settings: &Settings) -> Result<Output> {
    let tols = tolerances(
        &[("construction", 1e-9), ("criterion", DEFAULT_RANK_TOL)],
        &settings.tol,
    )?;
    let params = random_valid_params(n, m, seed).map_err(rep_invalid)?;
    let (u, v) = build_general(&params, settings.beta)?;
    let id = CMatrix::identity(params.dim());
    let mut residuals = BTreeMap::new();
    residuals.insert(
        "U_hermitian".to_string(),
        frobenius_distance(&u, &u.adjoint())?,
    );
    residuals.insert(
        "U_squared_identity".to_string(),
        frobenius_distance(&u.mul(&u)?, &id)?,
    );
    residuals.insert(
        "V_cubed_identity".to_string(),
        frobenius_distance(&v.pow(3)?, &id)?,
    );
    let (a, b, c) = (params.a(), params.b(), params.c());
    let lhs = b.mul(&b.adjoint())?.add(&c.mul(&c.adjoint())?)?;
    let rhs = a.sub(&a.mul(a)?)?;
    residuals.insert(
        "block_constraint".to_string(),
        frobenius_distance(&lhs, &rhs)?,
    );
    let tol = tols["construction"];
    let passed = residuals.values().all(|&x| x <= tol);
    let checklist = block_criterion_check(&params, tols["criterion"]);

    let mut rows = Vec::new();
    for (k, &x) in &residuals {
        rows.push(Row::new(None, Some(settings.beta), k.clone(), x).passed(x <= tol));
    }
    let flags = [
        ("a_invertible", checklist.a_invertible),
        ("b_invertible", checklist.b_invertible),
        ("rank_c_is_m", checklist.rank_c_is_m),
        ("bstarb_diagonal_simple", checklist.bstarb_diagonal_simple),
        ("a_entries_nonzero", checklist.a_entries_nonzero),
        ("all_hypotheses_hold", checklist.all_hypotheses_hold()),
    ];
    for (k, f) in flags {
        rows.push(Row::new(
            None,
            Some(settings.beta),
            format!("checklist.{k}"),
            f,
        ));
    }
    let mut text = format!(
        "n = {n}, m = {m}, seed = {seed}, dimension {}\n",
        params.dim()
    );
    for (k, x) in &residuals {
        let _ = writeln!(text, "{k:<20} {x:.3e}");
    }
    for (k, f) in flags {
        let _ = writeln!(text, "{k:<24} {f}");
    }
    let status = if passed {
        Status::Ok
    } else {
        Status::Failed("construction residuals exceed tolerance".into())
    };
    let json = json!({
        "command": "general",
        "n": n,
        "m": m,
        "seed": seed,
        "beta": settings.beta,
        "tolerances": tols,
        "params": params,
        "U": u,
        "V": v,
        "residuals": residuals,
        "checklist": checklist,
        "all_hypotheses_hold": checklist.all_hypotheses_hold(),
        "passed": passed,
    });
    Ok(Output {
        json,
        rows,
        text,
        status,
    })
}
