use std::fmt::Write;

use serde_json::json;
use toa_core::continuum::{
    iv_is_closed, iv_is_open, iv_upset, l33, meet_discontinuity_witness, rank_separation_check,
    ContinuumError, Interval, RationalIntervalSet, DEFAULT_TOL,
};
use toa_core::corpus::wright_triangle;

use crate::verbs::{Failure, Output};
use crate::DemoName;

pub fn run(name: DemoName, tol: Option<f64>, seed: Option<u64>) -> Result<Output, Failure> {
    if name != DemoName::Example25 && (tol.is_some() || seed.is_some()) {
        return Err(Failure::Usage(
            "--tol and --seed apply only to demo example2.5".into(),
        ));
    }
    match name {
        DemoName::Example25 => example25(tol.unwrap_or(DEFAULT_TOL), seed),
        DemoName::Example33 => example33(),
        DemoName::Wtriangle => wtriangle(),
    }
}

fn numeric(e: ContinuumError) -> Failure {
    Failure::Invalid(Output {
        code: 1,
        json: json!({ "error": e.to_string() }),
        text: format!("{e}\n"),
    })
}

fn example25(tol: f64, seed: Option<u64>) -> Result<Output, Failure> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Failure::Usage(format!("--tol must be positive, got {tol}")));
    }
    let mut rows = Vec::new();
    let mut text = String::from(
        "P_θ projects onto (cos θ, sin θ), Q = P₀ onto e₁\n       θ   ‖P_θ−P₀‖      sin θ  rank(P_θ∧Q)  rank(P₀∧Q)\n",
    );
    for e in 1..=6 {
        let theta = 10f64.powi(-e);
        let w = meet_discontinuity_witness(theta, tol).map_err(numeric)?;
        writeln!(
            text,
            "{:>8.0e} {:>10.3e} {:>10.3e} {:>12} {:>11}",
            theta, w.norm_gap, w.closed_form, w.meet_rank_at_theta, w.meet_rank_at_limit
        )
        .unwrap();
        rows.push(w);
    }
    writeln!(
        text,
        "P_θ → P₀ while P_θ ∧ Q = 0 and P₀ ∧ Q = Q: meet is not continuous"
    )
    .unwrap();

    let mut separation = Vec::new();
    if let Some(seed) = seed {
        for d in 2..=6 {
            let r =
                rank_separation_check(d, 200, seed.wrapping_add(d as u64), tol).map_err(numeric)?;
            writeln!(
                text,
                "d = {d}: min ‖P − Q‖ over 200 unequal-rank pairs = {:.12}",
                r.min_distance
            )
            .unwrap();
            separation.push(r);
        }
    }
    Ok(Output::ok(
        json!({ "tol": tol, "witnesses": rows, "rank_separation": separation }),
        text,
    ))
}

fn example33() -> Result<Output, Failure> {
    let q = |n: i64, d: i64| num_rational::BigRational::new(n.into(), d.into());
    let carrier = l33();
    let quarter = RationalIntervalSet::interval(Interval::closed(q(0, 1), q(1, 4)));
    let one = RationalIntervalSet::point(q(1, 1));
    let claimed = quarter.union(&one);
    let punctured = RationalIntervalSet::interval(Interval::new(q(0, 1), q(1, 4), false, true));

    let err = |e: ContinuumError| {
        Failure::Invalid(Output {
            code: 1,
            json: json!({ "error": e.to_string() }),
            text: format!("{e}\n"),
        })
    };
    let quarter_up = iv_upset(&quarter).map_err(err)?;
    let punctured_up = iv_upset(&punctured).map_err(err)?;
    let claimed_open = iv_is_open(&claimed).map_err(err)?;
    let punctured_up_open = iv_is_open(&punctured_up).map_err(err)?;
    let verdict = |open: bool| if open { "open" } else { "not open" };

    let mut text = String::new();
    writeln!(text, "L = {carrier}; x ⊥ y iff x + y = 1 or x = 0 or y = 0").unwrap();
    writeln!(
        text,
        "U = {quarter}: open {}, closed {}",
        iv_is_open(&quarter).map_err(err)?,
        iv_is_closed(&quarter).map_err(err)?
    )
    .unwrap();
    writeln!(text, "  {claimed}: {}", verdict(claimed_open)).unwrap();
    writeln!(
        text,
        "  computed U↑ = {quarter_up} (0 ≤ x for every x, since 0 ⊕ x = x)"
    )
    .unwrap();
    writeln!(
        text,
        "U = {punctured}: open {}",
        iv_is_open(&punctured).map_err(err)?
    )
    .unwrap();
    writeln!(
        text,
        "  U↑ = {punctured_up}: {}",
        verdict(punctured_up_open)
    )
    .unwrap();
    writeln!(text, "L is not stably ordered").unwrap();

    Ok(Output::ok(
        json!({
            "carrier": carrier.to_string(),
            "quarter": {
                "set": quarter.to_string(),
                "open": iv_is_open(&quarter).map_err(err)?,
                "closed": iv_is_closed(&quarter).map_err(err)?,
                "upset": quarter_up.to_string(),
                "upset_open": iv_is_open(&quarter_up).map_err(err)?,
            },
            "quarter_with_one": { "set": claimed.to_string(), "verdict": verdict(claimed_open) },
            "punctured": {
                "set": punctured.to_string(),
                "open": iv_is_open(&punctured).map_err(err)?,
                "upset": punctured_up.to_string(),
                "verdict": verdict(punctured_up_open),
            },
            "stably_ordered": punctured_up_open,
        }),
        text,
    ))
}

fn wtriangle() -> Result<Output, Failure> {
    let ts = wright_triangle();
    let q = ts.logic().map_err(|e| Failure::Usage(e.to_string()))?;
    let report = q.oa.classify();
    let tests: Vec<Vec<String>> = ts.tests().iter().map(|t| ts.names(t)).collect();
    let mut text = String::from("tests:");
    for t in &tests {
        write!(text, " {{{}}}", t.join(",")).unwrap();
    }
    writeln!(
        text,
        "\n{} events, {} perspectivity classes",
        q.events.len(),
        q.classes.len()
    )
    .unwrap();
    writeln!(text, "elements: {}", q.oa.labels().join(", ")).unwrap();
    writeln!(text, "orthocoherent: {}", report.orthocoherent).unwrap();
    if let Some(w) = &report.orthocoherence_witness {
        writeln!(
            text,
            "  {}, {}, {} are pairwise orthogonal with no joint sum",
            w.a, w.b, w.c
        )
        .unwrap();
    }
    Ok(Output::ok(
        json!({
            "tests": tests,
            "events": q.events.len(),
            "elements": q.oa.labels(),
            "classification": report,
        }),
        text,
    ))
}
