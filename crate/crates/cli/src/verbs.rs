use std::fmt::Write;
use std::path::Path;

use serde_json::{json, Value};
use toa_core::dot::{greechie_dot, hasse_dot};
use toa_core::oa::{Elem, FiniteOrthoalgebra, Lemma11Report, OaError, OaSpec};
use toa_core::testspace::{
    canonical_testspace, representation_roundtrip, TestSpace, TestSpaceError, TestSpaceSpec,
};
use toa_core::topo::{
    check_toa, lemma37_check, meet_join_continuity, totally_nonorthogonal_cover, TopoError,
    TopologySpec,
};

use crate::Diagram;

pub struct Output {
    pub code: u8,
    pub json: Value,
    pub text: String,
}

impl Output {
    pub fn ok(json: Value, text: String) -> Self {
        Output {
            code: 0,
            json,
            text,
        }
    }
}

pub enum Failure {
    /// Exit 1, with a report.
    Invalid(Output),
    /// Exit 2, with a message.
    Usage(String),
}

fn invalid(json: Value, text: String) -> Failure {
    Failure::Invalid(Output {
        code: 1,
        json,
        text,
    })
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn oa_failure(path: &Path, err: &OaError) -> Failure {
    let mut text = format!("{}: invalid orthoalgebra\n", path.display());
    for v in err.violations() {
        writeln!(text, "  {v}").unwrap();
    }
    if err.violations().is_empty() {
        writeln!(text, "  {err}").unwrap();
    }
    invalid(
        json!({
            "valid": false,
            "error": err.to_string(),
            "violations": err.violations(),
        }),
        text,
    )
}

fn load_oa(path: &Path) -> Result<FiniteOrthoalgebra, Failure> {
    let spec: OaSpec = parse(path)?;
    FiniteOrthoalgebra::build(&spec).map_err(|e| oa_failure(path, &e))
}

fn testspace_failure(err: &TestSpaceError) -> Failure {
    let mut report = json!({ "error": err.to_string() });
    if let TestSpaceError::NotAlgebraic { a, b, c } = err {
        report = json!({
            "algebraic": false,
            "error": err.to_string(),
            "witness": { "a": a, "b": b, "c": c },
        });
    }
    invalid(report, format!("{err}\n"))
}

fn load_testspace(path: &Path) -> Result<TestSpace, Failure> {
    let spec: TestSpaceSpec = parse(path)?;
    TestSpace::new(&spec).map_err(|e| testspace_failure(&e))
}

fn topo_failure(err: &TopoError) -> Failure {
    match err {
        TopoError::Parse(m) => Failure::Usage(m.clone()),
        other => invalid(json!({ "error": other.to_string() }), format!("{other}\n")),
    }
}

fn labels(l: &FiniteOrthoalgebra, items: &[Elem]) -> Vec<String> {
    items.iter().map(|&a| l.label(a).to_string()).collect()
}

fn set(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

pub fn verify(path: &Path) -> Result<Output, Failure> {
    let l = load_oa(path)?;
    let atoms = labels(&l, &l.atoms());
    let text = format!(
        "valid orthoalgebra: {} elements, atoms {}\n",
        l.len(),
        set(&atoms)
    );
    Ok(Output::ok(
        json!({ "valid": true, "size": l.len(), "atoms": atoms }),
        text,
    ))
}

pub fn analyze(path: &Path) -> Result<Output, Failure> {
    let l = load_oa(path)?;
    let report = l.classify();
    let internal = |e: OaError| invalid(json!({ "error": e.to_string() }), format!("{e}\n"));
    let center = labels(&l, &l.center().map_err(internal)?);
    let blocks: Vec<Vec<String>> = l.blocks().iter().map(|b| labels(&l, b)).collect();
    let boolean_blocks: Vec<Vec<String>> =
        l.boolean_blocks().iter().map(|b| labels(&l, b)).collect();
    let factors: Vec<Vec<String>> = l
        .central_decomposition()
        .map_err(internal)?
        .iter()
        .map(|f| f.labels().to_vec())
        .collect();
    let lemma11 = l.lemma11_check();

    let mut text = String::new();
    writeln!(text, "size: {}", report.size).unwrap();
    for (name, flag) in [
        ("boolean", report.boolean),
        ("lattice", report.lattice),
        ("orthomodular poset", report.omp),
        ("orthocoherent", report.orthocoherent),
        ("simple", report.simple),
    ] {
        writeln!(text, "{name}: {flag}").unwrap();
    }
    if let Some(w) = &report.orthocoherence_witness {
        writeln!(text, "orthocoherence fails at ({}, {}, {})", w.a, w.b, w.c).unwrap();
    }
    writeln!(
        text,
        "height: {}, atoms: {}",
        report.height, report.num_atoms
    )
    .unwrap();
    match &lemma11 {
        Lemma11Report::Checked { orthomodular, complement_maximal, cancellative, .. } => writeln!(
            text,
            "orthomodular {orthomodular}, complement-maximal {complement_maximal}, cancellative {cancellative}"
        )
        .unwrap(),
        Lemma11Report::NotApplicable { a, b } => {
            writeln!(text, "{a} ⊕ {b} is not the join of {a} and {b}").unwrap()
        }
    }
    writeln!(text, "center: {}", set(&center)).unwrap();
    writeln!(text, "blocks (maximal compatible sets):").unwrap();
    for b in &blocks {
        writeln!(text, "  {}", set(b)).unwrap();
    }
    writeln!(text, "maximal Boolean subalgebras:").unwrap();
    for b in &boolean_blocks {
        writeln!(text, "  {}", set(b)).unwrap();
    }
    writeln!(
        text,
        "central decomposition into {} factor(s):",
        factors.len()
    )
    .unwrap();
    for f in &factors {
        writeln!(text, "  {}", set(f)).unwrap();
    }

    Ok(Output::ok(
        json!({
            "classification": report,
            "lemma11": lemma11,
            "center": center,
            "blocks": blocks,
            "boolean_blocks": boolean_blocks,
            "decomposition": factors,
        }),
        text,
    ))
}

pub fn logic(path: &Path) -> Result<Output, Failure> {
    let ts = load_testspace(path)?;
    let q = ts.logic().map_err(|e| testspace_failure(&e))?;
    let spec = q.oa.to_spec();
    let mut text = format!("{} events, {} classes\n", q.events.len(), q.classes.len());
    for (k, class) in q.classes.iter().enumerate() {
        let events: Vec<String> = class
            .iter()
            .map(|&e| set(&ts.names(&q.events[e])))
            .collect();
        writeln!(text, "  {} = {}", q.oa.label(k), events.join(" ~ ")).unwrap();
    }
    Ok(Output::ok(
        serde_json::to_value(&spec).expect("spec serializes"),
        text,
    ))
}

pub fn canonical(path: &Path) -> Result<Output, Failure> {
    let l = load_oa(path)?;
    let ts = canonical_testspace(&l).map_err(|e| testspace_failure(&e))?;
    let spec = ts.to_spec();
    let mut text = format!(
        "{} outcomes, {} tests\n",
        spec.outcomes.len(),
        spec.tests.len()
    );
    for t in &spec.tests {
        writeln!(text, "  {}", set(t)).unwrap();
    }
    Ok(Output::ok(
        serde_json::to_value(&spec).expect("spec serializes"),
        text,
    ))
}

pub fn roundtrip(path: &Path) -> Result<Output, Failure> {
    let l = load_oa(path)?;
    match representation_roundtrip(&l) {
        Ok(rt) => {
            let mut text = String::from("logic of the canonical test space is isomorphic:\n");
            for (class, elem) in &rt.pairs {
                writeln!(text, "  {class} ↦ {elem}").unwrap();
            }
            Ok(Output::ok(
                json!({ "isomorphic": true, "pairs": rt.pairs }),
                text,
            ))
        }
        Err(e) => Err(invalid(
            json!({ "isomorphic": false, "error": e.to_string() }),
            format!("round trip failed: {e}\n"),
        )),
    }
}

pub fn topo_check(algebra: &Path, topology: &Path) -> Result<Output, Failure> {
    let l = load_oa(algebra)?;
    let spec: TopologySpec = parse(topology)?;
    let t = spec.build(l.len()).map_err(|e| topo_failure(&e))?;
    let report = check_toa(&l, &t).map_err(|e| topo_failure(&e))?;
    let lemma37 = lemma37_check(&l, &t).map_err(|e| topo_failure(&e))?;
    let mj = meet_join_continuity(&l, &t).map_err(|e| topo_failure(&e))?;
    let cover: Option<Vec<Vec<String>>> = totally_nonorthogonal_cover(&l, &t)
        .map_err(|e| topo_failure(&e))?
        .map(|c| {
            c.iter()
                .map(|u| labels(&l, &u.ones().collect::<Vec<_>>()))
                .collect()
        });

    let mut text = String::new();
    for (name, flag) in [
        ("⊥ closed", report.perp_closed),
        ("⊕ continuous", report.oplus_continuous),
        ("' continuous", report.comp_continuous),
        ("Hausdorff", report.hausdorff),
        ("≤ closed", report.order_closed),
        ("⊖ continuous", report.ominus_continuous),
        ("stably ordered", report.stably_ordered),
        ("all U ⊕ V open", lemma37.osums_open),
    ] {
        writeln!(text, "{name}: {flag}").unwrap();
    }
    let w = &report.witnesses;
    if let Some((a, b)) = &w.perp {
        writeln!(text, "  ({a}, {b}) is in the closure of ⊥").unwrap();
    }
    if let Some(u) = &w.stable_order {
        writeln!(text, "  {}↑ is not open", set(u)).unwrap();
    }
    if let Some((a, b)) = &w.hausdorff {
        writeln!(text, "  {a} and {b} cannot be separated").unwrap();
    }
    writeln!(text, "topological orthoalgebra: {}", report.is_toa()).unwrap();

    let json = json!({
        "toa": report.is_toa(),
        "report": report,
        "stable_order_vs_open_sums": lemma37,
        "meet_join": mj,
        "nonorthogonal_cover": cover,
    });
    let code = if report.is_toa() { 0 } else { 1 };
    Ok(Output { code, json, text })
}

pub fn states(path: &Path) -> Result<Output, Failure> {
    let l = load_oa(path)?;
    let vertices = l.state_vertices();
    let internal = |e: OaError| invalid(json!({ "error": e.to_string() }), format!("{e}\n"));
    let determining = l.is_order_determining(&vertices).map_err(internal)?;
    let rows: Vec<Vec<String>> = vertices.iter().map(|s| s.to_strings()).collect();
    let mut text = format!("{} vertices over ({})\n", rows.len(), l.labels().join(", "));
    for r in &rows {
        writeln!(text, "  ({})", r.join(", ")).unwrap();
    }
    writeln!(text, "order-determining: {determining}").unwrap();
    Ok(Output::ok(
        json!({ "elements": l.labels(), "vertices": rows, "order_determining": determining }),
        text,
    ))
}

pub fn export_dot(path: &Path, diagram: Diagram) -> Result<Output, Failure> {
    let l = load_oa(path)?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("L");
    let dot = match diagram {
        Diagram::Hasse => hasse_dot(&l, name),
        Diagram::Greechie => greechie_dot(&l, name),
    };
    Ok(Output::ok(json!({ "dot": dot }), dot))
}
