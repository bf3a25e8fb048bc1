use std::fmt::Write as _;
use std::path::Path;

use mcpp::decompose::{check_precondition, compare_intersection, verify_decomposition, Decomposition, Route};
use mcpp::exactmath::{PointSet, RVector, Rational, Row, Space, Subset, DEFAULT_VERTEX_GUARD};
use mcpp::hypergraph::{is_alpha_acyclic, is_downward_closed, Acyclicity, Hypergraph};
use mcpp::instance::Instance;
use mcpp::lifting::{check_condition, compute_v0_v1, lift, LiftSelection, MPInequality};
use mcpp::oracle::{enumerate_mcleq_vertices, enumerate_mp_vertices, enumerate_sh, DEFAULT_POINT_GUARD};
use mcpp::polytope::{certify_inequality, IneqCertificate};
use mcpp::relaxation::{build_affine_hull, build_mc_cap, build_mc_t, RelaxationSystem};
use mcpp::solve::{solve, MethodChoice, SolveOptions};
use mcpp::verify::run_all;
use serde_json::{json, Value};

use crate::format::{parse_index_list, parse_json, read_json, InequalityFile, InstanceFile, PartFile, SpaceKind};
use crate::{Cli, CliError, Command, MethodArg, PointSetKind, SystemKind};

pub struct Output {
    pub json: Value,
    pub text: String,
    /// Printed after the output; the process then exits with code 4.
    pub failure: Option<String>,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Output {
            json,
            text,
            failure: None,
        }
    }
}

type Res<T> = Result<T, CliError>;

fn load_instance(path: &Path) -> Res<Instance> {
    let file: InstanceFile = read_json(path)?;
    Ok(file.into_raw()?.validate()?)
}

fn transversal(inst: &Instance, arg: &Option<String>) -> Res<Subset> {
    match arg {
        Some(s) => parse_index_list(s),
        None => Ok(Subset::new(
            inst.partition()
                .blocks()
                .iter()
                .map(|b| b.iter().next().expect("non-empty block")),
        )),
    }
}

fn point_guard(cli: &Cli) -> u128 {
    cli.guard.map_or(DEFAULT_POINT_GUARD, u128::from)
}

fn vertex_guard(cli: &Cli) -> usize {
    cli.guard.map_or(DEFAULT_VERTEX_GUARD, |g| g as usize)
}

fn rat(r: &Rational) -> Value {
    Value::String(r.to_string())
}

fn rats(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

fn blocks_text(e: &Subset) -> String {
    e.iter().map(|b| format!("I{}", b + 1)).collect()
}

fn blocks_json(e: &Subset) -> Value {
    json!(e.iter().map(|b| b + 1).collect::<Vec<_>>())
}

/// Labels of a coordinate space; block labels for the multilinear space.
fn labels(space: &Space, blocks: bool) -> (Vec<String>, Value) {
    let text = space
        .labels()
        .iter()
        .map(|l| if blocks { blocks_text(l) } else { format!("w{l}") })
        .collect();
    let json = Value::Array(
        space
            .labels()
            .iter()
            .map(|l| {
                if blocks {
                    blocks_json(l)
                } else {
                    json!(l.iter().collect::<Vec<_>>())
                }
            })
            .collect(),
    );
    (text, json)
}

fn linear_form(coeffs: &[Rational], names: &[String]) -> String {
    let mut s = String::new();
    for (c, name) in coeffs.iter().zip(names) {
        if c == &Rational::from_integer(0.into()) {
            continue;
        }
        let neg = c < &Rational::from_integer(0.into());
        let mag = if neg { -c.clone() } else { c.clone() };
        let sign = match (s.is_empty(), neg) {
            (true, false) => "",
            (true, true) => "-",
            (false, false) => " + ",
            (false, true) => " - ",
        };
        if mag == Rational::from_integer(1.into()) {
            let _ = write!(s, "{sign}{name}");
        } else {
            let _ = write!(s, "{sign}{mag} {name}");
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn row_json(row: &Row, tag: impl ToString) -> Value {
    json!({"tag": tag.to_string(), "coeffs": rats(&row.coeffs), "rhs": rat(&row.rhs)})
}

fn system_output(rs: &RelaxationSystem, title: &str) -> (Value, String) {
    let space = rs.system.space();
    let (names, label_json) = labels(space, false);
    let mut eqs = Vec::new();
    let mut ineqs = Vec::new();
    let mut text = format!(
        "{title}: {} equalities, {} inequalities over {} coordinates\n",
        rs.system.equalities.len(),
        rs.system.inequalities.len(),
        space.len()
    );
    for (is_eq, row, tag) in rs.tagged_rows() {
        let op = if is_eq { "=" } else { "<=" };
        let _ = writeln!(
            text,
            "  {} {op} {}   [{tag}]",
            linear_form(&row.coeffs, &names),
            row.rhs
        );
        if is_eq {
            eqs.push(row_json(row, tag));
        } else {
            ineqs.push(row_json(row, tag));
        }
    }
    (
        json!({"space": label_json, "equalities": eqs, "inequalities": ineqs}),
        text,
    )
}

fn points_output(points: &PointSet, blocks: bool) -> Output {
    let (names, label_json) = labels(points.space(), blocks);
    let mut text = format!(
        "{} points over {} coordinates\n{}\n",
        points.len(),
        names.len(),
        names.join(" ")
    );
    for p in points.points() {
        let row: Vec<String> = p.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(text, "{}", row.join(" "));
    }
    let pts: Vec<Value> = points.points().iter().map(|p| rats(p)).collect();
    Output::ok(json!({"space": label_json, "points": pts}), text)
}

fn certificate_text(c: &IneqCertificate, total: usize) -> String {
    let status = serde_json::to_value(c.status)
        .expect("status")
        .as_str()
        .unwrap_or_default()
        .to_string();
    format!(
        "{status}: face dimension {}, polytope dimension {}, {} of {total} vertices tight\n",
        c.face_dim,
        c.polytope_dim,
        c.tight.len()
    )
}

fn cmd_validate(path: &Path) -> Res<Output> {
    let inst = load_instance(path)?;
    let fam = inst.family();
    let p = inst.partition();
    let text = format!(
        "valid: n = {}, {} blocks, {} terms, {} edges, {} coordinates\n",
        p.n(),
        p.num_blocks(),
        inst.terms().len(),
        fam.hypergraph().edges().len(),
        fam.len()
    );
    Ok(Output::ok(
        json!({
            "valid": true,
            "n": p.n(),
            "blocks": p.num_blocks(),
            "terms": inst.terms().len(),
            "offset": rat(inst.offset()),
            "coordinates": fam.len(),
        }),
        text,
    ))
}

fn hypergraph_output(h: &Hypergraph) -> Output {
    let acyc = is_alpha_acyclic(h);
    let verts: Vec<String> = h.vertices().iter().map(|v| format!("I{}", v + 1)).collect();
    let edges: Vec<String> = h.edges().iter().map(blocks_text).collect();
    let mut text = format!(
        "V: {}\nE: {}\nrank: {}\ndownward-closed: {}\nalpha-acyclic: {}\n",
        verts.join(" "),
        if edges.is_empty() {
            "(none)".to_string()
        } else {
            edges.join(" ")
        },
        h.rank(),
        is_downward_closed(h),
        acyc.is_acyclic()
    );
    let (tree, residual) = match &acyc {
        Acyclicity::Acyclic(t) => {
            for &(a, b) in t.links() {
                let _ = writeln!(
                    text,
                    "join tree link: {} - {}",
                    blocks_text(&t.nodes()[a]),
                    blocks_text(&t.nodes()[b])
                );
            }
            let tree = json!({
                "nodes": t.nodes().iter().map(blocks_json).collect::<Vec<_>>(),
                "links": t.links(),
            });
            (tree, Value::Null)
        }
        Acyclicity::Cyclic { residual } => {
            let r: Vec<String> = residual.edges().iter().map(blocks_text).collect();
            let _ = writeln!(text, "irreducible remainder: {}", r.join(" "));
            (
                Value::Null,
                json!(residual.edges().iter().map(blocks_json).collect::<Vec<_>>()),
            )
        }
    };
    Output::ok(
        json!({
            "vertices": h.vertices().iter().map(|v| v + 1).collect::<Vec<_>>(),
            "edges": h.edges().iter().map(blocks_json).collect::<Vec<_>>(),
            "rank": h.rank(),
            "downward_closed": is_downward_closed(h),
            "acyclic": acyc.is_acyclic(),
            "join_tree": tree,
            "residual": residual,
        }),
        text,
    )
}

fn cmd_hrep(path: &Path, system: SystemKind, d: &Option<String>) -> Res<Output> {
    let inst = load_instance(path)?;
    let fam = inst.family();
    Ok(match system {
        SystemKind::Jointree => {
            let Acyclicity::Acyclic(tree) = is_alpha_acyclic(fam.hypergraph()) else {
                return Err(mcpp::Error::NotAlphaAcyclic.into());
            };
            let (json, text) = system_output(&build_mc_t(&fam, &tree)?, "join-tree relaxation");
            Output::ok(json, text)
        }
        SystemKind::Cap => {
            let (json, text) = system_output(&build_mc_cap(&fam)?, "pairwise relaxation");
            Output::ok(json, text)
        }
        SystemKind::Affine => {
            let d = transversal(&inst, d)?;
            let hull = build_affine_hull(&fam, &d)?;
            let (dj, dt) = system_output(&hull.d_form, &format!("affine hull, D = {d}"));
            let (sj, st) = system_output(&hull.symmetric, "affine hull, symmetric form");
            Output::ok(
                json!({"transversal": d.iter().collect::<Vec<_>>(), "rank": hull.rank(), "d_form": dj, "symmetric": sj}),
                format!("rank {}\n{dt}{st}", hull.rank()),
            )
        }
    })
}

fn cmd_enumerate(cli: &Cli, path: &Path, set: PointSetKind, d: &Option<String>) -> Res<Output> {
    let inst = load_instance(path)?;
    let fam = inst.family();
    let guard = point_guard(cli);
    Ok(match set {
        PointSetKind::Sh => points_output(&enumerate_sh(&fam, guard)?, false),
        PointSetKind::Mp => points_output(&enumerate_mp_vertices(fam.hypergraph(), guard)?, true),
        PointSetKind::Leq => {
            let d = transversal(&inst, d)?;
            points_output(&enumerate_mcleq_vertices(&fam, &d, guard)?, false)
        }
    })
}

fn cmd_certify(cli: &Cli, path: &Path, ineq_path: &Path, d: &Option<String>) -> Res<Output> {
    let inst = load_instance(path)?;
    let fam = inst.family();
    let file: InequalityFile = read_json(ineq_path)?;
    let guard = point_guard(cli);
    let verts = match file.space {
        SpaceKind::Family => enumerate_sh(&fam, guard)?,
        SpaceKind::Leq => enumerate_mcleq_vertices(&fam, &transversal(&inst, d)?, guard)?,
        SpaceKind::Multilinear => enumerate_mp_vertices(fam.hypergraph(), guard)?,
    };
    let a = RVector::from_pairs(verts.space().clone(), file.pairs()?)?;
    let cert = certify_inequality(&a, &file.delta.value()?, &verts)?;
    let text = certificate_text(&cert, verts.len());
    Ok(Output::ok(serde_json::to_value(&cert).expect("certificate"), text))
}

fn cmd_lift(cli: &Cli, path: &Path, ineq_path: &Path, selection: &str) -> Res<Output> {
    let inst = load_instance(path)?;
    let fam = inst.family();
    let h = fam.hypergraph();
    let file: InequalityFile = read_json(ineq_path)?;
    if file.space != SpaceKind::Multilinear {
        return Err(CliError::Parse("lift needs an inequality over the MP space".into()));
    }
    let ineq = MPInequality::new(h, &file.pairs()?, file.delta.value()?)?;
    let sets: Vec<Vec<usize>> = parse_json(selection)?;
    let sel = LiftSelection::new(inst.partition(), sets.into_iter().map(Subset::new).collect())?;
    let guard = point_guard(cli);
    let mp = enumerate_mp_vertices(h, guard)?;
    let mc = enumerate_sh(&fam, guard)?;
    let mp_cert = certify_inequality(&ineq.c, &ineq.delta, &mp)?;
    let cls = compute_v0_v1(&ineq, &mp)?;
    let condition = check_condition(&sel, &cls, inst.partition());
    let (a, delta) = lift(&ineq, &sel, &fam)?;
    let cert = certify_inequality(&a, &delta, &mc)?;
    let (names, label_json) = labels(fam.space(), false);
    let v0: Vec<String> = cls.v0.iter().map(|b| format!("I{}", b + 1)).collect();
    let v1: Vec<String> = cls.v1.iter().map(|b| format!("I{}", b + 1)).collect();
    let mut text = format!("lifted: {} <= {}\n", linear_form(a.values(), &names), delta);
    let _ = write!(text, "multilinear inequality: {}", certificate_text(&mp_cert, mp.len()));
    let _ = write!(text, "lifted inequality: {}", certificate_text(&cert, mc.len()));
    let _ = writeln!(text, "V0: {}  V1: {}", v0.join(" "), v1.join(" "));
    let _ = writeln!(
        text,
        "selection condition: {}",
        if condition { "holds" } else { "fails" }
    );
    Ok(Output::ok(
        json!({
            "lifted": {"coords": label_json, "a": rats(a.values()), "delta": rat(&delta)},
            "mp_certificate": mp_cert,
            "certificate": cert,
            "v0": cls.v0.iter().map(|b| b + 1).collect::<Vec<_>>(),
            "v1": cls.v1.iter().map(|b| b + 1).collect::<Vec<_>>(),
            "condition": condition,
        }),
        text,
    ))
}

fn cmd_decompose(cli: &Cli, path: &Path, first: &str, second: &str) -> Res<Output> {
    let inst = load_instance(path)?;
    let fam = inst.family();
    let h1 = parse_json::<PartFile>(first)?.hypergraph()?;
    let h2 = parse_json::<PartFile>(second)?.hypergraph()?;
    let d = Decomposition::new(fam.hypergraph(), h1, h2)?;
    let guard = vertex_guard(cli);
    let precondition = check_precondition(&d);
    let check = if precondition {
        verify_decomposition(&d, &fam, guard)?
    } else {
        let both_acyclic = d.parts().iter().all(|p| is_alpha_acyclic(p).is_acyclic());
        compare_intersection(&d, &fam, if both_acyclic { Route::HRep } else { Route::VRep }, guard)?
    };
    let route = serde_json::to_value(check.route).expect("route");
    let mut text = format!(
        "shared blocks: {}\nprecondition: {}\nroute: {}\nintersection vertices: {}\n",
        blocks_text(d.shared()),
        precondition,
        route.as_str().unwrap_or_default(),
        check.vertices
    );
    match &check.counterexample {
        None => text.push_str("intersection equals the polytope\n"),
        Some(p) => {
            let shown: Vec<String> = p.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(text, "intersection is larger; witness: {}", shown.join(" "));
        }
    }
    Ok(Output::ok(
        json!({
            "shared": blocks_json(d.shared()),
            "precondition": precondition,
            "route": route,
            "vertices": check.vertices,
            "equal": check.equal(),
            "counterexample": check.counterexample.as_deref().map(rats),
        }),
        text,
    ))
}

fn cmd_verify(seed: u64, trials: usize) -> Output {
    let results = run_all(seed, trials);
    let mut text = String::new();
    for r in &results {
        let _ = writeln!(
            text,
            "{} {}. {}: {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.title,
            r.detail
        );
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    Output {
        json: serde_json::to_value(&results).expect("results"),
        text,
        failure: (!failed.is_empty()).then(|| format!("checks failed: {failed:?}")),
    }
}

fn cmd_solve(cli: &Cli, path: &Path, method: MethodArg) -> Res<Output> {
    let inst = load_instance(path)?;
    let method = match method {
        MethodArg::Auto => MethodChoice::Auto,
        MethodArg::Lp => MethodChoice::Lp,
        MethodArg::Brute => MethodChoice::Brute,
    };
    let r = solve(
        &inst,
        SolveOptions {
            method,
            guard: point_guard(cli),
        },
    )?;
    let json = serde_json::to_value(&r).expect("report");
    let s = &r.stats;
    let text = format!(
        "optimum: {}\nx: {}\nchoice: {}\nmethod: {}\nalpha-acyclic: {}\nrank {}, max block size {}, {} coordinates, {} equalities, {} inequalities, {} pivots, {} ms\n",
        r.optimum,
        r.x,
        r.argmax.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","),
        json["method"].as_str().unwrap_or_default(),
        r.acyclic,
        s.rank,
        s.max_block_size,
        s.family_size,
        s.equalities,
        s.inequalities,
        s.pivots,
        s.wall_time_ms
    );
    Ok(Output::ok(json, text))
}

pub fn run(cli: &Cli) -> Res<Output> {
    match &cli.command {
        Command::Validate { instance } => cmd_validate(instance),
        Command::Hypergraph { instance } => Ok(hypergraph_output(load_instance(instance)?.family().hypergraph())),
        Command::Hrep {
            instance,
            system,
            transversal,
        } => cmd_hrep(instance, *system, transversal),
        Command::Enumerate {
            instance,
            set,
            transversal,
        } => cmd_enumerate(cli, instance, *set, transversal),
        Command::Certify {
            instance,
            inequality,
            transversal,
        } => cmd_certify(cli, instance, inequality, transversal),
        Command::Lift {
            instance,
            inequality,
            selection,
        } => cmd_lift(cli, instance, inequality, selection),
        Command::DecomposeCheck {
            instance,
            first,
            second,
        } => cmd_decompose(cli, instance, first, second),
        Command::VerifyTheorems { seed, trials } => Ok(cmd_verify(*seed, *trials)),
        Command::Solve { instance, method } => cmd_solve(cli, instance, *method),
    }
}
