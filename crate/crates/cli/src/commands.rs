//! One function per subcommand. Each returns an [`Output`]; errors propagate
//! to `main`, which maps them to exit codes.

use std::time::Instant;

use anyhow::{bail, Result};
use ellcoh::formal_group::fgl;
use ellcoh::oracle::intersection_counts;
use ellcoh::torsion::{exact_order_count, intersection_number};
use ellcoh::{
    cohomology_triple, divisor_of_rep, parse_direction_list, solve_character_eq, splitting_pair,
    theory_value, verify, Direction, FiniteSubgroup, FormalGroup, Representation, Sign, Window,
    XDivisor,
};
use num_integer::lcm;
use serde_json::{json, Value};

use crate::config::{RunConfig, UsageError};
use crate::output::Output;

/// Largest torsion level `|det|·lcm(1..=j)` the brute-force count may scan.
pub const BRUTE_LEVEL_CAP: i64 = 60;

fn divisor_json(d: &XDivisor) -> Value {
    Value::Array(
        d.terms()
            .iter()
            .map(|((dir, j), c)| json!({"dir": dir.to_string(), "j": j, "coeff": c}))
            .collect(),
    )
}

fn fgl_group(cfg: &RunConfig) -> Result<FormalGroup> {
    Ok(FormalGroup::new(cfg.curve.clone(), cfg.prec)?)
}

fn coefficient_rows(coeffs: &[ellcoh::Q]) -> Vec<Vec<String>> {
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| vec![i.to_string(), c.to_string()])
        .collect()
}

pub fn value(cfg: &RunConfig, rep: &str, sign: &str) -> Result<Output> {
    let v: Representation = rep.parse()?;
    let sign: Sign = sign.parse()?;
    let d = divisor_of_rep(&v)?;
    let triple = cohomology_triple(&d, sign.flip())?;
    let val = theory_value(&v, sign)?;
    let d2 = d.self_intersection();
    Ok(Output::new("value")
        .field("rep", v.to_string())
        .field("sign", sign.to_string())
        .field("curve", cfg.curve.to_string())
        .field("divisor", divisor_json(&d))
        .field("self_intersection", d2)
        .field("triple", json!([triple.h0, triple.h1, triple.h2]))
        .field("even", val.even)
        .field("odd", val.odd)
        .table(
            vec![
                "rep",
                "sign",
                "h0",
                "h1",
                "h2",
                "self_intersection",
                "even",
                "odd",
            ],
            vec![vec![
                v.to_string(),
                sign.to_string(),
                triple.h0.to_string(),
                triple.h1.to_string(),
                triple.h2.to_string(),
                d2.to_string(),
                val.even.to_string(),
                val.odd.to_string(),
            ]],
        ))
}

pub fn fgl_log(cfg: &RunConfig) -> Result<Output> {
    let g = fgl_group(cfg)?;
    let coeffs = g.log().coeffs();
    Ok(Output::new("fgl log")
        .field("curve", cfg.curve.to_string())
        .field("prec", cfg.prec)
        .field(
            "coefficients",
            coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        )
        .field("series", g.log().to_string())
        .table(vec!["degree", "coefficient"], coefficient_rows(coeffs)))
}

pub fn fgl_add(cfg: &RunConfig) -> Result<Output> {
    // validates the curve before the expansion
    let g = fgl_group(cfg)?;
    let f = fgl(g.curve(), cfg.prec);
    let rows: Vec<Vec<String>> = f
        .terms()
        .iter()
        .map(|(e, c)| vec![e[0].to_string(), e[1].to_string(), c.to_string()])
        .collect();
    let terms: Vec<Value> = f
        .terms()
        .iter()
        .map(|(e, c)| json!({"i": e[0], "j": e[1], "coeff": c.to_string()}))
        .collect();
    Ok(Output::new("fgl add")
        .field("curve", cfg.curve.to_string())
        .field("prec", cfg.prec)
        .field("terms", terms)
        .field("series", f.to_string())
        .table(vec!["i", "j", "coefficient"], rows))
}

pub fn fgl_nseries(cfg: &RunConfig, n: i64) -> Result<Output> {
    let g = fgl_group(cfg)?;
    let s = g.n_series(n);
    Ok(Output::new("fgl nseries")
        .field("curve", cfg.curve.to_string())
        .field("prec", cfg.prec)
        .field("n", n)
        .field(
            "coefficients",
            s.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        )
        .field("series", s.to_string())
        .table(vec!["degree", "coefficient"], coefficient_rows(s.coeffs())))
}

pub fn fgl_fundrel(cfg: &RunConfig, subgroup: &str, dir: Option<&str>) -> Result<Output> {
    let f: FiniteSubgroup = subgroup.parse()?;
    let g = fgl_group(cfg)?;
    let profile = splitting_pair(&f, cfg.split_budget)?;
    let dirs = match dir {
        Some(s) => parse_direction_list(s)?,
        None => Direction::grid(cfg.grid),
    };
    let mut results = Vec::new();
    let mut rows = Vec::new();
    let mut all = true;
    for d in &dirs {
        let (r, s) = solve_character_eq(&profile, d)?;
        let holds = g.check_fundrel(&profile, d)?;
        all &= holds;
        let n = profile.n_index(d);
        results.push(json!({"dir": d.to_string(), "n": n, "r": r, "s": s, "holds": holds}));
        rows.push(vec![
            d.to_string(),
            n.to_string(),
            r.to_string(),
            s.to_string(),
            holds.to_string(),
        ]);
    }
    Ok(Output::new("fgl fundrel")
        .field("curve", cfg.curve.to_string())
        .field("prec", cfg.prec)
        .field("subgroup", f.to_string())
        .field("split", split_json(&profile))
        .field("results", results)
        .field("holds", all)
        .table(vec!["dir", "n", "r", "s", "holds"], rows)
        .ok(all))
}

fn split_json(p: &ellcoh::FiniteSubgroupProfile) -> Value {
    json!([
        {"dir": p.split_a.0.to_string(), "n": p.split_a.1},
        {"dir": p.split_b.0.to_string(), "n": p.split_b.1},
    ])
}

pub fn subgroup(cfg: &RunConfig, gens: &str) -> Result<Output> {
    let f: FiniteSubgroup = gens.parse()?;
    if f.order() > cfg.subgroup_budget {
        bail!(ellcoh::Error::Budget(cfg.subgroup_budget));
    }
    let profile = splitting_pair(&f, cfg.split_budget)?;
    let mut table = Vec::new();
    let mut rows = Vec::new();
    for d in Direction::grid(cfg.grid) {
        let n = profile.n_index(&d);
        let (r, s) = solve_character_eq(&profile, &d)?;
        table.push(json!({"dir": d.to_string(), "n": n, "r": r, "s": s}));
        rows.push(vec![
            d.to_string(),
            n.to_string(),
            r.to_string(),
            s.to_string(),
        ]);
    }
    let generators: Vec<Value> = f
        .generators()
        .iter()
        .map(|(x, y)| json!([x.to_string(), y.to_string()]))
        .collect();
    Ok(Output::new("subgroup")
        .field("subgroup", f.to_string())
        .field("order", f.order())
        .field("exponent", f.exponent())
        .field("generators", generators)
        .field("split", split_json(&profile))
        .field("directions", table)
        .table(vec!["dir", "n", "r", "s"], rows))
}

pub fn divisor(rep: Option<&str>, terms: Option<&str>) -> Result<Output> {
    let d = match (rep, terms) {
        (Some(r), None) => divisor_of_rep(&r.parse()?)?,
        // `;` separates terms so a divisor fits on one command line
        (None, Some(t)) => t.replace(';', "\n").parse()?,
        _ => bail!(UsageError("give exactly one of --rep or --terms".into())),
    };
    let plus = cohomology_triple(&d, Sign::Plus)?;
    let minus = cohomology_triple(&d, Sign::Minus)?;
    let d2 = d.self_intersection();
    let degrees: Vec<Value> = d
        .directions()
        .iter()
        .map(|e| json!({"dir": e.to_string(), "degree": d.direction_degree(e)}))
        .collect();
    let row = |s: &str, t: &ellcoh::CohomologyTriple| {
        vec![
            s.to_string(),
            t.h0.to_string(),
            t.h1.to_string(),
            t.h2.to_string(),
            t.euler_characteristic().to_string(),
        ]
    };
    Ok(Output::new("divisor")
        .field("divisor", divisor_json(&d))
        .field("self_intersection", d2)
        .field("direction_degrees", degrees)
        .field("triple_plus", json!([plus.h0, plus.h1, plus.h2]))
        .field("triple_minus", json!([minus.h0, minus.h1, minus.h2]))
        .field("euler_characteristic", plus.euler_characteristic())
        .table(
            vec!["sign", "h0", "h1", "h2", "chi"],
            vec![row("+", &plus), row("-", &minus)],
        ))
}

pub fn intersect(dirs: &str, max_j: u64, brute: bool) -> Result<Output> {
    let list = parse_direction_list(dirs)?;
    let [d, e] = list[..] else {
        bail!(UsageError(format!(
            "expected two directions, found {}",
            list.len()
        )));
    };
    if max_j == 0 {
        bail!(UsageError("--max-j must be at least 1".into()));
    }
    let det = d.det(&e);
    let counts = if brute {
        if det == 0 {
            bail!(ellcoh::Error::ParallelDirections(
                d.to_string(),
                e.to_string()
            ));
        }
        let level = det.abs() * (1..=max_j as i64).fold(1, lcm);
        if level > BRUTE_LEVEL_CAP {
            bail!(ellcoh::Error::Budget(BRUTE_LEVEL_CAP as u64));
        }
        Some(intersection_counts(&d, &e, max_j as i64))
    } else {
        None
    };
    let mut pairs = Vec::new();
    let mut rows = Vec::new();
    let mut agree = true;
    for j in 1..=max_j {
        for l in 1..=max_j {
            let n = intersection_number(&XDivisor::single(d, j), &XDivisor::single(e, l));
            let mut entry = json!({"j": j, "l": l, "formula": n});
            let mut row = vec![j.to_string(), l.to_string(), n.to_string()];
            if let Some(c) = &counts {
                let b = c.get(&(j as i64, l as i64)).copied().unwrap_or(0);
                agree &= b == n as u64;
                entry["brute"] = b.into();
                row.push(b.to_string());
            }
            pairs.push(entry);
            rows.push(row);
        }
    }
    let header = if brute {
        vec!["j", "l", "formula", "brute"]
    } else {
        vec!["j", "l", "formula"]
    };
    let mut out = Output::new("intersect")
        .field("dirs", json!([d.to_string(), e.to_string()]))
        .field("det", det)
        .field(
            "jordan",
            (1..=max_j).map(exact_order_count).collect::<Vec<_>>(),
        )
        .field("pairs", pairs)
        .table(header, rows)
        .ok(agree);
    if brute {
        out = out.field("agree", agree);
    }
    Ok(out)
}

pub fn cousin(cfg: &RunConfig, dirs: &str) -> Result<Output> {
    let list = parse_direction_list(dirs)?;
    let w = Window::new(cfg.curve.clone(), &list, cfg.polecap, cfg.prec)?;
    let report = w.exactness_report()?;
    let rows = report
        .checks
        .iter()
        .map(|c| vec![c.name.clone(), c.pass.to_string(), c.rationale.clone()])
        .collect();
    let mut out = Output::new("cousin").ok(report.all_pass());
    if let Value::Object(map) = serde_json::to_value(&report)? {
        for (k, v) in map {
            out = out.field(&k, v);
        }
    }
    Ok(out
        .field("all_pass", report.all_pass())
        .table(vec!["check", "pass", "rationale"], rows))
}

/// Runs every property suite. Timings go to stderr so stdout stays
/// byte-identical across runs.
pub fn selftest() -> Result<Output> {
    let start = Instant::now();
    let outcomes = verify::run_all();
    for o in &outcomes {
        eprintln!("{:<24} {:>8} ms", o.name, o.elapsed.as_millis());
    }
    eprintln!("{:<24} {:>8} ms", "total", start.elapsed().as_millis());
    let all = outcomes.iter().all(|o| o.pass);
    let criteria: Vec<Value> = outcomes
        .iter()
        .map(|o| json!({"name": o.name, "pass": o.pass, "detail": o.detail}))
        .collect();
    let rows = outcomes
        .iter()
        .map(|o| vec![o.name.to_string(), o.pass.to_string(), o.detail.clone()])
        .collect();
    Ok(Output::new("selftest")
        .field("criteria", criteria)
        .field("pass", all)
        .table(vec!["criterion", "pass", "detail"], rows)
        .ok(all))
}
