//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p ellcoh-cli --test acceptance`. Exits non-zero if
//! any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use ellcoh::verify::{self, Outcome};

const BIN: &str = env!("CARGO_BIN_EXE_ellcoh");

struct Line {
    name: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

impl From<Outcome> for Line {
    fn from(o: Outcome) -> Self {
        Line {
            name: o.name,
            pass: o.pass,
            detail: o.detail,
            elapsed: o.elapsed,
        }
    }
}

fn with_budget(o: Outcome, budget: Duration) -> Line {
    let mut line = Line::from(o);
    if line.elapsed > budget {
        line.pass = false;
        line.detail = format!("{} (over the {} s budget)", line.detail, budget.as_secs());
    }
    line
}

fn run(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(BIN)
        .args(args)
        .env_remove("ELLCOH_PREC")
        .output()
        .expect("binary runs");
    (out.status.code(), out.stdout)
}

const FIXTURES: &[&[&str]] = &[
    &["value", "--rep", "(1,0):1,(0,1):1", "--sign", "+"],
    &[
        "value",
        "--rep",
        "(1,1):2,(1,-1):1",
        "--sign",
        "-",
        "--format",
        "tsv",
    ],
    &["fgl", "log", "--curve", "0,0,0,1,0", "--prec", "6"],
    &["fgl", "add", "--prec", "6", "--format", "tsv"],
    &["fgl", "nseries", "--n", "-3", "--prec", "7"],
    &[
        "fgl",
        "fundrel",
        "--subgroup",
        "1/3,1/3",
        "--dir",
        "0,1",
        "--prec",
        "8",
    ],
    &["subgroup", "--gens", "1/2,0;0,1/2"],
    &["subgroup", "--gens", ""],
    &["divisor", "--rep", "(1,0):2,(1,1):1"],
    &["intersect", "--dirs", "(1,0),(1,2)", "--brute"],
    &[
        "cousin",
        "--dirs",
        "(1,0),(0,1)",
        "--polecap",
        "2",
        "--prec",
        "8",
    ],
    &[
        "cousin",
        "--dirs",
        "(1,1),(-1,1),(1,0)",
        "--polecap",
        "2",
        "--prec",
        "10",
    ],
];

fn cli_determinism() -> Line {
    let start = Instant::now();
    let mut problems = Vec::new();
    for args in FIXTURES {
        let (c1, a) = run(args);
        let (c2, b) = run(args);
        if c1 != Some(0) || c2 != Some(0) || a != b || a.is_empty() {
            problems.push(args.join(" "));
        }
    }
    let (s1, a) = run(&["selftest"]);
    let (s2, b) = run(&["selftest"]);
    let selftest_ok = s1 == Some(0) && s2 == Some(0) && a == b;
    Line {
        name: "cli_determinism",
        pass: problems.is_empty() && selftest_ok,
        detail: format!(
            "{} fixtures byte-identical over two runs ({} problems{}); selftest exit {:?}, stable output {}",
            FIXTURES.len(),
            problems.len(),
            if problems.is_empty() { String::new() } else { format!(": {}", problems.join(" | ")) },
            s1,
            a == b,
        ),
        elapsed: start.elapsed(),
    }
}

fn main() {
    let start = Instant::now();
    let lines = vec![
        with_budget(verify::fgl_axioms(10), Duration::from_secs(10)),
        verify::log_linearization(12, 6).into(),
        verify::fundrel_grid(12, 3, 8).into(),
        verify::intersections(4, 3, 100).into(),
        verify::cohomology_checks().into(),
        verify::bvar_properties(36, 16, 12, 12).into(),
        with_budget(verify::cousin_exactness(2, 8, 50), Duration::from_secs(60)),
        verify::euler_action(2, 12, 3, 3).into(),
        cli_determinism(),
    ];
    for l in &lines {
        println!(
            "{} {:<20} {:>7} ms  {}",
            if l.pass { "PASS" } else { "FAIL" },
            l.name,
            l.elapsed.as_millis(),
            l.detail
        );
    }
    let failed = lines.iter().filter(|l| !l.pass).count();
    println!(
        "{} of {} criteria passed in {:.1} s",
        lines.len() - failed,
        lines.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
