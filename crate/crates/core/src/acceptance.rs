//! The acceptance criteria: each runs its suites at the stated count and must finish within its
//! time limit.

use std::time::{Duration, Instant};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::suites::{find_suite, SuiteRun, SUITES};

pub const SEED: u64 = 20_241_017;

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub ok: bool,
    pub detail: String,
}

fn run(id: &str, count: usize) -> SuiteRun {
    find_suite(id).expect("registered suite").run(count, SEED)
}

fn tally(r: &SuiteRun) -> String {
    format!(
        "{} {}/{}/{} pass/fail/skip",
        r.suite, r.passed, r.failed, r.skipped
    )
}

fn first_failure(r: &SuiteRun) -> String {
    r.instances
        .iter()
        .find(|i| i.failed())
        .map(|i| format!(" first failure: {}", serde_json::to_string(i).unwrap()))
        .unwrap_or_default()
}

fn all_pass(runs: &[SuiteRun], extra: impl Fn(&SuiteRun) -> Option<String>) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in runs {
        let mut line = tally(r);
        if !r.ok() {
            ok = false;
            line += &first_failure(r);
        }
        if let Some(problem) = extra(r) {
            ok = false;
            line += &format!(" ({problem})");
        }
        parts.push(line);
    }
    Outcome {
        ok,
        detail: parts.join("; "),
    }
}

fn oracle() -> Outcome {
    all_pass(&[run("oracle-pushout", 200)], |r| {
        (r.passed < 150).then(|| format!("only {} of 200 stabilized", r.passed))
    })
}

fn product_squares() -> Outcome {
    all_pass(&[run("product-square", 100)], |r| {
        (r.passed != 100).then(|| "every square must be checked".into())
    })
}

fn decomposition() -> Outcome {
    all_pass(&[run("decomposition", 50)], |r| {
        (r.passed != 50).then(|| "needs 50 stabilized traces".into())
    })
}

fn preservation() -> Outcome {
    all_pass(&[run("dk-preservation", 50)], |r| {
        (r.skipped * 10 >= r.count * 3).then(|| format!("skip rate {}/{}", r.skipped, r.count))
    })
}

fn cells() -> Outcome {
    all_pass(&[run("local-cofibration", 50), run("k-cell", 50)], |r| {
        (r.passed != 50).then(|| "every instance must be decided".into())
    })
}

fn monoidal() -> Outcome {
    all_pass(
        &[run("graph-monoidal", 100), run("free-adjunction", 50)],
        |r| (r.passed != r.count).then(|| "every instance must be decided".into()),
    )
}

fn pushout_product_axiom() -> Outcome {
    all_pass(&[run("pushout-product-axiom", 1)], |r| {
        (r.passed != 1).then(|| "not decided".into())
    })
}

fn pi0() -> Outcome {
    all_pass(&[run("pi0-oracle", 100), run("pi0-dk", 30)], |r| {
        (r.passed != r.count).then(|| "every instance must be decided".into())
    })
}

fn determinism() -> Outcome {
    let digest = || {
        let mut h = Sha256::new();
        for s in SUITES {
            let r = s.run(s.default_count, SEED);
            h.update(serde_json::to_vec(&r).expect("reports serialize"));
        }
        hex::encode(h.finalize())
    };
    let hashes: Vec<String> = (0..3).map(|_| digest()).collect();
    let ok = hashes.windows(2).all(|w| w[0] == w[1]);
    Outcome {
        ok,
        detail: format!("sha256 {}", &hashes[0][..16]),
    }
}

pub struct Criterion {
    pub name: &'static str,
    pub limit_secs: u64,
    check: fn() -> Outcome,
}

pub const CRITERIA: [Criterion; 9] = [
    Criterion {
        name: "free push-outs agree with the word oracle",
        limit_secs: 60,
        check: oracle,
    },
    Criterion {
        name: "push-out products of push-out squares",
        limit_secs: 30,
        check: product_squares,
    },
    Criterion {
        name: "decomposition views and special cases",
        limit_secs: 300,
        check: decomposition,
    },
    Criterion {
        name: "hes and DK-equivalences survive push-outs",
        limit_secs: 300,
        check: preservation,
    },
    Criterion {
        name: "I-cells are local cofibrations, J-cells are K-cells",
        limit_secs: 120,
        check: cells,
    },
    Criterion {
        name: "graph tensor and free/forget round trips",
        limit_secs: 60,
        check: monoidal,
    },
    Criterion {
        name: "push-out product axiom at generators",
        limit_secs: 10,
        check: pushout_product_axiom,
    },
    Criterion {
        name: "π₀ sizes and π₀ of DK-equivalences",
        limit_secs: 60,
        check: pi0,
    },
    Criterion {
        name: "byte-identical reports across 3 runs",
        limit_secs: 600,
        check: determinism,
    },
];

impl Criterion {
    /// The outcome, failed if it took longer than the limit, and the wall time.
    pub fn run(&self) -> (Outcome, Duration) {
        let start = Instant::now();
        let mut out = (self.check)();
        let took = start.elapsed();
        if took > Duration::from_secs(self.limit_secs) {
            out.ok = false;
        }
        (out, took)
    }

    /// One pass/fail line.
    pub fn line(&self, out: &Outcome, took: Duration) -> String {
        format!(
            "{} {}: {} [{:.2}s / {}s]",
            if out.ok { "PASS" } else { "FAIL" },
            self.name,
            out.detail,
            took.as_secs_f64(),
            self.limit_secs
        )
    }
}
