//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ninf::verify::{verify, VerificationOutcome};

struct Criterion {
    id: u32,
    title: &'static str,
    suite: &'static str,
    seed: u64,
    count: usize,
    /// Wall-clock limit, where one is part of the criterion.
    limit: Option<Duration>,
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, title: "counterexample witnesses (sum norm)", suite: "counterexample", seed: 0, count: 0, limit: None },
    Criterion { id: 2, title: "hd_s <= pd, sup norm, s <= 4", suite: "sup-hd-vs-pd", seed: 42, count: 100, limit: Some(Duration::from_secs(120)) },
    Criterion { id: 3, title: "tht_i <= pd - 1", suite: "torsion-height", seed: 42, count: 100, limit: None },
    Criterion { id: 4, title: "torsion-free: hd_s <= gd", suite: "torsion-free", seed: 4, count: 50, limit: None },
    Criterion { id: 5, title: "submodules of P(0): hd_1 <= 2 gd, hd_2 <= 2^w hd_1", suite: "sum-submodule", seed: 5, count: 50, limit: None },
    Criterion { id: 6, title: "monomial ideals: resolution degrees within n", suite: "monomial-corollary", seed: 6, count: 20, limit: None },
    Criterion { id: 7, title: "shift and sheafification", suite: "shift-sheafify", seed: 7, count: 50, limit: None },
    Criterion { id: 8, title: "Young lattice harmonic bounds", suite: "young-harmonic", seed: 1, count: 50, limit: None },
    Criterion { id: 9, title: "orbit category, modulus 12", suite: "orbit", seed: 9, count: 25, limit: None },
    Criterion { id: 10, title: "engine vs bar-complex oracle", suite: "oracle-equivalence", seed: 7, count: 50, limit: Some(Duration::from_secs(300)) },
];

fn summary(out: &VerificationOutcome) -> String {
    let mut parts = vec![format!("{} instances", out.instances.len())];
    let failures = out.failures().count();
    parts.push(format!("{failures} failures"));
    for key in ["pd", "hd_3", "hd_4", "tht_1", "gd"] {
        if let Some(v) = out.max_bound(key) {
            parts.push(format!("max {key} = {v}"));
        }
    }
    parts.join(", ")
}

fn main() -> ExitCode {
    let mut all = true;
    for c in CRITERIA {
        let start = Instant::now();
        let result = verify(c.suite, c.seed, c.count);
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(out) => {
                let mut ok = out.passed();
                let mut detail = summary(&out);
                if let Some(limit) = c.limit {
                    if elapsed > limit {
                        ok = false;
                        detail.push_str(&format!(", over the {}s limit", limit.as_secs()));
                    }
                }
                for f in out.failures().take(3) {
                    detail.push_str(&format!("\n    {}: {}", f.label, f.violations.join("; ")));
                }
                (ok, detail)
            }
            Err(e) => (false, format!("error: {e}")),
        };
        all &= ok;
        println!(
            "[{}] criterion {:>2}: {} ({}, seed {}, {:.1}s): {}",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            c.suite,
            c.seed,
            elapsed.as_secs_f64(),
            detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
