//! The nine acceptance criteria, one line each. Exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use contact_lie::audit::shift::shift_check;
use contact_lie::audit::{audit_all, AuditOptions};
use contact_lie::contact::{project_s, volume_multiplier};
use contact_lie::exact::poly::p;
use contact_lie::exact::rat::int;
use contact_lie::verify::{self, Check};

struct Outcome {
    passed: bool,
    note: String,
}

fn all(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

fn failing(checks: &[Check]) -> String {
    let names: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if names.is_empty() {
        String::new()
    } else {
        format!("; failing: {}", names.join(", "))
    }
}

fn criterion_1() -> Outcome {
    let c = verify::classification(8).expect("catalog loads");
    Outcome {
        passed: c.passed,
        note: format!("dims {}", c.detail["dims"]),
    }
}

fn criterion_2() -> Outcome {
    let c = verify::extension_steps();
    Outcome {
        passed: c.passed,
        note: format!("iv summands {}", c.detail["iv"]["summands"]),
    }
}

fn criterion_3() -> Outcome {
    let c = verify::growth_detection(8);
    let paths: Vec<String> = c
        .detail
        .as_array()
        .unwrap()
        .iter()
        .map(|b| format!("{} {}", b["family"], b["path"]))
        .collect();
    Outcome {
        passed: c.passed,
        note: format!("GrowthExceeded for {}", paths.join(", ")),
    }
}

fn criterion_4() -> Outcome {
    let c = verify::bracket_properties(200, 1);
    Outcome {
        passed: c.passed,
        note: format!("200 random pairs and triples, failures {}", c.detail["failures"]),
    }
}

fn criterion_5() -> Outcome {
    let c = verify::printed_action_matrices();
    Outcome {
        passed: c.passed,
        note: format!("{}", c.detail["matrices"]),
    }
}

fn criterion_6() -> Outcome {
    let checks = [
        verify::grading_elements().expect("catalog loads"),
        verify::deformation(),
    ];
    let signs: Vec<String> = ["I.1", "I.2", "I.4", "I.5"]
        .iter()
        .map(|id| {
            format!(
                "{id}:{}",
                checks[0].detail["algebras"][id]["sign"].as_str().unwrap_or("none")
            )
        })
        .collect();
    Outcome {
        passed: all(&checks),
        note: format!(
            "grading element sign {} (convention +(2y-xz)); deformation beta=+1 {} / beta=-1 {}{}",
            signs.join(" "),
            checks[1].detail["beta_plus_one"],
            checks[1].detail["beta_minus_one"],
            failing(&checks)
        ),
    }
}

fn criterion_7() -> Outcome {
    let checks = [
        verify::representations().expect("catalog loads"),
        verify::matrix_models(),
        verify::projection(100, 1).expect("catalog loads"),
    ];
    let f = p("3*y + x^2*z - z^3 + x");
    let volume = project_s(&f).ok().and_then(|(_, pf)| volume_multiplier(&pf).ok()) == Some(int(3));
    let embed: Vec<String> = ["II.1a", "II.1b", "II.2a", "II.2b"]
        .iter()
        .map(|id| {
            let d = &checks[0].detail[id];
            let host = match (d["in_I.1"].as_bool(), d["in_I.4"].as_bool()) {
                (Some(true), Some(true)) => "I.1,I.4",
                (Some(true), _) => "I.1",
                (_, Some(true)) => "I.4",
                _ => "none",
            };
            format!("{id}⊂{host}")
        })
        .collect();
    Outcome {
        passed: all(&checks) && volume,
        note: format!("{}; pi checked on 100 pairs{}", embed.join(" "), failing(&checks)),
    }
}

fn criterion_8() -> Outcome {
    let opts = AuditOptions::default();
    let rows = audit_all(&opts).expect("audit runs");
    let shift = shift_check(&opts).expect("shift check runs");
    let min_margin = rows.iter().map(|r| r.control.margin).fold(f64::INFINITY, f64::min);
    let worst = rows.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    let i4 = rows
        .iter()
        .find(|r| r.case == "I.4" && r.kind.name() == "differential")
        .and_then(|r| r.selected_variant.clone())
        .unwrap_or_else(|| "none".into());
    let failed: Vec<String> = rows
        .iter()
        .filter(|r| !r.verdict.passed())
        .map(|r| format!("{} {}", r.case, r.kind.name()))
        .collect();
    Outcome {
        passed: failed.is_empty() && shift.passed(),
        note: format!(
            "{} rows, worst residual {worst:.1e}, smallest control margin {min_margin:.1e}, I.4 P-variant {i4}, shift {}{}",
            rows.len(),
            if shift.passed() { "ok" } else { "failed" },
            if failed.is_empty() { String::new() } else { format!("; failing: {}", failed.join(", ")) }
        ),
    }
}

fn criterion_9() -> Outcome {
    let (check, resolutions) = verify::typo_resolutions(&AuditOptions::default()).expect("audit runs");
    let required = [
        "I.4: last basis element",
        "radicand of the I.6 integral invariant",
        "P: the term -7/6 D(Q)",
    ];
    let present = required
        .iter()
        .all(|item| resolutions.iter().any(|r| r.item.contains(item)));
    Outcome {
        passed: check.passed && present,
        note: format!("{} explicit resolutions", resolutions.len()),
    }
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("classification reproduction", criterion_1, Duration::from_secs(5)),
        ("extension-step golden values", criterion_2, Duration::from_secs(1)),
        ("growth detection", criterion_3, Duration::from_secs(5)),
        ("bracket kernel properties", criterion_4, Duration::from_secs(5)),
        ("action matrices", criterion_5, Duration::from_secs(5)),
        ("filtered analysis", criterion_6, Duration::from_secs(5)),
        ("filtered algebras and projection", criterion_7, Duration::from_secs(5)),
        ("invariant audit", criterion_8, Duration::from_secs(60)),
        ("typo resolutions", criterion_9, Duration::from_secs(60)),
    ];
    let mut ok = true;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let passed = outcome.passed && in_time;
        ok &= passed;
        let time_note = if in_time {
            String::new()
        } else {
            format!(" over the {budget:?} budget")
        };
        println!(
            "criterion {}: {} {name} ({:.2}s{time_note}): {}",
            i + 1,
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            outcome.note
        );
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
