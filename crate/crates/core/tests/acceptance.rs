//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

use spectral_tail::verify::{run_acceptance, VerifyConfig};

/// Runtime budgets in seconds, enforced for optimized builds only.
fn budget(id: &str) -> Option<f64> {
    match id {
        "1" => Some(1.0),
        "2a" | "2b" => Some(5.0),
        "3" => Some(10.0),
        "5" => Some(30.0),
        _ => None,
    }
}

fn main() {
    let checks = run_acceptance(&VerifyConfig::default());
    let timed = !cfg!(debug_assertions);
    let mut failed = Vec::new();
    let mut total = 0.0;
    for c in &checks {
        total += c.seconds;
        let over = timed && budget(&c.id).is_some_and(|b| c.seconds > b);
        let pass = c.passed && !over;
        let budget_note = if over { format!(" [over {}s budget]", budget(&c.id).unwrap()) } else { String::new() };
        println!(
            "{} {:<3} {}: {} ({:.2}s){}",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.description,
            c.detail,
            c.seconds,
            budget_note
        );
        if !pass {
            failed.push(c.id.clone());
        }
    }
    println!("acceptance: {} of {} passed in {:.1}s", checks.len() - failed.len(), checks.len(), total);
    if !failed.is_empty() {
        println!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}
