//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::Instant;

use tc_core::arnold::{build_presentation, stability_check, ArnoldAlgebra, Edge};
use tc_core::bounds::{assemble_report, closed_form_tc, ReportStatus};
use tc_core::field::{FieldSpec, Rationals};
use tc_core::selftest::{run_selftest, SelftestConfig};
use tc_core::tensor::{bar, tensor_multiply, TensorElement};
use tc_core::zero_divisors::{bar_span_dims, bar_span_length, zero_divisor_cuplength, Caps};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn grid_certification() -> Outcome {
    let mut cells: Vec<(u32, u32)> = (2..=7).flat_map(|m| [(m, 2), (m, 3)]).collect();
    cells.extend((2..=5).map(|m| (m, 4)));
    for &(m, n) in &cells {
        let r = assemble_report(m, n, FieldSpec::Rational, &Caps::default()).map_err(|e| e.to_string())?;
        let expected = if m % 2 == 1 { 2 * n - 1 } else { 2 * n - 2 };
        let ok = r.status == ReportStatus::Pinched
            && r.pinched
            && r.lower == Some(expected)
            && r.upper == Some(expected)
            && r.closed_form == expected
            && closed_form_tc(m, n) == Ok(expected);
        if !ok {
            return Err(r.summary_line());
        }
    }
    Ok(format!("{} cells pinched at the closed form", cells.len()))
}

/// Every product of `k` generator bars, multiplied out directly.
fn all_bar_products_vanish(alg: &ArnoldAlgebra, k: usize) -> bool {
    let p = alg.presentation();
    let bars: Vec<TensorElement> = p
        .generators()
        .iter()
        .map(|e: &Edge| bar(&p.straighten(&[*e]).unwrap()).unwrap())
        .collect();
    // multisets suffice: bars of odd-degree classes anticommute, even ones commute
    fn go(alg: &ArnoldAlgebra, bars: &[TensorElement], from: usize, left: usize, acc: &TensorElement) -> bool {
        if acc.is_zero() {
            return true;
        }
        if left == 0 {
            return false;
        }
        (from..bars.len()).all(|i| go(alg, bars, i, left - 1, &tensor_multiply(alg, acc, &bars[i]).unwrap()))
    }
    go(alg, &bars, 0, k, &TensorElement::one(p))
}

fn parity_dichotomy() -> Outcome {
    let caps = Caps::default();
    let mut notes = Vec::new();
    for m in [2u32, 4, 6] {
        let alg = ArnoldAlgebra::new(build_presentation(3, m.into()).unwrap());
        let len = bar_span_length(&alg, Rationals, &caps).map_err(|e| e.to_string())?;
        let dims = bar_span_dims(&alg, Rationals);
        let v4 = dims.get(3).copied().unwrap_or(0);
        if len != 3 || v4 != 0 || !all_bar_products_vanish(&alg, 4) {
            return Err(format!("m={m}: length {len}, dims {dims:?}"));
        }
        notes.push(format!("m={m}:3"));
    }
    for m in [3u32, 5] {
        let alg = ArnoldAlgebra::new(build_presentation(3, m.into()).unwrap());
        let len = bar_span_length(&alg, Rationals, &caps).map_err(|e| e.to_string())?;
        if len < 4 {
            return Err(format!("m={m}: length {len}"));
        }
        notes.push(format!("m={m}:{len}"));
    }
    Ok(format!("bar span lengths {}", notes.join(" ")))
}

fn sphere_sanity() -> Outcome {
    for m in 2u32..=9 {
        let alg = ArnoldAlgebra::new(build_presentation(2, m.into()).unwrap());
        let zcl = zero_divisor_cuplength(&alg, Rationals, &Caps::default()).map_err(|e| e.to_string())?;
        let expected = if m % 2 == 1 { 2 } else { 1 };
        if zcl != expected {
            return Err(format!("m={m}: zcl {zcl}, expected {expected}"));
        }
    }
    Ok("zcl 2 for odd m, 1 for even m, m in 2..=9".to_string())
}

fn ring_oracles() -> Outcome {
    let cfg = SelftestConfig::default();
    let results = run_selftest(&cfg);
    let cells = cfg.max_n as usize * cfg.dimensions.len();
    for r in &results {
        if let Some(f) = &r.failure {
            return Err(format!("{}: {f}", r.name));
        }
    }
    let count = |name: &str| results.iter().find(|r| r.name == name).map_or(0, |r| r.passed);
    let enough = count("associativity") >= 1000 * cells
        && count("graded-commutativity") >= 1000 * cells
        && count("confluence") >= 100
        && cfg.confluence_shuffles >= 100
        && cfg.rank_max_n >= 5
        && count("rank-consistency") > 0;
    if !enough {
        return Err(format!("too few cases: {results:?}"));
    }
    let summary: Vec<String> = results.iter().map(|r| format!("{} {}", r.name, r.passed)).collect();
    Ok(summary.join(", "))
}

fn stability() -> Outcome {
    for n in 1..=4 {
        for m in [4, 6] {
            match stability_check(n, m) {
                Ok(true) => {}
                other => return Err(format!("n={n} m={m}: {other:?}")),
            }
        }
    }
    Ok("m=4 and m=6 tables match m=2 for n <= 4".to_string())
}

fn characteristic_two() -> Outcome {
    let r = assemble_report(3, 2, FieldSpec::Prime(2), &Caps::default()).map_err(|e| e.to_string())?;
    let ok = r.lower == Some(2)
        && !r.pinched
        && r.status == ReportStatus::Unpinched
        && r.field_used == FieldSpec::Prime(2)
        && !r.warnings.is_empty();
    if ok {
        Ok(r.summary_line())
    } else {
        Err(format!("{r:?}"))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("grid certification", grid_certification),
        ("parity dichotomy at n=3", parity_dichotomy),
        ("sphere sanity", sphere_sanity),
        ("ring oracle suite", ring_oracles),
        ("stability isomorphism", stability),
        ("characteristic sensitivity", characteristic_two),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(note) => println!("PASS {} {name} ({secs:.1}s): {note}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name} ({secs:.1}s): {why}", k + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
