//! Runs the bundled suite and prints one line per acceptance criterion.

use std::process::ExitCode;

use stpro::config::Config;
use stpro::report::{json_lines, EntryResult};
use stpro::scenario::{self, BUNDLED_SUITE, SUITE_NAME};
use stpro_core::check::Status;

const TITLES: [&str; 10] = [
    "commutator relation axioms for A3 over M4(Z/2), M4(Z/4) and BC3 over Z/2",
    "Chevalley maps by peeling, linear oracle over Z/4",
    "odd form and hyperbolic family axioms, mutations caught",
    "homotope crossed modules for every s in Z/12, transitions to depth 4",
    "cosheaf witnesses over Z/12 with ks = (3,4)",
    "gluing relations, epimorphism witness, commutator expansion",
    "crossed square for M4(Z/4) with X = 2A",
    "Gauss factors over Z/8 and weak action identities over Z/12",
    "coset enumeration of St(A3, M4(F2))",
    "byte-identical machine reports on re-run",
];

struct Ctx<'a> {
    results: &'a [EntryResult],
}

impl Ctx<'_> {
    fn entries(&self, c: u32) -> Vec<&EntryResult> {
        let tag = c.to_string();
        self.results.iter().filter(|r| r.criterion.as_deref() == Some(tag.as_str())).collect()
    }

    fn entry(&self, name: &str) -> Result<&EntryResult, String> {
        self.results.iter().find(|r| r.name == name).ok_or_else(|| format!("entry {name} missing"))
    }
}

fn all_met(entries: &[&EntryResult]) -> Result<(), String> {
    if entries.is_empty() {
        return Err("no entries".into());
    }
    for r in entries {
        if r.verdict() != Status::Pass {
            let why = r
                .report
                .outcomes
                .iter()
                .find(|o| o.status != r.expect)
                .map(|o| format!("{} is {}", o.name, o.status))
                .unwrap_or_default();
            return Err(format!("{} is {} ({why})", r.name, r.verdict()));
        }
    }
    Ok(())
}

/// The named identity passed with at least `min` instances.
fn passed(r: &EntryResult, name: &str, min: u64) -> Result<(), String> {
    let o = r.report.get(name).ok_or_else(|| format!("{}: no identity {name:?}", r.name))?;
    if o.status != Status::Pass || o.evaluated < min {
        return Err(format!("{}: {name:?} is {} after {} instances", r.name, o.status, o.evaluated));
    }
    Ok(())
}

fn failed_with_witness(r: &EntryResult) -> Result<(), String> {
    match r.report.failures().next() {
        Some(o) if o.witness.is_some() => Ok(()),
        _ => Err(format!("{}: negative control produced no witness", r.name)),
    }
}

fn criterion(ctx: &Ctx, c: u32) -> Result<(), String> {
    let es = ctx.entries(c);
    all_met(&es)?;
    match c {
        1 => {
            for name in ["steinberg-a3-z2", "steinberg-a3-z4", "steinberg-bc3-z2"] {
                let r = ctx.entry(name)?;
                passed(r, "product injectivity", 1)?;
                passed(r, "additivity", 1)?;
                passed(r, "commutator formula", 1)?;
            }
            passed(ctx.entry("steinberg-bc3-z2")?, "doubled root identification", 1)
        }
        2 => {
            for name in ["chevalley-a3-z2", "chevalley-a3-z4", "chevalley-bc3-z2"] {
                passed(ctx.entry(name)?, "zero residue after peeling", 1)?;
            }
            // every (p, q) in (Z/4)^2 for every adjacent pair of A3
            passed(ctx.entry("chevalley-a3-z4")?, "adjacent map is the product", 24 * 16)
        }
        3 => {
            for name in ["oddform-z4-m0", "oddform-z4-m1"] {
                let r = ctx.entry(name)?;
                let algebra = r.report.outcomes.iter().filter(|o| !o.name.starts_with("family")).count();
                let family = r.report.outcomes.iter().filter(|o| o.name.starts_with("family")).count();
                if algebra < 10 || family != 6 {
                    return Err(format!("{name}: {algebra} algebra and {family} family identities"));
                }
                for o in &r.report.outcomes {
                    if !o.name.starts_with("family") && o.evaluated < 10_000 {
                        return Err(format!("{name}: {} saw only {} instances", o.name, o.evaluated));
                    }
                }
            }
            failed_with_witness(ctx.entry("oddform-transposed-involution")?)?;
            failed_with_witness(ctx.entry("oddform-minimal-parameter")?)
        }
        4 => {
            let r = ctx.entry("homotopes-z12")?;
            for s in 0..12 {
                passed(r, &format!("s={s}/transition functoriality"), 1)?;
                passed(r, &format!("s={s}/peiffer left"), 12 * 12)?;
                passed(r, &format!("s={s}/transitions compose"), 3)?;
            }
            Ok(())
        }
        5 => {
            // level 1 solves s = 3·3 + 1·4, level 2 solves s^3 = 1·9 + 1·16
            passed(ctx.entry("cosheaf-a3")?, "partition of unity matches", 2)?;
            let a3 = ctx.entry("cosheaf-a3")?;
            let roots = a3.report.outcomes.iter().filter(|o| o.name.ends_with("level 4: v after u is the transition")).count();
            if roots != 12 {
                return Err(format!("cosheaf-a3 covered {roots} roots, expected 12"));
            }
            let bc3 = ctx.entry("cosheaf-bc3")?;
            let ultrashort = bc3.report.outcomes.iter().filter(|o| o.name.ends_with("level 4: v after u is the transition")).count();
            if ultrashort != 6 {
                return Err(format!("cosheaf-bc3 covered {ultrashort} ultrashort roots, expected 6"));
            }
            failed_with_witness(ctx.entry("cosheaf-perturbed")?)
        }
        6 => {
            let r = ctx.entry("gluing-z12")?;
            for m in 0..=4 {
                for id in ["can is a homomorphism", "identification of overlaps", "conjugation across pieces", "epimorphism witness"] {
                    passed(r, &format!("level {m}: {id}"), 1)?;
                }
            }
            passed(r, "free-group commutator expansion", 9)
        }
        7 => {
            let r = ctx.entry("crossed-square-z4")?;
            passed(r, "peiffer identity", 10_000)?;
            passed(r, "uniqueness expansion", 10_000)?;
            let n = r.report.outcomes.len();
            if n < 5 + 15 {
                return Err(format!("only {n} crossed square identities"));
            }
            Ok(())
        }
        8 => {
            passed(ctx.entry("gauss-z8")?, "factors re-multiply", 1000)?;
            for name in ["weak-action-root", "weak-action-torus", "weak-action-mixed"] {
                let r = ctx.entry(name)?;
                for id in ["action is multiplicative", "action respects identification", "action respects conjugation"] {
                    passed(r, &format!("level 3: {id}"), 1)?;
                }
            }
            Ok(())
        }
        9 => {
            let r = ctx.entry("enumerate-a3-f2")?;
            for id in ["enumeration terminates", "canonical map is surjective", "elementary order matches the order formula", "kernel is central", "root elimination preserves the group"] {
                passed(r, id, 1)?;
            }
            let note = r.report.get("enumeration terminates").and_then(|o| o.note.as_deref()).unwrap_or("");
            if !note.contains("|St| = 20160") {
                return Err(format!("unexpected enumeration note {note:?}"));
            }
            Ok(())
        }
        _ => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cfg = Config::parse(SUITE_NAME, BUNDLED_SUITE).expect("bundled suite parses");
    let entries = scenario::load(&cfg, scenario::DEFAULT_SEED).expect("bundled suite loads");
    let threads = scenario::default_threads();
    let first = scenario::run_all(&entries, threads);
    let ctx = Ctx { results: &first };

    let mut verdicts: Vec<Result<(), String>> = (1..=9).map(|c| criterion(&ctx, c)).collect();

    // a different worker count must not change a single byte
    let second = scenario::run_all(&entries, threads % 3 + 2);
    let (a, b) = (json_lines(&first), json_lines(&second));
    verdicts.push(if a == b {
        Ok(())
    } else {
        let line = a.lines().zip(b.lines()).position(|(x, y)| x != y).map_or(0, |i| i + 1);
        Err(format!("reports differ at line {line}"))
    });

    let mut ok = true;
    for (i, v) in verdicts.iter().enumerate() {
        match v {
            Ok(()) => println!("criterion {:>2}: pass  {}", i + 1, TITLES[i]),
            Err(e) => {
                ok = false;
                println!("criterion {:>2}: FAIL  {}: {e}", i + 1, TITLES[i]);
            }
        }
    }
    let secs: f64 = first.iter().map(|r| r.elapsed.as_secs_f64()).sum();
    println!("{} entries, {secs:.1}s of checking per run", first.len());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
