//! Preparing scenario entries into jobs and running them.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use stpro_core::check::{Focus, Status};

use crate::config::{Config, ConfigError, Value};
use crate::jobs::{Job, Keys};
use crate::report::EntryResult;

pub const BUNDLED_SUITE: &str = include_str!("../scenarios/suite.conf");
pub const SUITE_NAME: &str = "paper-suite";

pub const DEFAULT_SEED: u64 = 20240611;
pub const DEFAULT_BUDGET: u64 = 10_000;
pub const SEED_ENV: &str = "STPRO_SEED";

pub struct Prepared {
    pub name: String,
    pub kind: String,
    pub keys: BTreeMap<String, String>,
    pub job: Job,
    pub seed: u64,
    pub budget: u64,
    pub expect: Status,
    pub criterion: Option<String>,
}

/// The seed used when an entry has none: `STPRO_SEED`, else [`DEFAULT_SEED`].
pub fn default_seed() -> Result<u64, ConfigError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| ConfigError::new(SEED_ENV, 0, format!("expected an integer seed, found {v:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

pub fn prepare(source: &str, name: &str, line: usize, map: &BTreeMap<String, Value>, seed: u64) -> Result<Prepared, ConfigError> {
    let keys = Keys::new(source, line, map);
    let kind = keys
        .get("check")
        .ok_or_else(|| ConfigError::new(source, line, format!("entry [{name}] has no `check` key")))?
        .text
        .clone();
    let seed = keys.u64_or("seed", seed)?;
    let budget = keys.u64_or("budget", DEFAULT_BUDGET)?;
    let expect = match keys.get("expect") {
        None => Status::Pass,
        Some(v) if v.text == "pass" => Status::Pass,
        Some(v) if v.text == "fail" => Status::Fail,
        Some(v) => return Err(ConfigError::new(source, v.line, format!("expect must be pass or fail, found {:?}", v.text))),
    };
    let criterion = keys.get("criterion").map(|v| v.text.clone());
    let job = Job::build(&kind, &keys)?;
    Ok(Prepared {
        name: name.to_string(),
        kind,
        keys: map.iter().map(|(k, v)| (k.clone(), v.text.clone())).collect(),
        job,
        seed,
        budget,
        expect,
        criterion,
    })
}

/// Builds every entry before anything runs, so configuration errors surface first.
pub fn load(cfg: &Config, seed: u64) -> Result<Vec<Prepared>, ConfigError> {
    cfg.entries.iter().map(|e| prepare(&cfg.source, &e.name, e.line, &cfg.resolved(e), seed)).collect()
}

/// A replay spec: the resolved keys of an entry as a flat string map.
pub fn from_spec(spec: &BTreeMap<String, String>, seed: u64) -> Result<Prepared, ConfigError> {
    let map: BTreeMap<String, Value> = spec.iter().map(|(k, v)| (k.clone(), Value { text: v.clone(), line: 0 })).collect();
    prepare("--spec", "replay", 0, &map, seed)
}

pub fn run_one(p: &Prepared, focus: Option<Focus>) -> EntryResult {
    let start = Instant::now();
    let report = p.job.run(p.seed, p.budget, focus);
    EntryResult {
        name: p.name.clone(),
        kind: p.kind.clone(),
        keys: p.keys.clone(),
        seed: p.seed,
        budget: p.budget,
        expect: p.expect,
        criterion: p.criterion.clone(),
        report,
        elapsed: start.elapsed(),
    }
}

/// Runs entries on up to `threads` workers; results come back in entry order.
pub fn run_all(entries: &[Prepared], threads: usize) -> Vec<EntryResult> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<EntryResult>>> = Mutex::new((0..entries.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..threads.clamp(1, entries.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(p) = entries.get(i) else { break };
                let r = run_one(p, None);
                slots.lock().expect("no worker panicked holding the lock")[i] = Some(r);
            });
        }
    });
    slots.into_inner().expect("workers joined").into_iter().map(|r| r.expect("every entry ran")).collect()
}

pub fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_suite_parses() {
        let cfg = Config::parse(SUITE_NAME, BUNDLED_SUITE).unwrap();
        let entries = load(&cfg, 1).unwrap();
        assert!(entries.iter().any(|e| e.expect == Status::Fail));
        let mut crit: Vec<u32> = entries.iter().filter_map(|e| e.criterion.as_ref()?.parse().ok()).collect();
        crit.sort();
        crit.dedup();
        assert_eq!(crit, (1..=9).collect::<Vec<_>>());
    }

    #[test]
    fn unknown_keys_and_tags_are_located() {
        let cfg = Config::parse("s", "[a]\ncheck = steinberg\nalgebra = m4:z9999x\n").unwrap();
        let e = load(&cfg, 1).err().unwrap();
        assert_eq!(e.line, 3);
        let cfg = Config::parse("s", "[a]\ncheck = roots\nphi = A2\nfoo = 1\n").unwrap();
        let e = load(&cfg, 1).err().unwrap();
        assert_eq!((e.line, e.message.contains("foo")), (4, true));
    }

    #[test]
    fn concurrent_runs_keep_order() {
        let cfg = Config::parse("s", "[a]\ncheck = roots\nphi = A2\n[b]\ncheck = roots\nphi = B2\n[c]\ncheck = roots\nphi = BC2\n").unwrap();
        let entries = load(&cfg, 1).unwrap();
        let names: Vec<String> = run_all(&entries, 3).into_iter().map(|r| r.name).collect();
        assert_eq!(names, ["a", "b", "c"]);
    }
}
