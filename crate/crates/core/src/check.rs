//! Identity-verification harness shared by every checker.
//!
//! Each named identity is evaluated on a sequence of instances. Sampled
//! instances draw from a generator seeded by `(seed, name, index)` only, so a
//! single failing instance can be replayed without re-running the others.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Inconclusive => "inconclusive",
            Status::Fail => "fail",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub index: u64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub name: String,
    pub evaluated: u64,
    pub status: Status,
    pub witness: Option<Witness>,
    pub note: Option<String>,
}

/// The outcomes of one check, in evaluation order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub outcomes: Vec<Outcome>,
}

impl Report {
    pub fn status(&self) -> Status {
        self.outcomes.iter().map(|o| o.status).max().unwrap_or(Status::Pass)
    }

    pub fn passed(&self) -> bool {
        self.status() == Status::Pass
    }

    pub fn get(&self, name: &str) -> Option<&Outcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Outcome> {
        self.outcomes.iter().filter(|o| o.status == Status::Fail)
    }

    pub fn extend(&mut self, other: Report) {
        self.outcomes.extend(other.outcomes);
    }

    /// Prefixes every identity name, for nesting sub-checks.
    pub fn prefixed(mut self, prefix: &str) -> Report {
        for o in &mut self.outcomes {
            o.name = alloc::format!("{prefix}/{}", o.name);
        }
        self
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// The generator for instance `index` of identity `name`.
pub fn instance_rng(seed: u64, name: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix(seed ^ splitmix(fnv1a(name) ^ splitmix(index))))
}

/// Restricts a run to one identity instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Focus {
    pub name: String,
    pub index: u64,
}

pub struct Checker {
    pub seed: u64,
    pub budget: u64,
    focus: Option<Focus>,
    report: Report,
}

impl Checker {
    pub fn new(seed: u64, budget: u64) -> Checker {
        Checker { seed, budget, focus: None, report: Report::default() }
    }

    pub fn focused(seed: u64, budget: u64, focus: Focus) -> Checker {
        Checker { seed, budget, focus: Some(focus), report: Report::default() }
    }

    fn skip(&self, name: &str) -> bool {
        matches!(&self.focus, Some(f) if f.name != name)
    }

    fn range(&self, count: u64) -> core::ops::Range<u64> {
        match &self.focus {
            Some(f) if f.index < count => f.index..f.index + 1,
            Some(_) => 0..0,
            None => 0..count,
        }
    }

    fn record(&mut self, name: &str, evaluated: u64, failure: Option<Witness>) {
        let status = if failure.is_some() { Status::Fail } else { Status::Pass };
        self.report.outcomes.push(Outcome {
            name: String::from(name),
            evaluated,
            status,
            witness: failure,
            note: None,
        });
    }

    /// Evaluates `count` random instances of an identity, stopping at the first failure.
    pub fn sampled<F>(&mut self, name: &str, count: u64, mut f: F)
    where
        F: FnMut(&mut ChaCha8Rng) -> Result<(), String>,
    {
        if self.skip(name) {
            return;
        }
        let mut evaluated = 0;
        for index in self.range(count) {
            let mut rng = instance_rng(self.seed, name, index);
            evaluated += 1;
            if let Err(detail) = f(&mut rng) {
                self.record(name, evaluated, Some(Witness { index, detail }));
                return;
            }
        }
        self.record(name, evaluated, None);
    }

    /// Evaluates an identity on instances `0..count` decoded from their index.
    pub fn exhaustive<F>(&mut self, name: &str, count: u64, mut f: F)
    where
        F: FnMut(u64) -> Result<(), String>,
    {
        if self.skip(name) {
            return;
        }
        let mut evaluated = 0;
        for index in self.range(count) {
            evaluated += 1;
            if let Err(detail) = f(index) {
                self.record(name, evaluated, Some(Witness { index, detail }));
                return;
            }
        }
        self.record(name, evaluated, None);
    }

    /// Exhaustive when `count ≤ budget`, otherwise `budget` samples.
    pub fn auto<F, G>(&mut self, name: &str, count: u64, exhaustive: F, sampled: G)
    where
        F: FnMut(u64) -> Result<(), String>,
        G: FnMut(&mut ChaCha8Rng) -> Result<(), String>,
    {
        if count <= self.budget {
            self.exhaustive(name, count, exhaustive);
        } else {
            let b = self.budget;
            self.sampled(name, b, sampled);
        }
    }

    pub fn single<F>(&mut self, name: &str, f: F)
    where
        F: FnOnce() -> Result<(), String>,
    {
        self.exhaustive_once(name, f);
    }

    fn exhaustive_once<F: FnOnce() -> Result<(), String>>(&mut self, name: &str, f: F) {
        if self.skip(name) || self.range(1).is_empty() {
            return;
        }
        let failure = f().err().map(|detail| Witness { index: 0, detail });
        self.record(name, 1, failure);
    }

    pub fn inconclusive(&mut self, name: &str, note: String) {
        if self.skip(name) {
            return;
        }
        self.report.outcomes.push(Outcome {
            name: String::from(name),
            evaluated: 0,
            status: Status::Inconclusive,
            witness: None,
            note: Some(note),
        });
    }

    pub fn note(&mut self, note: String) {
        if let Some(last) = self.report.outcomes.last_mut() {
            last.note = Some(note);
        }
    }

    /// Records every outcome of a sub-report verbatim.
    pub fn merge(&mut self, other: Report) {
        for o in other.outcomes {
            if !self.skip(&o.name) {
                self.report.outcomes.push(o);
            }
        }
    }

    pub fn focus(&self) -> Option<&Focus> {
        self.focus.as_ref()
    }

    pub fn finish(self) -> Report {
        self.report
    }
}

/// `Ok(())` when `a == b`, otherwise a formatted mismatch.
pub fn expect_eq<T: PartialEq + fmt::Debug>(what: &str, a: &T, b: &T) -> Result<(), String> {
    if a == b {
        Ok(())
    } else {
        Err(alloc::format!("{what}: {a:?} != {b:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_core::RngCore;

    #[test]
    fn replay_reproduces_instance() {
        let mut full = Checker::new(42, 100);
        let mut seen = Vec::new();
        full.sampled("x", 20, |rng| {
            let v = rng.next_u64();
            seen.push(v);
            if v % 7 == 3 { Err(alloc::format!("{v}")) } else { Ok(()) }
        });
        let report = full.finish();
        if let Some(w) = &report.outcomes[0].witness {
            let mut one = Checker::focused(42, 100, Focus { name: "x".into(), index: w.index });
            one.sampled("x", 20, |rng| {
                let v = rng.next_u64();
                if v % 7 == 3 { Err(alloc::format!("{v}")) } else { Ok(()) }
            });
            let r = one.finish();
            assert_eq!(r.outcomes[0].witness, report.outcomes[0].witness);
        }
    }

    #[test]
    fn worst_status_wins() {
        let mut c = Checker::new(1, 10);
        c.single("a", || Ok(()));
        c.inconclusive("b", "overflow".into());
        assert_eq!(c.finish().status(), Status::Inconclusive);
        let mut c = Checker::new(1, 10);
        c.single("a", || Err("no".into()));
        c.inconclusive("b", "overflow".into());
        assert_eq!(c.finish().status(), Status::Fail);
    }
}
