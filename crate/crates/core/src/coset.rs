//! Finitely presented groups and Todd–Coxeter coset enumeration (HLT with lookahead).

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::freegroup::{self, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<String>) -> Presentation {
        Presentation { generators, relators: Vec::new() }
    }

    /// Adds the freely reduced relator unless it is trivial or already present.
    pub fn relate(&mut self, w: &[Letter]) {
        let w = freegroup::reduce(w);
        if !w.is_empty() && !self.relators.contains(&w) {
            self.relators.push(w);
        }
    }

    /// Adds `lhs · rhs⁻¹`.
    pub fn equate(&mut self, lhs: &[Letter], rhs: &[Letter]) {
        self.relate(&freegroup::concat(&[lhs, &freegroup::inverse(rhs)]));
    }

    pub fn is_well_formed(&self) -> bool {
        let n = self.generators.len() as Letter;
        self.relators.iter().all(|w| w.iter().all(|&l| l != 0 && l.abs() <= n))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumError {
    Overflow { limit: usize },
}

impl fmt::Display for EnumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnumError::Overflow { limit } => write!(f, "coset enumeration exceeded {limit} cosets"),
        }
    }
}

impl core::error::Error for EnumError {}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumStats {
    pub defined: usize,
    pub max_live: usize,
    pub lookaheads: usize,
}

/// A complete coset table; coset `0` is the subgroup itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    pub generators: usize,
    cosets: usize,
    rows: Vec<u32>,
    pub stats: EnumStats,
}

const NONE: u32 = u32::MAX;

fn col(l: Letter) -> usize {
    2 * (l.unsigned_abs() as usize - 1) + usize::from(l < 0)
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.cosets
    }

    pub fn act(&self, coset: usize, l: Letter) -> usize {
        self.rows[coset * 2 * self.generators + col(l)] as usize
    }

    pub fn trace(&self, coset: usize, w: &[Letter]) -> usize {
        w.iter().fold(coset, |c, &l| self.act(c, l))
    }

    /// Every relator fixes every coset.
    pub fn satisfies(&self, relators: &[Word]) -> bool {
        (0..self.index()).all(|c| relators.iter().all(|r| self.trace(c, r) == c))
    }

    /// Shortest words reaching each coset from coset `0` (breadth first, generators in order).
    pub fn transversal(&self) -> Vec<Word> {
        let mut words: Vec<Option<Word>> = vec![None; self.index()];
        words[0] = Some(Word::new());
        let mut queue = vec![0usize];
        let mut i = 0;
        while i < queue.len() {
            let c = queue[i];
            i += 1;
            for g in 0..self.generators as Letter {
                for l in [g + 1, -(g + 1)] {
                    let d = self.act(c, l);
                    if words[d].is_none() {
                        let mut w = words[c].clone().unwrap_or_default();
                        w.push(l);
                        words[d] = Some(w);
                        queue.push(d);
                    }
                }
            }
        }
        words.into_iter().map(|w| w.unwrap_or_default()).collect()
    }
}

struct Enumerator<'a> {
    width: usize,
    rows: Vec<u32>,
    parent: Vec<u32>,
    queue: Vec<u32>,
    live: usize,
    limit: usize,
    relators: &'a [Word],
    stats: EnumStats,
}

impl Enumerator<'_> {
    fn get(&self, c: u32, k: usize) -> u32 {
        self.rows[c as usize * self.width + k]
    }

    fn set(&mut self, c: u32, k: usize, d: u32) {
        self.rows[c as usize * self.width + k] = d;
    }

    fn is_live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn define(&mut self, c: u32, k: usize) -> Result<u32, EnumError> {
        if self.live >= self.limit {
            self.lookahead();
            if self.live >= self.limit {
                return Err(EnumError::Overflow { limit: self.limit });
            }
            // the caller restarts, since cosets may have been merged
            return Ok(NONE);
        }
        let d = self.parent.len() as u32;
        self.parent.push(d);
        self.rows.extend(core::iter::repeat(NONE).take(self.width));
        self.live += 1;
        self.stats.defined += 1;
        self.stats.max_live = self.stats.max_live.max(self.live);
        self.set(c, k, d);
        self.set(d, k ^ 1, c);
        Ok(d)
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut x = c;
        while self.parent[x as usize] != r {
            let next = self.parent[x as usize];
            self.parent[x as usize] = r;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, drop) = if a < b { (a, b) } else { (b, a) };
        self.parent[drop as usize] = keep;
        self.live -= 1;
        self.queue.push(drop);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let e = self.queue[i];
            i += 1;
            for k in 0..self.width {
                let f = self.get(e, k);
                if f == NONE {
                    continue;
                }
                if self.get(f, k ^ 1) == e {
                    self.set(f, k ^ 1, NONE);
                }
                let (e1, f1) = (self.rep(e), self.rep(f));
                let t = self.get(e1, k);
                if t != NONE {
                    self.merge(f1, t);
                } else {
                    let u = self.get(f1, k ^ 1);
                    if u != NONE {
                        self.merge(e1, u);
                    } else {
                        self.set(e1, k, f1);
                        self.set(f1, k ^ 1, e1);
                    }
                }
            }
        }
        self.queue.clear();
    }

    /// Scans `w` at coset `c`; with `fill`, defines missing cosets so the scan completes.
    fn scan(&mut self, c: u32, w: &[Letter], fill: bool) -> Result<(), EnumError> {
        let n = w.len();
        let (mut f, mut i) = (c, 0usize);
        let (mut b, mut j) = (c, n);
        loop {
            while i < j {
                let next = self.get(f, col(w[i]));
                if next == NONE {
                    break;
                }
                f = next;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i {
                let next = self.get(b, col(w[j - 1]) ^ 1);
                if next == NONE {
                    break;
                }
                b = next;
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                let k = col(w[i]);
                self.set(f, k, b);
                self.set(b, k ^ 1, f);
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            if self.define(f, col(w[i]))? == NONE {
                return Ok(());
            }
        }
    }

    fn lookahead(&mut self) {
        self.stats.lookaheads += 1;
        let rels = self.relators;
        let mut c = 0;
        while (c as usize) < self.parent.len() {
            for r in rels {
                if !self.is_live(c) {
                    break;
                }
                let _ = self.scan(c, r, false);
            }
            c += 1;
        }
    }
}

/// Enumerates the cosets of the subgroup generated by `subgroup` in the presented group.
///
/// Processing order is fixed, so the table is a deterministic function of the input.
pub fn todd_coxeter(
    p: &Presentation,
    subgroup: &[Word],
    limit: usize,
) -> Result<CosetTable, EnumError> {
    let width = 2 * p.generators.len().max(1);
    let mut e = Enumerator {
        width,
        rows: vec![NONE; width],
        parent: vec![0],
        queue: Vec::new(),
        live: 1,
        limit,
        relators: &p.relators,
        stats: EnumStats { defined: 1, max_live: 1, lookaheads: 0 },
    };
    loop {
        let seen = e.stats.lookaheads;
        for w in subgroup {
            e.scan(0, w, true)?;
        }
        if e.stats.lookaheads == seen {
            break;
        }
    }
    let mut c = 0u32;
    while (c as usize) < e.parent.len() {
        let seen = e.stats.lookaheads;
        for r in &p.relators {
            if !e.is_live(c) {
                break;
            }
            e.scan(c, r, true)?;
        }
        if e.is_live(c) {
            for k in 0..2 * p.generators.len() {
                if e.get(c, k) == NONE {
                    e.define(c, k)?;
                }
                if !e.is_live(c) || e.stats.lookaheads != seen {
                    break;
                }
            }
        }
        if e.stats.lookaheads == seen || !e.is_live(c) {
            c += 1;
        }
    }
    // compact live cosets in order of definition
    let mut renum = vec![NONE; e.parent.len()];
    let mut next = 0u32;
    for c in 0..e.parent.len() as u32 {
        if e.is_live(c) {
            renum[c as usize] = next;
            next += 1;
        }
    }
    let gens = p.generators.len();
    let mut rows = Vec::with_capacity(next as usize * 2 * gens);
    for c in 0..e.parent.len() as u32 {
        if e.is_live(c) {
            for k in 0..2 * gens {
                let d = e.get(c, k);
                rows.push(renum[e.rep(d) as usize]);
            }
        }
    }
    Ok(CosetTable { generators: gens, cosets: next as usize, rows, stats: e.stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;

    fn pres(n: usize, rels: &[&[Letter]]) -> Presentation {
        let mut p = Presentation::new((0..n).map(|i| format!("g{i}")).collect());
        for r in rels {
            p.relate(r);
        }
        p
    }

    #[test]
    fn small_groups() {
        let t = todd_coxeter(&pres(0, &[]), &[], 10).unwrap();
        assert_eq!(t.index(), 1);
        let t = todd_coxeter(&pres(1, &[&[1; 5]]), &[], 100).unwrap();
        assert_eq!(t.index(), 5);
        // S3 = ⟨a, b | a², b³, (ab)²⟩
        let p = pres(2, &[&[1, 1], &[2, 2, 2], &[1, 2, 1, 2]]);
        let t = todd_coxeter(&p, &[], 100).unwrap();
        assert_eq!(t.index(), 6);
        assert!(t.satisfies(&p.relators));
        assert_eq!(todd_coxeter(&p, &[vec![1]], 100).unwrap().index(), 3);
        assert_eq!(t.transversal().len(), 6);
    }

    #[test]
    fn overflow_is_reported() {
        // the free group on one generator has infinitely many cosets
        let p = pres(1, &[]);
        assert_eq!(todd_coxeter(&p, &[], 50), Err(EnumError::Overflow { limit: 50 }));
    }

    #[test]
    fn larger_group() {
        // ⟨a, b | a², b³, (ab)⁷, [a, b]^4⟩ has order 168
        let p = pres(2, &[&[1, 1], &[2, 2, 2], &[1, 2].repeat(7), &[1, 2, -1, -2].repeat(4)]);
        let t = todd_coxeter(&p, &[], 100_000).unwrap();
        assert_eq!(t.index(), 168);
        assert!(t.satisfies(&p.relators));
    }
}

#[cfg(test)]
mod lookahead_tests {
    use super::*;
    use alloc::format;

    #[test]
    fn tight_limits_either_succeed_or_overflow() {
        let mut p = Presentation::new((0..2).map(|i| format!("g{i}")).collect());
        for r in [vec![1, 1], vec![2, 2, 2], [1, 2].repeat(7), [1, 2, -1, -2].repeat(4)] {
            p.relate(&r);
        }
        let free = todd_coxeter(&p, &[], 1_000_000).unwrap();
        for limit in [168, 180, 200, 250, 400, free.stats.max_live] {
            match todd_coxeter(&p, &[], limit) {
                Ok(t) => {
                    assert_eq!(t.index(), 168, "limit {limit}");
                    assert!(t.satisfies(&p.relators));
                }
                Err(EnumError::Overflow { .. }) => assert!(limit < free.stats.max_live),
            }
        }
    }
}
