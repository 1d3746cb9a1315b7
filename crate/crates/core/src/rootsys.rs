//! Irreducible crystallographic root systems, including the non-reduced `BC_ℓ`.
//!
//! Roots are exact integer vectors in the standard realizations (`A_ℓ` inside
//! `ℤ^{ℓ+1}`, the classical types and `BC_ℓ` inside `ℤ^ℓ`, `G_2` inside `ℤ^3`).
//! `E_6`, `E_7`, `E_8` and `F_4` have half-integral coordinates, so their
//! vectors are stored doubled; every operation here is invariant under a
//! common positive scaling.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::lp;

pub const MAX_DIM: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Root(pub [i32; MAX_DIM]);

impl Root {
    pub const ZERO: Root = Root([0; MAX_DIM]);

    pub fn from_slice(c: &[i32]) -> Root {
        let mut r = [0; MAX_DIM];
        r[..c.len()].copy_from_slice(c);
        Root(r)
    }

    pub fn add(&self, o: &Root) -> Root {
        let mut r = self.0;
        for (x, y) in r.iter_mut().zip(o.0) {
            *x += y;
        }
        Root(r)
    }

    pub fn scale(&self, k: i32) -> Root {
        Root(self.0.map(|x| x * k))
    }

    pub fn neg(&self) -> Root {
        self.scale(-1)
    }

    pub fn dot(&self, o: &Root) -> i64 {
        self.0.iter().zip(o.0).map(|(&a, b)| a as i64 * b as i64).sum()
    }
}

/// Root subsets are sets of indices into [`RootSystem::roots`].
pub type RootSubset = BTreeSet<usize>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RootType {
    A,
    B,
    C,
    D,
    E6,
    E7,
    E8,
    F4,
    G2,
    BC,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootError {
    UnknownType(String),
    BadRank(RootType, usize),
    BadRoot(String),
    HalfSpaceViolation,
    DependentRoots,
    TooManyRoots,
}

impl fmt::Display for RootError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootError::UnknownType(t) => write!(f, "unknown root system `{t}`"),
            RootError::BadRank(t, r) => write!(f, "rank {r} is not valid for type {t:?}"),
            RootError::BadRoot(s) => write!(f, "`{s}` is not a root of this system"),
            RootError::HalfSpaceViolation => write!(f, "subset is not contained in an open half-space"),
            RootError::DependentRoots => write!(f, "roots are linearly dependent"),
            RootError::TooManyRoots => write!(f, "subset enumeration supports at most 128 roots"),
        }
    }
}

impl core::error::Error for RootError {}

#[derive(Clone, Debug)]
pub struct RootSystem {
    kind: RootType,
    rank: usize,
    dim: usize,
    scale: i32,
    roots: Vec<Root>,
    index: BTreeMap<Root, usize>,
}

fn e(dim: usize, i: usize) -> Root {
    let mut c = [0; MAX_DIM];
    c[i] = 1;
    let _ = dim;
    Root(c)
}

fn e8_doubled() -> Vec<Root> {
    let mut out = Vec::new();
    for i in 0..8 {
        for j in i + 1..8 {
            for si in [-2, 2] {
                for sj in [-2, 2] {
                    let mut c = [0; MAX_DIM];
                    c[i] = si;
                    c[j] = sj;
                    out.push(Root(c));
                }
            }
        }
    }
    for mask in 0u32..256 {
        if mask.count_ones() % 2 == 0 {
            let mut c = [1; MAX_DIM];
            for (k, x) in c.iter_mut().enumerate() {
                if mask >> k & 1 == 1 {
                    *x = -1;
                }
            }
            out.push(Root(c));
        }
    }
    out
}

impl RootSystem {
    pub fn new(kind: RootType, rank: usize) -> Result<RootSystem, RootError> {
        let bad = Err(RootError::BadRank(kind, rank));
        let (dim, scale, roots): (usize, i32, Vec<Root>) = match kind {
            RootType::A => {
                if rank == 0 || rank + 1 > MAX_DIM {
                    return bad;
                }
                let d = rank + 1;
                let mut rs = Vec::new();
                for i in 0..d {
                    for j in 0..d {
                        if i != j {
                            rs.push(e(d, i).add(&e(d, j).neg()));
                        }
                    }
                }
                (d, 1, rs)
            }
            RootType::B | RootType::C | RootType::D | RootType::BC => {
                let min = match kind {
                    RootType::B | RootType::BC => 1,
                    RootType::C => 2,
                    _ => 3,
                };
                if rank < min || rank > MAX_DIM {
                    return bad;
                }
                let d = rank;
                let mut rs = Vec::new();
                for i in 0..d {
                    for j in i + 1..d {
                        for si in [-1, 1] {
                            for sj in [-1, 1] {
                                rs.push(e(d, i).scale(si).add(&e(d, j).scale(sj)));
                            }
                        }
                    }
                    for s in [-1, 1] {
                        match kind {
                            RootType::B => rs.push(e(d, i).scale(s)),
                            RootType::C => rs.push(e(d, i).scale(2 * s)),
                            RootType::BC => {
                                rs.push(e(d, i).scale(s));
                                rs.push(e(d, i).scale(2 * s));
                            }
                            _ => {}
                        }
                    }
                }
                (d, 1, rs)
            }
            RootType::G2 => {
                if rank != 2 {
                    return bad;
                }
                let mut rs = Vec::new();
                for i in 0..3 {
                    for j in 0..3 {
                        if i != j {
                            rs.push(e(3, i).add(&e(3, j).neg()));
                            let k = 3 - i - j;
                            rs.push(e(3, i).scale(2).add(&e(3, j).neg()).add(&e(3, k).neg()));
                            rs.push(e(3, i).scale(-2).add(&e(3, j)).add(&e(3, k)));
                        }
                    }
                }
                rs.sort();
                rs.dedup();
                (3, 1, rs)
            }
            RootType::F4 => {
                if rank != 4 {
                    return bad;
                }
                let mut rs = Vec::new();
                for i in 0..4 {
                    for s in [-2, 2] {
                        rs.push(e(4, i).scale(s));
                    }
                    for j in i + 1..4 {
                        for si in [-2, 2] {
                            for sj in [-2, 2] {
                                rs.push(e(4, i).scale(si).add(&e(4, j).scale(sj)));
                            }
                        }
                    }
                }
                for mask in 0u32..16 {
                    let mut c = [0; MAX_DIM];
                    for (k, x) in c.iter_mut().take(4).enumerate() {
                        *x = if mask >> k & 1 == 1 { -1 } else { 1 };
                    }
                    rs.push(Root(c));
                }
                (4, 2, rs)
            }
            RootType::E8 | RootType::E7 | RootType::E6 => {
                let want = match kind {
                    RootType::E6 => 6,
                    RootType::E7 => 7,
                    _ => 8,
                };
                if rank != want {
                    return bad;
                }
                // E7 ⟂ (e7 + e8); E6 additionally ⟂ (e6 − e7).
                let v1 = Root::from_slice(&[0, 0, 0, 0, 0, 0, 2, 2]);
                let v2 = Root::from_slice(&[0, 0, 0, 0, 0, 2, -2, 0]);
                let rs = e8_doubled()
                    .into_iter()
                    .filter(|r| kind == RootType::E8 || r.dot(&v1) == 0)
                    .filter(|r| kind != RootType::E6 || r.dot(&v2) == 0)
                    .collect();
                (8, 2, rs)
            }
        };
        let mut roots = roots;
        roots.sort();
        roots.dedup();
        let index = roots.iter().enumerate().map(|(i, r)| (*r, i)).collect();
        Ok(RootSystem { kind, rank, dim, scale, roots, index })
    }

    /// Parses tags like `A3`, `BC3`, `E8`, `G2`.
    pub fn parse(tag: &str) -> Result<RootSystem, RootError> {
        let bad = || RootError::UnknownType(String::from(tag));
        let split = tag.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
        let (letters, digits) = tag.split_at(split);
        let rank: usize = digits.parse().map_err(|_| bad())?;
        let kind = match (letters, rank) {
            ("A", _) => RootType::A,
            ("B", _) => RootType::B,
            ("C", _) => RootType::C,
            ("D", _) => RootType::D,
            ("BC", _) => RootType::BC,
            ("E", 6) => RootType::E6,
            ("E", 7) => RootType::E7,
            ("E", 8) => RootType::E8,
            ("F", 4) => RootType::F4,
            ("G", 2) => RootType::G2,
            _ => return Err(bad()),
        };
        RootSystem::new(kind, rank)
    }

    pub fn kind(&self) -> RootType {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tag(&self) -> String {
        match self.kind {
            RootType::A => format!("A{}", self.rank),
            RootType::B => format!("B{}", self.rank),
            RootType::C => format!("C{}", self.rank),
            RootType::D => format!("D{}", self.rank),
            RootType::BC => format!("BC{}", self.rank),
            RootType::E6 => String::from("E6"),
            RootType::E7 => String::from("E7"),
            RootType::E8 => String::from("E8"),
            RootType::F4 => String::from("F4"),
            RootType::G2 => String::from("G2"),
        }
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn root(&self, i: usize) -> Root {
        self.roots[i]
    }

    pub fn index_of(&self, r: &Root) -> Option<usize> {
        self.index.get(r).copied()
    }

    pub fn neg(&self, i: usize) -> usize {
        self.index[&self.roots[i].neg()]
    }

    /// Index of `2α` when it is a root.
    pub fn double(&self, i: usize) -> Option<usize> {
        self.index_of(&self.roots[i].scale(2))
    }

    /// Index of `α/2` when it is a root.
    pub fn half(&self, i: usize) -> Option<usize> {
        let r = self.roots[i];
        if r.0.iter().all(|x| x % 2 == 0) {
            self.index_of(&Root(r.0.map(|x| x / 2)))
        } else {
            None
        }
    }

    /// `β = cα` with `c > 0` (including `β = α`).
    pub fn is_parallel(&self, a: usize, b: usize) -> bool {
        let (x, y) = (self.roots[a], self.roots[b]);
        self.dependent(&[x, y]) && x.dot(&y) > 0
    }

    pub fn is_anti_parallel(&self, a: usize, b: usize) -> bool {
        let (x, y) = (self.roots[a], self.roots[b]);
        self.dependent(&[x, y]) && x.dot(&y) < 0
    }

    fn dependent(&self, vs: &[Root]) -> bool {
        span_rank(vs) < vs.len()
    }

    pub fn parse_root(&self, s: &str) -> Result<usize, RootError> {
        let bad = || RootError::BadRoot(String::from(s));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut num = [0i64; MAX_DIM];
        let mut den = 1i64;
        if let Some(inner) = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
            let parts: Vec<&str> = inner.split(',').collect();
            if parts.len() != self.dim {
                return Err(bad());
            }
            for (k, p) in parts.iter().enumerate() {
                if let Some((a, b)) = p.split_once('/') {
                    let a: i64 = a.parse().map_err(|_| bad())?;
                    let b: i64 = b.parse().map_err(|_| bad())?;
                    if b != 2 && b != 1 {
                        return Err(bad());
                    }
                    num[k] = a * (2 / b);
                    den = 2;
                } else {
                    num[k] = p.parse::<i64>().map_err(|_| bad())? * 2;
                    den = den.max(2);
                }
            }
            // num holds doubled coordinates
        } else {
            let bytes = t.as_bytes();
            let mut i = 0;
            if bytes.is_empty() {
                return Err(bad());
            }
            while i < bytes.len() {
                let mut sign = 1;
                if bytes[i] == b'+' || bytes[i] == b'-' {
                    sign = if bytes[i] == b'-' { -1 } else { 1 };
                    i += 1;
                }
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let coef: i64 = if start == i { 1 } else { t[start..i].parse().map_err(|_| bad())? };
                if i >= bytes.len() || bytes[i] != b'e' {
                    return Err(bad());
                }
                i += 1;
                let s2 = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let k: usize = t[s2..i].parse().map_err(|_| bad())?;
                if k == 0 || k > self.dim {
                    return Err(bad());
                }
                num[k - 1] += sign * coef * 2;
            }
            den = 2;
        }
        // num is the vector times 2; rescale to stored coordinates.
        let _ = den;
        let mut c = [0i32; MAX_DIM];
        for k in 0..MAX_DIM {
            let v = num[k] * self.scale as i64;
            if v % 2 != 0 {
                return Err(bad());
            }
            c[k] = (v / 2) as i32;
        }
        self.index_of(&Root(c)).ok_or_else(bad)
    }

    pub fn format_root(&self, i: usize) -> String {
        let r = self.roots[i];
        if r.0.iter().all(|&x| x % self.scale == 0) {
            let mut s = String::new();
            for (k, &x) in r.0.iter().enumerate().take(self.dim) {
                let x = x / self.scale;
                if x == 0 {
                    continue;
                }
                if x < 0 {
                    s.push('-');
                } else if !s.is_empty() {
                    s.push('+');
                }
                if x.abs() != 1 {
                    s.push_str(&format!("{}", x.abs()));
                }
                s.push_str(&format!("e{}", k + 1));
            }
            s
        } else {
            let parts: Vec<String> = r.0[..self.dim]
                .iter()
                .map(|&x| if x % self.scale == 0 { format!("{}", x / self.scale) } else { format!("{x}/{}", self.scale) })
                .collect();
            format!("[{}]", parts.join(","))
        }
    }

    pub fn format_subset(&self, s: &RootSubset) -> String {
        let parts: Vec<String> = s.iter().map(|&i| self.format_root(i)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// Whether the roots lie in an open half-space.
    ///
    /// Tries integer functionals with entries bounded by the largest coordinate
    /// magnitude first and falls back to an exact Gordan-alternative LP.
    pub fn in_open_half_space(&self, set: &RootSubset) -> bool {
        if set.is_empty() {
            return true;
        }
        let vs: Vec<Root> = set.iter().map(|&i| self.roots[i]).collect();
        let h = self.roots.iter().flat_map(|r| r.0).map(|x| x.abs()).max().unwrap_or(1);
        let side = (2 * h + 1) as u64;
        if side.checked_pow(self.dim as u32).is_some_and(|n| n <= 20_000) {
            let mut f = [-h; MAX_DIM];
            loop {
                let fr = Root(f);
                if vs.iter().all(|v| v.dot(&fr) > 0) {
                    return true;
                }
                let mut k = 0;
                loop {
                    if k == self.dim {
                        break;
                    }
                    f[k] += 1;
                    if f[k] <= h {
                        break;
                    }
                    f[k] = -h;
                    k += 1;
                }
                if k == self.dim {
                    break;
                }
            }
        }
        // Gordan: no y with y·v > 0 for all v  ⇔  ∃ λ ≥ 0, Σλ = 1, Σ λ v = 0.
        let mut rows: Vec<Vec<i64>> = (0..self.dim).map(|k| vs.iter().map(|v| v.0[k] as i64).collect()).collect();
        rows.push(vec![1; vs.len()]);
        let mut rhs = vec![0; self.dim];
        rhs.push(1);
        !lp::feasible(&rows, &rhs)
    }

    fn sum_closed(&self, set: &RootSubset) -> bool {
        for &a in set {
            for &b in set {
                if let Some(c) = self.index_of(&self.roots[a].add(&self.roots[b])) {
                    if !set.contains(&c) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_special_closed(&self, set: &RootSubset) -> bool {
        self.in_open_half_space(set) && self.sum_closed(set)
    }

    /// `⟨X⟩`, the smallest special closed subset containing `X`.
    pub fn closure(&self, set: &RootSubset) -> Result<RootSubset, RootError> {
        if !self.in_open_half_space(set) {
            return Err(RootError::HalfSpaceViolation);
        }
        Ok(self.saturate(set.clone()))
    }

    fn saturate(&self, mut cur: RootSubset) -> RootSubset {
        loop {
            let mut added = Vec::new();
            for &a in &cur {
                for &b in &cur {
                    if let Some(c) = self.index_of(&self.roots[a].add(&self.roots[b])) {
                        if !cur.contains(&c) {
                            added.push(c);
                        }
                    }
                }
            }
            if added.is_empty() {
                return cur;
            }
            cur.extend(added);
        }
    }

    /// Coefficients `(x, y)` with `γ = xα + yβ` scaled by the Gram determinant,
    /// or `None` when `γ ∉ span(α, β)`.
    fn plane_coords(&self, a: &Root, b: &Root, g: &Root) -> Option<(i64, i64, i64)> {
        let (aa, ab, bb) = (a.dot(a), a.dot(b), b.dot(b));
        let det = aa * bb - ab * ab;
        if det == 0 {
            return None;
        }
        let (ga, gb) = (g.dot(a), g.dot(b));
        let x = ga * bb - gb * ab;
        let y = gb * aa - ga * ab;
        // γ ∈ span iff the residual vanishes: det·γ = xα + yβ.
        let lhs = g.0.map(|v| v as i64 * det);
        for k in 0..MAX_DIM {
            if lhs[k] != x * a.0[k] as i64 + y * b.0[k] as i64 {
                return None;
            }
        }
        Some((x, y, det))
    }

    /// The thick `α`-series `Φ ∩ (ℝ_{>0}β + ℝα)`.
    pub fn thick_series(&self, a: usize, b: usize) -> Result<RootSubset, RootError> {
        let (ra, rb) = (self.roots[a], self.roots[b]);
        if self.dependent(&[ra, rb]) {
            return Err(RootError::DependentRoots);
        }
        Ok((0..self.len())
            .filter(|&g| matches!(self.plane_coords(&ra, &rb, &self.roots[g]), Some((_, y, _)) if y > 0))
            .collect())
    }

    /// All thick `α`-series; they partition `Φ ∖ ℝα`.
    pub fn all_thick_series(&self, a: usize) -> Vec<RootSubset> {
        let mut seen = RootSubset::new();
        let mut out = Vec::new();
        for b in 0..self.len() {
            if seen.contains(&b) || self.dependent(&[self.roots[a], self.roots[b]]) {
                continue;
            }
            let s = self.thick_series(a, b).expect("independent");
            seen.extend(s.iter().copied());
            out.push(s);
        }
        out
    }

    pub fn span_dim(&self, set: &RootSubset) -> usize {
        let vs: Vec<Root> = set.iter().map(|&i| self.roots[i]).collect();
        span_rank(&vs)
    }

    /// All roots in the rational span of `set`.
    pub fn saturated_subsystem(&self, set: &RootSubset) -> RootSubset {
        let vs: Vec<Root> = set.iter().map(|&i| self.roots[i]).collect();
        let r = span_rank(&vs);
        (0..self.len())
            .filter(|&g| {
                let mut w = vs.clone();
                w.push(self.roots[g]);
                span_rank(&w) == r
            })
            .collect()
    }

    /// Unordered pairs of independent roots `(β, γ)` with `β + γ = α`.
    pub fn root_decompositions(&self, a: usize) -> Vec<(usize, usize)> {
        let target = self.roots[a];
        let mut out = Vec::new();
        for b in 0..self.len() {
            let rest = Root(core::array::from_fn(|k| target.0[k] - self.roots[b].0[k]));
            if let Some(c) = self.index_of(&rest) {
                if b < c && !self.dependent(&[self.roots[b], self.roots[c]]) {
                    out.push((b, c));
                }
            }
        }
        out
    }

    /// Roots `iα + jβ` with `i, j > 0`, ordered by `i + j` then `i`.
    pub fn positive_combinations(&self, a: usize, b: usize) -> Vec<(u32, u32, usize)> {
        let mut out = Vec::new();
        for total in 2..=8u32 {
            for i in 1..total {
                let j = total - i;
                let r = self.roots[a].scale(i as i32).add(&self.roots[b].scale(j as i32));
                if let Some(g) = self.index_of(&r) {
                    out.push((i, j, g));
                }
            }
        }
        out
    }

    /// Every special closed subset (including the empty set).
    pub fn special_closed_subsets(&self) -> Result<Vec<RootSubset>, RootError> {
        if self.len() > 128 {
            return Err(RootError::TooManyRoots);
        }
        let mask = |s: &RootSubset| s.iter().fold(0u128, |m, &i| m | 1 << i);
        let mut found: BTreeMap<u128, RootSubset> = BTreeMap::new();
        found.insert(0, RootSubset::new());
        let mut queue: Vec<RootSubset> = vec![RootSubset::new()];
        while let Some(s) = queue.pop() {
            for g in 0..self.len() {
                if s.contains(&g) {
                    continue;
                }
                let mut t = s.clone();
                t.insert(g);
                if !self.in_open_half_space(&t) {
                    continue;
                }
                let t = self.saturate(t);
                if !self.in_open_half_space(&t) {
                    continue;
                }
                let m = mask(&t);
                if let alloc::collections::btree_map::Entry::Vacant(v) = found.entry(m) {
                    v.insert(t.clone());
                    queue.push(t);
                }
            }
        }
        Ok(found.into_values().collect())
    }

    /// Two-dimensional indecomposable saturated subsystems, each with a base `(α, β)`.
    pub fn rank_two_bases(&self) -> Vec<(usize, usize)> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in 0..self.len() {
                if self.dependent(&[self.roots[a], self.roots[b]]) {
                    continue;
                }
                let sub = self.saturated_subsystem(&[a, b].into_iter().collect());
                // indecomposable iff not A1×A1-like: some root in sub outside ℝα ∪ ℝβ
                let pa = self.roots[a];
                let pb = self.roots[b];
                let mixed = sub.iter().any(|&g| {
                    let r = self.roots[g];
                    !self.dependent(&[r, pa]) && !self.dependent(&[r, pb])
                });
                if !mixed {
                    continue;
                }
                // (α, β) is a base when α, β are simple for the positive system they define
                let positives: Vec<usize> = sub
                    .iter()
                    .copied()
                    .filter(|&g| matches!(self.plane_coords(&pa, &pb, &self.roots[g]), Some((x, y, _)) if x >= 0 && y >= 0))
                    .collect();
                let is_base = positives.iter().all(|&g| {
                    let (x, y, d) = self.plane_coords(&pa, &pb, &self.roots[g]).expect("in span");
                    x % d == 0 && y % d == 0
                }) && self.half(a).is_none()
                    && self.half(b).is_none()
                    && positives.len() + positives.len() == sub.len();
                let key: Vec<usize> = sub.iter().copied().collect();
                if is_base && seen.insert({
                    let mut k = key.clone();
                    k.push(usize::MAX);
                    k.push(a);
                    k.push(b);
                    k
                }) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// Rank of a list of integer vectors (fraction-free elimination).
pub fn span_rank(vs: &[Root]) -> usize {
    let mut rows: Vec<[i128; MAX_DIM]> = vs.iter().map(|v| v.0.map(|x| x as i128)).collect();
    let mut rank = 0;
    for col in 0..MAX_DIM {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank];
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                for k in 0..MAX_DIM {
                    rows[r][k] = rows[r][k] * pivot[col] - f * pivot[k];
                }
                let g = rows[r].iter().fold(0i128, |g, &x| gcd(g, x.abs()));
                if g > 1 {
                    for x in rows[r].iter_mut() {
                        *x /= g;
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(sys: &RootSystem, names: &[&str]) -> RootSubset {
        names.iter().map(|n| sys.parse_root(n).unwrap()).collect()
    }

    #[test]
    fn root_counts() {
        let cases = [
            ("A1", 2),
            ("A3", 12),
            ("A7", 56),
            ("B3", 18),
            ("C3", 18),
            ("D4", 24),
            ("BC3", 24),
            ("BC1", 4),
            ("G2", 12),
            ("F4", 48),
            ("E6", 72),
            ("E7", 126),
            ("E8", 240),
        ];
        for (tag, n) in cases {
            assert_eq!(RootSystem::parse(tag).unwrap().len(), n, "{tag}");
        }
        assert!(RootSystem::parse("E5").is_err());
        assert!(RootSystem::parse("D2").is_err());
    }

    #[test]
    fn negation_and_bc_doubles() {
        for tag in ["A3", "BC3", "G2", "F4", "E8"] {
            let s = RootSystem::parse(tag).unwrap();
            for i in 0..s.len() {
                assert_eq!(s.neg(s.neg(i)), i);
            }
        }
        let bc = RootSystem::parse("BC3").unwrap();
        let e1 = bc.parse_root("e1").unwrap();
        assert!(bc.double(e1).is_some());
        let e12 = bc.parse_root("e1+e2").unwrap();
        assert!(bc.double(e12).is_none());
        assert_eq!(bc.half(bc.parse_root("2e1").unwrap()), Some(e1));
    }

    #[test]
    fn parse_and_format() {
        let s = RootSystem::parse("A3").unwrap();
        let i = s.parse_root("e1-e2").unwrap();
        assert_eq!(s.format_root(i), "e1-e2");
        let e8 = RootSystem::parse("E8").unwrap();
        let h = e8.parse_root("[1/2,1/2,1/2,1/2,1/2,1/2,1/2,1/2]").unwrap();
        assert_eq!(e8.format_root(h), "[1/2,1/2,1/2,1/2,1/2,1/2,1/2,1/2]");
        assert_eq!(e8.format_root(e8.parse_root("e1-e2").unwrap()), "e1-e2");
        assert!(s.parse_root("e1+e2").is_err());
    }

    #[test]
    fn special_closed_examples() {
        let a3 = RootSystem::parse("A3").unwrap();
        assert!(a3.is_special_closed(&set(&a3, &["e1-e2", "e2-e3", "e1-e3"])));
        assert!(!a3.is_special_closed(&set(&a3, &["e1-e2", "e2-e1"])));
        let bc3 = RootSystem::parse("BC3").unwrap();
        assert!(bc3.is_special_closed(&set(&bc3, &["e1", "2e1", "e1+e2"])));
        assert!(!bc3.is_special_closed(&set(&bc3, &["e1", "e1+e2"])));
    }

    #[test]
    fn closure_examples() {
        let a3 = RootSystem::parse("A3").unwrap();
        let c = a3.closure(&set(&a3, &["e1-e2", "e2-e3"])).unwrap();
        assert_eq!(c, set(&a3, &["e1-e2", "e2-e3", "e1-e3"]));
        let one = set(&a3, &["e2-e4"]);
        assert_eq!(a3.closure(&one).unwrap(), one);
        assert_eq!(a3.closure(&set(&a3, &["e1-e2", "e2-e1"])), Err(RootError::HalfSpaceViolation));
        let bc3 = RootSystem::parse("BC3").unwrap();
        assert_eq!(bc3.closure(&set(&bc3, &["e1"])).unwrap(), set(&bc3, &["e1", "2e1"]));
    }

    #[test]
    fn thick_series_examples() {
        let a3 = RootSystem::parse("A3").unwrap();
        let a = a3.parse_root("e1-e2").unwrap();
        assert_eq!(a3.thick_series(a, a3.parse_root("e2-e3").unwrap()).unwrap(), set(&a3, &["e2-e3", "e1-e3"]));
        assert_eq!(a3.thick_series(a, a3.parse_root("e3-e4").unwrap()).unwrap(), set(&a3, &["e3-e4"]));
        assert_eq!(a3.thick_series(a, a3.parse_root("e2-e1").unwrap()), Err(RootError::DependentRoots));
        let bc3 = RootSystem::parse("BC3").unwrap();
        let a = bc3.parse_root("e1-e2").unwrap();
        assert_eq!(
            bc3.thick_series(a, bc3.parse_root("e2").unwrap()).unwrap(),
            set(&bc3, &["e2", "2e2", "e1", "2e1", "e1+e2"])
        );
    }

    #[test]
    fn thick_series_partition_and_closedness() {
        for tag in ["A3", "BC3", "C3", "G2", "D4"] {
            let s = RootSystem::parse(tag).unwrap();
            for a in 0..s.len() {
                let series = s.all_thick_series(a);
                let mut union = RootSubset::new();
                for ser in &series {
                    assert!(s.is_special_closed(ser), "{tag}");
                    assert!(ser.iter().all(|x| !union.contains(x)), "{tag}: overlap");
                    union.extend(ser.iter().copied());
                    let d = s.span_dim(ser);
                    assert!(d == 1 || d == 2);
                }
                let off_line: RootSubset =
                    (0..s.len()).filter(|&g| span_rank(&[s.root(a), s.root(g)]) == 2).collect();
                assert_eq!(union, off_line, "{tag}");
            }
        }
    }

    #[test]
    fn saturated_examples() {
        let a3 = RootSystem::parse("A3").unwrap();
        assert_eq!(a3.saturated_subsystem(&set(&a3, &["e1-e2"])), set(&a3, &["e1-e2", "e2-e1"]));
        let a2 = a3.saturated_subsystem(&set(&a3, &["e1-e2", "e2-e3"]));
        assert_eq!(a2, set(&a3, &["e1-e2", "e2-e1", "e2-e3", "e3-e2", "e1-e3", "e3-e1"]));
        let bc3 = RootSystem::parse("BC3").unwrap();
        let bc2 = bc3.saturated_subsystem(&set(&bc3, &["e1", "e2"]));
        assert_eq!(bc2.len(), 12);
        assert!(bc2.iter().all(|&i| bc3.root(i).0[2] == 0));
    }

    #[test]
    fn decomposition_examples() {
        let a3 = RootSystem::parse("A3").unwrap();
        let d = a3.root_decompositions(a3.parse_root("e1-e3").unwrap());
        let pairs: BTreeSet<RootSubset> = d.iter().map(|&(b, c)| [b, c].into_iter().collect()).collect();
        let want: BTreeSet<RootSubset> =
            [set(&a3, &["e1-e2", "e2-e3"]), set(&a3, &["e1-e4", "e4-e3"])].into_iter().collect();
        assert_eq!(pairs, want);
        let d = a3.root_decompositions(a3.parse_root("e1-e2").unwrap());
        let pairs: BTreeSet<RootSubset> = d.iter().map(|&(b, c)| [b, c].into_iter().collect()).collect();
        let want: BTreeSet<RootSubset> =
            [set(&a3, &["e1-e3", "e3-e2"]), set(&a3, &["e1-e4", "e4-e2"])].into_iter().collect();
        assert_eq!(pairs, want);
        let bc3 = RootSystem::parse("BC3").unwrap();
        let d = bc3.root_decompositions(bc3.parse_root("2e1").unwrap());
        let pairs: BTreeSet<RootSubset> = d.iter().map(|&(b, c)| [b, c].into_iter().collect()).collect();
        assert!(pairs.contains(&set(&bc3, &["e1-e2", "e1+e2"])));
        let e1 = bc3.parse_root("e1").unwrap();
        assert!(d.iter().all(|&(b, c)| b != e1 && c != e1));
    }

    #[test]
    fn decompositions_nonempty_in_rank_three() {
        for tag in ["A3", "BC3", "B3", "C3", "D4", "F4"] {
            let s = RootSystem::parse(tag).unwrap();
            for a in 0..s.len() {
                if s.half(a).is_none() {
                    assert!(!s.root_decompositions(a).is_empty(), "{tag} {}", s.format_root(a));
                }
            }
        }
    }

    #[test]
    fn half_space_lp_fallback_on_e8() {
        let e8 = RootSystem::parse("E8").unwrap();
        let pos: RootSubset = (0..e8.len())
            .filter(|&i| {
                let r = e8.root(i);
                let f = Root::from_slice(&[1, 2, 3, 4, 5, 6, 7, 100]);
                r.dot(&f) > 0
            })
            .collect();
        assert_eq!(pos.len(), 120);
        assert!(e8.is_special_closed(&pos));
        let mut bad = pos.clone();
        bad.insert(e8.neg(*pos.iter().next().unwrap()));
        assert!(!e8.in_open_half_space(&bad));
    }

    #[test]
    fn special_closed_enumeration_a2() {
        let a2 = RootSystem::parse("A2").unwrap();
        let all = a2.special_closed_subsets().unwrap();
        // brute force over all 64 subsets
        let brute = (0u32..64)
            .filter(|m| {
                let s: RootSubset = (0..6).filter(|i| m >> i & 1 == 1).collect();
                a2.is_special_closed(&s)
            })
            .count();
        assert_eq!(all.len(), brute);
    }

    #[test]
    fn rank_two_bases_of_a3() {
        let a3 = RootSystem::parse("A3").unwrap();
        let bases = a3.rank_two_bases();
        assert!(!bases.is_empty());
        for &(a, b) in &bases {
            assert_eq!(a3.root(a).dot(&a3.root(b)), -1);
        }
        let bc3 = RootSystem::parse("BC3").unwrap();
        assert!(!bc3.rank_two_bases().is_empty());
    }
}
