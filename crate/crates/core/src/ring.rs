//! Finite commutative base rings `K = ∏ ℤ/p^e`.
//!
//! Elements are plain `u64` codes. When the primes of the factors are pairwise
//! distinct the ring is cyclic and the code is the ordinary integer residue
//! modulo `|K|`, so `z12` element `3` is literally `3`. Otherwise the code is a
//! mixed-radix packing of the per-factor residues.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// A ring element code. Only meaningful together with its [`Ring`].
pub type Elem = u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimePower {
    pub prime: u64,
    pub exp: u32,
    pub modulus: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingError {
    UnknownTag(String),
    NotPrimePower(u64),
    TooLarge,
    BadElement(String),
}

impl fmt::Display for RingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingError::UnknownTag(t) => write!(f, "unknown ring tag `{t}`"),
            RingError::NotPrimePower(n) => write!(f, "{n} is not a prime power"),
            RingError::TooLarge => write!(f, "ring too large for exhaustive arithmetic"),
            RingError::BadElement(s) => write!(f, "cannot parse ring element `{s}`"),
        }
    }
}

impl core::error::Error for RingError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    factors: Vec<PrimePower>,
    cyclic: bool,
    order: u64,
    strides: Vec<u64>,
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return if m == 1 { Some(0) } else { None };
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

impl Ring {
    /// Builds `∏ ℤ/p^e` from `(p, e)` pairs. Factors with `e = 0` are dropped.
    pub fn new(factors: &[(u64, u32)]) -> Result<Ring, RingError> {
        let mut fs = Vec::new();
        for &(p, e) in factors {
            if e == 0 {
                continue;
            }
            if factorize(p).len() != 1 || factorize(p)[0].1 != 1 {
                return Err(RingError::NotPrimePower(p));
            }
            let modulus = p.checked_pow(e).ok_or(RingError::TooLarge)?;
            fs.push(PrimePower { prime: p, exp: e, modulus });
        }
        let mut order: u64 = 1;
        let mut strides = Vec::with_capacity(fs.len());
        for f in &fs {
            strides.push(order);
            order = order.checked_mul(f.modulus).ok_or(RingError::TooLarge)?;
        }
        if order > (1 << 31) {
            return Err(RingError::TooLarge);
        }
        let primes: BTreeSet<u64> = fs.iter().map(|f| f.prime).collect();
        let cyclic = primes.len() == fs.len();
        Ok(Ring { factors: fs, cyclic, order, strides })
    }

    /// `ℤ/n` for any `n ≥ 1`.
    pub fn cyclic(n: u64) -> Result<Ring, RingError> {
        Ring::new(&factorize(n))
    }

    /// Parses tags such as `z12`, `f2`, `z4xz9`, `z2xz2`.
    pub fn parse(tag: &str) -> Result<Ring, RingError> {
        let mut factors = Vec::new();
        for part in tag.split('x') {
            let bad = || RingError::UnknownTag(String::from(tag));
            let (field, digits) = if let Some(d) = part.strip_prefix('z') {
                (false, d)
            } else if let Some(d) = part.strip_prefix('f') {
                (true, d)
            } else {
                return Err(bad());
            };
            let n: u64 = digits.parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(bad());
            }
            let fac = factorize(n);
            if field && !(fac.len() == 1 && fac[0].1 == 1) {
                return Err(bad());
            }
            factors.extend(fac);
        }
        Ring::new(&factors)
    }

    pub fn factors(&self) -> &[PrimePower] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn tag(&self) -> String {
        if self.cyclic {
            return format!("z{}", self.order);
        }
        let parts: Vec<String> = self.factors.iter().map(|f| format!("z{}", f.modulus)).collect();
        parts.join("x")
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        0
    }

    #[inline]
    pub fn one(&self) -> Elem {
        if self.order == 1 {
            return 0;
        }
        if self.cyclic {
            1
        } else {
            self.strides.iter().sum::<u64>()
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order
    }

    #[inline]
    pub fn residue(&self, x: Elem, i: usize) -> u64 {
        if self.cyclic {
            x % self.factors[i].modulus
        } else {
            (x / self.strides[i]) % self.factors[i].modulus
        }
    }

    pub fn residues(&self, x: Elem) -> Vec<u64> {
        (0..self.factors.len()).map(|i| self.residue(x, i)).collect()
    }

    /// Inverse of [`Ring::residues`] (CRT in the cyclic case).
    pub fn from_residues(&self, r: &[u64]) -> Elem {
        debug_assert_eq!(r.len(), self.factors.len());
        if self.cyclic {
            let mut x: u128 = 0;
            for (i, f) in self.factors.iter().enumerate() {
                let m = self.order / f.modulus;
                let inv = inv_mod(m % f.modulus, f.modulus).unwrap_or(0);
                x += (r[i] % f.modulus) as u128 * m as u128 * inv as u128;
            }
            (x % self.order as u128) as u64
        } else {
            self.factors
                .iter()
                .zip(&self.strides)
                .zip(r)
                .map(|((f, s), &ri)| (ri % f.modulus) * s)
                .sum()
        }
    }

    pub fn from_int(&self, n: i64) -> Elem {
        if self.cyclic {
            n.rem_euclid(self.order as i64) as u64
        } else {
            let r: Vec<u64> =
                self.factors.iter().map(|f| n.rem_euclid(f.modulus as i64) as u64).collect();
            self.from_residues(&r)
        }
    }

    /// Integers in the cyclic case, `a:b:…` residue vectors otherwise.
    pub fn parse_elem(&self, s: &str) -> Result<Elem, RingError> {
        let s = s.trim();
        if s.contains(':') {
            let parts: Result<Vec<i64>, _> = s.split(':').map(|p| p.trim().parse::<i64>()).collect();
            let parts = parts.map_err(|_| RingError::BadElement(String::from(s)))?;
            if parts.len() != self.factors.len() {
                return Err(RingError::BadElement(String::from(s)));
            }
            let r: Vec<u64> = parts
                .iter()
                .zip(&self.factors)
                .map(|(&v, f)| v.rem_euclid(f.modulus as i64) as u64)
                .collect();
            return Ok(self.from_residues(&r));
        }
        let n: i64 = s.parse().map_err(|_| RingError::BadElement(String::from(s)))?;
        Ok(self.from_int(n))
    }

    pub fn format_elem(&self, x: Elem) -> String {
        if self.cyclic {
            format!("{x}")
        } else {
            let r: Vec<String> = self.residues(x).iter().map(|v| format!("{v}")).collect();
            r.join(":")
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.cyclic {
            let s = a + b;
            if s >= self.order {
                s - self.order
            } else {
                s
            }
        } else {
            self.componentwise(a, b, |x, y, m| (x + y) % m)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.cyclic {
            if a == 0 {
                0
            } else {
                self.order - a
            }
        } else {
            self.componentwise(a, 0, |x, _, m| (m - x) % m)
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.cyclic {
            (a * b) % self.order
        } else {
            self.componentwise(a, b, |x, y, m| (x * y) % m)
        }
    }

    fn componentwise(&self, a: Elem, b: Elem, op: impl Fn(u64, u64, u64) -> u64) -> Elem {
        let mut out = 0;
        for (i, f) in self.factors.iter().enumerate() {
            let x = self.residue(a, i);
            let y = self.residue(b, i);
            out += op(x, y, f.modulus) * self.strides[i];
        }
        out
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, a: Elem) -> bool {
        self.factors.iter().enumerate().all(|(i, f)| self.residue(a, i) % f.prime != 0)
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        let mut r = Vec::with_capacity(self.factors.len());
        for (i, f) in self.factors.iter().enumerate() {
            r.push(inv_mod(self.residue(a, i), f.modulus)?);
        }
        Some(self.from_residues(&r))
    }

    /// `p`-adic valuation of the `i`-th residue, capped at the exponent.
    pub fn valuation(&self, a: Elem, i: usize) -> u32 {
        let f = self.factors[i];
        let mut r = self.residue(a, i);
        if r == 0 {
            return f.exp;
        }
        let mut v = 0;
        while r % f.prime == 0 {
            r /= f.prime;
            v += 1;
        }
        v
    }

    /// The unique idempotent among the powers of `k`.
    pub fn idempotent_power(&self, k: Elem) -> Elem {
        let mut x = k;
        loop {
            if self.mul(x, x) == x {
                return x;
            }
            x = self.mul(x, k);
        }
    }

    /// `K_k ≅ eK` where `e` is the idempotent power of `k`.
    pub fn localize(&self, k: Elem) -> Localization {
        let e = self.idempotent_power(k);
        let kept: Vec<usize> =
            (0..self.factors.len()).filter(|&i| self.residue(e, i) != 0).collect();
        let pairs: Vec<(u64, u32)> =
            kept.iter().map(|&i| (self.factors[i].prime, self.factors[i].exp)).collect();
        let target = Ring::new(&pairs).expect("sub-product of a valid ring");
        Localization { source: self.clone(), target, idempotent: e, kept }
    }

    pub fn primes(&self) -> Vec<Ideal> {
        (0..self.factors.len())
            .map(|i| {
                let mut exps = vec![0; self.factors.len()];
                exps[i] = 1;
                Ideal { exps }
            })
            .collect()
    }

    pub fn unit_ideal(&self) -> Ideal {
        Ideal { exps: vec![0; self.factors.len()] }
    }

    /// The ideal generated by a finite set of elements.
    pub fn ideal_of(&self, gens: &[Elem]) -> Ideal {
        let exps = (0..self.factors.len())
            .map(|i| gens.iter().map(|&g| self.valuation(g, i)).min().unwrap_or(self.factors[i].exp))
            .collect();
        Ideal { exps }
    }

    pub fn format_ideal(&self, ideal: &Ideal) -> String {
        if self.cyclic {
            let d: u64 =
                self.factors.iter().zip(&ideal.exps).map(|(f, &k)| f.prime.pow(k)).product();
            let d = if d == self.order { 0 } else { d };
            format!("({d})")
        } else {
            let parts: Vec<String> = self
                .factors
                .iter()
                .zip(&ideal.exps)
                .map(|(f, &k)| match k {
                    0 => String::from("full"),
                    k if k == f.exp => String::from("(0)"),
                    1 => format!("({})", f.prime),
                    k => format!("({}^{})", f.prime, k),
                })
                .collect();
            parts.join("×")
        }
    }

    /// Solves `s^{m'} = Σ k_i^m t_i` with `m' = max(0, (m−1)n + 1)`.
    ///
    /// Returns the lexicographically first solution when `|K|^n` is small
    /// enough to search exhaustively, otherwise a valuation-based solution per
    /// CRT factor. `None` when `s^{m'}` is not in the ideal `(k_i^m)`.
    pub fn partition_of_unity(&self, s: Elem, ks: &[Elem], m: u32) -> Option<Vec<Elem>> {
        let n = ks.len();
        let target = self.pow(s, unity_shift(m, n) as u64);
        let coeffs: Vec<Elem> = ks.iter().map(|&k| self.pow(k, m as u64)).collect();
        if n == 0 {
            return if target == 0 { Some(Vec::new()) } else { None };
        }
        let space = (self.order as u128).checked_pow(n as u32);
        if matches!(space, Some(sz) if sz <= 1 << 20) {
            let mut t = vec![0u64; n];
            loop {
                let sum = t
                    .iter()
                    .zip(&coeffs)
                    .fold(0, |acc, (&ti, &ci)| self.add(acc, self.mul(ti, ci)));
                if sum == target {
                    return Some(t);
                }
                // lexicographic order: last coordinate varies fastest
                let mut i = n;
                loop {
                    if i == 0 {
                        return None;
                    }
                    i -= 1;
                    t[i] += 1;
                    if t[i] < self.order {
                        break;
                    }
                    t[i] = 0;
                }
            }
        }
        let mut per_factor: Vec<Vec<u64>> = vec![vec![0; self.factors.len()]; n];
        for (fi, f) in self.factors.iter().enumerate() {
            let tv = self.valuation(target, fi);
            let (best, v) = (0..n)
                .map(|i| (i, self.valuation(coeffs[i], fi)))
                .min_by_key(|&(_, v)| v)
                .expect("n > 0");
            if v > tv || (v == f.exp && self.residue(target, fi) != 0) {
                return None;
            }
            let pv = f.prime.pow(v);
            let c = self.residue(coeffs[best], fi) / pv;
            let r = self.residue(target, fi) / pv;
            let cinv = inv_mod(c % f.modulus, f.modulus)?;
            per_factor[best][fi] = (r % f.modulus) * cinv % f.modulus;
        }
        Some(per_factor.iter().map(|r| self.from_residues(r)).collect())
    }
}

/// `m' = max(0, (m − 1)n + 1)`.
pub fn unity_shift(m: u32, n: usize) -> u32 {
    if m == 0 {
        0
    } else {
        (m - 1) * n as u32 + 1
    }
}

/// Ideal `∏ p_i^{k_i} ℤ/p_i^{e_i}` of a product ring; `k_i = e_i` is the zero component.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Ideal {
    pub exps: Vec<u32>,
}

impl Ideal {
    pub fn contains(&self, ring: &Ring, x: Elem) -> bool {
        self.exps.iter().enumerate().all(|(i, &k)| ring.valuation(x, i) >= k)
    }

    pub fn elements(&self, ring: &Ring) -> Vec<Elem> {
        ring.elements().filter(|&x| self.contains(ring, x)).collect()
    }

    pub fn is_prime(&self, ring: &Ring) -> bool {
        let nontrivial: Vec<usize> = (0..self.exps.len()).filter(|&i| self.exps[i] > 0).collect();
        nontrivial.len() == 1 && self.exps[nontrivial[0]] == 1 && ring.factors()[nontrivial[0]].exp >= 1
    }

    pub fn is_subset(&self, other: &Ideal) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a >= b)
    }
}

/// The map `K → K_k ≅ eK`.
#[derive(Clone, Debug)]
pub struct Localization {
    pub source: Ring,
    pub target: Ring,
    pub idempotent: Elem,
    kept: Vec<usize>,
}

impl Localization {
    pub fn map(&self, a: Elem) -> Elem {
        let r: Vec<u64> = self.kept.iter().map(|&i| self.source.residue(a, i)).collect();
        self.target.from_residues(&r)
    }

    /// Embeds `K_k` back into `K` as the ideal `eK`.
    pub fn embed(&self, b: Elem) -> Elem {
        let mut r = vec![0; self.source.factors().len()];
        for (j, &i) in self.kept.iter().enumerate() {
            r[i] = self.target.residue(b, j);
        }
        self.source.from_residues(&r)
    }
}

/// Multiplicative monoid generated by finitely many elements (materialized).
#[derive(Clone, Debug)]
pub struct MultiplicativeSet {
    pub generators: Vec<Elem>,
    pub closure: BTreeSet<Elem>,
}

impl MultiplicativeSet {
    pub fn generated(ring: &Ring, generators: &[Elem]) -> MultiplicativeSet {
        let mut closure = BTreeSet::new();
        closure.insert(ring.one());
        let mut frontier = vec![ring.one()];
        while let Some(x) = frontier.pop() {
            for &g in generators {
                let y = ring.mul(x, g);
                if closure.insert(y) {
                    frontier.push(y);
                }
            }
        }
        MultiplicativeSet { generators: generators.to_vec(), closure }
    }

    pub fn meets(&self, ring: &Ring, ideal: &Ideal) -> bool {
        self.closure.iter().any(|&s| ideal.contains(ring, s))
    }

    /// A single element `σ` with every member dividing some power of `σ` inside the set.
    pub fn cofinal_generator(&self, ring: &Ring) -> Elem {
        self.generators.iter().fold(ring.one(), |acc, &g| ring.mul(acc, g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_tags() {
        assert_eq!(Ring::parse("z12").unwrap().order(), 12);
        assert_eq!(Ring::parse("f2").unwrap().order(), 2);
        let r = Ring::parse("z4xz9").unwrap();
        assert!(r.is_cyclic());
        assert_eq!(r.order(), 36);
        let r = Ring::parse("z2xz2").unwrap();
        assert!(!r.is_cyclic());
        assert_eq!(r.one(), 3);
        assert!(Ring::parse("f4").is_err());
        assert!(Ring::parse("q7").is_err());
    }

    #[test]
    fn primes_of_small_rings() {
        let z12 = Ring::parse("z12").unwrap();
        let ps: Vec<String> = z12.primes().iter().map(|p| z12.format_ideal(p)).collect();
        assert_eq!(ps, ["(2)", "(3)"]);
        let f2 = Ring::parse("f2").unwrap();
        assert_eq!(f2.format_ideal(&f2.primes()[0]), "(0)");
        let z2z2 = Ring::parse("z2xz2").unwrap();
        let ps: Vec<String> = z2z2.primes().iter().map(|p| z2z2.format_ideal(p)).collect();
        assert_eq!(ps, ["(0)×full", "full×(0)"]);
    }

    #[test]
    fn primes_of_z4_times_z9() {
        let r = Ring::parse("z4xz9").unwrap();
        let ps = r.primes();
        assert_eq!(ps.len(), 2);
        // (2)×full contains 2 but not 3; full×(3) the other way round.
        assert!(ps[0].contains(&r, 2) && !ps[0].contains(&r, 3));
        assert!(ps[1].contains(&r, 3) && !ps[1].contains(&r, 2));
        for p in &ps {
            assert!(p.is_prime(&r));
        }
    }

    #[test]
    fn localization_examples() {
        let r = Ring::parse("z12").unwrap();
        let l = r.localize(2);
        assert_eq!(l.idempotent, 4);
        assert_eq!(l.target.order(), 3);
        let image: BTreeSet<Elem> = r.elements().map(|a| l.embed(l.map(a))).collect();
        assert_eq!(image.into_iter().collect::<Vec<_>>(), [0, 4, 8]);
        let l = r.localize(3);
        assert_eq!(l.idempotent, 9);
        assert_eq!(l.target.order(), 4);
        let l = r.localize(1);
        assert_eq!(l.target, r);
        for a in r.elements() {
            assert_eq!(l.map(a), a);
        }
        // nilpotent: zero ring
        let r8 = Ring::parse("z8").unwrap();
        assert_eq!(r8.localize(2).target.order(), 1);
    }

    #[test]
    fn localization_inverts_k() {
        let r = Ring::parse("z12").unwrap();
        for k in r.elements() {
            let l = r.localize(k);
            let image = l.map(k);
            assert!(l.target.is_unit(image) || l.target.order() == 1);
        }
    }

    #[test]
    fn localization_composes() {
        let r = Ring::parse("z36").unwrap();
        for k in r.elements() {
            for k2 in r.elements() {
                let l1 = r.localize(k);
                let l2 = l1.target.localize(l1.map(k2));
                let l12 = r.localize(r.mul(k, k2));
                assert_eq!(l2.target.order(), l12.target.order());
                assert_eq!(l1.embed(l2.embed(l2.idempotent)), l12.idempotent);
            }
        }
    }

    #[test]
    fn partition_of_unity_examples() {
        let r = Ring::parse("z12").unwrap();
        assert_eq!(r.partition_of_unity(1, &[3, 4], 1), Some(vec![3, 1]));
        assert_eq!(r.partition_of_unity(1, &[3, 4], 2), Some(vec![1, 1]));
        for m in 1..6 {
            assert_eq!(r.partition_of_unity(1, &[2], m), None);
        }
        assert_eq!(unity_shift(2, 2), 3);
        assert_eq!(unity_shift(0, 5), 0);
    }

    #[test]
    fn partition_of_unity_componentwise_path() {
        // |K|^n > 2^20 forces the CRT route.
        let r = Ring::parse("z4xz9xz5").unwrap();
        let ks = [3, 4, 5, 7];
        for m in 1..4 {
            let t = r.partition_of_unity(1, &ks, m).unwrap();
            let target = r.pow(1, unity_shift(m, ks.len()) as u64);
            let sum = ks.iter().zip(&t).fold(0, |acc, (&k, &ti)| r.add(acc, r.mul(r.pow(k, m as u64), ti)));
            assert_eq!(sum, target);
        }
        assert_eq!(r.partition_of_unity(1, &[2, 4, 6, 10], 2), None);
    }

    #[test]
    fn meets_examples() {
        let r = Ring::parse("z12").unwrap();
        let two = MultiplicativeSet::generated(&r, &[2]);
        assert!(two.meets(&r, &r.ideal_of(&[2])));
        let one = MultiplicativeSet::generated(&r, &[]);
        assert!(!one.meets(&r, &r.ideal_of(&[3])));
        let five = MultiplicativeSet::generated(&r, &[5]);
        assert_eq!(five.closure.iter().copied().collect::<Vec<_>>(), [1, 5]);
        assert!(!five.meets(&r, &r.ideal_of(&[3])));
    }

    #[test]
    fn meets_iff_no_disjoint_prime_contains() {
        for tag in ["z12", "z36", "z2xz2", "z8"] {
            let r = Ring::parse(tag).unwrap();
            for g in r.elements() {
                let s = MultiplicativeSet::generated(&r, &[g]);
                for a in r.elements() {
                    for b in r.elements().step_by(3) {
                        let ideal = r.ideal_of(&[a, b]);
                        let avoided = r
                            .primes()
                            .iter()
                            .filter(|p| !s.meets(&r, p))
                            .all(|p| !ideal.is_subset(p));
                        assert_eq!(avoided, s.meets(&r, &ideal), "{tag} g={g} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn arithmetic_matches_residues() {
        let r = Ring::parse("z2xz2xz3").unwrap();
        for a in r.elements() {
            for b in r.elements() {
                let ra = r.residues(a);
                let rb = r.residues(b);
                let prod: Vec<u64> = r
                    .factors()
                    .iter()
                    .enumerate()
                    .map(|(i, f)| ra[i] * rb[i] % f.modulus)
                    .collect();
                assert_eq!(r.residues(r.mul(a, b)), prod);
                assert_eq!(r.sub(r.add(a, b), b), a);
            }
        }
        assert_eq!(r.from_int(-1), r.neg(r.one()));
    }
}
