//! Odd form algebras `(R, Δ)` over finite rings, strong orthogonal hyperbolic
//! families, and the odd unitary group generated by root elements.
//!
//! `R = M_N(K)` with rows indexed `−ℓ, …, −1`, a middle block of size `m0`,
//! then `1, …, ℓ`. Points of `Δ` are pairs `(m, a)` with `a + l·m̄m + ā = 0`,
//! where `l` is the level (`l = 1` for the algebra itself, `l = s` for its
//! `s`-homotope, whose multiplication is `x ∗ y = x s y`).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use rand_core::RngCore;

use crate::check::{expect_eq, instance_rng, Checker};
use crate::matrix::{Mat, MatrixAlgebra};
use crate::realize::{PatternMismatch, Realization};
use crate::ring::{Elem, Ring};
use crate::rootsys::{RootSystem, RootType};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Involution {
    /// `ā_{pq} = a_{N−1−q, N−1−p}`.
    Antidiagonal,
    /// Plain transpose; does not swap `e_i` and `e_{−i}`.
    Transpose,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parameter {
    /// All `(m, a)` with `a + m̄m + ā = 0`.
    Maximal,
    /// Only `φ(R)`, so `π = 0`.
    Minimal,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub m: Mat,
    pub a: Mat,
}

/// An element `b ⋊ k` of `R ⋊ K`, acting as `b + k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scalar {
    pub b: Mat,
    pub k: Elem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OddFormError {
    ParameterOutOfBlock(String),
    BadShape(String),
}

impl fmt::Display for OddFormError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OddFormError::ParameterOutOfBlock(s) => write!(f, "parameter out of block: {s}"),
            OddFormError::BadShape(s) => write!(f, "bad odd form shape: {s}"),
        }
    }
}

impl core::error::Error for OddFormError {}

#[derive(Clone, Debug)]
pub struct OddForm {
    alg: MatrixAlgebra,
    ell: usize,
    m0: usize,
    level: Elem,
    involution: Involution,
    parameter: Parameter,
    halves: Vec<Vec<Elem>>,
}

/// Idempotents `e_i` and points `q_i`, `i ∈ {±1, …, ±ℓ}`.
#[derive(Clone, Debug)]
pub struct Family {
    pub e: BTreeMap<i32, Mat>,
    pub q: BTreeMap<i32, Point>,
}

impl Family {
    pub fn indices(&self) -> Vec<i32> {
        self.e.keys().copied().collect()
    }
}

/// The split odd form algebra of rank `ℓ` with middle block `m0` and its hyperbolic family.
pub fn build_split_oddform(ring: &Ring, ell: usize, m0: usize) -> Result<(OddForm, Family), OddFormError> {
    if ell == 0 {
        return Err(OddFormError::BadShape(String::from("rank must be positive")));
    }
    let n = 2 * ell + m0;
    let alg = MatrixAlgebra::full(ring.clone(), n);
    let mut halves = vec![Vec::new(); ring.order() as usize];
    for x in ring.elements() {
        halves[ring.add(x, x) as usize].push(x);
    }
    let form = OddForm {
        alg,
        ell,
        m0,
        level: ring.one(),
        involution: Involution::Antidiagonal,
        parameter: Parameter::Maximal,
        halves,
    };
    let family = form.standard_family();
    Ok((form, family))
}

impl OddForm {
    pub fn ring(&self) -> &Ring {
        self.alg.ring()
    }

    pub fn algebra(&self) -> &MatrixAlgebra {
        &self.alg
    }

    pub fn size(&self) -> usize {
        self.alg.size()
    }

    pub fn rank(&self) -> usize {
        self.ell
    }

    pub fn middle(&self) -> usize {
        self.m0
    }

    pub fn level(&self) -> Elem {
        self.level
    }

    pub fn involution(&self) -> Involution {
        self.involution
    }

    pub fn parameter(&self) -> Parameter {
        self.parameter
    }

    pub fn describe(&self) -> String {
        format!("odd form over {} rank {} middle {}", self.ring().tag(), self.ell, self.m0)
    }

    /// The same `R` and involution at level `l` (the `l`-homotope).
    pub fn at_level(&self, l: Elem) -> OddForm {
        OddForm { level: l, ..self.clone() }
    }

    pub fn with_involution(&self, inv: Involution) -> OddForm {
        OddForm { involution: inv, ..self.clone() }
    }

    pub fn with_parameter(&self, p: Parameter) -> OddForm {
        OddForm { parameter: p, ..self.clone() }
    }

    /// `e_i` and `q_i = (e_i, 0)`; with the minimal parameter `q_i = 0̇`.
    pub fn standard_family(&self) -> Family {
        let mut e = BTreeMap::new();
        let mut q = BTreeMap::new();
        for i in self.family_indices() {
            let p = self.pos(i);
            let ei = self.alg.unit(p, p);
            let qi = match self.parameter {
                Parameter::Maximal => Point { m: ei.clone(), a: self.alg.zero() },
                Parameter::Minimal => self.zero_point(),
            };
            e.insert(i, ei);
            q.insert(i, qi);
        }
        Family { e, q }
    }

    pub fn family_indices(&self) -> Vec<i32> {
        let l = self.ell as i32;
        (-l..=-1).chain(1..=l).collect()
    }

    /// Row of the family index `i ∈ {±1, …, ±ℓ}`.
    pub fn pos(&self, i: i32) -> usize {
        debug_assert!(i != 0 && i.unsigned_abs() as usize <= self.ell);
        if i < 0 {
            (self.ell as i32 + i) as usize
        } else {
            self.ell + self.m0 + i as usize - 1
        }
    }

    /// Rows of block `i`; `0` is the middle block.
    pub fn rows(&self, i: i32) -> Range<usize> {
        if i == 0 {
            self.ell..self.ell + self.m0
        } else {
            let p = self.pos(i);
            p..p + 1
        }
    }

    /// `e_i x e_j`, with `0` standing for the middle idempotent.
    pub fn block(&self, x: &Mat, i: i32, j: i32) -> Mat {
        let mut out = self.alg.zero();
        for r in self.rows(i) {
            for c in self.rows(j) {
                out.set(r, c, x.get(r, c));
            }
        }
        out
    }

    pub fn in_block(&self, x: &Mat, i: i32, j: i32) -> bool {
        self.block(x, i, j) == *x
    }

    fn mirror(&self, r: usize, c: usize) -> (usize, usize) {
        let n = self.size();
        match self.involution {
            Involution::Antidiagonal => (n - 1 - c, n - 1 - r),
            Involution::Transpose => (c, r),
        }
    }

    pub fn bar(&self, x: &Mat) -> Mat {
        let n = self.size();
        let mut out = self.alg.zero();
        for r in 0..n {
            for c in 0..n {
                let (r2, c2) = self.mirror(r, c);
                out.set(r2, c2, x.get(r, c));
            }
        }
        out
    }

    /// The product of `R` at the current level, `x ∗ y = x l y`.
    pub fn rmul(&self, x: &Mat, y: &Mat) -> Mat {
        self.alg.scale(&self.alg.mul(x, y), self.level)
    }

    pub fn zero_point(&self) -> Point {
        Point { m: self.alg.zero(), a: self.alg.zero() }
    }

    pub fn contains(&self, u: &Point) -> bool {
        let alg = &self.alg;
        match self.parameter {
            Parameter::Maximal => {
                let q = alg.add(&alg.add(&u.a, &self.rmul(&self.bar(&u.m), &u.m)), &self.bar(&u.a));
                q.is_zero()
            }
            Parameter::Minimal => {
                if !u.m.is_zero() || !alg.add(&u.a, &self.bar(&u.a)).is_zero() {
                    return false;
                }
                let n = self.size();
                (0..n).all(|r| (0..n).all(|c| self.mirror(r, c) != (r, c) || u.a.get(r, c) == 0))
            }
        }
    }

    pub fn phi(&self, a: &Mat) -> Point {
        Point { m: self.alg.zero(), a: self.alg.sub(a, &self.bar(a)) }
    }

    pub fn pi(&self, u: &Point) -> Mat {
        u.m.clone()
    }

    pub fn rho(&self, u: &Point) -> Mat {
        u.a.clone()
    }

    /// `(m, a) ∔ (m', a') = (m + m', a − m̄ ∗ m' + a')`.
    pub fn plus(&self, u: &Point, v: &Point) -> Point {
        let alg = &self.alg;
        let cross = self.rmul(&self.bar(&u.m), &v.m);
        Point { m: alg.add(&u.m, &v.m), a: alg.add(&alg.sub(&u.a, &cross), &v.a) }
    }

    /// `∸(m, a) = (−m, ā)`.
    pub fn minus(&self, u: &Point) -> Point {
        Point { m: self.alg.neg(&u.m), a: self.bar(&u.a) }
    }

    pub fn scalar_one(&self) -> Scalar {
        Scalar { b: self.alg.zero(), k: self.ring().one() }
    }

    pub fn scalar_from(&self, b: &Mat) -> Scalar {
        Scalar { b: b.clone(), k: self.ring().zero() }
    }

    pub fn scalar_add(&self, x: &Scalar, y: &Scalar) -> Scalar {
        Scalar { b: self.alg.add(&x.b, &y.b), k: self.ring().add(x.k, y.k) }
    }

    pub fn scalar_mul(&self, x: &Scalar, y: &Scalar) -> Scalar {
        let alg = &self.alg;
        let b = alg.add(&alg.add(&self.rmul(&x.b, &y.b), &alg.scale(&y.b, x.k)), &alg.scale(&x.b, y.k));
        Scalar { b, k: self.ring().mul(x.k, y.k) }
    }

    pub fn scalar_bar(&self, x: &Scalar) -> Scalar {
        Scalar { b: self.bar(&x.b), k: x.k }
    }

    /// `x ∗ s` for `s ∈ R ⋊ K`.
    fn mul_scalar(&self, x: &Mat, s: &Scalar) -> Mat {
        self.alg.add(&self.rmul(x, &s.b), &self.alg.scale(x, s.k))
    }

    /// `s ∗ x` for `s ∈ R ⋊ K`.
    fn scalar_mul_left(&self, s: &Scalar, x: &Mat) -> Mat {
        self.alg.add(&self.rmul(&s.b, x), &self.alg.scale(x, s.k))
    }

    /// `(m, a)·s = (m ∗ s, s̄ ∗ a ∗ s)`.
    pub fn act(&self, u: &Point, s: &Scalar) -> Point {
        let m = self.mul_scalar(&u.m, s);
        let a = self.mul_scalar(&self.scalar_mul_left(&self.scalar_bar(s), &u.a), s);
        Point { m, a }
    }

    fn random_scalar(&self, rng: &mut dyn RngCore) -> Scalar {
        let n = self.ring().order();
        Scalar { b: self.random_matrix(rng), k: rng.next_u64() % n }
    }

    pub fn random_matrix(&self, rng: &mut dyn RngCore) -> Mat {
        let n = self.ring().order();
        let mut m = self.alg.zero();
        for d in m.data.iter_mut() {
            *d = rng.next_u64() % n;
        }
        m
    }

    /// `ρ` completing `m` to a point: every `a` with `a + ā = c`, drawn at random.
    fn complete(&self, m: &Mat, rng: &mut dyn RngCore) -> Option<Point> {
        let ring = self.ring();
        let c = self.alg.neg(&self.rmul(&self.bar(m), m));
        let n = self.size();
        let mut a = self.alg.zero();
        for r in 0..n {
            for col in 0..n {
                let (r2, c2) = self.mirror(r, col);
                if (r2, c2) == (r, col) {
                    let sols = &self.halves[c.get(r, col) as usize];
                    if sols.is_empty() {
                        return None;
                    }
                    a.set(r, col, sols[(rng.next_u64() % sols.len() as u64) as usize]);
                } else if (r, col) < (r2, c2) {
                    let x = rng.next_u64() % ring.order();
                    a.set(r, col, x);
                    a.set(r2, c2, ring.sub(c.get(r, col), x));
                }
            }
        }
        Some(Point { m: m.clone(), a })
    }

    /// A random point of `Δ`.
    pub fn random_point(&self, rng: &mut dyn RngCore) -> Point {
        if self.parameter == Parameter::Minimal {
            return self.phi(&self.random_matrix(rng));
        }
        for _ in 0..64 {
            let m = self.random_matrix(rng);
            if let Some(u) = self.complete(&m, rng) {
                return u;
            }
        }
        let z = self.alg.zero();
        self.complete(&z, rng).unwrap_or_else(|| self.zero_point())
    }

    /// `φ(r·E_{pq})` for all matrix units and nonzero `r`.
    pub fn phi_generators(&self) -> Vec<Point> {
        let n = self.size();
        let mut out = Vec::new();
        for p in 0..n {
            for q in 0..n {
                for r in self.ring().elements().skip(1) {
                    out.push(self.phi(&self.alg.scale(&self.alg.unit(p, q), r)));
                }
            }
        }
        out
    }

    /// `x, y` with `x e_j y = e_i`.
    pub fn membership_witness(&self, i: i32, j: i32) -> (Mat, Mat) {
        (self.alg.unit(self.pos(i), self.pos(j)), self.alg.unit(self.pos(j), self.pos(i)))
    }

    pub fn format_point(&self, u: &Point) -> String {
        format!("({}, {})", self.alg.format(&u.m), self.alg.format(&u.a))
    }
}

struct Instance {
    u: Point,
    v: Point,
    a: Mat,
    b: Scalar,
    b2: Scalar,
    k: Elem,
}

type Axiom<'a> = (&'static str, u32, &'a dyn Fn(&Instance) -> Result<(), String>);

/// Verifies the odd form algebra axioms and the hyperbolic family axioms.
///
/// Each axiom runs on every generator tuple (points `φ(r E_{pq})` and `q_i`)
/// followed by `budget` random tuples.
pub fn check_oddform_axioms(form: &OddForm, family: &Family, checker: &mut Checker) {
    let o = form;
    let alg = o.algebra();
    let mut gens = o.phi_generators();
    gens.extend(family.q.values().cloned());
    let g = gens.len() as u64;
    let fp = |u: &Point| o.format_point(u);
    let zero = o.zero_point();

    let budget = checker.budget;
    let seed = checker.seed;
    let axioms: [Axiom; 16] = [
        ("pi of phi is zero", 0, &|x| expect_eq("π(φ(a))", &o.pi(&o.phi(&x.a)), &alg.zero())),
        ("phi kills a + abar and abar a k", 0, &|x| {
            expect_eq("φ(a+ā)", &o.phi(&alg.add(&x.a, &o.bar(&x.a))), &zero)?;
            let t = alg.scale(&o.rmul(&o.bar(&x.a), &x.a), x.k);
            expect_eq("φ(āak)", &o.phi(&t), &zero)
        }),
        ("rho of phi", 0, &|x| expect_eq("ρ(φ(a))", &o.rho(&o.phi(&x.a)), &alg.sub(&x.a, &o.bar(&x.a)))),
        ("commutation law", 2, &|x| {
            let corr = o.phi(&o.rmul(&o.bar(&o.pi(&x.u)), &o.pi(&x.v)));
            expect_eq("v∔u", &o.plus(&x.v, &x.u), &o.plus(&o.plus(&x.u, &corr), &x.v))
        }),
        ("phi equivariant", 0, &|x| {
            let bab = o.mul_scalar(&o.scalar_mul_left(&o.scalar_bar(&x.b), &x.a), &x.b);
            expect_eq("φ(a)·b", &o.act(&o.phi(&x.a), &x.b), &o.phi(&bab))
        }),
        ("rho of sum", 2, &|x| {
            let want = alg.add(&alg.sub(&o.rho(&x.u), &o.rmul(&o.bar(&x.u.m), &x.v.m)), &o.rho(&x.v));
            expect_eq("ρ(u∔v)", &o.rho(&o.plus(&x.u, &x.v)), &want)
        }),
        ("pi equivariant", 1, &|x| expect_eq("π(u·b)", &o.pi(&o.act(&x.u, &x.b)), &o.mul_scalar(&x.u.m, &x.b))),
        ("quadratic relation", 1, &|x| {
            let q = alg.add(&alg.add(&x.u.a, &o.rmul(&o.bar(&x.u.m), &x.u.m)), &o.bar(&x.u.a));
            expect_eq("ρ(u)+π̄π+ρ̄", &q, &alg.zero())
        }),
        ("rho equivariant", 1, &|x| {
            let want = o.mul_scalar(&o.scalar_mul_left(&o.scalar_bar(&x.b), &x.u.a), &x.b);
            expect_eq("ρ(u·b)", &o.rho(&o.act(&x.u, &x.b)), &want)
        }),
        ("action on sums", 1, &|x| {
            let lhs = o.act(&x.u, &o.scalar_add(&x.b, &x.b2));
            let mid = o.mul_scalar(&o.scalar_mul_left(&o.scalar_bar(&x.b2), &x.u.a), &x.b);
            let rhs = o.plus(&o.plus(&o.act(&x.u, &x.b), &o.phi(&mid)), &o.act(&x.u, &x.b2));
            expect_eq("u·(b+b')", &lhs, &rhs)
        }),
        ("group associative", 2, &|x| {
            let w = o.act(&x.u, &x.b);
            expect_eq("(u∔v)∔w", &o.plus(&o.plus(&x.u, &x.v), &w), &o.plus(&x.u, &o.plus(&x.v, &w)))
        }),
        ("group zero and negation", 1, &|x| {
            expect_eq("u∔0", &o.plus(&x.u, &zero), &x.u)?;
            expect_eq("u∸u", &o.plus(&x.u, &o.minus(&x.u)), &zero)?;
            expect_eq("∸u∔u", &o.plus(&o.minus(&x.u), &x.u), &zero)
        }),
        ("phi and pi additive", 2, &|x| {
            let a2 = o.rho(&x.v);
            expect_eq("φ(a+a')", &o.phi(&alg.add(&x.a, &a2)), &o.plus(&o.phi(&x.a), &o.phi(&a2)))?;
            expect_eq("π(u∔v)", &o.pi(&o.plus(&x.u, &x.v)), &alg.add(&x.u.m, &x.v.m))
        }),
        ("action by endomorphisms", 2, &|x| {
            let lhs = o.act(&o.plus(&x.u, &x.v), &x.b);
            expect_eq("(u∔v)·b", &lhs, &o.plus(&o.act(&x.u, &x.b), &o.act(&x.v, &x.b)))
        }),
        ("monoid action", 1, &|x| {
            expect_eq("u·1", &o.act(&x.u, &o.scalar_one()), &x.u)?;
            let lhs = o.act(&o.act(&x.u, &x.b), &x.b2);
            expect_eq("(u·b)·b'", &lhs, &o.act(&x.u, &o.scalar_mul(&x.b, &x.b2)))
        }),
        ("parameter closed", 2, &|x| {
            for w in [o.plus(&x.u, &x.v), o.minus(&x.u), o.act(&x.u, &x.b), o.phi(&x.a)] {
                if !o.contains(&w) {
                    return Err(format!("{} is not a point", fp(&w)));
                }
            }
            Ok(())
        }),
    ];
    for (name, arity, law) in axioms {
        let generated = if arity == 0 { 0 } else { g.saturating_pow(arity) };
        checker.exhaustive(name, generated + budget, |i| {
            let mut rng = instance_rng(seed, name, i);
            let (u, v) = if i < generated {
                (gens[(i % g) as usize].clone(), gens[((i / g) % g) as usize].clone())
            } else {
                (o.random_point(&mut rng), o.random_point(&mut rng))
            };
            let x = Instance {
                u,
                v,
                a: o.random_matrix(&mut rng),
                b: o.random_scalar(&mut rng),
                b2: o.random_scalar(&mut rng),
                k: rng.next_u64() % o.ring().order(),
            };
            law(&x).map_err(|e| {
                format!("u={} v={} a={} b={}: {e}", fp(&x.u), fp(&x.v), alg.format(&x.a), alg.format(&x.b.b))
            })
        });
    }
    check_family(o, family, checker);
}

/// The six hyperbolic family axioms, over all index pairs.
pub fn check_family(o: &OddForm, family: &Family, checker: &mut Checker) {
    let alg = o.algebra();
    let idx = family.indices();
    let pairs: Vec<(i32, i32)> =
        idx.iter().flat_map(|&i| idx.iter().filter(move |&&j| j != i).map(move |&j| (i, j))).collect();
    let ones: Vec<i32> = idx.clone();
    checker.exhaustive("family orthogonal", pairs.len() as u64, |n| {
        let (i, j) = pairs[n as usize];
        expect_eq(&format!("e_{i} e_{j}"), &alg.mul(&family.e[&i], &family.e[&j]), &alg.zero())
    });
    checker.exhaustive("family involution swaps", ones.len() as u64, |n| {
        let i = ones[n as usize];
        expect_eq(&format!("bar e_{i} vs e_{}", -i), &o.bar(&family.e[&i]), &family.e[&-i])
    });
    checker.exhaustive("family full", pairs.len() as u64, |n| {
        let (i, j) = pairs[n as usize];
        let (x, y) = o.membership_witness(i, j);
        expect_eq(&format!("e_{i} ∈ R e_{j} R"), &alg.mul(&alg.mul(&x, &family.e[&j]), &y), &family.e[&i])
    });
    checker.exhaustive("family pi of q", ones.len() as u64, |n| {
        let i = ones[n as usize];
        expect_eq(&format!("π(q_{i})"), &o.pi(&family.q[&i]), &family.e[&i])
    });
    checker.exhaustive("family rho of q", ones.len() as u64, |n| {
        let i = ones[n as usize];
        expect_eq(&format!("ρ(q_{i})"), &o.rho(&family.q[&i]), &alg.zero())
    });
    checker.exhaustive("family q fixed by e", ones.len() as u64, |n| {
        let i = ones[n as usize];
        expect_eq(&format!("q_{i}·e_{i}"), &o.act(&family.q[&i], &o.scalar_from(&family.e[&i])), &family.q[&i])
    });
}

/// Shape of a root of `BC_ℓ` in terms of family indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootShape {
    /// `e_j − e_i`, parameters `e_i R e_j`, with `i + j > 0`.
    Medium { i: i32, j: i32 },
    /// `e_j`, parameters `(m, a)` with `m ∈ e_0 R e_j`, `a ∈ e_{−j} R e_j`.
    Ultrashort { j: i32 },
    /// `2e_j`, parameters `φ(e_{−j} R e_j)`.
    Long { j: i32 },
}

pub fn root_shape(sys: &RootSystem, root: usize) -> RootShape {
    let r = sys.root(root);
    let nz: Vec<(i32, i32)> =
        (0..sys.dim()).filter(|&k| r.0[k] != 0).map(|k| (k as i32 + 1, r.0[k])).collect();
    match nz.as_slice() {
        [(a, s1), (b, s2)] => {
            let (mut i, mut j) = (-s2 * b, s1 * a);
            if i + j < 0 {
                (i, j) = (-j, -i);
            }
            RootShape::Medium { i, j }
        }
        [(a, s)] if s.abs() == 1 => RootShape::Ultrashort { j: s * a },
        [(a, s)] => RootShape::Long { j: s.signum() * a },
        _ => unreachable!("roots of BC have one or two nonzero coordinates"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UParam {
    Block(Mat),
    Point(Point),
}

/// `G(BC_ℓ, (R, Δ))`: the unitary matrices generated by root elements.
#[derive(Clone, Debug)]
pub struct Unitary {
    pub form: OddForm,
    pub family: Family,
    system: RootSystem,
    shapes: Vec<RootShape>,
    points: Vec<Vec<UParam>>,
}

const POINT_LIST_LIMIT: u64 = 1 << 16;

impl Unitary {
    pub fn new(form: OddForm, family: Family) -> Result<Unitary, OddFormError> {
        if form.involution != Involution::Antidiagonal
            || form.parameter != Parameter::Maximal
            || form.level != form.ring().one()
        {
            return Err(OddFormError::BadShape(String::from("unitary group needs the split unital model")));
        }
        let system = RootSystem::new(RootType::BC, form.rank()).map_err(|e| OddFormError::BadShape(format!("{e}")))?;
        let shapes: Vec<RootShape> = (0..system.len()).map(|r| root_shape(&system, r)).collect();
        let q = form.ring().order();
        let count = q.checked_pow(form.middle() as u32 + 1).unwrap_or(u64::MAX);
        if count > POINT_LIST_LIMIT {
            return Err(OddFormError::BadShape(String::from("ultrashort parameter set too large to list")));
        }
        let points = shapes.iter().map(|s| form.list_params(*s)).collect();
        Ok(Unitary { form, family, system, shapes, points })
    }

    pub fn shape(&self, root: usize) -> RootShape {
        self.shapes[root]
    }
}

impl OddForm {
    /// The parameter set of a root of the given shape at the current level (empty for medium roots).
    pub fn list_params(&self, shape: RootShape) -> Vec<UParam> {
        let ring = self.ring();
        match shape {
            RootShape::Medium { .. } => Vec::new(),
            RootShape::Ultrashort { j } => {
                let cols = self.pos(j);
                let mid = self.rows(0);
                let q = ring.order();
                let total = q.pow(self.m0 as u32);
                let (pr, pc) = (self.pos(-j), self.pos(j));
                let mut out = Vec::new();
                for idx in 0..total {
                    let mut m = self.alg.zero();
                    let mut rest = idx;
                    for r in mid.clone() {
                        m.set(r, cols, rest % q);
                        rest /= q;
                    }
                    let c = ring.neg(self.rmul(&self.bar(&m), &m).get(pr, pc));
                    for &x in &self.halves[c as usize] {
                        let mut a = self.alg.zero();
                        a.set(pr, pc, x);
                        out.push(UParam::Point(Point { m: m.clone(), a }));
                    }
                }
                out
            }
            RootShape::Long { j } => {
                let (pr, pc) = (self.pos(-j), self.pos(j));
                let mut out: Vec<UParam> = ring
                    .elements()
                    .map(|x| {
                        let mut a = self.alg.zero();
                        a.set(pr, pc, x);
                        UParam::Point(self.phi(&a))
                    })
                    .collect();
                out.sort();
                out.dedup();
                out
            }
        }
    }

    /// Whether `p` lies in `P_α` for a root of the given shape.
    pub fn is_root_param(&self, shape: RootShape, p: &UParam) -> bool {
        match (shape, p) {
            (RootShape::Medium { i, j }, UParam::Block(x)) => self.in_block(x, i, j),
            (RootShape::Ultrashort { j }, UParam::Point(u)) => {
                self.in_block(&u.m, 0, j) && self.in_block(&u.a, -j, j) && self.contains(u)
            }
            (RootShape::Long { j }, UParam::Point(u)) => u.m.is_zero() && self.phi_preimage(&u.a, j),
            _ => false,
        }
    }

    fn phi_preimage(&self, a: &Mat, j: i32) -> bool {
        let (pr, pc) = (self.pos(-j), self.pos(j));
        self.ring().elements().any(|x| {
            let mut c = self.alg.zero();
            c.set(pr, pc, x);
            self.phi(&c).a == *a
        })
    }
}

/// `T_{ij}(a) = 1 + a − ā`, `T_j(u) = 1 + π(u) − π(u)‾ + ρ(u)`.
pub fn unitary_root_element(o: &OddForm, shape: RootShape, p: &UParam) -> Result<Mat, OddFormError> {
    if !o.is_root_param(shape, p) {
        return Err(OddFormError::ParameterOutOfBlock(format!("{shape:?}")));
    }
    let alg = o.algebra();
    Ok(match p {
        UParam::Block(x) => alg.sub(&alg.add(&alg.one(), x), &o.bar(x)),
        UParam::Point(u) => alg.add(&alg.sub(&alg.add(&alg.one(), &u.m), &o.bar(&u.m)), &u.a),
    })
}

/// Reads the coordinate of a root element: block `(i, j)` for medium roots,
/// `(e_0 g e_j, e_{−j} g e_j)` otherwise.
pub fn read_root_coordinate(o: &OddForm, shape: RootShape, g: &Mat) -> Result<UParam, String> {
    match shape {
        RootShape::Medium { i, j } => Ok(UParam::Block(o.block(g, i, j))),
        RootShape::Ultrashort { j } | RootShape::Long { j } => {
            let u = Point { m: o.block(g, 0, j), a: o.block(g, -j, j) };
            let p = UParam::Point(u);
            if o.is_root_param(shape, &p) {
                Ok(p)
            } else {
                let UParam::Point(u) = &p else { unreachable!() };
                Err(format!("{} is not a parameter", o.format_point(u)))
            }
        }
    }
}

impl Realization for Unitary {
    type G = Mat;
    type P = UParam;

    fn system(&self) -> &RootSystem {
        &self.system
    }
    fn describe(&self) -> String {
        format!("unitary {} over {}", self.system.tag(), self.form.describe())
    }
    fn one(&self) -> Mat {
        self.form.algebra().one()
    }
    fn mul(&self, g: &Mat, h: &Mat) -> Mat {
        self.form.algebra().mul(g, h)
    }
    fn inv(&self, g: &Mat) -> Mat {
        self.form.bar(g)
    }
    fn format_g(&self, g: &Mat) -> String {
        self.form.algebra().format(g)
    }
    fn t(&self, root: usize, p: &UParam) -> Mat {
        unitary_root_element(&self.form, self.shapes[root], p).expect("root parameter")
    }
    fn read(&self, root: usize, g: &Mat) -> Result<UParam, PatternMismatch> {
        read_root_coordinate(&self.form, self.shapes[root], g)
            .map_err(|detail| PatternMismatch { root: self.system.format_root(root), detail })
    }
    fn p_zero(&self, root: usize) -> UParam {
        match self.shapes[root] {
            RootShape::Medium { .. } => UParam::Block(self.form.algebra().zero()),
            _ => UParam::Point(self.form.zero_point()),
        }
    }
    fn p_add(&self, _root: usize, p: &UParam, q: &UParam) -> UParam {
        match (p, q) {
            (UParam::Block(x), UParam::Block(y)) => UParam::Block(self.form.algebra().add(x, y)),
            (UParam::Point(u), UParam::Point(v)) => UParam::Point(self.form.plus(u, v)),
            _ => panic!("mismatched parameter kinds"),
        }
    }
    fn p_neg(&self, _root: usize, p: &UParam) -> UParam {
        match p {
            UParam::Block(x) => UParam::Block(self.form.algebra().neg(x)),
            UParam::Point(u) => UParam::Point(self.form.minus(u)),
        }
    }
    fn p_count(&self, root: usize) -> u64 {
        match self.shapes[root] {
            RootShape::Medium { .. } => self.form.ring().order(),
            _ => self.points[root].len() as u64,
        }
    }
    fn p_nth(&self, root: usize, idx: u64) -> UParam {
        match self.shapes[root] {
            RootShape::Medium { i, j } => {
                let mut x = self.form.algebra().zero();
                x.set(self.form.pos(i), self.form.pos(j), idx % self.form.ring().order());
                UParam::Block(x)
            }
            _ => self.points[root][idx as usize].clone(),
        }
    }
    fn p_random(&self, root: usize, rng: &mut dyn RngCore) -> UParam {
        let n = self.p_count(root);
        self.p_nth(root, rng.next_u64() % n)
    }
    fn is_param(&self, root: usize, p: &UParam) -> bool {
        self.form.is_root_param(self.shapes[root], p)
    }
    fn p_format(&self, _root: usize, p: &UParam) -> String {
        match p {
            UParam::Block(x) => self.form.algebra().format(x),
            UParam::Point(u) => self.form.format_point(u),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn split(tag: &str, ell: usize, m0: usize) -> (OddForm, Family) {
        build_split_oddform(&Ring::parse(tag).unwrap(), ell, m0).unwrap()
    }

    #[test]
    fn split_axioms_hold() {
        for m0 in [0, 1] {
            let (o, f) = split("z4", 2, m0);
            let mut c = Checker::new(5, 300);
            check_oddform_axioms(&o, &f, &mut c);
            let r = c.finish();
            assert!(r.passed(), "m0={m0}: {:?}", r.failures().next());
        }
        let (o, f) = split("z4", 2, 1);
        let mut c = Checker::new(6, 200);
        check_oddform_axioms(&o.at_level(2), &f, &mut c);
        let r = c.finish();
        assert!(r.outcomes.iter().filter(|x| !x.name.starts_with("family")).all(|x| x.status == crate::check::Status::Pass));
    }

    #[test]
    fn mutations_fail_with_witness() {
        let (o, _) = split("z4", 2, 1);
        let t = o.with_involution(Involution::Transpose);
        let mut c = Checker::new(5, 50);
        check_family(&t, &t.standard_family(), &mut c);
        let r = c.finish();
        let fam = r.get("family involution swaps").unwrap();
        assert!(fam.witness.is_some());

        let min = o.with_parameter(Parameter::Minimal);
        let mut c = Checker::new(5, 100);
        check_oddform_axioms(&min, &min.standard_family(), &mut c);
        let r = c.finish();
        assert!(r.failures().all(|x| x.name.starts_with("family")));
        assert!(r.get("family pi of q").unwrap().witness.is_some());
        assert!(r.outcomes.iter().filter(|x| !x.name.starts_with("family")).all(|x| x.status == crate::check::Status::Pass));
    }

    #[test]
    fn root_elements_multiply() {
        let (o, f) = split("z4", 3, 1);
        let u = Unitary::new(o.clone(), f).unwrap();
        let sys = u.system().clone();
        let ultra = sys.parse_root("e1").unwrap();
        let med = sys.parse_root("e1-e2").unwrap();
        let mut rng = instance_rng(1, "t", 0);
        for _ in 0..50 {
            let p = u.p_random(ultra, &mut rng);
            let q = u.p_random(ultra, &mut rng);
            let g = u.t(ultra, &p);
            assert_eq!(u.mul(&g, &u.inv(&g)), u.one());
            assert_eq!(u.mul(&g, &u.t(ultra, &q)), u.t(ultra, &u.p_add(ultra, &p, &q)));
            assert_eq!(u.read(ultra, &g).unwrap(), p);
            let x = u.p_random(med, &mut rng);
            let y = u.p_random(med, &mut rng);
            assert_eq!(u.mul(&u.t(med, &x), &u.t(med, &y)), u.t(med, &u.p_add(med, &x, &y)));
            assert_eq!(u.read(med, &u.t(med, &x)).unwrap(), x);
        }
        assert_eq!(u.t(ultra, &u.p_zero(ultra)), u.one());
        assert_eq!(u.p_count(ultra), 4);
    }

    #[test]
    fn ultrashort_points_over_z2() {
        let (o, f) = split("z2", 3, 1);
        let u = Unitary::new(o, f).unwrap();
        let sys = u.system().clone();
        assert_eq!(u.p_count(sys.parse_root("e2").unwrap()), 2);
        assert_eq!(u.p_count(sys.parse_root("2e2").unwrap()), 1);
        assert_eq!(u.shape(sys.parse_root("-e1-e3").unwrap()), RootShape::Medium { i: 3, j: -1 });
    }
}
