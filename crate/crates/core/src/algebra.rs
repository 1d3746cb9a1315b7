//! Crossed modules over a matrix algebra `A`, homotopes `A^(s)`, and the
//! semidirect product `X ⋊ A`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand_core::RngCore;

use crate::check::{expect_eq, Checker, Report};
use crate::matrix::{Mat, MatrixAlgebra};
use crate::ring::Elem;

/// Associative unital algebras with a block structure, as used by the linear
/// realization.
pub trait AssocAlgebra {
    type El: Clone + Eq + Ord + fmt::Debug;

    fn shape(&self) -> &MatrixAlgebra;
    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn inverse(&self, a: &Self::El) -> Option<Self::El>;
    /// `e_i a e_j`.
    fn block(&self, a: &Self::El, i: usize, j: usize) -> Self::El;
    /// Number of parameters in block `(i, j)`.
    fn param_count(&self, i: usize, j: usize) -> u64;
    fn param(&self, i: usize, j: usize, idx: u64) -> Self::El;
    fn random_param(&self, i: usize, j: usize, rng: &mut dyn RngCore) -> Self::El;
    fn is_param(&self, a: &Self::El, i: usize, j: usize) -> bool;
    fn format(&self, a: &Self::El) -> String;

    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El {
        self.add(a, &self.neg(b))
    }

    fn blocks(&self) -> usize {
        self.shape().blocks()
    }
}

pub(crate) struct DynRng<'a>(pub(crate) &'a mut dyn RngCore);

impl RngCore for DynRng<'_> {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.0.fill_bytes(dest)
    }
    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand_core::Error> {
        self.0.try_fill_bytes(dest)
    }
}

impl AssocAlgebra for MatrixAlgebra {
    type El = Mat;

    fn shape(&self) -> &MatrixAlgebra {
        self
    }
    fn zero(&self) -> Mat {
        MatrixAlgebra::zero(self)
    }
    fn one(&self) -> Mat {
        MatrixAlgebra::one(self)
    }
    fn add(&self, a: &Mat, b: &Mat) -> Mat {
        MatrixAlgebra::add(self, a, b)
    }
    fn neg(&self, a: &Mat) -> Mat {
        MatrixAlgebra::neg(self, a)
    }
    fn mul(&self, a: &Mat, b: &Mat) -> Mat {
        MatrixAlgebra::mul(self, a, b)
    }
    fn inverse(&self, a: &Mat) -> Option<Mat> {
        MatrixAlgebra::inverse(self, a)
    }
    fn block(&self, a: &Mat, i: usize, j: usize) -> Mat {
        MatrixAlgebra::block(self, a, i, j)
    }
    fn param_count(&self, i: usize, j: usize) -> u64 {
        self.block_order(i, j)
    }
    fn param(&self, i: usize, j: usize, idx: u64) -> Mat {
        self.block_element(i, j, idx)
    }
    fn random_param(&self, i: usize, j: usize, rng: &mut dyn RngCore) -> Mat {
        self.random_block(i, j, &mut DynRng(rng))
    }
    fn is_param(&self, a: &Mat, i: usize, j: usize) -> bool {
        self.in_block(a, i, j)
    }
    fn format(&self, a: &Mat) -> String {
        MatrixAlgebra::format(self, a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrossedKind {
    /// The ideal `cA` with `δ` the inclusion.
    Ideal(Elem),
    /// `A^(s)`: `x·y = xys`, `δ(x) = xs`.
    Homotope(Elem),
    /// `A` as a bimodule with zero multiplication and `δ = 0`.
    ZeroProduct,
    /// `δ(x) = xt` and `x·y = xty` for a matrix `t`; a crossed module only when `t` is central.
    Twisted(Mat),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraError {
    LabelMismatch { from: Elem, to: Elem, along: Elem },
    InvalidCrossedModule(String),
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::LabelMismatch { from, to, along } => {
                write!(f, "label {from} is not {to}·{along}")
            }
            AlgebraError::InvalidCrossedModule(w) => write!(f, "not a crossed module: {w}"),
        }
    }
}

impl core::error::Error for AlgebraError {}

/// A crossed module `δ: X → A` whose carrier is a set of matrices of the same shape as `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedModule {
    pub ambient: MatrixAlgebra,
    pub kind: CrossedKind,
    entries: Vec<Elem>,
}

impl CrossedModule {
    pub fn new(ambient: MatrixAlgebra, kind: CrossedKind) -> CrossedModule {
        let ring = ambient.ring();
        let mut entries: Vec<Elem> = match kind {
            CrossedKind::Ideal(c) => ring.elements().map(|r| ring.mul(c, r)).collect(),
            _ => ring.elements().collect(),
        };
        entries.sort_unstable();
        entries.dedup();
        CrossedModule { ambient, kind, entries }
    }

    pub fn ideal(ambient: MatrixAlgebra, c: Elem) -> CrossedModule {
        CrossedModule::new(ambient, CrossedKind::Ideal(c))
    }

    pub fn describe(&self) -> String {
        let r = self.ambient.ring();
        match &self.kind {
            CrossedKind::Ideal(c) => format!("ideal {}·A", r.format_elem(*c)),
            CrossedKind::Homotope(s) => format!("homotope A^({})", r.format_elem(*s)),
            CrossedKind::ZeroProduct => String::from("zero-product bimodule"),
            CrossedKind::Twisted(t) => format!("twisted by {}", self.ambient.format(t)),
        }
    }

    /// Allowed matrix entries of carrier elements.
    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn contains(&self, x: &Mat) -> bool {
        x.data.iter().all(|e| self.entries.binary_search(e).is_ok())
    }

    pub fn delta(&self, x: &Mat) -> Mat {
        let a = &self.ambient;
        match &self.kind {
            CrossedKind::Ideal(_) => x.clone(),
            CrossedKind::Homotope(s) => a.scale(x, *s),
            CrossedKind::ZeroProduct => a.zero(),
            CrossedKind::Twisted(t) => a.mul(x, t),
        }
    }

    /// The product of `X`.
    pub fn mul(&self, x: &Mat, y: &Mat) -> Mat {
        let a = &self.ambient;
        match &self.kind {
            CrossedKind::Ideal(_) => a.mul(x, y),
            CrossedKind::Homotope(s) => a.scale(&a.mul(x, y), *s),
            CrossedKind::ZeroProduct => a.zero(),
            CrossedKind::Twisted(t) => a.mul(&a.mul(x, t), y),
        }
    }

    pub fn left(&self, a: &Mat, x: &Mat) -> Mat {
        self.ambient.mul(a, x)
    }

    pub fn right(&self, x: &Mat, a: &Mat) -> Mat {
        self.ambient.mul(x, a)
    }

    fn cells(&self) -> usize {
        self.ambient.size() * self.ambient.size()
    }

    /// `|X|`, saturating.
    pub fn order(&self) -> u64 {
        (self.entries.len() as u64).checked_pow(self.cells() as u32).unwrap_or(u64::MAX)
    }

    pub fn element(&self, mut idx: u64) -> Mat {
        let base = self.entries.len() as u64;
        let mut m = self.ambient.zero();
        for d in m.data.iter_mut() {
            *d = self.entries[(idx % base) as usize];
            idx /= base;
        }
        m
    }

    pub fn random(&self, rng: &mut dyn RngCore) -> Mat {
        let mut m = self.ambient.zero();
        for d in m.data.iter_mut() {
            *d = self.entries[(rng.next_u64() % self.entries.len() as u64) as usize];
        }
        m
    }

    fn block_cells(&self, i: usize, j: usize) -> Vec<usize> {
        let a = &self.ambient;
        let n = a.size();
        (0..n * n).filter(|&k| a.block_of(k / n) == i && a.block_of(k % n) == j).collect()
    }

    pub fn block_count(&self, i: usize, j: usize) -> u64 {
        (self.entries.len() as u64).checked_pow(self.block_cells(i, j).len() as u32).unwrap_or(u64::MAX)
    }

    pub fn block_element(&self, i: usize, j: usize, mut idx: u64) -> Mat {
        let base = self.entries.len() as u64;
        let mut m = self.ambient.zero();
        for k in self.block_cells(i, j) {
            m.data[k] = self.entries[(idx % base) as usize];
            idx /= base;
        }
        m
    }

    pub fn random_block(&self, i: usize, j: usize, rng: &mut dyn RngCore) -> Mat {
        let mut m = self.ambient.zero();
        for k in self.block_cells(i, j) {
            m.data[k] = self.entries[(rng.next_u64() % self.entries.len() as u64) as usize];
        }
        m
    }
}

/// `A^(s)` as a crossed module over `A`.
pub fn homotope(ambient: &MatrixAlgebra, s: Elem) -> CrossedModule {
    CrossedModule::new(ambient.clone(), CrossedKind::Homotope(s))
}

/// The transition `A^(s') → A^(s)`, `a^(s') ↦ (a s'')^(s)`, along `s'' : s → s'`.
pub fn homotope_transition(
    ambient: &MatrixAlgebra,
    from: Elem,
    to: Elem,
    along: Elem,
    x: &Mat,
) -> Result<Mat, AlgebraError> {
    if ambient.ring().mul(to, along) != from {
        return Err(AlgebraError::LabelMismatch { from, to, along });
    }
    Ok(ambient.scale(x, along))
}

/// Verifies the crossed module identities, exhaustively when `|X|²·|A|` fits the budget.
pub fn check_crossed_module(x: &CrossedModule, checker: &mut Checker) {
    let alg = &x.ambient;
    let na = alg.ring().order().checked_pow((alg.size() * alg.size()) as u32).unwrap_or(u64::MAX);
    let nx = x.order();
    let all = |i: u64| alg.random_from_index(i);
    let pair = nx.saturating_mul(nx);
    let triple_xa = pair.saturating_mul(na);
    let fmt = |m: &Mat| alg.format(m);

    // (x, y, a) triples
    let decode = |i: u64| (x.element(i % nx), x.element((i / nx) % nx), all(i / nx / nx));
    let sample = |rng: &mut dyn RngCore| (x.random(rng), x.random(rng), alg.random(&mut DynRng(rng)));

    type Law<'a> = (&'a str, &'a dyn Fn(&Mat, &Mat, &Mat) -> Result<(), String>);
    let laws: [Law; 10] = [
        ("delta additive", &|p, q, _| {
            expect_eq("δ(x+y)", &x.delta(&alg.add(p, q)), &alg.add(&x.delta(p), &x.delta(q)))
        }),
        ("delta left equivariant", &|p, _, a| {
            expect_eq("δ(ax) vs aδ(x)", &x.delta(&x.left(a, p)), &alg.mul(a, &x.delta(p)))
        }),
        ("delta right equivariant", &|p, _, a| {
            expect_eq("δ(xa) vs δ(x)a", &x.delta(&x.right(p, a)), &alg.mul(&x.delta(p), a))
        }),
        ("peiffer left", &|p, q, _| expect_eq("xy vs δ(x)y", &x.mul(p, q), &x.left(&x.delta(p), q))),
        ("peiffer right", &|p, q, _| expect_eq("xy vs xδ(y)", &x.mul(p, q), &x.right(p, &x.delta(q)))),
        ("action (ax)y = a(xy)", &|p, q, a| {
            expect_eq("(ax)y", &x.mul(&x.left(a, p), q), &x.left(a, &x.mul(p, q)))
        }),
        ("action (xa)y = x(ay)", &|p, q, a| {
            expect_eq("(xa)y", &x.mul(&x.right(p, a), q), &x.mul(p, &x.left(a, q)))
        }),
        ("action (xy)a = x(ya)", &|p, q, a| {
            expect_eq("(xy)a", &x.right(&x.mul(p, q), a), &x.mul(p, &x.right(q, a)))
        }),
        ("carrier closed", &|p, q, a| {
            for m in [x.mul(p, q), x.left(a, p), x.right(p, a), alg.add(p, q)] {
                if !x.contains(&m) {
                    return Err(format!("{} leaves the carrier", fmt(&m)));
                }
            }
            Ok(())
        }),
        ("product associative", &|p, q, a| {
            // the third argument is reused as a carrier element when it belongs to X
            let r = if x.contains(a) { a.clone() } else { p.clone() };
            expect_eq("(xy)z", &x.mul(&x.mul(p, q), &r), &x.mul(p, &x.mul(q, &r)))
        }),
    ];
    for (name, law) in laws {
        checker.auto(
            name,
            triple_xa,
            |i| {
                let (p, q, a) = decode(i);
                law(&p, &q, &a).map_err(|e| format!("x={} y={} a={}: {e}", fmt(&p), fmt(&q), fmt(&a)))
            },
            |rng| {
                let (p, q, a) = sample(rng);
                law(&p, &q, &a).map_err(|e| format!("x={} y={} a={}: {e}", fmt(&p), fmt(&q), fmt(&a)))
            },
        );
    }
}

impl MatrixAlgebra {
    /// The `i`-th element of `A` in mixed-radix order.
    pub fn random_from_index(&self, mut i: u64) -> Mat {
        let base = self.ring().order();
        let mut m = self.zero();
        for d in m.data.iter_mut() {
            *d = i % base;
            i /= base;
        }
        m
    }
}

/// Checks that composing transitions multiplies labels, on every element of `A`.
pub fn check_transition_functoriality(alg: &MatrixAlgebra, s: Elem, checker: &mut Checker) {
    let ring = alg.ring().clone();
    let n = ring.order();
    let na = n.checked_pow((alg.size() * alg.size()) as u32).unwrap_or(u64::MAX);
    // along a: s → sa, then along b: sa → sab, versus along ab: s → sab
    let count = n.saturating_mul(n).saturating_mul(na);
    let law = |a: Elem, b: Elem, x: &Mat| -> Result<(), String> {
        let s1 = ring.mul(s, a);
        let s2 = ring.mul(s1, b);
        let step = homotope_transition(alg, s2, s1, b, x).map_err(|e| format!("{e}"))?;
        let two = homotope_transition(alg, s1, s, a, &step).map_err(|e| format!("{e}"))?;
        let direct = homotope_transition(alg, s2, s, ring.mul(a, b), x).map_err(|e| format!("{e}"))?;
        expect_eq("composite", &two, &direct)?;
        // morphism of crossed modules over A
        let hs2 = homotope(alg, s2);
        let hs = homotope(alg, s);
        expect_eq("δ∘transition", &hs.delta(&direct), &hs2.delta(x))?;
        let y = alg.random_from_index(a.wrapping_mul(31).wrapping_add(b) % na.max(1));
        let lhs = homotope_transition(alg, s2, s, ring.mul(a, b), &hs2.mul(x, &y)).map_err(|e| format!("{e}"))?;
        let ty = homotope_transition(alg, s2, s, ring.mul(a, b), &y).map_err(|e| format!("{e}"))?;
        expect_eq("multiplicative", &lhs, &hs.mul(&direct, &ty))?;
        let left = homotope_transition(alg, s2, s, ring.mul(a, b), &alg.mul(&y, x)).map_err(|e| format!("{e}"))?;
        expect_eq("A-linear", &left, &alg.mul(&y, &direct))
    };
    checker.auto(
        "transition functoriality",
        count,
        |i| law(i % n, (i / n) % n, &alg.random_from_index(i / n / n)),
        |rng| law(rng.next_u64() % n, rng.next_u64() % n, &alg.random(rng)),
    );
}

/// Which parameters the semidirect realization exposes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    /// All of `e_i (X ⋊ A) e_j`.
    Full,
    /// Only `e_i X e_j ⋊ 0`, the parameters of `G(Φ, X)`.
    Kernel,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SdEl {
    pub x: Mat,
    pub a: Mat,
}

/// `X ⋊ A` with `(x, a)(y, b) = (xy + a·y + x·b, ab)`.
#[derive(Clone, Debug)]
pub struct Semidirect {
    pub module: CrossedModule,
    pub part: Part,
}

impl Semidirect {
    pub fn new(module: CrossedModule) -> Result<Semidirect, AlgebraError> {
        let mut probe = Checker::new(0x5eed, 2000);
        check_crossed_module(&module, &mut probe);
        let report = probe.finish();
        if let Some(f) = report.failures().next() {
            let w = f.witness.as_ref().map(|w| w.detail.clone()).unwrap_or_default();
            return Err(AlgebraError::InvalidCrossedModule(format!("{}: {w}", f.name)));
        }
        Ok(Semidirect { module, part: Part::Full })
    }

    pub fn kernel_view(&self) -> Semidirect {
        Semidirect { module: self.module.clone(), part: Part::Kernel }
    }

    fn alg(&self) -> &MatrixAlgebra {
        &self.module.ambient
    }

    pub fn p1(&self, e: &SdEl) -> Mat {
        e.a.clone()
    }

    pub fn p2(&self, e: &SdEl) -> Mat {
        self.alg().add(&self.module.delta(&e.x), &e.a)
    }

    pub fn d(&self, a: &Mat) -> SdEl {
        SdEl { x: self.alg().zero(), a: a.clone() }
    }

    pub fn inject(&self, x: &Mat) -> SdEl {
        SdEl { x: x.clone(), a: self.alg().zero() }
    }

    /// `(x, 1)`, the element of `G(Φ, X)` with parameter `x`.
    pub fn kernel_unit(&self, x: &Mat) -> SdEl {
        SdEl { x: x.clone(), a: self.alg().one() }
    }
}

impl AssocAlgebra for Semidirect {
    type El = SdEl;

    fn shape(&self) -> &MatrixAlgebra {
        self.alg()
    }
    fn zero(&self) -> SdEl {
        SdEl { x: self.alg().zero(), a: self.alg().zero() }
    }
    fn one(&self) -> SdEl {
        SdEl { x: self.alg().zero(), a: self.alg().one() }
    }
    fn add(&self, p: &SdEl, q: &SdEl) -> SdEl {
        SdEl { x: self.alg().add(&p.x, &q.x), a: self.alg().add(&p.a, &q.a) }
    }
    fn neg(&self, p: &SdEl) -> SdEl {
        SdEl { x: self.alg().neg(&p.x), a: self.alg().neg(&p.a) }
    }
    fn mul(&self, p: &SdEl, q: &SdEl) -> SdEl {
        let m = &self.module;
        let alg = self.alg();
        let x = alg.add(&alg.add(&m.mul(&p.x, &q.x), &m.left(&p.a, &q.x)), &m.right(&p.x, &q.a));
        SdEl { x, a: alg.mul(&p.a, &q.a) }
    }
    fn inverse(&self, p: &SdEl) -> Option<SdEl> {
        let alg = self.alg();
        let m = &self.module;
        let b = alg.inverse(&p.a)?;
        let x1 = m.right(&p.x, &b);
        let c = alg.inverse(&alg.add(&alg.one(), &m.delta(&x1)))?;
        let y = alg.neg(&m.left(&c, &x1));
        Some(SdEl { x: m.left(&b, &y), a: b })
    }
    fn block(&self, p: &SdEl, i: usize, j: usize) -> SdEl {
        SdEl { x: self.alg().block(&p.x, i, j), a: self.alg().block(&p.a, i, j) }
    }
    fn param_count(&self, i: usize, j: usize) -> u64 {
        let xs = self.module.block_count(i, j);
        match self.part {
            Part::Kernel => xs,
            Part::Full => xs.saturating_mul(self.alg().block_order(i, j)),
        }
    }
    fn param(&self, i: usize, j: usize, idx: u64) -> SdEl {
        let xs = self.module.block_count(i, j);
        let x = self.module.block_element(i, j, idx % xs);
        let a = match self.part {
            Part::Kernel => self.alg().zero(),
            Part::Full => self.alg().block_element(i, j, idx / xs),
        };
        SdEl { x, a }
    }
    fn random_param(&self, i: usize, j: usize, rng: &mut dyn RngCore) -> SdEl {
        let x = self.module.random_block(i, j, rng);
        let a = match self.part {
            Part::Kernel => self.alg().zero(),
            Part::Full => self.alg().random_block(i, j, &mut DynRng(rng)),
        };
        SdEl { x, a }
    }
    fn is_param(&self, p: &SdEl, i: usize, j: usize) -> bool {
        let alg = self.alg();
        let a_ok = match self.part {
            Part::Kernel => p.a.is_zero(),
            Part::Full => alg.in_block(&p.a, i, j),
        };
        a_ok && alg.in_block(&p.x, i, j) && self.module.contains(&p.x)
    }
    fn format(&self, p: &SdEl) -> String {
        format!("{} ⋊ {}", self.alg().format(&p.x), self.alg().format(&p.a))
    }
}

/// Verifies the reflexive-graph structure of `X ⋊ A`.
pub fn check_semidirect(sd: &Semidirect, checker: &mut Checker) {
    let alg = sd.shape().clone();
    let m = &sd.module;
    let rand_el = |rng: &mut dyn RngCore| SdEl { x: m.random(rng), a: alg.random(&mut DynRng(rng)) };
    let budget = checker.budget;
    checker.sampled("semidirect associative", budget, |rng| {
        let (p, q, r) = (rand_el(rng), rand_el(rng), rand_el(rng));
        expect_eq("(pq)r", &sd.mul(&sd.mul(&p, &q), &r), &sd.mul(&p, &sd.mul(&q, &r)))
    });
    checker.sampled("semidirect distributive", budget, |rng| {
        let (p, q, r) = (rand_el(rng), rand_el(rng), rand_el(rng));
        expect_eq("p(q+r)", &sd.mul(&p, &sd.add(&q, &r)), &sd.add(&sd.mul(&p, &q), &sd.mul(&p, &r)))
    });
    checker.sampled("p1 and p2 multiplicative", budget, |rng| {
        let (p, q) = (rand_el(rng), rand_el(rng));
        let pq = sd.mul(&p, &q);
        expect_eq("p1", &sd.p1(&pq), &alg.mul(&sd.p1(&p), &sd.p1(&q)))?;
        expect_eq("p2", &sd.p2(&pq), &alg.mul(&sd.p2(&p), &sd.p2(&q)))
    });
    checker.sampled("common section", budget, |rng| {
        let a = alg.random(&mut DynRng(rng));
        expect_eq("p1∘d", &sd.p1(&sd.d(&a)), &a)?;
        expect_eq("p2∘d", &sd.p2(&sd.d(&a)), &a)
    });
    checker.sampled("p2 - p1 = delta", budget, |rng| {
        let p = rand_el(rng);
        expect_eq("p2-p1", &alg.sub(&sd.p2(&p), &sd.p1(&p)), &m.delta(&p.x))
    });
    checker.sampled("kernel of p1 is X", budget, |rng| {
        let (x, y) = (m.random(rng), m.random(rng));
        expect_eq("(x,0)(y,0)", &sd.mul(&sd.inject(&x), &sd.inject(&y)), &sd.inject(&m.mul(&x, &y)))?;
        let a = alg.random(&mut DynRng(rng));
        expect_eq("d(a)(x,0)", &sd.mul(&sd.d(&a), &sd.inject(&x)), &sd.inject(&m.left(&a, &x)))
    });
    checker.sampled("ker p1 meets image of d trivially", budget, |rng| {
        let a = alg.random(&mut DynRng(rng));
        if sd.p1(&sd.d(&a)).is_zero() && !a.is_zero() {
            return Err(format!("d({}) lies in ker p1", alg.format(&a)));
        }
        Ok(())
    });
    checker.sampled("semidirect inverse", budget, |rng| {
        let x = m.random(rng);
        let a = alg.random_unit(&mut DynRng(rng));
        let p = SdEl { x, a };
        match sd.inverse(&p) {
            Some(q) => {
                expect_eq("pq", &sd.mul(&p, &q), &sd.one())?;
                expect_eq("qp", &sd.mul(&q, &p), &sd.one())
            }
            None => Ok(()),
        }
    });
}

/// Runs every crossed-module check for one carrier.
pub fn crossed_module_report(x: &CrossedModule, seed: u64, budget: u64) -> Report {
    let mut c = Checker::new(seed, budget);
    check_crossed_module(x, &mut c);
    c.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    fn z12() -> MatrixAlgebra {
        MatrixAlgebra::full(Ring::parse("z12").unwrap(), 1)
    }

    #[test]
    fn homotope_examples() {
        let a = z12();
        let h = homotope(&a, 3);
        let two = a.scalar(2);
        let five = a.scalar(5);
        assert_eq!(h.mul(&two, &five), a.scalar(6));
        assert_eq!(h.delta(&two), a.scalar(6));
        let h0 = homotope(&a, 0);
        assert!(h0.mul(&two, &five).is_zero());
        assert!(h0.delta(&two).is_zero());
    }

    #[test]
    fn transition_examples() {
        let a = z12();
        for v in 0..12 {
            let x = a.scalar(v);
            assert_eq!(homotope_transition(&a, 9, 3, 3, &x).unwrap(), a.scalar(3 * v % 12));
            assert_eq!(homotope_transition(&a, 5, 5, 1, &x).unwrap(), x);
            let step = homotope_transition(&a, 0, 6, 2, &x).unwrap();
            let two = homotope_transition(&a, 6, 3, 2, &step).unwrap();
            assert_eq!(two, homotope_transition(&a, 0, 3, 4, &x).unwrap());
        }
        assert!(matches!(homotope_transition(&a, 9, 3, 2, &a.one()), Err(AlgebraError::LabelMismatch { .. })));
    }

    #[test]
    fn crossed_module_examples() {
        let a = MatrixAlgebra::full(Ring::parse("z4").unwrap(), 2);
        assert!(crossed_module_report(&CrossedModule::ideal(a.clone(), 2), 1, 5000).passed());
        assert!(crossed_module_report(&CrossedModule::new(a.clone(), CrossedKind::ZeroProduct), 1, 5000).passed());
        let t = a.unit(0, 1);
        let r = crossed_module_report(&CrossedModule::new(a.clone(), CrossedKind::Twisted(t)), 1, 5000);
        assert!(!r.passed());
        let f = r.failures().next().unwrap();
        assert!(f.witness.is_some());
        assert!(Semidirect::new(CrossedModule::new(a, CrossedKind::Twisted(MatrixAlgebra::full(Ring::parse("z4").unwrap(), 2).unit(0, 1)))).is_err());
    }

    #[test]
    fn every_homotope_of_z12_is_crossed() {
        let a = z12();
        for s in 0..12 {
            let r = crossed_module_report(&homotope(&a, s), 9, 1 << 20);
            assert!(r.passed(), "s = {s}: {:?}", r.failures().next());
        }
        let mut c = Checker::new(3, 1 << 20);
        check_transition_functoriality(&a, 3, &mut c);
        assert!(c.finish().passed());
    }

    #[test]
    fn semidirect_structure() {
        let a = MatrixAlgebra::full(Ring::parse("z4").unwrap(), 2);
        let sd = Semidirect::new(CrossedModule::ideal(a.clone(), 2)).unwrap();
        let mut c = Checker::new(11, 300);
        check_semidirect(&sd, &mut c);
        let r = c.finish();
        assert!(r.passed(), "{:?}", r.failures().next());
        let zero = Semidirect::new(CrossedModule::ideal(a.clone(), 0)).unwrap();
        let p = SdEl { x: a.zero(), a: a.unit(0, 1) };
        assert_eq!(zero.mul(&p, &p).a, a.mul(&p.a, &p.a));
        let h = Semidirect::new(homotope(&a, 2)).unwrap();
        let mut c = Checker::new(12, 300);
        check_semidirect(&h, &mut c);
        assert!(c.finish().passed());
    }
}
