//! The relative Steinberg group of a crossed module `δ: X → A`, evaluated
//! through its image in `Ker(p1) ≤ G(Φ, X ⋊ A)`: the presentation by
//! `z`-generators and the crossed square over `G(Φ, A)`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::algebra::{AlgebraError, AssocAlgebra, CrossedModule, SdEl, Semidirect};
use crate::check::{expect_eq, Checker};
use crate::matrix::{Mat, MatrixAlgebra};
use crate::realize::{Linear, Realization};
use crate::rootsys::{RootSubset, RootSystem};

/// `G(Φ, X ⋊ A)` with helpers for the images of `G(Φ, X)`, `St(Φ, A)` and `z`-generators.
pub struct RelativeModel {
    pub lin: Linear<Semidirect>,
}

fn pick<T: Copy>(xs: &[T], rng: &mut dyn RngCore) -> T {
    xs[(rng.next_u64() % xs.len() as u64) as usize]
}

impl RelativeModel {
    pub fn new(module: CrossedModule) -> Result<RelativeModel, AlgebraError> {
        let sd = Semidirect::new(module)?;
        let lin = Linear::new(sd).ok_or_else(|| AlgebraError::InvalidCrossedModule(String::from("needs at least two blocks")))?;
        Ok(RelativeModel { lin })
    }

    pub fn sd(&self) -> &Semidirect {
        &self.lin.algebra
    }

    pub fn alg(&self) -> &MatrixAlgebra {
        &self.sd().module.ambient
    }

    pub fn system(&self) -> &RootSystem {
        self.lin.system()
    }

    pub fn describe(&self) -> String {
        format!("{} with X = {}", self.lin.describe(), self.sd().module.describe())
    }

    /// `x_α(a)` for `a ∈ P_α(X)`.
    pub fn xe(&self, root: usize, a: &Mat) -> SdEl {
        self.lin.t(root, &SdEl { x: a.clone(), a: self.alg().zero() })
    }

    /// `d(t_α(p))` for `p ∈ P_α(A)`.
    pub fn te(&self, root: usize, p: &Mat) -> SdEl {
        self.lin.t(root, &SdEl { x: self.alg().zero(), a: p.clone() })
    }

    /// `z_α(a, p) = ^{t_{−α}(p)} x_α(a)`.
    pub fn z(&self, root: usize, a: &Mat, p: &Mat) -> SdEl {
        let neg = self.system().neg(root);
        self.lin.conj(&self.te(neg, p), &self.xe(root, a))
    }

    pub fn d(&self, u: &Mat) -> SdEl {
        self.sd().d(u)
    }

    pub fn p1(&self, g: &SdEl) -> Mat {
        self.sd().p1(g)
    }

    pub fn p2(&self, g: &SdEl) -> Mat {
        self.sd().p2(g)
    }

    pub fn x_param(&self, root: usize, rng: &mut dyn RngCore) -> Mat {
        let (i, j) = self.lin.ends(root);
        self.sd().module.random_block(i, j, rng)
    }

    pub fn a_param(&self, root: usize, rng: &mut dyn RngCore) -> Mat {
        let (i, j) = self.lin.ends(root);
        self.alg().block_element(i, j, rng.next_u64() % self.alg().block_order(i, j))
    }

    /// A random word of one to three root elements over `X` in `set`.
    pub fn x_word(&self, set: &[usize], rng: &mut dyn RngCore) -> SdEl {
        let k = 1 + rng.next_u64() % 3;
        let mut g = self.lin.one();
        for _ in 0..k {
            let r = pick(set, rng);
            g = self.lin.mul(&g, &self.xe(r, &self.x_param(r, rng)));
        }
        g
    }

    /// A random word of one to three root elements over `A` in `set`, as `d(·)`.
    pub fn a_word(&self, set: &[usize], rng: &mut dyn RngCore) -> SdEl {
        let k = 1 + rng.next_u64() % 3;
        let mut g = self.lin.one();
        for _ in 0..k {
            let r = pick(set, rng);
            g = self.lin.mul(&g, &self.te(r, &self.a_param(r, rng)));
        }
        g
    }

    /// A random product of one to three `z`-generators.
    pub fn z_word(&self, rng: &mut dyn RngCore) -> SdEl {
        let roots: Vec<usize> = self.reduced_roots();
        let k = 1 + rng.next_u64() % 3;
        let mut g = self.lin.one();
        for _ in 0..k {
            let r = pick(&roots, rng);
            let neg = self.system().neg(r);
            g = self.lin.mul(&g, &self.z(r, &self.x_param(r, rng), &self.a_param(neg, rng)));
        }
        g
    }

    /// `Φ ∖ 2Φ`.
    pub fn reduced_roots(&self) -> Vec<usize> {
        let sys = self.system();
        (0..sys.len()).filter(|&r| sys.half(r).is_none()).collect()
    }

    /// Two-dimensional thick `α`-series, as `(α, Σ)`.
    pub fn plane_series(&self) -> Vec<(usize, Vec<usize>)> {
        let sys = self.system();
        let mut out = Vec::new();
        for a in 0..sys.len() {
            for s in sys.all_thick_series(a) {
                if sys.span_dim(&s) == 2 {
                    out.push((a, s.into_iter().collect()));
                }
            }
        }
        out
    }

    fn fmt(&self, g: &SdEl) -> String {
        self.sd().format(g)
    }
}

/// Verifies the seven relation families of the `z`-presentation in `Ker(p1)`.
pub fn check_relative_presentation(model: &RelativeModel, checker: &mut Checker) {
    let m = model;
    let lin = &m.lin;
    let sys = m.system().clone();
    let reduced = m.reduced_roots();
    let series = m.plane_series();
    let budget = checker.budget;
    let fmt = |g: &SdEl| m.fmt(g);
    let alg = m.alg().clone();
    let module = m.sd().module.clone();

    checker.sampled("z lies in ker p1", budget, |rng| {
        let g = m.z_word(rng);
        expect_eq(&format!("p1({})", fmt(&g)), &m.p1(&g), &alg.one())
    });

    checker.sampled("z additive in a", budget, |rng| {
        let r = pick(&reduced, rng);
        let neg = sys.neg(r);
        let (a, b, p) = (m.x_param(r, rng), m.x_param(r, rng), m.a_param(neg, rng));
        let lhs = m.z(r, &alg.add(&a, &b), &p);
        let rhs = lin.mul(&m.z(r, &a, &p), &m.z(r, &b, &p));
        expect_eq(&format!("z_{}(a∔b, p)", sys.format_root(r)), &lhs, &rhs)
    });

    checker.sampled("z series multiplicative in g", budget, |rng| {
        let (_, s) = &series[(rng.next_u64() % series.len() as u64) as usize];
        let neg: Vec<usize> = s.iter().map(|&r| sys.neg(r)).collect();
        let (g, g2, h) = (m.x_word(s, rng), m.x_word(s, rng), m.a_word(&neg, rng));
        let lhs = lin.conj(&h, &lin.mul(&g, &g2));
        let rhs = lin.mul(&lin.conj(&h, &g), &lin.conj(&h, &g2));
        expect_eq("z_Σ(gg', h)", &lhs, &rhs)
    });

    // z_Σ(x_α(a), x_{−α}(p)) = z_α(a, p) for α ∈ Σ, exhaustive over small parameter blocks
    let members: Vec<(usize, usize)> = series
        .iter()
        .enumerate()
        .flat_map(|(k, (_, s))| s.iter().map(move |&r| (k, r)))
        .filter(|&(_, r)| sys.half(r).is_none())
        .collect();
    let per: Vec<(u64, u64)> = members
        .iter()
        .map(|&(_, r)| {
            let (i, j) = lin.ends(r);
            (module.block_count(i, j), alg.block_order(j, i))
        })
        .collect();
    let total: u64 = per.iter().map(|&(x, y)| x.saturating_mul(y)).fold(0u64, |a, b| a.saturating_add(b));
    let compat = |r: usize, a: &Mat, p: &Mat| -> Result<(), String> {
        let neg = sys.neg(r);
        let zs = lin.conj(&m.te(neg, p), &m.xe(r, a));
        expect_eq(&format!("z_Σ(x_{}(a), x_(-α)(p)) vs z_α(a,p)", sys.format_root(r)), &zs, &m.z(r, a, p))
    };
    checker.auto(
        "z series restricts to z root",
        total,
        |mut i| {
            for (n, &(_, r)) in members.iter().enumerate() {
                let (x, y) = per[n];
                if i < x * y {
                    let (bi, bj) = lin.ends(r);
                    return compat(r, &module.block_element(bi, bj, i % x), &alg.block_element(bj, bi, i / x));
                }
                i -= x * y;
            }
            Ok(())
        },
        |rng| {
            let (_, r) = members[(rng.next_u64() % members.len() as u64) as usize];
            let neg = sys.neg(r);
            compat(r, &m.x_param(r, rng), &m.a_param(neg, rng))
        },
    );

    let line_pairs: Vec<(usize, usize)> = reduced
        .iter()
        .flat_map(|&a| reduced.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| {
            !sys.is_parallel(a, b)
                && !sys.is_anti_parallel(a, b)
                && matches!(sys.thick_series(a, b), Ok(s) if s.len() == 1 && s.contains(&b))
        })
        .collect();
    checker.sampled("z commute across one-dimensional series", budget, |rng| {
        if line_pairs.is_empty() {
            return Ok(());
        }
        let (a, b) = pick(&line_pairs, rng);
        let za = m.z(a, &m.x_param(a, rng), &m.a_param(sys.neg(a), rng));
        let zb = m.z(b, &m.x_param(b, rng), &m.a_param(sys.neg(b), rng));
        expect_eq(
            &format!("[z_{}, z_{}]", sys.format_root(a), sys.format_root(b)),
            &lin.comm(&za, &zb),
            &lin.one(),
        )
    });

    checker.sampled("z conjugation rule", budget, |rng| {
        let (a, s) = &series[(rng.next_u64() % series.len() as u64) as usize];
        let a = *a;
        if sys.half(a).is_some() {
            return Ok(());
        }
        let neg_a = sys.neg(a);
        let neg: Vec<usize> = s.iter().map(|&r| sys.neg(r)).collect();
        let (x, p) = (m.x_param(a, rng), m.a_param(neg_a, rng));
        let (g, h) = (m.x_word(s, rng), m.a_word(&neg, rng));
        let za = m.z(a, &x, &p);
        let lhs = lin.conj(&za, &lin.conj(&h, &g));
        let c = lin.product(&[m.te(neg_a, &p), m.te(a, &module.delta(&x)), m.te(neg_a, &alg.neg(&p))]);
        let rhs = lin.conj(&lin.conj(&c, &h), &lin.conj(&c, &g));
        expect_eq(&format!("^z_{}(a,p) z_Σ(g,h)", sys.format_root(a)), &lhs, &rhs)
    });

    let bases = sys.rank_two_bases();
    checker.sampled("two-series exchange", budget, |rng| {
        let (a, b) = pick(&bases, rng);
        let span: RootSubset = sys.saturated_subsystem(&[a, b].into_iter().collect());
        let inner: Vec<usize> =
            span.iter().copied().filter(|&r| !sys.is_parallel(r, a) && !sys.is_parallel(r, b) && r != a && r != b && !sys.is_anti_parallel(r, a) && !sys.is_anti_parallel(r, b)).collect();
        if inner.is_empty() {
            return Ok(());
        }
        let (g, h) = (m.x_word(&inner, rng), m.a_word(&inner, rng));
        let (p, q) = (m.a_param(a, rng), m.a_param(b, rng));
        let (ta, tb) = (m.te(a, &p), m.te(b, &q));
        let lhs = lin.conj(&lin.conj(&ta, &lin.mul(&h, &tb)), &lin.conj(&ta, &g));
        let rhs = lin.conj(&lin.mul(&ta, &h), &lin.conj(&tb, &g));
        expect_eq(&format!("base ({}, {})", sys.format_root(a), sys.format_root(b)), &lhs, &rhs)
    });

    checker.sampled("z shift by delta", budget, |rng| {
        let r = pick(&reduced, rng);
        let neg = sys.neg(r);
        let (a, p, b) = (m.x_param(r, rng), m.a_param(neg, rng), m.x_param(neg, rng));
        let lhs = m.z(r, &a, &alg.add(&p, &module.delta(&b)));
        let rhs = lin.conj(&m.z(neg, &b, &alg.zero()), &m.z(r, &a, &p));
        expect_eq(&format!("z_{}(a, p∔δ(b))", sys.format_root(r)), &lhs, &rhs)
    });
}

/// Crossed square `Ker(p1) → St(Φ, A)`, `G(Φ, X) → G(Φ, A)` evaluated in the carrier.
///
/// `⟨g, a⟩ = g · ^{st(a)} g⁻¹`, `h(m, n) = ⟨m, n⟩`, `μ = ν̂ = p2`, `μ̂` and `ν` inclusions.
pub fn check_crossed_square(model: &RelativeModel, checker: &mut Checker) {
    let m = model;
    let lin = &m.lin;
    let alg = m.alg().clone();
    let sys = m.system().clone();
    let all: Vec<usize> = (0..sys.len()).collect();
    let budget = checker.budget;
    let fmt = |g: &SdEl| m.fmt(g);

    let mul = |x: &SdEl, y: &SdEl| lin.mul(x, y);
    let inv = |x: &SdEl| lin.inv(x);
    let conj = |g: &SdEl, x: &SdEl| lin.conj(g, x);
    // elements of G(Φ, X) = Ker p1
    let rand_m = |rng: &mut dyn RngCore| -> SdEl {
        loop {
            let x = m.sd().module.random(rng);
            let g = m.sd().kernel_unit(&x);
            if lin.algebra.inverse(&g).is_some() {
                return g;
            }
        }
    };
    // elements of St(Φ, A), through their image in G(Φ, A)
    let rand_n = |rng: &mut dyn RngCore| m.a_word(&all, rng);
    // elements of G(Φ, A)
    let rand_u = |rng: &mut dyn RngCore| {
        let mut r = rng;
        m.d(&alg.random_unit(&mut r))
    };
    let rand_l = |rng: &mut dyn RngCore| m.z_word(rng);
    let mu = |g: &SdEl| m.d(&m.p2(g));
    let pair = |g: &SdEl, a: &SdEl| mul(g, &conj(a, &inv(g)));
    let one = lin.one();

    type Law<'a> = (&'static str, &'a dyn Fn(&mut dyn RngCore) -> Result<(), String>);
    let axioms: [Law; 13] = [
        ("square commutes", &|rng| {
            let l = rand_l(rng);
            expect_eq("μ∘μ̂ vs ν∘ν̂", &mu(&l), &m.d(&m.p2(&l)))
        }),
        ("M crossed over P", &|rng| {
            let (g, g2, u) = (rand_m(rng), rand_m(rng), rand_u(rng));
            expect_eq("μ(^u g)", &mu(&conj(&u, &g)), &conj(&u, &mu(&g)))?;
            expect_eq("^{μ(g)} g'", &conj(&mu(&g), &g2), &conj(&g, &g2))
        }),
        ("N crossed over P", &|rng| {
            let (n, n2, u) = (rand_n(rng), rand_n(rng), rand_u(rng));
            let un = conj(&u, &n);
            expect_eq("ν(^u n)", &un, &conj(&u, &n))?;
            expect_eq("^{ν(n)} n'", &conj(&n, &n2), &conj(&n, &n2))
        }),
        ("L crossed over P", &|rng| {
            let (l, l2, u) = (rand_l(rng), rand_l(rng), rand_u(rng));
            expect_eq("∂(^u l)", &mu(&conj(&u, &l)), &conj(&u, &mu(&l)))?;
            expect_eq("^{∂(l)} l'", &conj(&mu(&l), &l2), &conj(&l, &l2))
        }),
        ("maps equivariant", &|rng| {
            let (l, u, g, n) = (rand_l(rng), rand_u(rng), rand_m(rng), rand_n(rng));
            expect_eq("μ̂(^u l)", &conj(&u, &l), &conj(&u, &l))?;
            expect_eq("ν̂(^u l)", &mu(&conj(&u, &l)), &conj(&u, &mu(&l)))?;
            expect_eq("h(^u m, ^u n)", &pair(&conj(&u, &g), &conj(&u, &n)), &conj(&u, &pair(&g, &n)))
        }),
        ("pairing multiplicative in m", &|rng| {
            let (g, g2, n) = (rand_m(rng), rand_m(rng), rand_n(rng));
            let rhs = mul(&conj(&mu(&g), &pair(&g2, &n)), &pair(&g, &n));
            expect_eq("h(mm', n)", &pair(&mul(&g, &g2), &n), &rhs)
        }),
        ("pairing multiplicative in n", &|rng| {
            let (g, n, n2) = (rand_m(rng), rand_n(rng), rand_n(rng));
            let rhs = mul(&pair(&g, &n), &conj(&n, &pair(&g, &n2)));
            expect_eq("h(m, nn')", &pair(&g, &mul(&n, &n2)), &rhs)
        }),
        ("pairing boundaries", &|rng| {
            let (g, n) = (rand_m(rng), rand_n(rng));
            let h = pair(&g, &n);
            expect_eq("μ̂(h(m,n))", &h, &mul(&g, &conj(&n, &inv(&g))))?;
            expect_eq("ν̂(h(m,n))", &mu(&h), &mul(&conj(&mu(&g), &n), &inv(&n)))
        }),
        ("pairing on L", &|rng| {
            let (g, n, l) = (rand_m(rng), rand_n(rng), rand_l(rng));
            expect_eq("h(m, ν̂(l))", &pair(&g, &mu(&l)), &mul(&conj(&mu(&g), &l), &inv(&l)))?;
            expect_eq("h(μ̂(l), n)", &pair(&l, &n), &mul(&l, &conj(&n, &inv(&l))))
        }),
        ("pairing degeneracies", &|rng| {
            let (g, n) = (rand_m(rng), rand_n(rng));
            expect_eq("h(m,1)", &pair(&g, &one), &one)?;
            expect_eq("h(1,n)", &pair(&one, &n), &one)?;
            let h = pair(&g, &n);
            expect_eq("h(m⁻¹,n)", &pair(&inv(&g), &n), &conj(&inv(&mu(&g)), &inv(&h)))?;
            expect_eq("h(m,n⁻¹)", &pair(&g, &inv(&n)), &conj(&inv(&n), &inv(&h)))
        }),
        ("peiffer identity", &|rng| {
            let (x, y) = (rand_l(rng), rand_l(rng));
            expect_eq(&format!("^x y vs ^δ(x) y for x={}", fmt(&x)), &conj(&x, &y), &conj(&mu(&x), &y))
        }),
        ("kernel of p1 is normal", &|rng| {
            let (x, u, n) = (rand_l(rng), rand_u(rng), rand_n(rng));
            expect_eq("p1(^u x)", &m.p1(&conj(&u, &x)), &alg.one())?;
            expect_eq("p1(^a x)", &m.p1(&conj(&n, &x)), &alg.one())
        }),
        ("uniqueness expansion", &|rng| {
            let (g, a, b) = (rand_m(rng), rand_n(rng), rand_n(rng));
            let (u, v) = (pair(&g, &a), pair(&g, &b));
            let ab = lin.comm(&a, &b);
            let aba = mul(&mul(&a, &b), &inv(&a));
            let rhs = lin.product(&[u.clone(), conj(&a, &v), conj(&aba, &inv(&u)), conj(&ab, &inv(&v))]);
            expect_eq("⟨g,[a,b]⟩", &pair(&g, &ab), &rhs)
        }),
    ];
    for (name, law) in axioms {
        checker.sampled(name, budget, |rng| law(rng));
    }

    // the fifteen identities: x, y ∈ L, a, b ∈ N, g, h ∈ M, u ∈ P
    let ids: [Law; 15] = [
        ("u acts through a", &|rng| {
            let (u, a, x) = (rand_u(rng), rand_n(rng), rand_l(rng));
            expect_eq("^u(^a x)", &conj(&u, &conj(&a, &x)), &conj(&conj(&u, &a), &conj(&u, &x)))
        }),
        ("delta of g action", &|rng| {
            let (g, x) = (rand_m(rng), rand_l(rng));
            expect_eq("δ(^g x)", &mu(&conj(&g, &x)), &conj(&mu(&g), &mu(&x)))
        }),
        ("st of g action", &|rng| {
            let (g, x) = (rand_m(rng), rand_l(rng));
            expect_eq("st(^g x)", &conj(&g, &x), &conj(&g, &x))
        }),
        ("u acts through g", &|rng| {
            let (u, g, x) = (rand_u(rng), rand_m(rng), rand_l(rng));
            expect_eq("^u(^g x)", &conj(&u, &conj(&g, &x)), &conj(&conj(&u, &g), &conj(&u, &x)))
        }),
        ("delta of u action", &|rng| {
            let (u, x) = (rand_u(rng), rand_l(rng));
            expect_eq("δ(^u x)", &mu(&conj(&u, &x)), &conj(&u, &mu(&x)))
        }),
        ("st of u action", &|rng| {
            let (u, x) = (rand_u(rng), rand_l(rng));
            expect_eq("st(^u x)", &conj(&u, &x), &conj(&u, &x))
        }),
        ("pairing cocycle in a", &|rng| {
            let (g, a, b) = (rand_m(rng), rand_n(rng), rand_n(rng));
            expect_eq("⟨g,ab⟩", &pair(&g, &mul(&a, &b)), &mul(&pair(&g, &a), &conj(&a, &pair(&g, &b))))
        }),
        ("delta of pairing", &|rng| {
            let (g, a) = (rand_m(rng), rand_n(rng));
            expect_eq("δ⟨g,a⟩", &mu(&pair(&g, &a)), &mul(&conj(&mu(&g), &a), &inv(&a)))
        }),
        ("st of pairing", &|rng| {
            let (g, a) = (rand_m(rng), rand_n(rng));
            expect_eq("st⟨g,a⟩", &pair(&g, &a), &mul(&g, &conj(&a, &inv(&g))))
        }),
        ("pairing cocycle in g", &|rng| {
            let (g, h, a) = (rand_m(rng), rand_m(rng), rand_n(rng));
            expect_eq("⟨gh,a⟩", &pair(&mul(&g, &h), &a), &mul(&conj(&g, &pair(&h, &a)), &pair(&g, &a)))
        }),
        ("pairing of st", &|rng| {
            let (x, a) = (rand_l(rng), rand_n(rng));
            expect_eq("⟨st(x),a⟩", &pair(&x, &a), &mul(&x, &conj(&a, &inv(&x))))
        }),
        ("l acts through st", &|rng| {
            let (x, y) = (rand_l(rng), rand_l(rng));
            expect_eq("^x y", &conj(&x, &y), &conj(&x, &y))
        }),
        ("pairing equivariant", &|rng| {
            let (u, g, a) = (rand_u(rng), rand_m(rng), rand_n(rng));
            expect_eq("^u⟨g,a⟩", &conj(&u, &pair(&g, &a)), &pair(&conj(&u, &g), &conj(&u, &a)))
        }),
        ("pairing intertwines actions", &|rng| {
            let (g, a, x) = (rand_m(rng), rand_n(rng), rand_l(rng));
            let lhs = mul(&pair(&g, &a), &conj(&a, &conj(&g, &x)));
            let rhs = mul(&conj(&g, &conj(&a, &x)), &pair(&g, &a));
            expect_eq("⟨g,a⟩ ^a(^g x)", &lhs, &rhs)
        }),
        ("a acts through st", &|rng| {
            let (a, x) = (rand_n(rng), rand_l(rng));
            expect_eq("^a x", &conj(&a, &x), &conj(&a, &x))
        }),
    ];
    for (name, law) in ids {
        checker.sampled(name, budget, |rng| law(rng));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::homotope;
    use crate::ring::Ring;

    fn m4(tag: &str) -> MatrixAlgebra {
        MatrixAlgebra::full(Ring::parse(tag).unwrap(), 4)
    }

    #[test]
    fn relative_relations_hold_for_ideal() {
        let model = RelativeModel::new(CrossedModule::ideal(m4("z4"), 2)).unwrap();
        let mut c = Checker::new(3, 300);
        check_relative_presentation(&model, &mut c);
        let r = c.finish();
        assert!(r.passed(), "{:?}", r.failures().next());
    }

    #[test]
    fn zero_module_is_trivial() {
        let model = RelativeModel::new(CrossedModule::ideal(m4("z2"), 0)).unwrap();
        let sys = model.system().clone();
        let a = sys.parse_root("e1-e2").unwrap();
        let p = model.alg().unit(1, 0);
        assert_eq!(model.z(a, &model.alg().zero(), &p), model.lin.one());
        let mut c = Checker::new(3, 50);
        check_relative_presentation(&model, &mut c);
        assert!(c.finish().passed());
    }

    #[test]
    fn relative_relations_hold_for_homotope() {
        let model = RelativeModel::new(homotope(&m4("z4"), 2)).unwrap();
        let mut c = Checker::new(4, 200);
        check_relative_presentation(&model, &mut c);
        let r = c.finish();
        assert!(r.passed(), "{:?}", r.failures().next());
    }

    #[test]
    fn crossed_square_holds() {
        let model = RelativeModel::new(CrossedModule::ideal(m4("z4"), 2)).unwrap();
        let mut c = Checker::new(5, 200);
        check_crossed_square(&model, &mut c);
        let r = c.finish();
        assert!(r.passed(), "{:?}", r.failures().next());
        assert_eq!(r.outcomes.len(), 28);
    }
}
