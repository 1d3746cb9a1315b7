//! Gluing Steinberg groups over a Zariski covering, evaluated in the homotope
//! carriers `G(Φ, A^(c))`, and the weak action of a global element assembled
//! from Gauss decompositions over the covering pieces.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand_core::RngCore;

use crate::algebra::DynRng;
use crate::check::{expect_eq, Checker};
use crate::freegroup::commutator_expansion;
use crate::gauss::{gauss_decompose, GaussFactor};
use crate::matrix::{Mat, MatrixAlgebra};
use crate::realize::{Linear, Realization};
use crate::ring::{unity_shift, Elem, Localization, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GluingError {
    /// `s^{m'}` is not in the ideal generated by the `k_i^m`.
    HypothesisFailure { level: u32 },
    /// Some covering piece admits no decomposition into `D_α` and root factors.
    CoveringNotFound(String),
    NotInvertible,
    Blocks,
}

impl fmt::Display for GluingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GluingError::HypothesisFailure { level } => {
                write!(f, "no partition of unity at level {level}: s^m' is not in the ideal of the k_i^m")
            }
            GluingError::CoveringNotFound(d) => write!(f, "no covering with the D_α-product property: {d}"),
            GluingError::NotInvertible => write!(f, "the acting element is not invertible"),
            GluingError::Blocks => write!(f, "the algebra needs at least two blocks"),
        }
    }
}

impl core::error::Error for GluingError {}

/// `G(Φ, A^(c))` with elements `(x, 1)` stored as `x`: `x ∘ y = x + y + c x y`.
#[derive(Clone, Copy, Debug)]
pub struct HomotopeGroup<'a> {
    pub alg: &'a MatrixAlgebra,
    pub label: Elem,
}

impl<'a> HomotopeGroup<'a> {
    pub fn new(alg: &'a MatrixAlgebra, label: Elem) -> HomotopeGroup<'a> {
        HomotopeGroup { alg, label }
    }

    pub fn one(&self) -> Mat {
        self.alg.zero()
    }

    pub fn mul(&self, x: &Mat, y: &Mat) -> Mat {
        let a = self.alg;
        a.add(&a.add(x, y), &a.scale(&a.mul(x, y), self.label))
    }

    pub fn inv(&self, x: &Mat) -> Mat {
        let a = self.alg;
        let u = a.inverse(&self.delta(x)).expect("group elements have invertible image");
        a.neg(&a.mul(&u, x))
    }

    pub fn conj(&self, x: &Mat, y: &Mat) -> Mat {
        self.mul(&self.mul(x, y), &self.inv(x))
    }

    /// `1 + c x ∈ G(Φ, A)`.
    pub fn delta(&self, x: &Mat) -> Mat {
        self.alg.add(&self.alg.one(), &self.alg.scale(x, self.label))
    }

    /// The action of `g ∈ G(Φ, A)`.
    pub fn act(&self, g: &Mat, x: &Mat) -> Mat {
        let a = self.alg;
        a.mul(&a.mul(g, x), &a.inverse(g).expect("acting element is invertible"))
    }

    /// A product of one to three random root elements.
    pub fn random_word(&self, lin: &Linear<MatrixAlgebra>, rng: &mut dyn RngCore) -> Mat {
        let len = 1 + (rng.next_u32() % 3) as usize;
        (0..len).fold(self.one(), |acc, _| {
            let root = (rng.next_u32() as usize) % lin.system().len();
            let (i, j) = lin.ends(root);
            let p = self.alg.random_block(i, j, &mut DynRng(rng));
            self.mul(&acc, &p)
        })
    }
}

fn linear(alg: &MatrixAlgebra) -> Result<Linear<MatrixAlgebra>, GluingError> {
    Linear::new(alg.clone()).ok_or(GluingError::Blocks)
}

fn partitions(ring: &Ring, s: Elem, ks: &[Elem], depth: u32) -> Result<Vec<Vec<Elem>>, GluingError> {
    (0..=depth).map(|m| ring.partition_of_unity(s, ks, m).ok_or(GluingError::HypothesisFailure { level: m })).collect()
}

/// Gluing relations in `G(Φ, A^(s^m))` for `m ≤ depth`, the
/// epimorphism witness and the free-group commutator expansion.
pub fn check_gluing_relations(
    alg: &MatrixAlgebra,
    s: Elem,
    ks: &[Elem],
    depth: u32,
    checker: &mut Checker,
) -> Result<(), GluingError> {
    let lin = linear(alg)?;
    let ring = alg.ring().clone();
    let ts = partitions(&ring, s, ks, depth)?;
    let n = ks.len();
    let count = (checker.budget / (depth as u64 + 1)).max(1);
    for m in 0..=depth {
        let e = m as u64;
        let glued = HomotopeGroup::new(alg, ring.pow(s, e));
        let kms: Vec<Elem> = ks.iter().map(|&k| ring.pow(k, e)).collect();
        let pieces: Vec<HomotopeGroup> = ks.iter().map(|&k| HomotopeGroup::new(alg, ring.pow(ring.mul(s, k), e))).collect();
        let can = |i: usize, x: &Mat| alg.scale(x, kms[i]);
        let pick = |rng: &mut dyn RngCore, distinct: bool| -> (usize, usize) {
            let i = (rng.next_u32() as usize) % n;
            let mut j = (rng.next_u32() as usize) % n;
            if distinct && n > 1 && i == j {
                j = (j + 1) % n;
            }
            (i, j)
        };
        checker.sampled(&format!("level {m}: can is a homomorphism"), count, |rng| {
            let (i, _) = pick(rng, false);
            let (g, h) = (pieces[i].random_word(&lin, rng), pieces[i].random_word(&lin, rng));
            expect_eq("can(gh)", &can(i, &pieces[i].mul(&g, &h)), &glued.mul(&can(i, &g), &can(i, &h)))
        });
        if n > 1 {
            checker.sampled(&format!("level {m}: identification of overlaps"), count, |rng| {
                let (i, j) = pick(rng, true);
                let overlap = HomotopeGroup::new(alg, ring.mul(pieces[i].label, kms[j]));
                let g = overlap.random_word(&lin, rng);
                let lhs = can(i, &alg.scale(&g, kms[j]));
                let rhs = can(j, &alg.scale(&g, kms[i]));
                expect_eq("can_i(can(g)) = can_j(can(g))", &lhs, &rhs)
            });
            checker.sampled(&format!("level {m}: conjugation across pieces"), count, |rng| {
                let (i, j) = pick(rng, true);
                let g = pieces[i].random_word(&lin, rng);
                let h = pieces[j].random_word(&lin, rng);
                let lhs = glued.conj(&can(i, &g), &can(j, &h));
                let rhs = can(j, &pieces[j].act(&pieces[i].delta(&g), &h));
                expect_eq("conjugate by can_i(g)", &lhs, &rhs)
            });
        }
        // x_α(a s^{m'}) = ∏ can_i(x_α(a t_im)), over every root and block element
        let shift = ring.pow(s, unity_shift(m, n) as u64);
        let blocks: Vec<Vec<Mat>> = (0..lin.system().len()).map(|r| {
            let (i, j) = lin.ends(r);
            alg.block_elements(i, j)
        }).collect();
        let per = blocks[0].len() as u64;
        let t = &ts[m as usize];
        checker.exhaustive(&format!("level {m}: epimorphism witness"), blocks.len() as u64 * per, |idx| {
            let a = &blocks[(idx / per) as usize][(idx % per) as usize];
            let prod = (0..n).fold(glued.one(), |acc, i| glued.mul(&acc, &can(i, &alg.scale(a, t[i]))));
            expect_eq("x(a s^m')", &prod, &alg.scale(a, shift))
        });
    }
    checker.exhaustive("free-group commutator expansion", 9, |idx| {
        let (a, b) = (idx as usize / 3 + 1, idx as usize % 3 + 1);
        let (l, r) = commutator_expansion(a, b);
        expect_eq(&format!("n = {a}, m = {b}"), &l, &r)
    });
    Ok(())
}

/// The action of `g` on the piece `A^(∞,sk)`: the Gauss factors of the image of `g`
/// over `K_{sk}`, each lifted to `A` as `embed(f) + (1 − e)`.
#[derive(Clone, Debug)]
pub struct LocalAction {
    pub k: Elem,
    pub localization: Localization,
    pub factors: Vec<GaussFactor>,
    pub lifted: Mat,
    /// The first level where `(sk)^m` kills `1 − e`, so the lift is the action.
    pub start: u32,
}

fn lift(alg: &MatrixAlgebra, target: &MatrixAlgebra, loc: &Localization, f: &Mat) -> Mat {
    let ring = alg.ring();
    let embedded = target.map_entries(f, alg, |x| loc.embed(x));
    let rest = alg.scale(&alg.one(), ring.sub(ring.one(), loc.idempotent));
    alg.add(&embedded, &rest)
}

/// Decomposes `g` over every localization `K_{sk_i}`.
pub fn local_actions(alg: &MatrixAlgebra, s: Elem, ks: &[Elem], g: &Mat) -> Result<Vec<LocalAction>, GluingError> {
    if !alg.is_invertible(g) {
        return Err(GluingError::NotInvertible);
    }
    let ring = alg.ring();
    ks.iter()
        .map(|&k| {
            let sk = ring.mul(s, k);
            let loc = ring.localize(sk);
            let target = alg.with_ring(loc.target.clone());
            let local = alg.map_entries(g, &target, |x| loc.map(x));
            let lin = Linear::new(target.clone()).ok_or(GluingError::Blocks)?;
            let factors = gauss_decompose(&lin, &local)
                .map_err(|e| GluingError::CoveringNotFound(format!("over {} (k = {}): {e}", loc.target.tag(), ring.format_elem(k))))?;
            let lifted = factors
                .iter()
                .fold(alg.one(), |acc, f| alg.mul(&acc, &lift(alg, &target, &loc, &f.matrix(&lin))));
            let rest = ring.sub(ring.one(), loc.idempotent);
            let start = (0..=ring.order() as u32)
                .find(|&c| ring.mul(ring.pow(sk, c as u64), rest) == 0)
                .ok_or_else(|| GluingError::CoveringNotFound(format!("{} is not nilpotent off its localization", ring.format_elem(sk))))?;
            Ok(LocalAction { k, localization: loc, factors, lifted, start })
        })
        .collect()
}

/// The compatibility identities for the action of `g` assembled from the
/// covering pieces, plus the gluing relations on acted elements. Checked at the
/// levels from the largest `start` of the local actions up to `depth`.
pub fn check_weak_action_identities(
    alg: &MatrixAlgebra,
    s: Elem,
    ks: &[Elem],
    g: &Mat,
    depth: u32,
    checker: &mut Checker,
) -> Result<Vec<LocalAction>, GluingError> {
    let lin = linear(alg)?;
    let ring = alg.ring().clone();
    partitions(&ring, s, ks, depth)?;
    let actions = local_actions(alg, s, ks, g)?;
    let n = ks.len();
    let first = actions.iter().map(|a| a.start).max().unwrap_or(0);
    if first > depth {
        return Err(GluingError::CoveringNotFound(format!("local actions start at level {first}, beyond depth {depth}")));
    }
    let count = (checker.budget / (depth - first + 1) as u64).max(1);
    for m in first..=depth {
        let e = m as u64;
        let glued = HomotopeGroup::new(alg, ring.pow(s, e));
        let kms: Vec<Elem> = ks.iter().map(|&k| ring.pow(k, e)).collect();
        let pieces: Vec<HomotopeGroup> = ks.iter().map(|&k| HomotopeGroup::new(alg, ring.pow(ring.mul(s, k), e))).collect();
        let can = |i: usize, x: &Mat| alg.scale(x, kms[i]);
        let act = |i: usize, x: &Mat| pieces[i].act(&actions[i].lifted, x);
        let pick = |rng: &mut dyn RngCore| -> (usize, usize) {
            let i = (rng.next_u32() as usize) % n;
            let j = if n > 1 { (i + 1 + (rng.next_u32() as usize) % (n - 1)) % n } else { i };
            (i, j)
        };
        checker.sampled(&format!("level {m}: action is multiplicative"), count, |rng| {
            let (i, _) = pick(rng);
            let (h, h2) = (pieces[i].random_word(&lin, rng), pieces[i].random_word(&lin, rng));
            let lhs = can(i, &act(i, &pieces[i].mul(&h, &h2)));
            let rhs = glued.mul(&can(i, &act(i, &h)), &can(i, &act(i, &h2)));
            expect_eq("can(g(hh'))", &lhs, &rhs)
        });
        checker.sampled(&format!("level {m}: action respects identification"), count, |rng| {
            let (i, j) = pick(rng);
            let overlap = HomotopeGroup::new(alg, ring.mul(pieces[i].label, kms[j]));
            let h = overlap.random_word(&lin, rng);
            let lhs = can(i, &act(i, &alg.scale(&h, kms[j])));
            let rhs = can(j, &act(j, &alg.scale(&h, kms[i])));
            expect_eq("can_i(g can(h)) = can_j(g can(h))", &lhs, &rhs)
        });
        checker.sampled(&format!("level {m}: action respects conjugation"), count, |rng| {
            let (i, j) = pick(rng);
            let h = pieces[i].random_word(&lin, rng);
            let h2 = pieces[j].random_word(&lin, rng);
            let lhs = glued.conj(&can(i, &act(i, &h)), &can(j, &act(j, &h2)));
            let twisted = alg.mul(&actions[j].lifted, &pieces[i].delta(&h));
            let rhs = can(j, &pieces[j].act(&twisted, &h2));
            expect_eq("conjugate by can_i(gh)", &lhs, &rhs)
        });
        checker.sampled(&format!("level {m}: local actions agree with g"), count, |rng| {
            let (i, _) = pick(rng);
            let h = pieces[i].random_word(&lin, rng);
            expect_eq("can_i(gh) = g can_i(h)", &can(i, &act(i, &h)), &glued.act(g, &can(i, &h)))
        });
        checker.sampled(&format!("level {m}: acted generators satisfy the gluing relations"), count, |rng| {
            let (i, j) = pick(rng);
            let h = act(i, &pieces[i].random_word(&lin, rng));
            let h2 = act(j, &pieces[j].random_word(&lin, rng));
            let lhs = glued.conj(&can(i, &h), &can(j, &h2));
            let rhs = can(j, &pieces[j].act(&pieces[i].delta(&h), &h2));
            expect_eq("conjugate by can_i(h)", &lhs, &rhs)
        });
    }
    Ok(actions)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m4(tag: &str) -> MatrixAlgebra {
        MatrixAlgebra::full(Ring::parse(tag).unwrap(), 4)
    }

    #[test]
    fn gluing_z12() {
        let alg = m4("z12");
        let mut c = Checker::new(3, 2000);
        check_gluing_relations(&alg, 1, &[3, 4], 4, &mut c).unwrap();
        let r = c.finish();
        assert!(r.passed(), "{:?}", r.failures().next());
        let mut c = Checker::new(3, 200);
        check_gluing_relations(&alg, 1, &[1], 2, &mut c).unwrap();
        assert!(c.finish().passed());
        assert_eq!(
            check_gluing_relations(&alg, 1, &[2, 4], 2, &mut Checker::new(0, 10)),
            Err(GluingError::HypothesisFailure { level: 1 })
        );
    }

    #[test]
    fn weak_action_z12() {
        let alg = m4("z12");
        let mut t = alg.one();
        t.set(0, 1, 5);
        let mut d = alg.one();
        d.set(0, 0, 5);
        d.set(2, 2, 7);
        for g in [alg.one(), t, d] {
            let mut c = Checker::new(5, 1000);
            check_weak_action_identities(&alg, 1, &[3, 4], &g, 3, &mut c).unwrap();
            let r = c.finish();
            assert!(r.passed(), "{:?}", r.failures().next());
        }
    }

    #[test]
    fn covering_not_found() {
        let alg = m4("z12");
        // localizing at 1 keeps both primes, so Gauss decomposition is unavailable
        let g = alg.one();
        assert!(matches!(
            check_weak_action_identities(&alg, 1, &[1, 5], &g, 1, &mut Checker::new(0, 10)),
            Err(GluingError::CoveringNotFound(_))
        ));
    }
}
