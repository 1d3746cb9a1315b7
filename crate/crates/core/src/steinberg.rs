//! Chevalley commutator maps extracted from a realization, and the verifiers
//! for the axioms of a group with commutator relations.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand_core::RngCore;

use crate::check::{expect_eq, Checker};
use crate::matrix::{Mat, MatrixAlgebra};
use crate::realize::{Linear, PatternMismatch, Realization};
use crate::rootsys::RootSubset;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChevalleyError {
    AntiParallel(String, String),
    Pattern(PatternMismatch),
    ResidueNonzero(String),
}

impl fmt::Display for ChevalleyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChevalleyError::AntiParallel(a, b) => write!(f, "roots {a} and {b} are anti-parallel"),
            ChevalleyError::Pattern(p) => write!(f, "{p}"),
            ChevalleyError::ResidueNonzero(r) => write!(f, "nonzero residue after peeling: {r}"),
        }
    }
}

impl core::error::Error for ChevalleyError {}

/// The factors `(iα + jβ, f_{αβij}(p, q))` of `[t_α(p), t_β(q)]`, in peeling order.
pub type Factors<P> = Vec<(usize, P)>;

/// Computes `[t_α(p), t_β(q)]` in the carrier and peels it along the roots
/// `iα + jβ` (increasing `i + j`, ties by `i`) using the coordinate readers.
pub fn extract_chevalley_maps<R: Realization>(
    real: &R,
    a: usize,
    b: usize,
    p: &R::P,
    q: &R::P,
) -> Result<Factors<R::P>, ChevalleyError> {
    let sys = real.system();
    if sys.is_anti_parallel(a, b) {
        return Err(ChevalleyError::AntiParallel(sys.format_root(a), sys.format_root(b)));
    }
    let c = real.comm(&real.t(a, p), &real.t(b, q));
    let mut rest = c;
    let mut out = Vec::new();
    for (_, _, g) in sys.positive_combinations(a, b) {
        let v = real.read(g, &rest).map_err(ChevalleyError::Pattern)?;
        rest = real.mul(&real.inv(&real.t(g, &v)), &rest);
        out.push((g, v));
    }
    if !real.is_one(&rest) {
        return Err(ChevalleyError::ResidueNonzero(real.format_g(&rest)));
    }
    Ok(out)
}

fn format_factors<R: Realization>(real: &R, fs: &Factors<R::P>) -> String {
    let parts: Vec<String> =
        fs.iter().map(|(g, v)| format!("{} ↦ {}", real.system().format_root(*g), real.p_format(*g, v))).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Pairs `(α, β)` that are not anti-parallel.
pub fn commuting_pairs<R: Realization>(real: &R) -> Vec<(usize, usize)> {
    let sys = real.system();
    let n = sys.len();
    (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| !sys.is_anti_parallel(a, b)).collect()
}

/// Decodes a flat instance index into pair `k` and parameter indices.
struct PairSpace {
    pairs: Vec<(usize, usize)>,
    counts: Vec<(u64, u64)>,
    offsets: Vec<u64>,
    total: u64,
}

impl PairSpace {
    fn new<R: Realization>(real: &R, pairs: Vec<(usize, usize)>) -> PairSpace {
        let counts: Vec<(u64, u64)> = pairs.iter().map(|&(a, b)| (real.p_count(a), real.p_count(b))).collect();
        let mut offsets = Vec::with_capacity(pairs.len());
        let mut total: u64 = 0;
        for &(x, y) in &counts {
            offsets.push(total);
            total = total.saturating_add(x.saturating_mul(y));
        }
        PairSpace { pairs, counts, offsets, total }
    }

    fn decode(&self, i: u64) -> (usize, u64, u64) {
        let k = self.offsets.partition_point(|&o| o <= i) - 1;
        let local = i - self.offsets[k];
        let (x, _) = self.counts[k];
        (k, local % x, local / x)
    }
}

/// Verifies additivity, the doubled-root identification, and the commutator
/// formula for every non-anti-parallel pair, through `t_α` in the carrier.
pub fn check_steinberg_relations<R: Realization>(real: &R, checker: &mut Checker) {
    let sys = real.system().clone();
    let n = sys.len();
    let fr = |g: usize| sys.format_root(g);

    // additivity, per root
    let singles: Vec<(usize, usize)> = (0..n).map(|a| (a, a)).collect();
    let space = PairSpace::new(real, singles);
    let additive = |a: usize, p: &R::P, q: &R::P| -> Result<(), String> {
        let lhs = real.mul(&real.t(a, p), &real.t(a, q));
        let sum = real.p_add(a, p, q);
        if !real.is_param(a, &sum) {
            return Err(format!("{}: p∔q = {} leaves P", fr(a), real.p_format(a, &sum)));
        }
        expect_eq(&format!("{}: t(p)t(q) vs t(p∔q)", fr(a)), &lhs, &real.t(a, &sum))
            .map_err(|e| format!("p={} q={}: {e}", real.p_format(a, p), real.p_format(a, q)))
    };
    checker.auto(
        "additivity",
        space.total,
        |i| {
            let (k, x, y) = space.decode(i);
            let a = space.pairs[k].0;
            additive(a, &real.p_nth(a, x), &real.p_nth(a, y))
        },
        |rng| {
            let a = (rng.next_u64() % n as u64) as usize;
            let p = real.p_random(a, rng);
            let q = real.p_random(a, rng);
            additive(a, &p, &q)
        },
    );

    // doubled roots
    let doubles: Vec<(usize, usize)> = (0..n).filter_map(|a| sys.double(a).map(|d| (a, d))).collect();
    let ident = |a: usize, d: usize, p: &R::P| -> Result<(), String> {
        if !real.is_param(a, p) {
            return Err(format!("P_{} ⊄ P_{}: {}", fr(d), fr(a), real.p_format(d, p)));
        }
        expect_eq(&format!("t_{}(p) vs t_{}(p)", fr(d), fr(a)), &real.t(d, p), &real.t(a, p))
    };
    let dcount: u64 = doubles.iter().map(|&(_, d)| real.p_count(d)).sum();
    checker.auto(
        "doubled root identification",
        dcount,
        |i| {
            let mut i = i;
            for &(a, d) in &doubles {
                let c = real.p_count(d);
                if i < c {
                    return ident(a, d, &real.p_nth(d, i));
                }
                i -= c;
            }
            Ok(())
        },
        |rng| {
            if doubles.is_empty() {
                return Ok(());
            }
            let (a, d) = doubles[(rng.next_u64() % doubles.len() as u64) as usize];
            let p = real.p_random(d, rng);
            ident(a, d, &p)
        },
    );

    // commutator formula
    let pspace = PairSpace::new(real, commuting_pairs(real));
    let formula = |a: usize, b: usize, p: &R::P, q: &R::P| -> Result<(), String> {
        let ctx = || format!("[t_{}({}), t_{}({})]", fr(a), real.p_format(a, p), fr(b), real.p_format(b, q));
        let fs = extract_chevalley_maps(real, a, b, p, q).map_err(|e| format!("{}: {e}", ctx()))?;
        for (g, v) in &fs {
            if !real.is_param(*g, v) {
                return Err(format!("{}: f lands outside P_{}: {}", ctx(), fr(*g), real.p_format(*g, v)));
            }
        }
        let rebuilt = real.product(&fs.iter().map(|(g, v)| real.t(*g, v)).collect::<Vec<_>>());
        let c = real.comm(&real.t(a, p), &real.t(b, q));
        expect_eq(&format!("{} vs ∏ {}", ctx(), format_factors(real, &fs)), &c, &rebuilt)
    };
    checker.auto(
        "commutator formula",
        pspace.total,
        |i| {
            let (k, x, y) = pspace.decode(i);
            let (a, b) = pspace.pairs[k];
            formula(a, b, &real.p_nth(a, x), &real.p_nth(b, y))
        },
        |rng| {
            let (a, b) = pspace.pairs[(rng.next_u64() % pspace.pairs.len() as u64) as usize];
            let p = real.p_random(a, rng);
            let q = real.p_random(b, rng);
            formula(a, b, &p, &q)
        },
    );
}

/// `Σ ∖ 2Σ` in index order.
pub fn reduced_part<R: Realization>(real: &R, set: &RootSubset) -> Vec<usize> {
    let sys = real.system();
    set.iter().copied().filter(|&g| !matches!(sys.half(g), Some(h) if set.contains(&h))).collect()
}

/// Injectivity of `∏_{Σ∖2Σ} P_α → G` on every special closed `Σ`: exhaustive
/// when the product fits the budget, otherwise `budget` random tuples must be
/// collision-free.
pub fn check_product_injectivity<R: Realization>(real: &R, checker: &mut Checker) {
    let sys = real.system().clone();
    let sets = match sys.special_closed_subsets() {
        Ok(s) => s,
        Err(e) => {
            checker.inconclusive("product injectivity", format!("{e}"));
            return;
        }
    };
    let budget = checker.budget;
    let seed = checker.seed;
    let mut exhaustive_sets = 0u64;
    let mut sampled_sets = 0u64;
    checker.exhaustive("product injectivity", sets.len() as u64, |si| {
        let set = &sets[si as usize];
        let roots = reduced_part(real, set);
        let counts: Vec<u64> = roots.iter().map(|&g| real.p_count(g)).collect();
        let total = counts.iter().try_fold(1u64, |acc, &c| acc.checked_mul(c));
        let image = |params: &[R::P]| {
            real.product(&roots.iter().zip(params).map(|(&g, p)| real.t(g, p)).collect::<Vec<_>>())
        };
        let mut seen: BTreeMap<R::G, Vec<R::P>> = BTreeMap::new();
        let collide = |seen: &BTreeMap<R::G, Vec<R::P>>, g: &R::G, params: &[R::P]| -> Option<String> {
            match seen.get(g) {
                Some(prev) if prev.as_slice() != params => Some(format!(
                    "Σ = {}: tuples {:?} and {:?} have the same product",
                    sys.format_subset(set),
                    prev.iter().zip(&roots).map(|(p, &r)| real.p_format(r, p)).collect::<Vec<_>>(),
                    params.iter().zip(&roots).map(|(p, &r)| real.p_format(r, p)).collect::<Vec<_>>()
                )),
                _ => None,
            }
        };
        match total {
            Some(t) if t <= budget => {
                exhaustive_sets += 1;
                for mut idx in 0..t {
                    let params: Vec<R::P> = roots
                        .iter()
                        .zip(&counts)
                        .map(|(&g, &c)| {
                            let p = real.p_nth(g, idx % c);
                            idx /= c;
                            p
                        })
                        .collect();
                    let g = image(&params);
                    if let Some(w) = collide(&seen, &g, &params) {
                        return Err(w);
                    }
                    seen.insert(g, params);
                }
                Ok(())
            }
            _ => {
                sampled_sets += 1;
                let mut rng = crate::check::instance_rng(seed, "product injectivity", si);
                for _ in 0..budget {
                    let params: Vec<R::P> = roots.iter().map(|&g| real.p_random(g, &mut rng)).collect();
                    let g = image(&params);
                    if let Some(w) = collide(&seen, &g, &params) {
                        return Err(w);
                    }
                    seen.insert(g, params);
                }
                Ok(())
            }
        }
    });
    checker.note(format!("{exhaustive_sets} sets exhaustive, {sampled_sets} sampled"));
}

/// Checks that the extracted map for adjacent roots `e_i − e_j`, `e_j − e_k`
/// is `(p, q) ↦ pq`, against the matrix product, and that `f` is bi-additive.
pub fn check_linear_chevalley_oracle(lin: &Linear<MatrixAlgebra>, checker: &mut Checker) {
    let sys = lin.system().clone();
    let alg = &lin.algebra;
    let n = sys.len();
    let mut adjacent = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let (i, j) = lin.ends(a);
            let (j2, k) = lin.ends(b);
            if j == j2 && i != k {
                adjacent.push((a, b));
            }
        }
    }
    let space = PairSpace::new(lin, adjacent);
    let law = |a: usize, b: usize, p: &Mat, q: &Mat| -> Result<(), String> {
        let fs = extract_chevalley_maps(lin, a, b, p, q).map_err(|e| format!("{e}"))?;
        let want = alg.mul(p, q);
        match fs.as_slice() {
            [(g, v)] => {
                let (i, _) = lin.ends(a);
                let (_, k) = lin.ends(b);
                if lin.ends(*g) != (i, k) {
                    return Err(format!("unexpected root {}", sys.format_root(*g)));
                }
                expect_eq(
                    &format!("f({}, {}) vs pq", alg.format(p), alg.format(q)),
                    v,
                    &want,
                )
            }
            _ => Err(format!("expected one factor, got {}", fs.len())),
        }
    };
    checker.auto(
        "adjacent map is the product",
        space.total,
        |i| {
            let (kk, x, y) = space.decode(i);
            let (a, b) = space.pairs[kk];
            law(a, b, &lin.p_nth(a, x), &lin.p_nth(b, y))
        },
        |rng| {
            let (a, b) = space.pairs[(rng.next_u64() % space.pairs.len() as u64) as usize];
            let p = lin.p_random(a, rng);
            let q = lin.p_random(b, rng);
            law(a, b, &p, &q)
        },
    );
    let f = |a: usize, b: usize, p: &Mat, q: &Mat| {
        extract_chevalley_maps(lin, a, b, p, q).map(|fs| fs.into_iter().next().map(|x| x.1).unwrap_or_else(|| alg.zero()))
    };
    let cube = space.total.saturating_mul(space.counts.first().map(|c| c.0).unwrap_or(1));
    let bilinear = |a: usize, b: usize, p: &Mat, p2: &Mat, q: &Mat| {
        let lhs = f(a, b, &alg.add(p, p2), q).map_err(|e| format!("{e}"))?;
        let rhs = alg.add(&f(a, b, p, q).map_err(|e| format!("{e}"))?, &f(a, b, p2, q).map_err(|e| format!("{e}"))?);
        expect_eq("f(p+p', q)", &lhs, &rhs)?;
        let lhs = f(a, b, p, &alg.add(q, q)).map_err(|e| format!("{e}"))?;
        let rhs = alg.add(&f(a, b, p, q).map_err(|e| format!("{e}"))?, &f(a, b, p, q).map_err(|e| format!("{e}"))?);
        expect_eq("f(p, q+q)", &lhs, &rhs)
    };
    checker.auto(
        "adjacent map bi-additive",
        cube,
        |i| {
            let (kk, x, y) = space.decode(i % space.total.max(1));
            let (a, b) = space.pairs[kk];
            let z = i / space.total.max(1);
            bilinear(a, b, &lin.p_nth(a, x), &lin.p_nth(a, z), &lin.p_nth(b, y))
        },
        |rng| {
            let (a, b) = space.pairs[(rng.next_u64() % space.pairs.len() as u64) as usize];
            let p = lin.p_random(a, rng);
            let p2 = lin.p_random(a, rng);
            let q = lin.p_random(b, rng);
            bilinear(a, b, &p, &p2, &q)
        },
    );
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oddform::{build_split_oddform, Unitary};
    use crate::ring::Ring;

    fn linear(tag: &str) -> Linear<MatrixAlgebra> {
        Linear::new(MatrixAlgebra::full(Ring::parse(tag).unwrap(), 4)).unwrap()
    }

    #[test]
    fn chevalley_examples() {
        let lin = linear("z4");
        let sys = lin.system().clone();
        let alg = lin.algebra.clone();
        let a = sys.parse_root("e1-e2").unwrap();
        let b = sys.parse_root("e2-e3").unwrap();
        let c = sys.parse_root("e3-e4").unwrap();
        let p = alg.scale(&alg.unit(0, 1), 3);
        let q = alg.scale(&alg.unit(1, 2), 3);
        let fs = extract_chevalley_maps(&lin, a, b, &p, &q).unwrap();
        assert_eq!(fs, [(sys.parse_root("e1-e3").unwrap(), alg.mul(&p, &q))]);
        let r = alg.unit(2, 3);
        assert!(extract_chevalley_maps(&lin, a, c, &p, &r).unwrap().is_empty());
        let na = sys.parse_root("e2-e1").unwrap();
        assert!(matches!(extract_chevalley_maps(&lin, a, na, &p, &p), Err(ChevalleyError::AntiParallel(..))));
    }

    #[test]
    fn linear_relations_hold() {
        for tag in ["z2", "z4"] {
            let lin = linear(tag);
            let mut c = Checker::new(1, 1 << 16);
            check_steinberg_relations(&lin, &mut c);
            check_linear_chevalley_oracle(&lin, &mut c);
            let r = c.finish();
            assert!(r.passed(), "{tag}: {:?}", r.failures().next());
        }
    }

    #[test]
    fn unitary_two_term_commutator() {
        let (o, f) = build_split_oddform(&Ring::parse("z4").unwrap(), 3, 1).unwrap();
        let u = Unitary::new(o, f).unwrap();
        let sys = u.system().clone();
        let a = sys.parse_root("e1-e2").unwrap();
        let b = sys.parse_root("e2").unwrap();
        let mut nontrivial = 0;
        for x in 0..u.p_count(a) {
            for y in 0..u.p_count(b) {
                let fs = extract_chevalley_maps(&u, a, b, &u.p_nth(a, x), &u.p_nth(b, y)).unwrap();
                if fs.iter().filter(|(g, v)| *v != u.p_zero(*g)).count() == 2 {
                    nontrivial += 1;
                }
            }
        }
        assert!(nontrivial > 0);
    }

    #[test]
    fn unitary_relations_hold() {
        let (o, f) = build_split_oddform(&Ring::parse("z2").unwrap(), 3, 1).unwrap();
        let u = Unitary::new(o, f).unwrap();
        let mut c = Checker::new(1, 10_000);
        check_steinberg_relations(&u, &mut c);
        let r = c.finish();
        assert!(r.passed(), "{:?}", r.failures().next());
    }

    #[test]
    fn products_are_injective() {
        let lin = linear("z2");
        let mut c = Checker::new(1, 10_000);
        check_product_injectivity(&lin, &mut c);
        let (o, f) = build_split_oddform(&Ring::parse("z2").unwrap(), 3, 1).unwrap();
        let u = Unitary::new(o, f).unwrap();
        check_product_injectivity(&u, &mut c);
        let r = c.finish();
        assert!(r.passed(), "{:?}", r.failures().next());
    }
}
