//! Towers of homotopes (truncated pro-objects), level-shifted maps between them,
//! pro-equality and isomorphism witnesses.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{homotope, homotope_transition, CrossedModule};
use crate::check::{expect_eq, Checker};
use crate::matrix::{Mat, MatrixAlgebra};
use crate::ring::{Elem, MultiplicativeSet, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TowerError {
    /// A map or comparison needs levels beyond the materialized depth.
    Truncated { needed: usize, depth: usize },
    ZeroDepth,
}

impl fmt::Display for TowerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TowerError::Truncated { needed, depth } => {
                write!(f, "level {needed} requested but the tower is materialized to depth {depth}")
            }
            TowerError::ZeroDepth => write!(f, "tower depth must be at least 1"),
        }
    }
}

impl core::error::Error for TowerError {}

/// `n ↦ A^(l_n)` for `0 ≤ n ≤ depth`, with transition `n+1 → n` the multiplication by `r_n`
/// where `l_{n+1} = l_n r_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    pub alg: MatrixAlgebra,
    labels: Vec<Elem>,
    steps: Vec<Elem>,
}

impl Tower {
    /// `A^(∞,k)`: level `n` is `A^(kⁿ)`, every transition is along `k`.
    pub fn colocalization(alg: &MatrixAlgebra, k: Elem, depth: usize) -> Result<Tower, TowerError> {
        if depth == 0 {
            return Err(TowerError::ZeroDepth);
        }
        let ring = alg.ring();
        let labels = (0..=depth).map(|n| ring.pow(k, n as u64)).collect();
        Ok(Tower { alg: alg.clone(), labels, steps: alloc::vec![k; depth] })
    }

    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn label(&self, n: usize) -> Elem {
        self.labels[n]
    }

    pub fn object(&self, n: usize) -> CrossedModule {
        homotope(&self.alg, self.labels[n])
    }

    fn ring(&self) -> &Ring {
        self.alg.ring()
    }

    /// The scalar of the composite transition `from → to`.
    pub fn transition_scalar(&self, from: usize, to: usize) -> Result<Elem, TowerError> {
        if from > self.depth() {
            return Err(TowerError::Truncated { needed: from, depth: self.depth() });
        }
        assert!(to <= from, "transitions go down");
        Ok(self.steps[to..from].iter().fold(self.ring().one(), |acc, &r| self.ring().mul(acc, r)))
    }

    pub fn transition(&self, from: usize, to: usize, x: &Mat) -> Result<Mat, TowerError> {
        Ok(self.alg.scale(x, self.transition_scalar(from, to)?))
    }

    /// The tower `j ↦ level n·j` with composite transitions.
    pub fn reindex_power(&self, n: usize) -> Result<Tower, TowerError> {
        let depth = self.depth() / n.max(1);
        if depth == 0 {
            return Err(TowerError::Truncated { needed: n, depth: self.depth() });
        }
        let labels = (0..=depth).map(|j| self.labels[n * j]).collect();
        let steps = (0..depth).map(|j| self.transition_scalar(n * (j + 1), n * j)).collect::<Result<_, _>>()?;
        Ok(Tower { alg: self.alg.clone(), labels, steps })
    }

    pub fn describe(&self) -> String {
        let r = self.ring();
        let ls: Vec<String> = self.labels.iter().map(|&l| r.format_elem(l)).collect();
        format!("tower of homotopes of {} with labels ({})", self.alg.tag(), ls.join(", "))
    }
}

/// Basis `E_rc` of the algebra; tower maps are `K`-linear, so agreeing on it is agreeing everywhere.
fn basis(alg: &MatrixAlgebra) -> Vec<Mat> {
    let n = alg.size();
    (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).map(|(r, c)| alg.unit(r, c)).collect()
}

/// Checks that transitions are morphisms of crossed modules over `A` and compose exactly.
pub fn check_tower(t: &Tower, checker: &mut Checker) {
    let alg = &t.alg;
    let ring = alg.ring().clone();
    let d = t.depth();
    checker.exhaustive("transition labels", d as u64, |n| {
        let n = n as usize;
        let x = alg.one();
        homotope_transition(alg, t.label(n + 1), t.label(n), t.steps[n], &x).map(|_| ()).map_err(|e| format!("{e}"))
    });
    let elems = basis(alg);
    let per = elems.len() as u64;
    checker.exhaustive("transition is a morphism over A", d as u64 * per * per, |i| {
        let n = (i / (per * per)) as usize;
        let (x, y) = (&elems[(i / per % per) as usize], &elems[(i % per) as usize]);
        let (src, dst) = (t.object(n + 1), t.object(n));
        let f = |z: &Mat| alg.scale(z, t.steps[n]);
        expect_eq("δ∘f = δ", &dst.delta(&f(x)), &src.delta(x))?;
        expect_eq("f(xy) = f(x)f(y)", &f(&src.mul(x, y)), &dst.mul(&f(x), &f(y)))?;
        expect_eq("f(ax) = a f(x)", &f(&src.left(y, x)), &dst.left(y, &f(x)))
    });
    checker.exhaustive("transitions compose", (d.saturating_sub(1)) as u64, |n| {
        let n = n as usize;
        let two = ring.mul(t.steps[n + 1], t.steps[n]);
        expect_eq(&format!("{}→{}", n + 2, n), &t.transition_scalar(n + 2, n).map_err(|e| format!("{e}"))?, &two)
    });
}

/// A map of towers: component `j` sends `x` at source level `shift[j]` to `scalar[j]·x` at target level `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerMap {
    pub shift: Vec<usize>,
    pub scalar: Vec<Elem>,
}

impl TowerMap {
    pub fn identity(depth: usize, ring: &Ring) -> TowerMap {
        TowerMap { shift: (0..=depth).collect(), scalar: alloc::vec![ring.one(); depth + 1] }
    }

    pub fn depth(&self) -> usize {
        self.shift.len() - 1
    }

    /// Components commute with transitions and respect the homotope structure.
    pub fn check_morphism(&self, src: &Tower, dst: &Tower) -> Result<(), String> {
        let ring = src.alg.ring();
        let depth = self.depth().min(dst.depth());
        for j in 0..=depth {
            let i = self.shift[j];
            if i > src.depth() {
                return Err(format!("{}", TowerError::Truncated { needed: i, depth: src.depth() }));
            }
            // δ(c x) at label l_j equals δ(x) at label l_i
            let lhs = ring.mul(self.scalar[j], dst.label(j));
            if lhs != src.label(i) {
                return Err(format!("component {j} is not over A: {} ≠ {}", lhs, src.label(i)));
            }
            if j < depth {
                let (i1, i0) = (self.shift[j + 1], self.shift[j]);
                if i1 < i0 {
                    return Err(format!("shift decreases at level {j}"));
                }
                let a = ring.mul(dst.transition_scalar(j + 1, j).map_err(|e| format!("{e}"))?, self.scalar[j + 1]);
                let b = ring.mul(self.scalar[j], src.transition_scalar(i1, i0).map_err(|e| format!("{e}"))?);
                if a != b {
                    return Err(format!("component {} does not commute with transitions", j + 1));
                }
            }
        }
        Ok(())
    }
}

/// Result of a pro-equality comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProEquality {
    Equal,
    /// The first target level where no source level up to the horizon equalizes the maps.
    Different { level: usize, element: Mat },
}

/// Pro-equality certified up to `horizon`: for every target level `j` some source level
/// `i ≤ horizon` above both shifts makes the composites with transitions agree.
pub fn pro_equal(src: &Tower, f: &TowerMap, g: &TowerMap, horizon: usize) -> Result<ProEquality, TowerError> {
    if horizon > src.depth() {
        return Err(TowerError::Truncated { needed: horizon, depth: src.depth() });
    }
    let alg = &src.alg;
    let elems = basis(alg);
    for j in 0..=f.depth().min(g.depth()) {
        let lo = f.shift[j].max(g.shift[j]);
        let mut found = false;
        let mut witness = None;
        for i in lo..=horizon {
            let cf = alg.ring().mul(f.scalar[j], src.transition_scalar(i, f.shift[j])?);
            let cg = alg.ring().mul(g.scalar[j], src.transition_scalar(i, g.shift[j])?);
            match elems.iter().find(|x| alg.scale(x, cf) != alg.scale(x, cg)) {
                None => {
                    found = true;
                    break;
                }
                Some(x) => witness = Some(x.clone()),
            }
        }
        if !found {
            let element = witness.unwrap_or_else(|| alg.one());
            return Ok(ProEquality::Different { level: j, element });
        }
    }
    Ok(ProEquality::Equal)
}

/// Checks `u_j ∘ v_{σ_u(j)}` and `v_i ∘ u_{σ_v(i)}` against the designated transitions,
/// where `u: X → Y` and `v: Y → X`, exactly at every level up to both depths.
pub fn check_iso_witness(x: &Tower, y: &Tower, u: &TowerMap, v: &TowerMap, checker: &mut Checker) {
    let alg = x.alg.clone();
    let ring = alg.ring().clone();
    let elems = basis(&alg);
    let per = elems.len() as u64;
    let side = |name: &str, a: &Tower, b: &Tower, f: &TowerMap, g: &TowerMap, checker: &mut Checker| {
        // f: A → B, g: B → A; compares f_j ∘ g_{σ_f(j)} with the transition of B
        // levels whose composite stays inside the materialized towers
        let levels = (0..=f.depth().min(b.depth()))
            .take_while(|&j| f.shift[j] <= g.depth().min(a.depth()) && g.shift[f.shift[j]] <= b.depth())
            .count() as u64;
        checker.exhaustive(name, levels * per, |idx| {
            let j = (idx / per) as usize;
            let e = &elems[(idx % per) as usize];
            let mid = f.shift[j];
            if mid > g.depth() || mid > a.depth() {
                return Err(format!("{}", TowerError::Truncated { needed: mid, depth: g.depth().min(a.depth()) }));
            }
            let top = g.shift[mid];
            let c = ring.mul(f.scalar[j], g.scalar[mid]);
            let t = b.transition_scalar(top, j).map_err(|e| format!("{e}"))?;
            expect_eq(&format!("level {j} from level {top}"), &alg.scale(e, c), &alg.scale(e, t))
        });
    };
    side("u after v is the transition of Y", x, y, u, v, checker);
    side("v after u is the transition of X", y, x, v, u, checker);
}

/// `A^(∞,kⁿ) ≅ A^(∞,k)`: the map along `k^{n−1}` and its inverse by level multiplication.
pub fn power_reindexing(alg: &MatrixAlgebra, k: Elem, n: usize, depth: usize) -> Result<(Tower, Tower, TowerMap, TowerMap), TowerError> {
    let ring = alg.ring();
    let kn = ring.pow(k, n as u64);
    let x = Tower::colocalization(alg, kn, depth * n)?;
    let y = Tower::colocalization(alg, k, depth * n)?;
    let u = TowerMap {
        shift: (0..=depth * n).collect(),
        scalar: (0..=depth * n).map(|j| ring.pow(k, ((n - 1) * j) as u64)).collect(),
    };
    let v = TowerMap { shift: (0..=depth).map(|i| n * i).collect(), scalar: alloc::vec![ring.one(); depth + 1] };
    Ok((x, y, u, v))
}

/// Cofinality of `n ↦ kⁿ` in the category of `S = {1, k, k², …}`: every element of `S`
/// is some `kⁿ`, and each `s → kⁿ` factors with quotient in `S`.
pub fn check_power_cofinality(ring: &Ring, k: Elem, checker: &mut Checker) {
    let s = MultiplicativeSet::generated(ring, &[k]);
    let elems: Vec<Elem> = s.closure.iter().copied().collect();
    let bound = elems.len() as u64 + 1;
    checker.exhaustive("powers exhaust S", elems.len() as u64, |i| {
        let x = elems[i as usize];
        (0..=bound).find(|&n| ring.pow(k, n) == x).map(|_| ()).ok_or_else(|| format!("{} is no power", ring.format_elem(x)))
    });
    checker.exhaustive("powers are cofinal", elems.len() as u64, |i| {
        let x = elems[i as usize];
        let ok = (0..=bound).any(|n| elems.iter().any(|&q| ring.mul(x, q) == ring.pow(k, n)));
        if ok { Ok(()) } else { Err(format!("{} has no morphism to a power of k", ring.format_elem(x))) }
    });
}

/// Cofinality of `(s, n) ↦ sⁿ` together with a single cofinal generator of a finitely generated `S`.
pub fn check_multiplicative_limit(ring: &Ring, gens: &[Elem], checker: &mut Checker) {
    let s = MultiplicativeSet::generated(ring, gens);
    let sigma = s.cofinal_generator(ring);
    let elems: Vec<Elem> = s.closure.iter().copied().collect();
    let bound = elems.len() as u64 + 1;
    checker.exhaustive("every s maps to a power of the cofinal generator", elems.len() as u64, |i| {
        let x = elems[i as usize];
        let ok = (1..=bound).any(|n| elems.iter().any(|&q| ring.mul(x, q) == ring.pow(sigma, n)));
        if ok { Ok(()) } else { Err(format!("{} does not divide a power of {} inside S", x, sigma)) }
    });
    checker.exhaustive("(s, n) ↦ sⁿ reaches every s", elems.len() as u64, |i| {
        let x = elems[i as usize];
        if s.closure.contains(&ring.pow(x, 1)) { Ok(()) } else { Err(format!("{x} missing")) }
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    fn z(n: &str) -> MatrixAlgebra {
        MatrixAlgebra::full(Ring::parse(n).unwrap(), 1)
    }

    #[test]
    fn colocalization_levels() {
        let a = z("z12");
        let t = Tower::colocalization(&a, 2, 4).unwrap();
        assert_eq!(t.label(2), 4);
        let x = a.scalar(5);
        assert_eq!(t.transition(2, 1, &x).unwrap(), a.scalar(10));
        let one = Tower::colocalization(&a, 1, 3).unwrap();
        assert!((0..=3).all(|n| one.label(n) == 1));
        let mut c = Checker::new(0, 100);
        check_tower(&t, &mut c);
        assert!(c.finish().passed());
        let sq = Tower::colocalization(&a, 4, 2).unwrap();
        assert_eq!(t.reindex_power(2).unwrap(), sq);
        assert_eq!(Tower::colocalization(&a, 2, 0), Err(TowerError::ZeroDepth));
    }

    #[test]
    fn pro_equality() {
        let a = z("z12");
        let ring = a.ring().clone();
        let t = Tower::colocalization(&a, 2, 8).unwrap();
        let id = TowerMap::identity(4, &ring);
        assert_eq!(pro_equal(&t, &id, &id, 8).unwrap(), ProEquality::Equal);
        let times4 = TowerMap { shift: (0..=4).map(|j| j + 2).collect(), scalar: alloc::vec![4; 5] };
        assert_eq!(pro_equal(&t, &id, &times4, 8).unwrap(), ProEquality::Equal);
        let times3 = TowerMap { shift: (0..=4).collect(), scalar: alloc::vec![3; 5] };
        assert!(matches!(pro_equal(&t, &id, &times3, 8).unwrap(), ProEquality::Different { level: 0, .. }));
        assert!(pro_equal(&t, &id, &id, 9).is_err());
        assert!(times4.check_morphism(&t, &t).is_ok());
    }

    #[test]
    fn reindexing_isomorphisms() {
        let a = MatrixAlgebra::full(Ring::parse("z12").unwrap(), 2);
        for (k, n) in [(2, 2), (3, 3), (4, 2), (1, 2)] {
            let (x, y, u, v) = power_reindexing(&a, k, n, 3).unwrap();
            assert!(u.check_morphism(&x, &y).is_ok());
            let mut c = Checker::new(0, 100);
            check_iso_witness(&x, &y, &u, &v, &mut c);
            let r = c.finish();
            assert!(r.passed(), "{:?}", r.failures().next());
        }
        let ring = Ring::parse("z12").unwrap();
        let mut c = Checker::new(0, 100);
        check_power_cofinality(&ring, 4, &mut c);
        check_multiplicative_limit(&ring, &[2, 3], &mut c);
        assert!(c.finish().passed());
    }

    #[test]
    fn identity_witness() {
        let a = z("z12");
        let t = Tower::colocalization(&a, 2, 3).unwrap();
        let id = TowerMap::identity(3, a.ring());
        let mut c = Checker::new(0, 100);
        check_iso_witness(&t, &t, &id, &id, &mut c);
        assert!(c.finish().passed());
        let bad = TowerMap { shift: (0..=3).collect(), scalar: alloc::vec![5; 4] };
        let mut c = Checker::new(0, 100);
        check_iso_witness(&t, &t, &bad, &id, &mut c);
        assert!(!c.finish().passed());
    }
}
