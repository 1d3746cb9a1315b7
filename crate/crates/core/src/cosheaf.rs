//! Root parameter groups over a Zariski covering: the levelwise presentations by
//! the images of the covering pieces and the explicit inverse maps.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::check::{expect_eq, Checker};
use crate::coset::{todd_coxeter, CosetTable, EnumError, Presentation};
use crate::freegroup::{commutator, concat, gen, Word};
use crate::matrix::MatrixAlgebra;
use crate::oddform::{OddForm, Point, RootShape, UParam};
use crate::ring::{unity_shift, Elem, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CosheafError {
    /// `s^{m'}` is not in the ideal generated by the `k_i^m`.
    HypothesisFailure { level: u32 },
    /// The unitary witness is only implemented for `s = 1`.
    UnitaryNeedsUnitS,
    TooManyGenerators { count: usize, limit: usize },
    Enumeration(EnumError),
}

impl fmt::Display for CosheafError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CosheafError::HypothesisFailure { level } => {
                write!(f, "no partition of unity at level {level}: s^m' is not in the ideal of the k_i^m")
            }
            CosheafError::UnitaryNeedsUnitS => write!(f, "the unitary variant is only evaluated for s = 1"),
            CosheafError::TooManyGenerators { count, limit } => {
                write!(f, "{count} generators exceed the limit {limit}")
            }
            CosheafError::Enumeration(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for CosheafError {}

pub const GENERATOR_LIMIT: usize = 4096;

/// The root parameter group `P_α` of one root, at any homotope level.
#[derive(Clone, Debug)]
pub enum Piece {
    /// `e_i A e_j` with addition.
    Linear { alg: MatrixAlgebra, block: (usize, usize) },
    /// Ultrashort parameters `(m, a)` of the odd form at the given level.
    Unitary { form: OddForm, j: i32 },
}

impl Piece {
    pub fn ring(&self) -> &Ring {
        match self {
            Piece::Linear { alg, .. } => alg.ring(),
            Piece::Unitary { form, .. } => form.ring(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Piece::Linear { alg, block } => format!("block ({}, {}) of {}", block.0 + 1, block.1 + 1, alg.tag()),
            Piece::Unitary { form, j } => format!("ultrashort e{j} parameters of the {}", form.describe()),
        }
    }

    /// All parameters at label `l`, zero first.
    pub fn params(&self, l: Elem) -> Vec<UParam> {
        let mut out: Vec<UParam> = match self {
            Piece::Linear { alg, block } => alg.block_elements(block.0, block.1).into_iter().map(UParam::Block).collect(),
            Piece::Unitary { form, j } => form.at_level(l).list_params(RootShape::Ultrashort { j: *j }),
        };
        let z = self.zero();
        out.retain(|p| *p != z);
        out.sort();
        out.insert(0, z);
        out
    }

    pub fn zero(&self) -> UParam {
        match self {
            Piece::Linear { alg, .. } => UParam::Block(alg.zero()),
            Piece::Unitary { form, .. } => UParam::Point(form.zero_point()),
        }
    }

    /// The group law at label `l`.
    pub fn add(&self, l: Elem, x: &UParam, y: &UParam) -> UParam {
        match (self, x, y) {
            (Piece::Linear { alg, .. }, UParam::Block(a), UParam::Block(b)) => UParam::Block(alg.add(a, b)),
            (Piece::Unitary { form, .. }, UParam::Point(u), UParam::Point(v)) => UParam::Point(form.at_level(l).plus(u, v)),
            _ => unreachable!("parameter kinds match the piece"),
        }
    }

    pub fn neg(&self, x: &UParam) -> UParam {
        match (self, x) {
            (Piece::Linear { alg, .. }, UParam::Block(a)) => UParam::Block(alg.neg(a)),
            (Piece::Unitary { form, .. }, UParam::Point(u)) => UParam::Point(form.minus(u)),
            _ => unreachable!("parameter kinds match the piece"),
        }
    }

    /// The transition along `r`: label `l r` to label `l`.
    pub fn along(&self, x: &UParam, r: Elem) -> UParam {
        match (self, x) {
            (Piece::Linear { alg, .. }, UParam::Block(a)) => UParam::Block(alg.scale(a, r)),
            (Piece::Unitary { form, .. }, UParam::Point(u)) => {
                let alg = form.algebra();
                UParam::Point(Point { m: alg.scale(&u.m, r), a: alg.scale(&u.a, r) })
            }
            _ => unreachable!("parameter kinds match the piece"),
        }
    }

    /// `(x·t)^{(l)}` for `x` at label 1 in the unitary case, `x t` in the linear case.
    fn scaled(&self, x: &UParam, t: Elem, l: Elem) -> UParam {
        match (self, x) {
            (Piece::Linear { alg, .. }, UParam::Block(a)) => UParam::Block(alg.scale(a, t)),
            (Piece::Unitary { form, .. }, UParam::Point(u)) => {
                let alg = form.algebra();
                let ring = form.ring();
                let c = ring.mul(ring.mul(t, t), l);
                UParam::Point(Point { m: alg.scale(&u.m, t), a: alg.scale(&u.a, c) })
            }
            _ => unreachable!("parameter kinds match the piece"),
        }
    }

    /// `φ((ρ(x) c)^{(l)})`; nothing in the linear case.
    fn correction(&self, x: &UParam, c: Elem) -> Option<UParam> {
        match (self, x) {
            (Piece::Linear { .. }, _) => None,
            (Piece::Unitary { form, .. }, UParam::Point(u)) => {
                Some(UParam::Point(form.phi(&form.algebra().scale(&form.rho(u), c))))
            }
            _ => unreachable!("parameter kinds match the piece"),
        }
    }

    /// Right side of the commutator relation: `φ(conj(π(v) k) π(u))` at the label of `u`.
    fn commutator_value(&self, u: &UParam, v: &UParam, k: Elem) -> UParam {
        match (self, u, v) {
            (Piece::Linear { .. }, _, _) => self.zero(),
            (Piece::Unitary { form, .. }, UParam::Point(u), UParam::Point(v)) => {
                let alg = form.algebra();
                let y = alg.mul(&form.bar(&alg.scale(&form.pi(v), k)), &form.pi(u));
                UParam::Point(form.phi(&y))
            }
            _ => unreachable!("parameter kinds match the piece"),
        }
    }

    pub fn format(&self, x: &UParam) -> String {
        match (self, x) {
            (Piece::Linear { alg, .. }, UParam::Block(a)) => alg.format(a),
            (Piece::Unitary { form, .. }, UParam::Point(u)) => form.format_point(u),
            _ => format!("{x:?}"),
        }
    }
}

/// One level `m` of the presented tower.
#[derive(Clone, Debug)]
pub struct CosheafLevel {
    pub m: u32,
    /// `m' = max(0, (m − 1)n + 1)`.
    pub shift: u32,
    /// `t_{im}` with `s^{m'} = Σ k_i^m t_{im}`.
    pub coefficients: Vec<Elem>,
    pub presentation: Presentation,
    pub table: CosetTable,
    generators: BTreeMap<(usize, UParam), usize>,
}

impl CosheafLevel {
    /// `can_i(w)` as a word; the zero parameter is the empty word.
    pub fn word(&self, i: usize, w: &UParam) -> Word {
        match self.generators.get(&(i, w.clone())) {
            Some(&g) => alloc::vec![gen(g)],
            None => Word::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.table.index()
    }
}

/// Labels `(s k_i)^m` of the covering pieces and `s^m` of the glued object.
fn labels(ring: &Ring, s: Elem, ks: &[Elem], m: u32) -> (Vec<Elem>, Elem) {
    let piece = ks.iter().map(|&k| ring.pow(ring.mul(s, k), m as u64)).collect();
    (piece, ring.pow(s, m as u64))
}

/// The group `G_m` generated by `can_i(w)` with additivity, commutator and
/// identification relations, enumerated over the trivial subgroup.
pub fn cosheaf_presentation_levels(
    piece: &Piece,
    s: Elem,
    ks: &[Elem],
    depth: u32,
    limit: usize,
) -> Result<Vec<CosheafLevel>, CosheafError> {
    let ring = piece.ring().clone();
    if matches!(piece, Piece::Unitary { .. }) && s != ring.one() {
        return Err(CosheafError::UnitaryNeedsUnitS);
    }
    let n = ks.len();
    let mut out = Vec::new();
    for m in 0..=depth {
        let coefficients = ring.partition_of_unity(s, ks, m).ok_or(CosheafError::HypothesisFailure { level: m })?;
        let (pl, _) = labels(&ring, s, ks, m);
        let params: Vec<Vec<UParam>> = pl.iter().map(|&l| piece.params(l)).collect();
        let count: usize = params.iter().map(|p| p.len() - 1).sum();
        if count > GENERATOR_LIMIT {
            return Err(CosheafError::TooManyGenerators { count, limit: GENERATOR_LIMIT });
        }
        let mut generators = BTreeMap::new();
        let mut names = Vec::new();
        for (i, ps) in params.iter().enumerate() {
            for w in &ps[1..] {
                generators.insert((i, w.clone()), names.len());
                names.push(format!("can{}({})", i + 1, piece.format(w)));
            }
        }
        let word = |i: usize, w: &UParam| -> Word {
            generators.get(&(i, w.clone())).map(|&g| alloc::vec![gen(g)]).unwrap_or_default()
        };
        let mut p = Presentation::new(names);
        for i in 0..n {
            for x in &params[i] {
                for y in &params[i] {
                    p.equate(&concat(&[&word(i, x), &word(i, y)]), &word(i, &piece.add(pl[i], x, y)));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let kj = ring.mul(ring.pow(ks[j], m as u64), ring.pow(s, m as u64));
                for x in &params[i][1..] {
                    for y in &params[j][1..] {
                        let c = piece.commutator_value(x, y, kj);
                        p.equate(&commutator(&word(i, x), &word(j, y)), &word(i, &c));
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let (ki, kj) = (ring.pow(ks[i], m as u64), ring.pow(ks[j], m as u64));
                let l = ring.mul(pl[i], ring.pow(ks[j], m as u64));
                for a in piece.params(l) {
                    p.equate(&word(i, &piece.along(&a, kj)), &word(j, &piece.along(&a, ki)));
                }
            }
        }
        let table = todd_coxeter(&p, &[], limit).map_err(CosheafError::Enumeration)?;
        out.push(CosheafLevel { m, shift: unity_shift(m, n), coefficients, presentation: p, table, generators });
    }
    Ok(out)
}

/// `v_m`: a parameter at label `s^{m'+m}` to the word `∑ can_i(x t_im) ∔ ∑_{i<j} can_i(φ(…))`.
fn v_word(piece: &Piece, level: &CosheafLevel, s: Elem, ks: &[Elem], t: &[Elem], x: &UParam) -> Word {
    let ring = piece.ring();
    let m = level.m as u64;
    let (pl, _) = labels(ring, s, ks, level.m);
    let mut w = Word::new();
    for i in 0..ks.len() {
        w.extend(level.word(i, &piece.scaled(x, t[i], pl[i])));
    }
    for i in 0..ks.len() {
        for j in i + 1..ks.len() {
            let c = ring.mul(ring.mul(ring.pow(s, m), ring.mul(t[i], t[j])), ring.pow(ks[j], m));
            if let Some(y) = piece.correction(x, c) {
                w.extend(level.word(i, &y));
            }
        }
    }
    w
}

/// Checks the comparison `u_m: G_m → P_α(A^(s^m))` and the inverse witness `v_m`
/// at every level: `u` is a well-defined bijective homomorphism, `v` is a
/// homomorphism, `u_m ∘ v_m` and `v_m ∘ u_{m'+m}` are the transitions.
/// `coefficients[m]` overrides the partition of unity of level `m`.
pub fn check_cosheaf_witness(
    piece: &Piece,
    s: Elem,
    ks: &[Elem],
    levels: &[CosheafLevel],
    coefficients: &[Vec<Elem>],
    checker: &mut Checker,
) {
    let ring = piece.ring().clone();
    for (level, t) in levels.iter().zip(coefficients) {
        let m = level.m;
        let tag = format!("level {m}");
        let (_, gl) = labels(&ring, s, ks, m);
        let target = piece.params(gl);
        let top = m + level.shift;
        let (tl, top_label) = labels(&ring, s, ks, top);
        let source = piece.params(top_label);
        let kms: Vec<Elem> = ks.iter().map(|&k| ring.pow(k, m as u64)).collect();
        // u on generators, then on cosets through the transversal
        let mut gens: Vec<(usize, UParam)> = alloc::vec![(0, piece.zero()); level.generators.len()];
        for ((i, w), &g) in &level.generators {
            gens[g] = (*i, w.clone());
        }
        let u_gen = |g: usize| piece.along(&gens[g].1, kms[gens[g].0]);
        let u_word = |w: &[i32]| -> UParam {
            w.iter().fold(piece.zero(), |acc, &l| {
                let x = u_gen(l.unsigned_abs() as usize - 1);
                piece.add(gl, &acc, &if l > 0 { x } else { piece.neg(&x) })
            })
        };
        let images: Vec<UParam> = level.table.transversal().iter().map(|w| u_word(w)).collect();
        let cosets = level.table.index() as u64;
        let ng = gens.len() as u64;
        checker.exhaustive(&format!("{tag}: u is a well-defined homomorphism"), cosets * ng.max(1), |idx| {
            if ng == 0 {
                return Ok(());
            }
            let (c, g) = ((idx / ng) as usize, (idx % ng) as usize);
            let there = &images[level.table.act(c, gen(g))];
            expect_eq(&format!("u(c·{})", level.presentation.generators[g]), there, &piece.add(gl, &images[c], &u_gen(g)))
        });
        checker.single(&format!("{tag}: u is bijective"), || {
            let image: BTreeSet<&UParam> = images.iter().collect();
            if image.len() == target.len() && level.order() == target.len() {
                Ok(())
            } else {
                Err(format!("|G_m| = {}, |image| = {}, |P| = {}", level.order(), image.len(), target.len()))
            }
        });
        let v = |x: &UParam| level.table.trace(0, &v_word(piece, level, s, ks, t, x));
        let per = source.len() as u64;
        checker.exhaustive(&format!("{tag}: v is a homomorphism"), per * per, |idx| {
            let (x, y) = (&source[(idx / per) as usize], &source[(idx % per) as usize]);
            let sum = piece.add(top_label, x, y);
            let lhs = level.table.trace(v(x), &v_word(piece, level, s, ks, t, y));
            if lhs == v(&sum) {
                Ok(())
            } else {
                Err(format!("v({} ∔ {}) differs from v({}) v({})", piece.format(x), piece.format(y), piece.format(x), piece.format(y)))
            }
        });
        let shift = ring.pow(s, level.shift as u64);
        checker.exhaustive(&format!("{tag}: u after v is the transition"), per, |idx| {
            let x = &source[idx as usize];
            expect_eq(&format!("u(v({}))", piece.format(x)), &images[v(x)], &piece.along(x, shift))
        });
        let tops: Vec<Vec<UParam>> = tl.iter().map(|&l| piece.params(l)).collect();
        let offsets: Vec<u64> = tops.iter().scan(0u64, |acc, p| { let o = *acc; *acc += p.len() as u64; Some(o) }).collect();
        let total: u64 = tops.iter().map(|p| p.len() as u64).sum();
        checker.exhaustive(&format!("{tag}: v after u is the transition"), total, |idx| {
            let i = offsets.iter().rposition(|&o| o <= idx).expect("offsets start at zero");
            let w = &tops[i][(idx - offsets[i]) as usize];
            let top_k = ring.pow(ks[i], top as u64);
            let image = piece.along(w, top_k);
            let along = ring.pow(ring.mul(s, ks[i]), level.shift as u64);
            let expected = level.table.trace(0, &level.word(i, &piece.along(w, along)));
            if v(&image) == expected {
                Ok(())
            } else {
                Err(format!("v(u(can{}({}))) ≠ can{}({})", i + 1, piece.format(w), i + 1, piece.format(&piece.along(w, along))))
            }
        });
    }
}

/// `|⊕_i P_α(A^((sk_i)^m))|` divided by the subgroup generated by the
/// identification relations; the abelian presentation computed without enumeration.
pub fn direct_sum_quotient_order(piece: &Piece, s: Elem, ks: &[Elem], m: u32, limit: usize) -> Option<usize> {
    let ring = piece.ring();
    let n = ks.len();
    let (pl, _) = labels(ring, s, ks, m);
    let params: Vec<Vec<UParam>> = pl.iter().map(|&l| piece.params(l)).collect();
    let total = params.iter().try_fold(1usize, |acc, p| acc.checked_mul(p.len()))?;
    if total > limit || !matches!(piece, Piece::Linear { .. }) {
        return None;
    }
    let zero: Vec<UParam> = alloc::vec![piece.zero(); n];
    let add = |x: &[UParam], y: &[UParam]| -> Vec<UParam> {
        x.iter().zip(y).zip(&pl).map(|((a, b), &l)| piece.add(l, a, b)).collect()
    };
    let mut rels = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (ki, kj) = (ring.pow(ks[i], m as u64), ring.pow(ks[j], m as u64));
            for a in piece.params(ring.mul(pl[i], kj)) {
                let mut r = zero.clone();
                r[i] = piece.along(&a, kj);
                // the negative in the j-th summand
                let neg = piece.along(&a, ring.neg(ki));
                r[j] = neg;
                rels.push(r);
            }
        }
    }
    let mut seen: BTreeSet<Vec<UParam>> = BTreeSet::new();
    seen.insert(zero.clone());
    let mut frontier = alloc::vec![zero];
    while let Some(x) = frontier.pop() {
        for r in &rels {
            let y = add(&x, r);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    Some(total / seen.len())
}

/// Convenience: build the levels and check the witness with the computed partition of unity.
pub fn check_cosheaf(piece: &Piece, s: Elem, ks: &[Elem], depth: u32, limit: usize, checker: &mut Checker) -> Result<Vec<CosheafLevel>, CosheafError> {
    let levels = cosheaf_presentation_levels(piece, s, ks, depth, limit)?;
    let coefficients: Vec<Vec<Elem>> = levels.iter().map(|l| l.coefficients.clone()).collect();
    for l in &levels {
        checker.note(format!(
            "level {}: m' = {}, t = ({}), |G_m| = {}",
            l.m,
            l.shift,
            l.coefficients.iter().map(|&x| piece.ring().format_elem(x)).collect::<Vec<_>>().join(", "),
            l.order()
        ));
    }
    check_cosheaf_witness(piece, s, ks, &levels, &coefficients, checker);
    if matches!(piece, Piece::Linear { .. }) {
        let limit = 1 << 16;
        checker.exhaustive("direct sum quotient has the enumerated order", levels.len() as u64, |i| {
            let l = &levels[i as usize];
            match direct_sum_quotient_order(piece, s, ks, l.m, limit) {
                Some(o) => expect_eq(&format!("level {}", l.m), &o, &l.order()),
                None => Ok(()),
            }
        });
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::EnumError;
    use crate::oddform::build_split_oddform;

    fn linear(tag: &str, block: (usize, usize)) -> Piece {
        Piece::Linear { alg: MatrixAlgebra::full(Ring::parse(tag).unwrap(), 4), block }
    }

    #[test]
    fn linear_witness_z12() {
        let piece = linear("z12", (0, 1));
        let mut c = Checker::new(0, 10_000);
        let levels = check_cosheaf(&piece, 1, &[3, 4], 4, 100_000, &mut c).unwrap();
        let r = c.finish();
        assert!(r.passed(), "{:?}", r.failures().next());
        assert_eq!(levels[1].coefficients, [3, 1]);
        assert_eq!(levels[2].coefficients, [1, 1]);
        assert!(levels.iter().all(|l| l.order() == 12));
    }

    #[test]
    fn trivial_covering() {
        let piece = linear("z4", (1, 2));
        let mut c = Checker::new(0, 10_000);
        let levels = check_cosheaf(&piece, 2, &[1], 3, 100_000, &mut c).unwrap();
        assert!(c.finish().passed());
        assert!(levels.iter().all(|l| l.order() == 4));
    }

    #[test]
    fn perturbed_coefficient_fails() {
        let piece = linear("z12", (0, 1));
        let levels = cosheaf_presentation_levels(&piece, 1, &[3, 4], 2, 100_000).unwrap();
        let mut t: Vec<Vec<Elem>> = levels.iter().map(|l| l.coefficients.clone()).collect();
        t[1][0] = 2;
        let mut c = Checker::new(0, 10_000);
        check_cosheaf_witness(&piece, 1, &[3, 4], &levels, &t, &mut c);
        let r = c.finish();
        let bad = r.get("level 1: u after v is the transition").unwrap();
        assert!(bad.witness.is_some());
    }

    #[test]
    fn hypothesis_failure() {
        let piece = linear("z12", (0, 1));
        assert_eq!(
            cosheaf_presentation_levels(&piece, 1, &[2, 4], 2, 1000).unwrap_err(),
            CosheafError::HypothesisFailure { level: 1 }
        );
        assert!(matches!(
            cosheaf_presentation_levels(&piece, 1, &[3, 4], 1, 2),
            Err(CosheafError::Enumeration(EnumError::Overflow { .. }))
        ));
    }

    #[test]
    fn unitary_ultrashort() {
        let (form, _) = build_split_oddform(&Ring::parse("z12").unwrap(), 3, 1).unwrap();
        let piece = Piece::Unitary { form, j: 1 };
        let mut c = Checker::new(0, 10_000);
        let levels = check_cosheaf(&piece, 1, &[3, 4], 4, 100_000, &mut c).unwrap();
        let r = c.finish();
        assert!(r.passed(), "{:?}", r.failures().next());
        assert!(levels.iter().all(|l| l.order() == piece.params(1).len()));
    }
}
