//! Steinberg presentations over finite parameter sets, root elimination and
//! certification of the canonical map to a realization.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::coset::{todd_coxeter, CosetTable, EnumError, EnumStats, Presentation};
use crate::freegroup::{self, Letter, Word};
use crate::realize::Realization;
use crate::rootsys::RootSystem;
use crate::steinberg::{commuting_pairs, extract_chevalley_maps, ChevalleyError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PresentationError {
    TooManyGenerators { roots: usize, limit: u64 },
    RankTooSmall(usize),
    Chevalley(ChevalleyError),
    Enumeration(EnumError),
}

impl fmt::Display for PresentationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresentationError::TooManyGenerators { roots, limit } => {
                write!(f, "parameter sets over {roots} roots exceed {limit} symbols")
            }
            PresentationError::RankTooSmall(r) => write!(f, "root elimination needs rank at least 3, got {r}"),
            PresentationError::Chevalley(e) => write!(f, "{e}"),
            PresentationError::Enumeration(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for PresentationError {}

impl From<EnumError> for PresentationError {
    fn from(e: EnumError) -> Self {
        PresentationError::Enumeration(e)
    }
}

/// Origin of a relator, used by root elimination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelKind {
    Additive(usize),
    /// `x_{2α}(p) = x_α(p)`, tagged with `α`.
    Doubled(usize),
    Commutator(usize, usize),
}

#[derive(Clone, Debug)]
pub struct SteinbergPresentation<P> {
    pub system: RootSystem,
    pub presentation: Presentation,
    /// `(root, parameter)` of every generator.
    pub symbols: Vec<(usize, P)>,
    pub kinds: Vec<RelKind>,
}

pub const SYMBOL_LIMIT: u64 = 4096;

struct Builder<P: Ord> {
    index: BTreeMap<(usize, P), usize>,
    relators: Vec<Word>,
    kinds: Vec<RelKind>,
    seen: BTreeSet<Word>,
}

impl<P: Ord + Clone> Builder<P> {
    fn word(&self, root: usize, p: &P) -> Word {
        match self.index.get(&(root, p.clone())) {
            Some(&g) => vec![freegroup::gen(g)],
            None => Word::new(),
        }
    }

    fn push(&mut self, w: Word, kind: RelKind) {
        let w = freegroup::reduce(&w);
        if !w.is_empty() && self.seen.insert(w.clone()) {
            self.relators.push(w);
            self.kinds.push(kind);
        }
    }
}

/// One generator per nonzero parameter of every root; additivity, doubled-root
/// identification and every commutator instance with maps extracted from `real`.
pub fn steinberg_presentation<R: Realization>(real: &R) -> Result<SteinbergPresentation<R::P>, PresentationError> {
    let sys = real.system().clone();
    let total = (0..sys.len()).map(|r| real.p_count(r)).fold(0u64, |a, b| a.saturating_add(b));
    if total > SYMBOL_LIMIT {
        return Err(PresentationError::TooManyGenerators { roots: sys.len(), limit: SYMBOL_LIMIT });
    }
    let params: Vec<Vec<R::P>> = (0..sys.len())
        .map(|r| {
            let zero = real.p_zero(r);
            (0..real.p_count(r)).map(|i| real.p_nth(r, i)).filter(|p| *p != zero).collect()
        })
        .collect();
    let mut symbols = Vec::new();
    let mut names = Vec::new();
    let mut index = BTreeMap::new();
    for (r, ps) in params.iter().enumerate() {
        for p in ps {
            index.insert((r, p.clone()), symbols.len());
            names.push(format!("x[{}]({})", sys.format_root(r), real.p_format(r, p)));
            symbols.push((r, p.clone()));
        }
    }
    let mut b = Builder { index, relators: Vec::new(), kinds: Vec::new(), seen: BTreeSet::new() };
    for (r, ps) in params.iter().enumerate() {
        for p in ps {
            for q in ps {
                let w = [b.word(r, p), b.word(r, q), freegroup::inverse(&b.word(r, &real.p_add(r, p, q)))].concat();
                b.push(w, RelKind::Additive(r));
            }
        }
        if let Some(d) = sys.double(r) {
            for p in &params[d] {
                if real.is_param(r, p) {
                    let w = [b.word(d, p), freegroup::inverse(&b.word(r, p))].concat();
                    b.push(w, RelKind::Doubled(r));
                }
            }
        }
    }
    for (x, y) in commuting_pairs(real) {
        for p in &params[x] {
            for q in &params[y] {
                let fs = extract_chevalley_maps(real, x, y, p, q).map_err(PresentationError::Chevalley)?;
                let rhs: Word = fs.iter().flat_map(|(g, v)| b.word(*g, v)).collect();
                let lhs = freegroup::commutator(&b.word(x, p), &b.word(y, q));
                b.push([lhs, freegroup::inverse(&rhs)].concat(), RelKind::Commutator(x, y));
            }
        }
    }
    Ok(SteinbergPresentation {
        system: sys,
        presentation: Presentation { generators: names, relators: b.relators },
        symbols,
        kinds: b.kinds,
    })
}

/// `α ∈ ℝ≥0 β + ℝ≥0 γ`.
pub fn in_cone(sys: &RootSystem, a: usize, b: usize, c: usize) -> bool {
    let (x, y, z) = (sys.root(a), sys.root(b), sys.root(c));
    let (bb, bc, cc) = (y.dot(&y), y.dot(&z), z.dot(&z));
    let (ab, ac) = (x.dot(&y), x.dot(&z));
    let det = bb * cc - bc * bc;
    if det == 0 {
        return sys.is_parallel(a, b) || sys.is_parallel(a, c);
    }
    let i = ab * cc - ac * bc;
    let j = ac * bb - ab * bc;
    if i < 0 || j < 0 {
        return false;
    }
    let lhs = y.scale(i as i32).add(&z.scale(j as i32));
    lhs == x.scale(det as i32)
}

/// Drops the generators of roots positively parallel to `α` and the relations
/// listed for them: their additivity, their doubled-root identification and the
/// commutator relations of `β, γ` with `α` in the cone of `β, γ`.
pub fn eliminate_root<P: Clone>(sp: &SteinbergPresentation<P>, a: usize) -> SteinbergPresentation<P> {
    let sys = &sp.system;
    let dropped = |r: usize| sys.is_parallel(r, a);
    let mut renum: Vec<Option<usize>> = vec![None; sp.symbols.len()];
    let mut symbols = Vec::new();
    let mut names = Vec::new();
    for (g, (r, p)) in sp.symbols.iter().enumerate() {
        if !dropped(*r) {
            renum[g] = Some(symbols.len());
            symbols.push((*r, p.clone()));
            names.push(sp.presentation.generators[g].clone());
        }
    }
    let mut relators = Vec::new();
    let mut kinds = Vec::new();
    for (w, k) in sp.presentation.relators.iter().zip(&sp.kinds) {
        let drop = match *k {
            RelKind::Additive(r) | RelKind::Doubled(r) => dropped(r),
            RelKind::Commutator(x, y) => in_cone(sys, a, x, y),
        };
        if drop {
            continue;
        }
        let mapped: Option<Word> = w
            .iter()
            .map(|&l| renum[l.unsigned_abs() as usize - 1].map(|g| freegroup::gen(g) * l.signum()))
            .collect();
        relators.push(mapped.expect("retained relators avoid dropped generators"));
        kinds.push(*k);
    }
    SteinbergPresentation {
        system: sp.system.clone(),
        presentation: Presentation { generators: names, relators },
        symbols,
        kinds,
    }
}

impl<P: Ord> SteinbergPresentation<P> {
    /// Words of this presentation's generators inside `other`, matched by `(root, parameter)`.
    pub fn dictionary_into(&self, other: &SteinbergPresentation<P>) -> Option<Vec<Word>> {
        let idx: BTreeMap<&(usize, P), usize> = other.symbols.iter().enumerate().map(|(g, s)| (s, g)).collect();
        self.symbols.iter().map(|s| idx.get(s).map(|&g| vec![freegroup::gen(g)])).collect()
    }
}

/// Evaluates a word in the carrier by sending generator `g` to `t_α(p)`.
pub fn evaluate<R: Realization>(real: &R, symbols: &[(usize, R::P)], w: &[Letter]) -> R::G {
    w.iter().fold(real.one(), |acc, &l| {
        let (r, p) = &symbols[l.unsigned_abs() as usize - 1];
        let x = real.t(*r, p);
        let x = if l < 0 { real.inv(&x) } else { x };
        real.mul(&acc, &x)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub left_order: usize,
    pub right_order: usize,
    pub homomorphism: bool,
    pub surjective: bool,
}

impl Comparison {
    pub fn isomorphic(&self) -> bool {
        self.homomorphism && self.surjective && self.left_order == self.right_order
    }
}

/// Checks that `dict` (generator of `p1` ↦ word of `p2`) defines a surjective
/// homomorphism between groups of the same finite order, hence an isomorphism.
pub fn compare_presentations(
    p1: &Presentation,
    p2: &Presentation,
    dict: &[Word],
    limit: usize,
) -> Result<Comparison, EnumError> {
    let t1 = todd_coxeter(p1, &[], limit)?;
    let t2 = todd_coxeter(p2, &[], limit)?;
    Ok(compare_tables(p1, &t1, &t2, dict))
}

pub fn compare_tables(p1: &Presentation, t1: &CosetTable, t2: &CosetTable, dict: &[Word]) -> Comparison {
    let image = |w: &[Letter]| -> Word {
        w.iter()
            .flat_map(|&l| {
                let v = &dict[l.unsigned_abs() as usize - 1];
                if l > 0 { v.clone() } else { freegroup::inverse(v) }
            })
            .collect()
    };
    let homomorphism = p1.relators.iter().all(|r| t2.trace(0, &image(r)) == 0);
    let mut seen = vec![false; t2.index()];
    seen[0] = true;
    let mut stack = vec![0usize];
    while let Some(c) = stack.pop() {
        for w in dict {
            for d in [t2.trace(c, w), t2.trace(c, &freegroup::inverse(w))] {
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
    }
    Comparison {
        left_order: t1.index(),
        right_order: t2.index(),
        homomorphism,
        surjective: seen.iter().all(|&s| s),
    }
}

/// Certificate for the canonical map from an enumerated Steinberg group to its realization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapCertificate {
    pub generators: usize,
    pub relators: usize,
    pub order: usize,
    pub relators_hold: bool,
    pub image_order: usize,
    /// Order of the carrier subgroup generated by all root elements.
    pub elementary_order: usize,
    pub kernel_order: usize,
    pub kernel_central: bool,
    pub stats: EnumStats,
}

impl MapCertificate {
    pub fn surjective(&self) -> bool {
        self.image_order == self.elementary_order
    }
}

/// Subgroup of the carrier generated by the given elements, by closure.
pub fn generated_subgroup<R: Realization>(real: &R, gens: &[R::G], limit: usize) -> Option<BTreeSet<R::G>> {
    let mut seen = BTreeSet::new();
    seen.insert(real.one());
    let mut stack = vec![real.one()];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = real.mul(&x, g);
            if seen.insert(y.clone()) {
                if seen.len() > limit {
                    return None;
                }
                stack.push(y);
            }
        }
    }
    Some(seen)
}

pub fn certify_map<R: Realization>(
    real: &R,
    sp: &SteinbergPresentation<R::P>,
    table: &CosetTable,
) -> MapCertificate {
    let relators_hold = sp.presentation.relators.iter().all(|r| real.is_one(&evaluate(real, &sp.symbols, r)));
    let words = table.transversal();
    let images: Vec<R::G> = words.iter().map(|w| evaluate(real, &sp.symbols, w)).collect();
    let image: BTreeSet<&R::G> = images.iter().collect();
    let one = real.one();
    let kernel: Vec<usize> = (0..images.len()).filter(|&c| images[c] == one).collect();
    let gens = sp.presentation.generators.len() as Letter;
    let kernel_central = kernel.iter().all(|&c| {
        (1..=gens).all(|g| table.act(c, g) == table.trace(table.act(0, g), &words[c]))
    });
    let roots: Vec<R::G> = sp.symbols.iter().map(|(r, p)| real.t(*r, p)).collect();
    let elementary = generated_subgroup(real, &roots, 4 * images.len().max(1)).map_or(usize::MAX, |s| s.len());
    MapCertificate {
        generators: sp.presentation.generators.len(),
        relators: sp.presentation.relators.len(),
        order: table.index(),
        relators_hold,
        image_order: image.len(),
        elementary_order: elementary,
        kernel_order: kernel.len(),
        kernel_central,
        stats: table.stats,
    }
}

/// `|GL_n(F_q)| = ∏_{i<n} (qⁿ − qⁱ)`.
pub fn gl_order(n: u32, q: u64) -> u64 {
    (0..n).map(|i| q.pow(n) - q.pow(i)).product()
}

pub const DEFAULT_LIMIT: usize = 1_000_000;

/// Full certification run: presentation, enumeration, canonical map and root elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationOutcome {
    pub certificate: MapCertificate,
    pub eliminated_root: String,
    pub eliminated: Comparison,
}

pub fn enumerate_steinberg<R: Realization>(
    real: &R,
    eliminate: usize,
    limit: usize,
) -> Result<EnumerationOutcome, PresentationError> {
    if real.system().rank() < 3 {
        return Err(PresentationError::RankTooSmall(real.system().rank()));
    }
    let sp = steinberg_presentation(real)?;
    let table = todd_coxeter(&sp.presentation, &[], limit)?;
    let certificate = certify_map(real, &sp, &table);
    let el = eliminate_root(&sp, eliminate);
    let dict = el.dictionary_into(&sp).expect("eliminated symbols are a subset");
    let t_el = todd_coxeter(&el.presentation, &[], limit)?;
    let eliminated = compare_tables(&el.presentation, &t_el, &table, &dict);
    Ok(EnumerationOutcome { certificate, eliminated_root: sp.system.format_root(eliminate), eliminated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::MatrixAlgebra;
    use crate::realize::Linear;
    use crate::ring::Ring;

    fn linear(n: usize, tag: &str) -> Linear<MatrixAlgebra> {
        Linear::new(MatrixAlgebra::full(Ring::parse(tag).unwrap(), n)).unwrap()
    }

    #[test]
    fn presentation_counts() {
        let a2 = steinberg_presentation(&linear(3, "f2")).unwrap();
        assert_eq!(a2.presentation.generators.len(), 6);
        let a3 = steinberg_presentation(&linear(4, "f2")).unwrap();
        assert_eq!(a3.presentation.generators.len(), 12);
        assert!(a3.presentation.is_well_formed());
        let sys = a3.system.clone();
        let a = sys.parse_root("e1-e2").unwrap();
        let el = eliminate_root(&a3, a);
        assert_eq!(el.presentation.generators.len(), 11);
        let full: BTreeSet<&Word> = a3.presentation.relators.iter().collect();
        let dict = el.dictionary_into(&a3).unwrap();
        for r in &el.presentation.relators {
            let back: Word = r.iter().map(|&l| dict[l.unsigned_abs() as usize - 1][0] * l.signum()).collect();
            assert!(full.contains(&back));
        }
    }

    #[test]
    fn cone_membership() {
        let sys = RootSystem::parse("A3").unwrap();
        let r = |s: &str| sys.parse_root(s).unwrap();
        assert!(in_cone(&sys, r("e1-e3"), r("e1-e2"), r("e2-e3")));
        assert!(!in_cone(&sys, r("e1-e3"), r("e1-e2"), r("e3-e4")));
        assert!(in_cone(&sys, r("e1-e2"), r("e1-e2"), r("e3-e4")));
    }

    #[test]
    fn a2_over_f2_is_sl3() {
        let lin = linear(3, "f2");
        let sp = steinberg_presentation(&lin).unwrap();
        let t = todd_coxeter(&sp.presentation, &[], DEFAULT_LIMIT).unwrap();
        let c = certify_map(&lin, &sp, &t);
        assert!(c.relators_hold);
        assert_eq!(c.elementary_order as u64, gl_order(3, 2));
        assert!(c.surjective());
        assert!(c.kernel_central);
        // below rank 3 the map is still surjective with central kernel
        assert_eq!(c.order, c.image_order * c.kernel_order);
    }

    #[test]
    fn identity_comparison() {
        let lin = linear(3, "f2");
        let sp = steinberg_presentation(&lin).unwrap();
        let dict = sp.dictionary_into(&sp).unwrap();
        let c = compare_presentations(&sp.presentation, &sp.presentation, &dict, DEFAULT_LIMIT).unwrap();
        assert!(c.isomorphic());
    }
}

