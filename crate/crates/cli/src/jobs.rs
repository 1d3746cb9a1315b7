//! Typed check jobs built from resolved scenario keys, and their execution.

use std::collections::{BTreeMap, BTreeSet};

use rand_core::RngCore;

use stpro_core::algebra::{check_crossed_module, check_transition_functoriality, homotope, CrossedKind, CrossedModule};
use stpro_core::check::{expect_eq, Checker, Focus, Report};
use stpro_core::cosheaf::{check_cosheaf, check_cosheaf_witness, cosheaf_presentation_levels, Piece};
use stpro_core::gauss::{gauss_decompose, in_d_alpha, multiply_factors, GaussFactor};
use stpro_core::gluing::{check_gluing_relations, check_weak_action_identities};
use stpro_core::matrix::{Mat, MatrixAlgebra};
use stpro_core::oddform::{
    build_split_oddform, check_oddform_axioms, root_shape, Family, Involution, OddForm, Parameter, RootShape, Unitary,
};
use stpro_core::presentation::{enumerate_steinberg, gl_order, DEFAULT_LIMIT};
use stpro_core::realize::{Linear, Realization};
use stpro_core::relative::{check_crossed_square, check_relative_presentation, RelativeModel};
use stpro_core::ring::{Elem, Ring};
use stpro_core::rootsys::{RootSystem, RootType};
use stpro_core::steinberg::{check_linear_chevalley_oracle, check_product_injectivity, check_steinberg_relations, extract_chevalley_maps};
use stpro_core::tower::{check_iso_witness, check_multiplicative_limit, check_power_cofinality, check_tower, power_reindexing, Tower};

use crate::config::{ConfigError, Value};

pub const KINDS: [&str; 13] = [
    "roots",
    "homotope",
    "tower",
    "oddform",
    "steinberg",
    "chevalley",
    "relative",
    "crossed-square",
    "cosheaf",
    "gluing",
    "weak-action",
    "gauss",
    "enumerate",
];

/// Keys every entry may carry besides the job parameters.
const COMMON: [&str; 5] = ["check", "seed", "budget", "expect", "criterion"];

pub enum Real {
    Linear(Linear<MatrixAlgebra>),
    Unitary(Box<Unitary>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    None,
    Transpose,
    Minimal,
}

pub enum Job {
    Roots { sys: RootSystem },
    Homotope { alg: MatrixAlgebra, labels: Vec<Elem>, depth: usize },
    Tower { alg: MatrixAlgebra, k: Elem, depth: usize, powers: Vec<usize>, generators: Vec<Elem> },
    OddForm { form: OddForm, family: Family, mutation: Mutation },
    Steinberg { real: Real },
    Chevalley { real: Real, pair: Option<(usize, usize)> },
    Relative { module: CrossedModule },
    CrossedSquare { module: CrossedModule },
    Cosheaf {
        pieces: Vec<(String, Piece)>,
        s: Elem,
        ks: Vec<Elem>,
        depth: u32,
        limit: usize,
        partition: Vec<(u32, Vec<Elem>)>,
        perturb: Option<(u32, usize, Elem)>,
    },
    Gluing { alg: MatrixAlgebra, s: Elem, ks: Vec<Elem>, depth: u32 },
    WeakAction { alg: MatrixAlgebra, s: Elem, ks: Vec<Elem>, g: Mat, depth: u32 },
    Gauss { alg: MatrixAlgebra, trials: u64 },
    Enumerate { real: Real, eliminate: usize, limit: usize },
}

/// Typed access to the keys of one entry, with locations for errors.
pub struct Keys<'a> {
    source: &'a str,
    line: usize,
    map: &'a BTreeMap<String, Value>,
    used: std::cell::RefCell<BTreeSet<String>>,
}

impl<'a> Keys<'a> {
    pub fn new(source: &'a str, line: usize, map: &'a BTreeMap<String, Value>) -> Keys<'a> {
        Keys { source, line, map, used: Default::default() }
    }

    fn err_at(&self, line: usize, msg: String) -> ConfigError {
        ConfigError::new(self.source, line, msg)
    }

    pub fn get(&self, key: &str) -> Option<&'a Value> {
        self.used.borrow_mut().insert(key.to_string());
        self.map.get(key)
    }

    fn required(&self, key: &str) -> Result<&'a Value, ConfigError> {
        self.get(key).ok_or_else(|| self.err_at(self.line, format!("missing key {key:?}")))
    }

    fn text_or(&self, key: &str, default: &str) -> String {
        self.get(key).map_or_else(|| default.to_string(), |v| v.text.clone())
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.text.parse().map_err(|_| self.err_at(v.line, format!("{key}: expected a non-negative integer, found {:?}", v.text))),
        }
    }

    fn ring(&self, key: &str) -> Result<Ring, ConfigError> {
        let v = self.required(key)?;
        Ring::parse(&v.text).map_err(|_| self.err_at(v.line, format!("unknown ring tag {:?}", v.text)))
    }

    fn algebra(&self, key: &str) -> Result<MatrixAlgebra, ConfigError> {
        let v = self.required(key)?;
        MatrixAlgebra::parse_tag(&v.text).map_err(|e| self.err_at(v.line, format!("{e}")))
    }

    fn system(&self, key: &str) -> Result<RootSystem, ConfigError> {
        let v = self.required(key)?;
        RootSystem::parse(&v.text).map_err(|_| self.err_at(v.line, format!("unknown root system tag {:?}", v.text)))
    }

    fn elem_in(&self, ring: &Ring, v: &Value, s: &str) -> Result<Elem, ConfigError> {
        ring.parse_elem(s.trim()).map_err(|_| self.err_at(v.line, format!("{:?} is not an element of {}", s.trim(), ring.tag())))
    }

    fn elem(&self, ring: &Ring, key: &str, default: Option<Elem>) -> Result<Elem, ConfigError> {
        match (self.get(key), default) {
            (Some(v), _) => self.elem_in(ring, v, &v.text),
            (None, Some(d)) => Ok(d),
            (None, None) => Err(self.err_at(self.line, format!("missing key {key:?}"))),
        }
    }

    fn elems(&self, ring: &Ring, key: &str) -> Result<Vec<Elem>, ConfigError> {
        let v = self.required(key)?;
        if v.text.trim() == "all" {
            return Ok(ring.elements().collect());
        }
        v.text.split(',').map(|x| self.elem_in(ring, v, x)).collect()
    }

    fn root(&self, sys: &RootSystem, v: &Value, s: &str) -> Result<usize, ConfigError> {
        sys.parse_root(s.trim()).map_err(|_| self.err_at(v.line, format!("{:?} is not a root of {}", s.trim(), sys.tag())))
    }

    /// Rejects keys that no part of the job read.
    fn finish(&self) -> Result<(), ConfigError> {
        let used = self.used.borrow();
        for (k, v) in self.map {
            if !used.contains(k) && !COMMON.contains(&k.as_str()) {
                return Err(self.err_at(v.line, format!("unknown key {k:?}")));
            }
        }
        Ok(())
    }
}

fn realization(keys: &Keys) -> Result<Real, ConfigError> {
    let kind = keys.text_or("realization", "linear");
    match kind.as_str() {
        "linear" => {
            let alg = keys.algebra("algebra")?;
            let lin = Linear::new(alg).ok_or_else(|| keys.err_at(keys.line, "linear realization needs at least two blocks".into()))?;
            if let Some(v) = keys.get("phi") {
                if v.text != lin.system().tag() {
                    return Err(keys.err_at(v.line, format!("phi = {} does not match the algebra, which realizes {}", v.text, lin.system().tag())));
                }
            }
            Ok(Real::Linear(lin))
        }
        "unitary" => {
            let ring = keys.ring("K")?;
            let rank = keys.u64_or("rank", 3)? as usize;
            let middle = keys.u64_or("middle", 1)? as usize;
            let (form, family) = build_split_oddform(&ring, rank, middle).map_err(|e| keys.err_at(keys.line, format!("{e}")))?;
            let u = Unitary::new(form, family).map_err(|e| keys.err_at(keys.line, format!("{e}")))?;
            if let Some(v) = keys.get("phi") {
                if v.text != u.system().tag() {
                    return Err(keys.err_at(v.line, format!("phi = {} does not match the odd form, which realizes {}", v.text, u.system().tag())));
                }
            }
            Ok(Real::Unitary(Box::new(u)))
        }
        other => Err(keys.err_at(keys.get("realization").map_or(keys.line, |v| v.line), format!("unknown realization {other:?}"))),
    }
}

fn real_system(real: &Real) -> &RootSystem {
    match real {
        Real::Linear(l) => l.system(),
        Real::Unitary(u) => u.system(),
    }
}

fn module(keys: &Keys) -> Result<CrossedModule, ConfigError> {
    let alg = keys.algebra("algebra")?;
    let ring = alg.ring().clone();
    let given: Vec<&str> = ["ideal", "homotope", "zero"].into_iter().filter(|k| keys.map.contains_key(*k)).collect();
    if given.len() > 1 {
        return Err(keys.err_at(keys.line, format!("give only one of {}", given.join(", "))));
    }
    let kind = if keys.map.contains_key("homotope") {
        CrossedKind::Homotope(keys.elem(&ring, "homotope", None)?)
    } else if keys.get("zero").is_some() {
        CrossedKind::ZeroProduct
    } else {
        CrossedKind::Ideal(keys.elem(&ring, "ideal", None)?)
    };
    Ok(CrossedModule::new(alg, kind))
}

/// `[..]` matrix literals, `diag:d1,d2,…` and `root:α:p`.
fn matrix(keys: &Keys, alg: &MatrixAlgebra, v: &Value) -> Result<Mat, ConfigError> {
    let ring = alg.ring();
    let t = v.text.trim();
    if t == "identity" {
        return Ok(alg.one());
    }
    if let Some(d) = t.strip_prefix("diag:") {
        let ds: Vec<&str> = d.split(',').collect();
        if ds.len() != alg.size() {
            return Err(keys.err_at(v.line, format!("diag needs {} entries", alg.size())));
        }
        let mut m = alg.zero();
        for (i, x) in ds.iter().enumerate() {
            m.set(i, i, keys.elem_in(ring, v, x)?);
        }
        return Ok(m);
    }
    if let Some(r) = t.strip_prefix("root:") {
        let lin = Linear::new(alg.clone()).ok_or_else(|| keys.err_at(v.line, "root elements need at least two blocks".into()))?;
        let (name, p) = r.rsplit_once(':').ok_or_else(|| keys.err_at(v.line, "expected root:ALPHA:P".into()))?;
        let a = keys.root(lin.system(), v, name)?;
        let (i, j) = lin.ends(a);
        let mut x = alg.zero();
        x.set(alg.block_offset(i), alg.block_offset(j), keys.elem_in(ring, v, p)?);
        return Ok(lin.t(a, &x));
    }
    alg.parse(t).ok_or_else(|| keys.err_at(v.line, format!("cannot read {t:?} as a matrix of {}", alg.tag())))
}

impl Job {
    pub fn build(kind: &str, keys: &Keys) -> Result<Job, ConfigError> {
        let job = match kind {
            "roots" => Job::Roots { sys: keys.system("phi")? },
            "homotope" => {
                let alg = keys.algebra("algebra")?;
                let labels = keys.elems(alg.ring(), "s")?;
                Job::Homotope { labels, depth: keys.u64_or("depth", 4)? as usize, alg }
            }
            "tower" => {
                let alg = keys.algebra("algebra")?;
                let k = keys.elem(alg.ring(), "k", None)?;
                let powers = match keys.get("powers") {
                    None => vec![2],
                    Some(v) => v
                        .text
                        .split(',')
                        .map(|x| x.trim().parse().ok().filter(|&n: &usize| n >= 1))
                        .collect::<Option<_>>()
                        .ok_or_else(|| keys.err_at(v.line, "powers: expected positive integers".into()))?,
                };
                let generators = if keys.map.contains_key("generators") { keys.elems(alg.ring(), "generators")? } else { vec![k] };
                Job::Tower { k, depth: keys.u64_or("depth", 4)? as usize, powers, generators, alg }
            }
            "oddform" => {
                let ring = keys.ring("K")?;
                let rank = keys.u64_or("rank", 3)? as usize;
                let middle = keys.u64_or("middle", 1)? as usize;
                let (form, family) = build_split_oddform(&ring, rank, middle).map_err(|e| keys.err_at(keys.line, format!("{e}")))?;
                let mutation = match keys.text_or("mutation", "none").as_str() {
                    "none" => Mutation::None,
                    "transpose" => Mutation::Transpose,
                    "minimal" => Mutation::Minimal,
                    other => return Err(keys.err_at(keys.get("mutation").unwrap().line, format!("unknown mutation {other:?}"))),
                };
                let level = keys.elem(&ring, "level", Some(ring.one()))?;
                let form = form.at_level(level);
                Job::OddForm { form, family, mutation }
            }
            "steinberg" => Job::Steinberg { real: realization(keys)? },
            "chevalley" => {
                let real = realization(keys)?;
                let sys = real_system(&real).clone();
                let pair = match (keys.get("alpha"), keys.get("beta")) {
                    (Some(a), Some(b)) => {
                        let (a, b) = (keys.root(&sys, a, &a.text)?, keys.root(&sys, b, &b.text)?);
                        if sys.is_anti_parallel(a, b) {
                            return Err(keys.err_at(keys.line, "alpha and beta are anti-parallel".into()));
                        }
                        Some((a, b))
                    }
                    (None, None) => None,
                    _ => return Err(keys.err_at(keys.line, "give both alpha and beta, or neither".into())),
                };
                Job::Chevalley { real, pair }
            }
            "relative" => Job::Relative { module: module(keys)? },
            "crossed-square" => Job::CrossedSquare { module: module(keys)? },
            "cosheaf" => {
                let ring = keys.ring("K")?;
                let sys = keys.system("phi")?;
                let s = keys.elem(&ring, "s", Some(ring.one()))?;
                let ks = keys.elems(&ring, "ks")?;
                let alpha = keys.get("alpha");
                let pieces = match sys.kind() {
                    RootType::A => {
                        let alg = MatrixAlgebra::full(ring.clone(), sys.rank() + 1);
                        let lin = Linear::new(alg.clone()).expect("rank ≥ 1");
                        let roots: Vec<usize> = match alpha {
                            Some(v) if v.text != "all" => vec![keys.root(&sys, v, &v.text)?],
                            _ => (0..sys.len()).collect(),
                        };
                        roots
                            .into_iter()
                            .map(|r| (sys.format_root(r), Piece::Linear { alg: alg.clone(), block: lin.ends(r) }))
                            .collect()
                    }
                    RootType::BC => {
                        let middle = keys.u64_or("middle", 1)? as usize;
                        let (form, _) = build_split_oddform(&ring, sys.rank(), middle).map_err(|e| keys.err_at(keys.line, format!("{e}")))?;
                        let ultrashort: Vec<usize> =
                            (0..sys.len()).filter(|&r| matches!(root_shape(&sys, r), RootShape::Ultrashort { .. })).collect();
                        let roots = match alpha {
                            Some(v) if v.text != "all" => {
                                let r = keys.root(&sys, v, &v.text)?;
                                if !ultrashort.contains(&r) {
                                    return Err(keys.err_at(v.line, format!("{} is not ultrashort; only ultrashort roots have the unitary witness", v.text)));
                                }
                                vec![r]
                            }
                            _ => ultrashort,
                        };
                        roots
                            .into_iter()
                            .map(|r| {
                                let RootShape::Ultrashort { j } = root_shape(&sys, r) else { unreachable!() };
                                (sys.format_root(r), Piece::Unitary { form: form.clone(), j })
                            })
                            .collect()
                    }
                    _ => return Err(keys.err_at(keys.required("phi")?.line, "cosheaf witnesses exist for types A and BC".into())),
                };
                let partition = match keys.get("partition") {
                    None => Vec::new(),
                    Some(v) => v
                        .text
                        .split_whitespace()
                        .map(|part| {
                            let (m, ts) = part.split_once(':').ok_or_else(|| keys.err_at(v.line, "partition: expected LEVEL:t1,t2 …".into()))?;
                            let m: u32 = m.parse().map_err(|_| keys.err_at(v.line, format!("bad level {m:?}")))?;
                            let ts = ts.split(',').map(|x| keys.elem_in(&ring, v, x)).collect::<Result<Vec<_>, _>>()?;
                            Ok((m, ts))
                        })
                        .collect::<Result<_, ConfigError>>()?,
                };
                let perturb = match keys.get("perturb") {
                    None => None,
                    Some(v) => {
                        let parts: Vec<&str> = v.text.split(':').collect();
                        let bad = || keys.err_at(v.line, "perturb: expected LEVEL:INDEX:VALUE".into());
                        if parts.len() != 3 {
                            return Err(bad());
                        }
                        let m = parts[0].parse().map_err(|_| bad())?;
                        let i: usize = parts[1].parse().map_err(|_| bad())?;
                        if i == 0 || i > ks.len() {
                            return Err(bad());
                        }
                        Some((m, i - 1, keys.elem_in(&ring, v, parts[2])?))
                    }
                };
                Job::Cosheaf {
                    pieces,
                    s,
                    ks,
                    depth: keys.u64_or("depth", 4)? as u32,
                    limit: keys.u64_or("limit", 200_000)? as usize,
                    partition,
                    perturb,
                }
            }
            "gluing" | "weak-action" => {
                let alg = keys.algebra("algebra")?;
                let ring = alg.ring().clone();
                let s = keys.elem(&ring, "s", Some(ring.one()))?;
                let ks = keys.elems(&ring, "ks")?;
                if kind == "gluing" {
                    Job::Gluing { alg, s, ks, depth: keys.u64_or("depth", 4)? as u32 }
                } else {
                    let g = match keys.get("g") {
                        Some(v) => matrix(keys, &alg, v)?,
                        None => alg.one(),
                    };
                    Job::WeakAction { g, depth: keys.u64_or("depth", 3)? as u32, alg, s, ks }
                }
            }
            "gauss" => {
                let alg = keys.algebra("algebra")?;
                Job::Gauss { alg, trials: keys.u64_or("trials", 1000)? }
            }
            "enumerate" => {
                let real = realization(keys)?;
                let sys = real_system(&real).clone();
                let eliminate = match keys.get("eliminate") {
                    Some(v) => keys.root(&sys, v, &v.text)?,
                    None => 0,
                };
                Job::Enumerate { real, eliminate, limit: keys.u64_or("limit", DEFAULT_LIMIT as u64)? as usize }
            }
            other => {
                let line = keys.get("check").map_or(keys.line, |v| v.line);
                return Err(keys.err_at(line, format!("unknown check kind {other:?} (known: {})", KINDS.join(", "))));
            }
        };
        keys.finish()?;
        Ok(job)
    }
}

/// Runs sub-checks under name prefixes, honoring a replay focus.
pub struct Runner {
    pub seed: u64,
    pub budget: u64,
    pub focus: Option<Focus>,
    pub report: Report,
}

impl Runner {
    pub fn new(seed: u64, budget: u64, focus: Option<Focus>) -> Runner {
        Runner { seed, budget, focus, report: Report::default() }
    }

    fn checker(&self, prefix: Option<&str>) -> Option<Checker> {
        match (&self.focus, prefix) {
            (None, _) => Some(Checker::new(self.seed, self.budget)),
            (Some(f), None) => Some(Checker::focused(self.seed, self.budget, f.clone())),
            (Some(f), Some(p)) => {
                let rest = f.name.strip_prefix(p)?.strip_prefix('/')?;
                Some(Checker::focused(self.seed, self.budget, Focus { name: rest.to_string(), index: f.index }))
            }
        }
    }

    pub fn part(&mut self, prefix: Option<&str>, f: impl FnOnce(&mut Checker)) {
        if let Some(mut c) = self.checker(prefix) {
            f(&mut c);
            let r = c.finish();
            self.report.extend(match prefix {
                Some(p) => r.prefixed(p),
                None => r,
            });
        }
    }

    pub fn finish(self) -> Report {
        self.report
    }
}

fn steinberg_checks<R: Realization>(real: &R, r: &mut Runner) {
    r.part(None, |c| {
        check_product_injectivity(real, c);
        check_steinberg_relations(real, c);
    });
}

fn chevalley_checks<R: Realization>(real: &R, pair: Option<(usize, usize)>, r: &mut Runner) {
    let sys = real.system().clone();
    let pairs: Vec<(usize, usize)> = match pair {
        Some(p) => vec![p],
        None => (0..sys.len()).flat_map(|a| (0..sys.len()).map(move |b| (a, b))).filter(|&(a, b)| !sys.is_anti_parallel(a, b)).collect(),
    };
    // (pair, p index, q index) flattened
    let sizes: Vec<u64> = pairs.iter().map(|&(a, b)| real.p_count(a).saturating_mul(real.p_count(b))).collect();
    let total = sizes.iter().fold(0u64, |acc, &x| acc.saturating_add(x));
    let law = |k: usize, p: &R::P, q: &R::P| -> Result<(), String> {
        let (a, b) = pairs[k];
        extract_chevalley_maps(real, a, b, p, q)
            .map(|_| ())
            .map_err(|e| format!("[{}, {}]: {e}", sys.format_root(a), sys.format_root(b)))
    };
    r.part(None, |c| {
        c.auto(
            "zero residue after peeling",
            total,
            |mut i| {
                let mut k = 0;
                while i >= sizes[k] {
                    i -= sizes[k];
                    k += 1;
                }
                let (a, b) = pairs[k];
                let na = real.p_count(a);
                law(k, &real.p_nth(a, i % na), &real.p_nth(b, i / na))
            },
            |rng| {
                let k = (rng.next_u64() % pairs.len() as u64) as usize;
                let (a, b) = pairs[k];
                let p = real.p_random(a, rng);
                let q = real.p_random(b, rng);
                law(k, &p, &q)
            },
        );
    });
}

fn enumerate_checks<R: Realization>(real: &R, eliminate: usize, limit: usize, sizes: Option<(u32, u64)>, r: &mut Runner) {
    r.part(None, |c| match enumerate_steinberg(real, eliminate, limit) {
        Err(e) => c.inconclusive("enumeration", format!("{e}")),
        Ok(out) => {
            let cert = &out.certificate;
            c.single("enumeration terminates", || Ok(()));
            c.note(format!(
                "|St| = {}, {} generators, {} relators, {} cosets defined, {} live at most, {} lookaheads",
                cert.order, cert.generators, cert.relators, cert.stats.defined, cert.stats.max_live, cert.stats.lookaheads
            ));
            c.single("relators hold in the carrier", || if cert.relators_hold { Ok(()) } else { Err("some relator is nontrivial".into()) });
            c.single("canonical map is surjective", || {
                if cert.surjective() {
                    Ok(())
                } else {
                    Err(format!("image {} of elementary subgroup {}", cert.image_order, cert.elementary_order))
                }
            });
            if let Some((n, q)) = sizes {
                let gl = gl_order(n, q);
                c.single("elementary order matches the order formula", || {
                    // over a field E_n = SL_n, of index q − 1 in GL_n
                    expect_eq(&format!("|E_{n}(F_{q})|"), &(cert.elementary_order as u64), &(gl / (q - 1)))
                });
                c.note(format!("|GL_{n}(F_{q})| = {gl}"));
            }
            c.single("kernel is central", || if cert.kernel_central { Ok(()) } else { Err("a kernel element fails to commute".into()) });
            c.note(format!("K2 order {}", cert.kernel_order));
            c.single("root elimination preserves the group", || {
                let e = &out.eliminated;
                if e.isomorphic() {
                    Ok(())
                } else {
                    Err(format!("eliminating {}: orders {} and {}, homomorphism {}, surjective {}", out.eliminated_root, e.left_order, e.right_order, e.homomorphism, e.surjective))
                }
            });
            c.note(format!("eliminated {}", out.eliminated_root));
        }
    });
}

fn roots_checks(sys: &RootSystem, r: &mut Runner) {
    let n = sys.len() as u64;
    r.part(None, |c| {
        c.exhaustive("closed under negation", n, |i| {
            let x = sys.root(i as usize).neg();
            sys.index_of(&x).map(|_| ()).ok_or_else(|| format!("-{} missing", sys.format_root(i as usize)))
        });
        c.exhaustive("closed under reflections", n * n, |i| {
            let (a, b) = (sys.root((i / n) as usize), sys.root((i % n) as usize));
            let (ab, aa) = (a.dot(&b), a.dot(&a));
            if (2 * ab) % aa != 0 {
                return Err(format!("2(α,β)/(α,α) = {}/{} is not an integer", 2 * ab, aa));
            }
            let img = b.add(&a.scale(-(2 * ab / aa) as i32));
            sys.index_of(&img).map(|_| ()).ok_or_else(|| format!("s_α(β) leaves Φ for α = {}, β = {}", sys.format_root((i / n) as usize), sys.format_root((i % n) as usize)))
        });
        match sys.special_closed_subsets() {
            Ok(sets) => {
                let count = sets.len() as u64;
                c.exhaustive("special closed subsets are closed and in a half-space", count, |i| {
                    let s = &sets[i as usize];
                    if sys.is_special_closed(s) {
                        Ok(())
                    } else {
                        Err(sys.format_subset(s))
                    }
                });
                c.note(format!("{} roots, {count} special closed subsets", sys.len()));
            }
            Err(e) => c.inconclusive("special closed subsets", format!("{e}")),
        }
    });
}

impl Job {
    pub fn run(&self, seed: u64, budget: u64, focus: Option<Focus>) -> Report {
        let mut r = Runner::new(seed, budget, focus);
        match self {
            Job::Roots { sys } => roots_checks(sys, &mut r),
            Job::Homotope { alg, labels, depth } => {
                let ring = alg.ring().clone();
                for &s in labels {
                    let p = format!("s={}", ring.format_elem(s));
                    r.part(Some(&p), |c| {
                        check_crossed_module(&homotope(alg, s), c);
                        check_transition_functoriality(alg, s, c);
                        match Tower::colocalization(alg, s, *depth) {
                            Ok(t) => check_tower(&t, c),
                            Err(e) => c.inconclusive("tower", format!("{e}")),
                        }
                    });
                }
            }
            Job::Tower { alg, k, depth, powers, generators } => {
                let ring = alg.ring().clone();
                r.part(None, |c| match Tower::colocalization(alg, *k, *depth) {
                    Ok(t) => check_tower(&t, c),
                    Err(e) => c.inconclusive("tower", format!("{e}")),
                });
                for &n in powers {
                    let p = format!("power {n}");
                    r.part(Some(&p), |c| match power_reindexing(alg, *k, n, *depth) {
                        Ok((x, y, u, v)) => {
                            c.single("u is a tower map", || u.check_morphism(&x, &y));
                            c.single("v is a tower map", || v.check_morphism(&y, &x));
                            check_iso_witness(&x, &y, &u, &v, c);
                        }
                        Err(e) => c.inconclusive("reindexing", format!("{e}")),
                    });
                }
                r.part(None, |c| {
                    check_power_cofinality(&ring, *k, c);
                    check_multiplicative_limit(&ring, generators, c);
                });
            }
            Job::OddForm { form, family, mutation } => r.part(None, |c| match mutation {
                Mutation::None => check_oddform_axioms(form, family, c),
                Mutation::Transpose => {
                    let t = form.with_involution(Involution::Transpose);
                    check_oddform_axioms(&t, &t.standard_family(), c)
                }
                Mutation::Minimal => {
                    let m = form.with_parameter(Parameter::Minimal);
                    check_oddform_axioms(&m, &m.standard_family(), c)
                }
            }),
            Job::Steinberg { real } => match real {
                Real::Linear(l) => steinberg_checks(l, &mut r),
                Real::Unitary(u) => steinberg_checks(u.as_ref(), &mut r),
            },
            Job::Chevalley { real, pair } => match real {
                Real::Linear(l) => {
                    chevalley_checks(l, *pair, &mut r);
                    r.part(None, |c| check_linear_chevalley_oracle(l, c));
                }
                Real::Unitary(u) => chevalley_checks(u.as_ref(), *pair, &mut r),
            },
            Job::Relative { module } | Job::CrossedSquare { module } => {
                let square = matches!(self, Job::CrossedSquare { .. });
                r.part(None, |c| match RelativeModel::new(module.clone()) {
                    Ok(m) if square => check_crossed_square(&m, c),
                    Ok(m) => check_relative_presentation(&m, c),
                    Err(e) => c.inconclusive("crossed module", format!("{e}")),
                });
            }
            Job::Cosheaf { pieces, s, ks, depth, limit, partition, perturb } => {
                let ring = pieces[0].1.ring().clone();
                if !partition.is_empty() {
                    r.part(None, |c| {
                        c.exhaustive("partition of unity matches", partition.len() as u64, |i| {
                            let (m, ts) = &partition[i as usize];
                            let got = ring.partition_of_unity(*s, ks, *m);
                            expect_eq(&format!("level {m}"), &got, &Some(ts.clone()))
                        })
                    });
                }
                for (name, piece) in pieces {
                    r.part(Some(name), |c| match perturb {
                        None => {
                            if let Err(e) = check_cosheaf(piece, *s, ks, *depth, *limit, c) {
                                c.inconclusive("presentation", format!("{e}"));
                            }
                        }
                        Some((m, i, v)) => match cosheaf_presentation_levels(piece, *s, ks, *depth, *limit) {
                            Ok(levels) => {
                                let mut t: Vec<Vec<Elem>> = levels.iter().map(|l| l.coefficients.clone()).collect();
                                if let Some(row) = t.get_mut(*m as usize) {
                                    row[*i] = *v;
                                }
                                check_cosheaf_witness(piece, *s, ks, &levels, &t, c);
                            }
                            Err(e) => c.inconclusive("presentation", format!("{e}")),
                        },
                    });
                }
            }
            Job::Gluing { alg, s, ks, depth } => r.part(None, |c| {
                if let Err(e) = check_gluing_relations(alg, *s, ks, *depth, c) {
                    c.inconclusive("hypothesis", format!("{e}"));
                }
            }),
            Job::WeakAction { alg, s, ks, g, depth } => r.part(None, |c| match check_weak_action_identities(alg, *s, ks, g, *depth, c) {
                Ok(actions) => {
                    let parts: Vec<String> = actions
                        .iter()
                        .map(|a| {
                            let target = Linear::new(alg.with_ring(a.localization.target.clone()));
                            let fs: Vec<String> = match &target {
                                Some(l) => a.factors.iter().map(|f| f.describe(l)).collect(),
                                None => Vec::new(),
                            };
                            format!("k = {}: [{}] from level {}", alg.ring().format_elem(a.k), fs.join(" "), a.start)
                        })
                        .collect();
                    c.note(parts.join("; "));
                }
                Err(e) => c.inconclusive("covering", format!("{e}")),
            }),
            Job::Gauss { alg, trials } => r.part(None, |c| match Linear::new(alg.clone()) {
                None => c.inconclusive("gauss", "needs at least two blocks".into()),
                Some(lin) => c.sampled("factors re-multiply", *trials, |rng| {
                    let g = alg.random_unit(rng);
                    let fs = gauss_decompose(&lin, &g).map_err(|e| format!("{e}"))?;
                    for f in &fs {
                        if let GaussFactor::D { root, g: d } = f {
                            if !in_d_alpha(&lin, *root, d) {
                                return Err(format!("{} is not in its D subgroup", f.describe(&lin)));
                            }
                        }
                    }
                    expect_eq("product of factors", &multiply_factors(&lin, &fs), &g)
                }),
            }),
            Job::Enumerate { real, eliminate, limit } => match real {
                Real::Linear(l) => {
                    let alg = &l.algebra;
                    let ring = alg.ring();
                    let field = ring.factors().len() == 1 && ring.factors()[0].exp == 1;
                    let sizes = (field && alg.blocks() == alg.size()).then(|| (alg.size() as u32, ring.order()));
                    enumerate_checks(l, *eliminate, *limit, sizes, &mut r)
                }
                Real::Unitary(u) => enumerate_checks(u.as_ref(), *eliminate, *limit, None, &mut r),
            },
        }
        r.finish()
    }
}
