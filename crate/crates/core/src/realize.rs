//! Groups with commutator relations realized inside a concrete carrier group.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand_core::RngCore;

use crate::algebra::AssocAlgebra;
use crate::rootsys::{RootSystem, RootType};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternMismatch {
    pub root: String,
    pub detail: String,
}

impl fmt::Display for PatternMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "element does not match the pattern of root {}: {}", self.root, self.detail)
    }
}

impl core::error::Error for PatternMismatch {}

/// Root subgroups `t_α: P_α → G` together with coordinate readers.
pub trait Realization {
    type G: Clone + Eq + Ord + fmt::Debug;
    type P: Clone + Eq + Ord + fmt::Debug;

    fn system(&self) -> &RootSystem;
    fn describe(&self) -> String;

    fn one(&self) -> Self::G;
    fn mul(&self, g: &Self::G, h: &Self::G) -> Self::G;
    fn inv(&self, g: &Self::G) -> Self::G;
    fn format_g(&self, g: &Self::G) -> String;

    fn t(&self, root: usize, p: &Self::P) -> Self::G;
    /// Reads the coordinate of `root` from an element whose leading factor lies in that root subgroup.
    fn read(&self, root: usize, g: &Self::G) -> Result<Self::P, PatternMismatch>;

    fn p_zero(&self, root: usize) -> Self::P;
    fn p_add(&self, root: usize, p: &Self::P, q: &Self::P) -> Self::P;
    fn p_neg(&self, root: usize, p: &Self::P) -> Self::P;
    /// `|P_α|`, saturating at `u64::MAX`.
    fn p_count(&self, root: usize) -> u64;
    fn p_nth(&self, root: usize, idx: u64) -> Self::P;
    fn p_random(&self, root: usize, rng: &mut dyn RngCore) -> Self::P;
    fn is_param(&self, root: usize, p: &Self::P) -> bool;
    fn p_format(&self, root: usize, p: &Self::P) -> String;

    fn is_one(&self, g: &Self::G) -> bool {
        *g == self.one()
    }

    /// `[g, h] = g h g⁻¹ h⁻¹`.
    fn comm(&self, g: &Self::G, h: &Self::G) -> Self::G {
        let gh = self.mul(g, h);
        self.mul(&gh, &self.mul(&self.inv(g), &self.inv(h)))
    }

    /// `^g h = g h g⁻¹`.
    fn conj(&self, g: &Self::G, h: &Self::G) -> Self::G {
        self.mul(&self.mul(g, h), &self.inv(g))
    }

    fn product(&self, factors: &[Self::G]) -> Self::G {
        factors.iter().fold(self.one(), |acc, g| self.mul(&acc, g))
    }
}

/// `G(A_ℓ, A)` for an algebra with `ℓ+1` blocks: `t_{e_i−e_j}(p) = 1 + p`, `p ∈ e_i A e_j`.
#[derive(Clone, Debug)]
pub struct Linear<A: AssocAlgebra> {
    pub algebra: A,
    system: RootSystem,
    ends: Vec<(usize, usize)>,
}

impl<A: AssocAlgebra> Linear<A> {
    pub fn new(algebra: A) -> Option<Linear<A>> {
        let blocks = algebra.blocks();
        if blocks < 2 {
            return None;
        }
        let system = RootSystem::new(RootType::A, blocks - 1).ok()?;
        let ends = system
            .roots()
            .iter()
            .map(|r| {
                let a = r.0.iter().position(|&c| c == 1).unwrap_or(0);
                let b = r.0.iter().position(|&c| c == -1).unwrap_or(0);
                (a, b)
            })
            .collect();
        Some(Linear { algebra, system, ends })
    }

    /// The blocks `(i, j)` with `P_α = e_i A e_j`.
    pub fn ends(&self, root: usize) -> (usize, usize) {
        self.ends[root]
    }
}

impl<A: AssocAlgebra> Realization for Linear<A> {
    type G = A::El;
    type P = A::El;

    fn system(&self) -> &RootSystem {
        &self.system
    }
    fn describe(&self) -> String {
        format!("linear {} over {}", self.system.tag(), self.algebra.shape().tag())
    }
    fn one(&self) -> A::El {
        self.algebra.one()
    }
    fn mul(&self, g: &A::El, h: &A::El) -> A::El {
        self.algebra.mul(g, h)
    }
    fn inv(&self, g: &A::El) -> A::El {
        self.algebra.inverse(g).expect("group elements are invertible")
    }
    fn format_g(&self, g: &A::El) -> String {
        self.algebra.format(g)
    }
    fn t(&self, _root: usize, p: &A::El) -> A::El {
        self.algebra.add(&self.algebra.one(), p)
    }
    fn read(&self, root: usize, g: &A::El) -> Result<A::El, PatternMismatch> {
        let (i, j) = self.ends[root];
        let p = self.algebra.block(g, i, j);
        if self.algebra.is_param(&p, i, j) {
            Ok(p)
        } else {
            Err(PatternMismatch {
                root: self.system.format_root(root),
                detail: format!("block ({i},{j}) = {} is not a parameter", self.algebra.format(&p)),
            })
        }
    }
    fn p_zero(&self, _root: usize) -> A::El {
        self.algebra.zero()
    }
    fn p_add(&self, _root: usize, p: &A::El, q: &A::El) -> A::El {
        self.algebra.add(p, q)
    }
    fn p_neg(&self, _root: usize, p: &A::El) -> A::El {
        self.algebra.neg(p)
    }
    fn p_count(&self, root: usize) -> u64 {
        let (i, j) = self.ends[root];
        self.algebra.param_count(i, j)
    }
    fn p_nth(&self, root: usize, idx: u64) -> A::El {
        let (i, j) = self.ends[root];
        self.algebra.param(i, j, idx)
    }
    fn p_random(&self, root: usize, rng: &mut dyn RngCore) -> A::El {
        let (i, j) = self.ends[root];
        self.algebra.random_param(i, j, rng)
    }
    fn is_param(&self, root: usize, p: &A::El) -> bool {
        let (i, j) = self.ends[root];
        self.algebra.is_param(p, i, j)
    }
    fn p_format(&self, _root: usize, p: &A::El) -> String {
        self.algebra.format(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::MatrixAlgebra;
    use crate::ring::Ring;

    #[test]
    fn linear_root_elements() {
        let alg = MatrixAlgebra::full(Ring::parse("z4").unwrap(), 4);
        let lin = Linear::new(alg.clone()).unwrap();
        let sys = lin.system().clone();
        let a = sys.parse_root("e1-e2").unwrap();
        let b = sys.parse_root("e2-e3").unwrap();
        let ab = sys.parse_root("e1-e3").unwrap();
        let p = alg.scale(&alg.unit(0, 1), 3);
        let q = alg.scale(&alg.unit(1, 2), 2);
        let c = lin.comm(&lin.t(a, &p), &lin.t(b, &q));
        assert_eq!(c, lin.t(ab, &alg.mul(&p, &q)));
        assert_eq!(lin.read(ab, &c).unwrap(), alg.mul(&p, &q));
        assert_eq!(lin.p_count(a), 4);
    }
}
