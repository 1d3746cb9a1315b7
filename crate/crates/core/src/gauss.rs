//! Gauss decomposition of invertible matrices over a local ring into root
//! elements and elements of the subgroups `D_α`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::matrix::{Mat, MatrixAlgebra};
use crate::realize::{Linear, Realization};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GaussError {
    NotInvertible,
    NotLocal(String),
    /// Only full matrix algebras with one-dimensional blocks are decomposed.
    Blocks,
}

impl fmt::Display for GaussError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaussError::NotInvertible => write!(f, "matrix is not invertible"),
            GaussError::NotLocal(r) => write!(f, "base ring {r} is not local"),
            GaussError::Blocks => write!(f, "decomposition needs one-dimensional blocks"),
        }
    }
}

impl core::error::Error for GaussError {}

/// A factor of a Gauss decomposition, tagged with its subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GaussFactor {
    /// `t_α(p)`.
    Root { root: usize, p: Mat },
    /// An element of `D_α`: block diagonal after merging the two blocks of `α`.
    D { root: usize, g: Mat },
}

impl GaussFactor {
    pub fn matrix(&self, lin: &Linear<MatrixAlgebra>) -> Mat {
        match self {
            GaussFactor::Root { root, p } => lin.t(*root, p),
            GaussFactor::D { g, .. } => g.clone(),
        }
    }

    pub fn describe(&self, lin: &Linear<MatrixAlgebra>) -> String {
        match self {
            GaussFactor::Root { root, p } => {
                format!("t[{}]({})", lin.system().format_root(*root), lin.algebra.format(p))
            }
            GaussFactor::D { root, g } => {
                format!("D[{}]({})", lin.system().format_root(*root), lin.algebra.format(g))
            }
        }
    }
}

/// Whether `g` lies in `D_α`: zero off the diagonal except at the two positions of `α`.
pub fn in_d_alpha(lin: &Linear<MatrixAlgebra>, root: usize, g: &Mat) -> bool {
    let (a, b) = lin.ends(root);
    let n = lin.algebra.size();
    let off = (0..n).all(|r| (0..n).all(|c| r == c || (r == a && c == b) || (r == b && c == a) || g.get(r, c) == 0));
    off && lin.algebra.is_invertible(g)
}

fn root_of(lin: &Linear<MatrixAlgebra>, a: usize, b: usize) -> usize {
    (0..lin.system().len()).find(|&r| lin.ends(r) == (a, b)).expect("every ordered pair of blocks is a root")
}

/// Factors `g` as root elements and `D_α` elements whose product is exactly `g`.
///
/// Row reduction with unit pivots: a row swap is a `D_α` factor, each
/// elimination step a root element, and the remaining diagonal matrix is a
/// `D_α` factor for the first simple root. The identity has no factors.
pub fn gauss_decompose(lin: &Linear<MatrixAlgebra>, g: &Mat) -> Result<Vec<GaussFactor>, GaussError> {
    let alg = &lin.algebra;
    let ring = alg.ring();
    if ring.factors().len() != 1 {
        return Err(GaussError::NotLocal(ring.tag()));
    }
    let n = alg.size();
    if alg.blocks() != n {
        return Err(GaussError::Blocks);
    }
    if !alg.is_invertible(g) {
        return Err(GaussError::NotInvertible);
    }
    let mut h = g.clone();
    let mut ops = Vec::new();
    for c in 0..n {
        let r = (c..n).find(|&r| ring.is_unit(h.get(r, c))).ok_or(GaussError::NotInvertible)?;
        if r != c {
            let mut s = alg.one();
            s.set(c, c, 0);
            s.set(r, r, 0);
            s.set(c, r, 1);
            s.set(r, c, 1);
            h = alg.mul(&s, &h);
            ops.push(GaussFactor::D { root: root_of(lin, c, r), g: s });
        }
        let pinv = ring.inv(h.get(c, c)).expect("unit pivot");
        for i in 0..n {
            let x = h.get(i, c);
            if i == c || x == 0 {
                continue;
            }
            let mut p = alg.zero();
            p.set(i, c, ring.neg(ring.mul(x, pinv)));
            let root = root_of(lin, i, c);
            h = alg.mul(&lin.t(root, &p), &h);
            // the inverse of t(p) is t(−p)
            ops.push(GaussFactor::Root { root, p: alg.neg(&p) });
        }
    }
    if h != alg.one() {
        ops.push(GaussFactor::D { root: 0, g: h });
    }
    Ok(ops)
}

pub fn multiply_factors(lin: &Linear<MatrixAlgebra>, fs: &[GaussFactor]) -> Mat {
    fs.iter().fold(lin.one(), |acc, f| lin.mul(&acc, &f.matrix(lin)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::instance_rng;
    use crate::ring::Ring;

    fn lin(tag: &str) -> Linear<MatrixAlgebra> {
        Linear::new(MatrixAlgebra::full(Ring::parse(tag).unwrap(), 4)).unwrap()
    }

    #[test]
    fn simple_elements() {
        let l = lin("z8");
        assert!(gauss_decompose(&l, &l.one()).unwrap().is_empty());
        let a = l.system().parse_root("e1-e2").unwrap();
        let p = l.algebra.scale(&l.algebra.unit(0, 1), 3);
        let fs = gauss_decompose(&l, &l.t(a, &p)).unwrap();
        assert_eq!(fs, [GaussFactor::Root { root: a, p }]);
        assert_eq!(gauss_decompose(&l, &l.algebra.zero()), Err(GaussError::NotInvertible));
        assert!(matches!(gauss_decompose(&lin("z12"), &lin("z12").one()), Err(GaussError::NotLocal(_))));
    }

    #[test]
    fn random_elements_remultiply() {
        let l = lin("z8");
        for i in 0..200 {
            let mut rng = instance_rng(1, "gauss", i);
            let g = l.algebra.random_unit(&mut rng);
            let fs = gauss_decompose(&l, &g).unwrap();
            assert_eq!(multiply_factors(&l, &fs), g);
            for f in &fs {
                if let GaussFactor::D { root, g } = f {
                    assert!(in_d_alpha(&l, *root, g));
                }
            }
        }
    }
}
