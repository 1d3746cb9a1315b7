//! Dense square matrices over a finite base ring, with a block partition
//! given by a complete family of diagonal idempotents.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand_core::RngCore;

use crate::ring::{inv_mod, Elem, Ring};

/// Row-major `n × n` matrix of ring element codes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mat {
    pub n: usize,
    pub data: Vec<Elem>,
}

/// Prints element codes row by row, `[a b; c d]`.
impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.data.iter().enumerate() {
            if i > 0 {
                f.write_str(if i % self.n.max(1) == 0 { "; " } else { " " })?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

impl Mat {
    pub fn zero(n: usize) -> Mat {
        Mat { n, data: vec![0; n * n] }
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.n + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixError {
    EmptyBlock,
    BadShape,
    UnknownTag(String),
}

impl core::fmt::Display for MatrixError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MatrixError::EmptyBlock => write!(f, "block partition contains an empty block"),
            MatrixError::BadShape => write!(f, "matrix shape does not match the algebra"),
            MatrixError::UnknownTag(t) => write!(f, "unknown algebra tag {t:?} (expected e.g. m4:z4 or m4[2,2]:z4)"),
        }
    }
}

impl core::error::Error for MatrixError {}

/// `M_n(K)` together with a partition of `{0..n}` into consecutive blocks.
///
/// Block `i` corresponds to the idempotent `e_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixAlgebra {
    ring: Ring,
    n: usize,
    sizes: Vec<usize>,
    block_of: Vec<usize>,
    offsets: Vec<usize>,
}

impl MatrixAlgebra {
    pub fn new(ring: Ring, sizes: &[usize]) -> Result<MatrixAlgebra, MatrixError> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(MatrixError::EmptyBlock);
        }
        let n = sizes.iter().sum();
        let mut block_of = Vec::with_capacity(n);
        let mut offsets = Vec::with_capacity(sizes.len());
        for (b, &s) in sizes.iter().enumerate() {
            offsets.push(block_of.len());
            block_of.extend(core::iter::repeat_n(b, s));
        }
        Ok(MatrixAlgebra { ring, n, sizes: sizes.to_vec(), block_of, offsets })
    }

    /// `M_n(K)` with `n` blocks of size one.
    pub fn full(ring: Ring, n: usize) -> MatrixAlgebra {
        MatrixAlgebra::new(ring, &vec![1; n]).expect("nonempty blocks")
    }

    /// Parses the tags produced by [`MatrixAlgebra::tag`]: `m4:z4`, `m4[2,2]:z12`.
    pub fn parse_tag(tag: &str) -> Result<MatrixAlgebra, MatrixError> {
        let bad = || MatrixError::UnknownTag(String::from(tag));
        let (shape, ring) = tag.split_once(':').ok_or_else(bad)?;
        let ring = Ring::parse(ring).map_err(|_| bad())?;
        let shape = shape.strip_prefix('m').ok_or_else(bad)?;
        let (n, sizes) = match shape.split_once('[') {
            Some((n, rest)) => {
                let list = rest.strip_suffix(']').ok_or_else(bad)?;
                let sizes: Vec<usize> = list.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
                (n, Some(sizes))
            }
            None => (shape, None),
        };
        let n: usize = n.parse().map_err(|_| bad())?;
        let sizes = sizes.unwrap_or_else(|| vec![1; n]);
        if n == 0 || sizes.iter().sum::<usize>() != n {
            return Err(bad());
        }
        MatrixAlgebra::new(ring, &sizes)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> usize {
        self.sizes.len()
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn block_of(&self, pos: usize) -> usize {
        self.block_of[pos]
    }

    pub fn block_offset(&self, b: usize) -> usize {
        self.offsets[b]
    }

    pub fn tag(&self) -> String {
        if self.sizes.iter().all(|&s| s == 1) {
            format!("m{}:{}", self.n, self.ring.tag())
        } else {
            let s: Vec<String> = self.sizes.iter().map(|x| format!("{x}")).collect();
            format!("m{}[{}]:{}", self.n, s.join(","), self.ring.tag())
        }
    }

    pub fn zero(&self) -> Mat {
        Mat::zero(self.n)
    }

    pub fn one(&self) -> Mat {
        self.scalar(self.ring.one())
    }

    pub fn scalar(&self, k: Elem) -> Mat {
        let mut m = self.zero();
        for i in 0..self.n {
            m.set(i, i, k);
        }
        m
    }

    /// The idempotent of block `b`.
    pub fn idempotent(&self, b: usize) -> Mat {
        let mut m = self.zero();
        for i in 0..self.n {
            if self.block_of[i] == b {
                m.set(i, i, self.ring.one());
            }
        }
        m
    }

    pub fn unit(&self, r: usize, c: usize) -> Mat {
        let mut m = self.zero();
        m.set(r, c, self.ring.one());
        m
    }

    pub fn add(&self, a: &Mat, b: &Mat) -> Mat {
        let data = a.data.iter().zip(&b.data).map(|(&x, &y)| self.ring.add(x, y)).collect();
        Mat { n: self.n, data }
    }

    pub fn sub(&self, a: &Mat, b: &Mat) -> Mat {
        let data = a.data.iter().zip(&b.data).map(|(&x, &y)| self.ring.sub(x, y)).collect();
        Mat { n: self.n, data }
    }

    pub fn neg(&self, a: &Mat) -> Mat {
        Mat { n: self.n, data: a.data.iter().map(|&x| self.ring.neg(x)).collect() }
    }

    pub fn scale(&self, a: &Mat, k: Elem) -> Mat {
        Mat { n: self.n, data: a.data.iter().map(|&x| self.ring.mul(x, k)).collect() }
    }

    pub fn mul(&self, a: &Mat, b: &Mat) -> Mat {
        let n = self.n;
        let mut out = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = a.data[i * n + k];
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    let y = b.data[k * n + j];
                    if y != 0 {
                        out[i * n + j] = self.ring.add(out[i * n + j], self.ring.mul(x, y));
                    }
                }
            }
        }
        Mat { n, data: out }
    }

    pub fn transpose(&self, a: &Mat) -> Mat {
        let mut m = self.zero();
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(j, i, a.get(i, j));
            }
        }
        m
    }

    /// `e_i a e_j`.
    pub fn block(&self, a: &Mat, i: usize, j: usize) -> Mat {
        let mut m = self.zero();
        for r in 0..self.n {
            for c in 0..self.n {
                if self.block_of[r] == i && self.block_of[c] == j {
                    m.set(r, c, a.get(r, c));
                }
            }
        }
        m
    }

    pub fn in_block(&self, a: &Mat, i: usize, j: usize) -> bool {
        (0..self.n).all(|r| {
            (0..self.n).all(|c| a.get(r, c) == 0 || (self.block_of[r] == i && self.block_of[c] == j))
        })
    }

    fn block_cells(&self, i: usize, j: usize) -> Vec<(usize, usize)> {
        let mut cells = Vec::new();
        for r in 0..self.n {
            for c in 0..self.n {
                if self.block_of[r] == i && self.block_of[c] == j {
                    cells.push((r, c));
                }
            }
        }
        cells
    }

    /// `|e_i A e_j|`, saturating.
    pub fn block_order(&self, i: usize, j: usize) -> u64 {
        let cells = self.sizes[i] * self.sizes[j];
        self.ring.order().checked_pow(cells as u32).unwrap_or(u64::MAX)
    }

    /// The `idx`-th element of `e_i A e_j` in a fixed mixed-radix order.
    pub fn block_element(&self, i: usize, j: usize, mut idx: u64) -> Mat {
        let mut m = self.zero();
        for (r, c) in self.block_cells(i, j) {
            m.set(r, c, idx % self.ring.order());
            idx /= self.ring.order();
        }
        m
    }

    pub fn block_elements(&self, i: usize, j: usize) -> Vec<Mat> {
        (0..self.block_order(i, j)).map(|x| self.block_element(i, j, x)).collect()
    }

    pub fn random_block<R: RngCore>(&self, i: usize, j: usize, rng: &mut R) -> Mat {
        let mut m = self.zero();
        for (r, c) in self.block_cells(i, j) {
            m.set(r, c, rng.next_u64() % self.ring.order());
        }
        m
    }

    pub fn random<R: RngCore>(&self, rng: &mut R) -> Mat {
        let data = (0..self.n * self.n).map(|_| rng.next_u64() % self.ring.order()).collect();
        Mat { n: self.n, data }
    }

    /// A uniformly random invertible matrix (rejection sampling).
    pub fn random_unit<R: RngCore>(&self, rng: &mut R) -> Mat {
        loop {
            let m = self.random(rng);
            if self.inverse(&m).is_some() {
                return m;
            }
        }
    }

    /// Inverse via Gauss–Jordan over each prime-power factor, glued by CRT.
    pub fn inverse(&self, a: &Mat) -> Option<Mat> {
        let n = self.n;
        let nf = self.ring.factors().len();
        let mut per: Vec<Vec<u64>> = Vec::with_capacity(nf);
        for (fi, f) in self.ring.factors().iter().enumerate() {
            let m = f.modulus;
            let mut w: Vec<Vec<u64>> = (0..n)
                .map(|r| {
                    let mut row: Vec<u64> = (0..n).map(|c| self.ring.residue(a.get(r, c), fi)).collect();
                    row.extend((0..n).map(|c| u64::from(r == c) % m));
                    row
                })
                .collect();
            for col in 0..n {
                let piv = (col..n).find(|&r| w[r][col] % f.prime != 0)?;
                w.swap(col, piv);
                let inv = inv_mod(w[col][col], m)?;
                for x in w[col].iter_mut() {
                    *x = (*x as u128 * inv as u128 % m as u128) as u64;
                }
                let prow = w[col].clone();
                for (r, row) in w.iter_mut().enumerate() {
                    if r != col && row[col] != 0 {
                        let fct = row[col];
                        for (x, &p) in row.iter_mut().zip(&prow) {
                            let sub = (fct as u128 * p as u128 % m as u128) as u64;
                            *x = (*x + m - sub) % m;
                        }
                    }
                }
            }
            per.push(w.iter().flat_map(|row| row[n..].iter().copied()).collect());
        }
        let data = (0..n * n)
            .map(|k| {
                let r: Vec<u64> = per.iter().map(|v| v[k]).collect();
                self.ring.from_residues(&r)
            })
            .collect();
        Some(Mat { n, data })
    }

    pub fn is_invertible(&self, a: &Mat) -> bool {
        self.inverse(a).is_some()
    }

    /// Applies a ring map entrywise into another algebra of the same shape.
    pub fn map_entries(&self, a: &Mat, target: &MatrixAlgebra, f: impl Fn(Elem) -> Elem) -> Mat {
        debug_assert_eq!(target.n, self.n);
        Mat { n: self.n, data: a.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn with_ring(&self, ring: Ring) -> MatrixAlgebra {
        MatrixAlgebra { ring, ..self.clone() }
    }

    pub fn format(&self, a: &Mat) -> String {
        let rows: Vec<String> = (0..self.n)
            .map(|r| {
                let cells: Vec<String> = (0..self.n).map(|c| self.ring.format_elem(a.get(r, c))).collect();
                cells.join(" ")
            })
            .collect();
        format!("[{}]", rows.join("; "))
    }

    pub fn parse(&self, s: &str) -> Option<Mat> {
        let inner = s.trim().strip_prefix('[')?.strip_suffix(']')?;
        let mut m = self.zero();
        let rows: Vec<&str> = inner.split(';').collect();
        if rows.len() != self.n {
            return None;
        }
        for (r, row) in rows.iter().enumerate() {
            let cells: Vec<&str> = row.split_whitespace().collect();
            if cells.len() != self.n {
                return None;
            }
            for (c, cell) in cells.iter().enumerate() {
                m.set(r, c, self.ring.parse_elem(cell).ok()?);
            }
        }
        Some(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;
    use rand_core::SeedableRng;

    #[test]
    fn tags_round_trip() {
        for t in ["m4:z4", "m3[1,2]:z12", "m1:z2"] {
            assert_eq!(MatrixAlgebra::parse_tag(t).unwrap().tag(), t);
        }
        for t in ["m4", "m0:z4", "m3[1,1]:z4", "x4:z4", "m4:q"] {
            assert!(MatrixAlgebra::parse_tag(t).is_err(), "{t}");
        }
    }

    #[test]
    fn inverse_roundtrip() {
        for tag in ["z4", "z12", "z8", "z2xz2", "f2"] {
            let alg = MatrixAlgebra::full(Ring::parse(tag).unwrap(), 4);
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..50 {
                let g = alg.random_unit(&mut rng);
                let h = alg.inverse(&g).unwrap();
                assert_eq!(alg.mul(&g, &h), alg.one(), "{tag}");
                assert_eq!(alg.mul(&h, &g), alg.one(), "{tag}");
            }
        }
    }

    #[test]
    fn singular_detected() {
        let alg = MatrixAlgebra::full(Ring::parse("z12").unwrap(), 2);
        let mut m = alg.zero();
        m.set(0, 0, 2);
        m.set(1, 1, 1);
        assert!(alg.inverse(&m).is_none());
        m.set(0, 0, 5);
        assert!(alg.inverse(&m).is_some());
    }

    #[test]
    fn blocks_and_idempotents() {
        let alg = MatrixAlgebra::new(Ring::parse("z4").unwrap(), &[1, 2, 1]).unwrap();
        let sum = (0..3).fold(alg.zero(), |acc, b| alg.add(&acc, &alg.idempotent(b)));
        assert_eq!(sum, alg.one());
        assert_eq!(alg.block_order(1, 1), 256);
        let x = alg.block_element(0, 1, 5);
        assert!(alg.in_block(&x, 0, 1));
        assert_eq!(alg.block(&x, 0, 1), x);
        assert!(alg.mul(&alg.idempotent(0), &alg.idempotent(1)).is_zero());
        let s = alg.format(&x);
        assert_eq!(alg.parse(&s), Some(x));
    }
}
