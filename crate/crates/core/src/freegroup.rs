//! Words in free groups. A letter `g + 1` stands for generator `g`, `-(g + 1)` for its inverse.

use alloc::vec::Vec;

pub type Letter = i32;
pub type Word = Vec<Letter>;

pub fn gen(g: usize) -> Letter {
    g as Letter + 1
}

/// Free reduction.
pub fn reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn inverse(w: &[Letter]) -> Word {
    w.iter().rev().map(|&l| -l).collect()
}

pub fn concat(ws: &[&[Letter]]) -> Word {
    let mut out = Word::new();
    for w in ws {
        out.extend_from_slice(w);
    }
    reduce(&out)
}

/// `[a, b] = a b a⁻¹ b⁻¹`.
pub fn commutator(a: &[Letter], b: &[Letter]) -> Word {
    concat(&[a, b, &inverse(a), &inverse(b)])
}

/// `^a b = a b a⁻¹`.
pub fn conjugate(a: &[Letter], b: &[Letter]) -> Word {
    concat(&[a, b, &inverse(a)])
}

/// Both sides of the expansion of `[g_1 ⋯ g_n, h_1 ⋯ h_m]` into conjugates of `[g_i, h_j]`,
/// with `g_i` the generator `i` and `h_j` the generator `n + j`.
pub fn commutator_expansion(n: usize, m: usize) -> (Word, Word) {
    let g: Vec<Word> = (0..n).map(|i| vec_of(gen(i))).collect();
    let h: Vec<Word> = (0..m).map(|j| vec_of(gen(n + j))).collect();
    let prod = |ws: &[Word]| -> Word { reduce(&ws.concat()) };
    let lhs = commutator(&prod(&g), &prod(&h));
    let mut rhs = Word::new();
    for i in (0..n).rev() {
        let mut inner = Word::new();
        for j in 0..m {
            inner.extend(conjugate(&prod(&h[..j]), &commutator(&g[i], &h[j])));
        }
        rhs.extend(conjugate(&prod(&g[..i]), &inner));
    }
    (lhs, reduce(&rhs))
}

fn vec_of(l: Letter) -> Word {
    let mut w = Word::new();
    w.push(l);
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction() {
        assert_eq!(reduce(&[1, 2, -2, -1, 3]), [3]);
        assert_eq!(commutator(&[1], &[1]), Word::new());
        assert_eq!(conjugate(&[1], &[2]), [1, 2, -1]);
    }

    #[test]
    fn expansion_identity() {
        for n in 1..=3 {
            for m in 1..=3 {
                let (l, r) = commutator_expansion(n, m);
                assert_eq!(l, r, "n={n} m={m}");
            }
        }
    }
}
