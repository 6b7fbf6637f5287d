//! Packed bit vectors over F₂ and Gaussian elimination.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, idx: I) -> Self {
        let mut v = BitVec::zeros(len);
        for i in idx {
            v.toggle(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Parity of the overlap, `⟨a, b⟩ mod 2`.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        let ones: u32 = self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum();
        ones & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + b)
            })
        })
    }

    fn leading(&self) -> Option<usize> {
        self.ones().next()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "BitVec[{s}]")
    }
}

/// Incremental row-echelon basis. Rows are kept reduced against each other's
/// pivots so membership tests are a single sweep.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    rows: Vec<(usize, BitVec)>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reduce `v` against the basis; returns the residue.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut r = v.clone();
        for (pivot, row) in &self.rows {
            if r.get(*pivot) {
                r.xor_assign(row);
            }
        }
        r
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        let r = self.reduce(v);
        let Some(pivot) = r.leading() else {
            return false;
        };
        for (_, row) in self.rows.iter_mut() {
            if row.get(pivot) {
                row.xor_assign(&r);
            }
        }
        self.rows.push((pivot, r));
        true
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &BitVec> {
        self.rows.iter().map(|(_, r)| r)
    }
}

pub fn rank<'a, I: IntoIterator<Item = &'a BitVec>>(rows: I) -> usize {
    let mut basis = EchelonBasis::new();
    for r in rows {
        basis.insert(r);
    }
    basis.rank()
}

/// Basis of `{x : ⟨row, x⟩ = 0 for every row}` over `ncols` coordinates.
pub fn null_space(rows: &[BitVec], ncols: usize) -> Vec<BitVec> {
    let mut basis = EchelonBasis::new();
    for r in rows {
        assert_eq!(r.len(), ncols, "row length mismatch");
        basis.insert(r);
    }
    let pivots: Vec<usize> = basis.rows.iter().map(|(p, _)| *p).collect();
    let is_pivot = {
        let mut m = vec![false; ncols];
        for &p in &pivots {
            m[p] = true;
        }
        m
    };
    let mut out = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut x = BitVec::zeros(ncols);
        x.set(free, true);
        for (p, row) in &basis.rows {
            if row.get(free) {
                x.set(*p, true);
            }
        }
        out.push(x);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_and_ones() {
        let a = BitVec::from_indices(130, [0, 64, 129]);
        let b = BitVec::from_indices(130, [64, 129, 5]);
        assert!(!a.dot(&b));
        assert_eq!(a.ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(a.xor(&b).ones().collect::<Vec<_>>(), vec![0, 5]);
    }

    #[test]
    fn rank_of_dependent_rows() {
        let a = BitVec::from_indices(10, [0, 1]);
        let b = BitVec::from_indices(10, [1, 2]);
        let c = a.xor(&b);
        assert_eq!(rank([&a, &b, &c]), 2);
        let mut basis = EchelonBasis::new();
        basis.insert(&a);
        basis.insert(&b);
        assert!(basis.contains(&c));
        assert!(!basis.contains(&BitVec::from_indices(10, [3])));
    }

    #[test]
    fn null_space_is_orthogonal_and_full() {
        let rows = vec![
            BitVec::from_indices(6, [0, 1, 2]),
            BitVec::from_indices(6, [2, 3]),
            BitVec::from_indices(6, [0, 1, 3]),
        ];
        let ns = null_space(&rows, 6);
        assert_eq!(ns.len(), 6 - rank(&rows));
        for x in &ns {
            for r in &rows {
                assert!(!r.dot(x));
            }
        }
        assert_eq!(rank(&ns), ns.len());
    }
}
