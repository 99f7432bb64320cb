//! Dense linear algebra over a prime field `F_p`, plus the index codec that
//! identifies `F_p^D` with `0..p^D`.
//!
//! The codec is big-endian in the coordinates: index `Σ x_j p^{D-1-j}`, so
//! numeric order on indices is lexicographic order on coordinate vectors.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u32, cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend(r.iter().map(|&x| x % p));
        }
        FpMatrix { p, rows: rows.len(), cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(p: u32, rows: usize, cols: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x % p);
            }
        }
        m
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows);
        let p = self.p as u64;
        let mut out = Self::zeros(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j) as u64;
                    out.set(i, j, ((cur + a * other.get(k, j) as u64) % p) as u32);
                }
            }
        }
        out
    }

    /// `M v`.
    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        debug_assert_eq!(v.len(), self.cols);
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| {
                let s: u64 = self.row(i).iter().zip(v).map(|(&a, &b)| a as u64 * b as u64).sum();
                (s % p) as u32
            })
            .collect()
    }

    /// `v^T M`.
    pub fn vec_mul(&self, v: &[u32]) -> Vec<u32> {
        debug_assert_eq!(v.len(), self.rows);
        let p = self.p as u64;
        let mut acc = vec![0u64; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            for (a, &m) in acc.iter_mut().zip(self.row(i)) {
                *a += vi as u64 * m as u64;
            }
        }
        acc.into_iter().map(|a| (a % p) as u32).collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let p = self.p as u64;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, c) != 0) else { continue };
            if piv != r {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, r * m.cols + j);
                }
            }
            let inv = inv_mod(m.get(r, c), self.p) as u64;
            for j in 0..m.cols {
                m.set(r, j, (m.get(r, j) as u64 * inv % p) as u32);
            }
            for i in 0..m.rows {
                let f = m.get(i, c) as u64;
                if i != r && f != 0 {
                    for j in 0..m.cols {
                        let v = (m.get(i, j) as u64 + (p - f) * m.get(r, j) as u64) % p;
                        m.set(i, j, v as u32);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : M v = 0}`, one vector per free column, in column order.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let (r, pivots) = self.rref();
        let p = self.p;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fcol| {
                let mut v = vec![0u32; self.cols];
                v[fcol] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - r.get(row, fcol)) % p;
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let mut aug = Self::zeros(self.p, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(self.p, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Some(inv)
    }
}

pub fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut r, mut b, mut e) = (1u64, a as u64 % p as u64, (p - 2) as u64);
    assert!(b != 0, "zero has no inverse");
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Basis (as rows in echelon form) of the span of the given vectors.
pub fn span_basis(p: u32, dim: usize, vecs: &[Vec<u32>]) -> Vec<Vec<u32>> {
    if vecs.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = FpMatrix::from_rows(p, dim, vecs).rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Bijection `F_p^D ↔ 0..p^D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexCodec {
    p: u32,
    dim: usize,
    size: usize,
}

impl IndexCodec {
    pub fn new(p: u32, dim: usize) -> Self {
        let size = (p as u128).pow(dim as u32);
        assert!(size <= usize::MAX as u128, "space too large to index");
        IndexCodec { p, dim, size: size as usize }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn encode(&self, v: &[u32]) -> usize {
        v.iter().fold(0usize, |acc, &x| acc * self.p as usize + x as usize)
    }

    #[inline]
    pub fn decode_into(&self, mut idx: usize, out: &mut [u32]) {
        for slot in out.iter_mut().rev() {
            *slot = (idx % self.p as usize) as u32;
            idx /= self.p as usize;
        }
    }

    pub fn decode(&self, idx: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim];
        self.decode_into(idx, &mut v);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kernel_and_rank() {
        let m = FpMatrix::from_rows(3, 3, &[vec![1, 1, 0], vec![0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|&x| x == 0));
        assert_eq!(k[0], vec![1, 2, 1]);
    }

    #[test]
    fn empty_matrix_inverts() {
        assert_eq!(FpMatrix::zeros(3, 0, 0).inverse(), Some(FpMatrix::zeros(3, 0, 0)));
    }

    #[test]
    fn inverse_of_singular_is_none() {
        let m = FpMatrix::from_rows(5, 2, &[vec![1, 2], vec![2, 4]]);
        assert!(m.inverse().is_none());
    }

    #[test]
    fn codec_is_lexicographic() {
        let c = IndexCodec::new(3, 3);
        assert_eq!(c.size(), 27);
        assert_eq!(c.encode(&[0, 0, 1]), 1);
        assert_eq!(c.encode(&[1, 0, 0]), 9);
        let mut prev = c.decode(0);
        for i in 1..27 {
            let cur = c.decode(i);
            assert!(prev < cur);
            assert_eq!(c.encode(&cur), i);
            prev = cur;
        }
    }

    fn square(p: u32, n: usize) -> impl Strategy<Value = FpMatrix> {
        prop::collection::vec(0..p, n * n).prop_map(move |d| FpMatrix { p, rows: n, cols: n, data: d })
    }

    proptest! {
        #[test]
        fn inverse_round_trips(m in square(5, 4)) {
            if let Some(inv) = m.inverse() {
                prop_assert_eq!(m.mul(&inv), FpMatrix::identity(5, 4));
                prop_assert_eq!(inv.mul(&m), FpMatrix::identity(5, 4));
            } else {
                prop_assert!(m.rank() < 4);
            }
        }

        #[test]
        fn rank_nullity(m in prop::collection::vec(0u32..3, 15)) {
            let m = FpMatrix { p: 3, rows: 3, cols: 5, data: m };
            let k = m.kernel();
            prop_assert_eq!(k.len() + m.rank(), 5);
            for v in &k {
                prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
            }
        }

        #[test]
        fn vec_mul_is_transpose_mul_vec(m in square(7, 3), v in prop::collection::vec(0u32..7, 3)) {
            prop_assert_eq!(m.vec_mul(&v), m.transpose().mul_vec(&v));
        }
    }
}
