//! Subspaces of a pattern algebra `g`, viewed as vector spaces over a scalar
//! subfield, and functionals on them.
//!
//! Everything reduces to `F_p`-linear algebra. An element of `g` is flattened
//! to its entry digits (`|P|·d` coordinates over `F_p`). A space with
//! scalar basis `b_0, …, b_{m-1}` uses the `F_p`-basis `α_s b_i`
//! (index `i·s_deg + s`), where `α_s` runs over an `F_p`-basis of the scalars.

use std::sync::Arc;

use crate::gf::{Fe, FieldTower, Theta};
use crate::linalg::{span_basis, FpMatrix, IndexCodec};
use crate::triangular::TriMatrix;

/// Which field the algebra is regarded over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Scalars {
    /// The subfield `F_q` of the tower.
    #[default]
    Fq,
    /// The prime field.
    Fp,
}

/// Positions of a pattern algebra together with its field.
#[derive(Debug)]
pub struct Ambient {
    n: usize,
    tower: Arc<FieldTower>,
    positions: Vec<(usize, usize)>,
    scalars: Scalars,
    /// `F_p`-basis of the scalar field, as top-field elements.
    alphas: Vec<Fe>,
}

impl Ambient {
    pub fn new(n: usize, tower: &Arc<FieldTower>, positions: Vec<(usize, usize)>, scalars: Scalars) -> Arc<Self> {
        let alphas = match scalars {
            Scalars::Fq => tower.fq_basis().to_vec(),
            Scalars::Fp => vec![Fe::ONE],
        };
        Arc::new(Ambient { n, tower: tower.clone(), positions, scalars, alphas })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }
    pub fn positions(&self) -> &[(usize, usize)] {
        &self.positions
    }
    pub fn scalars(&self) -> Scalars {
        self.scalars
    }
    pub fn p(&self) -> u32 {
        self.tower.p()
    }

    /// `[scalars : F_p]`.
    pub fn scalar_degree(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[Fe] {
        &self.alphas
    }

    /// Size of the scalar field.
    pub fn scalar_order(&self) -> u64 {
        (self.p() as u64).pow(self.scalar_degree() as u32)
    }

    /// `F_p`-dimension of the whole algebra.
    pub fn flat_dim(&self) -> usize {
        self.positions.len() * self.tower.degree()
    }

    pub fn flatten(&self, x: &TriMatrix) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.flat_dim());
        for &(i, j) in &self.positions {
            out.extend(self.tower.digits(x.entry(i, j)));
        }
        out
    }

    /// Matrix with the given flattened coordinates. Positions outside the
    /// pattern are zero.
    pub fn unflatten(&self, v: &[u32]) -> TriMatrix {
        let d = self.tower.degree();
        let mut x = TriMatrix::zero(self.n, &self.tower);
        for (m, &(i, j)) in self.positions.iter().enumerate() {
            x.set(i, j, self.tower.from_digits(&v[m * d..(m + 1) * d])).expect("pattern position");
        }
        x
    }

    /// Whether `x` is supported on the pattern.
    pub fn supports(&self, x: &TriMatrix) -> bool {
        crate::triangular::strict_upper_positions(self.n)
            .into_iter()
            .all(|(i, j)| x.entry(i, j).is_zero() || self.positions.contains(&(i, j)))
    }

    /// The root vectors `β e_{ij}` for `β` in the polynomial `F_p`-basis of the top field.
    pub fn root_vectors(&self) -> Vec<TriMatrix> {
        let mut out = Vec::new();
        for &(i, j) in &self.positions {
            for b in self.tower.fp_basis() {
                out.push(TriMatrix::elementary(self.n, &self.tower, i, j, b).expect("pattern position"));
            }
        }
        out
    }

    /// Trace form `T[s][t] = Tr(c·α_s α_t)` giving the character pairing on scalars.
    pub fn trace_form(&self, theta: Theta) -> FpMatrix {
        let t = &self.tower;
        let sd = self.scalar_degree();
        let c = t.from_int(theta.scale() as i64);
        let mut m = FpMatrix::zeros(t.p(), sd, sd);
        for s in 0..sd {
            for r in 0..sd {
                let prod = t.mul(c, t.mul(self.alphas[s], self.alphas[r]));
                let tr = match self.scalars {
                    Scalars::Fq => t.trace_fq(prod).expect("scalar subfield element"),
                    Scalars::Fp => prod.encoding(),
                };
                m.set(s, r, tr);
            }
        }
        m
    }

    /// Scalar with the given digits against the `α` basis.
    pub fn scalar_from_digits(&self, digits: &[u32]) -> Fe {
        let t = &self.tower;
        digits.iter().zip(&self.alphas).fold(Fe::ZERO, |acc, (&d, &a)| t.add(acc, t.mul(t.from_int(d as i64), a)))
    }

    /// Digits of a scalar against the `α` basis.
    pub fn scalar_digits(&self, a: Fe) -> Option<Vec<u32>> {
        match self.scalars {
            Scalars::Fq => self.tower.fq_digits(a).ok(),
            Scalars::Fp => (a.encoding() < self.p()).then(|| vec![a.encoding()]),
        }
    }

    pub fn scalars_iter(&self) -> Vec<Fe> {
        let sd = self.scalar_degree();
        let codec = IndexCodec::new(self.p(), sd);
        (0..codec.size()).map(|i| self.scalar_from_digits(&codec.decode(i))).collect()
    }
}

/// A subspace of `g` closed under the scalars, with explicit bases.
#[derive(Clone, Debug)]
pub struct SpaceBasis {
    ambient: Arc<Ambient>,
    basis: Vec<TriMatrix>,
    flat: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    pivot_inv: FpMatrix,
    parity: FpMatrix,
    codec: IndexCodec,
}

impl SpaceBasis {
    /// Scalar span of an `F_p`-spanning set of a scalar-closed subspace,
    /// regrouped greedily into a scalar basis.
    pub fn from_fp_span(ambient: &Arc<Ambient>, spanning: &[Vec<u32>]) -> Self {
        let p = ambient.p();
        let dim = ambient.flat_dim();
        let mut chosen: Vec<TriMatrix> = Vec::new();
        let mut span: Vec<Vec<u32>> = Vec::new();
        for v in spanning {
            let mut trial = span.clone();
            trial.push(v.clone());
            if span_basis(p, dim, &trial).len() == span.len() {
                continue;
            }
            let x = ambient.unflatten(v);
            for &a in ambient.alphas() {
                span.push(ambient.flatten(&x.scale(a).expect("nilpotent")));
            }
            span = span_basis(p, dim, &span);
            chosen.push(x);
        }
        Self::from_scalar_basis(ambient, chosen)
    }

    /// Space with the given scalar basis (assumed independent; checked).
    pub fn from_scalar_basis(ambient: &Arc<Ambient>, basis: Vec<TriMatrix>) -> Self {
        let p = ambient.p();
        let dim = ambient.flat_dim();
        let mut flat = Vec::new();
        for b in &basis {
            for &a in ambient.alphas() {
                flat.push(ambient.flatten(&b.scale(a).expect("nilpotent")));
            }
        }
        let d = flat.len();
        let (pivots, pivot_inv, parity) = if d == 0 {
            (Vec::new(), FpMatrix::zeros(p, 0, 0), FpMatrix::identity(p, dim))
        } else {
            let bm = FpMatrix::from_rows(p, dim, &flat);
            let (_, pivots) = bm.rref();
            assert_eq!(pivots.len(), d, "scalar basis is not independent");
            let mut sub = FpMatrix::zeros(p, d, d);
            for (r, row) in flat.iter().enumerate() {
                for (c, &pc) in pivots.iter().enumerate() {
                    sub.set(r, c, row[pc]);
                }
            }
            let inv = sub.inverse().expect("pivot block is invertible");
            let ker = bm.kernel();
            let parity = if ker.is_empty() { FpMatrix::zeros(p, 0, dim) } else { FpMatrix::from_rows(p, dim, &ker) };
            (pivots, inv, parity)
        };
        SpaceBasis { ambient: ambient.clone(), basis, flat, pivots, pivot_inv, parity, codec: IndexCodec::new(p, d) }
    }

    /// The full pattern algebra with basis `α e_{ij}`-style regrouping of root vectors.
    pub fn whole(ambient: &Arc<Ambient>) -> Self {
        let spanning: Vec<Vec<u32>> = ambient.root_vectors().iter().map(|x| ambient.flatten(x)).collect();
        Self::from_fp_span(ambient, &spanning)
    }

    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ambient
    }

    /// Scalar basis `b_i`.
    pub fn basis(&self) -> &[TriMatrix] {
        &self.basis
    }

    /// Dimension over the scalars.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Dimension over `F_p`.
    pub fn fp_dim(&self) -> usize {
        self.flat.len()
    }

    pub fn fp_basis_flat(&self) -> &[Vec<u32>] {
        &self.flat
    }

    pub fn codec(&self) -> &IndexCodec {
        &self.codec
    }

    /// Number of elements.
    pub fn size(&self) -> usize {
        self.codec.size()
    }

    pub fn contains_flat(&self, v: &[u32]) -> bool {
        self.parity.mul_vec(v).iter().all(|&x| x == 0)
    }

    pub fn contains(&self, x: &TriMatrix) -> bool {
        !x.is_unipotent() && self.ambient.supports(x) && self.contains_flat(&self.ambient.flatten(x))
    }

    /// `F_p`-coordinates of a flattened member (not checked).
    pub fn coords_flat_unchecked(&self, v: &[u32]) -> Vec<u32> {
        let picked: Vec<u32> = self.pivots.iter().map(|&c| v[c]).collect();
        self.pivot_inv.vec_mul(&picked)
    }

    pub fn coords(&self, x: &TriMatrix) -> Option<Vec<u32>> {
        if !self.contains(x) {
            return None;
        }
        Some(self.coords_flat_unchecked(&self.ambient.flatten(x)))
    }

    pub fn index_of(&self, x: &TriMatrix) -> Option<usize> {
        self.coords(x).map(|c| self.codec.encode(&c))
    }

    pub fn from_coords(&self, c: &[u32]) -> TriMatrix {
        let p = self.ambient.p() as u64;
        let mut acc = vec![0u64; self.ambient.flat_dim()];
        for (&ci, row) in c.iter().zip(&self.flat) {
            if ci != 0 {
                for (a, &r) in acc.iter_mut().zip(row) {
                    *a += ci as u64 * r as u64;
                }
            }
        }
        let v: Vec<u32> = acc.into_iter().map(|a| (a % p) as u32).collect();
        self.ambient.unflatten(&v)
    }

    pub fn element(&self, idx: usize) -> TriMatrix {
        self.from_coords(&self.codec.decode(idx))
    }

    /// Scalar coordinates of a member, one scalar per basis vector.
    pub fn scalar_coords(&self, x: &TriMatrix) -> Option<Vec<Fe>> {
        let c = self.coords(x)?;
        let sd = self.ambient.scalar_degree();
        Some(c.chunks(sd).map(|ch| self.ambient.scalar_from_digits(ch)).collect())
    }

    /// Matrix of an `F_p`-linear map of this space into itself, given on `g`.
    /// Returns `None` if some image leaves the space.
    pub fn matrix_of(&self, f: impl Fn(&TriMatrix) -> TriMatrix) -> Option<FpMatrix> {
        let d = self.fp_dim();
        let mut cols = Vec::with_capacity(d);
        for row in &self.flat {
            let img = self.ambient.flatten(&f(&self.ambient.unflatten(row)));
            if !self.contains_flat(&img) {
                return None;
            }
            cols.push(self.coords_flat_unchecked(&img));
        }
        Some(FpMatrix::from_columns(self.ambient.p(), d, &cols))
    }

    /// Subspace cut out by `F_p`-linear equations on flattened coordinates.
    pub fn solve_subspace(&self, equations: &[Vec<u32>]) -> SpaceBasis {
        // Restrict each equation to this space's coordinates, then take the kernel.
        let p = self.ambient.p();
        let d = self.fp_dim();
        if d == 0 {
            return self.clone();
        }
        let rows: Vec<Vec<u32>> = equations
            .iter()
            .map(|eq| {
                self.flat
                    .iter()
                    .map(|b| (b.iter().zip(eq).map(|(&x, &y)| x as u64 * y as u64).sum::<u64>() % p as u64) as u32)
                    .collect()
            })
            .collect();
        let ker = if rows.is_empty() {
            (0..d).map(|i| (0..d).map(|j| (i == j) as u32).collect()).collect()
        } else {
            FpMatrix::from_rows(p, d, &rows).kernel()
        };
        let spanning: Vec<Vec<u32>> = ker.iter().map(|c| self.ambient.flatten(&self.from_coords(c))).collect();
        SpaceBasis::from_fp_span(&self.ambient, &spanning)
    }

    pub fn intersect(&self, other: &SpaceBasis) -> SpaceBasis {
        let eqs = other.parity.row_vecs();
        self.solve_subspace(&eqs)
    }

    /// Same subspace as sets.
    pub fn same_subspace(&self, other: &SpaceBasis) -> bool {
        self.fp_dim() == other.fp_dim() && self.flat.iter().all(|v| other.contains_flat(v))
    }
}

/// A scalar-linear functional on a [`SpaceBasis`], stored by its values on the scalar basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Functional {
    values: Vec<Fe>,
}

impl Functional {
    pub fn new(values: Vec<Fe>) -> Self {
        Functional { values }
    }

    pub fn zero(dim: usize) -> Self {
        Functional { values: vec![Fe::ZERO; dim] }
    }

    pub fn values(&self) -> &[Fe] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Digits against the `α` basis, `dim · s_deg` entries.
    pub fn digits(&self, ambient: &Ambient) -> Vec<u32> {
        self.values.iter().flat_map(|&v| ambient.scalar_digits(v).expect("scalar value")).collect()
    }

    pub fn from_digits(ambient: &Ambient, digits: &[u32]) -> Self {
        let sd = ambient.scalar_degree();
        Functional { values: digits.chunks(sd).map(|c| ambient.scalar_from_digits(c)).collect() }
    }

    /// `λ(x)` for `x` in the space.
    pub fn eval(&self, space: &SpaceBasis, x: &TriMatrix) -> Option<Fe> {
        let c = space.scalar_coords(x)?;
        let t = space.ambient().tower();
        Some(c.iter().zip(&self.values).fold(Fe::ZERO, |acc, (&a, &b)| t.add(acc, t.mul(a, b))))
    }

    pub fn encodings(&self) -> Vec<u32> {
        self.values.iter().map(|v| v.encoding()).collect()
    }
}

/// Block-diagonal `I ⊗ T` turning functional digits into an `F_p`-covector.
pub fn pairing_matrix(space: &SpaceBasis, theta: Theta) -> FpMatrix {
    let amb = space.ambient();
    let t = amb.trace_form(theta);
    let sd = amb.scalar_degree();
    let d = space.fp_dim();
    let mut m = FpMatrix::zeros(amb.p(), d, d);
    for blk in 0..space.dim() {
        for s in 0..sd {
            for r in 0..sd {
                m.set(blk * sd + s, blk * sd + r, t.get(s, r));
            }
        }
    }
    m
}
