//! Orbits of linear actions on `F_p^D`, indexed by the big-endian codec.
//!
//! Every action used here is linear in the acted-on vector, so a group is
//! handled through the matrices of a generating set. Orbits are the connected
//! components of the generator graph, merged by union-find with the smaller
//! index as root, so each root is the lexicographically least member.

use std::collections::{HashSet, VecDeque};

use crate::gf::Theta;
use crate::involution_group::GroupContext;
use crate::linalg::{FpMatrix, IndexCodec};
use crate::par::Exec;
use crate::space::{pairing_matrix, SpaceBasis};
use crate::triangular::TriMatrix;

const CHUNK: usize = 1 << 12;

/// Images `idx ↦ encode(M · decode(idx))` for every index of the codec.
pub fn image_table(codec: &IndexCodec, m: &FpMatrix, exec: Exec) -> Vec<u32> {
    let d = codec.dim();
    let p = codec.p();
    let cols: Vec<Vec<u32>> = (0..d).map(|j| m.column(j)).collect();
    let mut out = vec![0u32; codec.size()];
    exec.for_chunks(&mut out, CHUNK, |start, chunk| {
        let mut v = codec.decode(start);
        let mut w = m.mul_vec(&v);
        for slot in chunk.iter_mut() {
            *slot = codec.encode(&w) as u32;
            // odometer step; a wrapped digit has added its column p times
            let mut j = d;
            while j > 0 {
                j -= 1;
                for (a, &c) in w.iter_mut().zip(&cols[j]) {
                    *a = (*a + c) % p;
                }
                v[j] += 1;
                if v[j] < p {
                    break;
                }
                v[j] = 0;
            }
        }
    });
    out
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let up = parent[parent[x as usize] as usize];
        parent[x as usize] = up;
        x = up;
    }
    x
}

/// Orbit decomposition of `F_p^D` under the group generated by some matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitIndex {
    codec: IndexCodec,
    orbit_of: Vec<u32>,
    reps: Vec<usize>,
    sizes: Vec<usize>,
}

impl OrbitIndex {
    pub fn build(p: u32, dim: usize, gens: &[FpMatrix], exec: Exec) -> Self {
        let codec = IndexCodec::new(p, dim);
        assert!(codec.size() <= u32::MAX as usize);
        let mut parent: Vec<u32> = (0..codec.size() as u32).collect();
        for m in gens {
            let img = image_table(&codec, m, exec);
            for (i, &j) in img.iter().enumerate() {
                let (a, b) = (find(&mut parent, i as u32), find(&mut parent, j));
                if a < b {
                    parent[b as usize] = a;
                } else if b < a {
                    parent[a as usize] = b;
                }
            }
        }
        Self::from_parent(codec, parent)
    }

    fn from_parent(codec: IndexCodec, mut parent: Vec<u32>) -> Self {
        let mut orbit_of = vec![u32::MAX; codec.size()];
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        for i in 0..codec.size() {
            let r = find(&mut parent, i as u32) as usize;
            let id = if r == i {
                reps.push(i);
                sizes.push(0);
                reps.len() as u32 - 1
            } else {
                orbit_of[r]
            };
            orbit_of[i] = id;
            sizes[id as usize] += 1;
        }
        OrbitIndex { codec, orbit_of, reps, sizes }
    }

    /// Orbits given by an explicit labelling; ids are renumbered in first-seen order.
    pub fn from_labels(p: u32, dim: usize, labels: &[usize]) -> Self {
        let codec = IndexCodec::new(p, dim);
        assert_eq!(labels.len(), codec.size());
        let mut first = std::collections::HashMap::new();
        let mut parent = vec![0u32; labels.len()];
        for (i, l) in labels.iter().enumerate() {
            parent[i] = *first.entry(*l).or_insert(i as u32);
        }
        Self::from_parent(codec, parent)
    }

    pub fn codec(&self) -> &IndexCodec {
        &self.codec
    }

    /// Number of orbits.
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Least member of each orbit, ascending.
    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn orbit_of(&self, idx: usize) -> usize {
        self.orbit_of[idx] as usize
    }

    pub fn labels(&self) -> &[u32] {
        &self.orbit_of
    }

    /// Members of every orbit, each list ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for (i, &o) in self.orbit_of.iter().enumerate() {
            out[o as usize].push(i);
        }
        out
    }

    /// Size of the finer orbit through each representative of `self`.
    pub fn sub_orbit_sizes(&self, finer: &OrbitIndex) -> Vec<usize> {
        self.reps.iter().map(|&r| finer.sizes[finer.orbit_of(r)]).collect()
    }
}

/// Orbit of one vector by breadth-first search.
pub fn orbit_bfs(codec: &IndexCodec, gens: &[FpMatrix], start: usize) -> Vec<usize> {
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(i) = queue.pop_front() {
        let v = codec.decode(i);
        for m in gens {
            let j = codec.encode(&m.mul_vec(&v));
            if seen.insert(j) {
                queue.push_back(j);
            }
        }
    }
    let mut out: Vec<usize> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

/// Which action of the pattern group is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    /// `g·x = g x g†` on `u`.
    Dagger,
    /// `x ↦ g x` on `g`.
    Left,
    /// `x ↦ g x h^{-1}` on `g`.
    TwoSided,
}

/// Matrices, on coordinates of `space`, of the action of each element (both sides for [`Action::TwoSided`]).
pub fn action_matrices(ctx: &GroupContext, space: &SpaceBasis, action: Action, elems: &[TriMatrix]) -> Vec<FpMatrix> {
    let mut out = Vec::new();
    for g in elems {
        match action {
            Action::Dagger => out.push(space.matrix_of(|x| ctx.act(g, x)).expect("G preserves u")),
            Action::Left => out.push(space.matrix_of(|x| g.mul(x).unwrap()).expect("G preserves g")),
            Action::TwoSided => {
                out.push(space.matrix_of(|x| g.mul(x).unwrap()).expect("G preserves g"));
                out.push(space.matrix_of(|x| x.mul(g).unwrap()).expect("G preserves g"));
            }
        }
    }
    out
}

/// Matrix of `λ ↦ λ ∘ A^{-1}` on functional digits, given the matrix `M` of `A`:
/// `P^{-1} (M^{-1})^T P` with `P` the trace pairing.
pub fn dual_matrix(pairing: &FpMatrix, pairing_inv: &FpMatrix, m: &FpMatrix) -> FpMatrix {
    let minv = m.inverse().expect("group elements act invertibly");
    pairing_inv.mul(&minv.transpose()).mul(pairing)
}

pub fn dual_matrices(space: &SpaceBasis, primal: &[FpMatrix]) -> Vec<FpMatrix> {
    let pm = pairing_matrix(space, Theta::Standard);
    let pinv = pm.inverse().expect("trace pairing is nondegenerate");
    primal.iter().map(|m| dual_matrix(&pm, &pinv, m)).collect()
}

/// Orbits of `G` on `u` (dagger action), or two-sided orbits on `g` when there is no involution.
pub fn primal_orbits(ctx: &GroupContext, exec: Exec) -> OrbitIndex {
    let space = ctx.u_space();
    let gens = action_matrices(ctx, space, default_action(ctx), &ctx.g_generators());
    OrbitIndex::build(space.ambient().p(), space.fp_dim(), &gens, exec)
}

/// Orbits on the dual space, plus the finer orbit sizes used for `n_λ`:
/// `|H·λ|` with an involution, `|Gλ|` (left only) without.
pub fn dual_orbits(ctx: &GroupContext, exec: Exec) -> (OrbitIndex, Vec<usize>) {
    let space = ctx.u_space();
    let p = space.ambient().p();
    let gens = dual_matrices(space, &action_matrices(ctx, space, default_action(ctx), &ctx.g_generators()));
    let full = OrbitIndex::build(p, space.fp_dim(), &gens, exec);
    let finer_gens = match ctx.involution() {
        Some(_) => dual_matrices(space, &action_matrices(ctx, space, Action::Dagger, &ctx.h_generators())),
        None => dual_matrices(space, &action_matrices(ctx, space, Action::Left, &ctx.g_generators())),
    };
    let finer = OrbitIndex::build(p, space.fp_dim(), &finer_gens, exec);
    let sub = full.sub_orbit_sizes(&finer);
    (full, sub)
}

pub fn default_action(ctx: &GroupContext) -> Action {
    if ctx.involution().is_some() {
        Action::Dagger
    } else {
        Action::TwoSided
    }
}

/// Orbits by sweeping every group element over every vector; an oracle for [`OrbitIndex::build`].
pub fn sweep_orbits(ctx: &GroupContext, group: &[TriMatrix]) -> OrbitIndex {
    let space = ctx.u_space();
    let codec = space.codec().clone();
    let mut label = vec![usize::MAX; codec.size()];
    let mats: Vec<FpMatrix> = match default_action(ctx) {
        Action::TwoSided => {
            // G×G: left times right
            let left = action_matrices(ctx, space, Action::Left, group);
            let right: Vec<FpMatrix> = group.iter().map(|g| space.matrix_of(|x| x.mul(g).unwrap()).unwrap()).collect();
            left.iter().flat_map(|l| right.iter().map(move |r| l.mul(r))).collect()
        }
        a => action_matrices(ctx, space, a, group),
    };
    for i in 0..codec.size() {
        if label[i] != usize::MAX {
            continue;
        }
        let v = codec.decode(i);
        for m in &mats {
            label[codec.encode(&m.mul_vec(&v))] = i;
        }
    }
    OrbitIndex::from_labels(codec.p(), codec.dim(), &label)
}

/// For every `x ∈ u` and `g ∈ G` with `g x ∈ u`: `g x ∈ G·x`. Returns the first counterexample.
pub fn left_multiplication_check(
    ctx: &GroupContext,
    orbits: &OrbitIndex,
    group: &[TriMatrix],
) -> Option<(TriMatrix, TriMatrix)> {
    let space = ctx.u_space();
    for idx in 0..space.size() {
        let x = space.element(idx);
        for g in group {
            let y = g.mul(&x).unwrap();
            if let Some(j) = space.index_of(&y) {
                if orbits.orbit_of(j) != orbits.orbit_of(idx) {
                    return Some((x, g.clone()));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Fe;
    use crate::involution_group::{Family, GroupSpec};
    use crate::triangular::MirrorPoset;
    use proptest::prelude::*;

    fn ctx(f: Family, n: usize, p: u32, e: u32, k: u32) -> GroupContext {
        GroupContext::new(&GroupSpec::new(f, n, p, e, k)).unwrap()
    }

    #[test]
    fn zero_is_fixed_and_sizes_sum() {
        let c = ctx(Family::UU, 3, 3, 1, 2);
        let o = primal_orbits(&c, Exec::Parallel);
        assert_eq!(o.sizes()[o.orbit_of(0)], 1);
        assert_eq!(o.sizes().iter().sum::<usize>(), 27);
        assert_eq!(o.len(), 11);
        let (d, h) = dual_orbits(&c, Exec::Parallel);
        assert_eq!(d.len(), 11);
        // H = G for n = 3
        assert_eq!(h, d.sizes());
    }

    #[test]
    fn ut2_has_singleton_orbits() {
        let c = ctx(Family::UT, 2, 3, 1, 1);
        let o = primal_orbits(&c, Exec::Sequential);
        assert_eq!(o.len(), 3);
        assert_eq!(o.sizes(), &[1, 1, 1]);
    }

    #[test]
    fn ut3_two_sided_counts() {
        // labeled set partitions of [3] over F_3: 1 + 2·3 + 2·2 (1⌢2,2⌢3)
        let c = ctx(Family::UT, 3, 3, 1, 1);
        assert_eq!(primal_orbits(&c, Exec::Parallel).len(), 11);
        assert_eq!(dual_orbits(&c, Exec::Parallel).0.len(), 11);
    }

    #[test]
    fn bfs_and_sweep_agree_with_union_find() {
        for c in [
            ctx(Family::UU, 3, 3, 1, 2),
            ctx(Family::UO, 4, 3, 1, 1),
            ctx(Family::USp, 4, 3, 1, 1),
            ctx(Family::UT, 3, 3, 1, 1),
        ] {
            let o = primal_orbits(&c, Exec::Parallel);
            let group = c.enumerate_g().unwrap();
            assert_eq!(sweep_orbits(&c, &group), o, "{}", c.spec().label());
            let gens = action_matrices(&c, c.u_space(), default_action(&c), &c.g_generators());
            for (id, m) in o.members().iter().enumerate() {
                assert_eq!(&orbit_bfs(o.codec(), &gens, o.reps()[id]), m);
                assert_eq!(group.len() % m.len(), 0);
            }
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let c = ctx(Family::UU, 4, 3, 1, 2);
        assert_eq!(primal_orbits(&c, Exec::Sequential), primal_orbits(&c, Exec::Parallel));
        assert_eq!(dual_orbits(&c, Exec::Sequential), dual_orbits(&c, Exec::Parallel));
    }

    #[test]
    fn left_multiplication_stays_in_orbit() {
        for c in [ctx(Family::UU, 3, 3, 1, 2), ctx(Family::UO, 4, 3, 1, 1), ctx(Family::USp, 4, 3, 1, 1)] {
            let o = primal_orbits(&c, Exec::Parallel);
            assert_eq!(left_multiplication_check(&c, &o, &c.enumerate_g().unwrap()), None);
        }
    }

    #[test]
    fn type_d_finer_example() {
        let t = crate::gf::make_tower(3, 1, 1).unwrap();
        let one = Fe::ONE;
        let m1 = t.neg(one);
        let e = |i, j, a| TriMatrix::elementary(4, &t, i, j, a).unwrap();
        let x1 = e(1, 2, one).add(&e(3, 4, m1)).unwrap();
        let x2 = x1.add(&e(1, 3, one)).unwrap().add(&e(2, 4, m1)).unwrap();
        let full = ctx(Family::UO, 4, 3, 1, 1);
        let poset = MirrorPoset::type_d_finer(4).unwrap();
        let sub = GroupContext::new(&GroupSpec::new(Family::UO, 4, 3, 1, 1).with_poset(poset)).unwrap();
        let of = primal_orbits(&full, Exec::Parallel);
        let os = primal_orbits(&sub, Exec::Parallel);
        let (a, b) = (full.u_space().index_of(&x1).unwrap(), full.u_space().index_of(&x2).unwrap());
        assert_eq!(of.orbit_of(a), of.orbit_of(b));
        let (a, b) = (sub.u_space().index_of(&x1).unwrap(), sub.u_space().index_of(&x2).unwrap());
        assert_ne!(os.orbit_of(a), os.orbit_of(b));
    }

    proptest! {
        #[test]
        fn image_table_matches_mul_vec(data in prop::collection::vec(0u32..3, 16), idx in 0usize..81) {
            let m = FpMatrix::from_rows(3, 4, &data.chunks(4).map(|c| c.to_vec()).collect::<Vec<_>>());
            let codec = IndexCodec::new(3, 4);
            let img = image_table(&codec, &m, Exec::Sequential);
            prop_assert_eq!(img[idx] as usize, codec.encode(&m.mul_vec(&codec.decode(idx))));
        }
    }
}
