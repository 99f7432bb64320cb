//! Supercharacter tables.
//!
//! With an involution the superclasses are `K_u = {v ∈ U : f(v) ∈ G·f(u)}` and
//! the supercharacters `χ_λ = n_λ^{-1} Σ_{μ∈G·λ} θ∘μ∘f` with `n_λ = |G·λ|/|H·λ|`.
//! Without one (family UT) the algebra-group theory is used: two-sided orbits
//! of `G` on `g` and `g*`, `f(g) = g - 1` and `n_λ = |GλG|/|Gλ|`.

mod render;
mod verify;

pub use render::{orbit_dump, spec_json, table_csv, table_json};
pub use verify::{
    axiom_checks, conjugate_counts, glambda_check, induction_oracle, induction_report, induction_subspace,
    intersection_check, left_multiplication_report, scalar_independence, springer_independence, theta_independence,
};

use std::sync::Arc;

use num_bigint::BigInt;

use crate::cyclotomic::CycloValue;
use crate::error::{Error, Result};
use crate::gf::Theta;
use crate::involution_group::{GroupContext, Springer};
use crate::linalg::FpMatrix;
use crate::orbits::{dual_orbits, primal_orbits, OrbitIndex};
use crate::par::Exec;
use crate::space::{pairing_matrix, Functional, SpaceBasis};
use crate::triangular::TriMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TheoryOptions {
    pub springer: Springer,
    pub theta: Theta,
    pub exec: Exec,
    /// Skip the size guards.
    pub force: bool,
}

impl Default for TheoryOptions {
    fn default() -> Self {
        TheoryOptions { springer: Springer::Cayley, theta: Theta::Standard, exec: Exec::Parallel, force: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoryKind {
    /// `U` inside `G`, one-sided dagger action.
    Involution,
    /// The pattern group itself with two-sided orbits.
    AlgebraGroup,
}

/// Orbit data from which both tables are read off.
#[derive(Debug)]
pub struct Theory {
    ctx: Arc<GroupContext>,
    kind: TheoryKind,
    opts: TheoryOptions,
    /// The group (`U`, or `G` for algebra groups), ascending.
    elements: Vec<TriMatrix>,
    /// Index of `f(elements[i])` in the space.
    space_index: Vec<usize>,
    primal: OrbitIndex,
    dual: OrbitIndex,
    /// `|H·λ|` or `|Gλ|` per dual orbit.
    sub_sizes: Vec<usize>,
    pairing: FpMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Superclass {
    /// Least member.
    pub rep: TriMatrix,
    /// Indices into [`Theory::elements`], ascending.
    pub members: Vec<usize>,
    pub orbit: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperclassTable {
    pub classes: Vec<Superclass>,
    /// Superclass of every group element.
    pub class_of: Vec<usize>,
}

impl SuperclassTable {
    /// Same partition of the group, ignoring orbit ids (which depend on the coordinates).
    pub fn same_partition(&self, other: &SuperclassTable) -> bool {
        self.class_of == other.class_of
    }

    pub fn sizes(&self) -> Vec<BigInt> {
        self.classes.iter().map(|c| BigInt::from(c.members.len())).collect()
    }

    /// Column of the identity element.
    pub fn identity_column(&self) -> usize {
        self.class_of[0]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupercharRow {
    /// Digits of the canonical `λ`.
    pub lambda: Vec<u32>,
    pub lambda_index: usize,
    pub orbit_size: usize,
    pub n_lambda: u64,
    pub degree: u64,
    pub values: Vec<CycloValue>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupercharTable {
    pub rows: Vec<SupercharRow>,
}

impl SupercharTable {
    /// Value rows, sorted; equal for theories that agree up to relabelling the characters.
    pub fn row_set(&self) -> Vec<Vec<CycloValue>> {
        let mut v: Vec<_> = self.rows.iter().map(|r| r.values.clone()).collect();
        v.sort();
        v
    }

    pub fn degrees(&self) -> Vec<u64> {
        let mut d: Vec<u64> = self.rows.iter().map(|r| r.degree).collect();
        d.sort_unstable();
        d
    }

    /// Test hook: perturbs one off-identity cell.
    pub fn inject_fault(&mut self) {
        let row = self.rows.len().saturating_sub(1);
        let col = self.rows[row].values.len().saturating_sub(1);
        let v = &mut self.rows[row].values[col];
        *v = &*v + &CycloValue::one(v.p());
    }
}

impl Theory {
    pub fn build(ctx: Arc<GroupContext>, opts: TheoryOptions) -> Result<Self> {
        if !opts.force {
            ctx.check_guards()?;
        }
        let kind = if ctx.involution().is_some() { TheoryKind::Involution } else { TheoryKind::AlgebraGroup };
        if kind == TheoryKind::Involution && opts.springer == Springer::Log && !ctx.log_defined() {
            return Err(Error::Spec(format!(
                "the truncated logarithm needs nilpotency at most p, got {} with p = {}",
                ctx.poset().nilpotency(),
                ctx.tower().p()
            )));
        }
        let space = ctx.u_space();
        let elements = match kind {
            TheoryKind::Involution => ctx.enumerate_u_group(),
            TheoryKind::AlgebraGroup => ctx.enumerate_g()?,
        };
        let space_index: Vec<usize> = opts.exec.map(elements.len(), |i| {
            let x = match kind {
                TheoryKind::Involution => ctx.springer(opts.springer, &elements[i]).expect("unipotent"),
                TheoryKind::AlgebraGroup => elements[i].clone().minus_one(),
            };
            space.index_of(&x).expect("f maps the group onto its space")
        });
        let primal = primal_orbits(&ctx, opts.exec);
        let (dual, sub_sizes) = dual_orbits(&ctx, opts.exec);
        let pairing = pairing_matrix(space, opts.theta);
        Ok(Theory { ctx, kind, opts, elements, space_index, primal, dual, sub_sizes, pairing })
    }

    pub fn ctx(&self) -> &Arc<GroupContext> {
        &self.ctx
    }
    pub fn kind(&self) -> TheoryKind {
        self.kind
    }
    pub fn options(&self) -> TheoryOptions {
        self.opts
    }
    pub fn elements(&self) -> &[TriMatrix] {
        &self.elements
    }
    pub fn space(&self) -> &SpaceBasis {
        self.ctx.u_space()
    }
    pub fn primal(&self) -> &OrbitIndex {
        &self.primal
    }
    pub fn dual(&self) -> &OrbitIndex {
        &self.dual
    }
    pub fn sub_sizes(&self) -> &[usize] {
        &self.sub_sizes
    }
    pub fn p(&self) -> u32 {
        self.ctx.tower().p()
    }

    /// Index of `f(g)` in the space.
    pub fn space_index_of(&self, element: usize) -> usize {
        self.space_index[element]
    }

    /// Position of a group element in [`Self::elements`].
    pub fn element_index(&self, g: &TriMatrix) -> Option<usize> {
        self.elements.binary_search(g).ok()
    }

    pub fn functional(&self, digits: &[u32]) -> Functional {
        Functional::from_digits(self.space().ambient(), digits)
    }

    /// Exponent `e` with `θ(μ(x)) = ζ^e`, for `x`, `μ` given by space and dual indices.
    pub fn char_exponent(&self, x: usize, mu: usize) -> u32 {
        let codec = self.space().codec();
        let xv = codec.decode(x);
        let mv = codec.decode(mu);
        self.covector_dot(&self.pairing.vec_mul(&xv), &mv)
    }

    fn covector_dot(&self, c: &[u32], v: &[u32]) -> u32 {
        let p = self.p() as u64;
        (c.iter().zip(v).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>() % p) as u32
    }

    pub fn superclasses(&self) -> SuperclassTable {
        let mut by_orbit: Vec<Option<usize>> = vec![None; self.primal.len()];
        let mut classes: Vec<Superclass> = Vec::new();
        let mut class_of = vec![0; self.elements.len()];
        for (i, &x) in self.space_index.iter().enumerate() {
            let o = self.primal.orbit_of(x);
            let c = *by_orbit[o].get_or_insert_with(|| {
                classes.push(Superclass { rep: self.elements[i].clone(), members: Vec::new(), orbit: o });
                classes.len() - 1
            });
            classes[c].members.push(i);
            class_of[i] = c;
        }
        debug_assert!(by_orbit.iter().all(Option::is_some));
        SuperclassTable { classes, class_of }
    }

    /// `n_λ` for a dual orbit; asserts divisibility.
    pub fn n_lambda(&self, orbit: usize) -> u64 {
        let (full, sub) = (self.dual.sizes()[orbit], self.sub_sizes[orbit]);
        assert_eq!(full % sub, 0, "finer orbit size must divide the orbit size");
        (full / sub) as u64
    }

    /// `χ_λ` at a space point, from the orbit sum.
    pub fn value_at(&self, members: &[usize], n_lambda: u64, x: usize) -> Result<CycloValue> {
        let codec = self.space().codec();
        let cov = self.pairing.vec_mul(&codec.decode(x));
        let mut counts = vec![0i64; self.p() as usize];
        let mut mv = vec![0u32; codec.dim()];
        for &mu in members {
            codec.decode_into(mu, &mut mv);
            counts[self.covector_dot(&cov, &mv) as usize] += 1;
        }
        CycloValue::from_exponent_counts(self.p(), &counts)
            .div_exact(&BigInt::from(n_lambda))
            .ok_or_else(|| Error::Verification(format!("orbit sum not divisible by n_λ = {n_lambda}")))
    }

    pub fn supercharacters(&self, classes: &SuperclassTable) -> Result<SupercharTable> {
        let members = self.dual.members();
        let cols: Vec<usize> = classes.classes.iter().map(|c| self.space_index[c.members[0]]).collect();
        let rows: Vec<Result<SupercharRow>> = self.opts.exec.map(self.dual.len(), |o| {
            let n_lambda = self.n_lambda(o);
            let values = cols.iter().map(|&x| self.value_at(&members[o], n_lambda, x)).collect::<Result<Vec<_>>>()?;
            let degree = self.dual.sizes()[o] as u64 / n_lambda;
            if degree != self.sub_sizes[o] as u64 {
                return Err(Error::Verification(format!("degree {degree} differs from finer orbit size")));
            }
            let rep = self.dual.reps()[o];
            Ok(SupercharRow {
                lambda: self.dual.codec().decode(rep),
                lambda_index: rep,
                orbit_size: self.dual.sizes()[o],
                n_lambda,
                degree,
                values,
            })
        });
        Ok(SupercharTable { rows: rows.into_iter().collect::<Result<_>>()? })
    }

    /// Both tables.
    pub fn tables(&self) -> Result<(SuperclassTable, SupercharTable)> {
        let sc = self.superclasses();
        let ch = self.supercharacters(&sc)?;
        Ok((sc, ch))
    }

    /// Whether `g ∈ S` for `S = 1 + s`.
    pub(crate) fn in_subgroup(&self, s: &SpaceBasis, g: &TriMatrix) -> bool {
        s.contains(&g.clone().minus_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::involution_group::{Family, GroupSpec};

    fn theory(f: Family, n: usize, p: u32, k: u32) -> Theory {
        let ctx = Arc::new(GroupContext::new(&GroupSpec::new(f, n, p, 1, k)).unwrap());
        Theory::build(ctx, TheoryOptions::default()).unwrap()
    }

    #[test]
    fn ut2_is_abelian_table() {
        let t = theory(Family::UT, 2, 3, 1);
        let (sc, ch) = t.tables().unwrap();
        assert_eq!(sc.classes.len(), 3);
        assert!(ch.rows.iter().all(|r| r.degree == 1));
        assert!(ch.rows[0].values.iter().all(|v| *v == CycloValue::one(3)));
    }

    #[test]
    fn uu3_counts() {
        let t = theory(Family::UU, 3, 3, 2);
        let (sc, ch) = t.tables().unwrap();
        assert_eq!(sc.classes.len(), 11);
        assert_eq!(sc.sizes().iter().sum::<BigInt>(), BigInt::from(27));
        assert_eq!(ch.rows.len(), 11);
        assert_eq!(sc.identity_column(), 0);
        assert_eq!(sc.classes[0].members, vec![0]);
        assert_eq!(ch.degrees().into_iter().filter(|&d| d == 9).count(), 2);
    }

    #[test]
    fn uo3_rows_are_linear() {
        let t = theory(Family::UO, 3, 3, 1);
        let (_, ch) = t.tables().unwrap();
        assert_eq!(ch.rows.len(), 3);
        for r in &ch.rows {
            assert_eq!(r.degree, 1);
            assert!(r.values.iter().all(|v| (v * &v.conjugate()) == CycloValue::one(3)));
        }
    }

    #[test]
    fn log_rejected_when_undefined() {
        let ctx = Arc::new(GroupContext::new(&GroupSpec::new(Family::UO, 4, 3, 1, 1)).unwrap());
        let opts = TheoryOptions { springer: Springer::Log, ..Default::default() };
        assert!(Theory::build(ctx, opts).is_err());
    }
}
