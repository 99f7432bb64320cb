//! The groups `U = {u : u† = u^{-1}}` and spaces `u = {x : x† = -x}` inside a
//! pattern group `G = 1 + g`, the normal subgroup `H = 1 + h`, and the
//! extension of functionals from `u` to `g`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{make_tower, Fe, FieldTower};
use crate::linalg::{FpMatrix, IndexCodec};
use crate::space::{Ambient, Functional, Scalars, SpaceBasis};
use crate::triangular::{cayley, cayley_inv, trunc_exp, trunc_log, Involution, InvolutionKind, MirrorPoset, TriMatrix};

/// Hard limits for exhaustive enumeration.
pub const MAX_GROUP_ENUMERATION: u128 = 1 << 24;
pub const MAX_SPACE_SIZE: u128 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// The pattern group itself, no involution.
    UT,
    UO,
    USp,
    UU,
}

impl Family {
    pub fn involution(self) -> Option<InvolutionKind> {
        match self {
            Family::UT => None,
            Family::UO => Some(InvolutionKind::Orthogonal),
            Family::USp => Some(InvolutionKind::Symplectic),
            Family::UU => Some(InvolutionKind::Unitary),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::UT => "UT",
            Family::UO => "UO",
            Family::USp => "USp",
            Family::UU => "UU",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ut" => Ok(Family::UT),
            "uo" => Ok(Family::UO),
            "usp" => Ok(Family::USp),
            "uu" => Ok(Family::UU),
            _ => Err(Error::Spec(format!("unknown family {s:?} (expected UT, UO, USp or UU)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub family: Family,
    pub n: usize,
    pub p: u32,
    pub e: u32,
    pub k: u32,
    pub poset: Option<MirrorPoset>,
}

impl GroupSpec {
    pub fn new(family: Family, n: usize, p: u32, e: u32, k: u32) -> Self {
        GroupSpec { family, n, p, e, k, poset: None }
    }

    pub fn with_poset(mut self, poset: MirrorPoset) -> Self {
        self.poset = Some(poset);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Spec("n must be positive".into()));
        }
        if self.family == Family::USp && !self.n.is_multiple_of(2) {
            return Err(Error::Spec(format!("USp needs even n, got {}", self.n)));
        }
        if self.family == Family::UU && self.k != 2 {
            return Err(Error::Spec(format!("UU needs k = 2, got k = {}", self.k)));
        }
        if let Some(poset) = &self.poset {
            if poset.n() != self.n {
                return Err(Error::Spec(format!("poset is on [{}] but n = {}", poset.n(), self.n)));
            }
        }
        Ok(())
    }

    /// `q = p^e`.
    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.e)
    }

    /// Short name such as `UU_3(F_9)`; a poset restriction is marked `∩U_P`.
    pub fn label(&self) -> String {
        let field = self.q().pow(self.k);
        let base = format!("{}_{}(F_{})", self.family, self.n, field);
        match &self.poset {
            Some(p) if !p.is_chain() => format!("{base}∩U_P"),
            _ => base,
        }
    }
}

/// JSON form of a [`GroupSpec`]; the poset is a path to a poset file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecFile {
    pub family: String,
    pub n: usize,
    pub p: u32,
    #[serde(default = "one")]
    pub e: u32,
    #[serde(default)]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poset: Option<String>,
}

fn one() -> u32 {
    1
}

impl SpecFile {
    /// Resolves the family and default `k` (2 for UU, 1 otherwise); the poset is supplied by the caller.
    pub fn to_spec(&self, poset: Option<MirrorPoset>) -> Result<GroupSpec> {
        let family: Family = self.family.parse()?;
        let k = self.k.unwrap_or(if family == Family::UU { 2 } else { 1 });
        let spec = GroupSpec { family, n: self.n, p: self.p, e: self.e, k, poset };
        spec.validate()?;
        Ok(spec)
    }
}

/// The two Springer maps `G → g`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Springer {
    #[default]
    Cayley,
    Log,
}

impl fmt::Display for Springer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Springer::Cayley => "cayley",
            Springer::Log => "log",
        })
    }
}

/// Everything derived from a [`GroupSpec`]: field, pattern, involution and the spaces `g`, `u`, `h`.
#[derive(Debug)]
pub struct GroupContext {
    spec: GroupSpec,
    tower: Arc<FieldTower>,
    poset: MirrorPoset,
    involution: Option<Involution>,
    ambient: Arc<Ambient>,
    g: SpaceBasis,
    u: SpaceBasis,
    h: SpaceBasis,
}

impl GroupContext {
    pub fn new(spec: &GroupSpec) -> Result<Self> {
        Self::with_scalars(spec, Scalars::Fq)
    }

    pub fn with_scalars(spec: &GroupSpec, scalars: Scalars) -> Result<Self> {
        spec.validate()?;
        let tower = make_tower(spec.p, spec.e, spec.k)?;
        let poset = spec.poset.clone().unwrap_or_else(|| MirrorPoset::chain(spec.n));
        let involution = spec.family.involution().map(|k| Involution::new(k, spec.n, &tower)).transpose()?;
        let ambient = Ambient::new(spec.n, &tower, poset.positions(), scalars);
        let g = SpaceBasis::whole(&ambient);
        let u = match &involution {
            None => g.clone(),
            Some(inv) => minus_one_eigenspace(&ambient, inv),
        };
        let half = spec.n / 2;
        let h_pos: Vec<Vec<u32>> = ambient
            .root_vectors()
            .iter()
            .filter(|x| ambient.positions().iter().any(|&(i, j)| j > half && !x.entry(i, j).is_zero()))
            .map(|x| ambient.flatten(x))
            .collect();
        let h = SpaceBasis::from_fp_span(&ambient, &h_pos);
        Ok(GroupContext { spec: spec.clone(), tower, poset, involution, ambient, g, u, h })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }
    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }
    pub fn poset(&self) -> &MirrorPoset {
        &self.poset
    }
    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ambient
    }
    pub fn involution(&self) -> Option<&Involution> {
        self.involution.as_ref()
    }
    pub fn n(&self) -> usize {
        self.spec.n
    }
    /// The pattern algebra `g`.
    pub fn g_space(&self) -> &SpaceBasis {
        &self.g
    }
    /// `u = {x : x† = -x}`; all of `g` when there is no involution.
    pub fn u_space(&self) -> &SpaceBasis {
        &self.u
    }
    /// `h = {x ∈ g : x_{ij} = 0 if j ≤ n/2}`.
    pub fn h_space(&self) -> &SpaceBasis {
        &self.h
    }

    /// `|G|`.
    pub fn g_order(&self) -> u128 {
        (self.tower.order() as u128).pow(self.ambient.positions().len() as u32)
    }

    /// `|U| = |u|`.
    pub fn u_order(&self) -> u128 {
        self.u.size() as u128
    }

    /// Rejects specs beyond the exhaustive limits: the group that is enumerated
    /// (`U`, or `G` for UT) and the space that is indexed.
    pub fn check_guards(&self) -> Result<()> {
        let space = (self.ambient.p() as u128).pow(self.u.fp_dim() as u32);
        if space > MAX_SPACE_SIZE {
            return Err(Error::Guard(format!("|u| = {space} exceeds 2^20 for {}", self.spec.label())));
        }
        if self.u_order() > MAX_GROUP_ENUMERATION {
            return Err(Error::Guard(format!("|U| = {} exceeds 2^24 for {}", self.u_order(), self.spec.label())));
        }
        Ok(())
    }

    pub fn dagger(&self, x: &TriMatrix) -> TriMatrix {
        self.involution.as_ref().expect("family has an involution").dagger(x).expect("shape checked")
    }

    /// `g·x = g x g†`.
    pub fn act(&self, g: &TriMatrix, x: &TriMatrix) -> TriMatrix {
        g.mul(x).and_then(|gx| gx.mul(&self.dagger(g))).expect("shapes agree")
    }

    /// Generators `1 + β e_{ij}` of `G`, `β` over an `F_p`-basis of `F_{q^k}`.
    pub fn g_generators(&self) -> Vec<TriMatrix> {
        self.ambient.root_vectors().into_iter().map(TriMatrix::plus_one).collect()
    }

    /// Generators of `H` (root elements in `h`).
    pub fn h_generators(&self) -> Vec<TriMatrix> {
        self.ambient.root_vectors().into_iter().filter(|x| self.h.contains(x)).map(TriMatrix::plus_one).collect()
    }

    pub fn springer(&self, s: Springer, g: &TriMatrix) -> Result<TriMatrix> {
        Ok(match s {
            Springer::Cayley => cayley(g)?,
            Springer::Log => trunc_log(g, self.poset.nilpotency())?,
        })
    }

    pub fn springer_inv(&self, s: Springer, x: &TriMatrix) -> Result<TriMatrix> {
        Ok(match s {
            Springer::Cayley => cayley_inv(x)?,
            Springer::Log => trunc_exp(x, self.poset.nilpotency())?,
        })
    }

    /// Whether the truncated logarithm is a Springer map here.
    pub fn log_defined(&self) -> bool {
        self.poset.nilpotency() <= self.tower.p() as usize
    }

    /// `U` in canonical order, built as the image of `u` under the inverse Cayley map.
    pub fn enumerate_u_group(&self) -> Vec<TriMatrix> {
        let mut out: Vec<TriMatrix> = (0..self.u.size())
            .map(|i| {
                let x = self.u.element(i);
                if self.involution.is_some() {
                    cayley_inv(&x).expect("nilpotent")
                } else {
                    x.plus_one()
                }
            })
            .collect();
        out.sort();
        out
    }

    /// All of `G` in canonical order.
    pub fn enumerate_g(&self) -> Result<Vec<TriMatrix>> {
        if self.g_order() > MAX_GROUP_ENUMERATION {
            return Err(Error::Guard(format!("|G| = {} exceeds 2^24", self.g_order())));
        }
        let pos = self.ambient.positions();
        let codec = IndexCodec::new(self.tower.order(), pos.len());
        let mut out = Vec::with_capacity(codec.size());
        for idx in 0..codec.size() {
            let digits = codec.decode(idx);
            let mut x = TriMatrix::zero(self.n(), &self.tower);
            for (&(i, j), &d) in pos.iter().zip(&digits) {
                x.set(i, j, self.tower.element(d)?)?;
            }
            out.push(x.plus_one());
        }
        out.sort();
        Ok(out)
    }

    /// `U` by filtering `G` with `g† = g^{-1}`; an oracle for [`Self::enumerate_u_group`].
    pub fn filter_u_group(&self) -> Result<Vec<TriMatrix>> {
        let g = self.enumerate_g()?;
        Ok(match &self.involution {
            None => g,
            Some(inv) => g.into_iter().filter(|x| inv.dagger(x).ok() == x.inverse().ok()).collect(),
        })
    }

    /// `η(x) = ½ λ(x - x†)`, the unique extension with `η(x†) = -η(x)`.
    pub fn extend_functional(&self, lambda: &Functional) -> Functional {
        let t = &self.tower;
        let values = self
            .g
            .basis()
            .iter()
            .map(|b| {
                let z = b.sub(&self.dagger(b)).expect("nilpotent");
                t.mul(t.half(), lambda.eval(&self.u, &z).expect("x - x† lies in u"))
            })
            .collect();
        Functional::new(values)
    }

    /// Covector `w` on flattened `g` with `w·flat(z) = Tr(c·η(z))`, where `c` is the character scale.
    pub fn trace_covector(&self, space: &SpaceBasis, eta: &Functional) -> Vec<u32> {
        let amb = &self.ambient;
        let dim = amb.flat_dim();
        (0..dim)
            .map(|m| {
                let mut v = vec![0u32; dim];
                v[m] = 1;
                let z = amb.unflatten(&v);
                match eta.eval(space, &z) {
                    Some(val) => match amb.scalars() {
                        Scalars::Fq => self.tower.trace_fq(val).expect("scalar"),
                        Scalars::Fp => val.encoding(),
                    },
                    None => 0,
                }
            })
            .collect()
    }

    /// `{x ∈ g : η(y x) = 0 ∀ y ∈ ys}` (left) or `η(x y) = 0` (right), `ys` an `F_p`-spanning set.
    pub fn annihilator(&self, w: &[u32], ys: &[TriMatrix], left: bool) -> SpaceBasis {
        let amb = &self.ambient;
        let dim = amb.flat_dim();
        let p = amb.p() as u64;
        let eqs: Vec<Vec<u32>> = ys
            .iter()
            .map(|y| {
                (0..dim)
                    .map(|m| {
                        let mut v = vec![0u32; dim];
                        v[m] = 1;
                        let x = amb.unflatten(&v);
                        let prod = if left { y.mul(&x) } else { x.mul(y) }.expect("shapes agree");
                        let f = amb.flatten(&prod);
                        (f.iter().zip(w).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>() % p) as u32
                    })
                    .collect()
            })
            .collect();
        self.g.solve_subspace(&eqs)
    }

    fn flat_elements(&self, s: &SpaceBasis) -> Vec<TriMatrix> {
        s.fp_basis_flat().iter().map(|v| self.ambient.unflatten(v)).collect()
    }

    /// `l_η`, `r_η` and `g_η = l_η ∩ r_η` for `η ∈ g*`.
    pub fn sub_l_r_g(&self, eta: &Functional) -> (SpaceBasis, SpaceBasis, SpaceBasis) {
        let w = self.trace_covector(&self.g, eta);
        let hs = self.flat_elements(&self.h);
        let hdag: Vec<TriMatrix> = hs.iter().map(|y| self.dagger(y)).collect();
        let l = self.annihilator(&w, &hs, true);
        let r = self.annihilator(&w, &hdag, false);
        let gl = l.intersect(&r);
        (l, r, gl)
    }

    /// `l_λ = {x : λ(y x) = 0 ∀ y ∈ g}` for the algebra-group theory.
    pub fn algebra_l(&self, lambda: &Functional) -> SpaceBasis {
        let w = self.trace_covector(&self.g, lambda);
        let gs = self.flat_elements(&self.g);
        self.annihilator(&w, &gs, true)
    }
}

fn minus_one_eigenspace(ambient: &Arc<Ambient>, inv: &Involution) -> SpaceBasis {
    let dim = ambient.flat_dim();
    let p = ambient.p();
    let cols: Vec<Vec<u32>> = (0..dim)
        .map(|m| {
            let mut v = vec![0u32; dim];
            v[m] = 1;
            let x = ambient.unflatten(&v);
            ambient.flatten(&x.add(&inv.dagger(&x).expect("shape")).expect("nilpotent"))
        })
        .collect();
    let kernel = FpMatrix::from_columns(p, dim, &cols).kernel();
    SpaceBasis::from_fp_span(ambient, &kernel)
}

/// Outcome of one structural check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        CheckOutcome { name: name.to_string(), passed, detail: detail.into() }
    }
}

/// Structural facts about `g`, `u`, `h`, `H`, `U` on one spec. `seed` drives the sampled checks.
pub fn structural_checks(ctx: &GroupContext, seed: u64) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let g_flat: Vec<TriMatrix> = ctx.flat_elements(ctx.g_space());
    let h_flat: Vec<TriMatrix> = ctx.flat_elements(ctx.h_space());

    let ideal = h_flat.iter().all(|y| {
        g_flat.iter().all(|x| ctx.h_space().contains(&x.mul(y).unwrap()) && ctx.h_space().contains(&y.mul(x).unwrap()))
    });
    out.push(CheckOutcome::new("h is a two-sided ideal of g", ideal, ""));

    let normal = ctx.g_generators().iter().all(|g| {
        let gi = g.inverse().unwrap();
        ctx.h_generators().iter().all(|h| ctx.h_space().contains(&g.mul(h).unwrap().mul(&gi).unwrap().minus_one()))
    });
    out.push(CheckOutcome::new("H is normal in G (generators)", normal, ""));

    if ctx.involution().is_none() {
        return out;
    }
    let u_flat = ctx.flat_elements(ctx.u_space());
    let lie = u_flat
        .iter()
        .all(|x| u_flat.iter().all(|y| ctx.u_space().contains(&x.mul(y).unwrap().sub(&y.mul(x).unwrap()).unwrap())));
    out.push(CheckOutcome::new("u is closed under the Lie bracket", lie, ""));

    let u_group = ctx.enumerate_u_group();
    let h_cap_u = u_group.iter().filter(|u| ctx.h_space().contains(&(*u).clone().minus_one())).count() as u128;
    let h_order = ctx.h_space().size() as u128;
    let hu = h_order * u_group.len() as u128 / h_cap_u;
    out.push(CheckOutcome::new(
        "G = HU",
        hu == ctx.g_order() && (h_order * u_group.len() as u128).is_multiple_of(h_cap_u),
        format!("|H| = {h_order}, |U| = {}, |H∩U| = {h_cap_u}, |G| = {}", u_group.len(), ctx.g_order()),
    ));

    let commute = ctx.h_generators().iter().all(|h| {
        let y = h.clone().minus_one();
        g_flat.iter().all(|x| {
            let lhs = ctx.act(h, x);
            let rhs = y.mul(x).unwrap().add(&x.mul(&ctx.dagger(&y)).unwrap()).unwrap().add(x).unwrap();
            lhs == rhs
        })
    });
    out.push(CheckOutcome::new("h·x = (h-1)*x + x for h in H", commute, ""));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = 64.min(u_group.len() * ctx.u_space().size());
    let conj = (0..samples).all(|_| {
        let u = &u_group[rng.random_range(0..u_group.len())];
        let x = ctx.u_space().element(rng.random_range(0..ctx.u_space().size()));
        ctx.act(u, &x) == u.mul(&x).unwrap().mul(&u.inverse().unwrap()).unwrap()
    });
    out.push(CheckOutcome::new("u·x = u x u^{-1} for u in U", conj, format!("{samples} samples, seed {seed}")));

    let closed = u_group
        .iter()
        .take(64)
        .all(|a| u_group.iter().take(64).all(|b| u_group.binary_search(&a.mul(b).unwrap()).is_ok()))
        && u_group.iter().all(|a| u_group.binary_search(&a.inverse().unwrap()).is_ok());
    out.push(CheckOutcome::new("U is closed under products and inverses", closed, ""));

    let mut springer_ok = true;
    for s in [Springer::Cayley, Springer::Log] {
        if s == Springer::Log && !ctx.log_defined() {
            continue;
        }
        let mut images: Vec<usize> =
            u_group.iter().filter_map(|u| ctx.springer(s, u).ok().and_then(|x| ctx.u_space().index_of(&x))).collect();
        images.sort_unstable();
        images.dedup();
        springer_ok &= images.len() == u_group.len();
        for x in g_flat.iter().take(16) {
            let g = ctx.springer_inv(s, x).unwrap();
            springer_ok &= ctx.springer(s, &g).unwrap() == *x;
        }
    }
    out.push(CheckOutcome::new("f(U) = u for each defined Springer map", springer_ok, ""));
    out
}

/// Checks on `η = extend(λ)` and `g_η` for one `λ`.
pub fn functional_checks(ctx: &GroupContext, lambda: &Functional) -> Vec<CheckOutcome> {
    let eta = ctx.extend_functional(lambda);
    let g = ctx.g_space();
    let restrict = ctx.u_space().basis().iter().all(|b| eta.eval(g, b) == lambda.eval(ctx.u_space(), b));
    let t = ctx.tower();
    let anti = ctx.flat_elements(g).iter().all(|x| eta.eval(g, &ctx.dagger(x)) == eta.eval(g, x).map(|v| t.neg(v)));
    let (_, _, gl) = ctx.sub_l_r_g(&eta);
    let gl_flat = ctx.flat_elements(&gl);
    let kernel = gl_flat.iter().all(|x| gl_flat.iter().all(|y| eta.eval(g, &x.mul(y).unwrap()) == Some(Fe::ZERO)));
    vec![
        CheckOutcome::new("η restricts to λ on u", restrict, ""),
        CheckOutcome::new("η(x†) = -η(x)", anti && restrict, ""),
        CheckOutcome::new("η(xy) = 0 on g_η", kernel, format!("dim g_η = {}", gl.dim())),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(f: Family, n: usize, p: u32, e: u32, k: u32) -> GroupContext {
        GroupContext::new(&GroupSpec::new(f, n, p, e, k)).unwrap()
    }

    #[test]
    fn group_orders_and_u_dimensions() {
        // uu_3(F_9): F_9 coordinate at (1,2) plus the line a^3 + a = 0 at (1,3)
        let c = ctx(Family::UU, 3, 3, 1, 2);
        assert_eq!(c.u_space().dim(), 3);
        assert_eq!(c.u_order(), 27);
        assert_eq!(c.filter_u_group().unwrap().len(), 27);
        // uo_3(F_3): x13 = -x13 forces x13 = 0
        let c = ctx(Family::UO, 3, 3, 1, 1);
        assert_eq!(c.u_space().dim(), 1);
        assert_eq!(c.filter_u_group().unwrap().len(), 3);
        let c = ctx(Family::USp, 2, 3, 1, 1);
        assert_eq!(c.u_space().dim(), 1);
        let c = ctx(Family::UT, 2, 3, 1, 1);
        assert_eq!(c.enumerate_u_group().len(), 3);
        let c = ctx(Family::USp, 4, 3, 1, 1);
        assert_eq!(c.u_order(), 81);
        let c = ctx(Family::UO, 4, 3, 1, 1);
        assert_eq!(c.u_order(), 9);
    }

    #[test]
    fn cayley_route_matches_filter() {
        for c in [ctx(Family::UU, 3, 3, 1, 2), ctx(Family::UO, 4, 3, 1, 1), ctx(Family::USp, 4, 3, 1, 1)] {
            assert_eq!(c.enumerate_u_group(), c.filter_u_group().unwrap());
        }
    }

    #[test]
    fn h_positions() {
        let c = ctx(Family::UO, 3, 3, 1, 1);
        assert!(c.h_space().same_subspace(c.g_space()));
        let c = ctx(Family::UU, 4, 3, 1, 2);
        let want = [(1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];
        for &(i, j) in &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)] {
            let x = TriMatrix::elementary(4, c.tower(), i, j, Fe::ONE).unwrap();
            assert_eq!(c.h_space().contains(&x), want.contains(&(i, j)));
        }
    }

    #[test]
    fn spec_validation() {
        assert!(GroupSpec::new(Family::USp, 3, 3, 1, 1).validate().is_err());
        assert!(GroupSpec::new(Family::UU, 3, 3, 1, 1).validate().is_err());
        let f: SpecFile = serde_json::from_str(r#"{"family":"UU","n":4,"p":3,"e":1,"k":2}"#).unwrap();
        assert_eq!(f.to_spec(None).unwrap(), GroupSpec::new(Family::UU, 4, 3, 1, 2));
        let f: SpecFile = serde_json::from_str(r#"{"family":"uu","n":3,"p":3}"#).unwrap();
        assert_eq!(f.to_spec(None).unwrap().k, 2);
        assert_eq!(GroupSpec::new(Family::UU, 3, 3, 1, 2).label(), "UU_3(F_9)");
    }

    #[test]
    fn structural_checks_pass() {
        for c in [
            ctx(Family::UU, 3, 3, 1, 2),
            ctx(Family::UU, 4, 3, 1, 2),
            ctx(Family::UO, 4, 3, 1, 1),
            ctx(Family::USp, 4, 3, 1, 1),
            ctx(Family::UO, 5, 3, 1, 1),
        ] {
            for chk in structural_checks(&c, 7) {
                assert!(chk.passed, "{}: {} {}", c.spec().label(), chk.name, chk.detail);
            }
        }
    }

    #[test]
    fn extension_examples() {
        let c = ctx(Family::UU, 3, 3, 1, 2);
        let zero = Functional::zero(c.u_space().dim());
        assert!(c.extend_functional(&zero).is_zero());
        let (l, r, gl) = c.sub_l_r_g(&c.extend_functional(&zero));
        for s in [&l, &r, &gl] {
            assert!(s.same_subspace(c.g_space()));
        }
        let amb = c.ambient().clone();
        for idx in 0..c.u_space().size() {
            let lam = Functional::from_digits(&amb, &c.u_space().codec().decode(idx));
            for chk in functional_checks(&c, &lam) {
                assert!(chk.passed, "{} {}", chk.name, chk.detail);
            }
        }
    }
}
