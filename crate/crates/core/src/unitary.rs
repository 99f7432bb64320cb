//! Twisted `F_q`-set partitions and the closed-form supercharacter values of
//! `UU_n(F_{q^2})`, checked against brute-force tables.
//!
//! Arcs `i⌢j` carry labels in `F_{q^2}^×` and are closed under the mirror
//! `(i, j, a) ↦ (j̄, ī, -a^q)` with `ī = n + 1 - i`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::cyclotomic::CycloValue;
use crate::error::{Error, Result};
use crate::gf::{Fe, FieldTower, Theta};
use crate::involution_group::{CheckOutcome, Family, GroupContext};
use crate::orbits::{action_matrices, orbit_bfs, Action};
use crate::sct::{SupercharTable, SuperclassTable, Theory, TheoryOptions};
use crate::space::Functional;
use crate::triangular::TriMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistedSetPartition {
    n: usize,
    /// Full mirror closure, sorted by position.
    arcs: Vec<(usize, usize, Fe)>,
}

fn mirror(n: usize, t: &FieldTower, (i, j, a): (usize, usize, Fe)) -> (usize, usize, Fe) {
    (n + 1 - j, n + 1 - i, t.neg(t.frobenius_q(a)))
}

impl TwistedSetPartition {
    pub fn empty(n: usize) -> Self {
        TwistedSetPartition { n, arcs: Vec::new() }
    }

    /// Closes `arcs` under the mirror and validates the result.
    pub fn new(n: usize, t: &FieldTower, arcs: &[(usize, usize, Fe)]) -> Result<Self> {
        if t.k() != 2 {
            return Err(Error::Spec("twisted partitions need a degree-2 extension".into()));
        }
        let mut all: Vec<(usize, usize, Fe)> = Vec::new();
        for &arc in arcs {
            let (i, j, a) = arc;
            if !(1 <= i && i < j && j <= n) {
                return Err(Error::Spec(format!("arc {i}⌢{j} is not an arc of [{n}]")));
            }
            if a.is_zero() {
                return Err(Error::Spec(format!("arc {i}⌢{j} has zero label")));
            }
            for x in [arc, mirror(n, t, arc)] {
                match all.iter().find(|y| (y.0, y.1) == (x.0, x.1)) {
                    Some(y) if y.2 != x.2 => {
                        return Err(Error::Spec(format!("arc {}⌢{} conflicts with its mirror", x.0, x.1)))
                    }
                    Some(_) => {}
                    None => all.push(x),
                }
            }
        }
        all.sort();
        let lefts: BTreeSet<usize> = all.iter().map(|a| a.0).collect();
        let rights: BTreeSet<usize> = all.iter().map(|a| a.1).collect();
        if lefts.len() != all.len() || rights.len() != all.len() {
            return Err(Error::Spec("two arcs share an endpoint".into()));
        }
        Ok(TwistedSetPartition { n, arcs: all })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(usize, usize, Fe)] {
        &self.arcs
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.arcs.iter().any(|a| (a.0, a.1) == (i, j))
    }

    pub fn label(&self, i: usize, j: usize) -> Option<Fe> {
        self.arcs.iter().find(|a| (a.0, a.1) == (i, j)).map(|a| a.2)
    }

    /// One arc per mirror orbit: the one with the smaller left endpoint.
    pub fn orbit_reps(&self) -> Vec<(usize, usize, Fe)> {
        self.arcs.iter().copied().filter(|&(i, j, _)| i <= self.n + 1 - j).collect()
    }

    pub fn is_elementary(&self) -> bool {
        self.orbit_reps().len() == 1
    }

    pub fn to_json(&self) -> Value {
        let arcs: Vec<Value> = self.orbit_reps().iter().map(|&(i, j, a)| json!([i, j, a.encoding()])).collect();
        json!({"n": self.n, "arcs": arcs})
    }

    pub fn from_json(v: &Value, t: &FieldTower) -> Result<Self> {
        let bad = || Error::Spec("partition JSON needs {\"n\", \"arcs\": [[i, j, a]]}".into());
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(bad)? as usize;
        let mut arcs = Vec::new();
        for a in v.get("arcs").and_then(Value::as_array).ok_or_else(bad)? {
            let a = a.as_array().filter(|a| a.len() == 3).ok_or_else(bad)?;
            let nums: Vec<u64> = a.iter().map(|x| x.as_u64().ok_or_else(bad)).collect::<Result<_>>()?;
            arcs.push((nums[0] as usize, nums[1] as usize, t.element(nums[2] as u32)?));
        }
        Self::new(n, t, &arcs)
    }
}

impl fmt::Display for TwistedSetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arcs.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self.arcs.iter().map(|(i, j, a)| format!("{i}⌢{j}[{}]", a.encoding())).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Mirror orbits of positions `i < j` in `[n]`, as their representative with the smaller left endpoint.
fn position_orbits(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if i <= n + 1 - j {
                out.push((i, j));
            }
        }
    }
    out
}

/// All twisted partitions of `[n]`, sorted.
pub fn enumerate_twisted(n: usize, t: &FieldTower) -> Vec<TwistedSetPartition> {
    let orbits = position_orbits(n);
    let all_labels: Vec<Fe> = t.elements().filter(|a| !a.is_zero()).collect();
    let self_labels: Vec<Fe> = all_labels.iter().copied().filter(|&a| t.add(t.frobenius_q(a), a).is_zero()).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut used_left = vec![false; n + 2];
    let mut used_right = vec![false; n + 2];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        k: usize,
        n: usize,
        t: &FieldTower,
        orbits: &[(usize, usize)],
        labels: (&[Fe], &[Fe]),
        chosen: &mut Vec<(usize, usize, Fe)>,
        used: (&mut Vec<bool>, &mut Vec<bool>),
        out: &mut Vec<TwistedSetPartition>,
    ) {
        if k == orbits.len() {
            out.push(TwistedSetPartition::new(n, t, chosen).expect("valid by construction"));
            return;
        }
        let (ul, ur) = used;
        rec(k + 1, n, t, orbits, labels, chosen, (&mut *ul, &mut *ur), out);
        let (i, j) = orbits[k];
        let (mi, mj) = (n + 1 - j, n + 1 - i);
        let selfm = (i, j) == (mi, mj);
        let free = !ul[i] && !ur[j] && (selfm || (!ul[mi] && !ur[mj] && i != mi && j != mj));
        if !free {
            return;
        }
        ul[i] = true;
        ur[j] = true;
        ul[mi] = true;
        ur[mj] = true;
        for &a in if selfm { labels.1 } else { labels.0 } {
            chosen.push((i, j, a));
            rec(k + 1, n, t, orbits, labels, chosen, (&mut *ul, &mut *ur), out);
            chosen.pop();
        }
        ul[i] = false;
        ur[j] = false;
        ul[mi] = false;
        ur[mj] = false;
    }
    rec(0, n, t, &orbits, (&all_labels, &self_labels), &mut chosen, (&mut used_left, &mut used_right), &mut out);
    out.sort();
    out
}

/// `x_η = Σ a e_{ij}`.
pub fn rep_matrix(eta: &TwistedSetPartition, t: &Arc<FieldTower>) -> TriMatrix {
    let mut x = TriMatrix::zero(eta.n, t);
    for &(i, j, a) in &eta.arcs {
        x.set(i, j, a).expect("arc inside [n]");
    }
    x
}

/// `λ_η(x) = Σ a x_{ij}` as a functional on `u`.
pub fn lambda_functional(ctx: &GroupContext, eta: &TwistedSetPartition) -> Result<Functional> {
    let t = ctx.tower();
    let vals = ctx
        .u_space()
        .basis()
        .iter()
        .map(|b| {
            let v = eta.arcs.iter().fold(Fe::ZERO, |acc, &(i, j, a)| t.add(acc, t.mul(a, b.entry(i, j))));
            if t.in_fq(v) {
                Ok(v)
            } else {
                Err(Error::Verification(format!("λ_η is not F_q-valued for η = {eta}")))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Functional::new(vals))
}

/// Index of `λ_η` in the dual codec.
pub fn lambda_index(ctx: &GroupContext, eta: &TwistedSetPartition) -> Result<usize> {
    let f = lambda_functional(ctx, eta)?;
    Ok(ctx.u_space().codec().encode(&f.digits(ctx.ambient())))
}

fn is_monomial(x: &TriMatrix) -> bool {
    let n = x.n();
    (1..=n).all(|r| (r + 1..=n).filter(|&c| !x.entry(r, c).is_zero()).count() <= 1)
        && (1..=n).all(|c| (1..c).filter(|&r| !x.entry(r, c).is_zero()).count() <= 1)
}

fn partition_of_monomial(x: &TriMatrix) -> Result<TwistedSetPartition> {
    let n = x.n();
    let arcs: Vec<_> = crate::triangular::strict_upper_positions(n)
        .into_iter()
        .filter(|&(i, j)| !x.entry(i, j).is_zero())
        .map(|(i, j)| (i, j, x.entry(i, j)))
        .collect();
    TwistedSetPartition::new(n, x.tower(), &arcs)
}

/// Row reduction by elements `1 - c e_{ki}`; `None` when a divisor vanishes,
/// a step fails to clear its target, or the step budget runs out.
pub fn reduce(ctx: &GroupContext, x: &TriMatrix) -> Option<TriMatrix> {
    let n = ctx.n();
    let t = ctx.tower();
    let mut x = x.clone();
    for _ in 0..4 * n * n {
        // smallest column with two nonzeros, lowest entry as pivot
        let pivot = (2..=n).find_map(|j| {
            let rows: Vec<usize> = (1..j).filter(|&r| !x.entry(r, j).is_zero()).collect();
            (rows.len() >= 2).then(|| (rows[rows.len() - 1], j, rows[rows.len() - 2]))
        });
        let Some((i, j, k)) = pivot else { return Some(x) };
        let xij = x.entry(i, j);
        let div = if k == n + 1 - j { t.add(xij, t.frobenius_q(xij)) } else { xij };
        let c = t.div(x.entry(k, j), div)?;
        let g = TriMatrix::elementary(n, t, k, i, t.neg(c)).ok()?.plus_one();
        let y = ctx.act(&g, &x);
        if !y.entry(k, j).is_zero() {
            return None;
        }
        x = y;
    }
    None
}

/// Result of [`canonicalize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub partition: TwistedSetPartition,
    /// Whether the orbit search was needed.
    pub fallback: bool,
}

/// The twisted partition `η` with `x_η ∈ G·x`.
pub fn canonicalize(ctx: &GroupContext, x: &TriMatrix) -> Result<Canonical> {
    if let Some(y) = reduce(ctx, x) {
        return Ok(Canonical { partition: partition_of_monomial(&y)?, fallback: false });
    }
    Ok(Canonical { partition: canonicalize_bfs(ctx, x)?, fallback: true })
}

/// Search of the orbit of `x` for its monomial member.
pub fn canonicalize_bfs(ctx: &GroupContext, x: &TriMatrix) -> Result<TwistedSetPartition> {
    let u = ctx.u_space();
    let gens = action_matrices(ctx, u, Action::Dagger, &ctx.g_generators());
    let start = u.index_of(x).ok_or_else(|| Error::Spec("element is not in u".into()))?;
    let member = orbit_bfs(u.codec(), &gens, start)
        .into_iter()
        .map(|i| u.element(i))
        .find(is_monomial)
        .ok_or_else(|| Error::Verification("orbit has no monomial member".into()))?;
    partition_of_monomial(&member)
}

/// `|{i<j<k<l : j⌢k ∈ ν, i⌢l ∈ η}|`.
pub fn nst(eta: &TwistedSetPartition, nu: &TwistedSetPartition) -> usize {
    eta.arcs.iter().map(|&(i, l, _)| nu.arcs.iter().filter(|&&(j, k, _)| i < j && k < l).count()).sum()
}

/// Whether some `i⌢j ∈ η` has `i⌢k` or `k⌢j` in `ν` with `i < k < j`.
pub fn blocked(eta: &TwistedSetPartition, nu: &TwistedSetPartition) -> bool {
    eta.arcs
        .iter()
        .any(|&(i, j, _)| nu.arcs.iter().any(|&(a, b, _)| (a == i && i < b && b < j) || (b == j && i < a && a < j)))
}

/// `χ^η(u_ν)` from the closed form, given `χ^η(1)`.
pub fn formula_value(
    eta: &TwistedSetPartition,
    nu: &TwistedSetPartition,
    degree: u64,
    t: &FieldTower,
    theta: Theta,
) -> Result<CycloValue> {
    let p = t.p();
    if blocked(eta, nu) {
        return Ok(CycloValue::zero(p));
    }
    let s = eta
        .arcs
        .iter()
        .filter_map(|&(i, j, a)| nu.label(i, j).map(|b| t.mul(a, b)))
        .fold(Fe::ZERO, |acc, v| t.add(acc, v));
    if !t.in_fq(s) {
        return Err(Error::Verification(format!("label sum for {eta}, {nu} is not in F_q")));
    }
    let e = t.char_exponent(theta, s)?;
    let m = nst(eta, nu) as u32;
    let qm = (t.q() as u64).pow(m);
    if !degree.is_multiple_of(qm) {
        return Err(Error::Verification(format!("χ^η(1) = {degree} not divisible by q^{m}")));
    }
    let mag = BigInt::from(degree / qm);
    let v = CycloValue::root_power(p, e as i64).scale(&mag);
    Ok(if m % 2 == 1 { -&v } else { v })
}

/// Splits `η` into its mirror orbits, ordered by left endpoint.
pub fn factor_elementary(eta: &TwistedSetPartition, t: &FieldTower) -> Vec<TwistedSetPartition> {
    eta.orbit_reps()
        .into_iter()
        .map(|arc| TwistedSetPartition::new(eta.n, t, &[arc]).expect("sub-partition of a valid partition"))
        .collect()
}

/// The two degree formulas for an elementary `η`, read off its representative arc `i⌢j`
/// (smaller left endpoint, so `i < j̄` for a mirror pair).
pub fn lemma_degree(eta: &TwistedSetPartition, q: u64) -> Option<u64> {
    let reps = eta.orbit_reps();
    let [(i, j, _)] = reps[..] else { return None };
    let n = eta.n;
    let exp = if j == n + 1 - i {
        if n.is_multiple_of(2) {
            2 * (n - 2 * i)
        } else {
            2 * (n + 1 - 2 * i)
        }
    } else if n.is_multiple_of(2) || 2 * j <= n + 1 {
        2 * (j - i - 1)
    } else {
        2 * (j - i)
    };
    Some(q.pow(exp as u32))
}

/// Brute-force tables of `UU_n(F_{q^2})` indexed by twisted partitions.
pub struct UnitaryTables {
    pub theory: Theory,
    pub superclasses: SuperclassTable,
    pub characters: SupercharTable,
    pub partitions: Vec<TwistedSetPartition>,
    /// Table column of `u_η` for each partition.
    pub column: Vec<usize>,
    /// Table row of `χ^η` for each partition.
    pub row: Vec<usize>,
}

impl UnitaryTables {
    pub fn build(ctx: Arc<GroupContext>, opts: TheoryOptions) -> Result<Self> {
        if ctx.spec().family != Family::UU {
            return Err(Error::Spec("unitary checks need family UU".into()));
        }
        let theory = Theory::build(ctx.clone(), opts)?;
        let (superclasses, characters) = theory.tables()?;
        let t = ctx.tower();
        let partitions = enumerate_twisted(ctx.n(), t);
        let mut col_of_orbit = vec![usize::MAX; theory.primal().len()];
        for (c, class) in superclasses.classes.iter().enumerate() {
            col_of_orbit[class.orbit] = c;
        }
        let mut column = Vec::with_capacity(partitions.len());
        let mut row = Vec::with_capacity(partitions.len());
        for eta in &partitions {
            let x = ctx
                .u_space()
                .index_of(&rep_matrix(eta, t))
                .ok_or_else(|| Error::Verification(format!("x_η ∉ u for {eta}")))?;
            column.push(col_of_orbit[theory.primal().orbit_of(x)]);
            row.push(theory.dual().orbit_of(lambda_index(&ctx, eta)?));
        }
        Ok(UnitaryTables { theory, superclasses, characters, partitions, column, row })
    }

    pub fn ctx(&self) -> &Arc<GroupContext> {
        self.theory.ctx()
    }

    /// `|H·λ_η|` by brute force.
    pub fn brute_degree(&self, eta: &TwistedSetPartition) -> Result<u64> {
        let idx = lambda_index(self.ctx(), eta)?;
        Ok(self.theory.sub_sizes()[self.theory.dual().orbit_of(idx)] as u64)
    }

    /// `χ^η(1)` as the product of brute-force elementary degrees.
    pub fn factored_degree(&self, eta: &TwistedSetPartition) -> Result<u64> {
        factor_elementary(eta, self.ctx().tower()).iter().map(|f| self.brute_degree(f)).product()
    }
}

/// Outcome of the closed-form comparison over all `(η, ν)`.
#[derive(Clone, Debug)]
pub struct GridReport {
    pub size: usize,
    /// `(η, ν)` index pairs where the closed form differs from the table.
    pub failures: Vec<(usize, usize)>,
    /// Pairs where exactly one side vanishes.
    pub zero_mismatches: usize,
    pub degree_mismatches: Vec<usize>,
}

impl GridReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.zero_mismatches == 0 && self.degree_mismatches.is_empty()
    }

    /// One line per `η`, a `.` or `X` per `ν`.
    pub fn render(&self, tables: &UnitaryTables) -> String {
        let mut out = String::new();
        for (a, eta) in tables.partitions.iter().enumerate() {
            let line: String =
                (0..self.size).map(|b| if self.failures.contains(&(a, b)) { 'X' } else { '.' }).collect();
            out.push_str(&format!("{line}  {eta}\n"));
        }
        out
    }
}

pub fn formula_grid(tables: &UnitaryTables) -> Result<GridReport> {
    let t = tables.ctx().tower();
    let theta = tables.theory.options().theta;
    let parts = &tables.partitions;
    let degrees: Vec<u64> = parts.iter().map(|e| tables.factored_degree(e)).collect::<Result<_>>()?;
    let degree_mismatches: Vec<usize> =
        (0..parts.len()).filter(|&a| tables.characters.rows[tables.row[a]].degree != degrees[a]).collect();
    let cells = tables.theory.options().exec.map(parts.len() * parts.len(), |idx| {
        let (a, b) = (idx / parts.len(), idx % parts.len());
        let want = &tables.characters.rows[tables.row[a]].values[tables.column[b]];
        let got = formula_value(&parts[a], &parts[b], degrees[a], t, theta);
        (got.as_ref().ok() == Some(want), got.map(|g| g.is_zero() != want.is_zero()).unwrap_or(true))
    });
    let failures =
        cells.iter().enumerate().filter(|(_, c)| !c.0).map(|(idx, _)| (idx / parts.len(), idx % parts.len())).collect();
    let zero_mismatches = cells.iter().filter(|c| c.1).count();
    Ok(GridReport { size: parts.len(), failures, zero_mismatches, degree_mismatches })
}

/// Twisted partitions, superclasses and supercharacters are equinumerous, and
/// `{x_η}`, `{λ_η}` are transversals.
pub fn indexing_checks(tables: &UnitaryTables) -> Vec<CheckOutcome> {
    let n_parts = tables.partitions.len();
    let cols: BTreeSet<usize> = tables.column.iter().copied().collect();
    let rows: BTreeSet<usize> = tables.row.iter().copied().collect();
    vec![
        CheckOutcome::new(
            "twisted partitions = superclasses = supercharacters",
            n_parts == tables.superclasses.classes.len() && n_parts == tables.characters.rows.len(),
            format!(
                "{n_parts} partitions, {} superclasses, {} supercharacters",
                tables.superclasses.classes.len(),
                tables.characters.rows.len()
            ),
        ),
        CheckOutcome::new(
            "x_η meet every superclass once",
            cols.len() == n_parts && n_parts == tables.superclasses.classes.len(),
            "",
        ),
        CheckOutcome::new(
            "λ_η meet every dual orbit once",
            rows.len() == n_parts && n_parts == tables.characters.rows.len(),
            "",
        ),
    ]
}

/// Rows multiply over the elementary factors.
pub fn product_check(tables: &UnitaryTables) -> CheckOutcome {
    let t = tables.ctx().tower();
    let pos = |e: &TwistedSetPartition| tables.partitions.binary_search(e).expect("enumerated");
    let mut bad = 0;
    for (a, eta) in tables.partitions.iter().enumerate() {
        let factors = factor_elementary(eta, t);
        if factors.len() < 2 {
            continue;
        }
        let full = &tables.characters.rows[tables.row[a]].values;
        let p = tables.theory.p();
        let mut prod = vec![CycloValue::one(p); full.len()];
        for f in &factors {
            let r = &tables.characters.rows[tables.row[pos(f)]].values;
            for (x, y) in prod.iter_mut().zip(r) {
                *x = &*x * y;
            }
        }
        if &prod != full {
            bad += 1;
        }
    }
    CheckOutcome::new("χ^η is the product of its elementary factors", bad == 0, format!("{bad} failures"))
}

/// `u_{λ_η}` against `{x ∈ u : x_{ij} = 0 if i⌢k ∈ η, j < k, j ≤ (n+1)/2}`.
pub fn a2ulambda_check(tables: &UnitaryTables) -> Result<CheckOutcome> {
    let ctx = tables.ctx();
    let u = ctx.u_space();
    let n = ctx.n();
    let d = ctx.tower().degree();
    let amb = ctx.ambient();
    let mut bad = Vec::new();
    for eta in &tables.partitions {
        let lam = lambda_functional(ctx, eta)?;
        let (l, _, gl) = ctx.sub_l_r_g(&ctx.extend_functional(&lam));
        let mut eqs = Vec::new();
        for (m, &(i, j)) in amb.positions().iter().enumerate() {
            let forbidden = 2 * j <= n + 1 && eta.arcs.iter().any(|&(a, k, _)| a == i && j < k);
            if forbidden {
                for s in 0..d {
                    let mut e = vec![0u32; amb.flat_dim()];
                    e[m * d + s] = 1;
                    eqs.push(e);
                }
            }
        }
        let described = u.intersect(&ctx.g_space().solve_subspace(&eqs));
        if !described.same_subspace(&u.intersect(&l)) || !described.same_subspace(&u.intersect(&gl)) {
            bad.push(eta.to_string());
        }
    }
    Ok(CheckOutcome::new(
        "u_λη has the described zero pattern",
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} partitions", tables.partitions.len())
        } else {
            format!("differs for {}", bad.join("; "))
        },
    ))
}

/// Every degree is a power of `q^2`; the detail lists the degree multiset.
pub fn ennola_degree_check(ch: &SupercharTable, q: u64) -> CheckOutcome {
    let q2 = q * q;
    let is_power = |mut d: u64| {
        while d > 1 && d.is_multiple_of(q2) {
            d /= q2;
        }
        d == 1
    };
    let degrees = ch.degrees();
    let ok = degrees.iter().all(|&d| is_power(d));
    let mut counts: Vec<(u64, usize)> = Vec::new();
    for d in degrees {
        match counts.last_mut() {
            Some((v, c)) if *v == d => *c += 1,
            _ => counts.push((d, 1)),
        }
    }
    let detail = counts.iter().map(|(d, c)| format!("{d}×{c}")).collect::<Vec<_>>().join(" ");
    CheckOutcome::new("degrees are powers of q^2", ok, detail)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeAuditRow {
    pub partition: TwistedSetPartition,
    pub self_arc: bool,
    pub brute: u64,
    pub lemma: u64,
}

impl DegreeAuditRow {
    pub fn agrees(&self) -> bool {
        self.brute == self.lemma
    }
}

/// Brute-force `|H·λ_η|` against the lemma for one elementary `η` per arc position (labels do not matter).
pub fn degree_audit(tables: &UnitaryTables) -> Result<Vec<DegreeAuditRow>> {
    let q = tables.ctx().tower().q() as u64;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for eta in tables.partitions.iter().filter(|e| e.is_elementary()) {
        let (i, j, _) = eta.orbit_reps()[0];
        let brute = tables.brute_degree(eta)?;
        let lemma = lemma_degree(eta, q).expect("elementary");
        if seen.insert((i, j, brute)) {
            out.push(DegreeAuditRow { partition: eta.clone(), self_arc: j == eta.n + 1 - i, brute, lemma });
        }
    }
    Ok(out)
}

pub fn render_degree_audit(rows: &[DegreeAuditRow]) -> String {
    let mut out = String::from("arc  kind       brute  lemma  status\n");
    for r in rows {
        let (i, j, _) = r.partition.orbit_reps()[0];
        out.push_str(&format!(
            "{i}⌢{j}  {:<9}  {:>5}  {:>5}  {}\n",
            if r.self_arc { "self-arc" } else { "pair" },
            r.brute,
            r.lemma,
            if r.agrees() { "ok" } else { "DIFFERS" }
        ));
    }
    out
}
