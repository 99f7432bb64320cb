use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{SupercharRow, SupercharTable, SuperclassTable, Theory, TheoryKind, TheoryOptions};
use crate::cyclotomic::{inner_product, CycloValue};
use crate::error::{Error, Result};
use crate::gf::Theta;
use crate::involution_group::{CheckOutcome, Family, GroupContext, GroupSpec, Springer};
use crate::orbits::{action_matrices, dual_matrices, left_multiplication_check, primal_orbits, Action, OrbitIndex};
use crate::space::{pairing_matrix, Scalars, SpaceBasis};
use crate::triangular::TriMatrix;

const FULL_CONSTANCY_LIMIT: usize = 1 << 24;
const FULL_CONJUGATION_LIMIT: usize = 512;
const FULL_PAIRS_LIMIT: usize = 1 << 18;
const FULL_LEFT_PRODUCTS_LIMIT: usize = 1 << 22;

/// Axiom checks on a pair of tables: counts, constancy, conjugation closure,
/// orthogonality, integral norms and the regular-character decomposition.
pub fn axiom_checks(t: &Theory, sc: &SuperclassTable, ch: &SupercharTable, seed: u64) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    out.push(CheckOutcome::new(
        "|X| = |K|",
        sc.classes.len() == ch.rows.len(),
        format!("{} superclasses, {} supercharacters", sc.classes.len(), ch.rows.len()),
    ));

    let id_col = sc.identity_column();
    let trivial = ch
        .rows
        .first()
        .is_some_and(|r| r.lambda.iter().all(|&d| d == 0) && r.values.iter().all(|v| *v == CycloValue::one(t.p())));
    out.push(CheckOutcome::new("first row is the trivial character", trivial, ""));

    out.push(constancy(t, sc, ch, seed));
    out.push(conjugation_closure(t, sc, seed));

    let sizes = sc.sizes();
    let order = BigInt::from(t.elements().len());
    let n = ch.rows.len();
    let products: Vec<Vec<Option<bool>>> = t.options().exec.map(n, |a| {
        (a..n)
            .map(|b| {
                let ip = inner_product(&ch.rows[a].values, &ch.rows[b].values, &sizes, &order).ok()?;
                Some(if a == b { ip.as_integer().is_some_and(|v| *v > BigInt::from(0)) } else { ip.is_zero() })
            })
            .collect()
    });
    let mut orth_bad = 0;
    let mut norm_bad = 0;
    for row in &products {
        for (off, ok) in row.iter().enumerate() {
            if *ok != Some(true) {
                if off == 0 {
                    norm_bad += 1;
                } else {
                    orth_bad += 1;
                }
            }
        }
    }
    out.push(CheckOutcome::new(
        "distinct supercharacters are orthogonal",
        orth_bad == 0,
        format!("{} pairs, {orth_bad} failures", n * n.saturating_sub(1) / 2),
    ));
    out.push(CheckOutcome::new("norms are positive integers", norm_bad == 0, format!("{norm_bad} failures")));

    let mut regular_ok = true;
    for col in 0..sc.classes.len() {
        let mut acc = CycloValue::zero(t.p());
        for r in &ch.rows {
            acc = &acc + &r.values[col].scale(&BigInt::from(r.n_lambda));
        }
        let want = if col == id_col { CycloValue::from_int(t.p(), order.clone()) } else { CycloValue::zero(t.p()) };
        regular_ok &= acc == want;
    }
    out.push(CheckOutcome::new("Σ n_λ χ_λ is the regular character", regular_ok, ""));

    let degrees_ok = ch.rows.iter().all(|r| {
        r.values[id_col].as_integer() == Some(&BigInt::from(r.degree)) && r.degree * r.n_lambda == r.orbit_size as u64
    });
    out.push(CheckOutcome::new("χ_λ(1) = |G·λ| / n_λ", degrees_ok, ""));
    out
}

fn constancy(t: &Theory, sc: &SuperclassTable, ch: &SupercharTable, seed: u64) -> CheckOutcome {
    let full = t.elements().len() * t.dual().codec().size() <= FULL_CONSTANCY_LIMIT;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks: Vec<Vec<usize>> = sc
        .classes
        .iter()
        .map(|c| {
            if full || c.members.len() <= 4 {
                c.members.clone()
            } else {
                (0..4).map(|_| c.members[rng.random_range(0..c.members.len())]).collect()
            }
        })
        .collect();
    let members = t.dual().members();
    let bad: usize = t
        .options()
        .exec
        .map(ch.rows.len(), |r| {
            let row = &ch.rows[r];
            let o = t.dual().orbit_of(row.lambda_index);
            let mut bad = 0;
            for (col, ms) in picks.iter().enumerate() {
                for &m in ms {
                    match t.value_at(&members[o], row.n_lambda, t.space_index_of(m)) {
                        Ok(v) if v == row.values[col] => {}
                        _ => bad += 1,
                    }
                }
            }
            bad
        })
        .into_iter()
        .sum();
    let detail = if full { "every member".to_string() } else { format!("4 sampled members per class, seed {seed}") };
    CheckOutcome::new("supercharacters are constant on superclasses", bad == 0, format!("{detail}; {bad} mismatches"))
}

fn conjugators(t: &Theory, seed: u64) -> Vec<usize> {
    let n = t.elements().len();
    if n <= FULL_CONJUGATION_LIMIT {
        (0..n).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..32).map(|_| rng.random_range(0..n)).collect()
    }
}

fn conjugation_closure(t: &Theory, sc: &SuperclassTable, seed: u64) -> CheckOutcome {
    let ws = conjugators(t, seed);
    let els = t.elements();
    let bad: usize = t
        .options()
        .exec
        .map(els.len(), |v| {
            ws.iter()
                .filter(|&&w| {
                    let c = els[w].mul(&els[v]).unwrap().mul(&els[w].inverse().unwrap()).unwrap();
                    t.element_index(&c).map(|i| sc.class_of[i]) != Some(sc.class_of[v])
                })
                .count()
        })
        .into_iter()
        .sum();
    let detail = if ws.len() == els.len() {
        "all conjugators".to_string()
    } else {
        format!("{} sampled conjugators, seed {seed}", ws.len())
    };
    CheckOutcome::new("superclasses are unions of conjugacy classes", bad == 0, format!("{detail}; {bad} failures"))
}

/// The subspace `s` with `S = 1 + s` from which `χ_λ` is induced.
pub fn induction_subspace(t: &Theory, row: &SupercharRow) -> SpaceBasis {
    let ctx = t.ctx();
    let lambda = t.functional(&row.lambda);
    match t.kind() {
        TheoryKind::Involution => ctx.sub_l_r_g(&ctx.extend_functional(&lambda)).2,
        TheoryKind::AlgebraGroup => ctx.algebra_l(&lambda),
    }
}

/// Conjugates `h g h^{-1}` over the whole group, with multiplicity, for each class representative.
pub fn conjugate_counts(t: &Theory, sc: &SuperclassTable) -> Vec<Vec<(usize, u32)>> {
    let els = t.elements();
    let inverses: Vec<_> = els.iter().map(|h| h.inverse().unwrap()).collect();
    t.options().exec.map(sc.classes.len(), |c| {
        let g = &sc.classes[c].rep;
        let mut counts: HashMap<usize, u32> = HashMap::new();
        for (h, hi) in els.iter().zip(&inverses) {
            let x = h.mul(g).unwrap().mul(hi).unwrap();
            *counts.entry(t.element_index(&x).expect("group is closed")).or_default() += 1;
        }
        let mut v: Vec<_> = counts.into_iter().collect();
        v.sort_unstable();
        v
    })
}

/// Induced character `Ind_S^U(θ∘λ∘f)` on each superclass, with `|S|`.
///
/// Fails if `S` is not closed or the restriction is not multiplicative.
pub fn induction_oracle(
    t: &Theory,
    row: &SupercharRow,
    conj: &[Vec<(usize, u32)>],
    seed: u64,
) -> Result<(Vec<CycloValue>, usize)> {
    let s_space = induction_subspace(t, row);
    let els = t.elements();
    let in_s: Vec<bool> = els.iter().map(|g| t.in_subgroup(&s_space, g)).collect();
    let s: Vec<usize> = (0..els.len()).filter(|&i| in_s[i]).collect();
    let psi = |e: usize| t.char_exponent(t.space_index_of(e), row.lambda_index);
    let p = t.p();

    let pairs: Vec<(usize, usize)> = if s.len() * s.len() <= FULL_PAIRS_LIMIT {
        s.iter().flat_map(|&a| s.iter().map(move |&b| (a, b))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..4096).map(|_| (s[rng.random_range(0..s.len())], s[rng.random_range(0..s.len())])).collect()
    };
    for (a, b) in pairs {
        let ab = t.element_index(&els[a].mul(&els[b]).unwrap()).expect("group is closed");
        if !in_s[ab] {
            return Err(Error::Verification(format!("U_λ not closed for λ = {:?}", row.lambda)));
        }
        if psi(ab) != (psi(a) + psi(b)) % p {
            return Err(Error::Verification(format!("θ∘λ∘f not multiplicative on U_λ for λ = {:?}", row.lambda)));
        }
    }

    let values = conj
        .iter()
        .map(|cs| {
            let mut counts = vec![0i64; p as usize];
            for &(e, m) in cs {
                if in_s[e] {
                    counts[psi(e) as usize] += m as i64;
                }
            }
            CycloValue::from_exponent_counts(p, &counts)
                .div_exact(&BigInt::from(s.len()))
                .ok_or_else(|| Error::Verification("induced value not integral".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((values, s.len()))
}

/// Every row equals its induced character, and `χ_λ(1) = [U : U_λ]`.
pub fn induction_report(t: &Theory, sc: &SuperclassTable, ch: &SupercharTable, seed: u64) -> CheckOutcome {
    let conj = conjugate_counts(t, sc);
    let n = t.elements().len();
    let results = t.options().exec.map(ch.rows.len(), |r| {
        let row = &ch.rows[r];
        match induction_oracle(t, row, &conj, seed) {
            Ok((vals, s)) => vals == row.values && n / s == row.degree as usize && n.is_multiple_of(s),
            Err(_) => false,
        }
    });
    let bad: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i).collect();
    CheckOutcome::new(
        "χ_λ = Ind(θ∘λ∘f) from U_λ",
        bad.is_empty(),
        if bad.is_empty() { format!("{} rows", ch.rows.len()) } else { format!("failing rows {bad:?}") },
    )
}

/// The superclasses of `U` are the nonempty sets `U ∩ K_g` for the ambient pattern group.
pub fn intersection_check(t: &Theory, sc: &SuperclassTable) -> Result<CheckOutcome> {
    let ctx = t.ctx();
    if t.kind() != TheoryKind::Involution {
        return Err(Error::Spec("intersection check needs a family with an involution".into()));
    }
    let spec = ctx.spec();
    let amb_spec = GroupSpec { family: Family::UT, poset: Some(ctx.poset().clone()), ..spec.clone() };
    let amb = GroupContext::with_scalars(&amb_spec, ctx.ambient().scalars())?;
    let orbits = primal_orbits(&amb, t.options().exec);
    let mut fwd: HashMap<usize, usize> = HashMap::new();
    let mut back: HashMap<usize, usize> = HashMap::new();
    let mut bad = Vec::new();
    for (i, g) in t.elements().iter().enumerate() {
        let a = orbits.orbit_of(amb.g_space().index_of(&g.clone().minus_one()).expect("U ⊂ G"));
        let c = sc.class_of[i];
        if *fwd.entry(c).or_insert(a) != a || *back.entry(a).or_insert(c) != c {
            bad.push(c);
        }
    }
    bad.sort_unstable();
    bad.dedup();
    Ok(CheckOutcome::new(
        "superclasses are the sets U ∩ K_g",
        bad.is_empty(),
        format!("{} superclasses, {} ambient classes meet U, offending {bad:?}", sc.classes.len(), back.len()),
    ))
}

/// Superclasses are unions of left `G`-orbits: `g x ∈ u` stays in the superclass of `x`.
/// Uses every `g` when `|u|·|G| ≤ 2^22`, otherwise a seeded sample of `G`.
pub fn left_multiplication_report(t: &Theory, seed: u64) -> Result<CheckOutcome> {
    if t.kind() != TheoryKind::Involution {
        return Err(Error::Spec("left multiplication check needs a family with an involution".into()));
    }
    let ctx = t.ctx();
    let group = ctx.enumerate_g()?;
    let u = ctx.u_space().size();
    let (sample, detail) = if u * group.len() <= FULL_LEFT_PRODUCTS_LIMIT {
        (group, "every g ∈ G".to_string())
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = (FULL_LEFT_PRODUCTS_LIMIT / u).max(1);
        let picked: Vec<TriMatrix> = (0..m).map(|_| group[rng.random_range(0..group.len())].clone()).collect();
        (picked, format!("{m} sampled g ∈ G, seed {seed}"))
    };
    Ok(match left_multiplication_check(ctx, t.primal(), &sample) {
        None => CheckOutcome::new("superclasses are unions of left G-orbits", true, detail),
        Some((x, g)) => CheckOutcome::new(
            "superclasses are unions of left G-orbits",
            false,
            format!("{detail}; x = {:?}, g = {:?}", x.to_entries(), g.to_entries()),
        ),
    })
}

fn rebuild(ctx: &Arc<GroupContext>, opts: TheoryOptions) -> Result<(SuperclassTable, SupercharTable)> {
    Theory::build(ctx.clone(), opts)?.tables()
}

/// Cayley and truncated-log tables coincide (same partition of `U`, same rows).
pub fn springer_independence(ctx: &Arc<GroupContext>, opts: TheoryOptions) -> Result<CheckOutcome> {
    let a = rebuild(ctx, TheoryOptions { springer: Springer::Cayley, ..opts })?;
    let b = rebuild(ctx, TheoryOptions { springer: Springer::Log, ..opts })?;
    let same_classes = a.0.same_partition(&b.0);
    let same_rows = a.1 == b.1;
    Ok(CheckOutcome::new(
        "cayley and log give the same theory",
        same_classes && same_rows,
        format!("partition equal: {same_classes}, rows equal: {same_rows}"),
    ))
}

/// Standard and alternate `θ` give the same set of rows.
pub fn theta_independence(ctx: &Arc<GroupContext>, opts: TheoryOptions) -> Result<CheckOutcome> {
    let a = rebuild(ctx, TheoryOptions { theta: Theta::Standard, ..opts })?;
    let b = rebuild(ctx, TheoryOptions { theta: Theta::Alternate, ..opts })?;
    let same = a.0.same_partition(&b.0) && a.1.row_set() == b.1.row_set();
    Ok(CheckOutcome::new("θ choice does not change the set of supercharacters", same, ""))
}

/// The theory over `F_q`-scalars agrees with the one over `F_p`-scalars.
pub fn scalar_independence(ctx: &Arc<GroupContext>, opts: TheoryOptions) -> Result<CheckOutcome> {
    let fp = Arc::new(GroupContext::with_scalars(ctx.spec(), Scalars::Fp)?);
    let a = rebuild(ctx, opts)?;
    let b = rebuild(&fp, opts)?;
    let same_classes = a.0.same_partition(&b.0);
    let same_rows = a.1.row_set() == b.1.row_set();
    Ok(CheckOutcome::new(
        "F_q and F_p scalars give the same theory",
        same_classes && same_rows,
        format!("partition equal: {same_classes}, row sets equal: {same_rows}"),
    ))
}

/// Algebra groups: the left orbit `Gλ` is `{μ : μ = λ on l_λ}`.
pub fn glambda_check(t: &Theory) -> Result<CheckOutcome> {
    if t.kind() != TheoryKind::AlgebraGroup {
        return Err(Error::Spec("the Gλ description applies to algebra groups".into()));
    }
    let ctx = t.ctx();
    let g = ctx.g_space();
    let p = t.p() as u64;
    let left = dual_matrices(g, &action_matrices(ctx, g, Action::Left, &ctx.g_generators()));
    let lo = OrbitIndex::build(t.p(), g.fp_dim(), &left, t.options().exec);
    let members = lo.members();
    let pm = pairing_matrix(g, Theta::Standard);
    let codec = g.codec();
    let mut bad = 0;
    for &rep in t.dual().reps() {
        let lambda = codec.decode(rep);
        let l = ctx.algebra_l(&t.functional(&lambda));
        let covs: Vec<Vec<u32>> = l
            .fp_basis_flat()
            .iter()
            .map(|y| pm.vec_mul(&g.coords(&g.ambient().unflatten(y)).expect("l ⊂ g")))
            .collect();
        let lam_vals: Vec<u64> = covs.iter().map(|c| dot(c, &lambda, p)).collect();
        let want: Vec<usize> = (0..codec.size())
            .filter(|&mu| {
                let m = codec.decode(mu);
                covs.iter().zip(&lam_vals).all(|(c, &v)| dot(c, &m, p) == v)
            })
            .collect();
        if want != members[lo.orbit_of(rep)] {
            bad += 1;
        }
    }
    Ok(CheckOutcome::new(
        "Gλ = {μ : μ|l_λ = λ|l_λ}",
        bad == 0,
        format!("{} representatives, {bad} failures", t.dual().len()),
    ))
}

fn dot(a: &[u32], b: &[u32], p: u64) -> u64 {
    a.iter().zip(b).map(|(&x, &y)| x as u64 * y as u64).sum::<u64>() % p
}
