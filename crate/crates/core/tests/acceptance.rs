//! Acceptance criteria AC1–AC10, one PASS/FAIL line each.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use superchar::gf::{make_tower, Fe};
use superchar::involution_group::{Family, GroupContext, GroupSpec};
use superchar::orbits::{dual_orbits, left_multiplication_check, primal_orbits};
use superchar::par::Exec;
use superchar::sct::{
    axiom_checks, induction_report, intersection_check, springer_independence, theta_independence, Theory,
    TheoryOptions,
};
use superchar::triangular::{MirrorPoset, TriMatrix};
use superchar::unitary::{
    degree_audit, ennola_degree_check, enumerate_twisted, formula_grid, render_degree_audit, UnitaryTables,
};

const SEED: u64 = 0x5eed;

fn spec(f: Family, n: usize, p: u32, k: u32) -> GroupSpec {
    GroupSpec::new(f, n, p, 1, k)
}

fn ctx(s: &GroupSpec) -> Arc<GroupContext> {
    Arc::new(GroupContext::new(s).expect("valid spec"))
}

fn axiom_specs() -> Vec<GroupSpec> {
    vec![
        spec(Family::UT, 2, 3, 1),
        spec(Family::UT, 3, 3, 1),
        spec(Family::UO, 3, 3, 1),
        spec(Family::UO, 4, 3, 1),
        spec(Family::USp, 4, 3, 1),
        spec(Family::UU, 2, 3, 2),
        spec(Family::UU, 3, 3, 2),
    ]
}

fn theory(s: &GroupSpec) -> Theory {
    Theory::build(ctx(s), TheoryOptions::default()).expect("theory builds")
}

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn ac1() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for s in axiom_specs() {
        let t = theory(&s);
        let (sc, ch) = t.tables().unwrap();
        let failed: Vec<String> =
            axiom_checks(&t, &sc, &ch, SEED).into_iter().filter(|c| !c.passed).map(|c| c.name).collect();
        ok &= failed.is_empty();
        notes.push(format!(
            "{} {}×{}{}",
            s.label(),
            sc.classes.len(),
            ch.rows.len(),
            if failed.is_empty() { String::new() } else { format!(" failed {failed:?}") }
        ));
    }
    (ok, notes.join(", "))
}

fn ac2() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for s in axiom_specs() {
        let t = theory(&s);
        let (sc, ch) = t.tables().unwrap();
        let r = induction_report(&t, &sc, &ch, SEED);
        ok &= r.passed;
        notes.push(format!("{}: {}", s.label(), r.detail));
    }
    (ok, notes.join(", "))
}

fn ac3() -> Outcome {
    let mut specs = axiom_specs();
    specs.push(spec(Family::UU, 4, 3, 2));
    specs.push(spec(Family::USp, 4, 5, 1));
    specs.push(spec(Family::UO, 4, 3, 1).with_poset(MirrorPoset::type_d_finer(4).unwrap()));
    let mut ok = true;
    let mut notes = Vec::new();
    for s in specs {
        let c = ctx(&s);
        let a = primal_orbits(&c, Exec::Parallel).len();
        let b = dual_orbits(&c, Exec::Parallel).0.len();
        ok &= a == b;
        notes.push(format!("{} {a}/{b}", s.label()));
    }
    (ok, notes.join(", "))
}

fn ac4() -> Outcome {
    let specs = [
        spec(Family::UO, 4, 3, 1),
        spec(Family::USp, 4, 3, 1),
        spec(Family::UU, 3, 3, 2),
        spec(Family::UO, 4, 3, 1).with_poset(MirrorPoset::type_d_finer(4).unwrap()),
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    for s in specs {
        let t = theory(&s);
        let sc = t.superclasses();
        let r = intersection_check(&t, &sc).unwrap();
        let group = t.ctx().enumerate_g().unwrap();
        let left = left_multiplication_check(t.ctx(), t.primal(), &group).is_none();
        ok &= r.passed && left;
        notes.push(format!(
            "{}: {} classes{}",
            s.label(),
            sc.classes.len(),
            if r.passed && left { "" } else { " MISMATCH" }
        ));
    }
    (ok, notes.join(", "))
}

fn ac5() -> Outcome {
    let t3 = make_tower(3, 1, 1).unwrap();
    let e = |i, j, a: Fe| TriMatrix::elementary(4, &t3, i, j, a).unwrap();
    let m1 = t3.neg(Fe::ONE);
    let x1 = e(1, 2, Fe::ONE).add(&e(3, 4, m1)).unwrap();
    let x2 = x1.add(&e(1, 3, Fe::ONE)).unwrap().add(&e(2, 4, m1)).unwrap();
    let full = ctx(&spec(Family::UO, 4, 3, 1));
    let sub = ctx(&spec(Family::UO, 4, 3, 1).with_poset(MirrorPoset::type_d_finer(4).unwrap()));
    let same = |c: &GroupContext| {
        let o = primal_orbits(c, Exec::Parallel);
        let u = c.u_space();
        o.orbit_of(u.index_of(&x1).unwrap()) == o.orbit_of(u.index_of(&x2).unwrap())
    };
    let finer = same(&full) && !same(&sub);

    let block = theory(&spec(Family::UO, 4, 3, 1).with_poset(MirrorPoset::block(4).unwrap()));
    let ut2 = theory(&spec(Family::UT, 2, 3, 1));
    let (bsc, bch) = block.tables().unwrap();
    let (usc, uch) = ut2.tables().unwrap();
    let blocks_match = bsc.classes.len() == usc.classes.len()
        && block.dual().len() == ut2.dual().len()
        && bch.degrees() == uch.degrees();
    (
        finer && blocks_match,
        format!(
            "finer example {}, block poset {} classes degrees {:?} vs UT_2(F_3) {} classes degrees {:?}",
            if finer { "reproduced" } else { "NOT reproduced" },
            bsc.classes.len(),
            bch.degrees(),
            usc.classes.len(),
            uch.degrees()
        ),
    )
}

fn ac6() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (n, p) in [(2, 3), (3, 3), (4, 3), (2, 5), (3, 5), (4, 5)] {
        let start = Instant::now();
        let tables = UnitaryTables::build(ctx(&spec(Family::UU, n, p, 2)), TheoryOptions::default()).unwrap();
        let g = formula_grid(&tables).unwrap();
        ok &= g.passed();
        notes.push(format!(
            "n={n} q={p}: {}² pairs, {} failures, {} zero mismatches ({:.1}s)",
            g.size,
            g.failures.len(),
            g.zero_mismatches,
            start.elapsed().as_secs_f64()
        ));
    }
    (ok, notes.join("; "))
}

fn ac7() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (n, p) in [(1, 3), (2, 3), (3, 3), (4, 3), (2, 5), (3, 5), (4, 5)] {
        let c = ctx(&spec(Family::UU, n, p, 2));
        let parts = enumerate_twisted(n, c.tower()).len();
        let classes = primal_orbits(&c, Exec::Parallel).len();
        ok &= parts == classes;
        notes.push(format!("n={n} q={p}: {parts}/{classes}"));
    }
    let n3 = enumerate_twisted(3, &make_tower(3, 1, 2).unwrap()).len();
    ok &= n3 == 11;
    (ok, notes.join(", "))
}

fn ac8() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for s in [spec(Family::UU, 3, 3, 2), spec(Family::UO, 3, 3, 1)] {
        let r = springer_independence(&ctx(&s), TheoryOptions::default()).unwrap();
        ok &= r.passed;
        notes.push(format!("{} springer {}", s.label(), if r.passed { "same" } else { "DIFFERENT" }));
    }
    for s in axiom_specs() {
        let r = theta_independence(&ctx(&s), TheoryOptions::default()).unwrap();
        ok &= r.passed;
        if !r.passed {
            notes.push(format!("{} θ DIFFERENT", s.label()));
        }
    }
    notes.push(format!("θ checked on {} specs", axiom_specs().len()));
    (ok, notes.join(", "))
}

fn ac9() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for n in 1..=4 {
        let t = theory(&spec(Family::UU, n, 3, 2));
        let (sc, ch) = t.tables().unwrap();
        let r = ennola_degree_check(&ch, 3);
        ok &= r.passed && sc.classes.len() == ch.rows.len();
        notes.push(format!("n={n}: {}", r.detail));
    }
    (ok, notes.join("; "))
}

fn ac10() -> Outcome {
    let mut report = String::new();
    let mut discrepancy = false;
    let mut others = Vec::new();
    for n in 2..=4 {
        let tables = UnitaryTables::build(ctx(&spec(Family::UU, n, 3, 2)), TheoryOptions::default()).unwrap();
        let rows = degree_audit(&tables).unwrap();
        report.push_str(&format!("  UU_{n}(F_9)\n"));
        for line in render_degree_audit(&rows).lines() {
            report.push_str(&format!("    {line}\n"));
        }
        for r in &rows {
            let (i, j, _) = r.partition.orbit_reps()[0];
            if n == 3 && r.self_arc && (i, j) == (1, 3) {
                discrepancy = r.brute == 9 && r.lemma == 81;
            } else if !r.agrees() {
                others.push(format!("n={n} {i}⌢{j}: brute {} lemma {}", r.brute, r.lemma));
            }
        }
    }
    print!("{report}");
    let detail = format!(
        "n-odd self-arc 1⌢3 (n=3): {}; other disagreements: {}",
        if discrepancy { "brute 9 vs lemma 81, reproduced" } else { "NOT reproduced" },
        if others.is_empty() { "none".to_string() } else { others.join(", ") }
    );
    (discrepancy, detail)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1 axioms", ac1),
        ("AC2 induction", ac2),
        ("AC3 orbit duality", ac3),
        ("AC4 intersection", ac4),
        ("AC5 type-D and block poset", ac5),
        ("AC6 unitary formula", ac6),
        ("AC7 twisted indexing", ac7),
        ("AC8 independence", ac8),
        ("AC9 Ennola degrees", ac9),
        ("AC10 degree audit", ac10),
    ];
    let mut all = true;
    for (name, f) in criteria {
        let start = Instant::now();
        let (ok, detail) = match catch_unwind(AssertUnwindSafe(f)) {
            Ok(r) => r,
            Err(e) => {
                let msg =
                    e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
                (false, format!("panicked: {}", msg.unwrap_or_default()))
            }
        };
        all &= ok;
        println!("{} {name} ({:.1}s): {detail}", if ok { "PASS" } else { "FAIL" }, start.elapsed().as_secs_f64());
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
