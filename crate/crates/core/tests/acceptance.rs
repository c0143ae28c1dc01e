//! Acceptance checks. Run with `cargo test -p fhlie-core --test acceptance`;
//! prints one line per criterion and exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use fhlie_core::bounds::{v, BoundParams, FSource};
use fhlie_core::bridge::{ATowerCaps, GroupBridge};
use fhlie_core::freelie::{lyndon_words, witt_dimension, Caps, FreeLieTruncation, GeneratorSet, Tree};
use fhlie_core::frobenius::{check_grading_laws, check_projection_laws, FixedBy, FrobeniusAction, Homogeneous};
use fhlie_core::group::{
    cyclic, dihedral, elementary_abelian_action, symmetric, unitriangular, unitriangular_action, FiniteGroup,
    GroupAction,
};
use fhlie_core::instance::{generate, scramble, Family};
use fhlie_core::kms::{multiplicities_preserved, scan, KmsEngine, Specialization};
use fhlie_core::linalg::{self, Vector};
use fhlie_core::tower::{zero_sum_patterns, CentralizerTower, TowerCaps};
use fhlie_core::universal::{FreeQuotient, QuotientParams};
use fhlie_core::{Exec, Field, Nilpotency};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_in(f: &Field, basis: &[Vector], d: usize, rng: &mut ChaCha8Rng) -> Vector {
    let mut acc = linalg::zero_vec(d);
    for b in basis {
        let c = f.from_code(rng.gen_range(0..f.order())).unwrap();
        linalg::axpy(f, &mut acc, c, b);
    }
    acc
}

fn lie_axioms() -> Outcome {
    let pool: Vec<_> = instance_pool(40, 11)
        .into_iter()
        .filter(|(_, a)| a.field().degree() == 1 && a.dim() <= 16)
        .collect();
    for (name, a) in &pool {
        let t = a.ring().to_table();
        ensure(t.validate().unwrap().is_empty() && dense_is_lie(&t), || format!("{name} rejected"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut redraws = 0;
    let mut kinds = [0usize; 3];
    for trial in 0..1000 {
        let kind = trial % 3;
        let mut attempt = 0;
        let (name, t) = loop {
            // a redraw also moves on to another base instance, since on an
            // abelian one a single antisymmetric change can stay a Lie bracket
            let (name, a) = &pool[(trial + attempt) % pool.len()];
            attempt += 1;
            let f = a.field().clone();
            let d = a.dim();
            let nonzero = |rng: &mut ChaCha8Rng| f.from_i64(rng.gen_range(1..f.order() as i64));
            let mut t = a.ring().to_table();
            let i = rng.gen_range(0..d);
            let mut j = rng.gen_range(0..d);
            let k = rng.gen_range(0..d);
            match kind {
                0 => {
                    while j == i {
                        j = rng.gen_range(0..d);
                    }
                    t.set(i, j, k, f.add(t.get(i, j, k), nonzero(&mut rng)));
                }
                1 => t.set(i, i, k, nonzero(&mut rng)),
                _ => {
                    while j == i {
                        j = rng.gen_range(0..d);
                    }
                    let mut row: Vector = (0..d).map(|m| t.get(i, j, m)).collect();
                    row[k] = f.add(row[k], nonzero(&mut rng));
                    if rng.gen_bool(0.5) {
                        let k2 = rng.gen_range(0..d);
                        row[k2] = f.add(row[k2], nonzero(&mut rng));
                    }
                    t.set_bracket(i, j, &row);
                }
            }
            if !dense_is_lie(&t) {
                break (name, t);
            }
            redraws += 1;
        };
        kinds[kind] += 1;
        ensure(!t.validate().unwrap().is_empty(), || format!("trial {trial} on {name} not flagged"))?;
    }
    Ok(format!(
        "{} base instances, perturbations one-sided/diagonal/antisymmetric = {:?}, {redraws} redraws",
        pool.len(),
        kinds
    ))
}

fn eigen_decomposition() -> Outcome {
    let pool = instance_pool(100, 23);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (name, a) in &pool {
        let f: &Field = a.field();
        let d = a.eigen_decompose();
        let n = a.shape().n;
        let r = a.shape().r;
        ensure(check_projection_laws(&d, a).is_empty(), || format!("{name}: projection laws"))?;
        ensure(check_grading_laws(&d, a).is_empty(), || format!("{name}: grading laws"))?;
        for _ in 0..3 {
            let x = random_vector(f, a.dim(), &mut rng);
            let xh = a.h().apply(f, &x);
            let mut sum = linalg::zero_vec(a.dim());
            for k in 0..n {
                let pk = d.project(k, &x);
                ensure(pk == phi_term(a, &x, k), || format!("{name}: pi_{k} differs from the defining sum"))?;
                ensure(
                    a.phi().apply(f, &pk) == linalg::scale(f, f.pow(a.omega(), k as i64), &pk),
                    || format!("{name}: pi_{k}(x) is not an eigenvector"),
                )?;
                ensure(d.project(k, &pk) == pk, || format!("{name}: pi_{k} not idempotent"))?;
                for j in (0..n).filter(|&j| j != k) {
                    ensure(linalg::is_zero(&d.project(j, &pk)), || format!("{name}: pi_{j} pi_{k} != 0"))?;
                }
                ensure(
                    a.h().apply(f, &pk) == d.project(r * k % n, &xh),
                    || format!("{name}: equivariance at {k}"),
                )?;
                sum = linalg::add(f, &sum, &pk);
            }
            ensure(sum == x, || format!("{name}: projections do not sum to x"))?;
        }
        for s in 0..n {
            for b in d.component(s).basis() {
                ensure(
                    d.component(r * s % n).contains(f, &a.h().apply(f, b)),
                    || format!("{name}: L_{s} h not in L_(r {s})"),
                )?;
                for t in 0..n {
                    for c in d.component(t).basis() {
                        ensure(
                            d.component((s + t) % n).contains(f, &a.ring().bracket(b, c)),
                            || format!("{name}: [L_{s}, L_{t}]"),
                        )?;
                    }
                }
            }
        }
    }
    Ok(format!("{} instances", pool.len()))
}

fn witt_oracle() -> Outcome {
    let mut checked = 0;
    for g in 1..=4usize {
        let lyndon = lyndon_words(g, 8);
        for w in 1..=8 {
            let nk = necklace_count(g, w);
            let listed = lyndon.iter().filter(|x| x.len() == w).count() as u64;
            ensure(witt_dimension(g as u64, w as u64) == nk as u128 && listed == nk, || {
                format!("g={g} w={w}: necklaces {nk}, listed {listed}")
            })?;
            checked += 1;
        }
    }
    let sets = [
        (2, GeneratorSet::new(shape(3, 2, 2), vec![1]).unwrap()),
        (3, GeneratorSet::new(shape(7, 3, 2), vec![1]).unwrap()),
        (4, GeneratorSet::new(shape(3, 2, 2), vec![1, 1]).unwrap()),
    ];
    for (g, gens) in sets {
        let t = FreeLieTruncation::new(gens, 8, None, &Caps::default()).map_err(|e| e.to_string())?;
        let dims = t.dims_by_weight();
        for w in 1..=8 {
            let nk = necklace_count(g, w) as usize;
            ensure(dims[w - 1] == nk, || format!("g={g} w={w}: basis {} vs necklaces {nk}", dims[w - 1]))?;
            if g <= 3 && w <= 5 {
                let span = bracketing_span_dim(g, w, 1_000_003);
                ensure(span == nk, || format!("g={g} w={w}: bracketings span {span} vs {nk}"))?;
            }
        }
    }
    Ok(format!("{checked} necklace counts, truncations up to 4 generators and weight 8"))
}

fn universal_quotient() -> Outcome {
    let s = shape(3, 2, 2);
    let q = FreeQuotient::build(QuotientParams::universal(s, 1, 1, 10), Exec::default()).map_err(|e| e.to_string())?;
    let checks = q.checks(Exec::default());
    ensure(checks.m0_dims.iter().all(|&d| d == 0), || format!("M_0 dims {:?}", checks.m0_dims))?;
    ensure(checks.gamma_dims.iter().all(|&d| d == 0), || format!("gamma dims {:?}", checks.gamma_dims))?;
    ensure(checks.j_invariant && checks.i_invariant && checks.theta_invariant, || "invariance".into())?;
    let est = q.class_estimate();
    let mut candidates: Vec<(String, FrobeniusAction)> = Vec::new();
    for orbits in 1..=3 {
        for cap in 2..=5 {
            for (c, kill) in [(Some(1), true), (None, true), (Some(1), false), (None, false)] {
                if orbits * cap > 8 && !(kill && c.is_some()) {
                    continue;
                }
                let fam = free_nilpotent(s, orbits, cap, c, kill, None);
                let g = generate(&fam, Exec::default()).map_err(|e| e.to_string())?;
                candidates.push((format!("o{orbits}/cap{cap}/{c:?}/{kill}"), g.action.clone()));
                candidates.push((format!("o{orbits}/cap{cap}/{c:?}/{kill}/scrambled"), scramble(&g, cap as u64).action));
            }
        }
    }
    for k in 1..=3 {
        let fam = Family::DirectSum {
            parts: (0..k).map(|i| free_nilpotent(s, 1 + i % 2, 3, Some(1), true, None)).collect(),
        };
        candidates.push((format!("sum{k}"), generate(&fam, Exec::default()).map_err(|e| e.to_string())?.action));
    }
    candidates.extend(instance_pool(30, 5).into_iter().filter(|(_, a)| a.shape() == s));
    let mut admitted = 0;
    for (name, a) in &candidates {
        let cf = a.fixed_subring(FixedBy::F);
        let ch = a.fixed_subring(FixedBy::H);
        if cf.space.dim() != 0 || !matches!(ch.nilpotency.class(), Some(c) if c <= 1) {
            continue;
        }
        admitted += 1;
        let class = a.ring().nilpotency().class();
        ensure(matches!(class, Some(c) if c <= est.class), || format!("{name}: class {class:?} > {}", est.class))?;
    }
    ensure(admitted >= 10, || format!("only {admitted} admissible instances"))?;
    Ok(format!(
        "dims {:?}, empirical_f = {} (stabilized: {}), {admitted}/{} instances admitted and bounded",
        est.dims_by_weight,
        est.class,
        est.stabilized,
        candidates.len()
    ))
}

fn homogeneous_bases(a: &FrobeniusAction, gens: &GeneratorSet, rng: &mut ChaCha8Rng) -> Vec<Vector> {
    let d = a.eigen_decompose();
    gens.bases
        .iter()
        .map(|&i| random_in(a.field(), d.component(i).basis(), a.dim(), rng))
        .collect()
}

/// Words over one orbit with repeats, and words taking one entry from each of
/// `l` distinct orbits as in the universal construction.
fn kms_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut inputs = 0;
    let mut rewritten = 0;
    let s322 = shape(3, 2, 2);
    let s732 = shape(7, 3, 2);
    // (shape, orbits, c, multilinear, word lengths, segment, concrete targets)
    let setups = [
        (s322, 1, 1, false, 2..=5, false, free_nilpotent(s322, 1, 5, Some(1), false, None)),
        (s322, 2, 1, true, 2..=2, true, free_nilpotent(s322, 2, 4, Some(1), false, None)),
        (s322, 3, 1, true, 3..=3, true, free_nilpotent(s322, 3, 3, Some(1), false, None)),
        (s322, 4, 1, true, 4..=4, true, free_nilpotent(s322, 2, 4, Some(1), false, None)),
        (s732, 1, 2, false, 4..=5, false, free_nilpotent(s732, 1, 5, Some(2), false, None)),
        (s732, 4, 2, true, 4..=4, false, free_nilpotent(s732, 2, 4, Some(2), false, None)),
    ];
    for (s, orbits, c, multilinear, lengths, segment, target) in setups {
        let gens = GeneratorSet::with_orbits(s, orbits);
        let max = *lengths.end();
        let orbit_box = multilinear.then(|| vec![1u8; orbits]);
        let caps = Caps {
            max_generators: 12,
            ..Caps::default()
        };
        let engine = KmsEngine::new(gens.clone(), c, max, orbit_box, None, caps, Exec::default())
            .map_err(|e| e.to_string())?;
        let concrete = generate(&target, Exec::default()).map_err(|e| e.to_string())?.action;
        let ch = concrete.fixed_subring(FixedBy::H).nilpotency.class();
        ensure(matches!(ch, Some(x) if x <= c), || format!("target for {s} has C(H) class {ch:?}"))?;
        let heis = (s.q == 2).then(|| fhlie_core::frobenius::heisenberg_action(7, s).unwrap());
        for _ in 0..6 {
            let len = rng.gen_range(lengths.clone());
            let word: Vec<usize> = if multilinear {
                let mut order: Vec<usize> = (0..orbits).collect();
                for i in (1..orbits).rev() {
                    order.swap(i, rng.gen_range(0..=i));
                }
                order.iter().map(|&o| gens.gen(o, rng.gen_range(0..gens.q()))).collect()
            } else {
                (0..len).map(|_| rng.gen_range(0..gens.len())).collect()
            };
            let seg = (segment && len > 2).then(|| rng.gen_range(2..=len));
            let out = engine.kms_transform(&word, seg).map_err(|e| format!("{word:?} in {s}: {e}"))?;
            let input = Tree::left_normed(&word);
            inputs += 1;
            if out.terms.len() != 1 || out.terms[0].1 != input {
                rewritten += 1;
            }
            ensure(engine.congruent_mod_i(&input, &out).unwrap(), || format!("{word:?}: not congruent"))?;
            ensure(multiplicities_preserved(&input, &out, &gens), || format!("{word:?}: multiplicities"))?;
            ensure(
                out.terms.iter().all(|(_, t)| scan(t, &gens, 1, 1).is_some_and(|w| w.is_strict())),
                || format!("{word:?}: a term lacks a zero-sum initial segment"),
            )?;
            let mut targets = vec![concrete.clone()];
            targets.extend(heis.clone());
            for a in targets {
                let bases = homogeneous_bases(&a, &gens, &mut rng);
                let delta = Specialization::new(a, &gens, &bases);
                ensure(delta.eval(&input) == delta.eval_combination(&out), || {
                    format!("{word:?}: specialization changes the value")
                })?;
            }
        }
    }
    ensure(inputs >= 20, || "too few inputs".into())?;
    Ok(format!("{inputs} inputs, {rewritten} rewritten"))
}

fn class_le(a: Nilpotency, b: Nilpotency) -> bool {
    match (a.class(), b.class()) {
        (Some(x), Some(y)) => x <= y,
        (Some(_), None) => true,
        _ => false,
    }
}

/// Freezes random zero-sum commutators over each level's centralizers.
fn freezing(t: &CentralizerTower, rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let a = t.action();
    let f = a.field();
    let n = a.shape().n;
    let mut done = 0;
    for level in 0..t.levels().len() {
        for pattern in zero_sum_patterns(n, t.caps().u_used) {
            let spaces: Vec<_> = pattern.iter().map(|&j| t.centralizer(level, j)).collect();
            if spaces.iter().any(|s| s.is_zero()) {
                continue;
            }
            for _ in 0..2 {
                let entries: Vec<(Homogeneous, usize)> = pattern
                    .iter()
                    .zip(&spaces)
                    .map(|(&index, s)| {
                        let vector = random_in(f, s.basis(), a.dim(), rng);
                        (Homogeneous { index, vector }, level)
                    })
                    .collect();
                if entries.iter().any(|(h, _)| linalg::is_zero(&h.vector)) {
                    continue;
                }
                let vs: Vec<Vector> = entries.iter().map(|(h, _)| h.vector.clone()).collect();
                let value = a.ring().left_normed(&vs);
                for s in 0..=level {
                    let fr = t.freeze(&entries, s).map_err(|e| format!("freeze {pattern:?} at {s}: {e}"))?;
                    let fixed: Vec<Vector> = fr.entries.iter().map(|h| h.vector.clone()).collect();
                    ensure(fr.value == value && a.ring().left_normed(&fixed) == value, || {
                        format!("freezing {pattern:?} changed the value")
                    })?;
                    ensure(
                        fr.entries.iter().map(|h| h.index).collect::<Vec<_>>() == pattern,
                        || "frozen pattern differs".into(),
                    )?;
                    done += 1;
                }
            }
        }
    }
    Ok(done)
}

fn tower_invariants() -> Outcome {
    let mut instances = vec![("heisenberg".to_string(), fhlie_core::frobenius::heisenberg_example())];
    instances.extend(
        instance_pool(28, 31)
            .into_iter()
            .filter(|(_, a)| a.dim() <= 24)
            .take(12),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut frozen = 0;
    let mut runs = 0;
    for (i, (name, a)) in instances.iter().enumerate() {
        let caps = TowerCaps {
            u_used: 2 + i % 3,
            t_used: 1 + i % 2,
            budget: 200_000,
        };
        let t = CentralizerTower::build(a, caps, Exec::default()).map_err(|e| format!("{name}: {e}"))?;
        let checks = t.checks();
        ensure(checks.all_pass(), || format!("{name}: {checks:?}"))?;
        let cp = t.verify_centralizer_property(caps.u_used);
        ensure(cp.is_clean() && cp.exhaustive, || format!("{name}: centralizer property {cp:?}"))?;
        frozen += freezing(&t, &mut rng).map_err(|e| format!("{name}: {e}"))?;
        let z = t.z_report();
        ensure(z.phi_invariant && z.h_invariant, || format!("{name}: Z not FH-invariant"))?;
        ensure(class_le(z.nilpotency, a.ring().nilpotency()), || format!("{name}: class(Z) > class(L)"))?;
        runs += 1;
    }
    ensure(runs >= 11, || "too few instances".into())?;
    Ok(format!("{runs} instances, {frozen} freezings"))
}

fn family_boundedness() -> Outcome {
    let s = shape(3, 2, 2);
    let mut rows = Vec::new();
    // k copies of the universal quotient next to one Heisenberg summand
    for k in 1..=8 {
        let g = generate(&Family::padded_sum(s, 1, k + 1, 3), Exec::default()).map_err(|e| e.to_string())?;
        let a = &g.action;
        let l0 = a.eigen_decompose().component(0).dim();
        let t = CentralizerTower::build(a, TowerCaps::default(), Exec::default()).map_err(|e| e.to_string())?;
        let z = t.z_report();
        rows.push((k, a.dim(), l0, z.codim, z.nilpotency.class()));
    }
    let (_, _, l0, codim, class) = rows[0];
    ensure(rows.iter().all(|r| r.2 == l0), || format!("dim L_0 varies: {rows:?}"))?;
    ensure(rows.windows(2).all(|w| w[0].1 < w[1].1), || "dimension does not grow".into())?;
    ensure(rows.iter().all(|r| r.3 == codim && r.4 == class), || format!("{rows:?}"))?;
    Ok(format!(
        "dims {:?}, dim L_0 = {l0}, codim Z = {codim}, class Z = {class:?}",
        rows.iter().map(|r| r.1).collect::<Vec<_>>()
    ))
}

fn group_bridge() -> Outcome {
    let a = unitriangular_action(7, shape(3, 2, 2)).map_err(|e| e.to_string())?;
    let ex = Exec::default();
    let g = &a.group;
    let b = GroupBridge::new(&a, 2, ex).map_err(|e| e.to_string())?;
    let lie = b.lie();
    let m = a.fixed_phi(&g.whole()).order();
    ensure(m == 7 && lie.fixed_phi_order() == BigUint::from(7u32), || format!("|C_G(phi)| = {m}"))?;
    let lc = lie.ring().nilpotency().class();
    ensure(g.class() == Some(2) && lc == Some(2), || format!("classes {:?} {lc:?}", g.class()))?;
    let gh = g.class_of(&a.fixed_h(&g.whole()));
    let lh = lie.fixed_h_space().map(|s| lie.ring().nilpotency_of(&s).class());
    ensure(matches!((lh, gh), (Some(Some(x)), Some(y)) if x <= y), || format!("C(H) classes {lh:?} {gh:?}"))?;
    let gens = g.generators();
    let mut tuples: Vec<Vec<usize>> = gens.iter().map(|&x| vec![x]).collect();
    for &x in &gens {
        for &y in &gens {
            tuples.push(vec![x, y]);
        }
    }
    let mut worst = 0;
    for v in &tuples {
        let r = b.k_report(v, ex).map_err(|e| e.to_string())?;
        ensure(r.all_pass(), || format!("K({v:?}): {r:?}"))?;
        worst = worst.max(r.index);
    }
    let tower = b.a_tower(ATowerCaps::default(), ex).map_err(|e| e.to_string())?;
    let checks = b.tower_checks(&tower, ex).map_err(|e| e.to_string())?;
    ensure(checks.all_pass(), || format!("{checks:?}"))?;
    let p0 = &checks.parameters[0];
    ensure(p0.m == 7 && p0.m_bar == vec![1, 7], || format!("parameter {p0:?}"))?;
    Ok(format!(
        "{} K-subgroups (max index {worst}), A-orders {:?}, parameters {:?}",
        tuples.len(),
        checks.orders,
        checks.parameters.iter().map(|p| (p.m, p.m_bar.clone(), p.t)).collect::<Vec<_>>()
    ))
}

fn fitting() -> Outcome {
    let ex = Exec::default();
    let budget = Duration::from_secs(60);
    let s3 = symmetric(3).map_err(|e| e.to_string())?;
    let f = s3.fitting(ex);
    ensure(f.order == 3 && f.index == 2 && f.verified(), || format!("F(S_3): {f:?}"))?;
    ensure(f.subgroup.elements().iter().all(|&x| s3.element_order(x) != 2), || "F(S_3) contains a transposition".into())?;
    let mut nilpotent: Vec<(String, FiniteGroup)> = vec![
        ("C_12".into(), cyclic(12).unwrap()),
        ("D_4".into(), dihedral(4).unwrap()),
        ("D_8".into(), dihedral(8).unwrap()),
        ("UT(3,3)".into(), unitriangular(3).unwrap()),
        ("UT(3,5)".into(), unitriangular(5).unwrap()),
        ("UT(3,7)".into(), unitriangular(7).unwrap()),
    ];
    nilpotent.push(("D_4 x C_3".into(), dihedral(4).unwrap().direct_product(&cyclic(3).unwrap()).unwrap()));
    nilpotent.push(("UT(3,3) x C_5".into(), unitriangular(3).unwrap().direct_product(&cyclic(5).unwrap()).unwrap()));
    for (name, g) in &nilpotent {
        let t0 = Instant::now();
        ensure(g.class().is_some(), || format!("{name} should be nilpotent"))?;
        let f = g.fitting(ex);
        ensure(f.index == 1 && f.verified(), || format!("{name}: F(G) != G"))?;
        ensure(t0.elapsed() < budget, || format!("{name} too slow"))?;
    }
    for (name, g, index) in [
        ("S_4", symmetric(4).unwrap(), 6),
        ("D_3", dihedral(3).unwrap(), 2),
        ("D_5", dihedral(5).unwrap(), 2),
        ("S_3 x C_5", symmetric(3).unwrap().direct_product(&cyclic(5).unwrap()).unwrap(), 2),
    ] {
        let f = g.fitting(ex);
        ensure(f.index == index && f.verified(), || format!("{name}: index {} != {index}", f.index))?;
    }
    let mut ledger = Vec::new();
    let actions: Vec<(String, GroupAction)> = vec![
        ("UT(3,7)".into(), unitriangular_action(7, shape(3, 2, 2)).unwrap()),
        ("UT(3,11)".into(), unitriangular_action(11, shape(5, 2, 4)).unwrap()),
        ("C_7^2".into(), elementary_abelian_action(7, shape(3, 2, 2)).unwrap()),
        ("C_11^2".into(), elementary_abelian_action(11, shape(5, 2, 4)).unwrap()),
        ("C_29^2".into(), elementary_abelian_action(29, shape(7, 2, 6)).unwrap()),
    ];
    for (name, a) in &actions {
        let t0 = Instant::now();
        ensure(a.validate().is_empty(), || format!("{name} is not a valid instance"))?;
        let g = &a.group;
        if g.class_of(&a.fixed_h(&g.whole())).is_none() {
            continue;
        }
        let f = g.fitting(ex);
        ensure(f.verified(), || format!("{name}: Fitting report"))?;
        let m = a.fixed_phi(&g.whole()).order();
        ledger.push(format!("{name}: (|G:F| = {}, m = {m}, n = {})", f.index, a.shape.n));
        ensure(t0.elapsed() < budget, || format!("{name} too slow"))?;
    }
    ensure(ledger.len() == actions.len(), || "ledger incomplete".into())?;
    Ok(format!("{} nilpotent, {}", nilpotent.len(), ledger.join("; ")))
}

fn bound_calculator() -> Outcome {
    ensure(v(3, 2, 2) == BigUint::from(6175u32), || format!("V(3,2) = {}", v(3, 2, 2)))?;
    for f in 0..6u64 {
        let b = BoundParams::new(1, 2, 3, f, FSource::Supplied, 4, 2);
        let t = f + 1;
        ensure(b.t == t && b.u == v(t, t - 1, f) && b.n_bound == v(t, 2 * (t - 1), f), || format!("f = {f}"))?;
        ensure(b.u_used <= 4 && b.t_used <= 2, || "caps not clamped".into())?;
    }
    for t1 in 0..5u64 {
        for t2 in 1..5u64 {
            for f in 0..5u64 {
                let x = v(t1, t2, f);
                ensure(v(t1 + 1, t2, f) > x && v(t1, t2 + 1, f) >= x && v(t1, t2, f + 1) >= x, || {
                    format!("monotonicity at ({t1}, {t2}, {f})")
                })?;
                if t1 > 0 {
                    ensure(v(t1, t2 + 1, f) > x && v(t1, t2, f + 1) > x, || format!("strictness at ({t1}, {t2}, {f})"))?;
                }
            }
        }
    }
    let b = BoundParams::new(1, 2, 3, 1, FSource::Supplied, 4, 2);
    Ok(format!("V(3,2) = 6175, f = 1 gives U = {}, N = {}", b.u, b.n_bound))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, u64); 10] = [
        ("lie axioms", lie_axioms, 10),
        ("eigen-decomposition", eigen_decomposition, 30),
        ("witt oracle", witt_oracle, 60),
        ("universal quotient (3,2,2), c = 1, W = 10", universal_quotient, 300),
        ("kms soundness", kms_soundness, 300),
        ("tower invariants", tower_invariants, 300),
        ("family boundedness", family_boundedness, 120),
        ("group bridge on UT(3,7)", group_bridge, 120),
        ("fitting subgroups", fitting, 60),
        ("bound calculator", bound_calculator, 1),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = run();
        let secs = t0.elapsed().as_secs_f64();
        let outcome = match outcome {
            Ok(detail) if secs <= *limit as f64 => Ok(detail),
            Ok(detail) => Err(format!("over the {limit} s limit; {detail}")),
            Err(e) => Err(e),
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{secs:.2} s / {limit} s] {detail}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{secs:.2} s / {limit} s] {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
