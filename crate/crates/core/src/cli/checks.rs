use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::chainring::CharChoice;
use crate::duality::{
    closed_form_rank1, closed_form_rank1_total, closed_form_support, field_moebius,
    field_support_sum, gaussian_binomial, hamming_support_sum, hamming_weight_sum, is_reflexive,
    krawtchouk, left_dual_partition, mutually_dual, orthogonality_check, right_dual_partition,
    Pairing, RankSumComparator,
};
use crate::error::{Error, Result};
use crate::linalg::{
    count_rank1_in, count_rank1_submodules, rank, smith_form, IsoProfile, Lattice, MoebiusTable,
    Submodule,
};
use crate::macwilliams::{cyclic_codes, dual_code, macwilliams_verify, Code, MacWilliamsReport};
use crate::rankspace::{
    hamming_partitions, partition_by_iso, partition_by_rank, partition_by_support, ClassLabel,
    Partition, Side, TupleSpace,
};
use crate::schemes::{delta_partition, rank1_sums, rank_partition, theorem_5_2_suite};

use super::{CheckName, Report, RunConfig};

/// Pairs drawn by sampled scans when `--verify` is off.
const SAMPLE_PAIRS: usize = 4096;
/// Mismatches listed in a report.
const LISTED: usize = 10;

pub fn run_check(cfg: &RunConfig) -> Result<Report> {
    match cfg.check {
        CheckName::Lemma2_4 => lemma_2_4(cfg),
        CheckName::Ex2_1 => example_2_1(cfg),
        CheckName::Ex3_2 => example_3_2(cfg),
        CheckName::Prop3_1 => prop_3_1(cfg),
        CheckName::Thm3_1 => mutual_duality(cfg, 1),
        CheckName::Thm3_2 => mutual_duality(cfg, 2),
        CheckName::Lemma4_1 => lemma_4_1(cfg),
        CheckName::Lemma4_2 => lemma_4_2(cfg),
        CheckName::Thm4_1 => theorem_4_1(cfg),
        CheckName::Thm4_2 => theorem_4_2(cfg),
        CheckName::Thm5_1 => theorem_5_1(cfg),
        CheckName::Thm5_2 => theorem_5_2(cfg),
        CheckName::MacWilliams => macwilliams(cfg),
        CheckName::Krawtchouk => krawtchouk_table(cfg),
        CheckName::Lattice => lattice(cfg),
        CheckName::Duals => duals(cfg),
    }
}

fn report(cfg: &RunConfig, verdict: bool, summary: String, evidence: Value) -> Report {
    Report {
        check: cfg.check.name(),
        ring: cfg.ring.name(),
        m: cfg.m,
        n: cfg.n,
        verdict,
        summary,
        evidence,
        csv: None,
    }
}

fn space(cfg: &RunConfig) -> Result<Arc<TupleSpace>> {
    TupleSpace::new(&cfg.ring, cfg.m, cfg.n, cfg.guard)
}

fn pairing(cfg: &RunConfig) -> Result<Pairing> {
    Ok(Pairing::new(&space(cfg)?, cfg.choice))
}

fn other_choice(c: CharChoice) -> CharChoice {
    match c {
        CharChoice::Primary => CharChoice::Alternate,
        CharChoice::Alternate => CharChoice::Primary,
    }
}

/// `(Λ_i, Ψ_i)`.
fn pair_partitions(sp: &Arc<TupleSpace>, i: u8) -> (Partition, Partition) {
    match i {
        1 => (
            partition_by_support(sp, Side::Left),
            partition_by_support(sp, Side::Right),
        ),
        2 => (
            partition_by_iso(sp, Side::Left),
            partition_by_iso(sp, Side::Right),
        ),
        _ => (
            partition_by_rank(sp, Side::Left),
            partition_by_rank(sp, Side::Right),
        ),
    }
}

fn support_label(p: &Partition, c: usize) -> &Submodule {
    match p.label(c) {
        ClassLabel::Support(s) => s,
        other => unreachable!("support partition carries {other:?}"),
    }
}

fn rank_class(p: &Partition, r: usize) -> Result<usize> {
    (0..p.len())
        .find(|c| p.label(*c) == &ClassLabel::Rank(r))
        .ok_or_else(|| Error::MissingClass(format!("rank {r}")))
}

fn mismatch_summary(what: &str, checked: usize, mismatches: &[Value]) -> String {
    if mismatches.is_empty() {
        format!("{checked} {what} agree")
    } else {
        format!("{} of {checked} {what} disagree", mismatches.len())
    }
}

fn listed(mismatches: &[Value]) -> Vec<Value> {
    mismatches.iter().take(LISTED).cloned().collect()
}

/// Elements `y` of the list with `π^t y = 0`.
fn torsion_count(cfg: &RunConfig, elems: &[Vec<u32>], t: u32) -> u64 {
    let ring = &cfg.ring;
    let pt = ring.pi_pow_code(t);
    elems
        .iter()
        .filter(|y| y.iter().all(|c| ring.mul_code(pt, *c) == 0))
        .count() as u64
}

/// Partition shape `λ` read back from a torsion profile.
fn shape(profile: &IsoProfile, m: usize) -> Option<Vec<u32>> {
    let c = &profile.0;
    let steps: Vec<u32> = c
        .windows(2)
        .map(|w| w[1].checked_sub(w[0]))
        .collect::<Option<_>>()?;
    if steps.iter().any(|k| *k as usize > m) {
        return None;
    }
    Some(
        (0..m as u32)
            .map(|i| steps.iter().filter(|k| **k > i).count() as u32)
            .collect(),
    )
}

fn lemma_2_4(cfg: &RunConfig) -> Result<Report> {
    let ring = &cfg.ring;
    let (q, s, m) = (ring.q() as u64, ring.s(), cfg.m);
    let lat = Lattice::enumerate(ring, m, cfg.guard)?;
    let subs = lat.members();
    let mut bad: Vec<Value> = Vec::new();
    let mut checks = [0usize; 4];
    for (i, a) in subs.iter().enumerate() {
        let elems = a.elements();
        let profile = a.iso_profile();
        for t in 0..=s {
            checks[0] += 1;
            let direct = torsion_count(cfg, &elems, t);
            if direct != q.pow(profile.0[t as usize]) {
                bad.push(json!({"part": 1, "submodule": i, "t": t, "direct": direct}));
            }
        }
        match shape(profile, m) {
            Some(lambda) if IsoProfile::from_partition(&lambda, s) == *profile => {}
            _ => bad.push(json!({"part": 1, "submodule": i, "profile": profile.0})),
        }
        let b = a.pi_preimage().elements();
        for t in 1..=s {
            checks[2] += 1;
            let lhs = torsion_count(cfg, &b, t);
            let rhs = torsion_count(cfg, &elems, t - 1) * q.pow(m as u32);
            if lhs != rhs {
                bad.push(
                    json!({"part": 3, "submodule": i, "t": t, "preimage": lhs, "expected": rhs}),
                );
            }
        }
        for t in 1..=s {
            checks[3] += 1;
            let formula = count_rank1_in(q, profile, t)?;
            let mut direct = 0u64;
            for v in subs {
                if v.module_rank() == 1 && v.log_size() == t && a.contains(v)? {
                    direct += 1;
                }
            }
            if formula != direct {
                bad.push(json!({"part": 4, "submodule": i, "t": t, "formula": formula, "direct": direct}));
            }
        }
    }
    let smith_types: Vec<Vec<u32>> = subs
        .iter()
        .map(|a| {
            if a.is_zero() {
                Vec::new()
            } else {
                smith_form(a.generators())
                    .invariants
                    .0
                    .into_iter()
                    .filter(|e| *e < s)
                    .collect()
            }
        })
        .collect();
    for i in 0..subs.len() {
        for j in 0..subs.len() {
            checks[1] += 1;
            let same_profile = subs[i].iso_profile() == subs[j].iso_profile();
            if same_profile != (smith_types[i] == smith_types[j]) {
                bad.push(json!({"part": 2, "submodules": [i, j]}));
            }
        }
    }
    let total: usize = checks.iter().sum();
    Ok(report(
        cfg,
        bad.is_empty(),
        format!(
            "{} over {} submodules",
            mismatch_summary("counting identities", total, &bad),
            subs.len()
        ),
        json!({
            "submodules": subs.len(),
            "checks_per_part": checks,
            "mismatches": bad.len(),
            "first_mismatches": listed(&bad),
        }),
    ))
}

fn example_2_1(cfg: &RunConfig) -> Result<Report> {
    let f = pairing(cfg)?;
    let sp = f.space();
    let (d1, d2) = hamming_partitions(sp, Side::Right);
    let group = (cfg.ring.size() as i64).pow(cfg.m as u32);
    let (m1, m2) = (d1.all_members(), d2.all_members());
    let mut bad = Vec::new();
    let mut checked = 0;
    for a in 0..sp.len() {
        let supp: Vec<usize> = (0..cfg.n)
            .filter(|j| sp.column(a, *j).iter().any(|x| *x != 0))
            .collect();
        let s1 = f.class_sums(a, &d1);
        let s2 = f.class_sums(a, &d2);
        for c in 0..d1.len() {
            let ClassLabel::HammingSupport(i) = d1.label(c) else {
                unreachable!()
            };
            let closed = hamming_support_sum(group, &supp, i);
            let mut ok = s1[c].as_integer() == Some(closed);
            if cfg.verify {
                ok &= f.direct_sum(a, &m1[c])?.as_integer() == Some(closed);
            }
            checked += 1;
            if !ok {
                bad.push(json!({"element": a, "support_class": i, "closed_form": closed}));
            }
        }
        for c in 0..d2.len() {
            let ClassLabel::HammingWeight(w) = d2.label(c) else {
                unreachable!()
            };
            let closed = hamming_weight_sum(group, cfg.n, supp.len(), *w);
            let mut ok = s2[c].as_integer() == Some(closed);
            if cfg.verify {
                ok &= f.direct_sum(a, &m2[c])?.as_integer() == Some(closed);
            }
            checked += 1;
            if !ok {
                bad.push(json!({"element": a, "weight": w, "closed_form": closed}));
            }
        }
    }
    let dual_support = mutually_dual(&f, &d1.mirrored(), &d1)?;
    let dual_weight = mutually_dual(&f, &d2.mirrored(), &d2)?;
    Ok(report(
        cfg,
        bad.is_empty() && dual_support && dual_weight,
        mismatch_summary("Hamming sums", checked, &bad),
        json!({
            "checked": checked,
            "brute_force": cfg.verify,
            "support_classes": d1.len(),
            "weight_classes": d2.len(),
            "support_partition_self_dual": dual_support,
            "weight_partition_self_dual": dual_weight,
            "mismatches": bad.len(),
            "first_mismatches": listed(&bad),
        }),
    ))
}

fn example_3_2(cfg: &RunConfig) -> Result<Report> {
    if !cfg.ring.is_field() {
        return Err(Error::InvalidRing(format!(
            "{} is not a field",
            cfg.ring.name()
        )));
    }
    let q = cfg.ring.q() as i64;
    let table = MoebiusTable::new(Lattice::enumerate(&cfg.ring, cfg.m, cfg.guard)?);
    let lat = table.lattice();
    let mut bad = Vec::new();
    let mut mu_checked = 0;
    for b in 0..lat.len() {
        for v in 0..lat.len() {
            if table.leq(b, v) {
                mu_checked += 1;
                let (db, dv) = (lat.members()[b].log_size(), lat.members()[v].log_size());
                let mu = table.mu(b, v)?;
                if mu != field_moebius(q, db, dv) {
                    bad.push(json!({"moebius": [b, v], "table": mu}));
                }
            }
        }
    }
    for k in 0..=cfg.m as u32 {
        let count = lat.members().iter().filter(|x| x.log_size() == k).count() as i64;
        if count != gaussian_binomial(q, cfg.m as u32, k) {
            bad.push(json!({"subspaces_of_dimension": k, "count": count}));
        }
    }
    let f = pairing(cfg)?;
    let sp = f.space();
    let (lam, psi) = pair_partitions(sp, 1);
    let rho = krawtchouk(&f, &lam, &psi, Side::Left)?;
    let psi_members = psi.all_members();
    let mut entries = 0;
    for a in 0..lam.len() {
        let sa = support_label(&lam, a);
        for (b, members) in psi_members.iter().enumerate() {
            let sv = support_label(&psi, b);
            let d = sv.intersection(&sa.annihilator())?.log_size();
            let closed = field_support_sum(q, cfg.n as u32, sv.log_size(), d);
            let mut ok = rho.entry(a, b).as_integer() == Some(closed);
            if cfg.verify {
                ok &= f.direct_sum(lam.representative(a), members)?.as_integer() == Some(closed);
            }
            entries += 1;
            if !ok {
                bad.push(json!({"entry": [a, b], "closed_form": closed}));
            }
        }
    }
    Ok(report(
        cfg,
        bad.is_empty(),
        mismatch_summary(
            "Möbius values, subspace counts and Krawtchouk entries",
            mu_checked + entries + cfg.m + 1,
            &bad,
        ),
        json!({
            "moebius_pairs": mu_checked,
            "krawtchouk_entries": entries,
            "brute_force": cfg.verify,
            "mismatches": bad.len(),
            "first_mismatches": listed(&bad),
        }),
    ))
}

fn prop_3_1(cfg: &RunConfig) -> Result<Report> {
    let f = pairing(cfg)?;
    let sp = f.space();
    let table = MoebiusTable::new(Lattice::enumerate(&cfg.ring, cfg.m, cfg.guard)?);
    let (lam, psi) = pair_partitions(sp, 1);
    let rho = krawtchouk(&f, &lam, &psi, Side::Left)?;
    let psi_members = psi.all_members();
    let mut bad = Vec::new();
    let mut values = Vec::new();
    for a in 0..lam.len() {
        let sa = support_label(&lam, a);
        let mut row = Vec::new();
        for (b, members) in psi_members.iter().enumerate() {
            let closed = closed_form_support(&table, sa, support_label(&psi, b), cfg.n)?;
            let mut ok = rho.entry(a, b).as_integer() == Some(closed);
            if cfg.verify {
                ok &= f.direct_sum(lam.representative(a), members)?.as_integer() == Some(closed);
            }
            if !ok {
                bad.push(json!({"entry": [a, b], "closed_form": closed}));
            }
            row.push(closed);
        }
        values.push(row);
    }
    let integral = rho.as_integers().is_some();
    Ok(report(
        cfg,
        bad.is_empty() && integral,
        mismatch_summary("support-class sums", lam.len() * psi.len(), &bad),
        json!({
            "classes": lam.len(),
            "brute_force": cfg.verify,
            "integral": integral,
            "closed_forms": values,
            "mismatches": bad.len(),
            "first_mismatches": listed(&bad),
        }),
    ))
}

fn mutual_duality(cfg: &RunConfig, i: u8) -> Result<Report> {
    let f = pairing(cfg)?;
    let sp = f.space();
    let (lam, psi) = pair_partitions(sp, i);
    let l = left_dual_partition(&f, &psi)?;
    let r = right_dual_partition(&f, &lam)?;
    let left_equal = l.equals(&lam)?;
    let right_equal = r.equals(&psi)?;
    let dual = mutually_dual(&f, &lam, &psi)?;
    let rl = is_reflexive(&f, &lam)?;
    let rp = is_reflexive(&f, &psi)?;
    let lat = Lattice::enumerate(&cfg.ring, cfg.m, cfg.guard)?;
    let expected_classes = if i == 1 {
        lat.len()
    } else {
        lat.members()
            .iter()
            .map(|s| s.iso_profile().clone())
            .collect::<BTreeSet<_>>()
            .len()
    };
    let alternate_agrees = if cfg.verify {
        let g = Pairing::new(sp, other_choice(cfg.choice));
        Some(
            left_dual_partition(&g, &psi)?.equals(&l)?
                && right_dual_partition(&g, &lam)?.equals(&r)?,
        )
    } else {
        None
    };
    let verdict = left_equal
        && right_equal
        && dual
        && rl.reflexive
        && rp.reflexive
        && lam.len() == psi.len()
        && lam.len() == expected_classes
        && alternate_agrees != Some(false);
    Ok(report(
        cfg,
        verdict,
        if verdict {
            format!("mutually dual, both reflexive, {} classes", lam.len())
        } else {
            "duality does not hold as expected".into()
        },
        json!({
            "left_classes": lam.len(),
            "right_classes": psi.len(),
            "expected_classes": expected_classes,
            "left_dual_equals_left": left_equal,
            "right_dual_equals_right": right_equal,
            "mutually_dual": dual,
            "left_reflexive": rl,
            "right_reflexive": rp,
            "alternate_character_agrees": alternate_agrees,
        }),
    ))
}

fn lemma_4_1(cfg: &RunConfig) -> Result<Report> {
    let f = pairing(cfg)?;
    let sp = f.space();
    let (lam, psi) = pair_partitions(sp, 1);
    let rho = krawtchouk(&f, &lam, &psi, Side::Left)?;
    let psi_members = psi.all_members();
    let q = cfg.ring.q() as i64;
    let mut cases = [0usize; 3];
    let mut bad = Vec::new();
    let mut checked = 0;
    for a in 0..lam.len() {
        let sa = support_label(&lam, a);
        let ann = sa.annihilator();
        for (b, members) in psi_members.iter().enumerate() {
            let v = support_label(&psi, b);
            if v.module_rank() != 1 {
                continue;
            }
            let closed = closed_form_rank1(sa, v, cfg.n)?;
            let case = if !ann.contains(&v.times_pi())? {
                0
            } else if !ann.contains(v)? {
                1
            } else {
                2
            };
            cases[case] += 1;
            let t = v.log_size();
            let expected = match case {
                0 => 0,
                1 => -q.pow((t - 1) * cfg.n as u32),
                _ => q.pow(t * cfg.n as u32) - q.pow((t - 1) * cfg.n as u32),
            };
            let mut ok = closed == expected && rho.entry(a, b).as_integer() == Some(closed);
            if cfg.verify {
                ok &= f.direct_sum(lam.representative(a), members)?.as_integer() == Some(closed);
            }
            checked += 1;
            if !ok {
                bad.push(json!({"entry": [a, b], "closed_form": closed}));
            }
        }
    }
    Ok(report(
        cfg,
        bad.is_empty(),
        mismatch_summary("rank-1 sums", checked, &bad),
        json!({
            "checked": checked,
            "brute_force": cfg.verify,
            "cases": {"v_pi_outside": cases[0], "v_outside": cases[1], "v_inside": cases[2]},
            "mismatches": bad.len(),
            "first_mismatches": listed(&bad),
        }),
    ))
}

fn lemma_4_2(cfg: &RunConfig) -> Result<Report> {
    let f = pairing(cfg)?;
    let sp = f.space();
    let (lam, psi1) = pair_partitions(sp, 1);
    let psi3 = partition_by_rank(sp, Side::Right);
    let rho = krawtchouk(&f, &lam, &psi3, Side::Left)?;
    let r1 = rank_class(&psi3, 1)?;
    let rank1_members = psi3.members(r1);
    let cyclic: Vec<&Submodule> = (0..psi1.len())
        .map(|b| support_label(&psi1, b))
        .filter(|v| v.module_rank() == 1)
        .collect();
    let mut bad = Vec::new();
    let mut totals = Vec::new();
    for a in 0..lam.len() {
        let sa = support_label(&lam, a);
        let total = closed_form_rank1_total(sa, cfg.n)?;
        let mut by_cases = 0i64;
        for v in &cyclic {
            by_cases += closed_form_rank1(sa, v, cfg.n)?;
        }
        let mut ok = by_cases == total && rho.entry(a, r1).as_integer() == Some(total);
        if cfg.verify {
            ok &= f
                .direct_sum(lam.representative(a), &rank1_members)?
                .as_integer()
                == Some(total);
        }
        if !ok {
            bad.push(json!({"class": a, "total": total, "by_cases": by_cases}));
        }
        totals.push(total);
    }
    let rank1_count = (0..sp.len()).filter(|x| rank(&sp.matrix(*x)) == 1).count() as i64;
    let zero_total = closed_form_rank1_total(&Submodule::zero(&cfg.ring, cfg.m), cfg.n)?;
    let verdict = bad.is_empty() && zero_total == rank1_count;
    Ok(report(
        cfg,
        verdict,
        format!(
            "{}; zero-support total {zero_total}, rank-1 matrices {rank1_count}",
            mismatch_summary("rank-1 totals", lam.len(), &bad)
        ),
        json!({
            "totals": totals,
            "zero_support_total": zero_total,
            "rank1_matrices": rank1_count,
            "brute_force": cfg.verify,
            "mismatches": bad.len(),
            "first_mismatches": listed(&bad),
        }),
    ))
}

/// Tuples whose columns all equal `z = e_1`, resp. `π z`.
fn column_witness(sp: &TupleSpace) -> Result<(usize, usize)> {
    let pi = sp.ring().pi_pow_code(1);
    let col = |x: u32| {
        let mut c = vec![0; sp.m()];
        c[0] = x;
        c
    };
    let a: Vec<u32> = (0..sp.n()).flat_map(|_| col(1)).collect();
    let c: Vec<u32> = (0..sp.n()).flat_map(|_| col(pi)).collect();
    Ok((sp.index_of(&a)?, sp.index_of(&c)?))
}

fn theorem_4_1(cfg: &RunConfig) -> Result<Report> {
    let f = pairing(cfg)?;
    let sp = f.space();
    let field = cfg.ring.is_field();
    let lam2 = partition_by_iso(sp, Side::Left);
    let lam3 = partition_by_rank(sp, Side::Left);
    let psi2 = partition_by_iso(sp, Side::Right);
    let psi3 = partition_by_rank(sp, Side::Right);
    let from_rank = left_dual_partition(&f, &psi3)?.equals(&lam2)?;
    let from_iso = left_dual_partition(&f, &psi2)?.equals(&lam2)?;
    let distinct = !lam2.equals(&lam3)?;
    let refl = is_reflexive(&f, &psi3)?;
    let rank_classes = psi3.len() == cfg.m.min(cfg.n) + 1;
    let witness = if field {
        None
    } else {
        let (a, c) = column_witness(sp)?;
        Some(json!({
            "alpha": sp.entries(a),
            "gamma": sp.entries(c),
            "same_rank": lam3.class_of(a) == lam3.class_of(c),
            "same_isomorphism_type": lam2.class_of(a) == lam2.class_of(c),
        }))
    };
    let witness_ok = witness.as_ref().is_none_or(|w| {
        w["same_rank"] == json!(true) && w["same_isomorphism_type"] == json!(false)
    });
    let verdict = from_rank
        && from_iso
        && distinct != field
        && refl.reflexive == field
        && rank_classes
        && witness_ok;
    Ok(report(
        cfg,
        verdict,
        format!(
            "dual of the rank-weight partition is the isomorphism-type partition; rank-weight partition {}",
            if refl.reflexive { "reflexive" } else { "non-reflexive" }
        ),
        json!({
            "dual_of_rank_is_iso": from_rank,
            "dual_of_iso_is_iso": from_iso,
            "iso_differs_from_rank": distinct,
            "rank_weight_reflexivity": refl,
            "rank_classes": psi3.len(),
            "witness": witness,
        }),
    ))
}

fn theorem_4_2(cfg: &RunConfig) -> Result<Report> {
    let f = pairing(cfg)?;
    let sp = f.space();
    let cmp = RankSumComparator::new(&f)?;
    let len = sp.len();
    let (checked, bad) = if cfg.verify {
        (len * len, cmp.scan_all())
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut pairs: Vec<(usize, usize)> = (0..SAMPLE_PAIRS)
            .map(|_| (rng.gen_range(0..len), rng.gen_range(0..len)))
            .collect();
        if !cfg.ring.is_field() {
            pairs.push(column_witness(sp)?);
        }
        let bad = pairs
            .iter()
            .copied()
            .filter(|(a, c)| !cmp.report(*a, *c).consistent())
            .collect();
        (pairs.len(), bad)
    };
    let listed: Vec<Value> = bad
        .iter()
        .take(LISTED)
        .map(|(a, c)| json!({"alpha": sp.entries(*a), "gamma": sp.entries(*c), "report": cmp.report(*a, *c)}))
        .collect();
    Ok(report(
        cfg,
        bad.is_empty(),
        format!(
            "{} {} pairs, {} inconsistent",
            if cfg.verify { "all" } else { "sampled" },
            checked,
            bad.len()
        ),
        json!({
            "exhaustive": cfg.verify,
            "seed": cfg.seed,
            "pairs": checked,
            "inconsistent": bad.len(),
            "first_inconsistent": listed,
        }),
    ))
}

fn theorem_5_1(cfg: &RunConfig) -> Result<Report> {
    let f = pairing(cfg)?;
    let sp = f.space();
    let delta = delta_partition(sp)?;
    let phi = rank_partition(sp, Side::Right);
    let dual_equal = delta.equals(&left_dual_partition(&f, &phi)?)?;
    let phi_left = phi.mirrored();
    let refines = delta.refines(&phi_left)?;
    let delta_is_phi = delta.equals(&phi_left)?;
    let sums = rank1_sums(&f)?;
    let len = sp.len();
    let pairs: Vec<(usize, usize)> = if cfg.verify {
        (0..len)
            .flat_map(|a| (0..len).map(move |c| (a, c)))
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        (0..SAMPLE_PAIRS)
            .map(|_| (rng.gen_range(0..len), rng.gen_range(0..len)))
            .collect()
    };
    let bad: Vec<Value> = pairs
        .iter()
        .filter(|(a, c)| (sums[*a] == sums[*c]) != (delta.class_of(*a) == delta.class_of(*c)))
        .take(LISTED)
        .map(|(a, c)| json!({"alpha": sp.entries(*a), "gamma": sp.entries(*c)}))
        .collect();
    let verdict = dual_equal && refines && delta_is_phi == cfg.ring.is_field() && bad.is_empty();
    Ok(report(
        cfg,
        verdict,
        format!(
            "Smith-class partition {} the dual of the rank partition ({} classes); {} pairs checked",
            if dual_equal { "equals" } else { "differs from" },
            delta.len(),
            pairs.len()
        ),
        json!({
            "smith_classes": delta.len(),
            "rank_classes": phi.len(),
            "dual_equal": dual_equal,
            "refines_rank_partition": refines,
            "equals_rank_partition": delta_is_phi,
            "exhaustive": cfg.verify,
            "pairs": pairs.len(),
            "mismatches": bad,
        }),
    ))
}

fn theorem_5_2(cfg: &RunConfig) -> Result<Report> {
    let row = theorem_5_2_suite(
        std::slice::from_ref(&cfg.ring),
        cfg.m,
        cfg.n,
        cfg.guard,
        cfg.choice,
    )?
    .remove(0);
    let verdict = row.consistent && row.witness.is_some() != row.is_scheme;
    let summary = match &row.witness {
        None if row.is_scheme => "association scheme".to_string(),
        None => "not a scheme".to_string(),
        Some(w) => format!(
            "not a scheme: N({}, {}) is {} at {:?} but {} at {:?}",
            w.u, w.v, w.count_w, w.w_entries, w.count_z, w.z_entries
        ),
    };
    let witness = row.witness.as_ref().map_or(String::new(), |w| {
        format!(
            "\"N({}, {}) {} at {:?}, {} at {:?}\"",
            w.u, w.v, w.count_w, w.w_entries, w.count_z, w.z_entries
        )
    });
    let csv = format!(
        "ring,m,n,is_scheme,witness,reflexivity_crosscheck\n{},{},{},{},{},{}\n",
        row.ring, row.m, row.n, row.is_scheme, witness, row.reflexive
    );
    let mut r = report(
        cfg,
        verdict,
        summary,
        serde_json::to_value(&row).expect("row serializes"),
    );
    r.csv = Some(csv);
    Ok(r)
}

fn unit_tuples(sp: &TupleSpace) -> Result<Vec<usize>> {
    (0..sp.m() * sp.n())
        .map(|p| {
            let mut e = vec![0; sp.m() * sp.n()];
            e[p] = 1;
            sp.index_of(&e)
        })
        .collect()
}

/// `{β : f(g, β) = 1 for every generator g}` by testing every tuple.
fn dual_by_characters(f: &Pairing, c: &Code) -> Vec<usize> {
    (0..f.space().len())
        .filter(|b| c.generators().iter().all(|g| f.exponent(*g, *b) == 0))
        .collect()
}

fn macwilliams(cfg: &RunConfig) -> Result<Report> {
    let f = pairing(cfg)?;
    let sp = f.space();
    let (lam, psi) = pair_partitions(sp, cfg.pair);
    let (lam, psi) = if cfg.pair == 3 {
        // Λ_3 and Ψ_3 are not mutually dual; pair each with the dual of the other.
        match cfg.side {
            Side::Left => (partition_by_iso(sp, Side::Left), psi),
            Side::Right => (lam, partition_by_iso(sp, Side::Right)),
        }
    } else {
        (lam, psi)
    };
    let k = krawtchouk(&f, &lam, &psi, cfg.side)?;
    let (codes, single) = match &cfg.code {
        Some(file) => (vec![Code::from_file(sp, file)?], true),
        None => {
            let mut codes = vec![
                Code::span(sp, Vec::new())?,
                Code::span(sp, unit_tuples(sp)?)?,
            ];
            codes.extend(cyclic_codes(sp)?);
            (codes, false)
        }
    };
    let mut reports: Vec<MacWilliamsReport> = Vec::new();
    let mut bad = Vec::new();
    for (i, c) in codes.iter().enumerate() {
        let r = macwilliams_verify(c, &k)?;
        let mut ok = r.verified;
        if cfg.verify {
            ok &= dual_code(c)?.elements() == dual_by_characters(&f, c).as_slice();
        }
        if !ok {
            bad.push(json!({"code": i, "generators": c.generators().iter().map(|g| sp.entries(*g)).collect::<Vec<_>>()}));
        }
        reports.push(r);
    }
    let evidence = if single {
        json!({"report": reports[0], "dual_checked_by_characters": cfg.verify})
    } else {
        json!({
            "codes": codes.len(),
            "dual_checked_by_characters": cfg.verify,
            "failures": bad.len(),
            "first_failures": listed(&bad),
        })
    };
    Ok(report(
        cfg,
        bad.is_empty(),
        if single {
            format!(
                "|C| = {}, |C^‡| = {}, predicted {:?}, actual {:?}",
                reports[0].code_size,
                reports[0].dual_size,
                reports[0].predicted.counts,
                reports[0].actual.counts
            )
        } else {
            mismatch_summary("codes", codes.len(), &bad)
        },
        evidence,
    ))
}

fn krawtchouk_table(cfg: &RunConfig) -> Result<Report> {
    let f = pairing(cfg)?;
    let sp = f.space();
    let (lam, psi) = pair_partitions(sp, cfg.pair);
    let (k, orthogonal) = if cfg.pair == 3 {
        let k = match cfg.side {
            Side::Left => krawtchouk(&f, &partition_by_iso(sp, Side::Left), &psi, Side::Left)?,
            Side::Right => krawtchouk(&f, &lam, &partition_by_iso(sp, Side::Right), Side::Right)?,
        };
        (k, None)
    } else {
        let rho = krawtchouk(&f, &lam, &psi, Side::Left)?;
        let eps = krawtchouk(&f, &lam, &psi, Side::Right)?;
        let orth = orthogonality_check(&rho, &eps)?;
        (if cfg.side == Side::Left { rho } else { eps }, Some(orth))
    };
    let integral = k.as_integers().is_some();
    let verdict = orthogonal != Some(false) && (integral || cfg.pair != 1);
    let mut r = report(
        cfg,
        verdict,
        format!(
            "{}×{} matrix, {}{}",
            k.rows().len(),
            k.cols().len(),
            if integral {
                "integral"
            } else {
                "cyclotomic entries"
            },
            match orthogonal {
                Some(true) => ", orthogonality holds",
                Some(false) => ", orthogonality fails",
                None => "",
            }
        ),
        json!({"matrix": k.dump(), "orthogonality": orthogonal}),
    );
    r.csv = Some(k.to_csv());
    Ok(r)
}

fn lattice(cfg: &RunConfig) -> Result<Report> {
    let ring = &cfg.ring;
    let lat = Lattice::enumerate(ring, cfg.m, cfg.guard)?;
    let full = (ring.size() as u64).pow(cfg.m as u32);
    let mut bad = Vec::new();
    for (i, a) in lat.members().iter().enumerate() {
        let ann = a.annihilator();
        if a.size() * ann.size() != full || ann.annihilator() != *a {
            bad.push(json!({"submodule": i, "check": "annihilator"}));
        }
        if cfg.verify && a.elements().len() as u64 != a.size() {
            bad.push(json!({"submodule": i, "check": "size"}));
        }
    }
    let mut cyclic = Vec::new();
    for t in 1..=ring.s() {
        let formula = count_rank1_submodules(ring, cfg.m, t)?;
        let direct = lat
            .members()
            .iter()
            .filter(|v| v.module_rank() == 1 && v.log_size() == t)
            .count() as u64;
        if formula != direct {
            bad.push(json!({"cyclic_of_size_exponent": t, "formula": formula, "direct": direct}));
        }
        cyclic.push(direct);
    }
    let entries = lat.dump();
    let mut csv = String::from("index,size,rank,iso_profile,generators\n");
    for (i, e) in entries.iter().enumerate() {
        let prof: Vec<String> = e.iso_profile.iter().map(u32::to_string).collect();
        let gens: Vec<String> = e
            .generators
            .iter()
            .map(|g| g.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        csv.push_str(&format!(
            "{i},{},{},{},{}\n",
            e.size,
            e.rank,
            prof.join(" "),
            gens.join(";")
        ));
    }
    let moebius = cfg
        .moebius
        .then(|| MoebiusTable::new(lat.clone()).triples());
    let mut r = report(
        cfg,
        bad.is_empty(),
        format!("{} submodules of R^{}", lat.len(), cfg.m),
        json!({
            "size": lat.len(),
            "cyclic_by_size_exponent": cyclic,
            "entries": entries,
            "moebius": moebius,
            "mismatches": bad,
        }),
    );
    r.csv = Some(csv);
    Ok(r)
}

fn duals(cfg: &RunConfig) -> Result<Report> {
    let f = pairing(cfg)?;
    let sp = f.space();
    let (lam, psi) = pair_partitions(sp, cfg.pair);
    let (dual, expected, name) = match cfg.side {
        Side::Left => {
            let target = if cfg.pair == 3 {
                partition_by_iso(sp, Side::Left)
            } else {
                lam
            };
            (
                left_dual_partition(&f, &psi)?,
                target,
                format!("l(Ψ{})", cfg.pair),
            )
        }
        Side::Right => {
            let target = if cfg.pair == 3 {
                partition_by_iso(sp, Side::Right)
            } else {
                psi
            };
            (
                right_dual_partition(&f, &lam)?,
                target,
                format!("r(Λ{})", cfg.pair),
            )
        }
    };
    let equal = dual.equals(&expected)?;
    let mut csv = String::from("class,size\n");
    for c in 0..dual.len() {
        csv.push_str(&format!("{c},{}\n", dual.size(c)));
    }
    let mut r = report(
        cfg,
        equal,
        format!(
            "{name} has {} classes and {} the expected partition",
            dual.len(),
            if equal { "equals" } else { "differs from" }
        ),
        json!({"dual": name, "equals_expected": equal, "partition": dual.dump(cfg.members)}),
    );
    r.csv = Some(csv);
    Ok(r)
}
