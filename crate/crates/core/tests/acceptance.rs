//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

use std::time::{Duration, Instant};

use capgroups::capability::{
    self, build_witness, commutator_order_condition, decide, general_type_ambient,
    generator_order_exponents, membership_congruence_scan, order_conditions, shrink_witness,
    verify_witness, Clause, LemmaContext, LemmaOutcome, Obstruction, NON_CAPABILITY_DISCLAIMER,
};
use capgroups::class2::{model, TypeParams};
use capgroups::hall::binom2;
use capgroups::nilprod::{NilElt, NilGroup};
use capgroups::oracle::{self, FiniteGroup, GroupTable};
use capgroups::FreeElt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SMALL: u64 = 1 << 12;
const BUDGET: u64 = 1 << 16;
const CONSTRUCTION_BUDGET: u64 = 1 << 20;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("normal-form counts of nilpotent products", criterion_1),
        ("counts of the central-power quotients", criterion_2),
        ("group axioms", criterion_3),
        ("commutator identity suite", criterion_4),
        ("center agreement", criterion_5),
        ("capability sweep", criterion_6),
        ("named cases", criterion_7),
        ("membership congruences", criterion_8),
        ("lemma suites", criterion_9),
        ("non-capability disclaimer", criterion_10),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        let tag = if out.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {tag}: {name} ({secs:.2}s) {}",
            n + 1,
            out.detail
        );
        failed += usize::from(!out.pass);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

fn log2(n: u64) -> u32 {
    n.trailing_zeros()
}

/// `(α, β)` with `α >= β >= 1` and `|G(α,β)| <= 2^12`.
fn small_products() -> Vec<(u32, u32)> {
    let mut v = Vec::new();
    for beta in 1..=3 {
        for alpha in beta..=12 {
            if alpha + 4 * beta - u32::from(alpha == beta) <= 12 {
                v.push((alpha, beta));
            }
        }
    }
    v
}

/// The table is generated by `a`, `b`, has class exactly three, and its
/// numbering round-trips.
fn structural_checks(k: &NilGroup, t: &GroupTable) -> Result<(), String> {
    let n = t.order();
    if oracle::closure(t, &t.generators()).order() != n {
        return Err(format!("{}: a, b do not generate", k.spec()));
    }
    for i in 0..n {
        if k.index_of(&k.element(i)) != i {
            return Err(format!("{}: numbering is not a bijection at {i}", k.spec()));
        }
    }
    let class = oracle::lcs(t).len() - 1;
    if class != 3 {
        return Err(format!("{}: class {class}, expected 3", k.spec()));
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut checked = Vec::new();
    for (alpha, beta) in small_products() {
        let k = NilGroup::product(alpha, beta).unwrap();
        let t = oracle::enumerate(k.clone(), SMALL).unwrap();
        let expected = alpha + 4 * beta - u32::from(alpha == beta);
        // r, s, t, u, v moduli of the Struik normal form
        let struik =
            alpha + beta + (beta + 1) + if alpha == beta { beta - 1 } else { beta } + (beta - 1);
        if t.order() as u64 != 1 << expected || struik != expected {
            return outcome(
                false,
                format!(
                    "G({alpha},{beta}) has {} elements, expected 2^{expected}",
                    t.order()
                ),
            );
        }
        if k.order_of(&k.a()) != 1 << alpha || k.order_of(&k.b()) != 1 << beta {
            return outcome(false, format!("G({alpha},{beta}): wrong generator orders"));
        }
        if let Err(e) = structural_checks(&k, &t) {
            return outcome(false, e);
        }
        checked.push(format!("G({alpha},{beta})=2^{expected}"));
    }
    let fast = start.elapsed() < Duration::from_secs(60);
    outcome(
        fast,
        format!("{} groups: {}", checked.len(), checked.join(" ")),
    )
}

fn criterion_2() -> Outcome {
    let mut checked = Vec::new();
    for beta in 2..=4 {
        for alpha in beta..=10 {
            for gamma in 1..beta {
                let expected = alpha + 2 * beta + 2 * gamma;
                if expected > 12 {
                    continue;
                }
                let k = NilGroup::with_central_powers(alpha, beta, gamma).unwrap();
                let t = oracle::enumerate(k.clone(), SMALL).unwrap();
                if t.order() as u64 != 1 << expected {
                    return outcome(
                        false,
                        format!("K({alpha},{beta},{gamma}) has {} elements", t.order()),
                    );
                }
                let m = k.moduli();
                if m != [1 << alpha, 1 << beta, 1 << beta, 1 << gamma, 1 << gamma] {
                    return outcome(false, format!("K({alpha},{beta},{gamma}) moduli {m:?}"));
                }
                if let Err(e) = structural_checks(&k, &t) {
                    return outcome(false, e);
                }
                checked.push(format!("K({alpha},{beta},{gamma})"));
            }
        }
    }
    outcome(
        !checked.is_empty(),
        format!("{} groups: {}", checked.len(), checked.join(" ")),
    )
}

fn assoc_full(t: &GroupTable) -> usize {
    let n = t.order();
    let mut bad = 0;
    for x in 0..n {
        for y in 0..n {
            let xy = t.mul(x, y);
            for z in 0..n {
                bad += usize::from(t.mul(xy, z) != t.mul(x, t.mul(y, z)));
            }
        }
    }
    bad
}

fn axioms_random(t: &GroupTable, samples: usize, rng: &mut ChaCha8Rng) -> usize {
    let n = t.order();
    let e = t.identity();
    let mut bad = 0;
    for _ in 0..samples {
        let (x, y, z) = (
            rng.gen_range(0..n),
            rng.gen_range(0..n),
            rng.gen_range(0..n),
        );
        bad += usize::from(t.mul(t.mul(x, y), z) != t.mul(x, t.mul(y, z)));
        bad += usize::from(t.mul(x, e) != x || t.mul(e, x) != x);
        bad += usize::from(t.mul(x, t.inv(x)) != e);
    }
    bad
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut violations = 0;
    let mut full = 0;
    let mut t = oracle::enumerate(NilGroup::product(2, 1).unwrap(), SMALL).unwrap();
    t.memoize();
    violations += assoc_full(&t);
    full += 1;
    for k in 1..=6 {
        for p in TypeParams::all_of_order_log2(k) {
            let mut t = model(&p).table();
            t.memoize();
            violations += assoc_full(&t);
            full += 1;
        }
    }
    let large: Vec<GroupTable> = vec![
        oracle::enumerate(NilGroup::product(3, 2).unwrap(), BUDGET).unwrap(),
        oracle::enumerate(NilGroup::product(3, 3).unwrap(), BUDGET).unwrap(),
        oracle::enumerate(NilGroup::with_central_powers(3, 3, 2).unwrap(), BUDGET).unwrap(),
        oracle::enumerate(NilGroup::with_central_powers(4, 4, 2).unwrap(), BUDGET).unwrap(),
        model(&TypeParams::i(4, 4, 4).unwrap()).table(),
        model(&TypeParams::ii(4, 4, 2, 1).unwrap()).table(),
        model(&TypeParams::iii(3).unwrap()).table(),
    ];
    for t in &large {
        violations += axioms_random(t, 100_000, &mut rng);
    }
    outcome(
        violations == 0,
        format!(
            "{full} groups fully associative, {} groups x 1e5 random triples, {violations} violations",
            large.len()
        ),
    )
}

struct Ops<'a>(&'a NilGroup);

impl Ops<'_> {
    fn m(&self, x: &NilElt, y: &NilElt) -> NilElt {
        self.0.mul(x, y)
    }
    fn c(&self, x: &NilElt, y: &NilElt) -> NilElt {
        self.0.commutator(x, y)
    }
    fn p(&self, x: &NilElt, n: i64) -> NilElt {
        self.0.pow(x, n)
    }
    fn conj(&self, x: &NilElt, y: &NilElt) -> NilElt {
        self.m(&self.m(&self.0.inv(y), x), y)
    }
}

/// Identities (a)-(e), exact for (a)-(d) in class three and modulo the third
/// term of the lower central series for (e).
fn identity_violations(
    k: &NilGroup,
    x: &NilElt,
    y: &NilElt,
    z: &NilElt,
    r: i64,
    s: i64,
) -> Vec<char> {
    let o = Ops(k);
    let mut bad = Vec::new();
    let xz = o.c(x, z);
    let lhs = o.c(&o.m(x, y), z);
    if lhs != o.m(&o.conj(&xz, y), &o.c(y, z)) || lhs != o.m(&o.m(&xz, &o.c(&xz, y)), &o.c(y, z)) {
        bad.push('a');
    }
    let lhs = o.c(x, &o.m(y, z));
    let xy = o.c(x, y);
    if lhs != o.m(&xz, &o.conj(&xy, z)) || lhs != o.m(&o.m(&xz, &o.c(z, &o.c(y, x))), &xy) {
        bad.push('b');
    }
    let xyx = o.c(&xy, x);
    let xyy = o.c(&xy, y);
    let rhs_c = o.m(
        &o.m(&o.p(&xy, r * s), &o.p(&xyx, s * binom2(r))),
        &o.p(&xyy, r * binom2(s)),
    );
    if o.c(&o.p(x, r), &o.p(y, s)) != rhs_c {
        bad.push('c');
    }
    let rhs_d = o.m(
        &o.m(&o.p(&xy, -r * s), &o.p(&xyx, -s * binom2(r))),
        &o.p(&xyy, -r * binom2(s)),
    );
    if o.c(&o.p(y, s), &o.p(x, r)) != rhs_d {
        bad.push('d');
    }
    let n = r;
    let lhs = o.p(&o.m(x, y), n);
    let rhs = o.m(&o.m(&o.p(x, n), &o.p(y, n)), &o.p(&o.c(y, x), binom2(n)));
    let diff = o.m(&lhs, &k.inv(&rhs));
    // third term of the lower central series: r = s = 0 and no [a,b] part
    if diff.coords()[..3] != [0, 0, 0] {
        bad.push('e');
    }
    bad
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut groups: Vec<NilGroup> = vec![
        NilGroup::product(1, 1).unwrap(),
        NilGroup::product(2, 1).unwrap(),
        NilGroup::product(2, 2).unwrap(),
        NilGroup::product(3, 2).unwrap(),
        NilGroup::product(4, 4).unwrap(),
        NilGroup::product(6, 3).unwrap(),
        NilGroup::with_central_powers(3, 3, 2).unwrap(),
    ];
    for p in [
        TypeParams::ii(3, 2, 2, 1).unwrap(),
        TypeParams::ii(4, 4, 2, 1).unwrap(),
    ] {
        groups.push(NilGroup::build(build_witness(&p).unwrap().ambient).unwrap());
    }
    let mut violations = Vec::new();
    for k in &groups {
        let n = k.order() as usize;
        for _ in 0..10_000 {
            let [x, y, z] = [0; 3].map(|_| k.element(rng.gen_range(0..n)));
            let (r, s) = (rng.gen_range(-40..=40), rng.gen_range(-40..=40));
            let bad = identity_violations(k, &x, &y, &z, r, s);
            if !bad.is_empty() {
                violations.push(format!(
                    "{} {bad:?} at x={x} y={y} z={z} r={r} s={s}",
                    k.spec()
                ));
            }
        }
    }
    // and in the free class-3 group itself
    let mut free_bad = 0;
    for _ in 0..10_000 {
        let [x, y, z] = [0; 3].map(|_| {
            let mut c = [0i64; 5];
            c.iter_mut().for_each(|v| *v = rng.gen_range(-30..=30));
            FreeElt::new(c[0], c[1], c[2], c[3], c[4])
        });
        let (r, s) = (rng.gen_range(-30..=30), rng.gen_range(-30..=30));
        let xy = x.commutator(&y);
        let (xyx, xyy) = (xy.commutator(&x), xy.commutator(&y));
        let c_ok = x.pow(r).commutator(&y.pow(s))
            == xy
                .pow(r * s)
                .mul(&xyx.pow(s * binom2(r)))
                .mul(&xyy.pow(r * binom2(s)));
        let a_ok =
            x.mul(&y).commutator(&z) == x.commutator(&z).conjugate(&y).mul(&y.commutator(&z));
        free_bad += usize::from(!c_ok || !a_ok);
    }
    let pass = violations.is_empty() && free_bad == 0;
    let mut detail = format!(
        "{} groups x 1e4 instances, {} violations; free group: {free_bad} violations",
        groups.len(),
        violations.len()
    );
    if let Some(v) = violations.first() {
        detail.push_str(&format!("; first: {v}"));
    }
    outcome(pass, detail)
}

fn criterion_5() -> Outcome {
    let groups = [
        NilGroup::product(2, 1).unwrap(),
        NilGroup::product(2, 2).unwrap(),
        NilGroup::product(3, 2).unwrap(),
        NilGroup::product(1, 1).unwrap(),
        NilGroup::with_central_powers(3, 3, 2).unwrap(),
    ];
    let mut details = Vec::new();
    for k in &groups {
        let t = oracle::enumerate(k.clone(), BUDGET).unwrap();
        let brute = oracle::brute_center(&t);
        let center = k.center();
        let gens: Vec<usize> = center.generators().iter().map(|z| k.index_of(z)).collect();
        let span = oracle::closure(&t, &gens);
        if span.members() != brute.members() {
            return outcome(
                false,
                format!(
                    "{}: |closure|={} |brute|={}",
                    k.spec(),
                    span.order(),
                    brute.order()
                ),
            );
        }
        details.push(format!("{}:|Z|={}", k.spec(), brute.order()));
    }
    outcome(true, details.join(" "))
}

/// The final classification theorem, transcribed independently of `decide`.
fn expected_clause(p: &TypeParams) -> Option<Clause> {
    match *p {
        TypeParams::I { alpha, beta, gamma } => {
            if alpha == beta {
                Some(Clause::A)
            } else if alpha == beta + 1 && beta == gamma {
                Some(Clause::B)
            } else {
                None
            }
        }
        TypeParams::II {
            alpha,
            beta,
            gamma,
            sigma,
        } => {
            if alpha == beta && gamma + 1 < beta {
                Some(Clause::C)
            } else if alpha == beta + 1 && beta == gamma && gamma == sigma + 1 {
                Some(Clause::D)
            } else {
                None
            }
        }
        TypeParams::III { .. } => None,
    }
}

fn criterion_6() -> Outcome {
    let params: Vec<TypeParams> = TypeParams::all_bounded(4)
        .into_iter()
        .filter(|p| match *p {
            TypeParams::III { gamma } => gamma < 4,
            _ => true,
        })
        .collect();
    let mut mismatches = Vec::new();
    let mut necessity = Vec::new();
    let mut failures = Vec::new();
    let mut largest_constructed = 0u64;
    let mut largest_reduced = 0u64;
    let mut capable = 0;
    for p in &params {
        let v = decide(p);
        if v.clause != expected_clause(p) {
            mismatches.push(p.to_string());
        }
        let g = model(p);
        match v.obstruction {
            Some(Obstruction::GeneratorOrders)
                if order_conditions(&generator_order_exponents(&g)) != Ok(false) =>
            {
                necessity.push(p.to_string())
            }
            Some(Obstruction::CommutatorOrder) if commutator_order_condition(&g) => {
                necessity.push(p.to_string())
            }
            _ => {}
        }
        let Ok(w) = build_witness(p) else { continue };
        capable += 1;
        let constructed = verify_witness(&w, CONSTRUCTION_BUDGET);
        let small = shrink_witness(&w)
            .map_err(capability::VerifyError::from)
            .and_then(|s| verify_witness(&s, BUDGET));
        match (constructed, small) {
            (Ok(a), Ok(b)) if a.passed() && b.passed() => {
                largest_constructed = largest_constructed.max(a.k_order);
                largest_reduced = largest_reduced.max(b.k_order);
            }
            (a, b) => failures.push(format!(
                "{p}: constructed {:?} reduced {:?}",
                a.map(|r| r.failure),
                b.map(|r| r.failure)
            )),
        }
    }
    let pass = mismatches.is_empty()
        && necessity.is_empty()
        && failures.is_empty()
        && largest_reduced <= BUDGET;
    outcome(
        pass,
        format!(
            "{} tuples, {capable} capable; clause mismatches {:?}; necessity inconsistencies {:?}; \
             verification failures {:?}; largest constructed witness 2^{}, largest reduced witness 2^{} (budget 2^16)",
            params.len(),
            mismatches,
            necessity,
            failures,
            log2(largest_constructed),
            log2(largest_reduced)
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut problems = Vec::new();
    let d8 = TypeParams::i(1, 1, 1).unwrap();
    if model(&d8).fingerprint().involutions() != 5 || model(&d8).order() != 8 {
        problems.push("I(1,1,1) is not dihedral of order 8".to_string());
    }
    match capability::verify(&d8, BUDGET) {
        Ok(r) if r.passed() && r.clause == Clause::A && r.k_order == 16 && r.center_order == 2 => {}
        other => problems.push(format!("I(1,1,1): {other:?}")),
    }
    let q8 = TypeParams::iii(1).unwrap();
    if model(&q8).fingerprint().involutions() != 1 {
        problems.push("III(1) does not have a single involution".into());
    }
    if decide(&q8).capable() {
        problems.push("III(1) decided capable".into());
    }
    let b = TypeParams::i(3, 2, 2).unwrap();
    match capability::verify(&b, BUDGET) {
        Ok(r) if r.passed() && r.clause == Clause::B => {}
        other => problems.push(format!("I(3,2,2): {other:?}")),
    }
    let d = TypeParams::ii(3, 2, 2, 1).unwrap();
    let mut n_order = 0;
    match capability::verify(&d, BUDGET) {
        Ok(r) if r.passed() && r.clause == Clause::D => {
            n_order = r.n_order();
            if n_order != 2 {
                problems.push(format!("II(3,2,2,1): |N| = {n_order}"));
            }
        }
        other => problems.push(format!("II(3,2,2,1): {other:?}")),
    }
    outcome(
        problems.is_empty(),
        format!("D8 witness |K|=16, Q8 not capable, I(3,2,2) clause b, II(3,2,2,1) clause d with |N|={n_order}; problems {problems:?}"),
    )
}

fn criterion_8() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for (alpha, gamma, sigma) in [(3, 2, 1), (4, 2, 1), (4, 2, 0), (4, 1, 0), (3, 1, 0)] {
        let scan = membership_congruence_scan(alpha, gamma, sigma).unwrap();
        pass &= scan.clean();
        details.push(format!(
            "K({alpha},{alpha},{gamma}) sigma={sigma}: {} elements, |N|={}, {} membership mismatches{}",
            scan.elements,
            scan.members,
            scan.membership_mismatches.len(),
            if scan.center_checked {
                format!(", {} centrality mismatches", scan.center_mismatches.len())
            } else {
                String::new()
            }
        ));
    }
    outcome(pass, details.join("; "))
}

fn criterion_9() -> Outcome {
    let groups = vec![
        NilGroup::product(1, 1).unwrap(),
        NilGroup::product(2, 1).unwrap(),
        NilGroup::product(2, 2).unwrap(),
        NilGroup::product(3, 1).unwrap(),
        NilGroup::product(3, 2).unwrap(),
        NilGroup::product(4, 2).unwrap(),
        NilGroup::product(8, 1).unwrap(),
        NilGroup::with_central_powers(2, 2, 1).unwrap(),
        NilGroup::with_central_powers(3, 3, 1).unwrap(),
        NilGroup::build(general_type_ambient(2, 1, 0)).unwrap(),
        NilGroup::build(general_type_ambient(3, 2, 1)).unwrap(),
        NilGroup::build(
            build_witness(&TypeParams::ii(3, 2, 2, 1).unwrap())
                .unwrap()
                .ambient,
        )
        .unwrap(),
    ];
    let mut met = [0usize; 3];
    let mut counterexamples = Vec::new();
    for k in &groups {
        assert!(k.order() <= SMALL);
        let ctx = LemmaContext::new(k.clone(), SMALL).unwrap();
        let s = ctx.scan();
        for (i, tally) in [&s.commcond, &s.halfstep, &s.exceptional]
            .into_iter()
            .enumerate()
        {
            met[i] += tally.hypotheses_met;
            counterexamples.extend(
                tally
                    .counterexamples
                    .iter()
                    .map(|c| format!("{}: {c}", k.spec())),
            );
        }
    }
    // the instance behind the half-step obstruction: x = a, y = b in
    // G(3,3) / <[a,b,a]^4, [a,b,b]^4, [w,a], [w,b]>
    let k = NilGroup::build(general_type_ambient(3, 2, 1)).unwrap();
    let ctx = LemmaContext::new(k.clone(), SMALL).unwrap();
    let named = ctx.halfstep(&k.a(), &k.b(), 3).unwrap() == LemmaOutcome::Holds;
    let pass = counterexamples.is_empty() && met.iter().all(|&m| m > 0) && named;
    outcome(
        pass,
        format!(
            "{} groups; hypothesis-satisfying instances: commcond {}, halfstep {}, exceptional {}; \
             named half-step instance holds: {named}; counterexamples {}",
            groups.len(),
            met[0],
            met[1],
            met[2],
            counterexamples.len()
        ),
    )
}

fn criterion_10() -> Outcome {
    let not_capable = TypeParams::i(3, 2, 1).unwrap();
    let refusal = build_witness(&not_capable).unwrap_err().to_string();
    let report = capability::verify(&TypeParams::i(1, 1, 1).unwrap(), BUDGET).unwrap();
    let stated = refusal.contains(NON_CAPABILITY_DISCLAIMER)
        && report.notes.iter().any(|n| n == NON_CAPABILITY_DISCLAIMER)
        && report.to_string().contains(NON_CAPABILITY_DISCLAIMER);
    outcome(
        stated,
        "non-capability is not exhaustively certified; refusals and reports say so, criteria 8-9 check the proof mechanisms",
    )
}
