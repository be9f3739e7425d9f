//! Capability of two-generator 2-groups of class two: necessary conditions,
//! the decision procedure, witness groups and their verification, and
//! executable forms of the non-capability arguments.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::class2::{model, Class2Group, TypeParams};
use crate::hall::FreeElt;
use crate::lattice::CommLattice;
use crate::nilprod::{product_order_log2, BuildError, Center, GroupSpec, NilElt, NilGroup};
use crate::oracle::{self, GroupTable, OracleError};

/// Printed with every negative verdict and every report.
pub const NON_CAPABILITY_DISCLAIMER: &str = "non-capability is reported from the classification \
     theorem and is not certified by search: no finite bound on witness size exists";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Clause {
    A,
    B,
    C,
    D,
}

impl Clause {
    pub fn letter(self) -> char {
        match self {
            Clause::A => 'a',
            Clause::B => 'b',
            Clause::C => 'c',
            Clause::D => 'd',
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Clause::A => "type I with alpha = beta",
            Clause::B => "type I with alpha = beta+1 = gamma+1",
            Clause::C => "type II with alpha = beta and gamma < beta-1",
            Clause::D => "type II with alpha = beta+1 = gamma+1 = sigma+2",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Why a group is not capable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Obstruction {
    /// Generator orders `2^r1 <= 2^r2` with `r2 > r1 + 1`.
    GeneratorOrders,
    /// `r2 = r1 + 1` but `[a,b]` has order below `2^r1`.
    CommutatorOrder,
    /// `x^(2^α)`, `[x,y]^(2^(α-1))`, `x^(2^(α-1)) [x,y]^(-2^(α-2))` central
    /// force `y^(2^(α-1))` into the center.
    HalfStep,
    /// `a^(2^γ) = b^(2^γ)` forces the lift of `a^(2^γ)` into the center.
    Exceptional,
}

impl Obstruction {
    pub fn describe(self) -> &'static str {
        match self {
            Obstruction::GeneratorOrders => "generator orders 2^r1 <= 2^r2 violate r2 <= r1+1",
            Obstruction::CommutatorOrder => "r2 = r1+1 but [a,b] has order below 2^r1",
            Obstruction::HalfStep => {
                "type II with alpha = beta = gamma+1: any lift of b^(2^(alpha-1)) is central"
            }
            Obstruction::Exceptional => "type III: any lift of a^(2^gamma) is central",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub params: TypeParams,
    pub clause: Option<Clause>,
    pub obstruction: Option<Obstruction>,
}

impl Verdict {
    pub fn capable(&self) -> bool {
        self.clause.is_some()
    }

    pub fn rationale(&self) -> String {
        match (self.clause, self.obstruction) {
            (Some(c), _) => format!("clause ({c}): {}", c.describe()),
            (None, Some(o)) => o.describe().to_string(),
            (None, None) => unreachable!("verdict without clause or obstruction"),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.clause {
            Some(c) => write!(f, "verdict=capable clause={c}"),
            None => write!(f, "verdict=not_capable clause=-"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConditionError {
    #[error("empty list of generator order exponents")]
    Empty,
    #[error("generator order exponents must be >= 1 and nondecreasing: {0:?}")]
    Malformed(Vec<u32>),
}

/// For generators of orders `2^r1 <= ... <= 2^rm` of a capable group:
/// `m > 1` and `r_m <= r_(m-1) + 1`.
pub fn order_conditions(orders: &[u32]) -> Result<bool, ConditionError> {
    if orders.is_empty() {
        return Err(ConditionError::Empty);
    }
    if orders[0] < 1 || orders.windows(2).any(|w| w[0] > w[1]) {
        return Err(ConditionError::Malformed(orders.to_vec()));
    }
    let m = orders.len();
    Ok(m > 1 && orders[m - 1] <= orders[m - 2] + 1)
}

/// With generator orders `2^r1 <= 2^r2` and `r2 = r1 + 1`, a capable group
/// has `[a,b]` of order exactly `2^r1`. Otherwise vacuously true.
pub fn commutator_order_condition(g: &Class2Group) -> bool {
    let [oa, ob, oc] = g.generator_orders();
    let (r1, r2) = (oa.min(ob).trailing_zeros(), oa.max(ob).trailing_zeros());
    r2 != r1 + 1 || oc == 1 << r1
}

/// Sorted generator order exponents of the presented generators.
pub fn generator_order_exponents(g: &Class2Group) -> [u32; 2] {
    let [oa, ob, _] = g.generator_orders();
    let mut e = [oa.trailing_zeros(), ob.trailing_zeros()];
    e.sort_unstable();
    e
}

pub fn decide(p: &TypeParams) -> Verdict {
    let (clause, obstruction) = match *p {
        TypeParams::I { alpha, beta, gamma } => {
            if alpha == beta {
                (Some(Clause::A), None)
            } else if alpha == beta + 1 && gamma == beta {
                (Some(Clause::B), None)
            } else if alpha == beta + 1 {
                (None, Some(Obstruction::CommutatorOrder))
            } else {
                (None, Some(Obstruction::GeneratorOrders))
            }
        }
        TypeParams::II {
            alpha,
            beta,
            gamma,
            sigma,
        } => {
            let (lo, hi) = (alpha.min(beta), alpha.max(beta));
            if hi > lo + 1 {
                (None, Some(Obstruction::GeneratorOrders))
            } else if hi == lo + 1 && gamma < lo {
                (None, Some(Obstruction::CommutatorOrder))
            } else if alpha == beta && gamma + 1 < beta {
                (Some(Clause::C), None)
            } else if alpha == beta {
                (None, Some(Obstruction::HalfStep))
            } else if alpha == beta + 1 && gamma == beta && sigma + 1 == beta {
                (Some(Clause::D), None)
            } else {
                unreachable!("type II parameters {p} escape the clause table")
            }
        }
        TypeParams::III { .. } => (None, Some(Obstruction::Exceptional)),
    };
    Verdict {
        params: *p,
        clause,
        obstruction,
    }
}

/// A class-3 group `K` meant to satisfy `K / Z(K) ≅ target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessSpec {
    pub ambient: GroupSpec,
    pub target: TypeParams,
    pub clause: Clause,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{} is not capable: {}; {NON_CAPABILITY_DISCLAIMER}", .0.params, .0.rationale())]
pub struct NotCapable(pub Verdict);

/// `w = a^(2^(α+σ-γ)) [a,b]^(-2^σ)`, whose image generates the extra
/// relation of a type II group.
pub fn type_two_relator(alpha: u32, gamma: u32, sigma: u32) -> FreeElt {
    FreeElt::A
        .pow(1 << (alpha + sigma - gamma))
        .mul(&FreeElt::C.pow(-(1 << sigma)))
}

/// `G(α,α)` modulo `[a,b,a]^(2^γ)`, `[a,b,b]^(2^γ)`, `[w,a]`, `[w,b]` with
/// `w` from [`type_two_relator`].
pub fn general_type_ambient(alpha: u32, gamma: u32, sigma: u32) -> GroupSpec {
    let w = type_two_relator(alpha, gamma, sigma);
    GroupSpec::with_central_powers(alpha, alpha, gamma)
        .with_extra(w.commutator(&FreeElt::A))
        .with_extra(w.commutator(&FreeElt::B))
}

pub fn build_witness(p: &TypeParams) -> Result<WitnessSpec, NotCapable> {
    let verdict = decide(p);
    let Some(clause) = verdict.clause else {
        return Err(NotCapable(verdict));
    };
    let ambient = match (*p, clause) {
        (TypeParams::I { beta, gamma, .. }, Clause::A) if gamma < beta => {
            GroupSpec::with_central_powers(beta, beta, gamma)
        }
        (TypeParams::I { beta, .. }, Clause::A) => GroupSpec::product(beta, beta),
        (TypeParams::I { beta, .. }, Clause::B) => GroupSpec::product(beta + 1, beta),
        (
            TypeParams::II {
                alpha,
                gamma,
                sigma,
                ..
            },
            Clause::C,
        ) => general_type_ambient(alpha, gamma, sigma),
        (TypeParams::II { beta, .. }, Clause::D) => {
            let w = type_two_relator(beta + 1, beta, beta - 1);
            GroupSpec::product(beta + 1, beta)
                .with_extra(w.commutator(&FreeElt::A))
                .with_extra(w.commutator(&FreeElt::B))
        }
        _ => unreachable!("clause {clause} for {p}"),
    };
    Ok(WitnessSpec {
        ambient,
        target: *p,
        clause,
    })
}

/// Quotients the witness by further central elements as long as the central
/// quotient keeps its order, giving a smaller group with the same central
/// quotient. Candidates are tried in order of decreasing element order, then
/// by coordinates; the result is maximal but not necessarily minimum.
pub fn shrink_witness(w: &WitnessSpec) -> Result<WitnessSpec, BuildError> {
    let mut k = NilGroup::build(w.ambient.clone())?;
    let quotient = k.order() / k.center().order();
    let center = k.center();
    let mut candidates: Vec<FreeElt> = k
        .span(center.generators())
        .into_iter()
        .filter(|z| z.coords()[..2] == [0, 0])
        .map(|z| z.lift())
        .collect();
    candidates.sort_by_key(|z| (std::cmp::Reverse(k.order_of(&k.reduce(z))), z.coords()));
    let mut spec = w.ambient.clone();
    for z in candidates {
        if k.reduce(&z) == k.identity() {
            continue;
        }
        let trial = NilGroup::build(spec.clone().with_extra(z))?;
        if trial.order() / trial.center().order() == quotient {
            spec = trial.spec().clone();
            k = trial;
        }
    }
    Ok(WitnessSpec {
        ambient: spec,
        ..w.clone()
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    NotCapable(#[from] NotCapable),
    #[error("witness does not build: {0}")]
    Build(#[from] BuildError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Outcome of checking a witness against the oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub target: TypeParams,
    pub clause: Clause,
    pub ambient: GroupSpec,
    /// `|G(α₀,β₀)|` for the ambient nilpotent product.
    pub product_order: u64,
    pub k_order: u64,
    pub center_order: u64,
    pub center_generators: Vec<String>,
    /// Congruence-solver center equals the brute-force center as sets.
    pub center_agrees: bool,
    pub quotient_order: u64,
    /// Images in `K / Z(K)` of the target's generators `a`, `b`.
    pub images: Option<[String; 2]>,
    pub failure: Option<String>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    /// Order of the subgroup `N` factored out of the nilpotent product.
    pub fn n_order(&self) -> u64 {
        self.product_order / self.k_order
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "target: {} clause ({})", self.target, self.clause)?;
        writeln!(f, "K = {}", self.ambient)?;
        writeln!(
            f,
            "|K|={} |Z(K)|={} |N|={} |K/Z(K)|={}",
            self.k_order,
            self.center_order,
            self.n_order(),
            self.quotient_order
        )?;
        writeln!(f, "Z(K) = <{}>", self.center_generators.join(", "))?;
        writeln!(
            f,
            "center cross-check: {}",
            if self.center_agrees {
                "agree"
            } else {
                "DISAGREE"
            }
        )?;
        if let Some([x, y]) = &self.images {
            writeln!(f, "a -> {x}Z(K), b -> {y}Z(K)")?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        write!(f, "|K|={} |Z(K)|={} ", self.k_order, self.center_order)?;
        match &self.failure {
            None => write!(f, "iso=PASS"),
            Some(why) => write!(f, "iso=FAIL ({why})"),
        }
    }
}

/// Builds the witness for `p` and verifies it, refusing non-capable groups.
/// A witness larger than `max_order` is first reduced by [`shrink_witness`].
pub fn verify(p: &TypeParams, max_order: u64) -> Result<Report, VerifyError> {
    let w = build_witness(p)?;
    let full = NilGroup::build(w.ambient.clone())?.order();
    if full <= max_order {
        return verify_witness(&w, max_order);
    }
    let small = shrink_witness(&w)?;
    let mut report = verify_witness(&small, max_order)?;
    report.notes.push(format!(
        "constructed witness {} has order {full} > {max_order}; verified the reduced witness instead",
        w.ambient
    ));
    Ok(report)
}

pub fn verify_witness(w: &WitnessSpec, max_order: u64) -> Result<Report, VerifyError> {
    let k = NilGroup::build(w.ambient.clone())?;
    let target = model(&w.target);
    let product_order = 1u64 << product_order_log2(k.alpha(), k.beta());
    let center = k.center();
    let t = oracle::enumerate(k.clone(), max_order)?;
    let brute = oracle::brute_center(&t);

    let mut notes = vec![NON_CAPABILITY_DISCLAIMER.to_string()];
    if let TypeParams::I { alpha, beta, gamma } = w.target {
        if alpha == beta && beta == gamma {
            notes.push(
                "alpha = beta = gamma: the witness G(beta,beta) is confirmed by computation only"
                    .to_string(),
            );
        }
    }

    let center_agrees = center_matches(&k, &center, &brute);
    let mut report = Report {
        target: w.target,
        clause: w.clause,
        ambient: w.ambient.clone(),
        product_order,
        k_order: k.order(),
        center_order: center.order(),
        center_generators: center.generators().iter().map(|z| z.to_string()).collect(),
        center_agrees,
        quotient_order: 0,
        images: None,
        failure: None,
        notes,
    };
    if !center_agrees {
        report.failure = Some("congruence center disagrees with brute-force center".into());
        return Ok(report);
    }
    let q = oracle::quotient_central(&t, &brute)?;
    report.quotient_order = q.order() as u64;
    if report.quotient_order != target.order() {
        report.failure = Some(format!(
            "|K/Z(K)| = {} but the target has order {}",
            q.order(),
            target.order()
        ));
        return Ok(report);
    }
    match oracle::iso_2gen(&q, &target) {
        Some(iso) => report.images = Some(iso.images.map(|i| q.label(i))),
        None => report.failure = Some("no isomorphism K/Z(K) -> target".into()),
    }
    Ok(report)
}

fn center_matches(k: &NilGroup, center: &Center, brute: &oracle::Subgroup) -> bool {
    use crate::oracle::FiniteGroup;
    if brute.order() as u64 != center.order() {
        return false;
    }
    if !brute
        .members()
        .iter()
        .all(|&i| center.contains(&k.element(i)))
    {
        return false;
    }
    let span = k.span(center.generators());
    span.len() == brute.order() && span.iter().all(|z| brute.contains(k.index_of(z)))
}

// ---------------------------------------------------------------------------
// lemma checkers

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LemmaOutcome {
    Holds,
    /// Hypotheses unmet; the note names the first failing one.
    Vacuous(String),
    Counterexample(String),
}

impl LemmaOutcome {
    pub fn passed(&self) -> bool {
        !matches!(self, LemmaOutcome::Counterexample(_))
    }

    pub fn hypotheses_met(&self) -> bool {
        !matches!(self, LemmaOutcome::Vacuous(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LemmaError {
    #[error(
        "need m >= 2 elements with m exponents r and m-1 exponents gamma (got {y}, {r}, {gamma})"
    )]
    Lengths { y: usize, r: usize, gamma: usize },
    #[error("alpha must exceed 1 (got {0})")]
    AlphaTooSmall(u32),
}

/// A class-3 group together with its center and central quotient, shared by
/// the lemma checkers.
pub struct LemmaContext {
    k: NilGroup,
    center: Center,
    quotient: GroupTable,
    coset: Vec<usize>,
    reps: Vec<NilElt>,
}

impl LemmaContext {
    pub fn new(k: NilGroup, bound: u64) -> Result<Self, OracleError> {
        let center = k.center();
        let t = oracle::enumerate(k.clone(), bound)?;
        let z = oracle::brute_center(&t);
        let mut quotient = oracle::quotient_central(&t, &z)?;
        if quotient.order() <= 1 << 10 {
            quotient.memoize();
        }
        let coset = oracle::coset_map(&t, &z);
        let mut reps = vec![None; quotient.order()];
        for (i, &c) in coset.iter().enumerate() {
            if reps[c].is_none() {
                reps[c] = Some(oracle::FiniteGroup::element(&k, i));
            }
        }
        let reps = reps.into_iter().map(Option::unwrap).collect();
        Ok(LemmaContext {
            k,
            center,
            quotient,
            coset,
            reps,
        })
    }

    pub fn group(&self) -> &NilGroup {
        &self.k
    }

    /// One element of `K` per coset of `Z(K)`.
    pub fn coset_representatives(&self) -> &[NilElt] {
        &self.reps
    }

    fn image(&self, x: &NilElt) -> usize {
        self.coset[oracle::FiniteGroup::index_of(&self.k, x)]
    }

    pub fn is_central(&self, x: &NilElt) -> bool {
        self.center.contains(x)
    }

    pub fn generates_mod_center(&self, ys: &[NilElt]) -> bool {
        let imgs: Vec<usize> = ys.iter().map(|y| self.image(y)).collect();
        oracle::closure(&self.quotient, &imgs).order() == self.quotient.order()
    }

    /// Smallest `r` with `x^(2^r)` central.
    pub fn order_mod_center_log2(&self, x: &NilElt) -> u32 {
        self.quotient.element_order(self.image(x)).trailing_zeros()
    }

    fn centralizes(&self, z: &NilElt, xs: &[&NilElt]) -> bool {
        xs.iter().all(|x| self.k.commutes(z, x))
    }

    fn pow2(&self, x: &NilElt, e: i64) -> NilElt {
        self.k.pow(x, e)
    }

    /// If `y_1..y_m` generate `K` mod `Z(K)`, `y_i^(2^r_i)` is central with
    /// `1 <= r_1 <= ... <= r_m`, and `[y_m,y_i]^(2^γ_i)` commutes with `y_i`
    /// and `y_m` for some `0 <= γ_i < r_(m-1)`, then `y_m^(2^r_(m-1))` is
    /// central.
    pub fn commcond(
        &self,
        y: &[NilElt],
        r: &[u32],
        gamma: &[u32],
    ) -> Result<LemmaOutcome, LemmaError> {
        let m = y.len();
        if m < 2 || r.len() != m || gamma.len() + 1 != m {
            return Err(LemmaError::Lengths {
                y: m,
                r: r.len(),
                gamma: gamma.len(),
            });
        }
        if r[0] < 1 || r.windows(2).any(|w| w[0] > w[1]) {
            return Ok(LemmaOutcome::Vacuous(format!(
                "exponents {r:?} not 1 <= r_1 <= ... <= r_m"
            )));
        }
        if !self.generates_mod_center(y) {
            return Ok(LemmaOutcome::Vacuous(
                "elements do not generate K modulo Z(K)".into(),
            ));
        }
        for (i, (yi, &ri)) in y.iter().zip(r).enumerate() {
            if !self.is_central(&self.pow2(yi, 1 << ri)) {
                return Ok(LemmaOutcome::Vacuous(format!(
                    "y_{}^(2^{ri}) not central",
                    i + 1
                )));
            }
        }
        let ym = &y[m - 1];
        let rm1 = r[m - 2];
        for (i, (yi, &g)) in y[..m - 1].iter().zip(gamma).enumerate() {
            if g >= rm1 {
                return Ok(LemmaOutcome::Vacuous(format!(
                    "gamma_{} = {g} >= r_(m-1) = {rm1}",
                    i + 1
                )));
            }
            let c = self.pow2(&self.k.commutator(ym, yi), 1 << g);
            if !self.centralizes(&c, &[yi, ym]) {
                return Ok(LemmaOutcome::Vacuous(format!(
                    "[y_m,y_{}]^(2^{g}) does not commute with y_{} and y_m",
                    i + 1,
                    i + 1
                )));
            }
        }
        let z = self.pow2(ym, 1 << rm1);
        Ok(if self.is_central(&z) {
            LemmaOutcome::Holds
        } else {
            LemmaOutcome::Counterexample(format!(
                "y = ({}), r = {r:?}, gamma = {gamma:?}: y_m^(2^{rm1}) = {z} not central",
                join(y)
            ))
        })
    }

    /// If `x^(2^α)`, `[x,y]^(2^(α-1))` and `x^(2^(α-1)) [x,y]^(-2^(α-2))`
    /// centralize `<x,y>`, then `y^(2^(α-1))` commutes with `x`.
    pub fn halfstep(&self, x: &NilElt, y: &NilElt, alpha: u32) -> Result<LemmaOutcome, LemmaError> {
        if alpha <= 1 {
            return Err(LemmaError::AlphaTooSmall(alpha));
        }
        let k = &self.k;
        let c = k.commutator(x, y);
        let hyps = [
            ("x^(2^alpha)", self.pow2(x, 1 << alpha)),
            ("[x,y]^(2^(alpha-1))", self.pow2(&c, 1 << (alpha - 1))),
            (
                "x^(2^(alpha-1)) [x,y]^(-2^(alpha-2))",
                k.mul(
                    &self.pow2(x, 1 << (alpha - 1)),
                    &self.pow2(&c, -(1 << (alpha - 2))),
                ),
            ),
        ];
        for (name, h) in &hyps {
            if !self.centralizes(h, &[x, y]) {
                return Ok(LemmaOutcome::Vacuous(format!(
                    "{name} does not centralize <x,y>"
                )));
            }
        }
        let z = self.pow2(y, 1 << (alpha - 1));
        Ok(if k.commutes(x, &z) {
            LemmaOutcome::Holds
        } else {
            LemmaOutcome::Counterexample(format!(
                "x = {x}, y = {y}, alpha = {alpha}: [x, y^(2^(alpha-1))] = {}",
                k.commutator(x, &z)
            ))
        })
    }

    /// If `x, y` generate `K` mod `Z(K)` and `x^(2^γ) y^(-2^γ)` is central,
    /// then `x^(2^γ)` is central.
    pub fn exceptional_obstruction(&self, x: &NilElt, y: &NilElt, gamma: u32) -> LemmaOutcome {
        let xp = self.pow2(x, 1 << gamma);
        let yp = self.pow2(y, 1 << gamma);
        if !self.generates_mod_center(&[*x, *y]) {
            return LemmaOutcome::Vacuous("x, y do not generate K modulo Z(K)".into());
        }
        if !self.is_central(&self.k.mul(&xp, &self.k.inv(&yp))) {
            return LemmaOutcome::Vacuous(format!("x^(2^{gamma}) y^(-2^{gamma}) not central"));
        }
        if self.is_central(&xp) {
            LemmaOutcome::Holds
        } else {
            LemmaOutcome::Counterexample(format!(
                "x = {x}, y = {y}, gamma = {gamma}: x^(2^gamma) = {xp} not central"
            ))
        }
    }

    /// Runs all three checkers over every pair of coset representatives and
    /// every exponent up to the exponent of `K / Z(K)`. All hypotheses and
    /// conclusions are invariant under multiplying by central elements, so
    /// representatives cover all of `K`.
    pub fn scan(&self) -> ScanSummary {
        let top = self.quotient.exponent().trailing_zeros() + 1;
        let reps = &self.reps;
        let partial: Vec<ScanSummary> = reps
            .par_iter()
            .map(|x| {
                let mut s = ScanSummary::default();
                for y in reps {
                    let [rx, ry] = [self.order_mod_center_log2(x), self.order_mod_center_log2(y)];
                    if rx >= 1 && rx <= ry {
                        for g in 0..rx {
                            let out = self.commcond(&[*x, *y], &[rx, ry], &[g]).expect("arity");
                            s.commcond.record(out);
                        }
                    }
                    for alpha in 2..=top {
                        s.halfstep
                            .record(self.halfstep(x, y, alpha).expect("alpha > 1"));
                    }
                    for g in 0..top {
                        s.exceptional.record(self.exceptional_obstruction(x, y, g));
                    }
                }
                s
            })
            .collect();
        partial
            .into_iter()
            .fold(ScanSummary::default(), |mut acc, s| {
                acc.commcond.merge(s.commcond);
                acc.halfstep.merge(s.halfstep);
                acc.exceptional.merge(s.exceptional);
                acc
            })
    }
}

fn join(y: &[NilElt]) -> String {
    y.iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Counts for one checker over a scan.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub instances: usize,
    pub hypotheses_met: usize,
    pub counterexamples: Vec<String>,
}

impl Tally {
    fn record(&mut self, out: LemmaOutcome) {
        self.instances += 1;
        match out {
            LemmaOutcome::Holds => self.hypotheses_met += 1,
            LemmaOutcome::Vacuous(_) => {}
            LemmaOutcome::Counterexample(c) => {
                self.hypotheses_met += 1;
                self.counterexamples.push(c);
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.instances += other.instances;
        self.hypotheses_met += other.hypotheses_met;
        self.counterexamples.extend(other.counterexamples);
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScanSummary {
    pub commcond: Tally,
    pub halfstep: Tally,
    pub exceptional: Tally,
}

impl ScanSummary {
    pub fn clean(&self) -> bool {
        [&self.commcond, &self.halfstep, &self.exceptional]
            .iter()
            .all(|t| t.counterexamples.is_empty())
    }
}

/// Convenience wrapper building a fresh [`LemmaContext`].
pub fn lemma_check_commcond(
    k: &NilGroup,
    y: &[NilElt],
    r: &[u32],
    gamma: &[u32],
) -> Result<LemmaOutcome, LemmaError> {
    let ctx = LemmaContext::new(k.clone(), oracle::DEFAULT_MAX_ORDER).expect("group within bound");
    ctx.commcond(y, r, gamma)
}

pub fn lemma_check_halfstep(
    k: &NilGroup,
    x: &NilElt,
    y: &NilElt,
    alpha: u32,
) -> Result<LemmaOutcome, LemmaError> {
    let ctx = LemmaContext::new(k.clone(), oracle::DEFAULT_MAX_ORDER).expect("group within bound");
    ctx.halfstep(x, y, alpha)
}

pub fn exceptional_obstruction_check(
    k: &NilGroup,
    x: &NilElt,
    y: &NilElt,
    gamma: u32,
) -> LemmaOutcome {
    let ctx = LemmaContext::new(k.clone(), oracle::DEFAULT_MAX_ORDER).expect("group within bound");
    ctx.exceptional_obstruction(x, y, gamma)
}

// ---------------------------------------------------------------------------
// membership congruences for the general-type construction

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MembershipScan {
    pub elements: usize,
    pub members: usize,
    /// Elements where lattice membership and the closed-form congruences disagree.
    pub membership_mismatches: Vec<NilElt>,
    /// Elements where centrality mod `N` disagrees with membership in
    /// `<w> Z(K)`. Only checked when `α > γ + 1`.
    pub center_mismatches: Vec<NilElt>,
    pub center_checked: bool,
}

impl MembershipScan {
    pub fn clean(&self) -> bool {
        self.membership_mismatches.is_empty() && self.center_mismatches.is_empty()
    }
}

/// Scans `K = G(α,α) / <[a,b,a]^(2^γ), [a,b,b]^(2^γ)>` with
/// `N = <[w,a], [w,b]>`. Checks that `k ∈ N` iff `r ≡ s ≡ 0 (mod 2^α)`,
/// `u ≡ v ≡ 0 (mod 2^σ)` and `t + 2^(α-γ) v ≡ 0 (mod 2^α)`, and, when
/// `α > γ + 1`, that `kN` is central in `K/N` iff `k ∈ <w> Z(K)`.
pub fn membership_congruence_scan(
    alpha: u32,
    gamma: u32,
    sigma: u32,
) -> Result<MembershipScan, BuildError> {
    let k = NilGroup::with_central_powers(alpha, alpha, gamma)?;
    let w = type_two_relator(alpha, gamma, sigma);
    let n_gens = [w.commutator(&FreeElt::A), w.commutator(&FreeElt::B)];
    let mut rows: Vec<[i64; 3]> = k.lattice().basis().to_vec();
    rows.extend(n_gens.iter().map(FreeElt::comm_part));
    let n_lattice = CommLattice::canonical_basis(&rows)?;
    let in_n = |x: &NilElt| {
        let [r, s, t, u, v] = x.coords();
        r == 0 && s == 0 && n_lattice.contains([t, u, v])
    };
    let pa = 1i64 << alpha;
    let ps = 1i64 << sigma;
    let congruent = |x: &NilElt| {
        let [r, s, t, u, v] = x.coords();
        r % pa == 0
            && s % pa == 0
            && u % ps == 0
            && v % ps == 0
            && (t + (v << (alpha - gamma))).rem_euclid(pa) == 0
    };

    let center_checked = alpha > gamma + 1;
    let target: HashSet<NilElt> = if center_checked {
        let mut gens = k.center().generators().to_vec();
        gens.push(k.reduce(&w));
        k.span(&gens)
    } else {
        HashSet::new()
    };
    let (a, b) = (k.a(), k.b());

    let mut scan = MembershipScan {
        center_checked,
        ..Default::default()
    };
    for x in k.elements() {
        scan.elements += 1;
        let member = in_n(&x);
        scan.members += usize::from(member);
        if member != congruent(&x) {
            scan.membership_mismatches.push(x);
        }
        if center_checked {
            let central_mod_n = in_n(&k.commutator(&x, &a)) && in_n(&k.commutator(&x, &b));
            if central_mod_n != target.contains(&x) {
                scan.center_mismatches.push(x);
            }
        }
    }
    Ok(scan)
}

/// Every valid parameter tuple with all exponents at most `max`, with its
/// verdict.
pub fn decision_table(max: u32) -> Vec<Verdict> {
    TypeParams::all_bounded(max).iter().map(decide).collect()
}
