//! Nonabelian two-generator 2-groups of class two, by their standard
//! presentation parameters, with concrete coordinate models.
//!
//! Every such group is isomorphic to exactly one of
//!
//! ```text
//! (i)   <a,b | a^(2^α) = b^(2^β) = [a,b]^(2^γ) = [a,b,a] = [a,b,b] = e>,
//!       α ≥ β ≥ γ ≥ 1
//! (ii)  <a,b | a^(2^α) = b^(2^β) = [a,b,a] = [a,b,b] = e,
//!       a^(2^(α+σ-γ)) = [a,b]^(2^σ)>,
//!       β ≥ γ > σ ≥ 0, α+σ ≥ 2γ, α+β+σ > 3
//! (iii) <a,b | a^(2^(γ+1)) = b^(2^(γ+1)) = [a,b]^(2^γ) = [a,b,a] = [a,b,b] = e,
//!       a^(2^γ) = b^(2^γ) = [a,b]^(2^(γ-1))>,  γ ≥ 1
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::oracle::{self, Fingerprint, FiniteGroup, GroupTable, Isomorphism};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupType {
    I,
    II,
    III,
}

impl GroupType {
    pub fn as_str(self) -> &'static str {
        match self {
            GroupType::I => "i",
            GroupType::II => "ii",
            GroupType::III => "iii",
        }
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GroupType {
    type Err = ParamError;
    fn from_str(s: &str) -> Result<Self, ParamError> {
        match s.to_ascii_lowercase().as_str() {
            "i" | "1" => Ok(GroupType::I),
            "ii" | "2" => Ok(GroupType::II),
            "iii" | "3" => Ok(GroupType::III),
            _ => Err(ParamError::UnknownType(s.to_string())),
        }
    }
}

/// Unvalidated parameters, as they arrive from a user.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawParams {
    pub kind: Option<GroupType>,
    pub alpha: Option<i64>,
    pub beta: Option<i64>,
    pub gamma: Option<i64>,
    pub sigma: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("unknown group type {0:?} (expected i, ii or iii)")]
    UnknownType(String),
    #[error("missing group type")]
    MissingType,
    #[error("type {kind} requires parameter {name}")]
    Missing { kind: GroupType, name: &'static str },
    #[error("type {kind} does not take parameter {name}")]
    Unexpected { kind: GroupType, name: &'static str },
    #[error("constraint {constraint} violated ({values})")]
    Violated {
        constraint: &'static str,
        values: String,
    },
    #[error(
        "constraint α+β+σ>3 violated ({values}): excluded so that the dihedral group of order 8 \
         is listed only as type i"
    )]
    DihedralExclusion { values: String },
    #[error("exponent {value} of {name} is too large")]
    TooLarge { name: &'static str, value: i64 },
}

/// Validated presentation parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeParams {
    I {
        alpha: u32,
        beta: u32,
        gamma: u32,
    },
    II {
        alpha: u32,
        beta: u32,
        gamma: u32,
        sigma: u32,
    },
    III {
        gamma: u32,
    },
}

const MAX_EXPONENT: i64 = 24;

fn check(
    ok: bool,
    constraint: &'static str,
    values: impl FnOnce() -> String,
) -> Result<(), ParamError> {
    if ok {
        Ok(())
    } else {
        Err(ParamError::Violated {
            constraint,
            values: values(),
        })
    }
}

/// Checks the constraints of the classification and returns the canonical
/// parameter tuple.
pub fn validate(raw: &RawParams) -> Result<TypeParams, ParamError> {
    let kind = raw.kind.ok_or(ParamError::MissingType)?;
    let want = |name: &'static str, v: Option<i64>| v.ok_or(ParamError::Missing { kind, name });
    let forbid = |name: &'static str, v: Option<i64>| match v {
        Some(_) => Err(ParamError::Unexpected { kind, name }),
        None => Ok(()),
    };
    for (name, v) in [
        ("alpha", raw.alpha),
        ("beta", raw.beta),
        ("gamma", raw.gamma),
        ("sigma", raw.sigma),
    ] {
        if let Some(x) = v {
            if x > MAX_EXPONENT {
                return Err(ParamError::TooLarge { name, value: x });
            }
        }
    }
    match kind {
        GroupType::I => {
            forbid("sigma", raw.sigma)?;
            let (a, b, g) = (
                want("alpha", raw.alpha)?,
                want("beta", raw.beta)?,
                want("gamma", raw.gamma)?,
            );
            let vals = || format!("α={a}, β={b}, γ={g}");
            check(a >= b, "α≥β", vals)?;
            check(b >= g, "β≥γ", vals)?;
            check(g >= 1, "γ≥1", vals)?;
            Ok(TypeParams::I {
                alpha: a as u32,
                beta: b as u32,
                gamma: g as u32,
            })
        }
        GroupType::II => {
            let (a, b, g, s) = (
                want("alpha", raw.alpha)?,
                want("beta", raw.beta)?,
                want("gamma", raw.gamma)?,
                want("sigma", raw.sigma)?,
            );
            let vals = || format!("α={a}, β={b}, γ={g}, σ={s}");
            check(a >= 1, "α≥1", vals)?;
            check(b >= g, "β≥γ", vals)?;
            check(g > s, "γ>σ", vals)?;
            check(s >= 0, "σ≥0", vals)?;
            check(a + s >= 2 * g, "α+σ≥2γ", vals)?;
            if a + b + s <= 3 {
                return Err(ParamError::DihedralExclusion { values: vals() });
            }
            Ok(TypeParams::II {
                alpha: a as u32,
                beta: b as u32,
                gamma: g as u32,
                sigma: s as u32,
            })
        }
        GroupType::III => {
            forbid("alpha", raw.alpha)?;
            forbid("beta", raw.beta)?;
            forbid("sigma", raw.sigma)?;
            let g = want("gamma", raw.gamma)?;
            check(g >= 1, "γ≥1", || format!("γ={g}"))?;
            Ok(TypeParams::III { gamma: g as u32 })
        }
    }
}

impl TypeParams {
    pub fn i(alpha: u32, beta: u32, gamma: u32) -> Result<Self, ParamError> {
        validate(&RawParams {
            kind: Some(GroupType::I),
            alpha: Some(alpha.into()),
            beta: Some(beta.into()),
            gamma: Some(gamma.into()),
            sigma: None,
        })
    }

    pub fn ii(alpha: u32, beta: u32, gamma: u32, sigma: u32) -> Result<Self, ParamError> {
        validate(&RawParams {
            kind: Some(GroupType::II),
            alpha: Some(alpha.into()),
            beta: Some(beta.into()),
            gamma: Some(gamma.into()),
            sigma: Some(sigma.into()),
        })
    }

    pub fn iii(gamma: u32) -> Result<Self, ParamError> {
        validate(&RawParams {
            kind: Some(GroupType::III),
            gamma: Some(gamma.into()),
            ..Default::default()
        })
    }

    pub fn kind(&self) -> GroupType {
        match self {
            TypeParams::I { .. } => GroupType::I,
            TypeParams::II { .. } => GroupType::II,
            TypeParams::III { .. } => GroupType::III,
        }
    }

    /// `(α, β, γ, σ)`, with `None` where the type has no such parameter.
    pub fn parts(&self) -> [Option<u32>; 4] {
        match *self {
            TypeParams::I { alpha, beta, gamma } => [Some(alpha), Some(beta), Some(gamma), None],
            TypeParams::II {
                alpha,
                beta,
                gamma,
                sigma,
            } => [Some(alpha), Some(beta), Some(gamma), Some(sigma)],
            TypeParams::III { gamma } => [None, None, Some(gamma), None],
        }
    }

    pub fn to_raw(&self) -> RawParams {
        let [a, b, g, s] = self.parts();
        RawParams {
            kind: Some(self.kind()),
            alpha: a.map(i64::from),
            beta: b.map(i64::from),
            gamma: g.map(i64::from),
            sigma: s.map(i64::from),
        }
    }

    /// `log2` of the group order.
    pub fn order_log2(&self) -> u32 {
        match *self {
            TypeParams::I { alpha, beta, gamma } => alpha + beta + gamma,
            TypeParams::II {
                alpha, beta, sigma, ..
            } => alpha + beta + sigma,
            TypeParams::III { gamma } => 3 * gamma,
        }
    }

    pub fn order(&self) -> u64 {
        1u64 << self.order_log2()
    }

    /// All valid tuples whose exponents are at most `max` (for type iii,
    /// `γ ≤ max`), in a fixed order: type i, then ii, then iii.
    pub fn all_bounded(max: u32) -> Vec<TypeParams> {
        let mut out = Vec::new();
        for alpha in 1..=max {
            for beta in 1..=alpha {
                for gamma in 1..=beta {
                    out.push(TypeParams::I { alpha, beta, gamma });
                }
            }
        }
        for alpha in 1..=max {
            for beta in 1..=max {
                for gamma in 1..=beta {
                    for sigma in 0..gamma {
                        if let Ok(p) = TypeParams::ii(alpha, beta, gamma, sigma) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        for gamma in 1..=max {
            out.push(TypeParams::III { gamma });
        }
        out
    }

    /// Every valid tuple describing a group of order `2^k`.
    pub fn all_of_order_log2(k: u32) -> Vec<TypeParams> {
        TypeParams::all_bounded(k)
            .into_iter()
            .filter(|p| p.order_log2() == k)
            .collect()
    }
}

impl fmt::Display for TypeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TypeParams::I { alpha, beta, gamma } => write!(f, "I({alpha},{beta},{gamma})"),
            TypeParams::II {
                alpha,
                beta,
                gamma,
                sigma,
            } => write!(f, "II({alpha},{beta},{gamma},{sigma})"),
            TypeParams::III { gamma } => write!(f, "III({gamma})"),
        }
    }
}

/// Generators appearing in defining relations: `a`, `b`, `[a,b]`, `[a,b,a]`,
/// `[a,b,b]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    A,
    B,
    C,
    CA,
    CB,
}

/// `lhs = rhs`, each side a product of generator powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub lhs: Vec<(Gen, i64)>,
    pub rhs: Vec<(Gen, i64)>,
}

impl Relation {
    fn trivial(g: Gen, e: i64) -> Self {
        Relation {
            lhs: vec![(g, e)],
            rhs: vec![],
        }
    }

    fn equal(l: (Gen, i64), r: (Gen, i64)) -> Self {
        Relation {
            lhs: vec![l],
            rhs: vec![r],
        }
    }
}

fn fmt_side(f: &mut fmt::Formatter<'_>, side: &[(Gen, i64)]) -> fmt::Result {
    if side.is_empty() {
        return f.write_str("e");
    }
    for (k, (g, e)) in side.iter().enumerate() {
        if k > 0 {
            f.write_str(" ")?;
        }
        let name = match g {
            Gen::A => "a",
            Gen::B => "b",
            Gen::C => "[a,b]",
            Gen::CA => "[a,b,a]",
            Gen::CB => "[a,b,b]",
        };
        if *e == 1 {
            f.write_str(name)?;
        } else {
            write!(f, "{name}^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_side(f, &self.lhs)?;
        f.write_str(" = ")?;
        fmt_side(f, &self.rhs)
    }
}

/// An element `a^i b^j [a,b]^k` of a [`Class2Group`] in reduced coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct M2Elt {
    pub i: i64,
    pub j: i64,
    pub k: i64,
}

impl fmt::Display for M2Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::hall::write_normal_form(f, &[self.i, self.j, self.k, 0, 0])
    }
}

/// Coordinate model of a presented class-2 group.
///
/// Elements are `a^i b^j [a,b]^k` with `i < m_i`, `j < m_j`, `k < m_k`, and
/// `(i1,j1,k1)(i2,j2,k2) = fold(i1+i2, j1+j2, k1+k2 - j1·i2)`, where `fold`
/// applies the power relations of the presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Class2Group {
    params: TypeParams,
    mi: i64,
    mj: i64,
    mk: i64,
}

/// The coordinate model of `p`.
pub fn model(p: &TypeParams) -> Class2Group {
    let pw = |e: u32| 1i64 << e;
    let (mi, mj, mk) = match *p {
        TypeParams::I { alpha, beta, gamma } => (pw(alpha), pw(beta), pw(gamma)),
        TypeParams::II {
            alpha, beta, sigma, ..
        } => (pw(alpha), pw(beta), pw(sigma)),
        TypeParams::III { gamma } => (pw(gamma + 1), pw(gamma), pw(gamma - 1)),
    };
    let g = Class2Group {
        params: *p,
        mi,
        mj,
        mk,
    };
    debug_assert!(g.relations_hold(), "model of {p} violates its presentation");
    g
}

impl Class2Group {
    pub fn params(&self) -> &TypeParams {
        &self.params
    }

    /// Ranges of the `(i, j, k)` coordinates.
    pub fn moduli(&self) -> [i64; 3] {
        [self.mi, self.mj, self.mk]
    }

    pub fn order(&self) -> u64 {
        (self.mi * self.mj * self.mk) as u64
    }

    fn fold(&self, mut i: i64, mut j: i64, mut k: i64) -> M2Elt {
        match self.params {
            TypeParams::I { .. } => {}
            TypeParams::II {
                alpha,
                gamma,
                sigma,
                ..
            } => {
                // [a,b]^(2^σ) -> a^(2^(α+σ-γ))
                let q = k.div_euclid(self.mk);
                k = k.rem_euclid(self.mk);
                i += q * (1i64 << (alpha + sigma - gamma));
            }
            TypeParams::III { gamma } => {
                // b^(2^γ) -> a^(2^γ), then [a,b]^(2^(γ-1)) -> a^(2^γ)
                let half = 1i64 << gamma;
                let q = j.div_euclid(self.mj);
                j = j.rem_euclid(self.mj);
                i += q * half;
                let q = k.div_euclid(self.mk);
                k = k.rem_euclid(self.mk);
                i += q * half;
            }
        }
        M2Elt {
            i: i.rem_euclid(self.mi),
            j: j.rem_euclid(self.mj),
            k: k.rem_euclid(self.mk),
        }
    }

    pub fn elt(&self, i: i64, j: i64, k: i64) -> M2Elt {
        self.fold(i, j, k)
    }

    pub fn identity(&self) -> M2Elt {
        M2Elt { i: 0, j: 0, k: 0 }
    }

    pub fn a(&self) -> M2Elt {
        self.fold(1, 0, 0)
    }

    pub fn b(&self) -> M2Elt {
        self.fold(0, 1, 0)
    }

    pub fn mul(&self, x: &M2Elt, y: &M2Elt) -> M2Elt {
        self.fold(x.i + y.i, x.j + y.j, x.k + y.k - x.j * y.i)
    }

    pub fn inv(&self, x: &M2Elt) -> M2Elt {
        self.fold(-x.i, -x.j, -x.k - x.i * x.j)
    }

    pub fn pow(&self, x: &M2Elt, n: i64) -> M2Elt {
        let mut base = if n < 0 { self.inv(x) } else { *x };
        let mut e = n.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn commutator(&self, x: &M2Elt, y: &M2Elt) -> M2Elt {
        let p = self.mul(&self.inv(x), &self.inv(y));
        self.mul(&p, &self.mul(x, y))
    }

    pub fn element_order(&self, x: &M2Elt) -> u64 {
        let mut y = *x;
        let mut ord = 1;
        while y != self.identity() {
            y = self.mul(&y, &y);
            ord *= 2;
        }
        ord
    }

    /// Orders of `a`, `b` and `[a,b]`.
    pub fn generator_orders(&self) -> [u64; 3] {
        let (a, b) = (self.a(), self.b());
        [
            self.element_order(&a),
            self.element_order(&b),
            self.element_order(&self.commutator(&a, &b)),
        ]
    }

    /// The defining relations of the presentation.
    pub fn relations(&self) -> Vec<Relation> {
        use Gen::*;
        let pw = |e: u32| 1i64 << e;
        let mut rels = match self.params {
            TypeParams::I { alpha, beta, gamma } => vec![
                Relation::trivial(A, pw(alpha)),
                Relation::trivial(B, pw(beta)),
                Relation::trivial(C, pw(gamma)),
            ],
            TypeParams::II {
                alpha,
                beta,
                gamma,
                sigma,
            } => vec![
                Relation::trivial(A, pw(alpha)),
                Relation::trivial(B, pw(beta)),
                Relation::equal((A, pw(alpha + sigma - gamma)), (C, pw(sigma))),
            ],
            TypeParams::III { gamma } => vec![
                Relation::trivial(A, pw(gamma + 1)),
                Relation::trivial(B, pw(gamma + 1)),
                Relation::trivial(C, pw(gamma)),
                Relation::equal((A, pw(gamma)), (B, pw(gamma))),
                Relation::equal((B, pw(gamma)), (C, pw(gamma - 1))),
            ],
        };
        rels.push(Relation::trivial(CA, 1));
        rels.push(Relation::trivial(CB, 1));
        rels
    }

    fn eval(&self, side: &[(Gen, i64)]) -> M2Elt {
        let (a, b) = (self.a(), self.b());
        let c = self.commutator(&a, &b);
        side.iter().fold(self.identity(), |acc, &(g, e)| {
            let base = match g {
                Gen::A => a,
                Gen::B => b,
                Gen::C => c,
                Gen::CA => self.commutator(&c, &a),
                Gen::CB => self.commutator(&c, &b),
            };
            self.mul(&acc, &self.pow(&base, e))
        })
    }

    /// True when every defining relation holds on the model's `a`, `b`.
    pub fn relations_hold(&self) -> bool {
        self.relations()
            .iter()
            .all(|r| self.eval(&r.lhs) == self.eval(&r.rhs))
    }

    pub fn elements(&self) -> impl Iterator<Item = M2Elt> + '_ {
        (0..self.order() as usize).map(|n| FiniteGroup::element(self, n))
    }

    pub fn table(&self) -> GroupTable {
        oracle::enumerate(self.clone(), u64::MAX).expect("unbounded enumeration")
    }

    pub fn fingerprint(&self) -> Fingerprint {
        oracle::fingerprint(&self.table())
    }
}

impl FiniteGroup for Class2Group {
    type Elem = M2Elt;

    fn order(&self) -> u64 {
        Class2Group::order(self)
    }

    fn element(&self, index: usize) -> M2Elt {
        let n = index as i64;
        M2Elt {
            i: n % self.mi,
            j: (n / self.mi) % self.mj,
            k: n / (self.mi * self.mj),
        }
    }

    fn index_of(&self, x: &M2Elt) -> usize {
        (x.i + self.mi * (x.j + self.mj * x.k)) as usize
    }

    fn identity(&self) -> M2Elt {
        Class2Group::identity(self)
    }

    fn op(&self, x: &M2Elt, y: &M2Elt) -> M2Elt {
        self.mul(x, y)
    }

    fn generator_pair(&self) -> [M2Elt; 2] {
        [self.a(), self.b()]
    }
}

/// Identifies a two-generator class-2 group given as a table: the unique
/// parameter tuple whose model is isomorphic to it, with the isomorphism.
pub fn recognize(t: &GroupTable) -> Option<(TypeParams, Isomorphism)> {
    let n = t.order() as u64;
    if !n.is_power_of_two() {
        return None;
    }
    let fp = oracle::fingerprint(t);
    TypeParams::all_of_order_log2(n.trailing_zeros())
        .into_iter()
        .filter_map(|p| {
            let m = model(&p);
            (m.fingerprint() == fp).then_some((p, m))
        })
        .find_map(|(p, m)| oracle::iso_2gen(t, &m).map(|iso| (p, iso)))
}
