//! Class-three nilpotent products `C_{2^α} ∐ C_{2^β}` and their quotients by
//! central subgroups of the derived subgroup.
//!
//! A group is the free class-3 group on `a`, `b` modulo `a^(2^α)`, `b^(2^β)`
//! and a list of extra elements with `r = s = 0`. The kernel meets the
//! commutator block `([a,b], [a,b,a], [a,b,b])` in a full-rank lattice; its
//! Hermite box together with `r mod 2^α`, `s mod 2^β` gives a unique normal
//! form for every element.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::class2::TypeParams;
use crate::hall::{binom2, FreeElt};
use crate::lattice::{CommLattice, LatticeError};
use crate::oracle::{self, FiniteGroup, OracleError};

const MAX_EXPONENT: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error(
        "generator exponents must satisfy alpha >= beta >= 1 (got alpha={alpha}, beta={beta})"
    )]
    Parameters { alpha: u32, beta: u32 },
    #[error("extra generator #{index} ({elt}) does not lie in the derived subgroup")]
    NotInDerived { index: usize, elt: FreeElt },
    #[error("extra generator #{index} ({elt}) is not central: [{elt}, {with}] = {value} in the quotient")]
    NotCentral {
        index: usize,
        elt: FreeElt,
        with: char,
        value: NilElt,
    },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("order 2^{found} of the nilpotent product disagrees with the expected 2^{expected}")]
    OrderMismatch { found: u32, expected: u32 },
}

/// Recipe for a group: cyclic factor exponents plus central elements to kill.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub alpha: u32,
    pub beta: u32,
    pub extra_central: Vec<FreeElt>,
}

impl GroupSpec {
    /// The nilpotent product itself.
    pub fn product(alpha: u32, beta: u32) -> Self {
        GroupSpec {
            alpha,
            beta,
            extra_central: Vec::new(),
        }
    }

    /// The product modulo `[a,b,a]^(2^γ)` and `[a,b,b]^(2^γ)`.
    pub fn with_central_powers(alpha: u32, beta: u32, gamma: u32) -> Self {
        let p = 1i64 << gamma;
        GroupSpec {
            alpha,
            beta,
            extra_central: vec![
                FreeElt::commutator_block(0, p, 0),
                FreeElt::commutator_block(0, 0, p),
            ],
        }
    }

    pub fn with_extra(mut self, x: FreeElt) -> Self {
        self.extra_central.push(x);
        self
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{})", self.alpha, self.beta)?;
        if !self.extra_central.is_empty() {
            f.write_str(" / <")?;
            for (k, x) in self.extra_central.iter().enumerate() {
                if k > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(">")?;
        }
        Ok(())
    }
}

/// Element of a [`NilGroup`] in boxed normal-form coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NilElt {
    r: i64,
    s: i64,
    t: i64,
    u: i64,
    v: i64,
}

impl NilElt {
    pub fn coords(&self) -> [i64; 5] {
        [self.r, self.s, self.t, self.u, self.v]
    }

    pub fn lift(&self) -> FreeElt {
        FreeElt::new(self.r, self.s, self.t, self.u, self.v)
    }
}

impl fmt::Display for NilElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::hall::write_normal_form(f, &self.coords())
    }
}

/// A built class-3 group with its normal-form data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilGroup {
    spec: GroupSpec,
    lattice: CommLattice,
    r_modulus: i64,
    s_modulus: i64,
    order: u64,
}

/// `(t, u, v)` of `[a^(2^α), b]`, `[a, b^(2^β)]` and the weight-three
/// consequences of the power relations.
fn base_relations(alpha: u32, beta: u32) -> Vec<[i64; 3]> {
    let pa = 1i64 << alpha;
    let pb = 1i64 << beta;
    let mut rels = vec![
        FreeElt::A.pow(pa).commutator(&FreeElt::B).comm_part(),
        FreeElt::A.commutator(&FreeElt::B.pow(pb)).comm_part(),
    ];
    rels.extend([[0, pa, 0], [0, 0, pa], [0, pb, 0], [0, 0, pb]]);
    rels
}

/// `log2 |C_{2^α} ∐ C_{2^β}|` from the normal-form moduli of the product.
pub fn product_order_log2(alpha: u32, beta: u32) -> u32 {
    alpha + 4 * beta - u32::from(alpha == beta)
}

impl NilGroup {
    pub fn build(spec: GroupSpec) -> Result<NilGroup, BuildError> {
        let (alpha, beta) = (spec.alpha, spec.beta);
        if beta < 1 || alpha < beta || alpha > MAX_EXPONENT {
            return Err(BuildError::Parameters { alpha, beta });
        }
        let mut rels = base_relations(alpha, beta);
        let base_lattice = CommLattice::canonical_basis(&rels)?;
        let base_log2 = alpha + beta + base_lattice.index().trailing_zeros();
        let expected = product_order_log2(alpha, beta);
        if !base_lattice.index().is_power_of_two() || base_log2 != expected {
            return Err(BuildError::OrderMismatch {
                found: base_log2,
                expected,
            });
        }

        for (index, x) in spec.extra_central.iter().enumerate() {
            if !x.in_derived_subgroup() {
                return Err(BuildError::NotInDerived { index, elt: *x });
            }
            rels.push(x.comm_part());
        }
        let lattice = CommLattice::canonical_basis(&rels)?;
        let r_modulus = 1i64 << alpha;
        let s_modulus = 1i64 << beta;
        let order = (r_modulus * s_modulus) as u64 * lattice.index();
        let group = NilGroup {
            spec,
            lattice,
            r_modulus,
            s_modulus,
            order,
        };

        // The extras generate a normal (hence central) subgroup exactly when
        // each commutes with a and b modulo all of them.
        for (index, x) in group.spec.extra_central.iter().enumerate() {
            for (with, g) in [('a', FreeElt::A), ('b', FreeElt::B)] {
                let value = group.reduce(&x.commutator(&g));
                if value != group.identity() {
                    return Err(BuildError::NotCentral {
                        index,
                        elt: *x,
                        with,
                        value,
                    });
                }
            }
        }
        Ok(group)
    }

    pub fn product(alpha: u32, beta: u32) -> Result<NilGroup, BuildError> {
        Self::build(GroupSpec::product(alpha, beta))
    }

    /// Product modulo `[a,b,a]^(2^γ)`, `[a,b,b]^(2^γ)`.
    pub fn with_central_powers(alpha: u32, beta: u32, gamma: u32) -> Result<NilGroup, BuildError> {
        Self::build(GroupSpec::with_central_powers(alpha, beta, gamma))
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn alpha(&self) -> u32 {
        self.spec.alpha
    }

    pub fn beta(&self) -> u32 {
        self.spec.beta
    }

    pub fn lattice(&self) -> &CommLattice {
        &self.lattice
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Coordinate ranges `(2^α, 2^β, t-pivot, u-pivot, v-pivot)`.
    pub fn moduli(&self) -> [i64; 5] {
        let [p0, p1, p2] = self.lattice.pivots();
        [self.r_modulus, self.s_modulus, p0, p1, p2]
    }

    pub fn reduce(&self, g: &FreeElt) -> NilElt {
        let [t, u, v] = self.lattice.reduce(g.comm_part());
        NilElt {
            r: g.r.rem_euclid(self.r_modulus),
            s: g.s.rem_euclid(self.s_modulus),
            t,
            u,
            v,
        }
    }

    pub fn identity(&self) -> NilElt {
        self.reduce(&FreeElt::IDENTITY)
    }

    pub fn a(&self) -> NilElt {
        self.reduce(&FreeElt::A)
    }

    pub fn b(&self) -> NilElt {
        self.reduce(&FreeElt::B)
    }

    pub fn mul(&self, x: &NilElt, y: &NilElt) -> NilElt {
        self.reduce(&x.lift().mul(&y.lift()))
    }

    pub fn inv(&self, x: &NilElt) -> NilElt {
        self.reduce(&x.lift().inverse())
    }

    pub fn pow(&self, x: &NilElt, n: i64) -> NilElt {
        self.reduce(&x.lift().pow(n))
    }

    pub fn commutator(&self, x: &NilElt, y: &NilElt) -> NilElt {
        self.reduce(&x.lift().commutator(&y.lift()))
    }

    pub fn commutes(&self, x: &NilElt, y: &NilElt) -> bool {
        self.mul(x, y) == self.mul(y, x)
    }

    pub fn is_central(&self, x: &NilElt) -> bool {
        let id = self.identity();
        self.commutator(x, &self.a()) == id && self.commutator(x, &self.b()) == id
    }

    /// Smallest `2^k` with `x^(2^k) = e`.
    pub fn order_of(&self, x: &NilElt) -> u64 {
        let id = self.identity();
        let mut y = *x;
        let mut ord = 1;
        while y != id {
            y = self.mul(&y, &y);
            ord *= 2;
        }
        ord
    }

    pub fn elements(&self) -> impl Iterator<Item = NilElt> + '_ {
        (0..self.order as usize).map(|n| FiniteGroup::element(self, n))
    }

    /// Exponents `(r, s, t', u', v')` with `x = a^r b^s [a,b]^t' [a^2,b]^u'
    /// [a,b^2]^v'`, using `[a^2,b] = [a,b]^2 [a,b,a]` and
    /// `[a,b^2] = [a,b]^2 [a,b,b]`.
    pub fn struik_exponents(&self, x: &NilElt) -> [i64; 5] {
        [x.r, x.s, x.t - 2 * x.u - 2 * x.v, x.u, x.v]
    }

    /// The element `a^r b^s [a,b]^t [a^2,b]^u [a,b^2]^v`.
    pub fn from_struik(&self, e: [i64; 5]) -> NilElt {
        let a2b = FreeElt::A.pow(2).commutator(&FreeElt::B);
        let ab2 = FreeElt::A.commutator(&FreeElt::B.pow(2));
        let g = FreeElt::new(e[0], e[1], e[2], 0, 0)
            .mul(&a2b.pow(e[3]))
            .mul(&ab2.pow(e[4]));
        self.reduce(&g)
    }

    /// The exact center.
    ///
    /// `[a,b,a]` and `[a,b,b]` are central, so `[z,a]` and `[z,b]` depend only
    /// on the `(r, s, t)` coordinates of `z`. The conditions `[z,a] = [z,b] =
    /// e` are solved over the `(r, s, t)` box and the full `(u, v)` block is
    /// appended to each solution.
    pub fn center(&self) -> Center {
        let [mr, ms, mt, mu, mv] = self.moduli();
        let (a, b) = (self.a(), self.b());
        let id = self.identity();
        let mut solutions = Vec::new();
        let mut mask = vec![false; (mr * ms * mt) as usize];
        for t in 0..mt {
            for s in 0..ms {
                for r in 0..mr {
                    let z = self.reduce(&FreeElt::new(r, s, t, 0, 0));
                    if self.commutator(&z, &a) == id && self.commutator(&z, &b) == id {
                        mask[(r + mr * (s + ms * t)) as usize] = true;
                        solutions.push(z);
                    }
                }
            }
        }
        let order = solutions.len() as u64 * (mu * mv) as u64;

        // generators: the weight-three block, then greedy over the solutions
        let mut gens: Vec<NilElt> = Vec::new();
        let mut span: HashSet<NilElt> = HashSet::from([id]);
        let candidates = [self.reduce(&FreeElt::D), self.reduce(&FreeElt::E)]
            .into_iter()
            .chain(solutions.iter().copied());
        for z in candidates {
            if !span.contains(&z) {
                gens.push(z);
                span = self.span(&gens);
            }
            if span.len() as u64 == order {
                break;
            }
        }
        debug_assert_eq!(span.len() as u64, order);
        Center {
            generators: gens,
            order,
            mask,
            moduli: [mr, ms],
        }
    }

    /// Elements of the subgroup generated by `gens`.
    pub fn span(&self, gens: &[NilElt]) -> HashSet<NilElt> {
        let id = self.identity();
        let mut seen = HashSet::from([id]);
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            for g in gens {
                let y = self.mul(&x, g);
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// `G / Z(G)` as an explicit table, built by the oracle.
    pub fn central_quotient_table(&self, bound: u64) -> Result<oracle::GroupTable, OracleError> {
        let t = oracle::enumerate(self.clone(), bound)?;
        let z = oracle::brute_center(&t);
        oracle::quotient_central(&t, &z)
    }

    /// Recognizes `G / Z(G)` among the presented class-2 groups.
    pub fn central_quotient(&self, bound: u64) -> Result<TypeParams, QuotientError> {
        let q = self.central_quotient_table(bound)?;
        let classes = oracle::lcs(&q).len() - 1;
        if classes != 2 {
            return Err(QuotientError::NotClassTwo { class: classes });
        }
        crate::class2::recognize(&q)
            .map(|(p, _)| p)
            .ok_or(QuotientError::Unrecognized {
                order: q.order() as u64,
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("central quotient has class {class}, expected two")]
    NotClassTwo { class: usize },
    #[error("central quotient of order {order} matches no presented class-2 group")]
    Unrecognized { order: u64 },
}

/// The center of a [`NilGroup`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Center {
    generators: Vec<NilElt>,
    order: u64,
    mask: Vec<bool>,
    moduli: [i64; 2],
}

impl Center {
    pub fn generators(&self) -> &[NilElt] {
        &self.generators
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn contains(&self, x: &NilElt) -> bool {
        let [mr, ms] = self.moduli;
        self.mask[(x.r + mr * (x.s + ms * x.t)) as usize]
    }
}

impl FiniteGroup for NilGroup {
    type Elem = NilElt;

    fn order(&self) -> u64 {
        self.order
    }

    fn element(&self, index: usize) -> NilElt {
        let [mr, ms, mt, mu, _] = self.moduli();
        let mut n = index as i64;
        let r = n % mr;
        n /= mr;
        let s = n % ms;
        n /= ms;
        let t = n % mt;
        n /= mt;
        let u = n % mu;
        let v = n / mu;
        NilElt { r, s, t, u, v }
    }

    fn index_of(&self, x: &NilElt) -> usize {
        let [mr, ms, mt, mu, _] = self.moduli();
        (x.r + mr * (x.s + ms * (x.t + mt * (x.u + mu * x.v)))) as usize
    }

    fn identity(&self) -> NilElt {
        NilGroup::identity(self)
    }

    fn op(&self, x: &NilElt, y: &NilElt) -> NilElt {
        self.mul(x, y)
    }

    fn generator_pair(&self) -> [NilElt; 2] {
        [self.a(), self.b()]
    }
}

/// `[k, a]` for `k = a^r b^s [a,b]^t ...`: `[a,b]^-s [a,b,a]^t [a,b,b]^-C(s,2)`.
pub fn commutator_with_a(s: i64, t: i64) -> FreeElt {
    FreeElt::commutator_block(-s, t, -binom2(s))
}

/// `[k, b]` for `k = a^r b^s [a,b]^t ...`: `[a,b]^r [a,b,a]^C(r,2) [a,b,b]^(rs+t)`.
pub fn commutator_with_b(r: i64, s: i64, t: i64) -> FreeElt {
    FreeElt::commutator_block(r, binom2(r), r * s + t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_orders() {
        assert_eq!(NilGroup::product(2, 1).unwrap().order(), 64);
        assert_eq!(NilGroup::product(2, 2).unwrap().order(), 512);
        assert_eq!(NilGroup::product(1, 1).unwrap().order(), 16);
    }

    #[test]
    fn central_power_quotient_moduli() {
        let k = NilGroup::with_central_powers(3, 3, 1).unwrap();
        assert_eq!(&k.moduli()[2..], &[8, 2, 2]);
        assert_eq!(k.order(), 1 << 11);
    }

    #[test]
    fn power_relations_reduce_to_identity() {
        let g = NilGroup::product(2, 1).unwrap();
        let id = g.identity();
        assert_eq!(g.reduce(&FreeElt::A.commutator(&FreeElt::B.pow(2))), id);
        assert_eq!(g.reduce(&FreeElt::A.pow(4)), id);
        assert_eq!(g.order_of(&g.a()), 4);
        assert_eq!(g.order_of(&g.b()), 2);
        assert_eq!(g.order_of(&id), 1);
        assert_eq!(g.order_of(&g.reduce(&FreeElt::C)), 4);
    }

    #[test]
    fn bad_parameters() {
        assert_eq!(
            NilGroup::product(1, 2).unwrap_err(),
            BuildError::Parameters { alpha: 1, beta: 2 }
        );
        let spec = GroupSpec::product(2, 1).with_extra(FreeElt::A);
        assert!(matches!(
            NilGroup::build(spec),
            Err(BuildError::NotInDerived { index: 0, .. })
        ));
    }

    #[test]
    fn non_central_extra_is_named() {
        let spec = GroupSpec::product(3, 3).with_extra(FreeElt::C);
        let err = NilGroup::build(spec).unwrap_err();
        assert!(
            matches!(
                err,
                BuildError::NotCentral {
                    index: 0,
                    with: 'a',
                    ..
                }
            ),
            "{err}"
        );
        assert!(err.to_string().contains("[a,b]"));
    }

    #[test]
    fn commutator_with_generators_closed_forms() {
        let k = FreeElt::new(3, -2, 5, 7, 1);
        assert_eq!(k.commutator(&FreeElt::A), commutator_with_a(k.s, k.t));
        assert_eq!(k.commutator(&FreeElt::B), commutator_with_b(k.r, k.s, k.t));
    }
}
