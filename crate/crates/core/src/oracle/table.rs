use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::OracleError;

/// A finite group whose elements can be numbered `0..order()`.
pub trait FiniteGroup {
    type Elem: Clone + PartialEq + fmt::Debug + fmt::Display;

    fn order(&self) -> u64;
    fn element(&self, index: usize) -> Self::Elem;
    fn index_of(&self, x: &Self::Elem) -> usize;
    fn identity(&self) -> Self::Elem;
    fn op(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    /// The designated generating pair.
    fn generator_pair(&self) -> [Self::Elem; 2];
}

type MulFn = dyn Fn(usize, usize) -> usize + Send + Sync;
type LabelFn = dyn Fn(usize) -> String + Send + Sync;

/// An explicit finite group on the index set `0..order`.
///
/// Multiplication is either a closure over the source group or, after
/// [`GroupTable::memoize`], a full Cayley table.
#[derive(Clone)]
pub struct GroupTable {
    order: usize,
    identity: usize,
    generators: [usize; 2],
    mul: Arc<MulFn>,
    memo: Option<Arc<Vec<u32>>>,
    label: Arc<LabelFn>,
}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupTable")
            .field("order", &self.order)
            .field("identity", &self.identity)
            .field("generators", &self.generators)
            .field("memoized", &self.memo.is_some())
            .finish()
    }
}

/// Default bound on the order of any group the oracle will enumerate.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 16;

/// Turns `group` into a [`GroupTable`], refusing groups larger than `bound`.
pub fn enumerate<G>(group: G, bound: u64) -> Result<GroupTable, OracleError>
where
    G: FiniteGroup + Send + Sync + 'static,
{
    let order = group.order();
    if order > bound {
        return Err(OracleError::BoundExceeded { order, bound });
    }
    let group = Arc::new(group);
    let identity = group.index_of(&group.identity());
    let [ga, gb] = group.generator_pair();
    let generators = [group.index_of(&ga), group.index_of(&gb)];
    let g = Arc::clone(&group);
    let mul = Arc::new(move |i: usize, j: usize| {
        let x = g.element(i);
        let y = g.element(j);
        g.index_of(&g.op(&x, &y))
    });
    let label = Arc::new(move |i: usize| group.element(i).to_string());
    Ok(GroupTable {
        order: order as usize,
        identity,
        generators,
        mul,
        memo: None,
        label,
    })
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> [usize; 2] {
        self.generators
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        match &self.memo {
            Some(t) => t[i * self.order + j] as usize,
            None => (self.mul)(i, j),
        }
    }

    pub fn label(&self, i: usize) -> String {
        (self.label)(i)
    }

    /// Precomputes the Cayley table. Only sensible for small groups.
    pub fn memoize(&mut self) {
        if self.memo.is_some() {
            return;
        }
        let n = self.order;
        let mut t = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                t.push((self.mul)(i, j) as u32);
            }
        }
        self.memo = Some(Arc::new(t));
    }

    pub fn cayley_table(&self) -> Option<&[u32]> {
        self.memo.as_deref().map(Vec::as_slice)
    }

    pub fn pow(&self, i: usize, n: i64) -> usize {
        let mut base = if n < 0 { self.inv(i) } else { i };
        let mut e = n.unsigned_abs();
        let mut acc = self.identity;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Order of the element `i`.
    pub fn element_order(&self, i: usize) -> u64 {
        if self.order.is_power_of_two() {
            // orders are powers of two: square until trivial
            let mut x = i;
            let mut ord = 1;
            while x != self.identity {
                x = self.mul(x, x);
                ord *= 2;
            }
            ord
        } else {
            let mut x = i;
            let mut ord = 1;
            while x != self.identity {
                x = self.mul(x, i);
                ord += 1;
            }
            ord
        }
    }

    pub fn inv(&self, i: usize) -> usize {
        let ord = self.element_order(i);
        let mut acc = self.identity;
        // x^(ord-1) without recursing through pow
        let mut base = i;
        let mut e = ord - 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `[x, y] = x^-1 y^-1 x y`.
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        let xi = self.inv(x);
        let yi = self.inv(y);
        self.mul(self.mul(xi, yi), self.mul(x, y))
    }

    pub fn commutes(&self, x: usize, y: usize) -> bool {
        self.mul(x, y) == self.mul(y, x)
    }

    pub fn exponent(&self) -> u64 {
        (0..self.order)
            .map(|i| self.element_order(i))
            .max()
            .unwrap_or(1)
    }

    pub fn order_histogram(&self) -> BTreeMap<u64, usize> {
        let mut h = BTreeMap::new();
        for i in 0..self.order {
            *h.entry(self.element_order(i)).or_insert(0) += 1;
        }
        h
    }
}

/// A subgroup of a [`GroupTable`], as a membership mask plus member list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    mask: Vec<bool>,
    members: Vec<usize>,
}

impl Subgroup {
    fn from_mask(mask: Vec<bool>) -> Self {
        let members = mask
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
            .collect();
        Subgroup { mask, members }
    }

    pub fn whole(t: &GroupTable) -> Self {
        Self::from_mask(vec![true; t.order()])
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask[i]
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }
}

/// The subgroup generated by `gens`.
pub fn closure(t: &GroupTable, gens: &[usize]) -> Subgroup {
    let mut mask = vec![false; t.order()];
    let mut queue = vec![t.identity()];
    mask[t.identity()] = true;
    while let Some(x) = queue.pop() {
        for &g in gens {
            let y = t.mul(x, g);
            if !mask[y] {
                mask[y] = true;
                queue.push(y);
            }
        }
    }
    Subgroup::from_mask(mask)
}

/// The smallest normal subgroup containing `gens`.
pub fn normal_closure(t: &GroupTable, gens: &[usize]) -> Subgroup {
    let mut current = gens.to_vec();
    loop {
        let h = closure(t, &current);
        let mut grew = false;
        let conj: Vec<usize> = t
            .generators()
            .iter()
            .flat_map(|&g| {
                let gi = t.inv(g);
                current.iter().map(move |&x| (x, g, gi)).collect::<Vec<_>>()
            })
            .map(|(x, g, gi)| t.mul(t.mul(gi, x), g))
            .collect();
        for y in conj {
            if !h.contains(y) {
                current.push(y);
                grew = true;
            }
        }
        if !grew {
            return h;
        }
    }
}

/// `{z : zg = gz for all g}`.
///
/// Small groups are scanned against every element. Above 2^10 elements the
/// scan is against the designated generators, after checking they generate.
pub fn brute_center(t: &GroupTable) -> Subgroup {
    let n = t.order();
    let witnesses: Vec<usize> = if n <= 1 << 10 {
        (0..n).collect()
    } else {
        let gens = t.generators();
        assert_eq!(
            closure(t, &gens).order(),
            n,
            "designated generators do not generate the table"
        );
        gens.to_vec()
    };
    let mask = (0..n)
        .map(|z| witnesses.iter().all(|&g| t.commutes(z, g)))
        .collect();
    Subgroup::from_mask(mask)
}

fn is_normal(t: &GroupTable, h: &Subgroup) -> bool {
    t.generators().iter().all(|&g| {
        let gi = t.inv(g);
        h.members()
            .iter()
            .all(|&x| h.contains(t.mul(t.mul(gi, x), g)))
    })
}

/// `t / h` for a normal subgroup `h`.
pub fn quotient_normal(t: &GroupTable, h: &Subgroup) -> Result<GroupTable, OracleError> {
    if !is_normal(t, h) {
        return Err(OracleError::NotNormal);
    }
    Ok(build_quotient(t, h))
}

/// `t / h` for a central subgroup `h`.
pub fn quotient_central(t: &GroupTable, h: &Subgroup) -> Result<GroupTable, OracleError> {
    let gens = t.generators();
    let central = h
        .members()
        .iter()
        .all(|&z| gens.iter().all(|&g| t.commutes(z, g)));
    if !central {
        return Err(OracleError::NotCentral);
    }
    Ok(build_quotient(t, h))
}

fn build_quotient(t: &GroupTable, h: &Subgroup) -> GroupTable {
    let n = t.order();
    let mut coset_of = vec![u32::MAX; n];
    let mut reps = Vec::with_capacity(n / h.order());
    // identity first so that coset 0 is the identity coset
    for x in std::iter::once(t.identity()).chain(0..n) {
        if coset_of[x] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(x);
        for &z in h.members() {
            coset_of[t.mul(x, z)] = id;
        }
    }
    let coset_of = Arc::new(coset_of);
    let reps = Arc::new(reps);
    let parent = t.clone();
    let [g0, g1] = t.generators();
    let generators = [coset_of[g0] as usize, coset_of[g1] as usize];
    let (c, r) = (Arc::clone(&coset_of), Arc::clone(&reps));
    let mul = Arc::new(move |i: usize, j: usize| c[parent.mul(r[i], r[j])] as usize);
    let parent = t.clone();
    let r = Arc::clone(&reps);
    let label = Arc::new(move |i: usize| parent.label(r[i]));
    GroupTable {
        order: reps.len(),
        identity: 0,
        generators,
        mul,
        memo: None,
        label,
    }
}

/// Coset index of each element of `t` modulo `h`, matching the numbering of
/// [`quotient_central`] / [`quotient_normal`].
pub fn coset_map(t: &GroupTable, h: &Subgroup) -> Vec<usize> {
    let n = t.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut next = 0;
    for x in std::iter::once(t.identity()).chain(0..n) {
        if coset_of[x] != usize::MAX {
            continue;
        }
        for &z in h.members() {
            coset_of[t.mul(x, z)] = next;
        }
        next += 1;
    }
    coset_of
}

/// Lower central series `G_1 = G, G_2, ...`, ending at the first trivial
/// term, or at the first repeated term when the group is not nilpotent.
pub fn lcs(t: &GroupTable) -> Vec<Subgroup> {
    let mut series = vec![Subgroup::whole(t)];
    loop {
        let last = series.last().unwrap();
        if last.is_trivial() {
            return series;
        }
        let comms: Vec<usize> = last
            .members()
            .iter()
            .flat_map(|&x| t.generators().map(|g| t.commutator(x, g)))
            .collect();
        let next = normal_closure(t, &comms);
        if next.order() == last.order() {
            return series;
        }
        series.push(next);
    }
}

/// Derived subgroup of a table with two designated generators.
pub fn derived_subgroup(t: &GroupTable) -> Subgroup {
    let [a, b] = t.generators();
    normal_closure(t, &[t.commutator(a, b)])
}

/// Isomorphism invariants used to prune isomorphism search.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub order: u64,
    pub exponent: u64,
    pub center_order: u64,
    pub derived_order: u64,
    /// Exponents `e_i` of the abelianization `prod C_{2^e_i}`, descending.
    pub abelian_invariants: Vec<u32>,
    pub order_histogram: BTreeMap<u64, usize>,
}

impl Fingerprint {
    pub fn involutions(&self) -> usize {
        self.order_histogram.get(&2).copied().unwrap_or(0)
    }
}

pub fn fingerprint(t: &GroupTable) -> Fingerprint {
    let derived = derived_subgroup(t);
    let ab = build_quotient(t, &derived);
    Fingerprint {
        order: t.order() as u64,
        exponent: t.exponent(),
        center_order: brute_center(t).order() as u64,
        derived_order: derived.order() as u64,
        abelian_invariants: abelian_invariants_2group(&ab),
        order_histogram: t.order_histogram(),
    }
}

/// Invariants of an abelian 2-group from the counts `n_k = #{x : x^(2^k) = 1}`.
fn abelian_invariants_2group(ab: &GroupTable) -> Vec<u32> {
    let hist = ab.order_histogram();
    let max_k = hist.keys().max().map_or(0, |o| o.trailing_zeros());
    // ranks[k] = number of cyclic factors of exponent >= k
    let mut counts = vec![0usize; max_k as usize + 1];
    for (ord, c) in &hist {
        for k in ord.trailing_zeros()..=max_k {
            counts[k as usize] += c;
        }
    }
    let mut ge = Vec::new();
    for k in 1..=max_k as usize {
        ge.push((counts[k] / counts[k - 1]).trailing_zeros());
    }
    let mut inv = Vec::new();
    for k in (1..=max_k as usize).rev() {
        let at_least_k = ge[k - 1];
        let at_least_next = if k < max_k as usize { ge[k] } else { 0 };
        for _ in 0..(at_least_k - at_least_next) {
            inv.push(k as u32);
        }
    }
    inv
}
