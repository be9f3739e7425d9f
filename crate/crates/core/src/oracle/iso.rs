use rayon::prelude::*;

use super::table::{closure, coset_map, enumerate, fingerprint, GroupTable};
use crate::class2::{Class2Group, Gen};

/// An explicit isomorphism from a presented class-2 group onto a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    /// Images of the presentation generators `a`, `b`.
    pub images: [usize; 2],
    /// `map[i]` is the image of target element `i`.
    pub map: Vec<usize>,
}

/// Evaluates a product of generator powers under `a -> g`, `b -> h`.
pub(crate) fn eval_term(t: &GroupTable, g: usize, h: usize, term: &[(Gen, i64)]) -> usize {
    let c = t.commutator(g, h);
    term.iter().fold(t.identity(), |acc, &(gen, e)| {
        let base = match gen {
            Gen::A => g,
            Gen::B => h,
            Gen::C => c,
            Gen::CA => t.commutator(c, g),
            Gen::CB => t.commutator(c, h),
        };
        t.mul(acc, t.pow(base, e))
    })
}

/// Searches for images `(g, h)` of the generators of `target` in `t` that
/// satisfy every defining relation and generate `t`. When the orders agree,
/// such a pair defines an isomorphism; the map is built along the Cayley
/// graph and checked edge by edge before it is returned.
pub fn iso_2gen(t: &GroupTable, target: &Class2Group) -> Option<Isomorphism> {
    let n = t.order();
    if n as u64 != target.order() {
        return None;
    }
    if fingerprint(t) != target.fingerprint() {
        return None;
    }
    let relations = target.relations();
    let [ord_a, ord_b, ord_c] = target.generator_orders();

    // Frattini subgroup of a 2-group: generated by squares.
    let squares: Vec<usize> = (0..n).map(|x| t.mul(x, x)).collect();
    let frattini = closure(t, &squares);
    if n / frattini.order() != 4 {
        // not 2-generated (or cyclic)
        return None;
    }
    let phi_class = coset_map(t, &frattini);
    let orders: Vec<u64> = (0..n).into_par_iter().map(|x| t.element_order(x)).collect();

    let firsts: Vec<usize> = (0..n)
        .filter(|&x| orders[x] == ord_a && phi_class[x] != 0)
        .collect();
    let seconds: Vec<usize> = (0..n)
        .filter(|&x| orders[x] == ord_b && phi_class[x] != 0)
        .collect();

    let try_pair = |g: usize, h: usize| -> Option<Isomorphism> {
        if phi_class[h] == phi_class[g] {
            return None;
        }
        if t.element_order(t.commutator(g, h)) != ord_c {
            return None;
        }
        let ok = relations
            .iter()
            .all(|rel| eval_term(t, g, h, &rel.lhs) == eval_term(t, g, h, &rel.rhs));
        if !ok {
            return None;
        }
        extend_to_isomorphism(t, target, [g, h])
    };

    // designated generators first
    let [ga, gb] = t.generators();
    if orders[ga] == ord_a && orders[gb] == ord_b && phi_class[ga] != 0 && phi_class[gb] != 0 {
        if let Some(iso) = try_pair(ga, gb) {
            return Some(iso);
        }
    }
    firsts
        .par_iter()
        .find_map_first(|&g| seconds.iter().find_map(|&h| try_pair(g, h)))
}

/// Builds `f` with `f(x·a) = f(x)·g` and `f(x·b) = f(x)·h` by breadth-first
/// search over the Cayley graph of `target`, failing on any inconsistency or
/// if `f` is not a bijection.
fn extend_to_isomorphism(
    t: &GroupTable,
    target: &Class2Group,
    images: [usize; 2],
) -> Option<Isomorphism> {
    let model = enumerate(target.clone(), u64::MAX).ok()?;
    let n = model.order();
    let mut map = vec![usize::MAX; n];
    let mut hit = vec![false; t.order()];
    map[model.identity()] = t.identity();
    hit[t.identity()] = true;
    let mut queue = std::collections::VecDeque::from([model.identity()]);
    let gens = model.generators();
    while let Some(x) = queue.pop_front() {
        for (k, &s) in gens.iter().enumerate() {
            let y = model.mul(x, s);
            let fy = t.mul(map[x], images[k]);
            if map[y] == usize::MAX {
                if hit[fy] {
                    return None;
                }
                hit[fy] = true;
                map[y] = fy;
                queue.push_back(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    if map.contains(&usize::MAX) {
        return None;
    }
    Some(Isomorphism { images, map })
}
