use capgroups::oracle::{self, FiniteGroup, OracleError};
use capgroups::{model, NilGroup, TypeParams};

#[test]
fn enumerate_examples() {
    assert_eq!(
        oracle::enumerate(NilGroup::product(1, 1).unwrap(), 1 << 16)
            .unwrap()
            .order(),
        16
    );
    assert_eq!(
        oracle::enumerate(model(&TypeParams::iii(1).unwrap()), 1 << 16)
            .unwrap()
            .order(),
        8
    );
    assert_eq!(
        oracle::enumerate(model(&TypeParams::i(1, 1, 1).unwrap()), 1 << 16)
            .unwrap()
            .order(),
        8
    );
    let err = oracle::enumerate(NilGroup::product(4, 3).unwrap(), 1 << 10).unwrap_err();
    assert_eq!(
        err,
        OracleError::BoundExceeded {
            order: 1 << 16,
            bound: 1 << 10
        }
    );
}

#[test]
fn indexing_is_a_bijection() {
    let g = NilGroup::product(2, 1).unwrap();
    for i in 0..g.order() as usize {
        assert_eq!(g.index_of(&g.element(i)), i);
    }
    let m = model(&TypeParams::ii(3, 2, 2, 1).unwrap());
    for i in 0..m.order() as usize {
        assert_eq!(m.index_of(&m.element(i)), i);
    }
}

#[test]
fn centers_and_quotients() {
    let t = oracle::enumerate(NilGroup::product(1, 1).unwrap(), 1 << 16).unwrap();
    let z = oracle::brute_center(&t);
    assert_eq!(z.order(), 2);
    let q = oracle::quotient_central(&t, &z).unwrap();
    assert_eq!(q.order(), 8);
    let d8 = oracle::enumerate(model(&TypeParams::i(1, 1, 1).unwrap()), 64).unwrap();
    assert_eq!(oracle::brute_center(&d8).order(), 2);
    let whole = oracle::closure(&d8, &d8.generators());
    assert_eq!(whole.order(), 8);
    assert_eq!(
        oracle::quotient_central(&d8, &whole).unwrap_err(),
        OracleError::NotCentral
    );
    let a = oracle::closure(&d8, &[d8.generators()[1]]);
    assert_eq!(
        oracle::quotient_normal(&d8, &a).unwrap_err(),
        OracleError::NotNormal
    );
    let nc = oracle::normal_closure(&d8, &[d8.generators()[1]]);
    assert_eq!(nc.order(), 4);
    assert_eq!(oracle::quotient_normal(&d8, &nc).unwrap().order(), 2);
}

#[test]
fn lower_central_series() {
    let t = oracle::enumerate(NilGroup::product(2, 1).unwrap(), 1 << 16).unwrap();
    let s = oracle::lcs(&t);
    assert_eq!(s.len(), 4);
    assert_eq!(s[0].order(), 64);
    assert!(s[3].is_trivial() && !s[2].is_trivial());
    let t = model(&TypeParams::i(2, 2, 1).unwrap()).table();
    let s = oracle::lcs(&t);
    assert_eq!(s.len(), 3);
    assert!(s[2].is_trivial());
    assert_eq!(oracle::derived_subgroup(&t).order(), 2);
}

#[test]
fn isomorphism_examples() {
    let d8 = model(&TypeParams::i(1, 1, 1).unwrap());
    let q8 = model(&TypeParams::iii(1).unwrap());
    assert!(oracle::iso_2gen(&d8.table(), &q8).is_none());
    assert!(oracle::iso_2gen(&q8.table(), &d8).is_none());
    for p in [
        TypeParams::i(1, 1, 1).unwrap(),
        TypeParams::iii(1).unwrap(),
        TypeParams::ii(3, 2, 2, 1).unwrap(),
    ] {
        let m = model(&p);
        let t = m.table();
        let iso = oracle::iso_2gen(&t, &m).unwrap();
        assert_eq!(iso.map.len(), t.order());
        let mut seen = iso.map.clone();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), t.order());
        for i in 0..t.order() {
            for j in 0..t.order() {
                assert_eq!(iso.map[t.mul(i, j)], t.mul(iso.map[i], iso.map[j]));
            }
        }
    }
}

#[test]
fn nilpotent_product_quotient_is_recognized() {
    // G(1,1)/Z ≅ D8
    let t = oracle::enumerate(NilGroup::product(1, 1).unwrap(), 1 << 16).unwrap();
    let q = oracle::quotient_central(&t, &oracle::brute_center(&t)).unwrap();
    assert!(oracle::iso_2gen(&q, &model(&TypeParams::i(1, 1, 1).unwrap())).is_some());
}

#[test]
fn memoize_is_transparent() {
    let g = NilGroup::with_central_powers(2, 2, 1).unwrap();
    let lazy = oracle::enumerate(g.clone(), 1 << 16).unwrap();
    let mut eager = lazy.clone();
    eager.memoize();
    assert!(eager.cayley_table().is_some());
    for i in 0..lazy.order() {
        for j in 0..lazy.order() {
            assert_eq!(lazy.mul(i, j), eager.mul(i, j));
        }
    }
    assert_eq!(oracle::fingerprint(&lazy), oracle::fingerprint(&eager));
    assert_eq!(
        oracle::fingerprint(&lazy),
        oracle::fingerprint(&oracle::enumerate(g, 1 << 16).unwrap())
    );
}

#[test]
fn words_parse_and_collect() {
    use capgroups::FreeElt;
    let w = oracle::parse_word("AB ab").unwrap();
    assert_eq!(oracle::DisplayWord(&w).to_string(), "ABab");
    assert_eq!(oracle::collect_word(&w), FreeElt::C);
    assert_eq!(oracle::parse_word("a⁻¹b⁻¹ab"), Some(w));
    assert!(oracle::parse_word("abc").is_none());
    let x = FreeElt::new(3, -2, 5, -1, 4);
    assert_eq!(oracle::collect_word(&oracle::word_of(&x)), x);
}
