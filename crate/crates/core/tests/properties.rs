use std::collections::BTreeMap;

use proptest::prelude::*;

use whitkit::exact_linear::{format_scalar, kernel_basis, parse_scalar, q, qq, rank, solve, Scalar, SparseMatrix};
use whitkit::homology_ext::{ce_cohomology, ext_solvable2d_zero, kunneth_ext, ExtTable};
use whitkit::lie_presentations::{catalog, CatalogParams};
use whitkit::output::Node;
use whitkit::pbw_engine::{MonomialOrder, Pbw};
use whitkit::structure_analysis::{generalized_weight_decomposition, recombine, socle_vectors, FinDimModule};
use whitkit::whittaker_modules::character_from_tags;
use whitkit::LiePresentation;

fn rational() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| qq(n, d))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = SparseMatrix> {
    proptest::collection::vec(-2i64..=2, rows * cols).prop_map(move |v| {
        let dense: Vec<Vec<Scalar>> = v.chunks(cols).map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        SparseMatrix::from_dense(cols, &dense).unwrap()
    })
}

fn cat(name: &str, n: Option<i64>) -> LiePresentation {
    catalog(name, &CatalogParams { n, ..Default::default() }).unwrap()
}

fn word(dim: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0..dim, 0..=5)
}

fn node() -> impl Strategy<Value = Node> {
    let leaf =
        prop_oneof![any::<bool>().prop_map(Node::Bool), (-1000i64..1000).prop_map(Node::Int), "[a-z0-9/ -]{0,8}".prop_map(Node::Text),];
    leaf.prop_recursive(3, 24, 4, |inner| {
        prop_oneof![
            proptest::collection::vec(inner.clone(), 0..4).prop_map(Node::List),
            proptest::collection::btree_map("[a-z_]{1,6}", inner, 0..4).prop_map(Node::Map),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_text_round_trip(x in rational()) {
        prop_assert_eq!(parse_scalar(&format_scalar(&x)).unwrap(), x);
    }

    #[test]
    fn rank_nullity(m in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| matrix(r, c))) {
        let k = kernel_basis(&m);
        prop_assert_eq!(rank(&m) + k.len(), m.cols());
        for v in &k {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| *x == q(0)));
        }
    }

    #[test]
    fn solve_is_consistent(m in matrix(3, 4), x in proptest::collection::vec(-3i64..=3, 4)) {
        let x: Vec<Scalar> = x.into_iter().map(q).collect();
        let b = m.mul_vec(&x).unwrap();
        let y = solve(&m, &b).unwrap().expect("b is in the image");
        prop_assert_eq!(m.mul_vec(&y).unwrap(), b);
    }

    #[test]
    fn pbw_associative(a in word(5), b in word(5), c in word(5)) {
        let p = cat("borel_sl", Some(3));
        let e = Pbw::new(&p, MonomialOrder::standard(&p));
        let (x, y, z) = (e.normalize_word(&a).unwrap(), e.normalize_word(&b).unwrap(), e.normalize_word(&c).unwrap());
        let left = e.multiply(&e.multiply(&x, &y).unwrap(), &z).unwrap();
        let right = e.multiply(&x, &e.multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        let whole: Vec<usize> = a.iter().chain(&b).chain(&c).copied().collect();
        prop_assert_eq!(left, e.normalize_word(&whole).unwrap());
    }

    #[test]
    fn pbw_order_independent_commutator(w in word(3), i in 0usize..3, j in 0usize..3) {
        let p = cat("sl2", None);
        let e = Pbw::new(&p, MonomialOrder::standard(&p));
        let (x, y) = (e.generator(i), e.generator(j));
        let comm = e.multiply(&x, &y).unwrap().sub(&e.multiply(&y, &x).unwrap());
        let mut br = whitkit::UEAElement::zero();
        for (s, c) in p.bracket(i, j).unwrap().value.iter() {
            br = br.add(&e.generator(*s).scale(c));
        }
        prop_assert_eq!(comm, br);
        let u = e.normalize_word(&w).unwrap();
        prop_assert!(u.degree().unwrap_or(0) as usize <= w.len());
    }

    #[test]
    fn ext_grid_matches_cohomology(mu in rational(), shift in prop_oneof![Just(q(0)), Just(q(1)), Just(q(-1)), Just(q(2)), rational()]) {
        let nu = &mu + &shift;
        let t = ext_solvable2d_zero(&mu, &nu).unwrap();
        let s = cat("solvable2d", None);
        let c = SparseMatrix::from_dense(1, &[vec![shift.clone()]]).unwrap();
        let m = FinDimModule::new(1, vec!["a".into(), "b".into()], vec![c, SparseMatrix::zeros(1, 1)]).unwrap();
        let h = ce_cohomology(&s, &m, 3).unwrap();
        for i in 0..=3 {
            prop_assert_eq!(t.get(i), h.get(i));
        }
    }

    #[test]
    fn kunneth_is_symmetric(a in proptest::collection::btree_map(0usize..4, 0usize..3, 0..4),
                            b in proptest::collection::btree_map(0usize..4, 0usize..3, 0..4), k in 0usize..7) {
        let (x, y) = (ExtTable::from_dims(a), ExtTable::from_dims(b));
        prop_assert_eq!(kunneth_ext(&[x.clone(), y.clone()], k), kunneth_ext(&[y, x], k));
    }

    #[test]
    fn characters_vanish_on_derived(a in rational(), c in rational()) {
        let h = cat("heisenberg3d", None);
        let all = vec![0, 1, 2];
        let r = character_from_tags(&h, &all, &[("a", a), ("c", c.clone())]);
        prop_assert_eq!(r.is_ok(), c == q(0));
    }

    #[test]
    fn tree_round_trip(n in node()) {
        prop_assert_eq!(Node::from_json(&n.to_json()).unwrap(), n);
    }

    #[test]
    fn commuting_modules_decompose(eig in proptest::collection::vec(-3i64..=3, 1..=6), nil in proptest::collection::vec(-2i64..=2, 15)) {
        let n = eig.len();
        let mut a = SparseMatrix::zeros(n, n);
        let mut b = SparseMatrix::zeros(n, n);
        let mut k = 0;
        for i in 0..n {
            a.set(i, i, q(eig[i]));
            for j in i + 1..n {
                if eig[i] == eig[j] {
                    b.set(i, j, q(nil[k % nil.len()]));
                    k += 1;
                }
            }
        }
        // b only links equal eigenvalues, so [a, b] = 0
        let m = FinDimModule::new(n, vec!["a".into(), "b".into()], vec![a, b]).unwrap();
        let blocks = generalized_weight_decomposition(&m).unwrap();
        let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
        for x in &eig {
            *counts.entry(*x).or_default() += 1;
        }
        prop_assert_eq!(blocks.len(), counts.len());
        prop_assert_eq!(blocks.iter().map(|b| b.dim()).sum::<usize>(), n);
        prop_assert_eq!(recombine(&m, &blocks).unwrap(), m.actions().to_vec());
        prop_assert!(!socle_vectors(&m).unwrap().is_empty());
    }

    #[test]
    fn split_form_round_trip(w in word(5)) {
        let p = cat("borel_sl", Some(3));
        let n = p.part("n").unwrap().to_vec();
        let std = Pbw::new(&p, MonomialOrder::standard(&p));
        let split = Pbw::with_split(&p, &n);
        let u = split.normalize_word(&w).unwrap();
        prop_assert_eq!(split.join_split(&split.split_form(&u)).unwrap(), u.clone());
let cut = split.order().split_point();
        let mut converted = whitkit::UEAElement::zero();
        for (m, c) in u.terms() {
            let (lo, hi) = m.split_at(cut);
            prop_assert!(lo.factors().iter().all(|(x, _)| *x < cut) && hi.factors().iter().all(|(x, _)| *x >= cut));
            let symbols: Vec<usize> = m.word().into_iter().map(|x| split.order().symbol_at(x)).collect();
            converted = converted.add(&std.normalize_word(&symbols).unwrap().scale(c));
        }
        prop_assert_eq!(converted, std.normalize_word(&w).unwrap());
    }
}
