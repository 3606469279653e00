use whitkit::exact_linear::{q, qq, Scalar, SparseMatrix};
use whitkit::homology_ext::{ce_cohomology, ext_solvable2d_zero, vk_module};
use whitkit::lie_presentations::{catalog, CatalogParams};
use whitkit::structure_analysis::FinDimModule;
use whitkit::whittaker_modules::{simple_hw_quotient_dims, verma_weight_dims, whittaker_vectors_fin, Character, InducedModule};
use whitkit::LiePresentation;

fn cat(name: &str) -> LiePresentation {
    catalog(name, &CatalogParams::default()).unwrap()
}

/// The defining two-dimensional representation of sl2, symbols in catalog order.
fn sl2_natural(p: &LiePresentation) -> FinDimModule {
    let mut mats = Vec::new();
    for i in 0..p.dim() {
        let m = match p.tag(i) {
            "e" => SparseMatrix::from_i64(&[&[0, 1], &[0, 0]]),
            "f" => SparseMatrix::from_i64(&[&[0, 0], &[1, 0]]),
            "h" => SparseMatrix::from_i64(&[&[1, 0], &[0, -1]]),
            t => panic!("unexpected symbol {t}"),
        };
        mats.push(m);
    }
    let gens: Vec<usize> = (0..p.dim()).collect();
    FinDimModule::for_presentation(p, &gens, 2, mats).unwrap()
}

#[test]
fn natural_sl2_matches_simple_quotient() {
    let p = cat("sl2");
    let v = sl2_natural(&p);
    assert_eq!(v.dim(), 2);
    assert_eq!(simple_hw_quotient_dims(&p, &[q(1)], 4).unwrap(), vec![1, 1, 0, 0, 0]);
    assert_eq!(simple_hw_quotient_dims(&p, &[q(2)], 4).unwrap(), vec![1, 1, 1, 0, 0]);
}

#[test]
fn natural_sl2_whittaker_vectors() {
    let p = cat("sl2");
    let v = sl2_natural(&p);
    let e = v.action("e").unwrap().clone();
    let n = FinDimModule::new(2, vec!["e".into()], vec![e]).unwrap();
    assert_eq!(whittaker_vectors_fin(&n, &[q(0)]).unwrap().len(), 1);
    assert!(whittaker_vectors_fin(&n, &[q(1)]).unwrap().is_empty());
}

#[test]
fn whitehead_vanishing_on_natural_sl2() {
    let p = cat("sl2");
    let t = ce_cohomology(&p, &sl2_natural(&p), 3).unwrap();
    assert!(t.is_zero(), "{t}");
    let triv = FinDimModule::zero_action(1, (0..3).map(|i| p.tag(i).to_string()).collect());
    let t = ce_cohomology(&p, &triv, 3).unwrap();
    assert_eq!((t.get(0), t.get(1), t.get(2), t.get(3)), (1, 0, 0, 1));
}

#[test]
fn sl2_verma_has_one_vector_per_depth() {
    let p = cat("sl2");
    for mu in [q(0), q(3), qq(-1, 2)] {
        assert_eq!(verma_weight_dims(&p, &[mu], 6).unwrap(), vec![1; 7]);
    }
}

/// Monomials of depth `k` in `D1_m` with `m >= 2`, each of depth `m - 1`.
fn w1_lower_count(k: usize, cap: usize) -> usize {
    let mut p = vec![0usize; k + 1];
    p[0] = 1;
    for part in 1..cap {
        for n in part..=k {
            p[n] += p[n - part];
        }
    }
    p[k]
}

#[test]
fn w1_verma_dims_match_enumeration() {
    let w1 = catalog("witt_w", &CatalogParams { n: Some(1), ..Default::default() }).unwrap();
    let got = verma_weight_dims(&w1, &[qq(1, 3)], 4).unwrap();
    let want: Vec<usize> = (0..=4).map(|k| w1_lower_count(k, 5)).collect();
    assert_eq!(got, want);
}

#[test]
fn ext_zero_family_is_shift_invariant() {
    for mu in [q(0), qq(1, 3), q(-5)] {
        for d in [q(-1), q(0), q(1), q(2)] {
            let nu: Scalar = &mu + &d;
            assert_eq!(ext_solvable2d_zero(&mu, &nu).unwrap(), ext_solvable2d_zero(&q(0), &d).unwrap());
        }
    }
}

#[test]
fn vk_endomorphisms_independent_of_mu() {
    for k in 1..=4 {
        let base = vk_module(k, &q(0)).unwrap();
        for mu in [qq(1, 2), q(7)] {
            let v = vk_module(k, &mu).unwrap();
            assert_eq!((v.dim(), v.end_dim), (base.dim(), base.end_dim));
        }
    }
}

#[test]
fn induced_action_satisfies_character() {
    let s = cat("solvable2d");
    let b = s.lookup("b").unwrap();
    let chi = whitkit::whittaker_modules::character_from_tags(&s, &[b], &[("b", q(5))]).unwrap();
    let m = InducedModule::standard(&s, &[b], chi).unwrap();
    let one = whitkit::UEAElement::one();
    assert_eq!(m.act(b, &one).unwrap(), one.scale(&q(5)));
    let z = InducedModule::new(&s, &[b], Character::default()).unwrap();
    assert!(z.act(b, &one).unwrap().is_zero());
}
