//! Corrupted outputs must be caught: every verifier here is fed a deliberately wrong answer.

use enricat::base::{generating_sets, Base, BaseMap, BaseValue, Complex};
use enricat::colimits::{
    compare_with_oracle, pushout_along_free, pushout_square, stage_squares, verify_decomposition,
    verify_product_square, verify_pushout_square, Attachment, PushoutTrace, Square, View,
};
use enricat::dk::{in_class_k_cell, is_dk_equivalence, kcell_certificates};
use enricat::gen::{Envelope, Gen};
use enricat::vcat::{validate_category, VCategory, VFunctor};

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("o{i}")).collect()
}

/// Two free parallel arrows between otherwise unrelated objects.
fn finset_trace() -> PushoutTrace {
    let h = VCategory::unit(Base::FinSet, labels(2));
    let att = Attachment {
        a: 0,
        b: 1,
        f: BaseMap::from_initial(&BaseValue::Set(2)),
        gbar: BaseMap::from_initial(&BaseValue::Set(0)),
    };
    let tr = pushout_along_free(&h, &att, 3).unwrap();
    assert!(tr.stabilized);
    tr
}

fn chain_trace(seed: u64) -> PushoutTrace {
    let base = Base::chain(2, 0, 2);
    let mut g = Gen::new(seed);
    loop {
        let h = g.chain_category(2, 0, 2, Envelope { objects: 2, hom: 2 });
        let att = g.generator_attachment(&h, &Gen::positive_generators(base));
        let tr = pushout_along_free(&h, &att, 3).unwrap();
        if tr.stabilized
            && tr
                .pairs
                .iter()
                .any(|p| p.last > 0 && !p.stages[1].is_initial())
        {
            return tr;
        }
    }
}

#[test]
fn oracle_rejects_an_unchanged_category() {
    let mut tr = finset_trace();
    assert!(compare_with_oracle(&tr, 4).passed());
    let r = tr.result.as_mut().unwrap();
    r.k = tr.h.clone();
    let report = compare_with_oracle(&tr, 4);
    assert!(report.failed());
    assert!(report.witness.is_some());
}

#[test]
fn pushout_square_check_rejects_a_wrong_arrow() {
    let mut tr = finset_trace();
    assert!(verify_pushout_square(&Square::Free(&tr)).passed());
    let r = tr.result.as_mut().unwrap();
    let v = r.g_adj.src.clone();
    r.g_adj = BaseMap::set(v.clone(), r.g_adj.tgt.clone(), vec![0; v.as_set()]).unwrap();
    assert!(verify_pushout_square(&Square::Free(&tr)).failed());
}

#[test]
fn stage_square_check_rejects_a_zero_bonding_map() {
    let mut tr = chain_trace(3);
    assert!(stage_squares(&tr).passed());
    let p = tr
        .pairs
        .iter_mut()
        .find(|p| p.last > 0 && !p.stages[0].is_initial())
        .unwrap();
    p.bonding[0] = BaseMap::zero(&p.stages[0], &p.stages[1]).unwrap();
    assert!(stage_squares(&tr).failed());
}

#[test]
fn decomposition_rejects_a_corrupted_stage() {
    let mut tr = chain_trace(5);
    let n = tr.h.len();
    let views: Vec<View> = (0..n)
        .flat_map(|x| (0..n).map(move |y| View::RightModule { x, y }))
        .collect();
    assert!(views
        .iter()
        .all(|v| verify_decomposition(&tr, *v).passed()));
    for p in tr.pairs.iter_mut().filter(|p| p.last > 0) {
        for t in 0..p.last {
            p.psibar[t] = BaseMap::zero(&p.psibar[t].src, &p.psibar[t].tgt).unwrap();
        }
    }
    assert!(views
        .iter()
        .any(|v| verify_decomposition(&tr, *v).failed()));
}

#[test]
fn validation_rejects_a_zeroed_identity() {
    let mut g = Gen::new(11);
    let mut k = g.chain_category(2, 0, 2, Envelope { objects: 2, hom: 2 });
    assert!(validate_category(&k).passed());
    k.idm[0] = BaseMap::zero(&k.idm[0].src, &k.idm[0].tgt).unwrap();
    assert!(validate_category(&k).failed());
}

#[test]
fn dk_check_rejects_a_zeroed_component() {
    let mut g = Gen::new(7);
    let phi = g.dk_equivalence(2, 0, 2, Envelope { objects: 2, hom: 2 });
    assert!(is_dk_equivalence(&phi).unwrap().is_dk());
    let mut comps = phi.map.comps.clone();
    let i = comps.iter().position(|c| !c.src.is_initial()).unwrap();
    comps[i] = BaseMap::zero(&comps[i].src, &comps[i].tgt).unwrap();
    let broken = VFunctor::new(
        phi.src.clone(),
        phi.tgt.clone(),
        phi.objmap().to_vec(),
        comps,
    );
    // Either the functor axioms or the DK check must object.
    if let Ok(b) = broken {
        let v = is_dk_equivalence(&b).unwrap();
        assert!(!v.is_dk() || b.validate().failed());
    }
}

#[test]
fn kcell_check_rejects_a_corrupted_square() {
    let base = Base::chain(2, 0, 2);
    let js: Vec<_> = generating_sets(base)
        .1
        .into_iter()
        .filter(|j| j.map.tgt.as_chain().min_degree() >= Some(1))
        .collect();
    let mut g = Gen::new(2);
    let h = g.chain_category(2, 0, 2, Envelope { objects: 1, hom: 2 });
    let att = g.generator_attachment(&h, &js);
    let tr = pushout_along_free(&h, &att, 3).unwrap();
    let certs = kcell_certificates(&tr).unwrap();
    let (_, f, cert) = certs.iter().find(|(_, _, c)| !c.stages.is_empty()).unwrap();
    assert!(in_class_k_cell(f, cert).passed());
    let mut bad = cert.clone();
    let sq = &mut bad.stages[0].square;
    sq.bottom = BaseMap::zero(&sq.bottom.src, &sq.bottom.tgt).unwrap();
    assert!(in_class_k_cell(f, &bad).failed());
}

#[test]
fn square_checks_reject_a_non_commuting_square() {
    let s = BaseValue::Chain(Complex::sphere(2, 0, 2, 0).unwrap());
    let d = BaseValue::Chain(Complex::disk(2, 0, 2, 1).unwrap());
    let i = generating_sets(Base::chain(2, 0, 2))
        .0
        .into_iter()
        .find(|g| g.map.src == s && g.map.tgt == d)
        .unwrap()
        .map;
    let good = pushout_square(&i, &BaseMap::identity(&s)).unwrap();
    assert!(verify_pushout_square(&Square::Base(good.clone())).passed());
    assert!(verify_product_square(&good, &good, enricat::base::Mode::Truncate).passed());
    let mut bad = good.clone();
    bad.bottom = BaseMap::zero(&bad.bottom.src, &bad.bottom.tgt).unwrap();
    assert!(verify_pushout_square(&Square::Base(bad.clone())).failed());
    assert!(verify_product_square(&bad, &good, enricat::base::Mode::Truncate).failed());
}
