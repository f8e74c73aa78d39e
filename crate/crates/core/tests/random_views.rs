use enricat::base::Base;
use enricat::colimits::{
    pushout_along_free, verify_decomposition, verify_pushout_square, verify_special_cases,
    Attachment, PushoutTrace, Square, View,
};
use enricat::gen::{Envelope, Gen};
use enricat::vcat::{validate_category, VCategory};

fn views(n: usize) -> Vec<View> {
    let mut out = Vec::new();
    for x in 0..n {
        out.push(View::Endo { x });
        for y in 0..n {
            out.push(View::RightModule { x, y });
            out.push(View::LeftModule { x, y });
            for z in 0..n {
                out.push(View::ReducedComposition { x, y, z });
            }
        }
    }
    out
}

fn sweep(tr: &PushoutTrace, tag: &str) -> (usize, usize) {
    let (mut ran, mut skipped) = (0, 0);
    let r = tr.result.as_ref().expect("stabilized");
    assert!(
        validate_category(&r.k).passed(),
        "{tag}: result is not a category"
    );
    assert!(r.phi.validate().passed(), "{tag}: leg is not a functor");
    for v in views(tr.h.len()) {
        let rep = verify_decomposition(tr, v);
        assert!(!rep.failed(), "{tag} {v:?}: {rep:?}");
        if rep.passed() {
            ran += 1
        } else {
            skipped += 1;
        }
    }
    let sp = verify_special_cases(tr);
    assert!(!sp.failed(), "{tag}: {sp:?}");
    let sq = verify_pushout_square(&Square::Free(tr));
    assert!(sq.passed(), "{tag}: {sq:?}");
    (ran, skipped)
}

fn run(h: &VCategory, att: &Attachment, tag: &str, totals: &mut (usize, usize, usize)) {
    let tr = pushout_along_free(h, att, 6).expect("engine");
    if !tr.stabilized {
        totals.2 += 1;
        return;
    }
    let (r, s) = sweep(&tr, tag);
    totals.0 += r;
    totals.1 += s;
}

#[test]
fn finset_attachments_satisfy_every_view() {
    let mut g = Gen::new(101);
    let mut t = (0, 0, 0);
    for i in 0..80 {
        let h = g.finset_category(Envelope { objects: 2, hom: 3 });
        let att = if i % 2 == 0 {
            g.attachment(&h, 1, 2)
        } else {
            g.attachment(&h, 2, 1)
        };
        run(&h, &att, &format!("finset #{i}"), &mut t);
    }
    eprintln!("finset: ran {} skipped {} unstable {}", t.0, t.1, t.2);
}

#[test]
fn bool_attachments_satisfy_every_view() {
    let mut g = Gen::new(202);
    let mut t = (0, 0, 0);
    for i in 0..40 {
        let h = g.bool_category(3);
        let att = g.attachment(&h, 1, 1);
        run(&h, &att, &format!("bool #{i}"), &mut t);
    }
    eprintln!("bool: ran {} skipped {} unstable {}", t.0, t.1, t.2);
}

#[test]
fn chain_attachments_satisfy_every_view() {
    let mut g = Gen::new(303);
    let mut t = (0, 0, 0);
    for i in 0..60 {
        let p = if i % 2 == 0 { 2 } else { 3 };
        let hi = 2 + (i % 5 == 4) as i32;
        let base = Base::Chain { p, lo: 0, hi };
        let h = g.chain_category(p, 0, hi, Envelope { objects: 2, hom: 2 });
        let gens = if i % 3 == 0 {
            Gen::positive_generators(base)
        } else {
            enricat::base::generating_sets(base).0
        };
        let att = g.generator_attachment(&h, &gens);
        run(&h, &att, &format!("chain #{i}"), &mut t);
    }
    eprintln!("chain: ran {} skipped {} unstable {}", t.0, t.1, t.2);
}

#[test]
fn word_oracle_matches_engine() {
    let mut g = Gen::new(404);
    let (mut stable, mut ran) = (0, 0);
    for i in 0..200 {
        let (h, att) = g.oracle_instance(Envelope { objects: 3, hom: 2 });
        let tr = pushout_along_free(&h, &att, 4).expect("engine");
        let rep = enricat::colimits::compare_with_oracle(&tr, 5);
        assert!(!rep.failed(), "#{i} {h:?} {att:?}: {rep:?}");
        stable += tr.stabilized as usize;
        ran += rep.passed() as usize;
    }
    eprintln!("oracle: stabilized {stable} compared {ran}");
    assert!(stable >= 150);
}

#[test]
fn product_squares_of_pushouts_are_pushouts() {
    use enricat::base::{BaseValue, Mode};
    use enricat::colimits::{pushout_square, verify_product_associativity, verify_product_square};
    let mut g = Gen::new(505);
    for i in 0..100 {
        let mut square = || {
            let u = g.complex(2, 0, 2, 2);
            let v = g.complex(2, 0, 2, 2);
            let x = g.complex(2, 0, 2, 2);
            let f = g.chain_map(&u, &v);
            let k = g.chain_map(&u, &x);
            pushout_square(&f, &k).unwrap()
        };
        let (s1, s2) = (square(), square());
        let r = verify_product_square(&s1, &s2, Mode::Truncate);
        assert!(r.passed(), "#{i}: {r:?}");
        let a = verify_product_associativity(&s1.top, &s2.top, &s1.left, Mode::Truncate);
        assert!(a.passed(), "#{i}: {a:?}");
    }
    for _ in 0..50 {
        let mut m = || {
            let (a, b) = (g.below(3), g.below(3));
            g.base_map(&BaseValue::Set(a), &BaseValue::Set(b))
                .unwrap_or_else(|| g.base_map(&BaseValue::Set(0), &BaseValue::Set(b)).unwrap())
        };
        let (f, h, k) = (m(), m(), m());
        assert!(verify_product_associativity(&f, &h, &k, Mode::Strict).passed());
        let s1 = pushout_square(&f, &h.clone()).ok();
        if let (Some(s1), Some(s2)) = (s1, pushout_square(&k, &k).ok()) {
            assert!(verify_product_square(&s1, &s2, Mode::Strict).passed());
        }
    }
}

#[test]
fn free_cells_paste_in_either_order() {
    use enricat::colimits::verify_pasting;
    let mut g = Gen::new(606);
    let (mut ran, mut skipped) = (0, 0);
    for i in 0..60 {
        let (h, p, q) = match i % 3 {
            0 => {
                let h = g.finset_category(Envelope { objects: 2, hom: 2 });
                let (p, q) = (g.attachment(&h, 1, 2), g.attachment(&h, 1, 2));
                (h, p, q)
            }
            1 => {
                let h = g.bool_category(3);
                let (p, q) = (g.attachment(&h, 1, 1), g.attachment(&h, 1, 1));
                (h, p, q)
            }
            _ => {
                let base = Base::Chain { p: 2, lo: 0, hi: 2 };
                let h = g.chain_category(2, 0, 2, Envelope { objects: 2, hom: 2 });
                let gens = Gen::positive_generators(base);
                let (p, q) = (
                    g.generator_attachment(&h, &gens),
                    g.generator_attachment(&h, &gens),
                );
                (h, p, q)
            }
        };
        let r = verify_pasting(&h, &p, &q, 5);
        assert!(!r.failed(), "#{i}: {r:?}");
        if r.passed() {
            ran += 1
        } else {
            skipped += 1
        }
    }
    eprintln!("pasting: ran {ran} skipped {skipped}");
}
