use enricat::base::{
    assoc, classify_map, left_unitor, pi0_map, pi0_pairing, right_unitor, tensor_map, BaseMap,
    BaseValue, Complex, Mode,
};
use enricat::basechange::{apply_to_category, apply_to_functor, MonoidalFunctor};
use enricat::fp::Mat;
use enricat::gen::{Envelope, Gen};
use enricat::io::{parse_instance, to_canonical_string, Instance};
use enricat::suites::SUITES;
use enricat::vcat::{
    cat_pullback, cat_pushforward_injective, iso_in_pi0, pi0_category, pi0_functor,
    reduced_composition, validate_category,
};
use proptest::prelude::*;

fn env(g: &mut Gen) -> Envelope {
    Envelope {
        objects: 1 + g.below(3),
        hom: 2,
    }
}

/// A complex with support in degrees 0 and 1, in the window [0, hi].
fn low_complex(g: &mut Gen, p: u32, hi: i32) -> Complex {
    let c = g.complex(p, 0, 1, 2);
    let mut dims = c.dims.clone();
    let mut d = c.d.clone();
    while dims.len() < (hi + 1) as usize {
        d.push(Mat::zeros(p, *dims.last().unwrap(), 0));
        dims.push(0);
    }
    Complex::new(p, 0, hi, dims, d).unwrap()
}

/// All vectors of F_p^n.
fn vectors(p: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                (0..p).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn apply(p: u32, m: &[Vec<u32>], v: &[u32]) -> Vec<u32> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum::<u32>() % p)
        .collect()
}

/// Whether the mapping cone of f is acyclic, by counting cycles and boundaries of every vector.
fn cone_is_acyclic(f: &BaseMap) -> bool {
    let (a, b) = (f.src.as_chain(), f.tgt.as_chain());
    let p = a.p;
    let in_a = |n: i32| n >= a.lo && n <= a.hi;
    // cone_n = A_{n-1} ⊕ B_n with d(x, y) = (-dx, fx + dy).
    let dim = |n: i32| a.dim(n - 1) + b.dim(n);
    let diff = |n: i32| -> Vec<Vec<u32>> {
        let (top, left) = (a.dim(n - 2), a.dim(n - 1));
        let mut m = vec![vec![0; dim(n)]; dim(n - 1)];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, e) in row.iter_mut().enumerate() {
                *e = match (r < top, c < left) {
                    (true, true) if in_a(n - 1) && in_a(n - 2) => (p - a.diff(n - 1).get(r, c)) % p,
                    (false, true) if in_a(n - 1) => f.mat(n - 1).get(r - top, c),
                    (false, false) if n > b.lo && n <= b.hi => b.diff(n).get(r - top, c - left),
                    _ => 0,
                };
            }
        }
        m
    };
    (a.lo..=b.hi + 1).all(|n| {
        let dn = diff(n);
        let cycles = vectors(p, dim(n))
            .iter()
            .filter(|v| apply(p, &dn, v).iter().all(|&x| x == 0))
            .count();
        let up = diff(n + 1);
        let mut bounds: Vec<Vec<u32>> = vectors(p, dim(n + 1))
            .iter()
            .map(|v| apply(p, &up, v))
            .collect();
        bounds.sort();
        bounds.dedup();
        cycles == bounds.len()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn classification_flags_are_consistent(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let p = 2 + g.below(2) as u32;
        let (a, b) = (g.complex(p, 0, 2, 2), g.complex(p, 0, 2, 2));
        let f = g.chain_map(&a, &b);
        let c = classify_map(&f);
        prop_assert_eq!(c.is_trivial_cofibration, c.is_cofibration && c.is_weak_equivalence);
        prop_assert_eq!(c.is_trivial_fibration, c.is_fibration && c.is_weak_equivalence);
        let id = classify_map(&BaseMap::identity(&f.src));
        prop_assert!(id.is_iso && id.is_weak_equivalence && id.is_cofibration && id.is_fibration);
        prop_assert!(id.is_trivial_cofibration && id.is_trivial_fibration);
    }

    #[test]
    fn weak_equivalences_satisfy_two_out_of_three(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let (a, b, c) = (g.complex(2, 0, 2, 2), g.complex(2, 0, 2, 2), g.complex(2, 0, 2, 2));
        let f = g.chain_map(&a, &b);
        let h = g.chain_map(&b, &c);
        let hf = h.after(&f).unwrap();
        let we = |m: &BaseMap| classify_map(m).is_weak_equivalence;
        let (x, y, z) = (we(&f), we(&h), we(&hf));
        prop_assert!(!(x && y) || z);
        prop_assert!(!(x && z) || y);
        prop_assert!(!(y && z) || x);
    }

    #[test]
    fn quasi_isomorphisms_have_acyclic_cones(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let p = 2 + g.below(2) as u32;
        let (a, b) = (g.complex(p, 0, 2, 2), g.complex(p, 0, 2, 2));
        let f = if g.chance(0.3) { BaseMap::identity(&BaseValue::Chain(a)) } else { g.chain_map(&a, &b) };
        prop_assert_eq!(classify_map(&f).is_weak_equivalence, cone_is_acyclic(&f));
    }

    #[test]
    fn pi0_pairing_is_natural(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let mode = Mode::Truncate;
        let cx = |g: &mut Gen| BaseValue::Chain(g.complex(2, 0, 2, 2));
        let (a, b, a2, b2) = (cx(&mut g), cx(&mut g), cx(&mut g), cx(&mut g));
        let f = g.base_map(&a, &a2).unwrap();
        let h = g.base_map(&b, &b2).unwrap();
        let fh = tensor_map(&[&f, &h], mode).unwrap();
        let (pf, ph, pfh) = (pi0_map(&f).unwrap(), pi0_map(&h).unwrap(), pi0_map(&fh).unwrap());
        let src = pi0_pairing(&a, &b, mode).unwrap();
        let tgt = pi0_pairing(&a2, &b2, mode).unwrap();
        let nb = ph.len();
        let nb2 = enricat::base::pi0(&b2).unwrap().size;
        for i in 0..pf.len() {
            for j in 0..nb {
                prop_assert_eq!(pfh[src[i * nb + j]], tgt[pf[i] * nb2 + ph[j]]);
            }
        }
    }

    #[test]
    fn pentagon_and_triangle_commute(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let (mode, p) = (Mode::Strict, 2 + g.below(2) as u32);
        let v: Vec<BaseValue> = if g.chance(0.5) {
            (0..4).map(|_| BaseValue::Chain(low_complex(&mut g, p, 4))).collect()
        } else {
            (0..4).map(|_| BaseValue::Set(g.below(3))).collect()
        };
        let t = |x: &BaseValue, y: &BaseValue| enricat::base::Layout::new(&[x.clone(), y.clone()], mode).unwrap().value;
        let id = BaseMap::identity;
        let (a, b, c, d) = (&v[0], &v[1], &v[2], &v[3]);
        let lhs = tensor_map(&[&id(a), &assoc(b, c, d, mode).unwrap()], mode).unwrap()
            .after(&assoc(a, &t(b, c), d, mode).unwrap()).unwrap()
            .after(&tensor_map(&[&assoc(a, b, c, mode).unwrap(), &id(d)], mode).unwrap()).unwrap();
        let rhs = assoc(a, b, &t(c, d), mode).unwrap().after(&assoc(&t(a, b), c, d, mode).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let one = a.base().unit();
        let tri_l = tensor_map(&[&id(a), &left_unitor(b, mode).unwrap()], mode).unwrap()
            .after(&assoc(a, &one, b, mode).unwrap()).unwrap();
        let tri_r = tensor_map(&[&right_unitor(a, mode).unwrap(), &id(b)], mode).unwrap();
        prop_assert_eq!(tri_l, tri_r);
    }

    #[test]
    fn pi0_isomorphism_is_an_equivalence_relation(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let e = env(&mut g);
        let k = g.chain_category(2, 0, 2, e);
        let n = k.len();
        let rel = |x, y| iso_in_pi0(&k, x, y).unwrap().is_some();
        for x in 0..n {
            prop_assert!(rel(x, x));
            for y in 0..n {
                prop_assert_eq!(rel(x, y), rel(y, x));
                for z in 0..n {
                    prop_assert!(!(rel(x, y) && rel(y, z)) || rel(x, z));
                }
            }
        }
        prop_assert!(pi0_category(&k).unwrap().validate().is_ok());
    }

    #[test]
    fn pushforward_then_pullback_is_the_identity(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let e = env(&mut g);
        let k = g.finset_category(e);
        let n = k.len();
        let mut labels: Vec<String> = (0..n + 2).map(|i| format!("s{i}")).collect();
        labels.swap(0, n + 1);
        let f: Vec<usize> = (0..n).map(|i| i + 1).collect();
        let (pushed, _) = cat_pushforward_injective(labels, &f, &k).unwrap();
        prop_assert!(validate_category(&pushed).passed());
        let back_labels = k.objects().to_vec();
        let (back, _) = cat_pullback(back_labels, &f, &pushed).unwrap();
        prop_assert_eq!(back.graph, k.graph.clone());
        prop_assert_eq!(back.comp, k.comp.clone());
    }

    #[test]
    fn unit_reduced_compositions_are_isomorphisms(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let e = env(&mut g);
        let k = if g.chance(0.5) { g.finset_category(e) } else { g.chain_category(2, 0, 2, e) };
        let n = k.len();
        for x in 0..n {
            for z in 0..n {
                prop_assert!(reduced_composition(&k, x, x, z).unwrap().reduced.is_iso());
                prop_assert!(reduced_composition(&k, x, z, z).unwrap().reduced.is_iso());
            }
        }
    }

    #[test]
    fn dk_equivalences_induce_functors_on_pi0(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let e = env(&mut g);
        let phi = g.dk_equivalence(2, 0, 2, e);
        prop_assert!(validate_category(&phi.tgt).passed());
        prop_assert!(phi.validate().passed());
        let tables = pi0_functor(&phi).unwrap();
        let (s, t) = (pi0_category(&phi.src).unwrap(), pi0_category(&phi.tgt).unwrap());
        let fo = phi.objmap();
        let n = s.len();
        for x in 0..n {
            prop_assert_eq!(tables[x * n + x][s.ids[x]], t.ids[fo[x]]);
        }
    }

    #[test]
    fn linearization_is_functorial_and_valid(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let e = env(&mut g);
        let k = g.finset_category(e);
        let lin = MonoidalFunctor::Linearize { p: 2 + g.below(2) as u32, lo: 0, hi: 2 };
        prop_assert!(validate_category(&apply_to_category(&lin, &k).unwrap()).passed());
        let phi = g.duplicate_object(&k);
        let psi = g.duplicate_object(&phi.tgt);
        let composite = apply_to_functor(&lin, &psi.after(&phi).unwrap()).unwrap();
        let separate = apply_to_functor(&lin, &psi).unwrap().after(&apply_to_functor(&lin, &phi).unwrap()).unwrap();
        prop_assert_eq!(composite.map.comps, separate.map.comps);
    }

    #[test]
    fn instance_files_round_trip(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let e = env(&mut g);
        let k = if g.chance(0.5) { g.finset_category(e) } else { g.chain_category(3, 0, 2, e) };
        let mut inst = Instance::new(k.base());
        inst.categories.insert("K".into(), k);
        let text = to_canonical_string(&inst.to_json());
        let again = to_canonical_string(&parse_instance(&text).unwrap().to_json());
        prop_assert_eq!(text, again);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    /// Every registered suite holds on arbitrary instance seeds.
    #[test]
    fn suites_hold_on_arbitrary_seeds(seed in any::<u64>()) {
        for s in SUITES {
            let r = s.instance(seed);
            prop_assert!(!r.failed(), "{}: {}", s.id, serde_json::to_string(&r).unwrap());
        }
    }
}

#[test]
fn cone_oracle_separates_the_two_cases() {
    let s = BaseValue::Chain(Complex::sphere(2, 0, 2, 1).unwrap());
    let zero = BaseValue::Chain(Complex::zero(2, 0, 2));
    assert!(!cone_is_acyclic(&BaseMap::zero(&s, &zero).unwrap()));
    assert!(cone_is_acyclic(&BaseMap::identity(&s)));
    let d = BaseValue::Chain(Complex::disk(2, 0, 2, 2).unwrap());
    assert!(cone_is_acyclic(&BaseMap::zero(&d, &zero).unwrap()));
}
