//! Seeded property suites. Every suite draws `count` independent instances, each from its own
//! seed, and reports one verdict per instance.

use serde::Serialize;
use serde_json::json;

use crate::base::{
    classify_map, generating_sets, pi0, tensor_map, Base, BaseMap, BaseValue, Complex, Mode,
};
use crate::basechange::{verify_preserves_free_pushout, MonoidalFunctor};
use crate::colimits::{
    compare_with_oracle, free_category, pushout_along_free, pushout_cat, pushout_functor,
    pushout_product, pushout_square, verify_decomposition, verify_pasting,
    verify_product_associativity, verify_product_square, verify_special_cases, Attachment, Cell,
    View,
};
use crate::dk::{
    in_class_k_cell, is_dk_equivalence, is_hes, is_iprime_injective, is_local,
    is_locally_pseudo_cofibrant, is_pseudo_cofibration, kcell_certificates, KCertificate,
    LocalKind,
};
use crate::error::{Error, Result};
use crate::fp::Mat;
use crate::gen::{Envelope, Gen};
use crate::graph::{
    assoc_map, left_unit_map, right_unit_map, tensor_s_map, tensor_s_with, unit_s, GraphMap, VGraph,
};
use crate::report::{PropertyReport, SkipReason, Verdict};
use crate::vcat::{
    cat_pullback, pi0_category, pi0_functor, validate_category, VCategory, VFunctor,
};

type Instance = fn(&mut Gen) -> Result<PropertyReport>;

pub struct Suite {
    pub id: &'static str,
    pub about: &'static str,
    pub default_count: usize,
    run: Instance,
}

pub const SUITES: &[Suite] = &[
    Suite {
        id: "oracle-pushout",
        about: "free push-outs over FinSet and Bool agree with the word oracle",
        default_count: 200,
        run: oracle_mixed,
    },
    Suite {
        id: "oracle-pushout-finset",
        about: "free push-outs over FinSet agree with the word oracle",
        default_count: 200,
        run: oracle_finset,
    },
    Suite {
        id: "oracle-pushout-bool",
        about: "free push-outs over Bool agree with the word oracle",
        default_count: 200,
        run: oracle_bool,
    },
    Suite {
        id: "product-square",
        about: "push-out products of push-out squares are push-outs",
        default_count: 100,
        run: product_square,
    },
    Suite {
        id: "decomposition",
        about: "every decomposition view and special case on chain traces",
        default_count: 50,
        run: decomposition,
    },
    Suite {
        id: "dk-preservation",
        about: "push-outs along cell maps preserve hes functors and DK-equivalences",
        default_count: 50,
        run: dk_preservation,
    },
    Suite {
        id: "local-cofibration",
        about: "I-cell maps with locally pseudo-cofibrant source are local cofibrations",
        default_count: 50,
        run: local_cofibration,
    },
    Suite {
        id: "k-cell",
        about: "J-cell maps are certified relative K-cell complexes in every hom and hff",
        default_count: 50,
        run: k_cell,
    },
    Suite {
        id: "graph-monoidal",
        about: "unit and associativity maps of the graph tensor are isomorphisms",
        default_count: 100,
        run: graph_monoidal,
    },
    Suite {
        id: "free-adjunction",
        about: "free category and forgetful round trips are identities",
        default_count: 50,
        run: free_adjunction,
    },
    Suite {
        id: "pushout-product-axiom",
        about: "push-out products of generators classify as (trivial) cofibrations",
        default_count: 1,
        run: pushout_product_axiom,
    },
    Suite {
        id: "pi0-oracle",
        about: "π₀ of complexes has p^dim H₀ elements, by enumeration",
        default_count: 100,
        run: pi0_oracle,
    },
    Suite {
        id: "pi0-dk",
        about: "π₀ of a DK-equivalence is an equivalence of categories",
        default_count: 30,
        run: pi0_dk,
    },
    Suite {
        id: "hes-composition",
        about: "composites of hes functors are hes",
        default_count: 50,
        run: hes_composition,
    },
    Suite {
        id: "dk-two-of-three",
        about: "DK-equivalences satisfy two-out-of-three",
        default_count: 50,
        run: dk_two_of_three,
    },
    Suite {
        id: "iprime-implies-dk",
        about: "surjective local trivial fibrations are DK-equivalences",
        default_count: 50,
        run: iprime_implies_dk,
    },
    Suite {
        id: "pseudo-cofibration-closure",
        about: "push-outs and composites of pseudo-cofibrations",
        default_count: 50,
        run: pseudo_closure,
    },
    Suite {
        id: "pasting",
        about: "two free cells attach in either order",
        default_count: 50,
        run: pasting,
    },
    Suite {
        id: "base-change",
        about: "built-in monoidal functors are coherent and linearization preserves free push-outs",
        default_count: 50,
        run: base_change,
    },
];

pub fn find_suite(id: &str) -> Result<&'static Suite> {
    SUITES
        .iter()
        .find(|s| s.id == id)
        .ok_or_else(|| Error::UnknownLabel(format!("suite {id}")))
}

/// The seed of instance i of a run.
pub fn instance_seed(seed: u64, i: usize) -> u64 {
    seed ^ (i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteRun {
    pub suite: String,
    pub seed: u64,
    pub count: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub instances: Vec<PropertyReport>,
}

impl SuiteRun {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

impl Suite {
    pub fn instance(&self, seed: u64) -> PropertyReport {
        let mut g = Gen::new(seed);
        let mut r = match (self.run)(&mut g) {
            Ok(r) => r,
            Err(Error::NotStabilized(m)) => {
                PropertyReport::skipped(self.id, SkipReason::Truncation, m)
            }
            Err(Error::Unsupported(m)) => {
                PropertyReport::skipped(self.id, SkipReason::Unsupported, m)
            }
            Err(e) => PropertyReport::fail(self.id, 0, json!({ "error": e.to_string() })),
        };
        r.suite = self.id.into();
        r.with_seed(seed)
    }

    pub fn run(&self, count: usize, seed: u64) -> SuiteRun {
        let instances: Vec<PropertyReport> = (0..count)
            .map(|i| self.instance(instance_seed(seed, i)))
            .collect();
        let tally = |f: fn(&PropertyReport) -> bool| instances.iter().filter(|r| f(r)).count();
        SuiteRun {
            suite: self.id.into(),
            seed,
            count,
            passed: tally(|r| r.passed()),
            failed: tally(|r| r.failed()),
            skipped: tally(|r| matches!(r.verdict, Verdict::Skipped { .. })),
            instances,
        }
    }
}

/// Enough stages for any certificate to apply in the window [0, 2]: positive attachments
/// vanish in-window from stage 3 on.
const CHAIN_BOUND: usize = 3;

const FDCH2: Base = Base::Chain { p: 2, lo: 0, hi: 2 };

fn small(g: &mut Gen) -> Envelope {
    Envelope {
        objects: 1 + g.below(3),
        hom: 2,
    }
}

fn chain_cat(g: &mut Gen) -> VCategory {
    let env = small(g);
    g.chain_category(2, 0, 2, env)
}

fn dk_gen(g: &mut Gen) -> VFunctor {
    let env = small(g);
    g.dk_equivalence(2, 0, 2, env)
}

fn skip_unstable(stabilized: bool) -> Result<()> {
    if stabilized {
        Ok(())
    } else {
        Err(Error::NotStabilized(
            "trace did not stabilize within the bound".into(),
        ))
    }
}

fn oracle_run(h: VCategory, att: Attachment) -> Result<PropertyReport> {
    let tr = pushout_along_free(&h, &att, 4)?;
    skip_unstable(tr.stabilized)?;
    Ok(compare_with_oracle(&tr, 5))
}

fn oracle_mixed(g: &mut Gen) -> Result<PropertyReport> {
    let (h, att) = g.oracle_instance(Envelope { objects: 3, hom: 2 });
    oracle_run(h, att)
}

fn oracle_finset(g: &mut Gen) -> Result<PropertyReport> {
    let objects = 1 + g.below(3);
    let h = g.finset_category(Envelope { objects, hom: 2 });
    let att = g.attachment(&h, 1, 2);
    oracle_run(h, att)
}

fn oracle_bool(g: &mut Gen) -> Result<PropertyReport> {
    let objects = 1 + g.below(3);
    let h = g.bool_category(objects);
    let att = g.attachment(&h, 1, 2);
    oracle_run(h, att)
}

fn product_square(g: &mut Gen) -> Result<PropertyReport> {
    let mut square = || {
        let (u, v, x) = (
            g.complex(2, 0, 2, 2),
            g.complex(2, 0, 2, 2),
            g.complex(2, 0, 2, 2),
        );
        let f = g.chain_map(&u, &v);
        let k = g.chain_map(&u, &x);
        pushout_square(&f, &k)
    };
    let (s1, s2) = (square()?, square()?);
    let sq = verify_product_square(&s1, &s2, Mode::Truncate);
    let assoc = verify_product_associativity(&s1.top, &s2.top, &s1.left, Mode::Truncate);
    Ok(PropertyReport::combine("product-square", vec![sq, assoc]))
}

fn all_views(n: usize) -> Vec<View> {
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

fn decomposition(g: &mut Gen) -> Result<PropertyReport> {
    for _ in 0..10 {
        let p = if g.chance(0.5) { 2 } else { 3 };
        let base = Base::Chain { p, lo: 0, hi: 2 };
        let h = {
            let env = small(g);
            g.chain_category(p, 0, 2, env)
        };
        let gens = if g.chance(0.5) {
            Gen::positive_generators(base)
        } else {
            generating_sets(base).0
        };
        let att = g.generator_attachment(&h, &gens);
        let tr = pushout_along_free(&h, &att, CHAIN_BOUND)?;
        if !tr.stabilized {
            continue;
        }
        let mut parts: Vec<PropertyReport> = all_views(h.len())
            .into_iter()
            .map(|v| verify_decomposition(&tr, v))
            .collect();
        parts.push(verify_special_cases(&tr));
        return Ok(PropertyReport::combine("decomposition", parts));
    }
    Err(Error::NotStabilized(
        "no stabilized trace in 10 draws".into(),
    ))
}

/// A few cells on H: disconnected objects and free attachments along positive generators,
/// each attached to the category built so far.
fn random_cells(
    g: &mut Gen,
    h: &VCategory,
    gens: &[crate::base::Generator],
    objects: bool,
) -> Result<Vec<Cell>> {
    let mut cells = Vec::new();
    let mut cur = h.clone();
    for i in 0..1 + g.below(2) {
        let cell = if objects && g.chance(0.3) {
            Cell::Object {
                label: format!("new{i}"),
            }
        } else {
            Cell::Free(g.generator_attachment(&cur, gens))
        };
        cur = pushout_cat(&cur, std::slice::from_ref(&cell), CHAIN_BOUND)?.result;
        cells.push(cell);
    }
    Ok(cells)
}

/// A homotopically essentially surjective functor out of a random chain category: a
/// DK-equivalence, or a free push-out leg followed by a duplicated object.
fn hes_functor(g: &mut Gen) -> Result<VFunctor> {
    if g.chance(0.5) {
        return Ok(dk_gen(g));
    }
    let h = chain_cat(g);
    let att = g.generator_attachment(&h, &Gen::positive_generators(FDCH2));
    let leg = pushout_along_free(&h, &att, CHAIN_BOUND)?
        .require()?
        .phi
        .clone();
    Ok(if g.chance(0.5) {
        g.duplicate_object(&leg.tgt).after(&leg)?
    } else {
        leg
    })
}

fn dk_preservation(g: &mut Gen) -> Result<PropertyReport> {
    const SUITE: &str = "dk-preservation";
    let phi = hes_functor(g)?;
    let cells = random_cells(g, &phi.src, &Gen::positive_generators(FDCH2), true)?;
    let pushed = pushout_functor(&phi, &cells, CHAIN_BOUND)?;
    let mut checks = 0;
    for k in [&phi.src, &phi.tgt] {
        checks += 1;
        let v = is_locally_pseudo_cofibrant(k);
        if !v.holds {
            return Ok(PropertyReport::fail(
                SUITE,
                checks,
                json!({ "not-locally-pseudo-cofibrant": v.witness }),
            ));
        }
    }
    checks += 1;
    let sq = pushed.pushed.after(&pushed.leg)?;
    let sq2 = pushed.leg_prime.after(&phi)?;
    if sq.objmap() != sq2.objmap() || sq.map.comps != sq2.map.comps {
        return Ok(PropertyReport::fail(
            SUITE,
            checks,
            json!({ "square": "does not commute" }),
        ));
    }
    let before = is_dk_equivalence(&phi)?;
    let after = is_dk_equivalence(&pushed.pushed)?;
    checks += 2;
    if before.hes && !after.hes {
        return Ok(PropertyReport::fail(
            SUITE,
            checks,
            json!({ "hes-lost": after.witness }),
        ));
    }
    if before.is_dk() && !after.is_dk() {
        return Ok(PropertyReport::fail(
            SUITE,
            checks,
            json!({ "dk-lost": after.witness }),
        ));
    }
    Ok(PropertyReport::pass(SUITE, checks).with_note(format!("dk input: {}", before.is_dk())))
}

fn local_cofibration(g: &mut Gen) -> Result<PropertyReport> {
    const SUITE: &str = "local-cofibration";
    let h = chain_cat(g);
    let cells = random_cells(g, &h, &Gen::positive_generators(FDCH2), false)?;
    let p = pushout_cat(&h, &cells, CHAIN_BOUND)?;
    if !is_locally_pseudo_cofibrant(&h).holds {
        return Ok(PropertyReport::fail(
            SUITE,
            1,
            json!({ "source": "not locally pseudo-cofibrant" }),
        ));
    }
    let v = is_local(&p.leg, LocalKind::Cofibration);
    if let Some((x, y)) = v.witness {
        return Ok(PropertyReport::fail(
            SUITE,
            2,
            json!({ "pair": [h.objects()[x], h.objects()[y]] }),
        ));
    }
    let k = is_locally_pseudo_cofibrant(&p.result);
    if !k.holds {
        return Ok(PropertyReport::fail(
            SUITE,
            3,
            json!({ "result": k.witness }),
        ));
    }
    Ok(PropertyReport::pass(SUITE, 3))
}

fn k_cell(g: &mut Gen) -> Result<PropertyReport> {
    const SUITE: &str = "k-cell";
    let h = chain_cat(g);
    let js: Vec<_> = generating_sets(FDCH2)
        .1
        .into_iter()
        .filter(|j| j.map.tgt.as_chain().min_degree() >= Some(1))
        .collect();
    let cells = random_cells(g, &h, &js, false)?;
    let p = pushout_cat(&h, &cells, CHAIN_BOUND)?;
    let n = h.len();
    let mut certs: Vec<KCertificate> = (0..n * n)
        .map(|_| KCertificate {
            mode: h.mode,
            stages: vec![],
            reliable_below: crate::dk::reliable_top(&h),
        })
        .collect();
    for tr in &p.traces {
        for ((x, y), _, c) in kcell_certificates(tr)? {
            certs[x * n + y].stages.extend(c.stages);
        }
    }
    let mut parts = Vec::new();
    for (i, c) in certs.iter().enumerate() {
        parts.push(in_class_k_cell(p.leg.comp(i / n, i % n), c));
    }
    let hff = is_local(&p.leg, LocalKind::WeakEquivalence);
    parts.push(if hff.holds {
        PropertyReport::pass(SUITE, 1)
    } else {
        PropertyReport::fail(SUITE, 1, json!({ "not-hff": hff.witness }))
    });
    Ok(PropertyReport::combine(SUITE, parts))
}

fn random_graph(g: &mut Gen, base: Base, objects: Vec<String>) -> VGraph {
    let n = objects.len();
    let homs: Vec<BaseValue> = (0..n * n)
        .map(|_| match base {
            Base::Chain { p, lo, hi } => BaseValue::Chain(g.complex(p, lo, hi, 2)),
            _ => BaseValue::Set(g.below(3)),
        })
        .collect();
    VGraph::new(base, objects, homs).expect("random graph")
}

fn graph_monoidal(g: &mut Gen) -> Result<PropertyReport> {
    const SUITE: &str = "graph-monoidal";
    let base = if g.chance(0.5) {
        Base::FinSet
    } else {
        Base::Chain { p: 3, lo: 0, hi: 2 }
    };
    let mode = if base == Base::FinSet {
        Mode::Strict
    } else {
        Mode::Truncate
    };
    let objects: Vec<String> = (0..1 + g.below(3)).map(|i| format!("o{i}")).collect();
    let (m, n, q) = (
        random_graph(g, base, objects.clone()),
        random_graph(g, base, objects.clone()),
        random_graph(g, base, objects.clone()),
    );
    let mut checks = 0;
    for (what, f) in [
        ("left-unit", left_unit_map(&m, mode)?),
        ("right-unit", right_unit_map(&m, mode)?),
        ("associativity", assoc_map(&m, &n, &q, mode)?),
    ] {
        checks += 1;
        if !f.is_iso() {
            return Ok(PropertyReport::fail(
                SUITE,
                checks,
                json!({ "not-iso": what }),
            ));
        }
    }
    // Naturality of the associator in the first variable along a random map.
    let h = random_graph(g, base, objects.clone());
    let comps: Vec<BaseMap> = (0..m.homs.len())
        .map(|i| g.base_map(&m.homs[i], &h.homs[i]))
        .collect::<Option<_>>()
        .unwrap_or_default();
    if comps.len() == m.homs.len() {
        let f = GraphMap::new(m.clone(), h.clone(), (0..objects.len()).collect(), comps)?;
        let (idn, idq) = (GraphMap::identity(&n), GraphMap::identity(&q));
        let lhs = assoc_map(&h, &n, &q, mode)?.after(&tensor_s_map(
            &tensor_s_map(&f, &idn, mode)?,
            &idq,
            mode,
        )?)?;
        let rhs = tensor_s_map(&f, &tensor_s_map(&idn, &idq, mode)?, mode)?
            .after(&assoc_map(&m, &n, &q, mode)?)?;
        checks += 1;
        if lhs.comps != rhs.comps {
            return Ok(PropertyReport::fail(
                SUITE,
                checks,
                json!({ "natural": "associator" }),
            ));
        }
    }
    let one = unit_s(base, objects);
    checks += 1;
    let t = tensor_s_with(&one, &one, mode)?;
    if t.graph.homs != one.homs {
        return Ok(PropertyReport::fail(
            SUITE,
            checks,
            json!({ "unit": "1 ⊗ 1 ≠ 1" }),
        ));
    }
    Ok(PropertyReport::pass(SUITE, checks))
}

fn free_adjunction(g: &mut Gen) -> Result<PropertyReport> {
    const SUITE: &str = "free-adjunction";
    let h = chain_cat(g);
    let n = h.len();
    // A positive-degree graph over the objects of H, so that long paths leave the window.
    let homs: Vec<BaseValue> = (0..n * n)
        .map(|_| {
            let mut c = g.complex(2, 0, 2, 1);
            c.dims[0] = 0;
            c.d[0] = Mat::zeros(2, 0, 0);
            c.d[1] = Mat::zeros(2, 0, c.dims[1]);
            BaseValue::Chain(c)
        })
        .collect();
    let m = VGraph::new(FDCH2, h.objects().to_vec(), homs)?;
    let free = free_category(&m, 3, h.mode)?;
    skip_unstable(free.stabilized)?;
    let comps = (0..n * n)
        .map(|i| {
            g.base_map(&m.homs[i], &h.graph.homs[i])
                .expect("chain maps exist")
        })
        .collect();
    let gm = GraphMap::new(m.clone(), h.graph.clone(), (0..n).collect(), comps)?;
    let ext = free.extend(&gm, &h)?;
    let mut checks = 1;
    if ext.validate().failed() {
        return Ok(PropertyReport::fail(
            SUITE,
            checks,
            json!({ "extension": "not a functor" }),
        ));
    }
    checks += 1;
    if free.restrict(&ext)?.comps != gm.comps {
        return Ok(PropertyReport::fail(
            SUITE,
            checks,
            json!({ "round-trip": "restrict ∘ extend" }),
        ));
    }
    let t = free.category.clone().expect("stabilized");
    let id = VFunctor::identity(&t);
    let back = free.extend(&free.restrict(&id)?, &t)?;
    checks += 1;
    if back.map.comps != id.map.comps {
        return Ok(PropertyReport::fail(
            SUITE,
            checks,
            json!({ "round-trip": "extend ∘ restrict" }),
        ));
    }
    checks += 1;
    if !validate_category(&t).passed() {
        return Ok(PropertyReport::fail(
            SUITE,
            checks,
            json!({ "free": "not a category" }),
        ));
    }
    Ok(PropertyReport::pass(SUITE, checks))
}

/// The same complex in a wider window.
fn widen(v: &BaseValue, hi: i32) -> BaseValue {
    let c = v.as_chain();
    let mut dims = c.dims.clone();
    let mut d = c.d.clone();
    while dims.len() < (hi - c.lo + 1) as usize {
        d.push(Mat::zeros(c.p, *dims.last().expect("nonempty window"), 0));
        dims.push(0);
    }
    BaseValue::Chain(Complex::new(c.p, c.lo, hi, dims, d).expect("padding keeps d² = 0"))
}

fn widen_map(f: &BaseMap, hi: i32) -> Result<BaseMap> {
    let (s, t) = (widen(&f.src, hi), widen(&f.tgt, hi));
    let mut mats = f.mats().to_vec();
    let (cs, ct) = (s.as_chain(), t.as_chain());
    for k in mats.len()..cs.dims.len() {
        mats.push(Mat::zeros(cs.p, ct.dims[k], cs.dims[k]));
    }
    BaseMap::chain(s, t, mats)
}

/// Every pair of generators of FDCh(p, [0, 3]) for p = 2, 3, with products formed exactly in
/// [0, 6].
fn pushout_product_axiom(_: &mut Gen) -> Result<PropertyReport> {
    const SUITE: &str = "pushout-product-axiom";
    let mut checks = 0;
    for p in [2, 3] {
        let (is, js) = generating_sets(Base::Chain { p, lo: 0, hi: 3 });
        let gens: Vec<(String, BaseMap, bool)> = is
            .iter()
            .map(|x| (x.name.clone(), x.map.clone(), false))
            .chain(js.iter().map(|x| (x.name.clone(), x.map.clone(), true)))
            .collect();
        for (na, a, ja) in &gens {
            for (nb, b, jb) in &gens {
                let pp = pushout_product(&[widen_map(a, 6)?, widen_map(b, 6)?], Mode::Strict)?;
                let c = classify_map(&pp.map);
                checks += 1;
                let ok = if *ja || *jb {
                    c.is_trivial_cofibration
                } else {
                    c.is_cofibration
                };
                if !ok {
                    return Ok(PropertyReport::fail(
                        SUITE,
                        checks,
                        json!({ "pair": [na, nb], "p": p }),
                    ));
                }
            }
        }
    }
    Ok(PropertyReport::pass(SUITE, checks))
}

/// |H₀| by enumerating every vector of C₀ and C₁: cycles over boundaries.
fn naive_pi0_size(c: &Complex) -> usize {
    let p = c.p as usize;
    let vectors = |dim: usize| -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for _ in 0..dim {
            out = out
                .into_iter()
                .flat_map(|v| (0..p as u32).map(move |x| [v.clone(), vec![x]].concat()))
                .collect();
        }
        out
    };
    let apply = |m: &Mat, v: &[u32]| -> Vec<u32> {
        (0..m.rows)
            .map(|r| {
                (0..m.cols)
                    .map(|k| m.get(r, k) as usize * v[k] as usize)
                    .sum::<usize>() as u32
                    % c.p
            })
            .collect()
    };
    let d0 = c.dim(0);
    let cycles = if c.lo < 0 && c.dim(-1) > 0 {
        vectors(d0)
            .iter()
            .filter(|v| apply(c.diff(0), v).iter().all(|&x| x == 0))
            .count()
    } else {
        p.pow(d0 as u32)
    };
    let mut bounds: Vec<Vec<u32>> = if c.hi >= 1 {
        vectors(c.dim(1))
            .iter()
            .map(|v| apply(c.diff(1), v))
            .collect()
    } else {
        vec![vec![0; d0]]
    };
    bounds.sort();
    bounds.dedup();
    cycles / bounds.len()
}

fn pi0_oracle(g: &mut Gen) -> Result<PropertyReport> {
    const SUITE: &str = "pi0-oracle";
    let p = if g.chance(0.5) { 2 } else { 3 };
    let lo = -(g.below(2) as i32);
    let hi = 1 + g.below(2) as i32;
    let c = g.complex(p, lo, hi, 2);
    let got = pi0(&BaseValue::Chain(c.clone()))?.size;
    let want = naive_pi0_size(&c);
    if got != want {
        return Ok(PropertyReport::fail(
            SUITE,
            1,
            json!({ "dims": c.dims, "pi0": got, "oracle": want }),
        ));
    }
    Ok(PropertyReport::pass(SUITE, 1))
}

fn pi0_dk(g: &mut Gen) -> Result<PropertyReport> {
    const SUITE: &str = "pi0-dk";
    let phi = dk_gen(g);
    if !is_dk_equivalence(&phi)?.is_dk() {
        return Ok(PropertyReport::fail(
            SUITE,
            1,
            json!({ "generator": "not a DK-equivalence" }),
        ));
    }
    let tables = pi0_functor(&phi)?;
    let (src, tgt) = (pi0_category(&phi.src)?, pi0_category(&phi.tgt)?);
    let fo = phi.objmap();
    let n = phi.src.len();
    let mut checks = 1;
    for x in 0..n {
        for y in 0..n {
            checks += 1;
            let mut image = tables[x * n + y].clone();
            image.sort();
            image.dedup();
            if image.len() != src.hom_size(x, y) || image.len() != tgt.hom_size(fo[x], fo[y]) {
                return Ok(PropertyReport::fail(
                    SUITE,
                    checks,
                    json!({ "not-fully-faithful": [x, y] }),
                ));
            }
            for z in 0..n {
                for a in 0..src.hom_size(x, y) {
                    for b in 0..src.hom_size(y, z) {
                        checks += 1;
                        let lhs = tables[x * n + z][src.compose(x, y, z, b, a)];
                        let rhs = tgt.compose(
                            fo[x],
                            fo[y],
                            fo[z],
                            tables[y * n + z][b],
                            tables[x * n + y][a],
                        );
                        if lhs != rhs {
                            return Ok(PropertyReport::fail(
                                SUITE,
                                checks,
                                json!({ "not-a-functor": [x, y, z] }),
                            ));
                        }
                    }
                }
            }
        }
    }
    for y in 0..tgt.len() {
        checks += 1;
        if !fo.iter().any(|&fx| tgt.iso(fx, y).is_some()) {
            return Ok(PropertyReport::fail(
                SUITE,
                checks,
                json!({ "not-essentially-surjective": y }),
            ));
        }
    }
    Ok(PropertyReport::pass(SUITE, checks))
}

fn hes_composition(g: &mut Gen) -> Result<PropertyReport> {
    const SUITE: &str = "hes-composition";
    let mut f = hes_functor(g)?;
    for _ in 0..1 + g.below(2) {
        let next = if g.chance(0.5) {
            g.duplicate_object(&f.tgt)
        } else {
            let att = g.generator_attachment(&f.tgt, &Gen::positive_generators(FDCH2));
            pushout_along_free(&f.tgt, &att, CHAIN_BOUND)?
                .require()?
                .phi
                .clone()
        };
        if is_hes(&next)?.is_some() || is_hes(&f)?.is_some() {
            return Ok(PropertyReport::fail(
                SUITE,
                1,
                json!({ "generator": "factor is not hes" }),
            ));
        }
        f = next.after(&f)?;
    }
    Ok(match is_hes(&f)? {
        None => PropertyReport::pass(SUITE, 1),
        Some(y) => PropertyReport::fail(SUITE, 1, json!({ "unmatched": f.tgt.objects()[y] })),
    })
}

fn dk_two_of_three(g: &mut Gen) -> Result<PropertyReport> {
    const SUITE: &str = "dk-two-of-three";
    let phi = if g.chance(0.5) {
        dk_gen(g)
    } else {
        hes_functor(g)?
    };
    let psi = if g.chance(0.5) {
        g.duplicate_object(&phi.tgt)
    } else {
        g.dk_equivalence_from(&phi.tgt)
    };
    let (a, b, c) = (
        is_dk_equivalence(&phi)?.is_dk(),
        is_dk_equivalence(&psi)?.is_dk(),
        is_dk_equivalence(&psi.after(&phi)?)?.is_dk(),
    );
    // Any two of the three determine the third.
    let consistent = [(a, b, c), (a, c, b), (b, c, a)]
        .iter()
        .all(|&(x, y, z)| !(x && y) || z);
    Ok(if consistent {
        PropertyReport::pass(SUITE, 3)
    } else {
        PropertyReport::fail(SUITE, 3, json!({ "first": a, "second": b, "composite": c }))
    })
}

fn iprime_implies_dk(g: &mut Gen) -> Result<PropertyReport> {
    const SUITE: &str = "iprime-implies-dk";
    let k = chain_cat(g);
    let n = k.len();
    let phi = if g.chance(0.5) {
        // The reindexing along a surjection onto the objects.
        let f: Vec<usize> = (0..n).chain([g.below(n)]).collect();
        let labels = (0..=n).map(|i| format!("s{i}")).collect();
        cat_pullback(labels, &f, &k)?.1
    } else {
        dk_gen(g)
    };
    let ip = is_iprime_injective(&phi);
    let dk = is_dk_equivalence(&phi)?.is_dk();
    Ok(if !ip || dk {
        PropertyReport::pass(SUITE, 1).with_note(format!("iprime: {ip}"))
    } else {
        PropertyReport::fail(SUITE, 1, json!({ "iprime": true, "dk": false }))
    })
}

fn pseudo_closure(g: &mut Gen) -> Result<PropertyReport> {
    const SUITE: &str = "pseudo-cofibration-closure";
    let (is, _) = generating_sets(FDCH2);
    let i = &is[g.below(is.len())].map;
    let x = g.complex(2, 0, 2, 2);
    let k = g.chain_map(i.src.as_chain(), &x);
    let sq = pushout_square(i, &k)?;
    let zero = BaseMap::from_initial(&sq.bottom.src);
    let composite = sq.bottom.after(&zero)?;
    let sum = tensor_map(&[i, &BaseMap::identity(&FDCH2.unit())], Mode::Strict)?;
    let mut checks = 0;
    for (what, f) in [
        ("generator", i),
        ("pushout", &sq.bottom),
        ("composite", &composite),
        ("unit-tensor", &sum),
    ] {
        checks += 1;
        let v = is_pseudo_cofibration(f);
        if !v.holds {
            return Ok(PropertyReport::fail(
                SUITE,
                checks,
                json!({ "case": what, "generator": v.witness }),
            ));
        }
    }
    Ok(PropertyReport::pass(SUITE, checks))
}

fn pasting(g: &mut Gen) -> Result<PropertyReport> {
    let (h, p, q) = match g.below(3) {
        0 => {
            let h = {
                let env = small(g);
                g.finset_category(env)
            };
            let (p, q) = (g.attachment(&h, 1, 2), g.attachment(&h, 1, 2));
            (h, p, q)
        }
        1 => {
            let h = g.bool_category(3);
            let (p, q) = (g.attachment(&h, 1, 1), g.attachment(&h, 1, 1));
            (h, p, q)
        }
        _ => {
            let h = chain_cat(g);
            let gens = Gen::positive_generators(FDCH2);
            let (p, q) = (
                g.generator_attachment(&h, &gens),
                g.generator_attachment(&h, &gens),
            );
            (h, p, q)
        }
    };
    Ok(verify_pasting(&h, &p, &q, 5))
}

fn base_change(g: &mut Gen) -> Result<PropertyReport> {
    let lin = MonoidalFunctor::Linearize {
        p: 2 + g.below(2) as u32,
        lo: 0,
        hi: 2,
    };
    let h0 = MonoidalFunctor::H0Set { p: 2, lo: 0, hi: 2 };
    let sets: Vec<BaseValue> = (0..3).map(|_| BaseValue::Set(g.below(3))).collect();
    let cxs: Vec<BaseValue> = (0..3)
        .map(|_| BaseValue::Chain(g.complex(2, 0, 2, 2)))
        .collect();
    let mut parts = vec![
        lin.check_coherence(&sets, Mode::Strict),
        h0.check_coherence(&cxs, Mode::Truncate),
    ];
    let env = small(g);
    let h = g.finset_category(env);
    let att = g.attachment(&h, 1, 2);
    match verify_preserves_free_pushout(&lin, &h, &att, 4) {
        Ok(r) => parts.push(r),
        Err(Error::NotStabilized(_)) => {}
        Err(e) => return Err(e),
    }
    Ok(PropertyReport::combine("base-change", parts))
}

impl Gen {
    /// A DK-equivalence out of a given category: a duplicated object, or the identity.
    pub fn dk_equivalence_from(&mut self, k: &VCategory) -> VFunctor {
        if self.chance(0.5) {
            self.duplicate_object(k)
        } else {
            VFunctor::identity(k)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naive_oracle_counts_small_cases() {
        let c = Complex::disk(3, 0, 2, 1).unwrap();
        assert_eq!(naive_pi0_size(&c), 1);
        let s = Complex::concentrated(2, -1, 1, 0, 2).unwrap();
        assert_eq!(naive_pi0_size(&s), 4);
    }

    #[test]
    fn every_suite_runs_a_few_instances() {
        for s in SUITES {
            let r = s.run(3, 99);
            assert_eq!(r.failed, 0, "{}: {:?}", s.id, r.instances);
        }
    }

    #[test]
    fn runs_are_reproducible() {
        let s = find_suite("dk-preservation").unwrap();
        let a = serde_json::to_string(&s.run(4, 1)).unwrap();
        let b = serde_json::to_string(&s.run(4, 1)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_count_is_an_empty_pass() {
        let r = find_suite("pi0-oracle").unwrap().run(0, 1);
        assert!(r.ok());
        assert!(r.instances.is_empty());
    }
}
