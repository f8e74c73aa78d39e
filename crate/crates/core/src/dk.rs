//! Homotopical predicates on V-functors and V-categories: local classes, DK-equivalences,
//! intervals, pseudo-cofibrations, strong local cofibrations, and certificate-checked
//! membership in relative cell complexes.
//!
//! Chain categories built in truncating mode lose homology in their top degree, so weak
//! equivalences there are tested below the top of the window only.

use serde_json::{json, Value};

use crate::base::{
    classify_map, flat_to_degree, generating_sets, is_quasi_iso_below, tensor_map, Base, BaseMap,
    BaseValue, Classification, Layout, Mode,
};
use crate::colimits::{
    pushout_product, verify_pushout_square, Balanced, BaseSquare, PushoutTrace, Square,
};
use crate::error::{Error, Result};
use crate::report::PropertyReport;
use crate::vcat::{pi0_category, reduced_composition, VCategory, VFunctor};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalKind {
    Cofibration,
    Fibration,
    WeakEquivalence,
    TrivialFibration,
    TrivialCofibration,
}

impl LocalKind {
    pub const ALL: [LocalKind; 5] = [
        LocalKind::Cofibration,
        LocalKind::Fibration,
        LocalKind::WeakEquivalence,
        LocalKind::TrivialFibration,
        LocalKind::TrivialCofibration,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LocalKind::Cofibration => "cofibration",
            LocalKind::Fibration => "fibration",
            LocalKind::WeakEquivalence => "weak-equivalence",
            LocalKind::TrivialFibration => "trivial-fibration",
            LocalKind::TrivialCofibration => "trivial-cofibration",
        }
    }

    fn holds(self, c: &Classification) -> bool {
        match self {
            LocalKind::Cofibration => c.is_cofibration,
            LocalKind::Fibration => c.is_fibration,
            LocalKind::WeakEquivalence => c.is_weak_equivalence,
            LocalKind::TrivialFibration => c.is_trivial_fibration,
            LocalKind::TrivialCofibration => c.is_trivial_cofibration,
        }
    }
}

/// The degree below which homology of the homs is exact, if the category truncates.
pub fn reliable_top(k: &VCategory) -> Option<i32> {
    match (k.base(), k.mode) {
        (Base::Chain { hi, .. }, Mode::Truncate) => Some(hi),
        _ => None,
    }
}

/// `classify_map` with weak equivalences tested below `top` when given.
pub fn classify_below(f: &BaseMap, top: Option<i32>) -> Classification {
    let mut c = classify_map(f);
    if let (Some(top), BaseValue::Chain(_)) = (top, &f.src) {
        let we = c.is_iso || is_quasi_iso_below(f, top);
        c.is_weak_equivalence = we;
        c.is_trivial_cofibration = c.is_cofibration && we;
        c.is_trivial_fibration = c.is_fibration && we;
    }
    c
}

fn functor_top(phi: &VFunctor) -> Option<i32> {
    reliable_top(&phi.src).or(reliable_top(&phi.tgt))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalVerdict {
    pub holds: bool,
    /// The first pair (x, y) whose component fails.
    pub witness: Option<(usize, usize)>,
}

/// Whether every component φ(x, y) is in the class.
pub fn is_local(phi: &VFunctor, kind: LocalKind) -> LocalVerdict {
    let top = functor_top(phi);
    let n = phi.src.len();
    for x in 0..n {
        for y in 0..n {
            if !kind.holds(&classify_below(phi.comp(x, y), top)) {
                return LocalVerdict {
                    holds: false,
                    witness: Some((x, y)),
                };
            }
        }
    }
    LocalVerdict {
        holds: true,
        witness: None,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DkVerdict {
    /// Homotopically fully faithful.
    pub hff: bool,
    /// Homotopically essentially surjective.
    pub hes: bool,
    pub witness: Option<Value>,
}

impl DkVerdict {
    pub fn is_dk(&self) -> bool {
        self.hff && self.hes
    }
}

/// Whether every object of the target is isomorphic in π₀ to an object in the image, with the
/// first unmatched object otherwise.
pub fn is_hes(phi: &VFunctor) -> Result<Option<usize>> {
    let pi = pi0_category(&phi.tgt)?;
    let fo = phi.objmap();
    Ok((0..phi.tgt.len()).find(|&y| !fo.iter().any(|&fx| fx == y || pi.iso(fx, y).is_some())))
}

pub fn is_dk_equivalence(phi: &VFunctor) -> Result<DkVerdict> {
    let local = is_local(phi, LocalKind::WeakEquivalence);
    let unmatched = is_hes(phi)?;
    let witness = match (local.witness, unmatched) {
        (Some((x, y)), _) => Some(json!({ "pair": [phi.src.objects()[x], phi.src.objects()[y]] })),
        (None, Some(y)) => Some(json!({ "object": phi.tgt.objects()[y] })),
        _ => None,
    };
    Ok(DkVerdict {
        hff: local.holds,
        hes: unmatched.is_none(),
        witness,
    })
}

/// Whether a two-object category has its objects isomorphic in π₀.
pub fn is_interval(i: &VCategory) -> Result<bool> {
    if i.len() != 2 {
        return Err(Error::Malformed(format!(
            "an interval has two objects, got {}",
            i.len()
        )));
    }
    Ok(pi0_category(i)?.iso(0, 1).is_some())
}

/// Surjective on objects and a local trivial fibration.
pub fn is_iprime_injective(phi: &VFunctor) -> bool {
    let mut hit = vec![false; phi.tgt.len()];
    for &y in phi.objmap() {
        hit[y] = true;
    }
    hit.iter().all(|&h| h) && is_local(phi, LocalKind::TrivialFibration).holds
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoVerdict {
    pub holds: bool,
    /// The failing generator, or the failing hom and generator.
    pub witness: Option<String>,
    /// Generators whose push-out product leaves the window.
    pub skipped: Vec<String>,
}

/// f ⊙ i is a cofibration for i ∈ I and f ⊙ j a trivial cofibration for j ∈ J. Products that
/// leave the degree window are skipped and listed.
pub fn is_pseudo_cofibration(f: &BaseMap) -> PseudoVerdict {
    let (is, js) = generating_sets(f.base());
    let mut skipped = Vec::new();
    for (g, trivial) in is
        .iter()
        .map(|g| (g, false))
        .chain(js.iter().map(|g| (g, true)))
    {
        let pp = match pushout_product(&[f.clone(), g.map.clone()], Mode::Strict) {
            Ok(pp) => pp,
            Err(Error::Overflow { .. }) => {
                skipped.push(g.name.clone());
                continue;
            }
            Err(e) => {
                return PseudoVerdict {
                    holds: false,
                    witness: Some(format!("{}: {e}", g.name)),
                    skipped,
                }
            }
        };
        let c = classify_map(&pp.map);
        if !(if trivial {
            c.is_trivial_cofibration
        } else {
            c.is_cofibration
        }) {
            return PseudoVerdict {
                holds: false,
                witness: Some(g.name.clone()),
                skipped,
            };
        }
    }
    PseudoVerdict {
        holds: true,
        witness: None,
        skipped,
    }
}

pub fn is_pseudo_cofibrant(v: &BaseValue) -> PseudoVerdict {
    is_pseudo_cofibration(&BaseMap::from_initial(v))
}

pub fn is_locally_pseudo_cofibrant(h: &VCategory) -> PseudoVerdict {
    let mut skipped = Vec::new();
    for x in 0..h.len() {
        for y in 0..h.len() {
            let v = is_pseudo_cofibrant(h.hom(x, y));
            if !v.holds {
                let w = format!(
                    "{}→{}: {}",
                    h.objects()[x],
                    h.objects()[y],
                    v.witness.unwrap_or_default()
                );
                return PseudoVerdict {
                    holds: false,
                    witness: Some(w),
                    skipped,
                };
            }
            skipped.extend(v.skipped);
        }
    }
    skipped.sort();
    skipped.dedup();
    PseudoVerdict {
        holds: true,
        witness: None,
        skipped,
    }
}

/// A verdict that may only certify a necessary condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tri {
    Yes,
    No,
    NecessaryOnly,
}

impl Tri {
    pub fn name(self) -> &'static str {
        match self {
            Tri::Yes => "yes",
            Tri::No => "no",
            Tri::NecessaryOnly => "necessary-only",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TriVerdict {
    pub verdict: Tri,
    pub witness: Option<Value>,
}

impl TriVerdict {
    fn no(witness: Value) -> TriVerdict {
        TriVerdict {
            verdict: Tri::No,
            witness: Some(witness),
        }
    }
}

/// Module conditions are decided exactly when every endomorphism monoid is the unit or the
/// base has the trivial model structure.
fn modules_exact(h: &VCategory) -> bool {
    let base = h.base();
    !matches!(base, Base::Chain { .. }) || (0..h.len()).all(|x| h.hom(x, x) == &base.unit())
}

/// Homs pseudo-cofibrant and every reduced composition a pseudo-cofibration; module-level
/// pseudo-cofibrancy is checked through its underlying V-level condition.
pub fn is_strongly_locally_pseudo_cofibrant(h: &VCategory) -> Result<TriVerdict> {
    let local = is_locally_pseudo_cofibrant(h);
    if !local.holds {
        return Ok(TriVerdict::no(json!({ "hom": local.witness })));
    }
    let n = h.len();
    let o = h.objects();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let r = reduced_composition(h, x, y, z)?;
                let v = is_pseudo_cofibration(&r.reduced);
                if !v.holds {
                    return Ok(TriVerdict::no(
                        json!({ "reduced": [o[x], o[y], o[z]], "generator": v.witness }),
                    ));
                }
            }
        }
    }
    let verdict = if modules_exact(h) {
        Tri::Yes
    } else {
        Tri::NecessaryOnly
    };
    Ok(TriVerdict {
        verdict,
        witness: None,
    })
}

/// Strong local cofibration test for an identity-on-objects functor: components are
/// cofibrations and the induced maps out of the relative tensors are V-cofibrations.
pub fn is_strong_local_cofibration(phi: &VFunctor) -> Result<TriVerdict> {
    let (h, k) = (&phi.src, &phi.tgt);
    if h.len() != k.len() || phi.objmap().iter().enumerate().any(|(i, &j)| i != j) {
        return Err(Error::Malformed(
            "functor is not the identity on objects".into(),
        ));
    }
    let n = h.len();
    let o = h.objects();
    let mut all_iso = true;
    for x in 0..n {
        for y in 0..n {
            let c = classify_map(phi.comp(x, y));
            if !c.is_cofibration {
                return Ok(TriVerdict::no(json!({ "component": [o[x], o[y]] })));
            }
            let right = Balanced::new(
                k.mode,
                h.hom(x, y),
                h.hom(x, x),
                k.hom(x, x),
                |m, a| h.compose_basis(x, x, y, m, a),
                |a, e| k.compose(x, x, x, &phi.comp(x, x).apply_basis(a), &[(1, e)]),
            )?
            .induce(k.hom(x, y), |m, e| {
                k.compose(x, x, y, &phi.comp(x, y).apply_basis(m), &[(1, e)])
            })?;
            let left = Balanced::new(
                k.mode,
                k.hom(y, y),
                h.hom(y, y),
                h.hom(x, y),
                |e, a| k.compose(y, y, y, &[(1, e)], &phi.comp(y, y).apply_basis(a)),
                |a, m| h.compose_basis(x, y, y, a, m),
            )?
            .induce(k.hom(x, y), |e, m| {
                k.compose(x, y, y, &[(1, e)], &phi.comp(x, y).apply_basis(m))
            })?;
            for (side, g) in [("right", &right), ("left", &left)] {
                let c = classify_map(g);
                if !c.is_cofibration {
                    return Ok(TriVerdict::no(
                        json!({ "module": side, "pair": [o[x], o[y]] }),
                    ));
                }
                all_iso &= c.is_iso;
            }
        }
    }
    let verdict = if all_iso || !matches!(h.base(), Base::Chain { .. }) {
        Tri::Yes
    } else {
        Tri::NecessaryOnly
    };
    Ok(TriVerdict {
        verdict,
        witness: None,
    })
}

/// One stage of a relative cell complex: a push-out square whose top map is identified with
/// `X ⊗ j` by the isomorphisms `shape_src: X ⊗ dom j → top.src` and
/// `shape_tgt: X ⊗ cod j → top.tgt`.
#[derive(Clone, Debug)]
pub struct KStage {
    pub x: BaseValue,
    pub j: BaseMap,
    pub shape_src: BaseMap,
    pub shape_tgt: BaseMap,
    pub square: BaseSquare,
}

/// A presentation of a map as a composite of push-outs of maps `X ⊗ j`.
#[derive(Clone, Debug)]
pub struct KCertificate {
    pub mode: Mode,
    pub stages: Vec<KStage>,
    /// Weak equivalences are tested below this degree.
    pub reliable_below: Option<i32>,
}

fn check_stage(
    i: usize,
    st: &KStage,
    mode: Mode,
    prev: &BaseValue,
) -> std::result::Result<usize, Value> {
    let bad = |what: &str| json!({ "stage": i, "malformed": what });
    let sq = &st.square;
    if &sq.left.tgt != prev || sq.bottom.src != sq.left.tgt {
        return Err(bad("stage does not start at the previous corner"));
    }
    if st.shape_src.validate().is_err()
        || st.shape_tgt.validate().is_err()
        || !st.shape_src.is_iso()
        || !st.shape_tgt.is_iso()
    {
        return Err(bad("shape maps are not isomorphisms"));
    }
    if st.shape_src.tgt != sq.top.src || st.shape_tgt.tgt != sq.top.tgt {
        return Err(bad("shape maps do not land on the attached map"));
    }
    if !classify_map(&st.j).is_trivial_cofibration {
        return Err(bad("j is not a trivial cofibration"));
    }
    let xj =
        tensor_map(&[&BaseMap::identity(&st.x), &st.j], mode).map_err(|e| bad(&e.to_string()))?;
    let lhs = sq
        .top
        .after(&st.shape_src)
        .map_err(|e| bad(&e.to_string()))?;
    let rhs = st.shape_tgt.after(&xj).map_err(|e| bad(&e.to_string()))?;
    if lhs != rhs {
        return Err(bad("attached map is not of the form X ⊗ j"));
    }
    let r = verify_pushout_square(&Square::Base(sq.clone()));
    if !r.passed() {
        return Err(json!({ "stage": i, "not-a-pushout": r.witness }));
    }
    Ok(r.checks + 3)
}

/// Checks the certificate stage by stage, that its composite is f, and that f is a weak
/// equivalence.
pub fn in_class_k_cell(f: &BaseMap, cert: &KCertificate) -> PropertyReport {
    const SUITE: &str = "k-cell";
    let mut composite = BaseMap::identity(&f.src);
    let mut checks = 0;
    for (i, st) in cert.stages.iter().enumerate() {
        match check_stage(i, st, cert.mode, &composite.tgt) {
            Ok(n) => checks += n,
            Err(w) => return PropertyReport::fail(SUITE, checks, w),
        }
        composite = match st.square.bottom.after(&composite) {
            Ok(c) => c,
            Err(e) => {
                return PropertyReport::fail(
                    SUITE,
                    checks,
                    json!({ "stage": i, "malformed": e.to_string() }),
                )
            }
        };
    }
    checks += 1;
    if composite != *f {
        return PropertyReport::fail(
            SUITE,
            checks,
            json!({ "malformed": "composite of the stages is not f" }),
        );
    }
    checks += 1;
    if !classify_below(f, cert.reliable_below).is_weak_equivalence {
        return PropertyReport::fail(SUITE, checks, json!({ "not-a-weak-equivalence": true }));
    }
    PropertyReport::pass(SUITE, checks)
}

fn element_degree(v: &BaseValue, e: usize) -> i32 {
    let c = v.as_chain();
    c.lo + flat_to_degree(&c.dims, e).0 as i32
}

/// Certificates for every hom of a push-out along a free functor on a map out of the initial
/// object, read off the stage trace: stage t attaches `Q_t ≅ X ⊗ V` with X the tensor of every
/// factor but the first V.
pub fn kcell_certificates(
    tr: &PushoutTrace,
) -> Result<Vec<((usize, usize), BaseMap, KCertificate)>> {
    let r = tr.require()?;
    let f = &tr.att.f;
    if !f.src.is_initial() {
        return Err(Error::Unsupported(
            "cell certificates need a map out of the initial object".into(),
        ));
    }
    let base = tr.h.base();
    let p = match base {
        Base::Chain { p, .. } => p,
        _ => {
            return Err(Error::Unsupported(
                "cell certificates are built over chain complexes".into(),
            ))
        }
    };
    let mode = tr.h.mode;
    let mut out = Vec::new();
    for ps in &tr.pairs {
        let mut stages = Vec::new();
        for t in 1..=ps.last {
            let q = &ps.q[t];
            let others: Vec<BaseValue> = q
                .factors
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != 1)
                .map(|(_, v)| v.clone())
                .collect();
            let xl = Layout::new(&others, mode)?;
            let xv = Layout::new(&[xl.value.clone(), f.tgt.clone()], mode)?;
            let shape_tgt = xv.map_to(&q.value, |pair| {
                let rest = xl.decode(pair[0]);
                let mut tuple = vec![rest[0], pair[1]];
                tuple.extend_from_slice(&rest[1..]);
                let dv = element_degree(&f.tgt, pair[1]);
                let passed: i32 = (2..q.factors.len())
                    .map(|i| element_degree(&q.factors[i], tuple[i]))
                    .sum();
                let sign = if (dv * passed).rem_euclid(2) == 1 {
                    p - 1
                } else {
                    1
                };
                match q.encode(&tuple) {
                    Some(e) => Ok(vec![(sign, e)]),
                    None => Err(Error::Certificate(
                        "a basis tuple of X ⊗ V is missing from the stage".into(),
                    )),
                }
            })?;
            let xs = Layout::new(&[xl.value.clone(), f.src.clone()], mode)?;
            let shape_src = BaseMap::identity(&xs.value);
            let square = BaseSquare {
                top: BaseMap::from_initial(&q.value),
                left: BaseMap::from_initial(&ps.stages[t - 1]),
                right: ps.psibar[t - 1].clone(),
                bottom: ps.bonding[t - 1].clone(),
            };
            stages.push(KStage {
                x: xl.value.clone(),
                j: f.clone(),
                shape_src,
                shape_tgt,
                square,
            });
        }
        let cert = KCertificate {
            mode,
            stages,
            reliable_below: reliable_top(&tr.h),
        };
        out.push(((ps.x, ps.y), r.phi.comp(ps.x, ps.y).clone(), cert));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{Complex, Generator};
    use crate::colimits::{pushout_along_free, Attachment};
    use crate::fp::Mat;
    use crate::graph::VGraph;
    use crate::vcat::{cat_pullback, cat_pushforward_injective};

    fn chain(p: u32, lo: i32, hi: i32) -> Base {
        Base::Chain { p, lo, hi }
    }

    fn bool_cat(rel: &[&[bool]]) -> VCategory {
        let n = rel.len();
        let labels = (0..n).map(|i| format!("o{i}")).collect();
        let g = VGraph::from_fn(Base::Bool, labels, |x, y| {
            BaseValue::Bool(rel[x][y] || x == y)
        });
        VCategory::from_rule(
            g,
            Mode::Strict,
            |_, _, _, _, _| vec![(1, 0)],
            |_| vec![(1, 0)],
        )
        .unwrap()
    }

    fn inclusion(h: &VCategory, sub: &[usize]) -> VFunctor {
        let (s, f) = cat_pullback(
            sub.iter().map(|&i| h.objects()[i].clone()).collect(),
            sub,
            h,
        )
        .unwrap();
        assert_eq!(s.len(), sub.len());
        f
    }

    #[test]
    fn identity_is_in_every_local_class() {
        let h = bool_cat(&[&[true, true], &[false, true]]);
        let id = VFunctor::identity(&h);
        for kind in LocalKind::ALL {
            assert!(is_local(&id, kind).holds, "{}", kind.name());
        }
        assert!(is_dk_equivalence(&id).unwrap().is_dk());
        assert!(is_iprime_injective(&id));
    }

    #[test]
    fn non_injective_component_is_witnessed() {
        let b = chain(2, 0, 1);
        let s0 = BaseValue::Chain(Complex::sphere(2, 0, 1, 0).unwrap());
        let g = VGraph::from_fn(b, vec!["x".into(), "y".into()], |x, y| {
            if x == y {
                b.unit()
            } else if x == 0 {
                s0.clone()
            } else {
                b.initial()
            }
        });
        let h = VCategory::from_rule(
            g,
            Mode::Strict,
            |x, y, z, a, c| {
                if y == z {
                    vec![(1, c)]
                } else if x == y {
                    vec![(1, a)]
                } else {
                    vec![]
                }
            },
            |_| vec![(1, 0)],
        )
        .unwrap();
        let z = VCategory::from_rule(
            VGraph::from_fn(b, vec!["x".into(), "y".into()], |x, y| {
                if x == y {
                    b.unit()
                } else {
                    b.initial()
                }
            }),
            Mode::Strict,
            |_, _, _, _, _| vec![(1, 0)],
            |_| vec![(1, 0)],
        )
        .unwrap();
        let comps = (0..4)
            .map(|i| {
                if i == 1 {
                    BaseMap::zero(h.hom(0, 1), z.hom(0, 1)).unwrap()
                } else {
                    BaseMap::identity(h.hom(i / 2, i % 2))
                }
            })
            .collect();
        let phi = VFunctor::new(h, z, vec![0, 1], comps).unwrap();
        let v = is_local(&phi, LocalKind::Cofibration);
        assert!(!v.holds);
        assert_eq!(v.witness, Some((0, 1)));
        assert!(is_local(&phi, LocalKind::Fibration).holds);
    }

    #[test]
    fn cocartesian_functor_is_a_local_cofibration() {
        let h = bool_cat(&[&[true, true], &[false, true]]);
        let (_, f) =
            cat_pushforward_injective(vec!["o0".into(), "o1".into(), "new".into()], &[0, 1], &h)
                .unwrap();
        assert!(is_local(&f, LocalKind::Cofibration).holds);
        let v = is_dk_equivalence(&f).unwrap();
        assert!(v.hff && !v.hes);
        assert_eq!(v.witness, Some(json!({ "object": "new" })));
    }

    #[test]
    fn object_with_mutual_arrows_is_reached() {
        let h = bool_cat(&[&[true, true], &[true, true]]);
        let v = is_dk_equivalence(&inclusion(&h, &[0])).unwrap();
        assert!(v.is_dk(), "{v:?}");
        let one_way = bool_cat(&[&[true, true], &[false, true]]);
        assert!(!is_dk_equivalence(&inclusion(&one_way, &[0])).unwrap().hes);
    }

    #[test]
    fn intervals() {
        assert!(is_interval(&bool_cat(&[&[true, true], &[true, true]])).unwrap());
        assert!(!is_interval(&bool_cat(&[&[true, false], &[false, true]])).unwrap());
        let point = VCategory::unit(chain(3, 0, 1), vec!["*".into()]);
        let (doubled, _) = cat_pullback(vec!["0".into(), "1".into()], &[0, 0], &point).unwrap();
        assert!(is_interval(&doubled).unwrap());
        assert!(is_interval(&point).is_err());
    }

    #[test]
    fn trivial_fibration_missing_an_object_is_not_iprime_injective() {
        let h = bool_cat(&[&[true, true], &[true, true]]);
        let f = inclusion(&h, &[0]);
        assert!(is_local(&f, LocalKind::TrivialFibration).holds);
        assert!(!is_iprime_injective(&f));
        let (_, onto) = cat_pullback(
            vec!["a".into(), "b".into()],
            &[0, 0],
            &VCategory::unit(chain(2, 0, 2), vec!["*".into()]),
        )
        .unwrap();
        assert!(is_iprime_injective(&onto));
    }

    #[test]
    fn surjective_quasi_iso_components_are_iprime_injective() {
        // D¹ → 0 at the only hom of a one-object category with a square-zero acyclic ideal.
        let b = chain(2, 0, 2);
        let c = Complex::new(
            2,
            0,
            2,
            vec![1, 1, 1],
            vec![
                Mat::zeros(2, 0, 1),
                Mat::zeros(2, 1, 1),
                Mat::identity(2, 1),
            ],
        )
        .unwrap();
        let g = VGraph::from_fn(b, vec!["*".into()], |_, _| BaseValue::Chain(c.clone()));
        let ext = VCategory::from_rule(
            g,
            Mode::Truncate,
            |_, _, _, a, e| {
                if a == 0 {
                    vec![(1, e)]
                } else if e == 0 {
                    vec![(1, a)]
                } else {
                    vec![]
                }
            },
            |_| vec![(1, 0)],
        )
        .unwrap();
        let unit = VCategory::unit(b, vec!["*".into()]);
        let proj = BaseMap::chain(
            ext.hom(0, 0).clone(),
            unit.hom(0, 0).clone(),
            vec![
                Mat::identity(2, 1),
                Mat::zeros(2, 0, 1),
                Mat::zeros(2, 0, 1),
            ],
        )
        .unwrap();
        let phi = VFunctor::new(ext, unit, vec![0], vec![proj]).unwrap();
        assert!(phi.validate().passed());
        assert!(is_iprime_injective(&phi));
        assert!(is_dk_equivalence(&phi).unwrap().is_dk());
    }

    #[test]
    fn generators_and_the_empty_map_are_pseudo_cofibrations() {
        for base in [Base::Bool, Base::FinSet, chain(2, 0, 3), chain(3, -1, 2)] {
            assert!(is_pseudo_cofibration(&BaseMap::from_initial(&base.unit())).holds);
            let (is, js) = generating_sets(base);
            for Generator { name, map } in is.iter().chain(&js) {
                let v = is_pseudo_cofibration(map);
                assert!(v.holds, "{name}: {v:?}");
            }
        }
    }

    #[test]
    fn collapsing_a_sphere_is_not_a_pseudo_cofibration() {
        let s = BaseValue::Chain(Complex::sphere(2, 0, 2, 0).unwrap());
        let f = BaseMap::zero(&s, &BaseValue::Chain(Complex::zero(2, 0, 2))).unwrap();
        let v = is_pseudo_cofibration(&f);
        assert!(!v.holds);
        assert_eq!(v.witness.as_deref(), Some("0→S0"));
    }

    #[test]
    fn unit_category_is_strongly_locally_pseudo_cofibrant() {
        for base in [Base::Bool, Base::FinSet, chain(2, 0, 2)] {
            let one = VCategory::unit(base, vec!["a".into(), "b".into()]);
            assert_eq!(
                is_strongly_locally_pseudo_cofibrant(&one).unwrap().verdict,
                Tri::Yes
            );
        }
        let full = bool_cat(&[&[true, true], &[true, true]]);
        assert!(is_locally_pseudo_cofibrant(&full).holds);
    }

    #[test]
    fn identity_is_a_strong_local_cofibration() {
        let one = VCategory::unit(chain(2, 0, 2), vec!["a".into(), "b".into()]);
        assert_eq!(
            is_strong_local_cofibration(&VFunctor::identity(&one))
                .unwrap()
                .verdict,
            Tri::Yes
        );
    }

    #[test]
    fn free_arrow_out_of_the_source_collapses_the_right_module() {
        // b = x: K(x, y) = H(x, y) ⊗_{H(x,x)} K(x, x), so the right-module map is an isomorphism.
        let b = chain(2, 0, 2);
        let h = VCategory::unit(b, vec!["x".into(), "y".into()]);
        let d = BaseValue::Chain(Complex::sphere(2, 0, 2, 1).unwrap());
        let att = Attachment {
            a: 0,
            b: 0,
            f: BaseMap::from_initial(&d),
            gbar: BaseMap::from_initial(h.hom(0, 0)),
        };
        let tr = pushout_along_free(&h, &att, 4).unwrap();
        let phi = tr.require().unwrap().phi.clone();
        let v = is_strong_local_cofibration(&phi).unwrap();
        assert_ne!(v.verdict, Tri::No);
    }

    #[test]
    fn non_injective_induced_map_is_not_a_strong_local_cofibration() {
        let b = chain(2, 0, 1);
        let s0 = BaseValue::Chain(Complex::sphere(2, 0, 1, 0).unwrap());
        let two = BaseValue::Chain(Complex::concentrated(2, 0, 1, 0, 2).unwrap());
        // H: one object with H(x,x) = F₂ ⊕ F₂·e, e² = 0; K collapses e onto 0.
        let g = VGraph::from_fn(b, vec!["x".into()], |_, _| two.clone());
        let hh = VCategory::from_rule(
            g,
            Mode::Strict,
            |_, _, _, a, c| {
                if a == 0 {
                    vec![(1, c)]
                } else if c == 0 {
                    vec![(1, a)]
                } else {
                    vec![]
                }
            },
            |_| vec![(1, 0)],
        )
        .unwrap();
        let kk = VCategory::unit(b, vec!["x".into()]);
        let m = BaseMap::chain(
            two,
            s0,
            vec![Mat::from_rows(2, 1, 2, &[1, 0]), Mat::zeros(2, 0, 0)],
        )
        .unwrap();
        let phi = VFunctor::new(hh, kk, vec![0], vec![m]).unwrap();
        assert!(phi.validate().passed());
        let v = is_strong_local_cofibration(&phi).unwrap();
        assert_eq!(v.verdict, Tri::No);
        assert_eq!(v.witness, Some(json!({ "component": ["x", "x"] })));
    }

    #[test]
    fn empty_certificate_on_identity() {
        let c = BaseValue::Chain(Complex::disk(2, 0, 2, 2).unwrap());
        let cert = KCertificate {
            mode: Mode::Strict,
            stages: vec![],
            reliable_below: None,
        };
        assert!(in_class_k_cell(&BaseMap::identity(&c), &cert).passed());
        let zero = BaseMap::from_initial(&c);
        assert!(in_class_k_cell(&zero, &cert).failed());
    }

    fn disk_attachment() -> (VCategory, Attachment) {
        let b = chain(2, 0, 2);
        let h = VCategory::unit(b, vec!["x".into(), "y".into()]);
        let d = BaseValue::Chain(Complex::disk(2, 0, 2, 2).unwrap());
        (
            h.clone(),
            Attachment {
                a: 0,
                b: 1,
                f: BaseMap::from_initial(&d),
                gbar: BaseMap::from_initial(h.hom(0, 1)),
            },
        )
    }

    #[test]
    fn single_disk_stage_is_a_k_cell_and_a_quasi_iso() {
        let (h, att) = disk_attachment();
        let tr = pushout_along_free(&h, &att, 4).unwrap();
        let certs = kcell_certificates(&tr).unwrap();
        assert_eq!(certs.len(), 4);
        for (pair, f, cert) in &certs {
            let r = in_class_k_cell(f, cert);
            assert!(r.passed(), "{pair:?}: {r:?}");
        }
        let (_, f, cert) = certs.iter().find(|(p, _, _)| *p == (0, 1)).unwrap();
        assert_eq!(cert.stages.len(), 1);
        assert!(classify_map(f).is_weak_equivalence);
    }

    #[test]
    fn wrong_shape_is_malformed() {
        let (h, att) = disk_attachment();
        let tr = pushout_along_free(&h, &att, 4).unwrap();
        let (_, f, mut cert) = kcell_certificates(&tr)
            .unwrap()
            .into_iter()
            .find(|(p, _, _)| *p == (0, 1))
            .unwrap();
        let st = &mut cert.stages[0];
        st.j = BaseMap::from_initial(&BaseValue::Chain(Complex::disk(2, 0, 2, 1).unwrap()));
        let r = in_class_k_cell(&f, &cert);
        assert!(r.failed());
        assert!(r.witness.unwrap().get("malformed").is_some());
    }
}
