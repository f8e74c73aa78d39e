//! Change of base along lax symmetric monoidal functors: the built-ins `identity`,
//! `linearize-p` (finite sets to F_p-spans in degree 0, strong) and `h0-set` (chain complexes to
//! the set of H₀ classes, lax).

use serde_json::json;

use crate::base::{
    assoc, build_map, left_unitor, pi0, pi0_map, pi0_pairing, right_unitor, symmetry, tensor_map,
    Base, BaseMap, BaseValue, Complex, Layout, Mode,
};
use crate::colimits::{induce_functor, pushout_along_free, Attachment};
use crate::error::{Error, Result};
use crate::graph::VGraph;
use crate::report::PropertyReport;
use crate::vcat::{pi0_category, VCategory, VFunctor};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonoidalFunctor {
    Identity(Base),
    /// FinSet → FDCh(p, [lo, hi]).
    Linearize {
        p: u32,
        lo: i32,
        hi: i32,
    },
    /// FDCh(p, [lo, hi]) → FinSet.
    H0Set {
        p: u32,
        lo: i32,
        hi: i32,
    },
}

impl MonoidalFunctor {
    /// Looks up a built-in by identifier; `base` is the chain base involved, if any.
    pub fn named(name: &str, base: Base) -> Result<MonoidalFunctor> {
        let chain = |b: Base| match b {
            Base::Chain { p, lo, hi } => Ok((p, lo, hi)),
            _ => Err(Error::Input(format!("{name} needs a chain base"))),
        };
        match name {
            "identity" => Ok(MonoidalFunctor::Identity(base)),
            "linearize-p" => {
                let (p, lo, hi) = chain(base)?;
                if lo > 0 || hi < 0 {
                    return Err(Error::Input(
                        "linearization needs degree 0 in the window".into(),
                    ));
                }
                Ok(MonoidalFunctor::Linearize { p, lo, hi })
            }
            "h0-set" => {
                let (p, lo, hi) = chain(base)?;
                Ok(MonoidalFunctor::H0Set { p, lo, hi })
            }
            _ => Err(Error::UnknownLabel(name.into())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MonoidalFunctor::Identity(_) => "identity",
            MonoidalFunctor::Linearize { .. } => "linearize-p",
            MonoidalFunctor::H0Set { .. } => "h0-set",
        }
    }

    pub fn source(&self) -> Base {
        match *self {
            MonoidalFunctor::Identity(b) => b,
            MonoidalFunctor::Linearize { .. } => Base::FinSet,
            MonoidalFunctor::H0Set { p, lo, hi } => Base::Chain { p, lo, hi },
        }
    }

    pub fn target(&self) -> Base {
        match *self {
            MonoidalFunctor::Identity(b) => b,
            MonoidalFunctor::Linearize { p, lo, hi } => Base::Chain { p, lo, hi },
            MonoidalFunctor::H0Set { .. } => Base::FinSet,
        }
    }

    /// Whether the comparison maps are isomorphisms.
    pub fn is_strong(&self) -> bool {
        !matches!(self, MonoidalFunctor::H0Set { .. })
    }

    fn check_source(&self, v: &BaseValue) -> Result<()> {
        if v.base() != self.source() {
            return Err(Error::BaseMismatch(format!(
                "{} expects {:?}, got {:?}",
                self.name(),
                self.source(),
                v.base()
            )));
        }
        Ok(())
    }

    pub fn on_value(&self, v: &BaseValue) -> Result<BaseValue> {
        self.check_source(v)?;
        Ok(match *self {
            MonoidalFunctor::Identity(_) => v.clone(),
            MonoidalFunctor::Linearize { p, lo, hi } => {
                BaseValue::Chain(Complex::concentrated(p, lo, hi, 0, v.as_set())?)
            }
            MonoidalFunctor::H0Set { .. } => BaseValue::Set(pi0(v)?.size),
        })
    }

    pub fn on_map(&self, f: &BaseMap) -> Result<BaseMap> {
        self.check_source(&f.src)?;
        match self {
            MonoidalFunctor::Identity(_) => Ok(f.clone()),
            MonoidalFunctor::Linearize { .. } => {
                build_map(&self.on_value(&f.src)?, &self.on_value(&f.tgt)?, |i| {
                    Ok(vec![(1, f.table()[i])])
                })
            }
            MonoidalFunctor::H0Set { .. } => {
                BaseMap::set(self.on_value(&f.src)?, self.on_value(&f.tgt)?, pi0_map(f)?)
            }
        }
    }

    /// 1 → G(1).
    pub fn unit_comparison(&self) -> Result<BaseMap> {
        let one = self.target().unit();
        let g1 = self.on_value(&self.source().unit())?;
        match self {
            MonoidalFunctor::Identity(_) => Ok(BaseMap::identity(&one)),
            MonoidalFunctor::Linearize { .. } => build_map(&one, &g1, |_| Ok(vec![(1, 0)])),
            // The class of the generator of H₀(1) is the digit string "1".
            MonoidalFunctor::H0Set { .. } => BaseMap::set(one, g1, vec![1]),
        }
    }

    /// G(a) ⊗ G(b) → G(a ⊗ b), with a ⊗ b formed in `mode`.
    pub fn lax(&self, a: &BaseValue, b: &BaseValue, mode: Mode) -> Result<BaseMap> {
        let ab = Layout::new(&[a.clone(), b.clone()], mode)?;
        let gab = self.on_value(&ab.value)?;
        let src = Layout::new(
            &[self.on_value(a)?, self.on_value(b)?],
            self.target_mode(mode),
        )?;
        match self {
            MonoidalFunctor::Identity(_) => Ok(BaseMap::identity(&ab.value)),
            MonoidalFunctor::Linearize { .. } => src.map_to(&gab, |t| {
                let e = ab
                    .encode(t)
                    .ok_or_else(|| Error::Invalid("set tensor lost a pair".into()))?;
                Ok(vec![(1, e)])
            }),
            MonoidalFunctor::H0Set { .. } => {
                let table = pi0_pairing(a, b, mode)?;
                let nb = src.factors[1].as_set();
                src.map_to(&gab, |t| Ok(vec![(1, table[t[0] * nb + t[1]])]))
            }
        }
    }

    /// The tensor mode used on the target side.
    fn target_mode(&self, mode: Mode) -> Mode {
        match self {
            MonoidalFunctor::Identity(_) => mode,
            _ => Mode::Strict,
        }
    }

    /// Associativity, unit and symmetry coherence on the sample objects.
    pub fn check_coherence(&self, samples: &[BaseValue], mode: Mode) -> PropertyReport {
        const SUITE: &str = "monoidal-coherence";
        let tm = self.target_mode(mode);
        let g = |v: &BaseValue| self.on_value(v);
        let tensor = |a: &BaseValue, b: &BaseValue, m: Mode| {
            Layout::new(&[a.clone(), b.clone()], m).map(|l| l.value)
        };
        let unit_law = |a: &BaseValue| -> Result<bool> {
            let left = self.on_map(&left_unitor(a, mode)?)?.after(&self.lax(
                &self.source().unit(),
                a,
                mode,
            )?)?;
            let left = left.after(&tensor_map(
                &[&self.unit_comparison()?, &BaseMap::identity(&g(a)?)],
                tm,
            )?)?;
            let right = self.on_map(&right_unitor(a, mode)?)?.after(&self.lax(
                a,
                &self.source().unit(),
                mode,
            )?)?;
            let right = right.after(&tensor_map(
                &[&BaseMap::identity(&g(a)?), &self.unit_comparison()?],
                tm,
            )?)?;
            Ok(left == left_unitor(&g(a)?, tm)? && right == right_unitor(&g(a)?, tm)?)
        };
        let symmetry_law = |a: &BaseValue, b: &BaseValue| -> Result<bool> {
            let lhs = self
                .on_map(&symmetry(a, b, mode)?)?
                .after(&self.lax(a, b, mode)?)?;
            let rhs = self
                .lax(b, a, mode)?
                .after(&symmetry(&g(a)?, &g(b)?, tm)?)?;
            Ok(lhs == rhs)
        };
        let assoc_law = |a: &BaseValue, b: &BaseValue, c: &BaseValue| -> Result<bool> {
            let (ab, bc) = (tensor(a, b, mode)?, tensor(b, c, mode)?);
            let lhs = self
                .on_map(&assoc(a, b, c, mode)?)?
                .after(&self.lax(&ab, c, mode)?)?
                .after(&tensor_map(
                    &[&self.lax(a, b, mode)?, &BaseMap::identity(&g(c)?)],
                    tm,
                )?)?;
            let rhs = self
                .lax(a, &bc, mode)?
                .after(&tensor_map(
                    &[&BaseMap::identity(&g(a)?), &self.lax(b, c, mode)?],
                    tm,
                )?)?
                .after(&assoc(&g(a)?, &g(b)?, &g(c)?, tm)?)?;
            Ok(lhs == rhs)
        };
        let mut cases: Vec<(serde_json::Value, Box<dyn Fn() -> Result<bool> + '_>)> = Vec::new();
        for a in samples {
            cases.push((
                json!({ "unit-law": a.summary() }),
                Box::new(move || unit_law(a)),
            ));
            for b in samples {
                cases.push((
                    json!({ "symmetry": [a.summary(), b.summary()] }),
                    Box::new(move || symmetry_law(a, b)),
                ));
                for c in samples {
                    cases.push((
                        json!({ "associativity": [a.summary(), b.summary(), c.summary()] }),
                        Box::new(move || assoc_law(a, b, c)),
                    ));
                }
            }
        }
        let (mut checks, mut skipped) = (0, 0);
        for (label, case) in cases {
            match case() {
                Ok(true) => checks += 1,
                Ok(false) => return PropertyReport::fail(SUITE, checks, label),
                // Strict tensors that leave the window have nothing to compare.
                Err(Error::Overflow { .. }) => skipped += 1,
                Err(e) => {
                    return PropertyReport::fail(
                        SUITE,
                        checks,
                        json!({ "case": label, "error": e.to_string() }),
                    )
                }
            }
        }
        let r = PropertyReport::pass(SUITE, checks);
        if skipped > 0 {
            r.with_note(format!("{skipped} cases leave the window"))
        } else {
            r
        }
    }
}

/// G on hom objects; composition through the lax comparison, identities through the unit.
pub fn apply_to_category(g: &MonoidalFunctor, k: &VCategory) -> Result<VCategory> {
    let n = k.len();
    let homs = k
        .graph
        .homs
        .iter()
        .map(|h| g.on_value(h))
        .collect::<Result<Vec<_>>>()?;
    let graph = VGraph::new(g.target(), k.objects().to_vec(), homs)?;
    let mut comp = Vec::with_capacity(n * n * n);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let c = g.on_map(k.comp_at(x, y, z))?.after(&g.lax(
                    k.hom(y, z),
                    k.hom(x, y),
                    k.mode,
                )?)?;
                comp.push(c);
            }
        }
    }
    let idm = k
        .idm
        .iter()
        .map(|i| g.on_map(i)?.after(&g.unit_comparison()?))
        .collect::<Result<Vec<_>>>()?;
    VCategory::new(graph, g.target_mode(k.mode), comp, idm)
}

pub fn apply_to_functor(g: &MonoidalFunctor, f: &VFunctor) -> Result<VFunctor> {
    let comps = f
        .map
        .comps
        .iter()
        .map(|c| g.on_map(c))
        .collect::<Result<Vec<_>>>()?;
    VFunctor::new(
        apply_to_category(g, &f.src)?,
        apply_to_category(g, &f.tgt)?,
        f.objmap().to_vec(),
        comps,
    )
}

/// The Cat-level functor of a strong monoidal G.
pub fn apply_strong(g: &MonoidalFunctor, k: &VCategory) -> Result<VCategory> {
    if !g.is_strong() {
        return Err(Error::Unsupported(format!(
            "{} is not strong monoidal",
            g.name()
        )));
    }
    apply_to_category(g, k)
}

/// Checks that a strong G carries the push-out along a free functor to the push-out of the image:
/// the comparison from the push-out of G(H) to G(K), induced by G(φ) and G(ḡ′), is an
/// isomorphism.
pub fn verify_preserves_free_pushout(
    g: &MonoidalFunctor,
    h: &VCategory,
    att: &Attachment,
    stage_bound: usize,
) -> Result<PropertyReport> {
    const SUITE: &str = "base-change-pushout";
    let tr = pushout_along_free(h, att, stage_bound)?;
    let r = tr.require()?;
    let gh = apply_strong(g, h)?;
    let gatt = Attachment {
        a: att.a,
        b: att.b,
        f: g.on_map(&att.f)?,
        gbar: g.on_map(&att.gbar)?,
    };
    let gtr = pushout_along_free(&gh, &gatt, stage_bound)?;
    let gk = apply_to_functor(g, &r.phi)?;
    let cmp = induce_functor(&gtr, &gk, &g.on_map(&r.g_adj)?)?;
    let n = h.len();
    for x in 0..n {
        for y in 0..n {
            if !cmp.comp(x, y).is_iso() {
                return Ok(PropertyReport::fail(
                    SUITE,
                    x * n + y,
                    json!({ "pair": [h.objects()[x], h.objects()[y]] }),
                ));
            }
        }
    }
    Ok(PropertyReport::pass(SUITE, n * n))
}

/// The ordinary functor π₀K → π₀(G K), identity on objects, as tables of hom classes. Each class
/// c: 1 → K(x, y) goes to G(c) ∘ (1 → G(1)).
pub fn pi0_comparison(g: &MonoidalFunctor, k: &VCategory) -> Result<Vec<Vec<usize>>> {
    k.graph
        .homs
        .iter()
        .map(|h| {
            let size = pi0(h)?.size;
            Ok(match g {
                MonoidalFunctor::Identity(_) | MonoidalFunctor::H0Set { .. } => (0..size).collect(),
                MonoidalFunctor::Linearize { .. } => {
                    let target = pi0(&g.on_value(h)?)?;
                    (0..size)
                        .map(|i| {
                            let mut e = vec![0; size];
                            e[i] = 1;
                            target.index(&e)
                        })
                        .collect()
                }
            })
        })
        .collect()
}

/// Checks that the π₀ comparison respects identities and composition.
pub fn verify_pi0_comparison(g: &MonoidalFunctor, k: &VCategory) -> Result<PropertyReport> {
    const SUITE: &str = "pi0-comparison";
    let (src, tgt) = (pi0_category(k)?, pi0_category(&apply_to_category(g, k)?)?);
    let t = pi0_comparison(g, k)?;
    let n = k.len();
    let mut checks = 0;
    for x in 0..n {
        checks += 1;
        if t[x * n + x][src.ids[x]] != tgt.ids[x] {
            return Ok(PropertyReport::fail(
                SUITE,
                checks,
                json!({ "identity": k.objects()[x] }),
            ));
        }
        for y in 0..n {
            for z in 0..n {
                for f in 0..src.hom_size(x, y) {
                    for h in 0..src.hom_size(y, z) {
                        checks += 1;
                        let lhs = t[x * n + z][src.compose(x, y, z, h, f)];
                        let rhs = tgt.compose(x, y, z, t[y * n + z][h], t[x * n + y][f]);
                        if lhs != rhs {
                            return Ok(PropertyReport::fail(
                                SUITE,
                                checks,
                                json!({ "composite": [k.objects()[x], k.objects()[y], k.objects()[z]] }),
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(PropertyReport::pass(SUITE, checks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dk::is_interval;
    use crate::gen::{Envelope, Gen};
    use crate::vcat::validate_category;

    const LIN: MonoidalFunctor = MonoidalFunctor::Linearize { p: 3, lo: 0, hi: 2 };
    const H0: MonoidalFunctor = MonoidalFunctor::H0Set { p: 2, lo: 0, hi: 2 };

    fn samples(base: Base) -> Vec<BaseValue> {
        match base {
            Base::FinSet => vec![BaseValue::Set(0), BaseValue::Set(1), BaseValue::Set(2)],
            Base::Chain { p, lo, hi } => vec![
                base.unit(),
                BaseValue::Chain(Complex::disk(p, lo, hi, 1).unwrap()),
                BaseValue::Chain(Complex::concentrated(p, lo, hi, 0, 2).unwrap()),
                BaseValue::Chain(Complex::sphere(p, lo, hi, 1).unwrap()),
            ],
            Base::Bool => vec![BaseValue::Bool(false), BaseValue::Bool(true)],
        }
    }

    #[test]
    fn built_ins_are_coherent() {
        for g in [
            LIN,
            H0,
            MonoidalFunctor::Identity(Base::FinSet),
            MonoidalFunctor::Identity(Base::Chain { p: 2, lo: 0, hi: 2 }),
        ] {
            for mode in [Mode::Strict, Mode::Truncate] {
                let r = g.check_coherence(&samples(g.source()), mode);
                assert!(r.passed(), "{}: {r:?}", g.name());
            }
        }
    }

    #[test]
    fn identity_is_identity_on_categories() {
        let mut gen = Gen::new(5);
        let k = gen.finset_category(Envelope { objects: 3, hom: 3 });
        let g = MonoidalFunctor::Identity(Base::FinSet);
        assert_eq!(apply_to_category(&g, &k).unwrap(), k);
        assert_eq!(
            pi0_comparison(&g, &k).unwrap()[1],
            (0..k.hom(0, 1).as_set()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn linearization_has_one_dimension_per_arrow() {
        let mut gen = Gen::new(11);
        for _ in 0..10 {
            let k = gen.finset_category(Envelope { objects: 3, hom: 3 });
            let l = apply_to_category(&LIN, &k).unwrap();
            assert!(validate_category(&l).passed());
            for (a, b) in k.graph.homs.iter().zip(&l.graph.homs) {
                assert_eq!(b.as_chain().dim(0), a.as_set());
                assert_eq!(b.as_chain().total_dim(), a.as_set());
            }
            assert!(verify_pi0_comparison(&LIN, &k).unwrap().passed());
            // Free spans: distinct arrows stay distinct classes.
            for t in pi0_comparison(&LIN, &k).unwrap() {
                let mut s = t.clone();
                s.sort();
                s.dedup();
                assert_eq!(s.len(), t.len());
            }
        }
    }

    #[test]
    fn h0_of_a_chain_category_is_its_pi0_category() {
        let mut gen = Gen::new(17);
        for _ in 0..10 {
            let k = gen.chain_category(2, 0, 2, Envelope { objects: 2, hom: 2 });
            let s = apply_to_category(&H0, &k).unwrap();
            assert!(validate_category(&s).passed());
            let pc = pi0_category(&k).unwrap();
            let ps = pi0_category(&s).unwrap();
            assert_eq!(
                pc.homs.iter().map(|h| h.size).collect::<Vec<_>>(),
                ps.homs.iter().map(|h| h.size).collect::<Vec<_>>()
            );
            assert_eq!(pc.comp, ps.comp);
            assert_eq!(pc.ids, ps.ids);
            assert!(verify_pi0_comparison(&H0, &k).unwrap().passed());
        }
    }

    #[test]
    fn h0_is_not_strong() {
        let k = VCategory::unit(H0.source(), vec!["x".into()]);
        assert!(matches!(apply_strong(&H0, &k), Err(Error::Unsupported(_))));
    }

    #[test]
    fn linearization_of_a_free_arrow_is_the_free_linear_arrow() {
        let h = VCategory::unit(Base::FinSet, vec!["x".into(), "y".into()]);
        let att = Attachment {
            a: 0,
            b: 1,
            f: BaseMap::from_initial(&BaseValue::Set(1)),
            gbar: BaseMap::from_initial(h.hom(0, 1)),
        };
        let r = verify_preserves_free_pushout(&LIN, &h, &att, 4).unwrap();
        assert!(r.passed(), "{r:?}");
        let k = pushout_along_free(&h, &att, 4)
            .unwrap()
            .require()
            .unwrap()
            .k
            .clone();
        assert_eq!(
            apply_strong(&LIN, &k).unwrap().hom(0, 1).as_chain().dims,
            vec![1, 0, 0]
        );
    }

    #[test]
    fn linearization_preserves_random_free_pushouts() {
        let mut gen = Gen::new(23);
        let mut ran = 0;
        for _ in 0..30 {
            let h = gen.finset_category(Envelope { objects: 2, hom: 2 });
            let att = gen.attachment(&h, 1, 2);
            match verify_preserves_free_pushout(&LIN, &h, &att, 4) {
                Ok(r) => {
                    assert!(r.passed(), "{r:?}");
                    ran += 1;
                }
                Err(Error::NotStabilized(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
        assert!(ran >= 15, "{ran}");
    }

    #[test]
    fn linearization_sends_intervals_to_intervals() {
        let one = VCategory::unit(Base::FinSet, vec!["*".into()]);
        let (i, _) =
            crate::vcat::cat_pullback(vec!["0".into(), "1".into()], &[0, 0], &one).unwrap();
        assert!(is_interval(&i).unwrap());
        assert!(is_interval(&apply_strong(&LIN, &i).unwrap()).unwrap());
    }
}
