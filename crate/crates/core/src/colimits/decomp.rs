//! Alternative stage decompositions of a push-out along a free V-functor: as monoids
//! under H(x,x), as reduced compositions, and as right or left modules over an
//! endomorphism monoid. Each is compared with the plain trace by explicit inverse maps.

use serde_json::json;

use crate::base::{
    build_map, tensor_vectors, Base, BaseMap, BaseValue, Colim, Layout, Mode, Presentation,
};
use crate::error::{Error, Result};
use crate::report::{PropertyReport, SkipReason};
use crate::vcat::{apply, normalize, opposite, scale, VCategory, Vector};

use super::engine::{pushout_along_free, Attachment, Engine, PushoutResult, PushoutTrace, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum View {
    Endo { x: usize },
    ReducedComposition { x: usize, y: usize, z: usize },
    RightModule { x: usize, y: usize },
    LeftModule { x: usize, y: usize },
}

impl View {
    pub fn name(&self) -> &'static str {
        match self {
            View::Endo { .. } => "endo-monoid",
            View::ReducedComposition { .. } => "reduced-composition",
            View::RightModule { .. } => "right-module",
            View::LeftModule { .. } => "left-module",
        }
    }
}

fn singles(t: &[usize]) -> Vec<Vector> {
    t.iter().map(|&e| vec![(1, e)]).collect()
}

fn mul(base: Base, a: u32, b: u32) -> u32 {
    match base {
        Base::Chain { p, .. } => (a as u64 * b as u64 % p as u64) as u32,
        _ => 1,
    }
}

/// Bilinear extension of a basis-level product.
fn bilinear(
    base: Base,
    u: &[(u32, usize)],
    v: &[(u32, usize)],
    f: impl Fn(usize, usize) -> Vector,
) -> Vector {
    let mut out = Vec::new();
    for &(c1, i) in u {
        for &(c2, j) in v {
            out.extend(scale(base, mul(base, c1, c2), &f(i, j)));
        }
    }
    normalize(base, out)
}

fn min_deg(v: &BaseValue) -> Option<i32> {
    if v.is_initial() {
        return None;
    }
    match v {
        BaseValue::Chain(c) => c.min_degree(),
        _ => Some(0),
    }
}

/// Whether every vertex of the cube of `factors` (lower, upper) is initial.
fn cube_vanishes(base: Base, factors: &[(Option<&BaseValue>, &BaseValue)]) -> bool {
    let mut total = 0;
    for (lo_v, hi_v) in factors {
        let m = match (lo_v.and_then(min_deg), min_deg(hi_v)) {
            (None, None) => return true,
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
        };
        total += m;
    }
    match base {
        Base::Chain { lo, hi, .. } => lo >= 0 && total > hi,
        _ => false,
    }
}

/// A monoid in V given by its multiplication table on basis elements.
#[derive(Clone, Debug)]
pub struct Monoid {
    pub value: BaseValue,
    table: Vec<Vector>,
    pub unit: Vector,
}

impl Monoid {
    pub fn endo(h: &VCategory, x: usize) -> Monoid {
        let value = h.hom(x, x).clone();
        let d = value.size();
        let table = (0..d * d)
            .map(|k| h.compose_basis(x, x, x, k / d, k % d))
            .collect();
        Monoid {
            value,
            table,
            unit: h.identity_vec(x),
        }
    }

    pub fn unit_monoid(base: Base) -> Monoid {
        Monoid {
            value: base.unit(),
            table: vec![vec![(1, 0)]],
            unit: vec![(1, 0)],
        }
    }

    pub fn mul(&self, u: &[(u32, usize)], v: &[(u32, usize)]) -> Vector {
        let d = self.value.size();
        bilinear(self.value.base(), u, v, |i, j| {
            self.table[i * d + j].clone()
        })
    }
}

/// Attachment data for a push-out of monoids under A along the free monoid on a bimodule map.
pub struct FreeAttach<'a> {
    pub k: &'a Monoid,
    pub a: &'a BaseValue,
    /// The monoid map A → K.
    pub phi: &'a BaseMap,
    pub n: &'a BaseValue,
    /// Left and right A-actions on N, on basis elements.
    pub left: &'a dyn Fn(usize, usize) -> Vector,
    pub right: &'a dyn Fn(usize, usize) -> Vector,
    /// Generating pieces `(C, ι: C → N, ψ: C → K)` of the source bimodule.
    pub corners: &'a [(BaseValue, BaseMap, BaseMap)],
    /// Largest word length (number of N letters) kept.
    pub words: usize,
    pub mode: Mode,
}

#[derive(Clone, Debug)]
pub struct MonoidPushout {
    pub monoid: Monoid,
    pub colim: Colim,
    pub words: Vec<Layout>,
    pub k_leg: BaseMap,
    pub n_leg: BaseMap,
}

/// Words `K ⊗ N ⊗ K ⊗ … ⊗ N ⊗ K`, balanced over A and glued along the corners.
pub fn monoid_pushout(at: &FreeAttach) -> Result<MonoidPushout> {
    let base = at.k.value.base();
    let kv = &at.k.value;
    let word_factors = |n: usize| {
        let mut f = vec![kv.clone()];
        for _ in 0..n {
            f.push(at.n.clone());
            f.push(kv.clone());
        }
        f
    };
    let words: Vec<Layout> = (0..=at.words)
        .map(|n| Layout::new(&word_factors(n), at.mode))
        .collect::<Result<_>>()?;
    if words[0].value != *kv {
        return Err(Error::Malformed(
            "single-factor layout differs from its factor".into(),
        ));
    }
    let kmul = |u: &[(u32, usize)], v: &[(u32, usize)]| at.k.mul(u, v);
    let mut pr = Presentation::new(base);
    for w in &words {
        pr.add_summand(w.value.clone());
    }
    for n in 1..=at.words {
        let w = &words[n];
        let wv = &w.value;
        let enc = |parts: &[Vector], l: &Layout| Ok(normalize(base, tensor_vectors(l, parts)));
        for j in 0..n {
            let p = 2 * j + 1;
            if !at.a.is_initial() {
                let mut f = word_factors(n);
                f.insert(p, at.a.clone());
                let src = Layout::new(&f, at.mode)?;
                let l = src.map_to(wv, |t| {
                    let mut parts = singles(t);
                    let a = parts.remove(p);
                    parts[p - 1] = kmul(&[(1, t[p - 1])], &apply(at.phi, &a));
                    enc(&parts, w)
                })?;
                let r = src.map_to(wv, |t| {
                    let mut parts = singles(t);
                    parts.remove(p);
                    parts[p] = (at.left)(t[p], t[p + 1]);
                    enc(&parts, w)
                })?;
                pr.relate(src.value.clone(), Some((n, l)), Some((n, r)));
                let mut f = word_factors(n);
                f.insert(p + 1, at.a.clone());
                let src = Layout::new(&f, at.mode)?;
                let l = src.map_to(wv, |t| {
                    let mut parts = singles(t);
                    parts.remove(p + 1);
                    parts[p] = (at.right)(t[p], t[p + 1]);
                    enc(&parts, w)
                })?;
                let r = src.map_to(wv, |t| {
                    let mut parts = singles(t);
                    parts.remove(p + 1);
                    parts[p + 1] = kmul(&apply(at.phi, &[(1, t[p + 1])]), &[(1, t[p + 2])]);
                    enc(&parts, w)
                })?;
                pr.relate(src.value.clone(), Some((n, l)), Some((n, r)));
            }
            for (c, iota, psi) in at.corners {
                if c.is_initial() {
                    continue;
                }
                let mut f = word_factors(n);
                f[p] = c.clone();
                let src = Layout::new(&f, at.mode)?;
                let l = src.map_to(wv, |t| {
                    let mut parts = singles(t);
                    parts[p] = iota.apply_basis(t[p]);
                    enc(&parts, w)
                })?;
                let shorter = &words[n - 1];
                let r = src.map_to(&shorter.value, |t| {
                    let merged = kmul(
                        &kmul(&[(1, t[p - 1])], &psi.apply_basis(t[p])),
                        &[(1, t[p + 1])],
                    );
                    let mut parts = singles(&t[..p - 1]);
                    parts.push(merged);
                    parts.extend(singles(&t[p + 2..]));
                    enc(&parts, shorter)
                })?;
                pr.relate(src.value.clone(), Some((n, l)), Some((n - 1, r)));
            }
        }
    }
    let colim = pr.glue()?;
    let reps = colim.representatives();
    let d = colim.value.size();
    let mut table = Vec::with_capacity(d * d);
    for i in 0..d {
        let (ni, ei) = reps[i];
        let ti = words[ni].decode(ei);
        for &(nj, ej) in &reps {
            if ni + nj > at.words {
                // Over Bool every longer word is already represented; elsewhere it vanishes.
                table.push(if base == Base::Bool {
                    vec![(1, 0)]
                } else {
                    vec![]
                });
                continue;
            }
            let tj = words[nj].decode(ej);
            let mut parts = singles(&ti[..ti.len() - 1]);
            parts.push(kmul(&[(1, ti[ti.len() - 1])], &[(1, tj[0])]));
            parts.extend(singles(&tj[1..]));
            let v = normalize(base, tensor_vectors(&words[ni + nj], &parts));
            table.push(apply(&colim.legs[ni + nj], &v));
        }
    }
    let unit = apply(&colim.legs[0], &at.k.unit);
    let k_leg = colim.legs[0].clone();
    let n_leg = if at.words >= 1 {
        build_map(at.n, &colim.value, |e| {
            let v = tensor_vectors(
                &words[1],
                &[at.k.unit.clone(), vec![(1, e)], at.k.unit.clone()],
            );
            Ok(apply(&colim.legs[1], &normalize(base, v)))
        })?
    } else {
        BaseMap::zero(at.n, &colim.value)?
    };
    let monoid = Monoid {
        value: colim.value.clone(),
        table,
        unit,
    };
    Ok(MonoidPushout {
        monoid,
        colim,
        words,
        k_leg,
        n_leg,
    })
}

/// The word bound for a monoid push-out attaching N: words beyond it vanish in the window.
fn word_bound(n: &BaseValue) -> Option<usize> {
    if n.is_initial() {
        return Some(1);
    }
    match n {
        BaseValue::Bool(_) => Some(2),
        BaseValue::Chain(c) if c.lo >= 0 => {
            let md = c.min_degree()?;
            if md >= 1 {
                Some((c.hi / md) as usize + 1)
            } else {
                None
            }
        }
        _ => None,
    }
}

/// `M ⊗_A N` as a coequalizer, with a representative pair for each basis element.
#[derive(Clone, Debug)]
pub struct Balanced {
    pub layout: Layout,
    pub colim: Colim,
    reps: Vec<(usize, usize)>,
}

impl Balanced {
    pub fn new(
        mode: Mode,
        m: &BaseValue,
        a: &BaseValue,
        n: &BaseValue,
        ma: impl Fn(usize, usize) -> Vector,
        an: impl Fn(usize, usize) -> Vector,
    ) -> Result<Balanced> {
        let base = m.base();
        let layout = Layout::new(&[m.clone(), n.clone()], mode)?;
        let triple = Layout::new(&[m.clone(), a.clone(), n.clone()], mode)?;
        let l = triple.map_to(&layout.value, |t| {
            Ok(normalize(
                base,
                tensor_vectors(&layout, &[ma(t[0], t[1]), vec![(1, t[2])]]),
            ))
        })?;
        let r = triple.map_to(&layout.value, |t| {
            Ok(normalize(
                base,
                tensor_vectors(&layout, &[vec![(1, t[0])], an(t[1], t[2])]),
            ))
        })?;
        let mut pr = Presentation::new(base);
        pr.add_summand(layout.value.clone());
        pr.relate(triple.value.clone(), Some((0, l)), Some((0, r)));
        let colim = pr.glue()?;
        let reps = colim.representatives().into_iter().map(|(_, e)| {
            let t = layout.decode(e);
            (t[0], t[1])
        });
        Ok(Balanced {
            reps: reps.collect(),
            layout,
            colim,
        })
    }

    pub fn value(&self) -> &BaseValue {
        &self.colim.value
    }

    pub fn rep(&self, e: usize) -> (usize, usize) {
        self.reps[e]
    }

    /// The class of `u ⊗ v`.
    pub fn class(&self, u: &[(u32, usize)], v: &[(u32, usize)]) -> Vector {
        let base = self.layout.base;
        apply(
            &self.colim.legs[0],
            &normalize(
                base,
                tensor_vectors(&self.layout, &[u.to_vec(), v.to_vec()]),
            ),
        )
    }

    /// The map out of the quotient induced by a bilinear rule on representatives.
    pub fn induce(&self, tgt: &BaseValue, f: impl Fn(usize, usize) -> Vector) -> Result<BaseMap> {
        let cocone = self.layout.map_to(tgt, |t| Ok(f(t[0], t[1])))?;
        self.colim.induce_checked(&[cocone], tgt)
    }
}

/// `H(y,z) ⊗_{H(y,y)} H(x,y)` of a category.
pub fn reduced_source(k: &VCategory, mode: Mode, x: usize, y: usize, z: usize) -> Result<Balanced> {
    Balanced::new(
        mode,
        k.hom(y, z),
        k.hom(y, y),
        k.hom(x, y),
        |m, a| k.compose_basis(y, y, z, m, a),
        |a, n| k.compose_basis(x, y, y, a, n),
    )
}

/// A sequence of stages, stage t presented with summands `[stage t-1, attached object]`.
#[derive(Clone, Debug)]
pub struct ViewStages {
    pub stages: Vec<BaseValue>,
    /// Stage t at index t-1.
    pub colims: Vec<Colim>,
    pub bonding: Vec<BaseMap>,
    /// Attached object of stage t (at index t-1) and its map into stage t.
    pub attached: Vec<Layout>,
    pub gens: Vec<BaseMap>,
}

impl ViewStages {
    fn new(first: BaseValue) -> ViewStages {
        ViewStages {
            stages: vec![first],
            colims: vec![],
            bonding: vec![],
            attached: vec![],
            gens: vec![],
        }
    }

    pub fn last(&self) -> usize {
        self.stages.len() - 1
    }

    pub fn bond(&self, from: usize, to: usize, v: &[(u32, usize)]) -> Vector {
        let mut cur = v.to_vec();
        for t in from + 1..=to {
            cur = apply(&self.bonding[t - 1], &cur);
        }
        cur
    }

    pub fn bond_map(&self, from: usize, to: usize) -> Result<BaseMap> {
        let mut acc = BaseMap::identity(&self.stages[from]);
        for t in from + 1..=to {
            acc = self.bonding[t - 1].after(&acc)?;
        }
        Ok(acc)
    }

    /// Image in the last stage of an attached element of stage t.
    fn gen_final(&self, t: usize, v: &[(u32, usize)]) -> Vector {
        if t == 0 || t > self.last() {
            return vec![];
        }
        self.bond(t, self.last(), &apply(&self.gens[t - 1], v))
    }
}

/// One stage's relation: corner value, ι into the attached object, ψ into the previous stage.
type Corner = (BaseValue, BaseMap, BaseMap);

fn glue_stage(
    base: Base,
    seq: &mut ViewStages,
    attached: Layout,
    corners: Vec<Corner>,
) -> Result<()> {
    let prev = seq.stages[seq.last()].clone();
    let mut pr = Presentation::new(base);
    pr.add_summand(prev);
    pr.add_summand(attached.value.clone());
    for (c, iota, psi) in corners {
        if !c.is_initial() {
            pr.relate(c, Some((0, psi)), Some((1, iota)));
        }
    }
    let c = pr.glue()?;
    seq.bonding.push(c.legs[0].clone());
    seq.gens.push(c.legs[1].clone());
    seq.stages.push(c.value.clone());
    seq.colims.push(c);
    seq.attached.push(attached);
    Ok(())
}

/// A stage decomposition of one view, ready for comparison with the trace.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub view: View,
    pub stages: ViewStages,
    data: ViewData,
}

#[derive(Clone, Debug)]
enum ViewData {
    Endo {
        monoids: Vec<MonoidPushout>,
        first: Monoid,
    },
    Reduced {
        dk: Balanced,
        p0: Colim,
        xi: BaseMap,
    },
    Right {
        e: Balanced,
        r0: Balanced,
    },
    /// The right-module view of the opposite push-out.
    Left {
        op: Box<PushoutTrace>,
        inner: Box<Decomposition>,
    },
}

impl Decomposition {
    pub fn stage_sizes(&self) -> Vec<usize> {
        self.stages.stages.iter().map(BaseValue::size).collect()
    }

    pub fn bonding_isos(&self) -> Vec<bool> {
        self.stages.bonding.iter().map(BaseMap::is_iso).collect()
    }
}

struct Ctx<'a> {
    tr: &'a PushoutTrace,
    eng: Engine<'a>,
    res: &'a PushoutResult,
    base: Base,
    mode: Mode,
}

impl<'a> Ctx<'a> {
    fn new(tr: &'a PushoutTrace) -> Result<Ctx<'a>> {
        let res = tr.require()?;
        let eng = tr.engine()?;
        Ok(Ctx {
            base: tr.h.base(),
            mode: eng.mode,
            tr,
            eng,
            res,
        })
    }

    fn h(&self) -> &VCategory {
        &self.tr.h
    }

    fn k(&self) -> &VCategory {
        &self.res.k
    }

    fn embed(&self, x: usize, y: usize, m: usize, terms: &[Term]) -> Vector {
        self.eng.embed(self.tr.pair(x, y), m, terms)
    }

    fn embed_tuple(&self, x: usize, y: usize, m: usize, t: &[usize]) -> Vector {
        self.embed(x, y, m, &[(1, t.to_vec())])
    }

    fn lambda0(&self, x: usize, y: usize, v: &[(u32, usize)]) -> Vector {
        apply(&self.tr.pair(x, y).to_final[0], v)
    }

    fn iota_at(&self, corner: &Layout, q: &Layout, slot: usize, m: &BaseMap) -> Result<BaseMap> {
        corner.map_to(&q.value, |t| {
            let mut parts = singles(t);
            parts[slot] = m.apply_basis(t[slot]);
            Ok(normalize(self.base, tensor_vectors(q, &parts)))
        })
    }

    /// Number of stages until every cube vertex vanishes, given the factor list at stage t.
    fn view_last<'b>(
        &self,
        factors: impl Fn(usize) -> Vec<(Option<&'b BaseValue>, &'b BaseValue)>,
    ) -> Option<usize>
    where
        'a: 'b,
    {
        if self.tr.att.f.is_iso() {
            return Some(0);
        }
        let bound = self.tr.stage_bound + 1;
        let f = &self.tr.att.f;
        // Stages past the certificate are isomorphisms; keep at least as many as the trace so Φ sees them.
        let trace_last = self.tr.pairs.iter().map(|p| p.last).max().unwrap_or(0);
        let last = match self.base {
            // Push-out products of two or more surjections of finite sets are bijections.
            Base::FinSet
                if f.table()
                    .iter()
                    .collect::<std::collections::BTreeSet<_>>()
                    .len()
                    == f.tgt.as_set() =>
            {
                (1..=bound)
                    .find(|&t| factors(t).iter().filter(|(u, _)| u.is_some()).count() >= 2)
                    .map(|t| t - 1)
            }
            // A stage adds the meet of its factors, which is redundant once an earlier stage added it.
            Base::Bool => {
                let meet = |t: usize| {
                    factors(t)
                        .iter()
                        .all(|(_, v)| matches!(v, BaseValue::Bool(true)))
                };
                let first = (1..=bound).find(|&t| meet(t));
                (0..bound)
                    .find(|&t| (t + 1..=bound).all(|s| !meet(s) || first.is_some_and(|j| j < s)))
            }
            _ => {
                return (1..=bound)
                    .find(|&t| cube_vanishes(self.base, &factors(t)))
                    .map(|t| t - 1)
            }
        };
        last.map(|l| l.max(trace_last))
    }
}

fn not_stabilized(view: View) -> Error {
    Error::NotStabilized(format!(
        "{} decomposition does not stabilize within the stage bound",
        view.name()
    ))
}

/// Builds the stage sequence of a decomposition view.
pub fn decomposition_trace(tr: &PushoutTrace, view: View) -> Result<Decomposition> {
    let n = tr.h.len();
    let check = |i: usize| {
        if i < n {
            Ok(())
        } else {
            Err(Error::UnknownLabel(format!(
                "object index {i} out of range"
            )))
        }
    };
    match view {
        View::Endo { x } => {
            check(x)?;
            endo_view(&Ctx::new(tr)?, x)
        }
        View::ReducedComposition { x, y, z } => {
            check(x)?;
            check(y)?;
            check(z)?;
            reduced_view(&Ctx::new(tr)?, x, y, z)
        }
        View::RightModule { x, y } => {
            check(x)?;
            check(y)?;
            right_view(&Ctx::new(tr)?, x, y)
        }
        View::LeftModule { x, y } => {
            check(x)?;
            check(y)?;
            let att = Attachment {
                a: tr.att.b,
                b: tr.att.a,
                f: tr.att.f.clone(),
                gbar: tr.att.gbar.clone(),
            };
            let op = pushout_along_free(&opposite(&tr.h), &att, tr.stage_bound)?;
            let inner = right_view(&Ctx::new(&op)?, y, x)?;
            Ok(Decomposition {
                view,
                stages: inner.stages.clone(),
                data: ViewData::Left {
                    op: Box::new(op),
                    inner: Box::new(inner),
                },
            })
        }
    }
}

fn endo_view(cx: &Ctx, x: usize) -> Result<Decomposition> {
    let (h, base, mode) = (cx.h(), cx.base, cx.mode);
    let (a, b) = (cx.tr.att.a, cx.tr.att.b);
    let f = &cx.tr.att.f;
    let dba = reduced_source(h, mode, b, x, a)?;
    let cbar = dba.induce(h.hom(b, a), |p, q| h.compose_basis(b, x, a, p, q))?;
    let last = cx
        .view_last(|t| {
            let mut fs = vec![(None, h.hom(b, x))];
            for i in 1..=t {
                fs.push((Some(&f.src), &f.tgt));
                if i < t {
                    fs.push((Some(dba.value()), h.hom(b, a)));
                }
            }
            fs.push((None, h.hom(x, a)));
            fs
        })
        .ok_or_else(|| not_stabilized(View::Endo { x }))?;
    let first = Monoid::endo(h, x);
    let av = h.hom(x, x).clone();
    let mut seq = ViewStages::new(av.clone());
    let mut monoids: Vec<MonoidPushout> = Vec::new();
    let left = |e: usize, nv: &[usize]| -> Vec<Vector> {
        let mut parts = singles(nv);
        parts[0] = h.compose_basis(b, x, x, e, nv[0]);
        parts
    };
    for t in 1..=last {
        let qt = Layout::new(&cx.eng.q_factors(x, x, t), mode)?;
        let prev = monoids.last().map(|m| &m.monoid).unwrap_or(&first);
        // The previous stage's attached element map, bonded into stage t-1.
        let gen_prev = |s: usize, v: &Vector| -> Vector {
            if s == 0 {
                return seq.bond(0, t - 1, v);
            }
            let m = &monoids[s - 1];
            seq.bond(s, t - 1, &apply(&m.n_leg, v))
        };
        let mut corners: Vec<Corner> = Vec::new();
        for i in 1..=t {
            let cl = Layout::new(&cx.eng.corner_factors(x, x, t, i), mode)?;
            let iota = cx.iota_at(&cl, &qt, 2 * i - 1, f)?;
            let qprev = Layout::new(&cx.eng.q_factors(x, x, t - 1), mode)?;
            let psi = cl.map_to(&prev.value, |tuple| {
                let mut v = Vec::new();
                for (c, nt) in cx.eng.psi_hat(x, x, t, i, tuple) {
                    if let Some(j) = qprev.encode(&nt) {
                        v.push((c, j));
                    }
                }
                Ok(gen_prev(t - 1, &normalize(base, v)))
            })?;
            corners.push((cl.value.clone(), iota, psi));
        }
        for s in 1..t {
            let mut fs = cx.eng.q_factors(x, x, t);
            fs[2 * s] = dba.value().clone();
            let cl = Layout::new(&fs, mode)?;
            let iota = cx.iota_at(&cl, &qt, 2 * s, &cbar)?;
            let (ls, rs) = (
                Layout::new(&cx.eng.q_factors(x, x, s), mode)?,
                Layout::new(&cx.eng.q_factors(x, x, t - s), mode)?,
            );
            let psi = cl.map_to(&prev.value, |tuple| {
                let (p, q) = dba.rep(tuple[2 * s]);
                let mut lt = tuple[..2 * s].to_vec();
                lt.push(p);
                let mut rt = vec![q];
                rt.extend_from_slice(&tuple[2 * s + 1..]);
                let lv = ls.encode(&lt).map(|j| vec![(1, j)]).unwrap_or_default();
                let rv = rs.encode(&rt).map(|j| vec![(1, j)]).unwrap_or_default();
                Ok(prev.mul(&gen_prev(s, &lv), &gen_prev(t - s, &rv)))
            })?;
            corners.push((cl.value.clone(), iota, psi));
        }
        let words = word_bound(&qt.value).ok_or_else(|| {
            Error::Unsupported("attached bimodule does not have positive degree".into())
        })?;
        let phi = seq.bond_map(0, t - 1)?;
        let lf =
            |e: usize, nv: usize| normalize(base, tensor_vectors(&qt, &left(e, &qt.decode(nv))));
        let rf = |nv: usize, e: usize| {
            let tv = qt.decode(nv);
            let mut parts = singles(&tv);
            let l = tv.len() - 1;
            parts[l] = h.compose_basis(x, x, a, tv[l], e);
            normalize(base, tensor_vectors(&qt, &parts))
        };
        let mp = monoid_pushout(&FreeAttach {
            k: prev,
            a: &av,
            phi: &phi,
            n: &qt.value,
            left: &lf,
            right: &rf,
            corners: &corners,
            words,
            mode,
        })?;
        seq.bonding.push(mp.k_leg.clone());
        seq.gens.push(mp.n_leg.clone());
        seq.stages.push(mp.monoid.value.clone());
        seq.colims.push(mp.colim.clone());
        seq.attached.push(qt);
        monoids.push(mp);
    }
    Ok(Decomposition {
        view: View::Endo { x },
        stages: seq,
        data: ViewData::Endo { monoids, first },
    })
}

fn reduced_view(cx: &Ctx, x: usize, y: usize, z: usize) -> Result<Decomposition> {
    let (h, k, base, mode) = (cx.h(), cx.k(), cx.base, cx.mode);
    let (a, b) = (cx.tr.att.a, cx.tr.att.b);
    let f = &cx.tr.att.f;
    let dh = reduced_source(h, mode, x, y, z)?;
    let dk = reduced_source(k, k.mode, x, y, z)?;
    let cbar_h = dh.induce(h.hom(x, z), |p, q| h.compose_basis(x, y, z, p, q))?;
    let phiphi = dh.induce(dk.value(), |p, q| {
        dk.class(&cx.lambda0(y, z, &[(1, p)]), &cx.lambda0(x, y, &[(1, q)]))
    })?;
    let p0 = crate::base::pushout(&cbar_h, &phiphi)?;
    let cbar_k = dk.induce(k.hom(x, z), |p, q| k.compose_basis(x, y, z, p, q))?;
    let xi = p0.induce_checked(&[cx.tr.pair(x, z).to_final[0].clone(), cbar_k], k.hom(x, z))?;
    let d_first = reduced_source(h, mode, b, y, z)?;
    let d_mid = reduced_source(h, mode, b, y, a)?;
    let d_last = reduced_source(h, mode, x, y, a)?;
    let last = cx
        .view_last(|t| {
            let mut fs = vec![(Some(d_first.value()), h.hom(b, z))];
            for i in 1..=t {
                fs.push((Some(&f.src), &f.tgt));
                if i < t {
                    fs.push((Some(d_mid.value()), h.hom(b, a)));
                }
            }
            fs.push((Some(d_last.value()), h.hom(x, a)));
            fs
        })
        .ok_or_else(|| not_stabilized(View::ReducedComposition { x, y, z }))?;
    let mut seq = ViewStages::new(p0.value.clone());
    let phibar = p0.legs[0].clone();
    let ctilde = p0.legs[1].clone();
    for t in 1..=last {
        let qt = Layout::new(&cx.eng.q_factors(x, z, t), mode)?;
        let qprev = Layout::new(&cx.eng.q_factors(x, z, t - 1), mode)?;
        let prev = seq.stages[t - 1].clone();
        let mut corners: Vec<Corner> = Vec::new();
        for i in 1..=t {
            let cl = Layout::new(&cx.eng.corner_factors(x, z, t, i), mode)?;
            let iota = cx.iota_at(&cl, &qt, 2 * i - 1, f)?;
            let psi = cl.map_to(&prev, |tuple| {
                let mut v = Vec::new();
                for (c, nt) in cx.eng.psi_hat(x, z, t, i, tuple) {
                    if let Some(j) = qprev.encode(&nt) {
                        v.push((c, j));
                    }
                }
                let v = normalize(base, v);
                Ok(if t == 1 {
                    apply(&phibar, &v)
                } else {
                    apply(&seq.gens[t - 2], &v)
                })
            })?;
            corners.push((cl.value.clone(), iota, psi));
        }
        // Slot `slot` of Q_t(x,z) replaced by a reduced-composition source: split the word
        // there into a word of (y,z) of length s and a word of (x,y) of length t-s.
        let mut split_corner = |slot: usize, s: usize, d: &Balanced, cbar: BaseMap| -> Result<()> {
            let mut fs = cx.eng.q_factors(x, z, t);
            fs[slot] = d.value().clone();
            let cl = Layout::new(&fs, mode)?;
            let iota = cx.iota_at(&cl, &qt, slot, &cbar)?;
            let psi = cl.map_to(&prev, |tuple| {
                let (p, q) = d.rep(tuple[slot]);
                let mut lt = tuple[..slot].to_vec();
                lt.push(p);
                let mut rt = vec![q];
                rt.extend_from_slice(&tuple[slot + 1..]);
                let u = cx.embed_tuple(y, z, s, &lt);
                let w = cx.embed_tuple(x, y, t - s, &rt);
                Ok(seq.bond(0, t - 1, &apply(&ctilde, &dk.class(&u, &w))))
            })?;
            corners.push((cl.value.clone(), iota, psi));
            Ok(())
        };
        split_corner(
            0,
            0,
            &d_first,
            d_first.induce(h.hom(b, z), |p, q| h.compose_basis(b, y, z, p, q))?,
        )?;
        for s in 1..t {
            split_corner(
                2 * s,
                s,
                &d_mid,
                d_mid.induce(h.hom(b, a), |p, q| h.compose_basis(b, y, a, p, q))?,
            )?;
        }
        split_corner(
            2 * t,
            t,
            &d_last,
            d_last.induce(h.hom(x, a), |p, q| h.compose_basis(x, y, a, p, q))?,
        )?;
        glue_stage(base, &mut seq, qt, corners)?;
    }
    Ok(Decomposition {
        view: View::ReducedComposition { x, y, z },
        stages: seq,
        data: ViewData::Reduced { dk, p0, xi },
    })
}

fn right_view(cx: &Ctx, x: usize, y: usize) -> Result<Decomposition> {
    let (h, k, base, mode) = (cx.h(), cx.k(), cx.base, cx.mode);
    let (a, b) = (cx.tr.att.a, cx.tr.att.b);
    let f = &cx.tr.att.f;
    let act = |e: usize, kv: usize| k.compose(x, x, x, &cx.lambda0(x, x, &[(1, e)]), &[(1, kv)]);
    let e = Balanced::new(
        mode,
        h.hom(x, a),
        h.hom(x, x),
        k.hom(x, x),
        |m, e| h.compose_basis(x, x, a, m, e),
        act,
    )?;
    let r0 = Balanced::new(
        mode,
        h.hom(x, y),
        h.hom(x, x),
        k.hom(x, x),
        |m, e| h.compose_basis(x, x, y, m, e),
        act,
    )?;
    let d_first = reduced_source(h, mode, b, x, y)?;
    let d_mid = reduced_source(h, mode, b, x, a)?;
    let last = cx
        .view_last(|t| {
            let mut fs = vec![(Some(d_first.value()), h.hom(b, y))];
            for i in 1..=t {
                fs.push((Some(&f.src), &f.tgt));
                if i < t {
                    fs.push((Some(d_mid.value()), h.hom(b, a)));
                }
            }
            fs.push((None, e.value()));
            fs
        })
        .ok_or_else(|| not_stabilized(View::RightModule { x, y }))?;
    // Q_t(x,y) with its last factor H(x,a) replaced by E = H(x,a) ⊗ K(x,x).
    let qr_factors = |t: usize, fs: Vec<BaseValue>| -> Vec<BaseValue> {
        let mut fs = fs;
        if t > 0 {
            let l = fs.len() - 1;
            fs[l] = e.value().clone();
        }
        fs
    };
    let mut seq = ViewStages::new(r0.value().clone());
    for t in 1..=last {
        let qt = Layout::new(&qr_factors(t, cx.eng.q_factors(x, y, t)), mode)?;
        let prev = seq.stages[t - 1].clone();
        let l = 2 * t;
        // A Q_{t-1}(x,y) term whose last H-factor is re-paired with k ∈ K(x,x), then mapped to stage t-1.
        let lower = |terms: Vec<Term>, kv: usize| -> Vector {
            let mut out = Vec::new();
            if t == 1 {
                for (c, nt) in terms {
                    out.extend(scale(base, c, &r0.class(&[(1, nt[0])], &[(1, kv)])));
                }
                return normalize(base, out);
            }
            let ql = &seq.attached[t - 2];
            for (c, nt) in terms {
                let ll = nt.len() - 1;
                for (c2, ee) in e.class(&[(1, nt[ll])], &[(1, kv)]) {
                    let mut tt = nt.clone();
                    tt[ll] = ee;
                    if let Some(j) = ql.encode(&tt) {
                        out.push((mul(base, c, c2), j));
                    }
                }
            }
            apply(&seq.gens[t - 2], &normalize(base, out))
        };
        let mut corners: Vec<Corner> = Vec::new();
        for i in 1..=t {
            let cl = Layout::new(&qr_factors(t, cx.eng.corner_factors(x, y, t, i)), mode)?;
            let iota = cx.iota_at(&cl, &qt, 2 * i - 1, f)?;
            let psi = cl.map_to(&prev, |tuple| {
                let (r, kv) = e.rep(tuple[l]);
                let mut ht = tuple.to_vec();
                ht[l] = r;
                Ok(lower(cx.eng.psi_hat(x, y, t, i, &ht), kv))
            })?;
            corners.push((cl.value.clone(), iota, psi));
        }
        // Slot 2s replaced by a reduced-composition source: the tail from the slot on is a
        // word of (x,x) of length t-s, evaluated in K(x,x) and absorbed into the E factor.
        let mut split_corner = |s: usize, d: &Balanced, cbar: BaseMap| -> Result<()> {
            let slot = 2 * s;
            let mut fs = qr_factors(t, cx.eng.q_factors(x, y, t));
            fs[slot] = d.value().clone();
            let cl = Layout::new(&fs, mode)?;
            let iota = cx.iota_at(&cl, &qt, slot, &cbar)?;
            let psi = cl.map_to(&prev, |tuple| {
                let (p, q) = d.rep(tuple[slot]);
                let (r, kv) = e.rep(tuple[l]);
                let mut rt = vec![q];
                rt.extend_from_slice(&tuple[slot + 1..l]);
                rt.push(r);
                let w = cx.embed_tuple(x, x, t - s, &rt);
                let wk = k.compose(x, x, x, &w, &[(1, kv)]);
                if s == 0 {
                    return Ok(seq.bond(0, t - 1, &r0.class(&[(1, p)], &wk)));
                }
                let qs = &seq.attached[s - 1];
                let mut out = Vec::new();
                for (c, ee) in e.class(&[(1, p)], &wk) {
                    let mut tt = tuple[..slot].to_vec();
                    tt.push(ee);
                    if let Some(j) = qs.encode(&tt) {
                        out.push((c, j));
                    }
                }
                Ok(seq.bond(s, t - 1, &apply(&seq.gens[s - 1], &normalize(base, out))))
            })?;
            corners.push((cl.value.clone(), iota, psi));
            Ok(())
        };
        split_corner(
            0,
            &d_first,
            d_first.induce(h.hom(b, y), |p, q| h.compose_basis(b, x, y, p, q))?,
        )?;
        for s in 1..t {
            split_corner(
                s,
                &d_mid,
                d_mid.induce(h.hom(b, a), |p, q| h.compose_basis(b, x, a, p, q))?,
            )?;
        }
        glue_stage(base, &mut seq, qt, corners)?;
    }
    Ok(Decomposition {
        view: View::RightModule { x, y },
        stages: seq,
        data: ViewData::Right { e, r0 },
    })
}

/// Compares two maps, recording a witness on the first mismatch.
fn same(
    label: &str,
    lhs: &BaseMap,
    rhs: &BaseMap,
    checks: &mut usize,
) -> std::result::Result<(), serde_json::Value> {
    *checks += 1;
    if lhs == rhs {
        Ok(())
    } else {
        Err(json!({
            "equation": label,
            "lhs": crate::io::map_json(lhs),
            "rhs": crate::io::map_json(rhs),
        }))
    }
}

/// Builds Φ and Φ′ by stagewise universal properties and checks they are mutually inverse,
/// together with the compatibility equations of the view.
pub fn verify_decomposition(tr: &PushoutTrace, view: View) -> PropertyReport {
    let suite = format!("decomposition-{}", view.name());
    if !tr.stabilized {
        return PropertyReport::skipped(&suite, SkipReason::Truncation, "trace did not stabilize");
    }
    let d = match decomposition_trace(tr, view) {
        Ok(d) => d,
        Err(Error::NotStabilized(m)) => {
            return PropertyReport::skipped(&suite, SkipReason::Truncation, m)
        }
        Err(Error::Unsupported(m)) => {
            return PropertyReport::skipped(&suite, SkipReason::Unsupported, m)
        }
        Err(e) => return PropertyReport::fail(&suite, 0, json!({ "error": e.to_string() })),
    };
    match compare(tr, &d) {
        Ok(Ok(checks)) => PropertyReport::pass(&suite, checks),
        Ok(Err((checks, w))) => PropertyReport::fail(&suite, checks, w),
        Err(e) => PropertyReport::fail(&suite, 0, json!({ "error": e.to_string() })),
    }
}

type Outcome = std::result::Result<usize, (usize, serde_json::Value)>;

fn compare(tr: &PushoutTrace, d: &Decomposition) -> Result<Outcome> {
    match (&d.data, d.view) {
        (ViewData::Left { op, inner }, _) => compare(op, inner),
        (ViewData::Endo { monoids, first }, View::Endo { x }) => {
            compare_endo(&Ctx::new(tr)?, d, x, monoids, first)
        }
        (ViewData::Reduced { dk, p0, xi }, View::ReducedComposition { x, y, z }) => {
            compare_reduced(&Ctx::new(tr)?, d, (x, y, z), dk, p0, xi)
        }
        (ViewData::Right { e, r0 }, View::RightModule { x, y }) => {
            compare_right(&Ctx::new(tr)?, d, x, y, e, r0)
        }
        _ => Err(Error::Malformed(
            "decomposition data does not match its view".into(),
        )),
    }
}

/// Runs the equation list; the first failure becomes the outcome.
fn run(eqs: Vec<(&str, BaseMap, BaseMap)>) -> Outcome {
    let mut checks = 0;
    for (label, l, r) in &eqs {
        if let Err(w) = same(label, l, r, &mut checks) {
            return Err((checks, w));
        }
    }
    Ok(checks)
}

/// Φ: K(x,y) → view, by recursion over the trace stages of (x, y).
fn phi_from_trace(
    cx: &Ctx,
    x: usize,
    y: usize,
    seq: &ViewStages,
    zero: BaseMap,
    attached: impl Fn(usize, usize) -> Vector,
) -> Result<BaseMap> {
    let ps = cx.tr.pair(x, y);
    let tgt = &seq.stages[seq.last()];
    let mut cur = zero;
    for t in 1..=ps.last {
        let q = build_map(&ps.q[t].value, tgt, |e| Ok(attached(t, e)))?;
        cur = ps.colims[t - 1].induce_checked(&[cur, q], tgt)?;
    }
    Ok(cur)
}

fn compare_endo(
    cx: &Ctx,
    d: &Decomposition,
    x: usize,
    monoids: &[MonoidPushout],
    first: &Monoid,
) -> Result<Outcome> {
    let k = cx.k();
    let seq = &d.stages;
    let kxx = k.hom(x, x);
    let endo_k = Monoid::endo(k, x);
    // Φ′ on stage t: words k0 n1 k1 … ↦ Φ′(k0) Ψ′(n1) Φ′(k1) … in K(x,x).
    let mut phi_p = cx.tr.pair(x, x).to_final[0].clone();
    for (i, mp) in monoids.iter().enumerate() {
        let t = i + 1;
        let mut cocone = Vec::new();
        for w in &mp.words {
            cocone.push(w.map_to(kxx, |tuple| {
                let mut acc = apply(&phi_p, &[(1, tuple[0])]);
                for j in 0..(tuple.len() - 1) / 2 {
                    let n = cx.embed_tuple(x, x, t, &seq.attached[t - 1].decode(tuple[2 * j + 1]));
                    acc = endo_k.mul(
                        &endo_k.mul(&acc, &n),
                        &apply(&phi_p, &[(1, tuple[2 * j + 2])]),
                    );
                }
                Ok(acc)
            })?);
        }
        phi_p = mp.colim.induce_checked(&cocone, kxx)?;
    }
    let last = seq.last();
    let phi_x = seq.bond_map(0, last)?;
    let zero = phi_x.clone();
    let phi = phi_from_trace(cx, x, x, seq, zero, |t, e| seq.gen_final(t, &[(1, e)]))?;
    let top = &seq.stages[last];
    let final_monoid = monoids.last().map(|m| &m.monoid).unwrap_or(first);
    let mut eqs = vec![
        ("Φ∘Φ′ = id", phi.after(&phi_p)?, BaseMap::identity(top)),
        ("Φ′∘Φ = id", phi_p.after(&phi)?, BaseMap::identity(kxx)),
        (
            "φ(x,x) = Φ′∘φ′",
            phi_p.after(&phi_x)?,
            cx.tr.pair(x, x).to_final[0].clone(),
        ),
        (
            "φ′ = Φ∘φ(x,x)",
            phi.after(&cx.tr.pair(x, x).to_final[0])?,
            phi_x.clone(),
        ),
    ];
    // Φ′ is multiplicative on the final stage.
    let dim = top.size();
    let lay = Layout::new(&[top.clone(), top.clone()], cx.mode)?;
    let lhs = lay.map_to(kxx, |t| {
        Ok(apply(&phi_p, &final_monoid.mul(&[(1, t[0])], &[(1, t[1])])))
    })?;
    let rhs = lay.map_to(kxx, |t| {
        Ok(endo_k.mul(&phi_p.apply_basis(t[0]), &phi_p.apply_basis(t[1])))
    })?;
    if dim > 0 {
        eqs.push(("Φ′ multiplicative", lhs, rhs));
    }
    Ok(run(eqs))
}

fn compare_reduced(
    cx: &Ctx,
    d: &Decomposition,
    (x, y, z): (usize, usize, usize),
    _dk: &Balanced,
    p0: &Colim,
    xi: &BaseMap,
) -> Result<Outcome> {
    let k = cx.k();
    let seq = &d.stages;
    let kxz = k.hom(x, z);
    let mut phi_p = xi.clone();
    for t in 1..=seq.last() {
        let q = seq.attached[t - 1].map_to(kxz, |tuple| Ok(cx.embed_tuple(x, z, t, tuple)))?;
        phi_p = seq.colims[t - 1].induce_checked(&[phi_p, q], kxz)?;
    }
    let last = seq.last();
    let xi_final = seq.bond_map(0, last)?;
    let zero = xi_final.after(&p0.legs[0])?;
    let phi = phi_from_trace(cx, x, z, seq, zero, |t, e| seq.gen_final(t, &[(1, e)]))?;
    let top = &seq.stages[last];
    let mut eqs = vec![
        ("Φ∘Φ′ = id", phi.after(&phi_p)?, BaseMap::identity(top)),
        ("Φ′∘Φ = id", phi_p.after(&phi)?, BaseMap::identity(kxz)),
        ("ξ′ = Φ∘ξ", phi.after(xi)?, xi_final.clone()),
        ("ξ = Φ′∘ξ′", phi_p.after(&xi_final)?, xi.clone()),
    ];
    if x == y || y == z {
        for (t, b) in seq.bonding.iter().enumerate() {
            if !b.is_iso() {
                eqs.push((
                    "ξ_t iso when an outer object is the middle one",
                    b.clone(),
                    BaseMap::identity(&seq.stages[t]),
                ));
            }
        }
    }
    Ok(run(eqs))
}

fn compare_right(
    cx: &Ctx,
    d: &Decomposition,
    x: usize,
    y: usize,
    e: &Balanced,
    r0: &Balanced,
) -> Result<Outcome> {
    let k = cx.k();
    let seq = &d.stages;
    let kxy = k.hom(x, y);
    let rho = r0.induce(kxy, |hv, kv| {
        k.compose(x, x, y, &cx.lambda0(x, y, &[(1, hv)]), &[(1, kv)])
    })?;
    let mut phi_p = rho.clone();
    for t in 1..=seq.last() {
        let lay = &seq.attached[t - 1];
        let q = lay.map_to(kxy, |tuple| {
            let l = tuple.len() - 1;
            let (r, kv) = e.rep(tuple[l]);
            let mut ht = tuple.to_vec();
            ht[l] = r;
            Ok(k.compose(x, x, y, &cx.embed_tuple(x, y, t, &ht), &[(1, kv)]))
        })?;
        phi_p = seq.colims[t - 1].induce_checked(&[phi_p, q], kxy)?;
    }
    let last = seq.last();
    let one = k.identity_vec(x);
    let zero = build_map(cx.h().hom(x, y), &seq.stages[last], |hv| {
        Ok(seq.bond(0, last, &r0.class(&[(1, hv)], &one)))
    })?;
    let phi = phi_from_trace(cx, x, y, seq, zero, |t, ev| {
        if t > last {
            return vec![];
        }
        let ps = cx.tr.pair(x, y);
        let tuple = ps.q[t].decode(ev);
        let l = tuple.len() - 1;
        let lay = &seq.attached[t - 1];
        let mut out = Vec::new();
        for (c, ee) in e.class(&[(1, tuple[l])], &one) {
            let mut tt = tuple.clone();
            tt[l] = ee;
            if let Some(j) = lay.encode(&tt) {
                out.push((c, j));
            }
        }
        seq.gen_final(t, &normalize(cx.base, out))
    })?;
    let top = &seq.stages[last];
    let mut eqs = vec![
        ("Φ∘Φ′ = id", phi.after(&phi_p)?, BaseMap::identity(top)),
        ("Φ′∘Φ = id", phi_p.after(&phi)?, BaseMap::identity(kxy)),
        (
            "Φ′ restricted to stage 0 is the induced module map",
            phi_p.after(&seq.bond_map(0, last)?)?,
            rho.clone(),
        ),
    ];
    let (a, b) = (cx.tr.att.a, cx.tr.att.b);
    if (b == x || x == y)
        && !rho.is_iso() {
            eqs.push((
                "H(x,y) ⊗ K(x,x) → K(x,y) iso",
                rho.clone(),
                BaseMap::identity(r0.value()),
            ));
        }
    if a == x {
        for (t, bm) in seq.bonding.iter().enumerate().skip(1) {
            if !bm.is_iso() {
                eqs.push((
                    "φ^r_t iso for t > 1",
                    bm.clone(),
                    BaseMap::identity(&seq.stages[t]),
                ));
            }
        }
    }
    Ok(run(eqs))
}

/// Checks the special cases: a = b single monoid push-out, stages beyond the first being
/// isomorphisms when an attachment object is x, and the module collapse when b = x.
pub fn verify_special_cases(tr: &PushoutTrace) -> PropertyReport {
    const SUITE: &str = "decomposition-special-cases";
    let run_all = || -> Result<Outcome> {
        let cx = Ctx::new(tr)?;
        let (a, b) = (tr.att.a, tr.att.b);
        let mut eqs: Vec<(&str, BaseMap, BaseMap)> = Vec::new();
        if a == b {
            let (k, h) = (cx.k(), cx.h());
            let endo = Monoid::endo(h, a);
            let unit = Monoid::unit_monoid(cx.base);
            let phi = build_map(&unit.value, &endo.value, |_| Ok(endo.unit.clone()))?;
            let corners = vec![(tr.att.f.src.clone(), tr.att.f.clone(), tr.att.gbar.clone())];
            let words = word_bound(&tr.att.f.tgt)
                .ok_or_else(|| Error::Unsupported("V does not have positive degree".into()))?;
            let triv_l = |_: usize, n: usize| vec![(1, n)];
            let triv_r = |n: usize, _: usize| vec![(1, n)];
            let mp = monoid_pushout(&FreeAttach {
                k: &endo,
                a: &unit.value,
                phi: &phi,
                n: &tr.att.f.tgt,
                left: &triv_l,
                right: &triv_r,
                corners: &corners,
                words,
                mode: cx.mode,
            })?;
            let kaa = k.hom(a, a);
            let endo_k = Monoid::endo(k, a);
            let g_adj = &cx.res.g_adj;
            let cocone: Vec<BaseMap> = mp
                .words
                .iter()
                .map(|w| {
                    w.map_to(kaa, |tuple| {
                        let mut acc = cx.lambda0(a, a, &[(1, tuple[0])]);
                        for j in 0..(tuple.len() - 1) / 2 {
                            acc = endo_k.mul(
                                &endo_k.mul(&acc, &g_adj.apply_basis(tuple[2 * j + 1])),
                                &cx.lambda0(a, a, &[(1, tuple[2 * j + 2])]),
                            );
                        }
                        Ok(acc)
                    })
                })
                .collect::<Result<_>>()?;
            let cmp = mp.colim.induce_checked(&cocone, kaa)?;
            if !cmp.is_iso() {
                eqs.push((
                    "monoid push-out T(U) → T(V) along ḡ is K(a,a)",
                    cmp,
                    BaseMap::identity(&mp.monoid.value),
                ));
            }
        }
        for x in [a, b] {
            let d = match decomposition_trace(tr, View::Endo { x }) {
                Ok(d) => d,
                Err(Error::NotStabilized(_)) | Err(Error::Unsupported(_)) => continue,
                Err(e) => return Err(e),
            };
            for (t, bm) in d.stages.bonding.iter().enumerate().skip(1) {
                if !bm.is_iso() {
                    eqs.push((
                        "endo stages beyond the first are isomorphisms",
                        bm.clone(),
                        BaseMap::identity(&d.stages.stages[t]),
                    ));
                }
            }
        }
        for y in 0..tr.h.len() {
            match decomposition_trace(tr, View::RightModule { x: b, y }) {
                Ok(d) => {
                    for (t, bm) in d.stages.bonding.iter().enumerate() {
                        if !bm.is_iso() {
                            eqs.push((
                                "module stages are isomorphisms when b = x",
                                bm.clone(),
                                BaseMap::identity(&d.stages.stages[t]),
                            ));
                        }
                    }
                }
                Err(Error::NotStabilized(_)) | Err(Error::Unsupported(_)) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(run(eqs))
    };
    if !tr.stabilized {
        return PropertyReport::skipped(SUITE, SkipReason::Truncation, "trace did not stabilize");
    }
    match run_all() {
        Ok(Ok(c)) => PropertyReport::pass(SUITE, c),
        Ok(Err((c, w))) => PropertyReport::fail(SUITE, c, w),
        Err(Error::Unsupported(m)) => PropertyReport::skipped(SUITE, SkipReason::Unsupported, m),
        Err(Error::NotStabilized(m)) => PropertyReport::skipped(SUITE, SkipReason::Truncation, m),
        Err(e) => PropertyReport::fail(SUITE, 0, json!({ "error": e.to_string() })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::Complex;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    fn loop_trace() -> PushoutTrace {
        let b = Base::chain(2, 0, 4);
        let h = VCategory::unit(b, labels(1));
        let v = BaseValue::Chain(Complex::concentrated(2, 0, 4, 1, 1).unwrap());
        let att = Attachment {
            a: 0,
            b: 0,
            f: BaseMap::from_initial(&v),
            gbar: BaseMap::from_initial(h.hom(0, 0)),
        };
        pushout_along_free(&h, &att, 6).unwrap()
    }

    #[test]
    fn tensor_algebra_endo_view() {
        let tr = loop_trace();
        let r = verify_decomposition(&tr, View::Endo { x: 0 });
        assert!(r.passed(), "{r:?}");
        let d = decomposition_trace(&tr, View::Endo { x: 0 }).unwrap();
        assert_eq!(
            d.stages.stages.last().unwrap().as_chain().dims,
            vec![1, 1, 1, 1, 1]
        );
        assert!(verify_special_cases(&tr).passed());
    }

    #[test]
    fn tensor_algebra_other_views() {
        let tr = loop_trace();
        for v in [
            View::ReducedComposition { x: 0, y: 0, z: 0 },
            View::RightModule { x: 0, y: 0 },
            View::LeftModule { x: 0, y: 0 },
        ] {
            let r = verify_decomposition(&tr, v);
            assert!(r.passed(), "{v:?}: {r:?}");
        }
    }

    #[test]
    fn identity_attachment_views_pass() {
        let h = VCategory::unit(Base::FinSet, labels(2));
        let one = BaseValue::Set(1);
        let att = Attachment {
            a: 0,
            b: 0,
            f: BaseMap::identity(&one),
            gbar: BaseMap::identity(&one),
        };
        let tr = pushout_along_free(&h, &att, 2).unwrap();
        for v in [
            View::Endo { x: 0 },
            View::ReducedComposition { x: 0, y: 1, z: 0 },
            View::RightModule { x: 1, y: 0 },
        ] {
            let r = verify_decomposition(&tr, v);
            assert!(r.passed(), "{v:?}: {r:?}");
        }
    }
}
