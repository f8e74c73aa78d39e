//! Push-outs of V-categories along free V-functors T_S(f_ab): stage by stage.
//!
//! For a pair (x, y), stage t glues the object
//! `Q_t(x, y) = H(b,y) ⊗ V ⊗ H(b,a) ⊗ V ⊗ … ⊗ V ⊗ H(x,a)` (t copies of V) onto
//! `K(x, y)_{t-1}` along the maximal corners of its push-out product, where corner i
//! replaces the i-th V by U and maps into stage t-1 by applying ḡ in that slot and
//! composing it with its two neighbours.

use serde_json::{json, Value};

use crate::base::{build_map, Base, BaseMap, BaseValue, Colim, Layout, Mode, Presentation};
use crate::error::{Error, Result};
use crate::vcat::{apply, normalize, validate_category, VCategory, VFunctor, Vector};

/// The attachment data of a push-out square along T_S(f_ab).
#[derive(Clone, Debug)]
pub struct Attachment {
    pub a: usize,
    pub b: usize,
    /// f: U → V.
    pub f: BaseMap,
    /// ḡ: U → H(a, b).
    pub gbar: BaseMap,
}

/// Why stages beyond the last computed one change nothing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Every cube vertex of every later stage is initial.
    Vanishing,
    /// Every later push-out product is an isomorphism, so later bonding maps are too.
    IsoStages,
}

impl Certificate {
    pub fn name(self) -> &'static str {
        match self {
            Certificate::Vanishing => "vanishing",
            Certificate::IsoStages => "iso-stages",
        }
    }
}

/// A term `coef · (e_1 ⊗ … ⊗ e_n)` of a tensor of factors, by factor basis indices.
pub type Term = (u32, Vec<usize>);

/// Stage data for one pair (x, y).
#[derive(Clone, Debug)]
pub struct PairStages {
    pub x: usize,
    pub y: usize,
    /// Last computed stage T.
    pub last: usize,
    pub certificate: Option<Certificate>,
    /// Q_0 = H(x, y), Q_1, …, Q_T.
    pub q: Vec<Layout>,
    /// K_0, …, K_T.
    pub stages: Vec<BaseValue>,
    /// The push-out of stage t at index t-1, summands `[K_{t-1}, Q_t]`.
    pub colims: Vec<Colim>,
    reps: Vec<Vec<(usize, usize)>>,
    /// φ_t: K_{t-1} → K_t at index t-1.
    pub bonding: Vec<BaseMap>,
    /// ψ̄_t: Q_t → K_t at index t-1.
    pub psibar: Vec<BaseMap>,
    /// λ_m: Q_m → K_T for m = 0..=T.
    pub to_final: Vec<BaseMap>,
}

impl PairStages {
    pub fn result(&self) -> &BaseValue {
        &self.stages[self.last]
    }

    /// A representative `(m, tuple)` in some Q_m of basis element `e` of stage `s`.
    pub fn rep(&self, s: usize, e: usize) -> (usize, Vec<usize>) {
        let mut s = s;
        let mut e = e;
        while s > 0 {
            let (summand, j) = self.reps[s - 1][e];
            if summand == 1 {
                return (s, self.q[s].decode(j));
            }
            s -= 1;
            e = j;
        }
        (0, vec![e])
    }

    /// φ from stage `from` to stage `to` on a vector.
    pub fn bond(&self, from: usize, to: usize, v: &[(u32, usize)]) -> Vector {
        let mut cur = v.to_vec();
        for t in from + 1..=to {
            cur = apply(&self.bonding[t - 1], &cur);
        }
        cur
    }

    /// Image in stage `s ≥ m` of terms of Q_m.
    pub fn embed_at(&self, base: Base, m: usize, terms: &[Term], s: usize) -> Vector {
        let mut v = Vec::new();
        for (c, t) in terms {
            if let Some(j) = self.q[m].encode(t) {
                v.push((*c, j));
            }
        }
        let v = normalize(base, v);
        let v = if m == 0 {
            v
        } else {
            apply(&self.psibar[m - 1], &v)
        };
        self.bond(m, s, &v)
    }
}

#[derive(Clone, Debug)]
pub struct PushoutResult {
    pub k: VCategory,
    /// φ: H → K, the identity on objects.
    pub phi: VFunctor,
    /// The adjoint V → K(a, b) of g′.
    pub g_adj: BaseMap,
}

#[derive(Clone, Debug)]
pub struct PushoutTrace {
    pub h: VCategory,
    pub att: Attachment,
    pub stage_bound: usize,
    pub pairs: Vec<PairStages>,
    pub stabilized: bool,
    /// Present iff stabilized.
    pub result: Option<PushoutResult>,
}

/// Cartesian expansion of per-factor vectors into tensor terms.
pub fn expand(base: Base, parts: &[Vector]) -> Vec<Term> {
    let p = match base {
        Base::Chain { p, .. } => p as u64,
        _ => 0,
    };
    let mut acc: Vec<Term> = vec![(1, Vec::with_capacity(parts.len()))];
    for part in parts {
        let mut next = Vec::with_capacity(acc.len() * part.len());
        for (c, t) in &acc {
            for &(c2, j) in part {
                let mut nt = t.clone();
                nt.push(j);
                let coef = if p == 0 {
                    1
                } else {
                    (*c as u64 * c2 as u64 % p) as u32
                };
                next.push((coef, nt));
            }
        }
        acc = next;
    }
    acc
}

/// Whether a tuple of factor basis elements survives the degree window.
fn in_window(base: Base, factors: &[BaseValue], tuple: &[usize]) -> bool {
    match base {
        Base::Chain { hi, .. } => {
            let deg: i32 = factors
                .iter()
                .zip(tuple)
                .map(|(f, &e)| {
                    let c = f.as_chain();
                    c.lo + crate::base::flat_to_degree(&c.dims, e).0 as i32
                })
                .sum();
            deg <= hi
        }
        _ => true,
    }
}

/// Shared context for building stages: H, the attachment, and the tensor mode.
pub struct Engine<'a> {
    pub h: &'a VCategory,
    pub att: &'a Attachment,
    pub mode: Mode,
    f_inverse: Option<BaseMap>,
}

impl<'a> Engine<'a> {
    pub fn new(h: &'a VCategory, att: &'a Attachment) -> Result<Engine<'a>> {
        let n = h.len();
        if att.a >= n || att.b >= n {
            return Err(Error::UnknownLabel(
                "attachment objects out of range".into(),
            ));
        }
        if att.f.src != att.gbar.src || att.gbar.tgt != *h.hom(att.a, att.b) {
            return Err(Error::Malformed("ḡ must map U into H(a, b)".into()));
        }
        if att.f.base() != h.base() {
            return Err(Error::BaseMismatch(
                "attachment and category bases differ".into(),
            ));
        }
        let mode = match h.base() {
            Base::Chain { .. } => Mode::Truncate,
            _ => Mode::Strict,
        };
        Ok(Engine {
            h,
            att,
            mode,
            f_inverse: att.f.inverse(),
        })
    }

    pub fn base(&self) -> Base {
        self.h.base()
    }

    /// The factors of Q_t(x, y).
    pub fn q_factors(&self, x: usize, y: usize, t: usize) -> Vec<BaseValue> {
        let (a, b, h) = (self.att.a, self.att.b, self.h);
        if t == 0 {
            return vec![h.hom(x, y).clone()];
        }
        let mut out = vec![h.hom(b, y).clone()];
        for i in 1..=t {
            out.push(self.att.f.tgt.clone());
            out.push(if i < t {
                h.hom(b, a).clone()
            } else {
                h.hom(x, a).clone()
            });
        }
        out
    }

    /// The factors of the corner C_{t,i}: Q_t with its i-th V replaced by U.
    pub fn corner_factors(&self, x: usize, y: usize, t: usize, i: usize) -> Vec<BaseValue> {
        let mut f = self.q_factors(x, y, t);
        f[2 * i - 1] = self.att.f.src.clone();
        f
    }

    /// ψ̂_{t,i} on a corner tuple: ḡ in slot i, composed with both neighbours; lands in Q_{t-1}.
    pub fn psi_hat(&self, x: usize, y: usize, t: usize, i: usize, tuple: &[usize]) -> Vec<Term> {
        let (a, b, h) = (self.att.a, self.att.b, self.h);
        let (l, u, r) = (tuple[2 * i - 2], tuple[2 * i - 1], tuple[2 * i]);
        let src_r = if i == t { x } else { b };
        let tgt_l = if i == 1 { y } else { a };
        let g = self.att.gbar.apply_basis(u);
        let w = h.compose(src_r, a, b, &g, &[(1, r)]);
        let c = h.compose(src_r, b, tgt_l, &[(1, l)], &w);
        c.into_iter()
            .map(|(coef, e)| {
                let mut nt = tuple[..2 * i - 2].to_vec();
                nt.push(e);
                nt.extend_from_slice(&tuple[2 * i + 1..]);
                (coef, nt)
            })
            .collect()
    }

    /// Terms of c_{s,t}(qa ⊗ qb) in Q_{s+t}(x, z) for qa ∈ Q_s(y, z), qb ∈ Q_t(x, y).
    pub fn concat(
        &self,
        x: usize,
        y: usize,
        z: usize,
        s: usize,
        qa: &[usize],
        t: usize,
        qb: &[usize],
    ) -> Vec<Term> {
        let (a, b, h) = (self.att.a, self.att.b, self.h);
        let (mid, left, right): (Vector, &[usize], &[usize]) = match (s, t) {
            (0, 0) => (h.compose_basis(x, y, z, qa[0], qb[0]), &[], &[]),
            (0, _) => (h.compose_basis(b, y, z, qa[0], qb[0]), &[], &qb[1..]),
            (_, 0) => (
                h.compose_basis(x, y, a, qa[qa.len() - 1], qb[0]),
                &qa[..qa.len() - 1],
                &[],
            ),
            _ => (
                h.compose_basis(b, y, a, qa[qa.len() - 1], qb[0]),
                &qa[..qa.len() - 1],
                &qb[1..],
            ),
        };
        mid.into_iter()
            .map(|(c, e)| {
                let mut nt = left.to_vec();
                nt.push(e);
                nt.extend_from_slice(right);
                (c, nt)
            })
            .collect()
    }

    /// The stabilization certificate at stage bound `t_last`, if any.
    pub fn certificate(&self, x: usize, y: usize, t_last: usize) -> Option<Certificate> {
        let (a, b, h) = (self.att.a, self.att.b, self.h);
        let (u, v) = (&self.att.f.src, &self.att.f.tgt);
        if h.hom(b, y).is_initial() || h.hom(x, a).is_initial() {
            return Some(Certificate::Vanishing);
        }
        if t_last >= 1 && h.hom(b, a).is_initial() {
            return Some(Certificate::Vanishing);
        }
        if u.is_initial() && v.is_initial() {
            return Some(Certificate::Vanishing);
        }
        if let Base::Chain { lo, hi, .. } = self.base() {
            if lo >= 0 {
                let md = |v: &BaseValue| v.as_chain().min_degree();
                let t = (t_last + 1) as i32;
                let uv = match (md(u), md(v)) {
                    (Some(p), Some(q)) => p.min(q),
                    (Some(p), None) | (None, Some(p)) => p,
                    (None, None) => unreachable!(),
                };
                let hba = md(h.hom(b, a)).unwrap_or(0);
                if let (Some(by), Some(xa)) = (md(h.hom(b, y)), md(h.hom(x, a))) {
                    if by + xa + (t - 1) * hba + t * uv > hi {
                        return Some(Certificate::Vanishing);
                    }
                }
            }
        }
        if self.f_inverse.is_some() {
            return Some(Certificate::IsoStages);
        }
        if t_last >= 1 {
            match &self.att.f.src {
                // Push-out products of at least two surjections of finite sets are bijective.
                BaseValue::Set(_) if self.surjective_f() => return Some(Certificate::IsoStages),
                BaseValue::Bool(_) => return Some(Certificate::IsoStages),
                _ => {}
            }
        }
        None
    }

    fn surjective_f(&self) -> bool {
        let mut hit = vec![false; self.att.f.tgt.size()];
        for &j in self.att.f.table() {
            hit[j] = true;
        }
        hit.into_iter().all(|b| b)
    }

    /// A preimage of v under f, as a vector of U.
    fn preimage(&self, v: usize) -> Vector {
        if let Some(inv) = &self.f_inverse {
            return inv.apply_basis(v);
        }
        match &self.att.f.src {
            BaseValue::Set(_) => {
                let u = self
                    .att
                    .f
                    .table()
                    .iter()
                    .position(|&j| j == v)
                    .expect("f is surjective");
                vec![(1, u)]
            }
            _ => vec![(1, 0)],
        }
    }

    /// Computes the stages of one pair up to the certificate or the stage bound.
    pub fn stages(&self, x: usize, y: usize, stage_bound: usize) -> Result<PairStages> {
        let base = self.base();
        let hxy = self.h.hom(x, y).clone();
        let q0 = Layout::new(std::slice::from_ref(&hxy), self.mode)?;
        if q0.value != hxy {
            return Err(Error::Malformed(
                "single-factor layout differs from its factor".into(),
            ));
        }
        let mut ps = PairStages {
            x,
            y,
            last: 0,
            certificate: None,
            q: vec![q0],
            stages: vec![hxy.clone()],
            colims: vec![],
            reps: vec![],
            bonding: vec![],
            psibar: vec![],
            to_final: vec![],
        };
        let mut t = 1;
        loop {
            ps.certificate = self.certificate(x, y, t - 1);
            if ps.certificate.is_some() || t > stage_bound {
                break;
            }
            let qt = Layout::new(&self.q_factors(x, y, t), self.mode)?;
            let prev = ps.stages[t - 1].clone();
            let mut pr = Presentation::new(base);
            pr.add_summand(prev.clone());
            pr.add_summand(qt.value.clone());
            let qprev = &ps.q[t - 1];
            for i in 1..=t {
                let cl = Layout::new(&self.corner_factors(x, y, t, i), self.mode)?;
                let hat = cl.map_to(&qprev.value, |tuple| {
                    let mut v = Vec::new();
                    for (c, nt) in self.psi_hat(x, y, t, i, tuple) {
                        if let Some(j) = qprev.encode(&nt) {
                            v.push((c, j));
                        }
                    }
                    Ok(normalize(base, v))
                })?;
                let psi = if t == 1 {
                    hat
                } else {
                    ps.psibar[t - 2].after(&hat)?
                };
                let iota = cl.map_to(&qt.value, |tuple| {
                    let parts: Vec<Vector> = tuple
                        .iter()
                        .enumerate()
                        .map(|(k, &e)| {
                            if k == 2 * i - 1 {
                                self.att.f.apply_basis(e)
                            } else {
                                vec![(1, e)]
                            }
                        })
                        .collect();
                    let mut v = Vec::new();
                    for (c, nt) in expand(base, &parts) {
                        if let Some(j) = qt.encode(&nt) {
                            v.push((c, j));
                        }
                    }
                    Ok(normalize(base, v))
                })?;
                pr.relate(cl.value.clone(), Some((0, psi)), Some((1, iota)));
            }
            let c = pr.glue()?;
            ps.bonding.push(c.legs[0].clone());
            ps.psibar.push(c.legs[1].clone());
            ps.stages.push(c.value.clone());
            ps.reps.push(c.representatives());
            ps.colims.push(c);
            ps.q.push(qt);
            ps.last = t;
            t += 1;
        }
        let last = ps.last;
        let mut to_final = Vec::with_capacity(last + 1);
        for m in 0..=last {
            let first = if m == 0 {
                BaseMap::identity(&hxy)
            } else {
                ps.psibar[m - 1].clone()
            };
            let mut acc = first;
            for s in m + 1..=last {
                acc = ps.bonding[s - 1].after(&acc)?;
            }
            to_final.push(acc);
        }
        ps.to_final = to_final;
        Ok(ps)
    }

    /// Image in the final stage of (x, z) of terms of Q_m(x, z), for any m.
    pub fn embed(&self, ps: &PairStages, m: usize, terms: &[Term]) -> Vector {
        let base = self.base();
        let (x, z) = (ps.x, ps.y);
        if m <= ps.last {
            return ps.embed_at(base, m, terms, ps.last);
        }
        match ps.certificate {
            Some(Certificate::Vanishing) | None => vec![],
            Some(Certificate::IsoStages) => {
                if let Base::Bool = base {
                    return if terms.is_empty() || ps.result().size() == 0 {
                        vec![]
                    } else {
                        vec![(1, 0)]
                    };
                }
                let factors = self.q_factors(x, z, m);
                let mut out = Vec::new();
                for (c, t) in terms {
                    if !in_window(base, &factors, t) {
                        continue;
                    }
                    // t = ι_{m,1}(corner), so its class is ψ̂_{m,1}(corner) one stage down.
                    for (cu, u) in self.preimage(t[1]) {
                        let mut corner = t.clone();
                        corner[1] = u;
                        let coef = mul(base, *c, cu);
                        let lower: Vec<Term> = self
                            .psi_hat(x, z, m, 1, &corner)
                            .into_iter()
                            .map(|(d, nt)| (mul(base, coef, d), nt))
                            .collect();
                        out.extend(self.embed(ps, m - 1, &lower));
                    }
                }
                normalize(base, out)
            }
        }
    }
}

fn mul(base: Base, a: u32, b: u32) -> u32 {
    match base {
        Base::Chain { p, .. } => (a as u64 * b as u64 % p as u64) as u32,
        _ => 1,
    }
}

/// Computes the push-out of H along T_S(f_ab) with attachment ḡ, stage by stage.
pub fn pushout_along_free(
    h: &VCategory,
    att: &Attachment,
    stage_bound: usize,
) -> Result<PushoutTrace> {
    let eng = Engine::new(h, att)?;
    let n = h.len();
    let mut pairs = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            pairs.push(eng.stages(x, y, stage_bound)?);
        }
    }
    let stabilized = pairs.iter().all(|p| p.certificate.is_some());
    let result = if stabilized {
        Some(assemble(&eng, &pairs)?)
    } else {
        None
    };
    Ok(PushoutTrace {
        h: h.clone(),
        att: att.clone(),
        stage_bound,
        pairs,
        stabilized,
        result,
    })
}

fn assemble(eng: &Engine, pairs: &[PairStages]) -> Result<PushoutResult> {
    let h = eng.h;
    let n = h.len();
    let base = h.base();
    let graph = crate::graph::VGraph::new(
        base,
        h.objects().to_vec(),
        pairs.iter().map(|p| p.result().clone()).collect(),
    )?;
    let pair = |x: usize, y: usize| &pairs[x * n + y];
    let k = VCategory::from_rule(
        graph,
        h.mode,
        |x, y, z, a, b| {
            let (pa, pb) = (pair(y, z), pair(x, y));
            let (s, qa) = pa.rep(pa.last, a);
            let (t, qb) = pb.rep(pb.last, b);
            let terms = eng.concat(x, y, z, s, &qa, t, &qb);
            eng.embed(pair(x, z), s + t, &terms)
        },
        |x| apply(&pair(x, x).to_final[0], &h.identity_vec(x)),
    )?;
    let comps = (0..n * n).map(|i| pairs[i].to_final[0].clone()).collect();
    let phi = VFunctor::new(h.clone(), k.clone(), (0..n).collect(), comps)?;
    let (a, b) = (eng.att.a, eng.att.b);
    let pab = pair(a, b);
    let g_adj = build_map(&eng.att.f.tgt, k.hom(a, b), |v| {
        let terms = expand(base, &[h.identity_vec(b), vec![(1, v)], h.identity_vec(a)]);
        Ok(eng.embed(pab, 1, &terms))
    })?;
    Ok(PushoutResult { k, phi, g_adj })
}

impl PushoutTrace {
    pub fn engine(&self) -> Result<Engine<'_>> {
        Engine::new(&self.h, &self.att)
    }

    pub fn pair(&self, x: usize, y: usize) -> &PairStages {
        &self.pairs[x * self.h.len() + y]
    }

    pub fn require(&self) -> Result<&PushoutResult> {
        self.result.as_ref().ok_or_else(|| {
            Error::NotStabilized("push-out trace did not stabilize within its stage bound".into())
        })
    }

    /// c_{s,t}: K(y,z)_s ⊗ K(x,y)_t → K(x,z)_{s+t} on basis elements, via representatives.
    pub fn ladder(
        &self,
        eng: &Engine,
        x: usize,
        y: usize,
        z: usize,
        s: usize,
        t: usize,
        ea: usize,
        eb: usize,
    ) -> Vector {
        let (pa, pb, pc) = (self.pair(y, z), self.pair(x, y), self.pair(x, z));
        let (ms, qa) = pa.rep(s, ea);
        let (mt, qb) = pb.rep(t, eb);
        let terms = eng.concat(x, y, z, ms, &qa, mt, &qb);
        let m = ms + mt;
        let v = pc.embed_at(self.h.base(), m, &terms, m);
        pc.bond(m, s + t, &v)
    }

    /// Structured summary: stage sizes per pair, certificates, and stabilization.
    pub fn export(&self) -> Value {
        let o = self.h.objects();
        let pairs: Vec<Value> = self
            .pairs
            .iter()
            .map(|p| {
                json!({
                    "pair": [o[p.x], o[p.y]],
                    "stage_sizes": p.stages.iter().map(BaseValue::size).collect::<Vec<_>>(),
                    "stage_dims": p.stages.iter().map(dims_json).collect::<Vec<_>>(),
                    "attached_sizes": p.q.iter().map(|l| l.value.size()).collect::<Vec<_>>(),
                    "last_stage": p.last,
                    "certificate": p.certificate.map(Certificate::name),
                })
            })
            .collect();
        let validation = self
            .result
            .as_ref()
            .map(|r| validate_category(&r.k).passed());
        json!({
            "a": o[self.att.a],
            "b": o[self.att.b],
            "stage_bound": self.stage_bound,
            "stabilized": self.stabilized,
            "pairs": pairs,
            "result_valid": validation,
        })
    }
}

fn dims_json(v: &BaseValue) -> Value {
    match v {
        BaseValue::Chain(c) => json!(c.dims),
        other => json!(other.size()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::Complex;
    use crate::vcat::validate_category;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn free_arrow_between_two_objects() {
        let h = VCategory::unit(Base::FinSet, labels(2));
        let att = Attachment {
            a: 0,
            b: 1,
            f: BaseMap::from_initial(&BaseValue::Set(1)),
            gbar: BaseMap::from_initial(&BaseValue::Set(0)),
        };
        let tr = pushout_along_free(&h, &att, 3).unwrap();
        assert!(tr.stabilized);
        let r = tr.result.unwrap();
        assert_eq!(r.k.hom(0, 1), &BaseValue::Set(1));
        assert_eq!(r.k.hom(1, 0), &BaseValue::Set(0));
        assert_eq!(r.k.hom(0, 0), &BaseValue::Set(1));
        assert!(validate_category(&r.k).passed());
        assert!(r.phi.validate().passed());
    }

    #[test]
    fn tensor_algebra_on_a_degree_one_loop() {
        let b = Base::chain(2, 0, 4);
        let h = VCategory::unit(b, labels(1));
        let v = BaseValue::Chain(Complex::concentrated(2, 0, 4, 1, 1).unwrap());
        let att = Attachment {
            a: 0,
            b: 0,
            f: BaseMap::from_initial(&v),
            gbar: BaseMap::from_initial(h.hom(0, 0)),
        };
        let tr = pushout_along_free(&h, &att, 6).unwrap();
        assert!(tr.stabilized);
        let k = &tr.result.as_ref().unwrap().k;
        assert_eq!(k.hom(0, 0).as_chain().dims, vec![1, 1, 1, 1, 1]);
        assert!(validate_category(k).passed());
    }

    #[test]
    fn identity_attachment_is_trivial() {
        let h = VCategory::unit(Base::FinSet, labels(2));
        let one = BaseValue::Set(1);
        let att = Attachment {
            a: 0,
            b: 0,
            f: BaseMap::identity(&one),
            gbar: BaseMap::identity(&one),
        };
        let tr = pushout_along_free(&h, &att, 2).unwrap();
        let r = tr.result.unwrap();
        assert!(r.phi.map.is_iso());
    }

    #[test]
    fn endomorphism_attachment_does_not_stabilize() {
        let h = VCategory::unit(Base::FinSet, labels(1));
        let att = Attachment {
            a: 0,
            b: 0,
            f: BaseMap::from_initial(&BaseValue::Set(1)),
            gbar: BaseMap::from_initial(&BaseValue::Set(1)),
        };
        let tr = pushout_along_free(&h, &att, 3).unwrap();
        assert!(!tr.stabilized);
        assert_eq!(tr.pair(0, 0).stages.last().unwrap(), &BaseValue::Set(4));
    }
}
