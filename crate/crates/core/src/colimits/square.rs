//! Push-out square checks: base squares, product squares, stage squares of a trace, the
//! composition ladder, and associativity of push-out products.

use serde_json::{json, Value};

use crate::base::{pushout, tensor_map, tensor_vectors, Base, BaseMap, BaseValue, Layout, Mode};
use crate::error::{Error, Result};
use crate::report::{PropertyReport, SkipReason};
use crate::vcat::{apply, normalize};

use super::engine::{expand, PushoutTrace};
use super::oracle::compare_with_oracle;
use super::product::{pushout_product, pushout_product_framed, Factor};

/// A commutative square `right ∘ top = bottom ∘ left`; the candidate push-out is the corner
/// `right.tgt = bottom.tgt`.
#[derive(Clone, Debug)]
pub struct BaseSquare {
    pub top: BaseMap,
    pub left: BaseMap,
    pub right: BaseMap,
    pub bottom: BaseMap,
}

/// What a push-out square check receives.
#[derive(Clone, Debug)]
pub enum Square<'a> {
    Base(BaseSquare),
    /// The square of V-categories produced by a push-out along a free V-functor.
    Free(&'a PushoutTrace),
}

fn fail_err(suite: &str, e: Error) -> PropertyReport {
    PropertyReport::fail(suite, 0, json!({ "error": e.to_string() }))
}

/// Counts the factorizations through the corner of one cocone into the two-element set, given
/// as subsets of the two legs' targets; the universal property asks for exactly one.
fn factorizations(sq: &BaseSquare, beta: &[bool], gamma: &[bool]) -> usize {
    let d = sq.right.tgt.as_set();
    let mut forced: Vec<Option<bool>> = vec![None; d];
    for (maps, side) in [(sq.right.table(), beta), (sq.bottom.table(), gamma)] {
        for (i, &j) in maps.iter().enumerate() {
            match forced[j] {
                None => forced[j] = Some(side[i]),
                Some(v) if v != side[i] => return 0,
                _ => {}
            }
        }
    }
    1usize << forced.iter().filter(|f| f.is_none()).count()
}

/// Exhaustive universal property over finite sets, against every cocone into a two-element set.
fn exhaustive_sets(sq: &BaseSquare) -> std::result::Result<usize, Value> {
    let (nb, nc) = (sq.top.tgt.as_set(), sq.left.tgt.as_set());
    if nb + nc > 20 {
        return Err(json!({ "error": "cocone space too large to enumerate" }));
    }
    let mut checks = 0;
    for mask in 0u32..(1 << (nb + nc)) {
        let beta: Vec<bool> = (0..nb).map(|i| mask >> i & 1 == 1).collect();
        let gamma: Vec<bool> = (0..nc).map(|i| mask >> (nb + i) & 1 == 1).collect();
        let is_cocone = sq
            .top
            .table()
            .iter()
            .zip(sq.left.table())
            .all(|(&b, &c)| beta[b] == gamma[c]);
        if !is_cocone {
            continue;
        }
        checks += 1;
        let n = factorizations(sq, &beta, &gamma);
        if n != 1 {
            return Err(
                json!({ "cocone": { "right": beta, "bottom": gamma }, "factorizations": n }),
            );
        }
    }
    Ok(checks)
}

fn verify_base_square(sq: &BaseSquare) -> PropertyReport {
    const SUITE: &str = "pushout-square";
    let lhs = match sq.right.after(&sq.top) {
        Ok(m) => m,
        Err(e) => return fail_err(SUITE, e),
    };
    let rhs = match sq.bottom.after(&sq.left) {
        Ok(m) => m,
        Err(e) => return fail_err(SUITE, e),
    };
    if lhs != rhs {
        return PropertyReport::fail(SUITE, 1, json!({ "error": "square does not commute" }));
    }
    match sq.top.base() {
        Base::FinSet => match exhaustive_sets(sq) {
            Ok(n) => PropertyReport::pass(SUITE, n + 1),
            Err(w) => PropertyReport::fail(SUITE, 1, w),
        },
        Base::Bool => {
            // Cocones into ⊥ exist exactly when both legs' targets are ⊥.
            let expect = sq.right.src.size() > 0 || sq.bottom.src.size() > 0;
            if expect == (sq.right.tgt.size() > 0) {
                PropertyReport::pass(SUITE, 3)
            } else {
                PropertyReport::fail(
                    SUITE,
                    3,
                    json!({ "corner": sq.right.tgt.size() > 0, "expected": expect }),
                )
            }
        }
        Base::Chain { .. } => {
            let canonical = pushout(&sq.top, &sq.left).and_then(|p| {
                p.induce_checked(&[sq.right.clone(), sq.bottom.clone()], &sq.right.tgt)
            });
            match canonical {
                Ok(c) if c.is_iso() => PropertyReport::pass(SUITE, 2),
                Ok(c) => {
                    PropertyReport::fail(SUITE, 2, json!({ "canonical": crate::io::map_json(&c) }))
                }
                Err(e) => fail_err(SUITE, e),
            }
        }
    }
}

/// Checks a candidate push-out square of base maps, or the square returned by a push-out along
/// a free V-functor.
pub fn verify_pushout_square(sq: &Square) -> PropertyReport {
    match sq {
        Square::Base(b) => verify_base_square(b),
        Square::Free(tr) => {
            let mut parts = vec![
                free_square_commutes(tr),
                stage_squares(tr),
                ladder_equations(tr),
            ];
            if !matches!(tr.h.base(), Base::Chain { .. }) {
                let bound = tr.pairs.iter().map(|p| p.last).max().unwrap_or(0) + 2;
                parts.push(compare_with_oracle(tr, bound));
            }
            PropertyReport::combine("pushout-square", parts)
        }
    }
}

/// The product square of two base push-out squares: push-out products of the top and bottom
/// arrows, with the induced left map and the tensor of the right maps.
pub fn product_square(s1: &BaseSquare, s2: &BaseSquare, mode: Mode) -> Result<BaseSquare> {
    let top = pushout_product(&[s1.top.clone(), s2.top.clone()], mode)?;
    let bottom = pushout_product(&[s1.bottom.clone(), s2.bottom.clone()], mode)?;
    let left = top.induced_source_map(
        &bottom,
        &[
            (s1.left.clone(), s1.right.clone()),
            (s2.left.clone(), s2.right.clone()),
        ],
    )?;
    let right = tensor_map(&[&s1.right, &s2.right], mode)?;
    Ok(BaseSquare {
        top: top.map,
        left,
        right,
        bottom: bottom.map,
    })
}

/// The push-out of a span, as a square.
pub fn pushout_square(top: &BaseMap, left: &BaseMap) -> Result<BaseSquare> {
    let p = pushout(top, left)?;
    Ok(BaseSquare {
        top: top.clone(),
        left: left.clone(),
        right: p.legs[0].clone(),
        bottom: p.legs[1].clone(),
    })
}

/// Checks that the product square of two push-out squares is a push-out.
pub fn verify_product_square(s1: &BaseSquare, s2: &BaseSquare, mode: Mode) -> PropertyReport {
    match product_square(s1, s2, mode) {
        Ok(sq) => {
            let mut r = verify_base_square(&sq);
            r.suite = "product-square".into();
            r
        }
        Err(e) => fail_err("product-square", e),
    }
}

/// φ(a,b) ∘ ḡ = g′ ∘ f, and g′ agrees with ψ̄(a,b)_1 on `id_b ⊗ v ⊗ id_a`.
fn free_square_commutes(tr: &PushoutTrace) -> PropertyReport {
    const SUITE: &str = "free-square";
    let run = || -> Result<std::result::Result<usize, Value>> {
        let r = tr.require()?;
        let (a, b) = (tr.att.a, tr.att.b);
        let lhs = r.phi.comp(a, b).after(&tr.att.gbar)?;
        let rhs = r.g_adj.after(&tr.att.f)?;
        if lhs != rhs {
            return Ok(Err(json!({ "equation": "φ∘ḡ = g′∘f" })));
        }
        let ps = tr.pair(a, b);
        if ps.last >= 1 {
            let base = tr.h.base();
            let q1 = &ps.q[1];
            let ida = tr.h.identity_vec(a);
            let idb = tr.h.identity_vec(b);
            let direct = crate::base::build_map(&tr.att.f.tgt, ps.result(), |v| {
                let q = normalize(
                    base,
                    tensor_vectors(q1, &[idb.clone(), vec![(1, v)], ida.clone()]),
                );
                Ok(apply(&ps.to_final[1], &q))
            })?;
            if direct != r.g_adj {
                return Ok(Err(json!({ "equation": "g′ = ψ̄(a,b)_1(id ⊗ − ⊗ id)" })));
            }
        }
        Ok(Ok(2))
    };
    match run() {
        Ok(Ok(n)) => PropertyReport::pass(SUITE, n),
        Ok(Err(w)) => PropertyReport::fail(SUITE, 1, w),
        Err(Error::NotStabilized(m)) => PropertyReport::skipped(SUITE, SkipReason::Truncation, m),
        Err(e) => fail_err(SUITE, e),
    }
}

/// Recomputes every stage of every pair as a push-out of the framed push-out product
/// `H(b,y) ⊗ f ⊗ H(b,a) ⊗ ⋯ ⊗ f ⊗ H(x,a)` along the attaching map, and checks the engine's
/// stage square against it.
pub fn stage_squares(tr: &PushoutTrace) -> PropertyReport {
    const SUITE: &str = "stage-squares";
    let eng = match tr.engine() {
        Ok(e) => e,
        Err(e) => return fail_err(SUITE, e),
    };
    let base = tr.h.base();
    let mode = eng.mode;
    let f = &tr.att.f;
    let mut reports = Vec::new();
    for ps in &tr.pairs {
        let (x, y) = (ps.x, ps.y);
        for t in 1..=ps.last {
            let run = || -> Result<PropertyReport> {
                let qf = eng.q_factors(x, y, t);
                let factors: Vec<Factor> = qf
                    .iter()
                    .enumerate()
                    .map(|(k, v)| {
                        if k % 2 == 1 {
                            Factor::Map(f.clone())
                        } else {
                            Factor::Obj(v.clone())
                        }
                    })
                    .collect();
                let pp = pushout_product_framed(&factors, mode)?;
                let qprev = &ps.q[t - 1];
                let prev = &ps.stages[t - 1];
                let mut cocone = Vec::with_capacity(pp.vertices.len());
                for v in &pp.vertices {
                    let vals: Vec<BaseValue> = qf
                        .iter()
                        .enumerate()
                        .map(|(k, q)| {
                            if k % 2 == 1 && !v[k / 2] {
                                f.src.clone()
                            } else {
                                q.clone()
                            }
                        })
                        .collect();
                    let lay = Layout::of(base, &vals, mode)?;
                    let i = v.iter().position(|&up| !up).expect("non-final vertex") + 1;
                    let corner = Layout::of(base, &eng.corner_factors(x, y, t, i), mode)?;
                    cocone.push(lay.map_to(prev, |tuple| {
                        let parts: Vec<Vec<(u32, usize)>> = tuple
                            .iter()
                            .enumerate()
                            .map(|(k, &e)| {
                                if k % 2 == 1 && k != 2 * i - 1 && !v[k / 2] {
                                    f.apply_basis(e)
                                } else {
                                    vec![(1, e)]
                                }
                            })
                            .collect();
                        let mut out = Vec::new();
                        for (c, ct) in expand(base, &parts) {
                            if corner.encode(&ct).is_none() {
                                continue;
                            }
                            let mut lower = Vec::new();
                            for (d, nt) in eng.psi_hat(x, y, t, i, &ct) {
                                if let Some(j) = qprev.encode(&nt) {
                                    lower.push((d, j));
                                }
                            }
                            let lower = normalize(base, lower);
                            let at_prev = if t == 1 {
                                lower
                            } else {
                                apply(&ps.psibar[t - 2], &lower)
                            };
                            out.extend(crate::vcat::scale(base, c, &at_prev));
                        }
                        Ok(normalize(base, out))
                    })?);
                }
                let attach = pp.colim.induce_checked(&cocone, prev)?;
                let sq = BaseSquare {
                    top: pp.map.clone(),
                    left: attach,
                    right: ps.psibar[t - 1].clone(),
                    bottom: ps.bonding[t - 1].clone(),
                };
                Ok(verify_base_square(&sq))
            };
            let r = run().unwrap_or_else(|e| fail_err(SUITE, e));
            if r.failed() {
                return r.with_note(format!("pair ({x},{y}) stage {t}"));
            }
            reports.push(r);
        }
    }
    let checks = reports.iter().map(|r| r.checks).sum();
    PropertyReport::pass(SUITE, checks)
}

/// Composition ladder: c_{s,t}(φ_s ⊗ id) = φ_{s+t} c_{s-1,t}, the mirrored equation in t, and
/// agreement of the ladder with the composition of the result.
pub fn ladder_equations(tr: &PushoutTrace) -> PropertyReport {
    const SUITE: &str = "ladder";
    let eng = match tr.engine() {
        Ok(e) => e,
        Err(e) => return fail_err(SUITE, e),
    };
    let r = match tr.require() {
        Ok(r) => r,
        Err(Error::NotStabilized(m)) => {
            return PropertyReport::skipped(SUITE, SkipReason::Truncation, m)
        }
        Err(e) => return fail_err(SUITE, e),
    };
    let n = tr.h.len();
    let mut checks = 0;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (pa, pb, pc) = (tr.pair(y, z), tr.pair(x, y), tr.pair(x, z));
                for s in 0..=pa.last {
                    for t in 0..=pb.last {
                        if s + t > pc.last {
                            continue;
                        }
                        for ea in 0..pa.stages[s].size() {
                            for eb in 0..pb.stages[t].size() {
                                let c = tr.ladder(&eng, x, y, z, s, t, ea, eb);
                                checks += 1;
                                let fa = pa.bond(s, pa.last, &[(1, ea)]);
                                let fb = pb.bond(t, pb.last, &[(1, eb)]);
                                let composed = r.k.compose(x, y, z, &fa, &fb);
                                if pc.bond(s + t, pc.last, &c) != composed {
                                    return PropertyReport::fail(
                                        SUITE,
                                        checks,
                                        json!({ "objects": [x, y, z], "stages": [s, t], "elements": [ea, eb], "equation": "ladder agrees with composition" }),
                                    );
                                }
                                if s + t < pc.last {
                                    for (label, left) in
                                        [("c(φ ⊗ id) = φ c", true), ("c(id ⊗ φ) = φ c", false)]
                                    {
                                        if (left && s == pa.last) || (!left && t == pb.last) {
                                            continue;
                                        }
                                        checks += 1;
                                        let stepped = if left {
                                            lift(
                                                tr,
                                                &eng,
                                                (x, y, z),
                                                (s + 1, t),
                                                apply(&pa.bonding[s], &[(1, ea)]),
                                                vec![(1, eb)],
                                            )
                                        } else {
                                            lift(
                                                tr,
                                                &eng,
                                                (x, y, z),
                                                (s, t + 1),
                                                vec![(1, ea)],
                                                apply(&pb.bonding[t], &[(1, eb)]),
                                            )
                                        };
                                        let bonded = apply(&pc.bonding[s + t], &c);
                                        if stepped != bonded {
                                            return PropertyReport::fail(
                                                SUITE,
                                                checks,
                                                json!({ "objects": [x, y, z], "stages": [s, t], "elements": [ea, eb], "equation": label }),
                                            );
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    PropertyReport::pass(SUITE, checks)
}

/// c_{s,t} extended linearly to vectors of the two stages.
fn lift(
    tr: &PushoutTrace,
    eng: &super::Engine,
    (x, y, z): (usize, usize, usize),
    (s, t): (usize, usize),
    va: Vec<(u32, usize)>,
    vb: Vec<(u32, usize)>,
) -> Vec<(u32, usize)> {
    let base = tr.h.base();
    let mut out = Vec::new();
    for &(ca, ea) in &va {
        for &(cb, eb) in &vb {
            let c = crate::vcat::scale(
                base,
                ca,
                &crate::vcat::scale(base, cb, &tr.ladder(eng, x, y, z, s, t, ea, eb)),
            );
            out.extend(c);
        }
    }
    normalize(base, out)
}

/// Canonical comparison from the source of f ⊙ g ⊙ h to the source of (f ⊙ g) ⊙ h, required to
/// be an isomorphism compatible with both maps to the target.
pub fn verify_product_associativity(
    f: &BaseMap,
    g: &BaseMap,
    h: &BaseMap,
    mode: Mode,
) -> PropertyReport {
    const SUITE: &str = "product-associativity";
    let run = || -> Result<std::result::Result<usize, Value>> {
        let base = f.base();
        let tern = pushout_product(&[f.clone(), g.clone(), h.clone()], mode)?;
        let inner = pushout_product(&[f.clone(), g.clone()], mode)?;
        let outer = pushout_product(&[inner.map.clone(), h.clone()], mode)?;
        let pair_lay = |v: &[bool]| {
            Layout::of(
                base,
                &[
                    if v[0] { f.tgt.clone() } else { f.src.clone() },
                    if v[1] { g.tgt.clone() } else { g.src.clone() },
                ],
                mode,
            )
        };
        let mut cocone = Vec::with_capacity(tern.vertices.len());
        for v in &tern.vertices {
            let lay = Layout::of(
                base,
                &[
                    if v[0] { &f.tgt } else { &f.src }.clone(),
                    if v[1] { &g.tgt } else { &g.src }.clone(),
                    if v[2] { &h.tgt } else { &h.src }.clone(),
                ],
                mode,
            )?;
            let inner_lay = pair_lay(&v[..2])?;
            let top = v[0] && v[1];
            // Outer vertex: bit 0 is the inner arrow, bit 1 is h.
            let ov = [top, v[2]];
            let outer_lay = Layout::of(
                base,
                &[
                    if top {
                        inner.target.clone()
                    } else {
                        inner.source.clone()
                    },
                    if v[2] { h.tgt.clone() } else { h.src.clone() },
                ],
                mode,
            )?;
            let leg = &outer.colim.legs[outer.vertex_index(&ov)];
            cocone.push(lay.map_to(&outer.source, |tuple| {
                let Some(j) = inner_lay.encode(&tuple[..2]) else {
                    return Ok(vec![]);
                };
                let first = if top {
                    vec![(1, j)]
                } else {
                    inner.colim.legs[inner.vertex_index(&v[..2])].apply_basis(j)
                };
                let w = normalize(
                    base,
                    tensor_vectors(&outer_lay, &[first, vec![(1, tuple[2])]]),
                );
                Ok(apply(leg, &w))
            })?);
        }
        let comparison = tern.colim.induce_checked(&cocone, &outer.source)?;
        if !comparison.is_iso() {
            return Ok(Err(json!({ "error": "comparison is not an isomorphism" })));
        }
        let flat = Layout::of(base, &[f.tgt.clone(), g.tgt.clone(), h.tgt.clone()], mode)?;
        let inner_t = Layout::of(base, &[f.tgt.clone(), g.tgt.clone()], mode)?;
        let outer_t = Layout::of(base, &[inner.target.clone(), h.tgt.clone()], mode)?;
        let regroup = flat.map_to(&outer.target, |t| {
            let Some(j) = inner_t.encode(&t[..2]) else {
                return Ok(vec![]);
            };
            Ok(normalize(
                base,
                tensor_vectors(&outer_t, &[vec![(1, j)], vec![(1, t[2])]]),
            ))
        })?;
        if outer.map.after(&comparison)? != regroup.after(&tern.map)? {
            return Ok(Err(
                json!({ "error": "comparison does not commute with the push-out product maps" }),
            ));
        }
        Ok(Ok(2))
    };
    match run() {
        Ok(Ok(n)) => PropertyReport::pass(SUITE, n),
        Ok(Err(w)) => PropertyReport::fail(SUITE, 1, w),
        Err(e) => fail_err(SUITE, e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::Complex;
    use crate::colimits::{pushout_along_free, Attachment};
    use crate::vcat::VCategory;

    fn set_map(n: usize, m: usize, t: Vec<usize>) -> BaseMap {
        BaseMap::set(BaseValue::Set(n), BaseValue::Set(m), t).unwrap()
    }

    #[test]
    fn degenerate_square_with_identity_legs() {
        let f = set_map(2, 3, vec![0, 2]);
        let id2 = BaseMap::identity(&BaseValue::Set(2));
        let id3 = BaseMap::identity(&BaseValue::Set(3));
        let sq = BaseSquare {
            top: f.clone(),
            left: id2,
            right: id3,
            bottom: f,
        };
        assert!(verify_pushout_square(&Square::Base(sq)).passed());
    }

    #[test]
    fn non_pushout_is_caught() {
        // 1 ← 1 → 1 with corner 2: not a push-out.
        let one = set_map(1, 1, vec![0]);
        let into2 = set_map(1, 2, vec![0]);
        let sq = BaseSquare {
            top: one.clone(),
            left: one,
            right: into2.clone(),
            bottom: into2,
        };
        assert!(verify_pushout_square(&Square::Base(sq)).failed());
    }

    #[test]
    fn point_glued_to_two_points() {
        let sq = pushout_square(&set_map(1, 2, vec![0]), &set_map(1, 2, vec![0])).unwrap();
        assert_eq!(sq.right.tgt, BaseValue::Set(3));
        assert!(verify_pushout_square(&Square::Base(sq)).passed());
    }

    #[test]
    fn chain_product_square() {
        let (p, lo, hi) = (2, 0, 2);
        let s0 = BaseValue::Chain(Complex::sphere(p, lo, hi, 0).unwrap());
        let d1 = BaseValue::Chain(Complex::disk(p, lo, hi, 1).unwrap());
        let zero = BaseValue::Chain(Complex::zero(p, lo, hi));
        let inc = crate::base::generating_sets(Base::Chain { p, lo, hi })
            .0
            .into_iter()
            .find(|g| g.map.src == s0 && g.map.tgt == d1)
            .unwrap()
            .map;
        let s1 = pushout_square(&inc, &BaseMap::identity(&s0)).unwrap();
        let s2 =
            pushout_square(&BaseMap::from_initial(&s0), &BaseMap::from_initial(&zero)).unwrap();
        assert!(verify_product_square(&s1, &s2, Mode::Truncate).passed());
        assert!(verify_product_square(&s1, &s1, Mode::Truncate).passed());
    }

    #[test]
    fn associativity_on_inclusions() {
        let f = set_map(1, 2, vec![0]);
        let g = set_map(0, 1, vec![]);
        assert!(verify_product_associativity(&f, &f, &f, Mode::Strict).passed());
        assert!(verify_product_associativity(&f, &g, &f, Mode::Strict).passed());
    }

    #[test]
    fn free_arrow_square() {
        let h = VCategory::unit(Base::FinSet, vec!["a".into(), "b".into()]);
        let att = Attachment {
            a: 0,
            b: 1,
            f: BaseMap::from_initial(&BaseValue::Set(1)),
            gbar: BaseMap::from_initial(h.hom(0, 1)),
        };
        let tr = pushout_along_free(&h, &att, 3).unwrap();
        let r = verify_pushout_square(&Square::Free(&tr));
        assert!(r.passed(), "{r:?}");
    }
}
