//! Push-outs in Cat(V) along cell-presented maps: new disconnected objects, then free
//! attachments one at a time in the common fiber.

use serde_json::json;

use crate::base::{build_map, BaseMap};
use crate::error::{Error, Result};
use crate::report::{PropertyReport, SkipReason};
use crate::vcat::{cat_pushforward_injective, VCategory, VFunctor, Vector};

use super::engine::{pushout_along_free, Attachment, PushoutTrace};

/// One cell of a presented map.
#[derive(Clone, Debug)]
pub enum Cell {
    /// Push-out along ∅ → 1: a disconnected object with trivial endomorphisms.
    Object { label: String },
    /// Push-out along T(f) at (a, b), attached by ḡ: U → K(a, b) of the current category.
    Free(Attachment),
}

/// The composed square of a cell-by-cell push-out.
#[derive(Clone, Debug)]
pub struct CatPushout {
    pub result: VCategory,
    /// The pushed leg H → K.
    pub leg: VFunctor,
    /// For each free cell, its trace and the image of V in the final category.
    pub traces: Vec<PushoutTrace>,
    pub new_arrows: Vec<BaseMap>,
}

/// Evaluates the push-out of H along the presented cells, in order.
pub fn pushout_cat(h: &VCategory, cells: &[Cell], stage_bound: usize) -> Result<CatPushout> {
    let mut cur = h.clone();
    let mut leg = VFunctor::identity(h);
    let mut traces = Vec::new();
    let mut new_arrows: Vec<BaseMap> = Vec::new();
    let mut ends: Vec<(usize, usize)> = Vec::new();
    for cell in cells {
        let (step, added) = match cell {
            Cell::Object { label } => (add_object(&cur, label)?.1, None),
            Cell::Free(att) => {
                let tr = pushout_along_free(&cur, att, stage_bound)?;
                let r = tr.require()?.clone();
                traces.push(tr);
                (r.phi, Some(((att.a, att.b), r.g_adj)))
            }
        };
        // Object indices survive every step, so earlier arrows just move along it.
        for (w, &(a, b)) in new_arrows.iter_mut().zip(&ends) {
            *w = step.comp(a, b).after(w)?;
        }
        if let Some((e, w)) = added {
            ends.push(e);
            new_arrows.push(w);
        }
        leg = step.after(&leg)?;
        cur = step.tgt.clone();
    }
    Ok(CatPushout {
        result: cur,
        leg,
        traces,
        new_arrows,
    })
}

/// The functor out of a push-out along a free V-functor induced by `F: H → L` and
/// `w: V → L(Fa, Fb)`, defined stage by stage; every stage checks the gluing relations.
pub fn induce_functor(tr: &PushoutTrace, func: &VFunctor, w: &BaseMap) -> Result<VFunctor> {
    let r = tr.require()?;
    let (h, l) = (&tr.h, &func.tgt);
    let fo = func.objmap();
    let (a, b) = (tr.att.a, tr.att.b);
    let n = h.len();
    let mut comps = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let ps = tr.pair(x, y);
            let tgt = l.hom(fo[x], fo[y]);
            let mut cur = func.comp(x, y).clone();
            for t in 1..=ps.last {
                let q = ps.q[t].map_to(tgt, |tuple| {
                    let mut acc: Vector = func.comp(x, a).apply_basis(tuple[2 * t]);
                    for i in (1..=t).rev() {
                        acc =
                            l.compose(fo[x], fo[a], fo[b], &w.apply_basis(tuple[2 * i - 1]), &acc);
                        let (hv, to) = (tuple[2 * i - 2], if i == 1 { y } else { a });
                        acc = l.compose(
                            fo[x],
                            fo[b],
                            fo[to],
                            &func.comp(b, to).apply_basis(hv),
                            &acc,
                        );
                    }
                    Ok(acc)
                })?;
                cur = ps.colims[t - 1].induce_checked(&[cur, q], tgt)?;
            }
            comps.push(cur);
        }
    }
    VFunctor::new(r.k.clone(), l.clone(), fo.to_vec(), comps)
}

/// The functor out of a cell-by-cell push-out induced by a functor on H and images of the new
/// objects and arrows.
pub fn induce_from_cells(
    p: &CatPushout,
    h: &VCategory,
    cells: &[Cell],
    func: &VFunctor,
    objects: &[usize],
    arrows: &[BaseMap],
) -> Result<VFunctor> {
    let mut cur = func.clone();
    let mut cur_src = h.clone();
    let (mut next_obj, mut next_arrow) = (0, 0);
    for cell in cells {
        match cell {
            Cell::Object { label } => {
                let (k, _) = add_object(&cur_src, label)?;
                let image = *objects
                    .get(next_obj)
                    .ok_or_else(|| Error::Malformed("missing object image".into()))?;
                next_obj += 1;
                cur = extend_by_object(&cur, &k, image)?;
                cur_src = k;
            }
            Cell::Free(_) => {
                let tr = &p.traces[next_arrow];
                let w = arrows
                    .get(next_arrow)
                    .ok_or_else(|| Error::Malformed("missing arrow image".into()))?;
                next_arrow += 1;
                cur = induce_functor(tr, &cur, w)?;
                cur_src = tr.require()?.k.clone();
            }
        }
    }
    Ok(cur)
}

/// Extends `func: K → L` to K with one more disconnected object, sent to `image`.
fn extend_by_object(func: &VFunctor, k: &VCategory, image: usize) -> Result<VFunctor> {
    let mut om = func.objmap().to_vec();
    om.push(image);
    let l = func.tgt.clone();
    let n = k.len();
    let mut comps = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let src = k.hom(x, y);
            let tgt = l.hom(om[x], om[y]);
            comps.push(if x < n - 1 && y < n - 1 {
                func.comp(x, y).clone()
            } else if x == y {
                build_map(src, tgt, |_| Ok(l.identity_vec(om[x])))?
            } else {
                BaseMap::from_initial(tgt)
            });
        }
    }
    VFunctor::new(k.clone(), l, om, comps)
}

fn add_object(k: &VCategory, label: &str) -> Result<(VCategory, VFunctor)> {
    let mut objects = k.objects().to_vec();
    if objects.iter().any(|o| o == label) {
        return Err(Error::Malformed(format!("object {label} already exists")));
    }
    objects.push(label.into());
    cat_pushforward_injective(objects, &(0..k.len()).collect::<Vec<_>>(), k)
}

/// The push-out of a functor ϕ: H → H′ along cells on H: the same cells attached to H′ through
/// ϕ, and the induced ϕ′: K → K′.
#[derive(Clone, Debug)]
pub struct PushedFunctor {
    /// H → K.
    pub leg: VFunctor,
    /// H′ → K′.
    pub leg_prime: VFunctor,
    /// ϕ′: K → K′.
    pub pushed: VFunctor,
    /// The cells as attached to H′.
    pub moved: Vec<Cell>,
}

pub fn pushout_functor(
    phi: &VFunctor,
    cells: &[Cell],
    stage_bound: usize,
) -> Result<PushedFunctor> {
    let mut f = phi.clone();
    let mut leg = VFunctor::identity(&phi.src);
    let mut leg_prime = VFunctor::identity(&phi.tgt);
    let mut moved = Vec::with_capacity(cells.len());
    for cell in cells {
        let (step, step_prime, next) = match cell {
            Cell::Object { label } => {
                let (k, step) = add_object(&f.src, label)?;
                let (kp, step_prime) = add_object(&f.tgt, label)?;
                moved.push(cell.clone());
                let next = extend_by_object(&step_prime.after(&f)?, &k, kp.len() - 1)?;
                (step, step_prime, next)
            }
            Cell::Free(att) => {
                let fo = f.objmap();
                let att_prime = Attachment {
                    a: fo[att.a],
                    b: fo[att.b],
                    f: att.f.clone(),
                    gbar: f.comp(att.a, att.b).after(&att.gbar)?,
                };
                let tr = pushout_along_free(&f.src, att, stage_bound)?;
                let tr_prime = pushout_along_free(&f.tgt, &att_prime, stage_bound)?;
                let r = tr.require()?.phi.clone();
                let rp = tr_prime.require()?;
                let next = induce_functor(&tr, &rp.phi.after(&f)?, &rp.g_adj)?;
                moved.push(Cell::Free(att_prime));
                (r, rp.phi.clone(), next)
            }
        };
        leg = step.after(&leg)?;
        leg_prime = step_prime.after(&leg_prime)?;
        f = next;
    }
    Ok(PushedFunctor {
        leg,
        leg_prime,
        pushed: f,
        moved,
    })
}

fn is_identity(f: &VFunctor) -> bool {
    f.objmap().iter().enumerate().all(|(i, &j)| i == j)
        && f.map.comps.iter().all(|c| c.is_identity())
}

/// Pasting law on an instance: attaching two free cells in either order gives isomorphic
/// categories under H, with mutually inverse comparison functors induced by universal properties.
/// The second attachment map must factor through H: `second.gbar` lands in H.
pub fn verify_pasting(
    h: &VCategory,
    first: &Attachment,
    second: &Attachment,
    stage_bound: usize,
) -> PropertyReport {
    const SUITE: &str = "pasting";
    let run = || -> Result<std::result::Result<usize, serde_json::Value>> {
        let order = |p: &Attachment, q: &Attachment| -> Result<(CatPushout, Vec<Cell>)> {
            let one = pushout_along_free(h, p, stage_bound)?;
            let phi = &one.require()?.phi;
            let moved = Attachment {
                gbar: phi.comp(q.a, q.b).after(&q.gbar)?,
                ..q.clone()
            };
            let cells = vec![Cell::Free(p.clone()), Cell::Free(moved)];
            Ok((pushout_cat(h, &cells, stage_bound)?, cells))
        };
        let (pq, cells_pq) = order(first, second)?;
        let (qp, cells_qp) = order(second, first)?;
        // PQ → QP sends the first new arrow to QP's second and vice versa.
        let to_qp = induce_from_cells(
            &pq,
            h,
            &cells_pq,
            &qp.leg,
            &[],
            &[qp.new_arrows[1].clone(), qp.new_arrows[0].clone()],
        )?;
        let to_pq = induce_from_cells(
            &qp,
            h,
            &cells_qp,
            &pq.leg,
            &[],
            &[pq.new_arrows[1].clone(), pq.new_arrows[0].clone()],
        )?;
        let mut checks = 0;
        for (label, f) in [
            ("QP → PQ → QP", to_qp.after(&to_pq)?),
            ("PQ → QP → PQ", to_pq.after(&to_qp)?),
        ] {
            checks += 1;
            if !is_identity(&f) {
                return Ok(Err(json!({ "composite": label })));
            }
        }
        for f in [&to_qp, &to_pq] {
            checks += 1;
            if f.validate().failed() {
                return Ok(Err(
                    json!({ "error": "induced comparison is not a functor" }),
                ));
            }
        }
        Ok(Ok(checks))
    };
    match run() {
        Ok(Ok(n)) => PropertyReport::pass(SUITE, n),
        Ok(Err(w)) => PropertyReport::fail(SUITE, 1, w),
        Err(Error::NotStabilized(m)) => PropertyReport::skipped(SUITE, SkipReason::Truncation, m),
        Err(e) => PropertyReport::fail(SUITE, 0, json!({ "error": e.to_string() })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{Base, BaseValue};

    fn two_objects() -> VCategory {
        VCategory::unit(Base::FinSet, vec!["a".into(), "b".into()])
    }

    #[test]
    fn adding_an_object_is_disconnected() {
        let h = two_objects();
        let p = pushout_cat(&h, &[Cell::Object { label: "c".into() }], 2).unwrap();
        assert_eq!(p.result.len(), 3);
        assert_eq!(p.result.hom(2, 2), &BaseValue::Set(1));
        assert_eq!(p.result.hom(0, 2), &BaseValue::Set(0));
        assert!(p.leg.validate().passed());
    }

    #[test]
    fn one_free_cell_is_one_trace() {
        let h = two_objects();
        let att = Attachment {
            a: 0,
            b: 1,
            f: BaseMap::from_initial(&BaseValue::Set(1)),
            gbar: BaseMap::from_initial(h.hom(0, 1)),
        };
        let p = pushout_cat(&h, &[Cell::Free(att)], 2).unwrap();
        assert_eq!(p.traces.len(), 1);
        assert_eq!(p.result.hom(0, 1), &BaseValue::Set(1));
    }

    #[test]
    fn pushed_functor_square_commutes() {
        let h = two_objects();
        let (hp, phi) =
            cat_pushforward_injective(vec!["a".into(), "b".into(), "c".into()], &[0, 1], &h)
                .unwrap();
        let att = Attachment {
            a: 0,
            b: 1,
            f: BaseMap::from_initial(&BaseValue::Set(1)),
            gbar: BaseMap::from_initial(h.hom(0, 1)),
        };
        let cells = [Cell::Object { label: "d".into() }, Cell::Free(att)];
        let p = pushout_functor(&phi, &cells, 3).unwrap();
        assert_eq!(p.leg_prime.tgt.len(), hp.len() + 1);
        assert!(p.pushed.validate().passed());
        let lhs = p.pushed.after(&p.leg).unwrap();
        let rhs = p.leg_prime.after(&phi).unwrap();
        assert_eq!(lhs.objmap(), rhs.objmap());
        assert_eq!(lhs.map.comps, rhs.map.comps);
        assert_eq!(p.pushed.objmap(), &[0, 1, 3]);
    }

    #[test]
    fn two_free_arrows_paste_in_either_order() {
        let h = two_objects();
        let arrow = |a, b| Attachment {
            a,
            b,
            f: BaseMap::from_initial(&BaseValue::Set(1)),
            gbar: BaseMap::from_initial(h.hom(a, b)),
        };
        let r = verify_pasting(&h, &arrow(0, 1), &arrow(0, 1), 3);
        assert!(r.passed(), "{r:?}");
    }
}
