//! Brute-force push-outs along free arrows over FinSet and Bool, by word rewriting.
//!
//! Morphisms x → y of the push-out are words `h0 v1 h1 … vn hn` read left to right in order of
//! application: `h0 ∈ H(x,a)`, `vi ∈ V`, `hi ∈ H(b,a)` in the middle, `hn ∈ H(b,y)`; a word with no
//! letters from V is a single `h ∈ H(x,y)`. Consecutive H-letters are already composed, so the
//! only relations left are `f(u) = ḡ(u)`, applied at every position of every word up to the bound.

use std::collections::HashMap;

use serde_json::json;

use crate::base::{Base, BaseValue};
use crate::error::{Error, Result};
use crate::report::{PropertyReport, SkipReason};
use crate::vcat::VCategory;

use super::engine::{Attachment, PushoutTrace};

pub type Word = Vec<usize>;

/// Union-find over word indices.
#[derive(Clone, Debug)]
struct Classes {
    parent: Vec<usize>,
}

impl Classes {
    fn new(n: usize) -> Classes {
        Classes {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = i;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, i: usize, j: usize) {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri != rj {
            let (lo, hi) = if ri < rj { (ri, rj) } else { (rj, ri) };
            self.parent[hi] = lo;
        }
    }
}

/// All words of one hom, with their congruence classes.
#[derive(Clone, Debug)]
pub struct WordHom {
    pub words: Vec<Word>,
    /// Class index of each word; classes are numbered by their shortest, first-enumerated word.
    pub class: Vec<usize>,
    pub classes: usize,
    /// Every class meets a word with fewer than `bound` letters from V.
    pub complete: bool,
}

#[derive(Clone, Debug)]
pub enum Oracle {
    /// Reachability in the preorder generated by H and the new arrow.
    Bool { n: usize, reach: Vec<bool> },
    Sets {
        n: usize,
        homs: Vec<WordHom>,
        bound: usize,
    },
}

fn set_size(v: &BaseValue) -> Result<usize> {
    match v {
        BaseValue::Set(n) => Ok(*n),
        _ => Err(Error::Unsupported("word oracle needs finite sets".into())),
    }
}

fn compose(h: &VCategory, x: usize, y: usize, z: usize, g: usize, f: usize) -> usize {
    h.compose_basis(x, y, z, g, f)[0].1
}

/// Words x → y with at most `bound` letters from V.
fn enumerate(
    h: &VCategory,
    att: &Attachment,
    x: usize,
    y: usize,
    bound: usize,
) -> Result<Vec<Word>> {
    let (a, b) = (att.a, att.b);
    let nv = set_size(&att.f.tgt)?;
    let mut out: Vec<Word> = (0..set_size(h.hom(x, y))?).map(|e| vec![e]).collect();
    for n in 1..=bound {
        // Letter alphabets in order: H(x,a), V, H(b,a), V, …, V, H(b,y).
        let mut sizes = vec![set_size(h.hom(x, a))?];
        for i in 1..=n {
            sizes.push(nv);
            sizes.push(if i == n {
                set_size(h.hom(b, y))?
            } else {
                set_size(h.hom(b, a))?
            });
        }
        if sizes.contains(&0) {
            continue;
        }
        let mut w = vec![0; sizes.len()];
        'odo: loop {
            out.push(w.clone());
            for k in (0..w.len()).rev() {
                w[k] += 1;
                if w[k] < sizes[k] {
                    continue 'odo;
                }
                w[k] = 0;
            }
            break;
        }
    }
    Ok(out)
}

/// Runs the congruence closure on words with at most `bound` letters from V.
pub fn congruence_oracle(h: &VCategory, att: &Attachment, bound: usize) -> Result<Oracle> {
    let n = h.len();
    match h.base() {
        Base::Bool => {
            let mut reach: Vec<bool> = (0..n * n)
                .map(|i| !h.hom(i / n, i % n).is_initial())
                .collect();
            if !att.f.tgt.is_initial() {
                reach[att.a * n + att.b] = true;
            }
            for z in 0..n {
                for x in 0..n {
                    for y in 0..n {
                        if reach[x * n + z] && reach[z * n + y] {
                            reach[x * n + y] = true;
                        }
                    }
                }
            }
            Ok(Oracle::Bool { n, reach })
        }
        Base::FinSet => {
            let (a, b) = (att.a, att.b);
            let (f, gbar) = (att.f.table(), att.gbar.table());
            let mut homs = Vec::with_capacity(n * n);
            for x in 0..n {
                for y in 0..n {
                    let words = enumerate(h, att, x, y, bound)?;
                    let index: HashMap<&Word, usize> =
                        words.iter().enumerate().map(|(i, w)| (w, i)).collect();
                    let mut uf = Classes::new(words.len());
                    for (wi, w) in words.iter().enumerate() {
                        let len = (w.len() - 1) / 2;
                        for i in 1..=len {
                            let v = w[2 * i - 1];
                            for (u, _) in f.iter().enumerate().filter(|&(_, &fu)| fu == v) {
                                let src = if i == 1 { x } else { b };
                                let tgt = if i == len { y } else { a };
                                let left = compose(h, src, a, b, gbar[u], w[2 * i - 2]);
                                let merged = compose(h, src, b, tgt, w[2 * i], left);
                                let mut shorter = w[..2 * i - 2].to_vec();
                                shorter.push(merged);
                                shorter.extend_from_slice(&w[2 * i + 1..]);
                                uf.union(wi, index[&shorter]);
                            }
                        }
                    }
                    let mut number: HashMap<usize, usize> = HashMap::new();
                    let mut class = Vec::with_capacity(words.len());
                    let mut short = Vec::new();
                    for (wi, w) in words.iter().enumerate() {
                        let r = uf.find(wi);
                        let next = number.len();
                        let c = *number.entry(r).or_insert(next);
                        if c == short.len() {
                            short.push(false);
                        }
                        if (w.len() - 1) / 2 < bound {
                            short[c] = true;
                        }
                        class.push(c);
                    }
                    let complete = short.iter().all(|&s| s);
                    homs.push(WordHom {
                        words,
                        class,
                        classes: number.len(),
                        complete,
                    });
                }
            }
            Ok(Oracle::Sets { n, homs, bound })
        }
        Base::Chain { .. } => Err(Error::Unsupported(
            "word oracle covers FinSet and Bool".into(),
        )),
    }
}

impl Oracle {
    pub fn complete(&self) -> bool {
        match self {
            Oracle::Bool { .. } => true,
            Oracle::Sets { homs, .. } => homs.iter().all(|h| h.complete),
        }
    }

    /// Hom sizes of the oracle category, row-major.
    pub fn sizes(&self) -> Vec<usize> {
        match self {
            Oracle::Bool { reach, .. } => reach.iter().map(|&r| r as usize).collect(),
            Oracle::Sets { homs, .. } => homs.iter().map(|h| h.classes).collect(),
        }
    }
}

/// Image of a word in the engine's result: the composite of φ and g′ on its letters.
fn word_image(tr: &PushoutTrace, x: usize, y: usize, w: &[usize]) -> Result<usize> {
    let r = tr.require()?;
    let (a, b) = (tr.att.a, tr.att.b);
    let phi = |s: usize, t: usize, e: usize| r.phi.comp(s, t).table()[e];
    if w.len() == 1 {
        return Ok(phi(x, y, w[0]));
    }
    let len = (w.len() - 1) / 2;
    let mut acc = phi(x, a, w[0]);
    for i in 1..=len {
        let v = r.g_adj.table()[w[2 * i - 1]];
        acc = r.k.compose_basis(x, a, b, v, acc)[0].1;
        let tgt = if i == len { y } else { a };
        acc = r.k.compose_basis(x, b, tgt, phi(b, tgt, w[2 * i]), acc)[0].1;
    }
    Ok(acc)
}

/// Compares a stabilized trace with the word oracle: the functor from words to the result must
/// be constant on classes and bijective on every hom.
pub fn compare_with_oracle(tr: &PushoutTrace, bound: usize) -> PropertyReport {
    const SUITE: &str = "oracle-equivalence";
    if !tr.stabilized {
        return PropertyReport::skipped(SUITE, SkipReason::Truncation, "trace did not stabilize");
    }
    let oracle = match congruence_oracle(&tr.h, &tr.att, bound) {
        Ok(o) => o,
        Err(Error::Unsupported(m)) => {
            return PropertyReport::skipped(SUITE, SkipReason::Unsupported, m)
        }
        Err(e) => return PropertyReport::fail(SUITE, 0, json!({ "error": e.to_string() })),
    };
    let r = match tr.require() {
        Ok(r) => r,
        Err(e) => return PropertyReport::fail(SUITE, 0, json!({ "error": e.to_string() })),
    };
    let mut checks = 0;
    match &oracle {
        Oracle::Bool { n, reach } => {
            for x in 0..*n {
                for y in 0..*n {
                    checks += 1;
                    if reach[x * n + y] == r.k.hom(x, y).is_initial() {
                        return PropertyReport::fail(
                            SUITE,
                            checks,
                            json!({ "pair": [x, y], "oracle": reach[x * n + y] }),
                        );
                    }
                }
            }
        }
        Oracle::Sets { n, homs, .. } => {
            if !oracle.complete() {
                return PropertyReport::fail(
                    SUITE,
                    0,
                    json!({ "error": "oracle classes need longer words than the bound" }),
                );
            }
            for x in 0..*n {
                for y in 0..*n {
                    let wh = &homs[x * n + y];
                    let size = r.k.hom(x, y).size();
                    checks += 1;
                    if size != wh.classes {
                        return PropertyReport::fail(
                            SUITE,
                            checks,
                            json!({ "pair": [x, y], "engine": size, "oracle": wh.classes }),
                        );
                    }
                    let mut image: Vec<Option<usize>> = vec![None; wh.classes];
                    for (w, &c) in wh.words.iter().zip(&wh.class) {
                        let e = match word_image(tr, x, y, w) {
                            Ok(e) => e,
                            Err(e) => {
                                return PropertyReport::fail(
                                    SUITE,
                                    checks,
                                    json!({ "error": e.to_string() }),
                                )
                            }
                        };
                        checks += 1;
                        match image[c] {
                            None => image[c] = Some(e),
                            Some(prev) if prev != e => {
                                return PropertyReport::fail(
                                    SUITE,
                                    checks,
                                    json!({ "pair": [x, y], "word": w, "images": [prev, e] }),
                                );
                            }
                            _ => {}
                        }
                    }
                    let mut hit = vec![false; size];
                    for e in image.into_iter().flatten() {
                        checks += 1;
                        if std::mem::replace(&mut hit[e], true) {
                            return PropertyReport::fail(
                                SUITE,
                                checks,
                                json!({ "pair": [x, y], "collapsed": e }),
                            );
                        }
                    }
                }
            }
        }
    }
    PropertyReport::pass(SUITE, checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::BaseMap;
    use crate::colimits::pushout_along_free;

    fn discrete(n: usize) -> VCategory {
        VCategory::unit(Base::FinSet, (0..n).map(|i| i.to_string()).collect())
    }

    #[test]
    fn free_arrow_has_one_class_per_hom() {
        let h = discrete(2);
        let u = BaseValue::Set(0);
        let att = Attachment {
            a: 0,
            b: 1,
            f: BaseMap::from_initial(&BaseValue::Set(1)),
            gbar: BaseMap::from_initial(h.hom(0, 1)),
        };
        assert_eq!(att.f.src, u);
        let o = congruence_oracle(&h, &att, 3).unwrap();
        assert_eq!(o.sizes(), vec![1, 1, 0, 1]);
        assert!(o.complete());
        let tr = pushout_along_free(&h, &att, 3).unwrap();
        assert!(compare_with_oracle(&tr, 4).passed());
    }

    #[test]
    fn free_loop_is_incomplete() {
        let h = discrete(1);
        let att = Attachment {
            a: 0,
            b: 0,
            f: BaseMap::from_initial(&BaseValue::Set(1)),
            gbar: BaseMap::from_initial(h.hom(0, 0)),
        };
        let o = congruence_oracle(&h, &att, 3).unwrap();
        assert_eq!(o.sizes(), vec![4]);
        assert!(!o.complete());
    }

    #[test]
    fn identified_loop_collapses() {
        let h = discrete(1);
        let one = BaseValue::Set(1);
        let att = Attachment {
            a: 0,
            b: 0,
            f: BaseMap::identity(&one),
            gbar: BaseMap::identity(&one),
        };
        let o = congruence_oracle(&h, &att, 3).unwrap();
        assert_eq!(o.sizes(), vec![1]);
        assert!(o.complete());
    }
}
