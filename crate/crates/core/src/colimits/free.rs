//! Free V-categories T_S(M) by word length.

use std::collections::HashMap;

use crate::base::{tensor_vectors, BaseMap, BaseValue, Layout, Mode, Sum};
use crate::error::{Error, Result};
use crate::graph::{GraphMap, VGraph};
use crate::vcat::{apply, VCategory, VFunctor, Vector};

/// Paths `z0 → z1 → … → zn` with their tensors `M(z_{n-1}, z_n) ⊗ … ⊗ M(z0, z1)`,
/// summed per pair in order of length, then lexicographically.
#[derive(Clone, Debug)]
pub struct PathSums {
    pub graph: VGraph,
    pub mode: Mode,
    pub word_bound: usize,
    /// Per pair: paths, their layouts, the sum, and a path index.
    pub paths: Vec<Vec<Vec<usize>>>,
    pub layouts: Vec<Vec<Layout>>,
    pub sums: Vec<Sum>,
    lookup: Vec<HashMap<Vec<usize>, usize>>,
}

fn path_factors(m: &VGraph, path: &[usize]) -> Vec<BaseValue> {
    (0..path.len() - 1)
        .rev()
        .map(|i| m.hom(path[i], path[i + 1]).clone())
        .collect()
}

fn paths_between(k: usize, x: usize, y: usize, len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return if x == y { vec![vec![x]] } else { vec![] };
    }
    let mut out = Vec::new();
    let inner = len - 1;
    let total = k.pow(inner as u32);
    for code in 0..total {
        let mut p = vec![x];
        let mut c = code;
        let mut mids = vec![0; inner];
        for j in (0..inner).rev() {
            mids[j] = c % k;
            c /= k;
        }
        p.extend(mids);
        p.push(y);
        out.push(p);
    }
    out
}

impl PathSums {
    pub fn new(m: &VGraph, word_bound: usize, mode: Mode) -> Result<PathSums> {
        let k = m.len();
        let mut paths = Vec::with_capacity(k * k);
        let mut layouts = Vec::with_capacity(k * k);
        let mut sums = Vec::with_capacity(k * k);
        let mut lookup = Vec::with_capacity(k * k);
        for x in 0..k {
            for y in 0..k {
                let ps: Vec<Vec<usize>> = (0..=word_bound)
                    .flat_map(|n| paths_between(k, x, y, n))
                    .collect();
                let ls: Vec<Layout> = ps
                    .iter()
                    .map(|p| Layout::of(m.base, &path_factors(m, p), mode))
                    .collect::<Result<_>>()?;
                sums.push(Sum::new(
                    m.base,
                    ls.iter().map(|l| l.value.clone()).collect(),
                )?);
                lookup.push(ps.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect());
                paths.push(ps);
                layouts.push(ls);
            }
        }
        Ok(PathSums {
            graph: m.clone(),
            mode,
            word_bound,
            paths,
            layouts,
            sums,
            lookup,
        })
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    fn pair(&self, x: usize, y: usize) -> usize {
        x * self.len() + y
    }

    pub fn hom(&self, x: usize, y: usize) -> &BaseValue {
        &self.sums[self.pair(x, y)].value
    }

    /// Path and factor tuple of a basis element of hom(x, y).
    pub fn decode(&self, x: usize, y: usize, i: usize) -> (&[usize], Vec<usize>) {
        let p = self.pair(x, y);
        let (s, j) = self.sums[p].split(i);
        (&self.paths[p][s], self.layouts[p][s].decode(j))
    }

    /// Flat index of a path element, if the path is within the bound and the tuple
    /// survives the window.
    pub fn encode(&self, path: &[usize], tuple: &[usize]) -> Option<usize> {
        let (x, y) = (path[0], *path.last().unwrap());
        let p = self.pair(x, y);
        let s = *self.lookup[p].get(path)?;
        self.layouts[p][s]
            .encode(tuple)
            .map(|j| self.sums[p].inj(s, j))
    }

    /// Whether every path tensor of length `n` vanishes.
    pub fn length_vanishes(&self, n: usize) -> Result<bool> {
        let k = self.len();
        for x in 0..k {
            for y in 0..k {
                for p in paths_between(k, x, y, n) {
                    if Layout::of(self.graph.base, &path_factors(&self.graph, &p), self.mode)?
                        .value
                        .size()
                        > 0
                    {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug)]
pub struct FreeCategoryResult {
    pub sums: PathSums,
    /// Present iff the word filtration stabilized within the bound.
    pub category: Option<VCategory>,
    /// Hom sizes of T_S(M) at the bound, a graph even when not stabilized.
    pub graph: VGraph,
    /// Per pair: total size of the length-n summands for n = 0..=word_bound.
    pub stages: Vec<Vec<usize>>,
    pub stabilized: bool,
    pub word_bound: usize,
}

pub fn free_category(m: &VGraph, word_bound: usize, mode: Mode) -> Result<FreeCategoryResult> {
    let sums = PathSums::new(m, word_bound, mode)?;
    let stabilized = sums.length_vanishes(word_bound + 1)?;
    let k = m.len();
    let graph = VGraph::new(
        m.base,
        m.objects.clone(),
        sums.sums.iter().map(|s| s.value.clone()).collect(),
    )?;
    let stages = (0..k * k)
        .map(|p| {
            (0..=word_bound)
                .map(|n| {
                    sums.paths[p]
                        .iter()
                        .zip(&sums.layouts[p])
                        .filter(|(q, _)| q.len() == n + 1)
                        .map(|(_, l)| l.value.size())
                        .sum()
                })
                .collect()
        })
        .collect();
    let category = if stabilized {
        let s = &sums;
        Some(VCategory::from_rule(
            graph.clone(),
            mode,
            |x, y, z, a, b| {
                let (pa, ta) = s.decode(y, z, a);
                let (pb, tb) = s.decode(x, y, b);
                let mut path = pb.to_vec();
                path.extend_from_slice(&pa[1..]);
                let mut tuple = ta;
                tuple.extend(tb);
                s.encode(&path, &tuple)
                    .map(|j| vec![(1, j)])
                    .unwrap_or_default()
            },
            |x| vec![(1, s.encode(&[x], &[]).expect("empty path"))],
        )?)
    } else {
        None
    };
    Ok(FreeCategoryResult {
        sums,
        category,
        graph,
        stages,
        stabilized,
        word_bound,
    })
}

impl FreeCategoryResult {
    /// The unit M → T_S(M): inclusion of the length-one summands.
    pub fn unit(&self) -> Result<GraphMap> {
        let m = &self.sums.graph;
        let k = m.len();
        let mut comps = Vec::with_capacity(k * k);
        for x in 0..k {
            for y in 0..k {
                let path = [x, y];
                comps.push(crate::base::build_map(
                    m.hom(x, y),
                    self.graph.hom(x, y),
                    |i| {
                        Ok(self
                            .sums
                            .encode(&path, &[i])
                            .map(|j| vec![(1, j)])
                            .unwrap_or_default())
                    },
                )?);
            }
        }
        GraphMap::new(m.clone(), self.graph.clone(), (0..k).collect(), comps)
    }

    fn require(&self) -> Result<&VCategory> {
        self.category
            .as_ref()
            .ok_or_else(|| Error::NotStabilized("free category exceeds its word bound".into()))
    }

    /// Adjunct of a graph map M → UH (identity on objects): the functor T_S(M) → H.
    pub fn extend(&self, g: &GraphMap, h: &VCategory) -> Result<VFunctor> {
        let t = self.require()?;
        let k = t.len();
        let mut comps = Vec::with_capacity(k * k);
        for x in 0..k {
            for y in 0..k {
                comps.push(crate::base::build_map(t.hom(x, y), h.hom(x, y), |i| {
                    let (path, tuple) = self.sums.decode(x, y, i);
                    // Compose g(e_1), …, g(e_n) in path order, starting from the identity.
                    let mut acc: Vector = h.identity_vec(path[0]);
                    let n = path.len() - 1;
                    for step in 0..n {
                        let (u, v) = (path[step], path[step + 1]);
                        let e = tuple[n - 1 - step];
                        acc = h.compose(path[0], u, v, &g.comp(u, v).apply_basis(e), &acc);
                    }
                    Ok(acc)
                })?);
            }
        }
        VFunctor::new(t.clone(), h.clone(), (0..k).collect(), comps)
    }

    /// Adjunct of a functor T_S(M) → H: its restriction along the unit.
    pub fn restrict(&self, f: &VFunctor) -> Result<GraphMap> {
        let unit = self.unit()?;
        let k = unit.src.len();
        let mut comps = Vec::with_capacity(k * k);
        for x in 0..k {
            for y in 0..k {
                let u = unit.comp(x, y);
                comps.push(crate::base::build_map(&u.src, f.tgt.hom(x, y), |i| {
                    Ok(apply(f.comp(x, y), &u.apply_basis(i)))
                })?);
            }
        }
        GraphMap::new(
            unit.src.clone(),
            f.tgt.graph.clone(),
            (0..k).collect(),
            comps,
        )
    }
}

/// The image under T_S of a graph map over the same objects, on paths of length ≤ bound.
pub fn free_map(
    src: &FreeCategoryResult,
    tgt: &FreeCategoryResult,
    f: &GraphMap,
) -> Result<Vec<BaseMap>> {
    let k = src.graph.len();
    let mut comps = Vec::with_capacity(k * k);
    for x in 0..k {
        for y in 0..k {
            comps.push(crate::base::build_map(
                src.graph.hom(x, y),
                tgt.graph.hom(x, y),
                |i| {
                    let (path, tuple) = src.sums.decode(x, y, i);
                    let n = path.len() - 1;
                    let parts: Vec<Vector> = (0..n)
                        .map(|j| {
                            let (u, v) = (path[n - 1 - j], path[n - j]);
                            f.comp(u, v).apply_basis(tuple[j])
                        })
                        .collect();
                    let p = tgt.sums.pair(x, y);
                    let Some(&s) = tgt.sums.lookup[p].get(path) else {
                        return Ok(vec![]);
                    };
                    let img = tensor_vectors(&tgt.sums.layouts[p][s], &parts);
                    Ok(img
                        .into_iter()
                        .map(|(c, j)| (c, tgt.sums.sums[p].inj(s, j)))
                        .collect())
                },
            )?);
        }
    }
    Ok(comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{Base, Complex};
    use crate::vcat::validate_category;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn free_on_one_arrow() {
        let m = VGraph::from_fn(Base::FinSet, labels(2), |x, y| {
            BaseValue::Set((x == 0 && y == 1) as usize)
        });
        let r = free_category(&m, 1, Mode::Strict).unwrap();
        assert!(r.stabilized);
        let t = r.category.unwrap();
        assert!(validate_category(&t).passed());
        assert_eq!(t.hom(0, 1), &BaseValue::Set(1));
        assert_eq!(t.hom(1, 0), &BaseValue::Set(0));
        assert_eq!(t.hom(0, 0), &BaseValue::Set(1));
    }

    #[test]
    fn free_monoid_on_a_point_is_truncated() {
        let m = VGraph::from_fn(Base::FinSet, labels(1), |_, _| BaseValue::Set(1));
        let r = free_category(&m, 3, Mode::Strict).unwrap();
        assert!(!r.stabilized);
        assert_eq!(r.graph.hom(0, 0), &BaseValue::Set(4));
    }

    #[test]
    fn tensor_algebra_on_degree_one_generator() {
        let b = Base::chain(2, 0, 4);
        let v = BaseValue::Chain(Complex::concentrated(2, 0, 4, 1, 1).unwrap());
        let m = VGraph::from_fn(b, labels(1), |_, _| v.clone());
        let r = free_category(&m, 4, Mode::Truncate).unwrap();
        assert!(r.stabilized);
        assert_eq!(r.graph.hom(0, 0).as_chain().dims, vec![1, 1, 1, 1, 1]);
        assert!(validate_category(r.category.as_ref().unwrap()).passed());
    }

    #[test]
    fn empty_graph_gives_unit_category() {
        let m = VGraph::initial(Base::Bool, labels(2));
        let r = free_category(&m, 0, Mode::Strict).unwrap();
        assert_eq!(r.category.unwrap(), VCategory::unit(Base::Bool, labels(2)));
    }
}
