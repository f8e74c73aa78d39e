//! V-graphs over a finite object set, the tensor ⊗_S, and reindexing along set maps.

use crate::base::{
    left_unitor, right_unitor, tensor_vectors, Base, BaseMap, BaseValue, Layout, Mode,
    Presentation, Sum,
};
use crate::error::{Error, Result};

/// A V-graph: an ordered list of object labels and a hom value for every ordered pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VGraph {
    pub base: Base,
    pub objects: Vec<String>,
    /// Row-major: `homs[x * n + y]` is M(x, y).
    pub homs: Vec<BaseValue>,
}

impl VGraph {
    pub fn new(base: Base, objects: Vec<String>, homs: Vec<BaseValue>) -> Result<VGraph> {
        let g = VGraph {
            base,
            objects,
            homs,
        };
        g.validate()?;
        Ok(g)
    }

    /// The graph with every hom given by `f(x, y)`.
    pub fn from_fn(
        base: Base,
        objects: Vec<String>,
        f: impl Fn(usize, usize) -> BaseValue,
    ) -> VGraph {
        let n = objects.len();
        let homs = (0..n * n).map(|i| f(i / n, i % n)).collect();
        VGraph {
            base,
            objects,
            homs,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.objects.len();
        if self.homs.len() != n * n {
            return Err(Error::Malformed(format!(
                "graph on {n} objects needs {} homs",
                n * n
            )));
        }
        for (i, a) in self.objects.iter().enumerate() {
            if self.objects[..i].contains(a) {
                return Err(Error::Malformed(format!("duplicate object label {a:?}")));
            }
        }
        for h in &self.homs {
            if h.base() != self.base {
                return Err(Error::BaseMismatch(
                    "hom base differs from graph base".into(),
                ));
            }
            h.validate()?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn hom(&self, x: usize, y: usize) -> &BaseValue {
        &self.homs[x * self.len() + y]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == label)
            .ok_or_else(|| Error::UnknownLabel(label.into()))
    }

    /// The empty graph on `objects`, with every hom initial.
    pub fn initial(base: Base, objects: Vec<String>) -> VGraph {
        VGraph::from_fn(base, objects, |_, _| base.initial())
    }
}

/// A morphism of V-graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMap {
    pub src: VGraph,
    pub tgt: VGraph,
    pub objmap: Vec<usize>,
    /// Row-major over source pairs: component M(x, y) → N(φx, φy).
    pub comps: Vec<BaseMap>,
}

impl GraphMap {
    pub fn new(
        src: VGraph,
        tgt: VGraph,
        objmap: Vec<usize>,
        comps: Vec<BaseMap>,
    ) -> Result<GraphMap> {
        let f = GraphMap {
            src,
            tgt,
            objmap,
            comps,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.src.len();
        if self.objmap.len() != n || self.objmap.iter().any(|&o| o >= self.tgt.len()) {
            return Err(Error::Malformed(
                "object map is not a total function into the target".into(),
            ));
        }
        if self.comps.len() != n * n {
            return Err(Error::Malformed(
                "graph map needs one component per pair".into(),
            ));
        }
        for x in 0..n {
            for y in 0..n {
                let c = self.comp(x, y);
                if c.src != *self.src.hom(x, y)
                    || c.tgt != *self.tgt.hom(self.objmap[x], self.objmap[y])
                {
                    return Err(Error::Malformed(format!(
                        "component at ({}, {}) has the wrong endpoints",
                        self.src.objects[x], self.src.objects[y]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn comp(&self, x: usize, y: usize) -> &BaseMap {
        &self.comps[x * self.src.len() + y]
    }

    pub fn identity(g: &VGraph) -> GraphMap {
        GraphMap {
            src: g.clone(),
            tgt: g.clone(),
            objmap: (0..g.len()).collect(),
            comps: g.homs.iter().map(BaseMap::identity).collect(),
        }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &GraphMap) -> Result<GraphMap> {
        if first.tgt != self.src {
            return Err(Error::NotComposable("graph maps do not meet".into()));
        }
        let n = first.src.len();
        let mut comps = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let (fx, fy) = (first.objmap[x], first.objmap[y]);
                comps.push(self.comp(fx, fy).after(first.comp(x, y))?);
            }
        }
        let objmap = first.objmap.iter().map(|&o| self.objmap[o]).collect();
        Ok(GraphMap {
            src: first.src.clone(),
            tgt: self.tgt.clone(),
            objmap,
            comps,
        })
    }

    pub fn is_iso(&self) -> bool {
        let mut seen = vec![false; self.tgt.len()];
        for &o in &self.objmap {
            if seen[o] {
                return false;
            }
            seen[o] = true;
        }
        seen.iter().all(|&s| s) && self.comps.iter().all(BaseMap::is_iso)
    }
}

fn check_same_objects(m: &VGraph, n: &VGraph) -> Result<()> {
    if m.objects != n.objects {
        return Err(Error::ObjectMismatch(
            "graphs live over different object sets".into(),
        ));
    }
    if m.base != n.base {
        return Err(Error::BaseMismatch("graphs have different bases".into()));
    }
    Ok(())
}

/// M ⊗_S N with the coproduct structure of every hom kept for building maps.
#[derive(Clone, Debug)]
pub struct GraphTensor {
    pub graph: VGraph,
    pub mode: Mode,
    /// Per pair (x, y): the sum over z of M(z, y) ⊗ N(x, z).
    pub sums: Vec<Sum>,
    /// Per pair (x, y) and z: the layout of M(z, y) ⊗ N(x, z).
    pub layouts: Vec<Vec<Layout>>,
}

impl GraphTensor {
    /// Flat index in (M ⊗_S N)(x, y) of `u ⊗ v` with u ∈ M(z, y), v ∈ N(x, z).
    pub fn encode(&self, x: usize, y: usize, z: usize, u: usize, v: usize) -> Option<usize> {
        let n = self.graph.len();
        self.layouts[x * n + y][z]
            .encode(&[u, v])
            .map(|j| self.sums[x * n + y].inj(z, j))
    }

    /// Inverse of [`GraphTensor::encode`]: `(z, u, v)`.
    pub fn decode(&self, x: usize, y: usize, i: usize) -> (usize, usize, usize) {
        let n = self.graph.len();
        let (z, j) = self.sums[x * n + y].split(i);
        let t = self.layouts[x * n + y][z].decode(j);
        (z, t[0], t[1])
    }
}

/// (M ⊗_S N)(x, y) = ∐_z M(z, y) ⊗ N(x, z), summands in object order.
pub fn tensor_s(m: &VGraph, n: &VGraph) -> Result<VGraph> {
    Ok(tensor_s_with(m, n, Mode::Strict)?.graph)
}

pub fn tensor_s_with(m: &VGraph, n: &VGraph, mode: Mode) -> Result<GraphTensor> {
    check_same_objects(m, n)?;
    let k = m.len();
    let mut sums = Vec::with_capacity(k * k);
    let mut layouts = Vec::with_capacity(k * k);
    for x in 0..k {
        for y in 0..k {
            let ls: Vec<Layout> = (0..k)
                .map(|z| Layout::new(&[m.hom(z, y).clone(), n.hom(x, z).clone()], mode))
                .collect::<Result<_>>()?;
            sums.push(Sum::new(
                m.base,
                ls.iter().map(|l| l.value.clone()).collect(),
            )?);
            layouts.push(ls);
        }
    }
    let graph = VGraph {
        base: m.base,
        objects: m.objects.clone(),
        homs: sums.iter().map(|s| s.value.clone()).collect(),
    };
    Ok(GraphTensor {
        graph,
        mode,
        sums,
        layouts,
    })
}

/// f ⊗_S g for maps over the same object set with identity object maps.
pub fn tensor_s_map(f: &GraphMap, g: &GraphMap, mode: Mode) -> Result<GraphMap> {
    for h in [f, g] {
        if h.objmap.iter().enumerate().any(|(i, &o)| i != o) || h.src.objects != h.tgt.objects {
            return Err(Error::Unsupported(
                "⊗_S of maps needs identity object maps".into(),
            ));
        }
    }
    let src = tensor_s_with(&f.src, &g.src, mode)?;
    let tgt = tensor_s_with(&f.tgt, &g.tgt, mode)?;
    let k = src.graph.len();
    let mut comps = Vec::with_capacity(k * k);
    for x in 0..k {
        for y in 0..k {
            let layout = &tgt.layouts[x * k + y];
            let legs: Vec<BaseMap> = (0..k)
                .map(|z| {
                    let l = &src.layouts[x * k + y][z];
                    l.map_to(tgt.graph.hom(x, y), |t| {
                        let parts = [
                            f.comp(z, y).apply_basis(t[0]),
                            g.comp(x, z).apply_basis(t[1]),
                        ];
                        let img = tensor_vectors(&layout[z], &parts);
                        Ok(img
                            .into_iter()
                            .map(|(c, j)| (c, tgt.sums[x * k + y].inj(z, j)))
                            .collect())
                    })
                })
                .collect::<Result<_>>()?;
            comps.push(src.sums[x * k + y].copair(&legs, tgt.graph.hom(x, y))?);
        }
    }
    GraphMap::new(src.graph, tgt.graph, (0..k).collect(), comps)
}

/// The unit 1_S: the base unit on the diagonal and initial elsewhere.
pub fn unit_s(base: Base, objects: Vec<String>) -> VGraph {
    VGraph::from_fn(base, objects, |x, y| {
        if x == y {
            base.unit()
        } else {
            base.initial()
        }
    })
}

/// Canonical 1_S ⊗_S M → M.
pub fn left_unit_map(m: &VGraph, mode: Mode) -> Result<GraphMap> {
    let u = unit_s(m.base, m.objects.clone());
    let t = tensor_s_with(&u, m, mode)?;
    let k = m.len();
    let mut comps = Vec::new();
    for x in 0..k {
        for y in 0..k {
            let lu = left_unitor(m.hom(x, y), mode)?;
            let legs: Vec<BaseMap> = (0..k)
                .map(|z| {
                    let src = &t.layouts[x * k + y][z].value;
                    if z == y {
                        Ok(lu.clone())
                    } else {
                        BaseMap::zero(src, m.hom(x, y))
                    }
                })
                .collect::<Result<_>>()?;
            comps.push(t.sums[x * k + y].copair(&legs, m.hom(x, y))?);
        }
    }
    GraphMap::new(t.graph, m.clone(), (0..k).collect(), comps)
}

/// Canonical M ⊗_S 1_S → M.
pub fn right_unit_map(m: &VGraph, mode: Mode) -> Result<GraphMap> {
    let u = unit_s(m.base, m.objects.clone());
    let t = tensor_s_with(m, &u, mode)?;
    let k = m.len();
    let mut comps = Vec::new();
    for x in 0..k {
        for y in 0..k {
            let ru = right_unitor(m.hom(x, y), mode)?;
            let legs: Vec<BaseMap> = (0..k)
                .map(|z| {
                    let src = &t.layouts[x * k + y][z].value;
                    if z == x {
                        Ok(ru.clone())
                    } else {
                        BaseMap::zero(src, m.hom(x, y))
                    }
                })
                .collect::<Result<_>>()?;
            comps.push(t.sums[x * k + y].copair(&legs, m.hom(x, y))?);
        }
    }
    GraphMap::new(t.graph, m.clone(), (0..k).collect(), comps)
}

/// Canonical (M ⊗_S N) ⊗_S P → M ⊗_S (N ⊗_S P).
pub fn assoc_map(m: &VGraph, n: &VGraph, p: &VGraph, mode: Mode) -> Result<GraphMap> {
    let mn = tensor_s_with(m, n, mode)?;
    let np = tensor_s_with(n, p, mode)?;
    let src = tensor_s_with(&mn.graph, p, mode)?;
    let tgt = tensor_s_with(m, &np.graph, mode)?;
    let k = m.len();
    let mut comps = Vec::new();
    for x in 0..k {
        for y in 0..k {
            let h = tgt.graph.hom(x, y);
            let comp = crate::base::build_map(src.graph.hom(x, y), h, |i| {
                // i = (w, e ∈ (M⊗N)(w, y), c ∈ P(x, w)) with e = (z, a ∈ M(z, y), b ∈ N(w, z)).
                let (w, e, c) = src.decode(x, y, i);
                let (z, a, b) = mn.decode(w, y, e);
                Ok(np
                    .encode(x, z, w, b, c)
                    .and_then(|inner| tgt.encode(x, y, z, a, inner))
                    .map(|j| vec![(1, j)])
                    .unwrap_or_default())
            })?;
            comps.push(comp);
        }
    }
    GraphMap::new(src.graph, tgt.graph, (0..k).collect(), comps)
}

/// Reindexing f*N along `f: S → S′`, with the canonical map f*N → N.
pub fn graph_pullback(objects: Vec<String>, f: &[usize], n: &VGraph) -> Result<(VGraph, GraphMap)> {
    if f.len() != objects.len() || f.iter().any(|&o| o >= n.len()) {
        return Err(Error::Malformed(
            "set map is not total into the target object set".into(),
        ));
    }
    let g = VGraph::new(
        n.base,
        objects,
        (0..f.len() * f.len())
            .map(|i| n.hom(f[i / f.len()], f[i % f.len()]).clone())
            .collect(),
    )?;
    let comps = g.homs.iter().map(BaseMap::identity).collect();
    let map = GraphMap::new(g.clone(), n.clone(), f.to_vec(), comps)?;
    Ok((g, map))
}

/// f_*M(x, y) = ∐ over f(x′) = x, f(y′) = y of M(x′, y′), summands in lex order of (x′, y′).
#[derive(Clone, Debug)]
pub struct Pushforward {
    pub graph: VGraph,
    pub map: Vec<usize>,
    /// Per target pair: the sum and its summand source pairs.
    pub sums: Vec<(Sum, Vec<(usize, usize)>)>,
}

pub fn graph_pushforward(objects: Vec<String>, f: &[usize], m: &VGraph) -> Result<Pushforward> {
    if f.len() != m.len() || f.iter().any(|&o| o >= objects.len()) {
        return Err(Error::Malformed(
            "set map is not total into the target object set".into(),
        ));
    }
    let k = objects.len();
    let mut sums = Vec::with_capacity(k * k);
    for x in 0..k {
        for y in 0..k {
            let pairs: Vec<(usize, usize)> = (0..m.len())
                .flat_map(|a| (0..m.len()).map(move |b| (a, b)))
                .filter(|&(a, b)| f[a] == x && f[b] == y)
                .collect();
            let parts = pairs.iter().map(|&(a, b)| m.hom(a, b).clone()).collect();
            sums.push((Sum::new(m.base, parts)?, pairs));
        }
    }
    let graph = VGraph::new(
        m.base,
        objects,
        sums.iter().map(|(s, _)| s.value.clone()).collect(),
    )?;
    Ok(Pushforward {
        graph,
        map: f.to_vec(),
        sums,
    })
}

impl Pushforward {
    /// The unit M → f*f_*M, whose components are the summand inclusions.
    pub fn unit(&self, m: &VGraph) -> Result<GraphMap> {
        let (pulled, _) = graph_pullback(m.objects.clone(), &self.map, &self.graph)?;
        let k = self.graph.len();
        let mut comps = Vec::new();
        for a in 0..m.len() {
            for b in 0..m.len() {
                let (sum, pairs) = &self.sums[self.map[a] * k + self.map[b]];
                let s = pairs
                    .iter()
                    .position(|&q| q == (a, b))
                    .expect("pair in its fiber");
                comps.push(sum.leg(s).clone());
            }
        }
        GraphMap::new(m.clone(), pulled, (0..m.len()).collect(), comps)
    }

    /// Adjunct of φ: f_*M → N (identity on objects) as M → f*N.
    pub fn to_pullback_side(&self, m: &VGraph, phi: &GraphMap) -> Result<GraphMap> {
        let (pulled, _) = graph_pullback(m.objects.clone(), &self.map, &phi.tgt)?;
        let eta = self.unit(m)?;
        let k = self.graph.len();
        let mut comps = Vec::new();
        for a in 0..m.len() {
            for b in 0..m.len() {
                comps.push(phi.comp(self.map[a], self.map[b]).after(eta.comp(a, b))?);
            }
        }
        let _ = k;
        GraphMap::new(m.clone(), pulled, (0..m.len()).collect(), comps)
    }

    /// Adjunct of ψ: M → f*N (identity on objects) as f_*M → N.
    pub fn to_pushforward_side(&self, n: &VGraph, psi: &GraphMap) -> Result<GraphMap> {
        let k = self.graph.len();
        let mut comps = Vec::new();
        for x in 0..k {
            for y in 0..k {
                let (sum, pairs) = &self.sums[x * k + y];
                let legs: Vec<BaseMap> =
                    pairs.iter().map(|&(a, b)| psi.comp(a, b).clone()).collect();
                comps.push(sum.copair(&legs, n.hom(x, y))?);
            }
        }
        GraphMap::new(self.graph.clone(), n.clone(), (0..k).collect(), comps)
    }
}

#[derive(Clone, Debug)]
pub enum GraphDiagram {
    Coproduct(Vec<VGraph>),
    /// B ← A → C.
    Pushout(GraphMap, GraphMap),
    Coequalizer(GraphMap, GraphMap),
}

#[derive(Clone, Debug)]
pub struct GraphColimit {
    pub graph: VGraph,
    pub legs: Vec<GraphMap>,
}

/// Hom-wise colimit of a diagram of graphs over one object set.
pub fn graph_colimit(diagram: &GraphDiagram) -> Result<GraphColimit> {
    let (base, objects, targets, rels): (
        Base,
        Vec<String>,
        Vec<VGraph>,
        Vec<(usize, &GraphMap, usize, &GraphMap)>,
    ) = match diagram {
        GraphDiagram::Coproduct(gs) => {
            let first = gs.first().ok_or_else(|| {
                Error::Malformed("empty coproduct of graphs has no object set".into())
            })?;
            for g in gs {
                check_same_objects(first, g)?;
            }
            (first.base, first.objects.clone(), gs.clone(), vec![])
        }
        GraphDiagram::Pushout(f, g) => {
            check_same_objects(&f.src, &g.src)?;
            check_same_objects(&f.tgt, &g.tgt)?;
            check_same_objects(&f.src, &f.tgt)?;
            (
                f.src.base,
                f.src.objects.clone(),
                vec![f.tgt.clone(), g.tgt.clone()],
                vec![(0, f, 1, g)],
            )
        }
        GraphDiagram::Coequalizer(f, g) => {
            if f.src != g.src || f.tgt != g.tgt {
                return Err(Error::Malformed("coequalizer needs a parallel pair".into()));
            }
            check_same_objects(&f.src, &f.tgt)?;
            (
                f.src.base,
                f.src.objects.clone(),
                vec![f.tgt.clone()],
                vec![(0, f, 0, g)],
            )
        }
    };
    for (_, f, _, g) in &rels {
        for h in [f, g] {
            if h.objmap.iter().enumerate().any(|(i, &o)| i != o) {
                return Err(Error::Unsupported(
                    "graph colimits need identity object maps".into(),
                ));
            }
        }
    }
    let k = objects.len();
    let mut homs = Vec::with_capacity(k * k);
    let mut leg_comps: Vec<Vec<BaseMap>> = vec![Vec::new(); targets.len()];
    for x in 0..k {
        for y in 0..k {
            let mut pr = Presentation::new(base);
            for t in &targets {
                pr.add_summand(t.hom(x, y).clone());
            }
            for (i, f, j, g) in &rels {
                pr.relate(
                    f.src.hom(x, y).clone(),
                    Some((*i, f.comp(x, y).clone())),
                    Some((*j, g.comp(x, y).clone())),
                );
            }
            let c = pr.glue()?;
            for (s, l) in c.legs.into_iter().enumerate() {
                leg_comps[s].push(l);
            }
            homs.push(c.value);
        }
    }
    let graph = VGraph::new(base, objects, homs)?;
    let legs = targets
        .into_iter()
        .zip(leg_comps)
        .map(|(t, comps)| GraphMap::new(t, graph.clone(), (0..k).collect(), comps))
        .collect::<Result<_>>()?;
    Ok(GraphColimit { graph, legs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn finset_tensor_counts_two_summands() {
        let m = VGraph::from_fn(Base::FinSet, labels(2), |_, _| BaseValue::Set(2));
        let t = tensor_s(&m, &m).unwrap();
        assert_eq!(t.hom(0, 1), &BaseValue::Set(8));
    }

    #[test]
    fn bool_unit_graph() {
        let u = unit_s(Base::Bool, labels(2));
        assert_eq!(u.hom(0, 0), &BaseValue::Bool(true));
        assert_eq!(u.hom(0, 1), &BaseValue::Bool(false));
    }

    #[test]
    fn unit_maps_are_isos() {
        let m = VGraph::from_fn(Base::FinSet, labels(2), |x, y| BaseValue::Set(x + 2 * y));
        assert!(left_unit_map(&m, Mode::Strict).unwrap().is_iso());
        assert!(right_unit_map(&m, Mode::Strict).unwrap().is_iso());
        assert!(assoc_map(&m, &m, &m, Mode::Strict).unwrap().is_iso());
    }

    #[test]
    fn collapsing_pushforward_has_four_elements() {
        let m = VGraph::from_fn(Base::FinSet, labels(2), |_, _| BaseValue::Set(1));
        let pf = graph_pushforward(labels(1), &[0, 0], &m).unwrap();
        assert_eq!(pf.graph.hom(0, 0), &BaseValue::Set(4));
    }

    #[test]
    fn pullback_along_collapse_copies_hom() {
        let n = VGraph::from_fn(Base::FinSet, labels(1), |_, _| BaseValue::Set(3));
        let (g, _) = graph_pullback(labels(2), &[0, 0], &n).unwrap();
        assert!(g.homs.iter().all(|h| *h == BaseValue::Set(3)));
    }
}
