//! V-categories, V-functors, π₀, reduced composition, and the fiber operations.

use serde_json::json;

use crate::base::{
    pi0, pi0_map, pi0_pairing, tensor_map, tensor_vectors, Base, BaseMap, BaseValue, Layout, Mode,
    Pi0Set, Presentation,
};
use crate::error::{Error, Result};
use crate::graph::{GraphMap, VGraph};
use crate::io::map_json;
use crate::report::PropertyReport;

/// A sparse vector `(coefficient, basis index)`.
pub type Vector = Vec<(u32, usize)>;

/// Sorts by index, merges repeated indices mod p and drops zeros.
pub fn normalize(base: Base, mut v: Vector) -> Vector {
    v.sort_by_key(|&(_, i)| i);
    let p = match base {
        Base::Chain { p, .. } => p,
        _ => {
            v.dedup_by_key(|&mut (_, i)| i);
            return v;
        }
    };
    let mut out: Vector = Vec::with_capacity(v.len());
    for (c, i) in v {
        match out.last_mut() {
            Some((c0, i0)) if *i0 == i => *c0 = (*c0 + c) % p,
            _ => out.push((c % p, i)),
        }
    }
    out.retain(|&(c, _)| c != 0);
    out
}

/// Scales a sparse vector.
pub fn scale(base: Base, c: u32, v: &[(u32, usize)]) -> Vector {
    match base {
        Base::Chain { p, .. } => v
            .iter()
            .map(|&(a, i)| ((a as u64 * c as u64 % p as u64) as u32, i))
            .filter(|&(a, _)| a != 0)
            .collect(),
        _ => v.to_vec(),
    }
}

/// Applies a map to a sparse vector.
pub fn apply(f: &BaseMap, v: &[(u32, usize)]) -> Vector {
    let base = f.base();
    let mut out = Vec::new();
    for &(c, i) in v {
        out.extend(scale(base, c, &f.apply_basis(i)));
    }
    normalize(base, out)
}

/// A small V-category. Composition `comp(x, y, z): K(y, z) ⊗ K(x, y) → K(x, z)`.
///
/// Chain-complex categories carry the tensor mode used for their composition sources;
/// categories produced by the pushout engine use [`Mode::Truncate`].
#[derive(Clone, Debug)]
pub struct VCategory {
    pub graph: VGraph,
    pub mode: Mode,
    /// Indexed `(x * n + y) * n + z`.
    pub comp: Vec<BaseMap>,
    pub idm: Vec<BaseMap>,
    layouts: Vec<Layout>,
}

impl PartialEq for VCategory {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph && self.comp == other.comp && self.idm == other.idm
    }
}

impl Eq for VCategory {}

impl VCategory {
    /// Assembles a category, checking that every structure map has the right endpoints.
    /// The axioms are checked separately by [`validate_category`].
    pub fn new(
        graph: VGraph,
        mode: Mode,
        comp: Vec<BaseMap>,
        idm: Vec<BaseMap>,
    ) -> Result<VCategory> {
        graph.validate()?;
        let n = graph.len();
        let layouts = Self::layouts_for(&graph, mode)?;
        if comp.len() != n * n * n || idm.len() != n {
            return Err(Error::Malformed(
                "category needs n³ compositions and n identities".into(),
            ));
        }
        let unit = graph.base.unit();
        for x in 0..n {
            if idm[x].src != unit || idm[x].tgt != *graph.hom(x, x) {
                return Err(Error::Malformed(format!(
                    "identity at {} has the wrong endpoints",
                    graph.objects[x]
                )));
            }
            for y in 0..n {
                for z in 0..n {
                    let i = (x * n + y) * n + z;
                    if comp[i].src != layouts[i].value || comp[i].tgt != *graph.hom(x, z) {
                        return Err(Error::Malformed(format!(
                            "composition at ({}, {}, {}) has the wrong endpoints",
                            graph.objects[x], graph.objects[y], graph.objects[z]
                        )));
                    }
                }
            }
        }
        Ok(VCategory {
            graph,
            mode,
            comp,
            idm,
            layouts,
        })
    }

    fn layouts_for(graph: &VGraph, mode: Mode) -> Result<Vec<Layout>> {
        let n = graph.len();
        let mut out = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    out.push(Layout::new(
                        &[graph.hom(y, z).clone(), graph.hom(x, y).clone()],
                        mode,
                    )?);
                }
            }
        }
        Ok(out)
    }

    /// Builds a category from a composition rule on basis elements.
    pub fn from_rule<F, G>(graph: VGraph, mode: Mode, compose: F, identity: G) -> Result<VCategory>
    where
        F: Fn(usize, usize, usize, usize, usize) -> Vector,
        G: Fn(usize) -> Vector,
    {
        let n = graph.len();
        let layouts = Self::layouts_for(&graph, mode)?;
        let mut comp = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let l = &layouts[(x * n + y) * n + z];
                    comp.push(l.map_to(graph.hom(x, z), |t| Ok(compose(x, y, z, t[0], t[1])))?);
                }
            }
        }
        let unit = graph.base.unit();
        let idm = (0..n)
            .map(|x| crate::base::build_map(&unit, graph.hom(x, x), |_| Ok(identity(x))))
            .collect::<Result<_>>()?;
        VCategory::new(graph, mode, comp, idm)
    }

    /// The initial category 1_S of Cat_S: units on the diagonal, initial elsewhere.
    pub fn unit(base: Base, objects: Vec<String>) -> VCategory {
        let g = crate::graph::unit_s(base, objects);
        VCategory::from_rule(
            g,
            Mode::Truncate,
            |_, _, _, _, _| vec![(1, 0)],
            |_| vec![(1, 0)],
        )
        .expect("unit category")
    }

    pub fn base(&self) -> Base {
        self.graph.base
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn objects(&self) -> &[String] {
        &self.graph.objects
    }

    pub fn hom(&self, x: usize, y: usize) -> &BaseValue {
        self.graph.hom(x, y)
    }

    pub fn comp_at(&self, x: usize, y: usize, z: usize) -> &BaseMap {
        let n = self.len();
        &self.comp[(x * n + y) * n + z]
    }

    /// Layout of the composition source K(y, z) ⊗ K(x, y).
    pub fn layout(&self, x: usize, y: usize, z: usize) -> &Layout {
        let n = self.len();
        &self.layouts[(x * n + y) * n + z]
    }

    /// Composite of basis elements `a ∈ K(y, z)` and `b ∈ K(x, y)`.
    pub fn compose_basis(&self, x: usize, y: usize, z: usize, a: usize, b: usize) -> Vector {
        match self.layout(x, y, z).encode(&[a, b]) {
            Some(i) => self.comp_at(x, y, z).apply_basis(i),
            None => vec![],
        }
    }

    /// Bilinear extension of [`VCategory::compose_basis`].
    pub fn compose(
        &self,
        x: usize,
        y: usize,
        z: usize,
        u: &[(u32, usize)],
        v: &[(u32, usize)],
    ) -> Vector {
        let base = self.base();
        let mut out = Vec::new();
        for &(cu, a) in u {
            for &(cv, b) in v {
                let c = match base {
                    Base::Chain { p, .. } => (cu as u64 * cv as u64 % p as u64) as u32,
                    _ => 1,
                };
                out.extend(scale(base, c, &self.compose_basis(x, y, z, a, b)));
            }
        }
        normalize(base, out)
    }

    /// The identity of `x` as a vector of K(x, x).
    pub fn identity_vec(&self, x: usize) -> Vector {
        self.idm[x].apply_basis(0)
    }

    /// The endomorphism monoid K(x, x) as a one-object category.
    pub fn endo(&self, x: usize) -> VCategory {
        full_subcategory_idx(self, &[x])
    }
}

/// Checks associativity and both unit laws on basis elements. A failure carries the
/// offending objects and the two unequal maps.
pub fn validate_category(k: &VCategory) -> PropertyReport {
    const SUITE: &str = "validate-category";
    let n = k.len();
    let mut checks = 0;
    for x in 0..n {
        let id = k.identity_vec(x);
        for y in 0..n {
            for a in 0..k.hom(x, y).size() {
                checks += 2;
                let e = vec![(1, a)];
                let idy = k.identity_vec(y);
                if k.compose(x, y, y, &idy, &e) != e || k.compose(x, x, y, &e, &id) != e {
                    return PropertyReport::fail(
                        SUITE,
                        checks,
                        json!({"law": "unit", "x": k.objects()[x], "y": k.objects()[y], "element": a}),
                    );
                }
            }
        }
    }
    for w in 0..n {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if let Some(r) = assoc_failure(k, w, x, y, z, &mut checks) {
                        return r;
                    }
                }
            }
        }
    }
    PropertyReport::pass(SUITE, checks)
}

fn assoc_failure(
    k: &VCategory,
    w: usize,
    x: usize,
    y: usize,
    z: usize,
    checks: &mut usize,
) -> Option<PropertyReport> {
    let (na, nb, nc) = (k.hom(y, z).size(), k.hom(x, y).size(), k.hom(w, x).size());
    for a in 0..na {
        for b in 0..nb {
            let ab = k.compose_basis(x, y, z, a, b);
            for c in 0..nc {
                *checks += 1;
                let bc = k.compose_basis(w, x, y, b, c);
                let lhs = k.compose(w, x, z, &ab, &[(1, c)]);
                let rhs = k.compose(w, y, z, &[(1, a)], &bc);
                if lhs != rhs && triple_in_window(k, a, b, c, w, x, y, z) {
                    let o = k.objects();
                    let maps = assoc_maps(k, w, x, y, z);
                    let witness = match maps {
                        Ok((l, r)) => json!({
                            "law": "associativity",
                            "objects": [o[w], o[x], o[y], o[z]],
                            "lhs": map_json(&l),
                            "rhs": map_json(&r),
                        }),
                        Err(e) => {
                            json!({"law": "associativity", "objects": [o[w], o[x], o[y], o[z]], "error": e.to_string()})
                        }
                    };
                    return Some(PropertyReport::fail("validate-category", *checks, witness));
                }
            }
        }
    }
    None
}

/// Whether `a ⊗ b ⊗ c` survives in the triple tensor (always, unless truncating).
fn triple_in_window(
    k: &VCategory,
    a: usize,
    b: usize,
    c: usize,
    w: usize,
    x: usize,
    y: usize,
    z: usize,
) -> bool {
    match Layout::new(
        &[
            k.hom(y, z).clone(),
            k.hom(x, y).clone(),
            k.hom(w, x).clone(),
        ],
        k.mode,
    ) {
        Ok(l) => l.encode(&[a, b, c]).is_some(),
        Err(_) => true,
    }
}

/// comp ∘ (comp ⊗ id) and comp ∘ (id ⊗ comp) ∘ assoc at (w, x, y, z).
pub fn assoc_maps(
    k: &VCategory,
    w: usize,
    x: usize,
    y: usize,
    z: usize,
) -> Result<(BaseMap, BaseMap)> {
    let (kyz, kxy, kwx) = (k.hom(y, z), k.hom(x, y), k.hom(w, x));
    let lhs = k.comp_at(w, x, z).after(&tensor_map(
        &[k.comp_at(x, y, z), &BaseMap::identity(kwx)],
        k.mode,
    )?)?;
    let a = crate::base::assoc(kyz, kxy, kwx, k.mode)?;
    let inner = tensor_map(&[&BaseMap::identity(kyz), k.comp_at(w, x, y)], k.mode)?;
    let rhs = k.comp_at(w, y, z).after(&inner.after(&a)?)?;
    Ok((lhs, rhs))
}

/// A V-functor between categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VFunctor {
    pub src: VCategory,
    pub tgt: VCategory,
    pub map: GraphMap,
}

impl VFunctor {
    pub fn new(
        src: VCategory,
        tgt: VCategory,
        objmap: Vec<usize>,
        comps: Vec<BaseMap>,
    ) -> Result<VFunctor> {
        let map = GraphMap::new(src.graph.clone(), tgt.graph.clone(), objmap, comps)?;
        Ok(VFunctor { src, tgt, map })
    }

    pub fn identity(k: &VCategory) -> VFunctor {
        VFunctor {
            src: k.clone(),
            tgt: k.clone(),
            map: GraphMap::identity(&k.graph),
        }
    }

    pub fn objmap(&self) -> &[usize] {
        &self.map.objmap
    }

    pub fn comp(&self, x: usize, y: usize) -> &BaseMap {
        self.map.comp(x, y)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &VFunctor) -> Result<VFunctor> {
        Ok(VFunctor {
            src: first.src.clone(),
            tgt: self.tgt.clone(),
            map: self.map.after(&first.map)?,
        })
    }

    /// Checks preservation of composition and identities on basis elements.
    pub fn validate(&self) -> PropertyReport {
        const SUITE: &str = "validate-functor";
        let (h, k) = (&self.src, &self.tgt);
        let f = self.objmap();
        let mut checks = 0;
        for x in 0..h.len() {
            checks += 1;
            if apply(self.comp(x, x), &h.identity_vec(x)) != k.identity_vec(f[x]) {
                return PropertyReport::fail(
                    SUITE,
                    checks,
                    json!({"law": "identity", "x": h.objects()[x]}),
                );
            }
        }
        for x in 0..h.len() {
            for y in 0..h.len() {
                for z in 0..h.len() {
                    for a in 0..h.hom(y, z).size() {
                        for b in 0..h.hom(x, y).size() {
                            checks += 1;
                            let lhs = apply(self.comp(x, z), &h.compose_basis(x, y, z, a, b));
                            let rhs = k.compose(
                                f[x],
                                f[y],
                                f[z],
                                &self.comp(y, z).apply_basis(a),
                                &self.comp(x, y).apply_basis(b),
                            );
                            if lhs != rhs {
                                let o = h.objects();
                                return PropertyReport::fail(
                                    SUITE,
                                    checks,
                                    json!({"law": "composition", "objects": [o[x], o[y], o[z]], "elements": [a, b]}),
                                );
                            }
                        }
                    }
                }
            }
        }
        PropertyReport::pass(SUITE, checks)
    }
}

/// The ordinary category π₀K on finite tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pi0Category {
    pub objects: Vec<String>,
    pub homs: Vec<Pi0Set>,
    /// Indexed like [`VCategory::comp`]; entry `i * |π₀K(x,y)| + j` is the class of g_i ∘ f_j.
    pub comp: Vec<Vec<usize>>,
    pub ids: Vec<usize>,
}

const PI0_TABLE_LIMIT: usize = 1 << 22;

pub fn pi0_category(k: &VCategory) -> Result<Pi0Category> {
    let n = k.len();
    let homs: Vec<Pi0Set> = k.graph.homs.iter().map(pi0).collect::<Result<_>>()?;
    let mut comp = Vec::with_capacity(n * n * n);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let size = homs[y * n + z].size * homs[x * n + y].size;
                if size > PI0_TABLE_LIMIT {
                    return Err(Error::Unsupported(format!(
                        "π₀ composition table with {size} entries"
                    )));
                }
                let pairing = pi0_pairing(k.hom(y, z), k.hom(x, y), k.mode)?;
                let m = pi0_map(k.comp_at(x, y, z))?;
                comp.push(pairing.into_iter().map(|c| m[c]).collect());
            }
        }
    }
    let unit_class = match k.base() {
        Base::Chain { .. } => 1,
        _ => 0,
    };
    let ids = (0..n)
        .map(|x| Ok(pi0_map(&k.idm[x])?[unit_class]))
        .collect::<Result<_>>()?;
    Ok(Pi0Category {
        objects: k.objects().to_vec(),
        homs,
        comp,
        ids,
    })
}

impl Pi0Category {
    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn hom_size(&self, x: usize, y: usize) -> usize {
        self.homs[x * self.len() + y].size
    }

    /// g ∘ f for f: x → y, g: y → z.
    pub fn compose(&self, x: usize, y: usize, z: usize, g: usize, f: usize) -> usize {
        let n = self.len();
        self.comp[(x * n + y) * n + z][g * self.hom_size(x, y) + f]
    }

    /// Ordinary category axioms on the tables.
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                for f in 0..self.hom_size(x, y) {
                    if self.compose(x, y, y, self.ids[y], f) != f
                        || self.compose(x, x, y, f, self.ids[x]) != f
                    {
                        return Err(Error::Invalid("π₀ unit law fails".into()));
                    }
                }
                for z in 0..n {
                    for w in 0..n {
                        for f in 0..self.hom_size(x, y) {
                            for g in 0..self.hom_size(y, z) {
                                let gf = self.compose(x, y, z, g, f);
                                for h in 0..self.hom_size(z, w) {
                                    let hg = self.compose(y, z, w, h, g);
                                    if self.compose(x, z, w, h, gf) != self.compose(x, y, w, hg, f)
                                    {
                                        return Err(Error::Invalid(
                                            "π₀ associativity fails".into(),
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Classes f: x → y and g: y → x inverse to each other, found by exhaustive search.
    pub fn iso(&self, x: usize, y: usize) -> Option<(usize, usize)> {
        for f in 0..self.hom_size(x, y) {
            for g in 0..self.hom_size(y, x) {
                if self.compose(x, y, x, g, f) == self.ids[x]
                    && self.compose(y, x, y, f, g) == self.ids[y]
                {
                    return Some((f, g));
                }
            }
        }
        None
    }
}

/// Whether x ≅ y in π₀K, with a witness pair of mutually inverse classes.
pub fn iso_in_pi0(k: &VCategory, x: usize, y: usize) -> Result<Option<(usize, usize)>> {
    Ok(pi0_category(k)?.iso(x, y))
}

/// The ordinary functor π₀F as tables per pair.
pub fn pi0_functor(f: &VFunctor) -> Result<Vec<Vec<usize>>> {
    f.map.comps.iter().map(pi0_map).collect()
}

/// f*K along `f: S → Ob K`, with the cartesian functor f*K → K.
pub fn cat_pullback(
    objects: Vec<String>,
    f: &[usize],
    k: &VCategory,
) -> Result<(VCategory, VFunctor)> {
    let (g, map) = crate::graph::graph_pullback(objects, f, &k.graph)?;
    let n = g.len();
    let mut comp = Vec::with_capacity(n * n * n);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                comp.push(k.comp_at(f[x], f[y], f[z]).clone());
            }
        }
    }
    let idm = f.iter().map(|&x| k.idm[x].clone()).collect();
    let pk = VCategory::new(g, k.mode, comp, idm)?;
    Ok((
        pk.clone(),
        VFunctor {
            src: pk,
            tgt: k.clone(),
            map,
        },
    ))
}

/// f_*K along an injective `f: Ob K ↪ S′`: homs copied on the image, ∅ or 1 off it.
pub fn cat_pushforward_injective(
    objects: Vec<String>,
    f: &[usize],
    k: &VCategory,
) -> Result<(VCategory, VFunctor)> {
    if f.len() != k.len() || f.iter().any(|&o| o >= objects.len()) {
        return Err(Error::Malformed(
            "set map is not total into the target object set".into(),
        ));
    }
    let mut pre = vec![None; objects.len()];
    for (i, &o) in f.iter().enumerate() {
        if pre[o].is_some() {
            return Err(Error::Unsupported(
                "pushforward along a non-injective map".into(),
            ));
        }
        pre[o] = Some(i);
    }
    let base = k.base();
    let g = VGraph::from_fn(base, objects, |x, y| match (pre[x], pre[y]) {
        (Some(a), Some(b)) => k.hom(a, b).clone(),
        _ if x == y => base.unit(),
        _ => base.initial(),
    });
    let out = VCategory::from_rule(
        g,
        k.mode,
        |x, y, z, a, b| match (pre[x], pre[y], pre[z]) {
            (Some(px), Some(py), Some(pz)) => k.compose_basis(px, py, pz, a, b),
            _ => vec![(1, 0)],
        },
        |x| match pre[x] {
            Some(px) => k.identity_vec(px),
            None => vec![(1, 0)],
        },
    )?;
    let comps = (0..k.len() * k.len())
        .map(|i| BaseMap::identity(k.graph.homs.get(i).unwrap()))
        .collect();
    let functor = VFunctor::new(k.clone(), out.clone(), f.to_vec(), comps)?;
    Ok((out, functor))
}

/// K(y, z) ⊗_{K(y,y)} K(x, y) with its quotient map and the factorization c̄ of comp.
#[derive(Clone, Debug)]
pub struct ReducedCompData {
    pub quotient: BaseValue,
    pub quotient_map: BaseMap,
    pub reduced: BaseMap,
}

/// Coequalizer of ρ ⊗ id and id ⊗ λ on K(y,z) ⊗ K(y,y) ⊗ K(x,y), and the induced c̄.
pub fn reduced_composition(k: &VCategory, x: usize, y: usize, z: usize) -> Result<ReducedCompData> {
    let (kyz, kyy, kxy) = (k.hom(y, z), k.hom(y, y), k.hom(x, y));
    let triple = Layout::new(&[kyz.clone(), kyy.clone(), kxy.clone()], k.mode)?;
    let pair = k.layout(x, y, z);
    let right = triple.map_to(&pair.value, |t| {
        Ok(tensor_vectors(
            pair,
            &[k.compose_basis(y, y, z, t[0], t[1]), vec![(1, t[2])]],
        ))
    })?;
    let left = triple.map_to(&pair.value, |t| {
        Ok(tensor_vectors(
            pair,
            &[vec![(1, t[0])], k.compose_basis(x, y, y, t[1], t[2])],
        ))
    })?;
    let mut pr = Presentation::new(k.base());
    let s = pr.add_summand(pair.value.clone());
    pr.relate(triple.value.clone(), Some((s, right)), Some((s, left)));
    let c = pr.glue()?;
    let reduced = c.induce(&[k.comp_at(x, y, z).clone()], k.hom(x, z))?;
    Ok(ReducedCompData {
        quotient: c.value.clone(),
        quotient_map: c.legs[0].clone(),
        reduced,
    })
}

/// The full subcategory on the given labels, in the given order.
pub fn full_subcategory(k: &VCategory, labels: &[String]) -> Result<VCategory> {
    let idx: Vec<usize> = labels
        .iter()
        .map(|l| k.graph.index_of(l))
        .collect::<Result<_>>()?;
    Ok(full_subcategory_idx(k, &idx))
}

pub fn full_subcategory_idx(k: &VCategory, idx: &[usize]) -> VCategory {
    let objects = idx.iter().map(|&i| k.objects()[i].clone()).collect();
    let (sub, _) = cat_pullback(objects, idx, k).expect("indices are valid");
    sub
}

/// K^op(x, y) = K(y, x), with composition precomposed by the symmetry.
pub fn opposite(k: &VCategory) -> VCategory {
    let base = k.base();
    let g = VGraph::from_fn(base, k.objects().to_vec(), |x, y| k.hom(y, x).clone());
    let sign = |x: usize, y: usize, z: usize, a: usize, b: usize| -> u32 {
        // a ∈ K(z, y), b ∈ K(y, x); the swap carries (-1)^{|a||b|}.
        match base {
            Base::Chain { p, .. } => {
                let (ca, cb) = (k.hom(z, y).as_chain(), k.hom(y, x).as_chain());
                let da = ca.lo + crate::base::flat_to_degree(&ca.dims, a).0 as i32;
                let db = cb.lo + crate::base::flat_to_degree(&cb.dims, b).0 as i32;
                if (da * db).rem_euclid(2) == 1 {
                    p - 1
                } else {
                    1
                }
            }
            _ => 1,
        }
    };
    VCategory::from_rule(
        g,
        k.mode,
        |x, y, z, a, b| scale(base, sign(x, y, z, a, b), &k.compose_basis(z, y, x, b, a)),
        |x| k.identity_vec(x),
    )
    .expect("opposite of a valid category")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    /// The poset 0 < 1 as a FinSet category.
    fn arrow() -> VCategory {
        let g = VGraph::from_fn(Base::FinSet, labels(2), |x, y| {
            BaseValue::Set((x <= y) as usize)
        });
        VCategory::from_rule(
            g,
            Mode::Strict,
            |_, _, _, _, _| vec![(1, 0)],
            |_| vec![(1, 0)],
        )
        .unwrap()
    }

    #[test]
    fn unit_category_and_poset_are_valid() {
        assert!(validate_category(&VCategory::unit(Base::Bool, labels(3))).passed());
        assert!(validate_category(&arrow()).passed());
    }

    #[test]
    fn corrupted_composition_is_detected() {
        // Z/3 as a one-object category, with one table entry changed.
        let g = VGraph::from_fn(Base::FinSet, labels(1), |_, _| BaseValue::Set(3));
        let good = VCategory::from_rule(
            g.clone(),
            Mode::Strict,
            |_, _, _, a, b| vec![(1, (a + b) % 3)],
            |_| vec![(1, 0)],
        )
        .unwrap();
        assert!(validate_category(&good).passed());
        let bad = VCategory::from_rule(
            g,
            Mode::Strict,
            |_, _, _, a, b| vec![(1, if (a, b) == (1, 1) { 0 } else { (a + b) % 3 })],
            |_| vec![(1, 0)],
        )
        .unwrap();
        let r = validate_category(&bad);
        assert!(r.failed());
        assert!(r.witness.unwrap().get("objects").is_some());
    }

    #[test]
    fn pi0_of_poset_and_isos() {
        let k = arrow();
        let p = pi0_category(&k).unwrap();
        p.validate().unwrap();
        assert_eq!(p.hom_size(1, 0), 0);
        assert_eq!(p.iso(0, 0), Some((0, 0)));
        assert_eq!(p.iso(0, 1), None);
    }

    #[test]
    fn pushforward_then_pullback_is_identity() {
        let k = arrow();
        let (pk, _) = cat_pushforward_injective(labels(3), &[0, 1], &k).unwrap();
        assert!(validate_category(&pk).passed());
        assert_eq!(pk.hom(2, 2), &BaseValue::Set(1));
        assert_eq!(pk.hom(0, 2), &BaseValue::Set(0));
        let (back, _) = cat_pullback(labels(2), &[0, 1], &pk).unwrap();
        assert_eq!(back, k);
    }

    #[test]
    fn reduced_composition_at_repeated_object_is_iso() {
        let k = arrow();
        let r = reduced_composition(&k, 0, 0, 1).unwrap();
        assert!(r.reduced.is_iso());
        assert_eq!(
            r.reduced.after(&r.quotient_map).unwrap(),
            *k.comp_at(0, 0, 1)
        );
    }

    #[test]
    fn opposite_reverses_poset() {
        let op = opposite(&arrow());
        assert_eq!(op.hom(1, 0), &BaseValue::Set(1));
        assert_eq!(op.hom(0, 1), &BaseValue::Set(0));
        assert_eq!(opposite(&op), arrow());
    }
}
