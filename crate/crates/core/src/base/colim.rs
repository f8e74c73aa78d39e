//! Finite colimits as quotients of coproducts.
//!
//! Every colimit here is presented by summands and relations. A relation is a pair
//! of maps out of a common source into two summands, to be identified. A missing
//! side means "identify with zero", which is only meaningful for chain complexes or
//! for an empty relation source. Finite sets are glued by union-find with minimum
//! representatives. Chain complexes are quotiented degreewise by the span of the
//! relations, with the non-pivot coordinates as canonical basis.

use super::{Base, BaseMap, BaseValue, Complex};
use crate::error::{Error, Result};
use crate::fp::{Mat, Span};

#[derive(Clone, Debug)]
pub struct Relation {
    pub source: BaseValue,
    pub left: Option<(usize, BaseMap)>,
    pub right: Option<(usize, BaseMap)>,
}

#[derive(Clone, Debug)]
pub struct Presentation {
    pub base: Base,
    pub summands: Vec<BaseValue>,
    pub relations: Vec<Relation>,
}

#[derive(Clone, Debug)]
enum Section {
    Bool(Option<usize>),
    /// Representative (summand, element) of each class.
    Set(Vec<(usize, usize)>),
    /// Representative (summand, flat index) of each basis vector.
    Chain(Vec<(usize, usize)>),
}

/// A computed colimit with its legs and a section used to induce maps out of it.
#[derive(Clone, Debug)]
pub struct Colim {
    pub value: BaseValue,
    pub legs: Vec<BaseMap>,
    section: Section,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    /// Keeps the smaller index as root, so roots are class minima.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra < rb {
            self.parent[rb] = ra;
        } else if rb < ra {
            self.parent[ra] = rb;
        }
    }
}

impl Presentation {
    pub fn new(base: Base) -> Self {
        Presentation {
            base,
            summands: Vec::new(),
            relations: Vec::new(),
        }
    }

    pub fn add_summand(&mut self, v: BaseValue) -> usize {
        self.summands.push(v);
        self.summands.len() - 1
    }

    /// Identifies `left ∘ w` with `right ∘ w` for every w in `source`.
    pub fn relate(
        &mut self,
        source: BaseValue,
        left: Option<(usize, BaseMap)>,
        right: Option<(usize, BaseMap)>,
    ) {
        self.relations.push(Relation {
            source,
            left,
            right,
        });
    }

    fn check(&self) -> Result<()> {
        for v in &self.summands {
            if v.base() != self.base {
                return Err(Error::Malformed("summand in the wrong base".into()));
            }
        }
        for (ri, r) in self.relations.iter().enumerate() {
            for (s, m) in [&r.left, &r.right].into_iter().flatten() {
                if *s >= self.summands.len() || m.tgt != self.summands[*s] || m.src != r.source {
                    return Err(Error::Malformed(format!(
                        "relation {ri} does not match its summand"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn glue(&self) -> Result<Colim> {
        self.check()?;
        match self.base {
            Base::Bool => self.glue_bool(),
            Base::FinSet => self.glue_set(),
            Base::Chain { p, lo, hi } => self.glue_chain(p, lo, hi),
        }
    }

    fn glue_bool(&self) -> Result<Colim> {
        let first = self
            .summands
            .iter()
            .position(|v| matches!(v, BaseValue::Bool(true)));
        for r in &self.relations {
            if r.source == BaseValue::Bool(true) && (r.left.is_none() || r.right.is_none()) {
                return Err(Error::Malformed(
                    "cannot identify ⊤ with the initial object".into(),
                ));
            }
        }
        let value = BaseValue::Bool(first.is_some());
        let legs = self
            .summands
            .iter()
            .map(|v| BaseMap::bool(v.size() > 0, first.is_some()))
            .collect::<Result<_>>()?;
        Ok(Colim {
            value,
            legs,
            section: Section::Bool(first),
        })
    }

    fn glue_set(&self) -> Result<Colim> {
        let offsets: Vec<usize> = self
            .summands
            .iter()
            .scan(0, |acc, v| {
                let o = *acc;
                *acc += v.as_set();
                Some(o)
            })
            .collect();
        let total: usize = self.summands.iter().map(|v| v.as_set()).sum();
        let mut uf = UnionFind::new(total);
        for r in &self.relations {
            let n = r.source.as_set();
            match (&r.left, &r.right) {
                (Some((a, f)), Some((b, g))) => {
                    for w in 0..n {
                        uf.union(offsets[*a] + f.table()[w], offsets[*b] + g.table()[w]);
                    }
                }
                _ => {
                    if n > 0 {
                        return Err(Error::Malformed(
                            "cannot identify elements with the initial object".into(),
                        ));
                    }
                }
            }
        }
        let mut class_of = vec![usize::MAX; total];
        let mut reps = Vec::new();
        for i in 0..total {
            let r = uf.find(i);
            if r == i {
                class_of[i] = reps.len();
                let s = offsets.partition_point(|&o| o <= i) - 1;
                reps.push((s, i - offsets[s]));
            }
        }
        for i in 0..total {
            let r = uf.find(i);
            class_of[i] = class_of[r];
        }
        let value = BaseValue::Set(reps.len());
        let legs = self
            .summands
            .iter()
            .enumerate()
            .map(|(s, v)| {
                let table = (0..v.as_set()).map(|e| class_of[offsets[s] + e]).collect();
                BaseMap::set(v.clone(), value.clone(), table)
            })
            .collect::<Result<_>>()?;
        Ok(Colim {
            value,
            legs,
            section: Section::Set(reps),
        })
    }

    fn glue_chain(&self, p: u32, lo: i32, hi: i32) -> Result<Colim> {
        let width = (hi - lo + 1) as usize;
        let cs: Vec<&Complex> = self.summands.iter().map(|v| v.as_chain()).collect();
        // offs[k][s]: start of summand s inside the degree-k slot of the coproduct.
        let mut offs = vec![vec![0usize; cs.len() + 1]; width];
        for k in 0..width {
            for s in 0..cs.len() {
                offs[k][s + 1] = offs[k][s] + cs[s].dims[k];
            }
        }
        let mut spans: Vec<Span> = (0..width)
            .map(|k| Span::new(p, offs[k][cs.len()]))
            .collect();
        for r in &self.relations {
            let w = r.source.as_chain();
            let mut start = 0;
            for k in 0..width {
                for local in 0..w.dims[k] {
                    let mut v = vec![0u32; offs[k][cs.len()]];
                    for (side, neg) in [(&r.left, false), (&r.right, true)] {
                        if let Some((s, m)) = side {
                            let tgt_c = cs[*s];
                            let tstart: usize = tgt_c.dims[..k].iter().sum();
                            for (c, j) in m.apply_basis(start + local) {
                                let c = if neg { (p - c) % p } else { c };
                                let idx = offs[k][*s] + j - tstart;
                                v[idx] = (v[idx] + c) % p;
                            }
                        }
                    }
                    spans[k].insert(v);
                }
                start += w.dims[k];
            }
        }
        let comps: Vec<Vec<usize>> = spans.iter().map(|s| s.complement()).collect();
        let dims: Vec<usize> = comps.iter().map(|c| c.len()).collect();
        // q_k: degree-k coproduct coordinates → quotient coordinates.
        let quotient = |k: usize, mut v: Vec<u32>| -> Vec<u32> {
            spans[k].reduce(&mut v);
            comps[k].iter().map(|&j| v[j]).collect()
        };
        let locate = |k: usize, g: usize| -> (usize, usize) {
            let s = offs[k].partition_point(|&o| o <= g) - 1;
            (s, g - offs[k][s])
        };
        let mut d: Vec<Mat> = (0..width)
            .map(|k| Mat::zeros(p, if k == 0 { 0 } else { dims[k - 1] }, dims[k]))
            .collect();
        for k in 1..width {
            for (col, &g) in comps[k].iter().enumerate() {
                let (s, local) = locate(k, g);
                let dm = &cs[s].d[k];
                let mut v = vec![0u32; offs[k - 1][cs.len()]];
                for r in 0..dm.rows {
                    v[offs[k - 1][s] + r] = dm.get(r, local);
                }
                for (row, x) in quotient(k - 1, v).into_iter().enumerate() {
                    d[k].set(row, col, x);
                }
            }
        }
        let value = BaseValue::Chain(Complex {
            p,
            lo,
            hi,
            dims: dims.clone(),
            d,
        });
        let mut legs = Vec::with_capacity(cs.len());
        for (s, c) in cs.iter().enumerate() {
            let mut mats = Vec::with_capacity(width);
            for k in 0..width {
                let mut m = Mat::zeros(p, dims[k], c.dims[k]);
                for local in 0..c.dims[k] {
                    let mut v = vec![0u32; offs[k][cs.len()]];
                    v[offs[k][s] + local] = 1;
                    for (row, x) in quotient(k, v).into_iter().enumerate() {
                        m.set(row, local, x);
                    }
                }
                mats.push(m);
            }
            legs.push(BaseMap::chain(
                self.summands[s].clone(),
                value.clone(),
                mats,
            )?);
        }
        let mut reps = Vec::new();
        for k in 0..width {
            for &g in &comps[k] {
                let (s, local) = locate(k, g);
                let start: usize = cs[s].dims[..k].iter().sum();
                reps.push((s, start + local));
            }
        }
        Ok(Colim {
            value,
            legs,
            section: Section::Chain(reps),
        })
    }
}

impl Colim {
    /// The map out of the colimit induced by a cocone, one map per summand.
    /// The caller is responsible for the cocone respecting the relations;
    /// use [`Colim::induce_checked`] to have that verified.
    pub fn induce(&self, cocone: &[BaseMap], tgt: &BaseValue) -> Result<BaseMap> {
        if cocone.len() != self.legs.len() {
            return Err(Error::Malformed(
                "cocone has the wrong number of legs".into(),
            ));
        }
        for (c, l) in cocone.iter().zip(&self.legs) {
            if c.src != l.src || c.tgt != *tgt {
                return Err(Error::Malformed(
                    "cocone leg has the wrong endpoints".into(),
                ));
            }
        }
        match &self.section {
            Section::Bool(_) => BaseMap::bool(self.value.size() > 0, tgt.size() > 0),
            Section::Set(reps) | Section::Chain(reps) => {
                super::tensor::build_map(&self.value, tgt, |i| {
                    let (s, e) = reps[i];
                    Ok(cocone[s].apply_basis(e))
                })
            }
        }
    }

    /// As [`Colim::induce`], additionally checking `u ∘ leg_s = cocone_s` for every leg.
    pub fn induce_checked(&self, cocone: &[BaseMap], tgt: &BaseValue) -> Result<BaseMap> {
        let u = self.induce(cocone, tgt)?;
        for (s, (c, l)) in cocone.iter().zip(&self.legs).enumerate() {
            if u.after(l)? != *c {
                return Err(Error::Malformed(format!(
                    "cocone leg {s} does not respect the relations"
                )));
            }
        }
        Ok(u)
    }

    /// A representative `(summand, element)` for every basis element of the colimit.
    pub fn representatives(&self) -> Vec<(usize, usize)> {
        match &self.section {
            Section::Bool(Some(s)) => vec![(*s, 0)],
            Section::Bool(None) => vec![],
            Section::Set(r) | Section::Chain(r) => r.clone(),
        }
    }
}

pub fn coproduct(base: Base, values: &[BaseValue]) -> Result<Colim> {
    let mut pr = Presentation::new(base);
    for v in values {
        pr.add_summand(v.clone());
    }
    pr.glue()
}

/// Pushout of `B ←f– A –g→ C`; legs are `[B → P, C → P]`.
pub fn pushout(f: &BaseMap, g: &BaseMap) -> Result<Colim> {
    if f.src != g.src {
        return Err(Error::Malformed(
            "pushout span legs have different sources".into(),
        ));
    }
    let mut pr = Presentation::new(f.base());
    let b = pr.add_summand(f.tgt.clone());
    let c = pr.add_summand(g.tgt.clone());
    pr.relate(f.src.clone(), Some((b, f.clone())), Some((c, g.clone())));
    pr.glue()
}

/// Coequalizer of a parallel pair; the single leg is the quotient map.
pub fn coequalizer(f: &BaseMap, g: &BaseMap) -> Result<Colim> {
    if f.src != g.src || f.tgt != g.tgt {
        return Err(Error::Malformed("coequalizer needs a parallel pair".into()));
    }
    let mut pr = Presentation::new(f.base());
    let y = pr.add_summand(f.tgt.clone());
    pr.relate(f.src.clone(), Some((y, f.clone())), Some((y, g.clone())));
    pr.glue()
}

/// A finite coproduct with explicit injection and split tables.
#[derive(Clone, Debug)]
pub struct Sum {
    pub value: BaseValue,
    pub parts: Vec<BaseValue>,
    pub colim: Colim,
    inj: Vec<Vec<usize>>,
    split: Vec<(usize, usize)>,
}

impl Sum {
    pub fn new(base: Base, parts: Vec<BaseValue>) -> Result<Sum> {
        let colim = coproduct(base, &parts)?;
        let inj = colim
            .legs
            .iter()
            .map(|l| (0..l.src.size()).map(|e| l.apply_basis(e)[0].1).collect())
            .collect();
        let split = colim.representatives();
        Ok(Sum {
            value: colim.value.clone(),
            parts,
            colim,
            inj,
            split,
        })
    }

    /// Flat index of element `e` of summand `k`.
    pub fn inj(&self, k: usize, e: usize) -> usize {
        self.inj[k][e]
    }

    /// Summand and local index of a flat element.
    pub fn split(&self, i: usize) -> (usize, usize) {
        self.split[i]
    }

    pub fn leg(&self, k: usize) -> &BaseMap {
        &self.colim.legs[k]
    }

    /// The map out of the sum given by one map per summand.
    pub fn copair(&self, maps: &[BaseMap], tgt: &BaseValue) -> Result<BaseMap> {
        self.colim.induce(maps, tgt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set_map(n: usize, m: usize, t: &[usize]) -> BaseMap {
        BaseMap::set(BaseValue::Set(n), BaseValue::Set(m), t.to_vec()).unwrap()
    }

    #[test]
    fn coequalizer_of_two_points_is_a_point() {
        let c = coequalizer(&set_map(1, 2, &[0]), &set_map(1, 2, &[1])).unwrap();
        assert_eq!(c.value, BaseValue::Set(1));
    }

    #[test]
    fn pushout_of_two_inclusions_has_three_points() {
        let i = set_map(1, 2, &[0]);
        let c = pushout(&i, &i).unwrap();
        assert_eq!(c.value, BaseValue::Set(3));
        // Glued point is represented by its minimum global index.
        assert_eq!(c.legs[0].table(), &[0, 1]);
        assert_eq!(c.legs[1].table(), &[0, 2]);
    }

    #[test]
    fn pushout_along_initial_is_identity_leg() {
        let x = BaseValue::Chain(Complex::disk(2, 0, 2, 2).unwrap());
        let z = Base::chain(2, 0, 2).initial();
        let c = pushout(&BaseMap::identity(&z), &BaseMap::from_initial(&x)).unwrap();
        assert_eq!(c.value, x);
        assert!(c.legs[1].is_identity());
    }

    #[test]
    fn induced_map_matches_cocone() {
        let i = set_map(1, 2, &[0]);
        let c = pushout(&i, &i).unwrap();
        let to_one = set_map(2, 1, &[0, 0]);
        let u = c
            .induce_checked(&[to_one.clone(), to_one], &BaseValue::Set(1))
            .unwrap();
        assert_eq!(u.table(), &[0, 0, 0]);
    }
}
