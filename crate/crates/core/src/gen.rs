//! Seeded random instances: categories, complexes, chain maps, attachments and squares.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::base::{build_map, generating_sets, Base, BaseMap, BaseValue, Complex, Generator};
use crate::colimits::Attachment;
use crate::fp::Mat;
use crate::graph::VGraph;
use crate::vcat::{cat_pullback, VCategory, VFunctor, Vector};

/// Envelope of generated instances.
#[derive(Clone, Copy, Debug)]
pub struct Envelope {
    pub objects: usize,
    /// Largest hom size for finite sets, largest dimension per degree for complexes.
    pub hom: usize,
}

pub struct Gen {
    rng: ChaCha8Rng,
}

/// A small differential graded algebra concentrated in non-negative degrees.
#[derive(Clone, Debug)]
struct Dga {
    /// Degree of each basis element.
    degs: Vec<i32>,
    /// Products `e_i e_j` as a basis index, if nonzero.
    prod: Vec<Vec<Option<usize>>>,
    /// Differential as (target basis index) for each basis element, if nonzero.
    d: Vec<Option<usize>>,
}

impl Dga {
    fn ground() -> Dga {
        Dga {
            degs: vec![0],
            prod: vec![vec![Some(0)]],
            d: vec![None],
        }
    }

    /// Exterior algebra on one generator of degree 1.
    fn exterior() -> Dga {
        Dga {
            degs: vec![0, 1],
            prod: vec![vec![Some(0), Some(1)], vec![Some(1), None]],
            d: vec![None, None],
        }
    }

    /// The acyclic algebra with u² = 0 and du = 1.
    fn acyclic() -> Dga {
        Dga {
            degs: vec![0, 1],
            prod: vec![vec![Some(0), Some(1)], vec![Some(1), None]],
            d: vec![None, Some(0)],
        }
    }

    /// A ⊕ I for an ideal I = span(x, y), |x| = 2, |y| = 1, dx = y, with I² = 0 and A acting
    /// on I through its unit only. The inclusion A → A ⊕ I is a quasi-isomorphism. Needs d = 0
    /// on A.
    fn with_acyclic_ideal(&self) -> Dga {
        let n = self.degs.len();
        let mut degs = self.degs.clone();
        degs.extend([2, 1]);
        let prod = (0..n + 2)
            .map(|i| {
                (0..n + 2)
                    .map(|j| match (i < n, j < n) {
                        (true, true) => self.prod[i][j],
                        (true, false) if i == 0 => Some(j),
                        (false, true) if j == 0 => Some(i),
                        _ => None,
                    })
                    .collect()
            })
            .collect();
        let mut d = self.d.clone();
        d.extend([Some(n + 1), None]);
        Dga { degs, prod, d }
    }

    /// Truncated polynomials on a degree-1 generator with zero differential.
    fn polynomial(len: usize) -> Dga {
        let prod = (0..len)
            .map(|i| {
                (0..len)
                    .map(|j| if i + j < len { Some(i + j) } else { None })
                    .collect()
            })
            .collect();
        Dga {
            degs: (0..len as i32).collect(),
            prod,
            d: vec![None; len],
        }
    }
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn labels(n: usize) -> Vec<String> {
        (0..n)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect()
    }

    /// A random preorder, as a Bool-category.
    pub fn bool_category(&mut self, objects: usize) -> VCategory {
        let n = objects;
        let mut r = vec![false; n * n];
        for x in 0..n {
            r[x * n + x] = true;
            for y in 0..n {
                if x != y && self.chance(0.35) {
                    r[x * n + y] = true;
                }
            }
        }
        for z in 0..n {
            for x in 0..n {
                for y in 0..n {
                    if r[x * n + z] && r[z * n + y] {
                        r[x * n + y] = true;
                    }
                }
            }
        }
        let g = VGraph::from_fn(Base::Bool, Self::labels(n), |x, y| {
            BaseValue::Bool(r[x * n + y])
        });
        VCategory::from_rule(
            g,
            crate::base::Mode::Strict,
            |_, _, _, _, _| vec![(1, 0)],
            |_| vec![(1, 0)],
        )
        .expect("preorders are categories")
    }

    /// A concrete category: objects are small sets, homs are the composites of random functions.
    pub fn finset_category(&mut self, env: Envelope) -> VCategory {
        loop {
            if let Some(c) = self.try_concrete(env) {
                return c;
            }
        }
    }

    fn try_concrete(&mut self, env: Envelope) -> Option<VCategory> {
        let n = env.objects;
        let sizes: Vec<usize> = (0..n).map(|_| 1 + self.below(2)).collect();
        type Fun = Vec<usize>;
        let mut homs: Vec<BTreeSet<Fun>> = vec![BTreeSet::new(); n * n];
        for x in 0..n {
            homs[x * n + x].insert((0..sizes[x]).collect());
        }
        let gens = self.below(n + 2);
        for _ in 0..gens {
            let (x, y) = (self.below(n), self.below(n));
            let f: Fun = (0..sizes[x]).map(|_| self.below(sizes[y])).collect();
            homs[x * n + y].insert(f);
        }
        // Close under composition g ∘ f for f: x → y, g: y → z.
        loop {
            let mut added = false;
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let fs: Vec<Fun> = homs[x * n + y].iter().cloned().collect();
                        let gs: Vec<Fun> = homs[y * n + z].iter().cloned().collect();
                        for f in &fs {
                            for g in &gs {
                                let h: Fun = f.iter().map(|&i| g[i]).collect();
                                added |= homs[x * n + z].insert(h);
                            }
                        }
                        if homs[x * n + z].len() > env.hom {
                            return None;
                        }
                    }
                }
            }
            if !added {
                break;
            }
        }
        let lists: Vec<Vec<Fun>> = homs.into_iter().map(|s| s.into_iter().collect()).collect();
        let g = VGraph::from_fn(Base::FinSet, Self::labels(n), |x, y| {
            BaseValue::Set(lists[x * n + y].len())
        });
        let l = &lists;
        VCategory::from_rule(
            g,
            crate::base::Mode::Strict,
            |x, y, z, a, b| {
                let (g, f) = (&l[y * n + z][a], &l[x * n + y][b]);
                let h: Fun = f.iter().map(|&i| g[i]).collect();
                vec![(
                    1,
                    l[x * n + z]
                        .iter()
                        .position(|c| *c == h)
                        .expect("closed under composition"),
                )]
            },
            |x| {
                vec![(
                    1,
                    l[x * n + x]
                        .iter()
                        .position(|c| c.iter().enumerate().all(|(i, &j)| i == j))
                        .expect("identity"),
                )]
            },
        )
        .ok()
    }

    /// The F_p-linearization of a concrete category, tensored with a small differential graded algebra.
    pub fn chain_category(&mut self, p: u32, lo: i32, hi: i32, env: Envelope) -> VCategory {
        let fin = self.finset_category(Envelope {
            objects: env.objects,
            hom: env.hom,
        });
        let dga = match self.below(5) {
            0 => Dga::ground(),
            1 => Dga::exterior(),
            2 => Dga::acyclic(),
            3 => Dga::polynomial(3),
            _ => Dga::polynomial((hi.max(0) + 1) as usize),
        };
        linearize(&fin, &dga, p, lo, hi)
    }

    /// A random DK-equivalence between chain categories: a quasi-isomorphic change of
    /// coefficients, a section into a category with a duplicated object, or their composite.
    /// Needs hi ≥ 2.
    pub fn dk_equivalence(&mut self, p: u32, lo: i32, hi: i32, env: Envelope) -> VFunctor {
        let fin = self.finset_category(env);
        let dga = match self.below(3) {
            0 => Dga::ground(),
            1 => Dga::exterior(),
            _ => Dga::polynomial(3),
        };
        let kind = self.below(3);
        let (h, hom_basis) = linearize_with_basis(&fin, &dga, p, lo, hi);
        let mut phi = VFunctor::identity(&h);
        if kind != 1 {
            let (big, big_basis) = linearize_with_basis(&fin, &dga.with_acyclic_ideal(), p, lo, hi);
            let n = h.len();
            let comps = (0..n * n)
                .map(|i| {
                    let (x, y) = (i / n, i % n);
                    build_map(h.hom(x, y), big.hom(x, y), |e| {
                        let q = hom_basis[i][e];
                        Ok(vec![(
                            1,
                            big_basis[i]
                                .iter()
                                .position(|&b| b == q)
                                .expect("A is a summand of A ⊕ I"),
                        )])
                    })
                    .expect("inclusion of a summand")
                })
                .collect();
            phi = VFunctor::new(h.clone(), big, (0..n).collect(), comps)
                .expect("coefficient change is a functor");
        }
        if kind != 0 {
            phi = self
                .duplicate_object(&phi.tgt)
                .after(&phi)
                .expect("composable");
        }
        phi
    }

    /// The section K → f*K for f collapsing a duplicate of a random object onto it.
    pub fn duplicate_object(&mut self, k: &VCategory) -> VFunctor {
        let n = k.len();
        let o = self.below(n);
        let mut labels = k.objects().to_vec();
        let mut fresh = format!("{}'", labels[o]);
        while labels.contains(&fresh) {
            fresh.push('\'');
        }
        labels.push(fresh);
        let f: Vec<usize> = (0..n).chain([o]).collect();
        let (pk, _) = cat_pullback(labels, &f, k).expect("total map");
        let comps = (0..n * n)
            .map(|i| BaseMap::identity(k.hom(i / n, i % n)))
            .collect();
        VFunctor::new(k.clone(), pk, (0..n).collect(), comps).expect("section of the reindexing")
    }

    /// A random complex with at most `max_dim` basis elements per degree.
    pub fn complex(&mut self, p: u32, lo: i32, hi: i32, max_dim: usize) -> Complex {
        let n = (hi - lo + 1) as usize;
        let dims: Vec<usize> = (0..n).map(|_| self.below(max_dim + 1)).collect();
        let mut d: Vec<Mat> = vec![Mat::zeros(p, 0, dims[0])];
        for i in 1..n {
            // Columns of d_i are drawn from the kernel of d_{i-1}.
            let ker = d[i - 1].kernel();
            let mut r = Mat::zeros(p, ker.cols, dims[i]);
            for a in 0..ker.cols {
                for b in 0..dims[i] {
                    if self.chance(0.6) {
                        r.set(a, b, self.below(p as usize) as u32);
                    }
                }
            }
            d.push(ker.mul(&r));
        }
        Complex::new(p, lo, hi, dims, d).expect("d∘d = 0 by construction")
    }

    /// A uniformly random chain map between two complexes.
    pub fn chain_map(&mut self, src: &Complex, tgt: &Complex) -> BaseMap {
        let p = src.p;
        let n = src.dims.len();
        let offs: Vec<usize> = (0..=n)
            .scan(0, |acc, i| {
                let o = *acc;
                if i < n {
                    *acc += tgt.dims[i] * src.dims[i];
                }
                Some(o)
            })
            .collect();
        let unknowns = offs[n];
        // Constraint rows: (d_Y f_i - f_{i-1} d_X)[r][c] = 0 for every degree i ≥ 1.
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for i in 1..n {
            let (dy, dx) = (&tgt.d[i], &src.d[i]);
            for r in 0..tgt.dims[i - 1] {
                for c in 0..src.dims[i] {
                    let mut row = vec![0u32; unknowns];
                    for k in 0..tgt.dims[i] {
                        let idx = offs[i] + k * src.dims[i] + c;
                        row[idx] = (row[idx] + dy.get(r, k)) % p;
                    }
                    for k in 0..src.dims[i - 1] {
                        let idx = offs[i - 1] + r * src.dims[i - 1] + k;
                        row[idx] = (row[idx] + p - dx.get(k, c)) % p;
                    }
                    rows.push(row);
                }
            }
        }
        let mut sys = Mat::zeros(p, rows.len(), unknowns);
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                sys.set(r, c, v);
            }
        }
        let ker = sys.kernel();
        let mut sol = vec![0u32; unknowns];
        for k in 0..ker.cols {
            let coef = self.below(p as usize) as u32;
            for (u, s) in sol.iter_mut().enumerate() {
                *s = (*s + coef * ker.get(u, k)) % p;
            }
        }
        let mats = (0..n)
            .map(|i| {
                let mut m = Mat::zeros(p, tgt.dims[i], src.dims[i]);
                for r in 0..tgt.dims[i] {
                    for c in 0..src.dims[i] {
                        m.set(r, c, sol[offs[i] + r * src.dims[i] + c]);
                    }
                }
                m
            })
            .collect();
        BaseMap::chain(
            BaseValue::Chain(src.clone()),
            BaseValue::Chain(tgt.clone()),
            mats,
        )
        .expect("solves the chain map equations")
    }

    /// A random morphism between two values of the same base.
    pub fn base_map(&mut self, src: &BaseValue, tgt: &BaseValue) -> Option<BaseMap> {
        match (src, tgt) {
            (BaseValue::Bool(a), BaseValue::Bool(b)) => BaseMap::bool(*a, *b).ok(),
            (BaseValue::Set(m), BaseValue::Set(n)) => {
                if *m > 0 && *n == 0 {
                    return None;
                }
                let table = (0..*m).map(|_| self.below(*n)).collect();
                BaseMap::set(src.clone(), tgt.clone(), table).ok()
            }
            (BaseValue::Chain(a), BaseValue::Chain(b)) => Some(self.chain_map(a, b)),
            _ => None,
        }
    }

    fn pick_pair(&mut self, n: usize) -> (usize, usize) {
        (self.below(n), self.below(n))
    }

    /// A random attachment with |U| ≤ max_u and |V| ≤ max_v over FinSet, or a generator over Bool.
    pub fn attachment(&mut self, h: &VCategory, max_u: usize, max_v: usize) -> Attachment {
        let n = h.len();
        // Most free arrows go where no arrow returns, so that stages vanish early.
        let one_way: Vec<(usize, usize)> = (0..n * n)
            .map(|i| (i / n, i % n))
            .filter(|&(a, b)| h.hom(b, a).is_initial())
            .collect();
        loop {
            let (a, b) = if !one_way.is_empty() && self.chance(0.75) {
                *one_way.choose(&mut self.rng).expect("nonempty")
            } else {
                self.pick_pair(n)
            };
            let hab = h.hom(a, b).clone();
            let (u, v) = match h.base() {
                Base::Bool => {
                    let u = self.chance(0.3);
                    (BaseValue::Bool(u), BaseValue::Bool(true))
                }
                _ => (
                    BaseValue::Set(self.below(max_u + 1)),
                    BaseValue::Set(self.below(max_v + 1)),
                ),
            };
            let (Some(f), Some(gbar)) = (self.base_map(&u, &v), self.base_map(&u, &hab)) else {
                continue;
            };
            return Attachment { a, b, f, gbar };
        }
    }

    /// A push-out instance over FinSet or Bool for the word oracle.
    pub fn oracle_instance(&mut self, env: Envelope) -> (VCategory, Attachment) {
        let objects = 1 + self.below(env.objects);
        let h = if self.chance(0.5) {
            self.bool_category(objects)
        } else {
            self.finset_category(Envelope {
                objects,
                hom: env.hom,
            })
        };
        let att = self.attachment(&h, 1, 2);
        (h, att)
    }

    /// An attachment along a generating map over a chain base, with a random ḡ.
    pub fn generator_attachment(&mut self, h: &VCategory, gens: &[Generator]) -> Attachment {
        let (a, b) = self.pick_pair(h.len());
        let g = gens
            .choose(&mut self.rng)
            .expect("nonempty generator list")
            .map
            .clone();
        let gbar = self
            .base_map(&g.src, h.hom(a, b))
            .expect("chain maps always exist");
        Attachment { a, b, f: g, gbar }
    }

    /// Generating cofibrations whose targets live in positive degrees.
    pub fn positive_generators(base: Base) -> Vec<Generator> {
        generating_sets(base)
            .0
            .into_iter()
            .filter(|g| g.map.tgt.as_chain().min_degree().is_some_and(|d| d >= 1))
            .collect()
    }
}

/// F_p[C] ⊗ A for a finite category C and a small algebra A, truncated to the window.
fn linearize(c: &VCategory, a: &Dga, p: u32, lo: i32, hi: i32) -> VCategory {
    linearize_with_basis(c, a, p, lo, hi).0
}

/// The linearization with the (arrow, algebra element) pair of every basis element per hom.
fn linearize_with_basis(
    c: &VCategory,
    a: &Dga,
    p: u32,
    lo: i32,
    hi: i32,
) -> (VCategory, Vec<Vec<(usize, usize)>>) {
    let n = c.len();
    let base = Base::Chain { p, lo, hi };
    // Basis of hom(x, y) in degree k: pairs (arrow, algebra element of degree k).
    let basis = |x: usize, y: usize| -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for k in lo..=hi {
            for h in 0..c.hom(x, y).size() {
                for (e, &d) in a.degs.iter().enumerate() {
                    if d == k {
                        out.push((h, e));
                    }
                }
            }
        }
        out
    };
    let homs: Vec<Vec<(usize, usize)>> = (0..n * n).map(|i| basis(i / n, i % n)).collect();
    let complex = |x: usize, y: usize| -> BaseValue {
        let b = &homs[x * n + y];
        let dims: Vec<usize> = (lo..=hi)
            .map(|k| b.iter().filter(|&&(_, e)| a.degs[e] == k).count())
            .collect();
        let mut cx = Complex::from_dims(p, lo, hi, dims.clone());
        let local = |i: usize| -> (usize, usize) {
            let k = a.degs[b[i].1];
            let start: usize = dims[..(k - lo) as usize].iter().sum();
            ((k - lo) as usize, i - start)
        };
        for (i, &(h, e)) in b.iter().enumerate() {
            if let Some(t) = a.d[e] {
                if let Some(j) = b.iter().position(|&q| q == (h, t)) {
                    let (slot, col) = local(i);
                    let (_, row) = local(j);
                    cx.d[slot].set(row, col, 1);
                }
            }
        }
        BaseValue::Chain(cx)
    };
    let g = VGraph::from_fn(base, Gen::labels(n), complex);
    let k = VCategory::from_rule(
        g,
        crate::base::Mode::Truncate,
        |x, y, z, u, v| -> Vector {
            let (h1, e1) = homs[y * n + z][u];
            let (h2, e2) = homs[x * n + y][v];
            let h = c.compose_basis(x, y, z, h1, h2)[0].1;
            match a.prod[e1][e2] {
                Some(e) => homs[x * n + z]
                    .iter()
                    .position(|&q| q == (h, e))
                    .map(|j| vec![(1, j)])
                    .unwrap_or_default(),
                None => vec![],
            }
        },
        |x| {
            let id = c.identity_vec(x)[0].1;
            vec![(
                1,
                homs[x * n + x]
                    .iter()
                    .position(|&q| q == (id, 0))
                    .expect("unit in degree 0"),
            )]
        },
    )
    .expect("linearization of a category is a category");
    (k, homs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vcat::validate_category;

    #[test]
    fn generated_categories_are_valid() {
        let mut g = Gen::new(7);
        for _ in 0..20 {
            let c = g.finset_category(Envelope { objects: 3, hom: 3 });
            assert!(validate_category(&c).passed());
            let b = g.bool_category(3);
            assert!(validate_category(&b).passed());
            let d = g.chain_category(2, 0, 2, Envelope { objects: 2, hom: 2 });
            assert!(
                validate_category(&d).passed(),
                "{:?}",
                validate_category(&d)
            );
            let d3 = g.chain_category(3, 0, 2, Envelope { objects: 2, hom: 2 });
            assert!(validate_category(&d3).passed());
        }
    }

    #[test]
    fn random_chain_maps_commute_with_differentials() {
        let mut g = Gen::new(11);
        for _ in 0..30 {
            let x = g.complex(3, 0, 3, 2);
            let y = g.complex(3, 0, 3, 2);
            let f = g.chain_map(&x, &y);
            assert!(f.validate().is_ok());
        }
    }

    #[test]
    fn generated_dk_equivalences_are_functors() {
        let mut g = Gen::new(13);
        for _ in 0..20 {
            let phi = g.dk_equivalence(2, 0, 2, Envelope { objects: 2, hom: 2 });
            assert!(phi.validate().passed());
            assert!(validate_category(&phi.tgt).passed());
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = Gen::new(5).finset_category(Envelope { objects: 3, hom: 2 });
        let b = Gen::new(5).finset_category(Envelope { objects: 3, hom: 2 });
        assert_eq!(a, b);
    }
}
