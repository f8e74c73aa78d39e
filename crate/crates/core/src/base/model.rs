//! Model-structure data: map classification, π₀, generating (trivial) cofibrations,
//! and the mapping-cylinder factorization.

use super::tensor::{Layout, Mode};
use super::{Base, BaseMap, BaseValue, Complex};
use crate::error::{Error, Result};
use crate::fp::Mat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Classification {
    pub is_iso: bool,
    pub is_weak_equivalence: bool,
    pub is_cofibration: bool,
    pub is_fibration: bool,
    pub is_trivial_cofibration: bool,
    pub is_trivial_fibration: bool,
}

pub fn classify_map(f: &BaseMap) -> Classification {
    let (iso, we, cof, fib) = match (&f.src, &f.tgt) {
        (BaseValue::Bool(_), _) | (BaseValue::Set(_), _) => {
            let iso = f.is_iso();
            (iso, iso, true, true)
        }
        (BaseValue::Chain(_), _) => {
            let ms = f.mats();
            let iso = ms.iter().all(|m| m.is_invertible());
            let cof = ms.iter().all(|m| m.is_injective());
            let fib = ms.iter().all(|m| m.is_surjective());
            (iso, iso || is_quasi_iso(f), cof, fib)
        }
    };
    Classification {
        is_iso: iso,
        is_weak_equivalence: we,
        is_cofibration: cof,
        is_fibration: fib,
        is_trivial_cofibration: cof && we,
        is_trivial_fibration: fib && we,
    }
}

/// Canonical homology data in one degree: cycle representatives of a basis of H_n
/// and the boundary basis, both as columns in C_n.
struct HomologyBasis {
    boundaries: Mat,
    reps: Mat,
}

fn homology_basis(c: &Complex, n: i32) -> HomologyBasis {
    let p = c.p;
    let dim = c.dim(n);
    let z = if dim == 0 {
        Mat::zeros(p, 0, 0)
    } else {
        c.diff(n).kernel()
    };
    let b = if n < c.hi && dim > 0 {
        c.diff(n + 1).clone()
    } else {
        Mat::zeros(p, dim, 0)
    };
    // Column space of the boundaries, then extend by cycle basis vectors in order.
    let mut span = crate::fp::Span::new(p, dim);
    for j in 0..b.cols {
        span.insert(b.column(j));
    }
    let mut bcols = Vec::new();
    {
        let mut s2 = crate::fp::Span::new(p, dim);
        for j in 0..b.cols {
            if s2.insert(b.column(j)) {
                bcols.push(j);
            }
        }
    }
    let mut reps = Vec::new();
    for j in 0..z.cols {
        let col = z.column(j);
        if span.insert(col.clone()) {
            reps.push(col);
        }
    }
    let mut rm = Mat::zeros(p, dim, reps.len());
    for (j, v) in reps.iter().enumerate() {
        for (i, &x) in v.iter().enumerate() {
            rm.set(i, j, x);
        }
    }
    HomologyBasis {
        boundaries: b.select_columns(&bcols),
        reps: rm,
    }
}

impl HomologyBasis {
    /// Class coordinates of a cycle.
    fn classify(&self, z: &[u32]) -> Vec<u32> {
        let p = self.reps.p;
        let nb = self.boundaries.cols;
        let nh = self.reps.cols;
        let rows = z.len();
        let mut aug = Mat::zeros(p, rows, nb + nh + 1);
        aug.put_block(0, 0, &self.boundaries);
        aug.put_block(0, nb, &self.reps);
        for (i, &x) in z.iter().enumerate() {
            aug.set(i, nb + nh, x);
        }
        let (r, pivots) = aug.rref();
        assert!(!pivots.contains(&(nb + nh)), "vector is not a cycle");
        let mut coords = vec![0; nh];
        for (row, &pc) in pivots.iter().enumerate() {
            if pc >= nb && pc < nb + nh {
                coords[pc - nb] = r.get(row, nb + nh);
            }
        }
        coords
    }
}

/// dim H_n for every degree of the window.
pub fn homology_dims(c: &Complex) -> Vec<usize> {
    c.degrees()
        .map(|n| {
            let dim = c.dim(n);
            let r_out = if dim == 0 { 0 } else { c.diff(n).rank() };
            let r_in = if n < c.hi { c.diff(n + 1).rank() } else { 0 };
            dim - r_out - r_in
        })
        .collect()
}

/// Matrix of H_n(f) in the canonical homology bases.
fn homology_map(f: &BaseMap, n: i32) -> Mat {
    let (x, y) = (f.src.as_chain(), f.tgt.as_chain());
    let hx = homology_basis(x, n);
    let hy = homology_basis(y, n);
    let fm = f.mat(n);
    let mut out = Mat::zeros(x.p, hy.reps.cols, hx.reps.cols);
    for j in 0..hx.reps.cols {
        let img = fm.mul_vec(&hx.reps.column(j));
        for (i, c) in hy.classify(&img).into_iter().enumerate() {
            out.set(i, j, c);
        }
    }
    out
}

fn is_quasi_iso(f: &BaseMap) -> bool {
    let x = f.src.as_chain();
    x.degrees().all(|n| homology_map(f, n).is_invertible())
}

/// Whether f induces isomorphisms on homology in every degree below `top`. Complexes cut off
/// above the window keep their homology only below the top degree.
pub fn is_quasi_iso_below(f: &BaseMap, top: i32) -> bool {
    let x = f.src.as_chain();
    x.degrees()
        .filter(|&n| n < top)
        .all(|n| homology_map(f, n).is_invertible())
}

/// π₀ = Ho(V)(1, −). Elements are canonical indices; for chain complexes index i
/// encodes the H₀ class with base-p digits (first coordinate most significant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pi0Set {
    pub size: usize,
    /// dim H₀ and p for chain complexes.
    pub h0: Option<(usize, u32)>,
}

impl Pi0Set {
    pub fn coords(&self, i: usize) -> Vec<u32> {
        let (m, p) = self.h0.expect("coordinates only exist for chain complexes");
        let mut c = vec![0; m];
        let mut r = i;
        for k in (0..m).rev() {
            c[k] = (r % p as usize) as u32;
            r /= p as usize;
        }
        c
    }

    pub fn index(&self, coords: &[u32]) -> usize {
        let (_, p) = self.h0.expect("coordinates only exist for chain complexes");
        coords
            .iter()
            .fold(0, |acc, &c| acc * p as usize + c as usize)
    }
}

const PI0_LIMIT: usize = 1 << 20;

pub fn pi0(v: &BaseValue) -> Result<Pi0Set> {
    Ok(match v {
        BaseValue::Bool(b) => Pi0Set {
            size: *b as usize,
            h0: None,
        },
        BaseValue::Set(n) => Pi0Set { size: *n, h0: None },
        BaseValue::Chain(c) => {
            if c.lo > 0 || c.hi < 0 {
                return Ok(Pi0Set {
                    size: 1,
                    h0: Some((0, c.p)),
                });
            }
            let m = homology_dims(c)[(-c.lo) as usize];
            let size = (c.p as usize)
                .checked_pow(m as u32)
                .filter(|&s| s <= PI0_LIMIT);
            let size = size.ok_or_else(|| {
                Error::Unsupported(format!("π₀ with p^{m} elements is too large"))
            })?;
            Pi0Set {
                size,
                h0: Some((m, c.p)),
            }
        }
    })
}

/// The induced function π₀(f) as a table.
pub fn pi0_map(f: &BaseMap) -> Result<Vec<usize>> {
    let (a, b) = (pi0(&f.src)?, pi0(&f.tgt)?);
    Ok(match &f.src {
        BaseValue::Bool(_) => vec![0; a.size],
        BaseValue::Set(_) => f.table().to_vec(),
        BaseValue::Chain(c) => {
            if c.lo > 0 || c.hi < 0 {
                return Ok(vec![0]);
            }
            let h = homology_map(f, 0);
            (0..a.size)
                .map(|i| b.index(&h.mul_vec(&a.coords(i))))
                .collect()
        }
    })
}

/// π₀(a) × π₀(b) → π₀(a ⊗ b), as a table indexed `i * |π₀ b| + j`.
/// The tensor is formed in `mode`.
pub fn pi0_pairing(a: &BaseValue, b: &BaseValue, mode: Mode) -> Result<Vec<usize>> {
    let (pa, pb) = (pi0(a)?, pi0(b)?);
    let l = Layout::new(&[a.clone(), b.clone()], mode)?;
    let pab = pi0(&l.value)?;
    Ok(match a {
        BaseValue::Bool(_) => vec![0; pa.size * pb.size],
        BaseValue::Set(_) => (0..pa.size * pb.size).collect(),
        BaseValue::Chain(ca) => {
            let (cb, cab) = (b.as_chain(), l.value.as_chain());
            if ca.lo > 0 || ca.hi < 0 {
                return Ok(vec![0]);
            }
            let (ha, hb, hab) = (
                homology_basis(ca, 0),
                homology_basis(cb, 0),
                homology_basis(cab, 0),
            );
            let start = |c: &Complex| -> usize { c.dims[..(-c.lo) as usize].iter().sum() };
            let (sa, sb, sab) = (start(ca), start(cb), start(cab));
            let p = ca.p as u64;
            let mut table = Vec::with_capacity(pa.size * pb.size);
            for i in 0..pa.size {
                let za = ha.reps.mul_vec(&pa.coords(i));
                for j in 0..pb.size {
                    let zb = hb.reps.mul_vec(&pb.coords(j));
                    let mut z = vec![0u32; cab.dim(0)];
                    for (ia, &xa) in za.iter().enumerate() {
                        if xa == 0 {
                            continue;
                        }
                        for (ib, &xb) in zb.iter().enumerate() {
                            if xb == 0 {
                                continue;
                            }
                            if let Some(k) = l.encode(&[sa + ia, sb + ib]) {
                                let v = (xa as u64 * xb as u64 % p) as u32;
                                z[k - sab] = (z[k - sab] + v) % ca.p;
                            }
                        }
                    }
                    table.push(pab.index(&hab.classify(&z)));
                }
            }
            table
        }
    })
}

/// A named generating (trivial) cofibration.
#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub map: BaseMap,
}

/// Generating cofibrations I and trivial cofibrations J for the base.
///
/// Chain complexes: I = {Sⁿ⁻¹ ↪ Dⁿ} ∪ {0 → Sⁿ} and J = {0 → Dⁿ}, for every n whose
/// sphere or disk fits in the window.
pub fn generating_sets(base: Base) -> (Vec<Generator>, Vec<Generator>) {
    match base {
        Base::Bool => {
            let i = vec![
                Generator {
                    name: "⊥→⊤".into(),
                    map: BaseMap::bool(false, true).unwrap(),
                },
                Generator {
                    name: "id⊤".into(),
                    map: BaseMap::bool(true, true).unwrap(),
                },
            ];
            (i, vec![])
        }
        Base::FinSet => {
            let i = vec![
                Generator {
                    name: "∅→1".into(),
                    map: BaseMap::from_initial(&BaseValue::Set(1)),
                },
                Generator {
                    name: "2→1".into(),
                    map: BaseMap::set(BaseValue::Set(2), BaseValue::Set(1), vec![0, 0]).unwrap(),
                },
                Generator {
                    name: "id1".into(),
                    map: BaseMap::identity(&BaseValue::Set(1)),
                },
            ];
            (i, vec![])
        }
        Base::Chain { p, lo, hi } => {
            let mut i = Vec::new();
            let mut j = Vec::new();
            for n in lo..=hi {
                let s = BaseValue::Chain(Complex::sphere(p, lo, hi, n).unwrap());
                i.push(Generator {
                    name: format!("0→S{n}"),
                    map: BaseMap::from_initial(&s),
                });
            }
            for n in lo + 1..=hi {
                let s = BaseValue::Chain(Complex::sphere(p, lo, hi, n - 1).unwrap());
                let d = BaseValue::Chain(Complex::disk(p, lo, hi, n).unwrap());
                let mut mats: Vec<Mat> = (lo..=hi)
                    .map(|k| Mat::zeros(p, d.as_chain().dim(k), s.as_chain().dim(k)))
                    .collect();
                mats[(n - 1 - lo) as usize] = Mat::identity(p, 1);
                i.push(Generator {
                    name: format!("S{}→D{n}", n - 1),
                    map: BaseMap::chain(s, d.clone(), mats).unwrap(),
                });
                j.push(Generator {
                    name: format!("0→D{n}"),
                    map: BaseMap::from_initial(&d),
                });
            }
            (i, j)
        }
    }
}

/// Mapping-cylinder factorization f = p ∘ i with i a cofibration and p a trivial
/// fibration. Cyl_n = X_n ⊕ X_{n-1} ⊕ Y_n with d(a, b, c) = (da + b, −db, dc − fb).
pub fn factorize_cylinder(f: &BaseMap) -> Result<(BaseMap, BaseMap)> {
    let (x, y) = match (&f.src, &f.tgt) {
        (BaseValue::Chain(x), BaseValue::Chain(y)) => (x, y),
        _ => {
            return Err(Error::Unsupported(
                "cylinder factorization needs chain complexes".into(),
            ))
        }
    };
    let (p, lo, hi) = (x.p, x.lo, x.hi);
    if x.dim(hi) > 0 {
        return Err(Error::Overflow {
            degree: hi + 1,
            lo,
            hi,
        });
    }
    let dims: Vec<usize> = (lo..=hi)
        .map(|n| x.dim(n) + x.dim(n - 1) + y.dim(n))
        .collect();
    let mut d = Vec::new();
    for n in lo..=hi {
        let (a, b, c) = (x.dim(n), x.dim(n - 1), y.dim(n));
        let (a1, b1, c1) = (x.dim(n - 1), x.dim(n - 2), y.dim(n - 1));
        let rows = if n == lo { 0 } else { a1 + b1 + c1 };
        let mut m = Mat::zeros(p, rows, a + b + c);
        if n > lo {
            m.put_block(0, 0, x.diff(n));
            m.put_block(0, a, &Mat::identity(p, b));
            if n - 1 > lo {
                m.put_block(a1, a, &x.diff(n - 1).neg());
            }
            m.put_block(a1 + b1, a, &f.mat(n - 1).neg());
            m.put_block(a1 + b1, a + b, y.diff(n));
        }
        d.push(m);
    }
    let cyl = BaseValue::Chain(Complex::new(p, lo, hi, dims, d)?);
    let mut im = Vec::new();
    let mut pm = Vec::new();
    for n in lo..=hi {
        let (a, b, c) = (x.dim(n), x.dim(n - 1), y.dim(n));
        let mut i = Mat::zeros(p, a + b + c, a);
        i.put_block(0, 0, &Mat::identity(p, a));
        im.push(i);
        let mut q = Mat::zeros(p, c, a + b + c);
        q.put_block(0, 0, f.mat(n));
        q.put_block(0, a + b, &Mat::identity(p, c));
        pm.push(q);
    }
    let i = BaseMap::chain(f.src.clone(), cyl.clone(), im)?;
    let q = BaseMap::chain(cyl, f.tgt.clone(), pm)?;
    Ok((i, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(c: Complex) -> BaseValue {
        BaseValue::Chain(c)
    }

    #[test]
    fn cone_inclusion_is_cofibration_but_not_weak_equivalence() {
        let s0 = ch(Complex::sphere(2, 0, 2, 0).unwrap());
        let d1 = ch(Complex::disk(2, 0, 2, 1).unwrap());
        let mut mats = vec![
            Mat::zeros(2, 1, 1),
            Mat::zeros(2, 1, 0),
            Mat::zeros(2, 0, 0),
        ];
        mats[0] = Mat::identity(2, 1);
        let f = BaseMap::chain(s0, d1, mats).unwrap();
        let c = classify_map(&f);
        assert!(c.is_cofibration && !c.is_weak_equivalence);
    }

    #[test]
    fn disk_collapse_is_trivial_fibration() {
        let d1 = ch(Complex::disk(2, 0, 2, 1).unwrap());
        let z = Base::chain(2, 0, 2).initial();
        let f = BaseMap::zero(&d1, &z).unwrap();
        assert!(classify_map(&f).is_trivial_fibration);
    }

    #[test]
    fn pi0_examples() {
        assert_eq!(
            pi0(&ch(Complex::sphere(2, 0, 2, 0).unwrap())).unwrap().size,
            2
        );
        assert_eq!(
            pi0(&ch(Complex::disk(2, 0, 2, 1).unwrap())).unwrap().size,
            1
        );
        assert_eq!(pi0(&BaseValue::Set(4)).unwrap().size, 4);
        assert_eq!(pi0(&BaseValue::Bool(false)).unwrap().size, 0);
    }

    #[test]
    fn generator_counts() {
        let (i, j) = generating_sets(Base::chain(2, 0, 2));
        assert_eq!(j.len(), 2);
        assert_eq!(i.len(), 5);
        assert!(j
            .iter()
            .all(|g| classify_map(&g.map).is_trivial_cofibration));
        assert!(generating_sets(Base::Bool).1.is_empty());
    }

    #[test]
    fn cylinder_contracts() {
        let s0 = ch(Complex::sphere(2, 0, 2, 0).unwrap());
        let zero = BaseMap::zero(&s0, &s0).unwrap();
        let (i, q) = factorize_cylinder(&zero).unwrap();
        assert_eq!(q.after(&i).unwrap(), zero);
        assert!(classify_map(&i).is_cofibration);
        assert!(classify_map(&q).is_trivial_fibration);
    }
}
