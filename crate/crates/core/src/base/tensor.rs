//! n-ary tensor products with an explicit basis layout.
//!
//! A tensor of factors `X1 ⊗ … ⊗ Xn` is built flat. Its basis elements are tuples of
//! factor basis indices. Chain complexes order them by total degree, then degree
//! tuple, then index tuple, all lexicographic. Finite sets use mixed radix with the
//! first factor most significant. Differentials carry the Koszul sign.

use std::collections::HashMap;

use super::{same_base, Base, BaseMap, BaseValue, Complex, MapData};
use crate::error::{Error, Result};
use crate::fp::Mat;

/// What to do with tensor components above the degree window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Nonzero components outside the window are an overflow error.
    Strict,
    /// Components above the window are dropped. This is the truncation σ≤hi, which
    /// is strong monoidal and cocontinuous for windows with `lo ≥ 0`.
    Truncate,
}

#[derive(Clone, Debug)]
enum Kind {
    Bool,
    Set {
        sizes: Vec<usize>,
    },
    Chain {
        tuples: Vec<Vec<usize>>,
        index: HashMap<Vec<usize>, usize>,
    },
}

/// Basis bookkeeping for a flat tensor product.
#[derive(Clone, Debug)]
pub struct Layout {
    pub base: Base,
    pub factors: Vec<BaseValue>,
    pub value: BaseValue,
    /// Whether any nonzero component was dropped by truncation.
    pub truncated: bool,
    kind: Kind,
}

/// A tensor value together with its layout.
pub type Tensored = Layout;

fn degree_of(c: &Complex, flat: usize) -> (i32, usize) {
    let (k, local) = super::flat_to_degree(&c.dims, flat);
    (c.lo + k as i32, local)
}

impl Layout {
    pub fn new(factors: &[BaseValue], mode: Mode) -> Result<Layout> {
        let base = match factors.first() {
            Some(f) => f.base(),
            None => {
                return Err(Error::Malformed(
                    "tensor of zero factors needs a base; use Layout::unit".into(),
                ))
            }
        };
        for f in factors {
            same_base(&factors[0], f)?;
        }
        Self::build(base, factors, mode)
    }

    /// Layout of the empty tensor, which is the unit.
    pub fn unit(base: Base) -> Layout {
        Self::build(base, &[], Mode::Strict).expect("unit tensor")
    }

    /// Layout of a tensor whose factor list may be empty.
    pub fn of(base: Base, factors: &[BaseValue], mode: Mode) -> Result<Layout> {
        for f in factors {
            if f.base() != base {
                return Err(Error::BaseMismatch("factor base differs".into()));
            }
        }
        Self::build(base, factors, mode)
    }

    fn build(base: Base, factors: &[BaseValue], mode: Mode) -> Result<Layout> {
        match base {
            Base::Bool => {
                let v = factors.iter().all(|f| matches!(f, BaseValue::Bool(true)));
                Ok(Layout {
                    base,
                    factors: factors.to_vec(),
                    value: BaseValue::Bool(v),
                    truncated: false,
                    kind: Kind::Bool,
                })
            }
            Base::FinSet => {
                let sizes: Vec<usize> = factors.iter().map(|f| f.as_set()).collect();
                let n = sizes.iter().product();
                Ok(Layout {
                    base,
                    factors: factors.to_vec(),
                    value: BaseValue::Set(n),
                    truncated: false,
                    kind: Kind::Set { sizes },
                })
            }
            Base::Chain { p, lo, hi } => {
                let cs: Vec<&Complex> = factors.iter().map(|f| f.as_chain()).collect();
                let width = (hi - lo + 1) as usize;
                // Degree tuples grouped by total degree, each list already lexicographic.
                let mut by_total: Vec<Vec<Vec<i32>>> = vec![Vec::new(); width];
                let mut truncated = false;
                let mut cur = Vec::with_capacity(cs.len());
                let mut overflow = None;
                enum_degree_tuples(&cs, 0, &mut cur, 0, &mut |tuple, total| {
                    if total < lo || total > hi {
                        if total > hi && mode == Mode::Truncate {
                            truncated = true;
                        } else if overflow.is_none() {
                            overflow = Some(total);
                        }
                    } else {
                        by_total[(total - lo) as usize].push(tuple.to_vec());
                    }
                });
                if cs.is_empty() {
                    // The empty tensor is the unit, F_p in degree 0.
                    by_total = vec![Vec::new(); width];
                    if lo > 0 || hi < 0 {
                        return Err(Error::Overflow { degree: 0, lo, hi });
                    }
                    by_total[(-lo) as usize].push(vec![]);
                }
                if let Some(degree) = overflow {
                    return Err(Error::Overflow { degree, lo, hi });
                }
                if truncated && lo < 0 {
                    return Err(Error::Unsupported(
                        "truncating tensor needs a window with lo ≥ 0".into(),
                    ));
                }
                let offsets: Vec<Vec<usize>> = cs
                    .iter()
                    .map(|c| {
                        let mut o = vec![0; c.dims.len()];
                        for k in 1..c.dims.len() {
                            o[k] = o[k - 1] + c.dims[k - 1];
                        }
                        o
                    })
                    .collect();
                let mut tuples = Vec::new();
                let mut dims = vec![0; width];
                for (slot, list) in by_total.iter().enumerate() {
                    for degs in list {
                        let radix: Vec<usize> =
                            degs.iter().zip(&cs).map(|(&d, c)| c.dim(d)).collect();
                        let count: usize = radix.iter().product();
                        for mut r in 0..count {
                            let mut t = vec![0; radix.len()];
                            for k in (0..radix.len()).rev() {
                                t[k] = offsets[k][(degs[k] - cs[k].lo) as usize] + r % radix[k];
                                r /= radix[k];
                            }
                            tuples.push(t);
                        }
                        dims[slot] += count;
                    }
                }
                let index: HashMap<Vec<usize>, usize> = tuples
                    .iter()
                    .enumerate()
                    .map(|(i, t)| (t.clone(), i))
                    .collect();
                let mut d: Vec<Mat> = (0..width)
                    .map(|k| Mat::zeros(p, if k == 0 { 0 } else { dims[k - 1] }, dims[k]))
                    .collect();
                let mut starts = vec![0; width];
                for k in 1..width {
                    starts[k] = starts[k - 1] + dims[k - 1];
                }
                for (i, t) in tuples.iter().enumerate() {
                    let degs: Vec<(i32, usize)> =
                        t.iter().zip(&cs).map(|(&e, c)| degree_of(c, e)).collect();
                    let total: i32 = degs.iter().map(|x| x.0).sum();
                    let slot = (total - lo) as usize;
                    if slot == 0 {
                        continue;
                    }
                    let col = i - starts[slot];
                    let mut prefix = 0i32;
                    for (k, c) in cs.iter().enumerate() {
                        let (dk, local) = degs[k];
                        let sign_neg = prefix.rem_euclid(2) == 1;
                        prefix += dk;
                        if dk - 1 < c.lo {
                            continue;
                        }
                        let dm = c.diff(dk);
                        let off_below = offsets[k][(dk - 1 - c.lo) as usize];
                        for r in 0..dm.rows {
                            let v = dm.get(r, local);
                            if v == 0 {
                                continue;
                            }
                            let mut nt = t.clone();
                            nt[k] = off_below + r;
                            let j = index[&nt];
                            let row = j - starts[slot - 1];
                            let v = if sign_neg { (p - v) % p } else { v };
                            d[slot].add_at(row, col, v);
                        }
                    }
                }
                let value = BaseValue::Chain(Complex { p, lo, hi, dims, d });
                Ok(Layout {
                    base,
                    factors: factors.to_vec(),
                    value,
                    truncated,
                    kind: Kind::Chain { tuples, index },
                })
            }
        }
    }

    pub fn len(&self) -> usize {
        self.value.size()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index of a tuple of factor indices; `None` if it fell outside the window.
    pub fn encode(&self, tuple: &[usize]) -> Option<usize> {
        match &self.kind {
            Kind::Bool => Some(0),
            Kind::Set { sizes } => {
                let mut i = 0;
                for (k, &s) in sizes.iter().enumerate() {
                    i = i * s + tuple[k];
                }
                Some(i)
            }
            Kind::Chain { index, .. } => index.get(tuple).copied(),
        }
    }

    pub fn decode(&self, i: usize) -> Vec<usize> {
        match &self.kind {
            Kind::Bool => vec![0; self.factors.len()],
            Kind::Set { sizes } => {
                let mut t = vec![0; sizes.len()];
                let mut r = i;
                for k in (0..sizes.len()).rev() {
                    t[k] = r % sizes[k];
                    r /= sizes[k];
                }
                t
            }
            Kind::Chain { tuples, .. } => tuples[i].clone(),
        }
    }

    /// Total degree of basis element `i` (chain complexes only).
    pub fn degree(&self, i: usize) -> i32 {
        let c = self.value.as_chain();
        degree_of(c, i).0
    }

    /// Builds a map out of this tensor from images of basis tuples.
    pub fn map_to<F>(&self, tgt: &BaseValue, f: F) -> Result<BaseMap>
    where
        F: Fn(&[usize]) -> Result<Vec<(u32, usize)>>,
    {
        build_map(&self.value, tgt, |i| f(&self.decode(i)))
    }
}

/// Builds a map from the images of individual source basis elements.
pub fn build_map<F>(src: &BaseValue, tgt: &BaseValue, f: F) -> Result<BaseMap>
where
    F: Fn(usize) -> Result<Vec<(u32, usize)>>,
{
    same_base(src, tgt)?;
    match (src, tgt) {
        (BaseValue::Bool(_), BaseValue::Bool(b)) => {
            if src.size() > 0 {
                f(0)?;
            }
            BaseMap::bool(src.size() > 0, *b)
        }
        (BaseValue::Set(n), BaseValue::Set(_)) => {
            let mut table = Vec::with_capacity(*n);
            for i in 0..*n {
                let img = f(i)?;
                if img.len() != 1 || img[0].0 != 1 {
                    return Err(Error::Invalid(
                        "set map image must be a single element".into(),
                    ));
                }
                table.push(img[0].1);
            }
            BaseMap::set(src.clone(), tgt.clone(), table)
        }
        (BaseValue::Chain(s), BaseValue::Chain(t)) => {
            let mut mats: Vec<Mat> = s
                .dims
                .iter()
                .zip(&t.dims)
                .map(|(&a, &b)| Mat::zeros(s.p, b, a))
                .collect();
            let mut start_s = 0;
            let mut start_t = 0;
            for k in 0..s.dims.len() {
                for col in 0..s.dims[k] {
                    for (c, j) in f(start_s + col)? {
                        if j < start_t || j >= start_t + t.dims[k] {
                            return Err(Error::Invalid(
                                "image leaves the degree of its source".into(),
                            ));
                        }
                        mats[k].add_at(j - start_t, col, c);
                    }
                }
                start_s += s.dims[k];
                start_t += t.dims[k];
            }
            BaseMap::chain(src.clone(), tgt.clone(), mats)
        }
        _ => unreachable!(),
    }
}

fn enum_degree_tuples(
    cs: &[&Complex],
    k: usize,
    cur: &mut Vec<i32>,
    total: i32,
    emit: &mut dyn FnMut(&[i32], i32),
) {
    if cs.is_empty() {
        return;
    }
    if k == cs.len() {
        emit(cur, total);
        return;
    }
    for d in cs[k].degrees() {
        if cs[k].dim(d) == 0 {
            continue;
        }
        cur.push(d);
        enum_degree_tuples(cs, k + 1, cur, total + d, emit);
        cur.pop();
    }
}

/// Product of sparse vectors, encoded in `layout`. Tuples that fall outside the window
/// are dropped.
pub fn tensor_vectors(layout: &Layout, parts: &[Vec<(u32, usize)>]) -> Vec<(u32, usize)> {
    let p = match layout.base {
        Base::Chain { p, .. } => p as u64,
        _ => 0,
    };
    let mut acc: Vec<(u64, Vec<usize>)> = vec![(1, Vec::with_capacity(parts.len()))];
    for part in parts {
        let mut next = Vec::with_capacity(acc.len() * part.len());
        for (c, t) in &acc {
            for &(c2, j) in part {
                let mut nt = t.clone();
                nt.push(j);
                let coef = if p == 0 { 1 } else { c * c2 as u64 % p };
                next.push((coef, nt));
            }
        }
        acc = next;
    }
    acc.into_iter()
        .filter_map(|(c, t)| layout.encode(&t).map(|j| (c as u32, j)))
        .collect()
}

/// Binary tensor of values.
pub fn tensor(a: &BaseValue, b: &BaseValue) -> Result<BaseValue> {
    Ok(Layout::new(&[a.clone(), b.clone()], Mode::Strict)?.value)
}

/// f1 ⊗ … ⊗ fn between flat tensors.
pub fn tensor_map(fs: &[&BaseMap], mode: Mode) -> Result<BaseMap> {
    let srcs: Vec<BaseValue> = fs.iter().map(|f| f.src.clone()).collect();
    let tgts: Vec<BaseValue> = fs.iter().map(|f| f.tgt.clone()).collect();
    let base = fs
        .first()
        .map(|f| f.base())
        .ok_or_else(|| Error::Malformed("empty map list".into()))?;
    let ls = Layout::of(base, &srcs, mode)?;
    let lt = Layout::of(base, &tgts, mode)?;
    ls.map_to(&lt.value, |t| {
        let parts: Vec<Vec<(u32, usize)>> =
            t.iter().zip(fs).map(|(&e, f)| f.apply_basis(e)).collect();
        Ok(tensor_vectors(&lt, &parts))
    })
}

/// (a ⊗ b) ⊗ c → a ⊗ (b ⊗ c).
pub fn assoc(a: &BaseValue, b: &BaseValue, c: &BaseValue, mode: Mode) -> Result<BaseMap> {
    let ab = Layout::new(&[a.clone(), b.clone()], mode)?;
    let bc = Layout::new(&[b.clone(), c.clone()], mode)?;
    let src = Layout::new(&[ab.value.clone(), c.clone()], mode)?;
    let tgt = Layout::new(&[a.clone(), bc.value.clone()], mode)?;
    src.map_to(&tgt.value, |t| {
        let x = ab.decode(t[0]);
        let inner = bc.encode(&[x[1], t[1]]);
        Ok(inner
            .and_then(|j| tgt.encode(&[x[0], j]))
            .map(|k| vec![(1, k)])
            .unwrap_or_default())
    })
}

/// 1 ⊗ a → a.
pub fn left_unitor(a: &BaseValue, mode: Mode) -> Result<BaseMap> {
    let l = Layout::new(&[a.base().unit(), a.clone()], mode)?;
    l.map_to(a, |t| Ok(vec![(1, t[1])]))
}

/// a ⊗ 1 → a.
pub fn right_unitor(a: &BaseValue, mode: Mode) -> Result<BaseMap> {
    let l = Layout::new(&[a.clone(), a.base().unit()], mode)?;
    l.map_to(a, |t| Ok(vec![(1, t[0])]))
}

/// a ⊗ b → b ⊗ a, with sign (-1)^{|x||y|} on chain complexes.
pub fn symmetry(a: &BaseValue, b: &BaseValue, mode: Mode) -> Result<BaseMap> {
    let src = Layout::new(&[a.clone(), b.clone()], mode)?;
    let tgt = Layout::new(&[b.clone(), a.clone()], mode)?;
    src.map_to(&tgt.value, |t| {
        let j = tgt
            .encode(&[t[1], t[0]])
            .expect("symmetric tuple stays in window");
        let coef = match (a, b) {
            (BaseValue::Chain(ca), BaseValue::Chain(cb)) => {
                let (da, db) = (degree_of(ca, t[0]).0, degree_of(cb, t[1]).0);
                if (da * db).rem_euclid(2) == 1 {
                    ca.p - 1
                } else {
                    1
                }
            }
            _ => 1,
        };
        Ok(vec![(coef, j)])
    })
}

/// Reverses the factor order of a flat tensor, with the Koszul sign of the permutation.
pub fn reverse(factors: &[BaseValue], base: Base, mode: Mode) -> Result<BaseMap> {
    let src = Layout::of(base, factors, mode)?;
    let rev: Vec<BaseValue> = factors.iter().rev().cloned().collect();
    let tgt = Layout::of(base, &rev, mode)?;
    src.map_to(&tgt.value, |t| {
        let rt: Vec<usize> = t.iter().rev().copied().collect();
        let j = tgt.encode(&rt).expect("reversed tuple stays in window");
        let coef = match base {
            Base::Chain { p, .. } => {
                let degs: Vec<i32> = t
                    .iter()
                    .zip(factors)
                    .map(|(&e, f)| degree_of(f.as_chain(), e).0)
                    .collect();
                let mut s = 0i32;
                for i in 0..degs.len() {
                    for j in i + 1..degs.len() {
                        s += degs[i] * degs[j];
                    }
                }
                if s.rem_euclid(2) == 1 {
                    p - 1
                } else {
                    1
                }
            }
            _ => 1,
        };
        Ok(vec![(coef, j)])
    })
}

/// The isomorphism ⊗_k (⊗ parts_k) → ⊗ (concatenated parts).
pub fn flatten(base: Base, parts: &[Vec<BaseValue>], mode: Mode) -> Result<BaseMap> {
    let inner: Vec<Layout> = parts
        .iter()
        .map(|p| Layout::of(base, p, mode))
        .collect::<Result<_>>()?;
    let outer = Layout::of(
        base,
        &inner.iter().map(|l| l.value.clone()).collect::<Vec<_>>(),
        mode,
    )?;
    let flat: Vec<BaseValue> = parts.iter().flatten().cloned().collect();
    let tgt = Layout::of(base, &flat, mode)?;
    outer.map_to(&tgt.value, |t| {
        let mut ft = Vec::with_capacity(flat.len());
        for (k, &e) in t.iter().enumerate() {
            ft.extend(inner[k].decode(e));
        }
        Ok(tgt.encode(&ft).map(|j| vec![(1, j)]).unwrap_or_default())
    })
}

/// `id ⊗ m ⊗ id` on a flat tensor: replaces `factors[start..start+len]` by `m.tgt`,
/// where `m.src` is the flat tensor of that segment.
pub fn apply_segment(
    factors: &[BaseValue],
    start: usize,
    len: usize,
    m: &BaseMap,
    mode: Mode,
) -> Result<BaseMap> {
    let base = m.base();
    let seg = Layout::of(base, &factors[start..start + len], mode)?;
    if seg.value != m.src {
        return Err(Error::NotComposable(
            "segment tensor does not match the map's source".into(),
        ));
    }
    let src = Layout::of(base, factors, mode)?;
    let mut out_f: Vec<BaseValue> = factors[..start].to_vec();
    out_f.push(m.tgt.clone());
    out_f.extend_from_slice(&factors[start + len..]);
    let tgt = Layout::of(base, &out_f, mode)?;
    src.map_to(&tgt.value, |t| {
        let Some(si) = seg.encode(&t[start..start + len]) else {
            return Ok(vec![]);
        };
        let mut out = Vec::new();
        for (c, y) in m.apply_basis(si) {
            let mut nt: Vec<usize> = t[..start].to_vec();
            nt.push(y);
            nt.extend_from_slice(&t[start + len..]);
            if let Some(j) = tgt.encode(&nt) {
                out.push((c, j));
            }
        }
        Ok(out)
    })
}

impl MapData {
    pub fn is_bool(&self) -> bool {
        matches!(self, MapData::Bool)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(p: u32, lo: i32, hi: i32, dims: &[usize]) -> BaseValue {
        BaseValue::Chain(Complex::from_dims(p, lo, hi, dims.to_vec()))
    }

    #[test]
    fn bool_and_finset() {
        assert_eq!(
            tensor(&BaseValue::Bool(true), &BaseValue::Bool(false)).unwrap(),
            BaseValue::Bool(false)
        );
        assert_eq!(
            tensor(&BaseValue::Set(2), &BaseValue::Set(3)).unwrap(),
            BaseValue::Set(6)
        );
    }

    #[test]
    fn degree_one_squared_is_degree_two() {
        let a = ch(2, 0, 2, &[0, 1, 0]);
        let t = tensor(&a, &a).unwrap();
        assert_eq!(t.as_chain().dims, vec![0, 0, 1]);
    }

    #[test]
    fn overflow_is_an_error_unless_truncating() {
        let a = ch(2, 0, 1, &[0, 1]);
        assert!(matches!(
            tensor(&a, &a),
            Err(Error::Overflow { degree: 2, .. })
        ));
        let l = Layout::new(&[a.clone(), a], Mode::Truncate).unwrap();
        assert!(l.truncated);
        assert_eq!(l.value.as_chain().dims, vec![0, 0]);
    }

    #[test]
    fn tensor_of_disks_is_a_complex() {
        let d = BaseValue::Chain(Complex::disk(3, 0, 2, 1).unwrap());
        let t = tensor(&d, &d).unwrap();
        t.validate().unwrap();
        assert_eq!(t.as_chain().dims, vec![1, 2, 1]);
    }

    #[test]
    fn symmetry_squares_to_identity() {
        let d = BaseValue::Chain(Complex::disk(3, 0, 2, 1).unwrap());
        let s = ch(3, 0, 2, &[1, 1, 0]);
        let f = symmetry(&d, &s, Mode::Strict).unwrap();
        let g = symmetry(&s, &d, Mode::Strict).unwrap();
        assert!(g.after(&f).unwrap().is_identity());
    }
}
