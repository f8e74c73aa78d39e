//! The three concrete model bases: truth values, finite sets, and bounded chain
//! complexes over F_p.

mod colim;
mod model;
mod tensor;

pub use colim::{coequalizer, coproduct, pushout, Colim, Presentation, Relation, Sum};
pub use model::{
    classify_map, factorize_cylinder, generating_sets, homology_dims, is_quasi_iso_below, pi0,
    pi0_map, pi0_pairing, Classification, Generator, Pi0Set,
};
pub use tensor::{
    apply_segment, assoc, build_map, flatten, left_unitor, reverse, right_unitor, symmetry, tensor,
    tensor_map, tensor_vectors, Layout, Mode, Tensored,
};

use crate::error::{Error, Result};
use crate::fp::Mat;

/// Which base a value lives in. For chain complexes this fixes p and the degree window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    Bool,
    FinSet,
    Chain { p: u32, lo: i32, hi: i32 },
}

/// A bounded chain complex. `d[i]` is the differential out of degree `lo + i`;
/// `d[0]` has zero rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Complex {
    pub p: u32,
    pub lo: i32,
    pub hi: i32,
    pub dims: Vec<usize>,
    pub d: Vec<Mat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BaseValue {
    Bool(bool),
    Set(usize),
    Chain(Complex),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MapData {
    /// The Bool poset has at most one map between two values.
    Bool,
    /// Function table.
    Set(Vec<usize>),
    /// One matrix per degree of the window, `tgt.dims[i] × src.dims[i]`.
    Chain(Vec<Mat>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BaseMap {
    pub src: BaseValue,
    pub tgt: BaseValue,
    pub data: MapData,
}

impl Base {
    pub fn chain(p: u32, lo: i32, hi: i32) -> Self {
        Base::Chain { p, lo, hi }
    }

    pub fn validate(&self) -> Result<()> {
        if let Base::Chain { p, lo, hi } = *self {
            if p < 2 || !(2..p).take_while(|q| q * q <= p).all(|q| p % q != 0) {
                return Err(Error::Invalid(format!("p = {p} is not prime")));
            }
            if lo > hi {
                return Err(Error::Invalid(format!("empty window [{lo}, {hi}]")));
            }
        }
        Ok(())
    }

    /// The initial object ∅.
    pub fn initial(&self) -> BaseValue {
        match *self {
            Base::Bool => BaseValue::Bool(false),
            Base::FinSet => BaseValue::Set(0),
            Base::Chain { p, lo, hi } => BaseValue::Chain(Complex::zero(p, lo, hi)),
        }
    }

    /// The tensor unit 1.
    pub fn unit(&self) -> BaseValue {
        match *self {
            Base::Bool => BaseValue::Bool(true),
            Base::FinSet => BaseValue::Set(1),
            Base::Chain { p, lo, hi } => BaseValue::Chain(
                Complex::concentrated(p, lo, hi, 0, 1).expect("unit needs degree 0 in window"),
            ),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Base::Bool => "bool",
            Base::FinSet => "finset",
            Base::Chain { .. } => "fdch",
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, Base::Chain { .. })
    }
}

impl Complex {
    pub fn zero(p: u32, lo: i32, hi: i32) -> Self {
        let n = (hi - lo + 1) as usize;
        Complex {
            p,
            lo,
            hi,
            dims: vec![0; n],
            d: (0..n).map(|_| Mat::zeros(p, 0, 0)).collect(),
        }
    }

    /// Builds a complex from per-degree dimensions and differentials, checking shapes
    /// and d∘d = 0.
    pub fn new(p: u32, lo: i32, hi: i32, dims: Vec<usize>, d: Vec<Mat>) -> Result<Self> {
        let c = Complex { p, lo, hi, dims, d };
        c.validate()?;
        Ok(c)
    }

    /// `dim` copies of F_p in degree `deg`, zero differential.
    pub fn concentrated(p: u32, lo: i32, hi: i32, deg: i32, dim: usize) -> Result<Self> {
        if deg < lo || deg > hi {
            return Err(Error::Overflow {
                degree: deg,
                lo,
                hi,
            });
        }
        let mut dims = vec![0; (hi - lo + 1) as usize];
        dims[(deg - lo) as usize] = dim;
        Ok(Complex::from_dims(p, lo, hi, dims))
    }

    /// Zero differential with the given dimensions.
    pub fn from_dims(p: u32, lo: i32, hi: i32, dims: Vec<usize>) -> Self {
        let d = (0..dims.len())
            .map(|i| Mat::zeros(p, if i == 0 { 0 } else { dims[i - 1] }, dims[i]))
            .collect();
        Complex { p, lo, hi, dims, d }
    }

    /// The sphere S^n: F_p in degree n.
    pub fn sphere(p: u32, lo: i32, hi: i32, n: i32) -> Result<Self> {
        Complex::concentrated(p, lo, hi, n, 1)
    }

    /// The disk D^n: F_p in degrees n and n-1 with identity differential.
    pub fn disk(p: u32, lo: i32, hi: i32, n: i32) -> Result<Self> {
        if n - 1 < lo || n > hi {
            return Err(Error::Overflow {
                degree: if n > hi { n } else { n - 1 },
                lo,
                hi,
            });
        }
        let mut dims = vec![0; (hi - lo + 1) as usize];
        dims[(n - lo) as usize] = 1;
        dims[(n - 1 - lo) as usize] = 1;
        let mut c = Complex::from_dims(p, lo, hi, dims);
        c.d[(n - lo) as usize] = Mat::identity(p, 1);
        Ok(c)
    }

    pub fn base(&self) -> Base {
        Base::Chain {
            p: self.p,
            lo: self.lo,
            hi: self.hi,
        }
    }

    pub fn dim(&self, deg: i32) -> usize {
        if deg < self.lo || deg > self.hi {
            0
        } else {
            self.dims[(deg - self.lo) as usize]
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.lo..=self.hi
    }

    /// Differential out of degree `deg`, `dim(deg-1) × dim(deg)`.
    pub fn diff(&self, deg: i32) -> &Mat {
        &self.d[(deg - self.lo) as usize]
    }

    /// Lowest degree with a nonzero component.
    pub fn min_degree(&self) -> Option<i32> {
        self.degrees().find(|&n| self.dim(n) > 0)
    }

    pub fn validate(&self) -> Result<()> {
        let n = (self.hi - self.lo + 1) as usize;
        if self.dims.len() != n || self.d.len() != n {
            return Err(Error::Invalid(
                "dimension list does not match the window".into(),
            ));
        }
        for i in 0..n {
            let rows = if i == 0 { 0 } else { self.dims[i - 1] };
            let m = &self.d[i];
            if m.rows != rows || m.cols != self.dims[i] || m.p != self.p {
                return Err(Error::Invalid(format!(
                    "differential shape wrong in degree {}",
                    self.lo + i as i32
                )));
            }
            if i >= 2 && !self.d[i - 1].mul(m).is_zero() {
                return Err(Error::Invalid(format!(
                    "d∘d ≠ 0 at degree {}",
                    self.lo + i as i32
                )));
            }
        }
        Ok(())
    }
}

impl BaseValue {
    pub fn base(&self) -> Base {
        match self {
            BaseValue::Bool(_) => Base::Bool,
            BaseValue::Set(_) => Base::FinSet,
            BaseValue::Chain(c) => c.base(),
        }
    }

    pub fn as_chain(&self) -> &Complex {
        match self {
            BaseValue::Chain(c) => c,
            _ => panic!("expected a chain complex"),
        }
    }

    pub fn as_set(&self) -> usize {
        match self {
            BaseValue::Set(n) => *n,
            _ => panic!("expected a finite set"),
        }
    }

    /// True iff this is the initial object.
    pub fn is_initial(&self) -> bool {
        match self {
            BaseValue::Bool(b) => !b,
            BaseValue::Set(n) => *n == 0,
            BaseValue::Chain(c) => c.total_dim() == 0,
        }
    }

    /// Number of elements (FinSet), basis vectors (FDCh), or 0/1 (Bool).
    pub fn size(&self) -> usize {
        match self {
            BaseValue::Bool(b) => *b as usize,
            BaseValue::Set(n) => *n,
            BaseValue::Chain(c) => c.total_dim(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            BaseValue::Chain(c) => c.validate(),
            _ => Ok(()),
        }
    }

    /// Short human-readable summary used in reports.
    pub fn summary(&self) -> String {
        match self {
            BaseValue::Bool(b) => {
                if *b {
                    "⊤".into()
                } else {
                    "⊥".into()
                }
            }
            BaseValue::Set(n) => format!("{n}"),
            BaseValue::Chain(c) => {
                let parts: Vec<String> = c.dims.iter().map(|d| d.to_string()).collect();
                format!("[{}]", parts.join(","))
            }
        }
    }
}

impl BaseMap {
    pub fn identity(v: &BaseValue) -> BaseMap {
        let data = match v {
            BaseValue::Bool(_) => MapData::Bool,
            BaseValue::Set(n) => MapData::Set((0..*n).collect()),
            BaseValue::Chain(c) => {
                MapData::Chain(c.dims.iter().map(|&n| Mat::identity(c.p, n)).collect())
            }
        };
        BaseMap {
            src: v.clone(),
            tgt: v.clone(),
            data,
        }
    }

    /// The unique map out of the initial object.
    pub fn from_initial(tgt: &BaseValue) -> BaseMap {
        let src = tgt.base().initial();
        Self::zero(&src, tgt).expect("initial maps exist")
    }

    /// The zero map between complexes, or the empty map out of ∅ in FinSet/Bool.
    pub fn zero(src: &BaseValue, tgt: &BaseValue) -> Result<BaseMap> {
        let data = match (src, tgt) {
            (BaseValue::Bool(a), BaseValue::Bool(b)) => {
                if *a && !*b {
                    return Err(Error::Invalid("no map ⊤ → ⊥".into()));
                }
                MapData::Bool
            }
            (BaseValue::Set(0), BaseValue::Set(_)) => MapData::Set(vec![]),
            (BaseValue::Chain(a), BaseValue::Chain(b)) if a.base() == b.base() => MapData::Chain(
                a.dims
                    .iter()
                    .zip(&b.dims)
                    .map(|(&s, &t)| Mat::zeros(a.p, t, s))
                    .collect(),
            ),
            _ => return Err(Error::Invalid("no zero map between these values".into())),
        };
        Ok(BaseMap {
            src: src.clone(),
            tgt: tgt.clone(),
            data,
        })
    }

    /// Map into a terminal-like target: Bool ⊤, singleton set, or the zero complex.
    pub fn to_terminal(src: &BaseValue, tgt: &BaseValue) -> Result<BaseMap> {
        match (src, tgt) {
            (BaseValue::Set(n), BaseValue::Set(1)) => {
                Ok(BaseMap::set(src.clone(), tgt.clone(), vec![0; *n])?)
            }
            _ => Self::zero(src, tgt),
        }
    }

    pub fn bool(src: bool, tgt: bool) -> Result<BaseMap> {
        if src && !tgt {
            return Err(Error::Invalid("no map ⊤ → ⊥".into()));
        }
        Ok(BaseMap {
            src: BaseValue::Bool(src),
            tgt: BaseValue::Bool(tgt),
            data: MapData::Bool,
        })
    }

    pub fn set(src: BaseValue, tgt: BaseValue, table: Vec<usize>) -> Result<BaseMap> {
        let m = BaseMap {
            src,
            tgt,
            data: MapData::Set(table),
        };
        m.validate()?;
        Ok(m)
    }

    pub fn chain(src: BaseValue, tgt: BaseValue, mats: Vec<Mat>) -> Result<BaseMap> {
        let m = BaseMap {
            src,
            tgt,
            data: MapData::Chain(mats),
        };
        m.validate()?;
        Ok(m)
    }

    pub fn base(&self) -> Base {
        self.src.base()
    }

    pub fn table(&self) -> &[usize] {
        match &self.data {
            MapData::Set(t) => t,
            _ => panic!("expected a FinSet map"),
        }
    }

    pub fn mats(&self) -> &[Mat] {
        match &self.data {
            MapData::Chain(m) => m,
            _ => panic!("expected a chain map"),
        }
    }

    pub fn mat(&self, deg: i32) -> &Mat {
        let c = self.src.as_chain();
        &self.mats()[(deg - c.lo) as usize]
    }

    pub fn validate(&self) -> Result<()> {
        if self.src.base() != self.tgt.base() {
            return Err(Error::BaseMismatch(
                "source and target live in different bases".into(),
            ));
        }
        match (&self.src, &self.tgt, &self.data) {
            (BaseValue::Bool(a), BaseValue::Bool(b), MapData::Bool) => {
                if *a && !*b {
                    return Err(Error::Invalid("no map ⊤ → ⊥".into()));
                }
            }
            (BaseValue::Set(n), BaseValue::Set(m), MapData::Set(t)) => {
                if t.len() != *n || t.iter().any(|&v| v >= *m) {
                    return Err(Error::Invalid("function table out of range".into()));
                }
            }
            (BaseValue::Chain(a), BaseValue::Chain(b), MapData::Chain(ms)) => {
                if ms.len() != a.dims.len() {
                    return Err(Error::Invalid("wrong number of degree components".into()));
                }
                for (i, m) in ms.iter().enumerate() {
                    if m.rows != b.dims[i] || m.cols != a.dims[i] || m.p != a.p {
                        return Err(Error::Invalid(format!(
                            "component shape wrong in degree {}",
                            a.lo + i as i32
                        )));
                    }
                    if i >= 1 {
                        let lhs = b.d[i].mul(m);
                        let rhs = ms[i - 1].mul(&a.d[i]);
                        if lhs != rhs {
                            return Err(Error::Invalid(format!(
                                "not a chain map at degree {}",
                                a.lo + i as i32
                            )));
                        }
                    }
                }
            }
            _ => return Err(Error::Invalid("map payload does not match its base".into())),
        }
        Ok(())
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &BaseMap) -> Result<BaseMap> {
        if first.tgt != self.src {
            return Err(Error::NotComposable(format!(
                "target {} vs source {}",
                first.tgt.summary(),
                self.src.summary()
            )));
        }
        let data = match (&self.data, &first.data) {
            (MapData::Bool, MapData::Bool) => MapData::Bool,
            (MapData::Set(g), MapData::Set(f)) => MapData::Set(f.iter().map(|&i| g[i]).collect()),
            (MapData::Chain(g), MapData::Chain(f)) => {
                MapData::Chain(g.iter().zip(f).map(|(a, b)| a.mul(b)).collect())
            }
            _ => {
                return Err(Error::BaseMismatch(
                    "composing maps of different bases".into(),
                ))
            }
        };
        Ok(BaseMap {
            src: first.src.clone(),
            tgt: self.tgt.clone(),
            data,
        })
    }

    /// Composite of a chain `[f1, f2, ...]` applied left to right.
    pub fn chain_of(maps: &[&BaseMap]) -> Result<BaseMap> {
        let mut acc = maps[0].clone();
        for m in &maps[1..] {
            acc = m.after(&acc)?;
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.tgt && *self == BaseMap::identity(&self.src)
    }

    pub fn add(&self, other: &BaseMap) -> Result<BaseMap> {
        match (&self.data, &other.data) {
            (MapData::Chain(a), MapData::Chain(b))
                if self.src == other.src && self.tgt == other.tgt =>
            {
                Ok(BaseMap {
                    src: self.src.clone(),
                    tgt: self.tgt.clone(),
                    data: MapData::Chain(a.iter().zip(b).map(|(x, y)| x.add(y)).collect()),
                })
            }
            _ => Err(Error::Unsupported(
                "addition of maps needs parallel chain maps".into(),
            )),
        }
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Option<BaseMap> {
        let data = match (&self.src, &self.tgt, &self.data) {
            (BaseValue::Bool(a), BaseValue::Bool(b), MapData::Bool) => {
                if a != b {
                    return None;
                }
                MapData::Bool
            }
            (BaseValue::Set(n), BaseValue::Set(m), MapData::Set(t)) => {
                if n != m {
                    return None;
                }
                let mut inv = vec![usize::MAX; *n];
                for (i, &j) in t.iter().enumerate() {
                    if inv[j] != usize::MAX {
                        return None;
                    }
                    inv[j] = i;
                }
                MapData::Set(inv)
            }
            (_, _, MapData::Chain(ms)) => {
                let mut inv = Vec::with_capacity(ms.len());
                for m in ms {
                    inv.push(m.inverse()?);
                }
                MapData::Chain(inv)
            }
            _ => return None,
        };
        Some(BaseMap {
            src: self.tgt.clone(),
            tgt: self.src.clone(),
            data,
        })
    }

    pub fn is_iso(&self) -> bool {
        self.inverse().is_some()
    }

    /// Image of element or basis vector `i` as a sparse vector `(coef, index)`,
    /// indices counted across all degrees of the target.
    pub fn apply_basis(&self, i: usize) -> Vec<(u32, usize)> {
        match &self.data {
            MapData::Bool => vec![(1, 0)],
            MapData::Set(t) => vec![(1, t[i])],
            MapData::Chain(ms) => {
                let s = self.src.as_chain();
                let t = self.tgt.as_chain();
                let (deg_idx, local) = flat_to_degree(&s.dims, i);
                let off: usize = t.dims[..deg_idx].iter().sum();
                let m = &ms[deg_idx];
                (0..m.rows)
                    .filter_map(|r| {
                        let v = m.get(r, local);
                        (v != 0).then_some((v, off + r))
                    })
                    .collect()
            }
        }
    }
}

/// Splits a flat basis index into (degree slot, index within the degree).
pub fn flat_to_degree(dims: &[usize], mut i: usize) -> (usize, usize) {
    for (k, &d) in dims.iter().enumerate() {
        if i < d {
            return (k, i);
        }
        i -= d;
    }
    panic!("basis index out of range")
}

pub(crate) fn same_base(a: &BaseValue, b: &BaseValue) -> Result<Base> {
    let (x, y) = (a.base(), b.base());
    if x != y {
        return Err(Error::BaseMismatch(format!("{x:?} vs {y:?}")));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_is_valid_and_composition_checks_endpoints() {
        let d1 = BaseValue::Chain(Complex::disk(2, 0, 2, 1).unwrap());
        d1.validate().unwrap();
        let id = BaseMap::identity(&d1);
        assert!(id.after(&id).unwrap().is_identity());
        let z = BaseMap::from_initial(&d1);
        assert!(id.after(&z).is_ok());
        assert!(z.after(&id).is_err());
    }

    #[test]
    fn non_chain_map_rejected() {
        let d1 = BaseValue::Chain(Complex::disk(2, 0, 1, 1).unwrap());
        let s0 = BaseValue::Chain(Complex::sphere(2, 0, 1, 0).unwrap());
        // Projecting D¹ onto its degree-0 generator does not commute with d.
        let bad = BaseMap::chain(
            d1,
            s0,
            vec![Mat::from_rows(2, 1, 1, &[1]), Mat::zeros(2, 0, 1)],
        );
        assert!(bad.is_err());
    }
}
