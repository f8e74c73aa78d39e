//! n-ary push-out products, with the source computed as a colimit over the punctured cube.

use crate::base::{tensor_map, Base, BaseMap, BaseValue, Colim, Layout, Mode, Presentation};
use crate::error::{Error, Result};

/// A tensor factor of a push-out product: either a fixed object (a factor `∅ → X`
/// written as `⊗ X`) or an arrow contributing a cube direction.
#[derive(Clone, Debug)]
pub enum Factor {
    Obj(BaseValue),
    Map(BaseMap),
}

impl Factor {
    fn at(&self, upper: bool) -> &BaseValue {
        match self {
            Factor::Obj(x) => x,
            Factor::Map(f) if upper => &f.tgt,
            Factor::Map(f) => &f.src,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PushoutProduct {
    pub factors: Vec<Factor>,
    pub mode: Mode,
    /// Cube vertices in binary counting order (bit k set: arrow k at its target),
    /// the final vertex excluded.
    pub vertices: Vec<Vec<bool>>,
    pub colim: Colim,
    pub source: BaseValue,
    pub target: BaseValue,
    pub map: BaseMap,
    /// κ_i out of the corner where only arrow i sits at its source.
    pub kappa: Vec<BaseMap>,
}

fn vertex_value(
    base: Base,
    factors: &[Factor],
    arrows: &[usize],
    v: &[bool],
    mode: Mode,
) -> Result<Layout> {
    let mut vals: Vec<BaseValue> = factors.iter().map(|f| f.at(true).clone()).collect();
    for (k, &i) in arrows.iter().enumerate() {
        vals[i] = factors[i].at(v[k]).clone();
    }
    Layout::of(base, &vals, mode)
}

/// Tensor of the per-factor maps, where arrow `i` contributes `f_i` if `step[k]` and the
/// identity of the vertex's side otherwise.
fn vertex_map(
    factors: &[Factor],
    arrows: &[usize],
    from: &[bool],
    step: usize,
    mode: Mode,
) -> Result<BaseMap> {
    let ids: Vec<BaseMap> = factors
        .iter()
        .enumerate()
        .map(|(i, f)| match f {
            Factor::Obj(x) => BaseMap::identity(x),
            Factor::Map(g) => {
                let k = arrows.iter().position(|&a| a == i).expect("arrow index");
                if k == step {
                    g.clone()
                } else {
                    BaseMap::identity(f.at(from[k]))
                }
            }
        })
        .collect();
    let refs: Vec<&BaseMap> = ids.iter().collect();
    tensor_map(&refs, mode)
}

/// The map from vertex `v` to the full tensor of targets.
fn to_final(factors: &[Factor], arrows: &[usize], v: &[bool], mode: Mode) -> Result<BaseMap> {
    let ms: Vec<BaseMap> = factors
        .iter()
        .enumerate()
        .map(|(i, f)| match f {
            Factor::Obj(x) => BaseMap::identity(x),
            Factor::Map(g) => {
                let k = arrows.iter().position(|&a| a == i).expect("arrow index");
                if v[k] {
                    BaseMap::identity(&g.tgt)
                } else {
                    g.clone()
                }
            }
        })
        .collect();
    let refs: Vec<&BaseMap> = ms.iter().collect();
    tensor_map(&refs, mode)
}

pub fn pushout_product(fs: &[BaseMap], mode: Mode) -> Result<PushoutProduct> {
    pushout_product_framed(
        &fs.iter().cloned().map(Factor::Map).collect::<Vec<_>>(),
        mode,
    )
}

/// Push-out product of the arrow factors, tensored in place with the object factors.
pub fn pushout_product_framed(factors: &[Factor], mode: Mode) -> Result<PushoutProduct> {
    let arrows: Vec<usize> = factors
        .iter()
        .enumerate()
        .filter(|(_, f)| matches!(f, Factor::Map(_)))
        .map(|(i, _)| i)
        .collect();
    if arrows.is_empty() {
        return Err(Error::Malformed(
            "push-out product needs at least one arrow".into(),
        ));
    }
    let base = factors[arrows[0]].at(true).base();
    let n = arrows.len();
    if n > 20 {
        return Err(Error::Unsupported(
            "push-out product with more than 20 arrows".into(),
        ));
    }
    let vertices: Vec<Vec<bool>> = (0..(1usize << n) - 1)
        .map(|m| (0..n).map(|k| m >> k & 1 == 1).collect())
        .collect();
    let mut pr = Presentation::new(base);
    for v in &vertices {
        pr.add_summand(vertex_value(base, factors, &arrows, v, mode)?.value);
    }
    let index = |v: &[bool]| {
        v.iter()
            .enumerate()
            .map(|(k, &b)| (b as usize) << k)
            .sum::<usize>()
    };
    for (vi, v) in vertices.iter().enumerate() {
        for k in 0..n {
            if v[k] {
                continue;
            }
            let mut w = v.clone();
            w[k] = true;
            let wi = index(&w);
            if wi == vertices.len() {
                continue;
            }
            let e = vertex_map(factors, &arrows, v, k, mode)?;
            let id = BaseMap::identity(&pr.summands[vi]);
            pr.relate(id.src.clone(), Some((vi, id)), Some((wi, e)));
        }
    }
    let colim = pr.glue()?;
    let target = vertex_value(base, factors, &arrows, &vec![true; n], mode)?.value;
    let cocone: Vec<BaseMap> = vertices
        .iter()
        .map(|v| to_final(factors, &arrows, v, mode))
        .collect::<Result<_>>()?;
    let map = colim.induce(&cocone, &target)?;
    let kappa = (0..n)
        .map(|k| {
            let mut v = vec![true; n];
            v[k] = false;
            colim.legs[index(&v)].clone()
        })
        .collect();
    Ok(PushoutProduct {
        factors: factors.to_vec(),
        mode,
        source: colim.value.clone(),
        vertices,
        colim,
        target,
        map,
        kappa,
    })
}

impl PushoutProduct {
    /// Index of the vertex in [`PushoutProduct::vertices`].
    pub fn vertex_index(&self, v: &[bool]) -> usize {
        v.iter().enumerate().map(|(k, &b)| (b as usize) << k).sum()
    }

    /// The map between push-out product sources induced by a map of arrows: for each
    /// factor, a pair (map on sources, map on targets); object factors use equal maps.
    pub fn induced_source_map(
        &self,
        other: &PushoutProduct,
        squares: &[(BaseMap, BaseMap)],
    ) -> Result<BaseMap> {
        if squares.len() != self.factors.len() || self.vertices.len() != other.vertices.len() {
            return Err(Error::Malformed(
                "map of push-out products has the wrong shape".into(),
            ));
        }
        let arrows: Vec<usize> = self
            .factors
            .iter()
            .enumerate()
            .filter(|(_, f)| matches!(f, Factor::Map(_)))
            .map(|(i, _)| i)
            .collect();
        let cocone = self
            .vertices
            .iter()
            .enumerate()
            .map(|(vi, v)| {
                let ms: Vec<&BaseMap> = (0..self.factors.len())
                    .map(|i| match arrows.iter().position(|&a| a == i) {
                        Some(k) if !v[k] => &squares[i].0,
                        _ => &squares[i].1,
                    })
                    .collect();
                other.colim.legs[vi].after(&tensor_map(&ms, self.mode)?)
            })
            .collect::<Result<Vec<_>>>()?;
        self.colim.induce(&cocone, &other.source)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inc() -> BaseMap {
        BaseMap::set(BaseValue::Set(1), BaseValue::Set(2), vec![0]).unwrap()
    }

    #[test]
    fn two_inclusions_of_a_point() {
        let pp = pushout_product(&[inc(), inc()], Mode::Strict).unwrap();
        assert_eq!(pp.source, BaseValue::Set(3));
        assert_eq!(pp.target, BaseValue::Set(4));
        assert!(crate::base::classify_map(&pp.map).is_cofibration);
        let mut t = pp.map.table().to_vec();
        t.sort();
        t.dedup();
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn kappa_composites_are_whiskered_arrows() {
        let pp = pushout_product(&[inc(), inc()], Mode::Strict).unwrap();
        let id2 = BaseMap::identity(&BaseValue::Set(2));
        assert_eq!(
            pp.map.after(&pp.kappa[0]).unwrap(),
            tensor_map(&[&inc(), &id2], Mode::Strict).unwrap()
        );
        assert_eq!(
            pp.map.after(&pp.kappa[1]).unwrap(),
            tensor_map(&[&id2, &inc()], Mode::Strict).unwrap()
        );
    }

    #[test]
    fn product_with_initial_arrow_is_tensor() {
        let x = BaseValue::Set(3);
        let pp = pushout_product(&[inc(), BaseMap::from_initial(&x)], Mode::Strict).unwrap();
        assert_eq!(
            pp.map,
            tensor_map(&[&inc(), &BaseMap::identity(&x)], Mode::Strict).unwrap()
        );
    }

    #[test]
    fn iso_factor_gives_iso() {
        let iso = BaseMap::set(BaseValue::Set(2), BaseValue::Set(2), vec![1, 0]).unwrap();
        assert!(pushout_product(&[inc(), iso], Mode::Strict)
            .unwrap()
            .map
            .is_iso());
    }
}
