//! JSON instance files.
//!
//! Values: `true`/`false` in Bool, a cardinality in FinSet, and
//! `{"dims": [...], "d": [...]}` for chain complexes, where `d` lists the differentials
//! out of degrees lo+1..=hi as row-major arrays of rows. Map data is `null` in Bool,
//! an index table in FinSet, and one matrix per degree for chain maps. Hom tables are
//! keyed `"x→y"`, composition tables `"x→y→z"`. Entries whose source is initial may be
//! omitted. Keys are written sorted.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::base::{Base, BaseMap, BaseValue, Complex, Mode};
use crate::error::{Error, Result};
use crate::fp::Mat;
use crate::graph::VGraph;
use crate::vcat::{VCategory, VFunctor};

pub const SCHEMA_VERSION: u64 = 1;

fn bad(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

pub fn base_json(b: Base) -> Value {
    match b {
        Base::Bool => json!({"tag": "bool"}),
        Base::FinSet => json!({"tag": "finset"}),
        Base::Chain { p, lo, hi } => json!({"tag": "fdch", "p": p, "lo": lo, "hi": hi}),
    }
}

pub fn parse_base(v: &Value) -> Result<Base> {
    let tag = v
        .get("tag")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("base needs a tag"))?;
    let b = match tag {
        "bool" => Base::Bool,
        "finset" => Base::FinSet,
        "fdch" => {
            let int = |k: &str| {
                v.get(k)
                    .and_then(Value::as_i64)
                    .ok_or_else(|| bad(format!("fdch base needs {k}")))
            };
            Base::chain(int("p")? as u32, int("lo")? as i32, int("hi")? as i32)
        }
        t => return Err(bad(format!("unknown base tag {t:?}"))),
    };
    b.validate()?;
    Ok(b)
}

fn mat_json(m: &Mat) -> Value {
    Value::Array((0..m.rows).map(|r| json!(m.row(r))).collect())
}

fn parse_mat(p: u32, rows: usize, cols: usize, v: &Value) -> Result<Mat> {
    let arr = v
        .as_array()
        .ok_or_else(|| bad("matrix must be an array of rows"))?;
    if arr.len() != rows {
        return Err(bad(format!(
            "matrix needs {rows} rows, found {}",
            arr.len()
        )));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for row in arr {
        let r = row
            .as_array()
            .ok_or_else(|| bad("matrix row must be an array"))?;
        if r.len() != cols {
            return Err(bad(format!(
                "matrix row needs {cols} entries, found {}",
                r.len()
            )));
        }
        for e in r {
            let x = e
                .as_i64()
                .ok_or_else(|| bad("matrix entries must be integers"))?;
            if x < 0 || x >= p as i64 {
                return Err(bad(format!("matrix entry {x} is not in [0, {p})")));
            }
            entries.push(x);
        }
    }
    Ok(Mat::from_rows(p, rows, cols, &entries))
}

pub fn value_json(v: &BaseValue) -> Value {
    match v {
        BaseValue::Bool(b) => json!(b),
        BaseValue::Set(n) => json!(n),
        BaseValue::Chain(c) => json!({
            "dims": c.dims,
            "d": c.d[1..].iter().map(mat_json).collect::<Vec<_>>(),
        }),
    }
}

pub fn parse_value(base: Base, v: &Value) -> Result<BaseValue> {
    let out = match base {
        Base::Bool => BaseValue::Bool(
            v.as_bool()
                .ok_or_else(|| bad("Bool value must be true or false"))?,
        ),
        Base::FinSet => BaseValue::Set(
            v.as_u64()
                .ok_or_else(|| bad("FinSet value must be a cardinality"))? as usize,
        ),
        Base::Chain { p, lo, hi } => {
            let dims: Vec<usize> = v
                .get("dims")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("complex needs dims"))?
                .iter()
                .map(|d| {
                    d.as_u64()
                        .map(|x| x as usize)
                        .ok_or_else(|| bad("dims must be naturals"))
                })
                .collect::<Result<_>>()?;
            let width = (hi - lo + 1) as usize;
            if dims.len() != width {
                return Err(bad(format!("complex needs {width} dims")));
            }
            let empty = Vec::new();
            let ds = match v.get("d") {
                Some(d) => d.as_array().ok_or_else(|| bad("d must be an array"))?,
                None => &empty,
            };
            let mut d = vec![Mat::zeros(p, 0, dims[0])];
            for k in 1..width {
                d.push(match ds.get(k - 1) {
                    Some(m) => parse_mat(p, dims[k - 1], dims[k], m)?,
                    None => Mat::zeros(p, dims[k - 1], dims[k]),
                });
            }
            BaseValue::Chain(Complex::new(p, lo, hi, dims, d)?)
        }
    };
    out.validate()?;
    Ok(out)
}

pub fn map_data_json(f: &BaseMap) -> Value {
    match f.src {
        BaseValue::Bool(_) => Value::Null,
        BaseValue::Set(_) => json!(f.table()),
        BaseValue::Chain(_) => Value::Array(f.mats().iter().map(mat_json).collect()),
    }
}

pub fn map_json(f: &BaseMap) -> Value {
    json!({"src": value_json(&f.src), "tgt": value_json(&f.tgt), "data": map_data_json(f)})
}

pub fn parse_map_data(src: &BaseValue, tgt: &BaseValue, v: &Value) -> Result<BaseMap> {
    match (src, tgt) {
        (BaseValue::Bool(a), BaseValue::Bool(b)) => BaseMap::bool(*a, *b),
        (BaseValue::Set(_), BaseValue::Set(_)) => {
            let t = v
                .as_array()
                .ok_or_else(|| bad("FinSet map must be an index table"))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .map(|i| i as usize)
                        .ok_or_else(|| bad("table entries must be naturals"))
                })
                .collect::<Result<_>>()?;
            BaseMap::set(src.clone(), tgt.clone(), t)
        }
        (BaseValue::Chain(s), BaseValue::Chain(t)) => {
            let arr = v
                .as_array()
                .ok_or_else(|| bad("chain map must list one matrix per degree"))?;
            if arr.len() != s.dims.len() {
                return Err(bad("chain map must list one matrix per degree"));
            }
            let mats = arr
                .iter()
                .enumerate()
                .map(|(k, m)| parse_mat(s.p, t.dims[k], s.dims[k], m))
                .collect::<Result<_>>()?;
            BaseMap::chain(src.clone(), tgt.clone(), mats)
        }
        _ => Err(Error::BaseMismatch(
            "map endpoints live in different bases".into(),
        )),
    }
}

fn labels(v: &Value) -> Result<Vec<String>> {
    v.get("objects")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing objects list"))?
        .iter()
        .map(|o| {
            o.as_str()
                .map(String::from)
                .ok_or_else(|| bad("object labels must be strings"))
        })
        .collect()
}

fn key2(o: &[String], x: usize, y: usize) -> String {
    format!("{}→{}", o[x], o[y])
}

fn key3(o: &[String], x: usize, y: usize, z: usize) -> String {
    format!("{}→{}→{}", o[x], o[y], o[z])
}

fn check_keys(table: Option<&Value>, allowed: &[String], what: &str) -> Result<()> {
    if let Some(Value::Object(m)) = table {
        for k in m.keys() {
            if !allowed.contains(k) {
                return Err(Error::UnknownLabel(format!("{what} key {k:?}")));
            }
        }
    }
    Ok(())
}

pub fn graph_json(g: &VGraph) -> Value {
    let o = &g.objects;
    let mut homs = Map::new();
    for x in 0..g.len() {
        for y in 0..g.len() {
            homs.insert(key2(o, x, y), value_json(g.hom(x, y)));
        }
    }
    json!({"objects": o, "homs": homs})
}

pub fn parse_graph(base: Base, v: &Value) -> Result<VGraph> {
    let o = labels(v)?;
    let n = o.len();
    let table = v.get("homs");
    let keys: Vec<String> = (0..n * n).map(|i| key2(&o, i / n, i % n)).collect();
    check_keys(table, &keys, "hom")?;
    let homs = keys
        .iter()
        .map(|k| match table.and_then(|t| t.get(k)) {
            Some(h) => parse_value(base, h),
            None => Ok(base.initial()),
        })
        .collect::<Result<_>>()?;
    VGraph::new(base, o, homs)
}

fn mode_str(m: Mode) -> &'static str {
    match m {
        Mode::Strict => "strict",
        Mode::Truncate => "truncate",
    }
}

pub fn category_json(k: &VCategory) -> Value {
    let o = k.objects();
    let n = k.len();
    let mut comp = Map::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let c = k.comp_at(x, y, z);
                if c.src.size() > 0 {
                    comp.insert(key3(o, x, y, z), map_data_json(c));
                }
            }
        }
    }
    let idm: Map<String, Value> = (0..n)
        .map(|x| (o[x].clone(), map_data_json(&k.idm[x])))
        .collect();
    let mut v = graph_json(&k.graph);
    v["comp"] = Value::Object(comp);
    v["idm"] = Value::Object(idm);
    v["mode"] = json!(mode_str(k.mode));
    v
}

pub fn parse_category(base: Base, v: &Value) -> Result<VCategory> {
    let g = parse_graph(base, v)?;
    let mode = match v.get("mode").and_then(Value::as_str) {
        None | Some("truncate") => Mode::Truncate,
        Some("strict") => Mode::Strict,
        Some(m) => return Err(bad(format!("unknown tensor mode {m:?}"))),
    };
    let o = g.objects.clone();
    let n = g.len();
    let table = v.get("comp");
    let keys: Vec<String> = (0..n * n * n)
        .map(|i| key3(&o, i / (n * n), (i / n) % n, i % n))
        .collect();
    check_keys(table, &keys, "composition")?;
    check_keys(v.get("idm"), &o, "identity")?;
    let mut comp = Vec::with_capacity(n * n * n);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let src =
                    crate::base::Layout::new(&[g.hom(y, z).clone(), g.hom(x, y).clone()], mode)?
                        .value;
                let tgt = g.hom(x, z);
                comp.push(match table.and_then(|t| t.get(key3(&o, x, y, z))) {
                    Some(d) => parse_map_data(&src, tgt, d)?,
                    None if src.size() == 0 => BaseMap::zero(&src, tgt)?,
                    None => return Err(bad(format!("missing composition {}", key3(&o, x, y, z)))),
                });
            }
        }
    }
    let unit = base.unit();
    let idm = (0..n)
        .map(|x| {
            let d = v
                .get("idm")
                .and_then(|t| t.get(&o[x]))
                .ok_or_else(|| bad(format!("missing identity of {}", o[x])))?;
            parse_map_data(&unit, g.hom(x, x), d)
        })
        .collect::<Result<_>>()?;
    VCategory::new(g, mode, comp, idm)
}

pub fn functor_json(f: &VFunctor, src: &str, tgt: &str) -> Value {
    let (so, to) = (f.src.objects(), f.tgt.objects());
    let objmap: Map<String, Value> = f
        .objmap()
        .iter()
        .enumerate()
        .map(|(i, &j)| (so[i].clone(), json!(to[j])))
        .collect();
    let mut comps = Map::new();
    for x in 0..f.src.len() {
        for y in 0..f.src.len() {
            if f.src.hom(x, y).size() > 0 {
                comps.insert(key2(so, x, y), map_data_json(f.comp(x, y)));
            }
        }
    }
    json!({"src": src, "tgt": tgt, "objmap": objmap, "comps": comps})
}

pub fn parse_functor(v: &Value, cats: &BTreeMap<String, VCategory>) -> Result<VFunctor> {
    let get = |k: &str| -> Result<&VCategory> {
        let name = v
            .get(k)
            .and_then(Value::as_str)
            .ok_or_else(|| bad(format!("functor needs {k}")))?;
        cats.get(name)
            .ok_or_else(|| Error::UnknownLabel(format!("category {name:?}")))
    };
    let (h, k) = (get("src")?, get("tgt")?);
    let om = v
        .get("objmap")
        .and_then(Value::as_object)
        .ok_or_else(|| bad("functor needs objmap"))?;
    let objmap: Vec<usize> = h
        .objects()
        .iter()
        .map(|o| {
            let t = om
                .get(o)
                .and_then(Value::as_str)
                .ok_or_else(|| bad(format!("objmap misses {o}")))?;
            k.graph.index_of(t)
        })
        .collect::<Result<_>>()?;
    let so = h.objects();
    let n = h.len();
    let keys: Vec<String> = (0..n * n).map(|i| key2(so, i / n, i % n)).collect();
    check_keys(v.get("comps"), &keys, "functor component")?;
    let mut comps = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let (src, tgt) = (h.hom(x, y), k.hom(objmap[x], objmap[y]));
            comps.push(match v.get("comps").and_then(|t| t.get(key2(so, x, y))) {
                Some(d) => parse_map_data(src, tgt, d)?,
                None if src.size() == 0 => BaseMap::zero(src, tgt)?,
                None => return Err(bad(format!("missing functor component {}", key2(so, x, y)))),
            });
        }
    }
    VFunctor::new(h.clone(), k.clone(), objmap, comps)
}

/// A parsed instance file with every reference resolved.
#[derive(Clone, Debug)]
pub struct Instance {
    pub base: Base,
    pub values: BTreeMap<String, BaseValue>,
    pub maps: BTreeMap<String, BaseMap>,
    pub graphs: BTreeMap<String, VGraph>,
    pub categories: BTreeMap<String, VCategory>,
    pub functors: BTreeMap<String, VFunctor>,
    pub params: Map<String, Value>,
}

fn section<'a>(v: &'a Value, k: &str) -> Result<Option<&'a Map<String, Value>>> {
    match v.get(k) {
        None => Ok(None),
        Some(Value::Object(m)) => Ok(Some(m)),
        Some(_) => Err(bad(format!("{k} must be an object"))),
    }
}

/// A value given inline or by name.
fn value_ref(base: Base, v: &Value, values: &BTreeMap<String, BaseValue>) -> Result<BaseValue> {
    match v {
        Value::String(name) => values
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownLabel(format!("value {name:?}"))),
        other => parse_value(base, other),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let v: Value = serde_json::from_str(text).map_err(|e| bad(format!("parse error: {e}")))?;
    match v.get("schema").and_then(Value::as_u64) {
        Some(SCHEMA_VERSION) => {}
        Some(s) => return Err(bad(format!("unsupported schema version {s}"))),
        None => return Err(bad("missing schema version")),
    }
    let base = parse_base(v.get("base").ok_or_else(|| bad("missing base"))?)?;
    let mut inst = Instance {
        base,
        values: BTreeMap::new(),
        maps: BTreeMap::new(),
        graphs: BTreeMap::new(),
        categories: BTreeMap::new(),
        functors: BTreeMap::new(),
        params: section(&v, "params")?.cloned().unwrap_or_default(),
    };
    for (k, x) in section(&v, "values")?.into_iter().flatten() {
        inst.values.insert(k.clone(), parse_value(base, x)?);
    }
    for (k, x) in section(&v, "maps")?.into_iter().flatten() {
        let src = value_ref(
            base,
            x.get("src")
                .ok_or_else(|| bad(format!("map {k} needs src")))?,
            &inst.values,
        )?;
        let tgt = value_ref(
            base,
            x.get("tgt")
                .ok_or_else(|| bad(format!("map {k} needs tgt")))?,
            &inst.values,
        )?;
        let data = x.get("data").cloned().unwrap_or(Value::Null);
        inst.maps
            .insert(k.clone(), parse_map_data(&src, &tgt, &data)?);
    }
    for (k, x) in section(&v, "graphs")?.into_iter().flatten() {
        inst.graphs.insert(k.clone(), parse_graph(base, x)?);
    }
    for (k, x) in section(&v, "categories")?.into_iter().flatten() {
        inst.categories.insert(k.clone(), parse_category(base, x)?);
    }
    for (k, x) in section(&v, "functors")?.into_iter().flatten() {
        inst.functors
            .insert(k.clone(), parse_functor(x, &inst.categories)?);
    }
    Ok(inst)
}

impl Instance {
    pub fn new(base: Base) -> Instance {
        Instance {
            base,
            values: BTreeMap::new(),
            maps: BTreeMap::new(),
            graphs: BTreeMap::new(),
            categories: BTreeMap::new(),
            functors: BTreeMap::new(),
            params: Map::new(),
        }
    }

    /// Canonical JSON: every value inlined, keys sorted.
    pub fn to_json(&self) -> Value {
        let mut v = json!({"schema": SCHEMA_VERSION, "base": base_json(self.base)});
        let put = |v: &mut Value, k: &str, m: Map<String, Value>| {
            if !m.is_empty() {
                v[k] = Value::Object(m);
            }
        };
        put(
            &mut v,
            "values",
            self.values
                .iter()
                .map(|(k, x)| (k.clone(), value_json(x)))
                .collect(),
        );
        put(
            &mut v,
            "maps",
            self.maps
                .iter()
                .map(|(k, f)| (k.clone(), map_json(f)))
                .collect(),
        );
        put(
            &mut v,
            "graphs",
            self.graphs
                .iter()
                .map(|(k, g)| (k.clone(), graph_json(g)))
                .collect(),
        );
        put(
            &mut v,
            "categories",
            self.categories
                .iter()
                .map(|(k, c)| (k.clone(), category_json(c)))
                .collect(),
        );
        let functors = self
            .functors
            .iter()
            .map(|(k, f)| {
                let name = |c: &VCategory| {
                    self.categories
                        .iter()
                        .find(|(_, x)| *x == c)
                        .map(|(n, _)| n.clone())
                };
                let (s, t) = (
                    name(&f.src).unwrap_or_default(),
                    name(&f.tgt).unwrap_or_default(),
                );
                (k.clone(), functor_json(f, &s, &t))
            })
            .collect();
        put(&mut v, "functors", functors);
        put(&mut v, "params", self.params.clone());
        v
    }

    pub fn category(&self, name: &str) -> Result<&VCategory> {
        self.categories
            .get(name)
            .ok_or_else(|| Error::UnknownLabel(format!("category {name:?}")))
    }

    pub fn map(&self, name: &str) -> Result<&BaseMap> {
        self.maps
            .get(name)
            .ok_or_else(|| Error::UnknownLabel(format!("map {name:?}")))
    }

    pub fn value(&self, name: &str) -> Result<&BaseValue> {
        self.values
            .get(name)
            .ok_or_else(|| Error::UnknownLabel(format!("value {name:?}")))
    }

    pub fn functor(&self, name: &str) -> Result<&VFunctor> {
        self.functors
            .get(name)
            .ok_or_else(|| Error::UnknownLabel(format!("functor {name:?}")))
    }

    pub fn param_u64(&self, key: &str) -> Option<u64> {
        self.params.get(key).and_then(Value::as_u64)
    }
}

/// Serializes with sorted keys and a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_round_trip() {
        let b = Base::chain(3, 0, 2);
        let d = BaseValue::Chain(Complex::disk(3, 0, 2, 2).unwrap());
        assert_eq!(parse_value(b, &value_json(&d)).unwrap(), d);
    }

    #[test]
    fn instance_round_trip_is_idempotent() {
        let text = r#"{"schema": 1, "base": {"tag": "finset"},
            "values": {"A": 2},
            "maps": {"f": {"src": "A", "tgt": 3, "data": [0, 2]}},
            "categories": {"K": {"objects": ["a", "b"], "homs": {"a→a": 1, "b→b": 1, "a→b": 1},
                "comp": {"a→a→a": [0], "a→a→b": [0], "a→b→b": [0], "b→b→b": [0]},
                "idm": {"a": [0], "b": [0]}}}}"#;
        let inst = parse_instance(text).unwrap();
        let once = to_canonical_string(&inst.to_json());
        let twice = to_canonical_string(&parse_instance(&once).unwrap().to_json());
        assert_eq!(once, twice);
    }

    #[test]
    fn malformed_file_reports_position() {
        let e = parse_instance("{\"schema\": 1,\n \"base\": }").unwrap_err();
        assert!(e.to_string().contains("line 2"));
    }

    #[test]
    fn out_of_range_entry_is_rejected() {
        let b = Base::chain(2, 0, 1);
        let v = json!({"dims": [1, 1], "d": [[[2]]]});
        assert!(parse_value(b, &v).is_err());
    }
}
