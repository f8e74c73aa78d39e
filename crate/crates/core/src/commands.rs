//! The command surface shared by the CLI and the C ABI: each command reads a parsed instance
//! and returns a JSON document with an outcome.

use serde_json::{json, Value};

use crate::base::{classify_map, Mode};
use crate::basechange::MonoidalFunctor;
use crate::colimits::{
    compare_with_oracle, free_category, ladder_equations, pushout_along_free, stage_squares,
    verify_decomposition, verify_pushout_square, verify_special_cases, Attachment, PushoutTrace,
    Square, View,
};
use crate::dk::{
    is_dk_equivalence, is_hes, is_interval, is_iprime_injective, is_local,
    is_locally_pseudo_cofibrant, is_pseudo_cofibrant, is_pseudo_cofibration,
    is_strong_local_cofibration, is_strongly_locally_pseudo_cofibrant, LocalKind, PseudoVerdict,
    Tri, TriVerdict,
};
use crate::error::{Error, Result};
use crate::io::{category_json, functor_json, Instance};
use crate::report::{PropertyReport, SkipReason, Verdict};
use crate::suites::{find_suite, Suite, SuiteRun};
use crate::vcat::{pi0_category, validate_category, VCategory, VFunctor};

pub const DEFAULT_STAGE_BOUND: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    /// Truncated or skipped only.
    Skipped,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Skipped => 2,
        }
    }

    fn of(r: &PropertyReport) -> Outcome {
        match r.verdict {
            Verdict::Pass => Outcome::Pass,
            Verdict::Fail => Outcome::Fail,
            Verdict::Skipped { .. } => Outcome::Skipped,
        }
    }
}

/// Exit status of an input error.
pub const INPUT_ERROR: i32 = 3;

#[derive(Clone, Debug)]
pub struct Output {
    pub json: Value,
    pub outcome: Outcome,
}

impl Output {
    fn report(r: PropertyReport) -> Output {
        let outcome = Outcome::of(&r);
        Output {
            json: serde_json::to_value(&r).expect("reports serialize"),
            outcome,
        }
    }
}

/// Names of the instance entries a command acts on.
#[derive(Clone, Debug, Default, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Refs {
    pub category: Option<String>,
    pub functor: Option<String>,
    pub map: Option<String>,
    pub value: Option<String>,
    pub graph: Option<String>,
    /// Attachment: objects a, b and maps f: U → V, ḡ: U → H(a, b).
    pub a: Option<String>,
    pub b: Option<String>,
    pub f: Option<String>,
    pub gbar: Option<String>,
    /// A built-in monoidal functor by name.
    pub base_change: Option<String>,
}

fn pick<'a, T>(
    what: &str,
    name: &Option<String>,
    table: &'a std::collections::BTreeMap<String, T>,
) -> Result<&'a T> {
    match name {
        Some(n) => table
            .get(n)
            .ok_or_else(|| Error::UnknownLabel(format!("{what} {n:?}"))),
        None if table.len() == 1 => Ok(table.values().next().expect("one entry")),
        None => Err(Error::Input(format!(
            "name a {what}: the instance has {}",
            table.len()
        ))),
    }
}

impl Refs {
    fn category<'a>(&self, inst: &'a Instance) -> Result<&'a VCategory> {
        pick("category", &self.category, &inst.categories)
    }

    fn functor<'a>(&self, inst: &'a Instance) -> Result<&'a VFunctor> {
        pick("functor", &self.functor, &inst.functors)
    }

    fn map<'a>(&self, inst: &'a Instance) -> Result<&'a crate::base::BaseMap> {
        pick("map", &self.map, &inst.maps)
    }

    fn attachment(&self, inst: &Instance) -> Result<(VCategory, Attachment)> {
        let h = self.category(inst)?.clone();
        let obj = |r: &Option<String>, role: &str| -> Result<usize> {
            let l = r
                .as_ref()
                .ok_or_else(|| Error::Input(format!("attachment needs object {role}")))?;
            h.objects()
                .iter()
                .position(|o| o == l)
                .ok_or_else(|| Error::UnknownLabel(format!("object {l:?}")))
        };
        let map = |r: &Option<String>, role: &str| -> Result<crate::base::BaseMap> {
            let l = r
                .as_ref()
                .ok_or_else(|| Error::Input(format!("attachment needs map {role}")))?;
            inst.map(l).cloned()
        };
        let (a, b) = (obj(&self.a, "a")?, obj(&self.b, "b")?);
        let (f, gbar) = (map(&self.f, "f")?, map(&self.gbar, "gbar")?);
        if gbar.tgt != *h.hom(a, b) {
            return Err(Error::Input("gbar must land in H(a, b)".into()));
        }
        if gbar.src != f.src {
            return Err(Error::Input("f and gbar must share their source".into()));
        }
        Ok((h, Attachment { a, b, f, gbar }))
    }
}

pub fn validate(inst: &Instance) -> Output {
    let mut parts = Vec::new();
    for k in inst.categories.values() {
        parts.push(validate_category(k));
    }
    for f in inst.functors.values() {
        parts.push(f.validate());
    }
    Output::report(PropertyReport::combine("validate", parts))
}

pub fn pi0(inst: &Instance, refs: &Refs) -> Result<Output> {
    if refs.category.is_none() && inst.categories.is_empty() {
        let sizes: serde_json::Map<String, Value> = inst
            .values
            .iter()
            .map(|(k, v)| Ok((k.clone(), json!(crate::base::pi0(v)?.size))))
            .collect::<Result<_>>()?;
        return Ok(Output {
            json: json!({ "values": sizes }),
            outcome: Outcome::Pass,
        });
    }
    let k = refs.category(inst)?;
    let p = pi0_category(k)?;
    let n = p.objects.len();
    let mut homs = serde_json::Map::new();
    let mut comp = serde_json::Map::new();
    for x in 0..n {
        for y in 0..n {
            homs.insert(
                format!("{},{}", p.objects[x], p.objects[y]),
                json!(p.hom_size(x, y)),
            );
            for z in 0..n {
                comp.insert(
                    format!("{},{},{}", p.objects[x], p.objects[y], p.objects[z]),
                    json!(p.comp[(x * n + y) * n + z]),
                );
            }
        }
    }
    let ids: serde_json::Map<String, Value> = (0..n)
        .map(|x| (p.objects[x].clone(), json!(p.ids[x])))
        .collect();
    Ok(Output {
        json: json!({ "objects": p.objects, "homs": homs, "comp": comp, "ids": ids }),
        outcome: Outcome::Pass,
    })
}

pub fn free(inst: &Instance, refs: &Refs, word_bound: usize, mode: Mode) -> Result<Output> {
    let m = pick("graph", &refs.graph, &inst.graphs)?;
    let r = free_category(m, word_bound, mode)?;
    let outcome = if r.stabilized {
        Outcome::Pass
    } else {
        Outcome::Skipped
    };
    Ok(Output {
        json: json!({
            "word_bound": r.word_bound,
            "stabilized": r.stabilized,
            "category": r.category.as_ref().map(category_json),
        }),
        outcome,
    })
}

fn trace(inst: &Instance, refs: &Refs, stage_bound: usize) -> Result<PushoutTrace> {
    let (h, att) = refs.attachment(inst)?;
    pushout_along_free(&h, &att, stage_bound)
}

/// The push-out category, the pushed functor and a summary of the stages.
pub fn pushout(inst: &Instance, refs: &Refs, stage_bound: usize) -> Result<Output> {
    let tr = trace(inst, refs, stage_bound)?;
    let outcome = if tr.stabilized {
        Outcome::Pass
    } else {
        Outcome::Skipped
    };
    let result = tr.result.as_ref().map(|r| {
        json!({
            "category": category_json(&r.k),
            "functor": functor_json(&r.phi, "H", "K"),
        })
    });
    Ok(Output {
        json: json!({ "trace": tr.export(), "result": result }),
        outcome,
    })
}

pub fn trace_export(inst: &Instance, refs: &Refs, stage_bound: usize) -> Result<Output> {
    let tr = trace(inst, refs, stage_bound)?;
    let outcome = if tr.stabilized {
        Outcome::Pass
    } else {
        Outcome::Skipped
    };
    Ok(Output {
        json: tr.export(),
        outcome,
    })
}

pub const PREDICATES: &[(&str, &str)] = &[
    ("category", "the category axioms hold"),
    ("functor", "the functor axioms hold"),
    (
        "interval",
        "a two-object category whose objects are isomorphic in π₀",
    ),
    ("locally-pseudo-cofibrant", "every hom is pseudo-cofibrant"),
    (
        "strongly-locally-pseudo-cofibrant",
        "homs and reduced compositions are pseudo-cofibrant",
    ),
    ("dk", "the functor is a DK-equivalence"),
    ("hes", "the functor is homotopically essentially surjective"),
    ("hff", "the functor is homotopically fully faithful"),
    (
        "iprime-injective",
        "surjective on objects and a local trivial fibration",
    ),
    ("local-cofibration", "every component is a cofibration"),
    ("local-fibration", "every component is a fibration"),
    (
        "local-weak-equivalence",
        "every component is a weak equivalence",
    ),
    (
        "local-trivial-fibration",
        "every component is a trivial fibration",
    ),
    (
        "local-trivial-cofibration",
        "every component is a trivial cofibration",
    ),
    (
        "strong-local-cofibration",
        "identity on objects with cofibrant induced maps",
    ),
    ("cofibration", "the map is a cofibration"),
    ("weak-equivalence", "the map is a weak equivalence"),
    ("pseudo-cofibration", "the map is a pseudo-cofibration"),
    ("pseudo-cofibrant", "the value is pseudo-cofibrant"),
    (
        "pushout-square",
        "the free push-out square commutes and is universal",
    ),
    (
        "decomposition",
        "every decomposition view of the push-out is inverse to the trace",
    ),
    (
        "special-cases",
        "single-object and module collapse identities of the push-out",
    ),
    ("oracle", "the push-out agrees with the word oracle"),
    ("stage-squares", "every stage is a push-out"),
    ("ladder", "the composition ladder equations hold"),
    (
        "coherence",
        "a built-in monoidal functor satisfies the unit, symmetry and associativity laws",
    ),
];

fn pseudo_report(id: &str, v: PseudoVerdict) -> PropertyReport {
    let r = if v.holds {
        PropertyReport::pass(id, 1)
    } else {
        PropertyReport::fail(id, 1, json!({ "generator": v.witness }))
    };
    v.skipped
        .into_iter()
        .fold(r, |r, s| r.with_note(format!("skipped generator {s}")))
}

fn tri_report(id: &str, v: TriVerdict) -> PropertyReport {
    match v.verdict {
        Tri::Yes => PropertyReport::pass(id, 1),
        Tri::No => PropertyReport::fail(id, 1, v.witness.unwrap_or(Value::Null)),
        Tri::NecessaryOnly => PropertyReport::skipped(
            id,
            SkipReason::Unsupported,
            "only the necessary condition was decided",
        ),
    }
}

fn bool_report(id: &str, holds: bool, witness: impl FnOnce() -> Value) -> PropertyReport {
    if holds {
        PropertyReport::pass(id, 1)
    } else {
        PropertyReport::fail(id, 1, witness())
    }
}

fn pair_json(k: &VCategory, w: Option<(usize, usize)>) -> Value {
    w.map(|(x, y)| json!({ "pair": [k.objects()[x], k.objects()[y]] }))
        .unwrap_or(Value::Null)
}

fn all_views(n: usize) -> Vec<View> {
    let mut out = Vec::new();
    for x in 0..n {
        out.push(View::Endo { x });
        for y in 0..n {
            out.push(View::RightModule { x, y });
            out.push(View::LeftModule { x, y });
            for z in 0..n {
                out.push(View::ReducedComposition { x, y, z });
            }
        }
    }
    out
}

fn stabilized(
    id: &str,
    tr: PushoutTrace,
    f: impl FnOnce(&PushoutTrace) -> PropertyReport,
) -> PropertyReport {
    if tr.stabilized {
        f(&tr)
    } else {
        PropertyReport::skipped(
            id,
            SkipReason::Truncation,
            format!("trace did not stabilize within {} stages", tr.stage_bound),
        )
    }
}

pub fn check(predicate: &str, inst: &Instance, refs: &Refs, stage_bound: usize) -> Result<Output> {
    let id = predicate;
    let local = |kind| -> Result<PropertyReport> {
        let phi = refs.functor(inst)?;
        let v = is_local(phi, kind);
        Ok(bool_report(id, v.holds, || pair_json(&phi.src, v.witness)))
    };
    let r = match predicate {
        "category" => validate_category(refs.category(inst)?),
        "functor" => refs.functor(inst)?.validate(),
        "interval" => bool_report(
            id,
            is_interval(refs.category(inst)?)?,
            || json!({ "objects": "not isomorphic in π₀" }),
        ),
        "locally-pseudo-cofibrant" => {
            pseudo_report(id, is_locally_pseudo_cofibrant(refs.category(inst)?))
        }
        "strongly-locally-pseudo-cofibrant" => tri_report(
            id,
            is_strongly_locally_pseudo_cofibrant(refs.category(inst)?)?,
        ),
        "dk" => {
            let v = is_dk_equivalence(refs.functor(inst)?)?;
            bool_report(id, v.is_dk(), || v.witness.clone().unwrap_or(Value::Null))
        }
        "hes" => {
            let phi = refs.functor(inst)?;
            let y = is_hes(phi)?;
            bool_report(
                id,
                y.is_none(),
                || json!({ "object": phi.tgt.objects()[y.expect("unmatched")] }),
            )
        }
        "hff" => local(LocalKind::WeakEquivalence)?,
        "iprime-injective" => {
            bool_report(id, is_iprime_injective(refs.functor(inst)?), || Value::Null)
        }
        "local-cofibration" => local(LocalKind::Cofibration)?,
        "local-fibration" => local(LocalKind::Fibration)?,
        "local-weak-equivalence" => local(LocalKind::WeakEquivalence)?,
        "local-trivial-fibration" => local(LocalKind::TrivialFibration)?,
        "local-trivial-cofibration" => local(LocalKind::TrivialCofibration)?,
        "strong-local-cofibration" => {
            tri_report(id, is_strong_local_cofibration(refs.functor(inst)?)?)
        }
        "cofibration" => bool_report(id, classify_map(refs.map(inst)?).is_cofibration, || {
            Value::Null
        }),
        "weak-equivalence" => bool_report(
            id,
            classify_map(refs.map(inst)?).is_weak_equivalence,
            || Value::Null,
        ),
        "pseudo-cofibration" => pseudo_report(id, is_pseudo_cofibration(refs.map(inst)?)),
        "pseudo-cofibrant" => pseudo_report(
            id,
            is_pseudo_cofibrant(pick("value", &refs.value, &inst.values)?),
        ),
        "pushout-square" => stabilized(id, trace(inst, refs, stage_bound)?, |tr| {
            verify_pushout_square(&Square::Free(tr))
        }),
        "decomposition" => stabilized(id, trace(inst, refs, stage_bound)?, |tr| {
            let n = tr.h.len();
            PropertyReport::combine(
                id,
                all_views(n)
                    .into_iter()
                    .map(|v| verify_decomposition(tr, v))
                    .collect(),
            )
        }),
        "special-cases" => stabilized(id, trace(inst, refs, stage_bound)?, verify_special_cases),
        "oracle" => stabilized(id, trace(inst, refs, stage_bound)?, |tr| {
            compare_with_oracle(tr, stage_bound + 1)
        }),
        "stage-squares" => stage_squares(&trace(inst, refs, stage_bound)?),
        "ladder" => ladder_equations(&trace(inst, refs, stage_bound)?),
        "coherence" => {
            let name = refs
                .base_change
                .as_deref()
                .ok_or_else(|| Error::Input("coherence needs a base change name".into()))?;
            let g = MonoidalFunctor::named(name, inst.base)?;
            let samples: Vec<_> = inst.values.values().cloned().collect();
            let mode = if inst.base.is_linear() {
                Mode::Truncate
            } else {
                Mode::Strict
            };
            g.check_coherence(&samples, mode)
        }
        other => return Err(Error::Input(format!("unknown predicate {other:?}"))),
    };
    let mut r = r;
    r.suite = id.into();
    Ok(Output::report(r))
}

pub fn proptest(suite: &str, count: usize, seed: u64) -> Result<(SuiteRun, Outcome)> {
    let run = find_suite(suite)?.run(count, seed);
    let outcome = if run.failed > 0 {
        Outcome::Fail
    } else if run.passed == 0 && run.skipped > 0 {
        Outcome::Skipped
    } else {
        Outcome::Pass
    };
    Ok((run, outcome))
}

pub fn replay(suite: &Suite, instance_seed: u64) -> Output {
    Output::report(suite.instance(instance_seed))
}
