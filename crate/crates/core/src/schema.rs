//! JSON encoding of capacities, functions, integral results, reports and
//! witness instances.
//!
//! Output objects use sorted keys so that re-serializing a parsed document
//! reproduces it byte for byte. Subset keys are comma-joined labels in
//! sorted order; on input any label order is accepted and normalized.

use std::fmt;

use serde::de::{self, Deserialize, Deserializer, MapAccess, SeqAccess, Visitor};
use serde_json::{json, Map, Value as JsonValue};

use crate::capacity::{validate_capacity, Capacity, Completion, FiniteSpace, RawCapacity, SimpleFunction, Subset};
use crate::error::{Error, Result};
use crate::integral::{IntegralMethod, IntegralResult};
use crate::laws::Instance;
use crate::report::{CheckReport, Sides, Verdict, Witness};
use crate::scalar::{Realization, Value};

/// A parsed JSON tree that keeps object entries in document order,
/// duplicates included, so repeated keys can be reported.
#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Number(serde_json::Number),
    String(String),
    Array(Vec<Json>),
    Object(Vec<(String, Json)>),
}

impl<'de> Deserialize<'de> for Json {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Json;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a JSON value")
            }
            fn visit_unit<E>(self) -> std::result::Result<Json, E> {
                Ok(Json::Null)
            }
            fn visit_bool<E>(self, b: bool) -> std::result::Result<Json, E> {
                Ok(Json::Bool(b))
            }
            fn visit_i64<E>(self, x: i64) -> std::result::Result<Json, E> {
                Ok(Json::Number(x.into()))
            }
            fn visit_u64<E>(self, x: u64) -> std::result::Result<Json, E> {
                Ok(Json::Number(x.into()))
            }
            fn visit_f64<E: de::Error>(self, x: f64) -> std::result::Result<Json, E> {
                serde_json::Number::from_f64(x)
                    .map(Json::Number)
                    .ok_or_else(|| E::custom("non-finite number"))
            }
            fn visit_str<E>(self, s: &str) -> std::result::Result<Json, E> {
                Ok(Json::String(s.to_string()))
            }
            fn visit_string<E>(self, s: String) -> std::result::Result<Json, E> {
                Ok(Json::String(s))
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Json, A::Error> {
                let mut out = Vec::new();
                while let Some(x) = seq.next_element()? {
                    out.push(x);
                }
                Ok(Json::Array(out))
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Json, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, Json>()? {
                    out.push((k, v));
                }
                Ok(Json::Object(out))
            }
        }
        d.deserialize_any(V)
    }
}

impl Json {
    pub fn parse(text: &str) -> Result<Json> {
        serde_json::from_str(text).map_err(|e| Error::schema("$", e.to_string()))
    }

    fn kind(&self) -> &'static str {
        match self {
            Json::Null => "null",
            Json::Bool(_) => "boolean",
            Json::Number(_) => "number",
            Json::String(_) => "string",
            Json::Array(_) => "array",
            Json::Object(_) => "object",
        }
    }
}

fn wrong(path: &str, want: &str, got: &Json) -> Error {
    Error::schema(path, format!("expected {want}, found {}", got.kind()))
}

/// Object accessor that tracks its JSON path and rejects duplicate keys.
struct Obj<'a> {
    path: String,
    entries: &'a [(String, Json)],
}

impl<'a> Obj<'a> {
    fn new(path: &str, j: &'a Json) -> Result<Self> {
        let Json::Object(entries) = j else {
            return Err(wrong(path, "object", j));
        };
        for (i, (k, _)) in entries.iter().enumerate() {
            if entries[..i].iter().any(|(k2, _)| k2 == k) {
                return Err(Error::schema(format!("{path}.{k}"), "duplicate key"));
            }
        }
        Ok(Obj {
            path: path.to_string(),
            entries,
        })
    }

    fn child(&self, key: &str) -> String {
        format!("{}.{key}", self.path)
    }

    fn get(&self, key: &str) -> Option<&'a Json> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    fn req(&self, key: &str) -> Result<&'a Json> {
        self.get(key)
            .ok_or_else(|| Error::schema(self.child(key), "missing required field"))
    }

    fn only(&self, allowed: &[&str]) -> Result<()> {
        match self.entries.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            Some((k, _)) => Err(Error::schema(self.child(k), "unknown field")),
            None => Ok(()),
        }
    }

    fn str(&self, key: &str) -> Result<&'a str> {
        match self.req(key)? {
            Json::String(s) => Ok(s),
            other => Err(wrong(&self.child(key), "string", other)),
        }
    }

    fn opt_str(&self, key: &str) -> Result<Option<&'a str>> {
        match self.get(key) {
            None | Some(Json::Null) => Ok(None),
            Some(Json::String(s)) => Ok(Some(s)),
            Some(other) => Err(wrong(&self.child(key), "string", other)),
        }
    }
}

fn scalar(path: &str, j: &Json, r: Realization) -> Result<Value> {
    let text = match j {
        Json::String(s) => s.clone(),
        Json::Number(n) => n.to_string(),
        other => return Err(wrong(path, "number or string", other)),
    };
    Value::parse(&text, r).map_err(|e| Error::schema(path, e.to_string()))
}

/// Canonical JSON key of a subset: labels sorted, comma-joined, `∅` for the
/// empty set.
pub fn subset_key(space: &FiniteSpace, s: Subset) -> String {
    if s.is_empty() {
        return "∅".into();
    }
    let mut labels: Vec<&str> = s.indices().map(|i| space.labels()[i].as_str()).collect();
    labels.sort_unstable();
    labels.join(",")
}

fn parse_points(o: &Obj) -> Result<FiniteSpace> {
    let path = o.child("points");
    let Json::Array(items) = o.req("points")? else {
        return Err(wrong(&path, "array", o.req("points")?));
    };
    let labels = items
        .iter()
        .enumerate()
        .map(|(i, j)| match j {
            Json::String(s) => Ok(s.clone()),
            other => Err(wrong(&format!("{path}[{i}]"), "string", other)),
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteSpace::new(labels).map_err(|e| Error::schema(path, e.to_string()))
}

fn parse_completion(path: &str, s: Option<&str>) -> Result<Completion> {
    match s {
        None | Some("none") => Ok(Completion::None),
        Some("lower-envelope") => Ok(Completion::LowerEnvelope),
        Some(other) => Err(Error::schema(
            path,
            format!("unknown completion {other:?} (expected \"none\" or \"lower-envelope\")"),
        )),
    }
}

fn parse_mu(o: &Obj, space: &FiniteSpace, completion: Completion, r: Realization) -> Result<Capacity> {
    let mu = Obj::new(&o.child("mu"), o.req("mu")?)?;
    let mut raw = RawCapacity::new(space.clone()).complete(completion);
    for (key, j) in mu.entries {
        let path = mu.child(key);
        let s = space
            .parse_subset(key)
            .map_err(|e| Error::schema(&path, e.to_string()))?;
        if raw.entries.contains_key(&s) {
            return Err(Error::schema(
                path,
                format!("duplicate subset (same as {:?})", subset_key(space, s)),
            ));
        }
        raw = raw.set(s, scalar(&path, j, r)?);
    }
    // an empty table completes to exact values; bring it to the requested realization
    Ok(validate_capacity(raw)?.to_realization(r))
}

fn parse_function_at(o: &Obj, key: &str, space: &FiniteSpace, r: Realization) -> Result<SimpleFunction> {
    let f = Obj::new(&o.child(key), o.req(key)?)?;
    let mut vals: Vec<Option<Value>> = vec![None; space.size()];
    for (label, j) in f.entries {
        let path = f.child(label);
        let i = space
            .index_of(label)
            .ok_or_else(|| Error::schema(&path, "unknown point"))?;
        vals[i] = Some(scalar(&path, j, r)?);
    }
    let vals = vals
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::schema(f.child(&space.labels()[i]), "missing value for point")))
        .collect::<Result<Vec<_>>>()?;
    SimpleFunction::new(space.clone(), vals).map_err(|e| Error::schema(f.path.clone(), e.to_string()))
}

/// Parses `{"points": [...], "mu": {...}, "complete": ...}`.
pub fn parse_capacity(text: &str, r: Realization) -> Result<Capacity> {
    let doc = Json::parse(text)?;
    let o = Obj::new("$", &doc)?;
    o.only(&["points", "mu", "complete"])?;
    let space = parse_points(&o)?;
    let completion = parse_completion(&o.child("complete"), o.opt_str("complete")?)?;
    parse_mu(&o, &space, completion, r)
}

/// Parses `{"f": {"label": value, ...}}` over a known space.
pub fn parse_function(text: &str, space: &FiniteSpace, r: Realization) -> Result<SimpleFunction> {
    let doc = Json::parse(text)?;
    let o = Obj::new("$", &doc)?;
    o.only(&["f"])?;
    parse_function_at(&o, "f", space, r)
}

fn text_map(pairs: impl IntoIterator<Item = (String, String)>) -> JsonValue {
    JsonValue::Object(pairs.into_iter().map(|(k, v)| (k, JsonValue::String(v))).collect())
}

/// Full table, empty set omitted.
pub fn capacity_json(mu: &Capacity) -> JsonValue {
    let space = mu.space();
    json!({
        "points": space.labels(),
        "mu": text_map(
            space
                .subsets()
                .filter(|s| !s.is_empty())
                .map(|s| (subset_key(space, s), mu.measure(s).render())),
        ),
    })
}

fn function_map(f: &SimpleFunction) -> JsonValue {
    text_map(
        f.space()
            .labels()
            .iter()
            .zip(f.values())
            .map(|(l, v)| (l.clone(), v.render())),
    )
}

pub fn function_json(f: &SimpleFunction) -> JsonValue {
    json!({ "f": function_map(f) })
}

pub fn integral_result_json(r: &IntegralResult) -> JsonValue {
    json!({
        "value": r.value.render(),
        "argmax_t": r.argmax_threshold.render(),
        "method": r.method.as_str(),
    })
}

pub fn parse_integral_result(text: &str, r: Realization) -> Result<IntegralResult> {
    let doc = Json::parse(text)?;
    let o = Obj::new("$", &doc)?;
    o.only(&["value", "argmax_t", "method"])?;
    let method = match o.str("method")? {
        "exact-threshold" => IntegralMethod::ExactThreshold,
        "grid-oracle" => IntegralMethod::GridOracle,
        other => return Err(Error::schema(o.child("method"), format!("unknown method {other:?}"))),
    };
    Ok(IntegralResult {
        value: scalar(&o.child("value"), o.req("value")?, r)?,
        argmax_threshold: scalar(&o.child("argmax_t"), o.req("argmax_t")?, r)?,
        method,
    })
}

/// The capacity schema extended with `f`, and optionally `g`, `shift` and
/// `subset`.
pub fn instance_json(inst: &Instance) -> JsonValue {
    let mut out = capacity_json(&inst.capacity);
    let obj = out.as_object_mut().expect("object");
    obj.insert("f".into(), function_map(&inst.f));
    if let Some(g) = &inst.g {
        obj.insert("g".into(), function_map(g));
    }
    if let Some(a) = &inst.shift {
        obj.insert("shift".into(), a.render().into());
    }
    if let Some(s) = inst.subset {
        obj.insert("subset".into(), subset_key(inst.capacity.space(), s).into());
    }
    out
}

fn parse_instance_at(path: &str, j: &Json, r: Realization) -> Result<Instance> {
    let o = Obj::new(path, j)?;
    o.only(&["points", "mu", "complete", "f", "g", "shift", "subset"])?;
    let space = parse_points(&o)?;
    let completion = parse_completion(&o.child("complete"), o.opt_str("complete")?)?;
    let mu = parse_mu(&o, &space, completion, r)?;
    let mut inst = Instance::new(mu, parse_function_at(&o, "f", &space, r)?);
    if o.get("g").is_some() {
        inst = inst.with_g(parse_function_at(&o, "g", &space, r)?);
    }
    if let Some(j) = o.get("shift") {
        inst = inst.with_shift(scalar(&o.child("shift"), j, r)?);
    }
    if let Some(key) = o.opt_str("subset")? {
        let s = space
            .parse_subset(key)
            .map_err(|e| Error::schema(o.child("subset"), e.to_string()))?;
        inst = inst.with_subset(s);
    }
    Ok(inst)
}

pub fn parse_instance(text: &str, r: Realization) -> Result<Instance> {
    parse_instance_at("$", &Json::parse(text)?, r)
}

/// Accepts a bare instance, or a saved report whose witness carries one.
pub fn parse_replay_instance(text: &str, r: Realization) -> Result<Instance> {
    let doc = Json::parse(text)?;
    let o = Obj::new("$", &doc)?;
    let Some(w) = o.get("witness") else {
        return parse_instance_at("$", &doc, r);
    };
    let wo = Obj::new("$.witness", w)?;
    let inst = wo.req("instance")?;
    parse_instance_at("$.witness.instance", inst, r)
}

pub fn witness_json(w: &Witness) -> JsonValue {
    let mut out = Map::new();
    out.insert(
        "inputs".into(),
        JsonValue::Array(
            w.inputs
                .iter()
                .map(|(k, v)| json!({ "name": k, "value": v.render() }))
                .collect(),
        ),
    );
    if let Some(s) = &w.sides {
        out.insert("lhs".into(), s.lhs.render().into());
        out.insert("rhs".into(), s.rhs.render().into());
    }
    out.insert("detail".into(), w.detail.clone().into());
    if let Some(inst) = &w.instance {
        out.insert("instance".into(), instance_json(inst));
    }
    JsonValue::Object(out)
}

fn parse_witness_at(path: &str, j: &Json, r: Realization) -> Result<Witness> {
    let o = Obj::new(path, j)?;
    o.only(&["inputs", "lhs", "rhs", "detail", "instance"])?;
    let inputs_path = o.child("inputs");
    let Json::Array(items) = o.req("inputs")? else {
        return Err(wrong(&inputs_path, "array", o.req("inputs")?));
    };
    let inputs = items
        .iter()
        .enumerate()
        .map(|(i, j)| {
            let item = Obj::new(&format!("{inputs_path}[{i}]"), j)?;
            item.only(&["name", "value"])?;
            Ok((
                item.str("name")?.to_string(),
                scalar(&item.child("value"), item.req("value")?, r)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let sides = match (o.get("lhs"), o.get("rhs")) {
        (None, None) => None,
        (Some(l), Some(h)) => Some(Sides {
            lhs: scalar(&o.child("lhs"), l, r)?,
            rhs: scalar(&o.child("rhs"), h, r)?,
        }),
        (None, Some(_)) => return Err(Error::schema(o.child("lhs"), "missing required field")),
        (Some(_), None) => return Err(Error::schema(o.child("rhs"), "missing required field")),
    };
    let instance = match o.get("instance") {
        Some(j) => Some(parse_instance_at(&o.child("instance"), j, r)?),
        None => None,
    };
    Ok(Witness {
        inputs,
        sides,
        detail: o.str("detail")?.to_string(),
        instance,
    })
}

pub fn parse_witness(text: &str, r: Realization) -> Result<Witness> {
    parse_witness_at("$", &Json::parse(text)?, r)
}

pub fn report_json(report: &CheckReport, r: Realization) -> JsonValue {
    let mut out = Map::new();
    out.insert("law".into(), report.law_id.clone().into());
    out.insert("verdict".into(), report.verdict.as_str().into());
    out.insert("realization".into(), r.to_string().into());
    out.insert("sample".into(), report.sample_description.clone().into());
    out.insert("cases_checked".into(), report.cases_checked.into());
    out.insert("complete".into(), report.complete.into());
    if let Some(w) = &report.witness {
        out.insert("witness".into(), witness_json(w));
    }
    JsonValue::Object(out)
}

pub fn parse_report(text: &str) -> Result<CheckReport> {
    let doc = Json::parse(text)?;
    let o = Obj::new("$", &doc)?;
    o.only(&[
        "law",
        "verdict",
        "realization",
        "sample",
        "cases_checked",
        "complete",
        "witness",
    ])?;
    let r: Realization = o
        .str("realization")?
        .parse()
        .map_err(|e: Error| Error::schema(o.child("realization"), e.to_string()))?;
    let verdict = match o.str("verdict")? {
        "holds-on-sample" => Verdict::HoldsOnSample,
        "fails" => Verdict::Fails,
        other => return Err(Error::schema(o.child("verdict"), format!("unknown verdict {other:?}"))),
    };
    let cases_checked = match o.req("cases_checked")? {
        Json::Number(n) => n
            .as_u64()
            .ok_or_else(|| Error::schema(o.child("cases_checked"), "expected a non-negative integer"))?,
        other => return Err(wrong(&o.child("cases_checked"), "number", other)),
    };
    let complete = match o.req("complete")? {
        Json::Bool(b) => *b,
        other => return Err(wrong(&o.child("complete"), "boolean", other)),
    };
    let witness = match o.get("witness") {
        Some(j) => Some(parse_witness_at(&o.child("witness"), j, r)?),
        None => None,
    };
    if witness.is_some() != (verdict == Verdict::Fails) {
        return Err(Error::schema(
            o.child("witness"),
            "a witness is present exactly when the verdict is \"fails\"",
        ));
    }
    Ok(CheckReport {
        law_id: o.str("law")?.to_string(),
        verdict,
        witness,
        sample_description: o.str("sample")?.to_string(),
        cases_checked,
        complete,
    })
}

/// Pretty-printed JSON with sorted keys and a trailing newline.
pub fn to_text(j: &JsonValue) -> String {
    let mut s = serde_json::to_string_pretty(j).expect("JSON values serialize");
    s.push('\n');
    s
}
