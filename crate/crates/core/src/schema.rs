//! JSON file formats.
//!
//! Field names are fixed; tables are exhaustive (no generator inference).
//!
//! ```text
//! groupoid       {"objects":[str], "arrows":[{"id","src","dst"}], "mul":[[a,b,ab]], "inv":{a:ainv}}
//! module         {"groupoid":name, "fibers":{obj:rank}, "action":{arrow:[[int]]}}
//! correspondence {"source","target","points":[str], "rho":{}, "sigma":{}, "left":[[g,w,gw]], "right":[[w,h,wh]]}
//! semigroup      {"elements":[str], "mul":[[str]], "star":{s:s*}?}
//! gset           {"groupoid":name, "points":[str], "anchor":{pt:obj}, "action":[[g,x,gx]]}
//! functor        {"source","target","objects":{x:y}, "arrows":{g:h}}
//! ```
//!
//! In `mul`, the triple `[a, b, ab]` lists the product `a·b`, defined when
//! `src(a) = dst(b)`. Module action matrices map the fiber over `src` to the
//! fiber over `dst` and are written as rows.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowData {
    pub id: String,
    pub src: String,
    pub dst: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidData {
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowData>,
    pub mul: Vec<[String; 3]>,
    pub inv: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleData {
    pub groupoid: String,
    pub fibers: BTreeMap<String, usize>,
    pub action: BTreeMap<String, Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrespondenceData {
    pub source: String,
    pub target: String,
    pub points: Vec<String>,
    pub rho: BTreeMap<String, String>,
    pub sigma: BTreeMap<String, String>,
    pub left: Vec<[String; 3]>,
    pub right: Vec<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemigroupData {
    pub elements: Vec<String>,
    pub mul: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star: Option<BTreeMap<String, String>>,
    /// An element id, or `"none"`; absent means detect an absorbing element.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GSetData {
    pub groupoid: String,
    pub points: Vec<String>,
    pub anchor: BTreeMap<String, String>,
    pub action: Vec<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorData {
    pub source: String,
    pub target: String,
    pub objects: BTreeMap<String, String>,
    pub arrows: BTreeMap<String, String>,
}

pub fn from_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_file<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    from_str(&text)
}

pub fn to_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("schema types serialize")
}
