use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "dquot/1";
pub const REPORT_SCHEMA: &str = "dquot-report/1";

pub const TASKS: [&str; 9] = ["hilbert", "ext", "tor", "quot-eqs", "tangent", "ract", "stabilize", "mhomotopy", "intersect"];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub algebra: AlgebraDoc,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleDoc>,
    pub task: String,
    #[serde(default)]
    pub params: Params,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AlgebraDoc {
    /// `K[x0..x{n-1}] / (relations)`, optionally weighted, truncated at `max_degree`.
    Polynomial {
        nvars: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<u32>>,
        #[serde(default)]
        relations: Vec<String>,
        max_degree: usize,
    },
    /// Non-unital `span{e, .., e^order}` in degree 0.
    Nilpotent { order: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModuleDoc {
    /// Free on generators of the given degrees (default: one generator in degree 0).
    Free {
        #[serde(default = "default_degrees")]
        degrees: Vec<i64>,
    },
    Ideal { generators: Vec<String> },
    Quotient { generators: Vec<String> },
    Presented { generator_degrees: Vec<i64>, relations: Vec<Vec<String>> },
    /// `K^dims[k]` in degree `low + k` with the augmentation acting by zero.
    Trivial {
        #[serde(default)]
        low: i64,
        dims: Vec<usize>,
    },
}

fn default_degrees() -> Vec<i64> {
    vec![0]
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hilbert: Option<HilbertParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext: Option<ExtParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tor: Option<TorParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quot_eqs: Option<QuotEqsParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tangent: Option<TangentParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ract: Option<RactParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabilize: Option<StabilizeParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mhomotopy: Option<MHomotopyParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intersect: Option<IntersectParams>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HilbertParams {
    pub module: String,
    pub window: [i64; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtParams {
    pub source: String,
    pub target: String,
    pub source_window: [i64; 2],
    pub target_window: [i64; 2],
    pub i_max: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorParams {
    pub left: String,
    pub right: String,
    pub left_window: [i64; 2],
    pub right_window: [i64; 2],
    pub i_max: usize,
    /// Internal degrees `t` to tabulate, inclusive.
    pub degrees: [i64; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntersectParams {
    pub y: Vec<String>,
    pub z: Vec<String>,
    pub i_max: usize,
    pub max_degree: i64,
}

/// The ambient module is `ambient` (default: the algebra itself) on `window`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotEqsParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<String>,
    pub window: [i64; 2],
    /// `h[k]` is the dimension in degree `window[0] + k`.
    pub h: Vec<usize>,
    /// Pivot rows per degree, keyed by the degree as a string.
    pub pivots: BTreeMap<String, Vec<usize>>,
}

/// The point is the ideal generated by `submodule`, inside the algebra on `window`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TangentParams {
    pub submodule: Vec<String>,
    pub window: [i64; 2],
    pub i_max: usize,
    /// Also recompute on `[p, q+1]` and `[p, q+2]` and require equal dimensions.
    #[serde(default)]
    pub widen: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RactParams {
    #[serde(default)]
    pub low: i64,
    pub dims: Vec<usize>,
    pub arity: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilizeParams {
    pub m: String,
    pub n: String,
    pub p_m: i64,
    pub p_n: i64,
    pub i_max: usize,
    pub q_start: i64,
    pub cap: i64,
    pub width: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DgaGeneratorDoc {
    pub name: String,
    pub projective: i64,
    pub cohomological: i64,
    #[serde(default = "zero_poly")]
    pub d: String,
}

fn zero_poly() -> String {
    "0".into()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MHomotopyParams {
    pub b: Vec<DgaGeneratorDoc>,
    pub c: Vec<DgaGeneratorDoc>,
    /// Images of the generators of `B`, keyed by name.
    pub f0: BTreeMap<String, String>,
    pub f1: BTreeMap<String, String>,
    #[serde(default = "default_floor")]
    pub floor: i64,
    /// Values of `t` at which `f_t` is checked to be a dg map.
    #[serde(default = "default_samples")]
    pub samples: Vec<String>,
}

fn default_floor() -> i64 {
    i64::MIN
}

fn default_samples() -> Vec<String> {
    vec!["0".into(), "1/2".into(), "1".into(), "2".into(), "-3".into()]
}
