use std::collections::BTreeMap;
use std::sync::Arc;

use dquot_core::dg::{
    build_ract_dga, derived_quot_tangent, m_homotopy_construct, pi0_ideal, tangent_rg_cone, DgaGenerator,
    FreeDgaPresentation, GcPoly, TangentComplexReport,
};
use dquot_core::graded::{BiDegree, GradedAlgebraTruncation, GradedModuleWindow};
use dquot_core::homalg::{derived_intersection, ext_bar, ext_free, stabilization_bound, tor_bar, tor_free, GradedDims, ModuleSpec};
use dquot_core::ingest::{ideal_submodule, CoordinateRing, IdealPresentation, Polynomial};
use dquot_core::quot::{
    chart_containing, chart_equations, jacobian_tangent_check, tangent_classical, ChartSpec, QuotProblem,
};
use dquot_core::{Error, Scalar};
use serde_json::{json, Value};

use crate::document::*;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => CliError::Parse(m),
            other => CliError::Validation(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// What a task produced and whether its checks passed.
pub struct Outcome {
    pub result: Value,
    pub pass: bool,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome { result, pass: true }
    }

    fn checked(result: Value, pass: bool) -> Self {
        Outcome { result, pass }
    }

    /// A mathematical check that failed by raising instead of returning a verdict.
    fn failed(e: Error) -> Self {
        Outcome { result: json!({ "failure": e.to_string() }), pass: false }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub max_degree: Option<usize>,
    pub arity: Option<usize>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn missing(task: &str) -> CliError {
    invalid(format!("the document has no parameters for task `{task}`"))
}

struct Context<'a> {
    doc: &'a ProblemDocument,
    ring: Option<Arc<CoordinateRing>>,
    algebra: Arc<GradedAlgebraTruncation>,
}

impl<'a> Context<'a> {
    fn new(doc: &'a ProblemDocument, ov: Overrides) -> CliResult<Self> {
        match &doc.algebra {
            AlgebraDoc::Polynomial { nvars, weights, relations, max_degree } => {
                let max_degree = ov.max_degree.unwrap_or(*max_degree);
                let rels = parse_polys(relations, *nvars)?;
                let ip = match weights {
                    Some(w) if w.len() != *nvars => return Err(invalid("one weight per variable")),
                    Some(w) => IdealPresentation::with_weights(w.clone(), rels, max_degree)?,
                    None => IdealPresentation::new(*nvars, rels, max_degree)?,
                };
                let ring = Arc::new(CoordinateRing::new(&ip)?);
                let algebra = ring.algebra().clone();
                Ok(Context { doc, ring: Some(ring), algebra })
            }
            AlgebraDoc::Nilpotent { order } => {
                let algebra = Arc::new(GradedAlgebraTruncation::nilpotent(*order)?);
                Ok(Context { doc, ring: None, algebra })
            }
        }
    }

    fn ring(&self, task: &str) -> CliResult<&Arc<CoordinateRing>> {
        self.ring.as_ref().ok_or_else(|| invalid(format!("task `{task}` needs a polynomial algebra")))
    }

    fn nvars(&self) -> usize {
        self.ring.as_ref().map_or(0, |r| r.presentation().nvars())
    }

    fn module_doc(&self, name: &str) -> CliResult<&ModuleDoc> {
        self.doc.modules.get(name).ok_or_else(|| invalid(format!("unknown module `{name}`")))
    }

    fn spec(&self, name: &str) -> CliResult<ModuleSpec> {
        let n = self.nvars();
        Ok(match self.module_doc(name)? {
            ModuleDoc::Free { degrees } => ModuleSpec::Presented { generator_degrees: degrees.clone(), relations: vec![] },
            ModuleDoc::Ideal { generators } => ModuleSpec::Ideal(parse_polys(generators, n)?),
            ModuleDoc::Quotient { generators } => ModuleSpec::Quotient(parse_polys(generators, n)?),
            ModuleDoc::Presented { generator_degrees, relations } => ModuleSpec::Presented {
                generator_degrees: generator_degrees.clone(),
                relations: relations.iter().map(|r| parse_polys(r, n)).collect::<CliResult<_>>()?,
            },
            ModuleDoc::Trivial { .. } => return Err(invalid(format!("module `{name}` cannot be regenerated"))),
        })
    }

    fn module(&self, name: &str, window: [i64; 2]) -> CliResult<GradedModuleWindow> {
        let [p, q] = window;
        if let ModuleDoc::Trivial { low, dims } = self.module_doc(name)? {
            let m = GradedModuleWindow::trivial(self.algebra.clone(), *low, dims)?;
            let (lo, hi) = (p.max(m.low()), q.min(m.high()));
            return Ok(m.truncate_window(lo, hi)?);
        }
        let ring = self.ring(&format!("module `{name}`"))?;
        Ok(self.spec(name)?.build(ring, p, q)?)
    }
}

fn parse_polys(s: &[String], nvars: usize) -> CliResult<Vec<Polynomial>> {
    s.iter().map(|x| Ok(Polynomial::parse(x, nvars)?)).collect()
}

fn check_window(w: [i64; 2], what: &str) -> CliResult<()> {
    if w[0] > w[1] {
        return Err(invalid(format!("{what} window [{}, {}] is empty", w[0], w[1])));
    }
    Ok(())
}

pub fn run_task(doc: &ProblemDocument, task: &str, ov: Overrides) -> CliResult<Outcome> {
    if !TASKS.contains(&task) {
        return Err(invalid(format!("unknown task `{task}`")));
    }
    let cx = Context::new(doc, ov)?;
    let p = &doc.params;
    match task {
        "hilbert" => hilbert(&cx, p.hilbert.as_ref().ok_or_else(|| missing(task))?),
        "ext" => ext(&cx, p.ext.as_ref().ok_or_else(|| missing(task))?, ov),
        "tor" => tor(&cx, p.tor.as_ref().ok_or_else(|| missing(task))?, ov),
        "intersect" => intersect(&cx, p.intersect.as_ref().ok_or_else(|| missing(task))?, ov),
        "quot-eqs" => quot_eqs(&cx, p.quot_eqs.as_ref().ok_or_else(|| missing(task))?),
        "tangent" => tangent(&cx, p.tangent.as_ref().ok_or_else(|| missing(task))?, ov),
        "ract" => ract(&cx, p.ract.as_ref().ok_or_else(|| missing(task))?, ov),
        "stabilize" => stabilize(&cx, p.stabilize.as_ref().ok_or_else(|| missing(task))?, ov),
        _ => mhomotopy(p.mhomotopy.as_ref().ok_or_else(|| missing(task))?),
    }
}

fn hilbert(cx: &Context, p: &HilbertParams) -> CliResult<Outcome> {
    check_window(p.window, "module")?;
    let m = cx.module(&p.module, p.window)?;
    let dims: Vec<Value> = (p.window[0]..=p.window[1]).map(|j| json!({ "degree": j, "dim": m.dim(j) })).collect();
    Ok(Outcome::ok(json!({ "module": p.module, "window": p.window, "dims": dims })))
}

fn ext(cx: &Context, p: &ExtParams, ov: Overrides) -> CliResult<Outcome> {
    check_window(p.source_window, "source")?;
    check_window(p.target_window, "target")?;
    let v = cx.module(&p.source, p.source_window)?;
    let n = cx.module(&p.target, p.target_window)?;
    let i_max = ov.arity.unwrap_or(p.i_max);
    let mut rows = Vec::new();
    let mut pass = true;
    for i in 0..=i_max {
        let bar = ext_bar(&v, &n, i)?.dim;
        let free = ext_free(&v, &n, i)?;
        pass &= bar == free;
        rows.push(json!({ "i": i, "bar": bar, "free": free, "match": bar == free }));
    }
    Ok(Outcome::checked(json!({ "source": p.source, "target": p.target, "ext": rows }), pass))
}

fn tor(cx: &Context, p: &TorParams, ov: Overrides) -> CliResult<Outcome> {
    check_window(p.left_window, "left")?;
    check_window(p.right_window, "right")?;
    let l = cx.module(&p.left, p.left_window)?;
    let r = cx.module(&p.right, p.right_window)?;
    let i_max = ov.arity.unwrap_or(p.i_max);
    let mut rows = Vec::new();
    let mut pass = true;
    for i in 0..=i_max {
        for t in p.degrees[0]..=p.degrees[1] {
            let bar = tor_bar(&l, &r, i, t)?;
            let free = tor_free(&l, &r, i, t)?;
            pass &= bar == free;
            rows.push(json!({ "i": i, "degree": t, "bar": bar, "free": free, "match": bar == free }));
        }
    }
    Ok(Outcome::checked(json!({ "left": p.left, "right": p.right, "tor": rows }), pass))
}

fn intersect(cx: &Context, p: &IntersectParams, ov: Overrides) -> CliResult<Outcome> {
    let ring = cx.ring("intersect")?;
    let n = cx.nvars();
    let (y, z) = (parse_polys(&p.y, n)?, parse_polys(&p.z, n)?);
    let quotient = |gens: &[Polynomial]| {
        ModuleSpec::Presented { generator_degrees: vec![0], relations: gens.iter().map(|g| vec![g.clone()]).collect() }
            .build(ring, 0, p.max_degree)
    };
    let (qy, qz) = (quotient(&y)?, quotient(&z)?);
    let i_max = ov.arity.unwrap_or(p.i_max);
    let mut rows = Vec::new();
    let mut pass = true;
    for i in 0..=i_max {
        for (t, bar) in derived_intersection(ring, &y, &z, i, p.max_degree)? {
            let free = tor_free(&qy, &qz, i, t)?;
            pass &= bar == free;
            rows.push(json!({ "i": i, "degree": t, "bar": bar, "free": free, "match": bar == free }));
        }
    }
    Ok(Outcome::checked(json!({ "tor": rows }), pass))
}

fn h_map(window: [i64; 2], h: &[usize]) -> CliResult<BTreeMap<i64, usize>> {
    if h.len() as i64 != window[1] - window[0] + 1 {
        return Err(invalid("h needs one entry per degree of the window"));
    }
    Ok(h.iter().enumerate().map(|(k, d)| (window[0] + k as i64, *d)).collect())
}

fn quot_eqs(cx: &Context, p: &QuotEqsParams) -> CliResult<Outcome> {
    check_window(p.window, "ambient")?;
    let ring = cx.ring("quot-eqs")?.clone();
    let spec = match &p.ambient {
        Some(name) => cx.spec(name)?,
        None => ModuleSpec::free(),
    };
    let qp = QuotProblem::from_spec(ring, spec, p.window[0], p.window[1], h_map(p.window, &p.h)?)?;
    let pivots = p
        .pivots
        .iter()
        .map(|(k, v)| Ok((k.parse::<i64>().map_err(|_| invalid(format!("pivot degree `{k}` is not an integer")))?, v.clone())))
        .collect::<CliResult<_>>()?;
    let sys = chart_equations(&qp, &ChartSpec { pivots })?;
    Ok(Outcome::ok(json!({
        "variables": sys.variables,
        "equations": sys.render(),
        "count": sys.equations.len(),
    })))
}

fn cone_rows(r: &TangentComplexReport) -> Vec<Value> {
    r.oracle
        .iter()
        .map(|(i, o)| {
            let c = r.cohomology.get(i).copied().unwrap_or(0);
            json!({ "i": i, "cone": c, "oracle": o, "match": c == *o })
        })
        .collect()
}

fn tangent(cx: &Context, p: &TangentParams, ov: Overrides) -> CliResult<Outcome> {
    check_window(p.window, "ambient")?;
    let ring = cx.ring("tangent")?.clone();
    let gens = parse_polys(&p.submodule, cx.nvars())?;
    let v = ideal_submodule(&ring, &gens, p.window[0], p.window[1])?;
    let qp = QuotProblem::from_spec(ring, ModuleSpec::free(), p.window[0], p.window[1], v.dims())?;
    let i_max = ov.arity.unwrap_or(p.i_max);
    let report = if p.widen { derived_quot_tangent(&qp, &v, i_max) } else { tangent_rg_cone(&v, i_max) };
    let report = match report {
        Ok(r) => r,
        Err(e @ Error::WindowUnstable(_)) => return Ok(Outcome::failed(e)),
        Err(e) => return Err(e.into()),
    };
    let classical = tangent_classical(&v)?.dim;
    let jac = jacobian_tangent_check(&qp, &chart_containing(&v), &v)?;
    let h0 = report.cohomology.get(&0).copied().unwrap_or(0);
    let pass = report.pass && jac.pass && classical == h0;
    let dims: Vec<Value> = v.dims().iter().map(|(j, d)| json!({ "degree": j, "dim": d })).collect();
    let mut result = json!({
        "point": { "generators": p.submodule, "window": p.window, "dims": dims },
        "cohomology": cone_rows(&report),
        "classical_tangent": classical,
        "jacobian": jac,
    });
    if !report.windows.is_empty() {
        let windows: Vec<Value> = report
            .windows
            .iter()
            .map(|(q, h)| json!({ "q": q, "cohomology": h.iter().map(|(i, d)| json!({ "i": i, "dim": d })).collect::<Vec<_>>() }))
            .collect();
        result["windows"] = Value::Array(windows);
    }
    Ok(Outcome::checked(result, pass))
}

fn ract(cx: &Context, p: &RactParams, ov: Overrides) -> CliResult<Outcome> {
    let space = GradedDims { low: p.low, dims: p.dims.clone() };
    let arity = ov.arity.unwrap_or(p.arity);
    let pres = match build_ract_dga(&cx.algebra, &space, arity) {
        Ok(r) => r,
        Err(e @ Error::SignError(_)) => return Ok(Outcome::failed(e)),
        Err(e) => return Err(e.into()),
    };
    let dga = &pres.dga;
    let generators: Vec<Value> = dga
        .generators()
        .iter()
        .enumerate()
        .map(|(k, g)| {
            json!({
                "name": g.name,
                "projective": g.degree.projective,
                "cohomological": g.degree.cohomological,
                "d": dga.format(dga.differential(k)),
            })
        })
        .collect();
    let pi0: Vec<String> = pi0_ideal(dga).iter().map(|q| dga.format(q)).collect();
    Ok(Outcome::ok(json!({ "generators": generators, "pi0": pi0, "d_squared_zero": true })))
}

fn stabilize(cx: &Context, p: &StabilizeParams, ov: Overrides) -> CliResult<Outcome> {
    let ring = cx.ring("stabilize")?;
    let need = p.cap + 1 + p.width;
    if (ring.max_degree() as i64) < need {
        return Err(invalid(format!("stabilize needs the algebra truncated at degree {need} or more")));
    }
    let (m, n) = (cx.spec(&p.m)?, cx.spec(&p.n)?);
    let i_max = ov.arity.unwrap_or(p.i_max);
    let r = stabilization_bound(ring, &m, p.p_m, &n, p.p_n, i_max, p.q_start, p.cap, p.width)?;
    let rows = |t: &BTreeMap<i64, Vec<usize>>| -> Vec<Value> { t.iter().map(|(q, e)| json!({ "q": q, "ext": e })).collect() };
    let vanishing = r.vanishing_holds();
    let pass = r.q0.is_some() && vanishing && r.oracle_agrees;
    Ok(Outcome::checked(
        json!({
            "table": rows(&r.table),
            "q0": r.q0,
            "cap_reached": r.q0.is_none(),
            "cap": r.cap,
            "upper_part": rows(&r.upper_part),
            "free_part": rows(&r.free_part),
            "vanishing_holds": vanishing,
            "oracle_agrees": r.oracle_agrees,
        }),
        pass,
    ))
}

fn presentation(gens: &[DgaGeneratorDoc]) -> CliResult<FreeDgaPresentation> {
    let g: Vec<DgaGenerator> = gens
        .iter()
        .map(|x| DgaGenerator { name: x.name.clone(), degree: BiDegree::new(x.projective, x.cohomological) })
        .collect();
    for (k, x) in g.iter().enumerate() {
        if g[..k].iter().any(|y| y.name == x.name) {
            return Err(invalid(format!("generator `{}` is declared twice", x.name)));
        }
    }
    let bare = FreeDgaPresentation::unchecked(g.clone(), vec![GcPoly::new(); g.len()])?;
    let d = gens.iter().map(|x| bare.parse(&x.d)).collect::<Result<_, _>>()?;
    Ok(FreeDgaPresentation::new(g, d)?)
}

fn images(b: &FreeDgaPresentation, c: &FreeDgaPresentation, f: &BTreeMap<String, String>, which: &str) -> CliResult<Vec<GcPoly>> {
    if let Some(extra) = f.keys().find(|k| b.position(k).is_none()) {
        return Err(invalid(format!("{which} names `{extra}`, which is not a generator of B")));
    }
    b.generators()
        .iter()
        .map(|g| {
            let s = f.get(&g.name).ok_or_else(|| invalid(format!("{which} gives no image for `{}`", g.name)))?;
            Ok(c.parse(s)?)
        })
        .collect()
}

fn mhomotopy(p: &MHomotopyParams) -> CliResult<Outcome> {
    let (b, c) = (presentation(&p.b)?, presentation(&p.c)?);
    let f0 = images(&b, &c, &p.f0, "f0")?;
    let f1 = images(&b, &c, &p.f1, "f1")?;
    let samples: Vec<Scalar> =
        p.samples.iter().map(|s| s.parse().map_err(|_| CliError::Parse(format!("bad sample `{s}`")))).collect::<CliResult<_>>()?;
    let h = match m_homotopy_construct(&b, &c, &f0, &f1, p.floor) {
        Ok(h) => h,
        Err(e @ (Error::NotHomotopic(_) | Error::AcyclicityFailure(_))) => return Ok(Outcome::failed(e)),
        Err(e) => return Err(e.into()),
    };
    let render = |tp: &[GcPoly]| -> Vec<String> { tp.iter().map(|q| c.format(q)).collect() };
    let rows: Vec<Value> = h
        .treated
        .iter()
        .map(|&y| json!({ "generator": b.generators()[y].name, "f_t": render(&h.f[y]), "s_t": render(&h.s[y]) }))
        .collect();
    let check = h.check(&b, &c, &f0, &f1, &samples);
    let pass = check.pass();
    Ok(Outcome::checked(json!({ "homotopy": rows, "samples": p.samples, "check": check }), pass))
}
