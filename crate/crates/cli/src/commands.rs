use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use gradus::algebra::{AlgebraError, GradedAlgebra};
use gradus::format::{emit_algebra, parse_algebra_file, parse_cocycle_spec, parse_field, parse_flags, to_json, AlgebraFile, FormatError};
use gradus::hochschild::{cocycle_violation, cohomology, deform as deform_alpha, primary_obstruction, HochschildError};
use gradus::stability::{
    check_q_stability, is_strongly_coprime, SearchConfig, StabilityError, StabilityParameter,
};
use gradus::Field;

use crate::report::{emit, sha256_hex, write_report, CommandEcho, InputEcho, Report};
use crate::{Common, StrategyArg};

struct Session {
    verb: &'static str,
    common: Common,
    file: AlgebraFile,
    digest: String,
    options: BTreeMap<String, Value>,
    attachments: BTreeMap<String, Value>,
    start: Instant,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn format_error(path: &Path, e: FormatError) -> anyhow::Error {
    anyhow!("{}: {e}", path.display())
}

impl Session {
    fn open(verb: &'static str, common: &Common) -> Result<Session> {
        let start = Instant::now();
        let text = read(&common.file)?;
        let mut file = parse_algebra_file(&text).map_err(|e| format_error(&common.file, e))?;
        let mut options = BTreeMap::new();
        if let Some(f) = &common.field {
            let field = parse_field(f).map_err(|e| anyhow!("--field: {e}"))?;
            file.field = field.to_string();
            options.insert("field".into(), json!(file.field));
        }
        Ok(Session {
            verb,
            common: common.clone(),
            file,
            digest: sha256_hex(text.as_bytes()),
            options,
            attachments: BTreeMap::new(),
            start,
        })
    }

    fn field(&self) -> Field {
        self.file.field().expect("validated on open")
    }

    fn option(&mut self, key: &str, value: impl Serialize) {
        self.options.insert(key.into(), serde_json::to_value(value).expect("serializable"));
    }

    /// The verified algebra, or the payload rejecting it.
    fn algebra(&self) -> Result<std::result::Result<GradedAlgebra, Value>> {
        match self.file.build() {
            Ok(a) => Ok(Ok(a)),
            Err(FormatError::Algebra(AlgebraError::NotAssociative(w))) => {
                Ok(Err(json!({ "associative": false, "witness": w, "message": format!("μ∘μ ≠ 0 on basis triple {w}") })))
            }
            Err(e) => Err(format_error(&self.common.file, e)),
        }
    }

    fn finish(self, ok: bool, payload: Value) -> Result<u8> {
        let field = self.field().to_string();
        let timing_ms = self.common.timing.then(|| self.start.elapsed().as_secs_f64() * 1000.0);
        let report = Report {
            tool: "gradus",
            version: env!("CARGO_PKG_VERSION"),
            command: CommandEcho { verb: self.verb.into(), options: self.options },
            input: InputEcho {
                path: self.common.file.display().to_string(),
                sha256: self.digest,
                algebra: self.file,
                attachments: self.attachments,
            },
            field,
            status: if ok { "ok" } else { "rejected" },
            payload,
            timing_ms,
        };
        write_report(&report, self.common.output.as_deref())?;
        Ok(if ok { 0 } else { 1 })
    }
}

fn value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("serializable")
}

pub fn verify(common: &Common) -> Result<u8> {
    let s = Session::open("verify", common)?;
    let raw = s.file.raw().map_err(|e| format_error(&common.file, e))?;
    let total: usize = raw.space.dims().iter().sum();
    let dims = raw.space.dims().to_vec();
    match raw.into_algebra() {
        Ok(_) => s.finish(true, json!({ "associative": true, "dims": dims, "total_dim": total })),
        Err(AlgebraError::NotAssociative(w)) => s.finish(false, json!({ "associative": false, "dims": dims, "witness": w })),
        Err(e) => Err(e.into()),
    }
}

pub fn hh(common: &Common, p_max: usize) -> Result<u8> {
    let mut s = Session::open("hh", common)?;
    s.option("p_max", p_max);
    let a = match s.algebra()? {
        Ok(a) => a,
        Err(rejection) => return s.finish(false, rejection),
    };
    let r = cohomology(&a, p_max);
    let hh: BTreeMap<String, usize> = r.groups.iter().map(|g| (format!("HH{}", g.hh_index), g.dim)).collect();
    s.finish(true, json!({ "hh": hh, "report": value(&r) }))
}

fn attach(s: &mut Session, key: &str, path: &Path) -> Result<String> {
    let text = read(path)?;
    let echoed: Value = serde_json::from_str(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    s.attachments.insert(key.into(), echoed);
    Ok(text)
}

pub fn deform(common: &Common, cocycle: &Path, obstruction_only: bool) -> Result<u8> {
    let mut s = Session::open(if obstruction_only { "obstruct" } else { "deform" }, common)?;
    let text = attach(&mut s, "cocycle", cocycle)?;
    let a = match s.algebra()? {
        Ok(a) => a,
        Err(rejection) => return s.finish(false, rejection),
    };
    let spec = parse_cocycle_spec(&text).map_err(|e| format_error(cocycle, e))?;
    let alpha = spec.resolve(&a).map_err(|e| format_error(cocycle, e))?;
    if let Some(v) = cocycle_violation(&a, &alpha)? {
        return s.finish(false, json!({ "accepted": false, "violation": v }));
    }
    let obstruction = primary_obstruction(&a, &alpha)?;
    if obstruction_only {
        return s.finish(true, json!({ "alpha": alpha, "obstruction": obstruction }));
    }
    match deform_alpha(&a, &alpha) {
        Ok(d) => s.finish(
            true,
            json!({
                "accepted": true,
                "alpha": d.alpha,
                "triples_checked": d.triples_checked,
                "equivalent_to_trivial": d.equivalent_to_trivial,
                "obstruction": obstruction,
            }),
        ),
        Err(HochschildError::NotCocycle(v)) => s.finish(false, json!({ "accepted": false, "violation": v })),
        Err(e) => Err(e.into()),
    }
}

pub struct StabilityArgs {
    pub theta: Option<String>,
    pub strategy: Option<StrategyArg>,
    pub r_max: Option<usize>,
    pub seed: u64,
    pub samples: usize,
    pub flags: Option<PathBuf>,
}

fn parse_theta(text: &str) -> Result<Vec<i64>> {
    text.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| anyhow!("--theta: {t:?} is not an integer")))
        .collect()
}

pub fn stability(common: &Common, args: &StabilityArgs) -> Result<u8> {
    let mut s = Session::open("stability", common)?;
    let flags_text = match &args.flags {
        Some(p) => Some(attach(&mut s, "flags", p)?),
        None => None,
    };
    let a = match s.algebra()? {
        Ok(a) => a,
        Err(rejection) => return s.finish(false, rejection),
    };
    let theta = match &args.theta {
        Some(t) => StabilityParameter::new(parse_theta(t)?, a.dims()).map_err(|e| anyhow!("--theta: {e}"))?,
        None => match StabilityParameter::standard(a.dims()) {
            Ok(t) => t,
            Err(e) => return s.finish(false, json!({ "message": e.to_string() })),
        },
    };
    let strategy = args.strategy.unwrap_or(if a.field() == Field::Rational { StrategyArg::Heuristic } else { StrategyArg::Exhaustive });
    let mut config = match strategy {
        StrategyArg::Exhaustive => SearchConfig::exhaustive(args.r_max),
        StrategyArg::Heuristic => SearchConfig::heuristic(args.seed, args.samples, args.r_max),
    };
    if let (Some(text), Some(path)) = (&flags_text, &args.flags) {
        config = config.with_flags(parse_flags(text, &a).map_err(|e| format_error(path, e))?);
    }
    s.option("theta", theta.theta());
    s.option("strategy", if strategy == StrategyArg::Exhaustive { "exhaustive" } else { "heuristic" });
    s.option("r_max", args.r_max);
    if strategy == StrategyArg::Heuristic {
        s.option("seed", args.seed);
        s.option("samples", args.samples);
    }
    match check_q_stability(&a, &theta, &config) {
        Ok(v) => s.finish(true, json!({ "verdict": v })),
        Err(StabilityError::NoDegreeOneGenerators) => s.finish(false, json!({ "message": StabilityError::NoDegreeOneGenerators.to_string() })),
        Err(e) => bail!(e),
    }
}

pub fn truncate(common: &Common, q: usize, algebra_out: Option<&Path>) -> Result<u8> {
    let mut s = Session::open("truncate", common)?;
    s.option("q", q);
    let a = match s.algebra()? {
        Ok(a) => a,
        Err(rejection) => return s.finish(false, rejection),
    };
    let t = a.truncate(q)?;
    let file = emit_algebra(&t);
    if let Some(p) = algebra_out {
        emit(&to_json(&file), Some(p))?;
    }
    s.finish(true, json!({ "algebra": file }))
}

pub fn info(common: &Common) -> Result<u8> {
    let s = Session::open("info", common)?;
    let a = match s.algebra()? {
        Ok(a) => a,
        Err(rejection) => return s.finish(false, rejection),
    };
    let space = a.space();
    let dim_l: Vec<Value> = (0..=3)
        .map(|p| {
            let blocks: Vec<Value> = space
                .compositions(p + 1)
                .iter()
                .map(|c| json!({ "composition": c.parts(), "dim": space.dim(c.degree()) * space.tensor_dim(c) }))
                .collect();
            json!({
                "p": p,
                "dim": space.dim_l(p),
                "by_internal_degree": (1..=a.q()).map(|n| space.dim_l_in_degree(p, n)).collect::<Vec<_>>(),
                "blocks": blocks,
            })
        })
        .collect();
    let payload = json!({
        "dims": a.dims(),
        "q": a.q(),
        "total_dim": space.total_dim(),
        "dim_l": dim_l,
        "generated_in_degree_one": a.is_generated_in_degree_one(),
        "has_top_vanishing_ideal": a.has_top_vanishing_ideal(),
        "strongly_coprime": is_strongly_coprime(a.dims()),
        "labels": a.labels(),
    });
    s.finish(true, payload)
}
