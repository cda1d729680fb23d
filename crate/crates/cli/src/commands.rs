use std::fs;
use std::path::Path;

use mgl_core::chacon::{self, ChaconModel, SupGrowthConfig};
use mgl_core::classifier::{self, ClassifyConfig, GrowthTag};
use mgl_core::ergodic::{theorem3_limit, AnyCocycle, CocycleSpec};
use mgl_core::growth::{self, EnumerationConfig, GrowthCurve, HullConfig, HullMode, NormKind};
use mgl_core::scalar::rational_from_f64;
use mgl_core::{AnyMatrixSet, Error, Mat2, MatrixSet, Rational, Scalar};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::{Command, Failure, HullArith, Method};

/// What a successful command reports, for the exit code and the run record.
pub struct Outcome {
    pub code: u8,
    pub command: &'static str,
    pub input_digest: Option<String>,
    pub parameters: Value,
    pub results: Value,
}

type CmdResult = Result<Outcome, Failure>;

pub fn run(cmd: &Command) -> CmdResult {
    match cmd {
        Command::Classify { input, exact, depth, tolerance } => classify(input, *exact, *depth, *tolerance),
        Command::Growth { input, max_len, method, norm, hull_mode, prune, budget, out } => {
            let opts = GrowthOpts {
                max_len: *max_len,
                method: *method,
                norm: norm.parse()?,
                hull: HullConfig { mode: hull_mode_of(*hull_mode), ..HullConfig::default() },
                prune: *prune,
                budget: *budget,
            };
            growth_cmd(input, &opts, out.as_deref())
        }
        Command::JsrBounds { input, depth, tolerance } => jsr_bounds(input, *depth, *tolerance),
        Command::Ergopt { input, out } => ergopt(input, out.as_deref()),
        Command::Chacon { depth, max_n, samples, off_z, seed, out_prefix } => {
            chacon_cmd(*depth, *max_n, *samples, *off_z, *seed, out_prefix)
        }
    }
}

fn hull_mode_of(h: HullArith) -> HullMode {
    match h {
        HullArith::Auto => HullMode::Auto,
        HullArith::Exact => HullMode::Exact,
        HullArith::Float => HullMode::Float,
    }
}

fn read_input(path: &Path) -> Result<(String, String), Failure> {
    let bytes = fs::read(path).map_err(|e| Failure { code: 1, message: format!("{}: {e}", path.display()) })?;
    let digest = hex::encode(Sha256::digest(&bytes));
    let text =
        String::from_utf8(bytes).map_err(|_| Failure { code: 1, message: format!("{}: not UTF-8", path.display()) })?;
    Ok((text, digest))
}

fn parse_json(text: &str) -> Result<Value, Failure> {
    Ok(serde_json::from_str(text).map_err(Error::from)?)
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

/// Floating entries are read as the exact binary fractions they store.
fn exact_set(any: AnyMatrixSet) -> Result<MatrixSet<Rational>, Failure> {
    match any {
        AnyMatrixSet::Exact(s) => Ok(s),
        AnyMatrixSet::Float(s) => {
            let conv =
                |x: &f64| rational_from_f64(*x).ok_or_else(|| Error::InvalidInput(format!("non-finite entry {x}")));
            let mats = s
                .matrices()
                .iter()
                .map(|m| Ok(Mat2::new(conv(&m.e11)?, conv(&m.e12)?, conv(&m.e21)?, conv(&m.e22)?)))
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(MatrixSet::new(mats)?)
        }
    }
}

fn classify(input: &Path, exact: bool, depth: usize, tolerance: f64) -> CmdResult {
    let (text, digest) = read_input(input)?;
    let any = AnyMatrixSet::from_json_str(&text)?;
    if exact {
        any.exact()?;
    }
    let set = exact_set(any)?;
    let class = classifier::classify(&set, &ClassifyConfig { depth, tolerance });
    let results = class.to_json();
    print_json(&results);
    Ok(Outcome {
        code: if class.tag == GrowthTag::NotMarginal { 2 } else { 0 },
        command: "classify",
        input_digest: Some(digest),
        parameters: json!({ "input": input.display().to_string(), "exact": exact, "depth": depth, "tolerance": tolerance }),
        results,
    })
}

fn jsr_bounds(input: &Path, depth: usize, tolerance: f64) -> CmdResult {
    let (text, digest) = read_input(input)?;
    let set = exact_set(AnyMatrixSet::from_json_str(&text)?)?;
    let report = classifier::verify_rho_one(&set, depth, tolerance);
    let mut results = serde_json::to_value(&report).expect("serializable");
    results["accepts_one"] = json!(report.accepts_one());
    print_json(&results);
    Ok(Outcome {
        code: 0,
        command: "jsr-bounds",
        input_digest: Some(digest),
        parameters: json!({ "input": input.display().to_string(), "depth": depth, "tolerance": tolerance }),
        results,
    })
}

struct GrowthOpts {
    max_len: usize,
    method: Method,
    norm: NormKind,
    hull: HullConfig,
    prune: bool,
    budget: u64,
}

impl GrowthOpts {
    fn enumeration(&self) -> EnumerationConfig {
        let mut cfg = EnumerationConfig::new(self.max_len);
        cfg.norm = self.norm;
        cfg.prune_domination = self.prune;
        cfg.budget = self.budget;
        cfg
    }
}

fn growth_of_set<S: Scalar>(set: &MatrixSet<S>, opts: &GrowthOpts) -> Result<GrowthCurve, Error> {
    match opts.method {
        Method::Enumerate => growth::enumerate_growth(set, &opts.enumeration()),
        Method::HullDp => growth::hull_dp_matrices_with(set, opts.max_len, &opts.hull),
    }
}

/// Window-1 cocycles are products over the generators `[[f, φ], [0, g]]`.
fn window_one_set<S: Scalar>(spec: &CocycleSpec<S>) -> Result<MatrixSet<S>, Error> {
    if spec.window() != 1 {
        return Err(Error::Precondition("enumeration needs a window-1 cocycle; use --method hull-dp".into()));
    }
    let (f, g, phi) = (spec.f.table(), spec.g.table(), spec.phi.table());
    MatrixSet::new((0..spec.alphabet()).map(|a| Mat2::upper(f[a].clone(), phi[a].clone(), g[a].clone())).collect())
}

fn growth_of_cocycle<S: Scalar>(spec: &CocycleSpec<S>, opts: &GrowthOpts) -> Result<GrowthCurve, Error> {
    match opts.method {
        Method::Enumerate => growth::enumerate_growth(&window_one_set(spec)?, &opts.enumeration()),
        Method::HullDp => growth::hull_dp_growth_with(spec, opts.max_len, &opts.hull),
    }
}

fn growth_cmd(input: &Path, opts: &GrowthOpts, out: Option<&Path>) -> CmdResult {
    let (text, digest) = read_input(input)?;
    let v = parse_json(&text)?;
    let curve = if v.get("matrices").is_some() {
        match AnyMatrixSet::from_json(&v)? {
            AnyMatrixSet::Exact(set) if matches!(opts.method, Method::HullDp) && !set.is_upper_triangular() => {
                let conj = classifier::triangularize(&set)
                    .and_then(|t| t.rational_conjugated())
                    .ok_or_else(|| Error::Precondition("hull DP needs a rational triangularizing basis".into()))?;
                eprintln!("mgl: hull DP runs in the triangularizing basis");
                growth_of_set(&MatrixSet::new(conj)?, opts)?
            }
            AnyMatrixSet::Exact(set) => growth_of_set(&set, opts)?,
            AnyMatrixSet::Float(set) => growth_of_set(&set, opts)?,
        }
    } else {
        match AnyCocycle::from_json(&v)? {
            AnyCocycle::Exact(spec) => growth_of_cocycle(&spec, opts)?,
            AnyCocycle::Float(spec) => growth_of_cocycle(&spec, opts)?,
        }
    };
    let bracket = growth::fekete_bracket(&curve)?;
    if let Some(path) = out {
        fs::write(path, curve.to_csv())?;
    }
    println!("fekete_upper={}, latest={}", bracket.upper, bracket.latest);
    Ok(Outcome {
        code: 0,
        command: "growth",
        input_digest: Some(digest),
        parameters: json!({
            "input": input.display().to_string(),
            "max_len": opts.max_len,
            "method": format!("{:?}", opts.method).to_lowercase(),
            "norm": opts.norm,
            "hull_mode": format!("{:?}", opts.hull.mode).to_lowercase(),
            "prune": opts.prune,
            "budget": opts.budget,
        }),
        results: json!({
            "fekete": bracket,
            "csv": out.map(|p| p.display().to_string()),
        }),
    })
}

fn ergopt(input: &Path, out: Option<&Path>) -> CmdResult {
    let (text, digest) = read_input(input)?;
    let results = match AnyCocycle::from_json_str(&text)? {
        AnyCocycle::Exact(spec) => theorem3_limit(&spec)?.to_json(),
        AnyCocycle::Float(spec) => theorem3_limit(&spec)?.to_json(),
    };
    let pretty = serde_json::to_string_pretty(&results).expect("serializable");
    if let Some(path) = out {
        fs::write(path, format!("{pretty}\n"))?;
    }
    println!("{pretty}");
    Ok(Outcome {
        code: 0,
        command: "ergopt",
        input_digest: Some(digest),
        parameters: json!({ "input": input.display().to_string(), "out": out.map(|p| p.display().to_string()) }),
        results,
    })
}

const DEFAULT_MAX_N: usize = 59_049;

fn chacon_cmd(depth: usize, max_n: Option<usize>, samples: usize, off_z: usize, seed: u64, prefix: &str) -> CmdResult {
    let model = ChaconModel::new(depth)?;
    let len = model.prefix().len();
    let room = len.saturating_sub(2 * model.radius_cap() + 1);
    let max_n = max_n.unwrap_or(DEFAULT_MAX_N.min(room));
    let d = chacon::birkhoff_discrepancy(&model, &chacon::checkpoints(len))?;
    let s = chacon::cocycle_sup_growth(&model, &SupGrowthConfig { max_n, z_samples: samples, off_z, seed })?;
    let summary = serde_json::to_value(chacon::summarize(&model, &d, &s)).expect("serializable");
    let paths = [format!("{prefix}_discrepancy.csv"), format!("{prefix}_growth.csv"), format!("{prefix}_summary.json")];
    fs::write(&paths[0], d.to_csv())?;
    fs::write(&paths[1], s.to_csv())?;
    let pretty = serde_json::to_string_pretty(&summary).expect("serializable");
    fs::write(&paths[2], format!("{pretty}\n"))?;
    println!("{pretty}");
    Ok(Outcome {
        code: 0,
        command: "chacon",
        input_digest: None,
        parameters: json!({ "depth": depth, "max_n": max_n, "samples": samples, "off_z": off_z, "seed": seed }),
        results: json!({ "files": paths, "summary": summary }),
    })
}
