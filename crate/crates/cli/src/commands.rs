use std::fs;
use std::path::Path;
use std::time::Instant;

use frameweave::geometry::{gap_angle_report, weaving_span_geometry};
use frameweave::weaving::{
    certify_woven_limited, check_corollary, check_norm_sum, check_perturbation, explore_problem,
    ExploreConfig,
};
use frameweave::{
    Closure, Frame, IndexSubset, Problem, RelativeTo, Subspace, SubsetPolicy, Tolerance,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::files::{load_frame, load_matrix, FrameFile, InputDigest, Loaded};
use crate::report::{render, Envelope};
use crate::{ClosureArg, Cli, CliError, Command, Condition, Construction, Output, PolicyArg, WovenArgs};

struct Outcome {
    result: Value,
    exit: u8,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

#[derive(Default)]
struct Inputs(Vec<InputDigest>);

impl Inputs {
    fn frame(&mut self, path: &Path) -> Result<Frame, CliError> {
        let Loaded { value, digest } = load_frame(path)?;
        self.0.push(digest);
        Ok(value)
    }
}

pub fn run(cli: Cli, tol: &Tolerance) -> Result<u8, CliError> {
    let started = Instant::now();
    let mut inputs = Inputs::default();
    let (name, outcome) = match cli.command {
        Command::Construct { kind } => return construct(kind, tol),
        Command::Bounds { file, span } => ("bounds", bounds(&inputs.frame(&file)?, span, tol)?),
        Command::Woven(args) => {
            let f = inputs.frame(&args.first)?;
            let g = inputs.frame(&args.second)?;
            ("woven", woven(&f, &g, &args, tol)?)
        }
        Command::Check { condition } => ("check", check(condition, &mut inputs, tol)?),
        Command::Geometry { first, second, sigma } => {
            let f = inputs.frame(&first)?;
            let g = inputs.frame(&second)?;
            ("geometry", geometry(&f, &g, sigma.as_deref(), tol)?)
        }
        Command::Explore {
            problem,
            trials,
            dim,
            count,
            seed,
            include,
        } => {
            let extra = include
                .iter()
                .map(|p| inputs.frame(p))
                .collect::<Result<Vec<_>, _>>()?;
            let cfg = ExploreConfig {
                problem: if problem == 1 {
                    Problem::FrameOperatorImage
                } else {
                    Problem::CanonicalDual
                },
                trials,
                dim,
                count,
                seed,
                extra,
            };
            let report = explore_problem(&cfg, tol)?;
            let outcome = Outcome {
                result: to_value(&report),
                exit: 0,
            };
            ("explore", outcome)
        }
    };
    let runtime_ms = if cli.timing {
        started.elapsed().as_millis() as u64
    } else {
        0
    };
    let envelope = Envelope {
        command: name.into(),
        inputs: inputs.0,
        tolerances: *tol,
        result: outcome.result,
        runtime_ms,
    };
    print!("{}", render(&envelope));
    Ok(outcome.exit)
}

fn bounds(f: &Frame, span: bool, tol: &Tolerance) -> Result<Outcome, CliError> {
    let relative_to = if span {
        RelativeTo::SpanOfFamily
    } else {
        RelativeTo::Ambient
    };
    let b = f.optimal_bounds(relative_to, tol)?;
    let mut result = to_value(&b);
    result["dim"] = json!(f.dim());
    result["count"] = json!(f.len());
    result["rank"] = json!(f.rank(tol));
    Ok(Outcome { result, exit: 0 })
}

fn woven(f: &Frame, g: &Frame, args: &WovenArgs, tol: &Tolerance) -> Result<Outcome, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} worker threads: {e}", args.jobs)))?;
    let certify = |policy| pool.install(|| certify_woven_limited(f, g, policy, tol, args.limit));
    if args.sequences {
        let seq = certify(SubsetPolicy::NontrivialOnly)?;
        let all = certify(SubsetPolicy::All)?;
        let exit = if seq.woven { 0 } else { 1 };
        let mut result = to_value(&seq);
        result["all_subsets"] = to_value(&all);
        return Ok(Outcome { result, exit });
    }
    let policy = match args.policy {
        PolicyArg::All => SubsetPolicy::All,
        PolicyArg::Nontrivial => SubsetPolicy::NontrivialOnly,
    };
    let r = certify(policy)?;
    Ok(Outcome {
        exit: if r.woven { 0 } else { 1 },
        result: to_value(&r),
    })
}

fn check(condition: Condition, inputs: &mut Inputs, tol: &Tolerance) -> Result<Outcome, CliError> {
    let (kind, report) = match condition {
        Condition::Perturb { f, g, h } => {
            let (f, g, h) = (inputs.frame(&f)?, inputs.frame(&g)?, inputs.frame(&h)?);
            ("perturb", check_perturbation(&f, &g, &h, tol)?)
        }
        Condition::Corollary { f, g } => {
            let (f, g) = (inputs.frame(&f)?, inputs.frame(&g)?);
            ("corollary", check_corollary(&f, &g, tol)?)
        }
        Condition::Normsum { f, g } => {
            let (f, g) = (inputs.frame(&f)?, inputs.frame(&g)?);
            ("normsum", check_norm_sum(&f, &g, tol)?)
        }
    };
    let mut result = to_value(&report);
    result["condition"] = json!(kind);
    Ok(Outcome {
        exit: if report.condition_holds { 0 } else { 1 },
        result,
    })
}

fn parse_sigma(raw: &str, m: usize) -> Result<IndexSubset, CliError> {
    let bad = || CliError::Usage(format!("bad --sigma {raw:?}: expected a 0/1 string or 0b mask"));
    if let Some(bits) = raw.strip_prefix("0b") {
        let mask = u64::from_str_radix(bits, 2).map_err(|_| bad())?;
        return Ok(IndexSubset::new(m, mask)?);
    }
    if raw.is_empty() || !raw.chars().all(|c| c == '0' || c == '1') {
        return Err(bad());
    }
    let sigma = IndexSubset::from_bits(raw)?;
    if sigma.m() != m {
        return Err(CliError::Usage(format!(
            "--sigma {raw:?} has {} entries but the families have {m} vectors",
            sigma.m()
        )));
    }
    Ok(sigma)
}

fn geometry(f: &Frame, g: &Frame, sigma: Option<&str>, tol: &Tolerance) -> Result<Outcome, CliError> {
    let report = match sigma {
        Some(raw) => weaving_span_geometry(f, g, parse_sigma(raw, f.len())?, tol)?,
        None => {
            let m = Subspace::span(f.synthesis(), tol)?;
            let n = Subspace::span(g.synthesis(), tol)?;
            gap_angle_report(&m, &n, tol)?
        }
    };
    let mut result = to_value(&report);
    if let Some(raw) = sigma {
        result["sigma"] = to_value(&parse_sigma(raw, f.len())?);
    }
    Ok(Outcome { result, exit: 0 })
}

fn closure(c: ClosureArg) -> Closure {
    match c {
        ClosureArg::Zero => Closure::ZeroTail,
        ClosureArg::Wrap => Closure::WrapAround,
    }
}

fn construct(kind: Construction, tol: &Tolerance) -> Result<u8, CliError> {
    let (built, output) = match kind {
        Construction::Diff { file, closure: c, output } => {
            (load_frame(&file)?.value.difference_family(closure(c)), output)
        }
        Construction::Lincomb {
            file,
            alpha,
            beta,
            closure: c,
            output,
        } => (
            load_frame(&file)?.value.linear_comb_family(alpha, beta, closure(c))?,
            output,
        ),
        Construction::Dual { file, output } => (load_frame(&file)?.value.canonical_dual(tol)?, output),
        Construction::Frameop { file, output } => (load_frame(&file)?.value.apply_frame_operator(), output),
        Construction::Operator { file, matrix, output } => {
            let f = load_frame(&file)?.value;
            let t = load_matrix(&matrix)?.value;
            if !t.is_square() {
                return Err(frameweave::Error::NonSquare {
                    rows: t.rows(),
                    cols: t.cols(),
                }
                .into());
            }
            (f.map(&t)?, output)
        }
    };
    write_frame(&built, output)?;
    Ok(0)
}

fn write_frame(frame: &Frame, output: Output) -> Result<(), CliError> {
    let text = FrameFile::from_frame(frame, output.name).to_text();
    match output.out {
        Some(path) => fs::write(&path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
