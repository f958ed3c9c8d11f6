//! Command-line surface binding every module: parse expressions and JSON
//! matrices, run the computations, and emit JSON (default) or aligned-text
//! results and convergence tables.
//!
//! Exit codes: 0 on success, 2 on input errors (bad flags, malformed JSON,
//! grammar errors), 1 on numerical failures (singular derivatives, spectral
//! gaps below threshold, conditioning limits).
//!
//! All randomness is seeded (`--seed`, default 0) and the seed is echoed in
//! the output, so runs are byte-for-byte reproducible. Text-mode numbers
//! carry 17 significant digits so they round-trip exactly through doubles.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::evaluator::{
    block_derivative, complex_step_derivative, eval_poly, eval_poly_matrix, gdelta_norm,
    symbolic_derivative_eval,
};
use crate::freealg::parse_poly;
use crate::implicit::{commutation_residual, newton_implicit_solve, NewtonOptions};
use crate::jsonio::{
    matrix_to_rows, parse_delta, parse_matrix, parse_matrix_tuple, parse_realization, parse_samples,
};
use crate::linalg;
use crate::lmi::{
    leading_principal_minors, positivity_verdict, riccati_lmi_block, riccati_residual,
    PositivityVerdict, RiccatiData,
};
use crate::mattuple::{op_norm, spectrum, PolydiscSpec};
use crate::realization::approx_error_sweep;
use crate::sample;
use crate::sylvester::{
    disjointness_verdict, solve_sylvester, spectral_gap, sylvester_kernel_candidate,
    DisjointnessVerdict,
};
use crate::CMat;

#[derive(Parser)]
#[command(
    name = "ncfun",
    version,
    about = "Evaluate, differentiate, and solve free noncommutative functions on matrix tuples"
)]
struct Cli {
    /// Emit JSON (the default).
    #[arg(long, global = true, action = ArgAction::SetTrue, conflicts_with = "text")]
    json: bool,
    /// Emit aligned text instead of JSON.
    #[arg(long, global = true, action = ArgAction::SetTrue)]
    text: bool,
    /// Seed for any randomized subcommand; echoed in the output.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a polynomial on a matrix tuple.
    Eval {
        /// Expression over x1..xd, d taken from the tuple.
        #[arg(long)]
        poly: String,
        /// Path to a matrix-tuple JSON file.
        #[arg(long)]
        tuple: PathBuf,
    },
    /// Evaluate a matrix of polynomials blockwise.
    EvalDelta {
        /// Path to a delta JSON file ({"d": .., "entries": [["expr", ..], ..]}).
        #[arg(long)]
        delta: PathBuf,
        #[arg(long)]
        tuple: PathBuf,
    },
    /// Membership in a polynomial polyhedron or an operator-norm polydisc.
    Member {
        #[arg(long, conflicts_with_all = ["center", "radius"])]
        delta: Option<PathBuf>,
        /// Scale on delta: tests ‖t·delta(x)‖ < 1.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Center tuple of a polydisc (requires --radius).
        #[arg(long, requires = "radius")]
        center: Option<PathBuf>,
        #[arg(long, requires = "center")]
        radius: Option<f64>,
        #[arg(long)]
        tuple: PathBuf,
    },
    /// Compare the three derivative routes: block-triangular, symbolic
    /// Leibniz, and step-parameter sampling.
    Diff {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        tuple: PathBuf,
        /// Direction tuple (same shape as --tuple).
        #[arg(long)]
        dir: PathBuf,
    },
    /// Spectral analysis of the operator H -> AH - HB, kernel detection, and
    /// (with --c) the inhomogeneous solve AH - HB = C.
    Sylvester {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        c: Option<PathBuf>,
        /// Kernel threshold on the smallest singular value.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Solve p(..., Y) = 0 for one matrix variable by damped Newton.
    Implicit {
        #[arg(long)]
        poly: String,
        /// Fixed variable, e.g. --fix X=x.json or --fix x1=x.json. Repeatable.
        #[arg(long)]
        fix: Vec<String>,
        /// Variable to solve for (X/Y/Z/W or x<k>).
        #[arg(long)]
        solve: String,
        /// Initial guess matrix; defaults to zero.
        #[arg(long)]
        y0: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 50)]
        max_iter: usize,
    },
    /// Riccati residual, its LMI block form, and the positivity verdicts.
    Riccati {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        c: PathBuf,
        #[arg(long)]
        x: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        margin: f64,
        /// Also emit leading principal minors of the block form.
        #[arg(long, action = ArgAction::SetTrue)]
        minors: bool,
    },
    /// Evaluate a realization-formula function at a tuple in its polyhedron.
    RealizationEval {
        #[arg(long)]
        realization: PathBuf,
        #[arg(long)]
        tuple: PathBuf,
    },
    /// Neumann-truncation error sweep over sample tuples.
    Neumann {
        #[arg(long)]
        realization: PathBuf,
        /// Samples must satisfy ‖t·delta(x)‖ < 1; must exceed 1.
        #[arg(long, default_value_t = 2.0)]
        t: f64,
        /// JSON array of matrix tuples.
        #[arg(long)]
        samples: PathBuf,
        #[arg(long, default_value_t = 12)]
        nmax: usize,
    },
    /// Randomized structural-axiom suite: direct sums and similarities.
    Axioms {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, default_value_t = 3)]
        d_max: usize,
        #[arg(long, default_value_t = 4)]
        deg_max: usize,
        #[arg(long, default_value_t = 1e3)]
        cond_max: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

/// Run the CLI against `args` (including the program name), writing results
/// to `out`. Returns the process exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let as_text = cli.text;
    let seed = cli.seed;
    match dispatch(cli) {
        Ok(mut value) => {
            if let (Some(seed), Some(obj)) = (seed, value.as_object_mut()) {
                obj.entry("seed").or_insert_with(|| json!(seed));
            }
            let rendered = if as_text {
                render_text(&value)
            } else {
                let mut s = serde_json::to_string_pretty(&value).expect("serializable value");
                s.push('\n');
                s
            };
            if out.write_all(rendered.as_bytes()).is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn read_file(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn matrix_value(m: &CMat) -> Value {
    json!(matrix_to_rows(m))
}

fn dispatch(cli: Cli) -> Result<Value> {
    match cli.command {
        Command::Eval { poly, tuple } => {
            let x = parse_matrix_tuple(&read_file(&tuple)?)?;
            let p = parse_poly(&poly, x.len())?;
            let value = eval_poly(&p, &x)?;
            Ok(json!({
                "poly": p.to_string(),
                "n": x.level(),
                "result": matrix_value(&value),
                "norm": op_norm(&value),
            }))
        }
        Command::EvalDelta { delta, tuple } => {
            let delta = parse_delta(&read_file(&delta)?)?;
            let x = parse_matrix_tuple(&read_file(&tuple)?)?;
            let value = eval_poly_matrix(&delta, &x)?;
            Ok(json!({
                "rows": delta.rows(),
                "cols": delta.cols(),
                "result": matrix_value(&value),
                "norm": op_norm(&value),
            }))
        }
        Command::Member {
            delta,
            t,
            center,
            radius,
            tuple,
        } => {
            let x = parse_matrix_tuple(&read_file(&tuple)?)?;
            match (delta, center) {
                (Some(delta_path), None) => {
                    let delta = parse_delta(&read_file(&delta_path)?)?;
                    if !(t >= 1.0) {
                        return Err(Error::InvalidArgument {
                            arg: "t",
                            reason: format!("scale must be >= 1, got {t}"),
                        });
                    }
                    let norm = gdelta_norm(&delta, &x)?;
                    Ok(json!({
                        "kind": "gdelta",
                        "t": t,
                        "delta_norm": norm,
                        "member": norm * t < 1.0,
                    }))
                }
                (None, Some(center_path)) => {
                    let center = parse_matrix_tuple(&read_file(&center_path)?)?;
                    let r = radius.expect("clap enforces --radius with --center");
                    let spec = PolydiscSpec::new(center, r)?;
                    let distance = spec.distance(&x)?;
                    Ok(json!({
                        "kind": "polydisc",
                        "radius": r,
                        "distance": distance,
                        "member": distance < r,
                    }))
                }
                _ => Err(Error::InvalidArgument {
                    arg: "member",
                    reason: "pass either --delta or --center/--radius".into(),
                }),
            }
        }
        Command::Diff { poly, tuple, dir } => {
            let x = parse_matrix_tuple(&read_file(&tuple)?)?;
            let h = parse_matrix_tuple(&read_file(&dir)?)?;
            let p = parse_poly(&poly, x.len())?;
            let block = block_derivative(&p, &x, &h)?;
            let symbolic = symbolic_derivative_eval(&p, &x, &h)?;
            let step = complex_step_derivative(&p, &x, &h)?;
            let d1 = op_norm(&(&block - &symbolic));
            let d2 = op_norm(&(&block - &step));
            let d3 = op_norm(&(&symbolic - &step));
            Ok(json!({
                "block": matrix_value(&block),
                "symbolic": matrix_value(&symbolic),
                "complex_step": matrix_value(&step),
                "max_pairwise_difference": d1.max(d2).max(d3),
            }))
        }
        Command::Sylvester { a, b, c, tol } => {
            let a = parse_matrix(&read_file(&a)?)?;
            let b = parse_matrix(&read_file(&b)?)?;
            let (gap, la, lb) = spectral_gap(&a, &b);
            let verdict = match disjointness_verdict(&a, &b) {
                DisjointnessVerdict::Disjoint => "disjoint",
                DisjointnessVerdict::Shared => "shared",
                DisjointnessVerdict::Indeterminate => "indeterminate",
            };
            let (smin, kernel) = sylvester_kernel_candidate(&a, &b)?;
            let mut result = json!({
                "spectrum_a": spectrum(&a).iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                "spectrum_b": spectrum(&b).iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                "gap": gap,
                "closest_pair": [[la.re, la.im], [lb.re, lb.im]],
                "verdict": verdict,
                "kernel_smin": smin,
                "kernel_exists": smin <= tol,
                "tol": tol,
            });
            let obj = result.as_object_mut().expect("object just built");
            if smin <= tol {
                obj.insert("kernel_candidate".into(), matrix_value(&kernel));
            }
            if let Some(c_path) = c {
                let c = parse_matrix(&read_file(&c_path)?)?;
                let h = solve_sylvester(&a, &b, &c)?;
                let residual = op_norm(&(&a * &h - &h * &b - &c));
                obj.insert("solution".into(), matrix_value(&h));
                obj.insert("residual".into(), json!(residual));
            }
            Ok(result)
        }
        Command::Implicit {
            poly,
            fix,
            solve,
            y0,
            tol,
            max_iter,
        } => {
            let d = fix.len() + 1;
            let p = parse_poly(&poly, d)?;
            let solve_idx = var_index(&solve, d)?;
            let mut fixed_pairs: Vec<(usize, CMat)> = Vec::with_capacity(fix.len());
            for spec in &fix {
                let (name, path) = spec.split_once('=').ok_or_else(|| Error::InvalidArgument {
                    arg: "fix",
                    reason: format!("expected NAME=path, got `{spec}`"),
                })?;
                let idx = var_index(name.trim(), d)?;
                if idx == solve_idx {
                    return Err(Error::InvalidArgument {
                        arg: "fix",
                        reason: format!("variable {name} is also the solve target"),
                    });
                }
                let matrix = parse_matrix(&read_file(Path::new(path.trim()))?)?;
                fixed_pairs.push((idx, matrix));
            }
            fixed_pairs.sort_by_key(|(idx, _)| *idx);
            let mut covered: Vec<usize> = fixed_pairs.iter().map(|(i, _)| *i).collect();
            covered.push(solve_idx);
            covered.sort_unstable();
            covered.dedup();
            if covered.len() != d || covered != (1..=d).collect::<Vec<_>>() {
                return Err(Error::InvalidArgument {
                    arg: "fix",
                    reason: "fixed variables plus the solve target must cover x1..xd exactly once"
                        .into(),
                });
            }
            // Relabel so the solve target becomes the last variable.
            let mut perm = vec![0usize; d];
            for (slot, (idx, _)) in fixed_pairs.iter().enumerate() {
                perm[idx - 1] = slot + 1;
            }
            perm[solve_idx - 1] = d;
            let p = p.permute_vars(&perm)?;
            let fixed: Vec<CMat> = fixed_pairs.into_iter().map(|(_, m)| m).collect();
            let y0 = match y0 {
                Some(path) => parse_matrix(&read_file(&path)?)?,
                None => {
                    // Matrix size comes from the fixed coordinates; a pure
                    // single-variable solve must supply --y0 instead.
                    let n = fixed.first().map(|m| m.nrows()).ok_or_else(|| {
                        Error::InvalidArgument {
                            arg: "y0",
                            reason:
                                "with no --fix coordinates, --y0 is required to set the matrix size"
                                    .into(),
                        }
                    })?;
                    CMat::zeros(n, n)
                }
            };
            let opts = NewtonOptions {
                tol,
                max_iter,
                ..NewtonOptions::default()
            };
            let outcome = newton_implicit_solve(&p, &fixed, &y0, &opts)?;
            let commutation = fixed
                .iter()
                .map(|m| commutation_residual(m, &outcome.solution))
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            Ok(json!({
                "y": matrix_value(&outcome.solution),
                "residual": outcome.residual_norm,
                "iterations": outcome.iterations,
                "commutation_residual": commutation,
            }))
        }
        Command::Riccati {
            a,
            b,
            c,
            x,
            margin,
            minors,
        } => {
            let data = RiccatiData::new(
                parse_matrix(&read_file(&a)?)?,
                parse_matrix(&read_file(&b)?)?,
                parse_matrix(&read_file(&c)?)?,
                parse_matrix(&read_file(&x)?)?,
            )?;
            let residual = riccati_residual(&data);
            let block = riccati_lmi_block(&data);
            let rv = positivity_verdict(&residual, margin)?;
            let bv = positivity_verdict(&block, margin)?;
            let verdict_str = |v: PositivityVerdict| match v {
                PositivityVerdict::Positive => "positive",
                PositivityVerdict::NotPositive => "not_positive",
                PositivityVerdict::Indeterminate => "indeterminate",
            };
            let mut result = json!({
                "margin": margin,
                "residual": matrix_value(&residual),
                "lmi_block": matrix_value(&block),
                "min_eig_residual": linalg::hermitian_min_eigenvalue(&residual),
                "min_eig_block": linalg::hermitian_min_eigenvalue(&block),
                "residual_verdict": verdict_str(rv),
                "block_verdict": verdict_str(bv),
                "verdicts_agree": rv == PositivityVerdict::Indeterminate
                    || bv == PositivityVerdict::Indeterminate
                    || rv == bv,
            });
            if minors {
                let ms = leading_principal_minors(&block)
                    .iter()
                    .map(|z| [z.re, z.im])
                    .collect::<Vec<_>>();
                result
                    .as_object_mut()
                    .expect("object just built")
                    .insert("block_minors".into(), json!(ms));
            }
            Ok(result)
        }
        Command::RealizationEval { realization, tuple } => {
            let r = parse_realization(&read_file(&realization)?)?;
            let defect = r.validate_isometry();
            if defect > 1e-10 {
                return Err(Error::InvalidArgument {
                    arg: "realization",
                    reason: format!("isometry defect {defect:.3e} exceeds 1e-10"),
                });
            }
            let x = parse_matrix_tuple(&read_file(&tuple)?)?;
            let value = r.eval(&x)?;
            Ok(json!({
                "isometry_defect": defect,
                "delta_norm": gdelta_norm(r.delta(), &x)?,
                "result": matrix_value(&value),
            }))
        }
        Command::Neumann {
            realization,
            t,
            samples,
            nmax,
        } => {
            let r = parse_realization(&read_file(&realization)?)?;
            let defect = r.validate_isometry();
            if defect > 1e-10 {
                return Err(Error::InvalidArgument {
                    arg: "realization",
                    reason: format!("isometry defect {defect:.3e} exceeds 1e-10"),
                });
            }
            let samples = parse_samples(&read_file(&samples)?)?;
            let rows = approx_error_sweep(&r, t, &samples, nmax)?;
            let bc = op_norm(r.b_row()) * op_norm(r.c_col());
            let table: Vec<Value> = rows
                .iter()
                .map(|row| {
                    let bound = bc * t.powi(-(row.order as i32 + 1)) / (1.0 - 1.0 / t) + 1e-10;
                    json!({"N": row.order, "max_err": row.max_error, "bound": bound})
                })
                .collect();
            let nonincreasing = rows
                .windows(2)
                .all(|w| w[1].max_error <= w[0].max_error + 1e-14);
            Ok(json!({
                "t": t,
                "samples": samples.len(),
                "rows": table,
                "nonincreasing": nonincreasing,
            }))
        }
        Command::Axioms {
            count,
            n_max,
            d_max,
            deg_max,
            cond_max,
            tol,
        } => {
            let seed = cli_seed_default(cli.seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut direct_sum_max: f64 = 0.0;
            let mut similarity_max: f64 = 0.0;
            let mut direct_sum_failures = 0usize;
            let mut similarity_failures = 0usize;
            for _ in 0..count {
                let d = rng.random_range(1..=d_max);
                let n = rng.random_range(1..=n_max);
                let m = rng.random_range(1..=n_max);
                let p = sample::random_poly(&mut rng, d, deg_max, 8);
                let x = sample::gaussian_tuple(&mut rng, d, n);
                let y = sample::gaussian_tuple(&mut rng, d, m);

                // Direct sums.
                let sum = x.direct_sum(&y)?;
                let fsum = eval_poly(&p, &sum)?;
                let fx = eval_poly(&p, &x)?;
                let fy = eval_poly(&p, &y)?;
                let mut expected = CMat::zeros(n + m, n + m);
                expected.view_mut((0, 0), (n, n)).copy_from(&fx);
                expected.view_mut((n, n), (m, m)).copy_from(&fy);
                let scale = 1.0
                    + p.coeff_l1() * sum.max_coord_norm().max(1.0).powi(p.degree().max(0) as i32);
                let defect = op_norm(&(fsum - expected)) / scale;
                direct_sum_max = direct_sum_max.max(defect);
                if defect > tol {
                    direct_sum_failures += 1;
                }

                // Similarities.
                let cond = 10f64.powf(rng.random_range(0.0..cond_max.log10()));
                let s = sample::similarity_with_cond(&mut rng, n, cond);
                let conj = x.conjugate(&s)?;
                let lhs = eval_poly(&p, &conj)?;
                let s_inv = linalg::inverse(&s)?;
                let rhs = &s_inv * &fx * &s;
                let scale = cond
                    * (1.0
                        + p.coeff_l1()
                            * x.max_coord_norm().max(1.0).powi(p.degree().max(0) as i32));
                let defect = op_norm(&(lhs - rhs)) / scale;
                similarity_max = similarity_max.max(defect);
                if defect > tol {
                    similarity_failures += 1;
                }
            }
            Ok(json!({
                "seed": seed,
                "count": count,
                "tolerance": tol,
                "direct_sum": {
                    "max_rel_defect": direct_sum_max,
                    "failures": direct_sum_failures,
                },
                "similarity": {
                    "max_rel_defect": similarity_max,
                    "failures": similarity_failures,
                },
                "pass": direct_sum_failures == 0 && similarity_failures == 0,
            }))
        }
    }
}

fn cli_seed_default(seed: Option<u64>) -> u64 {
    seed.unwrap_or(0)
}

/// Resolve a variable name: `x<k>`, or the aliases X, Y, Z, W for x1..x4.
fn var_index(name: &str, d: usize) -> Result<usize> {
    let idx = match name {
        "X" => Some(1),
        "Y" => Some(2),
        "Z" => Some(3),
        "W" => Some(4),
        _ => name
            .strip_prefix('x')
            .and_then(|rest| rest.parse::<usize>().ok()),
    };
    match idx {
        Some(i) if i >= 1 && i <= d => Ok(i),
        Some(i) => Err(Error::VarOutOfRange {
            var: i,
            num_vars: d,
        }),
        None => Err(Error::InvalidArgument {
            arg: "variable",
            reason: format!("cannot interpret `{name}` as a variable name"),
        }),
    }
}

/// 17 significant digits: exact round-trip for doubles.
fn fmt_f64_17(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_number(n: &serde_json::Number) -> String {
    if let Some(i) = n.as_i64() {
        i.to_string()
    } else if let Some(u) = n.as_u64() {
        u.to_string()
    } else {
        fmt_f64_17(n.as_f64().unwrap_or(f64::NAN))
    }
}

fn is_complex_pair(v: &Value) -> bool {
    matches!(v.as_array(), Some(a) if a.len() == 2 && a.iter().all(Value::is_number))
}

fn is_matrix(v: &Value) -> bool {
    matches!(v.as_array(), Some(rows) if !rows.is_empty() && rows.iter().all(|row| {
        matches!(row.as_array(), Some(entries) if !entries.is_empty()
            && entries.iter().all(is_complex_pair))
    }))
}

fn fmt_complex_pair(v: &Value) -> String {
    let a = v.as_array().expect("checked complex pair");
    let re = a[0].as_f64().unwrap_or(f64::NAN);
    let im = a[1].as_f64().unwrap_or(f64::NAN);
    format!(
        "{} {} {}i",
        fmt_f64_17(re),
        if im < 0.0 { "-" } else { "+" },
        fmt_f64_17(im.abs())
    )
}

fn render_matrix(v: &Value, indent: usize, out: &mut String) {
    for row in v.as_array().expect("checked matrix") {
        let entries: Vec<String> = row
            .as_array()
            .expect("checked matrix row")
            .iter()
            .map(fmt_complex_pair)
            .collect();
        let _ = writeln!(out, "{}[ {} ]", " ".repeat(indent), entries.join("   "));
    }
}

fn render_value(key: Option<&str>, v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    let label = key.map(|k| format!("{k}: ")).unwrap_or_default();
    match v {
        Value::Object(map) => {
            if let Some(k) = key {
                let _ = writeln!(out, "{pad}{k}:");
            }
            render_object(map, indent + if key.is_some() { 2 } else { 0 }, out);
        }
        Value::Array(_) if is_matrix(v) => {
            if let Some(k) = key {
                let _ = writeln!(out, "{pad}{k}:");
            }
            render_matrix(v, indent + 2, out);
        }
        Value::Array(items) => {
            if items.iter().all(|i| i.is_object()) && !items.is_empty() {
                if let Some(k) = key {
                    let _ = writeln!(out, "{pad}{k}:");
                }
                for item in items {
                    let _ = writeln!(out, "{pad}  -");
                    render_value(None, item, indent + 4, out);
                }
            } else {
                let inline: Vec<String> = items
                    .iter()
                    .map(|i| match i {
                        Value::Number(n) => fmt_number(n),
                        _ if is_complex_pair(i) => fmt_complex_pair(i),
                        other => other.to_string(),
                    })
                    .collect();
                let _ = writeln!(out, "{pad}{label}[{}]", inline.join(", "));
            }
        }
        Value::Number(n) => {
            let _ = writeln!(out, "{pad}{label}{}", fmt_number(n));
        }
        Value::Bool(b) => {
            let _ = writeln!(out, "{pad}{label}{b}");
        }
        Value::String(s) => {
            let _ = writeln!(out, "{pad}{label}{s}");
        }
        Value::Null => {
            let _ = writeln!(out, "{pad}{label}null");
        }
    }
}

fn render_object(map: &Map<String, Value>, indent: usize, out: &mut String) {
    for (k, v) in map {
        render_value(Some(k), v, indent, out);
    }
}

fn render_text(value: &Value) -> String {
    let mut out = String::new();
    render_value(None, value, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn var_names_resolve() {
        assert_eq!(var_index("X", 2).unwrap(), 1);
        assert_eq!(var_index("Y", 2).unwrap(), 2);
        assert_eq!(var_index("x2", 2).unwrap(), 2);
        assert!(var_index("Q", 2).is_err());
        assert!(var_index("x5", 2).is_err());
    }

    #[test]
    fn seventeen_digit_floats_roundtrip() {
        for &v in &[0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23] {
            let s = fmt_f64_17(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn text_renderer_formats_matrices() {
        let value = json!({"result": [[[1.0, 0.0], [0.0, -2.0]]]});
        let text = render_text(&value);
        assert!(text.contains("result:"));
        assert!(text.contains("1.0000000000000000e0"));
    }
}
