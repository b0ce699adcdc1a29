//! Command-line front end: parse a problem file, dispatch to the
//! library, print canonical JSON on stdout and a one-line summary on
//! stderr. Exit codes: 0 ok, 2 input error, 3 oracle mismatch.

use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use valfield_core::json as wire;
use valfield_core::{
    annulus_member, annulus_sdr, characteristic_polynomial, is_psd, lp_oracle_via_image,
    psd_newton_crosscheck, sample_polyhedron_points, semialgebraic_description,
    smith_normal_form, snf_invariants_by_minors, solve_lp, spectrahedron_contains, Annulus,
    Ball, FieldDescriptor, LpOracleVerdict, LpOutcome, Matrix, Polyhedron, SampleGrid,
    ValuedScalar,
};

#[derive(Parser)]
#[command(name = "valfield", version, about = "exact optimization over valued fields")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// cross-check the result against an independent oracle
    #[arg(long, global = true)]
    verify: bool,
    /// seed for sampling-based verification
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// field descriptor JSON, overriding the one in the input file
    #[arg(long, global = true)]
    field: Option<String>,
    /// write the result JSON to a file instead of stdout
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// solve a valuation linear program
    Lp { input: String },
    /// Smith Normal Form over the valuation ring
    Snf { input: String },
    /// positive semidefiniteness of a symmetric matrix
    Psd { input: String },
    /// polyhedron operations
    Poly {
        #[command(subcommand)]
        op: PolyOp,
    },
    /// semidefinite representations
    Sdr {
        #[command(subcommand)]
        op: SdrOp,
    },
    /// spectrahedron operations
    Spectra {
        #[command(subcommand)]
        op: SpectraOp,
    },
}

#[derive(Subcommand)]
enum PolyOp {
    /// direct image under an affine map (default: drop the last coordinate)
    Project { input: String },
    /// point membership
    Member { input: String },
    /// emptiness with a witness when nonempty
    Empty { input: String },
    /// Minkowski sum of two polyhedra
    Minkowski { input: String },
    /// canonical ball form of a one-dimensional polyhedron
    BallForm { input: String },
    /// polydisc parametrization
    Polydisc { input: String },
}

#[derive(Subcommand)]
enum SdrOp {
    /// semidefinite representation of the annulus a <= val x <= b
    Annulus { input: String },
}

#[derive(Subcommand)]
enum SpectraOp {
    /// spectrahedron membership
    Member { input: String },
    /// defining polynomial inequalities (leading principal minors)
    Describe { input: String },
}

struct Failure {
    code: u8,
    msg: String,
}

fn input_err(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

impl From<valfield_core::Error> for Failure {
    fn from(e: valfield_core::Error) -> Self {
        input_err(e.to_string())
    }
}

fn read_input(path: &str) -> Result<Value, Failure> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| input_err(format!("cannot read stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| input_err(format!("cannot read {path}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| input_err(format!("malformed JSON: {e}")))
}

fn resolve_field(file: &Value, override_json: &Option<String>) -> Result<FieldDescriptor, Failure> {
    if let Some(text) = override_json {
        let v: Value =
            serde_json::from_str(text).map_err(|e| input_err(format!("bad --field: {e}")))?;
        return Ok(wire::descriptor_from_json(&v)?);
    }
    let fv = file
        .get("field")
        .ok_or_else(|| input_err("missing \"field\" (or pass --field)"))?;
    Ok(wire::descriptor_from_json(fv)?)
}

fn get_key<'a>(file: &'a Value, key: &str) -> Result<&'a Value, Failure> {
    file.get(key)
        .ok_or_else(|| input_err(format!("missing key \"{key}\"")))
}

fn get_matrix(d: &FieldDescriptor, file: &Value, key: &str) -> Result<Matrix, Failure> {
    Ok(wire::matrix_from_json(d, get_key(file, key)?)?)
}

fn get_vector(d: &FieldDescriptor, file: &Value, key: &str) -> Result<Vec<ValuedScalar>, Failure> {
    Ok(wire::vector_from_json(d, get_key(file, key)?)?)
}

fn get_polyhedron(d: &FieldDescriptor, file: &Value, key: &str) -> Result<Polyhedron, Failure> {
    Ok(wire::polyhedron_from_json(d, get_key(file, key)?)?)
}

fn get_i64(file: &Value, key: &str) -> Result<i64, Failure> {
    get_key(file, key)?
        .as_i64()
        .ok_or_else(|| input_err(format!("\"{key}\" must be an integer")))
}

/// result JSON plus an oracle verdict: None means not verified,
/// Some(true/false) means the cross-check agreed or disagreed
type Outcome = (Value, Option<bool>);

fn oracle_block(method: &str, matched: bool, detail: Value) -> Value {
    let mut obj = detail;
    let map = obj.as_object_mut().expect("oracle detail is an object");
    map.insert("match".into(), Value::Bool(matched));
    map.insert("method".into(), Value::String(method.into()));
    obj
}

fn run_lp(file: &Value, field: Option<&FieldDescriptor>, verify: bool) -> Result<Outcome, Failure> {
    let inst = wire::lp_instance_from_json(file, field)?;
    let outcome = solve_lp(&inst)?;
    let mut result = wire::lp_outcome_to_json(&outcome);
    if !verify {
        return Ok((result, None));
    }
    let oracle = lp_oracle_via_image(&inst)?;
    let matched = match (&outcome, &oracle) {
        (LpOutcome::Infeasible, LpOracleVerdict::Infeasible) => true,
        (LpOutcome::Unbounded, LpOracleVerdict::Unbounded) => true,
        (LpOutcome::Feasible { value, .. }, LpOracleVerdict::Value(v)) => value == v,
        _ => false,
    };
    let verdict = match oracle {
        LpOracleVerdict::Infeasible => json!({"type": "INFEAS"}),
        LpOracleVerdict::Unbounded => json!({"type": "UNBOUND"}),
        LpOracleVerdict::Value(v) => json!({"type": "FEAS", "value": wire::ext_valuation_to_json(v)}),
    };
    result["oracle"] = oracle_block("objective-image", matched, json!({"verdict": verdict}));
    Ok((result, Some(matched)))
}

fn run_snf(file: &Value, d: &FieldDescriptor, verify: bool) -> Result<Outcome, Failure> {
    let m = get_matrix(d, file, "M")?;
    let snf = smith_normal_form(&m);
    let mut result = json!({
        "S": wire::matrix_to_json(&snf.s),
        "P": wire::matrix_to_json(&snf.p),
        "Pinv": wire::matrix_to_json(&snf.p_inv),
        "Q": wire::matrix_to_json(&snf.q),
        "Qinv": wire::matrix_to_json(&snf.q_inv),
        "exponents": snf.exponents,
        "rank": snf.rank(),
    });
    if !verify {
        return Ok((result, None));
    }
    let recon = snf.q.mul(&m)?.mul(&snf.p_inv)? == snf.s;
    let (matched, block) = if m.rows() <= 4 && m.cols() <= 4 {
        let oracle = snf_invariants_by_minors(&m)?;
        let matched = recon && oracle == snf.exponents;
        (matched, oracle_block("minors", matched, json!({"exponents": oracle})))
    } else {
        (recon, oracle_block("reconstruction", recon, json!({})))
    };
    result["oracle"] = block;
    Ok((result, Some(matched)))
}

fn run_psd(file: &Value, d: &FieldDescriptor, verify: bool) -> Result<Outcome, Failure> {
    let m = get_matrix(d, file, "M")?;
    let chi = characteristic_polynomial(&m)?;
    let psd = is_psd(&m)?;
    let coeffs: Vec<Value> = chi
        .coeffs()
        .iter()
        .map(|c| Value::String(c.render()))
        .collect();
    let mut result = json!({"psd": psd, "charpoly": coeffs});
    if !verify {
        return Ok((result, None));
    }
    let dual = psd_newton_crosscheck(&m)?;
    let matched = dual == psd;
    result["oracle"] = oracle_block("newton-polygon", matched, json!({"psd": dual}));
    Ok((result, Some(matched)))
}

fn sampling_grid(d: &FieldDescriptor, seed: u64) -> SampleGrid {
    SampleGrid::default_for(d, -5, 5, seed)
}

/// double inclusion by sampling: mapped samples of p land in img, and
/// samples of img have a preimage (checked exactly via a fiber cut)
fn image_sampling_check(
    p: &Polyhedron,
    f: &valfield_core::AffineMap,
    img: &Polyhedron,
    grid: &SampleGrid,
) -> Result<bool, Failure> {
    if p.is_empty() {
        return Ok(img.is_empty());
    }
    for x in sample_polyhedron_points(p, grid, 100) {
        if !img.contains(&f.apply(&x)?)? {
            return Ok(false);
        }
    }
    for y in sample_polyhedron_points(img, grid, 100) {
        let w: Vec<ValuedScalar> = f.g.iter().zip(&y).map(|(gi, yi)| gi.sub(yi)).collect();
        let fiber = Polyhedron::new(
            p.ambient_dim(),
            Matrix::zeros(p.descriptor(), 0, p.ambient_dim()),
            vec![],
            f.f.clone(),
            w,
        )?;
        if p.intersect(&fiber)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn run_poly(op: &PolyOp, file: &Value, d: &FieldDescriptor, verify: bool, seed: u64) -> Result<Outcome, Failure> {
    match op {
        PolyOp::Project { .. } => {
            let p = get_polyhedron(d, file, "P")?;
            let f = match file.get("map") {
                Some(mj) => wire::affine_map_from_json(d, mj)?,
                None => {
                    let keep = match file.get("keep") {
                        Some(k) => k
                            .as_u64()
                            .ok_or_else(|| input_err("\"keep\" must be a nonnegative integer"))?
                            as usize,
                        None => p.ambient_dim().saturating_sub(1),
                    };
                    if keep > p.ambient_dim() {
                        return Err(input_err("\"keep\" exceeds the ambient dimension"));
                    }
                    valfield_core::AffineMap::projection(d, p.ambient_dim(), keep)
                }
            };
            let img = p.direct_image(&f)?;
            let mut result = wire::polyhedron_to_json(&img);
            if !verify {
                return Ok((result, None));
            }
            let matched = image_sampling_check(&p, &f, &img, &sampling_grid(d, seed))?;
            result["oracle"] = oracle_block("sampling", matched, json!({"points": 100}));
            Ok((result, Some(matched)))
        }
        PolyOp::Member { .. } => {
            let p = get_polyhedron(d, file, "P")?;
            let x = get_vector(d, file, "x")?;
            Ok((json!({"member": p.contains(&x)?}), None))
        }
        PolyOp::Empty { .. } => {
            let p = get_polyhedron(d, file, "P")?;
            let result = match p.witness() {
                Some(x) => json!({"empty": false, "witness": wire::vector_to_json(&x)}),
                None => json!({"empty": true}),
            };
            if verify {
                // a witness must actually satisfy the constraints
                let matched = match p.witness() {
                    Some(x) => p.contains(&x)?,
                    None => true,
                };
                let mut r = result;
                r["oracle"] = oracle_block("witness-check", matched, json!({}));
                return Ok((r, Some(matched)));
            }
            Ok((result, None))
        }
        PolyOp::Minkowski { .. } => {
            let p = get_polyhedron(d, file, "P")?;
            let q = get_polyhedron(d, file, "Q")?;
            let sum = p.minkowski_sum(&q)?;
            let mut result = wire::polyhedron_to_json(&sum);
            if !verify {
                return Ok((result, None));
            }
            // sums of sampled members must land in the computed set
            let grid = sampling_grid(d, seed);
            let mut matched = true;
            if p.is_empty() || q.is_empty() {
                matched = sum.is_empty();
            } else {
                let xs = sample_polyhedron_points(&p, &grid, 20);
                let ys = sample_polyhedron_points(&q, &grid, 20);
                'outer: for x in &xs {
                    for y in &ys {
                        let z: Vec<ValuedScalar> =
                            x.iter().zip(y).map(|(a, b)| a.add(b)).collect();
                        if !sum.contains(&z)? {
                            matched = false;
                            break 'outer;
                        }
                    }
                }
            }
            result["oracle"] = oracle_block("sampling", matched, json!({}));
            Ok((result, Some(matched)))
        }
        PolyOp::BallForm { .. } => {
            let p = get_polyhedron(d, file, "P")?;
            if p.ambient_dim() != 1 {
                return Err(input_err("ball form needs a one-dimensional polyhedron"));
            }
            let ball = p.canonical_ball_form()?;
            let mut result = wire::ball_to_json(&ball);
            if !verify {
                return Ok((result, None));
            }
            let grid = sampling_grid(d, seed);
            let mut samples = grid.sample_scalars();
            if let Ball::Ball { ref center, .. } = ball {
                let shifted: Vec<ValuedScalar> =
                    samples.iter().map(|s| center.add(s)).collect();
                samples.extend(shifted);
            }
            let mut matched = true;
            for s in &samples {
                if ball.contains(s) != p.contains(std::slice::from_ref(s))? {
                    matched = false;
                    break;
                }
            }
            result["oracle"] = oracle_block("sampling", matched, json!({"points": samples.len()}));
            Ok((result, Some(matched)))
        }
        PolyOp::Polydisc { .. } => {
            let p = get_polyhedron(d, file, "P")?;
            if p.is_empty() {
                return Ok((json!({"empty": true}), None));
            }
            let disc = p.as_polydisc_image()?;
            let constraints: Vec<Value> = disc
                .disc_constraints
                .iter()
                .map(|(s, c)| json!({"c": wire::scalar_to_json(c), "s": wire::scalar_to_json(s)}))
                .collect();
            let result = json!({
                "base": wire::vector_to_json(&disc.base_point),
                "map": wire::matrix_to_json(&disc.map),
                "disc": constraints,
            });
            Ok((result, None))
        }
    }
}

fn run_sdr_annulus(file: &Value, d: &FieldDescriptor, verify: bool, seed: u64) -> Result<Outcome, Failure> {
    let a = get_i64(file, "a")?;
    let b = get_i64(file, "b")?;
    let annulus = Annulus::new(a, b)?;
    let sdr = annulus_sdr(d, annulus);
    let mut result = wire::sdr_to_json(&sdr);
    if !verify {
        return Ok((result, None));
    }
    // sampled set equivalence: membership via inverse witness agrees
    // with the valuation window on nonzero grid points
    let grid = SampleGrid::default_for(d, a - 2, b + 2, seed);
    let mut matched = true;
    for x in grid.sample_scalars().iter().filter(|x| !x.is_zero()) {
        if annulus_member(&sdr, std::slice::from_ref(x))? != annulus.contains(x) {
            matched = false;
            break;
        }
    }
    result["oracle"] = oracle_block("sampling", matched, json!({}));
    Ok((result, Some(matched)))
}

fn run_spectra(op: &SpectraOp, file: &Value, d: &FieldDescriptor, verify: bool) -> Result<Outcome, Failure> {
    let pencil = wire::pencil_from_json(d, get_key(file, "pencil")?)?;
    match op {
        SpectraOp::Member { .. } => {
            let x = get_vector(d, file, "x")?;
            let member = spectrahedron_contains(&pencil, &x, None)?;
            let mut result = json!({"member": member});
            if !verify {
                return Ok((result, None));
            }
            let dual = psd_newton_crosscheck(&pencil.evaluate(&x)?)?;
            let matched = dual == member;
            result["oracle"] = oracle_block("newton-polygon", matched, json!({"member": dual}));
            Ok((result, Some(matched)))
        }
        SpectraOp::Describe { .. } => {
            let polys: Vec<Value> = semialgebraic_description(&pencil)
                .iter()
                .map(|p| Value::String(p.render()))
                .collect();
            Ok((json!({"polynomials": polys}), None))
        }
    }
}

fn render_summary(result: &Value) -> String {
    if let Some(t) = result.get("type").and_then(|t| t.as_str()) {
        return match t {
            "INFEAS" => "infeasible".into(),
            "UNBOUND" => "unbounded: objective valuation decreases without bound".into(),
            "FEAS" => {
                let value = result.get("value").map(|v| v.to_string()).unwrap_or_default();
                match result.get("x") {
                    Some(x) => format!("feasible; optimal valuation {value}; attained at x = {x}"),
                    None => format!("feasible; optimal valuation {value}"),
                }
            }
            "EMPTY" => "empty set".into(),
            "ALL" => "the whole line".into(),
            "BALL" => format!(
                "ball with center {} and radius valuation {}",
                result["center"], result["radius"]
            ),
            other => format!("result type {other}"),
        };
    }
    if let Some(psd) = result.get("psd").and_then(|v| v.as_bool()) {
        return if psd {
            "positive semidefinite: integral characteristic polynomial".into()
        } else {
            "not positive semidefinite: a characteristic coefficient is non-integral".into()
        };
    }
    if let Some(exps) = result.get("exponents") {
        return format!("Smith Normal Form with diagonal valuations {exps}");
    }
    if let Some(m) = result.get("member").and_then(|v| v.as_bool()) {
        return if m { "member".into() } else { "not a member".into() };
    }
    if let Some(e) = result.get("empty").and_then(|v| v.as_bool()) {
        return if e {
            "empty".into()
        } else {
            format!("nonempty; witness {}", result.get("witness").cloned().unwrap_or_default())
        };
    }
    if let Some(h) = result.get("height") {
        return format!(
            "semidefinite representation of degree {} with lift height {h}",
            result["d"]
        );
    }
    if let Some(ps) = result.get("polynomials").and_then(|v| v.as_array()) {
        return format!("{} defining polynomial inequalities", ps.len());
    }
    if result.get("base").is_some() {
        return "polydisc parametrization".into();
    }
    "done".into()
}

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    let path = match &cli.cmd {
        Cmd::Lp { input } | Cmd::Snf { input } | Cmd::Psd { input } => input,
        Cmd::Poly { op } => match op {
            PolyOp::Project { input }
            | PolyOp::Member { input }
            | PolyOp::Empty { input }
            | PolyOp::Minkowski { input }
            | PolyOp::BallForm { input }
            | PolyOp::Polydisc { input } => input,
        },
        Cmd::Sdr { op } => match op {
            SdrOp::Annulus { input } => input,
        },
        Cmd::Spectra { op } => match op {
            SpectraOp::Member { input } | SpectraOp::Describe { input } => input,
        },
    };
    let file = read_input(path)?;
    match &cli.cmd {
        Cmd::Lp { .. } => {
            let field = match &cli.field {
                Some(text) => {
                    let v: Value = serde_json::from_str(text)
                        .map_err(|e| input_err(format!("bad --field: {e}")))?;
                    Some(wire::descriptor_from_json(&v)?)
                }
                None => None,
            };
            run_lp(&file, field.as_ref(), cli.verify)
        }
        Cmd::Snf { .. } => {
            let d = resolve_field(&file, &cli.field)?;
            run_snf(&file, &d, cli.verify)
        }
        Cmd::Psd { .. } => {
            let d = resolve_field(&file, &cli.field)?;
            run_psd(&file, &d, cli.verify)
        }
        Cmd::Poly { op } => {
            let d = resolve_field(&file, &cli.field)?;
            run_poly(op, &file, &d, cli.verify, cli.seed)
        }
        Cmd::Sdr { op: SdrOp::Annulus { .. } } => {
            let d = resolve_field(&file, &cli.field)?;
            run_sdr_annulus(&file, &d, cli.verify, cli.seed)
        }
        Cmd::Spectra { op } => {
            let d = resolve_field(&file, &cli.field)?;
            run_spectra(op, &file, &d, cli.verify)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok((result, oracle)) => {
            let text = serde_json::to_string(&result).expect("result serializes");
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text + "\n") {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => println!("{text}"),
            }
            eprintln!("{}", render_summary(&result));
            match oracle {
                Some(false) => {
                    eprintln!("error: oracle disagreement");
                    ExitCode::from(3)
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
