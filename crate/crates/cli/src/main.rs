//! `heiscount` command-line front end.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 invalid input
//! (including errors raised by the library).

use std::f64::consts::SQRT_2;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use heiscount::chains::{export_chain, PolarPoint};
use heiscount::counting::{
    chain_count, chain_orbit_vectors, cubic_count, equidist_counts, grid_boxes, mertens_counts,
    Box3, EquidistReport,
};
use heiscount::cxhyp::{jacobian_of_f, mu_integral_exact, verify_cprime, verify_mu_integral};
use heiscount::heis::{cygan, cygan_second};
use heiscount::picard::{
    check_membership, default_generators, find_loxodromic_witness, load_generators, sigma, SUqMat,
};
use heiscount::quadint::ideal_span;
use heiscount::{make_field, zeta, Error, FieldSpec, HeisPt, QuadInt, ZLattice2};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

const SCHEMA: &str = "heiscount/v1";

#[derive(Parser, Debug)]
#[command(
    name = "heiscount",
    version,
    about = "Counting arithmetic points and chains in the Heisenberg group"
)]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Field metadata and theorem constants as JSON.
    FieldInfo(FieldArg),
    /// Exact orbit counts Ψ_m(s).
    Mertens(MertensArgs),
    /// Box counts and normalised masses of rational points.
    Equidist(EquidistArgs),
    /// Chain counts ψ(ε) for the Gaussian Picard group.
    Chains(ChainArgs),
    /// Numerical identity, metric and group checks.
    Verify(VerifyArgs),
    /// Cubic-point counts for a loxodromic seed.
    Cubic(CubicArgs),
}

#[derive(Args, Debug)]
struct FieldArg {
    /// Fundamental discriminant.
    #[arg(long = "D", allow_hyphen_values = true)]
    d: i64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MertensArgs {
    #[command(flatten)]
    field: FieldArg,
    /// Comma-separated heights.
    #[arg(long, value_delimiter = ',', required = true)]
    s: Vec<u64>,
    /// Ideal as HNF `h11,h12,h22` or as two generators `x1,y1,x2,y2`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    m: Option<Vec<i64>>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct EquidistArgs {
    #[command(flatten)]
    field: FieldArg,
    #[arg(long)]
    s: u64,
    /// `x0,x1,y0,y1,u0,u1`: ranges of Re w, Im w and Im w₀.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
    window: Vec<f64>,
    /// Subdivide the window into k×k×k boxes.
    #[arg(long, default_value_t = 1)]
    grid: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct ChainArgs {
    #[command(flatten)]
    field: FieldArg,
    #[arg(long, default_value_t = 10_000)]
    depth: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    eps: Vec<f64>,
    /// Search by words in these generators instead of by cosets.
    #[arg(long)]
    generators: Option<PathBuf>,
    /// Write sampled chains (largest ε) as JSON.
    #[arg(long)]
    emit_geometry: Option<PathBuf>,
    /// Samples per chain in the geometry export.
    #[arg(long, default_value_t = 64)]
    samples: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    all: bool,
    #[arg(long)]
    integrals: bool,
    #[arg(long)]
    metrics: bool,
    #[arg(long)]
    group: bool,
    /// Random pairs for the metric suite.
    #[arg(long, default_value_t = 10_000)]
    pairs: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args, Debug)]
struct CubicArgs {
    #[command(flatten)]
    field: FieldArg,
    /// JSON `{"disc": D, "matrix": [[[x, y], …], …]}`; defaults to a short
    /// loxodromic word in the built-in generators.
    #[arg(long)]
    gamma: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', required = true)]
    s: Vec<f64>,
    #[arg(long, default_value_t = 1_000)]
    depth: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn invalid<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Invalid(msg.into()))
}

fn emit(path: Option<&PathBuf>, text: &str) -> CmdResult {
    match path {
        Some(p) => {
            fs::write(p, text).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Invalid(e.to_string()))
        }
    }
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn pair(z: &QuadInt) -> Value {
    match z.to_i64_pair() {
        Some((x, y)) => json!([x, y]),
        None => json!([z.x().to_string(), z.y().to_string()]),
    }
}

fn field_info(a: &FieldArg) -> CmdResult {
    let f = make_field(a.d)?;
    let c = zeta::constants(&f);
    let v = json!({
        "schema": SCHEMA,
        "disc": f.disc(),
        "basis": format!("{:?}", f.basis_case()),
        "omega": {"trace": f.omega_trace(), "norm": f.omega_norm()},
        "units": f.units().iter().map(pair).collect::<Vec<_>>(),
        "t_K": f.t_k(),
        "pi_index": f.pi_index(),
        "imaginary_generator": pair(&f.imaginary_generator()),
        "constants": {
            "zeta3": c.zeta3,
            "L_chi_3": c.l_chi_3,
            "zetaK3": c.zeta_k3,
            "mertens_C": c.mertens_c,
            "equidist_C": c.equidist_c,
            "cusp_volume": c.cusp_volume,
            "picard_covolume": c.picard_covolume,
            "chain_C": c.chain_c,
        },
    });
    emit(None, &to_json(&v))
}

fn parse_ideal(f: &FieldSpec, m: &[i64]) -> Result<ZLattice2, Failure> {
    let d = f.disc();
    let lat = match m {
        [h11, h12, h22] => ZLattice2::from_hnf_checked(d, *h11, *h12, *h22)?,
        [x1, y1, x2, y2] => ideal_span(&[f.elt(*x1, *y1), f.elt(*x2, *y2)]),
        _ => return invalid("--m takes 3 (HNF) or 4 (two generators) integers"),
    };
    if lat.is_zero() {
        return invalid("--m is the zero ideal");
    }
    Ok(lat)
}

fn mertens(a: &MertensArgs) -> CmdResult {
    let f = make_field(a.field.d)?;
    let m = match &a.m {
        Some(m) => parse_ideal(&f, m)?,
        None => ZLattice2::full(f.disc()),
    };
    let r = mertens_counts(&f, &m, &a.s)?;
    let text = match a.output.format {
        Format::Csv => csv_text(
            &["s", "count", "ratio"],
            r.s_values
                .iter()
                .zip(&r.counts)
                .zip(&r.ratios)
                .map(|((s, n), q)| vec![s.to_string(), n.to_string(), format!("{q:.9}")])
                .collect(),
        ),
        Format::Json => to_json(&json!({
            "schema": SCHEMA,
            "report": serde_json::to_value(&r).expect("serialisable"),
        })),
    };
    emit(a.output.out.as_ref(), &text)
}

fn equidist(a: &EquidistArgs) -> CmdResult {
    let f = make_field(a.field.d)?;
    let [x0, x1, y0, y1, u0, u1] = a.window[..] else {
        return invalid("--window takes six numbers x0,x1,y0,y1,u0,u1");
    };
    if a.grid == 0 {
        return invalid("--grid must be positive");
    }
    let window = Box3::new([u0, x0, y0], [u1, x1, y1])?;
    let boxes = grid_boxes(&window, a.grid);
    let counts = equidist_counts(&f, a.s, &boxes)?;
    let r = EquidistReport::from_counts(&f, a.s, &boxes, counts);
    let text = match a.output.format {
        Format::Csv => csv_text(
            &[
                "re_w_lo", "re_w_hi", "im_w_lo", "im_w_hi", "im_w0_lo", "im_w0_hi", "count",
                "mass", "volume",
            ],
            r.boxes
                .iter()
                .zip(&r.counts)
                .zip(r.masses.iter().zip(&r.volumes))
                .map(|((b, n), (m, v))| {
                    vec![
                        b.lo[1].to_string(),
                        b.hi[1].to_string(),
                        b.lo[2].to_string(),
                        b.hi[2].to_string(),
                        b.lo[0].to_string(),
                        b.hi[0].to_string(),
                        n.to_string(),
                        format!("{m:.9}"),
                        format!("{v:.9}"),
                    ]
                })
                .collect(),
        ),
        Format::Json => to_json(&json!({
            "schema": SCHEMA,
            "report": serde_json::to_value(&r).expect("serialisable"),
        })),
    };
    emit(a.output.out.as_ref(), &text)
}

fn chains(a: &ChainArgs) -> CmdResult {
    let f = make_field(a.field.d)?;
    let gens = match &a.generators {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| Failure::Invalid(format!("{}: {e}", p.display())))?;
            let (d, g) = load_generators(&text)?;
            if d != f.disc() {
                return invalid(format!("generator file is for D = {d}"));
            }
            Some(g)
        }
        None => None,
    };
    let r = chain_count(&f, gens.as_deref(), &a.eps, a.depth)?;
    if let Some(path) = &a.emit_geometry {
        let eps = a.eps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let chains = chain_orbit_vectors(&f, eps, a.depth)?
            .into_iter()
            .map(|v| {
                let p = PolarPoint::new(v)?;
                Ok(serde_json::to_value(export_chain(&p, a.samples)?).expect("serialisable"))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let geom = json!({
            "schema": SCHEMA,
            "disc": f.disc(),
            "eps": eps,
            "samples": a.samples,
            "chains": chains,
        });
        emit(Some(path), &to_json(&geom))?;
    }
    let text = match a.output.format {
        Format::Csv => csv_text(
            &["eps", "count", "saturated", "ratio"],
            r.rows
                .iter()
                .map(|row| {
                    vec![
                        row.eps.to_string(),
                        row.count.to_string(),
                        row.saturated.to_string(),
                        row.ratio.map(|x| format!("{x:.9}")).unwrap_or_default(),
                    ]
                })
                .collect(),
        ),
        Format::Json => to_json(&json!({
            "schema": SCHEMA,
            "report": serde_json::to_value(&r).expect("serialisable"),
        })),
    };
    emit(a.output.out.as_ref(), &text)?;
    if matches!(a.output.format, Format::Csv) {
        eprintln!(
            "slope: {}; caveat: {}",
            r.slope.map_or("n/a".into(), |s| format!("{s:.4}")),
            r.caveat
        );
    }
    Ok(())
}

fn check(name: &str, pass: bool, detail: Value) -> Value {
    json!({"check": name, "pass": pass, "detail": detail})
}

fn verify_integrals() -> Result<Vec<Value>, Failure> {
    let mut out = Vec::new();
    for n in 2..=4 {
        let q = verify_mu_integral(n)?;
        out.push(check(
            &format!("mu_integral_n{n}"),
            q.residual() <= 1e-6,
            json!({"numeric": q.numeric, "closed": q.closed, "exact": mu_integral_exact(n)}),
        ));
    }
    let q = verify_cprime(2)?;
    out.push(check(
        "cprime_2",
        (q.numeric - 4.0 / 3.0).abs() <= 1e-9,
        json!({"numeric": q.numeric, "closed": q.closed}),
    ));
    let j = jacobian_of_f()?;
    out.push(check(
        "jacobian_F",
        (j.det - 0.25).abs() <= 1e-6,
        json!({"det": j.det}),
    ));
    Ok(out)
}

fn verify_metrics(pairs: usize, seed: u64) -> Result<Vec<Value>, Failure> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut pt = || {
        HeisPt::new(
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-5.0..5.0),
        )
    };
    let (mut sandwich, mut left, mut dil) = (true, 0.0f64, 0.0f64);
    for k in 0..pairs {
        let (p, q, g) = (pt(), pt(), pt());
        let (d, d2) = (cygan(&p, &q), cygan_second(&p, &q));
        sandwich &= d / SQRT_2 <= d2 + 1e-12 && d2 <= d + 1e-12;
        left = left.max((cygan(&g.mul(&p), &g.mul(&q)) - d).abs());
        let l = 0.1 + (k % 100) as f64 * 0.1;
        dil = dil.max((cygan(&p.dilate(l)?, &q.dilate(l)?) - l * d).abs());
    }
    Ok(vec![
        check("sandwich", sandwich, json!({"pairs": pairs})),
        check("left_invariance", left < 1e-9, json!({"max_error": left})),
        check("dilation", dil < 1e-9, json!({"max_error": dil})),
    ])
}

fn verify_group(seed: u64) -> Result<Vec<Value>, Failure> {
    let f = make_field(-4)?;
    let gens = default_generators(&f)?;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut members = 0;
    for _ in 0..1_000 {
        let mut m = SUqMat::identity(&f);
        for _ in 0..rng.gen_range(1..=8) {
            m = m.mul(&gens[rng.gen_range(0..gens.len())]);
        }
        members += usize::from(check_membership(m.entries()));
    }
    Ok(vec![
        check(
            "sigma_membership",
            check_membership(sigma(&f).entries()),
            Value::Null,
        ),
        check(
            "generators_membership",
            gens.iter().all(|g| check_membership(g.entries())),
            json!({"count": gens.len()}),
        ),
        check(
            "random_words",
            members == 1_000,
            json!({"members": members, "words": 1_000}),
        ),
    ])
}

fn verify(a: &VerifyArgs) -> CmdResult {
    let none = !(a.integrals || a.metrics || a.group);
    let mut checks = Vec::new();
    if a.all || none || a.integrals {
        checks.extend(verify_integrals()?);
    }
    if a.all || none || a.metrics {
        checks.extend(verify_metrics(a.pairs, a.seed)?);
    }
    if a.all || none || a.group {
        checks.extend(verify_group(a.seed)?);
    }
    let pass = checks.iter().all(|c| c["pass"] == json!(true));
    emit(
        None,
        &to_json(&json!({"schema": SCHEMA, "pass": pass, "checks": checks})),
    )?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Verification("at least one check failed".into()))
    }
}

#[derive(serde::Deserialize)]
struct GammaFile {
    disc: i64,
    matrix: [[[i64; 2]; 3]; 3],
}

fn cubic(a: &CubicArgs) -> CmdResult {
    let f = make_field(a.field.d)?;
    let (gamma, word) = match &a.gamma {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| Failure::Invalid(format!("{}: {e}", p.display())))?;
            let g: GammaFile = serde_json::from_str(&text)
                .map_err(|e| Failure::Invalid(format!("gamma file: {e}")))?;
            if g.disc != f.disc() {
                return invalid(format!("gamma file is for D = {}", g.disc));
            }
            let m = std::array::from_fn(|i| {
                std::array::from_fn(|j| f.elt(g.matrix[i][j][0], g.matrix[i][j][1]))
            });
            (SUqMat::new(m)?, None)
        }
        None => {
            let gens = default_generators(&f)?;
            match find_loxodromic_witness(&f, &gens, 4) {
                Some((w, m)) => (m, Some(w)),
                None => {
                    return invalid("no loxodromic word of length ≤ 4 in the built-in generators")
                }
            }
        }
    };
    let r = cubic_count(&f, &gamma, &a.s, a.depth)?;
    let v = json!({
        "schema": SCHEMA,
        "seed_word": word,
        "report": serde_json::to_value(&r).expect("serialisable"),
    });
    emit(a.out.as_ref(), &to_json(&v))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if n == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool is configured once");
    }
    let res = match &cli.cmd {
        Cmd::FieldInfo(a) => field_info(a),
        Cmd::Mertens(a) => mertens(a),
        Cmd::Equidist(a) => equidist(a),
        Cmd::Chains(a) => chains(a),
        Cmd::Verify(a) => verify(a),
        Cmd::Cubic(a) => cubic(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
