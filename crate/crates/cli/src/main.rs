//! `unitrep`: unit-sum criteria, searches, polytope constants, matrix
//! decompositions, and counting reports from the command line.
//!
//! Every stochastic command takes a --seed (or UNITREP_SEED) and echoes it
//! into its output; identical arguments and seed produce byte-identical
//! output. Exit codes: 0 success, 1 domain error (machine-readable JSON on
//! stdout), 2 usage error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;

use unitrep_core::counting::{
    asymptotic_main_term, compare_report, count_rational_k_sums, count_unit_sum_classes,
    CountingContext, SubsumMode,
};
use unitrep_core::criteria::{
    cubic_embedding_data, cubic_usn, erdos_family, power_basis_units, quadratic_usn,
    widmer_index_check, widmer_sufficient, Basis, CubicFieldData, UnitSumClass,
};
use unitrep_core::error::Error;
use unitrep_core::hurwitz::HurwitzRing;
use unitrep_core::matrix_units::{
    diagonalize, en_eval, mat_eq, mat_mul, two_units_decompose, vamos_witness, EnGen, EnWord,
    RingMatrix, UnitMatrixWitness,
};
use unitrep_core::polytope::{
    c_n2_identity_report, closed_form, klm_pattern, mc_volume, mc_volume_envelope,
    region_closed_form, region_volume_mc, table_report, McEstimate, PolytopeSpec,
};
use unitrep_core::quadratic::QuadraticOrder;
use unitrep_core::ring::{EuclideanRing, Integers, PrimeFieldPolys};
use unitrep_core::unit_sums::{find_distinct_units, find_k_units, SearchOutcome};

const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Parser)]
#[command(name = "unitrep", version, about = "Additive unit representations toolbox")]
struct Cli {
    /// Seed for stochastic commands (also UNITREP_SEED).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Cap worker threads; output is identical regardless.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Unit-sum-number criteria and power bases of units.
    Criteria {
        #[command(subcommand)]
        cmd: CriteriaCmd,
    },
    /// Sums of (distinct) units in quadratic orders.
    Unitsum {
        #[command(subcommand)]
        cmd: UnitsumCmd,
    },
    /// The constants c_{n,s} as polytope volumes.
    Polytope {
        #[command(subcommand)]
        cmd: PolytopeCmd,
    },
    /// Matrix decompositions over Euclidean-division rings.
    Matrix {
        #[command(subcommand)]
        cmd: MatrixCmd,
    },
    /// Counting unit sums against the asymptotic main term.
    Count {
        #[command(subcommand)]
        cmd: CountCmd,
    },
}

#[derive(Subcommand)]
enum CriteriaCmd {
    /// Quadratic field criterion for u(R).
    Quadratic {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Purely cubic field criterion for u(R).
    Cubic {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// One-sided discriminant/regulator test for complex cubic fields.
    Widmer {
        #[arg(long = "abs-disc")]
        abs_disc: i64,
        #[arg(long)]
        regulator: f64,
    },
    /// Certified lattice-index test from embedding data.
    WidmerIndex {
        /// Monic cubic x^3 + a2 x^2 + a1 x + a0 as "a2,a1,a0".
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Unit eta = c0 + c1 a + c2 a^2 as "c0,c1,c2".
        #[arg(long, allow_hyphen_values = true)]
        eta: String,
        #[arg(long = "abs-disc")]
        abs_disc: i64,
        #[arg(long)]
        regulator: f64,
    },
    /// The family X^3 + NX + 1.
    ErdosFamily {
        #[arg(long)]
        n: u64,
    },
    /// Power basis of units for Z[d-th root of m].
    PowerBasis {
        #[arg(long)]
        deg: u32,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
    },
}

#[derive(Subcommand)]
enum UnitsumCmd {
    /// Express an element as a sum of exactly k units.
    Find {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        /// Doubled coordinates "u,v" of (u + v sqrt d)/2.
        #[arg(long, allow_hyphen_values = true)]
        elt: String,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 8)]
        bound: u32,
    },
    /// Express an element as a sum of pairwise distinct units.
    Distinct {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        elt: String,
        #[arg(long, default_value_t = 12)]
        bound: u32,
        #[arg(long = "max-terms", default_value_t = 24)]
        max_terms: u32,
    },
}

#[derive(Subcommand)]
enum PolytopeCmd {
    /// Monte Carlo volume of {g < 1}.
    Volume {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        s: u32,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// For s = 2: sample the tight per-pair triangle envelope.
        #[arg(long)]
        envelope: bool,
    },
    /// Volume of the region V_{K,L,M} (s = 2), optionally one sign case.
    Region {
        #[arg(long)]
        n: u32,
        /// Indices "K,L,M", 1-based.
        #[arg(long)]
        klm: String,
        #[arg(long)]
        case: Option<u8>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
    /// Reproduce the printed c_{n,s} table.
    Table {
        #[arg(long, default_value_t = 10_000_000)]
        samples: u64,
        /// Sample count for the thin (2,4) entry.
        #[arg(long = "samples-deep", default_value_t = 100_000_000)]
        samples_deep: u64,
    },
    /// Assemble c_{n,2} from the region decomposition, exactly and by MC.
    Identity {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RingKind {
    Z,
    #[value(name = "fp[x]", alias = "fpx", alias = "fp")]
    FpX,
    Hurwitz,
}

#[derive(Args)]
struct MatrixInputArgs {
    #[arg(long, value_enum)]
    ring: RingKind,
    /// Prime modulus for fp[x].
    #[arg(long, default_value_t = 2)]
    p: u64,
    /// JSON file: {"entries": [["..", ".."], ...]} of canonical encodings.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Subcommand)]
enum MatrixCmd {
    /// Write a square matrix as a sum of two unit matrices.
    Decompose {
        #[command(flatten)]
        input: MatrixInputArgs,
    },
    /// UAV = D with U, V words in the generators of E_n(R).
    Diagonalize {
        #[command(flatten)]
        input: MatrixInputArgs,
    },
    /// The 2x2 witness over Q(sqrt -d) plus its falsification search.
    Vamos {
        #[arg(long)]
        d: i64,
        #[arg(long, default_value_t = 10)]
        height: i64,
    },
}

#[derive(Subcommand)]
enum CountCmd {
    /// Association classes of n-unit sums with N(alpha) <= x.
    Classes {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        x: String,
        /// Include the canonical class representatives.
        #[arg(long)]
        list: bool,
        /// Treat the full sum as a subsum in the vanishing filter.
        #[arg(long)]
        strict: bool,
    },
    /// N_k(x): rational integers <= x that are sums of at most k units.
    Rational {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        x: String,
    },
    /// Empirical counts against the asymptotic main term.
    Compare {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        x: String,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .ok();
    }
    let seed = cli.seed.unwrap_or_else(|| {
        std::env::var("UNITREP_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(DEFAULT_SEED)
    });

    match dispatch(&cli.cmd, seed) {
        Ok(value) => {
            let rendered = match cli.format {
                Format::Json => serde_json::to_string_pretty(&value).unwrap() + "\n",
                Format::Csv => to_csv(&value),
                Format::Text => to_text(&value),
            };
            match &cli.output {
                Some(path) => std::fs::write(path, rendered).unwrap_or_else(|e| {
                    eprintln!("cannot write {}: {e}", path.display());
                    std::process::exit(1);
                }),
                None => {
                    std::io::stdout().write_all(rendered.as_bytes()).unwrap();
                }
            }
        }
        Err(err) => {
            let body = serde_json::json!({
                "error": { "kind": err.kind(), "message": err.to_string() }
            });
            println!("{}", serde_json::to_string_pretty(&body).unwrap());
            std::process::exit(1);
        }
    }
}

fn verdict_json(class: &UnitSumClass, basis: Basis) -> serde_json::Value {
    serde_json::json!({
        "verdict": class.tag.as_str(),
        "witness": class.witness,
        "basis": match basis { Basis::Theorem => "theorem", Basis::Conjecture => "conjecture" },
    })
}

fn parse_i64_list(s: &str, expect: usize, what: &str) -> Result<Vec<i64>, Error> {
    let parts: Result<Vec<i64>, _> = s.split(',').map(|t| t.trim().parse::<i64>()).collect();
    match parts {
        Ok(v) if v.len() == expect => Ok(v),
        _ => Err(Error::Parse(format!(
            "{what} must be {expect} comma-separated integers, got {s:?}"
        ))),
    }
}

fn parse_x(s: &str) -> Result<u128, Error> {
    if let Ok(v) = s.parse::<u128>() {
        return Ok(v);
    }
    let f: f64 = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad x: {s:?}")))?;
    if !f.is_finite() || f < 1.0 || f > 1e30 {
        return Err(Error::Parse(format!("x out of range: {s:?}")));
    }
    Ok(f.round() as u128)
}

fn dispatch(cmd: &Cmd, seed: u64) -> Result<serde_json::Value, Error> {
    match cmd {
        Cmd::Criteria { cmd } => criteria(cmd),
        Cmd::Unitsum { cmd } => unitsum(cmd),
        Cmd::Polytope { cmd } => polytope(cmd, seed),
        Cmd::Matrix { cmd } => matrix(cmd),
        Cmd::Count { cmd } => count(cmd),
    }
}

fn criteria(cmd: &CriteriaCmd) -> Result<serde_json::Value, Error> {
    match cmd {
        CriteriaCmd::Quadratic { d } => {
            let class = quadratic_usn(*d)?;
            Ok(verdict_json(&class, Basis::Theorem))
        }
        CriteriaCmd::Cubic { d } => {
            let class = cubic_usn(*d)?;
            Ok(verdict_json(&class, Basis::Theorem))
        }
        CriteriaCmd::Widmer {
            abs_disc,
            regulator,
        } => {
            let data = CubicFieldData::new(*abs_disc, *regulator)?;
            let class = widmer_sufficient(&data)?;
            Ok(verdict_json(&class, Basis::Theorem))
        }
        CriteriaCmd::WidmerIndex {
            poly,
            eta,
            abs_disc,
            regulator,
        } => {
            let p = parse_i64_list(poly, 3, "--poly")?;
            let e = parse_i64_list(eta, 3, "--eta")?;
            let data = cubic_embedding_data(
                [p[0], p[1], p[2]],
                [e[0], e[1], e[2]],
                *abs_disc,
                *regulator,
            )?;
            let chk = widmer_index_check(&data)?;
            let mut v = verdict_json(&chk.class, Basis::Theorem);
            v["index"] = serde_json::json!(chk.index);
            Ok(v)
        }
        CriteriaCmd::ErdosFamily { n } => {
            let member = erdos_family(*n)?;
            let verdict = if member.admissible {
                Some(widmer_sufficient(&member.data)?)
            } else {
                None
            };
            Ok(serde_json::json!({
                "n": member.n,
                "admissible": member.admissible,
                "abs_disc": member.data.abs_disc.to_string(),
                "regulator_upper": member.data.regulator_upper,
                "real_root": member.root.to_decimal(19),
                "verdict": verdict.as_ref().map(|c| c.tag.as_str()),
                "witness": verdict.and_then(|c| c.witness),
            }))
        }
        CriteriaCmd::PowerBasis { deg, m } => {
            let v = power_basis_units(*deg, *m)?;
            Ok(serde_json::json!({
                "has_power_basis": v.has_power_basis,
                "basis": match v.basis { Basis::Theorem => "theorem", Basis::Conjecture => "conjecture" },
                "witness": v.witness,
            }))
        }
    }
}

fn parse_elt(order: &QuadraticOrder, s: &str) -> Result<unitrep_core::quadratic::QuadraticElt, Error> {
    let parts = parse_i64_list(s, 2, "--elt")?;
    order.elt(parts[0], parts[1])
}

fn unitsum(cmd: &UnitsumCmd) -> Result<serde_json::Value, Error> {
    let outcome_json = |out: SearchOutcome| match out {
        SearchOutcome::Found(rep) => serde_json::json!({
            "found": true,
            "target": rep.target,
            "terms": rep.terms,
            "distinct": rep.distinct,
        }),
        SearchOutcome::Absent {
            exp_bound,
            certified,
        } => serde_json::json!({
            "found": false,
            "exp_bound": exp_bound,
            "certified": certified,
        }),
    };
    match cmd {
        UnitsumCmd::Find { d, elt, k, bound } => {
            let order = QuadraticOrder::new(*d)?;
            let alpha = parse_elt(&order, elt)?;
            Ok(outcome_json(find_k_units(&order, &alpha, *k, *bound)?))
        }
        UnitsumCmd::Distinct {
            d,
            elt,
            bound,
            max_terms,
        } => {
            let order = QuadraticOrder::new(*d)?;
            let alpha = parse_elt(&order, elt)?;
            Ok(outcome_json(find_distinct_units(
                &order, &alpha, *bound, *max_terms,
            )?))
        }
    }
}

fn estimate_json(est: &McEstimate, expected: Option<f64>) -> serde_json::Value {
    let mut v = serde_json::to_value(est).unwrap();
    if let Some(e) = expected {
        v["expected"] = serde_json::json!(e);
        v["z_score"] = serde_json::json!(est.z_score(e));
    }
    if est.hit_rate() < 1e-5 {
        v["warning"] = serde_json::json!(format!(
            "hit rate {:.2e} is low; ~{} samples would give 2% relative error",
            est.hit_rate(),
            est.suggested_samples_for_two_percent()
        ));
    }
    v
}

fn polytope(cmd: &PolytopeCmd, seed: u64) -> Result<serde_json::Value, Error> {
    match cmd {
        PolytopeCmd::Volume {
            n,
            s,
            samples,
            envelope,
        } => {
            use num::ToPrimitive;
            let expected = closed_form(*n, *s).and_then(|q| q.to_f64());
            let est = if *envelope {
                if *s != 2 {
                    return Err(Error::Invalid("--envelope requires s = 2".into()));
                }
                mc_volume_envelope(*n, *samples, seed)?
            } else {
                mc_volume(&PolytopeSpec::new(*n, *s)?, *samples, seed)?
            };
            Ok(estimate_json(&est, expected))
        }
        PolytopeCmd::Region {
            n,
            klm,
            case,
            samples,
        } => {
            use num::ToPrimitive;
            let idx = parse_i64_list(klm, 3, "--klm")?;
            let (k, l, m) = (idx[0] as u32, idx[1] as u32, idx[2] as u32);
            let expected = region_closed_form(*n, klm_pattern(k, l, m), *case)
                .ok()
                .and_then(|q| q.to_f64());
            let est = region_volume_mc(*n, k, l, m, *case, *samples, seed)?;
            Ok(estimate_json(&est, expected))
        }
        PolytopeCmd::Table {
            samples,
            samples_deep,
        } => {
            let report = table_report(*samples, *samples_deep, seed)?;
            Ok(serde_json::to_value(report).unwrap())
        }
        PolytopeCmd::Identity { n, samples } => {
            let report = c_n2_identity_report(*n, *samples, seed)?;
            Ok(serde_json::to_value(report).unwrap())
        }
    }
}

fn word_json<R: EuclideanRing>(ring: &R, word: &EnWord<R::Elem>) -> serde_json::Value {
    let gens: Vec<serde_json::Value> = word
        .iter()
        .map(|g| match g {
            EnGen::Elem { a, row, col } => serde_json::json!({
                "elem": { "a": ring.encode(a), "row": row, "col": col }
            }),
            EnGen::Perm(s) => serde_json::json!({ "perm": s }),
            EnGen::NegId => serde_json::json!("negid"),
        })
        .collect();
    serde_json::json!(gens)
}

fn matrix_json<R: EuclideanRing>(ring: &R, m: &RingMatrix<R::Elem>) -> serde_json::Value {
    let rows: Vec<Vec<String>> = (0..m.rows)
        .map(|i| (0..m.cols).map(|j| ring.encode(m.at(i, j))).collect())
        .collect();
    serde_json::json!(rows)
}

fn read_matrix<R: EuclideanRing>(ring: &R, path: &PathBuf) -> Result<RingMatrix<R::Elem>, Error> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let v: serde_json::Value =
        serde_json::from_str(&raw).map_err(|e| Error::Parse(format!("bad matrix JSON: {e}")))?;
    let entries = v
        .get("entries")
        .and_then(|e| e.as_array())
        .ok_or_else(|| Error::Parse("matrix JSON needs an \"entries\" array".into()))?;
    let mut rows = Vec::new();
    for row in entries {
        let cells = row
            .as_array()
            .ok_or_else(|| Error::Parse("entries must be an array of arrays".into()))?;
        let mut out = Vec::new();
        for c in cells {
            let s = c
                .as_str()
                .ok_or_else(|| Error::Parse("entries must be encoded as strings".into()))?;
            out.push(ring.decode(s)?);
        }
        rows.push(out);
    }
    RingMatrix::from_rows(rows)
}

fn matrix_with_ring<R: EuclideanRing>(
    ring: &R,
    cmd: &MatrixCmd,
    path: &PathBuf,
) -> Result<serde_json::Value, Error> {
    match cmd {
        MatrixCmd::Decompose { .. } => {
            let a = read_matrix(ring, path)?;
            let decomp = two_units_decompose(ring, &a)?;
            let verified = decomp.verify(ring)?;
            let [m1, m2] = decomp.summand_matrices(ring)?;
            let words: Vec<serde_json::Value> = decomp
                .summands
                .iter()
                .map(|w| match w {
                    UnitMatrixWitness::Word(word) => word_json(ring, word),
                    UnitMatrixWitness::Explicit { .. } => serde_json::json!("explicit"),
                })
                .collect();
            Ok(serde_json::json!({
                "target": matrix_json(ring, &a),
                "summand_words": words,
                "summand_matrices": [matrix_json(ring, &m1), matrix_json(ring, &m2)],
                "verified": verified,
            }))
        }
        MatrixCmd::Diagonalize { .. } => {
            let a = read_matrix(ring, path)?;
            let (u, v, d) = diagonalize(ring, &a)?;
            let um = en_eval(ring, &u, a.rows)?;
            let vm = en_eval(ring, &v, a.rows)?;
            let verified = mat_eq(ring, &mat_mul(ring, &mat_mul(ring, &um, &a), &vm), &d);
            Ok(serde_json::json!({
                "u_word": word_json(ring, &u),
                "v_word": word_json(ring, &v),
                "diagonal": matrix_json(ring, &d),
                "verified": verified,
            }))
        }
        MatrixCmd::Vamos { .. } => unreachable!(),
    }
}

fn matrix(cmd: &MatrixCmd) -> Result<serde_json::Value, Error> {
    match cmd {
        MatrixCmd::Decompose { input } | MatrixCmd::Diagonalize { input } => {
            match input.ring {
                RingKind::Z => matrix_with_ring(&Integers, cmd, &input.input),
                RingKind::FpX => {
                    matrix_with_ring(&PrimeFieldPolys::new(input.p)?, cmd, &input.input)
                }
                RingKind::Hurwitz => matrix_with_ring(&HurwitzRing, cmd, &input.input),
            }
        }
        MatrixCmd::Vamos { d, height } => {
            let w = vamos_witness(*d, *height)?;
            let mut v = serde_json::to_value(&w).unwrap();
            v["matrix"] = serde_json::json!([
                [w.generators.0.to_string(), "0"],
                [w.generators.1.to_string(), "0"],
            ]);
            Ok(v)
        }
    }
}

fn count(cmd: &CountCmd) -> Result<serde_json::Value, Error> {
    match cmd {
        CountCmd::Classes { d, n, x, list, strict } => {
            let ctx = CountingContext::new(QuadraticOrder::new(*d)?)?;
            let x = parse_x(x)?;
            let mode = if *strict {
                SubsumMode::IncludeFull
            } else {
                SubsumMode::ProperOnly
            };
            let (count, classes) = count_unit_sum_classes(&ctx, *n, x, mode)?;
            let mut v = serde_json::json!({
                "d": d, "n": n, "x": x.to_string(), "count": count,
            });
            if *n >= 2 {
                let main = asymptotic_main_term(&ctx, *n, x as f64)?;
                v["main_term"] = serde_json::json!(main);
                if main > 0.0 {
                    v["ratio"] = serde_json::json!(count as f64 / main);
                }
            }
            if *list {
                v["classes"] = serde_json::to_value(&classes).unwrap();
            }
            Ok(v)
        }
        CountCmd::Rational { d, k, x } => {
            let ctx = CountingContext::new(QuadraticOrder::new(*d)?)?;
            let x = parse_x(x)?;
            let count = count_rational_k_sums(&ctx, *k, x)?;
            Ok(serde_json::json!({
                "d": d, "k": k, "x": x.to_string(), "count": count,
                "density": count as f64 / x as f64,
            }))
        }
        CountCmd::Compare { d, n, x } => {
            let ctx = CountingContext::new(QuadraticOrder::new(*d)?)?;
            let x = parse_x(x)?;
            let rows = compare_report(&ctx, *n, x)?;
            Ok(serde_json::json!({
                "d": d, "n": n,
                "rows": serde_json::to_value(&rows).unwrap(),
            }))
        }
    }
}

/// CSV rendering: a top-level "rows" array becomes a real table, anything
/// else flattens to key,value lines. Deterministic field order.
fn to_csv(v: &serde_json::Value) -> String {
    fn scalar(v: &serde_json::Value) -> String {
        match v {
            serde_json::Value::String(s) => {
                if s.contains(',') || s.contains('"') {
                    format!("\"{}\"", s.replace('"', "\"\""))
                } else {
                    s.clone()
                }
            }
            other => other.to_string(),
        }
    }
    if let Some(rows) = v.get("rows").and_then(|r| r.as_array()) {
        if let Some(first) = rows.first().and_then(|r| r.as_object()) {
            let headers: Vec<String> = first.keys().cloned().collect();
            let mut out = headers.join(",") + "\n";
            for row in rows {
                let obj = row.as_object().unwrap();
                let line: Vec<String> = headers
                    .iter()
                    .map(|h| obj.get(h).map(scalar).unwrap_or_default())
                    .collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
            return out;
        }
    }
    let mut out = String::from("key,value\n");
    if let Some(obj) = v.as_object() {
        for (k, val) in obj {
            out.push_str(&format!("{k},{}\n", scalar(val)));
        }
    } else {
        out.push_str(&format!("value,{}\n", scalar(v)));
    }
    out
}

fn to_text(v: &serde_json::Value) -> String {
    fn write_value(out: &mut String, v: &serde_json::Value, indent: usize) {
        let pad = "  ".repeat(indent);
        match v {
            serde_json::Value::Object(obj) => {
                for (k, val) in obj {
                    match val {
                        serde_json::Value::Object(_) | serde_json::Value::Array(_) => {
                            out.push_str(&format!("{pad}{k}:\n"));
                            write_value(out, val, indent + 1);
                        }
                        _ => out.push_str(&format!("{pad}{k}: {val}\n")),
                    }
                }
            }
            serde_json::Value::Array(arr) => {
                for item in arr {
                    match item {
                        serde_json::Value::Object(_) | serde_json::Value::Array(_) => {
                            out.push_str(&format!("{pad}-\n"));
                            write_value(out, item, indent + 1);
                        }
                        _ => out.push_str(&format!("{pad}- {item}\n")),
                    }
                }
            }
            other => out.push_str(&format!("{pad}{other}\n")),
        }
    }
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out
}
