//! Command-line interface: model-file driven checks and constructions for
//! rational matrix functions and de Branges matrices.

mod report;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use debmat::classes::{
    in_caratheodory, in_hardy2, in_hardy2_perp, in_inner, in_pj, in_schur, in_smirnov,
    in_uj_script, make_signature, pg_transform, uj_identity, SignatureSpec,
};
use debmat::debranges::{
    assoc_check, char_fn, db_check, db_decompose, gram_psd, inner_product, lemma51_check,
    pair_validate, space_membership, DbMatrix, DeBrangesPair,
};
use debmat::error::Error as CoreError;
use debmat::factorization::{cofactorize, factorize, residue_norm, FactorMode};
use debmat::generate::gen_k0;
use debmat::grid::GridSpec;
use debmat::localstruct::{chain_length_multiset, local_smith, ChainKind};
use debmat::model::{decode_matrix, encode_matrix, Mode, ModelCoeff, ModelFile, ObjectRepr};
use debmat::parametrize::{
    extract_pq, herglotz_rational, phi_of, realpart_identities, sharp_inverse_identity,
    uniqueness_check, verify_pg_blocks,
};
use debmat::parametrize::construct_db;
use debmat::ratmat::coeff::{C64, Q};
use debmat::ratmat::RatMat;
use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use report::Report;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "debmat", version, about = "rational matrix functions and de Branges matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Tolerance for sampled positivity and float identities.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Sample grid override, format "X0:X1:NX/Y1,Y2,...".
    #[arg(long, global = true)]
    grid: Option<String>,

    /// Coefficient mode; defaults to exact except for the numeric
    /// factorization commands, capped by the file mode.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,

    /// Seed for randomized commands.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,

    /// Include wall-clock timing in the report (off by default so identical
    /// runs produce byte-identical structured reports).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Membership of an object in the classical function classes.
    Classify {
        file: PathBuf,
        #[arg(long)]
        object: String,
        /// Treat the matrix as 2n x 2n and add the J-based tests.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Potapov-Ginzburg transform with involution check.
    Pg {
        file: PathBuf,
        #[arg(long)]
        object: String,
        #[arg(long)]
        n: usize,
    },
    /// Entire-factor extraction for one matrix function.
    Factor {
        file: PathBuf,
        #[arg(long)]
        object: String,
        #[arg(long)]
        with_exp: bool,
    },
    /// Simultaneous factorization with one common entire factor.
    Cofactor {
        file: PathBuf,
        /// Comma-separated object names.
        #[arg(long, value_delimiter = ',')]
        objects: Vec<String>,
        #[arg(long)]
        with_exp: bool,
    },
    /// Local pole/zero structure at a point.
    Local {
        file: PathBuf,
        #[arg(long)]
        object: String,
        /// Point "re,im".
        #[arg(long)]
        point: String,
    },
    /// Certify a de Branges matrix.
    DbCheck {
        file: PathBuf,
        #[arg(long)]
        object: String,
        #[arg(long)]
        n: usize,
    },
    /// Decompose into (S, entire blocks, pair).
    DbDecompose {
        file: PathBuf,
        #[arg(long)]
        object: String,
        #[arg(long)]
        n: usize,
    },
    /// Construct the de Branges matrix of (pair, S, P, Q).
    DbConstruct {
        file: PathBuf,
        #[arg(long)]
        pair: String,
        #[arg(long)]
        assoc: String,
        /// Object name, or the literal 0.
        #[arg(long, default_value = "0")]
        p: String,
        /// Object name, or the literal 0.
        #[arg(long, default_value = "0")]
        q: String,
    },
    /// Reproducing kernel value K_w(z).
    Kernel {
        file: PathBuf,
        #[arg(long)]
        pair: String,
        #[arg(long)]
        w: String,
        #[arg(long)]
        z: String,
    },
    /// Positive semidefiniteness of a random kernel Gram matrix.
    Gram {
        file: PathBuf,
        #[arg(long)]
        pair: String,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Inner product of two space elements.
    InnerProduct {
        file: PathBuf,
        #[arg(long)]
        pair: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Associated-function conditions.
    AssocCheck {
        file: PathBuf,
        #[arg(long)]
        pair: String,
        #[arg(long)]
        s: String,
    },
    /// Generate a certified characteristic matrix function.
    Charfn {
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Full identity suite for a de Branges matrix.
    Verify {
        file: PathBuf,
        #[arg(long)]
        object: String,
        #[arg(long)]
        n: usize,
    },
    /// Uniqueness relation between two de Branges matrices.
    Uniq {
        file: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        n: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = std::time::Instant::now();
    match run(&cli) {
        Ok(mut report) => {
            if let Some(seed) = cli.common.seed {
                report.seed = Some(seed);
            }
            if cli.common.timing {
                report.timing_ms = Some(started.elapsed().as_millis() as u64);
            }
            let rendered = match cli.common.format {
                FormatArg::Json => report.to_json(),
                FormatArg::Text => report.to_text(),
            };
            match &cli.common.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, rendered) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{rendered}"),
            }
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn command_default_mode(cmd: &Command) -> Mode {
    match cmd {
        Command::Factor { .. }
        | Command::Cofactor { .. }
        | Command::Local { .. }
        | Command::DbDecompose { .. } => Mode::Float,
        _ => Mode::Exact,
    }
}

fn resolve_mode(
    file_mode: Option<Mode>,
    cmd: &Command,
    flag: Option<ModeArg>,
) -> anyhow::Result<Mode> {
    let requested = match flag {
        Some(ModeArg::Exact) => Mode::Exact,
        Some(ModeArg::Float) => Mode::Float,
        None => match file_mode {
            Some(Mode::Float) => Mode::Float,
            _ => command_default_mode(cmd),
        },
    };
    if requested == Mode::Exact && file_mode == Some(Mode::Float) {
        bail!("float-mode model files cannot be promoted to exact mode (conversion is one-way)");
    }
    Ok(requested)
}

fn load(path: &PathBuf) -> anyhow::Result<ModelFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    Ok(ModelFile::parse_str(&text)?)
}

fn get_matrix<C: ModelCoeff>(mf: &ModelFile, name: &str) -> anyhow::Result<RatMat<C>> {
    match mf.object(name)? {
        ObjectRepr::RationalMatrix { matrix } => Ok(decode_matrix(matrix)?),
        ObjectRepr::DbMatrix { a, .. } => Ok(decode_matrix(a)?),
        _ => bail!("object '{name}' is not a matrix"),
    }
}

fn get_pair<C: ModelCoeff>(
    mf: &ModelFile,
    name: &str,
    tol: f64,
) -> anyhow::Result<DeBrangesPair<C>> {
    match mf.object(name)? {
        ObjectRepr::Pair { e_minus, e_plus } => {
            let em = decode_matrix(e_minus)?;
            let ep = decode_matrix(e_plus)?;
            Ok(DeBrangesPair::new(em, ep, tol)?)
        }
        _ => bail!("object '{name}' is not a pair"),
    }
}

fn get_matrix_or_zero<C: ModelCoeff>(
    mf: &ModelFile,
    name: &str,
    n: usize,
) -> anyhow::Result<RatMat<C>> {
    if name == "0" {
        Ok(RatMat::zeros(n, n))
    } else {
        get_matrix(mf, name)
    }
}

fn parse_point(s: &str) -> anyhow::Result<Complex64> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| anyhow!("point '{s}': expected \"re,im\""))?;
    Ok(Complex64::new(
        re.trim().parse().context("bad real part")?,
        im.trim().parse().context("bad imaginary part")?,
    ))
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let tol = cli.common.tol;
    match &cli.command {
        Command::Charfn { dim, n } => {
            let seed = cli.common.seed.unwrap_or(0);
            let mut report = Report::new(
                format!("charfn --seed {seed} --dim {dim} --n {n}"),
                "exact",
                tol,
            );
            let spec = make_signature::<Q>(*n);
            let op = gen_k0(seed, *dim, *n)?;
            let (w, op) = char_fn(&op.t, Some(&op.u), &spec, tol)?;
            let (verdict, _) = db_check(&w, &spec, tol)?;
            report.push_verdict("de Branges certification", verdict);
            let rep = lemma51_check(&w, &spec, tol)?;
            for (k, item) in rep.items.iter().enumerate() {
                report.push_verdict(format!("structural property ({})", k + 1), item.clone());
            }
            report.outputs.insert(
                "w".to_string(),
                ObjectRepr::DbMatrix { n: *n, a: encode_matrix(&w) },
            );
            report.outputs.insert(
                "k0".to_string(),
                ObjectRepr::K0Operator {
                    n: *n,
                    t: encode_matrix(&op.t),
                    u: encode_matrix(&op.u),
                },
            );
            Ok(report)
        }
        cmd => {
            let path = command_file(cmd).expect("file-based command");
            let mf = load(path)?;
            let mode = resolve_mode(Some(mf.mode), cmd, cli.common.mode)?;
            match mode {
                Mode::Exact => run_typed::<Q>(cli, cmd, &mf, tol, "exact"),
                Mode::Float => run_typed::<C64>(cli, cmd, &mf, tol, "float"),
            }
        }
    }
}

fn command_file(cmd: &Command) -> Option<&PathBuf> {
    match cmd {
        Command::Classify { file, .. }
        | Command::Pg { file, .. }
        | Command::Factor { file, .. }
        | Command::Cofactor { file, .. }
        | Command::Local { file, .. }
        | Command::DbCheck { file, .. }
        | Command::DbDecompose { file, .. }
        | Command::DbConstruct { file, .. }
        | Command::Kernel { file, .. }
        | Command::Gram { file, .. }
        | Command::InnerProduct { file, .. }
        | Command::AssocCheck { file, .. }
        | Command::Verify { file, .. }
        | Command::Uniq { file, .. } => Some(file),
        Command::Charfn { .. } => None,
    }
}

fn run_typed<C: ModelCoeff>(
    cli: &Cli,
    cmd: &Command,
    mf: &ModelFile,
    tol: f64,
    mode_name: &str,
) -> anyhow::Result<Report> {
    let grid = match &cli.common.grid {
        Some(s) => GridSpec::parse(s)?,
        None => GridSpec::upper_standard(),
    };
    match cmd {
        Command::Classify { object, n, .. } => {
            // classifications are findings, not failures: the command
            // succeeds whenever it completes, and each class reports
            // member / not a member
            let m = get_matrix::<C>(mf, object)?;
            let mut report = Report::new(format!("classify {object}"), mode_name, tol);
            report.push_classification("H2", in_hardy2(&m));
            report.push_classification("H2 complement", in_hardy2_perp(&m));
            report.push_classification("Smirnov", in_smirnov(&m));
            if m.is_square() {
                report.push_classification("inner", in_inner(&m, tol));
                let (cara, _) = in_caratheodory(&m, tol);
                report.push_classification("Caratheodory", cara);
                report.push_classification("Schur", in_schur(&m, &grid, tol));
            }
            if let Some(n) = n {
                if m.rows() == 2 * n {
                    let spec = make_signature::<C>(*n);
                    report.push_classification("J-contractive", in_pj(&m, &spec.j_script, tol));
                    report.push_classification("J-inner", in_uj_script(&m, &spec, tol)?);
                }
            }
            Ok(report)
        }
        Command::Pg { object, n, .. } => {
            let m = get_matrix::<C>(mf, object)?;
            let spec = make_signature::<C>(*n);
            let mut report = Report::new(format!("pg {object}"), mode_name, tol);
            let pg = pg_transform(&m, &spec.j_script)?;
            let back = pg_transform(&pg, &spec.j_script)?;
            report.push_check(
                "involution",
                back.equals(&m, tol),
                "PG applied twice returns the input",
            );
            report.push_verdict("transform is inner", in_inner(&pg, tol));
            report.outputs.insert(
                "pg".to_string(),
                ObjectRepr::RationalMatrix { matrix: encode_matrix(&pg) },
            );
            Ok(report)
        }
        Command::Factor { object, with_exp, .. } => {
            let m = get_matrix::<C>(mf, object)?.to_float();
            let fmode = if *with_exp { FactorMode::WithExp } else { FactorMode::Plain };
            let mut report = Report::new(format!("factor {object}"), mode_name, tol);
            let original_poles = m.poles();
            let form = factorize(&m, fmode)?;
            for f in &form.product.factors {
                report.push_info(
                    format!("factor at {}", f.point),
                    format!("order {}, rank {}", f.order, f.projection.rank(1e-9)),
                );
            }
            let entire = form.entire_part()?;
            report.push_check(
                "entire part has no poles",
                entire.poles().is_empty(),
                format!("{} factors", form.product.factors.len()),
            );
            for (p, _) in &original_poles.poles {
                let rn = residue_norm(&entire, *p)?;
                report.push_check(format!("integrated residue at {p}"), rn < 1e-8, format!("{rn:e}"));
            }
            for st in &form.steps {
                let expect: Vec<u64> = st
                    .mults_before
                    .iter()
                    .map(|k| k - 1)
                    .filter(|k| *k > 0)
                    .collect();
                report.push_check(
                    format!("multiplicity law at {}", st.point),
                    st.mults_after == expect,
                    format!("{:?} -> {:?}", st.mults_before, st.mults_after),
                );
            }
            report.outputs.insert(
                "entire".to_string(),
                ObjectRepr::RationalMatrix { matrix: encode_matrix(&entire) },
            );
            Ok(report)
        }
        Command::Cofactor { objects, with_exp, .. } => {
            if objects.is_empty() {
                bail!("cofactor needs at least one object");
            }
            let mats: Vec<RatMat<Complex64>> = objects
                .iter()
                .map(|name| Ok(get_matrix::<C>(mf, name)?.to_float()))
                .collect::<anyhow::Result<_>>()?;
            let fmode = if *with_exp { FactorMode::WithExp } else { FactorMode::Plain };
            let mut report =
                Report::new(format!("cofactor {}", objects.join(",")), mode_name, tol);
            let (product, outs) = cofactorize(&mats, fmode)?;
            report.push_info("common factor", format!("{} steps", product.factors.len()));
            for (name, out) in objects.iter().zip(outs.iter()) {
                report.push_check(
                    format!("P * {name} entire"),
                    out.poles().is_empty(),
                    "pole list empty",
                );
            }
            let n = mats[0].rows();
            report.outputs.insert(
                "common_factor".to_string(),
                ObjectRepr::RationalMatrix {
                    matrix: encode_matrix(&product.rational_part(n)),
                },
            );
            Ok(report)
        }
        Command::Local { object, point, .. } => {
            let m = get_matrix::<C>(mf, object)?.to_float();
            let z0 = parse_point(point)?;
            let mut report = Report::new(format!("local {object} at {z0}"), mode_name, tol);
            let data = local_smith(&m, z0)?;
            report.push_info("partial multiplicities", format!("{:?}", data.partial_mults));
            report.push_info("pole span dimension", format!("{}", data.pole_basis.len()));
            report.push_info("zero span dimension", format!("{}", data.zero_basis.len()));
            if !data.pole_basis.is_empty() {
                let lengths = chain_length_multiset(&m, z0, ChainKind::Pole)?;
                let mut expect: Vec<usize> =
                    data.pole_mults().iter().map(|m| *m as usize).collect();
                expect.sort_unstable();
                report.push_check(
                    "pole chain lengths realize the multiplicities",
                    lengths == expect,
                    format!("{lengths:?}"),
                );
            }
            Ok(report)
        }
        Command::DbCheck { object, n, .. } => {
            let m = get_matrix::<C>(mf, object)?;
            let spec = make_signature::<C>(*n);
            let mut report = Report::new(format!("db-check {object}"), mode_name, tol);
            let (verdict, _) = db_check(&m, &spec, tol)?;
            report.push_verdict("de Branges matrix", verdict);
            Ok(report)
        }
        Command::DbDecompose { object, n, .. } => {
            let m = get_matrix::<C>(mf, object)?;
            let spec = make_signature::<C>(*n);
            let mut report = Report::new(format!("db-decompose {object}"), mode_name, tol);
            let (verdict, dbm) = db_check(&m, &spec, tol)?;
            report.push_verdict("certification", verdict);
            let dbm: DbMatrix<C> =
                dbm.ok_or_else(|| anyhow!("input is not a de Branges matrix"))?;
            let dec = db_decompose(&dbm, &spec, tol)?;
            report.push_verdict(
                "pair validation",
                pair_validate(&dec.pair.e_minus, &dec.pair.e_plus, tol.max(1e-8)),
            );
            report.push_verdict("factor associated", assoc_check(&dec.pair, &dec.s)?);
            report.outputs.insert(
                "s".to_string(),
                ObjectRepr::RationalMatrix { matrix: encode_matrix(&dec.s) },
            );
            report.outputs.insert(
                "pair".to_string(),
                ObjectRepr::Pair {
                    e_minus: encode_matrix(&dec.pair.e_minus),
                    e_plus: encode_matrix(&dec.pair.e_plus),
                },
            );
            Ok(report)
        }
        Command::DbConstruct { pair, assoc, p, q, .. } => {
            let pr = get_pair::<C>(mf, pair, tol)?;
            let n = pr.dim();
            let s = get_matrix::<C>(mf, assoc)?;
            let pm = get_matrix_or_zero::<C>(mf, p, n)?;
            let qm = get_matrix_or_zero::<C>(mf, q, n)?;
            let spec = make_signature::<C>(n);
            let mut report = Report::new(
                format!("db-construct --pair {pair} --assoc {assoc} --p {p} --q {q}"),
                mode_name,
                tol,
            );
            let (a, _dbm) = construct_db(&pr, &s, &pm, &qm, &spec, tol)?;
            report.push_check("construction certified", true, "J-inner and de Branges");
            let phi = phi_of(&a, n, if C::EXACT { 0.0 } else { tol })?;
            report
                .outputs
                .insert("a".to_string(), ObjectRepr::DbMatrix { n, a: encode_matrix(&a) });
            report.outputs.insert(
                "phi".to_string(),
                ObjectRepr::RationalMatrix { matrix: encode_matrix(&phi) },
            );
            Ok(report)
        }
        Command::Kernel { pair, w, z, .. } => {
            let pr = get_pair::<C>(mf, pair, tol)?;
            let wv = parse_point(w)?;
            let zv = parse_point(z)?;
            let mut report = Report::new(format!("kernel {pair}"), mode_name, tol);
            let k = pr.kernel(wv, zv)?;
            report.push_info("K_w(z)", format!("{k}"));
            report.outputs.insert(
                "kernel".to_string(),
                ObjectRepr::RationalMatrix {
                    matrix: encode_matrix(&RatMat::<C64>::constant_from_c64(&k)),
                },
            );
            Ok(report)
        }
        Command::Gram { pair, count, .. } => {
            let pr = get_pair::<C>(mf, pair, tol)?;
            let seed = cli.common.seed.unwrap_or(0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = pr.dim();
            let points: Vec<Complex64> = (0..*count)
                .map(|_| Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(0.2..2.0)))
                .collect();
            let vectors: Vec<DVector<Complex64>> = (0..*count)
                .map(|_| {
                    DVector::from_iterator(
                        n,
                        (0..n).map(|_| {
                            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                        }),
                    )
                })
                .collect();
            let mut report = Report::new(format!("gram {pair} count {count}"), mode_name, tol);
            let (verdict, _) = gram_psd(&pr, &points, &vectors, tol);
            report.push_verdict("Gram matrix PSD", verdict);
            Ok(report)
        }
        Command::InnerProduct { pair, f, g, .. } => {
            let pr = get_pair::<C>(mf, pair, tol)?;
            let fv = get_matrix::<C>(mf, f)?;
            let gv = get_matrix::<C>(mf, g)?;
            let mut report =
                Report::new(format!("inner-product {pair} <{f}, {g}>"), mode_name, tol);
            report.push_verdict("f in the space", space_membership(&pr, &fv)?);
            report.push_verdict("g in the space", space_membership(&pr, &gv)?);
            let ip = inner_product(&pr, &fv, &gv)?;
            report.push_info("inner product", format!("{}{:+}i", ip.re, ip.im));
            Ok(report)
        }
        Command::AssocCheck { pair, s, .. } => {
            let pr = get_pair::<C>(mf, pair, tol)?;
            let sv = get_matrix::<C>(mf, s)?;
            let mut report = Report::new(format!("assoc-check {pair} {s}"), mode_name, tol);
            report.push_verdict("associated", assoc_check(&pr, &sv)?);
            Ok(report)
        }
        Command::Verify { object, n, .. } => {
            let m = get_matrix::<C>(mf, object)?;
            let spec = make_signature::<C>(*n);
            let mut report = Report::new(format!("verify {object}"), mode_name, tol);
            verify_suite(&m, &spec, tol, &mut report)?;
            Ok(report)
        }
        Command::Uniq { a, b, n, .. } => {
            let av = get_matrix::<C>(mf, a)?;
            let bv = get_matrix::<C>(mf, b)?;
            let mut report = Report::new(format!("uniq {a} {b}"), mode_name, tol);
            let l = uniqueness_check(&av, &bv, *n, tol)?;
            report.push_check("lower-triangular relation", true, "B = [[I,0],[L,I]] A");
            report.outputs.insert(
                "l".to_string(),
                ObjectRepr::RationalMatrix { matrix: encode_matrix(&l) },
            );
            Ok(report)
        }
        Command::Charfn { .. } => unreachable!("handled in run"),
    }
}

/// The full identity suite: certification, sharp/inverse structure, the
/// decomposition, the real/imaginary part identities with the measure
/// ordering, the rotated-basis block structure, and the Herglotz round trip.
fn verify_suite<C: ModelCoeff>(
    a: &RatMat<C>,
    spec: &SignatureSpec<C>,
    tol: f64,
    report: &mut Report,
) -> anyhow::Result<()> {
    let n = spec.n;
    let eq_tol = if C::EXACT { 0.0 } else { tol };
    report.push_verdict("J-unitarity identity", uj_identity(a, &spec.j_script, eq_tol));
    let (verdict, dbm) = db_check(a, spec, tol)?;
    report.push_verdict("de Branges certification", verdict);
    report.push_verdict(
        "sharp/inverse structure",
        sharp_inverse_identity(a, spec, eq_tol)?,
    );
    let phi = phi_of(a, n, eq_tol)?;
    let dbm = match dbm {
        Some(d) => d,
        None => return Ok(()),
    };
    match db_decompose(&dbm, spec, tol) {
        Ok(dec) => {
            report.push_check("decomposition", true, "entire factor extracted");
            let v = realpart_identities(&dec.pair, &dec.s, &phi, a, spec, tol)?;
            report.push_verdict("real/imaginary part identities", v);
        }
        Err(CoreError::RequiresFloatMode(_)) => {
            // nontrivial factor: redo the dependent steps over floats
            let af = a.to_float();
            let fspec = make_signature::<C64>(n);
            let ftol = tol.max(1e-7);
            let (fverdict, dbm_f) = db_check(&af, &fspec, ftol)?;
            match dbm_f {
                Some(dbm_f) => {
                    let dec = db_decompose(&dbm_f, &fspec, ftol)?;
                    report.push_check("decomposition (float)", true, "entire factor extracted");
                    let phi_f = phi_of(&af, n, ftol)?;
                    let v =
                        realpart_identities(&dec.pair, &dec.s, &phi_f, &af, &fspec, ftol)?;
                    report.push_verdict("real/imaginary part identities", v);
                }
                None => {
                    report.push_check(
                        "decomposition (float)",
                        false,
                        format!("float certification failed: {fverdict}"),
                    );
                }
            }
        }
        Err(e) => return Err(e.into()),
    }
    report.push_verdict("rotated-basis block structure", verify_pg_blocks(a, spec, tol)?);
    match extract_pq(&phi, tol) {
        Ok(params) => {
            let back = herglotz_rational(&params)?;
            report.push_check(
                "Herglotz round trip",
                back.equals(&phi, eq_tol),
                "extract then rebuild returns Phi",
            );
        }
        Err(e) => {
            report.push_check("Herglotz round trip", false, format!("{e}"));
        }
    }
    Ok(())
}
