use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cluster_core::cartan::CartanMatrix;
use cluster_core::coxgroup::{CoxeterGroup, GroupError, DEFAULT_GROUP_BUDGET};
use cluster_core::enumerate::{catalan_report, EnumError, EnumOptions};
use cluster_core::gassoc::{fan_checks, Associahedron};
use cluster_core::mutation::{detect_finite_type, explore, ExchangeMatrix, FiniteTypeResult, MutationError, Seed, SeedFile, DEFAULT_SEED_BUDGET};
use cluster_core::rootsys::RootSystem;
use cluster_core::verify::{render_json, render_text, run_all, VerifyOptions};
use cluster_core::wiring::{enumerate_classes, figure_diagram, gl3_cell, WiringError};

#[derive(Parser)]
#[command(name = "clustercat", version, about = "Finite type cluster algebras, root systems and generalized associahedra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Root system data.
    Roots(Common),
    /// Weyl group statistics, or the Hasse diagram of the weak order as DOT.
    Group(Common),
    /// Exchange graph of a seed.
    Mutate(Common),
    /// Generalized associahedron: polytope, fan and fan checks.
    Assoc(Common),
    /// Catalan and Narayana numbers through four interpretations.
    Catalan(Common),
    /// Double wiring diagrams for GL_n and the GL3 cluster structure.
    Wiring(Common),
    /// The acceptance battery.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Common {
    /// Cartan type such as A3, B2, D4 or A1xA2.
    #[arg(long = "type", value_name = "TYPE", conflicts_with = "matrix_file")]
    type_spec: Option<String>,
    /// JSON file with a Cartan matrix; `mutate` also accepts an exchange matrix or a seed file.
    #[arg(long, value_name = "PATH")]
    matrix_file: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Maximum number of seeds explored.
    #[arg(long, default_value_t = DEFAULT_SEED_BUDGET, value_parser = positive)]
    budget_seeds: usize,
    #[arg(long, default_value_t = 2002)]
    rng_seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Quick battery (the default).
    #[arg(long, conflicts_with = "extended")]
    quick: bool,
    /// Adds E6 to the battery.
    #[arg(long)]
    extended: bool,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, default_value_t = DEFAULT_SEED_BUDGET, value_parser = positive)]
    budget_seeds: usize,
    #[arg(long, default_value_t = 2002)]
    rng_seed: u64,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Off,
    Text,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

enum Failure {
    Verification(String),
    Usage(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Budget(_) => 3,
        }
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::BudgetExceeded(_) => Failure::Budget(e.to_string()),
            e => Failure::Verification(e.to_string()),
        }
    }
}

impl From<MutationError> for Failure {
    fn from(e: MutationError) -> Self {
        match e {
            MutationError::BudgetExceeded { .. } | MutationError::Inconclusive(_) => Failure::Budget(e.to_string()),
            MutationError::InvalidMatrix(_) | MutationError::SeedFile(_) | MutationError::Exact(_) => Failure::Usage(e.to_string()),
            e => Failure::Verification(e.to_string()),
        }
    }
}

impl From<EnumError> for Failure {
    fn from(e: EnumError) -> Self {
        match e {
            EnumError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            EnumError::RankTooLarge(_) => Failure::Usage(e.to_string()),
            e => Failure::Verification(e.to_string()),
        }
    }
}

impl From<WiringError> for Failure {
    fn from(e: WiringError) -> Self {
        match e {
            WiringError::Mutation(m) => m.into(),
            e => Failure::Verification(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// What `--matrix-file` or `--type` resolved to.
enum Input {
    Cartan(CartanMatrix),
    Exchange(Vec<Vec<i64>>),
    Seed(SeedFile),
}

fn read_input(c: &Common, allow_exchange: bool) -> Result<Input, Failure> {
    if let Some(spec) = &c.type_spec {
        return CartanMatrix::parse(spec).map(Input::Cartan).map_err(|e| usage(e.to_string()));
    }
    let Some(path) = &c.matrix_file else {
        return Err(usage("one of --type or --matrix-file is required"));
    };
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    if value.is_object() {
        if !allow_exchange {
            return Err(usage("seed files are only accepted by mutate"));
        }
        return serde_json::from_value(value).map(Input::Seed).map_err(|e| usage(format!("{}: {e}", path.display())));
    }
    let m: Vec<Vec<i64>> = serde_json::from_value(value).map_err(|e| usage(format!("{}: expected an integer matrix: {e}", path.display())))?;
    let is_cartan = m.iter().enumerate().all(|(i, r)| r.get(i) == Some(&2));
    if is_cartan || !allow_exchange {
        CartanMatrix::new(m).map(Input::Cartan).map_err(|e| usage(e.to_string()))
    } else {
        Ok(Input::Exchange(m))
    }
}

fn cartan(c: &Common) -> Result<CartanMatrix, Failure> {
    match read_input(c, false)? {
        Input::Cartan(a) => Ok(a),
        _ => unreachable!("exchange input disabled"),
    }
}

fn root_system(c: &Common) -> Result<RootSystem, Failure> {
    RootSystem::generate(&cartan(c)?).map_err(|e| Failure::Budget(e.to_string()))
}

fn format_of(f: Option<Format>, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let f = f.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        let names: Vec<String> = allowed.iter().map(|a| a.to_possible_value().expect("named").get_name().to_string()).collect();
        Err(usage(format!("unsupported format for this command; choose one of {}", names.join(", "))))
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn cmd_roots(c: &Common) -> Result<String, Failure> {
    let f = format_of(c.format, Format::Json, &[Format::Json, Format::Text])?;
    let rs = root_system(c)?;
    if f == Format::Json {
        return Ok(pretty(&rs.to_json()));
    }
    let cd = rs.coxeter_data().map_err(|e| Failure::Verification(e.to_string()))?;
    let mut s = format!("type {}\nrank {}\nroots {}\npositive roots {}\nCoxeter number {}\nexponents {:?}\ngroup order {}\n", rs.dynkin(), rs.rank(), rs.num_roots(), rs.num_positive(), cd.h, cd.exponents, cd.group_order);
    for r in rs.positive_roots() {
        let _ = writeln!(s, "  {:?}", r.coords);
    }
    Ok(s)
}

fn cmd_group(c: &Common) -> Result<String, Failure> {
    let f = format_of(c.format, Format::Json, &[Format::Json, Format::Dot, Format::Text])?;
    let rs = root_system(c)?;
    let g = CoxeterGroup::build(&rs, DEFAULT_GROUP_BUDGET)?;
    if f == Format::Dot {
        let nodes: Vec<usize> = (0..g.len()).collect();
        return Ok(g.hasse_dot("weak_order", &nodes, &g.weak_covers()));
    }
    let mut by_length = vec![0usize; rs.num_positive() + 1];
    for w in 0..g.len() {
        by_length[g.length(w)] += 1;
    }
    let w0 = g.w0();
    let stats = json!({
        "type": rs.dynkin().to_string(),
        "order": g.len(),
        "reflections": g.reflections().len(),
        "longest_element": g.word_label(w0),
        "longest_length": g.length(w0),
        "w0_is_minus_identity": g.is_minus_identity(w0),
        "reduced_words_of_w0": g.count_reduced_words(w0).to_string(),
        "length_distribution": by_length,
    });
    if f == Format::Json {
        return Ok(pretty(&stats));
    }
    Ok(format!(
        "type {}\norder {}\nreflections {}\nw0 = {} (length {})\nw0 = -1: {}\nreduced words of w0 {}\nlength distribution {:?}\n",
        rs.dynkin(),
        g.len(),
        g.reflections().len(),
        g.word_label(w0),
        g.length(w0),
        g.is_minus_identity(w0),
        g.count_reduced_words(w0),
        by_length
    ))
}

fn cmd_mutate(c: &Common) -> Result<String, Failure> {
    let f = format_of(c.format, Format::Json, &[Format::Json, Format::Dot, Format::Text])?;
    let seed = match read_input(c, true)? {
        Input::Cartan(a) => {
            let eps = a.bipartition().map_err(|e| usage(e.to_string()))?;
            square_seed(a.b_of_a(&eps))?
        }
        Input::Exchange(b) => square_seed(b)?,
        Input::Seed(file) => file.to_seed()?,
    };
    let g = explore(&seed, c.budget_seeds)?;
    match f {
        Format::Dot => Ok(g.to_dot()),
        Format::Json => {
            let mut v = g.to_json();
            v["type"] = json!(finite_type(&seed, c.budget_seeds)?);
            Ok(pretty(&v))
        }
        _ => {
            let mut s = format!(
                "type {}\nfrozen {}\nseeds {}\nedges {}\ncluster variables {}\n",
                finite_type(&seed, c.budget_seeds)?,
                seed.exchange().m() - seed.exchange().n(),
                g.seeds.len(),
                g.edges.len(),
                g.variables.len()
            );
            for (i, v) in g.variables.iter().enumerate() {
                let _ = writeln!(s, "  {}: {}", i + 1, v.fraction_form());
            }
            Ok(s)
        }
    }
}

/// Coefficient-free seed of a square matrix, or with principal
/// coefficients when the matrix is singular.
fn square_seed(b: Vec<Vec<i64>>) -> Result<Seed, Failure> {
    if b.len() != b.first().map_or(0, Vec::len) {
        return Err(usage("an exchange matrix without frozen rows must be square"));
    }
    let names: Vec<String> = (1..=b.len()).map(|i| format!("x{i}")).collect();
    match ExchangeMatrix::new(b.clone()) {
        Ok(ex) => Ok(Seed::initial(ex, &names)?),
        Err(MutationError::InvalidMatrix(_)) if ExchangeMatrix::new(principal_rows(&b)).is_ok() => {
            Ok(Seed::with_principal_coefficients(b)?)
        }
        Err(e) => Err(e.into()),
    }
}

fn principal_rows(b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b.len();
    b.iter().cloned().chain((0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect())).collect()
}

fn finite_type(seed: &Seed, budget: usize) -> Result<String, Failure> {
    let b = seed.exchange().principal();
    Ok(match detect_finite_type(&b, budget)? {
        FiniteTypeResult::Finite(t) => t.to_string(),
        FiniteTypeResult::Infinite { .. } => "infinite".into(),
    })
}

fn cmd_assoc(c: &Common) -> Result<(String, bool), Failure> {
    let f = format_of(c.format, Format::Json, &[Format::Json, Format::Off, Format::Text])?;
    let rs = root_system(c)?;
    if rs.dynkin().0.len() != 1 {
        return Err(usage("assoc needs an irreducible type"));
    }
    let g = CoxeterGroup::build(&rs, DEFAULT_GROUP_BUDGET)?;
    let a = Associahedron::build(&rs, &g).map_err(|e| Failure::Verification(e.to_string()))?;
    if f == Format::Off {
        return a.polytope.to_off().map(|s| (s, true)).ok_or_else(|| usage("OFF output needs rank 3"));
    }
    let report = fan_checks(&a.apr, &a.complex, Some(&g), 1000, c.rng_seed);
    let ok = report.passed() && a.polytope.is_simple();
    if f == Format::Json {
        let v = json!({
            "type": rs.dynkin().to_string(),
            "polytope": a.polytope.to_poly_json(),
            "fan": a.fan_json(),
            "f_vector": a.complex.f_vector,
            "h_vector": a.complex.h_vector,
            "checks": report.to_json(),
        });
        return Ok((pretty(&v), ok));
    }
    let mut s = format!(
        "type {}\nvertices {}\nedges {}\nf-vector {:?}\nh-vector {:?}\nsimple {}\nfan checks {}\n",
        rs.dynkin(),
        a.polytope.vertices.len(),
        a.polytope.edges.len(),
        a.complex.f_vector,
        a.complex.h_vector,
        a.polytope.is_simple(),
        if report.passed() { "pass" } else { "FAIL" }
    );
    s.push_str("inequalities\n");
    for k in 0..a.apr.len() {
        let _ = writeln!(s, "  <{}, x> <= {}", a.apr.label(k), a.support.values[k]);
    }
    Ok((s, ok))
}

fn cmd_catalan(c: &Common) -> Result<(String, bool), Failure> {
    let f = format_of(c.format, Format::Csv, &[Format::Csv, Format::Json, Format::Text])?;
    let rs = root_system(c)?;
    let g = CoxeterGroup::build(&rs, DEFAULT_GROUP_BUDGET)?;
    let r = catalan_report(&rs, &g, EnumOptions::default())?;
    let out = match f {
        Format::Json => pretty(&r.to_json()),
        Format::Csv => r.to_csv(),
        _ => {
            let mut s = format!("type {}\n", r.type_name);
            for row in &r.rows {
                let k = row.k.map(|k| format!(" k={k}")).unwrap_or_default();
                let _ = writeln!(s, "  {}{k}: {} (expected {})", row.interpretation, row.observed, row.expected);
            }
            s
        }
    };
    Ok((out, r.passed()))
}

fn cmd_wiring(c: &Common) -> Result<(String, bool), Failure> {
    let f = format_of(c.format, Format::Text, &[Format::Json, Format::Dot, Format::Text])?;
    // GL_n corresponds to type A_{n-1}; GL3 is the default.
    let n = match &c.type_spec {
        None => 3,
        Some(t) => match t.trim().strip_prefix("type:").unwrap_or(t.trim()).strip_prefix('A').and_then(|r| r.parse::<usize>().ok()) {
            Some(r @ 1..=3) => r + 1,
            _ => return Err(usage("wiring takes --type A1, A2 or A3 (GL2, GL3, GL4)")),
        },
    };
    if c.matrix_file.is_some() {
        return Err(usage("wiring does not read a matrix file"));
    }
    let graph = enumerate_classes(n)?;
    if f == Format::Dot {
        return Ok((graph.to_dot(), true));
    }
    let gl3 = if n == 3 { Some(gl3_cell(&figure_diagram(), &graph, c.budget_seeds, c.rng_seed)?) } else { None };
    let ok = graph.is_connected() && gl3.as_ref().is_none_or(|r| r.passed());
    if f == Format::Json {
        let v = json!({ "n": n, "move_graph": graph.to_json(), "gl3": gl3.as_ref().map(|r| r.to_json()) });
        return Ok((pretty(&v), ok));
    }
    let deg = graph.degrees();
    let mut hist = std::collections::BTreeMap::new();
    for d in deg {
        *hist.entry(d).or_insert(0usize) += 1;
    }
    let mut s = format!("GL{n}: {} isotopy classes, {} moves checked, connected {}\n", graph.classes.len(), graph.moves_checked, graph.is_connected());
    for (d, k) in hist.iter().rev() {
        let _ = writeln!(s, "  {k} classes of degree {d}");
    }
    if let Some(r) = gl3 {
        let _ = writeln!(
            s,
            "cell of {}: {} cluster variables, {} clusters, type {}, {} wiring clusters embedded, Jacobian rank {}",
            r.diagram, r.variables, r.seeds, r.detected_type, r.wiring_clusters_embedded, r.jacobian_rank
        );
        let _ = writeln!(s, "  identified {}", r.identified.join(" "));
    }
    Ok((s, ok))
}

fn cmd_verify(v: &VerifyArgs) -> Result<(String, bool, bool), Failure> {
    let f = format_of(v.format, Format::Text, &[Format::Text, Format::Json])?;
    let opts = VerifyOptions { extended: v.extended && !v.quick, rng_seed: v.rng_seed, budget_seeds: v.budget_seeds };
    let results = run_all(&opts);
    let ok = results.iter().all(|c| c.passed);
    let budget = results.iter().any(|c| c.budget_exceeded);
    let out = if f == Format::Json { pretty(&render_json(&results)) } else { render_text(&results) };
    Ok((out, ok, budget))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (text, ok, budget, out) = match &cli.command {
        Command::Roots(c) => (cmd_roots(c)?, true, false, &c.out),
        Command::Group(c) => (cmd_group(c)?, true, false, &c.out),
        Command::Mutate(c) => (cmd_mutate(c)?, true, false, &c.out),
        Command::Assoc(c) => {
            let (t, ok) = cmd_assoc(c)?;
            (t, ok, false, &c.out)
        }
        Command::Catalan(c) => {
            let (t, ok) = cmd_catalan(c)?;
            (t, ok, false, &c.out)
        }
        Command::Wiring(c) => {
            let (t, ok) = cmd_wiring(c)?;
            (t, ok, false, &c.out)
        }
        Command::Verify(v) => {
            let (t, ok, budget) = cmd_verify(v)?;
            (t, ok, budget, &v.out)
        }
    };
    emit(out, &text)?;
    if budget {
        Err(Failure::Budget("a search budget was exhausted".into()))
    } else if ok {
        Ok(())
    } else {
        Err(Failure::Verification("verification failed".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Verification(m) | Failure::Usage(m) | Failure::Budget(m)) = &f;
            eprintln!("clustercat: {m}");
            ExitCode::from(f.code())
        }
    }
}
