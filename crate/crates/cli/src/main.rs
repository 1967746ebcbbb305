//! Command-line front end: classification, construction, verification,
//! property checks and numeric cross-checks for problem files.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fermat_core::exprio::{load_problem, parse_expr, print_expr};
use fermat_core::numeric::{estimate_order, spot_check, DEFAULT_RADII, DEFAULT_SAMPLES, DEFAULT_SEED};
use fermat_core::pdde::{
    classify, derive_quantities, equivalence_transform, verify, CaseLabel, Problem, Specialization,
};
use fermat_core::solvers::{
    check_g_properties, check_iff_conditions, construct, construct_linear_phase, construct_sine, Case4Or, Case4Result,
    SolutionCandidate,
};
use fermat_core::{ExpPoly, Tri};
use serde_json::{json, Map, Value};

const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "fermat-pdde",
    version,
    about = "Exact toolkit for Fermat-type partial differential-difference equations"
)]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Clone, Copy, ValueEnum)]
enum KChoice {
    #[value(name = "1")]
    Plus,
    #[value(name = "-1")]
    Minus,
    Both,
}

impl KChoice {
    fn values(self) -> Vec<i32> {
        match self {
            KChoice::Plus => vec![1],
            KChoice::Minus => vec![-1],
            KChoice::Both => vec![1, -1],
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseChoice {
    Auto,
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    #[value(name = "4")]
    Four,
}

impl CaseChoice {
    fn resolve(self, prob: &Problem) -> CaseLabel {
        match self {
            CaseChoice::Auto => classify(prob).label,
            CaseChoice::One => CaseLabel::CaseI,
            CaseChoice::Two => CaseLabel::CaseII,
            CaseChoice::Three => CaseLabel::CaseIII,
            CaseChoice::Four => CaseLabel::CaseIV,
        }
    }

    fn forced(self) -> Option<CaseLabel> {
        match self {
            CaseChoice::Auto => None,
            CaseChoice::One => Some(CaseLabel::CaseI),
            CaseChoice::Two => Some(CaseLabel::CaseII),
            CaseChoice::Three => Some(CaseLabel::CaseIII),
            CaseChoice::Four => Some(CaseLabel::CaseIV),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyChoice {
    Case,
    Sine,
    LinearPhase,
}

#[derive(Args)]
struct ProblemArg {
    /// Problem file (JSON).
    #[arg(long)]
    problem: PathBuf,
}

#[derive(Args)]
struct KArg {
    /// Sign k of the linearization; both runs 1 and -1.
    #[arg(long, value_enum, default_value_t = KChoice::Both, allow_hyphen_values = true)]
    k: KChoice,
}

#[derive(Subcommand)]
enum Command {
    /// Case label and vanishing pattern of D, d1, d2.
    Classify {
        #[command(flatten)]
        problem: ProblemArg,
    },
    /// Derived quantities for each k.
    Derive {
        #[command(flatten)]
        problem: ProblemArg,
        #[command(flatten)]
        k: KArg,
    },
    /// Matrix form of the equation for a phase g.
    Transform {
        #[command(flatten)]
        problem: ProblemArg,
        /// Phase g as an expression in z1..zn.
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[command(flatten)]
        k: KArg,
        /// Case to construct for; auto uses the classification.
        #[arg(long, value_enum, default_value_t = CaseChoice::Auto)]
        case: CaseChoice,
    },
    /// Candidate solution for a phase g, verified through the residual.
    Construct {
        #[command(flatten)]
        problem: ProblemArg,
        /// Phase g as an expression in z1..zn.
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[command(flatten)]
        k: KArg,
        /// Case to construct for; auto uses the classification.
        #[arg(long, value_enum, default_value_t = CaseChoice::Auto)]
        case: CaseChoice,
        /// Solution family.
        #[arg(long, value_enum, default_value_t = FamilyChoice::Case)]
        family: FamilyChoice,
    },
    /// Exact residual test of a candidate f.
    Verify {
        #[command(flatten)]
        problem: ProblemArg,
        /// Candidate f as an expression in z1..zn.
        #[arg(long, allow_hyphen_values = true)]
        f: String,
    },
    /// Which property of the case's list a phase g satisfies.
    CheckProperties {
        #[command(flatten)]
        problem: ProblemArg,
        /// Phase g as an expression in z1..zn.
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[command(flatten)]
        k: KArg,
        /// Case to construct for; auto uses the classification.
        #[arg(long, value_enum, default_value_t = CaseChoice::Auto)]
        case: CaseChoice,
    },
    /// Vanishing coefficient pairs and their implied identities.
    CheckIff {
        #[command(flatten)]
        problem: ProblemArg,
        /// Phase g as an expression in z1..zn.
        #[arg(long, allow_hyphen_values = true)]
        g: Option<String>,
        #[command(flatten)]
        k: KArg,
    },
    /// Seeded floating-point residual check.
    SpotCheck {
        #[command(flatten)]
        problem: ProblemArg,
        /// Candidate f as an expression in z1..zn.
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// Number of sample points.
        #[arg(long, default_value_t = 100)]
        points: usize,
        /// Seed for the sampler.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Coordinates are drawn from the disc of this radius.
        #[arg(long, default_value_t = 2.0)]
        radius: f64,
    },
    /// Growth order estimate of an entire candidate.
    EstimateOrder {
        /// Candidate f as an expression in z1..zn.
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// Number of variables.
        #[arg(long, default_value_t = 2)]
        arity: usize,
        /// Comma-separated radii.
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<f64>>,
        /// Samples per radius.
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Seed for the sampler.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

/// Ordered report sections rendered as text or JSON lines.
#[derive(Default)]
struct Report {
    sections: Vec<(String, Map<String, Value>)>,
    verdicts: Vec<Tri>,
}

impl Report {
    fn section(&mut self, name: impl Into<String>) -> &mut Map<String, Value> {
        self.sections.push((name.into(), Map::new()));
        &mut self.sections.last_mut().unwrap().1
    }

    fn render(&self, format: Format) -> String {
        let mut out = String::new();
        for (name, fields) in &self.sections {
            match format {
                Format::Text => {
                    out.push_str(&format!("[{name}]\n"));
                    for (k, v) in fields {
                        let text = match v {
                            Value::String(s) => s.clone(),
                            other => other.to_string(),
                        };
                        out.push_str(&format!("{k}: {text}\n"));
                    }
                }
                Format::Records => {
                    let mut rec = Map::new();
                    rec.insert("record".into(), json!(name));
                    rec.extend(fields.clone());
                    out.push_str(&Value::Object(rec).to_string());
                    out.push('\n');
                }
            }
        }
        out
    }

    /// 0 when every verdict is Zero, 1 on any NonZero, else 2 on Unknown.
    fn exit_code(&self) -> u8 {
        if self.verdicts.contains(&Tri::NonZero) {
            1
        } else if self.verdicts.contains(&Tri::Unknown) {
            2
        } else {
            0
        }
    }
}

fn s(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

fn load(p: &ProblemArg) -> Result<Problem> {
    load_problem(&p.problem).with_context(|| format!("loading {}", p.problem.display()))
}

fn expr(text: &str, n: usize, what: &str) -> Result<ExpPoly> {
    parse_expr(text, n).with_context(|| format!("parsing --{what}"))
}

fn candidate_fields(m: &mut Map<String, Value>, c: &SolutionCandidate) {
    m.insert("family".into(), s(format!("{:?}", c.family)));
    m.insert("k".into(), json!(c.k));
    m.insert("g".into(), s(print_expr(&c.g)));
    m.insert("f".into(), s(print_expr(&c.f)));
    m.insert("verdict".into(), s(c.verdict()));
    if c.verdict() != Tri::Zero {
        m.insert("residual".into(), s(print_expr(&c.verification.residual)));
    }
    for sc in &c.side_conditions {
        m.insert(format!("side {}", sc.name), s(sc.verdict));
    }
}

fn run(cli: Cli) -> Result<Report> {
    let mut r = Report::default();
    match cli.command {
        Command::Classify { problem } => {
            let prob = load(&problem)?;
            let c = classify(&prob);
            let m = r.section("classification");
            if let Some(name) = &prob.name {
                m.insert("name".into(), s(name));
            }
            m.insert("case".into(), s(c.label));
            m.insert("D_zero".into(), json!(c.det_zero));
            m.insert("d1_zero".into(), json!(c.d1_zero));
            m.insert("d2_zero".into(), json!(c.d2_zero));
            m.insert("p_irreducibility".into(), s(format!("{:?}", prob.irreducibility())));
        }
        Command::Derive { problem, k } => {
            let prob = load(&problem)?;
            for k in k.k.values() {
                let q = derive_quantities(&prob, k)?;
                let m = r.section(format!("derived k={k}"));
                for (name, p) in [
                    ("a1", &q.a1),
                    ("a2", &q.a2),
                    ("b1", &q.b1),
                    ("b2", &q.b2),
                    ("bt1", &q.bt1),
                    ("bt2", &q.bt2),
                    ("d1", &q.d1),
                    ("d2", &q.d2),
                    ("D", &q.det),
                ] {
                    m.insert(name.into(), s(p));
                }
            }
        }
        Command::Transform { problem, g, k, case } => {
            let prob = load(&problem)?;
            let g = expr(&g, prob.n, "g")?;
            let label = case.resolve(&prob);
            let roles = Specialization::for_case(label);
            for k in k.k.values() {
                let mt = equivalence_transform(roles.etas(&prob), prob.p.clone(), k, &g)?;
                let m = r.section(format!("transform k={k}"));
                m.insert("case".into(), s(label));
                m.insert("roles".into(), s(format!("{roles:?}")));
                m.insert("xi0".into(), s(&mt.xi0));
                m.insert("xi1".into(), s(&mt.xi1));
                m.insert("xi2".into(), s(&mt.xi2));
                let [[a, b], [c, d]] = mt.matrix();
                m.insert("matrix".into(), json!([[a.to_string(), b.to_string()], [c.to_string(), d.to_string()]]));
                m.insert("scale".into(), s(format!("1/(2*i*({}))", mt.xi0)));
            }
        }
        Command::Construct { problem, g, k, case, family } => {
            let prob = load(&problem)?;
            let g = expr(&g, prob.n, "g")?;
            for k in k.k.values() {
                match family {
                    FamilyChoice::Sine => {
                        let c = construct_sine(&prob, &g, k)?;
                        candidate_fields(r.section(format!("candidate k={k}")), &c);
                        r.verdicts.push(c.verdict());
                    }
                    FamilyChoice::LinearPhase => {
                        let lp = construct_linear_phase(&prob, &g, k)?;
                        for (a, c) in &lp.candidates {
                            let m = r.section(format!("candidate k={k} A={a}"));
                            m.insert("A^2".into(), s(&lp.root_squared));
                            candidate_fields(m, c);
                            r.verdicts.push(c.verdict());
                        }
                    }
                    FamilyChoice::Case => match construct(&prob, &g, k, case.forced())? {
                        Case4Or::Candidate(c) => {
                            candidate_fields(r.section(format!("candidate k={k}")), &c);
                            r.verdicts.push(c.verdict());
                        }
                        Case4Or::Case4(res) => {
                            let Case4Result::Implicit { a, .. } = *res else { unreachable!() };
                            let m = r.section(format!("relations k={k}"));
                            m.insert(
                                "note".into(),
                                s("|A| = 0: no closed form, solutions satisfy the two linear relations"),
                            );
                            m.insert(
                                "A".into(),
                                json!([
                                    [a[0][0].to_string(), a[0][1].to_string()],
                                    [a[1][0].to_string(), a[1][1].to_string()]
                                ]),
                            );
                            m.insert("relation 1".into(), s("-2i d2 f + 2i D f(z+c) = a1 e^{ig} - p a2 e^{-ig}"));
                            m.insert("relation 2".into(), s("2i D L(f) - 2i d1 f = -b1 e^{ig} + p b2 e^{-ig}"));
                            r.verdicts.push(Tri::Unknown);
                        }
                    },
                }
            }
        }
        Command::Verify { problem, f } => {
            let prob = load(&problem)?;
            let f = expr(&f, prob.n, "f")?;
            let v = verify(&prob, &f)?;
            let m = r.section("verification");
            m.insert("f".into(), s(print_expr(&f)));
            m.insert("verdict".into(), s(v.verdict));
            m.insert("residual".into(), s(print_expr(&v.residual)));
            if !v.unresolved.is_empty() {
                m.insert("unresolved".into(), json!(v.unresolved.iter().map(|t| t.to_string()).collect::<Vec<_>>()));
            }
            r.verdicts.push(v.verdict);
        }
        Command::CheckProperties { problem, g, k, case } => {
            let prob = load(&problem)?;
            let g = expr(&g, prob.n, "g")?;
            let label = case.resolve(&prob);
            for k in k.k.values() {
                let pr = check_g_properties(&prob, &g, k, label)?;
                let m = r.section(format!("properties k={k}"));
                m.insert("case".into(), s(label));
                m.insert("g shape".into(), s(pr.g_shape));
                m.insert("L(g) shape".into(), s(pr.l_g_shape));
                m.insert("g + shift shape".into(), s(pr.g_plus_shift));
                m.insert("g - shift shape".into(), s(pr.g_minus_shift));
                m.insert("a1 = b2 = 0".into(), json!(pr.a1_b2_zero));
                m.insert("a2 = b1 = 0".into(), json!(pr.a2_b1_zero));
                if let Some(d) = &pr.degree_condition {
                    m.insert("degree condition".into(), serde_json::to_value(d)?);
                }
                for c in &pr.clauses {
                    m.insert(format!("({})", c.label), json!({ "holds": c.holds, "statement": c.description }));
                }
                m.insert("holding".into(), json!(pr.holding()));
                r.verdicts.push(if pr.holding().is_empty() { Tri::NonZero } else { Tri::Zero });
            }
        }
        Command::CheckIff { problem, g, k } => {
            let prob = load(&problem)?;
            let g = g.map(|t| expr(&t, prob.n, "g")).transpose()?;
            for k in k.k.values() {
                let rep = check_iff_conditions(&prob, k, g.as_ref())?;
                let m = r.section(format!("vanishing pairs k={k}"));
                m.insert("a2 = b1 = 0".into(), json!(rep.a2_b1_zero));
                m.insert("a1 = b2 = 0".into(), json!(rep.a1_b2_zero));
                m.insert("bt1 = b2 = 0".into(), json!(rep.bt1_b2_zero));
                m.insert("bt2 = b1 = 0".into(), json!(rep.bt2_b1_zero));
                m.insert("constant operator".into(), json!(rep.constant_operator));
                for id in &rep.identities {
                    m.insert(
                        format!("identity [{}]", id.condition),
                        json!({ "statement": id.statement, "verdict": id.verdict.to_string() }),
                    );
                }
                r.verdicts.extend(rep.identities.iter().map(|id| id.verdict));
            }
        }
        Command::SpotCheck { problem, f, points, seed, radius } => {
            let prob = load(&problem)?;
            let f = expr(&f, prob.n, "f")?;
            if points == 0 || radius.is_nan() || radius <= 0.0 {
                bail!("--points and --radius must be positive");
            }
            let rep = spot_check(&prob, &f, points, seed, radius)?;
            let m = r.section("spot-check");
            if let Value::Object(o) = serde_json::to_value(&rep)? {
                m.extend(o);
            }
            r.verdicts.push(if rep.passed { Tri::Zero } else { Tri::NonZero });
        }
        Command::EstimateOrder { f, arity, radii, samples, seed } => {
            let f = expr(&f, arity, "f")?;
            let radii = radii.unwrap_or_else(|| DEFAULT_RADII.to_vec());
            if radii.len() < 2 || radii.iter().any(|r| r.is_nan() || *r <= 0.0) || samples == 0 {
                bail!("--radii needs at least two positive values and --samples must be positive");
            }
            let est = estimate_order(&f, &radii, samples, seed)?;
            let m = r.section("order");
            if let Value::Object(o) = serde_json::to_value(&est)? {
                m.extend(o);
            }
            if est.exceeds_resolution {
                m.insert("note".into(), s("slope exceeds grid resolution"));
            }
        }
    }
    Ok(r)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = cli.format;
    match run(cli) {
        Ok(report) => {
            print!("{}", report.render(format));
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
