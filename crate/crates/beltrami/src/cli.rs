//! Command-line front end: select a chart, run the operator or the claim
//! registry, and emit deterministic machine-readable reports.
//!
//! Exit codes: 0 success (for `verify`: every claim passed or is a documented
//! discrepancy), 1 generic failure, 2 degenerate form or sampling, 3 parse
//! error, 4 expression budget exceeded without --numeric, 5 unknown claim.

use std::collections::BTreeMap;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::json;

use crate::error::{EngineError, Result};
use crate::finitetype::claims::{
    claim_anchor, claim_ids, is_documented_discrepancy, run_claim, ClaimOptions,
};
use crate::finitetype::{finite_type_analysis, iterate_matrix, AnalysisOptions};
use crate::frames::AnyVec;
use crate::geometry::{
    self, builtin_chart_names, parse_exact_number, resolve_chart, ChartKind, FormKind,
    ProfileChoice, SurfaceChart,
};
use crate::operator::BeltramiOp;
use crate::report::{ClaimReport, OutputFormat, Report, Verdict};
use crate::symexpr::{canonicalize, pole_order, specialize, Expr, Symbol};

#[derive(Parser, Debug)]
#[command(
    name = "beltrami",
    version,
    about = "Laplace operators of fundamental forms on tubes, anchor rings, and spheres"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalOpts,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Seed for every random choice; echoed in the report.
    #[arg(long, global = true, env = "BELTRAMI_SEED", default_value_t = 0)]
    seed: u64,
    /// Report format.
    #[arg(
        long,
        global = true,
        value_enum,
        env = "BELTRAMI_FORMAT",
        default_value_t = FormatArg::Json
    )]
    format: FormatArg,
    /// Residual tolerance for annihilator acceptance.
    #[arg(long, global = true, env = "BELTRAMI_TOL", default_value_t = 1e-6)]
    tol: f64,
    /// Number of sample points for numeric paths.
    #[arg(long, global = true, env = "BELTRAMI_SAMPLES", default_value_t = 60)]
    samples: usize,
    /// Allow finite differences to continue past the symbolic budget.
    #[arg(long, global = true, env = "BELTRAMI_NUMERIC")]
    numeric: bool,
    /// Fail on every MISMATCH, including documented discrepancies.
    #[arg(long, global = true, env = "BELTRAMI_STRICT")]
    strict: bool,
    /// Symbolic expression budget (numerator terms per operator input).
    #[arg(
        long,
        global = true,
        env = "BELTRAMI_BUDGET",
        default_value_t = crate::operator::DEFAULT_BUDGET
    )]
    budget: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FormatArg {
    Json,
    Csv,
    Pretty,
}

impl FormatArg {
    fn to_output(self) -> OutputFormat {
        match self {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Pretty => OutputFormat::Pretty,
        }
    }
}

#[derive(Args, Debug)]
struct SurfaceOpts {
    /// Builtin chart (tube, anchor-ring, sphere, sphere-outward) or a path
    /// to a chart document.
    #[arg(long, env = "BELTRAMI_SURFACE", default_value = "tube")]
    surface: String,
    /// Radius as an exact number (integer, decimal, or p/q).
    #[arg(long, visible_alias = "r", value_name = "NUM")]
    radius: Option<String>,
    /// Spine curvature for anchor-ring charts (exact number).
    #[arg(long, value_name = "NUM")]
    kappa: Option<String>,
}

impl SurfaceOpts {
    fn resolve(&self) -> Result<SurfaceChart> {
        let mut chart = resolve_chart(&self.surface)?;
        if let Some(r) = &self.radius {
            let r = parse_exact_number(r)?;
            if r <= BigRational::zero() {
                return Err(EngineError::ParseError("radius must be positive".into()));
            }
            chart.params.radius = Some(r);
        }
        if let Some(k) = &self.kappa {
            if chart.kind != ChartKind::AnchorRing {
                return Err(EngineError::ParseError(
                    "kappa is only meaningful for anchor-ring charts".into(),
                ));
            }
            let k = parse_exact_number(k)?;
            if k <= BigRational::zero() {
                return Err(EngineError::ParseError("kappa must be positive".into()));
            }
            chart.params.kappa = Some(k);
        }
        Ok(chart)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the fundamental forms, their determinants, and the curvatures.
    Forms {
        #[command(flatten)]
        surface: SurfaceOpts,
    },
    /// Apply iterates of a form operator to the position or the Gauss map.
    Laplace {
        #[command(flatten)]
        surface: SurfaceOpts,
        /// Field the operator acts on.
        #[arg(long, value_enum, default_value_t = Target::Gaussmap)]
        target: Target,
        /// Number of operator applications.
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Fundamental form whose operator is applied.
        #[arg(long, value_enum, default_value_t = FormChoice::Second)]
        form: FormChoice,
    },
    /// Run formula claims and report PASS / MISMATCH verdicts.
    Verify {
        #[command(flatten)]
        surface: SurfaceOpts,
        /// Comma-separated claim ids; defaults to the whole registry.
        #[arg(long, value_delimiter = ',')]
        claims: Vec<String>,
    },
    /// Sample Gauss-map iterates and report finite-type evidence.
    FiniteType {
        #[command(flatten)]
        surface: SurfaceOpts,
        /// Largest iterate order to examine.
        #[arg(long, default_value_t = 5)]
        k_max: usize,
        /// Numeric spine profile: default/smooth (analytic towers) or jet
        /// (random towers).
        #[arg(long, default_value = "default")]
        profile: String,
    },
    /// List registered claims with their anchors.
    ListClaims,
    /// List builtin surfaces.
    ListSurfaces,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Target {
    Position,
    Gaussmap,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FormChoice {
    First,
    Second,
    Third,
}

impl FormChoice {
    fn to_kind(self) -> FormKind {
        match self {
            FormChoice::First => FormKind::First,
            FormChoice::Second => FormKind::Second,
            FormChoice::Third => FormKind::Third,
        }
    }
}

/// Parses argv, runs the command, prints the report, returns the exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return code;
        }
    };
    let format = cli.global.format.to_output();
    match execute(&cli) {
        Ok((report, ok)) => {
            print!("{}", report.render(format));
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e, cli.global.numeric)
        }
    }
}

fn exit_code(err: &EngineError, numeric: bool) -> i32 {
    match err {
        EngineError::DegenerateForm | EngineError::IllConditionedSamples => 2,
        EngineError::ParseError(_) => 3,
        EngineError::ExpressionBudgetExceeded { .. } if !numeric => 4,
        EngineError::UnknownClaim(_) => 5,
        _ => 1,
    }
}

fn execute(cli: &Cli) -> Result<(Report, bool)> {
    match &cli.command {
        Command::Forms { surface } => cmd_forms(surface, &cli.global),
        Command::Laplace {
            surface,
            target,
            k,
            form,
        } => cmd_laplace(surface, *target, *k, *form, &cli.global),
        Command::Verify { surface, claims } => cmd_verify(surface, claims, &cli.global),
        Command::FiniteType {
            surface,
            k_max,
            profile,
        } => cmd_finite_type(surface, *k_max, profile, &cli.global),
        Command::ListClaims => cmd_list_claims(&cli.global),
        Command::ListSurfaces => cmd_list_surfaces(&cli.global),
    }
}

fn base_config(global: &GlobalOpts, command: &str) -> BTreeMap<String, String> {
    let mut c = BTreeMap::new();
    c.insert("command".into(), command.into());
    c.insert("format".into(), format!("{:?}", global.format).to_lowercase());
    c.insert("tol".into(), format!("{:e}", global.tol));
    c.insert("samples".into(), global.samples.to_string());
    c.insert("numeric".into(), global.numeric.to_string());
    c.insert("strict".into(), global.strict.to_string());
    c.insert("budget".into(), global.budget.to_string());
    c
}

fn echo_surface(c: &mut BTreeMap<String, String>, s: &SurfaceOpts) {
    c.insert("surface".into(), s.surface.clone());
    if let Some(r) = &s.radius {
        c.insert("radius".into(), r.clone());
    }
    if let Some(k) = &s.kappa {
        c.insert("kappa".into(), k.clone());
    }
}

/// Canonical display with chart parameters substituted where given.
fn display(chart: &SurfaceChart, e: &Expr) -> Result<String> {
    let pinned = specialize(
        e,
        chart.params.radius.as_ref(),
        chart.params.kappa.as_ref(),
    )?;
    Ok(format!("{}", canonicalize(&pinned)?))
}

fn cmd_forms(surface: &SurfaceOpts, global: &GlobalOpts) -> Result<(Report, bool)> {
    let chart = surface.resolve()?;
    let mut config = base_config(global, "forms");
    echo_surface(&mut config, surface);
    let mut report = Report::new(global.seed, config);
    for (name, kind) in [
        ("I", FormKind::First),
        ("II", FormKind::Second),
        ("III", FormKind::Third),
    ] {
        let form = match kind {
            FormKind::First => geometry::first_form(&chart)?,
            FormKind::Second => geometry::second_form(&chart)?,
            FormKind::Third => geometry::third_form(&chart)?,
        };
        report.push_row(json!({
            "form": name,
            "g11": display(&chart, &form.g11)?,
            "g12": display(&chart, &form.g12)?,
            "g22": display(&chart, &form.g22)?,
            "det": display(&chart, &form.det())?,
        }));
    }
    report.push_row(json!({
        "gauss_curvature": display(&chart, &geometry::gauss_curvature(&chart)?)?,
        "mean_curvature": display(&chart, &geometry::mean_curvature(&chart)?)?,
    }));
    Ok((report, true))
}

fn vec_row(chart: &SurfaceChart, order: usize, v: &AnyVec) -> Result<serde_json::Value> {
    let comps: [(&str, &Expr); 3] = match v {
        AnyVec::Frame(f) => [("t", &f.a_t), ("h", &f.a_h), ("b", &f.a_b)],
        AnyVec::Ambient(a) => [("x", &a.x), ("y", &a.y), ("z", &a.z)],
    };
    let basis = match v {
        AnyVec::Frame(_) => "frame",
        AnyVec::Ambient(_) => "ambient",
    };
    let mut row = serde_json::Map::new();
    row.insert("order".into(), json!(order));
    row.insert("basis".into(), json!(basis));
    let mut pd = 0u8;
    let mut pc = 0u8;
    for (name, e) in comps {
        row.insert(name.into(), json!(display(chart, e)?));
        pd = pd.max(pole_order(e, Symbol::Delta)?);
        pc = pc.max(pole_order(e, Symbol::CosPhi)?);
    }
    row.insert("pole_delta".into(), json!(pd));
    row.insert("pole_cos".into(), json!(pc));
    Ok(serde_json::Value::Object(row))
}

fn cmd_laplace(
    surface: &SurfaceOpts,
    target: Target,
    k: usize,
    form: FormChoice,
    global: &GlobalOpts,
) -> Result<(Report, bool)> {
    if k == 0 {
        return Err(EngineError::InvalidArgument(
            "iterate order must be at least 1".into(),
        ));
    }
    let chart = surface.resolve()?;
    let mut config = base_config(global, "laplace");
    echo_surface(&mut config, surface);
    config.insert("target".into(), format!("{target:?}").to_lowercase());
    config.insert("k".into(), k.to_string());
    config.insert("form".into(), format!("{form:?}").to_lowercase());
    let mut report = Report::new(global.seed, config);

    let op = BeltramiOp::new(&chart, form.to_kind())?.with_budget(global.budget);
    let symbolic: Result<Vec<AnyVec>> = (|| match target {
        Target::Position => {
            let first = op.laplacian_position()?;
            let mut fields = vec![first.clone()];
            if k > 1 {
                fields.extend(op.iterate(&first, k - 1)?);
            }
            Ok(fields)
        }
        Target::Gaussmap => op.iterate(&geometry::gauss_map(&chart)?, k),
    })();
    match symbolic {
        Ok(fields) => {
            for (i, v) in fields.iter().enumerate() {
                report.push_row(vec_row(&chart, i + 1, v)?);
            }
            Ok((report, true))
        }
        Err(EngineError::ExpressionBudgetExceeded { .. })
            if global.numeric && target == Target::Gaussmap && form == FormChoice::Second =>
        {
            let opts = AnalysisOptions {
                points: global.samples,
                seed: global.seed,
                budget: global.budget,
                allow_numeric: true,
                ..AnalysisOptions::default()
            };
            let im = iterate_matrix(&chart, k, &opts)?;
            for (p, (u, phi)) in im.points.iter().enumerate() {
                let col = im.matrix.column(k);
                report.push_row(json!({
                    "order": k,
                    "numeric": true,
                    "u": u,
                    "phi": phi,
                    "value": [col[3 * p], col[3 * p + 1], col[3 * p + 2]],
                }));
            }
            report.push_row(json!({
                "numeric_orders": im.numeric_orders,
                "note": "orders past the symbolic budget evaluated by stacked differencing",
            }));
            Ok((report, true))
        }
        Err(e) => Err(e),
    }
}

fn cmd_verify(
    surface: &SurfaceOpts,
    claims: &[String],
    global: &GlobalOpts,
) -> Result<(Report, bool)> {
    let ids: Vec<String> = if claims.is_empty() {
        claim_ids().iter().map(|s| s.to_string()).collect()
    } else {
        claims.to_vec()
    };
    for id in &ids {
        if claim_anchor(id).is_none() {
            return Err(EngineError::UnknownClaim(id.clone()));
        }
    }
    let mut config = base_config(global, "verify");
    echo_surface(&mut config, surface);
    config.insert("claims".into(), ids.join(","));
    let mut report = Report::new(global.seed, config);
    let opts = ClaimOptions {
        seed: global.seed,
        budget: global.budget,
    };
    let mut ok = true;
    for id in &ids {
        let rep: ClaimReport = match run_claim(id, &opts) {
            Ok(r) => r,
            Err(e @ EngineError::ExpressionBudgetExceeded { .. }) if !global.numeric => {
                return Err(e)
            }
            Err(e) => ClaimReport::error(id, claim_anchor(id).unwrap_or(""), &e),
        };
        let claim_ok = match rep.verdict {
            Verdict::Pass | Verdict::NumericOnlyPass => true,
            Verdict::Mismatch => !global.strict && is_documented_discrepancy(id),
            Verdict::Error => false,
        };
        ok &= claim_ok;
        report.push_claim(&rep);
    }
    Ok((report, ok))
}

fn cmd_finite_type(
    surface: &SurfaceOpts,
    k_max: usize,
    profile: &str,
    global: &GlobalOpts,
) -> Result<(Report, bool)> {
    let mut chart = surface.resolve()?;
    chart.params.profile = match profile {
        "default" | "smooth" => ProfileChoice::Smooth,
        "jet" => ProfileChoice::Jet,
        other => {
            return Err(EngineError::ParseError(format!(
                "unknown profile {other:?} (expected default, smooth, or jet)"
            )))
        }
    };
    let mut config = base_config(global, "finite-type");
    echo_surface(&mut config, surface);
    config.insert("k_max".into(), k_max.to_string());
    config.insert("profile".into(), profile.into());
    let mut report = Report::new(global.seed, config);
    let opts = AnalysisOptions {
        points: global.samples,
        seed: global.seed,
        budget: global.budget,
        residual_tol: global.tol,
        allow_numeric: global.numeric,
        ..AnalysisOptions::default()
    };
    let ev = finite_type_analysis(&chart, k_max, &opts)?;
    let verdict_text = match &ev.verdict {
        crate::finitetype::TypeVerdict::FiniteTypeCandidate(k) => {
            format!("FiniteTypeCandidate({k})")
        }
        crate::finitetype::TypeVerdict::InfiniteTypeEvidence => "InfiniteTypeEvidence".into(),
    };
    let mut row = serde_json::to_value(&ev).expect("evidence serializes");
    if let serde_json::Value::Object(map) = &mut row {
        map.insert("verdict_text".into(), json!(verdict_text));
    }
    report.push_row(row);
    Ok((report, true))
}

fn cmd_list_claims(global: &GlobalOpts) -> Result<(Report, bool)> {
    let config = base_config(global, "list-claims");
    let mut report = Report::new(global.seed, config);
    for id in claim_ids() {
        report.push_row(json!({
            "claim_id": id,
            "anchor": claim_anchor(id).unwrap_or(""),
            "documented_discrepancy": is_documented_discrepancy(id),
        }));
    }
    Ok((report, true))
}

fn cmd_list_surfaces(global: &GlobalOpts) -> Result<(Report, bool)> {
    let config = base_config(global, "list-surfaces");
    let mut report = Report::new(global.seed, config);
    let blurbs: [(&str, &str); 4] = [
        ("tube", "radius-r tube around a generic smooth spine curve"),
        (
            "anchor-ring",
            "torus: tube around a plane circle (constant kappa, zero tau)",
        ),
        ("sphere", "round sphere swept from a great circle, inward normal"),
        ("sphere-outward", "round sphere with the outward normal"),
    ];
    for name in builtin_chart_names() {
        let about = blurbs
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, d)| *d)
            .unwrap_or("");
        report.push_row(json!({ "surface": name, "about": about }));
    }
    Ok((report, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn exit_codes_follow_the_contract() {
        assert_eq!(exit_code(&EngineError::DegenerateForm, false), 2);
        assert_eq!(exit_code(&EngineError::IllConditionedSamples, false), 2);
        assert_eq!(exit_code(&EngineError::ParseError("x".into()), false), 3);
        assert_eq!(
            exit_code(
                &EngineError::ExpressionBudgetExceeded {
                    size: 10,
                    budget: 1
                },
                false
            ),
            4
        );
        assert_eq!(
            exit_code(
                &EngineError::ExpressionBudgetExceeded {
                    size: 10,
                    budget: 1
                },
                true
            ),
            1
        );
        assert_eq!(exit_code(&EngineError::UnknownClaim("q".into()), false), 5);
        assert_eq!(exit_code(&EngineError::MixedFrames, false), 1);
    }

    #[test]
    fn surface_overrides_apply_exact_values() {
        let s = SurfaceOpts {
            surface: "anchor-ring".into(),
            radius: Some("0.5".into()),
            kappa: Some("1".into()),
        };
        let chart = s.resolve().unwrap();
        let r = chart.params.radius.unwrap();
        assert_eq!(r, BigRational::new(1.into(), 2.into()));
        let bad = SurfaceOpts {
            surface: "tube".into(),
            radius: None,
            kappa: Some("1".into()),
        };
        assert!(matches!(
            bad.resolve(),
            Err(EngineError::ParseError(_))
        ));
    }

    #[test]
    fn forms_substitutes_ring_parameters() {
        let s = SurfaceOpts {
            surface: "anchor-ring".into(),
            radius: Some("0.5".into()),
            kappa: Some("1".into()),
        };
        let global = GlobalOpts {
            seed: 0,
            format: FormatArg::Json,
            tol: 1e-6,
            samples: 60,
            numeric: false,
            strict: false,
            budget: crate::operator::DEFAULT_BUDGET,
        };
        let (report, ok) = cmd_forms(&s, &global).unwrap();
        assert!(ok);
        let first = &report.results[0];
        assert_eq!(first["g11"], "delta^2");
        assert_eq!(first["g22"], "1/4");
    }

    #[test]
    fn sphere_radius_two_has_quarter_curvature() {
        let s = SurfaceOpts {
            surface: "sphere".into(),
            radius: Some("2".into()),
            kappa: None,
        };
        let global = GlobalOpts {
            seed: 0,
            format: FormatArg::Json,
            tol: 1e-6,
            samples: 60,
            numeric: false,
            strict: false,
            budget: crate::operator::DEFAULT_BUDGET,
        };
        let (report, _) = cmd_forms(&s, &global).unwrap();
        let last = report.results.last().unwrap();
        assert_eq!(last["gauss_curvature"], "1/4");
    }
}
