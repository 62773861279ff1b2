use rayon::prelude::*;
use serde::Deserialize;
use std::f64::consts::TAU;
use std::path::PathBuf;

use dirac_carousel::dirac::{
    eigenvalues, hs_norm_squared, DiracOperator, DrivingPath, EndpointClass, PointSample, Provenance,
    SolverConfig,
};
use dirac_carousel::ensembles::{
    airy_noise, airy_points, bessel_operator, circular_beta_coeffs, derive_seed, hard_edge_sl_oracle,
    hua_pickrell_coeffs, hua_pickrell_operator, killip_stoiciu_sample, riccati_oracle, schrodinger_operator,
    sine_beta_operator, AiryConfig, AiryNoise, GridSpec, KsConfig, TimeChange,
};
use dirac_carousel::geometry::{BoundaryPoint, PlanePoint};
use dirac_carousel::io::{
    fmt_f64, pooled_spectrum_csv, spectrum_csv, summary_csv, CoefficientFile, SpectrumDocument, SummaryRow,
};
use dirac_carousel::szego::{eigen_angles_oracle, unitary_dirac_operator, UnitaryCoefficients, VerblunskyCoefficients};
use dirac_carousel::validate::{
    bessel_default_grid, bessel_squared, clock_operator_instance, in_suite, run_criterion, sine_solver, Budget,
    Suite, CRITERIA, SINE_CELLS,
};
use dirac_carousel::Error;

use crate::manifest::{emit, sibling, RunManifest};
use crate::{
    BudgetArg, Cli, Command, FiniteArgs, FiniteKind, Format, Model, OracleArgs, OracleKind, SampleArgs, SuiteArg,
    ValidateArgs,
};

/// Mesh used to bracket Killip–Stoiciu points.
const KS_MESH: f64 = 0.25;
const AIRY_TOL: f64 = 1e-9;

pub fn run(cli: &Cli) -> Result<(), crate::Failure> {
    match &cli.command {
        Command::Sample(a) => sample(cli, a),
        Command::Finite(a) => finite(cli, a),
        Command::Validate(a) => validate(cli, a),
        Command::Oracle(a) => oracle(cli, a),
    }
}

fn usage(m: impl Into<String>) -> crate::Failure {
    crate::Failure::Usage(m.into())
}

fn grid_label(g: &GridSpec) -> String {
    let kind = match g.time_change {
        TimeChange::Log => "log",
        TimeChange::Identity => "identity",
    };
    format!("{kind}:{}:eps={:e}", g.cells, g.eps)
}

fn path_grid(cli: &Cli, base: GridSpec) -> GridSpec {
    let mut g = base;
    if let Some(c) = cli.common.grid {
        g.cells = c;
    }
    if let Some(e) = cli.common.eps {
        g.eps = e;
    }
    g
}

fn window(v: &[f64]) -> Result<(f64, f64), crate::Failure> {
    match v {
        [a, b] if a < b && a.is_finite() && b.is_finite() => Ok((*a, *b)),
        _ => Err(usage(format!("window must be two increasing finite numbers, got {v:?}"))),
    }
}

fn spectrum_body(cli: &Cli, samples: &[PointSample], w: (f64, f64), prov: &Provenance, pooled: bool) -> Result<String, Error> {
    Ok(match cli.common.format {
        Format::Csv if pooled => pooled_spectrum_csv(samples),
        Format::Csv => spectrum_csv(&samples[0]),
        Format::Json => SpectrumDocument::from_samples(samples, w, prov).to_json()? + "\n",
    })
}

fn par_paths<F>(paths: usize, seed: u64, f: F) -> Result<Vec<PointSample>, Error>
where
    F: Fn(u64) -> Result<PointSample, Error> + Sync,
{
    (0..paths as u64).into_par_iter().map(|i| f(derive_seed(seed, i))).collect()
}

fn sample(cli: &Cli, a: &SampleArgs) -> Result<(), crate::Failure> {
    let w = window(&a.window)?;
    if a.paths == 0 {
        return Err(usage("--paths must be at least 1"));
    }
    let seed = cli.common.seed;
    let cfg = sine_solver();
    let mut side = Vec::new();
    let (samples, grid) = match a.model {
        Model::Sine => {
            let g = path_grid(cli, GridSpec::log(SINE_CELLS));
            let s = par_paths(a.paths, seed, |s| eigenvalues(&sine_beta_operator(a.beta, &g, s)?, w, &cfg))?;
            (s, Some(grid_label(&g)))
        }
        Model::Hp => {
            let g = path_grid(cli, GridSpec::log(SINE_CELLS));
            let s = par_paths(a.paths, seed, |s| {
                eigenvalues(&hua_pickrell_operator(a.beta, a.delta, &g, s)?, w, &cfg)
            })?;
            (s, Some(grid_label(&g)))
        }
        Model::Schrodinger => {
            let g = path_grid(cli, GridSpec::identity(SINE_CELLS));
            let s = par_paths(a.paths, seed, |s| eigenvalues(&schrodinger_operator(a.nu, &g, s)?, w, &cfg))?;
            (s, Some(grid_label(&g)))
        }
        Model::Bessel => {
            let g = path_grid(cli, bessel_default_grid());
            let s = par_paths(a.paths, seed, |s| {
                let op = bessel_operator(a.beta, a.a, &g, s)?.operator()?;
                let prov = Provenance::new("bessel", Some(s), Some(grid_label(&g)));
                match a.k {
                    Some(k) => Ok(PointSample::new(bessel_squared(&op, k)?, (0.0, f64::INFINITY), prov)),
                    None => {
                        if w.1 <= 0.0 {
                            return Err(Error::InvalidInput("hard-edge points are positive".into()));
                        }
                        let mu = (4.0 * w.0.max(0.0).sqrt(), 4.0 * w.1.sqrt());
                        let d = eigenvalues(&op, mu, &SolverConfig { bisection_tol: 1e-11, ..Default::default() })?;
                        let pts = d.points.iter().filter(|m| **m > 0.0).map(|m| (m / 4.0).powi(2)).collect();
                        Ok(PointSample::new(pts, w, prov))
                    }
                }
            })?;
            (s, Some(grid_label(&g)))
        }
        Model::Airy => {
            let acfg = AiryConfig::default();
            let noises: Vec<AiryNoise> = (0..a.paths as u64)
                .into_par_iter()
                .map(|i| airy_noise(a.beta, &acfg, derive_seed(seed, i)))
                .collect::<Result<_, _>>()?;
            let s: Vec<PointSample> =
                noises.par_iter().map(|n| airy_points(n, w, AIRY_TOL)).collect::<Result<_, _>>()?;
            if let Some(p) = &a.noise_out {
                side.push((p.clone(), serde_json::to_string(&noises[0]).map_err(Error::from)? + "\n"));
            }
            (s, Some(format!("step={:e},horizon={}", acfg.step, acfg.horizon)))
        }
        Model::Ks => {
            let mut kcfg = KsConfig::default();
            if let Some(e) = cli.common.eps {
                kcfg.eps0 = e;
            }
            let s = par_paths(a.paths, seed, |s| Ok(killip_stoiciu_sample(a.beta, w, KS_MESH, s, &kcfg)?.points))?;
            (s, Some(format!("mesh={KS_MESH},eps0={:e}", kcfg.eps0)))
        }
    };
    let name = format!("{:?}", a.model).to_lowercase();
    let prov = Provenance::new(&name, Some(seed), grid.clone());
    let body = spectrum_body(cli, &samples, w, &prov, true)?;
    emit(cli, RunManifest::new(cli, "sample", grid), &body, &side)
}

fn finite(cli: &Cli, a: &FiniteArgs) -> Result<(), crate::Failure> {
    if a.n == 0 || a.periods == 0 {
        return Err(usage("--n and --periods must be at least 1"));
    }
    let seed = cli.common.seed;
    let (op, coeffs) = match a.kind {
        FiniteKind::Circular => {
            let c = circular_beta_coeffs(a.n, a.beta, seed)?;
            let file = CoefficientFile::new(c.as_slice());
            (unitary_dirac_operator(&UnitaryCoefficients::Standard(c))?, file)
        }
        FiniteKind::HuaPickrell => {
            let g = hua_pickrell_coeffs(a.n, a.beta, a.delta, seed)?;
            let file = CoefficientFile::deformed(g.as_slice());
            (unitary_dirac_operator(&UnitaryCoefficients::Deformed(g))?, file)
        }
    };
    let end = TAU * (a.n * a.periods) as f64;
    let w = (0.0, end);
    let s = eigenvalues(&op, w, &SolverConfig::default())?;
    let pts: Vec<f64> = s.points.into_iter().filter(|p| *p < end).collect();
    let prov = Provenance::new(
        match a.kind {
            FiniteKind::Circular => "circular",
            FiniteKind::HuaPickrell => "hua-pickrell",
        },
        Some(seed),
        Some(format!("n={}", a.n)),
    );
    let sample = PointSample::new(pts, w, prov.clone());
    let body = spectrum_body(cli, &[sample], w, &prov, false)?;
    let coeff_path = a.coeffs.clone().or_else(|| cli.common.out.as_ref().map(|o| sibling(o, "coeffs.json")));
    let side: Vec<(PathBuf, String)> = match coeff_path {
        Some(p) => vec![(p, coeffs.to_json()? + "\n")],
        None => Vec::new(),
    };
    emit(cli, RunManifest::new(cli, "finite", prov.grid), &body, &side)
}

fn validate(cli: &Cli, a: &ValidateArgs) -> Result<(), crate::Failure> {
    let suite = match a.suite {
        SuiteArg::Deterministic => Suite::Deterministic,
        SuiteArg::Statistical => Suite::Statistical,
        SuiteArg::All => Suite::All,
    };
    let budget = match a.budget {
        BudgetArg::Small => Budget::Small,
        BudgetArg::Full => Budget::Full,
    };
    if let Some(bad) = a.only.iter().find(|i| !CRITERIA.iter().any(|c| c.0 == **i)) {
        return Err(usage(format!("no criterion {bad}")));
    }
    let ids: Vec<u32> = CRITERIA
        .iter()
        .map(|c| c.0)
        .filter(|&i| in_suite(i, suite) && (a.only.is_empty() || a.only.contains(&i)))
        .collect();
    let mut reports = Vec::new();
    for id in ids {
        let r = run_criterion(id, budget, cli.common.seed);
        eprintln!("criterion {id:>2} {} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
        reports.push(r);
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    let body = match cli.common.format {
        Format::Json => serde_json::to_string_pretty(&reports).map_err(Error::from)? + "\n",
        Format::Csv => {
            let rows: Vec<SummaryRow> = reports
                .iter()
                .flat_map(|r| {
                    if r.rows.is_empty() {
                        vec![SummaryRow {
                            criterion: r.id,
                            model: "error".into(),
                            window: None,
                            paths: 0,
                            estimate: f64::NAN,
                            standard_error: None,
                            threshold: r.threshold,
                            passed: false,
                        }]
                    } else {
                        r.rows.clone()
                    }
                })
                .collect();
            summary_csv(&rows)
        }
    };
    emit(cli, RunManifest::new(cli, "validate", None), &body, &[])?;
    if failed > 0 {
        Err(crate::Failure::Validation(failed))
    } else {
        Ok(())
    }
}

/// Operator file for `oracle hs-norm`: a piecewise-constant path with
/// boundary points (`null` is ∞).
#[derive(Debug, Deserialize)]
struct OperatorFile {
    grid: Vec<f64>,
    values: Vec<[f64; 2]>,
    #[serde(default)]
    weight: Option<Vec<f64>>,
    eta0: Option<f64>,
    eta1: Option<f64>,
}

fn boundary(x: Option<f64>) -> BoundaryPoint {
    x.map(BoundaryPoint::Real).unwrap_or(BoundaryPoint::Infinity)
}

fn read_operator(p: &PathBuf) -> Result<DiracOperator, Error> {
    let f: OperatorFile = serde_json::from_str(&std::fs::read_to_string(p)?)?;
    let values = f.values.iter().map(|[x, y]| PlanePoint::new(*x, *y)).collect::<Result<Vec<_>, _>>()?;
    let mut path = DrivingPath::piecewise_constant(f.grid, values)?;
    if let Some(w) = f.weight {
        path = path.with_weight(w)?;
    }
    let path = path.with_tail_rule(EndpointClass::LimitCircle);
    DiracOperator::with_boundary_points(path, boundary(f.eta0), boundary(f.eta1))
}

fn single_column(cli: &Cli, header: &str, xs: &[f64]) -> Result<String, Error> {
    Ok(match cli.common.format {
        Format::Csv => {
            let mut s = format!("{header}\n");
            for x in xs {
                s.push_str(&fmt_f64(*x));
                s.push('\n');
            }
            s
        }
        Format::Json => serde_json::to_string_pretty(&serde_json::json!({ header: xs }))? + "\n",
    })
}

fn oracle(cli: &Cli, a: &OracleArgs) -> Result<(), crate::Failure> {
    let need_input = || a.input.clone().ok_or_else(|| usage("this oracle needs --input"));
    let (body, grid) = match a.kind {
        OracleKind::EigenAngles => {
            let f = CoefficientFile::from_json(&std::fs::read_to_string(need_input()?)?)?;
            if f.deformed {
                return Err(usage("eigen-angles needs Verblunsky coefficients, the file holds deformed ones"));
            }
            let angles = eigen_angles_oracle(&VerblunskyCoefficients::new(f.complex())?)?;
            (single_column(cli, "angle", angles.as_slice())?, None)
        }
        OracleKind::HsNorm => {
            let op = match &a.input {
                Some(p) => read_operator(p)?,
                None => clock_operator_instance()?,
            };
            let hs = hs_norm_squared(&op, &SolverConfig::default())?;
            (single_column(cli, "hs_norm_squared", &[hs])?, None)
        }
        OracleKind::SlHardEdge => {
            let g = path_grid(cli, bessel_default_grid());
            let sample = bessel_operator(a.beta, a.a, &g, derive_seed(cli.common.seed, 0))?;
            let ev = hard_edge_sl_oracle(&sample, a.k)?;
            (single_column(cli, "lambda", &ev)?, Some(grid_label(&g)))
        }
        OracleKind::Riccati => {
            let noise: AiryNoise = match &a.input {
                Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?).map_err(Error::from)?,
                None => airy_noise(a.beta, &AiryConfig::default(), derive_seed(cli.common.seed, 0))?,
            };
            let counts: Vec<i64> = a.lambda.iter().map(|l| riccati_oracle(&noise, *l)).collect::<Result<_, _>>()?;
            let body = match cli.common.format {
                Format::Csv => {
                    let mut s = String::from("lambda,count\n");
                    for (l, c) in a.lambda.iter().zip(&counts) {
                        s.push_str(&format!("{},{c}\n", fmt_f64(*l)));
                    }
                    s
                }
                Format::Json => {
                    serde_json::to_string_pretty(&serde_json::json!({ "lambda": a.lambda, "count": counts }))
                        .map_err(Error::from)?
                        + "\n"
                }
            };
            (body, Some(format!("step={:e},horizon={}", noise.config.step, noise.config.horizon)))
        }
    };
    emit(cli, RunManifest::new(cli, "oracle", grid), &body, &[])
}
