use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use wfcrack::fullfield::{mellin_inverse_tol, tip_expansion, FieldSample};
use wfcrack::loading::{LoadCase, Mode};
use wfcrack::perturb::{advance_sif, first_order};
use wfcrack::sif::{
    mode3_sif, mode3_sif_weights, sif_closed_form, sif_quadrature, sif_quadrature_split,
};
use wfcrack::BimaterialParams;

use crate::config::{FieldMethod, RunConfig};
use crate::{CliError, Common};

struct Run {
    cfg: RunConfig,
    tol: f64,
}

impl Run {
    fn new(c: &Common) -> Result<Self, CliError> {
        let mut cfg = RunConfig::load(&c.config)?;
        if let Some(n) = c.grid {
            cfg.sweep.grid = n;
            cfg.field.angles = n;
        }
        if let Some(eta) = &c.eta {
            cfg.sweep.eta = eta.clone();
        }
        let tol = c.tol.unwrap_or(cfg.numerics.tol);
        if !(tol > 0.0) {
            return Err(CliError::Config("--tol must be positive".into()));
        }
        Ok(Self { cfg, tol })
    }
}

fn sink(c: &Common) -> Result<Box<dyn Write>, CliError> {
    Ok(match &c.out {
        Some(path) => Box::new(
            File::create(path).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?,
        ),
        None => Box::new(io::stdout().lock()),
    })
}

/// 17 significant digits, so the text round-trips to the same f64.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_csv(c: &Common, header: &[&str], rows: &[Vec<f64>]) -> Result<(), CliError> {
    let out = |e: csv::Error| CliError::Output(e.to_string());
    let mut w = csv::Writer::from_writer(sink(c)?);
    w.write_record(header).map_err(out)?;
    for row in rows {
        w.write_record(row.iter().map(|&x| num(x))).map_err(out)?;
    }
    w.flush().map_err(|e| CliError::Output(e.to_string()))
}

fn write_report(c: &Common, lines: &[(String, String)]) -> Result<(), CliError> {
    let mut w = sink(c)?;
    let width = lines
        .iter()
        .map(|(k, _)| k.chars().count())
        .max()
        .unwrap_or(0);
    for (k, v) in lines {
        writeln!(w, "{k:<width$}  {v}").map_err(|e| CliError::Output(e.to_string()))?;
    }
    Ok(())
}

fn complex(z: Complex64) -> String {
    format!("{} {}", num(z.re), num(z.im))
}

/// Threads for the sweep; WFCRACK_THREADS caps it, otherwise rayon decides.
fn pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("WFCRACK_THREADS") {
        let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::Config(format!(
                "WFCRACK_THREADS must be a positive integer, got {v:?}"
            ))
        })?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Config(e.to_string()))
}

pub fn params(c: &Common) -> Result<(), CliError> {
    let run = Run::new(c)?;
    let p = run.cfg.materials.params()?;
    let mut lines: Vec<(String, String)> = [
        ("mu_plus", p.plus.mu),
        ("nu_plus", p.plus.nu),
        ("mu_minus", p.minus.mu),
        ("nu_minus", p.minus.nu),
        ("epsilon", p.epsilon),
        ("alpha", p.alpha),
        ("d_star", p.d_star),
        ("gamma", p.gamma),
        ("b", p.b),
        ("d", p.d),
        ("e", p.e),
        ("f", p.f),
        ("eta", p.eta),
        ("d0", p.d0),
        ("e0", p.e0),
        ("nu_equiv", p.nu_equiv),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), num(v)))
    .collect();
    match p.gamma_star() {
        Ok(g) => lines.push(("gamma_star".into(), num(g))),
        Err(_) => lines.push(("gamma_star".into(), "undefined (alpha = 0)".into())),
    }
    let report = p.verify_identities();
    for r in &report.residuals {
        lines.push((format!("residual {}", r.name), num(r.residual)));
    }
    lines.push(("max_residual".into(), num(report.max_residual)));
    write_report(c, &lines)
}

fn plane_strain_case(run: &Run) -> Result<(BimaterialParams, LoadCase), CliError> {
    let p = run.cfg.materials.params()?;
    let lc = run.cfg.load_case()?;
    if lc.mode != Mode::PlaneStrain {
        return Err(CliError::Config(
            "this command needs mode \"plane_strain\"".into(),
        ));
    }
    Ok((p, lc))
}

pub fn sif(c: &Common) -> Result<(), CliError> {
    let run = Run::new(c)?;
    if run.cfg.mode() == Mode::AntiPlane {
        return mode3(c);
    }
    let (p, lc) = plane_strain_case(&run)?;
    let closed = sif_closed_form(&p, &lc).map_err(CliError::numerical)?;
    let quad = sif_quadrature(&p, &lc, run.tol).map_err(CliError::numerical)?;
    let mut lines = vec![
        ("K closed_form".to_string(), complex(closed.k)),
        ("K quadrature".to_string(), complex(quad.k)),
        (
            "K_I K_II".to_string(),
            format!("{} {}", num(closed.k1()), num(closed.k2())),
        ),
    ];
    let mut delta = (closed.k - quad.k).norm();
    if !lc.allow_unbalanced {
        lines.push(("A closed_form".into(), complex(closed.a)));
        lines.push(("A quadrature".into(), complex(quad.a)));
        if let Some(b) = closed.b {
            lines.push(("B closed_form".into(), complex(b)));
        }
        delta = delta.max((closed.a - quad.a).norm());
    }
    lines.push(("max_path_delta".into(), num(delta)));
    write_report(c, &lines)
}

pub fn mode3(c: &Common) -> Result<(), CliError> {
    let run = Run::new(c)?;
    let p = run.cfg.materials.params()?;
    let lc = run.cfg.load_case()?;
    if lc.mode != Mode::AntiPlane {
        return Err(CliError::Config("mode3 needs mode \"antiplane\"".into()));
    }
    let closed = mode3_sif(&p, &lc).map_err(CliError::numerical)?;
    let weights = mode3_sif_weights(&p, &lc, run.tol).map_err(CliError::numerical)?;
    let delta = (closed.k3 - weights.k3)
        .abs()
        .max((closed.a3 - weights.a3).abs());
    write_report(
        c,
        &[
            ("K_III closed_form".into(), num(closed.k3)),
            ("K_III weights".into(), num(weights.k3)),
            ("A_III closed_form".into(), num(closed.a3)),
            ("A_III weights".into(), num(weights.a3)),
            ("max_path_delta".into(), num(delta)),
        ],
    )
}

pub fn sweep(c: &Common) -> Result<(), CliError> {
    let run = Run::new(c)?;
    let s = &run.cfg.sweep;
    if s.grid < 2 || !(s.b_max > 0.0 && s.b_max < 1.0) || s.eta.is_empty() {
        return Err(CliError::Config(
            "sweep needs grid >= 2, 0 < b_max < 1 and at least one eta".into(),
        ));
    }
    let (nu_plus, nu_minus) = run.cfg.materials.poisson();
    let points: Vec<(f64, f64)> = s
        .eta
        .iter()
        .flat_map(|&eta| (0..s.grid).map(move |i| (eta, s.b_max * i as f64 / (s.grid - 1) as f64)))
        .collect();
    let tol = run.tol;
    // Rows come back in grid order whatever the completion order.
    let rows: Result<Vec<Vec<f64>>, CliError> = pool()?.install(|| {
        points
            .par_iter()
            .map(|&(eta, ratio)| {
                let p =
                    BimaterialParams::from_eta(eta, nu_plus, nu_minus).map_err(CliError::config)?;
                let lc = LoadCase::three_point_case(s.force, s.a, ratio * s.a)
                    .map_err(CliError::config)?;
                let split =
                    sif_quadrature_split(&p, &lc, tol, None).map_err(CliError::numerical)?;
                let (ks, ka) = (split.symmetric, split.skew);
                Ok(vec![
                    eta,
                    ratio,
                    ks.k.re,
                    ks.k.im,
                    ka.k.re,
                    ka.k.im,
                    ks.a.re,
                    ks.a.im,
                    ka.a.re,
                    ka.a.im,
                    ka.k.re / ks.k.re,
                ])
            })
            .collect()
    });
    write_csv(
        c,
        &[
            "eta", "b_over_a", "KS_I", "KS_II", "KA_I", "KA_II", "AS_I", "AS_II", "AA_I", "AA_II",
            "ratio_KI",
        ],
        &rows?,
    )
}

pub fn perturb(c: &Common) -> Result<(), CliError> {
    let run = Run::new(c)?;
    let (p, lc) = plane_strain_case(&run)?;
    // The prediction needs A, which only exists for balanced loads.
    first_order(&p, &lc).map_err(CliError::numerical)?;
    let mut rows = Vec::new();
    for &fraction in &run.cfg.perturb.ladder {
        if !(fraction > 0.0 && fraction < 1.0) {
            return Err(CliError::Config(format!(
                "perturb ladder entries must lie in (0, 1), got {fraction}"
            )));
        }
        let r = advance_sif(&p, &lc, fraction * lc.gap).map_err(CliError::numerical)?;
        let predicted = r.k_predicted(&p);
        rows.push(vec![
            r.a,
            r.k_star.re,
            r.k_star.im,
            predicted.re,
            predicted.im,
            (r.k_star - predicted).norm(),
        ]);
    }
    write_csv(
        c,
        &[
            "a", "ReK_star", "ImK_star", "ReK_pred", "ImK_pred", "abs_err",
        ],
        &rows,
    )
}

pub fn field(c: &Common) -> Result<(), CliError> {
    let run = Run::new(c)?;
    let (p, lc) = plane_strain_case(&run)?;
    let spec = &run.cfg.field;
    if spec.angles < 2 || spec.radii.iter().any(|&r| !(r > 0.0)) {
        return Err(CliError::Config(
            "field needs angles >= 2 and positive radii".into(),
        ));
    }
    let thetas: Vec<f64> = (0..spec.angles)
        .map(|i| -PI + 2.0 * PI * i as f64 / (spec.angles - 1) as f64)
        .collect();
    let series = match spec.method {
        FieldMethod::Series => Some(tip_expansion(&p, &lc).map_err(CliError::numerical)?),
        FieldMethod::Mellin => None,
    };
    let mut rows = Vec::new();
    for &r in &spec.radii {
        for &theta in &thetas {
            let f: FieldSample = match &series {
                Some(e) => e.field(r, theta, run.cfg.numerics.terms),
                None => mellin_inverse_tol(r, theta, &p, &lc, run.cfg.numerics.omega, run.tol),
            }
            .map_err(CliError::numerical)?;
            rows.push(vec![
                r,
                theta,
                f.sigma_rr(),
                f.sigma_rt(),
                f.sigma_tt(),
                f.displacement[0],
                f.displacement[1],
            ]);
        }
    }
    write_csv(
        c,
        &[
            "r",
            "theta",
            "sigma_rr",
            "sigma_rtheta",
            "sigma_thetatheta",
            "u_r",
            "u_theta",
        ],
        &rows,
    )
}
