//! The six workflows. Inputs arrive in Hz and are converted to angular
//! units; outputs are reported in Hz again.

use std::f64::consts::PI;
use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use bosonic_sw::algebra::{CouplingPolynomial, OperatorPolynomial, Params};
use bosonic_sw::circuit::{kerr_free_flux, taylor_couplings, DeviceKind, DeviceSpec, FluxAxis};
use bosonic_sw::fock::{
    cubic_phase_sweep, delta_e, optimize_g3, prepare_cubic_phase, reported_energies, wigner, wigner_integral, Averaging,
    CubicPhaseProblem, KerrOscillator, QuadratureMatrices,
};
use bosonic_sw::sw::{effective_hamiltonian, kerr_free_point, perturbative_energies, EffectiveExpansion, PerturbationProblem};

use crate::config::{kerr_free_g3, RunConfig, Workflow};
use crate::output::{num, Artifacts};
use crate::Emit;

const TWO_PI: f64 = 2.0 * PI;

/// Runs the configured workflow and returns a short summary for the terminal.
pub fn dispatch(config: &RunConfig, emit: Emit, out: &mut Artifacts) -> Result<String> {
    if emit != Emit::Csv && config.workflow != Workflow::EffectiveHamiltonian {
        bail!("--emit {} applies only to effective-hamiltonian", emit.name());
    }
    match config.workflow {
        Workflow::ExpandPotential => expand_potential(config, out),
        Workflow::EffectiveHamiltonian => effective(config, emit, out),
        Workflow::Spectrum => spectrum(config, out),
        Workflow::KerrOscillations => kerr_oscillations(config, out),
        Workflow::CubicPhase => cubic_phase(config, out),
        Workflow::OptimizeG3 => optimize(config, out),
    }
}

/// `n` evenly spaced points from `lo` to `hi`; a single point sits at `lo`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn hz(x: f64) -> f64 {
    x / TWO_PI
}

fn expand_potential(config: &RunConfig, out: &mut Artifacts) -> Result<String> {
    let e_j = config.omega("e_j");
    let n = config.integer("junctions") as u32;
    let template = match config.text("device") {
        "snail" => DeviceSpec::snail(config.real("alpha"), n, config.real("phi_ext"), e_j, config.real("phi_zpf"))?,
        _ => DeviceSpec::ats(
            config.real("alpha"),
            n,
            config.real("phi_sigma"),
            config.real("phi_delta"),
            e_j,
            config.real("phi_zpf"),
        )?,
    };
    let (axis, fluxes) = match config.text("scan_axis") {
        "none" => {
            let (axis, at) = match template.kind {
                DeviceKind::Snail { phi_ext } => (FluxAxis::External, phi_ext),
                DeviceKind::Ats { phi_sigma, .. } => (FluxAxis::Sigma, phi_sigma),
            };
            (axis, vec![at])
        }
        name => {
            let axis = match name {
                "external" => FluxAxis::External,
                "sigma" => FluxAxis::Sigma,
                _ => FluxAxis::Delta,
            };
            (axis, linspace(config.real("scan_min"), config.real("scan_max"), config.integer("scan_points")))
        }
    };
    let omega_r = config.omega("f_r");
    let order = config.integer("taylor_order");
    let rows: Vec<_> = fluxes
        .iter()
        .map(|&x| {
            let spec = template.with_flux(axis, x)?;
            taylor_couplings(&spec, order).with_context(|| format!("expanding the potential at flux {x}"))
        })
        .collect::<Result<_>>()?;
    let scanning = fluxes.len() > 1;
    let roots = if scanning {
        let scan = kerr_free_flux(&template, axis, (fluxes[0], fluxes[fluxes.len() - 1]), fluxes.len(), omega_r)?;
        let mut report = format!("flux axis: {axis:?}\nresonator frequency: {} Hz\n", num(config.hz("f_r")));
        match &scan.diagnostic {
            Some(d) => writeln!(report, "no roots: {d}")?,
            None => {
                for r in &scan.roots {
                    writeln!(report, "kerr-free flux: {}", num(*r))?;
                }
            }
        }
        out.text("kerr_free.txt", &report)?;
        scan.roots
    } else {
        Vec::new()
    };
    let flagged = |i: usize| {
        let lo = fluxes[i];
        match fluxes.get(i + 1) {
            Some(&hi) => roots.iter().any(|&r| r >= lo && r < hi),
            None => roots.contains(&lo),
        }
    };
    let columns = [
        "flux",
        "phi_min",
        "c2_hz",
        "c3_hz",
        "c4_hz",
        "c5_hz",
        "c6_hz",
        "g3_hz",
        "g4_hz",
        "g5_hz",
        "g6_hz",
        "kerr_free_residual_hz",
        "kerr_free_flag",
    ];
    out.csv(
        "couplings.csv",
        &columns,
        rows.iter().enumerate().map(|(i, c)| {
            let mut row = vec![num(fluxes[i]), num(c.phi_min)];
            row.extend((2..=6).map(|k| num(hz(c.taylor[k]))));
            row.extend((3..=6).map(|k| num(hz(c.g(k)))));
            row.push(num(hz(c.g(4) - 5.0 * c.g(3) * c.g(3) / omega_r)));
            row.push(u8::from(flagged(i)).to_string());
            row
        }),
    )?;
    Ok(match (scanning, roots.len()) {
        (false, _) => format!("couplings at flux {}: g3 = {} Hz, g4 = {} Hz", num(fluxes[0]), num(hz(rows[0].g(3))), num(hz(rows[0].g(4)))),
        (true, 0) => format!("{} flux points, no Kerr-free point", fluxes.len()),
        (true, k) => format!("{} flux points, {k} Kerr-free point(s)", fluxes.len()),
    })
}

fn free_hamiltonian(v: &OperatorPolynomial) -> Result<OperatorPolynomial> {
    let modes = v.max_mode().map_or(1, |m| m as usize + 1);
    let terms: Vec<String> = (0..modes)
        .map(|j| if j == 0 { "w*ad a".to_string() } else { format!("w{j}*ad{j} a{j}") })
        .collect();
    Ok(terms.join(" + ").parse()?)
}

fn numeric_params(config: &RunConfig) -> Option<Params> {
    ["f_r", "g3", "g4"].iter().all(|k| config.is_set(k)).then(|| {
        Params::single_mode(config.omega("f_r"), &[(3, config.omega("g3")), (4, config.omega("g4"))])
    })
}

fn evaluate_hz(c: &CouplingPolynomial, params: Option<&Params>) -> Result<String> {
    match params {
        Some(p) => Ok(num(hz(c.evaluate(p)?))),
        None => Ok(String::new()),
    }
}

fn phi_degree(c: &CouplingPolynomial) -> String {
    c.max_phi_degree().map_or_else(String::new, |d| d.to_string())
}

fn effective(config: &RunConfig, emit: Emit, out: &mut Artifacts) -> Result<String> {
    let order = config.integer("order");
    let v: OperatorPolynomial = config.text("v").parse().context("parsing v")?;
    let problem = PerturbationProblem::new(free_hamiltonian(&v)?, v, order)?;
    let e = effective_hamiltonian(&problem)?;
    let params = numeric_params(config);
    let single_mode = problem.frequencies().modes() == 1;
    match emit {
        Emit::Symbolic => {
            let text = symbolic(&e);
            out.text("effective_hamiltonian.txt", &text)?;
            Ok(text)
        }
        Emit::Coefficients => {
            let text = if single_mode {
                coefficient_table(&e, params.as_ref())?
            } else {
                diagonal_table(&e)
            };
            out.text("coefficients.txt", &text)?;
            Ok(text)
        }
        Emit::Csv if single_mode => {
            let consistent = e.consistent_coefficients(order)?;
            let full = e.diagonal_coefficients()?;
            let rows = (0..full.len())
                .map(|k| {
                    let c = consistent.get(k).cloned().unwrap_or_default();
                    Ok(vec![
                        k.to_string(),
                        c.to_string(),
                        full[k].to_string(),
                        phi_degree(&full[k]),
                        evaluate_hz(&c, params.as_ref())?,
                        evaluate_hz(&full[k], params.as_ref())?,
                    ])
                })
                .collect::<Result<Vec<_>>>()?;
            out.csv(
                "coefficients.csv",
                &["k", "c_k_complete_degree", "c_k_full", "max_phi_degree", "c_k_complete_degree_hz", "c_k_full_hz"],
                rows,
            )?;
            Ok(format!("{} coefficients through order {order}", full.len()))
        }
        Emit::Csv => {
            let (diag, _) = e.effective().split_diagonal();
            let rows: Vec<Vec<String>> = diag.terms().map(|(m, c)| vec![m.to_string(), c.to_string(), phi_degree(c)]).collect();
            let count = rows.len();
            out.csv("diagonal_terms.csv", &["monomial", "coefficient", "max_phi_degree"], rows)?;
            Ok(format!("{count} diagonal terms through order {order}"))
        }
    }
}

fn symbolic(e: &EffectiveExpansion) -> String {
    let mut s = String::new();
    for m in 1..=e.order() {
        let _ = writeln!(s, "S({m}) = {}", e.generator(m));
        let _ = writeln!(s, "H({m}) = {}", e.diagonal_term(m));
    }
    let _ = writeln!(s, "H_eff = {}", e.effective());
    s
}

fn coefficient_table(e: &EffectiveExpansion, params: Option<&Params>) -> Result<String> {
    let order = e.order();
    let consistent = e.consistent_coefficients(order)?;
    let full = e.diagonal_coefficients()?;
    let mut s = format!(
        "c_k multiplies ad^k a^k; complete terms have phi-degree <= {}\n",
        e.complete_phi_degree()
    );
    for (k, c) in full.iter().enumerate() {
        let complete = consistent.get(k).cloned().unwrap_or_default();
        writeln!(s, "c{k} = {complete}")?;
        if let Some(p) = params {
            writeln!(s, "c{k} / 2pi = {} Hz", num(hz(complete.evaluate(p)?)))?;
        }
        if *c != complete {
            writeln!(s, "c{k} (all generated terms) = {c}")?;
            if let Some(p) = params {
                writeln!(s, "c{k} (all generated terms) / 2pi = {} Hz", num(hz(c.evaluate(p)?)))?;
            }
        }
    }
    Ok(s)
}

fn diagonal_table(e: &EffectiveExpansion) -> String {
    let (diag, _) = e.effective().split_diagonal();
    let mut s = String::new();
    for (m, c) in diag.terms() {
        let _ = writeln!(s, "{m}: {c}");
    }
    s
}

fn spectrum(config: &RunConfig, out: &mut Artifacts) -> Result<String> {
    let (omega, g3, g4) = (config.omega("f_r"), config.omega("g3"), config.omega("g4"));
    let exact = reported_energies(&QuadratureMatrices::new(config.integer("dim")).hamiltonian(omega, g3, g4));
    let order = config.integer("order");
    let e = effective_hamiltonian(&PerturbationProblem::quadrature_nonlinearity(&[3, 4], order)?)?;
    let pert = perturbative_energies(&e, exact.len() - 1, &Params::single_mode(omega, &[(3, g3), (4, g4)]))?;
    let (de_exact, de_pert) = (delta_e(&exact), delta_e(&pert));
    out.csv(
        "spectrum.csv",
        &["n", "e_exact_hz", "e_pert_hz", "de_exact_hz", "de_pert_hz"],
        (0..exact.len()).map(|n| {
            vec![
                n.to_string(),
                num(hz(exact[n])),
                num(hz(pert[n])),
                num(hz(de_exact[n])),
                num(hz(de_pert[n])),
            ]
        }),
    )?;
    let worst = de_exact.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let gap = de_exact.iter().zip(&de_pert).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    Ok(format!(
        "{} levels; max |dE| = {} Hz; max exact vs order-{order} difference = {} Hz",
        exact.len(),
        num(hz(worst)),
        num(hz(gap))
    ))
}

fn averaging(config: &RunConfig) -> Averaging {
    Averaging {
        periods: config.real("window_periods"),
        samples_per_period: config.integer("samples_per_period"),
        polyorder: config.integer("polyorder"),
    }
}

fn kerr_oscillations(config: &RunConfig, out: &mut Artifacts) -> Result<String> {
    let avg = averaging(config);
    let t_rev = PI / (6.0 * config.omega("revival_g4"));
    let t_end = config.real("t_end_revivals") * t_rev;
    let (g3s, g4s) = (config.hz_list("g3"), config.hz_list("g4"));
    let mut summary = Vec::new();
    for (i, (&g3, &g4)) in g3s.iter().zip(&g4s).enumerate() {
        let osc = KerrOscillator {
            omega: config.omega("f_r"),
            g3: TWO_PI * g3,
            g4: TWO_PI * g4,
            alpha0: config.real("alpha0"),
            dim: config.integer("dim"),
        };
        let times = osc.time_grid(t_end, avg.samples_per_period);
        let (rec, smooth) = osc.evolve(&times, avg)?;
        let name = format!("evolution_{}.csv", i + 1);
        out.csv(
            &name,
            &["t_s", "t_over_t_revival", "abs_exp_a", "abs_exp_a_smoothed"],
            times.iter().enumerate().map(|(k, &t)| {
                vec![num(t), num(t / t_rev), num(rec.abs_expect_a[k]), num(smooth[k])]
            }),
        )?;
        summary.push(format!(
            "{name}: g3 = {} Hz, g4 = {} Hz, final smoothed |<a>| = {:.4}",
            num(g3),
            num(g4),
            smooth.last().copied().unwrap_or(f64::NAN)
        ));
    }
    Ok(summary.join("\n"))
}

fn optimize(config: &RunConfig, out: &mut Artifacts) -> Result<String> {
    let template = KerrOscillator {
        omega: config.omega("f_r"),
        g3: 0.0,
        g4: config.omega("g4"),
        alpha0: config.real("alpha0"),
        dim: config.integer("dim"),
    };
    let t = config.real("t_revivals") * template.revival_time()?;
    let best = optimize_g3(
        &template,
        (config.omega("g3_min"), config.omega("g3_max")),
        config.integer("g3_points"),
        t,
        averaging(config),
    )?;
    out.csv(
        "g3_scan.csv",
        &["g3_hz", "abs_exp_a_smoothed"],
        best.grid.iter().map(|&(g3, v)| vec![num(hz(g3)), num(v)]),
    )?;
    let (f_r, g4) = (config.hz("f_r"), config.hz("g4"));
    let mut report = format!(
        "evaluation time: {} s\noptimum g3: {} Hz\nsmoothed |<a>| at optimum: {}\n",
        num(t),
        num(hz(best.g3)),
        num(best.value)
    );
    if let Some(d) = &best.diagnostic {
        writeln!(report, "warning: {d}")?;
    }
    if g4 > 0.0 {
        let lead = kerr_free_g3(f_r, g4);
        writeln!(report, "leading-order Kerr-free g3 = sqrt(g4*f_r/5): {} Hz", num(lead))?;
        let e = effective_hamiltonian(&PerturbationProblem::quadrature_nonlinearity(&[3, 4], 4)?)?;
        let relation = kerr_free_point(&e, 4)?;
        let bracket = (0.5 * TWO_PI * lead, 1.5 * TWO_PI * lead);
        match relation.solve_g3(template.g4, template.omega, bracket) {
            Ok(g3) => writeln!(report, "order-4 Kerr-free g3: {} Hz", num(hz(g3)))?,
            Err(err) => writeln!(report, "order-4 Kerr-free g3: {err}")?,
        }
    } else {
        writeln!(report, "no real Kerr-free g3 for g4 <= 0")?;
    }
    out.text("report.txt", &report)?;
    Ok(report)
}

fn cubic_phase(config: &RunConfig, out: &mut Artifacts) -> Result<String> {
    let problem = CubicPhaseProblem {
        omega_r: config.omega("f_r"),
        g4_dc: config.omega("g4_dc"),
        g3_ac: config.omega("g3_ac"),
        gamma: config.real("gamma"),
        r: config.real("r"),
        dim: config.integer("dim"),
        tol: config.real("tol"),
    };
    let grid = |lo: &str, hi: &str, n: &str| -> Vec<f64> {
        linspace(config.omega(lo), config.omega(hi), config.integer(n))
    };
    let deltas = grid("delta_min", "delta_max", "delta_points");
    let g3_dc = grid("g3_dc_min", "g3_dc_max", "g3_dc_points");
    let sweep = cubic_phase_sweep(&problem, &deltas, &g3_dc)?;
    out.csv(
        "sweep.csv",
        &["delta_hz", "g3_dc_hz", "error", "error_free_rotation", "norm_drift"],
        (0..deltas.len()).flat_map(|i| {
            let sweep = &sweep;
            (0..g3_dc.len()).map(move |j| {
                vec![
                    num(hz(sweep.deltas[i])),
                    num(hz(sweep.g3_dc[j])),
                    num(sweep.error[(i, j)]),
                    num(sweep.error_free_rotation[(i, j)]),
                    num(sweep.norm_drift[(i, j)]),
                ]
            })
        }),
    )?;
    let best = prepare_cubic_phase(
        &CubicPhaseProblem { dim: sweep.dim, ..problem },
        sweep.optimum_delta(),
        sweep.optimum_g3_dc(),
    )?;
    let extent = config.real("wigner_extent");
    let axis = linspace(-extent, extent, config.integer("wigner_points"));
    let w = wigner(&best.state, &axis, &axis)?;
    out.csv(
        "wigner.csv",
        &["x", "p", "w"],
        (0..axis.len()).flat_map(|i| {
            let (axis, w) = (&axis, &w);
            (0..axis.len()).map(move |j| vec![num(axis[i]), num(axis[j]), num(w[(i, j)])])
        }),
    )?;
    let mut report = String::new();
    writeln!(report, "optimum delta: {} Hz", num(hz(sweep.optimum_delta())))?;
    writeln!(report, "optimum g3_dc: {} Hz", num(hz(sweep.optimum_g3_dc())))?;
    writeln!(report, "preparation error: {}", num(sweep.optimum_error()))?;
    writeln!(report, "error after free rotation: {}", num(best.error_free_rotation))?;
    writeln!(report, "free rotation angle: {}", num(best.theta))?;
    writeln!(report, "preparation time: {} s", num(problem.tau()?))?;
    writeln!(report, "fock dimension: {}", sweep.dim)?;
    writeln!(report, "max norm drift: {}", num(sweep.norm_drift.max()))?;
    writeln!(report, "wigner integral over grid: {}", num(wigner_integral(&w, &axis, &axis)))?;
    out.text("report.txt", &report)?;
    Ok(report)
}
