//! The four subcommands. Each returns the assembled report plus its exit
//! code: 0 all good, 1 a check or tolerance failed. Config and resource
//! errors travel as `CliError` and never produce a partial report.

use quadsym_core::models::{ModelOps, ModelParams};
use quadsym_core::oracle::{
    dso_lambda, kc_lambda, radial_eigenvalues, OracleRun, Potential, RadialProblem, Scheme,
};
use quadsym_core::qalg::verify_all;
use quadsym_core::spectra::{
    enumerate_reps_dso, enumerate_reps_kc, match_identification_dso, match_identification_kc,
    physical_spectrum_dso, physical_spectrum_kc, zero_root_survivors, DsoLevel, DsoSystem,
    KcSystem, MNormalization, MatchVerdict, RepSolution,
};
use quadsym_core::value::Scalar;

use crate::config::{CliError, RunConfig};
use crate::report::{sig15, CheckRow, Num, OracleRow, Report, ScanRow, SpectrumRow, SurvivorRow};
use crate::ModelKind;

fn kc_system(cfg: &RunConfig) -> KcSystem {
    KcSystem {
        n_dim: cfg.dim,
        hbar: cfg.hbar.scalar().clone(),
        c0: cfg.c0.scalar().clone(),
        c1: cfg.c1.scalar().clone(),
        c2: cfg.c2.scalar().clone(),
    }
}

fn dso_system(cfg: &RunConfig) -> DsoSystem {
    DsoSystem {
        n_dim: cfg.dim,
        split: cfg.split,
        hbar: cfg.hbar.scalar().clone(),
        omega: cfg.omega.scalar().clone(),
        c1: cfg.c1.scalar().clone(),
        c2: cfg.c2.scalar().clone(),
    }
}

pub fn run_verify(cfg: &RunConfig) -> Result<(Report, u8), CliError> {
    let params = match cfg.model {
        ModelKind::Kc => ModelParams::kepler_coulomb(cfg.dim as usize)?,
        ModelKind::Dso => {
            ModelParams::singular_oscillator(cfg.dim as usize, cfg.split as usize)?
        }
    };
    let ops = ModelOps::new(params);
    let results = verify_all(&ops, true)?;
    let all_passed = results.iter().all(|c| c.passed);
    let mut report = Report::new(cfg);
    report.checks = results
        .into_iter()
        .map(|c| CheckRow {
            name: c.name,
            status: if c.passed { "pass" } else { "fail" },
            residual_terms: c.residual_terms,
            detail: c.detail,
        })
        .collect();
    report.checks.sort_by(|a, b| a.name.cmp(&b.name));
    Ok((report, u8::from(!all_passed)))
}

/// Locate the solution a verdict matched, for the positivity columns.
fn matched_solution<'a>(v: &MatchVerdict, sols: &'a [RepSolution]) -> Option<&'a RepSolution> {
    let (z, t) = v.branch?;
    let e = v.algebraic.as_ref()?;
    sols.iter().find(|s| {
        s.zero_root == z
            && s.top_root == t
            && s.energy.cmp_val(e) == std::cmp::Ordering::Equal
    })
}

fn spectrum_row(qn: String, v: &MatchVerdict, sols: &[RepSolution]) -> SpectrumRow {
    let sol = matched_solution(v, sols);
    SpectrumRow {
        quantum_numbers: qn,
        e_physical: Num::from_scalar(&v.physical),
        e_algebraic: v.algebraic.as_ref().map(Num::from_scalar),
        branch: v.branch.map(|(z, t)| format!("nu{z}->nu{t}")),
        matched: v.matched,
        positive: sol.map_or(false, |s| {
            s.positive_on_scan && s.phi_values.iter().all(Scalar::is_positive)
        }),
    }
}

pub fn run_spectrum(cfg: &RunConfig) -> Result<(Report, u8), CliError> {
    let mut report = Report::new(cfg);
    let mut all_matched = true;
    match cfg.model {
        ModelKind::Kc => {
            let sys = kc_system(cfg);
            sys.validate()?;
            for n in 1..=cfg.levels {
                for i_ang in 0..n {
                    let v = match_identification_kc(&sys, n, i_ang, MNormalization::Adopted)?;
                    let sols =
                        enumerate_reps_kc(&sys, i_ang, n - 1 - i_ang, MNormalization::Adopted)?;
                    all_matched &= v.matched;
                    report
                        .spectrum
                        .push(spectrum_row(format!("n={n} I={i_ang}"), &v, &sols));
                }
            }
        }
        ModelKind::Dso => {
            let sys = dso_system(cfg);
            sys.validate()?;
            for p in 0..=cfg.p_max {
                let lvl = DsoLevel { n1: p, n2: 0, l1: 0, l2: 0 };
                let v = match_identification_dso(&sys, &lvl)?;
                let sols = enumerate_reps_dso(&sys, 0, 0, p)?;
                all_matched &= v.matched;
                report.spectrum.push(spectrum_row(
                    format!("p={p} n1={} n2={} l1=0 l2=0", lvl.n1, lvl.n2),
                    &v,
                    &sols,
                ));
            }
        }
    }
    Ok((report, u8::from(!all_matched)))
}

fn scheme_name(s: Scheme) -> &'static str {
    match s {
        Scheme::UForm => "u-form",
        Scheme::FiniteVolume => "finite-volume",
    }
}

fn oracle_row(
    level: u32,
    scheme: String,
    formula: f64,
    oracle: f64,
    ratio: f64,
    converged: bool,
) -> OracleRow {
    OracleRow {
        level,
        scheme,
        e_formula: Num::from_f64(formula),
        e_oracle: Num::from_f64(oracle),
        rel_err: sig15((oracle - formula).abs() / formula.abs()),
        ratio: sig15(ratio),
        converged,
    }
}

pub fn run_oracle(cfg: &RunConfig) -> Result<(Report, u8), CliError> {
    let mut report = Report::new(cfg);
    let hbar = cfg.hbar.scalar().to_f64();
    let mut ok = true;
    match cfg.model {
        ModelKind::Kc => {
            let sys = kc_system(cfg);
            sys.validate()?;
            let lambda = kc_lambda(
                cfg.dim,
                0,
                0,
                cfg.c1.scalar().to_f64(),
                cfg.c2.scalar().to_f64(),
                hbar,
            );
            let problem = RadialProblem {
                d: cfg.dim,
                lambda,
                potential: Potential::Coulomb {
                    c0: cfg.c0.scalar().to_f64(),
                },
                hbar,
            };
            let formulas: Vec<f64> = (1..=cfg.levels)
                .map(|n| Ok(physical_spectrum_kc(&sys, n, 0)?.to_f64()))
                .collect::<Result<_, CliError>>()?;
            // Auto domain: far enough past the shallowest level's classical
            // turning radius that the truncated tail cannot shift it at
            // tolerance scale. Barriers push the turning radius outward, so
            // a flat default would clip the top level.
            let rmax = cfg.rmax.unwrap_or_else(|| {
                let floor = problem.default_rmax();
                match formulas.last() {
                    Some(&e) if e < 0.0 => {
                        let turning = cfg.c0.scalar().to_f64() / -e;
                        let decay = hbar / (-2.0 * e).sqrt();
                        floor.max(turning + 16.0 * decay)
                    }
                    _ => floor,
                }
            });
            let run = radial_eigenvalues(&problem, rmax, cfg.grid, cfg.levels as usize)?;
            for (idx, &formula) in formulas.iter().enumerate() {
                let row = oracle_row(
                    idx as u32 + 1,
                    scheme_name(run.scheme).into(),
                    formula,
                    run.extrapolated[idx],
                    run.ratios[idx],
                    run.converged[idx],
                );
                ok &= row.converged && (run.extrapolated[idx] - formula).abs()
                    <= cfg.tol * formula.abs();
                report.oracle.push(row);
            }
        }
        ModelKind::Dso => {
            let sys = dso_system(cfg);
            sys.validate()?;
            let omega = cfg.omega.scalar().to_f64();
            let (d1, d2) = (cfg.split, cfg.dim - cfg.split);
            let block = |d: u32, c: f64, k: usize| -> Result<OracleRun, CliError> {
                let problem = RadialProblem {
                    d,
                    lambda: dso_lambda(d, 0, c, hbar),
                    potential: Potential::Oscillator { omega },
                    hbar,
                };
                let rmax = cfg.rmax.unwrap_or_else(|| problem.default_rmax());
                Ok(radial_eigenvalues(&problem, rmax, cfg.grid, k)?)
            };
            let first = block(d1, cfg.c1.scalar().to_f64(), cfg.levels as usize)?;
            let second = block(d2, cfg.c2.scalar().to_f64(), 1)?;
            let scheme = format!(
                "{}+{}",
                scheme_name(first.scheme),
                scheme_name(second.scheme)
            );
            for idx in 0..cfg.levels as usize {
                let lvl = DsoLevel { n1: idx as u32, n2: 0, l1: 0, l2: 0 };
                let formula = physical_spectrum_dso(&sys, &lvl)?.to_f64();
                let oracle = first.extrapolated[idx] + second.extrapolated[0];
                let converged = first.converged[idx] && second.converged[0];
                let row = oracle_row(
                    idx as u32,
                    scheme.clone(),
                    formula,
                    oracle,
                    first.ratios[idx],
                    converged,
                );
                ok &= converged && (oracle - formula).abs() <= cfg.tol * formula.abs();
                report.oracle.push(row);
            }
        }
    }
    Ok((report, u8::from(!ok)))
}

fn scan_rows(report: &mut Report, p: u32, sols: &[RepSolution]) {
    report.survivors.push(SurvivorRow {
        p,
        survivors: zero_root_survivors(sols),
    });
    for s in sols {
        report.scan.push(ScanRow {
            p,
            energy: Num::from_scalar(&s.energy),
            u: Num::from_scalar(&s.u),
            zero_root: s.zero_root,
            top_root: s.top_root,
            signs: s.signs.map(|(a, b)| {
                let sign = |x: i8| if x >= 0 { '+' } else { '-' };
                format!("{}{}", sign(a), sign(b))
            }),
            integer_positive: s.phi_values.iter().all(Scalar::is_positive),
            scan_positive: s.positive_on_scan,
        });
    }
}

pub fn run_scan(cfg: &RunConfig) -> Result<(Report, u8), CliError> {
    let mut report = Report::new(cfg);
    match cfg.model {
        ModelKind::Kc => {
            let sys = kc_system(cfg);
            sys.validate()?;
            // No attractive center means no bound sector at all: an empty
            // result, not an error.
            if sys.c0.is_positive() {
                for p in 0..=cfg.p_max {
                    let sols = enumerate_reps_kc(&sys, 0, p, MNormalization::Adopted)?;
                    scan_rows(&mut report, p, &sols);
                }
            }
        }
        ModelKind::Dso => {
            let sys = dso_system(cfg);
            sys.validate()?;
            for p in 0..=cfg.p_max {
                let sols = enumerate_reps_dso(&sys, 0, 0, p)?;
                scan_rows(&mut report, p, &sols);
            }
        }
    }
    Ok((report, 0))
}
