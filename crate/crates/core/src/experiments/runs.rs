use std::f64::consts::PI;

use rayon::prelude::*;

use super::config::{Experiment, ExperimentConfig, KernelTag, Setup, Site};
use super::table::{Cell, ChartSpec, ResultTable};
use super::ToolError;
use crate::baseline::{asd_circle, atd_circle};
use crate::classification::{fit, misclassification_rate, Population};
use crate::deepest::{deepest, DeepestOptions};
use crate::depth::depth_profile_circle;
use crate::quadrature::QuadratureSpec;
use crate::rng::stream_seed;
use crate::robustness::bdp_lower_bound_vmf;
use crate::sampling::{
    mixture_density, sample_contaminated, sample_mixture, sample_two_populations, ContaminatedModel, MixtureModel,
    VmfModel,
};
use crate::sphere::{squared_error, DirectionalSample, UnitVector};

/// Runs the experiment named in `config`.
pub fn run(config: &ExperimentConfig) -> Result<ResultTable, ToolError> {
    match config.experiment {
        Experiment::Curves => run_curves(config),
        Experiment::Bdp => run_bdp(config),
        Experiment::Efficiency => run_efficiency(config),
        Experiment::Robustness => run_robustness(config),
        Experiment::Classification => run_classification(config),
    }
}

fn stamp(table: &mut ResultTable, config: &ExperimentConfig) {
    for (k, v) in config.to_metadata() {
        table.set_meta(k, v);
    }
    table.set_meta("toolkit_version", env!("CARGO_PKG_VERSION"));
}

fn ensure(config: &ExperimentConfig, expected: Experiment) -> Result<(), ToolError> {
    if config.experiment != expected {
        return Err(ToolError::Config(format!(
            "configuration is for '{}', not '{expected}'",
            config.experiment
        )));
    }
    config.validate()
}

fn vmf(mode: UnitVector, kappa: f64) -> MixtureModel {
    MixtureModel::from(VmfModel::new(mode, kappa).expect("positive concentration"))
}

fn circ(alpha: f64, kappa: f64) -> MixtureModel {
    vmf(UnitVector::from_angle(alpha), kappa)
}

fn halves(a: MixtureModel, b: MixtureModel) -> MixtureModel {
    let mut comps = a.components().to_vec();
    comps.extend_from_slice(b.components());
    MixtureModel::uniform_weights(comps).expect("two components")
}

fn e(q: usize, j: usize) -> UnitVector {
    UnitVector::basis(q, j).expect("valid basis index")
}

/// `cos(a) e_{q-1} + sin(a) e_q`.
fn tilted(q: usize, a: f64) -> UnitVector {
    let mut c = vec![0.0; q];
    c[q - 2] = a.cos();
    c[q - 1] = a.sin();
    UnitVector::from_components(&c).expect("unit vector")
}

/// The three circular laws of the depth-curve illustration.
pub fn curve_distributions() -> [(&'static str, MixtureModel); 3] {
    [
        ("H1", circ(PI, 2.0)),
        ("H2", halves(circ(3.0 * PI / 4.0, 5.0), circ(5.0 * PI / 4.0, 5.0))),
        ("H3", halves(circ(5.0 * PI / 9.0, 7.0), circ(13.0 * PI / 9.0, 17.0))),
    ]
}

/// Population laws `(H1, H2)` of a classification setup in dimension `q`.
/// The circle uses angular modes; `q >= 3` uses `e_1`, `e_{q-1}` and `e_q`.
pub fn setup_populations(setup: Setup, q: usize) -> (MixtureModel, MixtureModel) {
    if q == 2 {
        match setup {
            Setup::A => (circ(PI / 4.0, 5.0), circ(3.0 * PI / 4.0, 5.0)),
            Setup::B => (circ(PI / 3.0, 2.0), circ(2.0 * PI / 3.0, 5.0)),
            Setup::C => (circ(3.0 * PI / 4.0, 4.0), halves(circ(0.0, 4.0), circ(PI / 2.0, 4.0))),
            Setup::Control => (circ(PI / 4.0, 5.0), circ(PI / 4.0, 5.0)),
        }
    } else {
        match setup {
            Setup::A => (vmf(e(q, 1), 5.0), vmf(e(q, q), 5.0)),
            Setup::B => (vmf(e(q, q), 2.0), vmf(tilted(q, PI / 6.0), 5.0)),
            Setup::C => (vmf(tilted(q, 7.0 * PI / 4.0), 4.0), halves(vmf(e(q, q - 1), 4.0), vmf(e(q, q), 4.0))),
            Setup::Control => (vmf(e(q, 1), 5.0), vmf(e(q, 1), 5.0)),
        }
    }
}

/// Depth profiles of the three illustration samples and their parent
/// densities. Columns: `dist, kernel, angle, depth, argmax`; density rows use
/// the kernel name `density`.
pub fn run_curves(config: &ExperimentConfig) -> Result<ResultTable, ToolError> {
    ensure(config, Experiment::Curves)?;
    let quad = QuadratureSpec::default();
    let n = config.n[0];
    let grid = config.grid;
    let angles: Vec<f64> = (0..grid).map(|k| 2.0 * PI * k as f64 / grid as f64).collect();
    let mut table = ResultTable::new(["dist", "kernel", "angle", "depth", "argmax"]).with_chart(ChartSpec {
        title: format!("Depth profiles, n = {n}"),
        x: "angle".into(),
        y: "depth".into(),
        series: vec!["dist".into(), "kernel".into()],
        filter: None,
    });
    for (l, (name, law)) in curve_distributions().into_iter().enumerate() {
        let sample = sample_mixture(&law, n, stream_seed(config.seed, l as u64 + 1))?;
        for kernel in &config.kernels {
            let values: Vec<f64> = match kernel.delta() {
                Some(spec) => depth_profile_circle(&spec, &sample, grid)?.into_iter().map(|(_, d)| d).collect(),
                None => angles
                    .par_iter()
                    .map(|&a| {
                        let t = UnitVector::from_angle(a);
                        if *kernel == KernelTag::Atd {
                            atd_circle(&t, &sample)
                        } else {
                            asd_circle(&t, &sample)
                        }
                    })
                    .collect::<Result<_, _>>()?,
            };
            push_profile(&mut table, name, kernel.as_str(), &angles, &values);
        }
        let density: Vec<f64> = angles
            .iter()
            .map(|&a| mixture_density(&law, &UnitVector::from_angle(a), &quad))
            .collect::<Result<_, _>>()
            .map_err(|e| ToolError::numerical(format!("{name} density"), e))?;
        push_profile(&mut table, name, "density", &angles, &density);
    }
    stamp(&mut table, config);
    table.set_meta("display_factor_distance", "1.5");
    table.set_meta("display_factor_asd", "1");
    table.set_meta("display_factor_atd", "0.5");
    Ok(table)
}

fn push_profile(table: &mut ResultTable, dist: &str, kernel: &str, angles: &[f64], values: &[f64]) {
    let best = values
        .iter()
        .enumerate()
        .fold(0, |b, (i, v)| if *v > values[b] { i } else { b });
    for (i, (a, v)) in angles.iter().zip(values).enumerate() {
        table.push(vec![dist.into(), kernel.into(), Cell::Real(*a), Cell::Real(*v), Cell::Int((i == best) as i64)]);
    }
}

/// Breakdown lower bounds under vMF laws. Columns: `q, kernel, kappa, bound`.
pub fn run_bdp(config: &ExperimentConfig) -> Result<ResultTable, ToolError> {
    ensure(config, Experiment::Bdp)?;
    let quad = QuadratureSpec::default();
    let mut table = ResultTable::new(["q", "kernel", "kappa", "bound"]).with_chart(ChartSpec {
        title: "Breakdown lower bound under vMF".into(),
        x: "kappa".into(),
        y: "bound".into(),
        series: vec!["q".into(), "kernel".into()],
        filter: None,
    });
    for &q in &config.q {
        for kernel in &config.kernels {
            let spec = kernel.delta().expect("validated distance kernel");
            for &k in &config.kappa {
                let b = bdp_lower_bound_vmf(&spec, q, k, &quad)
                    .map_err(|e| ToolError::numerical(format!("q={q}, kappa={k}, kernel={kernel}"), e))?;
                table.push(vec![q.into(), kernel.as_str().into(), Cell::Real(k), Cell::Real(b)]);
            }
        }
    }
    stamp(&mut table, config);
    Ok(table)
}

/// One estimation cell: a law and the truth it should recover.
struct Cell3 {
    q: usize,
    n: usize,
    kappa: f64,
    eps: f64,
    site: Option<Site>,
}

impl Cell3 {
    fn model(&self) -> ContaminatedModel {
        let theta = e(self.q, self.q);
        let atom = match self.site {
            Some(Site::Orthogonal) => e(self.q, self.q - 1),
            Some(Site::Antipodal) | None => -&theta,
        };
        ContaminatedModel::new(VmfModel::new(theta, self.kappa).expect("positive kappa"), self.eps, atom)
            .expect("validated contamination")
    }
}

/// Squared errors `2 (1 - theta_hat'theta)` for each replication and kernel.
/// Replication `m` samples with seed `stream_seed(seed, m)` in every cell, so
/// cells share random numbers and smaller `n` use a prefix of larger samples.
fn squared_errors(cells: &[Cell3], config: &ExperimentConfig) -> Result<Vec<Vec<Vec<f64>>>, ToolError> {
    let opts = DeepestOptions::default();
    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..config.replications).map(move |m| (c, m)))
        .collect();
    let flat: Vec<Vec<f64>> = jobs
        .par_iter()
        .map(|&(c, m)| {
            let cell = &cells[c];
            let sample = sample_contaminated(&cell.model(), cell.n, stream_seed(config.seed, m as u64))?;
            let truth = e(cell.q, cell.q);
            config
                .kernels
                .iter()
                .map(|k| {
                    let spec = k.delta().expect("validated distance kernel");
                    let hat = deepest(&spec, &sample, &opts).map_err(|e| {
                        ToolError::numerical(format!("q={}, n={}, replication {m}, kernel={k}", cell.q, cell.n), e)
                    })?;
                    Ok(squared_error(&hat.point, &truth)?)
                })
                .collect::<Result<Vec<f64>, ToolError>>()
        })
        .collect::<Result<_, ToolError>>()?;
    // regroup as [cell][kernel][replication]
    let mut out = vec![vec![Vec::with_capacity(config.replications); config.kernels.len()]; cells.len()];
    for ((c, _), ses) in jobs.iter().zip(flat) {
        for (k, se) in ses.into_iter().enumerate() {
            out[*c][k].push(se);
        }
    }
    Ok(out)
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Deepest-point squared errors under vMF(e_q, kappa). Columns:
/// `stat, q, n, kappa, kernel, replication, value` with `stat` either `se`
/// (one row per replication) or `mse` (replication column holds `M`).
pub fn run_efficiency(config: &ExperimentConfig) -> Result<ResultTable, ToolError> {
    ensure(config, Experiment::Efficiency)?;
    let mut cells = Vec::new();
    for &q in &config.q {
        for &kappa in &config.kappa {
            for &n in &config.n {
                cells.push(Cell3 { q, n, kappa, eps: 0.0, site: None });
            }
        }
    }
    let se = squared_errors(&cells, config)?;
    let mut table =
        ResultTable::new(["stat", "q", "n", "kappa", "kernel", "replication", "value"]).with_chart(ChartSpec {
            title: "Deepest-point MSE".into(),
            x: "n".into(),
            y: "value".into(),
            series: vec!["q".into(), "kappa".into(), "kernel".into()],
            filter: Some(("stat".into(), "mse".into())),
        });
    for (cell, per_kernel) in cells.iter().zip(&se) {
        for (kernel, values) in config.kernels.iter().zip(per_kernel) {
            let key = |stat: &str, rep: usize, v: f64| {
                vec![
                    stat.into(),
                    cell.q.into(),
                    cell.n.into(),
                    Cell::Real(cell.kappa),
                    kernel.as_str().into(),
                    rep.into(),
                    Cell::Real(v),
                ]
            };
            for (m, v) in values.iter().enumerate() {
                table.push(key("se", m, *v));
            }
            table.push(key("mse", values.len(), mean(values)));
        }
    }
    stamp(&mut table, config);
    Ok(table)
}

/// Squared errors under `(1 - eps) vMF(e_q, kappa) + eps Delta`, with the
/// point mass at `e_{q-1}` (orthogonal) or `-e_q` (antipodal). Columns:
/// `stat, q, n, kappa, eps, site, kernel, replication, value`.
pub fn run_robustness(config: &ExperimentConfig) -> Result<ResultTable, ToolError> {
    ensure(config, Experiment::Robustness)?;
    let mut cells = Vec::new();
    for &q in &config.q {
        for &kappa in &config.kappa {
            for &n in &config.n {
                for &site in &config.sites {
                    for &eps in &config.eps {
                        cells.push(Cell3 { q, n, kappa, eps, site: Some(site) });
                    }
                }
            }
        }
    }
    let se = squared_errors(&cells, config)?;
    let mut table = ResultTable::new(["stat", "q", "n", "kappa", "eps", "site", "kernel", "replication", "value"])
        .with_chart(ChartSpec {
            title: "Deepest-point MSE under contamination".into(),
            x: "eps".into(),
            y: "value".into(),
            series: vec!["site".into(), "kernel".into()],
            filter: Some(("stat".into(), "mse".into())),
        });
    for (cell, per_kernel) in cells.iter().zip(&se) {
        let site = cell.site.expect("robustness cells carry a site");
        for (kernel, values) in config.kernels.iter().zip(per_kernel) {
            let key = |stat: &str, rep: usize, v: f64| {
                vec![
                    stat.into(),
                    cell.q.into(),
                    cell.n.into(),
                    Cell::Real(cell.kappa),
                    Cell::Real(cell.eps),
                    site.as_str().into(),
                    kernel.as_str().into(),
                    rep.into(),
                    Cell::Real(v),
                ]
            };
            for (m, v) in values.iter().enumerate() {
                table.push(key("se", m, *v));
            }
            table.push(key("mse", values.len(), mean(values)));
        }
    }
    stamp(&mut table, config);
    Ok(table)
}

fn split(sample: &DirectionalSample, labels: &[Population]) -> Result<(DirectionalSample, DirectionalSample), ToolError> {
    let pick = |p: Population| {
        let pts: Vec<UnitVector> = sample
            .points()
            .zip(labels)
            .filter(|(_, l)| **l == p)
            .map(|(x, _)| x)
            .collect();
        DirectionalSample::new(pts)
    };
    Ok((pick(Population::One)?, pick(Population::Two)?))
}

/// Max-depth misclassification rates. Training and test sets are drawn from
/// `(1/2) H1 + (1/2) H2`. Columns: `stat, q, setup, kernel, replication,
/// value` with `stat` either `rate` or `mean`. The circle baselines run only
/// for `q = 2`.
pub fn run_classification(config: &ExperimentConfig) -> Result<ResultTable, ToolError> {
    ensure(config, Experiment::Classification)?;
    let mut jobs = Vec::new();
    for &q in &config.q {
        for &setup in &config.setups {
            for m in 0..config.replications {
                jobs.push((q, setup, m));
            }
        }
    }
    let rates: Vec<Vec<Option<f64>>> = jobs
        .par_iter()
        .map(|&(q, setup, m)| {
            let (h1, h2) = setup_populations(setup, q);
            let s = stream_seed(stream_seed(config.seed, m as u64), (q as u64) << 8 | setup.index());
            let (train, train_labels) = sample_two_populations(&h1, &h2, config.n_train, stream_seed(s, 0))?;
            let (test, test_labels) = sample_two_populations(&h1, &h2, config.n_test, stream_seed(s, 1))?;
            let (t1, t2) = split(&train, &train_labels)?;
            config
                .kernels
                .iter()
                .map(|k| {
                    if k.is_baseline() && q != 2 {
                        return Ok(None);
                    }
                    let model = fit(k.classifier_depth(), t1.clone(), t2.clone(), s)?;
                    Ok(Some(misclassification_rate(&model, &test, &test_labels)?))
                })
                .collect::<Result<Vec<_>, ToolError>>()
        })
        .collect::<Result<_, ToolError>>()?;

    let mut table = ResultTable::new(["stat", "q", "setup", "kernel", "replication", "value"]).with_chart(ChartSpec {
        title: "Misclassification rate per replication".into(),
        x: "replication".into(),
        y: "value".into(),
        series: vec!["q".into(), "setup".into(), "kernel".into()],
        filter: Some(("stat".into(), "rate".into())),
    });
    for &q in &config.q {
        for &setup in &config.setups {
            for (k, kernel) in config.kernels.iter().enumerate() {
                let values: Vec<f64> = jobs
                    .iter()
                    .zip(&rates)
                    .filter(|((jq, js, _), _)| *jq == q && *js == setup)
                    .filter_map(|(_, r)| r[k])
                    .collect();
                if values.is_empty() {
                    continue;
                }
                let key = |stat: &str, rep: usize, v: f64| {
                    vec![
                        stat.into(),
                        q.into(),
                        setup.as_str().into(),
                        kernel.as_str().into(),
                        rep.into(),
                        Cell::Real(v),
                    ]
                };
                for (m, v) in values.iter().enumerate() {
                    table.push(key("rate", m, *v));
                }
                table.push(key("mean", values.len(), mean(&values)));
            }
        }
    }
    stamp(&mut table, config);
    Ok(table)
}
