//! Acceptance suite. Each criterion prints one `criterion N: PASS|FAIL` line;
//! the process exits non-zero when any criterion fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;

use snakelab::adversary::{enumerate_snake_support, theorem2_report, verify_lemma8, w_matrix};
use snakelab::analysis::{chunk_mixing_check, hitting_exact, is_sparse, sparse_tail_experiment};
use snakelab::budget::Budget;
use snakelab::families::{self, Family};
use snakelab::graph::VertexTransitiveGraph;
use snakelab::group::FiniteGroup;
use snakelab::mixing::{build_chunk_distribution, er_generator_experiment, tv_chain_bound_check, ChunkMethod, JointTable, Maximization};
use snakelab::rng::task_rng;
use snakelab::snake::{f_table, is_consistent, ChunkModel, SnakeParams};
use snakelab::solvers::{enumerate_local_minima, lower_bound_formula, query_complexity_experiment, InstanceSpec, SolverKind};
use snakelab::stats::Estimate;

const SEED: u64 = 20_240_601;

type Outcome = Result<(bool, String), String>;

fn model_for<'g>(g: &'g VertexTransitiveGraph, s: usize, method: ChunkMethod) -> Result<ChunkModel<'g>, String> {
    let chunk = build_chunk_distribution(g, s, method).map_err(|e| e.to_string())?;
    ChunkModel::new(g, chunk).map_err(|e| e.to_string())
}

fn within(t: Instant, limit_secs: u64) -> (bool, Duration) {
    let e = t.elapsed();
    (e < Duration::from_secs(limit_secs), e)
}

fn c1_unique_minimum() -> Outcome {
    let t = Instant::now();
    let mut graphs = Vec::new();
    for n in 3..=10 {
        graphs.push(families::hypercube(n).map_err(|e| e.to_string())?);
    }
    for n in 4..=32 {
        graphs.push(families::torus(n, 2).map_err(|e| e.to_string())?);
    }
    let failures: usize = graphs
        .par_iter()
        .enumerate()
        .map(|(gi, g)| -> Result<usize, String> {
            let s = g.diameter().div_ceil(2);
            let model = model_for(g, s, ChunkMethod::UniformBall)?;
            let params = SnakeParams::new(s, 3).map_err(|e| e.to_string())?.with_delta(model.delta());
            let mut rng = task_rng(SEED, "acc_unique_min", gi as u64);
            let mut bad = 0;
            for _ in 0..1000 {
                let x = model.sample_snake(g.base(), &params, &mut rng).map_err(|e| e.to_string())?;
                let f = f_table(g, &x).map_err(|e| e.to_string())?;
                let minima = enumerate_local_minima(g, |v| f[v as usize]).map_err(|e| e.to_string())?;
                bad += usize::from(minima != vec![x.endpoint()]);
            }
            Ok(bad)
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .sum();
    let (fast, e) = within(t, 60);
    Ok((failures == 0 && fast, format!("{} graphs x 1000 snakes, {failures} failures, {:.2?}", graphs.len(), e)))
}

fn c2_w_symmetry() -> Outcome {
    let t = Instant::now();
    let budget = Budget::default();
    let c8 = families::cycle(8).map_err(|e| e.to_string())?;
    let model = model_for(&c8, 2, ChunkMethod::UniformBall)?;
    let params = SnakeParams::new(2, 2).map_err(|e| e.to_string())?.with_delta(model.delta());
    let ens = enumerate_snake_support(&model, 0, &params, &budget).map_err(|e| e.to_string())?;
    let w = w_matrix(&ens, &budget).map_err(|e| e.to_string())?;
    let (fast, e) = within(t, 10);
    Ok((w.max_asymmetry < 1e-12 && fast, format!("{} snakes, max asymmetry {:e}, {:.2?}", ens.len(), w.max_asymmetry, e)))
}

fn c3_sparse_hitting() -> Outcome {
    let budget = Budget::default();
    let mut checked = 0usize;
    let mut violations = 0usize;
    let mut worst: f64 = 0.0;
    for g in [families::cycle(8), families::hypercube(4)] {
        let g = g.map_err(|e| e.to_string())?;
        let model = model_for(&g, 2, ChunkMethod::UniformBall)?;
        let params = SnakeParams::new(2, 2).map_err(|e| e.to_string())?.with_delta(model.delta());
        let ens = enumerate_snake_support(&model, 0, &params, &budget).map_err(|e| e.to_string())?;
        let n = g.vertex_count() as f64;
        let floor = 2.0 * (params.length() - params.s) as f64 / n;
        for x in &ens.snakes {
            let sp = is_sparse(&model, x, 1.0);
            let eps = sp.min_eps(params.ell).max(floor);
            let h = hitting_exact(&model, x, &budget).map_err(|e| e.to_string())?;
            checked += 1;
            violations += usize::from(h.max > 2.0 * eps + 1e-12);
            worst = worst.max(h.max / (2.0 * eps));
        }
    }
    Ok((violations == 0, format!("{checked} snakes on C_8 and Q_4, {violations} violations, max hit/(2eps) = {worst:.4}")))
}

fn c4_chernoff_tail() -> Outcome {
    let t = Instant::now();
    let g = families::torus(30, 2).map_err(|e| e.to_string())?;
    let model = model_for(&g, g.diameter(), ChunkMethod::UniformAll)?;
    let (ell, eps) = (10, 0.45);
    let rep = sparse_tail_experiment(&model, ell, eps, 100_000, SEED).map_err(|e| e.to_string())?;
    let Some(ceiling) = rep.ceiling else {
        return Ok((false, "precondition s/N <= eps^2/6 not met".into()));
    };
    let (fast, e) = within(t, 120);
    let ok = rep.frequency() <= ceiling + 3.0 * rep.std_err() && fast;
    Ok((ok, format!("s={} ell={ell} eps={eps}: frequency {} vs ceiling {ceiling:.6}, {:.2?}", model.s(), rep.frequency(), e)))
}

fn c5_tv_chain() -> Outcome {
    let mut rng = task_rng(SEED, "acc_tv_chain", 0);
    let total = 10_000;
    let mut exhaustive = 0;
    let mut holds = 0;
    for _ in 0..total {
        let coords = rng.gen_range(2..=3);
        let shape: Vec<usize> = (0..coords).map(|_| rng.gen_range(2..=8)).collect();
        let x = JointTable::random(shape.clone(), &mut rng);
        let y = JointTable::random(shape, &mut rng);
        let r = tv_chain_bound_check(&x, &y).map_err(|e| e.to_string())?;
        if r.maximization == Maximization::Exhaustive {
            exhaustive += 1;
            holds += usize::from(r.holds);
        }
    }
    Ok((exhaustive == total && holds == total, format!("{holds}/{exhaustive} exhaustive pairs hold (of {total})")))
}

fn c6_mixing() -> Outcome {
    let budget = Budget::default();
    let mut lines = Vec::new();
    let mut ok = true;
    for g in [families::hypercube(3), families::cycle(8)] {
        let g = g.map_err(|e| e.to_string())?;
        let model = model_for(&g, 2, ChunkMethod::UniformBall)?;
        let params = SnakeParams::new(2, 2).map_err(|e| e.to_string())?.with_delta(model.delta());
        let mut worst: f64 = 0.0;
        for t in params.s..=params.length() {
            let r = chunk_mixing_check(&model, &params, t, 0, 0, &budget).map_err(|e| e.to_string())?;
            ok &= r.max_tv <= model.delta() + 1e-9;
            worst = worst.max(r.max_tv);
        }
        lines.push(format!("{}: max tv {worst:.6} <= delta {:.6}", g.label(), model.delta()));
    }
    Ok((ok, lines.join("; ")))
}

fn c7_consistency_floor() -> Outcome {
    let g = families::torus(40, 2).map_err(|e| e.to_string())?;
    let s = 4;
    let model = model_for(&g, s, ChunkMethod::UniformBall)?;
    let params = SnakeParams::from_formula(g.vertex_count(), s, 2.0).map_err(|e| e.to_string())?.with_delta(model.delta());
    if params.ell < 4 {
        return Ok((false, format!("ell = {} < 4", params.ell)));
    }
    let pairs = 10_000u64;
    let bad: u64 = (0..pairs.div_ceil(1024))
        .into_par_iter()
        .map(|b| -> Result<u64, String> {
            let mut rng = task_rng(SEED, "acc_consistency", b);
            let mut c = 0;
            for _ in (b * 1024)..((b + 1) * 1024).min(pairs) {
                let x = model.sample_snake(g.base(), &params, &mut rng).map_err(|e| e.to_string())?;
                let (_, y) = model.flick(&x, &mut rng);
                c += u64::from(!is_consistent(&x, &y));
            }
            Ok(c)
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .sum();
    let est = Estimate::new(bad, pairs);
    let n = g.vertex_count() as f64;
    let span = (params.length() - s) as f64;
    let bound = 2.0 * span * span * (model.delta() * n + 1.0) / n;
    let ok = est.mean() <= bound + 3.0 * est.std_err();
    Ok((ok, format!("ell={} delta={:.4}: Pr[disagreement] {} vs bound {bound:.3}", params.ell, model.delta(), est.mean())))
}

fn c8_er_generators() -> Outcome {
    let t = Instant::now();
    let group = FiniteGroup::build(&"power(cyclic(2),6)".parse().map_err(|e: snakelab::Error| e.to_string())?).map_err(|e| e.to_string())?;
    let er = er_generator_experiment(&group, 19, 0.25, 200, SEED).map_err(|e| e.to_string())?;
    let (fast, e) = within(t, 30);
    let ok = er.fraction() >= 0.875 - 3.0 * er.std_err() && fast;
    Ok((ok, format!("lambda={} fraction {} ({}/{}), {:.2?}", er.lambda, er.fraction(), er.passes, er.trials, e)))
}

fn c9_adversary() -> Outcome {
    let budget = Budget::default();
    let grid: Vec<(&str, VertexTransitiveGraph, usize, usize, ChunkMethod)> = vec![
        ("C_8 s=2 ell=2 ball", families::cycle(8).map_err(|e| e.to_string())?, 2, 2, ChunkMethod::UniformBall),
        ("Q_4 s=2 ell=2 ball", families::hypercube(4).map_err(|e| e.to_string())?, 2, 2, ChunkMethod::UniformBall),
        ("Q_3 s=3 ell=1 all", families::hypercube(3).map_err(|e| e.to_string())?, 3, 1, ChunkMethod::UniformAll),
        ("K_20 s=1 ell=1 all", families::complete(20).map_err(|e| e.to_string())?, 1, 1, ChunkMethod::UniformAll),
        ("K_30 s=1 ell=1 all", families::complete(30).map_err(|e| e.to_string())?, 1, 1, ChunkMethod::UniformAll),
        ("K_50 s=1 ell=1 all", families::complete(50).map_err(|e| e.to_string())?, 1, 1, ChunkMethod::UniformAll),
    ];
    let mut lemma8_always = true;
    let mut mass_always = true;
    let mut tried = Vec::new();
    for (name, g, s, ell, method) in &grid {
        let model = model_for(g, *s, method.clone())?;
        let params = SnakeParams::new(*s, *ell).map_err(|e| e.to_string())?.with_delta(model.delta());
        let ens = enumerate_snake_support(&model, 0, &params, &budget).map_err(|e| e.to_string())?;
        let rep = theorem2_report(&model, &ens, &budget).map_err(|e| e.to_string())?;
        if !rep.subset.is_empty() {
            let p_good: Vec<f64> = ens
                .probs
                .iter()
                .zip(&rep.consistency)
                .map(|(&p, &c)| if c >= params.consist_threshold { p } else { 0.0 })
                .collect();
            lemma8_always &= verify_lemma8(&p_good, &rep.relation, rep.lemma_r, &rep.subset);
        }
        if rep.sum_r >= 0.6 {
            mass_always &= rep.subset_mass_ok;
        }
        if rep.hypotheses_met() {
            let rls = rep.rls_confirmed() == Some(true);
            let qls = rep.qls_confirmed() == Some(true);
            return Ok((
                rls && qls,
                format!(
                    "{name}: good={:.4} eps={} m_max={:.3} >= {:.3}, m_geom={:.3} >= {:.3} (skipped: {})",
                    rep.good_fraction,
                    rep.eps,
                    rep.m_max.unwrap_or(f64::NAN),
                    rep.rls_target,
                    rep.m_geom.unwrap_or(f64::NAN),
                    rep.qls_target,
                    if tried.is_empty() { "none".to_string() } else { tried.join(", ") }
                ),
            ));
        }
        tried.push(name.to_string());
    }
    Ok((lemma8_always && mass_always, format!("no grid member met the hypotheses; degraded check: lemma8 {lemma8_always}, mass {mass_always}")))
}

fn c10_solver_scaling() -> Outcome {
    let t = Instant::now();
    let sizes: Vec<Family> = [10, 15, 20, 25, 30, 35, 40].iter().map(|&n| Family::Torus { n, dim: 2 }).collect();
    let table = query_complexity_experiment(&sizes, &InstanceSpec::default(), SolverKind::Aldous(None), 50, SEED).map_err(|e| e.to_string())?;
    let slope = table.loglog_slope();
    let correct = table.trials.iter().all(|r| r.answer_correct);
    let (fast, e) = within(t, 300);
    Ok(((0.35..=0.65).contains(&slope) && correct && fast, format!("slope {slope:.4}, all answers correct: {correct}, {:.2?}", e)))
}

fn c11_formula() -> Outcome {
    let ratios: Vec<f64> = (4..=20)
        .map(|n| {
            let lb = lower_bound_formula(2f64.powi(n), n as f64).map_err(|e| e.to_string())?;
            Ok(lb.rls / (2f64.powf(n as f64 / 2.0) / (n * n) as f64))
        })
        .collect::<Result<_, String>>()?;
    let r0 = ratios[0];
    let worst = ratios.iter().map(|r| (r / r0 - 1.0).abs()).fold(0.0, f64::max);
    Ok((worst <= 1e-9, format!("ratio {r0}, max relative spread {worst:e}")))
}

fn read_tree(root: &Path) -> std::io::Result<BTreeMap<String, Vec<u8>>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.insert(rel, fs::read(&path)?);
            }
        }
    }
    Ok(out)
}

fn c12_determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_snakelab");
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut trees = Vec::new();
    for run in ["a", "b"] {
        let out = tmp.path().join(run);
        let status = Command::new(exe).args(["selftest", "--seed", "7", "--out"]).arg(&out).output().map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Ok((false, format!("selftest run {run} exited with {}", status.status)));
        }
        trees.push(read_tree(&out).map_err(|e| e.to_string())?);
    }
    let same = trees[0] == trees[1];
    Ok((same && !trees[0].is_empty(), format!("{} files, identical: {same}", trees[0].len())))
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 12] = [
        (1, c1_unique_minimum),
        (2, c2_w_symmetry),
        (3, c3_sparse_hitting),
        (4, c4_chernoff_tail),
        (5, c5_tv_chain),
        (6, c6_mixing),
        (7, c7_consistency_floor),
        (8, c8_er_generators),
        (9, c9_adversary),
        (10, c10_solver_scaling),
        (11, c11_formula),
        (12, c12_determinism),
    ];
    let mut failed = 0;
    for (id, run) in criteria {
        let (ok, detail) = match run() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!ok);
        println!("criterion {id}: {} {detail}", if ok { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {}/12 passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
