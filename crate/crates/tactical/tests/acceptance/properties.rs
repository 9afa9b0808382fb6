//! Randomized identity, Gram, solver and q-analog suites.

use std::collections::BTreeSet;

use anyhow::{ensure, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tactical_core::decomp::{
    fisher_check, gram_matrix, kappa_from_rho, product_lhs, rho_from_selection, theorem1_rhs, verify_design,
    BlockSelection, DesignVerdict,
};
use tactical_core::incidence::{
    chain_expand, choose, compute_d, compute_k, compute_r, kr_closed_form_high, kr_closed_form_low, IncidenceTables,
};
use tactical_core::matrix::is_positive_definite;
use tactical_core::params::{lambda_ij, lambda_s, lambda_triangle, pascal_check};
use tactical_core::permgroup::{build_sequence, validate_tactical};
use tactical_core::qanalog::{
    brute_subspaces, check_complete_design, gauss_binom, q_lambda1, q_lambda1_at, q_lambda2, verify_intersection_identity,
    QDesignParams,
};
use tactical_core::solver::{solve_all, LinearSystem};
use tactical_core::{DesignParams, GeneratorSet, IntMatrix, Permutation, TacticalSequence};
use tactical::parallel;

const GROUPS: u64 = 24;

fn random_permutation(rng: &mut ChaCha8Rng, v: usize) -> Permutation {
    let mut support: Vec<usize> = (0..v).collect();
    support.shuffle(rng);
    support.truncate(rng.gen_range(2..=v));
    let mut shuffled = support.clone();
    shuffled.shuffle(rng);
    let mut images: Vec<usize> = (0..v).collect();
    for (&a, &b) in support.iter().zip(&shuffled) {
        images[a] = b;
    }
    Permutation::from_images(&images).expect("a permutation")
}

/// A group on 4 to 8 points from zero, one or two random generators.
fn random_sequence(seed: u64) -> TacticalSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = rng.gen_range(4..=8);
    let gens = (0..rng.gen_range(0..=2)).map(|_| random_permutation(&mut rng, v)).collect();
    build_sequence(&GeneratorSet::new(v, gens).expect("generators"), v).expect("sequence")
}

/// Up to `limit` orbit unions solving `R⁽ᵗᵏ⁾ x = λ 1` over `{0,1}`.
fn orbit_designs(seq: &TacticalSequence, t: usize, k: usize, lambda: i64, limit: usize) -> Result<Vec<BlockSelection>> {
    let r = compute_r(seq, t, k)?;
    if r.cols() > 24 {
        return Ok(Vec::new());
    }
    let mut sys = LinearSystem::new(vec![(0, 1); r.cols()])?;
    for a in 0..r.rows() {
        let row: Vec<i64> = (0..r.cols()).map(|c| i64::try_from(r.get(a, c)).expect("small entry")).collect();
        sys.add_row(&row, lambda)?;
    }
    Ok(sys
        .solutions()
        .take(limit)
        .map(|x| BlockSelection::new(k, (0..x.len()).filter(|&c| x[c] == 1).collect()))
        .collect())
}

/// The complete designs for `t <= 2` plus orbit unions with `λ <= 3`.
fn designs(seq: &TacticalSequence) -> Result<Vec<(BlockSelection, DesignParams)>> {
    let v = seq.v();
    let mut out = Vec::new();
    for t in 1..=2usize {
        for k in t + 1..=v - t {
            let cells = seq.level(k)?.len();
            let full = u64::try_from(choose(v - t, k - t))?;
            out.push((BlockSelection::new(k, (0..cells).collect()), DesignParams::new(t as u64, v as u64, k as u64, full)?));
            for lambda in 1..=3u64 {
                let Ok(p) = DesignParams::new(t as u64, v as u64, k as u64, lambda) else { continue };
                out.extend(orbit_designs(seq, t, k, lambda as i64, 2)?.into_iter().map(|s| (s, p)));
            }
        }
    }
    Ok(out)
}

fn check_incidence(seq: &TacticalSequence) -> Result<()> {
    ensure!(validate_tactical(seq).is_ok(), "sequence is not tactical");
    let (v, s) = (seq.v(), seq.depth());
    let tables = IncidenceTables::from_sequence(seq)?;
    for x in 0..=s {
        let dx = compute_d(seq, x)?;
        for y in x..=s {
            let (r, k, dy) = (compute_r(seq, x, y)?, compute_k(seq, x, y)?, compute_d(seq, y)?);
            for a in 0..r.rows() {
                for b in 0..r.cols() {
                    ensure!(r.get(a, b) * dx.get(a) == k.get(a, b) * dy.get(b), "D R = K D fails at ({x},{y})");
                }
            }
            ensure!(r.matrix().row_sums().iter().all(|c| *c == choose(v - x, v - y)), "R row sums at ({x},{y})");
            ensure!(k.matrix().col_sums().iter().all(|c| *c == choose(y, x)), "K column sums at ({x},{y})");
            for z in y..=s {
                let c = choose(z - x, y - x);
                ensure!(r.mul(&compute_r(seq, y, z)?)?.matrix() == &compute_r(seq, x, z)?.matrix().scale(&c), "R chain ({x},{y},{z})");
                ensure!(k.mul(&compute_k(seq, y, z)?)?.matrix() == &compute_k(seq, x, z)?.matrix().scale(&c), "K chain ({x},{y},{z})");
            }
            if y > x {
                let chain: Vec<_> = (x..y).map(|i| compute_r(seq, i, i + 1)).collect::<Result<_, _>>()?;
                ensure!(chain_expand(&chain)?.matrix() == r.matrix(), "chain expansion ({x},{y})");
            }
        }
    }
    for x in 0..=s {
        for z in 0..=s {
            for y in 0..=x.min(z) {
                let lhs = compute_k(seq, y, x)?.transpose().mul(&compute_r(seq, y, z)?)?;
                ensure!(kr_closed_form_low(seq, x, y, z)?.matrix() == lhs.matrix(), "K^T R closed form ({x},{y},{z})");
            }
            for y in x.max(z)..=s {
                let rhs = compute_r(seq, x, y)?.mul(&compute_k(seq, z, y)?.transpose())?;
                ensure!(kr_closed_form_high(seq, x, y, z)?.matrix() == rhs.matrix(), "R K^T closed form ({x},{y},{z})");
            }
        }
    }
    let chain: Vec<IntMatrix> = (0..s).map(|i| compute_r(seq, i, i + 1).map(|m| m.into_matrix())).collect::<Result<_, _>>()?;
    let from_chain = IncidenceTables::from_chain(v, &chain)?;
    for x in 0..=s {
        for y in x..=s {
            ensure!(from_chain.r(x, y)?.matrix() == tables.r(x, y)?.matrix(), "R from the chain ({x},{y})");
            ensure!(from_chain.k(x, y)?.matrix() == tables.k(x, y)?.matrix(), "K from the chain ({x},{y})");
        }
    }
    Ok(())
}

fn check_design(seq: &TacticalSequence, sel: &BlockSelection, p: &DesignParams) -> Result<()> {
    let k = p.k();
    let tables = IncidenceTables::from_sequence(seq)?;
    let table = lambda_triangle(p);
    let delta = sel.sizes(seq)?;
    ensure!(verify_design(seq.v(), &sel.blocks(seq)?, p.t())? == DesignVerdict::Design { lambda: p.lambda }, "{p} is not a design");
    let rho: Vec<_> = (0..=k).map(|x| rho_from_selection(seq, sel, x)).collect::<Result<_, _>>()?;
    let kappa: Vec<_> = (0..=k).map(|x| compute_k(seq, x, k).map(|m| m.matrix().select_columns(sel.cells()))).collect::<Result<_, _>>()?;
    for x in 0..=k {
        ensure!(kappa_from_rho(&rho[x], &compute_d(seq, x)?, &delta)?.matrix() == &kappa[x], "kappa from rho at {x}");
        for y in x..=k {
            let c = choose(k - x, y - x);
            ensure!(tables.r(x, y)?.matrix().mul(rho[y].matrix())? == rho[x].matrix().scale(&c), "R rho at ({x},{y})");
            ensure!(tables.k(x, y)?.matrix().mul(&kappa[y])? == kappa[x].scale(&c), "K kappa at ({x},{y})");
        }
    }
    for e in 0..=p.t() {
        let lambda_e = lambda_s(p, e)?.to_integer();
        ensure!(rho[e].matrix().row_sums().iter().all(|s| *s == lambda_e), "rho({e}) row sums");
        for f in 0..=p.t() - e {
            let lhs = product_lhs(seq, sel, p, e, f)?;
            ensure!(lhs.matrix() == &rho[e].matrix().mul(&kappa[f].transpose())?, "product ({e},{f})");
            ensure!(lhs.matrix() == theorem1_rhs(&tables, &table, e, f)?.matrix(), "right-hand side ({e},{f})");
        }
    }
    for x in 0..=p.t() {
        for y in 0..=p.t() - x {
            ensure!(pascal_check(p, x, y)?, "lambda recursion ({x},{y})");
        }
    }
    Ok(())
}

/// With the trivial group, `N⁽ᵉ⁾N⁽ᶠ⁾ᵀ = Σ_i λ_{e+f-i,i} W⁽ⁱᵉ⁾ᵀW⁽ⁱᶠ⁾` and
/// `N Nᵀ = (λ₁ - λ) I + λ J`.
fn check_classical() -> Result<usize> {
    let mut n_cases = 0;
    for (v, k, lambda) in [(7usize, 3usize, 1u64), (6, 3, 2), (7, 4, 2), (6, 2, 1)] {
        let seq = build_sequence(&GeneratorSet::trivial(v)?, k)?;
        let p = DesignParams::new(2, v as u64, k as u64, lambda)?;
        let r = compute_r(&seq, 2, k)?;
        let mut sys = LinearSystem::new(vec![(0, 1); r.cols()])?;
        for a in 0..r.rows() {
            let row: Vec<i64> = (0..r.cols()).map(|c| i64::try_from(r.get(a, c)).expect("0 or 1")).collect();
            sys.add_row(&row, lambda as i64)?;
        }
        let x = sys.solutions().next().ok_or_else(|| anyhow::anyhow!("no {p} found"))?;
        let sel = BlockSelection::new(k, (0..x.len()).filter(|&c| x[c] == 1).collect());
        check_design(&seq, &sel, &p)?;
        let tables = IncidenceTables::from_sequence(&seq)?;
        let table = lambda_triangle(&p);
        let n: Vec<IntMatrix> = (0..=k).map(|e| rho_from_selection(&seq, &sel, e).map(|m| m.into_matrix())).collect::<Result<_, _>>()?;
        for e in 0..=2 {
            for f in 0..=2 - e {
                let mut sum = IntMatrix::zeros(n[e].rows(), n[f].rows());
                for i in 0..=e.min(f) {
                    let w = tables.r(i, e)?.matrix().transpose().mul(tables.r(i, f)?.matrix())?;
                    sum = sum.add(&w.scale(&table.integer(e + f - i, i)?))?;
                }
                ensure!(n[e].mul(&n[f].transpose())? == sum, "{p}: N N^T sum at ({e},{f})");
            }
        }
        let l1 = lambda_s(&p, 1)?.to_integer();
        let expected = IntMatrix::from_fn(v, v, |a, b| if a == b { l1.clone() } else { BigInt::from(lambda) });
        ensure!(n[1].mul(&n[1].transpose())? == expected, "{p}: N N^T");
        n_cases += 1;
    }
    Ok(n_cases)
}

pub fn criterion8() -> Result<String> {
    let mut designs_checked = 0;
    for seed in 0..GROUPS {
        let seq = random_sequence(seed);
        check_incidence(&seq)?;
        for (sel, p) in designs(&seq)? {
            check_design(&seq, &sel, &p)?;
            designs_checked += 1;
        }
    }
    let classical = check_classical()?;
    ensure!(designs_checked >= 50, "only {designs_checked} designs");
    Ok(format!("{GROUPS} random groups, {designs_checked} designs, {classical} trivial-group cases"))
}

pub fn criterion9() -> Result<String> {
    let mut checked = 0;
    for seed in 0..GROUPS {
        let seq = random_sequence(seed + 1000);
        for (sel, p) in designs(&seq)? {
            for line in fisher_check(&seq, &sel, &p)? {
                ensure!(line.holds && line.gram_positive_definite, "{p}: {line:?}");
                checked += 1;
            }
        }
    }
    let c = crate::six_points::six_points();
    let seq = c.seq()?;
    let all = orbit_designs(seq, 2, 3, 2, 100)?;
    ensure!(!all.is_empty(), "no 2-(6,3,2) designs");
    for sel in &all {
        for line in fisher_check(seq, sel, &c.params)? {
            ensure!(line.holds && line.gram_positive_definite, "2-(6,3,2): {line:?}");
        }
    }
    let reference = tactical_core::decomp::BlockSelection::new(3, vec![0, 2, 5, 7]);
    let gram = gram_matrix(&rho_from_selection(seq, &reference, 2)?, &reference.sizes(seq)?)?;
    ensure!(gram.dim() == 5, "Gram matrix at x = 2 has dimension {}", gram.dim());
    ensure!(gram.matrix().determinant()?.is_zero(), "Gram matrix at x = 2 is not singular");
    ensure!(!is_positive_definite(&gram), "singular Gram matrix reported definite");
    ensure!(checked >= 100, "only {checked} Gram checks");
    Ok(format!("{checked} Gram/Fisher checks; example x = 2 Gram is 5x5 with det 0"))
}

fn random_system(seed: u64) -> Result<(LinearSystem, Vec<(i64, i64)>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=12);
    let bounds: Vec<(i64, i64)> = (0..n)
        .map(|_| {
            let lo = rng.gen_range(0..=1);
            (lo, rng.gen_range(lo..=3))
        })
        .collect();
    let hidden: Vec<i64> = bounds.iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)).collect();
    let mut sys = LinearSystem::new(bounds.clone())?;
    for _ in 0..rng.gen_range(0..=4) {
        let coeffs: Vec<i64> = (0..n).map(|_| if rng.gen_bool(0.3) { 0 } else { rng.gen_range(-2..=3) }).collect();
        let mut rhs: i64 = coeffs.iter().zip(&hidden).map(|(a, x)| a * x).sum();
        if rng.gen_bool(0.25) {
            rhs += rng.gen_range(-2..=2);
        }
        sys.add_row(&coeffs, rhs)?;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    sys.set_order(order)?;
    Ok((sys, bounds))
}

fn box_solutions(sys: &LinearSystem, bounds: &[(i64, i64)]) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    let mut x: Vec<i64> = bounds.iter().map(|b| b.0).collect();
    loop {
        if sys.is_satisfied(&x) {
            out.insert(x.clone());
        }
        let Some(i) = (0..x.len()).find(|&i| x[i] < bounds[i].1) else { return out };
        x[i] += 1;
        for (xj, b) in x[..i].iter_mut().zip(bounds) {
            *xj = b.0;
        }
    }
}

pub fn criterion10() -> Result<String> {
    const SYSTEMS: u64 = 200;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build()?;
    let mut total = 0;
    for seed in 0..SYSTEMS {
        let (sys, bounds) = random_system(seed)?;
        let stream = solve_all(&sys, None);
        let found: BTreeSet<Vec<i64>> = stream.solutions.iter().cloned().collect();
        ensure!(found.len() == stream.solutions.len(), "system {seed}: duplicate solutions");
        ensure!(found == box_solutions(&sys, &bounds), "system {seed}: differs from box enumeration");
        let split = pool.install(|| parallel::run(&sys, usize::MAX));
        ensure!(split.solutions == stream.solutions, "system {seed}: split run changes the stream");
        total += found.len();
    }
    Ok(format!("{SYSTEMS} systems, {total} solutions, all equal to box enumeration"))
}

pub fn criterion11() -> Result<String> {
    let mut checks = 0;
    for v in 0..=5u64 {
        for d in 0..=v {
            ensure!(BigInt::from(brute_subspaces(2, v as usize, d as usize)?.len()) == gauss_binom(v, d, 2), "[{v},{d}]_2");
            checks += 1;
        }
    }
    for (q, v) in [(3u64, 3u64), (4, 2), (3, 4)] {
        for d in 0..=v {
            ensure!(BigInt::from(brute_subspaces(q, v as usize, d as usize)?.len()) == gauss_binom(v, d, q), "[{v},{d}]_{q}");
            checks += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for v in 2..=5u64 {
        for t in 0..=v / 2 {
            for k in t..=v - t {
                for c in check_complete_design(2, t, v, k, &mut rng)? {
                    ensure!(c.holds(), "t={t} v={v} k={k}: {c:?}");
                    checks += 1;
                }
            }
        }
    }
    for v in 1..=5usize {
        for k in 0..=v {
            for i in 0..=k {
                for j in 0..=k - i {
                    ensure!(verify_intersection_identity(2, v, k, i, j, &mut rng)?, "intersection identity v={v} k={k} i={i} j={j}");
                    checks += 1;
                }
            }
        }
    }
    let p = QDesignParams::new(2, 2, 4, 2, 1)?;
    ensure!(q_lambda1(&p, 1, 1)? == BigRational::from_integer(3.into()), "lambda1_(1,1) of 2-(4,2,1)_2");
    ensure!(q_lambda2(&p, 1, 1)? == BigRational::from_integer(6.into()), "lambda2_(1,1) of 2-(4,2,1)_2");
    for (q, t, v, k, lambda) in [(2u64, 2u64, 6u64, 3u64, 3u64), (3, 2, 7, 3, 1), (2, 3, 8, 4, 1)] {
        let p = QDesignParams::new(q, t, v, k, lambda)?;
        for n in 0..=t as usize {
            for j in 0..=n {
                let i = n - j;
                let factor = BigRational::from_integer(Pow::pow(BigInt::from(q), j as u64 * (k - i as u64)));
                ensure!(q_lambda2(&p, i, j)? == q_lambda1(&p, i, j)? * factor, "scaling at ({i},{j})");
                let ordinary = lambda_ij(&DesignParams::new(t, v, k, lambda)?, i, j)?;
                ensure!(q_lambda1_at(&p, i, j, &BigRational::from_integer(1.into()))? == ordinary, "q = 1 limit at ({i},{j})");
                checks += 2;
            }
        }
    }
    Ok(format!("{checks} checks against brute-force subspace counts and formulas"))
}
