mod common;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tactical_core::decomp::{
    kappa_from_rho, product_lhs, rho_from_selection, theorem1_rhs, verify_design, BlockSelection, DesignVerdict,
};
use tactical_core::incidence::{
    chain_expand, choose, compute_d, compute_k, compute_r, kr_closed_form_high, kr_closed_form_low, IncidenceTables,
};
use tactical_core::params::{lambda_s, lambda_triangle, pascal_check};
use tactical_core::permgroup::{build_sequence, validate_tactical};
use tactical_core::{DesignParams, GeneratorSet, IntMatrix, TacticalSequence};

fn sequence(seed: u64) -> TacticalSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = rng.gen_range(4..=8);
    let g = common::random_group(&mut rng, v);
    build_sequence(&g, v).unwrap()
}

fn check_incidence_identities(seq: &TacticalSequence) {
    validate_tactical(seq).unwrap();
    let (v, s) = (seq.v(), seq.depth());
    let tables = IncidenceTables::from_sequence(seq).unwrap();
    for x in 0..=s {
        let dx = compute_d(seq, x).unwrap();
        for y in x..=s {
            let (r, k) = (compute_r(seq, x, y).unwrap(), compute_k(seq, x, y).unwrap());
            let dy = compute_d(seq, y).unwrap();
            for a in 0..r.rows() {
                for b in 0..r.cols() {
                    assert_eq!(r.get(a, b) * dx.get(a), k.get(a, b) * dy.get(b), "D R = K D at ({x},{y})");
                }
                let sum: BigInt = r.matrix().row(a).iter().sum();
                assert_eq!(sum, choose(v - x, v - y));
            }
            assert!(k.matrix().col_sums().iter().all(|c| *c == choose(y, x)));
            for z in y..=s {
                let c = choose(z - x, y - x);
                let rr = r.mul(&compute_r(seq, y, z).unwrap()).unwrap();
                assert_eq!(rr.matrix(), &compute_r(seq, x, z).unwrap().matrix().scale(&c));
                let kk = k.mul(&compute_k(seq, y, z).unwrap()).unwrap();
                assert_eq!(kk.matrix(), &compute_k(seq, x, z).unwrap().matrix().scale(&c));
            }
            if y > x {
                let chain: Vec<_> = (x..y).map(|i| compute_r(seq, i, i + 1).unwrap()).collect();
                assert_eq!(chain_expand(&chain).unwrap().matrix(), r.matrix());
            }
            assert_eq!(tables.r(x, y).unwrap().matrix(), r.matrix());
        }
    }
    // K^T R and R K^T: x, z arbitrary, y below both or above both.
    for x in 0..=s {
        for z in 0..=s {
            for y in 0..=x.min(z) {
                let lhs = compute_k(seq, y, x).unwrap().transpose().mul(&compute_r(seq, y, z).unwrap()).unwrap();
                assert_eq!(kr_closed_form_low(seq, x, y, z).unwrap().matrix(), lhs.matrix());
            }
            for y in x.max(z)..=s {
                let rhs = compute_r(seq, x, y).unwrap().mul(&compute_k(seq, z, y).unwrap().transpose()).unwrap();
                assert_eq!(kr_closed_form_high(seq, x, y, z).unwrap().matrix(), rhs.matrix());
            }
        }
    }
    // The adjacent chain alone determines every matrix.
    let chain: Vec<IntMatrix> = (0..s).map(|i| compute_r(seq, i, i + 1).unwrap().into_matrix()).collect();
    let from_chain = IncidenceTables::from_chain(v, &chain).unwrap();
    for x in 0..=s {
        assert_eq!(from_chain.sizes(x).unwrap(), tables.sizes(x).unwrap());
        for y in x..=s {
            assert_eq!(from_chain.r(x, y).unwrap().matrix(), tables.r(x, y).unwrap().matrix());
            assert_eq!(from_chain.k(x, y).unwrap().matrix(), tables.k(x, y).unwrap().matrix());
        }
    }
}

/// kappa from rho, the R rho and K kappa chains, row sums and the product identity for one design.
fn check_design_identities(seq: &TacticalSequence, sel: &BlockSelection, p: &DesignParams) {
    let k = p.k();
    let tables = IncidenceTables::from_sequence(seq).unwrap();
    let table = lambda_triangle(p);
    let delta = sel.sizes(seq).unwrap();
    assert_eq!(verify_design(seq.v(), &sel.blocks(seq).unwrap(), p.t()).unwrap(), DesignVerdict::Design { lambda: p.lambda });
    let rho: Vec<_> = (0..=k).map(|x| rho_from_selection(seq, sel, x).unwrap()).collect();
    let kappa: Vec<_> = (0..=k).map(|x| compute_k(seq, x, k).unwrap().matrix().select_columns(sel.cells())).collect();
    for x in 0..=k {
        let dx = compute_d(seq, x).unwrap();
        let derived = kappa_from_rho(&rho[x], &dx, &delta).unwrap();
        assert_eq!(derived.matrix(), &kappa[x], "kappa from rho at x={x}");
        for y in x..=k {
            let c = choose(k - x, y - x);
            let lhs = tables.r(x, y).unwrap().matrix().mul(rho[y].matrix()).unwrap();
            assert_eq!(lhs, rho[x].matrix().scale(&c), "R rho at ({x},{y})");
            let lhs = tables.k(x, y).unwrap().matrix().mul(&kappa[y]).unwrap();
            assert_eq!(lhs, kappa[x].scale(&c), "K kappa at ({x},{y})");
        }
    }
    for e in 0..=p.t() {
        let lambda_e = lambda_s(p, e).unwrap().to_integer();
        assert!(rho[e].matrix().row_sums().iter().all(|s| *s == lambda_e), "rho row sums");
        for f in 0..=p.t() - e {
            let lhs = product_lhs(seq, sel, p, e, f).unwrap();
            let via_rho = rho[e].matrix().mul(&kappa[f].transpose()).unwrap();
            assert_eq!(lhs.matrix(), &via_rho);
            assert_eq!(lhs.matrix(), theorem1_rhs(&tables, &table, e, f).unwrap().matrix(), "product identity at ({e},{f})");
        }
    }
    for x in 0..=p.t() {
        for y in 0..=p.t() - x {
            assert!(pascal_check(p, x, y).unwrap());
        }
    }
}

/// Designs invariant under the group of `seq`: the complete design for a few
/// `(t, k)` and orbit unions found by the solver.
fn designs(seq: &TacticalSequence) -> Vec<(BlockSelection, DesignParams)> {
    let v = seq.v();
    let mut out = Vec::new();
    for t in 1..=2usize {
        for k in t + 1..=v - t {
            if k > seq.depth() {
                continue;
            }
            let cells = seq.level(k).unwrap().len();
            let full = choose(v - t, k - t);
            let p = DesignParams::new(t as u64, v as u64, k as u64, u64::try_from(full).unwrap()).unwrap();
            out.push((BlockSelection::new(k, (0..cells).collect()), p));
            for lambda in 1..=3 {
                let Ok(p) = DesignParams::new(t as u64, v as u64, k as u64, lambda) else { continue };
                for sel in common::orbit_designs(seq, t, k, lambda as i64, 2, 24) {
                    out.push((sel, p));
                }
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn incidence_identities_hold(seed in any::<u64>()) {
        check_incidence_identities(&sequence(seed));
    }

    #[test]
    fn design_identities_hold(seed in any::<u64>()) {
        let seq = sequence(seed);
        for (sel, p) in designs(&seq) {
            check_design_identities(&seq, &sel, &p);
        }
    }
}

#[test]
fn fixed_groups() {
    let cases: &[(usize, &[&str])] = &[
        (6, &["(0 1 2)(3 4 5)"]),
        (7, &["(0 1 2 3 4 5 6)"]),
        (7, &["(0 1 2 3 4 5 6)", "(1 2 4)(3 6 5)"]),
        (8, &["(0 1 2 3 4 5 6)"]),
        (8, &["(0 1)(2 3)(4 5)(6 7)", "(0 2)(1 3)"]),
        (5, &[]),
    ];
    let mut found = 0;
    for &(v, gens) in cases {
        let g = GeneratorSet::parse(v, gens, tactical_core::PointBase::Zero).unwrap();
        let seq = build_sequence(&g, v).unwrap();
        check_incidence_identities(&seq);
        for (sel, p) in designs(&seq) {
            check_design_identities(&seq, &sel, &p);
            found += 1;
        }
    }
    assert!(found > 20);
}

/// With the trivial group every cell is a single set, so `R = K = W` and
/// `ρ⁽ˣ⁾ = κ⁽ˣ⁾ = N⁽ˣ⁾`.
#[test]
fn trivial_group_classical_equations() {
    for (v, k, lambda) in [(7usize, 3usize, 1u64), (6, 3, 2), (7, 4, 2), (6, 2, 1)] {
        let seq = build_sequence(&GeneratorSet::trivial(v).unwrap(), k).unwrap();
        let p = DesignParams::new(2, v as u64, k as u64, lambda).unwrap();
        let sels = common::orbit_designs(&seq, 2, k, lambda as i64, 1, 64);
        assert_eq!(sels.len(), 1, "{p}");
        let sel = &sels[0];
        check_design_identities(&seq, sel, &p);
        let tables = IncidenceTables::from_sequence(&seq).unwrap();
        for x in 0..=k {
            assert_eq!(tables.r(x, k).unwrap().matrix(), tables.k(x, k).unwrap().matrix());
        }
        let n: Vec<IntMatrix> = (0..=k).map(|e| rho_from_selection(&seq, sel, e).unwrap().into_matrix()).collect();
        let table = lambda_triangle(&p);
        // N⁽ᵉ⁾ N⁽ᶠ⁾ᵀ = Σ_i λ_{e+f-i,i} W⁽ⁱᵉ⁾ᵀ W⁽ⁱᶠ⁾
        for e in 0..=2 {
            for f in 0..=2 - e {
                let mut sum = IntMatrix::zeros(n[e].rows(), n[f].rows());
                for i in 0..=e.min(f) {
                    let w = tables.r(i, e).unwrap().matrix().transpose().mul(tables.r(i, f).unwrap().matrix()).unwrap();
                    sum = sum.add(&w.scale(&table.integer(e + f - i, i).unwrap())).unwrap();
                }
                assert_eq!(n[e].mul(&n[f].transpose()).unwrap(), sum);
            }
        }
        // W⁽ⁱᵉ⁾ N⁽ᵉ⁾ = C(k-i, e-i) N⁽ⁱ⁾
        for e in 0..=k {
            for i in 0..=e {
                let lhs = tables.r(i, e).unwrap().matrix().mul(&n[e]).unwrap();
                assert_eq!(lhs, n[i].scale(&choose(k - i, e - i)));
            }
        }
        // N Nᵀ = (λ₁ - λ) I + λ J
        let l1 = lambda_s(&p, 1).unwrap().to_integer();
        let lam = BigInt::from(lambda);
        let expected = IntMatrix::from_fn(v, v, |a, b| if a == b { l1.clone() } else { lam.clone() });
        assert_eq!(n[1].mul(&n[1].transpose()).unwrap(), expected);
    }
}
