use qcomb_core::exactnum::{lift, Sampler, SamplerConfig};
use qcomb_core::partitions;
use qcomb_core::uqrep::{self, Order, TensorModule, TensorVector, WeightParams};
use qcomb_core::{ModP, Rational, Ring, Scalar};

fn draw<F: Scalar>(n: usize, seed: u64) -> (WeightParams<F>, Sampler) {
    let mut s = Sampler::new(SamplerConfig { seed, ..Default::default() });
    let g = |name: String, s: &mut Sampler| lift::<F>(&s.generic(&name, &[]).unwrap()).unwrap();
    let q = g("q".into(), &mut s);
    let sv = (1..=n).map(|m| g(format!("s{m}"), &mut s)).collect();
    let z = (1..=n).map(|m| g(format!("z{m}"), &mut s)).collect();
    (WeightParams::new(q, sv, z).unwrap(), s)
}

fn fresh<F: Scalar>(s: &mut Sampler, k: usize) -> Vec<F> {
    let mut seen = Vec::new();
    (0..k)
        .map(|a| {
            let v = s.generic(&format!("t{}", a + 1), &seen).unwrap();
            seen.push(v.clone());
            lift::<F>(&v).unwrap()
        })
        .collect()
}

#[test]
fn rll_on_two_factors() {
    for seed in 0..3 {
        let (wp, mut s) = draw::<Rational>(2, 10 + seed);
        let tm = TensorModule::new(&wp, Order::Forward, 4).unwrap();
        let uz = fresh::<Rational>(&mut s, 2);
        assert_eq!(uqrep::rll_mismatches(&tm, &uz[0], &uz[1], 2, false).unwrap(), 0);
        assert!(uqrep::rll_mismatches(&tm, &uz[0], &uz[1], 2, true).unwrap() > 0);
    }
}

#[test]
fn rll_in_prime_field() {
    let (wp, mut s) = draw::<ModP<2305843009213693951>>(2, 3);
    let tm = TensorModule::new(&wp, Order::Forward, 4).unwrap();
    let uz = fresh::<ModP<2305843009213693951>>(&mut s, 2);
    assert_eq!(uqrep::rll_mismatches(&tm, &uz[0], &uz[1], 2, false).unwrap(), 0);
}

#[test]
fn rll_single_module() {
    let (wp, mut s) = draw::<Rational>(1, 44);
    let tm = TensorModule::new(&wp, Order::Forward, 4).unwrap();
    let uz = fresh::<Rational>(&mut s, 2);
    assert_eq!(uqrep::rll_mismatches(&tm, &uz[0], &uz[1], 2, false).unwrap(), 0);
}

#[test]
fn kbi_both_directions() {
    for ell in 0..=3 {
        for n in 1..=3 {
            let (wp, mut s) = draw::<Rational>(n, 100 + 10 * ell as u64 + n as u64);
            let t = fresh::<Rational>(&mut s, ell);
            let (l, r) = uqrep::kbi_raising(&wp, &t).unwrap();
            assert_eq!(l, r, "raising {ell} {n}");
            for lam in partitions::enumerate(ell, n).unwrap() {
                let (l, r) = uqrep::kbi_lowering(&wp, &lam, &t).unwrap();
                assert_eq!(l, r, "lowering {ell} {n} {lam}");
            }
        }
    }
}

#[test]
fn bc_under_resonance() {
    for ell in 0..=2 {
        for n in [2, 3] {
            for i in 1..=n {
                for j in i + 1..=n {
                    let (mut wp, mut s) = draw::<Rational>(n, 500 + ell as u64 * 31 + (n * 7 + i * 3 + j) as u64);
                    let free = wp.clone();
                    wp.impose_resonance(i, j, ell).unwrap();
                    let t = fresh::<Rational>(&mut s, ell + 1);
                    assert!(uqrep::bc1(&wp, ell, j, &t, false).unwrap().is_zero(), "bc1 {ell} {n} {i} {j}");
                    assert!(uqrep::bc2(&wp, ell, j, &t, false).unwrap().is_zero(), "bc2 {ell} {n} {i} {j}");
                    assert!(!uqrep::bc1(&wp, ell, j, &t, true).unwrap().is_zero());
                    assert!(!uqrep::bc2(&wp, ell, j, &t, true).unwrap().is_zero());
                    assert!(!uqrep::bc1(&free, ell, j, &t, false).unwrap().is_zero());
                    assert!(!uqrep::bc2(&free, ell, j, &t, false).unwrap().is_zero());
                    // the printed string with only ℓ raising operators is zero for depth reasons
                    assert!(uqrep::bc1(&free, ell, j, &t[..ell], false).unwrap().is_zero());
                    let us = fresh::<Rational>(&mut s, n + ell + 2);
                    assert!(uqrep::singular_check(&wp, ell, j, &us, false).unwrap().iter().all(TensorVector::is_zero));
                    assert!(!uqrep::singular_check(&free, ell, j, &us, false)
                        .unwrap()
                        .iter()
                        .all(TensorVector::is_zero));
                    assert!(!uqrep::singular_check(&wp, ell, j, &us, true).unwrap().iter().all(TensorVector::is_zero));
                }
            }
        }
    }
}

#[test]
fn submodule_annihilation() {
    for (ell, n, i, j) in [(0, 2, 1, 2), (1, 2, 1, 2), (1, 3, 1, 3)] {
        let (mut wp, mut s) = draw::<Rational>(n, 800 + ell as u64 + n as u64);
        let free = wp.clone();
        wp.impose_resonance(i, j, ell).unwrap();
        let mut k = 0;
        let mut next = || {
            k += 1;
            lift::<Rational>(&s.generic(&format!("u{k}"), &[]).unwrap())
        };
        let on = uqrep::submodule_sweep(&wp, ell, j, ell + 2, false, &mut next).unwrap();
        assert_eq!(on.survivors, 0);
        assert!(on.deep_words > 0);
        let off = uqrep::submodule_sweep(&free, ell, j, ell + 2, false, &mut next).unwrap();
        assert!(off.survivors > 0);
    }
}

#[test]
fn depth_grading() {
    let (wp, mut s) = draw::<Rational>(3, 9);
    let tm = TensorModule::new(&wp, Order::Forward, 6).unwrap();
    let t = fresh::<Rational>(&mut s, 4);
    let v = tm.apply_string(1, 2, &t[..2], &tm.highest()).unwrap();
    assert_eq!(v.depths(), vec![2]);
    assert_eq!(tm.apply(1, 2, &t[2], &v).unwrap().depths(), vec![3]);
    assert_eq!(tm.apply(2, 1, &t[2], &v).unwrap().depths(), vec![1]);
    assert_eq!(tm.apply(1, 1, &t[3], &v).unwrap().depths(), vec![2]);
    assert_eq!(tm.apply(2, 2, &t[3], &v).unwrap().depths(), vec![2]);
}

#[test]
fn entries_are_polynomials_of_degree_n_in_u() {
    // every coefficient of L_ij(u)·w is a polynomial of degree <= n in u: the
    // values at n+2 points satisfy the vanishing (n+1)-st divided difference
    let n = 2;
    let (wp, mut s) = draw::<Rational>(n, 19);
    let tm = TensorModule::new(&wp, Order::Forward, 4).unwrap();
    let w = tm.apply_string(1, 2, &fresh::<Rational>(&mut s, 2), &tm.highest()).unwrap();
    let us = fresh::<Rational>(&mut s, n + 2);
    for (i, j) in [(1u8, 1u8), (1, 2), (2, 1), (2, 2)] {
        let vals: Vec<TensorVector<Rational>> = us.iter().map(|u| tm.apply(i, j, u, &w).unwrap()).collect();
        let keys: std::collections::BTreeSet<_> = vals.iter().flat_map(|v| v.coeffs.keys().cloned()).collect();
        for key in keys {
            let mut dd: Vec<Rational> = vals.iter().map(|v| v.get(&key)).collect();
            for level in 1..dd.len() {
                for a in 0..dd.len() - level {
                    let num = dd[a + 1].clone() - dd[a].clone();
                    dd[a] = num.div(&(us[a + level].clone() - us[a].clone())).unwrap();
                }
            }
            assert!(dd[0].is_zero(), "({i},{j}) {key:?}");
        }
    }
}

#[test]
fn resonance_maps_to_weight_condition() {
    let (mut wp, _) = draw::<Rational>(3, 77);
    wp.impose_resonance(1, 3, 2).unwrap();
    let pp = wp.param_map().unwrap();
    assert_eq!(pp.x[2], pp.eta.powi(2).unwrap() * pp.y[0].clone());
    for m in 0..3 {
        assert_eq!(pp.x[m].clone() * pp.y[m].clone(), wp.z[m].clone() * wp.z[m].clone());
    }
}
