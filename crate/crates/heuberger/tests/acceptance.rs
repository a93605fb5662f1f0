//! End-to-end acceptance checks: every classifier verdict is validated against
//! the brute-force oracle on explicit finite graphs, and every verdict is
//! backed by a machine-checkable certificate.

use heuberger::cayley::{bfs_ball, circulant_graph, finite_quotient_graph, DEFAULT_BALL_CAP};
use heuberger::certify::{build_certificate, verify_certificate, Evidence};
use heuberger::classify::{
    chi_1xr, chi_2x2, chi_3x2_mhnf, chi_3x2_minors, circulant_chi, classify, CirculantSpec, Status,
};
use heuberger::intmat::{columns_dependent, gcd, membership, minors_3x2, solve, HeubergerMatrix};
use heuberger::normalform::{mhnf_3x2, mhnf_failing_condition, reduce, ShapeClass};
use heuberger::oracle::{chi_bounds_infinite, default_moduli, exact_chi, independence_number};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mat(rows: Vec<Vec<i64>>) -> HeubergerMatrix {
    HeubergerMatrix::new(rows).unwrap()
}

/// All connected loop-free circulants C_n(a, b) with 2 <= n <= max_n, up to
/// the a <-> b symmetry.
fn circulant_specs(max_n: i64) -> Vec<CirculantSpec> {
    let mut specs = Vec::new();
    for n in 2..=max_n {
        for a in 1..n {
            for b in a..n {
                if gcd(gcd(a, b), n) == 1 {
                    specs.push(CirculantSpec::new(n, a, b).unwrap());
                }
            }
        }
    }
    specs
}

/// All lower-triangular 2x2 matrices with y11, y22 in [0, 12], y21 in [-12, 12].
fn lower_2x2_sweep() -> Vec<HeubergerMatrix> {
    let mut out = Vec::new();
    for y11 in 0..=12 {
        for y22 in 0..=12 {
            for y21 in -12..=12 {
                out.push(mat(vec![vec![y11, 0], vec![y21, y22]]));
            }
        }
    }
    out
}

/// The six exceptional chi = 4 families of 3x2 matrices, instantiated over
/// k in {1,2,3}, b in {-2..2}, a in {1,2,4,5}.
fn family_matrices() -> Vec<HeubergerMatrix> {
    let mut out = Vec::new();
    for k in 1..=3i64 {
        for s in [1i64, -1] {
            out.push(mat(vec![vec![1, 0], vec![0, 1], vec![s * 3 * k, 1 + 3 * k]]));
            out.push(mat(vec![vec![1, 0], vec![0, -1], vec![s * 3 * k, -1 + 3 * k]]));
        }
        out.push(mat(vec![vec![1, 0], vec![-1, 2], vec![-1 - 3 * k, 2 + 3 * k]]));
        out.push(mat(vec![vec![1, 0], vec![-1, -2], vec![-1 + 3 * k, -2 + 3 * k]]));
    }
    for b in -2..=2i64 {
        if b == 0 {
            // first column becomes e_1, so the loop clause applies instead
            continue;
        }
        out.push(mat(vec![vec![1, 0], vec![0, -1], vec![3 * b, 2]]));
    }
    for a in [1i64, 2, 4, 5] {
        for k in 1..=3i64 {
            if a == 1 && k == 1 {
                // the column span contains e_1, so the loop clause applies
                continue;
            }
            out.push(mat(vec![vec![1, 0], vec![-1, a], vec![-1, a + 3 * (k - 1)]]));
        }
    }
    out
}

/// 1000 random 3x2 matrices with entries in [-6, 6], no zero rows, and
/// columns independent over Q, from a fixed seed.
fn random_3x2_sample() -> Vec<HeubergerMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    let mut sample = Vec::new();
    while sample.len() < 1000 {
        let rows: Vec<Vec<i64>> = (0..3)
            .map(|_| (0..2).map(|_| rng.gen_range(-6..=6)).collect())
            .collect();
        let m = mat(rows);
        if (0..3).any(|i| m.is_zero_row(i)) || columns_dependent(&m).unwrap() {
            continue;
        }
        sample.push(m);
    }
    sample
}

fn has_loop(m: &HeubergerMatrix) -> bool {
    let rows = m.num_rows();
    (0..rows).any(|i| {
        let mut e = vec![0i64; rows];
        e[i] = 1;
        membership(m, &e).unwrap()
    })
}

fn sorted_abs_minors(m: &HeubergerMatrix) -> [i64; 3] {
    let (a, b, c) = minors_3x2(m).unwrap();
    let mut s = [a.abs(), b.abs(), c.abs()];
    s.sort();
    s
}

/// 2x2 matrix whose column lattice is the kernel of (x, y) -> a x + b y mod n,
/// so its graph is exactly C_n(a, b).
fn circulant_kernel_matrix(spec: &CirculantSpec) -> HeubergerMatrix {
    let (n, a, b) = (spec.n, spec.a, spec.b);
    let d = gcd(a, b);
    let w = solve(&mat(vec![vec![a, b]]), &[d])
        .unwrap()
        .expect("gcd is in the lattice of a row matrix");
    let m = mat(vec![vec![b / d, n * w[0]], vec![-a / d, n * w[1]]]);
    assert_eq!(m.det().unwrap().abs(), n.abs(), "kernel lattice has index n");
    m
}

fn round_trip(m: &HeubergerMatrix, v: &heuberger::classify::Verdict) {
    let cert = build_certificate(m, v)
        .unwrap_or_else(|e| panic!("certificate build failed for {m}: {e}"));
    let out = verify_certificate(m, &cert).unwrap();
    assert!(out.valid, "certificate for {m} rejected: {}", out.reason);
}

#[test]
fn c1_circulant_sweep_matches_oracle() {
    for spec in circulant_specs(30) {
        let chi = circulant_chi(&spec).unwrap();
        let g = circulant_graph(&spec).unwrap();
        let oracle = exact_chi(&g).unwrap();
        assert_eq!(
            chi, oracle,
            "C_{}({}, {}): classifier {chi} vs oracle {oracle}",
            spec.n, spec.a, spec.b
        );
    }
    println!("circulant sweep |n| <= 30: pass");
}

#[test]
fn c2_c13_1_5_chromatic_and_independence() {
    let g = circulant_graph(&CirculantSpec::new(13, 1, 5).unwrap()).unwrap();
    assert_eq!(exact_chi(&g).unwrap(), 4);
    assert_eq!(independence_number(&g, 64).unwrap(), 4);
    println!("C_13(1,5): chi = 4 and independence number = 4: pass");
}

#[test]
fn c3_lower_triangular_2x2_exhaustive() {
    for m in lower_2x2_sweep() {
        let v = chi_2x2(&m).unwrap();
        let looped = has_loop(&m);
        if looped {
            assert_eq!(v.status, Status::Loops, "{m}: loop missed");
            continue;
        }
        assert_ne!(v.status, Status::Loops, "{m}: spurious loop verdict");
        let chi = v.chi().unwrap();
        let det = m.det().unwrap();
        if det != 0 {
            let g = finite_quotient_graph(&m, &[]).unwrap();
            let oracle = exact_chi(&g).unwrap();
            assert_eq!(chi, oracle, "{m}: classifier {chi} vs oracle {oracle}");
            continue;
        }
        let rf = reduce(&m).unwrap();
        match rf.shape_class {
            ShapeClass::Row1xR => {
                let truth = chi_1xr(&rf.matrix.row(0));
                assert_eq!(v.status, truth.status, "{m}: disagrees with row rule");
            }
            ShapeClass::Lower2x2 => {
                // zero column deleted and padded back: the graph is infinite,
                // so bracket chi with a ball and loop-free finite quotients
                let ball = bfs_ball(&m, 12, DEFAULT_BALL_CAP).unwrap();
                let lower = exact_chi(&ball).unwrap();
                assert_eq!(lower, chi, "{m}: ball lower bound {lower} vs {chi}");
                let mut upper = u32::MAX;
                for n in 2..=16 {
                    if let Ok(g) = finite_quotient_graph(&m, &[vec![n, 0]]) {
                        if !g.has_loops() {
                            upper = upper.min(exact_chi(&g).unwrap());
                            if upper == lower {
                                break;
                            }
                        }
                    }
                }
                assert_eq!(upper, chi, "{m}: quotient upper bound {upper} vs {chi}");
            }
            other => panic!("{m}: unexpected reduced shape {other:?}"),
        }
    }
    println!("2x2 exhaustive sweep vs oracle: pass");
}

#[test]
fn c4_exceptional_families_bounds_and_certificates() {
    for m in family_matrices() {
        let v = classify(&m).unwrap();
        assert_eq!(v.chi(), Some(4), "{m}: expected chi = 4, got {:?}", v.status);
        let mut bounds = None;
        for radius in 7..=9 {
            let b = chi_bounds_infinite(&m, radius, &default_moduli(), DEFAULT_BALL_CAP).unwrap();
            let done = b.lower >= 4;
            bounds = Some(b);
            if done {
                break;
            }
        }
        let b = bounds.unwrap();
        assert!(b.lower >= 4, "{m}: ball lower bound only {}", b.lower);
        assert_eq!(b.upper, 4, "{m}: quotient upper bound {}", b.upper);
        let cert = build_certificate(&m, &v).unwrap();
        let lower_evidence = cert.evidence.iter().any(|e| {
            matches!(
                e,
                Evidence::Lanyard(_) | Evidence::C13Embedding { .. } | Evidence::K5Embedding { .. }
            )
        });
        assert!(lower_evidence, "{m}: certificate lacks lower-bound evidence");
        let out = verify_certificate(&m, &cert).unwrap();
        assert!(out.valid, "{m}: certificate rejected: {}", out.reason);
    }
    println!("six exceptional families: classifier, bounds, certificates: pass");
}

#[test]
fn c5_random_3x2_consistency() {
    for m in random_3x2_sample() {
        let (nf, _) = mhnf_3x2(&m).unwrap();
        assert_eq!(
            mhnf_failing_condition(&nf).unwrap(),
            None,
            "{m}: normal form {nf} fails a condition"
        );
        assert_eq!(
            sorted_abs_minors(&m),
            sorted_abs_minors(&nf),
            "{m}: minor multiset changed by normalization"
        );
        let vm = chi_3x2_mhnf(&nf).unwrap();
        match chi_3x2_minors(&m) {
            Ok(v2) => assert_eq!(
                vm.chi(),
                v2.chi(),
                "{m}: normal-form rule {:?} vs minor rule {:?}",
                vm.status,
                v2.status
            ),
            Err(_) => assert_eq!(vm.status, Status::Loops, "{m}: only loops may be rejected"),
        }
        if vm.status == Status::Loops {
            continue;
        }
        let b = chi_bounds_infinite(&m, 7, &default_moduli(), DEFAULT_BALL_CAP).unwrap();
        if b.lower == b.upper {
            assert_eq!(
                Some(b.lower),
                vm.chi(),
                "{m}: collapsed bounds disagree with classifier"
            );
        }
    }
    println!("1000 random 3x2 matrices: classifiers and bounds consistent: pass");
}

#[test]
fn c6_block_3x3_quotient_chi5() {
    let m = mat(vec![vec![1, 0, 0], vec![-2, 5, 0], vec![0, 0, 3]]);
    let g = finite_quotient_graph(&m, &[]).unwrap();
    assert_eq!(g.order(), 15);
    assert_eq!(exact_chi(&g).unwrap(), 5);
    println!("order-15 block quotient has chi = 5: pass");
}

#[test]
fn c7_order16_bipartite_quotient() {
    let m = mat(vec![vec![4, 0], vec![2, 4]]);
    let g = finite_quotient_graph(&m, &[]).unwrap();
    assert_eq!(g.order(), 16);
    assert!(!g.has_loops());
    assert!((0..g.order()).all(|v| g.degree(v) == 4), "not 4-regular");
    assert_eq!(exact_chi(&g).unwrap(), 2);
    println!("(4 0; 2 4) quotient: order 16, 4-regular, chi = 2: pass");
}

#[test]
fn c8_divisibility_by_three_properties() {
    for m in lower_2x2_sweep() {
        let v = chi_2x2(&m).unwrap();
        if v.status != Status::Loops && m.det().unwrap() % 3 == 0 {
            let chi = v.chi().unwrap();
            assert!(chi <= 3, "{m}: 3 | det but chi = {chi}");
        }
    }
    for m in random_3x2_sample() {
        let (nf, _) = mhnf_3x2(&m).unwrap();
        let vm = chi_3x2_mhnf(&nf).unwrap();
        let minors_div3 = sorted_abs_minors(&m).iter().all(|x| x % 3 == 0);
        if vm.status != Status::Loops && minors_div3 {
            assert_ne!(vm.chi(), Some(4), "{m}: all minors divisible by 3 but chi = 4");
        }
    }
    println!("divisibility-by-three corollaries hold on both sweeps: pass");
}

#[test]
fn c9_certificate_round_trip() {
    for spec in circulant_specs(30) {
        let m = circulant_kernel_matrix(&spec);
        let v = classify(&m).unwrap();
        assert_eq!(
            v.chi(),
            Some(circulant_chi(&spec).unwrap()),
            "kernel matrix of C_{}({}, {}) misclassified",
            spec.n,
            spec.a,
            spec.b
        );
        round_trip(&m, &v);
    }
    for m in lower_2x2_sweep() {
        let v = chi_2x2(&m).unwrap();
        round_trip(&m, &v);
    }
    for m in family_matrices() {
        let v = classify(&m).unwrap();
        round_trip(&m, &v);
    }
    for m in random_3x2_sample() {
        let v = classify(&m).unwrap();
        round_trip(&m, &v);
    }
    println!("certificates build and verify for every verdict: pass");
}
