use num_complex::Complex64;
use proptest::prelude::*;

use spectra::fixtures::{all_fixtures, random_case, random_symmetric, PairCondition};
use spectra::linalg::{eigh, SymmetricMatrix};
use spectra::spectral::{
    build_index_set, cauchy_integral, cauchy_residue, compress, contour_compress, eigenprojection,
    grad_compress, HoloFunction,
};

fn functions() -> Vec<HoloFunction> {
    vec![
        HoloFunction::One,
        HoloFunction::Identity,
        HoloFunction::Power(2),
        HoloFunction::Power(3),
        HoloFunction::Exp,
        HoloFunction::Polynomial(vec![0.5, -1.0, 0.25]),
    ]
}

fn condition() -> impl Strategy<Value = PairCondition> {
    prop_oneof![
        Just(PairCondition::Outer),
        Just(PairCondition::PerCluster),
        Just(PairCondition::Clustered),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn index_structure(seed in any::<u64>(), cond in condition()) {
        let c = random_case(seed, cond);
        let spec = eigh(&c.h).unwrap();
        let info = build_index_set(&spec, &c.j_set).unwrap();
        prop_assert!(info.gamma_j > 0.0);
        prop_assert!(info.thetas.windows(2).all(|w| w[0] > w[1]));
        // Only when the nearest eigenvalue outside J_j also lies outside J.
        for (c, (&theta, &g)) in info.clusters.iter().zip(info.thetas.iter().zip(&info.gamma_jj)) {
            let nearest = (1..=info.dim())
                .filter(|l| !c.contains(l))
                .min_by(|&a, &b| {
                    (theta - info.eigenvalues[a - 1]).abs().total_cmp(&(theta - info.eigenvalues[b - 1]).abs())
                })
                .unwrap();
            if !info.contains(nearest) {
                prop_assert!(info.gamma_j <= g);
            }
        }
        let mut union: Vec<usize> = info.clusters.concat();
        union.sort();
        let mut j = c.j_set.clone();
        j.sort();
        prop_assert_eq!(union, j);
        prop_assert!(info.clusters.iter().all(|c| !c.is_empty()));
    }

    #[test]
    fn projector_laws(seed in any::<u64>()) {
        let c = random_case(seed, PairCondition::Outer);
        let spec = eigh(&c.h).unwrap();
        let info = build_index_set(&spec, &c.j_set).unwrap();
        let p = eigenprojection(&spec, &info);
        let m = p.matrix();
        prop_assert!(m.matmul(m).sub(m).fro_norm() <= 1e-10);
        prop_assert!((m.trace() - c.j_set.len() as f64).abs() <= 1e-10);
        prop_assert_eq!(compress(&spec, &HoloFunction::One, &info), p);
    }

    #[test]
    fn grad_compress_parts(seed in any::<u64>(), alpha in -3.0f64..3.0) {
        let c = random_case(seed, PairCondition::Outer);
        let spec = eigh(&c.h).unwrap();
        let info = build_index_set(&spec, &c.j_set).unwrap();

        let one = grad_compress(&spec, &c.h_hat(), &HoloFunction::One, &info).unwrap();
        prop_assert_eq!(one.part1.matrix().max_abs(), 0.0);
        prop_assert_eq!(one.part2.matrix().max_abs(), 0.0);

        let id = grad_compress(&spec, &c.h_hat(), &HoloFunction::Identity, &info).unwrap();
        let p = eigenprojection(&spec, &info).into_matrix();
        let pdp = p.matmul(c.delta.matrix()).matmul(&p);
        let inner = id.part1.matrix().add(id.part2.matrix());
        prop_assert!(inner.sub(&pdp).max_abs() <= 1e-12 * pdp.max_abs().max(1.0));

        for f in functions() {
            let base = grad_compress(&spec, &c.h_hat(), &f, &info).unwrap();
            let scaled_hat = c.h.add(&c.delta.scale(alpha).unwrap()).unwrap();
            let scaled = grad_compress(&spec, &scaled_hat, &f, &info).unwrap();
            let want = base.total.matrix().scale(alpha);
            let tol = 1e-12 * want.max_abs().max(1.0) * 10.0;
            prop_assert!(scaled.total.matrix().sub(&want).max_abs() <= tol);
        }
    }

    #[test]
    fn residue_table(
        ar in -2.0f64..2.0, ai in -2.0f64..2.0,
        br in -2.0f64..2.0, bi in -2.0f64..2.0,
        same in any::<bool>(),
    ) {
        let a = Complex64::new(ar, ai);
        let b = if same { a } else { Complex64::new(br, bi) };
        let center = Complex64::new(0.1, -0.2);
        let radius = 1.0;
        // Keep the poles away from the circle so 512 nodes resolve the integrand.
        for p in [a, b] {
            prop_assume!(((p - center).norm() - radius).abs() > 0.15);
        }
        prop_assume!(same || (a - b).norm() > 1e-3);
        for f in functions() {
            let q = cauchy_integral(a, b, &f, center, radius, 512).unwrap();
            let r = cauchy_residue(a, b, &f, center, radius);
            prop_assert!((q - r).norm() <= 1e-8, "{f:?} a={a} b={b}: {q} vs {r}");
        }
    }
}

#[test]
fn contour_matches_spectral_on_fixtures() {
    for fx in all_fixtures() {
        let spec = eigh(&fx.h).unwrap();
        let info = build_index_set(&spec, &fx.j_set).unwrap();
        let close = info.thetas.windows(2).any(|w| w[0] - w[1] < info.gamma_j);
        for f in functions() {
            let got = contour_compress(&spec, &f, &info, 512);
            if close {
                assert!(matches!(got, Err(spectra::Error::OverlappingDisks { .. })));
                continue;
            }
            let gap = got.unwrap().matrix().sub(compress(&spec, &f, &info).matrix()).fro_norm();
            assert!(gap <= 1e-8, "{} {f:?}: {gap}", fx.name);
        }
    }
}

#[test]
fn seeded_random_examples() {
    let a = random_symmetric(4, 11);
    let spec = eigh(&a).unwrap();

    let info = build_index_set(&spec, &[1]).unwrap();
    let p = eigenprojection(&spec, &info);
    let v = spec.vector(0);
    for i in 0..4 {
        for j in 0..4 {
            assert!((p.get(i, j) - v[i] * v[j]).abs() < 1e-15);
        }
    }
    let exp = compress(&spec, &HoloFunction::Exp, &info);
    let quad = contour_compress(&spec, &HoloFunction::Exp, &info, 512).unwrap();
    assert!(quad.matrix().sub(exp.matrix()).fro_norm() <= 1e-8);

    let info2 = build_index_set(&spec, &[1, 2]).unwrap();
    let sq = compress(&spec, &HoloFunction::Power(2), &info2);
    let p2 = eigenprojection(&spec, &info2).into_matrix();
    let a2 = a.matrix().matmul(a.matrix());
    let brute = p2.matmul(&a2).matmul(&p2);
    assert!(sq.matrix().sub(&brute).max_abs() <= 1e-10);
}

#[test]
fn whole_index_set_projects_onto_everything() {
    let a = random_symmetric(5, 3);
    let spec = eigh(&a).unwrap();
    let info = build_index_set(&spec, &[1, 2, 3, 4, 5]).unwrap();
    let p = eigenprojection(&spec, &info);
    let id = SymmetricMatrix::identity(5).unwrap();
    assert!(p.matrix().sub(id.matrix()).max_abs() <= 1e-12);
}
