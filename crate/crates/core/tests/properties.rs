use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symcert_core::action::{
    is_disentangled_action, product_action, validate_action, ProductStructure,
};
use symcert_core::certify::{certify, CertifyOptions, RepresentationTable};
use symcert_core::group::{
    cyclic_group, direct_product, find_direct_decompositions, product_factors, Subgroup,
};
use symcert_core::linalg::{frobenius, modulus, CMatrix, RMatrix, C64};
use symcert_core::rep::{
    character, character_factorization_defect, conjugate, direct_sum, fixed_subspace_projector,
    is_disentangled_representation, isotypic_decomposition, tensor_product,
    validate_representation, Field, LinearRepresentation,
};
use symcert_core::world::{canonical_table, coordinate_table, world_group, GridWorldSpec};

/// Sum of 1-dimensional characters of `C_a × C_b`, written in a random basis.
fn random_abelian_rep(
    a: usize,
    b: usize,
    dim: usize,
    rng: &mut ChaCha8Rng,
) -> LinearRepresentation {
    let g = direct_product(&cyclic_group(a).unwrap(), &cyclic_group(b).unwrap());
    let labels: Vec<(usize, usize)> = (0..dim)
        .map(|_| (rng.random_range(0..a), rng.random_range(0..b)))
        .collect();
    let basis = random_invertible(dim, rng);
    let inv = basis.clone().try_inverse().unwrap();
    let mats = (0..a * b)
        .map(|e| {
            let (i, j) = (e / b, e % b);
            let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                dim,
                labels.iter().map(|&(p, q)| {
                    let t = std::f64::consts::TAU
                        * ((p * i) as f64 / a as f64 + (q * j) as f64 / b as f64);
                    C64::new(t.cos(), t.sin())
                }),
            ));
            &basis * diag * &inv
        })
        .collect();
    validate_representation(&g, Field::Complex, mats, 1e-9).unwrap()
}

fn random_invertible(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    loop {
        let m = CMatrix::from_fn(dim, dim, |i, j| {
            let noise = C64::new(rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3));
            if i == j {
                C64::new(1.0, 0.0) + noise
            } else {
                noise
            }
        });
        if m.clone().try_inverse().is_some() {
            return m;
        }
    }
}

fn random_orthogonal(dim: usize, rng: &mut ChaCha8Rng) -> RMatrix {
    let m = RMatrix::from_fn(dim, dim, |_, _| rng.random_range(-1.0..1.0));
    m.qr().q()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sums_and_products_stay_representations(
        a in 1usize..=6, b in 1usize..=6, d1 in 1usize..=4, d2 in 1usize..=3, seed in any::<u64>()
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r1 = random_abelian_rep(a, b, d1, &mut rng);
        let r2 = random_abelian_rep(a, b, d2, &mut rng);
        let sum = direct_sum(&r1, &r2).unwrap();
        let prod = tensor_product(&r1, &r2).unwrap();
        validate_representation(sum.group(), Field::Complex, sum.matrices().to_vec(), 1e-9).unwrap();
        validate_representation(prod.group(), Field::Complex, prod.matrices().to_vec(), 1e-8).unwrap();
        let (c1, c2) = (character(&r1).values, character(&r2).values);
        let (cs, cp) = (character(&sum).values, character(&prod).values);
        for g in 0..a * b {
            prop_assert!(modulus(cs[g] - (c1[g] + c2[g])) < 1e-9);
            prop_assert!(modulus(cp[g] - c1[g] * c2[g]) < 1e-9 * (1.0 + modulus(cp[g])));
        }
    }

    #[test]
    fn fixed_projectors_are_idempotent_and_invariant(
        a in 1usize..=6, b in 1usize..=6, dim in 1usize..=6, seed in any::<u64>()
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = random_abelian_rep(a, b, dim, &mut rng);
        let subgroups = symcert_core::group::all_subgroups(rep.group()).unwrap();
        let h = &subgroups[rng.random_range(0..subgroups.len())];
        let p = fixed_subspace_projector(&rep, h).unwrap();
        let scale = frobenius(&p).max(1.0);
        prop_assert!(frobenius(&(&p * &p - &p)) <= 1e-7 * scale);
        for &x in h.members() {
            prop_assert!(frobenius(&(rep.matrix(x) * &p - &p)) <= 1e-7 * scale);
        }
    }

    #[test]
    fn isotypic_blocks_satisfy_eigen_relation_and_factor(
        a in 1usize..=5, b in 1usize..=5, dim in 1usize..=5, seed in any::<u64>()
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = random_abelian_rep(a, b, dim, &mut rng);
        let blocks = isotypic_decomposition(&rep).unwrap();
        prop_assert_eq!(blocks.iter().map(|b| b.multiplicity()).sum::<usize>(), dim);
        for block in &blocks {
            for g in rep.group().elements() {
                let lhs = rep.matrix(g) * &block.basis;
                let rhs = &block.basis * block.character.value(g);
                prop_assert!(frobenius(&(lhs - rhs)) <= 1e-8 * frobenius(&block.basis).max(1.0));
            }
        }
        let dec = product_factors(rep.group(), &cyclic_group(a).unwrap(), &cyclic_group(b).unwrap()).unwrap();
        prop_assert!(character_factorization_defect(&rep, &dec).unwrap() <= 1e-8);
    }

    #[test]
    fn product_actions_are_disentangled(m1 in 1usize..=5, m2 in 1usize..=5, s1 in 1usize..=5, s2 in 1usize..=5) {
        let (g1, g2) = (cyclic_group(m1).unwrap(), cyclic_group(m2).unwrap());
        let shift = |g: &symcert_core::FiniteGroup, m: usize, s: usize| {
            let size = m * s;
            let table: Vec<usize> = (0..m).flat_map(|k| (0..size).map(move |x| (x + k * s) % size)).collect();
            validate_action(g, size, &table).unwrap()
        };
        let (a, dec, structure) = product_action(&shift(&g1, m1, s1), &shift(&g2, m2, s2));
        a.check_axioms().unwrap();
        prop_assert!(is_disentangled_action(&a, &dec, &structure).unwrap().disentangled);
        // relabelling points inside one factor keeps the verdict
        let perm: Vec<usize> = (0..m1 * s1).rev().collect();
        let coords: Vec<Vec<usize>> = (0..structure.set_size())
            .map(|x| { let c = structure.coordinates(x); vec![perm[c[0]], c[1]] })
            .collect();
        let relabelled = ProductStructure::from_coordinates(vec![m1 * s1, m2 * s2], &coords).unwrap();
        prop_assert!(is_disentangled_action(&a, &dec, &relabelled).unwrap().disentangled);
    }

    #[test]
    fn direct_products_decompose(p in 1usize..=6, q in 1usize..=6) {
        let (a, b) = (cyclic_group(p).unwrap(), cyclic_group(q).unwrap());
        let g = direct_product(&a, &b);
        let found = find_direct_decompositions(&g, 2).unwrap();
        if p > 1 && q > 1 {
            let mut expected = vec![p, q];
            expected.sort();
            let hit = found.iter().any(|d| {
                let mut o = d.factor_orders();
                o.sort();
                o == expected
            });
            prop_assert!(hit);
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn cyclic_decomposition_follows_coprimality() {
    for n in 2..=36 {
        let found = find_direct_decompositions(&cyclic_group(n).unwrap(), 2).unwrap();
        let coprime_split = (2..n).any(|p| n % p == 0 && gcd(p, n / p) == 1);
        assert_eq!(!found.is_empty(), coprime_split, "n={n}");
    }
}

#[test]
fn orthogonal_conjugation_keeps_verdicts() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let spec = GridWorldSpec::new(4).unwrap();
    let world = world_group(&spec);
    let rep = world.canonical_representation();
    let base = is_disentangled_representation(&rep, &world.decomposition, 1e-8).unwrap();
    for _ in 0..20 {
        let q = random_orthogonal(6, &mut rng);
        let conj = conjugate(&rep, &symcert_core::linalg::complexify(&q), 1e-9)
            .unwrap()
            .unwrap();
        let v = is_disentangled_representation(&conj, &world.decomposition, 1e-8).unwrap();
        assert_eq!(v.disentangled, base.disentangled);
        assert_eq!(v.decomposition.dims(), base.decomposition.dims());
    }
}

#[test]
fn literal_basis_mixing_stays_disentangled() {
    // rotating the latent x-plane into the c-plane is a change of basis, which
    // a basis-free test must see through
    let spec = GridWorldSpec::new(5).unwrap();
    let world = world_group(&spec);
    let f = canonical_table(&spec);
    let (c, s) = (
        std::f64::consts::FRAC_1_SQRT_2,
        std::f64::consts::FRAC_1_SQRT_2,
    );
    let mut q = RMatrix::identity(6, 6);
    for k in 0..2 {
        q[(k, k)] = c;
        q[(k, 4 + k)] = -s;
        q[(4 + k, k)] = s;
        q[(4 + k, 4 + k)] = c;
    }
    let report = certify(
        &f.transform(&q),
        &world.action,
        &world.decomposition,
        &CertifyOptions::default(),
    )
    .unwrap();
    assert!(report.verdict_linear_disentangled);
    assert!(!report.coordinates.disentangled);
}

#[test]
fn verdicts_invariant_under_latent_reparameterisation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let spec = GridWorldSpec::new(3).unwrap();
    let world = world_group(&spec);
    let tables: Vec<RepresentationTable> = vec![
        canonical_table(&spec),
        coordinate_table(&spec, [1.0, 2.0, 0.5]).unwrap(),
    ];
    for f in &tables {
        let base = certify(
            f,
            &world.action,
            &world.decomposition,
            &CertifyOptions::default(),
        )
        .unwrap();
        for _ in 0..10 {
            let d = f.dim();
            let mut order: Vec<usize> = (0..d).collect();
            for i in (1..d).rev() {
                order.swap(i, rng.random_range(0..=i));
            }
            let scales: Vec<f64> = (0..d)
                .map(|_| rng.random_range(0.2..5.0) * if rng.random_bool(0.5) { -1.0 } else { 1.0 })
                .collect();
            let g = f.permute_dims(&order).scale_dims(&scales);
            let r = certify(
                &g,
                &world.action,
                &world.decomposition,
                &CertifyOptions::default(),
            )
            .unwrap();
            assert_eq!(r.verdict_disentangled, base.verdict_disentangled);
            assert_eq!(
                r.verdict_linear_disentangled,
                base.verdict_linear_disentangled
            );
            let mut c = r.metrics.compactness.clone();
            c.sort();
            let mut b = base.metrics.compactness.clone();
            b.sort();
            assert_eq!(c, b);
        }
    }
}

#[test]
fn injected_faults_are_caught() {
    let g = cyclic_group(5).unwrap();
    let mut table = g.cayley().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let i = rng.random_range(0..25);
        let old = table[i];
        table[i] = (old + rng.random_range(1..5)) % 5;
        assert!(symcert_core::group::validate_group(&table, &[]).is_err());
        table[i] = old;
    }
    let reg = symcert_core::action::regular_action(&g);
    let mut at = reg.table().to_vec();
    for _ in 0..50 {
        let i = rng.random_range(0..25);
        let old = at[i];
        at[i] = (old + rng.random_range(1..5)) % 5;
        assert!(validate_action(&g, 5, &at).is_err());
        at[i] = old;
    }
    let rep = symcert_core::rep::regular_representation(&g);
    for _ in 0..20 {
        let mut mats = rep.matrices().to_vec();
        let e = rng.random_range(0..5);
        let (r, c) = (rng.random_range(0..5), rng.random_range(0..5));
        mats[e][(r, c)] += C64::new(0.1, 0.0);
        assert!(validate_representation(&g, Field::Real, mats, 1e-9).is_err());
    }
}

#[test]
fn subgroup_projector_of_rotations_vanishes() {
    for n in 2..=8 {
        let g = cyclic_group(n).unwrap();
        let mats = (0..n)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / n as f64;
                DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()])
            })
            .collect::<Vec<RMatrix>>();
        let rep = symcert_core::rep::validate_real_representation(&g, &mats, 1e-9).unwrap();
        let p = fixed_subspace_projector(&rep, &Subgroup::whole(&g)).unwrap();
        assert!(frobenius(&p) < 1e-12);
    }
}
