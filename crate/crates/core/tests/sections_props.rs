mod common;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sheaflab_core::{
    assemble_coboundary, consistency_radius, extend_to_section, global_sections,
    is_section_consistent, nearest_global_section, nullspace_basis, sheaf_laplacian, Section,
    DEFAULT_REL_TOL,
};
use sheaflab_testkit::{
    exact_nullity, random_commuting_diamond, random_constant_sheaf, random_graph_sheaf,
    GraphInstance,
};

use common::{diamond_sheaf, graph_sheaf, to_matrix};

fn family(seed: u64) -> impl Iterator<Item = GraphInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..100).map(move |_| random_graph_sheaf(&mut rng, 6, 8, 4, 3))
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.random_range(-5.0..5.0))
}

#[test]
fn coboundary_matches_independent_assembly() {
    for g in family(1) {
        let sheaf = graph_sheaf(&g);
        let delta = assemble_coboundary(&sheaf).unwrap();
        let exact = g.exact_coboundary();
        let expected = to_matrix(&exact, exact.len(), g.node_dim_total());
        assert_eq!(delta.matrix, expected, "{g:?}");
    }
}

#[test]
fn zero_section_is_always_consistent() {
    for g in family(2) {
        let sheaf = graph_sheaf(&g);
        let report = is_section_consistent(&sheaf, &Section::zero(&sheaf), 0.0).unwrap();
        assert!(report.consistent());
    }
}

#[test]
fn global_dimension_matches_rational_nullity() {
    for g in family(3) {
        let sheaf = graph_sheaf(&g);
        let dim = global_sections(&sheaf, DEFAULT_REL_TOL).unwrap().dim();
        assert_eq!(
            dim,
            exact_nullity(&g.exact_coboundary(), g.node_dim_total()),
            "{g:?}"
        );
    }
}

#[test]
fn laplacian_kernel_matches_coboundary_kernel() {
    for g in family(4) {
        let sheaf = graph_sheaf(&g);
        let delta = assemble_coboundary(&sheaf).unwrap();
        let lap = sheaf_laplacian(&sheaf).unwrap();
        assert!((&lap - lap.transpose()).abs().max() == 0.0);
        assert_eq!(
            nullspace_basis(&lap, DEFAULT_REL_TOL).unwrap().dim(),
            nullspace_basis(&delta.matrix, DEFAULT_REL_TOL)
                .unwrap()
                .dim(),
            "{g:?}"
        );
    }
}

#[test]
fn constant_sheaf_dimension_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let c = rng.random_range(1..=3);
        let k = rng.random_range(1..=3);
        let g = random_constant_sheaf(&mut rng, c, k);
        let sheaf = graph_sheaf(&g);
        assert_eq!(
            global_sections(&sheaf, DEFAULT_REL_TOL).unwrap().dim(),
            k * c
        );
    }
}

#[test]
fn global_sections_extend_consistently() {
    for g in family(6) {
        let sheaf = graph_sheaf(&g);
        let gs = global_sections(&sheaf, DEFAULT_REL_TOL).unwrap();
        for s in &gs.sections {
            assert!(is_section_consistent(&sheaf, s, 1e-9).unwrap().consistent());
        }
    }
}

#[test]
fn radius_and_extension_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for g in family(7) {
        let sheaf = graph_sheaf(&g);
        let delta = assemble_coboundary(&sheaf).unwrap();
        let gs = global_sections(&sheaf, DEFAULT_REL_TOL).unwrap();
        let rows = delta.matrix.nrows().max(1) as f64;

        // A kernel element plus noise of varying size.
        let mut x = DVector::zeros(delta.matrix.ncols());
        for j in 0..gs.dim() {
            x += gs.basis.column(j) * rng.random_range(-2.0..2.0);
        }
        let scale = [0.0, 1e-6, 1e-2, 1.0][rng.random_range(0..4)];
        x += random_vector(&mut rng, x.len()) * scale;
        let a = delta.unstack(&x);

        let radius = consistency_radius(&sheaf, &a).unwrap();
        assert!((radius - (&delta.matrix * &x).norm()).abs() <= 1e-10);
        let eps = radius + 1e-12;
        // radius <= eps  =>  every block residual <= eps.
        assert!(extend_to_section(&sheaf, &a, eps).is_ok());
        // extension at tol t  =>  radius <= t * sqrt(rows).
        let t = 1e-3;
        if extend_to_section(&sheaf, &a, t).is_ok() {
            assert!(radius <= t * rows.sqrt() + 1e-12);
        }
    }
}

#[test]
fn nearest_section_is_optimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for g in family(8).take(20) {
        let sheaf = graph_sheaf(&g);
        let delta = assemble_coboundary(&sheaf).unwrap();
        let gs = global_sections(&sheaf, DEFAULT_REL_TOL).unwrap();
        let x = random_vector(&mut rng, delta.matrix.ncols());
        let a = delta.unstack(&x);
        let p = delta
            .stack(&nearest_global_section(&sheaf, &a).unwrap())
            .unwrap();
        let best = (&x - &p).norm();
        for _ in 0..50 {
            let mut k = DVector::zeros(x.len());
            for j in 0..gs.dim() {
                k += gs.basis.column(j) * rng.random_range(-5.0..5.0);
            }
            assert!(best <= (&x - &k).norm() + 1e-8);
        }
        // Projection is idempotent.
        let pp = delta
            .stack(&nearest_global_section(&sheaf, &delta.unstack(&p)).unwrap())
            .unwrap();
        assert!((&pp - &p).abs().max() <= 1e-10);
    }
}

#[test]
fn restriction_is_linear_and_path_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let d = random_commuting_diamond(&mut rng, 3);
        let sheaf = diamond_sheaf(&d);
        assert!(sheaf.validate(1e-12).ok());
        let dc = d.dims[0];
        let (x, y) = (random_vector(&mut rng, dc), random_vector(&mut rng, dc));
        let (alpha, beta) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let lhs = sheaf.restrict("C", "A", &(&x * alpha + &y * beta)).unwrap();
        let rhs = sheaf.restrict("C", "A", &x).unwrap() * alpha
            + sheaf.restrict("C", "A", &y).unwrap() * beta;
        let scale = lhs.abs().max().max(1.0);
        assert!((&lhs - &rhs).abs().max() <= 1e-12 * scale);

        // Both chains give the same result on unit vectors.
        let via_b2 = |v: &DVector<f64>| {
            let b2 = sheaf.restrict("C", "B2", v).unwrap();
            sheaf.restrict("B2", "A", &b2).unwrap()
        };
        for k in 0..dc {
            let e = DVector::from_fn(dc, |i, _| if i == k { 1.0 } else { 0.0 });
            let diff = sheaf.restrict("C", "A", &e).unwrap() - via_b2(&e);
            assert!(diff.abs().max() <= 1e-12 * 2.0);
        }
    }
}
