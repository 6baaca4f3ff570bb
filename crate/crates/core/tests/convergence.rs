use std::sync::Arc;

use compact_helmholtz::problems::{ExactFaceData, Factor, HelmholtzImage, SeparableField, LOSSY_K};
use compact_helmholtz::{
    solve, spectrum_summary, validate_setup, BoundaryConfig, Discretization, Error, Face, FaceCondition, FaceKind,
    Family, Grid, IterationConfig, ManufacturedProblem, Method, Wavenumber, C64,
};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Smooth separable solution with nonzero data on every face kind.
fn custom(k: C64, lateral: FaceKind, bottom: FaceKind, top: FaceKind) -> (Arc<SeparableField>, BoundaryConfig) {
    let u = Arc::new(SeparableField {
        factors: [
            Factor::Cos(c(2.3)),
            Factor::Sin(c(1.7)),
            Factor::PolyTrig {
                poly: vec![1.0, 0.5],
                trig: Box::new(Factor::Cos(c(2.9))),
            },
        ],
        dimension: 3,
    });
    let mut bc = BoundaryConfig::all_dirichlet();
    for face in Face::ALL {
        let kind = match face {
            Face::BOTTOM => bottom,
            Face::TOP => top,
            _ => lateral,
        };
        let data = ExactFaceData {
            u: u.clone(),
            face,
            kind,
            k,
        };
        bc = bc.with_face(face, FaceCondition::homogeneous(kind).with_data(Arc::new(data)));
    }
    (u, bc)
}

fn solve_custom(k: C64, kinds: [FaceKind; 3], m: usize) -> f64 {
    let (u, bc) = custom(k, kinds[0], kinds[1], kinds[2]);
    let source = Arc::new(HelmholtzImage {
        u: u.clone(),
        k2: k * k,
    });
    let grid = Grid::unit(m, &bc).unwrap();
    let disc = validate_setup(grid, Wavenumber::new(k).unwrap(), bc, source).unwrap();
    let f = disc.assemble_rhs();
    let cfg = IterationConfig {
        tol: 1e-12,
        ..IterationConfig::with_method(Method::Gmres)
    };
    let (sol, report) = solve(&disc, &f.data, &cfg).unwrap();
    assert!(report.converged(), "{kinds:?} m={m}: {:?}", report.status);
    max_error(&disc, &sol, |p| u.value(p))
}

fn max_error(disc: &Discretization, sol: &[C64], exact: impl Fn([f64; 3]) -> C64) -> f64 {
    sol.iter()
        .enumerate()
        .map(|(idx, v)| {
            let (i, j, l) = disc.grid.unindex(idx);
            (v - exact(disc.grid.point(i, j, l))).norm()
        })
        .fold(0.0, f64::max)
}

fn orders(errs: &[f64]) -> Vec<f64> {
    errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

#[test]
fn sixth_order_with_inhomogeneous_data_on_every_closure() {
    use FaceKind::*;
    let combos = [
        [Neumann, Dirichlet, Dirichlet],
        [Dirichlet, Neumann, Neumann],
        [Neumann, Neumann, Sommerfeld],
        [Dirichlet, Sommerfeld, Neumann],
        [Neumann, Sommerfeld, Sommerfeld],
    ];
    for kinds in combos {
        let errs: Vec<f64> = [8, 16, 32].iter().map(|&m| solve_custom(c(4.0), kinds, m)).collect();
        for p in orders(&errs) {
            assert!(p > 5.5, "{kinds:?}: errors {errs:?}, orders {:?}", orders(&errs));
        }
    }
}

#[test]
fn lossy_wavenumber_converges() {
    let problem = ManufacturedProblem::new(Family::DirichletSommerfeld3d, LOSSY_K);
    let errs: Vec<f64> = [64, 128]
        .iter()
        .map(|&m| {
            let disc = problem.discretize(m).unwrap();
            let f = disc.assemble_rhs();
            let (u, report) = solve(&disc, &f.data, &IterationConfig::with_method(Method::Gmres)).unwrap();
            assert!(report.converged());
            problem.exact_error(&disc, &u)
        })
        .collect();
    assert!(orders(&errs)[0] > 5.5, "{errs:?}");
}

#[test]
fn chebyshev_converges_with_the_closed_form_interval() {
    let problem = ManufacturedProblem::new(Family::Dirichlet3d, c(10.0));
    let disc = problem.discretize(32).unwrap();
    let summary = spectrum_summary(disc.grid.n[0], 10.0, disc.grid.h);
    let cfg = IterationConfig {
        chebyshev_interval: Some((summary.d_min, summary.d_max)),
        max_iter: 200,
        ..IterationConfig::with_method(Method::Chebyshev)
    };
    let f = disc.assemble_rhs();
    let (u, report) = solve(&disc, &f.data, &cfg).unwrap();
    assert!(report.converged(), "{:?} after {}", report.status, report.iterations);
    let (g, _) = solve(&disc, &f.data, &IterationConfig::with_method(Method::Gmres)).unwrap();
    let diff = u.iter().zip(&g).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(diff < 1e-7, "{diff}");
    assert!(problem.exact_error(&disc, &u) < 1e-4);
}

#[test]
fn coarse_grid_violating_points_per_wavelength_is_rejected() {
    let problem = ManufacturedProblem::new(Family::Dirichlet3d, c(40.0));
    assert!(matches!(problem.discretize(32), Err(Error::PointsPerWavelength { .. })));
    let problem = ManufacturedProblem::new(Family::Dirichlet1d, c(40.0));
    assert!(matches!(problem.discretize_1d(32), Err(Error::PointsPerWavelength { .. })));
}

#[test]
fn radiation_condition_on_a_lateral_face_is_a_configuration_error() {
    let bc = BoundaryConfig::all_dirichlet().with_face(
        Face::new(compact_helmholtz::Axis::X, compact_helmholtz::Side::Low),
        FaceCondition::sommerfeld(),
    );
    assert!(matches!(bc.validate(), Err(Error::Config(_))));
}

#[test]
fn resonant_wavenumber_reports_the_mode() {
    // A2 eigenvalue of mode (1,1,1) vanishes: k^2 h^2 = 12 sin^2(pi h / 2)
    let m = 16;
    let h = 1.0 / m as f64;
    let k = (12.0f64).sqrt() * (std::f64::consts::PI * h / 2.0).sin() / h;
    let bc = BoundaryConfig::all_dirichlet();
    let grid = Grid::unit(m, &bc).unwrap();
    let disc = validate_setup(grid, Wavenumber::real(k).unwrap(), bc, Arc::new(compact_helmholtz::ZeroSource))
        .unwrap();
    let y = vec![c(1.0); disc.len()];
    let mut u = vec![c(0.0); disc.len()];
    match disc.precondition_solve(&y, &mut u) {
        Err(Error::Resonance { m, n, .. }) => assert_eq!((m, n), (1, 1)),
        other => panic!("expected resonance, got {other:?}"),
    }
}

#[test]
fn iteration_counts_do_not_grow_under_refinement() {
    let problem = ManufacturedProblem::new(Family::Dirichlet3d, c(20.0));
    let mut last = usize::MAX;
    for m in [32, 64] {
        let disc = problem.discretize(m).unwrap();
        let f = disc.assemble_rhs();
        let (_, report) = solve(&disc, &f.data, &IterationConfig::with_method(Method::Gmres)).unwrap();
        assert!(report.iterations <= last);
        last = report.iterations;
    }
}

