use exterior_blowup::exponents::{BoundaryCondition, ExponentVector};
use exterior_blowup::oracle::{integrate_adaptive, OdeSystem};
use exterior_blowup::quadrature::{chain_check, ChainInputs};
use exterior_blowup::solver::{
    run, RadialGrid, RadialOperator, RadialState, RunConfig, Stepper, SystemSpec, Verdict,
};
use proptest::prelude::*;

fn boundary() -> impl Strategy<Value = BoundaryCondition> {
    prop_oneof![
        Just(BoundaryCondition::dirichlet()),
        Just(BoundaryCondition::neumann()),
        (0.1f64..3.0, 0.1f64..3.0).prop_map(|(a, b)| BoundaryCondition::robin(a, b).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn operator_is_symmetric_in_energy_weights(d in 1u32..=4, bc in boundary(), seed in any::<u64>()) {
        let grid = RadialGrid::new(10.0, 64).unwrap();
        let op = RadialOperator::new(grid, d, &bc);
        let n = grid.nodes();
        let f = |k: u64| -> Vec<f64> {
            (0..n).map(|j| {
                if j == n - 1 || (j == 0 && bc.alpha == 0.0) { 0.0 } else { ((j as u64).wrapping_mul(2654435761).wrapping_add(k) % 1000) as f64 / 1000.0 - 0.5 }
            }).collect()
        };
        let (a, b) = (f(seed), f(seed ^ 0x9e37));
        let (mut la, mut lb) = (vec![0.0; n], vec![0.0; n]);
        op.apply(&a, &mut la);
        op.apply(&b, &mut lb);
        let (x, y) = (op.inner(&la, &b), op.inner(&a, &lb));
        prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0), "{} vs {}", x, y);
    }

    #[test]
    fn linear_energy_never_grows(d in 1u32..=3, bc in boundary(), amp in 0.1f64..2.0) {
        let spec = SystemSpec::new(ExponentVector::new(vec![2.0]).unwrap(), d, bc).unwrap().linear();
        let grid = RadialGrid::new(12.0, 240).unwrap();
        let mut state = RadialState::zeros(1, &grid);
        for (j, r) in grid.positions().into_iter().enumerate() {
            state.u[0][j] = amp * exterior_blowup::solver::bump(r, 5.0, 1.5).0;
        }
        let mut st = Stepper::new(&spec, grid, 0.9 * grid.dr, 0.9).unwrap();
        st.start(&state).unwrap();
        let mut e = st.energy();
        for _ in 0..200 {
            st.advance();
            let next = st.energy();
            prop_assert!(next <= e * (1.0 + 1e-12) + 1e-15, "{} -> {}", e, next);
            e = next;
        }
    }
}

#[test]
fn larger_data_blows_up_sooner() {
    let times: Vec<f64> = [0.8, 0.5, 0.3]
        .iter()
        .map(|&e| {
            run(&RunConfig::new(&[1.4, 1.4], 3, 1000, 60.0, e))
                .unwrap()
                .verdict
                .t_blow()
                .unwrap()
        })
        .collect();
    assert!(times.windows(2).all(|w| w[0] < w[1]), "{times:?}");
}

#[test]
fn pde_outlives_homogeneous_ode() {
    // Dispersion and the Dirichlet wall only delay blow-up relative to the
    // spatially flat problem with the same peak amplitude.
    let eps = 0.5;
    let pde = run(&RunConfig::new(&[2.0, 2.0], 3, 1000, 60.0, eps)).unwrap();
    let ode = integrate_adaptive(
        &OdeSystem::damped(ExponentVector::new(vec![2.0, 2.0]).unwrap(), eps).unwrap(),
        1e8,
    )
    .unwrap();
    match pde.verdict {
        Verdict::BlewUp { t_blow } => assert!(t_blow > ode.t_blow, "{t_blow} vs {}", ode.t_blow),
        Verdict::SurvivedHorizon { .. } => {}
    }
}

#[test]
fn weak_identity_holds_inside_the_lifespan() {
    let eps = 0.2;
    let mut cfg = RunConfig::new(&[1.4, 1.4], 3, 2000, 60.0, eps);
    cfg.time.history_stride = Some(2);
    cfg.time.history_r_max = Some(6.0);
    let rec = run(&cfg).unwrap();
    let history = rec.history.as_ref().unwrap();
    let p = ExponentVector::new(vec![1.4, 1.4]).unwrap();
    let c0 = rec.positivity;
    let report = chain_check(&ChainInputs {
        history,
        p: &p,
        bc: BoundaryCondition::dirichlet(),
        radii: &[4.0],
        epsilon: eps,
        data_constants: &[c0, c0],
        lambda: p.lambda_floor(),
    })
    .unwrap();
    let row = &report.rows[0];
    assert!(row.within_lifespan);
    for link in &row.links {
        let rel = (link.weak_pairing - link.left).abs() / link.left;
        assert!(rel < 1e-3, "pairing {} vs {}", link.weak_pairing, link.left);
    }
}
