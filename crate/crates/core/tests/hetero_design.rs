//! End-to-end checks of the heterogeneous-fiber design program with
//! default parameters: dispersion ladder, common anchor delay,
//! adjacent-core separation, closed-loop re-analysis, and the fidelity
//! of the Taylor delay model against direct re-solves.

use std::sync::OnceLock;

use ttdl_core::hetero::{
    design_hetero_mcf, link_delays, taylor_group_delay, HeteroDesignParams, HeteroMcf,
};
use ttdl_core::waveguide::{
    group_delay_per_km_with, mode_analysis_with, MaterialModel, SolverOptions, StencilConfig,
};

fn designed() -> &'static HeteroMcf {
    static MCF: OnceLock<HeteroMcf> = OnceLock::new();
    MCF.get_or_init(|| {
        design_hetero_mcf(
            &HeteroDesignParams::default(),
            &MaterialModel::fused_silica(),
        )
        .expect("default design must be feasible")
    })
}

#[test]
fn default_design_hits_the_dispersion_ladder() {
    let mcf = designed();
    assert_eq!(mcf.cores.len(), 7);
    for (i, core) in mcf.cores.iter().enumerate() {
        let target = 14.75 + i as f64;
        assert!(
            (core.dispersion_ps_km_nm - target).abs() < 0.05,
            "core {}: D = {} vs target {}",
            i + 1,
            core.dispersion_ps_km_nm,
            target
        );
        assert_eq!(core.index, i + 1);
    }
    // end of the ladder called out explicitly
    assert!((mcf.cores[6].dispersion_ps_km_nm - 20.75).abs() < 0.05);
}

#[test]
fn default_design_equalizes_anchor_delay() {
    let mcf = designed();
    assert!(
        mcf.tau_g0_spread_ps_km() < 0.2,
        "τ_g0 spread = {} ps/km",
        mcf.tau_g0_spread_ps_km()
    );
}

#[test]
fn default_design_separates_adjacent_cores() {
    let mcf = designed();
    let steps = mcf.adjacent_delta_n_eff();
    assert_eq!(steps.len(), 6);
    for (i, s) in steps.iter().enumerate() {
        assert!(
            *s >= 1e-4,
            "adjacent pair {}-{}: Δn_eff = {s:e} below the default floor",
            i + 1,
            i + 2
        );
    }
}

#[test]
fn default_design_stays_inside_the_search_box() {
    let mcf = designed();
    for core in &mcf.cores {
        let a1 = core.core_radius();
        let d1 = core.core_delta();
        assert!((2.5e-6..=6.0e-6).contains(&a1), "a1 = {a1:e}");
        assert!((0.002..=0.008).contains(&d1), "Δ1 = {d1}");
    }
}

#[test]
fn designed_cores_close_the_loop_under_reanalysis() {
    let mcf = designed();
    let material = MaterialModel::fused_silica();
    let stencil = StencilConfig { step: 0.5e-9 };
    let solver = SolverOptions::default();
    for core in &mcf.cores {
        let re = mode_analysis_with(&core.profile, &material, mcf.lambda0, &stencil, &solver)
            .expect("designed profile must guide");
        assert!(
            (re.dispersion_ps_km_nm - core.dispersion_ps_km_nm).abs() < 0.05,
            "core {}: stored D = {}, re-analyzed {}",
            core.index,
            core.dispersion_ps_km_nm,
            re.dispersion_ps_km_nm
        );
        assert!(
            (re.group_delay_ps_km - core.tau_g0_ps_km).abs() < 0.1,
            "core {}: stored τ = {}, re-analyzed {}",
            core.index,
            core.tau_g0_ps_km,
            re.group_delay_ps_km
        );
        assert!((re.n_eff - core.n_eff0).abs() < 1e-9);
    }
}

#[test]
fn taylor_model_tracks_direct_solves_across_the_band() {
    // The quadratic delay model must stay within 5 ps/km·L of a direct
    // group-delay re-solve over the full operating band.
    let mcf = designed();
    let material = MaterialModel::fused_silica();
    let stencil = StencilConfig { step: 0.5e-9 };
    let solver = SolverOptions::default();
    let length_km = 10.0;
    for core in [&mcf.cores[0], &mcf.cores[3], &mcf.cores[6]] {
        for lam_nm in [1530.0, 1545.0, 1560.0, 1570.0] {
            let lam = lam_nm * 1e-9;
            let taylor = taylor_group_delay(core, lam, length_km).unwrap();
            let direct = length_km
                * group_delay_per_km_with(&core.profile, &material, lam, &stencil, &solver)
                    .unwrap();
            assert!(
                (taylor - direct).abs() <= 5.0 * length_km,
                "core {} at {lam_nm} nm: Taylor {taylor} vs direct {direct}",
                core.index
            );
        }
    }
}

#[test]
fn link_delays_are_uniform_and_null_at_the_anchor() {
    let mcf = designed();
    // anchor null: every differential delay vanishes at λ0
    let at_anchor = link_delays(mcf, mcf.lambda0, 10.0).unwrap();
    for d in &at_anchor.differential_ps {
        assert_eq!(*d, 0.0);
    }
    // operating points: near-uniform taps (within 1% of the mean)
    for lam in [1.56e-6, 1.57e-6] {
        let ld = link_delays(mcf, lam, 10.0).unwrap();
        let mean = ld.mean_differential_ps().unwrap();
        assert!(
            ld.max_differential_deviation_ps / mean < 0.01,
            "at {lam:e}: deviation {} of mean {mean}",
            ld.max_differential_deviation_ps
        );
    }
}

#[test]
fn design_is_deterministic() {
    let again = design_hetero_mcf(
        &HeteroDesignParams::default(),
        &MaterialModel::fused_silica(),
    )
    .expect("default design must be feasible");
    let first = designed();
    assert_eq!(first, &again);
}

#[test]
fn single_core_design_is_valid_and_vacuous() {
    let params = HeteroDesignParams {
        n_cores: 1,
        ..Default::default()
    };
    let mcf = design_hetero_mcf(&params, &MaterialModel::fused_silica()).unwrap();
    assert_eq!(mcf.cores.len(), 1);
    assert!(mcf.adjacent_delta_n_eff().is_empty());
    assert!((mcf.cores[0].dispersion_ps_km_nm - 14.75).abs() < 0.05);
    assert_eq!(mcf.tau_g0_spread_ps_km(), 0.0);
}

#[test]
fn unreachable_separation_floor_reports_the_failing_core() {
    let params = HeteroDesignParams {
        n_cores: 3,
        min_adjacent_delta_n_eff: 0.05, // far beyond any same-family pair
        ..Default::default()
    };
    match design_hetero_mcf(&params, &MaterialModel::fused_silica()) {
        Err(ttdl_core::hetero::DesignError::DesignInfeasible { core, constraint }) => {
            assert_eq!(core, 2);
            assert!(
                constraint.contains("below floor"),
                "constraint: {constraint}"
            );
        }
        other => panic!("expected DesignInfeasible, got {other:?}"),
    }
}
