use softedge::fredholm::{curve, CurveParams};
use softedge::kernels::{KernelSpec, Variant};
use softedge::painleve::{
    assemble_pdf, boundary_sigma0, ode_curve, solve_sigma0, solve_system, write_solution_csv, BoundaryConfig,
    BoundaryOrder, SOLUTION_HEADER,
};

fn grid(a: f64, b: f64, step: f64) -> Vec<f64> {
    let n = ((b - a) / step).round() as usize;
    (0..=n).map(|i| a + i as f64 * step).collect()
}

fn sup(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn tiny_xi_gives_tiny_sigma() {
    let sol = solve_sigma0(1e-10, &BoundaryConfig::default(), -4.0).unwrap();
    assert!(sol.sigma0.iter().all(|s| s.abs() <= 1e-9));
    let sol = solve_system(Some(Variant::Lue), 1e-10, &BoundaryConfig::default(), -4.0).unwrap();
    assert!(sol.sigma1.unwrap().iter().all(|s| s.abs() <= 1e-9));
}

#[test]
fn route_equivalence_at_xi_one() {
    let ts = grid(-6.0, 2.0, 0.1);
    let cfg = BoundaryConfig::default();
    let params = CurveParams::default();
    for v in [Variant::Gue, Variant::Lue, Variant::LueAlpha { alpha: 0.5 }, Variant::LueAlpha { alpha: 5.0 }] {
        let ode = ode_curve(Some(v), 1.0, &ts, &cfg, &params).unwrap();
        let op = curve(&KernelSpec::AiryLimit, Some(&v.correction_spec()), 1.0, &ts, &params).unwrap();
        let d1 = sup(ode.p1.as_ref().unwrap(), op.p1.as_ref().unwrap());
        let d0 = sup(&ode.p0, &op.p0);
        assert!(d1 <= 5e-3, "{v:?}: p1 gap {d1:e}");
        assert!(d0 <= 1e-4, "{v:?}: p0 gap {d0:e}");
        assert!(ode.untrusted.is_none());
    }
}

#[test]
fn normalisation_and_decay() {
    let ts = grid(-8.0, 6.0, 0.005);
    let sol = solve_system(Some(Variant::Gue), 1.0, &BoundaryConfig::default(), -8.0).unwrap();
    let c = assemble_pdf(&sol, &ts).unwrap();
    let p1 = c.p1.as_ref().unwrap();
    assert!((c.trapezoid(&c.p0) - 1.0).abs() <= 1e-5, "{}", c.trapezoid(&c.p0));
    assert!(c.trapezoid(p1).abs() <= 1e-5, "{}", c.trapezoid(p1));
    let k = ts.iter().position(|t| (t - 4.0).abs() < 1e-9).unwrap();
    assert!(p1[k].abs() <= 1e-6, "{}", p1[k]);
    assert!(c.max_decrease() == 0.0);
}

#[test]
fn boundary_refinement_is_small() {
    let lead = BoundaryConfig { order: BoundaryOrder::Leading, ..Default::default() };
    let ext = BoundaryConfig::default();
    let y = ext.y_start - 2.0;
    let a = solve_sigma0(1.0, &lead, y).unwrap();
    let b = solve_sigma0(1.0, &ext, y).unwrap();
    let i = a.grid.len() - 1;
    let moved = (a.sigma0[i] - b.sigma0[i]).abs();
    let at_start = boundary_sigma0(1.0, ext.y_start, &ext).sigma - boundary_sigma0(1.0, ext.y_start, &lead).sigma;
    let correction = boundary_sigma0(1.0, y, &ext).sigma - boundary_sigma0(1.0, y, &lead).sigma;
    assert!(at_start > 0.0);
    assert!(moved < correction.abs(), "{moved:e} vs {correction:e}");
}

#[test]
fn forced_checkpoint_flags_tail() {
    let ts = grid(-4.0, 2.0, 0.5);
    let cfg = BoundaryConfig::default();
    // a zero-width tolerance makes the first checkpoint fail
    let c =
        softedge::painleve::ode_curve_with_tolerance(Some(Variant::Gue), 0.6, &ts, &cfg, &CurveParams::default(), 0.0)
            .unwrap();
    let u = c.untrusted.as_ref().unwrap();
    let from = c.meta.untrusted_from.unwrap();
    assert_eq!(from, 2.0);
    assert!(u.iter().all(|&b| b));
    let ok = ode_curve(Some(Variant::Gue), 0.6, &ts, &cfg, &CurveParams::default()).unwrap();
    if let Some(u) = &ok.untrusted {
        let from = ok.meta.untrusted_from.unwrap();
        assert!(ts.iter().zip(u).all(|(t, b)| *b == (*t <= from)));
    }
}

#[test]
fn solution_dump() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("sol.csv");
    let sol = solve_system(Some(Variant::Gue), 1.0, &BoundaryConfig::default(), 0.0).unwrap();
    write_solution_csv(&sol, &p).unwrap();
    let text = std::fs::read_to_string(&p).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), SOLUTION_HEADER.join(","));
    assert_eq!(lines.count(), sol.grid.len());
}
