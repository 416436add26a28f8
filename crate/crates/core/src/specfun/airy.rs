#![allow(clippy::excessive_precision)]

use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `Ai(x)` and `Ai'(x)` at a real argument.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AiryPair {
    pub x: f64,
    pub ai: f64,
    pub ai_prime: f64,
}

const AI0: f64 = 0.355_028_053_887_817_239_260_063_186_004;
const AIP0: f64 = -0.258_819_403_792_806_798_405_183_560_189;

// Integer anchors for the local Taylor expansions. Past them the
// asymptotic expansions are accurate far below double precision.
const ANCHOR_LO: i32 = -10;
const ANCHOR_HI: i32 = 12;
const MAX_TAYLOR: usize = 96;
const ASYM_TERMS: usize = 48;

/// Evaluate `Ai` and `Ai'`.
///
/// Absolute error is about 1e-15 on `[-20, 20]`; for large positive `x`
/// both values underflow smoothly to zero.
pub fn airy(x: f64) -> Result<AiryPair> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("airy: non-finite argument {x}")));
    }
    let (ai, ai_prime) = airy_unchecked(x);
    Ok(AiryPair { x, ai, ai_prime })
}

/// `airy` without the finiteness check, for hot loops over quadrature nodes.
pub(crate) fn airy_unchecked(x: f64) -> (f64, f64) {
    if x >= ANCHOR_HI as f64 {
        asymptotic_right(x)
    } else if x <= ANCHOR_LO as f64 {
        asymptotic_left(-x)
    } else {
        let k = x.round() as i32;
        let (a0, a1) = ANCHORS[(k - ANCHOR_LO) as usize];
        taylor_step(k as f64, a0, a1, x - k as f64)
    }
}

/// Taylor coefficients of `Ai(m + h)` in powers of `h`, `out.len()` of them.
pub(crate) fn airy_taylor(m: f64, out: &mut [f64]) {
    let (a0, a1) = airy_unchecked(m);
    fill_taylor(m, a0, a1, out);
}

// Ai'' = x Ai gives (k+2)(k+1) c_{k+2} = x0 c_k + c_{k-1}.
fn fill_taylor(x0: f64, a0: f64, a1: f64, c: &mut [f64]) {
    let n = c.len();
    if n > 0 {
        c[0] = a0;
    }
    if n > 1 {
        c[1] = a1;
    }
    if n > 2 {
        c[2] = 0.5 * x0 * a0;
    }
    for k in 1..n.saturating_sub(2) {
        c[k + 2] = (x0 * c[k] + c[k - 1]) / ((k + 2) * (k + 1)) as f64;
    }
}

fn taylor_step(x0: f64, a0: f64, a1: f64, h: f64) -> (f64, f64) {
    if h == 0.0 {
        return (a0, a1);
    }
    let mut c = [0.0; MAX_TAYLOR];
    fill_taylor(x0, a0, a1, &mut c);
    let scale = a0.abs() + (a1 * h).abs();
    let (mut f, mut fp) = (0.0, 0.0);
    let mut hk = 1.0;
    let mut quiet = 0;
    for k in 0..MAX_TAYLOR {
        let term = c[k] * hk;
        f += term;
        if k + 1 < MAX_TAYLOR {
            fp += (k + 1) as f64 * c[k + 1] * hk;
        }
        hk *= h;
        // three negligible terms in a row: the ODE couples c_k to c_{k-1}
        if k > 4 && term.abs() <= 1e-18 * scale {
            quiet += 1;
            if quiet == 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    (f, fp)
}

static ANCHORS: LazyLock<Vec<(f64, f64)>> = LazyLock::new(|| {
    let n = (ANCHOR_HI - ANCHOR_LO + 1) as usize;
    let mut t = vec![(0.0, 0.0); n];
    let idx = |k: i32| (k - ANCHOR_LO) as usize;
    // Right side: step down from the asymptotic values, where Ai is the
    // dominant solution and errors decay.
    t[idx(ANCHOR_HI)] = asymptotic_right(ANCHOR_HI as f64);
    for k in (1..ANCHOR_HI).rev() {
        let (a0, a1) = t[idx(k + 1)];
        t[idx(k)] = taylor_step((k + 1) as f64, a0, a1, -1.0);
    }
    // Left side: oscillatory, start from the exact values at the origin.
    t[idx(0)] = (AI0, AIP0);
    for k in (ANCHOR_LO..0).rev() {
        let (a0, a1) = t[idx(k + 1)];
        t[idx(k)] = taylor_step((k + 1) as f64, a0, a1, -1.0);
    }
    t
});

// u_k and v_k of the Airy asymptotic expansions.
static UV: LazyLock<(Vec<f64>, Vec<f64>)> = LazyLock::new(|| {
    let mut u = vec![1.0; ASYM_TERMS];
    let mut v = vec![1.0; ASYM_TERMS];
    for k in 1..ASYM_TERMS {
        let kf = k as f64;
        u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        v[k] = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u[k];
    }
    (u, v)
});

// sum_j (-1)^j coef[k_j] zeta^{-k_j} over k_j = start + j*stride, cut
// off once the terms stop shrinking.
fn alt_sum(coef: &[f64], zeta: f64, start: usize, stride: usize) -> f64 {
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    let mut sign = 1.0;
    let mut k = start;
    while k < coef.len() {
        let term = sign * coef[k] * zeta.powi(-(k as i32));
        if term.abs() > last {
            break;
        }
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        last = term.abs();
        sign = -sign;
        k += stride;
    }
    sum
}

fn asymptotic_right(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let (u, v) = &*UV;
    let pref = (-zeta).exp() / (2.0 * PI.sqrt());
    if pref == 0.0 {
        return (0.0, -0.0);
    }
    let q = x.sqrt().sqrt();
    let su = alt_sum(u, zeta, 0, 1);
    let sv = alt_sum(v, zeta, 0, 1);
    (pref / q * su, -pref * q * sv)
}

// Ai(-z), Ai'(-z) for large z > 0 via the phase-amplitude series.
fn asymptotic_left(z: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    if !zeta.is_finite() {
        return (0.0, 0.0);
    }
    let (u, v) = &*UV;
    let theta = zeta - FRAC_PI_4;
    let (s, c) = theta.sin_cos();
    let q = z.sqrt().sqrt();
    let rp = PI.sqrt();
    let ue = alt_sum(u, zeta, 0, 2);
    let uo = alt_sum(u, zeta, 1, 2);
    let ve = alt_sum(v, zeta, 0, 2);
    let vo = alt_sum(v, zeta, 1, 2);
    ((c * ue + s * uo) / (rp * q), q * (s * ve - c * vo) / rp)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Maclaurin series with 60 terms, independent of the anchor tables.
    fn maclaurin(x: f64) -> (f64, f64) {
        let mut c = [0.0; 60];
        c[0] = AI0;
        c[1] = AIP0;
        for k in 0..58 {
            // c_{k+3} = c_k / ((k+3)(k+2))
            if k + 3 < 60 {
                c[k + 3] = c[k] / ((k + 3) * (k + 2)) as f64;
            }
        }
        let mut f = 0.0;
        let mut fp = 0.0;
        for k in (0..60).rev() {
            f = f * x + c[k];
        }
        for k in (1..60).rev() {
            fp = fp * x + k as f64 * c[k];
        }
        (f, fp)
    }

    #[test]
    fn origin_values() {
        let p = airy(0.0).unwrap();
        // 3^{-2/3}/Gamma(2/3) and -3^{-1/3}/Gamma(1/3)
        let ai0 = 3f64.powf(-2.0 / 3.0) / crate::specfun::gamma::ln_gamma(2.0 / 3.0).exp();
        let aip0 = -(3f64.powf(-1.0 / 3.0)) / crate::specfun::gamma::ln_gamma(1.0 / 3.0).exp();
        assert!((p.ai - ai0).abs() < 1e-14);
        assert!((p.ai_prime - aip0).abs() < 1e-14);
        let (m0, m1) = maclaurin(0.0);
        assert!((p.ai - m0).abs() < 1e-15 && (p.ai_prime - m1).abs() < 1e-15);
    }

    #[test]
    fn matches_maclaurin_near_origin() {
        for i in -30..=30 {
            let x = i as f64 * 0.1;
            let (a, ap) = airy_unchecked(x);
            let (m, mp) = maclaurin(x);
            assert!((a - m).abs() < 1e-14, "x={x}: {a} vs {m}");
            assert!((ap - mp).abs() < 1e-14, "x={x}: {ap} vs {mp}");
        }
    }

    #[test]
    fn downward_anchor_chain_hits_origin() {
        // the right-hand chain is built from x = 12 and never sees AI0
        let (a1, b1) = ANCHORS[(1 - ANCHOR_LO) as usize];
        let (a0, b0) = taylor_step(1.0, a1, b1, -1.0);
        assert!((a0 - AI0).abs() < 1e-15);
        assert!((b0 - AIP0).abs() < 1e-15);
    }

    #[test]
    fn seams_agree() {
        for &x in &[12.0f64, -10.0] {
            let asym = if x > 0.0 { asymptotic_right(x) } else { asymptotic_left(-x) };
            let k = x as i32;
            let (a0, a1) = ANCHORS[(k - ANCHOR_LO) as usize];
            let inner = taylor_step(k as f64, a0, a1, 0.0);
            assert!((asym.0 - inner.0).abs() < 1e-15);
            assert!((asym.1 - inner.1).abs() < 1e-15);
            // just inside vs. just outside
            let h = if x > 0.0 { -1e-9 } else { 1e-9 };
            let a = airy_unchecked(x + h);
            assert!((a.0 - asym.0).abs() < 1e-8 * (1.0 + asym.1.abs()));
        }
    }

    #[test]
    fn non_finite_rejected() {
        assert!(airy(f64::NAN).is_err());
        assert!(airy(f64::INFINITY).is_err());
    }

    #[test]
    fn underflow_is_graceful() {
        let p = airy(200.0).unwrap();
        assert_eq!(p.ai, 0.0);
        assert!(p.ai_prime == 0.0);
        let q = airy(1e6).unwrap();
        assert_eq!(q.ai, 0.0);
    }

    #[test]
    fn taylor_coefficients_reproduce_values() {
        let mut c = [0.0; 30];
        airy_taylor(-3.3, &mut c);
        let h = 0.4;
        let f: f64 = c.iter().rev().fold(0.0, |acc, &ck| acc * h + ck);
        let (a, _) = airy_unchecked(-2.9);
        assert!((f - a).abs() < 1e-14);
    }

    // 30-digit reference values computed with mpmath
    const REFERENCE: [(f64, f64, f64); 22] = [
        (-20.0, -0.176_406_127_077_984_69, 0.892_862_856_736_471_24),
        (-15.5, -0.166_447_954_090_419_77, 0.904_937_935_430_212),
        (-10.0, 0.040_241_238_486_443_19, 0.996_265_044_132_790_1),
        (-9.3, 0.240_473_796_853_186_44, -0.651_492_407_895_598_8),
        (-7.25, 0.323_740_573_211_186_15, -0.300_228_995_047_354_1),
        (-5.0, 0.350_761_009_024_114_3, 0.327_192_818_554_443_14),
        (-4.5, 0.292_152_781_055_959_47, -0.523_362_532_315_747_7),
        (-2.2, 0.096_145_378_007_668_88, 0.686_244_824_909_001_7),
        (-1.0, 0.535_560_883_292_352_1, -0.010_160_567_116_645_209),
        (0.0, 0.355_028_053_887_817_24, -0.258_819_403_792_806_8),
        (0.7, 0.189_162_400_398_150_08, -0.199_851_191_582_280_48),
        (1.0, 0.135_292_416_312_881_42, -0.159_147_441_296_793_21),
        (2.0, 0.034_924_130_423_274_38, -0.053_090_384_433_653_63),
        (3.9, 0.001_167_654_872_991_449_7, -0.002_375_634_737_562_252_6),
        (4.5, 0.000_330_250_323_514_308_98, -0.000_717_866_567_557_508_9),
        (5.0, 0.000_108_344_428_136_074_42, -0.000_247_413_890_868_462_48),
        (6.3, 4.672_260_820_574_289e-6, -1.190_597_045_995_727_6e-5),
        (8.0, 4.692_207_616_099_232e-8, -1.341_439_297_906_786_6e-7),
        (10.0, 1.104_753_255_289_868_6e-10, -3.520_633_676_738_923_6e-10),
        (12.5, 2.396_827_826_078_05e-14, -8.521_346_564_673_857e-14),
        (15.0, 2.164_962_520_737_992_3e-18, -8.420_567_954_017_773e-18),
        (20.0, 1.691_672_868_670_540_3e-27, -7.586_391_625_748_355e-27),
    ];

    #[test]
    fn reference_table() {
        for &(x, ai, aip) in &REFERENCE {
            let p = airy(x).unwrap();
            assert!((p.ai - ai).abs() < 1e-14, "x={x}: {} vs {ai}", p.ai);
            assert!((p.ai_prime - aip).abs() < 1e-14, "x={x}: {} vs {aip}", p.ai_prime);
            if x > 0.0 {
                assert!((p.ai - ai).abs() <= 1e-12 * ai.abs(), "relative, x={x}");
            }
        }
    }

    #[test]
    fn ode_residual_on_grid() {
        let h = 1e-3;
        let mut x = -10.0;
        while x <= 10.0 {
            let f = |x: f64| airy_unchecked(x).0;
            let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
            let scale = f(x).abs().max(airy_unchecked(x).1.abs()).max(1e-300);
            let r = (d2 - x * f(x)).abs() / scale.max(x.abs() * f(x).abs());
            assert!(r < 1e-5, "x={x}: {r}");
            // the derivative is the derivative
            let dp = (f(x + h) - f(x - h)) / (2.0 * h);
            assert!((dp - airy_unchecked(x).1).abs() < 1e-6 * (1.0 + x.abs()) * scale);
            x += 0.37;
        }
        for &x in &[-5.0, -1.0, 0.0, 1.0, 5.0] {
            // exact second derivative from the Taylor coefficients
            let mut c = [0.0; 3];
            airy_taylor(x, &mut c);
            assert!((2.0 * c[2] - x * airy_unchecked(x).0).abs() < 1e-15);
        }
    }

    #[test]
    fn positive_axis_shape() {
        let mut prev = airy_unchecked(0.0);
        let mut x = 0.05;
        while x < 30.0 {
            let cur = airy_unchecked(x);
            assert!(cur.0 > 0.0 && cur.1 < 0.0, "x={x}");
            assert!(cur.0 < prev.0 && cur.1 > prev.1, "x={x}");
            if x >= 2.0 {
                assert!(cur.0 <= (-2.0 / 3.0 * x.powf(1.5)).exp());
            }
            prev = cur;
            x += 0.05;
        }
    }
}
