//! Dormand–Prince 5(4) with step-size control, integrating between
//! caller-chosen output points.

// Butcher tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Dopri {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Signed step carried between calls.
    h: f64,
    pub steps: usize,
}

fn comb<const D: usize>(y: &[f64; D], h: f64, terms: &[(f64, &[f64; D])]) -> [f64; D] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..D {
            out[i] += h * c * k[i];
        }
    }
    out
}

impl Dopri {
    pub fn new(rtol: f64, atol: f64, h0: f64) -> Self {
        Dopri { rtol, atol, max_steps: 1_000_000, h: h0, steps: 0 }
    }

    /// Advance `y` from `x0` to `x1`. On failure returns the last accepted
    /// abscissa and a reason.
    pub fn advance<const D: usize, F>(&mut self, f: &F, x0: f64, x1: f64, y: &mut [f64; D]) -> Result<(), (f64, String)>
    where
        F: Fn(f64, &[f64; D]) -> [f64; D],
    {
        let dir = (x1 - x0).signum();
        if dir == 0.0 {
            return Ok(());
        }
        let mut x = x0;
        let mut h = self.h.abs().max(1e-12) * dir;
        let mut k1 = f(x, y);
        loop {
            if (x1 - x) * dir <= 0.0 {
                return Ok(());
            }
            let last = (x + h - x1) * dir >= 0.0;
            let hh = if last { x1 - x } else { h };
            let k2 = f(x + C2 * hh, &comb(y, hh, &[(A21, &k1)]));
            let k3 = f(x + C3 * hh, &comb(y, hh, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(x + C4 * hh, &comb(y, hh, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(x + C5 * hh, &comb(y, hh, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
            let k6 = f(x + hh, &comb(y, hh, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
            let yn = comb(y, hh, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
            let k7 = f(x + hh, &yn);
            let mut err = 0.0;
            for i in 0..D {
                let e = hh * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = self.atol + self.rtol * y[i].abs().max(yn[i].abs());
                err += (e / sc) * (e / sc);
            }
            let err = (err / D as f64).sqrt();
            self.steps += 1;
            if self.steps > self.max_steps {
                return Err((x, "step budget exhausted".into()));
            }
            if !err.is_finite() || yn.iter().any(|v| !v.is_finite()) {
                h *= 0.25;
                if h.abs() < 1e-14 {
                    return Err((x, "non-finite state".into()));
                }
                continue;
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if err <= 1.0 {
                x = if last { x1 } else { x + hh };
                *y = yn;
                k1 = k7;
                if !last {
                    h = hh * fac;
                }
                self.h = h;
            } else {
                h = hh * fac.min(1.0);
                if h.abs() < 1e-14 {
                    return Err((x, "step size underflow".into()));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_and_oscillator() {
        let mut s = Dopri::new(1e-12, 1e-14, 0.1);
        let mut y = [1.0];
        s.advance(&|_x, y: &[f64; 1]| [y[0]], 0.0, 2.0, &mut y).unwrap();
        assert!((y[0] - 2f64.exp()).abs() < 1e-10);
        let mut s = Dopri::new(1e-12, 1e-14, 0.1);
        let mut z = [0.0, 1.0];
        let f = |_x: f64, z: &[f64; 2]| [z[1], -z[0]];
        // backwards, stopping at intermediate points
        let mut x = 0.0;
        for k in 1..=10 {
            let xn = -(k as f64) * 0.7;
            s.advance(&f, x, xn, &mut z).unwrap();
            x = xn;
        }
        assert!((z[0] - x.sin()).abs() < 1e-10);
        assert!((z[1] - x.cos()).abs() < 1e-10);
    }
}
