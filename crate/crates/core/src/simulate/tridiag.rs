//! Symmetric tridiagonal eigenvalues by Sturm bisection, and Householder
//! reduction of dense Hermitian matrices to that form.

/// Real symmetric tridiagonal matrix: `diag` and squared off-diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off_sq: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(diag: Vec<f64>, off: &[f64]) -> Self {
        assert_eq!(off.len() + 1, diag.len().max(1));
        Tridiagonal { diag, off_sq: off.iter().map(|b| b * b).collect() }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly greater than `x`.
    pub fn count_above(&self, x: f64) -> usize {
        let mut below = 0;
        let mut q = 1.0;
        for i in 0..self.diag.len() {
            let b2 = if i == 0 { 0.0 } else { self.off_sq[i - 1] };
            q = self.diag[i] - x - if b2 == 0.0 { 0.0 } else { b2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (x.abs() + 1.0);
            }
            if q < 0.0 {
                below += 1;
            }
        }
        self.diag.len() - below
    }

    /// Gershgorin interval.
    pub fn bounds(&self) -> (f64, f64) {
        let n = self.diag.len();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..n {
            let r = if i > 0 { self.off_sq[i - 1].sqrt() } else { 0.0 }
                + if i + 1 < n { self.off_sq[i].sqrt() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// `k`-th largest eigenvalue (`k = 1` is the maximum).
    pub fn kth_largest(&self, k: usize) -> f64 {
        assert!(k >= 1 && k <= self.len());
        if self.len() == 1 {
            return self.diag[0];
        }
        let (mut lo, mut hi) = self.bounds();
        let pad = 1e-12 * (lo.abs().max(hi.abs()) + 1.0);
        lo -= pad;
        hi += pad;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 1e-13 * (lo.abs().max(hi.abs()) + 1.0) {
                break;
            }
            if self.count_above(mid) >= k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn largest(&self) -> f64 {
        self.kth_largest(1)
    }
}

/// Dense Hermitian matrix in row-major split storage.
#[derive(Clone, Debug, PartialEq)]
pub struct Hermitian {
    pub n: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl Hermitian {
    pub fn zeros(n: usize) -> Self {
        Hermitian { n, re: vec![0.0; n * n], im: vec![0.0; n * n] }
    }

    /// Reduce to real tridiagonal form with the same spectrum. Only the
    /// lower triangle is read. The off-diagonal phases are dropped since a
    /// diagonal unitary removes them.
    pub fn tridiagonalize(mut self) -> Tridiagonal {
        let n = self.n;
        let (re, im) = (&mut self.re, &mut self.im);
        let mut off = Vec::with_capacity(n.saturating_sub(1));
        let mut vr = vec![0.0; n];
        let mut vi = vec![0.0; n];
        let mut pr = vec![0.0; n];
        let mut pi = vec![0.0; n];
        for k in 0..n.saturating_sub(1) {
            let s = k + 1;
            let mut norm2 = 0.0;
            for i in s..n {
                norm2 += re[i * n + k] * re[i * n + k] + im[i * n + k] * im[i * n + k];
            }
            let norm = norm2.sqrt();
            off.push(norm);
            if norm == 0.0 {
                continue;
            }
            let (x0r, x0i) = (re[s * n + k], im[s * n + k]);
            let a0 = (x0r * x0r + x0i * x0i).sqrt();
            let (ph_r, ph_i) = if a0 > 0.0 { (x0r / a0, x0i / a0) } else { (1.0, 0.0) };
            // v = x + e^{i arg x0} |x| e0
            for i in s..n {
                vr[i] = re[i * n + k];
                vi[i] = im[i * n + k];
            }
            vr[s] += ph_r * norm;
            vi[s] += ph_i * norm;
            let vnorm2 = norm2 + 2.0 * a0 * norm + norm2;
            let tau = 2.0 / vnorm2;
            // p = tau B v from the lower triangle
            for i in s..n {
                pr[i] = 0.0;
                pi[i] = 0.0;
            }
            for i in s..n {
                let row = i * n;
                let (mut sr, mut si) = (re[row + i] * vr[i], re[row + i] * vi[i]);
                let (xr, xi) = (vr[i], vi[i]);
                for j in s..i {
                    let (br, bi) = (re[row + j], im[row + j]);
                    sr += br * vr[j] - bi * vi[j];
                    si += br * vi[j] + bi * vr[j];
                    // conj(B_ij) v_i into row j
                    pr[j] += br * xr + bi * xi;
                    pi[j] += br * xi - bi * xr;
                }
                pr[i] += sr;
                pi[i] += si;
            }
            for i in s..n {
                pr[i] *= tau;
                pi[i] *= tau;
            }
            // K = tau/2 v^H p (real)
            let mut kk = 0.0;
            for i in s..n {
                kk += vr[i] * pr[i] + vi[i] * pi[i];
            }
            kk *= 0.5 * tau;
            // w = p - K v, stored in p
            for i in s..n {
                pr[i] -= kk * vr[i];
                pi[i] -= kk * vi[i];
            }
            // B -= v w^H + w v^H on the lower triangle
            for i in s..n {
                let row = i * n;
                let (a_r, a_i, w_r, w_i) = (vr[i], vi[i], pr[i], pi[i]);
                for j in s..=i {
                    re[row + j] -= a_r * pr[j] + a_i * pi[j] + w_r * vr[j] + w_i * vi[j];
                    im[row + j] -= a_i * pr[j] - a_r * pi[j] + w_i * vr[j] - w_r * vi[j];
                }
            }
        }
        let diag = (0..n).map(|i| re[i * n + i]).collect();
        Tridiagonal { diag, off_sq: off.iter().map(|b| b * b).collect() }
    }
}
