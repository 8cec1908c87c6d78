//! Tridiagonal systems, with optional periodic corner entries.
//!
//! All spatial operators in this crate reduce to (possibly cyclic)
//! tridiagonal matrices, so the Thomas algorithm plus a Sherman-Morrison
//! correction covers every linear solve.

use crate::error::{Error, Result};

/// A tridiagonal matrix; `wrap = (top_right, bottom_left)` adds the two
/// corner entries of a periodic stencil.
#[derive(Debug, Clone)]
pub struct Tridiag {
    pub sub: Vec<f64>,  // sub[i] = A[i+1][i], length n-1
    pub diag: Vec<f64>, // length n
    pub sup: Vec<f64>,  // sup[i] = A[i][i+1], length n-1
    pub wrap: Option<(f64, f64)>,
}

impl Tridiag {
    pub fn zeros(n: usize, periodic: bool) -> Self {
        Tridiag {
            sub: vec![0.0; n.saturating_sub(1)],
            diag: vec![0.0; n],
            sup: vec![0.0; n.saturating_sub(1)],
            wrap: if periodic { Some((0.0, 0.0)) } else { None },
        }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(x.len(), n);
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut v = self.diag[i] * x[i];
            if i > 0 {
                v += self.sub[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                v += self.sup[i] * x[i + 1];
            }
            y[i] = v;
        }
        if let Some((tr, bl)) = self.wrap {
            y[0] += tr * x[n - 1];
            y[n - 1] += bl * x[0];
        }
        y
    }

    /// Returns `I - a * self` (corner entries scale along).
    pub fn identity_minus_scaled(&self, a: f64) -> Tridiag {
        let mut out = self.clone();
        for v in out.sub.iter_mut() {
            *v *= -a;
        }
        for v in out.sup.iter_mut() {
            *v *= -a;
        }
        for v in out.diag.iter_mut() {
            *v = 1.0 - a * *v;
        }
        if let Some((tr, bl)) = out.wrap {
            out.wrap = Some((-a * tr, -a * bl));
        }
        out
    }

    /// Returns `self * diag(c)` (column scaling).
    pub fn scale_columns(&self, c: &[f64]) -> Tridiag {
        let n = self.n();
        assert_eq!(c.len(), n);
        let mut out = self.clone();
        for i in 0..n {
            out.diag[i] *= c[i];
        }
        for i in 0..n - 1 {
            out.sup[i] *= c[i + 1]; // column i+1
            out.sub[i] *= c[i]; // column i
        }
        if let Some((tr, bl)) = out.wrap {
            out.wrap = Some((tr * c[n - 1], bl * c[0]));
        }
        out
    }

    /// Solves `self * x = b`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        match self.wrap {
            None => thomas(&self.sub, &self.diag, &self.sup, b),
            Some((tr, bl)) if tr == 0.0 && bl == 0.0 => thomas(&self.sub, &self.diag, &self.sup, b),
            Some((tr, bl)) => {
                // Sherman-Morrison: write the cyclic matrix as T + u v^T with
                // u = (gamma, 0, .., 0, bl)^T, v = (1, 0, .., 0, tr/gamma)^T.
                let n = self.n();
                if n < 3 {
                    return Err(Error::InvalidParam(
                        "cyclic tridiagonal solve needs at least 3 unknowns".into(),
                    ));
                }
                let gamma = -self.diag[0];
                let mut diag = self.diag.clone();
                diag[0] -= gamma;
                diag[n - 1] -= tr * bl / gamma;
                let y = thomas(&self.sub, &diag, &self.sup, b)?;
                let mut u = vec![0.0; n];
                u[0] = gamma;
                u[n - 1] = bl;
                let z = thomas(&self.sub, &diag, &self.sup, &u)?;
                let vy = y[0] + tr / gamma * y[n - 1];
                let vz = z[0] + tr / gamma * z[n - 1];
                let denom = 1.0 + vz;
                if denom == 0.0 || !denom.is_finite() {
                    return Err(Error::solver("singular cyclic tridiagonal system", 0, f64::NAN, 0));
                }
                let factor = vy / denom;
                Ok(y.iter().zip(z.iter()).map(|(yi, zi)| yi - factor * zi).collect())
            }
        }
    }
}

fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    assert_eq!(b.len(), n);
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut piv = diag[0];
    if piv == 0.0 || !piv.is_finite() {
        return Err(Error::solver("zero pivot in tridiagonal solve", 0, f64::NAN, 0));
    }
    if n > 1 {
        c[0] = sup[0] / piv;
    }
    d[0] = b[0] / piv;
    for i in 1..n {
        piv = diag[i] - sub[i - 1] * c[i - 1];
        if piv == 0.0 || !piv.is_finite() {
            return Err(Error::solver("zero pivot in tridiagonal solve", 0, f64::NAN, 0));
        }
        if i + 1 < n {
            c[i] = sup[i] / piv;
        }
        d[i] = (b[i] - sub[i - 1] * d[i - 1]) / piv;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense_solve(a: &Vec<Vec<f64>>, b: &[f64]) -> Vec<f64> {
        // Gaussian elimination with partial pivoting; test oracle only.
        let n = b.len();
        let mut m: Vec<Vec<f64>> = a.clone();
        let mut rhs = b.to_vec();
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
                .unwrap();
            m.swap(col, piv);
            rhs.swap(col, piv);
            let p = m[col][col];
            for row in col + 1..n {
                let f = m[row][col] / p;
                for k in col..n {
                    m[row][k] -= f * m[col][k];
                }
                rhs[row] -= f * rhs[col];
            }
        }
        let mut x = vec![0.0; n];
        for row in (0..n).rev() {
            let mut s = rhs[row];
            for k in row + 1..n {
                s -= m[row][k] * x[k];
            }
            x[row] = s / m[row][row];
        }
        x
    }

    fn to_dense(t: &Tridiag) -> Vec<Vec<f64>> {
        let n = t.n();
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            a[i][i] = t.diag[i];
            if i > 0 {
                a[i][i - 1] = t.sub[i - 1];
            }
            if i + 1 < n {
                a[i][i + 1] = t.sup[i];
            }
        }
        if let Some((tr, bl)) = t.wrap {
            a[0][n - 1] += tr;
            a[n - 1][0] += bl;
        }
        a
    }

    fn random_system(seed: u64, n: usize, periodic: bool) -> (Tridiag, Vec<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = Tridiag::zeros(n, periodic);
        for i in 0..n {
            t.diag[i] = 4.0 + rng.gen::<f64>();
        }
        for i in 0..n - 1 {
            t.sub[i] = -1.0 + 0.2 * rng.gen::<f64>();
            t.sup[i] = -1.0 + 0.2 * rng.gen::<f64>();
        }
        if periodic {
            t.wrap = Some((-0.9 + 0.1 * rng.gen::<f64>(), -0.9 + 0.1 * rng.gen::<f64>()));
        }
        let b: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
        (t, b)
    }

    #[test]
    fn thomas_matches_dense_oracle() {
        for seed in 0..5 {
            let (t, b) = random_system(seed, 40, false);
            let x = t.solve(&b).unwrap();
            let y = dense_solve(&to_dense(&t), &b);
            for (a, b) in x.iter().zip(y.iter()) {
                assert!((a - b).abs() < 1e-10, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn cyclic_matches_dense_oracle() {
        for seed in 10..15 {
            let (t, b) = random_system(seed, 37, true);
            let x = t.solve(&b).unwrap();
            let y = dense_solve(&to_dense(&t), &b);
            for (a, b) in x.iter().zip(y.iter()) {
                assert!((a - b).abs() < 1e-10, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn matvec_roundtrip() {
        let (t, b) = random_system(3, 25, true);
        let x = t.solve(&b).unwrap();
        let back = t.matvec(&x);
        for (a, b) in back.iter().zip(b.iter()) {
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn column_scaling_is_exact() {
        let (t, _) = random_system(7, 12, true);
        let c: Vec<f64> = (0..12).map(|i| 0.5 + i as f64).collect();
        let scaled = t.scale_columns(&c);
        let x: Vec<f64> = (0..12).map(|i| (i as f64).sin()).collect();
        let cx: Vec<f64> = x.iter().zip(c.iter()).map(|(a, b)| a * b).collect();
        let lhs = scaled.matvec(&x);
        let rhs = t.matvec(&cx);
        for (a, b) in lhs.iter().zip(rhs.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
