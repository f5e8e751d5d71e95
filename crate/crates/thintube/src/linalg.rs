//! Shared linear-algebra kernels: Gauss-Legendre rules and a direct
//! factorization for symmetric block-cyclic-tridiagonal matrices.
//!
//! Every matrix assembled on the periodic tensor mesh couples an s-column of
//! nodes only to itself and to its two neighbouring columns, so the global
//! sparsity is block-cyclic-tridiagonal with dense blocks of size
//! `n_t + 1`. The same holds for 1D periodic pencils with blocks of size 1.
//! A bordered block Cholesky factors such matrices exactly (no fill-in
//! heuristics) and is reused for shift-invert eigeniterations and resolvent
//! solves.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss-Legendre rule on [-1, 1].
///
/// Newton iteration on the Legendre recurrence; exact for polynomials of
/// degree 2n-1.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and P_n'(x) by three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = p1;
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n == 1 {
        nodes[0] = 0.0;
        weights[0] = 2.0;
    }
    (nodes, weights)
}

/// Symmetric matrix with block-cyclic-tridiagonal structure.
///
/// `diag[i]` is the (symmetric) diagonal block of block-row `i`;
/// `off[i]` is the block `A[i+1 mod nb, i]`, i.e. the coupling written in
/// the row of block `i+1` and the column of block `i`. The transposed
/// coupling `A[i, i+1 mod nb] = off[i]^T` is implied.
#[derive(Debug, Clone)]
pub struct BlockCyclicMatrix {
    nb: usize,
    bs: usize,
    diag: Vec<DMatrix<f64>>,
    off: Vec<DMatrix<f64>>,
}

impl BlockCyclicMatrix {
    /// Zero matrix with `nb` blocks of size `bs` (requires `nb >= 3`).
    pub fn zeros(nb: usize, bs: usize) -> Self {
        assert!(nb >= 3, "cyclic structure needs at least 3 blocks");
        assert!(bs >= 1);
        BlockCyclicMatrix {
            nb,
            bs,
            diag: (0..nb).map(|_| DMatrix::zeros(bs, bs)).collect(),
            off: (0..nb).map(|_| DMatrix::zeros(bs, bs)).collect(),
        }
    }

    pub fn num_blocks(&self) -> usize {
        self.nb
    }

    pub fn block_size(&self) -> usize {
        self.bs
    }

    pub fn nrows(&self) -> usize {
        self.nb * self.bs
    }

    /// Accumulate into the diagonal block `i` at local position (r, c).
    #[inline]
    pub fn add_diag(&mut self, i: usize, r: usize, c: usize, v: f64) {
        self.diag[i][(r, c)] += v;
    }

    /// Accumulate into the coupling block `A[i+1 mod nb, i]` at local
    /// position (`r` in block i+1, `c` in block i).
    #[inline]
    pub fn add_off(&mut self, i: usize, r: usize, c: usize, v: f64) {
        self.off[i][(r, c)] += v;
    }

    /// y = A x.
    pub fn mul_vec(&self, x: &DVector<f64>) -> DVector<f64> {
        assert_eq!(x.len(), self.nrows());
        let (nb, bs) = (self.nb, self.bs);
        let mut y = DVector::zeros(self.nrows());
        for i in 0..nb {
            let prev = (i + nb - 1) % nb;
            let next = (i + 1) % nb;
            let xi = x.rows(i * bs, bs);
            let xp = x.rows(prev * bs, bs);
            let xn = x.rows(next * bs, bs);
            let mut yi = y.rows_mut(i * bs, bs);
            yi.gemv(1.0, &self.diag[i], &xi, 1.0);
            // A[i, i-1] = off[i-1]
            yi.gemv(1.0, &self.off[prev], &xp, 1.0);
            // A[i, i+1] = off[i]^T
            yi.gemv_tr(1.0, &self.off[i], &xn, 1.0);
        }
        y
    }

    /// x^T A y.
    pub fn bilinear(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        x.dot(&self.mul_vec(y))
    }

    /// A += c * B (same structure required).
    pub fn add_scaled(&mut self, other: &BlockCyclicMatrix, c: f64) {
        assert_eq!(self.nb, other.nb);
        assert_eq!(self.bs, other.bs);
        for i in 0..self.nb {
            self.diag[i] += c * &other.diag[i];
            self.off[i] += c * &other.off[i];
        }
    }

    /// Dense copy, for small reference computations.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.nrows();
        let (nb, bs) = (self.nb, self.bs);
        let mut a = DMatrix::zeros(n, n);
        for i in 0..nb {
            let next = (i + 1) % nb;
            for r in 0..bs {
                for c in 0..bs {
                    a[(i * bs + r, i * bs + c)] += self.diag[i][(r, c)];
                    a[(next * bs + r, i * bs + c)] += self.off[i][(r, c)];
                    a[(i * bs + c, next * bs + r)] += self.off[i][(r, c)];
                }
            }
        }
        a
    }

    /// Triplet dump (row, col, value) of all stored nonzeros, symmetric
    /// entries included.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let (nb, bs) = (self.nb, self.bs);
        let mut out = Vec::new();
        for i in 0..nb {
            let next = (i + 1) % nb;
            for r in 0..bs {
                for c in 0..bs {
                    let v = self.diag[i][(r, c)];
                    if v != 0.0 {
                        out.push((i * bs + r, i * bs + c, v));
                    }
                    let w = self.off[i][(r, c)];
                    if w != 0.0 {
                        out.push((next * bs + r, i * bs + c, w));
                        out.push((i * bs + c, next * bs + r, w));
                    }
                }
            }
        }
        out.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        out
    }
}

/// Cholesky factorization of an SPD [`BlockCyclicMatrix`].
///
/// The cyclic wrap couples the first and last block; eliminating blocks
/// 0..nb-2 in order while carrying the last block as a border keeps the
/// factor block-bidiagonal plus one full border row.
pub struct BlockCholesky {
    nb: usize,
    bs: usize,
    /// Lower-triangular diagonal factors L_i.
    lfac: Vec<DMatrix<f64>>,
    /// Chain sub-diagonal blocks F_i = A'[i+1, i] L_i^{-T}, i = 0..nb-3.
    fsub: Vec<DMatrix<f64>>,
    /// Border row blocks B_j = A'[nb-1, j] L_j^{-T}, j = 0..nb-2.
    brow: Vec<DMatrix<f64>>,
}

impl BlockCholesky {
    pub fn factor(a: &BlockCyclicMatrix) -> Result<Self> {
        let (nb, bs) = (a.nb, a.bs);
        let last = nb - 1;

        let mut schur = a.diag[0].clone();
        let mut border_diag = a.diag[last].clone();
        let mut border_col: DMatrix<f64> = a.off[last].transpose(); // A[last, 0]

        let mut lfac: Vec<DMatrix<f64>> = Vec::with_capacity(nb);
        let mut fsub: Vec<DMatrix<f64>> = Vec::with_capacity(nb.saturating_sub(2));
        let mut brow: Vec<DMatrix<f64>> = Vec::with_capacity(nb - 1);

        for i in 0..last {
            let li = chol_lower(&schur).ok_or(Error::FactorizationFailed {
                block: i,
                pivot: min_diag(&schur),
            })?;

            // Border row in column i: starts as the wrap block for i = 0 and
            // the plain off-diagonal for i = nb-2, accumulating fill
            // otherwise.
            let mut ci = border_col.clone();
            if i == last - 1 {
                ci += &a.off[i]; // A[last, last-1]
            }
            let bi = solve_lt_right(&li, &ci); // B_i = C_i L_i^{-T}
            border_diag -= &bi * bi.transpose();

            if i < last - 1 {
                let fi = solve_lt_right(&li, &a.off[i]); // F_i = A[i+1, i] L_i^{-T}
                schur = &a.diag[i + 1] - &fi * fi.transpose();
                border_col = -(&bi * fi.transpose());
                fsub.push(fi);
            }
            brow.push(bi);
            lfac.push(li);
        }

        let lb = chol_lower(&border_diag).ok_or(Error::FactorizationFailed {
            block: last,
            pivot: min_diag(&border_diag),
        })?;
        lfac.push(lb);

        Ok(BlockCholesky {
            nb,
            bs,
            lfac,
            fsub,
            brow,
        })
    }

    pub fn nrows(&self) -> usize {
        self.nb * self.bs
    }

    /// Solve A x = b.
    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        assert_eq!(b.len(), self.nrows());
        let (nb, bs) = (self.nb, self.bs);
        let last = nb - 1;

        // Forward: L y = b.
        let mut y = b.clone();
        for i in 0..last {
            if i > 0 {
                let prev = y.rows((i - 1) * bs, bs).clone_owned();
                let mut yi = y.rows_mut(i * bs, bs);
                yi.gemv(-1.0, &self.fsub[i - 1], &prev, 1.0);
            }
            let yi = y.rows(i * bs, bs).clone_owned();
            let sol = self.lfac[i]
                .solve_lower_triangular(&yi)
                .expect("factor has positive diagonal");
            y.rows_mut(i * bs, bs).copy_from(&sol);
        }
        {
            let mut acc = y.rows(last * bs, bs).clone_owned();
            for j in 0..last {
                let yj = y.rows(j * bs, bs).clone_owned();
                acc.gemv(-1.0, &self.brow[j], &yj, 1.0);
            }
            let sol = self.lfac[last]
                .solve_lower_triangular(&acc)
                .expect("factor has positive diagonal");
            y.rows_mut(last * bs, bs).copy_from(&sol);
        }

        // Backward: L^T x = y.
        let mut x = y;
        {
            let xl = x.rows(last * bs, bs).clone_owned();
            let sol = self.lfac[last]
                .tr_solve_upper(&xl);
            x.rows_mut(last * bs, bs).copy_from(&sol);
        }
        let xlast = x.rows(last * bs, bs).clone_owned();
        for i in (0..last).rev() {
            let mut rhs = x.rows(i * bs, bs).clone_owned();
            // border contribution B_i^T x_last
            rhs.gemv_tr(-1.0, &self.brow[i], &xlast, 1.0);
            if i < last - 1 {
                let xn = x.rows((i + 1) * bs, bs).clone_owned();
                rhs.gemv_tr(-1.0, &self.fsub[i], &xn, 1.0);
            }
            let sol = self.lfac[i].tr_solve_upper(&rhs);
            x.rows_mut(i * bs, bs).copy_from(&sol);
        }
        x
    }
}

trait TrSolve {
    fn tr_solve_upper(&self, rhs: &DVector<f64>) -> DVector<f64>;
}

impl TrSolve for DMatrix<f64> {
    /// Solve L^T x = rhs for lower-triangular self.
    fn tr_solve_upper(&self, rhs: &DVector<f64>) -> DVector<f64> {
        self.tr_solve_lower_triangular(rhs)
            .expect("factor has positive diagonal")
    }
}

/// Lower Cholesky factor, or None if a pivot is not strictly positive.
fn chol_lower(a: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    nalgebra::Cholesky::new(a.clone()).map(|c| c.unpack())
}

fn min_diag(a: &DMatrix<f64>) -> f64 {
    (0..a.nrows()).map(|i| a[(i, i)]).fold(f64::INFINITY, f64::min)
}

/// X = C L^{-T}: solve X L^T = C given lower-triangular L.
fn solve_lt_right(l: &DMatrix<f64>, c: &DMatrix<f64>) -> DMatrix<f64> {
    // (X L^T)^T = L X^T = C^T
    let xt = l
        .solve_lower_triangular(&c.transpose())
        .expect("factor has positive diagonal");
    xt.transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_spd(nb: usize, bs: usize, seed: u64) -> BlockCyclicMatrix {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut a = BlockCyclicMatrix::zeros(nb, bs);
        for i in 0..nb {
            for r in 0..bs {
                for c in 0..=r {
                    let v = rng.gen_range(-1.0..1.0);
                    a.add_diag(i, r, c, v);
                    if c != r {
                        a.add_diag(i, c, r, v);
                    }
                }
                // strict diagonal dominance makes it SPD
                a.add_diag(i, r, r, 4.0 * bs as f64);
            }
            for r in 0..bs {
                for c in 0..bs {
                    a.add_off(i, r, c, rng.gen_range(-1.0..1.0));
                }
            }
        }
        a
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        for n in [2, 4, 8, 16] {
            let (x, w) = gauss_legendre(n);
            assert_eq!(x.len(), n);
            // integrate t^k over [-1,1] for k up to 2n-1
            for k in 0..2 * n {
                let num: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(k as i32)).sum();
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                assert!(
                    (num - exact).abs() < 1e-13,
                    "n={n} k={k}: {num} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn matvec_matches_dense() {
        let mut rng = StdRng::seed_from_u64(7);
        for (nb, bs) in [(3, 1), (5, 2), (8, 3)] {
            let a = random_spd(nb, bs, 100 + nb as u64);
            let d = a.to_dense();
            let x = DVector::from_fn(nb * bs, |_, _| rng.gen_range(-1.0..1.0));
            let y = a.mul_vec(&x);
            let yd = &d * &x;
            assert!((y - yd).norm() < 1e-12);
        }
    }

    #[test]
    fn cholesky_solves_match_dense() {
        let mut rng = StdRng::seed_from_u64(11);
        for (nb, bs) in [(3, 1), (4, 1), (5, 3), (9, 4), (16, 2)] {
            let a = random_spd(nb, bs, 200 + nb as u64 * 10 + bs as u64);
            let f = BlockCholesky::factor(&a).unwrap();
            let b = DVector::from_fn(nb * bs, |_, _| rng.gen_range(-1.0..1.0));
            let x = f.solve(&b);
            let res = (a.mul_vec(&x) - &b).norm() / b.norm();
            assert!(res < 1e-12, "nb={nb} bs={bs} residual {res}");
        }
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        let mut a = BlockCyclicMatrix::zeros(4, 2);
        for i in 0..4 {
            a.add_diag(i, 0, 0, -1.0);
            a.add_diag(i, 1, 1, -1.0);
        }
        match BlockCholesky::factor(&a) {
            Err(Error::FactorizationFailed { .. }) => {}
            Err(other) => panic!("expected factorization failure, got {other:?}"),
            Ok(_) => panic!("indefinite matrix factored"),
        }
    }

    #[test]
    fn dense_round_trip_is_symmetric() {
        let a = random_spd(6, 3, 42);
        let d = a.to_dense();
        assert!((&d - d.transpose()).norm() < 1e-14);
    }
}
