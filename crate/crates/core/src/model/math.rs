//! Dense row-major f64 matrices and the handful of kernels the network
//! needs. Every kernel accumulates along a fixed order (k-sequential per
//! output element), so results are bit-reproducible and independent of row
//! count or batch composition.

#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> f64>(rows: usize, cols: usize, mut f: F) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn gather_rows(&self, idx: &[usize]) -> Mat {
        let mut out = Mat::zeros(idx.len(), self.cols);
        for (i, &src) in idx.iter().enumerate() {
            out.row_mut(i).copy_from_slice(self.row(src));
        }
        out
    }

    pub fn fill(&mut self, v: f64) {
        self.data.iter_mut().for_each(|x| *x = v);
    }

    pub fn add_assign(&mut self, other: &Mat) {
        debug_assert_eq!(self.data.len(), other.data.len());
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn map_inplace<F: Fn(f64) -> f64>(&mut self, f: F) {
        for v in &mut self.data {
            *v = f(*v);
        }
    }

    pub fn mapped<F: Fn(f64) -> f64>(&self, f: F) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// C = A · Bᵀ where A is m×k and B is n×k. Dot-product kernel; per-element
/// accumulation runs over k in order.
pub fn matmul_nt(a: &Mat, b: &Mat) -> Mat {
    assert_eq!(a.cols, b.cols);
    let mut c = Mat::zeros(a.rows, b.rows);
    matmul_nt_acc(a, b, &mut c);
    c
}

pub fn matmul_nt_acc(a: &Mat, b: &Mat, c: &mut Mat) {
    assert_eq!(a.cols, b.cols);
    assert_eq!(c.rows, a.rows);
    assert_eq!(c.cols, b.rows);
    let k = a.cols;
    for i in 0..a.rows {
        let ar = a.row(i);
        let cr = c.row_mut(i);
        for j in 0..b.rows {
            let br = b.row(j);
            let mut acc = 0.0;
            for t in 0..k {
                acc += ar[t] * br[t];
            }
            cr[j] += acc;
        }
    }
}

/// C += A · B where A is m×k and B is k×n. ikj streaming kernel.
pub fn matmul_acc(a: &Mat, b: &Mat, c: &mut Mat) {
    assert_eq!(a.cols, b.rows);
    assert_eq!(c.rows, a.rows);
    assert_eq!(c.cols, b.cols);
    let n = b.cols;
    for i in 0..a.rows {
        let ar = a.row(i);
        let cr = &mut c.data[i * n..(i + 1) * n];
        for (t, &av) in ar.iter().enumerate() {
            if av == 0.0 {
                continue;
            }
            let br = b.row(t);
            for j in 0..n {
                cr[j] += av * br[j];
            }
        }
    }
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let mut c = Mat::zeros(a.rows, b.cols);
    matmul_acc(a, b, &mut c);
    c
}

/// C += Aᵀ · B where A is k×m and B is k×n (gradient outer products).
pub fn matmul_tn_acc(a: &Mat, b: &Mat, c: &mut Mat) {
    assert_eq!(a.rows, b.rows);
    assert_eq!(c.rows, a.cols);
    assert_eq!(c.cols, b.cols);
    let n = b.cols;
    for t in 0..a.rows {
        let ar = a.row(t);
        let br = b.row(t);
        for (i, &av) in ar.iter().enumerate() {
            if av == 0.0 {
                continue;
            }
            let cr = &mut c.data[i * n..(i + 1) * n];
            for j in 0..n {
                cr[j] += av * br[j];
            }
        }
    }
}

/// Y = X · Wᵀ + bias (bias broadcast over rows).
pub fn linear_nt(x: &Mat, w: &Mat, bias: &Mat) -> Mat {
    debug_assert_eq!(bias.rows, 1);
    debug_assert_eq!(bias.cols, w.rows);
    let mut y = Mat::zeros(x.rows, w.rows);
    for i in 0..x.rows {
        y.row_mut(i).copy_from_slice(bias.row(0));
    }
    matmul_nt_acc(x, w, &mut y);
    y
}

/// Accumulate column sums of `x` into the 1×cols matrix `into`.
pub fn colsum_acc(x: &Mat, into: &mut Mat) {
    debug_assert_eq!(into.cols, x.cols);
    let row = into.row_mut(0);
    for i in 0..x.rows {
        for (j, v) in x.row(i).iter().enumerate() {
            row[j] += v;
        }
    }
}

#[inline]
pub fn sigmoid(v: f64) -> f64 {
    1.0 / (1.0 + (-v).exp())
}

/// Sum the given rows of `m` in an order canonical under row relabeling:
/// rows are sorted lexicographically by value (total order on f64) before
/// summation, so the result is bitwise independent of the row ordering.
pub fn canonical_row_sum(m: &Mat, rows: &[usize], out: &mut [f64]) {
    debug_assert_eq!(out.len(), m.cols);
    out.iter_mut().for_each(|v| *v = 0.0);
    let mut order: Vec<usize> = rows.to_vec();
    order.sort_by(|&a, &b| {
        let ra = m.row(a);
        let rb = m.row(b);
        for t in 0..m.cols {
            match ra[t].total_cmp(&rb[t]) {
                std::cmp::Ordering::Equal => continue,
                other => return other,
            }
        }
        std::cmp::Ordering::Equal
    });
    for &r in &order {
        let row = m.row(r);
        for (o, v) in out.iter_mut().zip(row) {
            *o += v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matmul_shapes_and_values() {
        let a = Mat::from_rows(vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        let b = Mat::from_rows(vec![vec![5.0, 6.0], vec![7.0, 8.0]]);
        let c = matmul(&a, &b);
        assert_eq!(c.data, vec![19.0, 22.0, 43.0, 50.0]);
        // A·Bᵀ
        let d = matmul_nt(&a, &b);
        assert_eq!(d.data, vec![17.0, 23.0, 39.0, 53.0]);
    }

    #[test]
    fn transpose_accumulation() {
        let a = Mat::from_rows(vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        let b = Mat::from_rows(vec![vec![5.0], vec![6.0]]);
        let mut c = Mat::zeros(2, 1);
        matmul_tn_acc(&a, &b, &mut c); // Aᵀ·B = [[1,3],[2,4]]·[[5],[6]]
        assert_eq!(c.data, vec![23.0, 34.0]);
    }

    #[test]
    fn canonical_sum_is_order_independent() {
        let m = Mat::from_rows(vec![
            vec![0.1, 0.7],
            vec![0.3, -0.2],
            vec![-0.5, 0.9],
        ]);
        let mut a = vec![0.0; 2];
        let mut b = vec![0.0; 2];
        canonical_row_sum(&m, &[0, 1, 2], &mut a);
        canonical_row_sum(&m, &[2, 0, 1], &mut b);
        assert_eq!(a, b);
    }
}
