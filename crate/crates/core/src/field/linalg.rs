use super::FiniteField;

/// A dense matrix of field-element indices. Vectors are rows and act on the
/// left (`x ↦ x·M`), so the product `A·B` is "apply `A`, then `B`".
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| u32::from(i == j))
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<u32>) -> Option<Self> {
        (data.len() == rows * cols).then_some(Matrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &Matrix, f: &FiniteField) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix, f: &FiniteField) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix, f: &FiniteField) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, r: u32, f: &FiniteField) -> Matrix {
        let data = self.data.iter().map(|&a| f.mul(r, a)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// Row vector times matrix.
    pub fn apply(&self, x: &[u32], f: &FiniteField) -> Vec<u32> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![0u32; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(xi, self.get(i, j)));
            }
        }
        out
    }

    /// Row-reduced echelon form and rank.
    fn reduce(&self, f: &FiniteField) -> (Matrix, usize) {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(piv) = (rank..m.rows).find(|&r| m.get(r, col) != 0) else { continue };
            for j in 0..m.cols {
                let (a, b) = (m.get(rank, j), m.get(piv, j));
                m.set(rank, j, b);
                m.set(piv, j, a);
            }
            let inv = f.inv(m.get(rank, col)).expect("pivot is nonzero");
            for j in 0..m.cols {
                let v = f.mul(inv, m.get(rank, j));
                m.set(rank, j, v);
            }
            for r in 0..m.rows {
                let c = m.get(r, col);
                if r != rank && c != 0 {
                    for j in 0..m.cols {
                        let v = f.sub(m.get(r, j), f.mul(c, m.get(rank, j)));
                        m.set(r, j, v);
                    }
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        (m, rank)
    }

    /// Basis of `{v : M v^T = 0}`.
    pub fn nullspace(&self, f: &FiniteField) -> Vec<Vec<u32>> {
        let (red, rank) = self.reduce(f);
        let mut pivots = Vec::with_capacity(rank);
        for r in 0..rank {
            pivots.push((0..red.cols).find(|&c| red.get(r, c) != 0).expect("pivot row"));
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(red.get(r, free));
            }
            out.push(v);
        }
        out
    }

    pub fn rank(&self, f: &FiniteField) -> usize {
        self.reduce(f).1
    }

    pub fn inverse(&self, f: &FiniteField) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = Matrix::from_fn(n, 2 * n, |i, j| if j < n { self.get(i, j) } else { u32::from(j - n == i) });
        let (red, _) = aug.reduce(f);
        if (0..n).any(|i| red.get(i, i) != 1) {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| red.get(i, n + j)))
    }

    pub fn is_invertible(&self, f: &FiniteField) -> bool {
        self.rows == self.cols && self.rank(f) == self.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_rank() {
        let f = FiniteField::prime(7).unwrap();
        let m = Matrix::from_rows(2, 2, vec![1, 2, 3, 4]).unwrap();
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&inv, &f), Matrix::identity(2));
        let singular = Matrix::from_rows(2, 2, vec![1, 2, 2, 4]).unwrap();
        assert_eq!(singular.rank(&f), 1);
        assert!(singular.inverse(&f).is_none());
        let ns = singular.nullspace(&f);
        assert_eq!(ns.len(), 1);
        assert_eq!(singular.apply(&ns[0], &f), vec![0, 0]);
    }
}
