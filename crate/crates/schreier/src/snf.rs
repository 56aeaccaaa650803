//! Integer matrices and Smith normal form.
//!
//! Used to read off abelian invariants from relator exponent-sum matrices.
//! Entries are i64; the matrices arising from presentations here are tiny,
//! so no effort is made to control coefficient growth beyond picking the
//! smallest pivot available.

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds from row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntMatrix { rows: rows.len(), cols, data: rows.concat() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.set(i, j, out.get(i, j) + a * other.get(k, j));
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: i64) {
        for k in 0..self.cols {
            let v = self.get(i, k) + c * self.get(j, k);
            self.set(i, k, v);
        }
    }

    /// col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: i64) {
        for k in 0..self.rows {
            let v = self.get(k, i) + c * self.get(k, j);
            self.set(k, i, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for k in 0..self.cols {
            self.set(i, k, -self.get(i, k));
        }
    }
}

/// Diagonalization `left * m * right = d` with unimodular `left`, `right`
/// and nonnegative diagonal entries forming a divisibility chain.
#[derive(Clone, Debug)]
pub struct SmithNormalForm {
    pub d: IntMatrix,
    pub left: IntMatrix,
    pub right: IntMatrix,
    /// Nonzero diagonal entries, each dividing the next.
    pub diagonal: Vec<i64>,
}

impl SmithNormalForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithNormalForm {
    let mut d = m.clone();
    let mut left = IntMatrix::identity(m.rows());
    let mut right = IntMatrix::identity(m.cols());
    let bound = m.rows().min(m.cols());

    let mut t = 0;
    while t < bound {
        // Smallest nonzero entry of the trailing submatrix becomes the pivot.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..d.rows() {
            for j in t..d.cols() {
                let v = d.get(i, j);
                if v != 0 && pivot.is_none_or(|(pi, pj)| v.abs() < d.get(pi, pj).abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(t, pi);
        left.swap_rows(t, pi);
        d.swap_cols(t, pj);
        right.swap_cols(t, pj);

        loop {
            // Clear column t, restarting whenever a remainder shrinks the pivot.
            let mut dirty = false;
            for i in t + 1..d.rows() {
                let v = d.get(i, t);
                if v == 0 {
                    continue;
                }
                let p = d.get(t, t);
                let q = v.div_euclid(p);
                d.add_row(i, t, -q);
                left.add_row(i, t, -q);
                if d.get(i, t) != 0 {
                    d.swap_rows(t, i);
                    left.swap_rows(t, i);
                    dirty = true;
                    break;
                }
            }
            if dirty {
                continue;
            }
            for j in t + 1..d.cols() {
                let v = d.get(t, j);
                if v == 0 {
                    continue;
                }
                let p = d.get(t, t);
                let q = v.div_euclid(p);
                d.add_col(j, t, -q);
                right.add_col(j, t, -q);
                if d.get(t, j) != 0 {
                    d.swap_cols(t, j);
                    right.swap_cols(t, j);
                    dirty = true;
                    break;
                }
            }
            if dirty {
                continue;
            }
            // Row and column are clear. Fold in any entry the pivot misses
            // so the divisibility chain holds, then redo the clearing.
            let p = d.get(t, t);
            let mut fixed = true;
            'scan: for i in t + 1..d.rows() {
                for j in t + 1..d.cols() {
                    if d.get(i, j) % p != 0 {
                        d.add_row(t, i, 1);
                        left.add_row(t, i, 1);
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }

        if d.get(t, t) < 0 {
            d.negate_row(t);
            left.negate_row(t);
        }
        t += 1;
    }

    let diagonal: Vec<i64> = (0..bound).map(|i| d.get(i, i)).take_while(|&v| v != 0).collect();
    SmithNormalForm { d, left, right, diagonal }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn det(m: &IntMatrix) -> i128 {
        // Laplace expansion; fine for the small matrices in these tests.
        assert_eq!(m.rows(), m.cols());
        let n = m.rows();
        if n == 0 {
            return 1;
        }
        let mut total: i128 = 0;
        for j in 0..n {
            let a = m.get(0, j) as i128;
            if a == 0 {
                continue;
            }
            let mut minor = IntMatrix::zeros(n - 1, n - 1);
            for r in 1..n {
                let mut cc = 0;
                for c in 0..n {
                    if c == j {
                        continue;
                    }
                    minor.set(r - 1, cc, m.get(r, c));
                    cc += 1;
                }
            }
            let sign = if j % 2 == 0 { 1 } else { -1 };
            total += sign * a * det(&minor);
        }
        total
    }

    fn check_invariants(m: &IntMatrix) {
        let snf = smith_normal_form(m);
        assert_eq!(snf.left.mul(m).mul(&snf.right), snf.d, "left*m*right != d");
        assert_eq!(det(&snf.left).abs(), 1, "left not unimodular");
        assert_eq!(det(&snf.right).abs(), 1, "right not unimodular");
        for i in 0..snf.d.rows() {
            for j in 0..snf.d.cols() {
                if i != j {
                    assert_eq!(snf.d.get(i, j), 0, "off-diagonal entry");
                }
            }
        }
        for w in snf.diagonal.windows(2) {
            assert!(w[0] > 0 && w[1] % w[0] == 0, "divisibility chain broken: {:?}", snf.diagonal);
        }
        // Entries past the chain are zero.
        for i in snf.diagonal.len()..m.rows().min(m.cols()) {
            assert_eq!(snf.d.get(i, i), 0);
        }
    }

    #[test]
    fn worked_examples() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(smith_normal_form(&m).diagonal, vec![2, 4]);

        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(smith_normal_form(&m).diagonal, vec![1, 6]);

        let m = IntMatrix::identity(3);
        assert_eq!(smith_normal_form(&m).diagonal, vec![1, 1, 1]);

        let m = IntMatrix::zeros(1, 2);
        assert_eq!(smith_normal_form(&m).diagonal, Vec::<i64>::new());

        // Relation matrix of Z^2 by (2,0),(0,2): two copies of Z/2.
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]]);
        assert_eq!(smith_normal_form(&m).diagonal, vec![2, 2]);
    }

    #[test]
    fn rank_counts_nonzero_diagonal() {
        let m = IntMatrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.rank(), 1);
        assert_eq!(snf.diagonal, vec![1]);
    }

    #[test]
    fn random_matrices_satisfy_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let rows = rng.gen_range(1..=4);
            let cols = rng.gen_range(1..=5);
            let mut m = IntMatrix::zeros(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    m.set(i, j, rng.gen_range(-9..=9));
                }
            }
            check_invariants(&m);
        }
    }

    #[test]
    fn transpose_has_same_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let rows = rng.gen_range(1..=4);
            let cols = rng.gen_range(1..=4);
            let mut m = IntMatrix::zeros(rows, cols);
            let mut mt = IntMatrix::zeros(cols, rows);
            for i in 0..rows {
                for j in 0..cols {
                    let v = rng.gen_range(-6..=6);
                    m.set(i, j, v);
                    mt.set(j, i, v);
                }
            }
            assert_eq!(smith_normal_form(&m).diagonal, smith_normal_form(&mt).diagonal);
        }
    }
}
