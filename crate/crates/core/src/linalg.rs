//! Dense exact-rational linear algebra: row reduction, rank, solving, and
//! nullspace bases. Systems here are small (one unknown per graph edge), so
//! plain Gaussian elimination over `BigRational` is the right tool.

use crate::rat::Rat;
use num_traits::{One, Zero};

#[derive(Debug, Clone)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c));
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].clone();
            for j in c..self.cols {
                let v = self[(r, j)].clone() / &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let factor = self[(i, c)].clone();
                    for j in c..self.cols {
                        let v = self[(i, j)].clone() - &factor * &self[(r, j)];
                        self[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right nullspace, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = Some(row);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![Rat::zero(); self.cols];
            vec[free] = Rat::one();
            for (c, slot) in pivot_set.iter().enumerate() {
                if let Some(row) = slot {
                    vec[c] = -m[(*row, free)].clone();
                }
            }
            basis.push(vec);
        }
        basis
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Solves `A x = b` exactly. Returns a particular solution and a basis of
/// the homogeneous solution space, or `None` if the system is inconsistent.
pub fn solve_affine(a: &Matrix, b: &[Rat]) -> Option<(Vec<Rat>, Vec<Vec<Rat>>)> {
    assert_eq!(a.rows, b.len());
    let mut aug = Matrix::zero(a.rows, a.cols + 1);
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, a.cols)] = b[i].clone();
    }
    let pivots = aug.rref();
    if pivots.contains(&a.cols) {
        return None; // pivot in the constant column
    }
    let mut particular = vec![Rat::zero(); a.cols];
    for (row, &c) in pivots.iter().enumerate() {
        particular[c] = aug[(row, a.cols)].clone();
    }
    Some((particular, a.nullspace()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    #[test]
    fn rank_and_nullspace() {
        // x + y + z = 0 has a 2-dimensional nullspace.
        let m = Matrix::from_rows(vec![vec![rat_int(1), rat_int(1), rat_int(1)]]);
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let r = m.mul_vec(v);
            assert!(r.iter().all(|x| x == &rat_int(0)));
        }
    }

    #[test]
    fn solve_unique() {
        // 2x + y = 5, x - y = 1  =>  x = 2, y = 1
        let a = Matrix::from_rows(vec![
            vec![rat_int(2), rat_int(1)],
            vec![rat_int(1), rat_int(-1)],
        ]);
        let (x, hom) = solve_affine(&a, &[rat_int(5), rat_int(1)]).unwrap();
        assert_eq!(x, vec![rat_int(2), rat_int(1)]);
        assert!(hom.is_empty());
    }

    #[test]
    fn solve_inconsistent() {
        let a = Matrix::from_rows(vec![
            vec![rat_int(1), rat_int(1)],
            vec![rat_int(2), rat_int(2)],
        ]);
        assert!(solve_affine(&a, &[rat_int(1), rat_int(3)]).is_none());
    }

    #[test]
    fn solve_underdetermined() {
        let a = Matrix::from_rows(vec![vec![rat(1, 2), rat_int(1), rat_int(0)]]);
        let (x, hom) = solve_affine(&a, &[rat_int(3)]).unwrap();
        assert_eq!(hom.len(), 2);
        assert_eq!(a.mul_vec(&x), vec![rat_int(3)]);
    }
}
