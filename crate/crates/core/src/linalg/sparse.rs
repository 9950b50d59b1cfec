use std::collections::BTreeMap;
use std::fmt;

use super::Scalar;

/// Sparse matrix over the rationals, stored column by column.
///
/// Every column is sorted by row index and holds no explicit zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, Scalar)>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        let columns = (0..n).map(|i| vec![(i, Scalar::one())]).collect();
        SparseMatrix { rows: n, cols: n, columns }
    }

    /// Builds a matrix from `(row, col, value)` triplets, summing duplicates and dropping zeros.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        let mut acc: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); cols];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r},{c}) out of bounds {rows}x{cols}");
            if v.is_zero() {
                continue;
            }
            let slot = acc[c].entry(r).or_insert_with(Scalar::zero);
            *slot += &v;
        }
        let columns = acc
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        SparseMatrix { rows, cols, columns }
    }

    /// Builds a matrix from sparse columns. Each column may be unsorted and contain duplicates.
    pub fn from_columns(rows: usize, cols: Vec<Vec<(usize, Scalar)>>) -> Self {
        let ncols = cols.len();
        let triplets = cols
            .into_iter()
            .enumerate()
            .flat_map(|(c, col)| col.into_iter().map(move |(r, v)| (r, c, v)));
        SparseMatrix::from_triplets(rows, ncols, triplets)
    }

    pub fn from_dense(rows: &[Vec<Scalar>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let triplets = rows.iter().enumerate().flat_map(|(r, row)| {
            assert_eq!(row.len(), ncols, "ragged dense matrix");
            row.iter().enumerate().map(move |(c, v)| (r, c, v.clone()))
        });
        SparseMatrix::from_triplets(nrows, ncols, triplets)
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Scalar>> =
            rows.iter().map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect()).collect();
        SparseMatrix::from_dense(&dense)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn column(&self, c: usize) -> &[(usize, Scalar)] {
        &self.columns[c]
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        match self.columns[c].binary_search_by_key(&r, |(i, _)| *i) {
            Ok(k) => self.columns[c][k].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    /// Entries in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                cols[*r].push((c, v.clone()));
            }
        }
        SparseMatrix { rows: self.cols, cols: self.rows, columns: cols }
    }

    /// Sparse rows, each sorted by column.
    pub fn to_rows(&self) -> Vec<Vec<(usize, Scalar)>> {
        self.transpose().columns
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut d = vec![vec![Scalar::zero(); self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            d[r][c] = v.clone();
        }
        d
    }

    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let columns = rhs
            .columns
            .iter()
            .map(|rcol| {
                let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (k, b) in rcol {
                    for (i, a) in &self.columns[*k] {
                        let slot = acc.entry(*i).or_insert_with(Scalar::zero);
                        *slot += &(a * b);
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: rhs.cols, columns }
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![Scalar::zero(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            if x[c].is_zero() {
                continue;
            }
            for (r, v) in col {
                y[*r] += &(v * &x[c]);
            }
        }
        y
    }

    pub fn add(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let t = self.entries().chain(rhs.entries()).map(|(r, c, v)| (r, c, v.clone()));
        SparseMatrix::from_triplets(self.rows, self.cols, t)
    }

    pub fn sub(&self, rhs: &SparseMatrix) -> SparseMatrix {
        self.add(&rhs.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> SparseMatrix {
        if s.is_zero() {
            return SparseMatrix::zero(self.rows, self.cols);
        }
        let columns = self
            .columns
            .iter()
            .map(|col| col.iter().map(|(r, v)| (*r, v * s)).collect())
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, columns }
    }

    /// Columns `idx` of `self`, in that order.
    pub fn select_columns(&self, idx: &[usize]) -> SparseMatrix {
        let columns = idx.iter().map(|&c| self.columns[c].clone()).collect();
        SparseMatrix { rows: self.rows, cols: idx.len(), columns }
    }

    /// `[self | rhs]`.
    pub fn hstack(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.rows, rhs.rows);
        let mut columns = self.columns.clone();
        columns.extend(rhs.columns.iter().cloned());
        SparseMatrix { rows: self.rows, cols: self.cols + rhs.cols, columns }
    }

    /// `[self ; rhs]`.
    pub fn vstack(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, rhs.cols);
        let off = self.rows;
        let columns = self
            .columns
            .iter()
            .zip(&rhs.columns)
            .map(|(a, b)| {
                let mut col = a.clone();
                col.extend(b.iter().map(|(r, v)| (r + off, v.clone())));
                col
            })
            .collect();
        SparseMatrix { rows: self.rows + rhs.rows, cols: self.cols, columns }
    }

    /// Places `blocks[i][j]` at block position `(i, j)`; `None` blocks are zero.
    pub fn block(row_dims: &[usize], col_dims: &[usize], blocks: &[Vec<Option<&SparseMatrix>>]) -> Self {
        let rows: usize = row_dims.iter().sum();
        let cols: usize = col_dims.iter().sum();
        let mut triplets = Vec::new();
        let mut r0 = 0;
        for (i, rd) in row_dims.iter().enumerate() {
            let mut c0 = 0;
            for (j, cd) in col_dims.iter().enumerate() {
                if let Some(b) = blocks[i][j] {
                    assert_eq!((b.rows, b.cols), (*rd, *cd), "block ({i},{j}) has wrong shape");
                    triplets.extend(b.entries().map(|(r, c, v)| (r + r0, c + c0, v.clone())));
                }
                c0 += cd;
            }
            r0 += rd;
        }
        SparseMatrix::from_triplets(rows, cols, triplets)
    }
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "  {}", cells.join(" "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_sum_and_drop_zero() {
        let m = SparseMatrix::from_triplets(
            2,
            2,
            vec![(0, 0, 1.into()), (0, 0, (-1).into()), (1, 1, 2.into())],
        );
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 1), Scalar::from_int(2));
    }

    #[test]
    fn product_and_transpose() {
        let a = SparseMatrix::from_i64_rows(&[&[1, 2], &[0, 1]]);
        let b = SparseMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        let ab = a.mul(&b);
        assert_eq!(ab, SparseMatrix::from_i64_rows(&[&[2, 1], &[1, 0]]));
        assert_eq!(ab.transpose().transpose(), ab);
        assert_eq!(a.mul_vec(&[1.into(), 1.into()]), vec![Scalar::from_int(3), Scalar::one()]);
    }

    #[test]
    fn stacking() {
        let a = SparseMatrix::identity(2);
        let z = SparseMatrix::zero(2, 1);
        let h = a.hstack(&z);
        assert_eq!((h.rows(), h.cols()), (2, 3));
        let v = a.vstack(&a);
        assert_eq!(v.get(3, 1), Scalar::one());
    }
}
