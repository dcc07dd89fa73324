use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::InvariantError;

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Result<Self, InvariantError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(InvariantError::Shape("rows have different lengths".into()));
        }
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| x.into())).collect();
        Ok(IntegerMatrix { rows: rows.len(), cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Copy with row `r` and column `c` removed.
    pub fn minor(&self, r: usize, c: usize) -> IntegerMatrix {
        let mut data = Vec::with_capacity(self.rows.saturating_sub(1) * self.cols.saturating_sub(1));
        for i in (0..self.rows).filter(|&i| i != r) {
            for j in (0..self.cols).filter(|&j| j != c) {
                data.push(self[(i, j)].clone());
            }
        }
        IntegerMatrix {
            rows: self.rows - usize::from(r < self.rows),
            cols: self.cols - usize::from(c < self.cols),
            data,
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination. The empty
    /// matrix has determinant 1.
    pub fn determinant(&self) -> Result<BigInt, InvariantError> {
        if !self.is_square() {
            return Err(InvariantError::Shape(format!("determinant of a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.data[i * n..(i + 1) * n].to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(if n == 0 { BigInt::one() } else { sign * &a[n - 1][n - 1] })
    }

    /// Diagonal of the Smith normal form: nonnegative, each dividing the next,
    /// zeros last. Has `min(rows, cols)` entries.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        let mut a = self.clone();
        let (r, c) = (a.rows, a.cols);
        let n = r.min(c);
        let mut t = 0;
        while t < n {
            // Pivot: the smallest nonzero entry of the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if !a[(i, j)].is_zero() && best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..r {
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                if !q.is_zero() {
                    a.add_row_multiple(i, t, &-q);
                }
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..c {
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                if !q.is_zero() {
                    a.add_col_multiple(j, t, &-q);
                }
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let p = a[(t, t)].clone();
            let stray =
                (t + 1..r).flat_map(|i| (t + 1..c).map(move |j| (i, j))).find(|&(i, j)| !a[(i, j)].is_multiple_of(&p));
            if let Some((i, _)) = stray {
                a.add_row_multiple(t, i, &BigInt::one());
                continue;
            }
            t += 1;
        }
        (0..n).map(|i| a[(i, i)].abs()).collect()
    }

    pub fn rank(&self) -> usize {
        self.elementary_divisors().iter().filter(|d| !d.is_zero()).count()
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i != k {
            for j in 0..self.cols {
                self.data.swap(i * self.cols + j, k * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j != k {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + j, i * self.cols + k);
            }
        }
    }

    /// row[i] += q * row[k]
    fn add_row_multiple(&mut self, i: usize, k: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(k, j)] * q;
            self[(i, j)] += v;
        }
    }

    /// col[j] += q * col[k]
    fn add_col_multiple(&mut self, j: usize, k: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, k)] * q;
            self[(i, j)] += v;
        }
    }
}

/// Order of the torsion subgroup of the group presented by `m` (rows are
/// relations): the product of the nonzero elementary divisors.
pub fn torsion_order(m: &IntegerMatrix) -> BigUint {
    m.elementary_divisors().into_iter().filter(|d| !d.is_zero()).fold(BigUint::one(), |acc, d| acc * d.magnitude())
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Plain row-major text: a `rows cols` header line, then one line per row.
impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f)?;
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            f.write_str(&row.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for IntegerMatrix {
    type Err = InvariantError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |what: &str| InvariantError::Shape(format!("matrix text: {what}"));
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<usize> = lines
            .next()
            .ok_or_else(|| bad("missing header"))?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("bad header")))
            .collect::<Result<_, _>>()?;
        let [rows, cols] = header[..] else { return Err(bad("header needs two numbers")) };
        let mut data = Vec::with_capacity(rows * cols);
        for line in lines {
            let row: Vec<BigInt> =
                line.split_whitespace().map(|t| t.parse().map_err(|_| bad("bad entry"))).collect::<Result<_, _>>()?;
            if row.len() != cols {
                return Err(bad("row length"));
            }
            data.extend(row);
        }
        if data.len() != rows * cols {
            return Err(bad("row count"));
        }
        Ok(IntegerMatrix { rows, cols, data })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>]) -> IntegerMatrix {
        IntegerMatrix::from_rows(rows).unwrap()
    }

    /// Cofactor expansion, independent of the elimination path.
    fn laplace(a: &IntegerMatrix) -> BigInt {
        if a.rows() == 0 {
            return BigInt::one();
        }
        (0..a.cols())
            .map(|j| {
                let s = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                s * &a[(0, j)] * laplace(&a.minor(0, j))
            })
            .sum()
    }

    #[test]
    fn determinants() {
        assert_eq!(IntegerMatrix::zeros(0, 0).determinant().unwrap(), BigInt::one());
        assert_eq!(m(&[vec![2, -1], vec![-1, 2]]).determinant().unwrap(), BigInt::from(3));
        assert_eq!(m(&[vec![0, 1], vec![1, 0]]).determinant().unwrap(), BigInt::from(-1));
        assert!(m(&[vec![1, 2]]).determinant().is_err());
    }

    #[test]
    fn torsion_examples() {
        assert_eq!(torsion_order(&IntegerMatrix::identity(3)), BigUint::one());
        assert_eq!(torsion_order(&m(&[vec![2, 0], vec![0, 0]])), BigUint::from(2u8));
        assert_eq!(torsion_order(&IntegerMatrix::zeros(0, 0)), BigUint::one());
        let d = m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).elementary_divisors();
        assert_eq!(d, vec![2, 6, 12].into_iter().map(BigInt::from).collect::<Vec<_>>());
    }

    #[test]
    fn text_round_trip() {
        let a = m(&[vec![1, -2, 3], vec![0, 5, -7]]);
        assert_eq!(a.to_string(), "2 3\n1 -2 3\n0 5 -7");
        assert_eq!(a.to_string().parse::<IntegerMatrix>().unwrap(), a);
        assert!("2 2\n1 2".parse::<IntegerMatrix>().is_err());
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-9i64..10, n), n))
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactor_expansion(rows in small_matrix()) {
            let a = m(&rows);
            prop_assert_eq!(a.determinant().unwrap(), laplace(&a));
        }

        #[test]
        fn smith_form_preserves_abs_determinant(rows in small_matrix()) {
            let a = m(&rows);
            let divisors = a.elementary_divisors();
            let product: BigInt = divisors.iter().product();
            prop_assert_eq!(product, a.determinant().unwrap().abs());
            for w in divisors.windows(2) {
                prop_assert!(w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])));
            }
        }
    }
}
