//! Exact integer and rational linear algebra on small dense matrices.
//!
//! Everything here is deterministic: pivots are chosen by fixed scan order,
//! lattice bases are put in row Hermite normal form with positive pivots.

use crate::arith::{gcd_int, Int, Rat};
use num::{One, Signed, Zero};

pub type IMat = Vec<Vec<Int>>;
pub type QMat = Vec<Vec<Rat>>;

pub fn int_mat(rows: &[Vec<i64>]) -> IMat {
    rows.iter()
        .map(|r| r.iter().map(|&x| Int::from(x)).collect())
        .collect()
}

/// Determinant by fraction-free Gaussian elimination (Bareiss).
pub fn det_int(m: &IMat) -> Int {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "square matrix required");
    if n == 0 {
        return Int::one();
    }
    let mut a = m.clone();
    let mut prev = Int::one();
    let mut sign = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let swap = (k + 1..n).find(|&i| !a[i][k].is_zero());
            match swap {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = &t / &prev;
            }
            a[i][k] = Int::zero();
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Integer kernel basis of `a` (rows = equations): all v with a·v = 0.
///
/// Columns of `a` are reduced by unimodular column operations tracked in an
/// identity block; columns of the tracker whose image became zero span the
/// kernel lattice. The result is HNF-canonicalized.
pub fn kernel_basis_int(a: &IMat) -> Vec<Vec<Int>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m = a.clone();
    let mut u: IMat = (0..cols)
        .map(|i| {
            (0..cols)
                .map(|j| if i == j { Int::one() } else { Int::zero() })
                .collect()
        })
        .collect();
    // u is kept as cols x cols with u[j] = current j-th column of the tracker.
    // Column operations act simultaneously on m's columns and u's columns.
    let col_is_zero = |m: &IMat, j: usize| (0..rows).all(|i| m[i][j].is_zero());
    let mut pivot_col = 0usize;
    for r in 0..rows {
        if pivot_col >= cols {
            break;
        }
        // Euclidean reduction across columns pivot_col.. on row r.
        loop {
            let mut best: Option<usize> = None;
            for j in pivot_col..cols {
                if !m[r][j].is_zero() {
                    best = match best {
                        None => Some(j),
                        Some(b) => {
                            if m[r][j].abs() < m[r][b].abs() {
                                Some(j)
                            } else {
                                Some(b)
                            }
                        }
                    };
                }
            }
            let Some(b) = best else { break };
            // Reduce every other column by the smallest entry.
            let mut again = false;
            for j in pivot_col..cols {
                if j != b && !m[r][j].is_zero() {
                    let q = div_floor_int(&m[r][j], &m[r][b]);
                    if !q.is_zero() {
                        for i in 0..rows {
                            let t = &m[i][b] * &q;
                            m[i][j] -= t;
                        }
                        for i in 0..cols {
                            let t = &u[i][b] * &q;
                            u[i][j] -= t;
                        }
                    }
                    if !m[r][j].is_zero() {
                        again = true;
                    }
                }
            }
            if !again {
                // Move the pivot column into position.
                if b != pivot_col {
                    for row in m.iter_mut() {
                        row.swap(b, pivot_col);
                    }
                    for row in u.iter_mut() {
                        row.swap(b, pivot_col);
                    }
                }
                break;
            }
        }
        if !m[r][pivot_col].is_zero() {
            pivot_col += 1;
        }
    }
    let mut kernel: Vec<Vec<Int>> = Vec::new();
    for j in 0..cols {
        if col_is_zero(&m, j) {
            kernel.push((0..cols).map(|i| u[i][j].clone()).collect());
        }
    }
    hnf_rows(&mut kernel);
    kernel
}

fn div_floor_int(a: &Int, b: &Int) -> Int {
    num::Integer::div_floor(a, b)
}

/// Row Hermite normal form in place: canonical basis of the row lattice.
/// Pivots positive, entries above pivots reduced into [0, pivot).
pub fn hnf_rows(rows: &mut Vec<Vec<Int>>) {
    if rows.is_empty() {
        return;
    }
    let ncols = rows[0].len();
    let nrows = rows.len();
    let mut pivot_row = 0usize;
    for col in 0..ncols {
        if pivot_row >= nrows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..nrows {
                if !rows[i][col].is_zero() {
                    best = match best {
                        None => Some(i),
                        Some(b) => {
                            if rows[i][col].abs() < rows[b][col].abs() {
                                Some(i)
                            } else {
                                Some(b)
                            }
                        }
                    };
                }
            }
            let Some(b) = best else { break };
            let mut again = false;
            for i in pivot_row..nrows {
                if i != b && !rows[i][col].is_zero() {
                    let q = div_floor_int(&rows[i][col], &rows[b][col]);
                    if !q.is_zero() {
                        for j in 0..ncols {
                            let t = &rows[b][j] * &q;
                            rows[i][j] -= t;
                        }
                    }
                    if !rows[i][col].is_zero() {
                        again = true;
                    }
                }
            }
            if !again {
                rows.swap(b, pivot_row);
                break;
            }
        }
        if !rows[pivot_row][col].is_zero() {
            if rows[pivot_row][col].is_negative() {
                for j in 0..ncols {
                    rows[pivot_row][j] = -rows[pivot_row][j].clone();
                }
            }
            // Reduce entries above the pivot.
            for i in 0..pivot_row {
                if !rows[i][col].is_zero() {
                    let q = div_floor_int(&rows[i][col], &rows[pivot_row][col]);
                    if !q.is_zero() {
                        for j in 0..ncols {
                            let t = &rows[pivot_row][j] * &q;
                            rows[i][j] -= t;
                        }
                    }
                }
            }
            pivot_row += 1;
        }
    }
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
}

/// Two integer row sets generate the same lattice iff their HNFs agree.
pub fn same_lattice(a: &[Vec<Int>], b: &[Vec<Int>]) -> bool {
    let mut ha = a.to_vec();
    let mut hb = b.to_vec();
    hnf_rows(&mut ha);
    hnf_rows(&mut hb);
    ha == hb
}

/// Solves a·x = rhs over the rationals; None when inconsistent.
/// When the solution space is positive-dimensional, free variables are set
/// to zero (deterministic representative).
pub fn solve_rational(a: &QMat, rhs: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: QMat = a
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0usize;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let p = (row..rows).find(|&i| !m[i][col].is_zero());
        let Some(p) = p else { continue };
        m.swap(row, p);
        let inv = m[row][col].clone();
        for j in col..=cols {
            m[row][j] = &m[row][j] / &inv;
        }
        for i in 0..rows {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=cols {
                    let t = &m[row][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    for i in row..rows {
        if !m[i][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); cols];
    for &(r, c) in &pivots {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

/// Rational kernel basis (columns v with a·v = 0), reduced echelon style.
pub fn kernel_rational(a: &QMat) -> Vec<Vec<Rat>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m = a.clone();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0usize;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let p = (row..rows).find(|&i| !m[i][col].is_zero());
        let Some(p) = p else { continue };
        m.swap(row, p);
        let inv = m[row][col].clone();
        for j in col..cols {
            m[row][j] = &m[row][j] / &inv;
        }
        for i in 0..rows {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..cols {
                    let t = &m[row][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for &(r, c) in &pivots {
            v[c] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves a·x = rhs over the integers using column HNF; None when no
/// integer solution exists.
pub fn solve_integer(a: &IMat, rhs: &[Int]) -> Option<Vec<Int>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    // Column-reduce [a] tracking operations on an identity, giving a·w = h
    // with h in column echelon form.
    let mut h = a.clone();
    let mut w: IMat = (0..cols)
        .map(|i| {
            (0..cols)
                .map(|j| if i == j { Int::one() } else { Int::zero() })
                .collect()
        })
        .collect();
    let mut pivot_col = 0usize;
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; rows];
    for r in 0..rows {
        if pivot_col >= cols {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for j in pivot_col..cols {
                if !h[r][j].is_zero() {
                    best = match best {
                        None => Some(j),
                        Some(b) => {
                            if h[r][j].abs() < h[r][b].abs() {
                                Some(j)
                            } else {
                                Some(b)
                            }
                        }
                    };
                }
            }
            let Some(b) = best else { break };
            let mut again = false;
            for j in pivot_col..cols {
                if j != b && !h[r][j].is_zero() {
                    let q = div_floor_int(&h[r][j], &h[r][b]);
                    if !q.is_zero() {
                        for i in 0..rows {
                            let t = &h[i][b] * &q;
                            h[i][j] -= t;
                        }
                        for i in 0..cols {
                            let t = &w[i][b] * &q;
                            w[i][j] -= t;
                        }
                    }
                    if !h[r][j].is_zero() {
                        again = true;
                    }
                }
            }
            if !again {
                if b != pivot_col {
                    for row in h.iter_mut() {
                        row.swap(b, pivot_col);
                    }
                    for row in w.iter_mut() {
                        row.swap(b, pivot_col);
                    }
                }
                break;
            }
        }
        if !h[r][pivot_col].is_zero() {
            pivot_of_row[r] = Some(pivot_col);
            pivot_col += 1;
        }
    }
    // Forward-substitute: y with h·y = rhs, y supported on pivot columns.
    let mut y = vec![Int::zero(); cols];
    let mut residual: Vec<Int> = rhs.to_vec();
    for r in 0..rows {
        match pivot_of_row[r] {
            Some(c) => {
                let (q, rem) = num::Integer::div_rem(&residual[r], &h[r][c]);
                if !rem.is_zero() {
                    return None;
                }
                y[c] = q;
                for i in 0..rows {
                    let t = &h[i][c] * &y[c];
                    residual[i] -= t;
                }
            }
            None => {
                if !residual[r].is_zero() {
                    return None;
                }
            }
        }
    }
    if residual.iter().any(|x| !x.is_zero()) {
        return None;
    }
    // x = w·y
    let x = (0..cols)
        .map(|i| {
            let mut s = Int::zero();
            for j in 0..cols {
                s += &w[i][j] * &y[j];
            }
            s
        })
        .collect();
    Some(x)
}

/// Dimension of the rational kernel of a square multiplication matrix.
pub fn kernel_dim(a: &QMat) -> usize {
    kernel_rational(a).len()
}

pub fn to_rational_matrix(a: &IMat) -> QMat {
    a.iter()
        .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect()
}

/// Primitive part of an integer vector: divided by the gcd, zero stays zero.
pub fn primitive_vector(v: &[Int]) -> Vec<Int> {
    let g = crate::arith::gcd_all(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn is_primitive(v: &[Int]) -> bool {
    gcd_all_nonzero(v)
}

fn gcd_all_nonzero(v: &[Int]) -> bool {
    let mut g = Int::zero();
    for x in v {
        g = gcd_int(&g, x);
    }
    g.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn det_examples() {
        assert_eq!(det_int(&int_mat(&[vec![1, 0], vec![0, 1]])), int(1));
        assert_eq!(det_int(&int_mat(&[vec![2, 1], vec![1, 1]])), int(1));
        assert_eq!(
            det_int(&int_mat(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]])),
            int(-3)
        );
        assert_eq!(det_int(&int_mat(&[vec![1, 2], vec![2, 4]])), int(0));
    }

    #[test]
    fn kernel_of_p1_o2_rays() {
        // Columns are the rays (1,2), (-1,0), (0,1).
        let a = int_mat(&[vec![1, -1, 0], vec![2, 0, 1]]);
        let k = kernel_basis_int(&a);
        assert_eq!(k, vec![vec![int(1), int(1), int(-2)]]);
    }

    #[test]
    fn kernel_of_p1() {
        let a = int_mat(&[vec![1, -1]]);
        let k = kernel_basis_int(&a);
        assert_eq!(k, vec![vec![int(1), int(1)]]);
    }

    #[test]
    fn solve_rational_unique_and_inconsistent() {
        let a: QMat = vec![vec![rat(1), rat(1)], vec![rat(1), rat(-1)]];
        let x = solve_rational(&a, &[rat(3), rat(1)]).unwrap();
        assert_eq!(x, vec![rat(2), rat(1)]);
        let b: QMat = vec![vec![rat(1), rat(1)], vec![rat(2), rat(2)]];
        assert!(solve_rational(&b, &[rat(0), rat(1)]).is_none());
    }

    #[test]
    fn solve_integer_detects_nonintegral() {
        let a = int_mat(&[vec![2]]);
        assert_eq!(solve_integer(&a, &[int(4)]), Some(vec![int(2)]));
        assert_eq!(solve_integer(&a, &[int(3)]), None);
        // 2x + 3y = 1 has integer solutions.
        let b = int_mat(&[vec![2, 3]]);
        let x = solve_integer(&b, &[int(1)]).unwrap();
        assert_eq!(&x[0] * 2 + &x[1] * 3, int(1));
    }

    #[test]
    fn hnf_canonicalizes_sign_and_order() {
        let mut rows = vec![vec![int(-1), int(-1), int(2)]];
        hnf_rows(&mut rows);
        assert_eq!(rows, vec![vec![int(1), int(1), int(-2)]]);
        assert!(same_lattice(
            &[vec![int(1), int(1)], vec![int(0), int(2)]],
            &[vec![int(1), int(3)], vec![int(0), int(2)]],
        ));
        assert!(!same_lattice(
            &[vec![int(1), int(0)]],
            &[vec![int(2), int(0)]],
        ));
    }

    #[test]
    fn rational_kernel_dimension() {
        let a: QMat = vec![vec![rat(1), rat(2), rat(3)]];
        assert_eq!(kernel_rational(&a).len(), 2);
        assert_eq!(kernel_dim(&vec![vec![rat(0)]]), 1);
    }
}
