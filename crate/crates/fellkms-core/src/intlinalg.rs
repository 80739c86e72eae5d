//! Exact integer linear algebra: Smith and Hermite normal forms over i128,
//! kernels of integer matrices modulo d, and cyclic decompositions of finite
//! abelian groups presented by relation lattices.

use num_integer::Integer;

/// Dense integer matrix, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<i128>,
}

impl IMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IMat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i128>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        IMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(ambient: usize, cols: &[Vec<i128>]) -> Self {
        let mut m = Self::zeros(ambient, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), ambient);
            for i in 0..ambient {
                m[(i, j)] = col[i];
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec<i128> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.rows);
        let mut out = IMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i128]) -> Vec<i128> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] += c * row[b]
    fn add_row(&mut self, a: usize, b: usize, c: i128) {
        for j in 0..self.cols {
            let x = self[(b, j)];
            self[(a, j)] += c * x;
        }
    }

    /// col[a] += c * col[b]
    fn add_col(&mut self, a: usize, b: usize, c: i128) {
        for i in 0..self.rows {
            let x = self[(i, b)];
            self[(i, a)] += c * x;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            self[(a, j)] = -self[(a, j)];
        }
    }

    fn negate_col(&mut self, a: usize) {
        for i in 0..self.rows {
            self[(i, a)] = -self[(i, a)];
        }
    }
}

impl std::ops::Index<(usize, usize)> for IMat {
    type Output = i128;
    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        &mut self.data[i * self.cols + j]
    }
}

/// Smith normal form `s = u · a · v` with unimodular `u`, `v`, diagonal `s`,
/// nonnegative entries and `s[i] | s[i+1]`. `u_inv` satisfies
/// `u · u_inv = 1`.
pub struct Snf {
    pub s: IMat,
    pub u: IMat,
    pub u_inv: IMat,
    pub v: IMat,
}

pub fn smith_normal_form(a: &IMat) -> Snf {
    let mut s = a.clone();
    let mut u = IMat::identity(a.rows);
    let mut u_inv = IMat::identity(a.rows);
    let mut v = IMat::identity(a.cols);
    let n = a.rows.min(a.cols);

    for k in 0..n {
        loop {
            // Pivot: smallest nonzero magnitude in the trailing block.
            let mut pivot: Option<(usize, usize)> = None;
            for i in k..s.rows {
                for j in k..s.cols {
                    if s[(i, j)] != 0
                        && pivot.is_none_or(|(pi, pj)| s[(i, j)].abs() < s[(pi, pj)].abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            s.swap_rows(k, pi);
            u.swap_rows(k, pi);
            u_inv.swap_cols(k, pi);
            s.swap_cols(k, pj);
            v.swap_cols(k, pj);

            let mut clean = true;
            for i in k + 1..s.rows {
                let q = s[(i, k)].div_euclid(s[(k, k)]);
                if q != 0 {
                    s.add_row(i, k, -q);
                    u.add_row(i, k, -q);
                    u_inv.add_col(k, i, q);
                }
                if s[(i, k)] != 0 {
                    clean = false;
                }
            }
            for j in k + 1..s.cols {
                let q = s[(k, j)].div_euclid(s[(k, k)]);
                if q != 0 {
                    s.add_col(j, k, -q);
                    v.add_col(j, k, -q);
                }
                if s[(k, j)] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: fold in any entry the pivot does not divide.
            let mut fixed = true;
            'scan: for i in k + 1..s.rows {
                for j in k + 1..s.cols {
                    if s[(i, j)] % s[(k, k)] != 0 {
                        s.add_row(k, i, 1);
                        u.add_row(k, i, 1);
                        u_inv.add_col(i, k, -1);
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if s[(k, k)] < 0 {
            s.negate_row(k);
            u.negate_row(k);
            u_inv.negate_col(k);
        }
    }
    Snf { s, u, u_inv, v }
}

/// Column-style Hermite normal form of the lattice generated by the columns
/// of `a`: the returned t×r matrix is lower triangular with positive pivots
/// and entries left of each pivot reduced into `[0, pivot)`. Unique per
/// lattice, so usable for subgroup equality.
pub fn hermite_column_basis(a: &IMat) -> IMat {
    let mut w = a.clone();
    let t = w.rows;
    let mut c = 0usize; // next pivot column
    for i in 0..t {
        if c >= w.cols {
            break;
        }
        // gcd-out row i over columns >= c
        loop {
            let mut best: Option<usize> = None;
            for j in c..w.cols {
                if w[(i, j)] != 0 && best.is_none_or(|b| w[(i, j)].abs() < w[(i, b)].abs()) {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            w.swap_cols(c, b);
            let mut done = true;
            for j in c + 1..w.cols {
                let q = w[(i, j)].div_euclid(w[(i, c)]);
                if q != 0 {
                    w.add_col(j, c, -q);
                }
                if w[(i, j)] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if w[(i, c)] == 0 {
            continue; // row has no pivot; rank deficiency in this row
        }
        if w[(i, c)] < 0 {
            w.negate_col(c);
        }
        // reduce earlier columns against this pivot
        for j in 0..c {
            let q = w[(i, j)].div_euclid(w[(i, c)]);
            if q != 0 {
                w.add_col(j, c, -q);
            }
        }
        c += 1;
    }
    // keep the c pivot columns
    let mut out = IMat::zeros(t, c);
    for j in 0..c {
        for i in 0..t {
            out[(i, j)] = w[(i, j)];
        }
    }
    out
}

/// Basis (HNF columns) of `{p ∈ Z^t : n·p ≡ 0 (mod d)}`.
pub fn kernel_mod(n: &IMat, d: i128) -> IMat {
    assert!(d >= 1);
    assert_eq!(n.rows, n.cols);
    let t = n.cols;
    let snf = smith_normal_form(n);
    let mut gens: Vec<Vec<i128>> = Vec::with_capacity(t);
    for i in 0..t {
        let s_i = if i < snf.s.rows.min(snf.s.cols) {
            snf.s[(i, i)]
        } else {
            0
        };
        let step = d / s_i.gcd(&d); // s_i = 0 → gcd = d → step 1 (free direction)
        gens.push(snf.v.column(i).iter().map(|x| x * step).collect());
    }
    hermite_column_basis(&IMat::from_columns(t, &gens))
}

/// Solve `basis · x = p` over the integers for an HNF column basis (the
/// columns form a staircase: each column's top nonzero row strictly
/// increases). Handles rank-deficient bases; `None` when `p` is not in the
/// lattice.
pub fn solve_in_basis(basis: &IMat, p: &[i128]) -> Option<Vec<i128>> {
    let (t, r) = (basis.rows, basis.cols);
    assert_eq!(p.len(), t);
    let mut x = vec![0i128; r];
    let mut rem: Vec<i128> = p.to_vec();
    let mut row = 0usize;
    for j in 0..r {
        let piv_row = (row..t).find(|&i| basis[(i, j)] != 0)?;
        if rem[row..piv_row].iter().any(|&v| v != 0) {
            return None;
        }
        if rem[piv_row] % basis[(piv_row, j)] != 0 {
            return None;
        }
        x[j] = rem[piv_row] / basis[(piv_row, j)];
        for i in piv_row..t {
            rem[i] -= x[j] * basis[(i, j)];
        }
        row = piv_row + 1;
    }
    rem.iter().all(|&v| v == 0).then_some(x)
}

/// Cyclic decomposition of `Z^m / L`, where `L` is spanned by the columns of
/// `relations`. Returns invariant factors `> 1` together with, for each
/// factor, the coordinates (as an exponent vector in `Z^m`) of a generator.
pub fn cyclic_decomposition(relations: &IMat) -> Vec<(i128, Vec<i128>)> {
    let snf = smith_normal_form(relations);
    let m = relations.rows;
    let n = snf.s.rows.min(snf.s.cols);
    let mut out = Vec::new();
    for i in 0..m {
        let s_i = if i < n { snf.s[(i, i)] } else { 0 };
        assert!(s_i != 0 || i >= n, "relation lattice not full rank");
        if s_i != 0 && s_i != 1 {
            out.push((s_i, snf.u_inv.column(i)));
        } else if s_i == 0 {
            out.push((0, snf.u_inv.column(i)));
        }
    }
    out
}
