//! Exact integer linear algebra: Smith and Hermite normal forms, kernels,
//! cokernel invariants, lattice membership and lattice equality.
//!
//! Everything here is over arbitrary-precision integers; no floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> BigInt>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut m = Self::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        if rows.iter().any(|v| v.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self::from_fn(r, c, |i, j| BigInt::from(rows[i][j])))
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> Result<Self> {
        if cols.iter().any(|v| v.len() != rows) {
            return Err(Error::DimensionMismatch("column length mismatch".into()));
        }
        Ok(Self::from_fn(rows, cols.len(), |i, j| cols[j][i].clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        let cur = out.at(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("matrix-vector size".into()));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v[j]).sum())
            .collect())
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

    /// row[a] -= q * row[b]
    fn row_sub(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = self.at(a, j) - q * self.at(b, j);
            self.set(a, j, t);
        }
    }

    /// col[a] -= q * col[b]
    fn col_sub(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = self.at(i, a) - q * self.at(i, b);
            self.set(i, a, t);
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let t = -self.at(a, j);
            self.set(a, j, t);
        }
    }

    fn negate_col(&mut self, a: usize) {
        for i in 0..self.rows {
            let t = -self.at(i, a);
            self.set(i, a, t);
        }
    }

    /// row[a] += row[b]
    fn row_add(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            let t = self.at(a, j) + self.at(b, j);
            self.set(a, j, t);
        }
    }
}

/// U * A * V = D with U, V unimodular and D diagonal with a divisibility chain.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.at(i, i).clone()).collect()
    }
}

/// Pivot search: least nonzero absolute value, ties row-major.
fn find_pivot(a: &IntMatrix, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in from..a.rows() {
        for j in from..a.cols() {
            let v = a.at(i, j);
            if v.is_zero() {
                continue;
            }
            let abs = v.abs();
            match &best {
                Some((b, _, _)) if *b <= abs => {}
                _ => best = Some((abs, i, j)),
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = find_pivot(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        let mut dirty = false;
        for i in t + 1..m {
            if !d.at(i, t).is_zero() {
                let q = d.at(i, t) / d.at(t, t);
                d.row_sub(i, t, &q);
                u.row_sub(i, t, &q);
                if !d.at(i, t).is_zero() {
                    dirty = true;
                }
            }
        }
        for j in t + 1..n {
            if !d.at(t, j).is_zero() {
                let q = d.at(t, j) / d.at(t, t);
                d.col_sub(j, t, &q);
                v.col_sub(j, t, &q);
                if !d.at(t, j).is_zero() {
                    dirty = true;
                }
            }
        }
        if dirty {
            continue;
        }
        // divisibility: fold in any offending later entry and redo this step
        let piv = d.at(t, t).clone();
        let offender = (t + 1..m)
            .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !(d.at(i, j) % &piv).is_zero());
        if let Some((i, _)) = offender {
            d.row_add(t, i);
            u.row_add(t, i);
            continue;
        }
        if d.at(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SmithDecomposition { u, v, d, rank: t }
}

/// Column echelon form via unimodular column operations, tracking the
/// transform. Returns (echelon, transform, rank); the trailing columns of the
/// transform span the kernel.
fn column_echelon(a: &IntMatrix) -> (IntMatrix, IntMatrix, usize) {
    let (m, n) = (a.rows(), a.cols());
    let mut e = a.clone();
    let mut v = IntMatrix::identity(n);
    let mut pc = 0; // next pivot column
    for r in 0..m {
        if pc == n {
            break;
        }
        loop {
            // least |nonzero| in row r among columns pc..
            let mut best: Option<(BigInt, usize)> = None;
            for j in pc..n {
                let val = e.at(r, j);
                if val.is_zero() {
                    continue;
                }
                let abs = val.abs();
                match &best {
                    Some((b, _)) if *b <= abs => {}
                    _ => best = Some((abs, j)),
                }
            }
            let Some((_, j0)) = best else {
                break;
            };
            e.swap_cols(pc, j0);
            v.swap_cols(pc, j0);
            let mut clean = true;
            for j in pc + 1..n {
                if !e.at(r, j).is_zero() {
                    let q = e.at(r, j) / e.at(r, pc);
                    e.col_sub(j, pc, &q);
                    v.col_sub(j, pc, &q);
                    if !e.at(r, j).is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                if e.at(r, pc).is_negative() {
                    e.negate_col(pc);
                    v.negate_col(pc);
                }
                pc += 1;
                break;
            }
        }
    }
    (e, v, pc)
}

/// Z-basis of the right kernel {x : A x = 0}, as column vectors.
///
/// Rows are first filtered to an independent candidate subset by modular
/// elimination; the exact kernel of the reduced matrix is then verified
/// against all dropped rows, re-inserting any row that fails. The result is
/// always the exact saturated kernel lattice.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let mut keep = modular_row_filter(a);
    let nonzeros: Vec<Vec<usize>> = (0..a.rows())
        .map(|i| (0..a.cols()).filter(|&j| !a.at(i, j).is_zero()).collect())
        .collect();
    loop {
        let mut kept = vec![false; a.rows()];
        for &i in &keep {
            kept[i] = true;
        }
        let sub = IntMatrix::from_fn(keep.len(), a.cols(), |i, j| a.at(keep[i], j).clone());
        let (_, v, rank) = column_echelon(&sub);
        let kernel: Vec<Vec<BigInt>> = (rank..a.cols()).map(|j| v.col(j)).collect();
        let mut bad_row = None;
        'rows: for i in 0..a.rows() {
            if kept[i] {
                continue;
            }
            for k in &kernel {
                let dot: BigInt = nonzeros[i].iter().map(|&j| a.at(i, j) * &k[j]).sum();
                if !dot.is_zero() {
                    bad_row = Some(i);
                    break 'rows;
                }
            }
        }
        match bad_row {
            None => return kernel,
            Some(i) => keep.push(i),
        }
    }
}

const FILTER_PRIME: u64 = 2_147_483_629;

/// Indices of a row subset that spans the row space modulo a fixed prime.
fn modular_row_filter(a: &IntMatrix) -> Vec<usize> {
    let p = FILTER_PRIME;
    let (m, n) = (a.rows(), a.cols());
    let to_mod = |v: &BigInt| -> u64 {
        let r = v.mod_floor(&BigInt::from(p));
        let (_, digits) = r.to_u64_digits();
        digits.first().copied().unwrap_or(0)
    };
    let inv_mod = |x: u64| -> u64 {
        // p is prime; Fermat
        let mut base = x % p;
        let mut exp = p - 2;
        let mut acc: u64 = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = (acc as u128 * base as u128 % p as u128) as u64;
            }
            base = (base as u128 * base as u128 % p as u128) as u64;
            exp >>= 1;
        }
        acc
    };
    let mut keep = Vec::new();
    let mut basis: Vec<Vec<u64>> = Vec::new(); // reduced rows
    let mut pivots: Vec<usize> = Vec::new();
    for i in 0..m {
        let mut row: Vec<u64> = (0..n).map(|j| to_mod(a.at(i, j))).collect();
        for (b, &pj) in basis.iter().zip(&pivots) {
            if row[pj] != 0 {
                let f = row[pj];
                for j in 0..n {
                    let sub = (p - f) as u128 * b[j] as u128 % p as u128;
                    row[j] = ((row[j] as u128 + sub) % p as u128) as u64;
                }
            }
        }
        if let Some(pj) = (0..n).find(|&j| row[j] != 0) {
            let inv = inv_mod(row[pj]);
            for x in row.iter_mut() {
                *x = (*x as u128 * inv as u128 % p as u128) as u64;
            }
            basis.push(row);
            pivots.push(pj);
            keep.push(i);
        }
    }
    keep
}

/// (free rank, nontrivial invariant factors) of Z^rows / column span of A.
pub fn cokernel_invariants(a: &IntMatrix) -> (usize, Vec<BigInt>) {
    let snf = smith_normal_form(a);
    let torsion: Vec<BigInt> = snf
        .invariant_factors()
        .into_iter()
        .filter(|d| *d > BigInt::one())
        .collect();
    (a.rows() - snf.rank, torsion)
}

/// Certificate that b is not in the column span: the invariant-factor
/// congruence that fails. A zero modulus marks an inconsistent row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoSolutionCert {
    pub row: usize,
    pub modulus: BigInt,
    pub residue: BigInt,
}

impl std::fmt::Display for NoSolutionCert {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.modulus.is_zero() {
            write!(
                f,
                "row {} of the transformed target must vanish but equals {}",
                self.row, self.residue
            )
        } else {
            write!(
                f,
                "row {} of the transformed target is {} (mod {}), expected 0",
                self.row, self.residue, self.modulus
            )
        }
    }
}

#[derive(Clone, Debug)]
pub enum LatticeSolve {
    Solution(Vec<BigInt>),
    NoSolution(NoSolutionCert),
}

/// Solves A x = b over the integers, or certifies non-membership of b in the
/// column lattice of A.
pub fn solve_in_lattice(a: &IntMatrix, b: &[BigInt]) -> Result<LatticeSolve> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} rows, target has {}",
            a.rows(),
            b.len()
        )));
    }
    let snf = smith_normal_form(a);
    let ub = snf.u.mul_vec(b)?;
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, ubi) in ub.iter().enumerate() {
        if i < snf.rank {
            let d = snf.d.at(i, i);
            let (q, r) = ubi.div_rem(d);
            if !r.is_zero() {
                return Ok(LatticeSolve::NoSolution(NoSolutionCert {
                    row: i,
                    modulus: d.clone(),
                    residue: ubi.mod_floor(d),
                }));
            }
            y[i] = q;
        } else if !ubi.is_zero() {
            return Ok(LatticeSolve::NoSolution(NoSolutionCert {
                row: i,
                modulus: BigInt::zero(),
                residue: ubi.clone(),
            }));
        }
    }
    Ok(LatticeSolve::Solution(snf.v.mul_vec(&y)?))
}

/// Canonical column-style Hermite form of the column span (zero columns
/// dropped). Two matrices span the same lattice iff their forms coincide.
pub fn hermite_col(a: &IntMatrix) -> IntMatrix {
    let (e, _, rank) = column_echelon(a);
    let mut h = IntMatrix::from_fn(a.rows(), rank, |i, j| e.at(i, j).clone());
    // pivot row of each column
    let pivot_row: Vec<usize> = (0..rank)
        .map(|j| (0..h.rows()).find(|&i| !h.at(i, j).is_zero()).unwrap())
        .collect();
    for j in 0..rank {
        let pr = pivot_row[j];
        let piv = h.at(pr, j).clone();
        for l in 0..j {
            let q = h.at(pr, l).div_floor(&piv);
            h.col_sub(l, j, &q);
        }
    }
    h
}

/// True iff the integer column spans of A and B coincide.
pub fn lattice_equal(a: &IntMatrix, b: &IntMatrix) -> Result<bool> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(
            "lattice comparison needs equal ambient dimension".into(),
        ));
    }
    Ok(hermite_col(a) == hermite_col(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows_i64(rows).unwrap()
    }

    #[test]
    fn snf_identity_and_zero() {
        let id = IntMatrix::identity(3);
        let s = smith_normal_form(&id);
        assert_eq!(s.rank, 3);
        assert_eq!(s.d, id);

        let z = IntMatrix::zero(2, 3);
        let s = smith_normal_form(&z);
        assert_eq!(s.rank, 0);

        let empty = IntMatrix::zero(0, 0);
        let s = smith_normal_form(&empty);
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn snf_divisibility_chain() {
        // gcd 2, |det| 24 force (2, 12)
        let a = m(&[vec![4, 0], vec![0, 6]]);
        let s = smith_normal_form(&a);
        assert_eq!(
            s.invariant_factors(),
            vec![BigInt::from(2), BigInt::from(12)]
        );
        let uav = s.u.mul(&a).unwrap().mul(&s.v).unwrap();
        assert_eq!(uav, s.d);
    }

    /// Independent oracle: product of the first k invariant factors equals
    /// the gcd of all k x k minors.
    fn minor_gcd(a: &IntMatrix, k: usize) -> BigInt {
        fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 0..n {
                for mut rest in combos(n, k - 1) {
                    if rest.iter().all(|&r| r > first) {
                        let mut v = vec![first];
                        v.append(&mut rest);
                        out.push(v);
                    }
                }
            }
            out
        }
        fn det(a: &IntMatrix, ri: &[usize], ci: &[usize]) -> BigInt {
            if ri.len() == 1 {
                return a.at(ri[0], ci[0]).clone();
            }
            let mut acc = BigInt::zero();
            for (pos, &c) in ci.iter().enumerate() {
                let sub_ci: Vec<usize> = ci.iter().copied().filter(|&x| x != c).collect();
                let minor = det(a, &ri[1..], &sub_ci);
                let term = a.at(ri[0], c) * minor;
                if pos % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
        let mut g = BigInt::zero();
        for ri in combos(a.rows(), k) {
            for ci in combos(a.cols(), k) {
                g = g.gcd(&det(a, &ri, &ci));
            }
        }
        g
    }

    #[test]
    fn snf_matches_minor_gcd_oracle() {
        let mut seed = 12345u64;
        let mut next = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 11) as i64 - 5
        };
        for _ in 0..25 {
            let a = IntMatrix::from_fn(3, 4, |_, _| BigInt::from(next()));
            let s = smith_normal_form(&a);
            let uav = s.u.mul(&a).unwrap().mul(&s.v).unwrap();
            assert_eq!(uav, s.d);
            let mut prod = BigInt::one();
            for k in 1..=s.rank {
                prod *= s.d.at(k - 1, k - 1);
                assert_eq!(prod, minor_gcd(&a, k), "k = {k} for {a:?}");
            }
            if s.rank < 3 {
                assert!(minor_gcd(&a, s.rank + 1).is_zero());
            }
        }
    }

    #[test]
    fn solve_basics() {
        let id = IntMatrix::identity(3);
        let b = vec![BigInt::from(7), BigInt::from(-2), BigInt::from(0)];
        match solve_in_lattice(&id, &b).unwrap() {
            LatticeSolve::Solution(x) => assert_eq!(x, b),
            _ => panic!("expected solution"),
        }

        let a = m(&[vec![2]]);
        match solve_in_lattice(&a, &[BigInt::from(3)]).unwrap() {
            LatticeSolve::NoSolution(c) => {
                assert_eq!(c.modulus, BigInt::from(2));
                assert_eq!(c.residue, BigInt::from(1));
            }
            _ => panic!("expected parity obstruction"),
        }

        // b = sum of the two generators
        let a = m(&[vec![1, 0], vec![1, 1], vec![0, 1]]);
        let b = vec![BigInt::from(1), BigInt::from(2), BigInt::from(1)];
        match solve_in_lattice(&a, &b).unwrap() {
            LatticeSolve::Solution(x) => {
                assert_eq!(x, vec![BigInt::from(1), BigInt::from(1)]);
            }
            _ => panic!("expected solution"),
        }
    }

    #[test]
    fn solve_roundtrip_random() {
        let mut seed = 99u64;
        let mut next = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 9) as i64 - 4
        };
        for _ in 0..25 {
            let a = IntMatrix::from_fn(4, 3, |_, _| BigInt::from(next()));
            let x: Vec<BigInt> = (0..3).map(|_| BigInt::from(next())).collect();
            let b = a.mul_vec(&x).unwrap();
            match solve_in_lattice(&a, &b).unwrap() {
                LatticeSolve::Solution(x2) => {
                    assert_eq!(a.mul_vec(&x2).unwrap(), b);
                }
                LatticeSolve::NoSolution(c) => panic!("lost a solvable system: {c}"),
            }
        }
    }

    #[test]
    fn kernel_and_cokernel() {
        let z3 = IntMatrix::zero(3, 0);
        assert_eq!(cokernel_invariants(&z3), (3, vec![]));

        let two = m(&[vec![2]]);
        assert_eq!(cokernel_invariants(&two), (0, vec![BigInt::from(2)]));

        let row = m(&[vec![1, 1, 1]]);
        let k = kernel_basis(&row);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot: BigInt = v.iter().sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn kernel_saturated() {
        // kernel of (2 -2) is generated by (1,1), not (2,2)
        let a = m(&[vec![2, -2]]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0].abs(), BigInt::one());
    }

    #[test]
    fn kernel_with_redundant_rows() {
        // many dependent rows exercise the modular filter path
        let mut rows = Vec::new();
        for i in 0..40i64 {
            rows.push(vec![i, 2 * i, 3 * i, -i]);
        }
        rows.push(vec![1, 0, 0, 0]);
        let a = m(&rows);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            for i in 0..a.rows() {
                let dot: BigInt = (0..4).map(|j| a.at(i, j) * &v[j]).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn lattice_equality() {
        let a = m(&[vec![2, 0], vec![0, 2]]);
        assert!(lattice_equal(&a, &a).unwrap());

        // index-2 sublattice: determinants 4 vs 8
        let b = m(&[vec![2, 2], vec![2, -2]]);
        assert!(!lattice_equal(&a, &b).unwrap());

        // unimodular change of basis
        let c = m(&[vec![1, 1], vec![0, 1]]);
        let d = m(&[vec![1, 5], vec![0, 1]]);
        assert!(lattice_equal(&c, &d).unwrap());
        assert!(lattice_equal(&c, &IntMatrix::identity(2)).unwrap());
    }

    #[test]
    fn lattice_equal_random_recombinations() {
        let mut seed = 7u64;
        let mut next = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 7) as i64 - 3
        };
        for _ in 0..20 {
            let a = IntMatrix::from_fn(4, 4, |_, _| BigInt::from(next()));
            // b = a * (elementary unimodular ops)
            let mut b = a.clone();
            for _ in 0..6 {
                let i = (next().unsigned_abs() as usize) % 4;
                let j = (next().unsigned_abs() as usize) % 4;
                if i != j {
                    let q = BigInt::from(next());
                    b.col_sub(i, j, &q);
                }
            }
            assert!(lattice_equal(&a, &b).unwrap());
        }
    }
}
