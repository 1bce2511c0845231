//! Skew-circulant matrices over `F_ℓ` and two independent rank computations.
//!
//! Row `i` of the `m × m` skew circulant with first row `(a_0, …, a_{m-1})`
//! holds the coefficients of `x^i · g(x) mod (x^m + 1)`, where
//! `g = a_0 + a_1 x + … + a_{m-1} x^{m-1}` is the associated polynomial.

use std::fmt;

use crate::error::{Error, Result};
use crate::ff::{negacyclic_modulus, poly_gcd, ExtFieldElement, Fp, Poly, PrimeField};

/// Row-major dense matrix over `F_ℓ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrixFp {
    field: PrimeField,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl DenseMatrixFp {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, size: usize) -> Self {
        let mut m = Self::zeros(field, size, size);
        for i in 0..size {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from signed integer rows. Panics if rows are ragged.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            entries.extend(row.iter().map(|&v| field.reduce_i64(v)));
        }
        Self {
            field,
            rows: rows.len(),
            cols,
            entries,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.entries[r * self.cols + c] = v % self.field.modulus();
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field);
        assert_eq!(self.cols, other.cols, "vstack needs equal column counts");
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Self {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }
}

impl fmt::Display for DenseMatrixFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(u64::to_string).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Rank over `F_ℓ` by Gaussian elimination.
///
/// Pivots on the first nonzero entry in each column.
pub fn rank_elimination(m: &DenseMatrixFp) -> usize {
    let f = m.field;
    let cols = m.cols;
    let mut a = m.entries.clone();
    let mut rank = 0;
    for col in 0..cols {
        if rank == m.rows {
            break;
        }
        let Some(pivot) = (rank..m.rows).find(|&r| a[r * cols + col] != 0) else {
            continue;
        };
        if pivot != rank {
            for c in col..cols {
                a.swap(pivot * cols + c, rank * cols + c);
            }
        }
        let inv = f.inv(a[rank * cols + col]).expect("pivot is nonzero");
        for c in col..cols {
            a[rank * cols + c] = f.mul(a[rank * cols + c], inv);
        }
        for r in rank + 1..m.rows {
            let factor = a[r * cols + col];
            if factor == 0 {
                continue;
            }
            for c in col..cols {
                let sub = f.mul(factor, a[rank * cols + c]);
                a[r * cols + c] = f.sub(a[r * cols + c], sub);
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant of a square matrix by elimination.
pub fn determinant(m: &DenseMatrixFp) -> u64 {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let f = m.field;
    let n = m.rows;
    let mut a = m.entries.clone();
    let mut det = 1u64;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| a[r * n + col] != 0) else {
            return 0;
        };
        if pivot != col {
            for c in 0..n {
                a.swap(pivot * n + c, col * n + c);
            }
            det = f.neg(det);
        }
        let p = a[col * n + col];
        det = f.mul(det, p);
        let inv = f.inv(p).expect("pivot is nonzero");
        for r in col + 1..n {
            let factor = f.mul(a[r * n + col], inv);
            if factor == 0 {
                continue;
            }
            for c in col..n {
                let sub = f.mul(factor, a[col * n + c]);
                a[r * n + c] = f.sub(a[r * n + c], sub);
            }
        }
    }
    det
}

/// Skew circulant defined by its first row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewCirculant {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl SkewCirculant {
    pub fn new(field: PrimeField, coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument(
                "skew circulant needs at least one coefficient".into(),
            ));
        }
        let p = field.modulus();
        Ok(Self {
            field,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        })
    }

    pub fn from_fp(coeffs: &[Fp]) -> Result<Self> {
        let field = coeffs
            .first()
            .map(Fp::field)
            .ok_or_else(|| Error::InvalidArgument("empty coefficient list".into()))?;
        Self::new(field, coeffs.iter().map(Fp::value).collect())
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn size(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn associated_polynomial(&self) -> Poly {
        Poly::new(self.field(), self.coeffs.clone())
    }

    /// The skew circulant generated by `x · g(x) mod (x^m + 1)`.
    pub fn shifted(&self) -> Self {
        let f = self.field();
        let m = self.coeffs.len();
        let mut c = vec![0; m];
        c[0] = f.neg(self.coeffs[m - 1]);
        c[1..m].copy_from_slice(&self.coeffs[..m - 1]);
        Self {
            field: self.field,
            coeffs: c,
        }
    }
}

/// Expands a skew circulant into its `m × m` matrix.
pub fn realize(sc: &SkewCirculant) -> DenseMatrixFp {
    let f = sc.field();
    let m = sc.size();
    let mut out = DenseMatrixFp::zeros(f, m, m);
    for i in 0..m {
        for j in 0..m {
            let v = if j >= i {
                sc.coeffs[j - i]
            } else {
                f.neg(sc.coeffs[m + j - i])
            };
            out.set(i, j, v);
        }
    }
    out
}

/// Computes `g(ζ)` and checks that `(1, ζ, …, ζ^{m-1})` is an eigenvector
/// of the realized matrix with that eigenvalue.
pub fn eigen_check(sc: &SkewCirculant, zeta: &ExtFieldElement) -> Result<(ExtFieldElement, bool)> {
    let m = sc.size();
    let one = zeta.pow(0);
    if zeta.pow(m as u64) != one.neg() {
        return Err(Error::NotNegacyclicRoot { m });
    }
    assert_eq!(zeta.residue().field(), sc.field(), "field mismatch");
    let eigenvalue = zeta.eval(&sc.associated_polynomial());

    let mut powers = Vec::with_capacity(m);
    let mut z = one;
    for _ in 0..m {
        powers.push(z.clone());
        z = z.mul(zeta);
    }
    let matrix = realize(sc);
    let verified = (0..m).all(|i| {
        let lhs = matrix
            .row(i)
            .iter()
            .zip(&powers)
            .fold(zeta.scale(0), |acc, (&a, p)| acc.add(&p.scale(a)));
        lhs == eigenvalue.mul(&powers[i])
    });
    Ok((eigenvalue, verified))
}

/// Rank as `m − deg gcd(g, x^m + 1)`.
///
/// Valid whenever `x^m + 1` is squarefree over `F_ℓ`, which is asserted.
pub fn rank_via_gcd(sc: &SkewCirculant) -> usize {
    let f = sc.field();
    let m = sc.size();
    let modulus = negacyclic_modulus(f, m);
    let sqfree = poly_gcd(&modulus, &modulus.derivative()).expect("modulus is nonzero");
    assert_eq!(
        sqfree.degree(),
        Some(0),
        "x^{m} + 1 is not squarefree mod {}",
        f.modulus()
    );
    let g = sc.associated_polynomial();
    let d = poly_gcd(&g, &modulus).expect("modulus is nonzero");
    m - d.degree().expect("gcd is nonzero")
}
