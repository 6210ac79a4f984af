//! Integer Smith normal form and (co)homology of finite chain complexes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::chains::ChainComplex;

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn to_nested(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.shape(), rhs.shape());
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
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

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }

    /// Rank over Q by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..a.cols {
            if rank == a.rows {
                break;
            }
            let Some(p) = (rank..a.rows).find(|&i| !a.get(i, col).is_zero()) else {
                continue;
            };
            a.swap_rows(rank, p);
            let pivot = a.get(rank, col).clone();
            for i in rank + 1..a.rows {
                let factor = a.get(i, col).clone();
                for j in col..a.cols {
                    let v = (&pivot * a.get(i, j) - &factor * a.get(rank, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = pivot;
            rank += 1;
        }
        rank
    }

    /// Determinant of a square matrix (Bareiss).
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a.get(i, k).is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                a.swap_rows(k, p);
                sign = -sign;
            }
            let pivot = a.get(k, k).clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&pivot * a.get(i, j) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
                a.set(i, k, BigInt::zero());
            }
            prev = pivot;
        }
        sign * a.get(n - 1, n - 1)
    }
}

/// Diagonal of the Smith normal form, optionally with transforms `U`, `V`
/// satisfying `U * M * V = S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub transforms: Option<(IntMatrix, IntMatrix)>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    /// Non-zero diagonal entries greater than one.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect()
    }

    /// The full diagonal matrix `S` with the shape of the input.
    pub fn diagonal_matrix(&self, rows: usize, cols: usize) -> IntMatrix {
        let mut s = IntMatrix::zeros(rows, cols);
        for (i, d) in self.diagonal.iter().enumerate() {
            s.set(i, i, d.clone());
        }
        s
    }
}

/// Smith normal form by repeated smallest-absolute-value pivoting; ties go to
/// the first entry in row-major order.
pub fn smith_normal_form(m: &IntMatrix, with_transforms: bool) -> SmithForm {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut u = with_transforms.then(|| IntMatrix::identity(rows));
    let mut v = with_transforms.then(|| IntMatrix::identity(cols));
    let steps = rows.min(cols);
    let mut diagonal = Vec::with_capacity(steps);

    for t in 0..steps {
        loop {
            let Some((pi, pj)) = smallest_nonzero(&a, t) else {
                break;
            };
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            if let Some(u) = u.as_mut() {
                u.swap_rows(t, pi);
            }
            if let Some(v) = v.as_mut() {
                v.swap_cols(t, pj);
            }
            let pivot = a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = -(a.get(i, t) / &pivot);
                a.add_row_multiple(i, t, &q);
                if let Some(u) = u.as_mut() {
                    u.add_row_multiple(i, t, &q);
                }
                clean &= a.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = -(a.get(t, j) / &pivot);
                a.add_col_multiple(j, t, &q);
                if let Some(v) = v.as_mut() {
                    v.add_col_multiple(j, t, &q);
                }
                clean &= a.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            // The pivot must divide every remaining entry.
            let offending = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    a.add_row_multiple(t, i, &BigInt::one());
                    if let Some(u) = u.as_mut() {
                        u.add_row_multiple(t, i, &BigInt::one());
                    }
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            if let Some(u) = u.as_mut() {
                u.negate_row(t);
            }
        }
        diagonal.push(a.get(t, t).clone());
    }

    SmithForm { diagonal, transforms: u.zip(v) }
}

fn smallest_nonzero(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                best = Some((i, j, ax));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// A finitely generated abelian group `Z^rank ⊕ Z_{d1} ⊕ ... ⊕ Z_{dk}` with
/// `d1 | d2 | ... | dk` and every `di >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Deserialize)]
pub struct AbelianGroupInvariants {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroupInvariants {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroupInvariants { rank, torsion: Vec::new() }
    }

    /// `Z^rank ⊕ (Z_2)^count`
    pub fn free_plus_z2(rank: usize, count: usize) -> Self {
        AbelianGroupInvariants { rank, torsion: vec![BigInt::from(2); count] }
    }

    /// Canonicalizes an arbitrary list of cyclic orders into invariant factors.
    pub fn from_cyclic_orders(rank: usize, orders: &[BigInt]) -> Self {
        let nontrivial: Vec<BigInt> =
            orders.iter().map(|d| d.abs()).filter(|d| !d.is_zero() && !d.is_one()).collect();
        let k = nontrivial.len();
        let mut diag = IntMatrix::zeros(k, k);
        for (i, d) in nontrivial.into_iter().enumerate() {
            diag.set(i, i, d);
        }
        let snf = smith_normal_form(&diag, false);
        AbelianGroupInvariants { rank, torsion: snf.invariant_factors() }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }
}

impl fmt::Display for AbelianGroupInvariants {
    /// `Z^r ⊕ Z_2 ⊕ ...`, or `0` for the trivial group.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        match self.rank {
            0 => {}
            1 => terms.push("Z".to_string()),
            r => terms.push(format!("Z^{r}")),
        }
        terms.extend(self.torsion.iter().map(|d| format!("Z_{d}")));
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" ⊕ "))
        }
    }
}

impl Serialize for AbelianGroupInvariants {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let torsion: Vec<serde_json_number::Num> =
            self.torsion.iter().map(serde_json_number::Num::from).collect();
        let mut st = serializer.serialize_struct("AbelianGroupInvariants", 2)?;
        st.serialize_field("rank", &self.rank)?;
        st.serialize_field("torsion", &torsion)?;
        st.end()
    }
}

mod serde_json_number {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{Serialize, Serializer};

    /// Emits machine-sized integers as numbers and larger ones as strings.
    pub struct Num(Result<u64, String>);

    impl From<&BigInt> for Num {
        fn from(x: &BigInt) -> Self {
            Num(x.to_u64().ok_or_else(|| x.to_string()))
        }
    }

    impl Serialize for Num {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            match &self.0 {
                Ok(v) => s.serialize_u64(*v),
                Err(t) => s.serialize_str(t),
            }
        }
    }
}

/// `H_q(C; Z)`; degrees outside the complex give the zero group.
pub fn homology(c: &ChainComplex, q: usize) -> AbelianGroupInvariants {
    if q > c.top_degree() {
        return AbelianGroupInvariants::zero();
    }
    let cells = c.cell_count(q);
    let rank_out = c.boundary(q).rank();
    let incoming = smith_normal_form(&c.boundary(q + 1), false);
    AbelianGroupInvariants {
        rank: cells - rank_out - incoming.rank(),
        torsion: incoming.invariant_factors(),
    }
}

/// `H_q` for every degree `0..=top`.
pub fn homology_all(c: &ChainComplex) -> Vec<AbelianGroupInvariants> {
    (0..=c.top_degree()).map(|q| homology(c, q)).collect()
}

/// Universal coefficients: `H^q` has the rank of `H_q` and the torsion of `H_{q-1}`.
pub fn cohomology_from_homology(h: &[AbelianGroupInvariants], q: usize) -> AbelianGroupInvariants {
    let rank = h.get(q).map_or(0, |g| g.rank);
    let torsion = match q.checked_sub(1) {
        Some(p) => h.get(p).map(|g| g.torsion.clone()).unwrap_or_default(),
        None => Vec::new(),
    };
    AbelianGroupInvariants { rank, torsion }
}

/// Convenience for tests and reports: the torsion factors as `u64`.
pub fn torsion_u64(g: &AbelianGroupInvariants) -> Vec<u64> {
    g.torsion.iter().map(|d| d.to_u64().expect("torsion factor fits in u64")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(s: &SmithForm) -> Vec<i64> {
        s.diagonal.iter().map(|d| d.to_i64().unwrap()).collect()
    }

    #[test]
    fn snf_examples() {
        assert_eq!(diag(&smith_normal_form(&IntMatrix::from_rows(&[vec![2]]), false)), vec![2]);
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(diag(&smith_normal_form(&m, false)), vec![1, 6]);
        let z = IntMatrix::zeros(2, 3);
        assert_eq!(diag(&smith_normal_form(&z, false)), vec![0, 0]);
        let empty = IntMatrix::zeros(0, 4);
        assert!(smith_normal_form(&empty, true).diagonal.is_empty());
    }

    #[test]
    fn snf_transforms_reconstruct() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith_normal_form(&m, true);
        assert_eq!(diag(&s), vec![2, 6, 12]);
        let (u, v) = s.transforms.clone().unwrap();
        assert_eq!(u.mul(&m).mul(&v), s.diagonal_matrix(3, 3));
        assert_eq!(u.determinant().abs(), BigInt::one());
        assert_eq!(v.determinant().abs(), BigInt::one());
    }

    #[test]
    fn rank_and_determinant() {
        let m = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.determinant(), BigInt::zero());
        let m = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.determinant(), BigInt::from(-1));
    }

    #[test]
    fn group_display_and_canonical_form() {
        let g = AbelianGroupInvariants::from_cyclic_orders(
            2,
            &[BigInt::from(2), BigInt::from(3), BigInt::from(1)],
        );
        assert_eq!(g.torsion, vec![BigInt::from(6)]);
        assert_eq!(g.to_string(), "Z^2 ⊕ Z_6");
        assert_eq!(AbelianGroupInvariants::zero().to_string(), "0");
        assert_eq!(AbelianGroupInvariants::free_plus_z2(1, 1).to_string(), "Z ⊕ Z_2");
    }

    #[test]
    fn cohomology_shifts_torsion() {
        let h = vec![
            AbelianGroupInvariants::free(1),
            AbelianGroupInvariants::free(1),
            AbelianGroupInvariants::free_plus_z2(0, 1),
            AbelianGroupInvariants::zero(),
        ];
        assert_eq!(cohomology_from_homology(&h, 0), AbelianGroupInvariants::free(1));
        assert_eq!(cohomology_from_homology(&h, 3), AbelianGroupInvariants::free_plus_z2(0, 1));
        assert_eq!(cohomology_from_homology(&h, 2), AbelianGroupInvariants::zero());
    }
}
