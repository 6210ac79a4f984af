//! Cellular chain complexes of `CG(nu)`, of `S^m x CG(nu)` with its free
//! involution, and of the quotient `P(m, nu)`.
//!
//! The sphere carries the equivariant cell structure with two cells `C_j^±`
//! in each dimension `0 <= j <= m`; product cells are `X^±(j, i) = C_j^± x X(i)`
//! and their images in the quotient are `X(j, i)`. Orientation conventions are
//! folded into the boundary coefficients, so no geometry is represented.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flagcomb::{all_schubert, FlagType, SchubertIndex};
use crate::homalg::IntMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellLabel {
    pub sphere_index: usize,
    pub schubert: SchubertIndex,
    pub sign: Option<Sign>,
}

impl CellLabel {
    pub fn dimension(&self) -> usize {
        self.sphere_index + 2 * self.schubert.length()
    }
}

impl fmt::Display for CellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.sign {
            None => "",
            Some(Sign::Plus) => "+",
            Some(Sign::Minus) => "-",
        };
        write!(f, "X{sign}({}, {})", self.sphere_index, self.schubert)
    }
}

/// `boundaries[r]` maps degree `r` to degree `r - 1` and has shape
/// `|cells[r-1]| x |cells[r]|` (`0 x |cells[0]|` for `r = 0`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainComplex {
    cells: Vec<Vec<CellLabel>>,
    boundaries: Vec<IntMatrix>,
}

impl ChainComplex {
    /// Assembles a complex and checks `∂∂ = 0` and matrix shapes.
    pub fn new(cells: Vec<Vec<CellLabel>>, boundaries: Vec<IntMatrix>) -> Result<Self> {
        if cells.len() != boundaries.len() {
            return Err(Error::MalformedComplex("one boundary matrix per degree".into()));
        }
        for (r, b) in boundaries.iter().enumerate() {
            let expected = (if r == 0 { 0 } else { cells[r - 1].len() }, cells[r].len());
            if b.shape() != expected {
                return Err(Error::MalformedComplex(format!(
                    "boundary in degree {r} has shape {:?}, expected {expected:?}",
                    b.shape()
                )));
            }
        }
        let c = ChainComplex { cells, boundaries };
        c.check_boundary_squares_to_zero()?;
        Ok(c)
    }

    pub fn top_degree(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }

    pub fn cells(&self, r: usize) -> &[CellLabel] {
        self.cells.get(r).map_or(&[], Vec::as_slice)
    }

    pub fn cell_count(&self, r: usize) -> usize {
        self.cells(r).len()
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    /// `∂_r`; outside the stored range this is the zero map of the right shape.
    pub fn boundary(&self, r: usize) -> IntMatrix {
        match self.boundaries.get(r) {
            Some(b) => b.clone(),
            None => IntMatrix::zeros(self.cell_count(r.wrapping_sub(1)), self.cell_count(r)),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(r, c)| if r % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) })
            .sum()
    }

    pub fn check_boundary_squares_to_zero(&self) -> Result<()> {
        for r in 2..self.cells.len() {
            if !self.boundaries[r - 1].mul(&self.boundaries[r]).is_zero() {
                return Err(Error::MalformedComplex(format!("∂∂ ≠ 0 in degree {r}")));
            }
        }
        Ok(())
    }

    pub fn position(&self, label: &CellLabel) -> Option<usize> {
        self.cells(label.dimension()).iter().position(|c| c == label)
    }

    /// Degree-keyed view: `r -> {cells, boundary}`.
    pub fn to_degree_map(&self) -> std::collections::BTreeMap<usize, DegreeData> {
        (0..self.cells.len())
            .map(|r| {
                (
                    r,
                    DegreeData {
                        cells: self.cells[r].iter().map(ToString::to_string).collect(),
                        boundary: self.boundaries[r].to_nested(),
                    },
                )
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeData {
    pub cells: Vec<String>,
    pub boundary: Vec<Vec<BigInt>>,
}

/// θ_* on `C_*(S^m x CG(nu); Z)`, one square matrix per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutionMatrix {
    pub per_degree: Vec<IntMatrix>,
}

impl InvolutionMatrix {
    pub fn check_is_involution(&self) -> bool {
        self.per_degree.iter().all(|t| t.mul(t) == IntMatrix::identity(t.rows()))
    }

    pub fn check_commutes_with(&self, c: &ChainComplex) -> bool {
        (1..self.per_degree.len()).all(|r| {
            let b = c.boundary(r);
            b.mul(&self.per_degree[r]) == self.per_degree[r - 1].mul(&b)
        })
    }
}

fn sorted_by_degree(mut labels: Vec<CellLabel>, top: usize) -> Vec<Vec<CellLabel>> {
    labels.sort_by(|a, b| {
        (a.sphere_index, a.schubert.word(), a.sign).cmp(&(b.sphere_index, b.schubert.word(), b.sign))
    });
    let mut cells = vec![Vec::new(); top + 1];
    for l in labels {
        cells[l.dimension()].push(l);
    }
    cells
}

fn index_maps(cells: &[Vec<CellLabel>]) -> Vec<HashMap<CellLabel, usize>> {
    cells
        .iter()
        .map(|cs| cs.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect())
        .collect()
}

/// Schubert cell complex: only even degrees, zero differential.
pub fn flag_chain_complex(nu: &FlagType) -> ChainComplex {
    let top = 2 * nu.dim_complex();
    let labels = all_schubert(nu)
        .into_iter()
        .map(|schubert| CellLabel { sphere_index: 0, schubert, sign: None })
        .collect();
    let cells = sorted_by_degree(labels, top);
    let boundaries = zero_boundaries(&cells);
    ChainComplex { cells, boundaries }
}

fn zero_boundaries(cells: &[Vec<CellLabel>]) -> Vec<IntMatrix> {
    (0..cells.len())
        .map(|r| IntMatrix::zeros(if r == 0 { 0 } else { cells[r - 1].len() }, cells[r].len()))
        .collect()
}

fn sign_power(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Cells `X(j, i)`, `0 <= j <= m`, with `∂X(j, i) = (1 + (-1)^{j + l(i)}) X(j-1, i)`.
pub fn dold_chain_complex(m: usize, nu: &FlagType) -> Result<ChainComplex> {
    if m == 0 {
        return Err(Error::DegenerateSphere);
    }
    let top = m + 2 * nu.dim_complex();
    let schubert = all_schubert(nu);
    let labels = (0..=m)
        .flat_map(|j| {
            schubert.iter().map(move |s| CellLabel { sphere_index: j, schubert: s.clone(), sign: None })
        })
        .collect();
    let cells = sorted_by_degree(labels, top);
    let index = index_maps(&cells);
    let mut boundaries = zero_boundaries(&cells);
    for (r, cs) in cells.iter().enumerate() {
        for (col, cell) in cs.iter().enumerate() {
            let j = cell.sphere_index;
            if j == 0 {
                continue;
            }
            let coeff = 1 + sign_power(j + cell.schubert.length());
            if coeff == 0 {
                continue;
            }
            let target = CellLabel { sphere_index: j - 1, ..cell.clone() };
            let row = index[r - 1][&target];
            boundaries[r].set(row, col, BigInt::from(coeff));
        }
    }
    ChainComplex::new(cells, boundaries)
}

/// Cells `X^±(j, i)` with
/// `∂X^±(j, i) = X^±(j-1, i) + (-1)^j X^∓(j-1, i)` and
/// `θ_* X^±(j, i) = (-1)^{l(i)} X^∓(j, i)`.
pub fn product_complex_with_involution(
    m: usize,
    nu: &FlagType,
) -> Result<(ChainComplex, InvolutionMatrix)> {
    if m == 0 {
        return Err(Error::DegenerateSphere);
    }
    let top = m + 2 * nu.dim_complex();
    let schubert = all_schubert(nu);
    let mut labels = Vec::new();
    for j in 0..=m {
        for s in &schubert {
            for sign in [Sign::Plus, Sign::Minus] {
                labels.push(CellLabel { sphere_index: j, schubert: s.clone(), sign: Some(sign) });
            }
        }
    }
    let cells = sorted_by_degree(labels, top);
    let index = index_maps(&cells);
    let mut boundaries = zero_boundaries(&cells);
    let mut theta: Vec<IntMatrix> =
        cells.iter().map(|cs| IntMatrix::zeros(cs.len(), cs.len())).collect();

    for (r, cs) in cells.iter().enumerate() {
        for (col, cell) in cs.iter().enumerate() {
            let sign = cell.sign.expect("product cells are signed");
            let flipped = CellLabel { sign: Some(sign.flip()), ..cell.clone() };
            theta[r].set(
                index[r][&flipped],
                col,
                BigInt::from(sign_power(cell.schubert.length())),
            );

            let j = cell.sphere_index;
            if j == 0 {
                continue;
            }
            let same = CellLabel { sphere_index: j - 1, ..cell.clone() };
            let other = CellLabel { sphere_index: j - 1, ..flipped };
            boundaries[r].set(index[r - 1][&same], col, BigInt::one());
            boundaries[r].set(index[r - 1][&other], col, BigInt::from(sign_power(j)));
        }
    }
    let complex = ChainComplex::new(cells, boundaries)?;
    let involution = InvolutionMatrix { per_degree: theta };
    if !involution.check_is_involution() || !involution.check_commutes_with(&complex) {
        return Err(Error::MalformedComplex("θ_* is not a chain involution".into()));
    }
    Ok((complex, involution))
}

/// Per-degree dimension of the θ_*-fixed part of rational homology.
///
/// Over Q, invariants commute with homology, so this is the homology of the
/// subcomplex `(1 + θ) C_*`: `dim F_r - rank ∂|F_r - rank ∂|F_{r+1}`.
pub fn fixed_subcomplex_ranks(complex: &ChainComplex, involution: &InvolutionMatrix) -> Vec<usize> {
    let top = complex.top_degree();
    let projector: Vec<IntMatrix> = involution
        .per_degree
        .iter()
        .map(|t| t.add(&IntMatrix::identity(t.rows())))
        .collect();
    let fixed_dim: Vec<usize> = projector.iter().map(IntMatrix::rank).collect();
    let restricted_rank: Vec<usize> = (0..=top + 1)
        .map(|r| {
            if r == 0 || r > top {
                0
            } else {
                complex.boundary(r).mul(&projector[r]).rank()
            }
        })
        .collect();
    (0..=top)
        .map(|r| fixed_dim[r] - restricted_rank[r] - restricted_rank[r + 1])
        .collect()
}

/// The all-zero element helper used by callers building coefficient vectors.
pub fn zero_vector(len: usize) -> Vec<BigInt> {
    vec![BigInt::zero(); len]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::{homology, AbelianGroupInvariants};

    fn nu(s: &str) -> FlagType {
        s.parse().unwrap()
    }

    #[test]
    fn flag_complex_counts() {
        let c = flag_chain_complex(&nu("1,1"));
        assert_eq!((0..=2).map(|r| c.cell_count(r)).collect::<Vec<_>>(), vec![1, 0, 1]);
        let c = flag_chain_complex(&nu("1,2"));
        assert_eq!((0..=4).map(|r| c.cell_count(r)).collect::<Vec<_>>(), vec![1, 0, 1, 0, 1]);
        let c = flag_chain_complex(&nu("2,2"));
        assert_eq!(c.cell_count(4), 2);
        assert!((0..=c.top_degree()).all(|r| c.boundary(r).is_zero()));
    }

    #[test]
    fn dold_boundary_coefficients() {
        let t = nu("1,1");
        let c = dold_chain_complex(1, &t).unwrap();
        assert_eq!(c.total_cells(), 4);
        let ident = crate::flagcomb::SchubertIndex::identity(&t);
        let swap = crate::flagcomb::SchubertIndex::new(&t, vec![2, 1]).unwrap();
        // X(1, l=1) lives in degree 3, X(0, l=1) in degree 2.
        let x11 = CellLabel { sphere_index: 1, schubert: swap.clone(), sign: None };
        let x01 = CellLabel { sphere_index: 0, schubert: swap, sign: None };
        let b3 = c.boundary(3);
        assert_eq!(b3.get(c.position(&x01).unwrap(), c.position(&x11).unwrap()), &BigInt::from(2));
        let x10 = CellLabel { sphere_index: 1, schubert: ident, sign: None };
        assert!(c.boundary(1).get(0, c.position(&x10).unwrap()).is_zero());

        let t = nu("1,2");
        let c = dold_chain_complex(2, &t).unwrap();
        let i1 = crate::flagcomb::SchubertIndex::new(&t, vec![2, 1, 3]).unwrap();
        let x21 = CellLabel { sphere_index: 2, schubert: i1, sign: None };
        assert!(c.boundary(4).mul(&IntMatrix::identity(c.cell_count(4))).is_zero()
            || c.boundary(4).get(0, c.position(&x21).unwrap()).is_zero());
        assert!(dold_chain_complex(0, &t).is_err());
    }

    #[test]
    fn product_complex_boundary_and_involution() {
        let t = nu("1,1");
        let (c, theta) = product_complex_with_involution(1, &t).unwrap();
        let ident = crate::flagcomb::SchubertIndex::identity(&t);
        let lab = |j, s: &crate::flagcomb::SchubertIndex, sign| CellLabel {
            sphere_index: j,
            schubert: s.clone(),
            sign: Some(sign),
        };
        let b1 = c.boundary(1);
        let col = c.position(&lab(1, &ident, Sign::Plus)).unwrap();
        assert_eq!(b1.get(c.position(&lab(0, &ident, Sign::Plus)).unwrap(), col), &BigInt::from(1));
        assert_eq!(b1.get(c.position(&lab(0, &ident, Sign::Minus)).unwrap(), col), &BigInt::from(-1));

        let swap = crate::flagcomb::SchubertIndex::new(&t, vec![2, 1]).unwrap();
        let t2 = &theta.per_degree[2];
        let from = c.position(&lab(0, &swap, Sign::Plus)).unwrap();
        let to = c.position(&lab(0, &swap, Sign::Minus)).unwrap();
        assert_eq!(t2.get(to, from), &BigInt::from(-1));
        assert!(theta.check_is_involution());
        assert!(theta.check_commutes_with(&c));

        // The product complex computes H_*(S^1 x CP^1).
        let h: Vec<_> = (0..=3).map(|q| homology(&c, q)).collect();
        assert_eq!(h, vec![AbelianGroupInvariants::free(1); 4]);
    }

    #[test]
    fn fixed_ranks_examples() {
        let (c, t) = product_complex_with_involution(1, &nu("1,1")).unwrap();
        assert_eq!(fixed_subcomplex_ranks(&c, &t), vec![1, 1, 0, 0]);
        let (c, t) = product_complex_with_involution(2, &nu("1,1")).unwrap();
        assert_eq!(fixed_subcomplex_ranks(&c, &t), vec![1, 0, 0, 0, 1]);
    }

    #[test]
    fn euler_characteristic_of_quotient() {
        for m in 1..=4 {
            let t = nu("1,2");
            let c = dold_chain_complex(m, &t).unwrap();
            let expected = if m % 2 == 1 { 0 } else { 3 };
            assert_eq!(c.euler_characteristic(), expected);
        }
    }
}
