//! Incremental row-echelon bases for sparse vectors over `Q` and over `F_p`.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Mersenne prime `2^61 - 1`.
pub const PRIME: u64 = (1 << 61) - 1;

pub trait Scalar: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Self;
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModP(pub u64);

impl ModP {
    pub fn from_i64(v: i64) -> Self {
        ModP(v.rem_euclid(PRIME as i64) as u64)
    }

    pub fn from_bigint(v: &num_bigint::BigInt) -> Self {
        use num_integer::Integer;
        use num_traits::ToPrimitive;
        let r = v.mod_floor(&num_bigint::BigInt::from(PRIME));
        ModP(r.to_u64().expect("reduced residue fits in u64"))
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = ModP(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = Scalar::mul(&acc, &base);
            }
            base = Scalar::mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

impl Scalar for ModP {
    fn zero() -> Self {
        ModP(0)
    }
    fn one() -> Self {
        ModP(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        ModP((self.0 + rhs.0) % PRIME)
    }
    fn mul(&self, rhs: &Self) -> Self {
        ModP(((self.0 as u128 * rhs.0 as u128) % PRIME as u128) as u64)
    }
    fn neg(&self) -> Self {
        ModP((PRIME - self.0) % PRIME)
    }
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        self.pow(PRIME - 2)
    }
}

pub type SparseVector<K, S> = BTreeMap<K, S>;

/// Semi-echelon basis: each stored row has a distinct leading key with
/// coefficient one.
#[derive(Clone, Debug)]
pub struct EchelonBasis<K, S> {
    rows: Vec<SparseVector<K, S>>,
    pivots: HashMap<K, usize>,
}

impl<K: Ord + Clone + Hash, S: Scalar> Default for EchelonBasis<K, S> {
    fn default() -> Self {
        EchelonBasis { rows: Vec::new(), pivots: HashMap::new() }
    }
}

impl<K: Ord + Clone + Hash, S: Scalar> EchelonBasis<K, S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVector<K, S>] {
        &self.rows
    }

    /// Remainder of `v` after eliminating every pivot it meets; zero iff `v`
    /// lies in the span.
    pub fn reduce(&self, mut v: SparseVector<K, S>) -> SparseVector<K, S> {
        v.retain(|_, c| !c.is_zero());
        let mut done: SparseVector<K, S> = BTreeMap::new();
        while let Some((lead, c)) = v.pop_first() {
            match self.pivots.get(&lead) {
                Some(&r) => {
                    let factor = c.neg();
                    for (k, x) in self.rows[r].iter().skip(1) {
                        let entry = v.entry(k.clone()).or_insert_with(S::zero);
                        *entry = entry.add(&factor.mul(x));
                        if entry.is_zero() {
                            v.remove(k);
                        }
                    }
                }
                None => {
                    done.insert(lead, c);
                    break;
                }
            }
        }
        done.append(&mut v);
        done
    }

    pub fn contains(&self, v: SparseVector<K, S>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the basis; returns whether it was independent.
    pub fn insert(&mut self, v: SparseVector<K, S>) -> bool {
        let r = self.reduce(v);
        let Some((lead, c)) = r.first_key_value() else {
            return false;
        };
        let lead = lead.clone();
        let inv = c.inv();
        let row: SparseVector<K, S> = r.into_iter().map(|(k, x)| (k, x.mul(&inv))).collect();
        self.pivots.insert(lead, self.rows.len());
        self.rows.push(row);
        true
    }
}

pub fn rank_of<K, S, I>(vectors: I) -> usize
where
    K: Ord + Clone + Hash,
    S: Scalar,
    I: IntoIterator<Item = SparseVector<K, S>>,
{
    let mut basis = EchelonBasis::new();
    for v in vectors {
        basis.insert(v);
    }
    basis.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn rational_rank_and_membership() {
        let v1: SparseVector<u8, BigRational> = [(0, q(1)), (1, q(2))].into();
        let v2: SparseVector<u8, BigRational> = [(0, q(2)), (1, q(4))].into();
        let v3: SparseVector<u8, BigRational> = [(1, q(1)), (2, q(-1))].into();
        let mut b = EchelonBasis::new();
        assert!(b.insert(v1.clone()));
        assert!(!b.insert(v2));
        assert!(b.insert(v3.clone()));
        let sum: SparseVector<u8, BigRational> = [(0, q(1)), (1, q(3)), (2, q(-1))].into();
        assert!(b.contains(sum));
        assert!(!b.contains([(2, q(1))].into()));
        assert_eq!(b.rank(), 2);
    }

    #[test]
    fn mod_p_arithmetic() {
        let a = ModP::from_i64(-1);
        assert_eq!(a.0, PRIME - 1);
        assert_eq!(Scalar::mul(&a, &a), ModP(1));
        let x = ModP(123_456_789);
        assert_eq!(Scalar::mul(&x, &x.inv()), ModP(1));
        assert_eq!(ModP::from_bigint(&BigInt::from(-3)), ModP::from_i64(-3));
        let rows: Vec<SparseVector<u8, ModP>> =
            vec![[(0, ModP(1)), (1, ModP(1))].into(), [(0, ModP(2)), (1, ModP(2))].into()];
        assert_eq!(rank_of(rows), 1);
    }
}
