//! Combinatorics of the Schubert index set `I(nu)` of a complex flag manifold.
//!
//! A flag type `nu = (n_1, ..., n_s)` indexes the manifold of orthogonal
//! decompositions of `C^n` into subspaces of dimensions `n_1, ..., n_s`. Its
//! Schubert cells are labelled by permutations of `{1, ..., n}` whose `s`
//! consecutive blocks (of sizes `n_1, ..., n_s`) are strictly increasing; the
//! complex dimension of the cell is the inversion count of the permutation.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use crate::intpoly::IntPolynomial;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct FlagType {
    parts: Vec<usize>,
}

impl FlagType {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.len() < 2 {
            return Err(Error::InvalidFlagType(format!(
                "need at least two parts, got {parts:?}"
            )));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidFlagType(format!(
                "parts must be positive, got {parts:?}"
            )));
        }
        if parts.iter().sum::<usize>() > u8::MAX as usize {
            return Err(Error::InvalidFlagType("total size too large".into()));
        }
        Ok(FlagType { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn num_blocks(&self) -> usize {
        self.parts.len()
    }

    /// `n = n_1 + ... + n_s`
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of odd parts.
    pub fn nu_odd(&self) -> usize {
        self.parts.iter().filter(|&&p| p % 2 == 1).count()
    }

    /// `d = sum_{i<j} n_i n_j`, the complex dimension of the flag manifold.
    pub fn dim_complex(&self) -> usize {
        let n = self.n();
        (n * n - self.parts.iter().map(|p| p * p).sum::<usize>()) / 2
    }

    /// 0-based positions occupied by block `j` (0-based) in a one-line word.
    pub fn block_range(&self, j: usize) -> Range<usize> {
        let start: usize = self.parts[..j].iter().sum();
        start..start + self.parts[j]
    }

    /// All compositions of every `n` in `2..=n_max` into at least two positive parts.
    pub fn all_up_to(n_max: usize) -> Vec<FlagType> {
        fn rec(rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if rest == 0 {
                if cur.len() >= 2 {
                    out.push(cur.clone());
                }
                return;
            }
            for p in 1..=rest {
                cur.push(p);
                rec(rest - p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        for n in 2..=n_max {
            rec(n, &mut Vec::new(), &mut out);
        }
        out.into_iter().map(|parts| FlagType { parts }).collect()
    }
}

impl TryFrom<Vec<usize>> for FlagType {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        FlagType::new(parts)
    }
}

impl From<FlagType> for Vec<usize> {
    fn from(nu: FlagType) -> Vec<usize> {
        nu.parts
    }
}

impl FromStr for FlagType {
    type Err = Error;

    /// Parses `"n1,n2,...,ns"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidFlagType(format!("cannot parse {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        FlagType::new(parts)
    }
}

impl fmt::Display for FlagType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// A minimal-length coset representative of `S_n / S_nu`, stored in 1-based
/// one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SchubertIndex {
    word: Vec<u8>,
    blocks: Vec<usize>,
    length: usize,
}

impl SchubertIndex {
    pub fn new(nu: &FlagType, word: Vec<u8>) -> Result<Self> {
        let n = nu.n();
        if word.len() != n {
            return Err(Error::InvalidFlagType(format!(
                "word {word:?} has length {} but n = {n}",
                word.len()
            )));
        }
        let mut seen = vec![false; n + 1];
        for &w in &word {
            let w = w as usize;
            if w == 0 || w > n || seen[w] {
                return Err(Error::InvalidFlagType(format!("{word:?} is not a permutation")));
            }
            seen[w] = true;
        }
        for j in 0..nu.num_blocks() {
            let block = &word[nu.block_range(j)];
            if block.windows(2).any(|p| p[0] >= p[1]) {
                return Err(Error::InvalidFlagType(format!(
                    "block {} of {word:?} is not increasing",
                    j + 1
                )));
            }
        }
        let length = inversions(&word);
        Ok(SchubertIndex { word, blocks: nu.parts.clone(), length })
    }

    pub fn identity(nu: &FlagType) -> Self {
        let word = (1..=nu.n() as u8).collect();
        SchubertIndex { word, blocks: nu.parts.clone(), length: 0 }
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.blocks
    }

    pub fn block(&self, j: usize) -> &[u8] {
        let start: usize = self.blocks[..j].iter().sum();
        &self.word[start..start + self.blocks[j]]
    }

    pub fn length(&self) -> usize {
        self.length
    }
}

impl fmt::Display for SchubertIndex {
    /// Blocks separated by `;`, e.g. `(2,4;1,3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = (0..self.blocks.len())
            .map(|j| {
                self.block(j).iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",")
            })
            .collect();
        write!(f, "({})", blocks.join(";"))
    }
}

fn inversions(word: &[u8]) -> usize {
    let mut count = 0;
    for t in 0..word.len() {
        for r in t + 1..word.len() {
            if word[r] < word[t] {
                count += 1;
            }
        }
    }
    count
}

/// `|{(t, r) : t < r, i_r < i_t}|`
pub fn length(i: &SchubertIndex) -> usize {
    inversions(&i.word)
}

/// Length computed by peeling off the last two blocks: merging them into one
/// sorted block gives `i'` for the coarser type, and the remaining
/// contribution is the Grassmannian length of block `s-1` inside the merged
/// block (inversions between the two merged blocks).
pub fn length_by_merging(i: &SchubertIndex) -> usize {
    let s = i.blocks.len();
    if s == 1 {
        return 0;
    }
    let a = i.block(s - 2);
    let b = i.block(s - 1);
    let mut merged: Vec<u8> = a.iter().chain(b).copied().collect();
    merged.sort_unstable();
    // Grassmannian length of `a` as a subset of the merged block: sum of
    // (rank in merged) - (position in a).
    let grass: usize = a
        .iter()
        .enumerate()
        .map(|(p, v)| merged.iter().position(|w| w == v).unwrap() - p)
        .sum();
    let prefix_len: usize = i.blocks[..s - 2].iter().sum();
    let mut coarse_word = i.word[..prefix_len].to_vec();
    coarse_word.extend_from_slice(&merged);
    let mut coarse_blocks = i.blocks[..s - 2].to_vec();
    coarse_blocks.push(a.len() + b.len());
    let coarse = SchubertIndex {
        length: inversions(&coarse_word),
        word: coarse_word,
        blocks: coarse_blocks,
    };
    length_by_merging(&coarse) + grass
}

/// Every element of `I(nu)`, grouped by length; each group is in
/// lexicographic order on the word.
pub fn enumerate_schubert(nu: &FlagType) -> Vec<Vec<SchubertIndex>> {
    let n = nu.n();
    let mut out: Vec<Vec<SchubertIndex>> = vec![Vec::new(); nu.dim_complex() + 1];
    let mut word = Vec::with_capacity(n);
    let remaining: Vec<u8> = (1..=n as u8).collect();
    fill_blocks(nu, 0, &remaining, &mut word, &mut out);
    out
}

/// Words are produced block by block, choosing each block as an increasing
/// subset of the unused values; the recursion order is lexicographic.
fn fill_blocks(
    nu: &FlagType,
    j: usize,
    remaining: &[u8],
    word: &mut Vec<u8>,
    out: &mut Vec<Vec<SchubertIndex>>,
) {
    if j == nu.num_blocks() {
        let length = inversions(word);
        out[length].push(SchubertIndex { word: word.clone(), blocks: nu.parts.clone(), length });
        return;
    }
    let k = nu.parts[j];
    let mut chosen = Vec::with_capacity(k);
    choose_subsets(remaining, k, 0, &mut chosen, &mut |subset| {
        let rest: Vec<u8> = remaining.iter().copied().filter(|v| !subset.contains(v)).collect();
        let mark = word.len();
        word.extend_from_slice(subset);
        fill_blocks(nu, j + 1, &rest, word, out);
        word.truncate(mark);
    });
}

fn choose_subsets(
    pool: &[u8],
    k: usize,
    start: usize,
    chosen: &mut Vec<u8>,
    f: &mut dyn FnMut(&[u8]),
) {
    if chosen.len() == k {
        f(chosen);
        return;
    }
    let need = k - chosen.len();
    for idx in start..=pool.len().saturating_sub(need) {
        if idx >= pool.len() {
            break;
        }
        chosen.push(pool[idx]);
        choose_subsets(pool, k, idx + 1, chosen, f);
        chosen.pop();
    }
}

/// Flat lexicographic list of `I(nu)`.
pub fn all_schubert(nu: &FlagType) -> Vec<SchubertIndex> {
    let mut all: Vec<SchubertIndex> = enumerate_schubert(nu).into_iter().flatten().collect();
    all.sort_by(|a, b| a.word.cmp(&b.word));
    all
}

/// `[n]_q / ([n_1]_q ... [n_s]_q)` with `[k]_q = prod_{1<=j<=k} (1 - q^j)`.
pub fn poincare_polynomial(nu: &FlagType) -> Result<IntPolynomial> {
    let q_factorial = |k: usize| {
        (1..=k).fold(IntPolynomial::one(), |acc, j| &acc * &IntPolynomial::one_minus_power(j))
    };
    let mut p = q_factorial(nu.n());
    for &part in nu.parts() {
        p = p.div_exact(&q_factorial(part))?;
    }
    Ok(p)
}

pub fn multinomial(n: usize, parts: &[usize]) -> u64 {
    // Product of binomials keeps intermediates small.
    let mut total = 0u64;
    let mut acc = 1u64;
    for &k in parts {
        total += k as u64;
        acc *= binomial(total, k as u64);
    }
    debug_assert_eq!(total, n as u64);
    acc
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// `chi(CG(nu)) = n! / (n_1! ... n_s!)`
pub fn euler_char_complex(nu: &FlagType) -> u64 {
    multinomial(nu.n(), nu.parts())
}

/// Euler characteristic of the real flag manifold of type `nu`: zero when two
/// or more parts are odd, otherwise the multinomial of the halved type.
pub fn euler_char_real(nu: &FlagType) -> u64 {
    if nu.nu_odd() >= 2 {
        return 0;
    }
    let halves: Vec<usize> = nu.parts().iter().map(|p| p / 2).collect();
    multinomial(nu.n() / 2, &halves)
}

/// `(l_e, l_o)`: the numbers of even- and odd-length Schubert indices, from
/// the Euler characteristics.
pub fn ell_counts(nu: &FlagType) -> (u64, u64) {
    let c = euler_char_complex(nu);
    let r = euler_char_real(nu);
    ((c + r) / 2, (c - r) / 2)
}

/// [`ell_counts`] cross-checked against a parity count over [`enumerate_schubert`].
pub fn ell_counts_checked(nu: &FlagType) -> Result<(u64, u64)> {
    let closed = ell_counts(nu);
    let groups = enumerate_schubert(nu);
    let even: usize = groups.iter().step_by(2).map(Vec::len).sum();
    let odd: usize = groups.iter().skip(1).step_by(2).map(Vec::len).sum();
    if closed != (even as u64, odd as u64) {
        return Err(Error::Inconsistency(format!(
            "nu = {nu}: closed form {closed:?}, enumeration ({even}, {odd})"
        )));
    }
    Ok(closed)
}

/// Length histogram `|I_q(nu)|` for `q = 0..=d`.
pub fn length_histogram(nu: &FlagType) -> Vec<usize> {
    enumerate_schubert(nu).iter().map(Vec::len).collect()
}

/// Coefficients of the Poincare polynomial as plain counts.
pub fn poincare_counts(nu: &FlagType) -> Vec<usize> {
    let p = poincare_polynomial(nu).expect("q-multinomial division is exact");
    (0..=nu.dim_complex())
        .map(|k| {
            let c: BigInt = p.coefficient(k);
            usize::try_from(c).expect("Betti numbers are non-negative")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nu(s: &str) -> FlagType {
        s.parse().unwrap()
    }

    #[test]
    fn flag_type_validation() {
        assert!("1".parse::<FlagType>().is_err());
        assert!("1,0".parse::<FlagType>().is_err());
        assert!("a,1".parse::<FlagType>().is_err());
        let t = nu("2,3,1");
        assert_eq!(t.n(), 6);
        assert_eq!(t.nu_odd(), 2);
        assert_eq!(t.dim_complex(), 2 * 3 + 2 + 3);
        assert_eq!(t.block_range(1), 2..5);
        assert_eq!(t.to_string(), "(2,3,1)");
    }

    #[test]
    fn enumerate_small_types() {
        let g = enumerate_schubert(&nu("1,1"));
        assert_eq!(g.len(), 2);
        assert_eq!(g[0][0].word(), &[1, 2]);
        assert_eq!(g[1][0].word(), &[2, 1]);

        let g = enumerate_schubert(&nu("1,2"));
        let words: Vec<(Vec<u8>, usize)> =
            g.iter().flatten().map(|i| (i.word().to_vec(), i.length())).collect();
        assert_eq!(words, vec![(vec![1, 2, 3], 0), (vec![2, 1, 3], 1), (vec![3, 1, 2], 2)]);

        let lengths: Vec<usize> = enumerate_schubert(&nu("2,2")).iter().map(Vec::len).collect();
        assert_eq!(lengths, vec![1, 1, 2, 1, 1]);
    }

    #[test]
    fn length_examples() {
        let t = nu("2,2");
        let i = SchubertIndex::new(&t, vec![2, 4, 1, 3]).unwrap();
        assert_eq!(length(&i), 3);
        assert_eq!(i.to_string(), "(2,4;1,3)");
        let t = nu("1,2");
        assert_eq!(length(&SchubertIndex::new(&t, vec![3, 1, 2]).unwrap()), 2);
        assert_eq!(length(&SchubertIndex::identity(&nu("3,2,2"))), 0);
        assert!(SchubertIndex::new(&t, vec![1, 3, 2]).is_err());
        assert!(SchubertIndex::new(&t, vec![1, 1, 2]).is_err());
    }

    #[test]
    fn poincare_examples() {
        assert_eq!(poincare_polynomial(&nu("1,1")).unwrap(), IntPolynomial::from_i64s(&[1, 1]));
        assert_eq!(poincare_polynomial(&nu("1,2")).unwrap(), IntPolynomial::from_i64s(&[1, 1, 1]));
        assert_eq!(
            poincare_polynomial(&nu("2,2")).unwrap(),
            IntPolynomial::from_i64s(&[1, 1, 2, 1, 1])
        );
    }

    #[test]
    fn euler_and_ell_examples() {
        assert_eq!(euler_char_complex(&nu("1,1")), 2);
        assert_eq!(euler_char_complex(&nu("1,2")), 3);
        assert_eq!(euler_char_complex(&nu("2,2")), 6);
        assert_eq!(euler_char_real(&nu("1,1")), 0);
        assert_eq!(euler_char_real(&nu("1,2")), 1);
        assert_eq!(euler_char_real(&nu("2,2")), 2);
        assert_eq!(ell_counts(&nu("1,2")), (2, 1));
        assert_eq!(ell_counts(&nu("1,1")), (1, 1));
        assert_eq!(ell_counts_checked(&nu("2,2")).unwrap(), (4, 2));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(multinomial(7, &[2, 3, 2]), 210);
    }

    #[test]
    fn all_compositions() {
        // compositions of n with >= 2 parts: 2^{n-1} - 1
        let all = FlagType::all_up_to(5);
        assert_eq!(all.len(), 1 + 3 + 7 + 15);
    }
}
