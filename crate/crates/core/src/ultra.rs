//! Filters and ultrafilters on `S = {0, …, n-1}` with subsets as bitmasks,
//! and ultraproducts over principal ultrafilters.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::moufang::{MoufangError, MoufangSet};

pub const MAX_POINTS: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UltraError {
    #[error("index set of size {0} exceeds {MAX_POINTS}")]
    TooLarge(usize),
    #[error("subset {0:#b} is not contained in S")]
    NotASubset(u32),
    #[error("family is not a filter")]
    NotAFilter,
    #[error("family is not an ultrafilter")]
    NotAnUltrafilter,
    #[error("set is not a member of the family")]
    NotAMember,
    #[error("parts do not partition the set")]
    NotAPartition,
    #[error("{hits} parts lie in the ultrafilter")]
    LemmaViolated { hits: usize },
    #[error("ultrafilter is not principal")]
    NotPrincipal,
    #[error("expected {expected} structures, found {found}")]
    WrongCount { expected: usize, found: usize },
}

/// A family of subsets of `{0, …, n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    n: usize,
    members: BTreeSet<u32>,
}

#[derive(Serialize, Deserialize)]
struct FamilyRepr {
    n: usize,
    members: Vec<Vec<usize>>,
}

impl Serialize for SetFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut members: Vec<Vec<usize>> = self.members.iter().map(|&m| to_points(m)).collect();
        members.sort();
        FamilyRepr { n: self.n, members }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SetFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = FamilyRepr::deserialize(d)?;
        SetFamily::from_points(r.n, &r.members).map_err(serde::de::Error::custom)
    }
}

pub fn to_mask(points: &[usize]) -> u32 {
    points.iter().fold(0, |m, &i| m | (1 << i))
}

pub fn to_points(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

impl SetFamily {
    pub fn new(n: usize, members: impl IntoIterator<Item = u32>) -> Result<Self, UltraError> {
        if n > MAX_POINTS {
            return Err(UltraError::TooLarge(n));
        }
        let full = (1u32 << n) - 1;
        let members: BTreeSet<u32> = members.into_iter().collect();
        if let Some(&m) = members.iter().find(|&&m| m & !full != 0) {
            return Err(UltraError::NotASubset(m));
        }
        Ok(SetFamily { n, members })
    }

    pub fn from_points(n: usize, members: &[Vec<usize>]) -> Result<Self, UltraError> {
        if members.iter().flatten().any(|&i| i >= 32) {
            return Err(UltraError::NotASubset(u32::MAX));
        }
        Self::new(n, members.iter().map(|m| to_mask(m)))
    }

    /// `ℱ_B = {A ⊆ S : B ⊆ A}`.
    pub fn supersets_of(n: usize, b: u32) -> Result<Self, UltraError> {
        if n > MAX_POINTS {
            return Err(UltraError::TooLarge(n));
        }
        Self::new(n, (0..1u32 << n).filter(|a| a & b == b))
    }

    pub fn principal(n: usize, s: usize) -> Result<Self, UltraError> {
        if s >= n {
            return Err(UltraError::NotASubset(1 << s.min(31)));
        }
        Self::supersets_of(n, 1 << s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn full(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    pub fn members(&self) -> impl Iterator<Item = u32> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, a: u32) -> bool {
        self.members.contains(&a)
    }

    pub fn is_filter(&self) -> Result<bool, UltraError> {
        if self.n > MAX_POINTS {
            return Err(UltraError::TooLarge(self.n));
        }
        if !self.contains(self.full()) || self.contains(0) {
            return Ok(false);
        }
        let upward = self.members.iter().all(|&a| (0..self.n).all(|i| self.contains(a | 1 << i)));
        let meets = self.members.iter().all(|&a| self.members.range(a..).all(|&b| self.contains(a & b)));
        Ok(upward && meets)
    }

    pub fn is_ultrafilter(&self) -> Result<bool, UltraError> {
        if !self.is_filter()? {
            return Err(UltraError::NotAFilter);
        }
        let full = self.full();
        Ok((0..=full).all(|a| self.contains(a) || self.contains(full & !a)))
    }

    /// The point `s` if this is the principal ultrafilter at `s`.
    pub fn principal_point(&self) -> Option<usize> {
        (0..self.n).find(|&s| self.members.len() == 1 << (self.n - 1) && self.members.iter().all(|&m| m >> s & 1 == 1))
    }

    /// The unique part of a partition of a member `a` that lies in the ultrafilter.
    pub fn check_partition_lemma(&self, a: u32, parts: &[u32]) -> Result<usize, UltraError> {
        if !self.is_ultrafilter().unwrap_or(false) {
            return Err(UltraError::NotAnUltrafilter);
        }
        if !self.contains(a) {
            return Err(UltraError::NotAMember);
        }
        let union = parts.iter().fold(0, |u, &p| u | p);
        let disjoint = parts.iter().map(|p| p.count_ones()).sum::<u32>() == union.count_ones();
        if union != a || !disjoint || parts.contains(&0) {
            return Err(UltraError::NotAPartition);
        }
        let hits: Vec<usize> = (0..parts.len()).filter(|&i| self.contains(parts[i])).collect();
        match hits[..] {
            [i] => Ok(i),
            _ => Err(UltraError::LemmaViolated { hits: hits.len() }),
        }
    }
}

/// All set partitions of `mask` into nonempty blocks.
pub fn partitions(mask: u32) -> Vec<Vec<u32>> {
    if mask == 0 {
        return vec![vec![]];
    }
    let low = mask & mask.wrapping_neg();
    let rest = mask & !low;
    let mut out = Vec::new();
    // the block containing the lowest point is `low ∪ sub` for each sub ⊆ rest
    let mut sub = rest;
    loop {
        for mut p in partitions(rest & !sub) {
            p.insert(0, low | sub);
            out.push(p);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    out
}

/// `∏ X_t / ℱ` for `ℱ` principal at `index`, identified with `X_index`.
#[derive(Debug, Clone)]
pub struct Ultraproduct<T> {
    pub index: usize,
    pub factor: T,
}

impl<T> Ultraproduct<T> {
    /// The class `[(x_t)]` as an element of the factor.
    pub fn project(&self, tuple: &[u32]) -> u32 {
        tuple[self.index]
    }
}

/// Checks that tuples are identified exactly when they agree at the principal
/// point: `{t : x_t = y_t} ∈ ℱ ⟺ index ∈ {t : x_t = y_t}`, over all agreement patterns.
pub fn principal_ultraproduct<T: Clone>(structures: &[T], fam: &SetFamily) -> Result<Ultraproduct<T>, UltraError> {
    if structures.len() != fam.n() {
        return Err(UltraError::WrongCount { expected: fam.n(), found: structures.len() });
    }
    if !fam.is_ultrafilter().unwrap_or(false) {
        return Err(UltraError::NotAnUltrafilter);
    }
    let index = fam.principal_point().ok_or(UltraError::NotPrincipal)?;
    if !(0..=fam.full()).all(|e| fam.contains(e) == (e >> index & 1 == 1)) {
        return Err(UltraError::NotPrincipal);
    }
    Ok(Ultraproduct { index, factor: structures[index].clone() })
}

/// Principal ultraproduct of Moufang sets, with `xh_a = [(x_t h_{a_t})]`
/// evaluated coordinatewise on representative tuples and projected.
pub fn principal_ultraproduct_moufang(sets: &[MoufangSet], fam: &SetFamily) -> Result<(MoufangSet, Vec<Vec<u32>>), UltraProductMoufangError> {
    let up = principal_ultraproduct(sets, fam)?;
    let s = up.index;
    let n = sets[s].size();
    let rep = |x: usize| -> Vec<usize> { sets.iter().map(|m| x % m.size()).collect() };
    let mut hua = vec![vec![0u32; n]; n];
    for (a, row) in hua.iter_mut().enumerate().skip(1) {
        let at = rep(a);
        for (x, out) in row.iter_mut().enumerate() {
            let xt = rep(x);
            let image: Vec<u32> = sets.iter().enumerate().map(|(t, m)| m.hua(at[t])[xt[t]]).collect();
            *out = up.project(&image);
        }
    }
    Ok((up.factor, hua))
}

#[derive(Debug, Error)]
pub enum UltraProductMoufangError {
    #[error(transparent)]
    Ultra(#[from] UltraError),
    #[error(transparent)]
    Moufang(#[from] MoufangError),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filter_examples() {
        // S = {1,2,3} as {0,1,2}; B = {2} ↦ {1}
        let fb = SetFamily::supersets_of(3, 0b010).unwrap();
        assert!(fb.is_filter().unwrap());
        assert!(fb.is_ultrafilter().unwrap());
        let mut missing = fb.clone();
        missing.members.remove(&0b011);
        assert!(!missing.is_filter().unwrap());
        let with_empty = SetFamily::new(3, fb.members().chain([0])).unwrap();
        assert!(!with_empty.is_filter().unwrap());
        let two = SetFamily::supersets_of(3, 0b011).unwrap();
        assert!(two.is_filter().unwrap() && !two.is_ultrafilter().unwrap());
        assert_eq!(with_empty.is_ultrafilter(), Err(UltraError::NotAFilter));
        assert_eq!(SetFamily::new(21, []), Err(UltraError::TooLarge(21)));
        // cofinite subsets of a finite S: every subset, including ∅
        let cofinite = SetFamily::new(3, 0..8).unwrap();
        assert!(!cofinite.is_filter().unwrap());
    }

    #[test]
    fn partition_counts_are_bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203];
        for (k, &b) in bell.iter().enumerate() {
            assert_eq!(partitions((1u32 << k) - 1).len(), b);
        }
    }

    #[test]
    fn partition_lemma_examples() {
        let u = SetFamily::principal(5, 2).unwrap();
        let parts = [to_mask(&[0, 1]), to_mask(&[2]), to_mask(&[3, 4])];
        assert_eq!(u.check_partition_lemma(0b11111, &parts), Ok(1));
        assert_eq!(u.check_partition_lemma(0b00100, &[0b00100]), Ok(0));
        assert_eq!(u.check_partition_lemma(0b00011, &[0b00011]), Err(UltraError::NotAMember));
        assert_eq!(u.check_partition_lemma(0b11111, &[0b00111, 0b11100]), Err(UltraError::NotAPartition));
        let f = SetFamily::supersets_of(5, 0b00110).unwrap();
        assert_eq!(f.check_partition_lemma(0b11111, &[0b11111]), Err(UltraError::NotAnUltrafilter));
    }

    #[test]
    fn ultraproduct_of_fields() {
        use crate::field::FiniteField;
        let fs: Vec<FiniteField> = [3, 5, 7].iter().map(|&q| FiniteField::of_order(q).unwrap()).collect();
        let up = principal_ultraproduct(&fs, &SetFamily::principal(3, 2).unwrap()).unwrap();
        assert_eq!(up.factor.order(), 7);
        assert_eq!(up.project(&[1, 4, 6]), 6);
        let nonprincipal = SetFamily::supersets_of(3, 0b011).unwrap();
        assert_eq!(principal_ultraproduct(&fs, &nonprincipal).unwrap_err(), UltraError::NotAnUltrafilter);
    }

    #[test]
    fn serialization_is_sorted() {
        let f = SetFamily::supersets_of(2, 0b01).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"n":2,"members":[[0],[0,1]]}"#);
        assert_eq!(serde_json::from_str::<SetFamily>(&json).unwrap(), f);
    }
}
