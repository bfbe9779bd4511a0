//! Small-degree permutation groups by full enumeration.
//!
//! Points are `0..n`. Permutations act on the right: `x.then(y)` applies `x`
//! first, and `g^h = h⁻¹ g h`. Groups are enumerated by breadth-first product
//! closure into an insertion-ordered set, which keeps every derived list
//! (elements, stabilizers, centers) deterministic.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("image list {0:?} is not a bijection")]
    NotABijection(Vec<u32>),
    #[error("closure exceeded {cap} elements")]
    CapExceeded { cap: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("group has not been enumerated")]
    NotEnumerated,
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("not a subgroup: {0:?} is missing from the ambient group")]
    NotSubgroup(Permutation),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("hypothesis a^h3 = a^h1 a^h2 fails at a = {witness:?}")]
    HypothesisFails { witness: Permutation },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i as usize >= n || seen[i as usize] {
                return Err(PermError::NotABijection(images));
            }
            seen[i as usize] = true;
        }
        Ok(Permutation(images))
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> usize) -> Result<Self, PermError> {
        Self::new((0..n).map(|i| f(i) as u32).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u32).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn image(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation(inv)
    }

    /// `h⁻¹ · self · h`.
    pub fn conjugate_by(&self, h: &Permutation) -> Permutation {
        h.inverse().then(self).then(h)
    }

    pub fn pow(&self, n: u64) -> Permutation {
        (0..n).fold(Permutation::identity(self.degree()), |acc, _| acc.then(self))
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            out.push(len);
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycle_lengths().into_iter().fold(1u64, |acc, l| lcm(acc, l as u64))
    }

    pub fn fixed_point_count(&self) -> usize {
        self.0.iter().enumerate().filter(|(i, &x)| *i as u32 == x).count()
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.then(other) == other.then(self)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl std::ops::Mul for &Permutation {
    type Output = Permutation;
    fn mul(self, rhs: &Permutation) -> Permutation {
        self.then(rhs)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Serialized group: `{"degree":n, "generators":[[…],…], "order":m}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub degree: usize,
    pub generators: Vec<Permutation>,
    pub order: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitivityReport {
    /// Largest `k <= 3` such that the action on ordered `k`-tuples of
    /// distinct points is transitive (0 if not even transitive).
    pub k_transitive: usize,
    /// Every `k <= 3` at which the action is sharply `k`-transitive.
    pub sharp_at: Vec<usize>,
}

impl TransitivityReport {
    pub fn is_sharply(&self, k: usize) -> bool {
        self.sharp_at.contains(&k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumLemmaOutcome {
    /// `Z(G_x) ≤ N_G(A) ∩ G_x`.
    pub conclusion_holds: bool,
    pub counterexample: Option<Permutation>,
}

#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Option<IndexSet<Permutation>>,
}

fn falling_factorial(n: usize, k: usize) -> usize {
    (0..k).map(|i| n - i).product()
}

impl PermGroup {
    /// A group given by generators only; call [`Self::enumerate`] before use.
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, PermError> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch { expected: degree, found: g.degree() });
        }
        Ok(PermGroup { degree, generators, elements: None })
    }

    /// Breadth-first product closure of `generators`.
    pub fn closure(degree: usize, generators: Vec<Permutation>, cap: usize) -> Result<Self, PermError> {
        let mut g = Self::new(degree, generators)?;
        g.enumerate(cap)?;
        Ok(g)
    }

    pub fn enumerate(&mut self, cap: usize) -> Result<(), PermError> {
        if self.elements.is_some() {
            return Ok(());
        }
        self.elements = Some(close(self.degree, &self.generators, cap)?);
        Ok(())
    }

    /// Wraps an element set already known to be closed under products and
    /// picks a small generating set greedily in element order.
    pub(crate) fn from_closed_elements(degree: usize, elements: IndexSet<Permutation>) -> Self {
        let mut generators = Vec::new();
        let mut span: IndexSet<Permutation> = [Permutation::identity(degree)].into_iter().collect();
        for el in &elements {
            if !span.contains(el) {
                generators.push(el.clone());
                span = close(degree, &generators, elements.len()).expect("subset of a finite group");
            }
        }
        debug_assert_eq!(span.len(), elements.len());
        PermGroup { degree, generators, elements: Some(elements) }
    }

    /// Enumerated subgroup of `self` consisting of the elements satisfying `keep`.
    pub fn subgroup_where(&self, keep: impl Fn(&Permutation) -> bool) -> Result<PermGroup, PermError> {
        let els: IndexSet<Permutation> = self.elements()?.iter().filter(|g| keep(g)).cloned().collect();
        Ok(Self::from_closed_elements(self.degree, els))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn is_enumerated(&self) -> bool {
        self.elements.is_some()
    }

    pub fn elements(&self) -> Result<&IndexSet<Permutation>, PermError> {
        self.elements.as_ref().ok_or(PermError::NotEnumerated)
    }

    pub fn order(&self) -> Result<usize, PermError> {
        Ok(self.elements()?.len())
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool, PermError> {
        Ok(self.elements()?.contains(g))
    }

    pub fn descriptor(&self) -> GroupDescriptor {
        GroupDescriptor {
            degree: self.degree,
            generators: self.generators.clone(),
            order: self.elements.as_ref().map(|e| e.len()),
        }
    }

    /// Mutual containment of element sets.
    pub fn same_elements(&self, other: &PermGroup) -> Result<bool, PermError> {
        let (a, b) = (self.elements()?, other.elements()?);
        Ok(a.len() == b.len() && a.iter().all(|g| b.contains(g)))
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> Result<bool, PermError> {
        let big = other.elements()?;
        Ok(self.elements()?.iter().all(|g| big.contains(g)))
    }

    pub fn orbit(&self, point: usize) -> Result<Vec<usize>, PermError> {
        self.check_point(point)?;
        let mut seen = vec![false; self.degree];
        let mut queue = VecDeque::from([point]);
        seen[point] = true;
        let mut out = vec![point];
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = g.image(x);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        Ok(out)
    }

    fn check_point(&self, point: usize) -> Result<(), PermError> {
        if point >= self.degree {
            return Err(PermError::PointOutOfRange { point, degree: self.degree });
        }
        Ok(())
    }

    /// Transitivity on ordered tuples of distinct points for `k = 1, 2, 3`,
    /// by counting the orbit of `(0, …, k-1)`.
    pub fn transitivity_report(&self) -> Result<TransitivityReport, PermError> {
        let elements = self.elements()?;
        let n = self.degree;
        let mut k_transitive = 0;
        let mut sharp_at = Vec::new();
        for k in 1..=3.min(n) {
            let orbit: HashSet<Vec<u32>> = elements.iter().map(|g| g.images()[..k].to_vec()).collect();
            let tuples = falling_factorial(n, k);
            if orbit.len() != tuples {
                break;
            }
            k_transitive = k;
            if elements.len() == tuples {
                sharp_at.push(k);
            }
        }
        Ok(TransitivityReport { k_transitive, sharp_at })
    }

    pub fn point_stabilizer(&self, points: &[usize]) -> Result<PermGroup, PermError> {
        self.elements()?;
        for &p in points {
            self.check_point(p)?;
        }
        self.subgroup_where(|g| points.iter().all(|&p| g.image(p) == p))
    }

    /// `N ⊴ self`, tested on the generators of `self`.
    pub fn is_normal(&self, n: &PermGroup) -> Result<bool, PermError> {
        self.elements()?;
        let nel = n.elements()?;
        if let Some(missing) = nel.iter().find(|x| !self.elements.as_ref().unwrap().contains(*x)) {
            return Err(PermError::NotSubgroup(missing.clone()));
        }
        Ok(self.generators.iter().all(|g| nel.iter().all(|x| nel.contains(&x.conjugate_by(g)))))
    }

    /// Does `self` act regularly on `on`?
    pub fn is_regular(&self, on: &[usize]) -> Result<bool, PermError> {
        let elements = self.elements()?;
        for &p in on {
            self.check_point(p)?;
        }
        let Some(&first) = on.first() else { return Ok(elements.len() == 1) };
        let target: HashSet<usize> = on.iter().copied().collect();
        let orbit: HashSet<usize> = elements.iter().map(|g| g.image(first)).collect();
        Ok(orbit == target && elements.len() == target.len())
    }

    pub fn element_order_multiset(&self) -> Result<BTreeMap<u64, usize>, PermError> {
        let mut out = BTreeMap::new();
        for g in self.elements()? {
            *out.entry(g.order()).or_insert(0) += 1;
        }
        Ok(out)
    }

    pub fn center(&self) -> Result<PermGroup, PermError> {
        let gens = self.generators.clone();
        self.subgroup_where(|z| gens.iter().all(|g| z.then(g) == g.then(z)))
    }

    /// Every non-identity element fixes at most one point.
    pub fn is_two_sharp(&self) -> Result<bool, PermError> {
        Ok(self.elements()?.iter().all(|g| g.is_identity() || g.fixed_point_count() <= 1))
    }

    /// `N_G(A) ∩ G_x` for an enumerated subgroup `A`.
    pub fn normalizer_stabilizer(&self, a: &PermGroup, x: usize) -> Result<PermGroup, PermError> {
        self.check_point(x)?;
        let ael = a.elements()?;
        self.subgroup_where(|h| h.image(x) == x && ael.iter().all(|t| ael.contains(&t.conjugate_by(h))))
    }

    /// For a 2-sharp group with a regular subgroup `A`, checks that
    /// `a^{h3} = a^{h1} a^{h2}` for all `a ∈ A` and, if so, that the center
    /// of the point stabilizer `G_x` normalizes `A`.
    pub fn check_sharp2_sum_lemma(
        &self,
        a: &PermGroup,
        x: usize,
        h: [&Permutation; 3],
    ) -> Result<SumLemmaOutcome, PermError> {
        let elements = self.elements()?;
        if !self.is_two_sharp()? {
            return Err(PermError::PreconditionFailed("group is not 2-sharp".into()));
        }
        if !a.is_subgroup_of(self)? {
            return Err(PermError::PreconditionFailed("A is not a subgroup of G".into()));
        }
        let all: Vec<usize> = (0..self.degree).collect();
        if !a.is_regular(&all)? {
            return Err(PermError::PreconditionFailed("A is not regular".into()));
        }
        let ael = a.elements()?;
        for hi in h {
            let ok = elements.contains(hi)
                && hi.image(x) == x
                && ael.iter().all(|t| ael.contains(&t.conjugate_by(hi)));
            if !ok {
                return Err(PermError::PreconditionFailed(format!("{hi:?} is not in N_G(A) ∩ G_x")));
            }
        }
        for t in ael {
            if t.conjugate_by(h[2]) != t.conjugate_by(h[0]).then(&t.conjugate_by(h[1])) {
                return Err(PermError::HypothesisFails { witness: t.clone() });
            }
        }
        let center = self.point_stabilizer(&[x])?.center()?;
        let counterexample = center
            .elements()?
            .iter()
            .find(|z| !ael.iter().all(|t| ael.contains(&t.conjugate_by(z))))
            .cloned();
        Ok(SumLemmaOutcome { conclusion_holds: counterexample.is_none(), counterexample })
    }
}

fn close(degree: usize, generators: &[Permutation], cap: usize) -> Result<IndexSet<Permutation>, PermError> {
    if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
        return Err(PermError::DegreeMismatch { expected: degree, found: g.degree() });
    }
    let mut set = IndexSet::new();
    set.insert(Permutation::identity(degree));
    let mut i = 0;
    while i < set.len() {
        let x = set[i].clone();
        for g in generators {
            let y = x.then(g);
            if !set.contains(&y) {
                if set.len() >= cap {
                    return Err(PermError::CapExceeded { cap });
                }
                set.insert(y);
            }
        }
        i += 1;
    }
    Ok(set)
}
