use crate::field::Matrix;
use crate::field::FiniteField;

use super::MoufangError;

/// `U = F_p^d` with elements indexed by `Σ c_i p^i`.
#[derive(Clone, Debug)]
pub struct RootGroup {
    prime: FiniteField,
    dim: usize,
    order: usize,
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
}

const MAX_ORDER: usize = 1 << 16;
const ADD_TABLE_LIMIT: usize = 1024;

impl RootGroup {
    pub fn new(p: u32, dim: usize) -> Result<Self, MoufangError> {
        let prime = FiniteField::prime(p)?;
        let order = (p as usize).checked_pow(dim as u32).filter(|&n| n <= MAX_ORDER && dim > 0);
        let Some(order) = order else { return Err(MoufangError::TooLarge { p, dim }) };
        let mut g = RootGroup { prime, dim, order, add: None, neg: Vec::new() };
        g.neg = (0..order).map(|a| g.from_coords(&g.coords(a).iter().map(|&c| g.prime.neg(c)).collect::<Vec<_>>()) as u32).collect();
        if order <= ADD_TABLE_LIMIT {
            let mut t = Vec::with_capacity(order * order);
            for a in 0..order {
                for b in 0..order {
                    t.push(g.add_digits(a, b) as u32);
                }
            }
            g.add = Some(t);
        }
        Ok(g)
    }

    /// Additive group of a field, with matching element indices.
    pub fn of_field(f: &FiniteField) -> Self {
        Self::new(f.p(), f.degree() as usize).expect("field orders are in range")
    }

    pub fn p(&self) -> u32 {
        self.prime.p()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn prime_field(&self) -> &FiniteField {
        &self.prime
    }

    pub fn coords(&self, mut a: usize) -> Vec<u32> {
        let p = self.p() as usize;
        (0..self.dim)
            .map(|_| {
                let c = a % p;
                a /= p;
                c as u32
            })
            .collect()
    }

    pub fn from_coords(&self, c: &[u32]) -> usize {
        let p = self.p() as usize;
        c.iter().rev().fold(0, |acc, &x| acc * p + x as usize)
    }

    fn add_digits(&self, a: usize, b: usize) -> usize {
        let p = self.p() as usize;
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..self.dim {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        match &self.add {
            Some(t) => t[a * self.order + b] as usize,
            None => self.add_digits(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `n·a` for an integer `n`.
    pub fn times(&self, n: i64, a: usize) -> usize {
        let c = self.prime.from_int(n);
        self.from_coords(&self.coords(a).iter().map(|&x| self.prime.mul(c, x)).collect::<Vec<_>>())
    }

    pub fn basis(&self) -> Vec<usize> {
        (0..self.dim).map(|i| (self.p() as usize).pow(i as u32)).collect()
    }
}

/// An additive endomorphism of `U`, kept both as a matrix over `F_p`
/// (acting on coordinate rows) and as a lookup table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Endo {
    matrix: Matrix,
    table: Vec<u32>,
}

impl Endo {
    pub fn from_matrix(root: &RootGroup, matrix: Matrix) -> Self {
        assert_eq!((matrix.rows(), matrix.cols()), (root.dim(), root.dim()));
        let f = root.prime_field();
        let table = (0..root.order()).map(|x| root.from_coords(&matrix.apply(&root.coords(x), f)) as u32).collect();
        Endo { matrix, table }
    }

    /// Interprets a map on `U` as an endomorphism; `None` if it is not additive.
    pub fn from_table(root: &RootGroup, table: &[u32]) -> Option<Self> {
        if table.len() != root.order() {
            return None;
        }
        let d = root.dim();
        let images: Vec<Vec<u32>> = root.basis().into_iter().map(|b| root.coords(table[b] as usize)).collect();
        let m = Matrix::from_fn(d, d, |i, j| images[i][j]);
        let e = Self::from_matrix(root, m);
        (e.table == table).then_some(e)
    }

    pub fn scalar(root: &RootGroup, n: i64) -> Self {
        let c = root.prime_field().from_int(n);
        Self::from_matrix(root, Matrix::identity(root.dim()).scale(c, root.prime_field()))
    }

    pub fn identity(root: &RootGroup) -> Self {
        Self::scalar(root, 1)
    }

    pub fn zero(root: &RootGroup) -> Self {
        Self::scalar(root, 0)
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x] as usize
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Endo, root: &RootGroup) -> Endo {
        Self::from_matrix(root, self.matrix.mul(&other.matrix, root.prime_field()))
    }

    pub fn add(&self, other: &Endo, root: &RootGroup) -> Endo {
        Self::from_matrix(root, self.matrix.add(&other.matrix, root.prime_field()))
    }

    pub fn sub(&self, other: &Endo, root: &RootGroup) -> Endo {
        Self::from_matrix(root, self.matrix.sub(&other.matrix, root.prime_field()))
    }

    pub fn pow(&self, n: u32, root: &RootGroup) -> Endo {
        (0..n).fold(Self::identity(root), |acc, _| acc.then(self, root))
    }

    pub fn is_invertible(&self, root: &RootGroup) -> bool {
        self.matrix.is_invertible(root.prime_field())
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// The integer `c` if this is multiplication by `c ∈ F_p`.
    pub fn as_prime_scalar(&self, root: &RootGroup) -> Option<u32> {
        (0..root.p()).find(|&c| *self == Self::scalar(root, c as i64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_group_matches_field_addition() {
        for q in [4u32, 8, 9, 25, 27] {
            let f = FiniteField::of_order(q).unwrap();
            let u = RootGroup::of_field(&f);
            for a in 0..q {
                assert_eq!(u.neg(a as usize), f.neg(a) as usize);
                for b in 0..q {
                    assert_eq!(u.add(a as usize, b as usize), f.add(a, b) as usize);
                }
            }
        }
    }

    #[test]
    fn endo_table_round_trip() {
        let u = RootGroup::new(3, 2).unwrap();
        let m = Matrix::from_rows(2, 2, vec![1, 2, 0, 1]).unwrap();
        let e = Endo::from_matrix(&u, m);
        assert_eq!(Endo::from_table(&u, e.table()).unwrap(), e);
        let mut bad = e.table().to_vec();
        bad.swap(4, 5);
        assert!(Endo::from_table(&u, &bad).is_none());
        assert_eq!(Endo::scalar(&u, 2).apply(4), u.times(2, 4));
        assert_eq!(Endo::scalar(&u, 2).as_prime_scalar(&u), Some(2));
    }
}
