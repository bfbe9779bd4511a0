//! Standard permutation groups over a finite field.
//!
//! Affine groups act on the `q` field elements. Projective groups act on the
//! projective line: field elements `0..q` followed by `∞ = q`.

use crate::field::FiniteField;
use crate::permgroup::{PermError, PermGroup, Permutation, DEFAULT_CAP};

/// Translation `x ↦ x + b`.
pub fn translation(f: &FiniteField, b: u32) -> Permutation {
    Permutation::from_fn(f.order() as usize, |x| f.add(x as u32, b) as usize).expect("translation is a bijection")
}

/// `x ↦ c·x` for `c ≠ 0`.
pub fn scaling(f: &FiniteField, c: u32) -> Permutation {
    assert_ne!(c, 0);
    Permutation::from_fn(f.order() as usize, |x| f.mul(c, x as u32) as usize).expect("nonzero scaling is a bijection")
}

/// Additive basis `1, t, …, t^{f-1}`, i.e. the indices `p^i`.
fn additive_basis(f: &FiniteField) -> Vec<u32> {
    (0..f.degree()).map(|i| f.p().pow(i)).collect()
}

pub fn translations(f: &FiniteField) -> Result<PermGroup, PermError> {
    let gens = additive_basis(f).into_iter().map(|b| translation(f, b)).collect();
    PermGroup::closure(f.order() as usize, gens, DEFAULT_CAP)
}

/// `Aff(F_q) = {x ↦ a x + b}` of order `q(q-1)`.
pub fn affine_group(f: &FiniteField) -> Result<PermGroup, PermError> {
    let mut gens: Vec<Permutation> = additive_basis(f).into_iter().map(|b| translation(f, b)).collect();
    if f.order() > 2 {
        gens.push(scaling(f, f.primitive()));
    }
    PermGroup::closure(f.order() as usize, gens, DEFAULT_CAP)
}

/// A Möbius-type map on the projective line given on field points; `∞`
/// goes where the rule sends it.
fn projective(f: &FiniteField, rule: impl Fn(Option<u32>) -> Option<u32>) -> Permutation {
    let q = f.order() as usize;
    Permutation::from_fn(q + 1, |x| {
        let arg = (x < q).then_some(x as u32);
        rule(arg).map_or(q, |y| y as usize)
    })
    .expect("projective map is a bijection")
}

fn projective_generators(f: &FiniteField, special: bool) -> Vec<Permutation> {
    let mut gens: Vec<Permutation> = additive_basis(f)
        .into_iter()
        .map(|b| projective(f, |x| x.map(|x| f.add(x, b))))
        .collect();
    let g = f.primitive();
    let scale = if special { f.mul(g, g) } else { g };
    if scale != 1 {
        gens.push(projective(f, |x| x.map(|x| f.mul(scale, x))));
    }
    let sign = if special { f.neg(1) } else { 1 };
    gens.push(projective(f, |x| match x {
        None => Some(0),
        Some(0) => None,
        Some(x) => Some(f.mul(sign, f.inv(x).unwrap())),
    }));
    gens
}

/// `PSL₂(q)` on `q + 1` points, order `q(q²-1)/gcd(2, q-1)`.
pub fn psl2(f: &FiniteField) -> Result<PermGroup, PermError> {
    PermGroup::closure(f.order() as usize + 1, projective_generators(f, true), DEFAULT_CAP)
}

/// `PGL₂(q)` on `q + 1` points, order `q(q²-1)`.
pub fn pgl2(f: &FiniteField) -> Result<PermGroup, PermError> {
    PermGroup::closure(f.order() as usize + 1, projective_generators(f, false), DEFAULT_CAP)
}

/// `Sym(n)` from a transposition and an `n`-cycle.
pub fn symmetric(n: usize) -> Result<PermGroup, PermError> {
    let mut gens = Vec::new();
    if n >= 2 {
        gens.push(Permutation::from_fn(n, |x| match x {
            0 => 1,
            1 => 0,
            x => x,
        })?);
        gens.push(Permutation::from_fn(n, |x| (x + 1) % n)?);
    }
    PermGroup::closure(n, gens, DEFAULT_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_orders() {
        for q in [2u32, 3, 4, 5, 7, 8, 9] {
            let f = FiniteField::of_order(q).unwrap();
            let q = q as usize;
            let d = if q % 2 == 1 { 2 } else { 1 };
            assert_eq!(psl2(&f).unwrap().order().unwrap(), q * (q * q - 1) / d, "PSL2({q})");
            assert_eq!(pgl2(&f).unwrap().order().unwrap(), q * (q * q - 1), "PGL2({q})");
            assert_eq!(affine_group(&f).unwrap().order().unwrap(), q * (q - 1));
            assert_eq!(translations(&f).unwrap().order().unwrap(), q);
        }
    }

    #[test]
    fn projective_actions() {
        let f = FiniteField::of_order(7).unwrap();
        let pgl = pgl2(&f).unwrap();
        let r = pgl.transitivity_report().unwrap();
        assert_eq!(r.k_transitive, 3);
        assert!(r.is_sharply(3));
        let psl = psl2(&f).unwrap();
        assert_eq!(psl.transitivity_report().unwrap().k_transitive, 2);
        assert!(pgl.is_normal(&psl).unwrap());
        assert_eq!(symmetric(4).unwrap().order().unwrap(), 24);
    }

    #[test]
    fn pgl2_of_nine_has_elements_of_order_ten() {
        let f = FiniteField::of_order(9).unwrap();
        let orders = pgl2(&f).unwrap().element_order_multiset().unwrap();
        assert!(orders.get(&10).copied().unwrap_or(0) > 0);
    }
}
