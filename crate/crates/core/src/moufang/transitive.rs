use indexmap::IndexSet;

use crate::permgroup::{PermGroup, Permutation};

use super::{cap_from_env, MoufangError, MoufangSet, RootGroup};

#[derive(Debug, Clone)]
pub struct TwoTransitiveInfo {
    /// `relabel[x]` is the index in the new `X = U ∪ {∞}` of original point `x`.
    pub relabel: Vec<usize>,
    pub little_projective_order: usize,
    pub little_projective_normal: bool,
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Exponent-`p` abelian group: returns `(p, d)` with `|A| = p^d`.
fn elementary_abelian_type(a: &PermGroup) -> Result<(u32, usize), MoufangError> {
    let els = a.elements()?;
    let gens = a.generators();
    let abelian = gens.iter().all(|x| gens.iter().all(|y| x.commutes_with(y)));
    let orders: IndexSet<u64> = els.iter().filter(|g| !g.is_identity()).map(Permutation::order).collect();
    if !abelian || orders.len() != 1 {
        return Err(MoufangError::NotElementaryAbelian);
    }
    let p = orders[0] as usize;
    if !is_prime(p) {
        return Err(MoufangError::NotElementaryAbelian);
    }
    let (mut n, mut d) = (els.len(), 0);
    while n % p == 0 {
        n /= p;
        d += 1;
    }
    if n != 1 {
        return Err(MoufangError::NotElementaryAbelian);
    }
    Ok((p as u32, d))
}

impl MoufangSet {
    /// Recovers the Moufang set of a 2-transitive group `g` from the root
    /// group `u_y` at the point `y`. The result is normalized so that
    /// `τ = μ_e`, where `0` is the smallest point other than `y` and `e`
    /// is the point labelled `1`.
    pub fn from_2transitive(g: &PermGroup, y: usize, u_y: &PermGroup) -> Result<(Self, TwoTransitiveInfo), MoufangError> {
        let n_points = g.degree();
        if y >= n_points || u_y.degree() != n_points {
            return Err(MoufangError::OutOfRange(y));
        }
        if g.transitivity_report()?.k_transitive < 2 {
            return Err(MoufangError::NotTwoTransitive);
        }
        let g_y = g.point_stabilizer(&[y])?;
        match g_y.is_normal(u_y) {
            Ok(true) => {}
            _ => return Err(MoufangError::NotNormalInStabilizer),
        }
        let rest: Vec<usize> = (0..n_points).filter(|&x| x != y).collect();
        if !u_y.is_regular(&rest)? {
            return Err(MoufangError::NotRegular);
        }
        let (p, d) = elementary_abelian_type(u_y)?;
        let els = g.elements()?;

        // U_x := U_y^{g_x} with y g_x = x
        let mut conj_to: Vec<Option<&Permutation>> = vec![None; n_points];
        for el in els {
            let x = el.image(y);
            if conj_to[x].is_none() {
                conj_to[x] = Some(el);
            }
        }
        let uy_els = u_y.elements()?;
        let root_groups: Vec<IndexSet<Permutation>> = conj_to
            .iter()
            .map(|gx| uy_els.iter().map(|u| u.conjugate_by(gx.expect("transitive"))).collect())
            .collect();
        for (gi, gen) in g.generators().iter().enumerate() {
            for x in 0..n_points {
                let target = &root_groups[gen.image(x)];
                if !root_groups[x].iter().all(|u| target.contains(&u.conjugate_by(gen))) {
                    return Err(MoufangError::RootGroupsNotPermuted { x, generator: gi });
                }
            }
        }

        // coordinates: u ↦ 0u is a bijection U_y → X∖{y}
        let zero = rest[0];
        let by_point: Vec<Option<&Permutation>> = {
            let mut v = vec![None; n_points];
            for u in uy_els {
                v[u.image(zero)] = Some(u);
            }
            v
        };
        let root = RootGroup::new(p, d)?;
        let mut basis: Vec<&Permutation> = Vec::new();
        let span = |basis: &[&Permutation]| -> Vec<(usize, Permutation)> {
            let mut out = vec![(0usize, Permutation::identity(n_points))];
            for (i, b) in basis.iter().enumerate() {
                let place = (p as usize).pow(i as u32);
                let mut next = Vec::with_capacity(out.len() * p as usize);
                for (label, el) in &out {
                    let mut cur = el.clone();
                    for c in 0..p as usize {
                        next.push((label + c * place, cur.clone()));
                        cur = cur.then(b);
                    }
                }
                out = next;
            }
            out
        };
        let preferred: Vec<&Permutation> = root
            .basis()
            .iter()
            .filter_map(|&i| rest.get(i).and_then(|&pt| by_point[pt]))
            .collect();
        if preferred.len() == d && span(&preferred).iter().map(|(_, e)| e).collect::<IndexSet<_>>().len() == root.order() {
            basis = preferred;
        } else {
            for &pt in &rest[1..] {
                let cand = by_point[pt].expect("regular");
                let current: IndexSet<Permutation> = span(&basis).into_iter().map(|(_, e)| e).collect();
                if !current.contains(cand) {
                    basis.push(cand);
                }
                if basis.len() == d {
                    break;
                }
            }
        }
        let mut relabel = vec![root.order(); n_points];
        for (label, el) in span(&basis) {
            relabel[el.image(zero)] = label;
        }

        let tau0 = els
            .iter()
            .find(|t| t.image(y) == zero && t.image(zero) == y)
            .expect("2-transitive group swaps any two points");
        let mut tau_new = vec![0u32; n_points];
        for x in 0..n_points {
            tau_new[relabel[x]] = relabel[tau0.image(x)] as u32;
        }
        let images: Vec<u32> = tau_new[1..root.order()].to_vec();
        let provisional = MoufangSet::build(root.clone(), &images, 1)?;
        let mu_e = provisional.mu(1)?;
        let images: Vec<u32> = (1..root.order()).map(|a| mu_e.image(a) as u32).collect();
        let m = MoufangSet::build(root, &images, 1)?;

        let gdag_gens: Vec<Permutation> = conj_to
            .iter()
            .flat_map(|gx| u_y.generators().iter().map(move |u| u.conjugate_by(gx.expect("transitive"))))
            .collect();
        let gdag = PermGroup::closure(n_points, gdag_gens, cap_from_env())?;
        let info = TwoTransitiveInfo {
            relabel,
            little_projective_order: gdag.order()?,
            little_projective_normal: g.is_normal(&gdag)?,
        };
        Ok((m, info))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::field::FiniteField;

    fn unipotents(m: &MoufangSet) -> PermGroup {
        PermGroup::closure(m.size() + 1, m.root().basis().into_iter().map(|b| m.alpha(b)).collect(), 1000).unwrap()
    }

    #[test]
    fn round_trip_reproduces_hua_tables() {
        for q in [2u32, 3, 4, 5, 7, 9] {
            let f = FiniteField::of_order(q).unwrap();
            let m = MoufangSet::projective_line(&f);
            let g = m.little_projective_group().unwrap();
            let (back, info) = MoufangSet::from_2transitive(&g, m.infinity(), &unipotents(&m)).unwrap();
            assert!(info.little_projective_normal);
            assert_eq!(info.little_projective_order, g.order().unwrap());
            assert_eq!(info.relabel, (0..=q as usize).collect::<Vec<_>>());
            for a in 1..m.size() {
                assert_eq!(back.hua(a), m.hua(a), "q={q} a={a}");
            }
            assert_eq!(back.descriptor(), m.descriptor());
        }
    }

    #[test]
    fn psl2_recovers_projective_line() {
        let f = FiniteField::of_order(5).unwrap();
        let m = MoufangSet::projective_line(&f);
        let psl = catalog::psl2(&f).unwrap();
        let (back, _) = MoufangSet::from_2transitive(&psl, 5, &unipotents(&m)).unwrap();
        assert!((1..5).all(|a| back.hua(a) == m.hua(a)));
    }

    #[test]
    fn affine_group_is_rejected() {
        let f = FiniteField::of_order(5).unwrap();
        let aff = catalog::affine_group(&f).unwrap();
        let trans = catalog::translations(&f).unwrap();
        assert!(matches!(
            MoufangSet::from_2transitive(&aff, 0, &trans),
            Err(MoufangError::NotNormalInStabilizer)
        ));
        let g0 = aff.point_stabilizer(&[0]).unwrap();
        assert!(matches!(
            MoufangSet::from_2transitive(&aff, 0, &g0),
            Err(MoufangError::NotElementaryAbelian)
        ));
        let trivial = PermGroup::closure(5, vec![], 1).unwrap();
        assert!(matches!(MoufangSet::from_2transitive(&aff, 0, &trivial), Err(MoufangError::NotRegular)));
    }

    #[test]
    fn not_two_transitive() {
        let c = PermGroup::closure(4, vec![Permutation::new(vec![1, 2, 3, 0]).unwrap()], 10).unwrap();
        assert!(matches!(MoufangSet::from_2transitive(&c, 0, &c), Err(MoufangError::NotTwoTransitive)));
    }
}
