use serde::{Deserialize, Serialize};

use crate::field::Matrix;
use crate::permgroup::{PermGroup, Permutation};

use super::{Endo, MoufangError, MoufangSet};

pub const DEFAULT_CENTROID_CAP: u128 = 1 << 20;

#[derive(Debug, Clone)]
pub struct Centroid {
    pub centroid: Vec<Endo>,
    pub invertible: Vec<Endo>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    /// `dim U < ∞` over the scalars.
    pub finite_dimension: bool,
    /// `|k ∩ C| = ∞`; never true for a finite instance.
    pub infinite_centroid_scalars: bool,
    /// `U` is generated by `{e h_a : a ≠ 0}` as an `End_H(U)`-module.
    pub generated_by_hua_images: bool,
    /// `U` is generated by `{a² : a ∈ U}` as an `End_H(U)`-module.
    pub generated_by_squares: bool,
    /// Index into the scalar list of some `λ` with `λ, λ - 1 ∈ k* ∩ C`.
    pub lambda: Option<usize>,
    pub end_h_dimension: usize,
}

impl HypothesisReport {
    pub fn all_hold(&self) -> bool {
        self.finite_dimension && self.infinite_centroid_scalars && self.generated_by_hua_images && self.lambda.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentroidLemmaReport {
    pub center_order: usize,
    pub outside_centroid: Option<Permutation>,
}

impl CentroidLemmaReport {
    pub fn holds(&self) -> bool {
        self.outside_centroid.is_none()
    }
}

impl MoufangSet {
    /// Tables of `h_e⁻¹ h_a`, which generate `H`.
    fn hua_generators(&self) -> Vec<Vec<u32>> {
        let n = self.size();
        let mut he_inv = vec![0u32; n];
        for (x, &y) in self.hua(self.e()).iter().enumerate() {
            he_inv[y as usize] = x as u32;
        }
        let mut gens: Vec<Vec<u32>> = Vec::new();
        for a in 1..n {
            let g: Vec<u32> = he_inv.iter().map(|&y| self.hua(a)[y as usize]).collect();
            if !gens.contains(&g) && g.iter().enumerate().any(|(x, &y)| x as u32 != y) {
                gens.push(g);
            }
        }
        gens
    }

    fn centroid_test(&self, t: &Endo, gens: &[Vec<u32>]) -> bool {
        let basis = self.root().basis();
        let commutes = gens
            .iter()
            .all(|g| basis.iter().all(|&x| g[t.apply(x)] as usize == t.apply(g[x] as usize)));
        commutes
            && (0..self.size()).all(|a| {
                let ta = t.apply(a);
                basis.iter().all(|&x| self.h(ta, x) == self.h(a, t.apply(t.apply(x))))
            })
    }

    /// `T ∈ End_H(U)` with `h_{aT} = T² h_a` for all `a`.
    pub fn is_in_centroid(&self, t: &Endo) -> Result<bool, MoufangError> {
        self.require_moufang()?;
        Ok(self.centroid_test(t, &self.hua_generators()))
    }

    /// Exhaustive scan of all `d×d` matrices over `F_p`.
    pub fn compute_centroid(&self, cap: u128) -> Result<Centroid, MoufangError> {
        self.require_moufang()?;
        let u = self.root();
        let (p, d) = (u.p() as u128, u.dim());
        let needed = p.checked_pow((d * d) as u32).unwrap_or(u128::MAX);
        if needed > cap {
            return Err(MoufangError::CapExceeded { needed, cap });
        }
        let gens = self.hua_generators();
        let mut centroid = Vec::new();
        for code in 0..needed {
            let mut c = code;
            let m = Matrix::from_fn(d, d, |_, _| {
                let x = (c % p) as u32;
                c /= p;
                x
            });
            let t = Endo::from_matrix(u, m);
            if self.centroid_test(&t, &gens) {
                centroid.push(t);
            }
        }
        let invertible = centroid.iter().filter(|t| t.is_invertible(u)).cloned().collect();
        Ok(Centroid { centroid, invertible })
    }

    /// Basis of `End_H(U)`, the additive maps commuting with `H`.
    pub fn end_h_basis(&self) -> Result<Vec<Endo>, MoufangError> {
        self.require_moufang()?;
        let u = self.root();
        let f = u.prime_field();
        let d = u.dim();
        let gens: Vec<Endo> = self
            .hua_generators()
            .iter()
            .map(|g| Endo::from_table(u, g).ok_or(MoufangError::NotMoufang { a: 0, b: 0, c: 0 }))
            .collect::<Result<_, _>>()?;
        // T·G = G·T, unknowns T_rs at r*d + s
        let mut rows = Vec::new();
        for g in &gens {
            let gm = g.matrix();
            for i in 0..d {
                for j in 0..d {
                    let mut row = vec![0u32; d * d];
                    for s in 0..d {
                        row[i * d + s] = f.add(row[i * d + s], gm.get(s, j));
                    }
                    for r in 0..d {
                        row[r * d + j] = f.sub(row[r * d + j], gm.get(i, r));
                    }
                    rows.extend(row);
                }
            }
        }
        let n_rows = rows.len() / (d * d);
        let basis = if n_rows == 0 {
            (0..d * d).map(|k| (0..d * d).map(|i| u32::from(i == k)).collect()).collect()
        } else {
            Matrix::from_rows(n_rows, d * d, rows).expect("shape").nullspace(f)
        };
        Ok(basis
            .into_iter()
            .map(|v| Endo::from_matrix(u, Matrix::from_rows(d, d, v).expect("shape")))
            .collect())
    }

    fn generates_module(&self, set: &[usize], end_h: &[Endo]) -> bool {
        let u = self.root();
        let vectors: Vec<u32> = set
            .iter()
            .flat_map(|&s| end_h.iter().map(move |t| t.apply(s)))
            .flat_map(|x| u.coords(x))
            .collect();
        if vectors.is_empty() {
            return false;
        }
        let m = Matrix::from_rows(vectors.len() / u.dim(), u.dim(), vectors).expect("shape");
        m.rank(u.prime_field()) == u.dim()
    }

    /// Evaluates the four hypotheses of the structure theorem with `k`
    /// given by `scalars`, which must form a subfield of `End_H(U)`.
    pub fn main_theorem_hypotheses(&self, scalars: &[Endo]) -> Result<HypothesisReport, MoufangError> {
        self.require_moufang()?;
        let u = self.root();
        let gens = self.hua_generators();
        let has = |t: &Endo| scalars.contains(t);
        if !has(&Endo::zero(u)) || !has(&Endo::identity(u)) {
            return Err(MoufangError::NotASubfield("must contain 0 and 1".into()));
        }
        for s in scalars {
            if !gens.iter().all(|g| (0..self.size()).all(|x| g[s.apply(x)] as usize == s.apply(g[x] as usize))) {
                return Err(MoufangError::NotASubfield("element does not commute with H".into()));
            }
            if !s.is_zero() && !s.is_invertible(u) {
                return Err(MoufangError::NotASubfield("nonzero element is not invertible".into()));
            }
            for t in scalars {
                if !has(&s.add(t, u)) || !has(&s.then(t, u)) || s.then(t, u) != t.then(s, u) {
                    return Err(MoufangError::NotASubfield("not closed or not commutative".into()));
                }
            }
        }
        let end_h = self.end_h_basis()?;
        let hua_images: Vec<usize> = (1..self.size()).map(|a| self.h(a, self.e())).collect();
        let squares: Vec<usize> = (0..self.size()).map(|a| self.power(a, 2)).collect::<Result<_, _>>()?;
        let in_c: Vec<bool> = scalars.iter().map(|s| self.centroid_test(s, &gens)).collect();
        let one = Endo::identity(u);
        let admissible = |i: usize| {
            let l = &scalars[i];
            if !in_c[i] || l.is_zero() {
                return false;
            }
            let lm1 = l.sub(&one, u);
            !lm1.is_zero() && scalars.iter().position(|s| *s == lm1).is_some_and(|j| in_c[j])
        };
        let minus_one = Endo::scalar(u, -1);
        let lambda = scalars
            .iter()
            .position(|s| *s == minus_one)
            .filter(|&i| admissible(i))
            .or_else(|| (0..scalars.len()).find(|&i| admissible(i)));
        Ok(HypothesisReport {
            finite_dimension: true,
            infinite_centroid_scalars: false,
            generated_by_hua_images: self.generates_module(&hua_images, &end_h),
            generated_by_squares: self.generates_module(&squares, &end_h),
            lambda,
            end_h_dimension: end_h.len(),
        })
    }

    /// Checks that the centre of `G_{∞,0}` lies in the centroid, for a group
    /// `G` on `X` containing `G†` as a normal subgroup.
    pub fn check_centroid_lemma(&self, g: &PermGroup) -> Result<CentroidLemmaReport, MoufangError> {
        let gdag = self.little_projective_group()?;
        if g.degree() != self.size() + 1 || !gdag.is_subgroup_of(g)? || !g.is_normal(&gdag)? {
            return Err(MoufangError::NotNormal);
        }
        let stab = g.point_stabilizer(&[self.infinity(), 0])?;
        let z = stab.center()?;
        let gens = self.hua_generators();
        let u = self.root();
        let mut outside = None;
        for el in z.elements()? {
            let t = Endo::from_table(u, &el.images()[..self.size()])
                .ok_or_else(|| MoufangError::CenterNotAdditive(el.clone()))?;
            if outside.is_none() && !self.centroid_test(&t, &gens) {
                outside = Some(el.clone());
            }
        }
        Ok(CentroidLemmaReport { center_order: z.order()?, outside_centroid: outside })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;

    fn pg(q: u32) -> (FiniteField, MoufangSet) {
        let f = FiniteField::of_order(q).unwrap();
        let m = MoufangSet::projective_line(&f);
        (f, m)
    }

    fn field_scalars(f: &FiniteField, m: &MoufangSet) -> Vec<Endo> {
        f.elements()
            .map(|c| Endo::from_table(m.root(), &f.elements().map(|x| f.mul(c, x)).collect::<Vec<_>>()).unwrap())
            .collect()
    }

    #[test]
    fn centroid_is_field_scalars() {
        for q in [2u32, 3, 4, 5, 7, 8, 9] {
            let (f, m) = pg(q);
            let c = m.compute_centroid(DEFAULT_CENTROID_CAP).unwrap();
            let expected = field_scalars(&f, &m);
            assert_eq!(c.centroid.len(), expected.len(), "q={q}");
            assert!(expected.iter().all(|t| c.centroid.contains(t)));
            assert_eq!(c.invertible.len(), q as usize - 1);
            for n in 0..f.p() as i64 {
                assert!(c.centroid.contains(&Endo::scalar(m.root(), n)));
            }
        }
    }

    #[test]
    fn frobenius_is_not_in_centroid_of_f9() {
        let (f, m) = pg(9);
        let frob = Endo::from_table(m.root(), &f.elements().map(|x| f.frobenius_apply(x, 1)).collect::<Vec<_>>()).unwrap();
        assert!(!m.is_in_centroid(&frob).unwrap());
    }

    #[test]
    fn centroid_cap() {
        let (_, m) = pg(9);
        assert!(matches!(m.compute_centroid(10), Err(MoufangError::CapExceeded { needed: 81, cap: 10 })));
    }

    #[test]
    fn hypotheses_examples() {
        let (f5, m5) = pg(5);
        let r = m5.main_theorem_hypotheses(&field_scalars(&f5, &m5)).unwrap();
        assert!(r.finite_dimension && !r.infinite_centroid_scalars);
        assert!(r.generated_by_hua_images && r.generated_by_squares);
        assert_eq!(field_scalars(&f5, &m5)[r.lambda.unwrap()], Endo::scalar(m5.root(), -1));
        let (f4, m4) = pg(4);
        let r = m4.main_theorem_hypotheses(&field_scalars(&f4, &m4)).unwrap();
        assert!(r.generated_by_hua_images && r.lambda.is_some());
        let (f3, m3) = pg(3);
        assert!(m3.main_theorem_hypotheses(&field_scalars(&f3, &m3)).unwrap().lambda.is_some());
        let (f2, m2) = pg(2);
        assert!(m2.main_theorem_hypotheses(&field_scalars(&f2, &m2)).unwrap().lambda.is_none());
        let bad = vec![Endo::zero(m5.root()), Endo::identity(m5.root()), Endo::scalar(m5.root(), 2)];
        assert!(matches!(m5.main_theorem_hypotheses(&bad), Err(MoufangError::NotASubfield(_))));
    }

    #[test]
    fn end_h_of_field_instances() {
        // H = square multiplications; End_H(U) = F_q scalars for q >= 4 proper cases
        let (_, m9) = pg(9);
        assert_eq!(m9.end_h_basis().unwrap().len(), 2);
        let (_, m3) = pg(3);
        assert_eq!(m3.end_h_basis().unwrap().len(), 1);
    }

    #[test]
    fn centroid_lemma_on_little_projective_groups() {
        for q in [2u32, 3, 4, 5, 7, 9] {
            let (_, m) = pg(q);
            let g = m.little_projective_group().unwrap();
            let r = m.check_centroid_lemma(&g).unwrap();
            assert!(r.holds(), "q={q}");
        }
        let (f, m) = pg(5);
        let pgl = crate::catalog::pgl2(&f).unwrap();
        let r = m.check_centroid_lemma(&pgl).unwrap();
        assert!(r.holds());
        assert_eq!(r.center_order, 4);
    }
}
