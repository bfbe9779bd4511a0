//! Quadratic Jordan algebras over `F_q` given by an explicit table of `Q_a`.
//!
//! The carrier is `F_q^d`; element `(x_0, …, x_{d-1})` has index
//! `Σ x_j q^j`, where each `x_j` is a field index. `Q_a` is a `d×d` matrix
//! acting on row vectors.

use thiserror::Error;

use crate::field::{FieldError, FiniteField, Matrix};
use crate::moufang::{MoufangError, MoufangSet, RootGroup};

pub const DEFAULT_AXIOM_CAP: usize = 6561;

#[derive(Debug, Error)]
pub enum JordanError {
    #[error("carrier of {size} elements exceeds cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("Q_{0} is singular")]
    SingularQ(usize),
    #[error("algebra is not division")]
    NotDivision,
    #[error("table has {found} entries, expected {expected}")]
    TableShape { expected: usize, found: usize },
    #[error("element {0} out of range")]
    OutOfRange(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Moufang(#[from] MoufangError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomWitness {
    pub axiom: &'static str,
    pub elements: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub quadratic: bool,
    pub qj1: bool,
    pub qj2: bool,
    pub qj3: bool,
    pub witnesses: Vec<AxiomWitness>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.quadratic && self.qj1 && self.qj2 && self.qj3
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QCommutativity {
    pub hua_order: usize,
    pub zassenhaus: bool,
    pub commutes: bool,
}

#[derive(Clone, Debug)]
pub struct QuadraticJordan {
    base: FiniteField,
    dim: usize,
    size: usize,
    q_table: Vec<Matrix>,
    unit: usize,
}

impl QuadraticJordan {
    pub fn from_table(base: FiniteField, dim: usize, unit: usize, q_table: Vec<Matrix>) -> Result<Self, JordanError> {
        let size = (base.order() as usize).pow(dim as u32);
        if q_table.len() != size {
            return Err(JordanError::TableShape { expected: size, found: q_table.len() });
        }
        if let Some(m) = q_table.iter().find(|m| m.rows() != dim || m.cols() != dim) {
            return Err(JordanError::TableShape { expected: dim * dim, found: m.rows() * m.cols() });
        }
        if unit >= size {
            return Err(JordanError::OutOfRange(unit));
        }
        Ok(QuadraticJordan { base, dim, size, q_table, unit })
    }

    /// `d = 1`, `Q_a = a²`, `e = 1`.
    pub fn field_jordan(f: &FiniteField) -> Self {
        let table = f.elements().map(|a| Matrix::from_rows(1, 1, vec![f.mul(a, a)]).unwrap()).collect();
        Self::from_table(f.clone(), 1, 1, table).expect("well-formed")
    }

    /// `2×2` matrices with `x Q_a = a x a`; coordinates `(m00, m01, m10, m11)`.
    pub fn matrix_jordan(f: &FiniteField) -> Self {
        let size = (f.order() as usize).pow(4);
        let mut j = QuadraticJordan { base: f.clone(), dim: 4, size, q_table: Vec::new(), unit: 0 };
        let mm = |x: &[u32], y: &[u32]| -> Vec<u32> {
            let e = |i: usize, k: usize, l: usize| f.mul(x[2 * i + k], y[2 * k + l]);
            (0..4).map(|c| f.add(e(c / 2, 0, c % 2), e(c / 2, 1, c % 2))).collect()
        };
        j.q_table = (0..size)
            .map(|a| {
                let ac = j.coords(a);
                let rows: Vec<u32> = (0..4)
                    .flat_map(|i| {
                        let mut basis = vec![0u32; 4];
                        basis[i] = 1;
                        mm(&mm(&ac, &basis), &ac)
                    })
                    .collect();
                Matrix::from_rows(4, 4, rows).unwrap()
            })
            .collect();
        j.unit = j.index(&[1, 0, 0, 1]);
        j
    }

    pub fn base(&self) -> &FiniteField {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn q(&self, a: usize) -> &Matrix {
        &self.q_table[a]
    }

    pub fn q_table(&self) -> &[Matrix] {
        &self.q_table
    }

    pub fn coords(&self, mut a: usize) -> Vec<u32> {
        let q = self.base.order() as usize;
        (0..self.dim)
            .map(|_| {
                let c = a % q;
                a /= q;
                c as u32
            })
            .collect()
    }

    pub fn index(&self, c: &[u32]) -> usize {
        let q = self.base.order() as usize;
        c.iter().rev().fold(0, |acc, &x| acc * q + x as usize)
    }

    fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.coords(a), self.coords(b));
        self.index(&x.iter().zip(&y).map(|(&s, &t)| self.base.add(s, t)).collect::<Vec<_>>())
    }

    fn scale(&self, r: u32, a: usize) -> usize {
        self.index(&self.coords(a).iter().map(|&x| self.base.mul(r, x)).collect::<Vec<_>>())
    }

    /// `x Q_a`.
    pub fn apply_q(&self, a: usize, x: usize) -> usize {
        self.index(&self.q_table[a].apply(&self.coords(x), &self.base))
    }

    /// `Q_{a,b} = Q_{a+b} - Q_a - Q_b`.
    pub fn q2(&self, a: usize, b: usize) -> Matrix {
        let f = &self.base;
        self.q_table[self.add(a, b)].sub(&self.q_table[a], f).sub(&self.q_table[b], f)
    }

    fn unit_vector(&self, i: usize) -> usize {
        (self.base.order() as usize).pow(i as u32)
    }

    /// Matrix of `c ↦ b Q_{a,c}`.
    pub fn v_operator(&self, a: usize, b: usize) -> Matrix {
        let bc = self.coords(b);
        let rows: Vec<u32> = (0..self.dim).flat_map(|i| self.q2(a, self.unit_vector(i)).apply(&bc, &self.base)).collect();
        Matrix::from_rows(self.dim, self.dim, rows).unwrap()
    }

    /// Exhaustive check of quadraticity and QJ1–QJ3.
    ///
    /// Quadraticity is tested as `Q_{ra} = r²Q_a` for all `r, a` together
    /// with `Q_a = Σ a_i² Q_{e_i} + Σ_{i<j} a_i a_j Q_{e_i,e_j}` for all `a`,
    /// which holds exactly when `Q_{a,b}` is bilinear.
    pub fn check_axioms(&self, cap: usize) -> Result<AxiomReport, JordanError> {
        if self.size > cap {
            return Err(JordanError::CapExceeded { size: self.size, cap });
        }
        let f = &self.base;
        let mut witnesses = Vec::new();

        let mut quadratic = true;
        'homog: for a in 0..self.size {
            for r in f.elements() {
                let lhs = &self.q_table[self.scale(r, a)];
                if *lhs != self.q_table[a].scale(f.mul(r, r), f) {
                    witnesses.push(AxiomWitness { axiom: "quadratic", elements: vec![a, r as usize] });
                    quadratic = false;
                    break 'homog;
                }
            }
        }
        if quadratic {
            let units: Vec<usize> = (0..self.dim).map(|i| self.unit_vector(i)).collect();
            let cross: Vec<Vec<Matrix>> =
                (0..self.dim).map(|i| (0..self.dim).map(|j| self.q2(units[i], units[j])).collect()).collect();
            for a in 0..self.size {
                let c = self.coords(a);
                let mut m = Matrix::zeros(self.dim, self.dim);
                for i in 0..self.dim {
                    m = m.add(&self.q_table[units[i]].scale(f.mul(c[i], c[i]), f), f);
                    for j in i + 1..self.dim {
                        m = m.add(&cross[i][j].scale(f.mul(c[i], c[j]), f), f);
                    }
                }
                if m != self.q_table[a] {
                    witnesses.push(AxiomWitness { axiom: "quadratic", elements: vec![a] });
                    quadratic = false;
                    break;
                }
            }
        }

        let qj1 = self.q_table[self.unit] == Matrix::identity(self.dim);
        if !qj1 {
            witnesses.push(AxiomWitness { axiom: "qj1", elements: vec![self.unit] });
        }

        let mut qj2 = true;
        let mut qj3 = true;
        for a in 0..self.size {
            let qa = &self.q_table[a];
            for b in 0..self.size {
                if qj2 && qa.mul(&self.v_operator(a, b), f) != self.v_operator(b, a).mul(qa, f) {
                    witnesses.push(AxiomWitness { axiom: "qj2", elements: vec![a, b] });
                    qj2 = false;
                }
                if qj3 {
                    let qb = &self.q_table[b];
                    if self.q_table[self.apply_q(b, a)] != qb.mul(qa, f).mul(qb, f) {
                        witnesses.push(AxiomWitness { axiom: "qj3", elements: vec![a, b] });
                        qj3 = false;
                    }
                }
            }
        }
        Ok(AxiomReport { quadratic, qj1, qj2, qj3, witnesses })
    }

    pub fn is_division(&self) -> bool {
        (1..self.size).all(|a| self.q_table[a].is_invertible(&self.base))
    }

    /// `a Q_a⁻¹`.
    pub fn jordan_inverse(&self, a: usize) -> Result<usize, JordanError> {
        if a >= self.size {
            return Err(JordanError::OutOfRange(a));
        }
        let inv = self.q_table[a].inverse(&self.base).ok_or(JordanError::SingularQ(a))?;
        Ok(self.index(&inv.apply(&self.coords(a), &self.base)))
    }

    pub fn root_group(&self) -> RootGroup {
        RootGroup::new(self.base.p(), self.dim * self.base.degree() as usize).expect("carrier fits")
    }

    /// Builds `M(J)` with `aτ = -a⁻¹` and checks that it is a Moufang set
    /// with `τ = μ_e` and `h_a = Q_a`.
    pub fn moufang_set(&self) -> Result<MoufangSet, JordanError> {
        if !self.is_division() {
            return Err(JordanError::NotDivision);
        }
        let root = self.root_group();
        let taus: Vec<u32> = (1..self.size)
            .map(|a| self.jordan_inverse(a).map(|x| root.neg(x) as u32))
            .collect::<Result<_, _>>()?;
        let m = MoufangSet::build(root, &taus, self.unit)?;
        if let Some((a, b, c)) = m.check_moufang_criterion().witness {
            return Err(MoufangError::NotMoufang { a, b, c }.into());
        }
        if !m.tau_is_mu_e() {
            return Err(MoufangError::JordanMismatch("tau != mu_e".into()).into());
        }
        for a in 1..self.size {
            if let Some(x) = (0..self.size).find(|&x| m.h(a, x) != self.apply_q(a, x)) {
                return Err(MoufangError::JordanMismatch(format!("h_{a} != Q_{a} at {x}")).into());
            }
        }
        Ok(m)
    }

    /// Zassenhaus property of `M(J)` (`H ≠ 1` acting freely on `U^#`) and
    /// pairwise commutativity of the `Q_a`.
    pub fn check_q_commutativity(&self) -> Result<QCommutativity, JordanError> {
        let m = self.moufang_set()?;
        let h = m.hua_subgroup(false).map_err(JordanError::Moufang)?;
        let els = h.group.elements().map_err(|e| JordanError::Moufang(e.into()))?;
        let free = els.iter().all(|g| g.is_identity() || (1..self.size).all(|x| g.image(x) != x));
        let f = &self.base;
        let commutes = (0..self.size).all(|a| {
            (0..self.size).all(|b| self.q_table[a].mul(&self.q_table[b], f) == self.q_table[b].mul(&self.q_table[a], f))
        });
        Ok(QCommutativity { hua_order: els.len(), zassenhaus: els.len() > 1 && free, commutes })
    }

    /// Reads the text table format:
    ///
    /// ```text
    /// p f
    /// c_0 c_1 … c_f        # modulus, lowest degree first
    /// d e                  # dimension and unit index
    /// <q^d lines of d² field indices, Q_a row-major, in index order>
    /// ```
    ///
    /// `#` starts a comment; blank lines are ignored.
    pub fn parse_text(text: &str) -> Result<Self, JordanError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let mut next = |what: &str| -> Result<(usize, Vec<u64>), JordanError> {
            let (line, l) = lines.next().ok_or(JordanError::Parse { line: 0, message: format!("missing {what}") })?;
            let nums = l
                .split_whitespace()
                .map(|t| t.parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| JordanError::Parse { line, message: format!("{what}: {e}") })?;
            Ok((line, nums))
        };
        let expect_len = |line: usize, nums: &[u64], n: usize, what: &str| {
            if nums.len() == n {
                Ok(())
            } else {
                Err(JordanError::Parse { line, message: format!("{what}: expected {n} numbers, found {}", nums.len()) })
            }
        };
        let (line, pf) = next("field header")?;
        expect_len(line, &pf, 2, "field header")?;
        let (line, modulus) = next("modulus")?;
        expect_len(line, &modulus, pf[1] as usize + 1, "modulus")?;
        let modulus: Vec<u32> = modulus.iter().map(|&c| c as u32).collect();
        let base = FiniteField::new(pf[0] as u32, pf[1] as u32, Some(&modulus))
            .map_err(|e| JordanError::Parse { line, message: e.to_string() })?;
        let (line, de) = next("dimension header")?;
        expect_len(line, &de, 2, "dimension header")?;
        let (dim, unit) = (de[0] as usize, de[1] as usize);
        let size = (base.order() as usize)
            .checked_pow(dim as u32)
            .filter(|&s| s <= 1 << 16)
            .ok_or(JordanError::Parse { line, message: "carrier too large".into() })?;
        let mut table = Vec::with_capacity(size);
        for a in 0..size {
            let (line, nums) = next(&format!("Q row {a}"))?;
            expect_len(line, &nums, dim * dim, "Q row")?;
            if let Some(&bad) = nums.iter().find(|&&x| x >= base.order() as u64) {
                return Err(JordanError::Parse { line, message: format!("{bad} is not a field index") });
            }
            table.push(Matrix::from_rows(dim, dim, nums.iter().map(|&x| x as u32).collect()).unwrap());
        }
        if let Ok((line, _)) = next("end") {
            return Err(JordanError::Parse { line, message: "trailing data".into() });
        }
        Self::from_table(base, dim, unit, table).map_err(|e| JordanError::Parse { line: 0, message: e.to_string() })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.base.p(), self.base.degree());
        s += &self.base.modulus().iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
        s += &format!("\n{} {}\n", self.dim, self.unit);
        for m in &self.q_table {
            s += &m.data().iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
            s.push('\n');
        }
        s
    }
}

impl MoufangSet {
    /// `M(J)`; see [`QuadraticJordan::moufang_set`].
    pub fn from_jordan(j: &QuadraticJordan) -> Result<Self, JordanError> {
        j.moufang_set()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: u32) -> FiniteField {
        FiniteField::of_order(q).unwrap()
    }

    #[test]
    fn field_jordan_examples() {
        let j5 = QuadraticJordan::field_jordan(&field(5));
        assert_eq!(j5.q(2).data(), &[4]);
        let j2 = QuadraticJordan::field_jordan(&field(2));
        assert_eq!(j2.q(1), &Matrix::identity(1));
        let f9 = field(9);
        let t = f9.p();
        let j9 = QuadraticJordan::field_jordan(&f9);
        assert_eq!(j9.q(t as usize).data(), &[f9.mul(t, t)]);
    }

    #[test]
    fn axioms_hold_for_fields() {
        for q in [2u32, 3, 4, 5, 7, 8, 9] {
            let r = QuadraticJordan::field_jordan(&field(q)).check_axioms(DEFAULT_AXIOM_CAP).unwrap();
            assert!(r.all_pass(), "q={q}: {:?}", r.witnesses);
        }
    }

    #[test]
    fn matrix_jordan_is_a_non_division_control() {
        let j = QuadraticJordan::matrix_jordan(&field(2));
        assert_eq!(j.q(j.unit()), &Matrix::identity(4));
        let r = j.check_axioms(DEFAULT_AXIOM_CAP).unwrap();
        assert!(r.all_pass(), "{:?}", r.witnesses);
        assert!(!j.is_division());
        let diag = j.index(&[1, 0, 0, 0]);
        assert!(!j.q(diag).is_invertible(j.base()));
        assert!(matches!(j.check_q_commutativity(), Err(JordanError::NotDivision)));
    }

    #[test]
    fn corrupted_table_fails_quadraticity() {
        let f = field(5);
        let mut table = QuadraticJordan::field_jordan(&f).q_table().to_vec();
        table[3] = Matrix::from_rows(1, 1, vec![1]).unwrap();
        let j = QuadraticJordan::from_table(f, 1, 1, table).unwrap();
        let r = j.check_axioms(DEFAULT_AXIOM_CAP).unwrap();
        assert!(!r.quadratic);
        assert_eq!(r.witnesses[0].axiom, "quadratic");
        assert!(matches!(j.check_axioms(2), Err(JordanError::CapExceeded { .. })));
    }

    #[test]
    fn division_and_inverse() {
        assert!(QuadraticJordan::field_jordan(&field(7)).is_division());
        assert!(QuadraticJordan::field_jordan(&field(2)).is_division());
        let j5 = QuadraticJordan::field_jordan(&field(5));
        assert_eq!(j5.jordan_inverse(2).unwrap(), 3);
        assert_eq!(j5.jordan_inverse(1).unwrap(), 1);
        for q in [2u32, 3, 4, 5, 7, 8, 9] {
            let f = field(q);
            let j = QuadraticJordan::field_jordan(&f);
            for a in 1..q as usize {
                let inv = j.jordan_inverse(a).unwrap();
                assert_eq!(inv, f.inv(a as u32).unwrap() as usize);
                assert_eq!(j.jordan_inverse(inv).unwrap(), a);
            }
        }
    }

    #[test]
    fn matrix_jordan_inverse_is_matrix_inverse() {
        let f = field(3);
        let j = QuadraticJordan::matrix_jordan(&f);
        for a in 0..j.size() {
            let c = j.coords(a);
            let m = Matrix::from_rows(2, 2, c.clone()).unwrap();
            if let Some(inv) = m.inverse(&f) {
                assert_eq!(j.jordan_inverse(a).unwrap(), j.index(inv.data()));
            } else {
                assert!(matches!(j.jordan_inverse(a), Err(JordanError::SingularQ(_))));
            }
        }
    }

    #[test]
    fn matrix_jordan_qj3_spot_checks() {
        use rand::{Rng, SeedableRng};
        let f = field(3);
        let j = QuadraticJordan::matrix_jordan(&f);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mat = |i: usize| Matrix::from_rows(2, 2, j.coords(i)).unwrap();
        for _ in 0..200 {
            let (a, b) = (rng.gen_range(0..j.size()), rng.gen_range(0..j.size()));
            // oracle: (b a b) x (b a b) = b (a (b x b) a) b
            let bab = mat(b).mul(&mat(a), &f).mul(&mat(b), &f);
            assert_eq!(j.apply_q(b, a), j.index(bab.data()));
            let x = rng.gen_range(0..j.size());
            let lhs = bab.mul(&mat(x), &f).mul(&bab, &f);
            let rhs = j.apply_q(b, j.apply_q(a, j.apply_q(b, x)));
            assert_eq!(j.index(lhs.data()), rhs);
        }
    }

    #[test]
    fn v_operator_examples() {
        let f = field(5);
        let j = QuadraticJordan::field_jordan(&f);
        for a in 0..5u32 {
            for b in 0..5u32 {
                let v = j.v_operator(a as usize, b as usize);
                assert_eq!(v.data(), &[f.mul(2, f.mul(a, b))]);
            }
        }
        assert!(j.v_operator(0, 3).is_zero());
    }

    #[test]
    fn q_commutativity_examples() {
        let r5 = QuadraticJordan::field_jordan(&field(5)).check_q_commutativity().unwrap();
        assert_eq!(r5, QCommutativity { hua_order: 2, zassenhaus: true, commutes: true });
        let r3 = QuadraticJordan::field_jordan(&field(3)).check_q_commutativity().unwrap();
        assert_eq!(r3, QCommutativity { hua_order: 1, zassenhaus: false, commutes: true });
        let r9 = QuadraticJordan::field_jordan(&field(9)).check_q_commutativity().unwrap();
        assert_eq!(r9, QCommutativity { hua_order: 4, zassenhaus: true, commutes: true });
    }

    #[test]
    fn moufang_set_of_field_jordan() {
        for q in [2u32, 3, 4, 5, 7, 8, 9] {
            let f = field(q);
            let m = QuadraticJordan::field_jordan(&f).moufang_set().unwrap();
            assert!(m.is_special());
            for a in 1..q {
                for x in 0..q {
                    assert_eq!(m.h(a as usize, x as usize), f.mul(f.mul(a, a), x) as usize);
                }
            }
        }
    }

    #[test]
    fn text_round_trip_and_errors() {
        let j = QuadraticJordan::field_jordan(&field(9));
        let back = QuadraticJordan::parse_text(&j.to_text()).unwrap();
        assert_eq!(back.q_table(), j.q_table());
        let bad = "3 2\n1 0 1\n1 1\n0\n1\nx\n";
        match QuadraticJordan::parse_text(bad) {
            Err(JordanError::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("{other:?}"),
        }
        let short = "5 1 # field\n0 1\n1 1\n0\n1\n";
        match QuadraticJordan::parse_text(short) {
            Err(JordanError::Parse { message, .. }) => assert!(message.contains("missing")),
            other => panic!("{other:?}"),
        }
    }
}
