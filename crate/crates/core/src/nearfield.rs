//! Finite (right) nearfields: `(a + b)·c = a·c + b·c`.
//!
//! The additive group is that of a finite field `F`; multiplication is an
//! explicit `q×q` table. Dickson nearfields come from a coupling
//! `φ: F* → Aut(F)` via `a·b = a^{φ(b)} b`. Affine maps are
//! `x ↦ x·a + b`, the form that composes correctly under right
//! distributivity.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldError, FiniteField};
use crate::moufang::{MoufangError, MoufangSet, RootGroup};
use crate::permgroup::{PermError, PermGroup, Permutation, TransitivityReport};

#[derive(Debug, Error)]
pub enum NearfieldError {
    #[error("not a coupling: identity fails at ({a}, {b})")]
    NotACoupling { a: u32, b: u32 },
    #[error("coupling table has {found} entries, expected {expected}")]
    CouplingShape { expected: usize, found: usize },
    #[error("Dickson pair ({q0}, {n}) does not fit this field")]
    BadDicksonPair { q0: u32, n: u32 },
    #[error("the quadratic-character coupling needs a square order, got {q}")]
    NotASquareOrder { q: u32 },
    #[error("nearfield axiom {axiom} fails at {witness:?}")]
    AxiomFailure { axiom: &'static str, witness: Vec<u32> },
    #[error("coupling is not inversion symmetric at {a}")]
    CouplingNotInversionSymmetric { a: u32 },
    #[error("nearfield is not a Dickson nearfield")]
    NotDickson,
    #[error("sigma is not a multiplicative automorphism at ({a}, {b})")]
    NotMultiplicativeAutomorphism { a: u32, b: u32 },
    #[error("sigma is not an involution at {a}")]
    NotInvolution { a: u32 },
    #[error("(F, sigma) is not a KT-nearfield: identity fails at {a}")]
    NotKt { a: u32 },
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Moufang(#[from] MoufangError),
}

/// Frobenius exponents `k` (for `x ↦ x^{p^k}`), indexed by `a - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coupling {
    exponents: Vec<u32>,
}

impl Coupling {
    pub fn new(f: &FiniteField, exponents: Vec<u32>) -> Result<Self, NearfieldError> {
        let expected = f.order() as usize - 1;
        if exponents.len() != expected {
            return Err(NearfieldError::CouplingShape { expected, found: exponents.len() });
        }
        Ok(Coupling { exponents: exponents.into_iter().map(|k| k % f.degree()).collect() })
    }

    pub fn trivial(f: &FiniteField) -> Self {
        Coupling { exponents: vec![0; f.order() as usize - 1] }
    }

    pub fn constant(f: &FiniteField, k: u32) -> Self {
        Coupling { exponents: vec![k % f.degree(); f.order() as usize - 1] }
    }

    /// `φ(g^j) = (x ↦ x^{q0})^{j mod n}` for `q = q0^n`, `n | q0 - 1`.
    pub fn dickson(f: &FiniteField, q0: u32, n: u32) -> Result<Self, NearfieldError> {
        let bad = NearfieldError::BadDicksonPair { q0, n };
        if n == 0 || q0 < 2 || (q0 as u64).checked_pow(n) != Some(f.order() as u64) {
            return Err(bad);
        }
        if n > 1 && !(q0 - 1).is_multiple_of(n) {
            return Err(bad);
        }
        let k0 = f.degree() / n;
        let exponents = f.nonzero().map(|a| ((f.log(a).unwrap() % n as u64) as u32 * k0) % f.degree()).collect();
        Ok(Coupling { exponents })
    }

    /// Identity on squares, `x ↦ x^{√q}` on non-squares (the pair `(√q, 2)`).
    pub fn quadratic_character(f: &FiniteField) -> Result<Self, NearfieldError> {
        if !f.degree().is_multiple_of(2) {
            return Err(NearfieldError::NotASquareOrder { q: f.order() });
        }
        let exponents = f.nonzero().map(|a| if f.is_square(a) { 0 } else { f.degree() / 2 }).collect();
        Ok(Coupling { exponents })
    }

    pub fn exponent(&self, a: u32) -> u32 {
        self.exponents[a as usize - 1]
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// `φ(a^{φ(b)} b) = φ(a)φ(b)`; returns a failing pair.
    pub fn check(&self, f: &FiniteField) -> Option<(u32, u32)> {
        for a in f.nonzero() {
            for b in f.nonzero() {
                let ab = f.mul(f.frobenius_apply(a, self.exponent(b)), b);
                if self.exponent(ab) != (self.exponent(a) + self.exponent(b)) % f.degree() {
                    return Some((a, b));
                }
            }
        }
        None
    }
}

#[derive(Clone, Debug)]
pub struct Nearfield {
    base: FiniteField,
    mul: Vec<u32>,
    one: u32,
    coupling: Option<Coupling>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KtReport {
    pub is_kt: bool,
    pub witness: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct T3 {
    pub group: PermGroup,
    pub tau: Permutation,
    pub affine: PermGroup,
    pub report: TransitivityReport,
    pub sharply_3_transitive: bool,
    pub stabilizer_is_affine: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HuaPseudoSquareReport {
    pub holds: bool,
    /// `(a, x)` with `x h_a ≠ x·q_a`.
    pub witness: Option<(u32, u32)>,
    pub special: bool,
    pub pairs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KSigmaReport {
    pub set: Vec<u32>,
    pub is_commutative_subfield: bool,
    pub squares_central: bool,
    pub sigma_is_inversion_on_it: bool,
    /// `None` in characteristic 2, where no equality is claimed.
    pub equals_kernel_when_odd_char: Option<bool>,
}

impl KSigmaReport {
    pub fn all_hold(&self) -> bool {
        self.is_commutative_subfield
            && self.squares_central
            && self.sigma_is_inversion_on_it
            && self.equals_kernel_when_odd_char != Some(false)
    }
}

/// A permutation of `F` fixing `0`, stored as a full table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sigma {
    table: Vec<u32>,
}

impl Sigma {
    pub fn from_table(table: Vec<u32>) -> Self {
        Sigma { table }
    }

    pub fn identity(f: &FiniteField) -> Self {
        Sigma { table: f.elements().collect() }
    }

    pub fn field_inversion(f: &FiniteField) -> Self {
        Sigma { table: f.elements().map(|a| if a == 0 { 0 } else { f.inv(a).unwrap() }).collect() }
    }

    #[inline]
    pub fn apply(&self, a: u32) -> u32 {
        self.table[a as usize]
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }
}

impl Nearfield {
    pub fn dickson(f: &FiniteField, coupling: Coupling) -> Result<Self, NearfieldError> {
        if coupling.exponents.len() != f.order() as usize - 1 {
            return Err(NearfieldError::CouplingShape { expected: f.order() as usize - 1, found: coupling.exponents.len() });
        }
        if let Some((a, b)) = coupling.check(f) {
            return Err(NearfieldError::NotACoupling { a, b });
        }
        let q = f.order();
        let mut mul = Vec::with_capacity((q * q) as usize);
        for a in 0..q {
            for b in 0..q {
                mul.push(if b == 0 { 0 } else { f.mul(f.frobenius_apply(a, coupling.exponent(b)), b) });
            }
        }
        let n = Nearfield { base: f.clone(), mul, one: 1, coupling: Some(coupling) };
        n.verify_axioms()?;
        Ok(n)
    }

    pub fn field(f: &FiniteField) -> Self {
        Self::dickson(f, Coupling::trivial(f)).expect("fields are nearfields")
    }

    /// A nearfield given by its multiplication table on the additive group of `base`.
    pub fn from_table(base: &FiniteField, mul: Vec<u32>) -> Result<Self, NearfieldError> {
        let q = base.order();
        if mul.len() != (q * q) as usize || mul.iter().any(|&x| x >= q) {
            return Err(NearfieldError::AxiomFailure { axiom: "table shape", witness: vec![] });
        }
        let one = (1..q)
            .find(|&u| (0..q).all(|x| mul[(u * q + x) as usize] == x && mul[(x * q + u) as usize] == x))
            .ok_or(NearfieldError::AxiomFailure { axiom: "unit", witness: vec![] })?;
        let n = Nearfield { base: base.clone(), mul, one, coupling: None };
        n.verify_axioms()?;
        Ok(n)
    }

    fn verify_axioms(&self) -> Result<(), NearfieldError> {
        let f = &self.base;
        let fail = |axiom, witness: Vec<u32>| Err(NearfieldError::AxiomFailure { axiom, witness });
        for a in f.elements() {
            if self.mul(a, 0) != 0 {
                return fail("a·0 = 0", vec![a]);
            }
            for b in f.nonzero() {
                if a != 0 && self.mul(a, b) == 0 {
                    return fail("closure of F*", vec![a, b]);
                }
                for c in f.elements() {
                    if self.mul(f.add(a, b), c) != f.add(self.mul(a, c), self.mul(b, c)) {
                        return fail("right distributivity", vec![a, b, c]);
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return fail("associativity", vec![a, b, c]);
                    }
                }
            }
            if a != 0 && !f.nonzero().any(|b| self.mul(a, b) == self.one) {
                return fail("inverse", vec![a]);
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &FiniteField {
        &self.base
    }

    pub fn order(&self) -> u32 {
        self.base.order()
    }

    pub fn one(&self) -> u32 {
        self.one
    }

    pub fn coupling(&self) -> Option<&Coupling> {
        self.coupling.as_ref()
    }

    pub fn mul_table(&self) -> &[u32] {
        &self.mul
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.order() + b) as usize]
    }

    /// Nearfield inverse.
    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.base.nonzero().find(|&b| self.mul(a, b) == self.one).expect("verified"))
    }

    pub fn kernel(&self) -> Result<Vec<u32>, NearfieldError> {
        let f = &self.base;
        let k: Vec<u32> = f
            .elements()
            .filter(|&a| {
                f.elements().all(|b| f.elements().all(|c| self.mul(a, f.add(b, c)) == f.add(self.mul(a, b), self.mul(a, c))))
            })
            .collect();
        self.require_subskewfield(&k, "kernel is a skewfield")?;
        Ok(k)
    }

    pub fn center(&self) -> Result<Vec<u32>, NearfieldError> {
        let f = &self.base;
        let z: Vec<u32> = f.elements().filter(|&a| f.elements().all(|b| self.mul(a, b) == self.mul(b, a))).collect();
        for &a in &z {
            for &b in &z {
                if !z.contains(&self.mul(a, b)) {
                    return Err(NearfieldError::AxiomFailure { axiom: "centre closed under ·", witness: vec![a, b] });
                }
            }
        }
        Ok(z)
    }

    fn is_subskewfield(&self, s: &[u32]) -> bool {
        let f = &self.base;
        s.contains(&0)
            && s.contains(&self.one)
            && s.iter().all(|&a| {
                s.contains(&f.neg(a))
                    && (a == 0 || s.contains(&self.inv(a).unwrap()))
                    && s.iter().all(|&b| s.contains(&f.add(a, b)) && s.contains(&self.mul(a, b)))
            })
    }

    fn require_subskewfield(&self, s: &[u32], axiom: &'static str) -> Result<(), NearfieldError> {
        if self.is_subskewfield(s) {
            Ok(())
        } else {
            Err(NearfieldError::AxiomFailure { axiom, witness: s.to_vec() })
        }
    }

    /// Field inversion as a KT-automorphism of a Dickson nearfield whose
    /// coupling satisfies `φ(a) = φ(a⁻¹)`.
    pub fn make_kt_sigma(&self) -> Result<Sigma, NearfieldError> {
        let coupling = self.coupling.as_ref().ok_or(NearfieldError::NotDickson)?;
        let f = &self.base;
        if let Some(a) = f.nonzero().find(|&a| coupling.exponent(a) != coupling.exponent(f.inv(a).unwrap())) {
            return Err(NearfieldError::CouplingNotInversionSymmetric { a });
        }
        let sigma = Sigma::field_inversion(f);
        self.check_multiplicative_involution(&sigma)?;
        Ok(sigma)
    }

    fn check_multiplicative_involution(&self, sigma: &Sigma) -> Result<(), NearfieldError> {
        let f = &self.base;
        let mut seen = vec![false; f.order() as usize];
        for a in f.nonzero() {
            let s = sigma.apply(a);
            if s == 0 || seen[s as usize] || sigma.apply(s) != a {
                return Err(NearfieldError::NotInvolution { a });
            }
            seen[s as usize] = true;
        }
        for a in f.nonzero() {
            for b in f.nonzero() {
                if sigma.apply(self.mul(a, b)) != self.mul(sigma.apply(a), sigma.apply(b)) {
                    return Err(NearfieldError::NotMultiplicativeAutomorphism { a, b });
                }
            }
        }
        Ok(())
    }

    /// `(1 + a^σ)^σ = 1 - (1 + a)^σ` for `a ∈ F* ∖ {-1}`.
    pub fn check_kt(&self, sigma: &Sigma) -> Result<KtReport, NearfieldError> {
        self.check_multiplicative_involution(sigma)?;
        let f = &self.base;
        let minus_one = f.neg(self.one);
        for a in f.nonzero().filter(|&a| a != minus_one) {
            let inner = f.add(self.one, sigma.apply(a));
            let ok = inner != 0 && sigma.apply(inner) == f.sub(self.one, sigma.apply(f.add(self.one, a)));
            if !ok {
                return Ok(KtReport { is_kt: false, witness: Some(a) });
            }
        }
        Ok(KtReport { is_kt: true, witness: None })
    }

    fn require_kt(&self, sigma: &Sigma) -> Result<(), NearfieldError> {
        match self.check_kt(sigma)?.witness {
            Some(a) => Err(NearfieldError::NotKt { a }),
            None => Ok(()),
        }
    }

    /// `q_a = (a^σ)⁻¹·a` with the nearfield inverse.
    pub fn pseudo_square(&self, sigma: &Sigma, a: u32) -> Result<u32, NearfieldError> {
        if a == 0 {
            return Err(NearfieldError::ZeroArgument);
        }
        Ok(self.mul(self.inv(sigma.apply(a)).ok_or(NearfieldError::ZeroArgument)?, a))
    }

    fn affine_generators(&self) -> Vec<Permutation> {
        let f = &self.base;
        let q = f.order() as usize;
        let mut gens: Vec<Permutation> = (0..f.degree())
            .map(|i| Permutation::from_fn(q, |x| f.add(x as u32, f.p().pow(i)) as usize).unwrap())
            .collect();
        for a in f.nonzero().filter(|&a| a != self.one) {
            gens.push(Permutation::from_fn(q, |x| self.mul(x as u32, a) as usize).unwrap());
        }
        gens
    }

    /// `Aff(F) = {x ↦ x·a + b}` on the `q` points of `F`.
    pub fn affine_group(&self) -> Result<PermGroup, NearfieldError> {
        Ok(PermGroup::closure(self.order() as usize, self.affine_generators(), crate::moufang::cap_from_env())?)
    }

    /// `τ` on `X = F ∪ {∞}`: `0 ↔ ∞`, `x ↦ -x^σ`.
    pub fn t3_tau(&self, sigma: &Sigma) -> Permutation {
        let f = &self.base;
        let q = f.order() as usize;
        Permutation::from_fn(q + 1, |x| match x {
            0 => q,
            x if x == q => 0,
            x => f.neg(sigma.apply(x as u32)) as usize,
        })
        .expect("sigma permutes F*")
    }

    /// `T₃(F) = ⟨τ, Aff(F)⟩` on `q + 1` points with `∞ = q`.
    pub fn t3_group(&self, sigma: &Sigma) -> Result<T3, NearfieldError> {
        self.require_kt(sigma)?;
        let q = self.order() as usize;
        let tau = self.t3_tau(sigma);
        let lift = |g: &Permutation| {
            let mut v = g.images().to_vec();
            v.push(q as u32);
            Permutation::new(v).expect("extension fixing infinity")
        };
        let aff_gens = self.affine_generators();
        let mut gens: Vec<Permutation> = aff_gens.iter().map(lift).collect();
        gens.push(tau.clone());
        let group = PermGroup::closure(q + 1, gens, crate::moufang::cap_from_env())?;
        let affine = PermGroup::closure(q + 1, aff_gens.iter().map(lift).collect(), crate::moufang::cap_from_env())?;
        let report = group.transitivity_report()?;
        let sharply_3_transitive = report.is_sharply(3);
        let stabilizer_is_affine = group.point_stabilizer(&[q])?.same_elements(&affine)?;
        Ok(T3 { group, tau, affine, report, sharply_3_transitive, stabilizer_is_affine })
    }

    /// `M(F, τ)` with `τ: x ↦ -x^σ` and `e = 1`.
    pub fn kt_moufang_set(&self, sigma: &Sigma) -> Result<MoufangSet, NearfieldError> {
        let f = &self.base;
        let root = RootGroup::of_field(f);
        Ok(MoufangSet::from_fn(root, |x| f.neg(sigma.apply(x as u32)) as usize, self.one as usize)?)
    }

    /// Compares the Hua maps of `M(F, τ)` with `x ↦ x·q_a` on all of `F × F*`.
    pub fn check_hua_pseudosquare(&self, sigma: &Sigma) -> Result<HuaPseudoSquareReport, NearfieldError> {
        self.require_kt(sigma)?;
        let m = self.kt_moufang_set(sigma)?;
        let f = &self.base;
        let mut witness = None;
        let mut pairs = 0;
        'outer: for a in f.nonzero() {
            let qa = self.pseudo_square(sigma, a)?;
            let h = m.hua_map(a as usize)?;
            for x in f.elements() {
                pairs += 1;
                if h[x as usize] != self.mul(x, qa) {
                    witness = Some((a, x));
                    break 'outer;
                }
            }
        }
        Ok(HuaPseudoSquareReport { holds: witness.is_none(), witness, special: m.is_special(), pairs })
    }

    /// `k_σ = (k ∩ (k*)^σ) ∪ {0}` and its claimed properties.
    pub fn k_sigma_report(&self, sigma: &Sigma) -> Result<KSigmaReport, NearfieldError> {
        let f = &self.base;
        let kernel = self.kernel()?;
        let center = self.center()?;
        let image: Vec<u32> = kernel.iter().filter(|&&a| a != 0).map(|&a| sigma.apply(a)).collect();
        let set: Vec<u32> = f.elements().filter(|&a| a == 0 || (kernel.contains(&a) && image.contains(&a))).collect();
        let commutative = set.iter().all(|&a| set.iter().all(|&b| self.mul(a, b) == self.mul(b, a)));
        let squares_central = set.iter().all(|&x| center.contains(&self.mul(x, x)));
        let sigma_is_inversion_on_it = set.iter().filter(|&&x| x != 0).all(|&x| Some(sigma.apply(x)) == self.inv(x));
        let equals_kernel_when_odd_char = (f.p() != 2).then(|| set == kernel);
        Ok(KSigmaReport {
            is_commutative_subfield: commutative && self.is_subskewfield(&set),
            set,
            squares_central,
            sigma_is_inversion_on_it,
            equals_kernel_when_odd_char,
        })
    }
}

/// Ingest format: JSON `{"p","f","modulus"?, "phi"? | "mul"?, "sigma"?}`, or a
/// text table (`p f`, modulus line, then `q` rows of `q` product indices).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NearfieldSpec {
    pub p: u32,
    pub f: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mul: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<u32>>,
}

impl NearfieldSpec {
    pub fn parse(text: &str) -> Result<Self, NearfieldError> {
        if text.trim_start().starts_with('{') {
            return serde_json::from_str(text).map_err(|e| NearfieldError::Parse { line: e.line(), message: e.to_string() });
        }
        let mut rows = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let l = raw.split('#').next().unwrap_or("").trim();
            if l.is_empty() {
                continue;
            }
            let nums = l
                .split_whitespace()
                .map(str::parse::<u32>)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| NearfieldError::Parse { line: i + 1, message: e.to_string() })?;
            rows.push((i + 1, nums));
        }
        let err = |line, message: String| NearfieldError::Parse { line, message };
        let (line, head) = rows.first().cloned().ok_or(err(0, "empty input".into()))?;
        if head.len() != 2 {
            return Err(err(line, "expected `p f`".into()));
        }
        let (p, f) = (head[0], head[1]);
        let (line, modulus) = rows.get(1).cloned().ok_or(err(line, "missing modulus".into()))?;
        if modulus.len() != f as usize + 1 {
            return Err(err(line, format!("modulus needs {} coefficients", f + 1)));
        }
        let q = (p as u64).checked_pow(f).filter(|&q| q <= 1 << 12).ok_or(err(line, "order too large".into()))? as usize;
        let body = &rows[2..];
        if body.len() != q {
            let line = body.last().map_or(line, |r| r.0);
            return Err(err(line, format!("expected {q} table rows, found {}", body.len())));
        }
        let mut mul = Vec::with_capacity(q);
        for (line, r) in body {
            if r.len() != q {
                return Err(err(*line, format!("expected {q} entries, found {}", r.len())));
            }
            mul.push(r.clone());
        }
        Ok(NearfieldSpec { p, f, modulus: Some(modulus), phi: None, mul: Some(mul), sigma: None })
    }

    pub fn build(&self) -> Result<(Nearfield, Option<Sigma>), NearfieldError> {
        let field = FiniteField::new(self.p, self.f, self.modulus.as_deref())?;
        let n = match (&self.phi, &self.mul) {
            (Some(phi), None) => Nearfield::dickson(&field, Coupling::new(&field, phi.clone())?)?,
            (None, Some(rows)) => Nearfield::from_table(&field, rows.concat())?,
            (None, None) => Nearfield::field(&field),
            (Some(_), Some(_)) => {
                return Err(NearfieldError::Parse { line: 0, message: "give either phi or mul, not both".into() })
            }
        };
        let sigma = match &self.sigma {
            Some(t) if t.len() == field.order() as usize => Some(Sigma::from_table(t.clone())),
            Some(t) if t.len() + 1 == field.order() as usize => {
                Some(Sigma::from_table(std::iter::once(0).chain(t.iter().copied()).collect()))
            }
            Some(_) => return Err(NearfieldError::Parse { line: 0, message: "sigma has the wrong length".into() }),
            // tables carry no coupling; field inversion is the natural candidate
            None => n.make_kt_sigma().ok().or_else(|| {
                let s = Sigma::field_inversion(&field);
                n.check_kt(&s).is_ok_and(|r| r.is_kt).then_some(s)
            }),
        };
        if let Some(s) = &sigma {
            if s.apply(0) != 0 || s.table().iter().any(|&x| x >= field.order()) {
                return Err(NearfieldError::Parse { line: 0, message: "sigma must fix 0 and stay in range".into() });
            }
        }
        Ok((n, sigma))
    }
}
