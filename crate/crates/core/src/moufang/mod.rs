//! Moufang sets `M(U, τ)` over a finite elementary abelian root group.
//!
//! `X = U ∪ {∞}` with `∞` stored as the last point `|U|`. All maps act on the
//! right. For `a ≠ 0`,
//! `μ_a = α_a · τ⁻¹α_{-(aτ⁻¹)}τ · α_{-((-(aτ⁻¹))τ)}` and `h_a = τ μ_a`;
//! `h_0` is the zero map.

mod centroid;
mod identities;
mod root;
mod transitive;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::FieldError;
use crate::permgroup::{PermError, PermGroup, Permutation, DEFAULT_CAP};

pub use centroid::{Centroid, CentroidLemmaReport, HypothesisReport, DEFAULT_CENTROID_CAP};
pub use identities::{IdentityCheck, IdentityReport};
pub use root::{Endo, RootGroup};
pub use transitive::TwoTransitiveInfo;

#[derive(Debug, Error)]
pub enum MoufangError {
    #[error("root group F_{p}^{dim} is empty or too large")]
    TooLarge { p: u32, dim: usize },
    #[error("tau is not a bijection of the nonzero elements")]
    NotBijection,
    #[error("distinguished element e must be nonzero and in range")]
    ZeroE,
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("element {0} out of range")]
    OutOfRange(usize),
    #[error("not a Moufang set: h_{a} is not additive at ({b}, {c})")]
    NotMoufang { a: usize, b: usize, c: usize },
    #[error("search space of {needed} candidates exceeds cap {cap}")]
    CapExceeded { needed: u128, cap: u128 },
    #[error("endomorphism is not in the centroid")]
    NotInCentroid,
    #[error("e - ta = 0")]
    DegenerateDenominator,
    #[error("no admissible lambda: need an invertible centroid element other than 1")]
    NoSuchLambda,
    #[error("scalar set is not a subfield of End_H(U): {0}")]
    NotASubfield(String),
    #[error("group is not 2-transitive")]
    NotTwoTransitive,
    #[error("root group is not a normal subgroup of the point stabilizer")]
    NotNormalInStabilizer,
    #[error("root group does not act regularly on the remaining points")]
    NotRegular,
    #[error("root group is not elementary abelian")]
    NotElementaryAbelian,
    #[error("conjugation does not permute the root groups: U_{x}^g != U_(xg) for generator {generator}")]
    RootGroupsNotPermuted { x: usize, generator: usize },
    #[error("Jordan algebra is not division")]
    NotDivision,
    #[error("Jordan-derived Moufang set mismatch: {0}")]
    JordanMismatch(String),
    #[error("centre element {0:?} of G_(inf,0) is not additive on U")]
    CenterNotAdditive(Permutation),
    #[error("little projective group is not normal in the given group")]
    NotNormal,
    #[error("two computations of h_{a} disagree at {x}")]
    TwoPathMismatch { a: usize, x: usize },
    #[error("descriptor is inconsistent: {0}")]
    BadDescriptor(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// `{"p":…, "d":…, "e":index, "tau":[images of 1, 2, …, |U|-1]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoufangDescriptor {
    pub p: u32,
    pub d: usize,
    pub e: usize,
    pub tau: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub is_moufang: bool,
    /// `(a, b, c)` with `(b + c)h_a ≠ bh_a + ch_a`.
    pub witness: Option<(usize, usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct HuaSubgroup {
    pub group: PermGroup,
    pub is_proper: bool,
}

#[derive(Clone, Debug)]
pub struct MoufangSet {
    root: RootGroup,
    tau: Permutation,
    tau_inv: Permutation,
    e: usize,
    mu: Vec<Permutation>,
    hua: Vec<Vec<u32>>,
    tau_is_mu_e: bool,
}

impl MoufangSet {
    /// `tau_nonzero[i]` is the image of the nonzero element `i + 1`.
    pub fn build(root: RootGroup, tau_nonzero: &[u32], e: usize) -> Result<Self, MoufangError> {
        let n = root.order();
        if tau_nonzero.len() != n - 1 {
            return Err(MoufangError::NotBijection);
        }
        if e == 0 || e >= n {
            return Err(MoufangError::ZeroE);
        }
        let mut images = Vec::with_capacity(n + 1);
        images.push(n as u32);
        images.extend_from_slice(tau_nonzero);
        images.push(0);
        if tau_nonzero.iter().any(|&x| x == 0 || x as usize >= n) {
            return Err(MoufangError::NotBijection);
        }
        let tau = Permutation::new(images).map_err(|_| MoufangError::NotBijection)?;
        let tau_inv = tau.inverse();
        let mut m = MoufangSet { root, tau, tau_inv, e, mu: Vec::new(), hua: Vec::new(), tau_is_mu_e: false };
        m.mu = (0..n).map(|a| if a == 0 { Permutation::identity(n + 1) } else { m.mu_composed(a) }).collect();
        m.hua = (0..n)
            .map(|a| {
                if a == 0 {
                    vec![0; n]
                } else {
                    (0..n).map(|x| m.mu[a].image(m.tau.image(x)) as u32).collect()
                }
            })
            .collect();
        m.tau_is_mu_e = m.mu[e] == m.tau;
        Ok(m)
    }

    pub fn from_fn(root: RootGroup, tau: impl Fn(usize) -> usize, e: usize) -> Result<Self, MoufangError> {
        let images: Vec<u32> = (1..root.order()).map(|a| tau(a) as u32).collect();
        Self::build(root, &images, e)
    }

    /// `M(PG₁(F))`: `aτ = -a⁻¹`, `e = 1`.
    pub fn projective_line(f: &crate::field::FiniteField) -> Self {
        let root = RootGroup::of_field(f);
        Self::from_fn(root, |a| f.neg(f.inv(a as u32).unwrap()) as usize, 1).expect("field inversion is a bijection")
    }

    /// The same root group with `τ` replaced by `μ_a`.
    pub fn rebased(&self, a: usize) -> Result<Self, MoufangError> {
        self.check_nonzero(a)?;
        let images: Vec<u32> = (1..self.size()).map(|x| self.mu[a].image(x) as u32).collect();
        Self::build(self.root.clone(), &images, self.e)
    }

    pub fn descriptor(&self) -> MoufangDescriptor {
        MoufangDescriptor {
            p: self.root.p(),
            d: self.root.dim(),
            e: self.e,
            tau: (1..self.size()).map(|a| self.tau.image(a) as u32).collect(),
        }
    }

    pub fn from_descriptor(d: &MoufangDescriptor) -> Result<Self, MoufangError> {
        Self::build(RootGroup::new(d.p, d.d)?, &d.tau, d.e)
    }

    pub fn root(&self) -> &RootGroup {
        &self.root
    }

    /// `|U|`.
    pub fn size(&self) -> usize {
        self.root.order()
    }

    /// Index of `∞` in `X`.
    pub fn infinity(&self) -> usize {
        self.size()
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn tau(&self) -> &Permutation {
        &self.tau
    }

    pub fn tau_is_mu_e(&self) -> bool {
        self.tau_is_mu_e
    }

    fn check_nonzero(&self, a: usize) -> Result<(), MoufangError> {
        if a >= self.size() {
            return Err(MoufangError::OutOfRange(a));
        }
        if a == 0 {
            return Err(MoufangError::ZeroArgument);
        }
        Ok(())
    }

    /// `α_a` on `X`.
    pub fn alpha(&self, a: usize) -> Permutation {
        let n = self.size();
        Permutation::from_fn(n + 1, |x| if x == n { n } else { self.root.add(x, a) }).expect("translation")
    }

    fn mu_composed(&self, a: usize) -> Permutation {
        let b = self.root.neg(self.tau_inv.image(a));
        let c = self.root.neg(self.tau.image(b));
        self.alpha(a).then(&self.alpha(b).conjugate_by(&self.tau)).then(&self.alpha(c))
    }

    pub fn mu(&self, a: usize) -> Result<&Permutation, MoufangError> {
        self.check_nonzero(a)?;
        Ok(&self.mu[a])
    }

    /// Cached `h_a` on `U`; `h_0` is the zero map.
    #[inline]
    pub fn hua(&self, a: usize) -> &[u32] {
        &self.hua[a]
    }

    #[inline]
    pub fn h(&self, a: usize, x: usize) -> usize {
        self.hua[a][x] as usize
    }

    /// `h_a`, cross-checked against a pointwise evaluation of
    /// `x ↦ ((xτ + a)τ⁻¹ + b)τ + c`.
    pub fn hua_map(&self, a: usize) -> Result<Vec<u32>, MoufangError> {
        self.check_nonzero(a)?;
        let direct = self.hua_direct(a);
        if let Some(x) = (0..self.size()).find(|&x| direct[x] != self.hua[a][x]) {
            return Err(MoufangError::TwoPathMismatch { a, x });
        }
        Ok(direct)
    }

    fn hua_direct(&self, a: usize) -> Vec<u32> {
        let inf = self.infinity();
        let tau = |x: usize| self.tau.image(x);
        let tau_inv = |x: usize| self.tau_inv.image(x);
        let shift = |x: usize, s: usize| if x == inf { inf } else { self.root.add(x, s) };
        let b = self.root.neg(tau_inv(a));
        let c = self.root.neg(tau(b));
        (0..self.size()).map(|x| shift(tau(shift(tau_inv(shift(tau(x), a)), b)), c) as u32).collect()
    }

    /// `x h_{a,b} = x h_{a+b} - x h_a - x h_b`.
    pub fn h2(&self, a: usize, b: usize, x: usize) -> usize {
        let r = &self.root;
        r.sub(r.sub(self.h(r.add(a, b), x), self.h(a, x)), self.h(b, x))
    }

    pub fn check_moufang_criterion(&self) -> CriterionReport {
        let n = self.size();
        for a in 1..n {
            for b in 0..n {
                for c in b..n {
                    let lhs = self.h(a, self.root.add(b, c));
                    let rhs = self.root.add(self.h(a, b), self.h(a, c));
                    if lhs != rhs {
                        return CriterionReport { is_moufang: false, witness: Some((a, b, c)) };
                    }
                }
            }
        }
        CriterionReport { is_moufang: true, witness: None }
    }

    pub(crate) fn require_moufang(&self) -> Result<(), MoufangError> {
        match self.check_moufang_criterion().witness {
            Some((a, b, c)) => Err(MoufangError::NotMoufang { a, b, c }),
            None => Ok(()),
        }
    }

    /// `(-a)τ = -(aτ)` on `U^#`.
    pub fn is_special(&self) -> bool {
        (1..self.size()).all(|a| self.tau.image(self.root.neg(a)) == self.root.neg(self.tau.image(a)))
    }

    fn restrict(&self, g: &Permutation) -> Permutation {
        Permutation::new(g.images()[..self.size()].to_vec()).expect("fixes infinity")
    }

    /// `H` on `U`, generated by `h_e⁻¹h_a = μ_e⁻¹μ_a`, or by all `μ_aμ_b`
    /// when `full` is set.
    pub fn hua_subgroup(&self, full: bool) -> Result<HuaSubgroup, MoufangError> {
        self.require_moufang()?;
        let n = self.size();
        let mut gens: IndexSet<Permutation> = IndexSet::new();
        if full {
            for a in 1..n {
                for b in 1..n {
                    gens.insert(self.restrict(&self.mu[a].then(&self.mu[b])));
                }
            }
        } else {
            let he_inv = Permutation::new(self.hua[self.e].clone()).expect("h_e is a bijection").inverse();
            for a in 1..n {
                let ha = Permutation::new(self.hua[a].clone()).expect("h_a is a bijection");
                gens.insert(he_inv.then(&ha));
            }
        }
        gens.retain(|g| !g.is_identity());
        let group = PermGroup::closure(n, gens.into_iter().collect(), cap_from_env())?;
        let is_proper = group.order()? > 1;
        Ok(HuaSubgroup { group, is_proper })
    }

    /// `U_0 = U_∞^τ` as a set of permutations of `X`.
    pub fn root_group_at_zero(&self) -> IndexSet<Permutation> {
        (0..self.size()).map(|b| self.alpha(b).conjugate_by(&self.tau)).collect()
    }

    /// Same root group family, i.e. equal `U_0`.
    pub fn same_root_groups(&self, other: &MoufangSet) -> bool {
        let (a, b) = (self.root_group_at_zero(), other.root_group_at_zero());
        a.len() == b.len() && a.iter().all(|g| b.contains(g))
    }

    /// `G† = ⟨U_∞, U_0⟩` on `X`.
    pub fn little_projective_group(&self) -> Result<PermGroup, MoufangError> {
        self.require_moufang()?;
        let mut gens = Vec::new();
        for b in self.root.basis() {
            let a = self.alpha(b);
            gens.push(a.conjugate_by(&self.tau));
            gens.push(a);
        }
        Ok(PermGroup::closure(self.size() + 1, gens, cap_from_env())?)
    }

    /// `h_c⁻¹ h_a` on `U`.
    pub fn isotope_hua(&self, c: usize, a: usize) -> Result<Vec<u32>, MoufangError> {
        self.check_nonzero(c)?;
        if a >= self.size() {
            return Err(MoufangError::OutOfRange(a));
        }
        let hc_inv = Permutation::new(self.hua[c].clone()).map_err(|_| MoufangError::NotBijection)?.inverse();
        Ok((0..self.size()).map(|x| self.hua[a][hc_inv.image(x)]).collect())
    }

    /// `a⁰ = e`, `a¹ = a`, `a^{n+2} = aⁿh_a`, `a^{-1} = -(aτ)`.
    pub fn power(&self, a: usize, n: i64) -> Result<usize, MoufangError> {
        if a >= self.size() {
            return Err(MoufangError::OutOfRange(a));
        }
        match n {
            i64::MIN..=-2 => Err(MoufangError::OutOfRange(n.unsigned_abs() as usize)),
            -1 => {
                self.check_nonzero(a)?;
                Ok(self.root.neg(self.tau.image(a)))
            }
            _ => {
                let mut x = if n % 2 == 0 { self.e } else { a };
                for _ in 0..n / 2 {
                    x = self.h(a, x);
                }
                Ok(x)
            }
        }
    }

    /// `(e - a)⁻¹`, or `None` when `a = e`.
    pub fn shifted_inverse(&self, a: usize) -> Option<usize> {
        let d = self.root.sub(self.e, a);
        (d != 0).then(|| self.root.neg(self.tau.image(d)))
    }
}

/// Closure cap, overridable through `MOUFANG_CAP`.
pub fn cap_from_env() -> usize {
    std::env::var("MOUFANG_CAP").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_CAP)
}
