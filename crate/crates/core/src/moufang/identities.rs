use serde::{Deserialize, Serialize};

use super::{Endo, MoufangError, MoufangSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub cases: usize,
    pub witness: Option<String>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    /// The identities are stated for special proper sets with `τ = μ_e`;
    /// these flags record whether the instance meets that.
    pub special: bool,
    pub proper: bool,
    pub tau_is_mu_e: bool,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed()).count()
    }
}

struct Tally {
    name: &'static str,
    cases: usize,
    witness: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, cases: 0, witness: None }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn finish(self) -> IdentityCheck {
        IdentityCheck { name: self.name.to_string(), cases: self.cases, witness: self.witness }
    }
}

impl MoufangSet {
    /// Table of `aⁿ` for `0 ≤ n ≤ n_max`, by the defining recursion.
    fn power_table(&self, a: usize, n_max: usize) -> Vec<usize> {
        let mut t = vec![self.e(), a];
        while t.len() <= n_max {
            let x = t[t.len() - 2];
            t.push(self.h(a, x));
        }
        t.truncate(n_max + 1);
        t
    }

    fn compose_power(&self, a: usize, k: usize, x: usize) -> usize {
        (0..k).fold(x, |y, _| self.h(a, y))
    }

    /// Exhaustive check of the power, square and linearized-Hua identities
    /// for `n ≤ n_max`, `m ≤ m_max`, with `λ` ranging over `centroid`.
    pub fn verify_identity_suite(
        &self,
        n_max: usize,
        m_max: usize,
        centroid: &[Endo],
    ) -> Result<IdentityReport, MoufangError> {
        self.require_moufang()?;
        let u = self.root();
        let size = self.size();
        let e = self.e();
        let top = (n_max * m_max.max(1)).max(n_max + 2);
        let powers: Vec<Vec<usize>> = (0..size).map(|a| self.power_table(a, top)).collect();

        let mut reduce = Tally::new("powers_reduce");
        let mut hua_pow = Tally::new("hua_of_power");
        let mut pow_pow = Tally::new("power_of_power");
        let mut lin = Tally::new("power_times_linearized_hua");
        let mut scal = Tally::new("centroid_scales_powers");
        for a in 0..size {
            let pa = &powers[a];
            for n in 0..=n_max {
                for m in 0..=m_max {
                    if n >= 2 * m {
                        let rhs = self.compose_power(a, m, pa[n - 2 * m]);
                        reduce.check(pa[n] == rhs, || format!("a={a} n={n} m={m}"));
                    }
                    let amn = powers[pa[m]][n];
                    pow_pow.check(amn == pa[n * m], || format!("a={a} m={m} n={n}"));
                }
                let an = pa[n];
                let ok = (0..size).all(|x| self.h(an, x) == self.compose_power(a, n, x));
                hua_pow.check(ok, || format!("a={a} n={n}"));
                lin.check(self.h2(e, a, an) == u.times(2, pa[n + 1]), || format!("a={a} n={n}"));
                for (li, lam) in centroid.iter().enumerate() {
                    let la = lam.apply(a);
                    let lhs = powers[la][n];
                    let rhs = (0..n).fold(an, |x, _| lam.apply(x));
                    scal.check(lhs == rhs, || format!("a={a} n={n} lambda#{li}"));
                }
            }
        }

        let mut squares = Tally::new("doubling_by_squares");
        for a in 0..size {
            squares.check(u.times(2, a) == self.h2(a, e, e), || format!("a={a}"));
        }

        let mut f = Tally::new("inverse_linearized_hua");
        for a in 1..size {
            let inv = self.power(a, -1)?;
            for b in 0..size {
                f.check(self.h2(a, b, inv) == u.times(2, b), || format!("a={a} b={b}"));
            }
        }

        let mut lemma1 = Tally::new("shifted_inverse_identity");
        for a in 0..size {
            let Some(s) = self.shifted_inverse(a) else { continue };
            for b in 0..size {
                let lhs = self.h2(a, b, s);
                let rhs = self.h2(e, b, u.sub(s, e));
                lemma1.check(lhs == rhs, || format!("a={a} b={b}"));
            }
        }

        let proper = self.hua_subgroup(false)?.is_proper;
        Ok(IdentityReport {
            special: self.is_special(),
            proper,
            tau_is_mu_e: self.tau_is_mu_e(),
            checks: [reduce, hua_pow, pow_pow, lin, scal, squares, f, lemma1].into_iter().map(Tally::finish).collect(),
        })
    }

    /// `((e - ta)⁻¹ - Σ_{k≤n} tᵏaᵏ) h_{e-ta} = t^{n+1}a^{n+1} - t^{n+2}a^{n+2}`
    /// for `0 ≤ n ≤ n_max`. Returns the first failing `n`, if any.
    pub fn check_telescoping(&self, t: &Endo, a: usize, n_max: usize) -> Result<Option<usize>, MoufangError> {
        if a >= self.size() {
            return Err(MoufangError::OutOfRange(a));
        }
        if !self.is_in_centroid(t)? {
            return Err(MoufangError::NotInCentroid);
        }
        let u = self.root();
        let ta = t.apply(a);
        let d = u.sub(self.e(), ta);
        if d == 0 {
            return Err(MoufangError::DegenerateDenominator);
        }
        let inv = self.power(d, -1)?;
        let pa = self.power_table(a, n_max + 2);
        let scaled = |k: usize| (0..k).fold(pa[k], |x, _| t.apply(x));
        let mut partial = 0;
        for n in 0..=n_max {
            partial = u.add(partial, scaled(n));
            let lhs = self.h(d, u.sub(inv, partial));
            let rhs = u.sub(scaled(n + 1), scaled(n + 2));
            if lhs != rhs {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }

    /// `h_{e,aλ} = h_{e,a}λ` on `U` for every `a ≠ 0`; returns a failing
    /// `(a, x)` if there is one.
    pub fn check_linearity_criterion(&self, lambda: &Endo) -> Result<Option<(usize, usize)>, MoufangError> {
        let u = self.root();
        if *lambda == Endo::identity(u) || !lambda.is_invertible(u) || !self.is_in_centroid(lambda)? {
            return Err(MoufangError::NoSuchLambda);
        }
        let e = self.e();
        for a in 1..self.size() {
            let la = lambda.apply(a);
            for x in 0..self.size() {
                if self.h2(e, la, x) != lambda.apply(self.h2(e, a, x)) {
                    return Ok(Some((a, x)));
                }
            }
        }
        Ok(None)
    }
}
