//! Machine-readable verification reports for catalog instances.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::catalog;
use crate::field::{gcd, FieldError, FiniteField};
use crate::jordan::{JordanError, QuadraticJordan, DEFAULT_AXIOM_CAP};
use crate::moufang::{Endo, MoufangError, MoufangSet, RootGroup, DEFAULT_CENTROID_CAP};
use crate::nearfield::{Coupling, Nearfield, NearfieldError, Sigma};
use crate::permgroup::PermError;
use crate::ultra::{partitions, SetFamily};

pub const SUPPORTED_FIELD_ORDERS: [u32; 15] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub check: String,
    pub anchor: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub instance: Value,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.check == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub profile: String,
    pub passed: bool,
    pub reports: Vec<Report>,
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("unsupported field order {0}")]
    UnsupportedQ(u32),
    #[error("unknown check {0:?}")]
    UnknownCheck(String),
    #[error("unknown profile {0:?}")]
    UnknownProfile(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Moufang(#[from] MoufangError),
    #[error(transparent)]
    Jordan(#[from] JordanError),
    #[error(transparent)]
    Nearfield(#[from] NearfieldError),
}

/// Collects checks; a check body returns `Ok((passed, witness, detail))`.
struct Builder {
    checks: Vec<Check>,
    timings: bool,
}

type Outcome = Result<(bool, Option<String>, Option<Value>), String>;

impl Builder {
    fn new(timings: bool) -> Self {
        Builder { checks: Vec::new(), timings }
    }

    fn run(&mut self, check: &str, anchor: &str, body: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let out = body();
        let timing_ms = self.timings.then(|| start.elapsed().as_millis() as u64);
        let (status, witness, detail) = match out {
            Ok((true, w, d)) => (Status::Pass, w, d),
            Ok((false, w, d)) => (Status::Fail, Some(w.unwrap_or_else(|| "no witness recorded".into())), d),
            Err(e) => (Status::Fail, Some(e), None),
        };
        self.checks.push(Check { check: check.into(), anchor: anchor.into(), status, witness, detail, timing_ms });
    }

    fn skip(&mut self, check: &str, anchor: &str, reason: &str) {
        self.checks.push(Check {
            check: check.into(),
            anchor: anchor.into(),
            status: Status::Skipped,
            witness: None,
            detail: Some(json!({ "reason": reason })),
            timing_ms: None,
        });
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

pub const FIELD_CHECKS: [&str; 9] =
    ["criterion", "hua-squares", "special", "proper", "little-projective", "identities", "telescoping", "centroid", "hypotheses"];

pub fn parse_checks(list: &str, known: &[&str]) -> Result<Vec<String>, ReportError> {
    if list.trim() == "all" {
        return Ok(known.iter().map(|s| s.to_string()).collect());
    }
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| if known.contains(&s) { Ok(s.to_string()) } else { Err(ReportError::UnknownCheck(s.into())) })
        .collect()
}

/// Multiplication by each field element, as endomorphisms of `(F, +)`.
pub fn field_scalars(f: &FiniteField, root: &RootGroup) -> Vec<Endo> {
    f.elements()
        .map(|c| Endo::from_table(root, &f.elements().map(|x| f.mul(c, x)).collect::<Vec<_>>()).expect("additive"))
        .collect()
}

/// `M(F)` built through the Jordan algebra `F`, with the selected checks.
pub fn field_report(q: u32, checks: &[String], timings: bool) -> Result<Report, ReportError> {
    if !SUPPORTED_FIELD_ORDERS.contains(&q) {
        return Err(ReportError::UnsupportedQ(q));
    }
    let f = FiniteField::of_order(q)?;
    let j = QuadraticJordan::field_jordan(&f);
    let m = MoufangSet::from_jordan(&j)?;
    let instance = json!({ "kind": "field", "q": q, "p": f.p(), "f": f.degree(), "modulus": f.modulus() });
    let mut b = Builder::new(timings);
    let want = |c: &str| checks.iter().any(|s| s == c);
    let scalars = field_scalars(&f, m.root());

    if want("criterion") {
        b.run("criterion", "Moufang set iff every Hua map is additive", || {
            let r = m.check_moufang_criterion();
            Ok((r.is_moufang, r.witness.map(|w| format!("{w:?}")), None))
        });
    }
    if want("hua-squares") {
        b.run("hua-squares", "Hua maps of a Jordan division algebra are its Q-operators", || {
            for a in 1..q {
                let h = m.hua_map(a as usize).map_err(err)?;
                if let Some(x) = (0..q).find(|&x| h[x as usize] != f.mul(f.mul(a, a), x)) {
                    return Ok((false, Some(format!("a={a} x={x}")), None));
                }
            }
            Ok((true, None, None))
        });
    }
    if want("special") {
        b.run("special", "(-a)tau = -(a tau)", || Ok((m.is_special(), None, None)));
    }
    if want("proper") {
        b.run("proper", "projective lines over F_2 and F_3 are the improper ones", || {
            let h = m.hua_subgroup(false).map_err(err)?;
            let order = h.group.order().map_err(err)?;
            let expected = q > 3;
            let witness = (h.is_proper != expected).then(|| format!("|H|={order}"));
            Ok((h.is_proper == expected, witness, Some(json!({ "hua_order": order, "proper": h.is_proper }))))
        });
    }
    if want("little-projective") {
        b.run("little-projective", "G-dagger of a projective line is PSL_2(q)", || {
            let order = m.little_projective_group().map_err(err)?.order().map_err(err)?;
            let expected = (q as usize) * (q as usize * q as usize - 1) / gcd(2, q - 1) as usize;
            let witness = (order != expected).then(|| format!("order {order}, expected {expected}"));
            Ok((order == expected, witness, Some(json!({ "order": order }))))
        });
    }
    if want("identities") {
        b.run("identities", "power, square and linearized Hua identities", || {
            let r = m.verify_identity_suite(6, 6, &scalars).map_err(err)?;
            let failed: Vec<String> =
                r.checks.iter().filter(|c| !c.passed()).map(|c| format!("{}: {}", c.name, c.witness.clone().unwrap_or_default())).collect();
            let cases: usize = r.checks.iter().map(|c| c.cases).sum();
            Ok((failed.is_empty(), (!failed.is_empty()).then(|| failed.join("; ")), Some(json!({ "cases": cases }))))
        });
    }
    if want("telescoping") {
        b.run("telescoping", "finite telescoping of the geometric series in the centroid", || {
            let mut cases = 0;
            for t in &scalars {
                for a in 0..m.size() {
                    if m.root().sub(m.e(), t.apply(a)) == 0 {
                        continue;
                    }
                    cases += 1;
                    if let Some(n) = m.check_telescoping(t, a, 8).map_err(err)? {
                        return Ok((false, Some(format!("t={:?} a={a} n={n}", t.table())), None));
                    }
                }
            }
            Ok((true, None, Some(json!({ "cases": cases }))))
        });
    }
    let centroid = if want("centroid") || want("hypotheses") {
        Some(m.compute_centroid(DEFAULT_CENTROID_CAP).map_err(err))
    } else {
        None
    };
    if want("centroid") {
        b.run("centroid", "centroid of M(F) is F acting by multiplication", || {
            let c = centroid.clone().expect("computed")?;
            let same = c.centroid.len() == scalars.len() && scalars.iter().all(|s| c.centroid.contains(s));
            let witness = (!same).then(|| format!("centroid has {} elements", c.centroid.len()));
            Ok((same, witness, Some(json!({ "size": c.centroid.len(), "invertible": c.invertible.len() }))))
        });
    }
    if want("hypotheses") {
        b.run("hypotheses", "hypotheses of the structure theorem (infinite centroid unattainable)", || {
            let c = centroid.clone().expect("computed")?;
            let r = m.main_theorem_hypotheses(&c.centroid).map_err(err)?;
            let consistent = !r.infinite_centroid_scalars && r.finite_dimension;
            Ok((consistent, None, Some(serde_json::to_value(&r).map_err(err)?)))
        });
    }
    Ok(Report { instance, checks: b.checks })
}

/// Checks that need nothing beyond `(U, τ)`.
pub fn moufang_report(m: &MoufangSet, instance: Value, timings: bool) -> Report {
    let mut b = Builder::new(timings);
    let r = m.check_moufang_criterion();
    b.run("criterion", "Moufang set iff every Hua map is additive", || {
        Ok((r.is_moufang, r.witness.map(|w| format!("{w:?}")), None))
    });
    if !r.is_moufang {
        return Report { instance, checks: b.checks };
    }
    b.run("structure", "special, proper and little projective group", || {
        let h = m.hua_subgroup(false).map_err(err)?;
        let gdag = m.little_projective_group().map_err(err)?;
        Ok((
            true,
            None,
            Some(json!({
                "special": m.is_special(),
                "proper": h.is_proper,
                "hua_order": h.group.order().map_err(err)?,
                "little_projective_order": gdag.order().map_err(err)?,
                "tau_is_mu_e": m.tau_is_mu_e(),
            })),
        ))
    });
    let centroid = m.compute_centroid(DEFAULT_CENTROID_CAP);
    match &centroid {
        Ok(c) => b.run("identities", "power, square and linearized Hua identities", || {
            let r = m.verify_identity_suite(6, 6, &c.centroid).map_err(err)?;
            let failed: Vec<&str> = r.checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
            Ok((failed.is_empty(), (!failed.is_empty()).then(|| failed.join(", ")), Some(json!({ "centroid_size": c.centroid.len() }))))
        }),
        Err(e) => b.skip("identities", "power, square and linearized Hua identities", &e.to_string()),
    }
    Report { instance, checks: b.checks }
}

pub fn jordan_report(j: &QuadraticJordan, timings: bool) -> Report {
    let instance = json!({ "kind": "jordan", "p": j.base().p(), "f": j.base().degree(), "dim": j.dim(), "unit": j.unit() });
    let mut b = Builder::new(timings);
    b.run("axioms", "quadratic Jordan axioms QJ1-QJ3", || {
        let r = j.check_axioms(DEFAULT_AXIOM_CAP).map_err(err)?;
        let witness = r.witnesses.first().map(|w| format!("{} at {:?}", w.axiom, w.elements));
        Ok((r.all_pass(), witness, None))
    });
    let division = j.is_division();
    b.run("division", "every Q_a with a nonzero is invertible", || {
        Ok((division, (!division).then(|| "some Q_a is singular".into()), None))
    });
    if !division {
        return Report { instance, checks: b.checks };
    }
    match j.moufang_set() {
        Ok(m) => {
            let inner = moufang_report(&m, Value::Null, timings);
            b.checks.extend(inner.checks);
        }
        Err(e) => b.run("moufang-set", "M(J) with Hua maps the Q-operators", || Err(e.to_string())),
    }
    Report { instance, checks: b.checks }
}

pub const NEARFIELD_CHECKS: [&str; 9] =
    ["axioms", "kernel-center", "kt", "pseudo-square", "special", "t3", "pgl2-separation", "gdag-normal", "k-sigma"];

/// Runs the nearfield suite on `n` with KT-automorphism `sigma` if one is known.
pub fn nearfield_report(n: &Nearfield, sigma: Option<&Sigma>, instance: Value, checks: &[String], timings: bool) -> Report {
    let mut b = Builder::new(timings);
    let want = |c: &str| checks.iter().any(|s| s == c);
    let q = n.order() as usize;
    if want("axioms") {
        b.run("axioms", "nearfield axioms with right distributivity", || Ok((true, None, Some(json!({ "order": q })))));
    }
    let kernel = n.kernel();
    if want("kernel-center") {
        b.run("kernel-center", "kernel is a skewfield containing the centre", || {
            let k = kernel.as_ref().map_err(err)?;
            let z = n.center().map_err(err)?;
            let outside = z.iter().find(|x| !k.contains(x));
            Ok((outside.is_none(), outside.map(|x| format!("{x} central but not in kernel")), Some(json!({ "kernel": k, "center": z }))))
        });
    }
    let kt_names = ["kt", "pseudo-square", "special", "t3", "pgl2-separation", "gdag-normal", "k-sigma"];
    let Some(sigma) = sigma else {
        for c in kt_names.iter().filter(|c| want(c)) {
            b.skip(c, "KT-nearfield constructions", "no KT-automorphism available");
        }
        return Report { instance, checks: b.checks };
    };
    let kt = n.check_kt(sigma);
    let kt_ok = matches!(kt, Ok(ref r) if r.is_kt);
    if want("kt") {
        b.run("kt", "(1 + a^s)^s = 1 - (1 + a)^s", || {
            let r = kt.as_ref().map_err(err)?;
            Ok((r.is_kt, r.witness.map(|a| format!("a={a}")), None))
        });
    }
    if !kt_ok {
        for c in kt_names.iter().skip(1).filter(|c| want(c)) {
            b.skip(c, "KT-nearfield constructions", "sigma is not a KT-automorphism");
        }
        return Report { instance, checks: b.checks };
    }
    if want("pseudo-square") {
        b.run("pseudo-square", "x h_a = x q_a", || {
            let r = n.check_hua_pseudosquare(sigma).map_err(err)?;
            Ok((r.holds, r.witness.map(|(a, x)| format!("a={a} x={x}")), Some(json!({ "pairs": r.pairs }))))
        });
    }
    if want("special") {
        b.run("special", "M(F, tau) is special", || {
            Ok((n.kt_moufang_set(sigma).map_err(err)?.is_special(), None, None))
        });
    }
    let t3 = (want("t3") || want("pgl2-separation") || want("gdag-normal")).then(|| n.t3_group(sigma));
    if want("t3") {
        b.run("t3", "T_3(F) is sharply 3-transitive with point stabilizer Aff(F)", || {
            let t = t3.as_ref().expect("computed").as_ref().map_err(err)?;
            let order = t.group.order().map_err(err)?;
            let ok = t.sharply_3_transitive && t.stabilizer_is_affine && order == (q + 1) * q * (q - 1);
            let witness = (!ok).then(|| format!("order {order}, sharp {}, stabilizer {}", t.sharply_3_transitive, t.stabilizer_is_affine));
            Ok((ok, witness, Some(json!({ "order": order, "degree": q + 1 }))))
        });
    }
    if want("pgl2-separation") {
        b.run("pgl2-separation", "T_3 of a proper nearfield is not PGL_2", || {
            let t = t3.as_ref().expect("computed").as_ref().map_err(err)?;
            let orders = t.group.element_order_multiset().map_err(err)?;
            let pgl = catalog::pgl2(n.base()).map_err(err)?.element_order_multiset().map_err(err)?;
            let is_field = kernel.as_ref().map_err(err)?.len() == q;
            let separated = orders != pgl;
            let ok = separated != is_field;
            let has_q_plus_1 = orders.contains_key(&(q as u64 + 1));
            Ok((
                ok,
                (!ok).then(|| format!("separated={separated} field={is_field}")),
                Some(json!({ "separated": separated, "has_order_q_plus_1": has_q_plus_1, "max_order": orders.keys().max() })),
            ))
        });
    }
    if want("gdag-normal") {
        b.run("gdag-normal", "G-dagger is normal in T_3(F)", || {
            let t = t3.as_ref().expect("computed").as_ref().map_err(err)?;
            let gdag = n.kt_moufang_set(sigma).map_err(err)?.little_projective_group().map_err(err)?;
            let ok = gdag.is_subgroup_of(&t.group).map_err(err)? && t.group.is_normal(&gdag).map_err(err)?;
            Ok((ok, None, Some(json!({ "order": gdag.order().map_err(err)? }))))
        });
    }
    if want("k-sigma") {
        b.run("k-sigma", "k_sigma is a commutative subfield with central squares", || {
            let r = n.k_sigma_report(sigma).map_err(err)?;
            Ok((r.all_hold(), None, Some(serde_json::to_value(&r).map_err(err)?)))
        });
    }
    Report { instance, checks: b.checks }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingKind {
    Char,
    Trivial,
}

pub fn dickson_report(q: u32, kind: CouplingKind, checks: &[String], timings: bool) -> Result<Report, ReportError> {
    let f = FiniteField::of_order(q)?;
    let coupling = match kind {
        CouplingKind::Char => Coupling::quadratic_character(&f)?,
        CouplingKind::Trivial => Coupling::trivial(&f),
    };
    let n = Nearfield::dickson(&f, coupling.clone())?;
    let sigma = n.make_kt_sigma().ok();
    let instance = json!({
        "kind": "dickson",
        "q": q,
        "coupling": if kind == CouplingKind::Char { "char" } else { "trivial" },
        "phi": coupling.exponents(),
    });
    Ok(nearfield_report(&n, sigma.as_ref(), instance, checks, timings))
}

fn all(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Checks that do not belong to a single catalog instance.
fn structural_report(timings: bool, partition_size: usize, sum_lemma_orders: &[u32]) -> Report {
    let mut b = Builder::new(timings);
    b.run("partition-lemma", "exactly one part of a member lies in an ultrafilter", || {
        let full = (1u32 << partition_size) - 1;
        let mut cases = 0;
        for s in 0..partition_size {
            let u = SetFamily::principal(partition_size, s).map_err(err)?;
            for a in u.members() {
                for parts in partitions(a) {
                    cases += 1;
                    u.check_partition_lemma(a, &parts).map_err(|e| format!("member {a:#b}: {e}"))?;
                }
            }
        }
        Ok((true, None, Some(json!({ "cases": cases, "points": full.count_ones() }))))
    });
    for &q in sum_lemma_orders {
        b.run(&format!("sum-lemma-aff-{q}"), "h1 + h2 = h3 forces Z(G_0) into H", || {
            let f = FiniteField::of_order(q).map_err(err)?;
            let g = catalog::affine_group(&f).map_err(err)?;
            let a = catalog::translations(&f).map_err(err)?;
            let mut cases = 0;
            for c1 in f.nonzero() {
                for c2 in f.nonzero() {
                    for c3 in f.nonzero() {
                        let hs = [catalog::scaling(&f, c1), catalog::scaling(&f, c2), catalog::scaling(&f, c3)];
                        match g.check_sharp2_sum_lemma(&a, 0, [&hs[0], &hs[1], &hs[2]]) {
                            Ok(r) if r.conclusion_holds => cases += 1,
                            Ok(r) => return Ok((false, Some(format!("c=({c1},{c2},{c3}) z={:?}", r.counterexample)), None)),
                            Err(PermError::HypothesisFails { .. }) => {}
                            Err(e) => return Err(e.to_string()),
                        }
                    }
                }
            }
            Ok((true, None, Some(json!({ "cases": cases }))))
        });
    }
    b.run("two-transitive-round-trip", "a 2-transitive group with normal regular U_y is a Moufang set", || {
        let f = FiniteField::of_order(5).map_err(err)?;
        let m = MoufangSet::projective_line(&f);
        let g = m.little_projective_group().map_err(err)?;
        let inf = m.infinity();
        let u = crate::permgroup::PermGroup::closure(inf + 1, m.root().basis().into_iter().map(|b| m.alpha(b)).collect(), 1000)
            .map_err(err)?;
        let (m2, _) = MoufangSet::from_2transitive(&g, inf, &u).map_err(err)?;
        let a = (1..m.size()).find(|&a| m.hua(a) != m2.hua(a));
        Ok((a.is_none(), a.map(|a| format!("a={a}")), None))
    });
    b.run("negative-controls", "verifiers reject non-examples", || {
        let f2 = FiniteField::of_order(2).map_err(err)?;
        let mj = QuadraticJordan::matrix_jordan(&f2);
        if !mj.check_axioms(DEFAULT_AXIOM_CAP).map_err(err)?.all_pass() || mj.is_division() {
            return Ok((false, Some("matrix algebra".into()), None));
        }
        let r = seeded_random_tau(5, 7).check_moufang_criterion();
        if r.is_moufang {
            return Ok((false, Some("random tau accepted".into()), None));
        }
        let f5 = FiniteField::of_order(5).map_err(err)?;
        let kt = Nearfield::field(&f5).check_kt(&Sigma::identity(&f5)).map_err(err)?;
        if kt.is_kt {
            return Ok((false, Some("identity sigma accepted".into()), None));
        }
        Ok((true, None, Some(json!({ "random_tau_witness": r.witness, "kt_witness": kt.witness }))))
    });
    Report { instance: json!({ "kind": "structural" }), checks: b.checks }
}

/// `M(U, τ)` on `F_q` with `τ` a seeded random permutation of `U^#`.
pub fn seeded_random_tau(q: u32, seed: u64) -> MoufangSet {
    let f = FiniteField::of_order(q).expect("field order");
    let mut images: Vec<u32> = f.nonzero().collect();
    images.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    MoufangSet::build(RootGroup::of_field(&f), &images, 1).expect("permutation")
}

/// A deliberately broken instance whose criterion check must fail.
fn fault_report(timings: bool) -> Report {
    let m = seeded_random_tau(5, 7);
    let mut b = Builder::new(timings);
    b.run("criterion", "Moufang set iff every Hua map is additive", || {
        let r = m.check_moufang_criterion();
        Ok((r.is_moufang, r.witness.map(|w| format!("{w:?}")), None))
    });
    Report { instance: json!({ "kind": "injected-fault", "descriptor": m.descriptor() }), checks: b.checks }
}

pub fn run_suite(profile: &str, inject_fault: bool, timings: bool) -> Result<SuiteReport, ReportError> {
    type Profile = (&'static [u32], &'static [(u32, CouplingKind)], usize, &'static [u32]);
    let (fields, dickson, partition_size, sum_orders): Profile = match profile {
        "quick" => (&[2, 3, 5], &[(9, CouplingKind::Char)], 4, &[5]),
        "full" => (
            &[2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27],
            &[(9, CouplingKind::Char), (25, CouplingKind::Char), (5, CouplingKind::Trivial), (9, CouplingKind::Trivial)],
            5,
            &[5, 7],
        ),
        other => return Err(ReportError::UnknownProfile(other.into())),
    };
    let mut reports = Vec::new();
    for &q in fields {
        reports.push(field_report(q, &all(&FIELD_CHECKS), timings)?);
    }
    for &(q, kind) in dickson {
        reports.push(dickson_report(q, kind, &all(&NEARFIELD_CHECKS), timings)?);
    }
    reports.push(structural_report(timings, partition_size, sum_orders));
    if inject_fault {
        reports.push(fault_report(timings));
    }
    let passed = reports.iter().all(Report::passed);
    Ok(SuiteReport { profile: profile.into(), passed, reports })
}
