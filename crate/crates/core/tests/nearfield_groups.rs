use moufang_core::catalog;
use moufang_core::field::FiniteField;
use moufang_core::moufang::MoufangSet;
use moufang_core::nearfield::{Coupling, Nearfield, NearfieldError};
use moufang_core::permgroup::{PermGroup, Permutation};
use moufang_core::ultra::{principal_ultraproduct_moufang, SetFamily};

fn d9() -> Nearfield {
    let f = FiniteField::of_order(9).unwrap();
    Nearfield::dickson(&f, Coupling::quadratic_character(&f).unwrap()).unwrap()
}

fn lifted_translations(f: &FiniteField) -> PermGroup {
    let q = f.order() as usize;
    let gens = (0..f.degree())
        .map(|i| {
            let b = f.p().pow(i);
            Permutation::from_fn(q + 1, |x| if x == q { q } else { f.add(x as u32, b) as usize }).unwrap()
        })
        .collect();
    PermGroup::closure(q + 1, gens, 1000).unwrap()
}

#[test]
fn centre_of_two_point_stabilizer_lies_in_centroid_for_t3_d9() {
    let n = d9();
    let s = n.make_kt_sigma().unwrap();
    let t3 = n.t3_group(&s).unwrap();
    let m = n.kt_moufang_set(&s).unwrap();
    let r = m.check_centroid_lemma(&t3.group).unwrap();
    assert!(r.holds());
    // T_3 is sharply 3-transitive, so G_{inf,0} acts regularly on F* ≅ Q_8 and its centre is {±1}
    assert_eq!(r.center_order, 2);
}

#[test]
fn t3_d9_is_a_two_transitive_moufang_group() {
    let n = d9();
    let s = n.make_kt_sigma().unwrap();
    let t3 = n.t3_group(&s).unwrap();
    let f = n.base().clone();
    let (m, info) = MoufangSet::from_2transitive(&t3.group, 9, &lifted_translations(&f)).unwrap();
    assert!(m.check_moufang_criterion().is_moufang);
    assert_eq!(info.little_projective_order, 360);
    assert!(info.little_projective_normal);
    let kt = n.kt_moufang_set(&s).unwrap();
    assert!(m.same_root_groups(&kt));
    assert_eq!(info.relabel, (0..10).collect::<Vec<_>>());
    assert_eq!(m.hua_subgroup(false).unwrap().group.order().unwrap(), kt.hua_subgroup(false).unwrap().group.order().unwrap());
}

#[test]
fn dickson_25_kt_suite() {
    let f = FiniteField::of_order(25).unwrap();
    let n = Nearfield::dickson(&f, Coupling::dickson(&f, 5, 2).unwrap()).unwrap();
    let s = n.make_kt_sigma().unwrap();
    assert!(n.check_kt(&s).unwrap().is_kt);
    let r = n.check_hua_pseudosquare(&s).unwrap();
    assert!(r.holds && r.special);
    assert_eq!(r.pairs, 25 * 24);
    let t3 = n.t3_group(&s).unwrap();
    assert_eq!(t3.group.order().unwrap(), 26 * 25 * 24);
    assert!(t3.sharply_3_transitive && t3.stabilizer_is_affine);
    let pgl = catalog::pgl2(&f).unwrap();
    assert_ne!(t3.group.element_order_multiset().unwrap(), pgl.element_order_multiset().unwrap());
}

#[test]
fn field_t3_is_pgl2() {
    for q in [3u32, 4, 5, 7, 8, 9] {
        let f = FiniteField::of_order(q).unwrap();
        let n = Nearfield::field(&f);
        let t3 = n.t3_group(&n.make_kt_sigma().unwrap()).unwrap();
        assert!(t3.group.same_elements(&catalog::pgl2(&f).unwrap()).unwrap(), "q={q}");
    }
}

#[test]
fn asymmetric_coupling_has_no_inversion_sigma() {
    let f = FiniteField::of_order(64).unwrap();
    let n = Nearfield::dickson(&f, Coupling::dickson(&f, 4, 3).unwrap()).unwrap();
    assert!(matches!(n.make_kt_sigma(), Err(NearfieldError::CouplingNotInversionSymmetric { .. })));
    // still a proper nearfield: the kernel is F_4
    assert_eq!(n.kernel().unwrap().len(), 4);
}

#[test]
fn principal_ultraproduct_of_projective_lines() {
    let sets: Vec<MoufangSet> =
        [5u32, 7].iter().map(|&q| MoufangSet::projective_line(&FiniteField::of_order(q).unwrap())).collect();
    for s in 0..2 {
        let (factor, hua) = principal_ultraproduct_moufang(&sets, &SetFamily::principal(2, s).unwrap()).unwrap();
        assert_eq!(factor.size(), sets[s].size());
        for (a, row) in hua.iter().enumerate().skip(1) {
            assert_eq!(row, sets[s].hua(a), "s={s} a={a}");
        }
    }
    let free_like = SetFamily::new(2, [0b11]).unwrap();
    assert!(principal_ultraproduct_moufang(&sets, &free_like).is_err());
}
