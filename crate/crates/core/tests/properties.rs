use std::sync::OnceLock;

use proptest::prelude::*;

use moufang_core::field::FiniteField;
use moufang_core::jordan::QuadraticJordan;
use moufang_core::moufang::MoufangSet;
use moufang_core::nearfield::{Coupling, Nearfield, NearfieldSpec};
use moufang_core::permgroup::Permutation;
use moufang_core::ultra::{partitions, SetFamily};

const ORDERS: [u32; 10] = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27];

fn fields() -> &'static Vec<FiniteField> {
    static F: OnceLock<Vec<FiniteField>> = OnceLock::new();
    F.get_or_init(|| ORDERS.iter().map(|&q| FiniteField::of_order(q).unwrap()).collect())
}

fn projective_lines() -> &'static Vec<MoufangSet> {
    static M: OnceLock<Vec<MoufangSet>> = OnceLock::new();
    M.get_or_init(|| fields().iter().map(MoufangSet::projective_line).collect())
}

fn d9() -> &'static Nearfield {
    static N: OnceLock<Nearfield> = OnceLock::new();
    N.get_or_init(|| {
        let f = FiniteField::of_order(9).unwrap();
        Nearfield::dickson(&f, Coupling::quadratic_character(&f).unwrap()).unwrap()
    })
}

/// A field index together with three elements of that field.
fn field_and_elements() -> impl Strategy<Value = (usize, u32, u32, u32)> {
    (0..ORDERS.len()).prop_flat_map(|i| {
        let q = ORDERS[i];
        (Just(i), 0..q, 0..q, 0..q)
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
}

proptest! {
    #[test]
    fn field_axioms((i, a, b, c) in field_and_elements()) {
        let f = &fields()[i];
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        // Frobenius is additive and multiplicative
        let fr = |x| f.frobenius_apply(x, 1);
        prop_assert_eq!(fr(f.add(a, b)), f.add(fr(a), fr(b)));
        prop_assert_eq!(fr(f.mul(a, b)), f.mul(fr(a), fr(b)));
    }

    #[test]
    fn hua_maps_are_additive_and_scale_quadratically((i, a, b, c) in field_and_elements()) {
        let f = &fields()[i];
        let m = &projective_lines()[i];
        let u = m.root();
        let (a, b, c) = (a as usize, b as usize, c as usize);
        prop_assert_eq!(m.h(a, u.add(b, c)), u.add(m.h(a, b), m.h(a, c)));
        // h_{ka} = k² h_a for the prime field scalar k = 2
        let two_a = u.times(2, a);
        prop_assert_eq!(m.h(two_a, b), u.times(4, m.h(a, b)));
        // x h_a = a²x in the field
        prop_assert_eq!(m.h(a, b) as u32, f.mul(f.mul(a as u32, a as u32), b as u32));
    }

    #[test]
    fn permutation_group_laws(g in permutation(7), h in permutation(7), x in 0usize..7) {
        prop_assert_eq!(g.then(&h).inverse(), h.inverse().then(&g.inverse()));
        prop_assert_eq!(g.then(&h).image(x), h.image(g.image(x)));
        prop_assert_eq!(g.conjugate_by(&h), h.inverse().then(&g).then(&h));
        prop_assert!(g.pow(g.order()).is_identity());
    }

    #[test]
    fn d9_right_distributive(a in 0u32..9, b in 0u32..9, c in 0u32..9) {
        let n = d9();
        let f = n.base();
        prop_assert_eq!(n.mul(f.add(a, b), c), f.add(n.mul(a, c), n.mul(b, c)));
        prop_assert_eq!(n.mul(n.mul(a, b), c), n.mul(a, n.mul(b, c)));
    }

    #[test]
    fn superset_families_are_filters(n in 1usize..7, b in 1u32..64) {
        let b = b & ((1 << n) - 1);
        prop_assume!(b != 0);
        let fam = SetFamily::supersets_of(n, b).unwrap();
        prop_assert!(fam.is_filter().unwrap());
        prop_assert_eq!(fam.is_ultrafilter().unwrap(), b.count_ones() == 1);
    }

    #[test]
    fn partitions_cover_disjointly(mask in 1u32..128) {
        for p in partitions(mask) {
            prop_assert_eq!(p.iter().fold(0, |u, &x| u | x), mask);
            prop_assert_eq!(p.iter().map(|x| x.count_ones()).sum::<u32>(), mask.count_ones());
            prop_assert!(!p.contains(&0));
        }
    }

    #[test]
    fn jordan_text_round_trip(i in 0..ORDERS.len()) {
        let j = QuadraticJordan::field_jordan(&fields()[i]);
        let back = QuadraticJordan::parse_text(&j.to_text()).unwrap();
        prop_assert_eq!(back.q_table(), j.q_table());
        prop_assert_eq!(back.unit(), j.unit());
    }

    #[test]
    fn nearfield_spec_round_trip(i in 0..ORDERS.len()) {
        let f = &fields()[i];
        let spec = NearfieldSpec { p: f.p(), f: f.degree(), modulus: Some(f.modulus().to_vec()), phi: Some(Coupling::trivial(f).exponents().to_vec()), mul: None, sigma: None };
        let text = serde_json::to_string(&spec).unwrap();
        let parsed = NearfieldSpec::parse(&text).unwrap();
        prop_assert_eq!(&parsed, &spec);
        let (n, sigma) = parsed.build().unwrap();
        prop_assert!(sigma.is_some());
        prop_assert_eq!(n.mul(1, 1), 1);
    }
}
