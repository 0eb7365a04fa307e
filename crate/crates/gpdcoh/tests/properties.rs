//! Randomized structural properties, driven by seeded generators so every
//! failure is reproducible from the printed seed.

use gpdcoh::cochain::{
    cup_product, normalized_rep_complex, rep_complex, ruth_complex, Nerve,
};
use gpdcoh::division::{to_division, DivisionPresentation};
use gpdcoh::groupoid::{
    is_morphism_classical, is_morphism_division, FiniteGroupoid, GroupoidData,
    GroupoidMorphism,
};
use gpdcoh::matrix::{self, SparseMat};
use gpdcoh::randgen::RandGen;
use gpdcoh::rat::Rat;
use gpdcoh::rep::{gauge_twist, rep_from_data, rep_to_data, trivial_rep};
use num::Zero;
use proptest::prelude::*;

fn unit_at(g: &FiniteGroupoid, x: usize) -> usize {
    (0..g.n_arrows())
        .find(|&h| g.is_unit(h) && g.src(h) == x)
        .expect("every object carries a unit")
}

/// Object map a candidate arrow map would have to induce: send `x` to the
/// target of the image of its unit.
fn derived_obj_map(g: &FiniteGroupoid, arr_map: &[usize]) -> Vec<usize> {
    (0..g.n_objects())
        .map(|x| g.tgt(arr_map[unit_at(g, x)]))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn rank_plus_nullity_is_column_count(seed in any::<u64>()) {
        let mut gen = RandGen::new(seed);
        let rows = gen.range(0, 7);
        let cols = gen.range(0, 7);
        let m = gen.matrix(rows, cols);
        prop_assert_eq!(matrix::rank(&m) + matrix::kernel_basis(&m).len(), cols);
    }

    #[test]
    fn groupoid_survives_json_round_trip(seed in any::<u64>()) {
        let g = RandGen::new(seed).groupoid();
        let text = serde_json::to_string(&g.to_data()).unwrap();
        let parsed: GroupoidData = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(FiniteGroupoid::from_data(&parsed).unwrap(), g);
    }

    #[test]
    fn representation_survives_json_round_trip(seed in any::<u64>()) {
        let mut gen = RandGen::new(seed);
        let g = gen.small_groupoid(10);
        let e = gen.rep_bounded(&g, 3);
        let text = serde_json::to_string(&rep_to_data(&g, &e)).unwrap();
        let back = rep_from_data(&g, &serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back.dims, e.dims);
        prop_assert_eq!(back.act, e.act);
    }

    #[test]
    fn division_presentation_reconstructs_the_groupoid(seed in any::<u64>()) {
        let g = RandGen::new(seed).groupoid();
        let div = to_division(&g);
        prop_assert!(div.check_axioms().is_ok());
        let text = serde_json::to_string(&div.to_data()).unwrap();
        let back = DivisionPresentation::from_data(&serde_json::from_str(&text).unwrap())
            .unwrap();
        prop_assert_eq!(back.to_groupoid().unwrap(), g);
    }

    #[test]
    fn differentials_square_to_zero_on_applications(seed in any::<u64>()) {
        let mut gen = RandGen::new(seed);
        let g = gen.small_groupoid(8);
        let e = gen.rep_bounded(&g, 3);
        let r = gen.valid_ruth_sized(&g, 2);
        for cx in [rep_complex(&g, &e, 2).unwrap(), ruth_complex(&g, &r, 2).unwrap()] {
            for k in 0..2 {
                let v = gen.vector(cx.dim(k));
                let dd = cx.differential(k + 1).mul_vec(&cx.differential(k).mul_vec(&v));
                prop_assert!(dd.iter().all(Rat::is_zero));
            }
        }
    }

    #[test]
    fn gauge_twisting_preserves_cohomology(seed in any::<u64>()) {
        let mut gen = RandGen::new(seed);
        let g = gen.small_groupoid(6);
        let r = gen.valid_ruth_sized(&g, 2);
        let eta: Vec<SparseMat> = (0..g.n_arrows())
            .map(|h| {
                let shape = (r.dims0[g.tgt(h)], r.dims1[g.src(h)]);
                if g.is_unit(h) {
                    SparseMat::zero(shape.0, shape.1)
                } else {
                    gen.matrix(shape.0, shape.1)
                }
            })
            .collect();
        let twisted = gauge_twist(&g, &r, &eta).unwrap();
        let dims = ruth_complex(&g, &r, 2).unwrap().cohomology_dims(2).unwrap();
        let twisted_dims =
            ruth_complex(&g, &twisted, 2).unwrap().cohomology_dims(2).unwrap();
        prop_assert_eq!(dims, twisted_dims);
    }

    #[test]
    fn normalized_complex_has_the_same_cohomology(seed in any::<u64>()) {
        let mut gen = RandGen::new(seed);
        let g = gen.small_groupoid(8);
        let e = gen.rep_bounded(&g, 3);
        let full = rep_complex(&g, &e, 2).unwrap().cohomology_dims(2).unwrap();
        let (sub, _inclusion) = normalized_rep_complex(&g, &e, 2).unwrap();
        let normalized = sub.cohomology_dims(2).unwrap();
        prop_assert_eq!(full, normalized);
    }

    #[test]
    fn morphism_criteria_agree(seed in any::<u64>()) {
        let mut gen = RandGen::new(seed);
        let g = gen.small_groupoid(8);
        let n = g.n_arrows();
        let mut candidates: Vec<Vec<usize>> = vec![(0..n).collect()];
        candidates.push(vec![unit_at(&g, gen.range(0, g.n_objects() - 1)); n]);
        candidates.push((0..n).map(|_| gen.range(0, n - 1)).collect());
        let mut dent: Vec<usize> = (0..n).collect();
        dent[gen.range(0, n - 1)] = gen.range(0, n - 1);
        candidates.push(dent);
        for arr_map in candidates {
            let division = is_morphism_division(&g, &g, &arr_map);
            let obj_map = derived_obj_map(&g, &arr_map);
            let classical = is_morphism_classical(
                &g,
                &g,
                &GroupoidMorphism { obj_map: obj_map.clone(), arr_map: arr_map.clone() },
            );
            prop_assert_eq!(
                division.is_ok(),
                classical.is_ok(),
                "map {:?}: division {:?}, classical {:?}",
                arr_map,
                division,
                classical
            );
            if let Ok(induced) = division {
                prop_assert_eq!(induced, obj_map);
            }
        }
    }

    #[test]
    fn cup_product_satisfies_the_leibniz_rule(seed in any::<u64>()) {
        let mut gen = RandGen::new(seed);
        let g = gen.small_groupoid(6);
        let e = gen.rep_bounded(&g, 2);
        let scalar = trivial_rep(&g, 1);
        let nerve = Nerve::up_to(&g, 3);
        let d_e = rep_complex(&g, &e, 3).unwrap();
        let d_s = rep_complex(&g, &scalar, 3).unwrap();
        let p = gen.range(0, 2);
        let q = gen.range(0, 2 - p);
        let u = gen.vector(d_e.dim(p));
        let f = gen.vector(d_s.dim(q));
        let lhs = d_e.differential(p + q).mul_vec(&cup_product(
            &g, &nerve, &e.dims, p, &u, q, &f,
        ));
        let du = d_e.differential(p).mul_vec(&u);
        let df = d_s.differential(q).mul_vec(&f);
        let term1 = cup_product(&g, &nerve, &e.dims, p + 1, &du, q, &f);
        let term2 = cup_product(&g, &nerve, &e.dims, p, &u, q + 1, &df);
        let sign = if p % 2 == 0 { Rat::from_integer(1.into()) } else {
            Rat::from_integer((-1).into())
        };
        for i in 0..lhs.len() {
            let rhs = &term1[i] + &(&sign * &term2[i]);
            prop_assert_eq!(&lhs[i], &rhs, "entry {}", i);
        }
    }
}
