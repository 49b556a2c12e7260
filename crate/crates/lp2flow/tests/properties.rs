mod common;

use lp2flow::arith::{int, ratio, Int, Rat};
use lp2flow::mapback::map_back_chain;
use lp2flow::model::{lp_x, Class, Instance};
use lp2flow::pipeline::{compile, compile_with};
use lp2flow::reduce::{binary_representation, len_to_2len, lp_to_len, Stage};
use lp2flow::verify::check;
use lp2flow::witness::{construct_witness, witness_chain};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn binary_representation_reconstructs(z in -1_000_000i64..1_000_000) {
        let (sign, bits) = binary_representation(&int(z));
        let sum: Int = bits.iter().map(|&l| Int::from(1) << l).sum();
        prop_assert_eq!(Int::from(sign) * sum, int(z));
        prop_assert!(bits.windows(2).all(|w| w[0] > w[1]));
        prop_assert_eq!(sign == 0, z == 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lp_len_keeps_x(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let lp = common::random_lp(&mut rng, common::SMALL, 3);
        let (len, _) = lp_to_len(&lp).unwrap();
        let x = lp_x(&lp);
        prop_assert_eq!(len.a.max_abs().max(len.b.iter().map(|v| v.abs()).max().unwrap()), x);
    }

    #[test]
    fn coefficient_ranges_shrink_along_the_chain(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let lp = common::random_lp(&mut rng, common::SMALL, 3);
        let (len, _) = lp_to_len(&lp).unwrap();
        let (two, _) = len_to_2len(&len).unwrap();
        prop_assert!(two.a.entries().iter().all(|e| e.2.abs() <= int(2)));
        let c = compile(&lp, &Rat::zero()).unwrap();
        let Instance::KLen(one) = &c.sources[3] else { panic!("1-LEN level") };
        prop_assert_eq!(one.k, 1);
        prop_assert!(one.a.entries().iter().all(|e| e.2.abs() <= int(1)));
    }

    #[test]
    fn exact_witnesses_verify_at_every_level(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let (lp, x) = common::feasible_lp(&mut rng, common::TINY);
        let c = compile(&lp, &Rat::zero()).unwrap();
        let mut sol = lp2flow::model::Solution::Vector(x.clone());
        for stage in Stage::ALL {
            let k = stage.index();
            sol = construct_witness(stage, &c.sources[k], &sol, &c.traces[k]).unwrap();
            let target = if k == 8 { Instance::TwoCf(c.instance.clone()) } else { c.sources[k + 1].clone() };
            let rep = check(target.class(), &target, &sol, &Rat::zero()).unwrap();
            prop_assert!(rep.is_exact(), "{} witness: {}", stage.name(), rep);
        }
        let flow = witness_chain(&c.sources, &c.traces, &x).unwrap();
        let (back, _) = map_back_chain(&flow, &c.traces).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn budget_decreases_and_audits_hold(seed in any::<u64>(), den in 1i64..10_000) {
        let mut rng = common::rng(seed);
        let lp = common::random_lp(&mut rng, common::SMALL, 7);
        let c = compile_with(&lp, &ratio(1, den), false).unwrap();
        prop_assert!(c.report.all_audits_hold(), "{:?}", c.report.failed_audits());
        prop_assert!(c.budget.eps.windows(2).all(|w| w[1] <= w[0] && w[1].is_positive()));
    }

    #[test]
    fn zero_budget_is_zero_everywhere(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let lp = common::random_lp(&mut rng, common::TINY, 2);
        let c = compile_with(&lp, &Rat::zero(), false).unwrap();
        prop_assert!(c.budget.eps.iter().all(|e| e.is_zero()));
    }

    #[test]
    fn perturbed_lp_solutions_are_measured_exactly(seed in any::<u64>(), num in 1i64..100) {
        let mut rng = common::rng(seed);
        let (lp, x) = common::feasible_lp(&mut rng, common::SMALL);
        let inst = Instance::Lp(lp.clone());
        let mut y = x.clone();
        let d = ratio(num, 7);
        y[0] += &d;
        let rep = check(Class::Lp, &inst, &lp2flow::model::Solution::Vector(y.clone()), &Rat::zero()).unwrap();
        let ax = lp.a.mul_vec(&y);
        let worst = ax
            .iter()
            .zip(&lp.b)
            .map(|(v, b)| v - Rat::from_integer(b.clone()))
            .chain(std::iter::once(
                Rat::from_integer(lp.k.clone())
                    - lp.c.iter().zip(&y).map(|(c, v)| Rat::from_integer(c.clone()) * v).sum::<Rat>(),
            ))
            .fold(Rat::zero(), |m, v| if v > m { v } else { m });
        prop_assert_eq!(rep.max(), worst);
    }
}
