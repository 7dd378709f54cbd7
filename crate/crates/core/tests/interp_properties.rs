use plt_core::diagram::Diagram;
use plt_core::interp::{interp_closed, interp_type};
use plt_core::lambda::random::{random_affine_type, TermGen};
use plt_core::lambda::{normalize, typecheck, Mode, Signature, Term, Type};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sig() -> Signature {
    Signature::from_str_letters("ab").unwrap()
}

fn sample(seed: u64) -> (Term, Type) {
    let sig = sig();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = TermGen::new(&sig);
    let ty = random_affine_type(&mut rng, 2);
    (g.closed(&mut rng, &ty, 5), ty)
}

fn interp(t: &Term, ty: &Type) -> Diagram {
    interp_closed(t, ty, &sig(), Mode::Planar).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eta_expansion_is_invisible(seed in any::<u64>()) {
        let (t, ty) = sample(seed);
        if let Type::Lin(..) = ty {
            let x = "eta_x";
            let expanded = Term::lam(x, Term::app(t.clone(), Term::var(x)));
            prop_assert_eq!(interp(&expanded, &ty), interp(&t, &ty));
        }
    }

    #[test]
    fn beta_steps_decrease(seed in any::<u64>(), picks in prop::collection::vec(any::<usize>(), 0..40)) {
        let (t, ty) = sample(seed);
        let mut cur = t;
        let mut d = interp(&cur, &ty);
        for p in picks {
            let n = cur.redex_count();
            if n == 0 {
                break;
            }
            let next = cur.contract_redex(p % n).unwrap();
            typecheck(&next, &ty, &sig(), Mode::Planar).unwrap();
            let e = interp(&next, &ty);
            prop_assert!(e.leq(&d).unwrap(), "{} -> {}", cur, next);
            cur = next;
            d = e;
        }
        let nf = interp(&normalize(&cur).unwrap(), &ty);
        prop_assert!(nf.leq(&d).unwrap());
    }

    #[test]
    fn edge_count_is_bounded_by_base_occurrences(seed in any::<u64>()) {
        let (t, ty) = sample(seed);
        let j = typecheck(&t, &ty, &sig(), Mode::Planar).unwrap();
        let d = plt_core::interp::interp_term(&j, &plt_core::interp::InterpEnv::for_mode(sig(), Mode::Planar)).unwrap();
        prop_assert!(d.edges().len() <= j.derivation.base_occurrences());
        prop_assert_eq!(d.cod(), &interp_type(&ty).unwrap());
    }
}
