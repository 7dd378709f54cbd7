use plt_core::lambda::{beta_eta_equal, typecheck, word_term, Mode, Signature, Term, Type};
use plt_core::registers::{
    compose_update, machine_to_lambda, random_machine, random_update, run_machine,
    update_to_lambda, update_type, validate_update, RegisterUpdate,
};
use plt_core::two_way::compile;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LETTERS: [char; 2] = ['a', 'b'];

fn sig() -> Signature {
    Signature::from_str_letters("ab").unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn composition_is_associative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dims: Vec<usize> = (0..4).map(|_| rng.gen_range(0..=4)).collect();
        let s1 = random_update(&mut rng, dims[1], dims[0], &LETTERS, 2);
        let s2 = random_update(&mut rng, dims[2], dims[1], &LETTERS, 2);
        let s3 = random_update(&mut rng, dims[3], dims[2], &LETTERS, 2);
        let left = compose_update(&compose_update(&s1, &s2).unwrap(), &s3).unwrap();
        let right = compose_update(&s1, &compose_update(&s2, &s3).unwrap()).unwrap();
        prop_assert_eq!(validate_update(&left), Ok(()));
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(compose_update(&RegisterUpdate::identity(dims[0]), &s1).unwrap(), s1.clone());
        prop_assert_eq!(compose_update(&s1, &RegisterUpdate::identity(dims[1])).unwrap(), s1);
    }

    #[test]
    fn encoding_respects_composition(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (l, k, n) = (rng.gen_range(0..=3), rng.gen_range(0..=3), rng.gen_range(0..=3));
        let s = random_update(&mut rng, k, l, &LETTERS, 2);
        let s2 = random_update(&mut rng, n, k, &LETTERS, 2);
        let st = update_to_lambda(&s).unwrap();
        let st2 = update_to_lambda(&s2).unwrap();
        typecheck(&st, &update_type(k, l), &sig(), Mode::Planar).unwrap();
        let composite = update_to_lambda(&compose_update(&s, &s2).unwrap()).unwrap();
        let staged = Term::lam("zz", Term::app(st2, Term::app(st, Term::var("zz"))));
        prop_assert!(beta_eta_equal(&composite, &staged, &update_type(n, l), &sig()).unwrap());
    }

    #[test]
    fn content_equation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_update(&mut rng, 0, 1, &LETTERS, 5);
        let readout = Term::lam("f", Term::app(Term::var("f"), Term::constant("eps")));
        let applied = Term::app(update_to_lambda(&s).unwrap(), readout);
        let content = s.content().unwrap();
        prop_assert!(beta_eta_equal(&applied, &word_term(&content), &Type::Base, &sig()).unwrap());
    }

    #[test]
    fn machines_agree_with_their_compilations(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=3);
        let m = random_machine(&mut rng, n, &['a', 'b'], &sig(), 2);
        let l = machine_to_lambda(&m).unwrap();
        let t = compile(&l).unwrap();
        for _ in 0..8 {
            let len = rng.gen_range(0..=6);
            let w: String = (0..len).map(|_| LETTERS[rng.gen_range(0..2)]).collect();
            let expected = run_machine(&m, &w).unwrap();
            prop_assert_eq!(l.run_oracle(&w).unwrap(), expected.clone());
            prop_assert_eq!(t.run_word(&w).unwrap(), Some(expected));
        }
    }
}

#[test]
fn identity_updates_never_write() {
    let m = plt_core::registers::RegisterMachine::new(
        1,
        vec!['a', 'b'],
        sig(),
        [
            ('a', RegisterUpdate::identity(1)),
            ('b', RegisterUpdate::identity(1)),
        ]
        .into_iter()
        .collect(),
    )
    .unwrap();
    let t = compile(&machine_to_lambda(&m).unwrap()).unwrap();
    for w in ["", "a", "abba"] {
        assert_eq!(run_machine(&m, w).unwrap(), "");
        assert_eq!(t.run_word(w).unwrap().as_deref(), Some(""));
    }
}
