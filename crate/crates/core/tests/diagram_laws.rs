use plt_core::diagram::random::{random_diagram, random_polarity_word};
use plt_core::diagram::{Diagram, Planarity, PolarityWord};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ALPHABET: [char; 2] = ['a', 'b'];

fn word(rng: &mut ChaCha8Rng) -> PolarityWord {
    random_polarity_word(rng, 4)
}

fn diagram(rng: &mut ChaCha8Rng, a: &PolarityWord, b: &PolarityWord, mode: Planarity) -> Diagram {
    let density = rng.gen_range(0.3..1.0);
    random_diagram(rng, a, b, mode, &ALPHABET, 3, density)
}

fn sub_diagram(rng: &mut ChaCha8Rng, d: &Diagram) -> Diagram {
    let keep: Vec<bool> = d.edges().iter().map(|_| rng.gen_bool(0.6)).collect();
    d.without_edges(|i, _| !keep[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn composition_is_associative_and_unital(seed in any::<u64>(), symmetric in any::<bool>()) {
        let mode = if symmetric { Planarity::Symmetric } else { Planarity::Planar };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c, d) = (word(&mut rng), word(&mut rng), word(&mut rng), word(&mut rng));
        let f = diagram(&mut rng, &a, &b, mode);
        let g = diagram(&mut rng, &b, &c, mode);
        let h = diagram(&mut rng, &c, &d, mode);
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(Diagram::identity_in(&a, mode).compose(&f).unwrap(), f.clone());
        prop_assert_eq!(f.compose(&Diagram::identity_in(&b, mode)).unwrap(), f);
    }

    #[test]
    fn tensor_is_a_strict_functor(seed in any::<u64>()) {
        let mode = Planarity::Planar;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ws: Vec<PolarityWord> = (0..6).map(|_| word(&mut rng)).collect();
        let f = diagram(&mut rng, &ws[0], &ws[1], mode);
        let g = diagram(&mut rng, &ws[1], &ws[2], mode);
        let f2 = diagram(&mut rng, &ws[3], &ws[4], mode);
        let g2 = diagram(&mut rng, &ws[4], &ws[5], mode);
        let left = f.compose(&g).unwrap().tensor(&f2.compose(&g2).unwrap());
        let right = f.tensor(&f2).compose(&g.tensor(&g2)).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(
            Diagram::identity(&ws[0]).tensor(&Diagram::identity(&ws[1])),
            Diagram::identity(&ws[0].tensor(&ws[1]))
        );
        let h = diagram(&mut rng, &ws[2], &ws[5], mode);
        prop_assert_eq!(f.tensor(&f2).tensor(&h), f.tensor(&f2.tensor(&h)));
        let unit = Diagram::identity(&PolarityWord::unit());
        prop_assert_eq!(f.tensor(&unit), f.clone());
        prop_assert_eq!(unit.tensor(&f), f);
    }

    #[test]
    fn zigzag_equations(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_polarity_word(&mut rng, 6);
        let id = Diagram::identity(&a);
        let id_dual = Diagram::identity(&a.dual());
        let first = Diagram::cup(&a).tensor(&id).compose(&id.tensor(&Diagram::cap(&a))).unwrap();
        prop_assert_eq!(first, id);
        let second = id_dual.tensor(&Diagram::cup(&a)).compose(&Diagram::cap(&a).tensor(&id_dual)).unwrap();
        prop_assert_eq!(second, id_dual);
    }

    #[test]
    fn curry_and_uncurry_are_inverse(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (word(&mut rng), word(&mut rng), word(&mut rng));
        let f = diagram(&mut rng, &a.tensor(&b), &c, Planarity::Planar);
        let curried = f.curry(a.len()).unwrap();
        prop_assert_eq!(curried.dom(), &a);
        prop_assert_eq!(curried.uncurry(c.len()).unwrap(), f);
        let g = diagram(&mut rng, &a, &c.tensor(&b.dual()), Planarity::Planar);
        prop_assert_eq!(g.uncurry(c.len()).unwrap().curry(a.len()).unwrap(), g);
    }

    #[test]
    fn order_is_a_monotone_partial_order(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (word(&mut rng), word(&mut rng), word(&mut rng));
        let f = diagram(&mut rng, &a, &b, Planarity::Planar);
        let f1 = sub_diagram(&mut rng, &f);
        let f2 = sub_diagram(&mut rng, &f1);
        prop_assert!(f.leq(&f).unwrap());
        prop_assert!(f1.leq(&f).unwrap() && f2.leq(&f1).unwrap() && f2.leq(&f).unwrap());
        if f.leq(&f1).unwrap() {
            prop_assert_eq!(&f, &f1);
        }
        let g = diagram(&mut rng, &b, &c, Planarity::Planar);
        let g1 = sub_diagram(&mut rng, &g);
        prop_assert!(f1.compose(&g1).unwrap().leq(&f.compose(&g).unwrap()).unwrap());
        prop_assert!(f1.tensor(&g1).leq(&f.tensor(&g)).unwrap());
        prop_assert!(Diagram::bottom(&a, &b).leq(&f).unwrap());
    }

    #[test]
    fn bottoms_tensor(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ws: Vec<PolarityWord> = (0..4).map(|_| word(&mut rng)).collect();
        prop_assert_eq!(
            Diagram::bottom(&ws[0], &ws[1]).tensor(&Diagram::bottom(&ws[2], &ws[3])),
            Diagram::bottom(&ws[0].tensor(&ws[2]), &ws[1].tensor(&ws[3]))
        );
    }

    #[test]
    fn symmetry_laws(seed in any::<u64>()) {
        let mode = Planarity::Symmetric;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ws: Vec<PolarityWord> = (0..4).map(|_| word(&mut rng)).collect();
        let (a, b) = (&ws[0], &ws[1]);
        let twice = Diagram::symmetry(a, b).compose(&Diagram::symmetry(b, a)).unwrap();
        prop_assert_eq!(twice, Diagram::identity_in(&a.tensor(b), mode));
        let unit = PolarityWord::unit();
        prop_assert_eq!(Diagram::symmetry(a, &unit), Diagram::identity_in(a, mode));
        let f = diagram(&mut rng, a, &ws[2], mode);
        let g = diagram(&mut rng, b, &ws[3], mode);
        let left = f.tensor(&g).compose(&Diagram::symmetry(&ws[2], &ws[3])).unwrap();
        let right = Diagram::symmetry(a, b).compose(&g.tensor(&f)).unwrap();
        prop_assert_eq!(left, right);
    }
}
