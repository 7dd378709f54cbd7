//! Acceptance criteria 1-9. Each criterion prints one PASS/FAIL line with
//! its elapsed time; the test fails if any criterion does.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{Duration, Instant};

use plt_core::diagram::random::{random_diagram, random_polarity_word};
use plt_core::diagram::{symmetry, Diagram, Edge, Planarity, PolarityWord, Vertex};
use plt_core::interp::{interp_closed, readoff};
use plt_core::lambda::random::{depth, random_affine_type, TermGen};
use plt_core::lambda::{
    beta_eta_equal, normalize, parse_term, typecheck, word_term, Mode, Signature, Term, Type,
};
use plt_core::registers::{
    compose_update, machine_to_lambda, pipeline_compose, random_machine, random_update,
    reverse_term, run_machine, update_to_lambda, update_type, RegisterMachine, RegisterUpdate,
};
use plt_core::two_way::{
    compile, convert_convention, from_table, lambda_transducer_of, parse_table, sample_words,
    Convention, LambdaTransducer, TwoWayTransducer,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const AB: [char; 2] = ['a', 'b'];

const PAD: &str = "\
states: q0+ q1+ q2+ q3- q4+
q0 > q1 eps
q1 < q2 eps
q1 0 q1 0
q1 1 q1 1
q1 2 q3 eps
q3 > q4 1
q3 0 q4 1
q3 1 q4 eps
q3 2 q4 1
q4 2 q1 2
";

type Outcome = Result<String, String>;
type Oracle = Box<dyn Fn(&str) -> String>;
type Criterion = (u32, &'static str, f64, fn() -> Outcome);

fn ab() -> Signature {
    Signature::from_str_letters("ab").unwrap()
}

fn p(s: &str) -> Term {
    parse_term(s).unwrap()
}

/// Every word over `alphabet` of length at most `max_len`, shortest first.
fn all_words(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut words = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| alphabet.iter().map(move |c| format!("{w}{c}")))
            .collect();
        words.extend(layer.iter().cloned());
    }
    words
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn reversed(w: &str) -> String {
    w.chars().rev().collect()
}

fn pad() -> TwoWayTransducer {
    from_table(&parse_table(PAD).unwrap()).unwrap()
}

fn lt(
    output: &str,
    kappa: Type,
    steps: &[(char, &str)],
    init: &str,
    out: &str,
    mode: Mode,
) -> LambdaTransducer {
    LambdaTransducer::new(
        steps.iter().map(|(a, _)| *a).collect(),
        Signature::from_str_letters(output).unwrap(),
        kappa,
        steps.iter().map(|(a, t)| (*a, p(t))).collect(),
        p(init),
        p(out),
        mode,
    )
}

fn l_id() -> LambdaTransducer {
    lt(
        "ab",
        Type::endo(),
        &[('a', "\\f z. f (a z)"), ('b', "\\f z. f (b z)")],
        "\\x. x",
        "\\f. f eps",
        Mode::Planar,
    )
}

fn l_const() -> LambdaTransducer {
    lt(
        "abc",
        Type::Base,
        &[('a', "\\x. x"), ('b', "\\x. x")],
        "eps",
        "\\x. c x",
        Mode::Planar,
    )
}

fn machine(updates: &[(char, &str)]) -> RegisterMachine {
    let updates: BTreeMap<char, RegisterUpdate> = updates
        .iter()
        .map(|&(a, w)| (a, RegisterUpdate::parse(1, &[w]).unwrap()))
        .collect();
    RegisterMachine::new(1, AB.to_vec(), ab(), updates).unwrap()
}

fn m_id() -> RegisterMachine {
    machine(&[('a', "0a"), ('b', "0b")])
}

fn m_dbl() -> RegisterMachine {
    machine(&[('a', "0aa"), ('b', "0bb")])
}

fn criterion_1() -> Outcome {
    let t = pad();
    let table = [
        ("", ""),
        ("0", "0"),
        ("2", "12"),
        ("02", "012"),
        ("012", "012"),
        ("22", "1212"),
    ];
    for (w, expected) in table {
        let found = t.run_word(w).map_err(|e| e.to_string())?;
        ensure(found.as_deref() == Some(expected), || {
            format!("{w:?} gave {found:?}, expected {expected:?}")
        })?;
    }
    Ok(format!("{} table rows", table.len()))
}

fn criterion_2() -> Outcome {
    let mut words = all_words(&AB, 8);
    words.extend(sample_words(&AB, 500, 16, 42));
    let rev = reverse_term(&ab());
    let rev_l = lambda_transducer_of(&rev, Mode::Planar).map_err(|e| e.to_string())?;
    let mut corpus: Vec<(&str, TwoWayTransducer, Oracle)> = Vec::new();
    corpus.push((
        "reverse_term",
        compile(&rev_l).unwrap(),
        Box::new(move |w: &str| rev.apply(w).unwrap()),
    ));
    let lambdas = [
        ("L_id", l_id()),
        ("L_const", l_const()),
        ("M_id", machine_to_lambda(&m_id()).unwrap()),
        ("M_dbl", machine_to_lambda(&m_dbl()).unwrap()),
    ];
    for (name, l) in lambdas {
        l.check().map_err(|e| format!("{name}: {e}"))?;
        let t = compile(&l).map_err(|e| format!("{name}: {e}"))?;
        corpus.push((name, t, Box::new(move |w: &str| l.run_oracle(w).unwrap())));
    }
    for (name, t, oracle) in &corpus {
        for w in &words {
            let expected = oracle(w);
            let found = t.run_word(w).map_err(|e| e.to_string())?;
            ensure(found.as_deref() == Some(expected.as_str()), || {
                format!("{name} on {w:?}: oracle {expected:?}, compiled {found:?}")
            })?;
        }
    }
    Ok(format!(
        "{} transducers x {} words",
        corpus.len(),
        words.len()
    ))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut diagrams = 0usize;
    let word = |rng: &mut ChaCha8Rng| random_polarity_word(rng, 4);
    let mut diagram =
        |rng: &mut ChaCha8Rng, a: &PolarityWord, b: &PolarityWord, mode: Planarity| {
            diagrams += 1;
            let density = rng.gen_range(0.3..1.0);
            random_diagram(rng, a, b, mode, &AB, 3, density)
        };
    for i in 0..1000 {
        let mode = if i % 4 == 3 {
            Planarity::Symmetric
        } else {
            Planarity::Planar
        };
        let ws: Vec<PolarityWord> = (0..6).map(|_| word(&mut rng)).collect();
        let f = diagram(&mut rng, &ws[0], &ws[1], mode);
        let g = diagram(&mut rng, &ws[1], &ws[2], mode);
        let h = diagram(&mut rng, &ws[2], &ws[3], mode);
        for d in [&f, &g, &h] {
            d.validate()
                .map_err(|e| format!("generated diagram invalid: {e}"))?;
        }
        let fg = f.compose(&g).unwrap();
        ensure(
            fg.compose(&h).unwrap() == f.compose(&g.compose(&h).unwrap()).unwrap(),
            || format!("associativity at sample {i}"),
        )?;
        ensure(
            Diagram::identity_in(&ws[0], mode).compose(&f).unwrap() == f
                && f.compose(&Diagram::identity_in(&ws[1], mode)).unwrap() == f,
            || format!("unit law at sample {i}"),
        )?;

        let f2 = diagram(&mut rng, &ws[3], &ws[4], mode);
        let g2 = diagram(&mut rng, &ws[4], &ws[5], mode);
        let interchange =
            fg.tensor(&f2.compose(&g2).unwrap()) == f.tensor(&f2).compose(&g.tensor(&g2)).unwrap();
        let ids = Diagram::identity_in(&ws[0], mode).tensor(&Diagram::identity_in(&ws[1], mode))
            == Diagram::identity_in(&ws[0].tensor(&ws[1]), mode);
        let assoc = f.tensor(&g).tensor(&h) == f.tensor(&g.tensor(&h));
        let unit = Diagram::identity_in(&PolarityWord::unit(), mode);
        let strict_unit = f.tensor(&unit) == f && unit.tensor(&f) == f;
        ensure(interchange && ids && assoc && strict_unit, || {
            format!("tensor functoriality at sample {i}")
        })?;

        let a = &ws[0];
        let id = Diagram::identity(a);
        let id_dual = Diagram::identity(&a.dual());
        let zig = Diagram::cup(a)
            .tensor(&id)
            .compose(&id.tensor(&Diagram::cap(a)))
            .unwrap();
        let zag = id_dual
            .tensor(&Diagram::cup(a))
            .compose(&Diagram::cap(a).tensor(&id_dual))
            .unwrap();
        ensure(zig == id && zag == id_dual, || {
            format!("zigzag at sample {i} for {a}")
        })?;

        let (x, y, z) = (
            random_polarity_word(&mut rng, 2),
            random_polarity_word(&mut rng, 2),
            &ws[2],
        );
        let k = diagram(&mut rng, &x.tensor(&y), z, Planarity::Planar);
        let curried = k.curry(x.len()).unwrap();
        let l = diagram(&mut rng, &x, &z.tensor(&y.dual()), Planarity::Planar);
        ensure(
            curried.uncurry(z.len()).unwrap() == k
                && l.uncurry(z.len()).unwrap().curry(x.len()).unwrap() == l,
            || format!("curry/uncurry at sample {i}"),
        )?;

        let keep: Vec<bool> = f.edges().iter().map(|_| rng.gen_bool(0.6)).collect();
        let f1 = f.without_edges(|j, _| !keep[j]);
        let keep: Vec<bool> = f1.edges().iter().map(|_| rng.gen_bool(0.6)).collect();
        let f0 = f1.without_edges(|j, _| !keep[j]);
        let keep: Vec<bool> = g.edges().iter().map(|_| rng.gen_bool(0.6)).collect();
        let g1 = g.without_edges(|j, _| !keep[j]);
        let order = f.leq(&f).unwrap()
            && f0.leq(&f1).unwrap()
            && f1.leq(&f).unwrap()
            && f0.leq(&f).unwrap()
            && (!f.leq(&f1).unwrap() || f == f1)
            && f1.compose(&g1).unwrap().leq(&fg).unwrap()
            && f1.tensor(&g1).leq(&f.tensor(&g)).unwrap()
            && Diagram::bottom_in(&ws[0], &ws[1], mode).leq(&f).unwrap();
        ensure(order, || format!("order/monotonicity at sample {i}"))?;

        let bottoms = Diagram::bottom(&ws[0], &ws[1]).tensor(&Diagram::bottom(&ws[2], &ws[3]))
            == Diagram::bottom(&ws[0].tensor(&ws[2]), &ws[1].tensor(&ws[3]));
        ensure(bottoms, || format!("bottom tensor at sample {i}"))?;
    }
    ensure(diagrams >= 1000, || {
        format!("only {diagrams} diagrams generated")
    })?;
    Ok(format!("{diagrams} random diagrams, 1000 samples"))
}

fn criterion_4() -> Outcome {
    let sig = ab();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let interp = |t: &Term, ty: &Type| {
        interp_closed(t, ty, &sig, Mode::Planar).map_err(|e| format!("{t}: {e}"))
    };
    let (mut terms, mut steps, mut attempts) = (0, 0, 0);
    while terms < 300 {
        attempts += 1;
        ensure(attempts < 100_000, || "term generator stalled".into())?;
        let mut g = TermGen::new(&sig);
        let ty = Type::lin(
            random_affine_type(&mut rng, 2),
            random_affine_type(&mut rng, 2),
        );
        let max_depth = rng.gen_range(2..=5);
        let t = g.closed(&mut rng, &ty, max_depth);
        if depth(&t) > 6 || !ty.is_purely_affine() {
            continue;
        }
        terms += 1;
        let d = interp(&t, &ty)?;
        let expanded = Term::lam("eta_x", Term::app(t.clone(), Term::var("eta_x")));
        ensure(interp(&expanded, &ty)? == d, || {
            format!("eta changes the diagram of {t}")
        })?;

        let (mut cur, mut cur_d) = (t.clone(), d.clone());
        while cur.redex_count() > 0 {
            let next = cur
                .contract_redex(rng.gen_range(0..cur.redex_count()))
                .unwrap();
            let next_d = interp(&next, &ty)?;
            ensure(next_d.leq(&cur_d).unwrap(), || {
                format!("{cur} -> {next} grows the diagram")
            })?;
            (cur, cur_d) = (next, next_d);
            steps += 1;
        }
        let nf_d = interp(&normalize(&t).unwrap(), &ty)?;
        ensure(nf_d.leq(&d).unwrap() && nf_d == cur_d, || {
            format!("normal form of {t} is not below it")
        })?;
    }
    Ok(format!("{terms} terms, {steps} β-steps"))
}

fn criterion_5() -> Outcome {
    let sig = ab();
    let words = all_words(&AB, 12);
    for w in &words {
        let d = interp_closed(&word_term(w), &Type::Base, &sig, Mode::Planar)
            .map_err(|e| e.to_string())?;
        let single = d.edges() == [Edge::new(Vertex::output(2), Vertex::output(1), w.as_str())];
        ensure(single, || format!("{w:?} gave edges {:?}", d.edges()))?;
        let back = readoff(&d).map_err(|e| e.to_string())?;
        ensure(back.as_deref() == Some(w.as_str()), || {
            format!("readoff of {w:?} gave {back:?}")
        })?;
    }
    Ok(format!("{} words", words.len()))
}

fn criterion_6() -> Outcome {
    let sig = ab();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..500 {
        let dims: Vec<usize> = (0..4).map(|_| rng.gen_range(0..=4)).collect();
        let s1 = random_update(&mut rng, dims[1], dims[0], &AB, 2);
        let s2 = random_update(&mut rng, dims[2], dims[1], &AB, 2);
        let s3 = random_update(&mut rng, dims[3], dims[2], &AB, 2);
        let left = compose_update(&compose_update(&s1, &s2).unwrap(), &s3).unwrap();
        let right = compose_update(&s1, &compose_update(&s2, &s3).unwrap()).unwrap();
        ensure(left == right, || format!("triple {i}: {s1} {s2} {s3}"))?;
    }
    for i in 0..200 {
        let (l, k, n) = (
            rng.gen_range(0..=3),
            rng.gen_range(0..=3),
            rng.gen_range(0..=3),
        );
        let s = random_update(&mut rng, k, l, &AB, 2);
        let s2 = random_update(&mut rng, n, k, &AB, 2);
        let (st, st2) = (
            update_to_lambda(&s).unwrap(),
            update_to_lambda(&s2).unwrap(),
        );
        let composite = update_to_lambda(&compose_update(&s, &s2).unwrap()).unwrap();
        let staged = Term::lam("zz", Term::app(st2, Term::app(st, Term::var("zz"))));
        let equal = beta_eta_equal(&composite, &staged, &update_type(n, l), &sig)
            .map_err(|e| e.to_string())?;
        ensure(equal, || format!("pair {i}: {s} then {s2}"))?;
    }
    let words = all_words(&AB, 10);
    for (name, m) in [("M_id", m_id()), ("M_dbl", m_dbl())] {
        let l = machine_to_lambda(&m).unwrap();
        let t = compile(&l).unwrap();
        for w in &words {
            let expected = run_machine(&m, w).unwrap();
            let lambda = l.run_oracle(w).map_err(|e| e.to_string())?;
            let compiled = t.run_word(w).map_err(|e| e.to_string())?;
            ensure(
                lambda == expected && compiled.as_deref() == Some(expected.as_str()),
                || {
                    format!("{name} on {w:?}: machine {expected:?}, λ {lambda:?}, compiled {compiled:?}")
                },
            )?;
        }
    }
    Ok(format!(
        "500 triples, 200 pairs, 2 machines x {} words",
        words.len()
    ))
}

fn round_trip_agrees(t: &TwoWayTransducer, words: &[String]) -> Result<(), String> {
    let other = match t.convention() {
        Convention::Pp => Convention::EpsPm,
        Convention::EpsPm => Convention::Pp,
    };
    let there = convert_convention(t, other).map_err(|e| e.to_string())?;
    let back = convert_convention(&there, t.convention()).map_err(|e| e.to_string())?;
    for w in words {
        let expected = t.run_word(w).map_err(|e| e.to_string())?;
        let a = there.run_word(w).map_err(|e| e.to_string())?;
        let b = back.run_word(w).map_err(|e| e.to_string())?;
        ensure(a == expected && b == expected, || {
            format!("{w:?}: {expected:?} became {a:?} / {b:?}")
        })?;
    }
    Ok(())
}

/// A transducer with random planar diagrams as components.
fn random_diagram_transducer(rng: &mut ChaCha8Rng, convention: Convention) -> TwoWayTransducer {
    let states = random_polarity_word(rng, 6);
    let out = ['x', 'y'];
    let d = |rng: &mut ChaCha8Rng, a: &PolarityWord, b: &PolarityWord| {
        let density = rng.gen_range(0.5..1.0);
        random_diagram(rng, a, b, Planarity::Planar, &out, 2, density)
    };
    let init = d(rng, &convention.start(), &states);
    let steps = AB.iter().map(|&a| (a, d(rng, &states, &states))).collect();
    let final_ = d(rng, &states, &convention.end());
    TwoWayTransducer::new(
        AB.to_vec(),
        Signature::new(out).unwrap(),
        convention,
        states,
        init,
        steps,
        final_,
        Planarity::Planar,
    )
    .unwrap()
}

fn criterion_7() -> Outcome {
    let pad_words = all_words(&['0', '1', '2'], 6);
    round_trip_agrees(&pad(), &pad_words).map_err(|e| format!("pad: {e}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..50u64 {
        let t = if i % 2 == 0 {
            let n = rng.gen_range(1..=3);
            compile(&machine_to_lambda(&random_machine(&mut rng, n, &AB, &ab(), 2)).unwrap())
                .unwrap()
        } else {
            let convention = if i % 4 == 1 {
                Convention::Pp
            } else {
                Convention::EpsPm
            };
            random_diagram_transducer(&mut rng, convention)
        };
        round_trip_agrees(&t, &sample_words(&AB, 100, 10, 700 + i))
            .map_err(|e| format!("machine {i}: {e}"))?;
    }
    Ok(format!(
        "pad on {} words, 50 machines x 100 words",
        pad_words.len()
    ))
}

fn criterion_8() -> Outcome {
    let sig = ab();
    let swap = p("\\x f. f x");
    let swap_ty = Type::lin(Type::Base, Type::lin(Type::endo(), Type::Base));
    ensure(
        typecheck(&swap, &swap_ty, &sig, Mode::Planar).is_err(),
        || "λx.λf. f x typed planar".into(),
    )?;
    typecheck(&swap, &swap_ty, &sig, Mode::Commutative)
        .map_err(|e| format!("commutative rejected swap: {e}"))?;

    // Parity of a's: each `a` exchanges the two continuations.
    let pair = Type::lin(Type::endo(), Type::lin(Type::endo(), Type::Base));
    let steps = [('a', "\\K f g. K g f"), ('b', "\\K. K")];
    let (init, out) = ("\\f g. f eps", "\\K. K (\\z. a z) (\\z. z)");
    ensure(
        lt("ab", pair.clone(), &steps, init, out, Mode::Planar)
            .check()
            .is_err(),
        || "parity transducer typed planar".into(),
    )?;
    let l = lt("ab", pair, &steps, init, out, Mode::Commutative);
    l.check().map_err(|e| e.to_string())?;
    let t = compile(&l).map_err(|e| e.to_string())?;
    ensure(t.mode() == Planarity::Symmetric, || {
        "compiled transducer is planar".into()
    })?;
    ensure(
        t.step('a').unwrap().with_mode(Planarity::Planar).is_err(),
        || "step a has no crossing".into(),
    )?;
    for w in sample_words(&AB, 200, 16, 8) {
        let expected = if w.chars().filter(|&c| c == 'a').count() % 2 == 0 {
            "a"
        } else {
            ""
        };
        let oracle = l.run_oracle(&w).map_err(|e| e.to_string())?;
        let found = t.run_word(&w).map_err(|e| e.to_string())?;
        ensure(
            oracle == expected && found.as_deref() == Some(expected),
            || format!("{w:?}: expected {expected:?}, oracle {oracle:?}, compiled {found:?}"),
        )?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let unit = PolarityWord::unit();
    for i in 0..200 {
        let (a, b) = (
            random_polarity_word(&mut rng, 4),
            random_polarity_word(&mut rng, 4),
        );
        let g = symmetry(&a, &b, Planarity::Symmetric).unwrap();
        let involution = g
            .compose(&symmetry(&b, &a, Planarity::Symmetric).unwrap())
            .unwrap()
            == Diagram::identity_in(&a.tensor(&b), Planarity::Symmetric);
        let units = symmetry(&a, &unit, Planarity::Symmetric).unwrap()
            == Diagram::identity_in(&a, Planarity::Symmetric)
            && symmetry(&unit, &a, Planarity::Symmetric).unwrap()
                == Diagram::identity_in(&a, Planarity::Symmetric);
        let planar_refused =
            a.is_empty() || b.is_empty() || symmetry(&a, &b, Planarity::Planar).is_err();
        ensure(involution && units && planar_refused, || {
            format!("γ laws at sample {i} for {a}, {b}")
        })?;
    }
    Ok("swap typing, parity transducer on 200 words, 200 γ samples".into())
}

fn criterion_9() -> Outcome {
    let sig = ab();
    let r = reverse_term(&sig);
    let mut chain = r.clone();
    let mut times = Vec::new();
    for n in 1..=12 {
        if n > 1 {
            chain = pipeline_compose(&r, &chain).map_err(|e| e.to_string())?;
        }
        let repeats = if n <= 8 { 5 } else { 1 };
        let mut best = Duration::MAX;
        let mut compiled = None;
        for _ in 0..repeats {
            let start = Instant::now();
            let l =
                lambda_transducer_of(&chain, Mode::Planar).map_err(|e| format!("n={n}: {e}"))?;
            let t = compile(&l).map_err(|e| format!("n={n}: {e}"))?;
            best = best.min(start.elapsed());
            compiled = Some(t);
        }
        let t = compiled.expect("at least one repeat");
        for w in ["", "a", "ab", "aab", "babba"] {
            let expected = if n % 2 == 0 {
                w.to_string()
            } else {
                reversed(w)
            };
            let found = t.run_word(w).map_err(|e| e.to_string())?;
            ensure(found.as_deref() == Some(expected.as_str()), || {
                format!("n={n} on {w:?} gave {found:?}")
            })?;
        }
        times.push(best.as_secs_f64());
    }
    let mut worst: f64 = 0.0;
    for n in 4..12 {
        let ratio = times[n] / times[n - 1];
        worst = worst.max(ratio);
        ensure(ratio <= 3.0, || {
            format!("time({})/time({n}) = {ratio:.2}", n + 1)
        })?;
    }
    Ok(format!(
        "worst ratio {worst:.2} for n >= 4, time(12) = {:.2}s",
        times[11]
    ))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 9] = [
        (1, "pad table", 1.0, criterion_1),
        (
            2,
            "compiled transducers match normalization",
            60.0,
            criterion_2,
        ),
        (3, "category laws on random diagrams", 60.0, criterion_3),
        (4, "eta invariance and beta monotonicity", 60.0, criterion_4),
        (5, "words interpret as single edges", 10.0, criterion_5),
        (6, "register algebra", 60.0, criterion_6),
        (7, "convention round trips", 30.0, criterion_7),
        (8, "commutative variant", 30.0, criterion_8),
        (9, "pipeline chains scale", 120.0, criterion_9),
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stdout().lock();
    for (n, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let (ok, detail) = match outcome {
            Ok(d) if secs < budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {budget}s budget")),
            Err(e) => (false, e),
        };
        let status = if ok { "PASS" } else { "FAIL" };
        writeln!(out, "criterion {n} {status} {name} ({secs:.2}s): {detail}").unwrap();
        if !ok {
            failed.push(n);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
