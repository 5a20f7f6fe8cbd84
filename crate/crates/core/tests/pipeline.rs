use proptest::prelude::*;

use ocltl::backend::{
    read_machine, realize, verify_counter, verify_machine, write_machine, MachineFile, MealyMachine, RealizeOptions,
    Strategy as Machine, Verdict,
};
use ocltl::parse::parse_spec;
use ocltl::runtime::{check_trace, format_tuple, read_inputs, simulate, Transducer};
use ocltl::translate::{read_propspec, reduce_to_kernel, translate, write_propspec, Encoding, GuardDepth, GuardMode};

fn synth(src: &str, enc: Encoding) -> (ocltl::translate::KernelSpec, ocltl::translate::PropSpec, Verdict) {
    let spec = parse_spec(src).unwrap();
    let k = reduce_to_kernel(&spec, GuardDepth::AtomLag).unwrap();
    let p = translate(&k, enc, GuardMode::Past).unwrap();
    let v = realize(&p.formula(), &p.inputs, &p.outputs, &RealizeOptions::default()).unwrap();
    (k, p, v)
}

#[test]
fn text_to_simulation() {
    let src = "structure dlo; spec G { y < x }";
    let (k, p, v) = synth(src, Encoding::Minterm);
    let Verdict::Realizable(m) = v else { panic!("expected a machine") };

    // Through the file formats and back.
    let p2 = read_propspec(&write_propspec(&p)).unwrap();
    assert_eq!(p2, p);
    let text = write_machine(&MachineFile {
        strategy: Machine::Mealy(m),
        meta: Some(p.meta.clone()),
    });
    let file = read_machine(&text).unwrap();
    let Machine::Mealy(m) = file.strategy else { panic!("expected a Mealy machine") };

    let mut t = Transducer::new(m, &file.meta.unwrap(), &k).unwrap();
    let inputs = read_inputs(&k.structure, "# comment\n1/2\n\n-3\n", 1).unwrap();
    let sim = simulate(&mut t, &inputs[..1], &inputs[1..], 4, 50).unwrap();
    for st in &sim.steps {
        assert!(st.outputs[0] < st.inputs[0], "{} not below {}", format_tuple(&st.outputs), format_tuple(&st.inputs));
    }
    let spec = parse_spec(src).unwrap();
    assert!(check_trace(&spec, &sim.lasso.unwrap(), GuardDepth::AtomLag).unwrap());
}

#[test]
fn verdicts_survive_file_round_trip() {
    for src in [
        "structure eq; spec G { y = x }",
        "structure eq; lookback 1; spec G (YTRUE -> { x = y[-1] })",
    ] {
        let (_, p, v) = synth(src, Encoding::Binary);
        let f = p.formula();
        let strategy = match v {
            Verdict::Realizable(m) => Machine::Mealy(m),
            Verdict::Unrealizable(c) => Machine::Moore(c),
            Verdict::Unknown(why) => panic!("{src}: {why}"),
        };
        let back = read_machine(&write_machine(&MachineFile {
            strategy: strategy.clone(),
            meta: None,
        }))
        .unwrap();
        match back.strategy {
            Machine::Mealy(m) => assert!(verify_machine(&m, &f).unwrap().holds, "{src}"),
            Machine::Moore(c) => assert!(verify_counter(&c, &f).unwrap().holds, "{src}"),
        }
    }
}

#[test]
fn encodings_agree() {
    for src in ["structure eq; spec G { y != x }", "structure eq; spec F { y = x } & G { y != x }"] {
        let kinds: Vec<bool> = [Encoding::Naive, Encoding::Binary, Encoding::Minterm]
            .into_iter()
            .map(|enc| matches!(synth(src, enc).2, Verdict::Realizable(_)))
            .collect();
        assert!(kinds.windows(2).all(|w| w[0] == w[1]), "{src}: {kinds:?}");
    }
}

fn arb_mealy() -> impl Strategy<Value = MealyMachine> {
    (1usize..5, 0usize..3, 1usize..3).prop_flat_map(|(n, ins, outs)| {
        let row = prop::collection::vec((prop::collection::vec(any::<bool>(), outs), 0..n), 1 << ins);
        prop::collection::vec(row, n).prop_map(move |trans| MealyMachine {
            inputs: (0..ins).map(|i| format!("i{i}")).collect(),
            outputs: (0..outs).map(|o| format!("o{o}")).collect(),
            init: 0,
            trans,
        })
    })
}

proptest! {
    #[test]
    fn minimize_preserves_runs(
        m in arb_mealy(),
        word in prop::collection::vec(prop::collection::vec(any::<bool>(), 2), 0..12),
    ) {
        let small = m.minimize();
        prop_assert!(small.len() <= m.len());
        let word: Vec<Vec<bool>> = word.into_iter().map(|mut v| { v.truncate(m.inputs.len()); v }).collect();
        prop_assert_eq!(small.run(&word), m.run(&word));
        prop_assert_eq!(small.minimize().len(), small.len());
    }
}
