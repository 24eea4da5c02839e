mod common;

use common::{random_basis, random_clifford, random_source};
use proptest::prelude::*;
use quancorde::circuit::{emit_qasm, parse_qasm};
use quancorde::Circuit;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn assert_same(a: &Circuit, b: &Circuit) {
    assert_eq!(a.num_qubits(), b.num_qubits());
    assert_eq!(a.num_clbits(), b.num_clbits());
    assert_eq!(a.gates(), b.gates());
}

#[test]
fn fifty_program_corpus_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for i in 0..50 {
        let c = match i % 3 {
            0 => random_source(&mut rng, 4, 40),
            1 => random_basis(&mut rng, 5, 60),
            _ => random_clifford(&mut rng, 3, 30),
        };
        let text = emit_qasm(&c);
        let back = parse_qasm(&text).unwrap_or_else(|e| panic!("program {i}: {e}\n{text}"));
        assert_same(&c, &back);
        assert_eq!(emit_qasm(&back), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn emitted_programs_reparse_identically(seed in any::<u64>(), n in 3usize..7, gates in 0usize..80) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_source(&mut rng, n, gates);
        let back = parse_qasm(&emit_qasm(&c)).unwrap();
        prop_assert_eq!(c.gates(), back.gates());
        prop_assert_eq!(c.num_clbits(), back.num_clbits());
    }

    #[test]
    fn cx_depth_ignores_single_qubit_padding(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_basis(&mut rng, n, 40);
        let mut padded = Circuit::new(c.num_qubits(), c.num_clbits());
        for (i, g) in c.gates().iter().enumerate() {
            if i % 3 == 0 {
                padded.barrier((0..n).collect());
                padded.sx(i % n);
            }
            padded.push(g.clone());
        }
        let only_cx = Circuit::from_gates(
            n,
            0,
            c.gates().iter().filter(|g| g.qubits().len() == 2).cloned().collect(),
        );
        prop_assert_eq!(c.cx_depth(), padded.cx_depth());
        prop_assert_eq!(c.cx_depth(), only_cx.cx_depth());
    }
}
