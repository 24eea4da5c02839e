mod common;

use common::{dense_distribution, random_basis, random_source, tv};
use quancorde::noisysim::statevector;
use quancorde::transpile::{apply_layout, decompose_to_basis, random_layouts, route, CouplingGraph, Layout};
use quancorde::{Circuit, Gate};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_layout(rng: &mut impl Rng, n: usize, physical: usize) -> Layout {
    let mut p: Vec<usize> = (0..physical).collect();
    p.shuffle(rng);
    p.truncate(n);
    Layout::new(p, physical).unwrap()
}

#[test]
fn decomposition_preserves_the_state_up_to_global_phase() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..40 {
        let measured = random_source(&mut rng, 4, 30);
        let unitary = measured.gates().iter().filter(|g| !matches!(g, Gate::Measure { .. }));
        let c = Circuit::from_gates(4, 4, unitary.cloned().collect());
        let basis = decompose_to_basis(&c).unwrap();
        assert!(basis.gates().iter().all(|g| g.is_basis()));
        let (a, b) = (statevector(&c).unwrap(), statevector(&basis).unwrap());
        let k = (0..a.len()).max_by(|&i, &j| a[i].norm().total_cmp(&a[j].norm())).unwrap();
        let phase = b[k] / a[k];
        assert!((phase.norm() - 1.0).abs() < 1e-9);
        let worst = a.iter().zip(&b).map(|(x, y)| (x * phase - y).norm()).fold(0.0, f64::max);
        assert!(worst <= 1e-9, "max deviation {worst}");
    }
}

#[test]
fn layouts_preserve_cx_count_and_depth() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..100 {
        let n = rng.random_range(2..7);
        let c = random_basis(&mut rng, n, 50);
        let physical = n + rng.random_range(0..6);
        let l = random_layout(&mut rng, n, physical);
        let placed = apply_layout(&c, &l).unwrap();
        assert_eq!(placed.cx_count(), c.cx_count());
        assert_eq!(placed.cx_depth(), c.cx_depth());
        assert_eq!(placed.num_qubits(), l.num_physical());
    }
}

#[test]
fn routing_on_a_line_preserves_the_output_distribution() {
    let line = CouplingGraph::line(7);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..30 {
        let c = random_basis(&mut rng, 7, 40);
        let l = random_layout(&mut rng, 7, 7);
        let routed = route(&c, &line, &l).unwrap();
        for g in routed.gates() {
            if let Gate::CX { control, target } = *g {
                assert!(line.are_adjacent(control, target));
            }
        }
        let d = tv(&dense_distribution(&c), &dense_distribution(&routed));
        assert!(d <= 1e-9, "tv {d}");
    }
}

#[test]
fn forty_nine_distinct_heavy_hex_layouts() {
    let g = CouplingGraph::heavy_hex_27();
    let mut c = Circuit::new(5, 5);
    c.cx(0, 1).cx(1, 2).cx(2, 3).cx(3, 4).measure_all();
    let layouts = random_layouts(&c, &g, 49, 11).unwrap();
    assert_eq!(layouts.len(), 49);
    for (i, a) in layouts.iter().enumerate() {
        assert!(g.is_connected_on(a.as_slice()));
        for b in &layouts[i + 1..] {
            assert_ne!(a.as_slice(), b.as_slice());
        }
    }
}
