use dsign_core::census::{triangle_census, triangle_signs};
use dsign_core::cycle_space::{basis_coordinates, decompose_hamiltonian, is_even_subgraph, span, EdgeSet};
use dsign_core::graph::{circle_symmetric_difference, edge_count};
use dsign_core::group::{fourth_element, pair_sums};
use dsign_core::oracle::{circle_count, hamiltonian_spectrum, CircleTable};
use dsign_core::solver::{construct_witnesses, predict_spectrum, verify_witnesses};
use dsign_core::switching::{apply, is_normalized_at, normalize_at, normalized, SwitchingFunction};
use dsign_core::{Circle, Path, SignCounts, SignedCompleteGraph, Triangle, Vertex, F22};
use proptest::collection::vec;
use proptest::prelude::*;

fn sign() -> impl Strategy<Value = F22> {
    (0u8..4).prop_map(F22::from_bits)
}

fn graph(n: usize) -> impl Strategy<Value = SignedCompleteGraph> {
    vec(sign(), edge_count(n)).prop_map(move |s| SignedCompleteGraph::from_edge_signs(n, s).unwrap())
}

fn ordering(n: usize) -> impl Strategy<Value = Vec<Vertex>> {
    Just((1..=n).collect::<Vec<_>>()).prop_shuffle()
}

/// A graph with a switching function and a Hamiltonian vertex order.
fn instance(min: usize, max: usize) -> impl Strategy<Value = (SignedCompleteGraph, SwitchingFunction, Vec<Vertex>)> {
    (min..=max).prop_flat_map(|n| {
        (graph(n), vec(sign(), n).prop_map(SwitchingFunction::new), ordering(n))
    })
}

fn relabel(g: &SignedCompleteGraph, perm: &[Vertex]) -> SignedCompleteGraph {
    let n = g.n();
    let mut signs = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            signs.push((perm[u - 1], perm[v - 1], g.sign(u, v)));
        }
    }
    SignedCompleteGraph::build(n, &signs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn group_laws(x in sign(), y in sign(), z in sign()) {
        prop_assert_eq!(x + y, y + x);
        prop_assert_eq!((x + y) + z, x + (y + z));
        prop_assert_eq!(x + x, F22::E);
        prop_assert_eq!(x + F22::E, x);
        if x != y && y != z && x != z {
            let w = fourth_element(x, y, z).unwrap();
            prop_assert!(w != x && w != y && w != z);
        } else {
            prop_assert!(fourth_element(x, y, z).is_err());
        }
    }

    #[test]
    fn pair_sums_shapes(y1 in sign(), y2 in sign(), z1 in sign(), z2 in sign()) {
        let Ok(sums) = pair_sums(y1, y2, z1, z2) else {
            prop_assert!(y1 == y2 || y1 == F22::E || y2 == F22::E || z1 == z2);
            return Ok(());
        };
        let mut shape = SignCounts::from_slice(&sums).shape();
        shape.sort_unstable();
        prop_assert!(shape == [1, 1, 1, 1] || shape == [0, 0, 2, 2], "shape {:?}", shape);
    }

    #[test]
    fn circle_sign_ignores_rotation_and_direction((g, _, order) in instance(3, 9), shift in 0usize..9) {
        let n = g.n();
        let base = g.cycle_sign(&order);
        let mut rotated = order.clone();
        rotated.rotate_left(shift % n);
        prop_assert_eq!(g.cycle_sign(&rotated), base);
        rotated.reverse();
        prop_assert_eq!(g.cycle_sign(&rotated), base);
        let c = Circle::new(order.clone()).unwrap();
        prop_assert_eq!(g.walk_sign(&c).unwrap(), base);
        prop_assert!(c.is_hamiltonian(n));
    }

    #[test]
    fn switching_preserves_circle_signs_and_census((g, z, order) in instance(3, 8)) {
        let h = apply(&g, &z).unwrap();
        prop_assert_eq!(h.cycle_sign(&order), g.cycle_sign(&order));
        prop_assert_eq!(triangle_census(&h).unwrap(), triangle_census(&g).unwrap());
        // Open paths pick up the switching values at their two endpoints.
        let path = Path::new(order.clone()).unwrap();
        let ends = z.get(order[0]) + z.get(order[order.len() - 1]);
        prop_assert_eq!(h.walk_sign(&path).unwrap(), g.walk_sign(&path).unwrap() + ends);
    }

    #[test]
    fn normalization_postconditions((g, _, _) in instance(3, 8), pick in 0usize..8) {
        let n = g.n();
        let v = pick % n + 1;
        let (h, z) = normalize_at(&g, v).unwrap();
        prop_assert!(is_normalized_at(&h, v));
        prop_assert_eq!(apply(&g, &z).unwrap(), h.clone());
        for u in (1..=n).filter(|&u| u != v) {
            for w in (u + 1..=n).filter(|&w| w != v) {
                prop_assert_eq!(h.sign(u, w), g.tri(u, w, v));
            }
        }
        prop_assert_eq!(normalized(&h, v).unwrap(), h);
    }

    #[test]
    fn insertion_adds_the_triangle_sign((g, _, order) in instance(4, 9), slot in 0usize..8) {
        let n = g.n();
        let v = order[n - 1];
        let circle = Circle::new(order[..n - 1].to_vec()).unwrap();
        let i = slot % (n - 1);
        let (a, b) = (order[i], order[(i + 1) % (n - 1)]);
        let grown = circle.insert_vertex(v, a, b).unwrap();
        let t = Triangle::new(v, a, b).unwrap();
        prop_assert_eq!(circle_symmetric_difference(&g, &circle, &t).unwrap(), grown.clone());
        prop_assert_eq!(
            g.walk_sign(&grown).unwrap(),
            g.walk_sign(&circle).unwrap() + g.triangle_sign(&t).unwrap()
        );
        prop_assert!(grown.is_hamiltonian(n));
    }

    #[test]
    fn hub_fan_decomposes_circles((g, _, order) in instance(3, 9), pick in 0usize..9) {
        let n = g.n();
        let hub = pick % n + 1;
        let c = Circle::new(order).unwrap();
        let fan = decompose_hamiltonian(&g, &c, hub).unwrap();
        prop_assert_eq!(fan.len(), n - 2);
        let sum: F22 = fan.iter().map(|t| g.triangle_sign(t).unwrap()).sum();
        prop_assert_eq!(sum, g.walk_sign(&c).unwrap());
        let edges = EdgeSet::from_circle(n, &c).unwrap();
        prop_assert!(is_even_subgraph(&edges));
        prop_assert_eq!(span(n, &basis_coordinates(&edges, hub).unwrap()), edges);
    }

    #[test]
    fn prediction_contains_spectrum((g, z, order) in instance(3, 7)) {
        let spectrum = hamiltonian_spectrum(&g).unwrap();
        prop_assert_eq!(spectrum.total(), circle_count(g.n()));
        let prediction = predict_spectrum(&g).unwrap();
        prop_assert!(prediction.admits(spectrum.realized()), "{} vs {}", prediction, spectrum.realized());
        let switched = apply(&g, &z).unwrap();
        prop_assert_eq!(hamiltonian_spectrum(&switched).unwrap(), spectrum);
        prop_assert_eq!(hamiltonian_spectrum(&relabel(&g, &order)).unwrap(), spectrum);
        prop_assert_eq!(triangle_signs(&relabel(&g, &order)), triangle_signs(&g));
    }

    #[test]
    fn constructed_witnesses_verify((g, z, _) in instance(6, 9)) {
        match construct_witnesses(&g) {
            Ok(ws) => {
                prop_assert!(verify_witnesses(&g, &ws).is_ok());
                // Circle signs survive switching, so the same circles witness the switched graph.
                prop_assert!(verify_witnesses(&apply(&g, &z).unwrap(), &ws).is_ok());
            }
            Err(e) => prop_assert!(triangle_signs(&g).len() <= 2, "{}", e),
        }
    }
}

#[test]
fn circle_table_matches_direct_enumeration() {
    for n in 3..=8 {
        let table = CircleTable::new(n).unwrap();
        assert_eq!(table.len() as u64, circle_count(n));
        let g = dsign_core::gen::gen_random(n, n as u64);
        assert_eq!(table.spectrum(&g), hamiltonian_spectrum(&g).unwrap());
        assert_eq!(table.realized(&g), hamiltonian_spectrum(&g).unwrap().realized());
    }
}
