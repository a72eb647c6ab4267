use nfu_core::setcode::{
    automorphism_count, collapse, decode_ordinal, e_rel, iso_eq, ordinal_code, usc_t,
    valid_graphs_on, HFSet,
};

#[test]
fn e_agrees_with_collapse_membership() {
    let graphs: Vec<_> = (1..=4).flat_map(valid_graphs_on).collect();
    let sets: Vec<HFSet> = graphs.iter().map(|g| collapse(g).unwrap()).collect();
    for (a, sa) in graphs.iter().zip(&sets) {
        for (b, sb) in graphs.iter().zip(&sets) {
            assert_eq!(e_rel(a, b).unwrap(), sb.contains(sa), "{sa} vs {sb}");
        }
    }
}

#[test]
fn isomorphism_is_collapse_equality() {
    let graphs = valid_graphs_on(3);
    for a in &graphs {
        for b in &graphs {
            assert_eq!(
                iso_eq(a, b).unwrap(),
                collapse(a).unwrap() == collapse(b).unwrap()
            );
        }
    }
}

#[test]
fn codes_are_rigid_and_t_fixed() {
    for g in (1..=4).flat_map(valid_graphs_on) {
        assert_eq!(automorphism_count(&g).unwrap(), 1);
        assert_eq!(collapse(&usc_t(&g)).unwrap(), collapse(&g).unwrap());
    }
}

#[test]
fn relabelling_preserves_collapse() {
    for g in valid_graphs_on(4) {
        let h = g.relabel(|v| format!("n_{v}"));
        assert_eq!(collapse(&h).unwrap(), collapse(&g).unwrap());
    }
}

#[test]
fn ordinals_round_trip() {
    for n in 0..8 {
        let g = ordinal_code(n).unwrap();
        assert_eq!(decode_ordinal(&g).unwrap(), Some(n));
        assert_eq!(collapse(&g).unwrap(), HFSet::von_neumann(n));
    }
}
