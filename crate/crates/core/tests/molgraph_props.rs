mod common;

use hyperpath::molgraph::{
    canonical_form, parse_molecule, serialize_molecule, Atom, Bond, BondOrder, Element,
    MolecularGraph,
};
use hyperpath::rewrite::RightPredicate;
use proptest::prelude::*;

const ELEMENTS: [Element; 4] = [Element::H, Element::C, Element::N, Element::O];
const ORDERS: [BondOrder; 4] = [
    BondOrder::Single,
    BondOrder::Double,
    BondOrder::Triple,
    BondOrder::Aromatic,
];

/// Atom labels plus an upper-triangle bond table (`None` = no bond).
#[derive(Debug, Clone)]
struct RawGraph {
    atoms: Vec<(Element, i8)>,
    bonds: Vec<Option<BondOrder>>,
}

impl RawGraph {
    fn n(&self) -> usize {
        self.atoms.len()
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        let (i, j) = (i.min(j), i.max(j));
        i * self.n() - i * (i + 1) / 2 + (j - i - 1)
    }

    fn bond(&self, i: usize, j: usize) -> Option<BondOrder> {
        self.bonds[self.slot(i, j)]
    }

    fn build(&self) -> MolecularGraph {
        let atoms = self
            .atoms
            .iter()
            .enumerate()
            .map(|(i, &(element, charge))| Atom {
                id: i as u32 + 1,
                element,
                charge,
            })
            .collect();
        let mut bonds = Vec::new();
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                if let Some(order) = self.bond(i, j) {
                    bonds.push(Bond {
                        a: i as u32 + 1,
                        b: j as u32 + 1,
                        order,
                    });
                }
            }
        }
        MolecularGraph::new(atoms, bonds).unwrap()
    }
}

fn raw_graph(max_atoms: usize) -> impl Strategy<Value = RawGraph> {
    (1..=max_atoms).prop_flat_map(|n| {
        let atom = (0..ELEMENTS.len(), prop_oneof![8 => Just(0i8), 1 => -1i8..=1]);
        let bond = prop_oneof![
            3 => Just(None),
            2 => (0..ORDERS.len()).prop_map(|k| Some(ORDERS[k])),
        ];
        (
            prop::collection::vec(atom, n),
            prop::collection::vec(bond, n * (n - 1) / 2),
        )
            .prop_map(|(atoms, bonds)| RawGraph {
                atoms: atoms.into_iter().map(|(e, c)| (ELEMENTS[e], c)).collect(),
                bonds,
            })
    })
}

fn perm_of(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

/// Exhaustive isomorphism test, independent of the canonicalizer: extends a
/// partial vertex map one atom at a time, checking labels and every bond
/// against already-mapped atoms.
fn isomorphic(a: &RawGraph, b: &RawGraph) -> bool {
    if a.n() != b.n() {
        return false;
    }
    let mut sorted_a = a.atoms.clone();
    let mut sorted_b = b.atoms.clone();
    sorted_a.sort();
    sorted_b.sort();
    if sorted_a != sorted_b {
        return false;
    }
    fn extend(a: &RawGraph, b: &RawGraph, map: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = map.len();
        if i == a.n() {
            return true;
        }
        for j in 0..b.n() {
            if used[j] || a.atoms[i] != b.atoms[j] {
                continue;
            }
            if (0..i).any(|k| a.bond(i, k) != b.bond(j, map[k])) {
                continue;
            }
            map.push(j);
            used[j] = true;
            if extend(a, b, map, used) {
                return true;
            }
            used[j] = false;
            map.pop();
        }
        false
    }
    extend(a, b, &mut Vec::new(), &mut vec![false; b.n()])
}

fn permute_raw(g: &RawGraph, perm: &[usize]) -> RawGraph {
    let n = g.n();
    let mut atoms = vec![g.atoms[0]; n];
    for i in 0..n {
        atoms[perm[i]] = g.atoms[i];
    }
    let mut out = RawGraph {
        atoms,
        bonds: vec![None; g.bonds.len()],
    };
    for i in 0..n {
        for j in i + 1..n {
            let s = out.slot(perm[i], perm[j]);
            out.bonds[s] = g.bond(i, j);
        }
    }
    out
}

/// A small edit of `g` that is usually, not always, non-isomorphic.
fn mutate(g: &RawGraph, which: usize, choice: usize) -> RawGraph {
    let mut out = g.clone();
    if out.bonds.is_empty() || which % 2 == 0 {
        let i = which / 2 % out.n();
        out.atoms[i].0 = ELEMENTS[choice % ELEMENTS.len()];
    } else {
        let s = which / 2 % out.bonds.len();
        out.bonds[s] = match choice % 5 {
            4 => None,
            k => Some(ORDERS[k]),
        };
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn canonical_form_ignores_atom_order(
        (g, perm) in raw_graph(10).prop_flat_map(|g| { let n = g.n(); (Just(g), perm_of(n)) })
    ) {
        let mol = g.build();
        prop_assert_eq!(canonical_form(&mol), canonical_form(&mol.permuted(&perm)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn keys_agree_with_exhaustive_isomorphism(
        (g, perm, which, choice) in raw_graph(8).prop_flat_map(|g| {
            let n = g.n();
            (Just(g), perm_of(n), 0usize..64, 0usize..20)
        })
    ) {
        let h = permute_raw(&mutate(&g, which, choice), &perm);
        let same_key = canonical_form(&g.build()) == canonical_form(&h.build());
        prop_assert_eq!(same_key, isomorphic(&g, &h));
    }

    #[test]
    fn keys_differ_for_independent_non_isomorphic_pairs(a in raw_graph(8), b in raw_graph(8)) {
        let same_key = canonical_form(&a.build()) == canonical_form(&b.build());
        prop_assert_eq!(same_key, isomorphic(&a, &b));
    }

    #[test]
    fn random_graphs_survive_serialization(g in raw_graph(10)) {
        let mol = g.build();
        let back = parse_molecule(&serialize_molecule(&mol)).unwrap();
        prop_assert_eq!(canonical_form(&back), canonical_form(&mol));
    }
}

#[test]
fn oracle_sanity() {
    let path = RawGraph {
        atoms: vec![(Element::C, 0), (Element::O, 0), (Element::C, 0)],
        bonds: vec![Some(BondOrder::Single), None, Some(BondOrder::Single)],
    };
    let flipped = permute_raw(&path, &[2, 0, 1]);
    assert!(isomorphic(&path, &flipped));
    let mut other = path.clone();
    other.bonds[0] = Some(BondOrder::Double);
    assert!(!isomorphic(&path, &other));
}

#[test]
fn network_molecules_round_trip() {
    let expansion = common::expand(4, vec![RightPredicate::NoRingsUpTo(3), RightPredicate::NoCumulatedDoubleBonds]);
    let mut molecules: Vec<MolecularGraph> = expansion
        .network
        .vertices()
        .iter()
        .filter_map(|v| v.molecule.clone())
        .collect();
    molecules.push(parse_molecule(common::AMMONIA).unwrap());
    assert!(molecules.len() >= 17);
    for mol in molecules {
        let text = serialize_molecule(&mol);
        let back = parse_molecule(&text).unwrap();
        assert_eq!(canonical_form(&back), canonical_form(&mol), "{text}");
        assert_eq!(serialize_molecule(&back), text);
    }
}
