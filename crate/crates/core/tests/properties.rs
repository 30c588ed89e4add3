mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{classify, naive_reduce, surface_faces};
use handleweave::criteria::{enumerate_products, ProductFamilies};
use handleweave::families::{build_surface, named_words, partition_words, words, Family, FamilyInstance, WordPartition};
use handleweave::freegroup::{Letter, Sign, Word};
use handleweave::ribbon::{Parity, RibbonSurface};
use handleweave::stallings::{certify_injective, fold, fold_in_order, graph_from_words, retract};

fn letter(rank: usize) -> impl Strategy<Value = Letter> {
    (0..rank, any::<bool>()).prop_map(|(g, p)| Letter::new(g, if p { Sign::Plus } else { Sign::Minus }))
}

fn raw_letters(rank: usize, max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(letter(rank), 0..max)
}

fn word(rank: usize, max: usize) -> impl Strategy<Value = Word> {
    raw_letters(rank, max).prop_map(move |l| Word::reduce(l, rank).unwrap())
}

fn parity() -> impl Strategy<Value = Parity> {
    any::<bool>().prop_map(|odd| if odd { Parity::Odd } else { Parity::Even })
}

/// A surface grown from the disk by random band additions.
fn surface() -> impl Strategy<Value = RibbonSurface> {
    prop::collection::vec((any::<u32>(), any::<u32>(), parity()), 0..9).prop_map(|steps| {
        let mut s = RibbonSurface::disk();
        for (a, b, p) in steps {
            let len = s.num_ends() + 2;
            let p0 = a as usize % len;
            let q0 = (p0 + 1 + b as usize % (len - 1)) % len;
            s = s.add_band((p0, q0), p).unwrap();
        }
        s
    })
}

fn instance() -> impl Strategy<Value = FamilyInstance> {
    (0..Family::ALL.len(), 1usize..9, 0usize..9, any::<bool>())
        .prop_map(|(f, n, k, primed)| FamilyInstance::new(Family::ALL[f], n, k, primed))
        .prop_filter("valid instance", |i| i.validate().is_ok())
}

proptest! {
    #[test]
    fn reduce_matches_naive(raw in raw_letters(3, 40)) {
        let w = Word::reduce(raw.clone(), 3).unwrap();
        let naive = naive_reduce(raw);
        prop_assert_eq!(w.letters(), naive.as_slice());
    }

    #[test]
    fn reduce_is_idempotent(w in word(3, 30)) {
        prop_assert_eq!(Word::reduce(w.letters().iter().copied(), 3).unwrap(), w.clone());
        prop_assert!(w.letters().windows(2).all(|p| !p[0].cancels(p[1])));
    }

    #[test]
    fn associativity(a in word(2, 12), b in word(2, 12), c in word(2, 12)) {
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn identity_and_inverse(a in word(4, 20)) {
        let e = Word::identity(4);
        prop_assert_eq!(a.multiply(&e).unwrap(), a.clone());
        prop_assert_eq!(e.multiply(&a).unwrap(), a.clone());
        prop_assert!(a.multiply(&a.inverse()).unwrap().is_identity());
        prop_assert!(a.inverse().multiply(&a).unwrap().is_identity());
        prop_assert_eq!(a.inverse().inverse(), a);
    }

    #[test]
    fn multiply_matches_naive(a in word(2, 20), b in word(2, 20)) {
        let mut raw = a.letters().to_vec();
        raw.extend_from_slice(b.letters());
        let ab = a.multiply(&b).unwrap();
        let naive = naive_reduce(raw);
        prop_assert_eq!(ab.letters(), naive.as_slice());
        prop_assert!(ab.len() <= a.len() + b.len());
    }

    #[test]
    fn text_round_trip(w in word(2, 30), v in word(5, 30)) {
        prop_assert_eq!(Word::parse(&w.to_text(), 2).unwrap(), w.clone());
        prop_assert_eq!(Word::parse(&v.to_text(), 5).unwrap(), v);
    }

    #[test]
    fn power_laws(w in word(2, 8), m in -4i64..5, n in -4i64..5) {
        prop_assert_eq!(w.pow(m).multiply(&w.pow(n)).unwrap(), w.pow(m + n));
    }

    #[test]
    fn retraction_is_a_homomorphism(a in word(4, 20), b in word(4, 20)) {
        let ab = retract(&a.multiply(&b).unwrap(), 2).unwrap();
        let rab = retract(&a, 2).unwrap().multiply(&retract(&b, 2).unwrap()).unwrap();
        prop_assert_eq!(ab, rab);
    }

    #[test]
    fn trace_partitions_corners(s in surface()) {
        let t = s.trace();
        let mut seen = vec![false; t.count()];
        for c in s.corners() {
            let id = t.corner(c);
            prop_assert!(id < t.count());
            seen[id] = true;
        }
        prop_assert!(s.num_ends() == 0 || seen.iter().all(|&x| x));
        prop_assert_eq!(t.count(), surface_faces(&s).count);
    }

    #[test]
    fn classification_is_consistent(s in surface()) {
        let inv = s.invariants();
        prop_assert_eq!(inv.euler_characteristic, 1 - s.num_bands() as i64);
        let all_even = (0..s.num_bands()).all(|b| s.parity(b) == Parity::Even);
        prop_assert_eq!(inv.orientable, all_even);
        let b = inv.boundary_components as i64;
        match (inv.genus, inv.crosscap_number) {
            (Some(g), None) => prop_assert_eq!(inv.euler_characteristic, 2 - 2 * g as i64 - b),
            (None, Some(c)) => {
                prop_assert!(c >= 1);
                prop_assert_eq!(inv.euler_characteristic, 2 - c as i64 - b)
            }
            other => prop_assert!(false, "bad classification {:?}", other),
        }
        prop_assert_eq!(classify(&s), (inv.orientable, inv.genus_or_crosscap(), inv.boundary_components));
    }

    #[test]
    fn add_band_obeys_rule(s in surface(), a in any::<u32>(), b in any::<u32>(), p in parity()) {
        let len = s.num_ends() + 2;
        let slots = (a as usize % len, 0);
        let slots = (slots.0, (slots.0 + 1 + b as usize % (len - 1)) % len);
        let predicted = s.boundary_components() as i64 + s.predicted_delta(slots, p);
        let t = s.add_band(slots, p).unwrap();
        prop_assert_eq!(t.boundary_components() as i64, predicted);
        prop_assert_eq!(t.num_bands(), s.num_bands() + 1);
    }

    #[test]
    fn json_round_trip(s in surface()) {
        let text = serde_json::to_string(&s).unwrap();
        let back: RibbonSurface = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn fold_properties(ws in prop::collection::vec(word(3, 10), 1..6), seed in any::<u64>()) {
        let g = graph_from_words(&ws).unwrap();
        let f = fold(&g);
        prop_assert!(f.is_folded());
        prop_assert_eq!(fold(&f), f.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert_eq!(fold_in_order(&g, &mut rng), f.clone());
        prop_assert!(f.subgroup_rank().unwrap() <= ws.len());
        for w in &ws {
            prop_assert!(f.contains(w).unwrap());
        }
        if ws.len() >= 2 {
            let p = ws[0].multiply(&ws[1].inverse()).unwrap();
            prop_assert!(f.contains(&p).unwrap());
        }
    }

    #[test]
    fn injective_sets_have_no_short_relation(ws in prop::collection::vec(word(2, 6), 1..4)) {
        prop_assume!(ws.iter().all(|w| !w.is_identity()));
        let v = certify_injective(&ws).unwrap();
        let e = enumerate_products(ProductFamilies::One(&ws), 3, u64::MAX).unwrap();
        if v.injective {
            prop_assert!(e.counterexample.is_none(), "{:?}", e.counterexample);
        }
        if e.counterexample.is_some() {
            prop_assert!(!v.injective);
        }
    }

    #[test]
    fn family_instances_are_consistent(inst in instance()) {
        let ws = words(&inst).unwrap();
        prop_assert_eq!(ws.len(), inst.band_count());
        let built = build_surface(&inst).unwrap();
        prop_assert_eq!(built.surface.num_bands(), ws.len());
        prop_assert_eq!(built.boundary_history.len(), ws.len() + 1);
        prop_assert_eq!(*built.boundary_history.last().unwrap(), built.surface.boundary_components());
        let named = named_words(&inst).unwrap();
        match partition_words(inst.family, &named) {
            WordPartition::OneFamily { words } => prop_assert_eq!(words.len(), ws.len()),
            WordPartition::TwoFamily { a, b } => {
                prop_assert_eq!(a.len() + b.len(), ws.len());
                let xc = Word::parse("x^3", 2).unwrap();
                let yc = Word::parse("y^3", 2).unwrap();
                prop_assert!(a.iter().all(|w| w.to_text().contains("x^3") || w == &xc));
                prop_assert!(b.iter().all(|w| w.to_text().contains("y^3") || w == &yc));
            }
        }
    }
}
