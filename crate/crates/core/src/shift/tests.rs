use proptest::prelude::*;

use super::*;
use crate::field::Field;
use crate::homology::{report, Support};
use crate::poset::Norm;
use crate::verify::random::{random_module, Profile};

fn q() -> Field {
    Field::rational()
}

fn region(caps: &[u32]) -> PosetDescriptor {
    PosetDescriptor::grid(caps)
}

fn d(e: &[u32]) -> Degree {
    Degree::grid(e)
}

fn free_at(caps: &[u32], x: &[u32]) -> Presentation {
    Presentation::free(region(caps), q(), vec![d(x)]).unwrap()
}

/// `P(0)/(X_1^k)`.
fn truncated(k: u32) -> Presentation {
    let f = q();
    Presentation::new(region(&[k + 1]), f.clone(), vec![d(&[])], vec![(d(&[k]), vec![(0, f.one())])]).unwrap()
}

fn simple_at_zero(r: usize) -> Presentation {
    let f = q();
    let rels = (0..r)
        .map(|i| {
            let mut e = vec![0; r];
            e[i] = 1;
            (d(&e), vec![(0, f.one())])
        })
        .collect();
    Presentation::new(region(&vec![2; r]), f, vec![d(&[])], rels).unwrap()
}

/// Same presentation on a bigger box, for evaluating beyond the region.
fn widened(v: &Presentation, cap: u32) -> Presentation {
    let n = match v.poset() {
        PosetDescriptor::Grid(b) => b.directions(),
        _ => unreachable!(),
    };
    v.with_region(region(&vec![cap; n.max(3) as usize])).unwrap()
}

fn dims(v: &Presentation, degrees: &[Degree]) -> Vec<usize> {
    degrees.iter().map(|x| v.dim(x).unwrap()).collect()
}

fn is_zero_on(v: &Presentation, degrees: &[Degree]) -> bool {
    dims(v, degrees).iter().all(|&n| n == 0)
}

fn pd_sup(v: &Presentation) -> i64 {
    report(v, 1, None).unwrap().pd(Norm::Sup)
}

#[test]
fn shift_of_free_modules() {
    assert_eq!(shift(&free_at(&[3, 3], &[2, 0]), 1).unwrap().generators(), &[d(&[1, 0])]);
    assert_eq!(shift(&free_at(&[3, 3], &[0, 1]), 1).unwrap().generators(), &[d(&[0, 1])]);
    let s = shift(&simple_at_zero(2), 1).unwrap();
    assert!(is_zero_on(&s, &region(&[2, 2]).degrees()));
}

#[test]
fn shift_rejects_young_modules() {
    let v = Presentation::free(PosetDescriptor::young(3), q(), vec![Degree::young(&[1]).unwrap()]).unwrap();
    assert_eq!(shift(&v, 1), Err(Error::UnsupportedKind("young")));
    assert_eq!(bs(&v), Err(Error::UnsupportedKind("young")));
}

#[test]
fn bs_of_free_modules() {
    assert_eq!(bs(&free_at(&[3, 3, 1], &[2, 3, 0])).unwrap().generators(), &[d(&[1, 2, 0])]);
    assert_eq!(bs(&free_at(&[3], &[])).unwrap().generators(), &[d(&[])]);
}

#[test]
fn bs_powers() {
    let t = truncated(1);
    assert!(is_zero_on(&bs_power(&t, 1).unwrap(), &region(&[2]).degrees()));
    let p = bs_power(&free_at(&[3, 3], &[2, 1]), 2).unwrap();
    assert_eq!(p.generators(), &[d(&[])]);
    assert_eq!(is_induced_at(&p, &d(&[]), None).unwrap(), Some(1));
    assert_eq!(bs_power(&t, 0).unwrap(), t);
}

#[test]
fn sheafification_ranks() {
    assert_eq!(sheafify_poset(&free_at(&[3, 3], &[1, 2])).unwrap().rank, 1);
    assert_eq!(sheafify_poset(&truncated(1)).unwrap().rank, 0);
    let s = sheafify_poset(&free_at(&[3, 3], &[1, 2]).direct_sum(&free_at(&[3, 3], &[2, 0])).unwrap()).unwrap();
    assert_eq!(s, InducedModule { base: d(&[]), rank: 2 });
}

#[test]
fn torsion_of_basic_modules() {
    let (r, t) = torsion_part(&free_at(&[2, 2], &[1, 0]), None).unwrap();
    assert!(r.is_torsion_free && !r.is_torsion);
    assert!(t.generators().is_empty());

    let (r, t) = torsion_part(&truncated(1), None).unwrap();
    assert!(r.is_torsion && !r.is_torsion_free);
    assert_eq!(r.torsion_dims, vec![(d(&[]), 1)]);
    assert_eq!(t.generators(), &[d(&[])]);
    assert_eq!(dims(&widened(&t, 3), &region(&[3]).degrees()), vec![1, 0, 0, 0]);
}

#[test]
fn torsion_of_a_direct_sum_is_the_torsion_summand() {
    let f = q();
    let caps = [3, 3];
    let free = free_at(&caps, &[1, 1]);
    let tors = Presentation::new(
        region(&caps),
        f.clone(),
        vec![d(&[0, 1])],
        vec![(d(&[2, 1]), vec![(0, f.one())]), (d(&[0, 3]), vec![(0, f.one())])],
    )
    .unwrap();
    let (r, t) = torsion_part(&free.direct_sum(&tors).unwrap(), None).unwrap();
    let all = region(&caps).degrees();
    assert_eq!(dims(&t, &all), dims(&tors, &all));
    assert!(!r.is_torsion && !r.is_torsion_free);
}

#[test]
fn torsion_heights_of_basic_modules() {
    assert_eq!(torsion_heights(&free_at(&[2, 2], &[1, 1]), None).unwrap(), vec![(1, -1), (2, -1)]);
    let t = truncated(2);
    assert_eq!(torsion_heights(&t, None).unwrap(), vec![(1, 1)]);
    assert_eq!(pd_sup(&t), 2);
    assert_eq!(torsion_heights(&simple_at_zero(2), None).unwrap(), vec![(1, 0), (2, 0)]);
}

#[test]
fn induced_detection() {
    assert_eq!(is_induced_at(&free_at(&[3, 3], &[1, 2]), &d(&[1, 2]), None).unwrap(), Some(1));
    let t = truncated(1);
    for x in region(&[3]).degrees() {
        assert_eq!(is_induced_at(&t, &x, None).unwrap(), None, "at {x}");
    }
    let two = free_at(&[3, 3], &[1, 0]).direct_sum(&free_at(&[3, 3], &[1, 0])).unwrap();
    assert_eq!(is_induced_at(&two, &d(&[1, 0]), None).unwrap(), Some(2));
    assert_eq!(is_induced_at(&two, &d(&[]), None).unwrap(), None);
}

#[test]
fn report_document_shape() {
    let (r, _) = torsion_part(&simple_at_zero(2), None).unwrap();
    let j = r.to_json();
    assert_eq!(j["isTorsion"], true);
    assert_eq!(j["tht"][1]["direction"], 2);
    assert_eq!(j["tht"][1]["value"], 0);
    assert_eq!(j["torsionDims"][0]["dim"], 1);
    assert_eq!(InducedModule { base: d(&[]), rank: 3 }.to_json(), serde_json::json!({"base": [], "rank": 3}));
}

// Properties on random modules. The oracles below evaluate the module far out
// instead of using the stabilization join.

const FAR: u32 = 9;

fn sample(seed: u64) -> Presentation {
    random_module(seed, &Profile::grid(3, 3)).unwrap()
}

fn far_corner(x: &Degree) -> Degree {
    Degree::Grid(grid(x).join(&GridDegree::from_dense(&[FAR - 1; 3])))
}

fn torsion_dim_far(w: &Presentation, x: &Degree) -> usize {
    let m = w.structure_map(x, &far_corner(x)).unwrap();
    m.cols() - rank(w.field(), &m)
}

fn support_dims(s: &Support) -> usize {
    s.iter().map(|(_, m)| m).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn shift_matches_pullback(seed in 0u64..10_000, i in 1u32..=3) {
        let v = sample(seed);
        let s = widened(&shift(&v, i).unwrap(), 4);
        let w = widened(&v, 5);
        let box4 = region(&[3, 3, 3]).degrees();
        for x in &box4 {
            let xi = Degree::Grid(grid(x).raise(i));
            prop_assert_eq!(s.dim(x).unwrap(), w.dim(&xi).unwrap());
            for p in x.predecessors() {
                let pi = Degree::Grid(grid(&p).raise(i));
                // the same generators and relations are active on both sides
                prop_assert_eq!(s.structure_map(&p, x).unwrap(), w.structure_map(&pi, &xi).unwrap());
            }
        }
    }

    #[test]
    fn shifts_commute(seed in 0u64..10_000, i in 1u32..=3, j in 1u32..=3) {
        let v = sample(seed);
        let a = shift(&shift(&v, i).unwrap(), j).unwrap();
        let b = shift(&shift(&v, j).unwrap(), i).unwrap();
        let all = region(&[3, 3, 3]).degrees();
        prop_assert_eq!(dims(&a, &all), dims(&b, &all));
    }

    #[test]
    fn bs_is_the_colimit_of_shifts(seed in 0u64..10_000) {
        // (Σ_[n] V)_x = V_{x + o_1 + ... + o_n}, constant in n once n covers all directions
        let v = sample(seed);
        let b = widened(&bs(&v).unwrap(), 3);
        let w = widened(&v, 4);
        let one = GridDegree::from_dense(&[1, 1, 1]);
        for x in region(&[3, 3, 3]).degrees() {
            prop_assert_eq!(b.dim(&x).unwrap(), w.dim(&Degree::Grid(grid(&x).add(&one))).unwrap());
        }
    }

    #[test]
    fn bs_lowers_generation_degree(seed in 0u64..10_000) {
        let v = sample(seed);
        let gd = report(&v, 0, None).unwrap().gd(Norm::Sup);
        if gd >= 1 {
            prop_assert!(report(&bs(&v).unwrap(), 0, None).unwrap().gd(Norm::Sup) < gd);
        }
    }

    #[test]
    fn torsion_dims_match_far_evaluation(seed in 0u64..10_000) {
        let v = sample(seed);
        let (r, t) = torsion_part(&v, Some(&region(&[3, 3, 3]))).unwrap();
        let w = widened(&v, FAR);
        let tw = widened(&t, FAR);
        for x in region(&[3, 3, 3]).degrees() {
            let expect = torsion_dim_far(&w, &x);
            let got = r.torsion_dims.iter().find(|(y, _)| *y == x).map_or(0, |(_, n)| *n);
            prop_assert_eq!(got, expect, "report at {}", x);
            prop_assert_eq!(tw.dim(&x).unwrap(), expect, "presentation at {}", x);
        }
        prop_assert_eq!(r.is_torsion_free, r.torsion_dims.is_empty());
    }

    #[test]
    fn torsion_sequence_is_exact_after_shifting(seed in 0u64..10_000, i in 1u32..=3) {
        let v = sample(seed);
        let (_, t) = torsion_part(&v, None).unwrap();
        let f = torsion_free_part(&v).unwrap();
        let (t, f, v) = (widened(&t, 4), widened(&f, 4), widened(&v, 4));
        let all = region(&[3, 3, 3]).degrees();
        for (a, b, c) in [
            (shift(&t, i).unwrap(), shift(&f, i).unwrap(), shift(&v, i).unwrap()),
            (bs(&t).unwrap(), bs(&f).unwrap(), bs(&v).unwrap()),
        ] {
            let sum: Vec<usize> = dims(&a, &all).iter().zip(dims(&b, &all)).map(|(x, y)| x + y).collect();
            prop_assert_eq!(sum, dims(&c, &all));
        }
        // the quotient is torsion free
        prop_assert!(torsion_part(&f, None).unwrap().0.is_torsion_free);
    }

    #[test]
    fn torsion_heights_match_wide_scan(seed in 0u64..10_000) {
        let v = sample(seed);
        let tht = torsion_heights(&v, None).unwrap();
        let w = widened(&v, 6);
        let pd = pd_sup(&v);
        for (i, t) in tht {
            let mut best = -1i64;
            for x in region(&[5, 5, 5]).degrees() {
                let m = w.structure_map(&x, &Degree::Grid(grid(&x).raise(i))).unwrap();
                if rank(w.field(), &m) < m.cols() {
                    best = best.max(i64::from(grid(&x).get(i)));
                }
            }
            prop_assert_eq!(t, best, "direction {}", i);
            prop_assert!(t < pd);
        }
    }

    #[test]
    fn bs_lowers_torsion_heights(seed in 0u64..10_000) {
        let v = sample(seed);
        let before = torsion_heights(&v, None).unwrap();
        let after = torsion_heights(&bs(&v).unwrap(), None).unwrap();
        for (i, t) in before {
            let a = after.iter().find(|(j, _)| *j == i).map_or(-1, |(_, a)| *a);
            if t >= 0 {
                prop_assert!(a < t, "direction {}: {} then {}", i, t, a);
            } else {
                prop_assert_eq!(a, -1);
            }
        }
    }

    #[test]
    fn bs_preserves_torsion_classes(seed in 0u64..10_000) {
        let v = sample(seed);
        let (r, t) = torsion_part(&v, None).unwrap();
        let f = torsion_free_part(&v).unwrap();
        let bf = torsion_part(&bs(&f).unwrap(), None).unwrap().0;
        prop_assert!(bf.is_torsion_free);
        let bt = bs(&t.with_region(v.poset().clone()).unwrap_or(t.clone())).unwrap();
        prop_assert!(torsion_part(&bt, None).unwrap().0.is_torsion || bt.generators().is_empty());
        // torsion exactly when the sheafification vanishes
        prop_assert_eq!(sheafify_poset(&v).unwrap().rank == 0, r.is_torsion);
    }

    #[test]
    fn torsion_free_modules_embed_in_their_sheafification(seed in 0u64..10_000) {
        let v = sample(seed);
        let f = torsion_free_part(&v).unwrap();
        let rank = sheafify_poset(&f).unwrap().rank;
        prop_assert_eq!(rank, sheafify_poset(&v).unwrap().rank);
        let w = widened(&f, 4);
        for x in region(&[3, 3, 3]).degrees() {
            prop_assert!(w.dim(&x).unwrap() <= rank);
        }
        let j = stabilization_join(&f).unwrap();
        prop_assert_eq!(widened(&f, 4).dim(&Degree::Grid(j)).unwrap(), rank);
    }

    #[test]
    fn sheafification_is_idempotent(seed in 0u64..10_000) {
        let v = sample(seed);
        let s = sheafify_poset(&v).unwrap();
        let again = sheafify_poset(&s.to_presentation(v.poset(), v.field()).unwrap()).unwrap();
        prop_assert_eq!(again, s);
    }

    #[test]
    fn high_bs_powers_are_induced_at_zero(seed in 0u64..10_000) {
        let v = sample(seed);
        let pd = pd_sup(&v).max(0) as usize;
        let b = bs_power(&v, pd).unwrap();
        let rank = sheafify_poset(&v).unwrap().rank;
        prop_assert_eq!(is_induced_at(&b, &d(&[]), None).unwrap(), Some(rank));
    }

    #[test]
    fn minimal_generators_of_torsion_part(seed in 0u64..10_000) {
        let v = sample(seed);
        let (_, t) = torsion_part(&v, None).unwrap();
        // the lifts are chosen minimally, so they form a minimal generating set
        let h0 = report(&t, 0, None).unwrap();
        prop_assert_eq!(support_dims(&h0.groups[0]), t.generators().len());
    }
}
