use super::*;
use crate::fpmod::submodule_presentation;

fn q() -> Field {
    Field::rational()
}

fn grid(caps: &[u32]) -> PosetDescriptor {
    PosetDescriptor::grid(caps)
}

fn degs(s: &Support) -> Vec<(Degree, usize)> {
    s.clone()
}

/// `P(0)/(X_1^k)` in one direction.
fn truncated(k: u32) -> Presentation {
    let f = q();
    Presentation::new(grid(&[k + 1]), f.clone(), vec![Degree::grid(&[])], vec![(Degree::grid(&[k]), vec![(0, f.one())])])
        .unwrap()
}

fn simple_at_zero(r: usize) -> Presentation {
    let f = q();
    let rels = (0..r)
        .map(|i| {
            let mut e = vec![0; r];
            e[i] = 1;
            (Degree::grid(&e), vec![(0, f.one())])
        })
        .collect();
    Presentation::new(grid(&vec![2; r]), f, vec![Degree::grid(&[])], rels).unwrap()
}

fn monomial_ideal(r: usize, exps: &[&[u32]], cap: u32) -> Presentation {
    let f = q();
    let free = FreeModule::new(grid(&vec![cap; r]), f.clone(), vec![Degree::grid(&[])]).unwrap();
    let gens: Vec<Element> = exps.iter().map(|e| Element::new(Degree::grid(e), vec![(0, f.one())])).collect();
    submodule_presentation(&free, &gens).unwrap()
}

#[test]
fn free_module_homology() {
    let x = Degree::grid(&[1, 2]);
    let v = Presentation::free(grid(&[3, 3]), q(), vec![x.clone()]).unwrap();
    let r = report(&v, 3, None).unwrap();
    assert_eq!(r.support(0), &[(x.clone(), 1)]);
    for i in 1..=3 {
        assert!(r.support(i).is_empty());
        assert_eq!(r.hd(i, Norm::Sup), -1);
    }
    assert_eq!((r.gd(Norm::Sum), r.pd(Norm::Sum), r.omega()), (3, 3, 1));
    assert_eq!((r.gd(Norm::Sup), r.pd(Norm::Sup)), (2, 2));
    assert!(r.certified);
}

#[test]
fn zero_module() {
    let v = Presentation::zero(grid(&[2]), q());
    assert!(h0(&v, None).unwrap().is_empty());
    assert_eq!(hd(&v, 0, Norm::Sum, None).unwrap(), -1);
    assert_eq!(hd(&v, 2, Norm::Sup, None).unwrap(), -1);
}

#[test]
fn koszul_resolution_of_simple() {
    let v = simple_at_zero(2);
    let res = resolution(&v, 3, None).unwrap();
    assert_eq!(degs(&res.support(1)), vec![(Degree::grid(&[0, 1]), 1), (Degree::grid(&[1, 0]), 1)]);
    assert_eq!(degs(&res.support(2)), vec![(Degree::grid(&[1, 1]), 1)]);
    assert!(res.support(3).is_empty());
    assert!(res.is_complex());
    assert!(res.is_minimal());
}

#[test]
fn cover_of_truncated_polynomial() {
    let v = truncated(2);
    let c = minimal_cover(&v, None).unwrap();
    assert_eq!(c.cover.generators, vec![Degree::grid(&[])]);
    assert_eq!(c.kernel.generators(), &[Degree::grid(&[2])]);
    assert!(c.kernel.relations().is_empty());
    assert_eq!(pd_and_friends(&v, Norm::Sup, None).unwrap(), (0, 2, 1));
    assert_eq!(pd_and_friends(&v, Norm::Sum, None).unwrap(), (0, 2, 1));
}

#[test]
fn cover_of_free_module_has_zero_kernel() {
    let v = Presentation::free(grid(&[2, 2]), q(), vec![Degree::grid(&[1, 1])]).unwrap();
    let c = minimal_cover(&v, None).unwrap();
    assert!(c.kernel.generators().is_empty());
}

#[test]
fn squares_ideal() {
    let v = monomial_ideal(2, &[&[2, 0], &[0, 2]], 3);
    assert_eq!(v.relations().len(), 1);
    assert_eq!(v.relations()[0].degree, Degree::grid(&[2, 2]));
    assert_eq!(hd(&v, 1, Norm::Sum, None).unwrap(), 4);
    assert_eq!(hd(&v, 0, Norm::Sum, None).unwrap(), 2);
}

#[test]
fn edge_ideal_of_triangle() {
    let v = monomial_ideal(3, &[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]], 1);
    let res = resolution(&v, 3, None).unwrap();
    assert_eq!(res.support(0).len(), 3);
    assert_eq!(degs(&res.support(1)), vec![(Degree::grid(&[1, 1, 1]), 2)]);
    assert!(res.support(2).is_empty());
    for i in 0..=3 {
        assert!(res.support(i).iter().all(|(d, _)| d.norm(Norm::Sup).unwrap() <= 1));
    }
    assert!(res.is_complex());
}

#[test]
fn enlarging_the_box_changes_nothing() {
    let f = q();
    let v = Presentation::new(
        grid(&[4, 4]),
        f.clone(),
        vec![Degree::grid(&[]), Degree::grid(&[1, 0])],
        vec![
            (Degree::grid(&[1, 1]), vec![(0, f.one()), (1, f.from_i64(-1))]),
            (Degree::grid(&[2, 0]), vec![(1, f.one())]),
        ],
    )
    .unwrap();
    let small = report(&v, 3, None).unwrap();
    assert!(small.certified);
    let big = report(&v, 3, Some(&grid(&[4, 4]))).unwrap();
    assert_eq!(small.groups, big.groups);
}

#[test]
fn generator_order_does_not_matter() {
    let f = q();
    let v = Presentation::new(
        grid(&[3, 3]),
        f.clone(),
        vec![Degree::grid(&[1, 0]), Degree::grid(&[0, 1]), Degree::grid(&[])],
        vec![
            (Degree::grid(&[1, 1]), vec![(0, f.one()), (1, f.from_i64(2))]),
            (Degree::grid(&[2, 1]), vec![(2, f.one())]),
        ],
    )
    .unwrap();
    let w = v.permute_generators(&[2, 0, 1]).unwrap();
    assert_eq!(report(&v, 3, None).unwrap().groups, report(&w, 3, None).unwrap().groups);
}

#[test]
fn young_free_and_simple() {
    let f = q();
    let y = |p: &[u32]| Degree::young(p).unwrap();
    let free = Presentation::free(PosetDescriptor::young(4), f.clone(), vec![y(&[1])]).unwrap();
    let r = report(&free, 2, None).unwrap();
    assert_eq!(r.support(0), &[(y(&[1]), 1)]);
    assert!(r.support(1).is_empty());
    // simple at the empty partition: killed at (1)
    let simple = Presentation::new(PosetDescriptor::young(4), f.clone(), vec![y(&[])], vec![(y(&[1]), vec![(0, f.one())])]).unwrap();
    let r = report(&simple, 3, Some(&PosetDescriptor::young(4))).unwrap();
    assert_eq!(r.support(1), &[(y(&[1]), 1)]);
    // the kernel P((1)) restricted to partitions has two minimal syzygy-free covers (2) and (1,1)... it is free
    assert!(r.support(2).is_empty());
}
