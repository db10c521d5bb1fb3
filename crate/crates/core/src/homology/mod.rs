//! Minimal free resolutions, the homology groups `H_i`, homological degrees
//! `hd_i` and the invariants `gd`, `pd`, `ω`.
//!
//! `H_0(V)_x` is `V_x` modulo the images of the predecessors of `x`; the next
//! syzygy module is the kernel of the minimal cover, and `H_i` is `H_0` of the
//! `i`-th syzygy. All of it runs on a finite down-closed box of degrees, and
//! the answer is exact at every degree of that box.
//!
//! The default box is the down-set of the join `J` of all generator and
//! relation degrees. For grid modules every structure map in a direction `i`
//! beyond `J_i` is an isomorphism, which makes the Koszul complex acyclic
//! outside `↓J`; for Young modules each `H_s` is supported on joins of the
//! support of `H_{s-1}`. Either way nothing is lost outside `↓J`.

pub(crate) mod engine;

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, Scalar};
use crate::fpmod::document::{degree_to_json, PosetDocument};
use crate::fpmod::{Element, Evaluator, FreeModule, Presentation, Relation, Representation};
use crate::poset::{Degree, GridBox, Norm, Partition, PosetDescriptor, YoungBox};
use engine::{syzygies, BoxIndex, BoxRep};

pub const DEFAULT_LENGTH: usize = 4;

/// `(degree, multiplicity)` pairs in canonical degree order.
pub type Support = Vec<(Degree, usize)>;

/// The truncation box used by default for `v`, and whether it contains the
/// down-set of the join of all presentation degrees (in which case results
/// are exact everywhere, not just inside the box).
pub fn default_box(v: &Presentation) -> (PosetDescriptor, bool) {
    let region = v.poset();
    let join = v.degree_join();
    match region {
        PosetDescriptor::Grid(b) => {
            let j = join.map(|d| d.as_grid().expect("grid").clone()).unwrap_or_default();
            let certified = b.contains(&j);
            let caps = (1..=b.directions().max(j.max_direction()))
                .map(|d| j.get(d).min(b.cap(d)))
                .collect();
            let mut caps: Vec<u32> = caps;
            while caps.last() == Some(&0) {
                caps.pop();
            }
            (PosetDescriptor::Grid(GridBox { caps, max_sum: b.max_sum }), certified)
        }
        PosetDescriptor::Young(b) => {
            let j = join.map(|d| d.as_young().expect("young").clone()).unwrap_or_default();
            let certified = b.contains(&j);
            let within = match &b.within {
                Some(w) => meet_partitions(&j, w),
                None => j.clone(),
            };
            (
                PosetDescriptor::Young(YoungBox {
                    max_sum: within.sum().min(b.max_sum),
                    within: Some(within),
                }),
                certified,
            )
        }
        PosetDescriptor::Orbit { .. } => (region.clone(), false),
    }
}

fn meet_partitions(a: &Partition, b: &Partition) -> Partition {
    let parts: Vec<u32> = a.parts().iter().zip(b.parts()).map(|(x, y)| *x.min(y)).take_while(|&x| x > 0).collect();
    Partition::new(&parts).expect("entrywise minimum of partitions is a partition")
}

/// A minimal free resolution `F_s -> ... -> F_1 -> F_0 -> V` on a box.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub field: Field,
    /// The box all computations ran on.
    pub region: PosetDescriptor,
    /// Whether the box is known to contain all homology.
    pub certified: bool,
    /// Generator degrees of each `F_i`, in canonical order.
    pub free: Vec<Vec<Degree>>,
    /// `differentials[i]` has one row per generator of `F_{i+1}`, written over
    /// the generators of `F_i`.
    pub differentials: Vec<Vec<Relation>>,
    /// Images of the generators of `F_0` in `V` (coordinates of the graded
    /// piece at the generator's degree).
    pub cover_images: Vec<Vec<Scalar>>,
}

impl Resolution {
    pub fn length(&self) -> usize {
        self.free.len() - 1
    }

    pub fn support(&self, i: usize) -> Support {
        let mut counts: BTreeMap<Degree, usize> = BTreeMap::new();
        if let Some(f) = self.free.get(i) {
            for d in f {
                *counts.entry(d.clone()).or_default() += 1;
            }
        }
        counts.into_iter().collect()
    }

    pub fn free_module(&self, i: usize) -> Result<FreeModule> {
        FreeModule::new(self.region.clone(), self.field.clone(), self.free[i].clone())
    }

    /// `F_1 -> F_0` as a presentation: the minimal presentation of `V`.
    pub fn minimal_presentation(&self) -> Result<Presentation> {
        let rels = self
            .differentials
            .first()
            .map(|d| d.iter().map(|r| (r.degree.clone(), r.entries.clone())).collect())
            .unwrap_or_default();
        Presentation::new(self.region.clone(), self.field.clone(), self.free[0].clone(), rels)
    }

    /// The `i`-th syzygy module (the kernel of `F_{i-1} -> F_{i-2}`, with `F_{-1} = V`),
    /// presented by `F_{i+1} -> F_i`.
    pub fn syzygy(&self, i: usize) -> Result<Presentation> {
        let rels = self
            .differentials
            .get(i)
            .map(|d| d.iter().map(|r| (r.degree.clone(), r.entries.clone())).collect())
            .unwrap_or_default();
        let gens = self.free.get(i).cloned().unwrap_or_default();
        Presentation::new(self.region.clone(), self.field.clone(), gens, rels)
    }

    /// Checks `d_i ∘ d_{i+1} = 0` for every pair of consecutive differentials.
    pub fn is_complex(&self) -> bool {
        let f = &self.field;
        for w in self.differentials.windows(2) {
            let (lower, upper) = (&w[0], &w[1]);
            for row in upper {
                let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (g, s) in &row.entries {
                    for (h, t) in &lower[*g].entries {
                        let e = acc.entry(*h).or_insert_with(|| f.zero());
                        *e = f.add(e, &f.mul(s, t));
                    }
                }
                if acc.values().any(|v| !f.is_zero(v)) {
                    return false;
                }
            }
        }
        true
    }

    /// No differential entry connects two generators of the same degree.
    pub fn is_minimal(&self) -> bool {
        self.differentials.iter().enumerate().all(|(i, d)| {
            d.iter()
                .all(|r| r.entries.iter().all(|(g, _)| self.free[i][*g] != r.degree))
        })
    }

    pub fn report(&self) -> HomologyReport {
        HomologyReport {
            field: self.field.spec(),
            region: self.region.clone(),
            certified: self.certified,
            groups: (0..self.free.len()).map(|i| self.support(i)).collect(),
        }
    }
}

fn check_box(v: &Presentation, region: &PosetDescriptor) -> Result<()> {
    if !region.is_within(v.poset()) {
        return Err(Error::OutsideRegion(format!("box {region} is not inside the module region {}", v.poset())));
    }
    Ok(())
}

/// Minimal resolution of a presentation up to `F_length`. With `region = None`
/// the [`default_box`] is used.
pub fn resolution(v: &Presentation, length: usize, region: Option<&PosetDescriptor>) -> Result<Resolution> {
    let (region, certified) = match region {
        Some(r) => {
            check_box(v, r)?;
            let (d, cert) = default_box(v);
            (r.clone(), cert && d.is_within(r))
        }
        None => default_box(v),
    };
    let ev = Evaluator::new(v);
    resolve_representation(&ev, &region, length, certified)
}

/// Minimal resolution of any representation on a finite down-closed region.
pub fn resolve_representation(
    rep: &dyn Representation,
    region: &PosetDescriptor,
    length: usize,
    certified: bool,
) -> Result<Resolution> {
    let index = BoxIndex::new(region.degrees())?;
    let field = rep.field().clone();
    let mut target = BoxRep::from_representation(rep, index.clone())?;
    let mut free = Vec::new();
    let mut differentials = Vec::new();
    let mut cover_images = Vec::new();
    let mut previous: Option<engine::Syzygies> = None;
    for i in 0..=length {
        let gens = target.minimal_generators();
        free.push(gens.iter().map(|(x, _)| index.degrees[*x].clone()).collect::<Vec<_>>());
        match &previous {
            None => cover_images = gens.iter().map(|(_, v)| v.clone()).collect(),
            Some(syz) => differentials.push(
                gens.iter()
                    .map(|(x, w)| Relation {
                        degree: index.degrees[*x].clone(),
                        entries: syz.embed(*x, w),
                    })
                    .collect(),
            ),
        }
        if i == length {
            break;
        }
        if gens.is_empty() {
            // V is zero on the box, so are all syzygies
            for _ in i + 1..=length {
                free.push(Vec::new());
                differentials.push(Vec::new());
            }
            break;
        }
        let syz = syzygies(&target, &gens);
        target = syz.rep.clone();
        previous = Some(syz);
    }
    Ok(Resolution {
        field,
        region: region.clone(),
        certified,
        free,
        differentials,
        cover_images,
    })
}

/// `H_i(V)` as `(degree, multiplicity)` pairs.
pub fn homology(v: &Presentation, i: usize, region: Option<&PosetDescriptor>) -> Result<Support> {
    Ok(resolution(v, i, region)?.support(i))
}

pub fn h0(v: &Presentation, region: Option<&PosetDescriptor>) -> Result<Support> {
    homology(v, 0, region)
}

/// `hd_i(V)`: the largest norm of a degree in the support of `H_i`, or `-1`.
pub fn hd(v: &Presentation, i: usize, norm: Norm, region: Option<&PosetDescriptor>) -> Result<i64> {
    Ok(max_norm(&homology(v, i, region)?, norm))
}

pub fn max_norm(support: &[(Degree, usize)], norm: Norm) -> i64 {
    support
        .iter()
        .map(|(d, _)| d.norm(norm).map(i64::from).unwrap_or(-1))
        .max()
        .unwrap_or(-1)
}

/// A surjection from a free module inducing an isomorphism on `H_0`, and its
/// kernel.
#[derive(Clone, Debug)]
pub struct MinimalCover {
    pub cover: FreeModule,
    /// The image of each generator of `cover` in `V`, as a free-module
    /// element of the presentation's target.
    pub images: Vec<Element>,
    /// The kernel, presented by its own minimal generators and relations.
    pub kernel: Presentation,
    pub region: PosetDescriptor,
    pub certified: bool,
}

pub fn minimal_cover(v: &Presentation, region: Option<&PosetDescriptor>) -> Result<MinimalCover> {
    let res = resolution(v, 2, region)?;
    let mut images = Vec::with_capacity(res.free[0].len());
    for (d, coords) in res.free[0].iter().zip(&res.cover_images) {
        let piece = v.evaluate(d)?;
        let coefficients = piece
            .basis_generators()
            .into_iter()
            .zip(coords)
            .filter(|(_, s)| !v.field().is_zero(s))
            .map(|(g, s)| (g, s.clone()))
            .collect();
        images.push(Element::new(d.clone(), coefficients));
    }
    Ok(MinimalCover {
        cover: res.free_module(0)?,
        images,
        kernel: res.syzygy(1)?,
        region: res.region.clone(),
        certified: res.certified,
    })
}

/// See [`crate::fpmod::submodule_presentation`].
pub(crate) fn submodule_presentation(free: &FreeModule, gens: &[Element]) -> Result<Presentation> {
    let index = BoxIndex::new(free.poset.degrees())?;
    let ambient = free.presentation();
    let target = BoxRep::from_representation(&Evaluator::new(&ambient), index.clone())?;
    let mut vectors = Vec::with_capacity(gens.len());
    for (k, e) in gens.iter().enumerate() {
        let x = *index
            .position
            .get(&e.degree)
            .ok_or_else(|| Error::OutsideRegion(format!("element {k} at {}", e.degree)))?;
        vectors.push((x, ambient.class_of(e)?));
    }
    let syz = syzygies(&target, &vectors);
    let relations = syz
        .rep
        .minimal_generators()
        .into_iter()
        .map(|(x, w)| (index.degrees[x].clone(), syz.embed(x, &w)))
        .collect();
    Presentation::new(
        free.poset.clone(),
        free.field.clone(),
        gens.iter().map(|e| e.degree.clone()).collect(),
        relations,
    )
}

/// Supports of `H_0 .. H_s` with the derived invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyReport {
    pub field: FieldSpec,
    pub region: PosetDescriptor,
    pub certified: bool,
    pub groups: Vec<Support>,
}

impl HomologyReport {
    pub fn support(&self, i: usize) -> &[(Degree, usize)] {
        self.groups.get(i).map_or(&[], Vec::as_slice)
    }

    pub fn hd(&self, i: usize, norm: Norm) -> i64 {
        max_norm(self.support(i), norm)
    }

    pub fn gd(&self, norm: Norm) -> i64 {
        self.hd(0, norm)
    }

    pub fn pd(&self, norm: Norm) -> i64 {
        self.hd(0, norm).max(self.hd(1, norm))
    }

    /// Total multiplicity of `H_0`, the number of minimal generators.
    pub fn omega(&self) -> usize {
        self.support(0).iter().map(|(_, m)| m).sum()
    }

    pub fn to_json(&self) -> Value {
        let groups: Vec<Value> = self
            .groups
            .iter()
            .enumerate()
            .map(|(i, s)| {
                json!({
                    "i": i,
                    "support": s.iter().map(|(d, m)| json!({"degree": degree_to_json(d), "multiplicity": m})).collect::<Vec<_>>(),
                })
            })
            .collect();
        let per_norm = |f: &dyn Fn(Norm) -> Value| {
            let mut m = serde_json::Map::new();
            for n in Norm::ALL {
                m.insert(n.name().into(), f(n));
            }
            Value::Object(m)
        };
        json!({
            "homology": groups,
            "hd": per_norm(&|n| json!((0..self.groups.len()).map(|i| self.hd(i, n)).collect::<Vec<_>>())),
            "gd": per_norm(&|n| json!(self.gd(n))),
            "pd": per_norm(&|n| json!(self.pd(n))),
            "omega": self.omega(),
            "box": serde_json::to_value(PosetDocument::from_descriptor(&self.region)).expect("serializable"),
            "certified": self.certified,
            "field": self.field.to_string(),
        })
    }
}

/// Homology report for `H_0 .. H_length`.
pub fn report(v: &Presentation, length: usize, region: Option<&PosetDescriptor>) -> Result<HomologyReport> {
    Ok(resolution(v, length, region)?.report())
}

/// `(gd, pd, ω)` under the given norm.
pub fn pd_and_friends(v: &Presentation, norm: Norm, region: Option<&PosetDescriptor>) -> Result<(i64, i64, usize)> {
    let r = report(v, 1, region)?;
    Ok((r.gd(norm), r.pd(norm), r.omega()))
}

#[cfg(test)]
mod tests;
