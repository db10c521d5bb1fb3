//! Finitely presented modules over the grid and Young posets.
//!
//! A [`Presentation`] is the cokernel of a map `F1 -> F0` between free
//! modules. Because hom-sets of a poset have at most one element, a relation
//! entry is just a scalar multiplying the unique morphism from the generator's
//! degree to the relation's degree.

pub mod document;
mod functors;

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

pub use document::{BoxDocument, EntryDocument, FieldDocument, GeneratorDocument, ModuleDocument, PosetDocument, RelationDocument};
pub use functors::{SymmetricLift, YoungRestriction};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{cokernel, Cokernel, Matrix};
use crate::poset::{Degree, PosetDescriptor};

/// Anything with graded pieces and structure maps on a truncation region.
pub trait Representation: Sync {
    fn field(&self) -> &Field;
    fn region(&self) -> &PosetDescriptor;
    fn dim(&self, x: &Degree) -> Result<usize>;
    /// Matrix of the structure map `V_x -> V_y` for `x <= y`.
    fn map(&self, x: &Degree, y: &Degree) -> Result<Matrix>;
}

/// A free module `⊕_g P(x_g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeModule {
    pub poset: PosetDescriptor,
    pub field: Field,
    pub generators: Vec<Degree>,
}

impl FreeModule {
    pub fn new(poset: PosetDescriptor, field: Field, generators: Vec<Degree>) -> Result<Self> {
        for g in &generators {
            poset.check(g)?;
        }
        Ok(FreeModule {
            poset,
            field,
            generators,
        })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Indices of the generators whose degree is below `x`.
    pub fn active(&self, x: &Degree) -> Vec<usize> {
        active_generators(&self.generators, x)
    }

    /// The free module as a presentation with no relations.
    pub fn presentation(&self) -> Presentation {
        Presentation {
            poset: self.poset.clone(),
            field: self.field.clone(),
            generators: self.generators.clone(),
            relations: Vec::new(),
        }
    }
}

pub(crate) fn active_generators(generators: &[Degree], x: &Degree) -> Vec<usize> {
    generators
        .iter()
        .enumerate()
        .filter(|(_, g)| g.below(x))
        .map(|(i, _)| i)
        .collect()
}

/// One relation: a degree and a sparse combination of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub degree: Degree,
    /// `(generator index, scalar)`, indices ascending, scalars nonzero.
    pub entries: Vec<(usize, Scalar)>,
}

/// An element of a free module: a degree and coefficients over the
/// generators active there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub degree: Degree,
    pub coefficients: Vec<(usize, Scalar)>,
}

impl Element {
    pub fn new(degree: Degree, coefficients: Vec<(usize, Scalar)>) -> Self {
        Element { degree, coefficients }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    poset: PosetDescriptor,
    field: Field,
    generators: Vec<Degree>,
    relations: Vec<Relation>,
}

impl Presentation {
    /// Validates and normalizes relation entries (merging repeated generator
    /// indices, dropping zeros).
    pub fn new(
        poset: PosetDescriptor,
        field: Field,
        generators: Vec<Degree>,
        relations: Vec<(Degree, Vec<(usize, Scalar)>)>,
    ) -> Result<Self> {
        if poset.kind() == "orbit" {
            return Err(Error::UnsupportedKind("orbit"));
        }
        for (i, g) in generators.iter().enumerate() {
            poset.check(g).map_err(|e| Error::parse(format!("generators[{i}]"), e.to_string()))?;
        }
        let mut rels = Vec::with_capacity(relations.len());
        for (r, (degree, entries)) in relations.into_iter().enumerate() {
            poset.check(&degree).map_err(|e| Error::parse(format!("relations[{r}]"), e.to_string()))?;
            let mut merged: Vec<(usize, Scalar)> = Vec::new();
            let mut sorted = entries;
            sorted.sort_by_key(|e| e.0);
            for (g, s) in sorted {
                let Some(gd) = generators.get(g) else {
                    return Err(Error::parse(
                        format!("relations[{r}]"),
                        format!("generator index {g} out of range"),
                    ));
                };
                if !gd.below(&degree) {
                    return Err(Error::IncomparableDegrees {
                        location: format!("relations[{r}]"),
                        generator: gd.to_string(),
                        relation: degree.to_string(),
                    });
                }
                match merged.last_mut() {
                    Some((h, acc)) if *h == g => *acc = field.add(acc, &s),
                    _ => merged.push((g, s)),
                }
            }
            merged.retain(|(_, s)| !field.is_zero(s));
            rels.push(Relation {
                degree,
                entries: merged,
            });
        }
        Ok(Presentation {
            poset,
            field,
            generators,
            relations: rels,
        })
    }

    pub fn zero(poset: PosetDescriptor, field: Field) -> Self {
        Presentation {
            poset,
            field,
            generators: Vec::new(),
            relations: Vec::new(),
        }
    }

    /// `P(x)`.
    pub fn free(poset: PosetDescriptor, field: Field, degrees: Vec<Degree>) -> Result<Self> {
        Presentation::new(poset, field, degrees, Vec::new())
    }

    pub fn poset(&self) -> &PosetDescriptor {
        &self.poset
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn generators(&self) -> &[Degree] {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn target(&self) -> FreeModule {
        FreeModule {
            poset: self.poset.clone(),
            field: self.field.clone(),
            generators: self.generators.clone(),
        }
    }

    /// Same module, different region (degrees must still fit).
    pub fn with_region(&self, poset: PosetDescriptor) -> Result<Self> {
        let rels = self.relations.iter().map(|r| (r.degree.clone(), r.entries.clone())).collect();
        Presentation::new(poset, self.field.clone(), self.generators.clone(), rels)
    }

    /// Same data over another field; scalars are mapped through their
    /// rational text form.
    pub fn over_field(&self, field: &Field) -> Result<Self> {
        let rels = self
            .relations
            .iter()
            .map(|r| {
                let entries = r
                    .entries
                    .iter()
                    .map(|(g, s)| Ok((*g, field.parse(&plain_scalar(&self.field, s)?)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok((r.degree.clone(), entries))
            })
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(self.poset.clone(), field.clone(), self.generators.clone(), rels)
    }

    /// The same module with generators and relations in canonical order.
    pub fn canonical(&self) -> Presentation {
        let mut gorder: Vec<usize> = (0..self.generators.len()).collect();
        gorder.sort_by(|&a, &b| self.generators[a].cmp(&self.generators[b]));
        let mut new_index = vec![0; gorder.len()];
        for (new, &old) in gorder.iter().enumerate() {
            new_index[old] = new;
        }
        let mut relations: Vec<Relation> = self
            .relations
            .iter()
            .map(|r| {
                let mut entries: Vec<(usize, Scalar)> =
                    r.entries.iter().map(|(g, s)| (new_index[*g], s.clone())).collect();
                entries.sort_by_key(|e| e.0);
                Relation {
                    degree: r.degree.clone(),
                    entries,
                }
            })
            .collect();
        relations.sort_by(|a, b| a.degree.cmp(&b.degree));
        Presentation {
            poset: self.poset.clone(),
            field: self.field.clone(),
            generators: gorder.iter().map(|&i| self.generators[i].clone()).collect(),
            relations,
        }
    }

    /// Relabels generators by a permutation: new generator `k` is old
    /// generator `order[k]`.
    pub fn permute_generators(&self, order: &[usize]) -> Result<Presentation> {
        let mut new_index = vec![usize::MAX; self.generators.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        if order.len() != self.generators.len() || new_index.contains(&usize::MAX) {
            return Err(Error::InvalidParameters("not a permutation".into()));
        }
        let rels = self
            .relations
            .iter()
            .map(|r| (r.degree.clone(), r.entries.iter().map(|(g, s)| (new_index[*g], s.clone())).collect()))
            .collect();
        Presentation::new(
            self.poset.clone(),
            self.field.clone(),
            order.iter().map(|&i| self.generators[i].clone()).collect(),
            rels,
        )
    }

    /// The join of every generator and relation degree (`None` for the zero
    /// presentation).
    pub fn degree_join(&self) -> Option<Degree> {
        let mut it = self.generators.iter().chain(self.relations.iter().map(|r| &r.degree));
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, d| acc.join(d).expect("same kind")))
    }

    pub fn direct_sum(&self, other: &Presentation) -> Result<Presentation> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field.spec(), other.field.spec())));
        }
        if self.poset != other.poset {
            return Err(Error::PosetMismatch(format!("{} vs {}", self.poset, other.poset)));
        }
        let shift = self.generators.len();
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().cloned());
        let mut relations = self.relations.clone();
        relations.extend(other.relations.iter().map(|r| Relation {
            degree: r.degree.clone(),
            entries: r.entries.iter().map(|(g, s)| (g + shift, s.clone())).collect(),
        }));
        Ok(Presentation {
            poset: self.poset.clone(),
            field: self.field.clone(),
            generators,
            relations,
        })
    }

    /// The graded piece at `x`: a cokernel of the relations active there.
    pub fn evaluate(&self, x: &Degree) -> Result<GradedPiece> {
        self.poset.check(x)?;
        let active = active_generators(&self.generators, x);
        let position: HashMap<usize, usize> = active.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let cols: Vec<Vec<Scalar>> = self
            .relations
            .iter()
            .filter(|r| r.degree.below(x))
            .map(|r| {
                let mut c = vec![self.field.zero(); active.len()];
                for (g, s) in &r.entries {
                    c[position[g]] = s.clone();
                }
                c
            })
            .collect();
        let m = Matrix::from_columns(&self.field, active.len(), &cols);
        Ok(GradedPiece {
            degree: x.clone(),
            active,
            coker: cokernel(&self.field, &m),
        })
    }

    pub fn structure_map(&self, x: &Degree, y: &Degree) -> Result<Matrix> {
        let vx = self.evaluate(x)?;
        let vy = self.evaluate(y)?;
        piece_map(&self.field, &vx, &vy)
    }

    /// Coordinates in `V_x` of the class of a free-module element of degree `x`.
    pub fn class_of(&self, e: &Element) -> Result<Vec<Scalar>> {
        let piece = self.evaluate(&e.degree)?;
        piece.class_of(&self.field, &self.generators, e)
    }
}

fn plain_scalar(field: &Field, s: &Scalar) -> Result<String> {
    match s {
        Scalar::Rational(r) => Ok(r.to_string()),
        Scalar::Prime(x) => {
            // centered lift so small negative integers survive a change of field
            let p = field.characteristic();
            Ok(if *x > p / 2 { format!("-{}", p - x) } else { x.to_string() })
        }
        Scalar::Cyclotomic(_) => Ok(field.format(s)),
    }
}

fn piece_map(field: &Field, vx: &GradedPiece, vy: &GradedPiece) -> Result<Matrix> {
    if !vx.degree.leq(&vy.degree)? {
        return Err(Error::NotComparable {
            from: vx.degree.to_string(),
            to: vy.degree.to_string(),
        });
    }
    let pos: HashMap<usize, usize> = vy.active.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let mut m = Matrix::zeros(field, vy.dim(), vx.dim());
    for (k, &c) in vx.coker.complement.iter().enumerate() {
        let g = vx.active[c];
        let col = pos[&g];
        for i in 0..vy.dim() {
            m.set(i, k, vy.coker.projection.get(i, col).clone());
        }
    }
    Ok(m)
}

/// The value `V_x` of a presented module.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub degree: Degree,
    /// Generators active at this degree; ambient coordinates follow this order.
    pub active: Vec<usize>,
    pub coker: Cokernel,
}

impl GradedPiece {
    pub fn dim(&self) -> usize {
        self.coker.dim()
    }

    /// Matrix from the ambient free piece onto `V_x`.
    pub fn basis_projection(&self) -> &Matrix {
        &self.coker.projection
    }

    /// The generators whose classes form the chosen basis.
    pub fn basis_generators(&self) -> Vec<usize> {
        self.coker.complement.iter().map(|&c| self.active[c]).collect()
    }

    pub fn class_of(&self, field: &Field, generators: &[Degree], e: &Element) -> Result<Vec<Scalar>> {
        let pos: HashMap<usize, usize> = self.active.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let mut v = vec![field.zero(); self.active.len()];
        for (g, s) in &e.coefficients {
            let Some(&i) = pos.get(g) else {
                let gd = generators.get(*g).map_or("?".to_string(), |d| d.to_string());
                return Err(Error::IncomparableDegrees {
                    location: "element".into(),
                    generator: gd,
                    relation: e.degree.to_string(),
                });
            };
            v[i] = field.add(&v[i], s);
        }
        Ok(self.coker.project(field, &v))
    }
}

impl Representation for Presentation {
    fn field(&self) -> &Field {
        &self.field
    }

    fn region(&self) -> &PosetDescriptor {
        &self.poset
    }

    fn dim(&self, x: &Degree) -> Result<usize> {
        Ok(self.evaluate(x)?.dim())
    }

    fn map(&self, x: &Degree, y: &Degree) -> Result<Matrix> {
        self.structure_map(x, y)
    }
}

/// A presentation with a cache of its graded pieces. Repeated evaluations at
/// the same degree are served from the cache; concurrent readers are fine.
pub struct Evaluator<'a> {
    module: &'a Presentation,
    cache: RwLock<HashMap<Degree, Arc<GradedPiece>>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(module: &'a Presentation) -> Self {
        Evaluator {
            module,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn module(&self) -> &Presentation {
        self.module
    }

    pub fn piece(&self, x: &Degree) -> Result<Arc<GradedPiece>> {
        if let Some(p) = self.cache.read().expect("cache lock").get(x) {
            return Ok(p.clone());
        }
        let piece = Arc::new(self.module.evaluate(x)?);
        // another thread may have filled the slot meanwhile; both values agree
        Ok(self
            .cache
            .write()
            .expect("cache lock")
            .entry(x.clone())
            .or_insert(piece)
            .clone())
    }
}

impl Representation for Evaluator<'_> {
    fn field(&self) -> &Field {
        &self.module.field
    }

    fn region(&self) -> &PosetDescriptor {
        &self.module.poset
    }

    fn dim(&self, x: &Degree) -> Result<usize> {
        Ok(self.piece(x)?.dim())
    }

    fn map(&self, x: &Degree, y: &Degree) -> Result<Matrix> {
        let (a, b) = (self.piece(x)?, self.piece(y)?);
        piece_map(&self.module.field, &a, &b)
    }
}

/// A presentation of the submodule generated by `gens` inside the free module
/// `free`, computed over the region of `free`. The relations are minimal
/// generators of the syzygy module found in that region; they are complete
/// whenever the region contains every minimal syzygy degree.
pub fn submodule_presentation(free: &FreeModule, gens: &[Element]) -> Result<Presentation> {
    crate::homology::submodule_presentation(free, gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::GridBox;

    fn grid(caps: &[u32]) -> PosetDescriptor {
        PosetDescriptor::grid(caps)
    }

    #[test]
    fn free_at_minimum() {
        let f = Field::rational();
        let v = Presentation::free(grid(&[3, 3]), f, vec![Degree::grid(&[])]).unwrap();
        for x in v.poset().degrees() {
            assert_eq!(v.dim(&x).unwrap(), 1);
            assert_eq!(v.structure_map(&Degree::grid(&[]), &x).unwrap().rows(), 1);
        }
    }

    #[test]
    fn free_values_are_indicators() {
        let f = Field::default_prime();
        let p = grid(&[3, 3, 3]);
        let x = Degree::grid(&[1, 2, 0]);
        let v = Presentation::free(p.clone(), f, vec![x.clone()]).unwrap();
        for y in p.degrees() {
            assert_eq!(v.dim(&y).unwrap(), usize::from(x.below(&y)));
        }
    }

    #[test]
    fn killed_generator() {
        let f = Field::rational();
        let x = Degree::grid(&[1]);
        let v = Presentation::new(grid(&[2]), f.clone(), vec![x.clone()], vec![(x.clone(), vec![(0, f.one())])]).unwrap();
        assert_eq!(v.dim(&x).unwrap(), 0);
    }

    #[test]
    fn truncated_polynomial() {
        // P(0) / (X_1^2) in one direction
        let f = Field::rational();
        let v = Presentation::new(
            grid(&[3]),
            f.clone(),
            vec![Degree::grid(&[])],
            vec![(Degree::grid(&[2]), vec![(0, f.one())])],
        )
        .unwrap();
        let m = v.structure_map(&Degree::grid(&[1]), &Degree::grid(&[2])).unwrap();
        assert_eq!((m.rows(), m.cols()), (0, 1));
        assert!(v.structure_map(&Degree::grid(&[2]), &Degree::grid(&[1])).is_err());
    }

    #[test]
    fn incomparable_entry_rejected() {
        let f = Field::rational();
        let err = Presentation::new(
            grid(&[2, 2]),
            f.clone(),
            vec![Degree::grid(&[1, 0])],
            vec![(Degree::grid(&[0, 1]), vec![(0, f.one())])],
        )
        .unwrap_err();
        assert!(matches!(err, Error::IncomparableDegrees { .. }));
    }

    #[test]
    fn outside_region_rejected() {
        let f = Field::rational();
        let v = Presentation::free(grid(&[1]), f, vec![Degree::grid(&[])]).unwrap();
        assert!(matches!(v.evaluate(&Degree::grid(&[2])), Err(Error::OutsideRegion(_))));
    }

    #[test]
    fn direct_sum_dimensions() {
        let f = Field::rational();
        let p = PosetDescriptor::Grid(GridBox::new(vec![2, 2]));
        let a = Presentation::free(p.clone(), f.clone(), vec![Degree::grid(&[1, 0])]).unwrap();
        let b = Presentation::free(p.clone(), f.clone(), vec![Degree::grid(&[0, 1])]).unwrap();
        let s = a.direct_sum(&b).unwrap();
        assert_eq!(s.dim(&Degree::grid(&[1, 1])).unwrap(), 2);
        let z = Presentation::zero(p.clone(), f);
        for x in p.degrees() {
            assert_eq!(a.direct_sum(&z).unwrap().dim(&x).unwrap(), a.dim(&x).unwrap());
        }
    }

    #[test]
    fn evaluator_matches_direct_evaluation() {
        let f = Field::rational();
        let v = Presentation::new(
            grid(&[2, 2]),
            f.clone(),
            vec![Degree::grid(&[]), Degree::grid(&[1, 0])],
            vec![(Degree::grid(&[1, 1]), vec![(0, f.from_i64(1)), (1, f.from_i64(-1))])],
        )
        .unwrap();
        let ev = Evaluator::new(&v);
        for x in v.poset().degrees() {
            for y in v.poset().degrees() {
                if x.below(&y) {
                    assert_eq!(ev.map(&x, &y).unwrap(), v.structure_map(&x, &y).unwrap());
                }
            }
        }
    }
}
