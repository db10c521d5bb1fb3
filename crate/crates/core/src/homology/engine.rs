//! The degreewise machinery behind every resolution: a representation
//! restricted to a finite down-closed set of degrees, its minimal generators,
//! and kernels of maps from free modules onto it.
//!
//! Everything is computed degree by degree in canonical order, which refines
//! the partial order, so when `x` is processed all of its predecessors are
//! already done. Because the set of degrees is down-closed, the answer at `x`
//! only depends on degrees below `x` and is exact there.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::fpmod::Representation;
use crate::linalg::{cokernel, kernel_with_pivots, Matrix};
use crate::poset::Degree;

/// A finite down-closed set of degrees in canonical order together with the
/// cover relation.
#[derive(Debug)]
pub(crate) struct BoxIndex {
    pub degrees: Vec<Degree>,
    pub position: HashMap<Degree, usize>,
    /// Indices of the predecessors of each degree.
    pub preds: Vec<Vec<usize>>,
}

impl BoxIndex {
    pub fn new(mut degrees: Vec<Degree>) -> Result<Arc<BoxIndex>> {
        degrees.sort();
        degrees.dedup();
        let position: HashMap<Degree, usize> = degrees.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
        let mut preds = Vec::with_capacity(degrees.len());
        for d in &degrees {
            let mut ps = Vec::new();
            for p in d.predecessors() {
                match position.get(&p) {
                    Some(&i) => ps.push(i),
                    None => {
                        return Err(Error::InvalidParameters(format!(
                            "degree set is not down-closed: {d} is present but {p} is not"
                        )))
                    }
                }
            }
            preds.push(ps);
        }
        Ok(Arc::new(BoxIndex {
            degrees,
            position,
            preds,
        }))
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn below(&self, a: usize, b: usize) -> bool {
        self.degrees[a].below(&self.degrees[b])
    }
}

/// Dimensions and cover maps of a representation on a [`BoxIndex`].
#[derive(Clone, Debug)]
pub(crate) struct BoxRep {
    pub field: Field,
    pub index: Arc<BoxIndex>,
    pub dims: Vec<usize>,
    /// `covers[x][k]` is the map from the `k`-th predecessor of `x` to `x`.
    pub covers: Vec<Vec<Matrix>>,
}

impl BoxRep {
    pub fn from_representation(rep: &dyn Representation, index: Arc<BoxIndex>) -> Result<BoxRep> {
        let dims = index
            .degrees
            .par_iter()
            .map(|d| rep.dim(d))
            .collect::<Result<Vec<_>>>()?;
        let covers = (0..index.len())
            .into_par_iter()
            .map(|x| {
                index.preds[x]
                    .iter()
                    .map(|&p| rep.map(&index.degrees[p], &index.degrees[x]))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BoxRep {
            field: rep.field().clone(),
            index,
            dims,
            covers,
        })
    }

    #[cfg(test)]
    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Minimal generators: for each degree, vectors spanning a complement of
    /// the images of the predecessors. Returned in canonical degree order.
    pub fn minimal_generators(&self) -> Vec<(usize, Vec<Scalar>)> {
        let per_degree: Vec<Vec<Vec<Scalar>>> = (0..self.index.len())
            .into_par_iter()
            .map(|x| {
                let dim = self.dims[x];
                if dim == 0 {
                    return Vec::new();
                }
                let mut images = Matrix::zeros(&self.field, dim, 0);
                for m in &self.covers[x] {
                    images = images.hstack(m);
                }
                let c = cokernel(&self.field, &images);
                c.complement
                    .iter()
                    .map(|&i| {
                        let mut v = vec![self.field.zero(); dim];
                        v[i] = self.field.one();
                        v
                    })
                    .collect()
            })
            .collect();
        per_degree
            .into_iter()
            .enumerate()
            .flat_map(|(x, vs)| vs.into_iter().map(move |v| (x, v)))
            .collect()
    }
}

/// The kernel `W` of the map from a free module (one generator per entry of
/// `gens`) onto a [`BoxRep`].
pub(crate) struct Syzygies {
    pub rep: BoxRep,
    /// Per degree: generators of the free module active there, ascending.
    pub active: Vec<Vec<usize>>,
    /// Per degree: basis of `W_x` as columns in the coordinates of `active`.
    pub basis: Vec<Matrix>,
}

/// Computes the kernel of `⊕_g P(deg g) -> T` sending generator `g` to the
/// given vector of `T` at its degree.
pub(crate) fn syzygies(target: &BoxRep, gens: &[(usize, Vec<Scalar>)]) -> Syzygies {
    let field = &target.field;
    let index = &target.index;
    let n = index.len();
    let mut images: Vec<HashMap<usize, Vec<Scalar>>> = Vec::with_capacity(n);
    let mut active: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut basis: Vec<Matrix> = Vec::with_capacity(n);
    let mut dims = Vec::with_capacity(n);
    let mut covers: Vec<Vec<Matrix>> = Vec::with_capacity(n);

    for x in 0..n {
        let act: Vec<usize> = (0..gens.len()).filter(|&g| index.below(gens[g].0, x)).collect();
        let mut img: HashMap<usize, Vec<Scalar>> = HashMap::with_capacity(act.len());
        for &g in &act {
            let v = if gens[g].0 == x {
                gens[g].1.clone()
            } else {
                let (k, &p) = index.preds[x]
                    .iter()
                    .enumerate()
                    .find(|(_, &p)| index.below(gens[g].0, p))
                    .expect("a generator strictly below x lies below a cover of x");
                target.covers[x][k].apply(field, &images[p][&g])
            };
            img.insert(g, v);
        }
        let phi = Matrix::from_columns(field, target.dims[x], &act.iter().map(|g| img[g].clone()).collect::<Vec<_>>());
        let (k, piv) = kernel_with_pivots(field, &phi);
        let pos: HashMap<usize, usize> = act.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let mut cov = Vec::with_capacity(index.preds[x].len());
        for &p in &index.preds[x] {
            let kp: &Matrix = &basis[p];
            let mut m = Matrix::zeros(field, k.cols(), kp.cols());
            for j in 0..kp.cols() {
                // embed the j-th basis vector of W_p into the coordinates at x
                let mut v = vec![field.zero(); act.len()];
                for (i, &g) in active[p].iter().enumerate() {
                    v[pos[&g]] = kp.get(i, j).clone();
                }
                for (r, &pr) in piv.iter().enumerate() {
                    m.set(r, j, v[pr].clone());
                }
            }
            cov.push(m);
        }
        dims.push(k.cols());
        covers.push(cov);
        images.push(img);
        active.push(act);
        basis.push(k);
    }
    Syzygies {
        rep: BoxRep {
            field: field.clone(),
            index: index.clone(),
            dims,
            covers,
        },
        active,
        basis,
    }
}

impl Syzygies {
    /// A vector of `W_x` written over the free generators active at `x`.
    pub fn embed(&self, x: usize, w: &[Scalar]) -> Vec<(usize, Scalar)> {
        let field = &self.rep.field;
        let v = self.basis[x].apply(field, w);
        self.active[x]
            .iter()
            .zip(v)
            .filter(|(_, s)| !field.is_zero(s))
            .map(|(&g, s)| (g, s))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpmod::Presentation;
    use crate::poset::PosetDescriptor;

    #[test]
    fn rejects_sets_that_are_not_down_closed() {
        assert!(BoxIndex::new(vec![Degree::grid(&[1])]).is_err());
        assert!(BoxIndex::new(vec![Degree::grid(&[]), Degree::grid(&[1])]).is_ok());
    }

    #[test]
    fn generators_of_free_module() {
        let f = Field::rational();
        let p = PosetDescriptor::grid(&[2, 2]);
        let v = Presentation::free(p.clone(), f, vec![Degree::grid(&[1, 0]), Degree::grid(&[1, 1])]).unwrap();
        let idx = BoxIndex::new(p.degrees()).unwrap();
        let rep = BoxRep::from_representation(&v, idx.clone()).unwrap();
        let gens = rep.minimal_generators();
        let degs: Vec<&Degree> = gens.iter().map(|(x, _)| &idx.degrees[*x]).collect();
        assert_eq!(degs, vec![&Degree::grid(&[1, 0]), &Degree::grid(&[1, 1])]);
        let syz = syzygies(&rep, &gens);
        assert!(syz.rep.is_zero());
    }
}
