//! The restriction `ι*` along the inclusion of the Young lattice into the grid
//! and the pullback `q*` along the sorting map, both evaluated degreewise.

use super::Representation;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::poset::{Degree, PosetDescriptor};

fn young_part(x: &Degree) -> Result<&crate::poset::Partition> {
    x.as_young().ok_or(Error::KindMismatch(x.kind(), "young"))
}

fn grid_part(x: &Degree) -> Result<&crate::poset::GridDegree> {
    x.as_grid().ok_or(Error::KindMismatch(x.kind(), "grid"))
}

/// `ι*V`: a grid module seen on partitions, `(ι*V)_λ = V_λ` with `λ` padded by
/// zeros.
pub struct YoungRestriction<'a> {
    inner: &'a dyn Representation,
    region: PosetDescriptor,
}

impl<'a> YoungRestriction<'a> {
    /// `region` must be a Young region whose partitions all lie in the grid
    /// region of `inner`.
    pub fn new(inner: &'a dyn Representation, region: PosetDescriptor) -> Result<Self> {
        if region.kind() != "young" || inner.region().kind() != "grid" {
            return Err(Error::PosetMismatch("ι* goes from a grid module to a Young region".into()));
        }
        Ok(YoungRestriction { inner, region })
    }
}

impl Representation for YoungRestriction<'_> {
    fn field(&self) -> &Field {
        self.inner.field()
    }

    fn region(&self) -> &PosetDescriptor {
        &self.region
    }

    fn dim(&self, x: &Degree) -> Result<usize> {
        self.region.check(x)?;
        self.inner.dim(&Degree::Grid(young_part(x)?.to_grid()))
    }

    fn map(&self, x: &Degree, y: &Degree) -> Result<Matrix> {
        self.region.check(x)?;
        self.region.check(y)?;
        if !x.leq(y)? {
            return Err(Error::NotComparable {
                from: x.to_string(),
                to: y.to_string(),
            });
        }
        self.inner
            .map(&Degree::Grid(young_part(x)?.to_grid()), &Degree::Grid(young_part(y)?.to_grid()))
    }
}

/// `q*W`: a Young module pulled back to the grid, `(q*W)_x = W_{sort(x)}`.
pub struct SymmetricLift<'a> {
    inner: &'a dyn Representation,
    region: PosetDescriptor,
}

impl<'a> SymmetricLift<'a> {
    pub fn new(inner: &'a dyn Representation, region: PosetDescriptor) -> Result<Self> {
        if region.kind() != "grid" || inner.region().kind() != "young" {
            return Err(Error::PosetMismatch("q* goes from a Young module to a grid region".into()));
        }
        Ok(SymmetricLift { inner, region })
    }
}

impl Representation for SymmetricLift<'_> {
    fn field(&self) -> &Field {
        self.inner.field()
    }

    fn region(&self) -> &PosetDescriptor {
        &self.region
    }

    fn dim(&self, x: &Degree) -> Result<usize> {
        self.region.check(x)?;
        self.inner.dim(&Degree::Young(grid_part(x)?.sorted()))
    }

    fn map(&self, x: &Degree, y: &Degree) -> Result<Matrix> {
        self.region.check(x)?;
        self.region.check(y)?;
        if !x.leq(y)? {
            return Err(Error::NotComparable {
                from: x.to_string(),
                to: y.to_string(),
            });
        }
        self.inner
            .map(&Degree::Young(grid_part(x)?.sorted()), &Degree::Young(grid_part(y)?.sorted()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpmod::Presentation;
    use crate::poset::{GridBox, YoungBox};

    fn sample_grid() -> Presentation {
        let f = Field::rational();
        Presentation::new(
            PosetDescriptor::grid(&[3, 3, 3]),
            f.clone(),
            vec![Degree::grid(&[1]), Degree::grid(&[0, 1])],
            vec![(Degree::grid(&[1, 1]), vec![(0, f.one()), (1, f.from_i64(2))])],
        )
        .unwrap()
    }

    fn sample_young() -> Presentation {
        let f = Field::rational();
        Presentation::new(
            PosetDescriptor::young(5),
            f.clone(),
            vec![Degree::young(&[1]).unwrap()],
            vec![(Degree::young(&[2, 1]).unwrap(), vec![(0, f.one())])],
        )
        .unwrap()
    }

    #[test]
    fn restriction_reads_padded_values() {
        let v = sample_grid();
        let region = PosetDescriptor::Young(YoungBox::below(&crate::poset::Partition::new(&[3, 3, 3]).unwrap()));
        let r = YoungRestriction::new(&v, region.clone()).unwrap();
        for lam in region.degrees() {
            let padded = Degree::Grid(lam.as_young().unwrap().to_grid());
            assert_eq!(r.dim(&lam).unwrap(), v.dim(&padded).unwrap());
        }
    }

    #[test]
    fn lift_reads_sorted_values() {
        let w = sample_young();
        let region = PosetDescriptor::Grid(GridBox::new(vec![2, 2, 1]).with_max_sum(5));
        let q = SymmetricLift::new(&w, region.clone()).unwrap();
        for x in region.degrees() {
            let sorted = Degree::Young(x.as_grid().unwrap().sorted());
            assert_eq!(q.dim(&x).unwrap(), w.dim(&sorted).unwrap());
        }
    }

    #[test]
    fn restriction_after_lift_is_identity() {
        let w = sample_young();
        let grid_region = PosetDescriptor::Grid(GridBox::new(vec![5, 5, 5, 5, 5]).with_max_sum(5));
        let q = SymmetricLift::new(&w, grid_region).unwrap();
        let r = YoungRestriction::new(&q, PosetDescriptor::young(5)).unwrap();
        let degrees = PosetDescriptor::young(5).degrees();
        for x in &degrees {
            assert_eq!(r.dim(x).unwrap(), w.dim(x).unwrap());
            for y in &degrees {
                if x.below(y) {
                    assert_eq!(r.map(x, y).unwrap(), w.map(x, y).unwrap());
                }
            }
        }
    }
}
