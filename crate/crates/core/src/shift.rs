//! Shift functors on grid modules, torsion parts, torsion heights and the
//! sheafification `Σ̂^∞`.
//!
//! Every finitely presented grid module is constant beyond the join `J` of its
//! generator and relation degrees: for `x_i >= J_i` the generators and
//! relations active at `x` and `x + o_i` coincide, so `V_x -> V_{x+o_i}` is the
//! identity. Hence the corner `x ∨ J` stabilizes every degree `x`, the torsion
//! part is `ker(V_x -> V_{x∨J})`, and all torsion witnesses live in `↓J`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fpmod::document::{degree_to_json, PosetDocument};
use crate::fpmod::{submodule_presentation, Element, Evaluator, FreeModule, Presentation, Representation};
use crate::homology::default_box;
use crate::linalg::{kernel, rank, Matrix};
use crate::poset::{Degree, GridBox, GridDegree, PosetDescriptor};

fn require_grid(v: &Presentation) -> Result<&GridBox> {
    match v.poset() {
        PosetDescriptor::Grid(b) => Ok(b),
        other => Err(Error::UnsupportedKind(other.kind())),
    }
}

fn grid(d: &Degree) -> &GridDegree {
    d.as_grid().expect("grid module degrees are grid degrees")
}

/// Join of all presentation degrees, `0` for the zero presentation.
pub fn stabilization_join(v: &Presentation) -> Result<GridDegree> {
    require_grid(v)?;
    Ok(v.degree_join().map(|d| grid(&d).clone()).unwrap_or_default())
}

/// The corner `x ∨ J` beyond which every structure map out of `x` is stable.
pub fn stabilization_corner(v: &Presentation, x: &GridDegree) -> Result<GridDegree> {
    Ok(x.join(&stabilization_join(v)?))
}

/// The same presentation on a region without a sum bound that contains `J`
/// and the original region. A presentation describes a module on the whole
/// grid; the region is only a truncation.
fn unbounded(v: &Presentation, extra: &GridDegree) -> Result<Presentation> {
    let b = require_grid(v)?;
    let j = stabilization_join(v)?.join(extra);
    let n = b.directions().max(j.max_direction());
    let caps = (1..=n).map(|d| b.cap(d).max(j.get(d))).collect();
    v.with_region(PosetDescriptor::Grid(GridBox::new(caps)))
}

fn map_degrees(v: &Presentation, f: impl Fn(&GridDegree) -> GridDegree) -> Result<Presentation> {
    require_grid(v)?;
    let g = |d: &Degree| Degree::Grid(f(grid(d)));
    let rels = v
        .relations()
        .iter()
        .map(|r| (g(&r.degree), r.entries.clone()))
        .collect();
    Presentation::new(
        v.poset().clone(),
        v.field().clone(),
        v.generators().iter().map(g).collect(),
        rels,
    )
}

/// `Σ_i V`, whose value at `x` is `V_{x+o_i}`.
pub fn shift(v: &Presentation, direction: u32) -> Result<Presentation> {
    if direction == 0 {
        return Err(Error::InvalidDegree("directions are numbered from 1".into()));
    }
    map_degrees(v, |d| d.lower(direction))
}

/// `Σ̂ V`: every positive coordinate of every degree lowered by one.
pub fn bs(v: &Presentation) -> Result<Presentation> {
    map_degrees(v, GridDegree::lower_all)
}

pub fn bs_power(v: &Presentation, s: usize) -> Result<Presentation> {
    let mut w = v.clone();
    for _ in 0..s {
        if w.generators().iter().all(|d| grid(d).is_zero()) && w.relations().iter().all(|r| grid(&r.degree).is_zero()) {
            break;
        }
        w = bs(&w)?;
    }
    Ok(w)
}

/// `V_y = k^rank` for `y >= base`, zero elsewhere, with identity maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedModule {
    pub base: Degree,
    pub rank: usize,
}

impl InducedModule {
    pub fn to_json(&self) -> Value {
        json!({"base": degree_to_json(&self.base), "rank": self.rank})
    }

    /// `P(base)^rank` on the given region.
    pub fn to_presentation(&self, region: &PosetDescriptor, field: &crate::field::Field) -> Result<Presentation> {
        Presentation::free(region.clone(), field.clone(), vec![self.base.clone(); self.rank])
    }
}

/// `Σ̂^∞ V`, induced at `0` with rank `dim V_J`.
pub fn sheafify_poset(v: &Presentation) -> Result<InducedModule> {
    let j = stabilization_join(v)?;
    let w = unbounded(v, &j)?;
    Ok(InducedModule {
        base: Degree::Grid(GridDegree::zero()),
        rank: w.dim(&Degree::Grid(j))?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionReport {
    pub region: PosetDescriptor,
    /// `dim (V_T)_x` at every degree of the region where it is nonzero.
    pub torsion_dims: Vec<(Degree, usize)>,
    /// `(direction, tht_i)`.
    pub tht: Vec<(u32, i64)>,
    pub is_torsion: bool,
    pub is_torsion_free: bool,
    /// Whether the region contains `↓J`, so nothing happens outside it.
    pub certified: bool,
}

impl TorsionReport {
    pub fn tht(&self, direction: u32) -> i64 {
        self.tht.iter().find(|(d, _)| *d == direction).map_or(-1, |(_, t)| *t)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "torsionDims": self.torsion_dims.iter().map(|(d, n)| json!({"degree": degree_to_json(d), "dim": n})).collect::<Vec<_>>(),
            "tht": self.tht.iter().map(|(d, t)| json!({"direction": d, "value": t})).collect::<Vec<_>>(),
            "isTorsion": self.is_torsion,
            "isTorsionFree": self.is_torsion_free,
            "box": serde_json::to_value(PosetDocument::from_descriptor(&self.region)).expect("serializable"),
            "certified": self.certified,
        })
    }
}

/// The kernel of `V_x -> V_{x∨J}` as columns in the basis of `V_x`.
fn torsion_at(ev: &Evaluator, j: &GridDegree, x: &GridDegree) -> Result<Matrix> {
    let corner = Degree::Grid(x.join(j));
    let m = ev.map(&Degree::Grid(x.clone()), &corner)?;
    Ok(kernel(ev.field(), &m))
}

fn region_or_default(v: &Presentation, region: Option<&PosetDescriptor>) -> Result<(PosetDescriptor, bool)> {
    let (d, cert) = default_box(v);
    match region {
        None => Ok((d, cert)),
        Some(r) => {
            if r.kind() != "grid" {
                return Err(Error::KindMismatch(r.kind(), "grid"));
            }
            Ok((r.clone(), cert && d.is_within(r)))
        }
    }
}

/// `tht_i` for every direction up to the largest one in the module or the
/// region. Witnesses are searched in `region` when given, otherwise in `↓J`,
/// which contains all of them.
pub fn torsion_heights(v: &Presentation, region: Option<&PosetDescriptor>) -> Result<Vec<(u32, i64)>> {
    let j = stabilization_join(v)?;
    let scan = match region {
        Some(r) => r.clone(),
        None => PosetDescriptor::Grid(GridBox::below(&j)),
    };
    let PosetDescriptor::Grid(sb) = &scan else {
        return Err(Error::KindMismatch(scan.kind(), "grid"));
    };
    let n = require_grid(v)?.directions().max(j.max_direction()).max(sb.directions());
    let top = (1..=n).fold(GridDegree::zero(), |acc, d| acc.raise(d));
    let w = unbounded(v, &GridDegree::from_dense(&sb.caps).add(&top))?;
    let ev = Evaluator::new(&w);
    let degrees = scan.degrees();
    let mut out = Vec::with_capacity(n as usize);
    for i in 1..=n {
        let mut best = -1i64;
        for x in &degrees {
            let g = grid(x);
            // beyond J_i the map in direction i is the identity
            if g.get(i) >= j.get(i) || i64::from(g.get(i)) <= best {
                continue;
            }
            let d = ev.dim(x)?;
            if d == 0 {
                continue;
            }
            let m = ev.map(x, &Degree::Grid(g.raise(i)))?;
            if rank(ev.field(), &m) < d {
                best = i64::from(g.get(i));
            }
        }
        out.push((i, best));
    }
    Ok(out)
}

/// The torsion part: a report on `region` (default `↓J`) and a presentation
/// of `V_T`.
pub fn torsion_part(v: &Presentation, region: Option<&PosetDescriptor>) -> Result<(TorsionReport, Presentation)> {
    let requested = region;
    let (region, certified) = region_or_default(v, region)?;
    let j = stabilization_join(v)?;
    let PosetDescriptor::Grid(rb) = &region else { unreachable!("checked above") };
    let w = unbounded(v, &GridDegree::from_dense(&rb.caps).join(&j))?;
    let ev = Evaluator::new(&w);
    let mut torsion_dims = Vec::new();
    let mut torsion_everywhere = true;
    for x in region.degrees() {
        let k = torsion_at(&ev, &j, grid(&x))?;
        if k.cols() != ev.dim(&x)? {
            torsion_everywhere = false;
        }
        if k.cols() > 0 {
            torsion_dims.push((x, k.cols()));
        }
    }
    let presentation = torsion_presentation(v, &w, &ev, &j)?;
    let report = TorsionReport {
        region,
        is_torsion_free: torsion_dims.is_empty(),
        is_torsion: torsion_everywhere,
        torsion_dims,
        tht: torsion_heights(v, requested)?,
        certified,
    };
    Ok((report, presentation))
}

/// Lifts of minimal generators of `V_T` to the free module of `w`.
fn torsion_generators(w: &Presentation, ev: &Evaluator, j: &GridDegree) -> Result<Vec<Element>> {
    let field = w.field();
    let mut out = Vec::new();
    let down = PosetDescriptor::Grid(GridBox::below(j));
    for x in down.degrees() {
        let g = grid(&x);
        let k = torsion_at(ev, j, g)?;
        if k.cols() == 0 {
            continue;
        }
        // images of the torsion of the predecessors, then the new vectors
        let mut span = Matrix::zeros(field, k.rows(), 0);
        for p in x.predecessors() {
            let kp = torsion_at(ev, j, grid(&p))?;
            if kp.cols() > 0 {
                span = span.hstack(&ev.map(&p, &x)?.mul(field, &kp)?);
            }
        }
        let mut r = rank(field, &span);
        let piece = ev.piece(&x)?;
        let basis_gens = piece.basis_generators();
        for c in 0..k.cols() {
            let col = Matrix::from_columns(field, k.rows(), &[k.column(c)]);
            let next = span.hstack(&col);
            let nr = rank(field, &next);
            if nr > r {
                span = next;
                r = nr;
                let coefficients = basis_gens
                    .iter()
                    .zip(k.column(c))
                    .filter(|(_, s)| !field.is_zero(s))
                    .map(|(&g, s)| (g, s))
                    .collect();
                out.push(Element::new(x.clone(), coefficients));
            }
        }
    }
    Ok(out)
}

/// `V_T = ⟨t, r | syz(t, r)⟩ / ⟨r⟩` with `t` the torsion lifts and `r` the
/// relations of `V`, all inside the free module of `V`. Dropping the `r`
/// coordinates of each syzygy leaves relations on `t` alone.
fn torsion_presentation(v: &Presentation, w: &Presentation, ev: &Evaluator, j: &GridDegree) -> Result<Presentation> {
    let lifts = torsion_generators(w, ev, j)?;
    let region = output_region(v, j);
    if lifts.is_empty() {
        return Ok(Presentation::zero(region, v.field().clone()));
    }
    let free = FreeModule::new(PosetDescriptor::Grid(GridBox::below(j)), v.field().clone(), v.generators().to_vec())?;
    let mut gens = lifts.clone();
    gens.extend(v.relations().iter().map(|r| Element::new(r.degree.clone(), r.entries.clone())));
    let sub = submodule_presentation(&free, &gens)?;
    let t = lifts.len();
    let rels = sub
        .relations()
        .iter()
        .map(|r| (r.degree.clone(), r.entries.iter().filter(|(g, _)| *g < t).cloned().collect()))
        .collect();
    Presentation::new(region, v.field().clone(), lifts.into_iter().map(|e| e.degree).collect(), rels)
}

fn output_region(v: &Presentation, j: &GridDegree) -> PosetDescriptor {
    if v.poset().contains(&Degree::Grid(j.clone())) {
        v.poset().clone()
    } else {
        PosetDescriptor::Grid(GridBox::below(j))
    }
}

/// `V / V_T`: the relations of `V` together with the torsion lifts.
pub fn torsion_free_part(v: &Presentation) -> Result<Presentation> {
    let j = stabilization_join(v)?;
    let w = unbounded(v, &j)?;
    let ev = Evaluator::new(&w);
    let lifts = torsion_generators(&w, &ev, &j)?;
    let mut rels: Vec<_> = v.relations().iter().map(|r| (r.degree.clone(), r.entries.clone())).collect();
    rels.extend(lifts.into_iter().map(|e| (e.degree, e.coefficients)));
    Presentation::new(output_region(v, &j), v.field().clone(), v.generators().to_vec(), rels)
}

/// `Some(rank)` when `V` is induced at `x` on `region` (default: `↓(J ∨ x)`,
/// which decides the question), `None` otherwise.
pub fn is_induced_at(v: &Presentation, x: &Degree, region: Option<&PosetDescriptor>) -> Result<Option<usize>> {
    let xg = x.as_grid().ok_or(Error::KindMismatch(x.kind(), "grid"))?;
    let j = stabilization_join(v)?;
    let region = match region {
        Some(r) => r.clone(),
        None => PosetDescriptor::Grid(GridBox::below(&j.join(xg))),
    };
    let PosetDescriptor::Grid(rb) = &region else {
        return Err(Error::KindMismatch(region.kind(), "grid"));
    };
    let w = unbounded(v, &GridDegree::from_dense(&rb.caps).join(xg))?;
    let ev = Evaluator::new(&w);
    let r = ev.dim(x)?;
    for y in region.degrees() {
        let d = ev.dim(&y)?;
        if !x.below(&y) {
            if d != 0 {
                return Ok(None);
            }
            continue;
        }
        if d != r {
            return Ok(None);
        }
        for p in y.predecessors() {
            if x.below(&p) && rank(ev.field(), &ev.map(&p, &y)?) != r {
                return Ok(None);
            }
        }
    }
    Ok(Some(r))
}

#[cfg(test)]
mod tests;
