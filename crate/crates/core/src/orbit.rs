//! Modules over the opposite orbit category of `(ℤ, +)`.
//!
//! Objects are positive integers `n` (the coset spaces `ℤ/n`). A morphism
//! `n -> m` exists when `n | m` and is a shift `a ∈ ℤ/n`; shift `0` is the
//! canonical morphism `1 + mℤ ↦ 1 + nℤ` read backwards. Composition adds
//! shifts. Everything is truncated to the divisors of a top object `M`.
//!
//! The free module `P(n)` has value `k^n` (one coordinate per shift) at every
//! multiple of `n`; canonical morphisms keep coordinates and the generator of
//! `G_m` rotates them. A relation at `d` is a vector in `⊕_g k^{n_g}`, and the
//! submodule it generates is spanned, at every multiple of `d`, by its
//! rotations.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, Scalar};
use crate::fpmod::{FieldDocument, Presentation, Representation};
use crate::homology::{max_norm, report, HomologyReport};
use crate::linalg::{cokernel, kernel, rank, Cokernel, Matrix};
use crate::poset::{divisibility_decode, divisibility_encode, divisors, Degree, GridBox, Norm, PosetDescriptor};

/// A morphism `source -> target` of the opposite orbit category.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitMorphism {
    pub source: u64,
    pub target: u64,
    pub shift: u64,
}

impl OrbitMorphism {
    pub fn new(source: u64, target: u64, shift: i64) -> Result<Self> {
        if source == 0 || target == 0 {
            return Err(Error::NotPositive("object"));
        }
        if !target.is_multiple_of(source) {
            return Err(Error::NotComparable {
                from: source.to_string(),
                to: target.to_string(),
            });
        }
        Ok(OrbitMorphism {
            source,
            target,
            shift: shift.rem_euclid(source as i64) as u64,
        })
    }

    pub fn canonical(source: u64, target: u64) -> Result<Self> {
        OrbitMorphism::new(source, target, 0)
    }

    pub fn identity(n: u64) -> Result<Self> {
        OrbitMorphism::new(n, n, 0)
    }

    /// All morphisms `source -> target`, by shift.
    pub fn all(source: u64, target: u64) -> Result<Vec<Self>> {
        (0..source as i64).map(|a| OrbitMorphism::new(source, target, a)).collect()
    }

    /// `self ∘ other`, defined when `other.target == self.source`.
    pub fn after(&self, other: &OrbitMorphism) -> Result<Self> {
        if other.target != self.source {
            return Err(Error::NotComparable {
                from: other.target.to_string(),
                to: self.source.to_string(),
            });
        }
        OrbitMorphism::new(other.source, self.target, (self.shift + other.shift) as i64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRelation {
    pub object: u64,
    /// `(generator, vector over the shifts of that generator)`.
    pub entries: Vec<(usize, Vec<Scalar>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPresentation {
    modulus: u64,
    field: Field,
    generators: Vec<u64>,
    relations: Vec<OrbitRelation>,
}

impl OrbitPresentation {
    pub fn new(modulus: u64, field: Field, generators: Vec<u64>, relations: Vec<OrbitRelation>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::NotPositive("modulus"));
        }
        for (i, &n) in generators.iter().enumerate() {
            if n == 0 || !modulus.is_multiple_of(n) {
                return Err(Error::parse(format!("generators[{i}]"), format!("{n} does not divide the modulus {modulus}")));
            }
        }
        let mut rels = Vec::with_capacity(relations.len());
        for (r, rel) in relations.into_iter().enumerate() {
            let loc = format!("relations[{r}]");
            if rel.object == 0 || !modulus.is_multiple_of(rel.object) {
                return Err(Error::parse(loc, format!("{} does not divide the modulus {modulus}", rel.object)));
            }
            let mut merged: BTreeMap<usize, Vec<Scalar>> = BTreeMap::new();
            for (g, v) in rel.entries {
                let Some(&n) = generators.get(g) else {
                    return Err(Error::parse(loc, format!("generator index {g} out of range")));
                };
                if rel.object % n != 0 {
                    return Err(Error::IncomparableDegrees {
                        location: loc,
                        generator: n.to_string(),
                        relation: rel.object.to_string(),
                    });
                }
                if v.len() as u64 != n {
                    return Err(Error::parse(
                        loc,
                        format!("entry for generator {g} needs {n} scalars, got {}", v.len()),
                    ));
                }
                let slot = merged.entry(g).or_insert_with(|| vec![field.zero(); n as usize]);
                for (a, b) in slot.iter_mut().zip(&v) {
                    *a = field.add(a, b);
                }
            }
            merged.retain(|_, v| v.iter().any(|s| !field.is_zero(s)));
            rels.push(OrbitRelation {
                object: rel.object,
                entries: merged.into_iter().collect(),
            });
        }
        Ok(OrbitPresentation {
            modulus,
            field,
            generators,
            relations: rels,
        })
    }

    pub fn free(modulus: u64, field: Field, generators: Vec<u64>) -> Result<Self> {
        OrbitPresentation::new(modulus, field, generators, Vec::new())
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn relations(&self) -> &[OrbitRelation] {
        &self.relations
    }

    /// Objects of the truncation in canonical order (refining divisibility).
    pub fn objects(&self) -> Vec<u64> {
        objects_of(self.modulus)
    }

    pub fn direct_sum(&self, other: &OrbitPresentation) -> Result<OrbitPresentation> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field.spec(), other.field.spec())));
        }
        if self.modulus != other.modulus {
            return Err(Error::PosetMismatch(format!("modulus {} vs {}", self.modulus, other.modulus)));
        }
        let off = self.generators.len();
        let mut generators = self.generators.clone();
        generators.extend(&other.generators);
        let mut relations = self.relations.clone();
        relations.extend(other.relations.iter().map(|r| OrbitRelation {
            object: r.object,
            entries: r.entries.iter().map(|(g, v)| (g + off, v.clone())).collect(),
        }));
        OrbitPresentation::new(self.modulus, self.field.clone(), generators, relations)
    }

    /// Coordinates of the free module at `m`: `(generator, offset)` for each
    /// generator whose object divides `m`.
    fn layout(&self, m: u64) -> (Vec<(usize, usize)>, usize) {
        let mut out = Vec::new();
        let mut off = 0;
        for (g, &n) in self.generators.iter().enumerate() {
            if m.is_multiple_of(n) {
                out.push((g, off));
                off += n as usize;
            }
        }
        (out, off)
    }

    /// `V_m` with the action of the generator of `G_m`.
    pub fn evaluate(&self, m: u64) -> Result<OrbitPiece> {
        if m == 0 || !self.modulus.is_multiple_of(m) {
            return Err(Error::OutsideRegion(format!("object {m} does not divide {}", self.modulus)));
        }
        let f = &self.field;
        let (layout, ambient) = self.layout(m);
        let offset: BTreeMap<usize, usize> = layout.iter().copied().collect();
        let mut cols = Vec::new();
        for r in self.relations.iter().filter(|r| m.is_multiple_of(r.object)) {
            // rotations of the relation repeat with period lcm of the involved objects
            let period = r.entries.iter().fold(1u64, |acc, (g, _)| acc.lcm(&self.generators[*g]));
            for c in 0..period {
                let mut col = vec![f.zero(); ambient];
                for (g, v) in &r.entries {
                    let n = self.generators[*g];
                    for (t, s) in v.iter().enumerate() {
                        col[offset[g] + ((t as u64 + c) % n) as usize] = s.clone();
                    }
                }
                cols.push(col);
            }
        }
        let coker = cokernel(f, &Matrix::from_columns(f, ambient, &cols));
        let rotation = self.rotation(&layout, ambient);
        let action = coker.projection.mul(f, &rotation)?.mul(f, &coker.section(f))?;
        Ok(OrbitPiece {
            object: m,
            layout,
            ambient,
            coker,
            action,
        })
    }

    fn rotation(&self, layout: &[(usize, usize)], ambient: usize) -> Matrix {
        let f = &self.field;
        let mut rot = Matrix::zeros(f, ambient, ambient);
        for &(g, off) in layout {
            let n = self.generators[g] as usize;
            for t in 0..n {
                rot.set(off + (t + 1) % n, off + t, f.one());
            }
        }
        rot
    }

    /// The matrix of `V(φ)` for a morphism `φ: n -> m`.
    pub fn morphism_matrix(&self, phi: &OrbitMorphism) -> Result<Matrix> {
        let a = self.evaluate(phi.source)?;
        let b = self.evaluate(phi.target)?;
        let f = &self.field;
        let mut m = Matrix::zeros(f, b.dim(), a.dim());
        let pos: BTreeMap<usize, usize> = b.layout.iter().copied().collect();
        let sec = a.coker.section(f);
        for k in 0..a.dim() {
            let mut v = vec![f.zero(); b.ambient];
            for &(g, off) in &a.layout {
                let n = self.generators[g] as usize;
                for t in 0..n {
                    let s = sec.get(off + t, k);
                    if !f.is_zero(s) {
                        v[pos[&g] + t] = s.clone();
                    }
                }
            }
            let img = b.coker.project(f, &v);
            for (i, s) in img.into_iter().enumerate() {
                m.set(i, k, s);
            }
        }
        // precompose with the shift acting on the source
        let shift = matrix_power(f, &a.action, phi.shift);
        m.mul(f, &shift)
    }

    /// Scalars of this presentation as a different field (through their text
    /// form, like [`Presentation::over_field`]).
    pub fn over_field(&self, field: &Field) -> Result<OrbitPresentation> {
        let conv = |s: &Scalar| -> Result<Scalar> {
            let text = match s {
                Scalar::Prime(x) => {
                    let p = self.field.characteristic();
                    if *x > p / 2 {
                        format!("-{}", p - x)
                    } else {
                        x.to_string()
                    }
                }
                _ => self.field.format(s),
            };
            field.parse(&text)
        };
        let relations = self
            .relations
            .iter()
            .map(|r| {
                Ok(OrbitRelation {
                    object: r.object,
                    entries: r
                        .entries
                        .iter()
                        .map(|(g, v)| Ok((*g, v.iter().map(conv).collect::<Result<Vec<_>>>()?)))
                        .collect::<Result<Vec<_>>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        OrbitPresentation::new(self.modulus, field.clone(), self.generators.clone(), relations)
    }
}

fn objects_of(modulus: u64) -> Vec<u64> {
    let mut d = divisors(modulus);
    d.sort_by_key(|&n| (divisibility_encode(n).expect("positive"), n));
    d
}

fn matrix_power(f: &Field, a: &Matrix, e: u64) -> Matrix {
    let mut out = Matrix::identity(f, a.rows());
    for _ in 0..e {
        out = a.mul(f, &out).expect("square");
    }
    out
}

/// `V_m`: a quotient of `⊕_{n_g | m} k^{n_g}` with the rotation action.
#[derive(Clone, Debug)]
pub struct OrbitPiece {
    pub object: u64,
    layout: Vec<(usize, usize)>,
    ambient: usize,
    pub coker: Cokernel,
    /// Action of the shift-1 generator of `G_m` on `V_m`.
    pub action: Matrix,
}

impl OrbitPiece {
    pub fn dim(&self) -> usize {
        self.coker.dim()
    }
}

pub fn evaluate_orbit(v: &OrbitPresentation, m: u64) -> Result<OrbitPiece> {
    v.evaluate(m)
}

/// The restriction along the divisibility poset: generator `g` at `n` becomes
/// `n` grid generators at `encode(n)`, one per shift, and each relation
/// becomes the family of its rotations.
pub fn restrict_to_grid(v: &OrbitPresentation) -> Result<Presentation> {
    let mut generators = Vec::new();
    let mut first = Vec::with_capacity(v.generators.len());
    for &n in &v.generators {
        first.push(generators.len());
        let d = Degree::Grid(divisibility_encode(n)?);
        generators.extend(std::iter::repeat_n(d, n as usize));
    }
    let mut relations = Vec::new();
    for r in &v.relations {
        let deg = Degree::Grid(divisibility_encode(r.object)?);
        let period = r.entries.iter().fold(1u64, |acc, (g, _)| acc.lcm(&v.generators[*g]));
        for c in 0..period {
            let mut entries = Vec::new();
            for (g, vec) in &r.entries {
                let n = v.generators[*g];
                for (t, s) in vec.iter().enumerate() {
                    entries.push((first[*g] + ((t as u64 + c) % n) as usize, s.clone()));
                }
            }
            relations.push((deg.clone(), entries));
        }
    }
    Presentation::new(grid_region(v.modulus)?, v.field.clone(), generators, relations)
}

pub fn grid_region(modulus: u64) -> Result<PosetDescriptor> {
    Ok(PosetDescriptor::Grid(GridBox::below(&divisibility_encode(modulus)?)))
}

/// The orbit module read through canonical morphisms on grid degrees,
/// evaluated on the orbit side. Agrees with [`restrict_to_grid`].
pub struct GridView<'a> {
    module: &'a OrbitPresentation,
    region: PosetDescriptor,
}

impl<'a> GridView<'a> {
    pub fn new(module: &'a OrbitPresentation) -> Result<Self> {
        Ok(GridView {
            module,
            region: grid_region(module.modulus)?,
        })
    }
}

impl Representation for GridView<'_> {
    fn field(&self) -> &Field {
        &self.module.field
    }

    fn region(&self) -> &PosetDescriptor {
        &self.region
    }

    fn dim(&self, x: &Degree) -> Result<usize> {
        self.region.check(x)?;
        let g = x.as_grid().ok_or(Error::KindMismatch(x.kind(), "grid"))?;
        Ok(self.module.evaluate(divisibility_decode(g)?)?.dim())
    }

    fn map(&self, x: &Degree, y: &Degree) -> Result<Matrix> {
        self.region.check(x)?;
        self.region.check(y)?;
        let (gx, gy) = (
            x.as_grid().ok_or(Error::KindMismatch(x.kind(), "grid"))?,
            y.as_grid().ok_or(Error::KindMismatch(y.kind(), "grid"))?,
        );
        self.module
            .morphism_matrix(&OrbitMorphism::canonical(divisibility_decode(gx)?, divisibility_decode(gy)?)?)
    }
}

fn object_norm(n: u64, norm: Norm) -> i64 {
    let x = divisibility_encode(n).expect("positive");
    i64::from(match norm {
        Norm::Sup => x.sup(),
        Norm::Sum => x.sum(),
    })
}

/// `H_0` computed on the orbit side: `V_m` modulo the images of all proper
/// divisors, as `(object, dim)`.
pub fn orbit_h0(v: &OrbitPresentation) -> Result<Vec<(u64, usize)>> {
    let f = &v.field;
    let mut out = Vec::new();
    for m in v.objects() {
        let piece = v.evaluate(m)?;
        if piece.dim() == 0 {
            continue;
        }
        let mut span = Matrix::zeros(f, piece.dim(), 0);
        for l in maximal_divisors(m) {
            span = span.hstack(&v.morphism_matrix(&OrbitMorphism::canonical(l, m)?)?);
        }
        let h = piece.dim() - rank(f, &span);
        if h > 0 {
            out.push((m, h));
        }
    }
    Ok(out)
}

fn maximal_divisors(m: u64) -> Vec<u64> {
    crate::poset::prime_factors(m).into_iter().map(|(p, _)| m / p).collect()
}

/// `(gd, pd)` from the orbit side: a free cover `P -> V` generated in the
/// degrees of `H_0(V)`, and `pd = max(gd V, gd W)` for its kernel `W`.
pub fn orbit_gd_pd(v: &OrbitPresentation, norm: Norm) -> Result<(i64, i64)> {
    let f = &v.field;
    let objects = v.objects();
    // chosen generators: (object, vector in V_object)
    let mut cover: Vec<(u64, Vec<Scalar>)> = Vec::new();
    let mut gd = -1;
    let mut pieces = BTreeMap::new();
    for &m in &objects {
        let piece = v.evaluate(m)?;
        let mut span = Matrix::zeros(f, piece.dim(), 0);
        for l in maximal_divisors(m) {
            span = span.hstack(&v.morphism_matrix(&OrbitMorphism::canonical(l, m)?)?);
        }
        let mut r = rank(f, &span);
        for k in 0..piece.dim() {
            let mut e = vec![f.zero(); piece.dim()];
            e[k] = f.one();
            let trial = span.hstack(&Matrix::from_columns(f, piece.dim(), &[e.clone()]));
            if rank(f, &trial) > r {
                // add the whole G_m-orbit of e
                let mut w = e.clone();
                let mut orbit = Vec::new();
                for _ in 0..m {
                    orbit.push(w.clone());
                    w = piece.action.apply(f, &w);
                }
                span = span.hstack(&Matrix::from_columns(f, piece.dim(), &orbit));
                r = rank(f, &span);
                cover.push((m, e));
                gd = gd.max(object_norm(m, norm));
            }
        }
        pieces.insert(m, piece);
    }
    // kernel of P -> V object by object
    let kernel_at = |m: u64| -> Result<(Vec<(usize, usize)>, usize, Matrix)> {
        let piece = &pieces[&m];
        let mut layout = Vec::new();
        let mut cols = Vec::new();
        let mut off = 0;
        for (k, (n, e)) in cover.iter().enumerate() {
            if !m.is_multiple_of(*n) {
                continue;
            }
            layout.push((k, off));
            off += *n as usize;
            let mut w = v.morphism_matrix(&OrbitMorphism::canonical(*n, m)?)?.apply(f, e);
            for _ in 0..*n {
                cols.push(w.clone());
                w = piece.action.apply(f, &w);
            }
        }
        let phi = Matrix::from_columns(f, piece.dim(), &cols);
        Ok((layout, off, kernel(f, &phi)))
    };
    let mut kernels = BTreeMap::new();
    for &m in &objects {
        kernels.insert(m, kernel_at(m)?);
    }
    let mut gd_w = -1;
    for &m in &objects {
        let (layout, ambient, w) = &kernels[&m];
        if w.cols() == 0 {
            continue;
        }
        let pos: BTreeMap<usize, usize> = layout.iter().copied().collect();
        // images of the kernels at maximal divisors; canonical maps keep coordinates
        let mut span = Matrix::zeros(f, *ambient, 0);
        for l in maximal_divisors(m) {
            let (ll, _, wl) = &kernels[&l];
            for c in 0..wl.cols() {
                let mut col = vec![f.zero(); *ambient];
                for &(k, off) in ll {
                    for t in 0..cover[k].0 as usize {
                        col[pos[&k] + t] = wl.get(off + t, c).clone();
                    }
                }
                span = span.hstack(&Matrix::from_columns(f, *ambient, &[col]));
            }
        }
        if rank(f, &span.hstack(w)) > rank(f, &span) {
            gd_w = gd_w.max(object_norm(m, norm));
        }
    }
    Ok((gd, gd.max(gd_w)))
}

/// Homology of the orbit module through its restriction.
pub fn orbit_report(v: &OrbitPresentation, length: usize) -> Result<HomologyReport> {
    report(&restrict_to_grid(v)?, length, None)
}

/// `H_i` of the orbit module as `(object, multiplicity)` pairs.
pub fn orbit_homology(v: &OrbitPresentation, i: usize) -> Result<Vec<(u64, usize)>> {
    let r = orbit_report(v, i)?;
    support_to_objects(r.support(i))
}

fn support_to_objects(s: &[(Degree, usize)]) -> Result<Vec<(u64, usize)>> {
    s.iter()
        .map(|(d, m)| Ok((divisibility_decode(d.as_grid().expect("grid"))?, *m)))
        .collect()
}

pub fn orbit_hd(v: &OrbitPresentation, i: usize, norm: Norm) -> Result<i64> {
    let r = orbit_report(v, i)?;
    Ok(max_norm(r.support(i), norm))
}

/// Eigenspace data of the rotation action at every object, over
/// `cyclotomic(M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotypicReport {
    pub modulus: u64,
    /// `(object, [(t, dim)])`: dimension of the `ζ_M^t`-eigenspace at each
    /// object, for every `t` with `(ζ_M^t)^n = 1`.
    pub per_object: Vec<(u64, Vec<(u64, usize)>)>,
    /// `m_ξ` for `ξ = ζ_M^t`, indexed by `t`.
    pub multiplicities: Vec<usize>,
}

/// One summand type of the sheafification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafSummand {
    pub t: u64,
    /// Multiplicative order of `ξ`.
    pub order: u64,
    /// Whether `ξ` is a primitive `M`-th root of unity.
    pub primitive: bool,
    /// Smallest object at which the `ξ`-eigenspace is nonzero.
    pub generated_at: u64,
    pub multiplicity: usize,
}

impl IsotypicReport {
    pub fn multiplicity(&self, t: u64) -> usize {
        self.multiplicities[(t % self.modulus) as usize]
    }

    pub fn sheaf(&self) -> Vec<SheafSummand> {
        let m = self.modulus;
        (0..m)
            .filter(|&t| self.multiplicities[t as usize] > 0)
            .map(|t| {
                let order = m / t.gcd(&m);
                let generated_at = self
                    .per_object
                    .iter()
                    .find(|(_, e)| e.iter().any(|&(s, d)| s == t && d > 0))
                    .map_or(m, |(n, _)| *n);
                SheafSummand {
                    t,
                    order,
                    primitive: order == m,
                    generated_at,
                    multiplicity: self.multiplicities[t as usize],
                }
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "modulus": self.modulus,
            "perObject": self.per_object.iter().map(|(n, e)| json!({
                "n": n,
                "eigens": e.iter().map(|(t, d)| json!({"t": t, "dim": d})).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "multiplicities": self.multiplicities.iter().enumerate().filter(|(_, &m)| m > 0)
                .map(|(t, m)| json!({"t": t, "multiplicity": m})).collect::<Vec<_>>(),
            "sheaf": self.sheaf().iter().map(|s| json!({
                "t": s.t,
                "order": s.order,
                "primitive": s.primitive,
                "generatedAt": s.generated_at,
                "multiplicity": s.multiplicity,
            })).collect::<Vec<_>>(),
        })
    }
}

fn require_cyclotomic(v: &OrbitPresentation) -> Result<()> {
    match v.field.spec() {
        FieldSpec::Cyclotomic(n) if u64::from(n) % v.modulus == 0 => Ok(()),
        other => Err(Error::FieldMismatch(format!(
            "isotypic decomposition needs cyclotomic({}) scalars, got {other}",
            v.modulus
        ))),
    }
}

/// `ζ_M^t` inside a cyclotomic field of order divisible by `M`.
fn root(f: &Field, modulus: u64, t: u64) -> Result<Scalar> {
    let FieldSpec::Cyclotomic(n) = f.spec() else {
        return Err(Error::UnsupportedKind("non-cyclotomic field"));
    };
    f.root_of_unity((t * (u64::from(n) / modulus)) as i64)
}

fn eigenspace_dim(f: &Field, a: &Matrix, xi: &Scalar) -> Result<usize> {
    let n = a.rows();
    let mut m = a.clone();
    for i in 0..n {
        m.set(i, i, f.sub(a.get(i, i), xi));
    }
    Ok(n - rank(f, &m))
}

pub fn isotypic_decompose(v: &OrbitPresentation) -> Result<IsotypicReport> {
    require_cyclotomic(v)?;
    let f = &v.field;
    let big = v.modulus;
    let mut per_object = Vec::new();
    let mut multiplicities = vec![0; big as usize];
    for n in v.objects() {
        let piece = v.evaluate(n)?;
        let mut eig = Vec::new();
        // ξ = ζ_M^t has ξ^n = 1 exactly when M / n divides t
        for t in (0..big).step_by((big / n) as usize) {
            let d = if piece.dim() == 0 { 0 } else { eigenspace_dim(f, &piece.action, &root(f, big, t)?)? };
            eig.push((t, d));
            if n == big {
                multiplicities[t as usize] = d;
            }
        }
        per_object.push((n, eig));
    }
    Ok(IsotypicReport {
        modulus: big,
        per_object,
        multiplicities,
    })
}

/// The sheafification as a list of summands `L̲_ξ^{m_ξ}`.
pub fn sheafify_orbit(v: &OrbitPresentation) -> Result<Vec<SheafSummand>> {
    Ok(isotypic_decompose(v)?.sheaf())
}

/// `L̲_ξ` for `ξ = ζ_M^t`, generated at `n` (which needs `ξ^n = 1`): the free
/// module at `n` modulo every other eigenline of the rotation.
pub fn l_xi(modulus: u64, n: u64, t: u64) -> Result<OrbitPresentation> {
    if n == 0 || !modulus.is_multiple_of(n) {
        return Err(Error::InvalidParameters(format!("{n} does not divide {modulus}")));
    }
    if !(t * n).is_multiple_of(modulus) {
        return Err(Error::InvalidParameters(format!("ζ_{modulus}^{t} is not an {n}-th root of unity")));
    }
    let f = Field::cyclotomic(u32::try_from(modulus).map_err(|_| Error::InvalidParameters("modulus too large".into()))?)?;
    let step = modulus / n;
    let mut relations = Vec::new();
    for s in (0..modulus).step_by(step as usize) {
        if s == t % modulus {
            continue;
        }
        // eigenvector for ζ^s: coordinate a carries ζ^{-s a}
        let vec = (0..n)
            .map(|a| root(&f, modulus, (modulus - (s * a) % modulus) % modulus))
            .collect::<Result<Vec<_>>>()?;
        relations.push(OrbitRelation {
            object: n,
            entries: vec![(0, vec)],
        });
    }
    OrbitPresentation::new(modulus, f, vec![n], relations)
}

/// The free module at `n` with everything killed at the proper multiple `m`.
pub fn torsion_at(modulus: u64, field: Field, n: u64, m: u64) -> Result<OrbitPresentation> {
    if !m.is_multiple_of(n) || m == n {
        return Err(Error::InvalidParameters(format!("{m} must be a proper multiple of {n}")));
    }
    let mut e = vec![field.zero(); n as usize];
    e[0] = field.one();
    OrbitPresentation::new(
        modulus,
        field,
        vec![n],
        vec![OrbitRelation {
            object: m,
            entries: vec![(0, e)],
        }],
    )
}

// documents

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitEntryDocument {
    pub gen: usize,
    pub shifts: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitRelationDocument {
    pub object: u64,
    pub entries: Vec<OrbitEntryDocument>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitDocument {
    pub modulus: u64,
    pub field: FieldDocument,
    pub generators: Vec<u64>,
    #[serde(default)]
    pub relations: Vec<OrbitRelationDocument>,
}

impl OrbitDocument {
    pub fn from_presentation(v: &OrbitPresentation) -> Self {
        OrbitDocument {
            modulus: v.modulus,
            field: FieldDocument::from_field(&v.field),
            generators: v.generators.clone(),
            relations: v
                .relations
                .iter()
                .map(|r| OrbitRelationDocument {
                    object: r.object,
                    entries: r
                        .entries
                        .iter()
                        .map(|(g, vec)| OrbitEntryDocument {
                            gen: *g,
                            shifts: vec.iter().map(|s| v.field.format(s)).collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_presentation(&self) -> Result<OrbitPresentation> {
        let field = self.field.to_field()?;
        let relations = self
            .relations
            .iter()
            .enumerate()
            .map(|(r, rel)| {
                let entries = rel
                    .entries
                    .iter()
                    .enumerate()
                    .map(|(e, ent)| {
                        let v = ent
                            .shifts
                            .iter()
                            .enumerate()
                            .map(|(k, s)| {
                                field
                                    .parse(s)
                                    .map_err(|err| Error::parse(format!("relations[{r}].entries[{e}].shifts[{k}]"), err.to_string()))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok((ent.gen, v))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(OrbitRelation {
                    object: rel.object,
                    entries,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        OrbitPresentation::new(self.modulus, field, self.generators.clone(), relations)
    }
}

impl OrbitPresentation {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(OrbitDocument::from_presentation(self)).expect("serializable")
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let doc: OrbitDocument = serde_json::from_value(v.clone()).map_err(|e| Error::parse("document", e.to_string()))?;
        doc.to_presentation()
    }
}
