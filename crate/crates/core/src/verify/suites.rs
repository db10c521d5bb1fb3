//! Bound-verification suites over seeded random populations and registry
//! entries.
//!
//! Instance `k` of a run with seed `s` is built from seed `s + k`, so a
//! failing instance is reproduced by `verify --seed (s + k) --count 1`.
//! Instances run in parallel; results are kept in seed order.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, DEFAULT_PRIME};
use crate::fpmod::{submodule_presentation, Element, Evaluator, FreeModule, Presentation, Representation};
use crate::homology::{minimal_cover, report, resolution, HomologyReport};
use crate::orbit::{
    grid_region, isotypic_decompose, orbit_gd_pd, orbit_report, restrict_to_grid, sheafify_orbit, torsion_at,
    OrbitPresentation,
};
use crate::poset::{divisibility_encode, divisors, Degree, GridDegree, Norm, Partition, PosetDescriptor, YoungBox};
use crate::shift::{bs, bs_power, is_induced_at, sheafify_poset, torsion_heights, torsion_part};
use crate::verify::oracle::oracle_homology_upto;
use crate::verify::random::{random_degree, random_degree_above, random_module, random_orbit_module, rng, small_scalar};
use crate::verify::random::{Profile, ProfileKind};
use crate::verify::registry::{monomial_ideal_module, registry, standard_entries, RegistryEntry, RegistryModule};

pub const SUITES: &[&str] = &[
    "counterexample",
    "sup-hd-vs-pd",
    "torsion-height",
    "torsion-free",
    "sum-submodule",
    "monomial-corollary",
    "shift-sheafify",
    "young-harmonic",
    "orbit",
    "oracle-equivalence",
    "field-independence",
];

/// One checked instance: the bound values observed and any violations.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceRecord {
    pub label: String,
    /// Reproduction seed for random instances.
    pub seed: Option<u64>,
    pub bounds: BTreeMap<String, Value>,
    pub violations: Vec<String>,
    /// The module document, kept for failing instances only.
    pub document: Option<Value>,
}

impl InstanceRecord {
    fn new(label: impl Into<String>, seed: Option<u64>) -> Self {
        InstanceRecord {
            label: label.into(),
            seed,
            bounds: BTreeMap::new(),
            violations: Vec::new(),
            document: None,
        }
    }

    fn bound(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.bounds.insert(key.into(), value.into());
    }

    fn require(&mut self, ok: bool, message: impl FnOnce() -> String) {
        if !ok {
            self.violations.push(message());
        }
    }

    fn with_document(mut self, doc: impl FnOnce() -> Value) -> Self {
        if !self.violations.is_empty() {
            self.document = Some(doc());
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "label": self.label,
            "seed": self.seed,
            "bounds": self.bounds,
            "passed": self.passed(),
        });
        if !self.violations.is_empty() {
            v["violations"] = json!(self.violations);
        }
        if let Some(d) = &self.document {
            v["document"] = d.clone();
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationOutcome {
    pub suite: String,
    pub seed: u64,
    pub count: usize,
    pub instances: Vec<InstanceRecord>,
    pub warnings: Vec<String>,
}

impl VerificationOutcome {
    pub fn failures(&self) -> impl Iterator<Item = &InstanceRecord> {
        self.instances.iter().filter(|i| !i.passed())
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    /// Largest integer value recorded under `key` across all instances.
    pub fn max_bound(&self, key: &str) -> Option<i64> {
        self.instances.iter().filter_map(|i| i.bounds.get(key)?.as_i64()).max()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "seed": self.seed,
            "count": self.count,
            "instancesRun": self.instances.len(),
            "failures": self.failures().map(InstanceRecord::to_json).collect::<Vec<_>>(),
            "instances": self.instances.iter().map(InstanceRecord::to_json).collect::<Vec<_>>(),
            "warnings": self.warnings,
            "passed": self.passed(),
        })
    }
}

/// Runs suite `suite` on `count` random instances starting at `seed`, plus
/// the registry entries the suite applies to.
pub fn verify(suite: &str, seed: u64, count: usize) -> Result<VerificationOutcome> {
    let mut warnings = Vec::new();
    let instances = match suite {
        "counterexample" => counterexample(),
        "sup-hd-vs-pd" => seeded(seed, count, sup_hd_vs_pd).chain_registry(grid_entries(), |e| bound_entry(e, sup_checks)),
        "torsion-height" => seeded(seed, count, torsion_height).chain_registry(grid_entries(), |e| bound_entry(e, tht_checks)),
        "torsion-free" => seeded(seed, count, torsion_free),
        "sum-submodule" => seeded(seed, count, sum_submodule).chain_registry(monomial_entries(), |e| bound_entry(e, sum_checks)),
        "monomial-corollary" => seeded(seed, count, monomial_corollary).chain_registry(monomial_entries(), registry_facts),
        "shift-sheafify" => seeded(seed, count, shift_sheafify).chain_registry(grid_entries(), |e| bound_entry(e, shift_checks)),
        "young-harmonic" => {
            let mut v = seeded(seed, count, young_harmonic).chain_registry(young_entries(), registry_facts);
            v.extend((1..=30).map(harmonic_join));
            v
        }
        "orbit" => {
            let mut v = orbit_fixed();
            v.extend(seeded(seed, count, orbit_random));
            v.chain_registry(orbit_entries(), registry_facts)
        }
        "oracle-equivalence" => seeded(seed, count, oracle_equivalence),
        "field-independence" => {
            let mut v = seeded(seed, count, |s| field_independence(s, &mut Vec::new()));
            for r in &v {
                if let Some(w) = r.bounds.get("warning").and_then(Value::as_str) {
                    warnings.push(format!("{}: {w}", r.label));
                }
            }
            for e in standard_entries().iter().filter(|e| e.module.as_poset().is_some()) {
                v.push(field_independence_entry(e, &mut warnings));
            }
            v
        }
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    Ok(VerificationOutcome {
        suite: suite.to_string(),
        seed,
        count,
        instances,
        warnings,
    })
}

trait ChainRegistry {
    fn chain_registry(self, entries: Vec<RegistryEntry>, f: impl Fn(&RegistryEntry) -> InstanceRecord + Sync + Send) -> Self;
}

impl ChainRegistry for Vec<InstanceRecord> {
    fn chain_registry(mut self, entries: Vec<RegistryEntry>, f: impl Fn(&RegistryEntry) -> InstanceRecord + Sync + Send) -> Self {
        let extra: Vec<InstanceRecord> = entries.par_iter().map(&f).collect();
        self.extend(extra);
        self
    }
}

/// Instances `seed .. seed + count` in parallel, in seed order. An error
/// inside an instance is recorded as a violation.
fn seeded(seed: u64, count: usize, f: impl Fn(u64) -> Result<InstanceRecord> + Sync) -> Vec<InstanceRecord> {
    (0..count as u64)
        .into_par_iter()
        .map(|k| {
            let s = seed.wrapping_add(k);
            f(s).unwrap_or_else(|e| {
                let mut r = InstanceRecord::new(format!("seed {s}"), Some(s));
                r.violations.push(format!("computation failed: {e}"));
                r
            })
        })
        .collect()
}

fn doc(v: &Presentation) -> Value {
    serde_json::from_str(&v.to_json()).expect("documents are JSON")
}

fn failed(label: String, e: Error) -> InstanceRecord {
    let mut r = InstanceRecord::new(label, None);
    r.violations.push(format!("computation failed: {e}"));
    r
}

/// An entry run through the same checks as a random instance.
fn bound_entry(e: &RegistryEntry, checks: fn(&Presentation, &mut InstanceRecord) -> Result<()>) -> InstanceRecord {
    let v = e.module.as_poset().expect("poset entry");
    let mut r = InstanceRecord::new(e.label(), None);
    match checks(v, &mut r) {
        Ok(()) => r.with_document(|| doc(v)),
        Err(err) => failed(e.label(), err),
    }
}

/// An entry's own expected facts.
fn registry_facts(e: &RegistryEntry) -> InstanceRecord {
    let mut r = InstanceRecord::new(e.label(), None);
    match e.check() {
        Ok(checks) => {
            for c in checks {
                r.bound(c.description.clone(), c.observed.clone());
                r.require(c.passed, || format!("expected fact failed: {} (observed {})", c.description, c.observed));
            }
            r.with_document(|| e.module.to_json())
        }
        Err(err) => failed(e.label(), err),
    }
}

fn entries(specs: &[(&str, &str)]) -> Vec<RegistryEntry> {
    specs.iter().map(|(n, p)| registry(n, p).expect("built-in entries are valid")).collect()
}

/// Grid entries computed on a certified box (the counterexample is
/// truncated by a sum bound, so it stays out of the bound suites).
fn grid_entries() -> Vec<RegistryEntry> {
    entries(&[
        ("grid-simple", "1"),
        ("grid-simple", "2"),
        ("grid-simple", "3"),
        ("monomial-ideal", "1,1,0;0,1,1;1,0,1"),
        ("monomial-ideal", "2,0;1,1;0,2"),
    ])
}

fn monomial_entries() -> Vec<RegistryEntry> {
    entries(&[("monomial-ideal", "1,1,0;0,1,1;1,0,1"), ("monomial-ideal", "2,0;1,1;0,2")])
}

fn young_entries() -> Vec<RegistryEntry> {
    entries(&[("young-simple", ""), ("young-simple", "2,1"), ("young-simple", "3,1,1")])
}

fn orbit_entries() -> Vec<RegistryEntry> {
    standard_entries().into_iter().filter(|e| e.module.as_orbit().is_some()).collect()
}

// counterexample

fn counterexample() -> Vec<InstanceRecord> {
    entries(&[("counterexample", "7,10"), ("counterexample", "53,30")])
        .par_iter()
        .map(registry_facts)
        .collect()
}

// grid population: r ≤ 4, exponents ≤ 3, at most 6 generators and relations

fn grid_population(seed: u64) -> Result<(u32, Presentation)> {
    let r = 1 + (seed % 4) as u32;
    let profile = Profile::grid(r, 3).with_counts((1, 6), (0, 6));
    Ok((r, random_module(seed, &profile)?))
}

fn sup_checks(v: &Presentation, r: &mut InstanceRecord) -> Result<()> {
    let rep = report(v, 4, None)?;
    let pd = rep.pd(Norm::Sup);
    r.bound("pd", pd);
    for s in 0..=4 {
        let h = rep.hd(s, Norm::Sup);
        r.bound(format!("hd_{s}"), h);
        r.require(h <= pd, || format!("hd_{s} = {h} exceeds pd = {pd}"));
    }
    Ok(())
}

fn sup_hd_vs_pd(seed: u64) -> Result<InstanceRecord> {
    let (_, v) = grid_population(seed)?;
    let mut r = InstanceRecord::new(format!("seed {seed}"), Some(seed));
    sup_checks(&v, &mut r)?;
    Ok(r.with_document(|| doc(&v)))
}

fn tht_checks(v: &Presentation, r: &mut InstanceRecord) -> Result<()> {
    let pd = report(v, 1, None)?.pd(Norm::Sup);
    r.bound("pd", pd);
    for (i, t) in torsion_heights(v, None)? {
        r.bound(format!("tht_{i}"), t);
        // -1 stands for the empty supremum, and there is nothing to bound
        if t >= 0 {
            r.require(t < pd, || format!("tht_{i} = {t} exceeds pd - 1 = {}", pd - 1));
        }
    }
    Ok(())
}

fn torsion_height(seed: u64) -> Result<InstanceRecord> {
    let (_, v) = grid_population(seed)?;
    let mut r = InstanceRecord::new(format!("seed {seed}"), Some(seed));
    tht_checks(&v, &mut r)?;
    Ok(r.with_document(|| doc(&v)))
}

// torsion-free: images of maps between free modules and their kernels

/// A random element of the free module `g` at a random degree above one of
/// its generators, nonzero.
fn random_element(free: &FreeModule, kind: &ProfileKind, rng: &mut impl Rng) -> Element {
    let anchor = rng.gen_range(0..free.generators.len());
    let degree = random_degree_above(kind, &free.generators[anchor], rng);
    let mut coefficients = vec![(anchor, small_scalar(&free.field, rng))];
    for (g, gd) in free.generators.iter().enumerate() {
        if g != anchor && gd.below(&degree) && rng.gen_bool(0.5) {
            coefficients.push((g, small_scalar(&free.field, rng)));
        }
    }
    Element::new(degree, coefficients)
}

fn torsion_free(seed: u64) -> Result<InstanceRecord> {
    let mut rng = rng(seed);
    let r = 1 + (seed % 3) as u32;
    let kind = ProfileKind::Grid {
        directions: r,
        max_exponent: 3,
    };
    let field = Field::default_prime();
    let targets: Vec<Degree> = (0..rng.gen_range(1..=3)).map(|_| random_degree(&kind, &mut rng)).collect();
    let free = FreeModule::new(PosetDescriptor::grid(&vec![3; r as usize]), field, targets)?;
    let elements: Vec<Element> = (0..rng.gen_range(1..=5)).map(|_| random_element(&free, &kind, &mut rng)).collect();
    let image = submodule_presentation(&free, &elements)?;
    let kernel = minimal_cover(&image, None)?.kernel;
    let mut rec = InstanceRecord::new(format!("seed {seed}"), Some(seed));
    for (name, v) in [("image", &image), ("kernel", &kernel)] {
        let rep = report(v, 4, None)?;
        let gd = rep.gd(Norm::Sup);
        rec.bound(format!("{name}.gd"), gd);
        for s in 0..=4 {
            let h = rep.hd(s, Norm::Sup);
            rec.bound(format!("{name}.hd_{s}"), h);
            rec.require(h <= gd, || format!("{name}: hd_{s} = {h} exceeds gd = {gd}"));
        }
        let (t, _) = torsion_part(v, None)?;
        rec.require(t.is_torsion_free, || format!("{name} has torsion"));
    }
    Ok(rec.with_document(|| doc(&image)))
}

// sum-submodule: submodules of a single P(0)

fn sum_checks(v: &Presentation, r: &mut InstanceRecord) -> Result<()> {
    let rep = report(v, 2, None)?;
    let (gd, h1, h2, omega) = (rep.gd(Norm::Sum), rep.hd(1, Norm::Sum), rep.hd(2, Norm::Sum), rep.omega());
    r.bound("gd", gd);
    r.bound("hd_1", h1);
    r.bound("hd_2", h2);
    r.bound("omega", omega);
    r.require(h1 <= 2 * gd, || format!("hd_1 = {h1} exceeds 2 gd = {}", 2 * gd));
    if h1 >= 0 {
        let cap = 2i64.saturating_pow(omega as u32).saturating_mul(h1);
        r.require(h2 <= cap, || format!("hd_2 = {h2} exceeds 2^ω hd_1 = {cap}"));
    } else {
        r.require(h2 < 0, || "H_2 is nonzero although H_1 vanishes".into());
    }
    Ok(())
}

/// Monomials plus, with probability one half each, redundant generators: a
/// scalar multiple of an earlier generator pushed up in one direction.
fn random_submodule_of_p0(seed: u64) -> Result<Presentation> {
    let mut rng = rng(seed);
    let r = 2 + (seed % 2) as u32;
    let kind = ProfileKind::Grid {
        directions: r,
        max_exponent: 3,
    };
    let field = Field::default_prime();
    let free = FreeModule::new(PosetDescriptor::grid(&vec![3; r as usize]), field.clone(), vec![Degree::grid(&[])])?;
    let mut elements: Vec<Element> = Vec::new();
    for _ in 0..rng.gen_range(1..=4) {
        elements.push(Element::new(random_degree(&kind, &mut rng), vec![(0, small_scalar(&field, &mut rng))]));
        if rng.gen_bool(0.5) {
            let base = elements.choose(&mut rng).expect("nonempty").degree.clone();
            let up = random_degree_above(&kind, &base, &mut rng);
            elements.push(Element::new(up, vec![(0, small_scalar(&field, &mut rng))]));
        }
    }
    submodule_presentation(&free, &elements)
}

fn sum_submodule(seed: u64) -> Result<InstanceRecord> {
    let v = random_submodule_of_p0(seed)?;
    let mut r = InstanceRecord::new(format!("seed {seed}"), Some(seed));
    sum_checks(&v, &mut r)?;
    Ok(r.with_document(|| doc(&v)))
}

// monomial-corollary

fn monomial_corollary(seed: u64) -> Result<InstanceRecord> {
    let mut rng = rng(seed);
    let n = 1 + (seed % 3) as u32;
    let r = 2 + ((seed / 3) % 2) as u32;
    let degrees: Vec<GridDegree> = (0..rng.gen_range(1..=5))
        .map(|_| GridDegree::from_dense(&(0..r).map(|_| rng.gen_range(0..=n)).collect::<Vec<_>>()))
        .collect();
    // a region well past the generators, so the bound is not forced by the box
    let region = PosetDescriptor::grid(&vec![n + 2; r as usize]);
    let v = monomial_ideal_module(&degrees, region.clone(), Field::default_prime())?;
    let rep = report(&v, 3, Some(&region))?;
    let mut rec = InstanceRecord::new(format!("seed {seed}"), Some(seed));
    rec.bound("n", n);
    for i in 0..=3 {
        let h = rep.hd(i, Norm::Sup);
        rec.bound(format!("hd_{i}"), h);
        rec.require(h <= i64::from(n), || format!("F_{i} has a generator of sup norm {h} > {n}"));
    }
    Ok(rec.with_document(|| doc(&v)))
}

// shift-sheafify

fn shift_checks(v: &Presentation, r: &mut InstanceRecord) -> Result<()> {
    let rep = report(v, 1, None)?;
    let (gd, pd) = (rep.gd(Norm::Sup), rep.pd(Norm::Sup));
    r.bound("gd", gd);
    r.bound("pd", pd);
    let top = bs_power(v, pd.max(0) as usize)?;
    let induced = is_induced_at(&top, &Degree::Grid(GridDegree::zero()), None)?;
    r.bound("bs^pd induced rank", induced.map_or(Value::Null, |k| json!(k)));
    r.require(induced.is_some(), || format!("bs^{pd} V is neither zero nor induced at 0"));

    let sheaf = sheafify_poset(v)?;
    let (torsion, _) = torsion_part(v, None)?;
    r.bound("sheafify rank", sheaf.rank);
    r.require((sheaf.rank == 0) == torsion.is_torsion, || {
        format!("sheafification rank {} but is_torsion = {}", sheaf.rank, torsion.is_torsion)
    });

    let w = bs(v)?;
    let gd_w = report(&w, 0, None)?.gd(Norm::Sup);
    r.bound("gd(bs V)", gd_w);
    if gd >= 1 {
        r.require(gd_w < gd, || format!("gd(bs V) = {gd_w} is not below gd = {gd}"));
    }
    let tht_w = torsion_heights(&w, None)?;
    for (i, t) in torsion_heights(v, None)? {
        let tw = tht_w.iter().find(|(d, _)| *d == i).map_or(-1, |(_, x)| *x);
        r.bound(format!("tht_{i}"), t);
        r.bound(format!("tht_{i}(bs V)"), tw);
        if t >= 0 {
            r.require(tw < t, || format!("tht_{i}(bs V) = {tw} is not below tht_{i} = {t}"));
        }
    }
    Ok(())
}

fn shift_sheafify(seed: u64) -> Result<InstanceRecord> {
    let (_, v) = grid_population(seed)?;
    let mut r = InstanceRecord::new(format!("seed {seed}"), Some(seed));
    shift_checks(&v, &mut r)?;
    Ok(r.with_document(|| doc(&v)))
}

// young-harmonic

fn harmonic_cap(h: i64) -> f64 {
    let h = h as f64;
    h * (h.ln() + 1.0)
}

fn young_harmonic(seed: u64) -> Result<InstanceRecord> {
    // degrees have size at most 8, but the module lives on the whole lattice
    let small = random_module(seed, &Profile::young(8))?;
    let j = small.degree_join().map_or(0, |d| d.as_young().map_or(0, Partition::sum));
    let wide = PosetDescriptor::Young(YoungBox::new(j + 2));
    let v = small.with_region(wide.clone())?;
    let base = report(&v, 3, None)?;
    let mut r = InstanceRecord::new(format!("seed {seed}"), Some(seed));
    for s in 0..=3 {
        r.bound(format!("hd_{s}"), base.hd(s, Norm::Sum));
    }
    for s in 2..=3 {
        let (prev, cur) = (base.hd(s - 1, Norm::Sum), base.hd(s, Norm::Sum));
        if prev > 0 {
            let cap = harmonic_cap(prev);
            r.require(cur as f64 <= cap, || format!("hd_{s} = {cur} exceeds hd_{}(ln hd_{} + 1) = {cap:.3}", s - 1, s - 1));
        }
    }
    // H_0 of each syzygy module must not move when the box grows by 2
    let widened = report(&v, 3, Some(&wide))?;
    r.bound("box", j);
    for s in 1..=3 {
        r.require(base.support(s) == widened.support(s), || format!("H_{s} changes when the box grows to size {}", j + 2));
    }
    Ok(r.with_document(|| doc(&v)))
}

/// The join of all partitions of `n` is `(⌊n/1⌋, ..., ⌊n/n⌋)`, of size at
/// most `n(ln n + 1)`.
fn harmonic_join(n: u32) -> InstanceRecord {
    let join = Partition::all_of(n).iter().fold(Partition::empty(), |a, b| a.join(b));
    let expect: Vec<u32> = (1..=n).map(|i| n / i).collect();
    let size = i64::from(join.sum());
    let mut r = InstanceRecord::new(format!("join of partitions of {n}"), None);
    r.bound("size", size);
    r.require(join.parts() == expect, || format!("join is {join}, expected parts n/i"));
    let cap = harmonic_cap(i64::from(n));
    r.require(size as f64 <= cap, || format!("size {size} exceeds n(ln n + 1) = {cap:.3}"));
    r
}

// orbit

const ORBIT_MODULUS: u64 = 12;

fn orbit_field() -> Field {
    Field::cyclotomic(ORBIT_MODULUS as u32).expect("12 is a valid order")
}

/// Checks that do not depend on a seed: free and torsion modules at every
/// object.
fn orbit_fixed() -> Vec<InstanceRecord> {
    let m = ORBIT_MODULUS;
    let f = orbit_field();
    let mut out = Vec::new();
    for n in divisors(m) {
        let mut r = InstanceRecord::new(format!("free at {n}"), None);
        let res = (|| -> Result<()> {
            let v = OrbitPresentation::free(m, f.clone(), vec![n])?;
            let g = restrict_to_grid(&v)?;
            let e = Degree::Grid(divisibility_encode(n)?);
            let mut bad = 0;
            for x in grid_region(m)?.degrees() {
                let want = if e.below(&x) { n as usize } else { 0 };
                if g.dim(&x)? != want {
                    bad += 1;
                }
            }
            r.bound("restriction dimension mismatches", bad);
            r.require(bad == 0, || format!("restriction of P({n}) has wrong dimensions at {bad} degrees"));
            let iso = isotypic_decompose(&v)?;
            let ones: Vec<u64> = (0..m).filter(|&t| iso.multiplicity(t) == 1).collect();
            r.bound("isotypic support", json!(ones));
            for t in 0..m {
                let want = usize::from((t * n) % m == 0);
                r.require(iso.multiplicity(t) == want, || format!("m at ζ^{t} is {}, expected {want}", iso.multiplicity(t)));
            }
            let total: usize = iso.multiplicities.iter().sum();
            r.require(total == v.evaluate(m)?.dim(), || format!("Σ m = {total} differs from dim V_{m}"));
            Ok(())
        })();
        if let Err(e) = res {
            r.violations.push(format!("computation failed: {e}"));
        }
        out.push(r);
    }
    for n in divisors(m) {
        for k in divisors(m).into_iter().filter(|&k| k % n == 0 && k != n) {
            let mut r = InstanceRecord::new(format!("torsion P({n}) killed at {k}"), None);
            match torsion_at(m, f.clone(), n, k).and_then(|v| sheafify_orbit(&v)) {
                Ok(s) => {
                    r.bound("summands", s.len());
                    r.require(s.is_empty(), || format!("sheafification has {} summands", s.len()));
                }
                Err(e) => r.violations.push(format!("computation failed: {e}")),
            }
            out.push(r);
        }
    }
    out
}

fn orbit_random(seed: u64) -> Result<InstanceRecord> {
    let v = random_orbit_module(seed, ORBIT_MODULUS, &orbit_field())?;
    let rep = orbit_report(&v, 1)?;
    let mut r = InstanceRecord::new(format!("seed {seed}"), Some(seed));
    for norm in Norm::ALL {
        let (gd, pd) = orbit_gd_pd(&v, norm)?;
        let n = norm.name();
        r.bound(format!("gd.{n}"), gd);
        r.bound(format!("pd.{n}"), pd);
        r.require(gd == rep.gd(norm) && pd == rep.pd(norm), || {
            format!("{n}: orbit side (gd, pd) = ({gd}, {pd}), restriction ({}, {})", rep.gd(norm), rep.pd(norm))
        });
    }
    let iso = isotypic_decompose(&v)?;
    let total: usize = iso.multiplicities.iter().sum();
    let top = v.evaluate(ORBIT_MODULUS)?.dim();
    r.bound("Σ m", total);
    r.require(total == top, || format!("Σ m = {total} differs from dim V_top = {top}"));
    Ok(r.with_document(|| v.to_json()))
}

// oracle-equivalence

fn oracle_equivalence(seed: u64) -> Result<InstanceRecord> {
    let field = match (seed / 2) % 3 {
        0 => FieldSpec::Rational,
        1 => FieldSpec::Prime(DEFAULT_PRIME),
        _ => FieldSpec::Cyclotomic(3),
    };
    let profile = if seed.is_multiple_of(2) {
        Profile::grid(1 + ((seed / 6) % 3) as u32, 3)
    } else {
        Profile::young(6)
    }
    .with_field(field);
    let v = random_module(seed, &profile)?;
    let region = v.poset().clone();
    let engine = resolution(&v, 3, Some(&region))?;
    let oracle = oracle_homology_upto(&Evaluator::new(&v), &region, 3)?;
    let mut r = InstanceRecord::new(format!("seed {seed}"), Some(seed));
    r.bound("field", field.to_string());
    r.bound("degrees", region.degrees().len());
    for (i, o) in oracle.iter().enumerate() {
        let total: usize = o.iter().map(|(_, m)| m).sum();
        r.bound(format!("|H_{i}|"), total);
        r.require(engine.support(i) == *o, || format!("H_{i}: engine {:?}, oracle {o:?}", engine.support(i)));
    }
    Ok(r.with_document(|| doc(&v)))
}

// field-independence

fn same_supports(a: &HomologyReport, b: &HomologyReport) -> bool {
    a.groups == b.groups
}

/// Homology over `F_p` against homology over `Q`. A mismatch is a warning
/// (characteristic `p` may genuinely differ); the rational computation is
/// then repeated and must reproduce itself.
fn compare_fields(v: &Presentation, r: &mut InstanceRecord, warnings: &mut Vec<String>) -> Result<()> {
    let q = report(&v.over_field(&Field::rational())?, 2, None)?;
    let p = report(&v.over_field(&Field::default_prime())?, 2, None)?;
    let agree = same_supports(&q, &p);
    r.bound("agree", agree);
    if !agree {
        let w = format!("F_{DEFAULT_PRIME} and Q disagree; rational result kept");
        r.bound("warning", w.clone());
        warnings.push(format!("{}: {w}", r.label));
        let again = report(&v.over_field(&Field::rational())?, 2, None)?;
        r.require(same_supports(&q, &again), || "rational re-run is not reproducible".into());
    }
    Ok(())
}

fn field_independence(seed: u64, warnings: &mut Vec<String>) -> Result<InstanceRecord> {
    let profile = Profile::grid(1 + (seed % 3) as u32, 3).with_field(FieldSpec::Rational);
    let v = random_module(seed, &profile)?;
    let mut r = InstanceRecord::new(format!("seed {seed}"), Some(seed));
    compare_fields(&v, &mut r, warnings)?;
    Ok(r.with_document(|| doc(&v)))
}

fn field_independence_entry(e: &RegistryEntry, warnings: &mut Vec<String>) -> InstanceRecord {
    let v = e.module.as_poset().expect("poset entry");
    let mut r = InstanceRecord::new(e.label(), None);
    let res = (|| -> Result<()> {
        compare_fields(v, &mut r, warnings)?;
        let modp = RegistryModule::Poset(v.over_field(&Field::default_prime())?);
        for c in e.check_module(&modp)? {
            r.require(c.passed, || format!("over F_p: {} (observed {})", c.description, c.observed));
        }
        Ok(())
    })();
    if let Err(err) = res {
        r.violations.push(format!("computation failed: {err}"));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        assert!(matches!(verify("nope", 0, 1), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn outcomes_are_reproducible() {
        for suite in ["sup-hd-vs-pd", "young-harmonic", "orbit"] {
            let a = verify(suite, 3, 4).unwrap();
            let b = verify(suite, 3, 4).unwrap();
            assert_eq!(a.to_json(), b.to_json(), "{suite}");
        }
    }

    #[test]
    fn every_suite_runs_clean_on_a_few_seeds() {
        for suite in SUITES {
            let out = verify(suite, 11, 3).unwrap();
            assert!(out.passed(), "{suite}: {}", serde_json::to_string_pretty(&out.to_json()).unwrap());
            assert!(!out.instances.is_empty());
        }
    }

    #[test]
    fn a_violated_bound_is_reported_with_its_document() {
        let v = random_module(0, &Profile::grid(2, 3)).unwrap();
        let mut r = InstanceRecord::new("forced", Some(0));
        r.require(false, || "forced".into());
        let r = r.with_document(|| doc(&v));
        assert!(!r.passed());
        assert_eq!(Presentation::from_json(&r.document.unwrap().to_string()).unwrap(), v.canonical());
    }

    #[test]
    fn harmonic_joins() {
        for n in 1..=12 {
            assert!(harmonic_join(n).passed());
        }
        // 4 + 2 + 1 + 1 for n = 4
        assert_eq!(harmonic_join(4).bounds["size"], json!(8));
    }
}
