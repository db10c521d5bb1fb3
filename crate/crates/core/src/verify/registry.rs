//! Worked examples with their expected facts.
//!
//! Each entry builds a module from a short parameter string and carries a
//! list of facts, each one a machine-checkable assertion tagged with where
//! the expected value comes from.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::fpmod::document::degree_to_json;
use crate::fpmod::{submodule_presentation, Element, FreeModule, Presentation};
use crate::homology::{h0, minimal_cover, report, Support};
use crate::orbit::{isotypic_decompose, l_xi, OrbitPresentation};
use crate::poset::{divisors, nth_prime, Degree, GridBox, GridDegree, Norm, Partition, PosetDescriptor};

pub const NAMES: &[&str] = &[
    "counterexample",
    "monomial-ideal",
    "young-simple",
    "grid-simple",
    "orbit-free",
    "orbit-Lxi",
];

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactOrigin {
    /// A number printed in the literature.
    Published,
    /// Immediate from the definitions.
    ByInspection,
    /// Obtained by a separate computation (and cross-checked in tests).
    Computed,
}

impl FactOrigin {
    pub fn name(self) -> &'static str {
        match self {
            FactOrigin::Published => "published",
            FactOrigin::ByInspection => "by-inspection",
            FactOrigin::Computed => "computed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Assertion {
    /// `dim (H_0 K)_x` for the kernel `K` of the minimal cover of `V`.
    KernelH0 { degree: Degree, multiplicity: usize },
    /// `H_i(V)` is exactly this support.
    Homology { i: usize, support: Support },
    /// Every generator degree of `F_0 .. F_length` has sup norm at most `bound`.
    ResolutionSupNorm { length: usize, bound: u32 },
    /// `dim V_m` at every object, objects ascending.
    OrbitDims(Vec<(u64, usize)>),
    /// `m_ξ` for `ξ = ζ_M^t`, indexed by `t`.
    Isotypic(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fact {
    pub description: String,
    pub origin: FactOrigin,
    pub assertion: Assertion,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactCheck {
    pub description: String,
    pub origin: FactOrigin,
    pub passed: bool,
    pub observed: Value,
}

impl FactCheck {
    pub fn to_json(&self) -> Value {
        json!({
            "description": self.description,
            "origin": self.origin.name(),
            "passed": self.passed,
            "observed": self.observed,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RegistryModule {
    Poset(Presentation),
    Orbit(OrbitPresentation),
}

impl RegistryModule {
    pub fn to_json(&self) -> Value {
        match self {
            RegistryModule::Poset(v) => serde_json::from_str(&v.to_json()).expect("documents are JSON"),
            RegistryModule::Orbit(v) => v.to_json(),
        }
    }

    pub fn as_poset(&self) -> Option<&Presentation> {
        match self {
            RegistryModule::Poset(v) => Some(v),
            RegistryModule::Orbit(_) => None,
        }
    }

    pub fn as_orbit(&self) -> Option<&OrbitPresentation> {
        match self {
            RegistryModule::Orbit(v) => Some(v),
            RegistryModule::Poset(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegistryEntry {
    pub name: String,
    pub parameters: String,
    pub module: RegistryModule,
    pub facts: Vec<Fact>,
}

impl RegistryEntry {
    /// `name(parameters)`.
    pub fn label(&self) -> String {
        format!("{}({})", self.name, self.parameters)
    }

    /// Evaluates every fact against the entry's own module.
    pub fn check(&self) -> Result<Vec<FactCheck>> {
        self.check_module(&self.module)
    }

    /// Evaluates every fact against `module` (for instance the entry's
    /// module moved to another field).
    pub fn check_module(&self, module: &RegistryModule) -> Result<Vec<FactCheck>> {
        self.facts.iter().map(|f| check_fact(f, module)).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "parameters": self.parameters,
            "module": self.module.to_json(),
            "expectedFacts": self.facts.iter().map(|f| json!({
                "description": f.description,
                "origin": f.origin.name(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn support_json(s: &[(Degree, usize)]) -> Value {
    json!(s.iter().map(|(d, m)| json!({"degree": degree_to_json(d), "multiplicity": m})).collect::<Vec<_>>())
}

fn check_fact(fact: &Fact, module: &RegistryModule) -> Result<FactCheck> {
    let mismatch = || Error::InvalidParameters(format!("fact `{}` does not apply to this module", fact.description));
    let (passed, observed) = match &fact.assertion {
        Assertion::KernelH0 { degree, multiplicity } => {
            let v = module.as_poset().ok_or_else(mismatch)?;
            let k = minimal_cover(v, None)?.kernel;
            let got = h0(&k, None)?.into_iter().find(|(d, _)| d == degree).map_or(0, |(_, m)| m);
            (got == *multiplicity, json!(got))
        }
        Assertion::Homology { i, support } => {
            let v = module.as_poset().ok_or_else(mismatch)?;
            let r = report(v, *i, None)?;
            (r.support(*i) == support.as_slice(), support_json(r.support(*i)))
        }
        Assertion::ResolutionSupNorm { length, bound } => {
            let v = module.as_poset().ok_or_else(mismatch)?;
            let r = report(v, *length, None)?;
            let worst = (0..=*length).map(|i| r.hd(i, Norm::Sup)).max().unwrap_or(-1);
            (worst <= i64::from(*bound), json!(worst))
        }
        Assertion::OrbitDims(expected) => {
            let v = module.as_orbit().ok_or_else(mismatch)?;
            let mut got = v.objects().into_iter().map(|m| Ok((m, v.evaluate(m)?.dim()))).collect::<Result<Vec<_>>>()?;
            got.sort_unstable();
            (got == *expected, json!(got))
        }
        Assertion::Isotypic(expected) => {
            let v = module.as_orbit().ok_or_else(mismatch)?;
            let got = isotypic_decompose(v)?.multiplicities;
            (got == *expected, json!(got))
        }
    };
    Ok(FactCheck {
        description: fact.description.clone(),
        origin: fact.origin,
        passed,
        observed,
    })
}

/// Builds the entry `name` from its parameter string.
pub fn registry(name: &str, params: &str) -> Result<RegistryEntry> {
    let params = params.trim();
    let (module, facts) = match name {
        "counterexample" => counterexample(params)?,
        "monomial-ideal" => monomial_ideal(params)?,
        "young-simple" => young_simple(params)?,
        "grid-simple" => grid_simple(params)?,
        "orbit-free" => orbit_free(params)?,
        "orbit-Lxi" => orbit_lxi(params)?,
        other => return Err(Error::UnknownRegistry(other.to_string())),
    };
    Ok(RegistryEntry {
        name: name.to_string(),
        parameters: params.to_string(),
        module,
        facts,
    })
}

/// The entries every build checks.
pub fn standard_entries() -> Vec<RegistryEntry> {
    let specs = [
        ("counterexample", "7,10"),
        ("counterexample", "53,30"),
        ("monomial-ideal", "1,1,0;0,1,1;1,0,1"),
        ("monomial-ideal", "2,0;1,1;0,2"),
        ("grid-simple", "1"),
        ("grid-simple", "2"),
        ("grid-simple", "3"),
        ("young-simple", ""),
        ("young-simple", "2,1"),
        ("young-simple", "3,1,1"),
        ("orbit-free", "1,12"),
        ("orbit-free", "4,12"),
        ("orbit-free", "6,12"),
        ("orbit-Lxi", "4,3,12"),
        ("orbit-Lxi", "6,10,12"),
    ];
    specs.iter().map(|(n, p)| registry(n, p).expect("standard entries are valid")).collect()
}

fn bad(message: impl Into<String>) -> Error {
    Error::InvalidParameters(message.into())
}

fn integers<T: std::str::FromStr>(text: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|_| bad(format!("`{t}` is not a nonnegative integer"))))
        .collect()
}

fn exactly<const N: usize, T: std::str::FromStr + Copy>(text: &str, what: &str) -> Result<[T; N]> {
    let v = integers::<T>(text)?;
    v.try_into().map_err(|_| bad(format!("expected {what}")))
}

// counterexample(D, R)

/// Degrees whose kernel homology is the witness for `s`: `x = o_a + o_b + ...`
/// with sum norm `p_s + 1`, and the basis index the witness needs.
const WITNESSES: &[(&[u32], u32)] = &[(&[2, 3, 7], 4), (&[4, 5, 17, 53], 27)];

/// Generator of `V` at `o_s`, as 1-based basis indices of `P(0)^R`.
fn counterexample_indices(s: u32, rank: u32) -> Vec<u32> {
    if s % 2 == 1 {
        return vec![s.div_ceil(2)].into_iter().filter(|&b| b <= rank).collect();
    }
    let i = s / 2;
    let p = nth_prime(i);
    let mut out = Vec::new();
    let mut q = 1u64;
    for _ in 0..=i {
        q = q.saturating_mul(p);
        if q > u64::from(rank) {
            break;
        }
        out.push(q as u32);
    }
    out
}

fn counterexample(params: &str) -> Result<(RegistryModule, Vec<Fact>)> {
    let (head, dirs) = match params.split_once(';') {
        Some((h, rest)) => {
            let d = rest.trim().strip_prefix("dirs=").ok_or_else(|| bad("expected `D,R` or `D,R;dirs=...`"))?;
            (h, Some(integers::<u32>(d)?))
        }
        None => (params, None),
    };
    let [d, r] = exactly::<2, u32>(head, "`maxDirection,ambientRank`")?;
    if d == 0 || r == 0 {
        return Err(bad("maxDirection and ambientRank must be positive"));
    }
    let applicable: Vec<&(&[u32], u32)> = WITNESSES.iter().filter(|(x, _)| x.iter().all(|&s| s <= d)).collect();
    // the whole box 1..=D is affordable for small D; otherwise only the
    // directions the witnesses use
    let dirs: Vec<u32> = match dirs {
        Some(mut v) => {
            v.sort_unstable();
            v.dedup();
            if v.iter().any(|&s| s == 0 || s > d) {
                return Err(bad(format!("directions must lie in 1..={d}")));
            }
            v
        }
        None if d <= 8 => (1..=d).collect(),
        None => {
            let mut v: Vec<u32> = applicable.iter().flat_map(|(x, _)| x.iter().copied()).collect();
            v.sort_unstable();
            v.dedup();
            v
        }
    };
    let mut facts = Vec::new();
    for (x, need) in &applicable {
        if !x.iter().all(|s| dirs.contains(s)) {
            continue;
        }
        if r < *need {
            return Err(bad(format!(
                "ambientRank {r} is too small: the witness at {} uses basis index {need}",
                x.iter().map(|s| format!("o_{s}")).collect::<Vec<_>>().join("+")
            )));
        }
        let degree = Degree::Grid(GridDegree::from_pairs(&x.iter().map(|&s| (s, 1)).collect::<Vec<_>>())?);
        facts.push(Fact {
            description: format!("dim (H_0 K)_{degree} = 1 for the kernel K of the minimal cover"),
            origin: FactOrigin::Published,
            assertion: Assertion::KernelH0 { degree, multiplicity: 1 },
        });
    }
    let mut caps = vec![0; *dirs.last().unwrap_or(&0) as usize];
    for &s in &dirs {
        caps[s as usize - 1] = 1;
    }
    let region = PosetDescriptor::Grid(GridBox::new(caps).with_max_sum(4));
    let field = Field::rational();
    let free = FreeModule::new(region, field.clone(), vec![Degree::grid(&[]); r as usize])?;
    let elements: Vec<Element> = dirs
        .iter()
        .map(|&s| {
            let coefficients = counterexample_indices(s, r).into_iter().map(|b| (b as usize - 1, field.one())).collect();
            Element::new(Degree::Grid(GridDegree::unit(s)), coefficients)
        })
        .filter(|e| !e.coefficients.is_empty())
        .collect();
    let v = submodule_presentation(&free, &elements)?;
    Ok((RegistryModule::Poset(v), facts))
}

// monomial-ideal(a;b;...)

fn monomial_ideal(params: &str) -> Result<(RegistryModule, Vec<Fact>)> {
    let vectors: Vec<Vec<u32>> = params.split(';').map(integers::<u32>).collect::<Result<_>>()?;
    if vectors.is_empty() || vectors.iter().all(Vec::is_empty) {
        return Err(bad("monomial-ideal needs at least one exponent vector"));
    }
    let degrees: Vec<GridDegree> = vectors.iter().map(|v| GridDegree::from_dense(v)).collect();
    let join = degrees.iter().fold(GridDegree::zero(), |a, b| a.join(b));
    let n = join.sup();
    let v = monomial_ideal_module(&degrees, PosetDescriptor::Grid(GridBox::below(&join)), Field::rational())?;
    let mut facts = vec![Fact {
        description: format!("every generator degree of F_0 .. F_3 has sup norm at most {n}"),
        origin: FactOrigin::Published,
        assertion: Assertion::ResolutionSupNorm { length: 3, bound: n },
    }];
    if vectors == [vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]] {
        facts.push(Fact {
            description: "H_1 is two copies of k at (1,1,1)".into(),
            origin: FactOrigin::Computed,
            assertion: Assertion::Homology {
                i: 1,
                support: vec![(Degree::grid(&[1, 1, 1]), 2)],
            },
        });
        facts.push(Fact {
            description: "H_2 vanishes".into(),
            origin: FactOrigin::Computed,
            assertion: Assertion::Homology { i: 2, support: vec![] },
        });
    }
    Ok((RegistryModule::Poset(v), facts))
}

/// The submodule of `P(0)` generated by the monomials `X^a`, `a ∈ degrees`.
pub fn monomial_ideal_module(degrees: &[GridDegree], region: PosetDescriptor, field: Field) -> Result<Presentation> {
    let free = FreeModule::new(region, field.clone(), vec![Degree::grid(&[])])?;
    let elements: Vec<Element> = degrees.iter().map(|d| Element::new(Degree::Grid(d.clone()), vec![(0, field.one())])).collect();
    submodule_presentation(&free, &elements)
}

// young-simple(λ)

fn young_simple(params: &str) -> Result<(RegistryModule, Vec<Fact>)> {
    let lambda = Partition::new(&integers::<u32>(params)?)?;
    let covers = young_covers(&lambda);
    let join = covers.iter().fold(lambda.clone(), |a, b| a.join(b));
    let field = Field::rational();
    let base = Degree::Young(lambda.clone());
    let relations = covers.iter().map(|c| (Degree::Young(c.clone()), vec![(0, field.one())])).collect();
    let v = Presentation::new(PosetDescriptor::young(join.sum()), field, vec![base.clone()], relations)?;
    let facts = vec![
        Fact {
            description: format!("H_0 is k at {lambda}"),
            origin: FactOrigin::ByInspection,
            assertion: Assertion::Homology {
                i: 0,
                support: vec![(base, 1)],
            },
        },
        Fact {
            description: format!("H_1 is k at each of the {} partitions covering {lambda}", covers.len()),
            origin: FactOrigin::ByInspection,
            assertion: Assertion::Homology {
                i: 1,
                support: covers.into_iter().map(|c| (Degree::Young(c), 1)).collect(),
            },
        },
    ];
    Ok((RegistryModule::Poset(v), facts))
}

/// Partitions obtained from `p` by adding one box, in canonical order.
pub fn young_covers(p: &Partition) -> Vec<Partition> {
    let parts = p.parts();
    let mut out: Vec<Partition> = (0..=parts.len())
        .filter(|&j| j == 0 || parts[j - 1] > parts.get(j).copied().unwrap_or(0))
        .map(|j| {
            let mut q = parts.to_vec();
            if j == q.len() {
                q.push(1);
            } else {
                q[j] += 1;
            }
            Partition::new(&q).expect("adding an addable box")
        })
        .collect();
    out.sort();
    out
}

// grid-simple(r)

fn grid_simple(params: &str) -> Result<(RegistryModule, Vec<Fact>)> {
    let [r] = exactly::<1, u32>(params, "the number of directions")?;
    if r == 0 || r > 8 {
        return Err(bad("grid-simple takes 1 to 8 directions"));
    }
    let field = Field::rational();
    let relations = (1..=r).map(|i| (Degree::Grid(GridDegree::unit(i)), vec![(0, field.one())])).collect();
    let v = Presentation::new(PosetDescriptor::grid(&vec![1; r as usize]), field, vec![Degree::grid(&[])], relations)?;
    let facts = (0..=r as usize + 1)
        .map(|i| Fact {
            description: format!("H_{i} is k at each 0/1 vector with {i} ones"),
            origin: FactOrigin::Computed,
            assertion: Assertion::Homology { i, support: koszul_support(r, i) },
        })
        .collect();
    Ok((RegistryModule::Poset(v), facts))
}

/// `H_i` of the simple module at `0` in `r` directions, from the Koszul
/// complex: one copy of `k` at every 0/1 vector with `i` ones.
pub fn koszul_support(r: u32, i: usize) -> Support {
    let mut out: Support = (0u32..1 << r)
        .filter(|m| m.count_ones() as usize == i)
        .map(|m| {
            let dense: Vec<u32> = (0..r).map(|b| (m >> b) & 1).collect();
            (Degree::Grid(GridDegree::from_dense(&dense)), 1)
        })
        .collect();
    out.sort();
    out
}

// orbit-free(n, M), orbit-Lxi(n, t, M)

fn cyclotomic(modulus: u64) -> Result<Field> {
    Field::cyclotomic(u32::try_from(modulus).map_err(|_| bad("modulus too large"))?)
}

fn orbit_free(params: &str) -> Result<(RegistryModule, Vec<Fact>)> {
    let [n, m] = exactly::<2, u64>(params, "`n,M`")?;
    if n == 0 || m == 0 || m % n != 0 {
        return Err(bad(format!("{n} must divide {m}")));
    }
    let v = OrbitPresentation::free(m, cyclotomic(m)?, vec![n])?;
    let dims = divisors(m).into_iter().map(|k| (k, if k % n == 0 { n as usize } else { 0 })).collect();
    let iso = (0..m).map(|t| usize::from((t * n) % m == 0)).collect();
    let facts = vec![
        Fact {
            description: format!("P({n}) is k^{n} at multiples of {n} and zero elsewhere"),
            origin: FactOrigin::ByInspection,
            assertion: Assertion::OrbitDims(dims),
        },
        Fact {
            description: format!("m_ξ = 1 exactly when ξ^{n} = 1"),
            origin: FactOrigin::Published,
            assertion: Assertion::Isotypic(iso),
        },
    ];
    Ok((RegistryModule::Orbit(v), facts))
}

fn orbit_lxi(params: &str) -> Result<(RegistryModule, Vec<Fact>)> {
    let [n, t, m] = exactly::<3, u64>(params, "`n,t,M`")?;
    if n == 0 || m == 0 || m % n != 0 {
        return Err(bad(format!("{n} must divide {m}")));
    }
    let v = l_xi(m, n, t)?;
    let dims = divisors(m).into_iter().map(|k| (k, usize::from(k % n == 0))).collect();
    let iso = (0..m).map(|s| usize::from(s == t % m)).collect();
    let facts = vec![
        Fact {
            description: format!("k at multiples of {n} and zero elsewhere"),
            origin: FactOrigin::ByInspection,
            assertion: Assertion::OrbitDims(dims),
        },
        Fact {
            description: format!("the only nonzero multiplicity is m = 1 at ζ_{m}^{t}"),
            origin: FactOrigin::ByInspection,
            assertion: Assertion::Isotypic(iso),
        },
    ];
    Ok((RegistryModule::Orbit(v), facts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpmod::Evaluator;
    use crate::verify::oracle::oracle_homology_upto;

    #[test]
    fn counterexample_generators() {
        assert_eq!(counterexample_indices(1, 10), vec![1]);
        assert_eq!(counterexample_indices(2, 10), vec![2, 4]);
        assert_eq!(counterexample_indices(3, 10), vec![2]);
        assert_eq!(counterexample_indices(4, 30), vec![3, 9, 27]);
        assert_eq!(counterexample_indices(4, 10), vec![3, 9]);
        assert_eq!(counterexample_indices(6, 10), vec![5]);
        assert_eq!(counterexample_indices(17, 30), vec![9]);
        assert_eq!(counterexample_indices(53, 30), vec![27]);
    }

    #[test]
    fn standard_facts_hold() {
        for e in standard_entries() {
            let checks = e.check().unwrap();
            assert!(!checks.is_empty(), "{} has no facts", e.label());
            for c in checks {
                assert!(c.passed, "{}: {} (observed {})", e.label(), c.description, c.observed);
            }
        }
    }

    #[test]
    fn witness_sum_norms() {
        // p_s + 1 for s = 1, 2
        for ((x, _), s) in WITNESSES.iter().zip(1..) {
            assert_eq!(x.len() as u64, nth_prime(s) + 1);
        }
    }

    #[test]
    fn computed_facts_agree_with_the_bar_complex() {
        for (name, params) in [("grid-simple", "2"), ("grid-simple", "3"), ("monomial-ideal", "1,1,0;0,1,1;1,0,1")] {
            let e = registry(name, params).unwrap();
            let v = e.module.as_poset().unwrap();
            let oracle = oracle_homology_upto(&Evaluator::new(v), v.poset(), 4).unwrap();
            for f in &e.facts {
                if let Assertion::Homology { i, support } = &f.assertion {
                    assert_eq!(&oracle[*i], support, "{} H_{i}", e.label());
                }
            }
        }
    }

    #[test]
    fn koszul_counts_are_binomial() {
        for r in 1..=5u32 {
            for i in 0..=r as usize {
                let c = (0..i as u64).fold(1u64, |acc, k| acc * (u64::from(r) - k) / (k + 1));
                assert_eq!(koszul_support(r, i).len() as u64, c);
            }
        }
    }

    #[test]
    fn young_covers_of_small_partitions() {
        let p = |v: &[u32]| Partition::new(v).unwrap();
        assert_eq!(young_covers(&p(&[])), vec![p(&[1])]);
        assert_eq!(young_covers(&p(&[2, 1])).len(), 3);
        assert_eq!(young_covers(&p(&[2, 2])), vec![p(&[2, 2, 1]), p(&[3, 2])]);
    }

    #[test]
    fn counterexample_needs_enough_ambient_rank() {
        assert!(matches!(registry("counterexample", "53,20"), Err(Error::InvalidParameters(_))));
        assert!(matches!(registry("counterexample", "7,3"), Err(Error::InvalidParameters(_))));
        assert!(registry("counterexample", "3,2").unwrap().facts.is_empty());
    }

    #[test]
    fn witness_is_missing_without_its_last_direction() {
        // dropping o_7 removes the relation among b_2, b_4
        let e = registry("counterexample", "7,10;dirs=2,3").unwrap();
        let k = minimal_cover(e.module.as_poset().unwrap(), None).unwrap().kernel;
        assert!(h0(&k, None).unwrap().iter().all(|(d, _)| d != &Degree::grid(&[0, 1, 1])));
    }

    #[test]
    fn unknown_names_and_bad_parameters() {
        assert!(matches!(registry("nope", ""), Err(Error::UnknownRegistry(_))));
        assert!(registry("orbit-free", "5,12").is_err());
        assert!(registry("grid-simple", "x").is_err());
        assert!(registry("orbit-Lxi", "4,1,12").is_err());
    }
}
