//! Seeded random modules. The same seed and profile always produce the same
//! document.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::field::{Field, FieldSpec, Scalar};
use crate::fpmod::Presentation;
use crate::orbit::{OrbitPresentation, OrbitRelation};
use crate::poset::{Degree, GridDegree, Partition, PosetDescriptor};

/// Shape of a random module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub kind: ProfileKind,
    pub field: FieldSpec,
    /// Inclusive ranges for the number of generators and relations.
    pub generators: (usize, usize),
    pub relations: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProfileKind {
    /// Directions `1..=directions`, each exponent at most `max_exponent`.
    Grid { directions: u32, max_exponent: u32 },
    /// Partitions of size at most `max_sum`.
    Young { max_sum: u32 },
}

impl Profile {
    pub fn grid(directions: u32, max_exponent: u32) -> Profile {
        Profile {
            kind: ProfileKind::Grid {
                directions,
                max_exponent,
            },
            field: FieldSpec::Prime(crate::field::DEFAULT_PRIME),
            generators: (1, 4),
            relations: (1, 5),
        }
    }

    pub fn young(max_sum: u32) -> Profile {
        Profile {
            kind: ProfileKind::Young { max_sum },
            field: FieldSpec::Prime(crate::field::DEFAULT_PRIME),
            generators: (1, 4),
            relations: (1, 5),
        }
    }

    pub fn with_field(mut self, field: FieldSpec) -> Profile {
        self.field = field;
        self
    }

    pub fn with_counts(mut self, generators: (usize, usize), relations: (usize, usize)) -> Profile {
        self.generators = generators;
        self.relations = relations;
        self
    }

    pub fn region(&self) -> PosetDescriptor {
        match self.kind {
            ProfileKind::Grid {
                directions,
                max_exponent,
            } => PosetDescriptor::grid(&vec![max_exponent; directions as usize]),
            ProfileKind::Young { max_sum } => PosetDescriptor::young(max_sum),
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A nonzero integer in `-3..=3`.
pub fn small_scalar(field: &Field, rng: &mut impl Rng) -> Scalar {
    let mut v = 0;
    while v == 0 {
        v = rng.gen_range(-3i64..=3);
    }
    field.from_i64(v)
}

pub fn random_degree(kind: &ProfileKind, rng: &mut impl Rng) -> Degree {
    match *kind {
        ProfileKind::Grid {
            directions,
            max_exponent,
        } => {
            let dense: Vec<u32> = (0..directions).map(|_| rng.gen_range(0..=max_exponent)).collect();
            Degree::Grid(GridDegree::from_dense(&dense))
        }
        ProfileKind::Young { max_sum } => {
            let total = rng.gen_range(0..=max_sum);
            Degree::Young(random_partition(total, rng))
        }
    }
}

fn random_partition(n: u32, rng: &mut impl Rng) -> Partition {
    // peel off parts no larger than the previous one
    let mut parts = Vec::new();
    let mut rest = n;
    let mut cap = n;
    while rest > 0 {
        let p = rng.gen_range(1..=rest.min(cap));
        parts.push(p);
        rest -= p;
        cap = p;
    }
    Partition::new(&parts).expect("parts are weakly decreasing")
}

/// A random degree above `d` inside the profile's region.
pub fn random_degree_above(kind: &ProfileKind, d: &Degree, rng: &mut impl Rng) -> Degree {
    match (kind, d) {
        (
            ProfileKind::Grid {
                directions,
                max_exponent,
            },
            Degree::Grid(g),
        ) => {
            let mut dense: Vec<u32> = (1..=*directions)
                .map(|i| {
                    let lo = g.get(i);
                    lo + rng.gen_range(0..=2u32.min(max_exponent - lo))
                })
                .collect();
            // keep relations strictly above their anchor when the box allows it
            let open: Vec<usize> = (0..dense.len()).filter(|&i| dense[i] < *max_exponent).collect();
            if GridDegree::from_dense(&dense) == *g {
                if let Some(&i) = open.choose(rng) {
                    dense[i] += 1;
                }
            }
            Degree::Grid(GridDegree::from_dense(&dense))
        }
        (ProfileKind::Young { max_sum }, Degree::Young(p)) => {
            let mut parts = p.parts().to_vec();
            let room = max_sum - p.sum();
            let extra = if room == 0 { 0 } else { rng.gen_range(1..=room.min(3)) };
            for _ in 0..extra {
                // add a box at a random addable corner
                let addable: Vec<usize> = (0..=parts.len()).filter(|&j| j == 0 || parts[j - 1] > *parts.get(j).unwrap_or(&0)).collect();
                let j = *addable.choose(rng).expect("the first row is always addable");
                if j == parts.len() {
                    parts.push(1);
                } else {
                    parts[j] += 1;
                }
            }
            Degree::Young(Partition::new(&parts).expect("adding corners keeps a partition"))
        }
        _ => unreachable!("profile and degree kinds agree"),
    }
}

/// A random module for `profile`, determined by `seed`.
pub fn random_module(seed: u64, profile: &Profile) -> Result<Presentation> {
    let mut rng = rng(seed);
    let field = Field::from_spec(profile.field)?;
    let ngens = rng.gen_range(profile.generators.0..=profile.generators.1);
    let nrels = rng.gen_range(profile.relations.0..=profile.relations.1);
    let generators: Vec<Degree> = (0..ngens).map(|_| random_degree(&profile.kind, &mut rng)).collect();
    let mut relations = Vec::with_capacity(nrels);
    if !generators.is_empty() {
        for _ in 0..nrels {
            let anchor = rng.gen_range(0..generators.len());
            let degree = random_degree_above(&profile.kind, &generators[anchor], &mut rng);
            let mut entries = vec![(anchor, small_scalar(&field, &mut rng))];
            for (g, gd) in generators.iter().enumerate() {
                if g != anchor && gd.below(&degree) && rng.gen_bool(0.5) {
                    entries.push((g, small_scalar(&field, &mut rng)));
                }
            }
            relations.push((degree, entries));
        }
    }
    Presentation::new(profile.region(), field, generators, relations)
}

/// A random orbit module truncated at `modulus`: one to three generators at
/// divisors of the modulus and up to three relations at multiples of them.
pub fn random_orbit_module(seed: u64, modulus: u64, field: &Field) -> Result<OrbitPresentation> {
    let mut rng = rng(seed);
    let objects = crate::poset::divisors(modulus);
    let ngens = rng.gen_range(1..=3);
    let generators: Vec<u64> = (0..ngens).map(|_| *objects.choose(&mut rng).expect("1 divides")).collect();
    let nrels = rng.gen_range(0..=3);
    let mut relations = Vec::with_capacity(nrels);
    for _ in 0..nrels {
        let anchor = rng.gen_range(0..ngens);
        let n = generators[anchor];
        let above: Vec<u64> = objects.iter().copied().filter(|d| d % n == 0).collect();
        let object = *above.choose(&mut rng).expect("n divides the modulus");
        let mut entries = Vec::new();
        for (g, &m) in generators.iter().enumerate() {
            if !object.is_multiple_of(m) || (g != anchor && rng.gen_bool(0.5)) {
                continue;
            }
            let mut v: Vec<Scalar> = (0..m).map(|_| field.from_i64(rng.gen_range(-2i64..=2))).collect();
            if v.iter().all(|s| field.is_zero(s)) {
                v[rng.gen_range(0..m as usize)] = small_scalar(field, &mut rng);
            }
            entries.push((g, v));
        }
        relations.push(OrbitRelation { object, entries });
    }
    OrbitPresentation::new(modulus, field.clone(), generators, relations)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let p = Profile::grid(3, 3);
        for seed in 0..20 {
            assert_eq!(random_module(seed, &p).unwrap(), random_module(seed, &p).unwrap());
        }
        let y = Profile::young(6);
        assert_eq!(random_module(5, &y).unwrap().to_json(), random_module(5, &y).unwrap().to_json());
    }

    #[test]
    fn no_relations_means_free() {
        let p = Profile::grid(2, 3).with_counts((1, 4), (0, 0));
        for seed in 0..10 {
            let v = random_module(seed, &p).unwrap();
            assert!(v.relations().is_empty());
            assert_eq!(crate::homology::hd(&v, 1, crate::poset::Norm::Sup, None).unwrap(), -1);
        }
    }
}
