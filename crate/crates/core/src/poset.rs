//! Degrees of the three grading posets and the truncation regions used to
//! make computations finite.
//!
//! * grid degrees are finitely supported exponent vectors `x = (x_1, x_2, ...)`
//!   ordered entrywise, stored sparsely so that high direction indices are free;
//! * Young degrees are partitions ordered by containment of diagrams;
//! * orbit degrees are positive integers ordered by divisibility.
//!
//! Canonical order everywhere is graded-lexicographic: first the sum norm,
//! then the dense entry sequence compared lexicographically.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A finitely supported vector of natural numbers, `(direction, exponent)`
/// pairs with strictly increasing directions (1-based) and exponents `>= 1`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GridDegree(Vec<(u32, u32)>);

impl GridDegree {
    pub fn zero() -> Self {
        GridDegree(Vec::new())
    }

    /// The unit vector `o_i`.
    pub fn unit(direction: u32) -> Self {
        assert!(direction >= 1, "directions are 1-based");
        GridDegree(vec![(direction, 1)])
    }

    /// Builds a degree from `(direction, exponent)` pairs in any order; zero
    /// exponents are dropped, repeated directions are rejected.
    pub fn from_pairs(pairs: &[(u32, u32)]) -> Result<Self> {
        let mut entries: Vec<(u32, u32)> = pairs.iter().copied().filter(|&(_, e)| e > 0).collect();
        entries.sort_unstable();
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidDegree(format!("direction {} repeated", w[0].0)));
            }
        }
        if entries.first().is_some_and(|&(d, _)| d == 0) {
            return Err(Error::InvalidDegree("directions are numbered from 1".into()));
        }
        Ok(GridDegree(entries))
    }

    /// Builds a degree from its first entries `x_1, x_2, ...`.
    pub fn from_dense(entries: &[u32]) -> Self {
        GridDegree(
            entries
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (i as u32 + 1, e))
                .collect(),
        )
    }

    pub fn entries(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn get(&self, direction: u32) -> u32 {
        match self.0.binary_search_by_key(&direction, |&(d, _)| d) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest direction with a nonzero entry (0 for the zero degree).
    pub fn max_direction(&self) -> u32 {
        self.0.last().map_or(0, |&(d, _)| d)
    }

    pub fn to_dense(&self, len: usize) -> Vec<u32> {
        let mut v = vec![0; len.max(self.max_direction() as usize)];
        for &(d, e) in &self.0 {
            v[d as usize - 1] = e;
        }
        v
    }

    pub fn sum(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn sup(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).max().unwrap_or(0)
    }

    pub fn leq(&self, other: &GridDegree) -> bool {
        // every stored entry of self must be dominated in other
        let mut j = 0;
        for &(d, e) in &self.0 {
            while j < other.0.len() && other.0[j].0 < d {
                j += 1;
            }
            if j == other.0.len() || other.0[j].0 != d || other.0[j].1 < e {
                return false;
            }
        }
        true
    }

    fn merge_with(&self, other: &GridDegree, f: impl Fn(u32, u32) -> u32) -> GridDegree {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        while i < self.0.len() || j < other.0.len() {
            let a = self.0.get(i).copied();
            let b = other.0.get(j).copied();
            let (d, x, y) = match (a, b) {
                (Some((da, ea)), Some((db, eb))) if da == db => {
                    i += 1;
                    j += 1;
                    (da, ea, eb)
                }
                (Some((da, ea)), Some((db, _))) if da < db => {
                    i += 1;
                    (da, ea, 0)
                }
                (Some(_), Some((db, eb))) => {
                    j += 1;
                    (db, 0, eb)
                }
                (Some((da, ea)), None) => {
                    i += 1;
                    (da, ea, 0)
                }
                (None, Some((db, eb))) => {
                    j += 1;
                    (db, 0, eb)
                }
                (None, None) => unreachable!(),
            };
            let v = f(x, y);
            if v > 0 {
                out.push((d, v));
            }
        }
        GridDegree(out)
    }

    /// Entrywise maximum, the least upper bound.
    pub fn join(&self, other: &GridDegree) -> GridDegree {
        self.merge_with(other, u32::max)
    }

    /// Entrywise minimum, the greatest lower bound.
    pub fn meet(&self, other: &GridDegree) -> GridDegree {
        self.merge_with(other, u32::min)
    }

    pub fn add(&self, other: &GridDegree) -> GridDegree {
        self.merge_with(other, |a, b| a + b)
    }

    /// `x + o_i`.
    pub fn raise(&self, direction: u32) -> GridDegree {
        self.add(&GridDegree::unit(direction))
    }

    /// `x - o_i` clamped at zero.
    pub fn lower(&self, direction: u32) -> GridDegree {
        GridDegree(
            self.0
                .iter()
                .filter_map(|&(d, e)| {
                    let e = if d == direction { e - 1 } else { e };
                    (e > 0).then_some((d, e))
                })
                .collect(),
        )
    }

    /// Decrements every positive entry by one.
    pub fn lower_all(&self) -> GridDegree {
        GridDegree(
            self.0
                .iter()
                .filter_map(|&(d, e)| (e > 1).then_some((d, e - 1)))
                .collect(),
        )
    }

    /// Sorts the entries into a weakly decreasing sequence, the orbit of `x`
    /// under finitary permutations of the directions.
    pub fn sorted(&self) -> Partition {
        let mut parts: Vec<u32> = self.0.iter().map(|&(_, e)| e).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }
}

impl Ord for GridDegree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sum().cmp(&other.sum()).then_with(|| {
            // dense lexicographic comparison: the first differing direction decides
            let (mut i, mut j) = (0, 0);
            loop {
                match (self.0.get(i), other.0.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(&(da, ea)), Some(&(db, eb))) => {
                        if da < db {
                            return Ordering::Greater;
                        }
                        if db < da {
                            return Ordering::Less;
                        }
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        })
    }
}

impl PartialOrd for GridDegree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GridDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.max_direction() <= 10 {
            let dense = self.to_dense(1.max(self.max_direction() as usize));
            let body: Vec<String> = dense.iter().map(u32::to_string).collect();
            write!(f, "({})", body.join(","))
        } else {
            let terms: Vec<String> = self
                .0
                .iter()
                .map(|&(d, e)| if e == 1 { format!("o{d}") } else { format!("{e}*o{d}") })
                .collect();
            write!(f, "{}", terms.join("+"))
        }
    }
}

impl fmt::Debug for GridDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A partition: weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn new(parts: &[u32]) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidDegree("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidDegree(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition(parts.to_vec()))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn sup(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }

    /// Containment of Young diagrams.
    pub fn leq(&self, other: &Partition) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn join(&self, other: &Partition) -> Partition {
        let n = self.0.len().max(other.0.len());
        Partition(
            (0..n)
                .map(|i| self.0.get(i).copied().unwrap_or(0).max(other.0.get(i).copied().unwrap_or(0)))
                .collect(),
        )
    }

    /// Padding with zeros: the inclusion of the Young lattice into the grid.
    pub fn to_grid(&self) -> GridDegree {
        GridDegree::from_dense(&self.0)
    }

    /// Partitions obtained by removing one corner box, in canonical order.
    pub fn corners_removed(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for j in 0..self.0.len() {
            let removable = j + 1 == self.0.len() || self.0[j] > self.0[j + 1];
            if removable {
                let mut p = self.0.clone();
                p[j] -= 1;
                if p[j] == 0 {
                    p.pop();
                }
                out.push(Partition(p));
            }
        }
        out.sort();
        out
    }

    /// All partitions of `n`, in canonical order.
    pub fn all_of(n: u32) -> Vec<Partition> {
        fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                go(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, n, &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sum().cmp(&other.sum()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "[{}]", body.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The sup norm or the sum norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Norm {
    Sup,
    Sum,
}

impl Norm {
    pub const ALL: [Norm; 2] = [Norm::Sup, Norm::Sum];

    pub fn name(self) -> &'static str {
        match self {
            Norm::Sup => "sup",
            Norm::Sum => "sum",
        }
    }
}

impl std::str::FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sup" => Ok(Norm::Sup),
            "sum" => Ok(Norm::Sum),
            other => Err(Error::parse("norm", format!("expected `sup` or `sum`, got `{other}`"))),
        }
    }
}

/// A point of one of the grading posets.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Degree {
    Grid(GridDegree),
    Young(Partition),
    Orbit(u64),
}

impl Degree {
    /// Grid degree from its dense entries.
    pub fn grid(entries: &[u32]) -> Degree {
        Degree::Grid(GridDegree::from_dense(entries))
    }

    pub fn young(parts: &[u32]) -> Result<Degree> {
        Partition::new(parts).map(Degree::Young)
    }

    pub fn orbit(n: u64) -> Result<Degree> {
        if n == 0 {
            return Err(Error::NotPositive("orbit object"));
        }
        Ok(Degree::Orbit(n))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Degree::Grid(_) => "grid",
            Degree::Young(_) => "young",
            Degree::Orbit(_) => "orbit",
        }
    }

    pub fn as_grid(&self) -> Option<&GridDegree> {
        match self {
            Degree::Grid(g) => Some(g),
            _ => None,
        }
    }

    pub fn as_young(&self) -> Option<&Partition> {
        match self {
            Degree::Young(p) => Some(p),
            _ => None,
        }
    }

    pub fn norm(&self, norm: Norm) -> Result<u32> {
        match (self, norm) {
            (Degree::Grid(g), Norm::Sup) => Ok(g.sup()),
            (Degree::Grid(g), Norm::Sum) => Ok(g.sum()),
            (Degree::Young(p), Norm::Sup) => Ok(p.sup()),
            (Degree::Young(p), Norm::Sum) => Ok(p.sum()),
            (Degree::Orbit(_), _) => Err(Error::UnsupportedKind("orbit")),
        }
    }

    pub fn leq(&self, other: &Degree) -> Result<bool> {
        match (self, other) {
            (Degree::Grid(a), Degree::Grid(b)) => Ok(a.leq(b)),
            (Degree::Young(a), Degree::Young(b)) => Ok(a.leq(b)),
            (Degree::Orbit(a), Degree::Orbit(b)) => Ok(b % a == 0),
            (a, b) => Err(Error::KindMismatch(a.kind(), b.kind())),
        }
    }

    /// Same as [`Degree::leq`] for degrees already known to share a kind.
    pub fn below(&self, other: &Degree) -> bool {
        self.leq(other).unwrap_or(false)
    }

    pub fn join(&self, other: &Degree) -> Result<Degree> {
        match (self, other) {
            (Degree::Grid(a), Degree::Grid(b)) => Ok(Degree::Grid(a.join(b))),
            (Degree::Young(a), Degree::Young(b)) => Ok(Degree::Young(a.join(b))),
            (Degree::Orbit(_), Degree::Orbit(_)) => Err(Error::UnsupportedKind("orbit")),
            (a, b) => Err(Error::KindMismatch(a.kind(), b.kind())),
        }
    }

    /// The maximal elements strictly below `self`, in canonical order.
    pub fn predecessors(&self) -> Vec<Degree> {
        match self {
            Degree::Grid(g) => {
                let mut out: Vec<Degree> =
                    g.entries().iter().map(|&(d, _)| Degree::Grid(g.lower(d))).collect();
                out.sort();
                out
            }
            Degree::Young(p) => p.corners_removed().into_iter().map(Degree::Young).collect(),
            Degree::Orbit(n) => prime_factors(*n).into_iter().map(|(q, _)| Degree::Orbit(n / q)).collect(),
        }
    }

    pub fn is_minimum(&self) -> bool {
        match self {
            Degree::Grid(g) => g.is_zero(),
            Degree::Young(p) => p.is_empty(),
            Degree::Orbit(n) => *n == 1,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Grid(g) => write!(f, "{g}"),
            Degree::Young(p) => write!(f, "{p}"),
            Degree::Orbit(n) => write!(f, "{n}"),
        }
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The `i`-th prime, 1-based (`nth_prime(1) == 2`).
pub fn nth_prime(i: u32) -> u64 {
    assert!(i >= 1);
    let mut count = 0;
    let mut n = 1u64;
    while count < i {
        n += 1;
        if is_prime(n) {
            count += 1;
        }
    }
    n
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as `(prime, exponent)` pairs, primes ascending.
pub fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    out.sort_unstable();
    out
}

/// Exponent vector of `n` over the primes `2 < 3 < 5 < ...`.
pub fn divisibility_encode(n: u64) -> Result<GridDegree> {
    if n == 0 {
        return Err(Error::NotPositive("divisibility_encode input"));
    }
    let mut pairs = Vec::new();
    let mut rest = n;
    let mut index = 0u32;
    let mut p = 1u64;
    while rest > 1 {
        p += 1;
        if !is_prime(p) {
            continue;
        }
        index += 1;
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((index, e));
        }
    }
    GridDegree::from_pairs(&pairs)
}

/// Inverse of [`divisibility_encode`].
pub fn divisibility_decode(x: &GridDegree) -> Result<u64> {
    let mut n: u64 = 1;
    for &(d, e) in x.entries() {
        let p = nth_prime(d);
        for _ in 0..e {
            n = n
                .checked_mul(p)
                .ok_or_else(|| Error::InvalidDegree(format!("{x} encodes an integer beyond 64 bits")))?;
        }
    }
    Ok(n)
}

/// Truncation data for a grid computation: direction `i` is capped at
/// `caps[i - 1]` (directions past the end are capped at 0), optionally with a
/// bound on the sum norm.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridBox {
    pub caps: Vec<u32>,
    pub max_sum: Option<u32>,
}

impl GridBox {
    pub fn new(caps: Vec<u32>) -> Self {
        GridBox { caps, max_sum: None }
    }

    /// The principal down-set of `x`.
    pub fn below(x: &GridDegree) -> Self {
        GridBox::new(x.to_dense(x.max_direction() as usize))
    }

    pub fn with_max_sum(mut self, max_sum: u32) -> Self {
        self.max_sum = Some(max_sum);
        self
    }

    pub fn directions(&self) -> u32 {
        self.caps.len() as u32
    }

    pub fn cap(&self, direction: u32) -> u32 {
        self.caps.get(direction as usize - 1).copied().unwrap_or(0)
    }

    pub fn contains(&self, x: &GridDegree) -> bool {
        x.entries().iter().all(|&(d, e)| e <= self.cap(d)) && self.max_sum.is_none_or(|m| x.sum() <= m)
    }

    /// Number of degrees, without enumerating them when there is no sum bound.
    pub fn size_hint(&self) -> u128 {
        if self.max_sum.is_none() {
            self.caps.iter().map(|&c| c as u128 + 1).product()
        } else {
            self.degrees().len() as u128
        }
    }

    pub fn degrees(&self) -> Vec<GridDegree> {
        let active: Vec<(u32, u32)> = self
            .caps
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (i as u32 + 1, c))
            .collect();
        let budget = self.max_sum.unwrap_or(u32::MAX);
        let mut out = Vec::new();
        let mut cur: Vec<(u32, u32)> = Vec::new();
        fn go(
            active: &[(u32, u32)],
            k: usize,
            budget: u32,
            cur: &mut Vec<(u32, u32)>,
            out: &mut Vec<GridDegree>,
        ) {
            if k == active.len() {
                out.push(GridDegree(cur.clone()));
                return;
            }
            let (d, cap) = active[k];
            go(active, k + 1, budget, cur, out);
            for e in 1..=cap.min(budget) {
                cur.push((d, e));
                go(active, k + 1, budget - e, cur, out);
                cur.pop();
            }
        }
        go(&active, 0, budget, &mut cur, &mut out);
        out.sort();
        out
    }
}

/// Truncation data for the Young lattice: partitions of size at most
/// `max_sum`, optionally contained in `within`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct YoungBox {
    pub max_sum: u32,
    pub within: Option<Partition>,
}

impl YoungBox {
    pub fn new(max_sum: u32) -> Self {
        YoungBox { max_sum, within: None }
    }

    pub fn below(p: &Partition) -> Self {
        YoungBox {
            max_sum: p.sum(),
            within: Some(p.clone()),
        }
    }

    pub fn contains(&self, p: &Partition) -> bool {
        p.sum() <= self.max_sum && self.within.as_ref().is_none_or(|w| p.leq(w))
    }

    pub fn degrees(&self) -> Vec<Partition> {
        let mut out: Vec<Partition> = (0..=self.max_sum)
            .flat_map(Partition::all_of)
            .filter(|p| self.contains(p))
            .collect();
        out.sort();
        out
    }
}

/// The grading poset together with the finite, downward closed region a
/// computation is confined to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PosetDescriptor {
    Grid(GridBox),
    Young(YoungBox),
    /// Divisors of `modulus`.
    Orbit { modulus: u64 },
}

impl PosetDescriptor {
    pub fn grid(caps: &[u32]) -> Self {
        PosetDescriptor::Grid(GridBox::new(caps.to_vec()))
    }

    pub fn young(max_sum: u32) -> Self {
        PosetDescriptor::Young(YoungBox::new(max_sum))
    }

    pub fn orbit(modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::NotPositive("modulus"));
        }
        Ok(PosetDescriptor::Orbit { modulus })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            PosetDescriptor::Grid(_) => "grid",
            PosetDescriptor::Young(_) => "young",
            PosetDescriptor::Orbit { .. } => "orbit",
        }
    }

    pub fn contains(&self, x: &Degree) -> bool {
        match (self, x) {
            (PosetDescriptor::Grid(b), Degree::Grid(g)) => b.contains(g),
            (PosetDescriptor::Young(b), Degree::Young(p)) => b.contains(p),
            (PosetDescriptor::Orbit { modulus }, Degree::Orbit(n)) => modulus % n == 0,
            _ => false,
        }
    }

    pub fn check(&self, x: &Degree) -> Result<()> {
        if x.kind() != self.kind() {
            return Err(Error::KindMismatch(x.kind(), self.kind()));
        }
        if !self.contains(x) {
            return Err(Error::OutsideRegion(x.to_string()));
        }
        Ok(())
    }

    /// All degrees of the region in canonical order.
    pub fn degrees(&self) -> Vec<Degree> {
        match self {
            PosetDescriptor::Grid(b) => b.degrees().into_iter().map(Degree::Grid).collect(),
            PosetDescriptor::Young(b) => b.degrees().into_iter().map(Degree::Young).collect(),
            PosetDescriptor::Orbit { modulus } => {
                let mut d: Vec<Degree> = divisors(*modulus).into_iter().map(Degree::Orbit).collect();
                d.sort_by_key(|x| match x {
                    Degree::Orbit(n) => (divisibility_encode(*n).expect("positive"), *n),
                    _ => unreachable!(),
                });
                d
            }
        }
    }

    /// Whether every degree of `self` lies in `other`.
    pub fn is_within(&self, other: &PosetDescriptor) -> bool {
        match (self, other) {
            (PosetDescriptor::Grid(a), PosetDescriptor::Grid(b)) => {
                let caps_ok = (1..=a.directions()).all(|d| a.cap(d) <= b.cap(d) || b.max_sum.is_some_and(|m| m == 0));
                let sum_ok = match (a.max_sum, b.max_sum) {
                    (_, None) => true,
                    (Some(x), Some(y)) => x <= y || a.caps.iter().sum::<u32>() <= y,
                    (None, Some(y)) => a.caps.iter().sum::<u32>() <= y,
                };
                caps_ok && sum_ok
            }
            (PosetDescriptor::Young(a), PosetDescriptor::Young(b)) => {
                let bound = match (&a.within, a.max_sum) {
                    (Some(w), m) => w.sum().min(m),
                    (None, m) => m,
                };
                bound <= b.max_sum
                    && match &b.within {
                        None => true,
                        Some(bw) => a.within.as_ref().is_some_and(|aw| aw.leq(bw)),
                    }
            }
            (PosetDescriptor::Orbit { modulus: a }, PosetDescriptor::Orbit { modulus: b }) => b % a == 0,
            _ => false,
        }
    }

    /// The smallest region of this kind containing every degree in `degrees`
    /// (the principal down-set of their join).
    pub fn spanned_by<'a>(kind: &str, degrees: impl IntoIterator<Item = &'a Degree>) -> Result<Self> {
        match kind {
            "grid" => {
                let mut j = GridDegree::zero();
                for d in degrees {
                    j = j.join(d.as_grid().ok_or(Error::KindMismatch(d.kind(), "grid"))?);
                }
                Ok(PosetDescriptor::Grid(GridBox::below(&j)))
            }
            "young" => {
                let mut j = Partition::empty();
                for d in degrees {
                    j = j.join(d.as_young().ok_or(Error::KindMismatch(d.kind(), "young"))?);
                }
                Ok(PosetDescriptor::Young(YoungBox::below(&j)))
            }
            "orbit" => {
                let mut m = 1u64;
                for d in degrees {
                    match d {
                        Degree::Orbit(n) => m = num_integer::lcm(m, *n),
                        other => return Err(Error::KindMismatch(other.kind(), "orbit")),
                    }
                }
                PosetDescriptor::orbit(m)
            }
            other => Err(Error::parse("poset kind", format!("unknown kind `{other}`"))),
        }
    }

    /// Parses a box specification: `sum=N`, dense caps `3,3,3`, sparse caps
    /// `4:1,5:1,17:1`, each optionally followed by `;sum=N`.
    pub fn parse_box(kind: &str, spec: &str) -> Result<Self> {
        let bad = |m: String| Error::parse("box", m);
        let mut caps_part = None;
        let mut max_sum = None;
        let mut within = None;
        for piece in spec.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            if let Some(v) = piece.strip_prefix("sum=") {
                max_sum = Some(v.parse::<u32>().map_err(|e| bad(format!("`{v}`: {e}")))?);
            } else if let Some(v) = piece.strip_prefix("within=") {
                let parts: Result<Vec<u32>, _> = v.split(',').map(|t| t.trim().parse::<u32>()).collect();
                within = Some(Partition::new(&parts.map_err(|e| bad(e.to_string()))?)?);
            } else if let Some(v) = piece.strip_prefix("modulus=") {
                let m = v.parse::<u64>().map_err(|e| bad(format!("`{v}`: {e}")))?;
                return PosetDescriptor::orbit(m);
            } else {
                caps_part = Some(piece.to_string());
            }
        }
        match kind {
            "grid" => {
                let caps = match caps_part {
                    None => return Err(bad("grid boxes need per-direction caps".into())),
                    Some(c) if c.contains(':') => {
                        let mut caps: Vec<u32> = Vec::new();
                        for t in c.split(',') {
                            let (d, e) = t.split_once(':').ok_or_else(|| bad(format!("`{t}`")))?;
                            let d: usize = d.trim().parse().map_err(|_| bad(format!("`{t}`")))?;
                            let e: u32 = e.trim().parse().map_err(|_| bad(format!("`{t}`")))?;
                            if d == 0 {
                                return Err(bad("directions are numbered from 1".into()));
                            }
                            if caps.len() < d {
                                caps.resize(d, 0);
                            }
                            caps[d - 1] = e;
                        }
                        caps
                    }
                    Some(c) => c
                        .split(',')
                        .map(|t| t.trim().parse::<u32>().map_err(|_| bad(format!("`{t}`"))))
                        .collect::<Result<_>>()?,
                };
                Ok(PosetDescriptor::Grid(GridBox { caps, max_sum }))
            }
            "young" => {
                let max_sum = max_sum
                    .or_else(|| within.as_ref().map(Partition::sum))
                    .ok_or_else(|| bad("young boxes need `sum=N` or `within=...`".into()))?;
                Ok(PosetDescriptor::Young(YoungBox { max_sum, within }))
            }
            other => Err(bad(format!("no box syntax for {other} posets"))),
        }
    }
}

impl fmt::Display for PosetDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PosetDescriptor::Grid(b) => {
                let caps: Vec<String> = b.caps.iter().map(u32::to_string).collect();
                write!(f, "grid caps ({})", caps.join(","))?;
                if let Some(m) = b.max_sum {
                    write!(f, " sum<={m}")?;
                }
                Ok(())
            }
            PosetDescriptor::Young(b) => {
                write!(f, "young sum<={}", b.max_sum)?;
                if let Some(w) = &b.within {
                    write!(f, " within {w}")?;
                }
                Ok(())
            }
            PosetDescriptor::Orbit { modulus } => write!(f, "orbit divisors of {modulus}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms() {
        let x = Degree::grid(&[2, 0, 1]);
        assert_eq!(x.norm(Norm::Sup).unwrap(), 2);
        assert_eq!(x.norm(Norm::Sum).unwrap(), 3);
        let zero = Degree::grid(&[]);
        assert_eq!(zero.norm(Norm::Sup).unwrap(), 0);
        assert_eq!(zero.norm(Norm::Sum).unwrap(), 0);
        let w = GridDegree::from_pairs(&[(4, 1), (5, 1), (17, 1), (53, 1)]).unwrap();
        assert_eq!(Degree::Grid(w).norm(Norm::Sum).unwrap(), 4);
        assert_eq!(Degree::Orbit(6).norm(Norm::Sum), Err(Error::UnsupportedKind("orbit")));
    }

    #[test]
    fn order_examples() {
        assert!(Degree::grid(&[1, 0]).leq(&Degree::grid(&[1, 1])).unwrap());
        let y = |p: &[u32]| Degree::young(p).unwrap();
        assert!(y(&[2, 1]).leq(&y(&[2, 2])).unwrap());
        assert!(!y(&[3]).leq(&y(&[2, 2])).unwrap());
        assert!(Degree::Orbit(3).leq(&Degree::Orbit(12)).unwrap());
        assert!(!Degree::Orbit(5).leq(&Degree::Orbit(12)).unwrap());
        assert!(matches!(Degree::Orbit(3).leq(&Degree::grid(&[1])), Err(Error::KindMismatch(..))));
    }

    #[test]
    fn joins() {
        assert_eq!(
            Degree::grid(&[1, 0]).join(&Degree::grid(&[0, 1])).unwrap(),
            Degree::grid(&[1, 1])
        );
        let x = Degree::grid(&[3, 0, 2]);
        assert_eq!(x.join(&x).unwrap(), x);
        // partitions of 3: (3), (2,1), (1,1,1)
        let j = Partition::all_of(3).iter().fold(Partition::empty(), |acc, p| acc.join(p));
        assert_eq!(j.parts(), &[3, 1, 1]);
        assert_eq!(j.sum(), 5);
    }

    #[test]
    fn predecessor_examples() {
        assert_eq!(
            Degree::grid(&[1, 1]).predecessors(),
            vec![Degree::grid(&[0, 1]), Degree::grid(&[1, 0])]
        );
        assert_eq!(
            Degree::young(&[2, 1]).unwrap().predecessors(),
            vec![Degree::young(&[1, 1]).unwrap(), Degree::young(&[2]).unwrap()]
        );
        assert!(Degree::grid(&[]).predecessors().is_empty());
        assert_eq!(Degree::Orbit(12).predecessors(), vec![Degree::Orbit(6), Degree::Orbit(4)]);
    }

    #[test]
    fn divisibility_examples() {
        assert_eq!(divisibility_encode(12).unwrap(), GridDegree::from_dense(&[2, 1]));
        assert_eq!(divisibility_encode(1).unwrap(), GridDegree::zero());
        // 53 is the 16th prime
        assert_eq!(divisibility_encode(53).unwrap(), GridDegree::unit(16));
        assert_eq!(nth_prime(16), 53);
        assert_eq!(divisibility_encode(0), Err(Error::NotPositive("divisibility_encode input")));
        for n in 1..200 {
            assert_eq!(divisibility_decode(&divisibility_encode(n).unwrap()).unwrap(), n);
        }
    }

    #[test]
    fn divisibility_is_order_isomorphism() {
        let enc: Vec<GridDegree> = (1..=1000).map(|n| divisibility_encode(n).unwrap()).collect();
        for m in 1..=1000u64 {
            for n in (1..=1000u64).step_by(7) {
                assert_eq!(n % m == 0, enc[m as usize - 1].leq(&enc[n as usize - 1]), "{m} {n}");
            }
        }
    }

    #[test]
    fn canonical_order_is_graded_lex() {
        let mut v = vec![Degree::grid(&[1, 0]), Degree::grid(&[0, 0, 1]), Degree::grid(&[0, 1]), Degree::grid(&[])];
        v.sort();
        assert_eq!(
            v,
            vec![Degree::grid(&[]), Degree::grid(&[0, 0, 1]), Degree::grid(&[0, 1]), Degree::grid(&[1, 0])]
        );
    }

    #[test]
    fn box_enumeration() {
        let b = GridBox::new(vec![2, 1]);
        assert_eq!(b.degrees().len(), 6);
        let sparse = PosetDescriptor::parse_box("grid", "4:1,5:1,17:1,53:1;sum=4").unwrap();
        assert_eq!(sparse.degrees().len(), 16);
        let yb = YoungBox::new(4);
        assert_eq!(yb.degrees().len(), 1 + 1 + 2 + 3 + 5);
        let within = YoungBox::below(&Partition::new(&[2, 1]).unwrap());
        assert_eq!(within.degrees().len(), 5);
        let orbit = PosetDescriptor::orbit(12).unwrap();
        assert_eq!(orbit.degrees().len(), 6);
    }

    #[test]
    fn outside_region_is_rejected() {
        let p = PosetDescriptor::grid(&[1, 1]);
        assert!(p.check(&Degree::grid(&[1, 1])).is_ok());
        assert!(matches!(p.check(&Degree::grid(&[2])), Err(Error::OutsideRegion(_))));
        assert!(matches!(p.check(&Degree::grid(&[0, 0, 1])), Err(Error::OutsideRegion(_))));
    }
}
