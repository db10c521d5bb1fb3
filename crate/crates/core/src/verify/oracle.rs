//! An independent way to compute `H_i`: the normalized bar complex.
//!
//! `H_i(V)_y` is the `i`-th homology of the complex `C_n(y)` whose summands
//! are indexed by strict chains `y > x_1 > ... > x_n` inside the box, each
//! contributing a copy of `V_{x_n}` (`C_0(y) = V_y`). The face deleting `x_j`
//! for `j < n` composes two arrows; the face deleting `x_n` applies the
//! structure map `V_{x_n} -> V_{x_{n-1}}`; the face deleting `y` vanishes
//! because arrows act by zero on the simple side.
//!
//! Nothing here shares code with the minimal-cover engine beyond evaluation
//! of graded pieces and a sparse rank routine.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::fpmod::Representation;
use crate::homology::Support;
use crate::linalg::{sparse_rank, Matrix};
use crate::poset::{Degree, PosetDescriptor};

/// Largest box (number of degrees) the oracle accepts.
pub const MAX_ORACLE_DEGREES: usize = 64;

struct Complex<'a> {
    rep: &'a dyn Representation,
    degrees: Vec<Degree>,
    /// `strictly_below[a]`: indices of the degrees strictly below degree `a`.
    strictly_below: Vec<Vec<usize>>,
    dims: Vec<usize>,
}

impl Complex<'_> {
    /// Strict chains `y > x_1 > ... > x_n` (as `[x_1, ..., x_n]`) whose last
    /// element carries a nonzero value.
    fn chains(&self, y: usize, n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if n == 0 {
            if self.dims[y] > 0 {
                out.push(Vec::new());
            }
            return out;
        }
        let mut cur = Vec::with_capacity(n);
        self.extend(y, n, &mut cur, &mut out);
        out
    }

    fn extend(&self, top: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        for &x in &self.strictly_below[top] {
            cur.push(x);
            if cur.len() == n {
                if self.dims[x] > 0 {
                    out.push(cur.clone());
                }
            } else {
                self.extend(x, n, cur, out);
            }
            cur.pop();
        }
    }

    fn dim_chains(&self, y: usize, chains: &[Vec<usize>]) -> usize {
        chains.iter().map(|c| self.dims[*c.last().unwrap_or(&y)]).sum()
    }

    /// Rank of `d_n : C_n(y) -> C_{n-1}(y)`.
    fn rank(&self, y: usize, n: usize, maps: &mut HashMap<(usize, usize), Matrix>) -> Result<usize> {
        if n == 0 {
            return Ok(0);
        }
        let field = self.rep.field();
        let sources = self.chains(y, n);
        let targets = self.chains(y, n - 1);
        let mut offset: HashMap<&[usize], usize> = HashMap::with_capacity(targets.len());
        let mut acc = 0;
        for t in &targets {
            offset.insert(t.as_slice(), acc);
            acc += self.dims[*t.last().unwrap_or(&y)];
        }
        let mut columns: Vec<Vec<(usize, Scalar)>> = Vec::new();
        let sign = |j: usize| if j.is_multiple_of(2) { field.one() } else { field.neg(&field.one()) };
        for c in &sources {
            let last = c[n - 1];
            let below_last = if n >= 2 { c[n - 2] } else { y };
            if let std::collections::hash_map::Entry::Vacant(e) = maps.entry((last, below_last)) {
                let m = self.rep.map(&self.degrees[last], &self.degrees[below_last])?;
                e.insert(m);
            }
            let m = &maps[&(last, below_last)];
            for k in 0..self.dims[last] {
                let mut col = Vec::new();
                // inner faces: delete x_j (1-based j < n); the value stays in V_{x_n}
                for j in 1..n {
                    let mut t = c.clone();
                    t.remove(j - 1);
                    if let Some(&o) = offset.get(t.as_slice()) {
                        col.push((o + k, sign(j)));
                    }
                }
                // last face: push the value along x_n -> x_{n-1}
                let t = &c[..n - 1];
                if let Some(&o) = offset.get(t) {
                    for r in 0..m.rows() {
                        let v = m.get(r, k);
                        if !field.is_zero(v) {
                            col.push((o + r, field.mul(&sign(n), v)));
                        }
                    }
                }
                // combine repeated rows
                col.sort_by_key(|e| e.0);
                let mut merged: Vec<(usize, Scalar)> = Vec::with_capacity(col.len());
                for (i, v) in col {
                    match merged.last_mut() {
                        Some((j, w)) if *j == i => *w = field.add(w, &v),
                        _ => merged.push((i, v)),
                    }
                }
                merged.retain(|(_, v)| !field.is_zero(v));
                columns.push(merged);
            }
        }
        Ok(sparse_rank(field, columns))
    }
}

/// `H_i(V)` on a small box, from the bar complex.
pub fn oracle_homology(rep: &dyn Representation, region: &PosetDescriptor, i: usize) -> Result<Support> {
    Ok(oracle_homology_upto(rep, region, i)?.swap_remove(i))
}

/// `H_0 .. H_s` on a small box, from the bar complex.
pub fn oracle_homology_upto(rep: &dyn Representation, region: &PosetDescriptor, s: usize) -> Result<Vec<Support>> {
    let degrees = region.degrees();
    if degrees.len() > MAX_ORACLE_DEGREES {
        return Err(Error::BoxTooLarge(format!(
            "{} degrees, the bar complex oracle handles at most {MAX_ORACLE_DEGREES}",
            degrees.len()
        )));
    }
    if !region.is_within(rep.region()) {
        return Err(Error::OutsideRegion(format!("box {region} is not inside {}", rep.region())));
    }
    let strictly_below = degrees
        .iter()
        .map(|y| {
            degrees
                .iter()
                .enumerate()
                .filter(|(_, x)| *x != y && x.below(y))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let dims = degrees.iter().map(|d| rep.dim(d)).collect::<Result<Vec<_>>>()?;
    let complex = Complex {
        rep,
        degrees,
        strictly_below,
        dims,
    };
    let per_degree: Vec<Vec<usize>> = (0..complex.degrees.len())
        .into_par_iter()
        .map(|y| {
            let mut maps = HashMap::new();
            let ranks = (0..=s + 1)
                .map(|n| complex.rank(y, n, &mut maps))
                .collect::<Result<Vec<_>>>()?;
            Ok((0..=s)
                .map(|n| complex.dim_chains(y, &complex.chains(y, n)) - ranks[n] - ranks[n + 1])
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((0..=s)
        .map(|n| {
            complex
                .degrees
                .iter()
                .zip(&per_degree)
                .filter(|(_, h)| h[n] > 0)
                .map(|(d, h)| (d.clone(), h[n]))
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::fpmod::{Evaluator, Presentation};

    #[test]
    fn projective_has_no_higher_homology() {
        let p = PosetDescriptor::grid(&[2, 2]);
        let v = Presentation::free(p.clone(), Field::rational(), vec![Degree::grid(&[1, 0])]).unwrap();
        let h = oracle_homology_upto(&Evaluator::new(&v), &p, 2).unwrap();
        assert_eq!(h[0], vec![(Degree::grid(&[1, 0]), 1)]);
        assert!(h[1].is_empty() && h[2].is_empty());
    }

    #[test]
    fn koszul_answer_for_simple() {
        let f = Field::default_prime();
        let p = PosetDescriptor::grid(&[2, 2]);
        let v = Presentation::new(
            p.clone(),
            f.clone(),
            vec![Degree::grid(&[])],
            vec![
                (Degree::grid(&[1, 0]), vec![(0, f.one())]),
                (Degree::grid(&[0, 1]), vec![(0, f.one())]),
            ],
        )
        .unwrap();
        let h = oracle_homology_upto(&Evaluator::new(&v), &p, 3).unwrap();
        assert_eq!(h[1], vec![(Degree::grid(&[0, 1]), 1), (Degree::grid(&[1, 0]), 1)]);
        assert_eq!(h[2], vec![(Degree::grid(&[1, 1]), 1)]);
        assert!(h[3].is_empty());
    }

    #[test]
    fn guard_rejects_large_boxes() {
        let p = PosetDescriptor::grid(&[4, 4, 4]);
        let v = Presentation::zero(p.clone(), Field::rational());
        assert!(matches!(oracle_homology(&v, &p, 1), Err(Error::BoxTooLarge(_))));
    }
}
