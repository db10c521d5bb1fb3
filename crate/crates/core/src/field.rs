//! Exact scalar fields: the rationals, prime fields `F_p` and cyclotomic
//! fields `Q(z)` with `z` a primitive `N`-th root of unity.
//!
//! A [`Field`] is a small runtime object; scalars are plain values of the
//! [`Scalar`] enum and every arithmetic operation goes through the field.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poset::is_prime;

pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Which field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
    Cyclotomic(u32),
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "rational"),
            FieldSpec::Prime(p) => write!(f, "prime({p})"),
            FieldSpec::Cyclotomic(n) => write!(f, "cyclotomic({n})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime(u64),
    /// Coefficients `c_0 .. c_{d-1}` of `c_0 + c_1 z + ...` with `d = deg Φ_N`.
    Cyclotomic(Vec<BigRational>),
}

/// A field together with whatever it needs for arithmetic (the cyclotomic
/// polynomial for cyclotomic fields).
#[derive(Clone)]
pub struct Field {
    spec: FieldSpec,
    /// Monic `Φ_N`, coefficients from the constant term up.
    phi: Option<Arc<Vec<BigRational>>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.spec)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Field {}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn poly_trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// Exact division of polynomials whose divisor is monic.
fn poly_div_monic(num: &[BigRational], den: &[BigRational]) -> Vec<BigRational> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return vec![];
    }
    let mut quot = vec![BigRational::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "division was not exact");
    quot
}

/// The `n`-th cyclotomic polynomial, via `x^n - 1 = prod_{d | n} Φ_d`.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigRational> {
    assert!(n >= 1);
    let mut p = vec![BigRational::zero(); n as usize + 1];
    p[0] = q(-1);
    p[n as usize] = q(1);
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = poly_div_monic(&p, &cyclotomic_polynomial(d));
        }
    }
    poly_trim(&mut p);
    p
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

impl Field {
    pub fn rational() -> Field {
        Field {
            spec: FieldSpec::Rational,
            phi: None,
        }
    }

    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidParameters(format!("{p} is not prime")));
        }
        if p >= 1 << 62 {
            return Err(Error::InvalidParameters(format!("prime {p} is too large")));
        }
        Ok(Field {
            spec: FieldSpec::Prime(p),
            phi: None,
        })
    }

    pub fn default_prime() -> Field {
        Field::prime(DEFAULT_PRIME).expect("2^31 - 1 is prime")
    }

    pub fn cyclotomic(order: u32) -> Result<Field> {
        if order == 0 {
            return Err(Error::NotPositive("cyclotomic order"));
        }
        Ok(Field {
            spec: FieldSpec::Cyclotomic(order),
            phi: Some(Arc::new(cyclotomic_polynomial(order))),
        })
    }

    pub fn from_spec(spec: FieldSpec) -> Result<Field> {
        match spec {
            FieldSpec::Rational => Ok(Field::rational()),
            FieldSpec::Prime(p) => Field::prime(p),
            FieldSpec::Cyclotomic(n) => Field::cyclotomic(n),
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn characteristic(&self) -> u64 {
        match self.spec {
            FieldSpec::Prime(p) => p,
            _ => 0,
        }
    }

    /// Degree of `Φ_N` for cyclotomic fields, 1 otherwise.
    pub fn extension_degree(&self) -> usize {
        self.phi.as_ref().map_or(1, |p| p.len() - 1)
    }

    pub fn zero(&self) -> Scalar {
        match self.spec {
            FieldSpec::Rational => Scalar::Rational(BigRational::zero()),
            FieldSpec::Prime(_) => Scalar::Prime(0),
            FieldSpec::Cyclotomic(_) => Scalar::Cyclotomic(vec![BigRational::zero(); self.extension_degree()]),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.from_rational(&q(n)).expect("integers embed in every field")
    }

    /// Image of a rational number; fails in characteristic `p` when `p`
    /// divides the denominator.
    pub fn from_rational(&self, r: &BigRational) -> Result<Scalar> {
        match self.spec {
            FieldSpec::Rational => Ok(Scalar::Rational(r.clone())),
            FieldSpec::Prime(p) => {
                let pb = BigInt::from(p);
                let num = r.numer().mod_floor(&pb).to_u64().expect("reduced");
                let den = r.denom().mod_floor(&pb).to_u64().expect("reduced");
                if den == 0 {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar::Prime(((num as u128 * pow_mod(den, p - 2, p) as u128) % p as u128) as u64))
            }
            FieldSpec::Cyclotomic(_) => {
                let mut v = vec![BigRational::zero(); self.extension_degree()];
                v[0] = r.clone();
                Ok(Scalar::Cyclotomic(v))
            }
        }
    }

    fn check(&self, a: &Scalar) {
        debug_assert!(
            matches!(
                (self.spec, a),
                (FieldSpec::Rational, Scalar::Rational(_))
                    | (FieldSpec::Prime(_), Scalar::Prime(_))
                    | (FieldSpec::Cyclotomic(_), Scalar::Cyclotomic(_))
            ),
            "scalar {a:?} does not belong to {}",
            self.spec
        );
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime(x) => *x == 0,
            Scalar::Cyclotomic(v) => v.iter().all(Zero::is_zero),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.check(a);
        match (a, b) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            (Scalar::Prime(x), Scalar::Prime(y)) => {
                let p = self.characteristic();
                let s = x + y;
                Scalar::Prime(if s >= p { s - p } else { s })
            }
            (Scalar::Cyclotomic(x), Scalar::Cyclotomic(y)) => {
                Scalar::Cyclotomic(x.iter().zip(y).map(|(u, v)| u + v).collect())
            }
            _ => panic!("mixed scalar kinds"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.check(a);
        match a {
            Scalar::Rational(x) => Scalar::Rational(-x),
            Scalar::Prime(x) => Scalar::Prime(if *x == 0 { 0 } else { self.characteristic() - x }),
            Scalar::Cyclotomic(v) => Scalar::Cyclotomic(v.iter().map(|c| -c).collect()),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.check(a);
        match (a, b) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            (Scalar::Prime(x), Scalar::Prime(y)) => {
                Scalar::Prime(((*x as u128 * *y as u128) % self.characteristic() as u128) as u64)
            }
            (Scalar::Cyclotomic(x), Scalar::Cyclotomic(y)) => {
                let mut prod = vec![BigRational::zero(); x.len() + y.len() - 1];
                for (i, u) in x.iter().enumerate() {
                    if u.is_zero() {
                        continue;
                    }
                    for (j, v) in y.iter().enumerate() {
                        if !v.is_zero() {
                            prod[i + j] += u * v;
                        }
                    }
                }
                Scalar::Cyclotomic(self.reduce(prod))
            }
            _ => panic!("mixed scalar kinds"),
        }
    }

    /// Reduces a polynomial in `z` modulo `Φ_N`.
    fn reduce(&self, mut poly: Vec<BigRational>) -> Vec<BigRational> {
        let phi = self.phi.as_ref().expect("cyclotomic field");
        let d = phi.len() - 1;
        for k in (d..poly.len()).rev() {
            let c = std::mem::take(&mut poly[k]);
            if c.is_zero() {
                continue;
            }
            for j in 0..d {
                poly[k - d + j] -= &c * &phi[j];
            }
        }
        poly.resize(d, BigRational::zero());
        poly
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        match a {
            Scalar::Rational(x) => Ok(Scalar::Rational(x.recip())),
            Scalar::Prime(x) => {
                let p = self.characteristic();
                Ok(Scalar::Prime(pow_mod(*x, p - 2, p)))
            }
            Scalar::Cyclotomic(v) => {
                // solve (multiplication by a) * c = 1 over Q
                let d = v.len();
                let mut cols = Vec::with_capacity(d);
                let mut basis = vec![BigRational::zero(); d];
                basis[0] = q(1);
                let mut cur = basis.clone();
                let zed = {
                    let mut z = vec![BigRational::zero(); d.max(2)];
                    z[1] = q(1);
                    self.reduce(z)
                };
                for _ in 0..d {
                    match self.mul(a, &Scalar::Cyclotomic(cur.clone())) {
                        Scalar::Cyclotomic(c) => cols.push(c),
                        _ => unreachable!(),
                    }
                    cur = match self.mul(&Scalar::Cyclotomic(cur), &Scalar::Cyclotomic(zed.clone())) {
                        Scalar::Cyclotomic(c) => c,
                        _ => unreachable!(),
                    };
                }
                // augmented system rows: sum_j cols[j][i] * c_j = basis[i]
                let mut m: Vec<Vec<BigRational>> = (0..d)
                    .map(|i| {
                        let mut row: Vec<BigRational> = (0..d).map(|j| cols[j][i].clone()).collect();
                        row.push(basis[i].clone());
                        row
                    })
                    .collect();
                for col in 0..d {
                    let piv = (col..d).find(|&r| !m[r][col].is_zero()).ok_or(Error::DivisionByZero)?;
                    m.swap(col, piv);
                    let inv = m[col][col].recip();
                    for x in m[col].iter_mut() {
                        *x *= &inv;
                    }
                    for r in 0..d {
                        if r != col && !m[r][col].is_zero() {
                            let f = m[r][col].clone();
                            for k in col..=d {
                                let t = &f * &m[col][k];
                                m[r][k] -= t;
                            }
                        }
                    }
                }
                Ok(Scalar::Cyclotomic(m.into_iter().map(|row| row[d].clone()).collect()))
            }
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut base = a.clone();
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        r
    }

    /// `z^t` for the fixed primitive `N`-th root of unity `z`.
    pub fn root_of_unity(&self, t: i64) -> Result<Scalar> {
        let n = match self.spec {
            FieldSpec::Cyclotomic(n) => n as i64,
            _ => return Err(Error::UnsupportedKind("non-cyclotomic field")),
        };
        let e = t.rem_euclid(n) as usize;
        let mut poly = vec![BigRational::zero(); (e + 1).max(self.extension_degree())];
        poly[e] = q(1);
        Ok(Scalar::Cyclotomic(self.reduce(poly)))
    }

    /// Parses the text form of a scalar.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let s = text.trim();
        let err = |m: &str| Error::parse(format!("scalar `{text}`"), m.to_string());
        match self.spec {
            FieldSpec::Rational => parse_rational(s).map(Scalar::Rational).ok_or_else(|| err("expected a/b")),
            FieldSpec::Prime(p) => {
                let body = match s.split_once("mod") {
                    Some((v, m)) => {
                        if m.trim().parse::<u64>().ok() != Some(p) {
                            return Err(err(&format!("modulus differs from the field characteristic {p}")));
                        }
                        v.trim()
                    }
                    None => s,
                };
                let r = parse_rational(body).ok_or_else(|| err("expected an integer"))?;
                self.from_rational(&r)
            }
            FieldSpec::Cyclotomic(_) => {
                let d = self.extension_degree();
                let mut poly = vec![BigRational::zero(); d];
                let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
                if compact.is_empty() {
                    return Err(err("empty"));
                }
                // split into signed terms
                let mut terms = Vec::new();
                let mut start = 0;
                let bytes = compact.as_bytes();
                for i in 1..bytes.len() {
                    if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' && bytes[i - 1] != b'/' {
                        terms.push(&compact[start..i]);
                        start = i;
                    }
                }
                terms.push(&compact[start..]);
                for term in terms {
                    let (neg, body) = match term.strip_prefix('-') {
                        Some(b) => (true, b),
                        None => (false, term.strip_prefix('+').unwrap_or(term)),
                    };
                    let (coef, power) = if let Some(idx) = body.find('z') {
                        let coef = match &body[..idx] {
                            "" => q(1),
                            c => parse_rational(c.strip_suffix('*').ok_or_else(|| err("expected `*z`"))?)
                                .ok_or_else(|| err("bad coefficient"))?,
                        };
                        let power = match &body[idx + 1..] {
                            "" => 1usize,
                            e => e
                                .strip_prefix('^')
                                .and_then(|e| e.parse::<usize>().ok())
                                .ok_or_else(|| err("bad exponent"))?,
                        };
                        (coef, power)
                    } else {
                        (parse_rational(body).ok_or_else(|| err("bad coefficient"))?, 0)
                    };
                    let coef = if neg { -coef } else { coef };
                    if power >= poly.len() {
                        poly.resize(power + 1, BigRational::zero());
                    }
                    poly[power] += coef;
                }
                Ok(Scalar::Cyclotomic(self.reduce(poly)))
            }
        }
    }

    /// The canonical text form of a scalar.
    pub fn format(&self, a: &Scalar) -> String {
        match a {
            Scalar::Rational(r) => r.to_string(),
            Scalar::Prime(x) => format!("{x} mod {}", self.characteristic()),
            Scalar::Cyclotomic(v) => {
                let mut out = String::new();
                for (k, c) in v.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mag = c.abs();
                    if out.is_empty() {
                        if c.is_negative() {
                            out.push('-');
                        }
                    } else {
                        out.push(if c.is_negative() { '-' } else { '+' });
                    }
                    let power = match k {
                        0 => String::new(),
                        1 => "z".to_string(),
                        k => format!("z^{k}"),
                    };
                    if k == 0 {
                        out.push_str(&mag.to_string());
                    } else if mag.is_one() {
                        out.push_str(&power);
                    } else {
                        out.push_str(&format!("{mag}*{power}"));
                    }
                }
                if out.is_empty() {
                    out.push('0');
                }
                out
            }
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fields() -> Vec<Field> {
        vec![
            Field::rational(),
            Field::default_prime(),
            Field::prime(7).unwrap(),
            Field::cyclotomic(12).unwrap(),
            Field::cyclotomic(5).unwrap(),
        ]
    }

    #[test]
    fn cyclotomic_polynomials() {
        let as_ints = |n| -> Vec<i64> {
            cyclotomic_polynomial(n).iter().map(|c| c.to_integer().try_into().unwrap()).collect()
        };
        assert_eq!(as_ints(1), vec![-1, 1]);
        assert_eq!(as_ints(4), vec![1, 0, 1]);
        assert_eq!(as_ints(6), vec![1, -1, 1]);
        assert_eq!(as_ints(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(60).len() - 1, 16);
    }

    #[test]
    fn roots_of_unity() {
        let f = Field::cyclotomic(4).unwrap();
        assert_eq!(f.root_of_unity(2).unwrap(), f.from_i64(-1));
        let f6 = Field::cyclotomic(6).unwrap();
        let z = f6.root_of_unity(1).unwrap();
        assert_eq!(f6.root_of_unity(2).unwrap(), f6.sub(&z, &f6.one()));
        for n in [1u32, 2, 3, 4, 6, 12] {
            let f = Field::cyclotomic(n).unwrap();
            assert!(f.is_one(&f.root_of_unity(0).unwrap()));
            let roots: Vec<Scalar> = (0..n as i64).map(|t| f.root_of_unity(t).unwrap()).collect();
            for (i, a) in roots.iter().enumerate() {
                for b in &roots[i + 1..] {
                    assert_ne!(a, b);
                }
            }
            let sum = roots.iter().fold(f.zero(), |acc, r| f.add(&acc, r));
            if n > 1 {
                assert!(f.is_zero(&sum));
            }
            assert!(f.is_one(&f.root_of_unity(n as i64).unwrap()));
        }
    }

    #[test]
    fn primitive_order() {
        let f = Field::cyclotomic(12).unwrap();
        for t in 0..12i64 {
            let xi = f.root_of_unity(t).unwrap();
            let order = (1..=12u64).find(|&k| f.is_one(&f.pow(&xi, k))).unwrap();
            assert_eq!(order, 12 / num_integer::gcd(12, t as u64));
        }
    }

    #[test]
    fn text_round_trip() {
        for f in fields() {
            for s in ["0", "1", "-3", "5/2"] {
                if matches!(f.spec(), FieldSpec::Prime(_)) && s.contains('/') && f.characteristic() == 2 {
                    continue;
                }
                let a = f.parse(s).unwrap();
                assert_eq!(f.parse(&f.format(&a)).unwrap(), a);
            }
        }
        let f = Field::cyclotomic(12).unwrap();
        let a = f.parse("1-z+3/2*z^3").unwrap();
        assert_eq!(f.format(&a), "1-z+3/2*z^3");
        assert_eq!(f.parse("z^4").unwrap(), f.parse("z^2-1").unwrap());
        let p = Field::prime(7).unwrap();
        assert_eq!(p.format(&p.parse("-1").unwrap()), "6 mod 7");
        assert!(p.parse("3 mod 5").is_err());
        assert_eq!(Field::rational().format(&Field::rational().parse("4/6").unwrap()), "2/3");
    }

    #[test]
    fn division_by_zero() {
        for f in fields() {
            assert_eq!(f.inv(&f.zero()), Err(Error::DivisionByZero));
        }
        assert!(Field::prime(8).is_err());
    }

    fn build(f: &Field, cs: &[(i64, i64)]) -> Scalar {
        match f.spec() {
            FieldSpec::Cyclotomic(_) => Scalar::Cyclotomic(
                (0..f.extension_degree())
                    .map(|k| BigRational::new(cs[k].0.into(), cs[k].1.into()))
                    .collect(),
            ),
            _ => f.from_rational(&BigRational::new(cs[0].0.into(), cs[0].1.into())).unwrap(),
        }
    }

    proptest! {
        #[test]
        fn field_axioms(
            which in 0usize..5,
            a in prop::collection::vec((-20i64..20, 1i64..6), 4),
            b in prop::collection::vec((-20i64..20, 1i64..6), 4),
            c in prop::collection::vec((-20i64..20, 1i64..6), 4),
        ) {
            let f = fields()[which].clone();
            let (a, b, c) = (build(&f, &a), build(&f, &b), build(&f, &c));
            let lhs = f.mul(&f.add(&a, &b), &c);
            let rhs = f.add(&f.mul(&a, &c), &f.mul(&b, &c));
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
            if !f.is_zero(&a) {
                prop_assert!(f.is_one(&f.mul(&a, &f.inv(&a).unwrap())));
            }
        }
    }
}
