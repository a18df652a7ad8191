//! Exact arithmetic in cyclotomic fields `Q(ζ_m)` and rings `Z[ζ_m]`.
//!
//! Elements are stored in the power basis `1, ζ, ..., ζ^{φ(m)-1}`, reduced
//! modulo the m-th cyclotomic polynomial, so equality is coefficient equality
//! once both operands live over the same `m`. Operands over different orders
//! are embedded into `Q(ζ_lcm)` first.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Coefficients of Φ_m, constant term first. Cached per `m`.
pub fn cyclotomic_poly(m: usize) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("cache lock").get(&m) {
        return p.clone();
    }
    assert!(m >= 1, "cyclotomic order must be positive");
    // Φ_m = (x^m - 1) / Π_{d | m, d < m} Φ_d
    let mut num = vec![0i64; m + 1];
    num[0] = -1;
    num[m] = 1;
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        num = exact_div_monic(&num, &cyclotomic_poly(d));
    }
    let p = Arc::new(num);
    cache.lock().expect("cache lock").insert(m, p.clone());
    p
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

pub fn euler_phi(m: usize) -> usize {
    cyclotomic_poly(m).len() - 1
}

/// An element of `Q(ζ_m)`.
#[derive(Clone, Debug)]
pub struct Cyclo {
    order: usize,
    coeffs: Vec<BigRational>,
}

impl Cyclo {
    pub fn zero() -> Self {
        Cyclo::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Cyclo::from_i64(1)
    }

    pub fn from_i64(v: i64) -> Self {
        Cyclo::from_rational(BigRational::from_integer(v.into()))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Cyclo {
            order: 1,
            coeffs: vec![r],
        }
    }

    /// `ζ_m^k` for any integer `k`.
    pub fn zeta_pow(m: usize, k: i64) -> Self {
        let e = k.rem_euclid(m as i64) as usize;
        let mut raw = vec![BigRational::zero(); e + 1];
        raw[e] = BigRational::one();
        Cyclo::reduce(m, raw)
    }

    /// Build from power-basis coefficients of any length, reducing mod Φ_m.
    pub fn from_coeffs(m: usize, coeffs: Vec<BigRational>) -> Self {
        Cyclo::reduce(m, coeffs)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn reduce(m: usize, mut raw: Vec<BigRational>) -> Self {
        let phi = cyclotomic_poly(m);
        let deg = phi.len() - 1;
        if raw.len() > deg {
            for i in (deg..raw.len()).rev() {
                let c = std::mem::take(&mut raw[i]);
                if c.is_zero() {
                    continue;
                }
                for (j, &p) in phi[..deg].iter().enumerate() {
                    if p != 0 {
                        raw[i - deg + j] -= &c * BigRational::from_integer(p.into());
                    }
                }
            }
        }
        raw.resize(deg, BigRational::zero());
        Cyclo {
            order: m,
            coeffs: raw,
        }
    }

    /// Re-express over `Q(ζ_target)`; `self.order` must divide `target`.
    pub fn embed(&self, target: usize) -> Cyclo {
        if target == self.order {
            return self.clone();
        }
        assert!(target.is_multiple_of(self.order), "cannot embed Q(ζ_{}) into Q(ζ_{target})", self.order);
        let step = target / self.order;
        let mut raw = vec![BigRational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[i * step] = c.clone();
        }
        Cyclo::reduce(target, raw)
    }

    fn common(&self, other: &Cyclo) -> (Cyclo, Cyclo) {
        let m = self.order.lcm(&other.order);
        (self.embed(m), other.embed(m))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, if the element is rational.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.coeffs[1.min(self.coeffs.len())..].iter().all(Zero::is_zero) {
            Some(self.coeffs.first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    /// Complex conjugation, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Cyclo {
        let m = self.order;
        let mut raw = vec![BigRational::zero(); m.max(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[(m - i) % m] += c;
        }
        Cyclo::reduce(m, raw)
    }

    pub fn scale(&self, r: &BigRational) -> Cyclo {
        Cyclo {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_m.
    pub fn inv(&self) -> Option<Cyclo> {
        if self.is_zero() {
            return None;
        }
        let m = self.order;
        let phi: Vec<BigRational> = cyclotomic_poly(m)
            .iter()
            .map(|&c| BigRational::from_integer(c.into()))
            .collect();
        // invariant: r0 ≡ s0·a, r1 ≡ s1·a (mod Φ)
        let (mut r0, mut r1) = (phi, trim(self.coeffs.clone()));
        let (mut s0, mut s1) = (Vec::<BigRational>::new(), vec![BigRational::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divmod(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        let c = r1[0].recip();
        let inv: Vec<BigRational> = s1.iter().map(|x| x * &c).collect();
        Some(Cyclo::reduce(m, inv))
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return (vec![BigRational::zero()], rem);
    }
    let lead = b.last().expect("nonzero divisor").clone();
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + b.len() - 1] / &lead;
        for (j, y) in b.iter().enumerate() {
            rem[i + j] -= &c * y;
        }
        quot[i] = c;
    }
    rem.truncate(b.len() - 1);
    if rem.is_empty() {
        rem.push(BigRational::zero());
    }
    (quot, trim(rem))
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclo {}

impl Add for &Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: &Cyclo) -> Cyclo {
        if self.order != rhs.order {
            let (a, b) = self.common(rhs);
            return &a + &b;
        }
        Cyclo {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for &Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: &Cyclo) -> Cyclo {
        self + &(-rhs)
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
        }
    }
}

impl Mul for &Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: &Cyclo) -> Cyclo {
        if self.order != rhs.order {
            let (a, b) = self.common(rhs);
            return &a * &b;
        }
        Cyclo::reduce(self.order, poly_mul(&self.coeffs, &rhs.coeffs))
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("{c}*z{}", self.order),
                _ => format!("{c}*z{}^{i}", self.order),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

impl std::str::FromStr for Cyclo {
    type Err = crate::error::Error;

    /// Sums of terms `c`, `c*zm`, `c*zm^k` or `zm^k` with rational `c`, as printed by `Display`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = || crate::error::Error::Parse(format!("bad cyclotomic number `{text}`"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut signed = String::with_capacity(compact.len() + 4);
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            if ch == '-' && !matches!(prev, None | Some('+' | '*' | '/' | '^')) {
                signed.push('+');
            }
            signed.push(ch);
            prev = Some(ch);
        }
        let mut total = Cyclo::zero();
        for term in signed.split('+') {
            if term.is_empty() {
                return Err(bad());
            }
            let (negative, body) = match term.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, term),
            };
            let (coeff, root) = match body.find('z') {
                Some(pos) => (body[..pos].trim_end_matches('*'), Some(&body[pos + 1..])),
                None => (body, None),
            };
            let mut value = match coeff {
                "" if root.is_some() => Cyclo::one(),
                c => Cyclo::from_rational(c.parse::<BigRational>().map_err(|_| bad())?),
            };
            if let Some(root) = root {
                let (m, k) = match root.split_once('^') {
                    Some((m, k)) => (m, k.parse::<i64>().map_err(|_| bad())?),
                    None => (root, 1),
                };
                let m: usize = m.parse().map_err(|_| bad())?;
                if m == 0 {
                    return Err(bad());
                }
                value = &value * &Cyclo::zeta_pow(m, k);
            }
            total = if negative { &total - &value } else { &total + &value };
        }
        Ok(total)
    }
}

/// Largest order handled by the fixed-size integer representation.
pub const MAX_FAST_ORDER: usize = 12;

/// An element of `Z[ζ_m]` with machine-integer coefficients, `m ≤ 12`.
///
/// Order 1 denotes a plain integer and combines with any order.
/// Arithmetic panics on overflow rather than wrapping.
#[derive(Clone, Copy, Debug)]
pub struct CycInt {
    order: u8,
    coeffs: [i64; MAX_FAST_ORDER],
}

impl CycInt {
    pub fn from_i64(v: i64) -> Self {
        let mut coeffs = [0; MAX_FAST_ORDER];
        coeffs[0] = v;
        CycInt { order: 1, coeffs }
    }

    pub fn zeta_pow(m: usize, k: i64) -> Self {
        assert!(
            (1..=MAX_FAST_ORDER).contains(&m),
            "order {m} exceeds the fast cyclotomic range"
        );
        let e = k.rem_euclid(m as i64) as usize;
        let mut raw = [0i64; 2 * MAX_FAST_ORDER];
        raw[e] = 1;
        CycInt::reduce(m, raw)
    }

    pub fn order(&self) -> usize {
        self.order as usize
    }

    /// Coefficients in the power basis `1, ζ, …, ζ^{φ(m)−1}`.
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs[..euler_phi(self.order())]
    }

    fn reduce(m: usize, mut raw: [i64; 2 * MAX_FAST_ORDER]) -> Self {
        let phi = fast_phi(m);
        let deg = phi.len() - 1;
        for i in (deg..2 * MAX_FAST_ORDER).rev() {
            let c = raw[i];
            if c == 0 {
                continue;
            }
            raw[i] = 0;
            for (j, &p) in phi[..deg].iter().enumerate() {
                raw[i - deg + j] = checked(raw[i - deg + j].checked_sub(c * p));
            }
        }
        let mut coeffs = [0; MAX_FAST_ORDER];
        coeffs.copy_from_slice(&raw[..MAX_FAST_ORDER]);
        CycInt {
            order: m as u8,
            coeffs,
        }
    }

    fn embed(&self, target: usize) -> CycInt {
        let m = self.order();
        if m == target {
            return *self;
        }
        assert!(target.is_multiple_of(m) && target <= MAX_FAST_ORDER, "incompatible cyclotomic orders");
        let step = target / m;
        let mut raw = [0i64; 2 * MAX_FAST_ORDER];
        for i in 0..euler_phi(m) {
            raw[i * step] = self.coeffs[i];
        }
        CycInt::reduce(target, raw)
    }

    fn common(&self, other: &CycInt) -> (CycInt, CycInt) {
        let m = self.order().lcm(&other.order());
        (self.embed(m), other.embed(m))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, rhs: &CycInt) -> CycInt {
        let (a, b) = if self.order == rhs.order {
            (*self, *rhs)
        } else {
            self.common(rhs)
        };
        let mut out = a;
        for (o, y) in out.coeffs.iter_mut().zip(&b.coeffs) {
            *o = checked(o.checked_add(*y));
        }
        out
    }

    pub fn neg(&self) -> CycInt {
        let mut out = *self;
        for c in &mut out.coeffs {
            *c = checked(c.checked_neg());
        }
        out
    }

    pub fn mul(&self, rhs: &CycInt) -> CycInt {
        if self.order == 1 && rhs.order == 1 {
            return CycInt::from_i64(checked(self.coeffs[0].checked_mul(rhs.coeffs[0])));
        }
        let (a, b) = if self.order == rhs.order {
            (*self, *rhs)
        } else {
            self.common(rhs)
        };
        let m = a.order();
        let deg = euler_phi(m);
        let mut raw = [0i64; 2 * MAX_FAST_ORDER];
        for i in 0..deg {
            if a.coeffs[i] == 0 {
                continue;
            }
            for j in 0..deg {
                let t = checked(a.coeffs[i].checked_mul(b.coeffs[j]));
                raw[i + j] = checked(raw[i + j].checked_add(t));
            }
        }
        CycInt::reduce(m, raw)
    }

    pub fn conj(&self) -> CycInt {
        let m = self.order();
        if m == 1 {
            return *self;
        }
        let mut raw = [0i64; 2 * MAX_FAST_ORDER];
        for i in 0..euler_phi(m) {
            raw[(m - i) % m] += self.coeffs[i];
        }
        CycInt::reduce(m, raw)
    }

    pub fn to_cyclo(&self) -> Cyclo {
        let m = self.order();
        let coeffs = self.coeffs[..euler_phi(m)]
            .iter()
            .map(|&c| BigRational::from_integer(c.into()))
            .collect();
        Cyclo::reduce(m, coeffs)
    }

    /// Exact equality as field elements.
    pub fn same(&self, other: &CycInt) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl PartialEq for CycInt {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for CycInt {}

fn checked(v: Option<i64>) -> i64 {
    v.expect("integer overflow in exact cyclotomic arithmetic")
}

fn fast_phi(m: usize) -> &'static [i64] {
    static TABLE: OnceLock<Vec<Vec<i64>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        (0..=MAX_FAST_ORDER)
            .map(|m| if m == 0 { vec![] } else { cyclotomic_poly(m).to_vec() })
            .collect()
    });
    &table[m]
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_cyclo().fmt(f)
    }
}

/// Render a rational compactly: integers without denominator.
pub fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(*cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(euler_phi(9), 6);
    }

    #[test]
    fn roots_of_unity() {
        for m in 1..=12 {
            // Φ_m(ζ) = 0
            let phi = cyclotomic_poly(m);
            let mut sum = Cyclo::zero();
            for (k, &c) in phi.iter().enumerate() {
                sum = &sum + &(&Cyclo::from_i64(c) * &Cyclo::zeta_pow(m, k as i64));
            }
            assert!(sum.is_zero(), "Φ_{m}(ζ) != 0");
            if m > 1 {
                let mut total = Cyclo::zero();
                for k in 0..m {
                    total = &total + &Cyclo::zeta_pow(m, k as i64);
                }
                assert!(total.is_zero());
            }
            let z = Cyclo::zeta_pow(m, 1);
            assert_eq!(z.conj(), Cyclo::zeta_pow(m, m as i64 - 1));
            assert_eq!(&z * &z.conj(), Cyclo::one());
        }
    }

    #[test]
    fn mixed_orders() {
        let minus_one = Cyclo::zeta_pow(2, 1);
        assert_eq!(minus_one, Cyclo::from_i64(-1));
        let w = Cyclo::zeta_pow(3, 1);
        let z6 = &minus_one * &w;
        assert_eq!(z6.order(), 6);
        assert_eq!(z6, Cyclo::zeta_pow(6, 5));
        assert_eq!(Cyclo::zeta_pow(4, 2), Cyclo::from_i64(-1));
    }

    #[test]
    fn inverses() {
        let a = Cyclo::from_coeffs(5, vec![q(1, 1), q(2, 3), q(0, 1), q(-1, 2)]);
        let inv = a.inv().unwrap();
        assert_eq!(&a * &inv, Cyclo::one());
        assert!(Cyclo::zero().inv().is_none());
        let r = Cyclo::from_rational(q(3, 7));
        assert_eq!(r.inv().unwrap(), Cyclo::from_rational(q(7, 3)));
        let one_minus_zeta = &Cyclo::one() - &Cyclo::zeta_pow(3, 1);
        assert_eq!(&one_minus_zeta * &one_minus_zeta.inv().unwrap(), Cyclo::one());
    }

    #[test]
    fn fast_ring_agrees_with_field() {
        for m in 1..=MAX_FAST_ORDER {
            for a in 0..m as i64 {
                for b in 0..m as i64 {
                    let x = CycInt::zeta_pow(m, a).add(&CycInt::from_i64(2));
                    let y = CycInt::zeta_pow(m, b).neg();
                    let fast = x.mul(&y).add(&x.conj());
                    let slow = &(&x.to_cyclo() * &y.to_cyclo()) + &x.to_cyclo().conj();
                    assert_eq!(fast.to_cyclo(), slow);
                }
            }
        }
        assert!(CycInt::zeta_pow(2, 1).same(&CycInt::from_i64(-1)));
    }

    #[test]
    fn parse_round_trips() {
        let samples = [
            Cyclo::zeta_pow(3, 1),
            Cyclo::zeta_pow(6, 5),
            Cyclo::from_rational(BigRational::new((-1).into(), 2.into())),
            &Cyclo::zeta_pow(4, 1) + &Cyclo::from_i64(3),
        ];
        for c in samples {
            assert_eq!(c.to_string().parse::<Cyclo>().unwrap(), c);
        }
        assert_eq!("z3 + z3^2".parse::<Cyclo>().unwrap(), Cyclo::from_i64(-1));
        assert_eq!("1 - z4^2".parse::<Cyclo>().unwrap(), Cyclo::from_i64(2));
        assert!("z".parse::<Cyclo>().is_err());
        assert!("1 +".parse::<Cyclo>().is_err());
        assert!("z0".parse::<Cyclo>().is_err());
    }
}
