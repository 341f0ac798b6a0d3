//! Table-driven arithmetic in GF(q²) together with its subfield GF(q).
//!
//! Elements are integer indices into a polynomial basis: the residue class
//! `c_0 + c_1 x + ... + c_{n-1} x^{n-1}` modulo the defining polynomial is
//! stored as `Σ c_i p^i`. Index `0` is zero and index `1` is one. Every
//! operation is a table lookup; the largest supported field has 256 elements.
//!
//! The subfield GF(q) is the fixed field of the Frobenius map `x ↦ x^q` and its
//! elements are addressed with the same indices as the big field. When a
//! GF(q)-value has to leave the crate (interchange files) it is written as its
//! *base position*: the rank of the element among the sorted subfield indices.
//! For prime `q` the base position of `c` is the integer `c` itself.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::FieldError;

/// An element of GF(q²), identified by its polynomial-basis index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(pub u8);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which field a projective object is defined over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    /// The subfield GF(q).
    Base,
    /// The full field GF(q²).
    Extension,
}

/// Parameters of a constructed field; this is what reports record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    /// Characteristic.
    pub p: u32,
    /// Degree of GF(q²) over GF(p), always even.
    pub degree: u32,
    /// Monic modulus, coefficients from the constant term upwards
    /// (`degree + 1` entries, last entry 1).
    pub modulus: Vec<u32>,
    /// Index of the primitive element (the class of `x`).
    pub primitive: FieldElement,
}

impl FieldSpec {
    /// Order of the subfield, `q = p^(degree/2)`.
    pub fn q(&self) -> usize {
        (self.p as usize).pow(self.degree / 2)
    }
}

/// GF(q²) with precomputed operation tables.
#[derive(Clone, Debug)]
pub struct Field {
    spec: FieldSpec,
    size: usize,
    q: usize,
    add: Vec<FieldElement>,
    mul: Vec<FieldElement>,
    neg: Vec<FieldElement>,
    inv: Vec<FieldElement>,
    frob: Vec<FieldElement>,
    exp: Vec<FieldElement>,
    log: Vec<u16>,
    all: Vec<FieldElement>,
    base: Vec<FieldElement>,
    base_pos: Vec<Option<u8>>,
    split: Vec<(FieldElement, FieldElement)>,
    join: Vec<FieldElement>,
}

/// Default moduli, indexed by `(p, degree)`.
const DEFAULT_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (3, 2, &[2, 1, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (5, 2, &[2, 1, 1]),
];

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Writes `q = p^e` if possible.
fn prime_power(q: usize) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)? as u32;
    let mut m = q;
    let mut e = 0;
    while m % p as usize == 0 {
        m /= p as usize;
        e += 1;
    }
    (m == 1).then_some((p, e))
}

fn digits(mut index: usize, p: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for d in out.iter_mut() {
        *d = index % p;
        index /= p;
    }
    out
}

fn undigits(d: &[usize], p: usize) -> usize {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Product of two residues modulo the monic `modulus`.
fn poly_mul_mod(a: &[usize], b: &[usize], modulus: &[u32], p: usize) -> Vec<usize> {
    let n = modulus.len() - 1;
    let mut prod = vec![0usize; 2 * n];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (n..2 * n).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (i, &m) in modulus[..n].iter().enumerate() {
            let t = &mut prod[k - n + i];
            *t = (*t + (p - c) * m as usize) % p;
        }
    }
    prod.truncate(n);
    prod
}

impl Field {
    /// GF(q²) with the default modulus for `q`, or the first primitive
    /// polynomial in lexicographic order when no default is listed.
    pub fn new(q: usize) -> Result<Field, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        let degree = 2 * e;
        if (p as usize).pow(degree) > 256 {
            return Err(FieldError::TooLarge(q));
        }
        let modulus = DEFAULT_MODULI
            .iter()
            .find(|(mp, md, _)| *mp == p && *md == degree)
            .map(|(_, _, m)| m.to_vec())
            .or_else(|| find_primitive_modulus(p, degree))
            .ok_or(FieldError::NoPrimitivePolynomial { p, degree })?;
        Field::with_modulus(p, degree, &modulus)
    }

    /// GF(p^degree) defined by an explicit monic modulus (constant term first).
    /// The class of `x` must be a primitive element.
    pub fn with_modulus(p: u32, degree: u32, modulus: &[u32]) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if degree == 0 || degree % 2 != 0 {
            return Err(FieldError::OddDegree(degree));
        }
        let size = (p as usize).checked_pow(degree).filter(|s| *s <= 256);
        let size = size.ok_or(FieldError::TooLarge((p as usize).pow(degree / 2)))?;
        if modulus.len() != degree as usize + 1
            || modulus[degree as usize] != 1
            || modulus.iter().any(|&c| c >= p)
        {
            return Err(FieldError::BadModulus);
        }
        let n = degree as usize;
        let pu = p as usize;
        let q = pu.pow(degree / 2);

        let mut add = vec![FieldElement::ZERO; size * size];
        let mut mul = vec![FieldElement::ZERO; size * size];
        let mut neg = vec![FieldElement::ZERO; size];
        for a in 0..size {
            let da = digits(a, pu, n);
            neg[a] = FieldElement(undigits(&da.iter().map(|&c| (pu - c) % pu).collect::<Vec<_>>(), pu) as u8);
            for b in 0..size {
                let db = digits(b, pu, n);
                let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % pu).collect();
                add[a * size + b] = FieldElement(undigits(&s, pu) as u8);
                mul[a * size + b] = FieldElement(undigits(&poly_mul_mod(&da, &db, modulus, pu), pu) as u8);
            }
        }

        // powers of x: primitivity means they run through every unit
        let x = pu;
        let mut exp = Vec::with_capacity(size - 1);
        let mut log = vec![u16::MAX; size];
        let mut cur = 1usize;
        for k in 0..size - 1 {
            if log[cur] != u16::MAX {
                return Err(FieldError::NotPrimitive);
            }
            log[cur] = k as u16;
            exp.push(FieldElement(cur as u8));
            cur = mul[cur * size + x].index();
        }
        if cur != 1 {
            return Err(FieldError::NotPrimitive);
        }

        let mut inv = vec![FieldElement::ZERO; size];
        for a in 1..size {
            inv[a] = exp[(size - 1 - log[a] as usize) % (size - 1)];
        }
        let mut frob = vec![FieldElement::ZERO; size];
        for a in 1..size {
            frob[a] = exp[(log[a] as usize * q) % (size - 1)];
        }

        let all: Vec<FieldElement> = (0..size).map(|i| FieldElement(i as u8)).collect();
        let base: Vec<FieldElement> = all.iter().copied().filter(|&a| frob[a.index()] == a).collect();
        let mut base_pos = vec![None; size];
        for (i, b) in base.iter().enumerate() {
            base_pos[b.index()] = Some(i as u8);
        }

        let mut field = Field {
            spec: FieldSpec { p, degree, modulus: modulus.to_vec(), primitive: FieldElement(x as u8) },
            size,
            q,
            add,
            mul,
            neg,
            inv,
            frob,
            exp,
            log,
            all,
            base,
            base_pos,
            split: vec![(FieldElement::ZERO, FieldElement::ZERO); size],
            join: vec![FieldElement::ZERO; q * q],
        };
        let g = field.primitive();
        for (i, &a) in field.base.clone().iter().enumerate() {
            for (j, &b) in field.base.clone().iter().enumerate() {
                let z = field.add(a, field.mul(b, g));
                field.split[z.index()] = (a, b);
                field.join[i * q + j] = z;
            }
        }
        Ok(field)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// Number of elements of GF(q²).
    pub fn size(&self) -> usize {
        self.size
    }

    /// Order of the subfield.
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.spec.p
    }

    pub fn primitive(&self) -> FieldElement {
        self.spec.primitive
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add[a.index() * self.size + b.index()]
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.neg[a.index()]
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.mul[a.index() * self.size + b.index()]
    }

    /// Multiplicative inverse; `inv(0)` is defined as 0.
    #[inline]
    pub fn inv(&self, a: FieldElement) -> FieldElement {
        self.inv[a.index()]
    }

    #[inline]
    pub fn div(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(!b.is_zero(), "division by zero");
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if a.is_zero() {
            return if e == 0 { FieldElement::ONE } else { FieldElement::ZERO };
        }
        let order = (self.size - 1) as u64;
        self.exp[((self.log[a.index()] as u64 * (e % order)) % order) as usize]
    }

    /// `g^k` for the primitive element `g`.
    pub fn exp(&self, k: usize) -> FieldElement {
        self.exp[k % (self.size - 1)]
    }

    /// Discrete logarithm to base `g`; `None` for zero.
    pub fn log(&self, a: FieldElement) -> Option<usize> {
        (!a.is_zero()).then(|| self.log[a.index()] as usize)
    }

    /// The Frobenius `x ↦ x^q`, i.e. conjugation over GF(q).
    #[inline]
    pub fn conj(&self, a: FieldElement) -> FieldElement {
        self.frob[a.index()]
    }

    /// Relative norm `x^(q+1)`.
    #[inline]
    pub fn norm(&self, a: FieldElement) -> FieldElement {
        self.mul(a, self.conj(a))
    }

    /// Relative trace `x + x^q`.
    #[inline]
    pub fn trace(&self, a: FieldElement) -> FieldElement {
        self.add(a, self.conj(a))
    }

    #[inline]
    pub fn in_subfield(&self, a: FieldElement) -> bool {
        self.conj(a) == a
    }

    /// Every element of the chosen field, in index order.
    pub fn elements(&self, level: Level) -> &[FieldElement] {
        match level {
            Level::Base => &self.base,
            Level::Extension => &self.all,
        }
    }

    /// Rank of a subfield element among the sorted subfield indices.
    pub fn base_position(&self, a: FieldElement) -> Option<usize> {
        self.base_pos[a.index()].map(usize::from)
    }

    pub fn from_base_position(&self, pos: usize) -> Option<FieldElement> {
        self.base.get(pos).copied()
    }

    /// Coordinates `(a, b)` over GF(q) with `x = a + b·g`.
    #[inline]
    pub fn split(&self, a: FieldElement) -> (FieldElement, FieldElement) {
        self.split[a.index()]
    }

    /// Inverse of [`Field::split`].
    #[inline]
    pub fn join(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (i, j) = (self.base_pos[a.index()], self.base_pos[b.index()]);
        match (i, j) {
            (Some(i), Some(j)) => self.join[i as usize * self.q + j as usize],
            _ => panic!("join expects subfield coordinates"),
        }
    }

    /// A generator of the norm-one subgroup, `g^(q-1)`.
    pub fn norm_one_generator(&self) -> FieldElement {
        self.exp(self.q - 1)
    }

    /// The `q+1` elements with norm 1, listed as successive powers of
    /// [`Field::norm_one_generator`] (so the first entry is 1).
    pub fn norm_one_subgroup(&self) -> Vec<FieldElement> {
        let z = self.norm_one_generator();
        let mut out = Vec::with_capacity(self.q + 1);
        let mut cur = FieldElement::ONE;
        for _ in 0..=self.q {
            out.push(cur);
            cur = self.mul(cur, z);
        }
        out
    }

    /// Position of `mu` in [`Field::norm_one_subgroup`].
    pub fn norm_one_position(&self, mu: FieldElement) -> Option<usize> {
        let k = self.log(mu)?;
        (k % (self.q - 1) == 0).then(|| k / (self.q - 1))
    }

    /// The fixed element ω with `N(ω) = -1`: 1 in even characteristic,
    /// `g^((q-1)/2)` otherwise.
    pub fn canonical_omega(&self) -> FieldElement {
        if self.spec.p == 2 {
            FieldElement::ONE
        } else {
            self.exp((self.q - 1) / 2)
        }
    }

    /// The element `2 = 1 + 1`.
    pub fn two(&self) -> FieldElement {
        self.add(FieldElement::ONE, FieldElement::ONE)
    }
}

/// Lexicographically first monic polynomial of the given degree whose root
/// is primitive.
pub fn find_primitive_modulus(p: u32, degree: u32) -> Option<Vec<u32>> {
    let lower = (p as usize).pow(degree);
    (0..lower).find_map(|tail| {
        let mut m: Vec<u32> = digits(tail, p as usize, degree as usize).into_iter().map(|d| d as u32).collect();
        m.push(1);
        Field::with_modulus(p, degree, &m).ok().map(|_| m)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &Field) -> FieldElement {
        f.primitive()
    }

    #[test]
    fn norm_examples() {
        let f = Field::new(2).unwrap();
        assert_eq!(f.norm(FieldElement::ZERO), FieldElement::ZERO);
        assert_eq!(f.norm(FieldElement::ONE), FieldElement::ONE);
        // g^3 = 1 in GF(4)
        assert_eq!(f.norm(g(&f)), FieldElement::ONE);
        assert_eq!(f.pow(g(&f), 3), FieldElement::ONE);
    }

    #[test]
    fn trace_examples() {
        let f = Field::new(2).unwrap();
        assert_eq!(f.trace(FieldElement::ZERO), FieldElement::ZERO);
        assert_eq!(f.trace(FieldElement::ONE), FieldElement::ZERO);
        // g + g^2 = g + (g + 1) = 1
        assert_eq!(f.trace(g(&f)), FieldElement::ONE);
    }

    #[test]
    fn subfield_examples() {
        let f2 = Field::new(2).unwrap();
        assert!(f2.in_subfield(FieldElement::ZERO));
        assert!(!f2.in_subfield(g(&f2)));
        let f3 = Field::new(3).unwrap();
        assert!(f3.in_subfield(f3.exp(4)));
        assert_eq!(f3.elements(Level::Base), &[FieldElement(0), FieldElement(1), FieldElement(2)]);
    }

    #[test]
    fn norm_one_subgroup_sizes() {
        let f2 = Field::new(2).unwrap();
        let s = f2.norm_one_subgroup();
        assert_eq!(s.len(), 3);
        let mut sorted = s.clone();
        sorted.sort();
        assert_eq!(sorted, alloc::vec![FieldElement(1), FieldElement(2), FieldElement(3)]);
        let f3 = Field::new(3).unwrap();
        let s3 = f3.norm_one_subgroup();
        assert_eq!(s3.len(), 4);
        assert_eq!(s3[0], FieldElement::ONE);
        for &x in &s3 {
            assert_eq!(f3.pow(x, 4), FieldElement::ONE);
        }
    }

    #[test]
    fn omega_choice() {
        let f2 = Field::new(2).unwrap();
        assert_eq!(f2.canonical_omega(), FieldElement::ONE);
        let f3 = Field::new(3).unwrap();
        let w = f3.canonical_omega();
        assert_eq!(w, g(&f3));
        assert_eq!(f3.pow(w, 4), FieldElement(2));
        for q in [2, 3, 4, 5] {
            let f = Field::new(q).unwrap();
            let w = f.canonical_omega();
            assert_eq!(f.add(FieldElement::ONE, f.norm(w)), FieldElement::ZERO, "q={q}");
        }
    }

    #[test]
    fn default_moduli_are_primitive() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let f = Field::new(q).unwrap();
            assert_eq!(f.q(), q);
            assert_eq!(f.size(), q * q);
        }
        assert_eq!(Field::new(3).unwrap().spec().modulus, alloc::vec![2, 1, 1]);
        assert_eq!(Field::new(4).unwrap().spec().modulus, alloc::vec![1, 1, 0, 0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Field::new(6).unwrap_err(), FieldError::NotPrimePower(6));
        assert_eq!(Field::new(17).unwrap_err(), FieldError::TooLarge(17));
        // x^2 + 1 is reducible over GF(2)
        assert_eq!(Field::with_modulus(2, 2, &[1, 0, 1]).unwrap_err(), FieldError::NotPrimitive);
        // x^2 + 1 over GF(3) is irreducible but x has order 4
        assert_eq!(Field::with_modulus(3, 2, &[1, 0, 1]).unwrap_err(), FieldError::NotPrimitive);
        assert_eq!(Field::with_modulus(3, 3, &[1, 0, 1, 1]).unwrap_err(), FieldError::OddDegree(3));
    }

    #[test]
    fn split_join_roundtrip() {
        for q in [2, 3, 4, 5] {
            let f = Field::new(q).unwrap();
            for &x in f.elements(Level::Extension) {
                let (a, b) = f.split(x);
                assert!(f.in_subfield(a) && f.in_subfield(b));
                assert_eq!(f.join(a, b), x);
            }
        }
    }

    #[test]
    fn exhaustive_field_laws() {
        for q in [2, 3, 4, 5] {
            let f = Field::new(q).unwrap();
            let all = f.elements(Level::Extension);
            let mut fixed = 0;
            for &x in all {
                assert_eq!(f.conj(f.conj(x)), x);
                if f.in_subfield(x) {
                    fixed += 1;
                }
                assert!(f.in_subfield(f.norm(x)));
                assert!(f.in_subfield(f.trace(x)));
                if !x.is_zero() {
                    assert_eq!(f.mul(x, f.inv(x)), FieldElement::ONE);
                }
                for &y in all {
                    assert_eq!(f.norm(f.mul(x, y)), f.mul(f.norm(x), f.norm(y)));
                    assert_eq!(f.trace(f.add(x, y)), f.add(f.trace(x), f.trace(y)));
                    assert_eq!(f.mul(x, y), f.mul(y, x));
                    assert_eq!(f.sub(f.add(x, y), y), x);
                }
            }
            assert_eq!(fixed, q);
            // fibres of the norm map
            for &c in f.elements(Level::Base) {
                let n = all.iter().filter(|&&x| f.norm(x) == c).count();
                assert_eq!(n, if c.is_zero() { 1 } else { q + 1 });
            }
            // trace is onto GF(q) with kernel of size q
            let kernel = all.iter().filter(|&&x| f.trace(x).is_zero()).count();
            assert_eq!(kernel, q);
        }
    }

    #[test]
    fn norm_one_positions() {
        let f = Field::new(4).unwrap();
        for (i, &mu) in f.norm_one_subgroup().iter().enumerate() {
            assert_eq!(f.norm_one_position(mu), Some(i));
        }
        assert_eq!(f.norm_one_position(f.primitive()), None);
    }
}
