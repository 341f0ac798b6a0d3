//! Points and subspaces of PG(d, F) for F = GF(q) or GF(q²).
//!
//! A [`Point`] is a nonzero vector whose first nonzero coordinate is 1; a
//! [`Subspace`] is stored by its reduced row echelon basis. Both forms are
//! unique, so equality, ordering and map keys work on the raw coordinates.

use alloc::vec::Vec;
use core::fmt;

use crate::galois::{Field, FieldElement, Level};

/// Longest coordinate vector handled by the linear algebra routines.
pub const MAX_LEN: usize = 12;

/// A coordinate vector of length at most [`MAX_LEN`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vector {
    len: u8,
    c: [FieldElement; MAX_LEN],
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.as_slice().iter().map(|x| x.0)).finish()
    }
}

impl Vector {
    pub fn zero(len: usize) -> Vector {
        assert!(len <= MAX_LEN, "vector length {len} exceeds {MAX_LEN}");
        Vector { len: len as u8, c: [FieldElement::ZERO; MAX_LEN] }
    }

    pub fn from_slice(xs: &[FieldElement]) -> Vector {
        let mut v = Vector::zero(xs.len());
        v.c[..xs.len()].copy_from_slice(xs);
        v
    }

    /// Builds a vector from raw element indices.
    pub fn from_indices(xs: &[u8]) -> Vector {
        let mut v = Vector::zero(xs.len());
        for (d, &x) in v.c.iter_mut().zip(xs) {
            *d = FieldElement(x);
        }
        v
    }

    /// The `i`-th standard basis vector.
    pub fn unit(len: usize, i: usize) -> Vector {
        let mut v = Vector::zero(len);
        v.c[i] = FieldElement::ONE;
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn as_slice(&self) -> &[FieldElement] {
        &self.c[..self.len as usize]
    }

    #[inline]
    pub fn get(&self, i: usize) -> FieldElement {
        debug_assert!(i < self.len());
        self.c[i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, x: FieldElement) {
        debug_assert!(i < self.len());
        self.c[i] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.as_slice().iter().all(|x| x.is_zero())
    }

    /// Index and value of the first nonzero coordinate.
    pub fn leading(&self) -> Option<(usize, FieldElement)> {
        self.as_slice().iter().copied().enumerate().find(|(_, x)| !x.is_zero())
    }

    pub fn add(&self, f: &Field, other: &Vector) -> Vector {
        debug_assert_eq!(self.len, other.len);
        let mut v = *self;
        for i in 0..self.len() {
            v.c[i] = f.add(self.c[i], other.c[i]);
        }
        v
    }

    pub fn sub(&self, f: &Field, other: &Vector) -> Vector {
        debug_assert_eq!(self.len, other.len);
        let mut v = *self;
        for i in 0..self.len() {
            v.c[i] = f.sub(self.c[i], other.c[i]);
        }
        v
    }

    pub fn scale(&self, f: &Field, s: FieldElement) -> Vector {
        let mut v = *self;
        for i in 0..self.len() {
            v.c[i] = f.mul(s, self.c[i]);
        }
        v
    }

    /// `self + s·other`.
    pub fn axpy(&self, f: &Field, s: FieldElement, other: &Vector) -> Vector {
        debug_assert_eq!(self.len, other.len);
        let mut v = *self;
        for i in 0..self.len() {
            v.c[i] = f.add(self.c[i], f.mul(s, other.c[i]));
        }
        v
    }

    /// Bilinear pairing `Σ x_i y_i`.
    pub fn dot(&self, f: &Field, other: &Vector) -> FieldElement {
        debug_assert_eq!(self.len, other.len);
        self.as_slice()
            .iter()
            .zip(other.as_slice())
            .fold(FieldElement::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
    }

    /// Entrywise Frobenius.
    pub fn conj(&self, f: &Field) -> Vector {
        let mut v = *self;
        for i in 0..self.len() {
            v.c[i] = f.conj(self.c[i]);
        }
        v
    }

    /// True when every coordinate lies in GF(q).
    pub fn in_subfield(&self, f: &Field) -> bool {
        self.as_slice().iter().all(|&x| f.in_subfield(x))
    }

    /// Truncates or zero-extends to `len` coordinates.
    pub fn resized(&self, len: usize) -> Vector {
        let mut v = Vector::zero(len);
        let n = len.min(self.len());
        v.c[..n].copy_from_slice(&self.c[..n]);
        v
    }

    /// The vector scaled so that its leading coordinate is 1.
    pub fn normalized(&self, f: &Field) -> Option<Vector> {
        let (_, lead) = self.leading()?;
        Some(self.scale(f, f.inv(lead)))
    }
}

/// A point of a projective space: a canonical representative of a 1-space.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Point(Vector);

impl Point {
    /// Canonicalises `v`; `None` for the zero vector.
    pub fn new(f: &Field, v: &Vector) -> Option<Point> {
        v.normalized(f).map(Point)
    }

    /// Wraps a vector that is already canonical.
    pub fn from_canonical(v: Vector) -> Point {
        debug_assert!(matches!(v.leading(), Some((_, FieldElement::ONE))));
        Point(v)
    }

    #[inline]
    pub fn vector(&self) -> &Vector {
        &self.0
    }

    pub fn coords(&self) -> &[FieldElement] {
        self.0.as_slice()
    }

    /// Projective dimension of the ambient space.
    pub fn ambient_dimension(&self) -> usize {
        self.0.len() - 1
    }
}

/// Row-reduces `rows` in place, dropping zero rows. Returns pivot columns.
pub fn rref(f: &Field, rows: &mut Vec<Vector>) -> Vec<usize> {
    let Some(width) = rows.first().map(Vector::len) else {
        return Vec::new();
    };
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        if r == rows.len() {
            break;
        }
        let Some(k) = (r..rows.len()).find(|&k| !rows[k].get(col).is_zero()) else {
            continue;
        };
        rows.swap(r, k);
        let lead = rows[r].get(col);
        rows[r] = rows[r].scale(f, f.inv(lead));
        let pivot_row = rows[r];
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r {
                let c = row.get(col);
                if !c.is_zero() {
                    *row = row.axpy(f, f.neg(c), &pivot_row);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : row·x = 0 for every row}` for vectors of length `width`.
pub fn nullspace(f: &Field, width: usize, rows: &[Vector]) -> Vec<Vector> {
    let mut m: Vec<Vector> = rows.to_vec();
    let pivots = rref(f, &mut m);
    let mut out = Vec::new();
    for free in (0..width).filter(|c| !pivots.contains(c)) {
        let mut v = Vector::zero(width);
        v.set(free, FieldElement::ONE);
        for (row, &pc) in m.iter().zip(&pivots) {
            v.set(pc, f.neg(row.get(free)));
        }
        out.push(v);
    }
    out
}

/// Rank of a list of vectors.
pub fn rank(f: &Field, vectors: &[Vector]) -> usize {
    let mut m = vectors.to_vec();
    rref(f, &mut m).len()
}

/// A subspace of a projective space, stored as a reduced echelon basis.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Subspace {
    width: u8,
    rows: Vec<Vector>,
}

impl Subspace {
    /// The span of `vectors` inside `F^width`.
    pub fn span(f: &Field, width: usize, vectors: impl IntoIterator<Item = Vector>) -> Subspace {
        let mut rows: Vec<Vector> = vectors.into_iter().collect();
        debug_assert!(rows.iter().all(|v| v.len() == width));
        rref(f, &mut rows);
        Subspace { width: width as u8, rows }
    }

    pub fn from_points(f: &Field, points: &[Point]) -> Subspace {
        let width = points.first().map(|p| p.vector().len()).expect("span of no points");
        Subspace::span(f, width, points.iter().map(|p| *p.vector()))
    }

    pub fn whole(width: usize) -> Subspace {
        Subspace { width: width as u8, rows: (0..width).map(|i| Vector::unit(width, i)).collect() }
    }

    /// Wraps rows already known to be in reduced echelon form.
    pub fn from_echelon(width: usize, rows: Vec<Vector>) -> Subspace {
        Subspace { width: width as u8, rows }
    }

    /// Length of coordinate vectors (projective ambient dimension + 1).
    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    /// Vector-space dimension.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Projective dimension (`-1` for the empty subspace).
    pub fn dimension(&self) -> isize {
        self.rows.len() as isize - 1
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r.leading().map(|(i, _)| i).unwrap_or(0))
    }

    /// Residue of `v` after eliminating the pivot columns.
    fn reduce(&self, f: &Field, v: &Vector) -> Vector {
        let mut w = *v;
        for row in &self.rows {
            let (pc, _) = row.leading().expect("echelon rows are nonzero");
            let c = w.get(pc);
            if !c.is_zero() {
                w = w.axpy(f, f.neg(c), row);
            }
        }
        w
    }

    pub fn contains_vector(&self, f: &Field, v: &Vector) -> bool {
        self.reduce(f, v).is_zero()
    }

    pub fn contains_point(&self, f: &Field, p: &Point) -> bool {
        self.contains_vector(f, p.vector())
    }

    pub fn contains(&self, f: &Field, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains_vector(f, r))
    }

    /// The smallest subspace containing both.
    pub fn join(&self, f: &Field, other: &Subspace) -> Subspace {
        Subspace::span(f, self.width(), self.rows.iter().chain(&other.rows).copied())
    }

    /// `{x : x·r = 0 for every basis row r}`.
    pub fn annihilator(&self, f: &Field) -> Subspace {
        Subspace::span(f, self.width(), nullspace(f, self.width(), &self.rows))
    }

    /// Intersection, computed as the annihilator of the sum of annihilators.
    pub fn meet(&self, f: &Field, other: &Subspace) -> Subspace {
        self.annihilator(f).join(f, &other.annihilator(f)).annihilator(f)
    }

    /// Every point of the subspace over the chosen field, deterministic order.
    pub fn points(&self, f: &Field, level: Level) -> Vec<Point> {
        if self.rows.is_empty() {
            return Vec::new();
        }
        let k = self.rows.len() - 1;
        enumerate_points(f, k, level)
            .map(|c| {
                let v = c.coords().iter().zip(&self.rows).fold(Vector::zero(self.width()), |acc, (&s, r)| {
                    acc.axpy(f, s, r)
                });
                Point::new(f, &v).expect("independent rows")
            })
            .collect()
    }

    /// Coordinates of `v` with respect to the echelon basis, if `v` lies in
    /// the subspace.
    pub fn coordinates(&self, f: &Field, v: &Vector) -> Option<Vector> {
        if !self.contains_vector(f, v) {
            return None;
        }
        let mut c = Vector::zero(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            let (pc, _) = row.leading()?;
            c.set(i, v.get(pc));
        }
        Some(c)
    }

    /// Maps a vector of basis coefficients back to ambient coordinates.
    pub fn combine(&self, f: &Field, coeffs: &Vector) -> Vector {
        coeffs.as_slice().iter().zip(&self.rows).fold(Vector::zero(self.width()), |acc, (&s, r)| acc.axpy(f, s, r))
    }

    /// All subspaces of projective dimension `k` lying inside this one.
    pub fn subspaces(&self, f: &Field, level: Level, k: usize) -> Vec<Subspace> {
        let d = self.rows.len() - 1;
        enumerate_subspaces(f, d, level, k)
            .map(|local| Subspace::span(f, self.width(), local.rows.iter().map(|r| self.combine(f, r))))
            .collect()
    }
}

/// Anything that can be tested for incidence with a subspace.
pub trait Incident {
    fn incident(&self, f: &Field, y: &Subspace) -> bool;
}

impl Incident for Point {
    fn incident(&self, f: &Field, y: &Subspace) -> bool {
        y.contains_point(f, self)
    }
}

impl Incident for Subspace {
    fn incident(&self, f: &Field, y: &Subspace) -> bool {
        y.contains(f, self)
    }
}

/// Containment test for a point or subspace `x` in `y`.
pub fn incident<T: Incident>(f: &Field, x: &T, y: &Subspace) -> bool {
    x.incident(f, y)
}

/// Canonical points of PG(d, F): the leading 1 moves right, and the trailing
/// coordinates run through the field elements in index order.
pub struct PointIter<'a> {
    elems: &'a [FieldElement],
    width: usize,
    lead: usize,
    counter: Vec<usize>,
    done: bool,
}

impl Iterator for PointIter<'_> {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        if self.done {
            return None;
        }
        let mut v = Vector::zero(self.width);
        v.set(self.lead, FieldElement::ONE);
        for (j, &c) in self.counter.iter().enumerate() {
            v.set(self.lead + 1 + j, self.elems[c]);
        }
        // advance the mixed-radix counter, last coordinate fastest
        let mut i = self.counter.len();
        loop {
            if i == 0 {
                self.lead += 1;
                if self.lead == self.width {
                    self.done = true;
                } else {
                    self.counter = alloc::vec![0; self.width - self.lead - 1];
                }
                break;
            }
            i -= 1;
            self.counter[i] += 1;
            if self.counter[i] < self.elems.len() {
                break;
            }
            self.counter[i] = 0;
        }
        Some(Point(v))
    }
}

/// Every point of PG(d, F).
pub fn enumerate_points(f: &Field, d: usize, level: Level) -> PointIter<'_> {
    let width = d + 1;
    assert!(width <= MAX_LEN);
    PointIter { elems: f.elements(level), width, lead: 0, counter: alloc::vec![0; d], done: false }
}

/// Subspaces of PG(d, F) of projective dimension `k`, produced directly as
/// reduced echelon forms: a choice of pivot columns plus an assignment of
/// every free entry to the right of each pivot.
pub struct SubspaceIter<'a> {
    elems: &'a [FieldElement],
    width: usize,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    counter: Vec<usize>,
    done: bool,
}

impl SubspaceIter<'_> {
    fn free_positions(pivots: &[usize], width: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (r, &pc) in pivots.iter().enumerate() {
            for col in pc + 1..width {
                if !pivots.contains(&col) {
                    out.push((r, col));
                }
            }
        }
        out
    }

    fn next_pivots(&mut self) -> bool {
        let k = self.pivots.len();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.pivots[i] < self.width - k + i {
                self.pivots[i] += 1;
                for j in i + 1..k {
                    self.pivots[j] = self.pivots[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }

    fn reset_free(&mut self) {
        self.free = Self::free_positions(&self.pivots, self.width);
        self.counter = alloc::vec![0; self.free.len()];
    }
}

impl Iterator for SubspaceIter<'_> {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.done {
            return None;
        }
        let mut rows: Vec<Vector> = self.pivots.iter().map(|&pc| Vector::unit(self.width, pc)).collect();
        for (&(r, col), &c) in self.free.iter().zip(&self.counter) {
            rows[r].set(col, self.elems[c]);
        }
        let mut i = self.counter.len();
        loop {
            if i == 0 {
                if self.next_pivots() {
                    self.reset_free();
                } else {
                    self.done = true;
                }
                break;
            }
            i -= 1;
            self.counter[i] += 1;
            if self.counter[i] < self.elems.len() {
                break;
            }
            self.counter[i] = 0;
        }
        Some(Subspace { width: self.width as u8, rows })
    }
}

/// Every `k`-dimensional projective subspace of PG(d, F).
pub fn enumerate_subspaces(f: &Field, d: usize, level: Level, k: usize) -> SubspaceIter<'_> {
    let width = d + 1;
    assert!(width <= MAX_LEN && k <= d);
    let pivots: Vec<usize> = (0..=k).collect();
    let free = SubspaceIter::free_positions(&pivots, width);
    let counter = alloc::vec![0; free.len()];
    SubspaceIter { elems: f.elements(level), width, pivots, free, counter, done: false }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    fn gaussian(n: u32, k: u32, q: u64) -> u64 {
        // independent product formula for the number of k-subspaces of F_q^n
        let mut num = 1u64;
        let mut den = 1u64;
        for i in 0..k {
            num *= q.pow(n - i) - 1;
            den *= q.pow(i + 1) - 1;
        }
        num / den
    }

    #[test]
    fn point_counts() {
        let f2 = Field::new(2).unwrap();
        assert_eq!(enumerate_points(&f2, 1, Level::Extension).count(), 5);
        assert_eq!(enumerate_points(&f2, 3, Level::Extension).count(), 85);
        assert_eq!(enumerate_points(&f2, 6, Level::Base).count(), 127);
        let pts: BTreeSet<Point> = enumerate_points(&f2, 3, Level::Extension).collect();
        assert_eq!(pts.len(), 85);
    }

    #[test]
    fn subspace_counts() {
        let f2 = Field::new(2).unwrap();
        assert_eq!(enumerate_subspaces(&f2, 2, Level::Base, 1).count(), 7);
        assert_eq!(enumerate_subspaces(&f2, 3, Level::Extension, 1).count(), 357);
        assert_eq!(gaussian(4, 2, 4), 357);
        assert_eq!(enumerate_subspaces(&f2, 6, Level::Base, 2).count(), 11811);
        assert_eq!(gaussian(7, 3, 2), 11811);
        let f3 = Field::new(3).unwrap();
        for (d, k) in [(3, 1), (4, 2), (5, 1), (3, 0)] {
            let n = enumerate_subspaces(&f3, d, Level::Base, k).count() as u64;
            assert_eq!(n, gaussian(d as u32 + 1, k as u32 + 1, 3));
        }
    }

    #[test]
    fn enumerated_subspaces_are_canonical() {
        let f = Field::new(2).unwrap();
        let all: Vec<Subspace> = enumerate_subspaces(&f, 4, Level::Base, 1).collect();
        let set: BTreeSet<&Subspace> = all.iter().collect();
        assert_eq!(set.len(), all.len());
        for s in &all {
            let again = Subspace::span(&f, s.width(), s.rows().iter().copied());
            assert_eq!(&again, s);
        }
    }

    #[test]
    fn span_dimensions() {
        let f = Field::new(2).unwrap();
        let p = |xs: &[u8]| Point::new(&f, &Vector::from_indices(xs)).unwrap();
        let a = p(&[1, 0, 0, 0]);
        let b = p(&[0, 1, 0, 0]);
        assert_eq!(Subspace::from_points(&f, &[a]).dimension(), 0);
        assert_eq!(Subspace::from_points(&f, &[a, b]).dimension(), 1);
        // a planar quadrangle
        let quad = [p(&[1, 0, 0, 0]), p(&[0, 1, 0, 0]), p(&[0, 0, 1, 0]), p(&[1, 1, 1, 0])];
        assert_eq!(Subspace::from_points(&f, &quad).dimension(), 2);
    }

    #[test]
    fn incidence_examples() {
        let f = Field::new(2).unwrap();
        let x = Point::new(&f, &Vector::from_indices(&[1, 2, 0, 3])).unwrap();
        let y = Point::new(&f, &Vector::from_indices(&[0, 1, 1, 0])).unwrap();
        let l = Subspace::from_points(&f, &[x, y]);
        assert!(incident(&f, &x, &l));
        let hyperplane = Subspace::span(&f, 4, (0..3).map(|i| Vector::unit(4, i)));
        assert!(!incident(&f, &x, &hyperplane));
        assert!(incident(&f, &y, &hyperplane));
    }

    #[test]
    fn membership_agrees_with_point_listing() {
        let f = Field::new(2).unwrap();
        let all: Vec<Point> = enumerate_points(&f, 3, Level::Extension).collect();
        for l in enumerate_subspaces(&f, 3, Level::Extension, 1).step_by(7) {
            let listed: BTreeSet<Point> = l.points(&f, Level::Extension).into_iter().collect();
            assert_eq!(listed.len(), 5);
            for p in &all {
                assert_eq!(l.contains_point(&f, p), listed.contains(p));
            }
        }
    }

    #[test]
    fn dimension_formula_exhaustive_pg3_2() {
        let f = Field::new(2).unwrap();
        let mut subs: Vec<Subspace> = Vec::new();
        for k in 0..3 {
            subs.extend(enumerate_subspaces(&f, 3, Level::Base, k));
        }
        for u in subs.iter().step_by(3) {
            for w in subs.iter().step_by(5) {
                let j = u.join(&f, w);
                let m = u.meet(&f, w);
                assert_eq!(j.dimension() + m.dimension(), u.dimension() + w.dimension());
                assert!(j.contains(&f, u) && j.contains(&f, w));
                assert!(u.contains(&f, &m) && w.contains(&f, &m));
            }
        }
    }

    #[test]
    fn coordinates_roundtrip() {
        let f = Field::new(3).unwrap();
        let s = enumerate_subspaces(&f, 5, Level::Extension, 2).nth(4000).unwrap();
        for p in s.points(&f, Level::Extension).iter().take(20) {
            let c = s.coordinates(&f, p.vector()).unwrap();
            assert_eq!(s.combine(&f, &c), *p.vector());
        }
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn vec_strategy(width: usize, size: u8) -> impl Strategy<Value = Vector> {
        proptest::collection::vec(0..size, width).prop_map(|xs| Vector::from_indices(&xs))
    }

    proptest! {
        #[test]
        fn canonicalisation_is_idempotent_and_scale_invariant(v in vec_strategy(5, 9), s in 1u8..9) {
            let f = Field::new(3).unwrap();
            if let Some(p) = Point::new(&f, &v) {
                prop_assert_eq!(Point::new(&f, p.vector()), Some(p));
                prop_assert_eq!(Point::new(&f, &v.scale(&f, FieldElement(s))), Some(p));
            } else {
                prop_assert!(v.is_zero());
            }
        }

        #[test]
        fn dimension_formula(a in proptest::collection::vec(vec_strategy(6, 4), 1..4),
                             b in proptest::collection::vec(vec_strategy(6, 4), 1..4)) {
            let f = Field::new(2).unwrap();
            let u = Subspace::span(&f, 6, a.iter().copied());
            let w = Subspace::span(&f, 6, b.iter().copied());
            let j = u.join(&f, &w);
            let m = u.meet(&f, &w);
            prop_assert_eq!(j.rank() + m.rank(), u.rank() + w.rank());
            prop_assert!(j.contains(&f, &u));
        }
    }
}
