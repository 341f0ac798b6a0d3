//! The Hermitian surface H(3,q²) for the form `⟨X,Y⟩ = Σ X_i Y_i^q`, the
//! Hermitian curve `O` cut out by the plane `π : X₃ = 0`, and the Baer
//! substructures living on it.
//!
//! Surface points, generators and Baer subgenerators are referred to by
//! `u32` indices into the tables held by [`HermitianSurface`]; a Baer
//! subgenerator's canonical key is the sorted list of its point indices.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::GeometryError;
use crate::galois::{Field, FieldElement, Level};
use crate::matrix::Matrix3;
use crate::projective::{enumerate_points, nullspace, Point, Subspace, Vector};

/// `⟨x, y⟩ = Σ x_i y_i^q`.
pub fn hermitian_product(f: &Field, x: &Vector, y: &Vector) -> FieldElement {
    x.dot(f, &y.conj(f))
}

pub fn is_isotropic(f: &Field, x: &Vector) -> bool {
    hermitian_product(f, x, x).is_zero()
}

/// The polar plane `{Y : ⟨x, Y⟩ = 0}` of a point of PG(3,q²) (or the polar
/// line of a point of the plane π when given three coordinates).
pub fn polar(f: &Field, x: &Point) -> Subspace {
    let c = x.vector().conj(f);
    Subspace::span(f, c.len(), nullspace(f, c.len(), &[c]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LineType {
    /// Totally isotropic, `q²+1` surface points.
    Generator,
    /// One surface point.
    Tangent,
    /// A Baer subline of `q+1` surface points.
    Hyperbolic,
}

/// Classifies a line of PG(3,q²) by how many surface points it carries.
pub fn line_type(f: &Field, line: &Subspace) -> LineType {
    let q = f.q();
    let n = line.points(f, Level::Extension).iter().filter(|p| is_isotropic(f, p.vector())).count();
    match n {
        _ if n == q * q + 1 => LineType::Generator,
        1 => LineType::Tangent,
        _ => {
            debug_assert_eq!(n, q + 1);
            LineType::Hyperbolic
        }
    }
}

/// `q+1` points of a line of PG(3,q²) forming a GF(q)-subline.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BaerSubline {
    host: Subspace,
    points: Vec<Point>,
}

impl BaerSubline {
    pub fn host(&self) -> &Subspace {
        &self.host
    }

    /// Sorted point list; doubles as the canonical key.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }
}

/// Solves `b = x·p + y·a` for the canonical vectors of three points; returns
/// `(x, y)` when `b` lies on the line `pa`.
fn line_coordinates(f: &Field, p: &Vector, a: &Vector, b: &Vector) -> Option<(FieldElement, FieldElement)> {
    let n = p.len();
    for i in 0..n {
        for j in i + 1..n {
            let det = f.sub(f.mul(p.get(i), a.get(j)), f.mul(p.get(j), a.get(i)));
            if det.is_zero() {
                continue;
            }
            let x = f.div(f.sub(f.mul(b.get(i), a.get(j)), f.mul(b.get(j), a.get(i))), det);
            let y = f.div(f.sub(f.mul(p.get(i), b.get(j)), f.mul(p.get(j), b.get(i))), det);
            let check = p.scale(f, x).axpy(f, y, a);
            return (check == *b).then_some((x, y));
        }
    }
    None
}

/// Vectors `(p, a')` with `⟨p⟩ = P`, `⟨a'⟩ = A` and `B = ⟨p + a'⟩`, so that the
/// Baer subline through `P, A, B` is `{⟨u·p + v·a'⟩ : (u:v) ∈ PG(1,q)}`.
pub fn baer_frame(f: &Field, p: &Point, a: &Point, b: &Point) -> Result<(Vector, Vector), GeometryError> {
    if p == a || p == b || a == b {
        return Err(GeometryError::Coincident);
    }
    let (x, y) = line_coordinates(f, p.vector(), a.vector(), b.vector()).ok_or(GeometryError::NotCollinear)?;
    Ok((*p.vector(), a.vector().scale(f, f.div(y, x))))
}

/// The unique Baer subline through three distinct collinear points.
pub fn baer_subline_through(f: &Field, p: &Point, a: &Point, b: &Point) -> Result<BaerSubline, GeometryError> {
    let (pv, av) = baer_frame(f, p, a, b)?;
    let mut points: Vec<Point> = Vec::with_capacity(f.q() + 1);
    points.push(*a);
    for &t in f.elements(Level::Base) {
        points.push(Point::new(f, &pv.axpy(f, t, &av)).expect("independent frame"));
    }
    points.sort();
    let host = Subspace::from_points(f, &[*p, *a]);
    Ok(BaerSubline { host, points })
}

/// The Baer subplane spanned by two Baer sublines that share exactly one
/// point and lie on distinct lines. Point list is sorted.
pub fn baer_subplane_span(f: &Field, b: &[Point], b2: &[Point]) -> Result<Vec<Point>, GeometryError> {
    let common: Vec<&Point> = b.iter().filter(|x| b2.contains(x)).collect();
    if common.len() != 1 || b.len() < 3 || b2.len() < 3 {
        return Err(GeometryError::BadSublinePair);
    }
    let p = *common[0];
    let mut rest1 = b.iter().filter(|x| **x != p);
    let mut rest2 = b2.iter().filter(|x| **x != p);
    let (a, d) = (rest1.next().unwrap(), rest1.next().unwrap());
    let (c, e) = (rest2.next().unwrap(), rest2.next().unwrap());
    if Subspace::from_points(f, &[p, *a]) == Subspace::from_points(f, &[p, *c]) {
        return Err(GeometryError::BadSublinePair);
    }
    let (pv, av) = baer_frame(f, &p, a, d)?;
    let (_, cv) = baer_frame(f, &p, c, e)?;
    let mut points: Vec<Point> = enumerate_points(f, 2, Level::Base)
        .map(|w| {
            let v = pv.scale(f, w.coords()[0]).axpy(f, w.coords()[1], &av).axpy(f, w.coords()[2], &cv);
            Point::new(f, &v).expect("frame spans a plane")
        })
        .collect();
    points.sort();
    Ok(points)
}

/// A generator (totally isotropic line) with its surface point indices.
#[derive(Clone, Debug)]
pub struct Generator {
    pub line: Subspace,
    /// Sorted indices of its `q²+1` points.
    pub points: Vec<u32>,
    /// Its unique point on the curve `O`.
    pub curve_point: u32,
}

/// A Baer subline contained in a generator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BaerSubgenerator {
    /// Sorted point indices: the canonical key.
    pub points: Vec<u32>,
    /// Index of the host generator.
    pub host: u32,
    /// Its point on `O`, if any.
    pub curve_point: Option<u32>,
}

/// A Baer subplane together with how it sits on the surface.
#[derive(Clone, Debug)]
pub struct BaerSubplane {
    pub points: Vec<Point>,
    /// Every point lies on the surface.
    pub fully_contained: bool,
    /// Number of its points on `O`.
    pub curve_points: usize,
}

/// Rank-2 Hermitian Gram matrix of a dual Baer subline of π with its vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DualBaerMatrix {
    pub matrix: Matrix3,
    /// The vertex as a point of π (three coordinates).
    pub vertex: Point,
}

impl DualBaerMatrix {
    /// Scales by the element of GF(q)* that gives the first nonzero entry (row
    /// major) the smallest index in its GF(q)*-coset; the entry becomes 1
    /// whenever it lies in GF(q).
    pub fn canonical_scaling(f: &Field, m: &Matrix3) -> Matrix3 {
        let lead = m.0.iter().flatten().copied().find(|x| !x.is_zero());
        let Some(lead) = lead else { return *m };
        let c = f.elements(Level::Base)
            .iter()
            .copied()
            .filter(|c| !c.is_zero())
            .min_by_key(|&c| f.mul(c, lead))
            .expect("GF(q)* is nonempty");
        m.scale(f, c)
    }

    /// Points `Y` of π with `Y U Y^q = 0`.
    pub fn isotropic_points(&self, f: &Field) -> Vec<Point> {
        enumerate_points(f, 2, Level::Extension)
            .filter(|y| self.matrix.form(f, y.vector(), y.vector()).is_zero())
            .collect()
    }
}

/// H(3,q²) with cached points, generators and Baer subgenerators meeting `O`.
#[derive(Clone, Debug)]
pub struct HermitianSurface {
    field: Field,
    points: Vec<Point>,
    index: BTreeMap<Point, u32>,
    on_curve: Vec<bool>,
    curve: Vec<u32>,
    affine: Vec<u32>,
    generators: Vec<Generator>,
    generator_index: BTreeMap<Subspace, u32>,
    generators_through: Vec<Vec<u32>>,
    subgenerators: Vec<BaerSubgenerator>,
    subgenerator_index: BTreeMap<Vec<u32>, u32>,
    subgenerators_through: Vec<Vec<u32>>,
}

impl HermitianSurface {
    pub fn new(field: Field) -> HermitianSurface {
        let f = &field;
        let points: Vec<Point> =
            enumerate_points(f, 3, Level::Extension).filter(|p| is_isotropic(f, p.vector())).collect();
        let index: BTreeMap<Point, u32> = points.iter().enumerate().map(|(i, p)| (*p, i as u32)).collect();
        let on_curve: Vec<bool> = points.iter().map(|p| p.coords()[3].is_zero()).collect();
        let curve: Vec<u32> = (0..points.len() as u32).filter(|&i| on_curve[i as usize]).collect();
        let affine: Vec<u32> = (0..points.len() as u32).filter(|&i| !on_curve[i as usize]).collect();

        // each generator meets π in exactly one point of O
        let mut generators = Vec::new();
        let mut generator_index = BTreeMap::new();
        for &l in &curve {
            let lp = points[l as usize];
            for &y in &affine {
                let yp = points[y as usize];
                if !hermitian_product(f, lp.vector(), yp.vector()).is_zero() {
                    continue;
                }
                let line = Subspace::from_points(f, &[lp, yp]);
                if generator_index.contains_key(&line) {
                    continue;
                }
                let mut pts: Vec<u32> =
                    line.points(f, Level::Extension).iter().map(|p| index[p]).collect();
                pts.sort_unstable();
                generator_index.insert(line.clone(), generators.len() as u32);
                generators.push(Generator { line, points: pts, curve_point: l });
            }
        }
        let mut generators_through = alloc::vec![Vec::new(); points.len()];
        for (gi, g) in generators.iter().enumerate() {
            for &p in &g.points {
                generators_through[p as usize].push(gi as u32);
            }
        }

        let mut surface = HermitianSurface {
            field,
            points,
            index,
            on_curve,
            curve,
            affine,
            generators,
            generator_index,
            generators_through,
            subgenerators: Vec::new(),
            subgenerator_index: BTreeMap::new(),
            subgenerators_through: Vec::new(),
        };
        surface.build_subgenerators();
        surface
    }

    fn build_subgenerators(&mut self) {
        let f = &self.field;
        let mut subs = Vec::new();
        let mut idx = BTreeMap::new();
        for (gi, g) in self.generators.iter().enumerate() {
            let l = self.points[g.curve_point as usize];
            let affine: Vec<u32> = g.points.iter().copied().filter(|&p| p != g.curve_point).collect();
            for (i, &a) in affine.iter().enumerate() {
                for &b in &affine[i + 1..] {
                    let s = baer_subline_through(f, &l, &self.points[a as usize], &self.points[b as usize])
                        .expect("distinct points of a generator");
                    let mut key: Vec<u32> = s.points.iter().map(|p| self.index[p]).collect();
                    key.sort_unstable();
                    if idx.contains_key(&key) {
                        continue;
                    }
                    idx.insert(key.clone(), subs.len() as u32);
                    subs.push(BaerSubgenerator { points: key, host: gi as u32, curve_point: Some(g.curve_point) });
                }
            }
        }
        let mut through = alloc::vec![Vec::new(); self.points.len()];
        for (si, s) in subs.iter().enumerate() {
            for &p in &s.points {
                through[p as usize].push(si as u32);
            }
        }
        self.subgenerators = subs;
        self.subgenerator_index = idx;
        self.subgenerators_through = through;
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> usize {
        self.field.q()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: u32) -> &Point {
        &self.points[i as usize]
    }

    pub fn index_of(&self, p: &Point) -> Option<u32> {
        self.index.get(p).copied()
    }

    /// Indices of the points of `O`, in enumeration order.
    pub fn curve(&self) -> &[u32] {
        &self.curve
    }

    /// Indices of the surface points off `O`.
    pub fn affine(&self) -> &[u32] {
        &self.affine
    }

    pub fn on_curve(&self, i: u32) -> bool {
        self.on_curve[i as usize]
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_of(&self, line: &Subspace) -> Option<u32> {
        self.generator_index.get(line).copied()
    }

    pub fn generators_through(&self, p: u32) -> &[u32] {
        &self.generators_through[p as usize]
    }

    /// Baer subgenerators with a point on `O`, grouped by host generator.
    pub fn subgenerators(&self) -> &[BaerSubgenerator] {
        &self.subgenerators
    }

    pub fn subgenerator(&self, i: u32) -> &BaerSubgenerator {
        &self.subgenerators[i as usize]
    }

    /// Looks up a Baer subgenerator meeting `O` by its sorted point key.
    pub fn subgenerator_index(&self, key: &[u32]) -> Option<u32> {
        self.subgenerator_index.get(key).copied()
    }

    /// Baer subgenerators meeting `O` that contain the given point.
    pub fn subgenerators_through(&self, p: u32) -> &[u32] {
        &self.subgenerators_through[p as usize]
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.index.contains_key(p)
    }

    /// Every Baer subgenerator, either those meeting `O` or those missing it.
    pub fn enumerate_baer_subgenerators(&self, with_curve_point: bool) -> alloc::boxed::Box<dyn Iterator<Item = BaerSubgenerator> + '_> {
        if with_curve_point {
            return alloc::boxed::Box::new(self.subgenerators.iter().cloned());
        }
        let f = &self.field;
        let mut out = Vec::new();
        for (gi, g) in self.generators.iter().enumerate() {
            let affine: Vec<u32> = g.points.iter().copied().filter(|&p| p != g.curve_point).collect();
            let mut seen = alloc::collections::BTreeSet::new();
            for (i, &a) in affine.iter().enumerate() {
                for (j, &b) in affine.iter().enumerate().skip(i + 1) {
                    for &c in &affine[j + 1..] {
                        let s = baer_subline_through(f, self.point(a), self.point(b), self.point(c))
                            .expect("distinct points of a generator");
                        let mut key: Vec<u32> = s.points.iter().map(|p| self.index[p]).collect();
                        key.sort_unstable();
                        if key.contains(&g.curve_point) || !seen.insert(key.clone()) {
                            continue;
                        }
                        out.push(BaerSubgenerator { points: key, host: gi as u32, curve_point: None });
                    }
                }
            }
        }
        alloc::boxed::Box::new(out.into_iter())
    }

    /// The Baer subline with explicit points for a subgenerator.
    pub fn subline_of(&self, b: &BaerSubgenerator) -> BaerSubline {
        let mut points: Vec<Point> = b.points.iter().map(|&i| *self.point(i)).collect();
        points.sort();
        BaerSubline { host: self.generators[b.host as usize].line.clone(), points }
    }

    /// Baer subplane spanned by two subgenerators meeting in one point on
    /// distinct generators.
    pub fn baer_subplane_span(&self, b: &BaerSubgenerator, b2: &BaerSubgenerator) -> Result<BaerSubplane, GeometryError> {
        if b.host == b2.host {
            return Err(GeometryError::BadSublinePair);
        }
        let s1 = self.subline_of(b);
        let s2 = self.subline_of(b2);
        let points = baer_subplane_span(&self.field, s1.points(), s2.points())?;
        Ok(self.describe_subplane(points))
    }

    pub fn describe_subplane(&self, points: Vec<Point>) -> BaerSubplane {
        let fully_contained = points.iter().all(|p| self.contains(p));
        let curve_points = points.iter().filter(|p| self.index_of(p).is_some_and(|i| self.on_curve(i))).count();
        BaerSubplane { points, fully_contained, curve_points }
    }

    /// The Gram matrix of the dual Baer subline cut out on π by the polar
    /// planes of the points of `b`, canonically scaled.
    pub fn dual_matrix_of(&self, b: &BaerSubgenerator) -> Result<DualBaerMatrix, GeometryError> {
        let f = &self.field;
        let l = b.curve_point.ok_or(GeometryError::NoCurvePoint)?;
        let lv = self.point(l).vector().resized(3);
        let vertex = Point::new(f, &lv).expect("curve point lies in π");
        let g = f.primitive();

        // unknowns over GF(q): u00 u11 u22 | a01 b01 | a02 b02 | a12 b12
        // with U_ij = a_ij + b_ij·g above the diagonal
        const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];
        let mut rows: Vec<Vector> = Vec::new();
        for &x in &b.points {
            let xv = self.point(x).vector().resized(3).conj(f);
            // a point Y ≠ L on the trace line {Y : Σ Y_i X_i^q = 0}
            let line = nullspace(f, 3, &[xv]);
            let y = line
                .iter()
                .find(|v| Subspace::span(f, 3, [**v, lv]).rank() == 2)
                .copied()
                .ok_or_else(|| GeometryError::Certification(format!("trace line of point {x} degenerate")))?;
            let mut row = Vector::zero(9);
            for i in 0..3 {
                row.set(i, f.norm(y.get(i)));
            }
            for (k, &(i, j)) in PAIRS.iter().enumerate() {
                let w = f.mul(y.get(i), f.conj(y.get(j)));
                row.set(3 + 2 * k, f.trace(w));
                row.set(4 + 2 * k, f.trace(f.mul(w, g)));
            }
            rows.push(row);
        }
        // radical: L·U = 0, split into GF(q)-coordinates
        for j in 0..3 {
            let mut coeff = [FieldElement::ZERO; 9];
            coeff[j] = lv.get(j);
            for (k, &(r, c)) in PAIRS.iter().enumerate() {
                if c == j {
                    // entry U_rj = a + b g in column j, row r
                    coeff[3 + 2 * k] = f.add(coeff[3 + 2 * k], lv.get(r));
                    coeff[4 + 2 * k] = f.add(coeff[4 + 2 * k], f.mul(lv.get(r), g));
                }
                if r == j {
                    // entry U_cj = a + b g^q in column j, row c
                    coeff[3 + 2 * k] = f.add(coeff[3 + 2 * k], lv.get(c));
                    coeff[4 + 2 * k] = f.add(coeff[4 + 2 * k], f.mul(lv.get(c), f.conj(g)));
                }
            }
            let mut re = Vector::zero(9);
            let mut im = Vector::zero(9);
            for (t, &c) in coeff.iter().enumerate() {
                let (a, bb) = f.split(c);
                re.set(t, a);
                im.set(t, bb);
            }
            rows.push(re);
            rows.push(im);
        }
        let sol = nullspace(f, 9, &rows);
        if sol.len() != 1 {
            return Err(GeometryError::Certification(format!(
                "dual Baer matrix solution space has dimension {}",
                sol.len()
            )));
        }
        let s = sol[0];
        let mut m = Matrix3::ZERO;
        for i in 0..3 {
            m.0[i][i] = s.get(i);
        }
        for (k, &(i, j)) in PAIRS.iter().enumerate() {
            let z = f.join(s.get(3 + 2 * k), s.get(4 + 2 * k));
            m.0[i][j] = z;
            m.0[j][i] = f.conj(z);
        }
        let matrix = DualBaerMatrix::canonical_scaling(f, &m);
        if !matrix.is_hermitian(f) || matrix.rank(f) != 2 || !matrix.apply(f, &lv).is_zero() {
            return Err(GeometryError::Certification(format!("bad dual Baer matrix for subgenerator at point {l}")));
        }
        Ok(DualBaerMatrix { matrix, vertex })
    }
}
