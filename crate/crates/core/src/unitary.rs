//! GU₃(q) and SU₃(q) acting on H(3,q²) through `M_A = diag(A, 1)`, their
//! orbits on Baer subgenerators meeting `O`, and the norm classes.
//!
//! Group elements act on row vectors: `X ↦ X·M_A`. A dual Baer matrix moves
//! as `U ↦ A⁻¹UA`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::GeometryError;
use crate::galois::{Field, FieldElement, Level};
use crate::hermitian::{hermitian_product, DualBaerMatrix, HermitianSurface};
use crate::matrix::Matrix3;
use crate::projective::{enumerate_points, Point, Vector};

/// `A·(A^q)^T = I`.
pub fn is_unitary(f: &Field, m: &Matrix3) -> bool {
    m.mul(f, &m.conj_transpose(f)) == Matrix3::identity()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnitaryMatrix3 {
    matrix: Matrix3,
    det: FieldElement,
}

impl UnitaryMatrix3 {
    pub fn new(f: &Field, matrix: Matrix3) -> Result<UnitaryMatrix3, GeometryError> {
        if !is_unitary(f, &matrix) {
            return Err(GeometryError::Certification(format!("matrix {matrix:?} is not unitary")));
        }
        Ok(UnitaryMatrix3 { matrix, det: matrix.det(f) })
    }

    pub fn identity() -> UnitaryMatrix3 {
        UnitaryMatrix3 { matrix: Matrix3::identity(), det: FieldElement::ONE }
    }

    pub fn matrix(&self) -> &Matrix3 {
        &self.matrix
    }

    pub fn det(&self) -> FieldElement {
        self.det
    }

    pub fn mul(&self, f: &Field, other: &UnitaryMatrix3) -> UnitaryMatrix3 {
        UnitaryMatrix3 { matrix: self.matrix.mul(f, &other.matrix), det: f.mul(self.det, other.det) }
    }

    pub fn inverse(&self, f: &Field) -> UnitaryMatrix3 {
        UnitaryMatrix3 { matrix: self.matrix.conj_transpose(f), det: f.conj(self.det) }
    }

    /// Image of a point of PG(3,q²) under `M_A`.
    pub fn apply(&self, f: &Field, p: &Point) -> Point {
        Point::new(f, &self.matrix.apply_affine(f, p.vector())).expect("invertible")
    }

    /// `A⁻¹UA`.
    pub fn transform_dual(&self, f: &Field, u: &Matrix3) -> Matrix3 {
        self.inverse(f).matrix.mul(f, u).mul(f, &self.matrix)
    }
}

/// The unitary reflection `x ↦ x − (1−λ)(⟨x,v⟩/⟨v,v⟩)v`, with determinant `λ`.
pub fn reflection(f: &Field, v: &Vector, lambda: FieldElement) -> Result<UnitaryMatrix3, GeometryError> {
    let h = hermitian_product(f, v, v);
    if h.is_zero() {
        return Err(GeometryError::Isotropic);
    }
    if f.norm(lambda) != FieldElement::ONE {
        return Err(GeometryError::NotNormOne);
    }
    let c = f.div(f.sub(FieldElement::ONE, lambda), h);
    let vq = v.conj(f);
    let mut m = Matrix3::identity();
    for i in 0..3 {
        for j in 0..3 {
            m.0[i][j] = f.sub(m.0[i][j], f.mul(c, f.mul(vq.get(i), v.get(j))));
        }
    }
    UnitaryMatrix3::new(f, m)
}

/// Reflection vectors: canonical vectors of GF(q²)³ with entries in `{0, 1, g}`
/// that are non-isotropic, in enumeration order. With `full`, every canonical
/// non-isotropic vector.
pub fn reflection_vectors(f: &Field, full: bool) -> Vec<Vector> {
    let allowed = [FieldElement::ZERO, FieldElement::ONE, f.primitive()];
    enumerate_points(f, 2, Level::Extension)
        .map(|p| *p.vector())
        .filter(|v| full || v.as_slice().iter().all(|x| allowed.contains(x)))
        .filter(|v| !hermitian_product(f, v, v).is_zero())
        .collect()
}

/// Generators for the actions of GU₃(q) and SU₃(q), each listed with the
/// induced permutation of surface points.
#[derive(Clone, Debug)]
pub struct GroupAction {
    gens: Vec<UnitaryMatrix3>,
    perms: Vec<Vec<u32>>,
}

impl GroupAction {
    pub fn new(surface: &HermitianSurface, gens: Vec<UnitaryMatrix3>) -> GroupAction {
        let perms = gens.iter().map(|g| point_permutation(surface, g)).collect();
        GroupAction { gens, perms }
    }

    pub fn generators(&self) -> &[UnitaryMatrix3] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn permutation(&self, g: usize) -> &[u32] {
        &self.perms[g]
    }

    /// Same generators in the opposite order.
    pub fn reversed(&self) -> GroupAction {
        GroupAction {
            gens: self.gens.iter().rev().copied().collect(),
            perms: self.perms.iter().rev().cloned().collect(),
        }
    }
}

/// The permutation of surface points induced by `M_A`.
pub fn point_permutation(surface: &HermitianSurface, a: &UnitaryMatrix3) -> Vec<u32> {
    let f = surface.field();
    surface
        .points()
        .iter()
        .map(|p| surface.index_of(&a.apply(f, p)).expect("unitary maps fix the surface"))
        .collect()
}

/// Image of a subgenerator meeting `O` under a point permutation.
pub fn image_of_subgenerator(surface: &HermitianSurface, perm: &[u32], b: u32) -> u32 {
    let mut key: Vec<u32> = surface.subgenerator(b).points.iter().map(|&p| perm[p as usize]).collect();
    key.sort_unstable();
    surface.subgenerator_index(&key).expect("G_O permutes subgenerators meeting O")
}

fn point_orbit(action: &GroupAction, start: u32, n: usize) -> Vec<u32> {
    let mut seen = vec![false; n];
    seen[start as usize] = true;
    let mut orbit = vec![start];
    let mut i = 0;
    while i < orbit.len() {
        let x = orbit[i];
        for g in 0..action.len() {
            let y = action.perms[g][x as usize];
            if !seen[y as usize] {
                seen[y as usize] = true;
                orbit.push(y);
            }
        }
        i += 1;
    }
    orbit
}

/// Schreier-vector orbit of a subgenerator meeting `O`.
#[derive(Clone, Debug)]
pub struct OrbitTable {
    seed: u32,
    /// `(parent, generator)` for each reached subgenerator; the seed maps to itself.
    parent: Vec<Option<(u32, u16)>>,
    /// Subgenerator indices in BFS order.
    order: Vec<u32>,
    dets: Vec<FieldElement>,
}

impl OrbitTable {
    pub fn seed(&self) -> u32 {
        self.seed
    }

    pub fn orbit(&self) -> &[u32] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn contains(&self, b: u32) -> bool {
        self.parent[b as usize].is_some()
    }

    /// Generator indices whose product carries the seed to `b`, applied left
    /// to right.
    pub fn word(&self, b: u32) -> Option<Vec<u16>> {
        let mut word = Vec::new();
        let mut x = b;
        loop {
            let (p, g) = self.parent[x as usize]?;
            if x == self.seed {
                break;
            }
            word.push(g);
            x = p;
        }
        word.reverse();
        Some(word)
    }

    /// Product of the generator determinants along the transporter word.
    pub fn word_det(&self, f: &Field, b: u32) -> Option<FieldElement> {
        let word = self.word(b)?;
        Some(word.iter().fold(FieldElement::ONE, |acc, &g| f.mul(acc, self.dets[g as usize])))
    }
}

pub fn orbit_with_transporters(surface: &HermitianSurface, action: &GroupAction, seed: u32) -> OrbitTable {
    let n = surface.subgenerators().len();
    let mut parent = vec![None; n];
    parent[seed as usize] = Some((seed, 0));
    let mut order = vec![seed];
    let mut i = 0;
    while i < order.len() {
        let b = order[i];
        for g in 0..action.len() {
            let c = image_of_subgenerator(surface, &action.perms[g], b);
            if parent[c as usize].is_none() {
                parent[c as usize] = Some((b, g as u16));
                order.push(c);
            }
        }
        i += 1;
    }
    OrbitTable { seed, parent, order, dets: action.gens.iter().map(|g| g.det()).collect() }
}

/// The subgenerator of `ℓ₀ = ⟨(1,ω,0,0),(0,0,1,ω)⟩` whose dual matrix is the
/// canonical scaling of `U₀ = [[0,0,−ω],[0,0,1],[−ω^q,1,0]]`.
pub fn seed_subgenerator(surface: &HermitianSurface) -> Result<u32, GeometryError> {
    let f = surface.field();
    let w = f.canonical_omega();
    let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
    let l = Point::new(f, &Vector::from_slice(&[o, w, z, z])).unwrap();
    let a = Point::new(f, &Vector::from_slice(&[z, z, o, w])).unwrap();
    let (li, ai) = (surface.index_of(&l), surface.index_of(&a));
    let (Some(li), Some(ai)) = (li, ai) else {
        return Err(GeometryError::Certification("seed points not on the surface".into()));
    };
    let target = DualBaerMatrix::canonical_scaling(f, &base_dual_matrix(f));
    for &s in surface.subgenerators_through(li) {
        let b = surface.subgenerator(s);
        if b.points.contains(&ai) && surface.dual_matrix_of(b)?.matrix == target {
            return Ok(s);
        }
    }
    Err(GeometryError::Certification("no subgenerator with dual matrix U0".into()))
}

/// `U₀` for the canonical `ω`.
pub fn base_dual_matrix(f: &Field) -> Matrix3 {
    let w = f.canonical_omega();
    let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
    Matrix3([[z, z, f.neg(w)], [z, z, o], [f.neg(f.conj(w)), o, z]])
}

/// The q+1 norm classes of subgenerators meeting `O`, with the certified
/// generating sets that produced them.
#[derive(Clone, Debug)]
pub struct NormClasses {
    seed: u32,
    gu: GroupAction,
    su: GroupAction,
    table: OrbitTable,
    norms: Vec<FieldElement>,
    classes: Vec<Vec<u32>>,
    subgroup: Vec<FieldElement>,
}

impl NormClasses {
    /// Builds the generating sets, certifies them by orbit sizes, computes
    /// every norm by transporter words and checks that each class is a single
    /// SU₃ orbit.
    pub fn new(surface: &HermitianSurface) -> Result<NormClasses, GeometryError> {
        let seed = seed_subgenerator(surface)?;
        let mut last = None;
        for full in [false, true] {
            match NormClasses::with_vectors(surface, seed, &reflection_vectors(surface.field(), full)) {
                Ok(c) => return Ok(c),
                Err(e) => last = Some(e),
            }
        }
        Err(last.unwrap())
    }

    fn with_vectors(surface: &HermitianSurface, seed: u32, vectors: &[Vector]) -> Result<NormClasses, GeometryError> {
        let f = surface.field();
        let q = f.q();
        let zeta = f.norm_one_generator();
        let zinv = f.inv(zeta);
        let gu_gens: Vec<UnitaryMatrix3> =
            vectors.iter().map(|v| reflection(f, v, zeta)).collect::<Result<_, _>>()?;
        let mut su_gens = Vec::new();
        for (i, v) in vectors.iter().enumerate() {
            for (j, w) in vectors.iter().enumerate() {
                if i != j && (i == 0 || j == 0 || j == i + 1) {
                    su_gens.push(reflection(f, v, zeta)?.mul(f, &reflection(f, w, zinv)?));
                }
            }
        }
        let gu = GroupAction::new(surface, gu_gens);
        let su = GroupAction::new(surface, su_gens);
        let n_points = surface.points().len();
        let q3 = q * q * q + 1;

        let certify = |what: &str, got: usize, want: usize| {
            if got == want {
                Ok(())
            } else {
                Err(GeometryError::Certification(format!("{what}: orbit size {got}, expected {want}")))
            }
        };
        for (name, act) in [("GU3", &gu), ("SU3", &su)] {
            certify(&format!("{name} on O"), point_orbit(act, surface.curve()[0], n_points).len(), q3)?;
            certify(&format!("{name} on affine points"), point_orbit(act, surface.affine()[0], n_points).len(), q * q * q3)?;
        }
        let table = orbit_with_transporters(surface, &gu, seed);
        certify("GU3 on subgenerators", table.len(), q * (q + 1) * (q + 1) * q3)?;

        let total = surface.subgenerators().len();
        let mut norms = vec![FieldElement::ZERO; total];
        for &b in table.orbit() {
            norms[b as usize] = table.word_det(f, b).unwrap();
        }
        // a consistent labelling along every generator edge is independent
        // of the transporter chosen
        for b in 0..total as u32 {
            for g in 0..gu.len() {
                let c = image_of_subgenerator(surface, gu.permutation(g), b);
                if norms[c as usize] != f.mul(norms[b as usize], gu.generators()[g].det()) {
                    return Err(GeometryError::Certification(format!(
                        "norm not transported consistently from {b} by generator {g}"
                    )));
                }
            }
        }
        let reversed = orbit_with_transporters(surface, &gu.reversed(), seed);
        for b in 0..total as u32 {
            if reversed.word_det(f, b) != Some(norms[b as usize]) {
                return Err(GeometryError::Certification(format!("reversed transporter disagrees at {b}")));
            }
        }

        let subgroup = f.norm_one_subgroup();
        let mut classes = vec![Vec::new(); subgroup.len()];
        for (b, &mu) in norms.iter().enumerate() {
            let pos = f.norm_one_position(mu).ok_or(GeometryError::NotNormOne)?;
            classes[pos].push(b as u32);
        }
        for (pos, class) in classes.iter().enumerate() {
            certify(&format!("norm class {pos}"), class.len(), q * (q + 1) * q3)?;
            let orbit = orbit_with_transporters(surface, &su, class[0]);
            let mut cells: Vec<u32> = orbit.orbit().to_vec();
            cells.sort_unstable();
            if &cells != class {
                return Err(GeometryError::Certification(format!("norm class {pos} is not one SU3 orbit")));
            }
        }
        Ok(NormClasses { seed, gu, su, table, norms, classes, subgroup })
    }

    pub fn seed(&self) -> u32 {
        self.seed
    }

    pub fn gu(&self) -> &GroupAction {
        &self.gu
    }

    pub fn su(&self) -> &GroupAction {
        &self.su
    }

    pub fn table(&self) -> &OrbitTable {
        &self.table
    }

    /// `‖b‖` for a subgenerator meeting `O`, by index.
    pub fn norm(&self, b: u32) -> FieldElement {
        self.norms[b as usize]
    }

    /// `‖b‖`, looked up by the subgenerator's points.
    pub fn norm_of(&self, surface: &HermitianSurface, b: &crate::hermitian::BaerSubgenerator) -> Result<FieldElement, GeometryError> {
        if b.curve_point.is_none() {
            return Err(GeometryError::NoCurvePoint);
        }
        let i = surface.subgenerator_index(&b.points).ok_or(GeometryError::NoCurvePoint)?;
        Ok(self.norm(i))
    }

    /// Position of `‖b‖` in the norm-one subgroup.
    pub fn class_of(&self, b: u32) -> usize {
        self.subgroup.iter().position(|&x| x == self.norms[b as usize]).unwrap()
    }

    /// Norm-one values, in class order.
    pub fn values(&self) -> &[FieldElement] {
        &self.subgroup
    }

    pub fn classes(&self) -> &[Vec<u32>] {
        &self.classes
    }

    /// `Ω(μ)`, the sorted subgenerators of norm `μ`.
    pub fn omega(&self, mu: FieldElement) -> Result<&[u32], GeometryError> {
        let pos = self.subgroup.iter().position(|&x| x == mu).ok_or(GeometryError::NotNormOne)?;
        Ok(&self.classes[pos])
    }

    /// `Ω(μ)` by class position.
    pub fn class(&self, pos: usize) -> &[u32] {
        &self.classes[pos]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OmegaViolation {
    /// An affine point on the wrong number of elements.
    PointCount { point: u32, count: usize },
    /// Two elements through an affine point share a host generator.
    RepeatedHost { point: u32 },
    /// The elements through an affine point do not cover a fully contained
    /// Baer subplane.
    NotSubplane { point: u32 },
    /// A pair `X ∈ O`, affine `Y ⊥ X` not on exactly one element.
    PairCount { curve_point: u32, point: u32, count: usize },
}

#[derive(Clone, Debug, Default)]
pub struct OmegaReport {
    pub affine_checked: usize,
    pub pairs_checked: usize,
    pub violations: Vec<OmegaViolation>,
}

impl OmegaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that every affine point lies on q+1 elements of `omega` covering a
/// fully contained Baer subplane, and that each `X ∈ O` and affine `Y ⊥ X`
/// lie on exactly one common element.
pub fn verify_omega_axioms(surface: &HermitianSurface, omega: &[u32]) -> OmegaReport {
    let f = surface.field();
    let q = f.q();
    let members: BTreeSet<u32> = omega.iter().copied().collect();
    let mut report = OmegaReport::default();
    for &p in surface.affine() {
        report.affine_checked += 1;
        let through: Vec<u32> = surface.subgenerators_through(p).iter().copied().filter(|b| members.contains(b)).collect();
        if through.len() != q + 1 {
            report.violations.push(OmegaViolation::PointCount { point: p, count: through.len() });
            continue;
        }
        let hosts: BTreeSet<u32> = through.iter().map(|&b| surface.subgenerator(b).host).collect();
        if hosts.len() != q + 1 {
            report.violations.push(OmegaViolation::RepeatedHost { point: p });
            continue;
        }
        let plane = surface
            .baer_subplane_span(surface.subgenerator(through[0]), surface.subgenerator(through[1]))
            .expect("distinct hosts through a common point");
        let covered: BTreeSet<Point> =
            through.iter().flat_map(|&b| surface.subgenerator(b).points.iter().map(|&x| *surface.point(x))).collect();
        let plane_set: BTreeSet<Point> = plane.points.iter().copied().collect();
        if !plane.fully_contained || covered != plane_set {
            report.violations.push(OmegaViolation::NotSubplane { point: p });
        }
    }
    for &x in surface.curve() {
        let xv = surface.point(x).vector();
        for &y in surface.affine() {
            if !hermitian_product(f, xv, surface.point(y).vector()).is_zero() {
                continue;
            }
            report.pairs_checked += 1;
            let count = surface
                .subgenerators_through(y)
                .iter()
                .filter(|b| members.contains(b) && surface.subgenerator(**b).curve_point == Some(x))
                .count();
            if count != 1 {
                report.violations.push(OmegaViolation::PairCount { curve_point: x, point: y, count });
            }
        }
    }
    report
}

/// Tally over pairs of subgenerators meeting `O` that share one affine point
/// and lie on distinct generators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairReport {
    pub pairs: usize,
    pub same_norm_contained: usize,
    pub same_norm_not_contained: usize,
    pub cross_norm_contained: usize,
    pub cross_norm_not_contained: usize,
}

impl PairReport {
    /// Same norm exactly when the spanned Baer subplane lies on the surface.
    pub fn biconditional_holds(&self) -> bool {
        self.same_norm_not_contained == 0 && self.cross_norm_contained == 0
    }
}

/// Exhaustive pair scan for the norm/subplane biconditional.
pub fn verify_norm_subplane_pairs(surface: &HermitianSurface, classes: &NormClasses) -> PairReport {
    let mut report = PairReport::default();
    for &p in surface.affine() {
        let through = surface.subgenerators_through(p);
        for (i, &a) in through.iter().enumerate() {
            for &b in &through[i + 1..] {
                let (sa, sb) = (surface.subgenerator(a), surface.subgenerator(b));
                if sa.host == sb.host {
                    continue;
                }
                report.pairs += 1;
                let contained = surface.baer_subplane_span(sa, sb).expect("qualifying pair").fully_contained;
                match (classes.norm(a) == classes.norm(b), contained) {
                    (true, true) => report.same_norm_contained += 1,
                    (true, false) => report.same_norm_not_contained += 1,
                    (false, true) => report.cross_norm_contained += 1,
                    (false, false) => report.cross_norm_not_contained += 1,
                }
            }
        }
    }
    report
}

/// `Ω(μ)` with one element replaced by a seeded pick from another class.
pub fn swap_one_element(classes: &NormClasses, pos: usize, seed: u64) -> (Vec<u32>, u32, u32) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut omega = classes.class(pos).to_vec();
    let others: Vec<usize> = (0..classes.classes().len()).filter(|&c| c != pos).collect();
    let other = *others.choose(&mut rng).expect("at least two classes");
    let i = (0..omega.len()).collect::<Vec<_>>().choose(&mut rng).copied().unwrap();
    let incoming = *classes.class(other).choose(&mut rng).unwrap();
    let removed = omega[i];
    omega[i] = incoming;
    omega.sort_unstable();
    (omega, removed, incoming)
}

/// Every element of GU₃(q), by orthonormal rows.
pub fn enumerate_gu3(f: &Field) -> Vec<UnitaryMatrix3> {
    let units: Vec<Vector> = all_vectors(f, 3)
        .into_iter()
        .filter(|v| hermitian_product(f, v, v) == FieldElement::ONE)
        .collect();
    let mut out = Vec::new();
    for r0 in &units {
        let second: Vec<&Vector> = units.iter().filter(|v| hermitian_product(f, r0, v).is_zero()).collect();
        for r1 in &second {
            for r2 in second.iter().filter(|v| hermitian_product(f, r1, v).is_zero()) {
                let m = Matrix3([to3(r0), to3(r1), to3(r2)]);
                out.push(UnitaryMatrix3 { matrix: m, det: m.det(f) });
            }
        }
    }
    out
}

fn to3(v: &Vector) -> [FieldElement; 3] {
    [v.get(0), v.get(1), v.get(2)]
}

fn all_vectors(f: &Field, n: usize) -> Vec<Vector> {
    let el = f.elements(Level::Extension);
    let mut out = vec![Vector::zero(n)];
    for i in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| el.iter().map(move |&x| {
                let mut w = v;
                w.set(i, x);
                w
            }))
            .collect();
    }
    out
}

/// Elements of a group list fixing subgenerator `b` (meeting `O`).
pub fn stabiliser(surface: &HermitianSurface, group: &[UnitaryMatrix3], b: u32) -> Vec<UnitaryMatrix3> {
    let f = surface.field();
    let key = &surface.subgenerator(b).points;
    group
        .iter()
        .filter(|a| {
            let mut img: Vec<u32> = key.iter().map(|&p| surface.index_of(&a.apply(f, surface.point(p))).unwrap()).collect();
            img.sort_unstable();
            &img == key
        })
        .copied()
        .collect()
}

/// Parameters `(k, b, g)` of a stabiliser element of `[U₀, ℓ₀]` in the closed
/// form
/// `[[k⁻¹−bω^q, b, −k⁻¹gω²], [(k⁻¹−k−bω^q)ω^q, k+bω^q, k⁻¹gω], [g, gω, 1]]`
/// with `k ∈ GF(q)*`, `N(g) = k² + k·T(b^qω) − 1` and `T(gω) = 0`. The norm
/// relation is forced by `⟨r₀, r₀⟩ = 1` for the first row.
pub fn closed_form_parameters(f: &Field, a: &Matrix3) -> Result<(FieldElement, FieldElement, FieldElement), GeometryError> {
    let w = f.canonical_omega();
    let wq = f.conj(w);
    let b = a.get(0, 1);
    let g = a.get(2, 0);
    let k = f.sub(a.get(1, 1), f.mul(b, wq));
    let bad = |what: &str| GeometryError::Certification(format!("closed form: {what}"));
    if k.is_zero() || !f.in_subfield(k) {
        return Err(bad("k not in GF(q)*"));
    }
    let ki = f.inv(k);
    let expected = Matrix3([
        [f.sub(ki, f.mul(b, wq)), b, f.neg(f.mul(ki, f.mul(g, f.mul(w, w))))],
        [f.mul(f.sub(f.sub(ki, k), f.mul(b, wq)), wq), f.add(k, f.mul(b, wq)), f.mul(ki, f.mul(g, w))],
        [g, f.mul(g, w), FieldElement::ONE],
    ]);
    if expected != *a {
        return Err(bad("entries differ"));
    }
    let rhs = f.sub(f.add(f.mul(k, k), f.mul(k, f.trace(f.mul(f.conj(b), w)))), FieldElement::ONE);
    if f.norm(g) != rhs {
        return Err(bad("N(g) relation"));
    }
    if !f.trace(f.mul(g, w)).is_zero() {
        return Err(bad("T(gω) relation"));
    }
    Ok((k, b, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeMap;

    fn setup(q: usize) -> (HermitianSurface, NormClasses) {
        let s = HermitianSurface::new(Field::new(q).unwrap());
        let c = NormClasses::new(&s).unwrap();
        (s, c)
    }

    #[test]
    fn reflection_examples() {
        let f = Field::new(3).unwrap();
        let v = Vector::from_slice(&[FieldElement::ONE, FieldElement::ZERO, FieldElement::ZERO]);
        assert_eq!(reflection(&f, &v, FieldElement::ONE).unwrap(), UnitaryMatrix3::identity());
        for v in reflection_vectors(&f, true) {
            for &lambda in &f.norm_one_subgroup() {
                let r = reflection(&f, &v, lambda).unwrap();
                assert_eq!(r.matrix().det(&f), lambda);
                assert!(is_unitary(&f, r.matrix()));
                assert_eq!(r.matrix().apply(&f, &v), v.scale(&f, lambda));
            }
        }
        let w = f.canonical_omega();
        let iso = Vector::from_slice(&[FieldElement::ONE, w, FieldElement::ZERO]);
        assert_eq!(reflection(&f, &iso, FieldElement::ONE), Err(GeometryError::Isotropic));
        assert_eq!(reflection(&f, &v, f.primitive()), Err(GeometryError::NotNormOne));
    }

    #[test]
    fn gu3_orders() {
        for q in [2usize, 3] {
            let f = Field::new(q).unwrap();
            let g = enumerate_gu3(&f);
            assert_eq!(g.len(), q.pow(3) * (q + 1) * (q * q - 1) * (q.pow(3) + 1));
            let su = g.iter().filter(|a| a.det() == FieldElement::ONE).count();
            assert_eq!(su * (q + 1), g.len());
        }
    }

    #[test]
    fn orbit_and_class_sizes() {
        for q in [2usize, 3, 4] {
            let (s, c) = setup(q);
            let q3 = q * q * q + 1;
            assert_eq!(c.table().len(), q * (q + 1) * (q + 1) * q3);
            assert_eq!(c.classes().len(), q + 1);
            for class in c.classes() {
                assert_eq!(class.len(), q * (q + 1) * q3);
            }
            assert_eq!(c.norm(c.seed()), FieldElement::ONE);
            assert_eq!(c.table().word(c.seed()), Some(Vec::new()));
            assert_eq!(c.class_of(c.seed()), 0);
            let total: usize = c.classes().iter().map(Vec::len).sum();
            assert_eq!(total, s.subgenerators().len());
        }
        let (_, c) = setup(2);
        assert!(c.classes().iter().all(|cl| cl.len() == 54));
    }

    #[test]
    fn transporter_words_reproduce_elements() {
        let (s, c) = setup(2);
        for &b in c.table().orbit() {
            let word = c.table().word(b).unwrap();
            let mut x = c.seed();
            for &g in &word {
                x = image_of_subgenerator(&s, c.gu().permutation(g as usize), x);
            }
            assert_eq!(x, b);
            // multiply the actual matrices and compare the determinant
            let f = s.field();
            let m = word.iter().fold(UnitaryMatrix3::identity(), |acc, &g| acc.mul(f, &c.gu().generators()[g as usize]));
            assert_eq!(m.matrix().det(f), c.norm(b));
        }
    }

    #[test]
    fn norm_is_homomorphic_for_all_of_gu3() {
        let (s, c) = setup(2);
        let f = s.field();
        for a in enumerate_gu3(f) {
            let perm = point_permutation(&s, &a);
            for b in 0..s.subgenerators().len() as u32 {
                let img = image_of_subgenerator(&s, &perm, b);
                assert_eq!(c.norm(img), f.mul(c.norm(b), a.det()));
            }
        }
    }

    #[test]
    fn dual_matrix_transforms_by_conjugation() {
        let (s, c) = setup(3);
        let f = s.field();
        for a in c.gu().generators() {
            let perm = point_permutation(&s, a);
            for b in (0..s.subgenerators().len() as u32).step_by(7) {
                let u = s.dual_matrix_of(s.subgenerator(b)).unwrap().matrix;
                let moved = DualBaerMatrix::canonical_scaling(f, &a.transform_dual(f, &u));
                let img = image_of_subgenerator(&s, &perm, b);
                assert_eq!(s.dual_matrix_of(s.subgenerator(img)).unwrap().matrix, moved);
            }
        }
    }

    #[test]
    fn stabiliser_is_in_su3_and_has_closed_form() {
        for q in [2usize, 3, 4] {
            let (s, c) = setup(q);
            let f = s.field();
            let group = enumerate_gu3(f);
            let stab = stabiliser(&s, &group, c.seed());
            assert_eq!(stab.len() * s.subgenerators().len(), group.len());
            let mut ks = BTreeSet::new();
            for a in &stab {
                assert_eq!(a.det(), FieldElement::ONE);
                let (k, _, _) = closed_form_parameters(f, a.matrix()).unwrap();
                ks.insert(k);
                // fixes U₀ up to a scalar
                let u0 = base_dual_matrix(f);
                let moved = a.transform_dual(f, &u0);
                assert_eq!(DualBaerMatrix::canonical_scaling(f, &moved), DualBaerMatrix::canonical_scaling(f, &u0));
            }
            assert!(ks.contains(&FieldElement::ONE));
        }
    }

    #[test]
    fn norm_values_tally_q2() {
        let (_, c) = setup(2);
        let mut tally: BTreeMap<FieldElement, usize> = BTreeMap::new();
        for b in 0..162 {
            *tally.entry(c.norm(b)).or_default() += 1;
        }
        assert_eq!(tally.len(), 3);
        assert!(tally.values().all(|&n| n == 54));
        let all: BTreeSet<u32> = c.classes().iter().flatten().copied().collect();
        assert_eq!(all.len(), 162);
    }

    #[test]
    fn each_class_has_one_subgenerator_per_generator_and_affine_point() {
        for q in [2usize, 3] {
            let (s, c) = setup(q);
            for class in c.classes() {
                let members: BTreeSet<u32> = class.iter().copied().collect();
                for (gi, g) in s.generators().iter().enumerate() {
                    for &p in g.points.iter().filter(|&&p| p != g.curve_point) {
                        let n = s.subgenerators_through(p).iter()
                            .filter(|b| members.contains(b) && s.subgenerator(**b).host == gi as u32).count();
                        assert_eq!(n, 1);
                    }
                }
            }
        }
    }

    #[test]
    fn omega_axioms_hold_and_detect_swaps() {
        for q in [2usize, 3] {
            let (s, c) = setup(q);
            for class in c.classes() {
                let r = verify_omega_axioms(&s, class);
                assert!(r.passed(), "{:?}", r.violations.first());
                assert_eq!(r.affine_checked, q * q * (q * q * q + 1));
                assert_eq!(r.pairs_checked, (q * q * q + 1) * (q + 1) * q * q);
            }
        }
        let (s, c) = setup(2);
        let (bad, removed, _) = swap_one_element(&c, 0, 7);
        let r = verify_omega_axioms(&s, &bad);
        assert!(!r.passed());
        let removed_affine: Vec<u32> =
            s.subgenerator(removed).points.iter().copied().filter(|&p| !s.on_curve(p)).collect();
        for p in removed_affine {
            assert!(r.violations.iter().any(|v| match v {
                OmegaViolation::PointCount { point, .. }
                | OmegaViolation::RepeatedHost { point }
                | OmegaViolation::NotSubplane { point }
                | OmegaViolation::PairCount { point, .. } => *point == p,
            }));
        }
        assert_eq!(swap_one_element(&c, 0, 7), swap_one_element(&c, 0, 7));
    }

    #[test]
    fn pair_biconditional() {
        let (s, c) = setup(2);
        let r = verify_norm_subplane_pairs(&s, &c);
        assert!(r.biconditional_holds());
        assert_eq!(r.pairs, 36 * 27);
        assert!(r.same_norm_contained > 0 && r.cross_norm_not_contained > 0);
    }

    #[test]
    fn omega_rejects_non_norm_one() {
        let (s, c) = setup(3);
        assert_eq!(c.omega(s.field().primitive()).unwrap_err(), GeometryError::NotNormOne);
        for (pos, &mu) in c.values().iter().enumerate() {
            assert_eq!(c.omega(mu).unwrap(), c.class(pos));
        }
    }
}
