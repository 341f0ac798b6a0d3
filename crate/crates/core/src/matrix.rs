//! 3×3 matrices over GF(q²), acting on row vectors.

use crate::galois::{Field, FieldElement};
use crate::projective::Vector;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Matrix3(pub [[FieldElement; 3]; 3]);

impl Matrix3 {
    pub const ZERO: Matrix3 = Matrix3([[FieldElement::ZERO; 3]; 3]);

    pub fn identity() -> Matrix3 {
        let mut m = Matrix3::ZERO;
        for i in 0..3 {
            m.0[i][i] = FieldElement::ONE;
        }
        m
    }

    pub fn from_indices(rows: [[u8; 3]; 3]) -> Matrix3 {
        Matrix3(rows.map(|r| r.map(FieldElement)))
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.0[i][j]
    }

    pub fn mul(&self, f: &Field, other: &Matrix3) -> Matrix3 {
        let mut m = Matrix3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                let mut s = FieldElement::ZERO;
                for k in 0..3 {
                    s = f.add(s, f.mul(self.0[i][k], other.0[k][j]));
                }
                m.0[i][j] = s;
            }
        }
        m
    }

    pub fn scale(&self, f: &Field, s: FieldElement) -> Matrix3 {
        Matrix3(self.0.map(|r| r.map(|x| f.mul(s, x))))
    }

    pub fn transpose(&self) -> Matrix3 {
        let mut m = Matrix3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[j][i];
            }
        }
        m
    }

    /// Entrywise Frobenius of the transpose.
    pub fn conj_transpose(&self, f: &Field) -> Matrix3 {
        Matrix3(self.transpose().0.map(|r| r.map(|x| f.conj(x))))
    }

    pub fn det(&self, f: &Field) -> FieldElement {
        let m = &self.0;
        let minor = |a: usize, b: usize, c: usize, d: usize| {
            f.sub(f.mul(m[1][a], m[2][b]), f.mul(m[1][c], m[2][d]))
        };
        let t0 = f.mul(m[0][0], minor(1, 2, 2, 1));
        let t1 = f.mul(m[0][1], minor(0, 2, 2, 0));
        let t2 = f.mul(m[0][2], minor(0, 1, 1, 0));
        f.add(f.sub(t0, t1), t2)
    }

    /// Inverse via the adjugate; `None` when singular.
    pub fn inverse(&self, f: &Field) -> Option<Matrix3> {
        let d = self.det(f);
        if d.is_zero() {
            return None;
        }
        let m = &self.0;
        let mut adj = Matrix3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                let (r0, r1) = match j {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                let (c0, c1) = match i {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                let cof = f.sub(f.mul(m[r0][c0], m[r1][c1]), f.mul(m[r0][c1], m[r1][c0]));
                adj.0[i][j] = if (i + j) % 2 == 0 { cof } else { f.neg(cof) };
            }
        }
        Some(adj.scale(f, f.inv(d)))
    }

    /// Rank over GF(q²).
    pub fn rank(&self, f: &Field) -> usize {
        let rows = self.0.map(|r| Vector::from_slice(&r));
        crate::projective::rank(f, &rows)
    }

    /// Row vector times matrix, for vectors of length 3.
    pub fn apply(&self, f: &Field, v: &Vector) -> Vector {
        debug_assert_eq!(v.len(), 3);
        let mut out = Vector::zero(3);
        for j in 0..3 {
            let mut s = FieldElement::ZERO;
            for i in 0..3 {
                s = f.add(s, f.mul(v.get(i), self.0[i][j]));
            }
            out.set(j, s);
        }
        out
    }

    /// Applies to the first three coordinates of a 4-vector, fixing the last.
    pub fn apply_affine(&self, f: &Field, v: &Vector) -> Vector {
        debug_assert_eq!(v.len(), 4);
        let head = self.apply(f, &v.resized(3));
        let mut out = head.resized(4);
        out.set(3, v.get(3));
        out
    }

    /// The sesquilinear value `x M y^q` on 3-vectors.
    pub fn form(&self, f: &Field, x: &Vector, y: &Vector) -> FieldElement {
        let xm = self.apply(f, x);
        xm.dot(f, &y.conj(f))
    }

    /// Hermitian means equal to its own conjugate transpose.
    pub fn is_hermitian(&self, f: &Field) -> bool {
        self.conj_transpose(f) == *self
    }

    /// Left nullspace `{x : xM = 0}`.
    pub fn left_nullspace(&self, f: &Field) -> alloc::vec::Vec<Vector> {
        // xM = 0  ⇔  M^T x^T = 0, so the rows of M^T are the constraints
        let t = self.transpose();
        let rows = t.0.map(|r| Vector::from_slice(&r));
        crate::projective::nullspace(f, 3, &rows)
    }
}
