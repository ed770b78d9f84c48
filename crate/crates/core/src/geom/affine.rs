use super::Point;

/// A planar affine map `p -> L p + t`.
///
/// `linear` is stored row-major: `[[m11, m12], [m21, m22]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub linear: [[f64; 2]; 2],
    pub translation: [f64; 2],
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap {
        linear: [[1.0, 0.0], [0.0, 1.0]],
        translation: [0.0, 0.0],
    };

    pub const fn new(linear: [[f64; 2]; 2], translation: [f64; 2]) -> Self {
        AffineMap {
            linear,
            translation,
        }
    }

    pub fn translation(tx: f64, ty: f64) -> Self {
        AffineMap::new([[1.0, 0.0], [0.0, 1.0]], [tx, ty])
    }

    pub fn scaling(sx: f64, sy: f64) -> Self {
        AffineMap::new([[sx, 0.0], [0.0, sy]], [0.0, 0.0])
    }

    /// Counter-clockwise rotation about the origin.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        AffineMap::new([[c, -s], [s, c]], [0.0, 0.0])
    }

    /// Similarity scaling by `ratio` followed by translation.
    pub fn similarity(ratio: f64, tx: f64, ty: f64) -> Self {
        AffineMap::new([[ratio, 0.0], [0.0, ratio]], [tx, ty])
    }

    #[inline]
    pub fn apply(&self, p: Point) -> Point {
        let [[a, b], [c, d]] = self.linear;
        Point::new(
            a * p.x + b * p.y + self.translation[0],
            c * p.x + d * p.y + self.translation[1],
        )
    }

    /// Applies only the linear part.
    #[inline]
    pub fn apply_linear(&self, p: Point) -> Point {
        let [[a, b], [c, d]] = self.linear;
        Point::new(a * p.x + b * p.y, c * p.x + d * p.y)
    }

    pub fn determinant(&self) -> f64 {
        let [[a, b], [c, d]] = self.linear;
        a * d - b * c
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        let [[a, b], [c, d]] = self.linear;
        let [[e, f], [g, h]] = inner.linear;
        let t = self.apply(Point::new(inner.translation[0], inner.translation[1]));
        AffineMap::new(
            [
                [a * e + b * g, a * f + b * h],
                [c * e + d * g, c * f + d * h],
            ],
            [t.x, t.y],
        )
    }

    pub fn inverse(&self) -> Option<AffineMap> {
        let det = self.determinant();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let [[a, b], [c, d]] = self.linear;
        let inv = [[d / det, -b / det], [-c / det, a / det]];
        let lin = AffineMap::new(inv, [0.0, 0.0]);
        let t = lin.apply(Point::new(-self.translation[0], -self.translation[1]));
        Some(AffineMap::new(inv, [t.x, t.y]))
    }

    /// Largest singular value of the linear part.
    pub fn operator_norm(&self) -> f64 {
        let [[a, b], [c, d]] = self.linear;
        // eigenvalues of L^T L
        let p = a * a + c * c;
        let q = a * b + c * d;
        let r = b * b + d * d;
        let tr = p + r;
        let disc = ((p - r) * (p - r) + 4.0 * q * q).sqrt();
        ((tr + disc) / 2.0).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.linear.iter().flatten().all(|v| v.is_finite())
            && self.translation.iter().all(|v| v.is_finite())
    }
}

impl Default for AffineMap {
    fn default() -> Self {
        AffineMap::IDENTITY
    }
}
