//! Numeric model of the bidouble cover `S -> Q` and of the canonical map
//! `S -> P5`, `x -> (y1 u0 : y1 u1 : y2 u0 : y2 u1 : y3 v0 : y3 v1)`.
//!
//! Points of `Q` are complex homogeneous pairs scaled so that the coordinate
//! of largest modulus equals one. The branch forms are rescaled to unit
//! coefficient 1-norm, so `|delta_i| <= 1` at every normalized point and all
//! tolerances below are relative.

pub mod probes;
pub mod roots;

use num_complex::Complex64 as C;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bipoly::Var;
use crate::branch::{check_d3_graph, BranchConfig};
use crate::elim::{squarefree_part, sylvester_resultant_u};
use crate::scalar::rational_to_f64;
use crate::{CBiPoly, Error, QBiPoly, QUniPoly, Result};

pub use probes::{basepoint_free_probe, injectivity_probe, jacobian_rank_probe, ProbeFailure, ProbeReport};
use roots::form_roots;

/// Numeric tolerances of the cover-side checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// `|y_i^2 - delta_i| <= fiber * (1 + |delta_i|)`.
    pub fiber: f64,
    /// `|delta_i| <= zero` counts as a vanishing branch form.
    pub zero: f64,
    /// Minimum ratio of the two singular values of the Jacobian.
    pub rank: f64,
    /// Minimum projective distance between images of distinct points.
    pub sep: f64,
    /// Minimum max-modulus of an unnormalized image.
    pub nonzero: f64,
    /// Central finite-difference step.
    pub step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            fiber: 1e-10,
            zero: 1e-10,
            rank: 1e-6,
            sep: 1e-8,
            nonzero: 1e-8,
            step: 1e-6,
        }
    }
}

fn zero() -> C {
    C::new(0.0, 0.0)
}

fn one() -> C {
    C::new(1.0, 0.0)
}

/// Scale a pair so its coordinate of largest modulus is exactly one.
pub fn normalize_pair(x: [C; 2]) -> Option<[C; 2]> {
    let k = if x[1].norm() > x[0].norm() { 1 } else { 0 };
    let m = x[k];
    if m.norm() == 0.0 || !m.is_finite() {
        return None;
    }
    let mut out = [x[0] / m, x[1] / m];
    out[k] = one();
    Some(out)
}

/// Index of the coordinate that is not pinned to one.
fn free_index(x: &[C; 2]) -> usize {
    if x[0] == one() {
        1
    } else {
        0
    }
}

/// Point of `Q` with complex normalized coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CPoint {
    pub u: [C; 2],
    pub v: [C; 2],
}

impl CPoint {
    pub fn new(u: [C; 2], v: [C; 2]) -> Option<Self> {
        Some(CPoint {
            u: normalize_pair(u)?,
            v: normalize_pair(v)?,
        })
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            if let Some(p) = CPoint::new(random_pair(rng), random_pair(rng)) {
                return p;
            }
        }
    }

    /// The point `(u + s e, v + t f)` with `e`, `f` the free coordinate
    /// directions of `self`. This is the local affine chart used by every
    /// Newton solve and finite difference.
    pub fn shifted(&self, s: C, t: C) -> CPoint {
        let mut p = *self;
        p.u[free_index(&self.u)] += s;
        p.v[free_index(&self.v)] += t;
        p
    }
}

pub(crate) fn random_pair<R: Rng + ?Sized>(rng: &mut R) -> [C; 2] {
    let mut c = || C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    [c(), c()]
}

/// A point of `S`: a base point and a square root of each branch form,
/// up to the global sign `(y1, y2, y3) ~ (-y1, -y2, -y3)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint {
    pub base: CPoint,
    pub y: [C; 3],
}

impl SurfacePoint {
    /// Apply the sign rule: the first `y` of largest modulus gets a
    /// nonnegative real part.
    pub fn normalized(mut self) -> Self {
        let mut k = 0;
        for i in 1..3 {
            if self.y[i].norm() > self.y[k].norm() {
                k = i;
            }
        }
        let lead = self.y[k];
        if lead.re < 0.0 || (lead.re == 0.0 && lead.im < 0.0) {
            for y in self.y.iter_mut() {
                *y = -*y;
            }
        }
        self
    }

    /// Which `y_i` vanish.
    pub fn on_ramification(&self) -> [bool; 3] {
        self.y.map(|y| y == zero())
    }
}

/// Point of `P5` scaled so that its coordinate of largest modulus is one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct P5Point(pub [C; 6]);

impl P5Point {
    pub fn from_homogeneous(x: [C; 6]) -> Result<Self> {
        let k = (0..6)
            .max_by(|&a, &b| x[a].norm().total_cmp(&x[b].norm()).then(b.cmp(&a)))
            .expect("six coordinates");
        if x[k].norm() == 0.0 || !x[k].is_finite() {
            return Err(Error::ImageVanishes);
        }
        let m = x[k];
        let mut out = x.map(|c| c / m);
        out[k] = one();
        Ok(P5Point(out))
    }

    /// `x2 x3 - x1 x4`, which vanishes on the canonical image.
    pub fn quadric(&self) -> C {
        let x = &self.0;
        x[1] * x[2] - x[0] * x[3]
    }

    /// Sine of the Fubini-Study angle between the two points.
    pub fn distance(&self, other: &P5Point) -> f64 {
        let (a, b) = (&self.0, &other.0);
        let na: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        let nb: f64 = b.iter().map(|z| z.norm_sqr()).sum();
        let mut wedge = 0.0;
        for i in 0..6 {
            for j in i + 1..6 {
                wedge += (a[i] * b[j] - a[j] * b[i]).norm_sqr();
            }
        }
        (wedge / (na * nb)).sqrt()
    }
}

/// Unnormalized canonical image of a surface point.
pub fn canonical_coordinates(s: &SurfacePoint) -> [C; 6] {
    let SurfacePoint { base: CPoint { u, v }, y } = s;
    [y[0] * u[0], y[0] * u[1], y[1] * u[0], y[1] * u[1], y[2] * v[0], y[2] * v[1]]
}

/// `phi_1(s)`, projectively normalized. Errors if all coordinates vanish.
pub fn canonical_image(s: &SurfacePoint) -> Result<P5Point> {
    P5Point::from_homogeneous(canonical_coordinates(s))
}

/// Complex model of a branch configuration with derived data cached.
#[derive(Clone, Debug)]
pub struct CoverModel {
    pub deltas: [CBiPoly; 3],
    /// `[d/du0, d/du1]` of each branch form.
    pub du: [[CBiPoly; 2]; 3],
    /// `[d/dv0, d/dv1]` of each branch form.
    pub dv: [[CBiPoly; 2]; 3],
    /// Points of `D1 ∩ D2`, `D1 ∩ D3`, `D2 ∩ D3`.
    pub pair_points: [Vec<CPoint>; 3],
    /// `u`-roots of `gcd(alpha, beta)`: fibers contained in `D3`.
    pub d3_vertical: Vec<[C; 2]>,
    pub tol: Tolerances,
}

/// Index pairs `(h, k)` of the double strata, in `pair_points` order.
pub const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

fn to_complex(p: &QBiPoly) -> CBiPoly {
    let c = p.map(|q| C::new(rational_to_f64(q), 0.0));
    let norm: f64 = c.coords().iter().map(|z| z.norm()).sum();
    c.scale(&C::new(1.0 / norm, 0.0))
}

fn form_to_complex(f: &QUniPoly) -> Vec<C> {
    f.coeffs()
        .iter()
        .map(|q| C::new(rational_to_f64(q), 0.0))
        .collect()
}

impl CoverModel {
    /// Builds the model; does not require a certificate, so broken fixtures
    /// can be probed too. Fails if a pair of branch curves shares a component.
    pub fn new(c: &BranchConfig, tol: Tolerances) -> Result<Self> {
        let deltas = c.deltas().map(to_complex);
        let du = deltas
            .clone()
            .map(|d| [d.partial(Var::U0), d.partial(Var::U1)]);
        let dv = deltas
            .clone()
            .map(|d| [d.partial(Var::V0), d.partial(Var::V1)]);
        let (_, g) = check_d3_graph(&c.delta3)?;
        let d3_vertical = if g.degree() > 0 {
            form_roots(&form_to_complex(&g), 1e-14)
        } else {
            Vec::new()
        };
        let mut model = CoverModel {
            deltas,
            du,
            dv,
            pair_points: [Vec::new(), Vec::new(), Vec::new()],
            d3_vertical,
            tol,
        };
        let qs = c.deltas();
        for (slot, &(h, k)) in PAIRS.iter().enumerate() {
            let res = sylvester_resultant_u(qs[h], qs[k])?;
            if num_traits::Zero::is_zero(&res) {
                return Err(Error::CommonFactor(format!(
                    "delta{} and delta{} share a component",
                    h + 1,
                    k + 1
                )));
            }
            let f = squarefree_part(&res)?;
            model.pair_points[slot] = model.intersection_points(h, k, &form_to_complex(&f));
        }
        Ok(model)
    }

    pub fn delta(&self, i: usize, p: &CPoint) -> C {
        self.deltas[i].eval(&p.u, &p.v)
    }

    /// Derivatives of `delta_i` along the chart coordinates `(s, t)` at `p`.
    pub fn chart_gradient(&self, i: usize, p: &CPoint) -> (C, C) {
        let ds = self.du[i][free_index(&p.u)].eval(&p.u, &p.v);
        let dt = self.dv[i][free_index(&p.v)].eval(&p.u, &p.v);
        (ds, dt)
    }

    fn is_zero(&self, d: C) -> bool {
        d.norm() <= self.tol.zero
    }

    /// All sign classes over `q`: 4, 2 or 1 points as zero, one or two branch
    /// forms vanish. Errors at a triple point.
    pub fn fiber(&self, q: &CPoint) -> Result<Vec<SurfacePoint>> {
        let d: [C; 3] = [0, 1, 2].map(|i| self.delta(i, q));
        let roots: [C; 3] = d.map(|di| if self.is_zero(di) { zero() } else { di.sqrt() });
        let live: Vec<usize> = (0..3).filter(|&i| roots[i] != zero()).collect();
        if live.is_empty() {
            return Err(Error::TriplePoint);
        }
        let mut out = Vec::new();
        // the first live coordinate keeps its sign: that quotients the global sign
        for pattern in 0..(1u32 << (live.len() - 1)) {
            let mut y = roots;
            for (bit, &i) in live[1..].iter().enumerate() {
                if pattern >> bit & 1 == 1 {
                    y[i] = -y[i];
                }
            }
            out.push(SurfacePoint { base: *q, y }.normalized());
        }
        Ok(out)
    }

    /// Residual check of the fiber equations at a surface point.
    pub fn fiber_residual_ok(&self, s: &SurfacePoint) -> bool {
        (0..3).all(|i| {
            let d = self.delta(i, &s.base);
            (s.y[i] * s.y[i] - d).norm() <= self.tol.fiber * (1.0 + d.norm())
        })
    }

    /// Newton solve of `delta_h = target_h`, `delta_k = target_k` in the
    /// chart of `start`, moving both chart coordinates.
    pub fn newton2(&self, h: usize, k: usize, start: &CPoint, targets: (C, C)) -> Option<(C, C)> {
        let (mut s, mut t) = (zero(), zero());
        for _ in 0..60 {
            let p = start.shifted(s, t);
            let f = (self.delta(h, &p) - targets.0, self.delta(k, &p) - targets.1);
            let (a, b) = self.chart_gradient(h, &p);
            let (c, d) = self.chart_gradient(k, &p);
            let det = a * d - b * c;
            if det.norm() == 0.0 {
                return None;
            }
            let ds = (d * f.0 - b * f.1) / det;
            let dt = (a * f.1 - c * f.0) / det;
            s -= ds;
            t -= dt;
            if !(s.is_finite() && t.is_finite()) {
                return None;
            }
            if ds.norm() + dt.norm() <= 1e-15 * (1.0 + s.norm() + t.norm()) {
                return Some((s, t));
            }
        }
        let p = start.shifted(s, t);
        let res = (self.delta(h, &p) - targets.0).norm() + (self.delta(k, &p) - targets.1).norm();
        (res <= 1e-13).then_some((s, t))
    }

    /// Newton solve of `delta_i = target` moving only one chart coordinate
    /// (`along_u` picks `s`, otherwise `t`).
    pub fn newton1(&self, i: usize, start: &CPoint, along_u: bool, fixed: C, target: C) -> Option<C> {
        let mut x = zero();
        let point = |x: C| {
            if along_u {
                start.shifted(x, fixed)
            } else {
                start.shifted(fixed, x)
            }
        };
        for _ in 0..60 {
            let p = point(x);
            let f = self.delta(i, &p) - target;
            let (ds, dt) = self.chart_gradient(i, &p);
            let g = if along_u { ds } else { dt };
            if g.norm() == 0.0 {
                return None;
            }
            let step = f / g;
            x -= step;
            if !x.is_finite() {
                return None;
            }
            if step.norm() <= 1e-15 * (1.0 + x.norm()) {
                return Some(x);
            }
        }
        ((self.delta(i, &point(x)) - target).norm() <= 1e-13).then_some(x)
    }

    /// Numeric points of `D_h ∩ D_k` from the squarefree eliminant `f(v)`.
    fn intersection_points(&self, h: usize, k: usize, f: &[C]) -> Vec<CPoint> {
        let mut out: Vec<CPoint> = Vec::new();
        for v in form_roots(f, 1e-14) {
            let Some(v) = normalize_pair(v) else { continue };
            let in_u = self.deltas[h].at_v(&v);
            for u in form_roots(&in_u, 1e-12) {
                let Some(p) = CPoint::new(u, v) else { continue };
                let Some((s, t)) = self.newton2(h, k, &p, (zero(), zero())) else {
                    continue;
                };
                let Some(p) = CPoint::new(p.shifted(s, t).u, p.shifted(s, t).v) else {
                    continue;
                };
                let fresh = out.iter().all(|q| {
                    (q.u[0] - p.u[0]).norm() + (q.u[1] - p.u[1]).norm() + (q.v[0] - p.v[0]).norm() + (q.v[1] - p.v[1]).norm()
                        > 1e-8
                });
                if fresh {
                    out.push(p);
                }
            }
        }
        out.sort_by(cmp_point);
        out
    }

    /// Random point on `D_i`; `None` on a degenerate draw.
    pub fn sample_on_curve<R: Rng + ?Sized>(&self, i: usize, rng: &mut R) -> Option<CPoint> {
        if i < 2 {
            let v = normalize_pair(random_pair(rng))?;
            let us = form_roots(&self.deltas[i].at_v(&v), 1e-12);
            let u = us.get(rng.gen_range(0..us.len().max(1)))?;
            let p = CPoint::new(*u, v)?;
            let s = self.newton1(i, &p, true, zero(), zero())?;
            return CPoint::new(p.shifted(s, zero()).u, p.v);
        }
        // D3: half the draws land on vertical fibers when there are any
        if !self.d3_vertical.is_empty() && rng.gen_bool(0.5) {
            let u = self.d3_vertical[rng.gen_range(0..self.d3_vertical.len())];
            return CPoint::new(u, random_pair(rng));
        }
        let u = normalize_pair(random_pair(rng))?;
        // delta3 = v0 alpha(u) + v1 beta(u) vanishes at v = (-beta : alpha)
        let alpha = self.deltas[2].eval(&u, &[one(), zero()]);
        let beta = self.deltas[2].eval(&u, &[zero(), one()]);
        let p = CPoint::new(u, [-beta, alpha])?;
        let t = self.newton1(2, &p, false, zero(), zero())?;
        CPoint::new(p.u, p.shifted(zero(), t).v)
    }
}

/// Lexicographic order on coordinates, used to make reports canonical.
pub fn cmp_point(a: &CPoint, b: &CPoint) -> std::cmp::Ordering {
    let ka = [a.u[0], a.u[1], a.v[0], a.v[1]];
    let kb = [b.u[0], b.u[1], b.v[0], b.v[1]];
    for (x, y) in ka.iter().zip(&kb) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o.is_ne() {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branch::{draw_config, fixtures, sample_config};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn model() -> CoverModel {
        let c = sample_config(1, 5, 100).unwrap().config;
        CoverModel::new(&c, Tolerances::default()).unwrap()
    }

    #[test]
    fn fiber_cardinalities() {
        let m = model();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let q = CPoint::random(&mut rng);
            let f = m.fiber(&q).unwrap();
            assert_eq!(f.len(), 4);
            assert!(f.iter().all(|s| m.fiber_residual_ok(s)));
        }
        for i in 0..3 {
            let q = m.sample_on_curve(i, &mut rng).unwrap();
            assert_eq!(m.fiber(&q).unwrap().len(), 2);
        }
        assert_eq!(m.pair_points[0].len(), 12);
        assert_eq!(m.pair_points[1].len(), 14);
        assert_eq!(m.pair_points[2].len(), 14);
        for (slot, pts) in m.pair_points.iter().enumerate() {
            for q in pts {
                let f = m.fiber(q).unwrap();
                assert_eq!(f.len(), 1, "stratum {slot}");
            }
        }
    }

    #[test]
    fn images_lie_on_the_quadric_and_respect_signs() {
        let m = model();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let q = CPoint::random(&mut rng);
        let f = m.fiber(&q).unwrap();
        let images: Vec<P5Point> = f.iter().map(|s| canonical_image(s).unwrap()).collect();
        for x in &images {
            assert!(x.quadric().norm() <= 1e-12);
        }
        for a in 0..4 {
            for b in a + 1..4 {
                assert!(images[a].distance(&images[b]) > 1e-3);
            }
        }
        // flipping y1 flips x1, x2 only
        let s = f[0];
        let mut flipped = s;
        flipped.y[0] = -flipped.y[0];
        let (x, y) = (canonical_coordinates(&s), canonical_coordinates(&flipped));
        for k in 0..6 {
            let expect = if k < 2 { -x[k] } else { x[k] };
            assert!((y[k] - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn ramification_zeroes_a_coordinate_pair() {
        let m = model();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = m.sample_on_curve(0, &mut rng).unwrap();
        let s = m.fiber(&q).unwrap()[0];
        let x = canonical_coordinates(&s);
        assert_eq!(x[0], zero());
        assert_eq!(x[1], zero());
        let q = m.pair_points[0][0];
        let x = canonical_image(&m.fiber(&q).unwrap()[0]).unwrap();
        assert!(x.0[..4].iter().all(|z| *z == zero()));
    }

    #[test]
    fn triple_point_is_an_error() {
        let c = fixtures::planted_triple_point(4).unwrap();
        let m = CoverModel::new(&c, Tolerances::default()).unwrap();
        let p = CPoint::new([C::new(2.0, 0.0), one()], [C::new(3.0, 0.0), one()]).unwrap();
        assert!(matches!(m.fiber(&p), Err(Error::TriplePoint)));
    }

    #[test]
    fn vanishing_image_is_an_error() {
        let s = SurfacePoint {
            base: CPoint::new([one(), zero()], [one(), zero()]).unwrap(),
            y: [zero(); 3],
        };
        assert!(canonical_image(&s).is_err());
    }

    #[test]
    fn degenerate_pair_cannot_be_modelled() {
        let c = draw_config(1, 5, 0).unwrap();
        let mut c = c.clone();
        c.delta2 = c.delta1.clone();
        assert!(CoverModel::new(&c, Tolerances::default()).is_err());
    }
}
