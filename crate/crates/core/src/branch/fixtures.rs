//! Deliberately defective configurations, one per certificate check.

use crate::bipoly::{BiDegree, QPoint};
use crate::scalar::FromInt;
use crate::{BiPoly, QBiPoly, Rational, Result};

use super::{certify, draw_config, BranchConfig};

fn point(u0: i64, u1: i64, v0: i64, v1: i64) -> QPoint {
    QPoint::new(
        [Rational::from_int(u0), Rational::from_int(u1)],
        [Rational::from_int(v0), Rational::from_int(v1)],
    )
    .expect("nonzero coordinates")
}

/// Subtract a multiple of `u0^a v0^b` so that `p` vanishes at `x`.
fn force_zero(p: &QBiPoly, x: &QPoint) -> QBiPoly {
    let d = p.bidegree();
    let m = BiPoly::monomial(d, 0, 0, Rational::from_int(1));
    let c = p.eval_at(x) / m.eval_at(x);
    p - &m.scale(&c)
}

/// All three curves pass through `(u, v) = ((2:1), (3:1))`.
pub fn planted_triple_point(seed: u64) -> Result<BranchConfig> {
    let c = draw_config(seed, 5, 0)?;
    let x = point(2, 1, 3, 1);
    BranchConfig::new(
        seed,
        5,
        force_zero(&c.delta1, &x),
        force_zero(&c.delta2, &x),
        force_zero(&c.delta3, &x),
    )
}

/// Make `p` vanish at both `(u=(1:1), v=(3:1))` and `(u=(2:1), v=(3:1))`
/// by adjusting the coefficients of `u0^2 v0^3` and `u1^2 v0^3`.
fn force_two_zeros(p: &QBiPoly) -> QBiPoly {
    let d = p.bidegree();
    let (x1, x2) = (point(1, 1, 3, 1), point(2, 1, 3, 1));
    let m0 = BiPoly::monomial(d, 0, 0, Rational::from_int(1));
    let m2 = BiPoly::monomial(d, 2, 0, Rational::from_int(1));
    let (a, b, r) = (m0.eval_at(&x1), m2.eval_at(&x1), p.eval_at(&x1));
    let (c, e, s) = (m0.eval_at(&x2), m2.eval_at(&x2), p.eval_at(&x2));
    let det = &a * &e - &b * &c;
    let x = (&r * &e - &b * &s) / &det;
    let y = (&a * &s - &r * &c) / &det;
    &(p - &m0.scale(&x)) - &m2.scale(&y)
}

/// Two points of `D1 ∩ D2` share the fiber `v = (3:1)`. Seeds are scanned
/// from `seed` until `distinct_v_on_D1capD2` is the only failing check.
pub fn planted_equal_v(seed: u64) -> Result<BranchConfig> {
    for s in seed.. {
        let c = draw_config(s, 5, 0)?;
        let cfg = BranchConfig::new(
            s,
            5,
            force_two_zeros(&c.delta1),
            force_two_zeros(&c.delta2),
            c.delta3,
        )?;
        if certify(&cfg)?.failed() == ["distinct_v_on_D1capD2"] {
            return Ok(cfg);
        }
    }
    unreachable!("seed space exhausted")
}

/// `delta3 = (u0 - 2 u1) * (v0 a(u) + v1 b(u))` with `a`, `b` cubic.
pub fn d3_with_common_factor(seed: u64) -> Result<BranchConfig> {
    let c = draw_config(seed, 5, 0)?;
    let linear = QBiPoly::from_int_rows(BiDegree::new(1, 0), &[&[1], &[-2]])?;
    let rest = QBiPoly::from_fn(BiDegree::new(3, 1), |i, j| c.delta3.coeff(i, j).clone());
    BranchConfig::new(seed, 5, c.delta1, c.delta2, linear.mul(&rest))
}

/// `delta2 = delta1`.
pub fn degenerate_pair(seed: u64) -> Result<BranchConfig> {
    let c = draw_config(seed, 5, 0)?;
    BranchConfig::new(seed, 5, c.delta1.clone(), c.delta1, c.delta3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn triple_point_is_planted_and_rejected() {
        let c = planted_triple_point(4).unwrap();
        let x = point(2, 1, 3, 1);
        for p in c.deltas() {
            assert!(p.eval_at(&x).is_zero());
        }
        let cert = certify(&c).unwrap();
        assert!(!cert.pass);
        assert!(!cert.check("triple_empty").unwrap().pass);
    }

    #[test]
    fn equal_v_fails_only_that_check() {
        let c = planted_equal_v(0).unwrap();
        for p in [&c.delta1, &c.delta2] {
            assert!(p.eval_at(&point(1, 1, 3, 1)).is_zero());
            assert!(p.eval_at(&point(2, 1, 3, 1)).is_zero());
        }
        assert_eq!(certify(&c).unwrap().failed(), ["distinct_v_on_D1capD2"]);
    }

    #[test]
    fn common_factor_breaks_graph_check() {
        let c = d3_with_common_factor(2).unwrap();
        let cert = certify(&c).unwrap();
        assert!(!cert.check("d3_graph").unwrap().pass);
        assert!(!cert.pass);
    }

    #[test]
    fn degenerate_pair_is_rejected() {
        let c = degenerate_pair(1).unwrap();
        let cert = certify(&c).unwrap();
        assert!(!cert.check("transversal_12").unwrap().pass);
        assert!(!cert.pass);
    }
}
