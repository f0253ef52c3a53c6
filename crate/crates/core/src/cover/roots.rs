//! Complex roots of univariate polynomials in double precision.

use num_complex::Complex64 as C;

fn horner(c: &[C], x: C) -> (C, C) {
    let mut p = C::new(0.0, 0.0);
    let mut dp = C::new(0.0, 0.0);
    for a in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

/// All roots of `sum c[k] x^k`, by Aberth-Ehrlich iteration followed by a
/// few Newton steps on the original coefficients.
///
/// Trailing exact zeros are dropped; a constant has no roots.
pub fn poly_roots(c: &[C]) -> Vec<C> {
    let n = match c.iter().rposition(|z| *z != C::new(0.0, 0.0)) {
        Some(n) if n > 0 => n,
        _ => return Vec::new(),
    };
    let lead = c[n];
    let monic: Vec<C> = c[..=n].iter().map(|z| z / lead).collect();

    // Fujiwara bound on the root moduli
    let radius = (0..n)
        .map(|k| {
            let e = (n - k) as f64;
            let f = if k == 0 { 2.0 } else { 1.0 };
            (monic[k].norm() / f).powf(1.0 / e)
        })
        .fold(0.0_f64, f64::max)
        * 2.0;
    let radius = if radius > 0.0 { radius } else { 1.0 };
    let mut z: Vec<C> = (0..n)
        .map(|k| C::from_polar(radius * 0.5, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect();

    for _ in 0..500 {
        let mut moved = 0.0_f64;
        for k in 0..n {
            let (p, dp) = horner(&monic, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: C = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let w = ratio / (C::new(1.0, 0.0) - ratio * repulsion);
            if w.is_finite() {
                z[k] -= w;
                moved = moved.max(w.norm() / z[k].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(&monic, *r);
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            *r -= step;
        }
    }
    z
}

/// Roots of a binary form `sum c[k] x0^(d-k) x1^k` as normalized points of
/// `P1`: `(1 : x)` for affine roots and `(0 : 1)` when the top coefficient is
/// below `tiny` relative to the largest one.
pub fn form_roots(c: &[C], tiny: f64) -> Vec<[C; 2]> {
    let scale = c.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let mut affine = c.to_vec();
    let mut at_infinity = 0;
    while affine.last().is_some_and(|z| z.norm() <= tiny * scale) {
        affine.pop();
        at_infinity += 1;
    }
    let one = C::new(1.0, 0.0);
    let mut out: Vec<[C; 2]> = poly_roots(&affine).into_iter().map(|x| [one, x]).collect();
    if at_infinity > 0 {
        out.push([C::new(0.0, 0.0), one]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_roots(rs: &[C]) -> Vec<C> {
        rs.iter().fold(vec![C::new(1.0, 0.0)], |acc, r| {
            let mut out = vec![C::new(0.0, 0.0); acc.len() + 1];
            for (k, a) in acc.iter().enumerate() {
                out[k + 1] += a;
                out[k] -= a * r;
            }
            out
        })
    }

    #[test]
    fn recovers_planted_roots() {
        let planted: Vec<C> = (0..12)
            .map(|k| C::new(k as f64 - 5.5, (k * k % 7) as f64 - 3.0))
            .collect();
        let found = poly_roots(&from_roots(&planted));
        assert_eq!(found.len(), 12);
        for r in &planted {
            let best = found.iter().map(|z| (z - r).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-8, "root {r} missed by {best}");
        }
    }

    #[test]
    fn binary_form_roots_include_infinity() {
        // x0 x1 (x1 - 2 x0): roots (1:0), (1:2), (0:1)
        let c = [C::new(0.0, 0.0), C::new(-2.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0)];
        let mut rs = form_roots(&c, 1e-14);
        rs.sort_by(|a, b| a[0].norm().total_cmp(&b[0].norm()).then(a[1].re.total_cmp(&b[1].re)));
        assert_eq!(rs.len(), 3);
        assert_eq!(rs[0][0].norm(), 0.0);
        assert!(rs[1][1].norm() < 1e-12);
        assert!((rs[2][1] - C::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn constants_have_no_roots() {
        assert!(poly_roots(&[C::new(3.0, 0.0)]).is_empty());
        assert!(poly_roots(&[]).is_empty());
    }
}
