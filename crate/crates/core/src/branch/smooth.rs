//! Smoothness of a curve `{p = 0}` on `P1 x P1`.
//!
//! `Q` is covered by three pieces: the line `u = (0:1)`, the line `v = (0:1)`
//! and the affine plane `u = (1:s)`, `v = (1:t)`. On the lines the singular
//! locus is the common root set of binary forms, decided by one projective gcd.
//! On the plane `s` is eliminated by resultants; every root `t*` of the gcd of
//! the eliminants is then tested by an exact gcd in `s` over `Q[t]/(g)`, with
//! `g` split whenever a zero divisor shows up. A point is reported singular
//! only when that final gcd has positive degree.

use num_traits::Zero;
use serde::Serialize;

use crate::bipoly::{BiPoly, Var};
use crate::elim::{affine, sylvester_resultant_u, uni_gcd_all, UniPoly};
use crate::scalar::{format_rational, Fp, SCAN_PRIME};
use crate::{Error, QBiPoly, Rational, Result};

type Poly = Vec<Rational>;

/// Where a singular point was located.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularWitness {
    /// `"u=(0:1)"`, `"v=(0:1)"` or `"affine"`.
    pub chart: String,
    /// Factor whose roots carry the singular points: a binary form on the
    /// special lines, an affine polynomial in `t = v1/v0` on the plane.
    pub factor: Vec<String>,
    pub note: String,
}

/// Exact verdict with the probabilistic mod-p cross-check attached.
#[derive(Clone, Debug, Serialize)]
pub struct SmoothnessReport {
    pub smooth: bool,
    pub method: &'static str,
    pub singular: Option<SingularWitness>,
    pub modp: ModpScan,
}

/// Result of scanning every `F_p`-rational fiber of the second projection.
#[derive(Clone, Debug, Serialize)]
pub struct ModpScan {
    pub prime: u32,
    pub probabilistic: bool,
    /// `None` when a coefficient does not reduce mod `prime`.
    pub singular_fibers: Option<usize>,
}

fn partials(p: &QBiPoly) -> [QBiPoly; 4] {
    [
        p.partial(Var::U0),
        p.partial(Var::U1),
        p.partial(Var::V0),
        p.partial(Var::V1),
    ]
}

fn witness(chart: &str, factor: &[Rational], note: &str) -> SingularWitness {
    SingularWitness {
        chart: chart.into(),
        factor: factor.iter().map(format_rational).collect(),
        note: note.into(),
    }
}

/// Decide smoothness exactly. Errors on the zero polynomial.
pub fn check_smooth_curve(p: &QBiPoly) -> Result<SmoothnessReport> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("smoothness check"));
    }
    let singular = find_singular(p)?;
    Ok(SmoothnessReport {
        smooth: singular.is_none(),
        method: "exact elimination with back-substitution",
        singular,
        modp: modp_scan(p),
    })
}

fn find_singular(p: &QBiPoly) -> Result<Option<SingularWitness>> {
    let system: Vec<QBiPoly> = std::iter::once(p.clone()).chain(partials(p)).collect();

    // the two special lines
    for (chart, restrict) in [
        ("u=(0:1)", Box::new(|q: &QBiPoly| q.at_u(&[Rational::zero(), one()])) as Box<dyn Fn(&QBiPoly) -> Poly>),
        ("v=(0:1)", Box::new(|q: &QBiPoly| q.at_v(&[Rational::zero(), one()]))),
    ] {
        let forms: Vec<UniPoly<Rational>> = system
            .iter()
            .map(|q| UniPoly::new(restrict(q)))
            .collect::<Result<_>>()?;
        match uni_gcd_all(&forms) {
            None => return Ok(Some(witness(chart, &[], "system vanishes on the whole line"))),
            Some(g) if g.degree() > 0 => {
                return Ok(Some(witness(chart, g.coeffs(), "common root of the restricted system")))
            }
            Some(_) => {}
        }
    }

    // affine plane u = (1:s), v = (1:t); by Euler, p = p_u1 = p_v1 = 0 there
    // forces p_u0 = p_v0 = 0
    let [_, pu1, _, pv1] = partials(p);
    let d = p.bidegree();
    if d.a == 0 {
        // union of v-fibers: singular iff the form in v has a repeated root
        let h = UniPoly::new(p.row(0).to_vec())?;
        return Ok(if crate::elim::is_squarefree(&h)? {
            None
        } else {
            Some(witness("affine", h.coeffs(), "repeated fiber component"))
        });
    }
    let eqs: Vec<&QBiPoly> = [p, &pu1, &pv1].into_iter().filter(|q| !q.is_zero()).collect();
    let mut elim = Vec::new();
    for q in &eqs[1..] {
        // a factor free of u already is an eliminant
        let r = if q.bidegree().a == 0 {
            affine::trim(q.row(0).to_vec())
        } else {
            sylvester_resultant_u(p, q)?.affine()
        };
        if !r.is_empty() {
            elim.push(r);
        }
    }
    if elim.is_empty() {
        return Ok(Some(witness(
            "affine",
            &[],
            "all eliminants vanish identically (conservative reject)",
        )));
    }
    let g = elim
        .iter()
        .skip(1)
        .fold(elim[0].clone(), |acc, e| affine::gcd(&acc, e));
    if affine::degree(&g).unwrap_or(0) == 0 {
        return Ok(None);
    }
    let g = squarefree(&g);
    let in_s: Vec<Vec<Poly>> = eqs.iter().map(|q| s_coefficients(q)).collect();
    Ok(common_root_over(&in_s, g).map(|h| {
        witness(
            "affine",
            &h,
            "common root confirmed by gcd over Q[t]/(factor)",
        )
    }))
}

fn one() -> Rational {
    num_traits::One::one()
}

fn squarefree(g: &[Rational]) -> Poly {
    let h = affine::gcd(g, &affine::derivative(g));
    affine::monic(&affine::divrem(g, &h).0)
}

/// Coefficients of `s^i` as polynomials in `t`, in the chart `u0 = v0 = 1`.
fn s_coefficients(q: &QBiPoly) -> Vec<Poly> {
    (0..=q.bidegree().a as usize)
        .map(|i| affine::trim(q.row(i).to_vec()))
        .collect()
}

enum GcdStep {
    Split(Poly, Poly),
    Done(Vec<Poly>),
}

/// Reduce a polynomial in `s` modulo `g` coefficientwise and strip vanishing
/// leading coefficients.
fn reduce(f: &[Poly], g: &[Rational]) -> Vec<Poly> {
    let mut out: Vec<Poly> = f.iter().map(|c| affine::divrem(c, g).1).collect();
    while out.last().is_some_and(|c| c.is_empty()) {
        out.pop();
    }
    out
}

/// Invert `c` in `Q[t]/(g)`, or report a splitting of `g`.
fn invert_or_split(c: &[Rational], g: &[Rational]) -> std::result::Result<Poly, (Poly, Poly)> {
    let (h, s) = affine::gcd_with_cofactor(c, g);
    if affine::degree(&h) == Some(0) {
        Ok(affine::divrem(&s, g).1)
    } else {
        let (cof, _) = affine::divrem(g, &h);
        Err((h, affine::monic(&cof)))
    }
}

fn mulmod(a: &[Rational], b: &[Rational], g: &[Rational]) -> Poly {
    affine::divrem(&affine::mul(a, b), g).1
}

/// Euclid over `Q[t]/(g)`, splitting `g` on zero divisors.
fn gcd_mod(a: &[Poly], b: &[Poly], g: &[Rational]) -> GcdStep {
    let mut a = reduce(a, g);
    let mut b = reduce(b, g);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.is_empty() {
            return match a.last() {
                None => GcdStep::Done(a),
                Some(lc) => match invert_or_split(lc, g) {
                    Ok(_) => GcdStep::Done(a),
                    Err((h1, h2)) => GcdStep::Split(h1, h2),
                },
            };
        }
        let inv = match invert_or_split(b.last().expect("nonempty"), g) {
            Ok(inv) => inv,
            Err((h1, h2)) => return GcdStep::Split(h1, h2),
        };
        // a mod b
        let db = b.len() - 1;
        while a.len() > db {
            let k = a.len() - 1 - db;
            let c = mulmod(a.last().expect("nonempty"), &inv, g);
            for (i, bi) in b.iter().enumerate() {
                let t = mulmod(&c, bi, g);
                a[k + i] = affine::divrem(&affine::sub(&a[k + i], &t), g).1;
            }
            while a.last().is_some_and(|x| x.is_empty()) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
}

/// A factor of `g` over whose roots every polynomial in `polys` has a common
/// root in `s`, if there is one.
fn common_root_over(polys: &[Vec<Poly>], g: Poly) -> Option<Poly> {
    let mut acc = reduce(&polys[0], &g);
    for f in &polys[1..] {
        match gcd_mod(&acc, f, &g) {
            GcdStep::Split(h1, h2) => {
                return common_root_over(polys, h1).or_else(|| common_root_over(polys, h2))
            }
            GcdStep::Done(r) => acc = r,
        }
    }
    // zero gcd: the whole fiber; positive degree: a genuine root in s
    if acc.len() != 1 {
        Some(g)
    } else {
        None
    }
}

type F = Fp<SCAN_PRIME>;

/// Count `F_p`-rational `v`-fibers (plus `u = (0:1)`) containing a singular
/// point over `F_p`-bar. A zero count says nothing certain; it only
/// corroborates the exact verdict.
pub fn modp_scan(p: &QBiPoly) -> ModpScan {
    let reduced: Option<BiPoly<F>> = p
        .coords()
        .iter()
        .map(F::from_rational)
        .collect::<Option<Vec<_>>>()
        .map(|c| BiPoly::from_coords(p.bidegree(), &c));
    let singular_fibers = reduced.map(|q| {
        let system: Vec<BiPoly<F>> = std::iter::once(q.clone())
            .chain([Var::U0, Var::U1, Var::V0, Var::V1].map(|v| q.partial(v)))
            .collect();
        let zero = F::zero();
        let one = F::new(1);
        let mut count = 0;
        let fibers = (0..SCAN_PRIME)
            .map(|t| [one, F::new(t as i64)])
            .chain(std::iter::once([zero, one]));
        for v in fibers {
            let forms: Vec<UniPoly<F>> = system
                .iter()
                .map(|f| UniPoly::new(f.at_v(&v)).expect("nonempty"))
                .collect();
            match uni_gcd_all(&forms) {
                None => count += 1,
                Some(g) if g.degree() > 0 => count += 1,
                _ => {}
            }
        }
        count
    });
    ModpScan {
        prime: SCAN_PRIME,
        probabilistic: true,
        singular_fibers,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{BiDegree, QBiPoly};

    fn poly(d: (i64, i64), rows: &[&[i64]]) -> QBiPoly {
        QBiPoly::from_int_rows(BiDegree::new(d.0, d.1), rows).unwrap()
    }

    #[test]
    fn nonreduced_monomial_is_singular() {
        let p = QBiPoly::int_monomial(BiDegree::new(2, 3), 0, 0, 1);
        let r = check_smooth_curve(&p).unwrap();
        assert!(!r.smooth);
    }

    #[test]
    fn zero_input_errors() {
        assert!(check_smooth_curve(&QBiPoly::zero(BiDegree::new(2, 3))).is_err());
    }

    #[test]
    fn smooth_diagonal_curve() {
        // u0 v0 - u1 v1 is the graph of an isomorphism
        let p = poly((1, 1), &[&[1, 0], &[0, -1]]);
        assert!(check_smooth_curve(&p).unwrap().smooth);
    }

    #[test]
    fn node_at_affine_point() {
        // (u0 v1 - u1 v0)(u0 v1 + u1 v0 - 2 u1 v1) meets itself on the plane
        let a = poly((1, 1), &[&[0, 1], &[-1, 0]]);
        let b = poly((1, 1), &[&[0, 1], &[1, -2]]);
        let r = check_smooth_curve(&(&a * &b)).unwrap();
        assert!(!r.smooth);
        assert_eq!(r.singular.unwrap().chart, "affine");
    }

    #[test]
    fn node_at_irrational_point() {
        // two (1,1) curves meeting at s = t with s^2 = 2
        // C1: s - t = 0 ; C2: s t - 2 = 0
        let c1 = poly((1, 1), &[&[0, -1], &[1, 0]]);
        let c2 = poly((1, 1), &[&[-2, 0], &[0, 1]]);
        let r = check_smooth_curve(&(&c1 * &c2)).unwrap();
        assert!(!r.smooth);
        let w = r.singular.unwrap();
        assert_eq!(w.chart, "affine");
        assert_eq!(w.factor, vec!["-2", "0", "1"]);
    }

    #[test]
    fn spurious_eliminant_roots_are_not_singular() {
        // the fiber over each root of the gcd must be tested, not assumed
        let p = poly((2, 3), &[&[1, 0, 0, 3], &[2, -1, 1, 0], &[-1, 1, 0, 2]]);
        let r = check_smooth_curve(&p).unwrap();
        let scan = r.modp.singular_fibers.unwrap();
        assert_eq!(r.smooth, scan == 0);
    }

    #[test]
    fn modp_scan_flags_rational_node() {
        let a = poly((1, 1), &[&[0, 1], &[-1, 0]]);
        let b = poly((1, 1), &[&[0, 1], &[1, -2]]);
        let scan = modp_scan(&(&a * &b));
        assert!(scan.singular_fibers.unwrap() >= 1);
        assert!(scan.probabilistic);
        let smooth = poly((1, 1), &[&[1, 0], &[0, -1]]);
        assert_eq!(modp_scan(&smooth).singular_fibers, Some(0));
    }
}
