//! Empirical checks of the three claims behind the embedding: no base
//! points, injective differential, injective map.
//!
//! Every sample draws from its own ChaCha stream, so reports do not depend
//! on the number of worker threads.

use std::collections::BTreeMap;

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::{canonical_coordinates, canonical_image, CPoint, CoverModel, SurfacePoint, PAIRS};

/// Where a sample lives on `S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stratum {
    Generic,
    /// `R_i = {y_i = 0}`, zero-based.
    Ramification(usize),
    /// `R_h ∩ R_k`, as an index into [`PAIRS`].
    Double(usize),
}

impl Stratum {
    pub const SINGLE: [Stratum; 4] = [
        Stratum::Generic,
        Stratum::Ramification(0),
        Stratum::Ramification(1),
        Stratum::Ramification(2),
    ];

    pub fn name(self) -> String {
        match self {
            Stratum::Generic => "generic".into(),
            Stratum::Ramification(i) => format!("R{}", i + 1),
            Stratum::Double(slot) => {
                let (h, k) = PAIRS[slot];
                format!("R{}R{}", h + 1, k + 1)
            }
        }
    }

    fn code(self) -> u64 {
        match self {
            Stratum::Generic => 0,
            Stratum::Ramification(i) => 1 + i as u64,
            Stratum::Double(slot) => 4 + slot as u64,
        }
    }
}

/// One failed sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeFailure {
    pub stratum: String,
    pub index: usize,
    pub reason: String,
    pub value: Option<f64>,
    /// `[re u0, im u0, re u1, im u1, re v0, im v0, re v1, im v1]`.
    pub point: Vec<f64>,
}

/// Aggregated outcome of a probe.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeReport {
    pub probe: &'static str,
    pub samples: usize,
    pub failures: Vec<ProbeFailure>,
    /// Name of the extremal statistic, e.g. `min_separation`.
    pub metric: &'static str,
    pub value: f64,
    pub per_stratum: BTreeMap<String, usize>,
}

impl ProbeReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl Serialize for ProbeReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(5))?;
        m.serialize_entry("probe", self.probe)?;
        m.serialize_entry("samples", &self.samples)?;
        m.serialize_entry("failures", &self.failures)?;
        m.serialize_entry(self.metric, &self.value.is_finite().then_some(self.value))?;
        m.serialize_entry("strata", &self.per_stratum)?;
        m.end()
    }
}

fn flat(p: &CPoint) -> Vec<f64> {
    [p.u[0], p.u[1], p.v[0], p.v[1]]
        .iter()
        .flat_map(|z| [z.re, z.im])
        .collect()
}

fn rng_for(seed: u64, stratum: Stratum, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((stratum.code() << 40) | index as u64);
    rng
}

struct Outcome {
    stratum: Stratum,
    index: usize,
    value: Option<f64>,
    failure: Option<(String, CPoint)>,
}

fn aggregate(probe: &'static str, metric: &'static str, outcomes: Vec<Outcome>) -> ProbeReport {
    let mut per_stratum = BTreeMap::new();
    let mut failures = Vec::new();
    let mut value = f64::INFINITY;
    for o in &outcomes {
        *per_stratum.entry(o.stratum.name()).or_insert(0) += 1;
        if let Some(v) = o.value {
            value = value.min(v);
        }
        if let Some((reason, p)) = &o.failure {
            failures.push(ProbeFailure {
                stratum: o.stratum.name(),
                index: o.index,
                reason: reason.clone(),
                value: o.value,
                point: flat(p),
            });
        }
    }
    failures.sort_by(|a, b| (&a.stratum, a.index, &a.reason).cmp(&(&b.stratum, b.index, &b.reason)));
    ProbeReport {
        probe,
        samples: outcomes.len(),
        failures,
        metric,
        value,
        per_stratum,
    }
}

/// Draw one surface point on a single stratum.
pub fn sample_point(m: &CoverModel, stratum: Stratum, rng: &mut ChaCha8Rng) -> Result<SurfacePoint, String> {
    let base = match stratum {
        Stratum::Generic => CPoint::random(rng),
        Stratum::Ramification(i) => (0..20)
            .find_map(|_| m.sample_on_curve(i, rng))
            .ok_or("no point found on the branch curve")?,
        Stratum::Double(_) => return Err("double points are enumerated, not sampled".into()),
    };
    let fiber = m.fiber(&base).map_err(|e| e.to_string())?;
    let expected = if stratum == Stratum::Generic { 4 } else { 2 };
    if fiber.len() != expected {
        return Err(format!("fiber has {} points, expected {expected}", fiber.len()));
    }
    Ok(fiber[rng.gen_range(0..fiber.len())])
}

/// Surface points over every numeric double point, with their strata.
fn double_points(m: &CoverModel) -> Vec<(Stratum, usize, CPoint)> {
    m.pair_points
        .iter()
        .enumerate()
        .flat_map(|(slot, pts)| pts.iter().enumerate().map(move |(i, p)| (Stratum::Double(slot), i, *p)))
        .collect()
}

fn tasks(m: &CoverModel, n: usize) -> Vec<(Stratum, usize, Option<CPoint>)> {
    let mut out: Vec<(Stratum, usize, Option<CPoint>)> = Stratum::SINGLE
        .iter()
        .flat_map(|&s| (0..n).map(move |i| (s, i, None)))
        .collect();
    out.extend(double_points(m).into_iter().map(|(s, i, p)| (s, i, Some(p))));
    out
}

fn point_for(m: &CoverModel, seed: u64, stratum: Stratum, index: usize, fixed: Option<CPoint>) -> Result<SurfacePoint, (String, CPoint)> {
    let mut rng = rng_for(seed, stratum, index);
    match fixed {
        Some(p) => {
            let f = m.fiber(&p).map_err(|e| (e.to_string(), p))?;
            if f.len() != 1 {
                return Err((format!("fiber has {} points, expected 1", f.len()), p));
            }
            Ok(f[0])
        }
        None => sample_point(m, stratum, &mut rng).map_err(|e| (e, CPoint::random(&mut rng))),
    }
}

/// Base-point freeness: every sampled image has a coordinate of modulus at
/// least `tol.nonzero`. `n` samples per single stratum plus every double point.
pub fn basepoint_free_probe(m: &CoverModel, n: usize, seed: u64) -> ProbeReport {
    let outcomes = tasks(m, n)
        .into_par_iter()
        .map(|(stratum, index, fixed)| match point_for(m, seed, stratum, index, fixed) {
            Err(failure) => Outcome { stratum, index, value: None, failure: Some(failure) },
            Ok(s) => {
                let size = canonical_coordinates(&s).iter().map(|z| z.norm()).fold(0.0, f64::max);
                let failure = if size < m.tol.nonzero {
                    Some(("image below tol_nonzero".to_string(), s.base))
                } else if !m.fiber_residual_ok(&s) {
                    Some(("fiber residual above tol_fiber".to_string(), s.base))
                } else {
                    None
                };
                Outcome { stratum, index, value: Some(size), failure }
            }
        })
        .collect();
    aggregate("basepoint", "min_max_modulus", outcomes)
}

/// Homogeneous image of the point with local coordinates `(a, b)` around `s`.
///
/// Coordinates are `(s, t)` off the ramification, `(y_i, t)` on `R_1`, `R_2`,
/// `(y_3, s)` on `R_3` and `(y_h, y_k)` on `R_h ∩ R_k`, where `s`, `t` are
/// the affine chart coordinates of the base point. Branches of the square
/// roots are continued from `s`.
pub fn lift(m: &CoverModel, s: &SurfacePoint, stratum: Stratum, a: C, b: C) -> Option<[C; 6]> {
    let base = s.base;
    let zero = C::new(0.0, 0.0);
    let (point, fixed): (CPoint, Vec<(usize, C)>) = match stratum {
        Stratum::Generic => (base.shifted(a, b), vec![]),
        Stratum::Ramification(i) if i < 2 => {
            let x = m.newton1(i, &base, true, b, a * a)?;
            (base.shifted(x, b), vec![(i, a)])
        }
        Stratum::Ramification(_) => {
            let x = m.newton1(2, &base, false, b, a * a)?;
            (base.shifted(b, x), vec![(2, a)])
        }
        Stratum::Double(slot) => {
            let (h, k) = PAIRS[slot];
            let (x, y) = m.newton2(h, k, &base, (a * a, b * b))?;
            (base.shifted(x, y), vec![(h, a), (k, b)])
        }
    };
    let mut y = [zero; 3];
    for (j, yj) in y.iter_mut().enumerate() {
        *yj = match fixed.iter().find(|(i, _)| *i == j) {
            Some(&(_, val)) => val,
            None => {
                let d0 = m.delta(j, &base);
                if d0 == zero {
                    return None;
                }
                s.y[j] * (m.delta(j, &point) / d0).sqrt()
            }
        };
    }
    Some(canonical_coordinates(&SurfacePoint { base: point, y }))
}

/// `sigma_2 / sigma_1` of the central-difference Jacobian of the affine
/// representative of the canonical map, dehomogenized at the largest
/// coordinate of the base image.
pub fn singular_value_ratio(m: &CoverModel, s: &SurfacePoint, stratum: Stratum, h: f64) -> Option<f64> {
    let x0 = canonical_coordinates(s);
    let k = (0..6).max_by(|&a, &b| x0[a].norm().total_cmp(&x0[b].norm()))?;
    let affine = |a: C, b: C| -> Option<[C; 6]> {
        let x = lift(m, s, stratum, a, b)?;
        Some(x.map(|c| c / x[k]))
    };
    let (hp, hm, z) = (C::new(h, 0.0), C::new(-h, 0.0), C::new(0.0, 0.0));
    let (ap, am) = (affine(hp, z)?, affine(hm, z)?);
    let (bp, bm) = (affine(z, hp)?, affine(z, hm)?);
    let col = |p: [C; 6], q: [C; 6]| -> [C; 6] { std::array::from_fn(|i| (p[i] - q[i]) / (2.0 * h)) };
    let (j1, j2) = (col(ap, am), col(bp, bm));
    let g11: f64 = j1.iter().map(|z| z.norm_sqr()).sum();
    let g22: f64 = j2.iter().map(|z| z.norm_sqr()).sum();
    let g12: C = j1.iter().zip(&j2).map(|(a, b)| a.conj() * b).sum();
    let det = (g11 * g22 - g12.norm_sqr()).max(0.0);
    let lmax = 0.5 * (g11 + g22 + ((g11 - g22).powi(2) + 4.0 * g12.norm_sqr()).sqrt());
    if lmax.is_nan() || lmax <= 0.0 {
        return Some(0.0);
    }
    Some((det / lmax / lmax).sqrt())
}

/// Local embedding: the Jacobian has two singular values of comparable size,
/// and the verdict is the same at steps `h` and `h/2`.
pub fn jacobian_rank_probe(m: &CoverModel, n: usize, seed: u64) -> ProbeReport {
    let h = m.tol.step;
    let outcomes = tasks(m, n)
        .into_par_iter()
        .map(|(stratum, index, fixed)| match point_for(m, seed, stratum, index, fixed) {
            Err(failure) => Outcome { stratum, index, value: None, failure: Some(failure) },
            Ok(s) => {
                let r1 = singular_value_ratio(m, &s, stratum, h);
                let r2 = singular_value_ratio(m, &s, stratum, h / 2.0);
                let failure = match (r1, r2) {
                    (Some(a), Some(b)) if (a >= m.tol.rank) != (b >= m.tol.rank) => {
                        Some("rank verdict changes when the step is halved")
                    }
                    (Some(a), Some(_)) if a < m.tol.rank => Some("singular value ratio below tol_rank"),
                    (Some(_), Some(_)) => None,
                    _ => Some("local coordinates degenerate: chart solve failed"),
                };
                Outcome { stratum, index, value: r1, failure: failure.map(|r| (r.to_string(), s.base)) }
            }
        })
        .collect();
    aggregate("jacobian", "min_sv_ratio", outcomes)
}

/// Injectivity: images of distinct points stay `tol.sep` apart. Pairs are
/// random, within one fiber, and among the points over `D1 ∩ D2`.
pub fn injectivity_probe(m: &CoverModel, n_pairs: usize, seed: u64) -> ProbeReport {
    #[derive(Clone, Copy)]
    enum Kind {
        Random,
        Fiber(Stratum),
        OverD1D2(usize, usize),
    }
    let fiber_bases = (n_pairs / 10).max(1);
    let mut jobs: Vec<(Kind, usize)> = (0..n_pairs).map(|i| (Kind::Random, i)).collect();
    for s in Stratum::SINGLE {
        jobs.extend((0..fiber_bases).map(|i| (Kind::Fiber(s), i)));
    }
    let np = m.pair_points[0].len();
    for a in 0..np {
        for b in a + 1..np {
            jobs.push((Kind::OverD1D2(a, b), 0));
        }
    }

    let outcomes: Vec<Vec<Outcome>> = jobs
        .into_par_iter()
        .map(|(kind, index)| {
            let mut out = Vec::new();
            let mut judge = |stratum, index, p: &SurfacePoint, q: &SurfacePoint| {
                let (ip, iq) = match (canonical_image(p), canonical_image(q)) {
                    (Ok(a), Ok(b)) => (a, b),
                    _ => {
                        out.push(Outcome { stratum, index, value: None, failure: Some(("image vanishes".into(), p.base)) });
                        return;
                    }
                };
                let d = ip.distance(&iq);
                let failure = (d < m.tol.sep).then(|| ("images closer than tol_sep".to_string(), p.base));
                out.push(Outcome { stratum, index, value: Some(d), failure });
            };
            match kind {
                Kind::Random => {
                    let mut rng = rng_for(seed ^ 0x5eed, Stratum::Generic, index);
                    let p = sample_point(m, Stratum::Generic, &mut rng);
                    let q = sample_point(m, Stratum::Generic, &mut rng);
                    if let (Ok(p), Ok(q)) = (p, q) {
                        judge(Stratum::Generic, index, &p, &q);
                    }
                }
                Kind::Fiber(stratum) => {
                    let mut rng = rng_for(seed ^ 0xf1be, stratum, index);
                    match sample_point(m, stratum, &mut rng).and_then(|s| m.fiber(&s.base).map_err(|e| e.to_string())) {
                        Ok(fiber) => {
                            for a in 0..fiber.len() {
                                for b in a + 1..fiber.len() {
                                    judge(stratum, index, &fiber[a], &fiber[b]);
                                }
                            }
                        }
                        Err(e) => out.push(Outcome {
                            stratum,
                            index,
                            value: None,
                            failure: Some((e, CPoint::random(&mut rng))),
                        }),
                    }
                }
                Kind::OverD1D2(a, b) => {
                    let (pa, pb) = (m.pair_points[0][a], m.pair_points[0][b]);
                    match (m.fiber(&pa), m.fiber(&pb)) {
                        (Ok(fa), Ok(fb)) => judge(Stratum::Double(0), a * np + b, &fa[0], &fb[0]),
                        _ => out.push(Outcome {
                            stratum: Stratum::Double(0),
                            index: a * np + b,
                            value: None,
                            failure: Some(("fiber over D1 ∩ D2 failed".into(), pa)),
                        }),
                    }
                }
            }
            out
        })
        .collect();
    aggregate("injectivity", "min_separation", outcomes.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branch::{fixtures, sample_config};
    use crate::cover::Tolerances;

    fn model() -> CoverModel {
        let c = sample_config(1, 5, 100).unwrap().config;
        CoverModel::new(&c, Tolerances::default()).unwrap()
    }

    #[test]
    fn certified_config_passes_all_probes() {
        let m = model();
        let b = basepoint_free_probe(&m, 40, 1);
        assert!(b.passed(), "{:?}", b.failures);
        assert_eq!(b.samples, 4 * 40 + 12 + 14 + 14);
        let j = jacobian_rank_probe(&m, 40, 1);
        assert!(j.passed(), "{:?}", j.failures);
        let i = injectivity_probe(&m, 50, 1);
        assert!(i.passed(), "{:?}", i.failures);
        assert!(i.value >= 1e-8);
    }

    #[test]
    fn step_halving_is_stable_at_generic_points() {
        let m = model();
        let mut rng = rng_for(3, Stratum::Generic, 0);
        let s = sample_point(&m, Stratum::Generic, &mut rng).unwrap();
        let a = singular_value_ratio(&m, &s, Stratum::Generic, 1e-6).unwrap();
        let b = singular_value_ratio(&m, &s, Stratum::Generic, 5e-7).unwrap();
        assert!((a - b).abs() < 1e-4 * a.max(1e-12), "{a} vs {b}");
    }

    #[test]
    fn reports_are_deterministic() {
        let m = model();
        let a = serde_json::to_string(&jacobian_rank_probe(&m, 10, 5)).unwrap();
        let b = serde_json::to_string(&jacobian_rank_probe(&m, 10, 5)).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"min_sv_ratio\""));
    }

    #[test]
    fn equal_v_collision_is_caught() {
        let c = fixtures::planted_equal_v(0).unwrap();
        let m = CoverModel::new(&c, Tolerances::default()).unwrap();
        assert_eq!(m.pair_points[0].len(), 12);
        let r = injectivity_probe(&m, 20, 1);
        assert!(r.failures.iter().any(|f| f.stratum == "R1R2"), "{:?}", r.failures);
    }

    #[test]
    fn vertical_component_of_d3_breaks_local_coordinates() {
        let c = fixtures::d3_with_common_factor(2).unwrap();
        let m = CoverModel::new(&c, Tolerances::default()).unwrap();
        assert_eq!(m.d3_vertical.len(), 1);
        let r = jacobian_rank_probe(&m, 20, 1);
        assert!(r.failures.iter().any(|f| f.stratum == "R3"), "{:?}", r.failures);
    }
}
