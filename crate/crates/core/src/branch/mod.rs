//! Branch configurations `(delta1, delta2, delta3)` and their certificates.
//!
//! A certificate records every hypothesis of the embedding theorem: smooth
//! branch curves, pairwise transversal intersections, no triple points, and
//! pairwise distinct `v`-coordinates of the twelve points of `D1 ∩ D2`.
//! Transversality and triple-emptiness use sufficient resultant criteria; a
//! configuration they cannot vouch for is rejected and resampled.

pub mod fixtures;
pub mod smooth;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bipoly::{random_bipoly, BiDegree};
use crate::elim::{
    closed_form_delta, decompose_quadratic, is_squarefree, sylvester_resultant_u,
    sylvester_resultant_v, uni_gcd,
};
use crate::{Error, QBiPoly, QUniPoly, Result};

pub use smooth::{check_smooth_curve, modp_scan, SmoothnessReport};

/// Names of the certificate checks, in report order.
pub const CHECK_NAMES: [&str; 9] = [
    "smooth_D1",
    "smooth_D2",
    "smooth_D3",
    "d3_graph",
    "transversal_12",
    "transversal_13",
    "transversal_23",
    "triple_empty",
    "distinct_v_on_D1capD2",
];

/// Three branch curves plus the sampling metadata that produced them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConfig")]
pub struct BranchConfig {
    pub seed: u64,
    pub coeff_bound: u32,
    pub delta1: QBiPoly,
    pub delta2: QBiPoly,
    pub delta3: QBiPoly,
}

#[derive(Deserialize)]
struct RawConfig {
    seed: u64,
    coeff_bound: u32,
    delta1: QBiPoly,
    delta2: QBiPoly,
    delta3: QBiPoly,
}

impl TryFrom<RawConfig> for BranchConfig {
    type Error = Error;
    fn try_from(r: RawConfig) -> Result<Self> {
        BranchConfig::new(r.seed, r.coeff_bound, r.delta1, r.delta2, r.delta3)
    }
}

impl BranchConfig {
    /// Validates bidegrees `(2,3), (2,3), (4,1)` and that no curve is zero.
    pub fn new(
        seed: u64,
        coeff_bound: u32,
        delta1: QBiPoly,
        delta2: QBiPoly,
        delta3: QBiPoly,
    ) -> Result<Self> {
        for (name, p, d) in [
            ("delta1", &delta1, BiDegree::D1),
            ("delta2", &delta2, BiDegree::D2),
            ("delta3", &delta3, BiDegree::D3),
        ] {
            if p.bidegree() != d {
                return Err(Error::BidegreeMismatch {
                    expected: format!("{name} of bidegree {d}"),
                    found: p.bidegree().to_string(),
                });
            }
            if p.is_zero() {
                return Err(Error::ZeroPolynomial(name));
            }
        }
        Ok(BranchConfig {
            seed,
            coeff_bound,
            delta1,
            delta2,
            delta3,
        })
    }

    pub fn deltas(&self) -> [&QBiPoly; 3] {
        [&self.delta1, &self.delta2, &self.delta3]
    }
}

/// Outcome of one certificate check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub pass: bool,
    pub witness: Value,
}

/// Pass/fail record of all hypotheses, with the pairwise `u`-eliminants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
    pub attempts: usize,
    pub res12_degree: usize,
    pub res13_degree: usize,
    pub res23_degree: usize,
    pub res12: QUniPoly,
    pub res13: QUniPoly,
    pub res23: QUniPoly,
}

impl Certificate {
    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect()
    }
}

/// `delta3 = v0 alpha(u) + v1 beta(u)`; `D3` is the graph of
/// `u -> (-beta(u) : alpha(u))` exactly when `gcd(alpha, beta) = 1`.
/// Returns the gcd as witness.
pub fn check_d3_graph(delta3: &QBiPoly) -> Result<(bool, QUniPoly)> {
    if delta3.bidegree() != BiDegree::D3 {
        return Err(Error::BidegreeMismatch {
            expected: BiDegree::D3.to_string(),
            found: delta3.bidegree().to_string(),
        });
    }
    let alpha = QUniPoly::new(delta3.column(0))?;
    let beta = QUniPoly::new(delta3.column(1))?;
    let g = uni_gcd(&alpha, &beta)?;
    Ok((g.degree() == 0, g))
}

/// Resultant data for a pair of branch curves.
#[derive(Clone, Debug)]
pub struct PairCheck {
    pub transversal: bool,
    pub res_u: QUniPoly,
    pub res_v: QUniPoly,
    pub res_u_squarefree: bool,
    pub res_v_squarefree: bool,
}

impl PairCheck {
    fn witness(&self) -> Value {
        json!({
            "res_u_degree": self.res_u.degree(),
            "res_u_squarefree": self.res_u_squarefree,
            "res_v_degree": self.res_v.degree(),
            "res_v_squarefree": self.res_v_squarefree,
        })
    }
}

/// Sufficient transversality test: one of `Res_u`, `Res_v` is squarefree of
/// full degree. Errors when the curves share a component.
pub fn check_pair_transversal(p: &QBiPoly, q: &QBiPoly) -> Result<PairCheck> {
    if p == q {
        return Err(Error::CommonFactor("identical curves".into()));
    }
    let res_u = sylvester_resultant_u(p, q)?;
    let res_v = sylvester_resultant_v(p, q)?;
    if res_u.is_zero_form() || res_v.is_zero_form() {
        return Err(Error::CommonFactor("resultant vanishes identically".into()));
    }
    let res_u_squarefree = is_squarefree(&res_u)?;
    let res_v_squarefree = is_squarefree(&res_v)?;
    Ok(PairCheck {
        transversal: res_u_squarefree || res_v_squarefree,
        res_u,
        res_v,
        res_u_squarefree,
        res_v_squarefree,
    })
}

/// Sufficient test for `D1 ∩ D2 ∩ D3 = ∅`: the eliminants of `D1 ∩ D2` and
/// `D1 ∩ D3` share no root in `v`, or else none in `u`.
pub fn check_triple_empty(c: &BranchConfig) -> Result<bool> {
    for res in [sylvester_resultant_u, sylvester_resultant_v] {
        let r12 = res(&c.delta1, &c.delta2)?;
        let r13 = res(&c.delta1, &c.delta3)?;
        if r12.is_zero_form() || r13.is_zero_form() {
            return Err(Error::CommonFactor("pairwise resultant vanishes".into()));
        }
        if uni_gcd(&r12, &r13)?.degree() == 0 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `Res_u(delta1, delta2)` squarefree of degree 12: the twelve points of
/// `D1 ∩ D2` have distinct `v`-coordinates (which also makes them transversal).
pub fn check_distinct_v(c: &BranchConfig) -> Result<bool> {
    let f = sylvester_resultant_u(&c.delta1, &c.delta2)?;
    if f.is_zero_form() {
        return Err(Error::CommonFactor("Res_u(delta1, delta2) vanishes".into()));
    }
    Ok(f.degree() == 12 && is_squarefree(&f)?)
}

/// `Delta(A1(v) : B1(v) : C1(v) : A2(v) : B2(v) : C2(v))`, the closed-form
/// resultant pulled back along the cubic coefficient map.
pub fn compose_delta_psi(c: &BranchConfig) -> Result<QUniPoly> {
    let q1 = decompose_quadratic(&c.delta1)?;
    let q2 = decompose_quadratic(&c.delta2)?;
    closed_form_delta(&q1, &q2)
}

fn record(name: &str, pass: bool, witness: Value) -> CheckRecord {
    CheckRecord {
        name: name.into(),
        pass,
        witness,
    }
}

fn pair_record(name: &str, r: &Result<PairCheck>) -> CheckRecord {
    match r {
        Ok(pc) => record(name, pc.transversal, pc.witness()),
        Err(e) => record(name, false, json!({ "error": e.to_string() })),
    }
}

/// Run every check on `c`.
pub fn certify(c: &BranchConfig) -> Result<Certificate> {
    let mut checks = Vec::with_capacity(CHECK_NAMES.len());
    for (name, p) in CHECK_NAMES[..3].iter().zip(c.deltas()) {
        let r = check_smooth_curve(p)?;
        checks.push(record(name, r.smooth, serde_json::to_value(&r).expect("serializable")));
    }
    let (graph, g) = check_d3_graph(&c.delta3)?;
    checks.push(record(
        "d3_graph",
        graph,
        json!({ "gcd_alpha_beta": serde_json::to_value(&g).expect("serializable") }),
    ));
    let p12 = check_pair_transversal(&c.delta1, &c.delta2);
    let p13 = check_pair_transversal(&c.delta1, &c.delta3);
    let p23 = check_pair_transversal(&c.delta2, &c.delta3);
    checks.push(pair_record("transversal_12", &p12));
    checks.push(pair_record("transversal_13", &p13));
    checks.push(pair_record("transversal_23", &p23));

    let triple = if p12.is_ok() && p13.is_ok() {
        check_triple_empty(c).map_err(|e| e.to_string())
    } else {
        Err("pairwise resultant vanishes".to_string())
    };
    checks.push(match &triple {
        Ok(pass) => record("triple_empty", *pass, json!({ "criterion": "coprime eliminants" })),
        Err(e) => record("triple_empty", false, json!({ "error": e })),
    });

    let res12 = sylvester_resultant_u(&c.delta1, &c.delta2)?;
    let res13 = sylvester_resultant_u(&c.delta1, &c.delta3)?;
    let res23 = sylvester_resultant_u(&c.delta2, &c.delta3)?;
    let distinct = !res12.is_zero_form() && is_squarefree(&res12)?;
    checks.push(record(
        "distinct_v_on_D1capD2",
        distinct,
        json!({ "res12_squarefree": distinct, "res12_degree": res12.degree() }),
    ));

    Ok(Certificate {
        pass: checks.iter().all(|c| c.pass),
        checks,
        attempts: 1,
        res12_degree: res12.degree(),
        res13_degree: res13.degree(),
        res23_degree: res23.degree(),
        res12,
        res13,
        res23,
    })
}

/// A certified configuration produced by [`sample_config`].
#[derive(Clone, Debug)]
pub struct Sampled {
    pub config: BranchConfig,
    pub certificate: Certificate,
}

/// Draw the configuration for one attempt; attempt `k` uses ChaCha stream `k`
/// of `seed`, so attempts are independent of each other.
pub fn draw_config(seed: u64, coeff_bound: u32, attempt: u64) -> Result<BranchConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt);
    let d1 = random_bipoly(BiDegree::D1, coeff_bound, &mut rng);
    let d2 = random_bipoly(BiDegree::D2, coeff_bound, &mut rng);
    let d3 = random_bipoly(BiDegree::D3, coeff_bound, &mut rng);
    BranchConfig::new(seed, coeff_bound, d1, d2, d3)
}

/// Rejection-sample until a configuration passes every check.
///
/// On exhaustion the error carries a histogram of failed checks.
pub fn sample_config(seed: u64, coeff_bound: u32, max_tries: usize) -> Result<Sampled> {
    if max_tries == 0 || coeff_bound == 0 {
        return Err(Error::InvalidArgument(
            "max_tries and coeff_bound must be positive".into(),
        ));
    }
    let mut histogram: BTreeMap<String, usize> = BTreeMap::new();
    for attempt in 0..max_tries {
        let config = match draw_config(seed, coeff_bound, attempt as u64) {
            Ok(c) => c,
            Err(_) => {
                *histogram.entry("nonzero".into()).or_default() += 1;
                continue;
            }
        };
        let mut cert = certify(&config)?;
        if cert.pass {
            cert.attempts = attempt + 1;
            return Ok(Sampled {
                config,
                certificate: cert,
            });
        }
        for name in cert.failed() {
            *histogram.entry(name.to_string()).or_default() += 1;
        }
    }
    Err(Error::Exhausted {
        tries: max_tries,
        histogram,
    })
}

impl QUniPoly {
    /// Identically zero (all coefficients vanish), at any declared degree.
    pub fn is_zero_form(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}
