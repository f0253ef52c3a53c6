//! Integer invariants of the family and dimension counts.

use serde::Serialize;

use super::dim_r;
use super::linear::dim_a;
use crate::bipoly::{dim_v, BiDegree};

/// One row of the Hartshorne-Rao comparison in degree `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HrRow {
    pub m: usize,
    #[serde(rename = "dimA")]
    pub dim_a: usize,
    /// `dim A_m - dim A_{m-2}`: the image misses the multiples of the quadric.
    pub image_bound: usize,
    #[serde(rename = "dimR")]
    pub dim_r: usize,
    /// `dim R_m - image_bound`, a lower bound for `h^1(I_S(m))`.
    pub h1_lower: i64,
    pub forced: bool,
    /// Exact rank of `A_m -> R_m`, when computed.
    pub image_rank: Option<usize>,
}

/// Rows for `0 <= m <= max_degree`; `image_ranks[m]`, when present, is
/// attached as the directly computed rank.
pub fn hartshorne_rao_bounds(max_degree: usize, image_ranks: &[Option<usize>]) -> Vec<HrRow> {
    (0..=max_degree)
        .map(|m| {
            let dim_a_m = dim_a(m as i64);
            let image_bound = dim_a_m - dim_a(m as i64 - 2);
            let h1_lower = dim_r(m) as i64 - image_bound as i64;
            HrRow {
                m,
                dim_a: dim_a_m,
                image_bound,
                dim_r: dim_r(m),
                h1_lower,
                forced: h1_lower > 0,
                image_rank: image_ranks.get(m).copied().flatten(),
            }
        })
        .collect()
}

/// Invariants of the surfaces and of the family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Numerology {
    pub p_g: i64,
    pub q: i64,
    pub chi: i64,
    pub k2: i64,
    /// `3 p_g - 7`.
    pub castelnuovo_lower: i64,
    /// `9 chi`.
    pub bmy_upper: i64,
    /// `10 chi - 2 K^2`.
    pub expected_moduli_dim: i64,
    /// Projective dimensions of the linear systems of the three branch curves.
    pub linear_system_dims: [i64; 3],
    pub family_dim: i64,
    pub aut_q_dim: i64,
    pub moduli_dim: i64,
    pub within_window: bool,
    pub exceeds_expected: bool,
}

pub fn numerology() -> Numerology {
    let p_g = dim_v(BiDegree::new(1, 0)) as i64 * 2 + dim_v(BiDegree::new(0, 1)) as i64;
    let q = 0;
    let chi = 1 + p_g - q;
    let k2 = BiDegree::N.intersect(BiDegree::N);
    let linear_system_dims = [BiDegree::D1, BiDegree::D2, BiDegree::D3].map(|d| dim_v(d) as i64 - 1);
    let family_dim = linear_system_dims.iter().sum();
    // PGL(2) x PGL(2)
    let aut_q_dim = 6;
    let castelnuovo_lower = 3 * p_g - 7;
    let bmy_upper = 9 * chi;
    let expected_moduli_dim = 10 * chi - 2 * k2;
    Numerology {
        p_g,
        q,
        chi,
        k2,
        castelnuovo_lower,
        bmy_upper,
        expected_moduli_dim,
        linear_system_dims,
        family_dim,
        aut_q_dim,
        moduli_dim: family_dim - aut_q_dim,
        within_window: castelnuovo_lower <= k2 && k2 <= bmy_upper,
        exceeds_expected: family_dim - aut_q_dim > expected_moduli_dim,
    }
}

/// Solution `(d, chi)` of `12 chi = (17 - d) d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeveriSolution {
    pub d: i64,
    pub chi: i64,
    /// Ruled out by the slope argument for surfaces in `P4`; reported only.
    pub excluded: bool,
}

/// Integer solutions with `8 <= d <= 16` and `chi >= 1`.
pub fn severi_solutions() -> Vec<SeveriSolution> {
    (8..=16)
        .filter_map(|d: i64| {
            let n = (17 - d) * d;
            (n % 12 == 0 && n / 12 >= 1).then_some(SeveriSolution {
                d,
                chi: n / 12,
                excluded: d == 12,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hartshorne_rao_pattern() {
        let rows = hartshorne_rao_bounds(7, &[]);
        let forced: Vec<usize> = rows.iter().filter(|r| r.forced).map(|r| r.m).collect();
        assert_eq!(forced, [2, 3, 4, 5, 6]);
        let values: Vec<i64> = rows[2..=6].iter().map(|r| r.h1_lower).collect();
        assert_eq!(values, [11, 29, 46, 51, 31]);
        assert_eq!((rows[6].dim_a, rows[6].image_bound, rows[6].dim_r), (462, 336, 367));
        assert_eq!((rows[7].image_bound, rows[7].dim_r, rows[7].h1_lower), (540, 511, -29));
    }

    #[test]
    fn hartshorne_rao_by_direct_binomials() {
        fn binom(n: i64, k: i64) -> i64 {
            if n < k {
                return 0;
            }
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        }
        for r in hartshorne_rao_bounds(8, &[]) {
            let m = r.m as i64;
            let dim_r = if m < 2 { [1, 6][m as usize] } else { 7 + 12 * m * (m - 1) };
            assert_eq!(r.h1_lower, dim_r - (binom(m + 5, 5) - binom(m + 3, 5)));
        }
    }

    #[test]
    fn invariants() {
        let n = numerology();
        assert_eq!((n.p_g, n.q, n.chi, n.k2), (6, 0, 7, 24));
        assert_eq!((n.castelnuovo_lower, n.bmy_upper), (11, 63));
        assert_eq!(n.expected_moduli_dim, 22);
        assert_eq!(n.linear_system_dims, [11, 11, 9]);
        assert_eq!((n.family_dim, n.moduli_dim), (31, 25));
        assert!(n.within_window && n.exceeds_expected);
    }

    #[test]
    fn severi_by_brute_force() {
        let got: Vec<(i64, i64, bool)> = severi_solutions().iter().map(|s| (s.d, s.chi, s.excluded)).collect();
        assert_eq!(got, [(8, 6, false), (9, 6, false), (12, 5, true)]);
        assert!(!got.iter().any(|s| s.0 == 10));
    }
}
