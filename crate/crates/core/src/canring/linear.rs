//! Linear maps into the graded pieces of `R`: the multiplication map `m2`,
//! the `W` lemma, the choice of extra degree-two generators, and the rank
//! checks showing `1, z_1, ..., z_11` generate `R` over `A = Sym(R_1)`.
//!
//! Every map respects the slot decomposition, so ranks are computed block by
//! block with fraction-free integer elimination.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::Serialize;

use super::{dim_r, slot_name, slot_table, QRing, RingElement, ONE};
use crate::bipoly::{monomial_basis, BiDegree};
use crate::linalg::{bareiss_pivots, bareiss_rank, field_rank, integer_rows, nullspace, transpose};
use crate::scalar::format_rational;
use crate::{BiPoly, Error, QBiPoly, Rational, Result};

/// Matrix of a map into `R_m` in the canonical bases; rows index the
/// target basis.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedMap {
    pub degree: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub matrix: Vec<Vec<Rational>>,
}

impl GradedMap {
    pub fn from_images(degree: usize, images: &[RingElement<Rational>]) -> Self {
        let cols: Vec<Vec<Rational>> = images.iter().map(RingElement::coords).collect();
        let target_dim = dim_r(degree);
        GradedMap {
            degree,
            source_dim: images.len(),
            target_dim,
            matrix: transpose(&cols, target_dim),
        }
    }
}

/// Monomials of `A_k = Sym^k(R_1)` in the variables `x1..x6` (sorted index
/// tuples in lexicographic order) together with their images in `R_k`.
#[derive(Clone, Debug)]
pub struct SourceImages {
    pub monomials: Vec<Vec<Vec<u8>>>,
    pub images: Vec<Vec<RingElement<Rational>>>,
}

fn multisets(k: usize) -> Vec<Vec<u8>> {
    fn go(start: u8, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..6 {
            cur.push(i);
            go(i, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, k, &mut Vec::new(), &mut out);
    out
}

/// `C(k + 5, 5)`, the number of monomials of degree `k` in six variables.
pub fn dim_a(k: i64) -> usize {
    if k < 0 {
        return 0;
    }
    let k = k as usize;
    (1..=5).fold(1, |acc, i| acc * (k + i) / i)
}

impl SourceImages {
    /// Images of all monomials of degree at most `max_degree`, each built from
    /// its prefix by one ring multiplication.
    pub fn new(ring: &QRing, max_degree: usize) -> Result<Self> {
        let x = ring.r1_basis();
        let one = RingElement::from_slot(0, ONE, QBiPoly::constant(Rational::one()))?;
        let mut monomials = vec![vec![Vec::new()]];
        let mut images = vec![vec![one]];
        for k in 1..=max_degree {
            let index: HashMap<&[u8], usize> = monomials[k - 1]
                .iter()
                .enumerate()
                .map(|(i, m)| (m.as_slice(), i))
                .collect();
            let mons = multisets(k);
            let imgs = mons
                .iter()
                .map(|m| {
                    let prefix = &images[k - 1][index[&m[..k - 1]]];
                    ring.mul(prefix, &x[m[k - 1] as usize])
                })
                .collect::<Result<Vec<_>>>()?;
            monomials.push(mons);
            images.push(imgs);
        }
        Ok(SourceImages { monomials, images })
    }

    pub fn max_degree(&self) -> usize {
        self.images.len() - 1
    }

    fn index_of(&self, mono: &[u8]) -> Option<usize> {
        self.monomials.get(mono.len())?.iter().position(|m| m == mono)
    }
}

/// Independent columns of a family of elements of `R_m`, computed slot by
/// slot; returned sorted.
pub fn rank_profile(m: usize, columns: &[RingElement<Rational>]) -> Vec<usize> {
    let mut pivots = Vec::new();
    for (s, _, dim) in slot_table(m) {
        if dim == 0 {
            continue;
        }
        let (idx, coords): (Vec<usize>, Vec<Vec<Rational>>) = columns
            .iter()
            .enumerate()
            .filter_map(|(j, e)| Some((j, e.component(s)?.coords())))
            .unzip();
        if idx.is_empty() {
            continue;
        }
        let block = integer_rows(&transpose(&coords, dim));
        pivots.extend(bareiss_pivots(block).into_iter().map(|c| idx[c]));
    }
    pivots.sort_unstable();
    pivots
}

/// Rank, kernel and cokernel of `m2 : Sym^2(R_1) -> R_2`.
#[derive(Clone, Debug)]
pub struct M2Analysis {
    pub map: GradedMap,
    pub rank: usize,
    pub kernel: Vec<Vec<Rational>>,
    /// The single kernel vector is `x1 x4 - x2 x3` up to scale.
    pub kernel_is_quadric: bool,
    pub cokernel_by_slot: BTreeMap<&'static str, usize>,
    /// Images of the 21 products, in `Sym^2` order.
    pub images: Vec<RingElement<Rational>>,
}

pub fn build_m2(ring: &QRing) -> Result<M2Analysis> {
    let src = SourceImages::new(ring, 2)?;
    let images = src.images[2].clone();
    let map = GradedMap::from_images(2, &images);
    let pivots = rank_profile(2, &images);
    let kernel = nullspace(map.matrix.clone(), map.source_dim);

    let i14 = src.index_of(&[0, 3]).expect("x1 x4");
    let i23 = src.index_of(&[1, 2]).expect("x2 x3");
    let kernel_is_quadric = kernel.len() == 1 && {
        let v = &kernel[0];
        !v[i14].is_zero()
            && v.iter()
                .enumerate()
                .all(|(j, c)| match j {
                    j if j == i14 => true,
                    j if j == i23 => *c == -v[i14].clone(),
                    _ => c.is_zero(),
                })
    };

    let mut cokernel_by_slot = BTreeMap::new();
    for (s, _, dim) in slot_table(2) {
        let in_slot = pivots.iter().filter(|&&j| images[j].component(s).is_some()).count();
        cokernel_by_slot.insert(slot_name(s), dim - in_slot);
    }
    Ok(M2Analysis {
        rank: pivots.len(),
        map,
        kernel,
        kernel_is_quadric,
        cokernel_by_slot,
        images,
    })
}

/// Rank of `(P1, P2, P3) -> P1 delta1 + P2 delta2 + P3 delta3` from
/// `V(2,0)^2 ⊕ V(0,2)` to `V(4,3)`, by two elimination orders.
#[derive(Clone, Debug, Serialize)]
pub struct WLemma {
    pub rank_fraction_free: usize,
    pub rank_transposed: usize,
    pub holds: bool,
}

pub fn w_lemma_matrix(ring: &QRing) -> Vec<Vec<Rational>> {
    let d = ring.deltas();
    let mut cols = Vec::with_capacity(9);
    for (delta, shape) in [(&d[0], BiDegree::new(2, 0)), (&d[1], BiDegree::new(2, 0)), (&d[2], BiDegree::new(0, 2))] {
        for (i, j) in monomial_basis(shape) {
            cols.push(BiPoly::monomial(shape, i, j, Rational::one()).mul(delta).coords());
        }
    }
    transpose(&cols, 20)
}

pub fn check_w_lemma(ring: &QRing) -> WLemma {
    let m = w_lemma_matrix(ring);
    let rank_fraction_free = bareiss_rank(integer_rows(&m));
    let rank_transposed = field_rank(transpose(&m, 9));
    WLemma {
        rank_fraction_free,
        rank_transposed,
        holds: rank_fraction_free == 9 && rank_transposed == 9,
    }
}

/// Row-reduced set of vectors with incremental membership tests.
struct Span {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Span {
    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        for (p, r) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, y) in v.iter_mut().zip(r) {
                    *x -= &f * y;
                }
            }
        }
        v
    }

    fn insert(&mut self, v: Vec<Rational>) -> bool {
        let v = self.reduce(v);
        let Some(p) = v.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        let v: Vec<Rational> = v.into_iter().map(|c| c * &inv).collect();
        for (_, r) in self.rows.iter_mut() {
            if !r[p].is_zero() {
                let f = r[p].clone();
                for (x, y) in r.iter_mut().zip(&v) {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}

/// Greedy graded-lex scan of the monomials of the trivial slot `V(4,3)`,
/// keeping those that enlarge `Im(m2)`. Returns exactly 11 elements.
pub fn choose_generators(m2: &M2Analysis) -> Result<Vec<RingElement<Rational>>> {
    let mut span = Span { rows: Vec::new() };
    for e in &m2.images {
        span.insert(e.coords());
    }
    let shape = BiDegree::N;
    let mut gens = Vec::new();
    for (i, j) in monomial_basis(shape) {
        let cand = RingElement::from_slot(2, ONE, BiPoly::monomial(shape, i, j, Rational::one()))?;
        if span.insert(cand.coords()) {
            gens.push(cand);
        }
    }
    if gens.len() != 11 {
        return Err(Error::Internal(format!("found {} generators beyond Im(m2), expected 11", gens.len())));
    }
    Ok(gens)
}

/// Degree-three evaluation map `A_3 ⊕ (A_1 ⊗ span(z_j)) -> R_3`.
#[derive(Clone, Debug, Serialize)]
pub struct RelationCount {
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub kernel_dim: usize,
}

pub fn relation_count_deg3(ring: &QRing, gens: &[RingElement<Rational>]) -> Result<RelationCount> {
    let src = SourceImages::new(ring, 3)?;
    let mut cols = src.images[3].clone();
    for x in &src.images[1] {
        for z in gens {
            cols.push(ring.mul(x, z)?);
        }
    }
    let rank = rank_profile(3, &cols).len();
    if rank != dim_r(3) {
        return Err(Error::Internal(format!("degree-3 generation map has rank {rank}, expected {}", dim_r(3))));
    }
    Ok(RelationCount {
        source_dim: cols.len(),
        target_dim: dim_r(3),
        rank,
        kernel_dim: cols.len() - rank,
    })
}

/// Rank of `A_m · 1 + sum_j A_{m-2} · z_j -> R_m` for one degree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeCheck {
    pub m: usize,
    pub dim_r: usize,
    pub rank: usize,
    /// Rank of `A_m -> R_m` alone.
    pub image_rank_a: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenerationReport {
    /// Classes of the generators in `R_2 / Im(m2)` are independent.
    pub minimal_at_2: bool,
    pub quotient_dim_2: usize,
    pub degrees: Vec<DegreeCheck>,
}

impl GenerationReport {
    pub fn pass(&self) -> bool {
        self.minimal_at_2 && self.degrees.iter().all(|d| d.pass)
    }
}

fn degree_check(ring: &QRing, src: &SourceImages, gens: &[RingElement<Rational>], m: usize) -> Result<DegreeCheck> {
    let mut cols = src.images[m].clone();
    let n_a = cols.len();
    if m >= 2 {
        for x in &src.images[m - 2] {
            for z in gens {
                cols.push(ring.mul(x, z)?);
            }
        }
    }
    let pivots = rank_profile(m, &cols);
    let image_rank_a = pivots.iter().filter(|&&j| j < n_a).count();
    Ok(DegreeCheck {
        m,
        dim_r: dim_r(m),
        rank: pivots.len(),
        image_rank_a,
        pass: pivots.len() == dim_r(m),
    })
}

/// Checks generation in every degree `2 <= m <= max_degree`, and minimality
/// in degree 2.
pub fn generation_check(ring: &QRing, gens: &[RingElement<Rational>], max_degree: usize) -> Result<GenerationReport> {
    let src = SourceImages::new(ring, max_degree.max(2))?;
    let degrees = (2..=max_degree)
        .map(|m| degree_check(ring, &src, gens, m))
        .collect::<Result<Vec<_>>>()?;
    let two = match degrees.first() {
        Some(d) => d.clone(),
        None => degree_check(ring, &src, gens, 2)?,
    };
    let quotient_dim_2 = two.rank - two.image_rank_a;
    Ok(GenerationReport {
        minimal_at_2: quotient_dim_2 == gens.len() && two.pass,
        quotient_dim_2,
        degrees,
    })
}

/// Human-readable form of a kernel vector of `m2`, e.g. `x1*x4 - x2*x3`.
pub fn describe_quadric(v: &[Rational]) -> String {
    let pairs = multisets(2);
    let lead = v.iter().find(|c| !c.is_zero()).cloned().unwrap_or_else(Rational::one);
    let mut out = String::new();
    for (c, p) in v.iter().zip(&pairs) {
        if c.is_zero() {
            continue;
        }
        let c = c / &lead;
        let term = format!("x{}*x{}", p[0] + 1, p[1] + 1);
        let neg = c < Rational::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        let coeff = if mag.is_one() { String::new() } else { format!("{}*", format_rational(&mag)) };
        match (out.is_empty(), neg) {
            (true, false) => out.push_str(&format!("{coeff}{term}")),
            (true, true) => out.push_str(&format!("-{coeff}{term}")),
            (false, false) => out.push_str(&format!(" + {coeff}{term}")),
            (false, true) => out.push_str(&format!(" - {coeff}{term}")),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branch::{fixtures, sample_config};
    use crate::linalg::rational_rank;
    use crate::scalar::FromInt;

    fn ring() -> QRing {
        QRing::from_config(&sample_config(1, 5, 100).unwrap().config)
    }

    #[test]
    fn monomial_counts() {
        for k in 0..=7 {
            assert_eq!(multisets(k).len(), dim_a(k as i64));
        }
        assert_eq!(dim_a(3), 56);
        assert_eq!(dim_a(-1), 0);
        assert_eq!(multisets(2)[3], vec![0, 3]);
    }

    #[test]
    fn m2_structure() {
        let a = build_m2(&ring()).unwrap();
        assert_eq!((a.map.target_dim, a.map.source_dim), (31, 21));
        assert_eq!(a.rank, 20);
        assert_eq!(rational_rank(&a.map.matrix), 20);
        assert!(a.kernel_is_quadric);
        assert_eq!(describe_quadric(&a.kernel[0]), "x1*x4 - x2*x3");
        assert_eq!(a.cokernel_by_slot["1"], 11);
        assert_eq!(a.cokernel_by_slot.values().sum::<usize>(), 11);
    }

    #[test]
    fn w_lemma_and_degenerations() {
        let w = check_w_lemma(&ring());
        assert!(w.holds);

        let degenerate = fixtures::degenerate_pair(1).unwrap();
        let w = check_w_lemma(&QRing::from_config(&degenerate));
        assert!(w.rank_fraction_free <= 6);
        assert_eq!(w.rank_fraction_free, w.rank_transposed);
    }

    #[test]
    fn generators_and_relations() {
        let r = ring();
        let m2 = build_m2(&r).unwrap();
        let gens = choose_generators(&m2).unwrap();
        assert_eq!(gens.len(), 11);
        assert!(gens.iter().all(|g| g.components().all(|(s, _)| s == ONE)));
        assert_eq!(choose_generators(&m2).unwrap(), gens);
        let rel = relation_count_deg3(&r, &gens).unwrap();
        assert_eq!((rel.source_dim, rel.rank, rel.kernel_dim), (122, 79, 43));
        let g = generation_check(&r, &gens, 4).unwrap();
        assert!(g.pass(), "{g:?}");
        assert_eq!(g.quotient_dim_2, 11);
        assert_eq!(g.degrees.last().unwrap().rank, 151);
    }

    #[test]
    fn describe_handles_scalars() {
        let mut v = vec![Rational::zero(); 21];
        v[3] = Rational::from_int(-2);
        v[7] = Rational::from_int(2);
        assert_eq!(describe_quadric(&v), "x1*x4 - x2*x3");
        v[0] = Rational::from_int(3);
        assert_eq!(describe_quadric(&v), "x1*x1 - 2/3*x1*x4 + 2/3*x2*x3");
    }
}
