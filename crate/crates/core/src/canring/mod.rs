//! The canonical ring `R = ⊕ R_m` of the bidouble cover as an algebra over
//! bihomogeneous forms on `Q`.
//!
//! `R_m` splits by character of `(Z/2)^2` into four slots, each labelled by a
//! product of the square roots `y1, y2, y3` of the branch forms: the trivial
//! slot `1` and `w1 = y2 y3`, `w2 = y1 y3`, `w3 = y1 y2` in even degree,
//! `y1, y2, y3` and `z = y1 y2 y3` in odd degree. A slot is encoded as the bit
//! mask of the `y_i` it contains, so multiplication of slots is XOR, with one
//! factor `delta_i` for every `y_i` that appears twice.

pub mod linear;
pub mod numerology;

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::bipoly::{dim_v, BiDegree};
use crate::branch::BranchConfig;
use crate::scalar::Coeff;
use crate::{BiPoly, Error, QBiPoly, Rational, Result};

pub use linear::{
    build_m2, check_w_lemma, choose_generators, describe_quadric, dim_a, generation_check, relation_count_deg3, DegreeCheck,
    GenerationReport, GradedMap, M2Analysis, RelationCount, SourceImages, WLemma,
};
pub use numerology::{hartshorne_rao_bounds, numerology, severi_solutions, HrRow, Numerology, SeveriSolution};

/// Slot bit masks: bit `i` stands for `y_{i+1}`.
pub type Slot = u8;

pub const ONE: Slot = 0b000;
pub const Y1: Slot = 0b001;
pub const Y2: Slot = 0b010;
pub const Y3: Slot = 0b100;
pub const W1: Slot = Y2 | Y3;
pub const W2: Slot = Y1 | Y3;
pub const W3: Slot = Y1 | Y2;
pub const Z: Slot = Y1 | Y2 | Y3;

const BRANCH_DEGREES: [BiDegree; 3] = [BiDegree::D1, BiDegree::D2, BiDegree::D3];

pub fn slot_name(s: Slot) -> &'static str {
    match s {
        ONE => "1",
        Y1 => "y1",
        Y2 => "y2",
        Y3 => "y3",
        W1 => "w1",
        W2 => "w2",
        W3 => "w3",
        _ => "z",
    }
}

/// The four slots of degree `m`, in basis order.
pub fn slots(m: usize) -> [Slot; 4] {
    if m.is_multiple_of(2) {
        [ONE, W1, W2, W3]
    } else {
        [Y1, Y2, Y3, Z]
    }
}

/// Bidegree of the coefficient forms in slot `s` of `R_m`:
/// `(m N - sum of D_i over y_i in s) / 2`. `None` if `s` does not occur in
/// degree `m`.
pub fn slot_bidegree(m: usize, s: Slot) -> Option<BiDegree> {
    if s > Z || (s.count_ones() as usize) % 2 != m % 2 {
        return None;
    }
    let twice = (0..3)
        .filter(|i| s >> i & 1 == 1)
        .fold(m as i64 * BiDegree::N, |acc, i| acc - BRANCH_DEGREES[i]);
    Some(BiDegree::new(twice.a / 2, twice.b / 2))
}

/// `(slot, bidegree, dimension)` for every slot of `R_m`.
pub fn slot_table(m: usize) -> Vec<(Slot, BiDegree, usize)> {
    slots(m)
        .into_iter()
        .map(|s| {
            let d = slot_bidegree(m, s).expect("slot of matching parity");
            (s, d, dim_v(d))
        })
        .collect()
}

/// `dim R_m` from the Riemann-Roch formula `chi + m(m-1)/2 K^2`.
pub fn dim_r(m: usize) -> usize {
    match m {
        0 => 1,
        1 => 6,
        _ => 7 + 12 * m * (m - 1),
    }
}

/// `dim R_m` as the sum of the slot dimensions.
pub fn dim_r_from_slots(m: usize) -> usize {
    slot_table(m).iter().map(|&(_, _, d)| d).sum()
}

/// Homogeneous element of `R`; absent slots are zero.
#[derive(Clone, PartialEq)]
pub struct RingElement<T> {
    degree: usize,
    components: BTreeMap<Slot, BiPoly<T>>,
}

impl<T: Coeff> RingElement<T> {
    pub fn zero(degree: usize) -> Self {
        RingElement {
            degree,
            components: BTreeMap::new(),
        }
    }

    /// `p * (product of y_i in s)` in degree `m`.
    pub fn from_slot(m: usize, s: Slot, p: BiPoly<T>) -> Result<Self> {
        let d = slot_bidegree(m, s)
            .ok_or_else(|| Error::InvalidArgument(format!("slot {} does not occur in degree {m}", slot_name(s))))?;
        if p.bidegree() != d {
            return Err(Error::BidegreeMismatch {
                expected: d.to_string(),
                found: p.bidegree().to_string(),
            });
        }
        let mut e = Self::zero(m);
        if !p.is_zero() {
            e.components.insert(s, p);
        }
        Ok(e)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn component(&self, s: Slot) -> Option<&BiPoly<T>> {
        self.components.get(&s)
    }

    pub fn components(&self) -> impl Iterator<Item = (Slot, &BiPoly<T>)> {
        self.components.iter().map(|(&s, p)| (s, p))
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    fn accumulate(&mut self, s: Slot, p: BiPoly<T>) {
        let sum = match self.components.remove(&s) {
            Some(q) => &q + &p,
            None => p,
        };
        if !sum.is_zero() {
            self.components.insert(s, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::InvalidArgument("adding ring elements of different degrees".into()));
        }
        let mut out = self.clone();
        for (s, p) in other.components() {
            out.accumulate(s, p.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero(self.degree);
        for (s, p) in self.components() {
            out.accumulate(s, p.scale(c));
        }
        out
    }

    /// Coordinates in the basis of `R_m`: slots in basis order, graded-lex
    /// monomials within each slot.
    pub fn coords(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(dim_r_from_slots(self.degree));
        for (s, _, dim) in slot_table(self.degree) {
            match self.components.get(&s) {
                Some(p) => out.extend(p.coords()),
                None => out.extend(std::iter::repeat_with(T::zero).take(dim)),
            }
        }
        out
    }
}

impl<T: Coeff> std::fmt::Debug for RingElement<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RingElement")
            .field("degree", &self.degree)
            .field(
                "components",
                &self.components.iter().map(|(s, p)| (slot_name(*s), p)).collect::<Vec<_>>(),
            )
            .finish()
    }
}

impl Serialize for RingElement<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Components<'a>(&'a BTreeMap<Slot, QBiPoly>);
        impl Serialize for Components<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (slot, p) in self.0 {
                    m.serialize_entry(slot_name(*slot), p)?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("degree", &self.degree)?;
        m.serialize_entry("components", &Components(&self.components))?;
        m.end()
    }
}

/// A branch configuration bound to the ring, with the products
/// `prod_{i in s} delta_i` cached for every slot mask `s`.
#[derive(Clone)]
pub struct RingContext<T> {
    deltas: [BiPoly<T>; 3],
    delta_products: Vec<BiPoly<T>>,
}

impl<T: Coeff> std::fmt::Debug for RingContext<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RingContext").field("deltas", &self.deltas).finish()
    }
}

/// The ring over exact rationals.
pub type QRing = RingContext<Rational>;

impl<T: Coeff> RingContext<T> {
    pub fn new(deltas: [BiPoly<T>; 3]) -> Result<Self> {
        for (p, d) in deltas.iter().zip(BRANCH_DEGREES) {
            if p.bidegree() != d {
                return Err(Error::BidegreeMismatch {
                    expected: d.to_string(),
                    found: p.bidegree().to_string(),
                });
            }
        }
        let delta_products = (0..8u8)
            .map(|s| {
                (0..3)
                    .filter(|i| s >> i & 1 == 1)
                    .fold(BiPoly::constant(T::one()), |acc, i| acc.mul(&deltas[i]))
            })
            .collect();
        Ok(RingContext { deltas, delta_products })
    }

    pub fn deltas(&self) -> &[BiPoly<T>; 3] {
        &self.deltas
    }

    /// Product in `R`: slots multiply by XOR, and every `y_i` common to both
    /// factors contributes `y_i^2 = delta_i`.
    pub fn mul(&self, x: &RingElement<T>, y: &RingElement<T>) -> Result<RingElement<T>> {
        let m = x.degree + y.degree;
        let mut out = RingElement::zero(m);
        for (a, p) in x.components() {
            for (b, q) in y.components() {
                let s = a ^ b;
                let prod = p.mul(q).mul(&self.delta_products[(a & b) as usize]);
                if Some(prod.bidegree()) != slot_bidegree(m, s) {
                    return Err(Error::Internal(format!(
                        "product in slot {} has bidegree {}",
                        slot_name(s),
                        prod.bidegree()
                    )));
                }
                out.accumulate(s, prod);
            }
        }
        Ok(out)
    }

    /// The basis `y1 u0, y1 u1, y2 u0, y2 u1, y3 v0, y3 v1` of `R_1`.
    pub fn r1_basis(&self) -> [RingElement<T>; 6] {
        let lin = |d: BiDegree, i: usize, j: usize| BiPoly::monomial(d, i, j, T::one());
        let u = BiDegree::new(1, 0);
        let v = BiDegree::new(0, 1);
        [
            (Y1, lin(u, 0, 0)),
            (Y1, lin(u, 1, 0)),
            (Y2, lin(u, 0, 0)),
            (Y2, lin(u, 1, 0)),
            (Y3, lin(v, 0, 0)),
            (Y3, lin(v, 0, 1)),
        ]
        .map(|(s, p)| RingElement::from_slot(1, s, p).expect("degree-one slots"))
    }
}

impl QRing {
    pub fn from_config(c: &BranchConfig) -> Self {
        RingContext::new([c.delta1.clone(), c.delta2.clone(), c.delta3.clone()])
            .expect("validated configuration")
    }
}
