//! Characteristic covectors of the intersection lattice.
//!
//! A covector is stored as its pairing row `x[i] = <K, v_i>`, so entry
//! `i` must have the parity of the weight `m(v_i)`. Squares are taken
//! with the inverse form, `K^2 = x^T I^{-1} x`.

use num::{BigInt, BigRational, Zero};
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::IntersectionForm;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CharVector(Vec<i32>);

impl CharVector {
    pub fn new(pairings: Vec<i32>, form: &IntersectionForm) -> Result<Self> {
        if pairings.len() != form.n() {
            return Err(Error::InvalidInput(format!(
                "expected {} pairings, got {}",
                form.n(),
                pairings.len()
            )));
        }
        for (i, &x) in pairings.iter().enumerate() {
            let w = form.weight(i);
            if (x - w).rem_euclid(2) != 0 {
                return Err(Error::NotCharacteristic {
                    index: i,
                    value: x,
                    weight: w,
                });
            }
        }
        Ok(CharVector(pairings))
    }

    pub(crate) fn from_raw(pairings: Vec<i32>) -> Self {
        CharVector(pairings)
    }

    pub fn pairings(&self) -> &[i32] {
        &self.0
    }

    pub fn pairing(&self, v: usize) -> i32 {
        self.0[v]
    }

    pub fn negated(&self) -> CharVector {
        CharVector(self.0.iter().map(|&x| -x).collect())
    }
}

impl fmt::Display for CharVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// `K + 2 PD(v)`: adds twice row `v` of the intersection form to the
/// pairing row. Preserves the characteristic parity at every vertex.
pub fn add_2pd(k: &CharVector, v: usize, form: &IntersectionForm) -> CharVector {
    let row = form.row(v);
    CharVector(
        k.pairings()
            .iter()
            .zip(row)
            .map(|(&x, &r)| x + 2 * r)
            .collect(),
    )
}

/// `K^2 = x^T I^{-1} x`, exact.
pub fn square(k: &CharVector, form: &IntersectionForm) -> BigRational {
    let y = form.solve(k.pairings());
    k.pairings()
        .iter()
        .zip(&y)
        .map(|(&x, yi)| yi * BigRational::from(BigInt::from(x)))
        .sum()
}

/// `(K^2 + n) / 4`.
pub fn degree(k: &CharVector, form: &IntersectionForm) -> BigRational {
    (square(k, form) + BigRational::from(BigInt::from(form.n() as i64)))
        / BigRational::from(BigInt::from(4))
}

/// Initial vectors satisfy `m(v) + 2 <= <K,v> <= -m(v)` at every vertex.
pub fn is_initial(k: &CharVector, form: &IntersectionForm) -> bool {
    (0..form.n()).all(|v| {
        let m = form.weight(v);
        let x = k.pairing(v);
        m + 2 <= x && x <= -m
    })
}

const ENUMERATION_LIMIT: usize = 4_000_000;

fn enumerate_box(lows: &[i32], highs: &[i32]) -> Result<Vec<CharVector>> {
    let mut count: u64 = 1;
    for (&lo, &hi) in lows.iter().zip(highs) {
        if hi < lo {
            return Ok(Vec::new());
        }
        count = count.saturating_mul(((hi - lo) / 2 + 1) as u64);
        if count > ENUMERATION_LIMIT as u64 {
            return Err(Error::ResourceLimit(format!(
                "enumeration of more than {ENUMERATION_LIMIT} vectors"
            )));
        }
    }
    let n = lows.len();
    let mut out = Vec::with_capacity(count as usize);
    let mut cur: Vec<i32> = lows.to_vec();
    loop {
        out.push(CharVector(cur.clone()));
        // odometer in lexicographic order, last coordinate fastest
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if cur[i] + 2 <= highs[i] {
                cur[i] += 2;
                break;
            }
            cur[i] = lows[i];
        }
    }
}

/// All characteristic vectors with `|<K,v>| <= -m(v) + 2*nlevel` for
/// every vertex, in lexicographic order.
pub fn enumerate_b_n(form: &IntersectionForm, nlevel: u32) -> Result<Vec<CharVector>> {
    let bounds: Vec<i32> = (0..form.n())
        .map(|v| -form.weight(v) + 2 * nlevel as i32)
        .collect();
    let lows: Vec<i32> = bounds.iter().map(|&b| -b).collect();
    enumerate_box(&lows, &bounds)
}

/// All initial vectors, in lexicographic order.
pub fn enumerate_initial(form: &IntersectionForm) -> Result<Vec<CharVector>> {
    let lows: Vec<i32> = (0..form.n()).map(|v| form.weight(v) + 2).collect();
    let highs: Vec<i32> = (0..form.n()).map(|v| -form.weight(v)).collect();
    enumerate_box(&lows, &highs)
}

/// Number of initial vectors, `prod_v (-m(v))`, without enumerating.
pub fn initial_candidate_count(form: &IntersectionForm) -> BigInt {
    let mut c = BigInt::from(1);
    for v in 0..form.n() {
        let per = (-form.weight(v)).max(0);
        c *= BigInt::from(per);
    }
    c
}

/// Two characteristic vectors restrict to the same spin-c structure on
/// the boundary iff every entry of `(1/2) I^{-1} (K1 - K2)` is an
/// integer.
pub fn same_spinc(k1: &CharVector, k2: &CharVector, form: &IntersectionForm) -> bool {
    let diff: Vec<i32> = k1
        .pairings()
        .iter()
        .zip(k2.pairings())
        .map(|(&a, &b)| a - b)
        .collect();
    form.solve(&diff).iter().all(is_even_integer)
}

fn is_even_integer(r: &BigRational) -> bool {
    r.is_integer() && (r.numer() % 2u8).is_zero()
}

/// Canonical spin-c key: `I^{-1} x` reduced mod 2 entrywise.
fn spinc_key(k: &CharVector, form: &IntersectionForm) -> Vec<BigRational> {
    let two = BigRational::from(BigInt::from(2));
    form.solve(k.pairings())
        .into_iter()
        .map(|e| {
            let q = (&e / &two).floor();
            e - q * &two
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinCClass {
    /// Lexicographically least member.
    pub representative: CharVector,
    /// Indices into the input slice, ascending.
    pub member_ids: Vec<usize>,
}

/// Groups vectors into spin-c classes. Classes are sorted by their
/// representative, members by index; the class count never exceeds
/// `|det I|`.
pub fn partition_spinc(vectors: &[CharVector], form: &IntersectionForm) -> Vec<SpinCClass> {
    let mut groups: BTreeMap<Vec<BigRational>, Vec<usize>> = BTreeMap::new();
    for (i, k) in vectors.iter().enumerate() {
        groups.entry(spinc_key(k, form)).or_default().push(i);
    }
    let mut classes: Vec<SpinCClass> = groups
        .into_values()
        .map(|member_ids| {
            let representative = member_ids
                .iter()
                .map(|&i| vectors[i].clone())
                .min()
                .expect("non-empty class");
            SpinCClass {
                representative,
                member_ids,
            }
        })
        .collect();
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    classes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::intersection_form;
    use num::rational::Ratio;

    fn rat(n: i64, d: i64) -> BigRational {
        Ratio::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn add_2pd_d4_leaf() {
        let form = intersection_form(&fixtures::d4()).unwrap();
        let k = CharVector::new(vec![0, 2, 0, 0], &form).unwrap();
        let pushed = add_2pd(&k, 1, &form);
        assert_eq!(pushed.pairings(), &[2, -2, 0, 0]);
    }

    #[test]
    fn add_2pd_round_trip() {
        let form = intersection_form(&fixtures::d4()).unwrap();
        let k = CharVector::new(vec![0, 0, 0, 0], &form).unwrap();
        let there = add_2pd(&k, 2, &form);
        let back = CharVector::from_raw(
            there
                .pairings()
                .iter()
                .zip(form.row(2))
                .map(|(&x, &r)| x - 2 * r)
                .collect(),
        );
        assert_eq!(back, k);
    }

    #[test]
    fn squares_and_degrees_d4() {
        let form = intersection_form(&fixtures::d4()).unwrap();
        let k1 = CharVector::new(vec![0, 0, 0, 0], &form).unwrap();
        let k2 = CharVector::new(vec![0, 2, 0, 0], &form).unwrap();
        assert_eq!(square(&k1, &form), rat(0, 1));
        assert_eq!(degree(&k1, &form), rat(1, 1));
        assert_eq!(square(&k2, &form), rat(-4, 1));
        assert_eq!(degree(&k2, &form), rat(0, 1));
    }

    #[test]
    fn degrees_eight_vertex_star() {
        let form = intersection_form(&fixtures::seifert_star()).unwrap();
        let k = CharVector::new(vec![2, 0, 0, 0, 0, 0, 0, -1], &form).unwrap();
        assert_eq!(degree(&k, &form), rat(7, 8));
        let k = CharVector::new(vec![0, 0, 0, 0, 0, 0, 0, -1], &form).unwrap();
        assert_eq!(degree(&k, &form), rat(15, 8));
    }

    #[test]
    fn parity_enforced() {
        let form = intersection_form(&fixtures::d4()).unwrap();
        let err = CharVector::new(vec![1, 0, 0, 0], &form).unwrap_err();
        assert!(matches!(
            err,
            Error::NotCharacteristic {
                index: 0,
                value: 1,
                weight: -2
            }
        ));
    }

    #[test]
    fn enumerate_single_vertex() {
        let g = crate::graph::PlumbingGraph::parse("v 0 -2\n").unwrap();
        let form = intersection_form(&g).unwrap();
        let b0 = enumerate_b_n(&form, 0).unwrap();
        let got: Vec<_> = b0.iter().map(|k| k.pairing(0)).collect();
        assert_eq!(got, vec![-2, 0, 2]);
    }

    #[test]
    fn enumeration_counts_d4() {
        let form = intersection_form(&fixtures::d4()).unwrap();
        assert_eq!(enumerate_b_n(&form, 0).unwrap().len(), 81);
        assert_eq!(enumerate_initial(&form).unwrap().len(), 16);
        assert_eq!(initial_candidate_count(&form), BigInt::from(16));
    }

    #[test]
    fn enumeration_count_star() {
        let form = intersection_form(&fixtures::seifert_star()).unwrap();
        assert_eq!(initial_candidate_count(&form), BigInt::from(768));
        assert_eq!(enumerate_initial(&form).unwrap().len(), 768);
    }

    #[test]
    fn lexicographic_order() {
        let form = intersection_form(&fixtures::d4()).unwrap();
        let all = enumerate_b_n(&form, 0).unwrap();
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
    }

    #[test]
    fn spinc_d4() {
        let form = intersection_form(&fixtures::d4()).unwrap();
        let a = CharVector::new(vec![0, 2, 0, 0], &form).unwrap();
        let b = CharVector::new(vec![0, 0, 2, 0], &form).unwrap();
        assert!(same_spinc(&a, &a, &form));
        assert!(!same_spinc(&a, &b, &form));
    }

    #[test]
    fn spinc_homology_sphere_is_unique() {
        let form = intersection_form(&fixtures::sigma_3_5_7()).unwrap();
        let mut a = vec![0i32; 12];
        a[1] = -1;
        let mut b = vec![0i32; 12];
        b[1] = 1;
        b[11] = -2;
        let a = CharVector::new(a, &form).unwrap();
        let b = CharVector::new(b, &form).unwrap();
        assert!(same_spinc(&a, &b, &form));
    }

    #[test]
    fn partition_b0_class_count_is_det() {
        let form = intersection_form(&fixtures::d4()).unwrap();
        let all = enumerate_b_n(&form, 0).unwrap();
        let classes = partition_spinc(&all, &form);
        assert_eq!(classes.len(), 4);
        let total: usize = classes.iter().map(|c| c.member_ids.len()).sum();
        assert_eq!(total, all.len());
    }
}
