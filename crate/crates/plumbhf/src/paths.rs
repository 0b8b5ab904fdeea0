//! The full-path algorithm over initial vectors.
//!
//! From an initial vector, repeatedly add `2 PD(v)` at any vertex whose
//! pairing sits at `-m(v)` until no such vertex remains. The terminal
//! vector classifies the path: good when every pairing lies in
//! `[m(v), -m(v)-2]`, bad when some pairing overshot past `-m(v)`. The
//! verdict does not depend on the order vertices are pushed; the
//! recorded step sequence does, so the vertex choice rule is explicit.

use num::BigRational;

use crate::error::{Error, Result};
use crate::graph::IntersectionForm;
use crate::lattice::{
    degree, enumerate_initial, partition_spinc, CharVector, SpinCClass,
};

pub const DEFAULT_STEP_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Good,
    Bad,
}

/// Vertex choice rule when several vertices are ready to push.
#[derive(Debug, Clone)]
pub enum Tiebreak {
    /// Always the smallest ready vertex index. The default; paths are
    /// reproducible.
    SmallestIndex,
    /// Pseudo-random choice from a seed, for verdict-independence checks.
    Seeded(u64),
    /// Replay an explicit push sequence. Every scripted vertex must be
    /// ready when its turn comes and the sequence must end at a terminal
    /// vector, otherwise the run errors.
    Script(Vec<usize>),
}

#[derive(Debug, Clone)]
pub struct FullPath {
    pub start: CharVector,
    /// Vertex indices pushed, in order (0-based).
    pub steps: Vec<usize>,
    pub terminal: CharVector,
    pub verdict: Verdict,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

pub fn run_full_path(
    start: &CharVector,
    form: &IntersectionForm,
    tiebreak: &Tiebreak,
    step_budget: usize,
) -> Result<FullPath> {
    let n = form.n();
    let mut x: Vec<i32> = start.pairings().to_vec();
    let mut steps = Vec::new();
    let mut rng_state = match tiebreak {
        Tiebreak::Seeded(seed) => *seed,
        _ => 0,
    };
    let mut script = match tiebreak {
        Tiebreak::Script(s) => Some(s.iter().copied()),
        _ => None,
    };

    loop {
        if steps.len() > step_budget {
            return Err(Error::StepBudget {
                budget: step_budget,
            });
        }
        let ready: Vec<usize> = (0..n).filter(|&v| x[v] == -form.weight(v)).collect();
        let v = if let Some(it) = script.as_mut() {
            match it.next() {
                Some(v) if ready.contains(&v) => v,
                Some(v) => {
                    return Err(Error::InvalidInput(format!(
                        "scripted vertex {v} is not ready to push"
                    )))
                }
                None if ready.is_empty() => break,
                None => {
                    return Err(Error::InvalidInput(
                        "script ended before the path reached a terminal vector".into(),
                    ))
                }
            }
        } else if ready.is_empty() {
            break;
        } else {
            match tiebreak {
                Tiebreak::SmallestIndex => ready[0],
                Tiebreak::Seeded(_) => {
                    ready[(splitmix64(&mut rng_state) % ready.len() as u64) as usize]
                }
                Tiebreak::Script(_) => unreachable!(),
            }
        };
        steps.push(v);
        for (xi, &r) in x.iter_mut().zip(form.row(v)) {
            *xi += 2 * r;
        }
    }

    let good = (0..n).all(|v| {
        let m = form.weight(v);
        m <= x[v] && x[v] <= -m - 2
    });
    Ok(FullPath {
        start: start.clone(),
        steps,
        terminal: CharVector::from_raw(x),
        verdict: if good { Verdict::Good } else { Verdict::Bad },
    })
}

/// The initial vectors with good full paths, with their degrees and
/// spin-c partition. Vectors are in lexicographic order.
#[derive(Debug, Clone)]
pub struct GoodVectorSet {
    pub vectors: Vec<CharVector>,
    pub degrees: Vec<BigRational>,
    /// Index into `classes` for each vector.
    pub spinc_of: Vec<usize>,
    pub classes: Vec<SpinCClass>,
}

impl GoodVectorSet {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn index_of(&self, k: &CharVector) -> Option<usize> {
        self.vectors.binary_search(k).ok()
    }

    pub fn max_degree_in_class(&self, class: usize) -> &BigRational {
        self.classes[class]
            .member_ids
            .iter()
            .map(|&i| &self.degrees[i])
            .max()
            .expect("non-empty class")
    }
}

/// Runs the full-path algorithm over every initial vector. The verdict
/// per start does not depend on the tiebreak, so the default rule is
/// used throughout.
pub fn good_vectors(form: &IntersectionForm) -> Result<GoodVectorSet> {
    let mut vectors = Vec::new();
    for k in enumerate_initial(form)? {
        let path = run_full_path(&k, form, &Tiebreak::SmallestIndex, DEFAULT_STEP_BUDGET)?;
        if path.verdict == Verdict::Good {
            vectors.push(k);
        }
    }
    let degrees: Vec<BigRational> = vectors.iter().map(|k| degree(k, form)).collect();
    let classes = partition_spinc(&vectors, form);
    let mut spinc_of = vec![0usize; vectors.len()];
    for (ci, class) in classes.iter().enumerate() {
        for &m in &class.member_ids {
            spinc_of[m] = ci;
        }
    }
    Ok(GoodVectorSet {
        vectors,
        degrees,
        spinc_of,
        classes,
    })
}

/// Correction term of a spin-c class: the negative of the largest
/// degree among its good vectors.
pub fn correction_term(good: &GoodVectorSet, class: usize) -> BigRational {
    -good.max_degree_in_class(class).clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::intersection_form;
    use num::BigInt;

    fn cv(x: &[i32]) -> CharVector {
        CharVector::from_raw(x.to_vec())
    }

    #[test]
    fn d4_good_path_steps() {
        let form = intersection_form(&fixtures::d4()).unwrap();
        let p = run_full_path(
            &cv(&[0, 2, 0, 0]),
            &form,
            &Tiebreak::SmallestIndex,
            DEFAULT_STEP_BUDGET,
        )
        .unwrap();
        assert_eq!(p.steps, vec![1, 0, 2, 3, 0, 1]);
        assert_eq!(p.verdict, Verdict::Good);
        assert_eq!(p.terminal.pairings(), &[0, -2, 0, 0]);
    }

    #[test]
    fn d4_zero_vector_terminates_immediately() {
        let form = intersection_form(&fixtures::d4()).unwrap();
        let p = run_full_path(
            &cv(&[0, 0, 0, 0]),
            &form,
            &Tiebreak::SmallestIndex,
            DEFAULT_STEP_BUDGET,
        )
        .unwrap();
        assert!(p.steps.is_empty());
        assert_eq!(p.verdict, Verdict::Good);
    }

    #[test]
    fn d4_bad_path() {
        let form = intersection_form(&fixtures::d4()).unwrap();
        let p = run_full_path(
            &cv(&[2, 0, 0, 0]),
            &form,
            &Tiebreak::SmallestIndex,
            DEFAULT_STEP_BUDGET,
        )
        .unwrap();
        assert_eq!(p.verdict, Verdict::Bad);
        // the published sequence for this start pushes the fourth vertex
        // last; replay it and check it is a legal full path
        let scripted = run_full_path(
            &cv(&[2, 0, 0, 0]),
            &form,
            &Tiebreak::Script(vec![0, 1, 2, 3]),
            DEFAULT_STEP_BUDGET,
        )
        .unwrap();
        assert_eq!(scripted.steps, vec![0, 1, 2, 3]);
        assert_eq!(scripted.verdict, Verdict::Bad);
        // bad terminals overshoot by exactly one push
        assert!(scripted
            .terminal
            .pairings()
            .iter()
            .enumerate()
            .any(|(v, &x)| x == -form.weight(v) + 2));
    }

    #[test]
    fn script_rejects_illegal_push() {
        let form = intersection_form(&fixtures::d4()).unwrap();
        let err = run_full_path(
            &cv(&[0, 2, 0, 0]),
            &form,
            &Tiebreak::Script(vec![0]),
            DEFAULT_STEP_BUDGET,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn d4_good_vectors() {
        let form = intersection_form(&fixtures::d4()).unwrap();
        let good = good_vectors(&form).unwrap();
        let want = vec![
            cv(&[0, 0, 0, 0]),
            cv(&[0, 0, 0, 2]),
            cv(&[0, 0, 2, 0]),
            cv(&[0, 2, 0, 0]),
        ];
        assert_eq!(good.vectors, want);
        assert_eq!(good.classes.len(), 4);
        for class in 0..4 {
            assert_eq!(good.classes[class].member_ids.len(), 1);
        }
    }

    #[test]
    fn sigma_3_5_7_good_vectors_and_correction() {
        let form = intersection_form(&fixtures::sigma_3_5_7()).unwrap();
        let good = good_vectors(&form).unwrap();
        let mut k1 = vec![0i32; 12];
        k1[1] = -1;
        let mut k2 = vec![0i32; 12];
        k2[1] = 1;
        let mut a = vec![0i32; 12]; // conjugate of the published third generator
        a[1] = -1;
        a[11] = 2;
        let mut b = vec![0i32; 12];
        b[1] = -1;
        b[5] = 2;
        let mut want = vec![cv(&k1), cv(&k2), cv(&a), cv(&b)];
        want.sort();
        assert_eq!(good.vectors, want);
        assert_eq!(good.classes.len(), 1);
        assert_eq!(
            correction_term(&good, 0),
            BigRational::from(BigInt::from(-2))
        );
    }

    #[test]
    fn star_good_vector_count() {
        let form = intersection_form(&fixtures::seifert_star()).unwrap();
        let good = good_vectors(&form).unwrap();
        assert_eq!(good.len(), 138);
        assert_eq!(good.classes.len(), 128);
        let rank2 = good
            .classes
            .iter()
            .filter(|c| c.member_ids.len() == 2)
            .count();
        assert_eq!(rank2, 10);
    }

    #[test]
    fn pairings_never_drop_below_weight() {
        let form = intersection_form(&fixtures::sigma_3_5_7()).unwrap();
        for k in enumerate_initial(&form).unwrap().into_iter().step_by(17) {
            let mut x: Vec<i32> = k.pairings().to_vec();
            loop {
                let ready = (0..form.n()).find(|&v| x[v] == -form.weight(v));
                let Some(v) = ready else { break };
                for (xi, &r) in x.iter_mut().zip(form.row(v)) {
                    *xi += 2 * r;
                }
                for v in 0..form.n() {
                    assert!(x[v] >= form.weight(v));
                }
            }
        }
    }
}
