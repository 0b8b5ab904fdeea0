//! Equivalence of `U^m ⊗ K` elements and finite models of `Ker U^{N+1}`.
//!
//! A state is a pair (exponent, characteristic vector). For a vertex `v`
//! with `2n = <K,v> + m(v)` the states `(m, K)` and `(m+n, K + 2PD(v))`
//! are equivalent whenever both exponents are non-negative; the closure
//! of these moves is the relation everything here computes with.
//!
//! At depth `N` the admissible states are `(m, K)` with `m <= N` and
//! `K` inside the box `|<K,v>| <= -m(v) + 2(N-m)`. A state that steps
//! outside the box (or past exponent `N`) is equivalent to a state of
//! exponent `> N`, which pins its entire class to the distinguished
//! ZERO class of the depth-`N` quotient: an out-of-box pairing can
//! always be moved past the exponent bound in one push. Consequently
//! the classes of a breadth-first closure seeded on `U^j ⊗ K` for the
//! good vectors `K` and `j <= N` are exactly the nonzero classes, and
//! their duals form a basis of `Ker U^{N+1}`. The `U` action shifts the
//! exponent up by one, with anything escaping the range absorbed by
//! ZERO.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::collections::hash_map::Entry;
use std::collections::HashMap;

use indexmap::IndexSet;
use num::{BigInt, BigRational, ToPrimitive};

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::graph::IntersectionForm;
use crate::lattice::{degree, CharVector};
use crate::paths::GoodVectorSet;

pub const DEFAULT_BRANCH_BUDGET: usize = 500_000;
const STATE_LIMIT: usize = 30_000_000;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UElement {
    pub exponent: u32,
    pub vector: CharVector,
}

impl UElement {
    pub fn new(exponent: u32, vector: CharVector) -> Self {
        UElement { exponent, vector }
    }
}

/// One-move neighbours of `e` in the equivalence graph: for each vertex,
/// the push `(m+n, K+2PD(v))` and the reverse pull `(m-n', K-2PD(v))`,
/// kept only when the exponent stays non-negative.
pub fn move_targets(e: &UElement, form: &IntersectionForm) -> Vec<UElement> {
    let n = form.n();
    let x = e.vector.pairings();
    let mut out = Vec::new();
    for v in 0..n {
        let m = form.weight(v);
        let fwd = e.exponent as i64 + ((x[v] + m) / 2) as i64;
        if fwd >= 0 {
            let vec: Vec<i32> = x.iter().zip(form.row(v)).map(|(&a, &r)| a + 2 * r).collect();
            out.push(UElement::new(fwd as u32, CharVector::from_raw(vec)));
        }
        let rev = e.exponent as i64 - ((x[v] - m) / 2) as i64;
        if rev >= 0 {
            let vec: Vec<i32> = x.iter().zip(form.row(v)).map(|(&a, &r)| a - 2 * r).collect();
            out.push(UElement::new(rev as u32, CharVector::from_raw(vec)));
        }
    }
    out
}

/// Terminal vectors of the reduction that walks full paths, then drops
/// the exponent at a vertex with `<K,v> + m(v) = -2` when possible,
/// else raises it at a vertex with `<K,v> + m(v) = 2`, repeating until
/// nothing applies. All branch choices are explored.
#[derive(Debug, Clone)]
pub struct RootSet {
    pub roots: BTreeSet<CharVector>,
    /// False when the branch budget cut the search short.
    pub complete: bool,
}

pub fn root_vectors(e: &UElement, form: &IntersectionForm, branch_budget: usize) -> RootSet {
    let n = form.n();
    let mut visited: HashSet<(u32, Vec<i32>)> = HashSet::new();
    let mut stack = vec![(e.exponent, e.vector.pairings().to_vec())];
    visited.insert(stack[0].clone());
    let mut roots = BTreeSet::new();
    let mut complete = true;

    let push = |x: &[i32], v: usize| -> Vec<i32> {
        x.iter().zip(form.row(v)).map(|(&a, &r)| a + 2 * r).collect()
    };

    while let Some((exp, x)) = stack.pop() {
        let ready: Vec<usize> = (0..n).filter(|&v| x[v] == -form.weight(v)).collect();
        let succ: Vec<(u32, Vec<i32>)> = if !ready.is_empty() {
            ready.iter().map(|&v| (exp, push(&x, v))).collect()
        } else {
            let drops: Vec<usize> = (0..n).filter(|&v| x[v] + form.weight(v) == -2).collect();
            if exp >= 1 && !drops.is_empty() {
                drops.iter().map(|&v| (exp - 1, push(&x, v))).collect()
            } else {
                let raises: Vec<usize> =
                    (0..n).filter(|&v| x[v] + form.weight(v) == 2).collect();
                if raises.is_empty() {
                    roots.insert(CharVector::from_raw(x));
                    continue;
                }
                raises.iter().map(|&v| (exp + 1, push(&x, v))).collect()
            }
        };
        for s in succ {
            if visited.len() > branch_budget {
                complete = false;
                break;
            }
            if visited.insert(s.clone()) {
                stack.push(s);
            }
        }
        if !complete {
            break;
        }
    }
    RootSet { roots, complete }
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new() -> Self {
        UnionFind {
            parent: Vec::new(),
            size: Vec::new(),
        }
    }

    fn push(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        self.size.push(1);
        id
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (big, small) = if self.size[ra as usize] >= self.size[rb as usize] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small as usize] = big;
        self.size[big as usize] += self.size[small as usize];
    }
}

#[derive(Debug, Clone)]
pub struct ModelClass {
    pub spinc: usize,
    pub grading: BigRational,
    /// Lexicographically least (exponent, vector) member.
    pub rep: UElement,
    /// Class of the exponent-shift `U^{m+1} ⊗ K`; `None` when it is ZERO.
    pub shift_up: Option<u32>,
    pub members: u64,
}

/// Classes of the depth-`N` quotient, dual basis of `Ker U^{N+1}`.
#[derive(Debug, Clone)]
pub struct FiniteModel {
    pub depth: u32,
    /// Sorted by (spinc, grading, representative).
    pub classes: Vec<ModelClass>,
    seed_classes: Vec<Vec<Option<u32>>>,
    spinc_ranges: Vec<std::ops::Range<usize>>,
    pub states_visited: usize,
}

fn state_key(exp: u32, x: &[i16]) -> Box<[i16]> {
    let mut k = Vec::with_capacity(x.len() + 1);
    k.push(exp as i16);
    k.extend_from_slice(x);
    k.into_boxed_slice()
}

pub fn build_model(
    good: &GoodVectorSet,
    form: &IntersectionForm,
    depth: u32,
) -> Result<FiniteModel> {
    let n = form.n();
    let weights: Vec<i32> = form.weights();

    // box bounds per residual level j = depth - exponent
    let bound = |v: usize, j: u32| -> i32 { -weights[v] + 2 * j as i32 };
    let max_row: i32 = (0..n)
        .map(|v| form.row(v).iter().map(|r| r.abs()).max().unwrap_or(0))
        .max()
        .unwrap_or(0);
    let extreme = (0..n)
        .map(|v| bound(v, depth).abs() as i64)
        .max()
        .unwrap_or(0)
        + 2 * max_row as i64;
    if extreme >= i16::MAX as i64 || depth as i64 >= i16::MAX as i64 {
        return Err(Error::ResourceLimit(
            "weights or depth too large for the model state encoding".into(),
        ));
    }

    let rows2: Vec<Vec<i16>> = (0..n)
        .map(|v| form.row(v).iter().map(|&r| (2 * r) as i16).collect())
        .collect();
    let w16: Vec<i16> = weights.iter().map(|&w| w as i16).collect();

    let mut store: IndexSet<Box<[i16]>> = IndexSet::new();
    let mut uf = UnionFind::new();
    let mut queue: VecDeque<u32> = VecDeque::new();
    store.insert(Box::from(&[][..])); // ZERO sentinel at index 0
    uf.push();

    let intern = |store: &mut IndexSet<Box<[i16]>>,
                      uf: &mut UnionFind,
                      queue: &mut VecDeque<u32>,
                      exp: u32,
                      x: &[i16]|
     -> u32 {
        let (id, fresh) = store.insert_full(state_key(exp, x));
        if fresh {
            uf.push();
            queue.push_back(id as u32);
        }
        id as u32
    };

    // seeds: every exponent shift of every good vector
    let mut seed_ids: Vec<Vec<u32>> = Vec::with_capacity(good.len());
    for k in &good.vectors {
        let x16: Vec<i16> = k.pairings().iter().map(|&a| a as i16).collect();
        let ids = (0..=depth)
            .map(|j| intern(&mut store, &mut uf, &mut queue, j, &x16))
            .collect();
        seed_ids.push(ids);
    }

    let in_box = |x: &[i16], j: u32| -> bool {
        (0..n).all(|v| (x[v] as i32).abs() <= bound(v, j))
    };

    let mut buf: Vec<i16> = vec![0; n];
    while let Some(id) = queue.pop_front() {
        if uf.find(id) == uf.find(0) {
            continue; // the whole class is ZERO; neighbours are too
        }
        let key = store.get_index(id as usize).expect("queued state").clone();
        let exp = key[0] as i64;
        let x = &key[1..];
        for v in 0..n {
            let xv = x[v] as i64;
            let m = w16[v] as i64;
            for (target_exp, sign) in [(exp + (xv + m) / 2, 1i16), (exp - (xv - m) / 2, -1i16)] {
                if target_exp < 0 {
                    continue;
                }
                for i in 0..n {
                    buf[i] = x[i] + sign * rows2[v][i];
                }
                if target_exp > depth as i64 || !in_box(&buf, depth - target_exp as u32) {
                    uf.union(id, 0);
                } else {
                    let t = intern(&mut store, &mut uf, &mut queue, target_exp as u32, &buf);
                    uf.union(id, t);
                }
            }
        }
        if store.len() > STATE_LIMIT {
            return Err(Error::ResourceLimit(format!(
                "model at depth {depth} exceeded {STATE_LIMIT} states"
            )));
        }
    }

    // gather nonzero classes: member count and lexicographically least key
    let zero_root = uf.find(0);
    let mut agg: HashMap<u32, (u64, u32)> = HashMap::new();
    for id in 1..store.len() as u32 {
        let root = uf.find(id);
        if root == zero_root {
            continue;
        }
        match agg.entry(root) {
            Entry::Vacant(e) => {
                e.insert((1, id));
            }
            Entry::Occupied(mut e) => {
                let (count, min_id) = *e.get();
                let better = store.get_index(id as usize) < store.get_index(min_id as usize);
                e.insert((count + 1, if better { id } else { min_id }));
            }
        }
    }

    // spin-c of a class from its representative vector
    let spinc_lookup: BTreeMap<&CharVector, usize> = good
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| (&c.representative, i))
        .collect();
    let spinc_of_vec = |vec: &CharVector| -> Result<usize> {
        for (rep, &i) in &spinc_lookup {
            if crate::lattice::same_spinc(vec, rep, form) {
                return Ok(i);
            }
        }
        Err(Error::NotStabilized {
            depth,
            detail: "model class outside the spin-c classes of the good vectors".into(),
        })
    };

    struct Raw {
        root: u32,
        spinc: usize,
        grading: BigRational,
        rep_key: Box<[i16]>,
        members: u64,
    }
    let mut raw: Vec<Raw> = Vec::with_capacity(agg.len());
    for (root, (members, min_id)) in agg {
        let key = store.get_index(min_id as usize).unwrap().clone();
        let exp = key[0] as i64;
        let vec = CharVector::from_raw(key[1..].iter().map(|&a| a as i32).collect());
        let grading =
            BigRational::from(BigInt::from(2 * exp)) - degree(&vec, form);
        let spinc = spinc_of_vec(&vec)?;
        raw.push(Raw {
            root,
            spinc,
            grading,
            rep_key: key,
            members,
        });
    }
    raw.sort_by(|a, b| {
        (a.spinc, &a.grading, &a.rep_key).cmp(&(b.spinc, &b.grading, &b.rep_key))
    });

    let class_of_root: HashMap<u32, u32> = raw
        .iter()
        .enumerate()
        .map(|(i, r)| (r.root, i as u32))
        .collect();

    let resolve = |uf: &mut UnionFind, exp: u32, x: &[i16]| -> Option<u32> {
        if exp > depth {
            return None;
        }
        let id = store.get_index_of(&state_key(exp, x))?;
        let root = uf.find(id as u32);
        if root == zero_root {
            None
        } else {
            class_of_root.get(&root).copied()
        }
    };

    let mut classes: Vec<ModelClass> = Vec::with_capacity(raw.len());
    for r in &raw {
        let exp = r.rep_key[0] as u32;
        let shift_up = resolve(&mut uf, exp + 1, &r.rep_key[1..]);
        classes.push(ModelClass {
            spinc: r.spinc,
            grading: r.grading.clone(),
            rep: UElement::new(
                exp,
                CharVector::from_raw(r.rep_key[1..].iter().map(|&a| a as i32).collect()),
            ),
            shift_up,
            members: r.members,
        });
    }

    let seed_classes: Vec<Vec<Option<u32>>> = seed_ids
        .iter()
        .map(|ids| {
            ids.iter()
                .map(|&id| {
                    let root = uf.find(id);
                    if root == zero_root {
                        None
                    } else {
                        class_of_root.get(&root).copied()
                    }
                })
                .collect()
        })
        .collect();

    let mut spinc_ranges = vec![0..0; good.classes.len()];
    let mut start = 0;
    for s in 0..good.classes.len() {
        let end = classes[start..]
            .iter()
            .position(|c| c.spinc != s)
            .map(|p| start + p)
            .unwrap_or(classes.len());
        spinc_ranges[s] = start..end;
        start = end;
    }

    Ok(FiniteModel {
        depth,
        classes,
        seed_classes,
        spinc_ranges,
        states_visited: store.len(),
    })
}

impl FiniteModel {
    /// Class of `U^exponent ⊗ K` for the good vector with index `good`;
    /// `None` when that element is ZERO at this depth.
    pub fn class_of_good(&self, good: usize, exponent: u32) -> Option<u32> {
        self.seed_classes[good][exponent as usize]
    }

    pub fn classes_of_spinc(&self, spinc: usize) -> &[ModelClass] {
        &self.classes[self.spinc_ranges[spinc].clone()]
    }

    pub fn class_ids_of_spinc(&self, spinc: usize) -> std::ops::Range<usize> {
        self.spinc_ranges[spinc].clone()
    }

    pub fn rank_at(&self, spinc: usize, grading: &BigRational) -> usize {
        self.classes_of_spinc(spinc)
            .iter()
            .filter(|c| &c.grading == grading)
            .count()
    }

    pub fn shift_up_k(&self, class: u32, k: u32) -> Option<u32> {
        let mut c = class;
        for _ in 0..k {
            c = self.classes[c as usize].shift_up?;
        }
        Some(c)
    }

    /// Decomposition of the spin-c block into `U`-chains, as
    /// (length, bottom grading) pairs sorted by (bottom, length).
    pub fn chains(&self, spinc: usize) -> Vec<Chain> {
        let ids = self.class_ids_of_spinc(spinc);
        if ids.is_empty() {
            return Vec::new();
        }
        let gmin = ids
            .clone()
            .map(|i| &self.classes[i].grading)
            .min()
            .unwrap()
            .clone();
        let two = BigRational::from(BigInt::from(2));
        let level_of = |g: &BigRational| -> usize {
            let l = (g - &gmin) / &two;
            debug_assert!(l.is_integer());
            l.to_integer().to_usize().expect("small level")
        };
        let mut levels: Vec<Vec<u32>> = Vec::new();
        for i in ids.clone() {
            let l = level_of(&self.classes[i].grading);
            if levels.len() <= l {
                levels.resize(l + 1, Vec::new());
            }
            levels[l].push(i as u32);
        }
        let top = levels.len() - 1;

        // a(t, k) = rank of U^k restricted to level t
        let a = |t: usize, k: usize| -> usize {
            if t > top || k > t {
                return 0;
            }
            let src = &levels[t];
            let dst = &levels[t - k];
            if src.is_empty() || dst.is_empty() {
                return 0;
            }
            let mut m = BitMatrix::new(dst.len(), src.len());
            for (col, &c) in src.iter().enumerate() {
                if let Some(img) = self.shift_up_k(c, k as u32) {
                    if let Some(row) = dst.iter().position(|&d| d == img) {
                        m.set(row, col);
                    }
                }
            }
            m.rank()
        };

        // chains with top exactly t and length at least k+1
        let c = |t: usize, k: usize| -> i64 {
            a(t, k) as i64
                - if t + 1 <= top {
                    a(t + 1, k + 1) as i64
                } else {
                    0
                }
        };

        let mut chains = Vec::new();
        for t in (0..=top).rev() {
            for len in 1..=t + 1 {
                let count = c(t, len - 1) - c(t, len);
                debug_assert!(count >= 0);
                for _ in 0..count {
                    let bottom_level = t - (len - 1);
                    chains.push(Chain {
                        length: len as u32,
                        bottom: &gmin + BigRational::from(BigInt::from(2 * bottom_level as i64)),
                    });
                }
            }
        }
        debug_assert_eq!(
            chains.iter().map(|c| c.length as usize).sum::<usize>(),
            ids.len()
        );
        chains.sort_by(|x, y| (&x.bottom, x.length).cmp(&(&y.bottom, y.length)));
        chains
    }
}

/// A `U`-chain in a finite model: `length` classes linked by the `U`
/// action, the lowest at grading `bottom`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub length: u32,
    pub bottom: BigRational,
}

impl Chain {
    pub fn top(&self) -> BigRational {
        &self.bottom + BigRational::from(BigInt::from(2 * (self.length as i64 - 1)))
    }
}

/// Reduced summand `F^length` with its bottom grading (the grading of
/// the element killed by `U`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedSummand {
    pub length: u32,
    pub bottom: BigRational,
}

impl ReducedSummand {
    pub fn top(&self) -> BigRational {
        &self.bottom + BigRational::from(BigInt::from(2 * (self.length as i64 - 1)))
    }
}

/// `HF^+` of one spin-c class: an infinite tower from `tower_bottom`
/// plus finitely many reduced chains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HFPlusModule {
    pub spinc: usize,
    pub tower_bottom: BigRational,
    pub reduced: Vec<ReducedSummand>,
}

impl HFPlusModule {
    /// Rank of the grading-`g` piece.
    pub fn rank_at(&self, g: &BigRational) -> usize {
        let two = BigRational::from(BigInt::from(2));
        let tower = *g >= self.tower_bottom && ((g - &self.tower_bottom) / two).is_integer();
        let red = self
            .reduced
            .iter()
            .filter(|s| {
                *g >= s.bottom
                    && *g <= s.top()
                    && ((g - &s.bottom) / BigRational::from(BigInt::from(2))).is_integer()
            })
            .count();
        red + usize::from(tower)
    }

    pub fn notation(&self) -> String {
        let mut s = format!("T({})", crate::report::rational_string(&self.tower_bottom));
        for r in &self.reduced {
            if r.length == 1 {
                s.push_str(&format!(
                    " + F({})",
                    crate::report::rational_string(&r.bottom)
                ));
            } else {
                s.push_str(&format!(
                    " + F^{}({})",
                    r.length,
                    crate::report::rational_string(&r.bottom)
                ));
            }
        }
        s
    }
}

/// Reads the tower and reduced summands off a finite model. The model
/// is deep enough exactly when the chain decomposition has a single
/// chain of the maximal length `depth+1` (the truncated tower) and its
/// bottom agrees with the correction term; every other chain is then
/// fully visible and is a reduced summand.
pub fn assemble_hfplus(
    model: &FiniteModel,
    good: &GoodVectorSet,
    spinc: usize,
) -> Result<HFPlusModule> {
    let chains = model.chains(spinc);
    let full: Vec<&Chain> = chains
        .iter()
        .filter(|c| c.length == model.depth + 1)
        .collect();
    if full.len() != 1 {
        return Err(Error::NotStabilized {
            depth: model.depth,
            detail: format!(
                "{} chains of maximal length in spin-c class {spinc}",
                full.len()
            ),
        });
    }
    let tower_bottom = full[0].bottom.clone();
    let expected = -good.max_degree_in_class(spinc).clone();
    if tower_bottom != expected {
        return Err(Error::NotStabilized {
            depth: model.depth,
            detail: format!(
                "tower bottom {} does not match correction term {} in spin-c class {spinc}",
                tower_bottom, expected
            ),
        });
    }
    let reduced = chains
        .iter()
        .filter(|c| c.length != model.depth + 1)
        .map(|c| ReducedSummand {
            length: c.length,
            bottom: c.bottom.clone(),
        })
        .collect();
    Ok(HFPlusModule {
        spinc,
        tower_bottom,
        reduced,
    })
}

/// `U^n ⊗ lhs-vector ~ U^m ⊗ rhs-vector`, vectors given by their index
/// in the good-vector set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub lhs: (usize, u32),
    pub rhs: (usize, u32),
    pub minimal: bool,
}

#[derive(Debug, Clone)]
pub struct RelationSearch {
    pub relations: Vec<Relation>,
    /// Pairs whose minimal relation was not settled within the depth
    /// cap, with a diagnostic.
    pub undecided: Vec<(usize, usize, String)>,
}

impl RelationSearch {
    pub fn is_complete(&self) -> bool {
        self.undecided.is_empty()
    }
}

/// Cache of finite models by depth over one graph.
pub struct ModelCache<'a> {
    pub good: &'a GoodVectorSet,
    pub form: &'a IntersectionForm,
    pub depth_cap: u32,
    models: BTreeMap<u32, FiniteModel>,
}

impl<'a> ModelCache<'a> {
    pub fn new(good: &'a GoodVectorSet, form: &'a IntersectionForm, depth_cap: u32) -> Self {
        ModelCache {
            good,
            form,
            depth_cap,
            models: BTreeMap::new(),
        }
    }

    pub fn model(&mut self, depth: u32) -> Result<&FiniteModel> {
        if !self.models.contains_key(&depth) {
            let m = build_model(self.good, self.form, depth)?;
            self.models.insert(depth, m);
        }
        Ok(&self.models[&depth])
    }

    pub fn max_built_depth(&self) -> u32 {
        self.models.keys().max().copied().unwrap_or(0)
    }

    /// Deepens until the spin-c class assembles; returns the depth used.
    pub fn assemble(&mut self, spinc: usize) -> Result<(u32, HFPlusModule)> {
        let mut last: Option<Error> = None;
        for depth in 0..=self.depth_cap {
            let good = self.good;
            let model = self.model(depth)?;
            match assemble_hfplus(model, good, spinc) {
                Ok(module) => return Ok((depth, module)),
                Err(e @ Error::NotStabilized { .. }) => last = Some(e),
                Err(e) => return Err(e),
            }
        }
        Err(last.unwrap_or(Error::NotStabilized {
            depth: self.depth_cap,
            detail: "empty depth range".into(),
        }))
    }

    /// Largest exponent any class of grading `g` can contain: the
    /// degree of a characteristic vector is at most n/4, so
    /// `m = (g + deg K)/2 <= (g + n/4)/2`.
    fn exponent_ceiling(&self, grading: &BigRational) -> u32 {
        let n = BigRational::from(BigInt::from(self.form.n() as i64));
        let four = BigRational::from(BigInt::from(4));
        let bound = (grading + n / &four) / BigRational::from(BigInt::from(2));
        bound.floor().to_integer().to_u32().unwrap_or(0)
    }

    /// Decides `U^ne ⊗ K_a ~ U^me ⊗ K_b`, deepening past depths where
    /// both classes are ZERO. `None` when the cap was hit first.
    pub fn related(&mut self, a: usize, ne: u32, b: usize, me: u32) -> Result<Option<bool>> {
        let grading = BigRational::from(BigInt::from(2 * ne as i64)) - &self.good.degrees[a];
        let ceiling = self.exponent_ceiling(&grading).max(ne).max(me);
        let mut depth = ne.max(me);
        loop {
            if depth > self.depth_cap {
                return Ok(None);
            }
            let model = self.model(depth)?;
            match (model.class_of_good(a, ne), model.class_of_good(b, me)) {
                (Some(x), Some(y)) => return Ok(Some(x == y)),
                (None, None) => {
                    if depth >= ceiling {
                        // no class at this grading can exceed the ceiling;
                        // both being ZERO here should be impossible
                        return Ok(None);
                    }
                    depth += 1;
                }
                // equivalent elements share their class, and with it
                // the property of being ZERO at this depth
                _ => return Ok(Some(false)),
            }
        }
    }

    /// Minimal relation between two good vectors of the same spin-c
    /// class, searched along the grading-conservation line.
    pub fn minimal_relation(&mut self, a: usize, b: usize) -> Result<std::result::Result<Relation, String>> {
        let two = BigRational::from(BigInt::from(2));
        let delta = (&self.good.degrees[a] - &self.good.degrees[b]) / &two;
        if !delta.is_integer() {
            return Ok(Err("degree difference is odd; no relation can exist".into()));
        }
        let delta = delta.to_integer().to_i64().expect("small delta");
        for t in 0u32.. {
            let ne = t as i64 + delta.max(0);
            let me = t as i64 - delta.min(0);
            if ne.max(me) > self.depth_cap as i64 {
                return Ok(Err(format!(
                    "no relation found with exponents up to the depth cap {}",
                    self.depth_cap
                )));
            }
            match self.related(a, ne as u32, b, me as u32)? {
                Some(true) => {
                    return Ok(Ok(Relation {
                        lhs: (a, ne as u32),
                        rhs: (b, me as u32),
                        minimal: true,
                    }))
                }
                Some(false) => continue,
                None => {
                    return Ok(Err(format!(
                        "equivalence of U^{ne}⊗K_{a} and U^{me}⊗K_{b} undecided at depth cap {}",
                        self.depth_cap
                    )))
                }
            }
        }
        unreachable!()
    }

    /// Minimal relations for every pair of good vectors sharing a
    /// spin-c class, with diagnostics for pairs the cap left undecided.
    pub fn find_relations(&mut self) -> Result<RelationSearch> {
        let mut relations = Vec::new();
        let mut undecided = Vec::new();
        for class in self.good.classes.clone() {
            for (i, &a) in class.member_ids.iter().enumerate() {
                for &b in &class.member_ids[i + 1..] {
                    match self.minimal_relation(a, b)? {
                        Ok(rel) => relations.push(rel),
                        Err(msg) => undecided.push((a, b, msg)),
                    }
                }
            }
        }
        Ok(RelationSearch {
            relations,
            undecided,
        })
    }

    /// Whether the dual of the good vector lies in the image of `U^k`,
    /// solved inside the depth-`k` model by elimination over GF(2).
    pub fn in_u_image(&mut self, good_id: usize, k: u32) -> Result<bool> {
        if k == 0 {
            return Ok(true);
        }
        let model = self.model(k)?;
        let c0 = model
            .class_of_good(good_id, 0)
            .expect("good-vector classes never vanish");
        let spinc = model.classes[c0 as usize].spinc;
        let g0 = model.classes[c0 as usize].grading.clone();
        let g_hi = &g0 + BigRational::from(BigInt::from(2 * k as i64));
        let ids = model.class_ids_of_spinc(spinc);
        let rows: Vec<u32> = ids
            .clone()
            .filter(|&i| model.classes[i].grading == g0)
            .map(|i| i as u32)
            .collect();
        let cols: Vec<u32> = ids
            .filter(|&i| model.classes[i].grading == g_hi)
            .map(|i| i as u32)
            .collect();
        let mut mat = BitMatrix::new(rows.len(), cols.len().max(1));
        let mut rhs = vec![false; rows.len()];
        for (ri, &r) in rows.iter().enumerate() {
            if let Some(img) = model.shift_up_k(r, k) {
                let ci = cols.iter().position(|&c| c == img).expect("image grading");
                mat.set(ri, ci);
            }
            rhs[ri] = r == c0;
        }
        Ok(mat.solvable(&rhs))
    }
}

/// One-shot relation search; builds its own model cache.
pub fn find_relations(
    good: &GoodVectorSet,
    form: &IntersectionForm,
    max_depth: u32,
) -> Result<RelationSearch> {
    ModelCache::new(good, form, max_depth).find_relations()
}
