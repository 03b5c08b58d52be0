//! Finite uniform spaces.
//!
//! On a finite set every uniformity is the upward closure of a single
//! equivalence relation `W`: the uniformity is closed under finite
//! intersections, so it has a least member `W`; axiom (c) applied to `W`
//! gives `V ∘ V ⊆ W` for some `V ⊇ W`, hence `W ∘ W ⊆ W`, and `W` is
//! reflexive and symmetric by (a), (b). Conversely `{U : U ⊇ W}` satisfies
//! all five axioms with `V = W` in (c). The uniform topology is then
//! generated by the `W`-cells, and a Hausdorff finite space is discrete.

use std::fmt;

use serde::Serialize;

use crate::error::{invalid, Result, ShadowError};
use crate::pointset::PointSet;

/// A binary relation on `[0, n)`; row `x` stores the cross section `U[x]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    n: usize,
    rows: Vec<PointSet>,
}

impl Relation {
    pub fn empty(n: usize) -> Relation {
        Relation {
            n,
            rows: vec![PointSet::empty(n); n],
        }
    }

    pub fn diagonal(n: usize) -> Relation {
        Relation {
            n,
            rows: (0..n).map(|x| PointSet::singleton(n, x)).collect(),
        }
    }

    pub fn full(n: usize) -> Relation {
        Relation {
            n,
            rows: vec![PointSet::full(n); n],
        }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Relation> {
        let mut r = Relation::empty(n);
        for (x, y) in pairs {
            if x >= n || y >= n {
                return Err(invalid(format!("pair ({x},{y}) outside [0,{n})")));
            }
            r.insert(x, y);
        }
        Ok(r)
    }

    /// The equivalence relation whose classes are `cells`.
    pub fn from_partition(n: usize, cells: &[Vec<usize>]) -> Result<Relation> {
        Relation::from_pairs(
            n,
            cells
                .iter()
                .flat_map(|c| c.iter().flat_map(move |&a| c.iter().map(move |&b| (a, b)))),
        )
    }

    /// `Δ ∪ {(i, j) : cyclic distance of i and j is at most k}`.
    pub fn within_cyclic(n: usize, k: usize) -> Relation {
        let mut r = Relation::diagonal(n);
        for i in 0..n {
            for d in 1..=k.min(n) {
                r.insert(i, (i + d) % n);
                r.insert((i + d) % n, i);
            }
        }
        r
    }

    /// `Δ ∪ {(i, j) : |i - j| <= k}` on a path.
    pub fn within_line(n: usize, k: usize) -> Relation {
        let mut r = Relation::empty(n);
        for i in 0..n {
            for j in i.saturating_sub(k)..(i + k + 1).min(n) {
                r.insert(i, j);
            }
        }
        r
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x].contains(y)
    }

    #[inline]
    pub fn insert(&mut self, x: usize, y: usize) {
        self.rows[x].insert(y);
    }

    pub fn remove(&mut self, x: usize, y: usize) {
        self.rows[x].remove(y);
    }

    /// `U[x]` without bounds checking.
    #[inline]
    pub fn row(&self, x: usize) -> &PointSet {
        &self.rows[x]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|x| self.rows[x].iter().map(move |y| (x, y)))
            .collect()
    }

    pub fn pair_count(&self) -> usize {
        self.rows.iter().map(PointSet::count).sum()
    }

    fn check_size(&self, other: &Relation) -> Result<()> {
        if self.n != other.n {
            return Err(invalid(format!(
                "relation size mismatch: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    /// `U ∘ V = {(x, y) : ∃z (x, z) ∈ U and (z, y) ∈ V}`.
    pub fn compose(&self, other: &Relation) -> Result<Relation> {
        self.check_size(other)?;
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut out = PointSet::empty(self.n);
                for z in row.iter() {
                    out.union_with(&other.rows[z]);
                }
                out
            })
            .collect();
        Ok(Relation { n: self.n, rows })
    }

    /// `U^k` for `k >= 0` (`U^0 = Δ`).
    pub fn power(&self, k: usize) -> Relation {
        let mut acc = Relation::diagonal(self.n);
        for _ in 0..k {
            acc = acc.compose(self).expect("same size");
        }
        acc
    }

    pub fn inverse(&self) -> Relation {
        let mut r = Relation::empty(self.n);
        for (x, y) in self.pairs() {
            r.insert(y, x);
        }
        r
    }

    pub fn cross_section(&self, x: usize) -> Result<PointSet> {
        if x >= self.n {
            return Err(invalid(format!("point {x} outside [0,{})", self.n)));
        }
        Ok(self.rows[x].clone())
    }

    /// `U[A] = ⋃_{x∈A} U[x]`.
    pub fn section_of_set(&self, a: &PointSet) -> Result<PointSet> {
        if a.iter().any(|x| x >= self.n) {
            return Err(invalid("set has points outside the ground set"));
        }
        let mut out = PointSet::empty(self.n);
        for x in a.iter() {
            out.union_with(&self.rows[x]);
        }
        Ok(out)
    }

    /// `{x : (x, y) ∈ U}`.
    pub fn preimage_of(&self, y: usize) -> PointSet {
        PointSet::from_iter_in(self.n, (0..self.n).filter(|&x| self.contains(x, y)))
    }

    pub fn intersection(&self, other: &Relation) -> Result<Relation> {
        self.check_size(other)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.intersection(b))
            .collect();
        Ok(Relation { n: self.n, rows })
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        self.check_size(other)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.union(b))
            .collect();
        Ok(Relation { n: self.n, rows })
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.n == other.n && self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_subset(b))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|x| self.contains(x, x))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().into_iter().all(|(x, y)| self.contains(y, x))
    }

    pub fn is_transitive(&self) -> bool {
        self.compose(self).expect("same size").is_subset(self)
    }

    pub fn symmetrized(&self) -> Relation {
        self.union(&self.inverse()).expect("same size")
    }

    pub fn with_diagonal(&self) -> Relation {
        self.union(&Relation::diagonal(self.n)).expect("same size")
    }

    /// Reflexive + symmetric: the shape every probe relation must have.
    pub fn check_probe(&self, what: &str) -> Result<()> {
        if !self.is_reflexive() {
            return Err(invalid(format!("{what} does not contain the diagonal")));
        }
        if !self.is_symmetric() {
            return Err(invalid(format!("{what} is not symmetric")));
        }
        Ok(())
    }

    /// First `(x, z, y)` with `(x, z), (z, y) ∈ U` but `(x, y) ∉ U`.
    pub fn transitivity_violation(&self) -> Option<(usize, usize, usize)> {
        for x in 0..self.n {
            for z in self.rows[x].iter() {
                if let Some(y) = self.rows[z].iter().find(|&y| !self.contains(x, y)) {
                    return Some((x, z, y));
                }
            }
        }
        None
    }

    /// Reflexive-symmetric-transitive closure.
    pub fn equivalence_closure(&self) -> Relation {
        let mut r = self.with_diagonal().symmetrized();
        loop {
            let next = r.compose(&r).expect("same size");
            if next == r {
                return r;
            }
            r = next;
        }
    }

    /// Classes of an equivalence relation, ordered by least element.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut seen = PointSet::empty(self.n);
        let mut out = Vec::new();
        for x in 0..self.n {
            if !seen.contains(x) {
                let c = self.rows[x].to_vec();
                for &y in &c {
                    seen.insert(y);
                }
                out.push(c);
            }
        }
        out
    }

    /// Image under `π × π` into a ground set of size `m`.
    pub fn image(&self, pi: &[usize], m: usize) -> Relation {
        let mut r = Relation::empty(m);
        for (x, y) in self.pairs() {
            r.insert(pi[x], pi[y]);
        }
        r
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation[{}]{:?}", self.n, self.pairs())
    }
}

/// Serialized as a sorted pair list; the ground size travels separately.
impl Serialize for Relation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.pairs().serialize(s)
    }
}

/// Free functions mirroring the method API.
pub fn compose(u: &Relation, v: &Relation) -> Result<Relation> {
    u.compose(v)
}

pub fn inverse(u: &Relation) -> Relation {
    u.inverse()
}

pub fn cross_section(u: &Relation, x: usize) -> Result<PointSet> {
    u.cross_section(x)
}

pub fn section_of_set(u: &Relation, a: &PointSet) -> Result<PointSet> {
    u.section_of_set(a)
}

/// A validated base of a finite uniformity with its minimal entourage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformBase {
    n: usize,
    base: Vec<Relation>,
    w: Relation,
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
}

impl UniformBase {
    /// Ingest candidate relations: add `Δ`, symmetrize, close under
    /// intersection, and accept iff `W = ⋂ base` is transitive.
    pub fn validate(candidates: Vec<Relation>) -> Result<UniformBase> {
        let n = match candidates.first() {
            Some(r) => r.size(),
            None => return Err(invalid("base must be non-empty")),
        };
        if candidates.iter().any(|r| r.size() != n) {
            return Err(invalid("base relations disagree on ground size"));
        }
        let mut base: Vec<Relation> = Vec::new();
        for r in candidates {
            let r = r.with_diagonal().symmetrized();
            if !base.contains(&r) {
                base.push(r);
            }
        }
        // Intersection closure; new members appended in discovery order.
        let mut i = 0;
        while i < base.len() {
            for j in 0..i {
                let m = base[i].intersection(&base[j]).expect("same size");
                if !base.contains(&m) {
                    base.push(m);
                }
            }
            i += 1;
        }
        let w = base
            .iter()
            .skip(1)
            .fold(base[0].clone(), |acc, r| acc.intersection(r).expect("same size"));
        if let Some((x, z, y)) = w.transitivity_violation() {
            let hints = if n <= 8 {
                maximal_equivalences_within(&w)
            } else {
                Vec::new()
            };
            return Err(ShadowError::NotAUniformity { x, z, y, hints });
        }
        let cells = w.classes();
        let mut cell_of = vec![0; n];
        for (ci, c) in cells.iter().enumerate() {
            for &x in c {
                cell_of[x] = ci;
            }
        }
        Ok(UniformBase {
            n,
            base,
            w,
            cells,
            cell_of,
        })
    }

    /// The partition uniformity with the given cells, base `{W}`.
    pub fn from_partition(n: usize, cells: &[Vec<usize>]) -> Result<UniformBase> {
        UniformBase::validate(vec![Relation::from_partition(n, cells)?])
    }

    pub fn discrete(n: usize) -> UniformBase {
        UniformBase::validate(vec![Relation::diagonal(n)]).expect("Δ is an equivalence")
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> &[Relation] {
        &self.base
    }

    /// The minimal entourage.
    pub fn w(&self) -> &Relation {
        &self.w
    }

    pub fn is_entourage(&self, u: &Relation) -> bool {
        self.w.is_subset(u)
    }

    pub fn is_hausdorff(&self) -> bool {
        self.w == Relation::diagonal(self.n)
    }

    /// Smallest open neighbourhood of `x`: its `W`-cell.
    pub fn min_open(&self, x: usize) -> PointSet {
        self.w.row(x).clone()
    }

    pub fn open_cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell_of(&self, x: usize) -> usize {
        self.cell_of[x]
    }

    pub fn cell_set(&self, c: usize) -> PointSet {
        PointSet::from_iter_in(self.n, self.cells[c].iter().copied())
    }

    #[inline]
    pub fn same_cell(&self, x: usize, y: usize) -> bool {
        self.cell_of[x] == self.cell_of[y]
    }

    /// Open sets are exactly unions of cells.
    pub fn is_open(&self, a: &PointSet) -> bool {
        a.iter().all(|x| self.w.row(x).is_subset(a))
    }

    /// Always true on a finite space; the witness holds one point per cell.
    pub fn is_totally_bounded(&self) -> (bool, Vec<usize>) {
        (true, self.cells.iter().map(|c| c[0]).collect())
    }
}

pub fn validate_base(candidates: Vec<Relation>) -> Result<UniformBase> {
    UniformBase::validate(candidates)
}

/// Every maximal equivalence relation contained in a reflexive symmetric
/// `w`, as partitions into `w`-cliques.
pub fn maximal_equivalences_within(w: &Relation) -> Vec<Vec<Vec<usize>>> {
    let n = w.size();
    let mut all: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    fn rec(x: usize, n: usize, w: &Relation, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if x == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            if blocks[b].iter().all(|&y| w.contains(x, y)) {
                blocks[b].push(x);
                rec(x + 1, n, w, blocks, out);
                blocks[b].pop();
            }
        }
        blocks.push(vec![x]);
        rec(x + 1, n, w, blocks, out);
        blocks.pop();
    }
    rec(0, n, w, &mut blocks, &mut all);
    let rels: Vec<Relation> = all
        .iter()
        .map(|p| Relation::from_partition(n, p).expect("in range"))
        .collect();
    all.into_iter()
        .enumerate()
        .filter(|(i, _)| {
            !rels
                .iter()
                .enumerate()
                .any(|(j, r)| j != *i && rels[*i].is_subset(r) && rels[*i] != *r)
        })
        .map(|(_, p)| p)
        .collect()
}

/// A symmetric reflexive `V` with `V^k ⊆ U`.
///
/// Greedy from the symmetric part of `U`: while `V^k ⊄ U`, delete (with
/// its mirror) the pair of `V` lying on some `k`-step walk that leaves
/// `U`, preferring pairs whose `U`-sections overlap least and then the
/// lexicographically largest. Deleted pairs are then offered back in
/// reverse deletion order and kept whenever `V^k ⊆ U` survives, so the
/// result is inclusion-maximal. `Δ` always qualifies.
pub fn entourage_root(u: &Relation, k: usize) -> Result<Relation> {
    if k < 2 {
        return Err(invalid("root order must be at least 2"));
    }
    if !u.is_reflexive() {
        return Err(invalid("relation must contain the diagonal"));
    }
    let fits = |v: &Relation| v.power(k).is_subset(u);
    let mut v = u.intersection(&u.inverse())?;
    let mut removed = Vec::new();
    while !fits(&v) {
        let powers: Vec<Relation> = (0..k).map(|j| v.power(j)).collect();
        let inv_powers: Vec<Relation> = powers.iter().map(Relation::inverse).collect();
        let on_bad_walk = |x: usize, y: usize| {
            (0..k).any(|j| {
                let reach = powers[k - 1 - j].row(y);
                inv_powers[j].row(x).iter().any(|a| !reach.is_subset(u.row(a)))
            })
        };
        let victim = v
            .pairs()
            .into_iter()
            .filter(|&(x, y)| x != y && on_bad_walk(x, y))
            .max_by_key(|&(x, y)| {
                let overlap = u.row(x).intersection(u.row(y)).count();
                (std::cmp::Reverse(overlap), x, y)
            })
            .expect("a walk leaving U uses some off-diagonal pair");
        v.remove(victim.0, victim.1);
        v.remove(victim.1, victim.0);
        removed.push(victim);
    }
    for &(x, y) in removed.iter().rev() {
        let mut candidate = v.clone();
        candidate.insert(x, y);
        candidate.insert(y, x);
        if fits(&candidate) {
            v = candidate;
        }
    }
    Ok(v)
}
