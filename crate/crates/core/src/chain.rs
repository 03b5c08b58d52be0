//! Chain graphs, chain recurrence, `~_D` classes and class periods, and
//! the constructive searches that pull chains and pseudo-orbits into
//! `CR(f)`.

use std::collections::VecDeque;

use num_integer::Integer;
use serde::Serialize;

use crate::dynsys::{EPSeq, FiniteSystem};
use crate::error::{invalid, Result, ShadowError};
use crate::lasso::Lasso;
use crate::natsets::UPSet;
use crate::pointset::PointSet;
use crate::uniform::Relation;

/// `a → b` iff `(f(a), b) ∈ D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainGraph {
    succ: Vec<PointSet>,
}

impl ChainGraph {
    pub fn new(s: &FiniteSystem, d: &Relation) -> Result<ChainGraph> {
        if d.size() != s.size() {
            return Err(invalid("relation and system disagree on point count"));
        }
        d.check_probe("D")?;
        Ok(ChainGraph {
            succ: (0..s.size()).map(|a| d.row(s.f(a)).clone()).collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.succ.len()
    }

    pub fn succ(&self, a: usize) -> &PointSet {
        &self.succ[a]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.succ[a].contains(b)
    }

    pub fn step(&self, a: &PointSet) -> PointSet {
        let mut out = PointSet::empty(self.size());
        for x in a.iter() {
            out.union_with(&self.succ[x]);
        }
        out
    }

    /// The subgraph induced on `keep`; other nodes keep no edges.
    pub fn restricted(&self, keep: &PointSet) -> ChainGraph {
        ChainGraph {
            succ: (0..self.size())
                .map(|a| {
                    if keep.contains(a) {
                        self.succ[a].intersection(keep)
                    } else {
                        PointSet::empty(self.size())
                    }
                })
                .collect(),
        }
    }

    /// Nodes reachable from `x` by walks of length `>= 0`.
    pub fn reachable(&self, x: usize) -> PointSet {
        let mut seen = PointSet::singleton(self.size(), x);
        let mut stack = vec![x];
        while let Some(a) = stack.pop() {
            for b in self.succ[a].iter() {
                if !seen.contains(b) {
                    seen.insert(b);
                    stack.push(b);
                }
            }
        }
        seen
    }

    /// Strongly connected components (Tarjan, iterative), each sorted,
    /// listed by least member.
    pub fn sccs(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        const UNSEEN: usize = usize::MAX;
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut next = 0;
        let mut out = Vec::new();
        for root in 0..n {
            if index[root] != UNSEEN {
                continue;
            }
            // (node, successors not yet examined)
            let mut work: Vec<(usize, Vec<usize>)> = Vec::new();
            index[root] = next;
            low[root] = next;
            next += 1;
            stack.push(root);
            on_stack[root] = true;
            work.push((root, self.succ[root].to_vec()));
            while let Some((v, pending)) = work.last_mut() {
                let v = *v;
                if let Some(w) = pending.pop() {
                    if index[w] == UNSEEN {
                        index[w] = next;
                        low[w] = next;
                        next += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        work.push((w, self.succ[w].to_vec()));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                    continue;
                }
                work.pop();
                if let Some((u, _)) = work.last() {
                    low[*u] = low[*u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
        out.sort();
        out
    }

    /// Nodes lying on some closed walk of positive length.
    pub fn cyclic_nodes(&self) -> PointSet {
        let mut out = PointSet::empty(self.size());
        for comp in self.sccs() {
            if comp.len() > 1 || self.has_edge(comp[0], comp[0]) {
                for x in comp {
                    out.insert(x);
                }
            }
        }
        out
    }

    /// gcd of closed-walk lengths inside a strongly connected `comp`,
    /// by BFS layering from `anchor`: the gcd of `level(u) + 1 - level(v)`
    /// over edges `u → v` inside the component. `0` if acyclic.
    pub fn period_from(&self, comp: &PointSet, anchor: usize) -> usize {
        let n = self.size();
        let mut level = vec![usize::MAX; n];
        level[anchor] = 0;
        let mut queue = VecDeque::from([anchor]);
        let mut g = 0usize;
        while let Some(u) = queue.pop_front() {
            for v in self.succ[u].intersection(comp).iter() {
                if level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                } else {
                    g = g.gcd(&(level[u] + 1).abs_diff(level[v]));
                }
            }
        }
        g
    }

    /// Lengths `n >= 1` of walks from `x` to `y`.
    pub fn length_set(&self, x: usize, y: usize) -> UPSet {
        let n = self.size();
        let mut seen = std::collections::HashMap::new();
        let mut bits = vec![false];
        let mut layer = self.succ[x].clone();
        while !seen.contains_key(&layer) {
            seen.insert(layer.clone(), bits.len());
            bits.push(layer.contains(y));
            layer = self.step(&layer);
        }
        debug_assert_eq!(layer.universe(), n);
        let cycle = bits.split_off(seen[&layer]);
        UPSet::normalize(bits, cycle).expect("non-empty cycle")
    }
}

pub fn chain_graph(s: &FiniteSystem, d: &Relation) -> Result<ChainGraph> {
    ChainGraph::new(s, d)
}

pub fn chain_length_set(g: &ChainGraph, x: usize, y: usize) -> Result<UPSet> {
    if x >= g.size() || y >= g.size() {
        return Err(invalid("node outside the graph"));
    }
    Ok(g.length_set(x, y))
}

fn w_graph(s: &FiniteSystem) -> ChainGraph {
    ChainGraph::new(s, s.space().w()).expect("W is reflexive and symmetric")
}

/// `CR(f)`: a point is chain recurrent for every entourage iff it is for
/// the smallest one, `W`.
pub fn chain_recurrent_set(s: &FiniteSystem) -> PointSet {
    w_graph(s).cyclic_nodes()
}

pub fn is_chain_transitive(s: &FiniteSystem) -> bool {
    w_graph(s).sccs().len() == 1
}

/// Strongly connected with graph period 1.
pub fn is_chain_mixing(s: &FiniteSystem) -> bool {
    let g = w_graph(s);
    let sccs = g.sccs();
    sccs.len() == 1 && g.period_from(&PointSet::full(s.size()), 0) == 1
}

/// Summary emitted by the `chain` command.
#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub chain_recurrent: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
    pub periods: Vec<usize>,
    pub chain_transitive: bool,
    pub chain_mixing: bool,
}

pub fn chain_report(s: &FiniteSystem) -> ChainReport {
    let sim = sim_classes(s, s.space().w()).expect("W is an entourage");
    ChainReport {
        chain_recurrent: chain_recurrent_set(s).to_vec(),
        periods: sim.periods.clone(),
        classes: sim.classes,
        chain_transitive: is_chain_transitive(s),
        chain_mixing: is_chain_mixing(s),
    }
}

/// `~_D` on `CR(f)` together with the checks the classes must pass.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimClasses {
    pub classes: Vec<Vec<usize>>,
    /// Period of each class (same order).
    pub periods: Vec<usize>,
    /// `(x, y)` with a `D`-chain inside `CR(f)` from `x` to `y` but none back.
    pub asymmetric: Vec<(usize, usize)>,
    /// Classes that are not a union of `W`-cells intersected with `CR(f)`.
    pub not_clopen: Vec<usize>,
}

impl SimClasses {
    pub fn is_consistent(&self) -> bool {
        self.asymmetric.is_empty() && self.not_clopen.is_empty()
    }
}

/// Classes of `x ~_D y` (a `D`-chain from `x` to `y` inside `CR(f)`),
/// computed as strongly connected components of `G_D` restricted to
/// `CR(f)`. Reachability that is not mutual is reported, not hidden.
pub fn sim_classes(s: &FiniteSystem, d: &Relation) -> Result<SimClasses> {
    if d.size() != s.size() {
        return Err(invalid("relation and system disagree on point count"));
    }
    if !s.space().is_entourage(d) {
        return Err(ShadowError::NotAnEntourage);
    }
    let cr = chain_recurrent_set(s);
    let g = ChainGraph::new(s, d)?.restricted(&cr);
    let classes: Vec<Vec<usize>> = g
        .sccs()
        .into_iter()
        .filter(|c| cr.contains(c[0]))
        .collect();
    let mut class_of = vec![usize::MAX; s.size()];
    for (i, c) in classes.iter().enumerate() {
        for &x in c {
            class_of[x] = i;
        }
    }
    let mut asymmetric = Vec::new();
    for x in cr.iter() {
        for y in g.reachable(x).iter() {
            if class_of[x] != class_of[y] {
                asymmetric.push((x, y));
            }
        }
    }
    let not_clopen = classes
        .iter()
        .enumerate()
        .filter(|(_, c)| {
            c.iter()
                .any(|&x| s.space().w().row(x).intersection(&cr).iter().any(|y| class_of[y] != class_of[x]))
        })
        .map(|(i, _)| i)
        .collect();
    let periods = classes
        .iter()
        .map(|c| g.period_from(&PointSet::from_iter_in(s.size(), c.iter().copied()), c[0]))
        .collect();
    Ok(SimClasses {
        classes,
        periods,
        asymmetric,
        not_clopen,
    })
}

/// `k_A`: gcd of the lengths of `D`-chains `x → x` inside `CR(f)`,
/// computed from every anchor of the class; disagreement between anchors
/// is an internal invariant violation.
pub fn class_period(s: &FiniteSystem, d: &Relation, class: &[usize]) -> Result<usize> {
    let sim = sim_classes(s, d)?;
    let mut sorted = class.to_vec();
    sorted.sort_unstable();
    if !sim.classes.contains(&sorted) {
        return Err(invalid(format!("{class:?} is not a ~_D class")));
    }
    let cr = chain_recurrent_set(s);
    let g = ChainGraph::new(s, d)?.restricted(&cr);
    let comp = PointSet::from_iter_in(s.size(), sorted.iter().copied());
    let k = g.period_from(&comp, sorted[0]);
    if let Some(&x) = sorted.iter().find(|&&x| g.period_from(&comp, x) != k) {
        return Err(ShadowError::InternalInvariant(format!(
            "class period differs at anchor {x}"
        )));
    }
    Ok(k)
}

/// Outcome of a constructive search: a witness, or the size of the space
/// that was exhausted without finding one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Search<T> {
    Found(T),
    NotFound { explored: usize },
}

impl<T> Search<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Search::Found(t) => Some(t),
            Search::NotFound { .. } => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Search::Found(_))
    }
}

fn is_e_chain(s: &FiniteSystem, e: &Relation, ys: &[usize]) -> bool {
    ys.windows(2).all(|w| e.contains(s.f(w[0]), w[1]))
}

/// A closed `E`-chain `y_0..y_n ⊆ CR(f)` with `(x_i, y_i) ∈ E`, found by
/// layered search over the product of the input chain with `G_E` on
/// `CR(f)`. The smallest feasible `y_0` is used.
pub fn cr_shadow_chain(s: &FiniteSystem, chain: &[usize], e: &Relation) -> Result<Search<Vec<usize>>> {
    let n = s.size();
    if chain.len() < 2 || chain.first() != chain.last() {
        return Err(invalid("expected a closed chain x_0, ..., x_n = x_0 with n >= 1"));
    }
    if chain.iter().any(|&x| x >= n) {
        return Err(invalid("chain point outside X"));
    }
    e.check_probe("E")?;
    let cr = chain_recurrent_set(s);
    if chain.iter().all(|&x| cr.contains(x) && e.contains(x, x)) && is_e_chain(s, e, chain) {
        return Ok(Search::Found(chain.to_vec()));
    }
    let g = ChainGraph::new(s, e)?.restricted(&cr);
    let len = chain.len();
    let mut explored = 0;
    for y0 in e.row(chain[0]).intersection(&cr).iter() {
        // layers[i] = feasible y_i given y_0.
        let mut layers = vec![PointSet::singleton(n, y0)];
        for &xi in &chain[1..] {
            let next = g
                .step(layers.last().expect("non-empty"))
                .intersection(e.row(xi));
            explored += next.count();
            layers.push(next);
        }
        if !layers[len - 1].contains(y0) {
            continue;
        }
        let mut ys = vec![y0; len];
        for i in (1..len - 1).rev() {
            let target = ys[i + 1];
            ys[i] = layers[i]
                .iter()
                .find(|&y| g.has_edge(y, target))
                .expect("layer reconstructs");
        }
        return Ok(Search::Found(ys));
    }
    Ok(Search::NotFound { explored })
}

/// A pseudo-orbit inside `CR(f)` together with the index from which it
/// stays `E`-close to the input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrApproximation {
    pub seq: EPSeq,
    pub from: usize,
}

fn check_seq(s: &FiniteSystem, po: &EPSeq) -> Result<()> {
    if po.tail().iter().chain(po.cycle()).any(|&x| x >= s.size()) {
        return Err(invalid("sequence point outside X"));
    }
    Ok(())
}

/// An `E`-pseudo orbit `y ⊆ CR(f)` (eventually periodic) and minimal `N`
/// with `(x_i, y_i) ∈ E` for all `i >= N`, restricted to indices in
/// `agree` (all of ℕ for the plain lemma).
///
/// Nodes are `(lasso position, y)`. The set `Good` of nodes admitting an
/// infinite continuation is a greatest fixpoint; the answer is the least
/// `N` such that from position `N` some `y ∈ CR(f)` starts in `Good`, and
/// any prefix `y_0..y_{N-1}` that chains into it (the prefix need not be
/// close to `x`). Prefixes are searched inside `CR(f)` as well.
fn cr_approx_search(s: &FiniteSystem, po: &EPSeq, agree: &UPSet, e: &Relation) -> Result<Search<CrApproximation>> {
    check_seq(s, po)?;
    e.check_probe("E")?;
    let n = s.size();
    let cr = chain_recurrent_set(s);
    let g = ChainGraph::new(s, e)?.restricted(&cr);
    // Positions [0, t + p) with t + p - 1 → t cover every index exactly
    // once the shape is common to the sequence and the constraint set.
    let (t, p) = (po.tail_len().max(agree.tail_len()), po.period().lcm(&agree.period()));
    let positions = t + p;
    let next = |i: usize| if i + 1 < positions { i + 1 } else { t };
    let allowed = |i: usize, y: usize| !agree.contains(i) || e.contains(*po.get(i), y);
    let mut good: Vec<PointSet> = (0..positions)
        .map(|i| PointSet::from_iter_in(n, cr.iter().filter(|&y| allowed(i, y))))
        .collect();
    loop {
        let mut changed = false;
        for i in 0..positions {
            let j = next(i);
            let keep = PointSet::from_iter_in(n, good[i].iter().filter(|&y| g.succ(y).intersects(&good[j])));
            if keep != good[i] {
                good[i] = keep;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let explored = good.iter().map(PointSet::count).sum();
    // Least N: some y_N in Good reachable by an N-step chain inside CR(f).
    for start in 0..positions {
        if good[start].is_empty() {
            continue;
        }
        let mut back = vec![PointSet::empty(n); start + 1];
        back[start] = good[start].clone();
        for i in (0..start).rev() {
            back[i] = PointSet::from_iter_in(n, cr.iter().filter(|&y| g.succ(y).intersects(&back[i + 1])));
        }
        let Some(mut y) = back[0].first() else {
            continue;
        };
        let mut prefix = Vec::with_capacity(start);
        for layer in &back[1..] {
            prefix.push(y);
            y = g.succ(y).intersection(layer).first().expect("back layers chain");
        }
        // Walk (position, y) nodes inside Good taking the least successor;
        // the walk is eventually periodic.
        let mut seen = std::collections::HashMap::new();
        let mut ys = Vec::new();
        let mut node = (start, y);
        while !seen.contains_key(&node) {
            seen.insert(node, ys.len());
            ys.push(node.1);
            let j = next(node.0);
            let y = g.succ(node.1).intersection(&good[j]).first().expect("Good is closed");
            node = (j, y);
        }
        let cycle = ys.split_off(seen[&node]);
        prefix.extend(ys);
        let seq = Lasso::new(prefix, cycle).expect("non-empty cycle");
        return Ok(Search::Found(CrApproximation { seq, from: start }));
    }
    Ok(Search::NotFound { explored })
}

/// `E`-pseudo orbit in `CR(f)` eventually `E`-close to `po`, with the
/// least such `N`. Returns `(po, 0)` when `po` already qualifies.
pub fn cr_shadow_pseudo_orbit(s: &FiniteSystem, po: &EPSeq, e: &Relation) -> Result<Search<CrApproximation>> {
    check_seq(s, po)?;
    e.check_probe("E")?;
    let cr = chain_recurrent_set(s);
    let (t, p) = po.shape();
    let in_cr = (0..t + p).all(|i| cr.contains(*po.get(i)));
    let is_e_po = (0..t + p).all(|i| e.contains(s.f(*po.get(i)), *po.get(i + 1)));
    if in_cr && is_e_po {
        return Ok(Search::Found(CrApproximation {
            seq: po.clone(),
            from: 0,
        }));
    }
    cr_approx_search(s, po, &UPSet::naturals(), e)
}

/// The thick-set variant: `T` must be thick (on UP sets: cofinite). The
/// answer is `T' = T ∩ [N, ∞)` and an `E`-pseudo orbit in `CR(f)` (on all
/// of ℕ, hence on `T'`) `E`-close to `po` on `T'`.
pub fn cr_shadow_on_thick(
    s: &FiniteSystem,
    po: &EPSeq,
    thick: &UPSet,
    e: &Relation,
) -> Result<Search<(UPSet, EPSeq)>> {
    if !thick.is_cofinite() {
        return Err(invalid("constraint set is not thick"));
    }
    check_seq(s, po)?;
    e.check_probe("E")?;
    let cr = chain_recurrent_set(s);
    let (t, p) = (po.tail_len().max(thick.tail_len()), po.period().lcm(&thick.period()));
    let already = (0..t + p).all(|i| {
        let x = *po.get(i);
        cr.contains(x) && e.contains(s.f(x), *po.get(i + 1))
    });
    if already {
        return Ok(Search::Found((thick.clone(), po.clone())));
    }
    Ok(match cr_approx_search(s, po, thick, e)? {
        Search::Found(a) => Search::Found((thick.intersection(&UPSet::from_threshold(a.from)), a.seq)),
        Search::NotFound { explored } => Search::NotFound { explored },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynsys::tests::{celled, discrete, sys_a};

    fn brute_period(g: &ChainGraph, x: usize, max_len: usize) -> usize {
        let n = g.size();
        let mut layer = PointSet::singleton(n, x);
        let mut k = 0;
        for len in 1..=max_len {
            layer = g.step(&layer);
            if layer.contains(x) {
                k = k.gcd(&len);
            }
        }
        k
    }

    #[test]
    fn graph_examples() {
        let a = sys_a();
        let g = chain_graph(&a, &Relation::diagonal(2)).unwrap();
        assert_eq!(g.succ(0).to_vec(), vec![1]);
        assert_eq!(g.succ(1).to_vec(), vec![1]);
        let g = chain_graph(&a, &Relation::full(2)).unwrap();
        assert!(g.has_edge(1, 0) && g.has_edge(0, 0));
        assert!(chain_graph(&a, &Relation::empty(2)).is_err());
    }

    #[test]
    fn length_sets() {
        let c3 = discrete(vec![1, 2, 0]);
        let g = chain_graph(&c3, &Relation::diagonal(3)).unwrap();
        assert_eq!(g.length_set(0, 0), UPSet::from_bits("", "100").unwrap().intersection(&UPSet::from_threshold(1)));
        let a = sys_a();
        let g = chain_graph(&a, &Relation::diagonal(2)).unwrap();
        assert_eq!(g.length_set(1, 1), UPSet::from_threshold(1));
        assert!(g.length_set(1, 0).is_empty());
    }

    #[test]
    fn recurrence_examples() {
        assert_eq!(chain_recurrent_set(&sys_a()).to_vec(), vec![1]);
        let c3 = discrete(vec![1, 2, 0]);
        assert_eq!(chain_recurrent_set(&c3).count(), 3);
        assert!(is_chain_transitive(&c3));
        assert!(!is_chain_mixing(&c3));
        assert!(is_chain_mixing(&discrete(vec![0])));
        // A 2-cell rotation where one cell holds two points: period 2.
        let s = celled(&[vec![0, 1], vec![2]], vec![2, 2, 0]);
        assert!(is_chain_transitive(&s) && !is_chain_mixing(&s));
    }

    #[test]
    fn sim_class_examples() {
        let a = sys_a();
        let c = sim_classes(&a, &Relation::diagonal(2)).unwrap();
        assert_eq!(c.classes, vec![vec![1]]);
        let two = discrete(vec![1, 0, 3, 2]);
        let c = sim_classes(&two, &Relation::diagonal(4)).unwrap();
        assert_eq!(c.classes, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(c.periods, vec![2, 2]);
        let c = sim_classes(&two, &Relation::full(4)).unwrap();
        assert_eq!(c.classes, vec![vec![0, 1, 2, 3]]);
        let celled_sys = celled(&[vec![0, 1]], vec![0, 0]);
        assert_eq!(
            sim_classes(&celled_sys, &Relation::diagonal(2)),
            Err(ShadowError::NotAnEntourage)
        );
    }

    #[test]
    fn periods_match_closed_walks() {
        // 4-cycle plus a chord 3 -> 1 making a 3-cycle 1->2->3->1.
        let s = discrete(vec![1, 2, 3, 0]);
        let d = Relation::from_pairs(4, [(0, 1), (1, 0)]).unwrap().with_diagonal();
        let g = chain_graph(&s, &d).unwrap();
        let all = PointSet::full(4);
        for x in 0..4 {
            assert_eq!(g.period_from(&all, x), brute_period(&g, x, 12));
        }
        let c3 = discrete(vec![1, 2, 0]);
        assert_eq!(class_period(&c3, &Relation::diagonal(3), &[0, 1, 2]).unwrap(), 3);
        let fixed = discrete(vec![0, 0]);
        assert_eq!(class_period(&fixed, &Relation::diagonal(2), &[0]).unwrap(), 1);
    }

    #[test]
    fn tarjan_agrees_with_mutual_reachability() {
        let s = discrete(vec![1, 0, 1, 4, 3, 3]);
        let d = Relation::from_pairs(6, [(0, 5), (5, 0)]).unwrap().with_diagonal();
        let g = chain_graph(&s, &d).unwrap();
        let reach: Vec<PointSet> = (0..6).map(|x| g.reachable(x)).collect();
        for comp in g.sccs() {
            for &a in &comp {
                for b in 0..6 {
                    let mutual = reach[a].contains(b) && reach[b].contains(a);
                    assert_eq!(mutual, comp.contains(&b));
                }
            }
        }
    }

    #[test]
    fn chain_search_examples() {
        let a = sys_a();
        let d = Relation::diagonal(2);
        assert_eq!(cr_shadow_chain(&a, &[1, 1], &d).unwrap(), Search::Found(vec![1, 1]));
        // Closed full-chain through the transient point.
        let full = Relation::full(2);
        let found = cr_shadow_chain(&a, &[0, 1, 0], &full).unwrap().found().unwrap();
        assert!(found.iter().all(|&y| y == 1));
        assert!(cr_shadow_chain(&a, &[0, 1], &d).is_err());
        // Transient point with Δ: no point of CR is Δ-close to 0.
        assert!(!cr_shadow_chain(&a, &[0, 0], &d).unwrap().is_found());
    }

    #[test]
    fn pseudo_orbit_search_examples() {
        let a = sys_a();
        let d = Relation::diagonal(2);
        let orbit_a = a.orbit(0);
        let got = cr_shadow_pseudo_orbit(&a, &orbit_a, &d).unwrap().found().unwrap();
        assert_eq!(got.from, 1);
        assert_eq!(got.seq, Lasso::constant(1));
        let in_cr = Lasso::constant(1);
        let got = cr_shadow_pseudo_orbit(&a, &in_cr, &d).unwrap().found().unwrap();
        assert_eq!((got.seq, got.from), (in_cr, 0));
        let got = cr_shadow_pseudo_orbit(&a, &orbit_a, &Relation::full(2)).unwrap().found().unwrap();
        assert_eq!(got.from, 0);
    }

    #[test]
    fn thick_search_examples() {
        let a = sys_a();
        let d = Relation::diagonal(2);
        let (t, y) = cr_shadow_on_thick(&a, &a.orbit(0), &UPSet::naturals(), &d)
            .unwrap()
            .found()
            .unwrap();
        assert_eq!(t, UPSet::from_threshold(1));
        assert_eq!(y, Lasso::constant(1));
        assert!(cr_shadow_on_thick(&a, &a.orbit(0), &UPSet::residues(2, &[0]).unwrap(), &d).is_err());
    }
}
