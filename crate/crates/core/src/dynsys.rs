//! Finite uniform dynamical systems: validation, orbits, `N_f` sets and
//! the point/map classifications.

use std::collections::HashMap;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{invalid, Result, ShadowError};
use crate::lasso::Lasso;
use crate::natsets::UPSet;
use crate::pointset::PointSet;
use crate::uniform::UniformBase;

/// Eventually periodic sequence of point ids.
pub type EPSeq = Lasso<usize>;

/// A finite set with a uniform base and a continuous self-map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSystem {
    space: UniformBase,
    map: Vec<usize>,
    labels: Option<Vec<String>>,
    warnings: Vec<String>,
}

impl FiniteSystem {
    /// Validates continuity (cells map into cells). In `strict_onto` mode
    /// the map must also be onto, i.e. a permutation.
    pub fn new(space: UniformBase, map: Vec<usize>, strict_onto: bool) -> Result<FiniteSystem> {
        let n = space.size();
        if map.len() != n {
            return Err(invalid(format!(
                "map table has {} entries for {n} points",
                map.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= n) {
            return Err(invalid(format!("map image {bad} outside [0,{n})")));
        }
        for cell in space.open_cells() {
            let a = cell[0];
            if let Some(&b) = cell.iter().find(|&&b| !space.same_cell(map[a], map[b])) {
                return Err(ShadowError::Discontinuous {
                    a,
                    b,
                    fa: map[a],
                    fb: map[b],
                });
            }
        }
        let image = PointSet::from_iter_in(n, map.iter().copied());
        let mut warnings = Vec::new();
        if let Some(missing) = image.complement().first() {
            if strict_onto {
                return Err(ShadowError::NotSurjective(missing));
            }
            warnings.push(format!("map is not onto (point {missing} has no preimage)"));
        }
        Ok(FiniteSystem {
            space,
            map,
            labels: None,
            warnings,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<FiniteSystem> {
        if labels.len() != self.size() {
            return Err(invalid("label count does not match point count"));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.map.len()
    }

    pub fn space(&self) -> &UniformBase {
        &self.space
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn f(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn iterate(&self, x: usize, k: usize) -> usize {
        (0..k).fold(x, |y, _| self.map[y])
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn image(&self, a: &PointSet) -> PointSet {
        a.image(&self.map)
    }

    fn check_point(&self, x: usize) -> Result<()> {
        if x >= self.size() {
            return Err(invalid(format!("point {x} outside [0,{})", self.size())));
        }
        Ok(())
    }

    /// `x, f(x), f²(x), ...` as a lasso.
    pub fn orbit(&self, x: usize) -> EPSeq {
        let mut first_visit = vec![usize::MAX; self.size()];
        let mut seq = Vec::new();
        let mut y = x;
        while first_visit[y] == usize::MAX {
            first_visit[y] = seq.len();
            seq.push(y);
            y = self.map[y];
        }
        let cycle = seq.split_off(first_visit[y]);
        Lasso::new(seq, cycle).expect("cycle non-empty")
    }

    /// Points lying on cycles of the functional graph.
    pub fn periodic_points(&self) -> PointSet {
        let n = self.size();
        let mut per = PointSet::empty(n);
        for x in 0..n {
            if self.orbit(x).cycle().contains(&x) {
                per.insert(x);
            }
        }
        per
    }

    /// Lengths of the distinct cycles of `f`, ascending.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let per = self.periodic_points();
        let mut seen = PointSet::empty(self.size());
        let mut out = Vec::new();
        for x in per.iter() {
            if !seen.contains(x) {
                let c = self.orbit(x);
                for &y in c.cycle() {
                    seen.insert(y);
                }
                out.push(c.period());
            }
        }
        out.sort_unstable();
        out
    }

    pub fn cycle_lcm(&self) -> usize {
        self.cycle_lengths().into_iter().fold(1, |a, b| a.lcm(&b))
    }

    /// `N_f(x, U) = {n : f^n(x) ∈ U}`.
    pub fn hit_set(&self, x: usize, u: &PointSet) -> Result<UPSet> {
        self.check_point(x)?;
        if u.is_empty() {
            return Err(invalid("target set must be non-empty"));
        }
        Ok(UPSet::from_lasso(self.orbit(x).map(|&y| u.contains(y))))
    }

    /// `N_f(U, V) = {n : f^n(U) ∩ V ≠ ∅}`.
    pub fn meet_set(&self, u: &PointSet, v: &PointSet) -> Result<UPSet> {
        if u.is_empty() || v.is_empty() {
            return Err(invalid("both sets must be non-empty"));
        }
        let mut seen: HashMap<PointSet, usize> = HashMap::new();
        let mut images = Vec::new();
        let mut cur = u.clone();
        while !seen.contains_key(&cur) {
            seen.insert(cur.clone(), images.len());
            images.push(cur.intersects(v));
            cur = self.image(&cur);
        }
        let start = seen[&cur];
        let cycle = images.split_off(start);
        UPSet::normalize(images, cycle)
    }

    /// `x` is minimal iff `N_f(x, W[x])` is syndetic; `W[x]` is the least
    /// open neighbourhood and `N_f(x, ·)` is monotone, so this is exact.
    pub fn minimal_points(&self) -> PointSet {
        let n = self.size();
        PointSet::from_iter_in(
            n,
            (0..n).filter(|&x| {
                !self
                    .hit_set(x, &self.space.min_open(x))
                    .expect("non-empty")
                    .is_finite()
            }),
        )
    }

    /// `x` is non-wandering iff `f^n(W[x]) ∩ W[x] ≠ ∅` for some `n >= 1`.
    pub fn nonwandering_points(&self) -> PointSet {
        let n = self.size();
        PointSet::from_iter_in(
            n,
            (0..n).filter(|&x| {
                let cell = self.space.min_open(x);
                self.meet_set(&cell, &cell)
                    .expect("non-empty")
                    .first_at_least(1)
                    .is_some()
            }),
        )
    }

    fn cell_meet_matrix(&self) -> Vec<Vec<UPSet>> {
        let m = self.space.open_cells().len();
        let cells: Vec<PointSet> = (0..m).map(|c| self.space.cell_set(c)).collect();
        cells
            .iter()
            .map(|a| {
                cells
                    .iter()
                    .map(|b| self.meet_set(a, b).expect("cells non-empty"))
                    .collect()
            })
            .collect()
    }

    /// Transitivity-type flags, all reduced to the `W`-cells (every
    /// non-empty open set contains a cell, and `N_f` is monotone).
    pub fn classify_transitivity(&self, n_bound: Option<usize>) -> TransitivityReport {
        let meets = self.cell_meet_matrix();
        let all_pairs = || meets.iter().flat_map(|row| row.iter());
        let transitive = all_pairs().all(|s| !s.is_empty());
        let mixing = all_pairs().all(UPSet::is_cofinite);
        let weakly_mixing = all_pairs().all(|ac| {
            all_pairs().all(|bd| !ac.intersection(bd).is_empty())
        });
        let lcm = self.cycle_lcm();
        let bound = n_bound.unwrap_or(self.size() + lcm);
        let totally_transitive =
            (1..=bound).all(|m| all_pairs().all(|s| contains_multiple_of(s, m)));
        TransitivityReport {
            transitive,
            totally_transitive,
            totally_transitive_bound: bound,
            justification: format!(
                "f^m restricted to the eventual cycles is periodic in m with period dividing lcm={lcm}; \
                 transients die within |X|={} steps; checked every m in 1..={bound}",
                self.size()
            ),
            weakly_mixing,
            mixing,
        }
    }

    /// Product system `f × f` on `X × X` with product cells; point
    /// `(a, b)` has id `a * n + b`.
    pub fn product(&self) -> FiniteSystem {
        let n = self.size();
        let map = (0..n * n)
            .map(|p| self.map[p / n] * n + self.map[p % n])
            .collect();
        let cells: Vec<Vec<usize>> = self
            .space
            .open_cells()
            .iter()
            .flat_map(|ca| {
                self.space.open_cells().iter().map(move |cb| {
                    let mut c: Vec<usize> = ca
                        .iter()
                        .flat_map(|&a| cb.iter().map(move |&b| a * n + b))
                        .collect();
                    c.sort_unstable();
                    c
                })
            })
            .collect();
        let space = UniformBase::from_partition(n * n, &cells).expect("product of partitions");
        FiniteSystem::new(space, map, false).expect("product of continuous maps")
    }

    /// `f^k` on the same space.
    pub fn power(&self, k: usize) -> FiniteSystem {
        let map = (0..self.size()).map(|x| self.iterate(x, k)).collect();
        FiniteSystem::new(self.space.clone(), map, false).expect("iterate of continuous map")
    }
}

fn contains_multiple_of(s: &UPSet, m: usize) -> bool {
    (0..s.tail_len() + s.period() * m).any(|i| i % m == 0 && s.contains(i))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitivityReport {
    pub transitive: bool,
    pub totally_transitive: bool,
    pub totally_transitive_bound: usize,
    pub justification: String,
    pub weakly_mixing: bool,
    pub mixing: bool,
}

/// `π: X → Y` is a factor map iff it is onto, cell-respecting, and
/// `π ∘ f = g ∘ π`.
pub fn check_factor(pi: &[usize], sx: &FiniteSystem, sy: &FiniteSystem) -> Result<bool> {
    if pi.len() != sx.size() {
        return Err(invalid("factor map must be total on X"));
    }
    if pi.iter().any(|&y| y >= sy.size()) {
        return Err(invalid("factor map leaves Y"));
    }
    let image = PointSet::from_iter_in(sy.size(), pi.iter().copied());
    if let Some(y) = image.complement().first() {
        return Err(invalid(format!("factor map is not onto: {y} missed")));
    }
    let commutes = (0..sx.size()).all(|x| pi[sx.f(x)] == sy.f(pi[x]));
    let continuous = (0..sx.size()).all(|a| {
        sx.space()
            .min_open(a)
            .iter()
            .all(|b| sy.space().same_cell(pi[a], pi[b]))
    });
    Ok(commutes && continuous)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::uniform::Relation;

    /// X = {a, b}, f(a) = b, f(b) = b, discrete.
    pub fn sys_a() -> FiniteSystem {
        FiniteSystem::new(UniformBase::discrete(2), vec![1, 1], false).unwrap()
    }

    pub fn discrete(map: Vec<usize>) -> FiniteSystem {
        FiniteSystem::new(UniformBase::discrete(map.len()), map, false).unwrap()
    }

    pub fn celled(cells: &[Vec<usize>], map: Vec<usize>) -> FiniteSystem {
        let n = map.len();
        FiniteSystem::new(UniformBase::from_partition(n, cells).unwrap(), map, false).unwrap()
    }

    fn set(n: usize, xs: &[usize]) -> PointSet {
        PointSet::from_iter_in(n, xs.iter().copied())
    }

    #[test]
    fn validation_errors() {
        let cells = UniformBase::from_partition(3, &[vec![0, 1], vec![2]]).unwrap();
        let err = FiniteSystem::new(cells.clone(), vec![0, 2, 2], false).unwrap_err();
        assert!(matches!(err, ShadowError::Discontinuous { a: 0, b: 1, .. }));
        assert!(FiniteSystem::new(cells.clone(), vec![0, 1], false).is_err());
        assert!(FiniteSystem::new(cells.clone(), vec![0, 1, 3], false).is_err());
        let err = FiniteSystem::new(UniformBase::discrete(2), vec![1, 1], true).unwrap_err();
        assert_eq!(err, ShadowError::NotSurjective(0));
        assert_eq!(sys_a().warnings().len(), 1);
        assert!(FiniteSystem::new(UniformBase::discrete(2), vec![1, 0], true).is_ok());
    }

    #[test]
    fn orbit_examples() {
        let s = sys_a();
        assert_eq!(s.orbit(1), Lasso::new(vec![], vec![1]).unwrap());
        assert_eq!(s.orbit(0), Lasso::new(vec![0], vec![1]).unwrap());
        let rot = discrete(vec![1, 2, 0]);
        assert_eq!(rot.orbit(0).cycle(), &[0, 1, 2]);
        for i in 0..12 {
            assert_eq!(*rot.orbit(0).get(i), rot.iterate(0, i));
        }
    }

    #[test]
    fn hit_and_meet_examples() {
        let rot4 = discrete(vec![1, 2, 3, 0]);
        assert_eq!(rot4.hit_set(0, &set(4, &[0])).unwrap(), "mod 4 in {0}".parse().unwrap());
        let s = sys_a();
        assert_eq!(s.hit_set(0, &set(2, &[1])).unwrap(), UPSet::from_threshold(1));
        let all = PointSet::full(2);
        assert_eq!(s.meet_set(&all, &all).unwrap(), UPSet::naturals());
        assert!(s.hit_set(0, &PointSet::empty(2)).is_err());
        assert!(s.meet_set(&PointSet::empty(2), &all).is_err());
    }

    #[test]
    fn hit_and_meet_match_simulation() {
        let s = celled(&[vec![0, 1], vec![2], vec![3, 4]], vec![2, 2, 3, 0, 1]);
        let u = set(5, &[0, 1]);
        let v = set(5, &[3]);
        for x in 0..5 {
            let h = s.hit_set(x, &v).unwrap();
            for i in 0..200 {
                assert_eq!(h.contains(i), v.contains(s.iterate(x, i)));
            }
        }
        let m = s.meet_set(&u, &v).unwrap();
        let mut cur = u.clone();
        for i in 0..200 {
            assert_eq!(m.contains(i), cur.intersects(&v));
            cur = s.image(&cur);
        }
    }

    #[test]
    fn minimal_and_nonwandering_examples() {
        let s = sys_a();
        assert_eq!(s.minimal_points().to_vec(), vec![1]);
        assert_eq!(s.nonwandering_points().to_vec(), vec![1]);
        let rot = discrete(vec![1, 2, 0]);
        assert_eq!(rot.minimal_points().count(), 3);
        assert_eq!(rot.nonwandering_points().count(), 3);
        let id = celled(&[vec![0, 1], vec![2]], vec![0, 1, 2]);
        assert_eq!(id.minimal_points().count(), 3);
    }

    #[test]
    fn transitivity_examples() {
        let rot4 = discrete(vec![1, 2, 3, 0]);
        let r = rot4.classify_transitivity(None);
        assert!(r.transitive && !r.mixing && !r.weakly_mixing && !r.totally_transitive);
        let id = discrete(vec![0, 1]);
        assert!(!id.classify_transitivity(None).transitive);
        let one = celled(&[vec![0, 1, 2]], vec![2, 0, 0]);
        let r = one.classify_transitivity(None);
        assert!(r.transitive && r.mixing && r.weakly_mixing && r.totally_transitive);
    }

    #[test]
    fn weak_mixing_matches_product_transitivity() {
        let space = UniformBase::from_partition(3, &[vec![0, 1], vec![2]]).unwrap();
        for map in [vec![1, 0, 2], vec![2, 2, 0], vec![0, 0, 2], vec![2, 2, 1], vec![1, 1, 1]] {
            let Ok(s) = FiniteSystem::new(space.clone(), map, false) else {
                continue;
            };
            let wm = s.classify_transitivity(None).weakly_mixing;
            assert_eq!(wm, s.product().classify_transitivity(Some(1)).transitive);
        }
    }

    #[test]
    fn factor_examples() {
        let s = sys_a();
        assert!(check_factor(&[0, 1], &s, &s).unwrap());
        let point = discrete(vec![0]);
        assert!(check_factor(&[0, 0], &s, &point).unwrap());
        let swap = discrete(vec![1, 0]);
        assert!(!check_factor(&[1, 0], &s, &swap).unwrap());
        assert!(check_factor(&[0, 0], &s, &s).is_err());
    }

    #[test]
    fn product_ids() {
        let s = sys_a();
        let p = s.product();
        assert_eq!(p.size(), 4);
        assert_eq!(p.f(0), 3);
        assert!(p.space().is_hausdorff());
        let coarse = FiniteSystem::new(
            UniformBase::validate(vec![Relation::full(2)]).unwrap(),
            vec![1, 1],
            false,
        )
        .unwrap();
        assert_eq!(coarse.product().space().open_cells().len(), 1);
    }
}
