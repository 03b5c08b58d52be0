//! Generated families of systems.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynsys::{check_factor, FiniteSystem};
use crate::error::{invalid, Result, ShadowError};
use crate::shadowing::shadowing_modulus;
use crate::uniform::{Relation, UniformBase};

#[derive(Clone, Debug)]
pub struct CorpusItem {
    pub name: String,
    pub system: FiniteSystem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "map", rename_all = "snake_case")]
pub enum CircleMap {
    Identity,
    /// Rotation by `q` cells.
    Rotation { q: usize },
    /// Doubling: cell `i` goes to cell `2i + 1 mod N`, the cell holding the
    /// image of its midpoint.
    Doubling,
}

impl CircleMap {
    pub fn parse(s: &str) -> Result<CircleMap> {
        let s = s.trim();
        if s == "identity" {
            return Ok(CircleMap::Identity);
        }
        if s == "doubling" {
            return Ok(CircleMap::Doubling);
        }
        if let Some(q) = s.strip_prefix("rotation:").or_else(|| s.strip_prefix("rotation=")) {
            let q = q.parse().map_err(|_| invalid(format!("bad rotation amount {q:?}")))?;
            return Ok(CircleMap::Rotation { q });
        }
        Err(invalid(format!("unknown circle map {s:?}")))
    }

    fn image(self, i: usize, cells: usize) -> usize {
        match self {
            CircleMap::Identity => i,
            CircleMap::Rotation { q } => (i + q) % cells,
            CircleMap::Doubling => (2 * i + 1) % cells,
        }
    }

    /// The same map one level finer, when the cell count doubles.
    fn refined(self) -> CircleMap {
        match self {
            CircleMap::Rotation { q } => CircleMap::Rotation { q: 2 * q },
            other => other,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CorpusKind {
    Exhaustive { n: usize },
    Random { n: usize, count: usize, seed: u64 },
    Circle { map: CircleMap, cells: usize, depth: usize },
}

pub const MAX_EXHAUSTIVE: usize = 5;

/// Set partitions of `[0, n)` as restricted growth strings.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn go(i: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == rgs.len() {
            out.push(rgs.clone());
            return;
        }
        for c in 0..=max + 1 {
            rgs[i] = c;
            go(i + 1, max.max(c), rgs, out);
        }
    }
    if n > 0 {
        go(1, 0, &mut rgs, &mut out);
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn go(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            go(k + 1, p, out);
            p.swap(k, i);
        }
    }
    go(0, &mut p, &mut out);
    out
}

/// `(canonical cell labels, map)` after relabelling points by `perm`.
fn relabel(cells: &[usize], map: &[usize], perm: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let n = cells.len();
    let mut c = vec![0; n];
    let mut m = vec![0; n];
    for x in 0..n {
        c[perm[x]] = cells[x];
        m[perm[x]] = perm[map[x]];
    }
    // Renumber cells by first occurrence.
    let mut seen: Vec<usize> = Vec::new();
    for v in c.iter_mut() {
        let k = seen.iter().position(|s| s == v).unwrap_or_else(|| {
            seen.push(*v);
            seen.len() - 1
        });
        *v = k;
    }
    (c, m)
}

fn cells_of(rgs: &[usize]) -> Vec<Vec<usize>> {
    let k = rgs.iter().max().map_or(0, |m| m + 1);
    let mut cells = vec![Vec::new(); k];
    for (x, &c) in rgs.iter().enumerate() {
        cells[c].push(x);
    }
    cells
}

/// Base `{W, W ∪ line-adjacency}`. The uniformity is fixed by `W`; the
/// second member only gives per-entourage checks a coarser case.
fn corpus_base(n: usize, cells: &[Vec<usize>]) -> Result<UniformBase> {
    let w = Relation::from_partition(n, cells)?;
    if n < 2 {
        return UniformBase::validate(vec![w]);
    }
    let line = w.union(&Relation::within_line(n, 1))?;
    UniformBase::validate(vec![w, line])
}

fn cell_respecting_maps(cells: &[Vec<usize>], n: usize, mut visit: impl FnMut(Vec<usize>)) {
    let cell_of = {
        let mut v = vec![0; n];
        for (i, c) in cells.iter().enumerate() {
            for &x in c {
                v[x] = i;
            }
        }
        v
    };
    // Choose a target cell per cell, then a target point per point.
    let k = cells.len();
    let mut targets = vec![0usize; k];
    loop {
        let mut map = vec![0usize; n];
        let mut idx = vec![0usize; n];
        loop {
            for x in 0..n {
                map[x] = cells[targets[cell_of[x]]][idx[x]];
            }
            visit(map.clone());
            let mut x = 0;
            while x < n {
                idx[x] += 1;
                if idx[x] < cells[targets[cell_of[x]]].len() {
                    break;
                }
                idx[x] = 0;
                x += 1;
            }
            if x == n {
                break;
            }
        }
        let mut c = 0;
        while c < k {
            targets[c] += 1;
            if targets[c] < k {
                break;
            }
            targets[c] = 0;
            c += 1;
        }
        if c == k {
            break;
        }
    }
}

/// All systems on `n` points up to relabelling of points.
fn exhaustive(n: usize) -> Result<Vec<CorpusItem>> {
    if n == 0 || n > MAX_EXHAUSTIVE {
        return Err(invalid(format!("exhaustive corpus needs 1 <= n <= {MAX_EXHAUSTIVE}")));
    }
    let perms = permutations(n);
    let mut seen: BTreeSet<(Vec<usize>, Vec<usize>)> = BTreeSet::new();
    let mut out = Vec::new();
    for rgs in set_partitions(n) {
        let cells = cells_of(&rgs);
        cell_respecting_maps(&cells, n, |map| {
            let canon = perms
                .iter()
                .map(|p| relabel(&rgs, &map, p))
                .min()
                .expect("at least one permutation");
            if seen.insert(canon) {
                out.push((cells.clone(), map));
            }
        });
    }
    out.into_iter()
        .map(|(cells, map)| {
            let system = FiniteSystem::new(corpus_base(n, &cells)?, map.clone(), false)?;
            Ok(CorpusItem {
                name: format!("ex{n}:{cells:?}:{map:?}"),
                system,
            })
        })
        .collect()
}

fn random(n: usize, count: usize, seed: u64) -> Result<Vec<CorpusItem>> {
    if n == 0 || n > 64 {
        return Err(invalid("random corpus needs 1 <= n <= 64"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let k = rng.gen_range(1..=n);
            let mut labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
            // Renumber the labels actually used.
            let used: BTreeSet<usize> = labels.iter().copied().collect();
            let used: Vec<usize> = used.into_iter().collect();
            for l in labels.iter_mut() {
                *l = used.iter().position(|u| u == l).expect("present");
            }
            let cells = cells_of(&labels);
            let targets: Vec<usize> = (0..cells.len()).map(|_| rng.gen_range(0..cells.len())).collect();
            let map: Vec<usize> = (0..n)
                .map(|x| {
                    let t = &cells[targets[labels[x]]];
                    t[rng.gen_range(0..t.len())]
                })
                .collect();
            let system = FiniteSystem::new(corpus_base(n, &cells)?, map, false)?;
            Ok(CorpusItem {
                name: format!("rand{n}:{seed}:{i}"),
                system,
            })
        })
        .collect()
}

/// The `N`-cell circle with `W = Δ` and the probe ladder
/// `adj^depth ⊋ ... ⊋ adj^1 ⊋ Δ` (coarse to fine).
#[derive(Clone, Debug)]
pub struct CircleSystem {
    pub system: FiniteSystem,
    pub ladder: Vec<Relation>,
    pub ladder_names: Vec<String>,
}

pub fn circle(map: CircleMap, cells: usize, depth: usize) -> Result<CircleSystem> {
    if cells < 3 {
        return Err(invalid("circle needs at least 3 cells"));
    }
    if 2 * depth >= cells {
        return Err(invalid(format!("ladder depth {depth} too large for {cells} cells")));
    }
    let table = (0..cells).map(|i| map.image(i, cells)).collect();
    let system = FiniteSystem::new(UniformBase::discrete(cells), table, false)?;
    let mut ladder = Vec::new();
    let mut ladder_names = Vec::new();
    for k in (1..=depth).rev() {
        ladder.push(Relation::within_cyclic(cells, k));
        ladder_names.push(format!("adj^{k}"));
    }
    ladder.push(Relation::diagonal(cells));
    ladder_names.push("Δ".into());
    Ok(CircleSystem {
        system,
        ladder,
        ladder_names,
    })
}

pub fn generate_corpus(kind: &CorpusKind) -> Result<Vec<CorpusItem>> {
    match *kind {
        CorpusKind::Exhaustive { n } => exhaustive(n),
        CorpusKind::Random { n, count, seed } => random(n, count, seed),
        CorpusKind::Circle { map, cells, depth } => Ok(vec![CorpusItem {
            name: format!("circle:{map:?}:{cells}"),
            system: circle(map, cells, depth)?.system,
        }]),
    }
}

/// `exhaustive:N`, `exhaustive-upto:N`, `random:N:COUNT[:SEED]` or
/// `circle:MAP:CELLS[:DEPTH]`, where `MAP` is `identity`, `doubling` or
/// `rotation=Q`. A missing random seed falls back to `seed`.
pub fn parse_corpus(spec: &str, seed: u64) -> Result<Vec<CorpusItem>> {
    let parts: Vec<&str> = spec.trim().split(':').collect();
    let num = |s: &str| -> Result<usize> { s.parse().map_err(|_| invalid(format!("bad number {s:?} in {spec:?}"))) };
    match parts.as_slice() {
        ["exhaustive", n] => generate_corpus(&CorpusKind::Exhaustive { n: num(n)? }),
        ["exhaustive-upto", n] => exhaustive_upto(num(n)?),
        ["random", n, count] => generate_corpus(&CorpusKind::Random { n: num(n)?, count: num(count)?, seed }),
        ["random", n, count, sd] => generate_corpus(&CorpusKind::Random {
            n: num(n)?,
            count: num(count)?,
            seed: sd.parse().map_err(|_| invalid(format!("bad seed {sd:?}")))?,
        }),
        ["circle", map, cells] => generate_corpus(&CorpusKind::Circle { map: CircleMap::parse(map)?, cells: num(cells)?, depth: 1 }),
        ["circle", map, cells, depth] => generate_corpus(&CorpusKind::Circle {
            map: CircleMap::parse(map)?,
            cells: num(cells)?,
            depth: num(depth)?,
        }),
        _ => Err(invalid(format!("unknown corpus spec {spec:?}"))),
    }
}

/// Exhaustive corpora for every size `1..=n`.
pub fn exhaustive_upto(n: usize) -> Result<Vec<CorpusItem>> {
    let mut out = Vec::new();
    for k in 1..=n {
        out.extend(exhaustive(k)?);
    }
    Ok(out)
}

/// Circle discretizations at `cells, 2·cells, 4·cells, ...`, each refining
/// the previous by `r(i) = ⌊i/2⌋`.
#[derive(Clone, Debug)]
pub struct Tower {
    pub levels: Vec<CircleSystem>,
    pub refinements: Vec<Vec<usize>>,
}

pub fn circle_tower(map: CircleMap, cells: usize, levels: usize, depth: usize) -> Result<Tower> {
    if levels == 0 {
        return Err(invalid("tower needs at least one level"));
    }
    let mut out = Vec::new();
    let mut refinements = Vec::new();
    let (mut m, mut n) = (map, cells);
    for k in 0..levels {
        let level = circle(m, n, depth)?;
        if k > 0 {
            let r: Vec<usize> = (0..n).map(|i| i / 2).collect();
            let coarse: &CircleSystem = out.last().expect("previous level");
            if !check_factor(&r, &level.system, &coarse.system)? {
                return Err(invalid(format!(
                    "level {k} does not refine level {}: the map does not commute with halving",
                    k - 1
                )));
            }
            refinements.push(r);
        }
        out.push(level);
        m = m.refined();
        n *= 2;
    }
    Ok(Tower {
        levels: out,
        refinements,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tolerance {
    Within(usize),
    Full,
}

impl Tolerance {
    pub fn parse(s: &str) -> Result<Tolerance> {
        match s.trim() {
            "full" => Ok(Tolerance::Full),
            t => t
                .parse()
                .map(Tolerance::Within)
                .map_err(|_| invalid(format!("bad tolerance {t:?}"))),
        }
    }

    fn relation(self, cells: usize) -> Relation {
        match self {
            Tolerance::Within(j) => Relation::within_cyclic(cells, j),
            Tolerance::Full => Relation::full(cells),
        }
    }

    fn name(self) -> String {
        match self {
            Tolerance::Within(j) => format!("adj^{j}"),
            Tolerance::Full => "full".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModulusRow {
    pub level: usize,
    pub cells: usize,
    pub tolerance: String,
    pub modulus: String,
    pub at_floor: bool,
    pub profile: String,
}

/// Coarsest ladder element at which every pseudo-orbit is traced, per
/// level and tolerance.
pub fn tower_modulus_report(tower: &Tower, tolerances: &[Tolerance]) -> Result<Vec<ModulusRow>> {
    let names = &tower.levels[0].ladder_names;
    if tower.levels.iter().any(|l| &l.ladder_names != names) {
        return Err(invalid("tower levels use different ladders"));
    }
    let mut rows = Vec::new();
    for (k, level) in tower.levels.iter().enumerate() {
        let n = level.system.size();
        for &t in tolerances {
            if let Tolerance::Within(j) = t {
                if 2 * j >= n {
                    return Err(invalid(format!("tolerance {j} too large for {n} cells")));
                }
            }
            let m = shadowing_modulus(&level.system, &t.relation(n), &level.ladder)?;
            let modulus = match m.coarsest {
                Some(i) => level.ladder_names[i].clone(),
                None => "none".into(),
            };
            rows.push(ModulusRow {
                level: k,
                cells: n,
                tolerance: t.name(),
                at_floor: m.coarsest == Some(level.ladder.len() - 1),
                modulus,
                profile: m.profile.iter().map(|&h| if h { '1' } else { '0' }).collect(),
            });
        }
    }
    Ok(rows)
}

pub fn moduli_csv(rows: &[ModulusRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| ShadowError::InternalInvariant(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| ShadowError::InternalInvariant(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
