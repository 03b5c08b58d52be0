//! Syndetically proximal pairs, entourage interiors, the collapse of the
//! minimal set, and the checks built on them.

use serde::Serialize;

use crate::dynsys::{check_factor, FiniteSystem};
use crate::error::{invalid, Result, ShadowError};
use crate::lasso::Lasso;
use crate::natsets::{family_membership, Family, UPSet};
use crate::pointset::PointSet;
use crate::shadowing::{fg_shadowing_verify, trace_set, Caps};
use crate::uniform::{Relation, UniformBase};

/// `{n : (f^n(x), f^n(y)) ∈ E}`.
pub fn agreement_set(s: &FiniteSystem, x: usize, y: usize, e: &Relation) -> UPSet {
    UPSet::from_lasso(s.orbit(x).zip_with(&s.orbit(y), |&a, &b| e.contains(a, b)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProximalReport {
    pub pair: (usize, usize),
    pub agreement: Vec<UPSet>,
    pub syndetic: Vec<bool>,
    pub thickly_syndetic: Vec<bool>,
    pub spr: bool,
}

/// Agreement sets against every base entourage, in base order.
pub fn proximal_report(s: &FiniteSystem, x: usize, y: usize) -> ProximalReport {
    let agreement: Vec<UPSet> = s.space().base().iter().map(|e| agreement_set(s, x, y, e)).collect();
    let syndetic: Vec<bool> = agreement.iter().map(|a| Family::Syndetic.contains(a)).collect();
    let thickly_syndetic = agreement.iter().map(|a| Family::ThicklySyndetic.contains(a)).collect();
    let spr = syndetic.iter().all(|&b| b);
    ProximalReport {
        pair: (x, y),
        agreement,
        syndetic,
        thickly_syndetic,
        spr,
    }
}

/// Pairs whose `W`-agreement set is syndetic. Agreement sets grow with
/// `E`, so `W` is the binding case.
pub fn spr(s: &FiniteSystem) -> Relation {
    let n = s.size();
    let w = s.space().w();
    let mut r = Relation::empty(n);
    for x in 0..n {
        for y in 0..n {
            if Family::Syndetic.contains(&agreement_set(s, x, y, w)) {
                r.insert(x, y);
            }
        }
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Confirmed,
    Contradiction,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremCheck {
    pub outcome: Outcome,
    pub notes: Vec<String>,
}

impl TheoremCheck {
    fn new(outcome: Outcome, notes: Vec<String>) -> TheoremCheck {
        TheoremCheck { outcome, notes }
    }

    fn not_applicable(why: &str) -> TheoremCheck {
        TheoremCheck::new(Outcome::NotApplicable, vec![why.to_string()])
    }
}

/// Every proximal pair agrees on a thickly syndetic set for every base
/// entourage.
pub fn prop_l8_check(s: &FiniteSystem) -> TheoremCheck {
    let mut notes = Vec::new();
    let r = spr(s);
    for (x, y) in r.pairs() {
        for (i, e) in s.space().base().iter().enumerate() {
            let a = agreement_set(s, x, y, e);
            if !Family::ThicklySyndetic.contains(&a) {
                notes.push(format!("pair ({x},{y}) agrees on {a} for base entourage {i}"));
            }
        }
    }
    if notes.is_empty() {
        TheoremCheck::new(Outcome::Confirmed, vec![format!("{} proximal pairs checked", r.pair_count())])
    } else {
        TheoremCheck::new(Outcome::Contradiction, notes)
    }
}

/// Union of the cell blocks `C × C'` contained in `U`.
pub fn entourage_interior(s: &FiniteSystem, u: &Relation) -> Result<Relation> {
    let space = s.space();
    if u.size() != s.size() || !u.is_reflexive() {
        return Err(invalid("relation must be reflexive on X"));
    }
    let mut out = Relation::empty(s.size());
    for (a, b) in u.pairs() {
        let block = space.min_open(a).iter().all(|a2| space.min_open(b).is_subset(u.row(a2)));
        if block {
            out.insert(a, b);
        }
    }
    Ok(out)
}

/// Each base entourage contains an open entourage, i.e. its interior
/// still contains `W`.
pub fn interiors_form_base(s: &FiniteSystem) -> Result<bool> {
    let w = s.space().w();
    for e in s.space().base() {
        if !w.is_subset(&entourage_interior(s, e)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `X / M(f)`: the non-minimal points in order, then the collapsed point
/// `p` last.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub system: FiniteSystem,
    pub pi: Vec<usize>,
    pub p: usize,
}

pub fn quotient_system(s: &FiniteSystem) -> Result<Quotient> {
    let n = s.size();
    let m = s.minimal_points();
    if m.is_empty() {
        return Err(invalid("no minimal points"));
    }
    if !s.image(&m).is_subset(&m) {
        return Err(ShadowError::InternalInvariant("minimal set is not invariant".into()));
    }
    let outside: Vec<usize> = (0..n).filter(|&x| !m.contains(x)).collect();
    let p = outside.len();
    let mut pi = vec![p; n];
    for (i, &x) in outside.iter().enumerate() {
        pi[x] = i;
    }
    let ny = p + 1;
    let mut g = vec![p; ny];
    for x in 0..n {
        g[pi[x]] = pi[s.f(x)];
    }
    // Pullback membership only requires containing the image of W; the
    // square-root condition then forces its equivalence closure.
    let w_y = s.space().w().image(&pi, ny).equivalence_closure();
    let mut candidates = vec![w_y.clone()];
    for e in s.space().base() {
        candidates.push(e.image(&pi, ny).union(&w_y)?);
    }
    let space = UniformBase::validate(candidates)?;
    let mut labels: Vec<String> = outside.iter().map(|&x| format!("{}'", s.label(x))).collect();
    labels.push("p".into());
    let system = FiniteSystem::new(space, g, false)?.with_labels(labels)?;
    if !check_factor(&pi, s, &system)? {
        return Err(ShadowError::InternalInvariant("quotient map is not a factor map".into()));
    }
    Ok(Quotient { system, pi, p })
}

fn single_fixed_minimal(s: &FiniteSystem) -> Option<usize> {
    let m = s.minimal_points();
    match m.to_vec().as_slice() {
        [c] if s.f(*c) == *c => Some(*c),
        _ => None,
    }
}

/// Hausdorff and `M(f) = {c}` with `c` fixed: every pair is proximal, and
/// for every base `E` some `k_E` bounds the wait before a pair enters `E`.
pub fn thm_l11_check(s: &FiniteSystem) -> TheoremCheck {
    if !s.space().is_hausdorff() {
        return TheoremCheck::not_applicable("space is not Hausdorff");
    }
    let Some(c) = single_fixed_minimal(s) else {
        return TheoremCheck::not_applicable("minimal set is not a single fixed point");
    };
    let n = s.size();
    let mut notes = vec![format!("unique minimal fixed point {}", s.label(c))];
    let mut bad = Vec::new();
    let r = spr(s);
    if r.pair_count() != n * n {
        bad.push(format!("only {} of {} pairs are proximal", r.pair_count(), n * n));
    }
    for (i, e) in s.space().base().iter().enumerate() {
        let interior = entourage_interior(s, e).expect("base entourages are reflexive");
        let mut k_e = 0;
        for x in 0..n {
            for y in 0..n {
                let a = agreement_set(s, x, y, &interior);
                match a.first_at_least(1) {
                    Some(k) => k_e = k_e.max(k),
                    None => bad.push(format!("pair ({x},{y}) never enters the interior of entourage {i}")),
                }
            }
        }
        // Gaps of every agreement set are bounded by k_E.
        for x in 0..n {
            for y in 0..n {
                let a = agreement_set(s, x, y, e);
                let horizon = a.tail_len() + 2 * a.period();
                for m in a.members_below(horizon) {
                    if a.first_at_least(m + 1).is_none_or(|next| next - m > k_e) {
                        bad.push(format!("pair ({x},{y}) has a gap longer than {k_e} after {m}"));
                    }
                }
            }
        }
        notes.push(format!("k_E = {k_e} for base entourage {i}"));
    }
    if bad.is_empty() {
        TheoremCheck::new(Outcome::Confirmed, notes)
    } else {
        TheoremCheck::new(Outcome::Contradiction, bad)
    }
}

/// Hausdorff and `M(f) ≠ X`: rebuild the witness of the argument and check
/// it exactly.
///
/// `U` is taken to be the least open neighbourhood of `p` in `X/M`, so
/// `π⁻¹(U) = M`; the witness `x` is the least point outside `M` and
/// `D = W`. The constant sequence at `x` is a pseudo-orbit on `∅`; no
/// trace set of it may be piecewise syndetic.
pub fn thm_t3_check(s: &FiniteSystem) -> Result<TheoremCheck> {
    if !s.space().is_hausdorff() {
        return Ok(TheoremCheck::not_applicable("space is not Hausdorff"));
    }
    let n = s.size();
    let m = s.minimal_points();
    if m.count() == n {
        return Ok(TheoremCheck::not_applicable("minimal points are dense"));
    }
    let q = quotient_system(s)?;
    let u = q.system.space().min_open(q.p);
    let pulled = PointSet::from_iter_in(n, (0..n).filter(|&x| u.contains(q.pi[x])));
    let x = pulled.complement().first().expect("M is not everything");
    let d = s.space().w();
    let mut bad = Vec::new();
    if d.row(x).intersects(&pulled) {
        bad.push(format!("D[{x}] meets the pulled-back neighbourhood"));
    }
    let seq = Lasso::constant(x);
    let mut traces = Vec::new();
    for y in 0..n {
        let t = trace_set(s, y, &seq, d)?.trace;
        if family_membership(&t, Family::PiecewiseSyndetic.into())? {
            bad.push(format!("point {y} traces the constant pseudo-orbit on {t}"));
        }
        traces.push(format!("{y}:{t}"));
    }
    // The collapsed system returns to U on a thickly syndetic set.
    for y in 0..q.system.size() {
        let hits = q.system.hit_set(y, &u)?;
        if !Family::ThicklySyndetic.contains(&hits) {
            bad.push(format!("quotient point {y} visits U only on {hits}"));
        }
    }
    let caps = Caps::default_for(n);
    let v = fg_shadowing_verify(s, Family::AllSets.into(), Family::PiecewiseSyndetic.into(), caps)?;
    if !v.is_fail() {
        bad.push("bounded (P, ps) search found no counterexample".into());
    }
    if !bad.is_empty() {
        return Ok(TheoremCheck::new(Outcome::Contradiction, bad));
    }
    Ok(TheoremCheck::new(
        Outcome::Confirmed,
        vec![
            format!("witness point {}", s.label(x)),
            format!("trace sets of the constant pseudo-orbit: {}", traces.join(", ")),
        ],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynsys::tests::{celled, discrete, sys_a};

    #[test]
    fn agreement_examples() {
        let a = sys_a();
        let d = Relation::diagonal(2);
        assert!(agreement_set(&a, 1, 1, &d).is_naturals());
        assert_eq!(agreement_set(&a, 0, 1, &d), UPSet::from_threshold(1));
        let two_cycles = discrete(vec![1, 0, 3, 2]);
        let r = Relation::from_pairs(4, [(0, 2), (2, 0), (1, 3), (3, 1)]).unwrap().with_diagonal();
        assert!(agreement_set(&two_cycles, 0, 3, &r).is_empty());
    }

    #[test]
    fn spr_examples() {
        assert_eq!(spr(&sys_a()), Relation::full(2));
        assert_eq!(spr(&discrete(vec![0, 1])), Relation::diagonal(2));
        assert_eq!(spr(&celled(&[vec![0, 1, 2]], vec![1, 2, 0])), Relation::full(3));
    }

    #[test]
    fn l8_examples() {
        assert_eq!(prop_l8_check(&sys_a()).outcome, Outcome::Confirmed);
        assert_eq!(prop_l8_check(&discrete(vec![1, 0, 2])).outcome, Outcome::Confirmed);
    }

    #[test]
    fn interior_examples() {
        let s = celled(&[vec![0, 1], vec![2]], vec![0, 1, 2]);
        let w = s.space().w().clone();
        assert_eq!(entourage_interior(&s, &w).unwrap(), w);
        assert_eq!(entourage_interior(&s, &Relation::full(3)).unwrap(), Relation::full(3));
        let u = w.union(&Relation::from_pairs(3, [(0, 2)]).unwrap()).unwrap();
        assert_eq!(entourage_interior(&s, &u).unwrap(), w);
        let d = discrete(vec![0, 1, 2]);
        let u = Relation::within_line(3, 1);
        assert_eq!(entourage_interior(&d, &u).unwrap(), u);
        assert!(interiors_form_base(&s).unwrap());
    }

    #[test]
    fn quotient_examples() {
        let q = quotient_system(&sys_a()).unwrap();
        assert_eq!(q.system.map(), &[1, 1]);
        assert_eq!(q.pi, vec![0, 1]);
        let q = quotient_system(&discrete(vec![1, 2, 1])).unwrap();
        assert_eq!(q.system.map(), &[1, 1]);
        assert_eq!(q.pi, vec![0, 1, 1]);
        let q = quotient_system(&discrete(vec![1, 0, 2])).unwrap();
        assert_eq!(q.system.size(), 1);
        assert!(q.system.space().is_hausdorff());
    }

    /// Candidates `U' ⊇ (π×π)(W)` pruned to the largest subfamily in which
    /// every member contains the square of another member.
    #[test]
    fn quotient_uniformity_matches_pruning() {
        let s = celled(&[vec![0, 1], vec![2], vec![3]], vec![2, 2, 3, 3]);
        let q = quotient_system(&s).unwrap();
        let ny = q.system.size();
        let img = s.space().w().image(&q.pi, ny);
        let all_pairs: Vec<(usize, usize)> = (0..ny).flat_map(|a| (0..ny).map(move |b| (a, b))).collect();
        let mut family: Vec<Relation> = Vec::new();
        for mask in 0u32..1 << all_pairs.len() {
            let r = Relation::from_pairs(ny, all_pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p)).unwrap();
            if img.is_subset(&r) {
                family.push(r);
            }
        }
        loop {
            let keep: Vec<Relation> = family
                .iter()
                .filter(|u| family.iter().any(|v| v.compose(v).unwrap().is_subset(u)))
                .cloned()
                .collect();
            if keep.len() == family.len() {
                break;
            }
            family = keep;
        }
        let least = family.iter().find(|u| family.iter().all(|v| u.is_subset(v))).unwrap();
        assert_eq!(least, q.system.space().w());
    }

    #[test]
    fn l11_examples() {
        let a = thm_l11_check(&sys_a());
        assert_eq!(a.outcome, Outcome::Confirmed);
        assert!(a.notes.iter().any(|n| n == "k_E = 1 for base entourage 0"));
        let star = discrete(vec![4, 4, 4, 4, 4]);
        assert_eq!(thm_l11_check(&star).outcome, Outcome::Confirmed);
        assert_eq!(thm_l11_check(&discrete(vec![0, 1])).outcome, Outcome::NotApplicable);
    }

    #[test]
    fn t3_examples() {
        let a = thm_t3_check(&sys_a()).unwrap();
        assert_eq!(a.outcome, Outcome::Confirmed);
        assert!(a.notes.iter().any(|n| n.contains("0:{0}") || n.contains("0:tail=1;cycle=0")));
        assert_eq!(thm_t3_check(&discrete(vec![1, 2, 0])).unwrap().outcome, Outcome::NotApplicable);
        assert_eq!(thm_t3_check(&discrete(vec![1, 2, 2])).unwrap().outcome, Outcome::Confirmed);
    }
}
