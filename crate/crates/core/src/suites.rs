//! Theorem suites over corpora.
//!
//! Each suite runs a fixed list of checks on every corpus item. Items are
//! independent and may run on the rayon pool; results are folded back in
//! corpus order so reports do not depend on scheduling.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_integer::Integer;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chain::{
    chain_recurrent_set, cr_shadow_chain, cr_shadow_on_thick, cr_shadow_pseudo_orbit, sim_classes, ChainGraph,
};
use crate::corpus::{circle_tower, tower_modulus_report, CircleMap, CorpusItem, Tolerance};
use crate::dynsys::{EPSeq, FiniteSystem};
use crate::error::{invalid, Result, ShadowError};
use crate::lasso::Lasso;
use crate::natsets::{dual_membership, family_membership, Family, FamilyTag, SetOp, UPSet, WindowSet};
use crate::par::{self, ExecMode};
use crate::pointset::PointSet;
use crate::proximal::{interiors_form_base, prop_l8_check, thm_l11_check, thm_t3_check, Outcome, TheoremCheck};
use crate::shadowing::{
    decide_finite_shadowing, defect_set, fg_shadowing_verify, has_topological_shadowing, thick_trace_search, Caps,
    PseudoOrbit, Status,
};
use crate::uniform::{entourage_root, UniformBase};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteId {
    Axioms,
    Families,
    Prop23,
    T1t2,
    Lemmas,
    L8,
    L11,
    T3,
    L8l11t3,
    ModulusTower,
}

impl SuiteId {
    pub const ALL: [SuiteId; 10] = [
        SuiteId::Axioms,
        SuiteId::Families,
        SuiteId::Prop23,
        SuiteId::T1t2,
        SuiteId::Lemmas,
        SuiteId::L8,
        SuiteId::L11,
        SuiteId::T3,
        SuiteId::L8l11t3,
        SuiteId::ModulusTower,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::Axioms => "axioms",
            SuiteId::Families => "families",
            SuiteId::Prop23 => "prop23",
            SuiteId::T1t2 => "t1t2",
            SuiteId::Lemmas => "lemmas",
            SuiteId::L8 => "l8",
            SuiteId::L11 => "l11",
            SuiteId::T3 => "t3",
            SuiteId::L8l11t3 => "l8l11t3",
            SuiteId::ModulusTower => "modulus-tower",
        }
    }

    /// Suites that do not look at the corpus.
    pub fn is_standalone(self) -> bool {
        matches!(self, SuiteId::Families | SuiteId::ModulusTower)
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteId {
    type Err = ShadowError;
    fn from_str(s: &str) -> Result<SuiteId> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.name() == s.trim())
            .ok_or_else(|| invalid(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    #[serde(skip)]
    pub mode: ExecMode,
    /// Override the per-system defaults `tail ≤ 2|X|` and `period ≤ 4|X|²`.
    pub tail_max: Option<usize>,
    pub period_max: Option<usize>,
    /// Random UP sets drawn by the families suite.
    pub family_samples: usize,
    /// Record wall-clock time; off by default so reports are reproducible.
    #[serde(skip)]
    pub timing: bool,
}

impl Default for SuiteConfig {
    fn default() -> SuiteConfig {
        SuiteConfig {
            seed: 1,
            mode: ExecMode::Parallel,
            tail_max: None,
            period_max: None,
            family_samples: 10_000,
            timing: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckOutcome {
    Pass,
    Contradiction,
    NotApplicable,
    HoldsUpToBound,
}

impl From<Outcome> for CheckOutcome {
    fn from(o: Outcome) -> CheckOutcome {
        match o {
            Outcome::Confirmed => CheckOutcome::Pass,
            Outcome::Contradiction => CheckOutcome::Contradiction,
            Outcome::NotApplicable => CheckOutcome::NotApplicable,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub item: String,
    pub check: String,
    pub outcome: CheckOutcome,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub pass: usize,
    pub contradiction: usize,
    pub not_applicable: usize,
    pub holds_up_to_bound: usize,
}

impl Tally {
    fn add(&mut self, o: CheckOutcome) {
        match o {
            CheckOutcome::Pass => self.pass += 1,
            CheckOutcome::Contradiction => self.contradiction += 1,
            CheckOutcome::NotApplicable => self.not_applicable += 1,
            CheckOutcome::HoldsUpToBound => self.holds_up_to_bound += 1,
        }
    }
}

/// Tallies per check plus every contradiction in full.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: SuiteId,
    pub seed: u64,
    pub items: usize,
    pub tallies: BTreeMap<String, Tally>,
    pub contradictions: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.contradictions.is_empty()
    }

    pub fn tally(&self, check: &str) -> Tally {
        self.tallies.get(check).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> Tally {
        let mut t = Tally::default();
        for v in self.tallies.values() {
            t.pass += v.pass;
            t.contradiction += v.contradiction;
            t.not_applicable += v.not_applicable;
            t.holds_up_to_bound += v.holds_up_to_bound;
        }
        t
    }
}

type Found = Vec<(String, CheckOutcome, String)>;

fn record(out: &mut Found, check: &str, outcome: CheckOutcome, detail: impl Into<String>) {
    out.push((check.to_string(), outcome, detail.into()));
}

fn pass_or(out: &mut Found, check: &str, ok: bool, detail: impl Into<String>) {
    let outcome = if ok { CheckOutcome::Pass } else { CheckOutcome::Contradiction };
    record(out, check, outcome, if ok { String::new() } else { detail.into() });
}

fn theorem(out: &mut Found, check: &str, t: TheoremCheck) {
    let detail = if t.outcome == Outcome::Confirmed { String::new() } else { t.notes.join("; ") };
    record(out, check, t.outcome.into(), detail);
}

fn fold(suite: SuiteId, seed: u64, names: &[String], per_item: Vec<Result<Found>>) -> Result<SuiteReport> {
    let mut tallies: BTreeMap<String, Tally> = BTreeMap::new();
    let mut contradictions = Vec::new();
    for (name, found) in names.iter().zip(per_item) {
        for (check, outcome, detail) in found? {
            tallies.entry(check.clone()).or_default().add(outcome);
            if outcome == CheckOutcome::Contradiction {
                contradictions.push(CheckRecord {
                    item: name.clone(),
                    check,
                    outcome,
                    detail,
                });
            }
        }
    }
    Ok(SuiteReport {
        suite,
        seed,
        items: names.len(),
        tallies,
        contradictions,
        elapsed_ms: None,
    })
}

pub fn run_suite(id: SuiteId, corpus: &[CorpusItem], config: &SuiteConfig) -> Result<SuiteReport> {
    if corpus.is_empty() && !id.is_standalone() {
        return Err(invalid("corpus is empty"));
    }
    let start = Instant::now();
    let check: fn(&FiniteSystem, &SuiteConfig) -> Result<Found> = match id {
        SuiteId::Families => {
            let mut r = families_suite(config)?;
            if config.timing {
                r.elapsed_ms = Some(start.elapsed().as_millis());
            }
            return Ok(r);
        }
        SuiteId::ModulusTower => {
            let mut r = modulus_tower_suite(config)?;
            if config.timing {
                r.elapsed_ms = Some(start.elapsed().as_millis());
            }
            return Ok(r);
        }
        SuiteId::Axioms => axioms_checks,
        SuiteId::Prop23 => prop23_checks,
        SuiteId::T1t2 => t1t2_checks,
        SuiteId::Lemmas => lemma_checks,
        SuiteId::L8 => |s, _| Ok(l8l11t3_checks(s, true, false, false)),
        SuiteId::L11 => |s, _| Ok(l8l11t3_checks(s, false, true, false)),
        SuiteId::T3 => |s, _| Ok(l8l11t3_checks(s, false, false, true)),
        SuiteId::L8l11t3 => |s, _| Ok(l8l11t3_checks(s, true, true, true)),
    };
    let per_item = par::map(config.mode, corpus, |item| check(&item.system, config));
    let names: Vec<String> = corpus.iter().map(|c| c.name.clone()).collect();
    let mut report = fold(id, config.seed, &names, per_item)?;
    if config.timing {
        report.elapsed_ms = Some(start.elapsed().as_millis());
    }
    Ok(report)
}

fn caps_for(s: &FiniteSystem, config: &SuiteConfig) -> Caps {
    let d = Caps::default_for(s.size());
    Caps {
        tail_max: config.tail_max.unwrap_or(d.tail_max),
        period_max: config.period_max.unwrap_or(d.period_max),
    }
}

fn axioms_checks(s: &FiniteSystem, _: &SuiteConfig) -> Result<Found> {
    let mut out = Vec::new();
    let space = s.space();
    let w = space.w();
    pass_or(
        &mut out,
        "w_is_equivalence",
        w.is_reflexive() && w.is_symmetric() && w.is_transitive(),
        "minimal entourage is not an equivalence",
    );
    let revalidated = UniformBase::validate(space.base().to_vec())?;
    pass_or(&mut out, "base_revalidates", revalidated.w() == w, "re-validated base has a different W");
    pass_or(&mut out, "interiors_form_base", interiors_form_base(s)?, "an interior misses W");
    let (bounded, witness) = space.is_totally_bounded();
    pass_or(&mut out, "totally_bounded", bounded && covers(space, &witness), "finite witness does not cover X");
    for (i, u) in space.base().iter().enumerate() {
        for k in [2, 3] {
            let v = entourage_root(u, k)?;
            let ok = v.is_symmetric() && v.is_reflexive() && v.power(k).is_subset(u) && w.power(k).is_subset(u);
            pass_or(&mut out, "entourage_root", ok, format!("root of base entourage {i} for k = {k}"));
        }
    }
    Ok(out)
}

/// `W[F] = X` for the witness `F`.
fn covers(space: &UniformBase, witness: &[usize]) -> bool {
    (0..space.size()).all(|x| witness.iter().any(|&c| space.same_cell(c, x)))
}

fn prop23_checks(s: &FiniteSystem, _: &SuiteConfig) -> Result<Found> {
    let mut out = Vec::new();
    let omega = s.nonwandering_points();
    let cr = chain_recurrent_set(s);
    pass_or(
        &mut out,
        "omega_equals_cr",
        omega == cr,
        format!("Ω = {:?}, CR = {:?}", omega.to_vec(), cr.to_vec()),
    );
    let v = has_topological_shadowing(s);
    pass_or(&mut out, "topological_shadowing", !v.is_fail(), v.notes.join("; "));
    Ok(out)
}

// `P` on top of the F side: ultimately periodic thick or density-one
// constraints are cofinite, so without it no verdict on the lattice fails.
const F_LATTICE: [Family; 4] = [Family::Whole, Family::DensityOne, Family::Thick, Family::AllSets];
const G_LATTICE: [Family; 4] = [Family::ThicklySyndetic, Family::Syndetic, Family::PiecewiseSyndetic, Family::AllSets];

fn t1t2_checks(s: &FiniteSystem, config: &SuiteConfig) -> Result<Found> {
    let mut out = Vec::new();
    let caps = caps_for(s, config);
    // Monotonicity across the lattice: shrinking F or growing G never
    // turns a holding verdict into a failure.
    let mut holds = [[false; G_LATTICE.len()]; F_LATTICE.len()];
    for (i, &f) in F_LATTICE.iter().enumerate() {
        for (j, &g) in G_LATTICE.iter().enumerate() {
            holds[i][j] = !fg_shadowing_verify(s, f.into(), g.into(), caps)?.is_fail();
        }
    }
    let mut violations = Vec::new();
    for i0 in 0..F_LATTICE.len() {
        for j0 in 0..G_LATTICE.len() {
            for i1 in 0..=i0 {
                for j1 in j0..G_LATTICE.len() {
                    if holds[i0][j0] && !holds[i1][j1] {
                        violations.push(format!(
                            "({},{}) holds but ({},{}) fails",
                            F_LATTICE[i0], G_LATTICE[j0], F_LATTICE[i1], G_LATTICE[j1]
                        ));
                    }
                }
            }
        }
    }
    pass_or(&mut out, "l7_monotone", violations.is_empty(), violations.join("; "));

    let shadowing = !has_topological_shadowing(s).is_fail();
    let finite_ok = s
        .space()
        .base()
        .iter()
        .map(|e| decide_finite_shadowing(s, s.space().w(), e).map(|v| !v.is_fail()))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|b| b);
    pass_or(&mut out, "l10_finite_implies_full", !finite_ok || shadowing, "finite shadowing without shadowing");
    // T1 needs only shadowing.
    let t_t = !fg_shadowing_verify(s, Family::Thick.into(), Family::Thick.into(), caps)?.is_fail();
    pass_or(&mut out, "t1", !shadowing || t_t, "shadowing but (t,t) counterexample");

    if chain_recurrent_set(s).count() != s.size() {
        record(&mut out, "t2", CheckOutcome::NotApplicable, "CR(f) ≠ X");
        return Ok(out);
    }
    let mut failing = Vec::new();
    for f in [Family::Whole, Family::DensityOne, Family::Thick] {
        let v = fg_shadowing_verify(s, f.into(), Family::Thick.into(), caps)?;
        if v.is_fail() {
            failing.push(format!("({f},t)"));
        } else if v.status != Status::HoldsUpToBound {
            return Err(ShadowError::InternalInvariant("thick search reported an exact verdict".into()));
        }
    }
    let agree = failing.is_empty() == shadowing;
    let outcome = if !agree {
        CheckOutcome::Contradiction
    } else {
        CheckOutcome::HoldsUpToBound
    };
    record(
        &mut out,
        "t2",
        outcome,
        if agree { String::new() } else { format!("shadowing = {shadowing}, failing: {}", failing.join(" ")) },
    );
    Ok(out)
}

fn words(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..n).map(move |x| {
                    let mut w = w.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Sequences with tail ≤ 1 and period ≤ 2, in canonical form, deduplicated.
fn small_sequences(n: usize) -> Vec<EPSeq> {
    let mut out: Vec<EPSeq> = Vec::new();
    for t in 0..=1 {
        for p in 1..=2 {
            for w in words(n, t + p) {
                let l = Lasso::new(w[..t].to_vec(), w[t..].to_vec()).expect("non-empty cycle");
                if !out.contains(&l) {
                    out.push(l);
                }
            }
        }
    }
    out
}

fn lemma_checks(s: &FiniteSystem, _: &SuiteConfig) -> Result<Found> {
    let mut out = Vec::new();
    let n = s.size();
    let w = s.space().w();
    let cr = chain_recurrent_set(s);
    let seqs = small_sequences(n);
    for (ei, e) in s.space().base().iter().enumerate() {
        // Closed W-chains of length 1..=3.
        for len in 1..=3 {
            for mut word in words(n, len) {
                word.push(word[0]);
                if !word.windows(2).all(|p| w.contains(s.f(p[0]), p[1])) {
                    continue;
                }
                let found = cr_shadow_chain(s, &word, e)?.is_found();
                pass_or(&mut out, "l1_witness", found, format!("chain {word:?}, entourage {ei}"));
            }
        }
        for seq in &seqs {
            let def = defect_set(s, seq, w)?;
            if def.is_naturals() {
                let found = cr_shadow_pseudo_orbit(s, seq, e)?.is_found();
                pass_or(&mut out, "l3_witness", found, format!("pseudo-orbit {seq:?}, entourage {ei}"));
            }
            if def.is_cofinite() {
                for thick in [def.clone(), def.intersection(&UPSet::from_threshold(1))] {
                    let found = cr_shadow_on_thick(s, seq, &thick, e)?.is_found();
                    pass_or(&mut out, "l2_witness", found, format!("pseudo-orbit {seq:?} on {thick}, entourage {ei}"));
                    let in_cr = (0..seq.tail_len() + seq.period()).all(|i| cr.contains(*seq.get(i)));
                    if in_cr {
                        let po = PseudoOrbit::new(seq.clone(), thick.clone());
                        let found = thick_trace_search(s, &po, e)?.is_found();
                        pass_or(&mut out, "l6_witness", found, format!("pseudo-orbit {seq:?} on {thick}, entourage {ei}"));
                    }
                }
            }
        }
        let sim = sim_classes(s, e)?;
        let detail = format!(
            "entourage {ei}: one-way pairs {:?}, classes not unions of cells {:?}",
            sim.asymmetric,
            sim.not_clopen.iter().map(|&i| &sim.classes[i]).collect::<Vec<_>>()
        );
        pass_or(&mut out, "sim_d_equivalence", sim.is_consistent(), detail);
        // The period of a class from every anchor, against the gcd of the
        // closed-walk lengths up to 3|X|.
        let g = ChainGraph::new(s, e)?.restricted(&cr);
        for (class, &k) in sim.classes.iter().zip(&sim.periods) {
            let comp = PointSet::from_iter_in(n, class.iter().copied());
            let mut bad = Vec::new();
            for &x in class {
                let lengths = g.length_set(x, x).members_below(3 * n + 1);
                let brute = lengths.iter().fold(0, |acc: usize, &l| acc.gcd(&l));
                if g.period_from(&comp, x) != k || brute != k {
                    bad.push(format!("anchor {x}: period {} vs gcd {brute}", g.period_from(&comp, x)));
                }
            }
            pass_or(&mut out, "class_period", bad.is_empty(), format!("entourage {ei}, class {class:?}: {}", bad.join(", ")));
        }
    }
    Ok(out)
}

fn l8l11t3_checks(s: &FiniteSystem, l8: bool, l11: bool, t3: bool) -> Found {
    let mut out = Vec::new();
    if l8 {
        theorem(&mut out, "l8", prop_l8_check(s));
    }
    if l11 {
        theorem(&mut out, "l11", thm_l11_check(s));
    }
    if t3 {
        match thm_t3_check(s) {
            Ok(t) => theorem(&mut out, "t3", t),
            Err(e) => record(&mut out, "t3", CheckOutcome::Contradiction, e.to_string()),
        }
    }
    out
}

/// A random UP set with tail ≤ 6 and period 1..=6.
pub fn random_upset(rng: &mut ChaCha8Rng) -> UPSet {
    let t = rng.gen_range(0..=6);
    let p = rng.gen_range(1..=6);
    let tail = (0..t).map(|_| rng.gen_bool(0.5)).collect();
    // Bias towards all-ones and all-zeros cycles so every family is hit.
    let cycle = match rng.gen_range(0..4) {
        0 => vec![true; p],
        1 => vec![false; p],
        _ => (0..p).map(|_| rng.gen_bool(0.5)).collect(),
    };
    UPSet::normalize(tail, cycle).expect("period at least 1")
}

/// Family predicates read off a finite window `[0, t + 10p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowVerdicts {
    pub members: BTreeMap<&'static str, bool>,
    pub density: Ratio<u64>,
}

pub fn window_oracle(a: &UPSet) -> WindowVerdicts {
    let (t, p) = (a.tail_len(), a.period());
    let h = t + 10 * p;
    let win = WindowSet::observe(a, h).expect("horizon at least 1");
    let tail_free = h - t;
    let long_run = win.max_run(t, h) >= 9 * p;
    let syndetic = win.gaps_bounded(t, h, p);
    // Starts of length-p blocks inside the window, as their own window.
    let starts: Vec<bool> = (t..h - p).map(|j| win.count(j, j + p) == p).collect();
    let starts = WindowSet::new(starts).expect("non-empty");
    let ts = starts.gaps_bounded(0, starts.horizon(), p);
    let ps = (t..=h - 5 * p).any(|j| win.gaps_bounded(j, j + 5 * p, p));
    let density = Ratio::new(win.count(t, h) as u64, tail_free as u64);
    let mut members = BTreeMap::new();
    members.insert("N", win.count(0, h) == h);
    members.insert("cf", win.count(t, h) == tail_free);
    members.insert("t", long_run);
    members.insert("s", syndetic);
    members.insert("ps", ps);
    members.insert("ts", ts);
    members.insert("D", density == Ratio::from_integer(1));
    members.insert("P", true);
    WindowVerdicts { members, density }
}

/// Compares every family predicate, both densities, the dual
/// memberships and a few set-algebra laws with the window oracle.
pub fn check_upset(a: &UPSet, b: &UPSet) -> Vec<String> {
    let mut bad = Vec::new();
    let oracle = window_oracle(a);
    for f in Family::ALL {
        let got = family_membership(a, FamilyTag::base(f)).expect("base tags are supported");
        if got != oracle.members[f.short_name()] {
            bad.push(format!("{a}: {f} says {got}"));
        }
    }
    let (lo, hi) = a.densities();
    if lo != oracle.density || hi != oracle.density {
        bad.push(format!("{a}: densities {lo}/{hi} vs window {}", oracle.density));
    }
    let duals = [
        (Family::Thick, "s"),
        (Family::Syndetic, "t"),
        (Family::PiecewiseSyndetic, "ts"),
        (Family::ThicklySyndetic, "ps"),
    ];
    for (f, dual) in duals {
        if dual_membership(a, f).expect("supported") != oracle.members[dual] {
            bad.push(format!("{a}: dual of {f}"));
        }
    }
    if dual_membership(a, Family::Cofinite).expect("supported") != oracle.members["s"] {
        bad.push(format!("{a}: dual of cf"));
    }
    let h = a.tail_len().max(b.tail_len()) + 10 * a.period().lcm(&b.period());
    let wa = WindowSet::observe(a, h).expect("h >= 1");
    let wb = WindowSet::observe(b, h).expect("h >= 1");
    let laws: [(SetOp, fn(bool, bool) -> bool); 3] = [
        (SetOp::Union, |x, y| x || y),
        (SetOp::Intersection, |x, y| x && y),
        (SetOp::Complement, |x, _| !x),
    ];
    for (op, bit) in laws {
        let c = a.apply(b, op);
        if (0..h).any(|i| c.contains(i) != bit(wa.bits()[i], wb.bits()[i])) {
            bad.push(format!("{a} {op:?} {b}"));
        }
    }
    let shifted = a.shift(3);
    if (0..h).any(|i| shifted.contains(i + 3) != wa.bits()[i]) || (0..3).any(|i| shifted.contains(i)) {
        bad.push(format!("{a} shifted by 3"));
    }
    bad
}

fn families_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let pairs: Vec<(UPSet, UPSet)> = (0..config.family_samples)
        .map(|_| (random_upset(&mut rng), random_upset(&mut rng)))
        .collect();
    let per_item: Vec<Result<Found>> = par::map(config.mode, &pairs, |(a, b)| {
        let bad = check_upset(a, b);
        let mut out = Vec::new();
        pass_or(&mut out, "window_oracle", bad.is_empty(), bad.join("; "));
        Ok(out)
    });
    let names: Vec<String> = pairs.iter().map(|(a, b)| format!("{a} | {b}")).collect();
    fold(SuiteId::Families, config.seed, &names, per_item)
}

fn modulus_tower_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    let mut found: Vec<Result<Found>> = Vec::new();
    let mut names = Vec::new();
    for (map, cells) in [(CircleMap::Identity, 12), (CircleMap::Rotation { q: 1 }, 12)] {
        let tower = circle_tower(map, cells, 2, 2)?;
        let rows = tower_modulus_report(&tower, &[Tolerance::Within(1), Tolerance::Full])?;
        let mut out = Vec::new();
        for r in &rows {
            let ok = match r.tolerance.as_str() {
                "full" => r.modulus == "adj^2",
                _ => r.at_floor,
            };
            pass_or(
                &mut out,
                "modulus",
                ok,
                format!("level {} ({} cells), tolerance {}: modulus {}", r.level, r.cells, r.tolerance, r.modulus),
            );
        }
        found.push(Ok(out));
        names.push(format!("{map:?}:{cells}"));
    }
    fold(SuiteId::ModulusTower, config.seed, &names, found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{exhaustive_upto, generate_corpus, CorpusKind};

    fn quick() -> SuiteConfig {
        SuiteConfig {
            family_samples: 300,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for id in SuiteId::ALL {
            assert_eq!(id.name().parse::<SuiteId>().unwrap(), id);
        }
        assert!("nope".parse::<SuiteId>().is_err());
    }

    #[test]
    fn prop23_small() {
        let corpus = exhaustive_upto(3).unwrap();
        let r = run_suite(SuiteId::Prop23, &corpus, &quick()).unwrap();
        assert!(r.passed());
        assert_eq!(r.tally("omega_equals_cr").pass, corpus.len());
    }

    #[test]
    fn sys_a_theorems() {
        let sys_a = CorpusItem {
            name: "sys-a".into(),
            system: crate::dynsys::tests::sys_a(),
        };
        let r = run_suite(SuiteId::L8l11t3, &[sys_a], &quick()).unwrap();
        assert!(r.passed());
        assert_eq!(r.tally("t3").pass, 1);
    }

    #[test]
    fn t2_gated_on_chain_recurrence() {
        let item = CorpusItem {
            name: "sys-a".into(),
            system: crate::dynsys::tests::sys_a(),
        };
        let r = run_suite(SuiteId::T1t2, &[item], &quick()).unwrap();
        assert_eq!(r.tally("t2").not_applicable, 1);
    }

    #[test]
    fn families_and_towers() {
        let r = run_suite(SuiteId::Families, &[], &quick()).unwrap();
        assert!(r.passed(), "{:?}", r.contradictions.first());
        let r = run_suite(SuiteId::ModulusTower, &[], &quick()).unwrap();
        assert!(r.passed(), "{:?}", r.contradictions);
    }

    #[test]
    fn reports_are_mode_independent() {
        let corpus = generate_corpus(&CorpusKind::Random { n: 5, count: 30, seed: 3 }).unwrap();
        let par = run_suite(SuiteId::Lemmas, &corpus, &quick()).unwrap();
        let seq = run_suite(
            SuiteId::Lemmas,
            &corpus,
            &SuiteConfig {
                mode: ExecMode::Sequential,
                ..quick()
            },
        )
        .unwrap();
        assert_eq!(serde_json::to_string(&par).unwrap(), serde_json::to_string(&seq).unwrap());
        assert!(run_suite(SuiteId::Lemmas, &[], &quick()).is_err());
    }
}
