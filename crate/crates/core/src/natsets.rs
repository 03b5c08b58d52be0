//! Ultimately periodic subsets of ℕ (0 included) and the integer-set
//! families used by the shadowing notions.
//!
//! Every index set a finite system can produce (hit sets, trace sets,
//! agreement sets, pseudo-orbit constraint sets) is ultimately periodic,
//! so family membership is decided exactly from the cycle word.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, ShadowError};
use crate::lasso::Lasso;

/// An ultimately periodic subset of ℕ in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct UPSet(Lasso<bool>);

impl UPSet {
    /// Normalize a `(tail, cycle)` pair of membership words.
    pub fn normalize(tail: Vec<bool>, cycle: Vec<bool>) -> Result<UPSet> {
        Lasso::new(tail, cycle).map(UPSet)
    }

    pub fn from_bits(tail: &str, cycle: &str) -> Result<UPSet> {
        UPSet::normalize(parse_bits(tail)?, parse_bits(cycle)?)
    }

    pub(crate) fn from_lasso(l: Lasso<bool>) -> UPSet {
        UPSet(l)
    }

    pub fn naturals() -> UPSet {
        UPSet(Lasso::constant(true))
    }

    pub fn empty() -> UPSet {
        UPSet(Lasso::constant(false))
    }

    /// `{i : i >= k}`.
    pub fn from_threshold(k: usize) -> UPSet {
        UPSet(Lasso::from_fn(k, 1, |i| i >= k))
    }

    pub fn finite(members: &[usize]) -> UPSet {
        let t = members.iter().max().map_or(0, |m| m + 1);
        UPSet(Lasso::from_fn(t, 1, |i| members.contains(&i)))
    }

    /// `{i : i mod p ∈ residues}`.
    pub fn residues(p: usize, residues: &[usize]) -> Result<UPSet> {
        if p == 0 {
            return Err(invalid("modulus must be positive"));
        }
        Ok(UPSet(Lasso::from_fn(0, p, |i| residues.contains(&(i % p)))))
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        *self.0.get(i)
    }

    pub fn tail(&self) -> &[bool] {
        self.0.tail()
    }

    pub fn cycle(&self) -> &[bool] {
        self.0.cycle()
    }

    pub fn tail_len(&self) -> usize {
        self.0.tail_len()
    }

    pub fn period(&self) -> usize {
        self.0.period()
    }

    pub fn is_empty(&self) -> bool {
        !self.tail().iter().any(|&b| b) && !self.cycle().iter().any(|&b| b)
    }

    pub fn is_finite(&self) -> bool {
        !self.cycle().iter().any(|&b| b)
    }

    pub fn is_cofinite(&self) -> bool {
        self.cycle().iter().all(|&b| b)
    }

    pub fn is_naturals(&self) -> bool {
        *self == UPSet::naturals()
    }

    /// Smallest member `>= k`, if any.
    pub fn first_at_least(&self, k: usize) -> Option<usize> {
        let horizon = k.max(self.tail_len()) + self.period();
        (k..horizon).find(|&i| self.contains(i))
    }

    pub fn min(&self) -> Option<usize> {
        self.first_at_least(0)
    }

    /// Members below `n`.
    pub fn members_below(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|&i| self.contains(i)).collect()
    }

    /// Elements of a finite set; `None` for infinite sets.
    pub fn finite_members(&self) -> Option<Vec<usize>> {
        self.is_finite().then(|| self.members_below(self.tail_len()))
    }

    pub fn densities(&self) -> (Ratio<u64>, Ratio<u64>) {
        // The window {0..n-1} eventually consists of whole periods plus a
        // bounded remainder, so liminf = limsup = ones/p.
        let ones = self.cycle().iter().filter(|&&b| b).count() as u64;
        let d = Ratio::new(ones, self.period() as u64);
        (d, d)
    }

    pub fn union(&self, other: &UPSet) -> UPSet {
        UPSet(self.0.zip_with(&other.0, |a, b| *a || *b))
    }

    pub fn intersection(&self, other: &UPSet) -> UPSet {
        UPSet(self.0.zip_with(&other.0, |a, b| *a && *b))
    }

    pub fn complement(&self) -> UPSet {
        UPSet(self.0.map(|a| !a))
    }

    pub fn is_subset(&self, other: &UPSet) -> bool {
        self.intersection(&other.complement()).is_empty()
    }

    /// `{i + k : i ∈ self}`.
    pub fn shift(&self, k: usize) -> UPSet {
        let t = self.tail_len() + k;
        UPSet(Lasso::from_fn(t, self.period(), |i| {
            i >= k && self.contains(i - k)
        }))
    }

    /// `{i : i + k ∈ self}`.
    pub fn advance(&self, k: usize) -> UPSet {
        UPSet(self.0.advance(k))
    }

    pub fn apply(&self, other: &UPSet, op: SetOp) -> UPSet {
        match op {
            SetOp::Union => self.union(other),
            SetOp::Intersection => self.intersection(other),
            SetOp::Complement => self.complement(),
            SetOp::Shift(k) => self.shift(k),
        }
    }

    fn bits(word: &[bool]) -> String {
        word.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersection,
    /// Unary; the second operand is ignored.
    Complement,
    /// Unary right shift by `k`; the second operand is ignored.
    Shift(usize),
}

fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(invalid(format!("bad bit {c:?} in {s:?}"))),
        })
        .collect()
}

impl fmt::Display for UPSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "tail={};cycle={}",
            UPSet::bits(self.tail()),
            UPSet::bits(self.cycle())
        )
    }
}

impl fmt::Debug for UPSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPSet({self})")
    }
}

/// Accepts `tail=<bits>;cycle=<bits>` or `mod p in {r1,r2,...}`.
impl FromStr for UPSet {
    type Err = ShadowError;

    fn from_str(s: &str) -> Result<UPSet> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("mod") {
            let (p, rs) = rest
                .split_once("in")
                .ok_or_else(|| invalid(format!("expected `mod p in {{..}}`, got {s:?}")))?;
            let p: usize = p
                .trim()
                .parse()
                .map_err(|_| invalid(format!("bad modulus in {s:?}")))?;
            let rs = rs.trim();
            let inner = rs
                .strip_prefix('{')
                .and_then(|r| r.strip_suffix('}'))
                .ok_or_else(|| invalid(format!("expected braces in {s:?}")))?;
            let residues = inner
                .split(',')
                .map(str::trim)
                .filter(|r| !r.is_empty())
                .map(|r| {
                    r.parse::<usize>()
                        .map_err(|_| invalid(format!("bad residue {r:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if residues.iter().any(|&r| r >= p) {
                return Err(invalid(format!("residue out of range in {s:?}")));
            }
            return UPSet::residues(p, &residues);
        }
        let mut tail = None;
        let mut cycle = None;
        for part in s.split(';') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| invalid(format!("expected key=value in {s:?}")))?;
            match k.trim() {
                "tail" => tail = Some(v),
                "cycle" => cycle = Some(v),
                other => return Err(invalid(format!("unknown key {other:?}"))),
            }
        }
        let cycle = cycle.ok_or_else(|| invalid(format!("missing cycle in {s:?}")))?;
        UPSet::from_bits(tail.unwrap_or(""), cycle)
    }
}

impl From<UPSet> for String {
    fn from(u: UPSet) -> String {
        u.to_string()
    }
}

impl TryFrom<String> for UPSet {
    type Error = ShadowError;
    fn try_from(s: String) -> Result<UPSet> {
        s.parse()
    }
}

/// Finite observation window `[0, horizon)`; oracle use only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowSet {
    bits: Vec<bool>,
}

impl WindowSet {
    pub fn new(bits: Vec<bool>) -> Result<WindowSet> {
        if bits.is_empty() {
            return Err(invalid("window horizon must be at least 1"));
        }
        Ok(WindowSet { bits })
    }

    pub fn observe(set: &UPSet, horizon: usize) -> Result<WindowSet> {
        WindowSet::new((0..horizon).map(|i| set.contains(i)).collect())
    }

    pub fn horizon(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count(&self, from: usize, to: usize) -> usize {
        self.bits[from..to].iter().filter(|&&b| b).count()
    }

    /// Longest run of members inside `[from, to)`.
    pub fn max_run(&self, from: usize, to: usize) -> usize {
        let mut best = 0;
        let mut cur = 0;
        for &b in &self.bits[from..to] {
            cur = if b { cur + 1 } else { 0 };
            best = best.max(cur);
        }
        best
    }

    /// Every length-`gap` sub-window of `[from, to)` contains a member.
    pub fn gaps_bounded(&self, from: usize, to: usize, gap: usize) -> bool {
        to >= from + gap && (from..=to - gap).all(|j| self.count(j, j + gap) > 0)
    }
}

/// Families of subsets of ℕ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// The single set ℕ (classical shadowing).
    Whole,
    Cofinite,
    Thick,
    Syndetic,
    PiecewiseSyndetic,
    ThicklySyndetic,
    DensityOne,
    /// 𝒫(ℕ).
    AllSets,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Whole,
        Family::Cofinite,
        Family::Thick,
        Family::Syndetic,
        Family::PiecewiseSyndetic,
        Family::ThicklySyndetic,
        Family::DensityOne,
        Family::AllSets,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            Family::Whole => "N",
            Family::Cofinite => "cf",
            Family::Thick => "t",
            Family::Syndetic => "s",
            Family::PiecewiseSyndetic => "ps",
            Family::ThicklySyndetic => "ts",
            Family::DensityOne => "D",
            Family::AllSets => "P",
        }
    }

    /// Membership of an ultimately periodic set.
    ///
    /// Let `A` have tail length `t` and cycle `c` of period `p`.
    /// * thick: a block of length `p` past `t` covers a full period, so
    ///   arbitrarily long blocks exist iff `c` is all ones; thick = cofinite.
    /// * syndetic: gaps are bounded iff `c` has a one (gap ≤ p), otherwise
    ///   `A` is finite.
    /// * piecewise syndetic: a syndetic `A` is `A ∩ ℕ`; conversely `T ∩ S`
    ///   with `T` thick and `S` syndetic is infinite, and an infinite UP set
    ///   has a one in `c`. So ps = syndetic.
    /// * thickly syndetic: if `c` has a zero, no length-`p` block starts past
    ///   `t`, so block starts are finite; if `c` is all ones every large
    ///   position starts a block. So ts = cofinite.
    /// * density one: density is ones(c)/p, equal to 1 iff `c` is all ones.
    pub fn contains(self, a: &UPSet) -> bool {
        match self {
            Family::Whole => a.is_naturals(),
            Family::Cofinite | Family::Thick | Family::ThicklySyndetic | Family::DensityOne => {
                a.is_cofinite()
            }
            Family::Syndetic | Family::PiecewiseSyndetic => !a.is_finite(),
            Family::AllSets => true,
        }
    }

    /// How the family acts on UP sets. Useful for symbolic searches.
    pub fn up_kind(self) -> UpKind {
        match self {
            Family::Whole => UpKind::Whole,
            Family::Cofinite | Family::Thick | Family::ThicklySyndetic | Family::DensityOne => {
                UpKind::Cofinite
            }
            Family::Syndetic | Family::PiecewiseSyndetic => UpKind::Infinite,
            Family::AllSets => UpKind::Any,
        }
    }
}

/// The four membership behaviours the named families reduce to on UP sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UpKind {
    Whole,
    Cofinite,
    Infinite,
    Any,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Family {
    type Err = ShadowError;
    fn from_str(s: &str) -> Result<Family> {
        Ok(match s.trim() {
            "N" | "nat" | "whole" => Family::Whole,
            "cf" | "cofinite" => Family::Cofinite,
            "t" | "thick" => Family::Thick,
            "s" | "syndetic" => Family::Syndetic,
            "ps" | "piecewise_syndetic" => Family::PiecewiseSyndetic,
            "ts" | "thickly_syndetic" => Family::ThicklySyndetic,
            "D" | "density_one" => Family::DensityOne,
            "P" | "all" | "all_sets" => Family::AllSets,
            other => return Err(invalid(format!("unknown family {other:?}"))),
        })
    }
}

/// A family, optionally dualized (`F* = {A : A ∩ B ≠ ∅ for all B ∈ F}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyTag {
    pub family: Family,
    pub dual: bool,
}

impl FamilyTag {
    pub fn base(family: Family) -> FamilyTag {
        FamilyTag {
            family,
            dual: false,
        }
    }

    pub fn dual_of(family: Family) -> FamilyTag {
        FamilyTag { family, dual: true }
    }
}

impl From<Family> for FamilyTag {
    fn from(family: Family) -> FamilyTag {
        FamilyTag::base(family)
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, if self.dual { "*" } else { "" })
    }
}

impl FromStr for FamilyTag {
    type Err = ShadowError;
    fn from_str(s: &str) -> Result<FamilyTag> {
        let s = s.trim();
        match s.strip_suffix('*') {
            Some(base) => Ok(FamilyTag::dual_of(base.parse()?)),
            None => Ok(FamilyTag::base(s.parse()?)),
        }
    }
}

pub fn densities(a: &UPSet) -> (Ratio<u64>, Ratio<u64>) {
    a.densities()
}

pub fn family_membership(a: &UPSet, tag: FamilyTag) -> Result<bool> {
    if tag.dual {
        dual_membership(a, tag.family)
    } else {
        Ok(tag.family.contains(a))
    }
}

/// Membership in the dual family via the classical dualities
/// F_t* = F_s, F_s* = F_t, F_cf* = infinite sets, F_ps* = F_ts,
/// F_ts* = F_ps, 𝒟* = positive upper density, {ℕ}* = non-empty sets.
pub fn dual_membership(a: &UPSet, family: Family) -> Result<bool> {
    Ok(match family {
        Family::Whole => !a.is_empty(),
        Family::Cofinite => !a.is_finite(),
        Family::Thick => Family::Syndetic.contains(a),
        Family::Syndetic => Family::Thick.contains(a),
        Family::PiecewiseSyndetic => Family::ThicklySyndetic.contains(a),
        Family::ThicklySyndetic => Family::PiecewiseSyndetic.contains(a),
        Family::DensityOne => *a.densities().1.numer() > 0,
        Family::AllSets => {
            return Err(ShadowError::UnsupportedDual(
                "the dual of 𝒫(ℕ) is the empty family".into(),
            ))
        }
    })
}

pub fn set_algebra(a: &UPSet, b: &UPSet, op: SetOp) -> UPSet {
    a.apply(b, op)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(s: &str) -> UPSet {
        s.parse().unwrap()
    }

    #[test]
    fn normalize_examples() {
        let e = UPSet::from_bits("", "1010").unwrap();
        assert_eq!(e.cycle(), &[true, false]);
        assert!(e.tail().is_empty());
        let n = UPSet::from_bits("1", "1").unwrap();
        assert_eq!(n, UPSet::naturals());
        let s = UPSet::from_bits("0110", "0").unwrap();
        assert_eq!(s.to_string(), "tail=011;cycle=0");
        for i in 0..20 {
            assert_eq!(s.contains(i), i == 1 || i == 2);
        }
        assert!(UPSet::from_bits("1", "").is_err());
    }

    #[test]
    fn density_examples() {
        let half = Ratio::new(1, 2);
        assert_eq!(up("tail=;cycle=10").densities(), (half, half));
        assert_eq!(UPSet::naturals().densities(), (Ratio::from(1), Ratio::from(1)));
        let a = up("tail=0;cycle=1100");
        assert_eq!(a.densities(), (half, half));
        // window count at n = 400 is within 1/100 of the limit
        let w = WindowSet::observe(&a, 400).unwrap();
        let freq = w.count(0, 400) as f64 / 400.0;
        assert!((freq - 0.5).abs() <= 0.01);
    }

    #[test]
    fn membership_examples() {
        let evens = up("tail=;cycle=10");
        assert!(Family::Syndetic.contains(&evens));
        assert!(!Family::Thick.contains(&evens));
        let w = WindowSet::observe(&evens, 40).unwrap();
        assert_eq!(w.max_run(0, 40), 1);
        let fin = UPSet::finite(&[0, 3]);
        assert!(!Family::PiecewiseSyndetic.contains(&fin));
        // no extension window keeps a member past the tail
        assert!((4..100).all(|i| !fin.contains(i)));
    }

    #[test]
    fn dual_examples() {
        let evens = up("tail=;cycle=10");
        assert!(dual_membership(&evens, Family::Thick).unwrap());
        // evens meets every cofinite set [k, ∞)
        for k in 0..30 {
            assert!(!evens.intersection(&UPSet::from_threshold(k)).is_empty());
        }
        let fin = UPSet::finite(&[1, 4]);
        assert!(!dual_membership(&fin, Family::Cofinite).unwrap());
        assert!(fin.intersection(&fin.complement()).is_empty());
        assert!(Family::Cofinite.contains(&fin.complement()));
        assert!(dual_membership(&UPSet::naturals(), Family::Syndetic).unwrap());
        assert!(matches!(
            dual_membership(&evens, Family::AllSets),
            Err(ShadowError::UnsupportedDual(_))
        ));
        assert!(family_membership(&evens, "t*".parse().unwrap()).unwrap());
    }

    #[test]
    fn algebra_examples() {
        let evens = up("mod 2 in {0}");
        let odds = up("mod 2 in {1}");
        assert_eq!(evens.union(&odds), UPSet::naturals());
        let m3 = up("mod 3 in {0}");
        let m6 = evens.intersection(&m3);
        assert_eq!(m6, up("mod 6 in {0}"));
        for i in 0..60 {
            assert_eq!(m6.contains(i), i % 6 == 0);
        }
        assert_eq!(UPSet::naturals().complement(), UPSet::empty());
        let s = evens.shift(3);
        for i in 0..30 {
            assert_eq!(s.contains(i), i >= 3 && (i - 3) % 2 == 0);
        }
        assert_eq!(s.advance(3), evens);
    }

    #[test]
    fn literal_round_trip_and_errors() {
        let a = up("tail=0110;cycle=01");
        assert_eq!(a.to_string().parse::<UPSet>().unwrap(), a);
        assert!("mod 0 in {0}".parse::<UPSet>().is_err());
        assert!("mod 3 in {3}".parse::<UPSet>().is_err());
        assert!("tail=2;cycle=1".parse::<UPSet>().is_err());
        assert!("cycle=".parse::<UPSet>().is_err());
        assert_eq!(up("cycle=1"), UPSet::naturals());
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<UPSet>(&json).unwrap(), a);
    }

    #[test]
    fn family_tags_parse() {
        assert_eq!("ps".parse::<FamilyTag>().unwrap(), Family::PiecewiseSyndetic.into());
        assert_eq!("D*".parse::<FamilyTag>().unwrap(), FamilyTag::dual_of(Family::DensityOne));
        assert!("ip".parse::<FamilyTag>().is_err());
    }

    #[test]
    fn first_at_least_and_finite_members() {
        let a = up("tail=0010;cycle=0");
        assert_eq!(a.finite_members(), Some(vec![2]));
        assert_eq!(a.first_at_least(3), None);
        let b = up("tail=1;cycle=001");
        assert_eq!(b.first_at_least(1), Some(3));
        assert_eq!(b.min(), Some(0));
    }
}
