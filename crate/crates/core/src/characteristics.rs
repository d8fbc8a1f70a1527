//! Theta characteristics over F₂^{2g} for g ≤ 3.
//!
//! A characteristic `[m′; m″]` is stored as the integer `int(m′)·2^g + int(m″)`
//! where each row is read left to right, leftmost bit most significant. The
//! string form is `"abc;def"`. Addition is XOR, so all set operations reduce to
//! bit manipulation on at most 64 slots.

use std::fmt;
use std::ops::{Add, Mul, Neg};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_GENUS: usize = 3;

fn check_genus(genus: usize) -> Result<()> {
    if (1..=MAX_GENUS).contains(&genus) {
        Ok(())
    } else {
        Err(Error::UnsupportedGenus(genus))
    }
}

/// A value in {+1, −1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Sign {
    pub fn from_bit(bit: u32) -> Self {
        if bit & 1 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

/// A theta characteristic `[m′; m″]` of genus 1, 2 or 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Characteristic {
    genus: u8,
    idx: u8,
}

impl Characteristic {
    pub fn new(genus: usize, top: u8, bottom: u8) -> Result<Self> {
        check_genus(genus)?;
        let limit = 1u16 << genus;
        if u16::from(top) >= limit || u16::from(bottom) >= limit {
            return Err(Error::InvalidCharacteristic(format!(
                "rows ({top:b}, {bottom:b}) exceed genus {genus}"
            )));
        }
        Ok(Self {
            genus: genus as u8,
            idx: (top << genus) | bottom,
        })
    }

    pub fn from_index(genus: usize, idx: usize) -> Result<Self> {
        check_genus(genus)?;
        if idx >= 1 << (2 * genus) {
            return Err(Error::InvalidCharacteristic(format!(
                "index {idx} out of range for genus {genus}"
            )));
        }
        Ok(Self {
            genus: genus as u8,
            idx: idx as u8,
        })
    }

    pub fn zero(genus: usize) -> Result<Self> {
        Self::from_index(genus, 0)
    }

    /// Parses `"abc;def"` or a decimal index, the latter requiring `genus`.
    pub fn parse_with_genus(s: &str, genus: usize) -> Result<Self> {
        let s = s.trim();
        if s.contains(';') {
            let c: Characteristic = s.parse()?;
            if c.genus() != genus {
                return Err(Error::GenusMismatch {
                    expected: genus,
                    found: c.genus(),
                });
            }
            Ok(c)
        } else {
            let idx = s
                .parse::<usize>()
                .map_err(|_| Error::InvalidCharacteristic(s.to_string()))?;
            Self::from_index(genus, idx)
        }
    }

    pub fn genus(self) -> usize {
        self.genus as usize
    }

    pub fn index(self) -> usize {
        self.idx as usize
    }

    /// The top row m′ as a g-bit integer.
    pub fn top(self) -> u8 {
        self.idx >> self.genus
    }

    /// The bottom row m″ as a g-bit integer.
    pub fn bottom(self) -> u8 {
        self.idx & ((1 << self.genus) - 1)
    }

    /// Bit `i` (0 = leftmost) of m′.
    pub fn top_bit(self, i: usize) -> u8 {
        (self.top() >> (self.genus() - 1 - i)) & 1
    }

    /// Bit `i` (0 = leftmost) of m″.
    pub fn bottom_bit(self, i: usize) -> u8 {
        (self.bottom() >> (self.genus() - 1 - i)) & 1
    }

    pub fn is_zero(self) -> bool {
        self.idx == 0
    }

    pub fn parity(self) -> Sign {
        parity(self)
    }

    pub fn is_even(self) -> bool {
        parity(self) == Sign::Plus
    }

    pub fn is_odd(self) -> bool {
        !self.is_even()
    }

    fn mask(self) -> u64 {
        1u64 << self.idx
    }
}

impl Add for Characteristic {
    type Output = Characteristic;
    fn add(self, rhs: Characteristic) -> Characteristic {
        assert_eq!(self.genus, rhs.genus, "adding characteristics of different genus");
        Characteristic {
            genus: self.genus,
            idx: self.idx ^ rhs.idx,
        }
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.genus();
        write!(f, "{:0g$b};{:0g$b}", self.top(), self.bottom(), g = g)
    }
}

impl FromStr for Characteristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidCharacteristic(s.to_string());
        let (top, bottom) = s.trim().split_once(';').ok_or_else(bad)?;
        let (top, bottom) = (top.trim(), bottom.trim());
        if top.len() != bottom.len() || top.is_empty() {
            return Err(bad());
        }
        if !top.chars().chain(bottom.chars()).all(|c| c == '0' || c == '1') {
            return Err(bad());
        }
        let genus = top.len();
        check_genus(genus)?;
        let t = u8::from_str_radix(top, 2).map_err(|_| bad())?;
        let b = u8::from_str_radix(bottom, 2).map_err(|_| bad())?;
        Characteristic::new(genus, t, b)
    }
}

impl Serialize for Characteristic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Characteristic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Indexed { g: usize, idx: usize },
        }
        let parsed = match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse(),
            Repr::Indexed { g, idx } => Characteristic::from_index(g, idx),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// e(m) = (−1)^{m′·m″}.
pub fn parity(m: Characteristic) -> Sign {
    Sign::from_bit((m.top() & m.bottom()).count_ones())
}

/// e(m₁,m₂,m₃) = e(m₁)e(m₂)e(m₃)e(m₁+m₂+m₃); `Minus` means azygetic.
pub fn triple_sign(m1: Characteristic, m2: Characteristic, m3: Characteristic) -> Sign {
    parity(m1) * parity(m2) * parity(m3) * parity(m1 + m2 + m3)
}

/// The symplectic pairing e(m, n) = (−1)^{m′·n″ − m″·n′}.
pub fn pairing(m: Characteristic, n: Characteristic) -> Sign {
    assert_eq!(m.genus, n.genus, "pairing characteristics of different genus");
    Sign::from_bit((m.top() & n.bottom()).count_ones() + (m.bottom() & n.top()).count_ones())
}

/// Which characteristics [`enumerate_characteristics`] returns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityFilter {
    All,
    Even,
    Odd,
}

/// An ordered, duplicate-free collection of characteristics of one genus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharacteristicSet {
    genus: usize,
    members: Vec<Characteristic>,
    mask: u64,
}

impl CharacteristicSet {
    pub fn new(genus: usize, members: impl IntoIterator<Item = Characteristic>) -> Result<Self> {
        check_genus(genus)?;
        let mut set = Self {
            genus,
            members: Vec::new(),
            mask: 0,
        };
        for m in members {
            set.push(m)?;
        }
        Ok(set)
    }

    pub fn empty(genus: usize) -> Result<Self> {
        Self::new(genus, [])
    }

    /// Members in canonical (index) order.
    pub fn from_mask(genus: usize, mask: u64) -> Result<Self> {
        check_genus(genus)?;
        let slots = 1usize << (2 * genus);
        if slots < 64 && mask >> slots != 0 {
            return Err(Error::Precondition(format!(
                "mask {mask:#x} has bits beyond genus {genus}"
            )));
        }
        let members = (0..slots)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| Characteristic { genus: genus as u8, idx: i as u8 })
            .collect();
        Ok(Self {
            genus,
            members,
            mask,
        })
    }

    /// Parses a list of `"abc;def"` strings.
    pub fn parse<S: AsRef<str>>(genus: usize, items: &[S]) -> Result<Self> {
        let members = items
            .iter()
            .map(|s| Characteristic::parse_with_genus(s.as_ref(), genus))
            .collect::<Result<Vec<_>>>()?;
        Self::new(genus, members)
    }

    pub fn push(&mut self, m: Characteristic) -> Result<()> {
        if m.genus() != self.genus {
            return Err(Error::GenusMismatch {
                expected: self.genus,
                found: m.genus(),
            });
        }
        if self.mask & m.mask() != 0 {
            return Err(Error::DuplicateMember(m.to_string()));
        }
        self.mask |= m.mask();
        self.members.push(m);
        Ok(())
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, m: Characteristic) -> bool {
        m.genus() == self.genus && self.mask & m.mask() != 0
    }

    pub fn members(&self) -> &[Characteristic] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = Characteristic> + '_ {
        self.members.iter().copied()
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// Same members in canonical order.
    pub fn sorted(&self) -> Self {
        Self::from_mask(self.genus, self.mask).expect("mask is valid")
    }

    /// Set equality, ignoring order.
    pub fn same_members(&self, other: &Self) -> bool {
        self.genus == other.genus && self.mask == other.mask
    }

    pub fn sum(&self) -> Characteristic {
        self.iter()
            .fold(Characteristic { genus: self.genus as u8, idx: 0 }, |a, b| a + b)
    }

    pub fn count_even(&self) -> usize {
        self.iter().filter(|m| m.is_even()).count()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.iter().map(|m| m.to_string()).collect()
    }
}

impl Serialize for CharacteristicSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.members.serialize(serializer)
    }
}

impl<'a> IntoIterator for &'a CharacteristicSet {
    type Item = Characteristic;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, Characteristic>>;
    fn into_iter(self) -> Self::IntoIter {
        self.members.iter().copied()
    }
}

/// All characteristics of genus `genus` passing `filter`, in index order.
pub fn enumerate_characteristics(genus: usize, filter: ParityFilter) -> Result<CharacteristicSet> {
    check_genus(genus)?;
    let members = (0..1usize << (2 * genus))
        .map(|i| Characteristic::from_index(genus, i).expect("index in range"))
        .filter(|m| match filter {
            ParityFilter::All => true,
            ParityFilter::Even => m.is_even(),
            ParityFilter::Odd => m.is_odd(),
        });
    CharacteristicSet::new(genus, members)
}

fn all_triples_azygetic(members: &[Characteristic]) -> bool {
    let n = members.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if triple_sign(members[i], members[j], members[k]) == Sign::Plus {
                    return false;
                }
            }
        }
    }
    true
}

/// True iff `s` has 2g+2 members and every triple is azygetic.
pub fn is_fundamental_system(s: &CharacteristicSet) -> bool {
    s.len() == 2 * s.genus() + 2 && all_triples_azygetic(s.members())
}

/// True iff `s` is an Aronhold set: seven odd genus-3 characteristics, every
/// triple azygetic.
pub fn is_aronhold_set(s: &CharacteristicSet) -> bool {
    s.genus() == 3 && s.len() == 7 && s.iter().all(Characteristic::is_odd) && all_triples_azygetic(s.members())
}

/// Completes g odd characteristics to a special fundamental system.
///
/// Returns the g + 2 even members. For g = 3 the input must be an azygetic
/// triple; the sixth even characteristic azygetic with every pair of the
/// input, namely m₁+m₂+m₃, is excluded. The completion is verified unique.
pub fn special_fundamental_completion(odds: &CharacteristicSet) -> Result<CharacteristicSet> {
    let g = odds.genus();
    if g != 2 && g != 3 {
        return Err(Error::UnsupportedGenus(g));
    }
    if odds.len() != g {
        return Err(Error::Precondition(format!(
            "expected {g} odd characteristics, got {}",
            odds.len()
        )));
    }
    if let Some(m) = odds.iter().find(|m| m.is_even()) {
        return Err(Error::Precondition(format!("{m} is not odd")));
    }
    if !all_triples_azygetic(odds.members()) {
        return Err(Error::Precondition("input is not azygetic".into()));
    }
    let evens = enumerate_characteristics(g, ParityFilter::Even)?;
    // an even n can only belong to the completion if every triple through n
    // and two input members is azygetic
    let candidates: Vec<Characteristic> = evens
        .iter()
        .filter(|&n| {
            let ms = odds.members();
            (0..ms.len()).all(|i| (i + 1..ms.len()).all(|j| triple_sign(ms[i], ms[j], n) == Sign::Minus))
        })
        .collect();
    let want = g + 2;
    let mut found: Vec<Vec<Characteristic>> = Vec::new();
    let mut chosen = Vec::with_capacity(want);
    search_completions(odds.members(), &candidates, 0, want, &mut chosen, &mut found);
    match found.len() {
        0 => Err(Error::NotFound("no special fundamental completion".into())),
        1 => CharacteristicSet::new(g, found.pop().unwrap()),
        k => Err(Error::Unstable(format!("{k} distinct completions"))),
    }
}

fn search_completions(
    base: &[Characteristic],
    candidates: &[Characteristic],
    start: usize,
    want: usize,
    chosen: &mut Vec<Characteristic>,
    found: &mut Vec<Vec<Characteristic>>,
) {
    if chosen.len() == want {
        let all: Vec<_> = base.iter().chain(chosen.iter()).copied().collect();
        if all_triples_azygetic(&all) {
            found.push(chosen.clone());
        }
        return;
    }
    for i in start..candidates.len() {
        chosen.push(candidates[i]);
        search_completions(base, candidates, i + 1, want, chosen, found);
        chosen.pop();
    }
}

/// The unique even characteristic completing an Aronhold set to a
/// fundamental system.
pub fn aronhold_base(aronhold: &CharacteristicSet) -> Result<Characteristic> {
    if !is_aronhold_set(aronhold) {
        return Err(Error::Precondition("not an Aronhold set".into()));
    }
    let mut hits = enumerate_characteristics(3, ParityFilter::Even)?
        .iter()
        .filter(|&n| {
            let ms = aronhold.members();
            (0..7).all(|i| (i + 1..7).all(|j| triple_sign(ms[i], ms[j], n) == Sign::Minus))
        })
        .collect::<Vec<_>>();
    match hits.len() {
        1 => Ok(hits.pop().unwrap()),
        k => Err(Error::Unstable(format!("{k} even completions of an Aronhold set"))),
    }
}

/// How a characteristic arises from a fundamental system {n₀, m₁, …, m₇}.
/// Indices are 1-based, increasing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum AronholdExpression {
    Base,
    Member(usize),
    BasePlusPair(usize, usize),
    TripleSum(usize, usize, usize),
}

/// Expression of each of the 64 genus-3 characteristics in terms of a
/// fundamental system.
#[derive(Clone, Debug)]
pub struct AronholdClassification {
    entries: Vec<(Characteristic, AronholdExpression)>,
}

impl AronholdClassification {
    pub fn expression(&self, m: Characteristic) -> AronholdExpression {
        self.entries[m.index()].1
    }

    pub fn entries(&self) -> &[(Characteristic, AronholdExpression)] {
        &self.entries
    }

    /// Sizes of the classes (base, members, base+pairs, triple sums).
    pub fn class_sizes(&self) -> [usize; 4] {
        let mut sizes = [0; 4];
        for (_, e) in &self.entries {
            let slot = match e {
                AronholdExpression::Base => 0,
                AronholdExpression::Member(_) => 1,
                AronholdExpression::BasePlusPair(..) => 2,
                AronholdExpression::TripleSum(..) => 3,
            };
            sizes[slot] += 1;
        }
        sizes
    }
}

/// Writes every characteristic as n₀, mᵢ, n₀+mᵢ+mⱼ or mᵢ+mⱼ+m_k.
pub fn aronhold_classify(aronhold: &CharacteristicSet, n0: Characteristic) -> Result<AronholdClassification> {
    if !is_aronhold_set(aronhold) {
        return Err(Error::Precondition("not an Aronhold set".into()));
    }
    if n0.genus() != 3 || n0.is_odd() {
        return Err(Error::Precondition(format!("{n0} is not an even genus-3 characteristic")));
    }
    let mut all: Vec<_> = aronhold.members().to_vec();
    all.push(n0);
    if !all_triples_azygetic(&all) {
        return Err(Error::Precondition("n0 with the Aronhold set is not a fundamental system".into()));
    }
    let ms = aronhold.members();
    let mut slots: Vec<Option<AronholdExpression>> = vec![None; 64];
    let mut assign = |c: Characteristic, e: AronholdExpression| -> Result<()> {
        match slots[c.index()] {
            None => {
                slots[c.index()] = Some(e);
                Ok(())
            }
            Some(prev) => Err(Error::Precondition(format!("{c} arises as both {prev:?} and {e:?}"))),
        }
    };
    assign(n0, AronholdExpression::Base)?;
    for (i, &m) in ms.iter().enumerate() {
        assign(m, AronholdExpression::Member(i + 1))?;
    }
    for i in 0..7 {
        for j in i + 1..7 {
            assign(n0 + ms[i] + ms[j], AronholdExpression::BasePlusPair(i + 1, j + 1))?;
            for k in j + 1..7 {
                assign(ms[i] + ms[j] + ms[k], AronholdExpression::TripleSum(i + 1, j + 1, k + 1))?;
            }
        }
    }
    let entries = slots
        .into_iter()
        .enumerate()
        .map(|(idx, e)| {
            let c = Characteristic::from_index(3, idx).expect("index in range");
            e.map(|e| (c, e))
                .ok_or_else(|| Error::Precondition(format!("{c} not expressed")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AronholdClassification { entries })
}

/// All unordered Aronhold sets (genus 3 only), members in index order, sets
/// in lexicographic order.
pub fn enumerate_aronhold_sets(genus: usize) -> Result<Vec<CharacteristicSet>> {
    if genus != 3 {
        return Err(Error::UnsupportedGenus(genus));
    }
    let odds: Vec<Characteristic> = enumerate_characteristics(3, ParityFilter::Odd)?.members().to_vec();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(7);
    extend_aronhold(&odds, 0, &mut chosen, &mut out);
    Ok(out)
}

fn extend_aronhold(
    odds: &[Characteristic],
    start: usize,
    chosen: &mut Vec<Characteristic>,
    out: &mut Vec<CharacteristicSet>,
) {
    if chosen.len() == 7 {
        out.push(CharacteristicSet::new(3, chosen.iter().copied()).expect("distinct members"));
        return;
    }
    // not enough candidates left to reach seven
    if odds.len() - start < 7 - chosen.len() {
        return;
    }
    for i in start..odds.len() {
        let c = odds[i];
        let ok = (0..chosen.len())
            .all(|a| (a + 1..chosen.len()).all(|b| triple_sign(chosen[a], chosen[b], c) == Sign::Minus));
        if ok {
            chosen.push(c);
            extend_aronhold(odds, i + 1, chosen, out);
            chosen.pop();
        }
    }
}

/// The Aronhold set used throughout the classical literature examples:
/// [111;111], [110;100], [101;001], [100;110], [010;011], [001;101], [011;010].
pub fn reference_aronhold_set() -> CharacteristicSet {
    CharacteristicSet::parse(
        3,
        &["111;111", "110;100", "101;001", "100;110", "010;011", "001;101", "011;010"],
    )
    .expect("valid fixture")
}

/// The six odd genus-2 characteristics, which form the unique fundamental
/// system consisting of odd characteristics only.
pub fn genus2_odd_fundamental_system() -> CharacteristicSet {
    CharacteristicSet::parse(2, &["01;01", "01;11", "10;10", "10;11", "11;01", "11;10"]).expect("valid fixture")
}
