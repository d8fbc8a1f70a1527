//! Göpel systems: Lagrangian subspaces of F₂^{2g}, their Fano/Pascal split in
//! genus 3, the fixed basis F₁…F₁₅, constructions from Aronhold sets and the
//! decomposition of a Pascal system through a pair of Fano systems.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::characteristics::{
    aronhold_base, is_aronhold_set, pairing, Characteristic, CharacteristicSet, Sign,
};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GopelKind {
    /// All eight members even.
    Fano,
    /// Exactly four members even.
    Pascal,
}

/// A Lagrangian subspace of F₂^{2g}; `kind` is set in genus 3 only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GopelSystem {
    kind: Option<GopelKind>,
    members: CharacteristicSet,
}

/// Bit mask over `2^{2g}` slots of the F₂-span of `gens`.
fn span_mask(gens: &[Characteristic]) -> u64 {
    let mut mask = 1u64;
    for &v in gens {
        let mut add = 0u64;
        for idx in 0..64usize {
            if mask >> idx & 1 == 1 {
                add |= 1u64 << (idx ^ v.index());
            }
        }
        mask |= add;
    }
    mask
}

fn is_subspace(set: &CharacteristicSet) -> bool {
    let mask = set.mask();
    mask & 1 == 1
        && set.iter().all(|a| set.iter().all(|b| mask >> (a + b).index() & 1 == 1))
}

fn is_isotropic(set: &CharacteristicSet) -> bool {
    set.iter().all(|a| set.iter().all(|b| pairing(a, b) == Sign::Plus))
}

impl GopelSystem {
    /// Validates that `members` is a Lagrangian subspace and classifies it.
    pub fn new(members: CharacteristicSet) -> Result<Self> {
        let g = members.genus();
        if members.len() != 1 << g || !is_subspace(&members) || !is_isotropic(&members) {
            return Err(Error::Precondition("not a Lagrangian subspace".into()));
        }
        let kind = if g == 3 {
            match members.count_even() {
                8 => Some(GopelKind::Fano),
                4 => Some(GopelKind::Pascal),
                n => {
                    return Err(Error::Precondition(format!("Lagrangian subspace with {n} even members")))
                }
            }
        } else {
            None
        };
        Ok(Self { kind, members: members.sorted() })
    }

    pub fn parse<S: AsRef<str>>(genus: usize, items: &[S]) -> Result<Self> {
        Self::new(CharacteristicSet::parse(genus, items)?)
    }

    pub fn genus(&self) -> usize {
        self.members.genus()
    }

    pub fn kind(&self) -> Option<GopelKind> {
        self.kind
    }

    pub fn is_fano(&self) -> bool {
        self.kind == Some(GopelKind::Fano)
    }

    pub fn is_pascal(&self) -> bool {
        self.kind == Some(GopelKind::Pascal)
    }

    /// Members in increasing index order.
    pub fn members(&self) -> &CharacteristicSet {
        &self.members
    }

    pub fn mask(&self) -> u64 {
        self.members.mask()
    }

    pub fn contains(&self, m: Characteristic) -> bool {
        self.members.contains(m)
    }

    pub fn iter(&self) -> impl Iterator<Item = Characteristic> + '_ {
        self.members.iter()
    }

    /// The coset `a + L` that consists of even characteristics only. It is
    /// unique in genus 3 and equals `L` for a Fano system.
    pub fn even_coset(&self) -> Result<CharacteristicSet> {
        let g = self.genus();
        let mut found: Option<CharacteristicSet> = None;
        for a in 0..1usize << (2 * g) {
            let a = Characteristic::from_index(g, a)?;
            if !self.iter().all(|m| (a + m).is_even()) {
                continue;
            }
            let coset = CharacteristicSet::new(g, self.iter().map(|m| a + m))?.sorted();
            match &found {
                Some(prev) if prev.mask() != coset.mask() => {
                    return Err(Error::Precondition("even coset is not unique".into()))
                }
                Some(_) => {}
                None => found = Some(coset),
            }
        }
        found.ok_or_else(|| Error::NotFound("no even coset".into()))
    }
}

impl fmt::Display for GopelSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.members.to_strings().join(", "))
    }
}

/// A 2-dimensional isotropic subspace of F₂⁶.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsotropicPlane {
    members: CharacteristicSet,
}

impl IsotropicPlane {
    pub fn new(members: CharacteristicSet) -> Result<Self> {
        if members.genus() != 3 || members.len() != 4 || !is_subspace(&members) || !is_isotropic(&members) {
            return Err(Error::Precondition("not a 2-dimensional isotropic subspace".into()));
        }
        Ok(Self { members: members.sorted() })
    }

    pub fn members(&self) -> &CharacteristicSet {
        &self.members
    }
}

/// All Lagrangian subspaces of F₂^{2g}, ordered by their sorted member lists.
pub fn enumerate_gopel(genus: usize) -> Result<Vec<GopelSystem>> {
    match genus {
        2 => Ok(enumerate_uncached(2)),
        3 => Ok(gopel3().to_vec()),
        g => Err(Error::UnsupportedGenus(g)),
    }
}

/// The 135 genus-3 Göpel systems, built once.
pub fn gopel3() -> &'static [GopelSystem] {
    static ALL: OnceLock<Vec<GopelSystem>> = OnceLock::new();
    ALL.get_or_init(|| enumerate_uncached(3))
}

/// Index of a genus-3 Göpel system in [`gopel3`].
pub fn gopel3_position(mask: u64) -> Option<usize> {
    static INDEX: OnceLock<BTreeMap<u64, usize>> = OnceLock::new();
    INDEX
        .get_or_init(|| gopel3().iter().enumerate().map(|(i, s)| (s.mask(), i)).collect())
        .get(&mask)
        .copied()
}

fn enumerate_uncached(genus: usize) -> Vec<GopelSystem> {
    let nonzero: Vec<Characteristic> = (1..1usize << (2 * genus))
        .map(|i| Characteristic::from_index(genus, i).expect("in range"))
        .collect();
    let mut found = BTreeMap::new();
    let mut stack: Vec<Characteristic> = Vec::new();
    fn extend(
        genus: usize,
        nonzero: &[Characteristic],
        start: usize,
        stack: &mut Vec<Characteristic>,
        found: &mut BTreeMap<Vec<usize>, u64>,
    ) {
        if stack.len() == genus {
            let mask = span_mask(stack);
            if mask.count_ones() as usize == 1 << genus {
                let key: Vec<usize> = (0..64).filter(|i| mask >> i & 1 == 1).collect();
                found.insert(key, mask);
            }
            return;
        }
        for (k, &v) in nonzero.iter().enumerate().skip(start) {
            if stack.iter().all(|&u| pairing(u, v) == Sign::Plus) {
                stack.push(v);
                extend(genus, nonzero, k + 1, stack, found);
                stack.pop();
            }
        }
    }
    extend(genus, &nonzero, 0, &mut stack, &mut found);
    found
        .into_values()
        .map(|mask| {
            let set = CharacteristicSet::from_mask(genus, mask).expect("valid mask");
            GopelSystem::new(set).expect("span of an isotropic basis is Lagrangian")
        })
        .collect()
}

/// Seven index triples on {1..7}, any two sharing exactly one index: the
/// lines of a Fano plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FanoFamily {
    triples: [[u8; 3]; 7],
}

impl FanoFamily {
    pub fn new(triples: [[u8; 3]; 7]) -> Result<Self> {
        let mut sorted = triples;
        for t in sorted.iter_mut() {
            t.sort_unstable();
            if t.iter().any(|&i| !(1..=7).contains(&i)) || t[0] == t[1] || t[1] == t[2] {
                return Err(Error::Precondition(format!("bad triple {t:?}")));
            }
        }
        for a in 0..7 {
            for b in a + 1..7 {
                let shared = sorted[a].iter().filter(|i| sorted[b].contains(i)).count();
                if shared != 1 {
                    return Err(Error::Precondition(format!(
                        "triples {:?} and {:?} share {shared} indices",
                        sorted[a], sorted[b]
                    )));
                }
            }
        }
        sorted.sort_unstable();
        Ok(Self { triples: sorted })
    }

    /// {(123), (145), (167), (247), (256), (346), (357)}.
    pub fn reference() -> Self {
        Self::new([[1, 2, 3], [1, 4, 5], [1, 6, 7], [2, 4, 7], [2, 5, 6], [3, 4, 6], [3, 5, 7]])
            .expect("reference family is a Fano plane")
    }

    pub fn triples(&self) -> &[[u8; 3]; 7] {
        &self.triples
    }

    /// Relabels index `i` as `perm[i − 1]`.
    pub fn permuted(&self, perm: &[u8; 7]) -> Result<Self> {
        Self::new(self.triples.map(|t| t.map(|i| perm[i as usize - 1])))
    }

    /// All 30 Fano planes on {1..7}, sorted.
    pub fn all() -> Vec<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for_each_permutation(|perm| {
            seen.insert(Self::reference().permuted(perm).expect("relabeling preserves the plane").triples);
        });
        seen.into_iter().map(|triples| Self { triples }).collect()
    }
}

fn for_each_permutation(mut f: impl FnMut(&[u8; 7])) {
    fn rec(k: usize, perm: &mut [u8; 7], f: &mut dyn FnMut(&[u8; 7])) {
        if k == 7 {
            f(perm);
            return;
        }
        for i in k..7 {
            perm.swap(k, i);
            rec(k + 1, perm, f);
            perm.swap(k, i);
        }
    }
    let mut perm = [1, 2, 3, 4, 5, 6, 7];
    rec(0, &mut perm, &mut f);
}

/// A common index `c` with the remaining six split into three pairs: the
/// family {(c a b) for each pair (a b)} ∪ {(c)} ∪ {(a b)}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PascalFamily {
    common: u8,
    pairs: [[u8; 2]; 3],
}

impl PascalFamily {
    pub fn new(common: u8, pairs: [[u8; 2]; 3]) -> Result<Self> {
        let mut seen = 0u8;
        for i in std::iter::once(common).chain(pairs.iter().flatten().copied()) {
            if !(1..=7).contains(&i) || seen >> i & 1 == 1 {
                return Err(Error::Precondition("Pascal family must partition {1..7}".into()));
            }
            seen |= 1 << i;
        }
        let mut pairs = pairs.map(|mut p| {
            p.sort_unstable();
            p
        });
        pairs.sort_unstable();
        Ok(Self { common, pairs })
    }

    /// {(123), (145), (167), (1), (23), (45), (67)}.
    pub fn reference() -> Self {
        Self::new(1, [[2, 3], [4, 5], [6, 7]]).expect("reference family is valid")
    }

    pub fn common(&self) -> u8 {
        self.common
    }

    pub fn pairs(&self) -> &[[u8; 2]; 3] {
        &self.pairs
    }

    /// The three triples through the common index.
    pub fn triples(&self) -> [[u8; 3]; 3] {
        self.pairs.map(|[a, b]| {
            let mut t = [self.common, a, b];
            t.sort_unstable();
            t
        })
    }

    /// All 105 families: 7 choices of common index times 15 pairings.
    pub fn all() -> Vec<Self> {
        let mut out = Vec::with_capacity(105);
        for c in 1..=7u8 {
            let rest: Vec<u8> = (1..=7).filter(|&i| i != c).collect();
            for pairs in pairings(&rest) {
                out.push(Self::new(c, [pairs[0], pairs[1], pairs[2]]).expect("partition"));
            }
        }
        out
    }
}

fn pairings(items: &[u8]) -> Vec<Vec<[u8; 2]>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let first = items[0];
    let mut out = Vec::new();
    for k in 1..items.len() {
        let rest: Vec<u8> = items[1..].iter().copied().filter(|&x| x != items[k]).collect();
        for mut tail in pairings(&rest) {
            tail.insert(0, [first, items[k]]);
            out.push(tail);
        }
    }
    out
}

fn checked_aronhold(aronhold: &CharacteristicSet) -> Result<Characteristic> {
    if aronhold.genus() != 3 || !is_aronhold_set(aronhold) {
        return Err(Error::Precondition("not an Aronhold set".into()));
    }
    aronhold_base(aronhold)
}

/// Sum of the listed (1-based) Aronhold members; sums of an odd number of
/// members are shifted by the even completion `n0`, so that the result lies
/// in the linear Göpel system rather than in its even coset.
fn shifted_sum(aronhold: &CharacteristicSet, n0: Characteristic, idx: &[u8]) -> Characteristic {
    let m = aronhold.members();
    let s = idx.iter().fold(Characteristic::zero(3).expect("genus 3"), |acc, &i| acc + m[i as usize - 1]);
    if idx.len() % 2 == 1 {
        s + n0
    } else {
        s
    }
}

/// {0} together with the seven triple sums of a Fano family. For an
/// Aronhold set with even completion `n₀ ≠ 0` the triple sums form the even
/// coset `n₀ + F`, and `F` is returned.
pub fn fano_from_aronhold(aronhold: &CharacteristicSet, family: &FanoFamily) -> Result<GopelSystem> {
    let n0 = checked_aronhold(aronhold)?;
    let members = std::iter::once(Characteristic::zero(3)?)
        .chain(family.triples().iter().map(|t| shifted_sum(aronhold, n0, t)));
    GopelSystem::new(CharacteristicSet::new(3, members)?)
}

/// {0}, the three triple sums through the common index, the three pair sums
/// and the common member itself (odd-length sums shifted by `n₀` as in
/// [`fano_from_aronhold`]).
pub fn pascal_from_aronhold(aronhold: &CharacteristicSet, family: &PascalFamily) -> Result<GopelSystem> {
    let n0 = checked_aronhold(aronhold)?;
    let mut members = vec![Characteristic::zero(3)?, shifted_sum(aronhold, n0, &[family.common()])];
    for t in family.triples() {
        members.push(shifted_sum(aronhold, n0, &t));
    }
    for p in family.pairs() {
        members.push(shifted_sum(aronhold, n0, p));
    }
    GopelSystem::new(CharacteristicSet::new(3, members)?)
}

const FANO_BASIS_TABLE: [[&str; 8]; 15] = [
    ["000;000", "000;001", "000;010", "000;011", "000;100", "000;101", "000;110", "000;111"],
    ["000;000", "000;001", "000;010", "000;011", "100;000", "100;001", "100;010", "100;011"],
    ["000;000", "000;001", "000;100", "000;101", "010;000", "010;001", "010;100", "010;101"],
    ["000;000", "000;001", "000;110", "000;111", "110;000", "110;001", "110;110", "110;111"],
    ["000;000", "000;001", "010;000", "010;001", "100;000", "100;001", "110;000", "110;001"],
    ["000;000", "000;010", "000;100", "000;110", "001;000", "001;010", "001;100", "001;110"],
    ["000;000", "000;010", "000;101", "000;111", "101;000", "101;010", "101;101", "101;111"],
    ["000;000", "000;010", "001;000", "001;010", "100;000", "100;010", "101;000", "101;010"],
    ["000;000", "000;011", "000;100", "000;111", "011;000", "011;011", "011;100", "011;111"],
    ["000;000", "000;011", "000;101", "000;110", "111;000", "111;011", "111;101", "111;110"],
    ["000;000", "000;011", "011;000", "011;011", "100;000", "100;011", "111;000", "111;011"],
    ["000;000", "000;100", "001;000", "001;100", "010;000", "010;100", "011;000", "011;100"],
    ["000;000", "000;101", "010;000", "010;101", "101;000", "101;101", "111;000", "111;101"],
    ["000;000", "000;110", "001;000", "001;110", "110;000", "110;110", "111;000", "111;110"],
    ["000;000", "000;111", "011;000", "011;111", "101;000", "101;111", "110;000", "110;111"],
];

/// The fixed basis F₁…F₁₅ of Fano systems, validated on first access.
pub fn fano_basis() -> &'static [GopelSystem] {
    static BASIS: OnceLock<Vec<GopelSystem>> = OnceLock::new();
    BASIS.get_or_init(|| {
        let basis: Vec<GopelSystem> = FANO_BASIS_TABLE
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let s = GopelSystem::parse(3, row).unwrap_or_else(|e| panic!("F{} is invalid: {e}", i + 1));
                assert!(s.is_fano(), "F{} is not Fano", i + 1);
                s
            })
            .collect();
        let distinct: std::collections::BTreeSet<u64> = basis.iter().map(GopelSystem::mask).collect();
        assert_eq!(distinct.len(), 15, "basis members must be distinct");
        basis
    })
}

/// A Pascal system `P` with even coset `E_P`, and the unique Fano pair
/// `F′, F″` meeting in a 2-dimensional subspace `S₁` with `F′ Δ F″ = E_P`.
/// `S₂ = F′ ∖ S₁`, `S₃ = F″ ∖ S₁`, and `E_P = S₂ ⊔ S₃`.
#[derive(Clone, Debug, Serialize)]
pub struct PascalDecomposition {
    pub even_coset: CharacteristicSet,
    pub fano_a: GopelSystem,
    pub fano_b: GopelSystem,
    pub s1: IsotropicPlane,
    pub s2: CharacteristicSet,
    pub s3: CharacteristicSet,
}

pub fn pascal_decomposition(p: &GopelSystem) -> Result<PascalDecomposition> {
    if !p.is_pascal() {
        return Err(Error::Precondition("input is not a Pascal system".into()));
    }
    let even = p.even_coset()?;
    let fanos: Vec<&GopelSystem> = gopel3().iter().filter(|s| s.is_fano()).collect();
    let mut found = Vec::new();
    for (i, a) in fanos.iter().enumerate() {
        for b in &fanos[i + 1..] {
            if (a.mask() & b.mask()).count_ones() == 4 && a.mask() ^ b.mask() == even.mask() {
                found.push((*a, *b));
            }
        }
    }
    if found.len() != 1 {
        return Err(Error::Precondition(format!("{} Fano pairs decompose {p}", found.len())));
    }
    let (a, b) = found[0];
    let s1 = CharacteristicSet::from_mask(3, a.mask() & b.mask())?;
    Ok(PascalDecomposition {
        even_coset: even,
        fano_a: a.clone(),
        fano_b: b.clone(),
        s1: IsotropicPlane::new(s1)?,
        s2: CharacteristicSet::from_mask(3, a.mask() & !b.mask())?,
        s3: CharacteristicSet::from_mask(3, b.mask() & !a.mask())?,
    })
}

/// The Fano system obtained from the reference Aronhold set and family.
pub fn example_fano() -> GopelSystem {
    GopelSystem::parse(3, &["000;000", "100;010", "001;010", "101;000", "001;000", "101;010", "000;010", "100;000"])
        .expect("fixture is a Göpel system")
}

/// The Pascal system obtained from the reference Aronhold set and family.
pub fn example_pascal() -> GopelSystem {
    GopelSystem::parse(3, &["000;000", "100;010", "001;010", "101;000", "111;111", "011;101", "110;101", "010;111"])
        .expect("fixture is a Göpel system")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characteristics::reference_aronhold_set;

    #[test]
    fn counts() {
        let all = enumerate_gopel(3).unwrap();
        assert_eq!(all.len(), 135);
        assert_eq!(all.iter().filter(|s| s.is_fano()).count(), 30);
        assert_eq!(all.iter().filter(|s| s.is_pascal()).count(), 105);
        assert_eq!(enumerate_gopel(2).unwrap().len(), 15);
        assert!(enumerate_gopel(1).is_err());
    }

    #[test]
    fn fixtures_are_enumerated() {
        assert!(example_fano().is_fano());
        assert!(example_pascal().is_pascal());
        assert!(gopel3_position(example_fano().mask()).is_some());
    }

    #[test]
    fn reference_constructions() {
        let a = reference_aronhold_set();
        assert_eq!(fano_from_aronhold(&a, &FanoFamily::reference()).unwrap(), example_fano());
        assert_eq!(pascal_from_aronhold(&a, &PascalFamily::reference()).unwrap(), example_pascal());
        let swapped = FanoFamily::reference().permuted(&[1, 2, 3, 4, 5, 7, 6]).unwrap();
        assert!(fano_from_aronhold(&a, &swapped).unwrap().is_fano());
    }

    #[test]
    fn family_validation() {
        let bad = [[1, 2, 3], [1, 2, 4], [1, 6, 7], [2, 4, 7], [2, 5, 6], [3, 4, 6], [3, 5, 7]];
        assert!(FanoFamily::new(bad).is_err());
        assert!(PascalFamily::new(1, [[2, 3], [3, 5], [6, 7]]).is_err());
        assert_eq!(FanoFamily::all().len(), 30);
        assert_eq!(PascalFamily::all().len(), 105);
    }

    #[test]
    fn basis_table() {
        let basis = fano_basis();
        assert!(basis[0].iter().all(|m| m.top() == 0));
        assert_eq!(
            basis[1].members().to_strings(),
            ["000;000", "000;001", "000;010", "000;011", "100;000", "100;001", "100;010", "100;011"]
        );
        assert!(basis.iter().all(|f| gopel3_position(f.mask()).is_some()));
    }

    #[test]
    fn pascal_example_decomposes() {
        let d = pascal_decomposition(&example_pascal()).unwrap();
        assert_eq!(d.s1.members().len(), 4);
        assert!(d.s1.members().iter().all(|m| m.is_even()));
        assert_eq!(d.s2.mask() | d.s3.mask(), d.even_coset.mask());
        assert_eq!(d.s2.mask() & d.s3.mask(), 0);
        assert!(pascal_decomposition(&example_fano()).is_err());
    }

    #[test]
    fn serializes_with_kind() {
        let json = serde_json::to_value(example_fano()).unwrap();
        assert_eq!(json["kind"], "fano");
        assert_eq!(json["members"][0], "000;000");
    }
}
