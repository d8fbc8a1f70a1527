//! The group Sp(2g, F₂) for g ≤ 3.
//!
//! A 2g×2g bit matrix is stored as 2g row words; column `c` is bit
//! `2g−1−c`, so a row word uses the same bit layout as a characteristic
//! index `[m′; m″]`. Elements are packed into a `u64` (2g bits per row) for
//! hashing during enumeration.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Serialize, Serializer};

use crate::characteristics::{Characteristic, MAX_GENUS};
use crate::error::{Error, Result};

/// A g×g matrix over F₂; row words carry g bits, leftmost column most
/// significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BitBlock {
    genus: usize,
    rows: [u8; MAX_GENUS],
}

impl BitBlock {
    pub fn zero(genus: usize) -> Self {
        Self { genus, rows: [0; MAX_GENUS] }
    }

    pub fn identity(genus: usize) -> Self {
        let mut b = Self::zero(genus);
        for i in 0..genus {
            b.rows[i] = 1 << (genus - 1 - i);
        }
        b
    }

    pub fn from_rows(genus: usize, rows: &[u8]) -> Self {
        let mut b = Self::zero(genus);
        b.rows[..genus].copy_from_slice(&rows[..genus]);
        b
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        (self.rows[i] >> (self.genus - 1 - j)) & 1
    }

    pub fn is_zero(&self) -> bool {
        self.rows[..self.genus].iter().all(|&r| r == 0)
    }

    /// Matrix-vector product with a g-bit column vector.
    pub fn apply(&self, v: u8) -> u8 {
        (0..self.genus).fold(0, |acc, i| {
            acc | ((((self.rows[i] & v).count_ones() & 1) as u8) << (self.genus - 1 - i))
        })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.genus);
        for i in 0..self.genus {
            for j in 0..self.genus {
                t.rows[j] |= self.get(i, j) << (self.genus - 1 - i);
            }
        }
        t
    }

    /// The diagonal of `self · otherᵗ` as a g-bit vector.
    pub fn diag_of_product_transpose(&self, other: &BitBlock) -> u8 {
        (0..self.genus).fold(0, |acc, i| {
            let bit = (self.rows[i] & other.rows[i]).count_ones() & 1;
            acc | ((bit as u8) << (self.genus - 1 - i))
        })
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }
}

/// True iff the square bit matrix with the given row words (each `rows.len()`
/// bits wide) preserves the standard symplectic pairing over F₂.
pub fn is_symplectic(rows: &[u8]) -> bool {
    let dim = rows.len();
    if dim == 0 || dim % 2 == 1 || dim > 2 * MAX_GENUS {
        return false;
    }
    if rows.iter().any(|&r| u32::from(r) >> dim != 0) {
        return false;
    }
    let g = dim / 2;
    let column = |c: usize| -> u8 {
        (0..dim).fold(0, |acc, r| acc | (((rows[r] >> (dim - 1 - c)) & 1) << (dim - 1 - r)))
    };
    let omega = |u: u8, v: u8| -> u32 {
        let lo = (1u8 << g) - 1;
        (((u >> g) & (v & lo)).count_ones() + ((u & lo) & (v >> g)).count_ones()) & 1
    };
    let cols: Vec<u8> = (0..dim).map(column).collect();
    for a in 0..dim {
        for b in a + 1..dim {
            let expected = u32::from(b - a == g);
            if omega(cols[a], cols[b]) != expected {
                return false;
            }
        }
    }
    true
}

/// An element of Sp(2g, F₂) in block form (A B; C D).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymplecticMatF2 {
    genus: u8,
    rows: [u8; 2 * MAX_GENUS],
}

impl SymplecticMatF2 {
    pub fn from_rows(genus: usize, rows: &[u8]) -> Result<Self> {
        if !(1..=MAX_GENUS).contains(&genus) {
            return Err(Error::UnsupportedGenus(genus));
        }
        if rows.len() != 2 * genus || !is_symplectic(rows) {
            return Err(Error::Precondition("matrix is not symplectic".into()));
        }
        Ok(Self::from_rows_unchecked(genus, rows))
    }

    fn from_rows_unchecked(genus: usize, rows: &[u8]) -> Self {
        let mut r = [0u8; 2 * MAX_GENUS];
        r[..2 * genus].copy_from_slice(rows);
        Self { genus: genus as u8, rows: r }
    }

    pub fn from_blocks(a: BitBlock, b: BitBlock, c: BitBlock, d: BitBlock) -> Result<Self> {
        let g = a.genus;
        let rows: Vec<u8> = (0..g)
            .map(|i| (a.rows[i] << g) | b.rows[i])
            .chain((0..g).map(|i| (c.rows[i] << g) | d.rows[i]))
            .collect();
        Self::from_rows(g, &rows)
    }

    /// Parses 2g strings of 2g characters `'0'`/`'1'`.
    pub fn parse_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let dim = rows.len();
        let words = rows
            .iter()
            .map(|s| {
                let s = s.as_ref();
                if s.len() != dim || !s.chars().all(|c| c == '0' || c == '1') {
                    return Err(Error::Precondition(format!("bad matrix row {s:?}")));
                }
                u8::from_str_radix(s, 2).map_err(|_| Error::Precondition(format!("bad matrix row {s:?}")))
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_rows(dim / 2, &words)
    }

    pub fn identity(genus: usize) -> Self {
        let i = BitBlock::identity(genus);
        let z = BitBlock::zero(genus);
        Self::from_blocks(i, z, z, i).expect("identity is symplectic")
    }

    /// J = (0 I; I 0), the reduction of (0 1; −1 0).
    pub fn j(genus: usize) -> Self {
        let i = BitBlock::identity(genus);
        let z = BitBlock::zero(genus);
        Self::from_blocks(z, i, i, z).expect("J is symplectic")
    }

    /// (I S; 0 I) for symmetric S.
    pub fn translation(s: BitBlock) -> Result<Self> {
        if !s.is_symmetric() {
            return Err(Error::Precondition("translation block must be symmetric".into()));
        }
        let g = s.genus;
        Self::from_blocks(BitBlock::identity(g), s, BitBlock::zero(g), BitBlock::identity(g))
    }

    pub fn genus(&self) -> usize {
        self.genus as usize
    }

    pub fn rows(&self) -> &[u8] {
        &self.rows[..2 * self.genus()]
    }

    fn block(&self, row0: usize, col0: usize) -> BitBlock {
        let g = self.genus();
        let mut b = BitBlock::zero(g);
        for i in 0..g {
            let word = self.rows[row0 + i];
            b.rows[i] = if col0 == 0 { word >> g } else { word & ((1 << g) - 1) };
        }
        b
    }

    pub fn a(&self) -> BitBlock {
        self.block(0, 0)
    }
    pub fn b(&self) -> BitBlock {
        self.block(0, 1)
    }
    pub fn c(&self) -> BitBlock {
        self.block(self.genus(), 0)
    }
    pub fn d(&self) -> BitBlock {
        self.block(self.genus(), 1)
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        let dim = 2 * self.genus();
        (self.rows[i] >> (dim - 1 - j)) & 1
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.genus, other.genus);
        let dim = 2 * self.genus();
        let mut rows = [0u8; 2 * MAX_GENUS];
        for (i, row) in rows.iter_mut().enumerate().take(dim) {
            for j in 0..dim {
                if self.get(i, j) == 1 {
                    *row ^= other.rows[j];
                }
            }
        }
        Self { genus: self.genus, rows }
    }

    /// γ⁻¹ = (Dᵗ Bᵗ; Cᵗ Aᵗ) over F₂.
    pub fn inverse(&self) -> Self {
        let (a, b, c, d) = (self.a(), self.b(), self.c(), self.d());
        Self::from_blocks(d.transpose(), b.transpose(), c.transpose(), a.transpose())
            .expect("inverse of a symplectic matrix is symplectic")
    }

    /// Linear part of the action on characteristics: (D C; B A) applied to
    /// the 2g-bit vector `[m′; m″]`.
    pub fn apply_linear(&self, v: u8) -> u8 {
        let g = self.genus();
        let (top, bottom) = (v >> g, v & ((1 << g) - 1));
        let new_top = self.d().apply(top) ^ self.c().apply(bottom);
        let new_bottom = self.b().apply(top) ^ self.a().apply(bottom);
        (new_top << g) | new_bottom
    }

    /// γ·m = (D −C; −B A)(m′; m″) + (diag(C·Dᵗ); diag(A·Bᵗ)) mod 2.
    pub fn act(&self, m: Characteristic) -> Characteristic {
        assert_eq!(m.genus(), self.genus(), "genus mismatch in group action");
        let g = self.genus();
        let (a, b, c, d) = (self.a(), self.b(), self.c(), self.d());
        let shift = (c.diag_of_product_transpose(&d) << g) | a.diag_of_product_transpose(&b);
        let v = self.apply_linear(m.index() as u8) ^ shift;
        Characteristic::from_index(g, v as usize).expect("index in range")
    }

    pub fn pack(&self) -> u64 {
        let dim = 2 * self.genus();
        self.rows().iter().fold(0u64, |acc, &r| (acc << dim) | u64::from(r))
    }

    pub fn unpack(genus: usize, packed: u64) -> Self {
        let dim = 2 * genus;
        let mut rows = [0u8; 2 * MAX_GENUS];
        for i in 0..dim {
            rows[i] = ((packed >> (dim * (dim - 1 - i))) & ((1 << dim) - 1)) as u8;
        }
        Self { genus: genus as u8, rows }
    }

    pub fn row_strings(&self) -> Vec<String> {
        let dim = 2 * self.genus();
        self.rows().iter().map(|r| format!("{r:0dim$b}")).collect()
    }
}

impl fmt::Debug for SymplecticMatF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymplecticMatF2{:?}", self.row_strings())
    }
}

impl Serialize for SymplecticMatF2 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.row_strings().serialize(serializer)
    }
}

/// Every element of Sp(2g, F₂), in breadth-first discovery order from the
/// identity.
pub struct GroupEnumeration {
    genus: usize,
    elements: Vec<u64>,
    index: HashMap<u64, u32>,
}

impl GroupEnumeration {
    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, i: usize) -> SymplecticMatF2 {
        SymplecticMatF2::unpack(self.genus, self.elements[i])
    }

    pub fn position(&self, m: &SymplecticMatF2) -> Option<usize> {
        if m.genus() != self.genus {
            return None;
        }
        self.index.get(&m.pack()).map(|&i| i as usize)
    }

    pub fn contains(&self, m: &SymplecticMatF2) -> bool {
        self.position(m).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = SymplecticMatF2> + '_ {
        self.elements.iter().map(move |&p| SymplecticMatF2::unpack(self.genus, p))
    }
}

/// J together with the translations (I Eᵢⱼ; 0 I), Eᵢⱼ running over a basis of
/// the symmetric g×g matrices.
pub fn generators(genus: usize) -> Vec<SymplecticMatF2> {
    let mut gens = vec![SymplecticMatF2::j(genus)];
    for i in 0..genus {
        for j in i..genus {
            let mut s = BitBlock::zero(genus);
            s.rows[i] |= 1 << (genus - 1 - j);
            s.rows[j] |= 1 << (genus - 1 - i);
            gens.push(SymplecticMatF2::translation(s).expect("symmetric"));
        }
    }
    gens
}

/// Enumerates Sp(2g, F₂) by closure of [`generators`].
pub fn enumerate_group(genus: usize) -> Result<GroupEnumeration> {
    if !(1..=MAX_GENUS).contains(&genus) {
        return Err(Error::UnsupportedGenus(genus));
    }
    let expected = [6usize, 720, 1_451_520][genus - 1];
    let gens = generators(genus);
    let id = SymplecticMatF2::identity(genus);
    let mut elements = Vec::with_capacity(expected);
    let mut index = HashMap::with_capacity(2 * expected);
    elements.push(id.pack());
    index.insert(id.pack(), 0u32);
    let mut head = 0;
    while head < elements.len() {
        let x = SymplecticMatF2::unpack(genus, elements[head]);
        head += 1;
        for gen in &gens {
            let y = x.mul(gen).pack();
            if let std::collections::hash_map::Entry::Vacant(e) = index.entry(y) {
                e.insert(elements.len() as u32);
                elements.push(y);
            }
        }
    }
    Ok(GroupEnumeration { genus, elements, index })
}

/// Sp(6, F₂), built once per process.
pub fn sp6() -> &'static GroupEnumeration {
    static GROUP: OnceLock<GroupEnumeration> = OnceLock::new();
    GROUP.get_or_init(|| enumerate_group(3).expect("genus 3 is supported"))
}

/// Bit mask (over the 2^{2g} vectors) of the image of the Lagrangian
/// {m′ = 0} under the linear action.
pub fn image_of_vertical_lagrangian(gamma: &SymplecticMatF2) -> u64 {
    let g = gamma.genus();
    (0u8..1 << g).fold(0u64, |acc, bottom| acc | 1u64 << gamma.apply_linear(bottom))
}

/// Representatives of the left cosets of the parabolic subgroup {C = 0} in
/// Sp(6, F₂), one per Lagrangian subspace, in group enumeration order (the
/// identity first).
pub fn parabolic_cosets(genus: usize) -> Result<Vec<SymplecticMatF2>> {
    if genus != 3 {
        return Err(Error::UnsupportedGenus(genus));
    }
    let mut seen = std::collections::HashSet::new();
    Ok(sp6()
        .iter()
        .filter(|gamma| seen.insert(image_of_vertical_lagrangian(gamma)))
        .collect())
}

pub fn is_parabolic(gamma: &SymplecticMatF2) -> bool {
    gamma.c().is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characteristics::{enumerate_characteristics, ParityFilter};

    #[test]
    fn symplectic_examples() {
        for g in 1..=3 {
            assert!(is_symplectic(SymplecticMatF2::identity(g).rows()));
            assert!(is_symplectic(SymplecticMatF2::j(g).rows()));
            let mut rows = SymplecticMatF2::identity(g).rows().to_vec();
            rows[0] = 0;
            assert!(!is_symplectic(&rows));
        }
        assert!(!is_symplectic(&[1, 0, 0]));
        assert!(SymplecticMatF2::parse_rows(&["1100", "0100", "0010", "0001"]).is_err());
    }

    #[test]
    fn identity_and_j_actions() {
        for idx in 0..64 {
            let m = Characteristic::from_index(3, idx).unwrap();
            assert_eq!(SymplecticMatF2::identity(3).act(m), m);
            let swapped = SymplecticMatF2::j(3).act(m);
            assert_eq!((swapped.top(), swapped.bottom()), (m.bottom(), m.top()));
        }
    }

    #[test]
    fn small_groups() {
        assert_eq!(enumerate_group(1).unwrap().len(), 6);
        let g2 = enumerate_group(2).unwrap();
        // |Sp(4, F₂)| = 2^4 (2^2 − 1)(2^4 − 1)
        assert_eq!(g2.len(), 16 * 3 * 15);
        assert!(enumerate_group(4).is_err());
    }

    #[test]
    fn pack_round_trip_and_inverse() {
        let g2 = enumerate_group(2).unwrap();
        for x in g2.iter() {
            assert_eq!(SymplecticMatF2::unpack(2, x.pack()), x);
            assert_eq!(x.mul(&x.inverse()), SymplecticMatF2::identity(2));
            assert!(is_symplectic(x.rows()));
        }
    }

    #[test]
    fn genus2_action_preserves_parity() {
        let g2 = enumerate_group(2).unwrap();
        let all = enumerate_characteristics(2, ParityFilter::All).unwrap();
        for x in g2.iter() {
            for m in &all {
                assert_eq!(x.act(m).parity(), m.parity());
            }
        }
    }

    #[test]
    fn serializes_rows() {
        let j = SymplecticMatF2::j(1);
        assert_eq!(serde_json::to_string(&j).unwrap(), r#"["01","10"]"#);
        assert_eq!(SymplecticMatF2::parse_rows(&["01", "10"]).unwrap(), j);
    }
}
