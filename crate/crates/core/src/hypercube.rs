//! Vertex algebra for `Q_n` and `FQ_n`.
//!
//! A vertex `x_1 x_2 … x_n` is stored as its decimal value together with the
//! dimension; bit `x_i` lives at machine bit `n - i`, so `x_1` is the most
//! significant bit. Adjacency is implicit: two vertices of `FQ_n` are adjacent
//! when they differ in exactly one bit (a dimension edge) or in every bit (the
//! complementary edge, dimension 0).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};

/// Largest dimension a [`VertexLabel`] can carry.
pub const MAX_DIM: u32 = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexLabel {
    n: u32,
    value: u64,
}

impl VertexLabel {
    pub fn new(n: u32, value: u64) -> Result<Self> {
        check_range("dimension", n, 1, MAX_DIM)?;
        if value >> n != 0 {
            return Err(Error::range("vertex value", value, 0, (1i64 << n) - 1));
        }
        Ok(VertexLabel { n, value })
    }

    /// Builds a label from a slice of bits `x_1 … x_n`.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let n = u32::try_from(bits.len()).unwrap_or(u32::MAX);
        check_range("dimension", n, 1, MAX_DIM)?;
        let mut value = 0u64;
        for &b in bits {
            if b > 1 {
                return Err(Error::InvalidBits(format!("{bits:?}")));
            }
            value = (value << 1) | b as u64;
        }
        Ok(VertexLabel { n, value })
    }

    pub(crate) fn new_unchecked(n: u32, value: u64) -> Self {
        debug_assert!((1..=MAX_DIM).contains(&n) && value >> n == 0);
        VertexLabel { n, value }
    }

    #[inline]
    pub fn dim(&self) -> u32 {
        self.n
    }

    /// `D(x) = Σ 2^{n-i} x_i`.
    #[inline]
    pub fn decimal(&self) -> u64 {
        self.value
    }

    /// `θ_i(x) = x_i` for `1 <= i <= n`.
    pub fn bit(&self, i: u32) -> u8 {
        assert!(i >= 1 && i <= self.n, "bit index {i} outside 1..={}", self.n);
        ((self.value >> (self.n - i)) & 1) as u8
    }

    pub fn bits(&self) -> Vec<u8> {
        (1..=self.n).map(|i| self.bit(i)).collect()
    }

    #[inline]
    fn mask(&self) -> u64 {
        mask(self.n)
    }

    pub fn complement(&self) -> Self {
        VertexLabel {
            n: self.n,
            value: !self.value & self.mask(),
        }
    }

    /// Flips bit `x_t`, `1 <= t <= n`.
    pub fn flip(&self, t: u32) -> Self {
        assert!(t >= 1 && t <= self.n, "flip index {t} outside 1..={}", self.n);
        VertexLabel {
            n: self.n,
            value: self.value ^ (1u64 << (self.n - t)),
        }
    }

    /// Neighbor across the edge of dimension `dim` (0 is the complementary edge).
    pub fn across(&self, dim: u32) -> Self {
        if dim == 0 {
            self.complement()
        } else {
            self.flip(dim)
        }
    }

    pub fn hamming(&self, other: &Self) -> Result<u32> {
        same_dim(self, other)?;
        Ok((self.value ^ other.value).count_ones())
    }

    /// `I(u, v)`: the number of positions where the labels agree.
    pub fn agreement(&self, other: &Self) -> Result<u32> {
        Ok(self.n - self.hamming(other)?)
    }

    /// `Dim(uv)`: 0 for the complementary edge, otherwise the unique differing index.
    pub fn edge_dim(&self, other: &Self) -> Result<u32> {
        let agree = self.agreement(other)?;
        if agree == 0 {
            Ok(0)
        } else if agree + 1 == self.n {
            let diff = self.value ^ other.value;
            Ok(self.n - diff.trailing_zeros())
        } else {
            Err(Error::NotAnEdge {
                u: self.to_string(),
                v: other.to_string(),
            })
        }
    }

    pub fn is_fq_adjacent(&self, other: &Self) -> bool {
        self.edge_dim(other).is_ok() && self != other
    }

    /// The `n` single-bit flips followed by the complement.
    pub fn fq_neighbors(&self) -> Result<Vec<VertexLabel>> {
        check_range("FQ_n dimension", self.n, 2, MAX_DIM)?;
        let mut out: Vec<_> = (1..=self.n).map(|t| self.flip(t)).collect();
        out.push(self.complement());
        Ok(out)
    }

    /// `μ`: drops the first `m` bits and keeps the suffix `x_{m+1} … x_n`.
    pub fn subcube_project(&self, m: u32) -> Result<VertexLabel> {
        if self.n < 2 {
            return Err(Error::range("prefix length", m, 1, 0));
        }
        check_range("prefix length", m, 1, self.n - 1)?;
        let k = self.n - m;
        Ok(VertexLabel {
            n: k,
            value: self.value & mask(k),
        })
    }

    /// The first `m` bits as a label of dimension `m`.
    pub fn prefix(&self, m: u32) -> Result<VertexLabel> {
        check_range("prefix length", m, 1, self.n)?;
        Ok(VertexLabel {
            n: m,
            value: self.value >> (self.n - m),
        })
    }

    pub fn parity(&self) -> u32 {
        self.value.count_ones() & 1
    }
}

#[inline]
pub(crate) fn mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn same_dim(a: &VertexLabel, b: &VertexLabel) -> Result<()> {
    if a.n != b.n {
        Err(Error::DimensionMismatch {
            left: a.n,
            right: b.n,
        })
    } else {
        Ok(())
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.value, width = self.n as usize)
    }
}

impl FromStr for VertexLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .bytes()
            .map(|b| match b {
                b'0' => Ok(0),
                b'1' => Ok(1),
                _ => Err(Error::InvalidBits(s.to_string())),
            })
            .collect::<Result<Vec<u8>>>()?;
        VertexLabel::from_bits(&bits)
    }
}

impl Serialize for VertexLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An edge of `FQ_n`, stored with `u < v` by decimal value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRef {
    u: VertexLabel,
    v: VertexLabel,
    dim: u32,
}

impl EdgeRef {
    pub fn new(a: VertexLabel, b: VertexLabel) -> Result<Self> {
        if a == b {
            return Err(Error::IdenticalEndpoints(a.to_string()));
        }
        let dim = a.edge_dim(&b)?;
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Ok(EdgeRef { u, v, dim })
    }

    /// The `Q_n` edge from `x` across bit `t`; unlike [`EdgeRef::new`] this keeps
    /// `dim = 1` for the single edge of `Q_1`.
    pub fn dimension_edge(x: VertexLabel, t: u32) -> Self {
        let y = x.flip(t);
        let (u, v) = if x < y { (x, y) } else { (y, x) };
        EdgeRef { u, v, dim: t }
    }

    pub fn u(&self) -> VertexLabel {
        self.u
    }

    pub fn v(&self) -> VertexLabel {
        self.v
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn is_complementary(&self) -> bool {
        self.dim == 0
    }

    pub fn touches(&self, other: &EdgeRef) -> bool {
        self.u == other.u || self.u == other.v || self.v == other.u || self.v == other.v
    }
}

impl Serialize for EdgeRef {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("EdgeRef", 3)?;
        st.serialize_field("u", &self.u)?;
        st.serialize_field("v", &self.v)?;
        st.serialize_field("dim", &self.dim)?;
        st.end()
    }
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{} (dim {})", self.u, self.v, self.dim)
    }
}

/// All `2^n` vertices in decimal order.
pub fn vertices(n: u32) -> Result<impl Iterator<Item = VertexLabel>> {
    check_range("dimension", n, 1, MAX_DIM)?;
    Ok((0..1u64 << n).map(move |x| VertexLabel::new_unchecked(n, x)))
}

/// Dimension edges of `Q_n`, ordered by dimension then by lower endpoint.
pub fn q_edges(n: u32) -> Result<Vec<EdgeRef>> {
    check_range("dimension", n, 1, MAX_DIM)?;
    let mut out = Vec::with_capacity(n as usize * (1usize << (n - 1)));
    for t in 1..=n {
        let bit = 1u64 << (n - t);
        for x in (0..1u64 << n).filter(|x| x & bit == 0) {
            out.push(EdgeRef {
                u: VertexLabel::new_unchecked(n, x),
                v: VertexLabel::new_unchecked(n, x | bit),
                dim: t,
            });
        }
    }
    Ok(out)
}

/// All edges of `FQ_n`: the complementary edges first, then the `Q_n` edges.
pub fn fq_edges(n: u32) -> Result<Vec<EdgeRef>> {
    check_range("FQ_n dimension", n, 2, MAX_DIM)?;
    let half = 1u64 << (n - 1);
    let mut out: Vec<EdgeRef> = (0..half)
        .map(|x| {
            let u = VertexLabel::new_unchecked(n, x);
            EdgeRef {
                u,
                v: u.complement(),
                dim: 0,
            }
        })
        .collect();
    out.extend(q_edges(n)?);
    Ok(out)
}

/// `F^n_{x_1…x_m}`: the `2^{n-m}` vertices extending `prefix`.
pub fn subcube_vertices(n: u32, prefix: &VertexLabel) -> Result<Vec<VertexLabel>> {
    check_range("dimension", n, 2, MAX_DIM)?;
    let m = prefix.dim();
    check_range("prefix length", m, 1, n - 1)?;
    let k = n - m;
    let base = prefix.decimal() << k;
    Ok((0..1u64 << k)
        .map(|s| VertexLabel::new_unchecked(n, base | s))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsomorphismCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Structural checks of `FQ_2 ≅ K_4` and `FQ_3 ≅ K_{4,4}`.
pub fn check_small_isomorphisms() -> Vec<IsomorphismCheck> {
    let mut out = Vec::new();

    let v2: Vec<_> = vertices(2).expect("n=2").collect();
    let e2 = fq_edges(2).expect("n=2").len();
    let complete = v2
        .iter()
        .enumerate()
        .all(|(i, a)| v2[i + 1..].iter().all(|b| a.is_fq_adjacent(b)));
    out.push(IsomorphismCheck {
        name: "FQ_2 ~ K_4".into(),
        passed: complete && e2 == 6,
        detail: format!("{e2} edges, every pair adjacent: {complete}"),
    });

    let v3: Vec<_> = vertices(3).expect("n=3").collect();
    let (even, odd): (Vec<VertexLabel>, Vec<VertexLabel>) = v3.iter().partition(|v| v.parity() == 0);
    let cross = even
        .iter()
        .flat_map(|a| odd.iter().map(move |b| (a, b)))
        .filter(|(a, b)| a.is_fq_adjacent(b))
        .count();
    let intra = [&even, &odd]
        .iter()
        .map(|class| {
            class
                .iter()
                .enumerate()
                .flat_map(|(i, a)| class[i + 1..].iter().map(move |b| (a, b)))
                .filter(|(a, b)| a.is_fq_adjacent(b))
                .count()
        })
        .sum::<usize>();
    let e3 = fq_edges(3).expect("n=3").len();
    out.push(IsomorphismCheck {
        name: "FQ_3 ~ K_{4,4}".into(),
        passed: even.len() == 4 && odd.len() == 4 && cross == 16 && intra == 0 && e3 == 16,
        detail: format!(
            "parity classes {}+{}, {cross} cross edges, {intra} intra-class edges",
            even.len(),
            odd.len()
        ),
    });
    out
}
