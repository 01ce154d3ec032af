//! Integer divisor classes on P², Hirzebruch surfaces and their blowups.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseSurface {
    ProjectivePlane,
    Hirzebruch(u32),
}

impl BaseSurface {
    /// K² of the bare surface.
    pub fn canonical_degree(self) -> i64 {
        match self {
            BaseSurface::ProjectivePlane => 9,
            BaseSurface::Hirzebruch(_) => 8,
        }
    }

    pub fn n(self) -> Option<i64> {
        match self {
            BaseSurface::ProjectivePlane => None,
            BaseSurface::Hirzebruch(n) => Some(n as i64),
        }
    }
}

impl fmt::Display for BaseSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseSurface::ProjectivePlane => write!(f, "P2"),
            BaseSurface::Hirzebruch(n) => write!(f, "F{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Smooth,
    Nodal,
    Cuspidal,
}

impl CurveKind {
    pub fn genus(self) -> i64 {
        match self {
            CurveKind::Smooth => 0,
            _ => 1,
        }
    }
}

/// A named rational curve on the base surface with its multiplicity in E.
///
/// A coefficient of 0 marks an auxiliary curve that only carries incidences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicCurve {
    pub id: String,
    pub cls: DivClass,
    pub kind: CurveKind,
    pub coefficient: i64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("class has {got} exceptional coordinates but the surface only has {max} blowups")]
    Mismatch { got: usize, max: usize },
    #[error("class on P2 carries a nonzero second base coordinate")]
    BadPlaneClass,
    #[error("nefness is only decided on the base surface")]
    NotOnBase,
    #[error("adjunction gives a non-integral genus for {0}")]
    NonIntegralGenus(String),
}

/// A class `h + Σ exc[i]·e_i`.
///
/// On P² the base part is `d·l` stored as `[d, 0]`; on Fₙ it is `a·σ + b·l`
/// stored as `[a, b]`. The `e_i` are total transforms of the exceptional
/// curves, so `exc[i]` is minus the multiplicity at the i-th point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct DivClass {
    pub base: [i64; 2],
    pub exc: Vec<i64>,
}

impl DivClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn plane(d: i64) -> Self {
        DivClass { base: [d, 0], exc: Vec::new() }
    }

    pub fn hirz(a: i64, b: i64) -> Self {
        DivClass { base: [a, b], exc: Vec::new() }
    }

    /// The total transform of the i-th exceptional curve.
    pub fn e(i: usize) -> Self {
        let mut exc = vec![0; i + 1];
        exc[i] = 1;
        DivClass { base: [0, 0], exc }
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.exc.get(i).copied().unwrap_or(0)
    }

    pub fn is_base(&self) -> bool {
        self.exc.iter().all(|&m| m == 0)
    }

    /// Drops the exceptional part.
    pub fn base_part(&self) -> Self {
        DivClass { base: self.base, exc: Vec::new() }
    }

    fn trimmed(mut self) -> Self {
        while self.exc.last() == Some(&0) {
            self.exc.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.base == [0, 0] && self.is_base()
    }
}

impl Add for &DivClass {
    type Output = DivClass;
    fn add(self, rhs: &DivClass) -> DivClass {
        let len = self.exc.len().max(rhs.exc.len());
        let exc = (0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        DivClass { base: [self.base[0] + rhs.base[0], self.base[1] + rhs.base[1]], exc }.trimmed()
    }
}

impl Add for DivClass {
    type Output = DivClass;
    fn add(self, rhs: DivClass) -> DivClass {
        &self + &rhs
    }
}

impl Sub for &DivClass {
    type Output = DivClass;
    fn sub(self, rhs: &DivClass) -> DivClass {
        self + &(-rhs)
    }
}

impl Sub for DivClass {
    type Output = DivClass;
    fn sub(self, rhs: DivClass) -> DivClass {
        &self - &rhs
    }
}

impl Neg for &DivClass {
    type Output = DivClass;
    fn neg(self) -> DivClass {
        DivClass { base: [-self.base[0], -self.base[1]], exc: self.exc.iter().map(|m| -m).collect() }
    }
}

impl Neg for DivClass {
    type Output = DivClass;
    fn neg(self) -> DivClass {
        -&self
    }
}

impl Mul<&DivClass> for i64 {
    type Output = DivClass;
    fn mul(self, rhs: &DivClass) -> DivClass {
        DivClass { base: [self * rhs.base[0], self * rhs.base[1]], exc: rhs.exc.iter().map(|m| self * m).collect() }
            .trimmed()
    }
}

impl Mul<DivClass> for i64 {
    type Output = DivClass;
    fn mul(self, rhs: DivClass) -> DivClass {
        self * &rhs
    }
}

/// The Picard lattice of a base surface blown up `blowups` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice {
    pub base: BaseSurface,
    pub blowups: usize,
}

impl Lattice {
    pub fn new(base: BaseSurface, blowups: usize) -> Self {
        Lattice { base, blowups }
    }

    fn check(&self, c: &DivClass) -> Result<(), LatticeError> {
        if c.exc.len() > self.blowups {
            return Err(LatticeError::Mismatch { got: c.exc.len(), max: self.blowups });
        }
        if self.base == BaseSurface::ProjectivePlane && c.base[1] != 0 {
            return Err(LatticeError::BadPlaneClass);
        }
        Ok(())
    }

    pub fn intersection(&self, a: &DivClass, b: &DivClass) -> Result<i64, LatticeError> {
        self.check(a)?;
        self.check(b)?;
        let base = match self.base {
            BaseSurface::ProjectivePlane => a.base[0] * b.base[0],
            BaseSurface::Hirzebruch(n) => {
                let n = n as i64;
                a.base[0] * b.base[1] + a.base[1] * b.base[0] - n * a.base[0] * b.base[0]
            }
        };
        let exc: i64 = a.exc.iter().zip(&b.exc).map(|(x, y)| x * y).sum();
        Ok(base - exc)
    }

    pub fn self_intersection(&self, a: &DivClass) -> Result<i64, LatticeError> {
        self.intersection(a, a)
    }

    pub fn canonical_class(&self) -> DivClass {
        let base = match self.base {
            BaseSurface::ProjectivePlane => [-3, 0],
            BaseSurface::Hirzebruch(n) => [-2, -(n as i64) - 2],
        };
        DivClass { base, exc: vec![1; self.blowups] }
    }

    pub fn is_nef_on_base(&self, c: &DivClass) -> Result<bool, LatticeError> {
        self.check(c)?;
        if !c.is_base() {
            return Err(LatticeError::NotOnBase);
        }
        Ok(match self.base {
            BaseSurface::ProjectivePlane => c.base[0] >= 0,
            BaseSurface::Hirzebruch(n) => c.base[0] >= 0 && c.base[1] - (n as i64) * c.base[0] >= 0,
        })
    }

    /// `(C² + C·K)/2 + 1`.
    pub fn arithmetic_genus(&self, c: &DivClass) -> Result<i64, LatticeError> {
        let k = self.canonical_class();
        let twice = self.intersection(c, c)? + self.intersection(c, &k)?;
        if twice % 2 != 0 {
            return Err(LatticeError::NonIntegralGenus(self.format(c)));
        }
        Ok(twice / 2 + 1)
    }

    pub fn format(&self, c: &DivClass) -> String {
        let mut out = match self.base {
            BaseSurface::ProjectivePlane => format!("{}l", c.base[0]),
            BaseSurface::Hirzebruch(_) => format!("{}s+{}l", c.base[0], c.base[1]),
        };
        for (i, m) in c.exc.iter().enumerate() {
            if *m != 0 {
                out.push_str(&format!("{:+}e{}", m, i + 1));
            }
        }
        out
    }
}
