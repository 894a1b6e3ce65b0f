//! Parameter blocks of the rank-one groups SO₀(1,n), SU(1,n), Sp(1,n), F₄₍₋₂₀₎
//! and the position of a spectral parameter relative to the strip |Re s| < m/2.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::Signed;

use crate::error::{domain, Error, Result};

/// Tolerance used when a float spectral parameter is compared with the strip boundary.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupFamily {
    SO0,
    SU,
    Sp,
    F4,
}

impl GroupFamily {
    /// Real dimension of the underlying division algebra.
    pub fn algebra_dimension(self) -> u32 {
        match self {
            Self::SO0 => 1,
            Self::SU => 2,
            Self::Sp => 4,
            Self::F4 => 8,
        }
    }
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Self::SO0 => "SO0",
            Self::SU => "SU",
            Self::Sp => "Sp",
            Self::F4 => "F4",
        };
        f.write_str(name)
    }
}

impl FromStr for GroupFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "so0" | "so" => Ok(Self::SO0),
            "su" => Ok(Self::SU),
            "sp" => Ok(Self::Sp),
            "f4" => Ok(Self::F4),
            _ => Err(domain(format!("unknown group family '{s}'"))),
        }
    }
}

/// Dimensions attached to a rank-one group: `p` and `q` are the root
/// multiplicities, `m = p + 2q` and `m0 = p + 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RankOneGroup {
    pub family: GroupFamily,
    pub n: u32,
    pub p: u32,
    pub q: u32,
    pub m: u32,
    pub m0: u32,
}

/// Parameter block for `family` with rank parameter `n`. The exceptional
/// family has a single member and ignores `n`.
pub fn params_for(family: GroupFamily, n: u32) -> Result<RankOneGroup> {
    let n = match family {
        GroupFamily::F4 => 2,
        _ if n < 2 => return Err(domain(format!("{family}(1,n) needs n >= 2, got {n}"))),
        _ => n,
    };
    let d = family.algebra_dimension();
    let p = (n - 1) * d;
    let q = d - 1;
    Ok(RankOneGroup {
        family,
        n,
        p,
        q,
        m: p + 2 * q,
        m0: p + 2,
    })
}

impl RankOneGroup {
    pub fn lorentz(n: u32) -> Result<Self> {
        params_for(GroupFamily::SO0, n)
    }

    pub fn f4() -> Self {
        params_for(GroupFamily::F4, 2).expect("F4 parameters are fixed")
    }

    pub fn half_m(&self) -> f64 {
        0.5 * self.m as f64
    }
}

impl fmt::Display for RankOneGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            GroupFamily::F4 => write!(f, "F4(-20)"),
            fam => write!(f, "{fam}(1,{})", self.n),
        }
    }
}

/// Spectral parameter `s = sigma + i t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParameter {
    pub sigma: f64,
    pub t: f64,
}

impl SpectralParameter {
    pub fn new(sigma: f64, t: f64) -> Self {
        Self { sigma, t }
    }

    pub fn real(sigma: f64) -> Self {
        Self { sigma, t: 0.0 }
    }

    pub fn imaginary(t: f64) -> Self {
        Self { sigma: 0.0, t }
    }

    pub fn s(&self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.sigma, -self.t)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.sigma, -self.t)
    }

    pub fn is_finite(&self) -> bool {
        self.sigma.is_finite() && self.t.is_finite()
    }
}

impl From<Complex64> for SpectralParameter {
    fn from(z: Complex64) -> Self {
        Self::new(z.re, z.im)
    }
}

impl fmt::Display for SpectralParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.s())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StripPosition {
    Interior,
    BoundaryConstant,
    BoundaryNontrivial,
    Exterior,
}

impl StripPosition {
    /// Whether the spherical function is a completely bounded multiplier.
    pub fn is_multiplier(self) -> bool {
        matches!(self, Self::Interior | Self::BoundaryConstant)
    }
}

/// Position of `s` relative to the strip `|Re s| < m/2`, with boundary
/// comparisons made to [`BOUNDARY_TOLERANCE`].
pub fn classify(s: SpectralParameter, m: u32) -> StripPosition {
    let half = 0.5 * m as f64;
    let offset = s.sigma.abs() - half;
    if offset.abs() <= BOUNDARY_TOLERANCE {
        if s.t.abs() <= BOUNDARY_TOLERANCE {
            StripPosition::BoundaryConstant
        } else {
            StripPosition::BoundaryNontrivial
        }
    } else if offset < 0.0 {
        StripPosition::Interior
    } else {
        StripPosition::Exterior
    }
}

/// Exact classification for rational `sigma` and `t`.
pub fn classify_exact(sigma: &Ratio<i64>, t: &Ratio<i64>, m: u32) -> StripPosition {
    let half = Ratio::new(i64::from(m), 2);
    let abs_sigma = sigma.abs();
    if abs_sigma < half {
        StripPosition::Interior
    } else if abs_sigma == half {
        if *t.numer() == 0 {
            StripPosition::BoundaryConstant
        } else {
            StripPosition::BoundaryNontrivial
        }
    } else {
        StripPosition::Exterior
    }
}
