use crate::catcore::LatWidths;
use crate::smooth::IndicatorConfig;
use crate::{Error, Result, MAX_P};

/// Robust first-order flux used by the fallback ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LowOrderKind {
    #[default]
    Rusanov,
    LaxFriedrichs,
    Hll,
}

impl LowOrderKind {
    pub fn name(self) -> &'static str {
        match self {
            LowOrderKind::Rusanov => "rusanov",
            LowOrderKind::LaxFriedrichs => "lax_friedrichs",
            LowOrderKind::Hll => "hll",
        }
    }
}

impl std::str::FromStr for LowOrderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rusanov" => Ok(LowOrderKind::Rusanov),
            "lax_friedrichs" | "lf" => Ok(LowOrderKind::LaxFriedrichs),
            "hll" => Ok(LowOrderKind::Hll),
            other => Err(Error::InvalidArgument(format!("unknown low-order flux '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SchemeKind {
    FirstOrder,
    FlCat2,
    #[default]
    Acat,
    /// CAT2P with the fixed half-width `P` at every interface.
    CatFixed,
    /// LAT of order `2P`.
    Lat,
}

impl SchemeKind {
    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::FirstOrder => "lo",
            SchemeKind::FlCat2 => "flcat2",
            SchemeKind::Acat => "acat",
            SchemeKind::CatFixed => "cat",
            SchemeKind::Lat => "lat",
        }
    }
}

impl std::str::FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lo" | "first_order" => Ok(SchemeKind::FirstOrder),
            "flcat2" => Ok(SchemeKind::FlCat2),
            "acat" => Ok(SchemeKind::Acat),
            "cat" | "cat_fixed" => Ok(SchemeKind::CatFixed),
            "lat" => Ok(SchemeKind::Lat),
            other => Err(Error::InvalidArgument(format!("unknown scheme '{other}'"))),
        }
    }
}

/// Numerical flux family and its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeSpec {
    pub kind: SchemeKind,
    /// Maximum half-width `P`.
    pub max_p: usize,
    pub low_order: LowOrderKind,
    pub indicator: IndicatorConfig,
}

impl Default for SchemeSpec {
    fn default() -> Self {
        Self::acat(2)
    }
}

impl SchemeSpec {
    pub fn new(kind: SchemeKind, max_p: usize) -> Self {
        Self { kind, max_p, low_order: LowOrderKind::default(), indicator: IndicatorConfig::default() }
    }

    pub fn acat(max_p: usize) -> Self {
        Self::new(SchemeKind::Acat, max_p)
    }

    pub fn cat(p: usize) -> Self {
        Self::new(SchemeKind::CatFixed, p)
    }

    pub fn flcat2() -> Self {
        Self::new(SchemeKind::FlCat2, 1)
    }

    pub fn first_order(low_order: LowOrderKind) -> Self {
        Self { low_order, ..Self::new(SchemeKind::FirstOrder, 1) }
    }

    pub fn lat(max_p: usize) -> Self {
        Self::new(SchemeKind::Lat, max_p)
    }

    /// ACAT of order `order = 2P`; `ACAT2` is the FL-CAT2 scheme.
    pub fn acat_order(order: usize) -> Result<Self> {
        if order < 2 || order % 2 != 0 {
            return Err(Error::InvalidArgument(format!("ACAT order must be even and >= 2, got {order}")));
        }
        let spec = if order == 2 { Self::flcat2() } else { Self::acat(order / 2) };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_low_order(mut self, low_order: LowOrderKind) -> Self {
        self.low_order = low_order;
        self
    }

    pub fn with_indicator(mut self, indicator: IndicatorConfig) -> Self {
        self.indicator = indicator;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_p == 0 || self.max_p > MAX_P {
            return Err(Error::InvalidArgument(format!("P must lie in 1..={MAX_P}, got {}", self.max_p)));
        }
        if self.kind == SchemeKind::Acat && self.max_p < 2 {
            return Err(Error::InvalidArgument("acat requires P >= 2 (use flcat2 for ACAT2)".into()));
        }
        self.indicator.validate()
    }

    pub(crate) fn lat_widths(&self) -> Result<LatWidths> {
        LatWidths::for_order(2 * self.max_p)
    }

    /// Ghost cells needed on each side.
    pub fn halo(&self) -> usize {
        match self.kind {
            SchemeKind::FirstOrder => 1,
            SchemeKind::FlCat2 => 2,
            SchemeKind::Acat => self.max_p.max(2),
            SchemeKind::CatFixed => self.max_p,
            SchemeKind::Lat => self.lat_widths().map(|w| w.halo()).unwrap_or(self.max_p),
        }
    }

    /// Formal order of accuracy on smooth data.
    pub fn order(&self) -> usize {
        match self.kind {
            SchemeKind::FirstOrder => 1,
            SchemeKind::FlCat2 => 2,
            _ => 2 * self.max_p,
        }
    }

    /// Short label such as `ACAT4`, `CAT6`, `FL-CAT2`, `LO-rusanov`.
    pub fn label(&self) -> String {
        match self.kind {
            SchemeKind::FirstOrder => format!("LO-{}", self.low_order.name()),
            SchemeKind::FlCat2 => "FL-CAT2".into(),
            SchemeKind::Acat => format!("ACAT{}", 2 * self.max_p),
            SchemeKind::CatFixed => format!("CAT{}", 2 * self.max_p),
            SchemeKind::Lat => format!("LAT{}", 2 * self.max_p),
        }
    }
}
