use crate::geometry::ProblemInstance;

/// Which achievability result a region describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Expected-stopping-time constraint: hyperbola `E0 E1 <= D_rev D_fwd`.
    Theorem1,
    /// Stopping-probability constraint: `E0 <= D_rev`, `E1 <= D_fwd`.
    Theorem2,
    /// Error-probability constraint: `E0 <= D_fwd`, `E1 <= D_rev`.
    Theorem3,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Theorem1 => "theorem1",
            Regime::Theorem2 => "theorem2",
            Regime::Theorem3 => "theorem3",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    /// `{(e0, e1) : e0 * e1 <= product}`.
    Hyperbola { product: f64 },
    /// `{(e0, e1) : e0 <= e0_max, e1 <= e1_max}`.
    Rectangle { e0_max: f64, e1_max: f64 },
}

impl Region {
    /// Membership after scaling the region by `1 + inflate` along each axis.
    pub fn contains(&self, e0: f64, e1: f64, inflate: f64) -> bool {
        let s = 1.0 + inflate;
        match *self {
            Region::Hyperbola { product } => e0.max(0.0) * e1.max(0.0) <= product * s * s,
            Region::Rectangle { e0_max, e1_max } => e0 <= e0_max * s && e1 <= e1_max * s,
        }
    }
}

pub fn exponent_region(instance: &ProblemInstance, regime: Regime) -> Region {
    let (fwd, rev) = (instance.d_fwd(), instance.d_rev());
    match regime {
        Regime::Theorem1 => Region::Hyperbola { product: rev * fwd },
        Regime::Theorem2 => Region::Rectangle { e0_max: rev, e1_max: fwd },
        Regime::Theorem3 => Region::Rectangle { e0_max: fwd, e1_max: rev },
    }
}
