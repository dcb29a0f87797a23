use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Where a trace sits relative to the support point `c`.
///
/// Normal traces use Lebesgue measure on an interval `J` that contains `c` in
/// its interior, ends at `c`, or starts at `c`. The Dixmier traces are the
/// non-normal traces seeing the right (`+`) or left (`-`) side of `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TraceSpec {
    Interior,
    Terminal,
    Initial,
    DixmierPlus,
    DixmierMinus,
}

impl TraceSpec {
    pub const NORMAL: [TraceSpec; 3] =
        [TraceSpec::Interior, TraceSpec::Terminal, TraceSpec::Initial];
    pub const DIXMIER: [TraceSpec; 2] = [TraceSpec::DixmierPlus, TraceSpec::DixmierMinus];

    pub fn is_normal(self) -> bool {
        !self.is_dixmier()
    }

    pub fn is_dixmier(self) -> bool {
        matches!(self, TraceSpec::DixmierPlus | TraceSpec::DixmierMinus)
    }

    pub fn name(self) -> &'static str {
        match self {
            TraceSpec::Interior => "interior",
            TraceSpec::Terminal => "terminal",
            TraceSpec::Initial => "initial",
            TraceSpec::DixmierPlus => "dixmier+",
            TraceSpec::DixmierMinus => "dixmier-",
        }
    }
}

impl fmt::Display for TraceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TraceSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "interior" => Ok(TraceSpec::Interior),
            "terminal" => Ok(TraceSpec::Terminal),
            "initial" => Ok(TraceSpec::Initial),
            "dixmier+" | "dixmier-plus" => Ok(TraceSpec::DixmierPlus),
            "dixmier-" | "dixmier-minus" => Ok(TraceSpec::DixmierMinus),
            other => Err(Error::UnsupportedTrace(other.to_string())),
        }
    }
}
