use std::fmt;
use std::str::FromStr;

/// Sampling and recovery scheme identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    /// Brick-wall AF, uniform sampling, spline recovery.
    UAfFftSp,
    /// Brick-wall AF, uniform sampling, low-pass recovery.
    UAfFft,
    /// FIR AF, uniform sampling, spline recovery.
    UAfFirSp,
    /// FIR AF, uniform sampling, low-pass recovery.
    UAfFir,
    /// IIR AF, uniform sampling, spline recovery.
    UAfIirSp,
    /// Random sampling, IMATI recovery.
    RImati,
    /// Random sampling, spline recovery.
    RSp,
    /// Random sampling, IMAT recovery.
    RImat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AntiAlias {
    FftBrickwall,
    Fir,
    Iir,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recovery {
    Spline,
    Lowpass,
    Imat,
    Imati,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::UAfFftSp,
        Method::UAfFft,
        Method::UAfFirSp,
        Method::UAfFir,
        Method::UAfIirSp,
        Method::RImati,
        Method::RSp,
        Method::RImat,
    ];

    /// The six schemes of the original comparison table.
    pub const TABLE: [Method; 6] = [
        Method::UAfFftSp,
        Method::UAfFft,
        Method::UAfFirSp,
        Method::UAfFir,
        Method::RImati,
        Method::RSp,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Method::UAfFftSp => "U-AF-FFT-Sp",
            Method::UAfFft => "U-AF-FFT",
            Method::UAfFirSp => "U-AF-FIR-Sp",
            Method::UAfFir => "U-AF-FIR",
            Method::UAfIirSp => "U-AF-IIR-Sp",
            Method::RImati => "R-IMATI",
            Method::RSp => "R-Sp",
            Method::RImat => "R-IMAT",
        }
    }

    /// `None` for random-sampling schemes, which have no anti-aliasing stage.
    pub fn anti_alias(self) -> Option<AntiAlias> {
        match self {
            Method::UAfFftSp | Method::UAfFft => Some(AntiAlias::FftBrickwall),
            Method::UAfFirSp | Method::UAfFir => Some(AntiAlias::Fir),
            Method::UAfIirSp => Some(AntiAlias::Iir),
            Method::RImati | Method::RSp | Method::RImat => None,
        }
    }

    pub fn is_uniform(self) -> bool {
        self.anti_alias().is_some()
    }

    pub fn recovery(self) -> Recovery {
        match self {
            Method::UAfFftSp | Method::UAfFirSp | Method::UAfIirSp | Method::RSp => Recovery::Spline,
            Method::UAfFft | Method::UAfFir => Recovery::Lowpass,
            Method::RImat => Recovery::Imat,
            Method::RImati => Recovery::Imati,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown method {0:?}")]
pub struct UnknownMethod(pub String);

impl FromStr for Method {
    type Err = UnknownMethod;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        Method::ALL
            .into_iter()
            .find(|m| m.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownMethod(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.id().parse::<Method>().unwrap(), m);
        }
        assert_eq!("r-sp".parse::<Method>().unwrap(), Method::RSp);
        assert!("U-AF-XYZ".parse::<Method>().is_err());
    }

    #[test]
    fn ordering_follows_declaration() {
        let mut all = Method::ALL;
        all.reverse();
        all.sort();
        assert_eq!(all, Method::ALL);
    }
}
