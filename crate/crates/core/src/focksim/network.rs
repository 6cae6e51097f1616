use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which side of the splitter carries the reflection sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum BsConvention {
    /// `[[√r, √(1−r)], [√(1−r), −√r]]`, sign on the second port.
    #[default]
    Standard,
    /// `[[−√r, √(1−r)], [√(1−r), √r]]`, sign on the first port.
    Flipped,
}

pub fn beamsplitter(r: f64, convention: BsConvention) -> Result<[[Complex64; 2]; 2]> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Invalid(format!("reflectivity must lie in [0, 1], got {r}")));
    }
    let a = Complex64::new(r.sqrt(), 0.0);
    let b = Complex64::new((1.0 - r).sqrt(), 0.0);
    Ok(match convention {
        BsConvention::Standard => [[a, b], [b, -a]],
        BsConvention::Flipped => [[-a, b], [b, a]],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Element {
    Bs {
        channels: [usize; 2],
        r: f64,
        #[serde(default)]
        convention: BsConvention,
    },
    Phase {
        channel: usize,
        phi: f64,
    },
}

/// Passive network; `unitary[(out, in)]` maps input to output channels.
#[derive(Debug, Clone)]
pub struct LinearNetwork {
    pub n_channels: usize,
    pub unitary: DMatrix<Complex64>,
    pub elements: Vec<Element>,
}

impl LinearNetwork {
    pub fn new(n_channels: usize) -> Result<Self> {
        if n_channels == 0 {
            return Err(Error::Invalid("network needs at least one channel".into()));
        }
        Ok(LinearNetwork {
            n_channels,
            unitary: DMatrix::identity(n_channels, n_channels),
            elements: Vec::new(),
        })
    }

    pub fn from_elements(n_channels: usize, elements: &[Element]) -> Result<Self> {
        let mut net = Self::new(n_channels)?;
        for e in elements {
            net.push(e.clone())?;
        }
        Ok(net)
    }

    /// `{"n_channels": n, "elements": [...]}` or a bare element list, in
    /// which case the channel count is inferred.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            n_channels: usize,
            elements: Vec<Element>,
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Either {
            Doc(Doc),
            List(Vec<Element>),
        }
        match serde_json::from_str::<Either>(text)
            .map_err(|e| Error::Parse(format!("network description: {e}")))?
        {
            Either::Doc(d) => Self::from_elements(d.n_channels, &d.elements),
            Either::List(els) => {
                let n = els
                    .iter()
                    .map(|e| match e {
                        Element::Bs { channels, .. } => channels[0].max(channels[1]) + 1,
                        Element::Phase { channel, .. } => channel + 1,
                    })
                    .max()
                    .unwrap_or(1);
                Self::from_elements(n, &els)
            }
        }
    }

    pub fn push(&mut self, element: Element) -> Result<&mut Self> {
        let n = self.n_channels;
        let mut g = DMatrix::<Complex64>::identity(n, n);
        match &element {
            Element::Bs { channels: [i, j], r, convention } => {
                if *i >= n || *j >= n || i == j {
                    return Err(Error::Invalid(format!(
                        "beamsplitter channels ({i}, {j}) invalid for {n} channels"
                    )));
                }
                let b = beamsplitter(*r, *convention)?;
                g[(*i, *i)] = b[0][0];
                g[(*i, *j)] = b[0][1];
                g[(*j, *i)] = b[1][0];
                g[(*j, *j)] = b[1][1];
            }
            Element::Phase { channel, phi } => {
                if *channel >= n || !phi.is_finite() {
                    return Err(Error::Invalid(format!(
                        "phase on channel {channel} (φ = {phi}) invalid for {n} channels"
                    )));
                }
                g[(*channel, *channel)] = Complex64::from_polar(1.0, *phi);
            }
        }
        self.unitary = g * &self.unitary;
        self.elements.push(element);
        Ok(self)
    }

    pub fn bs(&mut self, i: usize, j: usize, r: f64, convention: BsConvention) -> Result<&mut Self> {
        self.push(Element::Bs { channels: [i, j], r, convention })
    }

    pub fn phase(&mut self, channel: usize, phi: f64) -> Result<&mut Self> {
        self.push(Element::Phase { channel, phi })
    }

    /// Appends every element of `other`, with its channel `k` mapped to
    /// `channels[k]`.
    pub fn embed(&mut self, other: &LinearNetwork, channels: &[usize]) -> Result<&mut Self> {
        if channels.len() != other.n_channels {
            return Err(Error::Invalid("channel map length differs from sub-network size".into()));
        }
        for e in &other.elements {
            let mapped = match e {
                Element::Bs { channels: [i, j], r, convention } => Element::Bs {
                    channels: [channels[*i], channels[*j]],
                    r: *r,
                    convention: *convention,
                },
                Element::Phase { channel, phi } => Element::Phase { channel: channels[*channel], phi: *phi },
            };
            self.push(mapped)?;
        }
        Ok(self)
    }

    /// Max-abs entry of `U†U − 1`.
    pub fn unitarity_error(&self) -> f64 {
        let d = self.unitary.adjoint() * &self.unitary - DMatrix::<Complex64>::identity(self.n_channels, self.n_channels);
        d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-abs difference between the stored unitary and a replay of the log.
    pub fn replay_error(&self) -> Result<f64> {
        let replay = Self::from_elements(self.n_channels, &self.elements)?;
        Ok((replay.unitary - &self.unitary).iter().map(|z| z.norm()).fold(0.0, f64::max))
    }

    /// True when the channel neither leaks to nor receives from any other.
    pub fn is_isolated(&self, channel: usize) -> bool {
        (0..self.n_channels)
            .filter(|&k| k != channel)
            .all(|k| self.unitary[(k, channel)].norm() < 1e-14 && self.unitary[(channel, k)].norm() < 1e-14)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn limits() {
        let m = beamsplitter(1.0, BsConvention::Standard).unwrap();
        assert_eq!(m[0][0].re, 1.0);
        assert_eq!(m[1][1].re, -1.0);
        assert_eq!(m[0][1].re, 0.0);
        let s = beamsplitter(0.0, BsConvention::Standard).unwrap();
        assert_eq!((s[0][0].re, s[0][1].re, s[1][0].re, s[1][1].re), (0.0, 1.0, 1.0, 0.0));
        let h = beamsplitter(0.5, BsConvention::Standard).unwrap();
        assert!((h[0][0].re - 0.5f64.sqrt()).abs() < 1e-15 && (h[1][0].re - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(beamsplitter(1.1, BsConvention::Standard).is_err());
        assert!(beamsplitter(-0.1, BsConvention::Flipped).is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"[{"type":"bs","channels":[0,2],"r":0.3},{"type":"phase","channel":1,"phi":0.7}]"#;
        let net = LinearNetwork::from_json(text).unwrap();
        assert_eq!(net.n_channels, 3);
        assert_eq!(net.elements.len(), 2);
        let doc = r#"{"n_channels":4,"elements":[{"type":"bs","channels":[0,3],"r":0.5,"convention":"flipped"}]}"#;
        assert_eq!(LinearNetwork::from_json(doc).unwrap().n_channels, 4);
        assert!(LinearNetwork::from_json(r#"[{"type":"bs","channels":[0,1],"r":0.5,"rr":1}]"#).is_err());
        assert!(LinearNetwork::from_json(r#"[{"type":"bs","channels":[1,1],"r":0.5}]"#).is_err());
        let s = serde_json::to_string(&net.elements).unwrap();
        let again = LinearNetwork::from_json(&s).unwrap();
        assert!((again.unitary - net.unitary).iter().all(|z| z.norm() < 1e-15));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn composition_stays_unitary(ops in prop::collection::vec((0usize..5, 0usize..5, 0.0f64..1.0, any::<bool>(), -7.0f64..7.0), 1..30)) {
            let mut net = LinearNetwork::new(5).unwrap();
            for (i, j, r, flip, phi) in ops {
                if i == j {
                    net.phase(i, phi).unwrap();
                } else {
                    let c = if flip { BsConvention::Flipped } else { BsConvention::Standard };
                    net.bs(i, j, r, c).unwrap();
                }
            }
            prop_assert!(net.unitarity_error() < 1e-12);
            prop_assert!(net.replay_error().unwrap() < 1e-12);
        }
    }
}
