use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::network::LinearNetwork;
use super::permanent::permanent;
use crate::schmidt::SchmidtDecomposition;
use crate::{Error, Result};

/// Spectral mode carried by one photon. Modes with different labels are
/// orthogonal; equal labels are the same mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SpectralLabel {
    /// Schmidt signal mode n, shared by every source.
    Signal(usize),
    /// Herald mode n of one source; only meaningful on an isolated channel.
    Herald { source: usize, mode: usize },
    /// Extra single photons outside the Schmidt basis.
    Free(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Photon {
    pub channel: usize,
    pub label: SpectralLabel,
}

/// One pair source `Σ √λn |ψn⟩_signal |φn⟩_herald`, truncated to the kept
/// weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairSource {
    pub herald_channel: usize,
    pub signal_channel: usize,
    /// Kept Schmidt eigenvalues λn.
    pub weights: Vec<f64>,
    pub shared_basis: bool,
}

impl PairSource {
    pub fn new(herald_channel: usize, signal_channel: usize, weights: Vec<f64>) -> Result<Self> {
        if herald_channel == signal_channel {
            return Err(Error::Invalid("herald and signal share a channel".into()));
        }
        if weights.is_empty() || weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::Invalid("Schmidt weights must be finite and nonnegative".into()));
        }
        if weights.iter().sum::<f64>() > 1.0 + 1e-9 {
            return Err(Error::Invalid("Schmidt weights sum above one".into()));
        }
        Ok(PairSource { herald_channel, signal_channel, weights, shared_basis: true })
    }

    /// `λn = (1 − μ²)μ²ⁿ` for `n < n_modes`.
    pub fn analytic(herald_channel: usize, signal_channel: usize, mu: f64, n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::Invalid("n_modes must be at least one".into()));
        }
        let (w, _) = crate::schmidt::analytic_eigenvalues(mu, n_modes - 1)?;
        Self::new(herald_channel, signal_channel, w)
    }

    pub fn kept_mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Max-abs entry of `⟨ψ^a_m|ψ^b_n⟩ − δmn` over the first `n_modes` signal modes.
pub fn shared_basis_deviation(
    a: &SchmidtDecomposition,
    b: &SchmidtDecomposition,
    n_modes: usize,
) -> Result<f64> {
    if !a.grid_s.same_as(&b.grid_s) {
        return Err(Error::GridMismatch("sources sampled on different signal grids".into()));
    }
    if n_modes > a.n_modes() || n_modes > b.n_modes() {
        return Err(Error::Invalid(format!(
            "asked for {n_modes} modes, decompositions keep {} and {}",
            a.n_modes(),
            b.n_modes()
        )));
    }
    let h = a.grid_s.spacing();
    let pa = a.signal_modes.columns(0, n_modes);
    let pb = b.signal_modes.columns(0, n_modes);
    let o = pa.adjoint() * pb * Complex64::new(h, 0.0);
    let mut dev = 0.0f64;
    for i in 0..n_modes {
        for j in 0..n_modes {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((o[(i, j)] - target).norm());
        }
    }
    Ok(dev)
}

pub const SHARED_BASIS_TOL: f64 = 1e-8;

/// Product of pair sources plus fixed single photons.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralPhotonInput {
    pub sources: Vec<PairSource>,
    pub singles: Vec<Photon>,
}

impl SpectralPhotonInput {
    pub fn new(sources: Vec<PairSource>, singles: Vec<Photon>) -> Result<Self> {
        if singles.iter().any(|p| matches!(p.label, SpectralLabel::Herald { .. })) {
            return Err(Error::Invalid("single photons cannot carry herald labels".into()));
        }
        Ok(SpectralPhotonInput { sources, singles })
    }

    /// Sources built from numeric decompositions; their signal bases must
    /// coincide to [`SHARED_BASIS_TOL`].
    pub fn from_decompositions(
        wiring: &[(usize, usize, &SchmidtDecomposition)],
        n_modes: usize,
    ) -> Result<Self> {
        let first = wiring
            .first()
            .ok_or_else(|| Error::Invalid("no sources given".into()))?
            .2;
        let mut sources = Vec::with_capacity(wiring.len());
        for &(h, s, d) in wiring {
            let dev = shared_basis_deviation(first, d, n_modes)?;
            if dev > SHARED_BASIS_TOL {
                return Err(Error::Invalid(format!(
                    "sources do not share a spectral basis (overlap deviation {dev:.3e})"
                )));
            }
            sources.push(PairSource::new(h, s, d.eigenvalues[..n_modes].to_vec())?);
        }
        Self::new(sources, Vec::new())
    }

    pub fn photon_count(&self) -> usize {
        2 * self.sources.len() + self.singles.len()
    }

    pub fn kept_mass(&self) -> f64 {
        self.sources.iter().map(PairSource::kept_mass).product()
    }

    /// `1 − ∏ Σλn` over sources.
    pub fn truncation_mass(&self) -> f64 {
        1.0 - self.kept_mass()
    }

    fn validate(&self, net: &LinearNetwork) -> Result<()> {
        let n = net.n_channels;
        let chans = self
            .sources
            .iter()
            .flat_map(|s| [s.herald_channel, s.signal_channel])
            .chain(self.singles.iter().map(|p| p.channel));
        for c in chans {
            if c >= n {
                return Err(Error::Invalid(format!("input channel {c} outside a {n}-channel network")));
            }
        }
        for (k, s) in self.sources.iter().enumerate() {
            if !net.is_isolated(s.herald_channel) {
                return Err(Error::Invalid(format!(
                    "herald channel {} of source {k} is coupled by the network; herald modes are only tracked on isolated channels",
                    s.herald_channel
                )));
            }
            if self.sources.iter().filter(|o| o.herald_channel == s.herald_channel).count() > 1 {
                return Err(Error::Invalid(format!("herald channel {} is shared", s.herald_channel)));
            }
        }
        Ok(())
    }

    /// Distinct label structures with their summed weights. Probabilities
    /// only depend on how many photons of each label enter each channel, so
    /// the key is the sorted list of per-label occupation vectors.
    fn grouped_terms(&self, n_channels: usize) -> Vec<(Vec<Vec<usize>>, f64)> {
        let mut map: HashMap<Vec<Vec<usize>>, f64> = HashMap::new();
        let sizes: Vec<usize> = self.sources.iter().map(|s| s.weights.len()).collect();
        let mut idx = vec![0usize; sizes.len()];
        loop {
            let mut w = 1.0;
            let mut photons = self.singles.clone();
            for (k, s) in self.sources.iter().enumerate() {
                let n = idx[k];
                w *= s.weights[n];
                photons.push(Photon { channel: s.signal_channel, label: SpectralLabel::Signal(n) });
                photons.push(Photon {
                    channel: s.herald_channel,
                    label: SpectralLabel::Herald { source: k, mode: n },
                });
            }
            if w > 0.0 {
                *map.entry(occupation_key(&photons, n_channels)).or_insert(0.0) += w;
            }
            // odometer
            let mut k = 0;
            loop {
                if k == sizes.len() {
                    let mut v: Vec<_> = map.into_iter().collect();
                    v.sort_by(|a, b| a.0.cmp(&b.0));
                    return v;
                }
                idx[k] += 1;
                if idx[k] < sizes[k] {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
}

fn occupation_key(photons: &[Photon], n_channels: usize) -> Vec<Vec<usize>> {
    let mut groups: HashMap<SpectralLabel, Vec<usize>> = HashMap::new();
    for p in photons {
        groups.entry(p.label).or_insert_with(|| vec![0; n_channels])[p.channel] += 1;
    }
    let mut key: Vec<Vec<usize>> = groups.into_values().collect();
    key.sort();
    key
}

/// Photon counts per output channel, from broadband detectors that do not
/// resolve the spectral label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DetectionPattern {
    pub counts: Vec<usize>,
}

impl DetectionPattern {
    pub fn new(counts: Vec<usize>) -> Self {
        DetectionPattern { counts }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn spectrally_unresolved(&self) -> bool {
        true
    }
}

/// Every way to place `n_photons` in `n_channels`.
pub fn all_patterns(n_photons: usize, n_channels: usize) -> Vec<DetectionPattern> {
    fn rec(left: usize, ch: usize, cur: &mut Vec<usize>, out: &mut Vec<DetectionPattern>) {
        if ch + 1 == cur.len() {
            cur[ch] = left;
            out.push(DetectionPattern::new(cur.clone()));
            return;
        }
        for k in (0..=left).rev() {
            cur[ch] = k;
            rec(left - k, ch + 1, cur, out);
        }
    }
    let mut out = Vec::new();
    if n_channels > 0 {
        rec(n_photons, 0, &mut vec![0; n_channels], &mut out);
    }
    out
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `⟨out|U|in⟩ = Perm(U[out, in])/√(∏ n! ∏ m!)` for single-mode photons.
pub fn fock_amplitude(u: &DMatrix<Complex64>, input: &[usize], output: &[usize]) -> Result<Complex64> {
    let n = u.nrows();
    if input.len() != n || output.len() != n {
        return Err(Error::Invalid(format!(
            "occupation vectors of length {}/{} for {n} channels",
            input.len(),
            output.len()
        )));
    }
    let total: usize = input.iter().sum();
    if output.iter().sum::<usize>() != total {
        return Err(Error::Invalid("photon number differs between input and output".into()));
    }
    let rows: Vec<usize> = output.iter().enumerate().flat_map(|(k, &c)| std::iter::repeat_n(k, c)).collect();
    let cols: Vec<usize> = input.iter().enumerate().flat_map(|(k, &c)| std::iter::repeat_n(k, c)).collect();
    let sub = DMatrix::from_fn(total, total, |a, b| u[(rows[a], cols[b])]);
    let norm: f64 = input.iter().chain(output).map(|&c| factorial(c)).product();
    Ok(permanent(&sub)? / norm.sqrt())
}

/// Output state of single-mode photons as `(pattern, amplitude)` pairs over
/// all patterns.
pub fn fock_output_state(u: &DMatrix<Complex64>, input: &[usize]) -> Result<Vec<(Vec<usize>, Complex64)>> {
    all_patterns(input.iter().sum(), u.nrows())
        .into_iter()
        .map(|p| Ok((p.counts.clone(), fock_amplitude(u, input, &p.counts)?)))
        .collect()
}

/// Probability of `output` when each label group evolves independently and
/// the labels are traced out.
fn labeled_probability(u: &DMatrix<Complex64>, groups: &[Vec<usize>], output: &[usize]) -> Result<f64> {
    fn rec(u: &DMatrix<Complex64>, groups: &[Vec<usize>], left: &mut Vec<usize>) -> Result<f64> {
        let Some((g, rest)) = groups.split_first() else {
            return Ok(if left.iter().all(|&c| c == 0) { 1.0 } else { 0.0 });
        };
        let size: usize = g.iter().sum();
        let mut total = 0.0;
        let mut sub = vec![0usize; left.len()];
        // enumerate sub ≤ left with Σ sub = size
        fn each(
            ch: usize,
            need: usize,
            left: &[usize],
            sub: &mut Vec<usize>,
            f: &mut dyn FnMut(&[usize]) -> Result<()>,
        ) -> Result<()> {
            if ch == left.len() {
                return if need == 0 { f(sub) } else { Ok(()) };
            }
            let room: usize = left[ch + 1..].iter().sum();
            let lo = need.saturating_sub(room);
            for k in lo..=need.min(left[ch]) {
                sub[ch] = k;
                each(ch + 1, need - k, left, sub, f)?;
            }
            sub[ch] = 0;
            Ok(())
        }
        let snapshot = left.clone();
        each(0, size, &snapshot, &mut sub, &mut |s: &[usize]| {
            let p = fock_amplitude(u, g, s)?.norm_sqr();
            if p > 0.0 {
                let mut rem: Vec<usize> = snapshot.iter().zip(s).map(|(a, b)| a - b).collect();
                total += p * rec(u, rest, &mut rem)?;
            }
            Ok(())
        })?;
        Ok(total)
    }
    rec(u, groups, &mut output.to_vec())
}

fn check_pattern(net: &LinearNetwork, input: &SpectralPhotonInput, pattern: &DetectionPattern) -> Result<()> {
    if pattern.counts.len() != net.n_channels {
        return Err(Error::Invalid(format!(
            "pattern has {} channels, network has {}",
            pattern.counts.len(),
            net.n_channels
        )));
    }
    if pattern.total() != input.photon_count() {
        return Err(Error::Invalid(format!(
            "pattern detects {} photons, input carries {}",
            pattern.total(),
            input.photon_count()
        )));
    }
    Ok(())
}

/// Probability of the detection pattern, summed incoherently over the
/// orthonormal spectral labels and weighted by the Schmidt eigenvalues.
pub fn pattern_probability(
    net: &LinearNetwork,
    input: &SpectralPhotonInput,
    pattern: &DetectionPattern,
) -> Result<f64> {
    input.validate(net)?;
    check_pattern(net, input, pattern)?;
    let terms = input.grouped_terms(net.n_channels);
    let parts: Result<Vec<f64>> = terms
        .par_iter()
        .map(|(groups, w)| Ok(w * labeled_probability(&net.unitary, groups, &pattern.counts)?))
        .collect();
    Ok(parts?.into_iter().sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbabilityCheck {
    /// Σ over every pattern.
    pub total: f64,
    pub kept_mass: f64,
    pub truncation_mass: f64,
}

/// Sums [`pattern_probability`] over all patterns; equals the kept mass
/// `1 − truncation_mass` for a unitary network.
pub fn total_probability_check(net: &LinearNetwork, input: &SpectralPhotonInput) -> Result<ProbabilityCheck> {
    input.validate(net)?;
    let patterns = all_patterns(input.photon_count(), net.n_channels);
    let terms = input.grouped_terms(net.n_channels);
    let parts: Result<Vec<f64>> = terms
        .par_iter()
        .map(|(groups, w)| {
            let mut s = 0.0;
            for p in &patterns {
                s += labeled_probability(&net.unitary, groups, &p.counts)?;
            }
            Ok(w * s)
        })
        .collect();
    Ok(ProbabilityCheck {
        total: parts?.into_iter().sum(),
        kept_mass: input.kept_mass(),
        truncation_mass: input.truncation_mass(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::network::BsConvention;
    use super::*;

    fn free(channel: usize, n: usize) -> Photon {
        Photon { channel, label: SpectralLabel::Free(n) }
    }

    fn half() -> LinearNetwork {
        let mut n = LinearNetwork::new(2).unwrap();
        n.bs(0, 1, 0.5, BsConvention::Standard).unwrap();
        n
    }

    #[test]
    fn single_photon() {
        let mut net = LinearNetwork::new(3).unwrap();
        net.bs(0, 1, 0.3, BsConvention::Standard).unwrap().phase(1, 0.4).unwrap().bs(1, 2, 0.8, BsConvention::Flipped).unwrap();
        let input = SpectralPhotonInput::new(vec![], vec![free(0, 0)]).unwrap();
        for j in 0..3 {
            let mut c = vec![0; 3];
            c[j] = 1;
            let p = pattern_probability(&net, &input, &DetectionPattern::new(c)).unwrap();
            assert!((p - net.unitary[(j, 0)].norm_sqr()).abs() < 1e-15);
        }
    }

    #[test]
    fn hom_null_and_distinguishable() {
        let net = half();
        let same = SpectralPhotonInput::new(vec![], vec![free(0, 0), free(1, 0)]).unwrap();
        let p = pattern_probability(&net, &same, &DetectionPattern::new(vec![1, 1])).unwrap();
        assert!(p < 1e-15);
        let orth = SpectralPhotonInput::new(vec![], vec![free(0, 0), free(1, 1)]).unwrap();
        let p = pattern_probability(&net, &orth, &DetectionPattern::new(vec![1, 1])).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        let bad = DetectionPattern::new(vec![1, 0]);
        assert!(pattern_probability(&net, &same, &bad).is_err());
    }

    #[test]
    fn completeness_two_photons() {
        let mut net = LinearNetwork::new(2).unwrap();
        net.bs(0, 1, 0.37, BsConvention::Flipped).unwrap().phase(0, 1.1).unwrap();
        for singles in [vec![free(0, 0), free(1, 0)], vec![free(0, 0), free(0, 1)], vec![free(1, 2), free(1, 2)]] {
            let input = SpectralPhotonInput::new(vec![], singles).unwrap();
            let c = total_probability_check(&net, &input).unwrap();
            assert!((c.total - 1.0).abs() < 1e-12, "{}", c.total);
        }
    }

    #[test]
    fn truncated_sources_lose_tail() {
        let mut net = LinearNetwork::new(4).unwrap();
        net.bs(1, 2, 0.5, BsConvention::Standard).unwrap();
        let a = PairSource::analytic(0, 1, 0.5, 3).unwrap();
        let b = PairSource::analytic(3, 2, 0.5, 3).unwrap();
        let input = SpectralPhotonInput::new(vec![a, b], vec![]).unwrap();
        let c = total_probability_check(&net, &input).unwrap();
        assert!((c.total - (1.0 - c.truncation_mass)).abs() < 1e-12);
        assert!((c.truncation_mass - (1.0 - (1.0 - 0.5f64.powi(6)).powi(2))).abs() < 1e-15);
    }

    #[test]
    fn herald_must_be_isolated() {
        let mut net = LinearNetwork::new(2).unwrap();
        net.bs(0, 1, 0.5, BsConvention::Standard).unwrap();
        let s = PairSource::analytic(0, 1, 0.2, 4).unwrap();
        let input = SpectralPhotonInput::new(vec![s], vec![]).unwrap();
        assert!(pattern_probability(&net, &input, &DetectionPattern::new(vec![1, 1])).is_err());
    }

    #[test]
    fn pattern_enumeration() {
        assert_eq!(all_patterns(6, 7).len(), 924);
        assert_eq!(all_patterns(3, 4).len(), 20);
        assert!(all_patterns(3, 4).iter().all(|p| p.total() == 3));
    }
}
