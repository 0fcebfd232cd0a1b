//! Signal ingestion: CSV and raw little-endian binary64 files, plus a seeded
//! synthetic EEG generator.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_SAMPLE_RATE: f64 = 256.0;

/// Lowest rate at which the synthetic beta band (20 Hz) is comfortably below Nyquist.
pub const MIN_SYNTH_RATE: f64 = 64.0;

/// A single-channel sampled signal.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSignal {
    samples: Vec<f64>,
    sample_rate: f64,
}

impl RawSignal {
    pub fn new(samples: Vec<f64>, sample_rate: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySignal);
        }
        if let Some(index) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "sample rate must be positive and finite, got {sample_rate}"
            )));
        }
        Ok(Self {
            samples,
            sample_rate,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }
}

/// On-disk representation of a signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignalFormat {
    /// One decimal value per line.
    Csv,
    /// Headerless IEEE-754 binary64, little-endian.
    Raw,
}

impl FromStr for SignalFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(SignalFormat::Csv),
            "raw" | "raw-f64-le" | "f64" => Ok(SignalFormat::Raw),
            other => Err(Error::InvalidArgument(format!(
                "unknown signal format {other:?}"
            ))),
        }
    }
}

pub fn read_signal(path: &Path, format: SignalFormat, sample_rate: f64) -> Result<RawSignal> {
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    let samples = match format {
        SignalFormat::Csv => parse_csv(&String::from_utf8_lossy(&bytes))?,
        SignalFormat::Raw => decode_raw(&bytes)?,
    };
    RawSignal::new(samples, sample_rate)
}

pub fn write_signal(signal: &RawSignal, path: &Path, format: SignalFormat) -> Result<()> {
    if signal.is_empty() {
        return Err(Error::EmptySignal);
    }
    let bytes = match format {
        SignalFormat::Csv => format_csv(signal.samples()).into_bytes(),
        SignalFormat::Raw => encode_raw(signal.samples()),
    };
    fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

/// Parses one value per line. A non-numeric first line is skipped as a header
/// when data follows it. Blank lines are ignored.
pub fn parse_csv(text: &str) -> Result<Vec<f64>> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();

    let mut body = &lines[..];
    if let [(_, first), rest @ ..] = body {
        if first.parse::<f64>().is_err() && !rest.is_empty() {
            body = rest;
        }
    }

    let mut out = Vec::with_capacity(body.len());
    for &(line, cell) in body {
        let value: f64 = cell.parse().map_err(|_| Error::NonNumeric {
            line,
            cell: cell.to_owned(),
        })?;
        if !value.is_finite() {
            return Err(Error::NonFinite { index: out.len() });
        }
        out.push(value);
    }
    Ok(out)
}

/// Rust's `Display` for `f64` prints the shortest string that parses back to
/// the same value, so CSV output round-trips exactly.
pub fn format_csv(samples: &[f64]) -> String {
    let mut s = String::with_capacity(samples.len() * 12);
    for v in samples {
        writeln!(s, "{v}").expect("writing to a String cannot fail");
    }
    s
}

pub fn decode_raw(bytes: &[u8]) -> Result<Vec<f64>> {
    if !bytes.len().is_multiple_of(8) {
        return Err(Error::RawLength(bytes.len()));
    }
    let samples: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    if let Some(index) = samples.iter().position(|s| !s.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    Ok(samples)
}

pub fn encode_raw(samples: &[f64]) -> Vec<u8> {
    samples.iter().flat_map(|v| v.to_le_bytes()).collect()
}

const BANDS: [(f64, f64); 4] = [
    (2.0, 50.0),  // delta
    (6.0, 30.0),  // theta
    (10.0, 20.0), // alpha
    (20.0, 10.0), // beta
];
const NOISE_SIGMA: f64 = 5.0;

/// Deterministic EEG-like test signal: four band sinusoids with seeded phases
/// and amplitudes (nominal amplitude scaled by a factor in [0.8, 1.2]) plus
/// Gaussian noise.
///
/// Randomness comes from ChaCha8 seeded through `seed_from_u64`, whose
/// output stream is fixed and platform independent.
pub fn synth_eeg(duration_s: f64, sample_rate: f64, seed: u64) -> Result<RawSignal> {
    if !(duration_s.is_finite() && duration_s > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "duration must be positive, got {duration_s}"
        )));
    }
    if !(sample_rate.is_finite() && sample_rate >= MIN_SYNTH_RATE) {
        return Err(Error::InvalidArgument(format!(
            "sample rate must be at least {MIN_SYNTH_RATE} Hz, got {sample_rate}"
        )));
    }
    let n = (duration_s * sample_rate).floor() as usize;
    if n == 0 {
        return Err(Error::EmptySignal);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let components: Vec<(f64, f64, f64)> = BANDS
        .iter()
        .map(|&(freq, nominal)| {
            let amp = nominal * rng.random_range(0.8..1.2);
            let phase = rng.random_range(0.0..std::f64::consts::TAU);
            (freq, amp, phase)
        })
        .collect();
    let noise = Normal::new(0.0, NOISE_SIGMA).expect("valid normal parameters");

    let samples = (0..n)
        .map(|i| {
            let t = i as f64 / sample_rate;
            let tone: f64 = components
                .iter()
                .map(|&(f, a, p)| a * (std::f64::consts::TAU * f * t + p).sin())
                .sum();
            tone + noise.sample(&mut rng)
        })
        .collect();
    RawSignal::new(samples, sample_rate)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_parses_values_in_order() {
        assert_eq!(parse_csv("1.0\n2.0\n3.0\n").unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn csv_skips_header() {
        assert_eq!(parse_csv("uV\n1.5\n-2\n").unwrap(), vec![1.5, -2.0]);
    }

    #[test]
    fn csv_rejects_non_numeric_cell() {
        assert!(matches!(
            parse_csv("abc"),
            Err(Error::NonNumeric { line: 1, .. })
        ));
        assert!(matches!(
            parse_csv("1.0\nabc\n"),
            Err(Error::NonNumeric { line: 2, .. })
        ));
    }

    #[test]
    fn csv_rejects_non_finite() {
        assert!(matches!(
            parse_csv("1\nNaN\n"),
            Err(Error::NonFinite { index: 1 })
        ));
        assert!(matches!(
            parse_csv("inf\n"),
            Err(Error::NonFinite { index: 0 })
        ));
    }

    #[test]
    fn raw_decodes_little_endian() {
        let mut bytes = 0.5f64.to_le_bytes().to_vec();
        bytes.extend((-0.5f64).to_le_bytes());
        assert_eq!(bytes.len(), 16);
        assert_eq!(decode_raw(&bytes).unwrap(), vec![0.5, -0.5]);
    }

    #[test]
    fn raw_rejects_partial_sample() {
        assert!(matches!(decode_raw(&[0u8; 9]), Err(Error::RawLength(9))));
    }

    #[test]
    fn raw_rejects_nan() {
        assert!(matches!(
            decode_raw(&f64::NAN.to_le_bytes()),
            Err(Error::NonFinite { index: 0 })
        ));
    }

    #[test]
    fn csv_round_trips_awkward_decimals() {
        let v = vec![0.1, 0.2, 1e-310, -0.0, f64::MAX, 1.0 / 3.0];
        let back = parse_csv(&format_csv(&v)).unwrap();
        for (a, b) in v.iter().zip(&back) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn file_round_trip_both_formats() {
        let dir = tempfile::tempdir().unwrap();
        let sig = RawSignal::new(vec![1.0], 256.0).unwrap();
        let raw = dir.path().join("one.f64");
        write_signal(&sig, &raw, SignalFormat::Raw).unwrap();
        assert_eq!(fs::metadata(&raw).unwrap().len(), 8);
        assert_eq!(read_signal(&raw, SignalFormat::Raw, 256.0).unwrap(), sig);

        let sig = RawSignal::new(vec![0.1, 0.2], 256.0).unwrap();
        let csv = dir.path().join("two.csv");
        write_signal(&sig, &csv, SignalFormat::Csv).unwrap();
        assert_eq!(read_signal(&csv, SignalFormat::Csv, 256.0).unwrap(), sig);
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = read_signal(Path::new("/nonexistent/x.csv"), SignalFormat::Csv, 256.0);
        assert!(matches!(err, Err(Error::Io { .. })));
    }

    #[test]
    fn empty_signal_rejected() {
        assert!(matches!(
            RawSignal::new(vec![], 256.0),
            Err(Error::EmptySignal)
        ));
    }

    #[test]
    fn synth_is_deterministic_and_sized() {
        let a = synth_eeg(1.0, 256.0, 7).unwrap();
        let b = synth_eeg(1.0, 256.0, 7).unwrap();
        assert_eq!(a.len(), 256);
        assert!(a
            .samples()
            .iter()
            .zip(b.samples())
            .all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn synth_depends_on_seed() {
        let a = synth_eeg(1.0, 256.0, 1).unwrap();
        let b = synth_eeg(1.0, 256.0, 2).unwrap();
        assert_ne!(a.samples(), b.samples());
    }

    #[test]
    fn synth_has_positive_spread() {
        let s = synth_eeg(0.5, 64.0, 3).unwrap();
        let n = s.len() as f64;
        let mean = s.samples().iter().sum::<f64>() / n;
        let var = s.samples().iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        assert!(var > 0.0);
    }

    #[test]
    fn synth_rejects_bad_arguments() {
        assert!(synth_eeg(0.0, 256.0, 1).is_err());
        assert!(synth_eeg(-1.0, 256.0, 1).is_err());
        assert!(synth_eeg(1.0, 32.0, 1).is_err());
    }
}
