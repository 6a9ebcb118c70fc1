//! Poisson rate coding of pixel intensities.

use rand::Rng;

use crate::rng;
use crate::{Error, Result};

/// Input spikes of one presentation, stored as the active input lines of
/// each timestep in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpikeTrain {
    num_inputs: usize,
    active: Vec<Vec<u32>>,
}

impl SpikeTrain {
    pub fn from_active(num_inputs: usize, active: Vec<Vec<u32>>) -> Result<Self> {
        for line in active.iter().flatten() {
            if *line as usize >= num_inputs {
                return Err(Error::invalid(format!(
                    "spike on input {line} but the train has {num_inputs} inputs"
                )));
            }
        }
        Ok(Self { num_inputs, active })
    }

    /// Every input spiking in every timestep.
    pub fn saturated(num_inputs: usize, duration: usize) -> Self {
        let all: Vec<u32> = (0..num_inputs as u32).collect();
        Self {
            num_inputs,
            active: vec![all; duration],
        }
    }

    pub fn duration(&self) -> usize {
        self.active.len()
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn active(&self, t: usize) -> &[u32] {
        &self.active[t]
    }

    pub fn get(&self, t: usize, input: usize) -> bool {
        self.active[t].binary_search(&(input as u32)).is_ok()
    }

    /// Dense boolean row for timestep `t`.
    pub fn dense(&self, t: usize) -> Vec<bool> {
        let mut row = vec![false; self.num_inputs];
        for &i in &self.active[t] {
            row[i as usize] = true;
        }
        row
    }

    pub fn spike_count(&self, input: usize) -> usize {
        (0..self.duration()).filter(|&t| self.get(t, input)).count()
    }

    pub fn total_spikes(&self) -> usize {
        self.active.iter().map(Vec::len).sum()
    }
}

/// Each pixel fires independently every timestep with probability
/// `(pixel / 255) * max_rate`.
pub fn encode_poisson(image: &[u8], duration: usize, max_rate: f64, seed: u64) -> Result<SpikeTrain> {
    if image.is_empty() {
        return Err(Error::invalid("cannot encode an empty image"));
    }
    if duration == 0 {
        return Err(Error::invalid("spike train duration must be at least one timestep"));
    }
    if !(max_rate > 0.0 && max_rate <= 1.0) {
        return Err(Error::invalid(format!("max_rate must lie in (0, 1], got {max_rate}")));
    }
    let rates: Vec<(u32, f64)> = image
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 0)
        .map(|(i, &p)| (i as u32, f64::from(p) / 255.0 * max_rate))
        .collect();
    let mut rng = rng::seeded(seed);
    let active = (0..duration)
        .map(|_| {
            rates
                .iter()
                .filter(|(_, rate)| rng.random::<f64>() < *rate)
                .map(|&(i, _)| i)
                .collect()
        })
        .collect();
    Ok(SpikeTrain {
        num_inputs: image.len(),
        active,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_image_is_silent() {
        let train = encode_poisson(&[0; 784], 100, 1.0, 1).unwrap();
        assert_eq!(train.total_spikes(), 0);
        assert_eq!(train.duration(), 100);
    }

    #[test]
    fn full_intensity_at_rate_one_fires_every_step() {
        let train = encode_poisson(&[255, 0], 10, 1.0, 9).unwrap();
        assert_eq!(train.spike_count(0), 10);
        assert_eq!(train.spike_count(1), 0);
    }

    #[test]
    fn empirical_rate_within_three_sigma() {
        // p = 128/255 * 0.25 = 0.12549; sigma of the mean over 10^4 draws
        let p = 128.0 / 255.0 * 0.25;
        let n: f64 = 10_000.0;
        let sigma = (p * (1.0 - p) / n).sqrt();
        let train = encode_poisson(&[128], 10_000, 0.25, 77).unwrap();
        let rate = train.spike_count(0) as f64 / n;
        assert!((rate - 0.1255).abs() <= 3.0 * sigma + 1e-4, "rate {rate}");
    }

    #[test]
    fn deterministic_given_seed() {
        let img: Vec<u8> = (0..=255).collect();
        let a = encode_poisson(&img, 50, 0.3, 5).unwrap();
        let b = encode_poisson(&img, 50, 0.3, 5).unwrap();
        let c = encode_poisson(&img, 50, 0.3, 6).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn argument_errors() {
        assert!(encode_poisson(&[], 10, 0.5, 0).is_err());
        assert!(encode_poisson(&[1], 0, 0.5, 0).is_err());
        assert!(encode_poisson(&[1], 10, 0.0, 0).is_err());
        assert!(encode_poisson(&[1], 10, 1.5, 0).is_err());
    }

    #[test]
    fn dense_view_matches_sparse() {
        let t = SpikeTrain::from_active(4, vec![vec![0, 3], vec![]]).unwrap();
        assert_eq!(t.dense(0), vec![true, false, false, true]);
        assert!(t.get(0, 3) && !t.get(1, 3));
        assert!(SpikeTrain::from_active(2, vec![vec![2]]).is_err());
    }
}
