//! Unsupervised readout: neurons are labelled after training by the class
//! they respond to most, and an input is classified by the class whose
//! neurons fired most on average.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeuronLabelAssignment {
    pub num_classes: usize,
    /// Class of each neuron; `None` for neurons that never fired while labelling.
    pub labels: Vec<Option<u8>>,
}

impl NeuronLabelAssignment {
    /// Assigns each neuron to the class with the highest mean response.
    ///
    /// `responses[n][c]` is the total spike count of neuron `n` over the
    /// labelling inputs of class `c`, and `class_sizes[c]` the number of
    /// such inputs. Ties go to the lowest class index.
    pub fn from_responses(responses: &[Vec<u64>], class_sizes: &[u64]) -> Result<Self> {
        let num_classes = class_sizes.len();
        if num_classes < 2 {
            return Err(Error::invalid("need at least two classes to assign labels"));
        }
        let labels = responses
            .iter()
            .map(|row| {
                if row.len() != num_classes {
                    return Err(Error::invalid("response row length differs from class count"));
                }
                let mut best: Option<(usize, f64)> = None;
                for (c, (&n, &size)) in row.iter().zip(class_sizes).enumerate() {
                    if size == 0 {
                        continue;
                    }
                    let mean = n as f64 / size as f64;
                    if mean > 0.0 && best.is_none_or(|(_, m)| mean > m) {
                        best = Some((c, mean));
                    }
                }
                Ok(best.map(|(c, _)| c as u8))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { num_classes, labels })
    }

    pub fn num_neurons(&self) -> usize {
        self.labels.len()
    }
}

/// Predicted class, or `None` ("no prediction", scored as incorrect) when no
/// labelled neuron fired.
pub fn classify(spike_counts: &[u32], assignment: &NeuronLabelAssignment) -> Result<Option<usize>> {
    if spike_counts.len() != assignment.labels.len() {
        return Err(Error::invalid(format!(
            "{} spike counts for {} neurons",
            spike_counts.len(),
            assignment.labels.len()
        )));
    }
    let mut sums = vec![0u64; assignment.num_classes];
    let mut members = vec![0u64; assignment.num_classes];
    for (&count, label) in spike_counts.iter().zip(&assignment.labels) {
        if let Some(c) = label {
            sums[usize::from(*c)] += u64::from(count);
            members[usize::from(*c)] += 1;
        }
    }
    let mut best: Option<(usize, f64)> = None;
    for c in 0..assignment.num_classes {
        if members[c] == 0 {
            continue;
        }
        let mean = sums[c] as f64 / members[c] as f64;
        if mean > 0.0 && best.is_none_or(|(_, m)| mean > m) {
            best = Some((c, mean));
        }
    }
    Ok(best.map(|(c, _)| c))
}
