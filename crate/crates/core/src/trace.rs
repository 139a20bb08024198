//! Per-iteration records shared by every solver.

use crate::linalg::WeightedMean;
use crate::scalar::Real;

/// Events worth surfacing without failing a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    /// Line search found no sign change; the step fell back to a plain
    /// gradient step.
    LineSearchFallback { step: usize },
    /// A restart wrapper began a new stage.
    StageStart { stage: usize },
}

/// History of a run: iterates, values, the step constants actually used and
/// the averaging weights that define the output point.
///
/// All per-iterate sequences share one length. `weights[k]` is the averaging
/// weight of `iterates[k]`; plain methods use weight 0 for the start point
/// and 1 for iterates `1..=N` (the `x̄^N = (1/N) Σ_{k=1..N} x^k` convention),
/// while certificate-style histories average over `0..N-1` instead — see
/// [`AveragingConvention`].
#[derive(Debug, Clone)]
pub struct Trace<T> {
    pub iterates: Vec<Vec<T>>,
    pub values: Vec<T>,
    /// The inverse step (the `L^k` in `h = 1/L^k`) used to *produce* each
    /// iterate; entry 0 repeats the initial constant so lengths agree.
    pub step_constants: Vec<T>,
    pub weights: Vec<T>,
    pub averaged_point: Vec<T>,
    pub oracle_grad_calls: u64,
    pub oracle_value_calls: u64,
    /// Cumulative (grad, value) oracle calls when each iterate was recorded;
    /// same length as `iterates`.
    pub call_marks: Vec<(u64, u64)>,
    pub events: Vec<TraceEvent>,
}

/// Which iterates enter the averaged output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AveragingConvention {
    /// Average of `x^1..x^N` (excludes the start point).
    SkipStart,
    /// Average of `x^0..x^{N-1}` (the convention accuracy certificates and
    /// primal restoration use).
    SkipLast,
}

pub struct TraceBuilder<T: Real> {
    trace: Trace<T>,
    mean: WeightedMean<T>,
    convention: AveragingConvention,
}

impl<T: Real> TraceBuilder<T> {
    pub fn new(x0: Vec<T>, f0: T, l0: T) -> Self {
        Self::with_convention(x0, f0, l0, AveragingConvention::SkipStart)
    }

    pub fn with_convention(
        x0: Vec<T>,
        f0: T,
        l0: T,
        convention: AveragingConvention,
    ) -> Self {
        let dim = x0.len();
        let mean = WeightedMean::new(dim);
        let w0 = match convention {
            AveragingConvention::SkipStart => T::zero(),
            AveragingConvention::SkipLast => T::one(),
        };
        TraceBuilder {
            trace: Trace {
                iterates: vec![x0],
                values: vec![f0],
                step_constants: vec![l0],
                weights: vec![w0],
                averaged_point: vec![T::zero(); dim],
                oracle_grad_calls: 0,
                oracle_value_calls: 0,
                call_marks: Vec::new(),
                events: Vec::new(),
            },
            mean,
            convention,
        }
    }

    /// Record the cumulative oracle usage for the most recent iterate;
    /// missing marks are back-filled at `finish`.
    pub fn mark_calls(&mut self, grads: u64, values: u64) {
        while self.trace.call_marks.len() + 1 < self.trace.iterates.len() {
            let last = self.trace.call_marks.last().copied().unwrap_or((0, 0));
            self.trace.call_marks.push(last);
        }
        self.trace.call_marks.push((grads, values));
    }

    /// Record the next iterate with a custom averaging weight.
    pub fn push_weighted(&mut self, x: Vec<T>, f: T, l: T, weight: T) {
        match self.convention {
            AveragingConvention::SkipStart => self.mean.push(&x, weight),
            AveragingConvention::SkipLast => {
                // Weight attaches when the point stops being the last one;
                // done lazily in finish(), so just store it here.
            }
        }
        self.trace.iterates.push(x);
        self.trace.values.push(f);
        self.trace.step_constants.push(l);
        self.trace.weights.push(weight);
    }

    pub fn push(&mut self, x: Vec<T>, f: T, l: T) {
        self.push_weighted(x, f, l, T::one());
    }

    pub fn event(&mut self, e: TraceEvent) {
        self.trace.events.push(e);
    }

    pub fn last_iterate(&self) -> &[T] {
        self.trace.iterates.last().expect("non-empty trace")
    }

    pub fn last_value(&self) -> T {
        *self.trace.values.last().expect("non-empty trace")
    }

    pub fn len(&self) -> usize {
        self.trace.iterates.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn finish(mut self, grad_calls: u64, value_calls: u64) -> Trace<T> {
        match self.convention {
            AveragingConvention::SkipStart => {
                self.trace.averaged_point = if self.mean.total_weight() > T::zero() {
                    self.mean.mean()
                } else {
                    self.trace.iterates[0].clone()
                };
            }
            AveragingConvention::SkipLast => {
                let n = self.trace.iterates.len();
                if n > 1 {
                    // The last point never enters the average; zero its
                    // weight so the stored weights define the average.
                    self.trace.weights[n - 1] = T::zero();
                }
                let dim = self.trace.iterates[0].len();
                let mut mean = WeightedMean::new(dim);
                for k in 0..n {
                    if self.trace.weights[k] > T::zero() {
                        mean.push(&self.trace.iterates[k], self.trace.weights[k]);
                    }
                }
                self.trace.averaged_point = mean.mean();
            }
        }
        self.trace.oracle_grad_calls = grad_calls;
        self.trace.oracle_value_calls = value_calls;
        while self.trace.call_marks.len() < self.trace.iterates.len() {
            let last = self
                .trace
                .call_marks
                .last()
                .copied()
                .unwrap_or((grad_calls, value_calls));
            self.trace.call_marks.push(last);
        }
        self.trace
    }
}

impl<T: Real> Trace<T> {
    pub fn final_point(&self) -> &[T] {
        self.iterates.last().expect("non-empty trace")
    }

    pub fn final_value(&self) -> T {
        *self.values.last().expect("non-empty trace")
    }

    pub fn iterations(&self) -> usize {
        self.iterates.len() - 1
    }

    /// Recompute the weighted average from scratch (for invariant checks).
    pub fn recompute_average(&self) -> Vec<T> {
        let dim = self.iterates[0].len();
        let mut mean = WeightedMean::new(dim);
        for (x, &w) in self.iterates.iter().zip(&self.weights) {
            if w > T::zero() {
                mean.push(x, w);
            }
        }
        if mean.total_weight() > T::zero() {
            mean.mean()
        } else {
            self.iterates[0].clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn averaged_point_matches_recompute() {
        let mut b = TraceBuilder::new(vec![0.0f64, 0.0], 1.0, 1.0);
        b.push_weighted(vec![1.0, 0.0], 0.5, 1.0, 0.5);
        b.push_weighted(vec![0.0, 1.0], 0.5, 2.0, 1.5);
        let t = b.finish(2, 2);
        let again = t.recompute_average();
        for (a, b) in t.averaged_point.iter().zip(&again) {
            assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        }
        // weighted mean: (0.5*(1,0) + 1.5*(0,1)) / 2 = (0.25, 0.75)
        assert!((t.averaged_point[0] - 0.25).abs() < 1e-15);
        assert!((t.averaged_point[1] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn skip_last_convention_averages_prefix() {
        let mut b = TraceBuilder::with_convention(
            vec![1.0f64],
            0.5,
            1.0,
            AveragingConvention::SkipLast,
        );
        b.push(vec![0.0], 0.0, 1.0);
        let t = b.finish(1, 1);
        // Average over {x^0} only.
        assert!((t.averaged_point[0] - 1.0).abs() < 1e-15);
    }
}
