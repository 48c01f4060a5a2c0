//! Componentwise running moments with an order-fixed merge.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub mean: [f64; 8],
    pub m2: [f64; 8],
}

impl Moments {
    pub const EMPTY: Moments = Moments {
        count: 0,
        mean: [0.0; 8],
        m2: [0.0; 8],
    };

    #[inline]
    pub fn push(&mut self, x: &[f64]) {
        self.count += 1;
        let n = self.count as f64;
        for (k, &v) in x.iter().enumerate() {
            let delta = v - self.mean[k];
            self.mean[k] += delta / n;
            self.m2[k] += delta * (v - self.mean[k]);
        }
    }

    pub fn merge(&self, other: &Moments) -> Moments {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        let mut out = Moments {
            count: self.count + other.count,
            ..Moments::EMPTY
        };
        for k in 0..8 {
            let delta = other.mean[k] - self.mean[k];
            out.mean[k] = self.mean[k] + delta * nb / n;
            out.m2[k] = self.m2[k] + other.m2[k] + delta * delta * na * nb / n;
        }
        out
    }

    /// Standard error of the mean for component `k`.
    pub fn std_error(&self, k: usize) -> f64 {
        if self.count < 2 {
            return f64::INFINITY;
        }
        let n = self.count as f64;
        (self.m2[k] / (n - 1.0) / n).sqrt()
    }
}

/// Pairwise reduction with a split point that depends only on the length,
/// so the result is identical however the parts were produced.
pub fn tree_merge(parts: &[Moments]) -> Moments {
    match parts.len() {
        0 => Moments::EMPTY,
        1 => parts[0],
        n => {
            let mid = n / 2;
            tree_merge(&parts[..mid]).merge(&tree_merge(&parts[mid..]))
        }
    }
}
