//! Seeded draws. Each suite reads its own ChaCha stream, so a suite run alone
//! sees the same draws as inside a full run.

use std::f64::consts::TAU;

use heunkit_core::scalar::{c, dist_to_nonpositive_integer};
use heunkit_core::{HeunParams, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::plan::SamplePlan;

/// Distance kept between denominator parameters and the poles 0, -1, -2, ...
pub const POLE_GAP: f64 = 0.1;

pub struct Sampler {
    rng: ChaCha8Rng,
    bound: f64,
    x_fraction: f64,
}

impl Sampler {
    pub fn new(plan: &SamplePlan, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
        rng.set_stream(stream);
        Self { rng, bound: plan.param_bound, x_fraction: plan.x_fraction }
    }

    pub fn x_fraction(&self) -> f64 {
        self.x_fraction
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    /// Uniform in [-b, b] x [-b i, b i].
    pub fn param(&mut self) -> C64 {
        let b = self.bound;
        c(self.rng.gen_range(-b..=b), self.rng.gen_range(-b..=b))
    }

    /// A parameter usable as a lower (denominator) parameter.
    pub fn lower_param(&mut self) -> C64 {
        loop {
            let z = self.param();
            if dist_to_nonpositive_integer(z) > POLE_GAP {
                return z;
            }
        }
    }

    /// Singular point a with |a| in [1.2, 3].
    pub fn heun_a(&mut self) -> C64 {
        let m = self.rng.gen_range(1.2..3.0);
        C64::from_polar(m, self.rng.gen_range(0.0..TAU))
    }

    /// Uniform in the disk of radius x_fraction * radius.
    pub fn point(&mut self, radius: f64) -> C64 {
        let rho = self.x_fraction * radius * self.rng.gen::<f64>().sqrt();
        C64::from_polar(rho, self.rng.gen_range(0.0..TAU))
    }

    pub fn heun_params(&mut self) -> HeunParams {
        loop {
            let a = self.heun_a();
            let p = HeunParams::new(a, self.param(), self.param(), self.param(), self.lower_param(), self.param());
            if p.validate().is_ok() {
                return p;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_draws() {
        let plan = SamplePlan::with_seed(9);
        let mut s1 = Sampler::new(&plan, 3);
        let mut s2 = Sampler::new(&plan, 3);
        for _ in 0..20 {
            assert_eq!(s1.param(), s2.param());
        }
        let mut s3 = Sampler::new(&plan, 4);
        assert_ne!(Sampler::new(&plan, 3).param(), s3.param());
    }

    #[test]
    fn draws_respect_bounds() {
        let plan = SamplePlan::default();
        let mut s = Sampler::new(&plan, 0);
        for _ in 0..500 {
            let z = s.param();
            assert!(z.re.abs() <= 2.0 && z.im.abs() <= 2.0);
            let a = s.heun_a();
            assert!((1.2..=3.0).contains(&a.norm()));
            assert!(s.point(1.0).norm() <= 0.2);
            assert!(dist_to_nonpositive_integer(s.lower_param()) > POLE_GAP);
        }
    }
}
