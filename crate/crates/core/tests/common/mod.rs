//! Seeded generators shared by the property and acceptance suites.
#![allow(dead_code)]

use std::sync::Arc;

use flagcalc_core::catalog::coordinate_structure;
use flagcalc_core::flag::PseudoFlagStructure;
use flagcalc_core::{Form, FrameSpace, Scalar};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    pub fn rational(&mut self) -> Scalar {
        let p = self.rng.gen_range(-5..=5);
        let q = self.rng.gen_range(1..=4);
        Scalar::ratio(p, q)
    }

    pub fn nonzero_rational(&mut self) -> Scalar {
        loop {
            let r = self.rational();
            if !r.is_trivially_zero() {
                return r;
            }
        }
    }

    /// Sometimes-complex constant.
    pub fn gaussian(&mut self) -> Scalar {
        let re = self.rational();
        if self.rng.gen_bool(0.3) {
            &re + &(&Scalar::i() * &self.rational())
        } else {
            re
        }
    }

    /// Random polynomial with up to `terms` monomials of degree ≤ `max_deg`.
    pub fn polynomial(&mut self, symbols: &[&str], max_deg: u32, terms: usize) -> Scalar {
        let mut out = Scalar::zero();
        let n = self.rng.gen_range(1..=terms);
        for _ in 0..n {
            let mut t = self.gaussian();
            let deg = self.rng.gen_range(0..=max_deg);
            for _ in 0..deg {
                let s = symbols.choose(&mut self.rng).expect("symbols");
                t = &t * &Scalar::var(s);
            }
            out = &out + &t;
        }
        out
    }

    /// Random rational function; the denominator is a nonzero polynomial.
    pub fn rational_function(&mut self, symbols: &[&str]) -> Scalar {
        let num = self.polynomial(symbols, 2, 3);
        if self.coin() {
            return num;
        }
        loop {
            let den = self.polynomial(symbols, 1, 2);
            if !den.is_trivially_zero() {
                return num.try_div(&den).expect("nonzero denominator");
            }
        }
    }

    pub fn form(&mut self, frame: &Arc<FrameSpace>, degree: usize, symbols: &[&str]) -> Form {
        let names: Vec<String> = frame.basis_names().iter().map(|s| s.to_string()).collect();
        let mut out = Form::zero(frame, degree);
        for _ in 0..self.rng.gen_range(1..=3) {
            let mut picked: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            picked.shuffle(&mut self.rng);
            picked.truncate(degree);
            let c = self.polynomial(symbols, 2, 2);
            let term = Form::from_components(frame, degree, &[(picked.as_slice(), c)]).expect("valid term");
            out = &out + &term;
        }
        out
    }

    /// Coefficient functions for [`coordinate_structure`]: polynomials in
    /// `t, u, v`, with a symbolic constant `k` when `symbolic` is set.
    pub fn coordinate_data(&mut self, symbolic: bool) -> (Scalar, Scalar) {
        let mut syms = vec!["t", "u", "v"];
        if symbolic {
            syms.push("k");
        }
        let b = self.polynomial(&syms, 2, 2);
        let c = self.polynomial(&syms, 1, 2);
        (b, c)
    }

    pub fn coordinate_structure(&mut self, symbolic: bool) -> PseudoFlagStructure {
        let (b, c) = self.coordinate_data(symbolic);
        coordinate_structure(&b, &c).expect("coordinate structures are always valid")
    }
}

/// Coefficient symbols available on lifted coordinate frames.
pub const COORDINATE_SYMBOLS: [&str; 5] = ["t", "u", "v", "a", "k"];
