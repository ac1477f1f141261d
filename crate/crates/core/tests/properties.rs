//! Randomized invariants of the parsing, simulation, and phase-arithmetic
//! layers.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use molpea_core::integrals::IntegralTable;
use molpea_core::pea::{self, PeaConfig, PeaMode};
use molpea_core::simulator::{DenseUnitary, StateVector};

fn arb_phase() -> impl Strategy<Value = f64> {
    (0.0f64..1.0).prop_map(|x| x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// One-qubit gates and Fourier transforms preserve the state norm.
    #[test]
    fn gates_preserve_norm(
        theta in 0.0f64..(2.0 * PI),
        lambda in 0.0f64..(2.0 * PI),
        amps in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8),
        qubit in 0usize..3,
    ) {
        let mut raw: Vec<Complex64> =
            amps.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        let norm: f64 = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-6);
        for z in &mut raw {
            *z /= norm;
        }
        let mut state = StateVector::from_amplitudes(3, raw).unwrap();
        // Product of two rotations: Rz(lambda)·(cosθ, −sinθ; sinθ, cosθ).
        let (c, s) = (theta.cos(), theta.sin());
        let p = Complex64::from_polar(1.0, lambda);
        let gate = [
            [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
            [p * s, p * c],
        ];
        state.apply_one_qubit_gate(qubit, &gate).unwrap();
        prop_assert!((state.norm() - 1.0).abs() < 1e-10);
        state.inverse_qft(0..3).unwrap();
        prop_assert!((state.norm() - 1.0).abs() < 1e-10);
    }

    /// FCIDUMP serialization round-trips random integral tables.
    #[test]
    fn fcidump_round_trip(
        ones in proptest::collection::vec(-2.0f64..2.0, 6),
        twos in proptest::collection::vec(-2.0f64..2.0, 81),
        core in -10.0f64..10.0,
    ) {
        let norb = 3;
        let mut t = IntegralTable::empty(norb, 2, 0);
        t.set_core_energy(core);
        let mut it = ones.iter();
        for p in 0..norb {
            for q in 0..=p {
                t.set_one(p, q, *it.next().unwrap());
            }
        }
        let mut it = twos.iter();
        for p in 0..norb {
            for q in 0..norb {
                for r in 0..norb {
                    for s in 0..norb {
                        t.set_two(p, q, r, s, *it.next().unwrap());
                    }
                }
            }
        }
        let text = t.to_fcidump_string();
        let back = IntegralTable::parse_fcidump(&text).unwrap();
        prop_assert_eq!(back.norb(), norb);
        prop_assert!((back.core_energy() - t.core_energy()).abs() < 1e-12);
        for p in 0..norb {
            for q in 0..norb {
                prop_assert!((back.one(p, q) - t.one(p, q)).abs() < 1e-12);
                for r in 0..norb {
                    for s in 0..norb {
                        prop_assert!((back.two(p, q, r, s) - t.two(p, q, r, s)).abs() < 1e-12);
                    }
                }
            }
        }
    }

    /// Shift-and-square maps an eigenphase theta to 2(theta − shift) mod 1.
    #[test]
    fn shift_and_square_phase_arithmetic(theta in arb_phase(), shift in arb_phase()) {
        let v = DenseUnitary::phase(2, 2.0 * PI * theta);
        let w = pea::shift_and_square(&v, shift);
        let expected = (2.0 * (theta - shift)).rem_euclid(1.0);
        let got = (w.matrix()[[0, 0]].arg() / (2.0 * PI)).rem_euclid(1.0);
        let diff = (got - expected).rem_euclid(1.0);
        prop_assert!(diff.min(1.0 - diff) < 1e-9);
    }

    /// The read-out kernel is a probability distribution that concentrates
    /// at least 4/pi^2 of its mass on the nearest grid point.
    #[test]
    fn fourier_kernel_is_distribution(phi in arb_phase(), m in 4usize..8) {
        let kernel = pea::fourier_kernel(phi, m);
        let total: f64 = kernel.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        let grid = 1usize << m;
        let nearest = ((phi * grid as f64).round() as usize) % grid;
        prop_assert!(kernel[nearest] >= 4.0 / (PI * PI) - 1e-9);
    }

    /// Recursive PEA recovers any phase expressible in the available bits
    /// exactly, and its binary digits match phi_binary_digits.
    #[test]
    fn recursion_recovers_dyadic_phases(n in 0u64..(1 << 12), refinements in 8usize..14) {
        let phi_star = n as f64 / (1u64 << 12) as f64;
        let u = DenseUnitary::phase(2, 2.0 * PI * phi_star);
        let initial = StateVector::basis_state(1, 0).unwrap();
        let cfg = PeaConfig {
            readout_bits: 4,
            iterations: refinements + 1,
            tau: -1.0,
            reference_energy: -1.0,
            mode: PeaMode::Argmax,
            target_state: Some(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]),
        };
        let trace = pea::recursive_pea(&u, &initial, &cfg).unwrap();
        let diff = (trace.phi - phi_star).rem_euclid(1.0);
        prop_assert!(diff.min(1.0 - diff) < 1e-12);
        prop_assert_eq!(
            pea::phi_binary_digits(trace.phi, 12),
            pea::phi_binary_digits(phi_star, 12)
        );
    }
}
