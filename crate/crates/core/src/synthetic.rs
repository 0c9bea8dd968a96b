//! Seeded synthetic domains and catalogs.
//!
//! Generated domains satisfy `|A^q| < I^q`, so `mu0 < 0` and `eta0 > 0`, and
//! all three sector energies are at most -5 so relative errors stay meaningful.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::simplex::DomainSpec;
use crate::species::{Energies, SpeciesRecord};

/// Deterministic generator for seed `seed` and independent stream `stream`.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `e_neutral` in [-100, -20], `I^q` in [1, 15], `A^q` in [-0.8, 0.8] I^q.
pub fn random_domain(rng: &mut impl Rng, label: impl Into<String>) -> DomainSpec {
    let q = rng.random_range(1..=3u32);
    let n_electrons = rng.random_range(q..=q + 60);
    let e_neutral = rng.random_range(-100.0..=-20.0);
    let i_q = rng.random_range(1.0..=15.0);
    let a_q = i_q * rng.random_range(-0.8..=0.8);
    DomainSpec::new(label, n_electrons, q, e_neutral, e_neutral - a_q, e_neutral + i_q)
        .expect("synthetic ranges give a valid domain")
}

pub fn synthetic_domains(count: usize, seed: u64) -> Vec<DomainSpec> {
    let mut rng = rng(seed, 0);
    (0..count)
        .map(|i| random_domain(&mut rng, format!("synthetic-{i:04}")))
        .collect()
}

const LABEL_CHARS: &[char] = &[
    'a', 'b', 'C', 'O', 'H', 'N', '-', '_', ' ', ',', '"', '\'', 'Ω', 'Δ', 'γ', 'ñ', '水', '🧪', '=',
];

fn random_f64(rng: &mut impl Rng) -> f64 {
    match rng.random_range(0..4) {
        0 => rng.random_range(-1000.0..1000.0),
        1 => f64::from(rng.random_range(-500i32..500)),
        2 => rng.random_range(-1.0..1.0) * 10f64.powi(rng.random_range(-12..12)),
        _ => loop {
            let v = f64::from_bits(rng.random());
            if v.is_finite() {
                break v;
            }
        },
    }
}

/// Records with arbitrary (not necessarily physical) content, unique labels
/// and both energy modes; used for I/O round-trip checks.
pub fn random_catalog(rng: &mut impl Rng, max_len: usize) -> Vec<SpeciesRecord> {
    let len = rng.random_range(0..=max_len);
    (0..len)
        .map(|i| {
            let stem: String = (0..rng.random_range(0..6))
                .map(|_| LABEL_CHARS[rng.random_range(0..LABEL_CHARS.len())])
                .collect();
            let energies = if rng.random_bool(0.5) {
                Energies::Absolute {
                    e_neutral: random_f64(rng),
                    e_anion: random_f64(rng),
                    e_cation: random_f64(rng),
                }
            } else {
                Energies::Descriptor {
                    e_neutral: random_f64(rng),
                    i_q: random_f64(rng),
                    a_q: random_f64(rng),
                }
            };
            SpeciesRecord {
                label: format!("{stem}#{i}"),
                n_electrons: rng.random_range(0..200),
                q: rng.random_range(0..5),
                energies,
                units: ["eV", "Eh", "kcal/mol", "kJ/mol"][rng.random_range(0..4)].to_string(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptors::descriptor_set;

    #[test]
    fn synthetic_domains_are_convex_and_deterministic() {
        let a = synthetic_domains(200, 7);
        assert_eq!(a, synthetic_domains(200, 7));
        assert_ne!(a, synthetic_domains(200, 8));
        for d in &a {
            let (set, warning) = descriptor_set(d);
            assert!(warning.is_none());
            assert!(set.mu0 < 0.0 && set.eta0 > 0.0);
        }
    }
}
