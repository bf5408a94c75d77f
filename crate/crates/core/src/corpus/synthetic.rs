use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::{Continent, Corpus, CorpusError, Gender, Publication, Researcher};

/// Parameters of the synthetic corpus model.
///
/// Every publication draws a latent yearly citation rate from a two-component
/// mixture (ordinary vs. high-impact); yearly increments are Poisson with that
/// rate. Each researcher has a personal high-impact share jittered around
/// `high_impact_share`, so AMT varies across the cohort. The first `awardees`
/// researchers use `awardee_high_impact_share` instead and receive one award
/// year in the second half of their career.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub researchers: usize,
    pub awardees: usize,
    pub reference_year: i32,
    pub career_start_min: i32,
    pub career_start_max: i32,
    pub publications_per_year: f64,
    pub core_probability: f64,
    pub high_impact_share: f64,
    pub awardee_high_impact_share: f64,
    pub ordinary_rate: f64,
    pub high_impact_rate: f64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            researchers: 100,
            awardees: 0,
            reference_year: 2023,
            career_start_min: 1985,
            career_start_max: 2015,
            publications_per_year: 2.2,
            core_probability: 0.8,
            high_impact_share: 0.12,
            awardee_high_impact_share: 0.3,
            ordinary_rate: 1.5,
            high_impact_rate: 7.0,
        }
    }
}

impl SyntheticConfig {
    pub fn validate(&self) -> Result<(), CorpusError> {
        let bad = |m: String| Err(CorpusError::InvalidConfig(m));
        if self.researchers == 0 {
            return bad("researchers must be positive".into());
        }
        if self.awardees > self.researchers {
            return bad(format!(
                "awardees ({}) exceeds researchers ({})",
                self.awardees, self.researchers
            ));
        }
        if self.career_start_min < super::MIN_PUBLICATION_YEAR
            || self.career_start_min > self.career_start_max
            || self.career_start_max > self.reference_year
        {
            return bad(format!(
                "career start range [{}, {}] must be ordered, start at or after {} and end by reference year {}",
                self.career_start_min,
                self.career_start_max,
                super::MIN_PUBLICATION_YEAR,
                self.reference_year
            ));
        }
        if !(self.publications_per_year.is_finite() && self.publications_per_year > 0.0) {
            return bad("publications_per_year must be finite and positive".into());
        }
        for (name, v) in [
            ("core_probability", self.core_probability),
            ("high_impact_share", self.high_impact_share),
            ("awardee_high_impact_share", self.awardee_high_impact_share),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} must lie in [0, 1], got {v}"));
            }
        }
        for (name, v) in [
            ("ordinary_rate", self.ordinary_rate),
            ("high_impact_rate", self.high_impact_rate),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return bad(format!("{name} must be finite and non-negative, got {v}"));
            }
        }
        Ok(())
    }
}

const GENDER_CDF: [(f64, Gender); 3] = [(0.881, Gender::Male), (0.987, Gender::Female), (1.0, Gender::Unknown)];

const CONTINENT_CDF: [(f64, Continent); 6] = [
    (0.471, Continent::Europe),
    (0.759, Continent::NorthAmerica),
    (0.891, Continent::Asia),
    (0.938, Continent::Africa),
    (0.963, Continent::Oceania),
    (1.0, Continent::OtherUnknown),
];

fn pick<T: Copy>(rng: &mut ChaCha8Rng, cdf: &[(f64, T)]) -> T {
    let u: f64 = rng.random();
    cdf.iter()
        .find(|(c, _)| u < *c)
        .map(|&(_, v)| v)
        .unwrap_or(cdf[cdf.len() - 1].1)
}

fn poisson(rng: &mut ChaCha8Rng, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    // mean is finite and positive here, so construction cannot fail
    let d = Poisson::new(mean).expect("valid Poisson mean");
    d.sample(rng) as u64
}

/// Deterministic synthetic corpus for a `(config, seed)` pair.
pub fn generate_synthetic(config: &SyntheticConfig, seed: u64) -> Result<Corpus, CorpusError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = config.researchers.to_string().len().max(5);
    let ref_year = config.reference_year;

    let mut researchers = Vec::with_capacity(config.researchers);
    for i in 0..config.researchers {
        let id = format!("R{:0width$}", i + 1);
        let awardee = i < config.awardees;
        let gender = pick(&mut rng, &GENDER_CDF);
        let continent = pick(&mut rng, &CONTINENT_CDF);
        let start = rng.random_range(config.career_start_min..=config.career_start_max);
        let active_years = (ref_year - start + 1) as f64;
        let n_pubs = poisson(&mut rng, config.publications_per_year * active_years).max(1);

        let base_share = if awardee {
            config.awardee_high_impact_share
        } else {
            config.high_impact_share
        };
        let share = (base_share * rng.random_range(0.5..1.5)).clamp(0.0, 1.0);

        let mut publications = Vec::with_capacity(n_pubs as usize);
        for k in 0..n_pubs {
            let year = if k == 0 {
                start
            } else {
                rng.random_range(start..=ref_year)
            };
            let high = rng.random::<f64>() < share;
            let component = if high {
                config.high_impact_rate
            } else {
                config.ordinary_rate
            };
            let rate = component * rng.random_range(0.5..1.5);
            let is_field_core = rng.random::<f64>() < config.core_probability;
            let len = (ref_year - year + 1) as usize;
            let mut total = 0u64;
            let citation_series = (0..len)
                .map(|_| {
                    total += poisson(&mut rng, rate);
                    total
                })
                .collect();
            publications.push(Publication {
                pub_id: format!("{id}-P{:03}", k + 1),
                year,
                is_field_core,
                citation_series,
            });
        }
        publications.sort_by(|a, b| a.year.cmp(&b.year).then_with(|| a.pub_id.cmp(&b.pub_id)));

        let award_years = if awardee {
            let earliest = start + (ref_year - start) / 2;
            vec![rng.random_range(earliest..=ref_year)]
        } else {
            Vec::new()
        };

        researchers.push(Researcher {
            name: format!("Researcher {}", i + 1),
            researcher_id: id,
            gender,
            continent,
            award_years,
            publications,
        });
    }
    Corpus::new(researchers, ref_year)
}
