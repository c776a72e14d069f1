//! Exact identity suite (randomized `tri2_rhs` vs the Leibniz oracle and the
//! equal-factor specialisations) and the weighted multinomial sum scan.

use chronolens_core::exact::{leibniz_oracle, power_specialization_check, tri2_rhs, tri_sum, ExactPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::report::{cell, Metrics, Outcome};
use crate::svg::{Plot, Series, Style};
use crate::CliError;

pub const NAME: &str = "identities";

#[derive(Debug, Clone, Default, Serialize, clap::Args)]
pub struct Flags {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cases: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tri_n_max: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub n_max: u32,
    pub k_max: u32,
    pub max_degree: u32,
    pub coeff_bound: i64,
    /// Randomized cases; case `i` draws from seed `seed + i`.
    pub cases: u64,
    pub power_degree: u32,
    pub tri_n_max: u32,
    pub tri_k: Vec<u32>,
    /// Boundary between the reference and the tail portion of the scan.
    pub tri_split: u32,
    pub tri_growth_limit: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            n_max: 6,
            k_max: 4,
            max_degree: 3,
            coeff_bound: 4,
            cases: 200,
            power_degree: 2,
            tri_n_max: 30,
            tri_k: vec![2, 3, 4],
            tri_split: 10,
            tri_growth_limit: 10.0,
        }
    }
}

fn random_poly(rng: &mut ChaCha8Rng, max_degree: u32, bound: i64) -> ExactPoly {
    let deg = rng.random_range(0..=max_degree);
    let c: Vec<i64> = (0..=deg).map(|_| rng.random_range(-bound..=bound)).collect();
    ExactPoly::from_ints(&c)
}

fn validate(p: &Params) -> Result<(), CliError> {
    if p.k_max == 0 || p.n_max > 12 || p.k_max > 6 || p.max_degree > 6 || p.power_degree > 4 {
        return Err(CliError::config(
            "identities: need 1 <= k_max <= 6, n_max <= 12, max_degree <= 6, power_degree <= 4",
        ));
    }
    if p.coeff_bound < 1 {
        return Err(CliError::config("identities: coeff_bound must be >= 1"));
    }
    if p.tri_k.is_empty() || p.tri_k.iter().any(|&k| !(2..=6).contains(&k)) {
        return Err(CliError::config("identities: tri_k entries must lie in 2..=6"));
    }
    if !(2..=60).contains(&p.tri_n_max) || p.tri_split < 2 || p.tri_split >= p.tri_n_max {
        return Err(CliError::config("identities: need 2 <= tri_split < tri_n_max <= 60"));
    }
    Ok(())
}

pub fn run(p: &Params, seed: u64) -> Result<Outcome, CliError> {
    validate(p)?;
    let mut m = Metrics::new();

    let mut mismatches = Vec::new();
    for i in 0..p.cases {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i));
        let n = rng.random_range(0..=p.n_max);
        let k = rng.random_range(1..=p.k_max);
        let factors: Vec<ExactPoly> = (0..k).map(|_| random_poly(&mut rng, p.max_degree, p.coeff_bound)).collect();
        let lhs = tri2_rhs(n, &factors).map_err(CliError::config)?;
        let rhs = leibniz_oracle(n, &factors).map_err(CliError::config)?;
        if lhs != rhs {
            mismatches.push(i);
        }
    }
    m.set("tri2_cases", p.cases);
    m.set("tri2_mismatched_cases", mismatches.clone());
    m.require("tri2_matches_oracle", mismatches.is_empty());

    let mut power_failures = Vec::new();
    let mut power_checks = 0u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(p.cases));
    for n in 0..=p.n_max {
        for k in 1..=p.k_max {
            let h = random_poly(&mut rng, p.power_degree, p.coeff_bound);
            power_checks += 1;
            if !power_specialization_check(n, k, &h) {
                power_failures.push(format!("n={n},k={k},h={h}"));
            }
        }
    }
    m.set("power_checks", power_checks);
    m.set("power_failures", power_failures.clone());
    m.require("power_specialization_holds", power_failures.is_empty());

    let mut csv = String::from("k,n,sum,bound_ratio\n");
    let mut plot = Plot::new("Weighted multinomial sum / n^(n-2/3)", "n", "bound ratio");
    let (mut small, mut large) = (0.0f64, 0.0f64);
    for &k in &p.tri_k {
        let mut pts = Vec::new();
        for n in 2..=p.tri_n_max {
            let r = tri_sum(n, k).map_err(CliError::config)?;
            csv.push_str(&format!("{k},{n},{},{}\n", cell(r.sum), cell(r.bound_ratio)));
            pts.push((n as f64, r.bound_ratio));
            if n <= p.tri_split {
                small = small.max(r.bound_ratio);
            } else {
                large = large.max(r.bound_ratio);
            }
        }
        plot = plot.with(Series::new(format!("k = {k}"), pts, Style::Line));
    }
    m.num("tri_max_ratio_reference", small);
    m.num("tri_max_ratio_tail", large);
    m.num("tri_max_ratio", small.max(large));
    m.require("tri_ratio_bounded", small.is_finite() && large.is_finite() && large <= p.tri_growth_limit * small);

    let mut out = Outcome::new(NAME, seed, p, m);
    out.csv.push(("tri_sum.csv".into(), csv));
    out.plots.push(("tri_bound_ratio.svg".into(), plot));
    Ok(out)
}
