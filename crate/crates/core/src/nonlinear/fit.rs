use serde::{Deserialize, Serialize};

use super::{NonlinearError, TimeJet};

/// Jets entering a fit must reach at least this order.
pub const MIN_FIT_ORDER: usize = 8;

/// `ln‖∂_t^n(t^n u)‖_∞ - [(n-1/2) ln N + (n-2/3) ln n]` at one base time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DzMargin {
    pub base_time: f64,
    pub n: usize,
    #[serde(with = "crate::serde_ext::extended_f64")]
    pub log_norm: f64,
    #[serde(with = "crate::serde_ext::extended_f64")]
    pub margin: f64,
}

/// Smallest `N ≥ 1` with `‖∂_t^n(t^n u)‖_∞ ≤ N^{n-1/2} n^{n-2/3}` for
/// `1 ≤ n ≤ n_max` over every supplied jet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DzFit {
    #[serde(rename = "fitted_N")]
    pub fitted_n: f64,
    pub n_max: usize,
    pub margins: Vec<DzMargin>,
    /// Every weighted norm vanished; `fitted_N` is then 1.
    pub degenerate: bool,
}

pub fn dz_fit(jets: &[TimeJet]) -> Result<DzFit, NonlinearError> {
    if jets.is_empty() {
        return Err(NonlinearError::InvalidArgument("no jets to fit".into()));
    }
    let n_max = jets.iter().map(TimeJet::order).min().expect("nonempty");
    if n_max < MIN_FIT_ORDER {
        return Err(NonlinearError::InvalidArgument(format!("jets reach order {n_max}, fit needs {MIN_FIT_ORDER}")));
    }
    let mut ln_n = 0.0f64;
    let mut degenerate = true;
    for jet in jets {
        for n in 1..=n_max {
            let w = jet.weighted_norms[n];
            if w > 0.0 {
                degenerate = false;
                let nf = n as f64;
                ln_n = ln_n.max((w.ln() - (nf - 2.0 / 3.0) * nf.ln()) / (nf - 0.5));
            }
        }
    }
    let margins = jets
        .iter()
        .flat_map(|jet| {
            (1..=n_max).map(move |n| {
                let nf = n as f64;
                let log_norm = jet.weighted_norms[n].ln();
                DzMargin {
                    base_time: jet.base_time,
                    n,
                    log_norm,
                    margin: log_norm - ((nf - 0.5) * ln_n + (nf - 2.0 / 3.0) * nf.ln()),
                }
            })
        })
        .collect();
    Ok(DzFit { fitted_n: ln_n.exp(), n_max, margins, degenerate })
}

impl DzFit {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("base_time,n,log_norm,margin\n");
        for m in &self.margins {
            out.push_str(&format!("{},{},{},{}\n", m.base_time, m.n, m.log_norm, m.margin));
        }
        out
    }
}
