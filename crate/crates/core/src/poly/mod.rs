//! Exact integer polynomials: sparse bivariate and dense univariate.

mod bivar;
mod univar;

pub use bivar::{BivarPoly, ModPoly};
pub use univar::UnivarPoly;

use num_bigint::BigInt;
use num_traits::{One, Signed};

pub(crate) fn monomial_text(factors: &[(&str, u32)]) -> String {
    factors
        .iter()
        .filter(|(_, e)| *e > 0)
        .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

pub(crate) fn render_terms<I: IntoIterator<Item = (BigInt, String)>>(terms: I) -> String {
    let mut out = String::new();
    for (c, mono) in terms {
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        match (mono.is_empty(), mag.is_one()) {
            (true, _) => out.push_str(&mag.to_string()),
            (false, true) => out.push_str(&mono),
            (false, false) => {
                out.push_str(&mag.to_string());
                out.push('*');
                out.push_str(&mono);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
